"""Shared numerical tolerance block.

Every validation and verification routine pulls its thresholds from here so
the whole package agrees on what counts as zero.  Values can be overridden
through ``MEMSTELEPORT_TAU_*`` environment variables; that hook exists for
forcing-failure experiments (e.g. checking that the verify command really
fails when the bar is impossible) and is not meant for routine use.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

_ENV_PREFIX = "MEMSTELEPORT_TAU_"


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-10  # largest tolerated entry of |m - m^dagger|
    imag: float = 1e-8   # largest spurious imaginary part in analytically real spectra
    psd: float = 1e-10   # most negative eigenvalue tolerated in a PSD matrix
    prob: float = 1e-12  # smallest outcome probability worth normalizing by


DEFAULTS = Tolerances()


def current() -> Tolerances:
    """Active tolerances with any environment overrides applied."""

    def read(name: str, default: float) -> float:
        raw = os.environ.get(_ENV_PREFIX + name)
        return default if raw is None else float(raw)

    return Tolerances(
        herm=read("HERM", DEFAULTS.herm),
        imag=read("IMAG", DEFAULTS.imag),
        psd=read("PSD", DEFAULTS.psd),
        prob=read("PROB", DEFAULTS.prob),
    )
