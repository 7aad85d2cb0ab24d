"""Constructors for every state family the protocol touches.

Two boundary channel families are supported, each parameterized by a single
quality ``r`` that coincides with the state's concurrence:

* ``mems1`` -- high-entanglement branch, r in [2/3, 1]; reaches a Bell state
  at r = 1.
* ``mems2`` -- fixed-population branch, r in [0, 2/3]; its three nonzero
  populations stay pinned at 1/3 while the coherence grows.

The families agree at the shared point r = 2/3.  A Werner mixture is
included as the classic comparison curve in the concurrence/linear-entropy
plane and as an alternative channel for the engine.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import tolerances
from .linalg import IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z, kron

TRACE_ATOL = 1e-12
_RANGE_ATOL = 1e-12

BELL_PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
BELL_PHI_MINUS = np.array([1.0, 0.0, 0.0, -1.0], dtype=complex) / np.sqrt(2.0)
BELL_PSI_PLUS = np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) / np.sqrt(2.0)
BELL_PSI_MINUS = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)

_PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Validated density matrix plus its qubit count.

    Construction enforces Hermiticity, unit trace, and positive
    semidefiniteness within the active tolerances; anything that fails is
    rejected rather than repaired.
    """

    matrix: np.ndarray
    n_qubits: int

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        tol = tolerances.current()
        dim = 1 << self.n_qubits
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (dim, dim):
            raise ValueError(f"matrix shape {m.shape} does not match {self.n_qubits} qubit(s)")
        herm_dev = float(np.max(np.abs(m - m.conj().T)))
        if herm_dev > tol.herm:
            raise ValueError(f"not Hermitian: max asymmetry {herm_dev:.3e} exceeds {tol.herm:.1e}")
        trace_dev = abs(complex(np.trace(m)) - 1.0)
        if trace_dev > TRACE_ATOL:
            raise ValueError(f"trace deviates from one by {trace_dev:.3e}")
        smallest = float(np.linalg.eigvalsh(m)[0])
        if smallest < -tol.psd:
            raise ValueError(f"negative eigenvalue {smallest:.3e} below -{tol.psd:.1e}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits


class ChannelFamily(enum.Enum):
    MEMS1 = "mems1"
    MEMS2 = "mems2"
    WERNER = "werner"


FAMILY_RANGES: dict[ChannelFamily, tuple[float, float]] = {
    ChannelFamily.MEMS1: (2.0 / 3.0, 1.0),
    ChannelFamily.MEMS2: (0.0, 2.0 / 3.0),
    ChannelFamily.WERNER: (0.0, 1.0),
}


@dataclass(frozen=True)
class ChannelSpec:
    """A channel family plus its quality parameter, range-checked."""

    family: ChannelFamily
    r: float

    def __post_init__(self) -> None:
        lo, hi = FAMILY_RANGES[self.family]
        if not (lo - _RANGE_ATOL <= self.r <= hi + _RANGE_ATOL):
            raise ValueError(f"{self.family.value} requires r in [{lo:g}, {hi:g}], got {self.r!r}")


class TargetForm(enum.Enum):
    PHI = "phi"            # even-parity pure target  a|00> + sqrt(1-a^2)|11>
    PSI = "psi"            # odd-parity pure target   a|01> + sqrt(1-a^2)|10>
    EXPLICIT = "explicit"  # caller-supplied two-qubit density operator


@dataclass(frozen=True, eq=False)
class TargetSpec:
    form: TargetForm
    c_in: float | None = None
    explicit_state: DensityOperator | None = None

    def __post_init__(self) -> None:
        if self.form is TargetForm.EXPLICIT:
            if self.explicit_state is None:
                raise ValueError("EXPLICIT target requires explicit_state")
            if self.explicit_state.n_qubits != 2:
                raise ValueError("explicit target must be a two-qubit state")
        else:
            if self.c_in is None:
                raise ValueError(f"{self.form.value} target requires c_in")
            if not 0.0 <= self.c_in <= 1.0:
                raise ValueError(f"c_in must lie in [0, 1], got {self.c_in!r}")


def alpha_from_concurrence(c_in: float) -> float:
    """Larger Schmidt amplitude of a pure two-qubit state with concurrence ``c_in``.

    Always lands in [1/sqrt(2), 1]; both amplitude signs give the same
    concurrence, so the positive branch is fixed by convention.
    """
    if not 0.0 <= c_in <= 1.0:
        raise ValueError(f"c_in must lie in [0, 1], got {c_in!r}")
    return float(np.sqrt((1.0 + np.sqrt(1.0 - c_in * c_in)) / 2.0))


def make_mems(spec: ChannelSpec) -> DensityOperator:
    """Boundary-family channel state; its concurrence equals ``spec.r``."""
    r = float(spec.r)
    if spec.family is ChannelFamily.MEMS1:
        m = np.array(
            [
                [r / 2.0, 0.0, 0.0, r / 2.0],
                [0.0, 1.0 - r, 0.0, 0.0],
                [0.0, 0.0, 0.0, 0.0],
                [r / 2.0, 0.0, 0.0, r / 2.0],
            ],
            dtype=complex,
        )
    elif spec.family is ChannelFamily.MEMS2:
        third = 1.0 / 3.0
        m = np.array(
            [
                [third, 0.0, 0.0, r / 2.0],
                [0.0, third, 0.0, 0.0],
                [0.0, 0.0, 0.0, 0.0],
                [r / 2.0, 0.0, 0.0, third],
            ],
            dtype=complex,
        )
    else:
        raise ValueError("make_mems accepts the mems1/mems2 families only")
    return DensityOperator(m, 2)


def make_werner(p: float) -> DensityOperator:
    """Werner mixture p |Psi-><Psi-| + (1 - p) I/4."""
    if not 0.0 - _RANGE_ATOL <= p <= 1.0 + _RANGE_ATOL:
        raise ValueError(f"werner weight must lie in [0, 1], got {p!r}")
    proj = np.outer(BELL_PSI_MINUS, BELL_PSI_MINUS.conj())
    return DensityOperator(p * proj + (1.0 - p) * np.eye(4, dtype=complex) / 4.0, 2)


def channel_state(spec: ChannelSpec) -> DensityOperator:
    """Density operator for any channel family, Werner included."""
    if spec.family is ChannelFamily.WERNER:
        return make_werner(spec.r)
    return make_mems(spec)


def target_vector(spec: TargetSpec) -> np.ndarray:
    """State vector of a PHI- or PSI-form target."""
    if spec.form is TargetForm.EXPLICIT:
        raise ValueError("explicit targets carry a density operator, not a vector")
    a = alpha_from_concurrence(float(spec.c_in))
    b = float(np.sqrt(max(0.0, 1.0 - a * a)))
    v = np.zeros(4, dtype=complex)
    if spec.form is TargetForm.PHI:
        v[0], v[3] = a, b
    else:
        v[1], v[2] = a, b
    return v


def make_target(spec: TargetSpec) -> DensityOperator:
    """Density operator of the input state to be teleported."""
    if spec.form is TargetForm.EXPLICIT:
        return spec.explicit_state
    v = target_vector(spec)
    return DensityOperator(np.outer(v, v.conj()), 2)


@dataclass(frozen=True, eq=False)
class BlochDecomposition:
    """Pauli expansion coefficients of a two-qubit state.

    ``beta`` and ``gamma`` are the local vectors of the first and second
    qubit; ``chi`` is the 3x3 correlation matrix.
    """

    beta: np.ndarray
    gamma: np.ndarray
    chi: np.ndarray

    def __post_init__(self) -> None:
        beta = np.asarray(self.beta, dtype=float)
        gamma = np.asarray(self.gamma, dtype=float)
        chi = np.asarray(self.chi, dtype=float)
        if beta.shape != (3,) or gamma.shape != (3,) or chi.shape != (3, 3):
            raise ValueError("expected beta (3,), gamma (3,), chi (3, 3)")
        slack = 1e-9
        if np.linalg.norm(beta) > 1.0 + slack or np.linalg.norm(gamma) > 1.0 + slack:
            raise ValueError("local Bloch vectors must have norm at most 1")
        if float(np.max(np.abs(chi))) > 1.0 + slack:
            raise ValueError("correlation entries must lie in [-1, 1]")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "chi", chi)


def bloch_decompose(rho: DensityOperator) -> BlochDecomposition:
    """Expansion coefficients beta_k = Tr(rho sigma_k x 1), etc."""
    if rho.n_qubits != 2:
        raise ValueError("Bloch decomposition implemented for two qubits only")
    m = rho.matrix
    beta = np.array([np.trace(m @ kron(s, IDENTITY_2)).real for s in _PAULIS])
    gamma = np.array([np.trace(m @ kron(IDENTITY_2, s)).real for s in _PAULIS])
    chi = np.array([[np.trace(m @ kron(s, t)).real for t in _PAULIS] for s in _PAULIS])
    return BlochDecomposition(beta, gamma, chi)


def bloch_assemble(decomposition: BlochDecomposition) -> DensityOperator:
    """Rebuild the two-qubit state from its Pauli expansion."""
    m = np.eye(4, dtype=complex)
    for k, s in enumerate(_PAULIS):
        m = m + decomposition.beta[k] * kron(s, IDENTITY_2)
        m = m + decomposition.gamma[k] * kron(IDENTITY_2, s)
        for l, t in enumerate(_PAULIS):
            m = m + decomposition.chi[k, l] * kron(s, t)
    return DensityOperator(m / 4.0, 2)


def family_curve(family: ChannelFamily, r: float) -> tuple[float, float]:
    """Parametric (concurrence, linear entropy) point of a channel family."""
    ChannelSpec(family, r)  # range check
    if family is ChannelFamily.MEMS1:
        return float(r), 8.0 * r * (1.0 - r) / 3.0
    if family is ChannelFamily.MEMS2:
        return float(r), 8.0 / 9.0 - 2.0 * r * r / 3.0
    return max(0.0, (3.0 * r - 1.0) / 2.0), 1.0 - r * r


def boundary_concurrence(linear_entropy: float) -> float:
    """Largest concurrence any two-qubit state of the given mixedness reaches.

    Inverts the two boundary families piecewise: the high-entanglement branch
    covers linear entropies up to 16/27, the fixed-population branch carries
    on to 8/9, and nothing is entangled beyond that.
    """
    s = float(linear_entropy)
    if not -_RANGE_ATOL <= s <= 1.0 + _RANGE_ATOL:
        raise ValueError(f"linear entropy must lie in [0, 1], got {linear_entropy!r}")
    if s <= 16.0 / 27.0:
        return float((1.0 + np.sqrt(max(0.0, 1.0 - 1.5 * s))) / 2.0)
    if s <= 8.0 / 9.0:
        return float(np.sqrt(max(0.0, 4.0 / 3.0 - 1.5 * s)))
    return 0.0


def _plane_rotation(dim: int, i: int, theta: float, psi: float, chi: float) -> np.ndarray:
    """Elementary Euler rotation in the (i, i+1) plane."""
    e = np.eye(dim, dtype=complex)
    c, s = np.cos(theta), np.sin(theta)
    e[i, i] = c * np.exp(1j * psi)
    e[i, i + 1] = s * np.exp(1j * chi)
    e[i + 1, i] = -s * np.exp(-1j * chi)
    e[i + 1, i + 1] = c * np.exp(-1j * psi)
    return e


def haar_random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary built from composite Euler-angle rotations.

    A global phase times one chain of plane rotations per column sphere
    (the classic Hurwitz-style composite parameterization; dim**2 angles in
    total, 16 for two qubits).  Phase angles are uniform on [0, 2 pi); the
    inclination of the rotation with ``depth`` components below it is drawn
    as arcsin(xi ** (1 / (2 depth))) with xi uniform on [0, 1], which is what
    turns "merely unitary" into Haar-distributed.  Angles are consumed from
    ``rng`` in a fixed documented order (chain by chain, inclination first),
    so draws are reproducible for a given generator state.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    u = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)) * np.eye(dim, dtype=complex)
    for top in range(dim - 1):
        g = np.eye(dim, dtype=complex)
        for k in range(top, dim - 1):
            depth = dim - 1 - k
            theta = float(np.arcsin(rng.uniform(0.0, 1.0) ** (1.0 / (2.0 * depth))))
            psi = float(rng.uniform(0.0, 2.0 * np.pi))
            chi = float(rng.uniform(0.0, 2.0 * np.pi)) if k == dim - 2 else 0.0
            g = _plane_rotation(dim, k, theta, psi, chi) @ g
        u = u @ g
    return u


def simplex_weights(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the probability simplex via sorted uniform spacings."""
    if dim < 1:
        raise ValueError("dim must be positive")
    cuts = np.sort(rng.uniform(0.0, 1.0, size=dim - 1))
    return np.diff(np.concatenate(([0.0], cuts, [1.0])))


def _draw_density(rng: np.random.Generator, n_qubits: int) -> DensityOperator:
    dim = 1 << n_qubits
    u = haar_random_unitary(dim, rng)
    w = simplex_weights(dim, rng)
    return DensityOperator((u * w) @ u.conj().T, n_qubits)


def random_density(rng_seed: int, n_qubits: int) -> DensityOperator:
    """Seeded random mixed state U diag(w) U^dagger.

    The unitary is Haar via :func:`haar_random_unitary`; the spectrum ``w``
    is uniform on the probability simplex.  Deterministic per seed.
    """
    return _draw_density(np.random.default_rng(rng_seed), n_qubits)


def random_density_sequence(rng_seed: int, n_qubits: int, count: int) -> list[DensityOperator]:
    """``count`` draws from a single seeded stream.

    Element 0 coincides with ``random_density(rng_seed, n_qubits)``.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    rng = np.random.default_rng(rng_seed)
    return [_draw_density(rng, n_qubits) for _ in range(count)]
