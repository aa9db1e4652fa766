"""Dense complex linear algebra for small tensor-product Hilbert spaces.

States, operators and measurement settings are thin frozen wrappers around
numpy arrays that validate their defining invariants on construction and are
immutable afterwards, so every operation here is a pure function and safe to
call concurrently.

Index convention: subsystem 0 is the slowest-varying tensor index.  For
``dims = (2, 2)`` the amplitude order is |00>, |01>, |10>, |11>.  Global
phases are never normalized away; state comparisons go through
:func:`fidelity`, which is phase-insensitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Tolerances: 1e-12 for algebraic identities, 1e-10 for eigenvalue
# positivity and projector idempotency (double precision, dim <= 16).
ATOL = 1e-12
PSD_ATOL = 1e-10
PROJECTOR_ATOL = 1e-10

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = np.stack([PAULI_X, PAULI_Y, PAULI_Z])
IDENTITY_2 = np.eye(2, dtype=complex)


def _as_complex_vector(values) -> np.ndarray:
    arr = np.asarray(values, dtype=complex).reshape(-1)
    arr.setflags(write=False)
    return arr


def _as_complex_matrix(values) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    """Pure state on a tensor product of finite-dimensional subsystems."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", _as_complex_vector(self.amplitudes))
        if any(d < 2 for d in dims):
            raise ValueError(f"subsystem dimensions must all be >= 2, got {dims}")
        expected = math.prod(dims) if dims else 1
        if self.amplitudes.size != expected:
            raise ValueError(
                f"amplitude length {self.amplitudes.size} does not match "
                f"prod(dims) = {expected}"
            )
        norm_sq = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm_sq - 1.0) > ATOL:
            raise ValueError(f"state is not normalized: |psi|^2 = {norm_sq!r}")

    @property
    def subsystem_count(self) -> int:
        return len(self.dims)

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", _as_complex_matrix(self.matrix))
        expected = math.prod(dims) if dims else 1
        if self.matrix.shape[0] != expected:
            raise ValueError(
                f"matrix dimension {self.matrix.shape[0]} does not match "
                f"prod(dims) = {expected}"
            )
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > ATOL:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > ATOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        eigenvalues = np.linalg.eigvalsh(m)
        if eigenvalues.min() < -PSD_ATOL:
            raise ValueError(
                f"density matrix has negative eigenvalue {eigenvalues.min()!r}"
            )


@dataclass(frozen=True)
class Observable:
    """Hermitian operator with an optional human-readable label."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_complex_matrix(self.matrix))
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > ATOL:
            raise ValueError(f"observable {self.label!r} is not Hermitian within 1e-12")


@dataclass(frozen=True)
class MeasurementSetting:
    """Unit 3-vector on the Bloch/Poincare sphere."""

    direction: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.direction, dtype=float).reshape(-1)
        if arr.size != 3:
            raise ValueError(f"setting must be a 3-vector, got size {arr.size}")
        arr.setflags(write=False)
        object.__setattr__(self, "direction", arr)
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"setting is not a unit vector: |n| = {norm!r}")

    @classmethod
    def normalized(cls, vector) -> "MeasurementSetting":
        arr = np.asarray(vector, dtype=float).reshape(-1)
        norm = np.linalg.norm(arr)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(arr / norm)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "MeasurementSetting":
        return cls.normalized(rng.normal(size=3))

    def dot(self, other: "MeasurementSetting") -> float:
        return float(self.direction @ other.direction)


def tensor(s1: StateVector, s2: StateVector) -> StateVector:
    """Tensor product of two pure states (dims concatenated)."""
    return StateVector(s1.dims + s2.dims, np.kron(s1.amplitudes, s2.amplitudes))


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Reduce ``rho`` to subsystem ``keep``, tracing out all others."""
    n = len(rho.dims)
    if not 0 <= keep < n:
        raise IndexError(f"keep index {keep} out of range for {n} subsystems")
    if n == 1:
        return rho
    others = [i for i in range(n) if i != keep]
    perm = [keep] + others
    t = rho.matrix.reshape(*rho.dims, *rho.dims)
    t = np.transpose(t, axes=perm + [n + p for p in perm])
    d_keep = rho.dims[keep]
    d_rest = math.prod(rho.dims[i] for i in others)
    t = t.reshape(d_keep, d_rest, d_keep, d_rest)
    reduced = np.einsum("arbr->ab", t)
    return DensityMatrix((d_keep,), reduced)


def measure_probability(state: StateVector, projector: Observable) -> float:
    """Born probability <psi|P|psi> for an idempotent Hermitian projector."""
    p = projector.matrix
    if p.shape[0] != state.amplitudes.size:
        raise ValueError(
            f"projector dimension {p.shape[0]} does not match state "
            f"dimension {state.amplitudes.size}"
        )
    if np.max(np.abs(p @ p - p)) > PROJECTOR_ATOL:
        raise ValueError(f"operator {projector.label!r} is not idempotent: P^2 != P")
    value = float(np.real(state.amplitudes.conj() @ (p @ state.amplitudes)))
    if value < -ATOL or value > 1.0 + ATOL:
        raise ValueError(f"Born probability {value!r} outside [0, 1] beyond slack")
    return min(max(value, 0.0), 1.0)


def spin_observable(setting: MeasurementSetting) -> Observable:
    """The +-1-valued spin observable n . sigma along ``setting``."""
    n = setting.direction
    matrix = n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z
    return Observable(matrix, label=f"n.sigma(n={n.tolist()})")


def expectation(state: StateVector, observable: Observable) -> float:
    """<psi|O|psi>, real because O is Hermitian."""
    if observable.matrix.shape[0] != state.amplitudes.size:
        raise ValueError("observable dimension does not match state dimension")
    return float(np.real(state.amplitudes.conj() @ (observable.matrix @ state.amplitudes)))


def fidelity(s1: StateVector, s2: StateVector) -> float:
    """|<s1|s2>|^2; insensitive to global phases."""
    if s1.dims != s2.dims:
        raise ValueError(f"dimension mismatch: {s1.dims} vs {s2.dims}")
    return float(np.abs(s1.amplitudes.conj() @ s2.amplitudes) ** 2)


def apply_unitary(state: StateVector, u: np.ndarray, subsystem: int | None = None) -> StateVector:
    """Apply a unitary to the whole state or to a single subsystem."""
    u = np.asarray(u, dtype=complex)
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > 1e-10:
        raise ValueError("matrix is not unitary within 1e-10")
    if subsystem is None:
        return StateVector(state.dims, u @ state.amplitudes)
    n = len(state.dims)
    if not 0 <= subsystem < n:
        raise IndexError(f"subsystem {subsystem} out of range for {n} subsystems")
    t = state.amplitudes.reshape(state.dims)
    t = np.tensordot(u, t, axes=([1], [subsystem]))
    t = np.moveaxis(t, 0, subsystem)
    return StateVector(state.dims, t.reshape(-1))


def basis_state(dims: tuple[int, ...], occupation: tuple[int, ...]) -> StateVector:
    """Computational-basis ket |occupation> on the given dims."""
    dims = tuple(int(d) for d in dims)
    if len(occupation) != len(dims):
        raise ValueError("occupation length must match number of subsystems")
    index = 0
    for d, k in zip(dims, occupation):
        if not 0 <= k < d:
            raise ValueError(f"basis index {k} out of range for dimension {d}")
        index = index * d + k
    amplitudes = np.zeros(math.prod(dims), dtype=complex)
    amplitudes[index] = 1.0
    return StateVector(dims, amplitudes)


def projector_onto(ket, label: str = "") -> Observable:
    """Rank-1 projector |ket><ket| (input need not be normalized)."""
    k = np.asarray(ket, dtype=complex).reshape(-1)
    norm = np.linalg.norm(k)
    if norm == 0.0:
        raise ValueError("cannot project onto the zero vector")
    k = k / norm
    return Observable(np.outer(k, k.conj()), label=label or "projector")


def singlet() -> StateVector:
    """The rotationally invariant two-qubit state (|01> - |10>)/sqrt(2)."""
    amplitudes = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
    return StateVector((2, 2), amplitudes)


def random_state(dims: tuple[int, ...], rng: np.random.Generator) -> StateVector:
    """Haar-like random pure state (normalized complex Gaussian vector)."""
    size = math.prod(dims)
    raw = rng.normal(size=size) + 1j * rng.normal(size=size)
    return StateVector(tuple(dims), raw / np.linalg.norm(raw))
