"""Evaluators and optimizers for the inequality bounds.

Covers the local-hidden-variable vs quantum polarization contradiction, the
CHSH expression and its quantum maximum (Tsirelson bound 2*sqrt(2)), the
crypto-nonlocal (Leggett) inequality and its violation scan, the
five-measurement pentagram contextuality test on a qutrit, the TLM
quantum-realizability condition for 2x2 correlator tables, and the
four-probability non-separability argument for a two-degree-of-freedom
single-particle state.

Every quantum number produced here goes through the Born rule / expectation
machinery in :mod:`qfoundry.qcore`; closed forms appear only as the bounds
themselves or as documented cross-checks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import qcore
from .qcore import MeasurementSetting, Observable, StateVector

TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
KCBS_CLASSICAL_BOUND = -3.0
KCBS_QUANTUM_VALUE = 5.0 - 4.0 * math.sqrt(5.0)


@dataclass(frozen=True)
class CorrelationRecord:
    """Two-setting-per-party correlator table c[i, j] = <A_i B_j>."""

    c: np.ndarray
    marginals_a: np.ndarray | None = None
    marginals_b: np.ndarray | None = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (2, 2):
            raise ValueError(f"expected a 2x2 correlator table, got shape {c.shape}")
        if np.max(np.abs(c)) > 1.0 + 1e-12:
            raise ValueError(f"correlators must lie in [-1, 1], got max |c| = {np.max(np.abs(c))!r}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        for name in ("marginals_a", "marginals_b"):
            m = getattr(self, name)
            if m is not None:
                m = np.asarray(m, dtype=float).reshape(-1)
                if m.size != 2 or np.max(np.abs(m)) > 1.0 + 1e-12:
                    raise ValueError(f"{name} must be two values in [-1, 1]")
                m.setflags(write=False)
                object.__setattr__(self, name, m)


def chsh_value(record: CorrelationRecord) -> float:
    """S = c00 + c01 + c10 - c11 (no clamping)."""
    c = record.c
    return float(c[0, 0] + c[0, 1] + c[1, 0] - c[1, 1])


def correlated_photon_pair() -> StateVector:
    """(|HH> + |VV>)/sqrt(2) with |H> = |0>, |V> = |1>."""
    amplitudes = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
    return StateVector((2, 2), amplitudes)


def _linear_polarizer_ket(angle: float) -> np.ndarray:
    return np.array([np.cos(angle), np.sin(angle)], dtype=complex)


def qm_same_polarization_probability(theta_rel: float) -> tuple[float, float]:
    """Born-rule outcome statistics for the correlated pair at relative angle.

    Polarizer 1 sits at 0, polarizer 2 at ``theta_rel`` (physical polarizer
    angle, radians).  Returns ``(p_same, p_both_pass)`` where p_same counts
    both-pass plus both-blocked.  Computed from joint projectors on the
    4-dimensional state, not from a formula shortcut; analytically
    p_same = cos^2(theta) and p_both_pass = cos^2(theta)/2.
    """
    state = correlated_photon_pair()
    pass_1 = qcore.projector_onto(_linear_polarizer_ket(0.0)).matrix
    pass_2 = qcore.projector_onto(_linear_polarizer_ket(float(theta_rel))).matrix
    block_1 = np.eye(2, dtype=complex) - pass_1
    block_2 = np.eye(2, dtype=complex) - pass_2
    p_both_pass = qcore.measure_probability(state, Observable(np.kron(pass_1, pass_2), "pass,pass"))
    p_both_block = qcore.measure_probability(state, Observable(np.kron(block_1, block_2), "block,block"))
    return p_both_pass + p_both_block, p_both_pass


def correlation_matrix(state: StateVector) -> np.ndarray:
    """3x3 real matrix T[i, j] = <sigma_i x sigma_j> for a two-qubit state."""
    if state.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {state.dims}")
    t = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            op = Observable(np.kron(qcore.PAULIS[i], qcore.PAULIS[j]))
            t[i, j] = qcore.expectation(state, op)
    return t


def setting_correlation(state: StateVector, a: MeasurementSetting, b: MeasurementSetting) -> float:
    """<psi| (a.sigma) x (b.sigma) |psi>."""
    op = Observable(np.kron(qcore.spin_observable(a).matrix, qcore.spin_observable(b).matrix))
    return qcore.expectation(state, op)


@dataclass(frozen=True)
class ChshOptimum:
    s_max: float
    settings_a: tuple[MeasurementSetting, MeasurementSetting]
    settings_b: tuple[MeasurementSetting, MeasurementSetting]
    record: CorrelationRecord


def _chsh_planar_frames(state: StateVector):
    """Singular frames of the correlation matrix; optima live in the top-2 planes."""
    t = correlation_matrix(state)
    u, s, vt = np.linalg.svd(t)
    return t, u, s, vt


def chsh_optimize(
    state: StateVector,
    coarse_step_deg: float = 10.0,
    refine_xatol: float = 1e-8,
) -> ChshOptimum:
    """Maximize the CHSH value over four measurement settings.

    Settings are parametrized by one angle each inside the top-2 singular
    planes of the correlation matrix (off-plane components cannot increase
    any correlator entering S).  A coarse grid over the four angles seeds a
    Nelder-Mead refinement; the returned value is re-evaluated through the
    full Born-rule machinery on the reconstructed unit vectors.
    """
    _, u, s, vt = _chsh_planar_frames(state)
    s0, s1 = float(s[0]), float(s[1])

    angles = np.deg2rad(np.arange(0.0, 360.0, float(coarse_step_deg)))
    cos_a, sin_a = np.cos(angles), np.sin(angles)
    # e[p, q] = E(alpha_p, beta_q) in the planar parametrization
    e = s0 * np.outer(cos_a, cos_a) + s1 * np.outer(sin_a, sin_a)
    s_grid = (
        e[:, None, :, None]  # (a0, b0)
        + e[:, None, None, :]  # (a0, b1)
        + e[None, :, :, None]  # (a1, b0)
        - e[None, :, None, :]  # (a1, b1)
    )
    flat_idx = int(np.argmax(s_grid))
    i0, i1, j0, j1 = np.unravel_index(flat_idx, s_grid.shape)
    x0 = np.array([angles[i0], angles[i1], angles[j0], angles[j1]])

    def planar_e(alpha: float, beta: float) -> float:
        return s0 * math.cos(alpha) * math.cos(beta) + s1 * math.sin(alpha) * math.sin(beta)

    def negative_s(x: np.ndarray) -> float:
        a0, a1, b0, b1 = x
        return -(planar_e(a0, b0) + planar_e(a0, b1) + planar_e(a1, b0) - planar_e(a1, b1))

    result = minimize(
        negative_s,
        x0,
        method="Nelder-Mead",
        options={"xatol": refine_xatol, "fatol": 1e-14, "maxiter": 20_000, "maxfev": 20_000},
    )
    a0, a1, b0, b1 = result.x

    def alice_vec(alpha: float) -> MeasurementSetting:
        return MeasurementSetting.normalized(math.cos(alpha) * u[:, 0] + math.sin(alpha) * u[:, 1])

    def bob_vec(beta: float) -> MeasurementSetting:
        return MeasurementSetting.normalized(math.cos(beta) * vt[0] + math.sin(beta) * vt[1])

    settings_a = (alice_vec(a0), alice_vec(a1))
    settings_b = (bob_vec(b0), bob_vec(b1))
    c = np.array(
        [[setting_correlation(state, ai, bj) for bj in settings_b] for ai in settings_a]
    )
    record = CorrelationRecord(np.clip(c, -1.0, 1.0))
    return ChshOptimum(chsh_value(record), settings_a, settings_b, record)


def chsh_planar_grid_value(state: StateVector, step_deg: float = 1.0) -> float:
    """Independent grid-search oracle for the CHSH maximum.

    Scans Alice's two planar angles on a dense grid and maximizes over
    Bob's settings exactly: for fixed a0, a1 the optimum is
    |T^t (a0 + a1)| + |T^t (a0 - a1)|.  Shares no code path with
    :func:`chsh_optimize` beyond the correlation matrix itself.
    """
    t, u, _, _ = _chsh_planar_frames(state)
    angles = np.deg2rad(np.arange(0.0, 360.0, float(step_deg)))
    vecs = np.outer(np.cos(angles), u[:, 0]) + np.outer(np.sin(angles), u[:, 1])
    ta = vecs @ t  # row p: T^t a(alpha_p)
    sums = np.linalg.norm(ta[:, None, :] + ta[None, :, :], axis=2)
    diffs = np.linalg.norm(ta[:, None, :] - ta[None, :, :], axis=2)
    return float(np.max(sums + diffs))


# slack for degree-to-radian rounding at the interval endpoints
_PHI_DOMAIN_ATOL = 1e-9


def leggett_bound(phi: float) -> float:
    """Crypto-nonlocal upper bound 4 - (4/pi)|sin(phi/2)| for phi in [0, pi]."""
    phi = float(phi)
    if not -_PHI_DOMAIN_ATOL <= phi <= np.pi + _PHI_DOMAIN_ATOL:
        raise ValueError(f"phi = {phi!r} outside [0, pi]")
    return 4.0 - (4.0 / np.pi) * abs(np.sin(phi / 2.0))


def leggett_quantum_value(phi: float) -> float:
    """Quantum value |2(cos(phi) + 1)| of the same two-term combination."""
    phi = float(phi)
    if not -_PHI_DOMAIN_ATOL <= phi <= np.pi + _PHI_DOMAIN_ATOL:
        raise ValueError(f"phi = {phi!r} outside [0, pi]")
    return abs(2.0 * (np.cos(phi) + 1.0))


@dataclass(frozen=True)
class LeggettScan:
    """Tabulated quantum value vs bound over a phi grid (radians)."""

    phi: np.ndarray
    s_qm: np.ndarray
    bound: np.ndarray
    violation: np.ndarray

    @property
    def argmax_phi(self) -> float:
        return float(self.phi[int(np.argmax(self.violation))])

    @property
    def max_violation(self) -> float:
        return float(np.max(self.violation))


def leggett_violation_scan(phi_values: np.ndarray) -> LeggettScan:
    """Evaluate quantum value, bound and their gap on a phi grid."""
    phi = np.asarray(phi_values, dtype=float).reshape(-1)
    if phi.size == 0:
        raise ValueError("phi grid is empty")
    if phi.min() < -_PHI_DOMAIN_ATOL or phi.max() > np.pi + _PHI_DOMAIN_ATOL:
        raise ValueError("phi grid must lie within [0, pi]")
    s_qm = np.abs(2.0 * (np.cos(phi) + 1.0))
    bound = 4.0 - (4.0 / np.pi) * np.abs(np.sin(phi / 2.0))
    return LeggettScan(phi, s_qm, bound, s_qm - bound)


def leggett_violation_argmax_oracle() -> float:
    """Stationarity root of the violation: sin(phi/2) = 1/(2*pi), radians."""
    return 2.0 * math.asin(1.0 / (2.0 * math.pi))


@dataclass(frozen=True)
class KcbsConfiguration:
    """Five projection directions with cyclic adjacent orthogonality."""

    directions: np.ndarray
    state_direction: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        if d.shape != (5, 3):
            raise ValueError(f"expected five 3-vectors, got shape {d.shape}")
        norms = np.linalg.norm(d, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ValueError("projection directions must be unit vectors")
        for j in range(5):
            dot = float(d[j] @ d[(j + 1) % 5])
            if abs(dot) > 1e-10:
                raise ValueError(
                    f"adjacent directions {j} and {(j + 1) % 5} are not orthogonal "
                    f"(dot = {dot!r}); the measurements are incompatible"
                )
        psi = np.asarray(self.state_direction, dtype=float).reshape(-1)
        if psi.size != 3 or abs(np.linalg.norm(psi) - 1.0) > 1e-12:
            raise ValueError("state direction must be a unit 3-vector")
        d.setflags(write=False)
        psi.setflags(write=False)
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "state_direction", psi)

    def max_adjacent_dot(self) -> float:
        return max(abs(float(self.directions[j] @ self.directions[(j + 1) % 5])) for j in range(5))


def kcbs_build_pentagram() -> KcbsConfiguration:
    """The symmetric pentagram of compatible directions around the z axis.

    l_j = (sin(t) cos(4*pi*j/5), sin(t) sin(4*pi*j/5), cos(t)) with
    cos^2(t) = cos(pi/5)/(1 + cos(pi/5)); adjacent pairs are orthogonal and
    the probe state sits on the symmetry axis.
    """
    cos_sq = math.cos(math.pi / 5.0) / (1.0 + math.cos(math.pi / 5.0))
    theta = math.acos(math.sqrt(cos_sq))
    j = np.arange(5)
    azimuth = 4.0 * np.pi * j / 5.0
    directions = np.stack(
        [
            np.sin(theta) * np.cos(azimuth),
            np.sin(theta) * np.sin(azimuth),
            np.full(5, np.cos(theta)),
        ],
        axis=1,
    )
    return KcbsConfiguration(directions, np.array([0.0, 0.0, 1.0]))


def kcbs_value(config: KcbsConfiguration) -> float:
    """Sum of adjacent-pair correlations of the +-1 observables I - 2|l><l|."""
    psi = StateVector((3,), config.state_direction.astype(complex))
    observables = [
        Observable(np.eye(3, dtype=complex) - 2.0 * qcore.projector_onto(config.directions[j]).matrix,
                   label=f"A_{j}")
        for j in range(5)
    ]
    total = 0.0
    for j in range(5):
        product = observables[j].matrix @ observables[(j + 1) % 5].matrix
        # adjacent observables commute, so the product is Hermitian
        total += qcore.expectation(psi, Observable(product, label=f"A_{j}A_{(j + 1) % 5}"))
    return total


def kcbs_classical_assignment_values() -> np.ndarray:
    """The 32 values of ab + bc + cd + de + ea over deterministic +-1 tables."""
    values = []
    for assignment in itertools.product((-1, 1), repeat=5):
        values.append(sum(assignment[j] * assignment[(j + 1) % 5] for j in range(5)))
    return np.array(values, dtype=int)


def kcbs_classical_minimum() -> int:
    """Exhaustive minimum over all deterministic assignments (exactly -3)."""
    return int(kcbs_classical_assignment_values().min())


@dataclass(frozen=True)
class HardyConfiguration:
    """Measurement kets for the four-probability non-separability test.

    The probe state is cos(g)|0>|1> - sin(g)|1>|0>.  The first factor uses
    the kets

        |+>  = N (sqrt(sin g)|0> + sqrt(cos g)|1>)
        |->  = N (-sqrt(cos g)|0> + sqrt(sin g)|1>)
        |+>' = N' (sqrt(cos^3 g)|0> + sqrt(sin^3 g)|1>)
        |->' = N' (-sqrt(sin^3 g)|0> + sqrt(cos^3 g)|1>)

    with N = (sin g + cos g)^(-1/2), N' = (sin^3 g + cos^3 g)^(-1/2).  The
    second factor uses the same construction with sin g and cos g
    interchanged, which is what the asymmetry of the probe state requires
    for the three zero-probability conditions to hold.
    """

    gamma: float

    def __post_init__(self):
        g = float(self.gamma)
        if not 0.0 <= g <= np.pi / 2.0:
            raise ValueError(f"gamma = {g!r} outside [0, pi/2]")
        object.__setattr__(self, "gamma", g)

    @property
    def separable(self) -> bool:
        """True at the degenerate endpoints where the probe state factorizes."""
        return self.gamma == 0.0 or self.gamma == np.pi / 2.0

    @property
    def normalizer(self) -> float:
        g = self.gamma
        return (math.sin(g) + math.cos(g)) ** -0.5

    @property
    def normalizer_prime(self) -> float:
        g = self.gamma
        return (math.sin(g) ** 3 + math.cos(g) ** 3) ** -0.5

    def _kets(self, swap: bool):
        g = self.gamma
        s, c = math.sin(g), math.cos(g)
        if swap:
            s, c = c, s
        n = self.normalizer
        npr = self.normalizer_prime
        plus = n * np.array([math.sqrt(s), math.sqrt(c)])
        minus = n * np.array([-math.sqrt(c), math.sqrt(s)])
        plus_prime = npr * np.array([math.sqrt(c**3), math.sqrt(s**3)])
        minus_prime = npr * np.array([-math.sqrt(s**3), math.sqrt(c**3)])
        return plus, minus, plus_prime, minus_prime

    @property
    def alice_kets(self):
        """(|+>, |->, |+>', |->') on the first factor."""
        return self._kets(swap=False)

    @property
    def bob_kets(self):
        """(|+>, |->, |+>', |->') on the second factor (sin/cos swapped)."""
        return self._kets(swap=True)

    def state(self) -> StateVector:
        g = self.gamma
        amplitudes = np.array([0.0, math.cos(g), -math.sin(g), 0.0], dtype=complex)
        return StateVector((2, 2), amplitudes)


def hardy_fourth_probability_closed_form(gamma: float) -> float:
    """(sin(4g) / (4 (cos^3 g + sin^3 g)))^2."""
    g = float(gamma)
    return (math.sin(4.0 * g) / (4.0 * (math.cos(g) ** 3 + math.sin(g) ** 3))) ** 2


def hardy_probabilities(config: HardyConfiguration) -> tuple[float, float, float, float]:
    """The four joint probabilities of the non-separability argument.

    Returns (p1, p2, p3, p4) for the events (alpha=+1, beta=+1),
    (alpha=-1, beta'=-1), (alpha'=-1, beta=-1) and (alpha'=-1, beta'=-1);
    each observable is the Hermitian difference of the projectors onto its
    plus and minus kets.  For non-degenerate gamma the first three vanish
    while p4 follows :func:`hardy_fourth_probability_closed_form`.
    """
    state = config.state()
    a_plus, a_minus, a_plus_prime, a_minus_prime = config.alice_kets
    b_plus, b_minus, b_plus_prime, b_minus_prime = config.bob_kets

    def joint(ket_a: np.ndarray, ket_b: np.ndarray, label: str) -> float:
        proj = np.kron(qcore.projector_onto(ket_a).matrix, qcore.projector_onto(ket_b).matrix)
        return qcore.measure_probability(state, Observable(proj, label))

    p1 = joint(a_plus, b_plus, "alpha=+1, beta=+1")
    p2 = joint(a_minus, b_minus_prime, "alpha=-1, beta'=-1")
    p3 = joint(a_minus_prime, b_minus, "alpha'=-1, beta=-1")
    p4 = joint(a_minus_prime, b_minus_prime, "alpha'=-1, beta'=-1")
    return p1, p2, p3, p4


def hardy_classical_fourth_zero() -> bool:
    """Exhaustive check of the classical implication on the 16 value tables.

    Enumerates all assignments of +-1 to (alpha, beta, alpha', beta');
    any probability distribution satisfying the three zero conditions is
    supported only on assignments with (alpha'=-1, beta'=-1) excluded, so
    the fourth probability is forced to zero.
    """
    survivors = [
        (alpha, beta, alpha_p, beta_p)
        for alpha, beta, alpha_p, beta_p in itertools.product((-1, 1), repeat=4)
        if not (alpha == 1 and beta == 1)
        and not (alpha == -1 and beta_p == -1)
        and not (alpha_p == -1 and beta == -1)
    ]
    return all(not (alpha_p == -1 and beta_p == -1) for _, _, alpha_p, beta_p in survivors)


@dataclass(frozen=True)
class TlmResult:
    lhs: float
    rhs: float
    satisfied: bool


def tlm_check(record: CorrelationRecord) -> TlmResult:
    """Quantum-realizability condition for a 2x2 correlator table.

    |c00 c10 - c01 c11| <= sum_j sqrt((1 - c0j^2)(1 - c1j^2)), necessary and
    sufficient for the four correlators to come from quantum measurements.
    """
    c = record.c
    lhs = abs(c[0, 0] * c[1, 0] - c[0, 1] * c[1, 1])
    rhs = 0.0
    for j in range(2):
        rhs += math.sqrt(max(0.0, 1.0 - c[0, j] ** 2) * max(0.0, 1.0 - c[1, j] ** 2))
    return TlmResult(float(lhs), float(rhs), bool(lhs <= rhs + 1e-12))
