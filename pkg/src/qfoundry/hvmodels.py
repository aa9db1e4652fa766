"""Deterministic and sampled hidden-variable models.

Three models live here:

* the half-plane polarization variable :func:`poincare_lambda`, which
  pre-assigns the +-1 outcome of a transverse polarization measurement from
  the azimuth of the polarization vector;
* the exhaustive local-hidden-variable table over three polarizer settings
  (:class:`LocalHVTable`), whose same-outcome probability is bounded below
  by 1/3 for every weighting of the eight deterministic rows;
* a crypto-nonlocal model (:func:`leggett_outcomes`,
  :func:`leggett_expectations`) in which each outcome may depend on both
  analyzer settings but not on the remote outcome.  The hidden variable is
  uniform on [0, 1]; outcome A is +1 on the closed interval
  [0, lambda_A] with lambda_A = (1 + u.a)/2, outcome B is +1 on the closed
  interval [x1, x2] with

      x1 = (1 + u.a - v.b + a.b)/4,     x2 = (3 + u.a + v.b + a.b)/4.

  Under the uniform density this reproduces Malus' law, <A> = u.a and
  <B> = v.b, together with <AB> = -a.b.  The construction is only
  self-consistent when |a.b + u.a| <= 1 - v.b and |a.b - u.a| <= 1 + v.b;
  these two branches are equivalent to 0 <= x1 <= lambda_A <= x2 <= 1, and
  hold for every a, b in the plane perpendicular to u and v.  Outside that
  region :class:`ModelInconsistentError` is raised.

Interval ties (lambda exactly at a threshold) resolve to the first listed
case, i.e. toward +1; the tie set has measure zero under the uniform density.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .qcore import MeasurementSetting

CONSISTENCY_ATOL = 1e-12

# Table of all 2^3 deterministic single-photon assignments over the three
# polarizer settings (0, +2pi/3, -2pi/3); +1 = pass, -1 = blocked.  Row
# order matches the enumeration with "pass everywhere" first.
LOCAL_HV_ROWS: tuple[tuple[int, int, int], ...] = (
    (+1, +1, +1),
    (+1, +1, -1),
    (+1, -1, +1),
    (+1, -1, -1),
    (-1, +1, +1),
    (-1, +1, -1),
    (-1, -1, +1),
    (-1, -1, -1),
)

# The three randomly chosen mismatched setting pairs (a1 b2, a2 b3, a3 b1).
SETTING_PAIRS: tuple[tuple[int, int], ...] = ((0, 1), (1, 2), (2, 0))


class ModelInconsistentError(ValueError):
    """The crypto-nonlocal model has no valid outcome intervals here."""


def poincare_lambda(phi: float) -> int:
    """Pre-assigned transverse polarization sign for azimuth ``phi``.

    +1 on the closed upper half-plane [0, pi], -1 on (pi, 2*pi); the
    boundary phi = pi belongs to the first case.
    """
    phi = float(phi)
    if not 0.0 <= phi < 2.0 * np.pi:
        raise ValueError(f"phi = {phi!r} outside [0, 2*pi)")
    return +1 if phi <= np.pi else -1


def row_same_fraction(row: tuple[int, int, int]) -> Fraction:
    """Fraction of the three mismatched setting pairs with equal outcomes."""
    hits = sum(1 for i, j in SETTING_PAIRS if row[i] == row[j])
    return Fraction(hits, len(SETTING_PAIRS))


@dataclass(frozen=True)
class LocalHVTable:
    """Weights over the eight deterministic assignment rows."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if w.size != len(LOCAL_HV_ROWS):
            raise ValueError(f"expected {len(LOCAL_HV_ROWS)} weights, got {w.size}")
        if w.min() < -1e-12:
            raise ValueError(f"weights must be nonnegative, got min {w.min()!r}")
        total = float(w.sum())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {total!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls) -> "LocalHVTable":
        return cls(np.full(len(LOCAL_HV_ROWS), 1.0 / len(LOCAL_HV_ROWS)))

    @classmethod
    def point(cls, row: int) -> "LocalHVTable":
        """All weight on one row (a vertex of the weight simplex)."""
        w = np.zeros(len(LOCAL_HV_ROWS))
        w[row] = 1.0
        return cls(w)


def lhv_same_probability(table: LocalHVTable) -> float:
    """Weighted probability that both photons give the same outcome."""
    fractions = np.array([float(row_same_fraction(r)) for r in LOCAL_HV_ROWS])
    return float(table.weights @ fractions)


def lhv_minimum_same_probability(rows: Iterable[int] | None = None) -> Fraction:
    """Exact minimum of the same-outcome probability over the weight simplex.

    The probability is affine in the weights, so the minimum over the
    simplex is attained at a vertex; it suffices to enumerate the rows.
    ``rows`` optionally restricts the support (0-based row indices).
    """
    indices = range(len(LOCAL_HV_ROWS)) if rows is None else sorted(set(rows))
    if not indices:
        raise ValueError("row restriction is empty")
    for i in indices:
        if not 0 <= i < len(LOCAL_HV_ROWS):
            raise ValueError(f"row index {i} out of range")
    return min(row_same_fraction(LOCAL_HV_ROWS[i]) for i in indices)


@dataclass(frozen=True)
class LeggettModelParams:
    """Initial polarizations (u, v) and analyzer settings (a, b)."""

    u: MeasurementSetting
    v: MeasurementSetting
    a: MeasurementSetting
    b: MeasurementSetting

    @property
    def ua(self) -> float:
        return self.u.dot(self.a)

    @property
    def vb(self) -> float:
        return self.v.dot(self.b)

    @property
    def ab(self) -> float:
        return self.a.dot(self.b)


def leggett_thresholds(params: LeggettModelParams) -> tuple[float, float, float]:
    """(lambda_A, x1, x2) interval endpoints of the outcome rules."""
    ua, vb, ab = params.ua, params.vb, params.ab
    lambda_a = 0.5 * (1.0 + ua)
    x1 = 0.25 * (1.0 + ua - vb + ab)
    x2 = 0.25 * (3.0 + ua + vb + ab)
    return lambda_a, x1, x2


def leggett_is_consistent(params: LeggettModelParams, atol: float = CONSISTENCY_ATOL) -> bool:
    """Whether the interval construction is valid for these settings.

    Checks |a.b + u.a| <= 1 - v.b and |a.b - u.a| <= 1 + v.b, which is
    equivalent to 0 <= x1 <= lambda_A <= x2 <= 1.
    """
    ua, vb, ab = params.ua, params.vb, params.ab
    return abs(ab + ua) <= 1.0 - vb + atol and abs(ab - ua) <= 1.0 + vb + atol


def _require_consistent(params: LeggettModelParams) -> None:
    if not leggett_is_consistent(params):
        ua, vb, ab = params.ua, params.vb, params.ab
        raise ModelInconsistentError(
            "settings violate the model consistency condition "
            f"|a.b +- u.a| <= 1 -+ v.b (u.a = {ua:.6g}, v.b = {vb:.6g}, "
            f"a.b = {ab:.6g})"
        )


def leggett_outcomes(params: LeggettModelParams, lam: float) -> tuple[int, int]:
    """Deterministic outcome pair (A, B) for hidden variable ``lam``."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda = {lam!r} outside [0, 1]")
    _require_consistent(params)
    lambda_a, x1, x2 = leggett_thresholds(params)
    a_out = +1 if lam <= lambda_a else -1
    b_out = +1 if x1 <= lam <= x2 else -1
    return a_out, b_out


@dataclass(frozen=True)
class LeggettExpectations:
    """Single- and two-party means with standard errors (0 when analytic)."""

    mean_a: float
    mean_b: float
    mean_ab: float
    stderr_a: float
    stderr_b: float
    stderr_ab: float
    n_samples: int
    method: str
    seed: int | None = None


def _binary_stderr(mean: float, n: int) -> float:
    return float(np.sqrt(max(0.0, 1.0 - mean * mean) / n))


def leggett_expectations(
    params: LeggettModelParams,
    method: str = "analytic",
    n_samples: int = 1_000_000,
    seed: int = 0,
    shards: int = 1,
) -> LeggettExpectations:
    """Means of A, B and AB over the uniform hidden variable.

    ``method="analytic"`` integrates the piecewise-constant outcome rules
    exactly; the results equal u.a, v.b and -a.b.  ``method="monte-carlo"``
    draws ``n_samples`` uniform lambdas (optionally split into ``shards``
    substreams spawned from ``seed``) and reports sample means with
    standard errors; it is deterministic for a fixed seed and shard count.
    """
    _require_consistent(params)
    lambda_a, x1, x2 = leggett_thresholds(params)

    if method == "analytic":
        mean_a = 2.0 * lambda_a - 1.0
        mean_b = 2.0 * (x2 - x1) - 1.0
        # AB is -1 on [0,x1) and [lambda_A,x2), +1 on [x1,lambda_A) and [x2,1];
        # consistency guarantees the ordering x1 <= lambda_A <= x2.
        mean_ab = 2.0 * lambda_a - 2.0 * x1 - 2.0 * x2 + 1.0
        return LeggettExpectations(mean_a, mean_b, mean_ab, 0.0, 0.0, 0.0, 0, "analytic")

    if method != "monte-carlo":
        raise ValueError(f"unknown method {method!r}")
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if shards < 1:
        raise ValueError("shards must be positive")

    if shards == 1:
        generators = [np.random.default_rng(seed)]
        counts = [n_samples]
    else:
        generators = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(shards)]
        base, extra = divmod(n_samples, shards)
        counts = [base + (1 if i < extra else 0) for i in range(shards)]

    sum_a = sum_b = sum_ab = 0.0
    for rng, count in zip(generators, counts):
        if count == 0:
            continue
        lam = rng.random(count)
        a_out = np.where(lam <= lambda_a, 1.0, -1.0)
        b_out = np.where((x1 <= lam) & (lam <= x2), 1.0, -1.0)
        sum_a += float(a_out.sum())
        sum_b += float(b_out.sum())
        sum_ab += float((a_out * b_out).sum())

    mean_a = sum_a / n_samples
    mean_b = sum_b / n_samples
    mean_ab = sum_ab / n_samples
    return LeggettExpectations(
        mean_a,
        mean_b,
        mean_ab,
        _binary_stderr(mean_a, n_samples),
        _binary_stderr(mean_b, n_samples),
        _binary_stderr(mean_ab, n_samples),
        n_samples,
        "monte-carlo",
        seed=seed,
    )


@dataclass(frozen=True)
class HiddenVariableOutcomeRule:
    """Deterministic outcome maps (a, b, lambda) -> +-1 plus the lambda law.

    ``kind`` is "local" (each map ignores the remote setting) or
    "crypto-nonlocal" (maps may read both settings but never the remote
    outcome; the signature has no outcome argument by construction).
    """

    kind: str
    outcome_a: Callable[[MeasurementSetting, MeasurementSetting, float], int]
    outcome_b: Callable[[MeasurementSetting, MeasurementSetting, float], int]
    lambda_density: str = "uniform on [0, 1]"


def poincare_rule() -> HiddenVariableOutcomeRule:
    """Local rule: a shared transverse polarization at azimuth 2*pi*lambda.

    Both photons carry the same hidden vector w = (cos phi, sin phi, 0) and
    each outcome is the sign of w projected on the local setting (ties at
    zero projection count as +1, matching the closed upper half-plane of
    :func:`poincare_lambda`).
    """

    def _outcome(setting: MeasurementSetting, _other: MeasurementSetting, lam: float) -> int:
        phi = 2.0 * np.pi * float(lam)
        w = np.array([np.cos(phi), np.sin(phi), 0.0])
        return +1 if w @ setting.direction >= 0.0 else -1

    def outcome_a(a, b, lam):
        return _outcome(a, b, lam)

    def outcome_b(a, b, lam):
        return _outcome(b, a, lam)

    return HiddenVariableOutcomeRule("local", outcome_a, outcome_b)


def leggett_rule(u: MeasurementSetting, v: MeasurementSetting) -> HiddenVariableOutcomeRule:
    """Crypto-nonlocal rule for fixed initial polarizations u and v."""

    def outcome_a(a, b, lam):
        return leggett_outcomes(LeggettModelParams(u, v, a, b), lam)[0]

    def outcome_b(a, b, lam):
        return leggett_outcomes(LeggettModelParams(u, v, a, b), lam)[1]

    return HiddenVariableOutcomeRule("crypto-nonlocal", outcome_a, outcome_b)


def fibonacci_sphere(n: int = 97) -> np.ndarray:
    """Deterministic near-uniform unit vectors on the sphere, shape (n, 3)."""
    if n < 1:
        raise ValueError("n must be positive")
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    golden = np.pi * (3.0 - np.sqrt(5.0))
    points = np.stack([r * np.cos(golden * i), r * np.sin(golden * i), z], axis=1)
    return points / np.linalg.norm(points, axis=1, keepdims=True)
