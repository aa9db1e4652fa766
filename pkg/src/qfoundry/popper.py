"""Gaussian model of the ghost-diffraction conditional-uncertainty setup.

A pair of particles entangled in position and transverse momentum is
modeled by the double-Gaussian wavefunction (hbar = 1)

    psi(x1, x2) = C exp(-(x1 + x2)^2 / (8 sigma_plus^2))
                    exp(-(x1 - x2)^2 / (8 sigma_minus^2)),

whose center-of-mass and relative coordinates have spreads sigma_plus and
sigma_minus; the pair is entangled iff the two spreads differ.  Particle 1
passing a slit is modeled as a coherent projection onto the aperture
amplitude profile: the conditional wavefunction of particle 2 is

    psi_2(x2) = integral dx1 T(x1) psi(x1, x2),

normalized on the grid.  Position spread comes from the direct second
moment, momentum spread from the discrete Fourier transform.  A Gaussian
aperture keeps the conditional state Gaussian, so the uncertainty product
saturates at exactly 1/2 no matter how narrow the slit; a hard aperture
broadens the momentum spread beyond the variance-matched Gaussian slit but
still respects the bound.

Slit width conventions: for the Gaussian profile ``width`` is the standard
deviation of the intensity profile (amplitude exp(-(x - c)^2 / (4 w^2)));
for the hard profile it is the full aperture width (intensity variance
w^2 / 12).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNCERTAINTY_BOUND = 0.5
_MIN_POINTS_PER_SCALE = 16
_NORM_DRIFT_TOL = 1e-6
# Rows whose slit-weighted amplitude is below this relative cutoff cannot
# move double-precision sums; skipping them is exact at working precision.
_ROW_WEIGHT_CUTOFF = 1e-30
_BLOCK_ENTRIES = 1 << 22


class UnderResolvedGridError(ValueError):
    """The discretization cannot faithfully represent the requested scales."""


@dataclass(frozen=True)
class GaussianPairState:
    """Spreads of the center-of-mass (+) and relative (-) coordinates."""

    sigma_plus: float
    sigma_minus: float

    def __post_init__(self):
        if self.sigma_plus <= 0.0 or self.sigma_minus <= 0.0:
            raise ValueError("both spreads must be positive")
        object.__setattr__(self, "sigma_plus", float(self.sigma_plus))
        object.__setattr__(self, "sigma_minus", float(self.sigma_minus))

    @property
    def entangled(self) -> bool:
        return self.sigma_plus != self.sigma_minus

    def exponent_coefficients(self) -> tuple[float, float]:
        """(alpha, beta) with psi = C exp(-alpha (x1^2 + x2^2) - beta x1 x2)."""
        alpha = 1.0 / (8.0 * self.sigma_plus**2) + 1.0 / (8.0 * self.sigma_minus**2)
        beta = 1.0 / (4.0 * self.sigma_plus**2) - 1.0 / (4.0 * self.sigma_minus**2)
        return alpha, beta

    @property
    def normalization(self) -> float:
        return 1.0 / math.sqrt(2.0 * math.pi * self.sigma_plus * self.sigma_minus)


@dataclass(frozen=True)
class SlitCondition:
    """Aperture on particle 1: center, width scale and profile shape."""

    width: float
    center: float = 0.0
    profile: str = "gaussian"

    def __post_init__(self):
        if self.width <= 0.0:
            raise ValueError("slit width must be positive")
        if self.profile not in ("gaussian", "hard"):
            raise ValueError(f"unknown slit profile {self.profile!r}")
        object.__setattr__(self, "width", float(self.width))
        object.__setattr__(self, "center", float(self.center))

    def amplitude_profile(self, x: np.ndarray) -> np.ndarray:
        if self.profile == "gaussian":
            return np.exp(-((x - self.center) ** 2) / (4.0 * self.width**2))
        return (np.abs(x - self.center) <= self.width / 2.0).astype(float)

    @property
    def intensity_variance(self) -> float:
        if self.profile == "gaussian":
            return self.width**2
        return self.width**2 / 12.0

    def matched_gaussian(self) -> "SlitCondition":
        """Gaussian slit with the same intensity variance and center."""
        return SlitCondition(math.sqrt(self.intensity_variance), self.center, "gaussian")


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid with ``points`` samples over [-extent, extent)."""

    points: int
    extent: float | None = None

    def __post_init__(self):
        if self.points < 4:
            raise ValueError("grid needs at least 4 points")
        if self.extent is not None and self.extent <= 0.0:
            raise ValueError("extent must be positive")
        object.__setattr__(self, "points", int(self.points))

    def resolve(self, state: GaussianPairState, slit: SlitCondition | None = None):
        extent = self.extent
        if extent is None:
            extent = 8.0 * max(state.sigma_plus, state.sigma_minus)
            if slit is not None:
                extent += abs(slit.center)
        dx = 2.0 * extent / self.points
        x = -extent + dx * np.arange(self.points)
        return x, dx

    @classmethod
    def auto(cls, state: GaussianPairState, slit: SlitCondition, oversample: float = 2.0) -> "GridSpec":
        """Power-of-two grid resolving every scale with headroom."""
        extent = 8.0 * max(state.sigma_plus, state.sigma_minus) + abs(slit.center)
        smallest = min(state.sigma_plus, state.sigma_minus, slit.width)
        needed = 2.0 * extent * _MIN_POINTS_PER_SCALE * oversample / smallest
        points = 1 << max(4, math.ceil(math.log2(needed)))
        return cls(points, extent)


@dataclass(frozen=True)
class UncertaintyReport:
    position_spread: float
    momentum_spread: float

    @property
    def product(self) -> float:
        return self.position_spread * self.momentum_spread


def _check_resolution(state: GaussianPairState, slit: SlitCondition, dx: float) -> None:
    smallest = min(state.sigma_plus, state.sigma_minus, slit.width)
    if dx > smallest / _MIN_POINTS_PER_SCALE:
        raise UnderResolvedGridError(
            f"grid spacing {dx:.6g} exceeds smallest scale {smallest:.6g} / "
            f"{_MIN_POINTS_PER_SCALE}; increase points or shrink extent"
        )


def _check_kernel_range(state: GaussianPairState, x: np.ndarray) -> None:
    # the coupling factor exp(-beta x1 x2) is evaluated before the x1
    # envelope damps it; its largest weighted exponent is beta^2 x2^2/(2 alpha)
    # and must stay below the float64 range
    alpha, beta = state.exponent_coefficients()
    peak = beta * beta * float(np.max(np.abs(x))) ** 2 / (2.0 * alpha)
    if peak > 600.0:
        ratio = max(state.sigma_plus, state.sigma_minus) / min(
            state.sigma_plus, state.sigma_minus
        )
        raise ValueError(
            f"spread ratio {ratio:.3g} is too extreme for the direct grid kernel "
            "(coupling exponent would overflow); reduce the ratio or the extent"
        )


def _blocked_rows(n_rows: int, n_cols: int):
    block = max(1, _BLOCK_ENTRIES // max(1, n_cols))
    for start in range(0, n_rows, block):
        yield start, min(n_rows, start + block)


def _grid_norm_drift(state: GaussianPairState, x: np.ndarray, dx: float) -> float:
    """|discrete 2-d norm - 1| of the analytically normalized pair state."""
    alpha, beta = state.exponent_coefficients()
    weights = np.exp(-2.0 * alpha * x * x)
    total = 0.0
    for lo, hi in _blocked_rows(x.size, x.size):
        kernel = np.exp(-2.0 * beta * np.outer(x[lo:hi], x))
        total += float(weights[lo:hi] @ (kernel @ weights))
    norm = state.normalization**2 * total * dx * dx
    return abs(norm - 1.0)


def _conditional_wavefunction(
    state: GaussianPairState, slit: SlitCondition, x: np.ndarray, dx: float
) -> np.ndarray:
    alpha, beta = state.exponent_coefficients()
    envelope = np.exp(-alpha * x * x)
    row_weights = slit.amplitude_profile(x) * envelope
    peak = row_weights.max()
    if peak == 0.0:
        raise ValueError("slit aperture does not overlap the grid")
    keep = np.flatnonzero(row_weights > peak * _ROW_WEIGHT_CUTOFF)
    xi = x[keep]
    wi = row_weights[keep]
    psi2 = np.zeros(x.size)
    for lo, hi in _blocked_rows(xi.size, x.size):
        kernel = np.exp(-beta * np.outer(xi[lo:hi], x))
        psi2 += wi[lo:hi] @ kernel
    psi2 *= envelope * dx * state.normalization
    norm = math.sqrt(float(np.sum(psi2 * psi2)) * dx)
    if norm == 0.0:
        raise ValueError("conditional wavefunction vanishes on the grid")
    return psi2 / norm


def _moments(x: np.ndarray, density: np.ndarray, dx: float) -> float:
    total = float(np.sum(density)) * dx
    mean = float(np.sum(x * density)) * dx / total
    second = float(np.sum(x * x * density)) * dx / total
    return math.sqrt(max(0.0, second - mean * mean))


def _momentum_spread(psi: np.ndarray, dx: float) -> float:
    n = psi.size
    transform = np.fft.fft(psi) * dx / math.sqrt(2.0 * math.pi)
    p = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)
    dp = 2.0 * np.pi / (n * dx)
    return _moments(p, np.abs(transform) ** 2, dp)


def conditional_uncertainties(
    state: GaussianPairState, slit: SlitCondition, grid: GridSpec
) -> UncertaintyReport:
    """Spreads of particle 2 after particle 1 is projected onto the slit.

    Raises :class:`UnderResolvedGridError` when the grid has fewer than 16
    points per smallest length scale or when the discrete norm of the pair
    state drifts from 1 by more than 1e-6.
    """
    x, dx = grid.resolve(state, slit)
    _check_resolution(state, slit, dx)
    _check_kernel_range(state, x)
    drift = _grid_norm_drift(state, x, dx)
    if drift > _NORM_DRIFT_TOL:
        raise UnderResolvedGridError(
            f"discrete norm drift {drift:.3g} exceeds {_NORM_DRIFT_TOL}; "
            "grid extent or spacing is insufficient"
        )
    psi2 = _conditional_wavefunction(state, slit, x, dx)
    position = _moments(x, psi2 * psi2, dx)
    momentum = _momentum_spread(psi2, dx)
    return UncertaintyReport(position, momentum)


def unconditioned_uncertainties(state: GaussianPairState) -> UncertaintyReport:
    """Marginal spreads of particle 2 with no measurement on particle 1.

    Closed forms of the double-Gaussian marginals:
    dx2 = sqrt((sigma_plus^2 + sigma_minus^2) / 2) and
    dp2 = sqrt(1/(8 sigma_plus^2) + 1/(8 sigma_minus^2)); the product
    (sigma_plus^2 + sigma_minus^2) / (4 sigma_plus sigma_minus) reaches 1/2
    only when the spreads coincide.
    """
    sp, sm = state.sigma_plus, state.sigma_minus
    position = math.sqrt((sp * sp + sm * sm) / 2.0)
    momentum = math.sqrt(1.0 / (8.0 * sp * sp) + 1.0 / (8.0 * sm * sm))
    return UncertaintyReport(position, momentum)
