"""Weighted Wiener norms, interpolation checks, strip-radius and decay-rate fits.

The continuum norm  sum-type ``F^{s,1}_nu(t) = || exp(nu t |xi|) |xi|^s g_hat ||_L1``
is realized on Fourier-series coefficients as ``sum_k exp(nu t |xi_k|) |xi_k|^s |c_k|``.
All admissibility thresholds elsewhere in the package are compared in this
discrete convention on both sides of every inequality, so the inequalities
carry over verbatim (Young's inequality holds for l1 coefficient convolutions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .spectral import SpectralField

NOISE_FLOOR = 1e-14
_EXP_GUARD = 700.0
_MIN_FIT_MODES = 8


@dataclass(frozen=True)
class NormSpec:
    """Derivative weight s, analyticity weight nu, and evaluation time."""

    s: float
    nu: float = 0.0
    time: float = 0.0

    def __post_init__(self):
        if self.s < 0 or self.nu < 0 or self.time < 0:
            raise DomainError("s, nu and time must all be nonnegative")


def _weights(fld: SpectralField, spec: NormSpec) -> np.ndarray:
    xi = np.abs(fld.grid.wavenumbers())
    arg = spec.nu * spec.time * xi
    if arg.size and np.max(arg) > _EXP_GUARD:
        raise OverflowError(
            f"nu*t*xi_max = {np.max(arg):.3g} exceeds the exponential guard {_EXP_GUARD}"
        )
    with np.errstate(divide="ignore"):
        pw = xi ** spec.s if spec.s > 0 else np.ones_like(xi)
    if spec.s > 0:
        pw[xi == 0] = 0.0
    return np.exp(arg) * pw


def fourier_norm(fld: SpectralField, spec: NormSpec) -> float:
    """sum_k exp(nu t |xi_k|) |xi_k|^s |c_k|  (mode zero counts only for s = 0)."""
    return float(np.sum(_weights(fld, spec) * np.abs(fld.coefficients)))


def weighted_l2(fld: SpectralField, spec: NormSpec) -> float:
    """Weighted Parseval sum, scaled by L so nu = 0 is the physical L2 norm."""
    xi = np.abs(fld.grid.wavenumbers())
    arg = 2.0 * spec.nu * spec.time * xi
    if arg.size and np.max(arg) > _EXP_GUARD:
        raise OverflowError(
            f"2*nu*t*xi_max = {np.max(arg):.3g} exceeds the exponential guard {_EXP_GUARD}"
        )
    total = np.sum(np.exp(arg) * np.abs(fld.coefficients) ** 2)
    return float(math.sqrt(fld.grid.domain_length * total))


def strip_radius(fld: SpectralField, k_min: int = 1) -> float | None:
    """Least-squares slope of -log|c_k| against xi_k over modes above the noise floor.

    Returns None when fewer than 8 usable modes remain (diagnostic unavailable,
    not a failure).  Clamped below at zero.
    """
    k = fld.grid.mode_numbers()
    xi = fld.grid.wavenumbers()
    sel = (k >= k_min) & (np.abs(fld.coefficients) > NOISE_FLOOR)
    if int(np.count_nonzero(sel)) < _MIN_FIT_MODES:
        return None
    x = xi[sel]
    y = -np.log(np.abs(fld.coefficients[sel]))
    slope = np.polyfit(x, y, 1)[0]
    return float(max(slope, 0.0))


def decay_fit(series) -> float:
    """Least-squares exponent beta for value ~ C (1+t)^beta.

    Requires at least 10 samples spanning a decade in 1+t and positive values.
    """
    pts = list(series)
    if len(pts) < 10:
        raise DomainError("decay_fit needs at least 10 samples")
    t = np.array([p[0] for p in pts], dtype=float)
    v = np.array([p[1] for p in pts], dtype=float)
    if np.any(v <= 0):
        raise DomainError("decay_fit requires positive values")
    if np.any(t < 0):
        raise DomainError("decay_fit requires nonnegative times")
    span = (1.0 + t.max()) / (1.0 + t.min())
    if span < 10.0:
        raise DomainError(f"time range must span a decade in 1+t, got factor {span:.3g}")
    return float(np.polyfit(np.log1p(t), np.log(v), 1)[0])


def check_interpolation(fld: SpectralField, s1: float, s: float, s2: float, nu: float = 0.0,
                        time: float | None = None, slack: float = 1e-9) -> bool:
    """True iff ||g||_{s} <= ||g||_{s1}^theta ||g||_{s2}^(1-theta) with relative slack."""
    if not (s1 <= s <= s2) or s1 == s2 and s != s1:
        raise DomainError(f"need s1 <= s <= s2, got ({s1}, {s}, {s2})")
    t = fld.time_tag if time is None else time
    if s1 == s2:
        return True
    theta = (s2 - s) / (s2 - s1)
    mid = fourier_norm(fld, NormSpec(s, nu, t))
    lo = fourier_norm(fld, NormSpec(s1, nu, t))
    hi = fourier_norm(fld, NormSpec(s2, nu, t))
    bound = lo ** theta * hi ** (1.0 - theta)
    return mid <= bound * (1.0 + slack)


@dataclass(frozen=True)
class NormReport:
    """F^{s,1}_nu values, weighted L2, and strip radius of one snapshot."""

    f01: float
    f11: float
    f21: float
    f3half: float
    l2nu: float
    strip_radius: float | None
    time: float

    def __post_init__(self):
        vals = [self.f01, self.f11, self.f21, self.f3half, self.l2nu, self.time]
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("norm report entries must be finite")
        slack = 1.0 + 1e-9
        if self.f11 > math.sqrt(self.f01 * self.f21) * slack + 1e-300:
            raise DomainError("interpolation violated: f11 > sqrt(f01*f21)")
        if self.f3half > math.sqrt(self.f11 * self.f21) * slack + 1e-300:
            raise DomainError("interpolation violated: f3half > sqrt(f11*f21)")


def norm_report(fld: SpectralField, nu: float, time: float, k_min: int = 1) -> NormReport:
    return NormReport(
        f01=fourier_norm(fld, NormSpec(0.0, nu, time)),
        f11=fourier_norm(fld, NormSpec(1.0, nu, time)),
        f21=fourier_norm(fld, NormSpec(2.0, nu, time)),
        f3half=fourier_norm(fld, NormSpec(1.5, nu, time)),
        l2nu=weighted_l2(fld, NormSpec(0.0, nu, time)),
        strip_radius=strip_radius(fld, k_min=k_min),
        time=time,
    )
