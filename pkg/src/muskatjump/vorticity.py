"""Vorticity amplitudes on the fluid and permeability interfaces.

The sheet strength on the permeability line is an explicit nonsingular
integral of the fluid-sheet strength; the fluid-sheet strength solves an
implicit equation handled by Picard iteration seeded at the zero-coupling
solution -2 A_rho df/da.  Two interchangeable evaluation paths exist for the
explicit integral: an O(n_max N log N) truncated exponential series in the
interface height, and O(N^2) trapezoid quadrature of the periodized kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import certify
from .errors import (ConfigurationError, GeometryError, InternalConsistencyError,
                     MethodUnavailableError, PicardDivergenceError, RegimeError)
from .norms import NormSpec, fourier_norm
from .spectral import (GridSpec, SpectralField, conj_poisson_kernel_periodic,
                       derivative, forward, hermitian_symmetrize, inverse, odd_offsets,
                       poisson_kernel_periodic, product_coefficients, pv_kernel_periodic)

if TYPE_CHECKING:
    from .evolution import InterfaceField


@dataclass(frozen=True)
class FluidConfig:
    """Dimensionless contrasts A_kappa, A_mu, A_rho and permeability depth h2.

    Raw permeabilities/viscosities/densities may be supplied; the contrasts
    are then A_kappa = (k1-k2)/(k1+k2), A_mu = (m1-m2)/(m1+m2) and
    A_rho = -k1 (r1-r2) g / (m1+m2), and must match the stored values exactly.
    """

    a_kappa: float
    a_mu: float
    a_rho: float
    h2: float
    kappa1: float | None = None
    kappa2: float | None = None
    mu1: float | None = None
    mu2: float | None = None
    rho1: float | None = None
    rho2: float | None = None
    g: float | None = None

    def __post_init__(self):
        if not abs(self.a_kappa) < 1.0:
            raise ConfigurationError(f"|A_kappa| must be < 1, got {self.a_kappa!r}")
        if not abs(self.a_mu) < 1.0:
            raise ConfigurationError(f"|A_mu| must be < 1, got {self.a_mu!r}")
        if not self.a_rho > 0.0:
            raise ConfigurationError(f"A_rho must be > 0 (stable regime), got {self.a_rho!r}")
        if not self.h2 > 0.0:
            raise ConfigurationError(f"h2 must be > 0, got {self.h2!r}")
        raw = (self.kappa1, self.kappa2, self.mu1, self.mu2, self.rho1, self.rho2, self.g)
        if any(v is not None for v in raw):
            if any(v is None for v in raw):
                raise ConfigurationError("raw parameters must be given all together")
            ak = (self.kappa1 - self.kappa2) / (self.kappa1 + self.kappa2)
            am = (self.mu1 - self.mu2) / (self.mu1 + self.mu2)
            ar = -self.kappa1 * (self.rho1 - self.rho2) * self.g / (self.mu1 + self.mu2)
            if not (ak == self.a_kappa and am == self.a_mu and ar == self.a_rho):
                raise ConfigurationError("contrasts do not match the raw parameters")

    @classmethod
    def from_raw(cls, kappa1, kappa2, mu1, mu2, rho1, rho2, g, h2):
        ak = (kappa1 - kappa2) / (kappa1 + kappa2)
        am = (mu1 - mu2) / (mu1 + mu2)
        ar = -kappa1 * (rho1 - rho2) * g / (mu1 + mu2)
        return cls(ak, am, ar, h2, kappa1, kappa2, mu1, mu2, rho1, rho2, g)

    def to_dict(self) -> dict:
        return {"a_kappa": self.a_kappa, "a_mu": self.a_mu,
                "a_rho": self.a_rho, "h2": self.h2}

    def hash(self) -> str:
        return certify.config_hash(self.to_dict())


@dataclass(frozen=True)
class VorticityPair:
    """Solved sheet strengths with the final Picard residual."""

    omega1: SpectralField
    omega2: SpectralField
    residual: float
    iterations: int
    contraction_ratio: float | None = None


@dataclass(frozen=True)
class PotentialPair:
    """Potential jumps along the two interfaces (antiderivatives of the strengths)."""

    Omega1: SpectralField
    Omega2: SpectralField


def _interface_samples(f) -> tuple[SpectralField, np.ndarray]:
    fld: SpectralField = getattr(f, "f", f)
    return fld, inverse(fld)


def check_geometry(f, cfg: FluidConfig) -> None:
    _, F = _interface_samples(f)
    gap = float(np.min(F)) + cfg.h2
    if gap <= 0.0:
        raise GeometryError(f"interface touches the permeability line (min f + h2 = {gap:.3g})")


def _f01(what: np.ndarray) -> float:
    return float(np.sum(np.abs(np.fft.fft(what) / len(what))))


class _Workspace:
    """Difference-quotient kernels for one interface snapshot.

    Precomputes the odd-offset principal-value weights and the matrices that
    turn the alternating trapezoid sums into dense matvecs.  Rebuilt whenever
    the interface changes; reused across Picard iterations.
    """

    def __init__(self, grid: GridSpec, F: np.ndarray, dF: np.ndarray):
        self.grid = grid
        self.F = F
        self.dF = dF
        n, L = grid.n_points, grid.domain_length
        m = odd_offsets(grid)
        beta = m * grid.spacing
        w = pv_kernel_periodic(beta, L) * 2.0 * grid.spacing
        rows = np.arange(n)[:, None]
        cols = (rows - m[None, :]) % n
        delta = (F[:, None] - F[cols]) / beta[None, :]
        denom = 1.0 + delta ** 2
        self._rows, self._cols = rows, cols
        self.delta = delta
        self.denom = denom
        self.pv_weights = w

    def _scatter(self, kernel: np.ndarray) -> np.ndarray:
        n = self.grid.n_points
        M = np.zeros((n, n))
        M[np.broadcast_to(self._rows, kernel.shape), self._cols] = kernel
        return M

    def matrix_omega1_self(self) -> np.ndarray:
        # (df(a) - Delta_b f(a)) / (1 + Delta_b f(a)^2) against the pv kernel
        k = (self.dF[:, None] - self.delta) / self.denom * self.pv_weights[None, :]
        return self._scatter(k)

    def matrix_i1_correction(self) -> np.ndarray:
        # -Delta^2/(1+Delta^2) against the pv kernel (the nonlinear part of I1)
        k = -(self.delta ** 2) / self.denom * self.pv_weights[None, :]
        return self._scatter(k)

    def matrix_i2(self) -> np.ndarray:
        # df(a) Delta/(1+Delta^2) against the pv kernel
        k = self.dF[:, None] * self.delta / self.denom * self.pv_weights[None, :]
        return self._scatter(k)

    def matrix_potential_self(self) -> np.ndarray:
        # (Delta_b f(a) - df(a-b)) / (1 + Delta^2) against the pv kernel
        k = (self.delta - self.dF[self._cols]) / self.denom * self.pv_weights[None, :]
        return self._scatter(k)


def _series_nmax(a_over_h: float, norm_scale: float, tol: float, h2: float) -> int | None:
    """Smallest n_max with the exponential-series majorant tail below tol/10.

    Term n is bounded by (n/h2)^n e^-n/n! * a0^n * norm_scale and the term
    ratio is below a0/h2, so the tail after n_max is geometric.
    """
    if a_over_h >= 1.0:
        return None
    target = tol / 10.0
    for nmax in range(1, 400):
        n = nmax + 1
        lead = math.exp(certify._log_env(n, h2)) * (a_over_h * h2) ** n * norm_scale
        if lead / (1.0 - a_over_h) < target:
            return nmax
    return None


def _source_series_omega2(fhat: np.ndarray, w1hat: np.ndarray, grid: GridSpec,
                          cfg: FluidConfig, n_max: int) -> np.ndarray:
    """Exponential series for the permeability-sheet strength, in coefficients."""
    xi = np.abs(grid.wavenumbers())
    decay = np.exp(-cfg.h2 * xi)
    acc = np.zeros(grid.n_points, dtype=complex)
    power = w1hat.copy()  # coefficients of f^n * omega1, built by dealiased products
    for n in range(n_max + 1):
        if n > 0:
            power = product_coefficients(fhat, power, grid)
        acc += decay * ((-1.0) ** n) * xi ** n / math.factorial(n) * power
    acc *= -cfg.a_kappa
    acc[grid.nyquist_index()] = 0.0
    return hermitian_symmetrize(acc)


def target_series_apply(ghat: np.ndarray, F: np.ndarray, grid: GridSpec, h2: float,
                        n_max: int, conj: bool) -> np.ndarray:
    """Samples of int K(f(a)+h2; b) g(a-b) db via the target-side exponential series.

    K is the periodized Poisson kernel (conj=False, transform pi e^{-a|xi|})
    or its conjugate (conj=True, transform -i pi sgn(xi) e^{-a|xi|}).  All
    pointwise products are computed alias-free and 2/3-truncated.
    """
    xi = grid.wavenumbers()
    axi = np.abs(xi)
    base = np.pi * np.exp(-h2 * axi)
    if conj:
        base = -1j * np.sign(xi) * base
    fhat = hermitian_symmetrize(np.fft.fft(F) / grid.n_points)
    out_hat = np.zeros(grid.n_points, dtype=complex)
    coef = 1.0
    fpow_hat = None
    for n in range(n_max + 1):
        mult = base * axi ** n
        mult[grid.nyquist_index()] = 0.0
        term_hat = mult * ghat
        if n == 0:
            out_hat += term_hat
            continue
        fpow_hat = fhat if n == 1 else product_coefficients(fpow_hat, fhat, grid)
        coef /= n
        out_hat += coef * ((-1.0) ** n) * product_coefficients(fpow_hat, term_hat, grid)
    return np.fft.ifft(out_hat * grid.n_points).real


def omega2_of_omega1(f, omega1: SpectralField, cfg: FluidConfig,
                     method: str = "series", n_max: int | None = None,
                     tol: float = 1e-10) -> SpectralField:
    """Permeability-sheet strength induced by a fluid-sheet strength.

    method="series": truncated exponential series with the majorant-controlled
    tail; unavailable when ||f||_{F^{0,1}} >= h2.  method="quadrature":
    O(N^2) trapezoid sum of the periodized kernel.
    """
    fld, F = _interface_samples(f)
    check_geometry(f, cfg)
    grid = fld.grid
    if omega1.grid != grid:
        raise ConfigurationError("omega1 lives on a different grid")
    if method == "series":
        a0 = fourier_norm(fld, NormSpec(0.0))
        if n_max is None:
            w_scale = fourier_norm(omega1, NormSpec(0.0))
            n_max = _series_nmax(a0 / cfg.h2, max(w_scale, 1e-300), tol, cfg.h2)
            if n_max is None:
                raise MethodUnavailableError(
                    f"series tail bound unattainable: ||f||_F01 = {a0:.3g} >= h2 = {cfg.h2:.3g}"
                )
        c = _source_series_omega2(fld.coefficients, omega1.coefficients, grid, cfg, n_max)
        return SpectralField(grid, c, fld.time_tag)
    if method == "quadrature":
        w1 = inverse(omega1)
        n = grid.n_points
        beta = ((np.arange(n)[:, None] - np.arange(n)[None, :] + n // 2) % n - n // 2) * grid.spacing
        a_src = F[None, :] + cfg.h2
        M = poisson_kernel_periodic(a_src, beta, grid.domain_length) * grid.spacing
        out = -(cfg.a_kappa / np.pi) * (M @ w1)
        return forward(out, grid, fld.time_tag)
    raise ConfigurationError(f"unknown method {method!r}")


def solve_vorticity(f, cfg: FluidConfig, tol: float = 1e-11, max_iter: int = 80,
                    workspace: _Workspace | None = None) -> VorticityPair:
    """Picard solve of the coupled sheet-strength system.

    Iterates strength_1 -> A_mu/pi (self-induction + line-coupling) - 2 A_rho df
    from the seed -2 A_rho df, stopping when the F^{0,1} change drops below tol.
    Divergence raises PicardDivergenceError with the residual history attached.
    """
    fld, F = _interface_samples(f)
    check_geometry(f, cfg)
    grid = fld.grid
    dF = inverse(derivative(fld))
    ws = workspace or _Workspace(grid, F, dF)
    a0 = fourier_norm(fld, NormSpec(0.0))
    a1 = fourier_norm(fld, NormSpec(1.0))
    series_ok = a0 < 0.9 * cfg.h2
    # strength norms scale like 2 A_rho C1 a1; keep the majorant honest for
    # large density contrasts
    scale = max(1.0, 4.0 * cfg.a_rho * a1)
    n_max = _series_nmax(a0 / cfg.h2, scale, tol, cfg.h2) if series_ok else None
    if n_max is None:
        series_ok = False

    def omega2_samples(w1: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        w1f = SpectralField(grid, hermitian_symmetrize(np.fft.fft(w1) / grid.n_points),
                            fld.time_tag)
        if series_ok:
            w2fld = omega2_of_omega1(fld, w1f, cfg, method="series", n_max=n_max)
        else:
            w2fld = omega2_of_omega1(fld, w1f, cfg, method="quadrature")
        return inverse(w2fld), w2fld.coefficients

    seed = -2.0 * cfg.a_rho * dF
    if cfg.a_mu == 0.0:
        w1 = seed
        w2, w2hat = omega2_samples(w1)
        w1fld = forward(w1, grid, fld.time_tag)
        return VorticityPair(w1fld, SpectralField(grid, w2hat, fld.time_tag),
                             residual=0.0, iterations=1)

    M1 = ws.matrix_omega1_self()

    def coupling_of(w2: np.ndarray, w2hat: np.ndarray) -> np.ndarray:
        if series_ok:
            return (dF * target_series_apply(w2hat, F, grid, cfg.h2, n_max, conj=True)
                    - target_series_apply(w2hat, F, grid, cfg.h2, n_max, conj=False))
        return _coupling_quadrature(w2, F, dF, grid, cfg)

    w1 = seed
    history: list[float] = []
    ratio = None
    for it in range(1, max_iter + 1):
        w2, w2hat = omega2_samples(w1)
        w1_new = (cfg.a_mu / np.pi) * (M1 @ w1 + coupling_of(w2, w2hat)) + seed
        delta = _f01(w1_new - w1)
        history.append(delta)
        w1 = w1_new
        if len(history) >= 2 and history[-2] > 0:
            ratio = history[-1] / history[-2]
        if delta < tol:
            w2, w2hat = omega2_samples(w1)
            w1fld = forward(w1, grid, fld.time_tag)
            return VorticityPair(w1fld, SpectralField(grid, w2hat, fld.time_tag),
                                 residual=delta, iterations=it,
                                 contraction_ratio=ratio)
    raise PicardDivergenceError(
        f"no contraction after {max_iter} iterations (last residual {history[-1]:.3g})",
        history,
    )


def _coupling_quadrature(w2: np.ndarray, F: np.ndarray, dF: np.ndarray,
                         grid: GridSpec, cfg: FluidConfig) -> np.ndarray:
    # int (b df(a) - (f(a)+h2)) / (b^2 + (f(a)+h2)^2) w2(a-b) db, periodized kernels
    n, L = grid.n_points, grid.domain_length
    beta = ((np.arange(n)[:, None] - np.arange(n)[None, :] + n // 2) % n - n // 2) * grid.spacing
    a_tgt = (F + cfg.h2)[:, None]
    P = poisson_kernel_periodic(a_tgt, beta, L)
    CP = conj_poisson_kernel_periodic(a_tgt, beta, L)
    return (dF * (CP @ w2) - (P @ w2)) * grid.spacing


def potentials(pair: VorticityPair, f, cfg: FluidConfig,
               consistency_tol: float = 1e-6) -> PotentialPair:
    """Potential jumps recovered from a solved strength pair.

    The fluid-side potential is the spectral antiderivative of its strength;
    its additive constant is fixed so the defining integral identity holds at
    the first collocation node.  The line-side potential follows by direct
    quadrature.  Both are verified against d/da Potential = strength.
    """
    fld, F = _interface_samples(f)
    grid = fld.grid
    dF = inverse(derivative(fld))
    xi = grid.wavenumbers()
    w1hat = pair.omega1.coefficients
    inv_ixi = np.zeros_like(xi, dtype=complex)
    nz = xi != 0
    inv_ixi[nz] = 1.0 / (1j * xi[nz])
    O1hat = w1hat * inv_ixi
    O1hat[grid.nyquist_index()] = 0.0
    O1_0 = np.fft.ifft(O1hat * grid.n_points).real

    n, L = grid.n_points, grid.domain_length
    beta_full = ((np.arange(n)[:, None] - np.arange(n)[None, :] + n // 2) % n - n // 2) * grid.spacing
    a_src = F[None, :] + cfg.h2
    K2 = (poisson_kernel_periodic(a_src, beta_full, L)
          + dF[None, :] * conj_poisson_kernel_periodic(a_src, beta_full, L)) * grid.spacing

    def omega2_potential(O1: np.ndarray) -> np.ndarray:
        return -(cfg.a_kappa / np.pi) * (K2 @ O1)

    ws = _Workspace(grid, F, dF)
    Mself = ws.matrix_potential_self()
    a_tgt = (F + cfg.h2)[:, None]
    P_tgt = poisson_kernel_periodic(a_tgt, beta_full, L) * grid.spacing

    def rhs_at(O1: np.ndarray, O2: np.ndarray) -> np.ndarray:
        return (-(cfg.a_mu / np.pi) * (Mself @ O1)
                - (cfg.a_mu / np.pi) * (P_tgt @ O2)
                - 2.0 * cfg.a_rho * F)

    # gauge: the identity is affine in the additive constant c1; solve at node 0
    O2_0 = omega2_potential(O1_0)
    ones = np.ones(n)
    O2_lin = omega2_potential(ones)
    r0 = rhs_at(O1_0, O2_0)[0] - O1_0[0]
    slope = 1.0 - (rhs_at(ones, O2_lin)[0] - rhs_at(np.zeros(n), np.zeros(n))[0])
    if abs(slope) < 1e-12:
        raise RegimeError("potential gauge equation is degenerate")
    c1 = r0 / slope
    O1 = O1_0 + c1
    O2 = omega2_potential(O1)

    O1fld = forward(O1, grid, fld.time_tag)
    O2fld = forward(O2, grid, fld.time_tag)
    err1 = _f01(inverse(derivative(O1fld)) - inverse(pair.omega1))
    err2 = _f01(inverse(derivative(O2fld)) - inverse(pair.omega2))
    scale = max(_f01(inverse(pair.omega1)), _f01(inverse(pair.omega2)), 1e-12)
    if max(err1, err2) > consistency_tol * max(1.0, scale):
        raise InternalConsistencyError(
            f"potential derivatives disagree with strengths: {err1:.3g}, {err2:.3g}"
        )
    return PotentialPair(O1fld, O2fld)


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs


def vorticity_bound_check(pair: VorticityPair, f, cfg: FluidConfig,
                          nu: float = 0.0, t: float = 0.0) -> list[BoundCheck]:
    """Evaluate the four strength inequalities against the constant ledger.

    Raises RegimeError when the ledger constants are undefined at this size.
    """
    fld, _ = _interface_samples(f)
    a0 = fourier_norm(fld, NormSpec(0.0, nu, t))
    a1 = fourier_norm(fld, NormSpec(1.0, nu, t))
    led = certify.ledger(a0, a1, cfg)
    if led.c1 is None or led.c3 is None or led.c4 is None:
        raise RegimeError(f"ledger constants undefined at (a0, a1) = ({a0:.3g}, {a1:.3g})")
    f11 = a1
    f21 = fourier_norm(fld, NormSpec(2.0, nu, t))
    w1_0 = fourier_norm(pair.omega1, NormSpec(0.0, nu, t))
    w1_1 = fourier_norm(pair.omega1, NormSpec(1.0, nu, t))
    w2_0 = fourier_norm(pair.omega2, NormSpec(0.0, nu, t))
    w2_1 = fourier_norm(pair.omega2, NormSpec(1.0, nu, t))
    two_ar = 2.0 * cfg.a_rho
    ak = abs(cfg.a_kappa)
    return [
        BoundCheck("omega1_F01", w1_0, two_ar * led.c1 * f11),
        BoundCheck("omega2_F01", w2_0, two_ar * ak * led.c0 * led.c1 * f11),
        BoundCheck("omega1_F11", w1_1, two_ar * led.c1 * led.c3 * f21),
        BoundCheck("omega2_F11", w2_1, two_ar * ak * led.c1 * led.c4 * f21),
    ]
