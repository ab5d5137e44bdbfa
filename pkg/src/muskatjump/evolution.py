"""Interface evolution: right-hand side assembly, exponential integrator, trajectories.

The graph height advances by (I1 + I2 + I3 + I4)/2pi.  The fast path computes
the singular/linear content with exact per-mode multipliers (Hilbert symbol,
conjugate-Poisson decay symbol) and the remaining nonlinear corrections by
alternating-rule or exponential-series quadrature; the exact linear multiplier
m(xi) is removed and handled by the integrating factor of an ETDRK2 scheme.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import certify
from .errors import (BlowUpError, ConfigurationError, GeometryError, StepSizeError)
from .norms import NormSpec, fourier_norm, norm_report, weighted_l2
from .spectral import (GridSpec, SpectralField, dealias, derivative, forward,
                       hermitian_symmetrize, hilbert, inverse)
from .vorticity import (FluidConfig, VorticityPair, _Workspace, check_geometry,
                        solve_vorticity, target_series_apply, _series_nmax)

DEFAULT_LEAKAGE_THRESHOLD = 1e-4
DEFAULT_CFL_BOUND = 1.0
_PHI_SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class InterfaceField:
    """Graph height of the fluid interface at one time."""

    f: SpectralField
    time: float = 0.0

    def __post_init__(self):
        if not self.f.is_real_symmetric(1e-10):
            raise ConfigurationError("interface height must be real-symmetric")
        if self.time < 0:
            raise ConfigurationError("time must be nonnegative")

    @classmethod
    def from_samples(cls, samples, grid: GridSpec, time: float = 0.0) -> "InterfaceField":
        return cls(forward(np.asarray(samples, dtype=float), grid, time), time)

    def samples(self) -> np.ndarray:
        return inverse(self.f)


@dataclass(frozen=True)
class SolverOptions:
    picard_tol: float = 1e-11
    picard_max_iter: int = 80
    series_tol: float = 1e-10
    leakage_threshold: float = DEFAULT_LEAKAGE_THRESHOLD
    cfl_bound: float = DEFAULT_CFL_BOUND
    order: int = 2                 # exponential integrator order, 2 or 4
    zero_nonlinear: bool = False   # test hook: pure linear evolution
    collect_diagnostics: bool = False

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ConfigurationError(f"integrator order must be 2 or 4, got {self.order!r}")


@dataclass(frozen=True)
class RhsBreakdown:
    """The four interface integrals and their linear/nonlinear split."""

    i1: SpectralField
    i2: SpectralField
    i3: SpectralField
    i4: SpectralField
    linear_part: SpectralField
    nonlinear_part: SpectralField
    n_terms: dict | None = None


def leakage(f: InterfaceField, band_fraction: float = 0.10) -> float:
    """max |f| over the outer band (split across both domain ends)."""
    F = f.samples()
    n = len(F)
    half_band = max(int(round(n * band_fraction / 2.0)), 1)
    return float(max(np.max(np.abs(F[:half_band])), np.max(np.abs(F[-half_band:]))))


def check_leakage(f: InterfaceField, threshold: float) -> None:
    leak = leakage(f)
    if leak > threshold:
        raise GeometryError(f"boundary leakage {leak:.3g} exceeds threshold {threshold:.3g}")


def linear_symbol(xi, cfg: FluidConfig):
    """Exact decay rate m(xi) of the linearized evolution; the linear part is -m(xi) f_hat."""
    axi = np.abs(xi)
    return cfg.a_rho * axi * (
        1.0 - cfg.a_kappa * (1.0 - cfg.a_mu) / (np.exp(2.0 * cfg.h2 * axi) - cfg.a_kappa * cfg.a_mu)
    )


def _rhs_core(f: InterfaceField, cfg: FluidConfig, opts: SolverOptions):
    """Samples and spectra of I1..I4 plus the solved strength pair."""
    check_geometry(f, cfg)
    grid = f.f.grid
    F = f.samples()
    dF = inverse(derivative(f.f))
    ws = _Workspace(grid, F, dF)
    pair = solve_vorticity(f, cfg, tol=opts.picard_tol, max_iter=opts.picard_max_iter,
                           workspace=ws)
    w1 = inverse(pair.omega1)
    w2hat = pair.omega2.coefficients

    a0 = fourier_norm(f.f, NormSpec(0.0))
    n_max = _series_nmax(a0 / cfg.h2, 1.0, opts.series_tol, cfg.h2)
    if n_max is None:
        raise GeometryError(
            f"target-side series unavailable: ||f||_F01 = {a0:.3g} >= h2 = {cfg.h2:.3g}"
        )

    # I1 = pi H(w1) plus the alternating-rule correction with the squared
    # difference-quotient factor
    i1 = np.pi * inverse(hilbert(pair.omega1)) + ws.matrix_i1_correction() @ w1
    i2 = ws.matrix_i2() @ w1
    i3 = target_series_apply(w2hat, F, grid, cfg.h2, n_max, conj=True)
    i4 = dF * target_series_apply(w2hat, F, grid, cfg.h2, n_max, conj=False)
    return F, (i1, i2, i3, i4), pair


def _split(f: InterfaceField, cfg: FluidConfig, total_hat: np.ndarray):
    # both sides of the split live on the dealiased band, so the remainder is
    # identically zero above the 2/3 cutoff and high modes evolve purely by
    # the integrating factor
    grid = f.f.grid
    m = linear_symbol(grid.wavenumbers(), cfg)
    linear_hat = dealias(-m * f.f.coefficients, grid)
    nonlinear_hat = total_hat - linear_hat
    return linear_hat, nonlinear_hat


def rhs(f: InterfaceField, cfg: FluidConfig, opts: SolverOptions | None = None) -> RhsBreakdown:
    """Assemble the interface right-hand side and its linear/nonlinear split."""
    opts = opts or SolverOptions()
    grid = f.f.grid
    check_leakage(f, opts.leakage_threshold)
    F, (i1, i2, i3, i4), pair = _rhs_core(f, cfg, opts)

    def to_field(samples):
        fld = forward(samples, grid, f.time)
        return fld.with_coefficients(dealias(fld.coefficients, grid))

    i1f, i2f, i3f, i4f = map(to_field, (i1, i2, i3, i4))
    total_hat = (i1f.coefficients + i2f.coefficients
                 + i3f.coefficients + i4f.coefficients) / (2.0 * np.pi)
    linear_hat, nonlinear_hat = _split(f, cfg, total_hat)

    diag = None
    if opts.collect_diagnostics:
        diag = _nonlinear_diagnostics(f, cfg, pair, i1f, i3f)
    return RhsBreakdown(
        i1=i1f, i2=i2f, i3=i3f, i4=i4f,
        linear_part=SpectralField(grid, hermitian_symmetrize(linear_hat), f.time),
        nonlinear_part=SpectralField(grid, hermitian_symmetrize(nonlinear_hat), f.time),
        n_terms=diag,
    )


def _nonlinear_diagnostics(f: InterfaceField, cfg: FluidConfig, pair: VorticityPair,
                           i1f: SpectralField, i3f: SpectralField) -> dict:
    """F^{0,1} sizes of the named nonlinear pieces of the mode-space split."""
    grid = f.f.grid
    xi = grid.wavenumbers()
    axi = np.abs(xi)
    decay = np.exp(-cfg.h2 * axi)
    w1hat, w2hat = pair.omega1.coefficients, pair.omega2.coefficients
    fhat = f.f.coefficients
    n_w2 = w2hat - (-cfg.a_kappa * decay * w1hat)
    n_w1 = w1hat - (-cfg.a_mu * decay * w2hat - 2.0 * cfg.a_rho * (1j * xi) * fhat)
    denom = np.exp(2.0 * cfg.h2 * axi) - cfg.a_kappa * cfg.a_mu
    sgn = np.sign(xi)
    n1 = -0.5j * sgn * decay * n_w2
    n2 = 0.5j * sgn * cfg.a_kappa / denom * n_w1
    n3 = 0.5j * sgn * cfg.a_kappa * cfg.a_mu * decay / denom * n_w2
    n0 = i1f.coefficients / (2.0 * np.pi) - 0.5 * (-1j * sgn) * w1hat
    n4 = i3f.coefficients / (2.0 * np.pi) - 0.5 * (-1j * sgn) * decay * w2hat

    def size(c):
        return float(np.sum(np.abs(c)))

    return {"N0": size(n0), "N1": size(n1), "N2": size(n2), "N3": size(n3),
            "N4": size(n4), "N(omega1)": size(n_w1), "N(omega2)": size(n_w2)}


def nonlinear_tendency(f: InterfaceField, cfg: FluidConfig,
                       opts: SolverOptions) -> np.ndarray:
    """Coefficients of the nonlinear remainder N(f) = rhs - linear part."""
    if opts.zero_nonlinear:
        return np.zeros(f.f.grid.n_points, dtype=complex)
    grid = f.f.grid
    _, (i1, i2, i3, i4), _ = _rhs_core(f, cfg, opts)
    total = forward((i1 + i2 + i3 + i4) / (2.0 * np.pi), grid).coefficients
    total = dealias(total, grid)
    _, nonlinear_hat = _split(f, cfg, total)
    return hermitian_symmetrize(nonlinear_hat)


def _phi1(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    small = np.abs(z) < _PHI_SERIES_CUTOFF
    zs = z[small]
    out[small] = 1.0 + zs / 2.0 + zs ** 2 / 6.0 + zs ** 3 / 24.0
    zb = z[~small]
    out[~small] = np.expm1(zb) / zb
    return out


def _phi2(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    small = np.abs(z) < _PHI_SERIES_CUTOFF
    zs = z[small]
    out[small] = 0.5 + zs / 6.0 + zs ** 2 / 24.0 + zs ** 3 / 120.0
    zb = z[~small]
    out[~small] = (np.expm1(zb) - zb) / zb ** 2
    return out


def _etdrk4_weights(z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quadrature weights f1, f2, f3 of the four-stage exponential scheme.

    Small arguments use the Taylor expansions to avoid the z^3 cancellation;
    the linear spectrum here is real and nonpositive, so no contour averaging
    is needed.
    """
    f1 = np.empty_like(z)
    f2 = np.empty_like(z)
    f3 = np.empty_like(z)
    small = np.abs(z) < 1e-2
    zs = z[small]
    f1[small] = 1.0 / 6.0 + zs / 6.0 + 3.0 * zs ** 2 / 40.0 + zs ** 3 / 45.0
    f2[small] = 1.0 / 6.0 + zs / 12.0 + zs ** 2 / 40.0 + zs ** 3 / 180.0
    f3[small] = 1.0 / 6.0 - zs ** 2 / 120.0 - zs ** 3 / 360.0
    zb = z[~small]
    ez = np.exp(zb)
    f1[~small] = (-4.0 - zb + ez * (4.0 - 3.0 * zb + zb ** 2)) / zb ** 3
    f2[~small] = (2.0 + zb + ez * (-2.0 + zb)) / zb ** 3
    f3[~small] = (-4.0 - 3.0 * zb - zb ** 2 + ez * (4.0 - zb)) / zb ** 3
    return f1, f2, f3


@dataclass(frozen=True)
class _StepperCoeffs:
    order: int
    exp_lin: np.ndarray
    dt_phi1: np.ndarray
    dt_phi2: np.ndarray
    exp_half: np.ndarray | None = None
    half_phi1: np.ndarray | None = None
    w1: np.ndarray | None = None
    w2: np.ndarray | None = None
    w3: np.ndarray | None = None


def _stepper_coeffs(grid: GridSpec, cfg: FluidConfig, dt: float,
                    order: int = 2) -> _StepperCoeffs:
    z = -linear_symbol(grid.wavenumbers(), cfg) * dt
    if order == 2:
        return _StepperCoeffs(2, np.exp(z), dt * _phi1(z), dt * _phi2(z))
    f1, f2, f3 = _etdrk4_weights(z)
    return _StepperCoeffs(4, np.exp(z), dt * f1, dt * _phi2(z),
                          exp_half=np.exp(z / 2.0),
                          half_phi1=0.5 * dt * _phi1(z / 2.0),
                          w1=dt * f1, w2=dt * f2, w3=dt * f3)


def step(state: InterfaceField, dt: float, cfg: FluidConfig,
         opts: SolverOptions | None = None,
         coeffs: _StepperCoeffs | None = None) -> InterfaceField:
    """One exponential-integrator step (two-stage by default, four-stage optional).

    The linear multiplier is applied through its exact integrating factor; the
    nonlinear remainder is treated explicitly.
    """
    opts = opts or SolverOptions()
    if dt <= 0:
        raise StepSizeError(f"dt must be positive, got {dt!r}")
    grid = state.f.grid
    co = coeffs or _stepper_coeffs(grid, cfg, dt, opts.order)
    if co.order != opts.order:
        co = _stepper_coeffs(grid, cfg, dt, opts.order)

    def tendency(hat, label):
        fld = InterfaceField(SpectralField(grid, hermitian_symmetrize(hat), state.time),
                             state.time)
        n = nonlinear_tendency(fld, cfg, opts)
        if not np.all(np.isfinite(n)):
            raise BlowUpError(f"non-finite nonlinear tendency ({label})", state, state.time)
        return n

    fhat = state.f.coefficients
    n0 = nonlinear_tendency(state, cfg, opts)
    if not np.all(np.isfinite(n0)):
        raise BlowUpError("non-finite nonlinear tendency", state, state.time)

    speed = float(np.max(np.abs(np.fft.ifft(n0 * grid.n_points).real)))
    xi_max = float(np.max(np.abs(grid.wavenumbers())))
    if dt * speed * xi_max > opts.cfl_bound:
        raise StepSizeError(
            f"dt*max|N|*xi_max = {dt * speed * xi_max:.3g} exceeds bound {opts.cfl_bound}"
        )

    if opts.order == 2:
        stage = co.exp_lin * fhat + co.dt_phi1 * n0
        n1 = tendency(stage, "stage two")
        new_hat = stage + co.dt_phi2 * (n1 - n0)
    else:
        a = co.exp_half * fhat + co.half_phi1 * n0
        na = tendency(a, "stage a")
        b = co.exp_half * fhat + co.half_phi1 * na
        nb = tendency(b, "stage b")
        c = co.exp_half * a + co.half_phi1 * (2.0 * nb - n0)
        nc = tendency(c, "stage c")
        new_hat = (co.exp_lin * fhat + co.w1 * n0 + 2.0 * co.w2 * (na + nb)
                   + co.w3 * nc)
    if not np.all(np.isfinite(new_hat)):
        raise BlowUpError("non-finite coefficients after step", state, state.time)
    t_new = state.time + dt
    return InterfaceField(SpectralField(grid, hermitian_symmetrize(new_hat), t_new), t_new)


@dataclass
class BudgetRow:
    """One snapshot of the running decay-budget inequality for one weight s."""

    s: int
    time: float
    lhs: float
    rhs: float

    @property
    def satisfied(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + 1e-6)


@dataclass
class TrajectoryRecord:
    """Snapshot norms, budget checks and the checkpoint payload of one run."""

    times: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    budget: dict = field(default_factory=lambda: {0: [], 1: []})
    leakage: list = field(default_factory=list)
    l2_bound: list = field(default_factory=list)
    config_hash: str = ""
    nu: float = 0.0
    certificate: "certify.Certificate | None" = None
    final_state: InterfaceField | None = None
    budget_violated: bool = False

    def snapshot_rows(self) -> list[dict]:
        rows = []
        for i, (t, rep) in enumerate(zip(self.times, self.reports)):
            rows.append({
                "t": t,
                "F01": rep.f01, "F11": rep.f11, "F21": rep.f21, "F3half": rep.f3half,
                "L2nu": rep.l2nu,
                "strip_radius": rep.strip_radius if rep.strip_radius is not None else float("nan"),
                "budget_s0_lhs": self.budget[0][i].lhs, "budget_s0_rhs": self.budget[0][i].rhs,
                "budget_s1_lhs": self.budget[1][i].lhs, "budget_s1_rhs": self.budget[1][i].rhs,
                "leakage": self.leakage[i],
            })
        return rows


@dataclass(frozen=True)
class Schedule:
    t_end: float
    dt: float
    snapshot_every: int = 1   # snapshot every k-th step

    def __post_init__(self):
        if self.t_end <= 0 or self.dt <= 0 or self.snapshot_every < 1:
            raise ConfigurationError("schedule needs t_end > 0, dt > 0, snapshot_every >= 1")


@dataclass
class MonitorState:
    """Resumable accumulator for the budget and weighted-L2 monitors.

    Carries everything derived from the *initial* certificate (nu, budget
    coefficients, growth rates) so a resumed run reproduces the fresh run's
    arithmetic bit for bit.
    """

    nu: float
    rhs0: dict
    coef: dict
    growth: tuple | None
    integral: dict
    y0: float
    f32_max: float
    f32_int: float
    prev_t: float | None = None
    prev_f11: float | None = None
    prev_f21: float | None = None
    prev_f32: float | None = None

    def to_payload(self) -> dict:
        hx = lambda v: float(v).hex()
        return {
            "nu": hx(self.nu),
            "rhs0": [hx(self.rhs0[0]), hx(self.rhs0[1])],
            "coef": [hx(self.coef[0]), hx(self.coef[1])],
            "growth": None if self.growth is None else [hx(v) for v in self.growth],
            "integral": [hx(self.integral[0]), hx(self.integral[1])],
            "y0": hx(self.y0), "f32_max": hx(self.f32_max), "f32_int": hx(self.f32_int),
        }

    @classmethod
    def from_payload(cls, p: dict) -> "MonitorState":
        fh = float.fromhex
        return cls(nu=fh(p["nu"]),
                   rhs0={0: fh(p["rhs0"][0]), 1: fh(p["rhs0"][1])},
                   coef={0: fh(p["coef"][0]), 1: fh(p["coef"][1])},
                   growth=None if p["growth"] is None else tuple(fh(v) for v in p["growth"]),
                   integral={0: fh(p["integral"][0]), 1: fh(p["integral"][1])},
                   y0=fh(p["y0"]), f32_max=fh(p["f32_max"]), f32_int=fh(p["f32_int"]))


def run(f0: InterfaceField, cfg: FluidConfig, schedule: Schedule,
        opts: SolverOptions | None = None,
        certificate: "certify.Certificate | None" = None,
        on_snapshot=None, start_step: int = 0,
        monitor: MonitorState | None = None) -> TrajectoryRecord:
    """Advance to t_end recording norm reports and the running budget inequality.

    The budget checks use nu from the certificate (computed here when not
    supplied) and the time integral of F^{s+1,1}_nu by the trapezoid rule over
    snapshots.  Budget violations are flagged, never silently dropped.  Passing
    ``start_step`` and the checkpointed ``monitor`` continues a previous run
    with bitwise-identical arithmetic.
    """
    opts = opts or SolverOptions()
    check_geometry(f0, cfg)
    check_leakage(f0, opts.leakage_threshold)
    cert = certificate
    if monitor is None:
        cert = cert or certify.certify_datum(f0, cfg)
        nu_cert = cert.nu if cert.nu is not None else 0.0
        th = certify.theta(cfg)
        coef0 = {s: (cfg.a_rho * (th - cert.sigma[s]) - nu_cert)
                 if cert.sigma[s] is not None else 0.0 for s in (0, 1)}
        try:
            growth0 = certify.l2_growth_rates(cert)
        except Exception:
            growth0 = None
        monitor = MonitorState(
            nu=nu_cert,
            rhs0={s: fourier_norm(f0.f, NormSpec(float(s))) for s in (0, 1)},
            coef=coef0,
            growth=growth0,
            integral={0: 0.0, 1: 0.0},
            y0=weighted_l2(f0.f, NormSpec(0.0, nu_cert, f0.time)),
            f32_max=0.0, f32_int=0.0,
        )
    nu = monitor.nu
    coef = monitor.coef
    growth = monitor.growth

    rec = TrajectoryRecord(config_hash=cfg.hash(), nu=nu, certificate=cert)
    n_steps = int(round(schedule.t_end / schedule.dt))
    coeffs = _stepper_coeffs(f0.f.grid, cfg, schedule.dt, opts.order)
    state = f0

    def take_snapshot(step_index: int, st: InterfaceField):
        t = st.time
        rep = norm_report(st.f, nu, t)
        rec.times.append(t)
        rec.reports.append(rep)
        leak = leakage(st)
        rec.leakage.append(leak)
        if monitor.prev_t is not None:
            dt_snap = t - monitor.prev_t
            monitor.integral[0] += 0.5 * dt_snap * (monitor.prev_f11 + rep.f11)
            monitor.integral[1] += 0.5 * dt_snap * (monitor.prev_f21 + rep.f21)
            monitor.f32_int += 0.5 * dt_snap * (monitor.prev_f32 + rep.f3half)
        monitor.f32_max = max(monitor.f32_max, rep.f3half)
        monitor.prev_t, monitor.prev_f11 = t, rep.f11
        monitor.prev_f21, monitor.prev_f32 = rep.f21, rep.f3half
        for s in (0, 1):
            lhs = fourier_norm(st.f, NormSpec(float(s), nu, t)) + coef[s] * monitor.integral[s]
            row = BudgetRow(s=s, time=t, lhs=lhs, rhs=monitor.rhs0[s])
            rec.budget[s].append(row)
            if not row.satisfied:
                rec.budget_violated = True
        if growth is not None:
            c, c_sq, c_lin = growth
            rec.l2_bound.append(monitor.y0 * math.exp(
                0.5 * (c * t + (c_sq * monitor.f32_max + c_lin) * monitor.f32_int)))
        else:
            rec.l2_bound.append(float("nan"))
        if on_snapshot is not None:
            on_snapshot(step_index, st, rec, monitor)
        if leak > opts.leakage_threshold:
            raise GeometryError(
                f"boundary leakage {leak:.3g} exceeds threshold "
                f"{opts.leakage_threshold:.3g} at t={t:g}"
            )

    take_snapshot(start_step, state)
    for i in range(start_step, n_steps):
        state = step(state, schedule.dt, cfg, opts, coeffs=coeffs)
        # keep time exactly reproducible across restarts
        t_exact = (i + 1) * schedule.dt
        state = InterfaceField(SpectralField(state.f.grid, state.f.coefficients, t_exact),
                               t_exact)
        if (i + 1) % schedule.snapshot_every == 0 or (i + 1) == n_steps:
            take_snapshot(i + 1, state)

    rec.final_state = state
    return rec


# ---------------------------------------------------------------------------
# Checkpointing: exact round-trip of doubles via hex floats.

CHECKPOINT_SCHEMA = "muskatjump-checkpoint-v1"


def checkpoint_payload(state: InterfaceField, cfg: FluidConfig, step_index: int,
                       dt: float, monitor: MonitorState | None = None) -> dict:
    c = state.f.coefficients
    payload = {
        "schema": CHECKPOINT_SCHEMA,
        "config_hash": cfg.hash(),
        "step_index": step_index,
        "dt_hex": float(dt).hex(),
        "time_hex": float(state.time).hex(),
        "n_points": state.f.grid.n_points,
        "domain_length_hex": float(state.f.grid.domain_length).hex(),
        "coeff_re_hex": [float(v).hex() for v in c.real],
        "coeff_im_hex": [float(v).hex() for v in c.imag],
    }
    if monitor is not None:
        payload["monitor"] = monitor.to_payload()
    return payload


def save_checkpoint(path, state: InterfaceField, cfg: FluidConfig, step_index: int,
                    dt: float, monitor: MonitorState | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(checkpoint_payload(state, cfg, step_index, dt, monitor), fh, sort_keys=True)


def load_checkpoint(path, cfg: FluidConfig | None = None):
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("schema") != CHECKPOINT_SCHEMA:
        raise ConfigurationError(f"unknown checkpoint schema {payload.get('schema')!r}")
    if cfg is not None and payload["config_hash"] != cfg.hash():
        raise ConfigurationError("checkpoint was written under a different configuration")
    grid = GridSpec(payload["n_points"], float.fromhex(payload["domain_length_hex"]))
    re = np.array([float.fromhex(v) for v in payload["coeff_re_hex"]])
    im = np.array([float.fromhex(v) for v in payload["coeff_im_hex"]])
    t = float.fromhex(payload["time_hex"])
    state = InterfaceField(SpectralField(grid, re + 1j * im, t), t)
    monitor = MonitorState.from_payload(payload["monitor"]) if "monitor" in payload else None
    return state, payload["step_index"], float.fromhex(payload["dt_hex"]), monitor
