"""Time-dependent fields: free Gaussian evolution, spectral-quadrature
propagation of the scattered components, the analytic bounce-series packets,
and stationary-phase peak predictors.

Geometry: one-sided incidence with the barrier on [0, L]; region I is x <= 0
(incident + reflected), region II is 0 <= x <= L (intra-barrier pair), region
III is x >= L (transmitted).  All propagation is spectral quadrature of
stationary solutions over the clipped momentum window; there is no PDE
time-stepping anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Dispersion,
    PhysicalConfig,
    ZoneError,
    momentum_window,
)
from .stationary import above_barrier_coeffs, above_barrier_phase_derivative

__all__ = [
    "SpatialGrid",
    "WaveField",
    "FieldPeak",
    "ValidityReport",
    "COMPONENT_TAGS",
    "free_gaussian",
    "free_gaussian_peak",
    "propagate_component",
    "propagate_tunnel_transmitted",
    "multipeak_term_field",
    "multipeak_partial_sum_field",
    "series_validity",
    "spm_peak_prediction",
    "field_norm",
    "field_peak",
]

COMPONENT_TAGS = ("incident", "reflected", "alpha", "beta", "transmitted")

_REGION_TOL = 1e-9


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform spatial grid on [x_min, x_max] with n_points samples."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self) -> None:
        if self.n_points < 2:
            raise ValueError("a grid needs at least 2 points")
        if not self.x_max > self.x_min:
            raise ValueError("grid bounds must be strictly increasing")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)


@dataclass(frozen=True)
class WaveField:
    """Complex field sampled on a grid at a fixed time."""

    grid: SpatialGrid
    values: np.ndarray
    t: float
    component_tag: str

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2


@dataclass(frozen=True)
class FieldPeak:
    x: float
    density: float
    degenerate: bool


def field_norm(f: WaveField) -> float:
    """Integrated probability of the field (trapezoidal rule)."""
    return float(np.trapezoid(f.density(), dx=f.grid.spacing))


def field_peak(f: WaveField) -> FieldPeak:
    """Position and height of the density maximum, lowest-x tie break.

    A field with no structure (all samples equal) is flagged degenerate and
    reports the lowest grid point.
    """
    dens = f.density()
    i = int(np.argmax(dens))  # argmax already takes the first (lowest-x) maximum
    degenerate = bool(np.all(dens == dens[0]))
    if degenerate:
        i = 0
    return FieldPeak(x=float(f.grid.x[i]), density=float(dens[i]), degenerate=degenerate)


# ---------------------------------------------------------------------------
# free Gaussian packet
# ---------------------------------------------------------------------------

def free_gaussian(x, t: float, cfg: PhysicalConfig):
    """Closed-form free Gaussian packet (non-relativistic dispersion).

    Unit norm for all t; |psi|^2 peaks on the ballistic trajectory
    x0 + (k0/m) t and spreads by the factor sqrt(1 + (2t/(m a^2))^2).
    """
    if cfg.dispersion is not Dispersion.NONRELATIVISTIC:
        raise ZoneError("the closed-form free packet is non-relativistic")
    x = np.asarray(x, dtype=float)
    out = _free_envelope(x - cfg.x0, t, cfg)
    return out if out.ndim else complex(out)


def _free_envelope(X, t: float, cfg: PhysicalConfig):
    """Envelope phi[X, t]: the free packet as a function of X = x - x0."""
    m, a, k0 = cfg.m, cfg.a, cfg.k0
    tau = 2.0 * t / (m * a * a)
    prefactor = (math.pi * a * a / 2.0 * (1.0 + tau * tau)) ** -0.25
    E0 = k0 * k0 / (2.0 * m)
    return prefactor * np.exp(
        -(X - k0 * t / m) ** 2 / (a * a * (1.0 + 1j * tau))
        - 0.5j * np.arctan(tau)
        + 1j * (k0 * X - E0 * t))


def free_gaussian_peak(t: float, cfg: PhysicalConfig) -> float:
    """Ballistic peak position x0 + (k0/m) t of the free packet."""
    return cfg.x0 + cfg.k0 * t / cfg.m


# ---------------------------------------------------------------------------
# spectral-quadrature propagation
# ---------------------------------------------------------------------------

def _require_region(tag: str, grid: SpatialGrid, cfg: PhysicalConfig) -> None:
    tol = _REGION_TOL * max(1.0, abs(grid.x_max), abs(grid.x_min), cfg.L)
    if tag in ("incident", "reflected"):
        ok = grid.x_max <= tol
        region = "x <= 0"
    elif tag in ("alpha", "beta"):
        ok = grid.x_min >= -tol and grid.x_max <= cfg.L + tol
        region = "0 <= x <= L"
    elif tag == "transmitted":
        ok = grid.x_min >= cfg.L - tol
        region = "x >= L"
    else:
        raise ValueError(f"unknown component tag {tag!r}; expected one of {COMPONENT_TAGS}")
    if not ok:
        raise ValueError(f"grid [{grid.x_min:g}, {grid.x_max:g}] lies outside the "
                         f"{tag!r} region ({region}, L = {cfg.L:g})")


def _kahan_accumulate(total: np.ndarray, comp: np.ndarray, term: np.ndarray) -> None:
    # compensated (Kahan) update, in place; fixed evaluation order by caller
    y = term - comp
    t = total + y
    comp[...] = (t - total) - y
    total[...] = t


def _quadrature_field(ks: np.ndarray, weights: np.ndarray, coefs: np.ndarray,
                      spatial_k: np.ndarray, xs: np.ndarray, sign: float,
                      phases_t: np.ndarray) -> np.ndarray:
    """Fixed-order compensated sum over the momentum grid.

    Each momentum contributes weight * coef * e^{i(phase_t)} * e^{i sign kx x};
    summation order is the ascending momentum grid, identical for any worker
    count.
    """
    total = np.zeros(xs.shape, dtype=complex)
    comp = np.zeros(xs.shape, dtype=complex)
    for j in range(ks.size):
        term = (weights[j] * coefs[j] * phases_t[j]) * np.exp(1j * sign * spatial_k[j] * xs)
        _kahan_accumulate(total, comp, term)
    return total


def _component_pieces(tag: str, ks: np.ndarray, cfg: PhysicalConfig):
    """(coef(k), spatial momentum, sign) for each scattered component."""
    if tag == "incident":
        return np.ones_like(ks, dtype=complex), ks, +1.0
    coeffs = above_barrier_coeffs(ks, cfg)
    if tag == "reflected":
        return coeffs.R, ks, -1.0
    q = np.sqrt(ks * ks - cfg.w ** 2)
    if tag == "alpha":
        return coeffs.alpha_coef, q, +1.0
    if tag == "beta":
        return coeffs.beta_coef, q, -1.0
    if tag == "transmitted":
        return coeffs.T, ks, +1.0
    raise ValueError(f"unknown component tag {tag!r}")


def propagate_component(tag: str, grid: SpatialGrid, t: float, cfg: PhysicalConfig,
                        *, tol: float = 1e-6, n_k: int = 513,
                        max_n_k: int = 16385) -> WaveField:
    """Propagate one scattered component by quadrature over the momentum window.

    The window is k0 +- 8/a clipped to the above-barrier zone (w, inf); the
    trapezoidal momentum grid is refined by doubling until the field changes
    by less than `tol` anywhere, so the reported values are grid-converged.
    Deterministic: fixed evaluation order, independent of worker count.
    """
    if cfg.dispersion is not Dispersion.NONRELATIVISTIC:
        raise ZoneError("component propagation uses the non-relativistic solutions")
    _require_region(tag, grid, cfg)
    if cfg.L == 0.0:
        # zero-width barrier: free propagation (R = 0, T = 1 identically)
        if tag in ("incident", "transmitted"):
            values = np.asarray(free_gaussian(grid.x, t, cfg), dtype=complex)
        elif tag == "reflected":
            values = np.zeros(grid.n_points, dtype=complex)
        else:
            raise ValueError("a zero-width barrier has no interior region")
        return WaveField(grid=grid, values=values, t=t, component_tag=tag)
    lo, hi = momentum_window(cfg, lower=cfg.w * (1.0 + 1e-12))
    xs = grid.x

    def evaluate(n: int) -> np.ndarray:
        ks = np.linspace(lo, hi, n)
        dk = ks[1] - ks[0]
        weights = np.full(n, dk)
        weights[0] = weights[-1] = 0.5 * dk
        coefs, spatial_k, sign = _component_pieces(tag, ks, cfg)
        E = ks * ks / (2.0 * cfg.m)
        g = (cfg.a ** 2 / (2.0 * np.pi)) ** 0.25 * np.exp(-cfg.a ** 2 * (ks - cfg.k0) ** 2 / 4.0)
        phases_t = g / math.sqrt(2.0 * math.pi) * np.exp(-1j * (E * t + ks * cfg.x0))
        return _quadrature_field(ks, weights, coefs, spatial_k, xs, sign, phases_t)

    values = evaluate(n_k)
    n = n_k
    while n < max_n_k:
        n = 2 * n - 1
        refined = evaluate(n)
        if float(np.max(np.abs(refined - values))) < tol:
            values = refined
            break
        values = refined
    return WaveField(grid=grid, values=values, t=t, component_tag=tag)


def propagate_tunnel_transmitted(grid: SpatialGrid, t: float, cfg: PhysicalConfig,
                                 *, tol: float = 1e-6, n_k: int = 513,
                                 max_n_k: int = 16385) -> WaveField:
    """Transmitted packet of the tunneling geometry (barrier on [-L/2, L/2]).

    Quadrature of |T| e^{i theta} e^{ik(x - L/2)} over the momentum window
    clipped to the tunneling zone (0, w).
    """
    from .stationary import tunnel_amplitude_nr

    if cfg.dispersion is not Dispersion.NONRELATIVISTIC:
        raise ZoneError("tunnel propagation uses the non-relativistic solutions")
    half = 0.5 * cfg.L
    if grid.x_min < half - _REGION_TOL * max(1.0, abs(grid.x_max)):
        raise ValueError("transmitted grid must lie beyond the exit face x = L/2")
    lo, hi = momentum_window(cfg, lower=1e-12 * cfg.w, upper=cfg.w * (1.0 - 1e-12))
    xs = grid.x

    def evaluate(n: int) -> np.ndarray:
        ks = np.linspace(lo, hi, n)
        dk = ks[1] - ks[0]
        weights = np.full(n, dk)
        weights[0] = weights[-1] = 0.5 * dk
        sc = tunnel_amplitude_nr(ks, cfg)
        T_exit = (2.0 * ks * np.sqrt(cfg.w ** 2 - ks * ks) / sc.F) * np.exp(1j * sc.theta)
        E = ks * ks / (2.0 * cfg.m)
        g = (cfg.a ** 2 / (2.0 * np.pi)) ** 0.25 * np.exp(-cfg.a ** 2 * (ks - cfg.k0) ** 2 / 4.0)
        base = g / math.sqrt(2.0 * math.pi) * T_exit * np.exp(-1j * (E * t + ks * cfg.x0))
        total = np.zeros(xs.shape, dtype=complex)
        comp = np.zeros(xs.shape, dtype=complex)
        for j in range(n):
            term = (weights[j] * base[j]) * np.exp(1j * ks[j] * (xs - half))
            _kahan_accumulate(total, comp, term)
        return total

    values = evaluate(n_k)
    n = n_k
    while n < max_n_k:
        n = 2 * n - 1
        refined = evaluate(n)
        if float(np.max(np.abs(refined - values))) < tol:
            values = refined
            break
        values = refined
    return WaveField(grid=grid, values=values, t=t, component_tag="transmitted-tunnel")


# ---------------------------------------------------------------------------
# analytic bounce-series packets
# ---------------------------------------------------------------------------

def _series_basics(cfg: PhysicalConfig):
    k0, w, L = cfg.k0, cfg.w, cfg.L
    if not k0 > w:
        raise ZoneError(f"the bounce series needs k0 > w = {w:g}")
    q0 = math.sqrt(k0 * k0 - w * w)
    u = (k0 - q0) / (k0 + q0)
    step = u * np.exp(-1j * (w * w / q0) * L)   # per-half-bounce factor; terms carry step^(2n)
    return k0, q0, w, L, u, step


def multipeak_term_field(tag: str, n: int, grid: SpatialGrid, t: float,
                         cfg: PhysicalConfig) -> WaveField:
    """n-th analytic bounce term (n >= 1) of one scattered component.

    Built from frozen-coefficient free-Gaussian envelopes with arguments
    shifted by the accumulated intra-barrier path, so each term moves at the
    ballistic speed of its region and successive terms are delayed by one
    round trip 2 (m/q0) L.
    """
    if n < 1:
        raise ValueError("bounce terms are indexed from 1")
    _require_region("incident" if tag == "incident" else tag, grid, cfg)
    k0, q0, w, L, u, step = _series_basics(cfg)
    xs = grid.x
    ratio = k0 / q0

    if tag == "incident":
        values = _free_envelope(xs - cfg.x0, t, cfg) if n == 1 else np.zeros_like(xs, dtype=complex)
    elif tag == "reflected":
        if n == 1:
            values = u * _free_envelope(-xs - cfg.x0, t, cfg)
        else:
            j = n - 2
            pref = (4.0 * k0 * q0 * (q0 - k0) / (k0 + q0) ** 3
                    * np.exp(-2j * (w * w / q0) * L))
            values = pref * step ** (2 * j) * _free_envelope(
                -xs - cfg.x0 + 2.0 * (j + 1) * ratio * L, t, cfg)
    elif tag == "alpha":
        j = n - 1
        pref = 2.0 * k0 / (k0 + q0) * np.exp(-1j * (w * w / q0) * xs)
        values = pref * step ** (2 * j) * _free_envelope(
            (xs + 2.0 * j * L) * ratio - cfg.x0, t, cfg)
    elif tag == "beta":
        j = n - 1
        pref = (2.0 * k0 * (q0 - k0) / (k0 + q0) ** 2
                * np.exp(1j * (w * w / q0) * (xs - 2.0 * L)))
        values = pref * step ** (2 * j) * _free_envelope(
            (2.0 * j * L + 2.0 * L - xs) * ratio - cfg.x0, t, cfg)
    elif tag == "transmitted":
        j = n - 1
        pref = (4.0 * k0 * q0 / (k0 + q0) ** 2
                * np.exp(-1j * (w * w / q0) * L))
        values = pref * step ** (2 * j) * _free_envelope(
            xs - cfg.x0 - L + (2.0 * j + 1.0) * ratio * L, t, cfg)
    else:
        raise ValueError(f"unknown component tag {tag!r}")
    return WaveField(grid=grid, values=np.asarray(values, dtype=complex), t=t,
                     component_tag=f"{tag}:{n}")


def multipeak_partial_sum_field(tag: str, n_terms: int, grid: SpatialGrid, t: float,
                                cfg: PhysicalConfig) -> WaveField:
    """Partial sum of the first n_terms analytic bounce terms of one component."""
    if n_terms < 1:
        raise ValueError("partial sums need at least one term")
    values = np.zeros(grid.n_points, dtype=complex)
    for n in range(1, n_terms + 1):
        values = values + multipeak_term_field(tag, n, grid, t, cfg).values
    return WaveField(grid=grid, values=values, t=t,
                     component_tag=f"{tag}:sum{n_terms}")


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    margin: float


def series_validity(cfg: PhysicalConfig) -> ValidityReport:
    """Trust predicate for the analytic bounce series.

    The per-bounce intra-barrier phase must not wrap across the momentum
    spread of the packet: (k0/q0) (L/a) < pi.  margin is pi minus that
    product (always pi at L = 0).
    """
    k0, w, L = cfg.k0, cfg.w, cfg.L
    if not k0 > w:
        raise ZoneError(f"series validity applies above the barrier (k0 > w = {w:g})")
    if L == 0.0:
        return ValidityReport(valid=True, margin=math.pi)
    q0 = math.sqrt(k0 * k0 - w * w)
    spread = (k0 / q0) * (L / cfg.a)
    return ValidityReport(valid=spread < math.pi, margin=math.pi - spread)


# ---------------------------------------------------------------------------
# stationary-phase peak predictors (the naive single-peak reading)
# ---------------------------------------------------------------------------

def spm_peak_prediction(tag: str, t: float, cfg: PhysicalConfig,
                        spectral_phase_slope: float | None = None) -> float:
    """Naive stationary-phase peak position of one component at time t.

    These predictions deliberately reproduce the single-peak reading of the
    scattered phases, discontinuities included; the bounce series is the
    corrected account.  `spectral_phase_slope` is d(lambda)/dk at k0 of an
    extra spectral phase and shifts every prediction by its negative, the
    space-translation rule of the free packet.
    """
    k0, m, L, x0 = cfg.k0, cfg.m, cfg.L, cfg.x0
    v_k = k0 / m
    if tag == "incident":
        x = x0 + v_k * t
    else:
        q0 = math.sqrt(k0 * k0 - cfg.w ** 2) if k0 > cfg.w else None
        if q0 is None:
            raise ZoneError("naive predictions for scattered components need k0 > w")
        v_q = q0 / m
        dtheta = float(above_barrier_phase_derivative(k0, cfg))
        if tag == "reflected":
            x = -x0 + dtheta - v_k * t
        elif tag == "alpha":
            x = L + v_q * (t + (x0 - dtheta) / v_k)
        elif tag == "beta":
            x = L - v_q * (t + (x0 - dtheta) / v_k)
        elif tag == "transmitted":
            x = x0 + L - dtheta + v_k * t
        else:
            raise ValueError(f"unknown component tag {tag!r}")
    if spectral_phase_slope is not None:
        x -= spectral_phase_slope
    return x
