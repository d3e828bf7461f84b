"""Transit-time observables and spectral diagnostics.

Covers the naive single-peak times of above-barrier scattering, the one-way
tunneling phase time with its opaque limit, the filtered-spectrum maximum
search with the distortion criterion, the symmetric-collision triple
(phase = dwell + self-interference, both parities), and the relativistic
phase/dwell/re-scaled-dwell family with its zone-edge limit laws.

Normalized quantities are ratios t / tau_k with tau_k = L / v(k) the
ballistic traversal time.  Dimensionless arguments follow the barrier
parameterization n = k^2/w^2 (non-relativistic functions), alpha =
wL sqrt(1 - n), and n_sq = k^2/w^2 with upsilon = V0/m (relativistic
functions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Dispersion,
    PhysicalConfig,
    ZoneError,
    rho_n_squared,
)
from .stationary import (
    Parity,
    above_barrier_phase_derivative,
    kg_scatter_coeffs,
    symmetric_intra_barrier_coeffs,
)

__all__ = [
    "TimeObservables",
    "NaiveTimes",
    "SpectralMaximum",
    "HartmanCurve",
    "naive_above_barrier_times",
    "reflection_delay",
    "nr_transmission_mag",
    "nr_phase_time",
    "nr_opaque_limit_time",
    "nr_one_way_rate",
    "phase_time_shape",
    "barrier_top_time",
    "kmax_find",
    "distortion_flag",
    "distortion_threshold_length",
    "symmetric_phase_time",
    "symmetric_dwell",
    "symmetric_self_interference",
    "symmetric_dwell_quadrature",
    "symmetric_time_observables",
    "fermion_acceleration_predicate",
    "rel_phase_time",
    "rel_phase_time_near_edge",
    "rel_phase_time_zone_edge",
    "rel_dwell",
    "rel_dwell_zone_edge",
    "rel_rescaled_dwell",
    "rel_self_interference",
    "rel_transmission_zone_edge",
    "rel_variational_residual",
    "rel_time_observables",
    "hartman_curve_nr",
    "hartman_curve_symmetric",
    "hartman_curve_relativistic",
]

_SERIES_EPS = 1e-6    # small-argument switch for 0/0-prone boundary evaluations
_SCALE_ARG = 300.0    # above this, sinh/cosh are evaluated in scaled form


def _as_1d(*values):
    """Broadcast the inputs to a common flat shape; report if all were scalars."""
    arrays = np.broadcast_arrays(*[np.asarray(v, dtype=float) for v in values])
    scalar = arrays[0].ndim == 0
    return [np.atleast_1d(arr) for arr in arrays], scalar


def _restore(out: np.ndarray, scalar: bool):
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class TimeObservables:
    """Transit-time record for one configuration, in absolute units."""

    tau_k: float
    t_phase: float
    t_dwell: float
    t_self: float
    t_dwell_rescaled: float | None = None
    parity: Parity | None = None


@dataclass(frozen=True)
class NaiveTimes:
    """Single-peak reading of the component peak times at one position."""

    incident: float
    reflected: float
    alpha: float
    beta: float
    transmitted: float


@dataclass(frozen=True)
class SpectralMaximum:
    """Argmax of the filtered spectrum g(k - k0) |T(k, L)| over (0, w)."""

    k_max: float
    distorted: bool
    bracket: tuple[float, float]


@dataclass(frozen=True)
class HartmanCurve:
    """Sampled t/tau curve over a sweep, with saturation diagnostics."""

    parameter: np.ndarray
    t_over_tau: np.ndarray
    ratio_to_limit: np.ndarray | None
    limit_description: str
    saturation_parameter: float | None


# ---------------------------------------------------------------------------
# naive above-barrier times (single-peak reading; deliberately uncorrected)
# ---------------------------------------------------------------------------

def naive_above_barrier_times(cfg: PhysicalConfig, x: float) -> NaiveTimes:
    """Peak arrival times at position x under the single-peak reading.

    Physical regions are x <= 0 for incident/reflected, 0 <= x <= L for the
    intra-barrier pair and x >= L for the transmitted wave; the formulas are
    returned verbatim for any x because their discontinuities at the
    interfaces are exactly the point of the corrected bounce decomposition.
    """
    k0, m, L, x0 = cfg.k0, cfg.m, cfg.L, cfg.x0
    if not k0 > cfg.w:
        raise ZoneError(f"naive times need an above-barrier configuration (k0 > w = {cfg.w:g})")
    q0 = math.sqrt(k0 * k0 - cfg.w ** 2)
    v_k, v_q = k0 / m, q0 / m
    dtheta = float(above_barrier_phase_derivative(k0, cfg))
    return NaiveTimes(
        incident=(x - x0) / v_k,
        reflected=-(x + x0 - dtheta) / v_k,
        alpha=(x - L) / v_q - (x0 - dtheta) / v_k,
        beta=-(x - L) / v_q - (x0 - dtheta) / v_k,
        transmitted=(x - x0 - L + dtheta) / v_k,
    )


def reflection_delay(k, cfg: PhysicalConfig):
    """Group delay of the reflected peak, d theta/dE = (m/k) d theta/dk.

    At a transmission resonance this is (mL/q)(k^2+q^2)/(2kq); at
    antiresonance (mL/q)(2kq)/(k^2+q^2).
    """
    k = np.asarray(k, dtype=float)
    out = (cfg.m / k) * above_barrier_phase_derivative(k, cfg)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# non-relativistic one-way tunneling times
# ---------------------------------------------------------------------------

def nr_transmission_mag(k, w: float, L: float):
    """|T| below the barrier, stable through the barrier-top edge k -> w.

    |T| = [1 + w^4 sinh^2(rho L) / (4 k^2 rho^2)]^(-1/2); at k = w the ratio
    sinh^2(rho L)/rho^2 tends to L^2.
    """
    (k,), scalar = _as_1d(k)
    rho_sq = w * w - k * k
    x_sq = rho_sq * L * L
    small = x_sq < _SERIES_EPS ** 2
    safe = np.where(small, 1.0, x_sq)
    ratio = np.where(small, L * L * (1.0 + x_sq / 3.0),
                     np.sinh(np.sqrt(safe)) ** 2 / np.where(small, 1.0, rho_sq))
    return _restore((1.0 + w ** 4 * ratio / (4.0 * k * k)) ** -0.5, scalar)


def nr_phase_time(k_eval, cfg: PhysicalConfig):
    """One-way tunneling phase time at momentum k_eval in (0, w).

    t = (2 m L / (k alpha)) [w^4 sinh(a)cosh(a) - (2k^2 - w^2) k^2 a]
        / [4 k^2 rho^2 + w^4 sinh^2 a],   a = rho L.

    Finite everywhere in the zone interior; the barrier-top edge is handled
    by its series form, the deep-opaque regime by scaled exponentials.
    """
    (k,), scalar = _as_1d(k_eval)
    w, L, m = cfg.w, cfg.L, cfg.m
    if np.any(k <= 0.0) or np.any(k >= w):
        raise ZoneError(f"phase time needs 0 < k < w = {w:g}")
    rho = np.sqrt(w * w - k * k)
    alpha = rho * L
    k2 = k * k
    out = np.empty_like(alpha)
    small = alpha < _SERIES_EPS
    big = alpha > _SCALE_ARG
    mid = ~(small | big)
    if np.any(mid):
        a, kk, rr = alpha[mid], k2[mid], rho[mid] ** 2
        num = w ** 4 * np.sinh(a) * np.cosh(a) - (2.0 * kk - w * w) * kk * a
        den = 4.0 * kk * rr + w ** 4 * np.sinh(a) ** 2
        out[mid] = (2.0 * m * L / (np.sqrt(kk) * a)) * num / den
    if np.any(small):
        kk = k2[small]
        # a -> 0 at fixed L: t -> (2mL/k)[(w^2 + 2k^2) + (2/3) w^4 L^2]/(4k^2 + w^4 L^2)
        out[small] = (2.0 * m * L / np.sqrt(kk)) \
            * ((w * w + 2.0 * kk) + (2.0 / 3.0) * w ** 4 * L * L) \
            / (4.0 * kk + w ** 4 * L * L)
    if np.any(big):
        a, kk, rr = alpha[big], k2[big], rho[big] ** 2
        e2 = np.exp(-2.0 * a)
        num = w ** 4 * (1.0 - e2 * e2) - (2.0 * kk - w * w) * kk * 4.0 * a * e2
        den = 16.0 * kk * rr * e2 + w ** 4 * (1.0 - e2) ** 2
        out[big] = (2.0 * m * L / (np.sqrt(kk) * a)) * num / den
    return _restore(out, scalar)


def nr_opaque_limit_time(k, cfg: PhysicalConfig):
    """Opaque-limit saturation value 2m / (k rho(k)) of the phase time."""
    (k,), scalar = _as_1d(k)
    w = cfg.w
    if np.any(k <= 0.0) or np.any(k >= w):
        raise ZoneError(f"opaque limit needs 0 < k < w = {w:g}")
    return _restore(2.0 * cfg.m / (k * np.sqrt(w * w - k * k)), scalar)


def nr_one_way_rate(n, alpha):
    """Normalized one-way phase time t/tau as a function of (n, alpha).

    (2/alpha) [sinh cosh - alpha n (2n - 1)] / [4 n (1 - n) + sinh^2].
    Limits: 1 + 1/(2n) as alpha -> 0 and 0 as alpha -> infinity.
    """
    (n, alpha), scalar = _as_1d(n, alpha)
    out = np.empty_like(alpha)
    small = alpha < _SERIES_EPS
    big = alpha > _SCALE_ARG
    mid = ~(small | big)
    if np.any(mid):
        a, nn = alpha[mid], n[mid]
        num = np.sinh(a) * np.cosh(a) - a * nn * (2.0 * nn - 1.0)
        den = 4.0 * nn * (1.0 - nn) + np.sinh(a) ** 2
        out[mid] = (2.0 / a) * num / den
    if np.any(small):
        a, nn = alpha[small], n[small]
        out[small] = 2.0 * ((1.0 - nn) * (1.0 + 2.0 * nn) + 2.0 * a * a / 3.0) \
            / (4.0 * nn * (1.0 - nn) + a * a)
    if np.any(big):
        a, nn = alpha[big], n[big]
        e2 = np.exp(-2.0 * a)
        num = 1.0 - e2 * e2 - 4.0 * a * e2 * nn * (2.0 * nn - 1.0)
        den = 16.0 * nn * (1.0 - nn) * e2 + (1.0 - e2) ** 2
        out[big] = (2.0 / a) * num / den
    return _restore(out, scalar)


def phase_time_shape(alpha):
    """Shape function G = (sinh cosh - alpha)/sinh^2 of the barrier-top time.

    G(alpha)/alpha -> 2/3 as alpha -> 0; G -> 1 as alpha -> infinity.
    """
    (alpha,), scalar = _as_1d(alpha)
    out = np.empty_like(alpha)
    small = alpha < 5e-2
    big = alpha > _SCALE_ARG
    mid = ~(small | big)
    if np.any(mid):
        a = alpha[mid]
        out[mid] = (np.sinh(a) * np.cosh(a) - a) / np.sinh(a) ** 2
    if np.any(small):
        a2 = alpha[small] ** 2
        out[small] = (2.0 * alpha[small] / 3.0) * (1.0 - 2.0 * a2 / 15.0 + 2.0 * a2 * a2 / 105.0)
    if np.any(big):
        a = alpha[big]
        e2 = np.exp(-2.0 * a)
        out[big] = (1.0 - e2 * e2 - 4.0 * a * e2) / (1.0 - e2) ** 2
    return _restore(out, scalar)


def barrier_top_time(alpha, cfg: PhysicalConfig):
    """Transmission time at the barrier top, (2 m L / (w alpha)) G(alpha).

    Linear in L with slope 4m/(3w) as alpha -> 0; approaches
    2m/(w sqrt(w^2 - k^2)) deep in the opaque regime.
    """
    (alpha,), scalar = _as_1d(alpha)
    g = np.atleast_1d(np.asarray(phase_time_shape(alpha), dtype=float))
    small = alpha < 5e-2
    g_over_a = np.where(small,
                        (2.0 / 3.0) * (1.0 - 2.0 * alpha ** 2 / 15.0),
                        g / np.where(small, 1.0, alpha))
    return _restore(2.0 * cfg.m * cfg.L / cfg.w * g_over_a, scalar)


# ---------------------------------------------------------------------------
# filtered-spectrum maximum and distortion criterion
# ---------------------------------------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def distortion_flag(cfg: PhysicalConfig) -> bool:
    """True when the filtered spectrum g(k - k0)|T| develops a maximum at k = w.

    Condition: the logarithmic slope of |T| at the barrier top,
    (w L^2/4)(1 + (wL)^2/3)/(1 + (wL)^2/4), exceeds the Gaussian decay
    a^2 (w - k0)/2.  Past that point the transmitted spectrum piles up at
    the barrier top and the filtered argmax loses its meaning.
    """
    if cfg.L == 0.0:
        return False
    w, a, L = cfg.w, cfg.a, cfg.L
    lhs = a * a * (w - cfg.k0) / 2.0
    wL = w * L
    rhs = (w * L * L / 4.0) * (1.0 + wL * wL / 3.0) / (1.0 + wL * wL / 4.0)
    return lhs < rhs


def distortion_threshold_length(cfg: PhysicalConfig) -> float:
    """Closed-form necessary bound on L for distortion, a sqrt(3/2 (1 - k0/w)).

    Weaker than :func:`distortion_flag` (it bounds the barrier-top slope by
    wL^2/3); useful as a quick scale estimate only.
    """
    ratio = max(0.0, 1.0 - cfg.k0 / cfg.w)
    return cfg.a * math.sqrt(1.5 * ratio)


def kmax_find(cfg: PhysicalConfig, *, n_scan: int = 2000,
              tol_ka: float = 1e-8) -> SpectralMaximum:
    """Argmax of g(k - k0) |T(k, L)| over (0, w).

    Coarse scan on n_scan points followed by golden-section refinement to
    tol_ka in units of k*a.  Below the distortion threshold the objective is
    unimodal with its maximum strictly between k0 and w.
    """
    w, a, k0, L = cfg.w, cfg.a, cfg.k0, cfg.L
    if not 0.0 < k0 < w:
        raise ZoneError(f"the filtered-spectrum search needs 0 < k0 < w = {w:g}")

    def objective(k):
        g = np.exp(-a * a * (np.asarray(k, dtype=float) - k0) ** 2 / 4.0)
        return g if L == 0.0 else g * nr_transmission_mag(k, w, L)

    ks = np.linspace(w * 1e-9, w * (1.0 - 1e-12), n_scan)
    vals = np.asarray(objective(ks))
    i = int(np.argmax(vals))
    lo = float(ks[i - 1]) if i > 0 else float(ks[0])
    hi = float(ks[i + 1]) if i < n_scan - 1 else float(ks[-1])
    bracket = (lo, hi)
    tol = tol_ka / a
    c = hi - (hi - lo) * _INV_PHI
    d = lo + (hi - lo) * _INV_PHI
    fc, fd = float(objective(c)), float(objective(d))
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - (hi - lo) * _INV_PHI
            fc = float(objective(c))
        else:
            lo, c, fc = c, d, fd
            d = lo + (hi - lo) * _INV_PHI
            fd = float(objective(d))
    return SpectralMaximum(k_max=0.5 * (lo + hi), distorted=distortion_flag(cfg),
                           bracket=bracket)


# ---------------------------------------------------------------------------
# symmetric-collision triple (normalized by tau_k = m L / k)
# ---------------------------------------------------------------------------

def _symmetric_ratio(n, alpha, sign: int, which: str):
    """Shared evaluator for the phase/dwell/self-interference ratios."""
    (n, alpha), scalar = _as_1d(n, alpha)
    if np.any(n <= 0.0) or np.any(n >= 1.0):
        raise ZoneError("the symmetric triple needs 0 < n < 1")
    if np.any(alpha < 0.0):
        raise ValueError("alpha must be >= 0")
    out = np.empty_like(alpha)
    small = alpha < _SERIES_EPS
    big = alpha > _SCALE_ARG
    mid = ~(small | big)
    if np.any(mid):
        a, nn = alpha[mid], n[mid]
        sh, ch = np.sinh(a), np.cosh(a)
        den = 2.0 * nn - 1.0 + sign * ch
        if which == "phase":
            out[mid] = (2.0 / a) * (nn * a + sign * sh) / den
        elif which == "dwell":
            out[mid] = (2.0 * nn / a) * (a + sign * sh) / den
        else:
            out[mid] = sign * (2.0 / a) * (1.0 - nn) * sh / den
    if np.any(small):
        a2, nn = alpha[small] ** 2, n[small]
        if sign > 0:
            if which == "phase":
                out[small] = (1.0 + 1.0 / nn) * (1.0 + a2 * (1.0 / (6.0 * (nn + 1.0)) - 1.0 / (4.0 * nn)))
            elif which == "dwell":
                out[small] = 2.0 * (1.0 + a2 * (1.0 / 12.0 - 1.0 / (4.0 * nn)))
            else:
                out[small] = ((1.0 - nn) / nn) * (1.0 + a2 * (1.0 / 6.0 - 1.0 / (4.0 * nn)))
        else:
            if which == "phase":
                out[small] = 1.0 + a2 / (12.0 * (nn - 1.0))
            elif which == "dwell":
                out[small] = nn * a2 / (6.0 * (1.0 - nn))
            else:
                out[small] = 1.0 + a2 * (1.0 / 6.0 - 1.0 / (4.0 * (1.0 - nn)))
    if np.any(big):
        a, nn = alpha[big], n[big]
        e = np.exp(-a)
        e2 = e * e
        den = 2.0 * (2.0 * nn - 1.0) * e + sign * (1.0 + e2)
        if which == "phase":
            out[big] = (2.0 / a) * (2.0 * nn * a * e + sign * (1.0 - e2)) / den
        elif which == "dwell":
            out[big] = (2.0 * nn / a) * (2.0 * a * e + sign * (1.0 - e2)) / den
        else:
            out[big] = sign * (2.0 / a) * (1.0 - nn) * (1.0 - e2) / den
    return _restore(out, scalar)


def symmetric_phase_time(n, alpha, parity: Parity):
    """Normalized phase time of the combined (boson/fermion) amplitude.

    t/tau = (2/alpha)(n alpha +- sinh alpha)/(2n - 1 +- cosh alpha); tends to
    1 + 1/n (boson) and 1 (fermion) as alpha -> 0, and to 0 as alpha -> inf.
    """
    return _symmetric_ratio(n, alpha, parity.sign, "phase")


def symmetric_dwell(n, alpha, parity: Parity):
    """Normalized dwell time (2n/alpha)(alpha +- sinh)/(2n - 1 +- cosh)."""
    return _symmetric_ratio(n, alpha, parity.sign, "dwell")


def symmetric_self_interference(n, alpha, parity: Parity):
    """Normalized overlap delay +-(2/alpha)(1 - n) sinh/(2n - 1 +- cosh).

    Exactly phase - dwell for either parity.
    """
    return _symmetric_ratio(n, alpha, parity.sign, "self")


def symmetric_dwell_quadrature(cfg: PhysicalConfig, parity: Parity,
                               n_quad: int = 200) -> float:
    """Dwell time from the reconstructed intra-barrier density.

    (m/k) integral of |(phi_L +- phi_R)/sqrt(2)|^2 over [-L/2, L/2], with the
    intra-barrier pair taken from the continuity conditions.  Matches the
    closed form for both parities.
    """
    k, L = cfg.k0, cfg.L
    gamma, beta = symmetric_intra_barrier_coeffs(k, cfg)
    rho = math.sqrt(cfg.w ** 2 - k * k)
    xs, wq = np.polynomial.legendre.leggauss(n_quad)
    half = 0.5 * L
    xs = xs * half
    wq = wq * half
    left = gamma * np.exp(-rho * xs) + beta * np.exp(rho * xs)
    right = gamma * np.exp(rho * xs) + beta * np.exp(-rho * xs)
    dens = np.abs((left + parity.sign * right) / math.sqrt(2.0)) ** 2
    return float(cfg.m / k * np.sum(wq * dens))


def symmetric_time_observables(n: float, alpha: float, parity: Parity,
                               tau_k: float) -> TimeObservables:
    """Absolute-time record of the symmetric triple at one (n, alpha)."""
    return TimeObservables(
        tau_k=tau_k,
        t_phase=tau_k * float(symmetric_phase_time(n, alpha, parity)),
        t_dwell=tau_k * float(symmetric_dwell(n, alpha, parity)),
        t_self=tau_k * float(symmetric_self_interference(n, alpha, parity)),
        parity=parity,
    )


def fermion_acceleration_predicate(n, alpha) -> bool:
    """True when the antisymmetric (fermion) phase time beats the ballistic time."""
    rate = np.asarray(symmetric_phase_time(n, alpha, Parity.ANTISYMMETRIC))
    return bool(np.all(rate < 1.0))


# ---------------------------------------------------------------------------
# relativistic suite (arguments: n_sq = k^2/w^2, upsilon = V0/m, wL)
# ---------------------------------------------------------------------------

def _check_rel_zone(n_sq: np.ndarray, upsilon: float) -> None:
    if np.any(n_sq <= 0.0) or np.any(np.abs(n_sq - 0.5 * upsilon) >= 1.0):
        raise ZoneError(
            "relativistic times need the tunneling zone (n^2 - upsilon/2)^2 < 1, "
            "n^2 > 0 (Klein zone below, above-barrier zone above)")


def _rel_S(n_sq, upsilon: float):
    return np.sqrt(1.0 + 2.0 * n_sq * upsilon)


def _shch_over_x_minus_1(x: np.ndarray) -> np.ndarray:
    """sinh(x) cosh(x)/x - 1, stable for small x (series error below 1e-13)."""
    small = x < 0.05
    safe = np.where(small, 1.0, x)
    x2 = x * x
    series = (2.0 * x2 / 3.0) * (1.0 + x2 / 5.0 + 2.0 * x2 * x2 / 105.0)
    return np.where(small, series, np.sinh(safe) * np.cosh(safe) / safe - 1.0)


def _sinh_sq(x: np.ndarray) -> np.ndarray:
    small = x < 0.05
    safe = np.where(small, 1.0, x)
    x2 = x * x
    series = x2 * (1.0 + x2 / 3.0 + 2.0 * x2 * x2 / 45.0)
    return np.where(small, series, np.sinh(safe) ** 2)


def _rel_phase_brackets(n_sq, upsilon: float):
    """Polynomial brackets of the phase-time ratio; zero-order parts vanish
    at the zone edges."""
    S = _rel_S(n_sq, upsilon)
    A = 8.0 * n_sq * ((2.0 + 8.0 * n_sq * upsilon + upsilon ** 2)
                      - (4.0 * n_sq + 3.0 * upsilon) * S)
    B = 4.0 * ((4.0 + 4.0 * n_sq * upsilon + upsilon ** 2) * S
               - 2.0 * upsilon * (2.0 + 3.0 * n_sq * upsilon))
    C = 16.0 * n_sq * (2.0 * (1.0 + 2.0 * n_sq * upsilon) - S * (2.0 * n_sq + upsilon))
    D = 2.0 * ((4.0 + 8.0 * n_sq * upsilon + upsilon ** 2) * S
               - 4.0 * upsilon * (1.0 + 2.0 * n_sq * upsilon))
    return A, B, C, D


def rel_phase_time(n_sq, upsilon: float, wL: float):
    """Normalized relativistic phase time t_phi/tau in the tunneling zone.

    The analytic derivative of the transmission phase: it matches the
    near-edge closed form as rho_n wL -> 0 and reduces to the
    non-relativistic one-way rate at upsilon = 0.
    """
    (n_sq,), scalar = _as_1d(n_sq)
    _check_rel_zone(n_sq, upsilon)
    x = np.sqrt(rho_n_squared(n_sq, upsilon)) * wL
    A, B, C, D = _rel_phase_brackets(n_sq, upsilon)
    out = np.empty_like(x)
    big = x > _SCALE_ARG
    if np.any(~big):
        xs = x[~big]
        shch = 1.0 + _shch_over_x_minus_1(xs)
        out[~big] = (A[~big] + B[~big] * shch) / (C[~big] + D[~big] * _sinh_sq(xs))
    if np.any(big):
        xs = x[big]
        e2 = np.exp(-2.0 * xs)
        shch_s = (1.0 - e2 * e2) / xs         # 4 e^{-2x} sinh cosh / x
        sh2_s = (1.0 - e2) ** 2               # 4 e^{-2x} sinh^2
        out[big] = (4.0 * A[big] * e2 + B[big] * shch_s) \
            / (4.0 * C[big] * e2 + D[big] * sh2_s)
    return _restore(out, scalar)


def rel_phase_time_near_edge(n_sq, upsilon: float):
    """Zone-edge limit of the relativistic phase time (rho_n wL -> 0).

    (4/3) [(4 + 4n^2 u + u^2) S - 2u(2 + 3n^2 u)]
        / [(4 + 8n^2 u + u^2) S - 4u(1 + 2n^2 u)],  S = sqrt(1 + 2 n^2 u).
    """
    (n_sq,), scalar = _as_1d(n_sq)
    _, B, _, D = _rel_phase_brackets(n_sq, upsilon)
    return _restore((2.0 / 3.0) * B / D, scalar)


def rel_phase_time_zone_edge(upsilon: float, edge: str) -> tuple[float, float]:
    """(n_sq_edge, t/tau) at a tunneling-zone edge.

    Lower edge n^2 = u/2 - 1 gives -(4/3)/(1 + 2 n^2) (always negative);
    upper edge n^2 = u/2 + 1 gives -(4/3)/(1 - 2 n^2) (positive).
    """
    if edge == "lower":
        n_sq = 0.5 * upsilon - 1.0
        if n_sq <= 0.0:
            raise ZoneError("the lower zone edge needs upsilon > 2")
        return n_sq, -(4.0 / 3.0) / (1.0 + 2.0 * n_sq)
    if edge == "upper":
        n_sq = 0.5 * upsilon + 1.0
        return n_sq, -(4.0 / 3.0) / (1.0 - 2.0 * n_sq)
    raise ValueError("edge must be 'lower' or 'upper'")


def rel_transmission_zone_edge(upsilon: float, edge: str, wL: float) -> float:
    """Zone-edge transmission modulus [1 + (wL)^2/(2 upsilon -+ 4)]^(-1/2).

    Tends to [1 + (mL)^2]^(-1/2) for upsilon >> 1: complete transmission when
    the barrier is much narrower than the Compton length.
    """
    if edge == "lower":
        den = 2.0 * upsilon - 4.0
        if den <= 0.0:
            raise ZoneError("the lower zone edge needs upsilon > 2")
    elif edge == "upper":
        den = 2.0 * upsilon + 4.0
    else:
        raise ValueError("edge must be 'lower' or 'upper'")
    return (1.0 + wL * wL / den) ** -0.5


def rel_dwell(n_sq, upsilon: float, wL: float):
    """Normalized relativistic dwell time t_D/tau in the tunneling zone.

    [ (rho^2 - n^2) + (rho^2 + n^2) sinh(x)cosh(x)/x ]
      / { 2 S [rho^2 + sinh^2(x)/(4 n^2)] },   x = rho wL.

    Always positive; the normalization matches the barrier-scale transmission
    modulus of :func:`tunnellab.stationary.relativistic_transmission`.
    """
    (n_sq,), scalar = _as_1d(n_sq)
    _check_rel_zone(n_sq, upsilon)
    S = _rel_S(n_sq, upsilon)
    rn_sq = rho_n_squared(n_sq, upsilon)
    x = np.sqrt(rn_sq) * wL
    out = np.empty_like(x)
    big = x > _SCALE_ARG
    if np.any(~big):
        xs = x[~big]
        num = 2.0 * rn_sq[~big] + (rn_sq[~big] + n_sq[~big]) * _shch_over_x_minus_1(xs)
        den = 2.0 * S[~big] * (rn_sq[~big] + _sinh_sq(xs) / (4.0 * n_sq[~big]))
        out[~big] = num / den
    if np.any(big):
        xs = x[big]
        e2 = np.exp(-2.0 * xs)
        num = 8.0 * rn_sq[big] * e2 \
            + (rn_sq[big] + n_sq[big]) * ((1.0 - e2 * e2) / xs - 4.0 * e2)
        den = 2.0 * S[big] * (4.0 * rn_sq[big] * e2 + (1.0 - e2) ** 2 / (4.0 * n_sq[big]))
        out[big] = num / den
    return _restore(out, scalar)


def rel_dwell_zone_edge(upsilon: float, edge: str) -> tuple[float, float]:
    """(n_sq_edge, t/tau) closed-form zone-edge dwell curve, (1/2)/(2 n^2 +- 1).

    Quoted for the comparison figure; note the dwell ratio itself tends to a
    wL-dependent value at the zone edge, so this curve is not its pointwise
    limit (see the acceptance suite).
    """
    if edge == "lower":
        n_sq = 0.5 * upsilon - 1.0
        if n_sq <= 0.0:
            raise ZoneError("the lower zone edge needs upsilon > 2")
        return n_sq, 0.5 / (2.0 * n_sq + 1.0)
    if edge == "upper":
        n_sq = 0.5 * upsilon + 1.0
        return n_sq, 0.5 / (2.0 * n_sq - 1.0)
    raise ValueError("edge must be 'lower' or 'upper'")


def rel_rescaled_dwell(n_sq, upsilon: float, wL: float):
    """Lorentz-consistent dwell: ((E - V0)/m) t_D/tau.

    Changes sign exactly where E = V0, i.e. n^2 = (upsilon^2 - 1)/(2 upsilon).
    """
    (n_sq,), scalar = _as_1d(n_sq)
    factor = _rel_S(n_sq, upsilon) - upsilon
    out = factor * np.atleast_1d(np.asarray(rel_dwell(n_sq, upsilon, wL)))
    return _restore(out, scalar)


def _kg_config(n_sq: float, upsilon: float, wL: float) -> PhysicalConfig:
    if upsilon <= 0.0:
        raise ZoneError("the relativistic family needs upsilon > 0")
    m = 1.0
    V0 = upsilon * m
    w = math.sqrt(2.0 * m * V0)
    return PhysicalConfig(m=m, V0=V0, L=wL / w, a=1.0, k0=math.sqrt(n_sq) * w,
                          dispersion=Dispersion.RELATIVISTIC_KG)


def rel_self_interference(n_sq: float, upsilon: float, wL: float) -> float:
    """Normalized overlap delay in front of the barrier.

    t_I/tau = -(dk/dE) Im[R] / (k tau) = -Im[R]/(k L), with R from the
    continuity solution.
    """
    _check_rel_zone(np.atleast_1d(float(n_sq)), upsilon)
    cfg = _kg_config(n_sq, upsilon, wL)
    R = kg_scatter_coeffs(cfg.k0, cfg).R
    return -R.imag / (cfg.k0 * cfg.L)


def rel_variational_residual(n_sq: float, upsilon: float, wL: float,
                             n_quad: int = 160) -> float:
    """Residual of the phase/dwell identity, normalized by tau.

    t_phi/tau - [ ((E - V0)/k) integral |phi_2|^2 / tau + t_I/tau ]
    with the intra-barrier field and R from the continuity solution; zero up
    to quadrature roundoff.
    """
    _check_rel_zone(np.atleast_1d(float(n_sq)), upsilon)
    cfg = _kg_config(n_sq, upsilon, wL)
    k, L, m = cfg.k0, cfg.L, cfg.m
    E = math.sqrt(k * k + m * m)
    sc = kg_scatter_coeffs(k, cfg)
    rho = math.sqrt(m * m - (E - cfg.V0) ** 2)
    xs, wq = np.polynomial.legendre.leggauss(n_quad)
    xs = 0.5 * L * (xs + 1.0)
    wq = wq * 0.5 * L
    phi2 = sc.alpha_coef * np.exp(-rho * xs) + sc.beta_coef * np.exp(rho * xs)
    integral = float(np.sum(wq * np.abs(phi2) ** 2))
    tau = L * E / k
    t_resc_norm = (E - cfg.V0) / k * integral / tau
    t_self_norm = -sc.R.imag / (k * L)
    t_phase_norm = float(rel_phase_time(n_sq, upsilon, wL))
    return t_phase_norm - (t_resc_norm + t_self_norm)


def rel_time_observables(n_sq: float, upsilon: float, wL: float) -> TimeObservables:
    """Normalized (tau = 1) record of the relativistic time family."""
    dwell = float(rel_dwell(n_sq, upsilon, wL))
    return TimeObservables(
        tau_k=1.0,
        t_phase=float(rel_phase_time(n_sq, upsilon, wL)),
        t_dwell=dwell,
        t_self=float(rel_self_interference(n_sq, upsilon, wL)),
        t_dwell_rescaled=float(rel_rescaled_dwell(n_sq, upsilon, wL)),
    )


# ---------------------------------------------------------------------------
# saturation (Hartman) sweeps
# ---------------------------------------------------------------------------

def hartman_curve_nr(n: float, alphas, tol: float = 1e-6) -> HartmanCurve:
    """One-way phase time against its opaque-limit value, sweeping alpha at fixed k.

    t(alpha)/t_opaque = (alpha/2) (t/tau) tends to 1; saturation_parameter is
    the first sweep value past which |ratio - 1| stays below tol.
    """
    alphas = np.asarray(alphas, dtype=float)
    rate = np.atleast_1d(np.asarray(nr_one_way_rate(n, alphas)))
    ratio = 0.5 * alphas * rate
    sat = None
    below = np.abs(ratio - 1.0) < tol
    for i in range(alphas.size):
        if np.all(below[i:]):
            sat = float(alphas[i])
            break
    return HartmanCurve(parameter=alphas, t_over_tau=rate, ratio_to_limit=ratio,
                        limit_description="opaque-limit time 2m/(k rho)",
                        saturation_parameter=sat)


def hartman_curve_symmetric(n: float, alphas, parity: Parity,
                            tol: float = 1e-6) -> HartmanCurve:
    """Symmetric-collision rate sweep; the normalized time decays to zero."""
    alphas = np.asarray(alphas, dtype=float)
    rate = np.atleast_1d(np.asarray(symmetric_phase_time(n, alphas, parity)))
    sat = None
    below = np.abs(rate) < tol
    for i in range(alphas.size):
        if np.all(below[i:]):
            sat = float(alphas[i])
            break
    return HartmanCurve(parameter=alphas, t_over_tau=rate, ratio_to_limit=None,
                        limit_description="zero normalized time",
                        saturation_parameter=sat)


def hartman_curve_relativistic(upsilon: float, wL: float, n_sq_grid) -> HartmanCurve:
    """Relativistic phase-time curve across the tunneling zone (finite everywhere)."""
    n_sq_grid = np.asarray(n_sq_grid, dtype=float)
    rate = np.atleast_1d(np.asarray(rel_phase_time(n_sq_grid, upsilon, wL)))
    return HartmanCurve(parameter=n_sq_grid, t_over_tau=rate, ratio_to_limit=None,
                        limit_description="finite across the tunneling zone",
                        saturation_parameter=None)
