"""Continuous-time rational systems: simulation, transient metrics, bandwidths.

Transfer functions are coefficient lists in ascending powers of s, so
``RationalSystem([1], [1, 2, 1])`` is ``1 / (s + 1)^2``.  Simulation uses the
controllable canonical realization and a fixed-step classical Runge-Kutta
scheme.  For a linear system one RK4 step is the matrix
``P = I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24``, so trajectories are built
from powers of P rather than stepped one sample at a time.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .concentration import SampledSignal
from .errors import (
    GridTooCoarseError,
    ImproperSystemError,
    InvalidParameterError,
    NoCrossingError,
    NonIntegrableError,
    UnstableSystemError,
    ZeroEnergyError,
)

__all__ = [
    "RationalSystem",
    "StepMetrics",
    "SecondOrderParams",
    "HorizonWarning",
    "impulse_response",
    "step_response",
    "step_metrics",
    "default_horizon",
    "bandwidth_integral",
    "bandwidth_3db",
    "rise_bandwidth_product",
    "rule_of_thumb_product",
    "second_order_rise",
]

SETTLING_BAND = 0.03
MAX_STEP_RATIO = 0.1  # dt * max|pole|
MAX_SAMPLES = 2_000_000


class HorizonWarning(UserWarning):
    """Simulation horizon too short for the requested quantity."""


def _trim(c):
    c = np.atleast_1d(np.asarray(c, dtype=float))
    if c.ndim != 1 or not np.all(np.isfinite(c)):
        raise InvalidParameterError("coefficients must be a finite 1-D list")
    nz = np.flatnonzero(c)
    if len(nz) == 0:
        return np.zeros(1)
    return c[: nz[-1] + 1]


class RationalSystem:
    """Proper transfer function ``num(s) / den(s)``.

    Parameters
    ----------
    num, den : sequence of float
        Coefficients in ascending powers of s.  Trailing zeros are dropped.
    require_stable : bool
        Reject systems with poles outside the open left half-plane.  Turn
        off only to evaluate frequency responses of marginal or unstable
        plants; every time-domain operation re-checks stability.
    """

    def __init__(self, num, den, require_stable: bool = True):
        num, den = _trim(num), _trim(den)
        if not np.any(den):
            raise InvalidParameterError("denominator is identically zero")
        if not np.any(num):
            raise ZeroEnergyError("numerator is identically zero")
        if len(num) > len(den):
            raise ImproperSystemError(f"deg num = {len(num) - 1} exceeds deg den = {len(den) - 1}")
        num.setflags(write=False)
        den.setflags(write=False)
        self.num = num
        self.den = den
        if require_stable and not self.is_stable:
            raise UnstableSystemError(f"poles {self.poles} not all in the open left half-plane")

    def __repr__(self):
        return f"RationalSystem(num={self.num.tolist()}, den={self.den.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, RationalSystem):
            return NotImplemented
        return np.array_equal(self.num, other.num) and np.array_equal(self.den, other.den)

    __hash__ = None

    @property
    def order(self) -> int:
        return len(self.den) - 1

    @property
    def relative_degree(self) -> int:
        return len(self.den) - len(self.num)

    @property
    def strictly_proper(self) -> bool:
        return self.relative_degree >= 1

    @property
    def poles(self) -> np.ndarray:
        return np.roots(self.den[::-1]) if self.order else np.zeros(0, dtype=complex)

    @property
    def zeros(self) -> np.ndarray:
        return np.roots(self.num[::-1]) if len(self.num) > 1 else np.zeros(0, dtype=complex)

    @property
    def is_stable(self) -> bool:
        p = self.poles
        return bool(np.all(p.real < 0))

    @property
    def dc_gain(self) -> float:
        if self.den[0] == 0:
            return math.inf
        return float(self.num[0] / self.den[0])

    def __call__(self, s):
        s = np.asarray(s)
        return np.polyval(self.num[::-1], s) / np.polyval(self.den[::-1], s)

    def freq_response(self, omega):
        """``H(j w)``."""
        return self(1j * np.asarray(omega, dtype=float))

    def scaled_frequency(self, k: float) -> "RationalSystem":
        """``H(s / k)``: same shape, k times faster."""
        if not k > 0:
            raise InvalidParameterError("k must be positive")
        n = self.num / k ** np.arange(len(self.num))
        d = self.den / k ** np.arange(len(self.den))
        return RationalSystem(n, d)

    def realization(self):
        """Controllable canonical ``(A, B, C, D)``."""
        if self.order == 0:
            raise ImproperSystemError("static gain has no state-space dynamics")
        n = self.order
        a = self.den / self.den[-1]
        b = np.zeros(n + 1)
        b[: len(self.num)] = self.num / self.den[-1]
        D = b[n]
        A = np.zeros((n, n))
        A[np.arange(n - 1), np.arange(1, n)] = 1.0
        A[-1, :] = -a[:n]
        B = np.zeros(n)
        B[-1] = 1.0
        C = b[:n] - D * a[:n]
        return A, B, C, float(D)


@dataclass(frozen=True)
class SecondOrderParams:
    """Underdamped ``w0^2 / (s^2 + 2 zeta w0 s + w0^2)``."""

    zeta: float
    omega0: float

    def __post_init__(self):
        if not 0.0 < self.zeta < 1.0:
            raise InvalidParameterError(f"zeta must lie in (0, 1), got {self.zeta}")
        if not self.omega0 > 0:
            raise InvalidParameterError(f"omega0 must be positive, got {self.omega0}")

    def system(self) -> RationalSystem:
        w = self.omega0
        return RationalSystem([w * w], [w * w, 2 * self.zeta * w, 1.0])

    @property
    def overshoot(self) -> float:
        z = self.zeta
        return math.exp(-math.pi * z / math.sqrt(1 - z * z))

    @property
    def peak_time(self) -> float:
        return math.pi / (self.omega0 * math.sqrt(1 - self.zeta**2))


@dataclass(frozen=True)
class StepMetrics:
    """Transient metrics of the unit step response normalized by ``H(0)``.

    Times are in seconds.  ``None`` marks a quantity that does not exist for
    this response (no peak for a monotone response, no full rise when the
    steady value is only approached) or could not be resolved on the horizon.
    """

    t_r_slope: float | None
    t_r_1090: float | None
    t_r_full: float | None
    t_p: float | None
    t_s: float | None
    overshoot: float
    steady_state: float


# ---------------------------------------------------------------- simulation

def _rk4_matrix(A, dt):
    M = dt * A
    n = A.shape[0]
    P = np.eye(n)
    term = np.eye(n)
    for k in range(1, 5):
        term = term @ M / k
        P = P + term
    return P


def _powers_apply(P, x0, N, block=256):
    """Columns ``P^k x0`` for k = 0..N-1."""
    n = len(x0)
    out = np.empty((n, N))
    m = min(block, N)
    out[:, 0] = x0
    for j in range(1, m):
        out[:, j] = P @ out[:, j - 1]
    Pm = np.linalg.matrix_power(P, m)
    for start in range(m, N, m):
        stop = min(start + m, N)
        out[:, start:stop] = (Pm @ out[:, start - m : start])[:, : stop - start]
    return out


def _check_grid(sys, t_end, dt):
    if not sys.is_stable:
        raise UnstableSystemError("time-domain simulation needs a stable system")
    if not (dt > 0 and t_end > 0):
        raise InvalidParameterError("dt and t_end must be positive")
    pmax = float(np.max(np.abs(sys.poles))) if sys.order else 0.0
    if dt * pmax > MAX_STEP_RATIO:
        raise GridTooCoarseError(
            f"dt={dt:.3g} does not resolve the fastest pole |p|={pmax:.3g}; need dt <= {MAX_STEP_RATIO / pmax:.3g}"
        )
    N = int(round(t_end / dt)) + 1
    if N > MAX_SAMPLES:
        raise InvalidParameterError(f"{N} samples exceed the limit {MAX_SAMPLES}")
    return max(N, 16)


@dataclass(frozen=True)
class _Trajectory:
    dt: float
    y: np.ndarray    # step response
    h: np.ndarray    # y' (impulse response without any delta part)
    hp: np.ndarray   # h'
    hpp: np.ndarray  # h''


def _simulate_step(sys, t_end, dt) -> _Trajectory:
    N = _check_grid(sys, t_end, dt)
    A, B, C, D = sys.realization()
    P = _rk4_matrix(A, dt)
    # the affine RK4 map keeps the equilibrium x* = -A^{-1} B, so x_k - x* = P^k (0 - x*)
    xs = -np.linalg.solve(A, B)
    E = _powers_apply(P, -xs, N)          # x_k - x*
    V = A @ E                            # state derivative A x_k + B
    y = C @ (E + xs[:, None]) + D
    CA = C @ A
    return _Trajectory(dt, y, C @ V, CA @ V, (CA @ A) @ V)


def impulse_response(sys: RationalSystem, t_end: float, dt: float) -> SampledSignal:
    """Simulated ``h(t)`` on ``0, dt, ..., t_end``.

    Raises
    ------
    ImproperSystemError
        For a biproper system (the response contains a Dirac impulse).
    GridTooCoarseError
        If ``dt * max|pole| > 0.1``.
    UnstableSystemError
    """
    if not sys.strictly_proper:
        raise ImproperSystemError("biproper system: impulse response contains a delta at t = 0")
    N = _check_grid(sys, t_end, dt)
    A, B, C, _ = sys.realization()
    h = C @ _powers_apply(_rk4_matrix(A, dt), B, N)
    peak = np.max(np.abs(h))
    if abs(h[-1]) > 1e-6 * peak:
        warnings.warn(f"impulse response not decayed at t_end={t_end:g}", HorizonWarning, stacklevel=2)
    return SampledSignal(0.0, dt, h)


def step_response(sys: RationalSystem, t_end: float, dt: float) -> SampledSignal:
    """Simulated unit-step response (not normalized)."""
    return SampledSignal(0.0, dt, _simulate_step(sys, t_end, dt).y)


def default_horizon(sys: RationalSystem, decades: float = 12.0, pts_per_fastest: float = 20.0):
    """``(t_end, dt)`` long enough for the slowest mode to decay ``decades``
    orders of magnitude and fine enough for the fastest pole."""
    p = sys.poles
    if not sys.is_stable:
        raise UnstableSystemError("no finite horizon for an unstable system")
    slow = float(np.min(-p.real))
    fast = float(np.max(np.abs(p)))
    t_end = decades * math.log(10) / slow
    dt = min(1.0 / (pts_per_fastest * fast), t_end / 4000)
    return t_end, dt


def _hermite_root(f0, f1, d0, d1, dt, level):
    """Root in [0, dt] of the cubic Hermite interpolant of ``f - level``."""
    a0, a1 = f0 - level, f1 - level

    def g(s):
        u = s / dt
        h00 = 2 * u**3 - 3 * u**2 + 1
        h10 = u**3 - 2 * u**2 + u
        h01 = -2 * u**3 + 3 * u**2
        h11 = u**3 - u**2
        return h00 * a0 + h10 * dt * d0 + h01 * a1 + h11 * dt * d1

    if a0 == 0:
        return 0.0
    if a1 == 0:
        return dt
    return optimize.brentq(g, 0.0, dt, xtol=1e-15 * max(dt, 1.0), rtol=4 * np.finfo(float).eps)


def _first_crossing(f, d, dt, level, start=0):
    """First upward-or-downward crossing of ``level`` at or after index ``start``."""
    s = np.sign(f[start:] - level)
    idx = np.flatnonzero(s[1:] * s[:-1] <= 0)
    idx = idx[s[idx] != 0] if len(idx) else idx
    if len(idx) == 0:
        return None
    k = start + int(idx[0])
    return k * dt + _hermite_root(f[k], f[k + 1], d[k], d[k + 1], dt, level)


def _interp_max(tr, f, d, dd, k):
    """Refine a sampled maximum of ``f`` at index k through the zero of ``d``."""
    dt = tr.dt
    n = len(f)
    for j in (k - 1, k):
        if 0 <= j < n - 1 and d[j] >= 0 >= d[j + 1]:
            s = _hermite_root(d[j], d[j + 1], dd[j], dd[j + 1], dt, 0.0)
            u = s / dt
            # Hermite value of f at the stationary point
            h00 = 2 * u**3 - 3 * u**2 + 1
            h10 = u**3 - 2 * u**2 + u
            h01 = -2 * u**3 + 3 * u**2
            h11 = u**3 - u**2
            val = h00 * f[j] + h10 * dt * d[j] + h01 * f[j + 1] + h11 * dt * d[j + 1]
            return float(j * dt + s), float(max(val, f[k]))
    return float(k * dt), float(f[k])


def step_metrics(sys: RationalSystem, t_end: float | None = None, dt: float | None = None,
                 band: float = SETTLING_BAND) -> StepMetrics:
    """Rise, peak and settling metrics of the normalized step response.

    ``t_r_slope = 1 / max_t h(t)`` with h normalized by H(0); ``t_r_1090`` is
    the 10-90% time; ``t_r_full`` the first time the response reaches its
    steady value; ``t_p`` the time of the global maximum, defined only when it
    exceeds the steady value; ``t_s`` the last exit from the ``band``
    neighbourhood of 1.  Crossings are located on the cubic Hermite
    interpolant built from the simulated values and their exact derivatives.

    Raises
    ------
    ZeroEnergyError
        If ``H(0) = 0`` (no step height to normalize by).
    """
    if not 0 < band < 1:
        raise InvalidParameterError("band must lie in (0, 1)")
    H0 = sys.dc_gain
    if H0 == 0:
        raise ZeroEnergyError("zero dc gain: the step has no steady height")
    if t_end is None or dt is None:
        te, d = default_horizon(sys)
        t_end = te if t_end is None else t_end
        dt = d if dt is None else dt
    tr = _simulate_step(sys, t_end, dt)
    y, h, hp, hpp = tr.y / H0, tr.h / H0, tr.hp / H0, tr.hpp / H0

    t_r_slope = None
    if sys.strictly_proper:
        k = int(np.argmax(h))
        if h[k] > 0:
            t_r_slope = float(1.0 / _interp_max(tr, h, hp, hpp, k)[1])

    t10 = _first_crossing(y, h, dt, 0.1)
    t90 = _first_crossing(y, h, dt, 0.9)
    t_r_1090 = t90 - t10 if (t10 is not None and t90 is not None) else None
    t_r_full = _first_crossing(y, h, dt, 1.0)

    k = int(np.argmax(y))
    t_p, overshoot = None, 0.0
    if y[k] > 1.0 and k < len(y) - 1:
        t_p, ymax = _interp_max(tr, y, h, hp, k)
        overshoot = ymax - 1.0

    err = np.abs(y - 1.0)
    out = np.flatnonzero(err > band)
    if len(out) == 0:
        t_s = 0.0
    elif out[-1] == len(y) - 1:
        warnings.warn("response has not settled within the horizon", HorizonWarning, stacklevel=2)
        t_s = None
    else:
        j = int(out[-1])
        level = 1.0 + band if y[j] > 1.0 else 1.0 - band
        t_s = j * dt + _hermite_root(y[j], y[j + 1], h[j], h[j + 1], dt, level)

    return StepMetrics(t_r_slope, t_r_1090, t_r_full, t_p, t_s, float(overshoot), H0)


# ----------------------------------------------------------------- bandwidth

def _freq_scale(sys):
    mags = np.abs(np.concatenate((sys.poles, sys.zeros)))
    mags = mags[mags > 0]
    return float(np.max(mags)) if len(mags) else 1.0


def bandwidth_integral(sys: RationalSystem) -> float:
    """``int_0^inf |H(jw)| dw / (pi |H(0)|)`` in rad/s.

    The finite part is integrated adaptively with the pole and zero
    magnitudes as breakpoints; the tail beyond a hundred times the largest
    of them is mapped to a finite interval by ``w = 1/u``.

    Raises
    ------
    NonIntegrableError
        If the relative degree is below 2 (``|H|`` decays no faster than 1/w).
    ZeroEnergyError
        If ``H(0) = 0``.
    """
    if sys.relative_degree < 2:
        raise NonIntegrableError(
            f"|H(jw)| ~ w^-{sys.relative_degree} is not integrable; relative degree must be >= 2"
        )
    H0 = sys.dc_gain
    if H0 == 0 or not np.isfinite(H0):
        raise ZeroEnergyError("bandwidth_integral needs a finite nonzero dc gain")
    scale = _freq_scale(sys)
    big = 100.0 * scale
    pts = sorted({float(m) for m in np.abs(np.concatenate((sys.poles, sys.zeros))) if 0 < m < big})
    mag = lambda w: abs(complex(sys.freq_response(w)))
    body, _ = integrate.quad(mag, 0.0, big, points=pts or None, limit=500, epsabs=0, epsrel=1e-11)
    tail, _ = integrate.quad(lambda u: mag(1.0 / u) / (u * u) if u > 0 else 0.0, 0.0, 1.0 / big,
                             limit=200, epsabs=0, epsrel=1e-11)
    return (body + tail) / (math.pi * abs(H0))


def bandwidth_3db(sys: RationalSystem, omega_max: float | None = None, n_scan: int = 4000) -> float:
    """First frequency where ``|H(jw)|`` drops to ``|H(0)| / sqrt(2)``.

    Raises
    ------
    NoCrossingError
        If no crossing is found below ``omega_max`` (default 1e6 times the
        largest pole or zero magnitude).
    """
    H0 = abs(sys.dc_gain)
    if H0 == 0 or not np.isfinite(H0):
        raise ZeroEnergyError("3 dB bandwidth needs a finite nonzero dc gain")
    scale = _freq_scale(sys)
    if omega_max is None:
        omega_max = 1e6 * scale
    target = H0 / math.sqrt(2.0)
    f = lambda w: abs(complex(sys.freq_response(w))) - target
    grid = np.concatenate(([0.0], np.logspace(math.log10(scale) - 8, math.log10(omega_max), n_scan)))
    vals = np.abs(sys.freq_response(grid)) - target
    idx = np.flatnonzero((vals[:-1] > 0) & (vals[1:] <= 0))
    if len(idx) == 0:
        raise NoCrossingError(f"|H| stays above |H(0)|/sqrt(2) up to w={omega_max:.3g}")
    k = int(idx[0])
    if vals[k + 1] == 0:
        return float(grid[k + 1])
    return float(optimize.brentq(f, grid[k], grid[k + 1], xtol=1e-300, rtol=1e-13))


def rise_bandwidth_product(sys: RationalSystem, metrics: StepMetrics | None = None) -> float:
    """``t_r_slope * w_b``; never below 1 for a stable strictly proper system."""
    if metrics is None:
        metrics = step_metrics(sys)
    if metrics.t_r_slope is None:
        raise NonIntegrableError("slope rise time undefined for this system")
    return metrics.t_r_slope * bandwidth_integral(sys)


def rule_of_thumb_product(sys: RationalSystem, metrics: StepMetrics | None = None) -> float:
    """``t_r_1090 * w_3db``, the textbook product often quoted near 2.2.

    Reported for comparison only; it is not bounded by any inequality.
    """
    if metrics is None:
        metrics = step_metrics(sys)
    if metrics.t_r_1090 is None:
        raise NoCrossingError("10-90% rise time undefined for this system")
    return metrics.t_r_1090 * bandwidth_3db(sys)


def second_order_rise(p: SecondOrderParams) -> float:
    """0-100% rise time ``(pi - atan(sqrt(1-z^2)/z)) / (w0 sqrt(1-z^2))``."""
    wd = math.sqrt(1.0 - p.zeta**2)
    return (math.pi - math.atan(wd / p.zeta)) / (wd * p.omega0)
