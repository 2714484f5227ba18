"""Prolate spheroidal spectrum of the sinc-kernel concentration operator.

The eigenproblem

    integral_{-1}^{1} sin(c (x - y)) / (pi (x - y)) psi(y) dy = lambda psi(x)

is discretized with a Nystrom scheme on Gauss-Legendre nodes and symmetrized
through the sqrt(weight) similarity so that a dense symmetric eigensolver
applies.  Eigenvalues are the largest energy fractions a signal band-limited
to (-W, W) can keep inside a slot of length T, with c = W T / 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import linalg

from .errors import ConvergenceError, InvalidParameterError, ResolutionError

__all__ = [
    "TimeBandwidthProduct",
    "ProlateSpectrum",
    "as_product",
    "build_kernel",
    "kernel_eigenvalues",
    "compute_spectrum",
    "largest_eigenvalue",
    "lambda0_asymptotic",
    "eval_pswf",
    "extend_pswf_time",
    "DEFAULT_QUAD_ORDER",
    "DEFAULT_N_MAX",
]

DEFAULT_QUAD_ORDER = 128
DEFAULT_N_MAX = 9
MIN_QUAD_ORDER = 8
_RESOLUTION_FLOOR = 10 * np.finfo(float).eps
_SIGN_THRESHOLD = 1e-12


@dataclass(frozen=True)
class TimeBandwidthProduct:
    """Dimensionless product c = W T / 2 (W in rad/s, T in s)."""

    c: float
    W: float | None = None
    T: float | None = None

    def __post_init__(self):
        if not np.isfinite(self.c) or self.c <= 0:
            raise InvalidParameterError(f"c must be positive, got {self.c}")

    @classmethod
    def from_band(cls, W: float, T: float) -> "TimeBandwidthProduct":
        if W <= 0 or T <= 0:
            raise InvalidParameterError("W and T must be positive")
        return cls(c=W * T / 2.0, W=float(W), T=float(T))

    def __float__(self):
        return float(self.c)


def as_product(c) -> TimeBandwidthProduct:
    if isinstance(c, TimeBandwidthProduct):
        return c
    return TimeBandwidthProduct(float(c))


def _sinc_kernel(c, x, y):
    # sin(c d) / (pi d) with the removable singularity c / pi at d = 0
    d = np.subtract.outer(x, y)
    return (c / np.pi) * np.sinc(c * d / np.pi)


def _sinc_kernel_dx(c, x, y):
    d = np.subtract.outer(x, y)
    out = np.zeros_like(d, dtype=float)
    nz = np.abs(d) > 1e-8
    dn = d[nz]
    out[nz] = (c * dn * np.cos(c * dn) - np.sin(c * dn)) / (np.pi * dn**2)
    # series: -c^3 d / (3 pi) near the diagonal
    out[~nz] = -(c**3) * d[~nz] / (3 * np.pi)
    return out


@lru_cache(maxsize=32)
def _gauss_legendre(n):
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def build_kernel(c, quad_order: int = DEFAULT_QUAD_ORDER) -> np.ndarray:
    """Symmetrized Nystrom matrix ``sqrt(w_i) K(x_i, x_j) sqrt(w_j)``.

    Parameters
    ----------
    c : float or TimeBandwidthProduct
        Time-bandwidth product, must be positive.
    quad_order : int
        Number of Gauss-Legendre nodes on [-1, 1]; at least 8.
    """
    c = as_product(c).c
    if quad_order < MIN_QUAD_ORDER:
        raise InvalidParameterError(f"quad_order must be >= {MIN_QUAD_ORDER}")
    x, w = _gauss_legendre(int(quad_order))
    sw = np.sqrt(w)
    A = sw[:, None] * _sinc_kernel(c, x, x) * sw[None, :]
    # exact symmetry, independent of rounding in the outer difference
    return 0.5 * (A + A.T)


def kernel_eigenvalues(c, quad_order: int = DEFAULT_QUAD_ORDER) -> np.ndarray:
    """All eigenvalues of the discretized operator, largest first.

    Unlike :func:`compute_spectrum` nothing is checked for resolution, so the
    trailing values sit at rounding level.  Their sum is the discrete trace.
    """
    A = build_kernel(c, quad_order)
    try:
        ev = linalg.eigvalsh(A)
    except linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return ev[::-1]


@dataclass(frozen=True)
class ProlateSpectrum:
    """Leading eigenpairs of the concentration operator at a fixed ``c``.

    ``eigenvectors[n]`` holds psi_n at ``quad_nodes`` with unit L2(-1, 1) norm
    under the quadrature.  ``extension_constants[n]`` is the real factor a_n in
    ``(1/2pi) int psi_n(w) cos|sin(w t) dw = a_n psi_n(t / c)``; for odd modes
    the imaginary unit of the full Fourier integral is dropped.
    """

    c: TimeBandwidthProduct
    eigenvalues: np.ndarray
    quad_nodes: np.ndarray
    quad_weights: np.ndarray
    eigenvectors: np.ndarray
    extension_constants: np.ndarray = field(repr=False)

    @property
    def n_max(self) -> int:
        return len(self.eigenvalues) - 1

    @property
    def quad_order(self) -> int:
        return len(self.quad_nodes)

    @property
    def lambda0(self) -> float:
        return float(self.eigenvalues[0])

    def gram_matrix(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.quad_weights) @ V.T


def _freeze(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def compute_spectrum(
    c,
    n_max: int = DEFAULT_N_MAX,
    quad_order: int = DEFAULT_QUAD_ORDER,
) -> ProlateSpectrum:
    """Solve the concentration eigenproblem for modes 0..n_max.

    Raises
    ------
    ResolutionError
        If ``n_max + 1 > quad_order / 2`` or the smallest requested
        eigenvalue is below ten machine epsilons (not separable from
        rounding noise), or the computed values are not strictly ordered.
    ConvergenceError
        If the symmetric eigensolver fails.
    """
    prod = as_product(c)
    cval = prod.c
    if n_max < 0:
        raise InvalidParameterError("n_max must be >= 0")
    if quad_order < MIN_QUAD_ORDER:
        raise InvalidParameterError(f"quad_order must be >= {MIN_QUAD_ORDER}")
    if 2 * (n_max + 1) > quad_order:
        raise ResolutionError(
            f"n_max={n_max} needs quad_order >= {2 * (n_max + 1)}, got {quad_order}"
        )
    x, w = _gauss_legendre(int(quad_order))
    A = build_kernel(cval, quad_order)
    n = quad_order
    try:
        ev, V = linalg.eigh(A, subset_by_index=[n - n_max - 1, n - 1])
    except linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    ev = ev[::-1]
    V = V[:, ::-1]

    if ev[-1] < _RESOLUTION_FLOOR:
        raise ResolutionError(
            f"lambda_{n_max} = {ev[-1]:.3e} at c={cval} is below the "
            f"resolution floor {_RESOLUTION_FLOOR:.1e}; lower n_max"
        )
    if np.any(np.diff(ev) >= 0) or ev[0] >= 1.0:
        raise ResolutionError(f"eigenvalues at c={cval} are not strictly ordered in (0, 1)")

    psi = (V / np.sqrt(w)[:, None]).T
    # mode n has parity (-1)^n; drop the rounding-level wrong-parity part
    parity = (-1.0) ** np.arange(len(ev))
    psi = 0.5 * (psi + parity[:, None] * psi[:, ::-1])
    psi /= np.sqrt((psi**2) @ w)[:, None]
    for k in range(psi.shape[0]):
        big = np.flatnonzero(np.abs(psi[k]) > _SIGN_THRESHOLD)
        if psi[k, big[0]] < 0:
            psi[k] = -psi[k]

    ext = np.empty(len(ev))
    for k in range(len(ev)):
        if k % 2 == 0:
            num = np.dot(w, psi[k]) / (2 * np.pi)
            den = _nystrom(cval, x, w, psi[k], ev[k], np.array([0.0]))[0]
        else:
            num = np.dot(w, x * psi[k]) / (2 * np.pi)
            # K' is odd, so psi'(0) = -(1/lam) sum w_j psi_j K'(x_j)
            deriv = (w * psi[k]) @ _sinc_kernel_dx(cval, x, np.array([0.0]))[:, 0]
            den = -deriv / ev[k] / cval
        ext[k] = num / den

    return ProlateSpectrum(
        c=prod,
        eigenvalues=_freeze(ev),
        quad_nodes=x,
        quad_weights=w,
        eigenvectors=_freeze(psi),
        extension_constants=_freeze(ext),
    )


def _nystrom(c, x, w, psi, lam, xs):
    K = _sinc_kernel(c, np.asarray(xs, dtype=float), x)
    return K @ (w * psi) / lam


@lru_cache(maxsize=4096)
def _lambda0_cached(c, quad_order):
    return compute_spectrum(c, n_max=0, quad_order=quad_order).lambda0


def largest_eigenvalue(c, quad_order: int = DEFAULT_QUAD_ORDER) -> float:
    """lambda_0 at ``c``; memoized since feasibility checks call it often."""
    return _lambda0_cached(as_product(c).c, int(quad_order))


def lambda0_asymptotic(c) -> float:
    """Large-c approximation ``1 - 4 sqrt(pi c) exp(-2c)`` clamped into (0, 1).

    Only meaningful when c is large (roughly c >= 4); for small c the raw
    expression goes negative and the clamp returns the smallest positive float.
    """
    c = as_product(c).c
    val = 1.0 - 4.0 * np.sqrt(np.pi * c) * np.exp(-2.0 * c)
    return float(np.clip(val, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0)))


def _check_mode(spectrum, n):
    if not 0 <= n <= spectrum.n_max:
        raise InvalidParameterError(f"mode {n} outside 0..{spectrum.n_max}")


def eval_pswf(spectrum: ProlateSpectrum, n: int, x):
    """Nystrom interpolant of psi_n at abscissae ``x`` in [-1, 1]."""
    _check_mode(spectrum, n)
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > 1.0 + 1e-12):
        raise InvalidParameterError("abscissa outside [-1, 1]")
    out = _nystrom(
        spectrum.c.c,
        spectrum.quad_nodes,
        spectrum.quad_weights,
        spectrum.eigenvectors[n],
        spectrum.eigenvalues[n],
        np.atleast_1d(xs),
    )
    return out.reshape(xs.shape) if xs.ndim else float(out[0])


def _band_integral(spectrum, n, t, chunk=4096):
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    order = np.argsort(np.abs(t))
    for lo in range(0, len(t), chunk):
        idx = order[lo:lo + chunk]
        out[idx] = _band_integral_block(spectrum, n, t[idx])
    return out


def _band_integral_block(spectrum, n, t):
    # cos(t x) on [-1, 1] needs about |t| + O(1) Gauss nodes
    need = int(np.ceil(np.max(np.abs(t)))) + 64
    if need <= spectrum.quad_order:
        x = spectrum.quad_nodes
        wpsi = spectrum.quad_weights * spectrum.eigenvectors[n]
    else:
        x, w = _gauss_legendre(int(2 ** np.ceil(np.log2(need))))
        wpsi = w * eval_pswf(spectrum, n, x)
    phase = np.multiply.outer(t, x)
    trig = np.cos(phase) if n % 2 == 0 else np.sin(phase)
    return trig @ wpsi / (2 * np.pi)


def extend_pswf_time(spectrum: ProlateSpectrum, n: int, t, *, method: str = "auto"):
    """Band-limited extension of psi_n to the whole time axis.

    Returns ``(1/2pi) int_{-1}^{1} psi_n(w) cos(w t) dw`` for even n and the
    matching sine integral for odd n.  Inside ``|t| <= c`` this equals
    ``a_n psi_n(t / c)`` and is evaluated that way; outside it is computed by
    Gauss-Legendre quadrature.  ``method`` forces either path
    ("interior" or "quadrature").
    """
    _check_mode(spectrum, n)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    c = spectrum.c.c
    inside = np.abs(ts) <= c
    if method == "quadrature":
        inside = np.zeros_like(inside)
    elif method == "interior":
        if not np.all(inside):
            raise InvalidParameterError("interior path only valid for |t| <= c")
    elif method != "auto":
        raise InvalidParameterError(f"unknown method {method!r}")
    out = np.empty_like(ts)
    if np.any(inside):
        out[inside] = spectrum.extension_constants[n] * eval_pswf(spectrum, n, ts[inside] / c)
    if np.any(~inside):
        out[~inside] = _band_integral(spectrum, n, ts[~inside])
    return out.reshape(np.shape(t)) if np.ndim(t) else float(out[0])
