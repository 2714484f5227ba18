"""Gaussian impulse responses: the optimal monotone step design.

``h(t) = 2 sqrt(a / pi) exp(-a t^2)`` has unit integral over t >= 0, step
response ``erf(sqrt(a) t)`` and spectrum ``2 exp(-w^2 / 4a)``.  It attains
equality in the time-frequency variance bound, and its rise and settling
times scale as ``1 / sqrt(a)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf, erfinv

from .errors import InvalidParameterError

__all__ = [
    "GaussianDesign",
    "impulse",
    "step",
    "spectrum",
    "rise_time",
    "settling_time",
    "freq_std",
    "products",
    "design_from",
    "RISE_CONSTANT",
    "SETTLING_CONSTANT",
    "SETTLING_BAND",
]

SETTLING_BAND = 0.03
# erf(x) = 0.1, 0.9, 0.97 at sqrt(a) t = these values
RISE_CONSTANT = float(erfinv(0.9) - erfinv(0.1))
SETTLING_CONSTANT = float(erfinv(1.0 - SETTLING_BAND))


@dataclass(frozen=True)
class GaussianDesign:
    """Gaussian design with concentration parameter ``a`` (1/s^2)."""

    a: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and self.a > 0):
            raise InvalidParameterError(f"a must be positive, got {self.a}")
        object.__setattr__(self, "a", float(self.a))


def impulse(d: GaussianDesign, t):
    return 2.0 * np.sqrt(d.a / np.pi) * np.exp(-d.a * np.asarray(t, dtype=float) ** 2)


def step(d: GaussianDesign, t):
    """``erf(sqrt(a) t)``, the response to a unit step applied at t = 0."""
    return erf(np.sqrt(d.a) * np.asarray(t, dtype=float))


def spectrum(d: GaussianDesign, omega):
    """Fourier transform of :func:`impulse` over the whole real line."""
    return 2.0 * np.exp(-np.asarray(omega, dtype=float) ** 2 / (4.0 * d.a))


def rise_time(d: GaussianDesign) -> float:
    """10-90% rise time, about 1.0742 / sqrt(a)."""
    return RISE_CONSTANT / np.sqrt(d.a)


def settling_time(d: GaussianDesign) -> float:
    """Time to enter (and stay in) the 3% band, about 1.5345 / sqrt(a)."""
    return SETTLING_CONSTANT / np.sqrt(d.a)


def freq_std(d: GaussianDesign) -> float:
    """Spread ``sqrt(2a)`` of the spectrum ``2 exp(-w^2/4a)`` read as a density."""
    return float(np.sqrt(2.0 * d.a))


def products(d: GaussianDesign) -> tuple[float, float]:
    """``(t_r sigma_w, t_s sigma_w)``; independent of ``a`` (about 1.5192 and 2.1701)."""
    s = freq_std(d)
    return rise_time(d) * s, settling_time(d) * s


def design_from(*, rise_time: float | None = None, settling_time: float | None = None,
                freq_std: float | None = None) -> GaussianDesign:
    """Invert one closed form for ``a``.

    Exactly one keyword must be given.

    >>> round(design_from(freq_std=np.sqrt(2)).a, 12)
    1.0
    """
    given = {k: v for k, v in (("rise_time", rise_time), ("settling_time", settling_time),
                               ("freq_std", freq_std)) if v is not None}
    if len(given) != 1:
        raise InvalidParameterError("give exactly one of rise_time, settling_time, freq_std")
    (name, value), = given.items()
    if not (np.isfinite(value) and value > 0):
        raise InvalidParameterError(f"{name} must be positive, got {value}")
    if name == "rise_time":
        return GaussianDesign((RISE_CONSTANT / value) ** 2)
    if name == "settling_time":
        return GaussianDesign((SETTLING_CONSTANT / value) ** 2)
    return GaussianDesign(value**2 / 2.0)
