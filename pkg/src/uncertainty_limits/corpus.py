"""Seeded random signals and systems for property checks.

Every generator draws from a ``numpy.random.Generator``; the ``*_corpus``
helpers seed one from an integer so a (seed, CORPUS_VERSION) pair always
reproduces the same objects.  Bump CORPUS_VERSION whenever a draw changes.
"""
from __future__ import annotations

import math

import numpy as np

from .concentration import SampledSignal, sample_function
from .errors import InvalidParameterError
from .lti import RationalSystem
from .pswf import compute_spectrum, extend_pswf_time

__all__ = [
    "CORPUS_VERSION",
    "SIGNAL_KINDS",
    "random_signal",
    "signal_corpus",
    "random_stable_system",
    "system_corpus",
]

CORPUS_VERSION = 1
SIGNAL_KINDS = ("gaussian_mixture", "damped_sinusoid", "truncated_prolate")


def _gaussian_mixture(rng):
    k = rng.integers(1, 5)
    centers = rng.uniform(-3, 3, k)
    widths = rng.uniform(0.3, 2.0, k)
    amps = rng.uniform(0.2, 1.0, k) * rng.choice([-1.0, 1.0], k)
    amps[0] = abs(amps[0])

    def f(t):
        t = np.asarray(t)[..., None]
        return np.sum(amps * np.exp(-0.5 * ((t - centers) / widths) ** 2), axis=-1)

    lo = np.min(centers - 9 * widths)
    hi = np.max(centers + 9 * widths)
    return sample_function(f, lo, hi, widths.min() / 25)


def _damped_sinusoid(rng):
    # t^3 onset keeps the spectrum decaying fast enough for finite second moments
    k = rng.integers(1, 4)
    sig = rng.uniform(0.5, 2.0, k)
    om = rng.uniform(0.0, 6.0, k)
    ph = rng.uniform(0, 2 * np.pi, k)
    amps = rng.uniform(0.2, 1.0, k)

    def f(t):
        t = np.asarray(t)[..., None]
        tp = np.clip(t, 0, None)
        return np.sum(amps * tp**3 * np.exp(-sig * tp) * np.sin(om * tp + ph) * (t > 0), axis=-1)

    t_end = 40.0 / sig.min()
    dt = min(0.02, 0.05 / (om.max() + sig.max()))
    return sample_function(f, -1.0, t_end, dt)


def _truncated_prolate(rng, smooth):
    c = rng.uniform(0.5, 6.0)
    n = int(rng.integers(0, 3))
    W = rng.uniform(0.5, 4.0)
    spec = compute_spectrum(c, n_max=n, quad_order=64)
    L = rng.uniform(2.0, 8.0) * c / W  # truncation half-width in seconds

    if smooth:
        # Gaussian taper of width L instead of a hard cut
        def f(t):
            return extend_pswf_time(spec, n, W * t) * np.exp(-0.5 * (t / L) ** 2)

        half = 9 * L
    else:
        def f(t):
            return np.where(np.abs(t) <= L, extend_pswf_time(spec, n, W * t), 0.0)

        half = 1.25 * L
    dt = min(L / 400, 0.1 / W)
    return sample_function(f, -half, half, dt)


def random_signal(rng: np.random.Generator, kind: str, smooth: bool = False) -> SampledSignal:
    """Draw one real finite-energy signal of the given kind.

    With ``smooth=True`` every kind has a spectrum whose second moment is
    finite on the sampled band (prolates are tapered rather than cut).
    """
    if kind == "gaussian_mixture":
        return _gaussian_mixture(rng)
    if kind == "damped_sinusoid":
        return _damped_sinusoid(rng)
    if kind == "truncated_prolate":
        return _truncated_prolate(rng, smooth)
    raise InvalidParameterError(f"unknown signal kind {kind!r}")


def signal_corpus(n: int, seed: int = 0, kinds=SIGNAL_KINDS, smooth: bool = False) -> list[SampledSignal]:
    """``n`` signals cycling through ``kinds``."""
    rng = np.random.default_rng([CORPUS_VERSION, seed])
    return [random_signal(rng, kinds[i % len(kinds)], smooth) for i in range(n)]


def random_stable_system(rng: np.random.Generator, min_order: int = 2, max_order: int = 6,
                         min_relative_degree: int = 2) -> RationalSystem:
    """Random stable real system with positive dc gain.

    Poles are real or underdamped pairs with magnitudes in [0.2, 5] rad/s;
    zeros are real, of either sign, and keep at least ``min_relative_degree``.
    """
    if not 1 <= min_order <= max_order:
        raise InvalidParameterError("need 1 <= min_order <= max_order")
    order = int(rng.integers(min_order, max_order + 1))
    poles = []
    while len(poles) < order:
        if order - len(poles) >= 2 and rng.random() < 0.5:
            w = math.exp(rng.uniform(math.log(0.2), math.log(5.0)))
            z = rng.uniform(0.1, 0.95)
            re, im = -z * w, w * math.sqrt(1 - z * z)
            poles += [complex(re, im), complex(re, -im)]
        else:
            poles.append(complex(-math.exp(rng.uniform(math.log(0.2), math.log(5.0))), 0.0))
    n_zeros = int(rng.integers(0, order - min_relative_degree + 1)) if order > min_relative_degree else 0
    zeros = rng.uniform(0.3, 5.0, n_zeros) * rng.choice([-1.0, 1.0], n_zeros)
    den = np.real(np.poly(poles))[::-1]
    num = np.real(np.poly(zeros))[::-1] if n_zeros else np.ones(1)
    # unit dc gain
    num = num * (den[0] / num[0])
    return RationalSystem(num, den)


def system_corpus(n: int, seed: int = 0, **kwargs) -> list[RationalSystem]:
    rng = np.random.default_rng([CORPUS_VERSION, seed])
    return [random_stable_system(rng, **kwargs) for _ in range(n)]
