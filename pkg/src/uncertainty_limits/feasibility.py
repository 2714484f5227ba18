"""Admissibility and specification checks built on concentration inequalities.

Angles are in radians.  ``theta0 = arccos(sqrt(lambda0))`` is the smallest
total angle ``arccos(alpha) + arccos(beta)`` a signal can reach for a slot
of length T and band (-W, W) with c = W T / 2.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Mapping

import numpy as np

from .concentration import (
    ConcentrationPair,
    SampledSignal,
    VarianceStats,
    window_integral,
)
from .errors import (
    ExcludedPairError,
    InconsistentSpecError,
    InvalidParameterError,
    MissingFieldError,
    NoPeakError,
    ResolutionError,
)
from .pswf import (
    DEFAULT_QUAD_ORDER,
    ProlateSpectrum,
    TimeBandwidthProduct,
    _gauss_legendre,
    as_product,
    compute_spectrum,
    eval_pswf,
    extend_pswf_time,
    lambda0_asymptotic,
    largest_eigenvalue,
)

__all__ = [
    "SpecSheet",
    "Verdict",
    "admissible",
    "spec_feasible",
    "step_energy_ratio",
    "prolate_time_function",
    "extremal_coefficients",
    "extremal_signal",
    "extremal_pair",
    "downward_closure_check",
    "min_overshoot",
    "overshoot_energy_bound",
    "peak_rise_gap",
    "theorem51_check",
    "theorem52_check",
    "chalk_check",
    "chalk_spec_bounds",
    "chalk_spec_check",
    "local_bound_check",
]

DEFAULT_SLACK = 1e-9
ASYMPTOTIC_C = 16.0


@dataclass(frozen=True)
class SpecSheet:
    """Declared time-domain specification.

    ``T`` is the horizon (peak time when checking speed), ``delta`` the signed
    deviation ``u(T) - 1`` of the unit-normalized step, ``E`` the energy of the
    impulse response.  ``W`` (rad/s) sets c = W T / 2; without it the band is
    treated as unlimited (lambda0 = 1).  ``beta`` is the root-energy fraction
    inside (-W, W) and defaults to 1, i.e. a response band-limited to W.
    """

    T: float
    delta: float
    E: float
    W: float | None = None
    beta: float | None = None
    E1: float | None = None

    FIELDS = ("T", "delta", "E", "W", "beta", "E1")

    def __post_init__(self):
        if not self.T > 0:
            raise InconsistentSpecError(f"T must be positive, got {self.T}")
        if not self.E > 0:
            raise InconsistentSpecError(f"E must be positive, got {self.E}")
        if not 1 + self.delta > 0:
            raise InconsistentSpecError("1 + delta must be positive (step response positive at T)")
        if self.W is None and self.beta is None:
            raise InconsistentSpecError("give W, beta, or both")
        if self.W is not None and not self.W > 0:
            raise InconsistentSpecError(f"W must be positive, got {self.W}")
        if self.beta is not None and not 0 < self.beta <= 1:
            raise InconsistentSpecError(f"beta must lie in (0, 1], got {self.beta}")
        if self.E1 is not None and not self.E1 > 0:
            raise InconsistentSpecError(f"E1 must be positive, got {self.E1}")

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "SpecSheet":
        unknown = sorted(set(doc) - set(cls.FIELDS))
        if unknown:
            raise InconsistentSpecError(f"unknown fields: {', '.join(unknown)}")
        for name in ("T", "delta", "E"):
            if doc.get(name) is None:
                raise MissingFieldError(name)
        kwargs = {}
        for name in cls.FIELDS:
            val = doc.get(name)
            if val is not None:
                try:
                    kwargs[name] = float(val)
                except (TypeError, ValueError):
                    raise InconsistentSpecError(f"field {name!r} is not a number: {val!r}") from None
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.FIELDS if getattr(self, k) is not None}

    @property
    def c(self) -> TimeBandwidthProduct | None:
        return None if self.W is None else TimeBandwidthProduct.from_band(self.W, self.T)

    @property
    def beta_or_default(self) -> float:
        return 1.0 if self.beta is None else self.beta


@dataclass
class Verdict:
    """Outcome of one inequality test.

    ``margin`` is the slack of the governing inequality, in radians for the
    arccos tests and in the inequality's own units otherwise; negative means
    violated.  ``details`` holds per-test sub-results.
    """

    feasible: bool
    margin: float
    governing_test: str
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "Verdict":
        return cls(
            feasible=bool(doc["feasible"]),
            margin=math.nan if doc["margin"] is None else float(doc["margin"]),
            governing_test=str(doc["governing_test"]),
            details=dict(doc.get("details", {})),
        )


def _lambda0(c, spectrum=None, quad_order=DEFAULT_QUAD_ORDER):
    if spectrum is not None:
        return spectrum.lambda0
    c = as_product(c).c
    try:
        return largest_eigenvalue(c, quad_order)
    except ResolutionError:
        # lambda0 is within rounding of 1 here; the asymptote is accurate to a few percent of 1 - lambda0
        if c < ASYMPTOTIC_C:
            raise
        return lambda0_asymptotic(c)


def admissible(
    pair: ConcentrationPair,
    c,
    spectrum: ProlateSpectrum | None = None,
    quad_order: int = DEFAULT_QUAD_ORDER,
) -> Verdict:
    """Test ``arccos(alpha) + arccos(beta) >= arccos(sqrt(lambda0))``.

    Equality is admissible.  The corner pairs (1, 0) and (0, 1) are excluded
    from the underlying theorem and rejected.
    """
    a, b = pair.alpha, pair.beta
    if (a, b) in ((1.0, 0.0), (0.0, 1.0)):
        raise ExcludedPairError(f"pair ({a}, {b}) is excluded")
    lam0 = _lambda0(c, spectrum, quad_order)
    theta0 = math.acos(math.sqrt(lam0))
    margin = math.acos(a) + math.acos(b) - theta0
    return Verdict(
        feasible=margin >= 0.0,
        margin=margin,
        governing_test="eq8",
        details={"alpha": a, "beta": b, "c": as_product(c).c, "lambda0": lam0, "theta0": theta0},
    )


def step_energy_ratio(spec: SpecSheet) -> float:
    """``(1 + delta(T)) / sqrt(E T)``, the Cauchy-Schwarz lower bound on alpha(T)."""
    return (1.0 + spec.delta) / math.sqrt(spec.E * spec.T)


def spec_feasible(
    spec: SpecSheet,
    slack: float = DEFAULT_SLACK,
    quad_order: int = DEFAULT_QUAD_ORDER,
) -> Verdict:
    """Check a spec sheet against the quick test and the full arccos test.

    The quick test ``r < sqrt(lambda0)`` runs first, then
    ``arccos r + arccos beta > arccos sqrt(lambda0)`` with
    ``r = (1 + delta) / sqrt(E T)``.  Both are strict: a test passes only
    when its margin exceeds ``slack``.  If ``r > 1`` the energy budget cannot
    even produce the demanded step value and the verdict is immediate.
    """
    r = step_energy_ratio(spec)
    if spec.W is None:
        lam0, cval = 1.0, None
    else:
        cval = spec.c.c
        lam0 = _lambda0(cval, quad_order=quad_order)
    beta = spec.beta_or_default
    theta0 = math.acos(math.sqrt(lam0))
    details: dict[str, Any] = {"ratio": r, "lambda0": lam0, "c": cval, "beta": beta, "theta0": theta0}

    if r > 1.0:
        details["energy"] = {"margin": 1.0 - r, "passed": False}
        return Verdict(False, 1.0 - r, "energy", details)

    m15 = math.acos(r) - theta0
    details["eq15"] = {"margin": m15, "passed": m15 > slack}
    if not m15 > slack:
        return Verdict(False, m15, "eq15", details)

    m14 = math.acos(r) + math.acos(beta) - theta0
    details["eq14"] = {"margin": m14, "passed": m14 > slack}
    governing, margin = ("eq14", m14) if m14 < m15 else ("eq15", m15)
    return Verdict(m14 > slack, margin, governing, details)


def prolate_time_function(spectrum: ProlateSpectrum, W: float, n: int = 0):
    """Unit-energy time-domain PSWF band-limited to (-W, W).

    Returns ``g(t) = sqrt(2 pi W) * E_n(W t)`` where ``E_n`` is the
    band-limited extension of psi_n; its fraction of energy inside
    ``|t| < T / 2`` is lambda_n when ``c = W T / 2``.
    """
    scale = math.sqrt(2 * math.pi * W)

    def g(t):
        return scale * extend_pswf_time(spectrum, n, W * np.asarray(t, dtype=float))

    return g


def extremal_coefficients(alpha: float, lambda0: float) -> tuple[float, float]:
    """``p = sqrt((1 - alpha^2) / (1 - lambda0))``, ``q = alpha / sqrt(lambda0) - p``."""
    p = math.sqrt((1 - alpha**2) / (1 - lambda0))
    return p, alpha / math.sqrt(lambda0) - p


def _extremal_setup(alpha, c, spectrum, quad_order):
    if not 0 < alpha < 1:
        raise InvalidParameterError(f"alpha must lie in (0, 1), got {alpha}")
    if spectrum is None:
        spectrum = compute_spectrum(c, n_max=0, quad_order=quad_order)
    p, q = extremal_coefficients(alpha, spectrum.lambda0)
    return spectrum, p, q


def extremal_signal(
    alpha: float,
    c,
    T: float = 1.0,
    span: float = 16.0,
    samples_per_slot: int = 400,
    spectrum: ProlateSpectrum | None = None,
    quad_order: int = DEFAULT_QUAD_ORDER,
) -> SampledSignal:
    """Sample ``h = p psi0 + q P_T psi0`` on ``|t| < span * T / 2``.

    ``psi0`` is the unit-energy time-domain PSWF for band ``W = 2c / T``; the
    slot is ``(-T/2, T/2)``.  The grid is offset by half a sample so the slot
    edges, where ``h`` jumps, fall mid-cell.

    The sampled signal is a truncation of an infinitely supported function
    whose tails decay only like 1/t, so concentrations measured from the
    samples carry a truncation bias of order ``1 / span``.  Use
    :func:`extremal_pair` for a measurement on the untruncated signal.
    """
    spectrum, p, q = _extremal_setup(alpha, c, spectrum, quad_order)
    W = 2 * spectrum.c.c / T
    g = prolate_time_function(spectrum, W)
    dt = T / samples_per_slot
    half = int(round(span * samples_per_slot / 2))
    t = (np.arange(-half, half) + 0.5) * dt
    vals = g(t)
    vals = np.where(np.abs(t) < T / 2, (p + q) * vals, p * vals)
    return SampledSignal(t[0], dt, vals)


def extremal_pair(
    alpha: float,
    c,
    T: float = 1.0,
    spectrum: ProlateSpectrum | None = None,
    quad_order: int = DEFAULT_QUAD_ORDER,
    measure_order: int = 256,
) -> ConcentrationPair:
    """Measure (alpha, beta) of the extremal signal without truncating it.

    Slot energy is integrated in time with Gauss-Legendre quadrature; the band
    energy is integrated in frequency from the Fourier transform of each
    piece (``psi0`` is band-limited with known transform, ``P_T psi0`` is
    transformed by quadrature over the slot).  The eigen-relation between the
    two pieces is never used, so the result independently tests whether the
    construction reaches the boundary of the admissible set.
    """
    spectrum, p, q = _extremal_setup(alpha, c, spectrum, quad_order)
    cval = spectrum.c.c
    W = 2 * cval / T
    g = prolate_time_function(spectrum, W)
    x, w = _gauss_legendre(measure_order)

    ts, wt = x * T / 2, w * T / 2
    g_slot = g(ts)
    slot_g2 = wt @ g_slot**2
    # ||g|| = 1 by Parseval: its transform is sqrt(2 pi W) psi0(xi / W) / W on |xi| < W
    energy = p**2 + (2 * p * q + q**2) * slot_g2
    alpha2 = (p + q) ** 2 * slot_g2 / energy

    xis, wx = x * W, w * W
    g_hat = math.sqrt(2 * math.pi * W) * eval_pswf(spectrum, 0, x) / W
    trunc_hat = np.cos(np.multiply.outer(xis, ts)) @ (wt * g_slot)
    h_hat = p * g_hat + q * trunc_hat
    beta2 = (wx @ np.abs(h_hat) ** 2) / (2 * math.pi) / energy
    return ConcentrationPair(
        float(np.sqrt(np.clip(alpha2, 0, 1))), float(np.sqrt(np.clip(beta2, 0, 1)))
    )


def downward_closure_check(pair: ConcentrationPair, pair_smaller: ConcentrationPair, c) -> bool:
    """True iff ``admissible(pair)`` implies ``admissible(pair_smaller)``."""
    if not (0 < pair_smaller.alpha <= pair.alpha and 0 < pair_smaller.beta <= pair.beta):
        raise InvalidParameterError("pair_smaller must be componentwise in (0, pair]")
    if not admissible(pair, c).feasible:
        return True
    return admissible(pair_smaller, c).feasible


def min_overshoot(spec: SpecSheet, c_at_tp, quad_order: int = DEFAULT_QUAD_ORDER) -> float:
    """Lower bound ``E (1 - lambda0(c))`` on the deviation at the peak time.

    Assumes a unit-normalized Mexican-hat impulse response with ``|h| < 1``
    after the peak time, band-limited so that its slot fraction cannot
    exceed lambda0.
    """
    return spec.E * (1.0 - _lambda0(c_at_tp, quad_order=quad_order))


def overshoot_energy_bound(h: SampledSignal, t_p: float) -> float:
    """``int_{t_p}^inf h^2 = E (1 - alpha^2(t_p))``, the intermediate bound."""
    return window_integral(h.t0, h.dt, h.values**2, t_p, np.inf)


def peak_rise_gap(metrics) -> float:
    """Upper bound ``delta(t_p) * t_p`` on ``t_p - t_r`` for a Mexican-hat response."""
    if not metrics.overshoot:
        return 0.0
    if metrics.t_p is None:
        raise NoPeakError("overshoot reported without a peak time")
    return metrics.overshoot * metrics.t_p


def theorem51_check(pair: ConcentrationPair) -> Verdict:
    """If ``alpha^2 + beta^2 <= 1`` then ``arccos alpha + arccos beta >= pi/2``."""
    a, b = pair.alpha, pair.beta
    applicable = a * a + b * b <= 1.0
    slack = math.acos(a) + math.acos(b) - math.pi / 2
    return Verdict(
        feasible=(slack >= -1e-12) if applicable else True,
        margin=slack,
        governing_test="thm51",
        details={"applicable": applicable, "sum_of_squares": a * a + b * b},
    )


def theorem52_check(spec: SpecSheet, quad_order: int = DEFAULT_QUAD_ORDER) -> Verdict:
    """Spec-sheet form of :func:`theorem51_check` with ``alpha`` replaced by r.

    When it applies, the pi/2 conclusion also clears arccos(sqrt(lambda0)),
    which is always below pi/2; both sides are reported.
    """
    r = step_energy_ratio(spec)
    beta = spec.beta_or_default
    details: dict[str, Any] = {"ratio": r, "beta": beta}
    if r > 1.0:
        details["applicable"] = False
        return Verdict(True, float("nan"), "thm52", details)
    applicable = r * r + beta * beta <= 1.0
    lhs = math.acos(r) + math.acos(beta)
    lam0 = 1.0 if spec.W is None else _lambda0(spec.c.c, quad_order=quad_order)
    details.update(
        applicable=applicable,
        lhs=lhs,
        rhs=math.pi / 2,
        theta0=math.acos(math.sqrt(lam0)),
        exceeds_theta0=lhs > math.acos(math.sqrt(lam0)),
    )
    slack = lhs - math.pi / 2
    return Verdict((slack >= -1e-12) if applicable else True, slack, "thm52", details)


def chalk_check(T: float, W: float, a1: float, b1: float) -> Verdict:
    """Chalk's relation ``W T > 2 pi a1 b1`` for window fractions a1, b1."""
    for name, v in (("a1", a1), ("b1", b1)):
        if not 0.0 <= v <= 1.0:
            raise InvalidParameterError(f"{name} must lie in [0, 1], got {v}")
    margin = W * T - 2 * math.pi * a1 * b1
    return Verdict(margin > 0, margin, "chalk", {"WT": W * T, "a1": a1, "b1": b1})


def chalk_spec_bounds(spec: SpecSheet) -> tuple[float, float]:
    """Left-hand sides ``E W (T / (1+delta))^2`` and ``E1 W T / (1+delta)``.

    The second assumes ``T < t_p`` and ``h > 0`` on (0, T).
    """
    if spec.W is None:
        raise MissingFieldError("W")
    if spec.E1 is None:
        raise MissingFieldError("E1")
    k = spec.T / (1.0 + spec.delta)
    return spec.E * spec.W * k * k, spec.E1 * spec.W * k


def chalk_spec_check(spec: SpecSheet, beta1: float, beta1_prime: float | None = None) -> Verdict:
    """Compare :func:`chalk_spec_bounds` against ``2 pi beta1`` and ``2 pi beta1'``."""
    if spec.W is None:
        raise MissingFieldError("W")
    k = spec.T / (1.0 + spec.delta)
    lhs1 = spec.E * spec.W * k * k
    m1 = lhs1 - 2 * math.pi * beta1
    details: dict[str, Any] = {"eq24": {"lhs": lhs1, "rhs": 2 * math.pi * beta1, "margin": m1}}
    margin, gov = m1, "eq24"
    if beta1_prime is not None:
        lhs2 = chalk_spec_bounds(spec)[1]
        m2 = lhs2 - 2 * math.pi * beta1_prime
        details["eq30"] = {"lhs": lhs2, "rhs": 2 * math.pi * beta1_prime, "margin": m2}
        if m2 < m1:
            margin, gov = m2, "eq30"
    return Verdict(margin > 0, margin, gov, details)


def local_bound_check(h: SampledSignal, T: float, K_prime: float, v: VarianceStats) -> Verdict:
    """Evaluate the local-uncertainty bounds with a caller-supplied constant.

    Reports ``int_0^T h^2`` against ``K' sigma_w E T`` and ``(1 + delta(T)) / T``
    against ``sqrt(K' sigma_w E)``.  The constant is not known in closed form,
    so the verdict is informational only.
    """
    if not K_prime > 0:
        raise InvalidParameterError("K_prime must be positive")
    if not T > 0:
        raise InvalidParameterError("T must be positive")
    sigma_w = math.sqrt(v.var_freq)
    E = h.energy_l2
    slot = window_integral(h.t0, h.dt, h.values**2, 0.0, T)
    step_T = window_integral(h.t0, h.dt, h.values, 0.0, T)
    rhs32 = K_prime * sigma_w * E * T
    rhs33 = math.sqrt(K_prime * sigma_w * E)
    lhs33 = step_T / T
    details = {
        "eq32": {"lhs": slot, "rhs": rhs32, "ratio": slot / rhs32 if rhs32 else math.inf},
        "eq33": {"lhs": lhs33, "rhs": rhs33, "ratio": lhs33 / rhs33 if rhs33 else math.inf},
    }
    m32, m33 = rhs32 - slot, rhs33 - lhs33
    margin, gov = (m32, "eq32") if m32 < m33 else (m33, "eq33")
    return Verdict(margin >= 0, margin, gov, details)
