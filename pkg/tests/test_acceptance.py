"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line; the lines are repeated together at the
end of the pytest run.  Run just this file with

    pytest tests/test_acceptance.py -v
"""
import math
import warnings

import numpy as np
import pytest
from scipy.special import erfinv

from oracles import half_gaussian_power
from uncertainty_limits import gaussian as G
from uncertainty_limits.cli import figure_table
from uncertainty_limits.concentration import (
    ConcentrationPair,
    energy_band_edge,
    freq_concentration,
    heisenberg_product,
    l1_fraction_freq,
    sample_function,
    time_concentration,
    transform,
    variance_stats,
)
from uncertainty_limits.corpus import signal_corpus, system_corpus
from uncertainty_limits.feasibility import (
    SpecSheet,
    admissible,
    chalk_check,
    downward_closure_check,
    extremal_signal,
    min_overshoot,
    overshoot_energy_bound,
)
from uncertainty_limits.lti import (
    HorizonWarning,
    RationalSystem,
    SecondOrderParams,
    impulse_response,
    rise_bandwidth_product,
    second_order_rise,
    step_metrics,
)
from uncertainty_limits.pswf import (
    compute_spectrum,
    eval_pswf,
    extend_pswf_time,
    kernel_eigenvalues,
    lambda0_asymptotic,
    largest_eigenvalue,
)

pytestmark = pytest.mark.acceptance

A_VALUES = (0.01, 0.25, 1.0, 25.0, 400.0)
ZETAS = (0.2, 0.5, 1 / math.sqrt(2), 0.9)
OMEGAS = (0.5, 1.0, 2.0)


def sampled_gaussian(a):
    s = 1 / math.sqrt(a)
    return sample_function(lambda t: G.impulse(G.GaussianDesign(a), np.abs(t)), -12 * s, 12 * s, s / 50)


def test_01_gaussian_constants(criterion):
    vals = []
    for a in A_VALUES:
        d = G.GaussianDesign(a)
        # amplitude-weighted spread of 2 exp(-w^2 / 4a), measured from samples
        sigma_w = math.sqrt(variance_stats(sampled_gaussian(a), weighting="amplitude").var_freq)
        pr, ps = G.rise_time(d) * sigma_w, G.settling_time(d) * sigma_w
        vals.append((pr, ps))
    pr, ps = np.array(vals).T
    ok = bool(np.all((1.51 <= pr) & (pr <= 1.53)) and np.all((2.16 <= ps) & (ps <= 2.18)))
    criterion(1, "Gaussian t_r*sigma_w and t_s*sigma_w", ok,
              f"t_r*sigma_w in [{pr.min():.5f}, {pr.max():.5f}], t_s*sigma_w in [{ps.min():.5f}, {ps.max():.5f}]")


def test_02_lambda0_asymptote(criterion):
    gaps = {c: abs(largest_eigenvalue(c) - lambda0_asymptotic(c)) for c in (4.0, 5.0, 6.0, 8.0)}
    _, rows = figure_table(3)
    rows = np.array(rows)
    row = rows[np.argmin(np.abs(rows[:, 0] - 0.5))]
    rel = abs(row[1] - row[2]) / row[1]
    ok = max(gaps.values()) <= 1e-3 and rel > 0.05
    criterion(2, "lambda0 asymptote", ok,
              f"max gap {max(gaps.values()):.2e} for c in 4..8; relative gap {rel:.3f} at c = 0.5")


def test_03_trace_identity(criterion):
    errs = {c: abs(kernel_eigenvalues(c, 128)[:40].sum() - 2 * c / math.pi) for c in (1.0, 2.0, 4.0)}
    criterion(3, "trace identity", max(errs.values()) <= 1e-3,
              ", ".join(f"c={c:g}: {e:.1e}" for c, e in errs.items()))


def test_04_heisenberg(criterion):
    products = [heisenberg_product(variance_stats(h)) for h in signal_corpus(100, seed=1, smooth=True)]
    gauss = [heisenberg_product(variance_stats(sampled_gaussian(a))) for a in A_VALUES]
    ok = min(products) >= 0.25 * (1 - 1e-6) and max(abs(g - 0.25) for g in gauss) <= 1e-3
    criterion(4, "Heisenberg bound", ok,
              f"corpus min {min(products):.12f}; Gaussian max deviation {max(abs(g - 0.25) for g in gauss):.1e}")


def test_05_admissibility_necessity(criterion):
    rng = np.random.default_rng(5)
    margins = []
    for h in signal_corpus(200, seed=2):
        s = transform(h)
        # slot placed around the peak with a random asymmetric offset
        peak = h.times[np.argmax(np.abs(h.values))]
        T = math.exp(rng.uniform(math.log(0.2), math.log(8.0)))
        lo = peak - rng.uniform(0, 1) * T
        W = rng.uniform(0.2, 4.0)
        pair = ConcentrationPair(math.sqrt(time_concentration(h, lo, lo + T)),
                                 math.sqrt(freq_concentration(s, -W, W)))
        margins.append(admissible(pair, W * T / 2).margin)
    criterion(5, "admissibility necessity", min(margins) >= -1e-4,
              f"200 signals, min margin {min(margins):.4f}")


def test_06_extremal_attainment(criterion):
    # the sampled construction at the given (alpha, c); its tails decay only like 1/t
    results = []
    for c in (2.0, 4.0):
        spec = compute_spectrum(c, n_max=0)
        for alpha in (0.5, 0.7, 0.9):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                h = extremal_signal(alpha, c, span=64, spectrum=spec)
                s = transform(h)
            pair = ConcentrationPair(math.sqrt(time_concentration(h, -0.5, 0.5)),
                                     math.sqrt(freq_concentration(s, -2 * c, 2 * c)))
            results.append((c, alpha, admissible(pair, c, spectrum=spec).margin))
    worst = max(results, key=lambda r: abs(r[2]))
    criterion(6, "extremal attainment", all(abs(m) <= 1e-4 for _, _, m in results),
              f"max |margin| {abs(worst[2]):.4f} at c={worst[0]:g}, alpha={worst[1]:g}"
              f" (sqrt(lambda0) = {math.sqrt(largest_eigenvalue(worst[0])):.4f})")


def test_07_downward_closure(criterion):
    rng = np.random.default_rng(7)
    violations = 0
    for _ in range(500):
        c = rng.uniform(0.1, 8.0)
        a, b = rng.uniform(0.01, 1.0, 2)
        sa, sb = rng.uniform(0.01, 1.0, 2)
        if (a, b) in ((1.0, 0.0), (0.0, 1.0)):
            continue
        violations += not downward_closure_check(ConcentrationPair(a, b), ConcentrationPair(a * sa, b * sb), c)
    criterion(7, "downward closure", violations == 0, f"{violations} violations in 500 pairs")


def test_08_chalk_necessity(criterion):
    rng = np.random.default_rng(8)
    margins = []
    for h in signal_corpus(100, seed=1, smooth=True):
        s = transform(h)
        v = variance_stats(h, s)
        st, sw = math.sqrt(v.var_time), math.sqrt(v.var_freq)
        for _ in range(20):
            # windows on the signal's own scales, placed asymmetrically around its energy
            T = st * math.exp(rng.uniform(math.log(0.1), math.log(4.0)))
            t0 = v.mean_time - rng.uniform(0, 1) * T
            W = sw * math.exp(rng.uniform(math.log(0.1), math.log(4.0)))
            w0 = rng.uniform(-2, 2) * sw - rng.uniform(0, 1) * W
            a1 = time_concentration(h, t0, t0 + T)
            b1 = l1_fraction_freq(s, w0, w0 + W)
            margins.append(chalk_check(T, W, a1, b1).margin)
    margins = np.array(margins)
    bad = int(np.sum(margins <= 0))
    criterion(8, "Chalk necessity", bad == 0,
              f"{bad} of {len(margins)} windows violate, min margin {margins.min():.4f}")


def test_09_rise_bandwidth(criterion):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HorizonWarning)
        products = [rise_bandwidth_product(s) for s in system_corpus(100, seed=9)]
        worked = rise_bandwidth_product(RationalSystem([1], [1, 2, 1]))
    ok = min(products) >= 1 - 1e-6 and abs(worked - math.e / 2) <= 1e-4
    criterion(9, "rise-bandwidth bound", ok,
              f"corpus min {min(products):.6f}; 1/(s+1)^2 gives {worked:.8f} (e/2 = {math.e / 2:.8f})")


def test_10_second_order_rise(criterion):
    errs = []
    for z in ZETAS:
        for w0 in OMEGAS:
            p = SecondOrderParams(z, w0)
            errs.append(abs(step_metrics(p.system()).t_r_full / second_order_rise(p) - 1))
    criterion(10, "second-order rise time", max(errs) <= 0.01, f"max relative error {max(errs):.1e}")


def test_11_extension_tail(criterion):
    s = compute_spectrum(8.0, n_max=0)
    tau = np.linspace(0, 3, 3001)
    inside = tau <= 1
    body = np.abs(eval_pswf(s, 0, tau[inside])).max()
    tail = np.abs(extend_pswf_time(s, 0, 8.0 * tau[~inside]) / s.extension_constants[0]).max()
    criterion(11, "prolate extension tail", tail < 0.05 * body, f"tail/body = {tail / body:.4f}")


def _band_edge(power, scale):
    # band holding all but 1e-6 of the energy stands in for the band limit
    return energy_band_edge(power, 1 - 1e-6, scale=scale)


def _second_order_power(z, w0):
    return lambda w: w0**4 / ((w0 * w0 - w * w) ** 2 + (2 * z * w0 * w) ** 2)


def test_12_min_overshoot(criterion):
    rows = []
    for a in A_VALUES:
        d = G.GaussianDesign(a)
        W = _band_edge(half_gaussian_power(a), math.sqrt(a))
        E = math.sqrt(2 * a / math.pi)
        for T, dev in ((erfinv(0.9) / math.sqrt(a), 0.1), (G.settling_time(d), G.SETTLING_BAND)):
            if G.impulse(d, T) >= 1:
                continue  # tail precondition |h| < 1 after the horizon
            bound = min_overshoot(SpecSheet(T=T, delta=-dev, E=E, W=W), W * T / 2)
            rows.append(("gauss", a, dev, bound))
    diag = []
    for z in ZETAS:
        for w0 in OMEGAS:
            p = SecondOrderParams(z, w0)
            sys_ = p.system()
            m = step_metrics(sys_)
            h = impulse_response(sys_, 40 / (z * w0), 0.01 / w0)
            after = h.times > m.t_p
            if np.abs(h.values[after]).max() >= 1:
                continue
            E = w0 / (4 * z)  # int_0^inf h^2
            W = _band_edge(_second_order_power(z, w0), w0)
            bound = min_overshoot(SpecSheet(T=m.t_p, delta=m.overshoot, E=E, W=W), W * m.t_p / 2)
            rows.append(("second", (z, w0), m.overshoot, bound))
            diag.append(overshoot_energy_bound(h, m.t_p) / m.overshoot)
    ok = all(dev >= bound - 1e-6 for *_, dev, bound in rows)
    worst = max(bound - dev for *_, dev, bound in rows)
    criterion(12, "min-overshoot bound", ok,
              f"{len(rows)} responses, max (bound - |delta|) = {worst:.2e};"
              f" tail energy / overshoot up to {max(diag):.3f}")
