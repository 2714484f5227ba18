"""Uncertainty-principle limits on transient specifications of LTI systems.

Submodules
----------
pswf           prolate spheroidal spectrum of the sinc-kernel operator
concentration  sampled signals, spectra and time/frequency concentration
feasibility    admissibility and spec-sheet checks
gaussian       optimal monotone Gaussian design
lti            rational system simulation, transient metrics and bandwidths
corpus         seeded random signals and systems
cli            command-line front end
"""
from .concentration import (
    ConcentrationPair,
    SampledSignal,
    SampledSpectrum,
    VarianceStats,
    freq_concentration,
    heisenberg_product,
    measure_pair,
    time_concentration,
    transform,
    variance_stats,
)
from .errors import *  # noqa: F401,F403
from .feasibility import SpecSheet, Verdict, admissible, extremal_signal, spec_feasible
from .gaussian import GaussianDesign
from .lti import RationalSystem, SecondOrderParams, StepMetrics, step_metrics
from .pswf import ProlateSpectrum, TimeBandwidthProduct, compute_spectrum, largest_eigenvalue

__version__ = "0.1.0"
