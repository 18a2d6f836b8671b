"""Wolff potentials of radial densities and the Wolff-type integral system

    u = c1(x) W_{beta,gamma}(|y|^sigma1 v^q),   v = c2(x) W_{beta,gamma}(|y|^sigma2 u^p).
"""

__version__ = "0.1.0"

from .asymptotics import (IterationTrace, RateFit, Verdict, fit_rate, iterate_liouville,
                          lambda_limit_check, lambda_limit_value)
from .constructions import (BoundednessReport, BoundednessVerdict, ExplicitPair, Mode, build_pair,
                            coefficient_ratios, fast_trichotomy_fit, verify_decay_class)
from .core import (ExponentSet, FastVKind, FastVRateCase, Regime, RegimeReport, SystemParams,
                   classify, criticality_gap, criticality_gap_hls_form, exponents, fast_rate,
                   fast_v_rate, optimal_integrability_thresholds, slow_rates)
from .errors import (DegenerateProduct, DivergentTail, IllConditioned, InvalidParameters,
                     ModeUnavailable, NonIntegrableAtOrigin, NonpositiveDenominator,
                     NotAdmissible, QuadratureFailure, WolffkitError)
from .wolff import (BallMassProfile, QuadratureSpec, RadialDensity, ball_mass, cap_fraction,
                    indicator_density, power_pair_density, wolff_potential, wolff_profile)
