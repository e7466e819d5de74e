"""Expected Shortfall on finitely supported laws, with exact checks of its
convexity, concavity under mixtures, and the diversification inequality."""

from .coupling import (
    JointScenarios,
    comonotone_coupling,
    convexity_gap,
    diversification_gap,
    marginal,
    portfolio,
    product_coupling,
)
from .distribution import (
    DiscreteDistribution,
    Weights,
    cdf,
    essinf,
    expectation,
    from_samples,
    lower_quantile,
    make_discrete,
    mix,
    point_mass,
    prob_lt,
    upper_quantile,
)
from .errors import RiskMixError
from .es import EsValue, es, es_curve, es_integral, es_tail
from .harness import GenConfig, SuiteReport, gen_instance, run_suite
from .lemma import GapReport, LemmaReport, concavity_gap, lemma_alphas, lemma_decomposition
from .oracle import es_minimization
from .spectral import SpectralMeasure, make_spectral, spectral_concavity_gap, spectral_value

__version__ = "0.1.0"
