"""Bayesian survival analysis of batting careers.

Scores are modelled through a dismissal hazard whose effective average rises
from mu1 to mu2 through a smooth change point; inference is by
Metropolis-Hastings, model comparison by annealed importance sampling
against a constant-hazard alternative.
"""

from .backend import BACKEND
from .bayes import (
    ModelKind,
    log_likelihood,
    log_posterior_unnorm,
    log_prior_constant,
    log_prior_varying,
    sample_prior,
    sample_prior_many,
)
from .career import (
    Career,
    CareerParseError,
    Innings,
    load_career,
    parse_career,
    render_career,
    split_completed,
    summary_stats,
)
from .evidence import (
    AisConfig,
    EvidenceEstimate,
    ais_log_evidence,
    log_bayes_factor,
    quadrature_log_evidence_constant,
)
from .hazard import (
    ConstantParams,
    HazardParams,
    effective_average,
    hazard,
    log_pmf,
    log_survival,
    sample_score,
    sample_scores,
    truncation_point,
)
from .mcmc import (
    ChainConfig,
    PosteriorSamples,
    PosteriorSummary,
    effective_sample_size,
    load_samples,
    probability_query,
    run_chain,
    save_samples,
    summarize,
)
from .predictive import (
    PredictiveDistribution,
    predictive_effective_average,
    predictive_hazard,
    predictive_pmf,
)

__version__ = "0.1.0"
