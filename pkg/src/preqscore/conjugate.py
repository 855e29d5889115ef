"""Conjugate predictive machinery for Poisson and Negative Binomial models.

Gamma mixing for the Poisson and Beta mixing for the Negative Binomial
yield predictive distributions whose successive-probability ratios are
simple rational functions of the hyperparameters:

    Poisson  (exposure k, Gamma(alpha, beta)):
        r(x) = phi * (x + alpha) / (x + 1),    phi = k / (beta + k)
    NegBin   (size s, Beta(p, q)):
        r(x) = (x + s)(x + p) / ((x + 1)(x + p + q + s))

Posterior updating after a history with running total t over n
observations shifts the hyperparameters (alpha -> alpha + t,
beta -> beta + n k; p -> p + t, q -> q + n s), so the per-step score
increments share one closed form across proper priors, the usual improper
limits (both hyperparameters 0) and the Jeffreys-type priors, which are
reached by substituting hyperparameter values rather than through
separate formulas.  State updates are exact integer arithmetic on (t, n);
only score evaluation touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .scoring import PredictiveRatio, RuleParams, ScoreDomainError, _check_count

__all__ = [
    "NegBinBetaState",
    "PoissonGammaState",
    "PriorSpec",
    "negbin_predictive_ratio",
    "negbin_prequential_step",
    "negbin_sufficient_score",
    "poisson_predictive_ratio",
    "poisson_prequential_step",
    "poisson_sufficient_score",
]

PROPER = "proper"
USUAL_IMPROPER = "usual-improper"
JEFFREYS = "jeffreys"

# The Jeffreys-type priors used here, as (hyper1, hyper2): Gamma shape 1/2
# with rate 0 for the Poisson model, Beta(0, 1/2) for the Negative Binomial.
_JEFFREYS_PAIRS = ((0.5, 0.0), (0.0, 0.5))


@dataclass(frozen=True)
class PriorSpec:
    """Conjugate-prior hyperparameters, possibly an improper limit.

    hyper1/hyper2 are the Gamma shape/rate for the Poisson model and the
    two Beta parameters for the Negative Binomial one.  Proper priors
    require both strictly positive; the usual improper prior is the
    formal limit with both at 0.
    """

    kind: str
    hyper1: float
    hyper2: float

    def __post_init__(self) -> None:
        h1, h2 = self.hyper1, self.hyper2
        if not (math.isfinite(h1) and math.isfinite(h2)):
            raise ValueError(f"hyperparameters must be finite, got ({h1}, {h2})")
        if self.kind == PROPER:
            if h1 <= 0.0 or h2 <= 0.0:
                raise ValueError(f"a proper prior requires positive hyperparameters, got ({h1}, {h2})")
        elif self.kind == USUAL_IMPROPER:
            if h1 != 0.0 or h2 != 0.0:
                raise ValueError("the usual improper prior fixes both hyperparameters at 0")
        elif self.kind == JEFFREYS:
            if (h1, h2) not in _JEFFREYS_PAIRS:
                raise ValueError(
                    f"Jeffreys-type priors are (0.5, 0) for the Poisson model and "
                    f"(0, 0.5) for the Negative Binomial one, got ({h1}, {h2})"
                )
        else:
            raise ValueError(f"unknown prior kind {self.kind!r}")

    @classmethod
    def proper(cls, hyper1: float, hyper2: float) -> "PriorSpec":
        return cls(PROPER, float(hyper1), float(hyper2))

    @classmethod
    def usual_improper(cls) -> "PriorSpec":
        return cls(USUAL_IMPROPER, 0.0, 0.0)

    @classmethod
    def jeffreys_poisson(cls) -> "PriorSpec":
        return cls(JEFFREYS, 0.5, 0.0)

    @classmethod
    def jeffreys_negbin(cls) -> "PriorSpec":
        return cls(JEFFREYS, 0.0, 0.5)

    @property
    def is_proper(self) -> bool:
        return self.kind == PROPER


def _check_positive(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{what} must be a positive finite number, got {value}")
    return value


@dataclass(frozen=True)
class PoissonGammaState:
    """Sequential state of the Gamma-mixed Poisson model.

    k is the fixed, known exposure multiplier; t and n are the running
    total and the number of observations consumed so far.
    """

    k: float
    prior: PriorSpec
    t: int = 0
    n: int = 0

    def __post_init__(self) -> None:
        _check_positive(self.k, "exposure k")
        _check_count(self.t, "running total t")
        _check_count(self.n, "observation count n")


@dataclass(frozen=True)
class NegBinBetaState:
    """Sequential state of the Beta-mixed Negative Binomial model.

    s is the fixed, known size parameter; t and n as for the Poisson state.
    """

    s: float
    prior: PriorSpec
    t: int = 0
    n: int = 0

    def __post_init__(self) -> None:
        _check_positive(self.s, "size s")
        _check_count(self.t, "running total t")
        _check_count(self.n, "observation count n")


def _pow(base: float, exp: float) -> float:
    """base**exp with 0**exp taken as its continuous limit for exp >= 0.

    Bases here are always non-negative.  A zero base with a negative
    exponent means the score diverges (only reachable with an improper
    prior and order m < 1), which is reported as a domain error.
    """
    if base == 0.0:
        if exp > 0.0:
            return 0.0
        if exp == 0.0:
            return 1.0
        raise ScoreDomainError(
            "score diverges: zero predictive mass enters with a negative exponent (m < 1)"
        )
    return base**exp


def _poisson_point_score(x: int, shape: float, phi: float, rule: RuleParams) -> float:
    """Closed-form point score of a Gamma-mixed Poisson predictive.

    The predictive has ratio r(x) = phi (x + shape) / (x + 1); plugging it
    into the general point score gives, for x = 0, (phi * shape)^m / m and,
    for x > 0,

        (x+1)^(a-m) phi^m (x+shape)^m / m
            - x^(a-m+1) phi^(m-1) (x+shape-1)^(m-1) / (m-1).
    """
    m, a = rule.m, rule.a
    if x == 0:
        return _pow(phi * shape, m) / m
    first = _pow(x + 1.0, a - m) * _pow(phi, m) * _pow(x + shape, m) / m
    second = (
        _pow(float(x), a - m + 1.0)
        * _pow(phi, m - 1.0)
        * _pow(x + shape - 1.0, m - 1.0)
        / (m - 1.0)
    )
    return first - second


def _negbin_point_score(x: int, size: float, p_eff: float, q_eff: float, rule: RuleParams) -> float:
    """Closed-form point score of a Beta-mixed Negative Binomial predictive.

    The predictive has ratio r(x) = (x+size)(x+p) / ((x+1)(x+p+q+size));
    the point score is, for x = 0, (size * p)^m (p+q+size)^(-m) / m and,
    for x > 0, with d = x + p + q + size,

        (x+1)^(a-m) ((x+size)(x+p))^m d^(-m) / m
            - x^(a-m+1) ((x+size-1)(x+p-1))^(m-1) (d-1)^(-(m-1)) / (m-1).
    """
    m, a = rule.m, rule.a
    if x == 0:
        return _pow(size * p_eff, m) * _pow(p_eff + q_eff + size, -m) / m
    d = x + p_eff + q_eff + size
    first = _pow(x + 1.0, a - m) * _pow((x + size) * (x + p_eff), m) * _pow(d, -m) / m
    second = (
        _pow(float(x), a - m + 1.0)
        * _pow((x + size - 1.0) * (x + p_eff - 1.0), m - 1.0)
        * _pow(d - 1.0, -(m - 1.0))
        / (m - 1.0)
    )
    return first - second


def poisson_predictive_ratio(state: PoissonGammaState) -> PredictiveRatio:
    """Successive-probability ratio of the next-observation predictive.

    r(x) = phi * (x + alpha + t) / (x + 1) with phi = k / (beta + n k + k).
    Under the usual improper prior with no history, r(0) = 0: the formal
    predictive puts all relative mass at 0.
    """
    shape = state.prior.hyper1 + state.t
    phi = state.k / (state.prior.hyper2 + state.n * state.k + state.k)

    def ratio(x: int) -> float:
        _check_count(x)
        return phi * (x + shape) / (x + 1.0)

    return ratio


def negbin_predictive_ratio(state: NegBinBetaState) -> PredictiveRatio:
    """r(x) = (x + s)(x + p + t) / ((x + 1)(x + p + q + t + n s + s))."""
    p_eff = state.prior.hyper1 + state.t
    q_eff = state.prior.hyper2 + state.n * state.s
    s = state.s

    def ratio(x: int) -> float:
        _check_count(x)
        return (x + s) * (x + p_eff) / ((x + 1.0) * (x + p_eff + q_eff + s))

    return ratio


def poisson_prequential_step(
    state: PoissonGammaState, x: int, rule: RuleParams
) -> tuple[float, PoissonGammaState]:
    """Score the next observation under the Poisson model and update state.

    The increment equals score_point(x, poisson_predictive_ratio(state))
    wherever the ratio path is defined; the closed form additionally
    covers improper-prior states whose predictive puts zero relative mass
    below the observation (for m > 1 the offending terms vanish in the
    limit, keeping the cumulative score well-defined from the first step).
    """
    _check_count(x)
    shape = state.prior.hyper1 + state.t
    phi = state.k / (state.prior.hyper2 + state.n * state.k + state.k)
    increment = _poisson_point_score(x, shape, phi, rule)
    return increment, replace(state, t=state.t + x, n=state.n + 1)


def negbin_prequential_step(
    state: NegBinBetaState, x: int, rule: RuleParams
) -> tuple[float, NegBinBetaState]:
    """Negative Binomial analogue of poisson_prequential_step."""
    _check_count(x)
    p_eff = state.prior.hyper1 + state.t
    q_eff = state.prior.hyper2 + state.n * state.s
    increment = _negbin_point_score(x, state.s, p_eff, q_eff, rule)
    return increment, replace(state, t=state.t + x, n=state.n + 1)


def poisson_sufficient_score(
    t_total: int, n_obs: int, k: float, prior: PriorSpec, rule: RuleParams
) -> float:
    """Score the sufficient statistic t_total of n_obs observations.

    The sum of n_obs observations is Poisson with exposure n_obs * k, so
    the single-observation closed form applies with
    phi = n_obs k / (beta + n_obs k).  Under the usual improper prior the
    score at t_total = 0 is exactly 0.
    """
    _check_count(t_total, "t_total")
    if isinstance(n_obs, bool) or not isinstance(n_obs, int) or n_obs < 1:
        raise ValueError(f"n_obs must be a positive integer, got {n_obs!r}")
    _check_positive(k, "exposure k")
    pooled = n_obs * k
    phi = pooled / (prior.hyper2 + pooled)
    return _poisson_point_score(t_total, prior.hyper1, phi, rule)


def negbin_sufficient_score(
    t_total: int, n_obs: int, s: float, prior: PriorSpec, rule: RuleParams
) -> float:
    """Negative Binomial analogue of poisson_sufficient_score.

    The sum of n_obs observations is Negative Binomial with size n_obs * s.
    Under the usual improper prior both sufficient-statistic scores reduce
    to the same function of t_total (the two predictive ratios collapse to
    t/(t+1)), so this route cannot separate the models in that case.
    """
    _check_count(t_total, "t_total")
    if isinstance(n_obs, bool) or not isinstance(n_obs, int) or n_obs < 1:
        raise ValueError(f"n_obs must be a positive integer, got {n_obs!r}")
    _check_positive(s, "size s")
    return _negbin_point_score(t_total, n_obs * s, prior.hyper1, prior.hyper2, rule)
