"""Run a bank of sequential model evaluators over one observation stream.

Each evaluator scores every observation under its model's current
predictive, then absorbs the observation.  The engine records per-step
increments, cumulative scores (summed in step order) and the running
argmin selection.  Smaller cumulative score is better; ties are reported
explicitly rather than broken arbitrarily.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conjugate import (
    NegBinBetaState,
    PoissonGammaState,
    negbin_prequential_step,
    poisson_prequential_step,
)
from .scoring import RuleParams, ScoreDomainError, _check_count

__all__ = ["TIE", "ModelEvaluator", "PrequentialTrace", "run_prequential", "select_model"]

# Reported when the minimum cumulative score is attained by more than one
# model with exact floating-point equality.  Not a valid model identifier.
TIE = "tie"

ConjugateState = PoissonGammaState | NegBinBetaState


@dataclass(frozen=True)
class ModelEvaluator:
    """A named sequential model with its scoring rule."""

    identifier: str
    state: ConjugateState
    rule: RuleParams = RuleParams()

    def __post_init__(self) -> None:
        if not self.identifier or self.identifier == TIE:
            raise ValueError(f"invalid model identifier {self.identifier!r}")


def _advance(state: ConjugateState, x: int, rule: RuleParams) -> tuple[float, ConjugateState]:
    if isinstance(state, PoissonGammaState):
        return poisson_prequential_step(state, x, rule)
    if isinstance(state, NegBinBetaState):
        return negbin_prequential_step(state, x, rule)
    raise TypeError(f"unsupported evaluator state {type(state).__name__}")


@dataclass(frozen=True)
class PrequentialTrace:
    """Per-step increments and cumulative scores for a bank of models.

    cumulative[i, j] is the sum of increments[:i+1, j] in step order, and
    selected[i] is the identifier with the smallest cumulative score after
    step i, or "tie" on exact equality.  Arrays are read-only.
    """

    identifiers: tuple[str, ...]
    increments: np.ndarray
    cumulative: np.ndarray
    selected: tuple[str, ...]

    @property
    def n_steps(self) -> int:
        return self.increments.shape[0]

    def column(self, identifier: str) -> int:
        try:
            return self.identifiers.index(identifier)
        except ValueError:
            raise KeyError(f"no model {identifier!r} in trace {self.identifiers}") from None

    def final_score(self, identifier: str) -> float:
        return float(self.cumulative[-1, self.column(identifier)])

    def difference(self, wrong: str, right: str) -> np.ndarray:
        """Cumulative score excess of `wrong` over `right` at every step.

        Positive values favour `right`.
        """
        return self.cumulative[:, self.column(wrong)] - self.cumulative[:, self.column(right)]


def _select(row: np.ndarray, identifiers: tuple[str, ...]) -> str:
    best = row.min()
    hits = [identifiers[j] for j in range(len(identifiers)) if row[j] == best]
    return hits[0] if len(hits) == 1 else TIE


def run_prequential(observations, bank: list[ModelEvaluator]) -> PrequentialTrace:
    """Score a stream of counts under every evaluator in the bank.

    All evaluators must share the same rule parameters (scores are only
    comparable under a common rule) and carry distinct identifiers.
    Scoring failures abort the run with the step index and model
    identifier attached; partial traces are not produced.
    """
    obs = [_check_count(x, "observation") for x in observations]
    if not obs:
        raise ValueError("observations must be non-empty")
    if not bank:
        raise ValueError("bank must contain at least one evaluator")
    identifiers = tuple(e.identifier for e in bank)
    if len(set(identifiers)) != len(identifiers):
        raise ValueError(f"model identifiers must be distinct, got {identifiers}")
    rule = bank[0].rule
    if any(e.rule != rule for e in bank):
        raise ValueError("all evaluators in a bank must share the same rule parameters")

    increments = np.empty((len(obs), len(bank)), dtype=np.float64)
    states = [e.state for e in bank]
    for i, x in enumerate(obs):
        for j, evaluator in enumerate(bank):
            try:
                increments[i, j], states[j] = _advance(states[j], x, rule)
            except ScoreDomainError as err:
                raise ScoreDomainError(
                    f"model {evaluator.identifier!r} failed at step {i} (x={x}): {err}"
                ) from err

    cumulative = np.cumsum(increments, axis=0)
    selected = tuple(_select(cumulative[i], identifiers) for i in range(len(obs)))
    increments.flags.writeable = False
    cumulative.flags.writeable = False
    return PrequentialTrace(identifiers, increments, cumulative, selected)


def select_model(trace: PrequentialTrace, at_step: int) -> str:
    """Identifier with the smallest cumulative score after at_step, or "tie"."""
    if isinstance(at_step, bool) or not isinstance(at_step, int):
        raise TypeError(f"at_step must be an integer, got {at_step!r}")
    if not 0 <= at_step < trace.n_steps:
        raise IndexError(f"step {at_step} outside trace of length {trace.n_steps}")
    return trace.selected[at_step]
