"""Uselessness certification and query lower bounds.

Classical verdicts are exact: the checker enumerates query events in
rational arithmetic and compares posteriors with the prior by equality.
Quantum verdicts from sampling are one-sided: a deviation is a proof that
queries leak information, while the absence of one across random trials is
evidence only. The proof route for quantum uselessness is the classical
certificate: if 2q classical queries are useless, q quantum queries are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Sequence

from .algebra import max_abs
from .errors import CapacityError
from .problems import LearningProblem, posterior_classical
from .qsim import (
    QuantumAlgorithm,
    final_states,
    outcome_posteriors,
    random_algorithm,
    trial_seeds,
)

# Ceiling on (number of enumerated events) * (class size) for exact checks.
DEFAULT_MAX_EVENTS = 10**7

# Hilbert-space ceiling for simulation-backed checks.
DEFAULT_MAX_DIM = 200

# A sampled posterior deviation above this is reported as a violation.
FALSIFY_TOL = 1e-8

VERDICT_USELESS = "useless"
VERDICT_NOT_USELESS = "not_useless"
VERDICT_VACUOUS = "vacuous"


@dataclass
class UselessnessReport:
    """Outcome of one uselessness check, with enough detail to replay it."""

    problem: str
    mode: str  # "classical" or "quantum"
    k: int  # queries tested (classical) or simulated oracle calls (quantum)
    verdict: str
    evidence: str  # "exact-enumeration" or "sampled-algorithms"
    witness: dict | None = None
    max_deviation: float | None = None
    trials: int | None = None
    detail: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "problem": self.problem,
            "mode": self.mode,
            "k": self.k,
            "verdict": self.verdict,
            "evidence": self.evidence,
            "witness": self.witness,
            "max_deviation": self.max_deviation,
            "trials": self.trials,
            "detail": self.detail,
        }

    def csv_row(self) -> list[str]:
        witness = ""
        if self.witness is not None:
            if "transcript" in self.witness:
                witness = ";".join(f"{x}:{y}" for x, y in self.witness["transcript"])
            else:
                witness = ";".join(f"{k}={v}" for k, v in sorted(self.witness.items()))
        deviation = "" if self.max_deviation is None else repr(self.max_deviation)
        return [self.problem, str(self.k), self.verdict, deviation, witness]


CSV_HEADER = ["problem", "k", "verdict", "deviation", "witness"]


def _canonical_event_count(problem: LearningProblem, k: int) -> int:
    pairs = problem.domain_size * problem.group.order
    return math.comb(pairs + k - 1, k) if k > 0 else 1


def classical_useless(
    problem: LearningProblem, k: int, max_events: int = DEFAULT_MAX_EVENTS
) -> UselessnessReport:
    """Decide by exact enumeration whether k classical queries are useless.

    The event generated by a transcript depends only on its set of
    (point, response) constraints, so the scan runs over non-decreasing
    pair tuples: each is the lexicographically least transcript producing
    its event, and every length-k transcript reduces to exactly one of
    them. Zero-probability events (a repeated point with two different
    responses, or constraints no class member satisfies) condition on
    nothing and are skipped.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    cost = _canonical_event_count(problem, k) * problem.size
    if cost > max_events:
        raise CapacityError(
            f"classical check needs {cost} event evaluations, over the ceiling "
            f"max_events={max_events}"
        )
    prior = problem.part_prior()
    part_order = problem.part_labels()
    pairs = [
        (x, y) for x in range(problem.domain_size) for y in range(problem.group.order)
    ]
    saw_event = False
    for transcript in combinations_with_replacement(pairs, k):
        posterior = posterior_classical(problem, transcript)
        if posterior is None:
            continue
        saw_event = True
        for j in part_order:
            if posterior[j] != prior[j]:
                witness = {
                    "transcript": [[x, y] for x, y in transcript],
                    "part": j,
                    "posterior": [posterior[j].numerator, posterior[j].denominator],
                    "prior": [prior[j].numerator, prior[j].denominator],
                }
                return UselessnessReport(
                    problem=problem.name,
                    mode="classical",
                    k=k,
                    verdict=VERDICT_NOT_USELESS,
                    evidence="exact-enumeration",
                    witness=witness,
                )
    return UselessnessReport(
        problem=problem.name,
        mode="classical",
        k=k,
        verdict=VERDICT_USELESS if saw_event else VERDICT_VACUOUS,
        evidence="exact-enumeration",
    )


def max_useless_k(problem: LearningProblem, max_events: int = DEFAULT_MAX_EVENTS) -> int:
    """Largest k for which k classical queries are useless.

    Uselessness is downward monotone (pad a shorter transcript by
    repeating its first query), so a single upward scan suffices. Events
    never constrain more than |X| points, so a clean check at k = |X|
    settles every larger k as well; the return value |X| means all query
    counts are useless.
    """
    k = 0
    while k < problem.domain_size:
        report = classical_useless(problem, k + 1, max_events=max_events)
        if report.verdict == VERDICT_NOT_USELESS:
            return k
        k += 1
    return k


def quantum_lower_bound(problem: LearningProblem, max_events: int = DEFAULT_MAX_EVENTS) -> int:
    """Lower bound on the quantum query complexity from the classical scan.

    With m classical queries useless, floor(m/2) quantum queries are also
    useless, so floor(m/2) + 1 quantum queries are necessary.
    """
    return max_useless_k(problem, max_events=max_events) // 2 + 1


def lemma_check(problem: LearningProblem, alg: QuantumAlgorithm) -> float:
    """Deviation of the part-averaged final states from the prior mixture.

    For every part j, compares sum_{f in part j} mu(f) rho_f against
    mu(part j) * sum_f mu(f) rho_f and returns the largest entrywise
    absolute difference. The identity holds exactly whenever twice the
    algorithm's query count is classically useless.
    """
    states = final_states(alg, problem)
    weights = [float(w) for w in problem.prior]
    mixture = sum(w * rho for w, rho in zip(weights, states))
    prior = problem.part_prior()
    deviation = 0.0
    for j, indices in problem.parts().items():
        lhs = sum(weights[i] * states[i] for i in indices)
        rhs = float(prior[j]) * mixture
        deviation = max(deviation, max_abs(lhs - rhs))
    return deviation


def quantum_useless_falsify(
    problem: LearningProblem,
    queries: int,
    trials: int,
    seed: int,
    tol: float = FALSIFY_TOL,
    z_dim: int = 1,
    extra_algorithms: Sequence[QuantumAlgorithm] = (),
    max_dim: int = DEFAULT_MAX_DIM,
) -> UselessnessReport:
    """Search for posterior-vs-prior deviations over random algorithms.

    Runs ``trials`` seeded random ``queries``-call algorithms (plus any
    ``extra_algorithms``, which occupy the first trial slots) and records
    the largest |posterior - prior| over observable outcomes and parts.
    A deviation above ``tol`` yields a "not useless" verdict with a witness
    naming the trial; anything else is "useless" backed by sampling only,
    which is evidence, not proof.
    """
    if queries < 1:
        raise ValueError(f"queries must be >= 1, got {queries}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    dim = problem.domain_size * problem.group.order * z_dim
    if dim > max_dim:
        raise CapacityError(f"Hilbert dimension {dim} exceeds the ceiling max_dim={max_dim}")
    prior = {j: float(w) for j, w in problem.part_prior().items()}
    algorithms: list[tuple[str, QuantumAlgorithm]] = [
        (f"extra-{i}", alg) for i, alg in enumerate(extra_algorithms)
    ]
    for child_seed in trial_seeds(seed, trials):
        algorithms.append(
            (
                f"seed-{child_seed}",
                random_algorithm(problem.domain_size, problem.group, z_dim, queries, child_seed),
            )
        )
    max_deviation = 0.0
    argmax: dict | None = None
    observed_any = False
    for trial, (tag, alg) in enumerate(algorithms):
        outcome_probs, posteriors = outcome_posteriors(alg, problem)
        for s, posterior in enumerate(posteriors):
            if posterior is None:
                continue
            observed_any = True
            for j, p in posterior.items():
                deviation = abs(p - prior[j])
                if deviation > max_deviation:
                    max_deviation = deviation
                    argmax = {
                        "trial": trial,
                        "algorithm": tag,
                        "outcome": s,
                        "outcome_probability": float(outcome_probs[s]),
                        "part": j,
                        "posterior": p,
                        "prior": prior[j],
                    }
    if not observed_any:
        verdict = VERDICT_VACUOUS
    elif max_deviation > tol:
        verdict = VERDICT_NOT_USELESS
    else:
        verdict = VERDICT_USELESS
    return UselessnessReport(
        problem=problem.name,
        mode="quantum",
        k=queries,
        verdict=verdict,
        evidence="sampled-algorithms",
        witness=argmax if verdict == VERDICT_NOT_USELESS else None,
        max_deviation=max_deviation,
        trials=len(algorithms),
        detail={"tol": tol, "seed": seed, "z_dim": z_dim, "best": argmax},
    )
