"""One-shot verification bundle: every headline claim at its tolerance.

Each criterion is a pure function of the seed returning a result row; the
bundle is a deterministic JSON payload plus a printable table. The CLI
`reproduce` subcommand wraps this module.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations
from typing import Callable

from .gallery import deutsch, pairwise_parity
from .polycompile import (
    acceptance_polynomial,
    classical_output_prob,
    compile_classical,
    corollary5_audit,
    to_fourier,
)
from .problems import make_image_parity, make_parity, make_shamir, shamir_reconstruct
from .qsim import random_algorithm, success_probability, trial_seeds
from .useless import (
    VERDICT_USELESS,
    classical_useless,
    lemma_check,
    max_useless_k,
    quantum_lower_bound,
    quantum_useless_falsify,
)

DEFAULT_SEED = 20100325
DEFAULT_TRIALS = 50
COMPILE_TRIALS = 20


def _row(cid: int, tag: str, claim: str, expected: str, observed: str, ok: bool) -> dict:
    return {
        "id": cid,
        "tag": tag,
        "claim": claim,
        "expected": expected,
        "observed": observed,
        "pass": bool(ok),
    }


def _parity_classical(seed: int) -> dict:
    observed = {}
    ok = True
    for n in (2, 3, 4, 5):
        m = max_useless_k(make_parity(n))
        observed[n] = m
        ok = ok and m == n - 1
    return _row(
        1,
        "parity-classical",
        "parity of N bits: exactly N-1 classical queries are useless",
        "max useless k = N-1 for N in 2..5",
        ", ".join(f"N={n}: {m}" for n, m in observed.items()),
        ok,
    )


def _parity_quantum(seed: int) -> dict:
    problem = make_parity(4)
    report = quantum_useless_falsify(problem, queries=1, trials=DEFAULT_TRIALS, seed=seed)
    lemma_max = max(
        lemma_check(problem, random_algorithm(4, problem.group, 1, 1, s))
        for s in trial_seeds(seed, DEFAULT_TRIALS)
    )
    ok = (
        report.verdict == VERDICT_USELESS
        and report.max_deviation < 1e-8
        and lemma_max < 1e-9
    )
    return _row(
        2,
        "parity-quantum",
        "parity of 4 bits: one quantum query shifts no posterior",
        "max |posterior - prior| < 1e-8 and state-mixture deviation < 1e-9 over 50 trials",
        f"posterior dev {report.max_deviation:.3e}, mixture dev {lemma_max:.3e}",
        ok,
    )


def _parity_upper(seed: int) -> dict:
    observed = []
    ok = True
    for n in (2, 4, 6):
        alg = pairwise_parity(n)
        s = success_probability(alg, make_parity(n))
        observed.append(f"N={n}: {s:.12f} in {alg.query_count} queries")
        ok = ok and abs(s - 1.0) <= 1e-9 and alg.query_count == n // 2
    s_deutsch = success_probability(deutsch(), make_parity(2))
    observed.append(f"deutsch: {s_deutsch:.12f}")
    ok = ok and abs(s_deutsch - 1.0) <= 1e-9
    return _row(
        3,
        "parity-upper",
        "pairwise kickback solves parity exactly with N/2 queries",
        "success probability 1 +/- 1e-9 on N in {2,4,6}",
        "; ".join(observed),
        ok,
    )


def _parity_barrier(seed: int) -> dict:
    problem = make_parity(4)
    worst = 0.0
    for s in trial_seeds(seed, DEFAULT_TRIALS):
        alg = random_algorithm(4, problem.group, 1, 1, s, labels_cycle=(0, 1))
        worst = max(worst, abs(success_probability(alg, problem) - 0.5))
    return _row(
        4,
        "parity-barrier",
        "parity of 4 bits: every 1-query algorithm succeeds with probability 1/2",
        "|success - 1/2| < 1e-8 over 50 random algorithms",
        f"max |success - 1/2| = {worst:.3e}",
        worst < 1e-8,
    )


def _image_parity(seed: int) -> dict:
    problem = make_image_parity()
    prior_even = problem.part_prior()[0]
    classical = classical_useless(problem, 2)
    falsify = quantum_useless_falsify(problem, queries=1, trials=DEFAULT_TRIALS, seed=seed)
    ok = (
        prior_even == Fraction(2, 3)
        and classical.verdict == VERDICT_USELESS
        and falsify.verdict == VERDICT_USELESS
        and falsify.max_deviation < 1e-8
    )
    return _row(
        5,
        "image-parity",
        "image-size parity over ternary tables: prior 2/3, two classical "
        "queries useless, one quantum query useless",
        "prior exactly 2/3; k=2 useless; quantum dev < 1e-8 over 50 trials",
        f"prior {prior_even}, k=2 {classical.verdict}, quantum dev {falsify.max_deviation:.3e}",
        ok,
    )


def _shamir(seed: int) -> dict:
    observed = []
    ok = True
    for p, k in ((3, 1), (5, 1), (5, 2)):
        problem = make_shamir(p, k)
        m = max_useless_k(problem)
        bound = quantum_lower_bound(problem)
        recon_ok = True
        points = range(1, p)
        for coeffs_index, f in enumerate(problem.functions):
            secret = problem.labels[coeffs_index]
            for xs in combinations(points, k + 1):
                shares = [(x, f[x - 1]) for x in xs]
                if shamir_reconstruct(p, k, shares) != secret:
                    recon_ok = False
        observed.append(f"(p={p},k={k}): max useless {m}, bound {bound}, recon {recon_ok}")
        ok = ok and m == k and bound == k // 2 + 1 and recon_ok
    return _row(
        6,
        "shamir",
        "threshold sharing by polynomials: k queries useless, k+1 shares "
        "recover the secret, quantum bound floor(k/2)+1",
        "max useless = k; all share sets reconstruct; bound = floor(k/2)+1",
        "; ".join(observed),
        ok,
    )


def _compile_algorithms(seed: int):
    """The shared pool of random 1-query Boolean-oracle algorithms."""
    pool = []
    for n in (2, 3):
        group = make_parity(n).group
        for s in trial_seeds(seed + n, COMPILE_TRIALS):
            pool.append((n, random_algorithm(n, group, 1, 1, s)))
    return pool


def _accept_set(alg) -> list[int]:
    return [s for s in range(alg.n_outcomes) if s % 2 == 0]


def _degree_bound(seed: int) -> dict:
    worst = 0.0
    for n, alg in _compile_algorithms(seed):
        qhat = to_fourier(acceptance_polynomial(alg, _accept_set(alg)))
        for mask in range(1 << n):
            if bin(mask).count("1") > 2:
                worst = max(worst, abs(qhat.coeffs[mask]))
    return _row(
        7,
        "degree-bound",
        "1-query acceptance polynomials have degree at most 2",
        "every character coefficient on |S| > 2 below 1e-8",
        f"max stray coefficient {worst:.3e}",
        worst < 1e-8,
    )


def _bias_identity(seed: int) -> dict:
    worst_bias = 0.0
    worst_norm = 0.0
    max_subset = 0
    for n, alg in _compile_algorithms(seed):
        accept = _accept_set(alg)
        poly = acceptance_polynomial(alg, accept)
        compiled = compile_classical(alg, accept)
        values = poly.values_on_cube()
        if not compiled.degenerate:
            worst_norm = max(
                worst_norm, abs(sum(t[1] for t in compiled.terms) - 1.0)
            )
            max_subset = max(max_subset, compiled.max_queries)
        for mask in range(1 << n):
            bits = [mask >> i & 1 for i in range(n)]
            got = classical_output_prob(compiled, bits)
            if compiled.degenerate:
                expected = 0.5
            else:
                expected = (values[mask] - 0.5) / compiled.scale + 0.5
            worst_bias = max(worst_bias, abs(got - expected))
    ok = worst_bias < 1e-9 and worst_norm < 1e-10 and max_subset <= 2
    return _row(
        8,
        "bias-identity",
        "compiled samplers scale the acceptance bias by exactly 1/T",
        "identity within 1e-9 on every table; probabilities sum to 1 within "
        "1e-10; subsets of size <= 2",
        f"bias residual {worst_bias:.3e}, norm residual {worst_norm:.3e}, "
        f"largest subset {max_subset}",
        ok,
    )


def _ratio_audit(seed: int) -> dict:
    problem = make_parity(4)
    worst = 0.0
    for s in trial_seeds(seed, COMPILE_TRIALS):
        alg = random_algorithm(4, problem.group, 1, 1, s)
        report = corollary5_audit(problem, alg, _accept_set(alg), check_classical=False)
        if report.defined:
            worst = max(worst, report.deviation)
    deutsch_report = corollary5_audit(make_parity(2), deutsch(), [0])
    ok = (
        worst < 1e-8
        and not deutsch_report.identity_holds
        and deutsch_report.classical_useless_2k is False
    )
    return _row(
        9,
        "ratio-audit",
        "accept-mass ratio equals the part prior when twice the query count "
        "is classically useless, and is violated otherwise",
        "parity-4 ratio within 1e-8 of 1/2 over 20 algorithms; parity-2 with "
        "the one-query solver violates",
        f"parity-4 max deviation {worst:.3e}; parity-2 lhs "
        f"{deutsch_report.lhs:.3f} vs rhs {deutsch_report.rhs:.3f}",
        ok,
    )


def _determinism(seed: int) -> dict:
    def digest() -> str:
        rows = [
            _parity_classical(seed),
            _parity_quantum(seed),
            _ratio_audit(seed),
        ]
        return json.dumps(rows, sort_keys=True)

    first, second = digest(), digest()
    return _row(
        10,
        "determinism",
        "identical seed and configuration give identical reports",
        "two in-process repeats serialize byte-identically",
        "identical" if first == second else "divergent",
        first == second,
    )


CRITERIA: list[tuple[int, str, Callable[[int], dict]]] = [
    (1, "parity-classical", _parity_classical),
    (2, "parity-quantum", _parity_quantum),
    (3, "parity-upper", _parity_upper),
    (4, "parity-barrier", _parity_barrier),
    (5, "image-parity", _image_parity),
    (6, "shamir", _shamir),
    (7, "degree-bound", _degree_bound),
    (8, "bias-identity", _bias_identity),
    (9, "ratio-audit", _ratio_audit),
    (10, "determinism", _determinism),
]


def run_all(seed: int = DEFAULT_SEED, only: str | None = None) -> dict:
    """Run the criteria (optionally filtered by tag substring) and bundle rows."""
    rows = []
    for cid, tag, criterion in CRITERIA:
        if only and only not in tag and only != str(cid):
            continue
        rows.append(criterion(seed))
    return {
        "seed": seed,
        "only": only,
        "criteria": rows,
        "all_pass": all(r["pass"] for r in rows),
    }


def format_table(payload: dict) -> str:
    lines = [f"{'id':>3}  {'status':6}  claim / observed"]
    for row in payload["criteria"]:
        status = "PASS" if row["pass"] else "FAIL"
        lines.append(f"{row['id']:>3}  {status:6}  {row['claim']}")
        lines.append(f"{'':3}  {'':6}  expected: {row['expected']}")
        lines.append(f"{'':3}  {'':6}  observed: {row['observed']}")
    lines.append(
        f"summary: {sum(r['pass'] for r in payload['criteria'])}"
        f"/{len(payload['criteria'])} criteria pass"
    )
    return "\n".join(lines)
