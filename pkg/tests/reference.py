"""Independent brute-force implementations used as test oracles.

Everything here favors the most literal possible computation over speed:
full transcript enumeration, explicit subset sums, direct character sums.
These must stay independent of the library code paths they check.
"""

from fractions import Fraction
from itertools import product


def naive_posterior(problem, transcript):
    """Condition on the transcript by filtering the class, no dedup tricks."""
    weights = {j: Fraction(0) for j in sorted(set(problem.labels))}
    total = Fraction(0)
    for f, j, w in zip(problem.functions, problem.labels, problem.prior):
        if all(f[x] == y for x, y in transcript):
            weights[j] += w
            total += w
    if total == 0:
        return None
    return {j: w / total for j, w in weights.items()}


def naive_classical_useless(problem, k):
    """Scan every raw transcript (x_1..x_k, y_1..y_k); returns (bool, witness)."""
    prior = {j: Fraction(0) for j in sorted(set(problem.labels))}
    for j, w in zip(problem.labels, problem.prior):
        prior[j] += w
    points = range(problem.domain_size)
    responses = range(problem.group.order)
    for xs in product(points, repeat=k):
        for ys in product(responses, repeat=k):
            transcript = list(zip(xs, ys))
            posterior = naive_posterior(problem, transcript)
            if posterior is None:
                continue
            for j in prior:
                if posterior[j] != prior[j]:
                    return False, transcript
    return True, None


def brute_interp_coeffs(values):
    """Multilinear coefficients by the explicit inclusion-exclusion sum."""
    n = (len(values) - 1).bit_length()
    assert len(values) == 1 << n
    coeffs = []
    for s_mask in range(1 << n):
        total = 0.0
        for t_mask in range(1 << n):
            if t_mask & ~s_mask:
                continue
            sign = (-1) ** (bin(s_mask).count("1") - bin(t_mask).count("1"))
            total += sign * values[t_mask]
        coeffs.append(total)
    return coeffs


def brute_eval_01(coeffs, point):
    """Evaluate subset coefficients at a 0/1 point."""
    total = 0.0
    for mask, c in enumerate(coeffs):
        term = c
        for i in range(len(point)):
            if mask >> i & 1:
                term *= point[i]
        total += term
    return total


def naive_character_coeffs(q_values):
    """q-hat(S) = 2^-n sum_w q(w) w_S by direct summation, w = 2f - 1."""
    n = (len(q_values) - 1).bit_length()
    assert len(q_values) == 1 << n
    out = []
    for s_mask in range(1 << n):
        total = 0.0
        for f_mask in range(1 << n):
            w_s = 1
            for i in range(n):
                if s_mask >> i & 1:
                    w_s *= 2 * (f_mask >> i & 1) - 1
            total += q_values[f_mask] * w_s
        out.append(total / (1 << n))
    return out


def poly_eval_mod(coeffs, x, p):
    return sum(a * pow(x, i, p) for i, a in enumerate(coeffs)) % p


def shamir_consistent_polys(p, k, shares):
    """All coefficient tuples of degree <= k passing through the shares."""
    return [
        coeffs
        for coeffs in product(range(p), repeat=k + 1)
        if all(poly_eval_mod(coeffs, x, p) == y for x, y in shares)
    ]
