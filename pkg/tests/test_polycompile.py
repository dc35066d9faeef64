import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oraclelab.algebra import cyclic, random_pure_state
from oraclelab.errors import CapacityError
from oraclelab.gallery import deutsch
from oraclelab.polycompile import (
    CompiledClassicalAlgorithm,
    MultilinearPolynomial,
    acceptance_polynomial,
    classical_output_prob,
    compile_classical,
    compiled_from_json,
    compiled_to_json,
    corollary5_audit,
    from_fourier,
    interpolate_on_cube,
    to_fourier,
    walsh_hadamard,
)
from oraclelab.problems import make_parity
from oraclelab.qsim import QuantumAlgorithm, random_algorithm, run, trial_seeds

from reference import brute_eval_01, brute_interp_coeffs, naive_character_coeffs


def _always_accept(n):
    """Zero-query algorithm accepting on its single outcome."""
    dim = 2 * n
    return QuantumAlgorithm(
        n, cyclic(2), 1, random_pure_state(dim, 0), (), (np.eye(dim, dtype=complex),)
    )


def _sample_pool(seed, count=20):
    pool = []
    for n in (2, 3):
        for s in trial_seeds(seed + n, count):
            pool.append((n, random_algorithm(n, cyclic(2), 1, 1, s)))
    return pool


def _accept_evens(alg):
    return [s for s in range(alg.n_outcomes) if s % 2 == 0]


def test_interpolation_matches_brute_force():
    rng = np.random.default_rng(5)
    for n in (1, 2, 3, 4):
        values = rng.uniform(0, 1, size=1 << n)
        poly = interpolate_on_cube(values)
        expected = brute_interp_coeffs(values)
        assert np.allclose(poly.coeffs, expected, atol=1e-12)
        for mask in range(1 << n):
            point = [mask >> i & 1 for i in range(n)]
            assert poly.evaluate(point) == pytest.approx(values[mask], abs=1e-10)
        assert np.allclose(poly.values_on_cube(), values, atol=1e-10)


@given(st.lists(st.floats(min_value=-2, max_value=2), min_size=4, max_size=4))
@settings(max_examples=50, deadline=None)
def test_interpolation_round_trip_property(values):
    poly = interpolate_on_cube(values)
    for mask in range(4):
        point = [mask & 1, mask >> 1 & 1]
        assert abs(poly.evaluate(point) - values[mask]) < 1e-9
        assert abs(brute_eval_01(list(poly.coeffs), point) - values[mask]) < 1e-9


def test_walsh_hadamard_against_direct_sum():
    rng = np.random.default_rng(11)
    for n in (1, 2, 3):
        v = rng.uniform(-1, 1, size=1 << n)
        fast = walsh_hadamard(v)
        for s_mask in range(1 << n):
            direct = sum(
                (-1) ** bin(s_mask & f_mask).count("1") * v[f_mask]
                for f_mask in range(1 << n)
            )
            assert fast[s_mask] == pytest.approx(direct, abs=1e-12)


def test_acceptance_polynomial_always_accept():
    poly = acceptance_polynomial(_always_accept(2), [0])
    assert np.allclose(poly.coeffs, [1, 0, 0, 0], atol=1e-12)


def test_acceptance_polynomial_deutsch():
    poly = acceptance_polynomial(deutsch(), [0])
    assert np.allclose(poly.coeffs, [1, -1, -1, 2], atol=1e-10)


def test_acceptance_polynomial_requires_binary_group():
    alg = random_algorithm(2, cyclic(3), 1, 1, 0)
    with pytest.raises(ValueError):
        acceptance_polynomial(alg, [0])


def test_acceptance_polynomial_rejects_bad_outcomes():
    with pytest.raises(ValueError):
        acceptance_polynomial(deutsch(), [5])


def test_degree_bound_for_one_query_algorithms():
    for n, alg in _sample_pool(17):
        qhat = to_fourier(acceptance_polynomial(alg, _accept_evens(alg)))
        for mask in range(1 << n):
            if bin(mask).count("1") > 2:
                assert abs(qhat.coeffs[mask]) < 1e-8


def test_to_fourier_examples():
    one = MultilinearPolynomial(2, np.array([1.0, 0, 0, 0]))
    assert np.allclose(to_fourier(one).coeffs, [1, 0, 0, 0], atol=1e-12)
    half = MultilinearPolynomial(2, np.array([0.5, 0, 0, 0]))
    assert np.allclose(to_fourier(half).coeffs, [0, 0, 0, 0], atol=1e-12)
    deutsch_poly = MultilinearPolynomial(2, np.array([1.0, -1.0, -1.0, 2.0]))
    assert np.allclose(to_fourier(deutsch_poly).coeffs, [0, 0, 0, 1], atol=1e-12)


def test_to_fourier_matches_direct_character_sum():
    rng = np.random.default_rng(3)
    for n in (1, 2, 3):
        poly = interpolate_on_cube(rng.uniform(0, 1, size=1 << n))
        qhat = to_fourier(poly)
        q_values = 2 * poly.values_on_cube() - 1
        assert np.allclose(qhat.coeffs, naive_character_coeffs(q_values), atol=1e-10)


def test_fourier_round_trip_and_parseval():
    rng = np.random.default_rng(21)
    for n in (2, 3):
        poly = interpolate_on_cube(rng.uniform(0, 1, size=1 << n))
        qhat = to_fourier(poly)
        back = from_fourier(qhat)
        assert np.allclose(back.coeffs, poly.coeffs, atol=1e-10)
        q_values = 2 * poly.values_on_cube() - 1
        assert np.sum(qhat.coeffs**2) == pytest.approx(
            np.mean(q_values**2), abs=1e-9
        )


def test_compile_deutsch():
    compiled = compile_classical(deutsch(), [0])
    assert not compiled.degenerate
    assert compiled.scale == pytest.approx(1.0, abs=1e-10)
    assert len(compiled.terms) == 1
    mask, prob, sign = compiled.terms[0]
    assert (mask, sign) == (0b11, 1)
    assert prob == pytest.approx(1.0, abs=1e-12)


def test_compile_always_accept():
    compiled = compile_classical(_always_accept(2), [0])
    assert not compiled.degenerate
    assert compiled.scale == pytest.approx(1.0, abs=1e-10)
    assert compiled.terms == ((0, 1.0, 1),)
    assert compiled.max_queries == 0


def test_compile_degenerate_fair_coin():
    # half-half mixture of accept and reject has p identically 1/2
    dim = 4
    povm = (np.diag([1.0, 0, 1, 0]).astype(complex), np.diag([0, 1.0, 0, 1]).astype(complex))
    rho0 = np.eye(dim, dtype=complex) / dim
    alg = QuantumAlgorithm(2, cyclic(2), 1, rho0, (), povm)
    values = [run(alg, [m >> i & 1 for i in range(2)]).outcome_probs[0] for m in range(4)]
    assert np.allclose(values, 0.5, atol=1e-12)
    compiled = compile_classical(alg, [0])
    assert compiled.degenerate
    assert compiled.scale == 0.0
    assert compiled.max_queries == 0
    for m in range(4):
        assert classical_output_prob(compiled, [m & 1, m >> 1]) == 0.5


def test_classical_output_prob_deutsch_inputs():
    compiled = compile_classical(deutsch(), [0])
    assert classical_output_prob(compiled, (0, 0)) == pytest.approx(1.0)
    assert classical_output_prob(compiled, (1, 1)) == pytest.approx(1.0)
    assert classical_output_prob(compiled, (0, 1)) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        classical_output_prob(compiled, (0,))
    with pytest.raises(ValueError):
        classical_output_prob(compiled, (0, 2))


def test_bias_identity_across_pool():
    for n, alg in _sample_pool(29):
        accept = _accept_evens(alg)
        poly = acceptance_polynomial(alg, accept)
        compiled = compile_classical(alg, accept)
        values = poly.values_on_cube()
        assert compiled.max_queries <= 2
        if not compiled.degenerate:
            assert abs(sum(t[1] for t in compiled.terms) - 1) < 1e-10
        for mask in range(1 << n):
            bits = [mask >> i & 1 for i in range(n)]
            got = classical_output_prob(compiled, bits)
            if compiled.degenerate:
                assert got == 0.5
            else:
                expected = (values[mask] - 0.5) / compiled.scale + 0.5
                assert got == pytest.approx(expected, abs=1e-9)


def test_compiled_json_round_trip():
    compiled = compile_classical(deutsch(), [0])
    again = compiled_from_json(compiled_to_json(compiled))
    assert again == compiled


def test_compiled_validation():
    with pytest.raises(ValueError):  # probabilities not normalized
        CompiledClassicalAlgorithm(2, 1, 1.0, ((0, 0.5, 1),), False)
    with pytest.raises(ValueError):  # subset too large for the query budget
        CompiledClassicalAlgorithm(2, 0, 1.0, ((0b11, 1.0, 1),), False)
    with pytest.raises(ValueError):  # bad sign
        CompiledClassicalAlgorithm(2, 1, 1.0, ((0b1, 1.0, 2),), False)


def test_corollary5_holds_for_parity4():
    problem = make_parity(4)
    for s in trial_seeds(31, 20):
        alg = random_algorithm(4, problem.group, 1, 1, s)
        report = corollary5_audit(problem, alg, _accept_evens(alg))
        assert report.defined
        assert report.classical_useless_2k is True
        assert report.rhs == pytest.approx(0.5, abs=0)
        assert report.deviation < 1e-8
        assert report.identity_holds


def test_corollary5_reports_violation_for_parity2_deutsch():
    report = corollary5_audit(make_parity(2), deutsch(), [0])
    assert report.classical_useless_2k is False
    assert not report.identity_holds
    assert report.lhs == pytest.approx(1.0, abs=1e-9)
    assert report.rhs == pytest.approx(0.5, abs=0)


def test_corollary5_constant_acceptance_collapses():
    alg = _always_accept(2)
    report = corollary5_audit(make_parity(2), alg, [0], check_classical=False)
    assert report.defined
    assert report.lhs == pytest.approx(report.rhs, abs=1e-12)


def test_corollary5_preconditions():
    from oraclelab.problems import make_image_parity, make_shamir

    with pytest.raises(ValueError):  # three or more parts
        corollary5_audit(make_shamir(3, 1), random_algorithm(2, cyclic(3), 1, 1, 0), [0])
    with pytest.raises(ValueError):  # non-Boolean response group
        corollary5_audit(make_image_parity(), random_algorithm(3, cyclic(3), 1, 1, 0), [0])


def test_capacity_guard():
    alg = QuantumAlgorithm(
        13, cyclic(2), 1, random_pure_state(26, 0), (), (np.eye(26, dtype=complex),)
    )
    with pytest.raises(CapacityError):
        acceptance_polynomial(alg, [0])
