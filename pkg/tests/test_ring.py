from functools import reduce
from itertools import combinations
from math import gcd, prod

import pytest

from modules.errors import InvalidArgumentError, MinorBudgetError, UnsupportedRankError
from modules.ring import (
    LaurentPoly,
    RingMatrix,
    integer_cokernel,
    lp_equal_up_to_units,
    lp_exact_div,
    lp_from_text,
    lp_gcd,
    lp_normalize,
    lp_substitute_power,
    lp_to_text,
    ringmat_det,
    ringmat_minor_gcd,
    ringmat_rank,
    ringmat_rank_deficient,
    smith_normal_form,
)


def p(text):
    return lp_from_text(text, 1)


def test_normalize_examples():
    assert lp_normalize(p("t^2 - t + 1")) == p("t^2 - t + 1")
    assert lp_normalize(p("-t^-1 + 1 - t")) == p("t^2 - t + 1")
    assert lp_normalize(LaurentPoly.zero()).is_zero()


def test_normalize_is_idempotent_and_unit_invariant(rng):
    for _ in range(50):
        coeffs = [rng.randint(-4, 4) for _ in range(rng.randint(1, 6))]
        f = LaurentPoly.from_coefficients(coeffs, low=rng.randint(-3, 3))
        if f.is_zero():
            continue
        unit = LaurentPoly.monomial([rng.randint(-5, 5)], rng.choice([1, -1]))
        assert lp_normalize(lp_normalize(f)) == lp_normalize(f)
        assert lp_normalize(unit * f) == lp_normalize(f)


def test_text_round_trip():
    for text in ["t^2 - t + 1", "2*t^2 - 5*t + 2", "4 - t^-3"]:
        assert lp_to_text(p(text)) == text
    assert lp_to_text(p("-t^-3 + 4")) == "4 - t^-3"
    assert lp_to_text(LaurentPoly.zero()) == "0"
    two = lp_from_text("t1*t2^-1 + 3")
    assert two.rank == 2
    assert lp_to_text(two) == "t1*t2^-1 + 3"


def test_bad_text():
    with pytest.raises(InvalidArgumentError):
        lp_from_text("t^2 +")
    with pytest.raises(InvalidArgumentError):
        lp_from_text("s^2")


def test_arithmetic():
    t = LaurentPoly.monomial([1])
    assert (t - 1) * (t + 1) == p("t^2 - 1")
    assert t ** -2 == p("t^-2")
    assert 1 - t == p("-t + 1")
    assert (t * 3).coefficients() == [3]
    with pytest.raises(InvalidArgumentError):
        (t + 1) ** -1


def test_gcd_examples():
    assert lp_gcd(p("t^2 - 1"), p("t^3 - 1")) == lp_normalize(p("t - 1"))
    assert lp_gcd(LaurentPoly.zero(), p("-t^3 + t")) == lp_normalize(p("-t^3 + t"))
    assert lp_gcd(p("2*t"), p("4*t^3")) == LaurentPoly.constant(2)


def test_gcd_rejects_rank_two():
    with pytest.raises(UnsupportedRankError):
        lp_gcd(lp_from_text("t1 + t2"), lp_from_text("t1"))


def test_exact_division():
    assert lp_exact_div(p("t^2 - 1"), p("t - 1")) == p("t + 1")
    assert lp_exact_div(p("t^-1 - t"), p("t - 1")) == p("-t^-1 - 1")
    assert lp_exact_div(p("t^2 + 1"), p("t - 1")) is None
    with pytest.raises(InvalidArgumentError):
        lp_exact_div(p("t"), LaurentPoly.zero())


def test_substitute_power():
    assert lp_substitute_power(p("t^2 - t + 1"), 2) == p("t^4 - t^2 + 1")
    assert lp_substitute_power(p("t^-1 + 2"), 3) == p("t^-3 + 2")
    with pytest.raises(InvalidArgumentError):
        lp_substitute_power(p("t"), 0)


def test_evaluate_mod():
    assert p("t^2 - t + 1").evaluate_mod([2], 7) == 3
    assert p("t^-1").evaluate_mod([3], 7) == 5


def test_det_and_rank():
    assert ringmat_det(RingMatrix.from_ints([[1, 2], [3, 4]])) == LaurentPoly.constant(-2)
    t = LaurentPoly.monomial([1])
    m = RingMatrix([[t - 1, LaurentPoly.one()], [-t, t - 1]])
    assert ringmat_det(m) == p("t^2 - t + 1")
    singular = RingMatrix([[t, t * t], [LaurentPoly.one(), t]])
    assert ringmat_det(singular).is_zero()
    assert ringmat_rank(singular) == 1
    assert ringmat_rank_deficient(singular, 2)
    assert not ringmat_rank_deficient(m, 2)


def test_minor_gcd():
    t = LaurentPoly.monomial([1])
    one = LaurentPoly.one()
    zero = LaurentPoly.zero()
    m = RingMatrix([[t - 1, zero], [zero, t + 1], [zero, zero]])
    assert ringmat_minor_gcd(m, 2) == lp_normalize(p("t^2 - 1"))
    assert ringmat_minor_gcd(m, 1) == one
    assert ringmat_minor_gcd(m, 0) == one
    assert ringmat_minor_gcd(RingMatrix.zeros(3, 2), 2).is_zero()
    with pytest.raises(InvalidArgumentError):
        ringmat_minor_gcd(m, 3)


def test_minor_gcd_budget():
    t = LaurentPoly.monomial([1])
    two = LaurentPoly.constant(2)
    grid = [[two + t ** (i * j + 1) for j in range(4)] for i in range(5)]
    with pytest.raises(MinorBudgetError):
        ringmat_minor_gcd(RingMatrix(grid), 3, max_minors=1)


def test_smith_and_cokernel():
    assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]
    assert smith_normal_form([[0, 0]]) == []
    assert integer_cokernel([[2, 0, 0]], 3) == (2, [2])
    assert integer_cokernel([[1, -1], [1, -1]], 2) == (1, [])


def test_equal_up_to_units():
    assert lp_equal_up_to_units(p("t^2 - t + 1"), p("-t^-1 + 1 - t"))
    assert not lp_equal_up_to_units(p("t^2 - t + 1"), p("t^2 + t + 1"))


def random_poly(rng, span=3, size=3):
    return LaurentPoly({(rng.randint(-span, span),): rng.randint(-3, 3) for _ in range(size)})


def cofactor_det(grid):
    if len(grid) == 1:
        return grid[0][0]
    total = grid[0][0] * 0
    for j, entry in enumerate(grid[0]):
        minor = [row[:j] + row[j + 1:] for row in grid[1:]]
        term = entry * cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def test_gcd_is_multiplicative(rng):
    for _ in range(40):
        f, g, r = random_poly(rng), random_poly(rng), random_poly(rng)
        if r.is_zero() or (f.is_zero() and g.is_zero()):
            continue
        assert lp_equal_up_to_units(lp_gcd(f * r, g * r), lp_gcd(f, g) * r)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bareiss_matches_cofactor_expansion(rng, n):
    for _ in range(5):
        grid = [[random_poly(rng, span=2, size=2) for _ in range(n)] for _ in range(n)]
        assert ringmat_det(RingMatrix(grid)) == cofactor_det(grid)


def test_minor_gcd_of_a_repeated_factor():
    t = LaurentPoly.monomial([1])
    zero = LaurentPoly.zero()
    assert ringmat_minor_gcd(RingMatrix([[t - 1, zero], [zero, t - 1]]), 2) == p("t^2 - 2*t + 1")


def test_smith_literal_examples():
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [1, 1, 1]
    assert smith_normal_form([[0, 0], [0, 0]]) == []


@pytest.mark.parametrize("shape", [(1, 3), (2, 2), (3, 2), (3, 3), (4, 4)])
def test_smith_factors_are_minor_gcds(rng, shape):
    rows, cols = shape
    for _ in range(10):
        matrix = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        factors = smith_normal_form(matrix)
        assert all(d > 0 for d in factors)
        assert all(b % a == 0 for a, b in zip(factors, factors[1:]))
        for k in range(1, min(rows, cols) + 1):
            minors = [cofactor_det([[matrix[i][j] for j in cs] for i in rs])
                      for rs in combinations(range(rows), k) for cs in combinations(range(cols), k)]
            expected = reduce(gcd, (abs(m) for m in minors), 0)
            assert expected == (prod(factors[:k]) if k <= len(factors) else 0)
