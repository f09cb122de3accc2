import pytest

from modules.errors import DivergenceError, InvalidArgumentError, UnsupportedRankError
from modules.ring import LaurentPoly, lp_from_text, lp_normalize
from modules.swcalc import (
    LatticeMap,
    SWSeries,
    bauer_li_bound,
    expansion_text,
    glue_sum,
    is_monic,
    knot_surgery_sw,
    meng_taubes,
    pushforward_delta_check,
    series_product,
    solid_torus_series,
    surgery_sum_along_torus,
    taubes_monic_check,
)

TREFOIL = lp_from_text("t^2 - t + 1", 1)
STEVEDORE = lp_from_text("2*t^2 - 5*t + 2", 1)


def p(text):
    return lp_from_text(text, 1)


def inverted(f):
    return LaurentPoly({(-e[0],): c for e, c in f.terms.items()})


def test_solid_torus_expansions():
    assert meng_taubes(LaurentPoly.one(), 1, 1).expand(19) == {(2 * k,): 1 for k in range(10)}
    assert solid_torus_series().expand(19) == {(2 * k + 1,): 1 for k in range(10)}
    assert meng_taubes(LaurentPoly.one(), 1, 1).equals_up_to_unit(solid_torus_series())


def test_meng_taubes_for_the_trefoil():
    exterior = meng_taubes(TREFOIL, 1, 1)
    assert exterior.numerator == p("t^4 - t^2 + 1")
    assert exterior.denominators == [(2,)]
    assert exterior.expand(8) == {(0,): 1, (4,): 1, (6,): 1, (8,): 1}
    closed = meng_taubes(TREFOIL, 1, 0)
    assert closed.denominators == [(2,), (2,)]
    assert meng_taubes(TREFOIL, 2).finite


def test_meng_taubes_rejects_bad_input():
    with pytest.raises(InvalidArgumentError):
        meng_taubes(TREFOIL, 1, 2)
    with pytest.raises(InvalidArgumentError):
        meng_taubes(TREFOIL, 0)
    with pytest.raises(UnsupportedRankError):
        meng_taubes(lp_from_text("t1 + t2"), 1)


def test_knot_surgery_examples():
    assert knot_surgery_sw(SWSeries.polynomial(LaurentPoly.one()), TREFOIL).numerator == p("t^4 - t^2 + 1")
    s = SWSeries.polynomial(p("t + t^-1"))
    assert knot_surgery_sw(s, STEVEDORE).numerator == p("2*t^5 - 3*t^3 - 3*t + 2*t^-1")
    assert knot_surgery_sw(s, LaurentPoly.one()).numerator == s.numerator


def test_knot_surgery_composes(rng):
    for _ in range(10):
        s = SWSeries(LaurentPoly.from_coefficients([rng.randint(-3, 3) for _ in range(4)], low=-1), [(2,)])
        d1 = LaurentPoly.from_coefficients([rng.randint(-3, 3) for _ in range(3)])
        d2 = LaurentPoly.from_coefficients([rng.randint(-3, 3) for _ in range(3)])
        twice = knot_surgery_sw(knot_surgery_sw(s, d1), d2)
        once = knot_surgery_sw(s, d1 * d2)
        assert twice.numerator == once.numerator
        assert twice.denominators == once.denominators


def test_knot_surgery_on_higher_rank_uses_the_first_axis():
    s = SWSeries.polynomial(lp_from_text("t2 + 1"))
    result = knot_surgery_sw(s, TREFOIL)
    assert result.numerator == lp_from_text("t1^4*t2 + t1^4 - t1^2*t2 - t1^2 + t2 + 1")


def test_glue_sum_of_finite_parts_is_the_product(rng):
    identity = LatticeMap.identity(1)
    for _ in range(100):
        a = LaurentPoly.from_coefficients([rng.randint(-5, 5) for _ in range(rng.randint(1, 5))], low=rng.randint(-3, 3))
        b = LaurentPoly.from_coefficients([rng.randint(-5, 5) for _ in range(rng.randint(1, 5))], low=rng.randint(-3, 3))
        glued = glue_sum([SWSeries.polynomial(a), SWSeries.polynomial(b)], [identity, identity], 1)
        assert glued.numerator == a * b
        assert glued.finite


def test_glue_sum_single_identity_part():
    s = meng_taubes(TREFOIL, 1, 1)
    glued = glue_sum([s], [LatticeMap.identity(1)], 1, 20)
    assert glued.numerator == s.numerator
    assert glued.denominators == s.denominators


def test_gluing_reproduces_knot_surgery():
    e = SWSeries.polynomial(p("t^2 + 3 + t^-2"))
    glued = glue_sum([e, meng_taubes(TREFOIL, 1, 1)], [LatticeMap.identity(1)] * 2, 1, 20)
    direct = knot_surgery_sw(surgery_sum_along_torus(e), TREFOIL)
    assert direct.numerator == glued.numerator.shift((1,))
    assert glued.denominators == direct.denominators == [(2,)]
    assert SWSeries(glued.numerator.shift((1,)), glued.denominators).expand(20) == direct.expand(20)


def test_lattice_maps():
    doubling = LatticeMap.scaling(1, 2)
    assert doubling.push(TREFOIL) == p("t^4 - t^2 + 1")
    axis = LatticeMap.axis(2, coordinate=1, factor=3)
    assert axis.apply((1,)) == (0, 3)
    with pytest.raises(InvalidArgumentError):
        LatticeMap([[1, 0], [1]])


def test_divergence_is_detected():
    with pytest.raises(DivergenceError):
        glue_sum([solid_torus_series()], [LatticeMap([[0]])], 1)
    with pytest.raises(DivergenceError):
        SWSeries(LaurentPoly.one(), [(0,)])
    with pytest.raises(DivergenceError):
        SWSeries(LaurentPoly.one(2), [(1, 0), (-1, 0)]).expand(3)
    with pytest.raises(InvalidArgumentError):
        glue_sum([solid_torus_series()], [], 1)


def test_series_text_round_trip():
    s = meng_taubes(TREFOIL, 1, 1, truncation=12)
    assert s.to_text() == "num: t^4 - t^2 + 1\nden: (1-t^2)\ntrunc: 12\n"
    parsed = SWSeries.from_text(s.to_text())
    assert parsed.numerator == s.numerator
    assert parsed.denominators == s.denominators
    assert parsed.truncation == 12
    two = SWSeries.from_text("rank: 2\nnum: t1*t2 + 1\nden: (1-t1^2)\n")
    assert two.rank == 2 and two.denominators == [(2, 0)]
    with pytest.raises(InvalidArgumentError):
        SWSeries.from_text("num: 1\nden: (1-2*t)")
    with pytest.raises(InvalidArgumentError):
        SWSeries.from_text("den: (1-t)")


def test_series_product_and_expansion_text():
    product = series_product(solid_torus_series(), meng_taubes(LaurentPoly.one(), 1, 1))
    assert product.denominators == [(2,), (2,)]
    assert product.expand(5) == {(1,): 1, (3,): 2, (5,): 3}
    assert expansion_text({(1,): 2, (-1,): 1}) == ["-1: 1", "1: 2"]


def test_pushforward_delta_check():
    one = LaurentPoly.one()
    assert pushforward_delta_check(one, one, 1)
    assert pushforward_delta_check(TREFOIL, p("-t^-1 + 1 - t"), 1)
    assert pushforward_delta_check(one, p("1 - t"), 2)
    assert not pushforward_delta_check(one, one, 2)
    with pytest.raises(UnsupportedRankError):
        pushforward_delta_check(lp_from_text("t1 + t2"), one, 1)


def test_monicity(rng):
    assert is_monic(TREFOIL)
    assert not is_monic(STEVEDORE)
    assert is_monic(LaurentPoly.one())
    assert not is_monic(LaurentPoly.zero())
    for _ in range(30):
        f = LaurentPoly.from_coefficients([rng.choice([-2, -1, 1, 2]) for _ in range(rng.randint(1, 5))],
                                          low=rng.randint(-4, 4))
        assert is_monic(f) == is_monic(lp_normalize(f)) == is_monic(inverted(f))


def test_taubes_and_bauer_li_predicates():
    assert taubes_monic_check(SWSeries.polynomial(p("t^4 - t^2 + 1")))
    assert not taubes_monic_check(SWSeries.polynomial(p("2*t^4 - 5*t^2 + 2")))
    assert not taubes_monic_check(meng_taubes(TREFOIL, 1, 1))
    assert bauer_li_bound(4)
    assert not bauer_li_bound(5)
