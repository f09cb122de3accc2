"""End to end checks over the shipped knot table. Slower than the unit tests."""
import io

import pytest

from modules.cli import KnotforgeCLI
from modules.covers import cover_crosscheck
from modules.errors import InvalidArgumentError
from modules.foxcalc import TwistedRep, alexander_polynomial, correction_block, fox_derivative, seifert_alexander
from modules.groups import (
    Word,
    bundle_index_subgroup,
    knot_group,
    todd_coxeter,
    torus_bundle_pullback,
    zero_surgery_presentation,
)
from modules.pipeline import build_cover_model, fibered_obstruction_search, symplectic_verdict
from modules.quotients import DEFAULT_CATALOG, abelianization_epimorphism, catalog, enumerate_epimorphisms
from modules.ring import LaurentPoly, RingMatrix, lp_equal_up_to_units
from modules.swcalc import LatticeMap, SWSeries, glue_sum, knot_surgery_sw, meng_taubes, surgery_sum_along_torus

IDENTITY = [[1, 0], [0, 1]]
SHEAR = [[1, 1], [0, 1]]


def regular_matrix(group, element):
    table = group.multiplication_table()
    g = group.index_of(element)
    m = [[0] * group.order for _ in range(group.order)]
    for k in range(group.order):
        m[table[g][k]][k] = 1
    return m


def test_fox_identity_with_the_regular_representation_of_s3(rng):
    s3 = catalog("S3")
    images = [s3.elements[1], s3.elements[2], s3.elements[1] * s3.elements[2]]
    rep = TwistedRep([regular_matrix(s3, g) for g in images], [[1], [0], [2]])
    identity = RingMatrix.identity(6)
    for _ in range(200):
        w = Word([(rng.randrange(3), rng.choice([1, -1])) for _ in range(rng.randint(1, 10))])
        total = RingMatrix.zeros(6, 6)
        for j in range(3):
            total = total + fox_derivative(w, j, rep) * correction_block(rep, j)
        assert total == rep.word_image(w) - identity


def test_alexander_oracle(table):
    for name in table.names():
        delta = alexander_polynomial(knot_group(table.pd(name)))
        assert lp_equal_up_to_units(delta, seifert_alexander(table.lookup(name).seifert)), name
        assert abs(sum(delta.coefficients())) == 1
        assert delta.coefficients() == delta.coefficients()[::-1]


def test_solid_torus_series():
    expanded = meng_taubes(LaurentPoly.one(), 1, 1).expand(19)
    shifted = {(e[0] + 1,): c for e, c in expanded.items()}
    assert shifted == {(k,): 1 for k in range(1, 20, 2)}


@pytest.mark.parametrize("name", ["3_1", "4_1", "5_2", "6_1"])
def test_zero_surgery_and_exterior_give_one_polynomial(name, table):
    knot = table.pd(name)
    assert lp_equal_up_to_units(alexander_polynomial(zero_surgery_presentation(knot)),
                                alexander_polynomial(knot_group(knot)))


@pytest.mark.parametrize("name", ["3_1", "4_1"])
@pytest.mark.parametrize("n", [2, 3])
def test_cyclic_crosscheck(name, n, table):
    p = knot_group(table.pd(name))
    assert cover_crosscheck(p, abelianization_epimorphism(p, n, [1] * p.generators)).consistent


@pytest.mark.parametrize("monodromy", [[IDENTITY, IDENTITY], [SHEAR, IDENTITY]])
@pytest.mark.parametrize("euler", [(0, 0), (1, 1)])
@pytest.mark.parametrize("l", [2, 3])
def test_bundle_subgroup_index(monodromy, euler, l):
    p = torus_bundle_pullback(monodromy, euler, l)
    assert todd_coxeter(p, bundle_index_subgroup(1, l)).index == l * l


@pytest.mark.parametrize("name", ["3_1", "4_1"])
def test_cover_arithmetic(name, table):
    p = zero_surgery_presentation(table.pd(name))
    dual = p.peripherals["dual_knot"]
    for group_name in DEFAULT_CATALOG:
        group = catalog(group_name)
        for epi in enumerate_epimorphisms(p, group):
            model = build_cover_model(epi, dual)
            assert model.r * model.l == group.order
            assert model.degree == model.r * model.l ** 3
            assert model.b1_bound == (model.r - 1) * (model.l - 1)
            assert model.b2plus_bound == model.b1_bound - 1


@pytest.mark.parametrize("name, delta", [("5_2", "2*t^2 - 3*t + 2"), ("6_1", "2*t^2 - 5*t + 2")])
def test_non_monic_knots_are_not_fibered(name, delta, table):
    report = fibered_obstruction_search(table.pd(name), name=name)
    assert (report.verdict, report.delta) == ("NonMonic", delta)


@pytest.mark.parametrize("name", ["3_1", "4_1"])
def test_fibered_knots_survive_the_default_catalog(name, table):
    report = fibered_obstruction_search(table.pd(name), name=name)
    assert report.verdict == "NoObstructionFound"
    assert report.groups == DEFAULT_CATALOG
    assert not report.budget_exhausted


def surgery_coefficients(e_terms, delta_coefficients, radius):
    """Coefficients of E * Δ(t^2) * t / (1 - t^2) in [-radius, radius], summed by hand."""
    product = {}
    for e, c in e_terms.items():
        for i, d in enumerate(delta_coefficients):
            product[e + 2 * i + 1] = product.get(e + 2 * i + 1, 0) + c * d
    out = {}
    for k in range(-radius, radius + 1):
        total = sum(c for e, c in product.items() if e <= k and (k - e) % 2 == 0)
        if total:
            out[(k,)] = total
    return out


@pytest.mark.parametrize("name", ["3_1", "6_1"])
def test_gluing_matches_knot_surgery(name, alexander_coefficients, rng):
    coefficients = alexander_coefficients[name]
    delta = LaurentPoly.from_coefficients(coefficients)
    for _ in range(20):
        terms = {}
        for _ in range(rng.randint(1, 5)):
            terms[rng.randint(-6, 6)] = rng.choice([-2, -1, 1, 2])
        e = SWSeries.polynomial(LaurentPoly({(k,): c for k, c in terms.items()}))
        expected = surgery_coefficients(terms, coefficients, 20)
        glued = glue_sum([e, meng_taubes(delta, 1, 1)], [LatticeMap.identity(1)] * 2, 1, 20)
        assert SWSeries(glued.numerator.shift((1,)), glued.denominators).expand(20) == expected
        assert knot_surgery_sw(surgery_sum_along_torus(e), delta).expand(20) == expected


def test_verdicts_are_coherent(table):
    bundle = ([IDENTITY, IDENTITY], (0, 0))
    for name in table.names():
        entry = table.lookup(name)
        knot = table.pd(name)
        if entry.fibered:
            report = symplectic_verdict(knot, bundle, name=name, assert_fibered=True, groups=["Z2"])
            assert report.verdict == "symplectic", name
        else:
            report = symplectic_verdict(knot, bundle, name=name, knot_genus=entry.genus)
            assert report.verdict == "not symplectic", name
            with pytest.raises(InvalidArgumentError):
                symplectic_verdict(knot, bundle, name=name, assert_fibered=True)


def test_cli_verdicts():
    cli = KnotforgeCLI()
    out = io.StringIO()
    assert cli.run(["verdict", "6_1", "--genus", "1", "--monodromy", "id", "--euler", "0,0"], out=out) == 0
    assert "verdict: not symplectic" in out.getvalue()
    assert "verdict: NonMonic" in out.getvalue()
    out = io.StringIO()
    assert cli.run(["verdict", "3_1", "--genus", "1", "--monodromy", "id", "--euler", "0,0",
                    "--assert-fibered", "--groups", "Z2,Z3,S3"], out=out) == 0
    assert "verdict: symplectic" in out.getvalue()
