import pytest

from modules.errors import InvalidArgumentError, InvalidMonodromyError
from modules.groups import PDCode, Presentation, Word
from modules.pipeline import (
    build_cover_model,
    cover_model,
    fibered_heuristic,
    fibered_obstruction_search,
    recheck_certificate,
    symplectic_verdict,
    twisted_obstruction_search,
)
from modules.quotients import catalog, enumerate_epimorphisms
from modules.reports import Certificate

GROWING_GROUPS = [["Z3"], ["Z3", "S3"], ["Z3", "S3", "Z2"], ["Z3", "S3", "Z2", "D5"]]

IDENTITY_BUNDLE = ([[[1, 0], [0, 1]], [[1, 0], [0, 1]]], (0, 0))


@pytest.fixture
def always_vanishing(monkeypatch):
    monkeypatch.setattr("modules.pipeline.twisted_vanishes", lambda p, rep: True)


def test_cover_model_arithmetic():
    model = cover_model(3, 2)
    assert (model.degree, model.b1_bound, model.b2plus_bound) == (24, 2, 1)
    assert model.r_gt_1 and not model.l_gt_3
    model = cover_model(2, 5)
    assert (model.degree, model.b1_bound, model.b2plus_bound) == (250, 4, 3)
    assert model.l_gt_3


def test_cover_model_from_epimorphisms(trefoil_zero):
    dual = trefoil_zero.peripherals["dual_knot"]
    for group in ("Z2", "Z3", "S3"):
        for epi in enumerate_epimorphisms(trefoil_zero, catalog(group)):
            model = build_cover_model(epi, dual)
            assert model.r * model.l == epi.group.order
            assert model.degree == model.r * model.l ** 3


@pytest.mark.parametrize("name, delta", [("5_2", "2*t^2 - 3*t + 2"), ("6_1", "2*t^2 - 5*t + 2"),
                                         ("7_2", "3*t^2 - 5*t + 3")])
def test_non_monic_knots(name, delta, table):
    report = fibered_obstruction_search(table.pd(name), name=name)
    assert report.verdict == "NonMonic"
    assert report.delta == delta
    assert not report.monic
    assert report.epimorphisms == []


def test_fibered_knot_has_no_obstruction(trefoil):
    report = fibered_obstruction_search(trefoil, groups=["Z2", "Z3", "S3"], name="3_1")
    assert report.verdict == "NoObstructionFound"
    assert report.delta == "t^2 - t + 1"
    assert report.groups == ["Z2", "Z3", "S3"]
    assert len(report.epimorphisms) == 1 + 2 + 6
    assert not any(e.vanishing for e in report.epimorphisms)
    assert not report.budget_exhausted
    assert report.budget_consumed > 0


def test_search_budget_is_reported(trefoil):
    report = fibered_obstruction_search(trefoil, groups=["S3", "S4"], budget=3, threads=1)
    assert report.verdict == "NoObstructionFound"
    assert report.budget_exhausted
    assert report.groups == ["S3"]
    assert "budget: exhausted" in report.to_text()


def test_vanishing_polynomial_gives_a_certificate(trefoil, always_vanishing):
    report = fibered_obstruction_search(trefoil, groups=["S3"], name="3_1")
    assert report.verdict == "NonFiberedCertificate"
    assert report.certificate.group == "S3"
    assert report.certificate.index == 0
    assert len(report.epimorphisms) == 1
    assert report.epimorphisms[0].twisted_delta == "0"
    assert (report.cover_model.r, report.cover_model.l) == (3, 2)


def test_recheck_certificate(trefoil):
    assert not recheck_certificate(trefoil, Certificate(group="Z2", index=0, images=["(1 2)"] * 3))
    # not a homomorphism: the relators fail
    assert not recheck_certificate(trefoil, Certificate(group="S3", index=0, images=["(1 2)", "(1 2)", "(2 3)"]))


def test_fibered_heuristic():
    assert fibered_heuristic("t^2 - t + 1", 1)
    assert not fibered_heuristic("t^2 - t + 1", 2)
    assert not fibered_heuristic("2*t^2 - 5*t + 2", 1)


def test_verdict_for_the_unknot():
    report = symplectic_verdict(PDCode(), IDENTITY_BUNDLE, name="unknot")
    assert report.verdict == "symplectic"
    assert report.obstruction is None


def test_verdict_for_a_non_monic_knot(table):
    report = symplectic_verdict(table.pd("6_1"), IDENTITY_BUNDLE, name="6_1", knot_genus=1)
    assert report.verdict == "not symplectic"
    assert report.obstruction.verdict == "NonMonic"
    assert report.fibered_heuristic is False
    assert report.bauer_li_ok is None
    with pytest.raises(InvalidArgumentError):
        symplectic_verdict(table.pd("6_1"), IDENTITY_BUNDLE, assert_fibered=True)


def test_verdict_with_a_certificate(trefoil, always_vanishing):
    report = symplectic_verdict(trefoil, IDENTITY_BUNDLE, groups=["S3"])
    assert report.verdict == "not symplectic"
    assert report.bauer_li_ok is True
    assert report.needs_composite_quotient is True


def test_verdict_for_a_fibered_knot(trefoil):
    asserted = symplectic_verdict(trefoil, IDENTITY_BUNDLE, assert_fibered=True, groups=["Z2"])
    assert asserted.verdict == "symplectic"
    assert asserted.fibered_asserted
    open_question = symplectic_verdict(trefoil, IDENTITY_BUNDLE, knot_genus=1, groups=["Z2"])
    assert open_question.verdict == "inconclusive"
    assert open_question.fibered_heuristic is True
    heuristic = symplectic_verdict(trefoil, IDENTITY_BUNDLE, knot_genus=1, heuristic_fibered=True, groups=["Z2"])
    assert heuristic.verdict == "symplectic"


def test_verdict_checks_the_bundle(trefoil):
    with pytest.raises(InvalidMonodromyError):
        symplectic_verdict(trefoil, ([[[1, 1], [1, 1]], [[1, 0], [0, 1]]], (0, 0)))


@pytest.fixture
def circle_times_involution():
    """⟨x, a | a^2⟩ with x as the dual knot: Z * Z/2, so b1 = 1 and every twisted polynomial
    with a nontrivial image of a vanishes."""
    return Presentation(2, [Word([(1, 2)])], {"dual_knot": Word([(0, 1)])})


def test_real_vanishing_gives_a_certificate(circle_times_involution):
    report = twisted_obstruction_search(circle_times_involution, groups=["Z3", "Z2"], name="Z*Z2")
    assert report.verdict == "NonFiberedCertificate"
    assert report.delta == "2"
    assert not report.monic
    assert report.groups == ["Z3", "Z2"]
    assert not any(e.vanishing for e in report.epimorphisms if e.group == "Z3")
    assert report.epimorphisms[-1].vanishing
    assert report.epimorphisms[-1].twisted_delta == "0"
    assert report.certificate.group == "Z2"
    assert report.cover_model.r * report.cover_model.l == 2
    assert recheck_certificate(circle_times_involution, report.certificate)


def test_abelian_target_alone_does_not_vanish(circle_times_involution):
    report = twisted_obstruction_search(circle_times_involution, groups=["Z3"])
    assert report.verdict == "NoObstructionFound"
    assert len(report.epimorphisms) == 2
    assert report.certificate is None


def test_recheck_rejects_an_involution_sent_to_the_identity(circle_times_involution):
    z2 = catalog("Z2")
    images = [str(z2.elements[1]), str(z2.elements[0])]
    assert not recheck_certificate(circle_times_involution, Certificate(group="Z2", index=0, images=images))


def test_more_groups_never_lose_an_obstruction(circle_times_involution, trefoil):
    obstructed = False
    for groups in GROWING_GROUPS:
        report = twisted_obstruction_search(circle_times_involution, groups=groups)
        if obstructed:
            assert report.verdict == "NonFiberedCertificate", groups
        obstructed = report.verdict == "NonFiberedCertificate"
    assert obstructed
    for groups in GROWING_GROUPS[:3]:
        assert fibered_obstruction_search(trefoil, groups=groups).verdict == "NoObstructionFound"
