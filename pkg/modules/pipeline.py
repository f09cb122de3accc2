# modules/pipeline.py
"""Non-fiberedness certificates, cover models and the symplectic verdict for knot surgery on
torus bundles.

The search runs on the zero surgery N0 of the knot with phi the positive generator of H^1(N0).
A non-monic Alexander polynomial settles the question at once; otherwise every epimorphism onto
every catalog group is tried in canonical order and the first vanishing twisted polynomial is
the certificate.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple, Union

from modules.covers import cover_invariants
from modules.errors import EnumerationBudgetError, InvalidArgumentError, MinorBudgetError
from modules.foxcalc import abelian_phi, alexander_polynomial, rep_from_epimorphism, twisted_alexander, twisted_vanishes
from modules.groups import PDCode, Presentation, Word, torus_bundle_presentation, zero_surgery_presentation
from modules.logging_utils import log_function_call, app_logger as log
from modules.quotients import DEFAULT_CATALOG, Epimorphism, FiniteGroup, catalog, enumerate_epimorphisms, perm_from_text
from modules.reports import Certificate, CoverModel, EpimorphismRecord, ObstructionReport, VerdictReport
from modules.ring import LaurentPoly, lp_from_text
from modules.settings import settings
from modules.swcalc import bauer_li_bound, is_monic

GroupSpec = Union[str, FiniteGroup]


def cover_model(r: int, l: int) -> CoverModel:
    b1 = (r - 1) * (l - 1)
    return CoverModel(r=r, l=l, degree=r * l ** 3, b1_bound=b1, b2plus_bound=b1 - 1, r_gt_1=r > 1, l_gt_3=l > 3)


def build_cover_model(alpha: Epimorphism, peripheral: Word) -> CoverModel:
    """Numerics of the rl^3-fold cover: (r, l) from the peripheral curve's image."""
    r, l = cover_invariants(alpha, peripheral)
    return cover_model(r, l)


def _resolve(groups: Optional[Sequence[GroupSpec]]) -> List[FiniteGroup]:
    names = DEFAULT_CATALOG if groups is None else groups
    return [g if isinstance(g, FiniteGroup) else catalog(g) for g in names]


def _evaluate(p, phi, epi: Epimorphism, index: int, expand_dim: int) -> EpimorphismRecord:
    rep = rep_from_epimorphism(epi, phi)
    columns = (p.generators - 1) * rep.dimension
    vanishing = twisted_vanishes(p, rep)
    delta = "0" if vanishing else None
    expanded = False
    if not vanishing and columns <= expand_dim:
        try:
            delta = str(twisted_alexander(p, rep).polynomial)
            expanded = True
        except MinorBudgetError as exc:
            log.warning(f"{epi.group.name}[{index}]: expansion stopped after {exc.consumed} minors")
    return EpimorphismRecord(group=epi.group.name, index=index, images=[str(g) for g in epi.images],
                             twisted_delta=delta, vanishing=vanishing, expanded=expanded, columns=columns)


@log_function_call
def fibered_obstruction_search(knot: PDCode, groups: Optional[Sequence[GroupSpec]] = None,
                               budget: Optional[int] = None, name: str = "",
                               expand_dim: Optional[int] = None, threads: Optional[int] = None) -> ObstructionReport:
    """Look for a proof that the knot is not fibered.

    Args:
        knot: PD code of the knot
        groups: catalog names or groups to try, default DEFAULT_CATALOG
        budget: epimorphism search nodes shared by all groups
        name: knot label for the report
        expand_dim: expand nonvanishing twisted polynomials up to this many columns

    Returns:
        ObstructionReport: verdict NonMonic, NonFiberedCertificate or NoObstructionFound
    """
    p = zero_surgery_presentation(knot)
    delta = alexander_polynomial(p)
    monic = is_monic(delta)
    log.info(f"{name or 'knot'}: delta = {delta}, monic = {monic}")
    if not monic:
        return ObstructionReport(knot=name, delta=str(delta), monic=False, verdict="NonMonic")
    return _twisted_search(p, delta, groups, budget, name, expand_dim, threads)


@log_function_call
def twisted_obstruction_search(p: Presentation, groups: Optional[Sequence[GroupSpec]] = None,
                               budget: Optional[int] = None, name: str = "",
                               expand_dim: Optional[int] = None, threads: Optional[int] = None) -> ObstructionReport:
    """Catalog search for a vanishing twisted polynomial on any b1 = 1 presentation.

    No monicity gate: the verdict is NonFiberedCertificate or NoObstructionFound. The cover
    model is filled in when ``p`` carries a ``dual_knot`` peripheral.
    """
    delta = alexander_polynomial(p)
    return _twisted_search(p, delta, groups, budget, name, expand_dim, threads)


def _twisted_search(p: Presentation, delta: LaurentPoly, groups, budget, name, expand_dim, threads) -> ObstructionReport:
    budget = settings.EPI_BUDGET if budget is None else budget
    expand_dim = settings.EXPAND_DIM if expand_dim is None else expand_dim
    threads = settings.THREADS if threads is None else threads
    phi = abelian_phi(p)
    monic = is_monic(delta)
    dual = p.peripherals.get("dual_knot")
    records: List[EpimorphismRecord] = []
    searched: List[str] = []
    consumed = 0
    exhausted = False
    for group in _resolve(groups):
        stats = {}
        try:
            epis = enumerate_epimorphisms(p, group, budget=budget - consumed, threads=threads, stats=stats)
        except EnumerationBudgetError as exc:
            epis = exc.found
            stats["nodes"] = exc.nodes
            exhausted = True
        consumed += stats.get("nodes", 0)
        searched.append(group.name)
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            group_records = list(pool.map(lambda item: _evaluate(p, phi, item[1], item[0], expand_dim),
                                          enumerate(epis)))
        for epi, record in zip(epis, group_records):
            records.append(record)
            if record.vanishing:
                certificate = Certificate(group=group.name, index=record.index, images=record.images)
                model = build_cover_model(epi, dual) if dual is not None else None
                log.info(f"{name or 'knot'}: certificate from {group.name}[{record.index}]")
                return ObstructionReport(knot=name, delta=str(delta), monic=monic, verdict="NonFiberedCertificate",
                                         groups=searched, epimorphisms=records, certificate=certificate,
                                         cover_model=model, budget_consumed=consumed, budget_exhausted=exhausted)
        if exhausted:
            log.warning(f"{name or 'knot'}: search budget exhausted in {group.name}")
            break
    log.info(f"{name or 'knot'}: no obstruction among {len(records)} epimorphisms")
    return ObstructionReport(knot=name, delta=str(delta), monic=monic, verdict="NoObstructionFound", groups=searched,
                             epimorphisms=records, budget_consumed=consumed, budget_exhausted=exhausted)


def recheck_certificate(knot: Union[PDCode, Presentation], certificate: Certificate) -> bool:
    """Recompute the certificate's twisted polynomial from a fresh presentation and rep.

    A PDCode is replaced by its zero surgery; a Presentation is used as given.
    """
    p = knot if isinstance(knot, Presentation) else zero_surgery_presentation(knot)
    group = catalog(certificate.group)
    images = [perm_from_text(text, group.degree) for text in certificate.images]
    epi = Epimorphism(p, group, images)
    if not epi.is_valid():
        return False
    rep = rep_from_epimorphism(epi, abelian_phi(p))
    return twisted_alexander(p, rep).minor_gcd.is_zero()


def fibered_heuristic(delta_text_or_poly, genus: int) -> bool:
    """Monic with degree span 2 * genus."""
    delta = delta_text_or_poly if isinstance(delta_text_or_poly, LaurentPoly) else lp_from_text(delta_text_or_poly, 1)
    if not is_monic(delta):
        return False
    low, high = delta.span()
    return high - low == 2 * genus


@log_function_call
def symplectic_verdict(knot: PDCode, bundle: Tuple[Sequence, Tuple[int, int]], name: str = "",
                       assert_fibered: bool = False, heuristic_fibered: bool = False,
                       knot_genus: Optional[int] = None, groups: Optional[Sequence[GroupSpec]] = None,
                       budget: Optional[int] = None) -> VerdictReport:
    """Decide whether knot surgery on a torus bundle along a fiber can be symplectic.

    The fiber class is assumed nonzero in homology. A non-monic Δ or a vanishing twisted Δ
    rules out symplectic structures; a fibered knot gives one.
    """
    monodromy, euler = bundle
    torus_bundle_presentation(monodromy, euler)
    base = dict(knot=name, genus=len(monodromy) // 2, euler=list(euler), fibered_asserted=assert_fibered)
    if not len(knot):
        return VerdictReport(verdict="symplectic", reason="unknot: X_K is X itself, a symplectic torus bundle", **base)

    report = fibered_obstruction_search(knot, groups=groups, budget=budget, name=name)
    heuristic = fibered_heuristic(report.delta, knot_genus) if knot_genus is not None else None
    if report.verdict != "NoObstructionFound":
        if assert_fibered:
            raise InvalidArgumentError(f"{name or 'knot'} was asserted fibered but {report.verdict} was found")
        bauer_li = needs_composite = None
        if report.cover_model is not None:
            bauer_li = bauer_li_bound(report.cover_model.b1_bound)
            needs_composite = not (report.cover_model.r_gt_1 and report.cover_model.l_gt_3)
        reason = ("Alexander polynomial is not monic" if report.verdict == "NonMonic"
                  else "a twisted Alexander polynomial of the zero surgery vanishes")
        return VerdictReport(verdict="not symplectic", reason=f"K is not fibered: {reason}",
                             fibered_heuristic=heuristic, bauer_li_ok=bauer_li,
                             needs_composite_quotient=needs_composite, obstruction=report, **base)
    if assert_fibered:
        return VerdictReport(verdict="symplectic", reason="K is fibered (asserted): knot surgery keeps the "
                             "fiber torus symplectic", fibered_heuristic=heuristic, obstruction=report, **base)
    if heuristic_fibered and heuristic:
        return VerdictReport(verdict="symplectic", reason="K treated as fibered: monic with degree 2g",
                             fibered_heuristic=heuristic, obstruction=report, **base)
    return VerdictReport(verdict="inconclusive", reason="no obstruction found at this budget",
                         fibered_heuristic=heuristic, obstruction=report, **base)
