# modules/covers.py
"""Finite covers attached to an epimorphism: peripheral degrees, cover presentations,
homology, and the comparison of twisted invariants with the cover's own invariants."""
from concurrent.futures import ThreadPoolExecutor
from math import gcd
from typing import List, Optional, Sequence, Tuple

from modules.errors import UnsupportedBettiError
from modules.foxcalc import abelian_phi, rep_from_epimorphism, trivial_rep, twisted_alexander
from modules.groups import (
    CosetTable,
    Presentation,
    SchreierSystem,
    Word,
    abelianization,
    coset_table_from_action,
    reidemeister_schreier,
)
from modules.logging_utils import log_function_call, app_logger as log
from modules.quotients import Epimorphism, element_order
from modules.reports import CoverData, CrosscheckReport
from modules.ring import LaurentPoly, lp_equal_up_to_units, lp_exact_div, lp_normalize, lp_substitute_power
from modules.settings import settings

# largest |k| accepted for a stray (a-1)^k factor in tolerant mode
_TOLERATED_POWER = 2


def cover_invariants(alpha: Epimorphism, peripheral: Word) -> Tuple[int, int]:
    """(r, l): the peripheral curve lifts to r components, each covering it with degree l."""
    l = element_order(alpha.evaluate(peripheral))
    return alpha.group.order // l, l


def kernel_table(alpha: Epimorphism) -> CosetTable:
    """Coset table of ker(alpha): cosets are group elements, generators act by right multiplication."""
    group = alpha.group
    table = group.multiplication_table()
    images = []
    for image in alpha.images:
        g = group.index_of(image)
        images.append([table[c][g] for c in range(group.order)])
    return coset_table_from_action(alpha.presentation.generators, images)


@log_function_call
def cover_presentation(p: Presentation, alpha: Epimorphism) -> Presentation:
    return reidemeister_schreier(p, kernel_table(alpha))


@log_function_call
def cover_homology(p: Presentation, alpha: Epimorphism) -> Tuple[int, List[int]]:
    """(b1, torsion) of the cover corresponding to ker(alpha)."""
    return abelianization(cover_presentation(p, alpha))


def cover_data(p: Presentation, alpha: Epimorphism, peripheral: Word, with_homology: bool = False) -> CoverData:
    r, l = cover_invariants(alpha, peripheral)
    b1 = torsion = None
    if with_homology:
        b1, torsion = cover_homology(p, alpha)
    return CoverData(r=r, l=l, group_order=alpha.group.order, b1=b1, torsion=torsion)


def transfer_degree(system: SchreierSystem, phi: Sequence[int]) -> Tuple[int, List[int]]:
    """(d, phi') where phi restricted to the cover is d * phi' with phi' primitive.

    The image of H1(cover) in H1(base) = Z is dZ, so pushing forward sends s to t^d.
    """
    values = []
    for word in system.generator_words:
        values.append(sum(exp * phi[gen] for gen, exp in word.syllables))
    d = 0
    for v in values:
        d = gcd(d, v)
    if d == 0:
        raise UnsupportedBettiError("phi vanishes on the cover")
    return d, [v // d for v in values]


def _divides(divisor: LaurentPoly, value: LaurentPoly) -> bool:
    return value.is_zero() or lp_exact_div(value, divisor) is not None


def _match_with_power(lhs: LaurentPoly, rhs: LaurentPoly, a_minus_1: LaurentPoly) -> Optional[int]:
    """Smallest |k| <= 2 with lhs ≐ rhs * (a - 1)^k, or None."""
    for k in (0, 1, -1, 2, -2):
        if k >= 0:
            candidate = rhs * a_minus_1 ** k
        else:
            candidate = lp_exact_div(rhs, a_minus_1 ** -k) if not rhs.is_zero() else rhs
            if candidate is None:
                continue
        if lp_equal_up_to_units(lhs, candidate):
            return k
    return None


def power_consistency(lhs: LaurentPoly, rhs: LaurentPoly, a_minus_1: LaurentPoly, b1_cover: int) -> Tuple[bool, int]:
    """(consistent, k) for lhs ≐ rhs * (a - 1)^k.

    rhs is the one-variable order of the cover, which already carries the (a - 1)^2 of the
    b1_cover > 1 case, so only k = 0 is consistent, and then (a - 1)^2 | rhs is required when
    b1_cover > 1. Any other k found is returned for the report; None becomes 0.
    """
    matched = _match_with_power(lhs, rhs, a_minus_1)
    consistent = matched == 0 and (b1_cover == 1 or _divides(a_minus_1 ** 2, rhs))
    return consistent, matched or 0


@log_function_call
def cover_crosscheck(p: Presentation, alpha: Epimorphism, phi: Optional[Sequence[int]] = None,
                     strict: bool = False, index: int = 0) -> CrosscheckReport:
    """Compare the regular-representation twisted invariant of p with the cover's invariant.

    lhs is the order of the twisted first homology of p; rhs is the order of the cover's first
    homology in its own variable s, pushed forward by s -> t^d. Both modes require lhs ≐ rhs, and
    (a - 1)^2 | rhs when b1(cover) > 1, where a = t^d. When a module order needs an inexact
    division, tolerant mode compares the cross-multiplied identity and strict mode fails.
    """
    b1, _ = abelianization(p)
    if b1 != 1:
        raise UnsupportedBettiError(f"crosscheck needs b1 = 1, got {b1}")
    phi = list(phi) if phi is not None else abelian_phi(p)

    left = twisted_alexander(p, rep_from_epimorphism(alpha, phi), with_module_order=True)
    system = SchreierSystem(kernel_table(alpha))
    cover = reidemeister_schreier(p, system.table)
    b1_cover, torsion_cover = abelianization(cover)
    d, phi_cover = transfer_degree(system, phi)
    right = twisted_alexander(cover, trivial_rep([[e] for e in phi_cover]), with_module_order=True)

    a_minus_1 = LaurentPoly.monomial([d]) - 1
    raw = False
    power = 0
    if left.module_order is not None and right.module_order is not None:
        lhs = left.module_order
        rhs = lp_normalize(lp_substitute_power(right.module_order, d))
        consistent, power = power_consistency(lhs, rhs, a_minus_1, b1_cover)
    else:
        # cross-multiplied form of order = minor_gcd * h0 / correction on both sides
        raw = True
        lhs = lp_normalize(left.minor_gcd * left.h0_order * lp_substitute_power(right.correction, d))
        rhs = lp_normalize(lp_substitute_power(right.minor_gcd * right.h0_order, d) * left.correction)
        consistent = not strict and lp_equal_up_to_units(lhs, rhs)

    log.info(f"crosscheck {alpha.group.name}[{index}]: b1_cover={b1_cover}, d={d}, consistent={consistent}")
    return CrosscheckReport(group=alpha.group.name, index=index, lhs=str(lhs), rhs=str(rhs),
                            b1_cover=b1_cover, torsion_cover=torsion_cover, transfer_degree=d,
                            strict=strict, consistent=consistent, factor_power=power, raw_identity=raw)


def crosscheck_batch(jobs: Sequence[Tuple[Presentation, Epimorphism]], strict: bool = False,
                     threads: Optional[int] = None) -> List[CrosscheckReport]:
    """Run cover_crosscheck over many (presentation, epimorphism) pairs; results keep input order."""
    threads = settings.THREADS if threads is None else threads
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = [pool.submit(cover_crosscheck, p, alpha, None, strict, i) for i, (p, alpha) in enumerate(jobs)]
        return [f.result() for f in futures]
