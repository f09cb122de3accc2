# modules/swcalc.py
"""Seiberg-Witten series as rational functions over Z[H] and their truncated expansions.

An SWSeries is numerator / prod(1 - m) with each factor expanded as 1 + m + m^2 + ...
(toward positive multiples of m). Gluing along tori pushes series forward along lattice
maps and multiplies them. All equalities here are up to the unit ambiguity ±H unless the
function says otherwise.
"""
from __future__ import annotations

import re
from typing import Dict, List, Optional, Sequence, Tuple

from modules.errors import DivergenceError, InvalidArgumentError, UnsupportedRankError
from modules.logging_utils import log_function_call, app_logger as log
from modules.ring import LaurentPoly, lp_equal_up_to_units, lp_from_text, lp_normalize, lp_substitute_power
from modules.settings import settings

Exponent = Tuple[int, ...]


class LatticeMap:
    """Integer matrix Z^source -> Z^target (rows = target coordinates)."""

    def __init__(self, matrix: Sequence[Sequence[int]], source: Optional[int] = None):
        self.matrix = [list(map(int, row)) for row in matrix]
        self.target = len(self.matrix)
        self.source = len(self.matrix[0]) if self.matrix else (source or 0)
        if any(len(row) != self.source for row in self.matrix):
            raise InvalidArgumentError("ragged lattice map")

    @classmethod
    def identity(cls, k: int) -> "LatticeMap":
        return cls([[1 if i == j else 0 for j in range(k)] for i in range(k)])

    @classmethod
    def scaling(cls, k: int, factor: int) -> "LatticeMap":
        return cls([[factor if i == j else 0 for j in range(k)] for i in range(k)])

    @classmethod
    def axis(cls, target: int, coordinate: int = 0, factor: int = 1) -> "LatticeMap":
        """Z -> Z^target sending 1 to factor * e_coordinate."""
        return cls([[factor if i == coordinate else 0] for i in range(target)])

    def apply(self, exps: Sequence[int]) -> Exponent:
        return tuple(sum(a * e for a, e in zip(row, exps)) for row in self.matrix)

    def push(self, p: LaurentPoly) -> LaurentPoly:
        terms: Dict[Exponent, int] = {}
        for e, c in p.terms.items():
            image = self.apply(e)
            terms[image] = terms.get(image, 0) + c
        return LaurentPoly(terms, self.target)


class SWSeries:
    """numerator / prod(1 - m for m in denominators), expanded toward positive multiples of m."""

    def __init__(self, numerator: LaurentPoly, denominators: Sequence[Sequence[int]] = (),
                 truncation: Optional[int] = None):
        self.numerator = numerator
        self.rank = numerator.rank
        self.denominators: List[Exponent] = [tuple(int(x) for x in m) for m in denominators]
        for m in self.denominators:
            if len(m) != self.rank:
                raise InvalidArgumentError(f"denominator {m} does not have rank {self.rank}")
            if not any(m):
                raise DivergenceError("1 - 1 cannot be inverted")
        self.truncation = settings.TRUNCATION if truncation is None else truncation

    @classmethod
    def polynomial(cls, p: LaurentPoly, truncation: Optional[int] = None) -> "SWSeries":
        return cls(p, (), truncation)

    @property
    def finite(self) -> bool:
        return not self.denominators

    def _direction(self) -> Optional[Tuple[int, int]]:
        """(coordinate, sign) along which every denominator moves strictly, or None."""
        if not self.denominators:
            return None
        for c in range(self.rank):
            signs = {(m[c] > 0) - (m[c] < 0) for m in self.denominators}
            if len(signs) == 1 and 0 not in signs:
                return c, signs.pop()
        raise DivergenceError(f"denominators {self.denominators} have no common direction")

    def expand(self, radius: Optional[int] = None) -> Dict[Exponent, int]:
        """Coefficients at every exponent with all coordinates in [-radius, radius]."""
        radius = self.truncation if radius is None else radius
        inside = lambda e: all(-radius <= x <= radius for x in e)
        if self.finite:
            return {e: c for e, c in self.numerator.terms.items() if inside(e)}
        coordinate, sign = self._direction()
        out: Dict[Exponent, int] = {}

        def walk(point: Exponent, coeff: int, k: int):
            if k == len(self.denominators):
                if inside(point):
                    out[point] = out.get(point, 0) + coeff
                return
            m = self.denominators[k]
            while sign * point[coordinate] <= radius:
                walk(point, coeff, k + 1)
                point = tuple(a + b for a, b in zip(point, m))

        for e, c in self.numerator.terms.items():
            walk(e, c, 0)
        return {e: c for e, c in sorted(out.items()) if c}

    def normalized(self) -> "SWSeries":
        return SWSeries(lp_normalize(self.numerator), self.denominators, self.truncation)

    def equals_up_to_unit(self, other: "SWSeries") -> bool:
        """Rational forms agree up to ±monomial (denominators compared as multisets)."""
        if sorted(self.denominators) != sorted(other.denominators):
            return lp_equal_up_to_units(self.numerator * _denominator_product(other),
                                        other.numerator * _denominator_product(self))
        return lp_equal_up_to_units(self.numerator, other.numerator)

    def to_text(self) -> str:
        lines = [f"num: {self.numerator}"]
        if self.rank > 1:
            lines.insert(0, f"rank: {self.rank}")
        if self.denominators:
            lines.append("den: " + " ".join(f"(1-{LaurentPoly.monomial(m)})" for m in self.denominators))
        lines.append(f"trunc: {self.truncation}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SWSeries":
        rank = None
        numerator = None
        denominators: List[Exponent] = []
        truncation = None
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition(":")
            key, value = key.strip(), value.strip()
            if key == "rank":
                rank = int(value)
            elif key == "num":
                numerator = lp_from_text(value, rank)
            elif key == "den":
                for body in re.findall(r"\(1-([^()]*)\)", value.replace(" ", "")):
                    m = lp_from_text(body, rank)
                    if not m.is_monomial() or next(iter(m.terms.values())) != 1:
                        raise InvalidArgumentError(f"denominator factor (1-{body}) is not 1 minus a monomial")
                    denominators.append(next(iter(m.terms)))
            elif key == "trunc":
                truncation = int(value)
            else:
                raise InvalidArgumentError(f"unknown series key {key!r}")
        if numerator is None:
            raise InvalidArgumentError("series text needs a 'num:' line")
        return cls(numerator, denominators, truncation)

    def __repr__(self):
        return f"SWSeries({self.to_text().strip()!r})"


def _denominator_product(series: SWSeries) -> LaurentPoly:
    product = LaurentPoly.one(series.rank)
    for m in series.denominators:
        product = product * (1 - LaurentPoly.monomial(m))
    return product


def expansion_text(coefficients: Dict[Exponent, int]) -> List[str]:
    return [f"{','.join(str(x) for x in e)}: {c}" for e, c in sorted(coefficients.items())]


@log_function_call
def meng_taubes(delta: LaurentPoly, b1: int, boundary_count: int = 1,
                truncation: Optional[int] = None) -> SWSeries:
    """SW series of S^1 x N from the Alexander polynomial of N.

    b1 > 1 gives Δ(t^2); b1 = 1 gives Δ(t^2) / (1 - t^2)^(2 - boundary_count).
    """
    if delta.rank != 1:
        raise UnsupportedRankError("meng_taubes takes a rank-1 polynomial")
    if b1 < 1:
        raise InvalidArgumentError(f"b1 must be at least 1, got {b1}")
    numerator = lp_normalize(lp_substitute_power(delta, 2))
    if b1 > 1:
        return SWSeries(numerator, (), truncation)
    if boundary_count not in (0, 1):
        raise InvalidArgumentError(f"boundary_count must be 0 or 1, got {boundary_count}")
    return SWSeries(numerator, [(2,)] * (2 - boundary_count), truncation)


def series_product(a: SWSeries, b: SWSeries) -> SWSeries:
    if a.rank != b.rank:
        raise InvalidArgumentError("series ranks differ")
    return SWSeries(a.numerator * b.numerator, a.denominators + b.denominators, min(a.truncation, b.truncation))


@log_function_call
def glue_sum(parts: Sequence[SWSeries], maps: Sequence[LatticeMap], target_rank: int,
             truncation: Optional[int] = None) -> SWSeries:
    """Push every part forward along its map and multiply.

    Coefficient of z is the sum over (z_1..z_n) with sum rho_i(z_i) = z of prod SW_i(z_i). A
    denominator direction killed by its map makes a fiber infinite and raises DivergenceError.
    """
    if len(parts) != len(maps):
        raise InvalidArgumentError("one lattice map per part is required")
    truncation = settings.TRUNCATION if truncation is None else truncation
    numerator = LaurentPoly.one(target_rank)
    denominators: List[Exponent] = []
    for part, rho in zip(parts, maps):
        if rho.source != part.rank or rho.target != target_rank:
            raise InvalidArgumentError(f"map {rho.source}->{rho.target} does not fit a rank-{part.rank} part")
        numerator = numerator * rho.push(part.numerator)
        for m in part.denominators:
            image = rho.apply(m)
            if not any(image):
                raise DivergenceError(f"direction {m} is annihilated by the gluing map")
            denominators.append(image)
    result = SWSeries(numerator, denominators, truncation)
    if denominators:
        result._direction()
    log.debug(f"glued {len(parts)} parts: {len(numerator.terms)} numerator terms, {len(denominators)} denominators")
    return result


def knot_surgery_sw(sw_x: SWSeries, delta_k: LaurentPoly) -> SWSeries:
    """Multiply by Δ_K(t^2) on the torus axis (first coordinate)."""
    if delta_k.rank != 1:
        raise UnsupportedRankError("delta_k must have rank 1")
    doubled = lp_substitute_power(delta_k, 2)
    placed = LatticeMap.axis(sw_x.rank).push(doubled)
    return SWSeries(sw_x.numerator * placed, sw_x.denominators, sw_x.truncation)


def solid_torus_series(truncation: Optional[int] = None) -> SWSeries:
    """t / (1 - t^2)"""
    return SWSeries(LaurentPoly.monomial([1]), [(2,)], truncation)


def surgery_sum_along_torus(piece: SWSeries, coordinate: int = 0, truncation: Optional[int] = None) -> SWSeries:
    """Glue a solid torus into the boundary torus of ``piece`` along ``coordinate``."""
    rho = LatticeMap.axis(piece.rank, coordinate)
    return glue_sum([piece, solid_torus_series()], [LatticeMap.identity(piece.rank), rho], piece.rank, truncation)


def pushforward_delta_check(delta_n: LaurentPoly, delta_m: LaurentPoly, b1_n: int, kappa_exponent: int = 1) -> bool:
    """Compare Δ_N with the pushed-forward Δ_M of a piece M inside N.

    b1 = 1: Δ_N ≐ Δ_M. b1 > 1: Δ_N * (1 - κ) ≐ Δ_M with κ = t^kappa_exponent.
    """
    if delta_n.rank != 1 or delta_m.rank != 1:
        raise UnsupportedRankError("pushforward_delta_check takes rank-1 polynomials")
    if b1_n == 1:
        return lp_equal_up_to_units(delta_n, delta_m)
    kappa = LaurentPoly.monomial([kappa_exponent])
    return lp_equal_up_to_units(delta_n * (1 - kappa), delta_m)


def is_monic(delta: LaurentPoly) -> bool:
    """Lowest and highest coefficients are ±1. The zero polynomial is not monic."""
    if delta.rank != 1:
        raise UnsupportedRankError("is_monic takes a rank-1 polynomial")
    if delta.is_zero():
        return False
    coeffs = delta.coefficients()
    return abs(coeffs[0]) == 1 and abs(coeffs[-1]) == 1


def taubes_monic_check(series: SWSeries) -> bool:
    """A finitely supported series whose extreme classes (lexicographic) carry ±1."""
    if not series.finite or series.numerator.is_zero():
        return False
    exps = sorted(series.numerator.terms)
    return abs(series.numerator.terms[exps[0]]) == 1 and abs(series.numerator.terms[exps[-1]]) == 1


def bauer_li_bound(b1: int) -> bool:
    """b1 <= 4, necessary for a symplectic 4-manifold with trivial canonical class."""
    return b1 <= 4
