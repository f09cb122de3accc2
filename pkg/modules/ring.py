# modules/ring.py
"""Exact arithmetic: integer Laurent polynomials, matrices over them, integer normal forms.

Rank-1 polynomials are converted to sympy dense (``dup``) polynomials over ``ZZ`` whenever
gcd, exact division or determinants are needed. Everything here is immutable and pure.
"""
from __future__ import annotations

import random
import re
from itertools import combinations
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.densearith import dup_div, dup_exquo, dup_mul, dup_neg, dup_sub
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd

from modules.errors import InvalidArgumentError, MinorBudgetError, UnsupportedRankError
from modules.logging_utils import app_logger as log

Exponent = Tuple[int, ...]

# Prime used for evaluation-based rank certificates (2**61 - 1)
RANK_PRIME = 2305843009213693951
_RANK_TRIALS = 3


class LaurentPoly:
    """Finitely supported integer function on Z^k, written multiplicatively.

    ``terms`` maps exponent tuples to nonzero ints. Treat instances as immutable.
    """

    __slots__ = ("terms", "rank", "_hash")

    def __init__(self, terms: Optional[Dict[Exponent, int]] = None, rank: int = 1):
        if rank < 1:
            raise InvalidArgumentError(f"rank must be positive, got {rank}")
        clean: Dict[Exponent, int] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != rank:
                raise InvalidArgumentError(f"exponent {exps} does not have length {rank}")
            coeff = int(coeff)
            if coeff:
                clean[exps] = coeff
        self.terms = clean
        self.rank = rank
        self._hash = None

    # constructors

    @classmethod
    def _raw(cls, terms: Dict[Exponent, int], rank: int) -> "LaurentPoly":
        """Trusted constructor: terms already cleaned of zeros and correctly shaped."""
        obj = object.__new__(cls)
        obj.terms = terms
        obj.rank = rank
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, rank: int = 1) -> "LaurentPoly":
        return cls({}, rank)

    @classmethod
    def constant(cls, c: int, rank: int = 1) -> "LaurentPoly":
        return cls({(0,) * rank: c}, rank)

    @classmethod
    def one(cls, rank: int = 1) -> "LaurentPoly":
        return cls.constant(1, rank)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        exps = tuple(exps)
        return cls({exps: coeff}, len(exps))

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int], low: int = 0) -> "LaurentPoly":
        """Rank-1 polynomial sum(coeffs[i] * t^(low + i))."""
        return cls({(low + i,): c for i, c in enumerate(coeffs)}, 1)

    # predicates

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        """True for ±monomials, the units of Z[F]."""
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    # arithmetic

    def _check(self, other: "LaurentPoly"):
        if other.rank != self.rank:
            raise InvalidArgumentError(f"rank mismatch: {self.rank} vs {other.rank}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other, self.rank)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return LaurentPoly._raw({e: c for e, c in terms.items() if c}, self.rank)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self.terms.items()}, self.rank)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return LaurentPoly.zero(self.rank)
        terms: Dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in terms.items() if c}, self.rank)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_unit():
                raise InvalidArgumentError("only units have negative powers")
            (e, c), = self.terms.items()
            return LaurentPoly({tuple(x * n for x in e): c ** -n}, self.rank)
        result = LaurentPoly.one(self.rank)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def unit_inverse(self) -> "LaurentPoly":
        return self ** -1

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with exponent vector ``exps``."""
        return LaurentPoly._raw({tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()}, self.rank)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other, self.rank)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self.terms.items())))
        return self._hash

    # rank-1 helpers

    def _require_rank1(self, what: str):
        if self.rank != 1:
            raise UnsupportedRankError(f"{what} needs rank 1, got rank {self.rank}")

    def span(self) -> Tuple[int, int]:
        """(lowest, highest) exponent of a nonzero rank-1 polynomial."""
        self._require_rank1("span")
        exps = [e[0] for e in self.terms]
        return min(exps), max(exps)

    def coefficients(self) -> List[int]:
        """Rank-1 coefficient list from the lowest exponent upward."""
        if self.is_zero():
            return []
        low, high = self.span()
        return [self.terms.get((k,), 0) for k in range(low, high + 1)]

    def to_dup(self) -> Tuple[list, int]:
        """Return (dense ZZ poly, shift) with self = t^shift * poly and poly(0) != 0."""
        self._require_rank1("dense conversion")
        if self.is_zero():
            return [], 0
        low, high = self.span()
        return [ZZ(self.terms.get((k,), 0)) for k in range(high, low - 1, -1)], low

    @classmethod
    def from_dup(cls, dup: list, shift: int = 0) -> "LaurentPoly":
        degree = len(dup) - 1
        return cls({(shift + degree - i,): int(c) for i, c in enumerate(dup) if c}, 1)

    def evaluate_mod(self, point: Sequence[int], p: int) -> int:
        total = 0
        for e, c in self.terms.items():
            value = c
            for base, k in zip(point, e):
                value = value * pow(base, k, p)
            total += value
        return total % p

    def substitute_power(self, d: int) -> "LaurentPoly":
        return lp_substitute_power(self, d)

    # text form

    def __str__(self):
        return lp_to_text(self)

    def __repr__(self):
        return f"LaurentPoly({lp_to_text(self)!r}, rank={self.rank})"


def _var_name(index: int, rank: int) -> str:
    return "t" if rank == 1 else f"t{index + 1}"


def lp_to_text(p: LaurentPoly) -> str:
    """Render as ``c*t1^e1*t2^e2`` terms joined by `` + ``/`` - ``, highest exponent first."""
    if p.is_zero():
        return "0"
    pieces = []
    for exps in sorted(p.terms, reverse=True):
        coeff = p.terms[exps]
        factors = []
        for i, e in enumerate(exps):
            if e == 0:
                continue
            name = _var_name(i, p.rank)
            factors.append(name if e == 1 else f"{name}^{e}")
        body = "*".join(factors)
        magnitude = abs(coeff)
        if not body:
            text = str(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{magnitude}*{body}"
        pieces.append((coeff < 0, text))
    first_negative, first_text = pieces[0]
    out = ("-" if first_negative else "") + first_text
    for negative, text in pieces[1:]:
        out += (" - " if negative else " + ") + text
    return out


_FACTOR = re.compile(r"^t(\d*)(?:\^(-?\d+))?$")


def lp_from_text(text: str, rank: Optional[int] = None) -> LaurentPoly:
    """Parse the format written by ``lp_to_text``. ``t`` is shorthand for ``t1``."""
    source = text.replace(" ", "")
    if not source:
        raise InvalidArgumentError("empty polynomial text")
    chunks = []
    start = 0
    for i in range(1, len(source)):
        if source[i] in "+-" and source[i - 1] != "^":
            chunks.append(source[start:i])
            start = i
    chunks.append(source[start:])

    parsed = []
    max_index = 0
    for chunk in chunks:
        sign = 1
        if chunk[0] in "+-":
            sign = -1 if chunk[0] == "-" else 1
            chunk = chunk[1:]
        if not chunk:
            raise InvalidArgumentError(f"dangling sign in {text!r}")
        coeff = sign
        exps: Dict[int, int] = {}
        for factor in chunk.split("*"):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            match = _FACTOR.match(factor)
            if not match:
                raise InvalidArgumentError(f"cannot parse factor {factor!r} in {text!r}")
            index = int(match.group(1)) - 1 if match.group(1) else 0
            if index < 0:
                raise InvalidArgumentError(f"variables are numbered from 1: {factor!r}")
            exps[index] = exps.get(index, 0) + int(match.group(2) or 1)
            max_index = max(max_index, index)
        parsed.append((coeff, exps))

    rank = rank or max_index + 1
    if max_index >= rank:
        raise InvalidArgumentError(f"{text!r} uses more than {rank} variables")
    total = LaurentPoly.zero(rank)
    for coeff, exps in parsed:
        vector = [0] * rank
        for i, e in exps.items():
            vector[i] = e
        total = total + LaurentPoly({tuple(vector): coeff}, rank)
    return total


def lp_normalize(p: LaurentPoly) -> LaurentPoly:
    """Canonical representative of the unit class of p.

    Shift the lexicographically minimal exponent to zero, then make its coefficient positive.
    """
    if p.is_zero():
        return p
    low = min(p.terms)
    shifted = p.shift(tuple(-e for e in low))
    if shifted.terms[(0,) * p.rank] < 0:
        shifted = -shifted
    return shifted


def lp_equal_up_to_units(p: LaurentPoly, q: LaurentPoly) -> bool:
    return lp_normalize(p) == lp_normalize(q)


def lp_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Canonical gcd in Z[t^{±1}]."""
    if p.rank != 1 or q.rank != 1:
        raise UnsupportedRankError("multivariable gcd is not supported")
    if p.is_zero():
        return lp_normalize(q)
    if q.is_zero():
        return lp_normalize(p)
    f, _ = p.to_dup()
    g, _ = q.to_dup()
    return lp_normalize(LaurentPoly.from_dup(dup_gcd(f, g, ZZ)))


def lp_exact_div(p: LaurentPoly, q: LaurentPoly) -> Optional[LaurentPoly]:
    """p / q in Z[t^{±1}] when q divides p, else None."""
    if q.is_zero():
        raise InvalidArgumentError("division by zero polynomial")
    if p.rank != 1 or q.rank != 1:
        raise UnsupportedRankError("exact division needs rank 1")
    if p.is_zero():
        return p
    f, a = p.to_dup()
    g, b = q.to_dup()
    quotient, remainder = dup_div(f, g, ZZ)
    if remainder:
        return None
    return LaurentPoly.from_dup(quotient, a - b)


def lp_substitute_power(p: LaurentPoly, d: int) -> LaurentPoly:
    """Multiply every exponent vector by d (the ring map t -> t^d)."""
    if d <= 0:
        raise InvalidArgumentError(f"power must be positive, got {d}")
    return LaurentPoly._raw({tuple(d * x for x in e): c for e, c in p.terms.items()}, p.rank)


class RingMatrix:
    """Matrix over Z[F]; entries is a tuple of row tuples of LaurentPoly."""

    __slots__ = ("rows", "cols", "rank", "entries")

    def __init__(self, entries: Iterable[Iterable[LaurentPoly]], rows: Optional[int] = None,
                 cols: Optional[int] = None, rank: int = 1):
        grid = tuple(tuple(row) for row in entries)
        self.rows = len(grid) if rows is None else rows
        if cols is None:
            cols = len(grid[0]) if grid else 0
        self.cols = cols
        if len(grid) != self.rows or any(len(row) != cols for row in grid):
            raise InvalidArgumentError("ragged matrix")
        for row in grid:
            for entry in row:
                if entry.rank != rank:
                    raise InvalidArgumentError("matrix entries must share one rank")
        self.rank = rank
        self.entries = grid

    @classmethod
    def zeros(cls, rows: int, cols: int, rank: int = 1) -> "RingMatrix":
        zero = LaurentPoly.zero(rank)
        return cls([[zero] * cols for _ in range(rows)], rows, cols, rank)

    @classmethod
    def identity(cls, n: int, rank: int = 1) -> "RingMatrix":
        zero, one = LaurentPoly.zero(rank), LaurentPoly.one(rank)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], n, n, rank)

    @classmethod
    def from_ints(cls, grid: Sequence[Sequence[int]], rank: int = 1) -> "RingMatrix":
        rows = len(grid)
        cols = len(grid[0]) if grid else 0
        return cls([[LaurentPoly.constant(v, rank) for v in row] for row in grid], rows, cols, rank)

    @classmethod
    def blocks(cls, grid: Sequence[Sequence["RingMatrix"]], block_rows: int, block_cols: int,
               n: int, rank: int = 1) -> "RingMatrix":
        """Assemble a (block_rows*n) x (block_cols*n) matrix from n x n blocks."""
        out = []
        for bi in range(block_rows):
            for r in range(n):
                row = []
                for bj in range(block_cols):
                    row.extend(grid[bi][bj].entries[r])
                out.append(row)
        return cls(out, block_rows * n, block_cols * n, rank)

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def _same_shape(self, other: "RingMatrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InvalidArgumentError("shape mismatch")

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        self._same_shape(other)
        return RingMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
                          self.rows, self.cols, self.rank)

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        self._same_shape(other)
        return RingMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
                          self.rows, self.cols, self.rank)

    def __neg__(self) -> "RingMatrix":
        return RingMatrix([[-a for a in row] for row in self.entries], self.rows, self.cols, self.rank)

    def __mul__(self, other: "RingMatrix") -> "RingMatrix":
        if self.cols != other.rows:
            raise InvalidArgumentError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        zero = LaurentPoly.zero(self.rank)
        sparse_other = [[(j, v) for j, v in enumerate(row) if v.terms] for row in other.entries]
        out = []
        for row in self.entries:
            acc: Dict[int, LaurentPoly] = {}
            for k, a in enumerate(row):
                if not a.terms:
                    continue
                for j, b in sparse_other[k]:
                    term = a * b
                    acc[j] = acc[j] + term if j in acc else term
            out.append([acc.get(j, zero) for j in range(other.cols)])
        return RingMatrix(out, self.rows, other.cols, self.rank)

    def scale(self, p: LaurentPoly) -> "RingMatrix":
        return RingMatrix([[p * a for a in row] for row in self.entries], self.rows, self.cols, self.rank)

    def transpose(self) -> "RingMatrix":
        return RingMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
                          self.cols, self.rows, self.rank)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RingMatrix":
        return RingMatrix([[self.entries[i][j] for j in cols] for i in rows], len(rows), len(cols), self.rank)

    def delete_columns(self, cols: Iterable[int]) -> "RingMatrix":
        drop = set(cols)
        keep = [j for j in range(self.cols) if j not in drop]
        return self.submatrix(range(self.rows), keep)

    def is_zero(self) -> bool:
        return all(not a.terms for row in self.entries for a in row)

    def is_identity(self) -> bool:
        one = LaurentPoly.one(self.rank)
        return self.rows == self.cols and all(
            self.entries[i][j] == (one if i == j else LaurentPoly.zero(self.rank))
            for i in range(self.rows) for j in range(self.cols))

    def evaluate_mod(self, point: Sequence[int], p: int) -> List[List[int]]:
        return [[a.evaluate_mod(point, p) for a in row] for row in self.entries]

    def __repr__(self):
        body = "; ".join(", ".join(str(a) for a in row) for row in self.entries)
        return f"RingMatrix({self.rows}x{self.cols}: [{body}])"


def _modular_rank(grid: List[List[int]], p: int) -> int:
    rows = [row[:] for row in grid]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        pivot_row = rows[rank]
        for i in range(rank + 1, len(rows)):
            factor = rows[i][col]
            if factor:
                factor = factor * inv % p
                rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], pivot_row)]
        rank += 1
    return rank


def _sample_points(rank: int, trials: int) -> List[Tuple[int, ...]]:
    rng = random.Random(0x6b6e6f74)
    return [tuple(rng.randrange(2, RANK_PRIME - 1) for _ in range(rank)) for _ in range(trials)]


def _row_dups(matrix: RingMatrix) -> List[List[list]]:
    """Dense polynomial rows; each row is multiplied by a power of t to clear negative exponents."""
    out = []
    for row in matrix.entries:
        shift = _row_shift(row)
        dense_row = []
        for a in row:
            if not a.terms:
                dense_row.append([])
                continue
            high = max(e[0] for e in a.terms) + shift
            dense_row.append([ZZ(a.terms.get((k - shift,), 0)) for k in range(high, -1, -1)])
        out.append(dense_row)
    return out


def _row_shift(row: Sequence[LaurentPoly]) -> int:
    lows = [min(e[0] for e in a.terms) for a in row if a.terms]
    return -min(lows) if lows else 0


def _bareiss(grid: List[List[list]]) -> list:
    """Determinant of a square matrix of dense ZZ polynomials by fraction-free elimination."""
    n = len(grid)
    if n == 0:
        return [ZZ(1)]
    m = [row[:] for row in grid]
    sign = 1
    previous = [ZZ(1)]
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return []
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            lead = m[i][k]
            for j in range(k + 1, n):
                numerator = dup_sub(dup_mul(m[i][j], pivot, ZZ), dup_mul(lead, m[k][j], ZZ), ZZ)
                m[i][j] = dup_exquo(numerator, previous, ZZ) if numerator else []
        previous = pivot
    det = m[n - 1][n - 1]
    return dup_neg(det, ZZ) if sign < 0 else det


def ringmat_det(matrix: RingMatrix) -> LaurentPoly:
    """Determinant of a square rank-1 matrix (Bareiss elimination over Z[t])."""
    if matrix.rank != 1:
        raise UnsupportedRankError("determinants need rank 1")
    if matrix.rows != matrix.cols:
        raise InvalidArgumentError("determinant of a non-square matrix")
    if any(not any(a.terms for a in row) for row in matrix.entries):
        return LaurentPoly.zero()
    shifts = [_row_shift(row) for row in matrix.entries]
    det = _bareiss(_row_dups(matrix))
    return LaurentPoly.from_dup(det, -sum(shifts))


def _exact_rank(matrix: RingMatrix) -> int:
    """Rank over Q(t) by fraction-free elimination with full pivot search."""
    m = [row[:] for row in _row_dups(matrix)]
    rows, cols = matrix.rows, matrix.cols
    previous = [ZZ(1)]
    rank = 0
    for col in range(cols):
        pivot = next((i for i in range(rank, rows) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, rows):
            lead = m[i][col]
            for j in range(col + 1, cols):
                numerator = dup_sub(dup_mul(m[i][j], p, ZZ), dup_mul(lead, m[rank][j], ZZ), ZZ)
                m[i][j] = dup_exquo(numerator, previous, ZZ) if numerator else []
            m[i][col] = []
        previous = p
        rank += 1
    return rank


def ringmat_rank(matrix: RingMatrix, target: Optional[int] = None) -> int:
    """Rank over the fraction field.

    Evaluation at random points modulo a prime gives lower bounds; when they already reach
    ``target`` (default: the largest possible rank) the answer is certified without expanding.
    Otherwise the rank is computed exactly.
    """
    full = min(matrix.rows, matrix.cols)
    target = full if target is None else min(target, full)
    if full == 0:
        return 0
    best = 0
    for point in _sample_points(matrix.rank, _RANK_TRIALS):
        best = max(best, _modular_rank(matrix.evaluate_mod(point, RANK_PRIME), RANK_PRIME))
        if best >= target:
            return best
    if matrix.rank != 1:
        raise UnsupportedRankError("exact rank needs rank 1")
    exact = _exact_rank(matrix)
    log.debug(f"exact rank {exact} after modular bound {best} ({matrix.rows}x{matrix.cols})")
    return exact


def ringmat_rank_deficient(matrix: RingMatrix, size: int) -> bool:
    """True when every size x size minor vanishes."""
    return ringmat_rank(matrix, target=size) < size


def _normalizing_unit(a: LaurentPoly) -> LaurentPoly:
    """The unit u with u * a == lp_normalize(a)."""
    low = min(a.terms)
    return LaurentPoly({tuple(-e for e in low): 1 if a.terms[low] > 0 else -1}, a.rank)


def _prune(rows: List[List[LaurentPoly]]) -> List[List[LaurentPoly]]:
    rows = [row for row in rows if any(a.terms for a in row)]
    if not rows:
        return []
    keep = [j for j in range(len(rows[0])) if any(row[j].terms for row in rows)]
    rows = [[row[j] for j in keep] for row in rows]
    seen = set()
    unique = []
    for row in rows:
        # rows equal up to a unit give the same minors up to units
        unit = _normalizing_unit(next(a for a in row if a.terms))
        key = tuple(unit * a for a in row)
        if key in seen:
            continue
        seen.add(key)
        unique.append(row)
    return unique


def _eliminate_units(rows: List[List[LaurentPoly]], size: int):
    """Pivot on ±monomial entries; each pivot lowers the minor size by one."""
    pivots = 0
    while size > 0 and rows:
        best = None
        ncols = len(rows[0])
        col_weight = [sum(1 for row in rows if row[j].terms) for j in range(ncols)]
        for i, row in enumerate(rows):
            for j, a in enumerate(row):
                if a.terms and a.is_unit():
                    weight = (col_weight[j], sum(1 for b in row if b.terms))
                    if best is None or weight < best[0]:
                        best = (weight, i, j)
        if best is None:
            break
        _, pi, pj = best
        pivot_row = rows[pi]
        inverse = pivot_row[pj].unit_inverse()
        reduced = []
        for i, row in enumerate(rows):
            if i == pi:
                continue
            factor = row[pj]
            if factor.terms:
                factor = factor * inverse
                row = [a - factor * b for a, b in zip(row, pivot_row)]
            reduced.append([a for j, a in enumerate(row) if j != pj])
        rows = _prune(reduced)
        size -= 1
        pivots += 1
    return rows, size, pivots


def ringmat_minor_gcd(matrix: RingMatrix, size: int, max_minors: Optional[int] = None) -> LaurentPoly:
    """Canonical gcd of all size x size minors of a rank-1 matrix.

    Args:
        matrix: rank-1 RingMatrix
        size: minor size, 0 <= size <= min(rows, cols)
        max_minors: budget for explicitly expanded minors (None = unlimited)

    Returns:
        LaurentPoly: canonical gcd, 0 when all minors vanish, 1 when size is 0
    """
    if matrix.rank != 1:
        raise UnsupportedRankError("minor gcd needs rank 1")
    if size < 0 or size > min(matrix.rows, matrix.cols):
        raise InvalidArgumentError(f"minor size {size} out of range for {matrix.rows}x{matrix.cols}")
    if size == 0:
        return LaurentPoly.one()

    rows = _prune([list(row) for row in matrix.entries])
    rows, size, pivots = _eliminate_units(rows, size)
    if size == 0:
        return LaurentPoly.one()
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    if size > min(nrows, ncols):
        return LaurentPoly.zero()
    core = RingMatrix(rows, nrows, ncols)
    log.debug(f"minor gcd: {pivots} unit pivots, core {nrows}x{ncols}, size {size}")
    if ringmat_rank_deficient(core, size):
        return LaurentPoly.zero()

    dups = _row_dups(core)
    result = LaurentPoly.zero()
    consumed = 0
    for row_set in combinations(range(nrows), size):
        for col_set in combinations(range(ncols), size):
            consumed += 1
            if max_minors is not None and consumed > max_minors:
                raise MinorBudgetError(f"more than {max_minors} minors needed", consumed=consumed)
            minor = _bareiss([[dups[i][j] for j in col_set] for i in row_set])
            if not minor:
                continue
            result = lp_gcd(result, LaurentPoly.from_dup(minor))
            if result.is_unit():
                return LaurentPoly.one()
    return result


# Integer matrices

def _divisibility_chain(values: List[int]) -> List[int]:
    values = sorted(abs(v) for v in values if v)
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            a, b = values[i], values[j]
            g = gcd(a, b)
            values[i], values[j] = g, a // g * b
    return values


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    rows = [list(row) for row in matrix if any(row)]
    if not rows:
        return []
    keep = [j for j in range(len(rows[0])) if any(row[j] for row in rows)]
    rows = [[row[j] for j in keep] for row in rows]
    factors = invariant_factors(Matrix(rows), domain=ZZ)
    return _divisibility_chain([int(f) for f in factors])


def integer_cokernel(matrix: Sequence[Sequence[int]], cols: int) -> Tuple[int, List[int]]:
    """(free rank, torsion factors > 1) of Z^cols / row span."""
    factors = smith_normal_form(matrix)
    return cols - len(factors), [d for d in factors if d > 1]
