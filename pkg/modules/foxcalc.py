# modules/foxcalc.py
"""Fox calculus and (twisted) Alexander polynomials.

A TwistedRep sends generator x to alpha(x) * t^phi(x), an n x n matrix over Z[t^{±1}].
Representations are homomorphisms for matrix multiplication, so the Fox derivative obeys
d(uv) = du + rep(u) dv and the fundamental identity sum_j (dw/dx_j)(rep(x_j) - I) = rep(w) - I.
Blocks of the Alexander matrix are indexed (relator, generator), as in Wada's convention.
"""
from __future__ import annotations

from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix

from modules.errors import (
    DegeneratePresentationError,
    InvalidArgumentError,
    InvalidRepresentationError,
    UnsupportedBettiError,
    UnsupportedRankError,
)
from modules.groups import Presentation, Word
from modules.logging_utils import log_function_call, app_logger as log
from modules.ring import (
    LaurentPoly,
    RingMatrix,
    lp_exact_div,
    lp_normalize,
    ringmat_det,
    ringmat_minor_gcd,
    ringmat_rank_deficient,
)
from modules.settings import settings

IntMatrix = List[List[int]]


def _int_identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _int_matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * n
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def _is_permutation_matrix(m: IntMatrix) -> bool:
    return all(sorted(row) == [0] * (len(row) - 1) + [1] for row in m) and all(
        sum(m[i][j] for i in range(len(m))) == 1 for j in range(len(m)))


def _int_inverse(m: IntMatrix) -> IntMatrix:
    if _is_permutation_matrix(m):
        return [list(col) for col in zip(*m)]
    inverse = Matrix(m).inv()
    return [[int(inverse[i, j]) for j in range(len(m))] for i in range(len(m))]


class TwistedRep:
    """Representation x_i -> alpha[i] * t^phi[i] into GL(n, Z[t1^{±1}, ..., tk^{±1}]).

    Args:
        alpha: one n x n integer matrix per generator, determinant ±1
        phi: one exponent vector of length k per generator
    """

    def __init__(self, alpha: Sequence[Sequence[Sequence[int]]], phi: Sequence[Sequence[int]]):
        if len(alpha) != len(phi):
            raise InvalidArgumentError("alpha and phi must cover the same generators")
        self.alpha: List[IntMatrix] = [[list(map(int, row)) for row in m] for m in alpha]
        self.phi: List[Tuple[int, ...]] = [tuple(int(e) for e in v) for v in phi]
        self.dimension = len(self.alpha[0]) if self.alpha else 1
        self.rank = len(self.phi[0]) if self.phi else 1
        for m in self.alpha:
            if len(m) != self.dimension or any(len(row) != self.dimension for row in m):
                raise InvalidArgumentError(f"alpha matrices must all be {self.dimension}x{self.dimension}")
            if not _is_permutation_matrix(m) and abs(Matrix(m).det()) != 1:
                raise InvalidArgumentError("alpha matrices must be invertible over Z")
        if any(len(v) != self.rank for v in self.phi):
            raise InvalidArgumentError("phi vectors must share one rank")
        self._alpha_inverse: Dict[int, IntMatrix] = {}
        self._images: Dict[Tuple[int, int], RingMatrix] = {}

    @property
    def generators(self) -> int:
        return len(self.alpha)

    def _check_gen(self, gen: int):
        if not 0 <= gen < self.generators:
            raise InvalidArgumentError(f"generator {gen} out of range for a rep on {self.generators} generators")

    def alpha_letter(self, gen: int, sign: int) -> IntMatrix:
        self._check_gen(gen)
        if sign > 0:
            return self.alpha[gen]
        if gen not in self._alpha_inverse:
            self._alpha_inverse[gen] = _int_inverse(self.alpha[gen])
        return self._alpha_inverse[gen]

    def image(self, gen: int, sign: int = 1) -> RingMatrix:
        """(alpha ⊗ phi)(x_gen^sign)"""
        key = (gen, sign)
        if key not in self._images:
            m = self.alpha_letter(gen, sign)
            exps = tuple(sign * e for e in self.phi[gen])
            zero = LaurentPoly.zero(self.rank)
            entries = [[LaurentPoly({exps: a}, self.rank) if a else zero for a in row] for row in m]
            self._images[key] = RingMatrix(entries, self.dimension, self.dimension, self.rank)
        return self._images[key]

    def word_image(self, word: Word) -> RingMatrix:
        result = RingMatrix.identity(self.dimension, self.rank)
        for gen, sign in word.letters():
            result = result * self.image(gen, sign)
        return result

    def word_alpha(self, word: Word) -> IntMatrix:
        result = _int_identity(self.dimension)
        for gen, sign in word.letters():
            result = _int_matmul(result, self.alpha_letter(gen, sign))
        return result

    def word_phi(self, word: Word) -> Tuple[int, ...]:
        total = [0] * self.rank
        for gen, exp in word.syllables:
            self._check_gen(gen)
            for i, e in enumerate(self.phi[gen]):
                total[i] += exp * e
        return tuple(total)

    def __repr__(self):
        return f"TwistedRep(n={self.dimension}, rank={self.rank}, generators={self.generators})"


def trivial_rep(phi: Sequence[Sequence[int]]) -> TwistedRep:
    """One-dimensional rep: alpha trivial, phi as given."""
    return TwistedRep([[[1]] for _ in phi], phi)


def check_rep(p: Presentation, rep: TwistedRep):
    """Raise InvalidRepresentationError unless rep kills every relator of p."""
    if rep.generators != p.generators:
        raise InvalidRepresentationError(f"rep covers {rep.generators} generators, presentation has {p.generators}")
    identity = _int_identity(rep.dimension)
    for index, relator in enumerate(p.relators):
        if any(rep.word_phi(relator)):
            raise InvalidRepresentationError(f"phi does not kill relator {index + 1}: {relator}")
        if rep.word_alpha(relator) != identity:
            raise InvalidRepresentationError(f"alpha does not kill relator {index + 1}: {relator}")


def _fox_row(word: Word, rep: TwistedRep) -> Dict[int, RingMatrix]:
    """All nonzero Fox derivatives of one word, in a single left-to-right pass."""
    prefix = RingMatrix.identity(rep.dimension, rep.rank)
    derivatives: Dict[int, RingMatrix] = {}
    for gen, sign in word.letters():
        rep._check_gen(gen)
        if sign > 0:
            term = prefix
            prefix = prefix * rep.image(gen, 1)
        else:
            prefix = prefix * rep.image(gen, -1)
            term = -prefix
        derivatives[gen] = derivatives[gen] + term if gen in derivatives else term
    return derivatives


def fox_derivative(word: Word, gen: int, rep: TwistedRep) -> RingMatrix:
    """Image of dw/dx_gen under rep, an n x n block."""
    rep._check_gen(gen)
    block = _fox_row(word, rep).get(gen)
    return block if block is not None else RingMatrix.zeros(rep.dimension, rep.dimension, rep.rank)


class AlexanderMatrix:
    """Block matrix of Fox derivatives: block (i, j) is the image of dr_i/dx_j."""

    def __init__(self, matrix: RingMatrix, relators: int, generators: int, dimension: int):
        self.matrix = matrix
        self.relators = relators
        self.generators = generators
        self.dimension = dimension

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.rows, self.matrix.cols

    def block(self, i: int, j: int) -> RingMatrix:
        n = self.dimension
        return self.matrix.submatrix(range(i * n, (i + 1) * n), range(j * n, (j + 1) * n))

    def delete_generator(self, j: int) -> RingMatrix:
        n = self.dimension
        return self.matrix.delete_columns(range(j * n, (j + 1) * n))


@log_function_call
def fox_jacobian(p: Presentation, rep: TwistedRep) -> RingMatrix:
    n = rep.dimension
    zero = RingMatrix.zeros(n, n, rep.rank)
    grid = []
    for relator in p.relators:
        row = _fox_row(relator, rep)
        grid.append([row.get(j, zero) for j in range(p.generators)])
    return RingMatrix.blocks(grid, len(p.relators), p.generators, n, rep.rank)


def twisted_alexander_matrix(p: Presentation, rep: TwistedRep) -> AlexanderMatrix:
    check_rep(p, rep)
    matrix = fox_jacobian(p, rep)
    log.debug(f"Alexander matrix {matrix.rows}x{matrix.cols} (n={rep.dimension})")
    return AlexanderMatrix(matrix, len(p.relators), p.generators, rep.dimension)


def correction_block(rep: TwistedRep, gen: int) -> RingMatrix:
    """rep(x_gen) - I"""
    return rep.image(gen) - RingMatrix.identity(rep.dimension, rep.rank)


def _deletable_generator(rep: TwistedRep, requested: Optional[int]) -> Tuple[int, LaurentPoly]:
    candidates = range(rep.generators) if requested is None else [requested]
    for j in candidates:
        rep._check_gen(j)
        correction = ringmat_det(correction_block(rep, j))
        if not correction.is_zero():
            return j, correction
    if requested is not None:
        raise DegeneratePresentationError(f"det(rep(x{requested + 1}) - I) vanishes; cannot delete that generator")
    raise DegeneratePresentationError("det(rep(x_j) - I) vanishes for every generator")


class TwistedAlexanderResult:
    """Outcome of one twisted Alexander computation.

    ``polynomial`` is minor_gcd / correction when that division is exact and minor_gcd
    otherwise. ``module_order`` (order of the first twisted homology) is filled in only when
    requested, because it needs the extra h0_order gcd.
    """

    def __init__(self, polynomial: LaurentPoly, minor_gcd: LaurentPoly, correction: LaurentPoly,
                 correction_exact: bool, deleted_generator: int, dimension: int,
                 h0_order: Optional[LaurentPoly] = None, module_order: Optional[LaurentPoly] = None):
        self.polynomial = polynomial
        self.minor_gcd = minor_gcd
        self.correction = correction
        self.correction_exact = correction_exact
        self.deleted_generator = deleted_generator
        self.dimension = dimension
        self.h0_order = h0_order
        self.module_order = module_order

    @property
    def vanishes(self) -> bool:
        return self.minor_gcd.is_zero()

    def to_text(self) -> str:
        lines = [str(self.polynomial),
                 f"deleted_generator: {self.deleted_generator + 1}",
                 f"correction_exact: {'yes' if self.correction_exact else 'no'}"]
        return "\n".join(lines)

    def __repr__(self):
        return f"TwistedAlexanderResult({self.polynomial}, deleted=x{self.deleted_generator + 1})"


def h0_order(rep: TwistedRep, max_minors: Optional[int] = None) -> LaurentPoly:
    """Order of H0: gcd of the maximal minors of the stacked blocks rep(x_j) - I."""
    n = rep.dimension
    rows = []
    for j in range(rep.generators):
        rows.extend(correction_block(rep, j).entries)
    stacked = RingMatrix(rows, len(rows), n, rep.rank)
    if stacked.rows < n:
        return LaurentPoly.zero(rep.rank)
    return ringmat_minor_gcd(stacked, n, max_minors=max_minors)


@log_function_call
def twisted_alexander(p: Presentation, rep: TwistedRep, deleted_generator: Optional[int] = None,
                      max_minors: Optional[int] = None, with_module_order: bool = False) -> TwistedAlexanderResult:
    """Twisted Alexander polynomial of p with respect to rep (rank 1 only).

    Deletes the column block of the first generator whose correction det(rep(x_j) - I) is
    nonzero (or ``deleted_generator`` when given) and takes the gcd of the maximal minors of
    what is left.
    """
    if rep.rank != 1:
        raise UnsupportedRankError("twisted Alexander polynomials need a rank-1 phi")
    max_minors = settings.MAX_MINORS if max_minors is None else max_minors
    alexander = twisted_alexander_matrix(p, rep)
    j, correction = _deletable_generator(rep, deleted_generator)
    reduced = alexander.delete_generator(j)
    size = (p.generators - 1) * rep.dimension
    if size > reduced.rows:
        minor_gcd = LaurentPoly.zero()
    else:
        minor_gcd = ringmat_minor_gcd(reduced, size, max_minors=max_minors)

    quotient = lp_exact_div(minor_gcd, correction)
    exact = quotient is not None
    polynomial = lp_normalize(quotient if exact else minor_gcd)
    if not exact:
        log.debug(f"correction {correction} does not divide {minor_gcd}; keeping the minor gcd")

    h0 = module_order = None
    if with_module_order:
        h0 = h0_order(rep, max_minors=max_minors)
        order = lp_exact_div(minor_gcd * h0, correction)
        module_order = lp_normalize(order) if order is not None else None
        if order is None:
            log.warning(f"module order is not a polynomial: ({minor_gcd})*({h0})/({correction})")
    return TwistedAlexanderResult(polynomial, minor_gcd, lp_normalize(correction), exact, j, rep.dimension,
                                  h0, module_order)


@log_function_call
def twisted_vanishes(p: Presentation, rep: TwistedRep, deleted_generator: Optional[int] = None) -> bool:
    """Exact decision of twisted Δ = 0 by rank, without expanding any minor."""
    if rep.rank != 1:
        raise UnsupportedRankError("twisted Alexander polynomials need a rank-1 phi")
    alexander = twisted_alexander_matrix(p, rep)
    j, _ = _deletable_generator(rep, deleted_generator)
    reduced = alexander.delete_generator(j)
    size = (p.generators - 1) * rep.dimension
    if size > reduced.rows:
        return True
    if size == 0:
        return False
    return ringmat_rank_deficient(reduced, size)


def abelian_phi(p: Presentation) -> List[int]:
    """Positive generator of H^1(p; Z) as exponents per generator (b1 must be 1).

    Sign: the first nonzero exponent is positive.
    """
    rows = [row for row in p.relation_matrix() if any(row)]
    if rows:
        basis = Matrix(rows).nullspace()
    else:
        basis = [Matrix([1 if i == j else 0 for i in range(p.generators)]) for j in range(p.generators)]
    if len(basis) != 1:
        raise UnsupportedBettiError(f"need b1 = 1, presentation has b1 = {len(basis)}")
    vector = basis[0]
    denominator = 1
    for value in vector:
        denominator = denominator * value.q // gcd(denominator, value.q)
    ints = [int(value * denominator) for value in vector]
    divisor = 0
    for value in ints:
        divisor = gcd(divisor, value)
    ints = [value // divisor for value in ints]
    if next(value for value in ints if value) < 0:
        ints = [-value for value in ints]
    return ints


def alexander_polynomial(p: Presentation) -> LaurentPoly:
    """Untwisted Δ with phi the abelianization of a b1 = 1 presentation."""
    phi = abelian_phi(p)
    return twisted_alexander(p, trivial_rep([[e] for e in phi])).polynomial


def seifert_alexander(seifert: Sequence[Sequence[int]]) -> LaurentPoly:
    """Canonical det(V - t V^T). The empty matrix gives 1."""
    size = len(seifert)
    t = LaurentPoly.monomial([1])
    entries = [[LaurentPoly.constant(seifert[i][j]) - t * seifert[j][i] for j in range(size)] for i in range(size)]
    if not size:
        return LaurentPoly.one()
    return lp_normalize(ringmat_det(RingMatrix(entries, size, size)))


def rep_from_epimorphism(alpha, phi: Sequence[int]) -> TwistedRep:
    """Regular representation of alpha's target tensored with phi.

    alpha(x) acts on the basis of group elements by left multiplication.
    """
    group = alpha.group
    table = group.multiplication_table()
    order = group.order
    matrices = []
    for image in alpha.images:
        g = group.index_of(image)
        m = [[0] * order for _ in range(order)]
        for k in range(order):
            m[table[g][k]][k] = 1
        matrices.append(m)
    rep = TwistedRep(matrices, [[e] for e in phi])
    check_rep(alpha.presentation, rep)
    return rep
