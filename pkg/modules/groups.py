# modules/groups.py
r"""Finitely presented groups.

Words, presentations and their text format, knot groups from PD codes (Wirtinger, longitude,
zero surgery), torus bundle groups, abelianization, HLT coset enumeration and
Reidemeister-Schreier rewriting.

PD convention: ``X(a,b,c,d)`` lists the edges counterclockwise starting from the incoming
under-edge ``a``; ``c`` is the outgoing under-edge and ``b``/``d`` belong to the over-strand.
The crossing is positive when the over-strand runs from ``b`` to ``d``. The standard trefoil
``X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)`` has three positive crossings::

          4  ___  5
            \   /          at X(1,4,2,5) the under-strand enters on 1 and leaves on 2,
      1 ---->\ /----> 2    the over-strand runs 4 -> 5, so the crossing is positive
              /\
"""
from __future__ import annotations

import re
from collections import deque
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from modules.errors import (
    CosetBudgetError,
    IncompleteTableError,
    InvalidArgumentError,
    InvalidMonodromyError,
    PDParseError,
    PresentationParseError,
)
from modules.logging_utils import log_function_call, app_logger as log
from modules.ring import integer_cokernel
from modules.settings import settings

PERIPHERAL_NAMES = ("meridian", "longitude", "fiber_s1", "fiber_s2", "dual_knot")


class Word:
    """Freely reduced word: a tuple of (generator index, nonzero exponent) pairs."""

    __slots__ = ("syllables",)

    def __init__(self, syllables: Iterable[Tuple[int, int]] = ()):
        stack: List[List[int]] = []
        for gen, exp in syllables:
            if gen < 0:
                raise InvalidArgumentError(f"negative generator index {gen}")
            if exp == 0:
                continue
            if stack and stack[-1][0] == gen:
                stack[-1][1] += exp
                if stack[-1][1] == 0:
                    stack.pop()
            else:
                stack.append([gen, exp])
        self.syllables: Tuple[Tuple[int, int], ...] = tuple((g, e) for g, e in stack)

    @classmethod
    def gen(cls, index: int, exp: int = 1) -> "Word":
        return cls([(index, exp)])

    @classmethod
    def identity(cls) -> "Word":
        return cls()

    @classmethod
    def from_letters(cls, letters: Iterable[Tuple[int, int]]) -> "Word":
        return cls(letters)

    def letters(self) -> List[Tuple[int, int]]:
        """Expanded letters (generator, ±1)."""
        out = []
        for gen, exp in self.syllables:
            step = 1 if exp > 0 else -1
            out.extend([(gen, step)] * abs(exp))
        return out

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.syllables))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.syllables * abs(n))

    def __len__(self):
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self):
        return bool(self.syllables)

    def __eq__(self, other):
        return isinstance(other, Word) and self.syllables == other.syllables

    def __hash__(self):
        return hash(self.syllables)

    def generators(self) -> set:
        return {g for g, _ in self.syllables}

    def exponent_vector(self, generators: int) -> List[int]:
        vector = [0] * generators
        for gen, exp in self.syllables:
            vector[gen] += exp
        return vector

    def __str__(self):
        return word_to_text(self)

    def __repr__(self):
        return f"Word({word_to_text(self)!r})"


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a b a^-1 b^-1"""
    return a * b * a.inverse() * b.inverse()


def word_to_text(word: Word) -> str:
    if not word.syllables:
        return "1"
    return " ".join(f"x{g + 1}" if e == 1 else f"x{g + 1}^{e}" for g, e in word.syllables)


_SYLLABLE = re.compile(r"^x(\d+)(?:\^(-?\d+))?$")


def word_from_text(text: str) -> Word:
    text = text.strip()
    if text in ("", "1"):
        return Word()
    syllables = []
    for token in text.split():
        match = _SYLLABLE.match(token)
        if not match or int(match.group(1)) < 1:
            raise PresentationParseError(f"bad word token {token!r}")
        syllables.append((int(match.group(1)) - 1, int(match.group(2) or 1)))
    return Word(syllables)


class Presentation:
    """Finitely presented group ⟨x1..xg | relators⟩ with named peripheral words."""

    __slots__ = ("generators", "relators", "peripherals")

    def __init__(self, generators: int, relators: Sequence[Word] = (),
                 peripherals: Optional[Dict[str, Word]] = None):
        if generators < 0:
            raise InvalidArgumentError("generator count must be nonnegative")
        self.generators = generators
        self.relators: Tuple[Word, ...] = tuple(relators)
        self.peripherals: Dict[str, Word] = dict(peripherals or {})
        for name in self.peripherals:
            if name not in PERIPHERAL_NAMES:
                raise InvalidArgumentError(f"unknown peripheral {name!r}")
        for word in list(self.relators) + list(self.peripherals.values()):
            if any(g >= generators for g in word.generators()):
                raise InvalidArgumentError(f"word {word} uses a generator beyond x{generators}")

    def with_relators(self, extra: Sequence[Word], peripherals: Optional[Dict[str, Word]] = None) -> "Presentation":
        merged = dict(self.peripherals)
        merged.update(peripherals or {})
        return Presentation(self.generators, self.relators + tuple(extra), merged)

    def without_relator(self, index: int) -> "Presentation":
        relators = self.relators[:index] + self.relators[index + 1:]
        return Presentation(self.generators, relators, self.peripherals)

    def relation_matrix(self) -> List[List[int]]:
        return [r.exponent_vector(self.generators) for r in self.relators]

    def to_text(self) -> str:
        lines = [f"gens: {self.generators}"]
        lines += [f"rel: {word_to_text(r)}" for r in self.relators]
        lines += [f"peripheral {name}: {word_to_text(w)}" for name, w in self.peripherals.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Presentation":
        generators = None
        relators = []
        peripherals = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise PresentationParseError(f"expected 'key: value', got {line!r}")
            key = key.strip()
            if key == "gens":
                generators = int(value)
            elif key == "rel":
                relators.append(word_from_text(value))
            elif key.startswith("peripheral "):
                peripherals[key[len("peripheral "):].strip()] = word_from_text(value)
            else:
                raise PresentationParseError(f"unknown key {key!r}")
        if generators is None:
            raise PresentationParseError("missing 'gens:' line")
        return cls(generators, relators, peripherals)

    def __eq__(self, other):
        return (isinstance(other, Presentation) and self.generators == other.generators
                and self.relators == other.relators and self.peripherals == other.peripherals)

    def __repr__(self):
        return f"Presentation(gens={self.generators}, relators={len(self.relators)})"


@log_function_call
def abelianization(p: Presentation) -> Tuple[int, List[int]]:
    """(free rank, torsion invariant factors > 1) of p."""
    return integer_cokernel(p.relation_matrix(), p.generators)


# Knot diagrams

class PDCode:
    """Planar diagram code: a tuple of crossings X(a,b,c,d)."""

    __slots__ = ("crossings",)

    def __init__(self, crossings: Iterable[Sequence[int]] = ()):
        self.crossings: Tuple[Tuple[int, int, int, int], ...] = tuple(tuple(int(v) for v in x) for x in crossings)
        self._validate()

    def _validate(self):
        n = len(self.crossings)
        counts: Dict[int, int] = {}
        for crossing in self.crossings:
            if len(crossing) != 4:
                raise PDParseError(f"crossing {crossing} does not have four labels")
            for label in crossing:
                counts[label] = counts.get(label, 0) + 1
        if n and sorted(counts) != list(range(1, 2 * n + 1)):
            raise PDParseError(f"labels must be exactly 1..{2 * n}")
        bad = [label for label, c in counts.items() if c != 2]
        if bad:
            raise PDParseError(f"labels {sorted(bad)} do not appear exactly twice")
        for a, b, c, d in self.crossings:
            if c != self.next_label(a):
                raise PDParseError(f"X({a},{b},{c},{d}): outgoing under-edge must follow {a}")
            if d != self.next_label(b) and b != self.next_label(d):
                raise PDParseError(f"X({a},{b},{c},{d}): over-edges are not consecutive")

    def __len__(self):
        return len(self.crossings)

    def next_label(self, label: int) -> int:
        return label % (2 * len(self.crossings)) + 1

    def sign(self, index: int) -> int:
        _, b, _, d = self.crossings[index]
        return 1 if d == self.next_label(b) else -1

    def writhe(self) -> int:
        return sum(self.sign(i) for i in range(len(self.crossings)))

    def __eq__(self, other):
        return isinstance(other, PDCode) and self.crossings == other.crossings

    def __hash__(self):
        return hash(self.crossings)

    def __str__(self):
        return pd_to_text(self)

    def __repr__(self):
        return f"PDCode({pd_to_text(self)})"


def pd_to_text(pd: PDCode) -> str:
    return ";".join(f"X({a},{b},{c},{d})" for a, b, c, d in pd.crossings)


_CROSSING = re.compile(r"X\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def pd_from_text(text: str) -> PDCode:
    text = text.strip()
    if not text:
        return PDCode()
    crossings = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        match = _CROSSING.fullmatch(chunk)
        if not match:
            raise PDParseError(f"cannot parse crossing {chunk!r}")
        crossings.append(tuple(int(v) for v in match.groups()))
    return PDCode(crossings)


def pd_from_braid(braid: Sequence[int]) -> PDCode:
    """PD code of the closure of a braid word (σ_i written as i, σ_i^-1 as -i).

    Raises InvalidArgumentError when the closure has more than one component.
    """
    braid = [int(s) for s in braid]
    if not braid:
        return PDCode()
    if any(s == 0 for s in braid):
        raise InvalidArgumentError("braid letters are nonzero")
    c = len(braid)
    # for each crossing: incoming/outgoing labels by position side ('a' left, 'b' right)
    labels: List[Dict[str, int]] = [{} for _ in range(c)]

    def next_crossing(position: int, after: int) -> int:
        for step in range(1, c + 1):
            k = (after + step) % c
            left = abs(braid[k]) - 1
            if position in (left, left + 1):
                return k
        raise InvalidArgumentError(f"strand at position {position} never crosses")

    position = abs(braid[0]) - 1
    k = 0
    label = 1
    start = (k, position)
    visits = 0
    while True:
        left = abs(braid[k]) - 1
        side_in = "a" if position == left else "b"
        side_out = "b" if side_in == "a" else "a"
        labels[k]["in_" + side_in] = label
        labels[k]["out_" + side_out] = label % (2 * c) + 1
        label += 1
        visits += 1
        position = left + 1 if side_out == "b" else left
        k = next_crossing(position, k)
        if (k, position) == start or visits > 2 * c:
            break
    if visits != 2 * c:
        raise InvalidArgumentError("braid closure is a link, not a knot")

    crossings = []
    for k, s in enumerate(braid):
        lab = labels[k]
        if s > 0:
            # left strand passes over
            crossings.append((lab["in_b"], lab["in_a"], lab["out_a"], lab["out_b"]))
        else:
            crossings.append((lab["in_a"], lab["out_a"], lab["out_b"], lab["in_b"]))
    return PDCode(crossings)


def _arcs(pd: PDCode) -> Dict[int, int]:
    """Map edge label -> arc (generator) index; arcs are numbered by their smallest label."""
    parent = {label: label for label in range(1, 2 * len(pd) + 1)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, b, _, d in pd.crossings:
        rb, rd = find(b), find(d)
        if rb != rd:
            parent[max(rb, rd)] = min(rb, rd)
    roots = sorted({find(label) for label in parent})
    index = {root: i for i, root in enumerate(roots)}
    return {label: index[find(label)] for label in parent}


@log_function_call
def wirtinger_from_pd(pd: PDCode) -> Presentation:
    """Wirtinger presentation, one generator per arc and one relator per crossing.

    At a crossing with sign ε and over-arc y, the relator is y^-ε x_in y^ε x_out^-1.
    """
    if not len(pd):
        return Presentation(1, [], {"meridian": Word.gen(0)})
    arc = _arcs(pd)
    generators = max(arc.values()) + 1
    relators = []
    for i, (a, b, c, _) in enumerate(pd.crossings):
        eps = pd.sign(i)
        y = Word.gen(arc[b])
        relators.append(y ** -eps * Word.gen(arc[a]) * y ** eps * Word.gen(arc[c], -1))
    return Presentation(generators, relators, {"meridian": Word.gen(arc[1])})


@log_function_call
def longitude_word(pd: PDCode) -> Word:
    """Zero-framed longitude based at edge 1.

    Walk the knot from edge 1, collect y^ε for every under-passage, then correct the
    blackboard framing by meridian^-writhe.
    """
    if not len(pd):
        return Word()
    arc = _arcs(pd)
    under_at = {a: i for i, (a, _, _, _) in enumerate(pd.crossings)}
    walk = Word()
    for label in range(1, 2 * len(pd) + 1):
        i = under_at.get(label)
        if i is None:
            continue
        over = pd.crossings[i][1]
        walk = walk * Word.gen(arc[over], pd.sign(i))
    return walk * Word.gen(arc[1], -pd.writhe())


def knot_group(pd: PDCode) -> Presentation:
    """Wirtinger presentation with both peripheral words recorded."""
    base = wirtinger_from_pd(pd)
    return base.with_relators([], {"longitude": longitude_word(pd)})


@log_function_call
def zero_surgery_presentation(knot: PDCode) -> Presentation:
    """π₁ of the zero surgery: the knot group with the longitude killed.

    The dual knot is recorded as the meridian word; only its conjugacy class is meaningful.
    """
    base = knot_group(knot)
    longitude = base.peripherals["longitude"]
    extra = [longitude] if longitude else []
    return base.with_relators(extra, {"dual_knot": base.peripherals["meridian"]})


# Torus bundles

def _check_sl2(matrix: Sequence[Sequence[int]]):
    if len(matrix) != 2 or any(len(row) != 2 for row in matrix):
        raise InvalidMonodromyError(f"{matrix} is not 2x2")
    (a, b), (c, d) = matrix
    if a * d - b * c != 1:
        raise InvalidMonodromyError(f"{matrix} has determinant {a * d - b * c}, expected 1")


def _matmul2(x, y):
    return [[x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
            [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]]]


def _matpow2(m, n: int):
    result = [[1, 0], [0, 1]]
    for _ in range(n):
        result = _matmul2(result, m)
    return result


@log_function_call
def torus_bundle_presentation(monodromy: Sequence[Sequence[Sequence[int]]], euler: Tuple[int, int]) -> Presentation:
    """π₁ of the torus bundle over a genus-g surface with the given monodromy and Euler class.

    Generators: s1 = x1, s2 = x2, t_i = x(i+2). Relators: [s1,s2]; t_i s_j t_i^-1 ρ(a_i)(s_j)^-1;
    s1^m s2^n (∏[t_{2k-1}, t_{2k}])^-1.
    """
    if len(monodromy) < 2 or len(monodromy) % 2:
        raise InvalidMonodromyError(f"need 2g >= 2 matrices, got {len(monodromy)}")
    for matrix in monodromy:
        _check_sl2(matrix)
    m, n = euler
    s = [Word.gen(0), Word.gen(1)]
    t = [Word.gen(2 + i) for i in range(len(monodromy))]
    relators = [commutator(s[0], s[1])]
    for i, matrix in enumerate(monodromy):
        for j in range(2):
            image = s[0] ** matrix[0][j] * s[1] ** matrix[1][j]
            relators.append(t[i] * s[j] * t[i].inverse() * image.inverse())
    surface = Word()
    for k in range(len(monodromy) // 2):
        surface = surface * commutator(t[2 * k], t[2 * k + 1])
    relators.append(s[0] ** m * s[1] ** n * surface.inverse())
    return Presentation(2 + len(monodromy), relators, {"fiber_s1": s[0], "fiber_s2": s[1]})


def torus_bundle_pullback(monodromy: Sequence[Sequence[Sequence[int]]], euler: Tuple[int, int],
                          l: int) -> Presentation:
    """Genus-1 bundle pulled back along the l-fold cover of the base in which a₁ lifts to a₁^l.

    The monodromy becomes (ρ(a₁)^l, ρ(a₂)) and the Euler class is multiplied by l. Higher genus
    covers have more handles than the base, so they are not built here.
    """
    if l < 1:
        raise InvalidArgumentError(f"cover degree must be positive, got {l}")
    if len(monodromy) < 2 or len(monodromy) % 2:
        raise InvalidMonodromyError(f"need 2g >= 2 matrices, got {len(monodromy)}")
    if len(monodromy) > 2:
        raise InvalidArgumentError(f"pullbacks are built for genus 1 only, got genus {len(monodromy) // 2}")
    for matrix in monodromy:
        _check_sl2(matrix)
    monodromy = [_matpow2(monodromy[0], l), [list(r) for r in monodromy[1]]]
    m, n = euler
    return torus_bundle_presentation(monodromy, (l * m, l * n))


def bundle_index_subgroup(genus: int, l: int) -> List[Word]:
    """Generators s1^l, s2^l, t1, ..., t_2g of the subgroup whose index is l²."""
    return [Word.gen(0, l), Word.gen(1, l)] + [Word.gen(2 + i) for i in range(2 * genus)]


# Coset enumeration

class CosetTable:
    """Complete coset table. Column 2*i is generator i, column 2*i+1 its inverse."""

    def __init__(self, generators: int, rows: List[List[Optional[int]]], complete: bool = True):
        self.generators = generators
        self.rows = rows
        self.complete = complete and all(v is not None for row in rows for v in row)

    @property
    def index(self) -> int:
        return len(self.rows)

    def act(self, coset: int, letter: Tuple[int, int]) -> int:
        gen, sign = letter
        return self.rows[coset][2 * gen + (0 if sign > 0 else 1)]

    def trace(self, coset: int, word: Word) -> int:
        for letter in word.letters():
            coset = self.act(coset, letter)
        return coset

    def permutation(self, gen: int) -> List[int]:
        return [row[2 * gen] for row in self.rows]

    def __repr__(self):
        return f"CosetTable(index={self.index}, complete={self.complete})"


def _columns(word: Word) -> List[int]:
    return [2 * g + (0 if s > 0 else 1) for g, s in word.letters()]


class _Enumerator:
    """HLT coset enumeration with coincidence processing."""

    def __init__(self, generators: int, max_cosets: int):
        self.width = 2 * generators
        self.max_cosets = max_cosets
        self.table: List[List[Optional[int]]] = [[None] * self.width]
        self.parent = [0]

    @staticmethod
    def inv(col: int) -> int:
        return col ^ 1

    def live(self, coset: int) -> bool:
        return self.parent[coset] == coset

    def define(self, coset: int, col: int):
        if len(self.table) >= self.max_cosets:
            raise CosetBudgetError(f"coset budget {self.max_cosets} exhausted", defined=len(self.table))
        new = len(self.table)
        self.table.append([None] * self.width)
        self.parent.append(new)
        self.table[coset][col] = new
        self.table[new][self.inv(col)] = coset

    def rep(self, coset: int) -> int:
        root = coset
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[coset] != root:
            self.parent[coset], coset = root, self.parent[coset]
        return root

    def merge(self, a: int, b: int, queue: deque):
        ra, rb = self.rep(a), self.rep(b)
        if ra != rb:
            low, high = min(ra, rb), max(ra, rb)
            self.parent[high] = low
            queue.append(high)

    def coincidence(self, a: int, b: int):
        queue: deque = deque()
        self.merge(a, b, queue)
        while queue:
            gamma = queue.popleft()
            for col in range(self.width):
                delta = self.table[gamma][col]
                if delta is None:
                    continue
                self.table[delta][self.inv(col)] = None
                mu, nu = self.rep(gamma), self.rep(delta)
                if self.table[mu][col] is not None:
                    self.merge(nu, self.table[mu][col], queue)
                elif self.table[nu][self.inv(col)] is not None:
                    self.merge(mu, self.table[nu][self.inv(col)], queue)
                else:
                    self.table[mu][col] = nu
                    self.table[nu][self.inv(col)] = mu

    def scan_and_fill(self, coset: int, word: List[int]):
        table = self.table
        f, b = coset, coset
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][self.inv(word[j])] is not None:
                b = table[b][self.inv(word[j])]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][self.inv(word[i])] = f
                return
            self.define(f, word[i])

    def run(self, relators: List[List[int]], subgroup: List[List[int]]):
        for word in subgroup:
            self.scan_and_fill(0, word)
        alpha = 0
        while alpha < len(self.table):
            if self.live(alpha):
                for word in relators:
                    self.scan_and_fill(alpha, word)
                    if not self.live(alpha):
                        break
                if self.live(alpha):
                    for col in range(self.width):
                        if self.table[alpha][col] is None:
                            self.define(alpha, col)
            alpha += 1

    def compressed(self) -> List[List[int]]:
        alive = [c for c in range(len(self.table)) if self.live(c)]
        renumber = {c: i for i, c in enumerate(alive)}
        return [[renumber[self.rep(v)] for v in self.table[c]] for c in alive]


def standardize(rows: List[List[int]]) -> List[List[int]]:
    """Renumber cosets in breadth-first order from coset 0, columns scanned left to right."""
    order = {0: 0}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for target in rows[c]:
            if target not in order:
                order[target] = len(order)
                queue.append(target)
    if len(order) != len(rows):
        raise IncompleteTableError("coset table is not transitive")
    out = [None] * len(rows)
    for old, new in order.items():
        out[new] = [order[v] for v in rows[old]]
    return out


@log_function_call
def todd_coxeter(p: Presentation, subgroup_generators: Sequence[Word],
                 max_cosets: Optional[int] = None) -> CosetTable:
    """Enumerate the cosets of ⟨subgroup_generators⟩ in p (HLT strategy).

    Raises CosetBudgetError when more than ``max_cosets`` cosets would be defined; that says
    nothing about whether the index is finite.
    """
    max_cosets = settings.MAX_COSETS if max_cosets is None else max_cosets
    if max_cosets < 1:
        raise InvalidArgumentError("max_cosets must be at least 1")
    enumerator = _Enumerator(p.generators, max_cosets)
    enumerator.run([_columns(r) for r in p.relators if r], [_columns(w) for w in subgroup_generators if w])
    rows = standardize(enumerator.compressed())
    log.info(f"coset enumeration: index {len(rows)} after {len(enumerator.table)} definitions")
    return CosetTable(p.generators, rows)


def coset_table_from_action(generators: int, images: Sequence[Sequence[int]]) -> CosetTable:
    """Complete table of a transitive permutation action; images[g][c] = c·x_g."""
    if not images:
        return CosetTable(0, [[]])
    size = len(images[0])
    rows = []
    for c in range(size):
        row = []
        for g in range(generators):
            forward = images[g]
            row.append(forward[c])
            row.append(forward.index(c))
        rows.append(row)
    return CosetTable(generators, standardize(rows))


# Reidemeister-Schreier

class SchreierSystem:
    """Spanning tree of a coset table with its Schreier generators.

    ``representatives[c]`` is the tree word reaching coset c; ``generator_index[(c, g)]`` numbers
    the nontrivial Schreier generator rep(c)·x_g·rep(c·x_g)^-1.
    """

    def __init__(self, table: CosetTable):
        if not table.complete:
            raise IncompleteTableError("Reidemeister-Schreier needs a complete coset table")
        self.table = table
        self.representatives: List[Optional[Word]] = [None] * table.index
        self.representatives[0] = Word()
        tree = set()
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for col, target in enumerate(table.rows[c]):
                if self.representatives[target] is None:
                    gen, sign = col // 2, (1 if col % 2 == 0 else -1)
                    self.representatives[target] = self.representatives[c] * Word.gen(gen, sign)
                    # record the tree edge by its positive orientation
                    tree.add((c, gen) if sign > 0 else (target, gen))
                    queue.append(target)
        self.generator_index: Dict[Tuple[int, int], int] = {}
        self.generator_words: List[Word] = []
        for c in range(table.index):
            for gen in range(table.generators):
                if (c, gen) in tree:
                    continue
                target = table.rows[c][2 * gen]
                self.generator_index[(c, gen)] = len(self.generator_words)
                self.generator_words.append(
                    self.representatives[c] * Word.gen(gen) * self.representatives[target].inverse())

    def rewrite(self, coset: int, word: Word) -> Word:
        """Rewrite ``word`` read from ``coset`` in the Schreier generators."""
        syllables = []
        for gen, sign in word.letters():
            if sign > 0:
                index = self.generator_index.get((coset, gen))
                if index is not None:
                    syllables.append((index, 1))
                coset = self.table.rows[coset][2 * gen]
            else:
                source = self.table.rows[coset][2 * gen + 1]
                index = self.generator_index.get((source, gen))
                if index is not None:
                    syllables.append((index, -1))
                coset = source
        return Word(syllables)


@log_function_call
def reidemeister_schreier(p: Presentation, table: CosetTable) -> Presentation:
    """Presentation of the subgroup described by a complete coset table.

    One rewritten relator per (coset, relator) pair, so relator counts are exactly
    index * len(p.relators).
    """
    system = SchreierSystem(table)
    relators = [system.rewrite(c, r) for c in range(table.index) for r in p.relators]
    return Presentation(len(system.generator_words), relators)
