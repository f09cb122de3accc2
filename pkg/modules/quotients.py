# modules/quotients.py
"""Finite permutation groups and epimorphisms onto them.

Products follow "left factor acts first": (g * h)(i) = h(g(i)). Words are evaluated left to
right with the same product, so relators, closures and regular representations agree.
"""
from __future__ import annotations

import re
import threading
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from modules.errors import EnumerationBudgetError, InvalidArgumentError
from modules.groups import Presentation, Word
from modules.logging_utils import log_function_call, app_logger as log
from modules.settings import settings


class Perm:
    """Permutation of {0..d-1}; ``images[i]`` is the image of i."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise InvalidArgumentError(f"{images} is not a permutation")
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int) -> "Perm":
        images = list(range(degree))
        for cycle in cycles:
            for k, point in enumerate(cycle):
                images[point] = cycle[(k + 1) % len(cycle)]
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Perm") -> "Perm":
        if other.degree != self.degree:
            raise InvalidArgumentError("degree mismatch")
        return Perm(other.images[i] for i in self.images)

    def inverse(self) -> "Perm":
        out = [0] * self.degree
        for i, j in enumerate(self.images):
            out[j] = i
        return Perm(out)

    def __pow__(self, n: int) -> "Perm":
        base = self if n >= 0 else self.inverse()
        result = Perm.identity(self.degree)
        for _ in range(abs(n)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            point = self.images[start]
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self.images[point]
            out.append(tuple(cycle))
        return out

    def order(self) -> int:
        return lcm(*[len(c) for c in self.cycles()]) if self.degree else 1

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __str__(self):
        """Cycle notation with points numbered from 1, e.g. (1 2)(3 4 5); identity is ()."""
        cycles = [c for c in self.cycles() if len(c) > 1]
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cycles)

    def __repr__(self):
        return f"Perm({self})"


_CYCLE = re.compile(r"\(([^()]*)\)")


def perm_from_text(text: str, degree: int) -> Perm:
    """Parse cycle notation with points numbered from 1 (``(1 2)(3 4 5)`` or ``(1,2)``)."""
    text = text.strip()
    if _CYCLE.sub("", text).strip():
        raise InvalidArgumentError(f"cannot parse permutation {text!r}")
    cycles = []
    for body in _CYCLE.findall(text):
        points = [int(p) - 1 for p in body.replace(",", " ").split()]
        if any(not 0 <= p < degree for p in points):
            raise InvalidArgumentError(f"point out of range in {text!r}")
        cycles.append(points)
    return Perm.from_cycles(cycles, degree)


def element_order(g: Perm) -> int:
    return g.order()


def closure(gens: Sequence[Perm], degree: Optional[int] = None) -> List[Perm]:
    """Breadth-first closure of gens from the identity under right multiplication."""
    if degree is None:
        if not gens:
            raise InvalidArgumentError("degree is needed when there are no generators")
        degree = gens[0].degree
    start = Perm.identity(degree)
    elements = [start]
    seen = {start}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g * s
            if h not in seen:
                seen.add(h)
                elements.append(h)
                queue.append(h)
    return elements


class FiniteGroup:
    """Permutation group given by generators; elements listed in closure order."""

    def __init__(self, name: str, degree: int, generators: Sequence[Perm]):
        self.name = name
        self.degree = degree
        self.generators = list(generators)
        self.elements = closure(self.generators, degree)
        self._index = {g: i for i, g in enumerate(self.elements)}
        self._table: Optional[List[List[int]]] = None
        self._inverse: Optional[List[int]] = None
        self._relative_rank: Dict[frozenset, int] = {}
        self._rank_lock = threading.RLock()

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, g: Perm) -> int:
        try:
            return self._index[g]
        except KeyError:
            raise InvalidArgumentError(f"{g} is not an element of {self.name}") from None

    def multiplication_table(self) -> List[List[int]]:
        """table[i][j] = index of elements[i] * elements[j]."""
        if self._table is None:
            self._table = [[self._index[g * h] for h in self.elements] for g in self.elements]
        return self._table

    def inverse_table(self) -> List[int]:
        if self._inverse is None:
            self._inverse = [self._index[g.inverse()] for g in self.elements]
        return self._inverse

    def subgroup_order(self, indices: Sequence[int]) -> int:
        """Order of the subgroup generated by the given element indices."""
        return len(self.subgroup(indices))

    def subgroup(self, indices: Sequence[int]) -> frozenset:
        """Element indices of the subgroup generated by the given element indices."""
        table = self.multiplication_table()
        seen = {0}
        queue = deque([0])
        while queue:
            g = queue.popleft()
            for s in indices:
                h = table[g][s]
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
        return frozenset(seen)

    def relative_rank(self, indices: Sequence[int] = ()) -> int:
        """Fewest extra elements that generate the group together with the given ones."""
        with self._rank_lock:
            return self._rank_of(self.subgroup(indices), tuple(indices))

    def _rank_of(self, subgroup: frozenset, gens: Tuple[int, ...]) -> int:
        cached = self._relative_rank.get(subgroup)
        if cached is not None:
            return cached
        if len(subgroup) == self.order:
            rank = 0
        else:
            rank = None
            for y in range(self.order):
                if y in subgroup:
                    continue
                larger = self.subgroup(gens + (y,))
                candidate = 1 + self._rank_of(larger, gens + (y,))
                if rank is None or candidate < rank:
                    rank = candidate
                if rank == 1:
                    break
        self._relative_rank[subgroup] = rank
        return rank

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def _cyclic(n: int) -> FiniteGroup:
    if n == 1:
        return FiniteGroup("Z1", 1, [])
    return FiniteGroup(f"Z{n}", n, [Perm([(i + 1) % n for i in range(n)])])


def _dihedral(n: int) -> FiniteGroup:
    rotation = Perm([(i + 1) % n for i in range(n)])
    reflection = Perm([(-i) % n for i in range(n)])
    return FiniteGroup(f"D{n}", n, [rotation, reflection])


def _named(name: str, degree: int, cycles: Sequence[Sequence[Sequence[int]]]) -> FiniteGroup:
    return FiniteGroup(name, degree, [Perm.from_cycles(c, degree) for c in cycles])


_SPECIAL = {
    "S3": lambda: _named("S3", 3, [[[0, 1]], [[0, 1, 2]]]),
    "S4": lambda: _named("S4", 4, [[[0, 1]], [[0, 1, 2, 3]]]),
    "A4": lambda: _named("A4", 4, [[[0, 1, 2]], [[1, 2, 3]]]),
    "A5": lambda: _named("A5", 5, [[[0, 1, 2, 3, 4]], [[0, 1, 2]]]),
    "S5": lambda: _named("S5", 5, [[[0, 1]], [[0, 1, 2, 3, 4]]]),
    "Z2xZ2": lambda: _named("Z2xZ2", 4, [[[0, 1]], [[2, 3]]]),
}

LARGE_GROUPS = {"S5"}

DEFAULT_CATALOG = ["Z2", "Z3", "Z4", "Z5", "Z6", "S3", "D4", "A4", "S4"]

_catalog_cache: Dict[str, FiniteGroup] = {}
_catalog_lock = threading.Lock()


def catalog_names() -> List[str]:
    return ([f"Z{n}" for n in range(1, 13)] + [f"D{n}" for n in range(3, 7)]
            + ["S3", "S4", "A4", "A5", "S5", "Z2xZ2"])


def catalog(name: str, allow_large: bool = False) -> FiniteGroup:
    """Catalog group by name: Z1..Z12, D3..D6, S3, S4, A4, A5, Z2xZ2, and S5 with allow_large."""
    name = name.strip()
    if name in LARGE_GROUPS and not allow_large:
        raise InvalidArgumentError(f"{name} is only available with allow_large=True")
    with _catalog_lock:
        if name in _catalog_cache:
            return _catalog_cache[name]
        group = None
        match = re.fullmatch(r"([ZD])(\d+)", name)
        if match:
            n = int(match.group(2))
            if match.group(1) == "Z" and 1 <= n <= 12:
                group = _cyclic(n)
            elif match.group(1) == "D" and 3 <= n <= 6:
                group = _dihedral(n)
        elif name in _SPECIAL:
            group = _SPECIAL[name]()
        if group is None:
            raise InvalidArgumentError(f"unknown group {name!r}; known: {', '.join(catalog_names())}")
        _catalog_cache[name] = group
        return group


class Epimorphism:
    """Surjection from a presentation onto a catalog group, one image per generator."""

    def __init__(self, presentation: Presentation, group: FiniteGroup, images: Sequence[Perm]):
        if len(images) != presentation.generators:
            raise InvalidArgumentError("one image per generator is required")
        self.presentation = presentation
        self.group = group
        self.images = list(images)

    def evaluate(self, word: Word) -> Perm:
        result = Perm.identity(self.group.degree)
        for gen, exp in word.syllables:
            result = result * self.images[gen] ** exp
        return result

    def is_valid(self) -> bool:
        """Relators map to the identity and the images generate the whole group."""
        if not all(self.evaluate(r).is_identity() for r in self.presentation.relators):
            return False
        return len(closure(self.images, self.group.degree)) == self.group.order

    def key(self) -> Tuple[int, ...]:
        return tuple(self.group.index_of(g) for g in self.images)

    def to_text(self) -> str:
        return "\n".join(f"x{i + 1} -> {g}" for i, g in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, Epimorphism) and self.group.name == other.group.name and self.images == other.images

    def __hash__(self):
        return hash((self.group.name, tuple(self.images)))

    def __repr__(self):
        return f"Epimorphism({self.group.name}: {', '.join(str(g) for g in self.images)})"


class _Budget:
    """Node counter shared by the enumeration workers."""

    def __init__(self, limit: int):
        self.limit = limit
        self.nodes = 0
        self.lock = threading.Lock()

    def spend(self, count: int = 1):
        with self.lock:
            self.nodes += count
            if self.nodes > self.limit:
                raise EnumerationBudgetError(f"epimorphism search exceeded {self.limit} nodes", nodes=self.nodes)


def _relator_schedule(p: Presentation) -> List[List[List[Tuple[int, int]]]]:
    """checks[k]: syllable lists of the relators whose largest generator is k."""
    checks: List[List[List[Tuple[int, int]]]] = [[] for _ in range(p.generators)]
    for relator in p.relators:
        if relator:
            checks[max(relator.generators())].append(list(relator.syllables))
    return checks


def _search_branch(p: Presentation, group: FiniteGroup, first: int, checks, budget: _Budget,
                   found: List[Tuple[int, ...]], rank: int):
    """Fill ``found`` with the epimorphisms sending x1 to element ``first``.

    Items are appended as they are found, so a budget error leaves the partial list in place.
    """
    table = group.multiplication_table()
    inverse = group.inverse_table()
    order = group.order
    g = p.generators
    assignment = [0] * g

    def power(index: int, exp: int) -> int:
        base = index if exp > 0 else inverse[index]
        value = 0
        for _ in range(abs(exp)):
            value = table[value][base]
        return value

    def relators_hold(level: int) -> bool:
        for syllables in checks[level]:
            value = 0
            for gen, exp in syllables:
                value = table[value][power(assignment[gen], exp)]
            if value != 0:
                return False
        return True

    def extend(level: int):
        budget.spend()
        if not relators_hold(level):
            return
        if level == g - 1:
            if group.subgroup_order(assignment) == order:
                found.append(tuple(assignment))
            return
        free = g - 1 - level
        if free < rank and group.relative_rank(assignment[:level + 1]) > free:
            return
        for candidate in range(order):
            assignment[level + 1] = candidate
            extend(level + 1)

    assignment[0] = first
    extend(0)


@log_function_call
def enumerate_epimorphisms(p: Presentation, group: FiniteGroup, budget: Optional[int] = None,
                           dedup: bool = False, threads: Optional[int] = None,
                           stats: Optional[Dict[str, int]] = None) -> List[Epimorphism]:
    """All epimorphisms p -> group, in canonical order.

    Backtracking assigns generators in presentation order and images in element-list order,
    checking each relator as soon as all its generators are assigned. A branch is cut when the
    images so far need more extra generators than there are unassigned generators. The search
    is split by the image of the first generator across a thread pool; the node budget is shared.

    ``stats["nodes"]`` receives the number of search nodes visited when a dict is passed.

    Raises:
        EnumerationBudgetError: with ``found`` holding the epimorphisms completed so far
    """
    budget = settings.EPI_BUDGET if budget is None else budget
    threads = settings.THREADS if threads is None else threads
    if p.generators == 0:
        keys = [()] if group.order == 1 else []
        nodes = 1
    else:
        checks = _relator_schedule(p)
        counter = _Budget(budget)
        rank = group.relative_rank()
        branches: List[List[Tuple[int, ...]]] = [[] for _ in range(group.order)]
        error = None
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            futures = [pool.submit(_search_branch, p, group, first, checks, counter, branches[first], rank)
                       for first in range(group.order)]
            for future in futures:
                try:
                    future.result()
                except EnumerationBudgetError as exc:
                    error = exc
        keys = [key for branch in branches for key in branch]
        nodes = counter.nodes
        if stats is not None:
            stats["nodes"] = nodes
        if error is not None:
            partial = [Epimorphism(p, group, [group.elements[i] for i in key]) for key in keys]
            log.warning(f"epimorphism search onto {group.name} stopped after {counter.nodes} nodes, "
                        f"{len(partial)} found")
            raise EnumerationBudgetError(str(error), found=partial, nodes=counter.nodes)
        log.debug(f"epimorphisms onto {group.name}: {len(keys)} after {counter.nodes} nodes")
    if stats is not None:
        stats["nodes"] = nodes
    epis = [Epimorphism(p, group, [group.elements[i] for i in key]) for key in keys]
    if dedup:
        epis = conjugacy_dedup(epis)
    log.info(f"{len(epis)} epimorphisms onto {group.name}")
    return epis


def conjugacy_dedup(epis: Sequence[Epimorphism]) -> List[Epimorphism]:
    """First representative of every orbit under conjugation in the target group."""
    kept = []
    seen = set()
    for epi in epis:
        if epi.key() in seen:
            continue
        kept.append(epi)
        group = epi.group
        for c in group.elements:
            c_inv = c.inverse()
            seen.add(tuple(group.index_of(c_inv * g * c) for g in epi.images))
    return kept


def abelianization_epimorphism(p: Presentation, n: int, phi: Sequence[int]) -> Epimorphism:
    """x_i -> phi_i mod n onto Z/n (phi must be surjective onto Z)."""
    group = catalog(f"Z{n}")
    generator = group.generators[0] if group.generators else Perm.identity(1)
    epi = Epimorphism(p, group, [generator ** (e % n) for e in phi])
    if not epi.is_valid():
        raise InvalidArgumentError(f"phi mod {n} is not an epimorphism")
    return epi
