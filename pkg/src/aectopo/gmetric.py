"""A lexicographically ordered group of finite degree and the first-difference metric.

G is the group of integer vectors of length ``degree`` under pointwise
addition, ordered by the first nonzero coordinate (index 0 is the most
significant).  The unit vectors ``r_a = e_a`` strictly decrease and every
positive element lies above some ``r_a`` with ``a < degree`` unless its only
nonzero entry sits at the last index.  Sequence points are tuples over a
finite alphabet; two distinct points are at distance ``r_a`` where ``a`` is
the first index at which they differ.
"""

from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Sequence


class DegreeMismatch(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class GroupElement:
    coeffs: tuple[int, ...]

    @classmethod
    def zero(cls, degree: int) -> GroupElement:
        return cls((0,) * degree)

    @classmethod
    def unit(cls, index: int, degree: int) -> GroupElement:
        if not 0 <= index < degree:
            raise IndexError(f"index {index} outside degree {degree}")
        return cls(tuple(1 if i == index else 0 for i in range(degree)))

    @classmethod
    def sparse(cls, entries: dict[int, int], degree: int) -> GroupElement:
        if any(not 0 <= i < degree for i in entries):
            raise IndexError("support outside degree")
        return cls(tuple(entries.get(i, 0) for i in range(degree)))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def support(self) -> dict[int, int]:
        return {i: v for i, v in enumerate(self.coeffs) if v}

    def leading_index(self) -> int | None:
        return next((i for i, v in enumerate(self.coeffs) if v), None)

    def _peer(self, other) -> tuple[int, ...] | None:
        if not isinstance(other, GroupElement):
            return None
        if len(other.coeffs) != len(self.coeffs):
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree} differ")
        return other.coeffs

    def __add__(self, other: GroupElement) -> GroupElement:
        theirs = self._peer(other)
        if theirs is None:
            return NotImplemented
        return GroupElement(tuple(map(operator.add, self.coeffs, theirs)))

    def __neg__(self) -> GroupElement:
        return GroupElement(tuple(-a for a in self.coeffs))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __lt__(self, other: GroupElement) -> bool:
        theirs = self._peer(other)
        if theirs is None:
            return NotImplemented
        return self.coeffs < theirs

    def is_positive(self) -> bool:
        return self > GroupElement.zero(self.degree)

    def __str__(self) -> str:
        return "[" + ",".join(f"{i}:{v}" for i, v in self.support.items()) + "]"

    @classmethod
    def parse(cls, text: str, degree: int) -> GroupElement:
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"not a group element: {text!r}")
        entries = {}
        for part in filter(None, body[1:-1].split(",")):
            i, v = part.split(":")
            entries[int(i)] = int(v)
        return cls.sparse(entries, degree)


def max_g(a: GroupElement, b: GroupElement) -> GroupElement:
    return a if a >= b else b


def coinitial_sequence(alpha: int, degree: int) -> GroupElement:
    """``r_alpha``, the unit vector at ``alpha``."""
    return GroupElement.unit(alpha, degree)


def first_below(g: GroupElement) -> int | None:
    """Least ``alpha`` with ``r_alpha < g``, found by comparison; None if no ``r_alpha`` lies below."""
    for alpha in range(g.degree):
        if coinitial_sequence(alpha, g.degree) < g:
            return alpha
    return None


# ----------------------------------------------------------- sequence space
Point = tuple[int, ...]


def point(text: str) -> Point:
    return tuple(int(ch) for ch in text)


def point_text(x: Sequence[int]) -> str:
    return "".join(str(a) for a in x)


def all_points(length: int, alphabet: int) -> list[Point]:
    return list(itertools.product(range(alphabet), repeat=length))


def first_difference_metric(x: Sequence[int], y: Sequence[int], degree: int) -> GroupElement:
    if len(x) != len(y):
        raise ValueError("points have different lengths")
    if len(x) > degree:
        raise ValueError(f"point length {len(x)} exceeds the degree {degree}")
    for alpha, (a, b) in enumerate(zip(x, y)):
        if a != b:
            return coinitial_sequence(alpha, degree)
    return GroupElement.zero(degree)


@dataclass(frozen=True)
class Ball:
    """``B_d(x, eps)`` resolved to a cylinder ``N_s`` (``s`` a prefix of the center)."""
    center: Point
    radius: GroupElement
    prefix: Point
    note: str = ""

    @property
    def kind(self) -> str:
        return "all" if not self.prefix else "cylinder"

    def contains(self, y: Sequence[int]) -> bool:
        return tuple(y[:len(self.prefix)]) == self.prefix

    def __str__(self) -> str:
        return "all" if not self.prefix else f"cylinder {point_text(self.prefix)}"


def ball(x: Sequence[int], eps: GroupElement) -> Ball:
    """The open ball as a cylinder, by locating ``eps`` among the ``r_alpha``."""
    x = tuple(x)
    if not eps.is_positive():
        raise ValueError("radius must be positive")
    alpha = first_below(eps)
    if alpha is None or alpha >= len(x):
        return Ball(x, eps, x, "radius below every attainable distance: singleton cylinder at full length")
    return Ball(x, eps, x[:alpha], f"r_{alpha} is the largest attainable distance below the radius")


def metric_ball_members(x: Sequence[int], eps: GroupElement, points: Iterable[Sequence[int]]) -> set:
    return {tuple(y) for y in points if first_difference_metric(x, y, eps.degree) < eps}


# ------------------------------------------------------------ Cauchy families
@dataclass(frozen=True)
class Family:
    """An eventually periodic sequence of points: ``head`` then ``cycle`` repeated forever."""
    head: tuple[Point, ...]
    cycle: tuple[Point, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("family needs a nonempty repeating cycle to be finitely described")
        lengths = {len(p) for p in self.head + self.cycle}
        if len(lengths) != 1:
            raise ValueError("all points of a family must have the same length")

    def __getitem__(self, k: int) -> Point:
        if k < len(self.head):
            return self.head[k]
        return self.cycle[(k - len(self.head)) % len(self.cycle)]

    def tail(self, start: int) -> list[Point]:
        """Every point occurring at index ``start`` or later."""
        out = list(self.head[start:])
        out.extend(self.cycle)
        return out


def constant_family(x: Sequence[int], head: Sequence[Sequence[int]] = ()) -> Family:
    return Family(tuple(tuple(h) for h in head), (tuple(x),))


def alternating_family(x: Sequence[int], y: Sequence[int]) -> Family:
    return Family((), (tuple(x), tuple(y)))


def converging_family(target: Sequence[int], filler: int = 0) -> Family:
    """The n-th point agrees with ``target`` on its first n coordinates and is ``filler`` afterwards."""
    target = tuple(target)
    L = len(target)
    head = tuple(target[:k] + (filler,) * (L - k) for k in range(L))
    return Family(head, (target,))


@dataclass
class CauchyReport:
    is_cauchy: bool
    witnesses: dict
    limit: Point | None

    def to_dict(self) -> dict:
        return {"is_cauchy": self.is_cauchy, "witnesses": self.witnesses,
                "limit": None if self.limit is None else point_text(self.limit)}


def cauchy_and_limit(fam: Family, degree: int) -> CauchyReport:
    """Adjudicate the Cauchy condition for every ``eps = r_alpha`` with ``alpha < degree``.

    For each radius the witness is the least start index after which all
    pairs of points are closer than the radius (or None).  The limit is read
    off coordinate by coordinate once every coordinate has stabilised.
    """
    witnesses = {}
    cauchy = True
    for alpha in range(degree):
        eps = coinitial_sequence(alpha, degree)
        found = None
        for start in range(len(fam.head) + 1):
            pts = fam.tail(start)
            if all(first_difference_metric(p, q, degree) < eps for p, q in itertools.combinations(pts, 2)):
                found = start
                break
        witnesses[alpha] = found
        if found is None:
            cauchy = False
    limit = None
    if cauchy:
        L = len(fam.cycle[0])
        coords = []
        for i in range(L):
            values = {p[i] for p in fam.cycle}
            if len(values) != 1:
                break
            coords.append(values.pop())
        else:
            limit = tuple(coords)
    return CauchyReport(cauchy, witnesses, limit)


# ---------------------------------------------------------------- sweeps
@dataclass
class SweepResult:
    name: str
    checked: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failed

    def fail(self, item):
        """Count a failure; only the first ten are kept as witnesses."""
        self.failed += 1
        if len(self.failures) < 10:
            self.failures.append(item)

    def to_dict(self) -> dict:
        return {"name": self.name, "checked": self.checked, "failed": self.failed, "passed": self.passed,
                "failures": self.failures}


def metric_axioms_sweep(points: Sequence[Point], degree: int) -> list[SweepResult]:
    """Identity of indiscernibles, symmetry, triangle and ultrametric inequalities over all pairs and triples."""
    zero = GroupElement.zero(degree)
    ident, sym, tri, ultra = (SweepResult(n) for n in ("identity", "symmetry", "triangle", "ultrametric"))
    d = {}
    for x in points:
        for y in points:
            d[x, y] = first_difference_metric(x, y, degree)
    for x in points:
        for y in points:
            ident.checked += 1
            if (d[x, y] == zero) != (x == y) or d[x, y] < zero:
                ident.fail([point_text(x), point_text(y)])
            sym.checked += 1
            if d[x, y] != d[y, x]:
                sym.fail([point_text(x), point_text(y)])
    for x in points:
        for y in points:
            dxy = d[x, y]
            for z in points:
                dxz, dyz = d[x, z], d[y, z]
                tri.checked += 1
                if not dxz <= dxy + dyz:
                    tri.fail([point_text(x), point_text(y), point_text(z)])
                ultra.checked += 1
                if not dxz <= max_g(dxy, dyz):
                    ultra.fail([point_text(x), point_text(y), point_text(z)])
    return [ident, sym, tri, ultra]


def ball_cylinder_sweep(points: Sequence[Point], degree: int, radii: Sequence[GroupElement] | None = None
                        ) -> SweepResult:
    """Every ball equals its cylinder descriptor, extensionally over ``points``."""
    res = SweepResult("ball-cylinder")
    if radii is None:
        radii = [coinitial_sequence(a, degree) for a in range(degree)]
    for x in points:
        for eps in radii:
            res.checked += 1
            B = ball(x, eps)
            by_metric = metric_ball_members(x, eps, points)
            by_cylinder = {y for y in points if B.contains(y)}
            if by_metric != by_cylinder:
                res.fail({"center": point_text(x), "radius": str(eps), "descriptor": str(B)})
    return res


def group_grid(degree: int, support: Sequence[int] = (0, 1, 2), low: int = -2, high: int = 2) -> list[GroupElement]:
    out = []
    for values in itertools.product(range(low, high + 1), repeat=len(support)):
        out.append(GroupElement.sparse(dict(zip(support, values)), degree))
    return out


def group_laws_sweep(grid: Sequence[GroupElement]) -> list[SweepResult]:
    """Associativity, commutativity, inverses, identity, totality and translation invariance of the order."""
    if not grid:
        return []
    zero = GroupElement.zero(grid[0].degree)
    assoc, comm, inv, total, trans = (SweepResult(n) for n in
                                      ("associativity", "commutativity", "inverses", "total-order",
                                       "translation-invariance"))
    for a in grid:
        inv.checked += 1
        if a + (-a) != zero or a + zero != a:
            inv.fail(str(a))
    sums = {(a, b): a + b for a in grid for b in grid}
    for a in grid:
        for b in grid:
            ab = sums[a, b]
            comm.checked += 1
            if ab != sums[b, a]:
                comm.fail([str(a), str(b)])
            total.checked += 1
            if (a < b) + (b < a) + (a == b) != 1:
                total.fail([str(a), str(b)])
            a_lt_b = a < b
            for c in grid:
                assoc.checked += 1
                if ab + c != a + sums[b, c]:
                    assoc.fail([str(a), str(b), str(c)])
                if a_lt_b:
                    trans.checked += 1
                    if not sums[a, c] < sums[b, c]:
                        trans.fail([str(a), str(b), str(c)])
    return [assoc, comm, inv, total, trans]
