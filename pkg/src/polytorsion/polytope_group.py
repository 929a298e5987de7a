"""Integral polytopes, their Grothendieck group, seminorms and duality.

Polytopes are stored by their extreme points only. Coordinates are ``int``
for :class:`IntegralPolytope`; the general :class:`Polytope` also admits
``Fraction`` coordinates, which is what polar duals produce.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import _exact
from .errors import DomainError, UnboundedDualError, UnsupportedRankError

MAX_DUAL_RANK = 3


def _as_point(p, rank=None):
    p = tuple(p)
    if rank is not None and len(p) != rank:
        raise DomainError(f"point {p} has length {len(p)}, expected rank {rank}")
    return p


def extreme_points(points: Iterable[Sequence]) -> list[tuple]:
    """Extreme points of the convex hull of ``points``, sorted lexicographically."""
    pts = sorted(set(tuple(p) for p in points))
    if not pts:
        raise DomainError("convex hull of an empty set")
    rank = len(pts[0])
    if any(len(p) != rank for p in pts):
        raise DomainError("points of mixed rank")
    if len(pts) <= 2 or rank == 0:
        return pts
    if rank == 1:
        return [pts[0], pts[-1]]
    if rank == 2:
        return sorted(_exact.planar_hull(pts))
    keep = []
    for i, p in enumerate(pts):
        # the lex-extreme points are always vertices
        if i == 0 or i == len(pts) - 1:
            keep.append(p)
            continue
        others = pts[:i] + pts[i + 1:]
        if not _exact.in_convex_hull(p, others):
            keep.append(p)
    return keep


class Polytope:
    """Convex hull of finitely many points with exact rational coordinates."""

    __slots__ = ("rank", "vertices")

    def __init__(self, points: Iterable[Sequence], rank: int | None = None):
        pts = [_as_point(p, rank) for p in points]
        if not pts:
            raise DomainError("a polytope needs at least one point")
        self.vertices = tuple(extreme_points(pts))
        self.rank = len(self.vertices[0]) if rank is None else rank

    @classmethod
    def _from_vertices(cls, vertices, rank):
        obj = cls.__new__(cls)
        obj.vertices = tuple(sorted(vertices))
        obj.rank = rank
        return obj

    @classmethod
    def point(cls, p):
        p = tuple(p)
        return cls._from_vertices([p], len(p))

    @classmethod
    def origin(cls, rank: int):
        return cls.point((0,) * rank)

    def __repr__(self):
        return f"{type(self).__name__}({[list(v) for v in self.vertices]})"

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.rank == other.rank and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.rank, self.vertices))

    def _check_rank(self, other):
        if self.rank != other.rank:
            raise DomainError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other):
        """Minkowski sum."""
        if not isinstance(other, Polytope):
            return NotImplemented
        self._check_rank(other)
        sums = [tuple(a + b for a, b in zip(p, q)) for p in self.vertices for q in other.vertices]
        cls = type(self) if type(self) is type(other) else Polytope
        return cls._from_vertices(extreme_points(sums), self.rank)

    def __neg__(self):
        return type(self)._from_vertices([tuple(-x for x in v) for v in self.vertices], self.rank)

    def scale(self, k):
        if k < 0:
            return (-self).scale(-k)
        if k == 0:
            return type(self).origin(self.rank)
        return type(self)._from_vertices([tuple(k * x for x in v) for v in self.vertices], self.rank)

    def translate(self, h):
        h = _as_point(h, self.rank)
        return type(self)._from_vertices(
            [tuple(a + b for a, b in zip(v, h)) for v in self.vertices], self.rank)

    @property
    def lex_min(self):
        return self.vertices[0]

    def is_point(self):
        return len(self.vertices) == 1

    def support(self, phi) -> Fraction | int:
        """``max`` of the linear functional ``phi`` over the polytope."""
        return max(_pair(phi, v) for v in self.vertices)

    def width(self, phi):
        vals = [_pair(phi, v) for v in self.vertices]
        return max(vals) - min(vals)

    def seminorm(self, phi) -> Fraction:
        """Half the width of the polytope in direction ``phi``."""
        phi = _as_point(phi, self.rank)
        return Fraction(self.width(phi), 2)

    def dimension(self):
        return _exact.affine_rank(list(self.vertices))

    def contains(self, p):
        p = _as_point(p, self.rank)
        return p in self.vertices or _exact.in_convex_hull(p, list(self.vertices))

    def to_json(self):
        return {"rank": self.rank, "vertices": [[_jsonable(x) for x in v] for v in self.vertices]}


class IntegralPolytope(Polytope):
    """Polytope whose vertices lie in the lattice Z^r."""

    __slots__ = ()

    def __init__(self, points, rank=None):
        pts = [_as_point(p, rank) for p in points]
        for p in pts:
            for x in p:
                if isinstance(x, bool) or not isinstance(x, int):
                    if isinstance(x, Fraction) and x.denominator == 1:
                        continue
                    raise DomainError(f"non-integral coordinate {x!r}")
        super().__init__([tuple(int(x) for x in p) for p in pts], rank)

    @classmethod
    def from_json(cls, data):
        try:
            rank = int(data["rank"])
            verts = data["vertices"]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed polytope JSON: {exc}") from None
        return cls(verts, rank)


def _pair(phi, v):
    return sum(a * b for a, b in zip(phi, v))


def _jsonable(x):
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return {"den": x.denominator, "num": x.numerator}
    return x


def convex_hull(points, rank=None) -> IntegralPolytope:
    return IntegralPolytope(points, rank)


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    return p + q


def interval(m: int, n: int) -> IntegralPolytope:
    """The rank-one polytope ``[m, n]``."""
    return IntegralPolytope([(m,), (n,)])


class PolytopeGroupElement:
    """Formal difference ``[pos] - [neg]`` in the polytope group.

    Not normalised: equality is the cross-sum test, never structural.
    """

    __slots__ = ("pos", "neg")
    __hash__ = None

    def __init__(self, pos: Polytope, neg: Polytope | None = None):
        if neg is None:
            neg = type(pos).origin(pos.rank)
        pos._check_rank(neg)
        self.pos = pos
        self.neg = neg

    @classmethod
    def zero(cls, rank):
        o = IntegralPolytope.origin(rank)
        return cls(o, o)

    @property
    def rank(self):
        return self.pos.rank

    def __repr__(self):
        return f"[{list(map(list, self.pos.vertices))}] - [{list(map(list, self.neg.vertices))}]"

    def __eq__(self, other):
        if not isinstance(other, PolytopeGroupElement):
            return NotImplemented
        return self.pos + other.neg == other.pos + self.neg

    def __add__(self, other):
        return PolytopeGroupElement(self.pos + other.pos, self.neg + other.neg)

    def __neg__(self):
        return PolytopeGroupElement(self.neg, self.pos)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        if k < 0:
            return (-self) * (-k)
        return PolytopeGroupElement(self.pos.scale(k), self.neg.scale(k))

    __rmul__ = __mul__

    def star(self):
        """The involution induced by ``P -> -P``."""
        return PolytopeGroupElement(-self.pos, -self.neg)

    def seminorm(self, phi) -> Fraction:
        return self.pos.seminorm(phi) - self.neg.seminorm(phi)

    def canonical_class(self) -> "PolytopeClass":
        return PolytopeClass(self)

    def to_json(self):
        return {"neg": self.neg.to_json(), "pos": self.pos.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(IntegralPolytope.from_json(data["pos"]), IntegralPolytope.from_json(data["neg"]))


class PolytopeClass:
    """Element of the polytope group modulo lattice translations.

    Both halves are translated so their lexicographically smallest vertex
    is the origin; the lex-min of a Minkowski sum is the sum of the lex-mins,
    so cross-sum equality of canonical halves is equality in the quotient.
    Canonical forms depend on the chosen lattice basis.
    """

    __slots__ = ("element",)

    def __init__(self, element: PolytopeGroupElement):
        pos = element.pos.translate(tuple(-x for x in element.pos.lex_min))
        neg = element.neg.translate(tuple(-x for x in element.neg.lex_min))
        self.element = PolytopeGroupElement(pos, neg)

    @classmethod
    def zero(cls, rank):
        return cls(PolytopeGroupElement.zero(rank))

    @property
    def rank(self):
        return self.element.rank

    @property
    def pos(self):
        return self.element.pos

    @property
    def neg(self):
        return self.element.neg

    def __repr__(self):
        return f"PolytopeClass({self.element!r})"

    def __eq__(self, other):
        if isinstance(other, PolytopeGroupElement):
            other = PolytopeClass(other)
        if not isinstance(other, PolytopeClass):
            return NotImplemented
        return self.element == other.element

    def __hash__(self):
        # the reduced difference is unknown, but widths along the coordinate
        # axes are class invariants
        return hash(tuple(self.element.seminorm(e) for e in _unit_vectors(self.rank)))

    def __add__(self, other):
        return PolytopeClass(self.element + other.element)

    def __neg__(self):
        return PolytopeClass(-self.element)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return PolytopeClass(self.element * k)

    __rmul__ = __mul__

    def star(self):
        return PolytopeClass(self.element.star())

    def seminorm(self, phi) -> Fraction:
        return self.element.seminorm(phi)

    def is_zero(self):
        return self.element == PolytopeGroupElement.zero(self.rank)

    def reduced(self) -> "PolytopeClass":
        """A smaller representative when one is cheap to find.

        Rank 1 collapses to a single interval on one side; in any rank a
        difference of equal polytopes collapses to the zero class.
        """
        if self.pos == self.neg:
            return PolytopeClass.zero(self.rank)
        if self.rank == 1:
            length = self.pos.vertices[-1][0] - self.neg.vertices[-1][0]
            if length >= 0:
                return PolytopeClass(PolytopeGroupElement(interval(0, length)))
            return -PolytopeClass(PolytopeGroupElement(interval(0, -length)))
        return self

    def to_json(self):
        return self.element.to_json()


def _unit_vectors(r):
    return [tuple(int(i == j) for j in range(r)) for i in range(r)]


def pg_add(a, b):
    return a + b


def pg_neg(a):
    return -a


def pg_eq(a, b) -> bool:
    return a == b


def involution_star(a):
    return a.star()


def canonical_class(a: PolytopeGroupElement) -> PolytopeClass:
    return PolytopeClass(a)


def seminorm_eval(a, phi) -> Fraction:
    if len(tuple(phi)) != a.rank:
        raise DomainError(f"covector of length {len(tuple(phi))} on rank {a.rank}")
    return a.seminorm(tuple(phi))


class LatticeHom:
    """Integer matrix acting on column vectors: ``r_target`` rows, ``r_source`` columns."""

    __slots__ = ("matrix", "source_rank", "target_rank")

    def __init__(self, matrix, source_rank=None):
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        self.target_rank = len(self.matrix)
        if source_rank is None:
            if not self.matrix:
                raise DomainError("empty matrix needs an explicit source rank")
            source_rank = len(self.matrix[0])
        if any(len(row) != source_rank for row in self.matrix):
            raise DomainError("ragged lattice homomorphism matrix")
        self.source_rank = source_rank

    def __repr__(self):
        return f"LatticeHom({[list(r) for r in self.matrix]})"

    def __eq__(self, other):
        return isinstance(other, LatticeHom) and (self.matrix, self.source_rank) == (other.matrix, other.source_rank)

    def __hash__(self):
        return hash((self.matrix, self.source_rank))

    def __call__(self, v):
        v = tuple(v)
        if len(v) != self.source_rank:
            raise DomainError(f"vector of length {len(v)} for map with source rank {self.source_rank}")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.matrix)

    def polytope(self, p: Polytope) -> Polytope:
        if p.rank != self.source_rank:
            raise DomainError(f"polytope of rank {p.rank} for map with source rank {self.source_rank}")
        return type(p)._from_vertices(extreme_points([self(v) for v in p.vertices]), self.target_rank)

    def push_forward(self, a):
        if isinstance(a, PolytopeClass):
            return PolytopeClass(self.push_forward(a.element))
        return PolytopeGroupElement(self.polytope(a.pos), self.polytope(a.neg))


def push_forward(f: LatticeHom, a):
    return f.push_forward(a)


def rank1_iso(a) -> tuple[int, int]:
    """``[[m, n]] -> (n - m, m)`` extended additively to differences."""
    if isinstance(a, PolytopeClass):
        raise DomainError("rank1_iso needs an element, not a translation class")
    if a.rank != 1:
        raise DomainError(f"rank1_iso needs rank 1, got {a.rank}")

    def image(p):
        m, n = p.vertices[0][0], p.vertices[-1][0]
        return n - m, m

    lp, op = image(a.pos)
    ln, on = image(a.neg)
    return lp - ln, op - on


def rank1_from_pair(length: int, offset: int) -> PolytopeGroupElement:
    """Inverse of :func:`rank1_iso`."""
    if length >= 0:
        return PolytopeGroupElement(interval(offset, offset + length), IntegralPolytope.origin(1))
    return PolytopeGroupElement(IntegralPolytope([(offset,)]), interval(0, -length))


def facets(X: Polytope):
    """Facet inequalities ``a . x <= b`` of a full-dimensional polytope.

    Brute force over ``rank``-subsets of vertices; fine at rank <= 3.
    Normals are scaled to be primitive integer vectors.
    """
    r = X.rank
    verts = list(X.vertices)
    if X.dimension() != r:
        raise DomainError("facet enumeration needs a full-dimensional polytope")
    if r == 1:
        return [((Fraction(1),), Fraction(verts[-1][0])), ((Fraction(-1),), Fraction(-verts[0][0]))]
    found = {}
    for subset in combinations(verts, r):
        base = subset[0]
        diffs = [[Fraction(a - b) for a, b in zip(p, base)] for p in subset[1:]]
        ns = _exact.nullspace(diffs, r)
        if len(ns) != 1:
            continue
        a = _primitive(ns[0])
        vals = [_pair(a, v) for v in verts]
        b = _pair(a, base)
        if all(x <= b for x in vals):
            found[a] = b
        elif all(x >= b for x in vals):
            found[tuple(-x for x in a)] = -b
    return sorted((tuple(Fraction(x) for x in a), Fraction(b)) for a, b in found.items())


def _primitive(v):
    from math import gcd, lcm

    den = lcm(*(Fraction(x).denominator for x in v))
    ints = [int(Fraction(x) * den) for x in v]
    g = gcd(*ints)
    return tuple(x // g for x in ints)


def dual_polytope(X: Polytope) -> Polytope:
    """Polar dual ``{phi : phi(v) <= 1 for v in X}`` for rank <= 3.

    Requires the origin in the interior of ``X``; the dual vertices are then
    exactly ``a / b`` over the facet inequalities ``a . x <= b``.
    """
    if X.rank > MAX_DUAL_RANK:
        raise UnsupportedRankError(f"duality implemented for rank <= {MAX_DUAL_RANK}, got {X.rank}")
    if X.rank == 0:
        raise UnsupportedRankError("duality of rank-0 polytopes is undefined here")
    if X.dimension() != X.rank:
        raise UnboundedDualError("polytope is not full-dimensional; its dual is unbounded")
    fs = facets(X)
    if any(b <= 0 for _, b in fs):
        raise UnboundedDualError("origin is not in the interior; the dual is unbounded")
    return Polytope([tuple(x / b for x in a) for a, b in fs], X.rank)


def norm_unit_ball(X: Polytope) -> Polytope:
    """Unit ball ``{phi : ||phi||_X <= 1}`` of the seminorm of ``X``, if bounded.

    ``||phi||_X <= 1`` iff ``phi(w) <= 2`` for every ``w`` in ``X + (-X)``,
    so the ball is the polar dual of ``(X + (-X)) / 2``.
    """
    sym = X + (-X)
    half = Polytope([tuple(Fraction(x, 2) for x in v) for v in sym.vertices], X.rank)
    return dual_polytope(half)
