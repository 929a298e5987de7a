"""Based chain complexes over Laurent rings and their universal torsion.

Conventions: modules are row vectors and a matrix ``A`` acts by right
multiplication, so the differential ``c_n: C_n -> C_{n-1}`` is a
``dims[n] x dims[n-1]`` matrix and ``d o c = 0`` reads ``C_n @ C_{n-1} == 0``.
Composition ``f o g`` is the matrix product ``G @ F``.

The torsion of an acyclic complex is computed with the weak chain
contraction ``gamma_n = c_{n+1}^*``, ``u_n = Delta_n`` as

    torsion = det((u c + gamma)_odd) / det(u_odd),

a ratio of two Laurent polynomials, read as a class in the unit group of
the fraction field modulo +-monomials.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping

from .errors import DomainError, NotAcyclicError
from .laurent import LaurentPoly, LMatrix, block_matrix, det, rank_over_fraction_field
from .polytope_group import PolytopeClass, PolytopeGroupElement


class TorsionClass:
    """Non-zero ``num / den`` in Frac(Z[Z^r]) modulo +-monomials.

    Equality cross-multiplies and compares normalised products, so it never
    needs a gcd. :meth:`reduced` cancels common factors (via sympy) for display.
    """

    __slots__ = ("num", "den", "_reduced")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            den = LaurentPoly.constant(num.rank, 1)
        if not num or not den:
            raise DomainError("a torsion class needs non-zero numerator and denominator")
        if num.rank != den.rank:
            raise DomainError("numerator and denominator ranks differ")
        self.num = num.normalized()
        self.den = den.normalized()
        self._reduced = None

    @classmethod
    def trivial(cls, rank):
        return cls(LaurentPoly.constant(rank, 1))

    @property
    def rank(self):
        return self.num.rank

    def __repr__(self):
        n, d = self.reduced()
        return f"TorsionClass(({n.to_str()}) / ({d.to_str()}))"

    def __eq__(self, other):
        if not isinstance(other, TorsionClass):
            return NotImplemented
        if self.rank != other.rank:
            return False
        return (self.num * other.den).normalized() == (other.num * self.den).normalized()

    def __hash__(self):
        n, d = self.reduced()
        return hash((n, d))

    def __mul__(self, other):
        return TorsionClass(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        out = TorsionClass.trivial(self.rank)
        for _ in range(abs(k)):
            out = out * base
        return out

    def inverse(self):
        return TorsionClass(self.den, self.num)

    def is_trivial(self):
        return self == TorsionClass.trivial(self.rank)

    def star(self):
        return TorsionClass(self.num.bar(), self.den.bar())

    def reduced(self):
        """Coprime ``(num, den)`` normalised modulo +-monomials."""
        if self._reduced is None:
            self._reduced = _cancel(self.num, self.den)
        return self._reduced

    def polytope(self) -> PolytopeClass:
        """``[N(num)] - [N(den)]`` modulo translation, from the reduced fraction."""
        n, d = self.reduced()
        return PolytopeClass(PolytopeGroupElement(n.newton_polytope(), d.newton_polytope())).reduced()

    def polytope_of_negative(self) -> PolytopeClass:
        return -self.polytope()

    def to_json(self):
        n, d = self.reduced()
        return {"den": d.to_json(), "num": n.to_json(), "rank": self.rank}

    @classmethod
    def from_json(cls, data):
        r = int(data["rank"])
        return cls(LaurentPoly.from_json(r, data["num"]), LaurentPoly.from_json(r, data["den"]))


def _cancel(num, den):
    r = num.rank
    if num.is_monomial() or den.is_monomial():
        # +-monomials are units; only an integer content can cancel
        from math import gcd

        g = gcd(num.content(), den.content())
        return ((num.divexact(LaurentPoly.constant(r, g))).normalized(),
                (den.divexact(LaurentPoly.constant(r, g))).normalized())
    import sympy

    xs = sympy.symbols(f"x0:{r}")
    pn, _ = num.to_sympy(xs)
    pd, _ = den.to_sympy(xs)
    g = sympy.gcd(pn, pd)
    qn = sympy.quo(pn, g, *xs)
    qd = sympy.quo(pd, g, *xs)
    return LaurentPoly.from_sympy(qn, xs).normalized(), LaurentPoly.from_sympy(qd, xs).normalized()


def torsion_star(t: TorsionClass) -> TorsionClass:
    return t.star()


def torsion_to_polytope(t: TorsionClass) -> PolytopeClass:
    return t.polytope()


def torsion_to_polytope_of_negative(t: TorsionClass) -> PolytopeClass:
    return t.polytope_of_negative()


class BasedChainComplex:
    """Finite based free complex over Z[Z^r].

    ``dims`` maps degree to rank of the chain module; ``differentials[n]`` is
    the matrix of ``c_n: C_n -> C_{n-1}``. Missing differentials are zero.
    Degrees may be any integers.
    """

    __slots__ = ("rank", "dims", "differentials")

    def __init__(self, rank: int, dims: Mapping[int, int], differentials: Mapping[int, LMatrix] | None = None):
        self.rank = rank
        self.dims = {int(n): int(d) for n, d in dims.items() if d}
        if any(d < 0 for d in self.dims.values()):
            raise DomainError("negative module rank")
        diffs = {}
        for n, m in (differentials or {}).items():
            n = int(n)
            want = (self.dim(n), self.dim(n - 1))
            if m.shape != want:
                raise DomainError(f"differential c_{n} has shape {m.shape}, expected {want}")
            if m.rank != rank:
                raise DomainError(f"differential c_{n} lives over rank {m.rank}, complex has rank {rank}")
            if want[0] and want[1]:
                diffs[n] = m
        self.differentials = diffs

    def dim(self, n):
        return self.dims.get(n, 0)

    def degrees(self):
        return sorted(self.dims)

    def d(self, n) -> LMatrix:
        m = self.differentials.get(n)
        if m is None:
            return LMatrix(self.rank, self.dim(n), self.dim(n - 1))
        return m

    def __repr__(self):
        return f"BasedChainComplex(rank={self.rank}, dims={self.dims})"

    def __eq__(self, other):
        if not isinstance(other, BasedChainComplex):
            return NotImplemented
        if self.rank != other.rank or self.dims != other.dims:
            return False
        span = self._span() | other._span()
        return all(self.d(n) == other.d(n) for n in span)

    __hash__ = None

    def _span(self):
        return set(self.dims) | {n + 1 for n in self.dims}

    def euler_characteristic(self):
        return sum((-1) ** (n % 2) * d for n, d in self.dims.items())

    def shifted(self, k):
        """Degree shift without sign change."""
        return BasedChainComplex(self.rank, {n + k: d for n, d in self.dims.items()},
                                 {n + k: m for n, m in self.differentials.items()})

    def to_json(self):
        return {
            "degrees": {str(n): self.dims[n] for n in sorted(self.dims)},
            "differentials": {str(n): self.differentials[n].to_json() for n in sorted(self.differentials)},
            "rank": self.rank,
        }

    @classmethod
    def from_json(cls, data):
        try:
            r = int(data["rank"])
            dims = {int(k): int(v) for k, v in data["degrees"].items()}
            diffs = {}
            for k, rows in data.get("differentials", {}).items():
                n = int(k)
                diffs[n] = LMatrix(r, dims.get(n, 0), dims.get(n - 1, 0),
                                   [[LaurentPoly.from_json(r, e) for e in row] for row in rows])
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise DomainError(f"malformed chain complex JSON: {exc}") from None
        return cls(r, dims, diffs)


def el(p, degree: int = 1, rank: int | None = None) -> BasedChainComplex:
    """Elementary complex ``C_degree --p--> C_{degree-1}``; ``p`` a polynomial or square matrix."""
    if isinstance(p, LMatrix):
        if p.nrows != p.ncols:
            raise DomainError("el needs a square matrix")
        m = p
    else:
        if isinstance(p, int):
            p = LaurentPoly.constant(rank if rank is not None else 1, p)
        m = LMatrix(p.rank, 1, 1, [[p]])
    return BasedChainComplex(m.rank, {degree: m.nrows, degree - 1: m.nrows}, {degree: m})


def complex_diagnostics(C: BasedChainComplex) -> list[str]:
    problems = []
    for n in sorted(C.differentials):
        if (n - 1) in C.differentials:
            if not (C.d(n) @ C.d(n - 1)).is_zero():
                problems.append(f"c_{n - 1} o c_{n} != 0")
    return problems


def validate_complex(C: BasedChainComplex) -> bool:
    return not complex_diagnostics(C)


def laplacian(C: BasedChainComplex, n: int) -> LMatrix:
    """``Delta_n = c_{n+1} c_{n+1}^* + c_n^* c_n`` (as maps)."""
    up = C.d(n + 1)
    down = C.d(n)
    return up.star() @ up + down @ down.star()


def betti_numbers(C: BasedChainComplex) -> dict[int, int]:
    """Dimensions of homology over the fraction field."""
    ranks = {n: rank_over_fraction_field(C.d(n)) for n in C._span()}
    return {n: C.dim(n) - ranks.get(n, 0) - ranks.get(n + 1, 0) for n in C.degrees()}


def is_l2_acyclic(C: BasedChainComplex) -> bool:
    return all(b == 0 for b in betti_numbers(C).values())


def _odd_even(C):
    odd = [n for n in C.degrees() if n % 2]
    ev = [n for n in C.degrees() if not n % 2]
    return odd, ev


def torsion_matrices(C: BasedChainComplex):
    """``((u c + gamma)_odd, u_odd)`` for the Laplacian weak chain contraction."""
    odd, ev = _odd_even(C)
    lap = {n: laplacian(C, n) for n in C.degrees()}
    row_sizes = [C.dim(n) for n in odd]
    col_sizes = [C.dim(n) for n in ev]
    blocks = []
    for n in odd:
        row = []
        for m in ev:
            if m == n - 1:
                # u_{n-1} o c_n
                row.append(C.d(n) @ lap[m])
            elif m == n + 1:
                # gamma_n = c_{n+1}^*
                row.append(C.d(n + 1).star())
            else:
                row.append(None)
        blocks.append(row)
    A = block_matrix(C.rank, blocks, row_sizes, col_sizes)
    U = block_matrix(C.rank, [[lap[n] if n == m else None for m in odd] for n in odd], row_sizes, row_sizes)
    return A, U


def torsion(C: BasedChainComplex) -> TorsionClass:
    """Universal torsion of an acyclic complex, commutative image."""
    betti = betti_numbers(C)
    if any(betti.values()):
        nz = {n: b for n, b in betti.items() if b}
        raise NotAcyclicError(f"complex is not acyclic over the fraction field; homology ranks {nz}")
    if not C.dims:
        return TorsionClass.trivial(C.rank)
    A, U = torsion_matrices(C)
    num, den = det(A), det(U)
    if not num or not den:
        raise ArithmeticError("vanishing determinant for an acyclic complex")
    return TorsionClass(num, den)


def classical_torsion(C: BasedChainComplex, gamma: Mapping[int, LMatrix]) -> TorsionClass:
    """``det((c + gamma)_odd)`` for an honest chain contraction ``gamma_n: C_n -> C_{n+1}``."""
    odd, ev = _odd_even(C)
    blocks = []
    for n in odd:
        row = []
        for m in ev:
            if m == n - 1:
                row.append(C.d(n))
            elif m == n + 1:
                row.append(gamma.get(n, LMatrix(C.rank, C.dim(n), C.dim(n + 1))))
            else:
                row.append(None)
        blocks.append(row)
    A = block_matrix(C.rank, blocks, [C.dim(n) for n in odd], [C.dim(n) for n in ev])
    return TorsionClass(det(A))


def laplace_identity_sides(C: BasedChainComplex):
    """Both sides of ``rho + *rho = -sum (-1)^n n [Delta_n]`` as torsion classes."""
    rho = torsion(C)
    lhs = rho * rho.star()
    rhs = TorsionClass.trivial(C.rank)
    for n in C.degrees():
        k = -((-1) ** (n % 2)) * n
        if k:
            rhs = rhs * TorsionClass(det(laplacian(C, n))) ** k
    return lhs, rhs


def laplace_identity_check(C: BasedChainComplex) -> bool:
    lhs, rhs = laplace_identity_sides(C)
    return lhs == rhs


@dataclass
class ChainMap:
    source: BasedChainComplex
    target: BasedChainComplex
    maps: dict = field(default_factory=dict)

    def f(self, n) -> LMatrix:
        m = self.maps.get(n)
        if m is None:
            return LMatrix(self.source.rank, self.source.dim(n), self.target.dim(n))
        return m

    def is_chain_map(self):
        for n, m in self.maps.items():
            if m.shape != (self.source.dim(n), self.target.dim(n)):
                return False
        degs = set(self.source.degrees()) | set(self.target.degrees())
        for n in degs | {n + 1 for n in degs}:
            if not (self.source.d(n) @ self.f(n - 1) - self.f(n) @ self.target.d(n)).is_zero():
                return False
        return True


def identity_map(C: BasedChainComplex) -> ChainMap:
    return ChainMap(C, C, {n: LMatrix.identity(C.rank, d) for n, d in C.dims.items()})


def laplacian_map(C: BasedChainComplex) -> ChainMap:
    return ChainMap(C, C, {n: laplacian(C, n) for n in C.degrees()})


def direct_sum(C: BasedChainComplex, D: BasedChainComplex) -> BasedChainComplex:
    if C.rank != D.rank:
        raise DomainError("direct sum of complexes over different rings")
    degs = set(C.dims) | set(D.dims)
    dims = {n: C.dim(n) + D.dim(n) for n in degs}
    diffs = {}
    for n in degs:
        if (n - 1) in degs:
            diffs[n] = block_matrix(C.rank, [[C.d(n), None], [None, D.d(n)]],
                                    [C.dim(n), D.dim(n)], [C.dim(n - 1), D.dim(n - 1)])
    return BasedChainComplex(C.rank, dims, diffs)


def suspension(C: BasedChainComplex) -> BasedChainComplex:
    """``(Sigma C)_n = C_{n-1}`` with differential ``-c_{n-1}``."""
    return BasedChainComplex(C.rank, {n + 1: d for n, d in C.dims.items()},
                             {n + 1: -m for n, m in C.differentials.items()})


def cone(f: ChainMap) -> BasedChainComplex:
    """Mapping cone: ``cone_n = C_{n-1} + D_n``, differential ``((-c, f), (0, d))``."""
    if not f.is_chain_map():
        raise DomainError("cone needs a chain map")
    C, D = f.source, f.target
    if C.rank != D.rank:
        raise DomainError("chain map between complexes over different rings")
    degs = {n + 1 for n in C.dims} | set(D.dims)
    dims = {n: C.dim(n - 1) + D.dim(n) for n in degs}
    diffs = {}
    for n in degs:
        if (n - 1) not in degs:
            continue
        diffs[n] = block_matrix(C.rank, [[-C.d(n - 1), f.f(n - 1)], [None, D.d(n)]],
                                [C.dim(n - 1), D.dim(n)], [C.dim(n - 2), D.dim(n - 1)])
    return BasedChainComplex(C.rank, dims, diffs)


def change_basis(C: BasedChainComplex, B: Mapping[int, LMatrix], B_inv: Mapping[int, LMatrix]) -> BasedChainComplex:
    """Conjugate each differential: ``c'_n = B_n c_n B_{n-1}^{-1}``."""
    diffs = {}
    for n in C.differentials:
        bn = B.get(n) or LMatrix.identity(C.rank, C.dim(n))
        bi = B_inv.get(n - 1) or LMatrix.identity(C.rank, C.dim(n - 1))
        diffs[n] = bn @ C.d(n) @ bi
    return BasedChainComplex(C.rank, C.dims, diffs)


# random generators -----------------------------------------------------

def random_laurent(rng: random.Random, rank=1, max_terms=3, max_exp=2, max_coeff=3, nonzero=True):
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            e = tuple(rng.randint(-max_exp, max_exp) for _ in range(rank))
            terms[e] = rng.choice([c for c in range(-max_coeff, max_coeff + 1) if c])
        p = LaurentPoly(rank, terms)
        if p or not nonzero:
            return p


def random_matrix(rng, rank, nrows, ncols, density=0.5, **kw):
    rows = [[random_laurent(rng, rank, **kw) if rng.random() < density else LaurentPoly(rank)
             for _ in range(ncols)] for _ in range(nrows)]
    return LMatrix(rank, nrows, ncols, rows)


def random_unipotent(rng, rank, n, **kw):
    """Random unipotent lower-triangular matrix and its inverse."""
    L = LMatrix.identity(rank, n)
    for i in range(n):
        for j in range(i):
            if rng.random() < 0.5:
                L.rows[i][j] = random_laurent(rng, rank, **kw)
    # forward substitution for the inverse of a unipotent lower-triangular matrix
    inv = LMatrix.identity(rank, n)
    for i in range(n):
        for j in range(i):
            acc = LaurentPoly(rank)
            for k in range(j, i):
                if L.rows[i][k] and inv.rows[k][j]:
                    acc = acc + L.rows[i][k] * inv.rows[k][j]
            inv.rows[i][j] = -acc
    return L, inv


def random_monomial_diagonal(rng, rank, n):
    """Diagonal of random +-monomials and its inverse."""
    D = LMatrix.identity(rank, n)
    Di = LMatrix.identity(rank, n)
    for i in range(n):
        e = tuple(rng.randint(-2, 2) for _ in range(rank))
        s = rng.choice([1, -1])
        D.rows[i][i] = LaurentPoly.monomial(e, s)
        Di.rows[i][i] = LaurentPoly.monomial(tuple(-x for x in e), s)
    return D, Di


def random_nullhomotopic_map(rng, C, D, **kw) -> ChainMap:
    """``f_n = c_n H_{n-1} + H_n d_{n+1}`` for random ``H_n: C_n -> D_{n+1}``."""
    H = {n: random_matrix(rng, C.rank, C.dim(n), D.dim(n + 1), **kw) for n in C.degrees()}

    def h(n):
        return H.get(n) or LMatrix(C.rank, C.dim(n), D.dim(n + 1))

    maps = {n: C.d(n) @ h(n - 1) + h(n) @ D.d(n + 1) for n in C.degrees()}
    return ChainMap(C, D, maps)


def random_acyclic_with_torsion(rank: int, seed, pieces: int | None = None, max_length: int = 4,
                                poly_kw=None):
    """Random acyclic complex together with its torsion known by construction.

    Built from elementary complexes ``el(p)`` with bookkeeping through direct
    sums (multiply), suspensions (invert), cones of chain maps into another
    acyclic complex (divide) and unipotent/monomial base changes (no change).
    Degrees stay within ``[0, max_length]``.
    """
    rng = random.Random(seed)
    kw = dict(max_terms=2, max_exp=1, max_coeff=2)
    kw.update(poly_kw or {})
    if pieces is None:
        pieces = rng.randint(1, 3)
    if pieces <= 0:
        one = LaurentPoly.constant(rank, 1)
        return el(one), TorsionClass.trivial(rank)

    def piece():
        p = random_laurent(rng, rank, **kw)
        top = rng.randint(1, max_length)
        C = el(p, degree=top)
        t = TorsionClass(p) if top % 2 else TorsionClass(p).inverse()
        return C, t

    C, t = piece()
    for _ in range(pieces - 1):
        D, s = piece()
        op = rng.random()
        if op < 0.5:
            C, t = direct_sum(C, D), t * s
        else:
            # cone(f: D -> C) sits in 0 -> C -> cone -> Sigma D -> 0
            lo = min(min(C.dims), min(D.dims) + 1)
            hi = max(max(C.dims), max(D.dims) + 1)
            if lo < 0 or hi > max_length:
                C, t = direct_sum(C, D), t * s
                continue
            f = random_nullhomotopic_map(rng, D, C, density=0.5, **kw)
            C, t = cone(f), t / s
    B, Bi = {}, {}
    for n, d in C.dims.items():
        L, Li = random_unipotent(rng, rank, d, **kw)
        M, Mi = random_monomial_diagonal(rng, rank, d)
        perm = list(range(d))
        rng.shuffle(perm)
        P = LMatrix.identity(rank, d).permuted(row_perm=perm)
        inv_perm = [perm.index(i) for i in range(d)]
        Pi = LMatrix.identity(rank, d).permuted(row_perm=inv_perm)
        B[n] = P @ M @ L
        Bi[n] = Li @ Mi @ Pi
    return change_basis(C, B, Bi), t


def random_acyclic(rank: int, seed, pieces: int | None = None, max_length: int = 4) -> BasedChainComplex:
    return random_acyclic_with_torsion(rank, seed, pieces, max_length)[0]
