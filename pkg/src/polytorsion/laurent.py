"""Multivariate Laurent polynomials over Z and matrices over them.

A :class:`LaurentPoly` of rank ``r`` is a dict from exponent tuples in Z^r to
non-zero integers. The monomial order used for leading terms is plain
lexicographic order on exponent tuples, which is a group order on Z^r, so
leading terms are multiplicative and exact division terminates.
"""
from __future__ import annotations

from collections import defaultdict
from math import gcd

from .errors import DomainError


class LaurentPoly:
    __slots__ = ("rank", "terms", "_hash")

    def __init__(self, rank: int, terms=None):
        self.rank = rank
        clean = {}
        if terms:
            for e, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    e = tuple(e)
                    if len(e) != rank:
                        raise DomainError(f"exponent {e} has wrong length for rank {rank}")
                    clean[e] = clean.get(e, 0) + c
            clean = {e: c for e, c in clean.items() if c}
        self.terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, rank, c=1):
        return cls(rank, {(0,) * rank: c})

    @classmethod
    def zero(cls, rank):
        return cls(rank)

    @classmethod
    def monomial(cls, exponent, coeff=1):
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coeff})

    @classmethod
    def variable(cls, rank, i, power=1):
        return cls.monomial(tuple(power if j == i else 0 for j in range(rank)))

    @classmethod
    def univariate(cls, coeffs, shift=0):
        """``coeffs[k]`` is the coefficient of ``z^(k + shift)``."""
        return cls(1, {(k + shift,): c for k, c in enumerate(coeffs)})

    # protocol -----------------------------------------------------------
    def __repr__(self):
        return f"LaurentPoly({self.to_str()})"

    def to_str(self, names=None):
        if not self.terms:
            return "0"
        names = names or (["z"] if self.rank == 1 else [f"x{i}" for i in range(self.rank)])
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == ({(0,) * self.rank: other} if other else {})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.rank != self.rank:
                raise DomainError(f"rank mismatch: {self.rank} vs {other.rank}")
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.rank, other)
        return None

    # ring operations ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly(self.rank, acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.rank, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return LaurentPoly(self.rank)
        acc = defaultdict(int)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                acc[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return LaurentPoly(self.rank, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_unit():
                raise DomainError("only units have negative powers")
            return self.unit_inverse() ** (-k)
        out = LaurentPoly.constant(self.rank, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def bar(self):
        """Involution ``sum c_g g -> sum c_g g^-1`` (negate exponents)."""
        return LaurentPoly(self.rank, {tuple(-x for x in e): c for e, c in self.terms.items()})

    # structure ----------------------------------------------------------
    def exponents(self):
        return sorted(self.terms)

    def leading(self):
        e = max(self.terms)
        return e, self.terms[e]

    def trailing(self):
        e = min(self.terms)
        return e, self.terms[e]

    def is_monomial(self):
        return len(self.terms) == 1

    def is_unit(self):
        return self.is_monomial() and abs(next(iter(self.terms.values()))) == 1

    def unit_inverse(self):
        (e, c), = self.terms.items()
        return LaurentPoly(self.rank, {tuple(-x for x in e): c})

    def content(self):
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def shift(self, h):
        return LaurentPoly(self.rank, {tuple(a + b for a, b in zip(e, h)): c for e, c in self.terms.items()})

    def normalized(self):
        """Representative modulo +-monomials: lex-min exponent 0, its coefficient positive."""
        if not self.terms:
            return self
        e, c = self.trailing()
        out = self.shift(tuple(-x for x in e))
        return -out if c < 0 else out

    def degree_span(self, i=0):
        vals = [e[i] for e in self.terms]
        return max(vals) - min(vals)

    def newton_polytope(self):
        from .polytope_group import IntegralPolytope

        if not self.terms:
            raise DomainError("Newton polytope of the zero polynomial")
        return IntegralPolytope(self.terms.keys(), self.rank)

    def substitute(self, images):
        """Ring map sending variable ``i`` to the monomial with exponent ``images[i]``."""
        target = len(images[0]) if images else 0
        acc = defaultdict(int)
        for e, c in self.terms.items():
            acc[tuple(sum(k * img[j] for k, img in zip(e, images)) for j in range(target))] += c
        return LaurentPoly(target, acc)

    def evaluate(self, point):
        from fractions import Fraction

        total = Fraction(0)
        for e, c in self.terms.items():
            term = Fraction(c)
            for x, k in zip(point, e):
                term *= Fraction(x) ** k
            total += term
        return total

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly | None":
        """Quotient if ``other`` divides ``self`` in Z[Z^r], otherwise ``None``."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if not self.terms:
            return LaurentPoly(self.rank)
        if other.is_monomial():
            (e, c), = other.terms.items()
            if any(v % c for v in self.terms.values()):
                return None
            return LaurentPoly(self.rank, {tuple(a - b for a, b in zip(k, e)): v // c
                                           for k, v in self.terms.items()})
        le, lc = other.leading()
        te, _ = other.trailing()
        floor = tuple(a - b for a, b in zip(min(self.terms), te))
        rem = dict(self.terms)
        quot = {}
        while rem:
            e = max(rem)
            c = rem[e]
            if c % lc:
                return None
            q_e = tuple(a - b for a, b in zip(e, le))
            if q_e < floor:
                return None
            q_c = c // lc
            quot[q_e] = q_c
            for oe, oc in other.terms.items():
                k = tuple(a + b for a, b in zip(q_e, oe))
                v = rem.get(k, 0) - q_c * oc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return LaurentPoly(self.rank, quot)

    # serialization ------------------------------------------------------
    def to_json(self):
        return [[list(e), self.terms[e]] for e in sorted(self.terms)]

    @classmethod
    def from_json(cls, rank, data):
        if isinstance(data, int):
            return cls.constant(rank, data)
        if isinstance(data, dict):
            return cls(rank, {tuple(int(x) for x in k.split(",")) if k else (): v for k, v in data.items()})
        return cls(rank, {tuple(e): int(c) for e, c in data})

    def to_sympy(self, symbols):
        """Polynomial (after clearing the monomial denominator) and the shift used."""
        import sympy

        if not self.terms:
            return sympy.Integer(0), (0,) * self.rank
        low = tuple(min(e[i] for e in self.terms) for i in range(self.rank))
        expr = sympy.Integer(0)
        for e, c in self.terms.items():
            term = sympy.Integer(c)
            for s, k, l in zip(symbols, e, low):
                term *= s ** (k - l)
            expr += term
        return expr, low

    @classmethod
    def from_sympy(cls, expr, symbols):
        import sympy

        poly = sympy.Poly(sympy.expand(expr), *symbols)
        return cls(len(symbols), {tuple(int(k) for k in m): int(c) for m, c in poly.terms()})


class LMatrix:
    """Dense matrix of :class:`LaurentPoly`; shape is kept even when empty."""

    __slots__ = ("rank", "nrows", "ncols", "rows")

    def __init__(self, rank, nrows, ncols, rows=None):
        self.rank = rank
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            z = LaurentPoly(rank)
            rows = [[z] * ncols for _ in range(nrows)]
        rows = [list(r) for r in rows]
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise DomainError(f"matrix data does not match shape {nrows}x{ncols}")
        self.rows = [[_lift(x, rank) for x in r] for r in rows]

    @classmethod
    def identity(cls, rank, n, scalar=1):
        m = cls(rank, n, n)
        for i in range(n):
            m.rows[i][i] = _lift(scalar, rank)
        return m

    @classmethod
    def from_lists(cls, rank, rows, ncols=None):
        rows = list(rows)
        if ncols is None:
            if not rows:
                raise DomainError("cannot infer the column count of an empty matrix")
            ncols = len(rows[0])
        return cls(rank, len(rows), ncols, rows)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __repr__(self):
        return f"LMatrix({self.nrows}x{self.ncols}, {[[p.to_str() for p in r] for r in self.rows]})"

    def __eq__(self, other):
        return isinstance(other, LMatrix) and self.shape == other.shape and self.rows == other.rows

    __hash__ = None

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def is_zero(self):
        return not any(x for r in self.rows for x in r)

    def __add__(self, other):
        if self.shape != other.shape:
            raise DomainError(f"shape mismatch {self.shape} + {other.shape}")
        return LMatrix(self.rank, self.nrows, self.ncols,
                       [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return LMatrix(self.rank, self.nrows, self.ncols, [[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise DomainError(f"shape mismatch {self.shape} @ {other.shape}")
        z = LaurentPoly(self.rank)
        out = []
        for r in self.rows:
            row = []
            for j in range(other.ncols):
                acc = z
                for k, a in enumerate(r):
                    if a:
                        b = other.rows[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LMatrix(self.rank, self.nrows, other.ncols, out)

    def scale(self, p):
        p = _lift(p, self.rank)
        return LMatrix(self.rank, self.nrows, self.ncols, [[p * a for a in r] for r in self.rows])

    def transpose(self):
        return LMatrix(self.rank, self.ncols, self.nrows,
                       [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    def star(self):
        """Transpose with the bar involution applied entrywise."""
        return LMatrix(self.rank, self.ncols, self.nrows,
                       [[self.rows[i][j].bar() for i in range(self.nrows)] for j in range(self.ncols)])

    def permuted(self, row_perm=None, col_perm=None):
        rp = row_perm or list(range(self.nrows))
        cp = col_perm or list(range(self.ncols))
        return LMatrix(self.rank, self.nrows, self.ncols, [[self.rows[i][j] for j in cp] for i in rp])

    def to_json(self):
        return [[p.to_json() for p in r] for r in self.rows]


def _lift(x, rank):
    if isinstance(x, LaurentPoly):
        if x.rank != rank:
            raise DomainError(f"entry of rank {x.rank} in a rank-{rank} matrix")
        return x
    if isinstance(x, int):
        return LaurentPoly.constant(rank, x)
    raise DomainError(f"cannot use {x!r} as a Laurent matrix entry")


def block_matrix(rank, blocks, row_sizes, col_sizes):
    """Assemble from a grid of blocks; ``None`` means a zero block."""
    out = LMatrix(rank, sum(row_sizes), sum(col_sizes))
    r0 = 0
    for bi, rs in enumerate(row_sizes):
        c0 = 0
        for bj, cs in enumerate(col_sizes):
            b = blocks[bi][bj]
            if b is not None:
                if b.shape != (rs, cs):
                    raise DomainError(f"block ({bi},{bj}) has shape {b.shape}, expected {(rs, cs)}")
                for i in range(rs):
                    out.rows[r0 + i][c0:c0 + cs] = b.rows[i]
            c0 += cs
        r0 += rs
    return out


def _bareiss(M: LMatrix, want_rank=False):
    """Fraction-free elimination. Returns ``(det_or_None, rank)``.

    Every division is exact in the integral domain Z[Z^r].
    """
    a = [list(r) for r in M.rows]
    n, m = M.nrows, M.ncols
    one = LaurentPoly.constant(M.rank, 1)
    prev = one
    sign = 1
    r = 0
    for c in range(m):
        if r == n:
            break
        piv = None
        best = None
        for i in range(r, n):
            if a[i][c]:
                size = len(a[i][c].terms)
                if best is None or size < best:
                    piv, best = i, size
        if piv is None:
            if not want_rank:
                return LaurentPoly(M.rank), None
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            sign = -sign
        p = a[r][c]
        for i in range(r + 1, n):
            lead = a[i][c]
            row = a[i]
            pr = a[r]
            for j in range(c + 1, m):
                v = p * row[j]
                if lead and pr[j]:
                    v = v - lead * pr[j]
                if prev != one and v:
                    q = v.divexact(prev)
                    if q is None:
                        raise ArithmeticError("inexact Bareiss division; the ring is not a domain?")
                    v = q
                row[j] = v
            row[c] = LaurentPoly(M.rank)
        prev = p
        r += 1
    if want_rank:
        return None, r
    if n != m:
        raise DomainError("determinant of a non-square matrix")
    det = a[n - 1][n - 1] if n else one
    return (det if sign > 0 else -det), n


def det(M: LMatrix) -> LaurentPoly:
    """Exact determinant over Z[Z^r] via Bareiss elimination."""
    if M.nrows != M.ncols:
        raise DomainError(f"determinant of a non-square {M.nrows}x{M.ncols} matrix")
    if M.nrows == 0:
        return LaurentPoly.constant(M.rank, 1)
    d, _ = _bareiss(M)
    return d


def rank_over_fraction_field(M: LMatrix) -> int:
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return _bareiss(M, want_rank=True)[1]
