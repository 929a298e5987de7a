"""Free groups, presentations, Fox derivatives and abelianization."""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field

from .errors import CommutativeImageError, DomainError, ParseError
from .laurent import LaurentPoly
from .polytope_group import IntegralPolytope, LatticeHom, PolytopeClass, PolytopeGroupElement


class FreeWord:
    """Freely reduced word; letters are ``(generator_index, +-1)`` pairs."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        self.letters = _reduce(letters)

    @classmethod
    def gen(cls, i, exponent=1):
        step = 1 if exponent > 0 else -1
        return cls([(i, step)] * abs(exponent))

    def __repr__(self):
        return "FreeWord(" + " ".join(_letter_str(g, e) for g, e in self.letters) + ")"

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __lt__(self, other):
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other):
        if not isinstance(other, FreeWord):
            return NotImplemented
        return FreeWord(self.letters + other.letters)

    def inverse(self):
        return FreeWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def is_identity(self):
        return not self.letters

    def exponent_sums(self, n):
        out = [0] * n
        for g, e in self.letters:
            if g >= n:
                raise DomainError(f"generator index {g} out of range for {n} generators")
            out[g] += e
        return tuple(out)

    def generators(self):
        return {g for g, _ in self.letters}

    def cyclic_permutation(self, k):
        k %= max(len(self.letters), 1)
        return FreeWord(self.letters[k:] + self.letters[:k])

    def to_text(self, names):
        return " ".join(names[g] if e > 0 else names[g].upper() for g, e in self.letters)


def _letter_str(g, e):
    return f"x{g}" if e > 0 else f"x{g}^-1"


def _reduce(letters):
    out = []
    for g, e in letters:
        g, e = int(g), int(e)
        if e not in (1, -1):
            raise DomainError(f"letter exponent must be +-1, got {e}")
        if g < 0:
            raise DomainError(f"negative generator index {g}")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def word_reduce(letters) -> FreeWord:
    return FreeWord(letters)


def word_mul(u: FreeWord, v: FreeWord) -> FreeWord:
    return u * v


def word_inv(u: FreeWord) -> FreeWord:
    return u.inverse()


IDENTITY = FreeWord()


class GroupRingElement:
    """Finite Z-linear combination of free-group words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            acc = defaultdict(int)
            for w, c in items:
                acc[w] += c
            clean = {w: c for w, c in acc.items() if c}
        self.terms = clean

    @classmethod
    def word(cls, w, coeff=1):
        return cls({w: coeff})

    @classmethod
    def one(cls):
        return cls({IDENTITY: 1})

    def __repr__(self):
        if not self.terms:
            return "GroupRingElement(0)"
        parts = [f"{c}*{w!r}" for w, c in sorted(self.terms.items())]
        return "GroupRingElement(" + " + ".join(parts) + ")"

    def __eq__(self, other):
        if isinstance(other, int):
            other = GroupRingElement.one() * other if other else GroupRingElement()
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        acc = defaultdict(int, self.terms)
        for w, c in other.terms.items():
            acc[w] += c
        return GroupRingElement(acc)

    def __neg__(self):
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement({w: c * other for w, c in self.terms.items()})
        if isinstance(other, FreeWord):
            other = GroupRingElement.word(other)
        acc = defaultdict(int)
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                acc[u * v] += a * b
        return GroupRingElement(acc)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        if isinstance(other, FreeWord):
            return GroupRingElement.word(other) * self
        return NotImplemented

    def support(self):
        return set(self.terms)

    def abelianize(self, ab: "AbelianizationData") -> LaurentPoly:
        """Push through ``Z[F] -> Z[H_1/tors]``; colliding coefficients merge."""
        acc = defaultdict(int)
        for w, c in self.terms.items():
            acc[ab.project_word(w)] += c
        return LaurentPoly(ab.free_rank, acc)

    def to_json(self, names=None):
        terms = sorted(self.terms.items())
        if names is None:
            return [[[list(l) for l in w.letters], c] for w, c in terms]
        return [[w.to_text(names), c] for w, c in terms]


def fox_derivative(word: FreeWord, i: int, generator_count: int | None = None) -> GroupRingElement:
    """Left Fox derivative ``d(word)/dx_i`` in the free group ring."""
    if i < 0 or (generator_count is not None and i >= generator_count):
        raise DomainError(f"generator index {i} out of range")
    if generator_count is not None:
        for g, _ in word:
            if g >= generator_count:
                raise DomainError(f"generator index {g} out of range")
    acc = defaultdict(int)
    prefix = []
    for g, e in word.letters:
        if g == i:
            if e == 1:
                acc[FreeWord(prefix)] += 1
            else:
                acc[FreeWord(prefix + [(g, -1)])] -= 1
        prefix.append((g, e))
    return GroupRingElement(acc)


def fundamental_identity_check(word: FreeWord, generator_count: int | None = None) -> bool:
    """``sum_i (dR/dx_i)(x_i - 1) == R - 1`` exactly in the free group ring."""
    n = generator_count if generator_count is not None else (max(word.generators(), default=-1) + 1)
    lhs = GroupRingElement()
    one = GroupRingElement.one()
    for i in range(n):
        lhs = lhs + fox_derivative(word, i) * (GroupRingElement.word(FreeWord.gen(i)) - one)
    return lhs == GroupRingElement.word(word) - one


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple
    relators: tuple = ()

    def __post_init__(self):
        names = tuple(self.generator_names)
        if not names:
            raise DomainError("a presentation needs at least one generator")
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate generator names in {names}")
        rels = tuple(self.relators)
        for r in rels:
            if r.is_identity():
                raise DomainError("empty relator")
            for g, _ in r:
                if g >= len(names):
                    raise DomainError(f"relator uses generator index {g} beyond {len(names)} generators")
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", rels)

    @property
    def generator_count(self):
        return len(self.generator_names)

    @property
    def deficiency(self):
        return self.generator_count - len(self.relators)

    def to_text(self):
        lines = ["gens: " + " ".join(self.generator_names)]
        lines += ["rel: " + r.to_text(self.generator_names) for r in self.relators]
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {"gens": list(self.generator_names),
                "rels": [r.to_text(self.generator_names) for r in self.relators]}


_NAME = re.compile(r"[a-z][a-z0-9_]*\Z")
_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?\Z")


def parse_word(text, names, line=None, col_offset=0):
    """Parse ``"x y X Y"`` (uppercase = inverse, optional ``^k`` powers)."""
    index = {n: i for i, n in enumerate(names)}
    letters = []
    for m in re.finditer(r"\S+", text):
        tok = m.group(0)
        col = col_offset + m.start() + 1
        t = _TOKEN.match(tok)
        if not t:
            raise ParseError(f"bad token {tok!r}", line, col)
        name, power = t.group(1), int(t.group(2) or 1)
        if name in index:
            g, sign = index[name], 1
        elif name.lower() in index and name == name.upper():
            g, sign = index[name.lower()], -1
        else:
            raise ParseError(f"unknown generator {name!r}", line, col)
        step = sign if power > 0 else -sign
        letters.extend([(g, step)] * abs(power))
    return FreeWord(letters)


def parse_generators(text, line=None, col_offset=0):
    names = []
    for m in re.finditer(r"\S+", text):
        if not _NAME.match(m.group(0)):
            raise ParseError(f"generator names must be lowercase identifiers, got {m.group(0)!r}",
                             line, col_offset + m.start() + 1)
        if m.group(0) in names:
            raise ParseError(f"duplicate generator {m.group(0)!r}", line, col_offset + m.start() + 1)
        names.append(m.group(0))
    if not names:
        raise ParseError("no generators declared", line, col_offset + 1)
    return tuple(names)


def parse_presentation(text: str) -> Presentation:
    """Parse the ``gens:`` / ``rel:`` text format; ``#`` starts a comment."""
    names = None
    rels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError("expected 'gens:' or 'rel:'", lineno, 1)
        key = key.strip()
        offset = len(key) + (len(line) - len(line.lstrip())) + 1
        if key == "gens":
            if names is not None:
                raise ParseError("generators declared twice", lineno, 1)
            names = parse_generators(rest, lineno, offset)
        elif key == "rel":
            if names is None:
                raise ParseError("'rel:' before 'gens:'", lineno, 1)
            w = parse_word(rest, names, lineno, offset)
            if w.is_identity():
                raise ParseError("relator reduces to the empty word", lineno, offset + 1)
            rels.append(w)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
    if names is None:
        raise ParseError("missing 'gens:' line", 1, 1)
    return Presentation(names, tuple(rels))


def presentation_from_strings(gens: str, rels) -> Presentation:
    names = parse_generators(gens)
    return Presentation(names, tuple(parse_word(r, names) for r in rels))


def smith_normal_form(matrix):
    """Return ``(U, D, V)`` with ``U @ A @ V == D`` diagonal, U and V unimodular.

    Diagonal entries are non-negative and each divides the next.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    A = [list(map(int, row)) for row in matrix]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
                        if abs(A[i][t]) < abs(A[t][t]):
                            swap_rows(t, i)
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
                        if abs(A[t][j]) < abs(A[t][t]):
                            swap_cols(t, j)
            if not done:
                continue
            # pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, A, V


def hermite_rows(rows):
    """Row-style Hermite normal form over Z (rows assumed independent)."""
    H = [list(r) for r in rows]
    if not H:
        return H
    ncols = len(H[0])
    r = 0
    for c in range(ncols):
        if r == len(H):
            break
        while True:
            nz = [i for i in range(r, len(H)) if H[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[p] = H[p], H[r]
            others = [i for i in range(r + 1, len(H)) if H[i][c]]
            if not others:
                break
            for i in others:
                q = H[i][c] // H[r][c]
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
        if r < len(H) and H[r][c]:
            if H[r][c] < 0:
                H[r] = [-x for x in H[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
            r += 1
    return H


@dataclass(frozen=True)
class AbelianizationData:
    generator_count: int
    free_rank: int
    projection: LatticeHom
    torsion_invariants: tuple = field(default=())

    def project_word(self, w: FreeWord):
        return self.projection(w.exponent_sums(self.generator_count))

    def project_generator(self, i):
        return tuple(row[i] for row in self.projection.matrix)

    def to_json(self):
        return {"free_rank": self.free_rank,
                "projection": [list(r) for r in self.projection.matrix],
                "torsion_invariants": list(self.torsion_invariants)}


def relator_matrix(p: Presentation):
    return [list(r.exponent_sums(p.generator_count)) for r in p.relators]


def abelianize(p: Presentation) -> AbelianizationData:
    """Free part of ``H_1`` via Smith normal form of the exponent-sum matrix.

    The projection is normalised to row Hermite form, which makes it
    independent of the elimination path.
    """
    k = p.generator_count
    M = relator_matrix(p)
    if M:
        _, D, V = smith_normal_form(M)
        diag = [D[i][i] for i in range(min(len(M), k))]
    else:
        V = [[int(i == j) for j in range(k)] for i in range(k)]
        diag = []
    s = sum(1 for d in diag if d)
    torsion = tuple(d for d in diag if d > 1)
    # x -> x V sends the relator lattice onto the diagonal one
    rows = [[V[j][c] for j in range(k)] for c in range(s, k)]
    proj = LatticeHom(hermite_rows(rows), source_rank=k)
    return AbelianizationData(k, k - s, proj, torsion)


def newton_polytope(u, ab: AbelianizationData | None = None) -> IntegralPolytope:
    """Hull of the projected support; coefficients cancel before the hull."""
    if isinstance(u, GroupRingElement):
        if not u:
            raise DomainError("Newton polytope of the zero element")
        u = u.abelianize(ab)
        if not u:
            raise CommutativeImageError("element vanishes in the free abelian quotient")
    if not u:
        raise DomainError("Newton polytope of the zero polynomial")
    return u.newton_polytope()


def one_relator_polytope(p: Presentation, wrt: int = 0) -> PolytopeClass:
    """``[P(dR/dx)] - [P(y - 1)]`` for a two-generator one-relator group.

    ``wrt`` picks which generator plays ``x``; the other plays ``y``.
    """
    if p.generator_count != 2 or len(p.relators) != 1:
        raise DomainError("one_relator_polytope needs exactly two generators and one relator")
    R = p.relators[0]
    if R.generators() != {0, 1}:
        raise DomainError("the relator must involve both generators")
    if wrt not in (0, 1):
        raise DomainError(f"wrt must be 0 or 1, got {wrt}")
    other = 1 - wrt
    ab = abelianize(p)
    if ab.free_rank == 0:
        raise DomainError("abelianization has no free part")
    dR = fox_derivative(R, wrt).abelianize(ab)
    if not dR:
        raise CommutativeImageError(
            f"dR/d{p.generator_names[wrt]} vanishes in the free abelian quotient")
    y_minus_1 = (GroupRingElement.word(FreeWord.gen(other)) - GroupRingElement.one()).abelianize(ab)
    if not y_minus_1:
        raise CommutativeImageError(
            f"{p.generator_names[other]} maps to 0 in the free abelian quotient")
    return PolytopeClass(PolytopeGroupElement(dR.newton_polytope(), y_minus_1.newton_polytope()))
