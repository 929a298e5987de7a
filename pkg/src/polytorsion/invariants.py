"""From a group presentation to torsion, polytope and Thurston-norm data.

Everything is computed in the commutative image: the chain complex of the
presentation 2-complex is pushed to the Laurent ring of ``H_1(G)/tors``.
The sign conventions follow the universal torsion: the circle has torsion
``(z - 1)`` and a two-generator one-relator group has torsion
``(y - 1) / (dR/dx)``, so the torsion polytope ``P(-rho)`` of a knot is
``[N(Delta)] - [N(t - 1)]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import CommutativeImageError, DomainError, NotAcyclicError
from .fox_calculus import (AbelianizationData, FreeWord, GroupRingElement, Presentation,
                           abelianize, fox_derivative, one_relator_polytope)
from .laurent import LaurentPoly, LMatrix
from .polytope_group import PolytopeClass
from .torsion import BasedChainComplex, TorsionClass, betti_numbers, torsion, validate_complex


@dataclass(frozen=True)
class PresentationComplex:
    presentation: Presentation
    ab: AbelianizationData
    complex: BasedChainComplex

    @property
    def rank(self):
        return self.ab.free_rank


def fox_jacobian(p: Presentation, ab: AbelianizationData) -> LMatrix:
    """Relators x generators matrix of abelianized Fox derivatives."""
    rows = [[fox_derivative(R, i).abelianize(ab) for i in range(p.generator_count)] for R in p.relators]
    return LMatrix(ab.free_rank, len(p.relators), p.generator_count, rows)


def presentation_complex(p: Presentation) -> PresentationComplex:
    """``Z[H]^m --Fox--> Z[H]^k --(x_i - 1)--> Z[H]`` in degrees 2, 1, 0."""
    ab = abelianize(p)
    r = ab.free_rank
    if r == 0:
        raise DomainError("abelianization has free rank 0; no Laurent variables to work with")
    one = LaurentPoly.constant(r, 1)
    col = LMatrix(r, p.generator_count, 1,
                  [[LaurentPoly.monomial(ab.project_generator(i)) - one] for i in range(p.generator_count)])
    dims = {1: p.generator_count, 0: 1}
    diffs = {1: col}
    if p.relators:
        dims[2] = len(p.relators)
        diffs[2] = fox_jacobian(p, ab)
    C = BasedChainComplex(r, dims, diffs)
    if not validate_complex(C):
        raise ArithmeticError("presentation complex fails d o d = 0")
    return PresentationComplex(p, ab, C)


def universal_torsion_commutative(p: Presentation) -> TorsionClass:
    """Torsion of the presentation complex over the free abelian quotient."""
    pc = presentation_complex(p)
    betti = betti_numbers(pc.complex)
    if any(betti.values()):
        nz = {n: b for n, b in betti.items() if b}
        raise NotAcyclicError(
            f"presentation complex is not acyclic over the fraction field (homology ranks {nz}); "
            "either the group has positive first L2-Betti number or the commutative image is insufficient")
    return torsion(pc.complex)


def one_relator_torsion(p: Presentation, wrt: int = 0) -> TorsionClass:
    """Closed form ``(y - 1) / (dR/dx)`` for two generators and one relator."""
    if p.generator_count != 2 or len(p.relators) != 1:
        raise DomainError("closed form needs two generators and one relator")
    ab = abelianize(p)
    dR = fox_derivative(p.relators[0], wrt).abelianize(ab)
    other = 1 - wrt
    y1 = (GroupRingElement.word(FreeWord.gen(other)) - GroupRingElement.one()).abelianize(ab)
    if not dR or not y1:
        raise CommutativeImageError("a Fox derivative or y - 1 vanishes in the free abelian quotient")
    return TorsionClass(y1, dR)


def l2_torsion_polytope(p: Presentation) -> PolytopeClass:
    """``P(-rho)``: Newton polytopes of the negative torsion, modulo translation."""
    return universal_torsion_commutative(p).polytope_of_negative()


@dataclass(frozen=True)
class ThurstonData:
    """Candidate Thurston data; only meaningful for admissible 3-manifold groups."""

    polytope_class: PolytopeClass
    dual_polytope_class: PolytopeClass
    symmetric: bool

    def seminorm(self, phi) -> Fraction:
        return 2 * self.polytope_class.seminorm(tuple(phi))

    __call__ = seminorm

    @property
    def rank(self):
        return self.polytope_class.rank


def thurston_data(p: Presentation) -> ThurstonData:
    P = l2_torsion_polytope(p)
    doubled = P * 2
    return ThurstonData(P, doubled, doubled.star() == doubled)


def thurston_norm(p: Presentation, phi) -> Fraction:
    return thurston_data(p).seminorm(phi)


def duality_check(p: Presentation) -> bool:
    """``*P == P`` in the polytope group modulo translation."""
    P = l2_torsion_polytope(p)
    return P.star() == P


def torsion_self_dual(p: Presentation) -> bool:
    """Empirical torsion-level check ``*rho == rho`` modulo +-monomials."""
    rho = universal_torsion_commutative(p)
    return rho.star() == rho


# knots --------------------------------------------------------------------

def wirtinger_presentation(crossings, arcs: int | None = None, simplify: bool = True) -> Presentation:
    """Knot group from a crossing list of ``(over, under_in, under_out, sign)``.

    Arc ``under_out`` equals ``x_over^s x_under_in x_over^-s``. One relator is
    dropped (it follows from the others), then generators occurring exactly
    once in some relator are eliminated by substitution.
    """
    crossings = [tuple(c) for c in crossings]
    if not crossings:
        raise DomainError("empty crossing list")
    n = arcs if arcs is not None else 1 + max(max(c[:3]) for c in crossings)
    rels = []
    for over, a, b, s in crossings:
        if s not in (1, -1):
            raise DomainError(f"crossing sign must be +-1, got {s}")
        x = FreeWord.gen(over, s)
        rels.append(x * FreeWord.gen(a) * x.inverse() * FreeWord.gen(b).inverse())
    rels = [r for r in rels[:-1] if not r.is_identity()]
    gens = list(range(n))
    if simplify:
        gens, rels = _eliminate(gens, rels)
    index = {g: i for i, g in enumerate(gens)}
    names = tuple(_gen_name(i) for i in range(len(gens)))
    renamed = [FreeWord([(index[g], e) for g, e in r]) for r in rels]
    return Presentation(names, tuple(r for r in renamed if not r.is_identity()))


def _gen_name(i):
    letters = "xyzwuvabcdefghpqrst"
    return letters[i] if i < len(letters) else f"g{i}"


def _eliminate(gens, rels):
    gens = list(gens)
    rels = list(rels)
    changed = True
    while changed and len(gens) > 1:
        changed = False
        for ri, r in enumerate(rels):
            counts = {}
            for g, _ in r:
                counts[g] = counts.get(g, 0) + 1
            once = [g for g, c in sorted(counts.items()) if c == 1]
            if not once:
                continue
            g = once[-1]
            k = next(i for i, (h, _) in enumerate(r.letters) if h == g)
            e = r.letters[k][1]
            # r = u g^e v = 1  =>  g^e = u^-1 v^-1
            u = FreeWord(r.letters[:k])
            v = FreeWord(r.letters[k + 1:])
            repl = u.inverse() * v.inverse()
            if e == -1:
                repl = repl.inverse()
            rest = rels[:ri] + rels[ri + 1:]
            rels = [r2 for r2 in (_substitute(r2, g, repl) for r2 in rest) if not r2.is_identity()]
            gens.remove(g)
            changed = True
            break
    return gens, rels


def _substitute(word, g, repl):
    out = []
    for h, e in word:
        if h == g:
            out.extend((repl if e == 1 else repl.inverse()).letters)
        else:
            out.append((h, e))
    w = FreeWord(out)
    # cyclic reduction keeps relators short
    while len(w) > 1 and w.letters[0][0] == w.letters[-1][0] and w.letters[0][1] == -w.letters[-1][1]:
        w = FreeWord(w.letters[1:-1])
    return w


def alexander_polynomial(p: Presentation) -> LaurentPoly:
    """First elementary ideal generator of the Alexander matrix, rank-1 case.

    Independent of the torsion code: maximal minors come from sympy's
    determinant and their gcd from sympy's polynomial gcd.
    """
    import sympy

    ab = abelianize(p)
    if ab.free_rank != 1:
        raise DomainError("alexander_polynomial is implemented for H_1 free part of rank 1")
    k = p.generator_count
    m = len(p.relators)
    if m != k - 1:
        raise DomainError("needs a deficiency-one presentation")
    t = sympy.Symbol("t")
    shift = 0
    J = fox_jacobian(p, ab)
    for row in J.rows:
        for e in row:
            if e:
                shift = min(shift, min(x[0] for x in e.terms))
    mat = sympy.Matrix(m, k, lambda i, j: sum(c * t ** (x[0] - shift) for x, c in J.rows[i][j].terms.items()))
    g = sympy.Integer(0)
    for j in range(k):
        minor = mat[:, [c for c in range(k) if c != j]].det() if m else sympy.Integer(1)
        g = sympy.gcd(g, sympy.expand(minor))
    if g == 0:
        return LaurentPoly(1)
    return LaurentPoly.from_sympy(g, [t]).normalized()


def alexander_degree(p: Presentation) -> int:
    return alexander_polynomial(p).degree_span(0)
