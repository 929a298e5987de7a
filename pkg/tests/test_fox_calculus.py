from itertools import combinations
from math import gcd

import pytest
import sympy
from hypothesis import given, strategies as st

from polytorsion.errors import CommutativeImageError, DomainError, ParseError
from polytorsion.fox_calculus import (FreeWord, GroupRingElement, abelianize, fox_derivative,
                                      fundamental_identity_check, newton_polytope, one_relator_polytope,
                                      parse_presentation, parse_word, presentation_from_strings,
                                      relator_matrix, smith_normal_form, word_inv, word_mul, word_reduce)
from polytorsion.polytope_group import IntegralPolytope, PolytopeClass, PolytopeGroupElement, interval

XY = ("x", "y")
x, y = FreeWord.gen(0), FreeWord.gen(1)
X, Y = x.inverse(), y.inverse()
ONE = GroupRingElement.one()


def W(text, names=XY):
    return parse_word(text, names)


def R(w):
    return GroupRingElement.word(w)


letters = st.tuples(st.integers(0, 2), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=12).map(word_reduce)


def test_word_examples():
    assert word_reduce([(0, 1), (0, -1)]).is_identity()
    assert word_mul(x * y, Y * x) == x * x
    assert word_inv(x * y * X) == x * Y * X
    assert W("x^2 Y x^-1") == x * x * Y * X


@given(words, words, words)
def test_free_group_laws(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert (u * u.inverse()).is_identity()
    assert (u * v).inverse() == v.inverse() * u.inverse()


def test_fox_examples():
    assert fox_derivative(x * y * X * Y, 0) == ONE - R(x * y * X)
    assert fox_derivative(x, 0) == ONE
    assert fox_derivative(x * y * x * Y * X * Y, 0) == ONE + R(x * y) - R(x * y * x * Y * X)


def test_fox_commutator_abelianizes_to_one_minus_y():
    p = presentation_from_strings("x y", ["x y X Y"])
    ab = abelianize(p)
    d = fox_derivative(p.relators[0], 0).abelianize(ab)
    assert d.to_json() == [[[0, 0], 1], [[0, 1], -1]]


@given(words, words, st.integers(0, 2))
def test_fox_product_rule(u, v, i):
    assert fox_derivative(u * v, i) == fox_derivative(u, i) + R(u) * fox_derivative(v, i)


@given(words, st.integers(0, 2), st.integers(0, 2))
def test_fox_on_generators(u, i, j):
    assert fox_derivative(FreeWord.gen(j), i) == (ONE if i == j else GroupRingElement())
    assert fox_derivative(FreeWord.gen(j, -1), i) == (-R(FreeWord.gen(j, -1)) if i == j else GroupRingElement())


def test_fundamental_identity_examples():
    assert fundamental_identity_check(x)
    assert fundamental_identity_check(x * y * X * Y)


@given(words)
def test_fundamental_identity(w):
    assert fundamental_identity_check(w, 3)


def test_fox_index_errors():
    with pytest.raises(DomainError):
        fox_derivative(x * y, 2, generator_count=2)
    with pytest.raises(DomainError):
        fox_derivative(FreeWord.gen(3), 0, generator_count=2)


# parsing -----------------------------------------------------------------

def test_parse_presentation_comments_and_powers():
    p = parse_presentation("# trefoil\ngens: x y\nrel: x y x Y X Y   # braid form\n")
    assert p.generator_names == XY
    assert p.relators == (x * y * x * Y * X * Y,)
    assert p.deficiency == 1


@pytest.mark.parametrize("text, line, column", [
    ("gens: x y\nrel: x q", 2, 8),
    ("rel: x", 1, 1),
    ("gens: x y\nfoo: x", 2, 1),
    ("gens: x x", 1, 9),
    ("", 1, 1),
])
def test_parse_errors_report_position(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_presentation(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_parse_rejects_trivial_relator():
    with pytest.raises(ParseError):
        parse_presentation("gens: x\nrel: x X")


@given(st.lists(words.filter(lambda w: not w.is_identity()), max_size=3))
def test_text_round_trip(rels):
    p = presentation_from_strings("x y z", [r.to_text(("x", "y", "z")) for r in rels])
    assert p.relators == tuple(rels)
    assert parse_presentation(p.to_text()) == p


# abelianization -----------------------------------------------------------

def test_abelianize_examples():
    ab = abelianize(presentation_from_strings("x y", ["x y X Y"]))
    assert ab.free_rank == 2 and ab.projection.matrix == ((1, 0), (0, 1)) and not ab.torsion_invariants
    ab = abelianize(presentation_from_strings("x y", ["x^2 y^-3"]))
    assert ab.free_rank == 1 and ab.projection.matrix == ((3, 2),)
    ab = abelianize(presentation_from_strings("x y", ["x y x Y X Y"]))
    assert ab.free_rank == 1 and ab.projection.matrix == ((1, 1),)


def test_abelianize_torsion_part():
    ab = abelianize(presentation_from_strings("x y", ["x^6", "y^4 x^2"]))
    assert ab.free_rank == 0 and ab.torsion_invariants == (2, 12)


int_rows = st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=3)


@given(int_rows)
def test_smith_normal_form(A):
    U, D, V = smith_normal_form(A)
    S = sympy.Matrix(U) * sympy.Matrix(A) * sympy.Matrix(V)
    assert S == sympy.Matrix(D)
    assert abs(sympy.Matrix(U).det()) == 1 and abs(sympy.Matrix(V).det()) == 1
    diag = [D[i][i] for i in range(min(len(A), 3))]
    assert all(d >= 0 for d in diag)
    assert all(b % a == 0 if a else b == 0 for a, b in zip(diag, diag[1:]))
    assert all(D[i][j] == 0 for i in range(len(A)) for j in range(3) if i != j)


@given(int_rows)
def test_projection_kills_relators_and_is_onto(A):
    rels = []
    for row in A:
        letters = [(j, 1 if e > 0 else -1) for j, e in enumerate(row) for _ in range(abs(e))]
        rels.append(word_reduce(letters))
    rels = [r for r in rels if not r.is_identity()]
    p = presentation_from_strings("x y z", [r.to_text(("x", "y", "z")) for r in rels])
    ab = abelianize(p)
    M = relator_matrix(p)
    assert ab.free_rank == 3 - (sympy.Matrix(M).rank() if M else 0)
    P = ab.projection.matrix
    for row in M:
        assert all(sum(a * b for a, b in zip(prow, row)) == 0 for prow in P)
    if ab.free_rank:
        minors = [sympy.Matrix([[P[i][j] for j in cols] for i in range(len(P))]).det()
                  for cols in combinations(range(3), len(P))]
        g = 0
        for m in minors:
            g = gcd(g, int(m))
        assert g == 1


# Newton polytopes ------------------------------------------------------------

def test_newton_polytope_examples():
    torus = presentation_from_strings("x y", ["x y X Y"])
    ab = abelianize(torus)
    assert newton_polytope(ONE - R(x * y * X), ab) == IntegralPolytope([(0, 0), (0, 1)])
    assert newton_polytope(R(y) - ONE, ab) == IntegralPolytope([(0, 0), (0, 1)])
    trefoil = abelianize(presentation_from_strings("x y", ["x y x Y X Y"]))
    assert newton_polytope(ONE + R(x * y) - R(x * y * x * Y * X), trefoil) == interval(0, 2)


def test_newton_polytope_cancellation_is_reported():
    ab = abelianize(presentation_from_strings("x y", ["x y X Y"]))
    with pytest.raises(CommutativeImageError):
        newton_polytope(R(x * y) - R(y * x), ab)
    with pytest.raises(DomainError):
        newton_polytope(GroupRingElement(), ab)


def test_one_relator_polytope_examples():
    assert one_relator_polytope(presentation_from_strings("x y", ["x y X Y"])).is_zero()
    one = PolytopeClass(PolytopeGroupElement(interval(0, 1)))
    assert one_relator_polytope(presentation_from_strings("x y", ["x y x Y X Y"])) == one
    assert one_relator_polytope(presentation_from_strings("x y", ["x^2 y^-3"])) == one


def test_one_relator_polytope_either_generator():
    p = presentation_from_strings("x y", ["x^2 y^-5"])
    assert one_relator_polytope(p, 0) == one_relator_polytope(p, 1)


def test_one_relator_polytope_preconditions():
    with pytest.raises(DomainError):
        one_relator_polytope(presentation_from_strings("x y z", ["x y X Y"]))
    with pytest.raises(DomainError):
        one_relator_polytope(presentation_from_strings("x y", ["x^3"]))
