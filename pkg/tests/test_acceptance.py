"""Acceptance criteria C1-C9, each at its stated tolerance (all exact)."""
import random
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

from conftest import KNOTS, corpus, record
from polytorsion.fox_calculus import FreeWord, GroupRingElement, fox_derivative, fundamental_identity_check, \
    one_relator_polytope, presentation_from_strings
from polytorsion.invariants import alexander_polynomial, thurston_data, universal_torsion_commutative
from polytorsion.laurent import LaurentPoly, LMatrix
from polytorsion.polytope_group import (IntegralPolytope, Polytope, PolytopeClass, PolytopeGroupElement,
                                        canonical_class, convex_hull, dual_polytope, interval, norm_unit_ball,
                                        rank1_from_pair, rank1_iso)
from polytorsion.torsion import (TorsionClass, change_basis, cone, el, laplace_identity_check, random_acyclic,
                                 random_laurent, random_monomial_diagonal, random_nullhomotopic_map, suspension,
                                 torsion)

z = LaurentPoly.variable(1, 0)
GOLDEN = Path(__file__).parent / "golden"
FUZZ = 500


def test_c1_circle_torsion():
    got = torsion(el(z - 1))
    ok = got == TorsionClass(z - 1)
    record("C1", ok, f"torsion(el(z-1)) = {got}")
    assert ok


def test_c2_torus_vanishing():
    p = presentation_from_strings("x y", ["x y X Y"])
    zero = one_relator_polytope(p).is_zero()
    trivial = universal_torsion_commutative(p).is_trivial()
    record("C2", zero and trivial, f"one_relator_polytope zero={zero}, torsion trivial={trivial}")
    assert zero and trivial


def test_c3_rank1_isomorphism():
    rng = random.Random(3)

    def rand_interval():
        m = rng.randint(-20, 20)
        return interval(m, m + rng.randint(0, 15))

    elems = [PolytopeGroupElement(rand_interval(), rand_interval()) for _ in range(100)]
    additive = all(rank1_iso(a + b) == tuple(x + y for x, y in zip(rank1_iso(a), rank1_iso(b)))
                   for a, b in zip(elems, elems[1:] + elems[:1]))
    inverse = all(rank1_from_pair(*rank1_iso(a)) == a for a in elems)
    # injective: equal images only for equal elements
    injective = all((rank1_iso(a) == rank1_iso(b)) == (a == b) for a in elems for b in elems[:10])
    onto = all(rank1_iso(rank1_from_pair(l, o)) == (l, o) for l in range(-5, 6) for o in range(-5, 6))
    classes = True
    for _ in range(100):
        m = rng.randint(-20, 20)
        n = m + rng.randint(0, 15)
        c = canonical_class(PolytopeGroupElement(interval(m, n)))
        classes &= c == PolytopeClass(PolytopeGroupElement(interval(0, n - m)))
        classes &= rank1_iso(c.element)[0] == n - m
    ok = additive and inverse and injective and onto and classes
    record("C3", ok, f"additive={additive} inverse={inverse} injective={injective} onto={onto} "
                     f"[[m,n]]->n-m={classes} on 100 cases")
    assert ok


def _knot_rows():
    for knot, (files, _) in KNOTS.items():
        for f in files:
            p = corpus(f)
            yield knot, f, universal_torsion_commutative(p), alexander_polynomial(p)


def test_c4_knot_torsion_literal():
    """Literal form: rho = Delta / (t - 1). Conflicts with C1 + C5 (see ledger); expected to fail."""
    literal, inverted, agree = [], [], []
    by_knot = {}
    for knot, f, rho, delta in _knot_rows():
        literal.append(rho == TorsionClass(delta, z - 1))
        inverted.append(rho == TorsionClass(z - 1, delta))
        by_knot.setdefault(knot, []).append(rho)
    agree = all(all(r == rs[0] for r in rs) for rs in by_knot.values())
    ok = all(literal) and agree
    record("C4", ok, f"rho = Delta/(t-1) on {sum(literal)}/{len(literal)} presentations; "
                     f"rho = (t-1)/Delta on {sum(inverted)}/{len(inverted)}; presentations agree={agree}")
    assert ok


def test_c4_supplement_t_minus_one_over_delta():
    rows = list(_knot_rows())
    assert all(rho == TorsionClass(z - 1, delta) for _, _, rho, delta in rows)


def test_c5_thurston_norm_values():
    results = []
    for knot, (files, expected) in KNOTS.items():
        for f in files:
            p = corpus(f)
            x = thurston_data(p).seminorm((1,))
            deg = alexander_polynomial(p).degree_span() - 1
            results.append((f, x, expected, deg, x == expected == deg))
    ok = all(r[-1] for r in results)
    record("C5", ok, ", ".join(f"{f}: x={x} (want {e}, deg-1={d})" for f, x, e, d, _ in results))
    assert ok


def test_c6_doubled_polytope_symmetric():
    results = []
    for knot, (files, _) in KNOTS.items():
        for f in files:
            data = thurston_data(corpus(f))
            x = data.seminorm((1,))
            doubled = data.polytope_class * 2
            sym = PolytopeClass(PolytopeGroupElement(interval(-x, x)))
            results.append(doubled.star() == doubled and doubled == sym and data.symmetric)
    ok = all(results)
    record("C6", ok, f"2P *-invariant and = [-x, x] for {sum(results)}/{len(results)} presentations")
    assert ok


# C7 --------------------------------------------------------------------------------

def _rand_polytope(rng, rank=2):
    pts = [tuple(rng.randint(-4, 4) for _ in range(rank)) for _ in range(rng.randint(1, 6))]
    return convex_hull(pts, rank)


def _rand_word(rng, gens=3, length=12):
    letters = [(rng.randrange(gens), rng.choice([1, -1])) for _ in range(rng.randint(0, length))]
    return FreeWord(letters)


def _prop_radstrom(rng):
    P, R = _rand_polytope(rng), _rand_polytope(rng)
    # half the time Q is P rebuilt from its vertices plus an interior-or-boundary point
    if rng.random() < 0.5:
        Q = convex_hull(list(P.vertices) + [P.vertices[0]])
    else:
        Q = _rand_polytope(rng)
    return ((P + R) == (Q + R)) == (P == Q)


def _prop_seminorm_additive(rng):
    P, Q = _rand_polytope(rng), _rand_polytope(rng)
    phi = (rng.randint(-4, 4), rng.randint(-4, 4))
    return (P + Q).seminorm(phi) == P.seminorm(phi) + Q.seminorm(phi)


def _prop_star_seminorm(rng):
    a = PolytopeGroupElement(_rand_polytope(rng), _rand_polytope(rng))
    phi = (rng.randint(-4, 4), rng.randint(-4, 4))
    return a.star().seminorm(phi) == a.seminorm(phi)


def _prop_fox_product(rng):
    u, v, i = _rand_word(rng), _rand_word(rng), rng.randrange(3)
    return fox_derivative(u * v, i) == fox_derivative(u, i) + GroupRingElement.word(u) * fox_derivative(v, i)


def _prop_fox_fundamental(rng):
    return fundamental_identity_check(_rand_word(rng), 3)


def _prop_newton_multiplicative(rng):
    a = random_laurent(rng, 2, max_terms=5, max_exp=3)
    b = random_laurent(rng, 2, max_terms=5, max_exp=3)
    return (a * b).newton_polytope() == a.newton_polytope() + b.newton_polytope()


def _prop_additivity(rng):
    s = rng.randrange(10 ** 9)
    C = random_acyclic(1, s, max_length=3)
    D = random_acyclic(1, s + 1, max_length=3)
    f = random_nullhomotopic_map(rng, C, D)
    # 0 -> D -> cone(f) -> Sigma C -> 0
    return torsion(cone(f)) == torsion(D) * torsion(suspension(C))


def _prop_suspension(rng):
    C = random_acyclic(1, rng.randrange(10 ** 9))
    return torsion(suspension(C)) == torsion(C).inverse()


def _prop_laplace(rng):
    return laplace_identity_check(random_acyclic(1, rng.randrange(10 ** 9), max_length=4))


def _prop_basis_invariance(rng):
    C = random_acyclic(1, rng.randrange(10 ** 9))
    B, Bi = {}, {}
    for n, d in C.dims.items():
        M, Mi = random_monomial_diagonal(rng, 1, d)
        perm = list(range(d))
        rng.shuffle(perm)
        inv = [perm.index(i) for i in range(d)]
        B[n] = LMatrix.identity(1, d).permuted(perm) @ M
        Bi[n] = Mi @ LMatrix.identity(1, d).permuted(inv)
    return torsion(change_basis(C, B, Bi)) == torsion(C)


PROPERTIES = [
    ("Radstrom cancellation", _prop_radstrom),
    ("Minkowski-seminorm additivity", _prop_seminorm_additive),
    ("sn o * = sn", _prop_star_seminorm),
    ("Fox product rule", _prop_fox_product),
    ("Fox fundamental identity", _prop_fox_fundamental),
    ("Newton-polytope multiplicativity", _prop_newton_multiplicative),
    ("torsion additivity on cone sequences", _prop_additivity),
    ("suspension sign", _prop_suspension),
    ("Laplace identity", _prop_laplace),
    ("basis permutation/monomial invariance", _prop_basis_invariance),
]


def test_c7_property_suite():
    failures = {}
    for k, (name, prop) in enumerate(PROPERTIES):
        rng = random.Random(7000 + k)
        failures[name] = sum(not prop(rng) for _ in range(FUZZ))
    ok = not any(failures.values())
    record("C7", ok, f"{len(PROPERTIES)} properties x {FUZZ} cases, failures: "
                     + ", ".join(f"{n}={c}" for n, c in failures.items()))
    assert ok


# C8 --------------------------------------------------------------------------------

def _rand_full(rng, symmetric):
    while True:
        rank = rng.choice([1, 2])
        pts = [tuple(rng.randint(-4, 4) for _ in range(rank)) for _ in range(rng.randint(1, 5))]
        if symmetric:
            pts += [tuple(-x for x in p) for p in pts]
        X = convex_hull(pts, rank)
        if X.dimension() == rank:
            return X


def test_c8_bidual():
    rng = random.Random(8)
    cases = [_rand_full(rng, True) for _ in range(200)]
    good = sum(dual_polytope(dual_polytope(X)) == X for X in cases)
    record("C8", good == 200, f"X = X** on {good}/200 symmetric polytopes")
    assert good == 200


def test_c8_minkowski_symmetrization_literal():
    """Literal X + (-X) = (B_{||.||_X})*. Off by a factor 2 (see ledger); expected to fail."""
    rng = random.Random(80)
    cases = [_rand_full(rng, False) for _ in range(100)]
    good = sum(X + (-X) == dual_polytope(norm_unit_ball(X)) for X in cases)
    record("C8", good == 100, f"literal X + (-X) = (B_||.||_X)* on {good}/100")
    assert good == 100


def test_c8_supplement_corrected_factor():
    rng = random.Random(80)
    cases = [_rand_full(rng, False) for _ in range(100)]
    assert all(X + (-X) == dual_polytope(norm_unit_ball(X).scale(Fraction(1, 2))) for X in cases)
    assert all(dual_polytope(norm_unit_ball(X)) == (X + (-X)).scale(Fraction(1, 2)) for X in cases)


# C9 --------------------------------------------------------------------------------

def _cli(*args):
    return subprocess.run([sys.executable, "-m", "polytorsion.cli", *args], capture_output=True)


def test_c9_cli_determinism():
    a, b = _cli("selftest"), _cli("selftest")
    same = a.stdout == b.stdout and a.returncode == b.returncode == 0
    goldens = {}
    for name in ("trefoil", "figure8", "torus25"):
        r = _cli("knot", f"corpus/{name}.pres", "--pretty")
        goldens[name] = r.returncode == 0 and r.stdout == (GOLDEN / f"{name}.json").read_bytes()
    ok = same and all(goldens.values())
    record("C9", ok, f"selftest twice byte-identical={same}; goldens bit-exact={goldens}")
    assert ok
