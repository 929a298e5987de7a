"""Bundled check corpus behind ``polytorsion selftest``."""
from __future__ import annotations

from .cli import read_corpus
from .fox_calculus import one_relator_polytope, parse_presentation
from .invariants import (alexander_polynomial, duality_check, thurston_data,
                         universal_torsion_commutative)
from .laurent import LaurentPoly
from .polytope_group import PolytopeClass, PolytopeGroupElement, interval
from .torsion import TorsionClass, el, laplace_identity_check, random_acyclic_with_torsion, torsion

# knot -> (presentations, expected Thurston norm of the generator)
KNOTS = {
    "trefoil": (("trefoil.pres", "trefoil_torus.pres"), 1),
    "figure-eight": (("figure8.pres", "figure8_fibered.pres"), 1),
    "(2,5)-torus": (("torus25.pres", "torus25_bridge.pres"), 3),
}
FUZZ_CASES = 25


def _pres(name):
    return parse_presentation(read_corpus(name))


def _checks(seed):
    t = LaurentPoly.univariate([-1, 1])
    yield "circle torsion is (z - 1)", torsion(el(t)) == TorsionClass(t), ""

    torus = _pres("torus2.pres")
    ok = universal_torsion_commutative(torus).is_trivial() and one_relator_polytope(torus).is_zero()
    yield "2-torus: trivial torsion, zero polytope", ok, ""

    for knot, (files, x_expected) in KNOTS.items():
        rhos = []
        for f in files:
            p = _pres(f)
            delta = alexander_polynomial(p)
            rho = universal_torsion_commutative(p)
            rhos.append(rho)
            yield f"{f}: torsion = (t - 1) / Alexander", rho == TorsionClass(t, delta), delta.to_str("t")
            data = thurston_data(p)
            x = data.seminorm((1,))
            yield f"{f}: x(phi) = {x_expected} = deg(Delta) - 1", \
                x == x_expected == delta.degree_span() - 1, f"x={x}"
            sym = PolytopeClass(PolytopeGroupElement(interval(-x_expected, x_expected)))
            yield f"{f}: 2P is *-invariant, width 2x", \
                data.symmetric and data.dual_polytope_class == sym and duality_check(p), ""
            if p.generator_count == 2 and len(p.relators) == 1:
                yield f"{f}: chain torsion polytope = one-relator formula", \
                    one_relator_polytope(p) == data.polytope_class, ""
        yield f"{knot}: presentations agree", all(r == rhos[0] for r in rhos), ""

    bad_torsion = bad_laplace = 0
    for k in range(FUZZ_CASES):
        C, expected = random_acyclic_with_torsion(1, seed * 1_000_003 + k)
        bad_torsion += torsion(C) != expected
        bad_laplace += not laplace_identity_check(C)
    yield f"fuzz seed {seed}: constructed torsion ({FUZZ_CASES} cases)", bad_torsion == 0, f"{bad_torsion} failures"
    yield f"fuzz seed {seed}: Laplace identity ({FUZZ_CASES} cases)", bad_laplace == 0, f"{bad_laplace} failures"


def run_selftest(seed=0):
    checks = []
    for name, passed, detail in _checks(seed):
        checks.append({"detail": detail, "name": name, "passed": bool(passed)})
    return {"checks": checks, "passed": all(c["passed"] for c in checks), "seed": seed}


def format_table(result):
    width = max(len(c["name"]) for c in result["checks"])
    lines = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']:<{width}}  {c['detail']}".rstrip()
             for c in result["checks"]]
    n_ok = sum(c["passed"] for c in result["checks"])
    lines.append(f"{n_ok}/{len(result['checks'])} checks passed (seed {result['seed']})")
    return "\n".join(lines) + "\n"
