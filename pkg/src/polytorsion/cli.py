"""Command-line front end.

Every verb writes JSON with sorted keys to stdout. Domain errors exit 1
with ``{"error": {...}}``; usage errors exit 2 (argparse).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import invariants as inv
from .errors import PolytorsionError
from .fox_calculus import (Presentation, abelianize, fox_derivative, one_relator_polytope,
                           parse_presentation, presentation_from_strings)
from .torsion import BasedChainComplex, torsion

VERBS = ("fox", "abelianize", "polytope", "torsion", "knot", "norm", "selftest")
SEED_ENV = "POLYTORSION_SEED"


def rational_json(q):
    q = Fraction(q)
    if q.denominator == 1:
        return int(q)
    return {"den": q.denominator, "num": q.numerator}


def dumps(obj, pretty=False):
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def corpus_names():
    root = resources.files("polytorsion") / "corpus"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".pres"))


def read_corpus(name):
    return (resources.files("polytorsion") / "corpus" / name).read_text(encoding="utf-8")


def _read_path(path):
    p = Path(path)
    if p.exists():
        return p.read_text(encoding="utf-8")
    # ``corpus/<name>`` falls back to the bundled copy
    if p.parent.name == "corpus" and p.name in corpus_names():
        return read_corpus(p.name)
    raise FileNotFoundError(path)


def load_presentation(args) -> Presentation:
    if getattr(args, "file", None):
        text = _read_path(args.file)
        if args.file.endswith(".json"):
            data = json.loads(text)
            if "crossings" in data:
                return inv.wirtinger_presentation(data["crossings"])
            return presentation_from_strings(" ".join(data["gens"]), data.get("rels", []))
        return parse_presentation(text)
    if args.gens is None:
        raise PolytorsionError("give a presentation file or --gens/--rel")
    return presentation_from_strings(args.gens, args.rel or [])


def parse_phi(text, rank):
    try:
        phi = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise PolytorsionError(f"--phi must be comma-separated integers, got {text!r}") from None
    if len(phi) != rank:
        raise PolytorsionError(f"--phi has {len(phi)} entries, the free abelian quotient has rank {rank}")
    return phi


def laurent_json(p):
    return {"rank": p.rank, "terms": p.to_json()}


# verbs ----------------------------------------------------------------------

def cmd_fox(args):
    p = load_presentation(args)
    if args.wrt not in p.generator_names:
        raise PolytorsionError(f"--wrt {args.wrt!r} is not a generator")
    i = p.generator_names.index(args.wrt)
    ab = abelianize(p)
    out = []
    for R in p.relators:
        d = fox_derivative(R, i, p.generator_count)
        out.append({"abelianized": laurent_json(d.abelianize(ab)),
                    "free": d.to_json(p.generator_names),
                    "relator": R.to_text(p.generator_names)})
    return {"derivatives": out, "wrt": args.wrt}


def cmd_abelianize(args):
    p = load_presentation(args)
    return {"abelianization": abelianize(p).to_json(), "presentation": p.to_json()}


def cmd_polytope(args):
    p = load_presentation(args)
    P = inv.l2_torsion_polytope(p)
    out = {"polytope_class": P.to_json(), "presentation": p.to_json()}
    if p.generator_count == 2 and len(p.relators) == 1:
        Q = one_relator_polytope(p)
        out["one_relator_polytope"] = Q.reduced().to_json()
        out["pipeline_agrees"] = P == Q
    return out


def cmd_torsion(args):
    if args.file and args.file.endswith(".json") and "differentials" in _read_path(args.file):
        C = BasedChainComplex.from_json(json.loads(_read_path(args.file)))
        return {"torsion": torsion(C).to_json()}
    p = load_presentation(args)
    return {"presentation": p.to_json(), "torsion": inv.universal_torsion_commutative(p).to_json()}


def knot_record(p: Presentation):
    rho = inv.universal_torsion_commutative(p)
    data = inv.thurston_data(p)
    r = data.rank
    samples = []
    for i in range(r):
        phi = tuple(int(i == j) for j in range(r))
        samples.append({"phi": list(phi), "x": rational_json(data.seminorm(phi))})
    checks = {"duality": inv.duality_check(p), "symmetric_doubled_class": data.symmetric}
    if p.generator_count == 2 and len(p.relators) == 1:
        checks["pipeline"] = one_relator_polytope(p) == data.polytope_class
    return {
        "checks": checks,
        "polytope_class": data.polytope_class.reduced().to_json(),
        "presentation": p.to_json(),
        "seminorm_samples": samples,
        "torsion": rho.to_json(),
    }


def cmd_knot(args):
    return knot_record(load_presentation(args))


def cmd_norm(args):
    p = load_presentation(args)
    data = inv.thurston_data(p)
    phi = parse_phi(args.phi, data.rank)
    return {"x": rational_json(data.seminorm(phi))}


def cmd_selftest(args):
    from .selftest import run_selftest

    return run_selftest(seed=args.seed)


def build_parser():
    parser = argparse.ArgumentParser(prog="polytorsion", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, metavar="{" + ",".join(VERBS) + "}")

    def common(sp, needs_input=True):
        mode = sp.add_mutually_exclusive_group()
        mode.add_argument("--json", dest="pretty", action="store_false", help="compact JSON (default)")
        mode.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON or table")
        sp.set_defaults(pretty=False)
        if needs_input:
            sp.add_argument("file", nargs="?", help="presentation file (.pres) or JSON")
            sp.add_argument("--gens", help='generator names, e.g. "x y"')
            sp.add_argument("--rel", action="append", help='relator, e.g. "x y X Y" (repeatable)')
        return sp

    common(sub.add_parser("fox", help="Fox derivatives of the relators")).add_argument(
        "--wrt", required=True, help="generator to differentiate by")
    common(sub.add_parser("abelianize", help="free part of H_1 via Smith normal form"))
    common(sub.add_parser("polytope", help="torsion polytope class"))
    common(sub.add_parser("torsion", help="universal torsion in the commutative image"))
    common(sub.add_parser("knot", help="full record: torsion, polytope, norm samples, checks"))
    common(sub.add_parser("norm", help="candidate Thurston norm x(phi)")).add_argument(
        "--phi", required=True, help="comma-separated covector")
    st = common(sub.add_parser("selftest", help="run the bundled check corpus"), needs_input=False)
    st.add_argument("--seed", type=int, default=0, help=f"fuzz seed (overridden by ${SEED_ENV})")
    st.set_defaults(pretty=None)
    return parser


COMMANDS = {
    "fox": cmd_fox, "abelianize": cmd_abelianize, "polytope": cmd_polytope, "torsion": cmd_torsion,
    "knot": cmd_knot, "norm": cmd_norm, "selftest": cmd_selftest,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    if args.verb == "selftest" and os.environ.get(SEED_ENV):
        try:
            args.seed = int(os.environ[SEED_ENV])
        except ValueError:
            print(f"{SEED_ENV} must be an integer", file=sys.stderr)
            return 2
    try:
        result = COMMANDS[args.verb](args)
    except (PolytorsionError, FileNotFoundError, json.JSONDecodeError) as exc:
        kind = getattr(exc, "kind", "file_not_found" if isinstance(exc, FileNotFoundError) else "parse_error")
        err = {"kind": kind, "message": str(exc)}
        if getattr(exc, "line", None) is not None:
            err["line"] = exc.line
            err["column"] = exc.column
        stdout.write(dumps({"error": err}))
        return 1
    if args.verb == "selftest":
        from .selftest import format_table

        stdout.write(format_table(result) if args.pretty in (None, True) else dumps(result))
        return 0 if result["passed"] else 1
    stdout.write(dumps(result, pretty=args.pretty))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
