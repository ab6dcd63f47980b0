"""Command line front end: ``twk <command> <manifest> ...``.

Exit codes: 0 pass, 1 mathematical failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .cochains import CochainError
from .cohomology import GradingError, hom_cohomology
from .dgresolution import SimplexObj, mc_check_simplex
from .equivariant import EquivariantComplex, k1_formula, k2_formula, mc_check_equiv
from .exactalg import RingError
from .manifest import ManifestError, load_manifest
from .report import MCReport
from .selftest import run_selftest
from .simplicial import ActionNerve, SimplicialError, split_decomposition
from .totalization import roundtrip_report
from .twisted import TwPerfComplex, mc_check_tw

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
INPUT_ERRORS = (ManifestError, RingError, SimplicialError, CochainError, GradingError)


def workers() -> int:
    raw = os.environ.get("TWK_THREADS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        raise ManifestError(f"TWK_THREADS must be a positive integer, got {raw!r}") from None


def emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def check_object(obj) -> MCReport:
    if isinstance(obj, TwPerfComplex):
        return mc_check_tw(obj)
    if isinstance(obj, EquivariantComplex):
        return mc_check_equiv(obj)
    if isinstance(obj, SimplexObj):
        return mc_check_simplex(obj)
    raise ManifestError(f"cannot validate {type(obj).__name__}")


def cmd_validate(args) -> int:
    m = load_manifest(args.manifest)
    rep = check_object(m.object(args.object))
    payload = {"object": args.object, **rep.to_json()}
    emit(args, payload, rep.to_text())
    return EXIT_OK if rep.status() == "pass" else EXIT_FAIL


def cmd_cohomology(args) -> int:
    m = load_manifest(args.manifest)
    a, b = m.object(args.source), m.object(args.target)
    for name, o in ((args.source, a), (args.target, b)):
        if not isinstance(o, TwPerfComplex):
            raise ManifestError(f"{name} is not a twisted complex")
        rep = mc_check_tw(o)
        if rep.status() != "pass":
            emit(args, {"refused": name, "validation": rep.to_json()},
                 f"refusing: {name} does not validate\n{rep.to_text()}")
            return EXIT_FAIL
    window = args.window if args.window is not None else m.options.get("window")
    window = int(window) if window is not None else None
    degrees = args.degrees or [0, 1]
    rep = hom_cohomology(a, b, degrees=degrees, window=window, workers=workers())
    payload = {"from": args.source, "to": args.target, **rep.to_json()}
    emit(args, payload, f"Hom({args.source}, {args.target})\n{rep.to_text()}")
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    m = load_manifest(args.manifest)
    obj = m.object(args.object)
    if not isinstance(obj, TwPerfComplex):
        raise ManifestError(f"{args.object} is not a twisted complex over a cover")
    r = roundtrip_report(obj)
    text = f"{args.object}: " + ("identical" if r["identical"] else f"MISMATCH ({r['first_difference']})")
    emit(args, r, text)
    return EXIT_OK if r["identical"] else EXIT_FAIL


def cmd_equivariant(args) -> int:
    m = load_manifest(args.manifest)
    obj = m.object(args.object)
    if not isinstance(obj, EquivariantComplex):
        raise ManifestError(f"{args.object} is not an equivariant complex")
    rep = mc_check_equiv(obj)
    nerve = obj.backend
    levels = []
    for k, formula in ((1, k1_formula), (2, k2_formula)):
        bad = [nerve.fmt(s) for s in nerve.level(k) if not formula(obj, s).is_zero()]
        levels.append({"level": k, "violations": bad})
    lines = [rep.to_text()]
    for lv in levels:
        v = lv["violations"]
        lines.append(f"  level {lv['level']} equation: " + ("holds" if not v else f"fails at {', '.join(v[:5])}"))
    payload = {"object": args.object, **rep.to_json(), "expanded_equations": levels}
    emit(args, payload, "\n".join(lines))
    return EXIT_OK if rep.status() == "pass" else EXIT_FAIL


def cmd_nerve(args) -> int:
    m = load_manifest(args.manifest)
    k = args.level
    if k < 0:
        raise ManifestError("--level must be nonnegative")
    if m.cover is not None:
        nerve = m.cover.cech
        names = m.cover.names
        simplices = m.cover.nerve_level(k)
        fmt = [",".join(names[i] for i in s) for s in simplices]
    elif m.action is not None:
        nerve = ActionNerve(m.action)
        simplices = nerve.level(k)
        fmt = [nerve.fmt(s) for s in simplices]
    else:
        raise ManifestError("manifest has neither a cover nor an action section")
    dec = split_decomposition(nerve, k)
    by = {",".join(map(str, sig.values)): len(cells) for sig, cells in dec.by_surjection().items()}
    payload = {"level": k, "count": len(simplices), "simplices": fmt, "split_factors": by}
    text = "\n".join([f"level {k}: {len(simplices)} simplices"] + [f"  {s}" for s in fmt] +
                     ["split factors (surjection values: nondegenerate cells)"] +
                     [f"  {key}: {v}" for key, v in by.items()])
    emit(args, payload, text)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = run_selftest(seed=args.seed, trials=args.trials, max_level=args.max_level, inject_bad=args.inject_bad)
    failed = next((r for r in results if not r.ok), None)
    payload = {"seed": args.seed, "suites": [r.to_json() for r in results], "ok": failed is None}
    lines = [f"{'PASS' if r.ok else 'FAIL'}  {r.name} ({r.checked} checked)" for r in results]
    for r in results:
        lines += [f"      {n}" for n in r.notes]
    if failed is not None:
        lines.append(f"first failure: {failed.detail}")
        if failed.counterexample is not None:
            payload["counterexample"] = failed.counterexample
            if args.out:
                with open(args.out, "w") as fh:
                    json.dump(failed.counterexample, fh, indent=2, ensure_ascii=False)
                lines.append(f"counterexample manifest written to {args.out}")
            else:
                lines.append("counterexample manifest:")
                lines.append(json.dumps(failed.counterexample, indent=2, ensure_ascii=False))
    emit(args, payload, "\n".join(lines))
    return EXIT_OK if failed is None else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twk", description="Exact checks for twisted complexes and their gluing.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)

    sp = sub.add_parser("validate", help="check the Maurer-Cartan equation and non-degeneracy of an object")
    sp.add_argument("manifest")
    sp.add_argument("--object", required=True)
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("cohomology", help="dimensions of H^m Hom(A, B)")
    sp.add_argument("manifest")
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)
    sp.add_argument("--window", type=int)
    sp.add_argument("--degrees", type=int, nargs="+")
    common(sp)
    sp.set_defaults(func=cmd_cohomology)

    sp = sub.add_parser("roundtrip", help="twisted complex -> Tot object -> twisted complex")
    sp.add_argument("manifest")
    sp.add_argument("--object", required=True)
    common(sp)
    sp.set_defaults(func=cmd_roundtrip)

    sp = sub.add_parser("equivariant", help="validate an equivariant complex level by level")
    sp.add_argument("manifest")
    sp.add_argument("--object", required=True)
    common(sp)
    sp.set_defaults(func=cmd_equivariant)

    sp = sub.add_parser("nerve", help="list a level of the nerve with its split decomposition")
    sp.add_argument("manifest")
    sp.add_argument("--level", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_nerve)

    sp = sub.add_parser("selftest", help="run the seeded property suites")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=3, help="random instances per backend and suite")
    sp.add_argument("--max-level", type=int, default=3, help="highest simplicial level for enumerations")
    sp.add_argument("--inject-bad", action="store_true", help="add a known-bad fixture (must fail)")
    sp.add_argument("--out", help="write the counterexample manifest here")
    common(sp)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
