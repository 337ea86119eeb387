"""The gpm command line tool.

Every command prints one canonical JSON document (sorted keys) so repeated
runs on identical inputs are byte-identical; --text renders the same data
as key/value lines.  Exit codes: 0 success, 1 a verified property failed,
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import graded as gr
from . import invariants as inv
from .errors import GpmodError
from .kan import IndexWindow, canonical_mu, colim_window
from .linalg import FieldSpec
from .modules import is_epi, is_iso
from .posets import check_property_m, hat, mub
from .textio import Workspace, parse_path, to_json
from .verify import SUITES, VerifyConfig, run_config


def _load(files, default_field) -> Workspace:
    ws = Workspace()
    for f in files:
        parse_path(f, workspace=ws, default_field=default_field)
    return ws


def _parse_set(poset, text):
    if text is None:
        return poset.whole()
    ids = [t for t in text.split(",") if t]
    return poset.subset(ids)


def _emit(payload, as_text: bool) -> None:
    if as_text:
        for key in sorted(payload):
            sys.stdout.write(f"{key}: {payload[key]}\n")
    else:
        sys.stdout.write(to_json(payload))


def _matrix_lists(m: np.ndarray):
    return [[int(x) for x in row] for row in m]


def cmd_check(args) -> int:
    ws = _load(args.files, args.field)
    payload = {
        "files": len(args.files),
        "posets": sorted(ws.posets),
        "modules": sorted(ws.modules),
        "monoids": sorted(ws.monoids),
        "acts": sorted(ws.acts),
        "algebras": sorted(ws.algebras),
        "ok": True,
    }
    _emit(payload, args.text)
    return 0


def cmd_analyze(args) -> int:
    ws = _load(args.files, args.field)
    m = ws.single("module", args.module)
    s = _parse_set(m.poset, args.set)
    report = inv.birth_death_report(m, s, module_id=args.module or m.name)
    _emit(report, args.text)
    return 0


def cmd_present(args) -> int:
    ws = _load(args.files, args.field)
    m = ws.single("module", args.module)
    s = _parse_set(m.poset, args.set)
    pres = inv.minimal_presentation(m, s)
    idx = m.poset.index
    payload = {
        "module_id": args.module or m.name,
        "S": s.ids(),
        "xi0": {e: int(k) for e, k in sorted(pres.gens.items(), key=lambda t: idx(t[0]))},
        "xi1": {e: int(k) for e, k in sorted(pres.rels.items(), key=lambda t: idx(t[0]))},
        "verho_equal": pres.verho_equal,
        "exact": pres.exact,
    }
    _emit(payload, args.text)
    return 0


def cmd_fsp(args) -> int:
    ws = _load(args.files, args.field)
    m = ws.single("module", args.module)
    if args.set is None:
        report = inv.finitely_presented_witness(m)
        payload = {
            "module_id": args.module or m.name,
            "pointwise_ok": report.pointwise_ok,
            "S": report.support.ids(),
            "property_m": report.property_m.as_dict(),
        }
    else:
        s = _parse_set(m.poset, args.set)
        fr = inv.fsp_from_determined(m, s)
        payload = {
            "module_id": args.module or m.name,
            "S": s.ids(),
            "fsp": fr.fsp.ids(),
            "frames": dict(sorted(fr.frames.items())),
            "presented": fr.presented,
        }
    _emit(payload, args.text)
    return 0


def cmd_colim(args) -> int:
    ws = _load(args.files, args.field)
    m = ws.single("module", args.module)
    s = _parse_set(m.poset, args.set)
    w = IndexWindow(s, args.at, strict=not args.non_strict)
    m.poset.index(args.at)
    cr = colim_window(m, w)
    payload = {
        "module_id": args.module or m.name,
        "at": args.at,
        "strict": not args.non_strict,
        "S": s.ids(),
        "dim": cr.dim,
        "window": list(cr.window),
        "injections": {d: _matrix_lists(cr.injections[d]) for d in cr.window},
    }
    _emit(payload, args.text)
    return 0


def cmd_mu(args) -> int:
    ws = _load(args.files, args.field)
    m = ws.single("module", args.module)
    s = _parse_set(m.poset, args.set)
    mu = canonical_mu(m, s)
    payload = {
        "module_id": args.module or m.name,
        "S": s.ids(),
        "epi": is_epi(mu),
        "iso": is_iso(mu),
        "components": {e: _matrix_lists(mu.components[e]) for e in m.poset.elements},
    }
    _emit(payload, args.text)
    return 0


def cmd_poset(args) -> int:
    ws = _load(args.files, args.field)
    p = ws.single("poset", args.poset)
    if args.query == "mub":
        s = _parse_set(p, args.set if args.set is not None else "")
        result = mub(p, s).ids()
        _emit_raw(result, args.text)
    elif args.query == "hat":
        s = _parse_set(p, args.set if args.set is not None else "")
        result = hat(p, s).ids()
        _emit_raw(result, args.text)
    elif args.query == "propm":
        _emit(check_property_m(p).as_dict(), args.text)
    else:  # pragma: no cover - argparse restricts choices
        raise GpmodError(f"unknown poset query {args.query!r}")
    return 0


def _emit_raw(obj, as_text: bool) -> None:
    if as_text:
        sys.stdout.write(" ".join(str(x) for x in obj) + "\n")
    else:
        sys.stdout.write(to_json(obj))


def cmd_graded(args) -> int:
    ws = _load(args.files, args.field)
    field = FieldSpec(args.field)
    if args.action in ("phi-psi", "gamma-lambda"):
        alg = ws.single("algebra", args.algebra)
        act = ws.single("act", args.act)
        failures = []
        for i in range(args.cases):
            rng = np.random.default_rng(args.seed + i)
            fm = gr.random_functor_module(alg, act, rng)
            try:
                if args.action == "phi-psi":
                    q = gr.phi(fm)
                    assert gr.psi(q) == fm and gr.phi(gr.psi(q)) == q
                else:
                    q = gr.gamma(fm)
                    lam, _ = gr.lambda_functor(q)
                    assert lam == fm and gr.gamma(lam, q.smash) == q
            except (AssertionError, GpmodError):
                failures.append(args.seed + i)
        payload = {"suite": args.action, "cases": args.cases, "seed": args.seed,
                   "failures": failures}
        _emit(payload, args.text)
        return 0 if not failures else 1
    if args.action == "smash":
        alg = ws.single("algebra", args.algebra)
        act = ws.single("act", args.act)
        sm = gr.smash_product(alg, act)
        total = np.zeros(sm.dim, dtype=np.int64)
        for a in range(len(act)):
            total = (total + sm.point_idempotent(a)) % field.p
        unit_ok = all(
            np.array_equal(sm.product(total, sm.basis_vector(i, a)),
                           sm.basis_vector(i, a))
            for i in range(alg.dim) for a in range(len(act)))
        payload = {"dim": sm.dim, "associative": True,
                   "basis": [sm.pair_name(t) for t in range(sm.dim)],
                   "sum_pa_is_left_unit": unit_ok}
        _emit(payload, args.text)
        return 0
    if args.action == "local-unit":
        alg = ws.single("algebra", args.algebra)
        act = ws.single("act", args.act)
        sm = gr.smash_product(alg, act)
        if not args.elements:
            raise GpmodError("local-unit needs --elements sym@point,...")
        vecs = []
        for token in args.elements.split(","):
            sym, _, point = token.partition("@")
            if sym not in alg.syms or point not in act.points:
                raise GpmodError(f"unknown smash basis element {token!r}")
            vecs.append(sm.basis_vector(alg.syms.index(sym),
                                        act.points.index(point)))
        w = gr.local_unit(sm, vecs)
        payload = {
            "elements": args.elements.split(","),
            "w": [int(x) for x in w],
            "w_support": [sm.pair_name(t) for t in np.nonzero(w)[0]],
            "idempotent": True,
            "absorbs": True,
        }
        _emit(payload, args.text)
        return 0
    raise GpmodError(f"unknown graded action {args.action!r}")


def cmd_verify(args) -> int:
    caps = {}
    if args.max_poset:
        caps["max_poset"] = args.max_poset
    if args.max_dim:
        caps["max_dim"] = args.max_dim
    if args.max_monoid:
        caps["max_monoid"] = args.max_monoid
    config = VerifyConfig(suite=args.suite, seed=args.seed, cases=args.cases,
                          field=args.field, caps=caps)
    report = run_config(config)
    _emit(report, args.text)
    return 0 if not report["failures"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpm",
        description="Exact invariants of persistence modules over finite "
                    "posets, with graded and smash-product equivalences.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, files=True):
        if files:
            p.add_argument("files", nargs="+", help="workspace files")
        p.add_argument("--field", type=int, default=101,
                       help="prime modulus (default 101)")
        p.add_argument("--json", dest="text", action="store_false",
                       default=False, help="JSON output (default)")
        p.add_argument("--text", dest="text", action="store_true",
                       help="key/value text output")

    p = sub.add_parser("check", help="parse and validate workspace files")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("analyze", help="births/deaths/splitting report")
    common(p)
    p.add_argument("--module", help="module name (default: the only one)")
    p.add_argument("--set", help="comma-separated subset (default: all)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("present", help="minimal generator/relation multisets")
    common(p)
    p.add_argument("--module")
    p.add_argument("--set")
    p.set_defaults(func=cmd_present)

    p = sub.add_parser("fsp", help="finite presentation support witness")
    common(p)
    p.add_argument("--module")
    p.add_argument("--set", help="certify via the double mub closure of this set")
    p.set_defaults(func=cmd_fsp)

    p = sub.add_parser("colim", help="window colimit at an element")
    common(p)
    p.add_argument("--module")
    p.add_argument("--set")
    p.add_argument("--at", required=True, help="target element")
    p.add_argument("--non-strict", action="store_true",
                   help="use d <= at instead of d < at")
    p.set_defaults(func=cmd_colim)

    p = sub.add_parser("mu", help="counit of induction/restriction")
    common(p)
    p.add_argument("--module")
    p.add_argument("--set")
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("poset", help="order queries")
    common(p)
    p.add_argument("query", choices=["mub", "hat", "propm"])
    p.add_argument("--poset", help="poset name (default: the only one)")
    p.add_argument("--set")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("graded", help="graded/smash equivalence checks")
    p.add_argument("action", choices=["phi-psi", "gamma-lambda", "smash",
                                      "local-unit"])
    common(p)
    p.add_argument("--algebra")
    p.add_argument("--act")
    p.add_argument("--cases", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--elements", help="sym@point,... for local-unit")
    p.set_defaults(func=cmd_graded)

    p = sub.add_parser("verify", help="seeded theorem verification suites")
    common(p, files=False)
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-poset", type=int)
    p.add_argument("--max-dim", type=int)
    p.add_argument("--max-monoid", type=int)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GpmodError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
