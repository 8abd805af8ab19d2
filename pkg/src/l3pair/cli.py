"""Command-line surface: example pairs, identity-check suites, computations.

Data goes to standard output (or --json PATH) as canonical JSON: sorted keys,
rationals as "p/q" strings, and no wall-clock content, so identical inputs
and seeds produce byte-identical bytes.  Diagnostics and timing go to
standard error.  The exit status is 0 exactly when every check passed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import catalog, linalg
from . import deraction as da
from . import mc as mcmod
from .graded import GradedElement
from .liepair import LiePair, build_l3, validate_lie
from .linfty import Coderivation, brackets_to_codifferential, check_codifferential, jacobi_sweep
from .scalars import DEFAULT_ORDER


def _emit(data: dict, path: str | None) -> None:
    text = json.dumps(data, sort_keys=True, indent=2, separators=(",", ": "))
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _defect_json(obj):
    if isinstance(obj, GradedElement):
        return obj.to_json()
    if isinstance(obj, Coderivation):
        out = {}
        for k in sorted(obj.components):
            table = obj.components[k]
            out[str(k)] = {"^".join(key): val.to_json() for key, val in sorted(table.values.items())}
        if obj.comp0 is not None:
            out["0"] = obj.comp0.to_json()
        return out
    if isinstance(obj, (list, tuple)):
        return [_defect_json(x) for x in obj]
    return str(obj)


def _check_entry(name: str, defects) -> dict:
    recs = []
    for d in defects:
        if isinstance(d, dict):
            recs.append(
                {
                    "identity": d["identity"],
                    "inputs": list(d["inputs"]),
                    "defect": _defect_json(d["defect"]),
                }
            )
        else:
            recs.append(_defect_json(d))
    return {"name": name, "status": "pass" if not recs else "fail", "defects": recs}


def _load_pair(path: str) -> LiePair:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return LiePair.from_json(data, validate=False)


def _jacobi_checks(pair: LiePair, max_arity: int) -> list:
    checks = []
    bad = validate_lie(pair.algebra)
    checks.append(_check_entry("lie-jacobi", [{"identity": "lie-jacobi", "inputs": list(t), "defect": "nonzero"} for t in bad]))
    if bad:
        return checks
    l3 = build_l3(pair)
    st = l3.structure()
    fails = jacobi_sweep(st, range(1, max_arity))
    checks.append(
        _check_entry(
            "higher-jacobi",
            [{"identity": "higher-jacobi-n%d" % n, "inputs": list(key), "defect": val} for n, key, val in fails],
        )
    )
    Q = brackets_to_codifferential(st)
    sq = check_codifferential(Q, max_arity)
    checks.append(
        _check_entry(
            "codifferential-square",
            [{"identity": "square-arity-%d" % k, "inputs": list(key), "defect": val} for k, key, val in sq],
        )
    )
    route_defects = []
    from .linfty import iter_normalized_tuples

    for key in iter_normalized_tuples(l3.basis, 2, symmetric=False):
        a = l3.bracket2(l3.basis.unit(key[0]), l3.basis.unit(key[1]))
        b = l3.bracket2_generated(l3.basis.unit(key[0]), l3.basis.unit(key[1]))
        if a != b:
            route_defects.append({"identity": "binary-routes", "inputs": list(key), "defect": a - b})
    for key in iter_normalized_tuples(l3.basis, 3, symmetric=False):
        a = l3.bracket3(*[l3.basis.unit(nm) for nm in key])
        b = l3.bracket3_generated(*[l3.basis.unit(nm) for nm in key])
        if a != b:
            route_defects.append({"identity": "ternary-routes", "inputs": list(key), "defect": a - b})
    checks.append(_check_entry("bracket-routes", route_defects))
    return checks


def _action_checks(pair: LiePair, max_arity: int) -> list:
    l3 = build_l3(pair)
    ders = da.derivations(pair.algebra)
    action = da.ActionMaps(l3, ders)
    checks = [_check_entry("action-axioms", da.check_action_axioms(action))]
    tg = da.to_theta_gamma(action)
    checks.append(_check_entry("action-coalgebra-form", da.check_theta_gamma(tg)))
    ext = da.extend_sum(action)
    sq = check_codifferential(ext.codifferential, max_arity)
    checks.append(
        _check_entry(
            "extended-codifferential",
            [{"identity": "square-arity-%d" % k, "inputs": list(key), "defect": val} for k, key, val in sq],
        )
    )
    checks.append(
        _check_entry(
            "extended-structure",
            [{"identity": kind, "inputs": list(key), "defect": "structural"} for kind, key in ext.violations()],
        )
    )
    return checks


def _gauge_checks(pair: LiePair, order: int, seed: int, instances: int = 5) -> list:
    l3 = build_l3(pair)
    ctx = mcmod.MCContext(l3, order=order)
    rng = random.Random(seed)
    checks = []
    bridge = []
    mismatches = []
    closed_form = []
    for i in range(instances):
        xi = mcmod.random_mc_element(ctx, rng)
        b = mcmod.random_gauge_parameter(ctx, rng)
        if i == 0:
            bridge = [
                {"identity": kind, "inputs": list(key), "defect": "nonzero"}
                for kind, key in mcmod.bridge_defects(ctx, b)
            ]
        equal, diff = mcmod.check_gauge_coincidence(ctx, b, xi, check_bridges=False)
        if not equal:
            mismatches.append({"identity": "gauge-coincidence", "inputs": ["instance%d" % i], "defect": diff})
        if order == 1:
            st = ctx.structure
            d = st.bracket(1)
            db = d.evaluate([b]) if d is not None else l3.zero()
            if mcmod.gauge_getzler(ctx, b, xi).value != xi.value - db:
                closed_form.append({"identity": "order1-form-gauge", "inputs": ["instance%d" % i], "defect": "nonzero"})
            act = mcmod.ad_b_action(ctx, b)
            if mcmod.gauge_h(ctx, act, xi).value != xi.value - act.kappa:
                closed_form.append({"identity": "order1-derivation-gauge", "inputs": ["instance%d" % i], "defect": "nonzero"})
    checks.append(_check_entry("gauge-bridges", bridge))
    checks.append(_check_entry("gauge-coincidence", mismatches))
    if order == 1:
        checks.append(_check_entry("gauge-order1-closed-forms", closed_form))
    return checks


def cmd_example(args) -> int:
    try:
        pair = catalog.make_pair(args.name)
    except (ValueError, KeyError) as exc:
        print("error: %s" % (exc,), file=sys.stderr)
        return 2
    _emit(pair.to_json(), args.json)
    return 0


def cmd_check(args) -> int:
    t0 = time.time()
    try:
        pair = _load_pair(args.pair_file)
    except (OSError, ValueError, KeyError) as exc:
        print("error reading %s: %s" % (args.pair_file, exc), file=sys.stderr)
        return 2
    checks = []
    if args.kind in ("jacobi", "all"):
        checks.extend(_jacobi_checks(pair, args.max_arity))
    clean_algebra = not any(c["name"] == "lie-jacobi" and c["status"] == "fail" for c in checks)
    if args.kind in ("action", "all") and clean_algebra:
        checks.extend(_action_checks(pair, args.max_arity))
    if args.kind in ("gauge", "all") and clean_algebra:
        checks.extend(_gauge_checks(pair, args.order, args.seed))
    status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    report = {
        "command": "check %s" % args.kind,
        "input": {"path": args.pair_file, "digest": pair.digest()},
        "parameters": {"max_arity": args.max_arity, "order": args.order, "seed": args.seed},
        "checks": checks,
        "status": status,
    }
    _emit(report, args.json)
    print("check %s: %s (%.2fs)" % (args.kind, status, time.time() - t0), file=sys.stderr)
    return 0 if status == "pass" else 1


def cmd_compute(args) -> int:
    try:
        pair = _load_pair(args.pair_file)
    except (OSError, ValueError, KeyError) as exc:
        print("error reading %s: %s" % (args.pair_file, exc), file=sys.stderr)
        return 2
    bad = validate_lie(pair.algebra)
    if bad:
        print("error: input fails the Jacobi identity on %s" % (bad,), file=sys.stderr)
        return 2
    if args.kind == "derivations":
        ders = da.derivations(pair.algebra)
        result = {
            "command": "compute derivations",
            "input": {"path": args.pair_file, "digest": pair.digest()},
            "dimension": len(ders),
            "basis": [d.to_json() for d in ders],
        }
        _emit(result, args.json)
        return 0
    if args.kind == "cohomology":
        l3 = build_l3(pair)
        model = da.cohomology(l3)
        ders = da.derivations(pair.algebra)
        preserving = [d for d in ders if da.kappa(l3, d).is_zero()]
        bracket_table = {}
        for k1 in model.degrees:
            for i1 in range(model.dims[k1]):
                for k2 in model.degrees:
                    for i2 in range(model.dims[k2]):
                        if k1 + k2 not in model.dims:
                            continue
                        coords = model.induced_bracket(k1, i1, k2, i2)
                        if any(coords):
                            key = "[%d.%d,%d.%d]" % (k1, i1, k2, i2)
                            bracket_table[key] = [str(c) for c in coords]
        action_table = {}
        for idx, d in enumerate(preserving):
            ops = da.induced_action(l3, model, d)
            action_table["der%d" % idx] = {
                str(k): [[str(c) for c in col] for col in cols] for k, cols in ops.items()
            }
        result = {
            "command": "compute cohomology",
            "input": {"path": args.pair_file, "digest": pair.digest()},
            "dimensions": {str(k): model.dims[k] for k in model.degrees},
            "representatives": model.to_json()["representatives"],
            "induced_bracket": bracket_table,
            "preserving_derivations": [d.to_json() for d in preserving],
            "induced_action": action_table,
        }
        _emit(result, args.json)
        return 0
    if args.kind == "mc-extend":
        l3 = build_l3(pair)
        ctx = mcmod.MCContext(l3, order=args.order)
        rng = random.Random(args.seed)
        deg1, _deg2, rows = mcmod._differential_rows(ctx)
        kernel = linalg.nullspace(rows, len(deg1))
        coords = {}
        for vec in kernel:
            c = rng.randint(-3, 3)
            if not c:
                continue
            for nm, v in zip(deg1, vec):
                if v:
                    coords[nm] = coords.get(nm, 0) + c * v
        seed_elem = GradedElement(l3.basis, coords)
        outcome = mcmod.mc_extend(ctx, seed_elem)
        result = {
            "command": "compute mc-extend",
            "input": {"path": args.pair_file, "digest": pair.digest()},
            "parameters": {"order": args.order, "seed": args.seed},
            "seed_element": seed_elem.to_json(),
        }
        if isinstance(outcome, mcmod.MCElement):
            result["status"] = "extended"
            result["element"] = outcome.value.to_json()
        else:
            result["status"] = "obstructed"
            result["obstruction_order"] = outcome.order
            result["obstruction"] = outcome.element.to_json()
        _emit(result, args.json)
        return 0
    print("unknown computation %r" % (args.kind,), file=sys.stderr)
    return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="l3pair",
        description="Exact verification engine for the bracket structure on "
        "complement-valued forms of a Lie pair and its derivation symmetry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ex = sub.add_parser("example", help="emit a shipped example pair as JSON")
    p_ex.add_argument("name", help="one of %s (abelian:N for any N >= 1)" % (", ".join(catalog.EXAMPLE_NAMES),))
    p_ex.add_argument("--json", metavar="PATH", default=None, help="write to a file instead of stdout")
    p_ex.set_defaults(func=cmd_example)

    p_ck = sub.add_parser("check", help="run an identity-check suite on a pair file")
    p_ck.add_argument("kind", choices=["jacobi", "action", "gauge", "all"])
    p_ck.add_argument("pair_file")
    p_ck.add_argument("--max-arity", type=int, default=6, dest="max_arity")
    p_ck.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p_ck.add_argument("--seed", type=int, default=0)
    p_ck.add_argument("--json", metavar="PATH", default=None)
    p_ck.set_defaults(func=cmd_check)

    p_cp = sub.add_parser("compute", help="compute derived data for a pair file")
    p_cp.add_argument("kind", choices=["derivations", "cohomology", "mc-extend"])
    p_cp.add_argument("pair_file")
    p_cp.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p_cp.add_argument("--seed", type=int, default=0)
    p_cp.add_argument("--json", metavar="PATH", default=None)
    p_cp.set_defaults(func=cmd_compute)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
