"""Command-line surface: verify / table / sylow / galois / witness / gggr."""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog as cat
from .engine import DEFAULT_BUDGET, SubgroupHandle, enumerate_group
from .matgroup import GroupSpec, format_matrix
from .sylow2 import build_sylow, predicted_normalizer_order
from .intarith import two_part


def _add_common(p):
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--cache", default=None, help="directory for group caches")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="sylchar")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("verify", help="run the verification catalog")
    _add_common(p)
    p.add_argument("--config", default=None, help="catalog config file")
    p.add_argument("--only", action="append", default=None,
                   help="filter checks by id prefix (repeatable)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="write the report to a file")
    p.add_argument("--no-timing", action="store_true",
                   help="omit elapsed_ms fields from the report")

    p = sub.add_parser("table", help="print a character table")
    _add_common(p)
    p.add_argument("--spec", required=True)

    p = sub.add_parser("sylow", help="Sylow 2-subgroup decomposition")
    _add_common(p)
    p.add_argument("--spec", required=True)
    p.add_argument("--brute-check", action="store_true")

    p = sub.add_parser("galois", help="Galois action on a character table")
    _add_common(p)
    p.add_argument("--spec", required=True)
    p.add_argument("--action", default="sigma",
                   help="'sigma' or an explicit exponent k")

    p = sub.add_parser("witness", help="build and check a witness element")
    _add_common(p)
    p.add_argument("--spec", required=True)
    p.add_argument("--Q", default="", help="e.g. 'field:m=1,graph'")
    p.add_argument("--char2", action="store_true",
                   help="use the characteristic-2 torus construction")

    p = sub.add_parser("gggr", help="generalised Gelfand-Graev character")
    _add_common(p)
    p.add_argument("--spec", required=True)
    p.add_argument("--partition", required=True,
                   help="comma-separated, e.g. 2,1")
    p.add_argument("--check", default="multiplicities",
                   help="comma list from galois,values,multiplicities")

    args = ap.parse_args(argv)
    return {
        "verify": _cmd_verify,
        "table": _cmd_table,
        "sylow": _cmd_sylow,
        "galois": _cmd_galois,
        "witness": _cmd_witness,
        "gggr": _cmd_gggr,
    }[args.cmd](args)


def _cmd_verify(args) -> int:
    only = args.only
    if args.config:
        only, extra = _parse_config(args.config)
        if extra.get("budget"):
            args.budget = extra["budget"]
        if extra.get("workers"):
            args.workers = extra["workers"]
    report = cat.run_catalog(only=only, workers=args.workers, budget=args.budget)
    if args.report == "json":
        text = cat.report_to_json(report, include_timing=not args.no_timing)
    else:
        text = cat.report_to_text(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report["summary"]["failed"] == 0 else 1


def _parse_config(path):
    """Flat key=value lines; `entry=<check-id-prefix>` selects checks,
    other keys set run parameters.  Errors carry line numbers."""
    only = []
    extra = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, val = line.split("=", 1)
            key, val = key.strip(), val.strip()
            if key == "entry":
                try:
                    if ":" not in val and "(" in val:
                        GroupSpec.parse(val)  # validate bare spec entries
                except ValueError as e:
                    raise SystemExit(f"{path}:{lineno}: {e}")
                only.append(val)
            elif key in ("budget", "workers"):
                try:
                    extra[key] = int(val)
                except ValueError:
                    raise SystemExit(f"{path}:{lineno}: {key} must be an integer")
            elif key == "cache":
                extra[key] = val
            else:
                raise SystemExit(f"{path}:{lineno}: unknown key {key!r}")
    return (only or None), extra


def _cmd_table(args) -> int:
    T = cat.table_for(args.spec, args.budget)
    if args.report == "json":
        out = {
            "spec": args.spec,
            "order": T.group.order,
            "conductor": T.exponent,
            "class_sizes": list(T.class_sizes),
            "class_orders": list(T.class_orders),
            "degrees": list(T.degrees),
            "rows": [[v.serialize() for v in row] for row in T.rows],
        }
        print(json.dumps(out, indent=2, sort_keys=True))
        return 0
    print(f"{args.spec}: order {T.group.order}, {T.n_classes} classes, "
          f"conductor {T.exponent}")
    print("class sizes :", " ".join(str(s) for s in T.class_sizes))
    print("class orders:", " ".join(str(s) for s in T.class_orders))
    for i, row in enumerate(T.rows):
        print(f"chi_{i} (deg {T.degrees[i]}): " + "; ".join(v.serialize() for v in row))
    return 0


def _cmd_sylow(args) -> int:
    spec = GroupSpec.parse(args.spec)
    dec = build_sylow(spec.n, spec.q, spec.eps)
    F, n = spec.field, spec.n
    info = {
        "spec": str(spec),
        "parts": list(dec.parts),
        "sylow_order": dec.order,
        "order_verified_by_closure": dec.order_verified,
        "predicted_normalizer_order": dec.normalizer_order,
        "generators": [format_matrix(F, n, g) for g in dec.gens],
        "z_generators": [format_matrix(F, n, z) for z in dec.z_gens],
    }
    if args.brute_check:
        g = enumerate_group(spec.matrix_spec(), budget=args.budget,
                            cache_dir=args.cache)
        P = SubgroupHandle(g, g.closure(dec.gens), dec.gens)
        N = g.normalizer(P)
        info["observed_sylow_order"] = P.order
        info["observed_normalizer_order"] = N.order
        info["normalizer_matches"] = N.order == dec.normalizer_order
    if args.report == "json":
        print(json.dumps(info, indent=2, sort_keys=True))
    else:
        for k, v in info.items():
            if isinstance(v, list) and v and isinstance(v[0], str):
                print(f"{k}:")
                for item in v:
                    print(f"  {item}")
            else:
                print(f"{k}: {v}")
    return 0


def _cmd_galois(args) -> int:
    from .cyclotomic import sigma_exponent
    from .galois import all_odd_sigma_fixed, odd_degree_rows, sigma_permutation

    T = cat.table_for(args.spec, args.budget)
    if args.action == "sigma":
        perm = sigma_permutation(T)
        k = sigma_exponent(T.exponent)
    else:
        from .galois import galois_on_character

        k = int(args.action)
        perm = tuple(galois_on_character(T, i, k) for i in range(T.n_classes))
    info = {
        "spec": args.spec,
        "exponent_k": k,
        "row_permutation": list(perm),
        "odd_degree_rows": list(odd_degree_rows(T)),
        "all_odd_degree_fixed": all(perm[i] == i for i in odd_degree_rows(T)),
    }
    if args.action == "sigma":
        info["all_odd_degree_sigma_fixed"] = all_odd_sigma_fixed(T)
    if args.report == "json":
        print(json.dumps(info, indent=2, sort_keys=True))
    else:
        for k_, v in info.items():
            print(f"{k_}: {v}")
    return 0


def _cmd_witness(args) -> int:
    from .catalog import _parse_qdesc
    from .witness import WitnessRefusal, build_z, check_S_conditions, p2_alpha0_witness

    spec = GroupSpec.parse(args.spec)
    Q = _parse_qdesc(args.Q)
    try:
        if args.char2:
            w = p2_alpha0_witness(spec.n, spec.q, spec.eps, allow_experimental=True)
        else:
            w = build_z(spec.n, spec.q, spec.eps, Q)
    except WitnessRefusal as e:
        out = {"outcome": "refuse", "reason": str(e),
               "conditions": list(e.conditions)}
        print(json.dumps(out, indent=2) if args.report == "json"
              else f"refused: {e} (conditions {list(e.conditions)})")
        return 0
    rep = check_S_conditions(w, Q)
    out = {
        "outcome": "witness",
        "element": w.literal(),
        "construction": {k: (list(v) if isinstance(v, tuple) else v)
                         for k, v in w.construction.items()},
        "checks": {k: {"pass": v[0], "evidence": v[1]}
                   for k, v in rep.verdicts.items()},
        "all_pass": rep.all_pass,
    }
    if args.report == "json":
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print("element:", out["element"])
        for line in rep.lines():
            print(" ", line)
    return 0 if rep.all_pass else 1


def _cmd_gggr(args) -> int:
    from .gggr import (
        build_nilpotent,
        gggr_character,
        gggr_value_field_report,
        verify_gggr_galois,
    )
    from .cyclotomic import sigma_exponent

    g = enumerate_group(args.spec, budget=args.budget, cache_dir=args.cache)
    T = cat.table_for(args.spec, args.budget)
    partition = tuple(int(x) for x in args.partition.split(","))
    nil = build_nilpotent(g.spec.field, partition)
    vals = gggr_character(g, nil)
    checks = [c.strip() for c in args.check.split(",") if c.strip()]
    out = {"spec": args.spec, "partition": list(partition),
           "values": [v.serialize() for v in vals]}
    code = 0
    if "multiplicities" in checks:
        mults = T.decompose(vals)
        out["multiplicities"] = list(mults)
        if any(m < 0 for m in mults):
            code = 1
    if "values" in checks:
        rep = gggr_value_field_report(vals, g.spec, T)
        out["value_field"] = rep
        if not rep["ok"]:
            code = 1
    if "galois" in checks:
        k = sigma_exponent(g.spec.p)
        ok = verify_gggr_galois(g, nil, k, values=vals)
        out["galois_power"] = k
        out["galois_equality"] = ok
        if not ok:
            code = 1
    print(json.dumps(out, indent=2, sort_keys=True) if args.report == "json"
          else "\n".join(f"{k}: {v}" for k, v in out.items()))
    return code


if __name__ == "__main__":
    sys.exit(main())
