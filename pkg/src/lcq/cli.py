"""Command line entry point: ``lcq run``, ``lcq list-statements`` and ``lcq eval``."""
from __future__ import annotations

import argparse
import json
import sys

from .core import from_config
from .mc import McSpec
from .verify import REGISTRY, RunConfig, list_statements, run


def _parse_params(items):
    out = {}
    for it in items or []:
        key, _, val = it.partition("=")
        if not _:
            raise SystemExit(f"--param expects key=value, got {it!r}")
        try:
            out[key] = json.loads(val)
        except json.JSONDecodeError:
            out[key] = val
    return out


def cmd_run(args) -> int:
    with open(args.config) as fh:
        raw = json.load(fh)
    try:
        cfg = RunConfig.from_dict(raw, seed=args.seed, workers=args.workers)
    except (ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    doc = run(cfg, out=args.out, echo=None if args.quiet else print)
    return 1 if doc["summary"]["fail"] else 0


def cmd_list(args) -> int:
    rows = list_statements()
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        for r in rows:
            print(f"{r['id']:<32} {r['needs']:<6} {r['summary']}")
    # self-audit: every registered id resolves and has a runner
    missing = [sid for sid, st in REGISTRY.items() if not callable(st.run)]
    print(f"{len(rows)} statements registered, {len(missing)} without a runner", file=sys.stderr)
    return 1 if missing else 0


def cmd_eval(args) -> int:
    from . import quermass as qm
    from .geometry import mass

    f = from_config({"family": args.family, "dim": args.dim, "params": _parse_params(args.param)})
    mc = McSpec(samples=args.samples, seed=args.seed, workers=args.workers)
    if args.op == "mass":
        est = mass(f, mc) if f.mass is None else None
        out = {"value": f.mass, "stderr": 0.0} if est is None else est.to_dict()
    else:
        if args.k is None:
            raise SystemExit(f"--op {args.op} needs --k")
        fn = {"psi": qm.psi_k, "phi": qm.phi_k, "phi-prime": qm.phi_prime_k, "w": qm.w_k}[args.op]
        out = fn(f, args.k, mc).value.to_dict()
    out.update({"family": f.describe(), "op": args.op, "k": args.k})
    print(json.dumps(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lcq", description="Monte Carlo checks of functional quermassintegral "
                                                          "and Radon-transform inequalities for log-concave functions")
    sub = ap.add_subparsers(dest="cmd", required=True)

    r = sub.add_parser("run", help="run a verification campaign from a JSON config")
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True, help="JSON report path; a CSV is written next to it")
    r.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    r.add_argument("--workers", type=int, default=None)
    r.add_argument("--quiet", action="store_true")
    r.set_defaults(fn=cmd_run)

    ls = sub.add_parser("list-statements", help="list registered statement ids")
    ls.add_argument("--json", action="store_true")
    ls.set_defaults(fn=cmd_list)

    e = sub.add_parser("eval", help="evaluate one functional on a builtin family")
    e.add_argument("--family", required=True, choices=["gaussian", "exp-norm", "power-law", "indicator", "constant"])
    e.add_argument("--dim", type=int, default=2)
    e.add_argument("--param", action="append", help="family parameter key=value (repeatable)")
    e.add_argument("--op", required=True, choices=["mass", "psi", "phi", "phi-prime", "w"])
    e.add_argument("--k", type=int, default=None)
    e.add_argument("--samples", type=int, default=1024)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(fn=cmd_eval)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
