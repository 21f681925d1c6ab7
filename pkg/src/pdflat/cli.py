"""Command line driver: ``pdflat <subcommand> [options]``.

Exit codes: 0 success, 1 a checked assertion failed, 2 bad configuration.
"""
from __future__ import annotations

import argparse
import csv
import inspect
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional

from . import checks
from .errors import PdflatError, PreconditionError
from .families import FAMILIES, family_degree
from .flattening import catalecticant, shifted_partials_dim
from .koszul import BorderRankBound, apriori_bound, koszul_matrix, skew_symmetry_check
from .lgv import gv_matrix, is_positive_definite
from .rank import RankConfig, compute_rank

SWEEP_SCHEMA = "pdflat-sweep/1"
SWEEP_COLUMNS = ["schema", "kind", "family", "n", "d", "k", "m", "e", "s", "q", "tau",
                 "rows", "cols", "rank", "bound", "attained", "certainty", "seed", "primes"]


class ConfigError(Exception):
    pass


def parse_range(text: Optional[str]) -> List[int]:
    """'3..5' -> [3, 4, 5]; '1,3' -> [1, 3]; '4' -> [4]."""
    if text is None:
        return []
    out = []
    for part in str(text).split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part.strip():
            out.append(int(part))
    return out


def _config(args) -> RankConfig:
    cfg = RankConfig.from_env()
    if args.primes is not None:
        cfg.n_primes = args.primes
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _family_params(args, names=("n", "d", "k", "m")) -> Dict[str, int]:
    params = {k: getattr(args, k) for k in names if getattr(args, k, None) is not None}
    if getattr(args, "seed", None) is not None:
        params["seed"] = args.seed
    return params


def _build(name: str, params: Dict[str, int], cap: Optional[int]):
    spec = FAMILIES.get(name)
    if spec is None:
        raise ConfigError(f"unknown family {name!r}; see `pdflat family --list`")
    kwargs = {p: params[p] for p in spec.params if p in params}
    missing = [p for p in spec.params if p not in params and p != "seed"]
    if missing:
        raise ConfigError(f"family {name!r} needs --{' --'.join(missing)}")
    if cap is not None and "cap" in inspect.signature(spec.build).parameters:
        kwargs["cap"] = cap
    return spec.build(**kwargs)


def _meta(args, cfg: RankConfig) -> dict:
    """Seed and prime count, recorded in every output for reproducibility."""
    return {"seed": cfg.seed, "primes": cfg.n_primes}


# -- subcommands ---------------------------------------------------------------------


def cmd_family(args) -> dict:
    if args.list:
        return {"families": [{"name": s.name, "params": list(s.params), "description": s.doc}
                             for s in FAMILIES.values()]}
    if not args.name:
        raise ConfigError("family name required (or --list)")
    p = _build(args.name, _family_params(args), args.cap)
    return p.to_json_obj()


def cmd_catalecticant(args) -> dict:
    cfg = _config(args)
    params = _family_params(args)
    p = _build(args.family, params, args.cap)
    d = p.homogeneous_degree()
    e = args.e if args.e is not None else d // 2
    cat = catalecticant(p, e, cap=args.cap or 200_000)
    rep = cat.rank_report(cfg)
    return {"params": dict(params, family=args.family, e=e, degree=d), "rows": rep.rows, "cols": rep.cols,
            "rank": rep.rank, "full_rank": rep.full_rank, "method": rep.method, "report": rep.to_dict(),
            **_meta(args, cfg)}


def cmd_shifted(args) -> dict:
    cfg = _config(args)
    params = _family_params(args)
    p = _build(args.family, params, args.cap)
    sp = shifted_partials_dim(p, args.e, args.tau, cfg, cap=args.cap or 200_000)
    return {"params": dict(params, family=args.family, e=args.e, tau=args.tau),
            "rows": sp.distinct_rows, "generators": sp.generator_count, "cols": sp.target_dim,
            "rank": sp.dim, "full_rank": sp.dim == sp.target_dim, "upper_bound": sp.upper_bound,
            "method": "streaming-modular", "certainty": sp.certainty, "report_primes": sp.primes,
            **_meta(args, cfg)}


def _koszul_poly(args):
    params = _family_params(args)
    if args.k is not None and "d" not in params and args.family not in ("f", "ftilde"):
        params["d"] = 2 * args.k + 1
    return _build(args.family, params, args.cap), params


def cmd_koszul(args) -> dict:
    cfg = _config(args)
    p, params = _koszul_poly(args)
    d = p.homogeneous_degree()
    s = args.s if args.s is not None else (d - 1) // 2
    K = koszul_matrix(p, s, args.q)
    rep = compute_rank(K.matrix, cfg)
    brb = BorderRankBound(rep.rank, math.comb(p.n - 1, args.q))
    apriori = apriori_bound(p.n, (d - 1) // 2, args.q) if d % 2 == 1 and s == (d - 1) // 2 else None
    out = {"params": dict(params, family=args.family, q=args.q, s=s, degree=d),
           "rank": rep.rank, "apriori": apriori,
           "ratio": None if apriori is None else f"{rep.rank}/{apriori}",
           "border_rank_lb": str(brb.ratio), "border_rank_lb_ceil": brb.bound,
           "denominator": brb.denominator, "report": rep.to_dict(), **_meta(args, cfg)}
    if args.check_skew:
        try:
            out["skew_symmetric"] = skew_symmetry_check(p, args.q)
        except PreconditionError as exc:
            out["skew_symmetric"] = None
            out["skew_note"] = str(exc)
    return out


def cmd_lgv(args) -> dict:
    cfg = _config(args)
    try:
        tuples = json.loads(args.tuples)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--tuples is not valid JSON: {exc}") from None
    G = gv_matrix(tuples)
    rep = compute_rank(G.matrix, cfg)
    return {"rank": rep.rank, "distinct": G.distinct, "definite": is_positive_definite(G.matrix),
            "report": rep.to_dict(), **_meta(args, cfg)}


def cmd_verify(args) -> tuple:
    cfg = _config(args)
    opt = checks.VerifyOptions(seed=args.seed if args.seed is not None else 42, rank=cfg)
    if args.lgv_cases is not None:
        opt.lgv_cases = args.lgv_cases
    results = checks.run_suite(args.suite, opt)
    failed = [r for r in results if r.status == "fail"]
    report = {"suite": args.suite, "seed": opt.seed, "primes": cfg.n_primes,
              "passed": sum(r.status == "pass" for r in results), "failed": len(failed),
              "skipped": sum(r.status == "skipped" for r in results),
              "results": [r.to_dict() for r in results]}
    return report, (1 if failed else 0)


# -- sweeps ------------------------------------------------------------------------------


def _sweep_cases(args) -> List[dict]:
    kind, fam = args.kind, args.family
    cases = []
    if kind == "catalecticant":
        if fam in ("f", "ftilde"):
            for n in parse_range(args.n):
                for k in parse_range(args.k):
                    d = family_degree(fam, k=k)
                    for e in (parse_range(args.e) or range(d + 1)):
                        cases.append({"kind": kind, "family": fam, "n": n, "k": k, "d": d, "e": e})
        else:
            for n in parse_range(args.n):
                for d in parse_range(args.d):
                    for e in (parse_range(args.e) or range(d + 1)):
                        if e <= d:
                            cases.append({"kind": kind, "family": fam, "n": n, "d": d, "e": e})
    elif kind == "koszul":
        for n in parse_range(args.n):
            for k in parse_range(args.k):
                for q in (parse_range(args.q) or [1]):
                    if q <= n - 1:
                        cases.append({"kind": kind, "family": fam, "n": n, "k": k, "d": 2 * k + 1, "s": k, "q": q})
    elif kind == "shifted":
        if fam in ("perm", "det"):
            outer = [{"m": m} for m in parse_range(args.m)]
        elif fam in ("f", "ftilde"):
            outer = [{"n": n, "k": k, "d": family_degree(fam, k=k)}
                     for n in parse_range(args.n) for k in parse_range(args.k)]
        else:
            outer = [{"n": n, "d": d} for n in parse_range(args.n) for d in parse_range(args.d)]
        for base in outer:
            for e in (parse_range(args.e) or [1]):
                for tau in parse_range(args.tau):
                    cases.append(dict(base, kind=kind, family=fam, e=e, tau=tau))
    else:
        raise ConfigError(f"unknown sweep kind {kind!r}")
    return cases


def run_sweep_case(case: dict, cfg: RankConfig, seed: int) -> dict:
    fam = case["family"]
    params = {k: case[k] for k in ("n", "d", "k", "m") if k in case and case[k] is not None}
    if fam == "generic":
        params["seed"] = seed + 1000 * case.get("n", 0) + case.get("d", 0)
    p = _build(fam, params, None)
    row = {c: "" for c in SWEEP_COLUMNS}
    row.update({k: v for k, v in case.items()})
    row.update(schema=SWEEP_SCHEMA, seed=seed, primes=cfg.n_primes)
    if case["kind"] == "catalecticant":
        rep = catalecticant(p, case["e"]).rank_report(cfg)
        bound = min(rep.rows, rep.cols)
        row.update(rows=rep.rows, cols=rep.cols, rank=rep.rank, bound=bound, certainty=rep.certainty)
    elif case["kind"] == "koszul":
        K = koszul_matrix(p, case["s"], case["q"])
        rep = compute_rank(K.matrix, cfg)
        bound = apriori_bound(case["n"], case["k"], case["q"])
        row.update(rows=rep.rows, cols=rep.cols, rank=rep.rank, bound=bound, certainty=rep.certainty)
    else:
        sp = shifted_partials_dim(p, case["e"], case["tau"], cfg)
        bound = sp.upper_bound
        row.update(rows=sp.distinct_rows, cols=sp.target_dim, rank=sp.dim, bound=bound, certainty=sp.certainty)
    row["attained"] = row["rank"] == bound
    return row


def cmd_sweep(args) -> List[dict]:
    cfg = _config(args)
    seed = cfg.seed
    cases = _sweep_cases(args)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            return list(pool.map(run_sweep_case, cases, [cfg] * len(cases), [seed] * len(cases)))
    return [run_sweep_case(c, cfg, seed) for c in cases]


# -- plumbing ----------------------------------------------------------------------------------


def _global_flags() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, default=None, help="random seed (primes, generic forms)")
    g.add_argument("--primes", type=int, default=None, help="number of random 62-bit primes")
    g.add_argument("--cap", type=int, default=None, help="size guardrail for generated objects")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--out", default=None, help="write output here instead of stdout")
    return g


def build_parser() -> argparse.ArgumentParser:
    g = _global_flags()
    parser = argparse.ArgumentParser(prog="pdflat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def fam_args(sp, family_required=True):
        sp.add_argument("--family", required=family_required, choices=sorted(FAMILIES))
        for name in ("n", "d", "k", "m"):
            sp.add_argument(f"--{name}", type=int)

    sp = sub.add_parser("family", parents=[g], help="emit a polynomial family as JSON")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--list", action="store_true")
    for name in ("n", "d", "k", "m"):
        sp.add_argument(f"--{name}", type=int)
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("catalecticant", parents=[g], help="rank of a partial-derivative map")
    fam_args(sp)
    sp.add_argument("--e", type=int)
    sp.set_defaults(func=cmd_catalecticant)

    sp = sub.add_parser("shifted", parents=[g], help="dimension of shifted partial derivatives")
    fam_args(sp)
    sp.add_argument("--e", type=int, required=True)
    sp.add_argument("--tau", type=int, required=True)
    sp.set_defaults(func=cmd_shifted)

    sp = sub.add_parser("koszul", parents=[g], help="rank of a Koszul flattening")
    fam_args(sp)
    sp.add_argument("--q", type=int, default=1)
    sp.add_argument("--s", type=int)
    sp.add_argument("--check-skew", action="store_true")
    sp.set_defaults(func=cmd_koszul)

    sp = sub.add_parser("lgv", parents=[g], help="Gessel-Viennot binomial matrix rank")
    sp.add_argument("--tuples", required=True, help="JSON list of equal-length integer lists")
    sp.set_defaults(func=cmd_lgv)

    sp = sub.add_parser("verify", parents=[g], help="run a theorem-check suite")
    sp.add_argument("suite", choices=checks.SUITES + ("all",))
    sp.add_argument("--lgv-cases", type=int)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", parents=[g], help="tabulate ranks against their bounds")
    sp.add_argument("kind", choices=("catalecticant", "koszul", "shifted"))
    sp.add_argument("--family", required=True, choices=sorted(FAMILIES))
    for name in ("n", "d", "k", "m", "e", "q", "tau"):
        sp.add_argument(f"--{name}", type=str, help="value or range like 3..5 or 1,2")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)
    return parser


def _render(payload, fmt: str) -> str:
    if fmt == "csv":
        rows = payload if isinstance(payload, list) else payload.get("results", [payload])
        buf = io.StringIO()
        cols = SWEEP_COLUMNS if isinstance(payload, list) else sorted({k for r in rows for k in r})
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
                        for k, v in r.items()})
        return buf.getvalue()
    if isinstance(payload, list):
        payload = {"schema": SWEEP_SCHEMA, "rows": payload}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    code = 0
    try:
        result = args.func(args)
        if isinstance(result, tuple):
            result, code = result
    except (ConfigError, PdflatError, ValueError) as exc:
        print(f"pdflat: error: {exc}", file=sys.stderr)
        return 2
    text = _render(result, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
