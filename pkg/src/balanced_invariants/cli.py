"""Command-line front end.

    balinv eval --domain example10 --param a=0.8 --point 0,0.5
    balinv chain --domain example7 --from 0,0 --to 0.5,0.9 --m 2
    balinv verify all --workers 2
    balinv scan threshold --b-from 0.5 --b-to 0.95 --steps 46 --output csv

Exit codes: 0 success, 1 computation or assertion failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Any

import numpy as np

from .core import BoundKind, complex_to_json
from .domains import CATALOG, bisect_gauge, hull_minkowski, make_domain, minkowski
from .harness import (
    Report,
    divergence_probe,
    scenario_names,
    slice_scan,
    threshold_scan_remark_a,
    verify_all,
)
from .metrics import (
    UnsupportedDomain,
    caratheodory_monomial_lower,
    kr2_upper,
    kr_upper,
    lempert_upper,
    m_lempert_upper,
)
from .optim import HULL_BUDGET, OptimizerBudget

SEED_ENV = "BALINV_SEED"
BUDGET_FLAGS = ("restarts", "max_iterations", "degree", "rho", "radii", "angles")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers

def parse_complex(text: str) -> complex:
    """Parse ``re``, ``re+imi``, ``imi`` or ``i`` (``j`` is accepted too)."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("J", "j").replace("i", "j")
    if not s:
        raise UsageError("empty complex literal")
    if s.endswith("j") and (len(s) == 1 or s[-2] in "+-"):
        s = s[:-1] + "1j"
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"bad complex literal {text!r}; expected re[+im i]") from None


def parse_point(text: str) -> np.ndarray:
    return np.array([parse_complex(part) for part in text.split(",")], dtype=complex)


def parse_value(text: str) -> Any:
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    try:
        return parse_complex(text)
    except UsageError:
        return text


def parse_params(items: list[str]) -> dict:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {item!r}")
        out[key] = parse_value(val)
    return out


def _known_kind(text: str) -> str:
    if text not in CATALOG:
        raise argparse.ArgumentTypeError(f"unknown domain kind {text!r}; known kinds: {', '.join(sorted(CATALOG))}")
    return text


# ---------------------------------------------------------------------------
# argument parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", type=_known_kind, help="catalog kind: " + ", ".join(sorted(CATALOG)))
    common.add_argument("--param", action="append", default=[], metavar="KEY=VALUE", help="domain parameter")
    common.add_argument("--dim", type=int, help="dimension for polydisc, ball, example9_n")
    common.add_argument("--config", help="JSON file with defaults; flags win")
    common.add_argument("--seed", type=int, help=f"seed (default ${SEED_ENV} or 0)")
    common.add_argument("--restarts", type=int)
    common.add_argument("--max-iterations", type=int, dest="max_iterations")
    common.add_argument("--degree", type=int)
    common.add_argument("--rho", type=float)
    common.add_argument("--radii", type=int)
    common.add_argument("--angles", type=int)
    common.add_argument("--output", choices=("json", "csv"))
    common.add_argument("--out", help="write the report to this path instead of stdout")
    common.add_argument("--workers", type=int, help="worker processes (verify all)")

    p = argparse.ArgumentParser(prog="balinv", description="Bounds for invariant functions on balanced domains.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="gauge, hull upper bound and monomial lower bound")
    s.add_argument("--point", action="append", type=parse_point_arg)
    s = sub.add_parser("lempert", parents=[common], help="Lempert function upper bound")
    s.add_argument("--from", dest="source", type=parse_point_arg)
    s.add_argument("--to", dest="target", type=parse_point_arg)
    s = sub.add_parser("chain", parents=[common], help="m-th Lempert function upper bound")
    s.add_argument("--from", dest="source", type=parse_point_arg)
    s.add_argument("--to", dest="target", type=parse_point_arg)
    s.add_argument("--m", type=int)
    s = sub.add_parser("carath", parents=[common], help="Caratheodory lower bound from the origin")
    s.add_argument("--point", action="append", type=parse_point_arg)
    s.add_argument("--exponent-budget", type=int, dest="exponent_budget")
    s = sub.add_parser("hull", parents=[common], help="convex hull gauge upper bound")
    s.add_argument("--point", action="append", type=parse_point_arg)
    s.add_argument("--max-terms", type=int, dest="max_terms")
    s = sub.add_parser("kr", parents=[common], help="Kobayashi-Royden metric upper bound")
    s.add_argument("--at", dest="base", type=parse_point_arg, help="base point (default origin)")
    s.add_argument("--direction", type=parse_point_arg)
    s.add_argument("--split", action="store_true", help="two-term split bound at the origin")
    s = sub.add_parser("verify", parents=[common], help="run verification scenarios")
    s.add_argument("names", nargs="+", help="scenario names or 'all'")
    s = sub.add_parser("scan", parents=[common], help="threshold, slice or divergence scans")
    s.add_argument("kind", choices=("threshold", "slice", "divergence"))
    s.add_argument("--b-from", type=float, dest="b_from")
    s.add_argument("--b-to", type=float, dest="b_to")
    s.add_argument("--steps", type=int)
    s.add_argument("--a", dest="direction", type=parse_point_arg, help="slice direction")
    s.add_argument("--lambdas", help="comma-separated slice parameters")
    s.add_argument("--m", type=int)
    s.add_argument("--boundary", type=parse_point_arg, help="boundary point for divergence")
    s.add_argument("--from", dest="source", type=parse_point_arg)
    return p


def parse_point_arg(text: str) -> np.ndarray:
    try:
        return parse_point(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# ---------------------------------------------------------------------------
# config resolution

def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    return cfg


def _cfg_point(value: Any) -> np.ndarray:
    if isinstance(value, str):
        return parse_point(value)
    return np.array([parse_complex(v) if isinstance(v, str) else complex(*v) if isinstance(v, list) else complex(v)
                     for v in value], dtype=complex)


def resolve(args: argparse.Namespace) -> dict:
    """Merge config file and flags into one run description (flags win)."""
    cfg = _load_config(args.config)
    run: dict[str, Any] = {"command": args.command}
    kind = args.domain or cfg.get("domain")
    if kind is not None and kind not in CATALOG:
        raise UsageError(f"unknown domain kind {kind!r}; known kinds: {', '.join(sorted(CATALOG))}")
    params = dict(cfg.get("params", {}))
    params.update(parse_params(args.param))
    dim = args.dim if args.dim is not None else cfg.get("dim")
    if dim is not None:
        params["n"] = int(dim)
    run["domain"] = kind
    run["params"] = params
    env_seed = os.environ.get(SEED_ENV)
    try:
        seed = args.seed if args.seed is not None else cfg.get("seed", int(env_seed) if env_seed else 0)
    except ValueError:
        raise UsageError(f"${SEED_ENV} must be an integer") from None
    budget = dict(cfg.get("budget", {}))
    for name in BUDGET_FLAGS:
        if getattr(args, name) is not None:
            budget[name] = getattr(args, name)
    budget["seed"] = int(seed)
    try:
        run["budget"] = OptimizerBudget(**budget)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad budget: {exc}") from None
    run["seed"] = int(seed)
    run["output"] = args.output or cfg.get("output", "json")
    if run["output"] not in ("json", "csv"):
        raise UsageError("output must be json or csv")
    run["out"] = args.out or cfg.get("out")
    run["workers"] = args.workers or cfg.get("workers", 1)
    for key in ("point", "source", "target", "base", "direction", "boundary"):
        val = getattr(args, key, None)
        if val is None and key in cfg:
            raw = cfg[key]
            val = [_cfg_point(x) for x in raw] if key == "point" else _cfg_point(raw)
        run[key] = val
    for key in ("m", "exponent_budget", "max_terms", "steps", "b_from", "b_to", "lambdas", "split", "names", "kind"):
        val = getattr(args, key, None)
        run[key] = cfg.get(key) if val is None else val
    return run


def _domain(run: dict):
    if run["domain"] is None:
        raise UsageError("--domain is required for this command")
    try:
        return make_domain(run["domain"], run["params"])
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None


def _need(run: dict, key: str, flag: str):
    if run.get(key) is None:
        raise UsageError(f"{flag} is required for {run['command']}")
    return run[key]


# ---------------------------------------------------------------------------
# commands

def _record(query: dict, payload: dict, run: dict) -> dict:
    return {"query": query, **payload, "budget": run["budget"].to_dict(), "seed": run["seed"]}


def cmd_eval(run: dict) -> tuple[list[dict], bool]:
    dom = _domain(run)
    records = []
    for p in _need(run, "point", "--point"):
        if dom.gauge is not None:
            h = {"value": minkowski(dom, p), "kind": BoundKind.EXACT.value, "method": "closed form"}
        elif dom.balanced:
            est = bisect_gauge(dom, p)
            h = {"value": est.value, "kind": BoundKind.EXACT.value, "method": "bisection",
                 "may_be_zero": est.may_be_zero}
        else:
            h = None
        payload = {"h": h}
        if dom.balanced:
            hull = hull_minkowski(dom, p, budget=HULL_BUDGET.replace(seed=run["seed"]))
            payload["hull_upper"] = hull.bound.to_dict()
        if dom.reinhardt_cone is not None:
            c = caratheodory_monomial_lower(dom, p)
            payload["c_lower"] = c.to_dict()
        records.append(_record({"domain": dom.describe(), "point": complex_to_json(p)}, payload, run))
    return records, True


def cmd_lempert(run: dict) -> tuple[list[dict], bool]:
    dom = _domain(run)
    z, w = _need(run, "source", "--from"), _need(run, "target", "--to")
    r = lempert_upper(dom, z, w, run["budget"])
    q = {"domain": dom.describe(), "from": complex_to_json(z), "to": complex_to_json(w)}
    return [_record(q, r.to_dict(), run)], not r.failed


def cmd_chain(run: dict) -> tuple[list[dict], bool]:
    dom = _domain(run)
    z, w = _need(run, "source", "--from"), _need(run, "target", "--to")
    m = run["m"] or 2
    r = m_lempert_upper(dom, z, w, m, run["budget"])
    q = {"domain": dom.describe(), "from": complex_to_json(z), "to": complex_to_json(w), "m": m}
    return [_record(q, r.to_dict(), run)], not any(link.failed for link in r.chain.links)


def cmd_carath(run: dict) -> tuple[list[dict], bool]:
    dom = _domain(run)
    B = run["exponent_budget"] or 64
    out = []
    for p in _need(run, "point", "--point"):
        c = caratheodory_monomial_lower(dom, p, B)
        out.append(_record({"domain": dom.describe(), "point": complex_to_json(p), "exponent_budget": B},
                           c.to_dict(), run))
    return out, True


def cmd_hull(run: dict) -> tuple[list[dict], bool]:
    dom = _domain(run)
    out = []
    for p in _need(run, "point", "--point"):
        r = hull_minkowski(dom, p, run["max_terms"], HULL_BUDGET.replace(seed=run["seed"]))
        out.append(_record({"domain": dom.describe(), "point": complex_to_json(p), "max_terms": run["max_terms"]},
                           r.to_dict(), run))
    return out, True


def cmd_kr(run: dict) -> tuple[list[dict], bool]:
    dom = _domain(run)
    v = _need(run, "direction", "--direction")
    if run["split"]:
        r = kr2_upper(dom, v, run["budget"])
        q = {"domain": dom.describe(), "direction": complex_to_json(v), "split": True}
    else:
        z = run["base"] if run["base"] is not None else np.zeros(dom.dim, complex)
        r = kr_upper(dom, z, v, run["budget"])
        q = {"domain": dom.describe(), "at": complex_to_json(z), "direction": complex_to_json(v)}
    return [_record(q, r.to_dict(), run)], bool(np.isfinite(r.value))


def cmd_verify(run: dict) -> list[Report]:
    names = run["names"] or ["all"]
    known = scenario_names()
    if "all" in names:
        names = known
    bad = [n for n in names if n not in known]
    if bad:
        raise UsageError(f"unknown scenario(s) {', '.join(bad)}; known: {', '.join(known)}")
    return verify_all(run["budget"], names, workers=int(run["workers"] or 1))


def cmd_scan(run: dict) -> list[Report]:
    kind = run["kind"]
    if kind == "threshold":
        lo = run["b_from"] if run["b_from"] is not None else 0.5
        hi = run["b_to"] if run["b_to"] is not None else 0.95
        steps = run["steps"] or 46
        if not 0 < lo <= hi < 1 or steps < 1:
            raise UsageError("threshold scan needs 0 < b-from <= b-to < 1 and steps >= 1")
        bs = np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])
        return [threshold_scan_remark_a(np.round(bs, 12))]
    dom = _domain(run)
    if kind == "slice":
        a = _need(run, "direction", "--a")
        lambdas = run["lambdas"] or "0.25,0.5,0.75"
        try:
            lams = [float(x) for x in str(lambdas).split(",")] if isinstance(lambdas, str) else list(lambdas)
        except ValueError:
            raise UsageError("--lambdas expects comma-separated reals") from None
        return [slice_scan(dom, a, run["m"] or 2, lams, run["budget"])]
    b = _need(run, "boundary", "--boundary")
    z = run["source"] if run["source"] is not None else np.zeros(dom.dim, complex)
    return [divergence_probe(dom, z, b, run["m"] or 2, run["steps"] or 8, run["budget"])]


COMMANDS = {"eval": cmd_eval, "lempert": cmd_lempert, "chain": cmd_chain, "carath": cmd_carath,
            "hull": cmd_hull, "kr": cmd_kr}


# ---------------------------------------------------------------------------
# output

def _csv_records(records: list[dict]) -> str:
    import csv
    import io

    rows = [_flatten(r) for r in records]
    fields: list[str] = []
    for r in rows:
        fields += [k for k in r if k not in fields]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _flatten(d: Any, prefix: str = "") -> dict:
    out = {}
    if isinstance(d, dict):
        for k, v in d.items():
            if k == "certificate":
                continue
            out.update(_flatten(v, f"{prefix}{k}."))
    else:
        out[prefix.rstrip(".")] = json.dumps(d) if isinstance(d, list) else d
    return out


def render(run: dict, records: list[dict] | None, reports: list[Report] | None, ok: bool,
           elapsed: float) -> str:
    if run["output"] == "csv":
        if reports is not None:
            return "".join(r.to_csv() for r in reports)
        return _csv_records(records)
    config = {k: v for k, v in run.items()
              if k != "budget" and v is not None and not isinstance(v, np.ndarray)}
    config["budget"] = run["budget"].to_dict()
    for key in ("source", "target", "base", "direction", "boundary"):
        if run.get(key) is not None:
            config[key] = complex_to_json(run[key])
    if run.get("point") is not None:
        config["point"] = [complex_to_json(p) for p in run["point"]]
    doc = {"command": run["command"], "config": config, "pass": ok}
    if reports is not None:
        doc["reports"] = [r.to_dict() for r in reports]
    else:
        doc["results"] = records
    doc["timing"] = {"wall_time": elapsed}
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        run = resolve(args)
        if args.command in ("verify", "scan"):
            reports = (cmd_verify if args.command == "verify" else cmd_scan)(run)
            records, ok = None, all(r.passed for r in reports)
        else:
            records, ok = COMMANDS[args.command](run)
            reports = None
    except UsageError as exc:
        print(f"balinv: error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedDomain as exc:
        print(f"balinv: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"balinv: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, RuntimeError) as exc:
        print(f"balinv: computation failed: {exc}", file=sys.stderr)
        return 1
    text = render(run, records, reports, ok, time.perf_counter() - start)
    if run["out"]:
        with open(run["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
