"""Command-line front end: run suites, render bundles, spot-check single results.

Exit codes: 0 when every certificate holds (or is not applicable), 1 when any
is violated or inconclusive, 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .suites import SUITES, RunConfig, run_suite

__all__ = ["main", "RunConfig", "load_config", "run", "report", "render_table"]

OUT_ENV = "ZDECHECK_OUT"
GOOD = ("holds", "not_applicable")
VERDICTS = ("holds", "inconclusive", "violated", "not_applicable")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# config


_CONFIG_KEYS = {"suites", "q_max", "T_max", "precision_bits", "output_dir", "samples", "jobs"}


def load_config(path: str | os.PathLike) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment; ``seed.<suite> = n`` sets seeds."""
    out: dict = {"seeds": {}}
    for i, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{i}: expected key = value")
        key, val = (x.strip() for x in line.split("=", 1))
        try:
            if key.startswith("seed."):
                out["seeds"][key[5:]] = int(val)
            elif key == "suites":
                out["suites"] = [s.strip() for s in val.split(",") if s.strip()]
            elif key in ("q_max", "precision_bits", "samples", "jobs"):
                out[key] = int(val)
            elif key == "T_max":
                out[key] = float(val)
            elif key == "output_dir":
                out[key] = val
            else:
                raise UsageError(f"{path}:{i}: unknown key {key!r}; known: {', '.join(sorted(_CONFIG_KEYS))}")
        except ValueError:
            raise UsageError(f"{path}:{i}: bad value for {key}: {val!r}") from None
    return out


def _build_config(args, seed_args: list[str]) -> RunConfig:
    base = load_config(args.config) if args.config else {"seeds": {}}
    seeds = dict(base.pop("seeds"))
    cfg = RunConfig(**base)
    cfg.output_dir = os.environ.get(OUT_ENV, cfg.output_dir) if "output_dir" not in base else cfg.output_dir
    if args.suites is not None:
        cfg.suites = [s.strip() for s in args.suites.split(",") if s.strip()]
    for attr in ("q_max", "T_max", "precision_bits", "samples", "jobs"):
        v = getattr(args, attr)
        if v is not None:
            setattr(cfg, attr, v)
    if args.out is not None:
        cfg.output_dir = args.out
    it = iter(seed_args)
    for tok in it:
        if not tok.startswith("--seed-"):
            raise UsageError(f"unrecognised argument {tok}")
        name, eq, val = tok[7:].partition("=")
        if not eq:
            val = next(it, None)
            if val is None:
                raise UsageError(f"{tok} needs a value")
        try:
            seeds[name] = int(val)
        except ValueError:
            raise UsageError(f"{tok}: seed must be an integer") from None
    cfg.seeds = seeds
    try:
        cfg.validate()
    except ValueError as e:
        raise UsageError(str(e)) from None
    return cfg


# --------------------------------------------------------------------------
# run


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as f:
        f.write(text)
    os.replace(tmp, path)


def _timed(name: str, cfg: RunConfig) -> tuple[list[dict], float]:
    t0 = time.perf_counter()
    recs = run_suite(name, cfg)
    return recs, time.perf_counter() - t0


def run(cfg: RunConfig, stream=sys.stdout) -> int:
    """Execute ``cfg.suites`` and write ``<suite>.jsonl`` plus ``summary.json`` and ``summary.txt``."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    results: dict[str, tuple[list[dict], float]] = {}
    if cfg.jobs > 1 and len(cfg.suites) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            futs = {s: pool.submit(_timed, s, cfg) for s in cfg.suites}
            results = {s: f.result() for s, f in futs.items()}
    else:
        ctx: dict = {}
        for s in cfg.suites:
            t0 = time.perf_counter()
            recs = run_suite(s, cfg, ctx)
            results[s] = (recs, time.perf_counter() - t0)
    summary = []
    bad: list[tuple[str, dict]] = []
    for s in cfg.suites:
        recs, wall = results[s]
        _write_atomic(out / f"{s}.jsonl", "".join(json.dumps(r, sort_keys=True) + "\n" for r in recs))
        counts = Counter(r["verdict"] for r in recs)
        summary.append({"suite": s, "certificates": len(recs), "wall_time_s": round(wall, 3),
                        **{v: counts.get(v, 0) for v in VERDICTS}})
        bad += [(s, r) for r in recs if r["verdict"] not in GOOD]
    _write_atomic(out / "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    table = _summary_table(summary)
    _write_atomic(out / "summary.txt", table)
    stream.write(table)
    for s, r in bad:
        stream.write(f"{r['verdict'].upper()}: [{s}] {r['name']} {json.dumps(r['inputs'], sort_keys=True)}\n")
    return 1 if bad else 0


def _summary_table(summary: list[dict]) -> str:
    rows = [(d["suite"], str(d["holds"]), str(d["not_applicable"]), str(d["inconclusive"]),
             str(d["violated"]), f"{d['wall_time_s']:.2f}") for d in summary]
    return _format(("suite", "holds", "n/a", "inconclusive", "violated", "wall s"), rows)


def _format(header, rows) -> str:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)] if rows else [len(h) for h in header]
    line = lambda r: "  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip() + "\n"  # noqa: E731
    return line(header) + line(["-" * w for w in widths]) + "".join(line(r) for r in rows)


# --------------------------------------------------------------------------
# report


def _bundle_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(path.glob("*.jsonl"))
    if path.is_file():
        return [path]
    raise UsageError(f"no such bundle: {path}")


def load_bundle(path: str | os.PathLike) -> list[tuple[str, dict]]:
    """``(file stem, record)`` pairs; malformed lines raise ``UsageError`` naming the line."""
    out = []
    for f in _bundle_files(Path(path)):
        for i, line in enumerate(f.read_text().splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise UsageError(f"{f}:{i}: malformed JSON ({e.msg})") from None
            if not isinstance(rec, dict) or "name" not in rec or rec.get("verdict") not in VERDICTS:
                raise UsageError(f"{f}:{i}: record needs a name and a verdict in {VERDICTS}")
            out.append((f.stem, rec))
    return out


def render_table(records: list[tuple[str, dict]]) -> str:
    """One row per certificate name; rows with a violated or inconclusive verdict are flagged ``!!``."""
    groups: dict[tuple[str, str], Counter] = {}
    for suite, r in records:
        groups.setdefault((suite, r["name"]), Counter())[r["verdict"]] += 1
    rows = []
    for (suite, name), c in sorted(groups.items()):
        flag = "!!" if c["violated"] or c["inconclusive"] else ""
        rows.append((flag, suite, name, c["holds"], c["not_applicable"], c["inconclusive"], c["violated"]))
    return _format(("", "suite", "certificate", "holds", "n/a", "inconclusive", "violated"), rows)


def report(path: str | os.PathLike, stream=sys.stdout) -> int:
    recs = load_bundle(path)
    stream.write(render_table(recs))
    return 1 if any(r["verdict"] not in GOOD for _, r in recs) else 0


# --------------------------------------------------------------------------
# single checks


def _emit(records: list[dict], stream) -> int:
    for r in records:
        stream.write(json.dumps(r, sort_keys=True) + "\n")
    return 1 if any(r["verdict"] not in GOOD for r in records) else 0


def _cmd_verify(args, stream) -> int:
    cfg = RunConfig(q_max=min(args.q_max or 20, 100), T_max=min(args.t_max or 30, 100), samples=args.samples)
    try:
        cfg.validate()
    except ValueError as e:
        raise UsageError(str(e)) from None
    suite = _CERT_SUITES.get(args.cert)
    recs = []
    for s in ([suite] if suite else SUITES):
        recs += [r for r in run_suite(s, cfg) if r["name"] == args.cert or r["name"].startswith(args.cert + ".")]
        if recs:
            break
    if not recs:
        raise UsageError(f"no certificate named {args.cert!r}")
    return _emit(recs, stream)


# which suite produces a given certificate name
_CERT_SUITES = {
    "prop:sharp_convexity": "convexity", "eqn:functional_equation": "functional-equation",
    "lem:turan": "powersum", "cor:turan3": "powersum", "lem:large_sieve": "sieve",
    "cor:Ramare1": "sieve", "prop:pre-Sarkozy.c": "sarkozy-constants",
    "prop:ZDE_application": "sarkozy-constants", "prop:ZDE_application.B_inequality": "sarkozy-constants",
    "lem:basic_density.window": "zeros", "mertens": "mertens",
    **{n: "bounds" for n in ("thm:GLFZDE.N", "thm:GLFZDE.Nstar", "cor:GLFZDE.N", "cor:GLFZDE.Nstar",
                             "lem:basic_density", "eqn:ZDE_nonexceptional", "lem:Linnik",
                             "cor:Linnik_lemma", "prop:HB_zero-count")},
}


def _cmd_constants(args, stream) -> int:
    return _emit(run_suite("constants", RunConfig()), stream)


def _cmd_powersum(args, stream) -> int:
    from .powersum import sweep_nonneg, sweep_turan
    bad = 0
    for rep in (sweep_turan(args.count, args.seed), sweep_nonneg(args.count, args.seed)):
        stream.write(rep.to_json() + "\n")
        bad |= not rep.ok
    return int(bad)


def _cmd_sieve(args, stream) -> int:
    from .sieve import integrated_sieve_check, large_sieve_check, random_instances
    if not 1 <= args.Q <= 10:
        raise UsageError("--Q must be in [1, 10]")
    if not 0 < args.T <= 100:
        raise UsageError("--T must be in (0, 100]")
    insts = random_instances(args.count, args.seed, qmax=args.Q, tmax=max(args.T, 1.0))
    recs = []
    for inst in insts:
        recs += [large_sieve_check(inst).to_dict(), integrated_sieve_check(inst).to_dict()]
    return _emit(recs, stream)


def _cmd_sarkozy(args, stream) -> int:
    from .sarkozy import recheck_avoiding, sarkozy_search
    if args.sarkozy_cmd == "constants":
        return _emit(run_suite("sarkozy-constants", RunConfig()), stream)
    try:
        if args.csv:
            stream.write("N,size,density\n")
            bad = False
            for N in range(1, args.N + 1):
                s = sarkozy_search(N, args.method)
                bad |= not recheck_avoiding(s)
                stream.write(f"{N},{s.size},{s.size / N:.6f}\n")
            return int(bad)
        s = sarkozy_search(args.N, args.method)
    except ValueError as e:
        raise UsageError(str(e)) from None
    stream.write(json.dumps(list(s.elements)) + "\n")
    return 0 if recheck_avoiding(s) else 1


# --------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zdecheck", description="Verify explicit zero-density estimates.")
    sub = p.add_subparsers(dest="cmd", required=True)

    r = sub.add_parser("run", help="run verification suites and write a certificate bundle",
                       epilog="Seeds: --seed-<suite> N (e.g. --seed-powersum 7).  Suites: " + ", ".join(SUITES))
    r.add_argument("--config", help="flat key = value file; flags override it")
    r.add_argument("--suites", help="comma-separated suite names; empty runs nothing")
    r.add_argument("--q-max", dest="q_max", type=int)
    r.add_argument("--t-max", dest="T_max", type=float)
    r.add_argument("--precision", dest="precision_bits", type=int)
    r.add_argument("--samples", type=int, help="random samples per sweep")
    r.add_argument("--jobs", type=int, help="worker processes for independent suites")
    r.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./zdecheck-out)")

    rp = sub.add_parser("report", help="render a bundle directory or JSONL file")
    rp.add_argument("bundle")

    v = sub.add_parser("verify", help="evaluate one named certificate family")
    v.add_argument("--cert", required=True)
    v.add_argument("--q-max", dest="q_max", type=int)
    v.add_argument("--t-max", dest="t_max", type=float)
    v.add_argument("--samples", type=int, default=200)

    sub.add_parser("constants", help="print the constants ledger")

    ps = sub.add_parser("powersum", help="power-sum sweeps")
    ps_sub = ps.add_subparsers(dest="ps_cmd", required=True)
    sw = ps_sub.add_parser("sweep")
    sw.add_argument("--count", type=int, default=10_000)
    sw.add_argument("--seed", type=int, default=0)

    sv = sub.add_parser("sieve", help="large-sieve checks")
    sv_sub = sv.add_subparsers(dest="sieve_cmd", required=True)
    ck = sv_sub.add_parser("check")
    ck.add_argument("--Q", type=int, default=5)
    ck.add_argument("--T", type=float, default=20.0)
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--count", type=int, default=100)

    sk = sub.add_parser("sarkozy", help="avoiding-set search and constant chain")
    sk_sub = sk.add_subparsers(dest="sarkozy_cmd", required=True)
    se = sk_sub.add_parser("search")
    se.add_argument("--N", type=int, required=True)
    se.add_argument("--method", choices=("exhaustive", "dp", "greedy"), default="dp")
    se.add_argument("--csv", action="store_true", help="emit N,size,density for 1..N")
    sk_sub.add_parser("constants")
    return p


def main(argv: list[str] | None = None, stream=None) -> int:
    stream = stream or sys.stdout
    p = _parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args, extra = p.parse_known_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        if args.cmd == "run":
            return run(_build_config(args, extra), stream)
        if extra:
            raise UsageError(f"unrecognised arguments: {' '.join(extra)}")
        if args.cmd == "report":
            return report(args.bundle, stream)
        handler = {"verify": _cmd_verify, "constants": _cmd_constants, "powersum": _cmd_powersum,
                   "sieve": _cmd_sieve, "sarkozy": _cmd_sarkozy}[args.cmd]
        return handler(args, stream)
    except UsageError as e:
        sys.stderr.write(f"zdecheck: error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
