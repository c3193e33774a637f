"""Command-line entry point: ``qsample <command> [options]``.

Every command accepts ``--config FILE`` (JSON object keyed by option name,
dashes or underscores), ``--seed`` and ``--output``. Explicit flags override
config values, and the effective configuration is echoed into each report.
Exit status: 0 when every certified bound holds, 1 on a failed bound, 2 on
invalid input.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .anneal import AnnealConfig, run_anneal
from .cost import CSV_FIELDS, CostModel, benchmark_sweep, write_csv
from .errors import CertificationError, QSampleError
from .filters import synthesize_filter
from .fpaa import make_schedule
from .gadget import build_gadget, build_oracle_unitary, conjugated_error_norm, gadget_error_norm
from .gibbs import DEFAULT_BETAS, GibbsModel, gibbs_qsample_run, verify_schedule
from .markov import IsingLadder, MarkovChain, build_glauber_chain, random_reversible_chain
from .suites import SUITES
from .walk import walk_spectrum

DEFAULT_SEED = 20240617
DEFAULT_EPS_GRID = "1e-1,1e-2,1e-3,1e-4,1e-5,1e-6"

# Built-in defaults per command; applied beneath config-file values and flags.
DEFAULTS = {
    "common": {"seed": DEFAULT_SEED, "output": None},
    "chain": {"ladder": "2x2", "beta": 0.3, "lazy": True, "file": None, "random_n": None},
    "walk": {"ladder": "2x2", "beta": 0.3, "lazy": True, "file": None, "random_n": None, "phases": False},
    "filter": {"delta": math.pi / 3, "eps": "1e-1,1e-2,1e-3"},
    "gadget-check": {"ladder": "2x2", "beta": 0.3, "lazy": True, "file": None, "random_n": None,
                     "phi": math.pi / 3, "eps_w": 1e-2},
    "fpaa-angles": {"p_lower": 0.25, "eps_fp": 0.1},
    "anneal": {"ladder": "2x2", "betas": ",".join(map(str, DEFAULT_BETAS)), "eps": 0.1, "mode": "compiled",
               "lazy": True, "p_lower": None},
    "benchmark": {"ladder": "2x3", "betas": ",".join(map(str, DEFAULT_BETAS)), "eps_grid": DEFAULT_EPS_GRID,
                  "full": False, "format": "csv", "c_query": 1.0, "c_ancilla": 1.0,
                  "conjugation_overhead": 2, "lazy": True},
    "gibbs": {"model": None, "ladder": "2x2", "betas": ",".join(map(str, DEFAULT_BETAS)), "eps": None,
              "mode": "compiled", "lazy": True},
    "verify": {"suite": None, "trials": 20, "p_grid": 50},
}


class UsageError(Exception):
    pass


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


# Chain selection shared by chain / walk / gadget-check.

def _add_chain_opts(p):
    p.add_argument("--ladder", help="ladder shape RxC, e.g. 2x3")
    p.add_argument("--beta", type=float, help="inverse temperature")
    p.add_argument("--lazy", action=argparse.BooleanOptionalAction, help="use (I + P)/2")
    p.add_argument("--file", help="chain JSON file {n, P, pi?}")
    p.add_argument("--random-n", type=int, help="seeded random reversible chain of this size")


def _load_chain(cfg) -> MarkovChain:
    if cfg["file"]:
        text = Path(cfg["file"]).read_text()
        return MarkovChain.from_json(text)
    if cfg["random_n"]:
        return random_reversible_chain(int(cfg["random_n"]), np.random.default_rng(cfg["seed"]))
    return build_glauber_chain(IsingLadder.parse(cfg["ladder"]), float(cfg["beta"]), lazy=bool(cfg["lazy"]))


def _ladder_chains(cfg) -> list[MarkovChain]:
    ladder = IsingLadder.parse(cfg["ladder"])
    return [build_glauber_chain(ladder, b, lazy=bool(cfg["lazy"])) for b in _floats(cfg["betas"])]


# Commands. Each returns (payload, ok) where payload is str or a JSON-able dict.

def cmd_chain(cfg):
    chain = _load_chain(cfg)
    return {
        "chain": chain.to_dict(),
        "pi": chain.pi,
        "lambda2": chain.lambda2,
        "delta": chain.delta,
        "reversibility_residual": chain.balance_residual(),
    }, True


def cmd_walk(cfg):
    chain = _load_chain(cfg)
    spec = walk_spectrum(chain)
    out = {
        "n": chain.n,
        "delta": chain.delta,
        "phase_gap": spec.phase_gap,
        "busy_rank": spec.rank,
        "complement_symmetric": spec.n_sym_complement,
        "complement_antisymmetric": spec.n_anti_complement,
        "invariance_residual": spec.invariance_residual,
    }
    if cfg["phases"]:
        out["busy_phases"] = np.sort(spec.busy_phases)
    return out, True


def cmd_filter(cfg):
    rows = [json.loads(synthesize_filter(float(cfg["delta"]), e).to_json()) for e in _floats(cfg["eps"])]
    return {"filters": rows}, all(r["achieved_eps"] <= r["eps_target"] for r in rows)


def cmd_gadget_check(cfg):
    chain = _load_chain(cfg)
    spec = walk_spectrum(chain)
    eps_w, phi = float(cfg["eps_w"]), float(cfg["phi"])
    filt = synthesize_filter(spec.phase_gap, eps_w)
    g = build_gadget(spec, filt, phi)
    err = gadget_error_norm(g)
    err_conj = conjugated_error_norm(g, build_oracle_unitary(chain))
    tight = abs(np.exp(1j * phi) - 1) * eps_w
    bound = min(2 * eps_w, tight)
    return {
        "n": chain.n,
        "phase_gap": spec.phase_gap,
        "degree": filt.d,
        "queries": g.queries,
        "error_norm": err,
        "conjugated_error_norm": err_conj,
        "bound_2eps": 2 * eps_w,
        "bound_phase": tight,
        "ratio": err / bound if bound > 0 else 0.0,
    }, bool(max(err, err_conj) <= bound + 1e-9)


def cmd_fpaa_angles(cfg):
    return make_schedule(float(cfg["p_lower"]), float(cfg["eps_fp"])).to_dict(), True


def cmd_anneal(cfg):
    chains = _ladder_chains(cfg)
    over = None if cfg["p_lower"] is None else _floats(cfg["p_lower"])
    eps = float(cfg["eps"])
    report = run_anneal(AnnealConfig(chains, eps, over, mode=cfg["mode"]))
    return report.to_dict(), bool(report.final_d_tr <= eps)


def cmd_benchmark(cfg):
    model = CostModel(float(cfg["c_query"]), float(cfg["c_ancilla"]), int(cfg["conjugation_overhead"]))
    rows = benchmark_sweep(_ladder_chains(cfg), _floats(cfg["eps_grid"]), fast=not cfg["full"], model=model)
    if cfg["format"] == "json":
        return {"fields": list(CSV_FIELDS), "rows": rows}, True
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue(), True


def cmd_gibbs(cfg):
    if cfg["model"]:
        model = GibbsModel.from_json(Path(cfg["model"]).read_text())
    else:
        model = GibbsModel(IsingLadder.parse(cfg["ladder"]), tuple(_floats(cfg["betas"])))
    # Flag or config eps wins over the model file's, then a 0.1 default.
    if cfg["eps"] is None:
        cfg["eps"] = model.eps if model.eps is not None else 0.1
    eps = float(cfg["eps"])
    check = verify_schedule(model)
    out = {"schedule": check}
    if not check["pass"]:
        return out, False
    report = gibbs_qsample_run(model, eps, mode=cfg["mode"], lazy=bool(cfg["lazy"]))
    out["report"] = report.to_dict()
    ok = report.final_d_tr <= eps and report.measured_tvd <= report.final_d_tr + 1e-12
    return out, bool(ok)


def cmd_verify(cfg):
    names = list(SUITES) if not cfg["suite"] else [s.strip() for s in str(cfg["suite"]).split(",")]
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    rng = np.random.default_rng(int(cfg["seed"]))
    results = {}
    ok = True
    for name in names:
        kwargs = {}
        if name in ("prop1", "cor1", "oracle"):
            kwargs["trials"] = int(cfg["trials"])
        if name == "fpaa":
            kwargs["p_grid"] = int(cfg["p_grid"])
        checks = SUITES[name](rng, **kwargs)
        results[name] = {
            "passed": all(c.passed for c in checks),
            "max_ratio": max((c.ratio for c in checks), default=0.0),
            "checks": [c.to_dict() for c in checks],
        }
        ok = ok and results[name]["passed"]
    return {"suites": results, "passed": ok}, ok


COMMANDS = {
    "chain": cmd_chain,
    "walk": cmd_walk,
    "filter": cmd_filter,
    "gadget-check": cmd_gadget_check,
    "fpaa-angles": cmd_fpaa_angles,
    "anneal": cmd_anneal,
    "benchmark": cmd_benchmark,
    "gibbs": cmd_gibbs,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsample", description="QSample preparation by compiled selective phases.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, help=f"RNG seed (default {DEFAULT_SEED})")
    common.add_argument("--config", help="JSON config file; flags take precedence")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_, argument_default=argparse.SUPPRESS)

    p = add("chain", "build a chain and report its spectral summary")
    _add_chain_opts(p)
    p = add("walk", "walk spectrum summary")
    _add_chain_opts(p)
    p.add_argument("--phases", action="store_true", help="include the busy eigenphases")
    p = add("filter", "synthesize gap filters")
    p.add_argument("--delta", type=float, help="phase gap")
    p.add_argument("--eps", help="comma-separated attenuation targets")
    p = add("gadget-check", "measure a gadget's error against its bounds")
    _add_chain_opts(p)
    p.add_argument("--phi", type=float)
    p.add_argument("--eps-w", type=float)
    p = add("fpaa-angles", "fixed-point schedule")
    p.add_argument("--p-lower", type=float)
    p.add_argument("--eps-fp", type=float)
    p = add("anneal", "end-to-end QSample preparation on an Ising ladder")
    p.add_argument("--ladder")
    p.add_argument("--betas", help="comma-separated inverse temperatures")
    p.add_argument("--eps", type=float)
    p.add_argument("--mode", choices=("compiled", "exact"))
    p.add_argument("--lazy", action=argparse.BooleanOptionalAction)
    p.add_argument("--p-lower", help="comma-separated overlap lower bounds, one per stage")
    p = add("benchmark", "cost sweep over eps (CSV)")
    p.add_argument("--ladder")
    p.add_argument("--betas")
    p.add_argument("--eps-grid")
    p.add_argument("--full", action=argparse.BooleanOptionalAction, help="simulate instead of estimating")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--c-query", type=float)
    p.add_argument("--c-ancilla", type=float)
    p.add_argument("--conjugation-overhead", type=int)
    p.add_argument("--lazy", action=argparse.BooleanOptionalAction)
    p = add("gibbs", "Gibbs QSample: schedule check and run")
    p.add_argument("--model", help="model JSON {rows, cols, betas, eps}")
    p.add_argument("--ladder")
    p.add_argument("--betas")
    p.add_argument("--eps", type=float)
    p.add_argument("--mode", choices=("compiled", "exact"))
    p.add_argument("--lazy", action=argparse.BooleanOptionalAction)
    p = add("verify", "run the invariant suites")
    p.add_argument("--suite", help=f"comma-separated subset of {','.join(SUITES)}")
    p.add_argument("--trials", type=int)
    p.add_argument("--p-grid", type=int)
    return parser


def _load_config(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path}: config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def resolve_config(command: str, flags: dict) -> dict:
    cfg = {k.replace("-", "_"): v for k, v in {**DEFAULTS["common"], **DEFAULTS[command]}.items()}
    if "config" in flags:
        file_cfg = _load_config(flags["config"])
        unknown = set(file_cfg) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys for {command}: {sorted(unknown)}")
        cfg.update(file_cfg)
    cfg.update({k: v for k, v in flags.items() if k not in ("config", "command")})
    return cfg


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    command = args["command"]
    try:
        cfg = resolve_config(command, args)
        payload, ok = COMMANDS[command](cfg)
    except CertificationError as exc:
        print(f"qsample {command}: certification failed: {exc}", file=sys.stderr)
        return 1
    except (QSampleError, UsageError, ValueError, KeyError, OSError) as exc:
        print(f"qsample {command}: {exc}", file=sys.stderr)
        return 2
    if isinstance(payload, str):
        text = payload
    else:
        text = _dump({"command": command, "config": cfg, "ok": ok, **payload})
    if cfg["output"]:
        Path(cfg["output"]).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
