"""Command-line scenario runner.

Subcommands::

    simulate <config>        dry-friction flow, flow.csv, snapshots, summary
    reachable <config>       support-function scan, support_scan.csv
    spectral <config>        truncated secular roots, secular.csv
    verify <suite> [--seed]  seeded acceptance checks, verify.json

Exit codes: 0 success, 1 failed verification, 2 bad arguments or config,
3 invariant violated during a run.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import verify as verify_mod
from .duals import DualVector
from .energy import contraction_series, write_energy_csv
from .friction import decay_report, field_at, flow_trace, solve_track, write_flow_csv
from .pwlin import TWO_PI, PiecewiseLinear
from .reach import PROBLEMS, check_problem, field_rho, support_scan, write_support_scan
from .spectral import secular_table, write_secular_csv

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_INVARIANT = 0, 1, 2, 3

#: Samples used to turn a cosine series into a piecewise-linear field.
COSINE_SAMPLES = 2048
INVARIANT_TOL = 1e-9


class ConfigError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    def __init__(self, name: str, detail: str):
        super().__init__(f"invariant violated: {name}: {detail}")
        self.name = name


@dataclass
class ScenarioConfig:
    problem: str
    horizon: float
    initial: PiecewiseLinear
    seed: int = 0
    outputs: Path = Path("out")
    stride: float = 0.5
    compare: PiecewiseLinear | None = None
    snapshots: list[float] = field(default_factory=list)

    def __post_init__(self):
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise ConfigError("horizon must be a positive number")
        if not (math.isfinite(self.stride) and self.stride > 0):
            raise ConfigError("stride must be a positive number")


# -- parsing ----------------------------------------------------------------

def _number(text: str, what: str) -> float:
    try:
        return float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{what}: not a number: {text!r}") from None


def _numbers(text: str, what: str) -> list[float]:
    return [_number(tok, what) for tok in text.replace(";", ",").split(",") if tok.strip()]


def _read_config(path) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return cp


def _field_from_section(sec, base: Path) -> PiecewiseLinear:
    sources = [k for k in ("file", "breakpoints", "cosine") if sec.get(k, "").strip()]
    if len(sources) != 1:
        raise ConfigError(f"[{sec.name}] needs exactly one of file, breakpoints, cosine "
                          f"(found {sources or 'none'})")
    src = sources[0]
    try:
        if src == "file":
            path = Path(sec["file"].strip())
            path = path if path.is_absolute() else base / path
            return PiecewiseLinear.from_text(path.read_text(encoding="utf-8"))
        if src == "breakpoints":
            rows = [[_number(v, "breakpoints") for v in item.split(":")]
                    for item in sec["breakpoints"].replace(";", ",").split(",") if item.strip()]
            if not rows or len({len(r) for r in rows}) != 1 or len(rows[0]) not in (2, 3):
                raise ConfigError("breakpoints are 'x:value' or 'x:value:slope' items")
            arr = np.array(rows)
            if arr.shape[1] == 2:
                if len(arr) == 1:
                    return PiecewiseLinear.constant(arr[0, 1])
                return PiecewiseLinear.from_points(arr[:, 0], arr[:, 1])
            return PiecewiseLinear(arr[:, 0], arr[:, 1], arr[:, 2])
        coeffs = np.array(_numbers(sec["cosine"], "cosine"))
        x = np.linspace(0.0, TWO_PI, COSINE_SAMPLES, endpoint=False)
        y = np.cos(np.multiply.outer(x, np.arange(len(coeffs)))) @ coeffs
        return PiecewiseLinear.from_points(x, y)
    except ConfigError:
        raise
    except (OSError, ValueError) as exc:
        raise ConfigError(f"[{sec.name}] {src}: {exc}") from None


def load_scenario(path, out: str | None = None, stride: float | None = None,
                  snapshots=()) -> ScenarioConfig:
    cp = _read_config(path)
    base = Path(path).resolve().parent
    if not cp.has_section("scenario"):
        raise ConfigError("missing [scenario] section")
    sc = cp["scenario"]
    if not cp.has_section("initial"):
        raise ConfigError("missing [initial] section")
    try:
        problem = check_problem(sc.get("problem", "stop-moving"), allow_complete=False)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if "horizon" not in sc:
        raise ConfigError("[scenario] horizon is required")
    snaps = _numbers(sc.get("snapshots", ""), "snapshots") + list(snapshots)
    seed = sc.get("seed", "0").strip()
    if not seed.lstrip("-").isdigit():
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    return ScenarioConfig(
        problem=problem,
        horizon=_number(sc["horizon"], "horizon"),
        initial=_field_from_section(cp["initial"], base),
        seed=int(seed),
        outputs=Path(out if out is not None else sc.get("outputs", "out")),
        stride=stride if stride is not None else _number(sc.get("stride", "0.5"), "stride"),
        compare=_field_from_section(cp["compare"], base) if cp.has_section("compare") else None,
        snapshots=snaps,
    )


def _parse_snapshot(text: str) -> float:
    key, _, val = text.partition("=")
    if key.strip() != "t" or not val:
        raise ConfigError(f"--snapshot expects t=<value>, got {text!r}")
    t = _number(val, "--snapshot")
    if t < 0:
        raise ConfigError("snapshot times must be nonnegative")
    return t


# -- runners ----------------------------------------------------------------

def _summary_text(pairs: dict) -> str:
    return "".join(f"{k} = {v}\n" for k, v in pairs.items())


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def run_simulate(cfg: ScenarioConfig) -> dict:
    """Run the flow, write its files and return the summary fields."""
    for t in cfg.snapshots:
        if t > cfg.horizon:
            raise ConfigError(f"snapshot t={t} lies beyond the horizon")
    cfg.outputs.mkdir(parents=True, exist_ok=True)
    rows = flow_trace(cfg.initial, cfg.horizon, cfg.stride, cfg.problem)
    track = solve_track(cfg.initial, cfg.horizon + 1e-9)
    res = track.residuals()
    if res["identity"] > INVARIANT_TOL:
        raise InvariantViolation("resolvent identity", f"residual {res['identity']:.3e}")
    if res["v_bound"] > INVARIANT_TOL:
        raise InvariantViolation("control bound |u| <= 1", f"excess {res['v_bound']:.3e}")
    if res["sign"] > INVARIANT_TOL:
        raise InvariantViolation("u = -sign(phi)", f"residual {res['sign']:.3e}")
    rhos = [r["rho"] for r in rows]
    # the damping gauge may rise inside a period; it only contracts period to period
    mono = rhos if cfg.problem == "stop-moving" else [
        r for _, r in decay_report(cfg.initial, cfg.horizon, cfg.problem).trace]
    up = max(np.diff(mono), default=0.0)
    if up > INVARIANT_TOL * max(1.0, rhos[0]):
        raise InvariantViolation("rho nonincreasing", f"increase {up:.3e}")
    write_flow_csv(rows, cfg.outputs / "flow.csv")
    for t in cfg.snapshots:
        g = cfg.initial if t == 0 else field_at(track, t)
        (cfg.outputs / f"snapshot_t={_fmt(t)}.pwl").write_text(g.to_text(), encoding="utf-8")
    if cfg.compare is not None:
        times = [r["t"] for r in rows]
        if len(times) > 1 and times[-1] == times[-2]:
            times.pop()
        rep = contraction_series(cfg.initial, cfg.compare, times)
        write_energy_csv(rep, cfg.outputs / "energy.csv")
    rhoT = field_rho(field_at(track, cfg.horizon), cfg.problem)
    summary = {"problem": cfg.problem, "horizon": _fmt(cfg.horizon), "seed": cfg.seed,
               "rho_0": _fmt(rhos[0]), "rho_T": _fmt(rhoT),
               "rate": _fmt((rhos[0] - rhoT) / cfg.horizon)}
    (cfg.outputs / "summary.txt").write_text(_summary_text(summary), encoding="utf-8")
    return summary


def _dual_from_section(sec, base: Path) -> DualVector:
    if sec.get("file", "").strip():
        path = Path(sec["file"].strip())
        path = path if path.is_absolute() else base / path
        try:
            return DualVector.from_text(path.read_text(encoding="utf-8"))
        except (OSError, ValueError, IndexError) as exc:
            raise ConfigError(f"[dual] file: {exc}") from None
    phi = _numbers(sec.get("phi", ""), "phi")
    psi = _numbers(sec.get("psi", ""), "psi")
    if not phi and not psi:
        raise ConfigError("[dual] needs phi/psi coefficient lists or a file")
    return DualVector(phi, psi)


def run_reachable(path, out: str | None = None, stride: float | None = None) -> list[dict]:
    cp = _read_config(path)
    base = Path(path).resolve().parent
    if not cp.has_section("dual"):
        raise ConfigError("missing [dual] section")
    sc = cp["scenario"] if cp.has_section("scenario") else {}
    xi = _dual_from_section(cp["dual"], base)
    if sc.get("problem") and sc["problem"].strip().lower() not in PROBLEMS:
        raise ConfigError(f"unknown problem {sc['problem']!r}")
    if sc.get("horizons", "").strip():
        horizons = _numbers(sc["horizons"], "horizons")
    else:
        if "horizon" not in sc:
            raise ConfigError("[scenario] needs horizons or horizon")
        T = _number(sc["horizon"], "horizon")
        dt = stride if stride is not None else _number(sc.get("stride", str(TWO_PI)), "stride")
        if not (T > 0 and dt > 0):
            raise ConfigError("horizon and stride must be positive")
        n = int(math.floor(T / dt + 1e-9))
        horizons = [dt * (i + 1) for i in range(n)]
    if not horizons or min(horizons) <= 0:
        raise ConfigError("horizons must be positive")
    outdir = Path(out if out is not None else sc.get("outputs", "out"))
    outdir.mkdir(parents=True, exist_ok=True)
    rows = support_scan(xi, horizons)
    write_support_scan(rows, outdir / "support_scan.csv")
    return rows


def run_spectral(path, out: str | None = None) -> list[dict]:
    cp = _read_config(path)
    if not cp.has_section("spectral"):
        raise ConfigError("missing [spectral] section")
    sec = cp["spectral"]
    Ns = _numbers(sec.get("cutoffs", "10, 20, 40, 80"), "cutoffs")
    if any(N < 1 or N != int(N) for N in Ns):
        raise ConfigError("cutoffs must be positive integers")
    ks = None
    if sec.get("modes", "").strip():
        ks = [int(k) for k in _numbers(sec["modes"], "modes")]
    outdir = Path(out if out is not None else sec.get("outputs", "out"))
    outdir.mkdir(parents=True, exist_ok=True)
    rows = secular_table([int(N) for N in Ns], ks)
    write_secular_csv(rows, outdir / "secular.csv")
    return rows


def run_verify(suite: str, seed: int, out: str | None = None) -> tuple[bool, str]:
    checks = verify_mod.run_suite(suite, seed)
    text = verify_mod.report(suite, seed, checks)
    for c in checks:
        print(c.line(), file=sys.stderr)
    if out is not None:
        Path(out).mkdir(parents=True, exist_ok=True)
        (Path(out) / "verify.json").write_text(text, encoding="utf-8")
    return all(c.passed for c in checks), text


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stringdamp", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", help="run the dry-friction flow")
    sim.add_argument("config")
    sim.add_argument("--out")
    sim.add_argument("--stride", type=float)
    sim.add_argument("--snapshot", action="append", default=[], metavar="t=<v>")
    rea = sub.add_parser("reachable", help="support-function scans")
    rea.add_argument("config")
    rea.add_argument("--out")
    rea.add_argument("--stride", type=float)
    spe = sub.add_parser("spectral", help="truncated secular roots")
    spe.add_argument("config")
    spe.add_argument("--out")
    ver = sub.add_parser("verify", help="seeded acceptance checks")
    ver.add_argument("suite", choices=sorted(verify_mod.SUITES))
    ver.add_argument("--seed", type=int, default=verify_mod.DEFAULT_SEED)
    ver.add_argument("--out")
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.command == "simulate":
            snaps = [_parse_snapshot(s) for s in args.snapshot]
            summary = run_simulate(load_scenario(args.config, args.out, args.stride, snaps))
            sys.stdout.write(_summary_text(summary))
        elif args.command == "reachable":
            rows = run_reachable(args.config, args.out, args.stride)
            print(f"wrote {len(rows)} rows to support_scan.csv")
        elif args.command == "spectral":
            rows = run_spectral(args.config, args.out)
            print(f"wrote {len(rows)} rows to secular.csv")
        else:
            ok, text = run_verify(args.suite, args.seed, args.out)
            sys.stdout.write(text)
            return EXIT_OK if ok else EXIT_VERIFY
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantViolation as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
