"""Command-line front end: ``fitted-hjb {solve,table,mmatrix-audit}``.

Settings come from an optional flat ``key = value`` file, overridden by flags
of the same name (``m_list`` is ``--m-list``). Outputs are CSV files written
with shortest round-trip float formatting plus a plain-text report.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from . import benchmarks as bm
from .errors import InvalidArgument, NonConvergence, NumericFailure, SolverFailure
from .fd_baseline import FiniteDifference1D, FiniteDifference2D
from .assembly_1d import FittedVolume1D
from .assembly_2d import FittedVolume2D
from .sparse_linalg import check_m_matrix

PROBLEMS = ("merton1d", "merton2d", "cash")
METHOD_CHOICES = ("fitted", "fd", "both")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    problem: str = "merton1d"
    method: str = "fitted"
    n1: int | None = None
    n2: int | None = None
    m_list: tuple = (200,)
    theta: float = 1.0
    tol: float = 1e-8
    max_iter: int = 100
    control_samples: int | None = None
    seed: int = 0
    out_dir: str = "."

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigError(f"problem must be one of {', '.join(PROBLEMS)}")
        if self.method not in METHOD_CHOICES:
            raise ConfigError(f"method must be one of {', '.join(METHOD_CHOICES)}")
        if len(self.m_list) == 0 or any(m < 1 for m in self.m_list):
            raise ConfigError("m_list must hold positive step counts")

    @property
    def methods(self) -> tuple:
        return ("fitted", "fd") if self.method == "both" else (self.method,)

    def params(self):
        kw = {} if self.control_samples is None else {"control_samples": self.control_samples}
        if self.problem == "merton1d":
            return bm.Merton1DParams(**kw)
        if self.problem == "merton2d":
            return bm.Merton2DParams(**kw)
        return bm.CashMgmtParams(seed=self.seed, **kw)


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(t) for t in str(text).replace(" ", "").split(",") if t)
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from exc


_CASTS = {
    "problem": str, "method": str, "n1": int, "n2": int, "m_list": _int_list, "theta": float,
    "tol": float, "max_iter": int, "control_samples": int, "seed": int, "out_dir": str,
}


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "m":
            key = "m_list"
        if key not in _CASTS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_config(file_values: dict, overrides: dict) -> RunConfig:
    merged = {**file_values, **{k: v for k, v in overrides.items() if v is not None}}
    kw = {}
    for key, value in merged.items():
        try:
            kw[key] = _CASTS[key](value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return RunConfig(**kw)


def fmt(x) -> str:
    return repr(float(x))


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(r if isinstance(r, str) else fmt(r) for r in row) + "\n")


def value_rows(surface: bm.ValueSurface):
    """Final time level on interior nodes: ``x[,y],value,control...``."""
    n = len(surface.times) - 1
    v = surface.interior(n).ravel()
    alpha = np.asarray(surface.controls[n]) if surface.controls[n] is not None else np.full((v.size, 1), np.nan)
    g = surface.grid
    if surface.is_2d:
        X, Y = g.mesh()
        coords = [X[1:-1, 1:-1].ravel(), Y[1:-1, 1:-1].ravel()]
        header = ["x", "y", "value"]
    else:
        coords = [g.nodes[1:-1]]
        header = ["x", "value"]
    header += ["control"] if alpha.shape[1] == 1 else [f"control{k + 1}" for k in range(alpha.shape[1])]
    rows = [[*(c[k] for c in coords), v[k], *alpha[k]] for k in range(v.size)]
    return header, rows


def _solve_all(cfg: RunConfig, write_values: bool, out: Path, log):
    params = cfg.params()
    table = bm.ErrorTable(cfg.m_list) if cfg.problem != "cash" else None
    for method in cfg.methods:
        for m in cfg.m_list:
            if cfg.problem == "cash":
                sol = bm.solve_cash(params, m, n1=cfg.n1 or 10, n2=cfg.n2 or 10, theta=cfg.theta, tol=cfg.tol,
                                    max_iter=cfg.max_iter, method=method)
                surface, iters, reports, err = sol.surface, sol.iterations, sol.m_matrix, None
            else:
                grid = bm.default_grid(params, cfg.n1, cfg.n2)
                run = bm.run_merton(params, method, m, grid=grid, theta=cfg.theta, tol=cfg.tol, max_iter=cfg.max_iter)
                surface, iters, reports, err = run.surface, run.iterations, run.m_matrix, run.error
                table.add(method, m, err)
            ok = sum(bool(r.verdict) for r in reports)
            log.append(
                f"{cfg.problem} {method} m={m}: inner iterations min/mean/max = "
                f"{min(iters)}/{np.mean(iters):.3f}/{max(iters)}; step matrices M-matrix {ok}/{len(reports)}"
                + (f"; L2 error = {err:.6e}" if err is not None else "")
            )
            if write_values:
                header, rows = value_rows(surface)
                write_csv(out / f"values_{cfg.problem}_{method}_m{m}.csv", header, rows)
    if table is not None:
        write_csv(out / f"errors_{cfg.problem}.csv", ["method", "m", "error"],
                  [[meth, str(m), e] for meth, m, e in table.records()])
    return table


def _audit(cfg: RunConfig, log):
    params = cfg.params()
    grid = bm.default_grid(params, cfg.n1, cfg.n2)
    if cfg.problem == "cash":
        spec = bm.build_problem(params, demand=0.0)
    else:
        spec = bm.build_problem(params)
    one_d = cfg.problem == "merton1d"
    classes = {"fitted": FittedVolume1D if one_d else FittedVolume2D, "fd": FiniteDifference1D if one_d else FiniteDifference2D}
    dt = spec.horizon / cfg.m_list[0]
    for method in cfg.methods:
        disc = classes[method](spec, grid)
        n_sys = n_step = 0
        for u in spec.controls.values:
            sys_ = disc(u, 0.0)
            n_sys += bool(check_m_matrix(sys_.E).verdict)
            step = check_m_matrix(sp.identity(sys_.size, format="csr") + cfg.theta * dt * sys_.E)
            n_step += bool(step.verdict)
        K = len(spec.controls)
        log.append(f"{cfg.problem} {method}: E is an M-matrix for {n_sys}/{K} uniform controls; "
                   f"I + theta*dt*E for {n_step}/{K} (dt = {dt!r})")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fitted-hjb", description="Fitted finite-volume HJB solver runs.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("solve", "table", "mmatrix-audit"):
        s = sub.add_parser(name)
        s.add_argument("--config", type=Path)
        s.add_argument("--problem")
        s.add_argument("--method")
        s.add_argument("--n1")
        s.add_argument("--n2")
        s.add_argument("--m-list", dest="m_list")
        s.add_argument("--theta")
        s.add_argument("--tol")
        s.add_argument("--max-iter", dest="max_iter")
        s.add_argument("--control-samples", dest="control_samples")
        s.add_argument("--seed")
        s.add_argument("--out-dir", dest="out_dir")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: getattr(args, k) for k in _CASTS}
    try:
        file_values = parse_config_text(args.config.read_text()) if args.config else {}
        if args.command == "table":
            file_values.setdefault("m_list", "200,150,100,50")
            file_values.setdefault("method", "both")
        cfg = build_config(file_values, overrides)
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
    except (ConfigError, InvalidArgument, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    log = [f"command: {args.command}", f"config: {cfg}"]
    try:
        if args.command == "mmatrix-audit":
            _audit(cfg, log)
        else:
            if args.command == "table" and cfg.problem == "cash":
                raise InvalidArgument("no closed-form solution for the cash problem; use solve")
            table = _solve_all(cfg, args.command == "solve", out, log)
            if table is not None:
                log.append("method,m,error")
                log.extend(f"{meth},{m},{fmt(e)}" for meth, m, e in table.records())
    except NonConvergence as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return 3
    except (InvalidArgument, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericFailure, SolverFailure) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    (out / f"report_{args.command}_{cfg.problem}.txt").write_text("\n".join(log) + "\n")
    print("\n".join(log))
    return 0


if __name__ == "__main__":
    sys.exit(main())
