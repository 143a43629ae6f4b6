"""Command-line interface.

Every subcommand builds a :class:`JobConfig` and hands it to :func:`run`,
which writes CSV or JSON rows to stdout and diagnostics to stderr. Exit
codes: 0 success, 1 failed acceptance checks (``verify``), 2 parameter
errors, 3 numerical failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from . import laplace, levy, mlfun, spectral, verify, volterra
from .errors import InvalidParam, PrabhakarError

COMMANDS = ("ml", "prabhakar", "levy", "solve", "spectral", "jonscher", "fig1", "verify")
SOLVE_METHODS = ("series", "closed", "integral", "laplace", "eq1")
EXIT_OK, EXIT_CHECKS, EXIT_PARAM, EXIT_NUMERIC = 0, 1, 2, 3

# per command: (required keys, defaults, grid variable or None)
_SCHEMA: dict[str, tuple[tuple, dict, str | None]] = {
    "ml": (("alpha",), {"mu": 1.0, "nu": 1.0, "tol": mlfun.DEFAULT_TOL, "route": "auto"}, "x"),
    "prabhakar": (("alpha", "a"), {"mu": 1.0, "nu": 1.0, "tol": mlfun.DEFAULT_TOL}, "t"),
    "levy": (("alpha", "u"), {"lam": 0.0, "route": "auto"}, "t"),
    "solve": (("alpha", "nu", "mu", "B"), {"a": 0.0, "f0": 1.0, "method": "laplace",
                                           "max_terms": 200, "tol": volterra.EQ1_TOL,
                                           "n_nodes": 32}, "t"),
    "spectral": (("alpha", "nu", "mu"), {"a": 0.0, "B": None, "tau": 1.0}, "omega"),
    "jonscher": (("alpha", "nu", "mu"), {"a": 0.0, "B": None, "tau": 1.0, "per_decade": 20,
                                         "decades": 4.0}, None),
    "fig1": ((), {"alpha": 0.75, "a": 3.0, "f0": 1.0}, "t"),
    "verify": ((), {"only": None}, None),
}
DEFAULT_WORKERS = 4
for _req, _defaults, _var in _SCHEMA.values():
    if _var is not None:
        _defaults["workers"] = DEFAULT_WORKERS


@dataclass
class GridSpec:
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 2:
            raise InvalidParam("grid count must be an integer >= 2")
        if self.spacing not in ("linear", "log"):
            raise InvalidParam("grid spacing must be 'linear' or 'log'")
        if self.spacing == "log" and not (self.start > 0 and self.stop > 0):
            raise InvalidParam("a log grid needs positive end points")

    def values(self) -> np.ndarray:
        n = int(self.count)
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, n)
        return np.linspace(self.start, self.stop, n)


@dataclass
class JobConfig:
    """One CLI job: command, flat parameters, output format and optional grid."""

    command: str
    parameters: dict = field(default_factory=dict)
    output: str = "csv"
    grid: GridSpec | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidParam(f"unknown command {self.command!r}")
        if self.output not in ("csv", "json"):
            raise InvalidParam("output must be 'csv' or 'json'")
        if isinstance(self.grid, dict):
            self.grid = GridSpec(**self.grid)
        required, defaults, var = _SCHEMA[self.command]
        missing = [k for k in required if self.parameters.get(k) is None]
        if missing:
            raise InvalidParam(f"{self.command}: missing parameter(s) {', '.join(missing)}")
        merged = dict(defaults)
        merged.update({k: v for k, v in self.parameters.items() if v is not None})
        self.parameters = merged

    def points(self) -> np.ndarray | None:
        """Values of the grid variable: the grid, or the single given value."""
        var = _SCHEMA[self.command][2]
        if var is None:
            return None
        if self.grid is not None:
            return self.grid.values()
        if var in self.parameters:
            return np.atleast_1d(np.asarray(self.parameters[var], dtype=float))
        if self.command == "fig1":
            return np.linspace(0.0, 10.0, 201)
        if self.command == "spectral":
            return spectral.omega_grid(float(self.parameters["tau"]))
        raise InvalidParam(f"{self.command}: give --{var} or a grid")


def _map(fn: Callable, xs, workers) -> list:
    """Evaluate a pure function over grid points concurrently, keeping grid order."""
    xs = list(xs)
    workers = int(workers)
    if workers < 1:
        raise InvalidParam("workers must be >= 1")
    if workers == 1 or len(xs) < 2:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(max_workers=min(workers, len(xs))) as pool:
        return list(pool.map(fn, xs))


def _kernel(p: dict) -> laplace.PrabhakarKernel:
    return laplace.PrabhakarKernel(float(p["alpha"]), float(p["nu"]), float(p["mu"]), float(p["a"]))


def _coupling(p: dict, kernel: laplace.PrabhakarKernel) -> float:
    return float(p["B"]) if p.get("B") is not None else float(p["tau"]) ** (-kernel.mu)


def _job_ml(cfg: JobConfig):
    p = cfg.parameters
    al, mu, nu, tol = float(p["alpha"]), float(p["mu"]), float(p["nu"]), float(p["tol"])
    route = p["route"]
    if route == "auto":
        fn = lambda x: mlfun.mittag_leffler(al, mu, nu, x, tol)
    elif route == "series":
        fn = lambda x: mlfun.ml3(mlfun.MLParams(al, mu, nu), x, tol)
    elif route == "hypergeometric":
        fn = lambda x: mlfun.ml_hypergeom(al, mu - 1.0, nu, x, tol)
    else:
        raise InvalidParam(f"unknown route {route!r}")
    xs = cfg.points()
    return ["x", "value"], [[x, float(v)] for x, v in zip(xs, _map(fn, xs, p["workers"]))]


def _job_prabhakar(cfg: JobConfig):
    p = cfg.parameters
    par = mlfun.MLParams(float(p["alpha"]), float(p["mu"]), float(p["nu"]))
    a, tol = float(p["a"]), float(p["tol"])
    ts = cfg.points()
    vals = _map(lambda t: mlfun.prabhakar(par, a, t, tol), ts, p["workers"])
    return ["t", "value"], [[t, float(v)] for t, v in zip(ts, vals)]


def _job_levy(cfg: JobConfig):
    p = cfg.parameters
    al, u, lam = float(p["alpha"]), float(p["u"]), float(p["lam"])
    ts = cfg.points()
    vals = _map(lambda t: levy.h_function(levy.LevyQuery(al, u, t, lam), p["route"]), ts, p["workers"])
    return ["t", "value"], [[t, float(v)] for t, v in zip(ts, vals)]


def _job_solve(cfg: JobConfig):
    p = cfg.parameters
    k = _kernel(p)
    prob = volterra.VolterraProblem(k, float(p["B"]), float(p["f0"]))
    t = cfg.points()
    method = p["method"]
    if method not in SOLVE_METHODS:
        raise InvalidParam(f"unknown method {method!r}; choose from {', '.join(SOLVE_METHODS)}")
    if method == "eq1":
        curve = volterra.solve_integral_eq1(prob, t, tol=float(p["tol"]))
        return ["t", "f", "route"], [[x, float(v), "integral_eq1"] for x, v in zip(t, curve.values)]

    def point(x):
        if method == "series":
            return (prob.f0, "series_f1") if x == 0 else volterra.solve_series(prob, x, int(p["max_terms"]))
        if method == "closed":
            return volterra.solve_closed_cc(prob, x), "closed_cc"
        if method == "integral":
            return (prob.f0 if x == 0 else volterra.solve_integral_rep(prob, x)), "integral_rep"
        v = prob.f0 if x == 0 else volterra.solve_laplace_numeric(prob, x, n_nodes=int(p["n_nodes"]))
        return v, "laplace_numeric"

    rows = [[x, float(v), r] for x, (v, r) in zip(t, _map(point, t, p["workers"]))]
    return ["t", "f", "route"], rows


def _job_spectral(cfg: JobConfig):
    p = cfg.parameters
    k = _kernel(p)
    vals = np.atleast_1d(spectral.spectral_function(k, _coupling(p, k), cfg.points()))
    return (["omega", "re", "im", "abs"],
            [[w, float(v.real), float(v.imag), float(abs(v))] for w, v in zip(cfg.points(), vals)])


def _job_jonscher(cfg: JobConfig):
    p = cfg.parameters
    k = _kernel(p)
    tau = float(p["tau"])
    w = spectral.omega_grid(tau, int(p["per_decade"]), float(p["decades"]))
    fit = spectral.jonscher_exponents(spectral.spectrum(k, _coupling(p, k), w), tau)
    exp = spectral.expected_jonscher(k)
    return (["m", "one_minus_n", "expected_m", "expected_one_minus_n"],
            [[fit.m, fit.one_minus_n, exp.m, exp.one_minus_n]])


def _job_fig1(cfg: JobConfig):
    p = cfg.parameters
    t = cfg.points()
    curves = volterra.cole_cole_family(volterra.FIG_TAUS, t, float(p["alpha"]), float(p["a"]),
                                       float(p["f0"]))
    header = ["t"] + [f"f_tau={tau:g}" for tau in curves]
    cols = [c.values for c in curves.values()]
    return header, [[x] + [float(c[i]) for c in cols] for i, x in enumerate(t)]


def _job_verify(cfg: JobConfig, err):
    only = cfg.parameters.get("only")
    results = verify.run_all(list(only) if only else None)
    for r in results:
        print(r.line(), file=err)
    rows = [[r.number, r.title, "PASS" if r.passed else "FAIL", r.detail.split("; runtime")[0]]
            for r in results]
    return ["criterion", "title", "status", "detail"], rows, all(r.passed for r in results)


def _fmt(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    s = str(v)
    if any(c in s for c in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


def emit(cfg: JobConfig, header: list, rows: list, out) -> None:
    """Write rows as CSV (header, repr floats, newline-terminated) or as one JSON object."""
    if cfg.output == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(_fmt(v) for v in row) + "\n")
        return
    meta = {"command": cfg.command,
            "parameters": {k: _jsonable(v) for k, v in cfg.parameters.items()},
            "grid": asdict(cfg.grid) if cfg.grid is not None else None}
    doc = {"meta": meta,
           "rows": [{h: _jsonable(v) for h, v in zip(header, row)} for row in rows]}
    out.write(json.dumps(doc) + "\n")


def run(cfg: JobConfig, out=None, err=None) -> tuple[int, list]:
    """Execute a job; returns the exit status and the emitted rows."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    status = EXIT_OK
    try:
        if cfg.command == "verify":
            header, rows, ok = _job_verify(cfg, err)
            status = EXIT_OK if ok else EXIT_CHECKS
        else:
            handler: Callable = globals()[f"_job_{cfg.command}"]
            header, rows = handler(cfg)
    except (InvalidParam, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
        return EXIT_PARAM, []
    except (PrabhakarError, ArithmeticError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
        return EXIT_NUMERIC, []
    emit(cfg, header, rows, out)
    return status, rows


def _real(text: str) -> float:
    """Parse a real number; fractions such as ``3/4`` are accepted."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        return float(text)


def _add_common(sp: argparse.ArgumentParser, var: str | None) -> None:
    sp.add_argument("--output", choices=("csv", "json"), default="csv")
    if var is not None:
        sp.add_argument(f"--{var}", type=_real, nargs="+", help=f"value(s) of {var}")
        sp.add_argument("--start", type=_real)
        sp.add_argument("--stop", type=_real)
        sp.add_argument("--count", type=int)
        sp.add_argument("--spacing", choices=("linear", "log"), default="linear")
        sp.add_argument("--workers", type=int, help="threads for grid points (results keep grid order)")


def _add_kernel(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--alpha", type=_real)
    sp.add_argument("--nu", type=_real)
    sp.add_argument("--mu", type=_real)
    sp.add_argument("--a", type=_real, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prabrelax", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON file with one job or {\"jobs\": [...]}")
    sub = ap.add_subparsers(dest="command")

    sp = sub.add_parser("ml", help="three-parameter Mittag-Leffler function")
    sp.add_argument("--alpha", type=_real)
    sp.add_argument("--mu", type=_real)
    sp.add_argument("--nu", type=_real)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--route", choices=("auto", "series", "hypergeometric"))
    _add_common(sp, "x")

    sp = sub.add_parser("prabhakar", help="Prabhakar function t^(mu-1) E(a t^alpha)")
    sp.add_argument("--alpha", type=_real)
    sp.add_argument("--mu", type=_real)
    sp.add_argument("--nu", type=_real)
    sp.add_argument("--a", type=_real)
    sp.add_argument("--tol", type=float)
    _add_common(sp, "t")

    sp = sub.add_parser("levy", help="h function, stable density (lam=0) or distribution (lam=1)")
    sp.add_argument("--alpha", type=_real)
    sp.add_argument("--u", type=_real)
    sp.add_argument("--lam", type=_real)
    sp.add_argument("--route", choices=levy.ROUTES)
    _add_common(sp, "t")

    sp = sub.add_parser("solve", help="relaxation function by one route")
    _add_kernel(sp)
    sp.add_argument("--B", type=_real)
    sp.add_argument("--f0", type=_real)
    sp.add_argument("--method", choices=SOLVE_METHODS)
    sp.add_argument("--max-terms", dest="max_terms", type=int)
    sp.add_argument("--tol", type=float, help="step-halving tolerance of eq1")
    sp.add_argument("--n-nodes", dest="n_nodes", type=int, help="Talbot nodes of laplace")
    _add_common(sp, "t")

    for name, var, help_ in (("spectral", "omega", "spectral function samples"),
                             ("jonscher", None, "fitted and expected Jonscher exponents")):
        sp = sub.add_parser(name, help=help_)
        _add_kernel(sp)
        sp.add_argument("--B", type=_real, help="coupling; default tau^-mu")
        sp.add_argument("--tau", type=_real)
        if name == "jonscher":
            sp.add_argument("--per-decade", dest="per_decade", type=int)
            sp.add_argument("--decades", type=_real)
        _add_common(sp, var)

    sp = sub.add_parser("fig1", help="closed-form Cole-Cole family, B=(1-alpha)/tau")
    sp.add_argument("--alpha", type=_real)
    sp.add_argument("--a", type=_real)
    sp.add_argument("--f0", type=_real)
    _add_common(sp, "t")

    sp = sub.add_parser("verify", help="run the acceptance checks")
    sp.add_argument("--only", type=int, nargs="+", help="criterion numbers")
    _add_common(sp, None)
    return ap


_NON_PARAMS = {"command", "config", "output", "start", "stop", "count", "spacing"}


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    params = {k: v for k, v in vars(ns).items() if k not in _NON_PARAMS and v is not None}
    var = _SCHEMA[ns.command][2]
    if var is not None and var in params:
        vals = params[var]
        params[var] = vals[0] if len(vals) == 1 else vals
    grid = None
    if getattr(ns, "count", None) is not None or getattr(ns, "start", None) is not None:
        if None in (ns.start, ns.stop, ns.count):
            raise InvalidParam("a grid needs --start, --stop and --count")
        grid = GridSpec(ns.start, ns.stop, ns.count, ns.spacing)
    return JobConfig(ns.command, params, ns.output, grid)


def configs_from_file(path: str) -> list[JobConfig]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    jobs = doc["jobs"] if isinstance(doc, dict) and "jobs" in doc else doc
    if isinstance(jobs, dict):
        jobs = [jobs]
    return [JobConfig(j["command"], dict(j.get("parameters", {})), j.get("output", "csv"),
                      j.get("grid")) for j in jobs]


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        if ns.config:
            configs = configs_from_file(ns.config)
        elif ns.command is None:
            ap.print_help(sys.stderr)
            return EXIT_PARAM
        else:
            configs = [config_from_args(ns)]
    except (InvalidParam, KeyError, TypeError, ValueError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARAM
    status = EXIT_OK
    for cfg in configs:
        code, _ = run(cfg)
        status = max(status, code)
    return status


if __name__ == "__main__":
    sys.exit(main())
