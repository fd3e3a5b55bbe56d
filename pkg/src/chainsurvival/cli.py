"""
Command-line front end writing plot-ready CSV / JSON artifacts.

    chainsurvival ldos     --eps0 1 --v0 0.4
    chainsurvival evolve   --eps0 1 --v0 0.4 --t-max 200 --route both
    chainsurvival regimes  --eps0 1 --v0 0.4
    chainsurvival zeno     --eps0 1.8 --v0 0.77 --t-min 0.01 --t-max 20
    chainsurvival tridiag  --star star.json

Every artifact carries the full run configuration in a ``# config:`` header
line (or a ``config`` key for JSON), so the run can be reproduced from the
file alone. Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .errors import NumericError, ParameterError, ResonanceError
from .measurement import sweep_tau
from .model import StarModel, build_chain, tridiagonalize, truncate
from .propagate import Route, evolve_chain, evolve_eigen, survival_from_ldos
from .regimes import analyze, effective_rate, interpolation_series, piecewise_series
from .spectral import ldos_curve

COMMANDS = ("ldos", "evolve", "regimes", "zeno", "tridiag")
ROUTE_ALIASES = {
    "eigen": Route.EIGEN_ORACLE.value,
    "quadrature": Route.LDOS_QUADRATURE.value,
    "piecewise": Route.PIECEWISE_LAW.value,
    "interpolation": Route.INTERPOLATION.value,
    "both": "both",
}
DEFAULT_TOLERANCES = {"quad_tol": 1e-10, "margin": 1.25, "delta": 0.05, "dt": 0.01}

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    eps0: float | None = None
    v0: float | None = None
    v: float = 1.0
    star: str | None = None
    t_min: float = 0.01
    t_max: float = 200.0
    points: int = 2000
    spacing: str = "log"
    out: str = "."
    route: str = Route.EIGEN_ORACLE.value
    tolerances: dict = field(default_factory=dict)
    timestamp: bool = True
    depth: int | None = None

    def tol(self, key):
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])

    def model(self):
        return build_chain(self.eps0, self.v0, self.v)

    def times(self):
        if self.spacing == "log":
            return np.geomspace(self.t_min, self.t_max, self.points)
        return np.linspace(self.t_min, self.t_max, self.points)

    def to_dict(self):
        return dataclasses.asdict(self)

    def header(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser():
    p = _Parser(prog="chainsurvival", description=__doc__.strip().splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    s = argparse.SUPPRESS
    p.add_argument("--eps0", type=float, default=s, help="level energy (units of V)")
    p.add_argument("--v0", type=float, default=s, help="surface hopping (units of V)")
    p.add_argument("--v", type=float, default=s, help="bulk hopping (default 1)")
    p.add_argument("--star", default=s, help="JSON file describing a star environment")
    p.add_argument("--t-min", dest="t_min", type=float, default=s)
    p.add_argument("--t-max", dest="t_max", type=float, default=s)
    p.add_argument("--points", type=int, default=s)
    p.add_argument("--spacing", choices=("linear", "log"), default=s)
    p.add_argument("--route", default=s,
                   help="eigen, quadrature, piecewise, interpolation or both")
    p.add_argument("--out", default=s, help="output directory")
    p.add_argument("--config", default=None, help="JSON file with RunConfig fields")
    p.add_argument("--depth", type=int, default=s, help="tridiag: number of chain sites")
    p.add_argument("--tol", action="append", default=s, metavar="KEY=VALUE",
                   help=f"override a tolerance ({', '.join(DEFAULT_TOLERANCES)})")
    p.add_argument("--no-timestamp", dest="timestamp", action="store_false", default=s)
    return p


def _normalise_route(route):
    key = str(route)
    if key.lower() in ROUTE_ALIASES:
        return ROUTE_ALIASES[key.lower()]
    try:
        return Route(key).value
    except ValueError:
        raise UsageError(f"unknown route {route!r}") from None


def _parse_tols(items):
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or key not in DEFAULT_TOLERANCES:
            raise UsageError(f"bad --tol {item!r}; keys: {', '.join(DEFAULT_TOLERANCES)}")
        try:
            out[key] = float(value)
        except ValueError:
            raise UsageError(f"bad --tol value {value!r}") from None
    return out


def parse_config(args, file=None) -> RunConfig:
    """Build a validated :class:`RunConfig` from CLI tokens and an optional JSON dict.

    Precedence: built-in defaults < config file (``file`` or ``--config``)
    < explicit flags.
    """
    ns = vars(_parser().parse_args(list(args)))
    config_path = ns.pop("config", None)
    doc = dict(file or {})
    if config_path is not None:
        try:
            doc.update(json.loads(Path(config_path).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {config_path}: {exc}") from exc
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(doc) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    doc.pop("command", None)
    if "tol" in ns:
        doc["tolerances"] = {**doc.get("tolerances", {}), **_parse_tols(ns.pop("tol"))}
    doc.update(ns)
    try:
        cfg = RunConfig(**doc)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc
    return _validate(cfg)


def _validate(cfg):
    cfg.route = _normalise_route(cfg.route)
    inline = cfg.eps0 is not None or cfg.v0 is not None
    if inline and cfg.star is not None:
        raise UsageError("give either --eps0/--v0 or --star, not both")
    if not inline and cfg.star is None:
        raise UsageError("no model: give --eps0 and --v0, or --star")
    if inline:
        if cfg.eps0 is None or cfg.v0 is None:
            raise UsageError("an inline model needs both --eps0 and --v0")
        try:
            cfg.model()
        except ParameterError as exc:
            raise UsageError(str(exc)) from exc
    elif cfg.command not in ("tridiag", "evolve"):
        raise UsageError(f"'{cfg.command}' needs a chain model (--eps0/--v0)")
    elif cfg.command == "evolve" and cfg.route != Route.EIGEN_ORACLE.value:
        raise UsageError("a star environment only supports the eigen route")
    if not cfg.t_min < cfg.t_max:
        raise UsageError(f"t_min ({cfg.t_min}) must be below t_max ({cfg.t_max})")
    if cfg.points < 2:
        raise UsageError("need at least 2 points")
    if cfg.spacing not in ("linear", "log"):
        raise UsageError(f"unknown spacing {cfg.spacing!r}")
    if cfg.spacing == "log" and cfg.t_min <= 0:
        raise UsageError("log spacing needs t_min > 0")
    unknown = set(cfg.tolerances) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise UsageError(f"unknown tolerances: {', '.join(sorted(unknown))}")
    return cfg


def config_from_header(path) -> RunConfig:
    """Recover the RunConfig embedded in an artifact written by :func:`run`."""
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text())["config"]
    else:
        header, _, _ = io.read_csv(path)
        lines = [h for h in header if h.startswith("config: ")]
        if not lines:
            raise UsageError(f"{path} carries no config header")
        doc = json.loads(lines[0][len("config: "):])
    return _validate(RunConfig(**doc))


def _header(cfg):
    lines = [f"chainsurvival {cfg.command}", f"config: {cfg.header()}"]
    if cfg.star is None:
        lines.append(f"model: {cfg.model().describe()}")
    if cfg.timestamp:
        lines.append(f"generated: {datetime.datetime.now(datetime.timezone.utc).isoformat()}")
    return lines



def _series(cfg, route):
    times = cfg.times()
    if route == Route.EIGEN_ORACLE.value:
        if cfg.star is not None:
            return evolve_eigen(tridiagonalize(StarModel.from_json(cfg.star)), times)
        return evolve_chain(cfg.model(), times, margin=cfg.tol("margin"))
    if route == Route.LDOS_QUADRATURE.value:
        return survival_from_ldos(cfg.model(), times, tol=cfg.tol("quad_tol"))
    if route == Route.PIECEWISE_LAW.value:
        return piecewise_series(cfg.model(), times)
    return interpolation_series(cfg.model(), times)


def run(cfg: RunConfig):
    """Execute ``cfg`` and return the list of written paths."""
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    header = _header(cfg)
    written = []

    if cfg.command == "ldos":
        curve = ldos_curve(cfg.model())
        written.append(io.write_csv(out / "ldos.csv", ["energy", "ldos"],
                                    [curve.energies, curve.values], header))

    elif cfg.command == "evolve":
        routes = ([Route.EIGEN_ORACLE.value, Route.LDOS_QUADRATURE.value]
                  if cfg.route == "both" else [cfg.route])
        for route in routes:
            series = _series(cfg, route)
            path = out / f"survival_{route}.csv"
            series.to_csv(path, header)
            written.append(path)

    elif cfg.command == "regimes":
        model = cfg.model()
        report, _ = analyze(model, dt=cfg.tol("dt"), margin=cfg.tol("margin"))
        doc = {"config": cfg.to_dict(), "report": report.to_dict()}
        if cfg.timestamp:
            doc["generated"] = header[-1].partition(": ")[2]
        written.append(io.write_json(out / "regimes.json", doc))
        route = Route.EIGEN_ORACLE.value if cfg.route == "both" else cfg.route
        series = _series(cfg, route)
        written.append(io.write_csv(out / "gamma_eff.csv", ["t", "gamma_eff"],
                                    [series.times, effective_rate(series)],
                                    [f"route: {series.route.value}", *header]))

    elif cfg.command == "zeno":
        route = Route.EIGEN_ORACLE.value if cfg.route == "both" else cfg.route
        sweep = sweep_tau(cfg.model(), cfg.times(), oracle=route, delta=cfg.tol("delta"))
        path = out / "zeno_sweep.csv"
        sweep.to_csv(path, header)
        written.append(path)

    elif cfg.command == "tridiag":
        if cfg.star is not None:
            star = StarModel.from_json(cfg.star)
            h = tridiagonalize(star, cfg.depth)
        else:
            h = truncate(cfg.model(), cfg.depth or 16)
        hop = np.append(h.offdiag, np.nan)
        written.append(io.write_csv(out / "tridiag.csv", ["site", "energy", "hopping"],
                                    [np.arange(len(h), dtype=float), h.diag, hop], header))
    return written


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"chainsurvival: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        paths = run(cfg)
    except (NumericError, ResonanceError) as exc:
        print(f"chainsurvival: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ParameterError, OSError) as exc:
        print(f"chainsurvival: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for p in paths:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
