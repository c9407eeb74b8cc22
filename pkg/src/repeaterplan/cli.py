"""Command-line interface.

Exit codes: 0 success, 1 input/output error, 2 infeasible plan,
3 unknown user id, 4 no route, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import asdict, dataclass, fields
from typing import Optional

from . import __version__
from .estimator import NetworkPlanner
from .exceptions import InfeasibleError, NoRouteError, PlanError, UnknownUserError
from .plan import dumps_fixed, load_plan, plan_to_json, save_plan
from .render import render_svg
from .routing import build_routes, simulate, trace_call
from .sensitivity import sweep
from .terrain import Obstacle, augment, classify

EXIT_OK, EXIT_IO, EXIT_INFEASIBLE, EXIT_UNKNOWN_ID, EXIT_NO_ROUTE, EXIT_USAGE = 0, 1, 2, 3, 4, 64

log = logging.getLogger("repeaterplan")


@dataclass
class Config:
    users: int = 1000
    area_radius_miles: float = 40.0
    antenna_height_m: float = 15.0
    coverage_cap_miles: Optional[float] = None
    f_lo: float = 145.0
    f_hi: float = 147.4
    delta_f: float = 0.1
    pl_catalog_size: int = 54
    mode: str = "auto"
    auto_threshold: Optional[int] = None
    reuse_min_miles: float = 10.0
    seed: int = 0

    def __post_init__(self):
        for name in ("users", "pl_catalog_size"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("area_radius_miles", "antenna_height_m", "delta_f", "reuse_min_miles", "f_lo"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.coverage_cap_miles is not None and not self.coverage_cap_miles > 0:
            raise ValueError("coverage_cap_miles must be positive")
        if not self.f_lo < self.f_hi:
            raise ValueError(f"f_lo ({self.f_lo}) must be below f_hi ({self.f_hi})")
        if self.mode not in ("auto", "cell", "group"):
            raise ValueError(f"mode must be auto, cell or group, got {self.mode!r}")

    @classmethod
    def from_file(cls, path) -> "Config":
        """Read a JSON object or ``key = value`` lines (``#`` starts a comment)."""
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        if text.lstrip().startswith("{"):
            raw = json.loads(text)
        else:
            raw = {}
            for line in text.splitlines():
                line = line.split("#", 1)[0].strip()
                if line:
                    key, _, value = line.partition("=")
                    raw[key.strip()] = value.strip()
        return cls().updated(raw)

    def updated(self, raw: dict) -> "Config":
        types = {f.name: f.type for f in fields(self)}
        values = asdict(self)
        for key, value in raw.items():
            if key not in types:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = _coerce(types[key], value)
        return Config(**values)

    def planner(self) -> NetworkPlanner:
        return NetworkPlanner(
            users=self.users,
            area_radius=self.area_radius_miles,
            antenna_height=self.antenna_height_m,
            coverage_cap=self.coverage_cap_miles,
            f_lo=self.f_lo,
            f_hi=self.f_hi,
            delta_f=self.delta_f,
            pl_catalog_size=self.pl_catalog_size,
            mode=self.mode,
            auto_threshold=self.auto_threshold,
            reuse_min=self.reuse_min_miles,
        )


def _coerce(type_name, value):
    if value is None or (isinstance(value, str) and value.lower() in ("", "none", "null")):
        return None
    base = str(type_name).replace("Optional[", "").rstrip("]")
    if base == "int":
        return int(value)
    if base == "float":
        return float(value)
    return str(value)


_FLAG_TO_KEY = {
    "users": "users",
    "radius": "area_radius_miles",
    "height": "antenna_height_m",
    "cap": "coverage_cap_miles",
    "f_lo": "f_lo",
    "f_hi": "f_hi",
    "delta_f": "delta_f",
    "tones": "pl_catalog_size",
    "mode": "mode",
    "auto_threshold": "auto_threshold",
    "reuse_min": "reuse_min_miles",
    "seed": "seed",
}


def _config_from_args(args) -> Config:
    config = Config.from_file(args.config) if args.config else Config()
    overrides = {key: getattr(args, flag) for flag, key in _FLAG_TO_KEY.items()
                 if getattr(args, flag, None) is not None}
    return config.updated(overrides)


def _add_config_flags(p):
    p.add_argument("--config", help="config file (JSON or key = value)")
    p.add_argument("--users", type=int)
    p.add_argument("--radius", type=float, help="service radius, miles")
    p.add_argument("--height", type=float, help="antenna height, meters")
    p.add_argument("--cap", type=float, help="coverage radius cap, miles")
    p.add_argument("--f-lo", dest="f_lo", type=float)
    p.add_argument("--f-hi", dest="f_hi", type=float)
    p.add_argument("--delta-f", dest="delta_f", type=float)
    p.add_argument("--tones", type=int, help="PL tone catalog size")
    p.add_argument("--mode", choices=("auto", "cell", "group"))
    p.add_argument("--auto-threshold", dest="auto_threshold", type=int,
                   help="largest user count planned in cell mode under --mode auto")
    p.add_argument("--reuse-min", dest="reuse_min", type=float, help="same-tone separation, miles")
    p.add_argument("--seed", type=int)


def _plural(n, word):
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


def summary_line(plan) -> str:
    s = plan.summary()
    parts = [_plural(s["repeaters"], "repeater"), _plural(s["clusters"], "cluster"),
             _plural(s["channels"], "channel")]
    if plan.mode == "group":
        parts += [f"{s['clusters_required']} required clusters", _plural(s["groups"], "group"),
                  _plural(s["group_codes"], "group code")]
    return ", ".join(parts)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="repeaterplan", description="Plan minimal-repeater VHF networks.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("plan", help="design a plan and write it as JSON")
    _add_config_flags(p)
    p.add_argument("-o", "--out", help="plan file (default: stdout)")

    p = sub.add_parser("route", help="print the hop trace of one call")
    p.add_argument("plan")
    p.add_argument("src", help="user index or id such as gc3/pl12@145.300")
    p.add_argument("dst")

    p = sub.add_parser("simulate", help="run calls through the repeaters and log every hop")
    p.add_argument("plan")
    p.add_argument("--calls", type=int, default=100, help="number of random calls")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--requests", help="JSON lines of {src, dst, tick} instead of random calls")
    p.add_argument("-o", "--out", help="log file (default: stdout)")

    p = sub.add_parser("terrain", help="augment a plan around a mountain")
    p.add_argument("plan")
    p.add_argument("--center", type=float, nargs=2, required=True, metavar=("X", "Y"))
    p.add_argument("--obstacle-radius", dest="obstacle_radius", type=float, required=True)
    p.add_argument("--obstacle-height", dest="obstacle_height", type=float, required=True, help="meters")
    p.add_argument("--case", choices=("emergency", "mobile"), required=True)
    p.add_argument("--inner-scale", dest="inner_scale", type=float, default=2.0)
    p.add_argument("-o", "--out", help="write the augmented plan here")

    p = sub.add_parser("sweep", help="sensitivity sweep over one parameter")
    _add_config_flags(p)
    p.add_argument("--param", choices=("H", "delta_f", "R", "users"), required=True)
    p.add_argument("--values", required=True, help="comma-separated, strictly increasing")
    p.add_argument("-o", "--out", help="CSV file (default: stdout)")

    p = sub.add_parser("render", help="draw a plan as SVG")
    p.add_argument("plan")
    p.add_argument("-o", "--out", help="SVG file (default: stdout)")
    return parser


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_plan(args) -> int:
    config = _config_from_args(args)
    try:
        planner = config.planner().fit()
    except InfeasibleError as exc:
        print(f"infeasible ({exc.constraint}): {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except PlanError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    plan = planner.plan_
    _emit(plan_to_json(plan), args.out)
    for w in plan.warnings:
        log.info(w)
    print(summary_line(plan), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_route(args) -> int:
    plan = load_plan(args.plan)
    try:
        src, dst = plan.user(args.src), plan.user(args.dst)
        hops = trace_call(plan, build_routes(plan), src, dst)
    except UnknownUserError as exc:
        print(f"unknown user: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_ID
    except NoRouteError as exc:
        print(f"no route: {exc} (excluded repeaters: {exc.excluded})", file=sys.stderr)
        return EXIT_NO_ROUTE
    print(f"{src} -> {dst}: {len(hops) - 2} repeater hops, {len(hops)} transmissions")
    for k, h in enumerate(hops, start=1):
        print(f"{k:3d}  {h['from']!s:>5} -> {h['to']!s:<5}  {h['frequency']:.3f} MHz  PL {h['pl']}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    plan = load_plan(args.plan)
    if args.requests:
        with open(args.requests, encoding="utf-8") as fh:
            requests = [(r["src"], r["dst"], int(r.get("tick", 1)))
                        for r in map(json.loads, filter(str.strip, fh))]
    else:
        rng = random.Random(args.seed)
        n = len(plan.users)
        requests = [(rng.randrange(n), rng.randrange(n), 1 + rng.randrange(max(1, args.calls // 10)))
                    for _ in range(args.calls)] if n else []
    try:
        result = simulate(plan, requests)
    except UnknownUserError as exc:
        print(f"unknown user: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_ID
    _emit(result.to_jsonl(), args.out)
    print(f"{len(result.delivered())}/{len(requests)} calls delivered, {len(result.failed())} failed",
          file=sys.stderr)
    return EXIT_OK


def cmd_terrain(args) -> int:
    plan = load_plan(args.plan)
    obstacle = Obstacle(tuple(args.center), args.obstacle_radius, args.obstacle_height)
    size = classify(plan, obstacle)
    if size == "NoEffect":
        print(json.dumps({"case": "NoEffect", "added_repeaters": []}))
        return EXIT_OK
    aug = augment(plan, obstacle, args.case, inner_scale=args.inner_scale)
    sys.stdout.write(dumps_fixed(aug.to_dict()))
    if args.out:
        save_plan(plan.with_augmentation(aug), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _config_from_args(args)
    values = [float(v) for v in args.values.split(",") if v.strip()]
    if args.param == "users":
        values = [int(v) for v in values]
    result = sweep(config.planner(), args.param, values)
    _emit(result.to_csv(), args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    _emit(render_svg(load_plan(args.plan)), args.out)
    return EXIT_OK


COMMANDS = {"plan": cmd_plan, "route": cmd_route, "simulate": cmd_simulate, "terrain": cmd_terrain,
            "sweep": cmd_sweep, "render": cmd_render}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except PlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
