"""solenoid verify: run verification suites and write a JSON or CSV report.

Exit codes: 0 every check passed, 1 some check failed, 2 configuration error.
"""

import argparse
import csv
import io
import json
import sys

from .padic import is_prime
from .suites import SUITES, RunConfig, run_suite

FLAGS = {
    # config-file key: (attribute, parser)
    "p": ("p", int),
    "theta": ("theta", float),
    "levels": ("levels", None),
    "j": ("j", int),
    "radius": ("radius", float),
    "denom-bound": ("denom_bound", int),
    "fourier-range": ("fourier_range", int),
    "quad-tol": ("quad_tol", float),
    "tol": ("tol", float),
    "seed": ("seed", int),
    "samples": ("samples", int),
    "suite": ("suite", str),
    "out": ("out", str),
    "format": ("format", str),
}


class ConfigError(ValueError):
    pass


def parse_levels(text):
    lo, sep, hi = str(text).partition("..")
    try:
        lo = int(lo)
        hi = int(hi) if sep else lo
    except ValueError:
        raise ConfigError(f"levels must look like a..b, got {text!r}")
    if lo < 0 or hi < lo:
        raise ConfigError(f"bad level range {text!r}")
    return lo, hi


def read_config_file(path):
    values = {}
    try:
        lines = open(path).read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip().lstrip("-").replace("_", "-")
        if not sep or key not in FLAGS:
            raise ConfigError(f"{path}:{n}: expected key=value with a known key, got {line!r}")
        values[key] = val.strip()
    return values


def build_parser():
    parser = argparse.ArgumentParser(prog="solenoid")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("-p", dest="p")
    v.add_argument("--theta")
    v.add_argument("--levels")
    v.add_argument("-j", dest="j")
    v.add_argument("--radius")
    v.add_argument("--denom-bound")
    v.add_argument("--fourier-range")
    v.add_argument("--quad-tol")
    v.add_argument("--tol")
    v.add_argument("--seed")
    v.add_argument("--samples")
    v.add_argument("--suite", help="one of %s, or all" % ", ".join(SUITES))
    v.add_argument("--out")
    v.add_argument("--format")
    v.add_argument("--config", help="key=value file; command-line flags override it")
    return parser


def make_config(args):
    raw = read_config_file(args.config) if args.config else {}
    for key, (attr, _) in FLAGS.items():
        val = getattr(args, attr)
        if val is not None:
            raw[key] = val
    cfg = RunConfig()
    out, fmt = None, "json"
    for key, val in raw.items():
        attr, conv = FLAGS[key]
        if key == "levels":
            cfg.levels = parse_levels(val)
        elif key == "out":
            out = val
        elif key == "format":
            fmt = val
        else:
            try:
                setattr(cfg, attr, conv(val))
            except ValueError:
                raise ConfigError(f"bad value for {key}: {val!r}")
    if cfg.p < 2 or not is_prime(cfg.p):
        raise ConfigError(f"p must be a prime, got {cfg.p}")
    if not 0 < cfg.theta < 1:
        raise ConfigError(f"theta must lie in (0, 1), got {cfg.theta}")
    if cfg.radius <= 0:
        raise ConfigError("radius must be positive")
    if cfg.fourier_range < 1:
        raise ConfigError("fourier-range must be at least 1")
    if cfg.denom_bound < 0 or cfg.j < 0:
        raise ConfigError("denom-bound and j must be non-negative")
    if cfg.samples is not None and cfg.samples < 0:
        raise ConfigError("samples must be non-negative")
    if cfg.suite != "all" and cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {fmt!r}")
    return cfg, out, fmt


def report(cfg):
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    checks = []
    for name in names:
        for c in run_suite(cfg, name):
            checks.append({"suite": name, **c} if cfg.suite == "all" else c)
    failed = sum(c["verdict"] != "pass" for c in checks)
    return {
        "suite": cfg.suite,
        "config_echo": cfg.echo(),
        "checks": checks,
        "summary": {"total": len(checks), "passed": len(checks) - failed, "failed": failed,
                    "max_discrepancy": max((c["discrepancy"] for c in checks), default=0.0)},
    }


def render(rep, fmt):
    if fmt == "json":
        return json.dumps(rep, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "name", "paper_ref", "verdict", "discrepancy"])
    for c in rep["checks"]:
        w.writerow([c.get("suite", rep["suite"]), c["name"], c["paper_ref"], c["verdict"], repr(c["discrepancy"])])
    return buf.getvalue()


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg, out, fmt = make_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    rep = report(cfg)
    text = render(rep, fmt)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    s = rep["summary"]
    print(f"{cfg.suite}: {s['passed']}/{s['total']} checks passed", file=sys.stderr)
    return 0 if s["failed"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
