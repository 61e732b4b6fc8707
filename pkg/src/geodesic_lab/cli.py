"""Command-line front end: ``geodesic-lab <command> [options]``.

Every command writes its primary output plus ``manifest.json`` into
``--out``.  Primary outputs are byte-identical for any shard count; only the
manifest records timing and the shard count.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import __version__
from .arith import is_prime
from .modp import local_density_report, sample_correlations
from .quadforms.census import census_summary, census_table
from .quadforms.certify import find_certificates, squarefree_fraction, verify_certificates, write_certificates
from .semigroup import (
    ball_records,
    bound_from_norm,
    build_pi,
    estimate_dimension_counting,
    estimate_dimension_pressure,
    format_ball_record,
    dimension_defect_ratio,
)
from .sieve.planner import exponent_plan
from .sieve.sequence import sieve_report

COMMANDS = ("enumerate", "dimension", "localdensity", "sieve", "census", "certify", "plan", "verify")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "enumerate"
    alphabet: int = 2
    N: float = 100.0
    X: float | None = None
    Y: float | None = None
    Z: float | None = None
    x_sq: int | None = None
    y_sq: int | None = None
    z_sq: int | None = None
    moduli: int = 30
    census_X: int = 200
    z: int = 7
    depth: int = 12
    N_list: list = field(default_factory=lambda: [100, 300, 1000, 3000, 10000])
    p_lo: int = 2
    p_hi: int = 40
    samples: int = 0
    max_count: int | None = None
    delta: float = 0.999
    Theta: float = 0.1
    C: float = 10.0
    eta: float = 0.01
    path: str | None = None
    out: str = "out"
    shards: int = 1
    seed: int = 0

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.shards < 1:
            raise ConfigError("shards must be >= 1")
        if self.alphabet < 1:
            raise ConfigError("alphabet must be >= 1")
        for name in ("N", "X", "Y", "Z", "x_sq", "y_sq", "z_sq", "moduli", "census_X", "z", "depth"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ConfigError(f"{name} must be positive")
        if any(n <= 0 for n in self.N_list):
            raise ConfigError("N_list entries must be positive")
        if self.command == "verify" and not self.path:
            raise ConfigError("verify needs --path")
        return self

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


# --------------------------------------------------------------------------
# commands; each returns (exit code, manifest extras)


def _slice_bounds(cfg: RunConfig):
    def sq(norm, explicit):
        if explicit is not None:
            return int(explicit)
        return bound_from_norm(norm if norm is not None else math.sqrt(50))

    return sq(cfg.X, cfg.x_sq), sq(cfg.Y, cfg.y_sq), sq(cfg.Z, cfg.z_sq)


def cmd_enumerate(cfg: RunConfig, out: Path):
    recs = ball_records(cfg.alphabet, cfg.N, shards=cfg.shards)
    with open(out / "ball.tsv", "w") as fh:
        for w, ent, f in recs:
            fh.write(format_ball_record(w, ent, f) + "\n")
    lengths = sorted({len(w) for w, _, _ in recs})
    return EXIT_OK, {"count": len(recs), "norm_sq": bound_from_norm(cfg.N), "word_lengths": lengths}


def cmd_dimension(cfg: RunConfig, out: Path):
    pressure = estimate_dimension_pressure(cfg.alphabet, cfg.depth)
    row = {"alphabet": cfg.alphabet, "depth": cfg.depth, "pressure": round(pressure, 12),
           "defect_ratio": round(dimension_defect_ratio(cfg.alphabet, pressure), 12)}
    if cfg.alphabet > 1:
        row["counting"] = round(estimate_dimension_counting(cfg.alphabet, cfg.N_list), 12)
    (out / "dimension.json").write_text(json.dumps(row, indent=2) + "\n")
    return EXIT_OK, {}


def cmd_localdensity(cfg: RunConfig, out: Path):
    rows = local_density_report(cfg.p_lo, cfg.p_hi, seed=cfg.seed)
    if cfg.samples:
        for p in range(max(3, cfg.p_lo), min(cfg.p_hi, 40) + 1):
            if is_prime(p):
                for r in sample_correlations(p, cfg.samples, seed=cfg.seed):
                    rows.append({"p": p, "statement": f"correlation{r['omega']}{r['omega2']}{r['eps']:+d}{r['eps2']:+d}",
                                 "expected": f"<= {r['bound']}", "computed": str(r["value"]), "pass": r["pass"]})
    with open(out / "localdensity.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["p", "statement", "expected", "computed", "pass"])
        w.writeheader()
        w.writerows(rows)
    failed = sum(not r["pass"] for r in rows)
    return (EXIT_FAILED if failed else EXIT_OK), {"rows": len(rows), "failed": failed}


def cmd_sieve(cfg: RunConfig, out: Path):
    x_sq, y_sq, z_sq = _slice_bounds(cfg)
    pi = build_pi(cfg.alphabet, x_sq=x_sq, y_sq=y_sq, z_sq=z_sq)
    rep = sieve_report(pi, cfg.moduli, cfg.z, shards=cfg.shards)
    rep.write_csv(out / "sieve.csv")
    (out / "sieve_summary.json").write_text(json.dumps(rep.summary(), indent=2) + "\n")
    return EXIT_OK, {"slice_lengths": rep.params["slice_lengths"], "slice_sizes": rep.params["slice_sizes"]}


def cmd_census(cfg: RunConfig, out: Path):
    rows = census_table(cfg.census_X, shards=cfg.shards)
    with open(out / "census.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["trace", "disc", "primitive", "reciprocal"])
        w.writeheader()
        w.writerows(rows)
    summary = census_summary(cfg.census_X, shards=cfg.shards)
    summary["all"] = sum(r["primitive"] for r in rows)
    summary["prime_geodesic_ratio"] = summary["all"] * 2 * math.log(cfg.census_X) / cfg.census_X**2
    (out / "census_summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK, {}


def cmd_certify(cfg: RunConfig, out: Path):
    certs = find_certificates(cfg.alphabet, cfg.N, cfg.max_count, shards=cfg.shards)
    path = out / "certificates.jsonl"
    n = write_certificates(certs, path)
    _, report = verify_certificates(path)
    frac = squarefree_fraction(cfg.alphabet, cfg.N)
    (out / "certify_summary.json").write_text(json.dumps(
        {"certificates": n, "squarefree_fraction": frac, "verification_failures": len(report)}, indent=2) + "\n")
    return (EXIT_FAILED if report else EXIT_OK), {"certificates": n}


def cmd_plan(cfg: RunConfig, out: Path):
    plan = exponent_plan(cfg.delta, cfg.Theta, cfg.C, cfg.eta)
    (out / "plan.json").write_text(json.dumps(plan.to_dict(), indent=2) + "\n")
    return EXIT_OK, {"feasible": plan.feasible}


def cmd_verify(cfg: RunConfig, out: Path):
    path = Path(cfg.path)
    if not path.exists():
        raise ConfigError(f"no such file: {path}")
    n, report = verify_certificates(path)
    (out / "verify_report.txt").write_text("".join(line + "\n" for line in report))
    for line in report:
        print(line, file=sys.stderr)
    return (EXIT_FAILED if report or n == 0 else EXIT_OK), {"records": n, "failures": len(report)}


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def run(cfg: RunConfig) -> int:
    cfg.validate()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    code, extras = HANDLERS[cfg.command](cfg, out)
    manifest = {
        "version": __version__,
        "command": cfg.command,
        "config": asdict(cfg),
        "exit_code": code,
        "wall_time_s": round(time.perf_counter() - t0, 3),
        **extras,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return code


# --------------------------------------------------------------------------
# argument parsing


def _list_of_floats(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geodesic-lab", description="Thin-semigroup geodesic experiments")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config; flags given here override it")
    common.add_argument("--out")
    common.add_argument("--shards", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--alphabet", "-A", type=int)

    def add(name, help_, *opts):
        sp = sub.add_parser(name, help=help_, parents=[common])
        for flag, typ in opts:
            sp.add_argument(flag, type=typ, dest=flag.lstrip("-").replace("-", "_"))
        return sp

    add("enumerate", "dump the semigroup ball", ("--N", float))
    add("dimension", "estimate the dimension", ("--depth", int), ("--N-list", _list_of_floats))
    add("localdensity", "finite-field checks", ("--p-lo", int), ("--p-hi", int), ("--samples", int))
    add("sieve", "sieve decomposition report",
        ("--X", float), ("--Y", float), ("--Z", float),
        ("--x-sq", int), ("--y-sq", int), ("--z-sq", int), ("--moduli", int), ("--z", int))
    add("census", "class censuses by trace", ("--census-X", int))
    add("certify", "emit certificates", ("--N", float), ("--max-count", int))
    add("plan", "exponent planner", ("--delta", float), ("--Theta", float), ("--C", float), ("--eta", float))
    add("verify", "re-verify a certificate file", ("--path", str))
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if ns.config:
        try:
            base = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from exc
        if not isinstance(base, dict):
            raise ConfigError("config must be a JSON object")
    overrides = {k: v for k, v in vars(ns).items() if k != "config" and v is not None}
    base.update(overrides)
    return RunConfig.from_dict(base)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TypeError, ValueError) as exc:
        # domain errors from the library (bad moduli, empty slices, ...)
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
