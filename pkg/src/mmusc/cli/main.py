"""Command-line entry point: ``mmusc {run,list-scenarios,validate-config,convert-profile}``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .. import __version__
from ..core.profile_io import ProfileFormatError, convert_profile
from .config import SCENARIOS, ConfigError, RunConfig, load_config
from .scenarios import RunContext, run_scenario, write_manifest

THREADS_ENV = "MMUSC_THREADS"

EXIT_OK, EXIT_CONFIG, EXIT_UNSTABLE, EXIT_IO = 0, 2, 3, 4
CONFIG_DIR = Path(__file__).parent / "configs"


def _required_keys(name: str) -> list[str]:
    section = SCENARIOS[name][0]
    keys = ["scenario", section]
    if name in ("toy", "ingest-profiles"):
        keys.append("sweep | transmission" + (" | collapse | toggles" if name == "toy" else ""))
    return keys


def cmd_list(args) -> int:
    if args.json:
        cat = [{"name": n, "required": _required_keys(n), "description": d} for n, (_, d) in SCENARIOS.items()]
        print(json.dumps(cat, indent=2))
    else:
        for n, (_, d) in SCENARIOS.items():
            print(f"{n:18s} {d}")
            print(f"{'':18s} required: {', '.join(_required_keys(n))}")
        print(f"\nexample configs: {CONFIG_DIR}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        cfg, _ = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{args.config}: ok (scenario {cfg.scenario})")
    return EXIT_OK


def resolve_threads(flag: int | None, cfg: RunConfig) -> int:
    """--threads, then the config, then $MMUSC_THREADS, then 1."""
    if flag is not None:
        return flag
    if cfg.threads is not None:
        return cfg.threads
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
        if n < 1:
            raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        return n
    return 1


def cmd_run(args) -> int:
    path = args.config or args.config_pos
    if path is None:
        print("error: no config given (use --config PATH)", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg, base = load_config(path)
        threads = resolve_threads(args.threads, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(args.out_dir or cfg.output.dir)
    ctx = RunContext(cfg=cfg, base_dir=base, out_dir=out_dir, threads=threads,
                     seed=cfg.seed if args.seed is None else args.seed,
                     plots=cfg.output.plots and not args.no_plots)
    try:
        summary = run_scenario(ctx)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    ctx.write_json("summary.json", summary)
    manifest = write_manifest(ctx, Path(path).read_text(), summary)
    for d in ctx.diagnostics:
        print(f"warning: {d}", file=sys.stderr)
    print(f"wrote {len(ctx.artifacts)} artifacts to {out_dir} (manifest {manifest.name})")
    if ctx.instabilities:
        print(f"error: numerical instability in {len(ctx.instabilities)} evaluation(s); see manifest diagnostics",
              file=sys.stderr)
        return EXIT_UNSTABLE
    return EXIT_OK


def cmd_convert(args) -> int:
    try:
        dst = convert_profile(args.src, args.dst, args.format)
    except (ProfileFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {dst}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mmusc", description="Multimode Landau-polariton engine")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    r = sub.add_parser("run", help="run a scenario from a YAML config")
    r.add_argument("config_pos", nargs="?", metavar="CONFIG", help="config file (same as --config)")
    r.add_argument("--config", help="config file")
    r.add_argument("--out-dir", help="output directory (default: the config's output.dir, relative to the working directory)")
    r.add_argument("--threads", type=int, help=f"worker threads (default: config, then ${THREADS_ENV}, then 1)")
    r.add_argument("--no-plots", action="store_true", help="skip plot files")
    r.add_argument("--seed", type=int, help="override the config seed")
    r.set_defaults(func=cmd_run)

    ls = sub.add_parser("list-scenarios", help="describe available scenarios")
    ls.add_argument("--json", action="store_true", help="machine-readable catalog")
    ls.set_defaults(func=cmd_list)

    v = sub.add_parser("validate-config", help="check a config against the schema")
    v.add_argument("config")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("convert-profile", help="rewrite a mode-profile manifest with a binary or CSV payload")
    c.add_argument("src", help="source manifest")
    c.add_argument("dst", help="destination manifest")
    c.add_argument("--format", choices=("binary", "csv"), required=True)
    c.set_defaults(func=cmd_convert)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "run" and args.threads is not None and args.threads < 1:
        ap.error("--threads must be >= 1")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
