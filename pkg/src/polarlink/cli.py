"""``polarlink`` command line.

Exit codes: 0 success, 2 configuration error, 3 I/O or input-file error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import sim
from .capacity import biawgn_capacity, design_snr
from .construction import QsParseError, save_order
from .plot import CsvParseError, emit_plot

EXIT_CONFIG = 2
EXIT_IO = 3

# flag -> (config key, type)
_FLAGS = {
    "--n": ("N", int),
    "--rate": ("rate", float),
    "--snr-start": ("snr_start", float),
    "--snr-stop": ("snr_stop", float),
    "--snr-step": ("snr_step", float),
    "--construction": ("construction", str),
    "--engine": ("engine", str),
    "--mc-iters": ("mc_iters", int),
    "--decoder": ("decoder", str),
    "--dist": ("dist", str),
    "--nb": ("n_blocks_fading", int),
    "--adapt-capacity": ("adapt_capacity", str),
    "--alpha": ("alpha", float),
    "--cap-m": ("cap_m", int),
    "--blocks": ("blocks", int),
    "--max-bit-errors": ("max_bit_errors", int),
    "--chunk": ("chunk", int),
    "--workers": ("workers", int),
    "--seed": ("seed", int),
    "--out": ("out", str),
    "--qs-out": ("qs_out", str),
}
_BOOL_FLAGS = {"--systematic": "systematic", "--fixed-offset": "fixed_offset"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polarlink", description="Polar-code link simulations.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in sim.EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key=value file; flags override it")
        for flag, (key, typ) in _FLAGS.items():
            p.add_argument(flag, dest=key, type=typ, default=argparse.SUPPRESS)
        for flag, key in _BOOL_FLAGS.items():
            p.add_argument(flag, dest=key, action=argparse.BooleanOptionalAction,
                           default=argparse.SUPPRESS)
    p = sub.add_parser("plot", help="draw sweep CSVs into an SVG")
    p.add_argument("csv", nargs="+")
    p.add_argument("--labels", help="comma-separated, one per CSV (default: file names)")
    p.add_argument("--out", required=True)
    p.add_argument("--x-col", default="snr_db")
    p.add_argument("--y-col", default="ber")
    p.add_argument("--group-col")
    return parser


def _config(args) -> sim.ExperimentConfig:
    values = {}
    if args.config:
        values.update(sim.parse_config_file(args.config))
    keys = [k for k, _ in _FLAGS.values()] + list(_BOOL_FLAGS.values())
    values.update({k: getattr(args, k) for k in keys if hasattr(args, k)})
    values["experiment"] = args.command
    return sim.config_from_mapping(values).validate()


def _write(text: str, path) -> None:
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run(args) -> None:
    if args.command == "plot":
        labels = args.labels.split(",") if args.labels else list(args.csv)
        emit_plot(args.csv, labels, args.out, x_col=args.x_col, y_col=args.y_col,
                  group_col=args.group_col,
                  y_label="P_e" if args.y_col == "pe" else args.y_col.upper())
        return
    cfg = _config(args)
    if cfg.experiment in sim.BER_EXPERIMENTS:
        _write(sim.format_csv(sim.run_experiment(cfg)), cfg.out)
    elif cfg.experiment == "construct":
        if not cfg.qs_out:
            raise sim.ConfigError("construct needs --qs-out")
        qs = sim.run_construct(cfg)
        save_order(qs, cfg.qs_out)
        print(f"wrote Q_s (N={qs.N}, engine={qs.engine}, snr_db={qs.snr_db:.4f}) to {cfg.qs_out}")
    elif cfg.experiment == "design-snr":
        g = design_snr(cfg.rate)
        cap = float(biawgn_capacity(g.amplitude))
        _write(f"rate,design_snr_db,capacity\n{cfg.rate:.6g},{g.gamma_db:.6g},{cap:.6g}\n", cfg.out)
    elif cfg.experiment == "asymptotic":
        _write(sim.format_asymptotic_csv(sim.run_asymptotic(cfg)), cfg.out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        _run(args)
    except (QsParseError, CsvParseError, OSError) as exc:
        print(f"polarlink: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"polarlink: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
