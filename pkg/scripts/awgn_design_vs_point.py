"""BER over AWGN, N=1024, R=0.36: design-SNR vs point-by-point construction.

Writes one CSV per curve and awgn_design_vs_point.svg into --out-dir.
"""

import argparse
from pathlib import Path

from polarlink import ExperimentConfig, emit_csv, emit_plot, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results/awgn")
    ap.add_argument("--blocks", type=int, default=100_000)
    ap.add_argument("--max-bit-errors", type=int, default=2000)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    paths, labels = [], []
    for systematic in (False, True):
        for mode in ("point", "design-snr"):
            cfg = ExperimentConfig(experiment="awgn-ber", snr_start=-1.0, snr_stop=2.5,
                                   snr_step=0.5, construction=mode, systematic=systematic,
                                   blocks=args.blocks, max_bit_errors=args.max_bit_errors,
                                   workers=args.workers)
            name = f"{'sys' if systematic else 'nonsys'}_{mode}"
            emit_csv(run_experiment(cfg), out / f"{name}.csv")
            paths.append(out / f"{name}.csv")
            labels.append(name)
            print("done", name)
    emit_plot(paths, labels, out / "awgn_design_vs_point.svg")


if __name__ == "__main__":
    main()
