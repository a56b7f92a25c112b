"""Asymptotic block error rate vs rate for N=1024 at several SNRs
(capacity from the E|h| upper bound, half-normal gains)."""

import argparse
from pathlib import Path

from polarlink import ExperimentConfig, emit_plot
from polarlink.sim import format_asymptotic_csv, run_asymptotic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results/asymptotic")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    cfg = ExperimentConfig(experiment="asymptotic", snr_start=0.0, snr_stop=20.0, snr_step=4.0)
    csv = out / "asymptotic.csv"
    csv.write_text(format_asymptotic_csv(run_asymptotic(cfg)))
    emit_plot([csv], ["N=1024"], out / "asymptotic.svg", x_col="rate", y_col="pe",
              group_col="snr_db", x_label="rate R", y_label="P_e")


if __name__ == "__main__":
    main()
