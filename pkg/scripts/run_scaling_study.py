#!/usr/bin/env python3
"""Reproduce the block-energy scaling study end to end.

Runs the free-fermion ladder plus the two spin-chain benchmark grids,
writes the scans as CSV, then fits every finite-size form and prints a
summary against the closed-form targets:

* bound energy vs entropy: Q_A * N = (6/pi) * S_A^2
* bound-energy offset: Q_A = log^2(gamma N) / (6 pi N) with log gamma ~ 2.3
* entropy growth: S_A(N/2) = (1/6) log N + const
* shared three-series fit of deltaE, W, Q for each spin chain

Usage:
    python3 scripts/run_scaling_study.py --out-dir results
    python3 scripts/run_scaling_study.py --quick          # small grids
    python3 scripts/run_scaling_study.py --plot           # also write PNG
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from ergochain import (
    ChainSpec,
    Series,
    SpinModel,
    block_energies,
    chain_state,
    decomposition,
    fit_log_gamma,
    linear_fit,
    records,
    shared_fit,
)

FF_LADDER = (64, 128, 256, 512, 1024, 2048, 4096)
FF_LADDER_QUICK = (64, 128, 256, 512)
SPIN_GRIDS = {"ising": (6, 8, 10, 12, 14), "heisenberg": (8, 12, 16, 20)}
SPIN_GRIDS_QUICK = {"ising": (6, 8, 10), "heisenberg": (4, 8, 12)}


def scan_freefermion(sizes) -> list[records.ScanRecord]:
    out = []
    for n in sizes:
        start = time.perf_counter()
        spec = ChainSpec(n)
        energy, c = chain_state(spec)
        dec = block_energies(spec, c)
        out.append(records.from_freefermion(energy, dec))
        print(f"  freefermion N={n:<5d} Q*N={dec.q * n:.4f} "
              f"S={dec.s:.4f} [{time.perf_counter() - start:.1f}s]")
    return out


def scan_spin(kind: str, sizes) -> list[records.ScanRecord]:
    out = []
    for n in sizes:
        start = time.perf_counter()
        dec = decomposition(SpinModel(kind, n))
        out.append(records.from_spin(kind, dec))
        print(f"  {kind} N={n:<3d} E={dec.energy:.6f} W={dec.w:.5f} "
              f"Q={dec.q:.5f} chi={dec.chi} [{time.perf_counter() - start:.1f}s]")
    return out


def spin_series(recs) -> list[Series]:
    ns = np.array([r.n for r in recs], dtype=float)
    return [
        Series("deltaE", ns, [r.delta_e for r in recs]),
        Series("W", ns, [r.w for r in recs]),
        Series("Q", ns, [r.q for r in recs]),
    ]


def write_scan(recs, path: Path) -> None:
    path.write_text(records.records_text(recs, "csv"), newline="")
    print(f"  wrote {path} ({len(recs)} records)")


def summarize_freefermion(recs) -> dict:
    ns = np.array([r.n for r in recs], dtype=float)
    qn = np.array([r.q * r.n for r in recs])
    s = np.array([r.s for r in recs])
    slope, _, r2 = linear_fit(s**2, qn)
    ent_slope, _, _ = linear_fit(np.log(ns), s)
    log_gamma, _ = fit_log_gamma(Series("Q", ns, [r.q for r in recs]))
    return {
        "QN-vs-S^2 slope": (slope, 6.0 / math.pi),
        "entropy slope vs log N": (ent_slope, 1.0 / 6.0),
        "log gamma": (log_gamma, 2.3),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=Path("results"),
                        help="directory for the scan CSVs (default: results/)")
    parser.add_argument("--quick", action="store_true",
                        help="small grids for a fast smoke run (~5 s)")
    parser.add_argument("--plot", action="store_true",
                        help="write scaling_study.png next to the CSVs")
    args = parser.parse_args(argv)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    ladder = FF_LADDER_QUICK if args.quick else FF_LADDER
    grids = SPIN_GRIDS_QUICK if args.quick else SPIN_GRIDS

    print("free-fermion ladder")
    ff_recs = scan_freefermion(ladder)
    write_scan(ff_recs, args.out_dir / "freefermion.csv")

    spin_recs = {}
    for kind, sizes in grids.items():
        print(f"{kind} grid")
        spin_recs[kind] = scan_spin(kind, sizes)
        write_scan(spin_recs[kind], args.out_dir / f"{kind}.csv")

    print("\nsummary (value | target)")
    for label, (value, target) in summarize_freefermion(ff_recs).items():
        off = abs(value - target) / abs(target)
        print(f"  {label:<28s} {value:9.4f} | {target:.4f}  ({off:.1%} off)")
    for kind, recs in spin_recs.items():
        fit = shared_fit(spin_series(recs))
        print(f"  {kind} shared fit: alpha = ({fit.alpha1:.4f}, {fit.alpha2:.4f}, "
              f"{fit.alpha3:.4f}, {fit.alpha4:.4f}), residual {fit.residual:.2e}")

    if args.plot:
        plot(ff_recs, spin_recs, args.out_dir / "scaling_study.png")
    return 0


def plot(ff_recs, spin_recs, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6), constrained_layout=True)
    s2 = np.array([r.s**2 for r in ff_recs])
    qn = np.array([r.q * r.n for r in ff_recs])
    ax1.plot(s2, qn, "o", label="free fermions")
    grid = np.linspace(0.0, s2.max() * 1.05, 50)
    ax1.plot(grid, 6.0 / math.pi * grid, "--", label="slope 6/pi")
    ax1.set_xlabel(r"$S_A^2$")
    ax1.set_ylabel(r"$Q_A N$")
    ax1.legend()

    for kind, recs in spin_recs.items():
        lg2 = np.array([math.log(r.n) ** 2 for r in recs])
        ax2.plot(lg2, [r.q * r.n for r in recs], "o-", label=kind)
    ax2.set_xlabel(r"$\log^2 N$")
    ax2.set_ylabel(r"$Q_A N$")
    ax2.legend()

    fig.savefig(path, dpi=150)
    print(f"  wrote {path}")


if __name__ == "__main__":
    sys.exit(main())
