"""Command-line interface of the benchmark harness.

Usage::

    bench <experiment> [--config FILE] [--seed N] [--trials N] [--out DIR]
                       [--methods L,OGLR,OGL] [--grouping pc4|pc2]
                       [--image FILE] [--workers N] [--timing]
    bench kernels [--repeats N]

Experiments: cs_image, deblur_image, noise_sweep_2d, noise_sweep_1d,
measurement_sweep_1d, penalty_ratio.  Config-file keys mirror the
ExperimentConfig fields; command-line options win over the file.
"""

import argparse
import logging
import sys

from .config import EXPERIMENTS, build_config, parse_config_file
from .experiments import run_experiment, write_outputs
from .kernelbench import run_kernel_bench


def _experiment_parser(sub, name):
    p = sub.add_parser(name, help=f"run the {name} experiment")
    p.add_argument("--config", help="plain key=value config file")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--trials", type=int, help="trial count")
    p.add_argument("--out", help="output directory")
    p.add_argument("--methods", help="comma-separated subset of L,OGLR,OGL")
    p.add_argument("--grouping", choices=("pc4", "pc2"), help="grouping scheme")
    p.add_argument("--image", help="input PGM path (image experiments)")
    p.add_argument("--workers", type=int, help="parallel trial workers")
    p.add_argument(
        "--timing",
        action="store_true",
        default=None,
        help="record wall seconds in results.csv (breaks byte reproducibility)",
    )
    return p


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bench", description="wavelet group-sparsity reconstruction benchmarks"
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        _experiment_parser(sub, name)
    kp = sub.add_parser("kernels", help="compare compiled and python kernel backends")
    kp.add_argument("--repeats", type=int, default=5)
    kp.add_argument("--n1d", type=int, default=4096)
    kp.add_argument("--side", type=int, default=128)
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)

    if args.experiment == "kernels":
        _, lines = run_kernel_bench(n1d=args.n1d, side=args.side, repeats=args.repeats)
        print("\n".join(lines))
        return 0

    file_values = parse_config_file(args.config) if args.config else {}
    overrides = {}
    for key in ("seed", "trials", "out", "methods", "grouping", "image", "workers", "timing"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    cfg = build_config(args.experiment, file_values, overrides)

    result = run_experiment(cfg)
    written = write_outputs(result, cfg)
    print("\n".join(result.lines))
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
