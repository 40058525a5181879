"""Command line entry points for the sweeps and design calculators."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bounds import optimal_rounds, optimal_threshold, rounds_loss_bound, threshold_loss_bound
from .channel import ChannelModel, swiss_hitomi_rates
from .exact import brute_force_optimal
from .experiments import (
    DEFAULT_SEED,
    ExperimentSpec,
    LossParameters,
    ThresholdStrategy,
    emit_csv,
    figure1a_sweep,
    figure1b_sweep,
    figure3_comparison,
    threshold_duel,
)
from .loss import GapCollapseError
from .noise import default_transparent_code, estimate_noise, high_probability_rates, simulate_coded_phase


def _add_loss_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--la", type=float, default=10.0, help="false-accept loss (default 10)")
    p.add_argument("--lu", type=float, default=1.0, help="false-reject loss (default 1)")
    p.add_argument("--lb", type=float, default=1e-2, help="per-round loss (default 0.01)")


def _losses(args: argparse.Namespace) -> LossParameters:
    return LossParameters(false_accept=args.la, false_reject=args.lu, per_round=args.lb)


def _cmd_bounds(args: argparse.Namespace) -> int:
    params = _losses(args)
    rates = swiss_hitomi_rates(ChannelModel(args.omega))
    choice = optimal_rounds(params, rates)
    n = args.n if args.n is not None else choice.value
    thr = optimal_threshold(params, rates, n)
    print(f"omega             {args.omega:g}")
    print(f"attacker_floor    {rates.attacker_floor:.10g}")
    print(f"user_ceiling      {rates.user_ceiling:.10g}")
    print(f"gap               {rates.gap:.10g}")
    print(f"n_hat             {choice.value} (real {choice.real:.6f})")
    print(f"tau_hat(n={n})    {thr.value:.10g}" + (" [clamped]" if thr.clamped else ""))
    print(f"elb1(n={n})       {threshold_loss_bound(params, rates, n):.10g}")
    print(f"elb2              {rounds_loss_bound(params, rates):.10g}")
    return 0


def _cmd_exact(args: argparse.Namespace) -> int:
    params = _losses(args)
    rates = swiss_hitomi_rates(ChannelModel(args.omega))
    best = brute_force_optimal(params, rates, args.n)
    print(f"n_star            {best.rounds}")
    print(f"tau_star          {best.threshold}")
    print(f"worst_loss        {best.worst_loss:.10g}")
    return 0


def _cmd_estimate_noise(args: argparse.Namespace) -> int:
    code = default_transparent_code(args.k)
    rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((args.seed, 3, 0)))
    )
    theta, hopeless = simulate_coded_phase(ChannelModel(args.omega), code, rng)
    print(f"observed_errors   {theta}")
    print(f"decode_hopeless   {hopeless}")
    est = estimate_noise(theta, args.k, args.delta)
    print(f"omega_hat         {est.point_estimate:.10g}")
    print(f"half_width        {est.half_width:.10g}")
    print(
        f"interval          [{max(est.point_estimate - est.half_width, 0.0):.10g}, "
        f"{min(est.point_estimate + est.half_width, 1.0):.10g}]"
    )
    try:
        rates = high_probability_rates(est)
        print(f"hp_attacker_floor {rates.attacker_floor:.10g}")
        print(f"hp_user_ceiling   {rates.user_ceiling:.10g}")
    except GapCollapseError as exc:
        print(f"hp_rates          unavailable ({exc})")
    return 0


def _sweep_spec(args: argparse.Namespace, kind: str) -> ExperimentSpec:
    overrides: dict = {"master_seed": args.seed}
    if getattr(args, "la", None) is not None:
        overrides["params"] = _losses(args)
    if getattr(args, "omega", None):
        overrides["noise_grid"] = tuple(args.omega)
    if kind == "fig1b" and args.n is not None:
        overrides["n_max"] = args.n
    if kind in ("fig3", "duel") and args.trials is not None:
        overrides["trials"] = args.trials
    if kind == "fig3":
        if args.k is not None:
            overrides["codeword_length"] = args.k
        if args.strategy != "all":
            overrides["threshold_strategies"] = (ThresholdStrategy(args.strategy),)
    builder = {
        "fig1a": ExperimentSpec.figure1a,
        "fig1b": ExperimentSpec.figure1b,
        "fig3": ExperimentSpec.figure3,
        "duel": ExperimentSpec.duel,
    }[kind]
    seed = overrides.pop("master_seed")
    return builder(seed=seed, **overrides)


def _cmd_sweep(args: argparse.Namespace, kind: str) -> int:
    spec = _sweep_spec(args, kind)
    runner = {
        "fig1a": figure1a_sweep,
        "fig1b": figure1b_sweep,
        "fig3": figure3_comparison,
        "duel": threshold_duel,
    }[kind]
    rows = runner(spec)
    out = args.out if args.out else f"{kind}.csv"
    emit_csv(rows, out)
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threshauth",
        description=(
            "Design calculators and figure sweeps for thresholded "
            "challenge-response authentication over noisy channels."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="closed-form threshold, rounds, and bounds")
    _add_loss_flags(p)
    p.add_argument("--omega", type=float, required=True, help="channel flip probability")
    p.add_argument("--n", type=int, default=None, help="evaluate threshold at this n")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("exact", help="brute-force optimal rounds and threshold")
    _add_loss_flags(p)
    p.add_argument("--omega", type=float, required=True, help="channel flip probability")
    p.add_argument("--n", type=int, default=512, help="search rounds up to n (default 512)")
    p.set_defaults(func=_cmd_exact)

    for kind, desc in (
        ("fig1a", "bound vs exact worst-case loss over round counts"),
        ("fig1b", "brute-force optimum vs closed-form design over noise"),
        ("fig3", "noise-estimation strategy comparison with Monte Carlo"),
        ("duel", "finite-sample vs asymptotic threshold at small designs"),
    ):
        p = sub.add_parser(kind, help=desc)
        _add_loss_flags(p)
        p.add_argument(
            "--omega", type=float, action="append", default=None,
            help="noise grid point, repeatable (default: built-in grid)",
        )
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed")
        p.add_argument("--out", type=str, default=None, help="output CSV path")
        if kind == "fig1b":
            p.add_argument("--n", type=int, default=None, help="brute-force search limit")
        if kind in ("fig3", "duel"):
            p.add_argument("--trials", type=int, default=None, help="Monte Carlo trials per identity")
        if kind == "fig3":
            p.add_argument("--k", type=int, default=None, help="codeword length (default 1024)")
            p.add_argument(
                "--strategy", type=str, default="all",
                choices=["all", "finite-sample", "asymptotic", "bayes"],
                help="restrict the threshold strategy (default: all configured)",
            )
        p.set_defaults(func=lambda a, kind=kind: _cmd_sweep(a, kind))

    p = sub.add_parser("estimate-noise", help="simulate a coded phase and estimate the noise")
    p.add_argument("--omega", type=float, required=True, help="channel flip probability")
    p.add_argument("--k", type=int, default=1024, help="codeword length (default 1024)")
    p.add_argument("--delta", type=float, default=0.01, help="confidence parameter (default 0.01)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed")
    p.set_defaults(func=_cmd_estimate_noise)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
