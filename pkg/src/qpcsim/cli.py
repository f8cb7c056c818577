"""Command line front end.

Subcommands run single protocol executions, estimate CHSH statistics,
produce abort-distribution and leakage curves, and measure attack
scenarios.  All commands take an explicit ``--seed``; identical
configuration and seed reproduce byte-identical output.

Exit codes: 0 for completed runs (equal or not_equal), 1 for violated
result bounds, 2 when a run ends in cheat_detected, 64 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .adversary import (BernoulliOracle, Cheating, Honest, LocalBoxReadout,
                        MisorderedPicker, QUANTUM_GUESS_PROBABILITY,
                        effective_guess_probability)
from .analysis import (LeakageExperiment, abort_distribution, expected_leakage,
                       iter_constrained_tables, mixture_expected_chsh,
                       monte_carlo_leakage, fixed_output_c1)
from .bits import BitString
from .boxes import SIDE_A, SIDE_B, SupplierStrategy, make_supply
from .protocol import (CheckPolicy, Interleaved, Sequential, estimate_chsh,
                       required_supply, run_check_round, run_dd_protocol,
                       run_di_protocol)
from .rng import Rng
from .stats import binomial_stderr
from .svgplot import Series, render_plot

EXIT_OK = 0
EXIT_BOUND_VIOLATION = 1
EXIT_CHEAT_DETECTED = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _resolve_out(path):
    if path is None or path == "-":
        return None
    base = os.environ.get("QPCSIM_OUTPUT_DIR")
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    return path


def _write_text(path, text):
    resolved = _resolve_out(path)
    if resolved is None:
        sys.stdout.write(text)
        return
    parent = os.path.dirname(resolved)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(resolved, "w") as fh:
        fh.write(text)


def _parse_schedule(text):
    if text == "sequential":
        return Sequential()
    if text == "interleaved":
        return Interleaved()
    if text.startswith("interleaved:"):
        try:
            return Interleaved(int(text.split(":", 1)[1]))
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(
        f"schedule must be 'sequential' or 'interleaved[:MEAN]', got {text!r}")


def _parse_bits(text):
    try:
        return BitString.from_text(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _csv(rows, header):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v)
                              for v in row))
    return "\n".join(lines) + "\n"


def _policy_from(args):
    return CheckPolicy(c_min=args.c_min, match_tolerance=args.match_tolerance,
                       check_rounds_per_party=args.check_rounds)


def _add_policy_options(sub):
    sub.add_argument("--c-min", type=float, default=2.5,
                     help="CHSH acceptance threshold (default 2.5)")
    sub.add_argument("--match-tolerance", type=float, default=0.0,
                     help="allowed same-input mismatch rate (default 0)")
    sub.add_argument("--check-rounds", type=int, default=2000,
                     help="sequential check rounds per party (default 2000)")


# ---------------------------------------------------------------------------

def _usage_error(message):
    print(f"error: {message}", file=sys.stderr)
    return SystemExit(EXIT_USAGE)


def cmd_compare(args):
    rng = Rng(args.seed)
    if (args.a is None) != (args.b is None):
        raise _usage_error("--a and --b must be given together")
    if args.a is not None:
        a, b = args.a, args.b
        if a.n != b.n:
            raise _usage_error("--a and --b must have equal length")
    else:
        a = BitString.random(args.n, rng.child(1))
        b = a if args.equal else BitString.random(args.n, rng.child(2))
    policy = _policy_from(args)
    if args.dd:
        verdict, transcript = run_dd_protocol(a, b, args.key, rng=rng.child(3))
    else:
        schedule = args.schedule
        supplier = SupplierStrategy(fraction_local=args.fraction_local)
        supply = make_supply(supplier, required_supply(schedule, policy, a.n),
                             rng.child(4))
        verdict, transcript = run_di_protocol(a, b, args.key, supply, schedule,
                                              policy, rng=rng.child(5))
    _write_text(args.out, transcript.json_str(indent=2) + "\n")
    line = f"verdict: {verdict.outcome}"
    if verdict.abort_round is not None:
        line += f" (round {verdict.abort_round})"
    if verdict.reason is not None:
        line += f" ({verdict.reason})"
    print(line)
    return EXIT_CHEAT_DETECTED if verdict.is_cheat_detected else EXIT_OK


def cmd_abort_dist(args):
    dist = abort_distribution(args.n, args.p_guess)
    rows = [[m, p] for m, p in dist.points]
    header = ["m", "p_abort"]
    mc_points = []
    if args.trials:
        exp = LeakageExperiment(n=args.n, guess_method=BernoulliOracle(args.p_guess))
        report = monte_carlo_leakage(exp, args.trials, Rng(args.seed),
                                     analytic_p_guess=args.p_guess)
        header += ["mc_estimate", "mc_stderr"]
        for row in rows:
            freq = report.abort_frequency(row[0])
            row += [freq, binomial_stderr(freq, args.trials)]
            mc_points.append((row[0], freq))
    if args.format == "csv":
        _write_text(args.out, _csv(rows, header))
    elif args.format == "json":
        payload = {"n": args.n, "p_guess": args.p_guess,
                   "points": [dict(zip(header, row)) for row in rows],
                   "completion_probability": dist.completion_probability}
        _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    else:
        series = [Series("analytic", [(m, p) for m, p in dist.points])]
        if mc_points:
            series.append(Series("monte carlo", mc_points, mode="scatter"))
        _write_text(args.out, render_plot(
            series, title=f"Abort-round distribution (p_guess={args.p_guess:g})",
            x_label="abort round m", y_label="probability"))
    return EXIT_OK


_LEAKAGE_BOUNDS = [
    (0.91, 23.0),
    (0.99, 200.0),
    (QUANTUM_GUESS_PROBABILITY, 14.0),
]


def _curve_lengths(n_max):
    ns = list(range(1, min(n_max, 256) + 1))
    n = 256
    while n < n_max:
        n = min(n * 2, n_max)
        ns.append(n)
    return ns


def cmd_leakage_curve(args):
    p_values = list(args.p_guess) if args.p_guess else [0.91, 0.99]
    if args.dd_reference:
        p_values.append(QUANTUM_GUESS_PROBABILITY)
    lengths = _curve_lengths(args.n_max)
    rows = []
    series = []
    violations = []
    for p in p_values:
        name = f"p_guess={p:g}"
        points = [(n, expected_leakage(n, p)) for n in lengths]
        series.append(Series(name, points))
        rows += [[n, v, name] for n, v in points]
        for bound_p, bound in _LEAKAGE_BOUNDS:
            if abs(p - bound_p) < 1e-9:
                worst = max(v for _, v in points)
                if worst > bound:
                    violations.append(f"{name}: max {worst} exceeds {bound} bits")
    if args.format == "csv":
        _write_text(args.out, _csv(rows, ["n", "i_a_bits", "series"]))
    elif args.format == "json":
        payload = [{"series": s.name, "points": s.points} for s in series]
        _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    else:
        _write_text(args.out, render_plot(
            series, title="Expected revealed rounds vs string length",
            x_label="n", y_label="revealed bits"))
    for message in violations:
        print(f"bound violated: {message}", file=sys.stderr)
    return EXIT_BOUND_VIOLATION if violations else EXIT_OK


def cmd_chsh(args):
    rng = Rng(args.seed)
    supplier = SupplierStrategy(fraction_local=args.fraction_local,
                                table_rule=args.table_rule)
    supply = make_supply(supplier, args.rounds, rng)
    announce_rng = rng.child(1)
    records = [run_check_round(pair, SIDE_A if announce_rng.bit() else SIDE_B,
                               announce_rng)
               for pair in supply.pairs]
    est = estimate_chsh(records)
    if args.format == "csv":
        rows = [[f"{k1}:{k2}", n, c, se]
                for (k1, k2), (n, c, se) in sorted(est.correlators.items())]
        rows.append(["c1", sum(n for n, _, _ in est.correlators.values()),
                     est.c1, est.stderr_c1])
        rows.append(["c2", sum(n for n, _, _ in est.correlators.values()),
                     est.c2, est.stderr_c2])
        _write_text(args.out, _csv(rows, ["cell", "n", "value", "stderr"]))
    else:
        payload = est.to_json()
        payload["rounds"] = args.rounds
        payload["fraction_local"] = args.fraction_local
        payload["expected"] = mixture_expected_chsh(args.fraction_local) \
            if args.table_rule == "shared_constant" else None
        _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def cmd_local_bound(args):
    worst = -10.0
    count = 0
    for table_a, table_b in iter_constrained_tables():
        worst = max(worst, fixed_output_c1(table_a, table_b))
        count += 1
    rng = Rng(args.seed)
    supply = make_supply(SupplierStrategy(fraction_local=1.0), args.rounds, rng)
    announce_rng = rng.child(1)
    records = [run_check_round(pair, SIDE_A if announce_rng.bit() else SIDE_B,
                               announce_rng)
               for pair in supply.pairs]
    est = estimate_chsh(records)
    payload = {
        "tables_checked": count,
        "analytic_max_c1": worst,
        "within_local_bound": worst <= 2.0,
        "empirical_rounds": args.rounds,
        "empirical_c1": est.c1,
        "empirical_stderr_c1": est.stderr_c1,
    }
    _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    print(f"analytic max C1 over fixed-output tables: {worst:g} (<= 2)")
    print(f"empirical C1 from all-rigged supply: {est.c1:.4f} "
          f"+- {est.stderr_c1:.4f}")
    return EXIT_OK if worst <= 2.0 else EXIT_BOUND_VIOLATION


# ---------------------------------------------------------------------------
# attack scenarios

def _attack_run(attack, schedule, policy, n, fraction_local, rng, record):
    activation = 2 * (2 * policy.check_rounds_per_party)
    if attack == "timer":
        a = BitString.random(n, rng)
        b = a
        supplier = SupplierStrategy(special_all="timer", activation_index=activation)
        strat_a, strat_b = Honest(), Honest()
    elif attack == "remote":
        a = BitString.random(n, rng)
        b = a
        supplier = SupplierStrategy(special_all="remote")
        strat_a, strat_b = MisorderedPicker(), Honest()
    elif attack == "mixture":
        a = BitString.random(n, rng)
        b = BitString.random(n, rng)
        supplier = SupplierStrategy(fraction_local=fraction_local)
        strat_a, strat_b = None, Honest()
    else:
        raise ValueError(f"unknown attack {attack!r}")
    supply = make_supply(supplier, required_supply(schedule, policy, n), rng)
    if attack == "mixture":
        strat_a = Cheating(LocalBoxReadout(), supply.ledger)
    verdict, transcript = run_di_protocol(a, b, 0, supply, schedule, policy,
                                          strat_a, strat_b, rng.child(1),
                                          record_transcript=record)
    return verdict, transcript, supply


def _predictable_compare_stats(transcript, supply):
    """From one recorded run: how many compare picks the supplier can read."""
    total = 0
    predictable = 0
    correct = 0
    for event in transcript.events:
        if event["type"] != "compare":
            continue
        total += 1
        pair = supply.pairs[event["pair"]]
        entry = supply.ledger.get(event["pair"])
        if entry is None or not pair.in_table_mode:
            continue
        owner_table = entry.table_a if event["owner"] == SIDE_A else entry.table_b
        if owner_table[0] != owner_table[1]:
            continue
        predictable += 1
        predicted_bit = 0 if owner_table[0] == 1 else 1
        correct += predicted_bit == event["gammaOwner"]
    return {
        "compare_rounds": total,
        "predictable_fraction": predictable / total if total else 0.0,
        "ledger_guess_rate_on_predictable":
            correct / predictable if predictable else None,
    }


def _attack_schedule_report(attack, schedule, args, seed_base):
    policy = _policy_from(args)
    verdicts = {}
    detected = 0
    revealed = []
    c1_values = []
    for t in range(args.trials):
        rng = Rng(seed_base + t)
        verdict, transcript, _ = _attack_run(
            attack, schedule, policy, args.n, args.fraction_local, rng, False)
        label = verdict.reason or verdict.outcome
        verdicts[label] = verdicts.get(label, 0) + 1
        detected += verdict.is_cheat_detected
        if verdict.is_equal:
            revealed.append(args.n)
        elif verdict.is_not_equal:
            revealed.append(verdict.abort_round)
        if transcript.chsh is not None:
            c1_values.append(transcript.chsh["c1"])
    report = {
        "trials": args.trials,
        "detection_rate": detected / args.trials,
        "verdicts": dict(sorted(verdicts.items())),
        "mean_revealed_rounds": (sum(revealed) / len(revealed)
                                 if revealed else None),
        "mean_c1": sum(c1_values) / len(c1_values) if c1_values else None,
    }
    example_rng = Rng(seed_base + args.trials)
    verdict, transcript, supply = _attack_run(
        attack, schedule, policy, args.n, args.fraction_local, example_rng, True)
    report["example"] = _predictable_compare_stats(transcript, supply)
    report["example"]["verdict"] = verdict.to_json()
    return report


def cmd_attack(args):
    if args.n is None:
        args.n = 50 if args.attack == "mixture" else 64
    if args.trials is None:
        args.trials = {"timer": 40, "remote": 10, "mixture": 40}[args.attack]
    payload = {
        "attack": args.attack,
        "n": args.n,
        "policy": {"c_min": args.c_min, "match_tolerance": args.match_tolerance,
                   "check_rounds_per_party": args.check_rounds},
        "sequential": _attack_schedule_report(
            args.attack, Sequential(), args, args.seed),
        "interleaved": _attack_schedule_report(
            args.attack, Interleaved(args.mean_gap), args, args.seed + 10_000_000),
    }
    if args.attack == "mixture":
        p_eff = effective_guess_probability(args.fraction_local,
                                            QUANTUM_GUESS_PROBABILITY)
        payload["effective_p_guess"] = p_eff
        payload["analytic_mean_revealed"] = expected_leakage(args.n, p_eff)
        payload["expected_chsh"] = mixture_expected_chsh(args.fraction_local)
    _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="qpcsim",
                     description="Two-party quantum private comparison simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="run one comparison")
    engine = p.add_mutually_exclusive_group()
    engine.add_argument("--dd", action="store_true",
                        help="prepare-and-measure engine")
    engine.add_argument("--di", action="store_true",
                        help="box-pair engine (default)")
    p.add_argument("--a", type=_parse_bits, help="Alice's bit string")
    p.add_argument("--b", type=_parse_bits, help="Bob's bit string")
    p.add_argument("--n", type=int, default=8,
                   help="random string length when --a/--b absent")
    p.add_argument("--equal", action="store_true",
                   help="draw b equal to a instead of independently")
    p.add_argument("--key", type=int, default=0, help="shared hash key")
    p.add_argument("--schedule", type=_parse_schedule, default=Sequential())
    p.add_argument("--fraction-local", type=float, default=0.0,
                   help="fraction of rigged pairs in the supply")
    _add_policy_options(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="transcript.json",
                   help="transcript path ('-' for stdout)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("abort-dist", help="abort-round distribution")
    p.add_argument("--p-guess", type=float, default=0.91)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--trials", type=int, default=0,
                   help="Monte Carlo overlay trials (0 = analytic only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    p.set_defaults(func=cmd_abort_dist)

    p = sub.add_parser("leakage-curve", help="expected revealed bits vs length")
    p.add_argument("--p-guess", type=float, action="append",
                   help="guessing probability (repeatable; default 0.91, 0.99)")
    p.add_argument("--n-max", type=int, default=1000)
    p.add_argument("--dd-reference", action=argparse.BooleanOptionalAction,
                   default=True,
                   help="include the cos^2(pi/8) prepare-and-measure series")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    p.set_defaults(func=cmd_leakage_curve)

    p = sub.add_parser("chsh", help="estimate CHSH statistics of a supply")
    p.add_argument("--fraction-local", type=float, default=0.0)
    p.add_argument("--table-rule", choices=["shared_constant", "independent"],
                   default="shared_constant")
    p.add_argument("--rounds", type=int, default=64000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("local-bound",
                       help="fixed-output supplies cannot pass the CHSH check")
    p.add_argument("--rounds", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_local_bound)

    p = sub.add_parser("attack", help="measure an attack scenario")
    p.add_argument("--attack", choices=["timer", "remote", "mixture"],
                   required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--fraction-local", type=float, default=0.39)
    p.add_argument("--mean-gap", type=int,
                   default=Interleaved().mean_checks_between_compares,
                   help="interleaved checks per compare round")
    _add_policy_options(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_attack)

    return parser


def main(argv=None):
    """Entry point; always returns an exit code (never raises)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
