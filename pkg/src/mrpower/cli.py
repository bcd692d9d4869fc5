"""Command-line front end.

Subcommands:
  power    compute cohering powers of a channel file
  convert  build the conversion channel and print its equality certificate
  verify   run randomized verification suites and emit JSON/CSV reports

Exit codes: 0 success; 1 suite failure (verify); 2 parse/flag errors;
3 invalid channel input; 4 conversion certificate gap above tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ToolkitError
from .powers import (
    conversion_channel,
    conversion_ent_lower_bound,
    measurement_cohering_power,
    state_cohering_power,
)
from .serialize import SchemaError, load_channel, save_channel
from .suites import SUITE_NAMES, VerificationReport, run_suite

CONVERT_GAP_TOL = 1e-9

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_PARSE = 2
EXIT_INVALID_CHANNEL = 3
EXIT_GAP = 4


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _sig12(value: float) -> float:
    """Round to 12 significant digits for stable JSON output."""
    return float(f"{value:.12g}")


def _load_square_channel(path: str):
    channel = load_channel(path)
    if channel.dim_in != channel.dim_out:
        raise ToolkitError(
            f"square CPTP channel required (dim_in {channel.dim_in} != dim_out {channel.dim_out})"
        )
    return channel


def _cmd_power(args) -> int:
    try:
        channel = _load_square_channel(args.channel_file)
    except SchemaError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except ToolkitError as exc:
        return _fail(EXIT_INVALID_CHANNEL, str(exc))
    out: dict[str, float] = {}
    if args.what in ("c", "both"):
        out["c"] = _sig12(measurement_cohering_power(channel))
    if args.what in ("cg", "both"):
        out["cg"] = _sig12(state_cohering_power(channel))
    print(json.dumps(out))
    return EXIT_OK


def _cmd_convert(args) -> int:
    try:
        channel = _load_square_channel(args.channel_file)
    except SchemaError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except ToolkitError as exc:
        return _fail(EXIT_INVALID_CHANNEL, str(exc))
    try:
        certificate = conversion_ent_lower_bound(channel)
        converted = conversion_channel(channel)
    except ToolkitError as exc:
        return _fail(EXIT_INVALID_CHANNEL, str(exc))
    save_channel(args.out, converted)
    print(
        json.dumps(
            {
                "cohering_power": _sig12(certificate.cohering_power),
                "avg_ere_lower_bound": _sig12(certificate.avg_ere_lower_bound),
                "gap": _sig12(certificate.gap),
            }
        )
    )
    if certificate.gap > CONVERT_GAP_TOL:
        return _fail(
            EXIT_GAP,
            f"certificate gap {certificate.gap:.3e} exceeds {CONVERT_GAP_TOL} "
            "(internal-consistency failure)",
        )
    return EXIT_OK


def _reports_to_csv(reports: list[VerificationReport]) -> str:
    lines = ["suite,dim,trials,master_seed,tolerance,trial,violation"]
    for report in reports:
        for trial, violation in enumerate(report.trial_values):
            lines.append(
                f"{report.suite},{report.dim},{report.trials},{report.master_seed},"
                f"{report.tolerance!r},{trial},{violation!r}"
            )
    return "\n".join(lines) + "\n"


def _summary_line(report: VerificationReport) -> str:
    status = "PASS" if report.passed else "FAIL"
    return (
        f"{report.suite}: {status} dim={report.dim} trials={report.trials} "
        f"seed={report.master_seed} max_violation={report.max_violation:.3e} "
        f"tol={report.tolerance:.1e} failures={len(report.failures)} "
        f"({report.wall_time_ms} ms)"
    )


def _cmd_verify(args) -> int:
    if args.dim < 2:
        return _fail(EXIT_PARSE, f"--dim must be at least 2, got {args.dim}")
    if args.trials < 1:
        return _fail(EXIT_PARSE, f"--trials must be at least 1, got {args.trials}")
    if args.tol is not None and args.tol <= 0:
        return _fail(EXIT_PARSE, f"--tol must be positive, got {args.tol}")
    if args.suite == "cm_oracle" and args.dim != 2:
        return _fail(EXIT_PARSE, "cm_oracle is defined at dimension 2 only")
    if args.dim > 6 and args.suite in ("all", "conversion_equality", "thm3_proxy"):
        return _fail(EXIT_PARSE, "conversion suites are capped at dimension 6")

    names = list(SUITE_NAMES) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        # the oracle suite only exists at d = 2; keep `all` runnable at any dim
        dim = 2 if (name == "cm_oracle" and args.suite == "all") else args.dim
        report = run_suite(name, dim=dim, trials=args.trials, seed=args.seed, tol=args.tol)
        print(_summary_line(report))
        reports.append(report)

    if args.out:
        if args.format == "csv":
            payload = _reports_to_csv(reports)
        else:
            body = (
                reports[0].to_dict()
                if len(reports) == 1
                else [r.to_dict() for r in reports]
            )
            payload = json.dumps(body, indent=2) + "\n"
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload)

    return EXIT_OK if all(r.passed for r in reports) else EXIT_SUITE_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrpower",
        description=(
            "Cohering powers of quantum channels, the coherence-to-entanglement "
            "conversion construction, and randomized verification suites."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_power = sub.add_parser("power", help="compute cohering powers of a channel file")
    p_power.add_argument("channel_file", help="JSON channel file")
    p_power.add_argument(
        "--what", choices=("c", "cg", "both"), default="both",
        help="measurement-cohering power (c), state-cohering power (cg), or both",
    )
    p_power.set_defaults(handler=_cmd_power)

    p_convert = sub.add_parser(
        "convert", help="write the conversion channel and print its certificate"
    )
    p_convert.add_argument("channel_file", help="JSON channel file")
    p_convert.add_argument("--out", required=True, help="output path for the conversion channel")
    p_convert.set_defaults(handler=_cmd_convert)

    p_verify = sub.add_parser("verify", help="run randomized verification suites")
    p_verify.add_argument(
        "--suite", choices=SUITE_NAMES + ("all",), default="all",
        help="suite name or 'all'",
    )
    p_verify.add_argument("--dim", type=int, default=2, help="system dimension (default 2)")
    p_verify.add_argument("--trials", type=int, default=100, help="trials per suite (default 100)")
    p_verify.add_argument("--seed", type=int, default=42, help="master seed (default 42)")
    p_verify.add_argument(
        "--tol", type=float, default=None,
        help="override the per-suite default tolerance",
    )
    p_verify.add_argument("--out", default=None, help="report output path")
    p_verify.add_argument(
        "--format", choices=("json", "csv"), default="json",
        help="report format for --out (default json)",
    )
    p_verify.set_defaults(handler=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
