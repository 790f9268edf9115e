"""Command-line interface.

Subcommands cover the full workflow: ``validate`` a table's balance
identities, compute ``intensity`` vectors, ``attribute`` the emission
total to demand or value added, probe inverse stability with ``perturb``,
and ``generate`` synthetic table/emissions pairs. Exit codes are a
contract: 0 success, 1 data or consistency failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .economy import (
    DEFAULT_BALANCE_TOL,
    ZERO_TOTAL_DROP,
    ZERO_TOTAL_ERROR,
    validate_balance,
)
from .errors import FootprintError
from .leontief import (
    NEUMANN_TOL,
    allocation_coefficients,
    attribute_to_demand,
    attribute_to_value_added,
    direct_intensity,
    systemic_intensity,
    technical_coefficients,
    total_intensity,
    total_intensity_neumann,
)
from .reporting import render, sector_map
from .sensitivity import perturb_inverse
from .synthetic import GeneratorConfig, generate_economy
from .tableio import parse_emissions, parse_table, write_emissions, write_table

# Conservation residuals beyond this are treated as a failed attribution.
ATTRIBUTION_RESIDUAL_LIMIT = 1e-8


def _parse_policy_args(args):
    return dict(
        allow_negative_value_added=args.allow_negative_v,
        on_zero_total=ZERO_TOTAL_DROP if args.drop_zero_sectors else ZERO_TOTAL_ERROR,
    )


def _balance_tree(report, sectors) -> dict:
    return {
        "balance": {
            "ok": report.ok,
            "max_residual": report.max_residual,
            "row_residuals": sector_map(sectors, report.row_residuals),
            "col_residuals": sector_map(sectors, report.col_residuals),
        }
    }


def _cmd_validate(args) -> int:
    # Parse with an unbounded balance tolerance so an imbalanced table still
    # comes back as an economy; the report below carries the verdict.
    econ = parse_table(args.table, tol_rel=math.inf, **_parse_policy_args(args))
    report = validate_balance(econ, tol_rel=args.tol)
    sys.stdout.write(render(_balance_tree(report, econ.sectors)))
    return 0 if report.ok else 1


def _cmd_intensity(args) -> int:
    econ = parse_table(args.table, **_parse_policy_args(args))
    account = parse_emissions(args.emissions, econ)
    coefficients = technical_coefficients(econ)
    direct = direct_intensity(econ, account)
    tree = {
        "intensity": {
            "method": args.method,
            "emission_unit": account.emission_unit,
            "money_unit": econ.money_unit,
            "direct": sector_map(econ.sectors, direct.values),
        }
    }
    if args.method == "neumann":
        total, terms = total_intensity_neumann(direct, coefficients, tol=args.tol)
        tree["intensity"]["terms"] = terms
    else:
        total = total_intensity(direct, coefficients)
    tree["intensity"]["total"] = sector_map(econ.sectors, total.values)
    sys.stdout.write(render(tree))
    return 0


def _cmd_attribute(args) -> int:
    econ = parse_table(args.table, **_parse_policy_args(args))
    account = parse_emissions(args.emissions, econ)
    direct = direct_intensity(econ, account)
    if args.basis == "demand":
        total = total_intensity(direct, technical_coefficients(econ))
        report = attribute_to_demand(total, econ.demand, account)
    else:
        systemic = systemic_intensity(direct, allocation_coefficients(econ))
        report = attribute_to_value_added(systemic, econ.value_added, account)
    tree = {
        "attribution": {
            "basis": args.basis,
            "emission_unit": account.emission_unit,
            "per_sector": sector_map(econ.sectors, report.per_sector),
            "total_attributed": report.total_attributed,
            "total_emissions": report.total_emissions,
            "conservation_residual": report.conservation_residual,
        }
    }
    sys.stdout.write(render(tree))
    return 0 if report.conservation_residual <= ATTRIBUTION_RESIDUAL_LIMIT else 1


def _cmd_perturb(args) -> int:
    econ = parse_table(args.table, **_parse_policy_args(args))
    coefficients = technical_coefficients(econ)
    report = perturb_inverse(coefficients, args.epsilon, args.samples, args.seed)
    tree = {
        "perturbation": {
            "epsilon": report.epsilon,
            "samples": report.samples,
            "seed": report.seed,
            "baseline_norm": report.baseline_norm,
            "max_deviation": report.max_deviation,
            "amplification": report.amplification,
            "diverged_count": report.diverged_count,
        }
    }
    sys.stdout.write(render(tree))
    return 0


def _cmd_generate(args) -> int:
    config = GeneratorConfig(n=args.n, seed=args.seed)
    econ, account = generate_economy(config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    table_path = out_dir / "table.csv"
    emissions_path = out_dir / "emissions.csv"
    write_table(econ, table_path)
    write_emissions(account, econ, emissions_path)
    tree = {
        "generate": {
            "n": econ.n,
            "seed": args.seed,
            "table": str(table_path),
            "emissions": str(emissions_path),
        }
    }
    sys.stdout.write(render(tree))
    return 0


def _add_table_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--allow-negative-v", action="store_true",
                        help="accept negative value-added entries")
    parser.add_argument("--drop-zero-sectors", action="store_true",
                        help="drop zero-output sectors instead of failing")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iofootprint",
        description="Footprint attribution on closed-economy transaction tables.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the balance identities of a table")
    p.add_argument("table")
    p.add_argument("--tol", type=float, default=DEFAULT_BALANCE_TOL,
                   help="relative balance tolerance (default %(default)g)")
    _add_table_options(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("intensity", help="compute direct and total intensity")
    p.add_argument("table")
    p.add_argument("emissions")
    p.add_argument("--method", choices=["solve", "neumann"], default="solve",
                   help="linear solve or series accumulation (default %(default)s)")
    p.add_argument("--tol", type=float, default=NEUMANN_TOL,
                   help="series stopping tolerance for --method neumann "
                        "(default %(default)g)")
    _add_table_options(p)
    p.set_defaults(func=_cmd_intensity)

    p = sub.add_parser("attribute",
                       help="attribute the emission total to demand or value added")
    p.add_argument("table")
    p.add_argument("emissions")
    p.add_argument("--basis", choices=["demand", "value-added"], default="demand")
    _add_table_options(p)
    p.set_defaults(func=_cmd_attribute)

    p = sub.add_parser("perturb",
                       help="sample coefficient perturbations and report "
                            "inverse deviation")
    p.add_argument("table")
    p.add_argument("--epsilon", type=float, required=True,
                   help="entrywise perturbation bound")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    _add_table_options(p)
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("generate",
                       help="write a synthetic table and emissions pair")
    p.add_argument("--n", type=int, required=True, help="sector count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_generate)

    return parser


def run_command(argv) -> int:
    """Run one command and return its exit code (0 ok, 1 data, 2 usage)."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exit_:  # argparse exits 2 on usage errors, 0 on --help
        return int(exit_.code or 0)
    try:
        return args.func(args)
    except FootprintError as err:
        sys.stderr.write(f"error.type = {type(err).__name__}\n")
        sys.stderr.write(f"error.message = {err}\n")
        return 1
    except OSError as err:
        sys.stderr.write("error.type = FileError\n")
        sys.stderr.write(f"error.message = {err}\n")
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
