"""Acceptance suite: every release criterion at its pinned tolerance.

Each test prints one ``[acceptance] <criterion>: PASS|FAIL`` line (run
pytest with ``-s`` to see them as they execute) and then asserts, so a
failure is visible both in the line and in the pytest report.
"""

import math
import time

import numpy as np
import pytest

from iofootprint import (
    EmissionAccount,
    GeneratorConfig,
    Truncated,
    allocation_coefficients,
    amplification_curve,
    attribute_to_demand,
    attribute_to_value_added,
    build_economy,
    demand_identity_residual,
    direct_intensity,
    generate_economy,
    parse_emissions,
    parse_table,
    serialize_table,
    systemic_intensity,
    systemic_intensity_from_technical,
    technical_coefficients,
    total_intensity,
    total_intensity_neumann,
)
from iofootprint.cli import run_command


def check(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[acceptance] {name}: {status}{suffix}")
    assert ok, f"{name}{suffix}"


@pytest.fixture(scope="module")
def worked():
    econ = build_economy(
        ["s1", "s2"], [[100.0, 50.0], [30.0, 20.0]], [50.0, 50.0]
    )
    return econ, EmissionAccount([20.0, 10.0], "kt CO2")


def test_criterion_1_demand_conservation(corpus):
    start = time.perf_counter()
    worst = 0.0
    for econ, acct in corpus:
        F = direct_intensity(econ, acct)
        X = total_intensity(F, technical_coefficients(econ))
        report = attribute_to_demand(X, econ.demand, acct)
        worst = max(worst, report.conservation_residual)
    elapsed = time.perf_counter() - start
    check(
        "1 demand-side conservation on 100 economies",
        worst <= 1e-10 and elapsed < 10.0,
        f"worst residual {worst:.3e}, {elapsed:.2f}s",
    )


def test_criterion_2_dual_conservation(corpus, worked):
    worst = 0.0
    for econ, acct in corpus:
        F = direct_intensity(econ, acct)
        Y = systemic_intensity(F, allocation_coefficients(econ))
        report = attribute_to_value_added(Y, econ.value_added, acct)
        worst = max(worst, report.conservation_residual)

    econ, acct = worked
    F = direct_intensity(econ, acct)
    Y_lit = systemic_intensity_from_technical(F, technical_coefficients(econ))
    literal = attribute_to_value_added(Y_lit, econ.value_added, acct)
    counterexample_ok = (
        abs(literal.total_attributed - 34.0) <= 1e-9
        and abs(literal.conservation_residual - 0.1333333333) <= 1e-6
        and literal.total_emissions == 30.0
    )
    check(
        "2 value-added conservation + transposed-technical counterexample",
        worst <= 1e-10 and counterexample_ok,
        f"worst residual {worst:.3e}, literal total "
        f"{literal.total_attributed:.6f}",
    )


def test_criterion_3_series_solve_equivalence(corpus):
    worst = 0.0
    for econ, acct in corpus:
        A = technical_coefficients(econ)
        F = direct_intensity(econ, acct)
        X = total_intensity(F, A)
        X_series, _ = total_intensity_neumann(F, A, tol=1e-10)
        worst = max(worst, float(np.abs(X_series.values - X.values).max()))
    check(
        "3 series vs solve equivalence (tol 1e-10)",
        worst <= 1e-9,
        f"worst sup-norm gap {worst:.3e}",
    )


def test_criterion_4_demand_identity(corpus):
    worst = 0.0
    for econ, _ in corpus:
        residual = demand_identity_residual(econ, technical_coefficients(econ))
        worst = max(worst, residual)
    check(
        "4 rewritten balance identity D = (I-A)T",
        worst <= 1e-12,
        f"worst residual {worst:.3e}",
    )


def test_criterion_5_worked_example_end_to_end(worked):
    econ, acct = worked
    A = technical_coefficients(econ)
    B = allocation_coefficients(econ)
    F = direct_intensity(econ, acct)
    X = total_intensity(F, A)
    Y = systemic_intensity(F, B)
    demand_total = attribute_to_demand(X, econ.demand, acct).total_attributed
    value_total = attribute_to_value_added(
        Y, econ.value_added, acct
    ).total_attributed
    ok = (
        np.allclose(A.values, [[0.5, 0.5], [0.15, 0.2]], atol=1e-15)
        and np.allclose(F.values, [0.1, 0.1], atol=1e-15)
        and np.allclose(X.values, [0.292308, 0.307692], atol=1e-6)
        and abs(demand_total - 30.0) <= 1e-9
        and np.allclose(Y.values, [0.323077, 0.246154], atol=1e-6)
        and abs(value_total - 30.0) <= 1e-9
    )
    check(
        "5 worked 2-sector economy end to end",
        ok,
        f"X={X.values.round(6).tolist()}, Y={Y.values.round(6).tolist()}, "
        f"totals {demand_total:.12f}/{value_total:.12f}",
    )


def test_criterion_6_scalar_amplification_curve():
    eps = 0.005
    grid = [round(0.1 + 0.05 * k, 2) for k in range(18)]  # 0.1 .. 0.95
    curve = amplification_curve(grid, eps)
    values = dict(curve)
    closed_form = lambda a: 1.0 / ((1.0 - a) * (1.0 - a - eps))
    ok = (
        abs(values[0.5] - 4.0404) <= 1e-4
        and abs(values[0.9] - closed_form(0.9)) <= 1e-4
        and round(values[0.9], 2) == 105.26
        and all(a < b for a, b in zip(
            [amp for _, amp in curve], [amp for _, amp in curve][1:]
        ))
    )
    check(
        "6 scalar amplification blow-up",
        ok,
        f"amp(0.5)={values[0.5]:.6f}, amp(0.9)={values[0.9]:.4f}, "
        f"monotone over {grid[0]}..{grid[-1]}",
    )


def _series_partials(F, A, caps):
    """Partial sums at increasing term caps, via the truncation payload."""
    partials = []
    for cap in caps:
        try:
            X, _ = total_intensity_neumann(F, A, tol=0.0, max_terms=cap)
        except Truncated as err:
            partials.append(err.partial.values)
        else:
            partials.append(X.values)
    return partials


def test_criterion_7_monotonicity(corpus):
    violations = 0
    for econ, acct in corpus:
        A = technical_coefficients(econ)
        F = direct_intensity(econ, acct)
        X = total_intensity(F, A)
        if not np.all(X.values >= F.values):
            violations += 1
        partials = _series_partials(F, A, caps=(1, 2, 4, 8))
        for earlier, later in zip(partials, partials[1:]):
            if not np.all(later >= earlier):
                violations += 1
    check(
        "7 monotonicity: X >= F and nondecreasing partial sums",
        violations == 0,
        f"{violations} violations",
    )


def test_criterion_8_cli_contract(tmp_path, capsys):
    failures = []
    sizes = np.random.default_rng(808).integers(1, 41, size=20)
    for index, n in enumerate(sizes):
        out = tmp_path / f"gen{index}"
        code = run_command(
            ["generate", "--n", str(int(n)), "--seed", str(index + 1),
             "--out", str(out)]
        )
        if code != 0:
            failures.append(f"generate #{index} exited {code}")
            continue
        table, emissions = out / "table.csv", out / "emissions.csv"

        # round-trip fixpoint: parse -> serialize -> parse, field by field
        first = parse_table(table)
        again = tmp_path / f"again{index}.csv"
        again.write_text(serialize_table(first), encoding="utf-8")
        second = parse_table(again)
        same = (
            first.sectors == second.sectors
            and first.money_unit == second.money_unit
            and np.array_equal(first.transactions, second.transactions)
            and np.array_equal(first.demand, second.demand)
            and np.array_equal(first.value_added, second.value_added)
            and np.array_equal(first.totals, second.totals)
        )
        if not same:
            failures.append(f"round-trip #{index} not a fixpoint")
        parse_emissions(emissions, first)

        code = run_command(["attribute", str(table), str(emissions)])
        if code != 0:
            failures.append(f"attribute #{index} exited {code}")

    corrupted = tmp_path / "corrupted.csv"
    corrupted.write_text(
        ",s1,s2,D,T\ns1,100,50,50,999\ns2,30,20,50,100\n", encoding="utf-8"
    )
    if run_command(["validate", str(corrupted)]) != 1:
        failures.append("corrupted table did not exit 1")
    if run_command(["validate", str(corrupted), "--frobnicate"]) != 2:
        failures.append("unknown flag did not exit 2")

    capsys.readouterr()  # drop the accumulated CLI output
    check(
        "8 CLI contract: round-trips, attributions, exit codes",
        not failures,
        "; ".join(failures) if failures else "20 economies",
    )
