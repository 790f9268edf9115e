"""CSV ingestion and serialization for tables and emission accounts.

Table layout mirrors how published tables are displayed: a header row of
sector names followed by a ``D`` column and an optional ``T`` column,
one row per sector, then optional trailing ``V`` and ``T`` rows. The
corner cell of the header carries the money unit label (it may be left
empty). Example::

    MCHF,Agri,Industry,D,T
    Agri,100,50,50,200
    Industry,30,20,50,100
    V,70,30,,
    T,200,100,,

When totals appear both as a column and as a bottom row the two are
cross-checked. An emission file is two columns, sector label and value,
with a header line whose second cell declares the emission unit;
sectors are matched to the table by label, not position, so row order
is free::

    sector,kt CO2
    Industry,10
    Agri,20

All numbers are written with 17 significant digits, so a parse of a
serialized economy reproduces it bit for bit.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from .economy import (
    DEFAULT_BALANCE_TOL,
    Economy,
    EmissionAccount,
    ZERO_TOTAL_ERROR,
    build_economy,
)
from .errors import (
    DuplicateSector,
    MissingSector,
    NegativeEntry,
    ParseError,
    UnknownSector,
)

# Row/column labels with structural meaning; they cannot name sectors.
RESERVED_LABELS = frozenset({"D", "T", "V"})

# Totals printed both as a column and as a bottom row are the same published
# figure; they must agree to print-rounding precision no matter how loose the
# balance tolerance is.
TOTAL_CROSS_CHECK_TOL = 1e-9


def _read_rows(path) -> list[tuple[int, list[str]]]:
    """Non-empty CSV rows with their 1-based line numbers, cells stripped."""
    text = Path(path).read_text(encoding="utf-8")
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [cell.strip() for cell in row]
        while cells and not cells[-1]:
            cells.pop()  # spreadsheet exports pad short rows with empty cells
        if cells:
            rows.append((lineno, cells))
    return rows


def _parse_number(cell: str, lineno: int, column: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(
            f"line {lineno}, column {column}: {cell!r} is not a number",
            line=lineno, column=column,
        ) from None
    if not math.isfinite(value):
        raise ParseError(
            f"line {lineno}, column {column}: {cell!r} is not finite",
            line=lineno, column=column,
        )
    return value


def _parse_vector_row(cells: list[str], n: int, lineno: int, what: str) -> np.ndarray:
    if len(cells) - 1 != n:
        raise ParseError(
            f"line {lineno}: {what} row has {len(cells) - 1} values, expected {n}",
            line=lineno,
        )
    return np.array(
        [_parse_number(cells[1 + j], lineno, 2 + j) for j in range(n)]
    )


def parse_table(path, *, tol_rel: float = DEFAULT_BALANCE_TOL,
                allow_negative_value_added: bool = False,
                on_zero_total: str = ZERO_TOTAL_ERROR) -> Economy:
    """Parse a table file into a validated economy.

    Totals and value added found in the file are passed through as
    supplied figures; absent ones are derived. Balance violations beyond
    ``tol_rel`` surface as :class:`ImbalancedTable` from the economy
    builder, parse-level problems as :class:`ParseError` with a 1-based
    line (and column where it applies).
    """
    rows = _read_rows(path)
    if not rows:
        raise ParseError(f"{path}: file is empty", line=1)

    lineno, header = rows[0]
    if len(header) < 3:
        raise ParseError(
            f"line {lineno}: header needs at least one sector and a D column",
            line=lineno,
        )
    money_unit = header[0]
    try:
        d_position = header.index("D", 1)  # corner cell is the money unit
    except ValueError:
        raise ParseError(
            f"line {lineno}: header has no D column", line=lineno
        ) from None
    sectors = header[1:d_position]
    if not sectors:
        raise ParseError(
            f"line {lineno}: header has no sector columns before D", line=lineno
        )
    trailing = header[d_position + 1:]
    if trailing not in ([], ["T"]):
        raise ParseError(
            f"line {lineno}: unexpected header columns after D: {trailing}",
            line=lineno,
        )
    has_total_column = trailing == ["T"]
    seen = set()
    for j, label in enumerate(sectors):
        if label in RESERVED_LABELS:
            raise ParseError(
                f"line {lineno}: {label!r} is a reserved label and cannot "
                "name a sector",
                line=lineno, column=2 + j,
            )
        if not label:
            raise ParseError(
                f"line {lineno}: empty sector name", line=lineno, column=2 + j
            )
        if label in seen:
            raise DuplicateSector(f"line {lineno}: duplicate sector {label!r}")
        seen.add(label)

    n = len(sectors)
    width = 1 + n + 1 + (1 if has_total_column else 0)
    if len(rows) < 1 + n:
        raise ParseError(
            f"expected {n} sector rows after the header, found {len(rows) - 1}",
            line=rows[-1][0],
        )

    transactions = np.zeros((n, n))
    demand = np.zeros(n)
    totals_column = np.zeros(n) if has_total_column else None
    for i in range(n):
        lineno, cells = rows[1 + i]
        if cells[0] != sectors[i]:
            raise ParseError(
                f"line {lineno}: row label {cells[0]!r} does not match "
                f"header order (expected {sectors[i]!r})",
                line=lineno, column=1,
            )
        if len(cells) != width:
            raise ParseError(
                f"line {lineno}: row has {len(cells)} cells, expected {width}",
                line=lineno,
            )
        for j in range(n):
            transactions[i, j] = _parse_number(cells[1 + j], lineno, 2 + j)
        demand[i] = _parse_number(cells[1 + n], lineno, 2 + n)
        if has_total_column:
            totals_column[i] = _parse_number(cells[2 + n], lineno, 3 + n)

    value_added = None
    totals_row = None
    for lineno, cells in rows[1 + n:]:
        label = cells[0]
        if label == "V":
            if value_added is not None:
                raise ParseError(f"line {lineno}: duplicate V row", line=lineno)
            value_added = _parse_vector_row(cells, n, lineno, "V")
        elif label == "T":
            if totals_row is not None:
                raise ParseError(f"line {lineno}: duplicate T row", line=lineno)
            totals_row = _parse_vector_row(cells, n, lineno, "T")
        else:
            raise ParseError(
                f"line {lineno}: unexpected row label {label!r} "
                "(only V and T rows may follow the sector rows)",
                line=lineno, column=1,
            )

    totals = totals_column if totals_column is not None else totals_row
    if totals_column is not None and totals_row is not None:
        scale = np.maximum(np.maximum(np.abs(totals_column), np.abs(totals_row)), 1.0)
        worst = int(np.argmax(np.abs(totals_column - totals_row) / scale))
        if (abs(totals_column[worst] - totals_row[worst])
                > TOTAL_CROSS_CHECK_TOL * scale[worst]):
            raise ParseError(
                f"total of sector {sectors[worst]!r} differs between the T "
                f"column ({totals_column[worst]!r}) and the T row "
                f"({totals_row[worst]!r})"
            )

    return build_economy(
        sectors, transactions, demand, value_added, totals,
        money_unit=money_unit, tol_rel=tol_rel,
        allow_negative_value_added=allow_negative_value_added,
        on_zero_total=on_zero_total,
    )


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def serialize_table(econ: Economy) -> str:
    """Render an economy in the table layout, exactly re-parseable."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([econ.money_unit, *econ.sectors, "D", "T"])
    for i, label in enumerate(econ.sectors):
        writer.writerow([
            label,
            *(_fmt(v) for v in econ.transactions[i]),
            _fmt(econ.demand[i]),
            _fmt(econ.totals[i]),
        ])
    writer.writerow(["V", *(_fmt(v) for v in econ.value_added), "", ""])
    writer.writerow(["T", *(_fmt(v) for v in econ.totals), "", ""])
    return out.getvalue()


def write_table(econ: Economy, path) -> None:
    Path(path).write_text(serialize_table(econ), encoding="utf-8")


def parse_emissions(path, econ: Economy) -> EmissionAccount:
    """Parse an emission file and align it to the economy's sector order."""
    rows = _read_rows(path)
    if not rows:
        raise ParseError(f"{path}: file is empty", line=1)
    lineno, header = rows[0]
    if len(header) < 2:
        raise ParseError(
            f"line {lineno}: emission header must declare the unit in its "
            "second cell",
            line=lineno,
        )
    unit = header[1]

    values: dict[str, float] = {}
    for lineno, cells in rows[1:]:
        if len(cells) != 2:
            raise ParseError(
                f"line {lineno}: expected two cells (sector, value), "
                f"got {len(cells)}",
                line=lineno,
            )
        label, cell = cells
        if label not in econ.sectors:
            raise UnknownSector(
                f"line {lineno}: sector {label!r} does not appear in the table"
            )
        if label in values:
            raise DuplicateSector(f"line {lineno}: duplicate sector {label!r}")
        value = _parse_number(cell, lineno, 2)
        if value < 0:
            raise NegativeEntry(
                f"line {lineno}: emission of sector {label!r} is negative "
                f"({value!r})",
                index=label,
            )
        values[label] = value

    missing = [s for s in econ.sectors if s not in values]
    if missing:
        raise MissingSector(
            f"emission file has no entry for sector {missing[0]!r}"
            + (f" (and {len(missing) - 1} more)" if len(missing) > 1 else "")
        )
    emissions = np.array([values[s] for s in econ.sectors])
    return EmissionAccount(emissions, emission_unit=unit)


def serialize_emissions(account: EmissionAccount, econ: Economy) -> str:
    """Render an emission account in table sector order, exactly re-parseable."""
    if account.emissions.shape != (econ.n,):
        raise MissingSector(
            f"account has {account.emissions.shape[0]} entries, "
            f"economy has {econ.n} sectors"
        )
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["sector", account.emission_unit])
    for label, value in zip(econ.sectors, account.emissions):
        writer.writerow([label, _fmt(value)])
    return out.getvalue()


def write_emissions(account: EmissionAccount, econ: Economy, path) -> None:
    Path(path).write_text(serialize_emissions(account, econ), encoding="utf-8")
