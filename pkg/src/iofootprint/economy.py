"""Closed-economy transaction table model and balance validation.

An economy is a square table of inter-sector money flows together with
final demand, value added, and total output per sector. Two double-entry
identities make the table meaningful: each sector's total output equals
its sales (row sum plus demand) and also its costs (column sum plus value
added). Everything downstream, from coefficient matrices to footprint
attribution, silently assumes these identities, so this module enforces
them at construction time and exposes them for auditing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateSector,
    ImbalancedTable,
    KindMismatch,
    NegativeEntry,
    ZeroTotal,
)

logger = logging.getLogger(__name__)

DEFAULT_BALANCE_TOL = 1e-6

# Policies for sectors whose total output is zero. Normalizing by totals
# divides by them, so they cannot be kept.
ZERO_TOTAL_ERROR = "error"
ZERO_TOTAL_DROP = "drop"


def _as_readonly(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Economy:
    """An immutable closed-economy transaction table.

    ``transactions[i, j]`` is the money flow from sector ``i`` (seller) to
    sector ``j`` (buyer). ``demand``, ``value_added`` and ``totals`` are
    per-sector column vectors in the same money unit. Construction through
    :func:`build_economy` guarantees positive totals and balance within
    tolerance; direct construction only checks shapes.
    """

    sectors: tuple[str, ...]
    transactions: np.ndarray
    demand: np.ndarray
    value_added: np.ndarray
    totals: np.ndarray
    money_unit: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))
        n = len(self.sectors)
        object.__setattr__(self, "transactions", _as_readonly(self.transactions))
        for name in ("demand", "value_added", "totals"):
            object.__setattr__(self, name, _as_readonly(getattr(self, name)))
        if self.transactions.shape != (n, n):
            raise DimensionMismatch(
                f"transaction matrix has shape {self.transactions.shape}, "
                f"expected ({n}, {n})"
            )
        for name in ("demand", "value_added", "totals"):
            vec = getattr(self, name)
            if vec.shape != (n,):
                raise DimensionMismatch(
                    f"{name} has shape {vec.shape}, expected ({n},)"
                )

    @property
    def n(self) -> int:
        """Number of sectors."""
        return len(self.sectors)


@dataclass(frozen=True)
class EmissionAccount:
    """Per-sector emission totals, aligned to an economy's sector order.

    Entries must be finite and nonnegative; the unit label is free-form
    (for example ``"kt CO2"``) and is carried through reports unchanged.
    """

    emissions: np.ndarray
    emission_unit: str = ""

    def __post_init__(self):
        object.__setattr__(self, "emissions", _as_readonly(self.emissions))
        if self.emissions.ndim != 1:
            raise DimensionMismatch(
                f"emissions must be a vector, got shape {self.emissions.shape}"
            )
        bad = ~(np.isfinite(self.emissions) & (self.emissions >= 0))
        if bad.any():
            i = int(np.argmax(bad))
            raise NegativeEntry(
                f"emission entry {i} is negative or not finite "
                f"({self.emissions[i]!r})",
                index=i,
            )

    @property
    def total(self) -> float:
        """Total emissions over all sectors."""
        return float(self.emissions.sum())


@dataclass(frozen=True)
class BalanceReport:
    """Relative residuals of the two balance identities, per sector.

    ``row_residuals[i]`` measures output-side balance
    ``|t_i - (sum_j c_ij + d_i)| / t_i`` and ``col_residuals[i]`` the
    input-side ``|t_i - (v_i + sum_j c_ji)| / t_i``. ``max_residual`` is the
    maximum over both vectors and ``ok`` is True when it is within the
    tolerance the report was computed at.
    """

    row_residuals: np.ndarray = field(repr=False)
    col_residuals: np.ndarray = field(repr=False)
    max_residual: float = 0.0
    ok: bool = True

    def __post_init__(self):
        object.__setattr__(self, "row_residuals", _as_readonly(self.row_residuals))
        object.__setattr__(self, "col_residuals", _as_readonly(self.col_residuals))


def _check_sector_labels(sectors) -> tuple[str, ...]:
    labels = tuple(str(s) for s in sectors)
    if not labels:
        raise DimensionMismatch("an economy needs at least one sector")
    seen = set()
    for label in labels:
        if not label.strip():
            raise DimensionMismatch("sector labels must be non-empty strings")
        if label in seen:
            raise DuplicateSector(f"duplicate sector label {label!r}")
        seen.add(label)
    return labels


def _check_nonnegative(arr: np.ndarray, name: str) -> None:
    bad = ~(np.isfinite(arr) & (arr >= 0))
    if bad.any():
        index = np.unravel_index(int(np.argmax(bad)), arr.shape)
        index = index[0] if arr.ndim == 1 else tuple(int(k) for k in index)
        raise NegativeEntry(
            f"{name} entry {index} is negative or not finite "
            f"({arr[index]!r})",
            index=index,
        )


def _residuals(transactions, demand, value_added, totals):
    row = np.abs(totals - (transactions.sum(axis=1) + demand)) / totals
    col = np.abs(totals - (value_added + transactions.sum(axis=0))) / totals
    return row, col


def build_economy(sectors, transactions, demand, value_added=None, totals=None,
                  *, money_unit: str = "", tol_rel: float = DEFAULT_BALANCE_TOL,
                  allow_negative_value_added: bool = False,
                  on_zero_total: str = ZERO_TOTAL_ERROR) -> Economy:
    """Assemble and validate an economy from its table components.

    When ``totals`` is absent it is derived from row sums plus demand, and
    when ``value_added`` is absent it is derived as totals minus column
    sums, so a table given only as flows and demand balances exactly by
    construction. Supplied totals and value added win over derived ones
    (published figures take precedence) but must balance within ``tol_rel``
    relative tolerance, or :class:`ImbalancedTable` is raised with the
    offending residuals attached.

    Sectors with zero total output cannot be normalized; by default they
    raise :class:`ZeroTotal` naming the sector. ``on_zero_total="drop"``
    removes them (the drop is logged as a warning) and revalidates the
    reduced table.

    Value added may legitimately be negative in published tables; pass
    ``allow_negative_value_added=True`` to accept that. Transactions,
    demand, and totals must always be nonnegative and finite.
    """
    labels = _check_sector_labels(sectors)
    n = len(labels)
    if on_zero_total not in (ZERO_TOTAL_ERROR, ZERO_TOTAL_DROP):
        raise ValueError(f"unknown zero-total policy {on_zero_total!r}")

    C = np.array(transactions, dtype=float)
    D = np.array(demand, dtype=float)
    if C.shape != (n, n):
        raise DimensionMismatch(
            f"transaction matrix has shape {C.shape}, expected ({n}, {n})"
        )
    if D.shape != (n,):
        raise DimensionMismatch(f"demand has shape {D.shape}, expected ({n},)")
    _check_nonnegative(C, "transaction")
    _check_nonnegative(D, "demand")

    totals_supplied = totals is not None
    value_added_supplied = value_added is not None
    if totals_supplied:
        T = np.array(totals, dtype=float)
        if T.shape != (n,):
            raise DimensionMismatch(f"totals has shape {T.shape}, expected ({n},)")
        _check_nonnegative(T, "totals")
    else:
        T = C.sum(axis=1) + D
    if value_added_supplied:
        V = np.array(value_added, dtype=float)
        if V.shape != (n,):
            raise DimensionMismatch(
                f"value added has shape {V.shape}, expected ({n},)"
            )
        if not np.isfinite(V).all():
            i = int(np.argmax(~np.isfinite(V)))
            raise NegativeEntry(f"value added entry {i} is not finite", index=i)
    else:
        V = T - C.sum(axis=0)

    zero = T <= 0
    if zero.any():
        names = [labels[i] for i in np.flatnonzero(zero)]
        if on_zero_total == ZERO_TOTAL_ERROR:
            raise ZeroTotal(
                f"sector {names[0]!r} has zero total output "
                "(use the drop policy to remove such sectors)",
                sector=names[0],
            )
        logger.warning("dropping zero-output sectors: %s", ", ".join(names))
        keep = np.flatnonzero(~zero)
        labels = tuple(labels[i] for i in keep)
        if not labels:
            raise ZeroTotal("all sectors have zero total output")
        C = C[np.ix_(keep, keep)]
        D, V, T = D[keep], V[keep], T[keep]
        if not totals_supplied:
            T = C.sum(axis=1) + D
        if not value_added_supplied:
            V = T - C.sum(axis=0)

    if (V < 0).any() and not allow_negative_value_added:
        i = int(np.argmax(V < 0))
        raise NegativeEntry(
            f"value added of sector {labels[i]!r} is negative ({V[i]!r}); "
            "pass allow_negative_value_added=True to accept it",
            index=i,
        )

    row_res, col_res = _residuals(C, D, V, T)
    max_res = float(max(row_res.max(), col_res.max()))
    if max_res > tol_rel:
        report = BalanceReport(row_res, col_res, max_res, ok=False)
        raise ImbalancedTable(
            f"supplied table violates the balance identities "
            f"(max relative residual {max_res:.3e} > tolerance {tol_rel:.1e})",
            report=report,
        )

    return Economy(labels, C, D, V, T, money_unit)


def validate_balance(econ: Economy, tol_rel: float = DEFAULT_BALANCE_TOL) -> BalanceReport:
    """Check both balance identities of an economy; never raises.

    Pure function: the economy is not modified and repeated calls yield
    identical reports.
    """
    row_res, col_res = _residuals(
        econ.transactions, econ.demand, econ.value_added, econ.totals
    )
    max_res = float(max(row_res.max(), col_res.max()))
    return BalanceReport(row_res, col_res, max_res, ok=bool(max_res <= tol_rel))


def demand_identity_residual(econ: Economy, coefficients) -> float:
    """Residual of the rewritten output balance ``D = (I - A) T``.

    For a balanced economy and its technical coefficient matrix the row
    balance identity rearranges exactly into ``D = (I - A) T``; this is the
    pivot of the conservation argument, so its numerical residual is worth
    monitoring on real data. Returns the sup-norm residual relative to
    ``max|D|`` (absolute when demand is identically zero).
    """
    from .leontief import CoefficientKind

    if coefficients.kind is not CoefficientKind.TECHNICAL:
        raise KindMismatch(
            "demand identity requires the technical coefficient matrix, "
            f"got kind {coefficients.kind.value!r}"
        )
    if coefficients.values.shape != (econ.n, econ.n):
        raise DimensionMismatch(
            f"coefficient matrix shape {coefficients.values.shape} does not "
            f"match the economy ({econ.n} sectors)"
        )
    lhs = econ.demand
    rhs = econ.totals - coefficients.values @ econ.totals
    residual = float(np.abs(lhs - rhs).max())
    scale = float(np.abs(lhs).max())
    return residual / scale if scale > 0 else residual
