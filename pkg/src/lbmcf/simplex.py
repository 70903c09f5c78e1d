"""Exact primal simplex over rational numbers.

Dense tableau, maximization over ``Ax <= b, x >= 0`` with ``b >= 0`` (the
all-slack basis is feasible, so no phase one is needed). Bland's smallest-
index pivoting rule guarantees termination on the heavily degenerate
models produced by the flow formulations. gmpy2 rationals are used when
available; fractions.Fraction otherwise. Performance is adequate for
desk-size models only, which is all the exact oracle targets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import LbmcfError

try:
    from gmpy2 import mpq as _Q

    RATIONAL_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction
    RATIONAL_BACKEND = "fractions"

ZERO = _Q(0)
ONE = _Q(1)


class SimplexUnboundedError(LbmcfError):
    """The LP has an improving ray; the objective is unbounded above."""


def rationalize(value) -> "_Q":
    """Exact rational from an int, decimal string, or float.

    Floats go through their shortest round-tripping decimal representation,
    so a value parsed from decimal text converts to exactly that decimal.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a number")
    if isinstance(value, int):
        return _Q(value)
    if isinstance(value, float):
        frac = Fraction(repr(value))
        return _Q(frac.numerator, frac.denominator)
    if isinstance(value, str):
        frac = Fraction(value)
        return _Q(frac.numerator, frac.denominator)
    frac = Fraction(value)
    return _Q(frac.numerator, frac.denominator)


@dataclass
class SimplexSolution:
    value: "_Q"
    x: list
    pivots: int

    @property
    def value_float(self) -> float:
        return float(self.value)


def maximize(objective, rows) -> SimplexSolution:
    """Maximize ``objective . x`` subject to ``rows`` and ``x >= 0``.

    ``objective`` is a dense list of rationals; ``rows`` is a list of
    ``(coeffs, rhs)`` pairs with dense rational coefficient lists and
    nonnegative rhs. Raises SimplexUnboundedError on an improving ray.
    """
    n = len(objective)
    m = len(rows)
    for coeffs, rhs in rows:
        if len(coeffs) != n:
            raise ValueError("row width does not match objective length")
        if rhs < 0:
            raise ValueError("rhs must be nonnegative (slack basis must be feasible)")

    # Columns 0..n-1 are structural variables, n..n+m-1 slacks.
    width = n + m
    a = []
    b = []
    for i, (coeffs, rhs) in enumerate(rows):
        row = [_Q(c) for c in coeffs] + [ZERO] * m
        row[n + i] = ONE
        a.append(row)
        b.append(_Q(rhs))
    cbar = [_Q(c) for c in objective] + [ZERO] * m
    value = ZERO
    basis = list(range(n, n + m))
    pivots = 0

    while True:
        enter = -1
        for j in range(width):
            if cbar[j] > 0:
                enter = j
                break
        if enter < 0:
            break

        leave = -1
        best_ratio = None
        for i in range(m):
            aij = a[i][enter]
            if aij > 0:
                ratio = b[i] / aij
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            raise SimplexUnboundedError(
                f"unbounded in direction of variable {enter}"
            )

        piv = a[leave][enter]
        if piv != ONE:
            inv = ONE / piv
            a[leave] = [x * inv for x in a[leave]]
            b[leave] *= inv
        pivot_row = a[leave]
        pivot_rhs = b[leave]
        for i in range(m):
            if i == leave:
                continue
            f = a[i][enter]
            if f != 0:
                row = a[i]
                a[i] = [x - f * y for x, y in zip(row, pivot_row)]
                b[i] -= f * pivot_rhs
        f = cbar[enter]
        cbar = [x - f * y for x, y in zip(cbar, pivot_row)]
        value += f * pivot_rhs
        basis[leave] = enter
        pivots += 1

    x = [ZERO] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = b[i]
    return SimplexSolution(value=value, x=x, pivots=pivots)
