"""Dense rolling-layer kernels for totals and return counts.

The dict enumerator in ``models`` materializes Laurent coefficients and is
the correctness oracle; these kernels serve the large-order experiments
(thousands of terms) where only the sequence values are needed.

Storage is parity-packed: layer n only populates cells with
(i + j) == (s1 + s2 + n) mod 2, so a layer of radius n is kept as a
(rows x ~n/2) slab.  With r = (q - i) & 1 for layer parity q, cell (i, j)
lives at packed column (j - r) // 2, and the four-neighbor stencil becomes

    new[u, v] = old[u-1, v] + old[u+1, v] + old[u, v-1+r] + old[u, v+r]

with r taken from the *new* layer.  Modular runs defer reduction for as
many steps as the dtype allows and reduce with a Barrett multiply-shift
(int32) or a remainder pass (int64).  Exact integer sequences are
reconstructed from these modular runs by CRT in ``models``.
"""

from __future__ import annotations

import os

import numpy as np
from numba import njit

from .series import Domain
from .models import CellBudgetExceeded, ModelSpec, Region

_SENT = 1 << 60

_DOMAIN_BOUNDS = {
    Domain.ALL: (-_SENT, _SENT),
    Domain.EMPTY: (1, 0),
    Domain.POS: (1, _SENT),
    Domain.NEG: (-_SENT, -1),
    Domain.NONNEG: (0, _SENT),
    Domain.NONPOS: (-_SENT, 0),
    Domain.ZERO: (0, 0),
}


def _cell_budget(budget):
    if budget is not None:
        return budget
    env = os.environ.get("SEMIPERM_CELL_BUDGET")
    if env:
        return int(env)
    from .models import DEFAULT_CELL_BUDGET

    return DEFAULT_CELL_BUDGET


@njit(cache=True)
def _row_bounds(n1, q1, s1, s2, cv, i):
    r = (q1 - i) & 1
    amp = n1 - abs(i - s1)
    jlo = s2 - amp
    if ((jlo - r) & 1) != 0:
        jlo += 1
    jhi = s2 + amp
    if ((jhi - r) & 1) != 0:
        jhi -= 1
    return r, cv + ((jlo - r) >> 1), cv + ((jhi - r) >> 1)


@njit(cache=True)
def _fill(old, new, n1, q1, s1, s2, cu, cv):
    """Plain stencil step onto layer n1; returns the raw int64 cell sum."""
    tot = np.int64(0)
    for i in range(s1 - n1, s1 + n1 + 1):
        u = cu + i
        r, vlo, vhi = _row_bounds(n1, q1, s1, s2, cv, i)
        for v in range(vlo, vhi + 1):
            val = old[u - 1, v] + old[u + 1, v] + old[u, v - 1 + r] + old[u, v + r]
            new[u, v] = val
            tot += np.int64(val)
    return tot


@njit(cache=True)
def _fill_barrett32(old, new, n1, q1, s1, s2, cu, cv, p, mbar):
    """Stencil step with fused Barrett reduction mod p (int32 arrays)."""
    tot = np.int64(0)
    for i in range(s1 - n1, s1 + n1 + 1):
        u = cu + i
        r, vlo, vhi = _row_bounds(n1, q1, s1, s2, cv, i)
        for v in range(vlo, vhi + 1):
            val = (
                np.int64(old[u - 1, v])
                + np.int64(old[u + 1, v])
                + np.int64(old[u, v - 1 + r])
                + np.int64(old[u, v + r])
            )
            val -= ((val * mbar) >> 46) * p
            if val >= p:
                val -= p
            if val >= p:
                val -= p
            new[u, v] = np.int32(val)
            tot += val
    return tot


@njit(cache=True)
def _fill_scaled(old, new, n1, q1, s1, s2, cu, cv):
    """Float stencil step scaled by 1/4, keeping layer mass bounded."""
    tot = 0.0
    for i in range(s1 - n1, s1 + n1 + 1):
        u = cu + i
        r, vlo, vhi = _row_bounds(n1, q1, s1, s2, cv, i)
        for v in range(vlo, vhi + 1):
            val = 0.25 * (
                old[u - 1, v] + old[u + 1, v] + old[u, v - 1 + r] + old[u, v + r]
            )
            new[u, v] = val
            tot += val
    return tot


@njit(cache=True)
def _west_range(n1, q1, s1, s2, cv, wlo, whi):
    span = (n1 - 1) - abs(s1)
    q0 = q1 ^ 1
    jlo = max(wlo, s2 - span)
    jhi = min(whi, s2 + span)
    if ((jlo - q0) & 1) != 0:
        jlo += 1
    if ((jhi - q0) & 1) != 0:
        jhi -= 1
    ok = span >= 0 and jlo <= jhi
    return ok, cv + ((jlo - q0) >> 1), cv + ((jhi - q0) >> 1)


@njit(cache=True)
def _south_range(n1, q1, s1, s2, slo, shi):
    span = (n1 - 1) - abs(s2)
    q0 = q1 ^ 1
    ilo = max(slo, s1 - span)
    ihi = min(shi, s1 + span)
    if ((ilo - q0) & 1) != 0:
        ilo += 1
    if ((ihi - q0) & 1) != 0:
        ihi -= 1
    ok = span >= 0 and ilo <= ihi
    return ok, ilo, ihi


@njit(cache=True)
def _fix_west_int(old, new, n1, q1, s1, s2, cu, cv, wlo, whi):
    """Remove forbidden west flux out of column 0; returns the amount."""
    ok, vlo, vhi = _west_range(n1, q1, s1, s2, cv, wlo, whi)
    removed = np.int64(0)
    if not ok:
        return removed
    for v in range(vlo, vhi + 1):
        flux = old[cu, v]
        new[cu - 1, v] -= flux
        removed += np.int64(flux)
    return removed


@njit(cache=True)
def _fix_south_int(old, new, n1, q1, s1, s2, cu, cv, slo, shi):
    """Remove forbidden south flux out of row 0; returns the amount."""
    ok, ilo, ihi = _south_range(n1, q1, s1, s2, slo, shi)
    removed = np.int64(0)
    if not ok:
        return removed
    for i in range(ilo, ihi + 1, 2):
        flux = old[cu + i, cv]
        new[cu + i, cv - 1] -= flux
        removed += np.int64(flux)
    return removed


@njit(cache=True)
def _fix_west_int_mod(old, new, n1, q1, s1, s2, cu, cv, wlo, whi, p):
    """West fix for reduce steps: cells are already in [0, p), so subtract
    the flux residue and wrap, keeping the layer reduced."""
    ok, vlo, vhi = _west_range(n1, q1, s1, s2, cv, wlo, whi)
    removed = np.int64(0)
    if not ok:
        return removed
    for v in range(vlo, vhi + 1):
        flux = np.int64(old[cu, v]) % p
        val = np.int64(new[cu - 1, v]) - flux
        if val < 0:
            val += p
        new[cu - 1, v] = val
        removed += flux
    return removed


@njit(cache=True)
def _fix_south_int_mod(old, new, n1, q1, s1, s2, cu, cv, slo, shi, p):
    ok, ilo, ihi = _south_range(n1, q1, s1, s2, slo, shi)
    removed = np.int64(0)
    if not ok:
        return removed
    for i in range(ilo, ihi + 1, 2):
        flux = np.int64(old[cu + i, cv]) % p
        val = np.int64(new[cu + i, cv - 1]) - flux
        if val < 0:
            val += p
        new[cu + i, cv - 1] = val
        removed += flux
    return removed


@njit(cache=True)
def _fix_west_float(old, new, n1, q1, s1, s2, cu, cv, wlo, whi):
    ok, vlo, vhi = _west_range(n1, q1, s1, s2, cv, wlo, whi)
    removed = 0.0
    if not ok:
        return removed
    for v in range(vlo, vhi + 1):
        flux = 0.25 * old[cu, v]
        new[cu - 1, v] -= flux
        removed += flux
    return removed


@njit(cache=True)
def _fix_south_float(old, new, n1, q1, s1, s2, cu, cv, slo, shi):
    ok, ilo, ihi = _south_range(n1, q1, s1, s2, slo, shi)
    removed = 0.0
    if not ok:
        return removed
    for i in range(ilo, ihi + 1, 2):
        flux = 0.25 * old[cu + i, cv]
        new[cu + i, cv - 1] -= flux
        removed += flux
    return removed


@njit(cache=True)
def _zero_ne_int(new, n1, q1, s1, s2, cu, cv):
    """Clear cells with i >= 0 and j >= 0; returns the mass removed."""
    removed = np.int64(0)
    for i in range(max(0, s1 - n1), s1 + n1 + 1):
        u = cu + i
        r, vlo, vhi = _row_bounds(n1, q1, s1, s2, cv, i)
        j0 = 0 if ((0 - r) & 1) == 0 else 1
        vlo = max(vlo, cv + ((j0 - r) >> 1))
        for v in range(vlo, vhi + 1):
            removed += np.int64(new[u, v])
            new[u, v] = 0
    return removed


@njit(cache=True)
def _zero_ne_float(new, n1, q1, s1, s2, cu, cv):
    removed = 0.0
    for i in range(max(0, s1 - n1), s1 + n1 + 1):
        u = cu + i
        r, vlo, vhi = _row_bounds(n1, q1, s1, s2, cv, i)
        j0 = 0 if ((0 - r) & 1) == 0 else 1
        vlo = max(vlo, cv + ((j0 - r) >> 1))
        for v in range(vlo, vhi + 1):
            removed += new[u, v]
            new[u, v] = 0.0
    return removed


@njit(cache=True)
def _reduce_mod(new, n1, q1, s1, s2, cu, cv, p):
    for i in range(s1 - n1, s1 + n1 + 1):
        u = cu + i
        r, vlo, vhi = _row_bounds(n1, q1, s1, s2, cv, i)
        for v in range(vlo, vhi + 1):
            new[u, v] = new[u, v] % p


def _geometry(m: ModelSpec, order: int):
    s1, s2 = m.start
    cu = order + 1 - s1
    cv = 1 - ((s2 - order - 1) // 2)
    rows = 2 * order + 3
    cols = cv + ((s2 + order) // 2) + 3
    return s1, s2, cu, cv, rows, cols


def _effective_barriers(m: ModelSpec):
    # A quarter-plane region is exactly the all/all barrier pair: the only
    # steps that would leave the quadrant are west from column 0 and south
    # from row 0, and the flux fixes zero those target cells.
    if m.region is Region.QUARTER_PLANE:
        return Domain.ALL, Domain.ALL
    return m.west_barrier, m.south_barrier


def _start_cell(m: ModelSpec, cu, cv):
    s1, s2 = m.start
    r = s2 & 1
    return cu + s1, cv + ((s2 - r) >> 1)


def _check_cells(rows, cols, budget):
    cap = _cell_budget(budget)
    if 2 * rows * cols > cap:
        raise CellBudgetExceeded(
            f"run needs {2 * rows * cols} cells, over the budget of {cap}; "
            "raise SEMIPERM_CELL_BUDGET to allow it"
        )


def _run_mod(m: ModelSpec, order: int, p: int, want: str, budget=None):
    if not (2 <= p < 2**31):
        raise ValueError("modulus out of range")
    s1, s2, cu, cv, rows, cols = _geometry(m, order)
    _check_cells(rows, cols, budget)
    west, south = _effective_barriers(m)
    wlo, whi = _DOMAIN_BOUNDS[west]
    slo, shi = _DOMAIN_BOUNDS[south]
    zero_ne = m.region is Region.AVOID_NONNEG_QUADRANT

    use32 = p < (1 << 25)
    dtype = np.int32 if use32 else np.int64
    if use32:
        # values after k deferred steps reach (p-1)*4**k; both the int32
        # store and the Barrett product val*mbar must stay in range
        mbar = (1 << 46) // p
        defer = 1
        while True:
            bound = (p - 1) << (2 * (defer + 1))
            if bound < (1 << 31) and bound * mbar < (1 << 63):
                defer += 1
            else:
                break
    else:
        cells = (order + 2) * (2 * order + 3)
        defer = 1
        while cells * ((p - 1) << (2 * (defer + 1))) < (1 << 62) and defer < 15:
            defer += 1
        mbar = 0

    a = np.zeros((rows, cols), dtype=dtype)
    b = np.zeros((rows, cols), dtype=dtype)
    u0, v0 = _start_cell(m, cu, cv)
    a[u0, v0] = 1

    out = np.zeros(order + 1, dtype=np.int64)
    out[0] = 1 % p
    ret = np.zeros(order + 1, dtype=np.int64)
    ret[0] = 1 % p
    since_reduce = 0
    for n1 in range(1, order + 1):
        q1 = (s1 + s2 + n1) & 1
        since_reduce += 1
        reduce_now = since_reduce >= defer
        reduced32 = use32 and reduce_now
        if reduced32:
            tot = _fill_barrett32(a, b, n1, q1, s1, s2, cu, cv, p, mbar)
            since_reduce = 0
        else:
            tot = _fill(a, b, n1, q1, s1, s2, cu, cv)
        removed = np.int64(0)
        if west is not Domain.EMPTY:
            if reduced32:
                removed += _fix_west_int_mod(a, b, n1, q1, s1, s2, cu, cv, wlo, whi, p)
            else:
                removed += _fix_west_int(a, b, n1, q1, s1, s2, cu, cv, wlo, whi)
        if south is not Domain.EMPTY:
            if reduced32:
                removed += _fix_south_int_mod(a, b, n1, q1, s1, s2, cu, cv, slo, shi, p)
            else:
                removed += _fix_south_int(a, b, n1, q1, s1, s2, cu, cv, slo, shi)
        if zero_ne:
            removed += _zero_ne_int(b, n1, q1, s1, s2, cu, cv)
        if (not use32) and reduce_now:
            _reduce_mod(b, n1, q1, s1, s2, cu, cv, p)
            since_reduce = 0
        out[n1] = (int(tot) - int(removed)) % p
        if (n1 & 1) == 0:
            ret[n1] = int(b[u0, v0]) % p
        a, b = b, a
    return out if want == "totals" else ret


def totals_mod(m: ModelSpec, order: int, p: int, budget=None) -> np.ndarray:
    """Residues mod p of the total walk counts a_0..a_order."""
    return _run_mod(m, order, p, "totals", budget)


def returns_mod(m: ModelSpec, order: int, p: int, budget=None) -> np.ndarray:
    """Residues mod p of the return counts b_0..b_order (odd n are zero)."""
    return _run_mod(m, order, p, "returns", budget)


def _run_float(m: ModelSpec, order: int, want: str, budget=None):
    s1, s2, cu, cv, rows, cols = _geometry(m, order)
    _check_cells(rows, cols, budget)
    west, south = _effective_barriers(m)
    wlo, whi = _DOMAIN_BOUNDS[west]
    slo, shi = _DOMAIN_BOUNDS[south]
    zero_ne = m.region is Region.AVOID_NONNEG_QUADRANT

    a = np.zeros((rows, cols), dtype=np.float64)
    b = np.zeros((rows, cols), dtype=np.float64)
    u0, v0 = _start_cell(m, cu, cv)
    a[u0, v0] = 1.0

    log4 = np.log(4.0)
    out = np.full(order + 1, -np.inf)
    out[0] = 0.0
    ret = np.full(order + 1, -np.inf)
    ret[0] = 0.0
    for n1 in range(1, order + 1):
        q1 = (s1 + s2 + n1) & 1
        tot = _fill_scaled(a, b, n1, q1, s1, s2, cu, cv)
        if west is not Domain.EMPTY:
            tot -= _fix_west_float(a, b, n1, q1, s1, s2, cu, cv, wlo, whi)
        if south is not Domain.EMPTY:
            tot -= _fix_south_float(a, b, n1, q1, s1, s2, cu, cv, slo, shi)
        if zero_ne:
            tot -= _zero_ne_float(b, n1, q1, s1, s2, cu, cv)
        out[n1] = (np.log(tot) if tot > 0 else -np.inf) + n1 * log4
        if (n1 & 1) == 0:
            cell = b[u0, v0]
            ret[n1] = (np.log(cell) if cell > 0 else -np.inf) + n1 * log4
        a, b = b, a
    return out if want == "totals" else ret


def totals_log(m: ModelSpec, order: int, budget=None) -> np.ndarray:
    """Natural logs of the totals, from a scaled float64 run (~1e-12 relative)."""
    return _run_float(m, order, "totals", budget)


def returns_log(m: ModelSpec, order: int, budget=None) -> np.ndarray:
    """Natural logs of the return counts; -inf where the count is zero."""
    return _run_float(m, order, "returns", budget)
