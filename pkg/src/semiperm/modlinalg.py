"""Dense linear algebra over a prime field, tuned for guessing matrices.

Forward elimination uses first-nonzero-row pivoting, so the echelon form,
rank, and the nullspace basis extracted from it are all deterministic.
Two code paths produce identical results:

  * a panel-blocked path for p below 2**23.5: multipliers are collected
    for a 64-column panel and the trailing block is updated with one
    float64 matmul (exact, since 64 * (p-1)**2 < 2**53);
  * a plain per-pivot path for larger primes, with int64 outer products.

Rank certificates on the guessing matrices of the budget sweep are the
hot path; a 2000-column elimination runs in seconds on the blocked path.
"""

from __future__ import annotations

import numpy as np

_PANEL = 64
_F64_MAX = int((2**53 // _PANEL) ** 0.5)  # panel matmul stays exact below this


def _dot_mod(u: np.ndarray, v: np.ndarray, p: int) -> int:
    """Exact dot product of residue vectors mod p."""
    if len(u) == 0:
        return 0
    if p < (1 << 25):
        # products < 2**50, so int64 holds chunks of 4096 terms
        acc = 0
        for k in range(0, len(u), 4096):
            acc = (acc + int(np.dot(u[k : k + 4096], v[k : k + 4096]))) % p
        return acc
    return sum(int(a) * int(b) for a, b in zip(u, v)) % p


def _echelon_plain(a: np.ndarray, p: int) -> list[int]:
    """In-place row echelon form with normalized pivots; returns pivot cols."""
    rows, cols = a.shape
    rank = 0
    pivots = []
    for j in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(a[rank:, j])
        if nz.size == 0:
            continue
        i = rank + int(nz[0])
        if i != rank:
            a[[rank, i]] = a[[i, rank]]
        inv = pow(int(a[rank, j]), -1, p)
        a[rank, j:] = a[rank, j:] * inv % p
        f = a[rank + 1 :, j]
        live = np.flatnonzero(f)
        if live.size:
            block = a[rank + 1 :, j:]
            block[live] = (
                block[live] - np.outer(f[live], a[rank, j:])
            ) % p
        pivots.append(j)
        rank += 1
    return pivots


def _echelon_panel(a: np.ndarray, p: int) -> list[int]:
    """Blocked elimination; bitwise identical echelon form to the plain path."""
    rows, cols = a.shape
    rank = 0
    pivots = []
    for j0 in range(0, cols, _PANEL):
        j1 = min(j0 + _PANEL, cols)
        r0 = rank
        mult = np.zeros((rows, j1 - j0), dtype=np.int64)
        invs = []
        for j in range(j0, j1):
            if rank == rows:
                break
            nz = np.flatnonzero(a[rank:, j])
            if nz.size == 0:
                continue
            i = rank + int(nz[0])
            if i != rank:
                a[[rank, i]] = a[[i, rank]]
                mult[[rank, i]] = mult[[i, rank]]
            inv = pow(int(a[rank, j]), -1, p)
            a[rank, j0:j1] = a[rank, j0:j1] * inv % p
            f = a[rank + 1 :, j].copy()
            if f.any():
                a[rank + 1 :, j0:j1] = (
                    a[rank + 1 :, j0:j1] - np.outer(f, a[rank, j0:j1])
                ) % p
            mult[rank + 1 :, len(invs)] = f
            invs.append(inv)
            pivots.append(j)
            rank += 1
        npiv = len(invs)
        if npiv == 0 or j1 >= cols:
            continue
        # pivot rows first: subtract earlier pivots sequentially, then scale
        for l in range(npiv):
            r = r0 + l
            for m in range(l):
                fm = int(mult[r, m])
                if fm:
                    a[r, j1:] = (a[r, j1:] - fm * a[r0 + m, j1:]) % p
            a[r, j1:] = a[r, j1:] * invs[l] % p
        # all rows below the panel in one exact float64 matmul
        if rank < rows:
            mf = mult[rank:, :npiv].astype(np.float64)
            uf = a[r0:rank, j1:].astype(np.float64)
            prod = (mf @ uf) % p
            a[rank:, j1:] = (a[rank:, j1:] - prod.astype(np.int64)) % p
    return pivots


def echelon_mod(a: np.ndarray, p: int):
    """Row echelon form (copy) and pivot columns, first-nonzero-row pivoting."""
    work = np.ascontiguousarray(np.asarray(a, dtype=np.int64) % p)
    if p <= _F64_MAX:
        pivots = _echelon_panel(work, p)
    else:
        pivots = _echelon_plain(work, p)
    return work, pivots


def rank_mod(a: np.ndarray, p: int) -> int:
    return len(echelon_mod(a, p)[1])


def nullspace_mod(a: np.ndarray, p: int) -> list[np.ndarray]:
    """Deterministic right-nullspace basis, one vector per free column.

    Each vector has a 1 in its free column and is reduced mod p; vectors
    are ordered by free column index.
    """
    work, pivots = echelon_mod(a, p)
    cols = work.shape[1]
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for fc in free:
        x = np.zeros(cols, dtype=np.int64)
        x[fc] = 1
        for l in range(len(pivots) - 1, -1, -1):
            pc = pivots[l]
            if pc > fc:
                continue
            s = _dot_mod(work[l, pc + 1 :], x[pc + 1 :], p)
            x[pc] = (-s) % p
        basis.append(x)
    return basis
