"""Fitting and verifying P-recurrences and ODEs from sequence prefixes.

Guessing runs over a prime field (the only tractable arithmetic at scale)
and candidates are validated on held-out terms; exact verification of a
known recurrence runs over any ring.  The linear systems follow the
standard ansatz: nullspace vectors of the matrix with rows indexed by n
and columns by (shift k, power e) give sum_k p_k(n) a_{n+k} = 0, and the
ODE variant uses columns (derivative order i, t-power j).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .rings import CoefficientRing, ExactInteger, ExactRational, ModPrime, ZZ
from .modlinalg import nullspace_mod, rank_mod

SAFETY_MARGIN = 10
HOLDOUT_FRACTION = 0.25


def _poly_eval(coeffs, n, ring):
    acc = ring.zero()
    for c in reversed(coeffs):
        acc = ring.add(ring.mul(acc, ring.from_int(n)), c)
    return acc


@dataclass(frozen=True)
class Recurrence:
    """sum_{k=0}^{r} p_k(n) * a_{n+k} = 0 for all n >= 0.

    ``coeffs[k]`` lists p_k's coefficients by ascending power of n; the
    leading polynomial p_r must not vanish identically.
    """

    ring: CoefficientRing
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("empty recurrence")
        if all(self.ring.is_zero(c) for c in self.coeffs[-1]):
            raise ValueError("leading polynomial is zero")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        deg = 0
        for poly in self.coeffs:
            for e, c in enumerate(poly):
                if not self.ring.is_zero(c):
                    deg = max(deg, e)
        return deg

    def poly(self, k: int):
        return self.coeffs[k]

    def apply(self, terms, n: int):
        ring = self.ring
        acc = ring.zero()
        for k, poly in enumerate(self.coeffs):
            acc = ring.add(acc, ring.mul(_poly_eval(poly, n, ring), terms[n + k]))
        return acc

    def support(self):
        return frozenset(
            (k, e)
            for k, poly in enumerate(self.coeffs)
            for e, c in enumerate(poly)
            if not self.ring.is_zero(c)
        )

    def __str__(self):
        def fmt_poly(poly):
            bits = []
            for e, c in enumerate(poly):
                if self.ring.is_zero(c):
                    continue
                if e == 0:
                    bits.append(f"{c}")
                elif e == 1:
                    bits.append(f"{c}*n")
                else:
                    bits.append(f"{c}*n^{e}")
            return " + ".join(bits) if bits else "0"

        parts = [f"({fmt_poly(p)})*a(n+{k})" for k, p in enumerate(self.coeffs)]
        return " + ".join(parts) + " = 0"


def recurrence_from_polys(ring, polys) -> Recurrence:
    """Build from per-shift coefficient lists, trimming to canonical length."""
    polys = [tuple(ring.from_int(c) if isinstance(c, int) else c for c in poly) for poly in polys]
    while polys and all(ring.is_zero(c) for c in polys[-1]):
        polys.pop()
    if not polys:
        raise ValueError("zero recurrence")
    deg = 0
    for poly in polys:
        for e, c in enumerate(poly):
            if not ring.is_zero(c):
                deg = max(deg, e)
    trimmed = tuple(tuple(poly[: deg + 1]) + (ring.zero(),) * (deg + 1 - len(poly[: deg + 1])) for poly in polys)
    return Recurrence(ring, trimmed)


def verify_recurrence(rec: Recurrence, terms) -> int | None:
    """First index n where the relation fails, or None if it holds everywhere.

    ``terms`` must already live in the recurrence's ring (or be plain ints).
    """
    r = rec.order
    if len(terms) < r + 1:
        raise ValueError(f"need at least {r + 1} terms, got {len(terms)}")
    ring = rec.ring
    if isinstance(ring, ModPrime):
        res = _apply_mod(rec, np.asarray([int(t) for t in terms], dtype=np.int64), ring.p)
        bad = np.flatnonzero(res)
        return int(bad[0]) if bad.size else None
    vals = [ring.from_int(t) if isinstance(t, int) else t for t in terms]
    for n in range(len(vals) - r):
        if not ring.is_zero(rec.apply(vals, n)):
            return n
    return None


def _apply_mod(rec: Recurrence, terms: np.ndarray, p: int) -> np.ndarray:
    """Vector of residuals sum_k p_k(n) a_{n+k} mod p for all valid n."""
    r = rec.order
    rows = len(terms) - r
    n_arr = np.arange(rows, dtype=np.int64)
    out = np.zeros(rows, dtype=np.int64)
    for k, poly in enumerate(rec.coeffs):
        pk = np.zeros(rows, dtype=np.int64)
        for c in reversed(poly):
            pk = (pk * n_arr + int(c)) % p
        out = (out + pk * (terms[k : k + rows] % p)) % p
    return out


def guess_recurrence(terms, r: int, d: int, p: int, margin: int = SAFETY_MARGIN):
    """Nullspace basis of the ansatz system over GF(p), as Recurrences.

    Rows are n = 0 .. len(terms)-r-1; columns are (k, e) with entry
    n^e * a_{n+k} mod p.  Needs (r+1)(d+1) + r + margin terms.
    """
    need = (r + 1) * (d + 1) + r + margin
    if len(terms) < need:
        raise ValueError(f"need at least {need} terms for (r,d)=({r},{d}), got {len(terms)}")
    a = np.asarray([int(t) for t in terms], dtype=np.int64) % p
    rows = len(terms) - r
    n_arr = np.arange(rows, dtype=np.int64)
    powers = np.ones((d + 1, rows), dtype=np.int64)
    for e in range(1, d + 1):
        powers[e] = powers[e - 1] * n_arr % p
    mat = np.empty((rows, (r + 1) * (d + 1)), dtype=np.int64)
    for k in range(r + 1):
        shifted = a[k : k + rows]
        for e in range(d + 1):
            mat[:, k * (d + 1) + e] = powers[e] * shifted % p
    ring = ModPrime(p)
    out = []
    for vec in nullspace_mod(mat, p):
        polys = [vec[k * (d + 1) : (k + 1) * (d + 1)].tolist() for k in range(r + 1)]
        out.append(canonicalize(recurrence_from_polys(ring, polys)))
    out.sort(key=sort_key)
    return out


def canonicalize(rec: Recurrence) -> Recurrence:
    """Unique representative: trimmed, content-free, normalized leading term.

    Mod p the leading polynomial becomes monic; over the exact rings the
    integer content is divided out and the leading coefficient made
    positive.  Idempotent.
    """
    ring = rec.ring
    polys = [list(p) for p in rec.coeffs]
    while polys and all(ring.is_zero(c) for c in polys[-1]):
        polys.pop()
    if not polys:
        raise ValueError("zero recurrence")
    if isinstance(ring, ModPrime):
        lead_poly = polys[-1]
        lead = next(c for c in reversed(lead_poly) if not ring.is_zero(c))
        scale = ring.inv(lead)
        polys = [[ring.mul(c, scale) for c in poly] for poly in polys]
        return recurrence_from_polys(ring, polys)
    # exact: clear denominators, divide by gcd, sign-normalize
    fracs = [[Fraction(c) for c in poly] for poly in polys]
    denom = 1
    for poly in fracs:
        for c in poly:
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
    ints = [[int(c * denom) for c in poly] for poly in fracs]
    content = 0
    for poly in ints:
        for c in poly:
            content = math.gcd(content, c)
    lead = next(c for c in reversed(ints[-1]) if c != 0)
    sign = -1 if lead < 0 else 1
    ints = [[c // (sign * content) for c in poly] for poly in ints]
    out_ring = rec.ring if isinstance(rec.ring, ExactInteger) else rec.ring
    return recurrence_from_polys(out_ring, ints)


def sort_key(rec: Recurrence):
    flat = tuple(tuple(int(c) if not isinstance(c, Fraction) else c for c in poly) for poly in rec.coeffs)
    return (rec.order, rec.degree, flat)


def reduce_mod(rec: Recurrence, p: int) -> Recurrence:
    """Image of an exact recurrence in GF(p)."""
    ring = ModPrime(p)
    polys = [[int(c) % p for c in poly] for poly in rec.coeffs]
    return recurrence_from_polys(ring, polys)


# ------------------------------------------------------------- search


@dataclass
class GuessReport:
    budget: int
    prime: int
    terms_used: int
    terms_heldout: int
    pairs_swept: int
    max_order: int
    max_degree: int
    found: list = field(default_factory=list)
    holdout_verified: list = field(default_factory=list)

    def verified(self):
        return [rec for rec, ok in zip(self.found, self.holdout_verified) if ok]

    def to_json(self) -> str:
        return json.dumps(
            {
                "budget": self.budget,
                "prime": self.prime,
                "terms_used": self.terms_used,
                "terms_heldout": self.terms_heldout,
                "pairs_swept": self.pairs_swept,
                "max_order": self.max_order,
                "max_degree": self.max_degree,
                "found": [
                    {
                        "order": rec.order,
                        "degree": rec.degree,
                        "holdout_verified": ok,
                        "coeffs": [[int(c) for c in poly] for poly in rec.coeffs],
                        "printed": str(rec),
                    }
                    for rec, ok in zip(self.found, self.holdout_verified)
                ],
            },
            indent=2,
        )


def _sweep_pairs(budget: int, prefix_len: int, margin: int):
    """(r, d) pairs within budget and data, by increasing (r+1)(d+1), then r."""
    pairs = []
    r = 0
    while (r + 1) <= budget:
        if prefix_len - r - margin < r + 1:
            break
        dmax = budget // (r + 1) - 1
        dmax = min(dmax, (prefix_len - r - margin) // (r + 1) - 1)
        for d in range(dmax + 1):
            pairs.append((r, d))
        r += 1
    pairs.sort(key=lambda rd: ((rd[0] + 1) * (rd[1] + 1), rd[0]))
    return pairs


def _cover_pairs(pairs):
    """Maximal pairs: emptiness there certifies emptiness of the dominated."""
    best = {}
    for r, d in pairs:
        if d not in best or r > best[d]:
            best[d] = r
    cover = {(r, d) for d, r in best.items()}
    # drop covers dominated by another cover
    return sorted(
        (r, d)
        for (r, d) in cover
        if not any((r2 >= r and d2 >= d and (r2, d2) != (r, d)) for (r2, d2) in cover)
    )


def _pair_matrix(a_mod: np.ndarray, r: int, d: int, p: int, rows: int | None = None):
    total_rows = len(a_mod) - r
    if rows is not None:
        total_rows = min(total_rows, rows)
    n_arr = np.arange(total_rows, dtype=np.int64)
    powers = np.ones((d + 1, total_rows), dtype=np.int64)
    for e in range(1, d + 1):
        powers[e] = powers[e - 1] * n_arr % p
    mat = np.empty((total_rows, (r + 1) * (d + 1)), dtype=np.int64)
    for k in range(r + 1):
        shifted = a_mod[k : k + total_rows]
        for e in range(d + 1):
            mat[:, k * (d + 1) + e] = powers[e] * shifted % p
    return mat


def guess_search(
    terms,
    budget: int,
    p: int,
    holdout: float = HOLDOUT_FRACTION,
    margin: int = SAFETY_MARGIN,
) -> GuessReport:
    """Sweep (r, d) pairs by increasing (r+1)(d+1), guess on the prefix,
    validate candidates on all supplied terms; stop at the first hold-out
    survivor or on budget exhaustion.

    When every maximal pair in the budget certifies an empty nullspace
    (rank check on an over-determined row prefix, which can only shrink
    the nullspace), all dominated pairs are empty too and the sweep is
    skipped; the result is identical to the full sweep.
    """
    n_hold = max(1, int(len(terms) * holdout))
    prefix = terms[: len(terms) - n_hold]
    pairs = _sweep_pairs(budget, len(prefix), margin)
    report = GuessReport(
        budget=budget,
        prime=p,
        terms_used=len(prefix),
        terms_heldout=n_hold,
        pairs_swept=len(pairs),
        max_order=max((r for r, _ in pairs), default=0),
        max_degree=max((d for _, d in pairs), default=0),
    )
    if not pairs:
        return report
    a_mod = np.asarray([int(t) for t in prefix], dtype=np.int64) % p
    all_mod = np.asarray([int(t) for t in terms], dtype=np.int64) % p

    covers = _cover_pairs(pairs)
    all_empty = True
    for r, d in covers:
        cols = (r + 1) * (d + 1)
        mat = _pair_matrix(a_mod, r, d, p, rows=cols + margin)
        if rank_mod(mat, p) < cols:
            all_empty = False
            break
    if all_empty:
        return report

    for r, d in pairs:
        basis = guess_recurrence(prefix, r, d, p, margin=margin)
        if not basis:
            continue
        hit = False
        for rec in basis:
            ok = not np.any(_apply_mod(rec, all_mod, p))
            report.found.append(rec)
            report.holdout_verified.append(bool(ok))
            hit = hit or ok
        if hit:
            break
    return report


def two_prime_strength(report_a: GuessReport, report_b: GuessReport):
    """Label report_a's hold-out survivors 'strong' when a survivor at the
    second prime shares (order, degree) and monomial support, else 'weak'."""
    other = {
        (rec.order, rec.degree, rec.support())
        for rec, ok in zip(report_b.found, report_b.holdout_verified)
        if ok
    }
    labels = []
    for rec, ok in zip(report_a.found, report_a.holdout_verified):
        if not ok:
            labels.append("rejected")
        elif (rec.order, rec.degree, rec.support()) in other:
            labels.append("strong")
        else:
            labels.append("weak")
    return labels


# ------------------------------------------------------------------ ODEs


@dataclass(frozen=True)
class OdeRelation:
    """sum_{i<=r} q_i(t) f^(i)(t) = 0 with q_i of degree <= d, over GF(p)."""

    p: int
    coeffs: tuple  # coeffs[i][j] = coefficient of t^j in q_i

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def degree(self):
        return max(
            (j for poly in self.coeffs for j, c in enumerate(poly) if c % self.p),
            default=0,
        )

    def __str__(self):
        def fmt(poly):
            bits = [
                (f"{c}" if j == 0 else f"{c}*t^{j}" if j > 1 else f"{c}*t")
                for j, c in enumerate(poly)
                if c % self.p
            ]
            return " + ".join(bits) if bits else "0"

        return (
            " + ".join(f"({fmt(q)})*f^({i})" for i, q in enumerate(self.coeffs))
            + " = 0"
        )


def _falling_table(max_n: int, max_i: int, p: int) -> np.ndarray:
    """ff[i, s] = s (s-1) ... (s-i+1) mod p."""
    ff = np.zeros((max_i + 1, max_n + 1), dtype=np.int64)
    ff[0, :] = 1
    s = np.arange(max_n + 1, dtype=np.int64)
    for i in range(1, max_i + 1):
        ff[i] = ff[i - 1] * ((s - i + 1) % p) % p
    return ff


def _ode_matrix(a_mod: np.ndarray, r: int, d: int, p: int, rows: int | None = None):
    length = len(a_mod)
    total_rows = length - r
    if rows is not None:
        total_rows = min(total_rows, rows)
    ff = _falling_table(length - 1, r, p)
    mat = np.zeros((total_rows, (r + 1) * (d + 1)), dtype=np.int64)
    m_arr = np.arange(total_rows, dtype=np.int64)
    for i in range(r + 1):
        for j in range(d + 1):
            s = m_arr - j + i
            valid = (s >= 0) & (s < length)
            col = np.zeros(total_rows, dtype=np.int64)
            sv = s[valid]
            col[valid] = ff[i, sv] * a_mod[sv] % p
            mat[:, i * (d + 1) + j] = col
    return mat


def guess_ode(terms, r: int, d: int, p: int, margin: int = SAFETY_MARGIN):
    """Nullspace basis of the ODE ansatz over GF(p), as OdeRelations."""
    need = (r + 1) * (d + 1) + r + margin
    if len(terms) < need:
        raise ValueError(f"need at least {need} terms for (r,d)=({r},{d}), got {len(terms)}")
    a_mod = np.asarray([int(t) for t in terms], dtype=np.int64) % p
    mat = _ode_matrix(a_mod, r, d, p)
    out = []
    for vec in nullspace_mod(mat, p):
        coeffs = tuple(
            tuple(int(c) for c in vec[i * (d + 1) : (i + 1) * (d + 1)])
            for i in range(r + 1)
        )
        out.append(OdeRelation(p, coeffs))
    return out


def ode_residual_indices(ode: OdeRelation, terms) -> np.ndarray:
    """Indices m where the t^m coefficient of sum q_i f^(i) is nonzero."""
    p = ode.p
    a_mod = np.asarray([int(t) for t in terms], dtype=np.int64) % p
    r = ode.order
    d = max(len(q) for q in ode.coeffs) - 1
    mat = _ode_matrix(a_mod, r, d, p)
    vec = np.zeros((r + 1) * (d + 1), dtype=np.int64)
    for i, poly in enumerate(ode.coeffs):
        for j, c in enumerate(poly):
            vec[i * (d + 1) + j] = c % p
    res = mat @ vec % p  # products < p^2 and cols*p^2 < 2^63 for p < 2^25
    return np.flatnonzero(res)


def verify_ode(ode: OdeRelation, terms) -> int | None:
    bad = ode_residual_indices(ode, terms)
    return int(bad[0]) if bad.size else None
