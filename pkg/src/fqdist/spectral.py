"""Discrete Fourier analysis on F_q^d and the distance-set lower bounds.

The Fourier transform of (the indicator of) a set E is

    E^(m) = q^{-d} * sum_{x in E} chi(-m . x),

tabulated densely over all q^d frequencies m.  On top of it sit:

* the equal-norm pair variety V = {(x, y) : |x| = |y|} in F_q^{2d} and its
  closed-form transform
      V^(M) = q^{-1} delta_0(M) + q^{-d-1}(q - 1)   if |M|_* = 0,
      V^(M) = -q^{-d-1}                              otherwise;
* sphere restriction sums  R_t(B) = sum_{|m| = t} |B^(m)|^2;
* the pair-distance counting profile  nu(t) = |{(x,y) in AxB : |x-y| = t}|
  and its second moment; and
* two lower bounds for the number of distinct distances |D(A,B)|:
      |A|^2|B|^2 / (q^{-1}|A|^2|B|^2 + q^{2d} |A| max_t R_t(B))
  and the Cauchy-Schwarz bound |A|^2|B|^2 / sum_t nu(t)^2.

Quantities that are provably real (restriction sums, the variety transform)
are computed in complex arithmetic, checked to have negligible imaginary
part, and returned as floats — drift surfaces instead of hiding.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .field import Field, character_tolerance
from .geometry import (PointSet, all_vectors, norms_all, pair_star_form,
                       pairwise_norm_counts, sphere_enumerate)
from .limits import check_budget


@dataclass
class FourierTable:
    """Dense table of Fourier coefficients of an indicator set."""

    field: Field
    dim: int
    values: np.ndarray        # complex, length q^dim, indexed by encoded m
    source_size: int

    def coefficient(self, m) -> complex:
        idx = 0
        for c in m:
            idx = idx * self.field.q + int(c)
        return complex(self.values[idx])


def fourier_indicator(E: PointSet, chi_mult: int = 1, max_universe=None) -> FourierTable:
    """Fourier transform of 1_E over all q^d frequencies.

    chi_mult replaces the canonical additive character chi(t) by chi(c*t);
    every nontrivial additive character arises this way, which is how the
    tests confirm that conclusions do not depend on the choice of character.
    """
    field, d = E.field, E.dim
    q = field.q
    check_budget(q ** (2 * d), "Fourier table scan", max_universe)
    if chi_mult == 0:
        raise ValueError("character multiplier must be nonzero")
    M = all_vectors(field, d)
    acc = np.zeros(q**d, dtype=np.complex128)
    chi_conj = np.conj(field.chi_table)
    mult, add = field.mul_table, field.add_table
    X = E.points
    chunk = max(1, 4_000_000 // max(q**d, 1))
    for i0 in range(0, len(X), chunk):
        Xb = X[i0:i0 + chunk]
        dot = mult[M[:, None, 0], Xb[None, :, 0]]
        for i in range(1, d):
            dot = add[dot, mult[M[:, None, i], Xb[None, :, i]]]
        if chi_mult != 1:
            dot = mult[chi_mult, dot]
        acc += chi_conj[dot].sum(axis=1)
    return FourierTable(field, d, acc / q**d, len(E))


def fourier_inversion_value(table: FourierTable, x) -> complex:
    """sum_m chi(m . x) E^(m); equals 1_E(x) for indicator tables."""
    field, d = table.field, table.dim
    M = all_vectors(field, d)
    dot = field.mul_table[M[:, 0], x[0]]
    for i in range(1, d):
        dot = field.add_table[dot, field.mul_table[M[:, i], x[i]]]
    return complex((field.chi_table[dot] * table.values).sum())


def plancherel_mass(table: FourierTable) -> float:
    """sum_m |E^(m)|^2; equals q^{-d} |E| for an indicator set."""
    return float((np.abs(table.values) ** 2).sum())


# ---------------------------------------------------------------------------
# The equal-norm pair variety and its transform
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=16)
def equal_norm_variety(field: Field, d: int) -> PointSet:
    """{(x, y) in F_q^{2d} : |x| = |y|}, built sphere by sphere."""
    if d < 2:
        raise ValueError("the pair variety is defined for d >= 2")
    check_budget(field.q ** (2 * d), "pair-variety enumeration")
    blocks = []
    for t in range(field.q):
        S = sphere_enumerate(field, t, d).points
        n = len(S)
        if n:
            blocks.append(np.hstack([np.repeat(S, n, axis=0), np.tile(S, (n, 1))]))
    return PointSet(field, 2 * d, np.vstack(blocks))


def equal_norm_fourier_closed(field: Field, d: int, M) -> float:
    """Closed-form V^(M); always one of three rationals."""
    M = tuple(int(c) for c in M)
    if len(M) != 2 * d or d < 2:
        raise ValueError("frequency must have even length 2d, d >= 2")
    q = field.q
    star = pair_star_form(field, d)
    from .geometry import norm_form
    if norm_form(star, M) != 0:
        return -(q ** (-d - 1))
    val = q ** (-d - 1) * (q - 1)
    if all(c == 0 for c in M):
        val += 1 / q
    return val


def equal_norm_fourier_enum(field: Field, d: int, M, max_universe=None) -> float:
    """V^(M) by direct summation over the variety; must match the closed form."""
    M = tuple(int(c) for c in M)
    if len(M) != 2 * d:
        raise ValueError("frequency must have even length 2d")
    q = field.q
    check_budget(q ** (2 * d), "pair-variety Fourier scan", max_universe)
    V = equal_norm_variety(field, d).points
    mult, add = field.mul_table, field.add_table
    dot = mult[M[0], V[:, 0]]
    for i in range(1, 2 * d):
        dot = add[dot, mult[M[i], V[:, i]]]
    total = np.conj(field.chi_table)[dot].sum()
    tol = character_tolerance(len(V))
    if abs(total.imag) > tol:
        raise ArithmeticError(f"variety transform drifted off the real line: {total}")
    return float(total.real) / q ** (2 * d)


# ---------------------------------------------------------------------------
# Restriction sums
# ---------------------------------------------------------------------------

def restriction_profile(table: FourierTable) -> np.ndarray:
    """R_t = sum over the radius-t sphere of |B^(m)|^2, for every t at once."""
    weights = np.abs(table.values) ** 2
    return np.bincount(norms_all(table.field, table.dim), weights=weights,
                       minlength=table.field.q)


def restriction_sum(B: PointSet | FourierTable, t: int) -> float:
    """R_t(B); nonnegative and never above the Plancherel mass q^{-d}|B|."""
    table = B if isinstance(B, FourierTable) else fourier_indicator(B)
    val = float(restriction_profile(table)[t])
    cap = table.source_size / table.field.q ** table.dim
    if val > cap + character_tolerance(table.field.q ** table.dim):
        raise ArithmeticError(f"restriction sum {val} exceeds Plancherel mass {cap}")
    return val


def max_restriction(B: PointSet | FourierTable) -> float:
    table = B if isinstance(B, FourierTable) else fourier_indicator(B)
    return float(restriction_profile(table).max())


def coordinatable_restriction_cap(field: Field, d: int, size: int) -> float:
    """2 q^{-d-1} |B|: the restriction ceiling for sets inside rotated/translated
    coordinate planes of dimension 1..d-1."""
    return 2.0 * size / field.q ** (d + 1)


# ---------------------------------------------------------------------------
# Distance counting and the lower bounds
# ---------------------------------------------------------------------------

@dataclass
class DistanceCounts:
    """nu(t) = number of (x, y) in A x B with |x - y| = t, for every t."""

    field: Field
    dim: int
    counts: np.ndarray        # int64, length q
    size_a: int
    size_b: int

    def support(self) -> tuple[int, ...]:
        return tuple(int(t) for t in np.nonzero(self.counts)[0])

    def total(self) -> int:
        return int(self.counts.sum())


def distance_counts(A: PointSet, B: PointSet, max_universe=None) -> DistanceCounts:
    counts = pairwise_norm_counts(A, B, max_universe=max_universe)
    return DistanceCounts(A.field, A.dim, counts, len(A), len(B))


def second_moment(A: PointSet, B: PointSet, max_universe=None) -> int:
    """sum_t nu(t)^2, computed two independent ways.

    Route 1 squares the counting profile; route 2 counts the quadruples
    (x, z, y, w) with |x-y| = |z-w| by literal pairwise comparison of the
    |A||B| norm values.  The two must agree exactly.
    """
    field = A.field
    n = len(A) * len(B)
    check_budget(n * n, "distance second-moment quadruple scan", max_universe)
    profile = distance_counts(A, B, max_universe=max_universe).counts
    direct = int((profile.astype(object) ** 2).sum())

    sub, sq, add = field.sub_table, field.sq_table, field.add_table
    D = sub[A.points[:, None, :], B.points[None, :, :]]
    S = sq[D]
    vals = S[..., 0]
    for j in range(1, A.dim):
        vals = add[vals, S[..., j]]
    flat = vals.ravel()
    quadruples = 0
    blk = max(1, 4_000_000 // max(1, n))
    for i0 in range(0, n, blk):
        quadruples += int((flat[i0:i0 + blk, None] == flat[None, :]).sum())
    if direct != quadruples:
        raise ArithmeticError(
            f"second-moment mismatch: profile route {direct}, quadruple route {quadruples}"
        )
    return direct


def restriction_distance_bound(A: PointSet, B: PointSet, chi_mult: int = 1,
                               max_universe=None) -> float:
    """|A|^2|B|^2 / (q^{-1}|A|^2|B|^2 + q^{2d} |A| max_t R_t(B)).

    A certified lower bound for the number of distinct distances between A
    and B; the max runs over all t in F_q including t = 0.
    """
    if len(A) == 0 or len(B) == 0:
        raise ValueError("distance bounds need nonempty sets")
    field, d = A.field, A.dim
    q = field.q
    table = fourier_indicator(B, chi_mult=chi_mult, max_universe=max_universe)
    rmax = max_restriction(table)
    a2b2 = (len(A) * len(B)) ** 2
    denom = a2b2 / q + q ** (2 * d) * len(A) * rmax
    return a2b2 / denom


def cauchy_schwarz_bound(A: PointSet, B: PointSet, max_universe=None) -> float:
    """|A|^2|B|^2 / sum_t nu(t)^2, the energy form of the distance bound."""
    if len(A) == 0 or len(B) == 0:
        raise ValueError("distance bounds need nonempty sets")
    energy = second_moment(A, B, max_universe=max_universe)
    return (len(A) * len(B)) ** 2 / energy


# ---------------------------------------------------------------------------
# Report files
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def write_restriction_report(B: PointSet, path):
    """CSV of t, R_t, the coordinatable ceiling 2q^{-d-1}|B|, and the slack."""
    table = fourier_indicator(B)
    profile = restriction_profile(table)
    cap = coordinatable_restriction_cap(B.field, B.dim, len(B))
    with open(path, "w") as fh:
        fh.write("t,R_t,bound_2q^(-d-1)|B|,slack\n")
        for t in range(B.field.q):
            r = float(profile[t])
            fh.write(f"{t},{_fmt(r)},{_fmt(cap)},{_fmt(cap - r)}\n")


def write_nu_report(counts: DistanceCounts, path):
    """CSV of t, nu(t)."""
    with open(path, "w") as fh:
        fh.write("t,nu\n")
        for t in range(counts.field.q):
            fh.write(f"{t},{int(counts.counts[t])}\n")
