"""Vectors, point sets, quadratic forms, spheres, lines, and rotations in F_q^d.

Points are integer tuples (element indices); a PointSet stores them as a
deduplicated, lexicographically sorted numpy array so that every scan in the
package is deterministic and vectorizable.  The three norms in play are

* the standard norm  |x| = sum_i x_i^2,
* the canonical diagonal forms  x_1^2 - x_2^2 + ... (+/- eps * x_d^2), and
* the pair norm  |(x, y)|_* = |x| - |y|  on dimension-2d vectors,

all with values in F_q (they are polynomials, not metrics).
"""

from __future__ import annotations

import csv
import functools
import json
from dataclasses import dataclass

import numpy as np

from .field import Field, field_from_q
from .limits import check_budget

Vector = tuple[int, ...]


# ---------------------------------------------------------------------------
# Point sets
# ---------------------------------------------------------------------------

class PointSet:
    """A finite subset of F_q^d: deduplicated, lexicographically sorted rows."""

    __slots__ = ("field", "dim", "points")

    def __init__(self, field: Field, dim: int, points):
        if dim < 0:
            raise ValueError("dimension must be >= 0")
        arr = np.asarray(list(points) if not isinstance(points, np.ndarray) else points,
                         dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, dim)
        if arr.ndim != 2 or arr.shape[1] != dim:
            raise ValueError(f"points must be rows of length {dim}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError("coordinate out of range [0, q)")
        if arr.shape[0] and dim > 0:
            arr = np.unique(arr, axis=0)
        elif arr.shape[0]:
            arr = arr[:1]  # dim-0 edge: the empty tuple, at most once
        arr.setflags(write=False)
        self.field = field
        self.dim = dim
        self.points = arr

    @classmethod
    def full_space(cls, field: Field, dim: int, max_universe=None) -> "PointSet":
        check_budget(field.q**dim, f"enumerating F_{field.q}^{dim}", max_universe)
        return cls(field, dim, all_vectors(field, dim))

    @property
    def arr(self) -> np.ndarray:
        return self.points

    def __len__(self):
        return self.points.shape[0]

    def __iter__(self):
        for row in self.points:
            yield tuple(int(c) for c in row)

    def __contains__(self, v):
        if len(self) == 0:
            return False
        row = np.asarray(v, dtype=np.int64)
        keys = _row_key(self.field, self.points)
        i = int(np.searchsorted(keys, _row_key(self.field, row[None, :])[0]))
        return i < len(self) and bool((self.points[i] == row).all())

    def __eq__(self, other):
        return (isinstance(other, PointSet) and self.field == other.field
                and self.dim == other.dim and self.points.shape == other.points.shape
                and bool((self.points == other.points).all()))

    def __repr__(self):
        return f"PointSet(q={self.field.q}, dim={self.dim}, n={len(self)})"

    def union(self, other: "PointSet") -> "PointSet":
        if self.field != other.field or self.dim != other.dim:
            raise ValueError("mismatched point sets")
        return PointSet(self.field, self.dim, np.vstack([self.points, other.points]))

    # -- CSV / JSON wire formats ------------------------------------------------
    # CSV: header "dim=d,q=q", then one row of d element indices per point.

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write(f"dim={self.dim},q={self.field.q}\n")
            w = csv.writer(fh)
            for row in self.points:
                w.writerow([int(c) for c in row])

    @classmethod
    def from_csv(cls, path) -> "PointSet":
        with open(path, newline="") as fh:
            header = fh.readline().strip()
            try:
                items = dict(kv.split("=") for kv in header.split(","))
                dim, q = int(items["dim"]), int(items["q"])
            except Exception as exc:
                raise ValueError(f"bad point-set header {header!r}") from exc
            field = field_from_q(q)
            rows = [[int(c) for c in row] for row in csv.reader(fh) if row]
        return cls(field, dim, rows)

    def to_json_obj(self) -> dict:
        return {"dim": self.dim, "q": self.field.q,
                "points": [[int(c) for c in row] for row in self.points]}

    @classmethod
    def from_json_obj(cls, obj) -> "PointSet":
        return cls(field_from_q(int(obj["q"])), int(obj["dim"]), obj["points"])

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json_obj(), fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_json(cls, path) -> "PointSet":
        with open(path) as fh:
            return cls.from_json_obj(json.load(fh))


def _row_key(field: Field, arr: np.ndarray) -> np.ndarray:
    """Flat index of each row in C order (first coordinate most significant)."""
    d = arr.shape[1]
    weights = field.q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    return arr @ weights if d else np.zeros(arr.shape[0], dtype=np.int64)


@functools.lru_cache(maxsize=64)
def all_vectors(field: Field, d: int) -> np.ndarray:
    """All q^d vectors as rows, ascending in encoded (C-order) index."""
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((field.q,) * d).reshape(d, -1).T
    return np.ascontiguousarray(grids.astype(np.int64))


def decode_indices(field: Field, d: int, idx: np.ndarray) -> np.ndarray:
    out = np.empty((len(idx), d), dtype=np.int64)
    rem = np.asarray(idx, dtype=np.int64)
    for i in range(d - 1, -1, -1):
        rem, out[:, i] = np.divmod(rem, field.q)
    return out


def product_points(*sets: PointSet) -> PointSet:
    """Cartesian product, concatenating coordinates."""
    field = sets[0].field
    arrs = [s.points for s in sets]
    out = arrs[0]
    for nxt in arrs[1:]:
        n1, n2 = out.shape[0], nxt.shape[0]
        out = np.hstack([np.repeat(out, n2, axis=0), np.tile(nxt, (n1, 1))])
    return PointSet(field, sum(s.dim for s in sets), out)


# ---------------------------------------------------------------------------
# Norms and quadratic forms
# ---------------------------------------------------------------------------

def norm_rows(field: Field, arr: np.ndarray, coeffs: np.ndarray | None = None) -> np.ndarray:
    """sum_i c_i * x_i^2 for every row; coeffs None means the standard norm."""
    n, d = arr.shape
    if d == 0:
        return np.zeros(n, dtype=np.int64)
    sq = field.sq_table[arr]
    if coeffs is not None:
        sq = field.mul_table[np.broadcast_to(coeffs, sq.shape), sq]
    acc = sq[:, 0]
    add = field.add_table
    for i in range(1, d):
        acc = add[acc, sq[:, i]]
    return acc


def norm(field: Field, x: Vector) -> int:
    """Standard norm sum x_i^2, an element of F_q."""
    acc = 0
    for c in x:
        acc = field.add(acc, field.mul(c, c))
    return acc


def epsilon_for_dimension(field: Field, d: int) -> int:
    """Dimension-only choice of the diagonal form's last coefficient.

    Returns 1 when d = 0, 1 (mod 4) and -1 otherwise; either way the parity
    side condition eta((-1)^{floor(d/2)} * eps) = 1 holds in every odd
    characteristic.
    """
    if d < 2:
        raise ValueError("diagonal forms need d >= 2")
    return 1 if d % 4 in (0, 1) else field.neg(1)


@dataclass(frozen=True)
class QuadraticForm:
    """Which norm is in force: standard, a canonical diagonal form, or the pair norm."""

    field: Field
    kind: str           # standard | canonical_even | canonical_odd | pair_star
    dim: int            # length of the vectors the form consumes
    epsilon: int | None = None

    def __post_init__(self):
        f, d = self.field, self.dim
        if self.kind == "standard":
            if d < 1:
                raise ValueError("standard form needs d >= 1")
        elif self.kind == "canonical_even":
            if d % 2 or d < 2:
                raise ValueError("canonical_even requires even d >= 2")
            if not self.epsilon:
                raise ValueError("canonical forms need a nonzero epsilon")
            if f.eta(f.mul(f.pow(f.neg(1), d // 2), self.epsilon)) != 1:
                raise ValueError("epsilon violates the even-dimension side condition")
        elif self.kind == "canonical_odd":
            if d % 2 == 0 or d < 3:
                raise ValueError("canonical_odd requires odd d >= 3")
            if not self.epsilon:
                raise ValueError("canonical forms need a nonzero epsilon")
            if f.eta(f.mul(f.pow(f.neg(1), (d - 1) // 2), self.epsilon)) != 1:
                raise ValueError("epsilon violates the odd-dimension side condition")
        elif self.kind == "pair_star":
            if d % 2 or d < 2:
                raise ValueError("pair_star consumes even-length vectors (x, y)")
        else:
            raise ValueError(f"unknown form kind {self.kind!r}")

    @functools.cache
    def diag(self) -> np.ndarray:
        """Per-coordinate coefficients c_i with form(x) = sum c_i x_i^2."""
        f, d = self.field, self.dim
        one, minus = 1, f.neg(1)
        if self.kind == "standard":
            coeffs = [one] * d
        elif self.kind == "pair_star":
            coeffs = [one] * (d // 2) + [minus] * (d // 2)
        else:
            coeffs = [one if i % 2 == 0 else minus for i in range(d - 1)]
            coeffs.append(f.neg(self.epsilon) if self.kind == "canonical_even"
                          else self.epsilon)
        out = np.array(coeffs, dtype=np.int64)
        out.setflags(write=False)
        return out


def standard_form(field: Field, d: int) -> QuadraticForm:
    return QuadraticForm(field, "standard", d)


def canonical_form(field: Field, d: int, epsilon: int | None = None) -> QuadraticForm:
    """The alternating-sign diagonal form equivalent to the standard norm."""
    if epsilon is None:
        epsilon = epsilon_for_dimension(field, d)
    kind = "canonical_even" if d % 2 == 0 else "canonical_odd"
    return QuadraticForm(field, kind, d, epsilon)


def pair_star_form(field: Field, d: int) -> QuadraticForm:
    """|(x, y)|_* = |x| - |y| on vectors of length 2d."""
    return QuadraticForm(field, "pair_star", 2 * d)


def norm_form(form: QuadraticForm, x: Vector) -> int:
    if len(x) != form.dim:
        raise ValueError(f"form expects dimension {form.dim}, got {len(x)}")
    arr = np.asarray(x, dtype=np.int64)[None, :]
    return int(norm_rows(form.field, arr, form.diag())[0])


# ---------------------------------------------------------------------------
# Spheres
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=64)
def norms_all(field: Field, d: int) -> np.ndarray:
    """Standard norm of every vector of F_q^d, indexed by encoded index."""
    return norm_rows(field, all_vectors(field, d))


def sphere_enumerate(field: Field, t: int, d: int, max_universe=None) -> PointSet:
    """The level set {x : |x| = t}, by exhaustive scan of F_q^d."""
    check_budget(field.q**d, f"sphere scan in F_{field.q}^{d}", max_universe)
    vals = norms_all(field, d)
    return PointSet(field, d, all_vectors(field, d)[vals == t])


def sphere_cardinality(field: Field, t: int, d: int) -> int:
    """Closed-form |{x : |x| = t}| for d >= 2.

    Even d:  q^{d-1} + w(t) q^{(d-2)/2} eta((-1)^{d/2}),
    odd d:   q^{d-1} + q^{(d-1)/2} eta(t (-1)^{(d-1)/2}),
    with w(t) = -1 for t != 0 and w(0) = q - 1; eta(0) = 0 makes the odd-d
    correction vanish at t = 0.
    """
    if d < 2:
        raise ValueError("sphere cardinality formula needs d >= 2")
    f, q = field, field.q
    if d % 2 == 0:
        w = q - 1 if t == 0 else -1
        return q ** (d - 1) + w * q ** ((d - 2) // 2) * f.eta(f.pow(f.neg(1), d // 2))
    sign = f.eta(f.mul(t, f.pow(f.neg(1), (d - 1) // 2)))
    return q ** (d - 1) + q ** ((d - 1) // 2) * sign


# ---------------------------------------------------------------------------
# Coordinate planes and lines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoordinatePlane:
    """Subspace spanned by the chosen coordinate axes (1-based), rest pinned to 0."""

    field: Field
    dim: int
    axes: tuple[int, ...]

    def __post_init__(self):
        if not self.axes:
            raise ValueError("a coordinate plane needs at least one axis")
        if any(a < 1 or a > self.dim for a in self.axes):
            raise ValueError(f"axes must lie in 1..{self.dim}")
        if len(set(self.axes)) != len(self.axes):
            raise ValueError("duplicate axes")

    @property
    def k(self) -> int:
        return len(self.axes)

    @property
    def point_count(self) -> int:
        return self.field.q ** self.k

    def enumerate(self, max_universe=None) -> PointSet:
        check_budget(self.point_count, "coordinate plane enumeration", max_universe)
        free = all_vectors(self.field, self.k)
        out = np.zeros((len(free), self.dim), dtype=np.int64)
        for col, axis in enumerate(sorted(self.axes)):
            out[:, axis - 1] = free[:, col]
        return PointSet(self.field, self.dim, out)

    def contains(self, v: Vector) -> bool:
        ax = set(self.axes)
        return all(c == 0 for i, c in enumerate(v, start=1) if i not in ax)


def coordinate_plane(field: Field, axes, d: int) -> CoordinatePlane:
    return CoordinatePlane(field, d, tuple(sorted(int(a) for a in axes)))


def slope_line(field: Field, lam: int, a: int = 0, b: int = 0) -> PointSet:
    """The planar line {(t + a, lam*t + b) : t in F_q}."""
    t = np.arange(field.q, dtype=np.int64)
    x1 = field.add_table[t, a]
    x2 = field.add_table[field.mul_table[lam, t], b]
    return PointSet(field, 2, np.column_stack([x1, x2]))


# ---------------------------------------------------------------------------
# Affine maps and rotations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """x -> M x + shift over F_q, with small-matrix helpers."""

    field: Field
    matrix: tuple[tuple[int, ...], ...]
    shift: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.shift)

    def apply(self, x: Vector) -> Vector:
        f = self.field
        out = []
        for i, row in enumerate(self.matrix):
            acc = self.shift[i]
            for j, m in enumerate(row):
                acc = f.add(acc, f.mul(m, x[j]))
            out.append(acc)
        return tuple(out)

    def is_rotation(self) -> bool:
        """Special-orthogonal check: M^T M = I and det M = 1."""
        f, d = self.field, self.dim
        for i in range(d):
            for j in range(d):
                acc = 0
                for k in range(d):
                    acc = f.add(acc, f.mul(self.matrix[k][i], self.matrix[k][j]))
                if acc != (1 if i == j else 0):
                    return False
        return mat_det(f, self.matrix) == 1


def mat_det(field: Field, m) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    acc = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = field.mul(m[0][j], mat_det(field, minor))
        acc = field.add(acc, term) if j % 2 == 0 else field.sub(acc, term)
    return acc


def mat_mul(field: Field, m1, m2) -> tuple[tuple[int, ...], ...]:
    n = len(m1)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = field.add(acc, field.mul(m1[i][k], m2[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def identity_map(field: Field, d: int) -> AffineMap:
    eye = tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))
    return AffineMap(field, eye, (0,) * d)


def translation_map(field: Field, v: Vector) -> AffineMap:
    return AffineMap(field, identity_map(field, len(v)).matrix, tuple(v))


def compose(outer: AffineMap, inner: AffineMap) -> AffineMap:
    """outer after inner: x -> M2 (M1 x + v1) + v2."""
    f = outer.field
    mat = mat_mul(f, outer.matrix, inner.matrix)
    shift = outer.apply(inner.shift)
    return AffineMap(f, mat, shift)


def line_rotation(field: Field, lam: int) -> AffineMap:
    """The SO_2 map sending the slope-lam line through the origin into the x1-axis.

    Exists exactly when 1 + lam^2 is a nonzero square; the matrix is
    [[c, c*lam], [-c*lam, c]] with c = 1/sqrt(1 + lam^2), using the tabled
    (smaller-index) square root so results are reproducible.
    """
    f = field
    s = f.add(1, f.mul(lam, lam))
    if f.eta(s) != 1:
        raise ValueError(
            f"1 + lam^2 = {s} is not a nonzero square in F_{f.q}, "
            f"so the slope-{lam} line admits no such rotation"
        )
    c = f.inv(f.sqrt(s))
    cl = f.mul(c, lam)
    mat = ((c, cl), (f.neg(cl), c))
    return AffineMap(f, mat, (0, 0))


def apply_map(m: AffineMap, S: PointSet) -> PointSet:
    if m.dim != S.dim:
        raise ValueError(f"map dimension {m.dim} != point dimension {S.dim}")
    f = m.field
    arr = S.points
    out = np.empty_like(arr)
    mult, add = f.mul_table, f.add_table
    for i, row in enumerate(m.matrix):
        acc = np.full(arr.shape[0], m.shift[i], dtype=np.int64)
        for j, coef in enumerate(row):
            if coef:
                acc = add[acc, mult[coef, arr[:, j]]]
        out[:, i] = acc
    return PointSet(f, S.dim, out)


# ---------------------------------------------------------------------------
# Pair scans
# ---------------------------------------------------------------------------

def pairwise_norm_counts(A: PointSet, B: PointSet,
                         form: QuadraticForm | None = None,
                         max_universe=None) -> np.ndarray:
    """Count of pairs (x, y) in A x B at each value of form(x - y).

    Returns an integer array of length q; entry t is |{(x,y) : form(x-y)=t}|.
    The scan is chunked over A so memory stays bounded; the result does not
    depend on the chunking.
    """
    field = A.field
    if B.field != field or A.dim != B.dim:
        raise ValueError("point sets live in different spaces")
    if form is not None and form.dim != A.dim:
        raise ValueError("form dimension mismatch")
    npairs = len(A) * len(B)
    check_budget(npairs, "pairwise distance scan", max_universe)
    q, d = field.q, A.dim
    counts = np.zeros(q, dtype=np.int64)
    if npairs == 0:
        return counts
    if d == 0:
        counts[0] = npairs
        return counts
    sub, sq, add = field.sub_table, field.sq_table, field.add_table
    mult = field.mul_table
    diag = None if form is None or form.kind == "standard" else form.diag()
    Ba = B.points
    chunk = max(1, 2_000_000 // max(1, len(B) * d))
    for i0 in range(0, len(A), chunk):
        D = sub[A.points[i0:i0 + chunk, None, :], Ba[None, :, :]]
        S = sq[D]
        if diag is not None:
            S = mult[np.broadcast_to(diag, S.shape), S]
        acc = S[..., 0]
        for j in range(1, d):
            acc = add[acc, S[..., j]]
        counts += np.bincount(acc.ravel(), minlength=q)
    return counts
