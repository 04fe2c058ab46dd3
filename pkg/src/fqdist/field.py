"""Exact arithmetic in the finite field F_q, q = p^ell with p an odd prime.

Elements are plain integers in [0, q): the element whose base-p digits are
(c0, ..., c_{ell-1}) — i.e. the residue of the polynomial
c0 + c1*X + ... + c_{ell-1}*X^{ell-1} modulo the field's monic irreducible
modulus — is encoded as the index c0 + c1*p + c2*p^2 + ....  Index 0 is the
additive identity, index 1 the multiplicative identity, and for ell = 1 the
encoding is the usual residue mod p.  Keeping elements as bare ints lets the
enumeration-heavy callers drive everything through numpy lookup tables.

A Field owns the per-element tables the rest of the package leans on:

* ``eta_table``   quadratic character: +1 on nonzero squares, -1 on
  nonsquares, 0 at 0 (the value at 0 is a convention; every character-sum
  formula only ever evaluates eta at nonzero arguments).
* ``sqrt_table``  one fixed square root per nonzero square (the root with
  the smaller index, so outputs are reproducible), -1 elsewhere.
* ``trace_table`` absolute trace down to F_p.
* ``chi_table``   additive character chi(t) = exp(2*pi*i*lift(Tr t)/p),
  with lift the representative in {0, ..., p-1}.

plus dense q-by-q add/sub/mul tables, built lazily, for vectorized scans.

Character sums (Gauss sums, completed squares) are evaluated by direct
summation in double-precision complex arithmetic.  The absolute tolerance
budget for an n-term unit-modulus sum is ``character_tolerance(n)``.
"""

from __future__ import annotations

import cmath
import functools
import itertools
import math

import numpy as np

MAX_FIELD_SIZE = 10**6

# Largest q for which the dense q*q arithmetic tables may be materialized.
TABLE_LIMIT = 2048


def character_tolerance(terms: int) -> float:
    """Absolute tolerance for a character sum of `terms` unit-circle terms."""
    return 1e-9 * max(terms, 1)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_rem(num: list[int], den: tuple[int, ...], p: int) -> list[int]:
    """Remainder of num modulo the monic polynomial den, coefficients mod p."""
    num = list(num)
    dd = len(den) - 1
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            for i in range(dd + 1):
                num[k - dd + i] = (num[k - dd + i] - c * den[i]) % p
    return num[:dd]


def poly_is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Trial-division irreducibility test for a monic polynomial over F_p.

    Exhaustive over candidate monic divisors of degree up to deg/2; fine at
    desk scale, which is all this package targets.
    """
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] != 1:
        return False
    if deg == 1:
        return True
    if coeffs[0] == 0:  # divisible by X
        return False
    for m in range(1, deg // 2 + 1):
        for lower in itertools.product(range(p), repeat=m):
            den = tuple(lower) + (1,)
            if not any(_poly_rem(list(coeffs), den, p)):
                return False
    return True


def smallest_irreducible(p: int, ell: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree ell over F_p.

    Candidates X^ell + c_{ell-1} X^{ell-1} + ... + c0 are scanned in ascending
    order of the integer encoding c0 + c1*p + ..., the same encoding the field
    elements use, so the construction — and everything serialized from it — is
    reproducible.  Degree 1 uses the plain modulus X.
    """
    if ell == 1:
        return (0, 1)
    for m in range(1, p**ell):
        coeffs = []
        n = m
        for _ in range(ell):
            n, c = divmod(n, p)
            coeffs.append(c)
        coeffs = tuple(coeffs) + (1,)
        if poly_is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # unreachable


class Field:
    """The finite field F_{p^ell}; immutable after construction."""

    def __init__(self, p: int, ell: int = 1, modulus: tuple[int, ...] | None = None,
                 max_q: int = MAX_FIELD_SIZE):
        if not is_prime(p) or p == 2:
            raise ValueError(f"characteristic must be an odd prime, got {p}")
        if ell < 1:
            raise ValueError(f"extension degree must be >= 1, got {ell}")
        q = p**ell
        if q > max_q:
            raise ValueError(f"field size {q} exceeds the configured ceiling {max_q}")
        self.p = p
        self.ell = ell
        self.q = q
        if modulus is None:
            modulus = smallest_irreducible(p, ell)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != ell + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree ell")
            if not poly_is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self._p_powers = p ** np.arange(ell, dtype=np.int64)
        self._build_core_tables()

    # -- construction internals ------------------------------------------------

    def _build_core_tables(self):
        p, ell, q = self.p, self.ell, self.q
        digits = np.empty((q, ell), dtype=np.int64)
        idx = np.arange(q)
        for i in range(ell):
            digits[:, i] = (idx // p**i) % p
        self._digits = digits

        # x^k mod modulus for k = 0 .. 2*ell-2, as an (2ell-1, ell) matrix.
        red = np.zeros((2 * ell - 1, ell), dtype=np.int64)
        xpow = [1] + [0] * (ell - 1)
        for k in range(2 * ell - 1):
            red[k] = xpow
            if k < 2 * ell - 2:
                shifted = [0] + xpow
                xpow = _poly_rem(shifted, self.modulus, p)
                xpow += [0] * (ell - len(xpow))
        self._reduce_matrix = red

        # Squares, vectorized: digit convolution then reduction.
        conv = np.zeros((q, 2 * ell - 1), dtype=np.int64)
        for i in range(ell):
            for j in range(ell):
                conv[:, i + j] += digits[:, i] * digits[:, j]
        sq_digits = (conv % p) @ red % p
        self.sq_table = (sq_digits @ self._p_powers).astype(np.int64)

        self.neg_table = (((p - digits) % p) @ self._p_powers).astype(np.int64)

        eta = np.full(q, -1, dtype=np.int8)
        eta[0] = 0
        eta[self.sq_table[1:]] = 1
        self.eta_table = eta

        sqrt = np.full(q, -1, dtype=np.int64)
        sqrt[0] = 0
        for s in range(q - 1, 0, -1):  # descending, so the smaller root wins
            sqrt[self.sq_table[s]] = s
        self.sqrt_table = sqrt

        # Trace is F_p-linear, so it is determined by its values on the basis.
        basis_traces = np.array(
            [self._trace_scalar(p**j) for j in range(ell)], dtype=np.int64
        )
        self.trace_table = (digits @ basis_traces) % p

        self.chi_table = np.exp(2j * math.pi * self.trace_table / p)

    def _trace_scalar(self, t: int) -> int:
        acc = 0
        x = t
        for _ in range(self.ell):
            acc = self.add(acc, x)
            x = self.pow(x, self.p)
        return acc

    # -- scalar arithmetic -----------------------------------------------------

    def element(self, n: int) -> int:
        """Embed a rational integer as n * 1 (an element of the prime subfield)."""
        return n % self.p

    def add(self, a: int, b: int) -> int:
        if self.ell == 1:
            return (a + b) % self.p
        da, db = self._digits[a], self._digits[b]
        return int(((da + db) % self.p) @ self._p_powers)

    def sub(self, a: int, b: int) -> int:
        if self.ell == 1:
            return (a - b) % self.p
        da, db = self._digits[a], self._digits[b]
        return int(((da - db) % self.p) @ self._p_powers)

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        p = self.p
        if self.ell == 1:
            return a * b % p
        da, db = self._digits[a], self._digits[b]
        conv = np.zeros(2 * self.ell - 1, dtype=np.int64)
        for i in range(self.ell):
            if da[i]:
                conv[i:i + self.ell] += da[i] * db
        return int(((conv % p) @ self._reduce_matrix % p) @ self._p_powers)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.ell == 1:
            return pow(a, e, self.p)
        acc, base = 1, a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a field")
        if self.ell == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    # -- characters and character sums ------------------------------------------

    def eta(self, t: int) -> int:
        """Quadratic character: +1 nonzero square, -1 nonsquare, 0 at zero."""
        return int(self.eta_table[t])

    def sqrt(self, t: int) -> int:
        """The tabled square root of t; raises for nonsquares."""
        r = int(self.sqrt_table[t])
        if r < 0:
            raise ValueError(f"{t} is not a square in F_{self.q}")
        return r

    def trace(self, t: int) -> int:
        """Absolute trace to F_p, returned as an element of the prime subfield."""
        return int(self.trace_table[t])

    def chi(self, t: int) -> complex:
        """Canonical nontrivial additive character exp(2*pi*i*lift(Tr t)/p)."""
        return complex(self.chi_table[t])

    def gauss_sum(self, a: int) -> complex:
        """sum over s != 0 of eta(s) * chi(a*s); modulus sqrt(q)."""
        if a == 0:
            raise ValueError("Gauss sum requires a != 0")
        if self.q <= TABLE_LIMIT:
            row = self.mul_table[a]
            return complex((self.eta_table[1:] * self.chi_table[row[1:]]).sum())
        return sum(self.eta(s) * self.chi(self.mul(a, s)) for s in self.units())

    def complete_square_sum(self, a: int, b: int) -> complex:
        """sum over s of chi(a*s^2 + b*s), via the completed-square closed form.

        Returns eta(a) * chi(b^2 / (-4a)) * G_1 and cross-checks it against the
        direct q-term summation; a mismatch beyond tolerance raises, since it
        would mean the arithmetic tables are corrupt.
        """
        if a == 0:
            raise ValueError("completed square requires a != 0")
        shift = self.div(self.mul(b, b), self.neg(self.mul(self.element(4), a)))
        closed = self.eta(a) * self.chi(shift) * self.gauss_sum(1)
        if self.q <= TABLE_LIMIT:
            vals = self.add_table[self.mul_table[a, self.sq_table],
                                  self.mul_table[b, np.arange(self.q)]]
            direct = complex(self.chi_table[vals].sum())
        else:
            direct = sum(
                self.chi(self.add(self.mul(a, self.mul(s, s)), self.mul(b, s)))
                for s in self.elements()
            )
        if abs(direct - closed) > character_tolerance(self.q):
            raise ArithmeticError(
                f"completed-square mismatch in F_{self.q}: direct {direct}, closed {closed}"
            )
        return closed

    # -- dense tables for vectorized scans ---------------------------------------

    def _table_guard(self):
        if self.q > TABLE_LIMIT:
            raise ValueError(
                f"dense q*q tables not available for q = {self.q} > {TABLE_LIMIT}"
            )

    @functools.cached_property
    def add_table(self) -> np.ndarray:
        self._table_guard()
        p, q = self.p, self.q
        if self.ell == 1:
            r = np.arange(q, dtype=np.int64)
            return (r[:, None] + r[None, :]) % p
        out = np.empty((q, q), dtype=np.int64)
        blk = max(1, 4_000_000 // (q * self.ell))
        D = self._digits
        for i0 in range(0, q, blk):
            s = (D[i0:i0 + blk, None, :] + D[None, :, :]) % p
            out[i0:i0 + blk] = s @ self._p_powers
        return out

    @functools.cached_property
    def sub_table(self) -> np.ndarray:
        return self.add_table[:, self.neg_table]

    @functools.cached_property
    def mul_table(self) -> np.ndarray:
        self._table_guard()
        p, q, ell = self.p, self.q, self.ell
        if ell == 1:
            r = np.arange(q, dtype=np.int64)
            return (r[:, None] * r[None, :]) % p
        out = np.empty((q, q), dtype=np.int64)
        D = self._digits
        blk = max(1, 2_000_000 // (q * (2 * ell - 1)))
        for i0 in range(0, q, blk):
            n = min(blk, q - i0)
            conv = np.zeros((n, q, 2 * ell - 1), dtype=np.int64)
            for i in range(ell):
                for j in range(ell):
                    conv[:, :, i + j] += D[i0:i0 + n, None, i] * D[None, :, j]
            dig = (conv % p) @ self._reduce_matrix % p
            out[i0:i0 + n] = dig @ self._p_powers
        return out

    # -- serialization -----------------------------------------------------------

    def descriptor(self) -> dict:
        """JSON-ready field descriptor; elements themselves serialize as ints."""
        return {"p": self.p, "ell": self.ell, "modulus": list(self.modulus)}

    @classmethod
    def from_descriptor(cls, obj: dict) -> "Field":
        return cls(int(obj["p"]), int(obj["ell"]), tuple(obj["modulus"]))

    # -- plumbing ----------------------------------------------------------------

    def __repr__(self):
        return f"Field(p={self.p}, ell={self.ell}, q={self.q})"

    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.ell, self.modulus) == (other.p, other.ell, other.modulus))

    def __hash__(self):
        return hash((self.p, self.ell, self.modulus))


@functools.lru_cache(maxsize=None)
def make_field(p: int, ell: int = 1) -> Field:
    """Cached field constructor; fields are immutable so sharing is safe."""
    return Field(p, ell)


def field_from_q(q: int) -> Field:
    """Recover F_q from its size (the prime power factorization is unique)."""
    for p in range(3, q + 1, 2):
        if q % p == 0:
            ell = 0
            n = q
            while n % p == 0:
                n //= p
                ell += 1
            if n != 1:
                raise ValueError(f"{q} is not a prime power")
            return make_field(p, ell)
    raise ValueError(f"{q} is not an odd prime power")
