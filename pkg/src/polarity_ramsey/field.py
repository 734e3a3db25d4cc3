"""Arithmetic in GF(q), q = p^m, with elements encoded as integers 0..q-1.

An element of GF(p^m) is a polynomial c_0 + c_1 x + ... + c_{m-1} x^{m-1}
over GF(p), packed as the integer sum(c_i * p^i).  For prime fields this is
just the residue itself.

Multiplication uses exp/log tables built from a primitive element, so every
operation is a table lookup and works elementwise on numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

MAX_ORDER = 2 ** 20
_IRREDUCIBILITY_CHECK_LIMIT = 2 ** 16

# Lowest-weight irreducible x^m + ... + 1 over GF(2), ties broken by the
# smallest bit pattern.  Bit i is the coefficient of x^i.
GF2_REDUCTION_POLYNOMIALS = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
}


class FieldError(ValueError):
    pass


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


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, m) with q = p**m, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, m


# -- polynomials over GF(p), coefficient lists low degree first --------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, degree: int):
    for code in range(p ** degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(code % p)
            code //= p
        yield coeffs + [1]


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    m = len(coeffs) - 1
    if m < 1 or coeffs[-1] % p == 0:
        return False
    for d in range(1, m // 2 + 1):
        for g in _monic_polys(p, d):
            if not _poly_mod(coeffs, g, p):
                return False
    return True


def default_reduction_polynomial(p: int, m: int) -> list[int]:
    if p == 2 and m in GF2_REDUCTION_POLYNOMIALS:
        bits = GF2_REDUCTION_POLYNOMIALS[m]
        return [(bits >> i) & 1 for i in range(m + 1)]
    # first monic irreducible in base-p counting order of the lower coefficients
    for g in _monic_polys(p, m):
        if g[0] != 0 and is_irreducible(g, p):
            return g
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True, eq=False)
class FiniteField:
    """GF(p^m).  Construct with :func:`field_create` or ``FiniteField.of_order``."""

    p: int
    m: int
    poly: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.m < 1:
            raise FieldError(f"extension degree must be >= 1, got {self.m}")
        if self.p ** self.m > MAX_ORDER:
            raise FieldError(f"order {self.p}^{self.m} exceeds cap {MAX_ORDER}")
        if self.m > 1:
            poly = tuple(self.poly) or tuple(default_reduction_polynomial(self.p, self.m))
            if len(poly) != self.m + 1 or poly[-1] != 1:
                raise FieldError("reduction polynomial must be monic of degree m")
            if self.q <= _IRREDUCIBILITY_CHECK_LIMIT and not is_irreducible(poly, self.p):
                raise FieldError(f"{poly} is reducible over GF({self.p})")
            object.__setattr__(self, "poly", poly)
        else:
            object.__setattr__(self, "poly", ())

    @classmethod
    def of_order(cls, q: int) -> "FiniteField":
        p, m = prime_power(q)
        return cls(p, m)

    @property
    def q(self) -> int:
        return self.p ** self.m

    @property
    def order(self) -> int:
        return self.q

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.m, self.poly) == (
            other.p, other.m, other.poly)

    def __hash__(self):
        return hash((self.p, self.m, self.poly))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, poly={list(self.poly)})"

    def descriptor(self) -> dict:
        return {"p": self.p, "m": self.m, "poly": list(self.poly)}

    # -- tables ----------------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return out

    def _pack(self, digits: Sequence[int]) -> int:
        v = 0
        for c in reversed(digits):
            v = v * self.p + c
        return v

    def _mul_slow(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        r = _poly_mod(prod, self.poly, self.p)
        return self._pack(r + [0] * (self.m - len(r)))

    @cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        order = q - 1
        factors = [f for f in range(2, order + 1) if order % f == 0 and is_prime(f)]
        for g in range(2 if q > 2 else 1, q):
            # g is primitive iff g^(order/f) != 1 for each prime f | order
            if all(self._pow_slow(g, order // f) != 1 for f in factors):
                break
        else:
            raise FieldError("no primitive element found")
        exp = np.empty(2 * order, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            x = self._mul_slow(x, g)
        exp[order:] = exp[:order]
        log = np.zeros(q, dtype=np.int64)
        log[exp[:order]] = np.arange(order)
        return exp, log

    def _pow_slow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mul_slow(result, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return result

    @cached_property
    def _digit_weights(self) -> np.ndarray:
        return self.p ** np.arange(self.m, dtype=np.int64)

    # -- elementwise operations (ints or numpy arrays) -------------------

    def add(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        a_arr, b_arr = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        w = self._digit_weights
        da = (a_arr[..., None] // w) % self.p
        db = (b_arr[..., None] // w) % self.p
        out = (((da + db) % self.p) * w).sum(axis=-1)
        return out if out.ndim else int(out)

    def neg(self, a):
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        a_arr = np.asarray(a, dtype=np.int64)
        w = self._digit_weights
        out = ((((-((a_arr[..., None] // w) % self.p)) % self.p)) * w).sum(axis=-1)
        return out if out.ndim else int(out)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return a * b % self.p
        exp, log = self._exp_log
        a_arr, b_arr = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        out = np.where((a_arr == 0) | (b_arr == 0), 0, exp[log[a_arr] + log[b_arr]])
        return out if out.ndim else int(out)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("0 has no inverse")
        if self.m == 1:
            if isinstance(a, np.ndarray):
                return np.array([pow(int(x), self.p - 2, self.p) for x in a.ravel()]).reshape(a.shape)
            return pow(int(a), self.p - 2, self.p)
        exp, log = self._exp_log
        out = exp[(self.q - 1 - log[np.asarray(a, dtype=np.int64)]) % (self.q - 1)]
        return out if np.ndim(out) else int(out)

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.m == 1:
            return pow(a, e, self.p)
        exp, log = self._exp_log
        return int(exp[(int(log[a]) * e) % (self.q - 1)])

    @cached_property
    def add_table(self) -> np.ndarray:
        e = np.arange(self.q, dtype=np.int64)
        return np.asarray(self.add(e[:, None], e[None, :]), dtype=np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        e = np.arange(self.q, dtype=np.int64)
        return np.asarray(self.mul(e[:, None], e[None, :]), dtype=np.int64)

    def elements(self) -> range:
        return range(self.q)


def field_create(p: int, m: int = 1) -> FiniteField:
    """GF(p^m) over the default reduction polynomial."""
    return FiniteField(p, m)


@dataclass(frozen=True)
class FieldVector:
    field: FiniteField
    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if any(c < 0 or c >= self.field.q for c in coords):
            raise FieldError(f"coordinates {coords} are not elements of {self.field!r}")
        object.__setattr__(self, "coords", coords)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __add__(self, other: "FieldVector") -> "FieldVector":
        _check_compatible(self, other)
        return FieldVector(self.field, tuple(self.field.add(a, b) for a, b in zip(self, other)))

    def scale(self, c: int) -> "FieldVector":
        return FieldVector(self.field, tuple(self.field.mul(c, a) for a in self))

    def is_zero(self) -> bool:
        return not any(self.coords)


def _check_compatible(u: FieldVector, v: FieldVector) -> None:
    if u.field != v.field:
        raise FieldError(f"vectors over different fields: {u.field!r} vs {v.field!r}")
    if len(u) != len(v):
        raise FieldError(f"length mismatch: {len(u)} vs {len(v)}")


def inner_product(u: FieldVector, v: FieldVector) -> int:
    """sum(u_i * v_i) in the common field."""
    _check_compatible(u, v)
    F = u.field
    acc = 0
    for a, b in zip(u, v):
        acc = F.add(acc, F.mul(a, b))
    return int(acc)
