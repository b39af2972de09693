"""Exact arithmetic in the prime field of odd characteristic.

Downstream geometry stores field elements as plain ints reduced into
[0, p).  This module owns validation of the modulus and the
quadratic-residue machinery (Legendre symbol, Tonelli-Shanks square
roots) that every isotropy predicate is built on.
"""

from __future__ import annotations

MAX_MODULUS = 1 << 31

# Witnesses 2, 3, 5, 7 make Miller-Rabin deterministic below 3_215_031_751,
# which covers the whole admissible modulus range.
_MR_WITNESSES = (2, 3, 5, 7)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test, exact for every n < 3_215_031_751."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Prime(int):
    """Odd prime modulus in [3, 2**31).  Usable anywhere a plain int is."""

    def __new__(cls, p) -> "Prime":
        p = int(p)
        if p == 2:
            raise ValueError("modulus 2 is rejected: the geometry needs odd characteristic")
        if not 3 <= p < MAX_MODULUS:
            raise ValueError(f"modulus must lie in [3, 2**31), got {p}")
        if not is_prime(p):
            raise ValueError(f"modulus must be prime, got {p}")
        return super().__new__(cls, p)

    def __repr__(self) -> str:
        return f"Prime({int(self)})"

    def __str__(self) -> str:
        return str(int(self))


def legendre(a: int, p: int) -> int:
    """Legendre symbol by Euler's criterion: 0 for 0, 1 for nonzero squares, -1 otherwise."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def inv(a: int, p: int) -> int:
    """Multiplicative inverse of a mod p.  Raises ZeroDivisionError for a == 0."""
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def sqrt_mod(a: int, p: int) -> tuple[int, ...] | None:
    """All square roots of a mod p, sorted; None when a is a non-residue.

    Returns (0,) for a == 0 and the pair (r, p - r) otherwise.  The root
    is re-verified by squaring before it is returned.
    """
    a %= p
    if a == 0:
        return (0,)
    if legendre(a, p) != 1:
        return None
    r = _tonelli_shanks(a, p)
    if r * r % p != a:
        raise ArithmeticError(f"square root of {a} mod {p} failed verification")
    return tuple(sorted((r, p - r)))


def _tonelli_shanks(a: int, p: int) -> int:
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c = s, pow(z, q, p)
    t, r = pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


class FieldElement:
    """Canonical residue in [0, p) with overloaded field arithmetic.

    Convenience wrapper for interactive use; the bulk data structures in
    this package keep raw ints for speed.
    """

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.p = Prime(p)
        self.value = int(value) % self.p

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FieldElement(self.value + self._other(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._other(other), self.p)

    def __rsub__(self, other):
        return FieldElement(self._other(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElement(self.value * self._other(other), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.value * inv(self._other(other), self.p), self.p)

    def __pow__(self, e: int):
        if e < 0:
            return FieldElement(pow(inv(self.value, self.p), -e, self.p), self.p)
        return FieldElement(pow(self.value, e, self.p), self.p)

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, int(self.p)))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"FieldElement({self.value} mod {int(self.p)})"

    def inverse(self) -> "FieldElement":
        return FieldElement(inv(self.value, self.p), self.p)

    def legendre(self) -> int:
        return legendre(self.value, self.p)

    def sqrt(self) -> tuple["FieldElement", ...] | None:
        roots = sqrt_mod(self.value, self.p)
        if roots is None:
            return None
        return tuple(FieldElement(r, self.p) for r in roots)

    def is_square(self) -> bool:
        return legendre(self.value, self.p) >= 0
