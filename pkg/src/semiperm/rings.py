"""Exact coefficient domains: rationals, integers, and prime fields.

Every container in the package (Laurent polynomials, truncated series,
recurrences) carries one of these ring objects and routes its scalar
arithmetic through it.  All operations are total: the exact domains grow
digits as needed, the modular domain reduces eagerly, and nothing ever
overflows silently.
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_PRIME = 45007
COLLISION_PRIME = 2_147_483_629

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class CoefficientRing:
    """Common interface; concrete rings override the arithmetic hooks."""

    name = "?"
    has_half = False

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, k: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == 0

    def half(self):
        """The element 1/2; rejected by rings that do not contain it."""
        return self.inv(self.from_int(2))

    def __repr__(self):
        return self.name


class ExactRational(CoefficientRing):
    name = "QQ"
    has_half = True

    def from_int(self, k):
        return Fraction(k)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def __eq__(self, other):
        return isinstance(other, ExactRational)

    def __hash__(self):
        return hash(self.name)


class ExactInteger(CoefficientRing):
    name = "ZZ"

    def from_int(self, k):
        return int(k)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a in (1, -1):
            return a
        raise ValueError(f"{a} is not invertible over ZZ")

    def __eq__(self, other):
        return isinstance(other, ExactInteger)

    def __hash__(self):
        return hash(self.name)


class ModPrime(CoefficientRing):
    """Residues modulo a prime p < 2**31, stored as ints in [0, p)."""

    def __init__(self, p: int):
        if not (2 <= p < 2**31):
            raise ValueError(f"modulus {p} out of range (need 2 <= p < 2**31)")
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.name = f"GF({p})"

    @property
    def has_half(self):
        return self.p != 2

    def from_int(self, k):
        return k % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero mod {self.p}")
        return pow(a, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, ModPrime) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = ExactRational()
ZZ = ExactInteger()


def ring_from_descriptor(desc: str) -> CoefficientRing:
    """Parse ``exact``, ``exact-int`` or ``mod:p`` ring descriptors."""
    desc = desc.strip().lower()
    if desc in ("exact", "rational", "qq"):
        return QQ
    if desc in ("exact-int", "integer", "zz"):
        return ZZ
    if desc.startswith("mod:"):
        return ModPrime(int(desc[4:]))
    raise ValueError(f"unknown ring descriptor {desc!r}")


def ring_descriptor(ring: CoefficientRing) -> str:
    if isinstance(ring, ModPrime):
        return f"mod:{ring.p}"
    if isinstance(ring, ExactInteger):
        return "exact-int"
    return "exact"
