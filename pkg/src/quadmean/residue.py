"""Exact arithmetic in Z/p^n and square-class bookkeeping for Q_p.

Residues are canonical integers in [0, p^n), valuations are plain ints,
and square classes carry fixed integer labels so they can be compared,
sorted and serialized without any symbolic layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class CapacityError(Exception):
    """Raised when an enumeration would exceed a configured size guard."""


# Largest modulus accepted by ResidueRing.  Keeps three-term quadratic
# expressions in residues below 2^63 so int64 batch scans stay exact.
MAX_MODULUS = 1 << 30


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class ResidueRing:
    """The ring Z/p^n for a prime p and a level n >= 1."""

    p: int
    n: int
    modulus: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.n < 1:
            raise ValueError(f"level must be >= 1, got {self.n}")
        m = self.p**self.n
        if m > MAX_MODULUS:
            raise CapacityError(f"modulus {self.p}^{self.n} exceeds {MAX_MODULUS}")
        object.__setattr__(self, "modulus", m)

    def reduce(self, v: int) -> int:
        return v % self.modulus

    def is_unit(self, v: int) -> bool:
        return v % self.p != 0

    def inv(self, v: int) -> int:
        """Inverse of a unit; raises ValueError on a non-unit."""
        return pow(v, -1, self.modulus)

    def valuation(self, v: int) -> int:
        """p-adic valuation of v as an element of Z/p^n; the zero class gets n."""
        v %= self.modulus
        if v == 0:
            return self.n
        k = 0
        while v % self.p == 0:
            v //= self.p
            k += 1
        return k

    def units(self):
        """Iterate the unit classes of the ring."""
        return (v for v in range(self.modulus) if v % self.p != 0)

    def __call__(self, v: int) -> "Residue":
        return Residue(v % self.modulus, self)

    def __str__(self) -> str:
        return f"Z/{self.p}^{self.n}"


@dataclass(frozen=True)
class Residue:
    """A residue class in Z/p^n, stored by its canonical representative."""

    value: int
    ring: ResidueRing

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.value % self.ring.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.ring != self.ring:
                raise ValueError("mixed rings")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(self.value + v, self.ring)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(self.value - v, self.ring)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(v - self.value, self.ring)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(self.value * v, self.ring)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.ring)

    @property
    def is_unit(self) -> bool:
        return self.ring.is_unit(self.value)

    def inverse(self) -> "Residue":
        if not self.is_unit:
            raise ValueError(f"{self.value} is not a unit in {self.ring}")
        return Residue(self.ring.inv(self.value), self.ring)

    def valuation(self) -> int:
        return self.ring.valuation(self.value)

    def __int__(self) -> int:
        return self.value


def valuation(v, ring: ResidueRing) -> int:
    """p-adic valuation of v in Z/p^n; v may be an int or a Residue."""
    if isinstance(v, Residue):
        v = v.value
    return ring.valuation(v)


def _primitive_root_mod_p(p: int) -> int:
    # factor p-1, then test candidates against every maximal proper divisor
    factors = []
    m = p - 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
        g += 1


def unit_group_generators(ring: ResidueRing) -> list[Residue]:
    """Generators of (Z/p^n)^x.

    Odd p: one generator, the smallest primitive root mod p promoted to
    p^n.  p = 2: trivial at n = 1, {-1} at n = 2, {-1, 5} for n >= 3.
    """
    p, n = ring.p, ring.n
    if p == 2:
        if n == 1:
            return [ring(1)]
        if n == 2:
            return [ring(-1)]
        return [ring(-1), ring(5)]
    g = _primitive_root_mod_p(p)
    # g stays primitive mod p^n unless g^(p-1) = 1 mod p^2
    if n >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return [ring(g)]


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for n >= 1 (prime n gives the Legendre symbol)."""
    if n <= 0:
        raise ValueError("second argument must be positive")
    res = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            res = -res
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                res = -res
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            res = -res
        a %= n
    return res if n == 1 else 0


def smallest_nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue mod an odd prime."""
    if p == 2:
        raise ValueError("defined for odd p only")
    u = 2
    while kronecker(u, p) != -1:
        u += 1
    return u


# unit square classes of Q_2 are parameterized by the unit mod 8
_TWO_ADIC_UNIT_LABEL = {1: 1, 3: -5, 5: 5, 7: -1}


def square_class_labels(p: int) -> list[int]:
    """Canonical labels for Q_p^x mod squares: {1, u, p, up} for odd p
    with u the smallest non-residue; the eight classes at p = 2."""
    if p == 2:
        return [1, -1, 2, -2, 5, -5, 10, -10]
    u = smallest_nonresidue(p)
    return [1, u, p, u * p]


def ramified_labels(p: int) -> list[int]:
    """Labels whose square roots generate ramified quadratic extensions."""
    if p == 2:
        return [-1, -5, 2, -2, 10, -10]
    u = smallest_nonresidue(p)
    return [p, u * p]


@dataclass(frozen=True)
class SquareClassLabel:
    """A class of Q_p^x mod squares, named by its canonical integer label."""

    p: int
    label: int

    def __post_init__(self) -> None:
        if self.label not in square_class_labels(self.p):
            raise ValueError(f"{self.label} is not a square-class label at p={self.p}")

    @property
    def is_trivial(self) -> bool:
        return self.label == 1

    @property
    def disc_valuation(self) -> int:
        """Valuation of the discriminant of Q_p(sqrt(label)) over Q_p."""
        if self.p != 2:
            return 1 if self.label % self.p == 0 else 0
        if self.label in (-1, -5):
            return 2
        if self.label % 2 == 0:
            return 3
        return 0

    @property
    def is_ramified(self) -> bool:
        return self.disc_valuation > 0

    def __str__(self) -> str:
        return f"{self.label} (mod squares at {self.p})"


def unramified_label(p: int) -> SquareClassLabel:
    """The unit non-square class: sqrt of it generates the unramified
    quadratic extension of Q_p."""
    return SquareClassLabel(p, 5 if p == 2 else smallest_nonresidue(p))


def square_class(a, p: int) -> SquareClassLabel:
    """Square class of a nonzero rational a in Q_p^x.

    The label is p^(v mod 2) times the unit-part label: for odd p that is 1
    or the smallest non-residue by the Legendre symbol; for p = 2 the unit
    part mod 8 maps 1 -> 1, 3 -> -5, 5 -> 5, 7 -> -1.
    """
    a = Fraction(a)
    if a == 0:
        raise ValueError("square class of 0 is undefined")
    num, den = a.numerator, a.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    if p == 2:
        w = num * pow(den, -1, 8) % 8
        label = _TWO_ADIC_UNIT_LABEL[w]
    else:
        w = num * pow(den, -1, p) % p
        label = 1 if kronecker(w, p) == 1 else smallest_nonresidue(p)
    if v % 2 == 1:
        label *= p
    return SquareClassLabel(p, label)
