"""Binary quadratic forms under GL(1) x GL(2) over Z/p^n.

A form x = x0*v1^2 + x1*v1*v2 + x2*v2^2 is acted on by g = (t, g2) via
(g.x)(v) = t * x(v * g2), with v a row vector.  The module provides the
standard orbital representative for each separable quadratic algebra of
Q_p, the stabilizer torus attached to a monic representative, orbit
enumeration by breadth-first closure, and the unit congruence systems
that account for the stabilizer's torus cosets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .residue import (
    CapacityError,
    ResidueRing,
    SquareClassLabel,
    kronecker,
    ramified_labels,
    smallest_nonresidue,
    square_class,
    unit_group_generators,
    unramified_label,
)

# Guard for dense orbit enumeration: the bit-set is indexed by packed
# coefficient triples, so the ambient space p^(3n) must stay small.
MAX_ORBIT_SPACE = 1 << 26


@dataclass(frozen=True)
class BinaryQF:
    """x0*v1^2 + x1*v1*v2 + x2*v2^2 with exact integer coefficients."""

    x0: int
    x1: int
    x2: int

    def coeffs(self) -> tuple[int, int, int]:
        return (self.x0, self.x1, self.x2)

    def discriminant(self) -> int:
        return self.x1 * self.x1 - 4 * self.x0 * self.x2

    def __call__(self, v1: int, v2: int) -> int:
        return self.x0 * v1 * v1 + self.x1 * v1 * v2 + self.x2 * v2 * v2

    def __str__(self) -> str:
        return f"({self.x0}, {self.x1}, {self.x2})"


def discriminant(x: BinaryQF) -> int:
    """x1^2 - 4*x0*x2, exact."""
    return x.discriminant()


@dataclass(frozen=True)
class GroupElement:
    """An element (t, [[a, b], [c, d]]) of GL(1) x GL(2) over Z/p^n."""

    ring: ResidueRing
    t: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        m = self.ring.modulus
        for name in ("t", "a", "b", "c", "d"):
            object.__setattr__(self, name, getattr(self, name) % m)
        if not self.ring.is_unit(self.t):
            raise ValueError("scalar part must be a unit")
        if not self.ring.is_unit(self.det):
            raise ValueError("matrix part must be invertible")

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.ring.modulus

    @property
    def scalar_character(self) -> int:
        return self.t

    @property
    def det_character(self) -> int:
        return self.det

    @property
    def character(self) -> int:
        """Product character t * det(g2); the discriminant scales by its square."""
        return self.t * self.det % self.ring.modulus

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.ring != other.ring:
            raise ValueError("mixed rings")
        return GroupElement(
            self.ring,
            self.t * other.t,
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GroupElement":
        di = self.ring.inv(self.det)
        return GroupElement(
            self.ring,
            self.ring.inv(self.t),
            di * self.d,
            -di * self.b,
            -di * self.c,
            di * self.a,
        )

    @classmethod
    def identity(cls, ring: ResidueRing) -> "GroupElement":
        return cls(ring, 1, 1, 0, 0, 1)


def act(g: GroupElement, x: BinaryQF) -> BinaryQF:
    """Apply (t, g2) to a form: substitute v -> v*g2, then scale by t."""
    m = g.ring.modulus
    t, a, b, c, d = g.t, g.a, g.b, g.c, g.d
    x0, x1, x2 = x.x0, x.x1, x.x2
    y0 = t * (x0 * a * a + x1 * a * b + x2 * b * b) % m
    y1 = t * (2 * x0 * a * c + x1 * (a * d + b * c) + 2 * x2 * b * d) % m
    y2 = t * (x0 * c * c + x1 * c * d + x2 * d * d) % m
    return BinaryQF(y0, y1, y2)


# ---------------------------------------------------------------------------
# quadratic algebra descriptors and standard representatives
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticAlgebraDescriptor:
    """A separable quadratic algebra over Q_p or over R, by isomorphism type.

    Finite kinds: "split", "unramified", "ramified" (the latter two carry
    the square class whose root generates the extension).  Archimedean
    kinds: "real-pair" (R x R), "complex" (C over R), "complex-pair"
    (the split algebra over a complex completion).
    """

    kind: str
    square_class: SquareClassLabel | None = None
    disc_valuation: int = 0

    _FINITE = ("split", "unramified", "ramified")
    _ARCH = ("real-pair", "complex", "complex-pair")

    def __post_init__(self) -> None:
        if self.kind not in self._FINITE + self._ARCH:
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.kind == "ramified":
            if self.square_class is None or not self.square_class.is_ramified:
                raise ValueError("ramified algebra needs a ramified square class")
            if self.disc_valuation != self.square_class.disc_valuation:
                raise ValueError("disc_valuation inconsistent with square class")
        elif self.disc_valuation != 0:
            raise ValueError(f"{self.kind} algebra has disc_valuation 0")

    @property
    def is_archimedean(self) -> bool:
        return self.kind in self._ARCH

    def __str__(self) -> str:
        if self.kind == "ramified":
            return f"ramified({self.square_class.label})"
        if self.kind == "unramified":
            return f"unramified({self.square_class.label})"
        return self.kind


ALG_SPLIT = QuadraticAlgebraDescriptor("split")
ALG_REAL_PAIR = QuadraticAlgebraDescriptor("real-pair")
ALG_COMPLEX = QuadraticAlgebraDescriptor("complex")
ALG_COMPLEX_PAIR = QuadraticAlgebraDescriptor("complex-pair")


def unramified_algebra(p: int) -> QuadraticAlgebraDescriptor:
    return QuadraticAlgebraDescriptor("unramified", unramified_label(p))


def ramified_algebra(p: int, label: int) -> QuadraticAlgebraDescriptor:
    sc = SquareClassLabel(p, label)
    return QuadraticAlgebraDescriptor("ramified", sc, sc.disc_valuation)


# fixed dyadic representatives: label -> (a1, a2) for v1^2 + a1 v1 v2 + a2 v2^2
_DYADIC_RAMIFIED_COEFFS = {
    -1: (2, 2),
    -5: (2, 6),
    2: (0, -2),
    -2: (0, 2),
    10: (0, -10),
    -10: (0, 10),
}


@dataclass(frozen=True)
class StandardRep:
    """Standard orbital representative of a quadratic algebra at p.

    Monic representatives are the norm forms v1^2 + a1 v1 v2 + a2 v2^2 of
    an integral generator of the algebra's maximal order; the split
    algebra is represented by v1*v2.  For ramified representatives the
    dehomogenization v1^2 + a1 v1 + a2 is Eisenstein and the working
    level is n = delta + 2*ord_p(2) + 1.
    """

    p: int
    algebra: QuadraticAlgebraDescriptor
    form: BinaryQF
    m: int = field(init=False)
    delta: int = field(init=False)
    n: int = field(init=False)

    def __post_init__(self) -> None:
        m = 1 if self.p == 2 else 0
        delta = self.algebra.disc_valuation
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "n", delta + 2 * m + 1)
        self._validate()

    def _validate(self) -> None:
        kind = self.algebra.kind
        disc = self.form.discriminant()
        if kind == "split":
            if self.form.coeffs() != (0, 1, 0):
                raise ValueError("split representative must be v1*v2")
            return
        if self.form.x0 != 1:
            raise ValueError("non-split representatives are monic")
        if square_class(disc, self.p) != self._expected_class():
            raise ValueError("discriminant square class does not match algebra")
        if kind == "unramified":
            if kronecker(disc, self.p) != -1:
                raise ValueError("unramified representative needs unit non-square disc")
            return
        # ramified: Eisenstein shape and the disc-valuation dichotomy
        a1, a2 = self.a1, self.a2
        v1 = _int_valuation(a1, self.p)
        if not (v1 >= 1 and _int_valuation(a2, self.p) == 1):
            raise ValueError("ramified representative must be Eisenstein")
        expected_delta = 2 * v1 if 1 <= v1 <= self.m else 2 * self.m + 1
        if self.delta != expected_delta:
            raise ValueError("disc valuation inconsistent with trace valuation")
        if _int_valuation(disc, self.p) != self.delta:
            raise ValueError("discriminant valuation must equal delta")

    def _expected_class(self) -> SquareClassLabel:
        if self.algebra.kind == "split":
            return SquareClassLabel(self.p, 1)
        return self.algebra.square_class

    @property
    def a1(self) -> int:
        if self.form.x0 != 1:
            raise ValueError("a1 defined for monic representatives only")
        return self.form.x1

    @property
    def a2(self) -> int:
        if self.form.x0 != 1:
            raise ValueError("a2 defined for monic representatives only")
        return self.form.x2

    @property
    def is_ramified(self) -> bool:
        return self.algebra.kind == "ramified"

    def natural_ring(self) -> ResidueRing:
        return ResidueRing(self.p, self.n)

    def __str__(self) -> str:
        return f"{self.algebra} rep {self.form} at p={self.p}"


def _int_valuation(v: int, p: int) -> float:
    if v == 0:
        return float("inf")
    k = 0
    while v % p == 0:
        v //= p
        k += 1
    return k


def standard_representatives(p: int) -> list[StandardRep]:
    """One representative per separable quadratic algebra of Q_p.

    Order: split, unramified, then ramified sorted by (delta, label order).
    """
    reps = [StandardRep(p, ALG_SPLIT, BinaryQF(0, 1, 0))]
    # unramified: v1^2 + v1 v2 + c v2^2 with 1 - 4c the smallest valid
    # unit non-square; its root generates the maximal order
    c = 1
    while kronecker(1 - 4 * c, p) != -1:
        c += 1
    reps.append(StandardRep(p, unramified_algebra(p), BinaryQF(1, 1, c)))
    if p == 2:
        for label in ramified_labels(2):
            a1, a2 = _DYADIC_RAMIFIED_COEFFS[label]
            reps.append(StandardRep(2, ramified_algebra(2, label), BinaryQF(1, a1, a2)))
    else:
        u = smallest_nonresidue(p)
        for label, a2 in ((p, -p), (u * p, -u * p)):
            reps.append(StandardRep(p, ramified_algebra(p, label), BinaryQF(1, 0, a2)))
    return reps


# ---------------------------------------------------------------------------
# the stabilizer torus
# ---------------------------------------------------------------------------

def torus_matrix(x: StandardRep, ring: ResidueRing, c: int, d: int) -> tuple[int, int, int, int]:
    """Matrix of multiplication by c + d*theta on the order Z[theta] of the
    algebra of x, in the basis (1, theta): [[c, d], [-a2 d, c + a1 d]]."""
    a1, a2 = x.a1, x.a2
    m = ring.modulus
    return (c % m, d % m, -a2 * d % m, (c + a1 * d) % m)


def torus_element(x: StandardRep, ring: ResidueRing, c: int, d: int) -> GroupElement | None:
    """The stabilizer element (det^-1, A) for A = torus_matrix(x, c, d),
    or None when det A = x(c, d) is not a unit (rejection, not an error)."""
    a, b, cc, dd = torus_matrix(x, ring, c, d)
    det = (a * dd - b * cc) % ring.modulus
    if not ring.is_unit(det):
        return None
    return GroupElement(ring, ring.inv(det), a, b, cc, dd)


def torus_contains(x: StandardRep, g: GroupElement) -> bool:
    """Whether g = (t, A) has the multiplication-matrix shape of the torus
    of x with t = det(A)^-1."""
    m = g.ring.modulus
    a1, a2 = x.a1, x.a2
    if (g.c + a2 * g.b) % m != 0:
        return False
    if (g.d - g.a - a1 * g.b) % m != 0:
        return False
    return g.t * g.det % m == 1


def torus_order(x: StandardRep, ring: ResidueRing) -> int:
    """|torus(Z/p^N)| by direct count of pairs (c, d) with x(c, d) a unit.

    For Eisenstein representatives this equals q^(2N-1) (q - 1): the norm
    x(c, d) reduces to c^2 mod p, so exactly the pairs with c a unit count.
    """
    if not x.is_ramified:
        raise ValueError("torus counting implemented for ramified representatives")
    m = ring.modulus
    p = ring.p
    a1, a2 = x.a1 % m, x.a2 % m
    count = 0
    for c in range(m):
        for d in range(m):
            if (c * c + a1 * c * d + a2 * d * d) % p != 0:
                count += 1
    return count


def group_order(ring: ResidueRing) -> int:
    """|GL1 x GL2 (Z/p^N)| = p^(N-1)(p-1) * p^(4(N-1))(p^2-1)(p^2-p)."""
    p, n = ring.p, ring.n
    gl1 = p ** (n - 1) * (p - 1)
    gl2 = p ** (4 * (n - 1)) * (p * p - 1) * (p * p - p)
    return gl1 * gl2


# ---------------------------------------------------------------------------
# orbit enumeration
# ---------------------------------------------------------------------------

def _generators(ring: ResidueRing) -> list[tuple[int, int, int, int, int]]:
    """(t, a, b, c, d) tuples generating GL1 x GL2 over Z/p^N: the two
    elementary transvections, diag(u, 1) and the scalar u for each unit
    group generator u."""
    gens = [(1, 1, 1, 0, 1), (1, 1, 0, 1, 1)]
    for u in unit_group_generators(ring):
        uv = u.value
        if uv == 1:
            continue
        gens.append((1, uv, 0, 0, 1))
        gens.append((uv, 1, 0, 0, 1))
    return gens


def _orbit_bitset(form: BinaryQF, ring: ResidueRing) -> tuple[bytearray, int]:
    """Dense breadth-first closure of the G-orbit of a form.

    Returns (bit set keyed by packed coefficient triples, orbit size).
    """
    m = ring.modulus
    space = m**3
    if space > MAX_ORBIT_SPACE:
        raise CapacityError(f"orbit space {ring.p}^(3*{ring.n}) exceeds {MAX_ORBIT_SPACE}")
    gens = _generators(ring)
    x0, x1, x2 = (v % m for v in form.coeffs())
    start = (x0 * m + x1) * m + x2
    visited = bytearray((space + 7) // 8)
    visited[start >> 3] |= 1 << (start & 7)
    frontier = [(x0, x1, x2)]
    count = 1
    while frontier:
        x0, x1, x2 = frontier.pop()
        for t, a, b, c, d in gens:
            y0 = t * (x0 * a * a + x1 * a * b + x2 * b * b) % m
            y1 = t * (2 * x0 * a * c + x1 * (a * d + b * c) + 2 * x2 * b * d) % m
            y2 = t * (x0 * c * c + x1 * c * d + x2 * d * d) % m
            idx = (y0 * m + y1) * m + y2
            byte, bit = idx >> 3, 1 << (idx & 7)
            if not visited[byte] & bit:
                visited[byte] |= bit
                frontier.append((y0, y1, y2))
                count += 1
    return visited, count


def orbit_size(x: StandardRep | BinaryQF, ring: ResidueRing) -> int:
    """Size of the G(Z/p^N)-orbit of x by dense breadth-first closure."""
    form = x.form if isinstance(x, StandardRep) else x
    return _orbit_bitset(form, ring)[1]


def stabilizer_order(x: StandardRep | BinaryQF, ring: ResidueRing) -> int:
    """|G| / |orbit|, with exact divisibility asserted."""
    orb = orbit_size(x, ring)
    g = group_order(ring)
    if g % orb != 0:
        raise ArithmeticError("orbit size does not divide the group order")
    return g // orb


def lift_saturation_check(x: StandardRep, level: int) -> "LiftSaturation":
    """Check that every lift of x from level n to a deeper level N stays in
    the level-N orbit of x, i.e. the orbit saturates the residue ball."""
    n = x.n
    if level <= n:
        raise ValueError(f"level must exceed the working level {n}")
    ring = ResidueRing(x.p, level)
    m = ring.modulus
    step = x.p**n
    visited, orbit_count = _orbit_bitset(x.form, ring)
    x0, x1, x2 = (v % step for v in x.form.coeffs())
    lifts = 0
    missing: list[tuple[int, int, int]] = []
    for y0 in range(x0, m, step):
        for y1 in range(x1, m, step):
            for y2 in range(x2, m, step):
                lifts += 1
                idx = (y0 * m + y1) * m + y2
                if not visited[idx >> 3] & (1 << (idx & 7)):
                    missing.append((y0, y1, y2))
    return LiftSaturation(x, level, lifts, orbit_count, tuple(missing[:16]), not missing)


@dataclass(frozen=True)
class LiftSaturation:
    rep: StandardRep
    level: int
    lifts: int
    orbit_size: int
    missing: tuple
    passed: bool


# ---------------------------------------------------------------------------
# stabilizer enumeration and the coset normal form
# ---------------------------------------------------------------------------

def stabilizer_elements(x: StandardRep, ring: ResidueRing) -> list[GroupElement]:
    """All (t, g2) in G(Z/p^N) fixing the form of x, by scanning matrix rows.

    The scalar is forced by the leading coefficient: t = x(a, b)^-1 for the
    top row (a, b), which must evaluate to a unit.  The bottom row is then
    scanned in bulk.
    """
    m = ring.modulus
    if m**4 > MAX_ORBIT_SPACE * 4:
        raise CapacityError(f"stabilizer scan at modulus {m} too large")
    if not x.is_ramified:
        raise ValueError("stabilizer scan implemented for ramified representatives")
    a1 = x.a1 % m
    a2 = x.a2 % m
    p = ring.p
    cs = np.repeat(np.arange(m, dtype=np.int64), m)
    ds = np.tile(np.arange(m, dtype=np.int64), m)
    cc = cs * cs % m
    cd = cs * ds % m
    dd = ds * ds % m
    out: list[GroupElement] = []
    for a in range(m):
        for b in range(m):
            xab = (a * a + a1 * a * b + a2 * b * b) % m
            if xab % p == 0:
                continue
            t = pow(xab, -1, m)
            e1 = (t * (2 * a * cs + a1 * (a * ds + b * cs) + 2 * a2 * b * ds) - a1) % m == 0
            e2 = (t * (cc + a1 * cd + a2 * dd) - a2) % m == 0
            unit = (a * ds - b * cs) % p != 0
            for i in np.nonzero(e1 & e2 & unit)[0]:
                out.append(GroupElement(ring, t, a, b, int(cs[i]), int(ds[i])))
    return out


@dataclass(frozen=True)
class CosetNormalForm:
    rep: StandardRep
    ring: ResidueRing
    stabilizer_size: int
    torus_size: int
    coset_count: int
    passed: bool
    detail: str


def coset_normal_form_check(x: StandardRep, ring: ResidueRing) -> CosetNormalForm:
    """Verify that every stabilizer element factors as (torus element) *
    (1, [[1, 0], [u, s]]) with exactly one lower-triangular representative
    per torus coset, and that the (u, s) set is the congruence solution set.
    """
    stab = stabilizer_elements(x, ring)
    m = ring.modulus
    fibers: dict[tuple[int, int], int] = {}
    for g in stab:
        # top-left entry of g2 reduces to a unit (the form is v1^2 mod p),
        # so multiplying by torus elements clears the top row to (1, 0)
        n1 = torus_element(x, ring, g.d, -g.b)
        if n1 is None:
            return CosetNormalForm(x, ring, len(stab), 0, 0, False,
                                   f"row reduction rejected at {g}")
        g1 = n1 * g
        if g1.b % m != 0:
            return CosetNormalForm(x, ring, len(stab), 0, 0, False,
                                   "upper-right entry did not clear")
        n2 = torus_element(x, ring, ring.inv(g1.a), 0)
        g2 = n2 * g1
        if not (g2.t == 1 and g2.a == 1 and g2.b == 0):
            return CosetNormalForm(x, ring, len(stab), 0, 0, False,
                                   "normal form is not unipotent-diagonal")
        # the factored torus part must really lie in the torus
        n_part = g * g2.inverse()
        if not torus_contains(x, n_part):
            return CosetNormalForm(x, ring, len(stab), 0, 0, False,
                                   "left factor escaped the torus")
        key = (g2.c, g2.d)
        fibers[key] = fibers.get(key, 0) + 1
    tsize = torus_order(x, ring)
    ok = all(v == tsize for v in fibers.values())
    solutions = congruence_solution_set(x, ring)
    ok = ok and set(fibers) == solutions
    ok = ok and len(fibers) * tsize == len(stab)
    detail = "" if ok else "fiber sizes or representative set mismatch"
    return CosetNormalForm(x, ring, len(stab), tsize, len(fibers), ok, detail)


# ---------------------------------------------------------------------------
# the unit congruence system
# ---------------------------------------------------------------------------

def congruence_solution_set(x: StandardRep, ring: ResidueRing) -> set[tuple[int, int]]:
    """Solutions (u, s), s a unit, of  a1 s + 2u = a1  and
    u^2 + a1 u s + a2 s^2 = a2  in Z/p^N."""
    m = ring.modulus
    p = ring.p
    a1 = x.a1 % m
    a2 = x.a2 % m
    out = set()
    for s in range(m):
        if s % p == 0:
            continue
        for u in range(m):
            if (a1 * s + 2 * u - a1) % m:
                continue
            if (u * u + a1 * u * s + a2 * s * s - a2) % m:
                continue
            out.add((u, s))
    return out


def congruence_solution_count(x: StandardRep, ring: ResidueRing) -> int:
    return len(congruence_solution_set(x, ring))


@dataclass(frozen=True)
class CongruenceCharacterization:
    rep: StandardRep
    ring: ResidueRing
    solutions: frozenset
    described: frozenset
    branch_sizes: tuple
    disjoint: bool
    passed: bool


def _mod_inverse_fraction(q: Fraction, m: int) -> int:
    """Reduce a p-integral rational mod m (denominator a unit mod m)."""
    return q.numerator * pow(q.denominator, -1, m) % m


def congruence_solution_check(x: StandardRep, ring: ResidueRing) -> CongruenceCharacterization:
    """Compare the brute-force solution set with its closed description.

    Odd trace valuation (delta = 2m+1, trace 0 here): u = 0 mod p^(3m+2)
    and s^2 = 1 mod p^(4m+1).  Even delta = 2l <= 2m: two disjoint coset
    branches u in p^(l+2m+1) and u in -b*pi + p^(l+2m+1), each with
    s = 1 - (2/a1) u mod p^(l+2m+1).
    """
    if not x.is_ramified:
        raise ValueError("characterization applies to ramified representatives")
    m_ord = x.m
    p = ring.p
    mod = ring.modulus
    brute = frozenset(congruence_solution_set(x, ring))
    described: set[tuple[int, int]] = set()
    if x.delta == 2 * m_ord + 1:
        pu = p ** (3 * m_ord + 2)
        ps = p ** (4 * m_ord + 1)
        for u in range(0, mod, pu):
            for s in range(mod):
                if s % p == 0:
                    continue
                if (s * s - 1) % ps == 0:
                    described.add((u, s))
        branches = (len(described),)
        disjoint = True
    else:
        ell = x.delta // 2
        a1, a2 = x.a1, x.a2
        pi = Fraction(a2)
        b1 = 4 * pi * pi / (a1 * a1) - pi
        b2 = Fraction(a1) - 4 * pi / a1
        b = b2 / b1
        # valuations claimed by the closed description
        assert _fraction_valuation(b1, p) == 1 and _fraction_valuation(b2, p) == ell
        step = p ** (ell + 2 * m_ord + 1)
        two_over_a1 = _mod_inverse_fraction(Fraction(2, a1), mod)
        u0_b = (-_mod_inverse_fraction(b, mod) * a2) % step
        branch_sets = []
        for u0 in (0, u0_b):
            branch = set()
            for u in range(u0 % step, mod, step):
                s0 = (1 - two_over_a1 * u) % step
                for s in range(s0, mod, step):
                    if s % p:
                        branch.add((u, s))
            branch_sets.append(branch)
        described = branch_sets[0] | branch_sets[1]
        branches = tuple(len(bs) for bs in branch_sets)
        disjoint = not (branch_sets[0] & branch_sets[1])
    described_f = frozenset(described)
    passed = described_f == brute and disjoint
    return CongruenceCharacterization(x, ring, brute, described_f, branches, disjoint, passed)


def _fraction_valuation(q: Fraction, p: int) -> int:
    if q == 0:
        raise ValueError("valuation of 0")
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v
