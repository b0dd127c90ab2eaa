"""Mean value of h*R over quadratic fields, empirically and predicted.

The prediction is a constant times X^(3/2): the constant is pi^2/9 times
the archimedean density of the ordered signature, times one factor per
finite prime.  An unconditioned prime contributes the total density
1 - q^-2 - q^-3 + q^-4; a prime pinned to one local isomorphism type
contributes that type's single density instead.  Sums are taken over
fundamental discriminants of bounded size, optionally filtered by local
type at the tracked primes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .densities import PiPower, local_density
from .fields import TRACKED_PRIMES, DiscriminantTable, type_labels
from .orbits import (
    ALG_COMPLEX,
    ALG_REAL_PAIR,
    ALG_SPLIT,
    QuadraticAlgebraDescriptor,
    ramified_algebra,
    unramified_algebra,
)

EULER_CUTOFF = 10**6

_ARCH_VALUES = {"C": ALG_COMPLEX, "RxR": ALG_REAL_PAIR}


def euler_factor(p: int) -> Fraction:
    """Total local density at p: 1 - q^-2 - q^-3 + q^-4, exact."""
    q = Fraction(p)
    return 1 - q**-2 - q**-3 + q**-4


def primes_upto(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, int(n**0.5) + 1):
        if sieve[k]:
            sieve[k * k :: k] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def euler_product(cutoff: int = EULER_CUTOFF, skip: tuple[int, ...] = ()) -> float:
    """Product of the total local densities over primes up to cutoff,
    multiplied in ascending order."""
    ps = primes_upto(cutoff).astype(np.float64)
    if skip:
        keep = ~np.isin(ps, np.array(skip, dtype=np.float64))
        ps = ps[keep]
    factors = 1.0 - ps**-2.0 - ps**-3.0 + ps**-4.0
    return float(np.multiply.reduce(factors))


def euler_tail_bound(cutoff: int) -> float:
    """Bound on |log of the omitted factor product| past the cutoff:
    each factor f(q) has |log f(q)| <= 2 q^-2 for q >= 2, and the prime
    sum is below the integer tail sum 2/(cutoff - 1)."""
    return 2.0 / (cutoff - 1)


def log_factor_bound_margin(a: float) -> float:
    """2a^2 - |log(1 - a^2 - a^3 + a^4)|, nonnegative on 0 < a <= 1/2."""
    import math

    return 2 * a * a - abs(math.log(1 - a * a - a**3 + a**4))


# ---------------------------------------------------------------------------
# local conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalCondition:
    """A pinned completion: the archimedean place (prime None) set to
    "C" or "RxR", or a tracked prime set to a local type label."""

    prime: int | None
    value: str

    def __post_init__(self) -> None:
        if self.prime is None:
            if self.value not in _ARCH_VALUES:
                raise ValueError('archimedean value must be "C" or "RxR"')
        else:
            if self.prime not in TRACKED_PRIMES:
                raise ValueError(f"conditions are tracked at primes {TRACKED_PRIMES}")
            if self.value not in type_labels(self.prime):
                raise ValueError(
                    f"unknown type {self.value!r} at {self.prime}; "
                    f"choose from {type_labels(self.prime)}"
                )

    @property
    def is_archimedean(self) -> bool:
        return self.prime is None

    def algebra(self) -> QuadraticAlgebraDescriptor:
        if self.prime is None:
            return _ARCH_VALUES[self.value]
        if self.value == "split":
            return ALG_SPLIT
        if self.value == "unram":
            return unramified_algebra(self.prime)
        return ramified_algebra(self.prime, int(self.value.split(":", 1)[1]))

    def __str__(self) -> str:
        place = "inf" if self.prime is None else str(self.prime)
        return f"{place}={self.value}"


def parse_condition(text: str) -> LocalCondition:
    place, sep, value = text.partition("=")
    if not sep or not value:
        raise ValueError(f"condition {text!r} is not place=value")
    place = place.strip()
    if place == "inf":
        return LocalCondition(None, value.strip())
    if not place.isdigit():
        raise ValueError(f"place {place!r} is neither 'inf' nor a prime")
    return LocalCondition(int(place), value.strip())


def parse_conditions(text: str) -> list[LocalCondition]:
    """Comma-separated place=value list; at most one condition per place."""
    if not text.strip():
        return []
    conds = [parse_condition(part) for part in text.split(",")]
    places = [c.prime for c in conds]
    if len(set(places)) != len(places):
        raise ValueError("duplicate place in condition list")
    return conds


def condition_sign(conditions: list[LocalCondition]) -> int:
    """Discriminant sign pinned by the archimedean condition."""
    for c in conditions:
        if c.is_archimedean:
            return -1 if c.value == "C" else 1
    raise ValueError("an inf=C or inf=RxR condition is required")


def condition_mask(table: DiscriminantTable, conditions: list[LocalCondition]) -> np.ndarray:
    """Row mask of table entries whose tracked local types match every
    finite condition."""
    mask = np.ones(len(table), dtype=bool)
    for c in conditions:
        if c.is_archimedean:
            want = -1 if c.value == "C" else 1
            if want != table.sign:
                raise ValueError("archimedean condition contradicts the table sign")
            continue
        col = TRACKED_PRIMES.index(c.prime)
        code = type_labels(c.prime).index(c.value)
        mask &= table.codes[:, col] == code
    return mask


def empirical_sum(
    table: DiscriminantTable,
    conditions: list[LocalCondition] = (),
    upto: int | None = None,
) -> float:
    """Sum of h*R over table rows matching the conditions, |D| <= upto."""
    mask = condition_mask(table, list(conditions))
    if upto is not None:
        mask = mask & (table.magnitude <= upto)
    return float((table.h[mask] * table.reg[mask]).sum())


# ---------------------------------------------------------------------------
# the predicted constant and convergence
# ---------------------------------------------------------------------------

def predicted_prefactor(conditions: list[LocalCondition]) -> PiPower:
    """Exact part of the predicted constant: pi^2/9 times the archimedean
    density times the densities of the pinned finite types."""
    pref = PiPower(Fraction(1, 9), 2)
    saw_arch = False
    for c in conditions:
        dens = local_density(c.algebra(), c.prime)
        if c.is_archimedean:
            saw_arch = True
        pref = pref * dens
    if not saw_arch:
        raise ValueError("an inf=C or inf=RxR condition is required")
    return pref


def predicted_constant(
    conditions: list[LocalCondition], cutoff: int = EULER_CUTOFF
) -> float:
    """Leading coefficient of the X^(3/2) growth of the conditioned sum."""
    conds = list(conditions)
    pref = predicted_prefactor(conds)
    pinned = tuple(c.prime for c in conds if not c.is_archimedean)
    return pref.value() * euler_product(cutoff, skip=pinned)


@dataclass(frozen=True)
class ConvergenceRow:
    upto: int
    empirical: float
    predicted: float

    @property
    def ratio(self) -> float:
        return self.empirical / self.predicted


def convergence_report(
    table: DiscriminantTable,
    conditions: list[LocalCondition],
    checkpoints: list[int],
    cutoff: int = EULER_CUTOFF,
) -> list[ConvergenceRow]:
    """Empirical versus predicted conditioned sums at increasing cutoffs."""
    conds = list(conditions)
    if not checkpoints:
        raise ValueError("need at least one checkpoint")
    if condition_sign(conds) != table.sign:
        raise ValueError("conditions pin the other discriminant sign")
    const = predicted_constant(conds, cutoff)
    rows = []
    for x in sorted(checkpoints):
        if x > table.limit:
            raise ValueError(f"checkpoint {x} beyond table limit {table.limit}")
        total = empirical_sum(table, conds, upto=x)
        rows.append(ConvergenceRow(int(x), total, const * float(x) ** 1.5))
    return rows


def default_checkpoints(limit: int) -> list[int]:
    """Two decades of convergence context below the limit."""
    return sorted({max(limit // 100, 1), max(limit // 10, 1), limit})
