"""Quadratic fields of Q: discriminants, class numbers, regulators.

Everything here is exact or reduces to sums of logarithms of exact
integer data.  Class numbers of imaginary fields come from counting
reduced positive forms; for real fields the product h*R comes from
summing log((b + sqrt(D))/(2c)) over reduced indefinite forms with
positive leading coefficient, the regulator comes from the continued
fraction cycle of the maximal order's generator, and h is recovered as
the (checked) integer ratio.  Per-field oracles and analytic character
sums are provided for independent cross-checks.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .orbits import (
    ALG_SPLIT,
    QuadraticAlgebraDescriptor,
    ramified_algebra,
    unramified_algebra,
)
from .residue import kronecker, ramified_labels, square_class

TRACKED_PRIMES = (2, 3, 5)


# ---------------------------------------------------------------------------
# fundamental discriminants
# ---------------------------------------------------------------------------

def is_fundamental(d: int) -> bool:
    """Discriminant of the maximal order of a quadratic field."""
    if d == 0 or d == 1:
        return False
    if d % 4 == 1:
        return _is_squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _is_squarefree(abs(m))
    return False


def _is_squarefree(n: int) -> bool:
    if n % 4 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 2
    return True


def _squarefree_sieve(limit: int) -> np.ndarray:
    sf = np.ones(limit + 1, dtype=bool)
    for k in range(2, isqrt(limit) + 1):
        sf[k * k :: k * k] = False
    return sf


def fundamental_magnitudes(sign: int, limit: int) -> np.ndarray:
    """Sorted |D| for fundamental discriminants D with sign(D)=sign, |D|<=limit."""
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    sf = _squarefree_sieve(limit)
    idx = np.arange(limit + 1, dtype=np.int64)
    r16 = idx % 16
    quarter = idx // 4
    if sign < 0:
        mask = ((idx % 4 == 3) & sf) | (((r16 == 4) | (r16 == 8)) & sf[quarter])
    else:
        mask = ((idx % 4 == 1) & sf) | (((r16 == 8) | (r16 == 12)) & sf[quarter])
        mask[1] = False
    mask[0] = False
    return idx[mask]


def fundamental_discriminants(sign: int, limit: int) -> np.ndarray:
    return sign * fundamental_magnitudes(sign, limit)


# ---------------------------------------------------------------------------
# local classification of a discriminant
# ---------------------------------------------------------------------------

def local_type(d: int, p: int) -> QuadraticAlgebraDescriptor:
    """Isomorphism type of the completion at p of the quadratic algebra of
    discriminant d."""
    k = kronecker(d, p)
    if k == 1:
        return ALG_SPLIT
    if k == -1:
        return unramified_algebra(p)
    return ramified_algebra(p, square_class(d, p).label)


def type_labels(p: int) -> list[str]:
    """Condition labels at p in code order: split, unram, then the
    ramified square classes."""
    return ["split", "unram"] + [f"ram:{lab}" for lab in ramified_labels(p)]


def local_type_label(d: int, p: int) -> str:
    alg = local_type(d, p)
    if alg.kind == "split":
        return "split"
    if alg.kind == "unramified":
        return "unram"
    return f"ram:{alg.square_class.label}"


_DYADIC_UNIT_CODE = np.zeros(8, dtype=np.int8)
_DYADIC_V2_CODE = np.zeros(8, dtype=np.int8)
_DYADIC_V3_CODE = np.zeros(8, dtype=np.int8)
_RAM2 = ramified_labels(2)
for _r, _lab in ((1, 1), (3, -5), (5, 5), (7, -1)):
    _DYADIC_UNIT_CODE[_r] = 0 if _lab == 1 else 1
    _DYADIC_V2_CODE[_r] = 2 + _RAM2.index(_lab) if _lab in _RAM2 else 0
    _DYADIC_V3_CODE[_r] = 2 + _RAM2.index(2 * _lab)


def local_type_codes(d: np.ndarray) -> np.ndarray:
    """Type codes at the tracked primes for an array of fundamental
    discriminants; column j is the code at TRACKED_PRIMES[j], with
    0 = split, 1 = unram, 2+k = k-th ramified label."""
    d = np.asarray(d, dtype=np.int64)
    out = np.zeros((d.size, len(TRACKED_PRIMES)), dtype=np.int8)
    # p = 2 by residues
    odd = d % 2 != 0
    out[odd, 0] = _DYADIC_UNIT_CODE[d[odd] % 8]
    v2 = ~odd & (d % 8 != 0)
    out[v2, 0] = _DYADIC_V2_CODE[(d[v2] // 4) % 8]
    v3 = ~odd & (d % 8 == 0)
    out[v3, 0] = _DYADIC_V3_CODE[(d[v3] // 8) % 8]
    for j, p in enumerate(TRACKED_PRIMES[1:], start=1):
        leg = np.array([0] + [kronecker(a, p) for a in range(1, p)], dtype=np.int8)
        r = d % p
        unit = r != 0
        out[unit, j] = np.where(leg[r[unit]] == 1, 0, 1)
        ram = ~unit
        unit_part = leg[(d[ram] // p) % p]
        out[ram, j] = np.where(unit_part == 1, 2, 3)
    return out


# ---------------------------------------------------------------------------
# imaginary class numbers
# ---------------------------------------------------------------------------

def class_number_imaginary(d: int) -> int:
    """h(d) for a fundamental d < 0 by counting reduced positive forms
    (a, b, c): b^2 - 4ac = d, |b| <= a <= c, b >= 0 when |b| = a or a = c."""
    if d >= 0 or not is_fundamental(d):
        raise ValueError("fundamental negative discriminant required")
    n = -d
    count = 0
    b = n & 1
    while 3 * b * b <= n:
        m = (b * b + n) // 4
        a = max(b, 1)
        while a * a <= m:
            if m % a == 0:
                count += 1 if (b == 0 or b == a or a * a == m) else 2
            a += 1
        b += 2
    return count


def _imag_hist_range(limit: int, start: int, stride: int) -> np.ndarray:
    """Histogram of reduced-form counts over 0..limit for a in the
    residue class start mod stride."""
    hist = np.zeros(limit + 1, dtype=np.int64)
    amax = isqrt(limit // 3)
    for a in range(start, amax + 1, stride):
        step = 4 * a
        for b in range(a + 1):
            first = 4 * a * a - b * b
            if first > limit:
                continue
            if b == 0 or b == a:
                hist[first::step] += 1
            else:
                hist[first::step] += 2
                hist[first] -= 1
    return hist


def imaginary_class_number_histogram(limit: int, workers: int = 1) -> np.ndarray:
    """hist[n] = h(-n) for every fundamental -n with n <= limit (entries at
    non-fundamental indices are form counts without meaning)."""
    if workers <= 1:
        return _imag_hist_range(limit, 1, 1)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = ex.map(_imag_hist_range, [limit] * workers,
                       range(1, workers + 1), [workers] * workers)
        total = np.zeros(limit + 1, dtype=np.int64)
        for part in parts:
            total += part
    return total


def analytic_class_number_imaginary(d: int) -> Fraction:
    """Character-sum evaluation of h(d), exact: -w * sum(a*chi(a)) / (2|d|)
    with w = 6, 4, 2 for |d| = 3, 4, larger."""
    if d >= 0:
        raise ValueError("negative discriminant required")
    n = -d
    w = 6 if n == 3 else 4 if n == 4 else 2
    total = sum(a * kronecker(d, a) for a in range(1, n))
    return Fraction(-w * total, 2 * n)


# ---------------------------------------------------------------------------
# real fields: regulator, unit, h*R
# ---------------------------------------------------------------------------

def _surd_cycle(d: int) -> list[tuple[int, int]]:
    """Periodic (P, Q) states of the continued fraction of the maximal
    order generator (d mod 2 + sqrt(d))/2; each state is the purely
    periodic surd (P + sqrt(d))/Q."""
    s = isqrt(d)
    if s * s == d:
        raise ValueError("discriminant must not be a square")
    P, Q = d % 2, 2
    seen: dict[tuple[int, int], int] = {}
    states: list[tuple[int, int]] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(states)
        states.append((P, Q))
        a = (P + s) // Q
        P = a * Q - P
        Q = (d - P * P) // Q
    return states[seen[(P, Q)] :]


def regulator_real(d: int) -> float:
    """log of the fundamental unit of the maximal real quadratic order."""
    sd = math.sqrt(d)
    return math.fsum(math.log((P + sd) / Q) for P, Q in _surd_cycle(d))


def fundamental_unit_exact(d: int) -> tuple[int, int]:
    """(t, u) with the fundamental unit (t + u*sqrt(d))/2, t^2 - d u^2 = +-4,
    by exact multiplication over the continued fraction cycle."""
    x, y = Fraction(1), Fraction(0)
    for P, Q in _surd_cycle(d):
        x, y = Fraction(P * x + d * y, Q), Fraction(x + P * y, Q)
    t, u = 2 * x, 2 * y
    if t.denominator != 1 or u.denominator != 1:
        raise ArithmeticError("unit coordinates not half-integral")
    t, u = int(t), int(u)
    if t * t - d * u * u not in (4, -4):
        raise ArithmeticError("norm of claimed unit is not +-1")
    return t, u


def _reduced_indefinite_forms(d: int) -> list[tuple[int, int, int]]:
    """All reduced forms (a, b, c) of positive non-square discriminant d:
    a*c < 0 and b > |a + c|, equivalently 0 < b < sqrt(d) < b + 2|a|
    with |sqrt(d) - 2|a|| < b."""
    forms = []
    s = isqrt(d)
    for b in range(2 - (d & 1), s + 1, 2):
        rest = d - b * b
        if rest % 4:
            continue
        n = rest // 4
        for a in range(1, isqrt(n) + 1):
            if n % a:
                continue
            c = n // a
            if b > c - a:
                forms.append((a, b, -c))
                forms.append((-a, b, c))
                if a != c:
                    forms.append((c, b, -a))
                    forms.append((-c, b, a))
    return forms


def _rho_step(form: tuple[int, int, int], d: int, s: int) -> tuple[int, int, int]:
    """Reduction-cycle neighbor: (a, b, c) -> (c, r, (r^2 - d)/(4c)) with
    r = -b mod 2|c| chosen in (sqrt(d) - 2|c|, sqrt(d))."""
    _, b, c = form
    m2 = 2 * abs(c)
    r = s - ((s - ((-b) % m2)) % m2)
    return (c, r, (r * r - d) // (4 * c))


def reduction_cycle_count(d: int) -> int:
    """Number of reduction cycles on the reduced forms of discriminant d;
    this is the narrow class number."""
    s = isqrt(d)
    todo = set(_reduced_indefinite_forms(d))
    cycles = 0
    while todo:
        start = next(iter(todo))
        f = start
        while True:
            todo.discard(f)
            f = _rho_step(f, d, s)
            if f == start:
                break
        cycles += 1
    return cycles


def class_number_real(d: int) -> int:
    """h(d) for fundamental d > 0: the cycle count, halved when the
    fundamental unit has norm +1 (narrow classes then pair up)."""
    if d <= 0 or not is_fundamental(d):
        raise ValueError("fundamental positive discriminant required")
    cycles = reduction_cycle_count(d)
    t, u = fundamental_unit_exact(d)
    if t * t - d * u * u == 4:
        if cycles % 2:
            raise ArithmeticError(f"odd cycle count with a norm +1 unit at D={d}")
        return cycles // 2
    return cycles


def hr_real(d: int) -> float:
    """h(d) * regulator, as the form sum over reduced (a, b, -c), a > 0,
    of log((b + sqrt(d))/(2c))."""
    sd = math.sqrt(d)
    return math.fsum(
        math.log((b + sd) / (-2 * c))
        for a, b, c in _reduced_indefinite_forms(d)
        if a > 0
    )


def _real_hr_range(limit: int, start: int, stride: int) -> np.ndarray:
    """Sum of log((b + sqrt(D))/(2c)) into hist[D] over reduced forms
    (a, b, -c) with a > 0, for a in the residue class start mod stride."""
    hist = np.zeros(limit + 1, dtype=np.float64)
    smax = isqrt(limit)
    for a in range(start, smax, stride):
        for c in range(1, smax - a + 1):
            fourac = 4 * a * c
            if fourac >= limit:
                break
            bmin = abs(a - c) + 1
            bmax = isqrt(limit - fourac)
            if bmax < bmin:
                continue
            bs = np.arange(bmin, bmax + 1, dtype=np.int64)
            ds = bs * bs + fourac
            hist[ds] += np.log((bs + np.sqrt(ds.astype(np.float64))) / (2.0 * c))
    return hist


def real_hr_histogram(limit: int, workers: int = 1) -> np.ndarray:
    """hist[D] = h(D)*R(D) for fundamental D <= limit (other indices carry
    meaningless partial sums)."""
    if workers <= 1:
        return _real_hr_range(limit, 1, 1)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = ex.map(_real_hr_range, [limit] * workers,
                       range(1, workers + 1), [workers] * workers)
        total = np.zeros(limit + 1, dtype=np.float64)
        for part in parts:
            total += part
    return total


def _regulator_range(ds: list[int]) -> list[float]:
    return [regulator_real(int(d)) for d in ds]


def analytic_hr_real(d: int) -> float:
    """Character-sum evaluation of h(d)*R(d):
    -(1/2) * sum over a of chi_d(a) * log(sin(pi a / d))."""
    if d <= 0:
        raise ValueError("positive discriminant required")
    return -0.5 * math.fsum(
        kronecker(d, a) * math.log(math.sin(math.pi * a / d))
        for a in range(1, d)
        if math.gcd(a, d) == 1
    )


# ---------------------------------------------------------------------------
# the discriminant table
# ---------------------------------------------------------------------------

_INTEGRALITY_TOL = 1e-6


@dataclass
class DiscriminantTable:
    """Fundamental discriminants of one sign with h, R, and local types.

    Columns: magnitude |D| (ascending), class number h, regulator R
    (1.0 on the imaginary side), and one type code per tracked prime.
    """

    sign: int
    limit: int
    magnitude: np.ndarray
    h: np.ndarray
    reg: np.ndarray
    codes: np.ndarray

    def __len__(self) -> int:
        return int(self.magnitude.size)

    @property
    def discriminants(self) -> np.ndarray:
        return self.sign * self.magnitude

    def hr(self) -> np.ndarray:
        return self.h * self.reg

    @classmethod
    def compute(cls, sign: int, limit: int, workers: int = 1) -> "DiscriminantTable":
        mags = fundamental_magnitudes(sign, limit)
        if sign < 0:
            hist = imaginary_class_number_histogram(limit, workers)
            h = hist[mags]
            reg = np.ones(mags.size, dtype=np.float64)
        else:
            hist = real_hr_histogram(limit, workers)
            hr = hist[mags]
            reg = cls._regulators(mags, workers)
            ratio = hr / reg
            h_float = np.round(ratio)
            if not np.all(np.abs(ratio - h_float) < _INTEGRALITY_TOL):
                worst = int(mags[np.argmax(np.abs(ratio - h_float))])
                raise ArithmeticError(f"non-integral h*R/R at D={worst}")
            h = h_float.astype(np.int64)
        codes = local_type_codes(sign * mags)
        return cls(sign, limit, mags, h, reg, codes)

    @staticmethod
    def _regulators(mags: np.ndarray, workers: int) -> np.ndarray:
        ds = [int(v) for v in mags]
        if workers <= 1:
            return np.array(_regulator_range(ds), dtype=np.float64)
        chunks = [ds[k::workers] for k in range(workers)]
        out = np.empty(len(ds), dtype=np.float64)
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for k, vals in enumerate(ex.map(_regulator_range, chunks)):
                out[k::workers] = vals
        return out

    # -- persistence --------------------------------------------------------

    def save(self, path: str) -> None:
        labels = [type_labels(p) for p in TRACKED_PRIMES]
        with open(path, "w", newline="") as f:
            f.write(f"#quadmean-table sign={self.sign} limit={self.limit}\n")
            writer = csv.writer(f)
            writer.writerow(["D", "h", "R", "fp2", "fp3", "fp5"])
            for i in range(len(self)):
                writer.writerow(
                    [
                        int(self.sign * self.magnitude[i]),
                        int(self.h[i]),
                        "%.17g" % self.reg[i],
                        labels[0][self.codes[i, 0]],
                        labels[1][self.codes[i, 1]],
                        labels[2][self.codes[i, 2]],
                    ]
                )

    @classmethod
    def load(cls, path: str) -> "DiscriminantTable":
        rev = [
            {lab: k for k, lab in enumerate(type_labels(p))} for p in TRACKED_PRIMES
        ]
        with open(path, newline="") as f:
            header = f.readline().strip()
            if not header.startswith("#quadmean-table "):
                raise ValueError(f"{path} is not a table cache")
            meta = dict(kv.split("=") for kv in header.split()[1:])
            sign, limit = int(meta["sign"]), int(meta["limit"])
            reader = csv.reader(f)
            next(reader)  # column header
            mags, hs, regs, codes = [], [], [], []
            for row in reader:
                d = int(row[0])
                if d * sign <= 0:
                    raise ValueError("sign of cached row disagrees with header")
                mags.append(abs(d))
                hs.append(int(row[1]))
                regs.append(float(row[2]))
                codes.append([rev[j][row[3 + j]] for j in range(3)])
        return cls(
            sign,
            limit,
            np.array(mags, dtype=np.int64),
            np.array(hs, dtype=np.int64),
            np.array(regs, dtype=np.float64),
            np.array(codes, dtype=np.int8),
        )

    def truncated(self, limit: int) -> "DiscriminantTable":
        if limit > self.limit:
            raise ValueError("cannot extend a table by truncation")
        keep = self.magnitude <= limit
        return DiscriminantTable(
            self.sign, limit, self.magnitude[keep], self.h[keep],
            self.reg[keep], self.codes[keep],
        )


def cached_table(
    sign: int, limit: int, path: str | None = None, workers: int = 1
) -> DiscriminantTable:
    """Table from cache when the cache covers the request, else computed
    (and saved when a path is given)."""
    if path and os.path.exists(path):
        table = DiscriminantTable.load(path)
        if table.sign == sign and table.limit >= limit:
            return table.truncated(limit)
    table = DiscriminantTable.compute(sign, limit, workers)
    if path:
        table.save(path)
    return table
