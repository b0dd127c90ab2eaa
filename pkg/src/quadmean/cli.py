"""Command line front end.

Four subcommands:

  verify-local   run the exact local battery (orbits, stabilizers,
                 congruence systems, volumes, census) at chosen primes
  census         ramified-class census and density identities only
  constant       predicted leading coefficient for a condition list
  mean-value     empirical conditioned sums against the prediction

Every command emits a list of checked items; the process exits 0 only
if every item passes.  Formats: text (default), json, csv.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .densities import (
    IdentityCheck,
    PiPower,
    census_check,
    census_expected,
    mass_identity_check,
    orbital_volume_closed,
    remark_sums_check,
)
from .fields import cached_table
from .meanvalue import (
    EULER_CUTOFF,
    condition_sign,
    convergence_report,
    default_checkpoints,
    euler_tail_bound,
    parse_conditions,
    predicted_constant,
    predicted_prefactor,
)
from .orbits import (
    congruence_solution_check,
    congruence_solution_count,
    coset_normal_form_check,
    group_order,
    lift_saturation_check,
    orbit_size,
    stabilizer_elements,
    stabilizer_order,
    standard_representatives,
    torus_order,
)
from .residue import ResidueRing, is_prime, square_class_labels, SquareClassLabel

# loose sanity bound for non-final checkpoints; the final checkpoint of a
# sweep must land within the tight bound
FINAL_RATIO_TOL = 0.05
CONTEXT_RATIO_TOL = 0.5

_DIRECT_COUNT_MAX_MODULUS = 32


@dataclass(frozen=True)
class Item:
    anchor: str
    expected: object
    got: object
    passed: bool


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, PiPower):
        return str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _item_from_check(check: IdentityCheck) -> Item:
    return Item(check.name, check.expected, check.got, check.passed)


# ---------------------------------------------------------------------------
# verify-local
# ---------------------------------------------------------------------------

def _group_order_direct(ring: ResidueRing) -> int:
    """|GL1 x GL2| by enumeration: unit scalars times invertible matrices."""
    m = ring.modulus
    p = ring.p
    units = m - m // p
    vals = np.arange(m, dtype=np.int64)
    cs = np.repeat(vals, m)
    ds = np.tile(vals, m)
    matrices = 0
    for a in range(m):
        for b in range(m):
            matrices += int(np.count_nonzero((a * ds - b * cs) % p))
    return units * matrices


def _census_items(p: int) -> list[Item]:
    items = [_item_from_check(census_check(p))]
    items.extend(_item_from_check(c) for c in remark_sums_check(p))
    items.append(_item_from_check(mass_identity_check(p)))
    expected_vals = sorted(
        [0, 0] + [d for d, cnt in census_expected(p).items() for _ in range(cnt)]
    )
    got_vals = sorted(
        SquareClassLabel(p, lab).disc_valuation for lab in square_class_labels(p)
    )
    items.append(
        Item(
            f"square-class-valuations[p={p}]",
            expected_vals,
            got_vals,
            expected_vals == got_vals,
        )
    )
    return items


def _local_items(p: int) -> list[Item]:
    items: list[Item] = []
    reps = standard_representatives(p)
    levels = sorted({r.n for r in reps})
    for n in levels:
        ring = ResidueRing(p, n)
        if ring.modulus <= _DIRECT_COUNT_MAX_MODULUS:
            items.append(
                Item(
                    f"group-order-direct[p={p},level={n}]",
                    group_order(ring),
                    _group_order_direct(ring),
                    group_order(ring) == _group_order_direct(ring),
                )
            )
    for rep in reps:
        tag = f"p={p},{rep.algebra}"
        ring = rep.natural_ring()
        vol = orbital_volume_closed(rep)
        expected_orbit = vol * p ** (3 * rep.n)
        assert expected_orbit.denominator == 1
        got_orbit = orbit_size(rep, ring)
        items.append(
            Item(
                f"orbit-size[{tag},level={rep.n}]",
                int(expected_orbit),
                got_orbit,
                int(expected_orbit) == got_orbit,
            )
        )
        got_stab = stabilizer_order(rep, ring)
        if rep.is_ramified:
            q, n, delta = p, rep.n, rep.delta
            expected_torus = q ** (2 * n - 1) * (q - 1)
            got_torus = torus_order(rep, ring)
            items.append(
                Item(
                    f"torus-order[{tag},level={n}]",
                    expected_torus,
                    got_torus,
                    expected_torus == got_torus,
                )
            )
            expected_stab = 2 * q**delta * expected_torus
            items.append(
                Item(
                    f"stabilizer-order[{tag},level={n}]",
                    expected_stab,
                    got_stab,
                    expected_stab == got_stab,
                )
            )
            scan = len(stabilizer_elements(rep, ring))
            items.append(
                Item(
                    f"stabilizer-scan[{tag},level={n}]",
                    expected_stab,
                    scan,
                    expected_stab == scan,
                )
            )
            expected_cong = 2 * q**delta
            got_cong = congruence_solution_count(rep, ring)
            items.append(
                Item(
                    f"congruence-count[{tag},level={n}]",
                    expected_cong,
                    got_cong,
                    expected_cong == got_cong,
                )
            )
            cc = congruence_solution_check(rep, ring)
            items.append(
                Item(
                    f"congruence-structure[{tag},level={n}]",
                    sorted(cc.solutions),
                    sorted(cc.described),
                    cc.passed,
                )
            )
            cn = coset_normal_form_check(rep, ring)
            items.append(
                Item(
                    f"coset-normal-form[{tag},level={n}]",
                    {"fiber": cn.torus_size, "cosets": expected_cong},
                    {"fiber": cn.torus_size if cn.passed else -1, "cosets": cn.coset_count},
                    cn.passed,
                )
            )
        items.append(
            Item(
                f"volume-match[{tag},level={rep.n}]",
                vol,
                Fraction(got_orbit, p ** (3 * rep.n)),
                vol == Fraction(got_orbit, p ** (3 * rep.n)),
            )
        )
        ls = lift_saturation_check(rep, rep.n + 1)
        items.append(
            Item(
                f"lift-saturation[{tag},level={rep.n + 1}]",
                {"lifts": p**3, "missing": 0},
                {"lifts": ls.lifts, "missing": len(ls.missing)},
                ls.passed and ls.lifts == p**3,
            )
        )
        deeper = Fraction(ls.orbit_size, p ** (3 * (rep.n + 1)))
        items.append(
            Item(
                f"volume-stable[{tag},level={rep.n + 1}]",
                vol,
                deeper,
                vol == deeper,
            )
        )
    items.extend(_census_items(p))
    return items


# ---------------------------------------------------------------------------
# subcommand runners
# ---------------------------------------------------------------------------

def _parse_primes(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        v = int(part)
        if not is_prime(v):
            raise ValueError(f"{v} is not prime")
        out.append(v)
    return out


def _run_verify_local(args) -> tuple[dict, list[Item]]:
    primes = _parse_primes(args.primes)
    items: list[Item] = []
    for p in primes:
        items.extend(_local_items(p))
    return {"primes": primes}, items


def _run_census(args) -> tuple[dict, list[Item]]:
    primes = _parse_primes(args.primes)
    items: list[Item] = []
    for p in primes:
        items.extend(_census_items(p))
    return {"primes": primes}, items


def _run_constant(args) -> tuple[dict, list[Item]]:
    conds = parse_conditions(args.cond)
    sign = condition_sign(conds)  # validates the archimedean part
    pref = predicted_prefactor(conds)
    const = predicted_constant(conds, args.euler_cutoff)
    const_tenth = predicted_constant(conds, max(args.euler_cutoff // 10, 10))
    tol = 1.02 * euler_tail_bound(max(args.euler_cutoff // 10, 10))
    rel = abs(const - const_tenth) / const
    items = [
        Item(f"exact-prefactor[{args.cond}]", None, pref, True),
        Item(f"predicted-constant[{args.cond}]", None, const, True),
        Item(
            f"euler-cutoff-stability[{args.cond}]",
            f"relative move under cutoff/10 <= {tol:.3e}",
            rel,
            rel <= tol,
        ),
    ]
    return {
        "cond": args.cond,
        "sign": sign,
        "euler_cutoff": args.euler_cutoff,
    }, items


def _run_mean_value(args) -> tuple[dict, list[Item]]:
    conds = parse_conditions(args.cond)
    sign = condition_sign(conds)
    limit = args.X
    checkpoints = (
        [int(v) for v in args.checkpoints.split(",")]
        if args.checkpoints
        else default_checkpoints(limit)
    )
    if max(checkpoints) > limit:
        raise ValueError("checkpoint beyond --X")
    table = cached_table(sign, limit, args.cache, args.workers)
    rows = convergence_report(table, conds, checkpoints, args.euler_cutoff)
    items = []
    final = rows[-1].upto
    for row in rows:
        tol = FINAL_RATIO_TOL if row.upto == final else CONTEXT_RATIO_TOL
        items.append(
            Item(
                f"sum-ratio[{args.cond}]@X={row.upto}",
                {"predicted": row.predicted, "within": tol},
                {"empirical": row.empirical, "ratio": row.ratio},
                abs(row.ratio - 1) <= tol,
            )
        )
    if len(rows) > 1:
        first_dev = abs(rows[0].ratio - 1)
        last_dev = abs(rows[-1].ratio - 1)
        items.append(
            Item(
                f"convergence-trend[{args.cond}]",
                f"deviation at X={final} below deviation at X={rows[0].upto}",
                {"first": first_dev, "final": last_dev},
                last_dev < first_dev,
            )
        )
    return {
        "cond": args.cond,
        "sign": sign,
        "X": limit,
        "checkpoints": checkpoints,
        "euler_cutoff": args.euler_cutoff,
        "cache": args.cache,
        "workers": args.workers,
    }, items


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _emit(command: str, config: dict, items: list[Item], fmt: str, out) -> None:
    passed = sum(1 for i in items if i.passed)
    summary = {"total": len(items), "passed": passed, "failed": len(items) - passed}
    if fmt == "json":
        doc = {
            "command": command,
            "config": _jsonable(config),
            "items": [
                {
                    "anchor": i.anchor,
                    "expected": _jsonable(i.expected),
                    "got": _jsonable(i.got),
                    "pass": i.passed,
                }
                for i in items
            ],
            "summary": summary,
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        writer = csv.writer(out)
        writer.writerow(["anchor", "expected", "got", "pass"])
        for i in items:
            writer.writerow(
                [i.anchor, json.dumps(_jsonable(i.expected)),
                 json.dumps(_jsonable(i.got)), json.dumps(i.passed)]
            )
    else:
        width = max((len(i.anchor) for i in items), default=0)
        for i in items:
            mark = "pass" if i.passed else "FAIL"
            out.write(f"[{mark}] {i.anchor:<{width}}  expected={i.expected}  got={i.got}\n")
        out.write(
            f"{summary['passed']}/{summary['total']} checks passed"
            + (f", {summary['failed']} FAILED\n" if summary["failed"] else "\n")
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadmean",
        description="exact local checks and mean-value sweeps for quadratic fields",
    )
    parser.add_argument(
        "--format", choices=("text", "json", "csv"), default="text",
        help="output format (default text)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify-local", help="full exact battery at chosen primes")
    pv.add_argument("--primes", default="2,3,5", help="comma-separated primes")

    pc = sub.add_parser("census", help="ramified census and density identities")
    pc.add_argument("--primes", default="2,3,5", help="comma-separated primes")

    pk = sub.add_parser("constant", help="predicted leading coefficient")
    pk.add_argument("--cond", required=True,
                    help='conditions, e.g. "inf=C,2=ram:-1"')
    pk.add_argument("--euler-cutoff", type=int, default=EULER_CUTOFF)

    pm = sub.add_parser("mean-value", help="empirical sums against the prediction")
    pm.add_argument("--cond", required=True,
                    help='conditions, e.g. "inf=RxR" or "inf=C,2=split"')
    pm.add_argument("--X", type=int, required=True, help="discriminant bound")
    pm.add_argument("--checkpoints", default="",
                    help="comma-separated partial bounds (default X/100, X/10, X)")
    pm.add_argument("--cache", default=None, help="CSV cache path for the table")
    pm.add_argument("--workers", type=int, default=1)
    pm.add_argument("--euler-cutoff", type=int, default=EULER_CUTOFF)
    return parser


_RUNNERS = {
    "verify-local": _run_verify_local,
    "census": _run_census,
    "constant": _run_constant,
    "mean-value": _run_mean_value,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config, items = _RUNNERS[args.command](args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(args.command, config, items, args.format, out)
    return 0 if all(i.passed for i in items) else 1


def run() -> None:
    sys.exit(main())
