"""Command-line interface: ``gaussbound <command> ...``.

Exit codes: 0 success, 1 bound violation or oracle disagreement, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import bounds as bd
from .exceptions import DomainError, QuadratureError, TruncationError, UnsupportedWitness
from .explorer import FAMILIES, PairSampleConfig, verify_conjecture
from .fidelity import bures_distance, compare_states, fidelity, ratio_to_y, y_to_max_ratio
from .oracle import CHECK_TAIL_TOL, check_against_closed_forms
from .states import MixedGaussianState, PureGaussianState, energy, means, moments, purity

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SEED_ENV = "GAUSSBOUND_SEED"

_FIELDS = {"pure": ("kind", "a", "b", "x", "p"), "mixed": ("kind", "a", "b", "zeta")}


class UsageError(Exception):
    pass


# -- state documents -------------------------------------------------------------

def _number(doc, name):
    v = doc.get(name, 0.0)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise UsageError(f"field {name!r} must be a number, got {v!r}")
    return float(v)


def parse_state(doc) -> PureGaussianState | MixedGaussianState:
    """Build a state from a decoded StateDocument, rejecting unknown fields."""
    if not isinstance(doc, dict):
        raise UsageError("state document must be a JSON object")
    kind = doc.get("kind")
    if kind not in _FIELDS:
        raise UsageError(f"field 'kind' must be 'pure' or 'mixed', got {kind!r}")
    for name in doc:
        if name not in _FIELDS[kind]:
            raise UsageError(f"unknown field {name!r} for a {kind} state")
    if "a" not in doc:
        raise UsageError("field 'a' is required")
    try:
        if kind == "pure":
            return PureGaussianState(_number(doc, "a"), _number(doc, "b"), _number(doc, "x"), _number(doc, "p"))
        return MixedGaussianState(_number(doc, "a"), _number(doc, "b"), _number(doc, "zeta"))
    except DomainError as exc:
        raise UsageError(f"invalid state: {exc}") from None


def state_document(s) -> dict:
    """Canonical StateDocument for ``s`` (inverse of :func:`parse_state`)."""
    if isinstance(s, PureGaussianState):
        return {"kind": "pure", "a": s.a, "b": s.b, "x": s.x0, "p": s.p0}
    return {"kind": "mixed", "a": s.a, "b": s.b, "zeta": s.zeta}


def load_state(text: str):
    """Parse a state from inline JSON or ``@path``."""
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read state file: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"state is not valid JSON: {exc}") from None
    return parse_state(doc)


def _dump(obj) -> str:
    # repr floats: the shortest decimal string that reads back to the same double
    return json.dumps(obj, indent=2, allow_nan=False)


# -- tables ----------------------------------------------------------------------

TABLE1_RATIOS = (3.0, 2.0, 1.5, 1.1)
TABLE2_FIDELITIES = (0.999, 0.99, 0.95, 0.9)
TABLE1_COLUMNS = ("E2/E1", "Y", "F_coh", "F_delta", "F_smix", "F_max")
TABLE2_COLUMNS = ("F", "Y_m", "(E2/E1)_m")


def table1_rows() -> list[tuple[tuple[float, int], ...]]:
    """Rows of (value, printed decimals) for maximal fidelities at given energy ratios."""
    rows = []
    for r in TABLE1_RATIOS:
        y = ratio_to_y(r)
        d = 4 if r < 1.2 else 2
        rows.append((
            (r, 1),
            (y, 3),
            (bd.f_max(bd.COHERENT, y), d),
            (bd.f_max(bd.DISPLACED, y), d),
            (bd.f_max(bd.SUPERMIXED, y), d),
            (bd.f_max(bd.PURE, y), 6 if r < 1.2 else 2),
        ))
    return rows


def table2_rows() -> list[tuple[tuple[float, int], ...]]:
    """Rows of (value, printed decimals) for maximal energy differences at given fidelities."""
    rows = []
    for f in TABLE2_FIDELITIES:
        y = bd.y_max(bd.PURE, f)
        rows.append(((f, 3), (y, 2), (y_to_max_ratio(y), 2)))
    return rows


def _format_cell(value, decimals, full):
    if full:
        return f"{value:.6f}"
    return f"{value:.{decimals}f}".rstrip("0").rstrip(".") if decimals == 1 else f"{value:.{decimals}f}"


def format_table(table_id: int, full: bool = False) -> str:
    if table_id == 1:
        header, rows = TABLE1_COLUMNS, table1_rows()
    elif table_id == 2:
        header, rows = TABLE2_COLUMNS, table2_rows()
    else:
        raise UsageError(f"table id must be 1 or 2, got {table_id}")
    cells = [list(header)]
    for row in rows:
        first = row[0][0]
        cells.append([f"{first:g}"] + [_format_cell(v, d, full) for v, d in row[1:]])
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells) + "\n"


# -- sweeps ----------------------------------------------------------------------

_COLUMN = {
    bd.COHERENT_TAG: "y_coh",
    bd.DISPLACED_TAG: "y_delta",
    bd.FIXED_SHAPE_TAG: "y_shape",
    bd.PURE_TAG: "y_pure",
    bd.MIXED_TAG: "y_mix",
    bd.SUPERMIXED_TAG: "y_smix",
    bd.PURE_VS_MIXED_TAG: "y_pvm",
}
DEFAULT_SWEEP = ("coherent", "displaced", "pure", "supermixed")


def sweep_rows(families, f_min: float, f_max: float, steps: int):
    """Grid rows ``{'f', <y column per family>, 'ratio'}``.

    ``ratio`` is the largest energy ratio allowed by the widest listed bound.
    """
    if not 0.0 < f_min < f_max < 1.0:
        raise UsageError("need 0 < f_min < f_max < 1")
    if steps < 2:
        raise UsageError("steps must be at least 2")
    cols = [_COLUMN[fam.tag] for fam in families]
    if len(set(cols)) != len(cols):
        raise UsageError("each family may appear only once in a sweep")
    grid = np.linspace(f_min, f_max, steps)
    values = [np.atleast_1d(bd.y_max(fam, grid)) for fam in families]
    rows = []
    for i, f in enumerate(grid):
        row = {"f": float(f)}
        for col, v in zip(cols, values):
            row[col] = float(v[i])
        row["ratio"] = y_to_max_ratio(max(float(v[i]) for v in values))
        rows.append(row)
    return rows


def chain_holds(rows) -> bool:
    """Strict ordering y_coh < y_delta < y_pure on every row that carries those columns."""
    order = [c for c in ("y_coh", "y_delta", "y_pure") if rows and c in rows[0]]
    return all(r[lo] < r[hi] for r in rows for lo, hi in zip(order, order[1:]))


def format_sweep(rows, fmt: str) -> str:
    if fmt == "json":
        return _dump(rows) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(rows[0]))
    for r in rows:
        w.writerow([repr(v) for v in r.values()])
    return buf.getvalue()


# -- commands --------------------------------------------------------------------

def _family(args):
    try:
        return bd.family_from_name(args.family, a=args.a, c=args.c, zeta=args.zeta)
    except (ValueError, DomainError) as exc:
        raise UsageError(str(exc)) from None


def _bound_json(res: bd.BoundResult) -> dict:
    fam = res.family
    out = {"family": fam.tag}
    if fam.tag == bd.FIXED_SHAPE_TAG:
        out.update(a=fam.a, c=fam.c)
    if fam.tag in (bd.MIXED_TAG, bd.PURE_VS_MIXED_TAG):
        out["zeta"] = fam.zeta
    out.update(fidelity=res.fidelity, y_max=res.y_max, ratio=res.max_ratio)
    if res.energy_interval is not None:
        out["energy_change"] = list(res.energy_interval)
    return out


def cmd_fidelity(args, out):
    s1, s2 = load_state(args.state_a), load_state(args.state_b)
    if type(s1) is not type(s2):
        raise UsageError("both states must have the same kind")
    f = fidelity(s1, s2)
    cmp = compare_states(s1, s2)
    report = {"fidelity": f, "bures": bures_distance(f), "e1": cmp.e1, "e2": cmp.e2,
              "y": cmp.y, "calE": cmp.calE}
    out.write(_dump(report) + "\n")
    return EXIT_OK


def cmd_energy(args, out):
    s = load_state(args.state)
    m = moments(s)
    x, p = means(s)
    report = {"state": state_document(s), "energy": energy(s), "purity": purity(s),
              "mean_x": x, "mean_p": p, "sxx": m.sxx, "spp": m.spp, "sxp": m.sxp}
    out.write(_dump(report) + "\n")
    return EXIT_OK


def cmd_bound(args, out):
    fam = _family(args)
    if (args.fidelity is None) == (args.y is None):
        raise UsageError("give exactly one of --fidelity or --y")
    res = bd.bound(fam, fidelity=args.fidelity, y=args.y)
    out.write(_dump(_bound_json(res)) + "\n")
    return EXIT_OK


def cmd_inverse_bound(args, out):
    res = bd.bound(_family(args), y=args.y)
    out.write(_dump(_bound_json(res)) + "\n")
    return EXIT_OK


def cmd_table(args, out):
    out.write(format_table(args.id, args.full))
    return EXIT_OK


def cmd_sweep(args, out):
    names = args.families or list(DEFAULT_SWEEP)
    fams = []
    for name in names:
        args.family = name
        fams.append(_family(args))
    rows = sweep_rows(fams, args.f_min, args.f_max, args.steps)
    out.write(format_sweep(rows, args.format))
    if args.assert_chain and not chain_holds(rows):
        print("error: chain ordering y_coh < y_delta < y_pure violated", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        seed = int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    if seed < 0:
        raise UsageError(f"{SEED_ENV} must be non-negative")
    return seed


def cmd_verify(args, out):
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    try:
        cfg = PairSampleConfig(family=args.family, samples=args.samples, seed=_seed(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = verify_conjecture(cfg, tol=args.tol, workers=args.workers)
    out.write(report.to_json() + "\n")
    return EXIT_OK if report.violations == 0 and report.pure_violations == 0 else EXIT_FAIL


def cmd_oracle_check(args, out):
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if not 2 <= args.dim <= 128:
        raise UsageError("--dim must lie in [2, 128]")
    seed = _seed(args)
    try:
        rep = check_against_closed_forms(args.samples, args.dim, seed,
                                         tail_tol=args.tail_tol, identical=args.identical)
    except (TruncationError, QuadratureError) as exc:
        doc = {"passed": False, "error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, TruncationError):
            doc["tail"] = exc.tail
        out.write(_dump(doc) + "\n")
        return EXIT_FAIL
    doc = {"passed": rep.passed(args.tolerance)}
    doc.update(rep.to_dict())
    out.write(_dump(doc) + "\n")
    return EXIT_OK if doc["passed"] else EXIT_FAIL


# -- parser ----------------------------------------------------------------------

def _add_family_args(p, family_required=True):
    if family_required:
        p.add_argument("--family", required=True,
                       help="coherent, displaced, fixed-shape, pure, mixed, supermixed or pure-vs-mixed")
    p.add_argument("--zeta", type=float, help="mixing parameter for mixed and pure-vs-mixed")
    p.add_argument("--a", type=float, help="shape parameter a for fixed-shape (default 1)")
    p.add_argument("--c", type=float, help="correlation c = b/a for fixed-shape (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaussbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fidelity", help="fidelity and energy comparison of two states")
    p.add_argument("state_a", help="StateDocument JSON or @file")
    p.add_argument("state_b", help="StateDocument JSON or @file")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("energy", help="energy, purity and moments of a state")
    p.add_argument("state", help="StateDocument JSON or @file")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("bound", help="largest energy difference at a fidelity, or the reverse")
    _add_family_args(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--fidelity", type=float)
    g.add_argument("--y", type=float)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("inverse-bound", help="largest fidelity at an energy difference y")
    _add_family_args(p)
    p.add_argument("--y", type=float, required=True)
    p.set_defaults(func=cmd_inverse_bound)

    p = sub.add_parser("table", help="print table 1 or 2")
    p.add_argument("id", type=int, choices=(1, 2))
    p.add_argument("--full", action="store_true", help="print every value at 6 decimals")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sweep", help="bound curves on a fidelity grid")
    p.add_argument("--families", nargs="+", metavar="FAMILY")
    _add_family_args(p, family_required=False)
    p.add_argument("--f-min", type=float, default=0.01)
    p.add_argument("--f-max", type=float, default=0.99)
    p.add_argument("--steps", type=int, default=99)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--assert-chain", action="store_true",
                   help="exit 1 unless y_coh < y_delta < y_pure on every row")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="randomised check of the bounds on sampled pairs")
    p.add_argument("--family", choices=FAMILIES, default="pure")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle-check", help="compare closed forms with the Fock-basis oracle")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--dim", type=int, default=40)
    p.add_argument("--seed", type=int, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--tail-tol", type=float, default=CHECK_TAIL_TOL)
    p.add_argument("--tolerance", type=float, default=1e-6, help="largest accepted fidelity error")
    p.add_argument("--identical", action="store_true", help="compare each sampled state with itself")
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args, out)
    except (UsageError, DomainError, UnsupportedWitness, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
