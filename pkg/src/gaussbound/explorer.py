"""Randomised verification of the fidelity/energy bounds and witness pairs.

Pairs are described relative to the first state:

    a2 = a1 * k           (k = 1 + alpha)
    b1 = a1 * c,  b2 = b1 + a1 * beta
    (x2, p2) = (x1, p1) + (dx, dp)

Sampling is split into fixed-size blocks.  Block ``j`` draws from
``numpy.random.default_rng([seed, j])``, so a report depends only on the
configuration and never on how the blocks are spread over worker processes.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from . import bounds as bd
from .exceptions import DomainError, UnsupportedWitness
from .fidelity import (
    fidelity_mixed,
    fidelity_pure,
    mixed_log_fidelity,
    pure_log_fidelity,
    symmetric_difference,
)
from .states import (
    A_MAX,
    A_MIN,
    COORD_MAX,
    MixedGaussianState,
    PureGaussianState,
    energy,
    mixed_energy,
    pure_energy,
)

FAMILIES = ("pure", "mixed", "pure-vs-mixed", "mixed-general")
CONJECTURE_TOL = 1e-9
PROJECTION_TOL = 1e-10


@dataclass(frozen=True)
class PairSampleConfig:
    """Sampling ranges for :func:`verify_conjecture`.

    ``a_range``, ``ratio_range`` (a2/a1), ``offset_range`` (|(x1, p1)|) and
    ``shift_range`` (|(dx, dp)|) are sampled log-uniformly; ``c_range``,
    ``beta_range`` and ``zeta_range`` uniformly.  A range with equal ends is
    a constant.  Displacements only apply to the ``pure`` family.
    """

    family: str = "pure"
    samples: int = 1000
    seed: int = 0
    a_range: tuple[float, float] = (1e-2, 1e2)
    c_range: tuple[float, float] = (-5.0, 5.0)
    ratio_range: tuple[float, float] = (0.05, 20.0)
    beta_range: tuple[float, float] = (-5.0, 5.0)
    offset_range: tuple[float, float] = (1e-3, 1e2)
    shift_range: tuple[float, float] = (1e-4, 10.0)
    zeta_range: tuple[float, float] = (0.0, 0.999)
    block_size: int = 4096

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.block_size < 1:
            raise ValueError("block_size must be at least 1")
        for name in ("a_range", "c_range", "ratio_range", "beta_range",
                     "offset_range", "shift_range", "zeta_range"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ValueError(f"{name} must satisfy lo <= hi, got {(lo, hi)}")
        for name in ("a_range", "ratio_range", "offset_range", "shift_range"):
            lo, hi = getattr(self, name)
            if lo < hi and lo <= 0.0:
                raise ValueError(f"{name} is log-uniform and needs lo > 0")
        (alo, ahi), (rlo, rhi) = self.a_range, self.ratio_range
        if alo < A_MIN or ahi > A_MAX or alo * rlo < A_MIN or ahi * rhi > A_MAX:
            raise ValueError("a_range and ratio_range leave the validity box of a")
        cmax = max(map(abs, self.c_range))
        bmax = ahi * (cmax + max(map(abs, self.beta_range)))
        if bmax > COORD_MAX or self.offset_range[1] + self.shift_range[1] > COORD_MAX:
            raise ValueError("b or displacement ranges leave the validity box")
        zlo, zhi = self.zeta_range
        if zlo < 0.0 or zhi > 1.0 - 1e-9:
            raise ValueError("zeta_range must lie inside [0, 1 - 1e-9]")

    @property
    def blocks(self) -> int:
        return -(-self.samples // self.block_size)


@dataclass
class VerificationReport:
    family: str
    samples: int
    seed: int
    tol: float
    violations: int
    worst_margin: float
    argmax: Optional[dict]
    pure_violations: int
    worst_pure_margin: float
    conjecture_level: bool = field(default=False)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _uniform(rng, lo, hi, n):
    return np.full(n, float(lo)) if lo == hi else rng.uniform(lo, hi, n)


def _log_uniform(rng, lo, hi, n):
    if lo == hi:
        return np.full(n, float(lo))
    return np.exp(rng.uniform(math.log(lo), math.log(hi), n))


def _draw_block(cfg: PairSampleConfig, block: int) -> dict:
    n = min(cfg.block_size, cfg.samples - block * cfg.block_size)
    rng = np.random.default_rng([cfg.seed, block])
    a1 = _log_uniform(rng, *cfg.a_range, n)
    c = _uniform(rng, *cfg.c_range, n)
    k = _log_uniform(rng, *cfg.ratio_range, n)
    beta = _uniform(rng, *cfg.beta_range, n)
    b1 = a1 * c
    p = {"a1": a1, "b1": b1, "a2": a1 * k, "b2": b1 + a1 * beta}
    if cfg.family == "pure":
        r = _log_uniform(rng, *cfg.offset_range, n)
        th = rng.uniform(0.0, 2.0 * math.pi, n)
        d = _log_uniform(rng, *cfg.shift_range, n)
        ph = rng.uniform(0.0, 2.0 * math.pi, n)
        p["x1"], p["p1"] = r * np.cos(th), r * np.sin(th)
        p["x2"], p["p2"] = p["x1"] + d * np.cos(ph), p["p1"] + d * np.sin(ph)
    else:
        z2 = _uniform(rng, *cfg.zeta_range, n)
        if cfg.family == "mixed":
            z1 = z2
        elif cfg.family == "pure-vs-mixed":
            z1 = np.zeros(n)
        else:
            z1 = _uniform(rng, *cfg.zeta_range, n)
        p["z1"], p["z2"] = z1, z2
    return p


def evaluate_pairs(family: str, p: dict) -> dict:
    """Fidelity, energies, ``y`` and bounds for a batch of sampled pairs."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if family == "pure":
            logf = pure_log_fidelity(p["a1"], p["b1"], p["x1"], p["p1"],
                                     p["a2"], p["b2"], p["x2"], p["p2"])
            e1 = pure_energy(p["a1"], p["b1"], p["x1"], p["p1"])
            e2 = pure_energy(p["a2"], p["b2"], p["x2"], p["p2"])
        else:
            logf = mixed_log_fidelity(p["a1"], p["b1"], p["z1"], p["a2"], p["b2"], p["z2"])
            e1 = mixed_energy(p["a1"], p["b1"], p["z1"])
            e2 = mixed_energy(p["a2"], p["b2"], p["z2"])
        logf = np.minimum(logf, 0.0)
        f = np.exp(logf)
        eps = -np.expm1(logf)
        y = symmetric_difference(e1, e2)
        y_pure = bd.y_max_kernel(bd.PURE, f, eps)
        if family == "mixed":
            y_fam = bd.y_mixed_kernel(f, eps, p["z2"])
        elif family == "pure-vs-mixed":
            y_fam = bd.y_pure_vs_mixed_kernel(f, eps, p["z2"])
        else:
            y_fam = y_pure
        y_fam = np.where(f >= 1.0, 0.0, np.where(f <= 0.0, np.inf, y_fam))
    return {"fidelity": f, "y": y, "bound": y_fam, "pure_bound": y_pure}


def _margin(y, bound):
    """y / bound - 1; -1 where y = 0 or the bound is infinite."""
    with np.errstate(divide="ignore", invalid="ignore"):
        m = y / bound - 1.0
    m = np.where(y == 0.0, -1.0, m)
    m = np.where(np.isinf(bound), -1.0, m)
    return np.where(np.isnan(m), np.inf, m)


def _record(family, p, ev, i, index):
    def state(which):
        a, b = float(p[f"a{which}"][i]), float(p[f"b{which}"][i])
        if family == "pure":
            return {"kind": "pure", "a": a, "b": b,
                    "x": float(p[f"x{which}"][i]), "p": float(p[f"p{which}"][i])}
        return {"kind": "mixed", "a": a, "b": b, "zeta": float(p[f"z{which}"][i])}

    return {
        "index": int(index),
        "state_a": state(1),
        "state_b": state(2),
        "fidelity": float(ev["fidelity"][i]),
        "y": float(ev["y"][i]),
        "y_bound": float(ev["bound"][i]),
    }


def _summarise_block(args):
    cfg, block, tol = args
    p = _draw_block(cfg, block)
    ev = evaluate_pairs(cfg.family, p)
    m = _margin(ev["y"], ev["bound"])
    mp = _margin(ev["y"], ev["pure_bound"])
    i = int(np.argmax(m))
    return {
        "n": len(m),
        "violations": int(np.sum(m > tol)),
        "worst": float(m[i]),
        "record": _record(cfg.family, p, ev, i, block * cfg.block_size + i),
        "pure_violations": int(np.sum(mp > tol)),
        "worst_pure": float(np.max(mp)),
    }


def verify_conjecture(cfg: PairSampleConfig, tol: float = CONJECTURE_TOL, workers: int = 1) -> VerificationReport:
    """Check ``y <= y_max(F) * (1 + tol)`` on every sampled pair.

    The bound is the one belonging to ``cfg.family``: the general pure-state
    bound for ``pure`` and ``mixed-general`` (the latter has no bound of its
    own and is reported as conjecture-level), the equal-purity bound for
    ``mixed`` and the pure-versus-mixed bound for ``pure-vs-mixed``.  Every
    family is also checked against the general pure-state bound.
    """
    jobs = [(cfg, j, tol) for j in range(cfg.blocks)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_summarise_block, jobs))
    else:
        parts = [_summarise_block(j) for j in jobs]
    best = parts[0]
    for part in parts[1:]:
        if part["worst"] > best["worst"]:
            best = part
    return VerificationReport(
        family=cfg.family,
        samples=sum(p["n"] for p in parts),
        seed=cfg.seed,
        tol=tol,
        violations=sum(p["violations"] for p in parts),
        worst_margin=best["worst"],
        argmax=best["record"],
        pure_violations=sum(p["pure_violations"] for p in parts),
        worst_pure_margin=max(p["worst_pure"] for p in parts),
        conjecture_level=cfg.family == "mixed-general",
    )


# -- witnesses ---------------------------------------------------------------

def _check_f(f):
    if not 0.0 < f < 1.0:
        raise DomainError("fidelity must lie in (0,1)")


def _ratio_root(w):
    """Larger root k of (k - 1)^2 = 2 w k; the smaller one is 1/k."""
    return 1.0 + w + math.sqrt(w * (2.0 + w))


def extremal_pure_pair(f: float, a: float, sign: int = +1):
    """Undisplaced squeezed pair with fidelity ``f`` and a2/a1 = 1 + alpha_(+/-).

    The fidelity does not depend on ``a``; the symmetric energy difference
    tends to the general pure-state bound as ``a -> 0`` or ``a -> inf``.
    """
    _check_f(f)
    d = (1.0 - f) * (1.0 + f) / (f * f)
    k = _ratio_root(2.0 * d)
    k = k if sign > 0 else 1.0 / k
    return PureGaussianState(a), PureGaussianState(a * k)


def extremal_mixed_pair(f: float, a: float, zeta: float, sign: int = +1):
    """Equal-purity pair at fidelity ``f`` built from the extremal ratio a2/a1."""
    _check_f(f)
    d = (1.0 - f) / (f * f) * (1.0 - zeta) * ((1.0 - zeta) + f * (1.0 + zeta))
    k = _ratio_root(2.0 * d / ((1.0 - zeta) * (1.0 + zeta)))
    k = k if sign > 0 else 1.0 / k
    return MixedGaussianState(a, 0.0, zeta), MixedGaussianState(a * k, 0.0, zeta)


def optimal_displaced_pair(f: float, a: float, c: float = 0.0, sign: int = +1, fraction: float = 1.0):
    """Equally squeezed pair ``(a, b = a c)`` whose displacement maximises ``y`` at fidelity ``f``.

    The displacement difference points along the direction that costs the least
    fidelity, and the common offset ``R`` maximises (``sign=+1``) or minimises
    (``sign=-1``) the relative energy change.  ``fraction`` scales ``R``.
    """
    _check_f(f)
    b = a * c
    m = np.array([[a * a + b * b, b], [b, 1.0]])
    lam, vec = np.linalg.eigh(m)
    u = vec[:, 0]
    delta = math.sqrt(2.0 * a * -math.log(f) / lam[0])
    a0 = (1.0 + a * a + b * b) / (4.0 * a)
    root = math.sqrt(delta * delta + 8.0 * a0)
    r = 0.5 * (root - delta) if sign > 0 else 0.5 * (root + delta)
    r *= fraction
    s = delta if sign > 0 else -delta
    s1 = PureGaussianState(a, b, r * u[0], r * u[1])
    s2 = PureGaussianState(a, b, (r + s) * u[0], (r + s) * u[1])
    return s1, s2


def _pair_y(s1, s2):
    e1, e2 = energy(s1), energy(s2)
    return abs(e2 - e1) / math.sqrt(e1 * e2)


def approach_bound(family: bd.BoundFamily, f: float, schedule: Sequence[float]):
    """Ratio ``y / y_max(family, f)`` achieved by witness pairs along ``schedule``.

    Schedule entries are the squeezing ``a`` of the first state for
    ``pure_general``, ``mixed_equal_purity`` and ``displaced_equal_shape``;
    for ``coherent`` and ``fixed_shape`` the bound is attained at every
    shape and the entries are fractions of the optimal common displacement.
    Returns a list of ``(parameter, ratio)``.
    """
    if len(schedule) == 0:
        raise ValueError("schedule must not be empty")
    _check_f(f)
    tag = family.tag
    if tag == bd.PURE_TAG:
        def build(t):
            return [extremal_pure_pair(f, t, s) for s in (+1, -1)]
    elif tag == bd.MIXED_TAG:
        def build(t):
            return [extremal_mixed_pair(f, t, family.zeta, s) for s in (+1, -1)]
    elif tag == bd.DISPLACED_TAG:
        def build(t):
            return [optimal_displaced_pair(f, t, 0.0, s) for s in (+1, -1)]
    elif tag in (bd.COHERENT_TAG, bd.FIXED_SHAPE_TAG):
        a, c = (1.0, 0.0) if tag == bd.COHERENT_TAG else (family.a, family.c)

        def build(t):
            return [optimal_displaced_pair(f, a, c, s, fraction=t) for s in (+1, -1)]
    else:
        raise UnsupportedWitness(f"no witness construction for family {family}")
    ym = bd.y_max(family, f)
    out = []
    for t in schedule:
        y = max(_pair_y(s1, s2) for s1, s2 in build(float(t)))
        out.append((float(t), y / ym))
    return out


# -- local refinement ----------------------------------------------------------

_DIFF = (2, 3, 6, 7)
_LOG_A = (math.log(A_MIN), math.log(A_MAX))


def _encode(s1, s2):
    return np.array([
        math.log(s1.a), s1.b / s1.a, math.log(s2.a / s1.a), (s2.b - s1.b) / s1.a,
        s1.x0, s1.p0, s2.x0 - s1.x0, s2.p0 - s1.p0,
    ])


def _decode(v):
    a1 = math.exp(v[0])
    b1 = a1 * v[1]
    return (a1, b1, v[4], v[5]), (a1 * math.exp(v[2]), b1 + a1 * v[3], v[4] + v[6], v[5] + v[7])


def _in_box(v):
    (a1, b1, x1, p1), (a2, b2, x2, p2) = _decode(v)
    return (A_MIN <= a1 <= A_MAX and A_MIN <= a2 <= A_MAX
            and max(abs(b1), abs(b2), abs(x1), abs(p1), abs(x2), abs(p2)) <= COORD_MAX)


def _log_f(v):
    s1, s2 = _decode(v)
    return float(pure_log_fidelity(*s1, *s2))


def _y(v):
    s1, s2 = _decode(v)
    e1, e2 = pure_energy(*s1), pure_energy(*s2)
    return abs(e2 - e1) / math.sqrt(e1 * e2)


def _project(v, log_target):
    """Rescale the difference coordinates so that log F hits ``log_target``."""
    d = v[list(_DIFF)]
    if not np.any(d):
        return None

    def with_scale(t):
        w = v.copy()
        w[list(_DIFF)] = t * d
        return w

    def h(t):
        return _log_f(with_scale(t)) - log_target

    hi = 1.0
    while h(hi) > 0.0:
        hi *= 2.0
        if hi > 1e6 or not _in_box(with_scale(hi)):
            return None
    lo = hi
    while h(lo) <= 0.0:
        lo *= 0.5
        if lo < 1e-12:
            return None
    t = brentq(h, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    w = with_scale(t)
    return w if _in_box(w) else None


@dataclass(frozen=True)
class LocalSearchResult:
    state_a: PureGaussianState
    state_b: PureGaussianState
    y: float
    fidelity: float
    iterations: int
    feasible: bool
    message: str


def local_maximize_y(start_pair, f_target: float, tol: float = PROJECTION_TOL,
                     max_iter: int = 500, step: float = 0.25) -> LocalSearchResult:
    """Pattern search for the largest ``y`` on the manifold ``fidelity = f_target``.

    Each trial move changes one coordinate of the relative parameterisation and
    is pulled back onto the manifold by rescaling the difference between the
    two states (a 1-D root find).  Successful moves double their step, failed
    ones halve it.  ``y`` never decreases relative to the projected start.
    """
    _check_f(f_target)
    s1, s2 = start_pair
    log_target = math.log(f_target)
    v = _project(_encode(s1, s2), log_target)
    if v is None:
        y0 = _pair_y(s1, s2)
        return LocalSearchResult(s1, s2, y0, fidelity_pure(s1, s2), 0, False,
                                 "start pair cannot be projected onto the fidelity target")
    y = _y(v)
    steps = np.full(v.size, step)
    it = 0
    while it < max_iter and steps.max() > 1e-9:
        it += 1
        for i in range(v.size):
            moved = False
            for sgn in (1.0, -1.0):
                w = v.copy()
                w[i] += sgn * steps[i]
                if not _in_box(w):
                    continue
                w = _project(w, log_target)
                if w is None:
                    continue
                yw = _y(w)
                if yw > y:
                    v, y, moved = w, yw, True
                    break
            steps[i] = min(steps[i] * 2.0, 4.0) if moved else steps[i] * 0.5
    p1, p2 = _decode(v)
    out1, out2 = PureGaussianState(*p1), PureGaussianState(*p2)
    f = fidelity_pure(out1, out2)
    ok = abs(f - f_target) <= tol
    msg = "converged" if steps.max() <= 1e-9 else "iteration limit reached"
    return LocalSearchResult(out1, out2, y, f, it, ok, msg)
