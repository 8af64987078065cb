"""Upper bounds relating fidelity and the symmetric relative energy difference.

For two Gaussian states with fidelity ``F`` the symmetric relative energy
difference ``y = |E2 - E1| / sqrt(E1 E2)`` cannot exceed ``y_max(family, F)``,
and conversely ``F`` cannot exceed ``f_max(family, y)``.  The bound depends on
the family the two states are drawn from:

==========================  ==================================================
``coherent``                two coherent states
``displaced_equal_shape``   equal squeezing, arbitrary displacements (limit of
                            strong squeezing)
``fixed_shape(a, c)``       equal squeezing ``(a, b = a c)``, any displacement
``pure_general``            any two pure states
``mixed_equal_purity(z)``   undisplaced mixed states sharing ``zeta = z``
``supermixed``              the ``zeta -> 1`` limit of the previous family
``pure_vs_mixed(z)``        a pure state against a ``zeta = z`` mixed state
==========================  ==================================================

All expressions are written in terms of ``eps = 1 - F`` where a cancellation
would otherwise occur, so they stay accurate as ``F -> 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .exceptions import DomainError
from .fidelity import bures_distance

COHERENT_TAG = "coherent"
DISPLACED_TAG = "displaced_equal_shape"
FIXED_SHAPE_TAG = "fixed_shape"
PURE_TAG = "pure_general"
MIXED_TAG = "mixed_equal_purity"
SUPERMIXED_TAG = "supermixed"
PURE_VS_MIXED_TAG = "pure_vs_mixed"

TAGS = (
    COHERENT_TAG,
    DISPLACED_TAG,
    FIXED_SHAPE_TAG,
    PURE_TAG,
    MIXED_TAG,
    SUPERMIXED_TAG,
    PURE_VS_MIXED_TAG,
)


@dataclass(frozen=True)
class BoundFamily:
    tag: str
    a: Optional[float] = None
    c: Optional[float] = None
    zeta: Optional[float] = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown bound family {self.tag!r}")
        if self.tag == FIXED_SHAPE_TAG:
            if self.a is None or self.c is None:
                raise ValueError("fixed_shape needs both a and c")
            if not (math.isfinite(self.a) and self.a > 0.0) or not math.isfinite(self.c):
                raise DomainError(f"fixed_shape needs a > 0 and finite c, got a={self.a!r}, c={self.c!r}")
        if self.tag in (MIXED_TAG, PURE_VS_MIXED_TAG):
            if self.zeta is None:
                raise ValueError(f"{self.tag} needs zeta")
            if not (0.0 <= self.zeta < 1.0):
                raise DomainError(f"zeta must lie in [0, 1), got {self.zeta!r}")

    def __str__(self):
        if self.tag == FIXED_SHAPE_TAG:
            return f"{self.tag}(a={self.a:g}, c={self.c:g})"
        if self.zeta is not None:
            return f"{self.tag}(zeta={self.zeta:g})"
        return self.tag


COHERENT = BoundFamily(COHERENT_TAG)
DISPLACED = BoundFamily(DISPLACED_TAG)
PURE = BoundFamily(PURE_TAG)
SUPERMIXED = BoundFamily(SUPERMIXED_TAG)


def fixed_shape(a: float, c: float) -> BoundFamily:
    return BoundFamily(FIXED_SHAPE_TAG, a=float(a), c=float(c))


def mixed_equal_purity(zeta: float) -> BoundFamily:
    return BoundFamily(MIXED_TAG, zeta=float(zeta))


def pure_vs_mixed(zeta: float) -> BoundFamily:
    return BoundFamily(PURE_VS_MIXED_TAG, zeta=float(zeta))


@dataclass(frozen=True)
class BoundResult:
    family: BoundFamily
    fidelity: float
    y_max: float
    energy_interval: Optional[tuple[float, float]] = None

    @property
    def f_max(self) -> float:
        return self.fidelity

    @property
    def max_ratio(self) -> float:
        y = self.y_max
        return 1.0 + 0.5 * y * y + y * math.sqrt(1.0 + 0.25 * y * y)


def _scalar(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _check_fidelity(f):
    f = np.asarray(f, dtype=float)
    if not np.all((f > 0.0) & (f < 1.0)):
        raise DomainError("fidelity must lie in (0,1)")
    return f


def _check_y(y):
    y = np.asarray(y, dtype=float)
    if not np.all((y > 0.0) & np.isfinite(y)):
        raise DomainError("y must be positive and finite")
    return y


def kappa(a: float, c: float) -> float:
    """Shape factor 1 + sqrt(1 - xi) in [1, 2] for equal squeezing (a, c)."""
    s = a * a * (1.0 + c * c) + 1.0
    # s^2 - 4a^2 = ((a - 1)^2 + a^2 c^2)(s + 2a)
    return 1.0 + math.sqrt(((a - 1.0) ** 2 + (a * c) ** 2) * (s + 2.0 * a)) / s


def xi(a: float, c: float) -> float:
    return 4.0 * a * a / (a * a * (1.0 + c * c) + 1.0) ** 2


def _neg_log(f, eps):
    """-log F, using log1p on eps = 1 - F when F is close to 1."""
    near = eps < 0.5
    return np.where(near, -np.log1p(-np.where(near, eps, 0.0)), -np.log(np.where(near, 1.0, f)))


def _tilde(zeta):
    """sqrt(1 - zeta^2) and 1 - sqrt(1 - zeta^2), both without cancellation."""
    zt = np.sqrt((1.0 - zeta) * (1.0 + zeta))
    return zt, zeta * zeta / (1.0 + zt)


def _pvm_brackets(f, eps, zeta):
    zt, one_minus_zt = _tilde(zeta)
    one_minus_f2 = eps * (1.0 + f)
    # 2(1 - z) - F^2 (1 + zt), regrouped around its zero at F = 1, z = 0
    br1 = one_minus_zt - 2.0 * zeta + one_minus_f2 * (1.0 + zt)
    br2 = 2.0 * (1.0 - zeta) - one_minus_zt + one_minus_f2 * one_minus_zt
    return zt, one_minus_zt, br1, br2


def y_mixed_kernel(f, eps, zeta):
    """Equal-purity bound with array-valued ``zeta``."""
    return (2.0 / f) * np.sqrt(eps / (1.0 + zeta) * ((1.0 + f) - zeta * eps))


def y_pure_vs_mixed_kernel(f, eps, zeta):
    """Pure-versus-mixed bound with array-valued ``zeta``; clamps rounding below zero."""
    zt, one_minus_zt, br1, br2 = _pvm_brackets(f, eps, zeta)
    r1 = (1.0 + zt) * np.maximum(br1, 0.0)
    r2 = one_minus_zt * np.maximum(br2, 0.0)
    return (np.sqrt(r1) + np.sqrt(r2)) / (f * zt)


def y_max_kernel(family: BoundFamily, f, eps=None):
    """Array version of :func:`y_max` without domain checks.

    ``eps`` may carry an accurate ``1 - f``.  The endpoint ``f = 1`` maps to 0
    and ``f = 0`` to infinity.
    """
    f = np.asarray(f, dtype=float)
    eps = 1.0 - f if eps is None else np.asarray(eps, dtype=float)
    tag = family.tag
    with np.errstate(divide="ignore", invalid="ignore"):
        if tag == COHERENT_TAG:
            out = np.sqrt(2.0 * _neg_log(f, eps))
        elif tag == DISPLACED_TAG:
            out = 2.0 * np.sqrt(_neg_log(f, eps))
        elif tag == FIXED_SHAPE_TAG:
            out = np.sqrt(2.0 * _neg_log(f, eps) * kappa(family.a, family.c))
        elif tag == PURE_TAG:
            out = 2.0 * np.sqrt(eps * (1.0 + f)) / f
        elif tag == MIXED_TAG:
            out = y_mixed_kernel(f, eps, family.zeta)
        elif tag == SUPERMIXED_TAG:
            out = 2.0 * np.sqrt(eps / f)
        elif tag == PURE_VS_MIXED_TAG:
            out = y_pure_vs_mixed_kernel(f, eps, family.zeta)
        else:  # pragma: no cover - guarded by BoundFamily
            raise ValueError(tag)
    out = np.where(f >= 1.0, 0.0, np.where(f <= 0.0, np.inf, out))
    return out


def y_max(family: BoundFamily, f):
    """Largest symmetric relative energy difference compatible with fidelity ``f``."""
    f = _check_fidelity(f)
    if family.tag == PURE_VS_MIXED_TAG:
        lim = zeta_limit(f)
        if np.any(family.zeta > lim * (1.0 + 1e-12) + 1e-300):
            raise DomainError(
                f"zeta={family.zeta!r} exceeds the largest purity parameter reachable "
                f"at this fidelity (zeta_limit={np.min(lim)!r})"
            )
    return _scalar(y_max_kernel(family, f))


def _f_max_closed(family: BoundFamily, y):
    y2 = y * y
    tag = family.tag
    if tag == COHERENT_TAG:
        return np.exp(-0.5 * y2)
    if tag == DISPLACED_TAG:
        return np.exp(-0.25 * y2)
    if tag == FIXED_SHAPE_TAG:
        return np.exp(-0.5 * y2 / kappa(family.a, family.c))
    if tag == PURE_TAG:
        return 1.0 / np.sqrt(1.0 + 0.25 * y2)
    if tag == SUPERMIXED_TAG:
        return 1.0 / (1.0 + 0.25 * y2)
    if tag == MIXED_TAG:
        # positive root of (1+z)(1+y^2/4) F^2 - 2 z F - (1 - z) = 0
        z = family.zeta
        q = 1.0 + 0.25 * y2
        return (z + np.sqrt(z * z + (1.0 - z * z) * q)) / ((1.0 + z) * q)
    return None


def fidelity_limit(zeta: float) -> float:
    """Largest fidelity between a pure state and a ``zeta``-mixed state."""
    zt, _ = _tilde(zeta)
    return float(math.sqrt(2.0 * (1.0 - zeta) / (1.0 + zt)))


def _f_max_pure_vs_mixed(zeta, y):
    f_top = fidelity_limit(zeta)
    fam = pure_vs_mixed(zeta)
    y_floor = float(y_max_kernel(fam, f_top))

    def one(yv):
        if yv <= y_floor:
            return f_top

        def h(f):
            return float(y_max_kernel(fam, f)) - yv

        lo = f_top
        while h(lo) < 0.0:
            lo *= 0.5
            if lo < 1e-300:  # pragma: no cover - y is finite
                return 0.0
        return brentq(h, lo, f_top, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=400)

    return np.vectorize(one, otypes=[float])(y)


def f_max(family: BoundFamily, y):
    """Largest fidelity compatible with symmetric relative energy difference ``y``."""
    y = _check_y(y)
    out = _f_max_closed(family, y)
    if out is None:
        out = _f_max_pure_vs_mixed(family.zeta, y)
    return _scalar(out)


def energy_interval_pure(f) -> tuple[float, float]:
    """Range of E2/E1 - 1 for two Gaussian states at fidelity ``f``."""
    f = float(_check_fidelity(f))
    s = math.sqrt((1.0 - f) * (1.0 + f))
    # 1 - s = F^2 / (1 + s)
    return -2.0 * s / (s + 1.0), 2.0 * s * (1.0 + s) / (f * f)


def energy_interval_fixed_shape(f, a: float, c: float) -> tuple[float, float]:
    """Range of E2/E1 - 1 for equally squeezed states (a, c) at fidelity ``f``."""
    f = float(_check_fidelity(f))
    fam = fixed_shape(a, c)
    q = -math.log1p(-(1.0 - f)) * kappa(fam.a, fam.c)
    rq, rq2 = math.sqrt(q), math.sqrt(q + 2.0)
    # 2 sqrt(q) / (sqrt(q+2) - sqrt(q)) = sqrt(q) (sqrt(q+2) + sqrt(q))
    return -2.0 * rq / (rq2 + rq), rq * (rq2 + rq)


def zeta_max(f):
    """Purity parameter at which an equally squeezed pure/mixed pair has fidelity ``f``.

    This is the ``alpha = beta = 0`` solution; pairs with different squeezing
    reach slightly larger ``zeta`` (see :func:`zeta_limit`).
    """
    f = _check_fidelity(f)
    one_minus_f2 = (1.0 - f) * (1.0 + f)
    # 1 - sqrt(1 - u) = u / (1 + sqrt(1 - u)), u = F^2 (1 - F^2)
    out = 2.0 * one_minus_f2 / (1.0 + np.sqrt(1.0 - f * f * one_minus_f2))
    return _scalar(out)


def zeta_max_series(f):
    eps = 1.0 - np.asarray(f, dtype=float)
    return _scalar(2.0 * eps - 2.5 * eps**3)


def zeta_limit(f):
    """Largest ``zeta`` of a mixed state having fidelity ``f`` with some pure state."""
    f = np.asarray(f, dtype=float)
    eps = 1.0 - f
    return _scalar(2.0 * eps * (5.0 - 4.0 * eps + eps * eps) / (4.0 + f**4))


def y_max_small_eps(family: BoundFamily, f):
    """Leading-order approximations of :func:`y_max` for ``f`` close to 1."""
    f = np.asarray(f, dtype=float)
    eps = 1.0 - f
    if family.tag == PURE_TAG:
        out = np.sqrt(8.0 * eps)
    elif family.tag == SUPERMIXED_TAG:
        out = 2.0 * np.sqrt(eps)
    elif family.tag == PURE_VS_MIXED_TAG:
        z = family.zeta
        rad = eps * (1.0 + f) - z + 0.25 * z * z * (2.0 * f * f - 1.0)
        if np.any(rad < 0.0):
            raise DomainError("small-zeta expansion is undefined here (zeta too large)")
        out = (2.0 * np.sqrt(rad) + z) / f
    else:
        raise ValueError(f"no small-eps approximation for family {family}")
    return _scalar(out)


def f_max_small_y(family: BoundFamily, y):
    y = np.asarray(y, dtype=float)
    if family.tag == PURE_TAG:
        return _scalar(1.0 - y * y / 8.0)
    if family.tag == SUPERMIXED_TAG:
        return _scalar(1.0 - y * y / 4.0)
    raise ValueError(f"no small-y approximation for family {family}")


def bures_min(y: float) -> float:
    """Smallest Bures distance between Gaussian states with symmetric difference ``y``."""
    y = float(y)
    if not y >= 0.0:
        raise DomainError(f"y must be non-negative, got {y!r}")
    # 1 - (1 + y^2/4)^(-1/4)
    t = -math.expm1(-0.25 * math.log1p(0.25 * y * y))
    return math.sqrt(2.0) * math.sqrt(t)


def bures_min_composed(y: float) -> float:
    return bures_distance(f_max(PURE, y)) if y > 0 else 0.0


def bound(family: BoundFamily, fidelity=None, y=None) -> BoundResult:
    """Evaluate a family bound from either the fidelity or the energy difference."""
    if (fidelity is None) == (y is None):
        raise ValueError("give exactly one of fidelity or y")
    if fidelity is not None:
        fidelity = float(fidelity)
        ym = float(y_max(family, fidelity))
    else:
        ym = float(_check_y(y))
        fidelity = float(f_max(family, ym))
    interval = None
    if family.tag == PURE_TAG and fidelity < 1.0:
        interval = energy_interval_pure(fidelity)
    elif family.tag in (FIXED_SHAPE_TAG, COHERENT_TAG) and fidelity < 1.0:
        a, c = (family.a, family.c) if family.tag == FIXED_SHAPE_TAG else (1.0, 0.0)
        interval = energy_interval_fixed_shape(fidelity, a, c)
    return BoundResult(family, fidelity, ym, interval)


_ALIASES = {
    "coherent": COHERENT_TAG,
    "coh": COHERENT_TAG,
    "displaced": DISPLACED_TAG,
    "delta": DISPLACED_TAG,
    "displaced_equal_shape": DISPLACED_TAG,
    "fixed-shape": FIXED_SHAPE_TAG,
    "fixed_shape": FIXED_SHAPE_TAG,
    "shape": FIXED_SHAPE_TAG,
    "pure": PURE_TAG,
    "pure_general": PURE_TAG,
    "mixed": MIXED_TAG,
    "mixed_equal_purity": MIXED_TAG,
    "mix": MIXED_TAG,
    "supermixed": SUPERMIXED_TAG,
    "smix": SUPERMIXED_TAG,
    "pure-vs-mixed": PURE_VS_MIXED_TAG,
    "pure_vs_mixed": PURE_VS_MIXED_TAG,
    "pvm": PURE_VS_MIXED_TAG,
}


def family_from_name(name: str, a=None, c=None, zeta=None) -> BoundFamily:
    try:
        tag = _ALIASES[name]
    except KeyError:
        raise ValueError(f"unknown bound family {name!r}") from None
    if tag == COHERENT_TAG:
        return COHERENT
    if tag == FIXED_SHAPE_TAG:
        return fixed_shape(a if a is not None else 1.0, c if c is not None else 0.0)
    if tag in (MIXED_TAG, PURE_VS_MIXED_TAG):
        if zeta is None:
            raise ValueError(f"family {name!r} needs zeta")
        return BoundFamily(tag, zeta=float(zeta))
    return BoundFamily(tag)
