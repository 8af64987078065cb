"""Closed-form fidelities between Gaussian states and energy-comparison metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .states import (
    GaussianState,
    MixedGaussianState,
    PureGaussianState,
    energy,
)


def pure_overlap_terms(a1, b1, x1, p1, a2, b2, x2, p2):
    """Return ``(G, U)`` for two pure states; F = 2 sqrt(a1 a2 / G) exp(-U / G)."""
    s = a1 + a2
    db = b1 - b2
    dx = x2 - x1
    dp = p2 - p1
    g = s * s + db * db
    # grouped so that swapping the two states gives bit-identical results
    u = (
        s * dp * dp
        + 2.0 * (a1 * b2 + a2 * b1) * dp * dx
        + (a1 * a2 * s + (a1 * b2 * b2 + a2 * b1 * b1)) * dx * dx
    )
    return g, u


def pure_log_fidelity(a1, b1, x1, p1, a2, b2, x2, p2):
    """log F for pure states; works elementwise on arrays."""
    g, u = pure_overlap_terms(a1, b1, x1, p1, a2, b2, x2, p2)
    # 4 a1 a2 / G = 1 - ((a1 - a2)^2 + (b1 - b2)^2) / G, exact near coincidence
    shape = ((a1 - a2) ** 2 + (b1 - b2) ** 2) / g
    return 0.5 * np.log1p(-shape) - u / g


def mixed_log_fidelity(a1, b1, z1, a2, b2, z2):
    """log F for homogeneous mixed states; works elementwise on arrays."""
    g = (a1 + a2) ** 2 + (b1 - b2) ** 2
    radicand = g - (a1 * z1 - a2 * z2) ** 2
    den = np.sqrt(radicand) - 2.0 * np.sqrt(a1 * a2 * (z1 * z2))
    num = 2.0 * np.sqrt(a1 * a2 * ((1.0 - z1) * (1.0 - z2)))
    return np.log(num) - np.log(den)


def fidelity_pure(s1: PureGaussianState, s2: PureGaussianState) -> float:
    """Fidelity |<psi1|psi2>|^2 of two pure Gaussian states."""
    g, u = pure_overlap_terms(s1.a, s1.b, s1.x0, s1.p0, s2.a, s2.b, s2.x0, s2.p0)
    if not g > 0.0:
        raise ArithmeticError(f"overlap normalisation G={g!r} is not positive")
    if u < -1e-12 * g:
        raise ArithmeticError(f"exponent numerator U={u!r} is negative")
    lf = pure_log_fidelity(s1.a, s1.b, s1.x0, s1.p0, s2.a, s2.b, s2.x0, s2.p0)
    return min(1.0, math.exp(lf))


def fidelity_mixed(s1: MixedGaussianState, s2: MixedGaussianState) -> float:
    """Uhlmann fidelity of two homogeneous mixed Gaussian states."""
    a1, b1, z1 = s1.a, s1.b, s1.zeta
    a2, b2, z2 = s2.a, s2.b, s2.zeta
    g = (a1 + a2) ** 2 + (b1 - b2) ** 2
    radicand = g - (a1 * z1 - a2 * z2) ** 2
    if not radicand > 0.0:
        raise DomainError(f"G - (a1 zeta1 - a2 zeta2)^2 = {radicand!r} is not positive")
    den = math.sqrt(radicand) - 2.0 * math.sqrt(a1 * a2 * (z1 * z2))
    if not den > 0.0:
        raise DomainError(f"fidelity denominator {den!r} is not positive")
    return min(1.0, math.exp(float(mixed_log_fidelity(a1, b1, z1, a2, b2, z2))))


def as_mixed(s: GaussianState) -> MixedGaussianState:
    if isinstance(s, MixedGaussianState):
        return s
    if s.x0 != 0.0 or s.p0 != 0.0:
        raise DomainError("no closed form for a displaced pure state against a mixed state")
    return MixedGaussianState(s.a, s.b, 0.0)


def fidelity(s1: GaussianState, s2: GaussianState) -> float:
    """Dispatch to :func:`fidelity_pure` or :func:`fidelity_mixed`."""
    if isinstance(s1, PureGaussianState) and isinstance(s2, PureGaussianState):
        return fidelity_pure(s1, s2)
    return fidelity_mixed(as_mixed(s1), as_mixed(s2))


def bures_distance(f: float) -> float:
    """Bures distance sqrt(2 - 2 sqrt(F))."""
    f = float(f)
    if not (0.0 < f <= 1.0):
        raise DomainError(f"fidelity must lie in (0, 1], got {f!r}")
    # 2 - 2 sqrt(f) = 2 (1 - f) / (1 + sqrt(f))
    return math.sqrt(2.0 * (1.0 - f) / (1.0 + math.sqrt(f)))


@dataclass(frozen=True)
class EnergyComparison:
    e1: float
    e2: float
    calE: float
    y: float


def symmetric_difference(e1, e2):
    """|E2 - E1| / sqrt(E1 E2), elementwise."""
    return np.abs(e2 - e1) / np.sqrt(e1 * e2)


def compare_energies(e1: float, e2: float) -> EnergyComparison:
    """Relative change E2/E1 - 1 and symmetric difference |E2 - E1|/sqrt(E1 E2)."""
    e1, e2 = float(e1), float(e2)
    if not (e1 > 0.0 and e2 > 0.0) or not (math.isfinite(e1) and math.isfinite(e2)):
        raise DomainError(f"energies must be positive and finite, got {e1!r}, {e2!r}")
    return EnergyComparison(e1, e2, e2 / e1 - 1.0, abs(e2 - e1) / math.sqrt(e1 * e2))


def compare_states(s1: GaussianState, s2: GaussianState) -> EnergyComparison:
    return compare_energies(energy(s1), energy(s2))


def ratio_to_y(r: float) -> float:
    """Symmetric difference for the energy ratio r = E2/E1."""
    r = float(r)
    if not r > 0.0:
        raise DomainError(f"energy ratio must be positive, got {r!r}")
    return abs(r - 1.0) / math.sqrt(r)


def y_to_max_ratio(y: float) -> float:
    """Largest energy ratio max(E2/E1, E1/E2) with symmetric difference y."""
    y = float(y)
    if not y >= 0.0:
        raise DomainError(f"y must be non-negative, got {y!r}")
    return 1.0 + 0.5 * y * y + y * math.sqrt(1.0 + 0.25 * y * y)
