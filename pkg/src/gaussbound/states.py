"""Single-mode Gaussian states of a unit oscillator (hbar = m = omega = 1).

Two families are supported:

* :class:`PureGaussianState` -- the displaced squeezed wave function

      psi(x) = (a/pi)**(1/4) * exp(-(a + i b)(x - x0)**2 / 2 + i p0 x)

* :class:`MixedGaussianState` -- the homogeneous (undisplaced) density kernel

      rho(x, y) = sqrt(a (1 - zeta) / pi)
                  * exp(-(a + i b) x**2 / 2 - (a - i b) y**2 / 2 + a zeta x y)

  with ``0 <= zeta < 1``; ``zeta = 0`` is the pure undisplaced state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import DomainError

# validation box
A_MIN, A_MAX = 1e-4, 1e4
COORD_MAX = 1e4
ZETA_MAX = 1.0 - 1e-9


def _check_finite(name, value, bound=None):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    if bound is not None and abs(value) > bound:
        raise DomainError(f"|{name}| must not exceed {bound:g}, got {value!r}")


def _check_a(a):
    _check_finite("a", a)
    if not A_MIN <= a <= A_MAX:
        raise DomainError(f"a must lie in [{A_MIN:g}, {A_MAX:g}], got {a!r}")


def _check_zeta(zeta):
    _check_finite("zeta", zeta)
    if not 0.0 <= zeta <= ZETA_MAX:
        raise DomainError(f"zeta must lie in [0, 1), got {zeta!r}")


@dataclass(frozen=True)
class PureGaussianState:
    """Displaced squeezed pure state with wave-function parameters (a, b, x0, p0)."""

    a: float
    b: float = 0.0
    x0: float = 0.0
    p0: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "x0", "p0"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _check_a(self.a)
        _check_finite("b", self.b, COORD_MAX)
        _check_finite("x0", self.x0, COORD_MAX)
        _check_finite("p0", self.p0, COORD_MAX)

    @property
    def c(self) -> float:
        """Correlation parameter b/a."""
        return self.b / self.a

    def wavefunction(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.a, self.b
        return (a / np.pi) ** 0.25 * np.exp(
            -0.5 * (a + 1j * b) * (x - self.x0) ** 2 + 1j * self.p0 * x
        )


@dataclass(frozen=True)
class MixedGaussianState:
    """Homogeneous Gaussian density matrix with parameters (a, b, zeta)."""

    a: float
    b: float = 0.0
    zeta: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "zeta"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _check_a(self.a)
        _check_finite("b", self.b, COORD_MAX)
        _check_zeta(self.zeta)

    @property
    def c(self) -> float:
        return self.b / self.a

    def kernel(self, x, y):
        """Position-representation kernel rho(x, y)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        a, b, z = self.a, self.b, self.zeta
        return np.sqrt(a * (1.0 - z) / np.pi) * np.exp(
            -0.5 * (a + 1j * b) * x**2 - 0.5 * (a - 1j * b) * y**2 + a * z * x * y
        )


GaussianState = Union[PureGaussianState, MixedGaussianState]


@dataclass(frozen=True)
class SecondMoments:
    """Centered covariances <dx^2>, <dp^2> and symmetrized <dx dp>."""

    sxx: float
    spp: float
    sxp: float

    @property
    def determinant(self) -> float:
        return self.sxx * self.spp - self.sxp**2


# Array kernels shared with the explorer. They accept floats or numpy arrays.

def pure_energy(a, b, x0, p0):
    return 0.5 * (p0**2 + x0**2) + (1.0 + a**2 + b**2) / (4.0 * a)


def mixed_energy(a, b, zeta):
    return (1.0 + a**2 * (1.0 - zeta**2) + b**2) / (4.0 * a * (1.0 - zeta))


def energy_pure(s: PureGaussianState) -> float:
    """Mean energy <(x^2 + p^2)/2> of a pure Gaussian state."""
    return float(pure_energy(s.a, s.b, s.x0, s.p0))


def energy_mixed(s: MixedGaussianState) -> float:
    """Mean energy of a homogeneous mixed Gaussian state."""
    return float(mixed_energy(s.a, s.b, s.zeta))


def energy(s: GaussianState) -> float:
    if isinstance(s, PureGaussianState):
        return energy_pure(s)
    if isinstance(s, MixedGaussianState):
        return energy_mixed(s)
    raise TypeError(f"not a Gaussian state: {type(s).__name__}")


def purity(s: MixedGaussianState | PureGaussianState) -> float:
    """Tr(rho^2) = sqrt((1 - zeta) / (1 + zeta))."""
    if isinstance(s, PureGaussianState):
        return 1.0
    z = s.zeta
    return math.sqrt((1.0 - z) / (1.0 + z))


def zeta_from_purity(mu: float) -> float:
    """Inverse of :func:`purity`."""
    mu = float(mu)
    if not (0.0 < mu <= 1.0):
        raise DomainError(f"purity must lie in (0, 1], got {mu!r}")
    m2 = mu * mu
    return (1.0 - m2) / (1.0 + m2)


def moments(s: GaussianState) -> SecondMoments:
    """Second moments of the state.

    For the mixed kernel the position variance follows from the diagonal
    rho(x, x) ~ exp(-a (1 - zeta) x^2); the momentum variance and the
    covariance follow from the first derivative of the kernel at y = x.
    """
    if isinstance(s, PureGaussianState):
        a, b = s.a, s.b
        return SecondMoments(1.0 / (2 * a), (a * a + b * b) / (2 * a), -b / (2 * a))
    if isinstance(s, MixedGaussianState):
        a, b, z = s.a, s.b, s.zeta
        sxx = 1.0 / (2 * a * (1 - z))
        spp = 0.5 * a * (1 + z) + b * b * sxx
        return SecondMoments(sxx, spp, -b * sxx)
    raise TypeError(f"not a Gaussian state: {type(s).__name__}")


def means(s: GaussianState) -> tuple[float, float]:
    if isinstance(s, PureGaussianState):
        return s.x0, s.p0
    return 0.0, 0.0
