"""Brute-force reference values by quadrature and Fock-basis truncation.

Nothing here uses the closed-form fidelities: wave-function overlaps are
integrated with Gauss-Hermite rules, density matrices are projected onto the
first ``N`` oscillator eigenfunctions, and the Uhlmann fidelity is evaluated
from Hermitian matrix square roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .exceptions import QuadratureError, TruncationError
from .states import GaussianState, MixedGaussianState, PureGaussianState

TAIL_TOL = 1e-8
NORM_TOL = 1e-8
OVERLAP_ORDER = 120
MAX_ORDER = 320


@dataclass(frozen=True)
class QuadratureGrid:
    """Gauss-Hermite rule mapped to the real line.

    ``sum(weights * f(nodes))`` approximates the plain integral of ``f``; the
    rule is exact for ``poly(x) * exp(-((x - center)/scale)**2)`` up to degree
    ``2 * order - 1``.
    """

    order: int
    center: float
    scale: float
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)


@lru_cache(maxsize=32)
def _hermgauss(order):
    t, w = hermgauss(order)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def gauss_hermite(order: int, center: float = 0.0, scale: float = 1.0) -> QuadratureGrid:
    if not 2 <= order <= MAX_ORDER:
        raise ValueError(f"quadrature order must lie in [2, {MAX_ORDER}], got {order}")
    t, w = _hermgauss(order)
    nodes = center + scale * t
    weights = scale * np.exp(np.log(w) + t * t)
    return QuadratureGrid(order, float(center), float(scale), nodes, weights)


def pair_grid(s1: PureGaussianState, s2: PureGaussianState, order=OVERLAP_ORDER):
    """Rule whose weight matches |psi1* psi2| exactly."""
    a = s1.a + s2.a
    center = (s1.a * s1.x0 + s2.a * s2.x0) / a
    return gauss_hermite(order, center, math.sqrt(2.0 / a))


def _overlap_on(grid, s1, s2):
    psi1 = s1.wavefunction(grid.nodes)
    psi2 = s2.wavefunction(grid.nodes)
    amp = np.sum(grid.weights * np.conj(psi1) * psi2)
    n1 = np.sum(grid.weights * np.abs(psi1) ** 2)
    n2 = np.sum(grid.weights * np.abs(psi2) ** 2)
    return abs(amp) ** 2, n1, n2


def overlap_pure(s1: PureGaussianState, s2: PureGaussianState, grid=None, *, full_output=False):
    """|<psi1|psi2>|^2 by quadrature.

    Raises :class:`QuadratureError` if either state fails to normalise on the
    rule.  With ``full_output`` the error estimate (difference against a rule
    of two thirds the order) is returned as well.
    """
    if grid is None:
        grid = pair_grid(s1, s2)
    f, n1, n2 = _overlap_on(grid, s1, s2)
    worst = max(abs(n1 - 1.0), abs(n2 - 1.0))
    if worst > NORM_TOL:
        raise QuadratureError(f"self-overlap off by {worst:.3e} on order-{grid.order} rule", worst)
    coarse = gauss_hermite(max(2, (2 * grid.order) // 3), grid.center, grid.scale)
    err = abs(f - _overlap_on(coarse, s1, s2)[0])
    if full_output:
        return float(f), float(err)
    return float(f)


def hermite_functions(n: int, x) -> np.ndarray:
    """Normalised oscillator eigenfunctions phi_0..phi_{n-1} at ``x``, shape (n, len(x)).

    Uses the three-term recurrence on the normalised functions, so no factorials appear.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n,) + x.shape)
    out[0] = np.pi**-0.25 * np.exp(-0.5 * x * x)
    if n > 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, n - 1):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


@dataclass(frozen=True)
class FockDensityMatrix:
    """Truncated density matrix <m|rho|n>, m, n < dim.

    ``tail`` is the probability mass lost to the truncation, 1 - trace.
    """

    entries: np.ndarray = field(repr=False)
    tail: float = 0.0

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ValueError(f"density matrix must be square with dim >= 2, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -1e-10:
            raise ValueError(f"density matrix has eigenvalue {lo:.3e} < 0")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


def _default_order(n):
    return min(MAX_ORDER, max(160, 2 * n + 80))


def fock_matrix(state: GaussianState, n: int, *, order=None, tail_tol=TAIL_TOL) -> FockDensityMatrix:
    """Project ``state`` onto the first ``n`` Fock states."""
    if n < 2:
        raise ValueError(f"dimension must be at least 2, got {n}")
    grid = gauss_hermite(order or _default_order(n))
    phi = hermite_functions(n, grid.nodes) * grid.weights
    if isinstance(state, PureGaussianState):
        c = phi @ state.wavefunction(grid.nodes)
        m = np.outer(c, c.conj())
    elif isinstance(state, MixedGaussianState):
        k = state.kernel(grid.nodes[:, None], grid.nodes[None, :])
        m = phi @ k @ phi.T
        m = 0.5 * (m + m.conj().T)
    else:
        raise TypeError(f"not a Gaussian state: {type(state).__name__}")
    tail = 1.0 - float(np.real(np.trace(m)))
    if tail > tail_tol:
        raise TruncationError(f"truncation at N={n} drops probability {tail:.3e} > {tail_tol:g}", tail)
    return FockDensityMatrix(m, tail)


def _psd_sqrt(m):
    w, v = np.linalg.eigh(m)
    # eigenvalues below the rounding floor carry no signal; their square roots
    # would add ~1e-8 each to the trace below
    floor = m.shape[0] * np.finfo(float).eps * max(w[-1], 0.0)
    w = np.sqrt(np.where(w > floor, w, 0.0))
    return (v * w) @ v.conj().T


def fidelity_fock(r1: FockDensityMatrix, r2: FockDensityMatrix) -> float:
    """[Tr sqrt(sqrt(r1) r2 sqrt(r1))]^2.

    The trace of sqrt(A^H A) with A = sqrt(r2) sqrt(r1) is the sum of the
    singular values of A; that sum is what gets computed.
    """
    if r1.dim != r2.dim:
        raise ValueError(f"dimension mismatch: {r1.dim} != {r2.dim}")
    m = _psd_sqrt(r1.entries) @ _psd_sqrt(r2.entries)
    sv = np.linalg.svd(m, compute_uv=False)
    return float(min(1.0, np.sum(sv) ** 2))


def energy_fock(r: FockDensityMatrix) -> float:
    """Tr[rho (n + 1/2)]."""
    diag = np.real(np.diag(r.entries))
    return float(np.sum(diag * (np.arange(r.dim) + 0.5)))


def purity_fock(r: FockDensityMatrix) -> float:
    """Tr(rho^2)."""
    return float(np.sum(np.abs(r.entries) ** 2))


# -- agreement with the closed forms -------------------------------------------

MODERATE_A = (0.5, 2.0)
MODERATE_B = 1.0
MODERATE_COORD = 1.5
MODERATE_ZETA = 0.6
CHECK_TAIL_TOL = 1e-4


def _state_doc(s):
    if isinstance(s, PureGaussianState):
        return {"kind": "pure", "a": s.a, "b": s.b, "x": s.x0, "p": s.p0}
    return {"kind": "mixed", "a": s.a, "b": s.b, "zeta": s.zeta}


def sample_moderate_pairs(samples: int, seed: int, identical: bool = False):
    """Seeded pure and mixed pairs from the moderate box, two pairs per sample."""
    rng = np.random.default_rng(seed)
    a_lo, a_hi = MODERATE_A

    def pure():
        return PureGaussianState(rng.uniform(a_lo, a_hi), rng.uniform(-MODERATE_B, MODERATE_B),
                                 rng.uniform(-MODERATE_COORD, MODERATE_COORD),
                                 rng.uniform(-MODERATE_COORD, MODERATE_COORD))

    def mixed():
        return MixedGaussianState(rng.uniform(a_lo, a_hi), rng.uniform(-MODERATE_B, MODERATE_B),
                                  rng.uniform(0.0, MODERATE_ZETA))

    pairs = []
    for _ in range(samples):
        for draw in (pure, mixed):
            s1 = draw()
            pairs.append((s1, s1 if identical else draw()))
    return pairs


@dataclass(frozen=True)
class AgreementReport:
    samples: int
    dim: int
    seed: int
    tail_tol: float
    max_fidelity_error: float
    max_overlap_error: float
    max_energy_error: float
    max_purity_error: float
    max_tail: float
    worst_pair: dict

    def passed(self, fidelity_tol: float = 1e-6, overlap_tol: float = 1e-8) -> bool:
        return self.max_fidelity_error <= fidelity_tol and self.max_overlap_error <= overlap_tol

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def check_against_closed_forms(samples: int = 100, dim: int = 40, seed: int = 0, *,
                               tail_tol: float = CHECK_TAIL_TOL, identical: bool = False) -> AgreementReport:
    """Largest disagreements between the oracle and the closed forms on the moderate box.

    Raises :class:`TruncationError` when a sampled state does not fit in ``dim``
    Fock states to within ``tail_tol``.
    """
    from .fidelity import fidelity, fidelity_pure
    from .states import energy, purity

    if samples < 1:
        raise ValueError("samples must be at least 1")
    if not 2 <= dim <= 128:
        raise ValueError(f"dim must lie in [2, 128], got {dim}")
    errs = {"f": 0.0, "o": 0.0, "e": 0.0, "p": 0.0, "t": 0.0}
    worst = None
    for s1, s2 in sample_moderate_pairs(samples, seed, identical):
        r1 = fock_matrix(s1, dim, tail_tol=tail_tol)
        r2 = r1 if s2 is s1 else fock_matrix(s2, dim, tail_tol=tail_tol)
        closed = fidelity(s1, s2)
        df = abs(fidelity_fock(r1, r2) - closed)
        if worst is None or df > errs["f"]:
            worst = {"state_a": _state_doc(s1), "state_b": _state_doc(s2), "fidelity": closed}
        errs["f"] = max(errs["f"], df)
        if isinstance(s1, PureGaussianState):
            errs["o"] = max(errs["o"], abs(overlap_pure(s1, s2) - fidelity_pure(s1, s2)))
        for s, r in ((s1, r1), (s2, r2)):
            errs["e"] = max(errs["e"], abs(energy_fock(r) - energy(s)))
            errs["p"] = max(errs["p"], abs(purity_fock(r) - purity(s)))
            errs["t"] = max(errs["t"], r.tail)
    return AgreementReport(samples, dim, seed, tail_tol, errs["f"], errs["o"], errs["e"],
                           errs["p"], errs["t"], worst)
