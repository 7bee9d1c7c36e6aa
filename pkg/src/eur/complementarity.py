"""Measurement-incompatibility scalars.

Four pairwise complementarity quantities (worst-overlap, second-overlap
corrected, state-weighted, mixing-optimized), the ordered chain overlap bound
for three or more bases, the majorization admixture scalar for a measurement
family, and the generalized-measurement analogue of the state-weighted
quantity.  All values are in bits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NumericError, ValidationError
from .measurement import (OverlapData, Povm, ProjectiveMeasurement,
                          outcome_probabilities, overlap_matrix)
from .qstate import DensityMatrix

__all__ = [
    "MixingFamily",
    "MajorizationData",
    "q_mu",
    "q_tilde",
    "q_state",
    "q_optimized",
    "q_variant",
    "Q_VARIANTS",
    "chain_b",
    "majorization_data",
    "xiao_admixture_term",
    "q_povm_state",
]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
Q_VARIANTS = ("mu", "tilde", "state", "opt")


# ---------------------------------------------------------------------------
# Pairwise quantities
# ---------------------------------------------------------------------------

def q_mu(mi: ProjectiveMeasurement, mj: ProjectiveMeasurement) -> float:
    """Worst-case incompatibility: -log2 of the largest squared overlap."""
    return float(-np.log2(overlap_matrix(mi, mj).c_max))


def q_tilde(mi: ProjectiveMeasurement, mj: ProjectiveMeasurement) -> float:
    """Second-overlap corrected incompatibility.

    Adds ``(1 - sqrt(c_max))/2 * log2(c_max / c_second)`` to the worst-case
    value, where ``c_second`` is the second entry of the descending multiset
    of all squared overlaps.  Never below the worst-case value.
    """
    data = overlap_matrix(mi, mj)
    base = -np.log2(data.c_max)
    if data.c_second <= 0.0:
        return float(base)
    return float(base + 0.5 * (1.0 - np.sqrt(data.c_max))
                 * np.log2(data.c_max / data.c_second))


def _directional_sum(p: np.ndarray, row_max: np.ndarray) -> float:
    return float(-(np.asarray(p) * np.log2(row_max)).sum())


def q_state(rho_A: DensityMatrix, mi: ProjectiveMeasurement,
            mj: ProjectiveMeasurement) -> float:
    """State-weighted incompatibility: larger of the two directional sums.

    Each direction weights ``-log2`` of the per-row maximum overlap by the
    outcome probabilities of one of the two bases on ``rho_A``.
    """
    c = overlap_matrix(mi, mj).c
    p1 = outcome_probabilities(mi, rho_A)
    p2 = outcome_probabilities(mj, rho_A)
    return max(_directional_sum(np.asarray(p1), c.max(axis=1)),
               _directional_sum(np.asarray(p2), c.max(axis=0)))


@dataclass(frozen=True)
class MixingFamily:
    """Affine family of Hermitian matrices whose smallest eigenvalue is
    maximized over the mixing parameter.

    ``delta_12`` is diagonal in the first basis with entries
    ``log2(1/row-max overlap)``; ``delta_21`` is the analogue for the second
    basis.  ``p`` is the mixing parameter in [0, 1].
    """

    delta_12: np.ndarray
    delta_21: np.ndarray
    p: float

    def matrix(self) -> np.ndarray:
        return self.p * self.delta_12 + (1.0 - self.p) * self.delta_21

    def objective(self) -> float:
        return float(np.linalg.eigvalsh((self.matrix() + self.matrix().conj().T) / 2)[0])


def _mixing_deltas(mi: ProjectiveMeasurement,
                   mj: ProjectiveMeasurement) -> tuple[np.ndarray, np.ndarray]:
    c = overlap_matrix(mi, mj).c
    d = mi.dim
    delta_12 = sum(np.log2(1.0 / c[j].max()) * np.outer(mi.vectors[j], mi.vectors[j].conj())
                   for j in range(d))
    delta_21 = sum(np.log2(1.0 / c[:, k].max()) * np.outer(mj.vectors[k], mj.vectors[k].conj())
                   for k in range(d))
    return np.asarray(delta_12), np.asarray(delta_21)


def q_optimized(mi: ProjectiveMeasurement, mj: ProjectiveMeasurement,
                tol: float = 1e-10) -> float:
    """Mixing-optimized incompatibility.

    Maximizes the smallest eigenvalue of ``p*delta_12 + (1-p)*delta_21`` over
    the mixing parameter.  The objective is concave (a minimum eigenvalue of
    an affine Hermitian family), so a golden-section search on [0, 1] with
    bracket tolerance ``tol`` suffices; both endpoints are always evaluated.

    Raises
    ------
    NumericError
        If the bracket has not shrunk below ``tol`` after 200 iterations
        (requested tolerance too small).
    """
    delta_12, delta_21 = _mixing_deltas(mi, mj)

    def f(p: float) -> float:
        mat = p * delta_12 + (1.0 - p) * delta_21
        return float(np.linalg.eigvalsh((mat + mat.conj().T) / 2)[0])

    a, b = 0.0, 1.0
    c = b - (b - a) * INV_PHI
    d = a + (b - a) * INV_PHI
    fc, fd = f(c), f(d)
    iterations = 0
    while abs(b - a) > tol:
        if iterations >= 200:
            raise NumericError(
                f"mixing-parameter search did not converge to tolerance {tol:.3e} "
                "within 200 iterations")
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * INV_PHI
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * INV_PHI
            fd = f(d)
        iterations += 1
    return max(f(a), f(b), fc, fd, f(0.0), f(1.0))


def q_variant(mi: ProjectiveMeasurement, mj: ProjectiveMeasurement,
              rho_A: Optional[DensityMatrix] = None,
              variant: str = "tilde") -> float:
    """Dispatch over the four pairwise quantities.

    ``variant`` is one of ``"mu"``, ``"tilde"``, ``"state"``, ``"opt"``;
    ``rho_A`` is required exactly for ``"state"``.
    """
    if variant == "mu":
        return q_mu(mi, mj)
    if variant == "tilde":
        return q_tilde(mi, mj)
    if variant == "state":
        if rho_A is None:
            raise ValidationError("variant 'state' requires rho_A")
        return q_state(rho_A, mi, mj)
    if variant == "opt":
        return q_optimized(mi, mj)
    raise ValidationError(
        f"variant: expected one of {Q_VARIANTS}, got {variant!r}")


# ---------------------------------------------------------------------------
# Chain overlap bound
# ---------------------------------------------------------------------------

def _chain_vector(ms: Sequence[ProjectiveMeasurement]) -> np.ndarray:
    """Chain contraction indexed by the final basis's outcome.

    Max-reduce the first index of the first overlap matrix, then contract
    through the remaining links: ``v_k = sum over middle indices of
    (max-first-overlap) * (product of successive overlaps ending at k)``.
    """
    if len(ms) < 2:
        raise ValidationError(f"chain requires at least 2 measurements, got {len(ms)}")
    dim = ms[0].dim
    for m in ms[1:]:
        if m.dim != dim:
            raise ValidationError(f"dimension mismatch in chain: {dim} vs {m.dim}")
    v = overlap_matrix(ms[0], ms[1]).c.max(axis=0)
    for i in range(1, len(ms) - 1):
        v = v @ overlap_matrix(ms[i], ms[i + 1]).c
    return v


def chain_b(ms: Sequence[ProjectiveMeasurement]) -> float:
    """Ordered chain overlap bound: final max of the chain contraction.

    For two bases this is the largest squared overlap; identical bases give 1.
    The value depends on the measurement order.
    """
    return float(_chain_vector(ms).max())


# ---------------------------------------------------------------------------
# Majorization admixture scalar
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MajorizationData:
    """Weight and exponent vectors of the majorization admixture scalar.

    ``beta``: descending log2 values of the product, over cyclic rotations of
    the measurement family, of each rotation's chain contraction evaluated at
    one outcome index of its final basis (one entry per joint outcome tuple).
    ``omega``: non-negative mixing weights summing to 1, the clipped first
    differences of the aggregated caps ``omega_caps``.  ``cutoff`` is the
    1-based index at which the caps reach 1 (all later weights vanish).
    """

    omega: np.ndarray
    beta: np.ndarray
    omega_caps: tuple[float, ...]
    cutoff: int

    def __post_init__(self) -> None:
        omega = np.array(self.omega, dtype=float)
        beta = np.array(self.beta, dtype=float)
        if omega.shape != beta.shape:
            raise NumericError(
                f"weight/exponent length mismatch: {omega.shape} vs {beta.shape}")
        if float(omega.min()) < -1e-12:
            raise NumericError(f"negative mixing weight {float(omega.min()):.3e}")
        if abs(float(omega.sum()) - 1.0) > 1e-9:
            raise NumericError(f"mixing weights sum to {float(omega.sum()):.12f}, not 1")
        if np.any(np.diff(beta) > 1e-9):
            raise NumericError("exponent vector is not sorted descending")
        omega.setflags(write=False)
        beta.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "beta", beta)

    @property
    def value(self) -> float:
        """The admixture scalar: inner product of weights and exponents."""
        return float(self.omega @ self.beta)


_ADMIXTURE_CACHE: dict[tuple, MajorizationData] = {}


def _family_key(ms: Sequence[ProjectiveMeasurement]) -> tuple:
    return tuple((m.dim, m.vectors.tobytes()) for m in ms)


def _admixture_beta(ms: Sequence[ProjectiveMeasurement]) -> np.ndarray:
    m = len(ms)
    d = ms[0].dim
    g = np.empty((m, d))
    for j in range(m):
        rotation = [ms[(j + 1 + t) % m] for t in range(m)]
        g[j] = _chain_vector(rotation)
    logs = np.zeros(1)
    for j in range(m):
        logs = (logs[:, None] + np.log2(g[j])[None, :]).reshape(-1)
    return np.sort(logs)[::-1]


def _admixture_caps(ms: Sequence[ProjectiveMeasurement]) -> list[float]:
    m = len(ms)
    d = ms[0].dim
    projectors = [meas.projectors() for meas in ms]
    subset_sums: list[dict[tuple[int, ...], np.ndarray]] = []
    for projs in projectors:
        sums = {}
        for size in range(1, d + 1):
            for subset in itertools.combinations(range(d), size):
                sums[subset] = sum(projs[i] for i in subset)
        subset_sums.append(sums)
    caps = []
    for k in range(1, m * (d - 1) + 2):
        target = k + m - 1
        best = 0.0
        for comp in itertools.product(range(1, d + 1), repeat=m):
            if sum(comp) != target:
                continue
            choices = [[s for s in subset_sums[j] if len(s) == comp[j]] for j in range(m)]
            for subs in itertools.product(*choices):
                total = sum(subset_sums[j][subs[j]] for j in range(m))
                lam = float(np.linalg.eigvalsh(total)[-1])
                best = max(best, lam)
        caps.append(min((best / m) ** m, 1.0))
    return caps


def majorization_data(ms: Sequence[ProjectiveMeasurement]) -> MajorizationData:
    """Weights and exponents of the admixture scalar for a measurement family.

    The result depends only on the measurement family (not on any state) and
    is cached per family.  For a full set of mutually unbiased bases the
    scalar equals ``-m * log2(d)``.
    """
    if len(ms) < 2:
        raise ValidationError(
            f"admixture scalar requires at least 2 measurements, got {len(ms)}")
    d = ms[0].dim
    for meas in ms[1:]:
        if meas.dim != d:
            raise ValidationError(f"dimension mismatch: {d} vs {meas.dim}")
    key = _family_key(ms)
    cached = _ADMIXTURE_CACHE.get(key)
    if cached is not None:
        return cached
    m = len(ms)
    beta = _admixture_beta(ms)
    caps = _admixture_caps(ms)
    omega = np.zeros(d ** m)
    prev = 0.0
    cutoff = len(caps)
    for k, cap in enumerate(caps):
        if cap >= 1.0 - 1e-15:
            omega[k] = 1.0 - prev
            cutoff = k + 1
            break
        omega[k] = cap - prev
        prev = cap
    data = MajorizationData(omega=omega, beta=beta,
                            omega_caps=tuple(caps), cutoff=cutoff)
    _ADMIXTURE_CACHE[key] = data
    return data


def xiao_admixture_term(ms: Sequence[ProjectiveMeasurement],
                        rho_A: Optional[DensityMatrix] = None) -> float:
    """Admixture scalar used in the family-wide entropy lower bound.

    Returns the weight/exponent inner product so callers can form
    ``-(1/m) * value + (m - 1) * S(A)``.  The scalar itself is independent of
    the state; ``rho_A`` is accepted for dimension validation only.
    """
    if rho_A is not None and rho_A.total_dim != ms[0].dim:
        raise ValidationError(
            f"dimension mismatch: state dimension {rho_A.total_dim} vs "
            f"measurement {ms[0].dim}")
    return majorization_data(ms).value


# ---------------------------------------------------------------------------
# Generalized-measurement analogue
# ---------------------------------------------------------------------------

def _povm_h_values(x1: Povm, x2: Povm) -> np.ndarray:
    """Largest eigenvalue of the conjugation sum, per effect of the first POVM."""
    values = []
    for e1 in x1.effects:
        total = sum(e2 @ e1 @ e2 for e2 in x2.effects)
        lam = float(np.linalg.eigvalsh((total + total.conj().T) / 2)[-1])
        values.append(min(lam, 1.0))
    return np.array(values)


def q_povm_state(rho_A: DensityMatrix, x1: Povm, x2: Povm) -> float:
    """State-weighted incompatibility of two generalized measurements.

    Larger of the two directional sums ``-sum_j p_j log2 h_j`` where ``h_j``
    is the largest eigenvalue of the sum of the j-th effect conjugated by the
    other measurement's effects.  Reduces to the state-weighted projective
    quantity for rank-one projective measurements.
    """
    if x1.dim != x2.dim:
        raise ValidationError(f"dimension mismatch: {x1.dim} vs {x2.dim}")
    p1 = np.asarray(outcome_probabilities(x1, rho_A))
    p2 = np.asarray(outcome_probabilities(x2, rho_A))
    h12 = _povm_h_values(x1, x2)
    h21 = _povm_h_values(x2, x1)

    def directional(p: np.ndarray, h: np.ndarray) -> float:
        mask = p > 0.0
        if not mask.any():
            return 0.0
        return float(-(p[mask] * np.log2(h[mask])).sum())

    return max(directional(p1, h12), directional(p2, h21))
