"""Composite-system Hilbert-space numerics.

Density matrices on labeled tensor products of finite-dimensional subsystems,
partial trace, von Neumann / Shannon / conditional entropies, mutual
information, spectral purification, and a seeded random-state generator built
from a descending-probability cascade and a random Hermitian matrix.

All entropies are in bits (base-2 logarithms).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import NumericError, ValidationError

__all__ = [
    "HERMITICITY_TOL",
    "TRACE_TOL",
    "EIGENVALUE_TOL",
    "SystemDims",
    "DensityMatrix",
    "ProbabilityVector",
    "RandomStateRecipe",
    "tensor",
    "partial_trace",
    "von_neumann_entropy",
    "conditional_entropy",
    "mutual_information",
    "purify",
    "random_density_state",
    "shannon_entropy",
    "state_to_json",
    "state_from_json",
]

HERMITICITY_TOL = 1e-8
TRACE_TOL = 1e-8
EIGENVALUE_TOL = 1e-8

Labels = Union[str, Sequence[str]]


def _as_labels(labels: Labels) -> tuple[str, ...]:
    if isinstance(labels, str):
        return (labels,)
    return tuple(labels)


@dataclass(frozen=True)
class SystemDims:
    """Ordered subsystem labels and their dimensions.

    Parameters
    ----------
    labels : tuple of str
        Unique subsystem names, e.g. ``("A", "B", "C")``.
    dims : tuple of int
        Positive dimension of each subsystem, same order as `labels`.
        Dimension-1 subsystems are permitted (they arise as trivial
        purifying registers of pure states).
    """

    labels: tuple[str, ...]
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.labels) != len(self.dims):
            raise ValidationError("labels and dims must have equal length")
        if not self.labels:
            raise ValidationError("at least one subsystem is required")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError(f"labels: duplicate subsystem names in {self.labels}")
        if any(d < 1 for d in self.dims):
            raise ValidationError(f"dims: all dimensions must be >= 1, got {self.dims}")

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(
                f"unknown subsystem label {label!r}; have {self.labels}") from None

    def dim_of(self, label: str) -> int:
        return self.dims[self.index_of(label)]


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density operator on a labeled composite system.

    Invariants checked on construction: Hermiticity within ``1e-8``, unit
    trace within ``1e-8``, and smallest eigenvalue ``>= -1e-8``.
    """

    dims: SystemDims
    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=complex, order="C")
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValidationError(f"matrix: expected a square array, got shape {mat.shape}")
        if mat.shape[0] != self.dims.total_dim:
            raise ValidationError(
                f"matrix: size {mat.shape[0]} does not match total dimension "
                f"{self.dims.total_dim} of {self.dims.dims}")
        herm_dev = float(np.abs(mat - mat.conj().T).max())
        if herm_dev > HERMITICITY_TOL:
            raise ValidationError(f"matrix: hermiticity deviation {herm_dev:.3e} exceeds "
                                  f"{HERMITICITY_TOL:.0e}")
        trace_dev = abs(complex(np.trace(mat)) - 1.0)
        if trace_dev > TRACE_TOL:
            raise ValidationError(f"matrix: trace deviates from 1 by {trace_dev:.3e}, "
                                  f"tolerance {TRACE_TOL:.0e}")
        min_eig = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2)[0])
        if min_eig < -EIGENVALUE_TOL:
            raise ValidationError(f"matrix: smallest eigenvalue {min_eig:.3e} is below "
                                  f"-{EIGENVALUE_TOL:.0e}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def total_dim(self) -> int:
        return self.dims.total_dim

    def relabel(self, labels: Sequence[str]) -> "DensityMatrix":
        """Return the same operator with renamed subsystems."""
        return DensityMatrix(SystemDims(tuple(labels), self.dims.dims), self.matrix)


@dataclass(frozen=True)
class ProbabilityVector:
    """A validated discrete probability distribution.

    Entries may dip to ``-1e-12`` (rounding of exact zeros); they must sum to
    1 within ``1e-9``.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        p = np.array(self.entries, dtype=float)
        if p.ndim != 1:
            raise ValidationError(f"entries: expected a vector, got shape {p.shape}")
        if p.min(initial=0.0) < -1e-12 or p.max(initial=0.0) > 1 + 1e-12:
            raise ValidationError("entries: values outside [-1e-12, 1]")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValidationError(f"entries: sum {p.sum():.12f} deviates from 1 beyond 1e-9")
        p.setflags(write=False)
        object.__setattr__(self, "entries", p)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class RandomStateRecipe:
    """Seed and target system for the random-state generator.

    ``seed`` may be a non-negative integer or a tuple of such integers
    (a hierarchical stream key); identical recipes yield bit-identical states.
    """

    seed: Union[int, tuple[int, ...]]
    dims: SystemDims


def _hermitized_eigh(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of (M + M†)/2, eigenvalues ascending."""
    return np.linalg.eigh((mat + mat.conj().T) / 2)


def _state_eigenvalues(rho: DensityMatrix) -> np.ndarray:
    """Eigenvalues clipped to [0, 1]; raises if any is below -1e-8."""
    vals = np.linalg.eigvalsh((rho.matrix + rho.matrix.conj().T) / 2)
    if float(vals[0]) < -EIGENVALUE_TOL:
        raise NumericError(f"eigenvalue {float(vals[0]):.3e} below -{EIGENVALUE_TOL:.0e}; "
                           "operator is not a valid state")
    return np.clip(vals, 0.0, 1.0)


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Kronecker product of two states on disjoint label sets.

    Parameters
    ----------
    a, b : DensityMatrix
        Factors; their subsystem labels must not overlap.

    Returns
    -------
    DensityMatrix
        State on the concatenated label list ``a.labels + b.labels``.
    """
    clash = set(a.dims.labels) & set(b.dims.labels)
    if clash:
        raise ValidationError(f"label collision between factors: {sorted(clash)}")
    dims = SystemDims(a.dims.labels + b.dims.labels, a.dims.dims + b.dims.dims)
    return DensityMatrix(dims, np.kron(a.matrix, b.matrix))


def _partial_trace_array(mat: np.ndarray, dims: Sequence[int],
                         keep: Sequence[int]) -> np.ndarray:
    """Partial trace over all axes not in ``keep`` (positions, ascending)."""
    dims = list(dims)
    resh = mat.reshape(dims + dims)
    for pos in sorted((i for i in range(len(dims)) if i not in keep), reverse=True):
        resh = np.trace(resh, axis1=pos, axis2=pos + len(dims))
        dims.pop(pos)
    d = int(np.prod(dims)) if dims else 1
    return resh.reshape(d, d)


def partial_trace(rho: DensityMatrix, keep: Labels) -> DensityMatrix:
    """Reduced state on the kept subsystems (original subsystem order).

    Parameters
    ----------
    rho : DensityMatrix
    keep : str or sequence of str
        Non-empty subset of ``rho``'s labels.
    """
    keep_labels = _as_labels(keep)
    if not keep_labels:
        raise ValidationError("keep: at least one subsystem must be retained")
    positions = sorted(rho.dims.index_of(lb) for lb in keep_labels)
    out = _partial_trace_array(rho.matrix, rho.dims.dims, positions)
    sub = SystemDims(tuple(rho.dims.labels[i] for i in positions),
                     tuple(rho.dims.dims[i] for i in positions))
    return DensityMatrix(sub, out)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy -tr(rho log2 rho) in bits."""
    return _entropy_of(_state_eigenvalues(rho))


def _entropy_of(p: np.ndarray) -> float:
    p = p[p > 0.0]
    if p.size == 0:
        return 0.0
    return float(-(p * np.log2(p)).sum())


def shannon_entropy(p) -> float:
    """Shannon entropy of a probability vector in bits, with 0*log 0 = 0."""
    if not isinstance(p, ProbabilityVector):
        p = ProbabilityVector(np.asarray(p, dtype=float))
    return _entropy_of(np.clip(np.asarray(p), 0.0, 1.0))


def conditional_entropy(rho: DensityMatrix, target: str, given: Labels) -> float:
    """Conditional entropy S(target|given) = S(rho_{tg}) - S(rho_g), in bits.

    ``given`` may be empty, in which case the marginal entropy of ``target``
    is returned.  May be negative for entangled states.
    """
    given_labels = _as_labels(given) if given else ()
    if target in given_labels:
        raise ValidationError(f"target {target!r} overlaps the conditioning set")
    joint = partial_trace(rho, (target,) + given_labels)
    if not given_labels:
        return von_neumann_entropy(joint)
    return von_neumann_entropy(joint) - von_neumann_entropy(partial_trace(rho, given_labels))


def mutual_information(rho: DensityMatrix, x: Labels, y: Labels) -> float:
    """Mutual information I(x:y) = S(x) + S(y) - S(xy), in bits."""
    xs, ys = _as_labels(x), _as_labels(y)
    if set(xs) & set(ys):
        raise ValidationError(f"overlapping label sets {xs} and {ys}")
    return (von_neumann_entropy(partial_trace(rho, xs))
            + von_neumann_entropy(partial_trace(rho, ys))
            - von_neumann_entropy(partial_trace(rho, xs + ys)))


def purify(rho: DensityMatrix, env_label: str = "E") -> DensityMatrix:
    """Spectral purification on the original system plus a fresh subsystem.

    The purifying subsystem has dimension equal to the rank of ``rho``
    (dimension 1 for pure inputs).  Eigenvalues are paired with environment
    basis states in descending order; tracing out ``env_label`` recovers the
    input.

    Parameters
    ----------
    rho : DensityMatrix
    env_label : str
        Label for the purifying subsystem; must not collide with existing
        labels.
    """
    if env_label in rho.dims.labels:
        raise ValidationError(f"environment label {env_label!r} collides with {rho.dims.labels}")
    vals, vecs = _hermitized_eigh(rho.matrix)
    order = np.argsort(-vals, kind="stable")
    vals = np.clip(vals[order], 0.0, 1.0)
    vecs = vecs[:, order]
    rank = max(int((vals > 1e-12).sum()), 1)
    d = rho.total_dim
    # |psi> = sum_k sqrt(l_k) |v_k> (x) |k>, system-major ordering
    psi = np.zeros(d * rank, dtype=complex)
    basis = np.eye(rank)
    for k in range(rank):
        psi += np.sqrt(vals[k]) * np.kron(vecs[:, k], basis[k])
    dims = SystemDims(rho.dims.labels + (env_label,), rho.dims.dims + (rank,))
    return DensityMatrix(dims, np.outer(psi, psi.conj()))


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _probability_cascade(rng: np.random.Generator, count: int) -> np.ndarray:
    """Descending probabilities: p1 = u1, p_{s+1} = u_{s+1} p_s, normalized."""
    p = np.empty(count)
    p[0] = rng.uniform(0.0, 1.0)
    for s in range(1, count):
        p[s] = rng.uniform(0.0, 1.0) * p[s - 1]
    return p / p.sum()


def _random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Hermitian matrix from a uniform[-1,1] real matrix: diagonal plus
    symmetrized upper triangle plus i times antisymmetrized lower triangle."""
    r = rng.uniform(-1.0, 1.0, size=(dim, dim))
    diag = np.diag(np.diag(r))
    upper = np.triu(r, 1)
    lower = np.tril(r, -1)
    return diag + (upper.T + upper) + 1j * (lower.T - lower)


def random_density_state(recipe: RandomStateRecipe) -> DensityMatrix:
    """Seeded random state: cascade eigenvalues, random Hermitian eigenbasis.

    Procedure: (i) draw a descending probability cascade of length equal to
    the total dimension and normalize it; (ii) draw a random Hermitian matrix
    and take its eigenvectors as a random unitary; (iii) pair the descending
    probabilities with the eigenvector columns (ascending-eigenvalue order)
    and assemble ``V diag(p) V^dagger``.

    Identical recipes produce bit-identical matrices.
    """
    rng = _rng(recipe.seed)
    d = recipe.dims.total_dim
    lam = _probability_cascade(rng, d)
    _, vecs = np.linalg.eigh(_random_hermitian(rng, d))
    mat = (vecs * lam) @ vecs.conj().T
    return DensityMatrix(recipe.dims, mat)


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def _complex_to_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def state_to_json(rho: DensityMatrix) -> dict:
    """JSON-ready mapping with labels, dims, and a [re, im] entry matrix."""
    return {
        "labels": list(rho.dims.labels),
        "dims": list(rho.dims.dims),
        "matrix": [[_complex_to_pair(z) for z in row] for row in rho.matrix],
    }


def state_from_json(obj: dict) -> DensityMatrix:
    """Parse and validate a state mapping produced by :func:`state_to_json`."""
    if not isinstance(obj, dict):
        raise ValidationError("state: expected a JSON object")
    for key in ("labels", "dims", "matrix"):
        if key not in obj:
            raise ValidationError(f"state.{key}: missing required field")
    try:
        dims = SystemDims(tuple(str(x) for x in obj["labels"]),
                          tuple(int(x) for x in obj["dims"]))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"state.labels/dims: {exc}") from exc
    try:
        raw = np.array([[complex(e[0], e[1]) for e in row] for row in obj["matrix"]])
    except (TypeError, IndexError, ValueError) as exc:
        raise ValidationError(f"state.matrix: entries must be [re, im] pairs ({exc})") from exc
    return DensityMatrix(dims, raw)
