"""Projective and generalized (POVM) measurement models.

Overlap matrices between orthonormal bases, outcome probabilities,
post-measurement classical-quantum states, conditional entropies and Holevo
quantities of measurement registers, seeded random basis generation, and
mutual-unbiasedness checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ValidationError
from .qstate import (DensityMatrix, Labels, ProbabilityVector, SystemDims,
                     _as_labels, _hermitized_eigh, _random_hermitian, _rng,
                     partial_trace, von_neumann_entropy)

__all__ = [
    "GRAM_TOL",
    "ProjectiveMeasurement",
    "Povm",
    "OverlapData",
    "overlap_matrix",
    "outcome_probabilities",
    "projective_cq_state",
    "povm_cq_state",
    "measured_conditional_entropy",
    "holevo_quantity",
    "random_projective_measurement",
    "is_mub_family",
    "measurement_to_json",
    "measurement_from_json",
]

GRAM_TOL = 1e-8


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """An orthonormal measurement basis.

    Parameters
    ----------
    dim : int
        Hilbert-space dimension.
    vectors : ndarray, shape (dim, dim)
        Rows are the basis vectors.  The Gram matrix must equal the identity
        within ``1e-8``.
    name : str
        Identifier used for classical-register labels and reports.
    """

    dim: int
    vectors: np.ndarray
    name: str = "m"

    def __post_init__(self) -> None:
        vecs = np.array(self.vectors, dtype=complex, order="C")
        if vecs.shape != (self.dim, self.dim):
            raise ValidationError(
                f"vectors: expected shape ({self.dim}, {self.dim}), got {vecs.shape}")
        gram = vecs.conj() @ vecs.T
        dev = float(np.abs(gram - np.eye(self.dim)).max())
        if dev > GRAM_TOL:
            raise ValidationError(
                f"vectors: Gram matrix deviates from identity by {dev:.3e} "
                f"(tolerance {GRAM_TOL:.0e}); basis is not orthonormal")
        vecs.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)

    def projectors(self) -> list[np.ndarray]:
        return [np.outer(v, v.conj()) for v in self.vectors]


@dataclass(frozen=True)
class Povm:
    """A positive-operator-valued measure: PSD effects summing to identity.

    Parameters
    ----------
    dim : int
        Hilbert-space dimension.
    effects : sequence of ndarray, each (dim, dim)
        Hermitian within ``1e-8``, smallest eigenvalue ``>= -1e-8``, summing
        to the identity within ``1e-8``.
    name : str
        Identifier used for classical-register labels and reports.
    """

    dim: int
    effects: tuple[np.ndarray, ...]
    name: str = "x"

    def __post_init__(self) -> None:
        effs = []
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for idx, raw in enumerate(self.effects):
            e = np.array(raw, dtype=complex, order="C")
            if e.shape != (self.dim, self.dim):
                raise ValidationError(
                    f"effects[{idx}]: expected shape ({self.dim}, {self.dim}), got {e.shape}")
            herm = float(np.abs(e - e.conj().T).max())
            if herm > GRAM_TOL:
                raise ValidationError(
                    f"effects[{idx}]: hermiticity deviation {herm:.3e} exceeds {GRAM_TOL:.0e}")
            min_eig = float(np.linalg.eigvalsh((e + e.conj().T) / 2)[0])
            if min_eig < -GRAM_TOL:
                raise ValidationError(
                    f"effects[{idx}]: smallest eigenvalue {min_eig:.3e} below -{GRAM_TOL:.0e}")
            e.setflags(write=False)
            effs.append(e)
            total = total + e
        if not effs:
            raise ValidationError("effects: at least one effect is required")
        dev = float(np.abs(total - np.eye(self.dim)).max())
        if dev > GRAM_TOL:
            raise ValidationError(
                f"effects: sum deviates from identity by {dev:.3e} (tolerance {GRAM_TOL:.0e})")
        object.__setattr__(self, "effects", tuple(effs))

    @property
    def n_outcomes(self) -> int:
        return len(self.effects)


Measurement = Union[ProjectiveMeasurement, Povm]


@dataclass(frozen=True)
class OverlapData:
    """Squared-overlap matrix between two bases and its two largest entries.

    ``c[k, l]`` is the squared modulus of the inner product between the k-th
    vector of the first basis and the l-th vector of the second.  ``c_second``
    is the second entry of the descending multiset of all entries (duplicates
    retained), so it may equal ``c_max``.
    """

    c: np.ndarray
    c_max: float
    c_second: float


def overlap_matrix(mi: ProjectiveMeasurement, mj: ProjectiveMeasurement) -> OverlapData:
    """Squared overlaps between two orthonormal bases of equal dimension."""
    if not isinstance(mi, ProjectiveMeasurement) or not isinstance(mj, ProjectiveMeasurement):
        raise ValidationError(
            "overlap matrix requires projective measurements; generalized "
            "measurements have their own state-weighted quantity")
    if mi.dim != mj.dim:
        raise ValidationError(f"dimension mismatch: {mi.dim} vs {mj.dim}")
    inner = mi.vectors.conj() @ mj.vectors.T
    c = inner.real ** 2 + inner.imag ** 2
    ordered = np.sort(c, axis=None)[::-1]
    c.setflags(write=False)
    return OverlapData(c=c, c_max=float(ordered[0]), c_second=float(ordered[1]))


def outcome_probabilities(m: Measurement, rho_A: DensityMatrix) -> ProbabilityVector:
    """Outcome distribution of a measurement on a single-subsystem state."""
    if rho_A.total_dim != m.dim:
        raise ValidationError(
            f"dimension mismatch: state dimension {rho_A.total_dim} vs measurement {m.dim}")
    if isinstance(m, ProjectiveMeasurement):
        p = np.real(np.einsum("ki,ij,kj->k", m.vectors.conj(), rho_A.matrix, m.vectors))
    else:
        p = np.real(np.array([np.trace(e @ rho_A.matrix) for e in m.effects]))
    p = np.clip(p, 0.0, 1.0)
    return ProbabilityVector(p / p.sum())


def _embed_on(op: np.ndarray, dims: Sequence[int], position: int) -> np.ndarray:
    """Embed a single-subsystem operator at the given tensor position."""
    full = None
    for pos, d in enumerate(dims):
        factor = op if pos == position else np.eye(d)
        full = factor if full is None else np.kron(full, factor)
    return full


def projective_cq_state(m: ProjectiveMeasurement, rho: DensityMatrix,
                        measured: str) -> DensityMatrix:
    """Dephase the measured subsystem in the measurement basis.

    The measured subsystem itself becomes the classical outcome register; the
    returned state is block-diagonal in the measurement basis and commutes
    with all of its projectors.
    """
    pos = rho.dims.index_of(measured)
    if rho.dims.dims[pos] != m.dim:
        raise ValidationError(
            f"dimension mismatch: subsystem {measured!r} has dimension "
            f"{rho.dims.dims[pos]}, measurement has {m.dim}")
    out = np.zeros_like(rho.matrix)
    for proj in m.projectors():
        full = _embed_on(proj, rho.dims.dims, pos)
        out += full @ rho.matrix @ full
    return DensityMatrix(rho.dims, out)


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    vals, vecs = _hermitized_eigh(mat)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def povm_cq_state(x: Povm, rho: DensityMatrix, measured: str) -> DensityMatrix:
    """Classical-quantum extension for a generalized measurement.

    Appends a classical register subsystem labeled ``"X:<name>"`` (dimension =
    number of effects) as the leading subsystem and conjugates the measured
    subsystem with the square roots of the effects:
    ``sum_j |j><j| (x) sqrt(X_j) rho sqrt(X_j)``.
    """
    pos = rho.dims.index_of(measured)
    if rho.dims.dims[pos] != x.dim:
        raise ValidationError(
            f"dimension mismatch: subsystem {measured!r} has dimension "
            f"{rho.dims.dims[pos]}, measurement has {x.dim}")
    register = f"X:{x.name}"
    if register in rho.dims.labels:
        raise ValidationError(f"register label {register!r} collides with state labels")
    k = x.n_outcomes
    d = rho.total_dim
    out = np.zeros((k * d, k * d), dtype=complex)
    for j, effect in enumerate(x.effects):
        kraus = _embed_on(_psd_sqrt(effect), rho.dims.dims, pos)
        block = kraus @ rho.matrix @ kraus.conj().T
        out[j * d:(j + 1) * d, j * d:(j + 1) * d] = block
    dims = SystemDims((register,) + rho.dims.labels, (k,) + rho.dims.dims)
    return DensityMatrix(dims, out)


def _register_reduction(m: Measurement, rho: DensityMatrix, measured: str,
                        memory: tuple[str, ...]) -> tuple[DensityMatrix, str]:
    """Reduced classical-quantum state on (register, memory) and register label."""
    if isinstance(m, ProjectiveMeasurement):
        cq = projective_cq_state(m, rho, measured)
        return partial_trace(cq, (measured,) + memory), measured
    cq = povm_cq_state(m, rho, measured)
    register = f"X:{m.name}"
    return partial_trace(cq, (register,) + memory), register


def measured_conditional_entropy(m: Measurement, rho: DensityMatrix, measured: str,
                                 memory: Labels) -> float:
    """Conditional entropy S(M|memory) of the outcome register, in bits.

    For projective measurements the register is the dephased measured
    subsystem; for POVMs it is the appended classical register.
    An empty memory yields the Shannon entropy of the outcomes.
    """
    mem = _as_labels(memory) if memory else ()
    if measured in mem:
        raise ValidationError(f"measured subsystem {measured!r} overlaps memory {mem}")
    rho_mb, _ = _register_reduction(m, rho, measured, mem)
    s_joint = von_neumann_entropy(rho_mb)
    if not mem:
        return s_joint
    return s_joint - von_neumann_entropy(partial_trace(rho, mem))


def holevo_quantity(m: Measurement, rho: DensityMatrix, measured: str,
                    memory: Labels) -> float:
    """Holevo quantity I(M:memory) = H(M) + S(memory) - S(M, memory), in bits."""
    mem = _as_labels(memory)
    if not mem:
        raise ValidationError("memory: at least one memory label is required")
    if measured in mem:
        raise ValidationError(f"measured subsystem {measured!r} overlaps memory {mem}")
    rho_mb, register = _register_reduction(m, rho, measured, mem)
    h_m = von_neumann_entropy(partial_trace(rho_mb, register))
    return (h_m + von_neumann_entropy(partial_trace(rho, mem))
            - von_neumann_entropy(rho_mb))


def random_projective_measurement(dim: int, seed) -> ProjectiveMeasurement:
    """Random orthonormal basis: eigenvectors of a seeded random Hermitian matrix."""
    _, vecs = np.linalg.eigh(_random_hermitian(_rng(seed), dim))
    return ProjectiveMeasurement(dim=dim, vectors=vecs.T.copy(),
                                 name=f"rand-{_seed_tag(seed)}")


def _seed_tag(seed) -> str:
    if isinstance(seed, (tuple, list)):
        return "-".join(str(int(s)) for s in seed)
    return str(int(seed))


def is_mub_family(ms: Sequence[ProjectiveMeasurement], tol: float = 1e-9) -> bool:
    """True iff every cross-basis squared overlap equals 1/dim within tol."""
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            data = overlap_matrix(ms[i], ms[j])
            if float(np.abs(data.c - 1.0 / ms[i].dim).max()) > tol:
                return False
    return True


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def _pairs(mat: np.ndarray) -> list:
    return [[[float(np.real(z)), float(np.imag(z))] for z in row] for row in mat]


def measurement_to_json(m: Measurement) -> dict:
    """JSON-ready mapping for a projective measurement or POVM."""
    if isinstance(m, ProjectiveMeasurement):
        return {"dim": m.dim, "kind": "projective", "name": m.name,
                "vectors": _pairs(m.vectors)}
    return {"dim": m.dim, "kind": "povm", "name": m.name,
            "effects": [_pairs(e) for e in m.effects]}


def _parse_complex_matrix(rows, where: str) -> np.ndarray:
    try:
        return np.array([[complex(e[0], e[1]) for e in row] for row in rows])
    except (TypeError, IndexError, ValueError) as exc:
        raise ValidationError(f"{where}: entries must be [re, im] pairs ({exc})") from exc


def measurement_from_json(obj: dict, default_name: str = "m") -> Measurement:
    """Parse and validate a measurement mapping."""
    if not isinstance(obj, dict):
        raise ValidationError("measurement: expected a JSON object")
    if "dim" not in obj or "kind" not in obj:
        raise ValidationError("measurement.dim/kind: missing required field")
    dim = int(obj["dim"])
    kind = str(obj["kind"])
    name = str(obj.get("name", default_name))
    if kind == "projective":
        if "vectors" not in obj:
            raise ValidationError("measurement.vectors: missing required field")
        return ProjectiveMeasurement(
            dim=dim, vectors=_parse_complex_matrix(obj["vectors"], "measurement.vectors"),
            name=name)
    if kind == "povm":
        if "effects" not in obj:
            raise ValidationError("measurement.effects: missing required field")
        effects = [_parse_complex_matrix(e, f"measurement.effects[{i}]")
                   for i, e in enumerate(obj["effects"])]
        return Povm(dim=dim, effects=tuple(effects), name=name)
    raise ValidationError(f"measurement.kind: expected 'projective' or 'povm', got {kind!r}")
