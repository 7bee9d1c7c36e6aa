"""Downstream applications of the uncertainty bounds.

Relative entropy of unilateral coherence (entropy increase of the measured
subsystem under dephasing, given a memory) with its family-wide trade-off
bound, and secret-key-rate lower bounds for a two-basis prepare-and-measure
scheme, including the refinement by the tripartite correction term evaluated
on the purification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bounds import MemoryPartition, _bound_context
from .complementarity import q_variant
from .errors import NumericError, ValidationError
from .measurement import (ProjectiveMeasurement, holevo_quantity,
                          measured_conditional_entropy, projective_cq_state)
from .qstate import (DensityMatrix, Labels, conditional_entropy, partial_trace,
                     purify, von_neumann_entropy)

__all__ = [
    "CoherenceReport",
    "KeyRateReport",
    "unilateral_coherence",
    "coherence_sum_bound",
    "key_rate_bounds",
    "devetak_winter_rhs",
]


@dataclass(frozen=True)
class CoherenceReport:
    """Per-measurement unilateral coherence values, their total, and the
    family-wide lower bound on the total.

    ``per_measurement`` maps the 0-based measurement index to its coherence
    relative to its group's memory.
    """

    per_measurement: dict
    total: float
    bound: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_measurement", dict(self.per_measurement))
        worst = min(self.per_measurement.values())
        if worst < -1e-9:
            raise NumericError(
                f"negative coherence value {worst!r}: dephasing may not "
                "decrease entropy")
        if self.total < self.bound - 1e-9:
            raise NumericError(
                f"coherence total {self.total!r} lies below its lower bound "
                f"{self.bound!r}")

    def to_json(self) -> dict:
        return {
            "total": float(self.total),
            "bound": float(self.bound),
            "per_measurement": [{"index": int(i), "value": float(v)}
                                for i, v in sorted(self.per_measurement.items())],
        }


@dataclass(frozen=True)
class KeyRateReport:
    """Secret-key-rate lower bounds for a two-basis scheme.

    ``k_base`` is the complementarity value minus both post-measurement
    conditional entropies; ``k_tilde`` adds ``max{0, delta}`` where ``delta``
    is the tripartite correction evaluated on the purification (the purifying
    system plays the eavesdropper).  ``q_used`` is the complementarity value
    entering both.
    """

    k_base: float
    k_tilde: float
    delta: float
    q_used: float

    def __post_init__(self) -> None:
        if self.k_tilde < self.k_base - 1e-12:
            raise NumericError(
                f"refined key rate {self.k_tilde!r} below base rate {self.k_base!r}")

    def to_json(self) -> dict:
        return {"k_base": float(self.k_base), "k_tilde": float(self.k_tilde),
                "delta": float(self.delta), "q_used": float(self.q_used)}


def unilateral_coherence(m: ProjectiveMeasurement, rho: DensityMatrix,
                         memory: Labels, measured: str = "A") -> float:
    """Coherence of the measured subsystem relative to a basis, given memory.

    Equals ``S(M|memory) - S(A|memory)``: the conditional-entropy increase
    caused by dephasing the measured subsystem in the measurement basis.
    """
    return (measured_conditional_entropy(m, rho, measured, memory)
            - conditional_entropy(rho, measured, memory))


def coherence_sum_bound(rho: DensityMatrix, partition: MemoryPartition,
                        measurements: Sequence[ProjectiveMeasurement],
                        variant: str = "tilde") -> CoherenceReport:
    """Total unilateral coherence over a partition and its lower bound.

    The total sums each measurement's coherence against its group's memory.
    The bound combines the pairwise complementarity sum, memory conditional
    entropies with coefficients ``m_t(m_t - 2m + 1)/(2(m-1))``, and the larger
    of the two correction arms.  The identity ``total = uncertainty sum -
    sum_t m_t S(A|B_t)`` is verified internally within 1e-9.
    """
    ctx = _bound_context(rho, partition, measurements, variant)
    m = ctx.m
    per = {}
    total = 0.0
    for t, group in enumerate(partition.groups):
        s_ab = ctx.cond_ent_memory[t]
        for i in group:
            value = ctx.meas_cond_ent[i] - s_ab
            per[i] = value
            total += value
    identity = ctx.lhs - sum(len(g) * ctx.cond_ent_memory[t]
                             for t, g in enumerate(partition.groups))
    if abs(total - identity) > 1e-9:
        raise NumericError(
            f"coherence total {total!r} disagrees with the uncertainty-sum "
            f"identity value {identity!r}")
    coeff_sum = sum(
        len(g) * (len(g) - 2 * m + 1) / (2.0 * (m - 1)) * ctx.cond_ent_memory[t]
        for t, g in enumerate(partition.groups))
    bound = ctx.sum_q / (m - 1) + coeff_sum \
        + max(0.0, ctx.delta_mn, ctx.delta_mn_dblprime)
    return CoherenceReport(per_measurement=per, total=total, bound=bound)


def _classical_classical_entropy(ma: ProjectiveMeasurement,
                                 mb: ProjectiveMeasurement,
                                 rho_ab: DensityMatrix) -> float:
    """S(M|M') after dephasing A in ``ma`` and B in ``mb``."""
    step = projective_cq_state(ma, rho_ab, "A")
    both = projective_cq_state(mb, step, "B")
    return conditional_entropy(both, "A", "B")


def key_rate_bounds(rho_AB: DensityMatrix,
                    alice: tuple[ProjectiveMeasurement, ProjectiveMeasurement],
                    bob: tuple[ProjectiveMeasurement, ProjectiveMeasurement],
                    variant: str = "tilde") -> KeyRateReport:
    """Secret-key-rate lower bounds for a two-basis scheme.

    ``alice`` holds the two signal bases measured on ``A``; ``bob`` the two
    readout bases measured on ``B``.  The refinement term is the tripartite
    correction ``S(A) - I(M1:B) - I(M2:E)`` evaluated on the purification of
    the shared state, with the purifying system ``E`` as the eavesdropper.
    """
    for label in ("A", "B"):
        if label not in rho_AB.dims.labels:
            raise ValidationError(
                f"state has no subsystem {label!r} (labels: {rho_AB.dims.labels})")
    rho_ab = partial_trace(rho_AB, ("A", "B"))
    d_a = rho_ab.dims.dim_of("A")
    d_b = rho_ab.dims.dim_of("B")
    m1, m2 = alice
    m1p, m2p = bob
    for meas, d, who in ((m1, d_a, "alice"), (m2, d_a, "alice"),
                         (m1p, d_b, "bob"), (m2p, d_b, "bob")):
        if meas.dim != d:
            raise ValidationError(
                f"{who} measurement dimension {meas.dim} does not match "
                f"subsystem dimension {d}")
    rho_a = partial_trace(rho_ab, "A")
    q = q_variant(m1, m2, rho_A=rho_a, variant=variant)
    k_base = q - _classical_classical_entropy(m1, m1p, rho_ab) \
        - _classical_classical_entropy(m2, m2p, rho_ab)
    pure = purify(rho_ab, env_label="E")
    delta = von_neumann_entropy(rho_a) \
        - holevo_quantity(m1, pure, "A", "B") \
        - holevo_quantity(m2, pure, "A", "E")
    return KeyRateReport(k_base=k_base, k_tilde=k_base + max(0.0, delta),
                         delta=delta, q_used=q)


def devetak_winter_rhs(rho_ABC: DensityMatrix, m2: ProjectiveMeasurement,
                       bob_label: str = "B", charlie_label: str = "C") -> float:
    """Distillable-key reference value ``S(M2|C) + S(M2|B)`` for an explicit
    tripartite state, measuring the second basis on ``A``."""
    for label in ("A", bob_label, charlie_label):
        if label not in rho_ABC.dims.labels:
            raise ValidationError(
                f"state has no subsystem {label!r} (labels: {rho_ABC.dims.labels})")
    return (measured_conditional_entropy(m2, rho_ABC, "A", charlie_label)
            + measured_conditional_entropy(m2, rho_ABC, "A", bob_label))
