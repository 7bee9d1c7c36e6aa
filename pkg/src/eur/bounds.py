"""Entropic uncertainty lower bounds with one or more quantum memories.

Given a state whose measured subsystem is labeled ``A``, a family of m
measurements grouped into n memory assignments, this module evaluates:

* the uncertainty sum (left-hand side) ``sum_t sum_{i in S_t} S(M_i|B_t)``;
* the two-measurement tripartite bound with its mutual-information correction;
* two prior-work bounds ``lb1``/``lb2`` built from the largest pairwise
  overlaps and the ordered chain quantity ``b``;
* two tighter bounds ``LB1``/``LB2`` built from pairwise complementarity
  values and the majorization admixture scalar;
* their combination ``optimal`` taking the larger correction arm;
* the generalized-measurement (POVM) analogue with its own correction; and
* the closed-form differences between the four bounds with their validity
  preconditions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .complementarity import (chain_b, q_mu, q_povm_state, q_variant,
                              xiao_admixture_term)
from .errors import NumericError, ValidationError
from .measurement import (Measurement, Povm, ProjectiveMeasurement,
                          holevo_quantity, measured_conditional_entropy,
                          povm_cq_state)
from .qstate import (DensityMatrix, conditional_entropy, mutual_information,
                     partial_trace, von_neumann_entropy)

__all__ = [
    "MemoryPartition",
    "BoundReport",
    "DifferenceReport",
    "Theorem1Result",
    "PovmPairBounds",
    "uncertainty_lhs",
    "theorem1_bound",
    "lb1",
    "lb2",
    "LB1",
    "LB2",
    "optimal_bound",
    "difference_report",
    "theorem4_bound",
    "povm_bipartite_bounds",
]


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MemoryPartition:
    """Grouping of m measurements into n memory assignments.

    ``groups[t]`` holds the 0-based measurement indices of the t-th group;
    together the groups must partition ``{0, ..., m-1}``.  ``memory_labels[t]``
    names the memory subsystem held against the t-th group.  The measured
    subsystem is ``measured_label`` (default ``"A"``).
    """

    groups: tuple[tuple[int, ...], ...]
    memory_labels: tuple[str, ...]
    measured_label: str = "A"

    def __post_init__(self) -> None:
        groups = tuple(tuple(int(i) for i in g) for g in self.groups)
        labels = tuple(str(x) for x in self.memory_labels)
        if not groups:
            raise ValidationError("partition: at least one group is required")
        for t, g in enumerate(groups):
            if not g:
                raise ValidationError(f"partition: group {t} is empty")
        flat = sorted(i for g in groups for i in g)
        m = len(flat)
        if flat != list(range(m)):
            raise ValidationError(
                f"partition: groups must cover indices 0..{m - 1} exactly once, "
                f"got {flat}")
        if len(labels) != len(groups):
            raise ValidationError(
                f"partition: {len(groups)} groups but {len(labels)} memory labels")
        if len(set(labels)) != len(labels):
            raise ValidationError(f"partition: duplicate memory labels {labels}")
        if self.measured_label in labels:
            raise ValidationError(
                f"partition: memory labels include the measured label "
                f"{self.measured_label!r}")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "memory_labels", labels)

    @property
    def m(self) -> int:
        """Total number of measurements."""
        return sum(len(g) for g in self.groups)

    @property
    def n(self) -> int:
        """Number of memory groups."""
        return len(self.groups)


@dataclass(frozen=True)
class BoundReport:
    """All bound values and intermediate scalars for one configuration.

    ``delta_mn``, ``delta_mn_prime``, ``delta_mn_dblprime`` and ``kappa_mn``
    are the correction terms before the ``max{0, .}`` is applied.  ``q_pairs``
    maps 0-based measurement index pairs (i, j), i < j, to the pairwise
    complementarity value of the variant in ``q_variant_used``.
    """

    lhs: float
    lb1: float
    lb2: float
    LB1: float
    LB2: float
    optimal: float
    delta_mn: float
    delta_mn_prime: float
    delta_mn_dblprime: float
    kappa_mn: float
    b: float
    q_pairs: dict
    q_variant_used: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "q_pairs", dict(self.q_pairs))
        if self.LB1 < self.lb1 - 1e-12:
            raise NumericError(
                f"tightness violated: LB1 = {self.LB1!r} below lb1 = {self.lb1!r}")
        ceiling = max(self.lb1, self.lb2, self.LB1, self.LB2, self.optimal)
        if self.lhs < ceiling - 1e-9:
            raise NumericError(
                f"uncertainty sum {self.lhs!r} lies below its lower bound {ceiling!r}")

    def to_json(self) -> dict:
        """Flat mapping of named scalars; pair values as {i, j, value} rows."""
        data = {name: float(getattr(self, name))
                for name in ("lhs", "lb1", "lb2", "LB1", "LB2", "optimal",
                             "delta_mn", "delta_mn_prime", "delta_mn_dblprime",
                             "kappa_mn", "b")}
        data["q_variant_used"] = self.q_variant_used
        data["q_pairs"] = [{"i": int(i), "j": int(j), "value": float(v)}
                           for (i, j), v in sorted(self.q_pairs.items())]
        return data


@dataclass(frozen=True)
class DifferenceReport:
    """Closed-form differences between the four bounds.

    Each value evaluates the printed closed-form expression.  The matching
    entry of ``closed_form_valid`` records whether the preconditions for that
    expression to equal the direct bound difference held (the relevant
    correction terms non-negative); the ``d_LB1_lb1`` entry is unconditional
    because both bounds share the same correction arm.
    """

    d_LB1_lb1: float
    d_LB1_lb2: float
    d_LB2_lb1: float
    d_LB2_lb2: float
    d_LB1_LB2: float
    closed_form_valid: dict

    def __post_init__(self) -> None:
        object.__setattr__(self, "closed_form_valid", dict(self.closed_form_valid))

    def to_json(self) -> dict:
        return {
            "d_LB1_lb1": float(self.d_LB1_lb1),
            "d_LB1_lb2": float(self.d_LB1_lb2),
            "d_LB2_lb1": float(self.d_LB2_lb1),
            "d_LB2_lb2": float(self.d_LB2_lb2),
            "d_LB1_LB2": float(self.d_LB1_LB2),
            "closed_form_valid": {k: bool(v) for k, v in self.closed_form_valid.items()},
        }


class Theorem1Result(NamedTuple):
    """Two-measurement tripartite bound, its uncertainty sum, and the
    pre-max correction term."""

    bound: float
    lhs: float
    delta: float


class PovmPairBounds(NamedTuple):
    """Right-hand sides of the three two-POVM relations: one shared memory,
    two split memories, and no memory."""

    single_memory: float
    split_memory: float
    no_memory: float


# ---------------------------------------------------------------------------
# Shared evaluation context
# ---------------------------------------------------------------------------

def _check_setup(rho: DensityMatrix, partition: MemoryPartition,
                 measurements: Sequence[Measurement]) -> None:
    if partition.m != len(measurements):
        raise ValidationError(
            f"partition covers {partition.m} measurements but {len(measurements)} "
            "were supplied")
    if partition.measured_label not in rho.dims.labels:
        raise ValidationError(
            f"state has no subsystem {partition.measured_label!r} "
            f"(labels: {rho.dims.labels})")
    d_a = rho.dims.dim_of(partition.measured_label)
    for idx, m in enumerate(measurements):
        if m.dim != d_a:
            raise ValidationError(
                f"measurement {idx} has dimension {m.dim}, measured subsystem "
                f"{partition.measured_label!r} has {d_a}")
    for label in partition.memory_labels:
        if label not in rho.dims.labels:
            raise ValidationError(
                f"state has no subsystem {label!r} (labels: {rho.dims.labels})")


@dataclass(frozen=True)
class _BoundContext:
    """Every scalar the four bounds and their differences are built from."""

    m: int
    n: int
    s_a: float
    q_pairs: dict
    sum_q: float
    log_prod_c: float
    b: float
    admixture: float
    weights: tuple
    cond_ent_memory: tuple
    mutual_memory: tuple
    holevo_sum: float
    meas_cond_ent: tuple
    lhs: float
    delta_mn: float
    delta_mn_prime: float
    delta_mn_dblprime: float
    lead_prior: float
    lead_new: float


def _bound_context(rho: DensityMatrix, partition: MemoryPartition,
                   measurements: Sequence[ProjectiveMeasurement],
                   variant: str = "tilde") -> _BoundContext:
    _check_setup(rho, partition, measurements)
    m = partition.m
    if m < 2:
        raise ValidationError(f"bounds require at least 2 measurements, got {m}")
    measured = partition.measured_label
    rho_a = partial_trace(rho, measured)
    s_a = von_neumann_entropy(rho_a)

    q_pairs = {}
    log_prod_c = 0.0
    for i, j in itertools.combinations(range(m), 2):
        q_pairs[(i, j)] = q_variant(measurements[i], measurements[j],
                                    rho_A=rho_a, variant=variant)
        log_prod_c -= q_mu(measurements[i], measurements[j])
    sum_q = sum(q_pairs.values())

    b = chain_b(measurements)
    admixture = xiao_admixture_term(measurements, rho_a)

    weights = tuple(len(g) * (len(g) - 1) / (2.0 * (m - 1)) for g in partition.groups)
    cond_ent_memory = tuple(conditional_entropy(rho, measured, label)
                            for label in partition.memory_labels)
    mutual_memory = tuple(mutual_information(rho, measured, label)
                          for label in partition.memory_labels)

    holevo_sum = 0.0
    meas_cond_ent = [0.0] * m
    for t, group in enumerate(partition.groups):
        label = partition.memory_labels[t]
        for i in group:
            holevo_sum += holevo_quantity(measurements[i], rho, measured, label)
            meas_cond_ent[i] = measured_conditional_entropy(
                measurements[i], rho, measured, label)
    lhs = sum(meas_cond_ent)

    sum_w = sum(weights)
    weighted_mutual = sum(w * v for w, v in zip(weights, mutual_memory))
    delta_mn = (m / 2.0 - sum_w) * s_a + weighted_mutual - holevo_sum
    delta_mn_prime = (log_prod_c / (m - 1) - np.log2(b)) + (m - 1) * s_a \
        - sum_w * s_a + weighted_mutual - holevo_sum
    delta_mn_dblprime = -admixture / m + (m - 1) * s_a - sum_w * s_a \
        + weighted_mutual - sum_q / (m - 1) - holevo_sum

    weighted_cond = sum(w * v for w, v in zip(weights, cond_ent_memory))
    lead_prior = -log_prod_c / (m - 1) + weighted_cond
    lead_new = sum_q / (m - 1) + weighted_cond

    return _BoundContext(
        m=m, n=partition.n, s_a=s_a, q_pairs=q_pairs, sum_q=sum_q,
        log_prod_c=log_prod_c, b=b, admixture=admixture, weights=weights,
        cond_ent_memory=cond_ent_memory, mutual_memory=mutual_memory,
        holevo_sum=holevo_sum, meas_cond_ent=tuple(meas_cond_ent), lhs=lhs,
        delta_mn=delta_mn, delta_mn_prime=delta_mn_prime,
        delta_mn_dblprime=delta_mn_dblprime,
        lead_prior=lead_prior, lead_new=lead_new)


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

def uncertainty_lhs(rho: DensityMatrix, partition: MemoryPartition,
                    measurements: Sequence[Measurement]) -> float:
    """Uncertainty sum: measured conditional entropy of each measurement
    against its group's memory, summed over the partition."""
    _check_setup(rho, partition, measurements)
    total = 0.0
    for t, group in enumerate(partition.groups):
        label = partition.memory_labels[t]
        for i in group:
            total += measured_conditional_entropy(
                measurements[i], rho, partition.measured_label, label)
    return total


def theorem1_bound(rho_ABC: DensityMatrix, m1: ProjectiveMeasurement,
                   m2: ProjectiveMeasurement,
                   variant: str = "tilde") -> Theorem1Result:
    """Two-measurement bound with memories B and C held against A.

    The correction is ``delta = S(A) - I(M1:B) - I(M2:C)``; the bound is the
    pairwise complementarity value plus ``max{0, delta}`` and the uncertainty
    sum is ``S(M1|B) + S(M2|C)``.
    """
    for label in ("A", "B", "C"):
        if label not in rho_ABC.dims.labels:
            raise ValidationError(
                f"state has no subsystem {label!r} (labels: {rho_ABC.dims.labels})")
    rho_a = partial_trace(rho_ABC, "A")
    if m1.dim != rho_a.total_dim or m2.dim != rho_a.total_dim:
        raise ValidationError(
            f"measurement dimensions ({m1.dim}, {m2.dim}) do not match "
            f"subsystem 'A' dimension {rho_a.total_dim}")
    q = q_variant(m1, m2, rho_A=rho_a, variant=variant)
    delta = von_neumann_entropy(rho_a) \
        - holevo_quantity(m1, rho_ABC, "A", "B") \
        - holevo_quantity(m2, rho_ABC, "A", "C")
    lhs = measured_conditional_entropy(m1, rho_ABC, "A", "B") \
        + measured_conditional_entropy(m2, rho_ABC, "A", "C")
    return Theorem1Result(bound=q + max(0.0, delta), lhs=lhs, delta=delta)


def lb1(rho: DensityMatrix, partition: MemoryPartition,
        measurements: Sequence[ProjectiveMeasurement]) -> float:
    """Prior bound built from the largest pairwise overlaps."""
    ctx = _bound_context(rho, partition, measurements)
    return ctx.lead_prior + max(0.0, ctx.delta_mn)


def lb2(rho: DensityMatrix, partition: MemoryPartition,
        measurements: Sequence[ProjectiveMeasurement]) -> float:
    """Prior bound whose correction uses the ordered chain quantity."""
    ctx = _bound_context(rho, partition, measurements)
    return ctx.lead_prior + max(0.0, ctx.delta_mn_prime)


def LB1(rho: DensityMatrix, partition: MemoryPartition,
        measurements: Sequence[ProjectiveMeasurement],
        variant: str = "tilde") -> float:
    """Tighter bound: pairwise complementarity sum with the shared correction."""
    ctx = _bound_context(rho, partition, measurements, variant)
    return ctx.lead_new + max(0.0, ctx.delta_mn)


def LB2(rho: DensityMatrix, partition: MemoryPartition,
        measurements: Sequence[ProjectiveMeasurement],
        variant: str = "tilde") -> float:
    """Tighter bound whose correction uses the majorization admixture scalar."""
    ctx = _bound_context(rho, partition, measurements, variant)
    return ctx.lead_new + max(0.0, ctx.delta_mn_dblprime)


def optimal_bound(rho: DensityMatrix, partition: MemoryPartition,
                  measurements: Sequence[ProjectiveMeasurement],
                  variant: str = "tilde") -> BoundReport:
    """Full report; ``optimal`` takes the larger of the two correction arms,
    so it equals ``max(LB1, LB2)``."""
    ctx = _bound_context(rho, partition, measurements, variant)
    return BoundReport(
        lhs=ctx.lhs,
        lb1=ctx.lead_prior + max(0.0, ctx.delta_mn),
        lb2=ctx.lead_prior + max(0.0, ctx.delta_mn_prime),
        LB1=ctx.lead_new + max(0.0, ctx.delta_mn),
        LB2=ctx.lead_new + max(0.0, ctx.delta_mn_dblprime),
        optimal=ctx.lead_new + max(0.0, ctx.delta_mn, ctx.delta_mn_dblprime),
        delta_mn=ctx.delta_mn,
        delta_mn_prime=ctx.delta_mn_prime,
        delta_mn_dblprime=ctx.delta_mn_dblprime,
        kappa_mn=ctx.delta_mn,
        b=ctx.b,
        q_pairs=ctx.q_pairs,
        q_variant_used=variant)


def difference_report(rho: DensityMatrix, partition: MemoryPartition,
                      measurements: Sequence[ProjectiveMeasurement],
                      variant: str = "tilde") -> DifferenceReport:
    """Closed-form bound differences with validity flags.

    Each entry also carries a flag stating whether its preconditions (the
    correction terms entering both bounds non-negative) held; whenever they
    do, the closed form is cross-checked against the direct bound subtraction
    within 1e-9 and a numeric error is raised on disagreement.
    """
    ctx = _bound_context(rho, partition, measurements, variant)
    m, s_a = ctx.m, ctx.s_a
    log_b = float(np.log2(ctx.b))
    values = {
        "d_LB1_lb1": (ctx.sum_q + ctx.log_prod_c) / (m - 1),
        "d_LB1_lb2": (2 - m) / 2.0 * s_a + ctx.sum_q / (m - 1) + log_b,
        "d_LB2_lb1": (m - 2) / 2.0 * s_a + ctx.log_prod_c / (m - 1)
                     - ctx.admixture / m,
        "d_LB2_lb2": -ctx.admixture / m + log_b,
        "d_LB1_LB2": (2 - m) / 2.0 * s_a + ctx.admixture / m
                     + ctx.sum_q / (m - 1),
    }
    nonneg = {
        "delta": ctx.delta_mn >= 0.0,
        "prime": ctx.delta_mn_prime >= 0.0,
        "dbl": ctx.delta_mn_dblprime >= 0.0,
    }
    valid = {
        "d_LB1_lb1": True,
        "d_LB1_lb2": nonneg["delta"] and nonneg["prime"],
        "d_LB2_lb1": nonneg["dbl"] and nonneg["delta"],
        "d_LB2_lb2": nonneg["dbl"] and nonneg["prime"],
        "d_LB1_LB2": nonneg["delta"] and nonneg["dbl"],
    }
    direct = {
        "d_LB1_lb1": (ctx.lead_new + max(0.0, ctx.delta_mn))
                     - (ctx.lead_prior + max(0.0, ctx.delta_mn)),
        "d_LB1_lb2": (ctx.lead_new + max(0.0, ctx.delta_mn))
                     - (ctx.lead_prior + max(0.0, ctx.delta_mn_prime)),
        "d_LB2_lb1": (ctx.lead_new + max(0.0, ctx.delta_mn_dblprime))
                     - (ctx.lead_prior + max(0.0, ctx.delta_mn)),
        "d_LB2_lb2": (ctx.lead_new + max(0.0, ctx.delta_mn_dblprime))
                     - (ctx.lead_prior + max(0.0, ctx.delta_mn_prime)),
        "d_LB1_LB2": max(0.0, ctx.delta_mn) - max(0.0, ctx.delta_mn_dblprime),
    }
    for key, ok in valid.items():
        if ok and abs(values[key] - direct[key]) > 1e-9:
            raise NumericError(
                f"closed-form difference {key} = {values[key]!r} disagrees with "
                f"direct subtraction {direct[key]!r}")
    return DifferenceReport(closed_form_valid=valid, **values)


# ---------------------------------------------------------------------------
# Generalized-measurement bounds
# ---------------------------------------------------------------------------

def _povm_register_entropies(x: Povm, rho: DensityMatrix, measured: str,
                             memory: tuple[str, ...]) -> float:
    """Conditional entropy S(A | memory, register) after measuring ``x``."""
    cq = povm_cq_state(x, rho, measured)
    register = f"X:{x.name}"
    return conditional_entropy(cq, measured, (register,) + memory)


def theorem4_bound(rho: DensityMatrix, partition: MemoryPartition,
                   povms: Sequence[Povm],
                   rho_A_for_q: Optional[DensityMatrix] = None) -> float:
    """Generalized-measurement bound over a memory partition.

    Pairwise complementarity uses the state-weighted POVM quantity on the
    measured marginal (or on ``rho_A_for_q`` when supplied).  Within-group
    pair penalties use ``f = min`` of the two post-measurement conditional
    entropies given memory and register; the correction term additionally
    compares against their memory-free analogues.
    """
    _check_setup(rho, partition, povms)
    m = partition.m
    if m < 2:
        raise ValidationError(f"bounds require at least 2 measurements, got {m}")
    measured = partition.measured_label
    rho_a = partial_trace(rho, measured)
    rho_for_q = rho_A_for_q if rho_A_for_q is not None else rho_a
    if rho_for_q.total_dim != povms[0].dim:
        raise ValidationError(
            f"rho_A_for_q dimension {rho_for_q.total_dim} does not match "
            f"measurement dimension {povms[0].dim}")
    s_a = von_neumann_entropy(rho_a)

    sum_q = sum(q_povm_state(rho_for_q, povms[i], povms[j])
                for i, j in itertools.combinations(range(m), 2))

    group_of = {}
    for t, group in enumerate(partition.groups):
        for i in group:
            group_of[i] = t

    # Per-measurement conditional entropies with and without the memory.
    with_memory = {}
    for i in range(m):
        label = partition.memory_labels[group_of[i]]
        with_memory[i] = _povm_register_entropies(povms[i], rho, measured, (label,))
    memory_free = {i: _povm_register_entropies(povms[i], rho_a, measured, ())
                   for i in range(m)}

    f_sum = 0.0
    for group in partition.groups:
        for i, j in itertools.combinations(sorted(group), 2):
            f_sum += min(with_memory[i], with_memory[j])
    ftilde_sum = sum(min(memory_free[i], memory_free[j])
                     for i, j in itertools.combinations(range(m), 2))

    holevo_sum = 0.0
    for t, group in enumerate(partition.groups):
        label = partition.memory_labels[t]
        for i in group:
            holevo_sum += holevo_quantity(povms[i], rho, measured, label)

    pair_counts = [len(g) * (len(g) - 1) / 2.0 for g in partition.groups]
    cond_ent_memory = [conditional_entropy(rho, measured, label)
                       for label in partition.memory_labels]
    mutual_memory = [mutual_information(rho, measured, label)
                     for label in partition.memory_labels]

    kappa = (m * (m - 1) - sum(len(g) * (len(g) - 1) for g in partition.groups)) \
        / (2.0 * (m - 1)) * s_a \
        + sum(c / (m - 1) * v for c, v in zip(pair_counts, mutual_memory)) \
        - holevo_sum + (f_sum - ftilde_sum) / (m - 1)
    return (sum(c * v for c, v in zip(pair_counts, cond_ent_memory))
            + sum_q - f_sum) / (m - 1) + max(0.0, kappa)


def povm_bipartite_bounds(rho: DensityMatrix, x1: Povm, x2: Povm) -> PovmPairBounds:
    """Right-hand sides of the three two-POVM uncertainty relations.

    ``single_memory`` bounds ``S(X1|B) + S(X2|B)``; ``split_memory`` bounds
    ``S(X1|B) + S(X2|C)``; ``no_memory`` bounds ``H(X1) + H(X2)``.  The state
    must carry subsystems ``A`` and ``B``; further subsystems are traced out
    where not needed.
    """
    for label in ("A", "B"):
        if label not in rho.dims.labels:
            raise ValidationError(
                f"state has no subsystem {label!r} (labels: {rho.dims.labels})")
    if x1.dim != x2.dim:
        raise ValidationError(f"dimension mismatch: {x1.dim} vs {x2.dim}")
    rho_ab = partial_trace(rho, ("A", "B"))
    rho_a = partial_trace(rho, "A")
    if x1.dim != rho_a.total_dim:
        raise ValidationError(
            f"measurement dimension {x1.dim} does not match subsystem 'A' "
            f"dimension {rho_a.total_dim}")
    q = q_povm_state(rho_a, x1, x2)
    f = min(_povm_register_entropies(x1, rho_ab, "A", ("B",)),
            _povm_register_entropies(x2, rho_ab, "A", ("B",)))
    ftilde = min(_povm_register_entropies(x1, rho_a, "A", ()),
                 _povm_register_entropies(x2, rho_a, "A", ()))
    s_ab = conditional_entropy(rho_ab, "A", "B")
    return PovmPairBounds(
        single_memory=q + s_ab - f,
        split_memory=q,
        no_memory=q + von_neumann_entropy(rho_a) - ftilde)
