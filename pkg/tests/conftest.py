"""Shared deterministic generators for the test suite.

Everything here is seeded: the same seed always produces the same instance,
so every test run exercises identical inputs.
"""
from __future__ import annotations

import numpy as np

from eur.bounds import MemoryPartition
from eur.measurement import Povm, ProjectiveMeasurement, random_projective_measurement
from eur.qstate import DensityMatrix, RandomStateRecipe, SystemDims, random_density_state


def make_state(seed, labels, dims) -> DensityMatrix:
    """Seeded random state on the given labeled subsystems."""
    recipe = RandomStateRecipe(seed=seed, dims=SystemDims(tuple(labels), tuple(dims)))
    return random_density_state(recipe)


def make_basis(dim: int, seed) -> ProjectiveMeasurement:
    return random_projective_measurement(dim, seed)


def pure_state(vector, labels, dims) -> DensityMatrix:
    """Normalized projector onto the given vector."""
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(SystemDims(tuple(labels), tuple(dims)), np.outer(v, v.conj()))


def random_partition(rng: np.random.Generator, m: int,
                     memory_pool: tuple[str, ...]) -> MemoryPartition:
    """Random grouping of m measurement indices into 1..m memory groups."""
    n = int(rng.integers(1, m + 1))
    order = [int(v) for v in rng.permutation(m)]
    if n > 1:
        cuts = sorted(int(c) for c in rng.choice(np.arange(1, m), size=n - 1,
                                                 replace=False))
    else:
        cuts = []
    edges = [0] + cuts + [m]
    groups = tuple(tuple(order[a:b]) for a, b in zip(edges, edges[1:]))
    return MemoryPartition(groups=groups, memory_labels=memory_pool[:n])


def random_povm(rng: np.random.Generator, dim: int, outcomes: int) -> Povm:
    """Random full-rank generalized measurement with the given outcome count.

    Draws Gram factors G_k = H_k^dag H_k and whitens by the inverse square
    root of their sum, which guarantees PSD effects that resolve the identity.
    """
    grams = []
    for _ in range(outcomes):
        h = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        grams.append(h.conj().T @ h)
    total = sum(grams)
    vals, vecs = np.linalg.eigh((total + total.conj().T) / 2)
    inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.conj().T
    effects = [inv_sqrt @ g @ inv_sqrt for g in grams]
    effects = [(e + e.conj().T) / 2 for e in effects]
    return Povm(dim, tuple(effects), name=f"povm{outcomes}")
