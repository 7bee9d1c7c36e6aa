"""Experiment harness: bundled configurations, seeded sweeps, and file output.

Provides the bundled states and measurement families used by the command-line
entry points, deterministic per-sample random sampling, CSV emission with a
provenance header, SVG rendering of the swept quantities, and JSON-file input
workflows for user-supplied states and measurements.

Conventions
-----------
* The measured subsystem is always labeled ``"A"``.
* Partition strings like ``"0,1;2"`` group 0-based measurement indices with
  ``;`` and assign the t-th group to the t-th non-``A`` subsystem label of the
  state, in the state's declared label order.
* Random sampling derives one substream per (master seed, sample index, slot):
  slot 0 draws the state, slot k >= 1 draws the k-th measurement.  Records are
  therefore bit-identical across re-runs and worker counts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .applications import CoherenceReport, KeyRateReport, coherence_sum_bound, \
    key_rate_bounds
from .bounds import (BoundReport, DifferenceReport, MemoryPartition,
                     difference_report, optimal_bound)
from .complementarity import Q_VARIANTS
from .errors import NumericError, ValidationError
from .measurement import (Measurement, ProjectiveMeasurement,
                          measurement_from_json,
                          random_projective_measurement)
from .qstate import (DensityMatrix, RandomStateRecipe, SystemDims,
                     random_density_state, state_from_json)

__all__ = [
    "RunConfig",
    "ExperimentRecord",
    "DEFAULT_SEED",
    "ghz_qutrit_state",
    "cyclic_shift_state",
    "rotation_and_fourier_bases",
    "permuted_rotation_bases",
    "shared_vector_bases",
    "computational_basis",
    "qubit_mub_triple",
    "qutrit_mub_triple",
    "sample_state",
    "sample_measurements",
    "parse_partition",
    "load_state",
    "load_measurements",
    "run_example1",
    "run_example2",
    "run_figure3",
    "run_figure4",
    "run_bound",
    "run_qkd",
    "run_coherence",
]

DEFAULT_SEED = 1234
DEFAULT_GRID_STEPS = 101
DEFAULT_FIG3_SAMPLES = 50
DEFAULT_FIG4_SAMPLES = 10_000
SVG_HASH_SALT = "entropic-uncertainty"

_DIFF_COLUMNS = ("d_LB1_lb1", "d_LB1_lb2", "d_LB2_lb1", "d_LB2_lb2", "d_LB1_LB2")


# ---------------------------------------------------------------------------
# Configuration and records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    """Validated parameters for one harness invocation.

    Only the fields relevant to ``subcommand`` need to be set; unset numeric
    fields fall back to the documented defaults.
    """

    subcommand: str
    a: Optional[float] = None
    phi: Optional[float] = None
    steps: Optional[int] = None
    samples: Optional[int] = None
    master_seed: Optional[int] = None
    q_variant: str = "tilde"
    csv_path: Optional[str] = None
    svg_path: Optional[str] = None
    state_path: Optional[str] = None
    measurements_path: Optional[str] = None
    alice_path: Optional[str] = None
    bob_path: Optional[str] = None
    partition_text: Optional[str] = None

    def __post_init__(self) -> None:
        if self.a is not None and not (0.0 <= float(self.a) <= 1.0):
            raise ValidationError(f"a: expected a value in [0, 1], got {self.a}")
        if self.phi is not None and not math.isfinite(float(self.phi)):
            raise ValidationError(f"phi: expected a finite angle, got {self.phi}")
        if self.steps is not None and int(self.steps) < 1:
            raise ValidationError(f"steps: expected a positive count, got {self.steps}")
        if self.samples is not None and int(self.samples) < 1:
            raise ValidationError(f"samples: expected a positive count, got {self.samples}")
        if self.master_seed is not None and int(self.master_seed) < 0:
            raise ValidationError(f"seed: expected a non-negative integer, got {self.master_seed}")
        if self.q_variant not in Q_VARIANTS:
            raise ValidationError(
                f"q-variant: expected one of {Q_VARIANTS}, got {self.q_variant!r}")


@dataclass(frozen=True)
class ExperimentRecord:
    """One output row of a sweep: sample index, master seed, named values."""

    sample_index: int
    seed: int
    values: dict


# ---------------------------------------------------------------------------
# Bundled states and measurement families
# ---------------------------------------------------------------------------

def ghz_qutrit_state() -> DensityMatrix:
    """Maximally correlated three-qutrit state on labels (A, B, C):
    equal superposition of |000>, |111>, |222>."""
    psi = np.zeros(27, dtype=complex)
    psi[[0, 13, 26]] = 1.0 / np.sqrt(3.0)
    dims = SystemDims(("A", "B", "C"), (3, 3, 3))
    return DensityMatrix(dims, np.outer(psi, psi.conj()))


def cyclic_shift_state() -> DensityMatrix:
    """Three-qutrit state on labels (A, B, C): equal superposition of the
    cyclic shifts |012>, |120>, |201>."""
    psi = np.zeros(27, dtype=complex)
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        psi[9 * i + 3 * j + k] = 1.0 / np.sqrt(3.0)
    dims = SystemDims(("A", "B", "C"), (3, 3, 3))
    return DensityMatrix(dims, np.outer(psi, psi.conj()))


def rotation_and_fourier_bases(a: float = 0.95, phi: float = math.pi,
                               ) -> tuple[ProjectiveMeasurement, ...]:
    """Qutrit triple: a two-level rotation with amplitude ``a`` and phase
    ``phi`` in the first basis, then two Fourier-type mutually unbiased bases
    built from the cube root of unity."""
    w = np.exp(2j * np.pi / 3)
    m1 = np.array([
        [np.sqrt(a), np.sqrt(1 - a), 0],
        [np.exp(1j * phi) * np.sqrt(1 - a), -np.exp(1j * phi) * np.sqrt(a), 0],
        [0, 0, 1],
    ], dtype=complex)
    m2 = np.array([[1, 1, 1], [1, w.conj(), w], [1, w, w.conj()]],
                  dtype=complex) / np.sqrt(3)
    m3 = np.array([[1, 1, w.conj()], [1, w, w], [1, w.conj(), 1]],
                  dtype=complex) / np.sqrt(3)
    return (ProjectiveMeasurement(3, m1, "m1"),
            ProjectiveMeasurement(3, m2, "m2"),
            ProjectiveMeasurement(3, m3, "m3"))


def permuted_rotation_bases(a: float) -> tuple[ProjectiveMeasurement, ...]:
    """Qutrit triple: a signed permutation basis, a fixed rational basis, and
    a real two-level rotation with amplitude ``a``."""
    m1 = np.array([[1, 0, 0], [0, 0, 1], [0, -1, 0]], dtype=complex)
    m2 = np.array([
        [-1 / 3, -2 / 3, 2 / 3],
        [-2 / np.sqrt(5), 1 / np.sqrt(5), 0],
        [2 / (3 * np.sqrt(5)), 4 / (3 * np.sqrt(5)), 5 / (3 * np.sqrt(5))],
    ], dtype=complex)
    m3 = np.array([
        [np.sqrt(a), np.sqrt(1 - a), 0],
        [-np.sqrt(1 - a), np.sqrt(a), 0],
        [0, 0, 1],
    ], dtype=complex)
    return (ProjectiveMeasurement(3, m1, "m1"),
            ProjectiveMeasurement(3, m2, "m2"),
            ProjectiveMeasurement(3, m3, "m3"))


def shared_vector_bases() -> tuple[ProjectiveMeasurement, ...]:
    """Qutrit triple of real bases in which the first two bases share one
    vector (making their pairwise incompatibility vanish)."""
    s2 = np.sqrt(2) / 2
    m1 = np.array([[s2, s2, 0], [-s2, s2, 0], [0, 0, 1]], dtype=complex)
    m2 = np.array([
        [np.sqrt(6) / 6, -np.sqrt(6) / 6, np.sqrt(6) / 3],
        [-np.sqrt(3) / 3, np.sqrt(3) / 3, np.sqrt(3) / 3],
        [s2, s2, 0],
    ], dtype=complex)
    m3 = np.array([[s2, 0, s2], [0, 1, 0], [-s2, 0, s2]], dtype=complex)
    return (ProjectiveMeasurement(3, m1, "m1"),
            ProjectiveMeasurement(3, m2, "m2"),
            ProjectiveMeasurement(3, m3, "m3"))


def computational_basis(dim: int, name: str = "z") -> ProjectiveMeasurement:
    """Standard basis of the given dimension."""
    return ProjectiveMeasurement(dim, np.eye(dim, dtype=complex), name)


def qubit_mub_triple() -> tuple[ProjectiveMeasurement, ...]:
    """The three mutually unbiased qubit bases (standard, diagonal, circular).

    The diagonal and circular bases carry a global phase that makes every
    amplitude exactly representable ((1 + i)/2 instead of 1/sqrt(2)), so all
    squared overlaps are exactly 0.5 and the derived incompatibility anchors
    are float-exact.  Global phases leave the measurements unchanged.
    """
    half = (1.0 + 1.0j) / 2.0
    z = np.eye(2, dtype=complex)
    x = np.array([[half, half], [half, -half]])
    y = np.array([[half, 1j * half], [half, -1j * half]])
    return (ProjectiveMeasurement(2, z, "z"),
            ProjectiveMeasurement(2, x, "x"),
            ProjectiveMeasurement(2, y, "y"))


def qutrit_mub_triple() -> tuple[ProjectiveMeasurement, ...]:
    """Three mutually unbiased qutrit bases: the standard basis plus the two
    Fourier-type bases."""
    _, m2, m3 = rotation_and_fourier_bases()
    return (computational_basis(3), m2, m3)


# ---------------------------------------------------------------------------
# Seeded sampling
# ---------------------------------------------------------------------------

def sample_state(master_seed: int, sample_index: int, dims: SystemDims) -> DensityMatrix:
    """Random state for one sample: substream (master_seed, sample_index, 0)."""
    recipe = RandomStateRecipe(seed=(int(master_seed), int(sample_index), 0), dims=dims)
    return random_density_state(recipe)


def sample_measurements(master_seed: int, sample_index: int, dim: int,
                        count: int) -> list[ProjectiveMeasurement]:
    """Random bases for one sample: substream (master_seed, sample_index, k)
    for the k-th measurement, k = 1..count."""
    return [random_projective_measurement(dim, (int(master_seed), int(sample_index), k))
            for k in range(1, count + 1)]


# ---------------------------------------------------------------------------
# Input files and partition strings
# ---------------------------------------------------------------------------

def _load_json(path: str, what: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"{what}: cannot read {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{what}: invalid JSON in {path!r}: {exc}") from exc


def load_state(path: str) -> DensityMatrix:
    """Read and validate a state file (labels, dims, [re, im] matrix)."""
    return state_from_json(_load_json(path, "state"))


def load_measurements(path: str) -> list[Measurement]:
    """Read and validate a measurement file: a JSON array of measurement
    objects, or an object with a ``measurements`` array field."""
    obj = _load_json(path, "measurements")
    if isinstance(obj, dict) and "measurements" in obj:
        obj = obj["measurements"]
    if not isinstance(obj, list) or not obj:
        raise ValidationError("measurements: expected a non-empty JSON array")
    return [measurement_from_json(entry, default_name=f"m{k}")
            for k, entry in enumerate(obj)]


def parse_partition(text: str, state: DensityMatrix,
                    measured: str = "A") -> MemoryPartition:
    """Parse ``"0,1;2"``-style grouping against a state's labels.

    Groups are separated by ``;`` and list 0-based measurement indices; the
    t-th group is assigned the t-th non-measured subsystem label in the
    state's declared order.
    """
    if not text or not text.strip():
        raise ValidationError("partition: empty specification")
    groups = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            raise ValidationError(f"partition: empty group in {text!r}")
        try:
            groups.append(tuple(int(x) for x in chunk.split(",")))
        except ValueError as exc:
            raise ValidationError(
                f"partition: indices must be integers in {chunk!r} ({exc})") from exc
    available = [lb for lb in state.dims.labels if lb != measured]
    if len(groups) > len(available):
        raise ValidationError(
            f"partition: {len(groups)} groups but only {len(available)} memory "
            f"subsystems available ({available})")
    return MemoryPartition(tuple(groups), tuple(available[:len(groups)]), measured)


def _require_projective(ms: Sequence[Measurement], what: str) -> list[ProjectiveMeasurement]:
    for k, m in enumerate(ms):
        if not isinstance(m, ProjectiveMeasurement):
            raise ValidationError(
                f"{what}[{k}]: this entry point requires projective measurements "
                "(kind 'projective'); generalized measurements are available "
                "through the library API")
    return list(ms)


# ---------------------------------------------------------------------------
# CSV and SVG output
# ---------------------------------------------------------------------------

def _format_cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: str, comment: str, columns: Sequence[str],
               rows: Sequence[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# {comment}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(v) for v in row) + "\n")


def _plot_backend():
    import matplotlib
    matplotlib.use("Agg", force=True)
    matplotlib.rcParams["svg.hashsalt"] = SVG_HASH_SALT
    import matplotlib.pyplot as plt
    return plt


def _save_svg(fig, path: str) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})


def _default_svg_path(csv_path: str) -> str:
    return str(Path(csv_path).with_suffix(".svg"))


def _render_curves(path: str, x: Sequence[float], series: dict,
                   xlabel: str, title: str) -> None:
    plt = _plot_backend()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, ys in series.items():
        ax.plot(x, ys, label=name, linewidth=1.4)
    ax.axhline(0.0, color="gray", linewidth=0.6)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("bound difference (bits)")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save_svg(fig, path)
    plt.close(fig)


def _render_sample_scatter(path: str, series: dict, title: str) -> None:
    plt = _plot_backend()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, ys in series.items():
        ax.scatter(range(len(ys)), ys, s=9, label=name)
    ax.axhline(0.0, color="gray", linewidth=0.6)
    ax.set_xlabel("sample index")
    ax.set_ylabel("bound difference (bits)")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save_svg(fig, path)
    plt.close(fig)


def _render_bound_scatter(path: str, bounds: Sequence[float],
                          totals: Sequence[float], title: str) -> None:
    plt = _plot_backend()
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    ax.scatter(bounds, totals, s=6, alpha=0.4, label="samples")
    lo = min(min(bounds), min(totals))
    hi = max(max(bounds), max(totals))
    pad = 0.05 * (hi - lo) if hi > lo else 0.1
    line = (lo - pad, hi + pad)
    ax.plot(line, line, color="black", linewidth=0.8, label="equality")
    ax.set_xlabel("lower bound (bits)")
    ax.set_ylabel("coherence total (bits)")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save_svg(fig, path)
    plt.close(fig)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def _diff_values(report: BoundReport) -> dict:
    """Direct bound differences (the plotted quantities)."""
    return {
        "d_LB1_lb1": report.LB1 - report.lb1,
        "d_LB1_lb2": report.LB1 - report.lb2,
        "d_LB2_lb1": report.LB2 - report.lb1,
        "d_LB2_lb2": report.LB2 - report.lb2,
        "d_LB1_LB2": report.LB1 - report.LB2,
    }


def run_example1(config: Optional[RunConfig] = None,
                 ) -> tuple[DifferenceReport, BoundReport]:
    """Bound differences for the maximally correlated three-qutrit state with
    the rotation/Fourier basis triple.

    Defaults: amplitude 0.95, phase pi.  Partition: measurements 1 and 2
    against memory B, measurement 3 against memory C.
    """
    config = config or RunConfig("example1")
    a = 0.95 if config.a is None else float(config.a)
    phi = math.pi if config.phi is None else float(config.phi)
    rho = ghz_qutrit_state()
    ms = rotation_and_fourier_bases(a, phi)
    partition = MemoryPartition(((0, 1), (2,)), ("B", "C"))
    report = optimal_bound(rho, partition, ms, config.q_variant)
    diffs = difference_report(rho, partition, ms, config.q_variant)
    return diffs, report


def run_example2(config: Optional[RunConfig] = None) -> list[ExperimentRecord]:
    """Sweep the rotation amplitude of the second bundled basis triple on the
    cyclic-shift state; write per-point bound differences as CSV and SVG.

    After writing all output, raises a numeric error if the strict per-point
    ordering LB2 > lb2 > LB1 > lb1 failed anywhere.
    """
    config = config or RunConfig("example2")
    steps = DEFAULT_GRID_STEPS if config.steps is None else int(config.steps)
    csv_path = config.csv_path or "example2.csv"
    svg_path = config.svg_path or _default_svg_path(csv_path)
    rho = cyclic_shift_state()
    partition = MemoryPartition(((0, 1), (2,)), ("B", "C"))
    grid = np.linspace(0.0, 1.0, steps)
    records = []
    violations = []
    for idx, a in enumerate(grid):
        ms = permuted_rotation_bases(float(a))
        report = optimal_bound(rho, partition, ms, config.q_variant)
        values = {"a": float(a)}
        values.update(_diff_values(report))
        records.append(ExperimentRecord(idx, 0, values))
        if not (report.LB2 > report.lb2 > report.LB1 > report.lb1):
            violations.append(float(a))
    columns = ("sample_index", "a") + _DIFF_COLUMNS
    _write_csv(csv_path,
               f"subcommand=example2 steps={steps} q_variant={config.q_variant}",
               columns,
               [(r.sample_index, *[r.values[c] for c in columns[1:]]) for r in records])
    _render_curves(
        svg_path, [r.values["a"] for r in records],
        {name: [r.values[name] for r in records]
         for name in ("d_LB2_lb1", "d_LB2_lb2", "d_LB1_lb2", "d_LB1_LB2")},
        "rotation amplitude a", "Bound differences across the rotation sweep")
    if violations:
        raise NumericError(
            f"bound ordering LB2 > lb2 > LB1 > lb1 violated at {len(violations)} "
            f"of {steps} grid points (first at a = {violations[0]:.4f}); "
            f"all rows were written to {csv_path}")
    return records


def run_figure3(config: Optional[RunConfig] = None) -> list[ExperimentRecord]:
    """Bound differences for seeded random three-qutrit states with freshly
    drawn random basis triples; write CSV and SVG.

    After writing all output, raises a numeric error if any sample had
    LB1 - lb1 < -1e-9 or LB2 - lb2 < -1e-9.
    """
    config = config or RunConfig("fig3")
    samples = DEFAULT_FIG3_SAMPLES if config.samples is None else int(config.samples)
    seed = DEFAULT_SEED if config.master_seed is None else int(config.master_seed)
    csv_path = config.csv_path or "figure3.csv"
    svg_path = config.svg_path or _default_svg_path(csv_path)
    dims = SystemDims(("A", "B", "C"), (3, 3, 3))
    partition = MemoryPartition(((0, 1), (2,)), ("B", "C"))
    records = []
    bad_lb1 = bad_lb2 = 0
    for i in range(samples):
        rho = sample_state(seed, i, dims)
        ms = sample_measurements(seed, i, 3, 3)
        report = optimal_bound(rho, partition, ms, config.q_variant)
        values = _diff_values(report)
        records.append(ExperimentRecord(i, seed, values))
        if values["d_LB1_lb1"] < -1e-9:
            bad_lb1 += 1
        if values["d_LB2_lb2"] < -1e-9:
            bad_lb2 += 1
    columns = ("sample_index",) + _DIFF_COLUMNS
    _write_csv(csv_path,
               f"subcommand=fig3 seed={seed} samples={samples} "
               f"q_variant={config.q_variant}",
               columns,
               [(r.sample_index, *[r.values[c] for c in columns[1:]]) for r in records])
    _render_sample_scatter(
        svg_path,
        {name: [r.values[name] for r in records]
         for name in ("d_LB1_lb1", "d_LB2_lb2", "d_LB1_lb2")},
        "Bound differences for random states and bases")
    if bad_lb1 or bad_lb2:
        raise NumericError(
            f"non-negativity violated: LB1 - lb1 < 0 on {bad_lb1} and "
            f"LB2 - lb2 < 0 on {bad_lb2} of {samples} samples; all rows were "
            f"written to {csv_path}")
    return records


def run_figure4(config: Optional[RunConfig] = None) -> list[ExperimentRecord]:
    """Coherence total versus its lower bound for seeded random two-qutrit
    states with the shared-vector basis triple; write CSV and SVG."""
    config = config or RunConfig("fig4")
    samples = DEFAULT_FIG4_SAMPLES if config.samples is None else int(config.samples)
    seed = DEFAULT_SEED if config.master_seed is None else int(config.master_seed)
    csv_path = config.csv_path or "figure4.csv"
    svg_path = config.svg_path or _default_svg_path(csv_path)
    ms = shared_vector_bases()
    dims = SystemDims(("A", "B"), (3, 3))
    partition = MemoryPartition(((0, 1, 2),), ("B",))
    records = []
    for i in range(samples):
        rho = sample_state(seed, i, dims)
        report = coherence_sum_bound(rho, partition, ms, config.q_variant)
        records.append(ExperimentRecord(i, seed, {
            "total": report.total,
            "bound": report.bound,
            "slack": report.total - report.bound,
        }))
    columns = ("sample_index", "total", "bound", "slack")
    _write_csv(csv_path,
               f"subcommand=fig4 seed={seed} samples={samples} "
               f"q_variant={config.q_variant}",
               columns,
               [(r.sample_index, *[r.values[c] for c in columns[1:]]) for r in records])
    _render_bound_scatter(
        svg_path,
        [r.values["bound"] for r in records],
        [r.values["total"] for r in records],
        "Coherence total vs lower bound")
    return records


def run_bound(config: RunConfig) -> BoundReport:
    """Evaluate the full bound report for user-supplied state, measurement,
    and partition files."""
    if not config.state_path or not config.measurements_path:
        raise ValidationError("bound: --state and --measurements files are required")
    if not config.partition_text:
        raise ValidationError("bound: --partition is required (e.g. \"0,1;2\")")
    rho = load_state(config.state_path)
    ms = _require_projective(load_measurements(config.measurements_path),
                             "measurements")
    partition = parse_partition(config.partition_text, rho)
    return optimal_bound(rho, partition, ms, config.q_variant)


def run_qkd(config: RunConfig) -> KeyRateReport:
    """Key-rate bounds for a user-supplied bipartite state and two basis pairs."""
    if not config.state_path or not config.alice_path or not config.bob_path:
        raise ValidationError("qkd: --state, --alice, and --bob files are required")
    rho = load_state(config.state_path)
    alice = _require_projective(load_measurements(config.alice_path), "alice")
    bob = _require_projective(load_measurements(config.bob_path), "bob")
    if len(alice) != 2 or len(bob) != 2:
        raise ValidationError(
            f"qkd: expected exactly 2 measurements per party, got "
            f"{len(alice)} and {len(bob)}")
    return key_rate_bounds(rho, (alice[0], alice[1]), (bob[0], bob[1]),
                           config.q_variant)


def run_coherence(config: RunConfig) -> CoherenceReport:
    """Coherence total and bound for a user-supplied state and measurement
    family; all measurements share the first non-measured subsystem as memory."""
    if not config.state_path or not config.measurements_path:
        raise ValidationError("coherence: --state and --measurements files are required")
    rho = load_state(config.state_path)
    ms = _require_projective(load_measurements(config.measurements_path),
                             "measurements")
    memories = [lb for lb in rho.dims.labels if lb != "A"]
    if not memories:
        raise ValidationError(
            f"coherence: state needs a memory subsystem besides 'A' "
            f"(labels: {rho.dims.labels})")
    partition = MemoryPartition((tuple(range(len(ms))),), (memories[0],))
    return coherence_sum_bound(rho, partition, ms, config.q_variant)
