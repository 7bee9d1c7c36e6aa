"""Harness: bundled instances, seeded sweeps, file loading, CSV/SVG output."""
from __future__ import annotations

import json
import math

import numpy as np
import pytest

from eur.errors import NumericError, ValidationError
from eur.harness import (
    RunConfig,
    cyclic_shift_state,
    ghz_qutrit_state,
    load_measurements,
    load_state,
    parse_partition,
    permuted_rotation_bases,
    qubit_mub_triple,
    qutrit_mub_triple,
    rotation_and_fourier_bases,
    run_bound,
    run_coherence,
    run_example1,
    run_example2,
    run_figure3,
    run_figure4,
    run_qkd,
    sample_measurements,
    sample_state,
    shared_vector_bases,
)
from eur.measurement import measurement_to_json, overlap_matrix
from eur.qstate import SystemDims, state_to_json, von_neumann_entropy


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# ")
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return lines[0], header, rows


class TestRunConfig:
    def test_amplitude_range(self):
        with pytest.raises(ValidationError, match="a:"):
            RunConfig(subcommand="example1", a=1.5)

    def test_phase_finite(self):
        with pytest.raises(ValidationError, match="phi"):
            RunConfig(subcommand="example1", phi=math.inf)

    def test_positive_counts(self):
        with pytest.raises(ValidationError, match="steps"):
            RunConfig(subcommand="example2", steps=0)
        with pytest.raises(ValidationError, match="samples"):
            RunConfig(subcommand="fig3", samples=-3)

    def test_seed_nonnegative(self):
        with pytest.raises(ValidationError, match="seed"):
            RunConfig(subcommand="fig3", master_seed=-1)

    def test_variant_name(self):
        with pytest.raises(ValidationError, match="q-variant"):
            RunConfig(subcommand="example1", q_variant="best")


class TestBundledInstances:
    def test_ghz_state(self):
        rho = ghz_qutrit_state()
        assert rho.dims.labels == ("A", "B", "C")
        assert abs(np.trace(rho.matrix) - 1.0) < 1e-12
        purity = float(np.real(np.trace(rho.matrix @ rho.matrix)))
        assert abs(purity - 1.0) < 1e-12

    def test_cyclic_shift_state(self):
        rho = cyclic_shift_state()
        mat = rho.matrix
        idx = [0 * 9 + 1 * 3 + 2, 1 * 9 + 2 * 3 + 0, 2 * 9 + 0 * 3 + 1]
        for i in idx:
            assert abs(mat[i, i] - 1.0 / 3) < 1e-12
        assert abs(np.trace(mat) - 1.0) < 1e-12

    def test_basis_families_are_orthonormal(self):
        for family in (rotation_and_fourier_bases(), permuted_rotation_bases(0.3),
                       shared_vector_bases(), qubit_mub_triple(),
                       qutrit_mub_triple()):
            for m in family:
                gram = m.vectors.conj() @ m.vectors.T
                assert np.abs(gram - np.eye(m.dim)).max() < 1e-10

    def test_rotation_amplitude_enters_first_basis(self):
        m_half = rotation_and_fourier_bases(0.5)[0]
        assert abs(abs(m_half.vectors[0, 0]) ** 2 - 0.5) < 1e-12

    def test_shared_vector_family_has_unit_overlap_pair(self):
        m1, m2, _ = shared_vector_bases()
        assert abs(overlap_matrix(m1, m2).c_max - 1.0) < 1e-12


class TestSampling:
    def test_state_substreams(self):
        dims = SystemDims(("A", "B"), (3, 3))
        one = sample_state(1234, 0, dims)
        same = sample_state(1234, 0, dims)
        other = sample_state(1234, 1, dims)
        assert one.matrix.tobytes() == same.matrix.tobytes()
        assert np.abs(one.matrix - other.matrix).max() > 1e-6

    def test_measurement_substreams_avoid_state_stream(self):
        ms = sample_measurements(1234, 0, 3, 3)
        again = sample_measurements(1234, 0, 3, 3)
        assert len(ms) == 3
        for a, b in zip(ms, again):
            assert a.vectors.tobytes() == b.vectors.tobytes()
        assert ms[0].vectors.tobytes() != ms[1].vectors.tobytes()


class TestPartitionParsing:
    def test_basic_grouping(self):
        part = parse_partition("0,1;2", ghz_qutrit_state())
        assert part.groups == ((0, 1), (2,))
        assert part.memory_labels == ("B", "C")

    def test_single_group_uses_first_memory(self):
        part = parse_partition("0,1,2", ghz_qutrit_state())
        assert part.groups == ((0, 1, 2),)
        assert part.memory_labels == ("B",)

    def test_non_integer_rejected(self):
        with pytest.raises(ValidationError):
            parse_partition("0,x;2", ghz_qutrit_state())

    def test_duplicate_index_rejected(self):
        with pytest.raises(ValidationError):
            parse_partition("0,0;1", ghz_qutrit_state())

    def test_too_many_groups_rejected(self):
        with pytest.raises(ValidationError):
            parse_partition("0;1;2", ghz_qutrit_state().relabel(("A", "B", "C")))
        # only two non-measured subsystems exist, so three groups cannot map

    def test_empty_group_rejected(self):
        with pytest.raises(ValidationError):
            parse_partition("0,1;;2", ghz_qutrit_state())


class TestFileLoading:
    def test_state_round_trip(self, tmp_path):
        rho = ghz_qutrit_state()
        path = tmp_path / "state.json"
        path.write_text(json.dumps(state_to_json(rho)))
        back = load_state(str(path))
        assert back.dims.labels == rho.dims.labels
        assert np.abs(back.matrix - rho.matrix).max() < 1e-12

    def test_measurements_accept_bare_array_and_wrapper(self, tmp_path):
        ms = rotation_and_fourier_bases()
        objs = [measurement_to_json(m) for m in ms]
        bare = tmp_path / "bare.json"
        bare.write_text(json.dumps(objs))
        wrapped = tmp_path / "wrapped.json"
        wrapped.write_text(json.dumps({"measurements": objs}))
        assert len(load_measurements(str(bare))) == 3
        assert len(load_measurements(str(wrapped))) == 3

    def test_missing_file_reports_path(self, tmp_path):
        with pytest.raises(ValidationError, match="no-such"):
            load_state(str(tmp_path / "no-such.json"))

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError):
            load_state(str(path))


class TestExample1:
    def test_report_values_are_stable(self):
        diff, report = run_example1()
        assert abs(diff.d_LB1_lb1 - 0.03659449809846915) < 1e-12
        assert abs(report.lhs - 3.3608563061862866) < 1e-12
        assert abs(report.b - 0.4301977542943074) < 1e-10
        assert report.optimal == max(report.LB1, report.LB2)

    def test_degenerate_amplitude_regression(self):
        # a = 1 collapses the first basis to a permuted standard basis; every
        # value must stay finite.
        diff, report = run_example1(RunConfig(subcommand="example1", a=1.0))
        for value in (diff.d_LB1_lb1, diff.d_LB1_lb2, diff.d_LB2_lb1,
                      diff.d_LB2_lb2, diff.d_LB1_LB2, report.lhs, report.b,
                      report.optimal):
            assert math.isfinite(value)

    def test_variant_flag_changes_pair_values(self):
        _, mu = run_example1(RunConfig(subcommand="example1", q_variant="mu"))
        _, tilde = run_example1(RunConfig(subcommand="example1"))
        assert tilde.LB1 > mu.LB1


class TestExample2:
    def test_honest_ordering_failure_still_writes_outputs(self, tmp_path):
        csv = tmp_path / "e2.csv"
        cfg = RunConfig(subcommand="example2", steps=21, csv_path=str(csv))
        with pytest.raises(NumericError, match="ordering"):
            run_example2(cfg)
        comment, header, rows = read_csv(csv)
        assert "steps=21" in comment
        assert header == ["sample_index", "a", "d_LB1_lb1", "d_LB1_lb2",
                          "d_LB2_lb1", "d_LB2_lb2", "d_LB1_LB2"]
        assert len(rows) == 21
        assert csv.with_suffix(".svg").exists()

    def test_endpoints_finite(self, tmp_path):
        csv = tmp_path / "e2.csv"
        cfg = RunConfig(subcommand="example2", steps=5, csv_path=str(csv))
        with pytest.raises(NumericError):
            run_example2(cfg)
        _, header, rows = read_csv(csv)
        for row in (rows[0], rows[-1]):
            for cell in row[1:]:
                assert math.isfinite(float(cell))

    def test_deterministic_csv(self, tmp_path):
        first = tmp_path / "one.csv"
        second = tmp_path / "two.csv"
        for path in (first, second):
            with pytest.raises(NumericError):
                run_example2(RunConfig(subcommand="example2", steps=11,
                                       csv_path=str(path)))
        assert first.read_bytes() == second.read_bytes()


class TestFigure3:
    def test_honest_nonnegativity_failure_still_writes_outputs(self, tmp_path):
        csv = tmp_path / "f3.csv"
        cfg = RunConfig(subcommand="fig3", samples=12, master_seed=7,
                        csv_path=str(csv))
        with pytest.raises(NumericError, match="LB2 - lb2"):
            run_figure3(cfg)
        comment, header, rows = read_csv(csv)
        assert "seed=7" in comment
        assert len(rows) == 12
        assert header[0] == "sample_index"
        assert csv.with_suffix(".svg").exists()

    def test_first_difference_is_never_negative(self, tmp_path):
        csv = tmp_path / "f3.csv"
        try:
            run_figure3(RunConfig(subcommand="fig3", samples=25, master_seed=11,
                                  csv_path=str(csv)))
        except NumericError:
            pass
        _, header, rows = read_csv(csv)
        col = header.index("d_LB1_lb1")
        assert all(float(row[col]) >= -1e-9 for row in rows)


class TestFigure4:
    def test_runs_clean_and_writes_outputs(self, tmp_path):
        csv = tmp_path / "f4.csv"
        records = run_figure4(RunConfig(subcommand="fig4", samples=40,
                                        master_seed=1234, csv_path=str(csv)))
        assert len(records) == 40
        comment, header, rows = read_csv(csv)
        assert header == ["sample_index", "total", "bound", "slack"]
        assert len(rows) == 40
        for row in rows:
            total, bound, slack = map(float, row[1:])
            assert slack >= -1e-9
            assert abs(slack - (total - bound)) < 1e-12
        assert csv.with_suffix(".svg").exists()

    def test_svg_bytes_deterministic(self, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            run_figure4(RunConfig(subcommand="fig4", samples=15,
                                  master_seed=5, csv_path=str(path)))
        assert paths[0].with_suffix(".svg").read_bytes() == \
            paths[1].with_suffix(".svg").read_bytes()

    def test_explicit_svg_path(self, tmp_path):
        csv = tmp_path / "f4.csv"
        svg = tmp_path / "custom-name.svg"
        run_figure4(RunConfig(subcommand="fig4", samples=5, master_seed=3,
                              csv_path=str(csv), svg_path=str(svg)))
        assert svg.exists()
        assert not csv.with_suffix(".svg").exists()


class TestFileDrivenRuns:
    @pytest.fixture()
    def example_files(self, tmp_path):
        state = tmp_path / "state.json"
        state.write_text(json.dumps(state_to_json(ghz_qutrit_state())))
        meas = tmp_path / "meas.json"
        meas.write_text(json.dumps(
            {"measurements": [measurement_to_json(m)
                              for m in rotation_and_fourier_bases()]}))
        return state, meas

    def test_bound_matches_example1(self, example_files):
        state, meas = example_files
        report = run_bound(RunConfig(subcommand="bound", state_path=str(state),
                                     measurements_path=str(meas),
                                     partition_text="0,1;2"))
        _, want = run_example1()
        assert report.lhs == want.lhs
        assert report.LB1 == want.LB1
        assert report.LB2 == want.LB2
        assert report.optimal == want.optimal

    def test_coherence_uses_first_memory(self, example_files):
        state, meas = example_files
        coh = run_coherence(RunConfig(subcommand="coherence",
                                      state_path=str(state),
                                      measurements_path=str(meas)))
        assert set(coh.per_measurement) == {0, 1, 2}
        assert coh.total >= coh.bound - 1e-9

    def test_qkd_round_trip(self, tmp_path):
        z, x, _ = qubit_mub_triple()
        psi = np.zeros(4)
        psi[0] = psi[3] = 1 / math.sqrt(2)
        from conftest import pure_state
        state = tmp_path / "bell.json"
        state.write_text(json.dumps(
            state_to_json(pure_state(psi, ("A", "B"), (2, 2)))))
        pair = tmp_path / "zx.json"
        pair.write_text(json.dumps(
            {"measurements": [measurement_to_json(z), measurement_to_json(x)]}))
        rates = run_qkd(RunConfig(subcommand="qkd", state_path=str(state),
                                  alice_path=str(pair), bob_path=str(pair)))
        assert abs(rates.k_base - 1.0) < 1e-9

    def test_qkd_requires_two_bases_per_party(self, tmp_path, example_files):
        state, meas = example_files
        with pytest.raises(ValidationError, match="exactly 2"):
            run_qkd(RunConfig(subcommand="qkd", state_path=str(state),
                              alice_path=str(meas), bob_path=str(meas)))

    def test_povm_file_rejected_for_projective_paths(self, tmp_path,
                                                     example_files):
        state, _ = example_files
        from conftest import random_povm
        rng = np.random.default_rng(1)
        povms = [random_povm(rng, 3, 3) for _ in range(2)]
        path = tmp_path / "povms.json"
        path.write_text(json.dumps(
            {"measurements": [measurement_to_json(x) for x in povms]}))
        with pytest.raises(ValidationError, match="projective"):
            run_bound(RunConfig(subcommand="bound", state_path=str(state),
                                measurements_path=str(path),
                                partition_text="0;1"))
