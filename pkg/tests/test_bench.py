import json
import math

import numpy as np
import pytest

from mcxencode.bench import (
    CSV_COLUMNS,
    BenchRecord,
    InputSpec,
    generate,
    run_pipeline,
    sweep,
    to_csv,
)


class TestGenerate:
    def test_sin_grid_is_endpoint_inclusive(self):
        v = generate(InputSpec("sin", 3))
        expected = [math.sin(2 * math.pi * k / 7) for k in range(8)]
        assert np.allclose(v, expected, atol=1e-15)

    def test_cos_hits_endpoints_exactly(self):
        v = generate(InputSpec("cos", 4))
        assert v[0] == 1.0 and v[-1] == pytest.approx(1.0)

    def test_gaussian_shape(self):
        v = generate(InputSpec("gaussian", 5))
        x = np.linspace(-3, 3, 32)
        assert np.all(v > 0)
        assert np.argmax(v) == np.argmin(np.abs(x))

    def test_ricker_negative_lobes(self):
        v = generate(InputSpec("ricker", 5))
        assert v.min() < 0 < v.max()
        assert abs(v).max() == v.max()  # peak at the center

    def test_random_normal_deterministic_and_unit(self):
        a = generate(InputSpec("random_normal", 6, seed=123))
        b = generate(InputSpec("random_normal", 6, seed=123))
        assert np.array_equal(a, b)
        assert np.linalg.norm(a) == pytest.approx(1.0)
        c = generate(InputSpec("random_normal", 6, seed=124))
        assert not np.array_equal(a, c)

    def test_file_inputs(self, tmp_path):
        lines = tmp_path / "v.txt"
        lines.write_text("1.0\n-0.5\n0.25\n0.125\n")
        v = generate(InputSpec("file", 2, path=str(lines)))
        assert v.tolist() == [1.0, -0.5, 0.25, 0.125]
        jsn = tmp_path / "v.json"
        jsn.write_text("[1, 2, 3, 4]")
        assert generate(InputSpec("file", 2, path=str(jsn))).tolist() == [1, 2, 3, 4]

    def test_file_errors(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("1.0\nnope\n")
        with pytest.raises(ValueError):
            generate(InputSpec("file", 1, path=str(bad)))
        short = tmp_path / "short.txt"
        short.write_text("1.0\n2.0\n")
        with pytest.raises(ValueError, match="expected 8"):
            generate(InputSpec("file", 3, path=str(short)))

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            InputSpec("triangle", 3)
        with pytest.raises(ValueError):
            InputSpec("file", 3)
        with pytest.raises(ValueError):
            InputSpec("sin", 0)


class TestRunPipeline:
    def test_worked_example_equivalent(self, tmp_path):
        v = np.array([15, 13, 10, -11, 12, -15, 5, 16]) / math.sqrt(1265)
        path = tmp_path / "v.json"
        path.write_text(json.dumps(v.tolist()))
        rec = run_pipeline(InputSpec("file", 3, path=str(path)), L=5)
        assert rec.p_success == pytest.approx(0.5738028623817931, abs=1e-9)
        assert rec.infidelity < 0.01
        assert rec.rho == pytest.approx(1265 / 2048)
        assert rec.attempts_estimate == pytest.approx(1 / rec.p_success)
        assert rec.depth_full >= rec.depth_core
        assert rec.tsp_mode == "exact"
        assert rec.depth_core == 1 + rec.mcx_total + 5

    def test_simulation_can_be_disabled(self):
        rec = run_pipeline(InputSpec("sin", 4), L=4, simulate=False)
        assert rec.infidelity is None
        assert rec.wall_ms_simulate is None
        assert rec.mcx_total > 0

    def test_structured_attempts_stay_small(self):
        for kind in ("sin", "cos"):
            rec = run_pipeline(InputSpec(kind, 5), L=5)
            assert rec.attempts_estimate < 5
            assert rec.infidelity < 0.01

    def test_identity_order_mode(self):
        rec = run_pipeline(InputSpec("sin", 4), L=5, order_mode="identity")
        assert rec.tsp_mode == "identity"


class TestSweep:
    def test_single_cell_rows(self):
        records = sweep(["sin"], [4], L=4, repetitions=1)
        assert len(records) == 1
        text = to_csv(records)
        lines = text.strip().split("\n")
        # header + one data row + one aggregate (mean) row
        assert len(lines) == 3
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[2].split(",")[3] == "mean"

    def test_deterministic_csv_bytes(self):
        # wall-clock columns are inherently jittery; everything else must be
        # byte-identical run to run
        def strip_timings(text):
            cut = CSV_COLUMNS.index("wall_ms_decompose")
            return [",".join(line.split(",")[:cut]) for line in text.split("\n")]

        r1 = to_csv(sweep(["random_normal"], [4, 5], L=4, repetitions=2))
        r2 = to_csv(sweep(["random_normal"], [4, 5], L=4, repetitions=2))
        assert strip_timings(r1) == strip_timings(r2)

    def test_row_order_and_aggregates(self):
        records = sweep(["sin", "gaussian"], [4, 5], L=4, repetitions=2)
        keys = [(r.input_kind, r.n) for r in records]
        assert keys == [
            ("gaussian", 4),
            ("gaussian", 4),
            ("gaussian", 5),
            ("gaussian", 5),
            ("sin", 4),
            ("sin", 4),
            ("sin", 5),
            ("sin", 5),
        ]
        text = to_csv(records)
        lines = text.strip().split("\n")
        assert len(lines) == 1 + 8 + 8  # header, data, mean+stddev per cell

    def test_seeds_are_reproducible_per_cell(self):
        recs = sweep(["random_normal"], [4], L=4, repetitions=2, base_seed=7)
        assert [r.seed for r in recs] == [7 + 4000, 7 + 4001]
        lone = run_pipeline(InputSpec("random_normal", 4, seed=7 + 4000), L=4)
        assert lone.p_success == recs[0].p_success


def test_csv_columns_match_record_fields():
    assert CSV_COLUMNS[:4] == ["input_kind", "n", "L", "seed"]
    assert CSV_COLUMNS[-3:] == [
        "wall_ms_decompose",
        "wall_ms_tsp",
        "wall_ms_simulate",
    ]
    assert "attempts_estimate" in CSV_COLUMNS and "tsp_mode" in CSV_COLUMNS
