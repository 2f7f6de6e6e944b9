import math

import numpy as np
import pytest

from mcxencode.circuit import (
    CRy,
    Circuit,
    HadamardLayer,
    MCX,
    PhaseFlip,
    XGate,
    amplification_rounds,
    build_core,
    build_full,
    depth,
    export_qasm,
    phi_angles,
)
from mcxencode.pathopt import build_path_matrix, edge_costs, identity_tour, solve_tsp
from mcxencode.preprocess import EncodingMatrix, compute_angles, quantize

EXAMPLE_V = np.array([15, 13, 10, -11, 12, -15, 5, 16]) / math.sqrt(1265)


def example_matrix():
    return quantize(compute_angles(EXAMPLE_V), 5)


def tour_for(B, mode="exact"):
    return solve_tsp(edge_costs(build_path_matrix(B)), mode=mode)


class TestPhiAngles:
    def test_five_bit_schedule(self):
        sched = phi_angles(5)
        assert sched.phi == (
            2 * math.pi,
            math.pi / 2,
            math.pi / 4,
            math.pi / 8,
            math.pi / 16,
        )

    def test_minimal_schedule(self):
        assert phi_angles(2).phi == (2 * math.pi, math.pi / 2)

    def test_padded_has_leading_zero(self):
        sched = phi_angles(5)
        assert sched.padded == (0.0,) + sched.phi
        assert len(sched.padded) == 6

    def test_strictly_decreasing_after_sign_angle(self):
        phi = phi_angles(8).phi
        assert all(a > b for a, b in zip(phi[1:], phi[2:]))

    def test_requires_two_bits(self):
        with pytest.raises(ValueError):
            phi_angles(1)


class TestBuildCore:
    def test_all_zero_matrix_has_no_mcx(self):
        B = EncodingMatrix(3, 5, np.zeros((8, 5), dtype=np.uint8))
        core = build_core(B, identity_tour(edge_costs(build_path_matrix(B))))
        kinds = [type(g) for g in core.gates]
        assert kinds[0] is HadamardLayer
        assert kinds.count(MCX) == 0
        assert kinds.count(CRy) == 5
        assert core.layer_mcx_counts == [0] * 6

    def test_worked_example_first_block(self):
        B = example_matrix()
        core = build_core(B, identity_tour(edge_costs(build_path_matrix(B))))
        # sign column 00010100 costs two gates, then the sign rotation 2*pi
        assert isinstance(core.gates[0], HadamardLayer)
        assert isinstance(core.gates[1], MCX) and isinstance(core.gates[2], MCX)
        assert isinstance(core.gates[3], CRy)
        assert core.gates[3].angle == 2 * math.pi
        assert core.layer_mcx_counts[0] == 2

    def test_angle_bound_to_visited_column(self):
        B = example_matrix()
        tour = tour_for(B)
        core = build_core(B, tour)
        sched = phi_angles(5).padded
        angles = [g.angle for g in core.gates if isinstance(g, CRy)]
        assert angles == [sched[tour.sigma[l + 1]] for l in range(5)]

    def test_single_row_blocks_are_single_cells(self):
        v = np.zeros(8)
        v[3] = 1.0
        B = quantize(compute_angles(v), 5)
        core = build_core(B, tour_for(B))
        for g in core.gates:
            if isinstance(g, MCX):
                assert "I" not in g.controls
        assert all(c <= 1 for c in core.layer_mcx_counts)

    def test_tour_shape_checked(self):
        B = example_matrix()
        other = quantize([0.5, -0.25], 3)
        with pytest.raises(ValueError):
            build_core(B, tour_for(other))


class TestAmplification:
    def test_round_rule(self):
        assert amplification_rounds(1.0) == 0
        assert amplification_rounds(0.25) == 1
        assert amplification_rounds(0.5738028623817931) == 0
        assert amplification_rounds(0.05) == 3

    def test_invalid_probability(self):
        with pytest.raises(ValueError):
            amplification_rounds(0.0)

    def test_no_rounds_returns_core_structure(self):
        B = example_matrix()  # p ~ 0.574 -> k = 0
        tour = tour_for(B)
        core = build_core(B, tour)
        full = build_full(B, tour)
        assert full.amplification_rounds == 0
        assert full.gates == core.gates
        assert depth(full) == depth(core)

    def test_rounds_add_reflections_and_unitaries(self):
        # p = 0.25 exactly: rows m = 8 (theta_hat = 1/2) and m = 0 at n = 1
        B = quantize([0.5, 0.0], 5)
        assert B.rows[0].tolist() == [0, 1, 0, 0, 0]
        tour = tour_for(B)
        core = build_core(B, tour)
        full = build_full(B, tour)
        assert full.amplification_rounds == 1
        assert depth(full) == 3 * depth(core) + 2
        flips = [g for g in full.gates if isinstance(g, PhaseFlip)]
        assert [f.condition for f in flips] == ["flag_one", "all_zero"]
        # the reflected segment undoes the core: rotations appear negated
        inv_angles = [
            g.angle
            for g in full.gates[depth(core) + 1 : 2 * depth(core) + 1]
            if isinstance(g, CRy)
        ]
        core_angles = [g.angle for g in core.gates if isinstance(g, CRy)]
        assert inv_angles == [-a for a in reversed(core_angles)]


class TestDepth:
    def test_all_zero_depth(self):
        B = EncodingMatrix(3, 5, np.zeros((8, 5), dtype=np.uint8))
        core = build_core(B, identity_tour(edge_costs(build_path_matrix(B))))
        assert depth(core) == 1 + 0 + 5

    def test_worked_example_identity_depth(self):
        B = example_matrix()
        P = build_path_matrix(B)
        costs = edge_costs(P)
        ident = identity_tour(costs)
        core = build_core(B, ident)
        assert depth(core) == 1 + ident.total_cost + 5
        assert core.mcx_count == ident.total_cost


class TestQasmExport:
    def test_empty_circuit_header_only(self):
        qasm = export_qasm(Circuit(n=1, L=2, gates=[], sigma=(0, 1, 2, 3)))
        assert qasm.splitlines() == [
            "OPENQASM 3.0;",
            'include "stdgates.inc";',
            "qubit[3] q;",
        ]

    def test_zero_control_conjugation(self):
        qasm = export_qasm(
            Circuit(n=3, L=2, gates=[MCX("I0I")], sigma=(0, 1, 2, 3))
        )
        body = qasm.splitlines()[3:]
        assert body == ["x q[1];", "ctrl @ x q[1], q[3];", "x q[1];"]

    def test_controlled_rotation_line(self):
        qasm = export_qasm(
            Circuit(n=2, L=2, gates=[CRy(math.pi / 2)], sigma=(0, 1, 2, 3))
        )
        assert qasm.splitlines()[3] == "ctrl @ ry(1.5707963267948966) q[2], q[3];"

    def test_multi_control_and_plain_x(self):
        qasm = export_qasm(
            Circuit(n=2, L=2, gates=[MCX("11"), MCX("II"), XGate(0)], sigma=(0, 1, 2, 3))
        )
        body = qasm.splitlines()[3:]
        assert body == ["ctrl(2) @ x q[0], q[1], q[2];", "x q[2];", "x q[0];"]

    def test_hadamard_layer_and_phase_flips(self):
        qasm = export_qasm(
            Circuit(
                n=2,
                L=2,
                gates=[HadamardLayer(), PhaseFlip("flag_one"), PhaseFlip("all_zero")],
                sigma=(0, 1, 2, 3),
            )
        )
        body = qasm.splitlines()[3:]
        assert body[:2] == ["h q[0];", "h q[1];"]
        assert body[2] == "z q[3];"
        assert body[3:7] == ["x q[0];", "x q[1];", "x q[2];", "x q[3];"]
        assert body[7] == "ctrl(3) @ z q[0], q[1], q[2], q[3];"

    def test_deterministic_output(self):
        B = example_matrix()
        core = build_core(B, tour_for(B))
        assert export_qasm(core) == export_qasm(core)
        assert export_qasm(core).endswith("\n")
