"""Gate-level IR and encoder assembly.

Registers: SYSTEM qubits 0..n-1, TARGET qubit n, FLAG qubit n+1. The core
circuit is a Hadamard layer followed by alternating MCX blocks (the column
shift operators, targeting TARGET) and flag rotations CRy(angle, TARGET->FLAG),
closed by a final disentangling MCX block. Each rotation angle is bound to
the *visited column index*, not the step index, so every column ordering
prepares the same state (the per-branch angle sums commute).

The full circuit wraps the core encoder U in standard amplitude-amplification
rounds Q = U * S0 * Udag * S_flag (the unobservable global minus sign of the
textbook operator is dropped), with the round count picked by the usual
round(pi / (4 arcsin sqrt(p)) - 1/2) rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .decomposer import decompose
from .pathopt import Tour, build_path_matrix, deltas
from .preprocess import EncodingMatrix, quantized_success_probability


@dataclass(frozen=True)
class HadamardLayer:
    """H on every SYSTEM qubit."""


@dataclass(frozen=True)
class MCX:
    """Multi-controlled X on TARGET, controls given by a SYSTEM control string."""

    controls: str


@dataclass(frozen=True)
class CRy:
    """R_y(angle) on FLAG, controlled on TARGET = 1."""

    angle: float


@dataclass(frozen=True)
class PhaseFlip:
    """Conditional phase of -1: condition 'flag_one' or 'all_zero'."""

    condition: str


@dataclass(frozen=True)
class XGate:
    x_qubit: int


Gate = Union[HadamardLayer, MCX, CRy, PhaseFlip, XGate]


def target_qubit(n: int) -> int:
    return n


def flag_qubit(n: int) -> int:
    return n + 1


@dataclass(frozen=True)
class AngleSchedule:
    """Rotation angles per precision level: phi_0 = 2*pi (the sign flip),
    phi_l = pi / 2^l after that; padded has a leading 0 for the zero column."""

    phi: tuple[float, ...]
    padded: tuple[float, ...]


def phi_angles(L: int) -> AngleSchedule:
    if L < 2:
        raise ValueError(f"bit precision L must be >= 2, got {L}")
    phi = (2 * math.pi,) + tuple(math.pi / (1 << l) for l in range(1, L))
    return AngleSchedule(phi, (0.0,) + phi)


@dataclass
class Circuit:
    n: int
    L: int
    gates: list[Gate]
    sigma: tuple[int, ...]
    layer_mcx_counts: list[int] = field(default_factory=list)
    p_success: float = 0.0
    amplification_rounds: int = 0

    @property
    def mcx_count(self) -> int:
        return sum(isinstance(g, MCX) for g in self.gates)


def build_core(B: EncodingMatrix, tour: Tour) -> Circuit:
    """Assemble the bare probabilistic encoder along the given column tour."""
    if len(tour.sigma) != B.L + 2:
        raise ValueError("tour length does not match the encoding matrix")
    P = build_path_matrix(B)
    diffs = deltas(P, tour)
    schedule = phi_angles(B.L)
    gates: list[Gate] = [HadamardLayer()]
    counts = []
    for l in range(B.L):
        block = decompose(diffs[l]).controls
        gates.extend(MCX(c) for c in block)
        gates.append(CRy(schedule.padded[tour.sigma[l + 1]]))
        counts.append(len(block))
    final = decompose(diffs[B.L]).controls
    gates.extend(MCX(c) for c in final)
    counts.append(len(final))
    return Circuit(
        n=B.n,
        L=B.L,
        gates=gates,
        sigma=tour.sigma,
        layer_mcx_counts=counts,
        p_success=quantized_success_probability(B),
    )


def amplification_rounds(p: float) -> int:
    """Round count round(pi / (4 arcsin sqrt(p)) - 1/2), half-up, floored at 0."""
    if not 0 < p <= 1:
        raise ValueError(f"success probability must be in (0, 1], got {p}")
    if p == 1:
        return 0
    theta = math.asin(math.sqrt(p))
    return max(0, math.floor(math.pi / (4 * theta) - 0.5 + 0.5))


def _dagger(gates: list[Gate]) -> list[Gate]:
    # every encoder gate is self-inverse except the rotations
    return [CRy(-g.angle) if isinstance(g, CRy) else g for g in reversed(gates)]


def build_full(B: EncodingMatrix, tour: Tour) -> Circuit:
    """Core encoder plus amplitude-amplification rounds boosting the flag."""
    core = build_core(B, tour)
    p = core.p_success
    if p <= 0:
        raise ValueError("zero success probability: nothing to amplify")
    k = amplification_rounds(p)
    if k == 0:
        return core
    gates = list(core.gates)
    inverse = _dagger(core.gates)
    for _ in range(k):
        gates.append(PhaseFlip("flag_one"))
        gates.extend(inverse)
        gates.append(PhaseFlip("all_zero"))
        gates.extend(core.gates)
    return Circuit(
        n=core.n,
        L=core.L,
        gates=gates,
        sigma=core.sigma,
        layer_mcx_counts=core.layer_mcx_counts,
        p_success=p,
        amplification_rounds=k,
    )


def depth(circuit: Circuit) -> int:
    """Sequential gate count: the Hadamard layer, every MCX, every CRy and
    every amplification reflection count 1. All encoder gates share the
    TARGET/FLAG qubits, so nothing can run concurrently and gate count is
    depth."""
    return len(circuit.gates)


def export_qasm(circuit: Circuit) -> str:
    """OpenQASM 3 text. Zero controls are realized by conjugating the control
    with x; angles are printed with 17 significant digits."""
    n = circuit.n
    total = n + 2
    tgt = target_qubit(n)
    flg = flag_qubit(n)
    lines = [
        "OPENQASM 3.0;",
        'include "stdgates.inc";',
        f"qubit[{total}] q;",
    ]
    for gate in circuit.gates:
        if isinstance(gate, HadamardLayer):
            lines.extend(f"h q[{q}];" for q in range(n))
        elif isinstance(gate, MCX):
            zeros = [q for q, sym in enumerate(gate.controls) if sym == "0"]
            ctrls = [q for q, sym in enumerate(gate.controls) if sym != "I"]
            lines.extend(f"x q[{q}];" for q in zeros)
            if not ctrls:
                lines.append(f"x q[{tgt}];")
            else:
                mod = "ctrl @" if len(ctrls) == 1 else f"ctrl({len(ctrls)}) @"
                args = ", ".join(f"q[{q}]" for q in ctrls + [tgt])
                lines.append(f"{mod} x {args};")
            lines.extend(f"x q[{q}];" for q in zeros)
        elif isinstance(gate, CRy):
            lines.append(f"ctrl @ ry({gate.angle:.17g}) q[{tgt}], q[{flg}];")
        elif isinstance(gate, PhaseFlip):
            if gate.condition == "flag_one":
                lines.append(f"z q[{flg}];")
            elif gate.condition == "all_zero":
                lines.extend(f"x q[{q}];" for q in range(total))
                args = ", ".join(f"q[{q}]" for q in range(total))
                lines.append(f"ctrl({total - 1}) @ z {args};")
                lines.extend(f"x q[{q}];" for q in range(total))
            else:
                raise ValueError(f"unknown phase-flip condition {gate.condition!r}")
        elif isinstance(gate, XGate):
            lines.append(f"x q[{gate.x_qubit}];")
        else:
            raise TypeError(f"unknown gate {gate!r}")
    return "\n".join(lines) + "\n"
