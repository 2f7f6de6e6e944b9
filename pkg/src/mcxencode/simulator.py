"""Exact dense statevector oracle over SYSTEM + TARGET + FLAG.

State indexing follows the package-wide convention: qubit 0 is the most
significant bit, so amps.reshape(2^n, 2, 2) is indexed [system, target, flag].
Amplitudes are kept complex even though the encoder only ever produces real
states; a nonzero imaginary part is a phase bug and the checks here would
surface it. All reductions run in a fixed order, so results are bit-exact
deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .bitcore import BinaryVector, expand
from .circuit import CRy, Circuit, Gate, HadamardLayer, MCX, PhaseFlip, XGate
from .decomposer import Decomposition

NORM_TOL = 1e-12
PROB_TOL = 1e-10


@dataclass
class Statevector:
    """2^(n+2) complex amplitudes for n SYSTEM qubits plus TARGET and FLAG."""

    n: int
    amps: np.ndarray

    @classmethod
    def zero(cls, n: int) -> "Statevector":
        amps = np.zeros(1 << (n + 2), dtype=np.complex128)
        amps[0] = 1.0
        return cls(n, amps)

    @property
    def n_total(self) -> int:
        return self.n + 2

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amps, self.amps).real))


@dataclass
class PostSelection:
    """FLAG measurement statistics and the renormalized flagged branch."""

    flag_probability: float
    system_amplitudes: np.ndarray


def _apply_inplace(amps: np.ndarray, n: int, gate: Gate) -> None:
    view = amps.reshape(1 << n, 2, 2)
    if isinstance(gate, HadamardLayer):
        s = 1 / math.sqrt(2)
        for q in range(n):
            planes = amps.reshape(1 << q, 2, -1)
            top = planes[:, 0, :].copy()
            planes[:, 0, :] = (top + planes[:, 1, :]) * s
            planes[:, 1, :] = (top - planes[:, 1, :]) * s
    elif isinstance(gate, MCX):
        if len(gate.controls) != n:
            raise ValueError("control string length does not match SYSTEM size")
        sel = expand(gate.controls).to_bits().astype(bool)
        view[sel] = view[sel][:, ::-1, :]
    elif isinstance(gate, CRy):
        c = math.cos(gate.angle / 2)
        s = math.sin(gate.angle / 2)
        block = view[:, 1, :]
        f0 = block[:, 0].copy()
        block[:, 0] = c * f0 - s * block[:, 1]
        block[:, 1] = s * f0 + c * block[:, 1]
    elif isinstance(gate, PhaseFlip):
        if gate.condition == "flag_one":
            view[:, :, 1] *= -1
        elif gate.condition == "all_zero":
            amps[0] *= -1
        else:
            raise ValueError(f"unknown phase-flip condition {gate.condition!r}")
    elif isinstance(gate, XGate):
        if not 0 <= gate.x_qubit < n + 2:
            raise ValueError(f"qubit {gate.x_qubit} out of range")
        planes = amps.reshape(1 << gate.x_qubit, 2, -1)
        planes[:, [0, 1], :] = planes[:, [1, 0], :]
    else:
        raise TypeError(f"unknown gate {gate!r}")


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    """Apply one gate, returning a new state; unitarity is checked."""
    amps = state.amps.copy()
    _apply_inplace(amps, state.n, gate)
    out = Statevector(state.n, amps)
    if abs(out.norm() - 1.0) > NORM_TOL:
        raise RuntimeError(f"statevector norm drifted to {out.norm()!r}")
    return out


def run(circuit: Circuit) -> Statevector:
    """Execute the circuit from |0...0>."""
    state = Statevector.zero(circuit.n)
    for gate in circuit.gates:
        _apply_inplace(state.amps, state.n, gate)
    if abs(state.norm() - 1.0) > NORM_TOL:
        raise RuntimeError(f"statevector norm drifted to {state.norm()!r}")
    return state


def postselect_flag(state: Statevector) -> PostSelection:
    """Measurement statistics of FLAG with TARGET required disentangled at 0."""
    view = state.amps.reshape(1 << state.n, 2, 2)
    target_mass = float(np.sum(np.abs(view[:, 1, :]) ** 2))
    if target_mass > PROB_TOL:
        raise RuntimeError(
            f"TARGET register is not disentangled (residual mass {target_mass:.3e}); "
            "the encoder circuit is inconsistent"
        )
    flag_probability = float(np.sum(np.abs(view[:, :, 1]) ** 2))
    branch = view[:, 0, 1]
    if np.max(np.abs(branch.imag), initial=0.0) > PROB_TOL:
        raise RuntimeError("post-selected amplitudes are not real")
    norm = float(np.linalg.norm(branch.real))
    if norm == 0:
        raise ValueError("flagged branch has zero weight: nothing was encoded")
    return PostSelection(flag_probability, branch.real / norm)


def uniform_superposition(n: int) -> Statevector:
    state = Statevector.zero(n)
    _apply_inplace(state.amps, n, HadamardLayer())
    return state


def verify_W(b: BinaryVector, d: Decomposition | Iterable[str]) -> bool:
    """Check that d's MCX gates shift the uniform superposition |Psi_0> to
    |Psi_b>: amplitude 1/sqrt(N) exactly on |i>|b_i>|0>, zero elsewhere."""
    controls = d.controls if isinstance(d, Decomposition) else tuple(d)
    state = uniform_superposition(b.n)
    for c in controls:
        _apply_inplace(state.amps, b.n, MCX(c))
    size = 1 << b.n
    expected = np.zeros((size, 2, 2), dtype=np.complex128)
    expected[np.arange(size), b.to_bits(), 0] = 1 / math.sqrt(size)
    return bool(
        np.max(np.abs(state.amps.reshape(size, 2, 2) - expected)) <= NORM_TOL
    )


def fidelity(ps: PostSelection, v) -> float:
    """Squared overlap of the post-selected state with the normalized input."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.shape != ps.system_amplitudes.shape:
        raise ValueError("dimension mismatch between state and input vector")
    vn = arr / np.linalg.norm(arr)
    return float(np.dot(ps.system_amplitudes, vn) ** 2)
