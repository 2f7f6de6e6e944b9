"""Classical pre-processing: input vector -> angles -> signed L-bit matrix.

Each input entry is mapped to a rescaled angle theta_i = arcsin(v_i / max|v|)
/ (pi/2) in [-1, 1] and stored as a sign bit plus an (L-1)-bit magnitude,
truncated toward zero and clamped at 2^(L-1) - 1. Truncation (not rounding)
is what reproduces the worked-example matrix bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitcore import BinaryVector


@dataclass(frozen=True)
class EncodingMatrix:
    """N x L binary matrix; row i is the signed fixed-point expansion of
    theta_i (column 0 = sign, columns 1..L-1 = magnitude bits, MSB first)."""

    n: int
    L: int
    rows: np.ndarray  # uint8, shape (2^n, L)

    def __post_init__(self) -> None:
        if self.L < 2:
            raise ValueError(f"bit precision L must be >= 2, got {self.L}")
        if self.rows.shape != (1 << self.n, self.L):
            raise ValueError(
                f"rows shape {self.rows.shape} does not match (2^{self.n}, {self.L})"
            )

    def column(self, l: int) -> BinaryVector:
        """Column l as a packed bit vector of length 2^n."""
        return BinaryVector.from_bits(self.rows[:, l])

    def sign_bits(self) -> np.ndarray:
        return self.rows[:, 0].astype(np.int64)

    def magnitudes(self) -> np.ndarray:
        """Integer magnitudes m_i = sum_j B_{i,j} 2^(L-1-j), in [0, 2^(L-1))."""
        weights = 1 << np.arange(self.L - 2, -1, -1, dtype=np.int64)
        return self.rows[:, 1:].astype(np.int64) @ weights


def _as_input(v) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("input vector must be one-dimensional")
    size = arr.shape[0]
    n = size.bit_length() - 1
    if size < 2 or size != 1 << n:
        raise ValueError(f"input length must be a power of two >= 2, got {size}")
    return arr


def compute_angles(v) -> np.ndarray:
    """Rescaled angles theta_i = arcsin(v_i / max|v|) / (pi/2)."""
    arr = _as_input(v)
    vmax = np.max(np.abs(arr))
    if vmax == 0:
        raise ValueError("degenerate input: all entries are zero")
    return np.arcsin(arr / vmax) / (np.pi / 2)


def quantize(thetas, L: int) -> EncodingMatrix:
    """Signed L-bit expansion of the angles, truncated toward zero.

    B_{i,0} = 1 iff theta_i < 0 (exact zero gets sign bit 0); the magnitude is
    min(floor(|theta_i| * 2^(L-1)), 2^(L-1) - 1) so theta = +-1 clamps to the
    largest representable value.
    """
    if L < 2:
        raise ValueError(f"bit precision L must be >= 2, got {L}")
    arr = _as_input(thetas)
    if np.max(np.abs(arr)) > 1:
        raise ValueError("angles must lie in [-1, 1]")
    n = arr.shape[0].bit_length() - 1
    scale = 1 << (L - 1)
    mags = np.minimum(np.floor(np.abs(arr) * scale).astype(np.int64), scale - 1)
    rows = np.zeros((arr.shape[0], L), dtype=np.uint8)
    rows[:, 0] = arr < 0
    for j in range(1, L):
        rows[:, j] = (mags >> (L - 1 - j)) & 1
    return EncodingMatrix(n, L, rows)


def approx_sines(B: EncodingMatrix) -> np.ndarray:
    """Unnormalized signed amplitudes (-1)^sign * sin((pi/2) * m / 2^(L-1)).

    These are exactly the values the encoder circuit places on the flagged
    branch (up to the uniform 1/sqrt(N) factor)."""
    scale = 1 << (B.L - 1)
    mags = B.magnitudes()
    signs = np.where(B.sign_bits() == 1, -1.0, 1.0)
    return signs * np.sin(np.pi / 2 * mags / scale)


def reconstruct(B: EncodingMatrix) -> np.ndarray:
    """Normalized approximating vector encoded by B (unit 2-norm)."""
    w = approx_sines(B)
    norm = np.linalg.norm(w)
    if norm == 0:
        raise ValueError("all-zero encoding matrix: zero target state")
    return w / norm


def density_rho(v) -> float:
    """Data density rho = mean((v_i / max|v|)^2), the ideal success probability."""
    arr = _as_input(v)
    vmax = np.max(np.abs(arr))
    if vmax == 0:
        raise ValueError("degenerate input: all entries are zero")
    return float(np.mean((arr / vmax) ** 2))


def quantized_success_probability(B: EncodingMatrix) -> float:
    """Finite-L success probability mean(sin^2((pi/2) m_i / 2^(L-1))).

    This is what the simulator's flag probability must match; it converges to
    density_rho as L grows."""
    scale = 1 << (B.L - 1)
    mags = B.magnitudes()
    return float(np.mean(np.sin(np.pi / 2 * mags / scale) ** 2))
