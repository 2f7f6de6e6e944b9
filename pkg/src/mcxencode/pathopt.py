"""Encoding-order optimization: pad the column path, price edges, solve the TSP.

The L matrix columns plus a leading and trailing all-zero column form a path;
any permutation of the middle columns encodes the same state, so the encoder
is free to pick the order whose consecutive XOR differences are cheapest to
realize in MCX gates. Exact dynamic programming is used up to 10 middle
columns (the state space is tiny), nearest-neighbor plus 2-opt beyond that.
Edge costs need not satisfy the triangle inequality and the solver never
assumes it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bitcore import BinaryVector
from .decomposer import cost
from .preprocess import EncodingMatrix

EXACT_LIMIT = 10  # Held-Karp up to this many middle columns


@dataclass(frozen=True)
class PathMatrix:
    """Columns of the encoding matrix padded with all-zero end columns."""

    columns: tuple[BinaryVector, ...]

    @property
    def L(self) -> int:
        return len(self.columns) - 2

    def __post_init__(self) -> None:
        if len(self.columns) < 3:
            raise ValueError("path matrix needs at least one middle column")
        if self.columns[0] or self.columns[-1]:
            raise ValueError("end columns of the path matrix must be zero")


@dataclass(frozen=True)
class Tour:
    """Permutation of path-matrix columns with pinned endpoints."""

    sigma: tuple[int, ...]
    total_cost: int

    def __post_init__(self) -> None:
        last = len(self.sigma) - 1
        if self.sigma[0] != 0 or self.sigma[last] != last:
            raise ValueError("tour endpoints must stay fixed at 0 and L+1")
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ValueError("tour is not a permutation")


def build_path_matrix(B: EncodingMatrix) -> PathMatrix:
    zero = BinaryVector.zeros(B.n)
    cols = [zero] + [B.column(l) for l in range(B.L)] + [zero]
    return PathMatrix(tuple(cols))


def edge_costs(
    P: PathMatrix, cost_fn: Callable[[BinaryVector], int] | None = None
) -> np.ndarray:
    """Symmetric matrix of MCX counts for every pairwise column difference.

    cost_fn prices one difference vector; the default is the unit-count
    decomposition size. (Weighted MCX cost models plug in here.)
    """
    if cost_fn is None:
        cost_fn = cost
    m = len(P.columns)
    mat = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(i + 1, m):
            mat[i, j] = mat[j, i] = cost_fn(P.columns[i] ^ P.columns[j])
    return mat


def _check_costs(costs: np.ndarray) -> int:
    costs = np.asarray(costs)
    if costs.ndim != 2 or costs.shape[0] != costs.shape[1] or costs.shape[0] < 3:
        raise ValueError("cost matrix must be square of size L+2 >= 3")
    if (costs < 0).any():
        raise ValueError("cost matrix must be non-negative")
    if not np.array_equal(costs, costs.T):
        raise ValueError("cost matrix must be symmetric")
    return costs.shape[0] - 2


def _held_karp(costs: np.ndarray, L: int) -> Tour:
    # h[S][cur] = cheapest completion from cur through middle set S, then to
    # the end column; cur index 0 is the start column, i in 1..L is column i.
    end = L + 1
    full = 1 << L
    h = [[0] * (L + 1) for _ in range(full)]
    for cur in range(L + 1):
        h[0][cur] = int(costs[cur][end])
    for S in range(1, full):
        members = [k + 1 for k in range(L) if S >> k & 1]
        for cur in range(L + 1):
            if cur >= 1 and S >> (cur - 1) & 1:
                continue
            h[S][cur] = min(
                int(costs[cur][k]) + h[S & ~(1 << (k - 1))][k] for k in members
            )
    # lexicographically smallest optimal tour: commit the smallest next
    # column that still achieves the optimal completion cost
    sigma = [0]
    S = full - 1
    cur = 0
    while S:
        for k in range(1, L + 1):
            if not S >> (k - 1) & 1:
                continue
            rest = S & ~(1 << (k - 1))
            if int(costs[cur][k]) + h[rest][k] == h[S][cur]:
                sigma.append(k)
                cur = k
                S = rest
                break
    sigma.append(end)
    return Tour(tuple(sigma), h[full - 1][0])


def _tour_cost(costs: np.ndarray, sigma: Sequence[int]) -> int:
    return int(sum(costs[sigma[j]][sigma[j + 1]] for j in range(len(sigma) - 1)))


def _nearest_neighbor_2opt(costs: np.ndarray, L: int) -> Tour:
    end = L + 1
    remaining = list(range(1, L + 1))
    sigma = [0]
    cur = 0
    while remaining:
        nxt = min(remaining, key=lambda k: (int(costs[cur][k]), k))
        sigma.append(nxt)
        remaining.remove(nxt)
        cur = nxt
    sigma.append(end)
    improved = True
    while improved:
        improved = False
        for i in range(1, L):
            for j in range(i + 1, L + 1):
                delta = (
                    costs[sigma[i - 1]][sigma[j]]
                    + costs[sigma[i]][sigma[j + 1]]
                    - costs[sigma[i - 1]][sigma[i]]
                    - costs[sigma[j]][sigma[j + 1]]
                )
                if delta < 0:
                    sigma[i : j + 1] = reversed(sigma[i : j + 1])
                    improved = True
    best = Tour(tuple(sigma), _tour_cost(costs, sigma))
    ident = identity_tour(costs)
    return ident if ident.total_cost < best.total_cost else best


def identity_tour(costs: np.ndarray) -> Tour:
    """Left-to-right column order (the linear-path circuit)."""
    L = _check_costs(costs)
    sigma = tuple(range(L + 2))
    return Tour(sigma, _tour_cost(costs, sigma))


def solve_tsp(costs: np.ndarray, mode: str = "auto") -> Tour:
    """Cheapest fixed-endpoint ordering of the middle columns.

    mode 'auto' picks the exact Held-Karp solver for L <= 10 and the
    nearest-neighbor + 2-opt heuristic above that; 'exact', 'heuristic' and
    'identity' force the respective behavior. Ties in the exact solver break
    toward the lexicographically smallest permutation.
    """
    L = _check_costs(costs)
    costs = np.asarray(costs)
    if mode == "auto":
        mode = "exact" if L <= EXACT_LIMIT else "heuristic"
    if mode == "identity":
        return identity_tour(costs)
    if mode == "exact":
        return _held_karp(costs, L)
    if mode == "heuristic":
        return _nearest_neighbor_2opt(costs, L)
    raise ValueError(f"unknown TSP mode {mode!r}")


def deltas(P: PathMatrix, tour: Tour) -> list[BinaryVector]:
    """Consecutive XOR differences of the columns along the tour. Their
    cumulative XOR telescopes to zero."""
    if len(tour.sigma) != len(P.columns):
        raise ValueError("tour length does not match path matrix")
    return [
        P.columns[tour.sigma[j]] ^ P.columns[tour.sigma[j + 1]]
        for j in range(len(P.columns) - 1)
    ]
