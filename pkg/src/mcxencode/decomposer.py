"""XOR-of-subcubes decomposition of binary vectors (tree search over control strings).

Expresses a BinaryVector b as an XOR of subcube indicator vectors, i.e. the
shift operator W_b as a product of MCX gates. The search walks the layered
tree of control strings (layer l = strings with l controlled positions) and,
from the first layer holding any valid node, takes all full nodes (F = 1),
else all semi-full nodes (F >= 3/4), else the '0' sides of all complementary
bi-partitions; a greedy maximum independent set of the candidates is XORed
off and the search repeats until b is zero.

The layer scan is implemented as a pruned breadth-first pass over marginal
tables ("fold" one free axis at a time): a subcube of size 2^(k+1) that is at
least 3/4 full always splits into a child at least 3/4 full, and an all-ones
subcube of the mismatch pattern stays all-ones under restriction, so growing
fold sets only through surviving nodes visits every candidate the literal
layer-by-layer traversal would find. The fold kernels are numba-compiled;
everything is integer arithmetic and bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numba import njit

from .bitcore import BinaryVector, expand_value, fullness


@dataclass(frozen=True)
class CandidateSet:
    """Valid nodes found on one tree layer.

    kind is 'full', 'semi-full' or 'complementary'. candidates hold
    (control string, exact fullness); for complementary cuts the strings are
    the c0 members and pairs lists the full bi-partitions.
    """

    layer: int
    kind: str
    candidates: tuple[tuple[str, Fraction], ...]
    pairs: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class Decomposition:
    """Result of decompose(): XOR of expand(c) over controls equals the input."""

    n: int
    controls: tuple[str, ...]
    rounds: tuple[tuple[str, ...], ...] = field(default=(), repr=False)

    @property
    def gate_count(self) -> int:
        return len(self.controls)


@njit(cache=True)
def _fold_count_level(arrs, folded, maxfold, n, k):
    """Fold every level-k node along every canonical axis (> last folded axis).

    Children are kept when 4*max(child) >= 3*2^(k+1), i.e. when the child
    still contains a subcube at least 3/4 full at its own layer.
    """
    m, sz = arrs.shape
    half = sz // 2
    out = np.empty((m * n, half), dtype=np.uint32)
    out_folded = np.empty(m * n, dtype=np.int64)
    out_maxfold = np.empty(m * n, dtype=np.int64)
    thresh = 3 << (k + 1)
    cnt = 0
    for i in range(m):
        fm = folded[i]
        src = arrs[i]
        for q in range(maxfold[i] + 1, n):
            if (fm >> q) & 1:
                continue
            r = 0  # rank of q among this node's unfolded axes
            for a in range(q):
                if not (fm >> a) & 1:
                    r += 1
            post = 1 << (n - k - 1 - r)
            row = out[cnt]
            best = np.uint32(0)
            for ip in range(half // post):
                b0 = 2 * ip * post
                d0 = ip * post
                for it in range(post):
                    v = src[b0 + it] + src[b0 + post + it]
                    row[d0 + it] = v
                    if v > best:
                        best = v
            if 4 * int(best) >= thresh:
                out_folded[cnt] = fm | (1 << q)
                out_maxfold[cnt] = q
                cnt += 1
    return out[:cnt], out_folded[:cnt], out_maxfold[:cnt]


@njit(cache=True)
def _fold_and_level(arrs, folded, maxfold, n, k, skip):
    """AND-fold for the complementary-cut lattice on the axis-``skip`` mismatch
    pattern; children survive while any all-ones subcube remains."""
    m, sz = arrs.shape
    half = sz // 2
    out = np.empty((m * n, half), dtype=np.uint32)
    out_folded = np.empty(m * n, dtype=np.int64)
    out_maxfold = np.empty(m * n, dtype=np.int64)
    cnt = 0
    for i in range(m):
        fm = folded[i]
        src = arrs[i]
        for q in range(maxfold[i] + 1, n):
            if q == skip or (fm >> q) & 1:
                continue
            r = 0
            for a in range(q):
                if a != skip and not (fm >> a) & 1:
                    r += 1
            post = 1 << (n - 1 - k - 1 - r)
            row = out[cnt]
            any_nz = False
            for ip in range(half // post):
                b0 = 2 * ip * post
                d0 = ip * post
                for it in range(post):
                    v = src[b0 + it] & src[b0 + post + it]
                    row[d0 + it] = v
                    if v:
                        any_nz = True
            if any_nz:
                out_folded[cnt] = fm | (1 << q)
                out_maxfold[cnt] = q
                cnt += 1
    return out[:cnt], out_folded[:cnt], out_maxfold[:cnt]


@njit(cache=True)
def _mismatch_root(bits, n, p):
    """XOR of the two axis-p hyperplanes of b: cell j (axes != p, axis order,
    qubit order MSB-first) is 1 iff b differs on the bit-p partner pair."""
    bp = n - 1 - p
    size = 1 << (n - 1)
    lowmask = (1 << bp) - 1
    out = np.empty(size, dtype=np.uint32)
    for j in range(size):
        nu0 = ((j >> bp) << (bp + 1)) | (j & lowmask)
        out[j] = bits[nu0] ^ bits[nu0 | (1 << bp)]
    return out


def _deepest_count_level(bits: np.ndarray, n: int):
    arrs = bits.astype(np.uint32).reshape(1, -1)
    folded = np.zeros(1, dtype=np.int64)
    maxfold = np.full(1, -1, dtype=np.int64)
    k = 0
    while True:
        nxt = _fold_count_level(arrs, folded, maxfold, n, k)
        if nxt[0].shape[0] == 0:
            return k, arrs, folded
        arrs, folded, maxfold = nxt
        k += 1


def _deepest_compl_level(bits: np.ndarray, n: int, p: int):
    root = _mismatch_root(bits, n, p)
    if not root.any():
        return -1, None, None
    arrs = root.reshape(1, -1)
    folded = np.zeros(1, dtype=np.int64)
    maxfold = np.full(1, -1, dtype=np.int64)
    k = 0
    while True:
        nxt = _fold_and_level(arrs, folded, maxfold, n, k, p)
        if nxt[0].shape[0] == 0:
            return k, arrs, folded
        arrs, folded, maxfold = nxt
        k += 1


def _string_from(n: int, ctrl_axes: list[int], idx: int, p: int = -1) -> str:
    chars = ["I"] * n
    if p >= 0:
        chars[p] = "0"
    width = len(ctrl_axes)
    for j, q in enumerate(ctrl_axes):
        chars[q] = "1" if (idx >> (width - 1 - j)) & 1 else "0"
    return "".join(chars)


def find_next_control_strings(b: BinaryVector) -> CandidateSet:
    """Valid nodes from the first tree layer that has any (Subroutine 2).

    Layers are scanned from 0 (no controls) to n; within a layer full nodes
    beat semi-full nodes beat complementary bi-partitions. Nonempty by layer
    n, where every 1-bit of b is a full node.
    """
    if not b:
        raise ValueError("nothing to decompose: input vector is zero")
    n = b.n
    bits = b.to_bits()

    k_count, count_arrs, count_folded = _deepest_count_level(bits, n)
    k_compl = -1
    compl_nodes: list[tuple[int, np.ndarray, np.ndarray]] = []
    for p in range(n):
        kc, arrs, folded = _deepest_compl_level(bits, n, p)
        if kc > k_compl:
            k_compl = kc
            compl_nodes = [(p, arrs, folded)]
        elif kc == k_compl and kc >= 0:
            compl_nodes.append((p, arrs, folded))

    layer_count = n - k_count
    layer_compl = n - k_compl if k_compl >= 0 else n + 1

    if layer_count <= layer_compl:
        size = 1 << k_count
        full: dict[str, Fraction] = {}
        semi: dict[str, Fraction] = {}
        for i in range(count_arrs.shape[0]):
            ctrl_axes = [q for q in range(n) if not (count_folded[i] >> q) & 1]
            arr = count_arrs[i]
            for idx in np.nonzero(arr == size)[0]:
                full[_string_from(n, ctrl_axes, int(idx))] = Fraction(1)
            for idx in np.nonzero(4 * arr.astype(np.int64) >= 3 * size)[0]:
                cnt = int(arr[int(idx)])
                if cnt < size:
                    semi[_string_from(n, ctrl_axes, int(idx))] = Fraction(cnt, size)
        if full:
            return CandidateSet(layer_count, "full", tuple(sorted(full.items())))
        return CandidateSet(
            layer_count,
            "semi-full",
            tuple(sorted(semi.items(), key=lambda t: (-t[1], t[0]))),
        )

    pairs: dict[tuple[str, str], None] = {}
    for p, arrs, folded in compl_nodes:
        for i in range(arrs.shape[0]):
            ctrl_axes = [
                q for q in range(n) if q != p and not (folded[i] >> q) & 1
            ]
            for idx in np.nonzero(arrs[i])[0]:
                c0 = _string_from(n, ctrl_axes, int(idx), p=p)
                c1 = c0[:p] + "1" + c0[p + 1 :]
                pairs[(c0, c1)] = None
    cands: dict[str, Fraction] = {}
    for c0, _ in pairs:
        if c0 not in cands:
            cands[c0] = fullness(b, c0)
    return CandidateSet(
        layer_compl,
        "complementary",
        tuple(sorted(cands.items(), key=lambda t: (-t[1], t[0]))),
        tuple(sorted(pairs)),
    )


def max_independent_set(cands: CandidateSet, b: BinaryVector) -> list[str]:
    """Greedy selection of candidates with pairwise-disjoint subcubes.

    Scan order: fullness descending, then lexicographic ('0' < '1' < 'I');
    a candidate is kept iff its expansion is disjoint from all kept so far.
    """
    if not cands.candidates:
        raise ValueError("empty candidate set")
    order = sorted(cands.candidates, key=lambda t: (-t[1], t[0]))
    kept: list[str] = []
    acc = 0
    for c, _ in order:
        e = expand_value(c)
        if e & acc == 0:
            kept.append(c)
            acc |= e
    return kept


def _naive_cover(n: int, value: int) -> tuple[str, ...]:
    """One fully controlled gate per 1-bit, in index order."""
    return tuple(format(nu, f"0{n}b") for nu in range(1 << n) if (value >> nu) & 1)


def decompose(b: BinaryVector) -> Decomposition:
    """Express b as an XOR of subcube indicators; see the module docstring.

    Deterministic for a given input. Two guard rails bound the greedy loop:

    * Complementary-cut rounds can revisit an earlier state (flipping one
      side of a bi-partition may set up another cut that selects the very
      same string, a 2-cycle). A round that would reproduce a seen state is
      replaced by the naive single-cell cover of the residue, which always
      terminates.
    * The result is never worse than the naive fully-controlled cover: if
      the rounds end up costlier than popcount(b), the naive cover is
      returned outright.
    """
    n = b.n
    pc0 = b.popcount
    value = b.value
    controls: list[str] = []
    rounds: list[tuple[str, ...]] = []
    seen = {value}
    round_cap = 4 * pc0 + 4
    while value:
        cands = find_next_control_strings(BinaryVector(n, value))
        selected = max_independent_set(cands, BinaryVector(n, value))
        nxt = value
        for c in selected:
            nxt ^= expand_value(c)
        if nxt in seen or len(rounds) >= round_cap:
            selected = _naive_cover(n, value)
            nxt = 0
        controls.extend(selected)
        rounds.append(tuple(selected))
        seen.add(nxt)
        value = nxt
    if len(controls) > max(1, pc0):
        naive = _naive_cover(n, b.value)
        return Decomposition(n, naive, (naive,))
    return Decomposition(n, tuple(controls), tuple(rounds))


@lru_cache(maxsize=None)
def cost(b: BinaryVector) -> int:
    """Gate count of decompose(b); memoized since the path optimizer asks
    for O(L^2) pairwise difference costs."""
    if not b:
        return 0
    return decompose(b).gate_count
