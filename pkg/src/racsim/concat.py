"""Concatenated n->1 codes from 2- and 3-bit subunits: trees, per-bit success, simulation."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import mzi, qcore
from .bell import quantum_max
from .qrac import default_bases

_ALICE_STREAM = 0
_BOB_STREAM = 1


@dataclass(frozen=True)
class TreeNode:
    """Internal subunit (2 or 3 children) or a leaf carrying an input-bit slot."""

    children: tuple["TreeNode", ...] = ()
    leaf: int | None = None

    def __post_init__(self):
        if self.leaf is None:
            if len(self.children) not in (2, 3):
                raise ValueError(f"subunit arity must be 2 or 3, got {len(self.children)}")
        elif self.children:
            raise ValueError("a leaf cannot have children")

    @property
    def is_leaf(self) -> bool:
        return self.leaf is not None

    @property
    def arity(self) -> int:
        return len(self.children)


@dataclass(frozen=True)
class ConcatTree:
    """Nesting of 2->1 and 3->1 subunits encoding n leaves into one message bit."""

    root: TreeNode
    n: int = field(init=False)

    def __post_init__(self):
        leaves = self.leaf_order()
        if sorted(leaves) != list(range(len(leaves))):
            raise ValueError("leaf indices must be a permutation of 0..n-1")
        object.__setattr__(self, "n", len(leaves))

    def leaf_order(self) -> list[int]:
        order: list[int] = []

        def walk(node: TreeNode) -> None:
            if node.is_leaf:
                order.append(node.leaf)
            else:
                for child in node.children:
                    walk(child)

        walk(self.root)
        return order

    def internal_postorder(self) -> list[TreeNode]:
        nodes: list[TreeNode] = []

        def walk(node: TreeNode) -> None:
            if not node.is_leaf:
                for child in node.children:
                    walk(child)
                nodes.append(node)

        walk(self.root)
        return nodes

    def depth_profile(self) -> list[tuple[int, int]]:
        """Per leaf (by index): counts of 2-ary and 3-ary ancestor subunits."""
        profile: dict[int, tuple[int, int]] = {}

        def walk(node: TreeNode, twos: int, threes: int) -> None:
            if node.is_leaf:
                profile[node.leaf] = (twos, threes)
            else:
                t2 = twos + (node.arity == 2)
                t3 = threes + (node.arity == 3)
                for child in node.children:
                    walk(child, t2, t3)

        walk(self.root, 0, 0)
        return [profile[i] for i in range(self.n)]

    def path_to_leaf(self, leaf: int) -> list[tuple[TreeNode, int]]:
        """Internal nodes from the root down to ``leaf``, with the child slot taken."""
        path: list[tuple[TreeNode, int]] = []

        def walk(node: TreeNode) -> bool:
            if node.is_leaf:
                return node.leaf == leaf
            for pos, child in enumerate(node.children):
                if walk(child):
                    path.append((node, pos))
                    return True
            return False

        if not walk(self.root):
            raise ValueError(f"leaf {leaf} not present (n={self.n})")
        path.reverse()
        return path

    def to_nested(self):
        """Nested lists of leaf indices; group size carries the arity ([[0, 1], [2, 3]] for n=4)."""

        def render(node: TreeNode):
            if node.is_leaf:
                return node.leaf
            return [render(c) for c in node.children]

        return render(self.root)

    @classmethod
    def from_nested(cls, nested) -> "ConcatTree":
        """Build from nested sequences of leaf indices; arities follow group sizes."""

        def build(item) -> TreeNode:
            if isinstance(item, int):
                return TreeNode(leaf=item)
            return TreeNode(children=tuple(build(c) for c in item))

        return cls(root=build(nested))


def smooth_ceiling(n: int) -> int:
    """Least m >= n of the form 2^k 3^j."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    m = n
    while True:
        r = m
        while r % 2 == 0:
            r //= 2
        while r % 3 == 0:
            r //= 3
        if r == 1:
            return m
        m += 1


def smooth_factorization(n: int) -> tuple[int, int]:
    """Exponents (k, j) with n = 2^k 3^j, or a ValueError for non-smooth n."""
    k = j = 0
    r = n
    while r % 2 == 0:
        r //= 2
        k += 1
    while r % 3 == 0:
        r //= 3
        j += 1
    if r != 1 or n < 2:
        raise ValueError(f"{n} is not of the form 2^k 3^j with n >= 2")
    return k, j


def build_tree(n: int) -> ConcatTree:
    """Balanced tree for 3-smooth n: 3-ary layers nearest the leaves, then 2-ary layers."""
    k, j = smooth_factorization(n)
    level: list[TreeNode] = [TreeNode(leaf=i) for i in range(n)]
    for _ in range(j):
        level = [TreeNode(children=tuple(level[i : i + 3])) for i in range(0, len(level), 3)]
    for _ in range(k):
        level = [TreeNode(children=tuple(level[i : i + 2])) for i in range(0, len(level), 2)]
    return ConcatTree(root=level[0])


def chain_success(two_stages: int, three_stages: int) -> float:
    """Per-bit success after k two-bit and j three-bit encoding stages."""
    if two_stages < 0 or three_stages < 0:
        raise ValueError("stage counts must be nonnegative")
    return 0.5 * (1.0 + 2.0 ** (-two_stages / 2) * 3.0 ** (-three_stages / 2))


def analytic_per_bit(tree: ConcatTree) -> np.ndarray:
    """Exact per-leaf success probabilities from the depth profile."""
    return np.array([chain_success(k, j) for k, j in tree.depth_profile()])


def quantum_bound(n: int) -> float:
    """Upper bound 1/2 + 1 / (2 sqrt(n)) on any n->1 quantum code."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return 0.5 + 0.5 / math.sqrt(n)


def padded_lower_bound(n: int) -> float:
    """Achievable success for any n via the next 3-smooth size m: 1/2 + C_m^qm / (m 2^m)."""
    m = smooth_ceiling(n)
    return 0.5 + quantum_max(m) / (m * (1 << m))


@dataclass(frozen=True)
class PaddedCode:
    """Tree over the padded size plus the leaf slot -> input bit assignment.

    ``slots[leaf]`` is the input-bit index held by that leaf, or None for a
    constant-0 padding bit. A shared-seed permutation can spread the real bits
    over slots so every bit sees the same success profile in expectation; this
    stands in for a shared-randomness equalization step.
    """

    tree: ConcatTree
    slots: tuple[int | None, ...]

    def leaf_for_bit(self, bit_index: int) -> int:
        return self.slots.index(bit_index)


def build_padded(n: int, permute_seed: int | None = None) -> PaddedCode:
    m = smooth_ceiling(n)
    tree = build_tree(m)
    slots: list[int | None] = list(range(n)) + [None] * (m - n)
    if permute_seed is not None:
        order = np.random.default_rng(permute_seed).permutation(m)
        slots = [slots[i] for i in order]
    return PaddedCode(tree=tree, slots=tuple(slots))


def _dot_table(arity: int) -> np.ndarray:
    bases = default_bases(arity)
    return np.asarray(bases.alice) @ np.asarray(bases.bob).T


def _conditional_table_mzi(arity: int) -> np.ndarray:
    """P(spin outcome 0 | path outcome a along the negated class direction), per (class, a, bit).

    Runs through the 4-dimensional apparatus model instead of the Bloch closed form.
    """
    bases = default_bases(arity)
    state = mzi.maximally_entangled_state()
    rows = bases.alice.shape[0]
    table = np.empty((rows, 2, arity))
    for i in range(rows):
        for a in (0, 1):
            p_path = qcore.projector(-bases.alice[i], a)
            for j in range(arity):
                joint = qcore.joint_probability(state, p_path, qcore.projector(bases.bob[j], 0))
                table[i, a, j] = 2.0 * joint
    return table


@dataclass(frozen=True)
class SimulationResult:
    successes: int
    shots: int

    @property
    def rate(self) -> float:
        return self.successes / self.shots


def _node_ids(tree: ConcatTree) -> dict[int, int]:
    return {id(node): uid for uid, node in enumerate(tree.internal_postorder())}


def _simulate_range(
    tree: ConcatTree,
    bits: Sequence[int],
    query: int,
    seed: int,
    lo: int,
    hi: int,
    engine: str,
) -> int:
    count = hi - lo
    uids = _node_ids(tree)
    cond_tables = {}
    for arity in {node.arity for node in tree.internal_postorder()}:
        if engine == "mzi":
            cond_tables[arity] = _conditional_table_mzi(arity)
        else:
            dots = _dot_table(arity)
            # P(spin=0 | a) = (1 + (-1)^a A_i . B_j) / 2 under the steering convention
            cond = np.empty((dots.shape[0], 2, arity))
            cond[:, 0, :] = 0.5 * (1.0 + dots)
            cond[:, 1, :] = 0.5 * (1.0 - dots)
            cond_tables[arity] = cond

    messages: dict[int, np.ndarray] = {}
    alice_bits: dict[int, np.ndarray] = {}
    classes: dict[int, np.ndarray] = {}
    for node in tree.internal_postorder():
        uid = uids[id(node)]
        child_vals = []
        for child in node.children:
            if child.is_leaf:
                child_vals.append(np.full(count, bits[child.leaf], dtype=np.uint8))
            else:
                child_vals.append(messages[uids[id(child)]])
        ref = child_vals[0]
        cls = np.zeros(count, dtype=np.intp)
        for value in child_vals[1:]:
            cls = (cls << 1) | (value ^ ref)
        uniforms = mzi.stream(seed, 2 * uid + _ALICE_STREAM, lo).random(count)
        a = (uniforms < 0.5).astype(np.uint8)
        messages[uid] = ref ^ a
        alice_bits[uid] = a
        classes[uid] = cls

    root_uid = uids[id(tree.internal_postorder()[-1])]
    received = messages[root_uid]
    for node, pos in tree.path_to_leaf(query):
        uid = uids[id(node)]
        cond = cond_tables[node.arity]
        p_spin0 = cond[classes[uid], alice_bits[uid], pos]
        uniforms = mzi.stream(seed, 2 * uid + _BOB_STREAM, lo).random(count)
        b = (uniforms >= p_spin0).astype(np.uint8)
        received = b ^ received
    return int(np.sum(received == bits[query]))


def simulate(
    tree: ConcatTree,
    bits: Sequence[int],
    query: int,
    shots: int,
    seed: int,
    engine: str = "born",
    workers: int = 1,
) -> SimulationResult:
    """Shot-by-shot run of the concatenated code for one input string and queried bit.

    Each subunit encodes bottom-up: the first child bit is the reference, the
    remaining children fix the class, and the transmitted bit is the reference
    XOR Alice's steering outcome. Decoding walks top-down, measuring the spin
    along the queried child's direction at each level and XOR-correcting with the
    received bit. The ``mzi`` engine draws the same conditional probabilities
    through the 4-dimensional apparatus model.
    """
    if engine not in ("born", "mzi"):
        raise ValueError(f"unknown engine {engine!r}")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if not 0 <= query < tree.n:
        raise ValueError(f"query {query} out of range for n={tree.n}")
    if len(bits) != tree.n or any(b not in (0, 1) for b in bits):
        raise ValueError(f"input must be {tree.n} bits")

    workers = max(1, workers)
    step = -(-shots // workers)
    step += (-step) % 4
    spans = [(lo, min(lo + step, shots)) for lo in range(0, shots, max(step, 4))]
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    lambda span: _simulate_range(tree, bits, query, seed, span[0], span[1], engine),
                    spans,
                )
            )
    else:
        parts = [_simulate_range(tree, bits, query, seed, lo, hi, engine) for lo, hi in spans]
    return SimulationResult(successes=sum(parts), shots=shots)


def simulate_padded(
    code: PaddedCode,
    bits: Sequence[int],
    bit_index: int,
    shots: int,
    seed: int,
    engine: str = "born",
    workers: int = 1,
) -> SimulationResult:
    """Simulate a padded code: real bits mapped to their slots, padding slots at 0."""
    padded = [0] * code.tree.n
    for leaf, src in enumerate(code.slots):
        if src is not None:
            padded[leaf] = bits[src]
    return simulate(
        code.tree,
        padded,
        code.leaf_for_bit(bit_index),
        shots,
        seed,
        engine=engine,
        workers=workers,
    )
