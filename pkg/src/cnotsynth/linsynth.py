"""Synthesis of {CNOT, X} circuits realizing an augmented transform on a coupling graph.

The strategy is reverse-engineered Gaussian elimination: reduce the linear block
to upper-triangular form with row operations permitted by the graph, transpose,
reduce again, then assemble the circuit as (second-phase CNOTs with control and
target flipped) + (first-phase CNOTs reversed) + (X gates clearing the flip
column). Steiner trees route each column's row operations; trees are cut into
sub-trees whose roots and leaves are terminals, and each sub-tree is traversed
in up to four passes that cancel terminal rows while restoring Steiner rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import Circuit, Gate, GateKind, cnot
from .linalg import CONST_BIT, AugmentedTransform, SingularTransformError
from .topology import (
    ConnectivityGraph,
    NoPathError,
    SteinerTree,
    shortest_path,
    steiner_tree,
)


@dataclass(frozen=True)
class SubTree:
    """A rooted slice of a Steiner tree whose root and leaves are terminals."""

    root: int
    leaves: tuple[int, ...]  # in BFS discovery order
    parent: dict[int, int] = field(hash=False)
    children: dict[int, tuple[int, ...]] = field(hash=False)
    layer: dict[int, int] = field(hash=False)

    def edges(self) -> list[tuple[int, int]]:
        """(parent, child) pairs sorted by (child layer, child index)."""
        return sorted(
            ((p, c) for c, p in self.parent.items()),
            key=lambda pc: (self.layer[pc[1]], pc[1]),
        )

    @property
    def tree_leaves(self) -> tuple[int, ...]:
        return tuple(v for v in self.layer if not self.children[v])


def _path_subtree(path: list[int]) -> SubTree:
    parent = {b: a for a, b in zip(path, path[1:])}
    children = {a: (b,) for a, b in zip(path, path[1:])}
    children[path[-1]] = ()
    layer = {v: k for k, v in enumerate(path)}
    return SubTree(
        root=path[0], leaves=(path[-1],), parent=parent, children=children, layer=layer
    )


def separate(tree: SteinerTree, pivot: int, terminals: frozenset[int], alg: int) -> list[SubTree]:
    """Cut a Steiner tree into edge-disjoint sub-trees rooted at terminals.

    A BFS from the pivot stops at every terminal it reaches; interior terminals
    seed later sub-trees (processed FIFO). For ``alg == 4`` every sub-tree is
    further split into one path per leaf, stored with root and leaf exchanged.
    """
    assert pivot == tree.root
    pending = [pivot]
    remaining = set(terminals) - {pivot}
    out: list[SubTree] = []
    while remaining:
        root = pending.pop(0)
        # BFS from root, cutting at terminals.
        parent: dict[int, int] = {}
        children: dict[int, list[int]] = {root: []}
        layer = {root: 0}
        leaves: list[int] = []
        queue = [root]
        while queue:
            u = queue.pop(0)
            for w in tree.children[u]:
                parent[w] = u
                children[u].append(w)
                children[w] = []
                layer[w] = layer[u] + 1
                if w in terminals:
                    leaves.append(w)
                    remaining.discard(w)
                    if tree.children[w]:
                        pending.append(w)  # interior terminal: roots a later sub-tree
                else:
                    queue.append(w)
        sub = SubTree(
            root=root,
            leaves=tuple(leaves),
            parent=parent,
            children={v: tuple(cs) for v, cs in children.items()},
            layer=layer,
        )
        if alg != 4:
            out.append(sub)
        else:
            for leaf in sub.leaves:
                path = [leaf]
                while path[-1] != root:
                    path.append(sub.parent[path[-1]])
                out.append(_path_subtree(path))  # leaf becomes the root
    return out


@dataclass
class RowOpResult:
    cnots: list[Gate]
    matrix: object  # the (mutated) matrix the row operations were applied to
    subtrees: list[tuple[int, tuple[int, ...]]] | None  # (root, leaves) when alg == 2


def _traversal_edges(sub: SubTree, which: str) -> list[tuple[int, int]]:
    edges = sub.edges()
    if which == "bottom-up-1":  # non-root parents, deepest child first
        return sorted(
            (e for e in edges if e[0] != sub.root),
            key=lambda pc: (-sub.layer[pc[1]], pc[1]),
        )
    if which == "top-down-1":  # every edge, top first
        return edges
    leaves = set(sub.tree_leaves)
    if which == "bottom-up-2":  # non-leaf children, deepest first
        return sorted(
            (e for e in edges if e[1] not in leaves),
            key=lambda pc: (-sub.layer[pc[1]], pc[1]),
        )
    if which == "top-down-2":  # non-root parents and non-leaf children, top first
        return [e for e in edges if e[0] != sub.root and e[1] not in leaves]
    raise ValueError(which)


def row_op(
    matrix,
    terminals: frozenset[int],
    pivot: int,
    tree: SteinerTree,
    alg: int,
) -> RowOpResult:
    """Emit the CNOTs that clear a column's terminal rows, updating ``matrix``.

    ``matrix`` only needs a ``row_xor(dst, src)`` method; it is mutated in place.
    ``alg`` selects the traversal set: 1 skips the first bottom-up and second
    top-down passes (upper-triangular phase), 2 and 3 run all four, and 4 runs
    all four but applies a single ``row_xor(root, leaf)`` per (path) sub-tree.
    The CNOT for edge (u, v) with u the parent is CNOT(control=u, target=v),
    which as a row operation adds row u into row v.
    """
    if alg not in (1, 2, 3, 4):
        raise ValueError(f"alg must be 1..4, got {alg}")
    subtrees = separate(tree, pivot, terminals, alg)
    cnots: list[Gate] = []
    for sub in reversed(subtrees):  # starting from the last sub-tree
        passes = ["top-down-1", "bottom-up-2"]
        if alg != 1:
            passes = ["bottom-up-1"] + passes + ["top-down-2"]
        for which in passes:
            for u, v in _traversal_edges(sub, which):
                cnots.append(cnot(u, v))
                if alg != 4:
                    matrix.row_xor(v, u)
        if alg == 4:
            matrix.row_xor(sub.root, sub.leaves[0])
    result_subtrees = [(s.root, s.leaves) for s in subtrees] if alg == 2 else None
    return RowOpResult(cnots, matrix, result_subtrees)


@dataclass
class ColumnTrace:
    """Per-column record of one elimination phase, for inspection and golden tests."""

    phase: int
    column: int
    diag_cnots: list[Gate]
    tree_cnots: list[Gate]
    correction_cnots: list[Gate]
    matrix_after: AugmentedTransform


def _fix_diagonal(
    a: AugmentedTransform,
    g: ConnectivityGraph,
    i: int,
    active: frozenset[int],
) -> list[Gate]:
    """Propagate a 1 from below the diagonal up into A[i, i]."""
    candidates = [j for j in range(i + 1, a.n + 1) if a.get(j, i)]
    if not candidates:
        raise SingularTransformError(f"no pivot available for column {i}")
    dists = {}
    for j in candidates:
        try:
            dists[j] = len(shortest_path(g, i, j, active)) - 1
        except NoPathError:
            pass
    gates: list[Gate] = []
    if dists:
        best = min(dists.items(), key=lambda kv: (kv[1], kv[0]))[0]
        path = shortest_path(g, i, best, active)
        # chain from the leaf end so the 1 walks up to the pivot row
        for child, parent in zip(path[::-1], path[::-1][1:]):
            gates.append(cnot(child, parent))
            a.row_xor(parent, child)
    else:
        # no candidate reachable inside the shrunken graph: route through fixed
        # vertices with a full interior-restoring path (leaf gains the root row)
        full = frozenset(g.vertices)
        best = min(candidates, key=lambda j: (len(shortest_path(g, i, j, full)), j))
        path = shortest_path(g, best, i, full)
        result = row_op(a, frozenset({best, i}), best, _as_tree(path), alg=3)
        gates.extend(result.cnots)
    return gates


def _as_tree(path: list[int]) -> SteinerTree:
    parent = {b: a for a, b in zip(path, path[1:])}
    children = {a: (b,) for a, b in zip(path, path[1:])}
    children[path[-1]] = ()
    layer = {v: k for k, v in enumerate(path)}
    return SteinerTree(
        root=path[0],
        terminals=frozenset({path[0], path[-1]}),
        parent=parent,
        children=children,
        layer=layer,
    )


def _split_reachable(
    g: ConnectivityGraph, pivot: int, terms: set[int], active: frozenset[int]
) -> tuple[set[int], list[int]]:
    reachable = set()
    unreachable = []
    for t in sorted(terms):
        try:
            shortest_path(g, pivot, t, active)
            reachable.add(t)
        except NoPathError:
            unreachable.append(t)
    return reachable, unreachable


def _eliminate_column(
    a: AugmentedTransform,
    g: ConnectivityGraph,
    i: int,
    active: frozenset[int],
    alg: int,
) -> tuple[list[Gate], list[tuple[int, tuple[int, ...]]]]:
    """Clear column i below the diagonal; returns (cnots, (root, leaves) records)."""
    terms = {j for j in range(i + 1, a.n + 1) if a.get(j, i)}
    cnots: list[Gate] = []
    records: list[tuple[int, tuple[int, ...]]] = []
    if not terms:
        return cnots, records
    reachable, unreachable = _split_reachable(g, i, terms, active)
    if reachable:
        tree = steiner_tree(g, reachable | {i}, i, active)
        result = row_op(a, frozenset(reachable | {i}), i, tree, alg)
        cnots.extend(result.cnots)
        if result.subtrees:
            records.extend(result.subtrees)
    for t in unreachable:
        # route through already-fixed vertices; alg=3 leaves interior rows intact
        path = shortest_path(g, i, t, frozenset(g.vertices))
        result = row_op(a, frozenset({i, t}), i, _as_tree(path), alg=3)
        cnots.extend(result.cnots)
        records.append((i, (t,)))
    return cnots, records


def _corrections(
    a: AugmentedTransform,
    g: ConnectivityGraph,
    records: list[tuple[int, tuple[int, ...]]],
    partner: dict[int, int],
    active: frozenset[int],
) -> list[Gate]:
    """Re-pair every leaf whose sub-tree root has a larger index.

    After the alg=2 pass each leaf row equals (own row + root row); when the
    root index exceeds the leaf index this would leave a 1 above the diagonal,
    so the leaf is chased down the chain of earlier roots until its partner has
    a smaller index. ``partner`` maps each leaf to its current pairing row.
    """
    gates: list[Gate] = []
    full = frozenset(g.vertices)
    for root, leaves in records:
        for leaf in sorted(leaves):
            r = root
            while r > leaf:
                try:
                    path = shortest_path(g, r, leaf, active)
                except NoPathError:
                    path = shortest_path(g, r, leaf, full)
                result = row_op(a, frozenset({r, leaf}), r, _as_tree(path), alg=3)
                gates.extend(result.cnots)
                partner[leaf] = partner[r]
                r = partner[r]
    return gates


def linear_tf_synth_traced(
    a: AugmentedTransform, g: ConnectivityGraph
) -> tuple[Circuit, list[ColumnTrace]]:
    """LINEAR-TF-SYNTH with the per-column elimination trace exposed."""
    if not a.is_invertible():
        raise SingularTransformError("left block of the transform is singular")
    if a.n > g.num_vertices:
        raise ValueError(f"transform needs {a.n} qubits but graph has {g.num_vertices}")
    work = a.padded(g.num_vertices)
    n = work.n

    x_gates = [Gate(GateKind.X, i) for i in range(1, n + 1) if work.rows[i - 1] & CONST_BIT]
    for gt in x_gates:
        work.rows[gt.target - 1] ^= CONST_BIT

    traces: list[ColumnTrace] = []
    y1: list[Gate] = []
    active = frozenset(g.vertices)
    for i in range(1, n + 1):
        diag = [] if work.get(i, i) else _fix_diagonal(work, g, i, active)
        cnots, _ = _eliminate_column(work, g, i, active, alg=1)
        y1 += diag + cnots
        traces.append(ColumnTrace(1, i, diag, cnots, [], work.copy()))
        active -= {i}

    work = work.transposed_linear()
    y2: list[Gate] = []
    active = frozenset(g.vertices)
    for i in range(1, n + 1):
        diag = [] if work.get(i, i) else _fix_diagonal(work, g, i, active)
        cnots, records = _eliminate_column(work, g, i, active, alg=2)
        partner = {leaf: root for root, leaves in records for leaf in leaves}
        corr = _corrections(work, g, records, partner, active)
        y2 += diag + cnots + corr
        traces.append(ColumnTrace(2, i, diag, cnots, corr, work.copy()))
        active -= {i}

    assert work.is_identity(), "elimination failed to reach the identity"

    flipped = [cnot(gt.target, gt.control) for gt in y2]
    gates = flipped + y1[::-1] + x_gates
    return Circuit(n, tuple(gates)), traces


def linear_tf_synth(a: AugmentedTransform, g: ConnectivityGraph) -> Circuit:
    """Synthesize a {CNOT, X} circuit realizing ``a`` with every CNOT on an edge of ``g``.

    Replaying the returned circuit through the transform rules from the identity
    reproduces ``a`` exactly (padded with identity rows if the graph is larger).
    """
    return linear_tf_synth_traced(a, g)[0]
