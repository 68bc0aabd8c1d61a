"""Kazhdan-Lusztig left cells of a W-graph.

A basis vector y dominates x whenever x occurs in the image of y under
some edge operator; cells are the strongly connected components of that
arc digraph, and the cell preorder is arc reachability.  Down-closed
unions of cells span exactly the submodules with monomial idempotent
action, which is what :func:`induced_cells_check` exercises for sets of
the form D_J * C.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

from .coxeter import CoxeterSystem, Element
from .report import Report
from .wgraph import OmegaModule, trivial_module


@dataclass(frozen=True)
class CellPartition:
    """Blocks of vertices plus the reachability order between blocks.

    ``order`` contains (i, j) whenever block i is reachable from block j
    through arcs (i.e. block i lies below block j); it is a strict partial
    order on block indices.  Blocks are sorted by their minimal vertex.
    """

    blocks: Tuple[FrozenSet[int], ...]
    order: FrozenSet[Tuple[int, int]]

    def block_of(self, vertex: int) -> int:
        for i, block in enumerate(self.blocks):
            if vertex in block:
                return i
        raise KeyError(vertex)


def action_arcs(module: OmegaModule) -> Dict[int, Set[int]]:
    """arcs[y] = set of x hit by some edge operator applied to y."""
    arcs: Dict[int, Set[int]] = {i: set() for i in range(module.rank)}
    for (_, _), mat in module.x.items():
        for i in range(module.rank):
            row = mat[i]
            for j in range(module.rank):
                if row[j] != 0 and i != j:
                    arcs[j].add(i)
    return arcs


def cell_partition(module: OmegaModule) -> CellPartition:
    """Strongly connected components of the arc digraph, with reachability.

    Requires the idempotents to act diagonally (W-graph form): only then
    does arc support characterise the stable spans.
    """
    if not module.has_diagonal_idempotents():
        raise ValueError("cell partition requires diagonal idempotents (W-graph form)")
    arcs = action_arcs(module)
    comp = _tarjan_scc(module.rank, arcs)
    n_blocks = max(comp.values()) + 1 if comp else 0
    members: List[Set[int]] = [set() for _ in range(n_blocks)]
    for vertex, block in comp.items():
        members[block].add(vertex)
    # deterministic order: by minimal vertex
    ordering = sorted(range(n_blocks), key=lambda b: min(members[b]))
    renumber = {old: new for new, old in enumerate(ordering)}
    blocks = tuple(frozenset(members[old]) for old in ordering)
    # block-level reachability (transitive)
    block_arcs: Dict[int, Set[int]] = {i: set() for i in range(n_blocks)}
    for y, targets in arcs.items():
        for x in targets:
            a, b = renumber[comp[x]], renumber[comp[y]]
            if a != b:
                block_arcs[b].add(a)
    reach: Set[Tuple[int, int]] = set()
    for start in range(n_blocks):
        stack = list(block_arcs[start])
        seen: Set[int] = set()
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            reach.add((cur, start))
            stack.extend(block_arcs[cur])
    return CellPartition(blocks, frozenset(reach))


def _tarjan_scc(n: int, arcs: Dict[int, Set[int]]) -> Dict[int, int]:
    """Iterative Tarjan; returns vertex -> component id."""
    index: Dict[int, int] = {}
    low: Dict[int, int] = {}
    on_stack: Set[int] = set()
    stack: List[int] = []
    comp: Dict[int, int] = {}
    counter = 0
    n_comp = 0
    for root in range(n):
        if root in index:
            continue
        work = [(root, iter(sorted(arcs[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(arcs[w]))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
    return comp


def down_set_vertices(partition: CellPartition, block_ids: Iterable[int]) -> Set[int]:
    """Vertices of the blocks together with everything below them."""
    wanted = set(block_ids)
    closed = set(wanted)
    for below, above in partition.order:
        if above in wanted:
            closed.add(below)
    out: Set[int] = set()
    for b in closed:
        out |= set(partition.blocks[b])
    return out


def span_is_stable(module: OmegaModule, vertices: Set[int]) -> bool:
    """Whether the coordinate span of the vertices is closed under the action."""
    outside = [i for i in range(module.rank) if i not in vertices]
    for s in module.gens:
        mats = [module.e_mat(s)]
        mats.extend(module.x_mat(s, g) for g in range(module.system.weight(s)))
        for mat in mats:
            for i in outside:
                row = mat[i]
                if any(row[j] != 0 for j in vertices):
                    return False
    return True


def kl_graph(system: CoxeterSystem) -> Tuple[OmegaModule, List[Element]]:
    """The regular W-graph module, with its basis listed as group elements."""
    from .hy import induce, p_mu_table  # local import to avoid a cycle

    module = trivial_module(system, frozenset())
    table = p_mu_table(frozenset(), module)
    return induce(frozenset(), module, table), list(table.reps)


def induced_cells_check(
    system: CoxeterSystem,
    J: Iterable[int],
    cell_union: Iterable[Element],
) -> Report:
    """Check the induction-of-cells statement for the set D_J * C.

    ``cell_union`` must be a union of left cells of the regular W-graph of
    the parabolic subgroup W_J; the translated set D_J * C is then checked
    to be a union of left cells of the regular W-graph of the full group.
    """
    J = system._subset(J)
    cset = set(cell_union)
    report = Report(f"induction of cells from J={sorted(s + 1 for s in J)}")

    from .hy import induce, p_mu_table  # local import to avoid a cycle

    inner_module = trivial_module(system, frozenset())
    inner_table = p_mu_table(frozenset(), inner_module, ambient=J)
    inner_graph = induce(frozenset(), inner_module, inner_table)
    inner_elements = list(inner_table.reps)
    inner_pos = {w: i for i, w in enumerate(inner_elements)}
    missing = [w for w in cset if w not in inner_pos]
    if missing:
        raise ValueError(f"elements outside the parabolic subgroup: {missing}")
    inner_cells = cell_partition(inner_graph)
    c_idx = {inner_pos[w] for w in cset}
    for block in inner_cells.blocks:
        if block & c_idx and not block <= c_idx:
            raise ValueError("the given set is not a union of cells of the parabolic graph")

    graph, elements = kl_graph(system)
    pos = {w: i for i, w in enumerate(elements)}
    translated = {
        pos[system.mult(d, c)]
        for d in system.min_coset_reps(J)
        for c in cset
    }
    big_cells = cell_partition(graph)
    for block in big_cells.blocks:
        overlap = block & translated
        report.require(
            not overlap or block <= translated,
            f"cell {sorted(block)} is cut by the translated set",
        )
    return report
