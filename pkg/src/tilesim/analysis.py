"""Assembly analysis: stability, terminality, usage, duplicate detection.

An assembly is tau-stable when no partition into two nonempty pieces can
be made without severing bonds of total strength at least tau. That is
exactly a global minimum cut of the bond graph, computed here with the
Stoer-Wagner algorithm over integer weights (so the answer is exact).
Two shortcuts keep the common cases cheap: a disconnected bond graph has
cut weight 0, and a connected graph whose weakest bond already weighs
tau or more cannot be cut below tau because every 2-partition severs at
least one bond.
"""

from __future__ import annotations

from collections import Counter, deque
from enum import Enum

from .model import Assembly, Direction, Pos, TileSet, bond_strength, neighbor


def bond_graph(assembly: Assembly, tile_set: TileSet):
    """Nodes (occupied positions) and weighted bond edges between neighbors."""
    occ = assembly.occupancy
    nodes = sorted(occ)
    edges: dict[tuple[Pos, Pos], int] = {}
    positive = [d for d in Direction.for_dim(assembly.dim) if d.sign > 0]
    for p in nodes:
        tp = tile_set[occ[p].type_index]
        for d in positive:
            q = neighbor(p, d)
            if q in occ:
                w = bond_strength(tp, d, tile_set[occ[q].type_index])
                if w >= 1:
                    edges[(p, q)] = w
    return nodes, edges


def _adjacency(nodes, edges):
    index = {p: i for i, p in enumerate(nodes)}
    adj: list[list[tuple[int, int]]] = [[] for _ in nodes]
    for (p, q), w in edges.items():
        i, j = index[p], index[q]
        adj[i].append((j, w))
        adj[j].append((i, w))
    return adj


def _connected(n: int, adj) -> bool:
    if n == 0:
        return True
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        i = queue.popleft()
        for j, _ in adj[i]:
            if not seen[j]:
                seen[j] = True
                count += 1
                queue.append(j)
    return count == n


def _stoer_wagner(n: int, adj) -> int:
    """Global minimum cut of a connected weighted graph, dense formulation."""
    w = [[0] * n for _ in range(n)]
    for i, row in enumerate(adj):
        for j, wt in row:
            w[i][j] += wt if i < j else 0
    for i in range(n):
        for j in range(i + 1, n):
            w[j][i] = w[i][j]
    active = list(range(n))
    best = None
    while len(active) > 1:
        # one minimum-cut phase: maximum-adjacency order over active vertices
        weights = {v: 0 for v in active}
        inA = {v: False for v in active}
        prev = last = active[0]
        inA[last] = True
        for v in active:
            if v != last:
                weights[v] = w[last][v]
        for _ in range(len(active) - 1):
            prev = last
            last = max((v for v in active if not inA[v]), key=lambda v: weights[v])
            inA[last] = True
            for v in active:
                if not inA[v]:
                    weights[v] += w[last][v]
        cut_of_phase = weights[last]
        if best is None or cut_of_phase < best:
            best = cut_of_phase
        # merge last into prev
        for v in active:
            if v not in (prev, last):
                w[prev][v] += w[last][v]
                w[v][prev] = w[prev][v]
        active.remove(last)
    return best if best is not None else 0


def min_bond_cut(assembly: Assembly, tile_set: TileSet) -> int | None:
    """Weight of the cheapest 2-partition of the bond graph.

    None for a single tile (no partition exists); 0 when the graph is
    disconnected.
    """
    if not assembly.occupancy:
        raise ValueError("empty assembly has no bond graph")
    nodes, edges = bond_graph(assembly, tile_set)
    if len(nodes) == 1:
        return None
    adj = _adjacency(nodes, edges)
    if not _connected(len(nodes), adj):
        return 0
    return _stoer_wagner(len(nodes), adj)


def is_tau_stable(assembly: Assembly, tile_set: TileSet, tau: int) -> bool:
    """True when breaking the assembly apart costs at least tau."""
    if not assembly.occupancy:
        raise ValueError("stability is undefined for an empty assembly")
    nodes, edges = bond_graph(assembly, tile_set)
    if len(nodes) == 1:
        return True
    adj = _adjacency(nodes, edges)
    if not _connected(len(nodes), adj):
        return False
    if edges and min(edges.values()) >= tau:
        return True
    return _stoer_wagner(len(nodes), adj) >= tau


class Progress(Enum):
    ACTIVE = "active"
    PAUSED = "paused"
    TERMINAL = "terminal"


def terminal_status(sim) -> Progress:
    """Settled-state classification of a simulation.

    Terminal means every relaxed-frontier location is dead or masked and
    no type fits anywhere on it even ignoring masks. When only masks
    stand in the way the system is paused, not finished. Locations that
    were never examined keep the system active even if nothing fits
    there; a step will mark them dead first.
    """
    if len(sim.frontier_positions) > 0:
        return Progress.ACTIVE
    for p in sim.masked_frontier():
        if p not in sim.dead and sim.fitting_indices(p):
            return Progress.PAUSED
    return Progress.TERMINAL


def is_terminal(sim) -> bool:
    return terminal_status(sim) is Progress.TERMINAL


def usage_stats(sim) -> dict[str, int]:
    """Placed-tile counts per type name, including zeros, in set order."""
    counts = Counter(sim.type_name(pl.type_index)
                     for pl in sim.assembly.occupancy.values())
    return {t.name: counts.get(t.name, 0) for t in sim.tas.tile_set}


def duplicate_glue_groups(tile_set: TileSet) -> list[list[str]]:
    """Groups of type names with identical glues on every side.

    Such types are interchangeable as far as attachment is concerned;
    editors flag them as likely redundancy.
    """
    groups: dict[tuple, list[str]] = {}
    for t in tile_set:
        groups.setdefault(t.glues, []).append(t.name)
    return [names for names in groups.values() if len(names) > 1]
