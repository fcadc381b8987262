"""Commutativity of layered measure graphs, decided by bipartite matching.

For every edge (x, y, a) the edges leaving y must inject into the edges
leaving x so that matched heads are joined by an a-labelled edge.  A graph is
commutative when this holds for the graph and for its dual.  Each injection
is found (or refuted) with an augmenting-path maximum matching; instances
are tiny because vertex degrees are bounded by the number of labels.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphcore import Edge, LayeredMeasureGraph, dual, require_valid

Injection = tuple[tuple[Edge, Edge], ...]


@dataclass(frozen=True)
class CommutativityVerdict:
    holds: bool
    failing_edge: Edge | None = None
    matching_witnesses: dict[Edge, Injection] | None = None


def _saturating_matching(adjacency: list[list[int]], n_right: int) -> list[int] | None:
    """Left-saturating matching via augmenting paths; None when impossible."""
    match_right = [-1] * n_right
    match_left = [-1] * len(adjacency)

    def augment(li: int, seen: set[int]) -> bool:
        for ri in adjacency[li]:
            if ri in seen:
                continue
            seen.add(ri)
            if match_right[ri] == -1 or augment(match_right[ri], seen):
                match_right[ri] = li
                match_left[li] = ri
                return True
        return False

    for li in range(len(adjacency)):
        if not augment(li, set()):
            return None
    return match_left


def is_semi_commutative(g: LayeredMeasureGraph) -> CommutativityVerdict:
    """Check the forward injection condition edge by edge.

    On failure the first failing edge in (tail, head, label) order is
    reported; on success the verdict carries one witness injection per edge.
    """
    require_valid(g)
    out_edges: dict[str, list[Edge]] = {}
    for e in sorted(g.edges):
        out_edges.setdefault(e[0], []).append(e)
    witnesses: dict[Edge, Injection] = {}
    for x, y, a in sorted(g.edges):
        need = out_edges.get(y, [])
        pool = out_edges.get(x, [])
        adjacency = [
            [fi for fi, f in enumerate(pool) if (f[1], e[1], a) in g.edges]
            for e in need
        ]
        matching = _saturating_matching(adjacency, len(pool))
        if matching is None:
            return CommutativityVerdict(False, (x, y, a), None)
        witnesses[(x, y, a)] = tuple((need[ei], pool[fi]) for ei, fi in enumerate(matching))
    return CommutativityVerdict(True, None, witnesses)


def is_commutative(g: LayeredMeasureGraph) -> CommutativityVerdict:
    """Semi-commutativity of the graph and of its dual.

    A failure found only in the dual check reports the offending dual edge,
    i.e. with reversed orientation relative to ``g``.
    """
    first = is_semi_commutative(g)
    if not first.holds:
        return first
    second = is_semi_commutative(dual(g))
    if not second.holds:
        return second
    merged = dict(first.matching_witnesses or {})
    merged.update(second.matching_witnesses or {})
    return CommutativityVerdict(True, None, merged)


def check_witnesses(g: LayeredMeasureGraph, verdict: CommutativityVerdict) -> bool:
    """Re-verify a positive verdict: injectivity plus head-compatibility.

    The dual's witnesses are keyed by dual edges; each entry is checked
    against the edge set its key belongs to (a triple cannot occur in both,
    since edges always advance one layer).
    """
    if not verdict.holds or verdict.matching_witnesses is None:
        return False
    dual_edges = dual(g).edges
    for key, pairs in verdict.matching_witnesses.items():
        if key in g.edges:
            edge_set = g.edges
        elif key in dual_edges:
            edge_set = dual_edges
        else:
            return False
        x, y, a = key
        targets = [phi for _, phi in pairs]
        if len(set(targets)) != len(targets):
            return False
        for e, phi in pairs:
            if e[0] != y or phi[0] != x or e not in edge_set or phi not in edge_set:
                return False
            if (phi[1], e[1], a) not in edge_set:
                return False
    return True
