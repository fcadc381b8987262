"""Labelled layered graphs on finite atomic measure spaces.

A graph holds finitely many atoms (vertices) with positive rational weights,
a layer assignment ``0..height``, and labelled directed edges.  Each label
acts as a partial weight-preserving bijection that advances exactly one
layer, so statements about images, channels, duals, and flows all reduce to
exact rational identities on atoms.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InputError

Edge = tuple[str, str, str]  # (tail, head, label)
VertexSet = frozenset[str]

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class LayeredMeasureGraph:
    """Finite atomic measure space with labelled layer-advancing edges."""

    atoms: dict[str, Fraction]  # vertex id -> weight (> 0)
    layer: dict[str, int]       # vertex id -> layer in 0..height
    height: int
    labels: frozenset[str]
    edges: frozenset[Edge]

    @classmethod
    def build(cls, vertices, edges, height=None, labels=None) -> "LayeredMeasureGraph":
        """Convenience constructor.

        ``vertices``: iterable of ``(id, layer, weight)``;
        ``edges``: iterable of ``(tail, head, label)``.
        """
        atoms = {v: Fraction(w) for v, _, w in vertices}
        layer = {v: l for v, l, _ in vertices}
        edge_set = frozenset(tuple(e) for e in edges)
        if height is None:
            height = max(max(layer.values(), default=1), 1)
        if labels is None:
            labels = frozenset(a for _, _, a in edge_set)
        return cls(atoms, layer, height, frozenset(labels), edge_set)

    def weight(self, vertices: Iterable[str]) -> Fraction:
        return sum((self.atoms[v] for v in vertices), Fraction(0))

    def total_weight(self) -> Fraction:
        return self.weight(self.atoms)

    def layer_set(self, i: int) -> VertexSet:
        return frozenset(v for v, l in self.layer.items() if l == i)


def validate(g: LayeredMeasureGraph) -> list[str]:
    """Check every structural invariant; one message per violation (empty = valid).

    Violations are data, not failures: any candidate structure is accepted.
    """
    found: list[str] = []
    if g.height < 1:
        found.append(f"height must be at least 1 (got {g.height})")
    for v in sorted(set(g.layer) - set(g.atoms)):
        found.append(f"layer entry for unknown vertex ({v})")
    for v in sorted(set(g.atoms) - set(g.layer)):
        found.append(f"missing layer for vertex ({v})")
    for v in sorted(g.atoms):
        if g.atoms[v] <= 0:
            found.append(f"nonpositive weight at ({v})")
        l = g.layer.get(v)
        if l is not None and not 0 <= l <= g.height:
            found.append(f"layer out of range at ({v}): {l} not in 0..{g.height}")
    out_count: Counter = Counter()
    in_count: Counter = Counter()
    for t, h, a in sorted(g.edges):
        if t not in g.atoms or h not in g.atoms:
            found.append(f"edge references unknown vertex ({t},{h},{a})")
            continue
        if a not in g.labels:
            found.append(f"edge references unknown label ({t},{h},{a})")
        out_count[(t, a)] += 1
        in_count[(h, a)] += 1
        if g.atoms[t] != g.atoms[h]:
            found.append(f"edge weight mismatch ({t},{h},{a})")
        lt, lh = g.layer.get(t), g.layer.get(h)
        if lt is not None and lh is not None and lh != lt + 1:
            found.append(f"edge layer step ({t},{h},{a})")
    bad_pairs = {pair for pair, c in out_count.items() if c > 1}
    bad_pairs |= {pair for pair, c in in_count.items() if c > 1}
    for v, a in sorted(bad_pairs):
        found.append(f"label functionality at ({v},{a})")
    return found


def require_valid(g: LayeredMeasureGraph) -> None:
    violations = validate(g)
    if violations:
        raise InputError("invalid graph: " + "; ".join(violations))


def _check_vertices(g: LayeredMeasureGraph, S: Iterable[str]) -> frozenset[str]:
    S = frozenset(S)
    unknown = S - set(g.atoms)
    if unknown:
        raise InputError(f"unknown vertex ({sorted(unknown)[0]})")
    return S


def successors(g: LayeredMeasureGraph) -> dict[str, frozenset[str]]:
    """Forward adjacency over all labels."""
    out: dict[str, set[str]] = {}
    for t, h, _ in g.edges:
        out.setdefault(t, set()).add(h)
    return {v: frozenset(s) for v, s in out.items()}


def predecessors(g: LayeredMeasureGraph) -> dict[str, frozenset[str]]:
    out: dict[str, set[str]] = {}
    for t, h, _ in g.edges:
        out.setdefault(h, set()).add(t)
    return {v: frozenset(s) for v, s in out.items()}


def image(g: LayeredMeasureGraph, S: Iterable[str], label: str,
          direction: str = FORWARD) -> VertexSet:
    """One-step image of ``S`` under a single label, forward or backward."""
    if label not in g.labels:
        raise InputError(f"unknown label ({label})")
    S = _check_vertices(g, S)
    if direction == FORWARD:
        return frozenset(h for t, h, a in g.edges if a == label and t in S)
    if direction == BACKWARD:
        return frozenset(t for t, h, a in g.edges if a == label and h in S)
    raise InputError(f"direction must be '{FORWARD}' or '{BACKWARD}' (got {direction!r})")


def iterated_image(g: LayeredMeasureGraph, S: Iterable[str], steps: int) -> VertexSet:
    """``steps``-fold image (union over all labels per step); negative steps go backward."""
    S = _check_vertices(g, S)
    if steps == 0:
        return S
    step_map = successors(g) if steps > 0 else predecessors(g)
    cur = S
    for _ in range(abs(steps)):
        cur = frozenset(u for v in cur for u in step_map.get(v, ()))
    return cur


def induced_subgraph(g: LayeredMeasureGraph, W: Iterable[str]) -> LayeredMeasureGraph:
    """Restrict to ``W``: keeps edges with both endpoints inside, same label set."""
    W = _check_vertices(g, W)
    return LayeredMeasureGraph(
        atoms={v: g.atoms[v] for v in W},
        layer={v: g.layer[v] for v in W},
        height=g.height,
        labels=g.labels,
        edges=frozenset(e for e in g.edges if e[0] in W and e[1] in W),
    )


def _closure(start: Iterable[str], step_map: dict[str, frozenset[str]]) -> frozenset[str]:
    seen = set(start)
    frontier = list(seen)
    while frontier:
        v = frontier.pop()
        for u in step_map.get(v, ()):
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    return frozenset(seen)


def channel(g: LayeredMeasureGraph, S: Iterable[str], T: Iterable[str]) -> LayeredMeasureGraph:
    """Induced subgraph on every vertex lying on a forward path from S to T.

    Disconnected S and T give the empty graph.
    """
    S = _check_vertices(g, S)
    T = _check_vertices(g, T)
    on_paths = _closure(S, successors(g)) & _closure(T, predecessors(g))
    return induced_subgraph(g, on_paths)


def dual(g: LayeredMeasureGraph) -> LayeredMeasureGraph:
    """Reverse every edge and flip the layer order; an involution."""
    return LayeredMeasureGraph(
        atoms=dict(g.atoms),
        layer={v: g.height - l for v, l in g.layer.items()},
        height=g.height,
        labels=g.labels,
        edges=frozenset((h, t, a) for t, h, a in g.edges),
    )


def flow(g: LayeredMeasureGraph) -> Fraction:
    """Weight-integral of out-degrees over the bottom layer of a 1-layered graph.

    Equals the sum over labels of the total weight of that label's edge tails,
    and matches the dual graph's flow exactly.
    """
    if g.height != 1:
        raise InputError(f"flow needs a 1-layered graph (height {g.height})")
    return sum((g.atoms[t] for t, _, _ in g.edges), Fraction(0))


def truncate(g: LayeredMeasureGraph, k: int) -> LayeredMeasureGraph:
    """Induced subgraph on layers 0..k, re-declared as a k-layered graph."""
    if not 1 <= k <= g.height:
        raise InputError(f"truncation layer {k} not in 1..{g.height}")
    sub = induced_subgraph(g, (v for v, l in g.layer.items() if l <= k))
    return LayeredMeasureGraph(sub.atoms, sub.layer, k, sub.labels, sub.edges)
