"""Magnification ratios, weighted cutsets, and the graph growth inequality.

The magnification ratio of order j is the minimum of
weight(j-step image of Y) / weight(Y) over nonempty bottom-layer subsets Y.
It is computed either by exhaustive subset enumeration or by iterated
min-cuts; both are exact and agree, including on tie-broken witnesses.

Cutsets are vertex sets meeting every bottom-to-top path; their weight
discounts layer j by C**-j.  A minimum-weight cutset comes from a
vertex-splitting min-cut with exact integer capacities, and ``cutset_push``
moves cutset mass one layer down while controlling the weight increase.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .commutativity import is_commutative
from .errors import HypothesisError, InputError
from .graphcore import (LayeredMeasureGraph, VertexSet, _check_vertices,
                        iterated_image, predecessors, require_valid, successors)
from .maxflow import FlowNetwork, common_scale, min_ratio_bruteforce, min_ratio_mincut
from .rational import format_rational
from .reports import VerificationReport

BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class MagnificationResult:
    value: Fraction
    witness: VertexSet  # nonempty minimizing bottom-layer subset
    method: str         # "brute" | "mincut"


@dataclass(frozen=True)
class CutsetReport:
    cutset: VertexSet
    weight: Fraction
    C: Fraction
    is_minimal: bool


def _check_order(g: LayeredMeasureGraph, j: int) -> None:
    if not 1 <= j <= g.height:
        raise InputError(f"order {j} not in 1..{g.height}")


def _bottom_relation(g: LayeredMeasureGraph, j: int) -> dict[str, frozenset[str]]:
    return {v: iterated_image(g, frozenset([v]), j) for v in g.layer_set(0)}


def magnification_bruteforce(g: LayeredMeasureGraph, j: int,
                             limit: int = BRUTE_FORCE_LIMIT) -> MagnificationResult:
    """Exact minimum over all nonempty bottom-layer subsets.

    Ties go to the lexicographically smallest vertex-id set.  Refuses layers
    bigger than ``limit``; use :func:`magnification_mincut` for those.
    """
    require_valid(g)
    _check_order(g, j)
    bottom = g.layer_set(0)
    if not bottom:
        raise InputError("layer 0 is empty")
    if len(bottom) > limit:
        raise InputError(
            f"layer 0 has {len(bottom)} vertices, over the brute-force limit "
            f"{limit}; use magnification_mincut")
    value, witness = min_ratio_bruteforce(sorted(bottom), _bottom_relation(g, j),
                                          g.atoms, g.atoms)
    return MagnificationResult(value, witness, "brute")


def magnification_mincut(g: LayeredMeasureGraph, j: int) -> MagnificationResult:
    """Same value and witness as the brute-force method, via iterated min-cuts."""
    require_valid(g)
    _check_order(g, j)
    bottom = g.layer_set(0)
    if not bottom:
        raise InputError("layer 0 is empty")
    value, witness, _trace = min_ratio_mincut(sorted(bottom), _bottom_relation(g, j),
                                              g.atoms, g.atoms)
    return MagnificationResult(value, witness, "mincut")


def cut_weight(g: LayeredMeasureGraph, S: Iterable[str], C) -> Fraction:
    """Layer-discounted weight: sum over v in S of C**-layer(v) * weight(v)."""
    C = Fraction(C)
    if C <= 0:
        raise InputError("C must be positive")
    S = _check_vertices(g, S)
    return sum((C ** (-g.layer[v]) * g.atoms[v] for v in S), Fraction(0))


def is_cutset(g: LayeredMeasureGraph, S: Iterable[str]) -> bool:
    """True iff no bottom-to-top path avoids S (endpoints count as hits)."""
    S = _check_vertices(g, S)
    step = successors(g)
    top = g.layer_set(g.height)
    seen = set(v for v in g.layer_set(0) if v not in S)
    if seen & top:
        return False
    frontier = list(seen)
    while frontier:
        v = frontier.pop()
        for u in step.get(v, ()):
            if u in S or u in seen:
                continue
            if u in top:
                return False
            seen.add(u)
            frontier.append(u)
    return True


def _cutset_scale(g: LayeredMeasureGraph, C: Fraction):
    wc = {v: C ** (-g.layer[v]) * g.atoms[v] for v in g.atoms}
    scale = common_scale(wc.values())
    return {v: int(w * scale) for v, w in wc.items()}, scale


def _cutset_flow(g: LayeredMeasureGraph, wci: dict[str, int],
                 removed: frozenset, infinite: frozenset) -> int:
    """Min cut between layer 0 and layer h with split-vertex capacities.

    ``removed`` vertices are deleted outright (their weight is accounted by
    the caller); ``infinite`` vertices may not be cut.
    """
    ids = sorted(g.atoms)
    index = {v: i for i, v in enumerate(ids)}
    inf = 1 + sum(w for v, w in wci.items() if v not in removed)
    net = FlowNetwork(2 + 2 * len(ids))
    v_in = lambda v: 2 + 2 * index[v]
    v_out = lambda v: 3 + 2 * index[v]
    for v in ids:
        if v in removed:
            continue
        net.add_edge(v_in(v), v_out(v), inf if v in infinite else wci[v])
    for t, h in sorted({(t, h) for t, h, _ in g.edges}):
        if t in removed or h in removed:
            continue
        net.add_edge(v_out(t), v_in(h), inf)
    for v in sorted(g.layer_set(0)):
        if v not in removed:
            net.add_edge(0, v_in(v), inf)
    for v in sorted(g.layer_set(g.height)):
        if v not in removed:
            net.add_edge(v_out(v), 1, inf)
    return net.max_flow(0, 1)


def min_weight_cutset(g: LayeredMeasureGraph, C) -> CutsetReport:
    """A minimum-weight cutset, tie-broken to the lexicographically smallest set.

    The minimum value comes from one vertex-splitting min-cut; the canonical
    witness is then grown greedily with forced in/out feasibility cuts.
    """
    C = Fraction(C)
    if C <= 0:
        raise InputError("C must be positive")
    require_valid(g)
    wci, scale = _cutset_scale(g, C)
    minimum = _cutset_flow(g, wci, frozenset(), frozenset())
    ids = sorted(g.atoms)
    included: list[str] = []
    excluded: list[str] = []
    pos = 0
    while True:
        if sum(wci[v] for v in included) == minimum and is_cutset(g, included):
            break
        progressed = False
        for idx in range(pos, len(ids)):
            chosen = frozenset(included) | {ids[idx]}
            barred = frozenset(excluded) | frozenset(ids[pos:idx])
            value = _cutset_flow(g, wci, chosen, barred)
            if value + sum(wci[v] for v in chosen) == minimum:
                excluded.extend(ids[pos:idx])
                included.append(ids[idx])
                pos = idx + 1
                progressed = True
                break
        if not progressed:
            raise RuntimeError("minimum cutset extraction failed")
    return CutsetReport(cutset=frozenset(included), weight=Fraction(minimum, scale),
                        C=C, is_minimal=True)


def push_penalty(label_count: int, C, eps) -> Fraction:
    """Slack added by one push of a cutset that was within eps of optimal."""
    C, eps = Fraction(C), Fraction(eps)
    return eps + 4 * label_count ** 2 * C * eps + 4 * label_count ** 2 * eps


def cutset_push(g: LayeredMeasureGraph, S: Iterable[str], C, j: int) -> VertexSet:
    """Replace the layer-j part of a cutset by the layer j-1 vertices it shields.

    ``S`` must be a cutset inside layers 0..j plus the top layer.  Dropping
    S's layer-j part and adding, at layer j-1, every vertex that is both
    reachable from the bottom along S-avoiding paths and two steps away from
    the still-uncut part of the top-bound flow gives a cutset inside layers
    0..j-1 plus the top.  If S was within eps of the optimal weight for C,
    the result is within eps + push_penalty(labels, C, eps) of it; at eps = 0
    exact minimality is preserved.  (Both endpoint conditions matter: adding
    the whole reachable layer j-1 would break the weight bound whenever S
    cuts the flow elsewhere.)
    """
    C = Fraction(C)
    if C <= 0:
        raise InputError("C must be positive")
    require_valid(g)
    if not 1 <= j <= g.height - 1:
        raise InputError(f"push layer {j} not in 1..{g.height - 1}")
    S = _check_vertices(g, S)
    allowed = set(range(0, j + 1)) | {g.height}
    outside = sorted(v for v in S if g.layer[v] not in allowed)
    if outside:
        raise InputError(
            f"cutset vertex ({outside[0]}) lies in layer {g.layer[outside[0]]}, "
            f"outside 0..{j} and {g.height}")
    if not is_cutset(g, S):
        raise InputError("S is not a cutset")
    step = successors(g)
    seen = set(v for v in g.layer_set(0) if v not in S)
    frontier = list(seen)
    while frontier:
        v = frontier.pop()
        for u in step.get(v, ()):
            if u not in S and u not in seen:
                seen.add(u)
                frontier.append(u)
    shield = frozenset(v for v in seen if g.layer[v] == j - 1)
    # layer j+1 vertices that still reach the top once S's top part is gone
    back = predecessors(g)
    live = set(g.layer_set(g.height) - S)
    frontier = list(live)
    while frontier:
        v = frontier.pop()
        for u in back.get(v, ()):
            if u not in live:
                live.add(u)
                frontier.append(u)
    gate = {v for v in live if g.layer[v] == j + 1}
    feeders = {t for u in gate for t in back.get(u, ())}
    funnel = {t for x in feeders for t in back.get(x, ())}
    middle = frozenset(v for v in S if g.layer[v] == j)
    return (S | (shield & funnel)) - middle


def verify_graph_plunnecke(g: LayeredMeasureGraph,
                           instance: str = "graph") -> VerificationReport:
    """Check D_j ** h >= D_h ** j for every order j of a commutative graph.

    The report's lhs/rhs show the tightest nontrivial comparison (or the
    first failing one); per-order values sit in the details.
    """
    verdict = is_commutative(g)
    if not verdict.holds:
        raise HypothesisError(
            f"graph is not commutative (edge {verdict.failing_edge})",
            payload=verdict)
    h = g.height
    ratio = {j: magnification_mincut(g, j) for j in range(1, h + 1)}
    checks = []
    for j in range(1, h + 1):
        lhs, rhs = ratio[j].value ** h, ratio[h].value ** j
        checks.append({"j": j, "lhs": lhs, "rhs": rhs, "holds": lhs >= rhs})
    failing = [c for c in checks if not c["holds"]]
    if failing:
        shown = failing[0]
    elif h == 1:
        shown = checks[0]
    else:
        shown = min(checks[:-1], key=lambda c: (c["lhs"] - c["rhs"], c["j"]))
    return VerificationReport(
        instance=instance,
        theorem="thm-3.5",
        lhs=shown["lhs"],
        rhs=shown["rhs"],
        holds=not failing,
        witness=sorted(ratio[h].witness),
        details={
            "d": {str(j): format_rational(ratio[j].value) for j in ratio},
            "checks": [
                {"j": c["j"], "lhs": format_rational(c["lhs"]),
                 "rhs": format_rational(c["rhs"]), "holds": c["holds"]}
                for c in checks
            ],
        },
    )


def verify_bottom_layer_minimal(g: LayeredMeasureGraph, C,
                                instance: str = "graph") -> VerificationReport:
    """Check that layer 0 attains the minimum cutset weight when C**h <= D_h."""
    C = Fraction(C)
    if C <= 0:
        raise InputError("C must be positive")
    verdict = is_commutative(g)
    if not verdict.holds:
        raise HypothesisError(
            f"graph is not commutative (edge {verdict.failing_edge})",
            payload=verdict)
    top_ratio = magnification_mincut(g, g.height).value
    if C ** g.height > top_ratio:
        raise HypothesisError(
            f"C^h = {format_rational(C ** g.height)} exceeds the top "
            f"magnification ratio {format_rational(top_ratio)}",
            payload={"C": format_rational(C), "d_h": format_rational(top_ratio)})
    bottom_weight = cut_weight(g, g.layer_set(0), C)
    report = min_weight_cutset(g, C)
    return VerificationReport(
        instance=instance,
        theorem="cor-3.4",
        lhs=bottom_weight,
        rhs=report.weight,
        holds=bottom_weight == report.weight,
        witness=sorted(report.cutset),
        details={"C": format_rational(C), "d_h": format_rational(top_ratio)},
    )
