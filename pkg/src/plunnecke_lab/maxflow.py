"""Integer max-flow and exact minimum-ratio solvers.

Capacities are arbitrary-precision integers (rational inputs get scaled by a
common denominator), so min-cut values and every ratio computed here are
exact.  The ratio solvers minimize  weight(N(S)) / weight(S)  over nonempty
subsets S of a source set, where N(S) is the union of per-source neighbor
sets; ties are broken toward the lexicographically smallest witness.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import lcm

from .errors import InputError


class FlowNetwork:
    """Adjacency-list max-flow with BFS augmenting paths."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[list[int]]] = [[] for _ in range(n)]  # [to, cap, rev]

    def add_edge(self, u: int, v: int, cap: int) -> None:
        self.adj[u].append([v, cap, len(self.adj[v])])
        self.adj[v].append([u, 0, len(self.adj[u]) - 1])

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            parent: list[tuple[int, int] | None] = [None] * self.n
            parent[s] = (s, -1)
            queue = deque([s])
            while queue and parent[t] is None:
                v = queue.popleft()
                for i, (to, cap, _rev) in enumerate(self.adj[v]):
                    if cap > 0 and parent[to] is None:
                        parent[to] = (v, i)
                        queue.append(to)
            if parent[t] is None:
                return total
            path = []
            v = t
            while v != s:
                pv, pi = parent[v]
                path.append((pv, pi))
                v = pv
            push = min(self.adj[pv][pi][1] for pv, pi in path)
            for pv, pi in path:
                edge = self.adj[pv][pi]
                edge[1] -= push
                self.adj[edge[0]][edge[2]][1] += push
            total += push

    def source_side(self, s: int) -> set[int]:
        """Vertices reachable from s in the residual network (the minimal min cut)."""
        seen = {s}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for to, cap, _rev in self.adj[v]:
                if cap > 0 and to not in seen:
                    seen.add(to)
                    queue.append(to)
        return seen


def lex_less(a: int, b: int) -> bool:
    """Lexicographic order on index sets encoded as bitmasks (bit i = i-th id).

    Matches tuple comparison of the sorted index sequences, so the empty set
    is smallest and {0} < {0, 1} < {1}.
    """
    if a == b:
        return False
    if a == 0:
        return True
    if b == 0:
        return False
    low = (a ^ b) & -(a ^ b)
    if a & low:
        return (b >> low.bit_length()) != 0
    return (a >> low.bit_length()) == 0


def common_scale(values) -> int:
    scale = 1
    for v in values:
        scale = lcm(scale, Fraction(v).denominator)
    return scale


def _integerize(sources, neighbors, source_weight, target_weight):
    targets = sorted({u for s in sources for u in neighbors[s]})
    scale = common_scale(
        [source_weight[s] for s in sources] + [target_weight[u] for u in targets]
    )
    sw = [int(Fraction(source_weight[s]) * scale) for s in sources]
    dw = [int(Fraction(target_weight[u]) * scale) for u in targets]
    tindex = {u: i for i, u in enumerate(targets)}
    nbr = [sorted(tindex[u] for u in neighbors[s]) for s in sources]
    return targets, sw, dw, nbr


def min_ratio_bruteforce(sources, neighbors, source_weight, target_weight,
                         limit: int = 22) -> tuple[Fraction, frozenset]:
    """Enumerate every nonempty subset of ``sources`` exactly.

    Subset images and weights are built incrementally over bitmasks, with all
    arithmetic on scaled integers.
    """
    sources = sorted(sources)
    n = len(sources)
    if n == 0:
        raise InputError("empty source set")
    if n > limit:
        raise InputError(f"brute force limited to {limit} sources (got {n})")
    _targets, sw, dw, nbr = _integerize(sources, neighbors, source_weight, target_weight)
    nmask = [0] * n
    for i in range(n):
        for k in nbr[i]:
            nmask[i] |= 1 << k
    size = 1 << n
    imgs = [0] * size
    img_w = [0] * size
    set_w = [0] * size
    best_num = best_den = 0
    best_mask = 0
    for m in range(1, size):
        low = m & -m
        i = low.bit_length() - 1
        rest = m ^ low
        added = nmask[i] & ~imgs[rest]
        imgs[m] = imgs[rest] | added
        w = img_w[rest]
        while added:
            b = added & -added
            w += dw[b.bit_length() - 1]
            added ^= b
        img_w[m] = w
        set_w[m] = set_w[rest] + sw[i]
        if best_mask == 0:
            best_num, best_den, best_mask = w, set_w[m], m
            continue
        diff = w * best_den - best_num * set_w[m]
        if diff < 0 or (diff == 0 and lex_less(m, best_mask)):
            best_num, best_den, best_mask = w, set_w[m], m
    witness = frozenset(sources[i] for i in range(n) if best_mask >> i & 1)
    return Fraction(best_num, best_den), witness


def min_ratio_mincut(sources, neighbors, source_weight, target_weight
                     ) -> tuple[Fraction, frozenset, tuple[Fraction, ...]]:
    """Iterative ratio minimization over min-cuts.

    Starting from the full-set ratio, each round finds a nonempty minimizer
    of weight(N(S)) - lam * weight(S) as the source side of a min cut and
    re-normalizes lam; it stops when that minimum hits zero.  The returned
    trace holds the strictly decreasing lam sequence.  The witness is the
    lexicographically smallest minimizing subset, extracted with forced
    in/out min-cut feasibility queries.
    """
    sources = sorted(sources)
    if not sources:
        raise InputError("empty source set")
    zeros = sorted(s for s in sources if not neighbors[s])
    if zeros:
        return Fraction(0), frozenset({zeros[0]}), (Fraction(0),)
    _targets, sw, dw, nbr = _integerize(sources, neighbors, source_weight, target_weight)
    n, m = len(sources), len(dw)
    total_src = sum(sw)
    total_dst = sum(dw)

    def solve(num: int, den: int, forced_in=frozenset(), forced_out=frozenset()):
        # nodes: 0 source, 1 sink, 2..2+n-1 the sources, then the targets
        inf = num * total_src + den * total_dst + 1
        net = FlowNetwork(2 + n + m)
        for i in range(n):
            net.add_edge(0, 2 + i, inf if i in forced_in else num * sw[i])
            if i in forced_out:
                net.add_edge(2 + i, 1, inf)
            for k in nbr[i]:
                net.add_edge(2 + i, 2 + n + k, inf)
        for k in range(m):
            net.add_edge(2 + n + k, 1, den * dw[k])
        value = net.max_flow(0, 1)
        side = net.source_side(0)
        return value, frozenset(i for i in range(n) if 2 + i in side)

    lam = Fraction(total_dst, total_src)
    trace = [lam]
    limit = max(4, n * m + 2)
    for _ in range(limit):
        value, side = solve(lam.numerator, lam.denominator)
        if value == lam.numerator * total_src:
            break
        if not side:
            raise RuntimeError("improving cut came back empty")
        img = set()
        for i in side:
            img.update(nbr[i])
        new_lam = Fraction(sum(dw[k] for k in img), sum(sw[i] for i in side))
        if not new_lam < lam:
            raise RuntimeError("ratio iteration failed to decrease")
        lam = new_lam
        trace.append(lam)
    else:
        raise RuntimeError(f"ratio iteration exceeded its bound of {limit}")

    num, den = lam.numerator, lam.denominator

    def attains_optimum(index_set) -> bool:
        img = set()
        for i in index_set:
            img.update(nbr[i])
        return den * sum(dw[k] for k in img) == num * sum(sw[i] for i in index_set)

    included: list[int] = []
    excluded: list[int] = []
    pos = 0
    while True:
        if included and attains_optimum(included):
            break
        progressed = False
        for idx in range(pos, n):
            value, _side = solve(num, den,
                                 forced_in=frozenset(included) | {idx},
                                 forced_out=frozenset(excluded) | frozenset(range(pos, idx)))
            if value == num * total_src:
                excluded.extend(range(pos, idx))
                included.append(idx)
                pos = idx + 1
                progressed = True
                break
        if not progressed:
            raise RuntimeError("no witness at the optimal ratio")
    witness = frozenset(sources[i] for i in included)
    return lam, witness, tuple(trace)
