"""Finite abelian group actions and their magnification ratios.

A group Z/n_1 x ... x Z/n_d acts on a finite atomic probability space by
weight-preserving permutations, one permutation per coordinate generator.
Orbit graphs of such actions are the canonical commutative layered graphs,
and the dynamical ratio c(A, B) = min over nonempty B' of mu(A.B')/mu(B')
mirrors the bottom-layer magnification of those graphs exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InputError
from .commutativity import is_commutative
from .graphcore import LayeredMeasureGraph, induced_subgraph
from .magnification import MagnificationResult
from .maxflow import common_scale, min_ratio_bruteforce, min_ratio_mincut
from .rational import format_rational
from .reports import VerificationReport

SpaceSet = frozenset[str]

C_DELTA_LIMIT = 20
_BRUTE_AUTO_LIMIT = 10


def vec_id(vec: tuple[int, ...]) -> str:
    return ",".join(str(x) for x in vec)


@dataclass(frozen=True)
class FinAbGroup:
    """Z/n_1 x ... x Z/n_d with componentwise addition."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        if not self.moduli or any(n < 1 or not isinstance(n, int) for n in self.moduli):
            raise InputError(f"moduli must be positive integers (got {self.moduli})")

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        out = 1
        for n in self.moduli:
            out *= n
        return out

    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def reduce(self, vec) -> tuple[int, ...]:
        vec = tuple(vec)
        if len(vec) != self.rank:
            raise InputError(f"element {vec} has wrong rank for moduli {self.moduli}")
        return tuple(int(x) % n for x, n in zip(vec, self.moduli))

    def add(self, u, v) -> tuple[int, ...]:
        return tuple((a + b) % n for a, b, n in zip(u, v, self.moduli))

    def elements(self):
        return itertools.product(*(range(n) for n in self.moduli))


@dataclass(frozen=True)
class GroupSet:
    """A finite subset of a group, stored as reduced residue vectors."""

    group: FinAbGroup
    elements: frozenset[tuple[int, ...]]

    @classmethod
    def of(cls, group: FinAbGroup, elements) -> "GroupSet":
        return cls(group, frozenset(group.reduce(e) for e in elements))


def product_set(A: GroupSet, B: GroupSet) -> GroupSet:
    """Exact sumset {a + b} inside the common group."""
    if A.group != B.group:
        raise InputError("sets live in different groups")
    g = A.group
    return GroupSet(g, frozenset(g.add(a, b) for a in A.elements for b in B.elements))


def iterate(A: GroupSet, k: int) -> GroupSet:
    """k-fold sumset; k = 0 gives the identity singleton."""
    if k < 0:
        raise InputError(f"iteration count must be nonnegative (got {k})")
    if k == 0:
        return GroupSet(A.group, frozenset({A.group.identity()}))
    out = A
    for _ in range(k - 1):
        out = product_set(out, A)
    return out


@dataclass(frozen=True)
class FiniteAction:
    """A group acting by weight-preserving permutations on a probability space.

    One permutation per coordinate generator; the permutations must commute
    pairwise and have orders dividing their moduli, so they extend to a
    well-defined action of the whole group.
    """

    group: FinAbGroup
    atoms: dict[str, Fraction]
    generator_perms: tuple[dict[str, str], ...]

    def apply(self, element, atom: str) -> str:
        element = self.group.reduce(element)
        for perm, times in zip(self.generator_perms, element):
            for _ in range(times):
                atom = perm[atom]
        return atom


def validate_action(act: FiniteAction) -> list[str]:
    found: list[str] = []
    if len(act.generator_perms) != act.group.rank:
        found.append(
            f"need {act.group.rank} generator permutations (got {len(act.generator_perms)})")
        return found
    atoms = set(act.atoms)
    for v in sorted(atoms):
        if act.atoms[v] <= 0:
            found.append(f"nonpositive weight at ({v})")
    total = sum(act.atoms.values(), Fraction(0))
    if total != 1:
        found.append(f"weights must sum to 1 (got {format_rational(total)})")
    for i, perm in enumerate(act.generator_perms):
        if set(perm) != atoms or set(perm.values()) != atoms:
            found.append(f"generator {i} is not a permutation of the atoms")
            return found
        for v in sorted(atoms):
            if act.atoms[perm[v]] != act.atoms[v]:
                found.append(f"generator {i} changes the weight of ({v})")
    for i in range(len(act.generator_perms)):
        for j in range(i + 1, len(act.generator_perms)):
            pi, pj = act.generator_perms[i], act.generator_perms[j]
            for v in sorted(atoms):
                if pi[pj[v]] != pj[pi[v]]:
                    found.append(f"generators {i} and {j} do not commute at ({v})")
                    break
    for i, (perm, n) in enumerate(zip(act.generator_perms, act.group.moduli)):
        for v in sorted(atoms):
            w = v
            for _ in range(n):
                w = perm[w]
            if w != v:
                found.append(f"generator {i} order does not divide {n} at ({v})")
                break
    return found


def require_valid_action(act: FiniteAction) -> None:
    violations = validate_action(act)
    if violations:
        raise InputError("invalid action: " + "; ".join(violations))


def _check_atoms(act: FiniteAction, S: Iterable[str]) -> SpaceSet:
    S = frozenset(S)
    unknown = S - set(act.atoms)
    if unknown:
        raise InputError(f"unknown atom ({sorted(unknown)[0]})")
    return S


def _check_group_set(act: FiniteAction, A: GroupSet) -> None:
    if A.group != act.group:
        raise InputError("translate set lives in a different group")


def move_set(act: FiniteAction, A: GroupSet, S: Iterable[str]) -> SpaceSet:
    """A.S = {a.x : a in A, x in S}; distributes over unions of atoms."""
    _check_group_set(act, A)
    S = _check_atoms(act, S)
    return frozenset(act.apply(a, x) for a in A.elements for x in S)


def measure(act: FiniteAction, S: Iterable[str]) -> Fraction:
    return sum((act.atoms[x] for x in S), Fraction(0))


def translation_action(group: FinAbGroup) -> FiniteAction:
    """The group acting on itself by addition, with uniform weights."""
    ids = {e: vec_id(e) for e in group.elements()}
    weight = Fraction(1, group.order)
    perms = []
    for i in range(group.rank):
        unit = tuple(1 if k == i else 0 for k in range(group.rank))
        perms.append({ids[e]: ids[group.add(e, unit)] for e in group.elements()})
    return FiniteAction(group, {ids[e]: weight for e in group.elements()}, tuple(perms))


def product_action(first: FiniteAction, second: FiniteAction) -> FiniteAction:
    """Direct-sum group acting coordinatewise on the product space."""
    group = FinAbGroup(first.group.moduli + second.group.moduli)
    atoms = {
        f"{x}|{y}": wx * wy
        for x, wx in first.atoms.items()
        for y, wy in second.atoms.items()
    }
    perms = []
    for perm in first.generator_perms:
        perms.append({f"{x}|{y}": f"{perm[x]}|{y}" for x in first.atoms for y in second.atoms})
    for perm in second.generator_perms:
        perms.append({f"{x}|{y}": f"{x}|{perm[y]}" for x in first.atoms for y in second.atoms})
    return FiniteAction(group, atoms, tuple(perms))


def pair_group_set(A: GroupSet, B: GroupSet) -> GroupSet:
    """A x B inside the direct sum of the two groups."""
    group = FinAbGroup(A.group.moduli + B.group.moduli)
    return GroupSet(group, frozenset(a + b for a in A.elements for b in B.elements))


def pair_space_set(S: Iterable[str], T: Iterable[str]) -> SpaceSet:
    return frozenset(f"{x}|{y}" for x in S for y in T)


def orbit_graph(act: FiniteAction, A: GroupSet, Y: Iterable[str], h: int
                ) -> LayeredMeasureGraph:
    """Layered graph on (atom, k) for atom in A^k.Y, with a-labelled steps.

    Vertex ids are "atom@k"; labels are the translate vectors. The result is
    always a valid commutative graph.
    """
    require_valid_action(act)
    _check_group_set(act, A)
    if not A.elements:
        raise InputError("translate set A must be nonempty")
    Y = _check_atoms(act, Y)
    if not Y:
        raise InputError("base set Y must be nonempty")
    if h < 1:
        raise InputError(f"height must be at least 1 (got {h})")
    layers = [frozenset(Y)]
    for _ in range(h):
        layers.append(move_set(act, A, layers[-1]))
    vertices = [
        (f"{x}@{k}", k, act.atoms[x]) for k, layer in enumerate(layers) for x in layer
    ]
    edges = [
        (f"{x}@{k}", f"{act.apply(a, x)}@{k + 1}", vec_id(a))
        for k in range(h)
        for x in layers[k]
        for a in A.elements
    ]
    return LayeredMeasureGraph.build(
        vertices, edges, height=h, labels=[vec_id(a) for a in A.elements])


def restricted_orbit_subgraph(act: FiniteAction, A: GroupSet, B: Iterable[str],
                              E: Iterable[str], k: int) -> LayeredMeasureGraph:
    """Orbit graph on (A, B, k) restricted to B at the bottom and, at layer j,
    to A^j.B minus A^(j-1).E."""
    E = _check_atoms(act, E)
    full = orbit_graph(act, A, B, k)
    keep = {f"{x}@0" for x in frozenset(B)}
    for j in range(1, k + 1):
        layer_atoms = move_set(act, iterate(A, j), B) - move_set(act, iterate(A, j - 1), E)
        keep |= {f"{x}@{j}" for x in layer_atoms}
    return induced_subgraph(full, keep & set(full.atoms))


def _neighbor_map(act: FiniteAction, A: GroupSet, B: SpaceSet,
                  drop: SpaceSet = frozenset()) -> dict[str, frozenset[str]]:
    return {b: move_set(act, A, frozenset([b])) - drop for b in B}


def c(act: FiniteAction, A: GroupSet, B: Iterable[str],
      method: str = "auto") -> MagnificationResult:
    """Magnification ratio: min over nonempty B' of mu(A.B') / mu(B')."""
    require_valid_action(act)
    B = _check_atoms(act, B)
    if not B:
        raise InputError("B must be nonempty")
    if method == "auto":
        method = "brute" if len(B) <= _BRUTE_AUTO_LIMIT else "mincut"
    neighbors = _neighbor_map(act, A, B)
    if method == "brute":
        value, witness = min_ratio_bruteforce(sorted(B), neighbors, act.atoms, act.atoms)
    elif method == "mincut":
        value, witness, _ = min_ratio_mincut(sorted(B), neighbors, act.atoms, act.atoms)
    else:
        raise InputError(f"unknown method {method!r}")
    return MagnificationResult(value, witness, method)


def c_delta(act: FiniteAction, A: GroupSet, B: Iterable[str], delta) -> Fraction:
    """Heavy magnification ratio: only subsets with mu(B') >= delta * mu(B) compete.

    Brute force over subsets (knapsack-flavoured constraint), hard-limited to
    |B| <= 20 sources.
    """
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise InputError(f"delta must lie in (0, 1] (got {delta})")
    require_valid_action(act)
    B = _check_atoms(act, B)
    if not B:
        raise InputError("B must be nonempty")
    if len(B) > C_DELTA_LIMIT:
        raise InputError(f"heavy ratio is brute force only; |B| <= {C_DELTA_LIMIT}")
    sources = sorted(B)
    n = len(sources)
    neighbors = _neighbor_map(act, A, B)
    targets = sorted({u for s in sources for u in neighbors[s]})
    tindex = {u: i for i, u in enumerate(targets)}
    scale = common_scale([act.atoms[s] for s in sources] + [act.atoms[u] for u in targets])
    sw = [int(act.atoms[s] * scale) for s in sources]
    dw = [int(act.atoms[u] * scale) for u in targets]
    nmask = [0] * n
    for i, s in enumerate(sources):
        for u in neighbors[s]:
            nmask[i] |= 1 << tindex[u]
    total = sum(sw)
    size = 1 << n
    imgs = [0] * size
    img_w = [0] * size
    set_w = [0] * size
    best: tuple[int, int] | None = None
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
        if set_w[m] * delta.denominator < delta.numerator * total:
            continue
        if best is None or w * best[1] < best[0] * set_w[m]:
            best = (w, set_w[m])
    assert best is not None  # B itself always qualifies
    return Fraction(best[0], best[1])


def c_restricted(act: FiniteAction, A: GroupSet, B: Iterable[str],
                 E: Iterable[str], method: str = "auto") -> Fraction:
    """Restricted ratio: min over nonempty B' of mu(A.B' minus E) / mu(B')."""
    require_valid_action(act)
    B = _check_atoms(act, B)
    E = _check_atoms(act, E)
    if not B:
        raise InputError("B must be nonempty")
    if method == "auto":
        method = "brute" if len(B) <= _BRUTE_AUTO_LIMIT else "mincut"
    neighbors = _neighbor_map(act, A, B, drop=E)
    if method == "brute":
        value, _ = min_ratio_bruteforce(sorted(B), neighbors, act.atoms, act.atoms)
    elif method == "mincut":
        value, _, _ = min_ratio_mincut(sorted(B), neighbors, act.atoms, act.atoms)
    else:
        raise InputError(f"unknown method {method!r}")
    return value


def verify_dyn_plunnecke(act: FiniteAction, A: GroupSet, B: Iterable[str],
                         j: int, k: int, instance: str = "action"
                         ) -> VerificationReport:
    """Check c(A^j, B) ** k >= c(A^k, B) ** j for 0 < j <= k."""
    if not 0 < j <= k:
        raise InputError(f"need 0 < j <= k (got j={j}, k={k})")
    low = c(act, iterate(A, j), B)
    high = c(act, iterate(A, k), B)
    lhs, rhs = low.value ** k, high.value ** j
    return VerificationReport(
        instance=instance,
        theorem="thm-4.2",
        lhs=lhs,
        rhs=rhs,
        holds=lhs >= rhs,
        witness=sorted(high.witness),
        details={
            "j": j, "k": k,
            "c_j": format_rational(low.value),
            "c_k": format_rational(high.value),
            "witness_j": sorted(low.witness),
        },
    )


def verify_restricted_plunnecke(act: FiniteAction, A: GroupSet, B: Iterable[str],
                                E: Iterable[str], j: int, k: int,
                                instance: str = "action") -> VerificationReport:
    """Restricted variant: c(A^j, B, A^(j-1).E) ** k >= c(A^k, B, A^(k-1).E) ** j,
    plus commutativity of the restricted orbit subgraph it rests on."""
    if not 0 < j <= k:
        raise InputError(f"need 0 < j <= k (got j={j}, k={k})")
    E = _check_atoms(act, E)
    low = c_restricted(act, iterate(A, j), B, move_set(act, iterate(A, j - 1), E))
    high = c_restricted(act, iterate(A, k), B, move_set(act, iterate(A, k - 1), E))
    lhs, rhs = low ** k, high ** j
    sub = restricted_orbit_subgraph(act, A, B, E, k)
    sub_ok = True if not sub.atoms else is_commutative(sub).holds
    return VerificationReport(
        instance=instance,
        theorem="thm-4.3",
        lhs=lhs,
        rhs=rhs,
        holds=(lhs >= rhs) and sub_ok,
        witness=[],
        details={
            "j": j, "k": k,
            "c_j_restricted": format_rational(low),
            "c_k_restricted": format_rational(high),
            "restricted_subgraph_commutative": sub_ok,
        },
    )


def _heavy_hypothesis(act: FiniteAction, A: GroupSet, B: SpaceSet, Bp: SpaceSet,
                      delta: Fraction, j: int, k: int) -> bool:
    """mu(A^k.B')^j * mu(B)^k <= (1-delta)^-k * mu(A^j.B)^k * mu(B')^j, exactly."""
    mu_k = measure(act, move_set(act, iterate(A, k), Bp))
    mu_j = measure(act, move_set(act, iterate(A, j), B))
    lhs = mu_k ** j * measure(act, B) ** k
    rhs = (1 - delta) ** (-k) * mu_j ** k * measure(act, Bp) ** j
    return lhs <= rhs


def heavy_subset(act: FiniteAction, A: GroupSet, B: Iterable[str], delta,
                 j: int, k: int) -> SpaceSet:
    """Grow a subset that is both heavy (measure >= delta * mu(B)) and growth-bounded.

    Starts from a minimizing witness of c(A^k, .) on B and, while too light,
    adjoins a minimizing witness taken inside the complement; the measure
    strictly grows each round, so at most |B| rounds happen.
    """
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise InputError(f"delta must lie in (0, 1) (got {delta})")
    if not 0 < j <= k:
        raise InputError(f"need 0 < j <= k (got j={j}, k={k})")
    require_valid_action(act)
    B = _check_atoms(act, B)
    if not B:
        raise InputError("B must be nonempty")
    a_k = iterate(A, k)
    chosen = frozenset(c(act, a_k, B).witness)
    threshold = delta * measure(act, B)
    for _ in range(len(B) + 1):
        if measure(act, chosen) >= threshold:
            break
        rest = B - chosen
        extra = c(act, a_k, rest).witness
        if not extra:
            raise RuntimeError("growth stalled while building a heavy subset")
        chosen |= extra
    else:
        raise RuntimeError("heavy subset construction exceeded its bound")
    if not _heavy_hypothesis(act, A, B, chosen, delta, j, k):
        raise RuntimeError("constructed subset misses the growth bound")
    return chosen


def verify_heavy_subset(act: FiniteAction, A: GroupSet, B: Iterable[str], delta,
                        j: int, k: int, instance: str = "action"
                        ) -> VerificationReport:
    """Heavy-ratio bound c_delta(A^k, B)^j <= (1-delta)^-k * (mu(A^j.B)/mu(B))^k,
    re-verified together with both properties of the constructed heavy subset."""
    delta = Fraction(delta)
    B = _check_atoms(act, B)
    chosen = heavy_subset(act, A, B, delta, j, k)
    heavy_ok = measure(act, chosen) >= delta * measure(act, B)
    bound_ok = _heavy_hypothesis(act, A, B, chosen, delta, j, k)
    cd = c_delta(act, iterate(A, k), B, delta)
    ratio = measure(act, move_set(act, iterate(A, j), B)) / measure(act, B)
    lhs, rhs = cd ** j, (1 - delta) ** (-k) * ratio ** k
    return VerificationReport(
        instance=instance,
        theorem="lemma-5.4",
        lhs=lhs,
        rhs=rhs,
        holds=(lhs <= rhs) and heavy_ok and bound_ok,
        witness=sorted(chosen),
        details={
            "delta": format_rational(delta), "j": j, "k": k,
            "c_delta": format_rational(cd),
            "subset_is_heavy": heavy_ok,
            "subset_growth_bounded": bound_ok,
        },
    )


def verify_multiplicativity(act: FiniteAction, act2: FiniteAction,
                            A: GroupSet, A2: GroupSet,
                            B: Iterable[str], B2: Iterable[str],
                            instance: str = "action",
                            limit: int = 16) -> VerificationReport:
    """c(A, B) * c(A2, B2) equals c(A x A2, B x B2) on the product action."""
    B = _check_atoms(act, B)
    B2 = _check_atoms(act2, B2)
    if len(B) * len(B2) > limit:
        raise InputError(
            f"product base set has {len(B) * len(B2)} atoms, over the "
            f"brute-force limit {limit}")
    left = c(act, A, B).value * c(act2, A2, B2).value
    pact = product_action(act, act2)
    right = c(pact, pair_group_set(A, A2), pair_space_set(B, B2), method="brute").value
    return VerificationReport(
        instance=instance,
        theorem="lemma-6.1",
        lhs=left,
        rhs=right,
        holds=left == right,
        witness=[],
        details={"c_left_product": format_rational(left),
                 "c_product_action": format_rational(right)},
    )


def verify_different_summands(act: FiniteAction, A_list: list[GroupSet],
                              B: Iterable[str], instance: str = "action"
                              ) -> VerificationReport:
    """c(A_1 + ... + A_k, B) <= prod_i mu(A_i.B) / mu(B)."""
    if not A_list:
        raise InputError("need at least one translate set")
    B = _check_atoms(act, B)
    total = A_list[0]
    for A in A_list[1:]:
        total = product_set(total, A)
    result = c(act, total, B)
    mu_b = measure(act, B)
    rhs = Fraction(1)
    for A in A_list:
        rhs *= measure(act, move_set(act, A, B)) / mu_b
    return VerificationReport(
        instance=instance,
        theorem="prop-6.2",
        lhs=result.value,
        rhs=rhs,
        holds=result.value <= rhs,
        witness=sorted(result.witness),
        details={"k": len(A_list), "c_sum": format_rational(result.value)},
    )
