"""Group-valued transition cocycles over a good cover.

Values live on ordered index pairs with nonempty intersection; the
diagonal and reversed values are derived, never stored.  Equivalence of
two cocycles over one base is decided by searching for bridging values
on the combined cover.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .complexes import pi1_presentation, Pi1Presentation
from .covers import Cover, NerveComplex, cech_nerve, disjoint_union_cover, is_good_cover
from .errors import BudgetExceededError, ValidationError
from .groups import FiniteGroup, enumerate_homs, hom_conjugacy_classes

DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class Cocycle1:
    """Strict transition cocycle: one group element per ordered pair."""

    cover: Cover
    nerve: NerveComplex
    group: FiniteGroup
    values: Mapping  # (alpha, beta) with alpha < beta -> element

    def value(self, alpha, beta) -> int:
        """Value on any ordered pair, extending by inverses and identity."""
        if alpha == beta:
            return 0
        if (alpha, beta) in self.values:
            return self.values[(alpha, beta)]
        return self.group.inv(self.values[(beta, alpha)])

    def pairs(self) -> tuple:
        return tuple(sorted(self.values))


@dataclass(frozen=True)
class Cochain0:
    """One group element per cover index."""

    cover: Cover
    group: FiniteGroup
    values: Mapping  # index -> element


def _nonempty_pairs(nerve: NerveComplex) -> list:
    return sorted(k for k in nerve.witnesses if len(k) == 2)


def _nonempty_triples(nerve: NerveComplex) -> list:
    return sorted(k for k in nerve.witnesses if len(k) == 3)


def validate_cocycle(
    cover: Cover,
    group: FiniteGroup,
    values: Mapping,
    *,
    nerve: Optional[NerveComplex] = None,
    assume_good: bool = False,
) -> Cocycle1:
    """Check the cocycle law on every nonempty ordered triple.

    The cover must be good, so that a single element per intersection is
    a faithful model of a locally constant transition function.
    """
    if nerve is None:
        nerve = cech_nerve(cover)
    if not assume_good:
        report = is_good_cover(cover, nerve)
        if not report.good:
            raise ValidationError(
                f"cover is not good at {report.failures[0][0]!r}",
                details={"failures": report.failures},
            )
    cleaned: Dict[tuple, int] = {}
    for pair in _nonempty_pairs(nerve):
        if pair not in values:
            raise ValidationError(
                f"missing value for overlapping pair {pair!r}",
                details={"pair": pair},
            )
        g = int(values[pair])
        if not (0 <= g < group.order):
            raise ValidationError(f"value {g} out of range for pair {pair!r}")
        cleaned[pair] = g
    extra = set(values) - set(cleaned)
    if extra:
        raise ValidationError(
            f"values given for non-overlapping pairs {sorted(extra)[:4]!r}"
        )
    cocycle = Cocycle1(cover=cover, nerve=nerve, group=group, values=cleaned)
    for a, b, c in _nonempty_triples(nerve):
        lhs = group.mul(cocycle.value(a, b), cocycle.value(b, c))
        if lhs != cocycle.value(a, c):
            raise ValidationError(
                f"cocycle law fails on triple ({a!r}, {b!r}, {c!r})",
                details={"triple": (a, b, c)},
            )
    return cocycle


def trivial_cocycle(cover: Cover, group: FiniteGroup, *, nerve=None) -> Cocycle1:
    if nerve is None:
        nerve = cech_nerve(cover)
    values = {pair: 0 for pair in _nonempty_pairs(nerve)}
    return validate_cocycle(cover, group, values, nerve=nerve)


def coboundary_transform(cocycle: Cocycle1, cochain: Cochain0) -> Cocycle1:
    """Twist by a 0-cochain: value' = lam_a * value * lam_b^-1."""
    if cochain.cover != cocycle.cover or cochain.group != cocycle.group:
        raise ValidationError("cochain is over a different cover or group")
    group = cocycle.group
    lam = cochain.values
    for idx in cocycle.cover.indices:
        if idx not in lam:
            raise ValidationError(f"cochain misses index {idx!r}")
    values = {
        (a, b): group.mul(group.mul(lam[a], v), group.inv(lam[b]))
        for (a, b), v in cocycle.values.items()
    }
    return validate_cocycle(
        cocycle.cover, group, values, nerve=cocycle.nerve, assume_good=True
    )


def nerve_presentation(cocycle: Cocycle1) -> Pi1Presentation:
    nerve = cocycle.nerve.complex
    basepoint = nerve.vertices[0]
    return pi1_presentation(nerve, basepoint)


def holonomy(
    cocycle: Cocycle1, presentation: Optional[Pi1Presentation] = None
) -> tuple:
    """Generator images of the monodromy homomorphism.

    Each spanning-tree vertex x gets the product W(x) of values along the
    tree path from the basepoint; a generator edge (u, v) maps to
    W(u) * value(u, v) * W(v)^-1.  The cocycle law on nerve triangles
    makes every relation word evaluate to the identity.
    """
    if presentation is None:
        presentation = nerve_presentation(cocycle)
    group = cocycle.group
    parent: Dict = {presentation.basepoint: None}
    adjacency: Dict = {}
    for u, v in presentation.tree_edges:
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    transport = {presentation.basepoint: 0}
    frontier = [presentation.basepoint]
    while frontier:
        x = frontier.pop()
        for y in adjacency.get(x, ()):
            if y not in transport:
                transport[y] = group.mul(transport[x], cocycle.value(x, y))
                frontier.append(y)
    images = []
    for u, v in presentation.generator_edges:
        word = group.mul(
            group.mul(transport[u], cocycle.value(u, v)),
            group.inv(transport[v]),
        )
        images.append(word)
    return tuple(images)


def from_homomorphism(
    images: Tuple[int, ...],
    cover: Cover,
    group: FiniteGroup,
    *,
    nerve: Optional[NerveComplex] = None,
    presentation: Optional[Pi1Presentation] = None,
) -> Cocycle1:
    """Cocycle with identity on tree edges and the given generator images.

    Inverts :func:`holonomy` on the nose: tree transport is trivial, so
    the monodromy of the result is exactly ``images``.
    """
    if nerve is None:
        nerve = cech_nerve(cover)
    if presentation is None:
        presentation = pi1_presentation(nerve.complex, nerve.complex.vertices[0])
    if len(images) != presentation.generator_count:
        raise ValidationError(
            f"expected {presentation.generator_count} generator images, "
            f"got {len(images)}"
        )
    for word in presentation.relations:
        out = 0
        for s in word:
            g = images[abs(s) - 1]
            out = group.mul(out, g if s > 0 else group.inv(g))
        if out != 0:
            raise ValidationError(
                "generator images do not satisfy the relations",
                details={"relation": word},
            )
    values: Dict[tuple, int] = {}
    gen_index = {edge: i for i, edge in enumerate(presentation.generator_edges)}
    for pair in _nonempty_pairs(nerve):
        if pair in gen_index:
            values[pair] = images[gen_index[pair]]
        else:
            values[pair] = 0
    return validate_cocycle(cover, group, values, nerve=nerve, assume_good=True)


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    bridge: Optional[Mapping] = None  # (u index, v index) -> element


def are_equivalent(
    c1: Cocycle1,
    c2: Cocycle1,
    *,
    budget: int = DEFAULT_BUDGET,
) -> EquivalenceResult:
    """Search for bridging values making one cocycle on the joined cover.

    The two cocycles must share base and group.  Mixed pairs are the
    unknowns; every nerve triangle of the joined cover relates two of
    them (or pins them against known values), so each connected component
    of the constraint graph is determined by one seed value.  The
    returned bridge is the lexicographically least solution.
    """
    if c1.cover.base != c2.cover.base:
        raise ValidationError("cocycles live over different bases")
    if c1.group != c2.group:
        raise ValidationError("cocycles take values in different groups")
    group = c1.group
    joined = disjoint_union_cover(c1.cover, c2.cover)
    nerve = cech_nerve(joined)
    report = is_good_cover(joined, nerve)
    if not report.good:
        raise ValidationError(
            f"joined cover is not good at {report.failures[0][0]!r}",
            details={"failures": report.failures},
        )

    def known(a, b) -> Optional[int]:
        # value on a non-mixed ordered pair of the joined cover
        if a[0] == b[0] == "0":
            return c1.value(a[1], b[1])
        if a[0] == b[0] == "1":
            return c2.value(a[1], b[1])
        return None

    variables = sorted(
        key for key in nerve.witnesses
        if len(key) == 2 and key[0][0] == "0" and key[1][0] == "1"
    )
    var_set = set(variables)
    # constraints: var = left * other (if other later) etc.; collected as
    # (var_a, var_b, how) with value_a determined from value_b
    neighbors: Dict[tuple, List] = {v: [] for v in variables}
    triangles = []
    for key in nerve.witnesses:
        if len(key) != 3:
            continue
        a, b, c = key
        tags = tuple(x[0] for x in key)
        if tags == ("0", "0", "1"):
            p, q = (a, c), (b, c)
            g = known(a, b)
            # value(a,c) = g * value(b,c): knowing q forces p and vice versa
            neighbors[q].append((p, g, "left"))
            neighbors[p].append((q, group.inv(g), "left"))
        elif tags == ("0", "1", "1"):
            p, q = (a, b), (a, c)
            g = known(b, c)
            # value(a,c) = value(a,b) * g: knowing p forces q and vice versa
            neighbors[p].append((q, g, "right"))
            neighbors[q].append((p, group.inv(g), "right"))
        triangles.append(key)

    assignment: Dict[tuple, int] = {}
    tried = 0
    for seed in variables:
        if seed in assignment:
            continue
        component_solution = None
        for guess in group.elements():
            tried += 1
            if tried > budget:
                raise BudgetExceededError(
                    f"equivalence search exceeded budget {budget}", budget
                )
            trial = {seed: guess}
            stack = [seed]
            consistent = True
            while stack and consistent:
                var = stack.pop()
                for other, g, side in neighbors[var]:
                    if side == "left":
                        forced = group.mul(g, trial[var])
                    else:
                        forced = group.mul(trial[var], g)
                    if other in trial:
                        if trial[other] != forced:
                            consistent = False
                            break
                    else:
                        trial[other] = forced
                        stack.append(other)
            if consistent:
                component_solution = trial
                break
        if component_solution is None:
            return EquivalenceResult(equivalent=False)
        assignment.update(component_solution)

    def joined_value(a, b) -> int:
        v = known(a, b)
        if v is not None:
            return v
        if (a, b) in var_set:
            return assignment[(a, b)]
        return group.inv(assignment[(b, a)])

    for a, b, c in triangles:
        if group.mul(joined_value(a, b), joined_value(b, c)) != joined_value(a, c):
            return EquivalenceResult(equivalent=False)
    bridge = {
        (a[1], b[1]): value for (a, b), value in sorted(assignment.items())
    }
    return EquivalenceResult(equivalent=True, bridge=bridge)


def count_equivalence_classes(
    cover: Cover,
    group: FiniteGroup,
    *,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Number of cocycle classes over a good cover with connected nerve.

    Enumerates monodromy representatives (one cocycle per conjugacy class
    of homomorphisms) and merges them by the bridging search.
    """
    nerve = cech_nerve(cover)
    report = is_good_cover(cover, nerve)
    if not report.good:
        raise ValidationError(
            f"cover is not good at {report.failures[0][0]!r}",
            details={"failures": report.failures},
        )
    presentation = pi1_presentation(nerve.complex, nerve.complex.vertices[0])
    homs = enumerate_homs(presentation, group, budget=budget)
    classes = hom_conjugacy_classes(homs, group)
    representatives = [
        from_homomorphism(cls[0], cover, group, nerve=nerve,
                          presentation=presentation)
        for cls in classes
    ]
    merged: List[List[int]] = []
    for i, rep in enumerate(representatives):
        placed = False
        for bucket in merged:
            if are_equivalent(representatives[bucket[0]], rep, budget=budget).equivalent:
                bucket.append(i)
                placed = True
                break
        if not placed:
            merged.append([i])
    return len(merged)
