"""Classifying-space side: bar chains, coordinate-model points,
classifying maps, the universal bundle, and the classification report.

The bar complex of a group is truncated at a configurable dimension;
normalized chains drop every tuple containing the identity.  A strict
cocycle induces a map from its nerve into the bar complex whose
face-compatibility is literally the cocycle law.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .bundles import Bundle, bundle_isomorphism, total_space
from .cocycles import Cocycle1, count_equivalence_classes, from_homomorphism
from .complexes import SimplicialComplex, SimplicialMap, build_complex, pi1_presentation
from .covers import Cover, cech_nerve, is_good_cover
from .errors import ValidationError
from .groups import (
    FiniteGroup,
    GroupAction,
    enumerate_homs,
    hom_conjugacy_classes,
    regular_action,
)
from .homology import (
    ChainComplex,
    HomologyResult,
    HomologyWorkspace,
    chain_complex_of,
    homology_of_chain_complex,
    tuple0,
)
from .snf import zero_matrix


@dataclass(frozen=True)
class BarComplex:
    """Normalized bar chains of a group through a truncation dimension."""

    group: FiniteGroup
    truncation: int
    chains: tuple          # chains[k] = sorted tuple of k-tuples
    complex: ChainComplex

    def chain_index(self, k: int, chain: tuple) -> int:
        return self.chains[k].index(chain)


def bar_construction(group: FiniteGroup, truncation: int = 4) -> BarComplex:
    """Chains and boundaries of the one-object classifying construction.

    Degree-k chains are k-tuples of non-identity elements; a boundary
    face that composes two entries to the identity is degenerate and is
    dropped.
    """
    if truncation < 0:
        raise ValidationError("truncation must be nonnegative")
    nontrivial = [g for g in group.elements() if g != 0]
    chains: List[tuple] = [((),)]
    for k in range(1, truncation + 1):
        chains.append(
            tuple(itertools.product(nontrivial, repeat=k))
        )
    boundaries = []
    for k in range(1, truncation + 1):
        rows = {c: i for i, c in enumerate(chains[k - 1])}
        mat = zero_matrix(len(chains[k - 1]), len(chains[k]))
        for j, chain in enumerate(chains[k]):
            for face, sign in _bar_faces(group, chain):
                if face is not None:
                    mat[rows[face]][j] += sign
        boundaries.append(mat)
    cc = ChainComplex(
        ranks=tuple(len(c) for c in chains),
        boundaries=tuple(tuple0(b) for b in boundaries),
    )
    return BarComplex(
        group=group, truncation=truncation,
        chains=tuple(chains), complex=cc,
    )


def _bar_faces(group: FiniteGroup, chain: tuple):
    """(face, sign) pairs; a face with an identity entry yields None."""
    k = len(chain)
    out = []
    for i in range(k + 1):
        if i == 0:
            face = chain[1:]
        elif i == k:
            face = chain[:-1]
        else:
            merged = group.mul(chain[i - 1], chain[i])
            face = chain[: i - 1] + (merged,) + chain[i + 1:]
        if any(g == 0 for g in face):
            out.append((None, 0))
        else:
            out.append((face, (-1) ** i))
    return out


def bar_homology(group: FiniteGroup, max_degree: int) -> HomologyResult:
    """Group homology through ``max_degree`` via the bar complex."""
    bar = bar_construction(group, max_degree + 1)
    return homology_of_chain_complex(bar.complex, max_degree)


@dataclass(frozen=True)
class MilnorPoint:
    """Coordinate-model point: simplex coordinates plus pairwise values."""

    coordinates: tuple     # Fractions, finitely many, summing to 1
    values: Mapping        # (i, j) over the support -> group element
    group: FiniteGroup


def validate_milnor_point(
    coordinates: Sequence,
    values: Mapping,
    group: FiniteGroup,
) -> MilnorPoint:
    """Check the four coordinate-model conditions, reporting by number.

    1. entries lie in [0, 1] and sum to 1;
    2. values are indexed by exactly the ordered support pairs;
    3. the diagonal carries the identity;
    4. values compose along every support triple (in particular forcing
       value(j, i) to invert value(i, j)).
    """
    coords = tuple(Fraction(t) for t in coordinates)
    violations = []
    if any(t < 0 or t > 1 for t in coords) or sum(coords) != 1:
        violations.append((1, "coordinates must lie in [0,1] and sum to 1"))
    support = [i for i, t in enumerate(coords) if t != 0]
    wanted = {(i, j) for i in support for j in support}
    given = {tuple(k) for k in values}
    if wanted != given:
        missing = sorted(wanted - given)[:4]
        spurious = sorted(given - wanted)[:4]
        violations.append(
            (2, f"support pairs mismatch; missing {missing!r}, "
                f"spurious {spurious!r}")
        )
    cleaned = {tuple(k): int(v) for k, v in values.items()}
    if any(not (0 <= v < group.order) for v in cleaned.values()):
        violations.append((2, "values out of range for the group"))
    for i in support:
        if cleaned.get((i, i), 0) != 0:
            violations.append((3, f"diagonal value at ({i}, {i}) is not the identity"))
            break
    done = False
    for i in support:
        for j in support:
            for k in support:
                if (i, j) in cleaned and (j, k) in cleaned and (i, k) in cleaned:
                    lhs = group.mul(cleaned[(i, j)], cleaned[(j, k)])
                    if lhs != cleaned[(i, k)]:
                        violations.append(
                            (4, f"composition fails on triple ({i}, {j}, {k})")
                        )
                        done = True
                        break
            if done:
                break
        if done:
            break
    if violations:
        raise ValidationError(
            "coordinate-model conditions violated: "
            + "; ".join(f"[{n}] {msg}" for n, msg in violations),
            details={"violations": violations},
        )
    return MilnorPoint(coordinates=coords, values=cleaned, group=group)


@dataclass(frozen=True)
class ClassifyingMap:
    """Simplex-level map from a nerve into the bar chains of the group."""

    cocycle: Cocycle1
    bar: BarComplex
    images: Mapping        # nerve simplex (sorted tuple) -> bar tuple

    def image(self, simplex) -> tuple:
        return self.images[tuple(sorted(simplex))]


def classifying_map(cocycle: Cocycle1, truncation: Optional[int] = None) -> ClassifyingMap:
    """Send each nerve simplex to the tuple of its successive edge values.

    Identity entries collapse away (the image then lives in a lower
    degree).  Face-compatibility of the assignment is re-checked simplex
    by simplex; it can only fail if the cocycle law fails.
    """
    nerve = cocycle.nerve.complex
    if truncation is None:
        truncation = max(nerve.dim, 1) + 1
    bar = bar_construction(cocycle.group, truncation)
    images: Dict[tuple, tuple] = {}
    for k in range(nerve.dim + 1):
        for simplex in nerve.simplices_of_dim(k):
            raw = tuple(
                cocycle.value(simplex[i], simplex[i + 1])
                for i in range(len(simplex) - 1)
            )
            images[simplex] = tuple(g for g in raw if g != 0)
    cmap = ClassifyingMap(cocycle=cocycle, bar=bar, images=images)
    if not classifying_map_is_simplicial(cmap):
        raise ValidationError("edge data is not face-compatible")
    return cmap


def classifying_map_is_simplicial(cmap: ClassifyingMap) -> bool:
    """Face-compatibility: dropping a nerve vertex matches a bar face.

    Dropping an inner vertex composes the adjacent edge values, so this
    holds for every 2-simplex exactly when the cocycle law does.
    """
    group = cmap.cocycle.group
    nerve = cmap.cocycle.nerve.complex
    for k in range(1, nerve.dim + 1):
        for simplex in nerve.simplices_of_dim(k):
            raw = tuple(
                cmap.cocycle.value(simplex[i], simplex[i + 1])
                for i in range(len(simplex) - 1)
            )
            for drop in range(len(simplex)):
                face = simplex[:drop] + simplex[drop + 1:]
                expected = cmap.images[face]
                if drop == 0:
                    got = raw[1:]
                elif drop == len(simplex) - 1:
                    got = raw[:-1]
                else:
                    got = raw[: drop - 1] + (
                        group.mul(raw[drop - 1], raw[drop]),
                    ) + raw[drop + 1:]
                if tuple(g for g in got if g != 0) != expected:
                    return False
    return True


def classifying_chain_map(cmap: ClassifyingMap, max_degree: int) -> List:
    """Chain-map matrices nerve -> bar (degenerate images map to zero)."""
    nerve = cmap.cocycle.nerve.complex
    mats = []
    for k in range(max_degree + 1):
        src = nerve.simplices_of_dim(k)
        rows = len(cmap.bar.chains[k]) if k <= cmap.bar.truncation else 0
        index = {c: i for i, c in enumerate(cmap.bar.chains[k])} \
            if k <= cmap.bar.truncation else {}
        mat = zero_matrix(rows, len(src))
        for j, simplex in enumerate(src):
            image = cmap.images[simplex]
            if len(image) == k:
                mat[index[image]][j] = 1
        mats.append(mat)
    return mats


@dataclass(frozen=True)
class UniversalBundle:
    """Action-groupoid chains over the bar complex: (tuple, fiber point).

    The k-chains are pairs of a normalized bar tuple and a group element;
    forgetting the element is the projection.  Vertices of a chain are
    extracted by iterating the face maps, which is what the pullback
    construction uses.
    """

    group: FiniteGroup
    truncation: int
    chains: tuple          # chains[k] = sorted tuple of (bar tuple, f)
    complex: ChainComplex

    def vertex_of(self, chain: tuple, fiber: int, position: int) -> int:
        """Fiber point at a vertex of the simplex (chain; fiber).

        Repeatedly applies the last face until the wanted position is the
        final vertex, then forgets the leading entries.  With the left
        action convention the result is the suffix product acting on the
        fiber point.
        """
        group = self.group
        entries = list(chain)
        point = fiber
        while len(entries) > position:
            last = entries.pop()
            point = group.mul(last, point)
        return point

    def edge_transition(self, chain: tuple) -> int:
        """Tautological transition value of a 1-chain."""
        if len(chain) != 1:
            raise ValidationError("edge transition needs a 1-chain")
        return chain[0]


def universal_bundle(group: FiniteGroup, truncation: int) -> UniversalBundle:
    """Total chains of the regular action groupoid over the bar chains."""
    if truncation < 1:
        raise ValidationError("truncation must be at least 1")
    nontrivial = [g for g in group.elements() if g != 0]
    chains: List[tuple] = [tuple(((), f) for f in group.elements())]
    for k in range(1, truncation + 1):
        level = []
        for tup in itertools.product(nontrivial, repeat=k):
            for f in group.elements():
                level.append((tup, f))
        chains.append(tuple(level))
    boundaries = []
    for k in range(1, truncation + 1):
        rows = {c: i for i, c in enumerate(chains[k - 1])}
        mat = zero_matrix(len(chains[k - 1]), len(chains[k]))
        for j, (tup, f) in enumerate(chains[k]):
            for i in range(k + 1):
                if i == 0:
                    face = (tup[1:], f)
                elif i == k:
                    face = (tup[:-1], group.mul(tup[-1], f))
                else:
                    merged = group.mul(tup[i - 1], tup[i])
                    face = (tup[: i - 1] + (merged,) + tup[i + 1:], f)
                if any(g == 0 for g in face[0]):
                    continue
                mat[rows[face]][j] += (-1) ** i
        boundaries.append(mat)
    cc = ChainComplex(
        ranks=tuple(len(c) for c in chains),
        boundaries=tuple(tuple0(b) for b in boundaries),
    )
    return UniversalBundle(
        group=group, truncation=truncation,
        chains=tuple(chains), complex=cc,
    )


def pullback_universal(
    cocycle: Cocycle1, universal: Optional[UniversalBundle] = None
) -> Bundle:
    """Pull the universal chains back along the classifying map.

    Each nerve simplex maps to a bar tuple; its lifts are the fiber
    points, and the pulled-back simplex pairs every nerve vertex with the
    fiber point extracted from the corresponding universal vertex.  This
    is an independent construction of the quotient total space, used to
    cross-check it.
    """
    nerve = cocycle.nerve.complex
    group = cocycle.group
    if universal is None:
        universal = universal_bundle(group, max(nerve.dim, 1))
    if universal.group != group:
        raise ValidationError("universal bundle is for a different group")
    if universal.truncation < nerve.dim:
        raise ValidationError(
            f"universal bundle truncated below the nerve dimension "
            f"({universal.truncation} < {nerve.dim})"
        )
    pieces = []
    for s in nerve.maximal_simplices:
        ordered = tuple(sorted(s))
        raw = tuple(
            cocycle.value(ordered[i], ordered[i + 1])
            for i in range(len(ordered) - 1)
        )
        for f in group.elements():
            lift = {
                (ordered[pos], universal.vertex_of(raw, f, pos))
                for pos in range(len(ordered))
            }
            pieces.append(lift)
    total = build_complex(pieces)
    projection = SimplicialMap(total, nerve, {v: v[0] for v in total.vertices})
    return Bundle(
        total=total,
        base=nerve,
        projection=projection,
        fiber=tuple(group.elements()),
        action=regular_action(group),
    )


@dataclass(frozen=True)
class ClassificationReport:
    """Outcome of the two independent class counts plus pullback checks."""

    cocycle_classes: int
    hom_classes: int
    pullbacks_match: tuple
    @property
    def verdict(self) -> bool:
        return (
            self.cocycle_classes == self.hom_classes
            and all(self.pullbacks_match)
        )


def classification_check(
    cover: Cover,
    group: FiniteGroup,
    *,
    budget: int = 1_000_000,
) -> ClassificationReport:
    """Count cocycle classes two ways and cross-check the universal pullback.

    The count by bridging-equivalence of monodromy representatives must
    agree with the count of conjugacy classes of homomorphisms from the
    nerve's fundamental group, and for every representative the pullback
    of the universal chains along its classifying map must be isomorphic
    to its quotient total space.
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
    cocycle_classes = count_equivalence_classes(cover, group, budget=budget)
    universal = universal_bundle(group, max(nerve.complex.dim, 1))
    action = regular_action(group)
    matches = []
    for cls in classes:
        rep = from_homomorphism(cls[0], cover, group, nerve=nerve,
                                presentation=presentation)
        direct = total_space(rep, action)
        pulled = pullback_universal(rep, universal)
        matches.append(bundle_isomorphism(pulled, direct) is not None)
    return ClassificationReport(
        cocycle_classes=cocycle_classes,
        hom_classes=len(classes),
        pullbacks_match=tuple(matches),
    )
