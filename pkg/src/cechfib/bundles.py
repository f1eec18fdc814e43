"""Combinatorial fiber bundles: quotient and skeletal constructions,
pullbacks, restriction, patching, and fiberwise mapping cylinders.

Totals are simplicial complexes whose simplices project isomorphically
to base simplices (discrete fibers make every local comparison map a
bijection, so the covering-type rigidity is exact, not approximate).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .complexes import (
    SimplicialComplex,
    SimplicialMap,
    build_complex,
    mapping_cylinder,
)
from .cocycles import Cocycle1
from .errors import BudgetExceededError, ValidationError
from .groups import GroupAction


@dataclass(frozen=True)
class Bundle:
    """Total complex with a rigid projection and a finite fiber."""

    total: SimplicialComplex
    base: SimplicialComplex
    projection: SimplicialMap
    fiber: tuple
    action: Optional[GroupAction] = None

    def fiber_over(self, base_vertex) -> tuple:
        return tuple(
            v for v in self.total.vertices
            if self.projection(v) == base_vertex
        )

    def lifts_of(self, base_simplex) -> list:
        """Total simplices projecting onto the given base simplex."""
        target = frozenset(base_simplex)
        out = [
            s for s in self.total.simplices
            if self.projection.image_simplex(s) == target and len(s) == len(target)
        ]
        return sorted(out, key=lambda s: tuple(sorted(s)))


def validate_bundle(bundle: Bundle) -> Bundle:
    """Check projection rigidity and the constant fiber count."""
    proj = bundle.projection
    if proj.source != bundle.total or proj.target != bundle.base:
        raise ValidationError("projection endpoints do not match the bundle")
    for s in bundle.total.maximal_simplices:
        if len(proj.image_simplex(s)) != len(s):
            raise ValidationError(
                f"projection collapses simplex {tuple(sorted(s))!r}",
                details={"simplex": tuple(sorted(s))},
            )
    size = len(bundle.fiber)
    for v in bundle.base.vertices:
        if len(bundle.fiber_over(v)) != size:
            raise ValidationError(
                f"fiber over {v!r} has {len(bundle.fiber_over(v))} vertices, "
                f"want {size}",
                details={"vertex": v},
            )
    return bundle


def total_space(cocycle: Cocycle1, action: GroupAction) -> Bundle:
    """Quotient-style total space over the nerve of the cocycle's cover.

    Vertices are (index, fiber point); the lift of a nerve simplex through
    a fiber point at its last vertex transports backwards through the
    transition values, so each simplex has exactly one lift per fiber
    point.
    """
    if action.group != cocycle.group:
        raise ValidationError("action group differs from cocycle group")
    nerve = cocycle.nerve.complex
    simplices = []
    for s in nerve.maximal_simplices:
        ordered = tuple(sorted(s))
        last = ordered[-1]
        for f in action.fiber:
            lift = {
                (alpha, action.act(cocycle.value(alpha, last), f))
                for alpha in ordered
            }
            simplices.append(lift)
    total = build_complex(simplices)
    projection = SimplicialMap(
        total, nerve, {v: v[0] for v in total.vertices}
    )
    return validate_bundle(
        Bundle(
            total=total,
            base=nerve,
            projection=projection,
            fiber=tuple(action.fiber),
            action=action,
        )
    )


def skeletal_construction(cocycle: Cocycle1, action: GroupAction) -> Bundle:
    """Total space assembled skeleton by skeleton.

    Level 0 is one copy of the fiber per nerve vertex.  At level n each
    n-simplex acquires the lifts obtained by extending a lift of its
    first facet through the edge value at the leading index pair and
    keeping only extensions whose every facet restriction was already
    built; the cocycle law is what makes those boundary assemblies close
    up into lifts.
    """
    if action.group != cocycle.group:
        raise ValidationError("action group differs from cocycle group")
    nerve = cocycle.nerve.complex
    group = cocycle.group
    lifts: Dict[tuple, set] = {}
    for (v,) in nerve.simplices_of_dim(0):
        lifts[(v,)] = {((v, f),) for f in action.fiber}
    for n in range(1, nerve.dim + 1):
        for simplex in nerve.simplices_of_dim(n):
            recorded = set()
            tail = simplex[1:]
            leading = cocycle.value(simplex[0], simplex[1])
            for tail_lift in sorted(lifts[tail]):
                fiber_at_next = tail_lift[0][1]
                extended = ((simplex[0], action.act(leading, fiber_at_next)),) \
                    + tail_lift
                ok = True
                for drop in range(len(simplex)):
                    facet = simplex[:drop] + simplex[drop + 1:]
                    facet_lift = extended[:drop] + extended[drop + 1:]
                    if facet_lift not in lifts[facet]:
                        ok = False
                        break
                if ok:
                    recorded.add(extended)
            lifts[simplex] = recorded
    pieces = []
    for s in nerve.maximal_simplices:
        ordered = tuple(sorted(s))
        for lift in lifts[ordered]:
            pieces.append(set(lift))
    total = build_complex(pieces)
    projection = SimplicialMap(total, nerve, {v: v[0] for v in total.vertices})
    return validate_bundle(
        Bundle(
            total=total,
            base=nerve,
            projection=projection,
            fiber=tuple(action.fiber),
            action=action,
        )
    )


def product_bundle(base: SimplicialComplex, fiber) -> Bundle:
    """Trivial bundle: one horizontal copy of the base per fiber point."""
    fiber = tuple(fiber)
    pieces = []
    for s in base.maximal_simplices:
        for f in fiber:
            pieces.append({(v, f) for v in s})
    total = build_complex(pieces)
    projection = SimplicialMap(total, base, {v: v[0] for v in total.vertices})
    return Bundle(total=total, base=base, projection=projection, fiber=fiber)


def pullback(bundle: Bundle, f: SimplicialMap) -> Bundle:
    """Pull the bundle back along a map into its base.

    Total simplices are pairs (simplex upstairs in the new base, lift of
    its image); vertices are tagged (new base vertex, old total vertex).
    """
    if f.target != bundle.base:
        raise ValidationError("map does not land in the bundle's base")
    pieces = []
    for s in f.source.maximal_simplices:
        image = f.image_simplex(s)
        for lift in bundle.lifts_of(image):
            over: Dict = {}
            for e in lift:
                over[bundle.projection(e)] = e
            pieces.append({(x, over[f(x)]) for x in s})
    total = build_complex(pieces) if pieces else SimplicialComplex([])
    projection = SimplicialMap(
        total, f.source, {v: v[0] for v in total.vertices}
    )
    return validate_bundle(
        Bundle(
            total=total,
            base=f.source,
            projection=projection,
            fiber=bundle.fiber,
            action=bundle.action,
        )
    )


def restrict_bundle(bundle: Bundle, sub: SimplicialComplex) -> Bundle:
    """Restriction to a subcomplex of the base, keeping vertex labels."""
    if not sub.is_subcomplex_of(bundle.base):
        raise ValidationError("restriction target is not a subcomplex")
    kept = [
        s for s in bundle.total.simplices
        if sub.has_simplex(bundle.projection.image_simplex(s))
    ]
    total = SimplicialComplex(kept)
    projection = SimplicialMap(
        total, sub, {v: bundle.projection(v) for v in total.vertices}
    )
    return Bundle(
        total=total,
        base=sub,
        projection=projection,
        fiber=bundle.fiber,
        action=bundle.action,
    )


def bundle_isomorphism(
    b1: Bundle,
    b2: Bundle,
    *,
    budget: int = 1_000_000,
) -> Optional[Dict]:
    """Fiber-preserving simplicial isomorphism over a common base.

    Searches vertex by vertex over the base, trying fiber bijections in
    sorted order, so the first hit is the lexicographically least witness.
    Returns the total-vertex bijection, or None.
    """
    if b1.base != b2.base:
        return None
    if len(b1.fiber) != len(b2.fiber):
        return None
    for k in range(max(b1.total.dim, b2.total.dim) + 1):
        if b1.total.simplex_count(k) != b2.total.simplex_count(k):
            return None
    base_vertices = list(b1.base.vertices)
    fibers1 = {v: b1.fiber_over(v) for v in base_vertices}
    fibers2 = {v: b2.fiber_over(v) for v in base_vertices}
    simplices1 = sorted(
        (tuple(sorted(s)) for s in b1.total.simplices), key=lambda s: (len(s), s)
    )
    position = {v: i for i, v in enumerate(base_vertices)}
    # simplices become checkable once all their base vertices are assigned
    by_latest: Dict[int, List[tuple]] = {i: [] for i in range(len(base_vertices))}
    for s in simplices1:
        latest = max(position[b1.projection(v)] for v in s)
        by_latest[latest].append(s)

    tried = 0
    mapping: Dict = {}

    def extend(i: int) -> bool:
        nonlocal tried
        if i == len(base_vertices):
            return True
        v = base_vertices[i]
        source_fiber = fibers1[v]
        for image in itertools.permutations(fibers2[v]):
            tried += 1
            if tried > budget:
                raise BudgetExceededError(
                    f"isomorphism search exceeded budget {budget}", budget
                )
            for e, w in zip(source_fiber, image):
                mapping[e] = w
            if all(
                b2.total.has_simplex(frozenset(mapping[e] for e in s))
                for s in by_latest[i]
            ):
                if extend(i + 1):
                    return True
            for e in source_fiber:
                del mapping[e]
        return False

    if extend(0):
        return dict(mapping)
    return None


def local_trivialization_check(bundle: Bundle, cover) -> Dict:
    """Per part: is the restriction isomorphic to a product over the part?"""
    report = {}
    for idx in cover.indices:
        part = cover.parts[idx]
        if part.is_empty():
            report[idx] = True
            continue
        restricted = restrict_bundle(bundle, part)
        model = product_bundle(part, bundle.fiber)
        report[idx] = bundle_isomorphism(restricted, model) is not None
    return report


def patch_bundles(cover, locals_: Mapping) -> Bundle:
    """Glue bundles over the parts of a cover that agree on overlaps.

    Agreement means literally identical labeled total simplices over each
    pairwise intersection; the union is then the unique common extension
    and restricting it to any part returns that part's input unchanged.
    """
    indices = list(cover.indices)
    for idx in indices:
        if idx not in locals_:
            raise ValidationError(f"no local bundle for part {idx!r}")
        local = locals_[idx]
        if local.base != cover.parts[idx]:
            raise ValidationError(
                f"local bundle over {idx!r} has the wrong base"
            )
    fibers = {tuple(locals_[idx].fiber) for idx in indices}
    if len(fibers) != 1:
        raise ValidationError("local bundles have different fibers")
    for a, b in itertools.combinations(indices, 2):
        overlap = cover.parts[a].simplices & cover.parts[b].simplices
        if not overlap:
            continue
        sub = SimplicialComplex(overlap)
        ra = restrict_bundle(locals_[a], sub)
        rb = restrict_bundle(locals_[b], sub)
        if ra.total.simplices != rb.total.simplices:
            offending = sorted(
                tuple(sorted(s))
                for s in ra.total.simplices ^ rb.total.simplices
            )[0]
            raise ValidationError(
                f"locals over {a!r} and {b!r} disagree at {offending!r}",
                details={"parts": (a, b), "simplex": offending},
            )
        for v in ra.total.vertices:
            if ra.projection(v) != rb.projection(v):
                raise ValidationError(
                    f"locals over {a!r} and {b!r} project {v!r} differently"
                )
    all_simplices = frozenset().union(
        *(locals_[idx].total.simplices for idx in indices)
    )
    total = SimplicialComplex(all_simplices)
    vertex_map: Dict = {}
    for idx in indices:
        for v in locals_[idx].total.vertices:
            image = locals_[idx].projection(v)
            if vertex_map.setdefault(v, image) != image:
                raise ValidationError(
                    f"total vertex {v!r} is shared but projects ambiguously"
                )
    projection = SimplicialMap(total, cover.base, vertex_map)
    actions = {id(locals_[idx].action) for idx in indices}
    action = locals_[indices[0]].action if len(actions) == 1 else None
    return validate_bundle(
        Bundle(
            total=total,
            base=cover.base,
            projection=projection,
            fiber=next(iter(fibers)),
            action=action,
        )
    )


def _check_monotone_over_base(bundle: Bundle) -> None:
    # prism triangulations only project simplicially when the total vertex
    # order refines the base vertex order within every simplex
    for s in bundle.total.maximal_simplices:
        ordered = tuple(sorted(s))
        images = [bundle.projection(v) for v in ordered]
        if images != sorted(images):
            raise ValidationError(
                "total vertex order does not refine the base order; "
                f"relabel the bundle over {tuple(sorted(set(images)))!r}"
            )


def mapping_cylinder_bundle(
    source: Bundle,
    target: Bundle,
    comparison: SimplicialMap,
) -> Tuple[Bundle, SimplicialMap, SimplicialMap]:
    """Fiberwise mapping cylinder of a fiber-preserving comparison map.

    The base becomes the prism over the common base; the total is the
    simplicial mapping cylinder of the comparison map.  The end-0
    restriction is the source total, the end-1 restriction the target
    total; the total retains the homology of the target.  A comparison
    map that fails to commute with the projections or is not fiberwise
    bijective is rejected (such maps only yield quotients that fiber
    badly).
    """
    if source.base != target.base:
        raise ValidationError("bundles live over different bases")
    if comparison.source != source.total or comparison.target != target.total:
        raise ValidationError("comparison map endpoints do not match")
    for v in source.total.vertices:
        if target.projection(comparison(v)) != source.projection(v):
            raise ValidationError(
                f"comparison does not commute with projections at {v!r}",
                details={"vertex": v},
            )
    for b in source.base.vertices:
        image = {comparison(e) for e in source.fiber_over(b)}
        if image != set(target.fiber_over(b)):
            raise ValidationError(
                f"comparison is not fiberwise bijective over {b!r}",
                details={"vertex": b},
            )
    _check_monotone_over_base(source)

    base_cyl, base_end0, base_end1 = mapping_cylinder(
        SimplicialMap.identity(source.base)
    )
    total_cyl, total_end0, total_end1 = mapping_cylinder(comparison)
    vertex_map: Dict = {}
    for v in source.total.vertices:
        vertex_map[(0, v)] = (0, source.projection(v))
    for w in target.total.vertices:
        vertex_map[(1, w)] = (1, target.projection(w))
    projection = SimplicialMap(total_cyl, base_cyl, vertex_map)
    bundle = validate_bundle(
        Bundle(
            total=total_cyl,
            base=base_cyl,
            projection=projection,
            fiber=target.fiber,
            action=None,
        )
    )
    return bundle, total_end0, total_end1
