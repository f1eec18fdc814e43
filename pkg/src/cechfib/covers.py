"""Covers of a base complex, their nerves, and the section into the nerve.

A cover is a family of subcomplexes indexed by a totally ordered set
(always the sorted order of the index labels); the nerve records one
simplex per family of parts with nonempty intersection, together with
the intersection itself as a witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

from .complexes import (
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivision,
    build_complex,
    intersect_complexes,
)
from .errors import ValidationError
from .homology import is_point_like


class Cover:
    """Indexed family of subcomplexes whose union is the base."""

    __slots__ = ("base", "indices", "parts")

    def __init__(
        self,
        base: SimplicialComplex,
        parts: Mapping,
        *,
        check_union: bool = True,
    ):
        try:
            indices = tuple(sorted(parts))
        except TypeError as exc:
            raise ValidationError("cover indices must be mutually orderable") from exc
        if not indices:
            raise ValidationError("cover has no parts")
        for idx in indices:
            part = parts[idx]
            if not part.is_subcomplex_of(base):
                raise ValidationError(
                    f"part {idx!r} is not a subcomplex of the base",
                    details={"index": idx},
                )
            for s in part.simplices:
                if len(s) > 1:
                    for v in s:
                        if not part.has_simplex(s - {v}):
                            raise ValidationError(
                                f"part {idx!r} is not closed under faces",
                                details={"index": idx, "simplex": tuple(sorted(s))},
                            )
        if check_union:
            union = frozenset().union(*(parts[idx].simplices for idx in indices))
            if union != base.simplices:
                missing = sorted(
                    tuple(sorted(s)) for s in base.simplices - union
                )[:4]
                raise ValidationError(
                    f"parts do not cover the base; e.g. {missing!r} uncovered",
                    details={"missing": missing},
                )
        self.base = base
        self.indices = indices
        self.parts = {idx: parts[idx] for idx in indices}

    def part(self, idx) -> SimplicialComplex:
        return self.parts[idx]

    def union_is_base(self) -> bool:
        union = frozenset().union(*(p.simplices for p in self.parts.values()))
        return union == self.base.simplices

    def __eq__(self, other):
        if not isinstance(other, Cover):
            return NotImplemented
        return self.base == other.base and self.parts == other.parts

    def __repr__(self):
        return f"Cover({len(self.indices)} parts over {self.base!r})"


def build_cover(base, parts, *, check_union: bool = True) -> Cover:
    return Cover(base, parts, check_union=check_union)


def one_part_cover(base: SimplicialComplex, index="U0") -> Cover:
    return Cover(base, {index: base})


def star_cover(x: SimplicialComplex) -> Cover:
    """Canonical always-good cover: vertex stars over the subdivided base.

    The base of the cover is the barycentric subdivision of ``x``; the
    part for a vertex v holds the chains whose smallest simplex contains
    v (the closed star of v's barycenter).  Every multiple intersection
    is then a cone over the chains through a fixed simplex, so the cover
    is good and its nerve reproduces ``x`` exactly.
    """
    sd, carrier = barycentric_subdivision(x)
    parts: Dict = {}
    for v in x.vertices:
        star_simplices = [
            chain for chain in sd.simplices
            if v in min(chain, key=len)
        ]
        parts[v] = SimplicialComplex(star_simplices)
    return Cover(sd, parts)


def closed_star_cover(x: SimplicialComplex) -> Cover:
    """Cover of ``x`` itself by closed vertex stars.

    Useful for restriction-style checks; unlike :func:`star_cover` its
    multiple intersections need not be connected, so it is not in general
    a good cover.
    """
    parts: Dict = {}
    for v in x.vertices:
        parts[v] = build_complex(
            [s for s in x.maximal_simplices if v in s]
        )
    return Cover(x, parts)


@dataclass(frozen=True)
class NerveComplex:
    """Nerve of a cover with intersection witnesses per simplex."""

    cover: Cover
    complex: SimplicialComplex
    witnesses: Mapping

    def witness(self, simplex) -> SimplicialComplex:
        return self.witnesses[tuple(sorted(simplex))]


def cech_nerve(cover: Cover) -> NerveComplex:
    """One nerve simplex per index family with nonempty intersection."""
    order = cover.indices
    witnesses: Dict[tuple, SimplicialComplex] = {}

    def extend(prefix: tuple, met: SimplicialComplex, start: int):
        for pos in range(start, len(order)):
            idx = order[pos]
            inter = intersect_complexes(met, cover.parts[idx])
            if inter.is_empty():
                continue
            key = prefix + (idx,)
            witnesses[key] = inter
            extend(key, inter, pos + 1)

    for pos, idx in enumerate(order):
        part = cover.parts[idx]
        if part.is_empty():
            continue
        witnesses[(idx,)] = part
        extend((idx,), part, pos + 1)

    if not witnesses:
        raise ValidationError("every part of the cover is empty")
    maximal = [set(key) for key in witnesses]
    nerve = build_complex(maximal)
    return NerveComplex(cover=cover, complex=nerve, witnesses=witnesses)


@dataclass(frozen=True)
class GoodCoverReport:
    """Outcome of the goodness check with the failing intersections."""

    good: bool
    failures: tuple  # (index tuple, reason)


def is_good_cover(cover: Cover, nerve: Optional[NerveComplex] = None) -> GoodCoverReport:
    """Every nonempty intersection must be connected and acyclic."""
    if nerve is None:
        nerve = cech_nerve(cover)
    failures = []
    for key in sorted(nerve.witnesses):
        witness = nerve.witnesses[key]
        if not is_point_like(witness):
            failures.append((key, "intersection is not connected and acyclic"))
    return GoodCoverReport(good=not failures, failures=tuple(failures))


def carrier_check(cover: Cover) -> bool:
    """Whether every base simplex lies inside at least one part."""
    for s in cover.base.maximal_simplices:
        if not any(part.has_simplex(s) for part in cover.parts.values()):
            return False
    return True


def section_map(cover: Cover, nerve: Optional[NerveComplex] = None) -> SimplicialMap:
    """Map the subdivided base into the nerve by least covering index.

    Each subdivision vertex is a base simplex; it goes to the least index
    whose part contains that simplex.  Requires the carrier condition.
    """
    if not carrier_check(cover):
        raise ValidationError(
            "carrier condition fails: some base simplex lies in no part"
        )
    if nerve is None:
        nerve = cech_nerve(cover)
    sd, carrier = barycentric_subdivision(cover.base)
    vertex_map = {}
    for v in sd.vertices:
        simplex = carrier[v]
        vertex_map[v] = next(
            idx for idx in cover.indices if cover.parts[idx].has_simplex(simplex)
        )
    return SimplicialMap(sd, nerve.complex, vertex_map)


def disjoint_union_cover(u: Cover, v: Cover) -> Cover:
    """Combine two covers of one base, all u-parts ordered first.

    Indices are tagged ("0", old) and ("1", old) so the combined sorted
    order keeps each side's internal order and puts the first cover
    entirely before the second.
    """
    if u.base != v.base:
        raise ValidationError("covers have different bases")
    parts: Dict = {}
    for idx in u.indices:
        parts[("0", idx)] = u.parts[idx]
    for idx in v.indices:
        parts[("1", idx)] = v.parts[idx]
    return Cover(u.base, parts)
