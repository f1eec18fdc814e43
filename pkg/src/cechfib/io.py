"""JSON interchange for every library value.

Vertex identifiers and cover part names are strings in documents; pair
and triple keys join index names with ``|``.  Loading rebuilds values
through the normal validators, so a malformed document fails the same
way a malformed in-memory value would.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping

from .complexes import SimplicialComplex, SimplicialMap, build_complex
from .covers import Cover, build_cover
from .errors import ValidationError
from .groups import (
    CrossedModule,
    FiniteGroup,
    GroupAction,
    validate_crossed_module,
    validate_group,
)


def complex_to_doc(x: SimplicialComplex) -> dict:
    return {
        "maximal": sorted(
            [str(v) for v in sorted(s)] for s in x.maximal_simplices
        )
    }


def complex_from_doc(doc: Mapping) -> SimplicialComplex:
    if not isinstance(doc, Mapping) or "maximal" not in doc:
        raise ValidationError('complex document needs a "maximal" list')
    return build_complex(doc["maximal"])


def map_from_doc(doc: Mapping, source: SimplicialComplex,
                 target: SimplicialComplex) -> SimplicialMap:
    if "vertexMap" not in doc:
        raise ValidationError('map document needs a "vertexMap" object')
    return SimplicialMap(source, target, dict(doc["vertexMap"]))


def map_to_doc(f: SimplicialMap) -> dict:
    return {"vertexMap": {str(v): str(w) for v, w in sorted(f.vertex_map.items())}}


def cover_to_doc(cover: Cover) -> dict:
    return {
        "base": complex_to_doc(cover.base),
        "parts": {
            str(idx): complex_to_doc(part) for idx, part in cover.parts.items()
        },
    }


def cover_from_doc(doc: Mapping) -> Cover:
    if "base" not in doc or "parts" not in doc:
        raise ValidationError('cover document needs "base" and "parts"')
    base = complex_from_doc(doc["base"])
    parts = {
        str(name): complex_from_doc(part)
        for name, part in doc["parts"].items()
    }
    return build_cover(base, parts)


def group_to_doc(group: FiniteGroup) -> dict:
    return {"order": group.order, "table": [list(r) for r in group.table]}


def group_from_doc(doc: Mapping) -> FiniteGroup:
    if "table" not in doc:
        raise ValidationError('group document needs a "table"')
    table = doc["table"]
    if "order" in doc and int(doc["order"]) != len(table):
        raise ValidationError("declared order does not match the table")
    return validate_group(table)


def action_from_doc(doc: Mapping, group: FiniteGroup) -> GroupAction:
    if "fiber" not in doc or "table" not in doc:
        raise ValidationError('action document needs "fiber" and "table"')
    return GroupAction(group, [str(f) for f in doc["fiber"]], doc["table"])


def action_to_doc(action: GroupAction) -> dict:
    return {
        "fiber": [str(f) for f in action.fiber],
        "table": [list(r) for r in action.table],
    }


def _pair_key(pair) -> str:
    return "|".join(str(x) for x in pair)


def _split_key(key: str, size: int) -> tuple:
    parts = tuple(key.split("|"))
    if len(parts) != size:
        raise ValidationError(f"key {key!r} does not name {size} indices")
    return parts


def cocycle_values_to_doc(values: Mapping) -> dict:
    return {_pair_key(pair): v for pair, v in sorted(values.items())}


def cocycle_values_from_doc(doc: Mapping) -> Dict[tuple, int]:
    return {_split_key(k, 2): int(v) for k, v in doc.items()}


def gerbe_witnesses_from_doc(doc: Mapping) -> Dict[tuple, int]:
    return {_split_key(k, 3): int(v) for k, v in doc.items()}


def cocycle_to_doc(cocycle) -> dict:
    return {
        "cover": cover_to_doc(cocycle.cover),
        "group": group_to_doc(cocycle.group),
        "values": cocycle_values_to_doc(cocycle.values),
    }


def cocycle_from_doc(doc: Mapping):
    from .cocycles import validate_cocycle

    for key in ("cover", "group", "values"):
        if key not in doc:
            raise ValidationError(f'cocycle document needs "{key}"')
    cover = cover_from_doc(doc["cover"])
    group = group_from_doc(doc["group"])
    values = cocycle_values_from_doc(doc["values"])
    return validate_cocycle(cover, group, values)


def crossed_module_to_doc(module: CrossedModule) -> dict:
    return {
        "baseGroup": group_to_doc(module.base),
        "fiberGroup": group_to_doc(module.fiber),
        "boundary": list(module.boundary),
        "action": [list(r) for r in module.action],
    }


def crossed_module_from_doc(doc: Mapping) -> CrossedModule:
    for key in ("baseGroup", "fiberGroup", "boundary", "action"):
        if key not in doc:
            raise ValidationError(f'crossed module document needs "{key}"')
    return validate_crossed_module(
        group_from_doc(doc["baseGroup"]),
        group_from_doc(doc["fiberGroup"]),
        [int(x) for x in doc["boundary"]],
        doc["action"],
    )


def gerbe_to_doc(data) -> dict:
    return {
        "cover": cover_to_doc(data.cover),
        "crossedModule": crossed_module_to_doc(data.module),
        "values": cocycle_values_to_doc(data.edge_values),
        "witnesses": {
            _pair_key(t): v for t, v in sorted(data.witnesses.items())
        },
    }


def gerbe_from_doc(doc: Mapping):
    from .gerbes import validate_gerbe_cocycle

    for key in ("cover", "crossedModule", "values", "witnesses"):
        if key not in doc:
            raise ValidationError(f'gerbe document needs "{key}"')
    cover = cover_from_doc(doc["cover"])
    module = crossed_module_from_doc(doc["crossedModule"])
    values = cocycle_values_from_doc(doc["values"])
    witnesses = gerbe_witnesses_from_doc(doc["witnesses"])
    return validate_gerbe_cocycle(cover, module, values, witnesses)


def bundle_to_doc(bundle) -> dict:
    """Bundles serialize with flattened total vertex names.

    A total vertex is rendered as the ``|``-joined flattening of its
    label tuple, so documents round-trip as opaque string labels.
    """
    def flatten(v):
        if isinstance(v, tuple):
            return "|".join(flatten(x) for x in v)
        return str(v)

    total = SimplicialComplex(
        frozenset(
            frozenset(flatten(v) for v in s) for s in bundle.total.simplices
        )
    )
    doc = {
        "total": complex_to_doc(total),
        "base": complex_to_doc(bundle.base),
        "projection": {
            flatten(v): str(bundle.projection(v))
            for v in bundle.total.vertices
        },
        "fiber": [str(f) for f in bundle.fiber],
    }
    doc["action"] = action_to_doc(bundle.action) if bundle.action else None
    if bundle.action is not None:
        doc["group"] = group_to_doc(bundle.action.group)
    return doc


def bundle_from_doc(doc: Mapping):
    from .bundles import Bundle, validate_bundle

    for key in ("total", "base", "projection", "fiber"):
        if key not in doc:
            raise ValidationError(f'bundle document needs "{key}"')
    total = complex_from_doc(doc["total"])
    base = complex_from_doc(doc["base"])
    projection = SimplicialMap(total, base, dict(doc["projection"]))
    action = None
    if doc.get("action") and doc.get("group"):
        action = action_from_doc(doc["action"], group_from_doc(doc["group"]))
    return validate_bundle(
        Bundle(
            total=total,
            base=base,
            projection=projection,
            fiber=tuple(str(f) for f in doc["fiber"]),
            action=action,
        )
    )


def milnor_from_doc(doc: Mapping):
    from .classifying import validate_milnor_point

    for key in ("t", "g", "group"):
        if key not in doc:
            raise ValidationError(f'coordinate-point document needs "{key}"')
    group = group_from_doc(doc["group"])
    coords = [Fraction(str(t)) for t in doc["t"]]
    values = {}
    for key, v in doc["g"].items():
        i, j = _split_key(key, 2)
        values[(int(i), int(j))] = int(v)
    return validate_milnor_point(coords, values, group)
