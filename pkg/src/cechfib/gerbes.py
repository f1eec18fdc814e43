"""Transition data one level up: edge values in a base group twisted by
witnesses in a crossed module, with tetrahedron coherence.

The two laws:
  triangle     g_ab * g_bc = boundary(c_abc) * g_ac
  tetrahedron  c_abc * c_acd = (g_ab . c_bcd) * c_abd
where . is the crossed-module action.  The tetrahedron law is also
re-derived independently by pasting 2-cells in the associated strict
2-group, and the trivial-base abelian case reduces to degree-2 cochain
cohomology of the nerve, computed by Smith reduction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .covers import Cover, NerveComplex, cech_nerve, is_good_cover
from .errors import BudgetExceededError, ValidationError
from .groups import CrossedModule, abelian_decomposition
from .homology import simplex_boundary_matrix
from .snf import smith_normal_form

DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class GerbeCocycle:
    """Edge values on ordered pairs plus witnesses on ordered triples."""

    cover: Cover
    nerve: NerveComplex
    module: CrossedModule
    edge_values: Mapping   # (a, b) -> element of the base group
    witnesses: Mapping     # (a, b, c) -> element of the fiber group

    def edge(self, a, b) -> int:
        if a == b:
            return 0
        if (a, b) in self.edge_values:
            return self.edge_values[(a, b)]
        return self.module.base.inv(self.edge_values[(b, a)])

    def witness(self, a, b, c) -> int:
        return self.witnesses[(a, b, c)]


def _keys_of_size(nerve: NerveComplex, size: int) -> list:
    return sorted(k for k in nerve.witnesses if len(k) == size)


def validate_gerbe_cocycle(
    cover: Cover,
    module: CrossedModule,
    edge_values: Mapping,
    witnesses: Mapping,
    *,
    nerve: Optional[NerveComplex] = None,
    assume_good: bool = False,
) -> GerbeCocycle:
    """Check both laws on every nonempty triple and quadruple."""
    if nerve is None:
        nerve = cech_nerve(cover)
    if not assume_good:
        report = is_good_cover(cover, nerve)
        if not report.good:
            raise ValidationError(
                f"cover is not good at {report.failures[0][0]!r}",
                details={"failures": report.failures},
            )
    base, fiber = module.base, module.fiber
    edges: Dict[tuple, int] = {}
    for pair in _keys_of_size(nerve, 2):
        if pair not in edge_values:
            raise ValidationError(f"missing edge value for {pair!r}")
        g = int(edge_values[pair])
        if not (0 <= g < base.order):
            raise ValidationError(f"edge value {g} out of range at {pair!r}")
        edges[pair] = g
    tris: Dict[tuple, int] = {}
    for triple in _keys_of_size(nerve, 3):
        if triple not in witnesses:
            raise ValidationError(f"missing witness for {triple!r}")
        h = int(witnesses[triple])
        if not (0 <= h < fiber.order):
            raise ValidationError(f"witness {h} out of range at {triple!r}")
        tris[triple] = h
    data = GerbeCocycle(
        cover=cover, nerve=nerve, module=module,
        edge_values=edges, witnesses=tris,
    )
    for a, b, c in _keys_of_size(nerve, 3):
        lhs = base.mul(data.edge(a, b), data.edge(b, c))
        rhs = base.mul(module.boundary[data.witness(a, b, c)], data.edge(a, c))
        if lhs != rhs:
            raise ValidationError(
                f"triangle law fails on ({a!r}, {b!r}, {c!r})",
                details={"law": "triangle", "tuple": (a, b, c)},
            )
    for a, b, c, d in _keys_of_size(nerve, 4):
        lhs = fiber.mul(data.witness(a, b, c), data.witness(a, c, d))
        rhs = fiber.mul(
            module.act(data.edge(a, b), data.witness(b, c, d)),
            data.witness(a, b, d),
        )
        if lhs != rhs:
            raise ValidationError(
                f"tetrahedron law fails on ({a!r}, {b!r}, {c!r}, {d!r})",
                details={"law": "tetrahedron", "tuple": (a, b, c, d)},
            )
    return data


def gerbe_from_cocycle(cocycle) -> GerbeCocycle:
    """View a strict cocycle as gerbe data with identity witnesses."""
    from .groups import adjoint_crossed_module

    module = adjoint_crossed_module(cocycle.group)
    witnesses = {}
    for key in _keys_of_size(cocycle.nerve, 3):
        a, b, c = key
        witnesses[key] = 0
    return validate_gerbe_cocycle(
        cocycle.cover, module, dict(cocycle.values), witnesses,
        nerve=cocycle.nerve, assume_good=True,
    )


def gerbe_coboundary(
    data: GerbeCocycle,
    lam: Mapping,
    shift: Mapping,
) -> GerbeCocycle:
    """Gauge transform by lam (index -> base) and shift (pair -> fiber).

    New edges are boundary(shift) * lam-conjugated edges; the witness
    transform is the unique one compatible with the triangle law:

      c' = m_ab * (g'_ab-without-m . m_bc) * (lam_a . c) * m_ac^-1

    where g'-without-m is lam_a g_ab lam_b^-1.  Validity of the output is
    re-checked, never assumed.
    """
    base, fiber, module = data.module.base, data.module.fiber, data.module
    for idx in data.cover.indices:
        if idx not in lam:
            raise ValidationError(f"gauge misses index {idx!r}")
    pairs = _keys_of_size(data.nerve, 2)
    for pair in pairs:
        if pair not in shift:
            raise ValidationError(f"shift misses pair {pair!r}")

    def conjugated_edge(a, b) -> int:
        return base.mul(base.mul(lam[a], data.edge(a, b)), base.inv(lam[b]))

    def shift_of(a, b) -> int:
        if (a, b) in shift:
            return shift[(a, b)]
        # reversed pair: force consistency with the ascending value
        raise ValidationError(f"shift pair {(a, b)!r} is not ascending")

    new_edges = {
        (a, b): base.mul(module.boundary[shift_of(a, b)], conjugated_edge(a, b))
        for a, b in pairs
    }
    new_witnesses = {}
    for a, b, c in _keys_of_size(data.nerve, 3):
        term = fiber.mul(
            shift_of(a, b),
            module.act(conjugated_edge(a, b), shift_of(b, c)),
        )
        term = fiber.mul(term, module.act(lam[a], data.witness(a, b, c)))
        term = fiber.mul(term, fiber.inv(shift_of(a, c)))
        new_witnesses[(a, b, c)] = term
    return validate_gerbe_cocycle(
        data.cover, module, new_edges, new_witnesses,
        nerve=data.nerve, assume_good=True,
    )


@dataclass(frozen=True)
class TwoCell:
    """2-cell of the strict 2-group: morphism src -> boundary(h) * src."""

    h: int
    src: int


def _cell_target(module: CrossedModule, cell: TwoCell) -> int:
    return module.base.mul(module.boundary[cell.h], cell.src)


def _vertical(module: CrossedModule, second: TwoCell, first: TwoCell) -> TwoCell:
    if second.src != _cell_target(module, first):
        raise ValidationError("2-cells do not compose vertically")
    return TwoCell(h=module.fiber.mul(second.h, first.h), src=first.src)


def _whisker_right(module: CrossedModule, cell: TwoCell, g: int) -> TwoCell:
    return TwoCell(h=cell.h, src=module.base.mul(cell.src, g))


def _whisker_left(module: CrossedModule, g: int, cell: TwoCell) -> TwoCell:
    return TwoCell(h=module.act(g, cell.h), src=module.base.mul(g, cell.src))


def check_coherence_faces(data: GerbeCocycle) -> bool:
    """Re-derive the quadruple coherence by pasting 2-cells.

    For each nonempty quadruple the witness square is composed two ways
    inside the strict 2-group (whisker the inner witness against the two
    outer ones); the data is coherent iff the two pastings agree as
    2-cells on every quadruple.  Triangle-valid shapes are required since
    they type the 2-cells.
    """
    module = data.module
    base = module.base

    def cell(a, b, c) -> TwoCell:
        two_cell = TwoCell(h=data.witness(a, b, c), src=data.edge(a, c))
        expected = base.mul(data.edge(a, b), data.edge(b, c))
        if _cell_target(module, two_cell) != expected:
            raise ValidationError(
                f"triangle data at ({a!r}, {b!r}, {c!r}) does not type-check"
            )
        return two_cell

    for a, b, c, d in _keys_of_size(data.nerve, 4):
        # route 1: g_ad => g_ab g_bd => g_ab g_bc g_cd
        route1 = _vertical(
            module,
            _whisker_left(module, data.edge(a, b), cell(b, c, d)),
            cell(a, b, d),
        )
        # route 2: g_ad => g_ac g_cd => g_ab g_bc g_cd
        route2 = _vertical(
            module,
            _whisker_right(module, cell(a, b, c), data.edge(c, d)),
            cell(a, c, d),
        )
        if route1 != route2:
            return False
    return True


class CechClassifier:
    """Degree-2 cochain classes of a nerve with finite abelian coefficients.

    Coefficients are decomposed into cyclic factors; per factor the
    cocycle lattice mod (coboundaries + modulus) is reduced by one Smith
    form, giving canonical labels and the total class count.
    """

    def __init__(self, nerve: NerveComplex, coefficients):
        self.nerve = nerve
        self.coefficients = coefficients
        self.factors, self.coords = abelian_decomposition(coefficients)
        cx = nerve.complex
        self.triangles = cx.simplices_of_dim(2)
        delta1 = _transpose_matrix(simplex_boundary_matrix(cx, 2))
        delta2 = _transpose_matrix(simplex_boundary_matrix(cx, 3))
        self._reducers = [
            _CyclicReducer(m, delta1, delta2, len(self.triangles))
            for m in self.factors
        ]

    @property
    def class_count(self) -> int:
        out = 1
        for reducer in self._reducers:
            out *= reducer.class_count
        return out

    def label(self, witnesses: Mapping) -> tuple:
        out = []
        for axis, reducer in enumerate(self._reducers):
            vec = [
                self.coords[witnesses[tuple(t)]][axis] for t in self.triangles
            ]
            out.extend(reducer.label(vec))
        return tuple(out)


def _transpose_matrix(mat):
    if not mat:
        return []
    return [list(col) for col in zip(*mat)]


class _CyclicReducer:
    def __init__(self, modulus: int, delta1, delta2, dim: int):
        self.modulus = modulus
        self.dim = dim
        rows2 = len(delta2)
        form2 = smith_normal_form(
            delta2, (rows2, dim), want_left=False,
            want_right=True, want_right_inverse=True,
        ) if rows2 else None
        # lattice of mod-m cocycles: columns scaled so delta2 lands in m*Z
        if form2 is None:
            scale = [1] * dim
            self._kernel = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
            self._solver = [row[:] for row in self._kernel]
        else:
            diag = list(form2.diagonal) + [0] * (dim - len(form2.diagonal))
            scale = [
                modulus // math.gcd(diag[j], modulus) if diag[j] else 1
                for j in range(dim)
            ]
            self._kernel = [
                [form2.right[i][j] * scale[j] for j in range(dim)]
                for i in range(dim)
            ]
            self._solver = form2.right_inverse
            self._scale = scale
        self._form2 = form2
        # coboundary + modulus sublattice, in kernel coordinates
        cols1 = len(delta1[0]) if delta1 else 0
        generators = []
        for j in range(cols1):
            generators.append([delta1[i][j] for i in range(dim)])
        for i in range(dim):
            vec = [0] * dim
            vec[i] = modulus
            generators.append(vec)
        coords = [self._coordinates(vec) for vec in generators]
        rel = [[c[i] for c in coords] for i in range(dim)]
        self._relation_form = smith_normal_form(
            rel, (dim, len(coords)), want_left=True, want_right=False
        )
        self.class_count = 1
        for d in self._relation_form.diagonal:
            if d == 0:
                raise ValidationError("cocycle lattice is not of finite index")
            self.class_count *= d

    def _coordinates(self, vec) -> list:
        if self._form2 is None:
            return list(vec)
        raw = [
            sum(self._solver[i][j] * vec[j] for j in range(self.dim))
            for i in range(self.dim)
        ]
        out = []
        for i in range(self.dim):
            s = self._scale[i]
            if raw[i] % s:
                raise ValidationError("vector is not a mod-m cocycle")
            out.append(raw[i] // s)
        return out

    def label(self, vec) -> tuple:
        coords = self._coordinates(vec)
        form = self._relation_form
        reduced = [
            sum(form.left[i][j] * coords[j] for j in range(self.dim))
            for i in range(self.dim)
        ]
        for i, d in enumerate(form.diagonal):
            reduced[i] %= d
        return tuple(reduced)


def abelian_class(data: GerbeCocycle) -> tuple:
    """Canonical label of the witness data in degree-2 cohomology.

    Requires a trivial base group and abelian fiber; two data sets get
    the same label exactly when they differ by a coboundary.
    """
    if data.module.base.order != 1:
        raise ValidationError("base group must be trivial")
    if not data.module.fiber.is_abelian:
        raise ValidationError("fiber group must be abelian")
    classifier = CechClassifier(data.nerve, data.module.fiber)
    return classifier.label(data.witnesses)


def abelian_class_count(nerve: NerveComplex, coefficients) -> int:
    return CechClassifier(nerve, coefficients).class_count


@dataclass(frozen=True)
class GerbeEquivalenceResult:
    equivalent: bool
    gauge: Optional[Mapping] = None
    shift: Optional[Mapping] = None


def gerbes_equivalent(
    d1: GerbeCocycle,
    d2: GerbeCocycle,
    *,
    budget: int = DEFAULT_BUDGET,
) -> GerbeEquivalenceResult:
    """Exhaustive search for a gauge taking one datum to the other.

    Iterates gauges in lexicographic order; for each gauge the shift on
    every pair is constrained to the boundary fiber of a forced element,
    so impossible gauges are pruned before the witness comparison.  The
    first hit is the least witness.
    """
    if d1.cover != d2.cover:
        raise ValidationError("gerbe data live over different covers")
    if d1.module is not d2.module and (
        d1.module.base != d2.module.base
        or d1.module.fiber != d2.module.fiber
        or d1.module.boundary != d2.module.boundary
        or d1.module.action != d2.module.action
    ):
        raise ValidationError("gerbe data use different crossed modules")
    module = d1.module
    base, fiber = module.base, module.fiber
    indices = d1.cover.indices
    pairs = _keys_of_size(d1.nerve, 2)
    boundary_fibers: Dict[int, List[int]] = {}
    for h in fiber.elements():
        boundary_fibers.setdefault(module.boundary[h], []).append(h)

    tried = 0
    for gauge_tuple in itertools.product(base.elements(), repeat=len(indices)):
        lam = dict(zip(indices, gauge_tuple))
        options: List[List[int]] = []
        feasible = True
        for a, b in pairs:
            conj = base.mul(base.mul(lam[a], d1.edge(a, b)), base.inv(lam[b]))
            need = base.mul(d2.edge(a, b), base.inv(conj))
            choices = boundary_fibers.get(need)
            if not choices:
                feasible = False
                break
            options.append(choices)
        if not feasible:
            tried += 1
            if tried > budget:
                raise BudgetExceededError(
                    f"gerbe equivalence search exceeded budget {budget}", budget
                )
            continue
        for combo in itertools.product(*options):
            tried += 1
            if tried > budget:
                raise BudgetExceededError(
                    f"gerbe equivalence search exceeded budget {budget}", budget
                )
            shift = dict(zip(pairs, combo))
            transformed = gerbe_coboundary(d1, lam, shift)
            if transformed.witnesses == d2.witnesses and \
                    transformed.edge_values == d2.edge_values:
                return GerbeEquivalenceResult(
                    equivalent=True, gauge=lam, shift=shift
                )
    return GerbeEquivalenceResult(equivalent=False)
