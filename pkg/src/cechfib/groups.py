"""Finite groups as multiplication tables, actions, and crossed modules.

Elements are labeled 0..n-1 with 0 the identity.  Everything is checked
exhaustively at construction; the orders involved stay small (<= ~24).
"""

from __future__ import annotations

import itertools
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import BudgetExceededError, ValidationError
from .snf import smith_normal_form


class FiniteGroup:
    """Group given by its multiplication table, identity at index 0."""

    __slots__ = ("order", "table", "inverse", "_abelian")

    def __init__(self, table: Sequence[Sequence[int]], inverse: Sequence[int]):
        self.order = len(table)
        self.table = tuple(tuple(row) for row in table)
        self.inverse = tuple(inverse)
        self._abelian: Optional[bool] = None

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def product(self, elements: Iterable[int]) -> int:
        out = 0
        for g in elements:
            out = self.table[out][g]
        return out

    def conjugate(self, g: int, h: int) -> int:
        """g h g^-1."""
        return self.table[self.table[g][h]][self.inverse[g]]

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            self._abelian = all(
                self.table[a][b] == self.table[b][a]
                for a in range(self.order)
                for b in range(a)
            )
        return self._abelian

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.table[x][g]
            k += 1
        return k

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def validate_group(table: Sequence[Sequence[int]]) -> FiniteGroup:
    """Check all group axioms on a square table and build the group.

    Element 0 must be a two-sided identity; associativity failures are
    reported with a witness triple.
    """
    n = len(table)
    if n == 0:
        raise ValidationError("group table is empty")
    for i, row in enumerate(table):
        if len(row) != n:
            raise ValidationError(f"table row {i} has length {len(row)}, want {n}")
        for v in row:
            if not (0 <= v < n):
                raise ValidationError(f"table entry {v} out of range 0..{n - 1}")
    for a in range(n):
        if table[0][a] != a or table[a][0] != a:
            raise ValidationError(
                f"element 0 is not a two-sided identity at {a}",
                details={"element": a},
            )
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise ValidationError(
                        f"associativity fails at ({a}, {b}, {c})",
                        details={"triple": (a, b, c)},
                    )
    inverse = [-1] * n
    for a in range(n):
        for b in range(n):
            if table[a][b] == 0 and table[b][a] == 0:
                inverse[a] = b
                break
        if inverse[a] < 0:
            raise ValidationError(f"element {a} has no two-sided inverse",
                                  details={"element": a})
    return FiniteGroup(table, inverse)


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], [0])


def cyclic_group(n: int) -> FiniteGroup:
    if n <= 0:
        raise ValidationError("cyclic group order must be positive")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, [(-a) % n for a in range(n)])


def symmetric_group(n: int) -> FiniteGroup:
    """Symmetric group on n letters via composition of permutations."""
    perms = sorted(itertools.permutations(range(n)))
    ident = tuple(range(n))
    perms.remove(ident)
    perms.insert(0, ident)
    index = {p: i for i, p in enumerate(perms)}
    compose = lambda p, q: tuple(p[q[i]] for i in range(n))
    table = [[index[compose(p, q)] for q in perms] for p in perms]
    inverse = []
    for p in perms:
        inv = [0] * n
        for i, v in enumerate(p):
            inv[v] = i
        inverse.append(index[tuple(inv)])
    return FiniteGroup(table, inverse)


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    n1, n2 = g1.order, g2.order
    encode = lambda a, b: a * n2 + b
    table = [
        [
            encode(g1.mul(a1, b1), g2.mul(a2, b2))
            for b1 in range(n1)
            for b2 in range(n2)
        ]
        for a1 in range(n1)
        for a2 in range(n2)
    ]
    inverse = [
        encode(g1.inv(a1), g2.inv(a2)) for a1 in range(n1) for a2 in range(n2)
    ]
    return FiniteGroup(table, inverse)


def conjugacy_classes(group: FiniteGroup) -> tuple:
    """Orbits of the conjugation action, sorted by least member."""
    remaining = set(group.elements())
    classes = []
    while remaining:
        seed = min(remaining)
        orbit = {group.conjugate(g, seed) for g in group.elements()}
        classes.append(tuple(sorted(orbit)))
        remaining -= orbit
    return tuple(sorted(classes))


def enumerate_homs(
    presentation,
    group: FiniteGroup,
    budget: Optional[int] = None,
) -> List[tuple]:
    """All homomorphisms from a presented group, as generator images.

    Backtracks over generator assignments, checking each relation as soon
    as all its generators are fixed; the budget caps the number of partial
    assignments actually visited, not the worst case.
    """
    k = presentation.generator_count
    by_last = [[] for _ in range(k + 1)]
    for word in presentation.relations:
        top = max((abs(s) for s in word), default=0)
        by_last[top].append(word)

    def evaluates_trivially(word, images):
        out = 0
        for s in word:
            g = images[abs(s) - 1]
            out = group.mul(out, g if s > 0 else group.inv(g))
        return out == 0

    homs: List[tuple] = []
    visited = 0

    def assign(i, images):
        nonlocal visited
        visited += 1
        if budget is not None and visited > budget:
            raise BudgetExceededError(
                f"hom enumeration exceeded budget {budget}", budget
            )
        if not all(evaluates_trivially(w, images) for w in by_last[i]):
            return
        if i == k:
            homs.append(tuple(images))
            return
        for g in group.elements():
            images.append(g)
            assign(i + 1, images)
            images.pop()

    assign(0, [])
    return homs


def hom_conjugacy_classes(homs: Sequence[tuple], group: FiniteGroup) -> tuple:
    """Partition generator-image tuples under simultaneous conjugation."""
    hom_set = set(homs)
    remaining = set(homs)
    classes = []
    while remaining:
        seed = min(remaining)
        orbit = set()
        for g in group.elements():
            conjugated = tuple(group.conjugate(g, image) for image in seed)
            if conjugated not in hom_set:
                raise ValidationError(
                    "conjugate of a homomorphism is missing from the input"
                )
            orbit.add(conjugated)
        classes.append(tuple(sorted(orbit)))
        remaining -= orbit
    return tuple(sorted(classes))


class GroupAction:
    """Left action of a group on a finite labeled fiber."""

    __slots__ = ("group", "fiber", "table", "_index")

    def __init__(self, group: FiniteGroup, fiber: Sequence, table: Sequence[Sequence[int]]):
        fiber = tuple(fiber)
        size = len(fiber)
        if len(table) != group.order or any(len(r) != size for r in table):
            raise ValidationError("action table has wrong shape")
        for f in range(size):
            if table[0][f] != f:
                raise ValidationError("identity does not act trivially")
        for g in group.elements():
            if sorted(table[g]) != list(range(size)):
                raise ValidationError(f"element {g} does not act bijectively")
        for g in group.elements():
            for h in group.elements():
                gh = group.mul(g, h)
                for f in range(size):
                    if table[g][table[h][f]] != table[gh][f]:
                        raise ValidationError(
                            f"action incompatible with multiplication at "
                            f"({g}, {h}, {fiber[f]!r})"
                        )
        self.group = group
        self.fiber = fiber
        self.table = tuple(tuple(r) for r in table)
        self._index = {label: i for i, label in enumerate(fiber)}

    def act(self, g: int, label):
        return self.fiber[self.table[g][self._index[label]]]

    def orbits(self) -> tuple:
        remaining = set(self.fiber)
        out = []
        while remaining:
            seed = min(remaining)
            orbit = {self.act(g, seed) for g in self.group.elements()}
            out.append(tuple(sorted(orbit)))
            remaining -= orbit
        return tuple(sorted(out))

    def orbits_under(self, elements: Iterable[int]) -> tuple:
        """Orbits of the subgroup generated by the given elements."""
        gens = set(elements)
        closure = {0}
        frontier = [0]
        while frontier:
            g = frontier.pop()
            for h in gens:
                for nxt in (self.group.mul(g, h), self.group.mul(h, g)):
                    if nxt not in closure:
                        closure.add(nxt)
                        frontier.append(nxt)
        remaining = set(self.fiber)
        out = []
        while remaining:
            seed = min(remaining)
            orbit = {self.act(g, seed) for g in closure}
            out.append(tuple(sorted(orbit)))
            remaining -= orbit
        return tuple(sorted(out))


def regular_action(group: FiniteGroup) -> GroupAction:
    """The group acting on itself by left translation."""
    return GroupAction(
        group,
        tuple(group.elements()),
        [[group.mul(g, f) for f in group.elements()] for g in group.elements()],
    )


class CrossedModule:
    """Group homomorphism base <- fiber with a compatible base action.

    ``boundary`` maps fiber elements to base elements; ``action`` is a
    base-indexed table of fiber automorphisms.  Equivariance and the
    Peiffer identity are verified exhaustively in the validator.
    """

    __slots__ = ("base", "fiber", "boundary", "action")

    def __init__(self, base, fiber, boundary, action):
        self.base = base
        self.fiber = fiber
        self.boundary = tuple(boundary)
        self.action = tuple(tuple(r) for r in action)

    def act(self, g: int, h: int) -> int:
        return self.action[g][h]

    def __repr__(self):
        return (
            f"CrossedModule(base order {self.base.order}, "
            f"fiber order {self.fiber.order})"
        )


def validate_crossed_module(
    base: FiniteGroup,
    fiber: FiniteGroup,
    boundary: Sequence[int],
    action: Sequence[Sequence[int]],
) -> CrossedModule:
    """Check the crossed-module axioms, naming the first violated one."""
    if len(boundary) != fiber.order:
        raise ValidationError("boundary has wrong length")
    if any(not (0 <= g < base.order) for g in boundary):
        raise ValidationError("boundary image out of range")
    if len(action) != base.order or any(len(r) != fiber.order for r in action):
        raise ValidationError("action table has wrong shape")

    for h1 in fiber.elements():
        for h2 in fiber.elements():
            lhs = base.mul(boundary[h1], boundary[h2])
            rhs = boundary[fiber.mul(h1, h2)]
            if lhs != rhs:
                raise ValidationError(
                    f"boundary is not a homomorphism at ({h1}, {h2})",
                    details={"axiom": "homomorphism", "witness": (h1, h2)},
                )
    for g in base.elements():
        row = action[g]
        if sorted(row) != list(range(fiber.order)):
            raise ValidationError(
                f"action of {g} is not a bijection",
                details={"axiom": "automorphism", "witness": (g,)},
            )
        for h1 in fiber.elements():
            for h2 in fiber.elements():
                if row[fiber.mul(h1, h2)] != fiber.mul(row[h1], row[h2]):
                    raise ValidationError(
                        f"action of {g} is not multiplicative at ({h1}, {h2})",
                        details={"axiom": "automorphism", "witness": (g, h1, h2)},
                    )
    for h in fiber.elements():
        if action[0][h] != h:
            raise ValidationError(
                "identity of the base does not act trivially",
                details={"axiom": "automorphism", "witness": (0, h)},
            )
    for g1 in base.elements():
        for g2 in base.elements():
            g12 = base.mul(g1, g2)
            for h in fiber.elements():
                if action[g1][action[g2][h]] != action[g12][h]:
                    raise ValidationError(
                        f"action is not functorial at ({g1}, {g2}, {h})",
                        details={"axiom": "automorphism", "witness": (g1, g2, h)},
                    )
    for g in base.elements():
        for h in fiber.elements():
            lhs = boundary[action[g][h]]
            rhs = base.conjugate(g, boundary[h])
            if lhs != rhs:
                raise ValidationError(
                    f"equivariance fails at ({g}, {h})",
                    details={"axiom": "equivariance", "witness": (g, h)},
                )
    for h1 in fiber.elements():
        for h2 in fiber.elements():
            lhs = action[boundary[h1]][h2]
            rhs = fiber.conjugate(h1, h2)
            if lhs != rhs:
                raise ValidationError(
                    f"Peiffer identity fails at ({h1}, {h2})",
                    details={"axiom": "peiffer", "witness": (h1, h2)},
                )
    return CrossedModule(base, fiber, boundary, action)


def adjoint_crossed_module(group: FiniteGroup) -> CrossedModule:
    """base = fiber = group, identity boundary, conjugation action."""
    action = [
        [group.conjugate(g, h) for h in group.elements()]
        for g in group.elements()
    ]
    return validate_crossed_module(
        group, group, tuple(group.elements()), action
    )


def abelian_coefficients(fiber: FiniteGroup) -> CrossedModule:
    """Trivial base over an abelian fiber (plain cohomology coefficients)."""
    if not fiber.is_abelian:
        raise ValidationError("coefficient group must be abelian")
    return validate_crossed_module(
        trivial_group(),
        fiber,
        [0] * fiber.order,
        [list(fiber.elements())],
    )


def abelian_decomposition(group: FiniteGroup) -> Tuple[tuple, tuple]:
    """Invariant factors of an abelian group plus element coordinates.

    Presents the group on all of its elements with one relation per table
    entry, reduces the relation lattice, and reads coordinates off the
    left transform.  ``coords[g]`` identifies g inside the product of the
    returned cyclic factors.
    """
    if not group.is_abelian:
        raise ValidationError("group is not abelian")
    n = group.order
    relations = []
    for a in range(n):
        for b in range(n):
            c = group.mul(a, b)
            vec = [0] * n
            vec[a] += 1
            vec[b] += 1
            vec[c] -= 1
            relations.append(vec)
    matrix = [[rel[i] for rel in relations] for i in range(n)]
    form = smith_normal_form(
        matrix, (n, len(relations)), want_left=True, want_right=False
    )
    keep = [
        i for i, d in enumerate(form.diagonal)
        if d != 1
    ]
    factors = tuple(form.diagonal[i] for i in keep)
    if any(d == 0 for d in factors):
        raise ValidationError("abelian decomposition produced a free factor")
    coords = []
    for g in range(n):
        full = [form.left[i][g] for i in range(n)]
        coords.append(
            tuple(full[i] % form.diagonal[i] for i in keep)
        )
    return factors, tuple(coords)
