"""Integral homology of complexes and chain complexes, with induced maps.

Homology groups come from Smith normal forms of the boundary matrices.
The workspace variant also keeps kernel bases and relation transforms so
cycles can be reduced to canonical class labels and maps can be checked
for inducing isomorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .complexes import SimplicialComplex, SimplicialMap, connected_components
from .errors import ValidationError
from .snf import (
    Matrix,
    identity_matrix,
    invariant_factors,
    matrix_multiply,
    smith_normal_form,
    zero_matrix,
)


@dataclass(frozen=True)
class ChainComplex:
    """Free chain complex over the integers.

    ``boundaries[k]`` is the matrix of C_{k+1} -> C_k, with shape
    (ranks[k], ranks[k+1]).  Consecutive boundaries compose to zero.
    """

    ranks: tuple
    boundaries: tuple

    def boundary(self, k: int) -> Matrix:
        """Matrix of C_k -> C_{k-1}; zero-shaped outside the range."""
        if 1 <= k < len(self.ranks):
            return self.boundaries[k - 1]
        if k == 0 or k >= len(self.ranks):
            rows = self.ranks[k - 1] if 0 < k <= len(self.ranks) else 0
            return zero_matrix(rows, self.rank(k))
        return zero_matrix(0, 0)

    def rank(self, k: int) -> int:
        if 0 <= k < len(self.ranks):
            return self.ranks[k]
        return 0


def chain_complex(ranks: Sequence[int], boundaries: Sequence[Matrix]) -> ChainComplex:
    """Validate shapes and the boundary-squared condition."""
    ranks = tuple(int(r) for r in ranks)
    if len(boundaries) != max(len(ranks) - 1, 0):
        raise ValidationError(
            f"expected {max(len(ranks) - 1, 0)} boundary matrices, "
            f"got {len(boundaries)}"
        )
    mats = []
    for k, mat in enumerate(boundaries):
        rows, cols = ranks[k], ranks[k + 1]
        if len(mat) != rows or any(len(r) != cols for r in mat):
            raise ValidationError(
                f"boundary {k + 1} has wrong shape, want {rows}x{cols}"
            )
        mats.append([list(map(int, r)) for r in mat])
    for k in range(len(mats) - 1):
        prod = matrix_multiply(mats[k], mats[k + 1])
        if any(any(row) for row in prod):
            raise ValidationError(
                f"boundaries {k + 1} and {k + 2} do not compose to zero"
            )
    return ChainComplex(ranks=ranks, boundaries=tuple(map(tuple0, mats)))


def tuple0(mat):
    return tuple(tuple(row) for row in mat)


def simplex_boundary_matrix(x: SimplicialComplex, k: int) -> Matrix:
    """Boundary C_k -> C_{k-1} in the sorted-simplex bases."""
    rows = x.simplices_of_dim(k - 1)
    cols = x.simplices_of_dim(k)
    row_index = {s: i for i, s in enumerate(rows)}
    mat = zero_matrix(len(rows), len(cols))
    for j, s in enumerate(cols):
        for drop in range(len(s)):
            face = s[:drop] + s[drop + 1:]
            mat[row_index[face]][j] = (-1) ** drop
    return mat


def chain_complex_of(x: SimplicialComplex, max_degree: Optional[int] = None) -> ChainComplex:
    """Simplicial chain complex through ``max_degree`` (default: dim)."""
    top = x.dim if max_degree is None else max(int(max_degree), 0)
    ranks = [x.simplex_count(k) for k in range(top + 1)]
    boundaries = [simplex_boundary_matrix(x, k) for k in range(1, top + 1)]
    return ChainComplex(
        ranks=tuple(ranks), boundaries=tuple(tuple0(b) for b in boundaries)
    )


@dataclass(frozen=True)
class HomologyGroup:
    """One homology group: free rank plus torsion in divisibility order."""

    betti: int
    torsion: tuple

    def __str__(self) -> str:
        parts = ["Z"] * self.betti + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HomologyResult:
    """Homology groups by degree, starting at degree 0."""

    groups: tuple

    def betti_numbers(self) -> tuple:
        return tuple(g.betti for g in self.groups)

    def torsion(self) -> tuple:
        return tuple(g.torsion for g in self.groups)

    def group(self, k: int) -> HomologyGroup:
        if 0 <= k < len(self.groups):
            return self.groups[k]
        return HomologyGroup(0, ())


def homology_of_chain_complex(cc: ChainComplex, max_degree: int) -> HomologyResult:
    if max_degree < 0:
        raise ValidationError("max_degree must be nonnegative")
    ranks_of = {}
    torsion_of = {}
    for k in range(1, max_degree + 2):
        mat = cc.boundary(k)
        if cc.rank(k) == 0 or cc.rank(k - 1) == 0:
            factors = ()
        else:
            factors = invariant_factors(mat, (cc.rank(k - 1), cc.rank(k)))
        ranks_of[k] = len(factors)
        torsion_of[k] = tuple(d for d in factors if d > 1)
    groups = []
    for k in range(max_degree + 1):
        betti = cc.rank(k) - ranks_of.get(k, 0) - ranks_of.get(k + 1, 0)
        groups.append(HomologyGroup(betti=betti, torsion=torsion_of.get(k + 1, ())))
    return HomologyResult(groups=tuple(groups))


def homology(x: SimplicialComplex, max_degree: Optional[int] = None) -> HomologyResult:
    """Integral simplicial homology through ``max_degree``.

    Degree-0 Betti equals the number of connected components; torsion
    coefficients are the invariant factors (> 1) of the next boundary.
    """
    if max_degree is None:
        max_degree = max(x.dim, 0)
    if max_degree < 0:
        raise ValidationError("max_degree must be nonnegative")
    cc = chain_complex_of(x, min(max_degree + 1, max(x.dim, 0)))
    return homology_of_chain_complex(cc, max_degree)


def is_point_like(x: SimplicialComplex) -> bool:
    """Connected with the homology of a point (no higher homology)."""
    if x.is_empty():
        return False
    if len(connected_components(x)) != 1:
        return False
    result = homology(x)
    if result.group(0) != HomologyGroup(1, ()):
        return False
    return all(
        result.group(k) == HomologyGroup(0, ()) for k in range(1, x.dim + 1)
    )


class HomologyWorkspace:
    """Homology with explicit cycle bases and canonical class labels.

    Degree by degree this keeps a basis of the cycle lattice, the
    relation matrix of the boundary image in that basis, and the Smith
    transform that reduces cycle coordinates to a canonical form, so two
    cycles are homologous exactly when their labels agree.
    """

    def __init__(self, cc: ChainComplex, max_degree: int):
        self.cc = cc
        self.max_degree = max_degree
        self._kernel = {}
        self._kernel_solver = {}
        self._relations = {}
        self._relation_snf = {}
        for k in range(max_degree + 1):
            self._prepare(k)

    def _prepare(self, k: int) -> None:
        n = self.cc.rank(k)
        boundary_k = self.cc.boundary(k)
        if k == 0 or self.cc.rank(k - 1) == 0:
            kernel = identity_matrix(n)
            solver = identity_matrix(n)
            rank = 0
        else:
            form = smith_normal_form(
                boundary_k,
                (self.cc.rank(k - 1), n),
                want_left=False,
                want_right=True,
                want_right_inverse=True,
            )
            rank = form.rank
            kernel = [row[rank:] for row in form.right]
            solver = form.right_inverse
        self._kernel[k] = kernel
        self._kernel_solver[k] = (solver, rank)

    def kernel_basis(self, k: int) -> Matrix:
        """Columns form a basis of the degree-k cycle lattice."""
        return self._kernel[k]

    def cycle_coordinates(self, k: int, chain: Sequence[int]) -> List[int]:
        solver, rank = self._kernel_solver[k]
        n = self.cc.rank(k)
        coords = [
            sum(solver[i][j] * chain[j] for j in range(n))
            for i in range(len(solver))
        ]
        if any(coords[:rank]):
            raise ValidationError("chain is not a cycle")
        return coords[rank:]

    def _relation_data(self, k: int):
        if k not in self._relations:
            image = self.cc.boundary(k + 1)
            cols = self.cc.rank(k + 1)
            coords = []
            for j in range(cols):
                vec = [image[i][j] for i in range(self.cc.rank(k))]
                coords.append(self.cycle_coordinates(k, vec))
            kdim = len(self._kernel[k][0]) if self._kernel[k] else 0
            rel = [[coords[j][i] for j in range(cols)] for i in range(kdim)]
            self._relations[k] = rel
            self._relation_snf[k] = smith_normal_form(
                rel, (kdim, cols), want_left=True, want_right=False
            )
        return self._relations[k], self._relation_snf[k]

    def group(self, k: int) -> HomologyGroup:
        rel, form = self._relation_data(k)
        kdim = len(rel)
        betti = kdim - form.rank
        torsion = tuple(d for d in form.diagonal if d > 1)
        return HomologyGroup(betti=betti, torsion=torsion)

    def class_label(self, k: int, chain: Sequence[int]) -> tuple:
        """Canonical label of a cycle's homology class.

        Labels of two cycles in the same degree agree iff the cycles are
        homologous.
        """
        coords = self.cycle_coordinates(k, chain)
        _, form = self._relation_data(k)
        kdim = len(coords)
        reduced = [
            sum(form.left[i][j] * coords[j] for j in range(kdim))
            for i in range(kdim)
        ]
        for i, d in enumerate(form.diagonal):
            if d:
                reduced[i] %= d
        return tuple(reduced)

    def relation_matrix(self, k: int) -> Matrix:
        return self._relation_data(k)[0]


def simplicial_chain_map(f: SimplicialMap, max_degree: int) -> List[Matrix]:
    """Chain map matrices of a simplicial map in the sorted bases."""
    mats = []
    for k in range(max_degree + 1):
        src = f.source.simplices_of_dim(k)
        tgt = f.target.simplices_of_dim(k)
        tgt_index = {s: i for i, s in enumerate(tgt)}
        mat = zero_matrix(len(tgt), len(src))
        for j, s in enumerate(src):
            image = [f(v) for v in s]
            if len(set(image)) != len(image):
                continue
            order = sorted(range(len(image)), key=lambda i: image[i])
            sign = _permutation_sign(order)
            mat[tgt_index[tuple(sorted(image))]][j] = sign
        mats.append(mat)
    return mats


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def cycle_basis(cc: ChainComplex, k: int) -> Matrix:
    """Basis of the degree-k cycle lattice as matrix columns.

    Cheaper than a full workspace: only the right transform of one Smith
    reduction is tracked.
    """
    n = cc.rank(k)
    if k == 0 or cc.rank(k - 1) == 0:
        return identity_matrix(n)
    form = smith_normal_form(
        cc.boundary(k),
        (cc.rank(k - 1), n),
        want_left=False,
        want_right=True,
        want_right_inverse=False,
    )
    return [row[form.rank:] for row in form.right]


def induced_map_surjective(
    chain_map: Matrix,
    source_kernel: Matrix,
    target: HomologyWorkspace,
    degree: int,
) -> bool:
    """Whether the induced map hits all of the target homology group."""
    src_rank = len(source_kernel[0]) if source_kernel else 0
    tgt_dim = target.cc.rank(degree)
    columns = []
    for j in range(src_rank):
        vec = [source_kernel[i][j] for i in range(len(source_kernel))]
        mapped = [
            sum(chain_map[i][l] * vec[l] for l in range(len(vec)) if vec[l])
            for i in range(tgt_dim)
        ]
        columns.append(target.cycle_coordinates(degree, mapped))
    relations = target.relation_matrix(degree)
    kdim = len(relations)
    if kdim == 0:
        return True
    rel_cols = len(relations[0]) if relations else 0
    combined = [
        [columns[j][i] for j in range(src_rank)] + list(relations[i])
        for i in range(kdim)
    ]
    factors = invariant_factors(combined, (kdim, src_rank + rel_cols))
    return len(factors) == kdim and all(d == 1 for d in factors)


def map_induces_homology_isomorphism(f: SimplicialMap, max_degree: int) -> bool:
    """Whether a simplicial map is a homology isomorphism through a degree.

    Both sides must have equal invariants degree by degree and the induced
    map must be surjective; a surjection between isomorphic finitely
    generated abelian groups is an isomorphism.
    """
    src_cc = chain_complex_of(f.source, min(max_degree + 1, max(f.source.dim, 0)))
    tgt_cc = chain_complex_of(f.target, min(max_degree + 1, max(f.target.dim, 0)))
    src_hom = homology_of_chain_complex(src_cc, max_degree)
    target = HomologyWorkspace(tgt_cc, max_degree)
    chain_maps = simplicial_chain_map(f, max_degree)
    for k in range(max_degree + 1):
        if src_hom.group(k) != target.group(k):
            return False
        kernel = cycle_basis(src_cc, k)
        if not induced_map_surjective(chain_maps[k], kernel, target, k):
            return False
    return True
