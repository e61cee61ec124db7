"""Fundamental objects, adjoint endomorphisms and the associated Lie algebra.

A fundamental object is an (n-1)-tuple of vectors; its adjoint action is the
d x d matrix of the bracket with the last slot open.  Matrices here are plain
0-based lists of rows with exact entries; the commutator closure of the basis
adjoints gives the Lie algebra associated with the bracket.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .algebra import NaryAlgebra
from .tensor import ShapeError, guard

KERNEL_UNKNOWN_CAP = 20_000


@dataclass(frozen=True)
class FundamentalObject:
    """(n-1)-tuple of coordinate vectors over Q^d."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(tuple(v) for v in self.components))


def basis_vector(d: int, i: int):
    if not 1 <= i <= d:
        raise ShapeError(f"basis index {i} out of 1..{d}")
    return tuple(1 if k == i - 1 else 0 for k in range(d))


def basis_object(L: NaryAlgebra, indices) -> FundamentalObject:
    indices = tuple(indices)
    if len(indices) != L.n - 1:
        raise ShapeError(f"need {L.n - 1} components, got {len(indices)}")
    return FundamentalObject(tuple(basis_vector(L.d, i) for i in indices))


def _validate(L: NaryAlgebra, x: FundamentalObject) -> None:
    if len(x.components) != L.n - 1:
        raise ShapeError(
            f"fundamental object has {len(x.components)} components, need {L.n - 1}"
        )
    for v in x.components:
        if len(v) != L.d:
            raise ShapeError(f"component length {len(v)} != dim {L.d}")


def ad_matrix(L: NaryAlgebra, x: FundamentalObject):
    """Operator matrix of ad_x: column b holds the coordinates of [x, e_b].

    With this convention composition of adjoint maps is plain matrix
    multiplication, so the End relation [ad_X, ad_Y] = ad_{X.Y} is a literal
    matrix identity.
    """
    _validate(L, x)
    d = L.d
    mat = linalg.zeros_matrix(d)
    for key, val in L.f.data.items():
        coeff = val
        for vec, idx in zip(x.components, key[: L.n - 1]):
            coeff = coeff * vec[idx - 1]
            if coeff == 0:
                break
        if coeff == 0:
            continue
        b, c = key[L.n - 1], key[L.n]
        mat[c - 1][b - 1] += coeff
    return mat


def basis_ad_matrix(L: NaryAlgebra, indices):
    return ad_matrix(L, basis_object(L, indices))


def compose(L: NaryAlgebra, x: FundamentalObject, y: FundamentalObject):
    """Composition law as a formal sum: sum_r (y_1, .., ad_x y_r, .., y_{n-1}).

    Returns a list of (coefficient, FundamentalObject) terms; terms whose
    replaced component is the zero vector are dropped.
    """
    _validate(L, x)
    _validate(L, y)
    adx = ad_matrix(L, x)
    d = L.d
    terms = []
    for r, yr in enumerate(y.components):
        image = tuple(
            sum(adx[c][b] * yr[b] for b in range(d)) for c in range(d)
        )
        if all(v == 0 for v in image):
            continue
        comps = y.components[:r] + (image,) + y.components[r + 1:]
        terms.append((1, FundamentalObject(comps)))
    return terms


def compose_sums(L: NaryAlgebra, xsum, ysum):
    """Bilinear extension of the composition law to formal sums."""
    out = []
    for cx, x in xsum:
        for cy, y in ysum:
            for ct, t in compose(L, x, y):
                out.append((cx * cy * ct, t))
    return out


def ad_of_sum(L: NaryAlgebra, terms):
    """Linear extension of ad to a formal sum of fundamental objects."""
    mat = linalg.zeros_matrix(L.d)
    for coeff, x in terms:
        if coeff == 0:
            continue
        mat = linalg.mat_add(mat, linalg.mat_scale(ad_matrix(L, x), coeff))
    return mat


@dataclass
class LieClosure:
    basis: list
    dim: int
    from_generators: int


def lie_closure(L: NaryAlgebra) -> LieClosure:
    """Commutator closure of the basis adjoint matrices.

    Generators are the ad matrices of all basis (n-1)-tuples, inserted in
    lexicographic order into an echelonized basis of the d^2 matrix space;
    commutators are added breadth-first until the span is stable.  The
    insertion order makes the returned basis deterministic.
    """
    d = L.d
    guard(d ** (L.n - 1) * d * d, f"lie_closure({L.name})")
    eb = linalg.EchelonBasis(d * d)
    basis = []

    def insert(mat) -> bool:
        if eb.insert([mat[i][j] for i in range(d) for j in range(d)]):
            basis.append(mat)
            return True
        return False

    rows = L.ad_rows()
    for indices in sorted(rows):
        mat = linalg.zeros_matrix(d)
        for b, row in rows[indices].items():
            for c, val in row.items():
                mat[c - 1][b - 1] = val
        insert(mat)
    from_generators = len(basis)

    frontier = list(range(len(basis)))
    while frontier:
        fresh = []
        for i in frontier:
            for j in range(len(basis)):
                if i == j:
                    continue
                comm = linalg.commutator(basis[i], basis[j])
                if not linalg.mat_is_zero(comm) and insert(comm):
                    fresh.append(len(basis) - 1)
        frontier = fresh
    return LieClosure(basis=basis, dim=len(basis), from_generators=from_generators)


def ad_kernel(L: NaryAlgebra):
    """Kernel of A -> ad_A on the span of basis (n-1)-tuples of indices.

    Returns (labels, vectors): labels lists all index tuples in lexicographic
    order and each vector holds the coefficients of one kernel basis element.
    """
    from .tensor import SizeGuardError

    d, n = L.d, L.n
    unknowns = d ** (n - 1)
    if unknowns > KERNEL_UNKNOWN_CAP:
        raise SizeGuardError(
            f"ad_kernel: {unknowns} unknowns exceed cap {KERNEL_UNKNOWN_CAP}"
        )
    labels = list(itertools.product(range(1, d + 1), repeat=n - 1))
    col = {lab: i for i, lab in enumerate(labels)}
    rows_by_bc: dict = {}
    for key, val in L.f.data.items():
        a, b, c = key[: n - 1], key[n - 1], key[n]
        row = rows_by_bc.setdefault((b, c), [0] * unknowns)
        row[col[a]] += val
    kernel = linalg.nullspace([rows_by_bc[k] for k in sorted(rows_by_bc)], unknowns)
    return labels, kernel


def centre(L: NaryAlgebra):
    """Basis of {y : [x_1, .., x_{n-1}, y] = 0 for all x}, as coordinate vectors."""
    d, n = L.d, L.n
    rows_by_ac: dict = {}
    for key, val in L.f.data.items():
        a, b, c = key[: n - 1], key[n - 1], key[n]
        row = rows_by_ac.setdefault((a, c), [0] * d)
        row[b - 1] += val
    return linalg.nullspace([rows_by_ac[k] for k in sorted(rows_by_ac)], d)
