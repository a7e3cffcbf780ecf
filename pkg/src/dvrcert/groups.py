"""Finite matrix groups over the DVR: closure, reflections, reduction.

A pseudo-reflection here is an invertible matrix of finite order whose
difference from the identity has rank one over the fraction field: it fixes
a hyperplane pointwise and scales a complementary line by its determinant.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import ClosureCapExceededError, NotInvertibleError
from .linalg import (
    DEFAULT_ORDER_CAP,
    RING_O,
    ExactMatrix,
    det,
    matrix_order,
    rank_over_field,
    reduce_matrix,
)
from .scalars import DvrDescriptor, invert_mod_group_order

DEFAULT_CLOSURE_CAP = 20000


class MatrixGroup:
    """Fully enumerated finite subgroup of GL_n(O) with generator provenance.

    Elements are listed in breadth-first order starting from the identity,
    applying the generators in a canonical sorted order, so the element
    numbering is deterministic for a given generating set.
    """

    __slots__ = ("descriptor", "n", "generators", "closure_generators", "elements",
                 "order", "_index", "_bfs_parent")

    def __init__(self, descriptor, n, generators, closure_generators, elements, bfs_parent):
        object.__setattr__(self, "descriptor", descriptor)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "generators", tuple(generators))
        object.__setattr__(self, "closure_generators", tuple(closure_generators))
        object.__setattr__(self, "elements", tuple(elements))
        object.__setattr__(self, "order", len(elements))
        object.__setattr__(self, "_index", {m: i for i, m in enumerate(elements)})
        object.__setattr__(self, "_bfs_parent", tuple(bfs_parent))

    def __setattr__(self, name, value):
        raise AttributeError("groups are immutable once enumerated")

    def index_of(self, element: ExactMatrix) -> int:
        return self._index[element]

    def __contains__(self, element) -> bool:
        return element in self._index

    def identity(self) -> ExactMatrix:
        return self.elements[0]

    def bfs_parent(self, i: int):
        """(parent index, closure-generator index) for element i; None for the identity."""
        return self._bfs_parent[i]

    def element_order(self, i: int) -> int:
        return matrix_order(self.elements[i], cap=self.order)

    def __repr__(self) -> str:
        return (
            f"MatrixGroup(n={self.n}, order={self.order}, "
            f"p={self.descriptor.p}, kind={self.descriptor.kind})"
        )


def generate_group(
    generators,
    descriptor: DvrDescriptor | None = None,
    cap: int = DEFAULT_CLOSURE_CAP,
) -> MatrixGroup:
    """Breadth-first closure of the generators under multiplication.

    Every generator must be invertible over O (unit determinant); the
    closure aborts once more than `cap` elements appear.
    """
    generators = list(generators)
    if descriptor is None:
        if not generators:
            raise ValueError("descriptor required when no generators are given")
        descriptor = generators[0].descriptor
    n = generators[0].rows if generators else None
    for i, g in enumerate(generators):
        if g.ring != RING_O:
            raise ValueError(f"generator {i} is not a matrix over the DVR")
        if g.descriptor != descriptor:
            raise ValueError(f"generator {i} belongs to a different DVR")
        if not g.is_square or g.rows != n:
            raise ValueError(f"generator {i} is not square of size {n}")
        d = det(g)
        if d.is_zero() or not d.is_unit():
            raise NotInvertibleError(
                f"generator {i} is not in GL_n(O): determinant {d} is not a unit"
            )
    if n is None:
        raise ValueError("at least one generator or an explicit dimension is required")

    closure_gens = sorted(set(generators), key=ExactMatrix.sort_key)
    ident = ExactMatrix.identity(RING_O, descriptor, n)
    elements = [ident]
    parents: list = [None]
    index = {ident: 0}
    queue = deque([0])
    while queue:
        cur = queue.popleft()
        for gi, g in enumerate(closure_gens):
            nxt = elements[cur] * g
            if nxt not in index:
                if len(elements) >= cap:
                    raise ClosureCapExceededError(
                        f"closure exceeded {cap} elements; group too large or infinite"
                    )
                index[nxt] = len(elements)
                elements.append(nxt)
                parents.append((cur, gi))
                queue.append(index[nxt])
    return MatrixGroup(descriptor, n, generators, closure_gens, elements, parents)


def trivial_group(descriptor: DvrDescriptor, n: int) -> MatrixGroup:
    ident = ExactMatrix.identity(RING_O, descriptor, n)
    return MatrixGroup(descriptor, n, (), (), (ident,), (None,))


# -- pseudo-reflections ---------------------------------------------------------


def reflection_data(m: ExactMatrix, cap: int = DEFAULT_ORDER_CAP):
    """(eigenvalue, order) when m is a pseudo-reflection, else None.

    The nontrivial eigenvalue equals det(m), since the other eigenvalues are
    all 1; no root-finding is needed.
    """
    if rank_over_field(m.minus_identity().to_field()) != 1:
        return None
    lam = det(m)
    order = matrix_order(m, cap=cap)
    return lam, order


def is_pseudo_reflection(m: ExactMatrix, cap: int = DEFAULT_ORDER_CAP) -> bool:
    return reflection_data(m, cap=cap) is not None


@dataclass(frozen=True)
class ReflectionReport:
    """All pseudo-reflections of a group, plus whether they generate it."""

    reflections: tuple  # (element index, eigenvalue, order) triples
    generated_by_reflections: bool
    vacuous: bool  # trivial group: reflection-generated by the empty-set convention

    @property
    def count(self) -> int:
        return len(self.reflections)


def _closure_indices(group: MatrixGroup, seed_indices) -> set[int]:
    """Subgroup generated inside an enumerated group, as a set of element indices."""
    ident = group.index_of(group.identity())
    reached = {ident}
    queue = deque([ident])
    seeds = list(seed_indices)
    while queue:
        cur = queue.popleft()
        for s in seeds:
            nxt = group.index_of(group.elements[cur] * group.elements[s])
            if nxt not in reached:
                reached.add(nxt)
                queue.append(nxt)
    return reached


def classify_reflections(group: MatrixGroup) -> ReflectionReport:
    """Rank-test every element over K and check the reflection set generates."""
    found = []
    for i, m in enumerate(group.elements):
        data = reflection_data(m, cap=group.order)
        if data is not None:
            found.append((i, data[0], data[1]))
    if group.order == 1:
        return ReflectionReport((), True, True)
    generated = len(_closure_indices(group, (i for i, _, _ in found))) == group.order
    return ReflectionReport(tuple(found), generated, False)


# -- reduction to the residue field ----------------------------------------------


def reduction_map(group: MatrixGroup):
    """Entrywise reduction of every element; returns (images, injective flag).

    Requires the group order to be invertible in the ring.  Under that
    hypothesis injectivity always holds, but it is measured, not assumed.
    """
    invert_mod_group_order(group.order, group.descriptor)
    images = tuple(reduce_matrix(m) for m in group.elements)
    injective = len(set(images)) == len(images)
    return images, injective


def verify_reduced_reflection_generation(group: MatrixGroup) -> bool:
    """Is the image of the group in GL_n over the residue field reflection-generated?

    Classifies pseudo-reflections among the reduced images (rank test over
    the residue field) and checks that they generate the image group.
    """
    images, _ = reduction_map(group)
    unique_images = list(dict.fromkeys(images))
    if len(unique_images) == 1:
        return True  # trivial image: vacuously generated
    ident = reduce_matrix(group.identity())
    reflections = []
    for m in unique_images:
        if m == ident:
            continue
        if rank_over_field(m - ident) == 1:
            reflections.append(m)
    reached = {ident}
    queue = deque([ident])
    while queue:
        cur = queue.popleft()
        for r in reflections:
            nxt = cur * r
            if nxt not in reached:
                reached.add(nxt)
                queue.append(nxt)
    return reached == set(unique_images)
