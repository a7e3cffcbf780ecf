"""Certificate assembly for invariant rings over the DVR.

The headline object is the RegularityCertificate: a bundle of exact,
independently recomputable checks witnessing that the invariant ring of a
reflection-generated group is a graded polynomial ring over the DVR.  The
ingredients: fundamental invariants over the residue field and the fraction
field, the degree-by-degree dimension comparison between the two, vanishing
of first cohomology on low-degree pieces, and Reynolds lifts of the residue
generators back to the ring.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    CertificateConditionError,
    DegreeBoundExhaustedError,
    DvrcertError,
    HypothesisViolationError,
    InternalCheckError,
)
from .groups import (
    MatrixGroup,
    ReflectionReport,
    classify_reflections,
    reduction_map,
    verify_reduced_reflection_generation,
)
from .linalg import (
    RING_K,
    RING_O,
    RING_RESIDUE,
    reduce_matrix,
    ring_one,
    ring_zero,
)
from .polys import (
    MolienSeries,
    MultiPoly,
    action_matrix,
    act,
    hilbert_product_truncation,
    invariant_basis,
    molien_series,
    monomials,
    reynolds,
)
from .refbasis import diagonalizing_basis
from .scalars import invert_mod_group_order

H1_DEGREE_CAP = 5


# -- small exact-elimination helpers ------------------------------------------


class _RowSpan:
    """Incremental row space over a field, with pivot-normalized rows."""

    def __init__(self):
        self.pivot_rows: dict[int, list] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def _reduced(self, row: list) -> list:
        row = list(row)
        for col in sorted(self.pivot_rows):
            if col >= len(row):
                break
            if row[col]:
                f = row[col]
                pivot = self.pivot_rows[col]
                row = [a - f * b for a, b in zip(row, pivot)]
        return row

    def add(self, row) -> bool:
        """Reduce the row against the span; absorb and return True when independent."""
        row = self._reduced(row)
        lead = next((i for i, a in enumerate(row) if a), None)
        if lead is None:
            return False
        inv = row[lead]
        row = [a / inv for a in row]
        for col, pivot in self.pivot_rows.items():
            if pivot[lead]:
                f = pivot[lead]
                self.pivot_rows[col] = [a - f * b for a, b in zip(pivot, row)]
        self.pivot_rows[lead] = row
        return True

    def contains(self, row) -> bool:
        return all(not a for a in self._reduced(row))

    def reduce(self, row) -> list:
        return self._reduced(row)


def _rank_of_rows(rows) -> int:
    span = _RowSpan()
    for row in rows:
        span.add(row)
    return span.rank


# -- fundamental invariants -----------------------------------------------------


@dataclass(frozen=True)
class FundamentalInvariants:
    """Homogeneous generators of a polynomial invariant ring over a field."""

    ring: str
    generators: tuple
    degrees: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.generators)

    def serialize(self) -> dict:
        return {
            "field": self.ring,
            "degrees": list(self.degrees),
            "generators": [str(f) for f in self.generators],
        }


def _poly_coefficients(f: MultiPoly, basis) -> list:
    zero = ring_zero(f.ring, f.descriptor)
    coeffs = [zero] * len(basis)
    index = {e: i for i, e in enumerate(basis)}
    for e, c in f.terms.items():
        coeffs[index[e]] = c
    return coeffs


def _weighted_exponents(degrees, total):
    """All exponent tuples e with sum(e_i * degrees_i) == total."""
    if not degrees:
        return [()] if total == 0 else []
    head = degrees[0]
    out = []
    for k in range(total // head + 1):
        for rest in _weighted_exponents(degrees[1:], total - k * head):
            out.append((k,) + rest)
    return out


class _SubalgebraTracker:
    """Degreewise span of products of the generators chosen so far."""

    def __init__(self, group: MatrixGroup, ring: str):
        self.group = group
        self.ring = ring
        self.generators: list[MultiPoly] = []
        self.degrees: list[int] = []
        self._powers: list[dict[int, MultiPoly]] = []

    def add_generator(self, f: MultiPoly, degree: int) -> None:
        self.generators.append(f)
        self.degrees.append(degree)
        self._powers.append({0: MultiPoly.constant(
            self.ring, self.group.descriptor, self.group.n,
            ring_one(self.ring, self.group.descriptor))})

    def _power(self, i: int, k: int) -> MultiPoly:
        cache = self._powers[i]
        if k not in cache:
            cache[k] = self._power(i, k - 1) * self.generators[i]
        return cache[k]

    def product_span(self, degree: int) -> _RowSpan:
        basis = monomials(self.group.n, degree)
        span = _RowSpan()
        for exps in _weighted_exponents(tuple(self.degrees), degree):
            prod = MultiPoly.constant(
                self.ring, self.group.descriptor, self.group.n,
                ring_one(self.ring, self.group.descriptor))
            for i, k in enumerate(exps):
                if k:
                    prod = prod * self._power(i, k)
            span.add(_poly_coefficients(prod, basis))
        return span


def fundamental_invariants(
    group: MatrixGroup,
    ring: str,
    degree_bound: int,
    reflection_count: int | None = None,
) -> FundamentalInvariants:
    """Greedy degree-ascending search for n fundamental invariants.

    At each degree the invariant subspace is compared with the span of
    products of the generators found so far; new generators are adjoined
    from the echelonized complement, lowest pivot first.  The returned
    system is verified: n homogeneous invariant generators, degree product
    equal to the group order, degree excess equal to the reflection count,
    nonzero Jacobian, and generation of every invariant up to the bound.
    """
    invert_mod_group_order(group.order, group.descriptor)
    n = group.n
    tracker = _SubalgebraTracker(group, ring)
    mismatches: list[str] = []
    for d in range(1, degree_bound + 1):
        inv = invariant_basis(group, d, ring)
        basis = monomials(group.n, d)
        span = tracker.product_span(d)
        if span.rank > inv.dimension:
            raise InternalCheckError(
                f"product span exceeds the invariant space at degree {d}"
            )
        for candidate in inv.polys:
            if span.rank == inv.dimension:
                break
            reduced = span.reduce(_poly_coefficients(candidate, basis))
            lead = next((i for i, a in enumerate(reduced) if a), None)
            if lead is None:
                continue
            if len(tracker.generators) == n:
                mismatches.append(
                    f"degree {d}: invariants beyond the subalgebra of the first "
                    f"{n} generators; the invariant ring is not free on them"
                )
                break
            inv_lead = reduced[lead]
            normalized = [a / inv_lead for a in reduced]
            poly = MultiPoly(
                ring, group.descriptor, group.n,
                {e: c for e, c in zip(basis, normalized)},
            )
            tracker.add_generator(poly, d)
            span.add(normalized)
        if span.rank != inv.dimension and len(tracker.generators) == n:
            mismatches.append(
                f"degree {d}: invariant dimension {inv.dimension} but only "
                f"{span.rank} reachable from generator products"
            )
    if len(tracker.generators) < n:
        raise DegreeBoundExhaustedError(
            f"only {len(tracker.generators)} of {n} fundamental invariants found "
            f"up to degree {degree_bound}; inconclusive: raise the degree bound"
        )
    result = FundamentalInvariants(
        ring, tuple(tracker.generators), tuple(tracker.degrees)
    )
    mismatches.extend(
        _check_fundamental_conditions(group, result, reflection_count)
    )
    if mismatches:
        raise CertificateConditionError("; ".join(mismatches))
    return result


def _check_fundamental_conditions(
    group: MatrixGroup, inv: FundamentalInvariants, reflection_count: int | None
) -> list[str]:
    problems = []
    if inv.n != group.n:
        problems.append(f"{inv.n} generators for {group.n} variables")
    prod = 1
    for d in inv.degrees:
        prod *= d
    if prod != group.order:
        problems.append(
            f"degree product {prod} differs from the group order {group.order}"
        )
    if reflection_count is None:
        reflection_count = classify_reflections(group).count
    excess = sum(d - 1 for d in inv.degrees)
    if excess != reflection_count:
        problems.append(
            f"degree excess {excess} differs from the reflection count {reflection_count}"
        )
    gens = (
        [reduce_matrix(g) for g in group.closure_generators]
        if inv.ring == RING_RESIDUE
        else [g.to_field() for g in group.closure_generators]
    )
    for i, f in enumerate(inv.generators):
        if not f.is_homogeneous() or f.is_zero():
            problems.append(f"generator {i} is not homogeneous and nonzero")
        for g in gens:
            if act(g, f) != f:
                problems.append(f"generator {i} is not invariant")
                break
    if not jacobian_independence(inv):
        problems.append("Jacobian determinant vanishes: generators are dependent")
    return problems


def _poly_matrix_det(rows: list[list[MultiPoly]]) -> MultiPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    first = rows[0]
    total = None
    for j, entry in enumerate(first):
        if entry.is_zero():
            continue
        minor = [
            [row[c] for c in range(n) if c != j]
            for row in rows[1:]
        ]
        term = entry * _poly_matrix_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        sample = rows[0][0]
        return MultiPoly.zero(sample.ring, sample.descriptor, sample.n)
    return total


def jacobian_independence(inv: FundamentalInvariants) -> bool:
    """True iff the determinant of the formal Jacobian matrix is nonzero."""
    jac = [
        [f.partial_derivative(j) for j in range(f.n)]
        for f in inv.generators
    ]
    return not _poly_matrix_det(jac).is_zero()


# -- graded comparison ------------------------------------------------------------


def graded_isomorphism_check(group: MatrixGroup, degree_bound: int):
    """Rows (d, dim over K, dim over k, equal?) for d up to the bound."""
    invert_mod_group_order(group.order, group.descriptor)
    rows = []
    for d in range(degree_bound + 1):
        dim_k_field = invariant_basis(group, d, RING_K).dimension
        dim_res = invariant_basis(group, d, RING_RESIDUE).dimension
        rows.append((d, dim_k_field, dim_res, dim_k_field == dim_res))
    return tuple(rows)


# -- first cohomology ---------------------------------------------------------------


def _element_action_matrices(group: MatrixGroup, degree: int, ring: str):
    if ring == RING_RESIDUE:
        mats = [reduce_matrix(m) for m in group.elements]
    else:
        mats = [m.to_field() for m in group.elements]
    return [action_matrix(m, group.n, degree) for m in mats]


def _h1_exact_degree(group: MatrixGroup, degree: int, ring: str) -> int:
    """dim Z1 - dim B1 for cocycles valued in the degree-d homogeneous piece.

    A cocycle is determined by its values on the closure generators; the
    remaining conditions are the multiplication relations of the enumerated
    group, and the breadth-first element tree tells the tree edges (which
    define) apart from the rest (which constrain).
    """
    s = len(group.closure_generators)
    if s == 0:
        return 0
    rho = _element_action_matrices(group, degree, ring)
    size = len(monomials(group.n, degree))
    width = s * size
    zero = ring_zero(ring, group.descriptor)

    # expression[i]: the N x (s*N) matrix expressing c(element_i) in terms of
    # the generator values, filled in breadth-first order
    expression: list = [None] * group.order
    expression[0] = [[zero] * width for _ in range(size)]
    gen_index = {
        g: gi for gi, g in enumerate(group.closure_generators)
    }

    def block_plus(expr_rows, elem_idx: int, gi: int):
        # rows of expr + rho(elem) placed in generator block gi
        out = [list(r) for r in expr_rows]
        base = gi * size
        mat = rho[elem_idx]
        for r in range(size):
            row = out[r]
            ent = mat.entries[r]
            for c in range(size):
                v = ent[c]
                if v:
                    row[base + c] = row[base + c] + v
        return out

    order_of_discovery = range(1, group.order)
    for idx in order_of_discovery:
        parent, gi = group.bfs_parent(idx)
        expression[idx] = block_plus(expression[parent], parent, gi)

    span = _RowSpan()
    for idx in range(group.order):
        for gi, g in enumerate(group.closure_generators):
            target = group.index_of(group.elements[idx] * g)
            if group.bfs_parent(target) == (idx, gi):
                continue  # tree edge: defines rather than constrains
            lhs = block_plus(expression[idx], idx, gi)
            rhs = expression[target]
            for r in range(size):
                row = [a - b for a, b in zip(lhs[r], rhs[r])]
                span.add(row)
    dim_z1 = width - span.rank

    # rank of v -> (rho(g_i) v - v)_i equals the coboundary dimension
    columns = []
    for v in range(size):
        col = []
        for gi, g in enumerate(group.closure_generators):
            mat = rho[group.index_of(g)]
            for r in range(size):
                x = mat.entries[r][v]
                if r == v:
                    x = x - ring_one(ring, group.descriptor)
                col.append(x)
        columns.append(col)
    dim_b1 = _rank_of_rows(columns)
    return dim_z1 - dim_b1


def h1_dimension(group: MatrixGroup, degree: int, ring: str) -> int:
    """First cohomology dimension on polynomials of total degree at most `degree`.

    The module splits as the direct sum of its homogeneous pieces, so the
    dimension is the sum of the per-degree contributions.  Whenever the
    group order is invertible in the field this is zero; the interesting
    (nonzero) values appear exactly when the order is divisible by the
    characteristic.
    """
    return sum(_h1_exact_degree(group, e, ring) for e in range(degree + 1))


# -- lifts ------------------------------------------------------------------------


def lift_fundamentals(group: MatrixGroup, residue_inv: FundamentalInvariants,
                      degree_bound: int):
    """Reynolds lifts of residue-field generators to O-invariants.

    Each generator is lifted coefficientwise, averaged over the group, and
    the reduction of the result is checked against the original generator.
    Returns (lifted polynomials, verdict, notes).
    """
    if residue_inv.ring != RING_RESIDUE:
        raise ValueError("lift expects fundamental invariants over the residue field")
    invert_mod_group_order(group.order, group.descriptor)
    lifts = []
    notes = []
    ok = True
    for i, f_bar in enumerate(residue_inv.generators):
        naive = MultiPoly(
            RING_O,
            group.descriptor,
            group.n,
            {e: group.descriptor.from_int(c.value) for e, c in f_bar.terms.items()},
        )
        lifted = reynolds(group, naive)
        if lifted.is_zero():
            ok = False
            notes.append(f"lift of generator {i}: Reynolds average vanished")
            lifts.append(lifted)
            continue
        if lifted.reduce() != f_bar:
            ok = False
            notes.append(
                f"lift of generator {i}: reduction does not reproduce the generator"
            )
        lifts.append(lifted)
    return tuple(lifts), ok, notes


# -- the certificate -----------------------------------------------------------------


@dataclass(frozen=True)
class RegularityCertificate:
    """Bundle of exact checks for 'the invariant ring is polynomial over O'."""

    kind: str
    p: int
    n: int
    group_order: int
    degree_bound: int
    hypothesis_ok: bool
    reflection_report: ReflectionReport | None
    eta_injective: bool | None
    reduced_reflection_generated: bool | None
    bases: tuple  # (element index, DiagonalizingBasis | None, note)
    bases_ok: bool | None
    fundamental_K: FundamentalInvariants | None
    fundamental_k: FundamentalInvariants | None
    degrees_match: bool | None
    graded_table: tuple
    graded_ok: bool | None
    molien: MolienSeries | None
    molien_vs_dimensions_ok: bool | None
    molien_vs_hilbert_ok: bool | None
    h1_table: tuple
    h1_ok: bool | None
    lifts: tuple
    lift_verified: bool | None
    verdict: str
    notes: tuple = field(default=())

    def to_dict(self) -> dict:
        reflections = []
        if self.reflection_report is not None:
            reflections = [
                {"index": i, "lambda": str(lam), "order": m}
                for i, lam, m in self.reflection_report.reflections
            ]
        bases = []
        for idx, basis, note in self.bases:
            entry = {"index": idx, "verified": basis is not None}
            if basis is not None:
                entry.update(basis.serialize())
            if note:
                entry["note"] = note
            bases.append(entry)
        return {
            "verdict": self.verdict,
            "dvr": {"kind": self.kind, "p": self.p},
            "n": self.n,
            "group_order": self.group_order,
            "degree_bound": self.degree_bound,
            "hypothesis_ok": self.hypothesis_ok,
            "reflections": reflections,
            "reflection_generated": (
                None if self.reflection_report is None
                else self.reflection_report.generated_by_reflections
            ),
            "eta_injective": self.eta_injective,
            "reduced_reflection_generated": self.reduced_reflection_generated,
            "bases": bases,
            "fundamental_degrees_K": (
                None if self.fundamental_K is None else list(self.fundamental_K.degrees)
            ),
            "fundamental_degrees_k": (
                None if self.fundamental_k is None else list(self.fundamental_k.degrees)
            ),
            "fundamental_generators_K": (
                None if self.fundamental_K is None
                else [str(f) for f in self.fundamental_K.generators]
            ),
            "fundamental_generators_k": (
                None if self.fundamental_k is None
                else [str(f) for f in self.fundamental_k.generators]
            ),
            "graded_table": [[d, a, b] for d, a, b, _ in self.graded_table],
            "graded_ok": self.graded_ok,
            "molien": None if self.molien is None else self.molien.serialize(),
            "molien_mod_p": None if self.molien is None else self.molien.mod_p,
            "molien_vs_dimensions_ok": self.molien_vs_dimensions_ok,
            "molien_vs_hilbert_ok": self.molien_vs_hilbert_ok,
            "h1": [[d, a, b] for d, a, b in self.h1_table],
            "h1_ok": self.h1_ok,
            "lifts": [str(f) for f in self.lifts],
            "lift_verified": self.lift_verified,
            "notes": list(self.notes),
        }


def certify(group: MatrixGroup, degree_bound: int | None = None) -> RegularityCertificate:
    """Run the full pipeline and aggregate the verdict.

    Sub-check failures are recorded in the certificate, never thrown; the
    verdict is "certified" only when every executed check passed,
    "refuted-hypothesis" when the group order is not invertible, and
    "inconclusive" otherwise (including non-reflection groups, about which
    the theory predicts nothing).
    """
    if degree_bound is None:
        degree_bound = group.order
    notes: list[str] = []
    base: dict = dict(
        kind=group.descriptor.kind,
        p=group.descriptor.p,
        n=group.n,
        group_order=group.order,
        degree_bound=degree_bound,
        reflection_report=None,
        eta_injective=None,
        reduced_reflection_generated=None,
        bases=(),
        bases_ok=None,
        fundamental_K=None,
        fundamental_k=None,
        degrees_match=None,
        graded_table=(),
        graded_ok=None,
        molien=None,
        molien_vs_dimensions_ok=None,
        molien_vs_hilbert_ok=None,
        h1_table=(),
        h1_ok=None,
        lifts=(),
        lift_verified=None,
    )

    try:
        invert_mod_group_order(group.order, group.descriptor)
    except HypothesisViolationError as exc:
        notes.append(str(exc))
        return RegularityCertificate(
            hypothesis_ok=False, verdict="refuted-hypothesis", notes=tuple(notes), **base
        )

    report = classify_reflections(group)
    base["reflection_report"] = report
    if report.vacuous:
        notes.append("trivial group: reflection-generated by the empty set")

    _, injective = reduction_map(group)
    base["eta_injective"] = injective
    if not injective:
        notes.append("reduction map failed to be injective")

    base["reduced_reflection_generated"] = verify_reduced_reflection_generation(group)

    if not report.generated_by_reflections:
        notes.append(
            "group is not generated by pseudo-reflections over the fraction "
            "field; no conclusion about the invariant ring is available"
        )
        return RegularityCertificate(
            hypothesis_ok=True, verdict="inconclusive", notes=tuple(notes), **base
        )

    bases = []
    bases_ok = True
    for idx, lam, order in report.reflections:
        try:
            basis = diagonalizing_basis(group.elements[idx], group)
            bases.append((idx, basis, ""))
        except DvrcertError as exc:
            bases.append((idx, None, str(exc)))
            bases_ok = False
            notes.append(f"diagonalizing basis failed for element {idx}: {exc}")
    base["bases"] = tuple(bases)
    base["bases_ok"] = bases_ok

    fundamental = {}
    for ring in (RING_K, RING_RESIDUE):
        try:
            fundamental[ring] = fundamental_invariants(
                group, ring, degree_bound, reflection_count=report.count
            )
        except (DegreeBoundExhaustedError, CertificateConditionError) as exc:
            fundamental[ring] = None
            notes.append(f"fundamental invariants over {ring}: {exc}")
    base["fundamental_K"] = fundamental[RING_K]
    base["fundamental_k"] = fundamental[RING_RESIDUE]
    if fundamental[RING_K] is not None and fundamental[RING_RESIDUE] is not None:
        base["degrees_match"] = (
            fundamental[RING_K].degrees == fundamental[RING_RESIDUE].degrees
        )
        if not base["degrees_match"]:
            notes.append(
                f"fundamental degrees differ: {fundamental[RING_K].degrees} over K, "
                f"{fundamental[RING_RESIDUE].degrees} over the residue field"
            )
    else:
        base["degrees_match"] = False

    table = graded_isomorphism_check(group, degree_bound)
    base["graded_table"] = table
    base["graded_ok"] = all(eq for _, _, _, eq in table)
    if not base["graded_ok"]:
        notes.append("graded dimensions over K and the residue field differ")

    molien = molien_series(group, degree_bound)
    base["molien"] = molien
    dims = {d: dim for d, dim, _, _ in table}
    if molien.mod_p:
        p = group.descriptor.p
        dims_ok = all(molien.coefficients[d] == dims[d] % p for d in dims)
    else:
        dims_ok = all(molien.coefficients[d] == dims[d] for d in dims)
    base["molien_vs_dimensions_ok"] = dims_ok
    if not dims_ok:
        notes.append("Molien coefficients disagree with computed invariant dimensions")

    if fundamental[RING_K] is not None:
        hilbert = hilbert_product_truncation(fundamental[RING_K].degrees, degree_bound)
        if molien.mod_p:
            p = group.descriptor.p
            hilbert_ok = all(
                molien.coefficients[d] == hilbert[d] % p for d in range(degree_bound + 1)
            )
        else:
            hilbert_ok = tuple(molien.coefficients) == tuple(hilbert)
        base["molien_vs_hilbert_ok"] = hilbert_ok
        if not hilbert_ok:
            notes.append(
                "Molien truncation disagrees with the product of geometric "
                "series over the fundamental degrees"
            )
    else:
        base["molien_vs_hilbert_ok"] = False

    h1_rows = []
    for d in range(min(degree_bound, H1_DEGREE_CAP) + 1):
        h1_rows.append(
            (d, h1_dimension(group, d, RING_K), h1_dimension(group, d, RING_RESIDUE))
        )
    base["h1_table"] = tuple(h1_rows)
    base["h1_ok"] = all(a == 0 and b == 0 for _, a, b in h1_rows)
    if not base["h1_ok"]:
        notes.append("nonzero first cohomology on a low-degree piece")

    if fundamental[RING_RESIDUE] is not None:
        lifts, lift_ok, lift_notes = lift_fundamentals(
            group, fundamental[RING_RESIDUE], degree_bound
        )
        base["lifts"] = lifts
        base["lift_verified"] = lift_ok
        notes.extend(lift_notes)
    else:
        base["lift_verified"] = False

    checks = [
        base["eta_injective"],
        base["reduced_reflection_generated"],
        base["bases_ok"],
        fundamental[RING_K] is not None,
        fundamental[RING_RESIDUE] is not None,
        base["degrees_match"],
        base["graded_ok"],
        base["molien_vs_dimensions_ok"],
        base["molien_vs_hilbert_ok"],
        base["h1_ok"],
        base["lift_verified"],
    ]
    verdict = "certified" if all(checks) else "inconclusive"
    return RegularityCertificate(
        hypothesis_ok=True, verdict=verdict, notes=tuple(notes), **base
    )
