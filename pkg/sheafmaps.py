# sheafmaps.py - Graded matrices between split bundles, kernels and saturation
"""
A morphism O(a_1) + ... + O(a_s) -> O(b_1) + ... + O(b_n) is an n x s matrix of
binary forms with entry (i, j) of degree b_i - a_j. The order of the summands
is kept (a framing of the bundle); ``source`` and ``target`` hand back the
sorted splitting types.

Kernels and saturations are computed on the chart t = V/U: the finite part of
a saturated subsheaf is a saturated k[t]-lattice, and the behaviour at t = oo
is fixed by column-reducing a lattice basis against the target twists. The
twists of the reduced basis are the splitting type. ``splitting_type_of``
recovers the same twists independently by counting global sections.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

import config
from bundles import SplitBundle
from exact_algebra import (
    FieldSpec,
    Form,
    Poly,
    PolyMatrix,
    RatMatrix,
    clear_denominators,
    form_gcd,
    frobenius_twist,
    normalize_vector,
    poly_coefficient,
    poly_det,
    poly_identity,
    poly_is_zero,
    poly_kernel,
    poly_monomial,
    poly_rank,
    poly_zero,
    rat_kernel,
)
from exceptions import DegreeMismatch, InternalInvariantViolation

logger = logging.getLogger(__name__)


# ---------------------- GRADED MATRICES ----------------------

@dataclass(frozen=True, eq=False)
class GradedMatrix:
    field: FieldSpec
    source_twists: Tuple[int, ...]
    target_twists: Tuple[int, ...]
    entries: Tuple[Tuple[Form, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "source_twists", tuple(int(a) for a in self.source_twists))
        object.__setattr__(self, "target_twists", tuple(int(b) for b in self.target_twists))
        object.__setattr__(self, "entries", tuple(tuple(row) for row in self.entries))
        if len(self.entries) != len(self.target_twists):
            raise ValueError(f"{len(self.entries)} rows for {len(self.target_twists)} target summands")
        for row in self.entries:
            if len(row) != len(self.source_twists):
                raise ValueError(f"row of length {len(row)} for {len(self.source_twists)} source summands")

    # constructors

    @classmethod
    def zero(cls, field: FieldSpec, source: Sequence[int], target: Sequence[int]) -> "GradedMatrix":
        z = Form.zero(field)
        return cls(field, tuple(source), tuple(target), tuple((z,) * len(source) for _ in target))

    @classmethod
    def identity(cls, field: FieldSpec, twists: Sequence[int]) -> "GradedMatrix":
        one, z = Form.constant(field, 1), Form.zero(field)
        n = len(twists)
        return cls(field, tuple(twists), tuple(twists), tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_polys(cls, field: FieldSpec, source: Sequence[int], target: Sequence[int], rows: Sequence[Sequence[Poly]]) -> "GradedMatrix":
        """Homogenize dehomogenized entries to their forced degrees"""
        entries = []
        for i, b in enumerate(target):
            row = []
            for j, a in enumerate(source):
                poly = rows[i][j]
                if poly_is_zero(poly):
                    row.append(Form.zero(field))
                    continue
                if poly.degree > b - a:
                    raise DegreeMismatch(i, j, b - a, poly.degree)
                row.append(Form.homogenize(field, poly, b - a))
            entries.append(tuple(row))
        return cls(field, tuple(source), tuple(target), tuple(entries))

    @classmethod
    def constant(cls, field: FieldSpec, twist: int, matrix: Sequence[Sequence[int]]) -> "GradedMatrix":
        """Constant matrix O(twist)^s -> O(twist)^n"""
        n = len(matrix)
        s = len(matrix[0]) if n else 0
        entries = tuple(tuple(Form.constant(field, c) for c in row) for row in matrix)
        return cls(field, (twist,) * s, (twist,) * n, entries)

    # shape

    @property
    def nrows(self) -> int:
        return len(self.target_twists)

    @property
    def ncols(self) -> int:
        return len(self.source_twists)

    @property
    def source(self) -> SplitBundle:
        return SplitBundle(self.source_twists)

    @property
    def target(self) -> SplitBundle:
        return SplitBundle(self.target_twists)

    def expected_degree(self, i: int, j: int) -> int:
        return self.target_twists[i] - self.source_twists[j]

    def is_zero(self) -> bool:
        return all(f.is_zero for row in self.entries for f in row)

    # validation

    def validate(self) -> "GradedMatrix":
        for i, row in enumerate(self.entries):
            for j, f in enumerate(row):
                if f.is_zero:
                    continue
                expected = self.expected_degree(i, j)
                if f.degree != expected:
                    raise DegreeMismatch(i, j, expected, f.degree)
        return self

    # algebra

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        """self after other"""
        if other.target_twists != self.source_twists:
            raise ValueError(f"cannot compose: {list(other.target_twists)} != {list(self.source_twists)}")
        z = Form.zero(self.field)
        entries = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = z
                for k in range(self.ncols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            entries.append(tuple(row))
        return GradedMatrix(self.field, other.source_twists, self.target_twists, tuple(entries))

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        if (self.source_twists, self.target_twists) != (other.source_twists, other.target_twists):
            raise ValueError("cannot add graded matrices of different shapes")
        entries = tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries))
        return GradedMatrix(self.field, self.source_twists, self.target_twists, entries)

    def __neg__(self) -> "GradedMatrix":
        return GradedMatrix(self.field, self.source_twists, self.target_twists, tuple(tuple(-f for f in row) for row in self.entries))

    def __sub__(self, other: "GradedMatrix") -> "GradedMatrix":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.source_twists == other.source_twists
            and self.target_twists == other.target_twists
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.source_twists, self.target_twists, self.entries))

    def transpose(self) -> "GradedMatrix":
        """Dual map F^v -> E^v"""
        entries = tuple(tuple(self.entries[i][j] for i in range(self.nrows)) for j in range(self.ncols))
        return GradedMatrix(
            self.field,
            tuple(-b for b in self.target_twists),
            tuple(-a for a in self.source_twists),
            entries,
        )

    dual = transpose

    def frobenius_twist(self, e: int = 1) -> "GradedMatrix":
        q = self.field.p**e
        return GradedMatrix(
            self.field,
            tuple(q * a for a in self.source_twists),
            tuple(q * b for b in self.target_twists),
            tuple(tuple(frobenius_twist(f, e) for f in row) for row in self.entries),
        )

    def select_columns(self, columns: Sequence[int]) -> "GradedMatrix":
        return GradedMatrix(
            self.field,
            tuple(self.source_twists[j] for j in columns),
            self.target_twists,
            tuple(tuple(row[j] for j in columns) for row in self.entries),
        )

    def hstack(self, other: "GradedMatrix") -> "GradedMatrix":
        if self.target_twists != other.target_twists:
            raise ValueError("cannot stack columns into different targets")
        return GradedMatrix(
            self.field,
            self.source_twists + other.source_twists,
            self.target_twists,
            tuple(r1 + r2 for r1, r2 in zip(self.entries, other.entries)),
        )

    def dehomogenize(self) -> PolyMatrix:
        return [[f.poly for f in row] for row in self.entries]

    def to_rat(self) -> RatMatrix:
        return RatMatrix.from_poly_rows(self.field, self.dehomogenize(), self.ncols)

    def generic_rank(self) -> int:
        return poly_rank(self.dehomogenize(), self.ncols, self.field)

    def to_text(self) -> str:
        head = f"{list(self.source_twists)} -> {list(self.target_twists)}"
        body = "\n".join("  [" + ", ".join(f.to_text() for f in row) + "]" for row in self.entries)
        return head + ("\n" + body if body else "")


def validate(M: GradedMatrix) -> GradedMatrix:
    return M.validate()


# ---------------------- SUBSHEAVES ----------------------

@dataclass(frozen=True, eq=False)
class Subsheaf:
    """Subsheaf of the target of ``generators`` spanned by its columns"""

    generators: GradedMatrix
    saturated: bool = False

    @property
    def field(self) -> FieldSpec:
        return self.generators.field

    @property
    def ambient_twists(self) -> Tuple[int, ...]:
        return self.generators.target_twists

    @property
    def ambient(self) -> SplitBundle:
        return self.generators.target

    @cached_property
    def rank(self) -> int:
        return self.generators.generic_rank()

    @cached_property
    def degree(self) -> int:
        if self.saturated and self.rank == self.generators.ncols:
            return sum(self.generators.source_twists)
        kernel, _ = kernel_bundle(self.generators)
        return sum(self.generators.source_twists) - kernel.degree

    @property
    def splitting_type(self) -> SplitBundle:
        """Twists of a saturated basis"""
        if not self.saturated:
            return saturate(self).splitting_type
        return SplitBundle(self.generators.source_twists)

    def annihilator(self) -> List[List[Poly]]:
        """Rows y over k[t] with y . generators = 0"""
        G = self.generators.dehomogenize()
        n, s = self.generators.nrows, self.generators.ncols
        transposed = [[G[i][j] for i in range(n)] for j in range(s)]
        return poly_kernel(transposed, n, self.field)


def _shifted_degree(column: Sequence[Poly], twists: Sequence[int]) -> int:
    return max(entry.degree - b for entry, b in zip(column, twists) if not poly_is_zero(entry))


def _leading_matrix(field: FieldSpec, columns, twists, sdeg):
    GF = field.GF
    lead = GF.Zeros((len(twists), len(columns)))
    for k, column in enumerate(columns):
        for i, (entry, b) in enumerate(zip(column, twists)):
            lead[i, k] = GF(poly_coefficient(entry, b + sdeg[k]))
    return lead


def reduce_columns(field: FieldSpec, twists: Sequence[int], columns: List[List[Poly]]) -> Tuple[List[List[Poly]], List[int]]:
    """Column-reduce a lattice basis against the shifts ``twists``; returns the basis and its shifted degrees"""
    columns = [list(c) for c in columns]
    r = len(columns)
    while True:
        sdeg = [_shifted_degree(c, twists) for c in columns]
        if r == 0:
            return columns, sdeg
        lead = _leading_matrix(field, columns, twists, sdeg)
        if np.linalg.matrix_rank(lead) == r:
            return columns, sdeg
        alpha = lead.null_space()[0]
        live = [k for k in range(r) if int(alpha[k]) != 0]
        top = max(live, key=lambda k: (sdeg[k], k))
        inv = alpha[top] ** -1
        new = [poly_zero(field) for _ in twists]
        for k in live:
            shift = poly_monomial(field, sdeg[top] - sdeg[k], alpha[k] * inv)
            new = [acc + shift * entry for acc, entry in zip(new, columns[k])]
        logger.debug("column %d reduced from shifted degree %d to %d", top, sdeg[top], _shifted_degree(new, twists))
        columns[top] = new


def _lattice_to_subsheaf(field: FieldSpec, twists: Tuple[int, ...], lattice: List[List[Poly]]) -> Subsheaf:
    columns, sdeg = reduce_columns(field, twists, lattice)
    order = sorted(range(len(columns)), key=lambda k: (sdeg[k], k))
    c = tuple(-sdeg[k] for k in order)
    normalized = [normalize_vector(columns[k]) for k in order]
    rows = [[column[i] for column in normalized] for i in range(len(twists))]
    gens = GradedMatrix.from_polys(field, c, twists, rows)
    return Subsheaf(gens, saturated=True)


def span_lattice(field: FieldSpec, n: int, vectors: Sequence[Sequence[Poly]]) -> List[List[Poly]]:
    """k[t]-basis of (k(t)-span of vectors) intersected with k[t]^n"""
    rows = [list(v) for v in vectors]
    r = poly_rank(rows, n, field) if rows else 0
    if r == 0:
        return []
    if r == n:
        eye = poly_identity(field, n)
        return [[eye[i][k] for i in range(n)] for k in range(n)]
    annihilator = poly_kernel(rows, n, field)
    return poly_kernel(annihilator, n, field)


def saturated_lattice(S: Subsheaf) -> List[List[Poly]]:
    return span_lattice(S.field, S.generators.nrows, subsheaf_vectors(S))


def subsheaf_vectors(S: Subsheaf) -> List[List[Poly]]:
    """Generators as dehomogenized column vectors"""
    G = S.generators.dehomogenize()
    return [[G[i][j] for i in range(S.generators.nrows)] for j in range(S.generators.ncols)]


def span_subsheaf(field: FieldSpec, twists: Sequence[int], vectors: Sequence[Sequence[Poly]]) -> Subsheaf:
    """Saturated subsheaf of O(twists) whose generic fiber is spanned by ``vectors``"""
    return _lattice_to_subsheaf(field, tuple(twists), span_lattice(field, len(twists), vectors))


def hn_pieces(S: Subsheaf) -> List[Subsheaf]:
    """HN partial sums of a saturated subsheaf, read off its reduced basis"""
    S = saturate(S)
    twists = S.generators.source_twists
    pieces = []
    for tau in sorted(set(twists), reverse=True):
        keep = [k for k, c in enumerate(twists) if c >= tau]
        pieces.append(Subsheaf(S.generators.select_columns(keep), saturated=True))
    return pieces


def saturate(S: Subsheaf) -> Subsheaf:
    """Saturation: same generic fiber, torsion-free quotient"""
    if S.saturated:
        return S
    return _lattice_to_subsheaf(S.field, S.ambient_twists, saturated_lattice(S))


def kernel_bundle(M: GradedMatrix) -> Tuple[Subsheaf, SplitBundle]:
    """Saturated kernel subbundle of the source of M and its splitting type"""
    M.validate()
    vectors = [clear_denominators(v) for v in rat_kernel(M.to_rat())]
    lattice = span_lattice(M.field, M.ncols, vectors)
    kernel = _lattice_to_subsheaf(M.field, M.source_twists, lattice)
    return kernel, kernel.splitting_type


def image_subsheaf(M: GradedMatrix) -> Subsheaf:
    return Subsheaf(M.validate())


# ---------------------- SECTION COUNTS ----------------------

def independent_columns(M: GradedMatrix) -> List[int]:
    """Greedy set of columns independent over k(t)"""
    chosen: List[int] = []
    rank = 0
    for j in range(M.ncols):
        trial = chosen + [j]
        new_rank = M.select_columns(trial).generic_rank()
        if new_rank > rank:
            chosen, rank = trial, new_rank
    return chosen


def section_count(field: FieldSpec, twists: Sequence[int], annihilator: List[List[Poly]], d: int) -> int:
    """dim of sections of E(d) killed by every annihilator row"""
    sizes = [max(0, b + d + 1) for b in twists]
    unknowns = sum(sizes)
    if unknowns == 0:
        return 0
    live_rows = [y for y in annihilator if any(not poly_is_zero(x) for x in y)]
    if not live_rows:
        return unknowns
    offsets = np.cumsum([0] + sizes[:-1])
    height = max(
        (y[i].degree + sizes[i] for y in live_rows for i in range(len(twists)) if sizes[i] and not poly_is_zero(y[i])),
        default=0,
    )
    GF = field.GF
    system = GF.Zeros((len(live_rows) * height, unknowns))
    for r, y in enumerate(live_rows):
        for i, yi in enumerate(y):
            if poly_is_zero(yi) or not sizes[i]:
                continue
            for s in range(yi.degree + 1):
                c = poly_coefficient(yi, s)
                if c == 0:
                    continue
                for l in range(sizes[i]):
                    system[r * height + s + l, offsets[i] + l] += GF(c)
    return unknowns - int(np.linalg.matrix_rank(system))


def splitting_type_of(S: Subsheaf) -> SplitBundle:
    """Splitting type recovered from h(d) - h(d-1) = #{c : c >= -d}"""
    S = saturate(S)
    r = S.rank
    if r == 0:
        return SplitBundle(())
    twists = S.ambient_twists
    annihilator = S.annihilator() if r < len(twists) else []
    top = max(twists)
    chosen = independent_columns(S.generators)
    lowest = sum(S.generators.source_twists[j] for j in chosen) - (r - 1) * top
    d_start, d_stop = -top - 1, -lowest + config.SECTION_COUNT_SLACK
    h = {d_start - 1: 0, d_start: 0}
    for d in range(d_start + 1, d_stop + 1):
        h[d] = section_count(S.field, twists, annihilator, d)
    found: List[int] = []
    for d in range(d_start + 1, d_stop + 1):
        jump = (h[d] - h[d - 1]) - (h[d - 1] - h[d - 2])
        if jump < 0:
            raise InternalInvariantViolation(f"section counts are not convex at twist {d}")
        found.extend([-d] * jump)
    if len(found) != r or h[d_stop] - h[d_stop - 1] != r:
        raise InternalInvariantViolation(f"section counts found {len(found)} summands for a rank-{r} subsheaf")
    return SplitBundle(tuple(found))


def saturation_degree_by_minors(M: GradedMatrix) -> int:
    """deg of the saturated image: twists of independent columns plus deg gcd of their maximal minors"""
    M.validate()
    chosen = independent_columns(M)
    r = len(chosen)
    if r == 0:
        return 0
    sub = M.select_columns(chosen)
    polys = sub.dehomogenize()
    source_degree = sum(sub.source_twists)
    minors: List[Form] = []
    for rows in combinations(range(M.nrows), r):
        det = poly_det([[polys[i][k] for k in range(r)] for i in rows], M.field)
        if poly_is_zero(det):
            continue
        minors.append(Form.homogenize(M.field, det, sum(M.target_twists[i] for i in rows) - source_degree))
    return source_degree + form_gcd(minors).degree


# ---------------------- EXACT TRIPLES ----------------------

@dataclass(frozen=True)
class TripleAnalysis:
    kernel: SplitBundle
    image_degree: int
    image_rank: int
    image_sat: SplitBundle
    cokernel: SplitBundle
    torsion_degree: int
    image_generators: GradedMatrix


def exact_triple_analyze(M: GradedMatrix) -> TripleAnalysis:
    """0 -> K -> source -> target -> Q + torsion -> 0, with exact degree bookkeeping"""
    M.validate()
    _, kernel = kernel_bundle(M)
    image_degree = M.source.degree - kernel.degree
    image_sat = saturate(Subsheaf(M))
    torsion = image_sat.degree - image_degree
    if image_sat.generators.ncols:
        _, cokernel_dual = kernel_bundle(image_sat.generators.transpose())
    else:
        cokernel_dual = SplitBundle(tuple(-b for b in M.target_twists))
    cokernel = SplitBundle(tuple(-a for a in cokernel_dual.twists))
    if torsion < 0 or M.target.degree != image_degree + torsion + cokernel.degree:
        raise InternalInvariantViolation(
            f"degree bookkeeping failed: target {M.target.degree}, image {image_degree}, "
            f"torsion {torsion}, cokernel {cokernel.degree}"
        )
    if kernel.rank + image_sat.rank != M.ncols or image_sat.rank + cokernel.rank != M.nrows:
        raise InternalInvariantViolation("rank bookkeeping failed")
    return TripleAnalysis(
        kernel=kernel,
        image_degree=image_degree,
        image_rank=image_sat.rank,
        image_sat=image_sat.splitting_type,
        cokernel=cokernel,
        torsion_degree=torsion,
        image_generators=image_sat.generators,
    )
