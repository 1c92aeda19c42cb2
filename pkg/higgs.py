# higgs.py - Higgs bundles on the projective line, semistability and the Arakelov chain
"""
Higgs bundles (E, theta) with theta: E -> E (x) O(-2). The graded shape
(E + E^v, theta) of a family is built from its Hodge splitting and a symmetric
Kodaira-Spencer matrix; theta vanishes on E^v.

Semistability is tested against a finite family of saturated, theta-invariant
candidates. A returned witness is always a genuine destabilizer; Semistable is
only claimed for input classes where the family is known to be exhaustive.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from bundles import SplitBundle
from exact_algebra import (
    FieldSpec,
    Form,
    Poly,
    PolyMatrix,
    poly_coefficient,
    poly_identity,
    poly_is_zero,
    poly_kernel,
    poly_matmul,
    poly_rank,
    poly_zero,
)
from exceptions import InternalInvariantViolation, InvalidBundle, NotSymmetric
from models import ArakelovReport, ArakelovStepReport, HiggsVerdict, W2Rule
from sheafmaps import (
    GradedMatrix,
    Subsheaf,
    exact_triple_analyze,
    hn_pieces,
    span_subsheaf,
    subsheaf_vectors,
)

logger = logging.getLogger(__name__)

OMEGA_TWIST = -2


# ---------------------- TYPES ----------------------

@dataclass(frozen=True, eq=False)
class HiggsBundle:
    """theta: O(c) -> O(c - 2), summands kept in the given order"""

    theta: GradedMatrix

    def __post_init__(self):
        expected = tuple(c + OMEGA_TWIST for c in self.theta.source_twists)
        if self.theta.target_twists != expected:
            raise InvalidBundle(
                f"Higgs field must map {list(self.theta.source_twists)} to {list(expected)}, "
                f"got {list(self.theta.target_twists)}"
            )
        self.theta.validate()

    @classmethod
    def zero_field(cls, field: FieldSpec, twists: Sequence[int]) -> "HiggsBundle":
        return cls(GradedMatrix.zero(field, tuple(twists), tuple(c + OMEGA_TWIST for c in twists)))

    @property
    def field(self) -> FieldSpec:
        return self.theta.field

    @property
    def twists(self) -> Tuple[int, ...]:
        return self.theta.source_twists

    @property
    def bundle(self) -> SplitBundle:
        return SplitBundle(self.twists)

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def slope(self) -> Fraction:
        return Fraction(sum(self.twists), self.rank)

    def theta_polys(self) -> PolyMatrix:
        return self.theta.dehomogenize()


@dataclass(frozen=True, eq=False)
class GradedHiggs:
    """(E + E^v, theta) with theta|E the Kodaira-Spencer matrix and theta(E^v) = 0"""

    field: FieldSpec
    hodge_twists: Tuple[int, ...]
    ks: Tuple[Tuple[Form, ...], ...]
    check_symmetry: bool = True

    def __post_init__(self):
        object.__setattr__(self, "hodge_twists", tuple(int(a) for a in self.hodge_twists))
        object.__setattr__(self, "ks", tuple(tuple(row) for row in self.ks))
        g = len(self.hodge_twists)
        if len(self.ks) != g or any(len(row) != g for row in self.ks):
            raise InvalidBundle(f"Kodaira-Spencer matrix must be {g} x {g}")
        self.ks_matrix().validate()
        if self.check_symmetry:
            for i in range(g):
                for j in range(i + 1, g):
                    if self.ks[i][j] != self.ks[j][i]:
                        raise NotSymmetric(i, j)

    @property
    def g(self) -> int:
        return len(self.hodge_twists)

    @property
    def hodge(self) -> SplitBundle:
        return SplitBundle(self.hodge_twists)

    @property
    def hodge_degree(self) -> int:
        return sum(self.hodge_twists)

    @property
    def dual_twists(self) -> Tuple[int, ...]:
        return tuple(-a for a in self.hodge_twists)

    def ks_matrix(self) -> GradedMatrix:
        """theta|E: E -> E^v (x) O(-2)"""
        return GradedMatrix(
            self.field,
            self.hodge_twists,
            tuple(-a + OMEGA_TWIST for a in self.hodge_twists),
            self.ks,
        )

    @property
    def higgs(self) -> HiggsBundle:
        g = self.g
        z = Form.zero(self.field)
        twists = self.hodge_twists + self.dual_twists
        rows = []
        for i in range(2 * g):
            if i < g:
                rows.append((z,) * (2 * g))
            else:
                rows.append(tuple(self.ks[i - g]) + (z,) * g)
        return HiggsBundle(GradedMatrix(self.field, twists, tuple(c + OMEGA_TWIST for c in twists), tuple(rows)))

    def project(self) -> Tuple[SplitBundle, Tuple[Tuple[Form, ...], ...]]:
        """Recover (hodge, ks) from the assembled Higgs field"""
        theta = self.higgs.theta
        g = self.g
        ks = tuple(tuple(theta.entries[g + i][j] for j in range(g)) for i in range(g))
        return SplitBundle(theta.source_twists[:g]), ks


def graded_from_hodge(field: FieldSpec, hodge: Sequence[int], ks: Sequence[Sequence[Form]], check_symmetry: bool = True) -> GradedHiggs:
    return GradedHiggs(field, tuple(hodge), tuple(tuple(row) for row in ks), check_symmetry)


HiggsInput = Union[HiggsBundle, GradedHiggs]


def _as_higgs(H: HiggsInput) -> HiggsBundle:
    return H.higgs if isinstance(H, GradedHiggs) else H


# ---------------------- INVARIANCE ----------------------

def _column_rank(field: FieldSpec, n: int, vectors: List[List[Poly]]) -> int:
    return poly_rank([list(v) for v in vectors], n, field) if vectors else 0


def is_invariant(S: Subsheaf, H: HiggsInput) -> bool:
    """theta maps the generic fiber of S into itself"""
    H = _as_higgs(H)
    if S.ambient_twists != H.twists:
        raise InvalidBundle(f"subsheaf of {list(S.ambient_twists)} is not inside {list(H.twists)}")
    vectors = subsheaf_vectors(S)
    if not vectors:
        return True
    n = H.rank
    theta = H.theta_polys()
    images = [_apply(theta, v) for v in vectors]
    return _column_rank(H.field, n, vectors + images) == _column_rank(H.field, n, vectors)


def _apply(matrix: PolyMatrix, vector: Sequence[Poly]) -> List[Poly]:
    out = []
    for row in matrix:
        acc = None
        for entry, x in zip(row, vector):
            term = entry * x
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def is_nilpotent(H: HiggsInput) -> bool:
    """theta^n = 0 on the generic fiber"""
    H = _as_higgs(H)
    n = H.rank
    if n == 0:
        return True
    theta = H.theta_polys()
    power = poly_identity(H.field, n)
    for _ in range(n):
        power = poly_matmul(theta, power, H.field)
    return all(poly_is_zero(x) for row in power for x in row)


# ---------------------- DESTABILIZERS ----------------------

@dataclass(frozen=True)
class Destabilizer:
    subsheaf: Subsheaf
    slope: Fraction

    @property
    def twists(self) -> Tuple[int, ...]:
        return self.subsheaf.splitting_type.twists

    @property
    def rank(self) -> int:
        return self.subsheaf.rank


def _coordinates(field: FieldSpec, n: int, indices: Sequence[int]) -> List[List[Poly]]:
    eye = poly_identity(field, n)
    return [[eye[r][i] for r in range(n)] for i in indices]


def _threshold_indices(twists: Sequence[int], within: Sequence[int]) -> List[List[int]]:
    """Coordinate HN partial sums of the summands listed in ``within``"""
    levels = sorted({twists[i] for i in within}, reverse=True)
    return [[i for i in within if twists[i] >= tau] for tau in levels]


def _kernel_vectors(theta: PolyMatrix, n: int, field: FieldSpec, power: int = 1) -> List[List[Poly]]:
    matrix = poly_identity(field, n)
    for _ in range(power):
        matrix = poly_matmul(theta, matrix, field)
    return poly_kernel(matrix, n, field)


def _krylov(theta: PolyMatrix, vectors: List[List[Poly]], n: int) -> List[List[Poly]]:
    span = [list(v) for v in vectors]
    frontier = span
    for _ in range(n):
        frontier = [_apply(theta, v) for v in frontier]
        span = span + frontier
    return span


def _general_candidates(H: HiggsBundle) -> List[List[List[Poly]]]:
    n, field, twists = H.rank, H.field, H.twists
    theta = H.theta_polys()
    families: List[List[List[Poly]]] = []
    for k in range(1, n):
        families.append(_kernel_vectors(theta, n, field, k))
    for indices in _threshold_indices(twists, range(n)):
        coords = _coordinates(field, n, indices)
        families.append(coords)
        families.append(_krylov(theta, coords, n))
    for i in range(n):
        families.append(_krylov(theta, _coordinates(field, n, [i]), n))
    return families


def _graded_tiers(G: GradedHiggs) -> List[List[List[List[Poly]]]]:
    H = G.higgs
    g, n, field, twists = G.g, 2 * G.g, G.field, H.twists
    dual_block = list(range(g, n))
    dual_sums = [[]] + _threshold_indices(twists, dual_block)

    tier_dual = [_coordinates(field, n, idx) for idx in dual_sums if idx]

    ks_polys = G.ks_matrix().dehomogenize()
    zero_pad = [poly_zero(field)] * g
    kernel_e = [list(v) + zero_pad for v in poly_kernel(ks_polys, g, field)]
    tier_kernel: List[List[List[Poly]]] = []
    if kernel_e:
        K = span_subsheaf(field, twists, kernel_e)
        for piece in hn_pieces(K):
            for idx in dual_sums:
                tier_kernel.append(subsheaf_vectors(piece) + _coordinates(field, n, idx))

    tier_preimage: List[List[List[Poly]]] = []
    for pos, B in enumerate(dual_sums):
        outside = [i - g for i in dual_block if i not in B]
        rows = [ks_polys[i] for i in outside]
        preimage = [list(v) + zero_pad for v in poly_kernel(rows, g, field)] if rows else _coordinates(field, n, range(g))
        if not preimage:
            continue
        T = span_subsheaf(field, twists, preimage)
        for piece in hn_pieces(T):
            for larger in dual_sums[pos:]:
                if set(B) <= set(larger):
                    tier_preimage.append(subsheaf_vectors(piece) + _coordinates(field, n, larger))
    return [tier_dual, tier_kernel, tier_preimage, _general_candidates(H)]


def _best(H: HiggsBundle, families: List[List[List[Poly]]]) -> Optional[Destabilizer]:
    total = H.slope
    best: Optional[Destabilizer] = None
    best_key = None
    seen = set()
    for vectors in families:
        if not vectors:
            continue
        S = span_subsheaf(H.field, H.twists, vectors)
        if S.rank == 0 or S.rank == H.rank:
            continue
        key_twists = S.splitting_type.twists
        signature = (S.rank, key_twists, tuple(tuple(f for f in row) for row in S.generators.entries))
        if signature in seen:
            continue
        seen.add(signature)
        mu = Fraction(S.degree, S.rank)
        if mu <= total or not is_invariant(S, H):
            continue
        key = (mu, S.rank, key_twists)
        if best_key is None or key > best_key:
            best, best_key = Destabilizer(S, mu), key
    return best


def destabilizer_search(H: HiggsInput) -> Optional[Destabilizer]:
    """Highest-slope invariant destabilizer from the first candidate tier that has one"""
    if isinstance(H, GradedHiggs):
        tiers = _graded_tiers(H)
        higgs = H.higgs
    else:
        higgs = H
        tiers = [_general_candidates(H)]
    for level, families in enumerate(tiers):
        witness = _best(higgs, families)
        if witness is not None:
            logger.debug("destabilizer %s of slope %s found in tier %d", list(witness.twists), witness.slope, level)
            return witness
    return None


def verdict_is_complete(H: HiggsInput) -> bool:
    higgs = _as_higgs(H)
    if higgs.theta.is_zero() or higgs.rank <= 2:
        return True
    return isinstance(H, GradedHiggs) and H.g == 1


@dataclass(frozen=True)
class HiggsCheck:
    verdict: HiggsVerdict
    witness: Optional[Destabilizer]
    complete: bool


def semistability_verdict(H: HiggsInput) -> HiggsCheck:
    higgs = _as_higgs(H)
    if higgs.rank == 0:
        return HiggsCheck(HiggsVerdict.semistable, None, True)
    witness = destabilizer_search(H)
    complete = verdict_is_complete(H)
    if witness is not None:
        if not is_invariant(witness.subsheaf, higgs) or not witness.slope > higgs.slope:
            raise InternalInvariantViolation("destabilizer certificate failed its own check")
        return HiggsCheck(HiggsVerdict.unstable, witness, complete)
    if complete:
        return HiggsCheck(HiggsVerdict.semistable, None, True)
    return HiggsCheck(HiggsVerdict.unknown, None, False)


def w2_rule(H: GradedHiggs) -> Tuple[W2Rule, Optional[Destabilizer]]:
    """Higgs instability of the graded bundle obstructs a W2(k)-lift"""
    check = semistability_verdict(H)
    if check.verdict == HiggsVerdict.unstable:
        return W2Rule.obstruction_found, check.witness
    return W2Rule.no_obstruction, None


# ---------------------- DUALS AND MORPHISMS ----------------------

def dual_higgs(H: HiggsInput) -> HiggsBundle:
    """(E^v, -theta^T)"""
    H = _as_higgs(H)
    theta = H.theta
    n = H.rank
    entries = tuple(tuple(-theta.entries[j][i] for j in range(n)) for i in range(n))
    twists = tuple(-c for c in H.twists)
    return HiggsBundle(GradedMatrix(H.field, twists, tuple(c + OMEGA_TWIST for c in twists), entries))


def higgs_hom_dimension(H1: HiggsInput, H2: HiggsInput) -> int:
    """dim of graded f: E1 -> E2 with theta2 f = f theta1"""
    H1, H2 = _as_higgs(H1), _as_higgs(H2)
    field = H1.field
    a, b = H1.twists, H2.twists
    t1, t2 = H1.theta_polys(), H2.theta_polys()

    unknowns: List[Tuple[int, int, int]] = []
    for i, bi in enumerate(b):
        for j, aj in enumerate(a):
            unknowns.extend((i, j, l) for l in range(bi - aj + 1))
    if not unknowns:
        return 0

    GF = field.GF
    rows: Dict[Tuple[int, int, int], object] = {}

    def row_for(key):
        if key not in rows:
            rows[key] = GF.Zeros(len(unknowns))
        return rows[key]

    for col, (i, j, l) in enumerate(unknowns):
        # (theta2 f)_{r, j} picks up theta2[r][i] t^l
        for r in range(len(b)):
            entry = t2[r][i]
            if poly_is_zero(entry):
                continue
            for s in range(entry.degree + 1):
                c = poly_coefficient(entry, s)
                if c:
                    row_for((r, j, s + l))[col] += GF(c)
        # (f theta1)_{i, q} picks up t^l theta1[j][q]
        for q in range(len(a)):
            entry = t1[j][q]
            if poly_is_zero(entry):
                continue
            for s in range(entry.degree + 1):
                c = poly_coefficient(entry, s)
                if c:
                    row_for((i, q, s + l))[col] -= GF(c)
    if not rows:
        return len(unknowns)
    system = GF(np.array([[int(x) for x in r] for r in rows.values()], dtype=int))
    return len(unknowns) - int(np.linalg.matrix_rank(system))


# ---------------------- ARAKELOV CHAIN ----------------------

def _step(name: str, lhs: int, rhs: int) -> ArakelovStepReport:
    return ArakelovStepReport(name=name, lhs=str(lhs), rhs=str(rhs), holds=lhs <= rhs)


def arakelov_pipeline(G: GradedHiggs, genus: int = 0) -> ArakelovReport:
    """Every step of deg E <= (g - rank G)(genus - 1) <= g(genus - 1), evaluated exactly"""
    g = G.g
    deg_e = G.hodge_degree
    omega = 2 * genus - 2
    triple = exact_triple_analyze(G.ks_matrix())
    kernel = triple.kernel
    image_rank = triple.image_rank
    sat_degree = triple.image_sat.degree
    target_degree = g * omega - deg_e
    cokernel_degree = target_degree - sat_degree
    cokernel_rank = g - image_rank
    if genus == 0 and cokernel_degree != triple.cokernel.degree:
        raise InternalInvariantViolation(
            f"cokernel degree {triple.cokernel.degree} disagrees with the bookkeeping value {cokernel_degree}"
        )

    chain = _step("chain", 2 * deg_e, g * omega + kernel.degree - cokernel_degree)
    steps = [
        _step("kernel_degree", kernel.degree, 0),
        _step("cokernel_dual_degree", cokernel_rank * omega - cokernel_degree, 0),
        _step("rank_refined_bound", deg_e, (g - cokernel_rank) * (genus - 1)),
        _step("final_bound", deg_e, g * (genus - 1)),
    ]
    if not chain.holds:
        raise InternalInvariantViolation("the saturation chain failed; torsion length is negative")

    symmetry: Optional[bool] = None
    if G.check_symmetry:
        if genus == 0:
            dual_twisted = SplitBundle(tuple(-c + omega for c in triple.cokernel.twists))
            symmetry = dual_twisted == kernel
        else:
            symmetry = cokernel_rank == kernel.rank and cokernel_rank * omega - cokernel_degree == kernel.degree

    final = steps[-1]
    return ArakelovReport(
        g=g,
        genus=genus,
        hodge_degree=deg_e,
        kernel=list(kernel.twists),
        kernel_degree=kernel.degree,
        image_degree=triple.image_degree,
        image_saturation_degree=sat_degree,
        torsion_length=triple.torsion_degree,
        cokernel_degree=cokernel_degree,
        cokernel_rank=cokernel_rank,
        chain=chain,
        steps=steps,
        symmetry_identified=symmetry,
        bound=g * (genus - 1),
        consistent=final.holds,
        broken_steps=[s.name for s in steps if not s.holds],
    )
