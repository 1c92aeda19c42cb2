# groupschemes.py - Dieudonne modules and restricted Lie bundles of height-one group schemes
"""
Contravariant, p-torsion Dieudonne modules over F_{p^m}: F(v) = Fmat . v^(p)
and V(v) = Vmat . v^(1/p). alpha_p is (k, 0, 0); the etale datum has F
bijective and the multiplicative one has V bijective.

Height-one group schemes over the projective line are modelled by their Lie
algebra bundle together with a p-mapping F^*L -> L, a graded matrix from the
twists p.a to a.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from bundles import SplitBundle
from exact_algebra import (
    FieldSpec,
    Form,
    field_matrix,
    frobenius,
    matrix_to_ints,
    poly_coefficient,
    poly_is_zero,
    rat_solve,
)
from exceptions import (
    FVNotZero,
    InternalInvariantViolation,
    InvalidBundle,
    NotConstant,
    NotEquivariant,
    NotLocalLocal,
    NotSaturated,
    NotSlopeZero,
    NotTrivialAmbient,
)
from sheafmaps import GradedMatrix, Subsheaf, kernel_bundle, saturate

logger = logging.getLogger(__name__)


def _stack(GF, blocks):
    return np.vstack([b.view(np.ndarray) for b in blocks]).view(GF)


def _is_zero(matrix) -> bool:
    return not np.any(matrix.view(np.ndarray))


# ---------------------- DIEUDONNE MODULES ----------------------

@dataclass(frozen=True, eq=False)
class DieudonneModule:
    field: FieldSpec
    Fmat: object
    Vmat: object

    def __post_init__(self):
        if self.Fmat.shape != (self.dim, self.dim) or self.Vmat.shape != (self.dim, self.dim):
            raise InvalidBundle(f"F and V must be square of the same size, got {self.Fmat.shape} and {self.Vmat.shape}")
        if self.dim and not _is_zero(self.Fmat @ self.sigma(self.Vmat)):
            raise FVNotZero("FV")
        if self.dim and not _is_zero(self.Vmat @ self.sigma(self.Fmat, -1)):
            raise FVNotZero("VF")

    @classmethod
    def from_ints(cls, field: FieldSpec, F: Sequence[Sequence[int]], V: Sequence[Sequence[int]]) -> "DieudonneModule":
        dim = len(F)
        return cls(field, field_matrix(field, F, (dim, dim)), field_matrix(field, V, (dim, dim)))

    @classmethod
    def alpha_p(cls, field: FieldSpec) -> "DieudonneModule":
        return cls.from_ints(field, [[0]], [[0]])

    @classmethod
    def mu_p(cls, field: FieldSpec) -> "DieudonneModule":
        return cls.from_ints(field, [[0]], [[1]])

    @classmethod
    def constant_z_p(cls, field: FieldSpec) -> "DieudonneModule":
        return cls.from_ints(field, [[1]], [[0]])

    @property
    def dim(self) -> int:
        return self.Fmat.shape[0]

    def sigma(self, x, e: int = 1):
        return frobenius(x, self.field, e)

    def F(self, v):
        return self.Fmat @ self.sigma(v)

    def V(self, v):
        return self.Vmat @ self.sigma(v, -1)

    def F_power(self, e: int):
        """Matrix of F^e acting on sigma^e(v): Fmat . sigma(Fmat) ... sigma^(e-1)(Fmat)"""
        GF = self.field.GF
        out = GF.Identity(self.dim)
        for k in range(e):
            out = out @ self.sigma(self.Fmat, k)
        return out

    def V_power(self, e: int):
        GF = self.field.GF
        out = GF.Identity(self.dim)
        for k in range(e):
            out = out @ self.sigma(self.Vmat, -k)
        return out

    def kernel_F(self):
        """Ker F = null(sigma^-1(Fmat)), a genuine subspace"""
        return self.sigma(self.Fmat, -1).null_space()

    def kernel_V(self):
        return self.sigma(self.Vmat, 1).null_space()


def local_local_test(M: DieudonneModule) -> bool:
    """F and V both nilpotent"""
    if M.dim == 0:
        return True
    return _is_zero(M.F_power(M.dim)) and _is_zero(M.V_power(M.dim))


def _completion(GF, n_vec):
    """Invertible matrix with first column n_vec, completed by unit vectors"""
    d = n_vec.shape[0]
    pivot = next(i for i in range(d) if int(n_vec[i]) != 0)
    B = GF.Zeros((d, d))
    B[:, 0] = n_vec
    col = 1
    for i in range(d):
        if i == pivot:
            continue
        B[i, col] = 1
        col += 1
    return B


def adapted_basis(M: DieudonneModule):
    """Basis P whose first k columns span the k-th step of an alpha_p flag"""
    GF = M.field.GF
    d = M.dim
    P = GF.Identity(d)
    for k in range(d):
        P_inv = np.linalg.inv(P).view(GF)
        F_local = (P_inv @ M.Fmat @ M.sigma(P)).view(GF)[k:, k:]
        V_local = (P_inv @ M.Vmat @ M.sigma(P, -1)).view(GF)[k:, k:]
        conditions = _stack(GF, [M.sigma(F_local, -1), M.sigma(V_local, 1)])
        common = conditions.null_space()
        if common.shape[0] == 0:
            raise NotLocalLocal(k)
        chosen = common.row_reduce()[0]
        B = _completion(GF, chosen)
        tail = (P[:, k:] @ B).view(GF)
        P[:, k:] = tail
        logger.debug("alpha_p step %d: picked %s", k, [int(x) for x in chosen])
    return P


def alpha_filtration(M: DieudonneModule) -> List[List[List[int]]]:
    """Flag 0 < M_1 < ... < M_dim with alpha_p graded pieces, as row-reduced bases"""
    P = adapted_basis(M)
    return [matrix_to_ints(P[:, :k].T.row_reduce()[:k]) for k in range(1, M.dim + 1)]


def graded_pieces(M: DieudonneModule) -> List[Tuple[int, int]]:
    """(F, V) on each one-dimensional graded piece of the flag"""
    GF = M.field.GF
    P = adapted_basis(M)
    if M.dim == 0:
        return []
    P_inv = np.linalg.inv(P).view(GF)
    F_adapted = (P_inv @ M.Fmat @ M.sigma(P)).view(GF)
    V_adapted = (P_inv @ M.Vmat @ M.sigma(P, -1)).view(GF)
    return [(int(F_adapted[k, k]), int(V_adapted[k, k])) for k in range(M.dim)]


# ---------------------- RESTRICTED LIE BUNDLES ----------------------

@dataclass(frozen=True, eq=False)
class RestrictedLieBundle:
    """Bundle O(a) with p-mapping F^*O(a) = O(p.a) -> O(a); the bracket is zero"""

    pmap: GradedMatrix
    embedding: Optional[GradedMatrix] = None

    def __post_init__(self):
        p = self.pmap.field.p
        expected = tuple(p * a for a in self.pmap.target_twists)
        if self.pmap.source_twists != expected:
            raise InvalidBundle(
                f"p-mapping must go from {list(expected)} to {list(self.pmap.target_twists)}, "
                f"got source {list(self.pmap.source_twists)}"
            )
        self.pmap.validate()
        if self.embedding is not None:
            self.embedding.validate()
            if self.embedding.source_twists != self.twists:
                raise InvalidBundle("embedding does not start at the Lie bundle")

    @classmethod
    def zero_pmap(cls, field: FieldSpec, twists: Sequence[int], embedding: Optional[GradedMatrix] = None) -> "RestrictedLieBundle":
        return cls(GradedMatrix.zero(field, tuple(field.p * a for a in twists), tuple(twists)), embedding)

    @property
    def field(self) -> FieldSpec:
        return self.pmap.field

    @property
    def twists(self) -> Tuple[int, ...]:
        return self.pmap.target_twists

    @property
    def bundle(self) -> SplitBundle:
        return SplitBundle(self.twists)

    @property
    def is_constant(self) -> bool:
        return all(a == 0 for a in self.twists)


def is_equivariant(f: GradedMatrix, L1: RestrictedLieBundle, L2: RestrictedLieBundle) -> bool:
    """f . pmap1 == pmap2 . F^*f"""
    return f @ L1.pmap == L2.pmap @ f.frobenius_twist(1)


def lie_kernel(f: GradedMatrix, L1: RestrictedLieBundle, L2: RestrictedLieBundle) -> RestrictedLieBundle:
    """Saturated kernel of an equivariant morphism with its induced p-mapping"""
    f.validate()
    if f.source_twists != L1.twists or f.target_twists != L2.twists:
        raise InvalidBundle("morphism does not run between the given Lie bundles")
    if not is_equivariant(f, L1, L2):
        raise NotEquivariant()
    kernel, _ = kernel_bundle(f)
    k = kernel.generators
    field = f.field
    if k.ncols == 0:
        return RestrictedLieBundle.zero_pmap(field, (), k)
    rhs = L1.pmap @ k.frobenius_twist(1)
    solution = rat_solve(k.to_rat(), rhs.to_rat())
    if solution is None or not all(x.is_polynomial for row in solution for x in row):
        raise InternalInvariantViolation("kernel is not stable under the p-mapping")
    polys = [[x.num for x in row] for row in solution]
    induced = GradedMatrix.from_polys(field, rhs.source_twists, k.source_twists, polys)
    logger.debug("Lie kernel %s with induced p-mapping", list(k.source_twists))
    return RestrictedLieBundle(induced, k)


# ---------------------- CONSTANT GROUP SCHEMES ----------------------

@dataclass(frozen=True, eq=False)
class ConstantGroupDatum:
    """Height-one group scheme over k: x -> pmat . x^(p)"""

    field: FieldSpec
    pmat: object

    @property
    def dim(self) -> int:
        return self.pmat.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConstantGroupDatum):
            return NotImplemented
        return self.field == other.field and matrix_to_ints(self.pmat) == matrix_to_ints(other.pmat)

    def __hash__(self) -> int:
        return hash((self.field, tuple(map(tuple, matrix_to_ints(self.pmat)))))


def constancy_descend(L: RestrictedLieBundle) -> ConstantGroupDatum:
    if not L.is_constant:
        raise NotConstant(L.bundle.twists)
    field = L.field
    n = len(L.twists)
    GF = field.GF
    pmat = GF.Zeros((n, n))
    for i, row in enumerate(L.pmap.entries):
        for j, entry in enumerate(row):
            if not entry.is_zero:
                pmat[i, j] = GF(entry.coeffs[0])
    return ConstantGroupDatum(field, pmat)


def constant_to_lie_bundle(D: ConstantGroupDatum) -> RestrictedLieBundle:
    ints = matrix_to_ints(D.pmat)
    return RestrictedLieBundle(GradedMatrix.constant(D.field, 0, ints) if D.dim else GradedMatrix.zero(D.field, (), ()))


def is_constant_morphism(f, D1: ConstantGroupDatum, D2: ConstantGroupDatum) -> bool:
    """f . pmat1 == pmat2 . f^(p)"""
    sigma_f = frobenius(f, D1.field, 1)
    return not np.any(((f @ D1.pmat) - (D2.pmat @ sigma_f)).view(np.ndarray))


def compose_constant(g, f, D1: ConstantGroupDatum, D2: ConstantGroupDatum, D3: ConstantGroupDatum):
    """g after f; both must intertwine the p-mappings"""
    if not is_constant_morphism(f, D1, D2) or not is_constant_morphism(g, D2, D3):
        raise NotEquivariant()
    return (g @ f).view(D1.field.GF)


def frobenius_factors(lie_map: GradedMatrix) -> bool:
    """A morphism of height-one data factors through relative Frobenius iff its Lie map vanishes"""
    return lie_map.validate().is_zero()


# ---------------------- SLOPE-ZERO SUBBUNDLES ----------------------

@dataclass(frozen=True)
class Slope0Split:
    generators: object
    complement: object

    @property
    def rank(self) -> int:
        return self.generators.shape[1]


def _constant_sections(S: Subsheaf):
    """Constant vectors lying in S: null space of the coefficient equations of the annihilator"""
    field = S.field
    GF = field.GF
    n = S.generators.nrows
    annihilator = S.annihilator()
    equations = []
    for y in annihilator:
        top = max((x.degree for x in y if not poly_is_zero(x)), default=-1)
        for s in range(top + 1):
            equations.append([poly_coefficient(x, s) if not poly_is_zero(x) else 0 for x in y])
    if not equations:
        return GF.Identity(n)
    return GF(np.array(equations, dtype=int)).null_space()


def free_slope0_split(S: Subsheaf) -> Slope0Split:
    """Constant generators of a slope-0 saturated subsheaf of O^n, with a constant complement"""
    if any(a != 0 for a in S.ambient_twists):
        raise NotTrivialAmbient(S.ambient_twists)
    if not S.saturated:
        sat = saturate(S)
        if sat.degree != S.degree:
            raise NotSaturated()
        S = sat
    if S.degree != 0:
        raise NotSlopeZero(S.degree)
    field = S.field
    GF = field.GF
    n, r = S.generators.nrows, S.rank
    constants = _constant_sections(S)
    if constants.shape[0] != r:
        raise InternalInvariantViolation(f"found {constants.shape[0]} constant sections for a rank-{r} subbundle")
    reduced = constants.row_reduce() if r else constants
    pivots = []
    for row in range(r):
        pivots.append(next(j for j in range(n) if int(reduced[row, j]) != 0))
    rest = [j for j in range(n) if j not in pivots]
    complement = GF.Zeros((n, len(rest)))
    for col, j in enumerate(rest):
        complement[j, col] = 1
    generators = reduced.T if r else GF.Zeros((n, 0))
    if n and np.linalg.matrix_rank(_stack(GF, [generators.T, complement.T])) != n:
        raise InternalInvariantViolation("constant complement does not split the subbundle")
    return Slope0Split(generators, complement)


# ---------------------- FIXTURES ----------------------

def moret_bailly_H(p: int) -> RestrictedLieBundle:
    """O(-1) in O^2 cut out by U.alpha - V.beta, generated by (V, -U), zero p-mapping"""
    field = FieldSpec(p)
    gen = GradedMatrix(
        field,
        (-1,),
        (0, 0),
        ((Form.V(field),), (-Form.U(field),)),
    )
    return RestrictedLieBundle.zero_pmap(field, (-1,), gen)
