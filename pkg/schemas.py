# schemas.py - Pydantic schemas for the input documents
from pydantic import BaseModel, Field, field_validator, model_validator
from typing import List, Optional, Literal, Union, Annotated, Tuple
from fractions import Fraction

from bundles import AbstractBundle, HNProfile, SplitBundle
from exact_algebra import FieldSpec, Form, matrix_to_ints
from exceptions import DocumentError, InconsistentDescriptor
from groupschemes import DieudonneModule, RestrictedLieBundle
from higgs import GradedHiggs, HiggsBundle, OMEGA_TWIST
from engine import FamilyDescriptor, ListOracle, ReductionState
from models import RepeatPolicy
from sheafmaps import GradedMatrix

# ---------------------- SHARED PIECES ----------------------

class FieldDoc(BaseModel):
    p: int
    m: int = 1
    irreducible_poly: Optional[int] = Field(None, description="Integer encoding of the defining polynomial when m >= 2")

    class Config:
        json_schema_extra = {"example": {"p": 5, "m": 1, "irreducible_poly": None}}

    def to_domain(self) -> FieldSpec:
        return FieldSpec(self.p, self.m, self.irreducible_poly)

    @classmethod
    def from_domain(cls, field: FieldSpec) -> "FieldDoc":
        return cls(p=field.p, m=field.m, irreducible_poly=field.modulus())


class FormDoc(BaseModel):
    """Coefficients of U^d, U^(d-1)V, ..., V^d; degree null is the zero form"""
    degree: Optional[int] = None
    coeffs: List[int] = []

    @model_validator(mode="after")
    def check_length(self):
        if self.degree is None:
            if self.coeffs:
                raise ValueError("the zero form carries no coefficients")
        elif self.degree < 0:
            raise ValueError(f"form degree {self.degree} is negative")
        elif len(self.coeffs) != self.degree + 1:
            raise ValueError(f"a degree-{self.degree} form needs {self.degree + 1} coefficients, got {len(self.coeffs)}")
        return self

    def to_domain(self, field: FieldSpec) -> Form:
        if self.degree is None:
            return Form.zero(field)
        for c in self.coeffs:
            if field.m > 1 and not 0 <= c < field.order:
                raise DocumentError(f"coefficient {c} is not an element of F_{field.order}", "coeffs")
        return Form.from_coeffs(field, self.coeffs)

    @classmethod
    def from_domain(cls, form: Form) -> "FormDoc":
        if form.is_zero:
            return cls()
        return cls(degree=form.degree, coeffs=form.coeffs)


FormRows = List[List[FormDoc]]


def _forms(field: FieldSpec, rows: FormRows) -> Tuple[Tuple[Form, ...], ...]:
    return tuple(tuple(f.to_domain(field) for f in row) for row in rows)


def _form_rows(entries) -> FormRows:
    return [[FormDoc.from_domain(f) for f in row] for row in entries]


class HNBlockDoc(BaseModel):
    slope: str
    rank: int

    @field_validator("slope")
    @classmethod
    def parse_slope(cls, v: str) -> str:
        try:
            return str(Fraction(v))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{v!r} is not a rational number")

# ---------------------- BUNDLE DOCUMENTS ----------------------

class BundleDocument(BaseModel):
    """Either a split bundle on P^1 (twists) or numerical data over a curve of some genus"""
    kind: Literal["bundle"] = "bundle"
    twists: Optional[List[int]] = None
    rank: Optional[int] = None
    degree: Optional[int] = None
    genus: int = 0
    prime: int = 2
    hn: Optional[List[HNBlockDoc]] = None

    class Config:
        json_schema_extra = {"example": {"kind": "bundle", "twists": [-5, 1]}}

    @model_validator(mode="after")
    def check_shape(self):
        if self.twists is None and (self.rank is None or self.degree is None):
            raise ValueError("give either twists or rank and degree")
        if self.twists is not None and not self.twists:
            raise ValueError("a split bundle needs at least one twist")
        return self

    def to_domain(self) -> Union[SplitBundle, AbstractBundle]:
        if self.twists is not None:
            return SplitBundle(tuple(self.twists))
        hn = None if self.hn is None else HNProfile.from_pairs((b.slope, b.rank) for b in self.hn)
        return AbstractBundle(self.rank, self.degree, self.genus, self.prime, hn)

    @classmethod
    def from_domain(cls, bundle: Union[SplitBundle, AbstractBundle]) -> "BundleDocument":
        if isinstance(bundle, SplitBundle):
            return cls(twists=list(bundle.twists))
        hn = None
        if bundle.hn is not None:
            hn = [HNBlockDoc(slope=str(s), rank=r) for s, r in bundle.hn.pairs()]
        return cls(rank=bundle.rank, degree=bundle.degree, genus=bundle.genus, prime=bundle.prime, hn=hn)


class GradedMatrixDocument(BaseModel):
    kind: Literal["graded_matrix"] = "graded_matrix"
    field: FieldDoc
    source: List[int]
    target: List[int]
    entries: FormRows

    def to_domain(self) -> GradedMatrix:
        field = self.field.to_domain()
        return GradedMatrix(field, tuple(self.source), tuple(self.target), _forms(field, self.entries)).validate()

    @classmethod
    def from_domain(cls, M: GradedMatrix) -> "GradedMatrixDocument":
        return cls(
            field=FieldDoc.from_domain(M.field),
            source=list(M.source_twists),
            target=list(M.target_twists),
            entries=_form_rows(M.entries),
        )

# ---------------------- HIGGS DOCUMENTS ----------------------

class HiggsDocument(BaseModel):
    """theta: O(c_j) -> O(c_i - 2), row i column j"""
    kind: Literal["higgs"] = "higgs"
    field: FieldDoc
    twists: List[int]
    theta: FormRows

    def to_domain(self) -> HiggsBundle:
        field = self.field.to_domain()
        target = tuple(c + OMEGA_TWIST for c in self.twists)
        return HiggsBundle(GradedMatrix(field, tuple(self.twists), target, _forms(field, self.theta)))

    @classmethod
    def from_domain(cls, H: HiggsBundle) -> "HiggsDocument":
        return cls(field=FieldDoc.from_domain(H.field), twists=list(H.twists), theta=_form_rows(H.theta.entries))


class GradedHiggsDocument(BaseModel):
    """Hodge splitting and Kodaira-Spencer matrix; ks[i][j]: O(a_j) -> O(-a_i - 2)"""
    kind: Literal["graded_higgs"] = "graded_higgs"
    field: FieldDoc
    hodge: List[int]
    ks: FormRows
    check_symmetry: bool = True

    class Config:
        json_schema_extra = {
            "example": {
                "kind": "graded_higgs",
                "field": {"p": 5},
                "hodge": [5, -1],
                "ks": [[{"degree": None, "coeffs": []}, {"degree": None, "coeffs": []}],
                       [{"degree": None, "coeffs": []}, {"degree": 0, "coeffs": [1]}]],
            }
        }

    def to_domain(self) -> GradedHiggs:
        field = self.field.to_domain()
        return GradedHiggs(field, tuple(self.hodge), _forms(field, self.ks), self.check_symmetry)

    @classmethod
    def from_domain(cls, G: GradedHiggs) -> "GradedHiggsDocument":
        return cls(
            field=FieldDoc.from_domain(G.field),
            hodge=list(G.hodge_twists),
            ks=_form_rows(G.ks),
            check_symmetry=G.check_symmetry,
        )

# ---------------------- GROUP SCHEME DOCUMENTS ----------------------

class DieudonneDocument(BaseModel):
    kind: Literal["dieudonne"] = "dieudonne"
    field: FieldDoc
    F: List[List[int]]
    V: List[List[int]]

    class Config:
        json_schema_extra = {"example": {"kind": "dieudonne", "field": {"p": 2}, "F": [[0]], "V": [[0]]}}

    def to_domain(self) -> DieudonneModule:
        field = self.field.to_domain()
        for name, matrix in (("F", self.F), ("V", self.V)):
            if any(len(row) != len(matrix) for row in matrix):
                raise DocumentError("matrix must be square", name)
            if any(not 0 <= c < field.order for row in matrix for c in row):
                raise DocumentError(f"entries must lie in [0, {field.order})", name)
        return DieudonneModule.from_ints(field, self.F, self.V)

    @classmethod
    def from_domain(cls, M: DieudonneModule) -> "DieudonneDocument":
        return cls(field=FieldDoc.from_domain(M.field), F=matrix_to_ints(M.Fmat), V=matrix_to_ints(M.Vmat))


class EmbeddingDoc(BaseModel):
    target: List[int]
    entries: FormRows


class LieBundleDocument(BaseModel):
    """p-mapping O(p.a_j) -> O(a_i) with an optional embedding into an ambient bundle"""
    kind: Literal["lie_bundle"] = "lie_bundle"
    field: FieldDoc
    twists: List[int]
    pmap: FormRows
    embedding: Optional[EmbeddingDoc] = None

    def to_domain(self) -> RestrictedLieBundle:
        field = self.field.to_domain()
        source = tuple(field.p * a for a in self.twists)
        pmap = GradedMatrix(field, source, tuple(self.twists), _forms(field, self.pmap))
        embedding = None
        if self.embedding is not None:
            embedding = GradedMatrix(
                field, tuple(self.twists), tuple(self.embedding.target), _forms(field, self.embedding.entries)
            )
        return RestrictedLieBundle(pmap, embedding)

    @classmethod
    def from_domain(cls, L: RestrictedLieBundle) -> "LieBundleDocument":
        embedding = None
        if L.embedding is not None:
            embedding = EmbeddingDoc(target=list(L.embedding.target_twists), entries=_form_rows(L.embedding.entries))
        return cls(
            field=FieldDoc.from_domain(L.field),
            twists=list(L.twists),
            pmap=_form_rows(L.pmap.entries),
            embedding=embedding,
        )

# ---------------------- ENGINE DOCUMENTS ----------------------

class FamilyDocument(BaseModel):
    """Family descriptor; ks needs the Hodge twists in descending order"""
    kind: Literal["family"] = "family"
    g: int
    genus: int = 0
    prime: int
    hodge: BundleDocument
    non_isotrivial: bool
    ks: Optional[FormRows] = None
    field: Optional[FieldDoc] = None
    trace_nontrivial: Optional[bool] = None

    def to_domain(self) -> FamilyDescriptor:
        hodge = self.hodge.to_domain()
        graded = None
        if self.ks is not None:
            if self.hodge.twists is None:
                raise InconsistentDescriptor("Kodaira-Spencer data needs a split Hodge bundle")
            field = self.field.to_domain() if self.field is not None else FieldSpec(self.prime)
            graded = GradedHiggs(field, tuple(self.hodge.twists), _forms(field, self.ks))
        return FamilyDescriptor(
            g=self.g,
            genus=self.genus,
            prime=self.prime,
            hodge=hodge,
            non_isotrivial=self.non_isotrivial,
            graded=graded,
            trace_nontrivial=self.trace_nontrivial,
        )

    @classmethod
    def from_domain(cls, F: FamilyDescriptor) -> "FamilyDocument":
        ks = field = None
        if F.graded is not None:
            ks = _form_rows(F.graded.ks)
            field = FieldDoc.from_domain(F.graded.field)
        return cls(
            g=F.g,
            genus=F.genus,
            prime=F.prime,
            hodge=BundleDocument.from_domain(F.hodge),
            non_isotrivial=F.non_isotrivial,
            ks=ks,
            field=field,
            trace_nontrivial=F.trace_nontrivial,
        )


class OracleDoc(BaseModel):
    matrices: List[FormRows] = []
    policy: RepeatPolicy = RepeatPolicy.last


class ReductionDocument(BaseModel):
    """Lie map O^g -> lie_target with an inline oracle of follow-up Lie maps"""
    kind: Literal["reduction"] = "reduction"
    field: FieldDoc
    g: int
    budget_exp: int
    target: List[int]
    lie_phi: FormRows
    oracle: OracleDoc = OracleDoc()

    def _matrix(self, field: FieldSpec, rows: FormRows) -> GradedMatrix:
        return GradedMatrix(field, (0,) * self.g, tuple(self.target), _forms(field, rows))

    def to_domain(self) -> Tuple[ReductionState, ListOracle]:
        field = self.field.to_domain()
        state = ReductionState(self.g, self.budget_exp, self._matrix(field, self.lie_phi))
        oracle = ListOracle([self._matrix(field, rows) for rows in self.oracle.matrices], self.oracle.policy)
        return state, oracle

    @classmethod
    def from_domain(cls, S: ReductionState, O: ListOracle) -> "ReductionDocument":
        return cls(
            field=FieldDoc.from_domain(S.lie_phi.field),
            g=S.g,
            budget_exp=S.budget_exp,
            target=list(S.lie_phi.target_twists),
            lie_phi=_form_rows(S.lie_phi.entries),
            oracle=OracleDoc(matrices=[_form_rows(M.entries) for M in O.matrices], policy=O.policy),
        )


Document = Annotated[
    Union[
        BundleDocument,
        GradedMatrixDocument,
        HiggsDocument,
        GradedHiggsDocument,
        DieudonneDocument,
        LieBundleDocument,
        FamilyDocument,
        ReductionDocument,
    ],
    Field(discriminator="kind"),
]
