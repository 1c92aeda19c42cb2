# models.py - Verdict vocabularies and report records
from pydantic import BaseModel, Field
from typing import List, Optional, Dict, Any
from enum import Enum

# ---------------------- ENUMS ----------------------

class Positivity(str, Enum):
    ample = "Ample"
    nef = "Nef"
    not_nef = "NotNef"
    unknown = "UnknownWithinBound"

class HiggsVerdict(str, Enum):
    unstable = "Unstable"
    semistable = "Semistable"
    unknown = "Unknown"

class W2Rule(str, Enum):
    obstruction_found = "ObstructionFound"
    no_obstruction = "NoObstruction"

class W2Verdict(str, Enum):
    not_w2_liftable = "NotW2Liftable"
    inconclusive = "Inconclusive"

class ReductionCase(str, Enum):
    case_i = "CaseI"
    case_ii = "CaseII"

class ReductionVerdict(str, Enum):
    mu_max_positive = "MuMaxPositive"
    degree_contradiction = "DegreeContradiction"
    contradiction_reached = "ContradictionReached"
    no_contradiction = "NoContradiction"
    step_limit = "StepLimit"
    oracle_exhausted = "OracleExhausted"

class RepeatPolicy(str, Enum):
    last = "last"
    cycle = "cycle"
    none = "none"

class DocumentKind(str, Enum):
    bundle = "bundle"
    graded_matrix = "graded_matrix"
    higgs = "higgs"
    graded_higgs = "graded_higgs"
    dieudonne = "dieudonne"
    lie_bundle = "lie_bundle"
    family = "family"
    reduction = "reduction"

# ---------------------- BUNDLE REPORTS ----------------------

class HNBlockReport(BaseModel):
    slope: str
    rank: int

class BundleReport(BaseModel):
    twists: Optional[List[int]] = None
    rank: int
    degree: int
    genus: int = 0
    slope: str
    hn: List[HNBlockReport]
    mu_max: str
    mu_min: str
    mu_bar_min: List[str] = Field(..., description="[lo, hi] bounds for the Frobenius-stabilized minimal slope")
    mu_bar_max: List[str]
    positivity: Positivity
    dual_positivity: Optional[Positivity] = None
    maximal_destabilizing: Optional[List[int]] = None
    assumed_semistable: bool = False

# ---------------------- HIGGS REPORTS ----------------------

class WitnessReport(BaseModel):
    twists: List[int]
    slope: str
    generators: List[List[Dict[str, Any]]] = []

class ArakelovStepReport(BaseModel):
    name: str
    lhs: str
    rhs: str
    holds: bool

class ArakelovReport(BaseModel):
    g: int
    genus: int
    hodge_degree: int
    kernel: Optional[List[int]] = None
    kernel_degree: int
    image_degree: int
    image_saturation_degree: int
    torsion_length: int
    cokernel_degree: int
    cokernel_rank: int
    chain: ArakelovStepReport
    steps: List[ArakelovStepReport]
    symmetry_identified: Optional[bool] = None
    bound: int
    consistent: bool
    broken_steps: List[str] = []

class HiggsReport(BaseModel):
    twists: List[int]
    slope: str
    nilpotent: bool
    verdict: HiggsVerdict
    complete: bool = True
    witness: Optional[WitnessReport] = None
    w2_rule: Optional[W2Rule] = None
    arakelov: Optional[ArakelovReport] = None

# ---------------------- GROUP SCHEME REPORTS ----------------------

class DieudonneReport(BaseModel):
    p: int
    m: int
    dim: int
    local_local: bool
    filtration: Optional[List[List[List[int]]]] = None
    failure: Optional[str] = None

class LieBundleReport(BaseModel):
    twists: List[int]
    constant: bool
    constant_pmat: Optional[List[List[int]]] = None
    witness: Optional[List[int]] = None

# ---------------------- ENGINE REPORTS ----------------------

class SubVerdict(BaseModel):
    name: str
    fires: bool
    detail: str
    certificate: Optional[Dict[str, Any]] = None

class W2Report(BaseModel):
    g: int
    genus: int
    prime: int
    hodge_degree: int
    mu_min: str
    positivity: Positivity
    higgs: Optional[SubVerdict] = None
    arakelov: SubVerdict
    trace: Optional[SubVerdict] = None
    verdict: W2Verdict

class ReductionStepReport(BaseModel):
    step: int
    case: Optional[ReductionCase] = None
    g: int
    budget_before: int
    consumed: int = 0
    budget_after: int
    kernel_rank: Optional[int] = None
    kernel_twists: Optional[List[int]] = None
    verdict: Optional[ReductionVerdict] = None

class ReductionReport(BaseModel):
    trace: List[ReductionStepReport]
    verdict: ReductionVerdict
    steps: int

class MoretBaillyReport(BaseModel):
    prime: int
    lie: List[int]
    hodge: List[int]
    hodge_degree: int
    lie_slope: str
    positivity: Positivity
    witness: WitnessReport
    arakelov: ArakelovReport
    reduction: ReductionReport
    subgroup_twists: List[int]
    subgroup_constant: bool
    lie_estimate: Dict[str, Any]
    w2: W2Report
    verdict: W2Verdict

class SweepReport(BaseModel):
    suite: str
    cases: int
    passed: int
    failed: int
    seed: Optional[int] = None
    failures: List[str] = []
