# engine.py - Family descriptors, the W2 obstruction report and the isogeny reduction loop
"""
Theorem-level checkers built from the bundle, Higgs and group-scheme layers.

The reduction loop never materializes an isogeny. It tracks the Lie map of
phi: (B0 x C) -> X together with an exponent bound on the order of Ker(phi),
and asks an oracle for the next Lie map after every step.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Protocol, Union

import config
from bundles import AbstractBundle, SplitBundle, mu_max, mu_min, positivity_verdict
from exact_algebra import FieldSpec, Form
from exceptions import (
    DegreeMismatch,
    HomVanishingViolated,
    InconsistentDescriptor,
    OracleDegreeMismatch,
)
from groupschemes import free_slope0_split, lie_kernel, moret_bailly_H, RestrictedLieBundle
from higgs import GradedHiggs, arakelov_pipeline, w2_rule
from models import (
    Positivity,
    ReductionCase,
    ReductionReport,
    ReductionStepReport,
    ReductionVerdict,
    RepeatPolicy,
    SubVerdict,
    W2Report,
    W2Rule,
    W2Verdict,
)
from sheafmaps import GradedMatrix, kernel_bundle

logger = logging.getLogger(__name__)


# ---------------------- FAMILY DESCRIPTORS ----------------------

@dataclass(frozen=True, eq=False)
class FamilyDescriptor:
    g: int
    genus: int
    prime: int
    hodge: Union[SplitBundle, AbstractBundle]
    non_isotrivial: bool
    graded: Optional[GradedHiggs] = None
    trace_nontrivial: Optional[bool] = None

    def __post_init__(self):
        FieldSpec(self.prime)
        if self.g < 1:
            raise InconsistentDescriptor(f"relative dimension {self.g} must be positive")
        if self.genus < 0:
            raise InconsistentDescriptor(f"base genus {self.genus} is negative")
        if self.hodge.rank != self.g:
            raise InconsistentDescriptor(f"Hodge bundle has rank {self.hodge.rank}, expected {self.g}")
        if isinstance(self.hodge, AbstractBundle) and self.hodge.genus != self.genus:
            raise InconsistentDescriptor("Hodge bundle lives over a curve of another genus")
        if (self.hodge.degree > 0) != self.non_isotrivial:
            raise InconsistentDescriptor(
                f"Hodge degree {self.hodge.degree} contradicts non_isotrivial={self.non_isotrivial}: "
                "the degree is positive exactly for non-isotrivial families"
            )
        if self.graded is not None:
            if not isinstance(self.hodge, SplitBundle) or self.graded.hodge_twists != self.hodge.twists:
                raise InconsistentDescriptor("Kodaira-Spencer data does not match the Hodge splitting")
            if self.graded.field.p != self.prime:
                raise InconsistentDescriptor("Kodaira-Spencer data lives in another characteristic")

    @property
    def lie(self) -> Union[SplitBundle, AbstractBundle]:
        if isinstance(self.hodge, SplitBundle):
            return SplitBundle(tuple(-a for a in self.hodge.twists))
        return AbstractBundle(self.hodge.rank, -self.hodge.degree, self.hodge.genus, self.hodge.prime)


def moret_bailly_family(p: int) -> FamilyDescriptor:
    """g = 2 over P^1 with Lie algebra O(-p) + O(1)"""
    field = FieldSpec(p)
    hodge = SplitBundle.of(p, -1)
    z = Form.zero(field)
    ks = ((z, z), (z, Form.constant(field, 1)))
    graded = GradedHiggs(field, hodge.twists, ks)
    return FamilyDescriptor(g=2, genus=0, prime=p, hodge=hodge, non_isotrivial=True, graded=graded)


def low_genus_nonliftable(genus: int, non_isotrivial: bool) -> bool:
    """Over genus 0 or 1 a positive Hodge degree already breaks deg <= g(genus - 1)"""
    return non_isotrivial and genus <= 1


def _witness_certificate(witness) -> Dict[str, Any]:
    return {"twists": list(witness.twists), "slope": str(witness.slope), "rank": witness.rank}


def w2_obstruction_report(F: FamilyDescriptor) -> W2Report:
    hodge = F.hodge
    positivity = positivity_verdict(hodge)
    low = mu_min(hodge)

    higgs_part: Optional[SubVerdict] = None
    if F.graded is not None:
        rule, witness = w2_rule(F.graded)
        higgs_part = SubVerdict(
            name="higgs",
            fires=rule == W2Rule.obstruction_found,
            detail=rule.value,
            certificate=None if witness is None else _witness_certificate(witness),
        )

    bound = F.g * (F.genus - 1)
    certificate: Dict[str, Any] = {"hodge_degree": hodge.degree, "bound": bound}
    if F.graded is not None:
        certificate["pipeline"] = arakelov_pipeline(F.graded, F.genus).model_dump()
    arakelov_part = SubVerdict(
        name="arakelov",
        fires=hodge.degree > bound,
        detail=f"deg {hodge.degree} {'>' if hodge.degree > bound else '<='} {bound}",
        certificate=certificate,
    )

    trace_part: Optional[SubVerdict] = None
    if F.trace_nontrivial and F.non_isotrivial:
        if positivity in (Positivity.nef, Positivity.ample):
            raise InconsistentDescriptor(
                f"nontrivial trace forces a non-nef Hodge bundle, but the data says {positivity.value}"
            )
        trace_part = SubVerdict(
            name="trace",
            fires=False,
            detail=f"expect NotNef; observed {positivity.value}",
            certificate={"mu_min": str(low)},
        )

    fired = (higgs_part is not None and higgs_part.fires) or arakelov_part.fires
    return W2Report(
        g=F.g,
        genus=F.genus,
        prime=F.prime,
        hodge_degree=hodge.degree,
        mu_min=str(low),
        positivity=positivity,
        higgs=higgs_part,
        arakelov=arakelov_part,
        trace=trace_part,
        verdict=W2Verdict.not_w2_liftable if fired else W2Verdict.inconclusive,
    )


# ---------------------- REDUCTION LOOP ----------------------

@dataclass(frozen=True, eq=False)
class ReductionState:
    g: int
    budget_exp: int
    lie_phi: GradedMatrix

    def __post_init__(self):
        if self.budget_exp < 0:
            raise InconsistentDescriptor(f"budget exponent {self.budget_exp} is negative")
        if self.lie_phi.source_twists != (0,) * self.g:
            raise InconsistentDescriptor(f"Lie map must start at the trivial bundle of rank {self.g}")
        if self.lie_phi.nrows != self.g:
            raise InconsistentDescriptor(f"Lie target has rank {self.lie_phi.nrows}, expected {self.g}")
        self.lie_phi.validate()

    @property
    def lie_target(self) -> SplitBundle:
        return self.lie_phi.target

    def with_matrix(self, matrix: GradedMatrix, budget_exp: int) -> "ReductionState":
        return ReductionState(self.g, budget_exp, matrix)


class IsogenyOracle(Protocol):
    def next_matrix(self, step: int, state: ReductionState) -> Optional[GradedMatrix]:
        """Lie map after ``step`` steps; None when the oracle has nothing more to say"""
        ...


@dataclass
class ListOracle:
    matrices: List[GradedMatrix]
    policy: RepeatPolicy = RepeatPolicy.last
    _calls: int = field(default=0, init=False)

    def next_matrix(self, step: int, state: ReductionState) -> Optional[GradedMatrix]:
        index = self._calls
        self._calls += 1
        if index < len(self.matrices):
            return self.matrices[index]
        if not self.matrices or self.policy == RepeatPolicy.none:
            return None
        if self.policy == RepeatPolicy.cycle:
            return self.matrices[index % len(self.matrices)]
        return self.matrices[-1]


@dataclass(frozen=True)
class StepOutcome:
    record: ReductionStepReport
    state: Optional[ReductionState] = None
    verdict: Optional[ReductionVerdict] = None


def _fetch(O: IsogenyOracle, step: int, state: ReductionState, budget: int) -> Optional[ReductionState]:
    matrix = O.next_matrix(step, state)
    if matrix is None:
        return None
    if matrix.source_twists != state.lie_phi.source_twists or matrix.target_twists != state.lie_phi.target_twists:
        raise OracleDegreeMismatch(
            step,
            f"expected a map {list(state.lie_phi.source_twists)} -> {list(state.lie_phi.target_twists)}, "
            f"got {list(matrix.source_twists)} -> {list(matrix.target_twists)}",
        )
    try:
        matrix.validate()
    except DegreeMismatch as cause:
        raise OracleDegreeMismatch(step, cause) from cause
    return state.with_matrix(matrix, budget)


def reduction_step(S: ReductionState, O: IsogenyOracle, step: int = 1) -> StepOutcome:
    budget = S.budget_exp
    base = dict(step=step, g=S.g, budget_before=budget)
    if mu_max(S.lie_target) > 0:
        record = ReductionStepReport(**base, budget_after=budget, verdict=ReductionVerdict.mu_max_positive)
        return StepOutcome(record, verdict=ReductionVerdict.mu_max_positive)

    if S.lie_phi.is_zero():
        # Case I: phi factors through the relative Frobenius, Ker F has order p^g
        consumed = S.g
        case = ReductionCase.case_i
        extra: Dict[str, Any] = {}
    else:
        case = ReductionCase.case_ii
        negative = [i for i, b in enumerate(S.lie_phi.target_twists) if b < 0]
        offending = [i for i in negative if any(not f.is_zero for f in S.lie_phi.entries[i])]
        if offending:
            raise HomVanishingViolated(offending)
        kernel, kernel_type = kernel_bundle(S.lie_phi)
        split = free_slope0_split(kernel)
        consumed = split.rank
        extra = {"kernel_rank": split.rank, "kernel_twists": list(kernel_type.twists)}
        if consumed == 0:
            verdict = (
                ReductionVerdict.degree_contradiction if S.lie_target.degree < 0 else ReductionVerdict.no_contradiction
            )
            record = ReductionStepReport(**base, case=case, budget_after=budget, verdict=verdict, **extra)
            return StepOutcome(record, verdict=verdict)

    after = budget - consumed
    if after < 0:
        record = ReductionStepReport(
            **base, case=case, consumed=consumed, budget_after=after,
            verdict=ReductionVerdict.contradiction_reached, **extra
        )
        return StepOutcome(record, verdict=ReductionVerdict.contradiction_reached)
    record = ReductionStepReport(**base, case=case, consumed=consumed, budget_after=after, **extra)
    logger.debug("step %d: %s consumed %d, budget %d -> %d", step, case.value, consumed, budget, after)
    next_state = _fetch(O, step, S, after)
    if next_state is None:
        return StepOutcome(record, verdict=ReductionVerdict.oracle_exhausted)
    return StepOutcome(record, state=next_state)


def reduction_run(S: ReductionState, O: IsogenyOracle, max_steps: int = config.DEFAULT_MAX_STEPS) -> ReductionReport:
    if max_steps < 1:
        raise InconsistentDescriptor(f"max_steps must be at least 1, got {max_steps}")
    trace: List[ReductionStepReport] = []
    state = S
    for step in range(1, max_steps + 1):
        outcome = reduction_step(state, O, step)
        trace.append(outcome.record)
        if outcome.verdict is not None:
            return ReductionReport(trace=trace, verdict=outcome.verdict, steps=len(trace))
        state = outcome.state
    return ReductionReport(trace=trace, verdict=ReductionVerdict.step_limit, steps=len(trace))


# ---------------------- MORET-BAILLY FIXTURE ----------------------

def moret_bailly_lie_map(p: int) -> GradedMatrix:
    """Lie map O^2 -> O(-p) + O(1) of the quotient isogeny; second row (U V)"""
    field = FieldSpec(p)
    z = Form.zero(field)
    return GradedMatrix(field, (0, 0), (-p, 1), ((z, z), (Form.U(field), Form.V(field))))


def moret_bailly_state(p: int, budget_exp: int = 2) -> ReductionState:
    return ReductionState(2, budget_exp, moret_bailly_lie_map(p))


def moret_bailly_lie_estimate(p: int) -> Dict[str, Any]:
    """Lie = O(n) + O(m), n < 0, n + m < 0, and a non-constant kernel of the Lie map force m >= 1"""
    phi = moret_bailly_lie_map(p)
    n, m = sorted(phi.target_twists)
    field = phi.field
    ambient = RestrictedLieBundle.zero_pmap(field, phi.source_twists)
    target = RestrictedLieBundle.zero_pmap(field, phi.target_twists)
    kernel = lie_kernel(phi, ambient, target)
    subgroup = moret_bailly_H(p)
    return {
        "n": n,
        "m": m,
        "n_negative": n < 0,
        "total_negative": n + m < 0,
        "kernel_twists": list(kernel.twists),
        "kernel_constant": kernel.is_constant,
        "kernel_is_subgroup": kernel.twists == subgroup.twists,
        "m_positive": m >= 1,
        "estimate_holds": kernel.is_constant or m >= 1,
    }


# ---------------------- ZARKHIN ----------------------

@dataclass(frozen=True)
class ZarkhinRecord:
    g: int
    dim: int
    principally_polarized: bool = True
    hodge_degree: Optional[int] = None


def zarkhin(g: int, hodge_degree: Optional[int] = None, dual_hodge_degree: Optional[int] = None) -> ZarkhinRecord:
    """X^4 x (X^t)^4 is principally polarized of relative dimension 8g"""
    if g < 1:
        raise InconsistentDescriptor(f"relative dimension {g} must be positive")
    total = None
    if hodge_degree is not None and dual_hodge_degree is not None:
        total = 4 * hodge_degree + 4 * dual_hodge_degree
    return ZarkhinRecord(g=g, dim=8 * g, hodge_degree=total)
