# exceptions.py - Error hierarchy shared by the library and the CLI
from typing import Any, Dict, Optional, Sequence, Union


class CalculusError(Exception):
    """Base error: carries a process exit code and a human-readable detail"""

    exit_code: int = 2

    def __init__(self, detail: str, exit_code: Optional[int] = None, **context: Any):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code
        self.context: Dict[str, Any] = context


# ---------------------- EXACT ALGEBRA ----------------------

class AllZero(CalculusError):
    def __init__(self):
        super().__init__("gcd requested of forms that are all zero")


# ---------------------- BUNDLES ----------------------

class ZeroRank(CalculusError):
    def __init__(self, what: str = "bundle"):
        super().__init__(f"{what} has rank 0; slope is undefined")


class InvalidBundle(CalculusError):
    pass


class InvalidCover(CalculusError):
    def __init__(self, genus: int, degree: int):
        super().__init__(
            f"no etale cover of degree {degree} over a genus-{genus} curve",
            genus=genus,
            degree=degree,
        )


# ---------------------- MAPS OF BUNDLES ----------------------

class DegreeMismatch(CalculusError):
    def __init__(self, i: int, j: int, expected: int, found: Optional[int]):
        super().__init__(
            f"entry ({i}, {j}) has degree {found}, expected {expected}"
            + (" (negative degree forces zero)" if expected < 0 else ""),
            row=i,
            column=j,
            expected=expected,
            found=found,
        )
        self.i = i
        self.j = j


class NotSymmetric(CalculusError):
    def __init__(self, i: int, j: int):
        super().__init__(f"Kodaira-Spencer matrix is not symmetric at ({i}, {j})", row=i, column=j)


class NotSaturated(CalculusError):
    def __init__(self):
        super().__init__("subsheaf is not saturated")


class NotSlopeZero(CalculusError):
    def __init__(self, degree: int):
        super().__init__(f"subsheaf has degree {degree}, expected slope 0", degree=degree)


class NotTrivialAmbient(CalculusError):
    def __init__(self, twists: Sequence[int]):
        super().__init__(f"ambient bundle {list(twists)} is not trivial", twists=list(twists))


# ---------------------- GROUP SCHEMES ----------------------

class FVNotZero(CalculusError):
    def __init__(self, which: str):
        super().__init__(f"{which} is not zero; not a p-torsion Dieudonne module", composite=which)


class NotLocalLocal(CalculusError):
    def __init__(self, step: int):
        super().__init__(
            f"Ker(F) and Ker(V) meet trivially after {step} steps; not local-local",
            step=step,
        )


class NotEquivariant(CalculusError):
    def __init__(self):
        super().__init__("morphism does not commute with the p-mappings")


class NotConstant(CalculusError):
    def __init__(self, twists: Sequence[int]):
        super().__init__(
            f"splitting type {list(twists)} is not trivial; restricted Lie bundle is not constant",
            witness=list(twists),
        )
        self.witness = list(twists)


# ---------------------- ENGINE ----------------------

class InconsistentDescriptor(CalculusError):
    pass


class OracleDegreeMismatch(CalculusError):
    def __init__(self, step: int, cause: Union[DegreeMismatch, str]):
        reason = cause.detail if isinstance(cause, DegreeMismatch) else cause
        super().__init__(f"oracle matrix at step {step}: {reason}", step=step)
        self.step = step
        self.cause = cause


class InternalInvariantViolation(CalculusError):
    exit_code = 3


class HomVanishingViolated(InternalInvariantViolation):
    def __init__(self, rows: Sequence[int]):
        super().__init__(
            f"Lie map has nonzero rows {list(rows)} into negative twists",
            rows=list(rows),
        )


# ---------------------- DOCUMENTS ----------------------

class DocumentError(CalculusError):
    def __init__(self, detail: str, field: Optional[str] = None):
        super().__init__(detail if field is None else f"{field}: {detail}", field=field)


class InvalidField(CalculusError):
    def __init__(self, p: int, m: int):
        super().__init__(f"F_(p^m) needs a prime p and m >= 1, got p={p}, m={m}", p=p, m=m)
