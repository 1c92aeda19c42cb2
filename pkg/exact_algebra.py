# exact_algebra.py - Finite fields, binary forms and linear algebra over k(t)
"""
Exact arithmetic shared by every other module.

Fields are ``galois`` field classes for F_{p^m}. A binary form of degree d in
the homogeneous coordinates U, V is stored through its dehomogenization at
U = 1, a ``galois.Poly`` in t = V/U of degree at most d; the coefficient of
t^i is the coefficient of U^(d-i) V^i. The distinguished ZERO form carries no
degree.

Linear algebra over the function field k(t) is done fraction-free: matrices
are cleared to polynomial matrices and reduced by unimodular column
operations over k[t], so kernels come out as saturated polynomial bases.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import galois
import numpy as np

from exceptions import AllZero, InvalidField

logger = logging.getLogger(__name__)

Poly = galois.Poly
PolyMatrix = List[List[Poly]]


# ---------------------- FIELDS ----------------------

@lru_cache(maxsize=None)
def galois_field(p: int, m: int = 1, irreducible_poly: Optional[int] = None):
    """Cached galois field class for F_{p^m}"""
    if irreducible_poly is None or m == 1:
        return galois.GF(p**m)
    return galois.GF(p**m, irreducible_poly=irreducible_poly)


@dataclass(frozen=True)
class FieldSpec:
    """Field descriptor (p, m); the irreducible polynomial pins the integer encoding when m >= 2"""

    p: int
    m: int = 1
    irreducible_poly: Optional[int] = None

    def __post_init__(self):
        if self.m < 1 or self.p < 2 or not galois.is_prime(self.p):
            raise InvalidField(self.p, self.m)

    @property
    def order(self) -> int:
        return self.p**self.m

    @property
    def GF(self):
        return galois_field(self.p, self.m, self.irreducible_poly)

    def modulus(self) -> Optional[int]:
        """Integer encoding of the defining polynomial (None over the prime field)"""
        if self.m == 1:
            return None
        return int(self.GF.irreducible_poly)

    def elem(self, value: int):
        """Field element from its integer encoding"""
        return self.GF(value % self.order if self.m == 1 else value)

    def scalar(self, n: int):
        """Image of the integer n in the prime field"""
        return self.GF(n % self.p)

    def zero(self):
        return self.GF(0)

    def one(self):
        return self.GF(1)


def frobenius(x, field: FieldSpec, e: int = 1):
    """x -> x^(p^e) entrywise; e may be negative (inverse Frobenius), the field is perfect"""
    k = e % field.m
    if k == 0:
        return x
    return x ** (field.p**k)


def pth_root(x, field: FieldSpec, e: int = 1):
    return frobenius(x, field, -e)


# ---------------------- POLYNOMIAL HELPERS ----------------------

def poly_zero(field: FieldSpec) -> Poly:
    return Poly.Zero(field=field.GF)


def poly_one(field: FieldSpec) -> Poly:
    return Poly.One(field=field.GF)


def poly_monomial(field: FieldSpec, k: int, c=1) -> Poly:
    """c t^k"""
    return Poly([int(c)] + [0] * k, field=field.GF)


def poly_from_ascending(field: FieldSpec, coeffs: Sequence[int]) -> Poly:
    if len(coeffs) == 0:
        return poly_zero(field)
    return Poly([int(c) for c in reversed(coeffs)], field=field.GF)


def poly_is_zero(poly: Poly) -> bool:
    return poly.degree == 0 and int(poly.coeffs[0]) == 0


def poly_ascending(poly: Poly) -> List[int]:
    if poly_is_zero(poly):
        return []
    return [int(c) for c in poly.coeffs[::-1]]


def poly_coefficient(poly: Poly, i: int) -> int:
    if i < 0 or i > poly.degree:
        return 0
    return int(poly.coeffs[poly.degree - i])


def poly_leading(poly: Poly):
    return poly.coeffs[0]


def poly_monic(poly: Poly) -> Poly:
    if poly_is_zero(poly):
        return poly
    lead = poly_leading(poly)
    if int(lead) == 1:
        return poly
    return poly_scale(poly, lead ** -1)


def poly_scale(poly: Poly, c) -> Poly:
    return poly * Poly([int(c)], field=poly.field)


# ---------------------- BINARY FORMS ----------------------

@dataclass(frozen=True, eq=False)
class Form:
    """Homogeneous form in U, V; degree None is the ZERO form"""

    field: FieldSpec
    degree: Optional[int]
    poly: Poly

    @classmethod
    def zero(cls, field: FieldSpec) -> "Form":
        return cls(field, None, poly_zero(field))

    @classmethod
    def homogenize(cls, field: FieldSpec, poly: Poly, degree: int) -> "Form":
        if poly_is_zero(poly):
            return cls.zero(field)
        if degree < poly.degree:
            raise ValueError(f"cannot homogenize a degree-{poly.degree} polynomial to degree {degree}")
        return cls(field, degree, poly)

    @classmethod
    def from_coeffs(cls, field: FieldSpec, coeffs: Sequence[int]) -> "Form":
        """Coefficients of U^d, U^(d-1)V, ..., V^d"""
        if len(coeffs) == 0:
            return cls.zero(field)
        values = [field.elem(c) for c in coeffs]
        return cls.homogenize(field, poly_from_ascending(field, [int(v) for v in values]), len(coeffs) - 1)

    @classmethod
    def constant(cls, field: FieldSpec, c: int) -> "Form":
        return cls.from_coeffs(field, [c])

    @classmethod
    def monomial(cls, field: FieldSpec, u: int, v: int, c: int = 1) -> "Form":
        coeffs = [0] * (u + v + 1)
        coeffs[v] = c
        return cls.from_coeffs(field, coeffs)

    @classmethod
    def U(cls, field: FieldSpec) -> "Form":
        return cls.monomial(field, 1, 0)

    @classmethod
    def V(cls, field: FieldSpec) -> "Form":
        return cls.monomial(field, 0, 1)

    @property
    def is_zero(self) -> bool:
        return self.degree is None

    @property
    def coeffs(self) -> List[int]:
        if self.is_zero:
            return []
        asc = poly_ascending(self.poly)
        return asc + [0] * (self.degree + 1 - len(asc))

    @property
    def u_valuation(self) -> int:
        """Multiplicity of the factor U (the point t = infinity)"""
        return self.degree - self.poly.degree

    def _check(self, other: "Form"):
        if other.field != self.field:
            raise ValueError("forms over different fields")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        return Form.homogenize(self.field, self.poly + other.poly, self.degree)

    def __neg__(self) -> "Form":
        if self.is_zero:
            return self
        return Form(self.field, self.degree, -self.poly)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, other: Union["Form", int]) -> "Form":
        if isinstance(other, Form):
            self._check(other)
            if self.is_zero or other.is_zero:
                return Form.zero(self.field)
            return Form(self.field, self.degree + other.degree, self.poly * other.poly)
        c = self.field.scalar(int(other))
        if self.is_zero or int(c) == 0:
            return Form.zero(self.field)
        return Form(self.field, self.degree, poly_scale(self.poly, c))

    __rmul__ = __mul__

    def scale(self, c) -> "Form":
        """Multiply by a field element"""
        if self.is_zero or int(c) == 0:
            return Form.zero(self.field)
        return Form(self.field, self.degree, poly_scale(self.poly, c))

    def divides(self, other: "Form") -> bool:
        if self.is_zero:
            return other.is_zero
        if other.is_zero:
            return True
        if other.degree < self.degree or other.u_valuation < self.u_valuation:
            return False
        return poly_is_zero(other.poly % self.poly)

    def exact_div(self, h: "Form") -> "Form":
        if h.is_zero:
            raise ZeroDivisionError("division by the zero form")
        if self.is_zero:
            return self
        if not h.divides(self):
            raise ValueError("form does not divide")
        return Form(self.field, self.degree - h.degree, self.poly // h.poly)

    def monic(self) -> "Form":
        if self.is_zero:
            return self
        return Form(self.field, self.degree, poly_monic(self.poly))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return self.field == other.field and self.degree == other.degree and self.poly == other.poly

    def __hash__(self) -> int:
        return hash((self.degree, tuple(self.coeffs)))

    def to_text(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        d = self.degree
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            u, v = d - i, i
            mono = "".join(
                part
                for part in (
                    "" if u == 0 else ("U" if u == 1 else f"U^{u}"),
                    "" if v == 0 else ("V" if v == 1 else f"V^{v}"),
                )
            )
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}{mono}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"Form({self.to_text()}; deg={self.degree})"


def form_gcd(forms: Iterable[Form]) -> Form:
    """Monic gcd of binary forms; the U-part is tracked separately from the dehomogenized gcd"""
    nonzero = [f for f in forms if not f.is_zero]
    if not nonzero:
        raise AllZero()
    field = nonzero[0].field
    u_power = min(f.u_valuation for f in nonzero)
    g = poly_monic(nonzero[0].poly)
    for f in nonzero[1:]:
        g = galois.gcd(g, f.poly)
    return Form.homogenize(field, g, g.degree + u_power)


def frobenius_twist(f: Form, e: int) -> Form:
    """Pullback along the e-th absolute Frobenius: coefficients raised to p^e, monomials to the p^e-th power"""
    if e == 0 or f.is_zero:
        return f
    field = f.field
    q = field.p**e
    asc = f.poly.coeffs[::-1]
    spread = field.GF.Zeros(q * f.poly.degree + 1)
    spread[::q] = frobenius(asc, field, e)
    return Form(field, q * f.degree, Poly(spread[::-1], field=field.GF))


# ---------------------- RATIONAL FUNCTIONS ----------------------

@dataclass(frozen=True, eq=False)
class RatFunc:
    """Reduced fraction num/den in k(t) with monic denominator"""

    num: Poly
    den: Poly

    @classmethod
    def make(cls, num: Poly, den: Poly) -> "RatFunc":
        if poly_is_zero(den):
            raise ZeroDivisionError("zero denominator")
        if poly_is_zero(num):
            return cls(num, Poly.One(field=num.field))
        g = galois.gcd(num, den)
        num, den = num // g, den // g
        lead = poly_leading(den)
        if int(lead) != 1:
            inv = lead ** -1
            num, den = poly_scale(num, inv), poly_scale(den, inv)
        return cls(num, den)

    @classmethod
    def from_poly(cls, poly: Poly) -> "RatFunc":
        return cls(poly, Poly.One(field=poly.field))

    @property
    def is_zero(self) -> bool:
        return poly_is_zero(self.num)

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero:
            raise ZeroDivisionError("division by zero in k(t)")
        return RatFunc.make(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        return hash((tuple(poly_ascending(self.num)), tuple(poly_ascending(self.den))))

    def __repr__(self) -> str:
        if self.is_polynomial:
            return f"RatFunc({self.num})"
        return f"RatFunc(({self.num}) / ({self.den}))"


@dataclass(frozen=True)
class RatMatrix:
    """Matrix over k(t), t = V/U"""

    field: FieldSpec
    entries: Tuple[Tuple[RatFunc, ...], ...]
    ncols: int

    @classmethod
    def from_poly_rows(cls, field: FieldSpec, rows: Sequence[Sequence[Poly]], ncols: Optional[int] = None) -> "RatMatrix":
        width = ncols if ncols is not None else (len(rows[0]) if rows else 0)
        return cls(field, tuple(tuple(RatFunc.from_poly(p) for p in row) for row in rows), width)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    def to_poly_rows(self) -> PolyMatrix:
        """Clear denominators row by row; the kernel is unchanged"""
        rows: PolyMatrix = []
        for row in self.entries:
            common = poly_one(self.field)
            for entry in row:
                common = common * entry.den // galois.gcd(common, entry.den)
            rows.append([entry.num * (common // entry.den) for entry in row])
        return rows


# ---------------------- LINEAR ALGEBRA OVER k[t] ----------------------

def _copy(rows: PolyMatrix) -> PolyMatrix:
    return [list(row) for row in rows]


def poly_identity(field: FieldSpec, n: int) -> PolyMatrix:
    return [[poly_one(field) if i == j else poly_zero(field) for j in range(n)] for i in range(n)]


def column_echelon(rows: PolyMatrix, ncols: int, field: FieldSpec) -> Tuple[PolyMatrix, PolyMatrix, int]:
    """Unimodular column reduction A·W = [H | 0] over k[t]; returns (A·W, W, rank)"""
    A = _copy(rows)
    W = poly_identity(field, ncols)
    n = len(A)

    def swap(a: int, b: int):
        if a == b:
            return
        for row in A:
            row[a], row[b] = row[b], row[a]
        for row in W:
            row[a], row[b] = row[b], row[a]

    def axpy(target: int, q: Poly, source: int):
        # column target -= q * column source
        for row in A:
            row[target] = row[target] - q * row[source]
        for row in W:
            row[target] = row[target] - q * row[source]

    pc = 0
    for i in range(n):
        if pc == ncols:
            break
        while True:
            live = [c for c in range(pc, ncols) if not poly_is_zero(A[i][c])]
            if not live:
                break
            best = min(live, key=lambda c: (A[i][c].degree, c))
            swap(pc, best)
            finished = True
            for c in range(pc + 1, ncols):
                if poly_is_zero(A[i][c]):
                    continue
                axpy(c, A[i][c] // A[i][pc], pc)
                if not poly_is_zero(A[i][c]):
                    finished = False
            if finished:
                pc += 1
                break
    return A, W, pc


def poly_rank(rows: PolyMatrix, ncols: int, field: FieldSpec) -> int:
    return column_echelon(rows, ncols, field)[2]


def normalize_vector(vector: Sequence[Poly]) -> List[Poly]:
    """Scale so the first nonzero entry has leading coefficient 1"""
    for entry in vector:
        if not poly_is_zero(entry):
            inv = poly_leading(entry) ** -1
            return [poly_scale(x, inv) for x in vector]
    return list(vector)


def poly_kernel(rows: PolyMatrix, ncols: int, field: FieldSpec) -> List[List[Poly]]:
    """Saturated k[t]-basis of the right kernel, as column vectors"""
    _, W, rank = column_echelon(rows, ncols, field)
    return [normalize_vector([W[i][c] for i in range(ncols)]) for c in range(rank, ncols)]


def poly_det(rows: PolyMatrix, field: FieldSpec) -> Poly:
    """Fraction-free (Bareiss) determinant over k[t]"""
    n = len(rows)
    if n == 0:
        return poly_one(field)
    M = _copy(rows)
    negate = False
    prev = poly_one(field)
    for k in range(n - 1):
        if poly_is_zero(M[k][k]):
            pivot = next((r for r in range(k + 1, n) if not poly_is_zero(M[r][k])), None)
            if pivot is None:
                return poly_zero(field)
            M[k], M[pivot] = M[pivot], M[k]
            negate = not negate
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return -det if negate else det


def poly_matmul(A: PolyMatrix, B: PolyMatrix, field: FieldSpec) -> PolyMatrix:
    inner = len(B)
    width = len(B[0]) if B else 0
    out = []
    for row in A:
        new_row = []
        for j in range(width):
            acc = poly_zero(field)
            for k in range(inner):
                acc = acc + row[k] * B[k][j]
            new_row.append(acc)
        out.append(new_row)
    return out


# ---------------------- LINEAR ALGEBRA OVER k(t) ----------------------

def rat_kernel(M: RatMatrix) -> List[Tuple[RatFunc, ...]]:
    """Basis of the right kernel over k(t); empty iff M is injective on the generic fiber"""
    basis = poly_kernel(M.to_poly_rows(), M.ncols, M.field)
    return [tuple(RatFunc.from_poly(x) for x in vector) for vector in basis]


def clear_denominators(vector: Sequence[RatFunc]) -> List[Poly]:
    """Primitive polynomial multiple of a vector over k(t), first nonzero entry monic"""
    common = Poly.One(field=vector[0].num.field)
    for x in vector:
        common = common * x.den // galois.gcd(common, x.den)
    polys = [x.num * (common // x.den) for x in vector]
    content = None
    for p in polys:
        if not poly_is_zero(p):
            content = p if content is None else galois.gcd(content, p)
    if content is None:
        return polys
    return normalize_vector([p // content for p in polys])


def rat_solve(A: RatMatrix, B: RatMatrix) -> Optional[List[List[RatFunc]]]:
    """Solve A·X = B over k(t) for A of full column rank; None when inconsistent"""
    field = A.field
    zero = RatFunc.from_poly(poly_zero(field))
    width = B.ncols
    aug = [list(a) + list(b) for a, b in zip(A.entries, B.entries)]
    n, r = A.nrows, A.ncols
    pivots = []
    row = 0
    for col in range(r):
        pivot = next((i for i in range(row, n) if not aug[i][col].is_zero), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = aug[row][col]
        aug[row] = [x / inv for x in aug[row]]
        for i in range(n):
            if i != row and not aug[i][col].is_zero:
                factor = aug[i][col]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    if len(pivots) < r:
        raise ValueError("coefficient matrix is not of full column rank")
    for i in range(row, n):
        if any(not x.is_zero for x in aug[i][r:]):
            return None
    X = [[zero] * width for _ in range(r)]
    for i, col in enumerate(pivots):
        X[col] = aug[i][r:]
    return X


# ---------------------- CONSTANT MATRICES ----------------------

def field_matrix(field: FieldSpec, rows: Sequence[Sequence[int]], shape: Optional[Tuple[int, int]] = None):
    """Matrix over F_{p^m} from integers (integer encoding for m >= 2)"""
    if shape is not None and (shape[0] == 0 or shape[1] == 0):
        return field.GF.Zeros(shape)
    if field.m == 1:
        return field.GF(np.array(rows, dtype=int) % field.p)
    return field.GF(np.array(rows, dtype=int))


def matrix_to_ints(matrix) -> List[List[int]]:
    return [[int(x) for x in row] for row in np.asarray(matrix)]
