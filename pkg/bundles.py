# bundles.py - Slope calculus of split and abstract vector bundles
"""
Split bundles on the projective line are kept as their splitting type, so the
Harder-Narasimhan filtration is a sort. Bundles over curves of higher genus are
abstract (rank, degree, genus, optional HN profile) and only admit bounds on
the Frobenius-stabilized slopes.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import groupby
from typing import Iterable, List, Optional, Tuple, Union

from exceptions import InvalidBundle, InvalidCover, ZeroRank
from models import Positivity

logger = logging.getLogger(__name__)


# ---------------------- TYPES ----------------------

@dataclass(frozen=True)
class SplitBundle:
    """O(a_1) + ... + O(a_r) with a_1 >= ... >= a_r"""

    twists: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(sorted((int(a) for a in self.twists), reverse=True)))

    @classmethod
    def of(cls, *twists: int) -> "SplitBundle":
        return cls(tuple(twists))

    @classmethod
    def trivial(cls, rank: int) -> "SplitBundle":
        return cls((0,) * rank)

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def degree(self) -> int:
        return sum(self.twists)

    def twist(self, n: int) -> "SplitBundle":
        """Tensor with O(n)"""
        return SplitBundle(tuple(a + n for a in self.twists))

    def is_trivial(self) -> bool:
        return all(a == 0 for a in self.twists)

    def __str__(self) -> str:
        return "[" + ", ".join(str(a) for a in self.twists) + "]"


@dataclass(frozen=True)
class HNBlock:
    slope: Fraction
    rank: int


@dataclass(frozen=True)
class HNProfile:
    blocks: Tuple[HNBlock, ...]

    def __post_init__(self):
        if not self.blocks:
            raise InvalidBundle("HN profile needs at least one block")
        for block in self.blocks:
            if block.rank < 1:
                raise InvalidBundle(f"HN block of rank {block.rank}")
        for upper, lower in zip(self.blocks, self.blocks[1:]):
            if not upper.slope > lower.slope:
                raise InvalidBundle("HN slopes must be strictly decreasing")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Union[Fraction, int, str], int]]) -> "HNProfile":
        return cls(tuple(HNBlock(Fraction(s), int(r)) for s, r in pairs))

    @property
    def rank(self) -> int:
        return sum(b.rank for b in self.blocks)

    @property
    def degree(self) -> Fraction:
        return sum((b.slope * b.rank for b in self.blocks), Fraction(0))

    @property
    def mu_max(self) -> Fraction:
        return self.blocks[0].slope

    @property
    def mu_min(self) -> Fraction:
        return self.blocks[-1].slope

    def pairs(self) -> List[Tuple[Fraction, int]]:
        return [(b.slope, b.rank) for b in self.blocks]

    def scaled(self, factor: int) -> "HNProfile":
        if factor < 1:
            raise InvalidBundle(f"slope scaling by {factor}")
        return HNProfile(tuple(HNBlock(b.slope * factor, b.rank) for b in self.blocks))

    def dual(self) -> "HNProfile":
        return HNProfile(tuple(HNBlock(-b.slope, b.rank) for b in reversed(self.blocks)))


@dataclass(frozen=True)
class AbstractBundle:
    """Bundle over a curve of the given genus, known only through numerical data"""

    rank: int
    degree: int
    genus: int = 0
    prime: int = 2
    hn: Optional[HNProfile] = field(default=None)

    def __post_init__(self):
        if self.rank < 1:
            raise ZeroRank()
        if self.genus < 0:
            raise InvalidBundle(f"genus {self.genus} is negative")
        if self.hn is not None:
            if self.hn.rank != self.rank or self.hn.degree != self.degree:
                raise InvalidBundle(
                    f"HN profile has rank {self.hn.rank} and degree {self.hn.degree}, "
                    f"bundle has rank {self.rank} and degree {self.degree}"
                )

    @property
    def profile(self) -> HNProfile:
        """HN profile; a bundle without one is taken to be semistable"""
        if self.hn is not None:
            return self.hn
        return HNProfile((HNBlock(Fraction(self.degree, self.rank), self.rank),))

    @property
    def assumed_semistable(self) -> bool:
        return self.hn is None


Bundle = Union[SplitBundle, AbstractBundle]


# ---------------------- SLOPES ----------------------

def slope(B: Bundle) -> Fraction:
    if B.rank == 0:
        raise ZeroRank()
    return Fraction(B.degree, B.rank)


def hn_filtration(B: Bundle) -> HNProfile:
    if isinstance(B, AbstractBundle):
        return B.profile
    if B.rank == 0:
        raise ZeroRank()
    return HNProfile(tuple(HNBlock(Fraction(a), len(list(grp))) for a, grp in groupby(B.twists)))


def mu_max(B: Bundle) -> Fraction:
    return hn_filtration(B).mu_max


def mu_min(B: Bundle) -> Fraction:
    return hn_filtration(B).mu_min


def is_semistable(B: Bundle) -> bool:
    return len(hn_filtration(B).blocks) == 1


def maximal_destabilizing(B: SplitBundle) -> Optional[SplitBundle]:
    """Top HN block of a split bundle; None when B is semistable"""
    profile = hn_filtration(B)
    if len(profile.blocks) == 1:
        return None
    top = profile.blocks[0]
    return SplitBundle((int(top.slope),) * top.rank)


def dual_bundle(B: Bundle) -> Bundle:
    if isinstance(B, AbstractBundle):
        return AbstractBundle(B.rank, -B.degree, B.genus, B.prime, None if B.hn is None else B.hn.dual())
    return SplitBundle(tuple(-a for a in B.twists))


def frobenius_pullback(B: Bundle, e: int, p: Optional[int] = None) -> Bundle:
    """Pullback along the e-th Frobenius of the base: degrees multiply by p^e"""
    if e < 0:
        raise InvalidBundle(f"Frobenius exponent {e} is negative")
    if isinstance(B, AbstractBundle):
        if e == 0:
            return B
        if B.genus >= 2:
            # Frobenius may destabilize here; only the Langer bounds survive
            raise InvalidBundle(f"HN profile of a Frobenius pullback over genus {B.genus} is not determined")
        q = B.prime**e
        hn = None if B.hn is None else B.hn.scaled(q)
        return AbstractBundle(B.rank, B.degree * q, B.genus, B.prime, hn)
    if p is None:
        raise InvalidBundle("a prime is needed to pull a split bundle back along Frobenius")
    return SplitBundle(tuple(a * p**e for a in B.twists))


def formal_cover_pullback(B: AbstractBundle, d: int) -> AbstractBundle:
    """Pullback along an etale cover of degree d: Hurwitz gives 2g' - 2 = d(2g - 2)"""
    if d < 1:
        raise InvalidCover(B.genus, d)
    new_genus = d * (B.genus - 1) + 1
    if new_genus < 0:
        raise InvalidCover(B.genus, d)
    hn = None if B.hn is None else B.hn.scaled(d)
    return AbstractBundle(B.rank, B.degree * d, new_genus, B.prime, hn)


# ---------------------- HOM SPACES ----------------------

def hom_dimension(E: SplitBundle, F: SplitBundle) -> int:
    """dim Hom(E, F) = number of monomials across all entries"""
    return sum(max(0, b - a + 1) for b in F.twists for a in E.twists)


def hom_vanishes(E: Bundle, F: Bundle) -> bool:
    if isinstance(E, SplitBundle) and isinstance(F, SplitBundle):
        return hom_dimension(E, F) == 0
    return mu_min(E) > mu_max(F)


# ---------------------- FROBENIUS-STABILIZED SLOPES ----------------------

def langer_width(B: AbstractBundle) -> Fraction:
    """(rank - 1) * max(0, 2 genus - 2) / p"""
    return Fraction((B.rank - 1) * max(0, 2 * B.genus - 2), B.prime)


def mu_bar_bounds(B: Bundle) -> Tuple[Fraction, Fraction]:
    """[lo, hi] containing the Frobenius-stabilized minimal slope"""
    low = mu_min(B)
    if isinstance(B, SplitBundle):
        return low, low
    return low - langer_width(B), low


def mu_bar_max_bounds(B: Bundle) -> Tuple[Fraction, Fraction]:
    high = mu_max(B)
    if isinstance(B, SplitBundle):
        return high, high
    return high, high + langer_width(B)


def langer_prime_threshold(rank: int, genus: int) -> int:
    """Smallest p past which mu_min = 1/rank forces a positive stabilized minimal slope"""
    return max(2, rank * (rank - 1) * (2 * genus - 2) + 1)


def positivity_verdict(B: Bundle) -> Positivity:
    if isinstance(B, SplitBundle):
        if B.rank == 0:
            raise ZeroRank()
        low = B.twists[-1]
        if low > 0:
            return Positivity.ample
        if low == 0:
            return Positivity.nef
        return Positivity.not_nef
    lo, hi = mu_bar_bounds(B)
    if lo > 0:
        return Positivity.ample
    if hi < 0:
        return Positivity.not_nef
    if lo >= 0:
        return Positivity.nef
    logger.debug("positivity undecided: stabilized slope in [%s, %s]", lo, hi)
    return Positivity.unknown
