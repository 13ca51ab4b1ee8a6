"""Signatures of differentials and ramification profiles of covers.

A signature is the list of orders of zeros (positive), poles (negative) and
marked ordinary points (zero) of a meromorphic differential on a genus `g`
curve.  A ramification profile is the unordered collection of cycle types
over the branch points of a degree `d` cover of the projective line.
"""
import enum
import re
from collections import Counter
from dataclasses import dataclass

from .errors import (
    DegreeTooSmall,
    InvalidProfile,
    NegativeGenus,
    NonIntegralGenus,
    SimplePolePresent,
    SumMismatch,
)

__all__ = [
    "Signature", "RamificationProfile", "Hypothesis",
    "validate_signature", "parse_kappa", "zero_residue_empty",
    "profile_from_signature", "genus_from_profile", "theorem_hypothesis",
    "parse_profile", "is_pure", "is_simple_transposition",
]


@dataclass(frozen=True)
class Signature:
    g: int
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(k) for k in self.entries))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def pole_orders(self):
        """Orders p >= 2 of the non-simple poles, in entry order."""
        return tuple(-k for k in self.entries if k <= -2)

    @property
    def zero_orders(self):
        return tuple(k for k in self.entries if k >= 1)

    @property
    def m(self):
        """Number of non-simple poles."""
        return sum(1 for k in self.entries if k <= -2)

    @property
    def k(self):
        """Number of simple poles."""
        return sum(1 for k in self.entries if k == -1)

    @property
    def poles(self):
        return self.m + self.k

    def sorted(self):
        return Signature(self.g, tuple(sorted(self.entries)))

    def __str__(self):
        return "(" + ",".join(str(k) for k in self.entries) + f"; g={self.g})"


def validate_signature(g, entries):
    """Build a :class:`Signature`, checking the degree condition.

    >>> validate_signature(2, (-2, -2, 4, 1, 1)).m
    2
    """
    entries = tuple(int(k) for k in entries)
    if g < 0:
        raise NegativeGenus(f"genus {g} is negative")
    if not entries:
        raise SumMismatch("a signature needs at least one entry")
    if sum(entries) != 2 * g - 2:
        raise SumMismatch(f"entries sum to {sum(entries)}, expected 2g-2 = {2 * g - 2}")
    return Signature(g, entries)


def parse_kappa(text):
    """Parse a comma separated list such as ``"-2,-2,4,1,1"``."""
    try:
        return tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
    except ValueError as exc:
        raise SumMismatch(f"cannot parse signature {text!r}") from exc


def zero_residue_empty(sig):
    """Whether no differential of this signature has all non-simple residues zero."""
    if sig.k == 1:
        return True
    if sig.g == 0 and sig.k == 0:
        total = sum(p - 1 for p in sig.pole_orders)
        return any(a >= total for a in sig.zero_orders)
    return False


def is_pure(part):
    """At most one entry differs from one (the all-ones partition counts)."""
    return sum(1 for e in part if e != 1) <= 1


def is_simple_transposition(part):
    return sorted(e for e in part if e != 1) == [2]


@dataclass(frozen=True)
class RamificationProfile:
    degree: int
    parts: tuple

    def __post_init__(self):
        d = self.degree
        if d < 1:
            raise InvalidProfile(f"degree {d} is not positive")
        parts = []
        for part in self.parts:
            part = tuple(sorted((int(e) for e in part), reverse=True))
            if any(e < 1 for e in part) or sum(part) != d:
                raise InvalidProfile(f"{part} is not a partition of {d}")
            parts.append(part)
        object.__setattr__(self, "parts", tuple(parts))

    @property
    def ramification(self):
        return sum(e - 1 for part in self.parts for e in part)

    def multiset(self):
        return Counter(self.parts)

    def canonical(self):
        """Order-independent key: partitions sorted."""
        return RamificationProfile(self.degree, tuple(sorted(self.parts, reverse=True)))

    def __str__(self):
        return ",".join("[" + ",".join(map(str, p)) + "]" for p in self.parts)


def parse_profile(text, degree=None):
    """Parse ``"[2,2,1],[3,1,1]"``; the degree defaults to the first part's sum."""
    groups = re.findall(r"\[([^\]]*)\]", text)
    if not groups:
        raise InvalidProfile(f"cannot parse profile {text!r}")
    parts = [tuple(int(x) for x in grp.split(",") if x.strip()) for grp in groups]
    if degree is None:
        degree = sum(parts[0])
    return RamificationProfile(degree, tuple(parts))


def profile_from_signature(sig):
    """Branch profile of the cover obtained by integrating an exact differential.

    Returns ``(profile, degree)``.  The special fibre over the pole carries the
    parts ``p_i - 1``; a zero of order ``a`` is a ramification point of index
    ``a + 1``.  Partitions are padded with ones up to the degree.
    """
    if sig.k:
        raise SimplePolePresent("signature has simple poles")
    if sig.m == 0:
        raise SimplePolePresent("signature has no non-simple pole")
    d = sum(p - 1 for p in sig.pole_orders)
    parts = [tuple(p - 1 for p in sig.pole_orders)]
    for a in sig.zero_orders:
        if a + 1 > d:
            raise DegreeTooSmall(f"zero of order {a} cannot occur in a degree {d} cover")
        parts.append((a + 1,) + (1,) * (d - a - 1))
    return RamificationProfile(d, tuple(parts)), d


def genus_from_profile(profile):
    """Riemann-Hurwitz genus of a connected cover of the line."""
    twice = profile.ramification - 2 * profile.degree + 2
    if twice % 2:
        raise NonIntegralGenus(f"2g = {twice} is odd")
    if twice < 0:
        raise NegativeGenus(f"profile forces genus {twice // 2}")
    return twice // 2


class Hypothesis(enum.Enum):
    GENERAL_GENUS = "GeneralGenusApplies"
    GENUS_ZERO = "GenusZeroApplies"
    NOT_COVERED = "NotCovered"


def theorem_hypothesis(profile, g):
    """Which irreducibility criterion a branch profile satisfies.

    Both conditions are checked separately: at most one impure partition,
    and enough simple transpositions (``d - 3`` in genus zero,
    ``3g + d - 1`` otherwise).
    """
    impure = sum(1 for part in profile.parts if not is_pure(part))
    if impure > 1:
        return Hypothesis.NOT_COVERED
    simple = sum(1 for part in profile.parts if is_simple_transposition(part))
    d = profile.degree
    if g == 0 and simple >= d - 3:
        return Hypothesis.GENUS_ZERO
    if g >= 1 and simple >= 3 * g + d - 1:
        return Hypothesis.GENERAL_GENUS
    return Hypothesis.NOT_COVERED
