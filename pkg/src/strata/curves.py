"""F-curves and test curves on the moduli space of pointed rational curves."""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import DimensionMismatch, EmptyStratum, RecursionFailure
from .picard import (
    BoundaryIndex,
    DivisorClass,
    boundary_effective_witness,
    normal_form,
    zero_residue_class,
    zr_restriction,
)

__all__ = [
    "FCurve", "enumerate_fcurves", "pair_fcurve", "pair_all_fcurves", "is_fnef",
    "pair_test_curve_last_point", "pair_test_curve_tail",
    "Certificate", "nef_certificate",
]


@dataclass(frozen=True)
class FCurve:
    """Partition of ``{1..n}`` into four nonempty blocks."""
    blocks: tuple

    @property
    def n(self):
        return sum(len(b) for b in self.blocks)

    def block_count(self, S):
        """Number of blocks contained in `S`, or ``None`` if `S` cuts a block."""
        count = 0
        for b in self.blocks:
            inter = len(b & S)
            if inter == len(b):
                count += 1
            elif inter:
                return None
        return count

    def pair_boundary(self, S):
        k = self.block_count(S)
        if k == 2:
            return 1
        if k in (1, 3):
            return -1
        return 0

    def __str__(self):
        return "|".join(",".join(map(str, sorted(b))) for b in self.blocks)


@lru_cache(maxsize=None)
def enumerate_fcurves(n):
    """All F-curves on ``M_{0,n}``, ordered by restricted growth string."""
    if n < 4:
        raise DimensionMismatch("F-curves need at least four markings")
    out = []

    def grow(prefix, top):
        if len(prefix) == n:
            if top == 3:
                blocks = [[] for _ in range(4)]
                for mark, b in enumerate(prefix, start=1):
                    blocks[b].append(mark)
                out.append(FCurve(tuple(frozenset(b) for b in blocks)))
            return
        remaining = n - len(prefix)
        for b in range(min(top + 2, 4)):
            new_top = max(top, b)
            if 3 - new_top <= remaining - 1:
                grow(prefix + [b], new_top)

    grow([0], 0)
    return tuple(out)


def _boundary_only(c):
    if c.g != 0:
        raise DimensionMismatch("F-curve pairings are implemented in genus zero")
    nf = normal_form(c)
    if any(nf.psi):
        raise ArithmeticError("normal form kept a psi class")
    return nf


def pair_fcurve(c, F):
    if F.n != c.n:
        raise DimensionMismatch(f"F-curve on {F.n} points, class on {c.n}")
    nf = _boundary_only(c)
    return sum((coef * F.pair_boundary(key.S) for key, coef in nf.bnd), Fraction(0))


def pair_all_fcurves(c):
    """Pairings with every F-curve, in enumeration order, from a single reduction."""
    nf = _boundary_only(c)
    return [(F, sum((coef * F.pair_boundary(key.S) for key, coef in nf.bnd), Fraction(0)))
            for F in enumerate_fcurves(c.n)]


def is_fnef(c):
    """Return ``(ok, violations)`` where violations lists ``(FCurve, pairing)``."""
    if c.n < 4:
        return True, []
    bad = [(F, val) for F, val in pair_all_fcurves(c) if val < 0]
    return not bad, bad


def pair_test_curve_last_point(c, i):
    """Pair with the curve traced by marking `i` moving on a fixed general line."""
    if c.g != 0:
        raise DimensionMismatch("test curves are implemented in genus zero")
    n = c.n
    total = sum(c.psi) - c.psi[i - 1] + (n - 3) * c.psi[i - 1]
    for j in range(1, n + 1):
        if j != i:
            total += c.delta(0, {i, j})
    return Fraction(total)


def pair_test_curve_tail(c, pair):
    """Pair with the curve where a tail carrying ``{p, q}`` slides along a fixed line.

    Intersections: ``psi_j`` gives 1 for ``j`` outside the pair and 0 on it,
    ``delta_{0:{p,q,j}}`` gives 1 and ``delta_{0:{p,q}}`` gives ``4 - n``
    (the self-intersection of the tail divisor on the moving curve).
    """
    if c.g != 0:
        raise DimensionMismatch("test curves are implemented in genus zero")
    p, q = pair
    n = c.n
    total = sum(c.psi[j - 1] for j in range(1, n + 1) if j not in (p, q))
    total += (4 - n) * c.delta(0, {p, q})
    if n >= 5:
        for j in range(1, n + 1):
            if j not in (p, q):
                total += c.delta(0, {p, q, j})
    return Fraction(total)


# ---------------------------------------------------------------------------
# nef certificates


@dataclass
class Certificate:
    """Proof tree: a leaf checked on F-curves or an inner node with restrictions."""
    d: tuple
    kind: str
    fcurves_checked: int = 0
    witness_min: Fraction = None
    children: list = field(default_factory=list)

    def to_json(self):
        out = {"d": list(self.d), "kind": self.kind}
        if self.kind == "fnef-leaf":
            out["fcurves_checked"] = self.fcurves_checked
        if self.witness_min is not None:
            w = self.witness_min
            out["witness_min"] = {"num": str(w.numerator), "den": str(w.denominator)}
        if self.children:
            out["children"] = [
                {"S": sorted(S), "side": side, "certificate": cert.to_json()}
                for S, side, cert in self.children]
        return out

    def leaves(self):
        if not self.children:
            return 1
        return sum(c.leaves() for _, _, c in self.children)


def nef_certificate(d, leaf_size=7, _memo=None, _path=()):
    """Certify nefness of the genus-zero class for retained orders `d`.

    Markings up to `leaf_size` are settled on F-curves.  Larger cases need
    a nonnegative boundary witness and, for each boundary divisor, a
    certificate for every nonempty side of the restriction.  Results are
    shared between signatures that agree up to reordering.
    """
    d = tuple(int(x) for x in d)
    memo = {} if _memo is None else _memo
    key = tuple(sorted(d))
    if key in memo:
        return memo[key]
    n = len(d)
    try:
        c = zero_residue_class(0, d)
    except EmptyStratum:
        cert = Certificate(d, "empty")
        memo[key] = cert
        return cert
    if n <= 3:
        cert = Certificate(d, "trivial")
    elif n <= leaf_size:
        ok, bad = is_fnef(c)
        if not ok:
            raise RecursionFailure(
                f"F-curve {bad[0][0]} pairs to {bad[0][1]} with d={d}", _path)
        cert = Certificate(d, "fnef-leaf", fcurves_checked=len(enumerate_fcurves(n)))
    else:
        coeffs, _, _, _ = boundary_effective_witness(d)
        wmin = min(coeffs.values(), default=Fraction(0))
        if wmin < 0:
            raise RecursionFailure(f"boundary witness has negative coefficient for d={d}", _path)
        cert = Certificate(d, "recursive", witness_min=wmin)
        keys = {BoundaryIndex.make(0, n, 0, S)
                for r in range(2, n - 1) for S in combinations(range(1, n + 1), r)}
        for bkey in sorted(keys, key=BoundaryIndex.sort_key):
            res = zr_restriction(d, bkey.S)
            for side, ok, child_d in (("first", res.first_contributes, res.first_retained),
                                      ("second", res.second_contributes, res.second_retained)):
                if ok:
                    child = nef_certificate(child_d, leaf_size, memo,
                                            _path + ((tuple(sorted(bkey.S)), side),))
                    cert.children.append((bkey.S, side, child))
    memo[key] = cert
    return cert
