"""Divisor classes on the moduli space of stable pointed curves.

Classes are exact rational combinations of the Hodge class ``lambda``, the
cotangent classes ``psi_i``, the irreducible boundary ``delta_0`` and the
separating boundary divisors ``delta_{i:S}``.  This module holds the class
formulas for divisors coming from zero-residue strata, the genus-zero graph
classes built from Keel's relation, normal forms modulo the known relations,
and the pullback along the map gluing a fixed genus ``h`` tail at marking 1.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import linalg
from .errors import (
    DimensionMismatch,
    EmptyStratum,
    InvalidBoundaryIndex,
    SignatureShapeError,
    SumNonzero,
)
from .signatures import Signature, zero_residue_empty

__all__ = [
    "BoundaryIndex", "DivisorClass", "EdgeLabeledGraph", "Restriction",
    "boundary_indices", "zero_residue_class", "zero_residue_class_simple",
    "divisor_class", "split_kappa", "raw_genus_zero_class",
    "raw_genus_zero_class_simple", "dcor_class", "keel_graph_class",
    "basis_keel_graph", "normal_form", "equals_mod_relations",
    "relation_matrix_genus_zero", "quotient_dimension",
    "boundary_effective_witness", "pullback_glue", "zr_restriction",
    "complement_invariance_failures", "witness_class", "binom2", "node_order",
]


def binom2(x):
    """The polynomial ``x(x-1)/2``, so that ``binom2(-1) == 1``."""
    return x * (x - 1) // 2


def _subsets(n, sizes=None):
    marks = range(1, n + 1)
    sizes = range(n + 1) if sizes is None else sizes
    for r in sizes:
        for S in combinations(marks, r):
            yield frozenset(S)


@dataclass(frozen=True)
class BoundaryIndex:
    """Index ``(i, S)`` of the boundary divisor ``delta_{i:S}``.

    Instances built through :meth:`make` are canonical: the smaller genus
    side is kept, and on a tie the side containing marking 1.
    """
    i: int
    S: frozenset

    @staticmethod
    def make(g, n, i, S):
        S = frozenset(S)
        full = frozenset(range(1, n + 1))
        if not S <= full or not 0 <= i <= g:
            raise InvalidBoundaryIndex(f"delta_{{{i}:{sorted(S)}}} on M_{g},{n}")
        Sc = full - S
        if (i == 0 and len(S) < 2) or (i == g and len(Sc) < 2):
            raise InvalidBoundaryIndex(f"delta_{{{i}:{sorted(S)}}} is not a divisor on M_{g},{n}")
        j = g - i
        if j < i or (j == i and 1 in Sc and 1 not in S):
            return BoundaryIndex(j, Sc)
        return BoundaryIndex(i, S)

    def sides(self, g, n):
        """Both ``(genus, markings)`` descriptions of the divisor."""
        full = frozenset(range(1, n + 1))
        return (self.i, self.S), (g - self.i, full - self.S)

    def side_with(self, g, n, mark=1):
        for i, S in self.sides(g, n):
            if mark in S:
                return i, S
        raise InvalidBoundaryIndex(f"marking {mark} not present")

    def sort_key(self):
        return (self.i, len(self.S), tuple(sorted(self.S)))

    def __str__(self):
        return f"delta_{{{self.i}:{{{','.join(map(str, sorted(self.S)))}}}}}"

    def latex(self):
        inner = ",".join(map(str, sorted(self.S)))
        return rf"\delta_{{{self.i}:\{{{inner}\}}}}" if inner else rf"\delta_{{{self.i}:\emptyset}}"


@lru_cache(maxsize=None)
def boundary_indices(g, n):
    """All separating boundary divisors of ``M_{g,n}``, canonical and sorted."""
    keys = set()
    for i in range(g + 1):
        for S in _subsets(n):
            try:
                keys.add(BoundaryIndex.make(g, n, i, S))
            except InvalidBoundaryIndex:
                pass
    return tuple(sorted(keys, key=BoundaryIndex.sort_key))


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class DivisorClass:
    """An element of the rational Picard group of ``M_{g,n}``-bar.

    ``psi`` is indexed by marking minus one; ``bnd`` is a sorted tuple of
    ``(BoundaryIndex, Fraction)`` with zero coefficients removed.  Use
    :meth:`build` rather than the constructor.
    """
    g: int
    n: int
    lam: Fraction
    psi: tuple
    delta0: Fraction
    bnd: tuple

    @classmethod
    def build(cls, g, n, lam=0, psi=None, delta0=0, bnd=None):
        psi_vec = [Fraction(0)] * n
        if psi:
            items = psi.items() if isinstance(psi, dict) else enumerate(psi, start=1)
            for j, c in items:
                if not 1 <= j <= n:
                    raise DimensionMismatch(f"psi_{j} on M_{g},{n}")
                psi_vec[j - 1] += _frac(c)
        acc = {}
        for key, c in (bnd.items() if isinstance(bnd, dict) else (bnd or ())):
            if not isinstance(key, BoundaryIndex):
                key = BoundaryIndex.make(g, n, *key)
            else:
                key = BoundaryIndex.make(g, n, key.i, key.S)
            acc[key] = acc.get(key, Fraction(0)) + _frac(c)
        terms = tuple(sorted(((k, c) for k, c in acc.items() if c != 0),
                             key=lambda kc: kc[0].sort_key()))
        if g == 0:
            # lambda and delta_0 vanish in genus zero
            lam, delta0 = 0, 0
        return cls(g, n, _frac(lam), tuple(psi_vec), _frac(delta0), terms)

    @classmethod
    def zero(cls, g, n):
        return cls.build(g, n)

    def boundary(self):
        return dict(self.bnd)

    def delta(self, i, S):
        key = BoundaryIndex.make(self.g, self.n, i, S)
        return self.boundary().get(key, Fraction(0))

    def psi_coeff(self, j):
        return self.psi[j - 1]

    def is_zero(self):
        return self.lam == 0 and self.delta0 == 0 and not any(self.psi) and not self.bnd

    def _check(self, other):
        if (self.g, self.n) != (other.g, other.n):
            raise DimensionMismatch(f"M_{self.g},{self.n} vs M_{other.g},{other.n}")

    def __add__(self, other):
        self._check(other)
        bnd = self.boundary()
        for k, c in other.bnd:
            bnd[k] = bnd.get(k, 0) + c
        return DivisorClass.build(
            self.g, self.n, self.lam + other.lam,
            [a + b for a, b in zip(self.psi, other.psi)],
            self.delta0 + other.delta0, bnd)

    def __mul__(self, scalar):
        s = _frac(scalar)
        return DivisorClass.build(
            self.g, self.n, self.lam * s, [c * s for c in self.psi],
            self.delta0 * s, {k: c * s for k, c in self.bnd})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def terms(self):
        """``(name, key, coefficient)`` in canonical order, zeros omitted."""
        out = []
        if self.lam:
            out.append(("lambda", None, self.lam))
        for j, c in enumerate(self.psi, start=1):
            if c:
                out.append((f"psi_{j}", j, c))
        if self.delta0:
            out.append(("delta_0", None, self.delta0))
        for k, c in self.bnd:
            out.append((str(k), k, c))
        return out

    def __str__(self):
        if self.is_zero():
            return "0"
        pieces = []
        for name, _, c in self.terms():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            coef = "" if a == 1 else f"{a}*"
            pieces.append(f"{sign} {coef}{name}")
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def latex(self):
        if self.is_zero():
            return "0"
        out = []
        for name, key, c in self.terms():
            if isinstance(key, BoundaryIndex):
                sym = key.latex()
            elif name == "lambda":
                sym = r"\lambda"
            elif name == "delta_0":
                sym = r"\delta_0"
            else:
                sym = rf"\psi_{{{key}}}"
            a = abs(c)
            coef = "" if a == 1 else (str(a) if a.denominator == 1
                                      else rf"\frac{{{a.numerator}}}{{{a.denominator}}}")
            out.append(("-" if c < 0 else "+") + coef + sym)
        text = "".join(out)
        return text[1:] if text.startswith("+") else text

    def to_json(self):
        terms = []
        for name, key, c in self.terms():
            entry = {"generator": name.split("_{")[0] if isinstance(key, BoundaryIndex) else name,
                     "coefficient": {"num": str(c.numerator), "den": str(c.denominator)}}
            if isinstance(key, BoundaryIndex):
                entry["generator"] = "delta"
                entry["index"] = {"i": key.i, "S": sorted(key.S)}
            terms.append(entry)
        return {"g": self.g, "n": self.n, "terms": terms}

    @classmethod
    def from_json(cls, data):
        g, n = int(data["g"]), int(data["n"])
        lam = delta0 = Fraction(0)
        psi, bnd = {}, {}
        for t in data["terms"]:
            c = Fraction(int(t["coefficient"]["num"]), int(t["coefficient"]["den"]))
            gen = t["generator"]
            if gen == "lambda":
                lam += c
            elif gen == "delta_0":
                delta0 += c
            elif gen.startswith("psi_"):
                j = int(gen[4:])
                psi[j] = psi.get(j, 0) + c
            elif gen == "delta":
                key = BoundaryIndex.make(g, n, t["index"]["i"], t["index"]["S"])
                bnd[key] = bnd.get(key, 0) + c
            else:
                raise ValueError(f"unknown generator {gen!r}")
        return cls.build(g, n, lam, psi, delta0, bnd)


# ---------------------------------------------------------------------------
# class formulas


def _d_sum(d, S):
    return sum(d[j - 1] for j in S)


def _n_neg(d, S):
    return sum(1 for j in S if d[j - 1] < 0)


def _n_nonsimple(d, S):
    return sum(1 for j in S if d[j - 1] <= -2)


def _has_simple(d, S):
    return any(d[j - 1] == -1 for j in S)


def split_kappa(g, n, kappa):
    """Split a full signature into the retained entries and the forgotten ones.

    The entries after the first `n` must all be simple zeros, as many as the
    class formulas forget.
    """
    kappa = tuple(int(k) for k in kappa)
    d, rest = kappa[:n], kappa[n:]
    if len(d) != n or any(k != 1 for k in rest):
        raise SignatureShapeError("forgotten entries must all be simple zeros")
    m = sum(1 for k in d if k <= -2)
    k = d.count(-1)
    expected = g + m - 2 if k == 0 else g + m - 1
    if len(rest) != expected:
        raise SignatureShapeError(
            f"expected {expected} forgotten simple zeros, got {len(rest)}")
    if sum(kappa) != 2 * g - 2:
        raise SignatureShapeError(f"entries sum to {sum(kappa)}, not {2 * g - 2}")
    return d


def zero_residue_class(g, d):
    """Class of the divisor for signature ``(d, 1^{g+m-2})`` without simple poles.

    `d` lists the orders at the retained markings ``1..n``; the ``g+m-2``
    simple zeros are forgotten.  In genus zero the class is returned in the
    symmetric form ``sum f(j) psi_j - sum_{1 in S} f(S) delta_{0:S}`` with
    ``f(S) = |d_S + #poles in S| / 2``.
    """
    d = tuple(int(x) for x in d)
    n = len(d)
    m = sum(1 for x in d if x <= -2)
    if -1 in d:
        raise SignatureShapeError("simple poles present; use zero_residue_class_simple")
    if m < 1 or g + m - 2 < 0:
        raise SignatureShapeError(f"need at least {max(1, 2 - g)} non-simple poles")
    if sum(d) != g - m:
        raise SignatureShapeError(f"orders sum to {sum(d)}, expected g - m = {g - m}")
    if n < 1 or (g == 0 and n < 3):
        raise SignatureShapeError("too few markings for a stable curve")
    if g == 0 and n == 3:
        return DivisorClass.zero(0, 3)
    if zero_residue_empty(Signature(g, d + (1,) * (g + m - 2))):
        raise EmptyStratum(f"no zero-residue differential of type {d} in genus {g}")

    if g == 0:
        return _symmetric_class(n, [x + 1 if x < 0 else x for x in d])

    psi = {j: binom2(x + 1) for j, x in enumerate(d, start=1)}
    if g == 1:
        bnd = {}
        for key in boundary_indices(1, n):
            S = key.S
            c = binom2(abs(_d_sum(d, S) + _n_neg(d, S)) + 1) - sum(psi[j] for j in S)
            bnd[key] = -c
        return DivisorClass.build(1, n, lam=-1 + sum(psi.values()), bnd=bnd)

    bnd = {}
    for key in boundary_indices(g, n):
        x = _d_sum(d, key.S) + _n_neg(d, key.S) - key.i
        bnd[key] = -binom2(abs(x) + 1)
    return DivisorClass.build(g, n, lam=-1, psi=psi, delta0=0, bnd=bnd)


def raw_genus_zero_class(d):
    """Binomial form of the genus-zero class, before symmetrisation."""
    d = tuple(d)
    n = len(d)
    psi = {j: binom2(x + 1) for j, x in enumerate(d, start=1)}
    bnd = {k: -binom2(abs(_d_sum(d, k.S) + _n_neg(d, k.S)) + 1) for k in boundary_indices(0, n)}
    return DivisorClass.build(0, n, psi=psi, bnd=bnd)


def _symmetric_class(n, f):
    """``sum |f_j|/2 psi_j - sum_{1 in S} |f_S|/2 delta_{0:S}``."""
    half = Fraction(1, 2)
    psi = {j: half * abs(x) for j, x in enumerate(f, start=1)}
    bnd = {k: -half * abs(sum(f[j - 1] for j in k.S)) for k in boundary_indices(0, n)}
    return DivisorClass.build(0, n, psi=psi, bnd=bnd)


def zero_residue_class_simple(g, d):
    """Class for signatures with ``k >= 2`` simple poles among the markings.

    The signature is ``(d, 1^{g+m-1})``.  For the boundary divisors whose two
    sides both carry simple poles the genus ``g >= 2`` sum is taken over
    every index ``i`` of the side containing marking 1, which is the range
    produced by the gluing pullback.
    """
    d = tuple(int(x) for x in d)
    n = len(d)
    k = d.count(-1)
    m = sum(1 for x in d if x <= -2)
    if k < 2:
        raise SignatureShapeError("need at least two simple poles")
    if sum(d) != g - m - 1:
        raise SignatureShapeError(f"orders sum to {sum(d)}, expected g - m - 1 = {g - m - 1}")
    if n < 3 or n < k + (2 if g == 0 else 0):
        raise SignatureShapeError("too few markings")
    full = frozenset(range(1, n + 1))

    if g == 0:
        psi = {j: abs(x + 1) for j, x in enumerate(d, start=1) if x <= -2}
        bnd = {}
        for key in boundary_indices(0, n):
            for S in (key.S, full - key.S):
                if not _has_simple(d, S):
                    x = _d_sum(d, S) + _n_neg(d, S)
                    if x < 0:
                        bnd[key] = -abs(x)
        return DivisorClass.build(0, n, psi=psi, bnd=bnd)

    psi = {j: binom2(x + 1) for j, x in enumerate(d, start=1)}
    if g == 1:
        bnd = {}
        for key in boundary_indices(1, n):
            S = key.S
            corr = sum(psi[j] for j in S)
            # |S^-| counts non-simple poles only; with simple poles included
            # the display disagrees with the gluing pullback even for k = 2
            x = _d_sum(d, S) + _n_nonsimple(d, S)
            if not _has_simple(d, S):
                c = binom2(abs(x) + 1)
            elif not _has_simple(d, full - S):
                c = binom2(abs(x + 1) + 1)
            else:
                c = binom2(_d_sum(d, S) + _n_nonsimple(d, S) + k - 1)
            bnd[key] = -(c - corr)
        return DivisorClass.build(1, n, lam=-1 + sum(psi.values()), bnd=bnd)

    bnd = {}
    for key in boundary_indices(g, n):
        bnd[key] = -_simple_coefficient(g, n, d, key)
    return DivisorClass.build(g, n, lam=-1, psi=psi, delta0=0, bnd=bnd)


def _simple_coefficient(g, n, d, key):
    for i, S in key.sides(g, n):
        if not _has_simple(d, S):
            return binom2(abs(_d_sum(d, S) + _n_neg(d, S) - i) + 1)
    i, S = key.side_with(g, n, 1)
    return binom2(_d_sum(d, S) + _n_nonsimple(d, S) - i + 1)


def raw_genus_zero_class_simple(d):
    """Unsimplified genus-zero class with simple poles (binomial form)."""
    d = tuple(d)
    n = len(d)
    k = d.count(-1)
    full = frozenset(range(1, n + 1))
    psi = {j: binom2(x + 1) for j, x in enumerate(d, start=1)}
    bnd = {}
    for key in boundary_indices(0, n):
        S = key.S  # contains marking 1
        simple_in = sum(1 for j in S if d[j - 1] == -1)
        if simple_in == 0 or simple_in == k:
            T = S if simple_in == 0 else full - S
            bnd[key] = -binom2(abs(_d_sum(d, T) + _n_nonsimple(d, T)) + 1)
        else:
            bnd[key] = -binom2(_d_sum(d, S) + _n_nonsimple(d, S) + 1)
    return DivisorClass.build(0, n, psi=psi, bnd=bnd)


def divisor_class(g, kappa, n):
    """Dispatch on a full signature: retained entries first, simple zeros after."""
    d = split_kappa(g, n, kappa)
    if -1 in d:
        return zero_residue_class_simple(g, d)
    return zero_residue_class(g, d)


def dcor_class(f):
    """Genus-zero class ``sum f(i) psi_i - sum_{1 in S} f(S) delta_{0:S}``, ``f(S) = |f_S|/2``."""
    f = tuple(int(x) for x in f)
    if sum(f) != 0:
        raise SumNonzero(f"entries sum to {sum(f)}")
    if len(f) < 3:
        raise SignatureShapeError("need at least three markings")
    return _symmetric_class(len(f), f)


# ---------------------------------------------------------------------------
# genus zero: Keel relations


@dataclass(frozen=True)
class EdgeLabeledGraph:
    """Complete graph on ``1..n`` with rational edge labels (default 0)."""
    n: int
    labels: tuple = ()

    @classmethod
    def from_dict(cls, n, labels):
        acc = {}
        for (i, j), c in labels.items():
            if i == j or not (1 <= i <= n and 1 <= j <= n):
                raise DimensionMismatch(f"edge {i}~{j} on {n} vertices")
            key = (min(i, j), max(i, j))
            acc[key] = acc.get(key, Fraction(0)) + _frac(c)
        return cls(n, tuple(sorted((k, c) for k, c in acc.items() if c)))

    def label(self, i, j):
        return dict(self.labels).get((min(i, j), max(i, j)), Fraction(0))

    def vertex_weight(self, i):
        return sum((c for (a, b), c in self.labels if i in (a, b)), Fraction(0))

    def cut_weight(self, S):
        S = frozenset(S)
        return sum((c for (a, b), c in self.labels if (a in S) != (b in S)), Fraction(0))


def keel_graph_class(graph):
    """``sum e(i) psi_i - sum_{1 in S} e(S) delta_{0:S}``, a trivial class."""
    n = graph.n
    psi = {i: graph.vertex_weight(i) for i in range(1, n + 1)}
    bnd = {k: -graph.cut_weight(k.S) for k in boundary_indices(0, n)}
    return DivisorClass.build(0, n, psi=psi, bnd=bnd)


def basis_keel_graph(n, i, j):
    return EdgeLabeledGraph.from_dict(n, {(i, j): 1})


def _g0_columns(n):
    return [("psi", j) for j in range(1, n + 1)] + [
        ("delta", k) for k in sorted(boundary_indices(0, n),
                                     key=lambda k: (len(k.S), tuple(sorted(k.S))))]


def _g0_vector(c, columns):
    bnd = c.boundary()
    return [c.psi[key - 1] if kind == "psi" else bnd.get(key, Fraction(0))
            for kind, key in columns]


def relation_matrix_genus_zero(n):
    """Rows are the ``C(n,2)`` classes of the basis graphs in column order."""
    cols = _g0_columns(n)
    return [_g0_vector(keel_graph_class(basis_keel_graph(n, i, j)), cols)
            for i, j in combinations(range(1, n + 1), 2)]


@lru_cache(maxsize=None)
def _g0_reduced(n):
    cols = _g0_columns(n)
    red, piv = linalg.rref(relation_matrix_genus_zero(n), len(cols))
    return cols, red, piv


def quotient_dimension(n):
    cols, _, piv = _g0_reduced(n)
    return len(cols) - len(piv)


def normal_form(c):
    """Canonical representative modulo the relations among the generators.

    Genus 0: reduce by Keel's relations, eliminating psi classes first
    (for ``n >= 4`` the result is boundary only).  Genus 1: replace
    ``delta_0`` by ``12 lambda`` and ``psi_i`` by ``lambda + sum_{i in S}
    delta_{0:S}``.  Genus 2: replace ``lambda`` by ``delta_0/10 +
    delta_1/5`` with ``delta_1`` the sum of all genus-one splittings.
    Genus ``>= 3``: the generators are free.
    """
    g, n = c.g, c.n
    if g == 0:
        if n <= 3:
            return DivisorClass.zero(0, n)
        cols, red, piv = _g0_reduced(n)
        vec = linalg.reduce_vector(_g0_vector(c, cols), red, piv)
        psi = {key: v for (kind, key), v in zip(cols, vec) if kind == "psi"}
        bnd = {key: v for (kind, key), v in zip(cols, vec) if kind == "delta"}
        return DivisorClass.build(0, n, psi=psi, bnd=bnd)
    if g == 1:
        lam = c.lam + 12 * c.delta0
        bnd = c.boundary()
        for j, coef in enumerate(c.psi, start=1):
            if coef:
                lam += coef
                for key in boundary_indices(1, n):
                    if j in key.S:
                        bnd[key] = bnd.get(key, 0) + coef
        return DivisorClass.build(1, n, lam=lam, bnd=bnd)
    if g == 2:
        bnd = c.boundary()
        if c.lam:
            for key in boundary_indices(2, n):
                if key.i == 1:
                    bnd[key] = bnd.get(key, 0) + c.lam / 5
        return DivisorClass.build(2, n, lam=0, psi=c.psi, delta0=c.delta0 + c.lam / 10, bnd=bnd)
    return c


def equals_mod_relations(a, b):
    a._check(b)
    return normal_form(a - b).is_zero()


# ---------------------------------------------------------------------------
# boundary effectivity in genus zero


def boundary_effective_witness(d):
    """Nonnegative boundary expression for twice the genus-zero class.

    With ``f_i = d_i + 1`` at poles and ``d_i`` elsewhere, subtract the
    trivial graph classes for ``e(i~j) = -f_i f_j`` and, scaled by ``1/N``,
    its positive part (``N`` the sum of the positive ``f_i``).  What is left
    is ``sum_{1 in S} (e(S)/N - |f_S|) delta_{0:S}``.

    Returns ``(coefficients, gamma1, gamma2, N)``.
    """
    d = tuple(int(x) for x in d)
    n = len(d)
    zero_residue_class(0, d)  # validates shape, raises EmptyStratum
    f = [x + 1 if x < 0 else x for x in d]
    pairs = list(combinations(range(1, n + 1), 2))
    gamma1 = EdgeLabeledGraph.from_dict(n, {(i, j): -f[i - 1] * f[j - 1] for i, j in pairs})
    gamma2 = EdgeLabeledGraph.from_dict(
        n, {(i, j): -f[i - 1] * f[j - 1] for i, j in pairs if -f[i - 1] * f[j - 1] > 0})
    N = sum(x for x in f if x > 0)
    raw2 = 2 * raw_genus_zero_class(d)
    w = raw2 - keel_graph_class(gamma1) - Fraction(1, N) * keel_graph_class(gamma2)
    if any(w.psi):
        raise ArithmeticError("psi terms failed to cancel")
    return dict(w.bnd), gamma1, gamma2, N


def witness_class(n, coefficients):
    return DivisorClass.build(0, n, bnd=coefficients)


# ---------------------------------------------------------------------------
# gluing pullback


def pullback_glue(c, h):
    """Pull back along ``M_{g,n} -> M_{g+h,n}`` gluing a genus `h` tail at marking 1."""
    if h < 1 or c.g - h < 0:
        raise DimensionMismatch(f"cannot glue genus {h} into genus {c.g}")
    g, n = c.g - h, c.n
    psi = {j: coef for j, coef in enumerate(c.psi, start=1) if j != 1}
    bnd = {}
    for key, coef in c.bnd:
        i, S = key.side_with(c.g, n, 1)
        if i < h:
            continue
        if i == h and S == frozenset({1}):
            psi[1] = psi.get(1, 0) - coef
            continue
        k = BoundaryIndex.make(g, n, i - h, S)
        bnd[k] = bnd.get(k, 0) + coef
    return DivisorClass.build(g, n, lam=c.lam, psi=psi, delta0=c.delta0, bnd=bnd)


def complement_invariance_failures(g, d, simple=False):
    """Boundary indices where the displayed coefficient depends on the side.

    For every separating divisor both descriptions ``(i, S)`` and
    ``(g - i, S^c)`` are fed to the displayed coefficient expression and
    compared.  Returns the list of ``(key, value_on_S, value_on_Sc)``.
    """
    d = tuple(d)
    n = len(d)
    out = []
    for key in boundary_indices(g, n):
        vals = []
        for i, S in key.sides(g, n):
            if simple:
                if _has_simple(d, S) and _has_simple(d, frozenset(range(1, n + 1)) - S):
                    vals.append(binom2(_d_sum(d, S) + _n_nonsimple(d, S) - i + 1))
                else:
                    continue
            else:
                vals.append(binom2(abs(_d_sum(d, S) + _n_neg(d, S) - i) + 1))
        if len(vals) == 2 and vals[0] != vals[1]:
            out.append((key, vals[0], vals[1]))
    return out


# ---------------------------------------------------------------------------
# restriction to a boundary divisor in genus zero


@dataclass(frozen=True)
class Restriction:
    """The two signatures met when restricting to ``delta_{0:S}``.

    ``first`` lives on the side of `S` with ``t = s^- - 2`` forgotten simple
    zeros; ``second`` on the complement with ``t = s^- - 1`` of them on the
    `S` side.  Each is ``None`` when the count of forgotten points is
    negative.  ``*_retained`` lists the orders at the retained markings of
    that side followed by the order at the node.
    """
    S: frozenset
    s_minus: int
    poles: int
    t_first: int
    node_first: int
    first: tuple
    first_retained: tuple
    first_empty: bool
    t_second: int
    node_second: int
    second: tuple
    second_retained: tuple
    second_empty: bool

    @property
    def first_contributes(self):
        return self.first is not None and not self.first_empty and self.node_first >= 0

    @property
    def second_contributes(self):
        return self.second is not None and not self.second_empty and self.node_second >= 0


def node_order(d, S, t):
    """``n_{S,t} = -2 - t - d_S``."""
    return -2 - t - _d_sum(d, S)


def zr_restriction(d, S):
    d = tuple(int(x) for x in d)
    n = len(d)
    S = frozenset(S)
    if -1 in d or sum(d) != -sum(1 for x in d if x <= -2):
        raise SignatureShapeError("expected a genus-zero signature of the second kind")
    if not (2 <= len(S) <= n - 2) or not S <= frozenset(range(1, n + 1)):
        raise InvalidBoundaryIndex(f"{sorted(S)} does not index a boundary divisor")
    Sc = sorted(frozenset(range(1, n + 1)) - S)
    Ss = sorted(S)
    p = sum(1 for x in d if x < 0)
    s_minus = _n_neg(d, S)

    t1 = s_minus - 2
    n1 = node_order(d, S, t1)
    first = first_ret = None
    empty1 = True
    if t1 >= 0:
        first_ret = tuple(d[j - 1] for j in Ss) + (n1,)
        first = (n1,) + tuple(d[j - 1] for j in Ss) + (1,) * t1
        empty1 = n1 == -1 or zero_residue_empty(Signature(0, first))

    t2 = s_minus - 1
    n2 = node_order(d, S, t2)
    second = second_ret = None
    empty2 = True
    if p - 2 - t2 >= 0 and t2 >= 0:
        other = -2 - n2
        second_ret = tuple(d[j - 1] for j in Sc) + (other,)
        second = (other,) + tuple(d[j - 1] for j in Sc) + (1,) * (p - 2 - t2)
        empty2 = n2 == -1 or zero_residue_empty(Signature(0, second))
    return Restriction(S, s_minus, p, t1, n1, first, first_ret, empty1,
                       t2, n2, second, second_ret, empty2)
