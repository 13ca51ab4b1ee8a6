"""Chart data of the infinite zippered rectangle construction and residue forms.

A chart is given by cut points ``nplus``/``nminus`` (listed without the
leading zero), the permutations ``pit``/``pib`` in one-line notation on
``1..n``, the pole block boundaries ``dvec = (0, d_1, ..., d_r = d)`` and the
numbers ``splus``/``sminus`` of half-plane domains carrying simple poles.

Domains ``0..d-1`` are grouped into ``r`` blocks, one per non-simple pole;
block ``i`` has ``d_i - d_{i-1}`` domains and the pole there has order
``d_i - d_{i-1} + 1``.  Residues are integer linear forms in the saddle
connection vectors ``v_1..v_n`` (the ``1/(2 pi i)`` factor is dropped).
"""
import json
import random
from dataclasses import asdict, dataclass

from . import linalg
from .errors import DisconnectedSurface, PoleIndexOutOfRange, ShapeError

__all__ = [
    "ChartData", "ResidueForm", "validate_chart", "coordinate_count",
    "residue_form", "all_residue_forms", "zero_residue_rank", "random_chart",
    "pole_orders",
]


@dataclass(frozen=True)
class ChartData:
    n: int
    nplus: tuple
    nminus: tuple
    pit: tuple
    pib: tuple
    dvec: tuple
    splus: int
    sminus: int

    @property
    def d(self):
        return self.dvec[-1]

    @property
    def r(self):
        """Number of non-simple poles."""
        return len(self.dvec) - 1

    @classmethod
    def from_dict(cls, data):
        try:
            chart = cls(int(data["n"]), tuple(data["nplus"]), tuple(data["nminus"]),
                        tuple(data["pit"]), tuple(data["pib"]), tuple(data["dvec"]),
                        int(data["splus"]), int(data["sminus"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ShapeError(f"malformed chart: {exc}") from exc
        if "d" in data and int(data["d"]) != chart.d:
            raise ShapeError(f"d={data['d']} disagrees with dvec ending at {chart.d}")
        return chart

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        out = {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}
        out["d"] = self.d
        return out

    def cuts(self, sign):
        """Cut points with the leading zero, for the top (+) or bottom (-) row."""
        return (0,) + tuple(self.nplus if sign > 0 else self.nminus)

    def relabel(self, sigma):
        """Rename ``v_j`` to ``v_{sigma[j-1]}``."""
        return ChartData(self.n, self.nplus, self.nminus,
                         tuple(sigma[x - 1] for x in self.pit),
                         tuple(sigma[x - 1] for x in self.pib),
                         self.dvec, self.splus, self.sminus)


@dataclass(frozen=True)
class ResidueForm:
    """Integer coefficients of ``v_1..v_n``."""
    coefficients: tuple

    def __add__(self, other):
        return ResidueForm(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def is_zero(self):
        return not any(self.coefficients)

    def as_dict(self):
        return {j: c for j, c in enumerate(self.coefficients, start=1) if c}

    def __str__(self):
        out = []
        for j, c in self.as_dict().items():
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            out.append(f"{sign}{mag}v{j}")
        if not out:
            return "0"
        text = "".join(out)
        return text[1:] if text[0] == "+" else text


def coordinate_count(g, kappa):
    return 2 * g + len(tuple(kappa)) - 2


def _check_cuts(name, cuts, d, s, n):
    if len(cuts) != d + s + 1:
        raise ShapeError(f"{name} must have d + s = {d + s} entries, got {len(cuts) - 1}")
    if cuts[-1] != n:
        raise ShapeError(f"{name} must end at n = {n}")
    for i in range(1, len(cuts)):
        a, b = cuts[i - 1], cuts[i]
        if i <= d and b < a:
            raise ShapeError(f"{name} decreases at position {i}")
        if i > d and b <= a:
            raise ShapeError(f"{name} must increase strictly after position {d}")


def _blocks(chart):
    """Map each domain index ``0..d-1`` to its pole block ``0..r-1``."""
    owner = []
    for b in range(chart.r):
        owner.extend([b] * (chart.dvec[b + 1] - chart.dvec[b]))
    return owner


def _locations(chart, sign):
    """Node of the gluing graph holding each variable in the given row."""
    cuts = chart.cuts(sign)
    perm = chart.pit if sign > 0 else chart.pib
    owner = _blocks(chart)
    loc = {}
    for dom in range(len(cuts) - 1):
        node = ("pole", owner[dom]) if dom < chart.d else (("C+" if sign > 0 else "C-"), dom)
        for pos in range(cuts[dom] + 1, cuts[dom + 1] + 1):
            loc[perm[pos - 1]] = node
    return loc


def validate_chart(chart):
    n, d = chart.n, chart.d
    if n < 1:
        raise ShapeError("need at least one saddle connection")
    dv = chart.dvec
    if not dv or dv[0] != 0 or any(b <= a for a, b in zip(dv, dv[1:])):
        raise ShapeError("dvec must start at 0 and increase strictly")
    if chart.splus < 0 or chart.sminus < 0:
        raise ShapeError("negative simple pole count")
    for name, perm in (("pit", chart.pit), ("pib", chart.pib)):
        if sorted(perm) != list(range(1, n + 1)):
            raise ShapeError(f"{name} is not a permutation of 1..{n}")
    _check_cuts("nplus", chart.cuts(1), d, chart.splus, n)
    _check_cuts("nminus", chart.cuts(-1), d, chart.sminus, n)
    top, bottom = _locations(chart, 1), _locations(chart, -1)
    nodes = set(top.values()) | set(bottom.values()) | {("pole", b) for b in range(chart.r)}
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in range(1, n + 1):
        parent[find(top[v])] = find(bottom[v])
    if len({find(x) for x in nodes}) != 1:
        raise DisconnectedSurface("the glued domains form more than one surface")
    return True


def pole_orders(chart):
    """Orders of the poles in residue order: non-simple blocks, then simple poles."""
    return tuple(chart.dvec[i + 1] - chart.dvec[i] + 1 for i in range(chart.r)) + \
        (1,) * (chart.splus + chart.sminus)


def residue_form(chart, pole):
    """Residue at pole ``pole`` (1-based).

    Poles ``1..r`` are the non-simple ones; then come the ``splus`` poles in
    upper half-plane domains and the ``sminus`` ones in lower domains.  The
    bottom sum of a non-simple pole runs over the ``nminus`` cut points of its
    block, the lower row's own boundaries.
    """
    r, d = chart.r, chart.d
    total = r + chart.splus + chart.sminus
    if not 1 <= pole <= total:
        raise PoleIndexOutOfRange(f"pole {pole} not in 1..{total}")
    coef = [0] * chart.n
    top, bottom = chart.cuts(1), chart.cuts(-1)
    if pole <= r:
        lo, hi = chart.dvec[pole - 1], chart.dvec[pole]
        for j in range(top[lo] + 1, top[hi] + 1):
            coef[chart.pit[j - 1] - 1] += 1
        for j in range(bottom[lo] + 1, bottom[hi] + 1):
            coef[chart.pib[j - 1] - 1] -= 1
    elif pole <= r + chart.splus:
        dom = d + pole - r - 1
        for j in range(top[dom] + 1, top[dom + 1] + 1):
            coef[chart.pit[j - 1] - 1] += 1
    else:
        dom = d + pole - r - chart.splus - 1
        for j in range(bottom[dom] + 1, bottom[dom + 1] + 1):
            coef[chart.pib[j - 1] - 1] -= 1
    return ResidueForm(tuple(coef))


def all_residue_forms(chart):
    total = chart.r + chart.splus + chart.sminus
    return [residue_form(chart, p) for p in range(1, total + 1)]


def zero_residue_rank(chart):
    """Rank of the residue forms at the non-simple poles."""
    validate_chart(chart)
    rows = [residue_form(chart, p).coefficients for p in range(1, chart.r + 1)]
    return linalg.rank(rows, chart.n) if rows else 0


def _random_cuts(rng, n, d, s):
    # d weakly increasing cut points, then s strictly increasing ones ending at n
    if s == 0:
        inner = sorted(rng.randint(0, n) for _ in range(d - 1))
        return tuple(inner) + (n,)
    tail_start = rng.randint(0, n - s)
    head = sorted(rng.randint(0, tail_start) for _ in range(d))
    if d:
        head[-1] = tail_start
    rest = sorted(rng.sample(range(tail_start + 1, n), s - 1)) + [n]
    return tuple(head) + tuple(rest)


def random_chart(rng=None, max_poles=3, max_order=4, max_simple=2, max_n=8, tries=1000):
    """Sample a valid connected chart by rejection."""
    rng = rng or random.Random()
    for _ in range(tries):
        r = rng.randint(1, max_poles)
        dv = [0]
        for _ in range(r):
            dv.append(dv[-1] + rng.randint(1, max_order - 1))
        d = dv[-1]
        sp, sm = rng.randint(0, max_simple), rng.randint(0, max_simple)
        n = rng.randint(max(1, sp, sm), max(max_n, sp, sm, 1))
        if d == 0 and (sp == 0 or sm == 0):
            continue
        pit = list(range(1, n + 1))
        pib = list(range(1, n + 1))
        rng.shuffle(pit)
        rng.shuffle(pib)
        chart = ChartData(n, _random_cuts(rng, n, d, sp), _random_cuts(rng, n, d, sm),
                          tuple(pit), tuple(pib), tuple(dv), sp, sm)
        try:
            validate_chart(chart)
        except (ShapeError, DisconnectedSurface):
            continue
        return chart
    raise RuntimeError("no valid chart found")
