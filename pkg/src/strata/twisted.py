"""Twisted differentials on nodal curves and the zero-residue global residue condition.

A :class:`DualGraph` has vertices (component genus and marked points) and
edges (nodes, self-loops allowed).  An edge end is ``(edge, side)`` with
side 0 on ``edge.u`` and side 1 on ``edge.v``.  A :class:`TwistedConfig`
attaches orders at every marking and edge end, optional levels and
residues, and the set of zeroed marked poles.

Residues are pairs ``(re, im)`` of fractions.  Every condition checked here
is linear with rational coefficients, so solving is done over the rationals
and the imaginary parts of solutions are zero.
"""
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import InconsistentSplit, NotATree, NotFullOrder, ShapeError
from .signatures import Signature, zero_residue_empty

__all__ = [
    "Vertex", "Edge", "DualGraph", "TwistedConfig", "Violation", "GRCResult",
    "ResidueSolution", "validate_twisted", "zr_grc_check", "solve_residues",
    "compact_type_second_kind", "two_vertex_splittings", "restriction_codim",
    "RestrictionCodim",
]

ZERO = (Fraction(0), Fraction(0))


@dataclass(frozen=True)
class Vertex:
    genus: int
    markings: frozenset = frozenset()


@dataclass(frozen=True)
class Edge:
    u: int
    v: int

    def vertex(self, side):
        return self.u if side == 0 else self.v


@dataclass(frozen=True)
class DualGraph:
    vertices: tuple
    edges: tuple = ()

    def ends_at(self, vtx):
        out = []
        for e, edge in enumerate(self.edges):
            for side in (0, 1):
                if edge.vertex(side) == vtx:
                    out.append((e, side))
        return out

    def betti(self):
        return len(self.edges) - len(self.vertices) + self.components_count(range(len(self.vertices)))

    def genus(self):
        return sum(v.genus for v in self.vertices) + self.betti()

    def components(self, subset):
        """Connected components of the subgraph induced on `subset`."""
        subset = set(subset)
        adj = defaultdict(set)
        for edge in self.edges:
            if edge.u in subset and edge.v in subset:
                adj[edge.u].add(edge.v)
                adj[edge.v].add(edge.u)
        seen, comps = set(), []
        for start in sorted(subset):
            if start in seen:
                continue
            comp, stack = set(), [start]
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                stack.extend(adj[x] - comp)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def components_count(self, subset):
        return len(self.components(subset))

    def is_tree(self):
        return (all(e.u != e.v for e in self.edges)
                and len(self.edges) == len(self.vertices) - 1
                and self.components_count(range(len(self.vertices))) == 1)


@dataclass(frozen=True)
class Violation:
    axiom: str
    detail: str


@dataclass
class TwistedConfig:
    graph: DualGraph
    marking_orders: dict
    edge_orders: dict
    levels: dict = None
    zeroed: frozenset = frozenset()
    residues: dict = None
    genus: int = None

    def order(self, key):
        if key[0] == "mark":
            return self.marking_orders[key[1]]
        return self.edge_orders[(key[1], key[2])]

    def vertex_of(self, key):
        if key[0] == "mark":
            for i, v in enumerate(self.graph.vertices):
                if key[1] in v.markings:
                    return i
            raise ShapeError(f"marking {key[1]} is on no vertex")
        return self.graph.edges[key[1]].vertex(key[2])

    def keys_at(self, vtx):
        marks = [("mark", i) for i in sorted(self.graph.vertices[vtx].markings)]
        return marks + [("edge", e, s) for e, s in self.graph.ends_at(vtx)]

    def pole_keys(self):
        """Places carrying a residue: poles at markings and edge ends."""
        out = []
        for vtx in range(len(self.graph.vertices)):
            out.extend(k for k in self.keys_at(vtx) if self.order(k) <= -1)
        return out

    def residue(self, key):
        if self.residues is None:
            return ZERO
        return self.residues.get(key, ZERO)

    # JSON -----------------------------------------------------------------
    @classmethod
    def from_dict(cls, data):
        verts = tuple(Vertex(int(v["genus"]), frozenset(v.get("markings", ())))
                      for v in data["vertices"])
        edges, eorders = [], {}
        for e, item in enumerate(data.get("edges", ())):
            u, v = item["ends"]
            edges.append(Edge(int(u), int(v)))
            a, b = item["orders"]
            eorders[(e, 0)], eorders[(e, 1)] = int(a), int(b)
        marks = {int(k): int(v) for k, v in data.get("markings", {}).items()}
        levels = None
        if any("level" in v for v in data["vertices"]):
            levels = {i: Fraction(str(v["level"])) for i, v in enumerate(data["vertices"])
                      if "level" in v}
        residues = None
        if "residues" in data:
            residues = {}
            for item in data["residues"]:
                at = item["at"]
                key = ("mark", int(at[1])) if at[0] == "mark" else ("edge", int(at[1]), int(at[2]))
                residues[key] = (Fraction(str(item.get("re", 0))), Fraction(str(item.get("im", 0))))
        return cls(DualGraph(verts, tuple(edges)), marks, eorders, levels,
                   frozenset(int(x) for x in data.get("zeroed", ())), residues,
                   data.get("genus"))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# axioms


def _pair_edges(cfg):
    """Group non-loop edges by unordered vertex pair."""
    groups = defaultdict(list)
    for e, edge in enumerate(cfg.graph.edges):
        if edge.u != edge.v:
            groups[frozenset((edge.u, edge.v))].append(e)
    return groups


def _relation(cfg, e, a):
    """Compare vertex `a` with the other end of edge `e`: '>', '<' or '~'."""
    edge = cfg.graph.edges[e]
    side = 0 if edge.u == a else 1
    mine, other = cfg.edge_orders[(e, side)], cfg.edge_orders[(e, 1 - side)]
    if mine == other == -1:
        return "~"
    if mine > other:
        return ">"
    if mine < other:
        return "<"
    return "="


def validate_twisted(cfg):
    """Check axioms (1) to (5) independently; return every violation found."""
    out = []
    g = cfg.graph
    nverts = len(g.vertices)
    for e, edge in enumerate(g.edges):
        if not (0 <= edge.u < nverts and 0 <= edge.v < nverts):
            out.append(Violation("graph", f"edge {e} has an end off the graph"))
            return out
    seen = set()
    for i, v in enumerate(g.vertices):
        if seen & v.markings:
            out.append(Violation("graph", f"vertex {i} repeats a marking"))
        seen |= v.markings
    if seen != set(cfg.marking_orders):
        out.append(Violation("graph", "markings on vertices differ from marking orders"))
        return out
    if cfg.genus is not None and g.genus() != cfg.genus:
        out.append(Violation("graph", f"arithmetic genus {g.genus()} differs from {cfg.genus}"))
    for e in range(len(g.edges)):
        for s in (0, 1):
            if (e, s) not in cfg.edge_orders:
                out.append(Violation("1", f"edge end {(e, s)} has no order"))
                return out

    # (1) degree of the divisor on each component
    for i, v in enumerate(g.vertices):
        total = sum(cfg.order(k) for k in cfg.keys_at(i))
        if total != 2 * v.genus - 2:
            out.append(Violation("1", f"vertex {i}: orders sum to {total}, not {2 * v.genus - 2}"))
    # (2) orders at the two branches of a node
    for e in range(len(g.edges)):
        total = cfg.edge_orders[(e, 0)] + cfg.edge_orders[(e, 1)]
        if total != -2:
            out.append(Violation("2", f"edge {e}: orders sum to {total}, not -2"))
    # (3) and (4) consistency over parallel edges
    for pair, es in sorted(_pair_edges(cfg).items(), key=lambda kv: sorted(kv[0])):
        a = min(pair)
        rels = {_relation(cfg, e, a) for e in es}
        if "~" in rels and len(rels) > 1:
            out.append(Violation("3", f"vertices {sorted(pair)}: a -1/-1 node next to other orders"))
        if ">" in rels and "<" in rels:
            out.append(Violation("4", f"vertices {sorted(pair)}: inconsistent comparison"))
    # (5) no directed loop through a strict comparison
    for msg in _directed_loops(cfg):
        out.append(Violation("5", msg))
    if cfg.levels is not None:
        out.extend(_level_violations(cfg))
    return out


def _sim_classes(cfg):
    parent = list(range(len(cfg.graph.vertices)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, edge in enumerate(cfg.graph.edges):
        if cfg.edge_orders[(e, 0)] == cfg.edge_orders[(e, 1)] == -1:
            parent[find(edge.u)] = find(edge.v)
    return find


def _directed_loops(cfg):
    find = _sim_classes(cfg)
    succ = defaultdict(set)
    msgs = []
    for e, edge in enumerate(cfg.graph.edges):
        a, b = cfg.edge_orders[(e, 0)], cfg.edge_orders[(e, 1)]
        if a == b:
            continue
        hi, lo = (edge.u, edge.v) if a > b else (edge.v, edge.u)
        if find(hi) == find(lo):
            msgs.append(f"edge {e} compares strictly inside one ~ class")
        else:
            succ[find(hi)].add(find(lo))
    colour = {}

    def visit(x):
        colour[x] = 1
        for y in sorted(succ[x]):
            if colour.get(y) == 1:
                return True
            if y not in colour and visit(y):
                return True
        colour[x] = 2
        return False

    for x in sorted(succ):
        if x not in colour and visit(x):
            msgs.append("directed loop among components")
            break
    return msgs


def _level_violations(cfg):
    out = []
    lv = cfg.levels
    for i in range(len(cfg.graph.vertices)):
        if i not in lv:
            out.append(Violation("levels", f"vertex {i} has no level"))
    if out:
        return out
    for e, edge in enumerate(cfg.graph.edges):
        a, b = cfg.edge_orders[(e, 0)], cfg.edge_orders[(e, 1)]
        lu, lw = lv[edge.u], lv[edge.v]
        if a == b == -1 and lu != lw:
            out.append(Violation("levels", f"horizontal edge {e} joins different levels"))
        elif a > b and not lu > lw or a < b and not lu < lw:
            out.append(Violation("levels", f"edge {e}: levels disagree with orders"))
    return out


# ---------------------------------------------------------------------------
# global residue condition


@dataclass
class GRCResult:
    ok: bool
    failures: list = field(default_factory=list)


def _require_full_order(cfg):
    if cfg.levels is None:
        raise NotFullOrder("no levels given")
    bad = _level_violations(cfg)
    if bad:
        raise NotFullOrder("; ".join(v.detail for v in bad))


def _horizontal_edges(cfg):
    return [e for e in range(len(cfg.graph.edges))
            if cfg.edge_orders[(e, 0)] == cfg.edge_orders[(e, 1)] == -1]


def _grc_groups(cfg):
    """For each level and component above it that needs a condition: the summed ends."""
    lv = cfg.levels
    out = []
    marks_at = defaultdict(list)
    for i, v in enumerate(cfg.graph.vertices):
        marks_at[i] = sorted(v.markings)
    for L in sorted(set(lv.values())):
        above = [i for i in lv if lv[i] > L]
        for Y in cfg.graph.components(above):
            free_pole = any(cfg.marking_orders[m] <= -1 and m not in cfg.zeroed
                            for i in Y for m in marks_at[i])
            if free_pole:
                continue
            ends = []
            for e, edge in enumerate(cfg.graph.edges):
                for side in (0, 1):
                    here, there = edge.vertex(side), edge.vertex(1 - side)
                    if lv[here] == L and there in Y:
                        ends.append(("edge", e, side))
            if ends:
                out.append((L, Y, ends))
    return out


def zr_grc_check(cfg):
    """Check supplied residues against the zero-residue global residue condition.

    Failures are tuples ``("horizontal", edge)``, ``("zeroed", marking)``,
    ``("grc", level, component)`` and ``("residue-theorem", vertex)``.
    """
    _require_full_order(cfg)
    fails = []
    for e in _horizontal_edges(cfg):
        a, b = cfg.residue(("edge", e, 0)), cfg.residue(("edge", e, 1))
        if a[0] + b[0] or a[1] + b[1]:
            fails.append(("horizontal", e))
    for m in sorted(cfg.zeroed):
        if cfg.residue(("mark", m)) != ZERO:
            fails.append(("zeroed", m))
    for L, Y, ends in _grc_groups(cfg):
        re = sum(cfg.residue(k)[0] for k in ends)
        im = sum(cfg.residue(k)[1] for k in ends)
        if re or im:
            fails.append(("grc", L, tuple(sorted(Y))))
    for i in range(len(cfg.graph.vertices)):
        ks = [k for k in cfg.keys_at(i) if cfg.order(k) <= -1]
        if sum(cfg.residue(k)[0] for k in ks) or sum(cfg.residue(k)[1] for k in ks):
            fails.append(("residue-theorem", i))
    return GRCResult(not fails, fails)


@dataclass
class ResidueSolution:
    exists: bool
    residues: dict
    caveat: str = ("linear solvability is necessary for smoothing; whether each "
                   "component realises its residues is not checked")


def solve_residues(cfg):
    """Find residues satisfying the linear conditions, nonzero at every simple pole."""
    _require_full_order(cfg)
    keys = [k for k in cfg.pole_keys() if not (k[0] == "mark" and k[1] in cfg.zeroed)]
    index = {k: i for i, k in enumerate(keys)}
    n = len(keys)
    rows = []

    def row(terms):
        r = [Fraction(0)] * n
        for k in terms:
            if k in index:
                r[index[k]] += 1
        return r

    for e in _horizontal_edges(cfg):
        rows.append(row([("edge", e, 0), ("edge", e, 1)]))
    for _, _, ends in _grc_groups(cfg):
        rows.append(row(ends))
    for i in range(len(cfg.graph.vertices)):
        rows.append(row([k for k in cfg.keys_at(i) if cfg.order(k) <= -1]))
    rows = [r for r in rows if any(r)]
    basis = linalg.nullspace(rows, n) if n else []
    simple = [index[k] for k in keys if cfg.order(k) == -1]
    # a simple pole must keep a nonzero residue
    if any(all(b[i] == 0 for b in basis) for i in simple):
        return ResidueSolution(False, {})
    sol = [Fraction(0)] * n
    for t in range(1, 2 + n * max(len(basis), 1) * 4):
        sol = [sum((Fraction(t) ** j * b[i] for j, b in enumerate(basis)), Fraction(0))
               for i in range(n)]
        if all(sol[i] != 0 for i in simple):
            break
    residues = {k: (sol[index[k]], Fraction(0)) for k in keys}
    for m in cfg.zeroed:
        residues[("mark", m)] = ZERO
    return ResidueSolution(True, residues)


# ---------------------------------------------------------------------------
# compact type


def compact_type_second_kind(cfg):
    """Whether every component can carry a differential of the second kind.

    Requires a tree.  Each component's signature (markings plus node
    orders) must avoid simple poles and its zero-residue stratum must be
    nonempty.
    """
    if not cfg.graph.is_tree():
        raise NotATree("dual graph is not a tree")
    if any(o == -1 for o in cfg.marking_orders.values()):
        return False
    if validate_twisted(cfg):
        return False
    for i, v in enumerate(cfg.graph.vertices):
        orders = [cfg.order(k) for k in cfg.keys_at(i)]
        if -1 in orders:
            return False
        if zero_residue_empty(Signature(v.genus, orders)):
            return False
    return True


def two_vertex_splittings(kappa):
    """Stable genus-zero configs with two vertices and one node, one per marking split."""
    n = len(kappa)
    out = []
    for mask in range(1, 2 ** n - 1):
        S = frozenset(i + 1 for i in range(n) if mask >> i & 1)
        if 1 not in S or len(S) < 2 or n - len(S) < 2:
            continue
        Sc = frozenset(range(1, n + 1)) - S
        a = -2 - sum(kappa[i - 1] for i in S)
        graph = DualGraph((Vertex(0, S), Vertex(0, Sc)), (Edge(0, 1),))
        orders = {(0, 0): a, (0, 1): -2 - a}
        out.append(TwistedConfig(graph, {i + 1: k for i, k in enumerate(kappa)}, orders))
    return out


@dataclass(frozen=True)
class RestrictionCodim:
    codim: int
    expected: int
    empty: bool


def restriction_codim(sig, components):
    """Codimension count on a genus-zero boundary stratum with ``len(components)`` parts."""
    kappa = tuple(sig.entries if isinstance(sig, Signature) else sig)
    comps = [tuple(c.entries if isinstance(c, Signature) else c) for c in components]
    nodes = len(comps) - 1
    if nodes < 0:
        raise InconsistentSplit("no components")
    if any(sum(c) != -2 for c in comps):
        raise InconsistentSplit("a component is not a genus-zero signature")
    if sum(len(c) for c in comps) != len(kappa) + 2 * nodes:
        raise InconsistentSplit("entry count does not match the number of nodes")
    if sum(sum(c) for c in comps) != sum(kappa) - 2 * nodes:
        raise InconsistentSplit("orders do not add up")

    def poles(c):
        return sum(1 for x in c if x < 0)

    codim = sum(poles(c) - 1 for c in comps)
    expected = poles(kappa) - 1
    empty = any(zero_residue_empty(Signature(0, c)) for c in comps)
    return RestrictionCodim(codim, expected, empty)
