"""Monodromy tuples of branched covers of the line, braid moves and Hurwitz counts.

Permutations are tuples in one-line notation on ``0..d-1``; cycle notation
on ``1..d`` is used for input and output.  Products are read left to
right: in ``p * q`` the permutation ``p`` acts first, so
``(p * q)(x) = q(p(x))``.
"""
import hashlib
import itertools
import json
import os
import re
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import factorial

from .errors import (
    IndexOutOfRange,
    InstanceTooLarge,
    InvalidProfile,
    NonIntegralGenus,
    NotTransitive,
    ProductNotIdentity,
)
from .signatures import RamificationProfile, theorem_hypothesis

__all__ = [
    "CONVENTION", "identity", "mul", "inverse", "cycle_type", "parse_cycles",
    "format_cycles", "MonodromyTuple", "validate_tuple", "tuple_genus",
    "braid_move", "canonical_form", "enumerate_tuples", "hurwitz_number",
    "OrbitReport", "braid_orbits", "ExampleReport", "paper_examples",
    "find_valid_arrangement",
]

CONVENTION = "left-first/v1"


def identity(d):
    return tuple(range(d))


def mul(p, q):
    """Product with `p` acting first."""
    return tuple(q[x] for x in p)


def inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def product(perms, d):
    acc = identity(d)
    for p in perms:
        acc = mul(acc, p)
    return acc


def cycles(p):
    seen, out = set(), []
    for start in range(len(p)):
        if start in seen:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


def cycle_type(p):
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def parse_cycles(text, d):
    """Parse ``"(12)(34)"`` or ``"(1,2)(3,4)"`` into a permutation of degree `d`."""
    perm = list(range(d))
    for body in re.findall(r"\(([^)]*)\)", text):
        pts = [int(x) for x in body.split(",")] if "," in body else [int(c) for c in body.strip()]
        if any(not 1 <= x <= d for x in pts) or len(set(pts)) != len(pts):
            raise InvalidProfile(f"cycle {body!r} is not valid in degree {d}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a - 1] = b - 1
    return tuple(perm)


def format_cycles(p):
    cyc = [c for c in cycles(p) if len(c) > 1]
    if not cyc:
        return "()"
    sep = "," if len(p) > 9 else ""
    return "".join("(" + sep.join(str(x + 1) for x in c) + ")" for c in cyc)


@dataclass(frozen=True)
class MonodromyTuple:
    d: int
    perms: tuple

    @classmethod
    def from_cycles(cls, d, texts):
        return cls(d, tuple(parse_cycles(t, d) for t in texts))

    def profile(self):
        return RamificationProfile(self.d, tuple(cycle_type(p) for p in self.perms))

    def __str__(self):
        return ", ".join(format_cycles(p) for p in self.perms)


def is_transitive(perms, d):
    seen, stack = {0}, [0]
    while stack:
        x = stack.pop()
        for p in perms:
            y = p[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == d


def validate_tuple(t):
    if product(t.perms, t.d) != identity(t.d):
        raise ProductNotIdentity(f"product of {t} is not the identity")
    if not is_transitive(t.perms, t.d):
        raise NotTransitive(f"{t} does not act transitively")
    return True


def tuple_genus(t):
    """Riemann-Hurwitz: ``2 - 2g = 2d - sum (d - #cycles)``."""
    ram = sum(t.d - len(cycles(p)) for p in t.perms)
    twice = ram - 2 * t.d + 2
    if twice % 2:
        raise NonIntegralGenus(f"total ramification {ram} is odd")
    return twice // 2


def braid_move(t, i, inverse_move=False):
    """Apply the braid generator at positions ``i, i+1`` (1-based).

    Forward: ``(a, b) -> (a b a^-1, a)``.  Inverse: ``(a, b) -> (b, b^-1 a b)``.
    """
    s = len(t.perms)
    if not 1 <= i < s:
        raise IndexOutOfRange(f"braid position {i} not in 1..{s - 1}")
    perms = list(t.perms)
    a, b = perms[i - 1], perms[i]
    if inverse_move:
        perms[i - 1], perms[i] = b, mul(mul(inverse(b), a), b)
    else:
        perms[i - 1], perms[i] = mul(mul(a, b), inverse(a)), a
    return MonodromyTuple(t.d, tuple(perms))


def _relabel_from(perms, d, start):
    label = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for p in perms:
            y = p[x]
            if y not in label:
                label[y] = len(label)
                queue.append(y)
    if len(label) != d:
        return None
    out = []
    for p in perms:
        q = [0] * d
        for x in range(d):
            q[label[x]] = label[p[x]]
        out.append(tuple(q))
    return tuple(out)


def canonical_form(perms, d):
    """Representative of the simultaneous conjugacy class of a transitive tuple.

    Relabel points in breadth-first order from each possible start and keep
    the lexicographically smallest result; conjugate tuples produce the same
    set of candidates.
    """
    best = None
    for start in range(d):
        cand = _relabel_from(perms, d, start)
        if cand is None:
            raise NotTransitive("canonical forms need a transitive tuple")
        if best is None or cand < best:
            best = cand
    return best


def _perms_of_type(d, part):
    part = tuple(sorted(part, reverse=True))
    return [p for p in itertools.permutations(range(d)) if cycle_type(p) == part]


def _distinct_orderings(parts):
    return sorted(set(itertools.permutations(parts)))


def _work_estimate(profile):
    d = profile.degree
    sizes = {}
    for part in set(profile.parts):
        size = factorial(d)
        counts = {}
        for e in part:
            counts[e] = counts.get(e, 0) + 1
        for e, c in counts.items():
            size //= e ** c * factorial(c)
        sizes[part] = size
    orderings = len(_distinct_orderings(profile.parts))
    worst = max((sizes[p] for p in profile.parts), default=1)
    est = orderings
    for part in sorted(profile.parts, key=lambda p: sizes[p])[:-1]:
        est *= sizes[part]
    return est, worst


def _guard(profile, max_degree, max_length, max_work):
    if profile.degree > max_degree or len(profile.parts) > max_length:
        raise InstanceTooLarge(
            f"degree {profile.degree} with {len(profile.parts)} branch points exceeds guards")
    est, _ = _work_estimate(profile)
    if est > max_work:
        raise InstanceTooLarge(f"about {est} candidate tuples; raise the work guard to proceed")


def enumerate_tuples(profile, max_degree=6, max_length=10, max_work=5_000_000):
    """All transitive tuples with product one realising some ordering of the profile."""
    _guard(profile, max_degree, max_length, max_work)
    d = profile.degree
    classes = {part: _perms_of_type(d, part) for part in set(profile.parts)}
    ident = identity(d)
    out = []
    for order in _distinct_orderings(profile.parts):
        if not order:
            continue
        last = order[-1]

        def extend(prefix, acc):
            k = len(prefix)
            if k == len(order) - 1:
                closing = inverse(acc)
                if cycle_type(closing) == last:
                    perms = tuple(prefix) + (closing,)
                    if is_transitive(perms, d):
                        out.append(MonodromyTuple(d, perms))
                return
            for p in classes[order[k]]:
                prefix.append(p)
                extend(prefix, mul(acc, p))
                prefix.pop()

        extend([], ident)
    return out


def hurwitz_number(profile, **guards):
    """Number of conjugacy classes of tuples (each class counted once)."""
    tuples = enumerate_tuples(profile, **guards)
    return len({canonical_form(t.perms, t.d) for t in tuples})


@dataclass
class OrbitReport:
    degree: int
    profile: tuple
    tuples: int
    classes: int
    orbit_sizes: list
    cached: bool = False

    @property
    def orbits(self):
        return len(self.orbit_sizes)

    def to_json(self):
        return {"degree": self.degree, "profile": [list(p) for p in self.profile],
                "tuples": self.tuples, "classes": self.classes,
                "orbits": self.orbits, "orbit_sizes": self.orbit_sizes,
                "convention": CONVENTION}


def _neighbours(form, d):
    t = MonodromyTuple(d, form)
    out = set()
    for i in range(1, len(form)):
        for inv in (False, True):
            moved = braid_move(t, i, inv)
            out.add(canonical_form(moved.perms, d))
    return out


def _cache_path(cache_dir, profile):
    key = json.dumps({"convention": CONVENTION, "degree": profile.degree,
                      "profile": sorted(list(p) for p in profile.parts)}, sort_keys=True)
    digest = hashlib.sha256(key.encode()).hexdigest()
    return os.path.join(cache_dir, f"orbits-{digest}.json")


def braid_orbits(profile, threads=1, cache_dir=None, **guards):
    """Split the conjugacy classes of tuples into braid group orbits.

    `cache_dir` defaults to the ``STRATA_CACHE`` environment variable; with
    neither set, nothing is stored.
    """
    cache_dir = cache_dir or os.environ.get("STRATA_CACHE")
    if cache_dir:
        path = _cache_path(cache_dir, profile)
        if os.path.exists(path):
            with open(path) as fh:
                data = json.load(fh)
            return OrbitReport(data["degree"], tuple(tuple(p) for p in data["profile"]),
                               data["tuples"], data["classes"], data["orbit_sizes"], cached=True)
    d = profile.degree
    tuples = enumerate_tuples(profile, **guards)
    forms = sorted({canonical_form(t.perms, d) for t in tuples})
    remaining = set(forms)
    sizes = []
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for start in forms:
            if start not in remaining:
                continue
            remaining.discard(start)
            frontier, size = [start], 1
            while frontier:
                if pool:
                    nbrs = list(pool.map(lambda f: _neighbours(f, d), frontier))
                else:
                    nbrs = [_neighbours(f, d) for f in frontier]
                nxt = []
                for group in nbrs:
                    for y in sorted(group):
                        if y in remaining:
                            remaining.discard(y)
                            nxt.append(y)
                size += len(nxt)
                frontier = nxt
            sizes.append(size)
    finally:
        if pool:
            pool.shutdown()
    sizes.sort(reverse=True)
    report = OrbitReport(d, profile.parts, len(tuples), len(forms), sizes)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        with open(_cache_path(cache_dir, profile), "w") as fh:
            json.dump(report.to_json(), fh)
    return report


# ---------------------------------------------------------------------------
# worked examples


EXAMPLE_GENUS_ONE = ("(12)(34)", "(456)", "(12)", "(13)", "(13)", "(14)", "(14)",
                     "(35)", "(45)", "(56)")
EXAMPLE_GENUS_ZERO = ("(12)(34)", "(135)", "(132)", "(34)", "(45)")


def find_valid_arrangement(texts, d):
    """Find how a listed tuple multiplies to one.

    Tries the listed order under both reading conventions, then all
    orderings.  Returns ``(convention, order)`` with `order` a tuple of
    indices into `texts`, or ``None``.
    """
    perms = [parse_cycles(t, d) for t in texts]
    listed = tuple(range(len(perms)))
    for conv in ("left-first", "right-first"):
        seq = perms if conv == "left-first" else perms[::-1]
        if product(seq, d) == identity(d):
            return conv, listed
    for order in itertools.permutations(range(len(perms))):
        if product([perms[i] for i in order], d) == identity(d):
            return "left-first", order
    return None


@dataclass
class ExampleReport:
    name: str
    cycles: tuple
    claimed_degree: int
    claimed_genus: int
    support_degree: int
    computed_genus: int
    arrangement: object
    transitive: bool
    profile: tuple
    verdict: str
    notes: list = field(default_factory=list)

    def to_json(self):
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def _example(name, texts, claimed_degree, claimed_genus):
    support = max(int(c) for t in texts for c in re.findall(r"\d", t))
    notes = []
    if support != claimed_degree:
        notes.append(f"cycles use {support} letters but the stated degree is {claimed_degree}; "
                     f"computed on {support} letters")
    d = support
    perms = tuple(parse_cycles(t, d) for t in texts)
    arrangement = find_valid_arrangement(texts, d)
    if arrangement is None:
        notes.append("no ordering multiplies to the identity")
    elif arrangement[1] != tuple(range(len(texts))):
        notes.append("listed order does not multiply to the identity; a reordering does")
    t = MonodromyTuple(d, perms)
    genus = tuple_genus(t)
    prof = t.profile()
    verdict = theorem_hypothesis(prof, genus).value
    return ExampleReport(name, tuple(texts), claimed_degree, claimed_genus, d, genus,
                         arrangement, is_transitive(perms, d),
                         tuple(prof.parts), verdict, notes)


def paper_examples():
    return [
        _example("genus-one example", EXAMPLE_GENUS_ONE, 5, 1),
        _example("genus-zero example", EXAMPLE_GENUS_ZERO, 5, 0),
    ]
