"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import json
import random
import time
import warnings
from importlib import resources
from itertools import combinations, combinations_with_replacement
from math import comb

import pytest

from families import lowered, random_family
from oracles import genus_zero_signatures, genus_zero_zero_residue_exists
from strata.curves import is_fnef, pair_test_curve_last_point, pair_test_curve_tail
from strata.errors import EmptyStratum, SignatureShapeError
from strata.flatgeom import (
    ChartData, all_residue_forms, random_chart, zero_residue_rank,
)
from strata.hurwitz import braid_orbits, paper_examples
from strata.linalg import rank
from strata.picard import (
    DivisorClass, EdgeLabeledGraph, boundary_effective_witness, equals_mod_relations,
    keel_graph_class, normal_form, pullback_glue, quotient_dimension,
    relation_matrix_genus_zero, witness_class, zero_residue_class, zr_restriction,
)
from strata.signatures import Signature, parse_profile, zero_residue_empty

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    def emit(number, ok, elapsed, limit, detail=""):
        line = f"{'PASS' if ok and elapsed < limit else 'FAIL'} criterion {number}: " \
               f"{elapsed:.2f}s (limit {limit}s) {detail}".rstrip()
        with capsys.disabled():
            print("\n" + line)
        assert ok, detail
        assert elapsed < limit, f"took {elapsed:.2f}s"
    return emit


def genus_zero_second_kind(lo, hi, n_values):
    """Sorted retained orders without simple poles, summing to minus the pole count."""
    values = [x for x in range(lo, hi + 1) if x != -1]
    for n in n_values:
        for d in combinations_with_replacement(values, n):
            m = sum(1 for x in d if x < 0)
            if m >= 2 and sum(d) == -m:
                yield d


def test_criterion_01_golden_class(report):
    start = time.perf_counter()
    got = zero_residue_class(2, (-2, -2, 4))
    elapsed = time.perf_counter() - start
    expected = DivisorClass.build(2, 3, lam=-1, psi={1: 1, 2: 1, 3: 10}, bnd=[
        ((1, frozenset()), -1),
        ((1, frozenset({1})), -3), ((1, frozenset({2})), -3),
        ((0, frozenset({1, 2})), -3), ((0, frozenset({1, 2, 3})), -3),
        ((0, frozenset({2, 3})), -6), ((0, frozenset({1, 3})), -6), ((1, frozenset({3})), -6)])
    fixture = json.loads((resources.files("strata") / "fixtures" / "golden_class.json").read_text())
    ok = got == expected == DivisorClass.from_json(fixture["class"])
    report(1, ok, elapsed, 1, str(got))


def test_criterion_02_pullback_induction(report):
    rng = random.Random(2)
    start = time.perf_counter()
    checked = failures = 0
    while checked < 60:
        g = rng.randint(0, 3)
        n = rng.randint(3 if g == 0 else 2, 6)
        d = [rng.choice([x for x in range(-5, 6) if x != -1]) for _ in range(n)]
        d[0] = rng.randint(-5, -2)
        d = tuple(d)
        if sum(1 for x in d if x <= -2) > 3 or not any(x <= -2 for x in d[1:]):
            continue
        try:
            direct = zero_residue_class(g, d)
        except (EmptyStratum, SignatureShapeError):
            continue
        h = -d[0]
        derived = pullback_glue(zero_residue_class(g + h, (1,) + d[1:]), h)
        checked += 1
        failures += not equals_mod_relations(direct, derived)
    elapsed = time.perf_counter() - start
    report(2, failures == 0, elapsed, 10, f"{checked} signatures, {failures} mismatches")


def test_criterion_03_fnef_sweep(report):
    start = time.perf_counter()
    checked = violations = 0
    for d in genus_zero_second_kind(-4, 4, range(4, 8)):
        try:
            c = zero_residue_class(0, d)
        except EmptyStratum:
            continue
        ok, bad = is_fnef(c)
        checked += 1
        violations += len(bad)
    elapsed = time.perf_counter() - start
    report(3, violations == 0 and checked > 0, elapsed, 300,
           f"{checked} signatures up to relabeling, {violations} violations")


def test_criterion_04_boundary_effective(report):
    rng = random.Random(4)
    pool = [d for d in genus_zero_second_kind(-5, 5, range(4, 8))
            if not zero_residue_empty(Signature(0, d))]
    sample = rng.sample(pool, 120)
    start = time.perf_counter()
    bad = 0
    for d in sample:
        d = tuple(rng.sample(d, len(d)))
        coeffs, _, _, _ = boundary_effective_witness(d)
        nonneg = all(v >= 0 for v in coeffs.values())
        matches = equals_mod_relations(witness_class(len(d), coeffs), 2 * zero_residue_class(0, d))
        bad += not (nonneg and matches)
    elapsed = time.perf_counter() - start
    report(4, bad == 0, elapsed, 60, f"{len(sample)} signatures, {bad} failures")


def test_criterion_05_keel(report):
    rng = random.Random(5)
    start = time.perf_counter()
    nonzero = 0
    ranks = {}
    for n in range(5, 9):
        pairs = list(combinations(range(1, n + 1), 2))
        for _ in range(100):
            labels = {e: rng.randint(-6, 6) for e in rng.sample(pairs, rng.randint(1, len(pairs)))}
            nonzero += not normal_form(keel_graph_class(EdgeLabeledGraph.from_dict(n, labels))).is_zero()
        ranks[n] = rank(relation_matrix_genus_zero(n))
    dims = (quotient_dimension(5), quotient_dimension(6))
    elapsed = time.perf_counter() - start
    ok = nonzero == 0 and all(ranks[n] == comb(n, 2) for n in ranks) and dims == (5, 16)
    report(5, ok, elapsed, 30, f"ranks {ranks}, quotient dims {dims}")


def test_criterion_06_figure_residues(report):
    start = time.perf_counter()
    data = json.loads((resources.files("strata") / "fixtures" / "figure1.json").read_text())
    forms = [str(f) for f in all_residue_forms(ChartData.from_dict(data["chart"]))]
    rng = random.Random(6)
    unbalanced = 0
    for _ in range(100):
        chart = random_chart(rng)
        cols = zip(*(f.coefficients for f in all_residue_forms(chart)))
        unbalanced += any(sum(col) for col in cols)
    elapsed = time.perf_counter() - start
    report(6, forms == ["-v1-v3", "v1+v3"] and unbalanced == 0, elapsed, 5,
           f"forms {forms}, {unbalanced} unbalanced charts")


def test_criterion_07_codimension(report):
    rng = random.Random(7)
    start = time.perf_counter()
    wrong = 0
    for _ in range(100):
        chart = random_chart(rng, max_poles=3)
        m, k = chart.r, chart.splus + chart.sminus
        wrong += zero_residue_rank(chart) != (m - 1 if k == 0 else m)
    elapsed = time.perf_counter() - start
    report(7, wrong == 0, elapsed, 30, f"{wrong} mismatches on 100 charts")


def test_criterion_08_emptiness(report):
    start = time.perf_counter()
    disagreements = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        signatures = genus_zero_signatures(max_len=6, lo=-4, hi=4)
        for kappa in signatures:
            exists = genus_zero_zero_residue_exists(kappa)
            if exists == zero_residue_empty(Signature(0, kappa)):
                disagreements.append(kappa)
    elapsed = time.perf_counter() - start
    report(8, not disagreements, elapsed, 120,
           f"{len(signatures)} signatures, disagreements {disagreements[:5]}")


def test_criterion_09_hurwitz(report):
    start = time.perf_counter()
    small = braid_orbits(parse_profile("[2,1],[2,1],[2,1],[2,1]"))
    six = braid_orbits(parse_profile(",".join(["[2,1,1]"] * 6)))
    one, zero = paper_examples()
    elapsed = time.perf_counter() - start
    ok = (small.classes, small.orbits) == (4, 1) and six.orbits == 1
    ok = ok and zero.arrangement is not None and zero.computed_genus == 0
    ok = ok and zero.verdict == "GenusZeroApplies"
    ok = ok and one.support_degree != one.claimed_degree and any("degree" in n for n in one.notes)
    report(9, ok, elapsed, 60,
           f"d=3: {small.classes} classes/{small.orbits} orbit; d=4: {six.orbits} orbit; "
           f"genus-one example flagged: {one.notes[0]}")


def test_criterion_10_restriction(report):
    start = time.perf_counter()
    problems = []
    sweeps = 0
    for d in genus_zero_second_kind(-5, 5, range(4, 7)):
        n = len(d)
        p = sum(1 for x in d if x < 0)
        for r in range(2, n - 1):
            for S in combinations(range(1, n + 1), r):
                res = zr_restriction(d, S)
                sweeps += 1
                d_S = sum(d[i - 1] for i in S)
                s_minus = sum(1 for i in S if d[i - 1] < 0)
                checks = [res.s_minus == s_minus,
                          res.node_first == -2 - (s_minus - 2) - d_S,
                          res.node_second == -2 - (s_minus - 1) - d_S]
                if res.first is not None:
                    checks += [sum(res.first) == -2, len(res.first) == len(S) + 1 + s_minus - 2]
                    if res.node_first == -1:
                        checks.append(res.first_empty and not res.first_contributes)
                if res.second is not None:
                    checks += [sum(res.second) == -2,
                               len(res.second) == n - len(S) + 1 + p - 1 - s_minus]
                    if res.node_second == -1:
                        checks.append(res.second_empty and not res.second_contributes)
                if not all(checks):
                    problems.append((d, S))
    elapsed = time.perf_counter() - start
    report(10, not problems, elapsed, 60, f"{sweeps} restrictions, {len(problems)} problems")


def test_criterion_11_test_curve_displays(report):
    """The displayed difference and the final tail comparison, as printed.

    The difference display uses ``|a_k - p_i|`` where the single pairings
    give ``|a_k - p_i + 1|``, and the tail comparison assumes the opposite
    sign for the self-intersection of the moving tail.  Both are checked
    literally; see the notes for the analysis.
    """
    rng = random.Random(11)
    start = time.perf_counter()
    samples = diff_ok = tail_ok = 0
    while samples < 40:
        p, a = random_family(rng, s_range=(3, 5), m_range=(2, 2), p_max=8)
        s, m, n = len(p), len(a), len(p) + len(a)
        i, k = rng.sample(range(s), 2)
        j = rng.choice([x for x in range(s) if x not in (i, k)])
        if p[i] < 3:
            continue
        try:
            zi = zero_residue_class(0, lowered(p, a, i))
            zj = zero_residue_class(0, lowered(p, a, j))
        except (EmptyStratum, SignatureShapeError):
            continue
        samples += 1
        lhs = 2 * pair_test_curve_last_point(zi - zj, i + 1)
        rhs = 2 - m + sum(abs(ak - p[i]) - abs(ak - p[i] + 2) for ak in a)
        diff_ok += lhs == rhs
        gap = 2 * (pair_test_curve_tail(zi, (i + 1, k + 1)) - pair_test_curve_tail(zj, (i + 1, k + 1)))
        tail_ok += gap == n + s - 4 and gap > 0
    elapsed = time.perf_counter() - start
    report(11, diff_ok == samples and tail_ok == samples, elapsed, 30,
           f"difference display {diff_ok}/{samples}, tail display {tail_ok}/{samples}")


def test_criterion_12_headline_coverage(report):
    """Property-level stand-ins for the irreducibility statements."""
    start = time.perf_counter()
    one, zero = paper_examples()
    predicates = zero.verdict == "GenusZeroApplies" and one.verdict == "GeneralGenusApplies"
    base = all(braid_orbits(parse_profile(",".join([f"[2{',1' * (d - 2)}]"] * (2 * d - 2)))).orbits == 1
               for d in (2, 3, 4))
    # the lowered classes are told apart by some moving-point curve
    rng = random.Random(12)
    separated = 0
    for _ in range(200):
        p, a = random_family(rng)
        i, j = rng.sample(range(len(p)), 2)
        try:
            zi = zero_residue_class(0, lowered(p, a, i))
            zj = zero_residue_class(0, lowered(p, a, j))
        except (EmptyStratum, SignatureShapeError):
            continue
        if pair_test_curve_last_point(zi - zj, i + 1) != 0:
            separated += 1
    elapsed = time.perf_counter() - start
    report(12, predicates and base and separated > 0, elapsed, 60,
           f"predicates {predicates}, simple-branching orbits connected {base}, "
           f"{separated} separating pairings")
