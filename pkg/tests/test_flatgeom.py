import json
import random
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strata.errors import DisconnectedSurface, PoleIndexOutOfRange, ShapeError
from strata.flatgeom import (
    ChartData, all_residue_forms, coordinate_count, pole_orders, random_chart,
    residue_form, validate_chart, zero_residue_rank,
)

FIGURE = ChartData(4, (2, 4), (4,), (4, 2, 1, 3), (1, 2, 3, 4), (0, 1), 1, 0)


def test_figure_chart():
    assert validate_chart(FIGURE)
    assert [str(residue_form(FIGURE, p)) for p in (1, 2)] == ["-v1-v3", "v1+v3"]
    assert pole_orders(FIGURE) == (2, 1)
    assert zero_residue_rank(FIGURE) == 1


def test_figure_fixture():
    data = json.loads((resources.files("strata") / "fixtures" / "figure1.json").read_text())
    chart = ChartData.from_dict(data["chart"])
    assert chart == FIGURE
    assert [str(f) for f in all_residue_forms(chart)] == data["residues"]
    assert ChartData.from_json(json.dumps(FIGURE.to_dict())) == FIGURE


def test_shape_errors():
    with pytest.raises(ShapeError):
        validate_chart(ChartData(4, (2, 4), (4,), (4, 2, 1, 3), (1, 2, 3, 3), (0, 1), 1, 0))
    with pytest.raises(ShapeError):
        validate_chart(ChartData(4, (2, 4, 4), (4,), (4, 2, 1, 3), (1, 2, 3, 4), (0, 1), 1, 0))
    with pytest.raises(ShapeError):
        ChartData.from_dict({"n": 4})
    with pytest.raises(ShapeError):
        ChartData.from_dict(dict(FIGURE.to_dict(), d=3))


def test_doubled_figure_disconnected():
    doubled = ChartData(8, (2, 4, 6, 8), (4, 8), (4, 2, 8, 6, 1, 3, 5, 7),
                        tuple(range(1, 9)), (0, 1, 2), 2, 0)
    with pytest.raises(DisconnectedSurface):
        validate_chart(doubled)


def test_pole_index():
    with pytest.raises(PoleIndexOutOfRange):
        residue_form(FIGURE, 3)


def test_single_pole_rank_zero():
    chart = ChartData(2, (2,), (2,), (1, 2), (2, 1), (0, 1), 0, 0)
    assert residue_form(chart, 1).is_zero()
    assert zero_residue_rank(chart) == 0


@pytest.mark.parametrize("g,kappa,count", [
    (1, (2, 1, -1, -2), 4), (0, (-2, -2, 1, 1), 2), (2, (1, 1), 4)])
def test_coordinate_count(g, kappa, count):
    assert coordinate_count(g, kappa) == count


@given(st.integers(0, 10 ** 6))
@settings(max_examples=100, deadline=None)
def test_random_chart_invariants(seed):
    rng = random.Random(seed)
    chart = random_chart(rng)
    forms = all_residue_forms(chart)
    total = [sum(col) for col in zip(*(f.coefficients for f in forms))]
    assert not any(total)
    rk = zero_residue_rank(chart)
    assert rk <= chart.r
    assert rk == (chart.r - 1 if chart.splus + chart.sminus == 0 else chart.r)
    sigma = list(range(1, chart.n + 1))
    rng.shuffle(sigma)
    moved = chart.relabel(sigma)
    for p, f in enumerate(forms, start=1):
        g = residue_form(moved, p).coefficients
        assert all(g[sigma[j] - 1] == c for j, c in enumerate(f.coefficients))
