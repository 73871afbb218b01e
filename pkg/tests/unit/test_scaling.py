"""Unit tests for scale sweeps and the divergence verdict."""

import json

import pytest

from sscaudit.core.errors import InvalidGrid, TooFewPoints
from sscaudit.models.scaled_sim import ScalingFamily
from sscaudit.scaling.lab import (
    CurveRow,
    ScalingCurve,
    Verdict,
    check_divergence,
    check_grid,
    curve_csv,
    run_scaling,
    write_curve,
)
from sscaudit.utils.hashing import items_digest
from tests.conftest import make_items

GRID = [1e8, 1e9, 1e10, 1e11, 1e12]

# Near-perfect symbolic ceiling; phi alone moves ToS in 0.2 steps.
WIDENING = ScalingFamily(a=0.0, b=10.0, phi_schedule=dict(zip(GRID, [0.9, 0.7, 0.5, 0.3, 0.1])))
NARROWING = ScalingFamily(a=0.0, b=10.0, phi_schedule=dict(zip(GRID, [0.1, 0.3, 0.5, 0.7, 0.9])))


def synthetic_curve(tos_values, half=0.02):
    rows = [
        CurveRow(
            scale=n,
            s_symt=0.9,
            s_full=0.9 - tos,
            s_symv=0.9 - tos,
            tos=tos,
            cos=tos,
            fos=0.0,
            ssc=tos,
            tos_ci=(tos - half, tos + half),
        )
        for n, tos in zip(GRID, tos_values)
    ]
    return ScalingCurve(rows=rows, family=ScalingFamily())


@pytest.mark.parametrize(
    "grid,match",
    [
        ([1e8, 1e9, 1e10, 1e11], "at least 5"),
        ([1e8, 1e9, 1e9, 1e11, 1e12], "strictly increasing"),
        ([1e8, 1e10, 1e9, 1e11, 1e12], "strictly increasing"),
        ([0, 1e9, 1e10, 1e11, 1e12], "> 0"),
    ],
)
def test_invalid_grid(grid, match):
    """Test grids must have five strictly increasing positive scales."""
    with pytest.raises(InvalidGrid, match=match):
        check_grid(grid)


@pytest.mark.parametrize(
    "tos_values,verdict",
    [
        ([0.10, 0.15, 0.20, 0.25, 0.30], Verdict.DIVERGING),
        ([0.30, 0.25, 0.20, 0.15, 0.10], Verdict.CONVERGING),
        ([0.20, 0.20, 0.20, 0.20, 0.20], Verdict.FLAT),
        ([0.10, 0.11, 0.12, 0.12, 0.13], Verdict.FLAT),
        ([0.10, 0.30, 0.05, 0.25, 0.30], Verdict.FLAT),
    ],
)
def test_divergence_verdict(tos_values, verdict):
    """Test the rank correlation and separation rules."""
    assert check_divergence(synthetic_curve(tos_values)).verdict == verdict


def test_divergence_result_fields():
    """Test the verdict reports its statistics and thresholds."""
    result = check_divergence(synthetic_curve([0.10, 0.15, 0.20, 0.25, 0.30], half=0.01))

    assert result.rho == pytest.approx(1.0)
    assert result.tos_change == pytest.approx(0.20)
    assert result.pooled_half_width == pytest.approx(0.01)
    assert result.to_dict()["thresholds"] == {"rho": 0.9, "separation": 2.0}


def test_divergence_needs_five_rows():
    """Test short curves cannot be judged."""
    curve = synthetic_curve([0.1, 0.2, 0.3, 0.4])

    with pytest.raises(TooFewPoints):
        check_divergence(curve)


def test_widening_family_diverges(barmax_items):
    """Test a sweep whose visual fraction shrinks with scale is diverging."""
    curve = run_scaling(GRID, WIDENING, barmax_items, seed=1, b=200)
    n = len(barmax_items)

    for row, expected in zip(curve.rows, [0.1, 0.3, 0.5, 0.7, 0.9]):
        assert row.tos == pytest.approx(expected, abs=2.0 / n + 0.01)
        assert row.tos_ci[0] <= row.tos <= row.tos_ci[1]
    assert check_divergence(curve).verdict == Verdict.DIVERGING


def test_narrowing_family_converges(barmax_items):
    """Test a sweep whose visual fraction grows with scale is converging."""
    curve = run_scaling(GRID, NARROWING, barmax_items, seed=1, b=200)

    assert check_divergence(curve).verdict == Verdict.CONVERGING


def test_no_bottleneck_is_flat(barmax_items):
    """Test phi=1 gives zero ToS at every scale and a flat verdict."""
    curve = run_scaling(GRID, ScalingFamily(phi=1.0), barmax_items, seed=2, b=100)

    assert all(row.tos == 0.0 for row in curve.rows)
    result = check_divergence(curve)
    assert result.verdict == Verdict.FLAT
    assert result.rho == 0.0


def test_sweep_is_deterministic(barmax_items):
    """Test a fixed seed reproduces the curve and records the item hash."""
    first = run_scaling(GRID, ScalingFamily(), barmax_items, seed=4, b=100)
    second = run_scaling(GRID, ScalingFamily(), barmax_items, seed=4, b=100)

    assert first.rows == second.rows
    assert first.items_hash == items_digest(barmax_items)
    assert first.n_items == len(barmax_items)


def test_point_does_not_depend_on_grid(barmax_items):
    """Test a scale measures the same inside different grids."""
    family = ScalingFamily()
    wide = run_scaling(GRID, family, barmax_items, seed=4, b=100)
    shifted = run_scaling([1e10, 1e11, 1e12, 1e13, 1e14], family, barmax_items, seed=4, b=100)

    assert wide.rows[2] == shifted.rows[0]


def test_curve_files(tmp_path):
    """Test the CSV header and the JSON payload."""
    curve = synthetic_curve([0.10, 0.15, 0.20, 0.25, 0.30])
    divergence = check_divergence(curve)

    csv_path, json_path = write_curve(curve, tmp_path / "out", divergence, manifest="m.json")

    lines = csv_path.read_text().splitlines()
    assert lines[0] == "scale,s_symt,s_full,s_symv,tos,cos,fos,ssc"
    assert lines[1].startswith("100000000,0.9,")
    assert len(lines) == 6
    data = json.loads(json_path.read_text())
    assert data["divergence"]["verdict"] == "diverging"
    assert data["manifest"] == "m.json"
    assert ScalingCurve.from_dict(data).rows == curve.rows


def test_curve_rows_sorted():
    """Test rows are kept in ascending scale order."""
    curve = synthetic_curve([0.1, 0.2, 0.3, 0.4, 0.5])
    reversed_curve = ScalingCurve(rows=list(reversed(curve.rows)), family=ScalingFamily())

    assert curve_csv(reversed_curve) == curve_csv(curve)


@pytest.mark.slow
def test_default_family_diverges_on_large_sample():
    """Test the default family over 2,000 items tracks its closed form and diverges."""
    items = make_items("barmax", 2000, seed=0)
    family = ScalingFamily()

    curve = run_scaling(GRID, family, items, seed=0, b=1000)

    for row in curve.rows:
        assert row.tos == pytest.approx(family.expected_tos(row.scale), abs=0.03)
    assert check_divergence(curve).verdict == Verdict.DIVERGING
