import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiresense import GeometryError, ScenarioError, TireScenario, derive_geometry
from tiresense.geometry import TireGeometry

from conftest import scenario


def test_flat_spot_geometry_closed_form():
    # recomputed by hand: cos(theta) = 0.28 / 0.3
    geom = TireGeometry(
        effective_radius=0.3,
        deflection=0.02,
        contact_half_angle=math.acos(0.28 / 0.3),
    )
    assert geom.contact_half_angle == pytest.approx(0.36721, abs=1e-5)
    assert geom.patch_chord == pytest.approx(0.21540, abs=1e-5)
    assert geom.patch_arc == pytest.approx(0.22033, abs=1e-5)


def test_no_contact_limit():
    geom = derive_geometry(scenario(vertical_load=1e-9))
    assert geom.contact_half_angle == pytest.approx(0.0, abs=1e-5)
    assert geom.patch_chord == pytest.approx(0.0, abs=1e-4)


def test_deflection_formula():
    geom = derive_geometry(scenario())
    # 1000 lbf at k = 120 + 2.5 * 32 = 200 N/mm
    assert geom.deflection_mm == pytest.approx(1000 * 4.4482216 / 200.0, rel=1e-12)


def test_tread_changes_chord_not_deflection():
    fresh = derive_geometry(scenario(tread_depth=8.0))
    worn = derive_geometry(scenario(tread_depth=2.0))
    assert worn.deflection == fresh.deflection
    assert worn.patch_chord < fresh.patch_chord
    assert worn.effective_radius < fresh.effective_radius


def test_degenerate_deflection_raises():
    with pytest.raises(GeometryError):
        derive_geometry(scenario(vertical_load=20000.0))


def test_wear_consuming_radius_raises():
    with pytest.raises(GeometryError):
        derive_geometry(scenario(unloaded_radius=0.03, tread_depth=2.0))


@pytest.mark.parametrize(
    "field,value",
    [
        ("unloaded_radius", 0.0),
        ("vehicle_speed", -1.0),
        ("vertical_load", 0.0),
        ("inflation_pressure", 0.0),
        ("tread_depth", -1.0),
        ("tread_depth", 9.0),
        ("slip_angle", 11.0),
        ("slip_angle", -10.5),
        ("release_angle", 0.0),
    ],
)
def test_scenario_invariants(field, value):
    with pytest.raises(ScenarioError):
        scenario(**{field: value})


@settings(max_examples=60, deadline=None)
@given(
    load=st.floats(800.0, 1500.0),
    pressure=st.floats(29.0, 35.0),
    tread=st.floats(2.0, 8.0),
)
def test_chord_monotonic_in_each_factor(load, pressure, tread):
    geom = derive_geometry(scenario(vertical_load=load, inflation_pressure=pressure,
                                    tread_depth=tread))
    more_load = derive_geometry(
        scenario(vertical_load=load + 50.0, inflation_pressure=pressure,
                 tread_depth=tread)
    )
    more_pressure = derive_geometry(
        scenario(vertical_load=load, inflation_pressure=pressure + 0.5,
                 tread_depth=tread)
    )
    less_tread = derive_geometry(
        scenario(vertical_load=load, inflation_pressure=pressure,
                 tread_depth=tread - 0.5 if tread >= 2.5 else tread)
    )
    assert more_load.patch_chord > geom.patch_chord
    assert more_pressure.patch_chord < geom.patch_chord
    if tread >= 2.5:
        assert less_tread.patch_chord < geom.patch_chord
        assert less_tread.deflection == geom.deflection
