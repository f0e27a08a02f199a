import numpy as np
import pytest

from tiresense import SensorSpec, TireScenario, simulate


def scenario(**overrides) -> TireScenario:
    base = dict(
        unloaded_radius=0.3,
        tread_depth=8.0,
        vertical_load=1000.0,
        inflation_pressure=32.0,
        slip_angle=0.0,
        vehicle_speed=20.0,
    )
    base.update(overrides)
    return TireScenario(**base)


@pytest.fixture(scope="session")
def default_scenario() -> TireScenario:
    return scenario()


@pytest.fixture(scope="session")
def quiet_sensor() -> SensorSpec:
    return SensorSpec(noise_std=0.0, dc_bias=(0.0, 0.0, 0.0), seed=1)


@pytest.fixture(scope="session")
def biased_sensor() -> SensorSpec:
    # no stochastic noise, but the full constant bias the pipeline must reject
    return SensorSpec(noise_std=0.0, dc_bias=(5.0, 5.0, 5.0), seed=1)


@pytest.fixture(scope="session")
def noisy_sensor() -> SensorSpec:
    return SensorSpec(seed=7)


@pytest.fixture(scope="session")
def clean_trace(default_scenario, biased_sensor):
    """10 noise-free (but biased) turns of the default scenario."""
    return simulate(default_scenario, biased_sensor, 10)


@pytest.fixture(scope="session")
def noisy_trace(default_scenario, noisy_sensor):
    return simulate(default_scenario, noisy_sensor, 10)
