import numpy as np
import pytest

from wavecast.series import synth_meteo


@pytest.fixture(scope="session")
def tiny_channels():
    """Four aligned synthetic channels, two days, shared across tests."""
    return {name: synth_meteo(2, seed=7, channel=name)
            for name in ("irradiance", "temperature", "humidity",
                         "wind_speed")}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
