"""Parameter containers and the loss/noise algebra of the link."""

import math

import pytest

from cvqkd import (
    ChannelParams,
    SourceParams,
    ModulationParams,
    ProtocolParams,
    FiberModel,
    aggregated_noise_variance,
    aggregated_noise_variance_double,
    distance_to_transmittance,
    transmittance_to_distance,
    excess_noise_from_fiber,
    channel_at_distance,
)


def test_aggregated_noise_variance_values():
    cases = [
        ((0.1, 0.001), 1.0, 1.001),
        ((0.5, 0.0), 0.5, 0.75),
        ((0.03, 0.0003), 0.1, 0.9733),
    ]
    for (T, veps), v_s, expected in cases:
        got = aggregated_noise_variance(ChannelParams(T, veps), SourceParams(v_s))
        assert got == pytest.approx(expected, abs=1e-12)


def test_aggregated_noise_variance_coherent_is_one_plus_veps():
    for T in (0.0, 0.25, 1.0):
        got = aggregated_noise_variance(ChannelParams(T, 0.02), SourceParams(1.0))
        assert got == pytest.approx(1.02, abs=1e-15)


def test_aggregated_noise_variance_affine_in_veps():
    # the map veps -> V_N has unit slope; probe with a finite difference
    ch0 = ChannelParams(0.37, 0.004)
    ch1 = ChannelParams(0.37, 0.004 + 1e-6)
    src = SourceParams(0.6)
    diff = aggregated_noise_variance(ch1, src) - aggregated_noise_variance(ch0, src)
    assert diff == pytest.approx(1e-6, rel=1e-6)


def test_aggregated_noise_variance_double_values():
    cases = [
        ((0.0, 0.01), 1.0, 3.0, 1.01),
        ((0.5, 0.0), 1.0, 3.0, 2.5),
        ((0.03, 0.0003), 0.5, 3.0, 1.0753),
    ]
    for (T, veps), v_s, v1, expected in cases:
        mod = ModulationParams("double", v1=v1, v2=10.0)
        got = aggregated_noise_variance_double(ChannelParams(T, veps),
                                               SourceParams(v_s), mod)
        assert got == pytest.approx(expected, abs=1e-12)


def test_double_noise_with_no_key_displacement_matches_single():
    ch = ChannelParams(0.42, 0.007)
    src = SourceParams(0.3)
    mod = ModulationParams("double", v1=0.0, v2=5.0)
    assert aggregated_noise_variance_double(ch, src, mod) == pytest.approx(
        aggregated_noise_variance(ch, src), abs=1e-15)


def test_distance_to_transmittance_values():
    assert distance_to_transmittance(50.0) == pytest.approx(0.1, abs=1e-15)
    assert distance_to_transmittance(76.0) == pytest.approx(
        0.03019951720402016, abs=1e-15)
    assert distance_to_transmittance(0.0) == 1.0


def test_transmittance_to_distance_values():
    assert transmittance_to_distance(0.3) == pytest.approx(
        26.143937264016877, abs=1e-9)
    assert transmittance_to_distance(0.1) == pytest.approx(50.0, abs=1e-9)


def test_distance_round_trip():
    fiber = FiberModel()
    for k in range(61):
        d = 5.0 * k
        back = transmittance_to_distance(distance_to_transmittance(d, fiber), fiber)
        assert back == pytest.approx(d, abs=1e-9)


def test_excess_noise_from_fiber_values():
    assert excess_noise_from_fiber(0.03) == pytest.approx(3e-4, abs=1e-18)
    assert excess_noise_from_fiber(0.3, FiberModel(eps_ratio=0.1)) == pytest.approx(
        0.03, abs=1e-15)


def test_channel_at_distance_consistency():
    ch = channel_at_distance(50.0)
    assert ch.T == pytest.approx(0.1, abs=1e-15)
    assert ch.v_eps == pytest.approx(0.001, abs=1e-15)


def test_channel_params_validation():
    with pytest.raises(ValueError):
        ChannelParams(-0.1, 0.0)
    with pytest.raises(ValueError):
        ChannelParams(1.2, 0.0)
    with pytest.raises(ValueError):
        ChannelParams(0.5, -1e-9)
    with pytest.raises(ValueError):
        ChannelParams(float("nan"), 0.0)


def test_source_params_validation():
    with pytest.raises(ValueError):
        SourceParams(0.0)
    with pytest.raises(ValueError):
        SourceParams(-1.0)
    assert SourceParams(0.1).v_s == 0.1


def test_modulation_params_validation():
    with pytest.raises(ValueError):
        ModulationParams("triple", v=1.0)
    with pytest.raises(ValueError):
        ModulationParams("single")
    with pytest.raises(ValueError):
        ModulationParams("double", v1=1.0)          # missing probe variance
    with pytest.raises(ValueError):
        ModulationParams("double", v1=1.0, v2=0.0)  # probe variance must be > 0
    assert ModulationParams("double", v1=0.0, v2=1.0).v1 == 0.0


def test_modulation_v_key():
    assert ModulationParams("single", v=2.5).v_key == 2.5
    assert ModulationParams("double", v1=1.5, v2=8.0).v_key == 1.5


def test_protocol_params_bookkeeping():
    proto = ProtocolParams(SourceParams(1.0), ModulationParams("single", v=3.0),
                           N=1000, r=0.25)
    assert proto.n == pytest.approx(750.0)
    assert proto.m == pytest.approx(250.0)

    # the double modulation estimates on the whole block and burns nothing
    proto2 = ProtocolParams(SourceParams(1.0),
                            ModulationParams("double", v1=3.0, v2=10.0),
                            N=1000, r=0.0)
    assert proto2.n == pytest.approx(1000.0)
    assert proto2.m == pytest.approx(1000.0)


def test_protocol_params_validation():
    mod = ModulationParams("single", v=3.0)
    with pytest.raises(ValueError):
        ProtocolParams(SourceParams(1.0), mod, N=1)
    with pytest.raises(ValueError):
        ProtocolParams(SourceParams(1.0), mod, N=100, r=1.5)
    with pytest.raises(ValueError):
        ProtocolParams(SourceParams(1.0), mod, N=100, beta=0.0)
    with pytest.raises(ValueError):
        ProtocolParams(SourceParams(1.0), mod, N=100, delta=1.0)
    with pytest.raises(ValueError):
        ProtocolParams(SourceParams(1.0), mod, N=100, delta_star=0.0)


def test_fiber_model_validation():
    with pytest.raises(ValueError):
        FiberModel(attenuation_db_per_km=0.0)
    with pytest.raises(ValueError):
        FiberModel(eps_ratio=-0.01)
