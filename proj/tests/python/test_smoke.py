import math

import pytest

import zeroscope as zs


def test_noise_to_zeros_pipeline():
    grid = zs.GridSpec.from_a(128, 64, 1.0)
    sig = zs.white_noise(129, grid.fs, 7, zs.SignalKind.Complex)
    spg = zs.spectrogram(sig, grid)
    pat = zs.extract_zeros(spg)
    assert len(pat) > 0
    w = zs.crop_window(grid)
    assert all(w.contains(u, v) for u, v in zip(pat.u, pat.v))

    r = zs.default_r_grid(pat.window, 64)
    L = zs.estimate_L(pat, r)
    assert L.statistic == "L"
    assert len(L.value) == 64


def test_theory_values():
    assert zs.g0_poisson(0.3) == 1.0
    assert abs(zs.g0_planar_gaf(1.0) - 1.0051143182119424) < 1e-12
    assert abs(zs.horizontal_density_S(2.0) - 2.0) < 1e-12
    assert abs(zs.real_axis_zero_rate() - 1.0 / math.sqrt(math.pi)) < 1e-15
    K, L = zs.K0_L0(zs.PointProcess.Poisson, [0.5, 1.0])
    assert abs(L.value[1] - 1.0) < 1e-12


def test_envelope_test_runs():
    cfg = zs.TestConfig()
    cfg.grid = zs.GridSpec.from_a(128, 64, 1.0)
    cfg.m = 5
    cfg.k = 1
    cfg.seed = 11
    sig = zs.white_noise(129, cfg.grid.fs, 400, zs.SignalKind.Real)
    data = zs.extract_zeros(zs.spectrogram(sig, cfg.grid))
    res = zs.envelope_test(data, cfg)
    assert res.alpha == pytest.approx(1.0 / 6.0)
    assert len(res.t_sorted) == 5
    assert res.rank >= 1


def test_gaf_zeros():
    gaf = zs.sample_gaf(zs.GafKind.Planar, 3.0, 5)
    region = zs.Region.disk(0.0, 0.0, 1.5)
    zeros = zs.find_zeros(gaf, region)
    assert len(zeros) == zs.winding_count(gaf, region)


def test_exceptions_map_to_python():
    with pytest.raises(ValueError):
        zs.white_noise(0, 8.0, 1, zs.SignalKind.Real)
    with pytest.raises(ValueError):
        zs.g0_planar_gaf(-1.0)
    with pytest.raises(OSError):
        zs.read_signal_csv("/nonexistent/veryunlikely.csv")


def test_io_round_trip(tmp_path):
    sig = zs.white_noise(32, 8.0, 3, zs.SignalKind.Complex)
    path = str(tmp_path / "sig.csv")
    zs.write_signal_csv(path, sig)
    back = zs.read_signal_csv(path)
    assert back.fs == sig.fs
    assert back.samples == sig.samples
