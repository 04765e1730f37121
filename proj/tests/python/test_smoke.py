import math

import pytest

import combnoise as cn


def test_version():
    assert cn.__version__ == "0.1.0"


def test_cavity_numbers():
    cav = cn.CavityParams.from_finesse(420.0, 76e6)
    assert cav.f_c_hz == pytest.approx(90476.1904761905, rel=1e-12)
    assert cn.f_3db_hz(cav) / cav.f_c_hz == pytest.approx(1.5537739740300371, rel=1e-12)
    assert cn.phase_transfer(cav, cav.f_c_hz) == pytest.approx(0.5, rel=1e-12)
    assert cn.decoupling_factor(cav, cn.f_3db_hz(cav)) == pytest.approx(0.5, rel=1e-9)
    t0 = cn.transmission_exact(cav, 0.0)
    assert t0.imag == 0.0
    assert t0.real == pytest.approx(math.sqrt(cav.t_max), rel=1e-12)


def test_cavity_invalid():
    with pytest.raises(ValueError):
        cn.CavityParams.from_mirrors(1.2, 0.9, 0.1, 0.1, 76e6)


def test_sql_value():
    nu0 = cn.SPEED_OF_LIGHT_M_S / 795e-9
    assert cn.sql_psd(1e-3, nu0) == pytest.approx(4.997348068299e-16, rel=1e-9)
    assert cn.sql_db(1e-3, nu0) == pytest.approx(-153.012604006, abs=1e-6)


def test_envelope_partition_power():
    grid = cn.wavelength_uniform_grid(795e-9, 15e-9, 512)
    env = cn.gaussian_envelope(795e-9, 6e-9, grid)
    bands = cn.partition(env, 10)
    assert bands.n_zones() == 10
    assert bands.total_power() == pytest.approx(env.total_power(), rel=1e-12)
    modes = cn.timing_modes(env)
    w_ceo = cn.discretize_mode(modes.ceo_raw, env, bands, cn.ModeLabel.CEO)
    w_rep = cn.discretize_mode(modes.rep_raw, env, bands, cn.ModeLabel.REP)
    assert abs(cn.dot(w_ceo, w_rep)) < 1e-9
    assert cn.dot(w_ceo, w_ceo) == pytest.approx(1.0, rel=1e-12)


def shot_only_config(n_samples=40000, seed=11):
    cfg = cn.SimConfig()
    cfg.zone_powers = [1.0] * 6
    cfg.rf_frequencies_hz = [5e5]
    cfg.n_samples = n_samples
    cfg.seed = seed
    return cfg


def test_shot_only_pipeline():
    cfg = shot_only_config()
    rows = cn.run_protocol(cfg, cn.Quadrature.PHASE, 5e5)
    assert len(rows) == 6 + 15
    mat = cn.assemble(rows)
    a = mat.array()
    assert a.shape == (6, 6)
    for i in range(6):
        assert a[i, i] == pytest.approx(1.0, abs=0.05)
        for j in range(i + 1, 6):
            assert abs(a[i, j]) < 0.05
            assert a[i, j] == a[j, i]
    eig = cn.eig_sym(mat)
    res = cn.eigen_residuals(mat, eig)
    assert res.eigen_residual < 1e-12
    assert res.orthonormality < 1e-13
    vals = list(eig.eigenvalues)
    assert vals == sorted(vals, reverse=True)


def test_seeded_reproducibility():
    cfg = shot_only_config()
    a = cn.run_protocol(cfg, cn.Quadrature.PHASE, 5e5)
    b = cn.run_protocol(cfg, cn.Quadrature.PHASE, 5e5)
    assert [r.value for r in a] == [r.value for r in b]


def test_planted_mode_recovered():
    cfg = shot_only_config(n_samples=60000, seed=3)
    grid = cn.wavelength_uniform_grid(795e-9, 15e-9, 60)
    env = cn.gaussian_envelope(795e-9, 6e-9, grid)
    bands = cn.partition(env, 6)
    cfg.zone_powers = list(bands.powers)
    tm = cn.timing_modes(env)
    w_ceo = cn.discretize_mode(tm.ceo_raw, env, bands, cn.ModeLabel.CEO)
    w_rep = cn.discretize_mode(tm.rep_raw, env, bands, cn.ModeLabel.REP)

    spec = cn.NoiseModeSpec()
    spec.quadrature = cn.Quadrature.PHASE
    spec.mode = w_ceo
    spec.psd = cn.flat_psd(50.0)
    cfg.modes = [spec]

    mat = cn.assemble(cn.run_protocol(cfg, cn.Quadrature.PHASE, 5e5))
    eig = cn.eig_sym(mat)
    top = eig.eigenvectors[0]
    assert abs(cn.dot(top, w_ceo)) > 0.99
    proj_ceo, proj_rep = cn.extract_collective(mat, w_ceo, w_rep)
    assert proj_ceo == pytest.approx(51.0, rel=0.15)
    assert proj_rep == pytest.approx(1.0, abs=1.0)


def test_python_callable_psd():
    cfg = shot_only_config(n_samples=30000, seed=5)
    spec = cn.NoiseModeSpec()
    spec.quadrature = cn.Quadrature.PHASE
    mv = cn.ModeVector()
    mv.components = [1.0 / math.sqrt(6.0)] * 6
    spec.mode = mv
    spec.psd = lambda f: 9.0
    cfg.modes = [spec]
    v = cn.measure_variance(cfg, [0, 1, 2, 3, 4, 5], cn.Quadrature.PHASE, 5e5, 0)
    assert v.value == pytest.approx(10.0, rel=0.1)


def test_calibration_roundtrip():
    cav = cn.CavityParams.from_finesse(420.0, 76e6)
    tr = cn.PsdTrace()
    tr.label = cn.TraceLabel.CEO
    tr.units = cn.PsdUnits.REL_SHOT_LINEAR
    points = []
    for f, val in [(2e4, 138.0), (2e5, 5.5), (2e6, 1.9)]:
        p = cn.PsdPoint()
        p.f_hz = f
        p.value = val
        points.append(p)
    tr.points = points
    db = cn.trace_to_db(tr)
    corrected = cn.correct_rel_shot(db, cav)
    for raw, cor in zip(db.points, corrected.points):
        assert cor.value == pytest.approx(
            raw.value - 10.0 * math.log10(cn.decoupling_factor(cav, raw.f_hz)), abs=1e-9
        )
    flags = [p.flag for p in corrected.points]
    assert flags[0] == cn.QualityFlag.HIGH_CORRECTION
    assert flags[-1] == cn.QualityFlag.OK


def test_error_types():
    cfg = cn.SimConfig()
    with pytest.raises(ValueError):
        cfg.validate()
    with pytest.raises(ValueError):
        cn.assemble([])
