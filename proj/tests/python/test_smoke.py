"""End-to-end smoke tests for the python bindings."""

import math

import pytest

import crnsim


def test_oracles_match_known_values():
    r = crnsim.mm1(6.0, 13.0)
    assert r.W == pytest.approx(1.0 / 7.0, rel=1e-12)
    assert r.Lq == pytest.approx(0.3956043956043956, rel=1e-12)
    assert crnsim.mm1n_loss(12.0, 13.0, 8) == pytest.approx(0.0789722, rel=1e-5)
    assert crnsim.erlang_c_wq(12.0, 13.0, 1) == pytest.approx(crnsim.mm1(12.0, 13.0).Wq, rel=1e-12)
    two = crnsim.mm1_preemptive_resume(3.0, 6.0, 13.0)
    assert two.w1 == pytest.approx(0.1, rel=1e-12)
    assert two.w2 == pytest.approx(0.325, rel=1e-12)
    # The brute-force chain agrees with the closed form.
    chain = crnsim.mm1_preemptive_resume_ctmc(3.0, 6.0, 13.0, 120, 320)
    assert chain.w2 == pytest.approx(two.w2, rel=1e-3)


def test_ge_sampling_is_deterministic_and_unbiased():
    params = crnsim.GEParams(13.0, 4.0)
    assert params.tau == pytest.approx(0.4)
    assert crnsim.ge_tau(1.0) == 1.0

    def draw(n):
        rng = crnsim.RngStream(42, 7)
        return [crnsim.ge_sample(params, rng) for _ in range(n)]

    a, b = draw(5000), draw(5000)
    assert a == b  # same stream, same draws
    mean = sum(a) / len(a)
    assert mean == pytest.approx(1.0 / 13.0, rel=0.05)
    assert any(x == 0.0 for x in a)  # the batching atom is present when scv > 1


def test_replication_metrics_and_aggregation():
    cfg = crnsim.NetworkConfig()
    cfg.pu_arrival = crnsim.ArrivalSpec(6.0)
    cfg.su_arrival = crnsim.ArrivalSpec(0.0)
    cfg.stations = crnsim.standard_stations(False, 1, 1000000, crnsim.GEParams(13.0, 1.0))
    cfg.seed = 99
    cfg.horizon = 20000.0
    cfg.warmup = 2000.0
    cfg.validate()

    runs = [crnsim.run_replication(cfg, rep) for rep in range(4)]
    for r in runs:
        assert r.conservation_balanced()
        m = r.metrics()
        w = m[("mean_response_time", "PU", "end_to_end")]
        # Two single-server stages in tandem, each M/M/1 at rho = 6/13.
        assert w == pytest.approx(2.0 / 7.0, rel=0.10)
        # Windowed self-consistency: the residual carries O(1/T) boundary
        # truncation, so it is small but not machine-zero on a finite run.
        assert r.littles_residual(1, crnsim.JobClass.PU) < 1e-3

    agg = crnsim.aggregate(runs)
    entry = agg[("mean_response_time", "PU", "end_to_end")]
    assert entry["reps"] == 4
    assert entry["ci95_half_width"] > 0.0
    assert abs(entry["mean"] - 2.0 / 7.0) < 3 * entry["ci95_half_width"] + 0.02


def test_replication_is_reproducible():
    cfg = crnsim.NetworkConfig()
    cfg.pu_arrival = crnsim.ArrivalSpec(3.0)
    cfg.su_arrival = crnsim.ArrivalSpec(6.0)
    cfg.stations = crnsim.standard_stations(True, 1, 20, crnsim.GEParams(13.0, 1.0))
    cfg.horizon = 5000.0
    cfg.warmup = 500.0
    m1 = crnsim.run_replication(cfg, 0).metrics()
    m2 = crnsim.run_replication(cfg, 0).metrics()
    assert m1 == m2


def test_scheme_round_trip(tmp_path):
    scheme = crnsim.builtin_scheme("A")
    scheme.reps = 2
    scheme.horizon = 500.0
    rows = crnsim.run_scheme(scheme, parallel=2)
    assert rows, "study produced no rows"
    csv = crnsim.to_csv(rows)
    assert csv.splitlines()[0].startswith("scheme,discipline,security,")
    assert crnsim.to_csv(crnsim.run_scheme(scheme)) == csv  # worker count is invisible

    plots = crnsim.to_plotdata(rows)
    assert "scheme_A_mean_response_time.dat" in plots

    paths = crnsim.emit(rows, "both", str(tmp_path))
    names = {p.rsplit("/", 1)[-1] for p in paths}
    assert "results.csv" in names
    assert (tmp_path / "results.csv").read_text() == csv


def test_config_file_parsing(tmp_path):
    path = tmp_path / "study.conf"
    path.write_text("scheme = D\nreps = 2\nhorizon = 400\nseed = 5\n")
    cfg = crnsim.load_config(str(path))
    assert cfg.scheme_id == "D"
    assert cfg.reps == 2
    assert cfg.servers == [1, 3]

    bad = tmp_path / "bad.conf"
    bad.write_text("scv_arrival = 0.5\n")
    with pytest.raises(RuntimeError):
        crnsim.load_config(str(bad))


def test_validation_errors_surface_as_exceptions():
    with pytest.raises(ValueError):
        crnsim.GEParams(13.0, 0.5)
    with pytest.raises(ValueError):
        crnsim.mm1(13.0, 13.0)
    cfg = crnsim.NetworkConfig()
    cfg.stations = []
    with pytest.raises(ValueError):
        cfg.validate()
