import pytest

import qlnc


def test_field_arithmetic():
    f16 = qlnc.Field(2, 1, 4)
    assert f16.order("ext") == 16
    for x in range(1, 16):
        assert f16.mul(x, f16.inv(x)) == 1
    # the generator has multiplicative order 15
    assert f16.pow(2, 15) == 1
    assert all(f16.pow(2, e) != 1 for e in (3, 5))

    f9 = qlnc.Field(3, 2, 1)
    assert f9.order("base") == 9
    assert f9.add(1, 2, "base") == 0
    assert f9.trace(1) == 2  # tr(x) = x + x^3 over F9: tr(1) = 2


def test_builtin_rates():
    net = qlnc.example("butterfly")
    assert net.pairs == [2, 2]
    rows = net.rates()
    assert rows[0] == {
        "pair": 1,
        "m": 2,
        "rank_kii": 2,
        "rank_ktii": 2,
        "rank_kic": 1,
        "rank_ktic": 0,
        "ok": True,
    }
    assert rows[1]["rank_kic"] == 0
    assert rows[1]["rank_ktic"] == 1

    K = net.transfer()["K"]
    assert K == [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def test_parse_and_shadow():
    net = qlnc.parse_network(
        '{"field": {"p": 3}, "pairs": [1, 1], "transfer": [[1, 0], [2, 1]]}'
    )
    rows = net.rates()
    assert rows[0]["rank_ktic"] == 1
    ok, detail = qlnc.verify_shadow(net, 1)
    assert ok, detail


def test_simulate_zero_interference():
    rep = qlnc.simulate(
        qlnc.example("butterfly"),
        pair=1,
        a=1,
        aphase=0,
        n=24,
        alpha="4",
        trials=50,
        seed=7,
        interference="zero",
    )
    assert rep["q_prime"] == "16"
    assert rep["n_prime"] == 6
    assert rep["bit_failures"] == 0
    assert rep["phase_failures"] == 0
    assert rep["implication_violations"] == 0
    assert rep["fidelity_lower_bound"] == 1.0


def test_simulate_reports_are_deterministic():
    net = qlnc.example("two_way")
    kw = dict(pair=1, a=1, aphase=1, n=14, alpha="2", trials=40, seed=11)
    assert qlnc.simulate(net, **kw) == qlnc.simulate(net, **kw, jobs=4)


def test_schedules():
    qc = qlnc.choose_qprime(4096, 2, 2, 1, 0)
    assert qc == {
        "alpha": 64,
        "n_eff": 4096,
        "n_prime": 64,
        "padded": False,
        "small_nprime": False,
    }
    sp = qlnc.theorem2_params(2**20, 2, 3, 1, 1)
    assert (sp["beta"], sp["alpha"], sp["k"], sp["n1"]) == (2, 100, 2400, 43200)
    assert sp["p_err_bound"] == pytest.approx(18.0)


def test_experiments():
    assert qlnc.clearance_experiment(2, 2, 1, 1) == (2, 3)
    assert qlnc.full_rank_frequency(2, 2, 2) == (6, 16)
    assert qlnc.vanish_rate(16, 1, 5, v_draws=200, x_draws=10, seed=3) <= 5 * 3 / 16

    ok, detail = qlnc.verify_lemma1(4, 1, 1)
    assert ok, detail


def test_roundtrips():
    assert qlnc.mixer_roundtrip(2, 2, 3, m=2, n_prime=7, seed=5)
    assert qlnc.codec_roundtrip(2, 4, m=2, a=1, aphase=0, n_prime=6, seed=5)
    assert qlnc.codec_roundtrip(3, 2, m=3, a=1, aphase=1, n_prime=7, seed=5)


def test_errors_surface_as_exceptions():
    with pytest.raises(RuntimeError):
        qlnc.example("no_such_network")
    with pytest.raises(RuntimeError):
        qlnc.simulate(qlnc.example("butterfly"), pair=1, a=1, aphase=1, n=24, alpha="4")
    f4 = qlnc.Field(2, 2, 1)
    with pytest.raises(RuntimeError):
        f4.inv(0, "base")
