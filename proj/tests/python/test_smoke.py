import math

import pytest

import stabsgd


@pytest.fixture(scope="module")
def planted():
    data, support, w_star = stabsgd.synthesize(p=200, n=300, support=5, seed=3)
    return data, support, w_star


def test_parse_and_roundtrip():
    d = stabsgd.parse_libsvm("+1 3:0.5 7:-1.2\n0 1:1\n")
    assert len(d) == 2
    assert d.dim == 7
    assert d.labels() == [1, -1]
    again = stabsgd.parse_libsvm(d.to_libsvm(), 7)
    assert again.to_libsvm() == d.to_libsvm()
    with pytest.raises(stabsgd.ParseError):
        stabsgd.parse_libsvm("+1 x:1\n")


def test_operators():
    assert stabsgd.soft_threshold([0.5, -0.1, 0.0], [0.2, 0.2, 0.2]) == pytest.approx([0.3, 0.0, 0.0])
    assert stabsgd.anneal_rejection(0.4, 0.7, 0.0) == pytest.approx(0.42)
    assert stabsgd.adaptive_gravity([0.1, 0.2, 0.3, 0.4], 0.5) == 0.2
    assert stabsgd.loss_value("logistic", 0.0, 1) == pytest.approx(math.log(2))
    assert stabsgd.cohens_kappa(4, [0, 1], [0, 2]) == 0.0


def test_train_and_baselines(planted):
    data, support, _ = planted
    result = stabsgd.train(data, "hinge", M=4, passes=5, g0_init=0.01, pi0=0.8)
    w = result["w"]
    assert len(w) == data.dim
    assert result["history"]
    assert set(i for i, v in enumerate(w) if v != 0.0) <= set(result["omega"])
    assert 0.0 <= stabsgd.test_error(w, data) <= 1.0

    sgd = stabsgd.baseline("sgd", data, passes=2, seed=4)
    trunc = stabsgd.baseline("truncated", data, passes=2, seed=4, g0=0.0)
    assert sgd == trunc
    sparse = stabsgd.baseline("truncated", data, passes=2, seed=4, g0=0.01)
    assert stabsgd.sparsity_pct(sparse) < stabsgd.sparsity_pct(sgd)
    for algo in ("rda", "fobos"):
        assert len(stabsgd.baseline(algo, data)) == data.dim
    assert stabsgd.stability_score([sgd, trunc]) == 1.0

    with pytest.raises(KeyError):
        stabsgd.train(data, "hinge", nonsense=1)


def test_cli_in_process(tmp_path):
    code, out, err = stabsgd.run_cli(["synth", "--p", "30", "--n", "40", "--out", str(tmp_path / "toy")])
    assert code == 0, err
    assert (tmp_path / "toy_train.svm").exists()
    code, _, err = stabsgd.run_cli(["train", "--data", str(tmp_path / "missing.svm")])
    assert code == 2
    assert "missing.svm" in err
