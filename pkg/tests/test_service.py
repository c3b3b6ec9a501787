import numpy as np
import pytest
from fastapi.testclient import TestClient

from owbf.service import app, decode_image, encode_image

from conftest import noisy_version, smooth_random


@pytest.fixture(scope="module")
def client():
    with TestClient(app, raise_server_exceptions=False) as c:
        yield c


def test_payload_round_trip():
    img = smooth_random((9, 7), 1).astype(np.float32).astype(np.float64)
    np.testing.assert_array_equal(decode_image(encode_image(img)), img)


def test_healthz(client):
    r = client.get("/healthz")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_add_noise_deterministic(client):
    payload = {"image": encode_image(np.full((16, 16), 100.0)), "sigma": 10.0, "seed": 7}
    a = client.post("/v1/add-noise", json=payload).json()
    b = client.post("/v1/add-noise", json=payload).json()
    assert a["image"] == b["image"]
    assert a["psnr_db"] == pytest.approx(28.1, abs=1.0)


def test_add_noise_zero_sigma_inf_sentinel(client):
    payload = {"image": encode_image(np.full((8, 8), 10.0)), "sigma": 0.0, "seed": 0}
    r = client.post("/v1/add-noise", json=payload).json()
    assert r["psnr_db"] == "inf"
    assert r["mse"] == 0.0


def test_metrics_endpoint(client):
    a = encode_image(np.full((8, 8), 30.0))
    b = encode_image(np.zeros((8, 8)))
    r = client.post("/v1/metrics", json={"a": a, "b": b}).json()
    assert r["mse"] == 900.0
    assert r["psnr_db"] == pytest.approx(18.588, abs=1e-3)
    same = client.post("/v1/metrics", json={"a": a, "b": a}).json()
    assert same["psnr_db"] == "inf"


def test_denoise_fast_with_clean(client):
    clean = smooth_random((32, 32), 2)
    noisy = noisy_version(clean, 10.0, 2)
    r = client.post(
        "/v1/denoise",
        json={
            "image": encode_image(noisy),
            "filter": "sbf",
            "impl": "fast",
            "settings": {"sigma_s": 1.5, "sigma_r": 30.0},
            "sigma": 10.0,
            "clean": encode_image(clean),
        },
    )
    assert r.status_code == 200
    body = r.json()
    d = body["diagnostics"]
    assert d["n_terms"] >= 1 and d["T"] > 0
    assert d["psnr_db"] > 20.0
    assert d["sure_sbf"] is not None
    est = decode_image(body["image"])
    assert est.shape == (32, 32)


def test_denoise_wbf_reports_weights(client):
    noisy = noisy_version(smooth_random((32, 32), 3), 10.0, 3)
    r = client.post(
        "/v1/denoise",
        json={
            "image": encode_image(noisy),
            "filter": "wbf",
            "settings": {"sigma_s": 1.5, "sigma_r": 30.0},
            "sigma": 10.0,
        },
    ).json()
    d = r["diagnostics"]
    assert len(d["theta"]) == 2
    assert d["sure_wbf"] <= min(d["sure_sbf"], d["sure_rbf"]) + 1e-9


def test_denoise_wbf_without_sigma_is_domain_error(client):
    noisy = noisy_version(smooth_random((16, 16), 4), 10.0, 4)
    r = client.post(
        "/v1/denoise",
        json={
            "image": encode_image(noisy),
            "filter": "wbf",
            "settings": {"sigma_s": 1.5, "sigma_r": 30.0},
        },
    )
    assert r.status_code == 400
    assert "sigma" in r.json()["detail"]


def test_denoise_compare_mode(client):
    noisy = noisy_version(smooth_random((24, 24), 5), 8.0, 5)
    r = client.post(
        "/v1/denoise",
        json={
            "image": encode_image(noisy),
            "filter": "sbf",
            "impl": "fast",
            "settings": {"sigma_s": 1.5, "sigma_r": 40.0},
            "compare": True,
        },
    ).json()
    assert r["diagnostics"]["max_abs_diff"] < 0.1


def test_malformed_payload_rejected(client):
    r = client.post("/v1/denoise", json={"filter": "sbf"})
    assert r.status_code == 422
    r = client.post(
        "/v1/metrics", json={"a": "bm90IGFuIGltYWdl", "b": "bm90IGFuIGltYWdl"}
    )
    assert r.status_code == 400


def test_sweep_single_point_matches_denoise(client):
    clean = smooth_random((32, 32), 6)
    noisy = noisy_version(clean, 10.0, 6)
    common = {"image": encode_image(noisy), "clean": encode_image(clean)}
    row = client.post(
        "/v1/sweep",
        json={
            **common,
            "filter": "sbf",
            "sigma_s_values": [1.5],
            "sigma_r_values": [30.0],
        },
    ).json()["rows"][0]
    d = client.post(
        "/v1/denoise",
        json={**common, "filter": "sbf", "settings": {"sigma_s": 1.5, "sigma_r": 30.0}},
    ).json()["diagnostics"]
    assert row["psnr_db"] == pytest.approx(d["psnr_db"], abs=1e-9)
    assert row["best_psnr"] is True


def test_bench_endpoint_contract(client):
    noisy = noisy_version(smooth_random((32, 32), 7), 10.0, 7)
    r = client.post(
        "/v1/bench",
        json={"image": encode_image(noisy), "settings": [[1.5, 40.0]], "repeats": 1},
    ).json()
    cell = r["cells"][0]
    assert cell["direct_mean_s"] > 0 and cell["fast_mean_s"] > 0
    assert cell["direct_min_s"] <= cell["direct_mean_s"]
    assert cell["max_abs_diff"] < 0.1
