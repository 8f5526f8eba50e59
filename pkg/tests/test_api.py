import pytest
from fastapi.testclient import TestClient

from api.main import app


@pytest.fixture
def client(isolated_settings):
    return TestClient(app)


def test_health(client):
    assert client.get("/health").json() == {"status": "healthy", "service": "monge_ampere"}


def test_root_lists_catalog(client):
    body = client.get("/").json()
    assert "quadratic" in body["problems"]
    assert "contraction" in body["suites"]


def test_solve_and_fetch(client, isolated_settings):
    response = client.post("/v1/solve", json={"problem": "quadratic", "h": "1/8", "method": "precond"})
    assert response.status_code == 200
    run = response.json()
    assert run["status"] == "completed"
    assert run["kind"] == "solve"
    assert run["summary"]["converged"] is True
    assert run["out_dir"].startswith(isolated_settings.output_dir)

    fetched = client.get(f"/v1/runs/{run['run_id']}")
    assert fetched.status_code == 200
    assert fetched.json()["run_id"] == run["run_id"]


def test_inadmissible_h_is_bad_request(client):
    response = client.post("/v1/solve", json={"problem": "quadratic", "h": "0.3"})
    assert response.status_code == 400
    assert "h must divide domain side" in response.json()["detail"]


def test_zero_power_base_is_bad_request(client):
    response = client.post("/v1/solve", json={"problem": "quadratic", "h": "1/0^3"})
    assert response.status_code == 400
    assert "invalid mesh length" in response.json()["detail"]


def test_unknown_problem_is_bad_request(client):
    assert client.post("/v1/solve", json={"problem": "cube", "h": "1/8"}).status_code == 400


def test_invalid_field_is_unprocessable(client):
    assert client.post("/v1/solve", json={"problem": "quadratic", "h": "1/8", "mu": -1}).status_code == 422


def test_non_converged_run(client):
    response = client.post("/v1/solve", json={"problem": "two_dirac", "h": "1/8", "max_iter": 2})
    assert response.json()["status"] == "not_converged"
    assert response.json()["exit_code"] == 2


def test_study(client):
    response = client.post("/v1/solve/study", json={"problem": "quadratic", "h_list": ["1/4", "1/8"]})
    assert response.status_code == 200
    assert len(response.json()["summary"]["rows"]) == 2


def test_verify(client):
    response = client.post("/v1/verify", json={"suites": ["measure-bound"], "h": "1/8", "trials": 5})
    assert response.status_code == 200
    assert response.json()["summary"]["passed"] is True


def test_unknown_run(client):
    assert client.get("/v1/runs/missing").status_code == 404


def test_listing_and_counts(client):
    client.post("/v1/solve", json={"problem": "quadratic", "h": "1/4"})
    client.post("/v1/solve", json={"problem": "two_dirac", "h": "1/8", "max_iter": 1})
    assert len(client.get("/v1/runs").json()) == 2
    assert len(client.get("/v1/runs", params={"status": "not_converged"}).json()) == 1
    assert client.get("/v1/runs/stats/counts").json() == {"completed": 1, "not_converged": 1, "failed": 0}
