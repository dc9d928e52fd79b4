import shutil

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from confdebug import serialize
from confdebug.cli import main
from confdebug.server import create_app

from conftest import FIXTURES


@pytest.fixture()
def ws(tmp_path):
    dst = tmp_path / "ws"
    shutil.copytree(FIXTURES / "berkeley_mini", dst)
    runner = CliRunner()
    for args in (["measure"], ["model"]):
        result = runner.invoke(main, ["-w", str(dst), *args],
                               catch_exceptions=False)
        assert result.exit_code == 0
    return dst


@pytest.fixture()
def client(ws):
    with TestClient(create_app(ws)) as client:
        yield client


def test_options_endpoint(client):
    options = client.get("/api/options").json()
    names = [o["name"] for o in options]
    assert sorted(names) == ["Duplicates", "Evict", "Replicated",
                             "Temporary", "Transactions"]
    assert all(o["values"] == [False, True] for o in options)


def test_configs_echo_workspace(client, ws):
    body = client.get("/api/configs").json()
    manifest = serialize.loads((ws / "workspace.json").read_text())
    assert body["base"] == "default"
    assert body["configurations"] == manifest["configurations"]
    assert body["generation"] == 1


def test_influencing_options_contains_interaction(client):
    resp = client.post("/api/influencing-options",
                       json={"from": "default", "to": "user"})
    assert resp.status_code == 200
    body = resp.json()
    top = body["influences"][0]
    assert top["options"] == ["Duplicates", "Transactions"]
    assert top["delta"] == pytest.approx(54.7, abs=1e-9)
    assert body["unexplained_changes"] == ["Replicated"]


def test_unknown_config_is_404(client):
    resp = client.post("/api/profile-diff",
                       json={"from": "default", "to": "nope"})
    assert resp.status_code == 404


def test_malformed_request_is_400(client):
    assert client.post("/api/influencing-options",
                       json={"from": "default"}).status_code == 400
    assert client.post("/api/influencing-options",
                       content=b"not json").status_code == 400
    assert client.post("/api/option-hotspots",
                       json={"from": "default", "to": "user",
                             "min_delta": -1}).status_code == 400
    assert client.post("/api/cause-effect",
                       json={"from": "default", "to": "user",
                             "hotspots": [1, 2]}).status_code == 400


def _cli_json(ws, *args):
    result = CliRunner().invoke(main, ["-w", str(ws), *args, "--format",
                                       "json"], catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result.output.strip()


def test_responses_byte_identical_to_cli(client, ws):
    pairs = [
        ("/api/influencing-options", ["diff-config", "default", "user"], {}),
        ("/api/option-hotspots", ["hotspots", "default", "user"], {}),
        ("/api/profile-diff", ["profile-diff", "default", "user"], {}),
    ]
    for endpoint, cli_args, extra in pairs:
        expected = _cli_json(ws, *cli_args)
        resp = client.post(endpoint,
                           json={"from": "default", "to": "user", **extra})
        assert resp.status_code == 200
        assert resp.text == expected, endpoint
    # chain needs the hotspots report on disk first (written above)
    expected = _cli_json(ws, "chain", "default", "user")
    hotspots = serialize.loads(
        (ws / "reports" / "option-hotspots_default_user.json").read_text())
    resp = client.post("/api/cause-effect", json={
        "from": "default", "to": "user",
        "hotspots": [e["function"] for e in hotspots["entries"]],
    })
    assert resp.status_code == 200
    assert resp.text == expected


def test_source_highlights_follow_chop(client):
    chop = client.post("/api/cause-effect",
                       json={"from": "default", "to": "user"}).json()
    resp = client.get("/api/source", params={
        "file": "berkeley_mini.mcf", "chop_id": chop["chop_id"]})
    assert resp.status_code == 200
    body = resp.json()
    assert body["highlights"] == chop["highlights"]["berkeley_mini.mcf"]
    text = body["text"]
    for span in body["highlights"]:
        assert 0 <= span["start"] < span["end"] <= len(text)

    assert client.get("/api/source", params={
        "file": "berkeley_mini.mcf", "chop_id": "bogus"}).status_code == 404
    assert client.get("/api/source", params={
        "file": "other.mcf", "chop_id": chop["chop_id"]}).status_code == 404
    assert client.get("/api/source").status_code == 400


def test_cached_response_is_identical(client):
    body = {"from": "default", "to": "user"}
    first = client.post("/api/profile-diff", json=body)
    second = client.post("/api/profile-diff", json=body)
    assert first.content == second.content


def test_reload_bumps_generation_and_rejects_stale(client, ws):
    resp = client.post("/api/reload")
    assert resp.status_code == 200
    assert resp.json()["generation"] == 2
    assert client.get("/api/configs").json()["generation"] == 2

    prog = ws / "berkeley_mini.mcf"
    prog.write_text(prog.read_text().replace("work(38)", "work(39)"))
    resp = client.post("/api/reload")
    assert resp.status_code == 409
    # old snapshot still serves
    assert client.get("/api/configs").json()["generation"] == 2
    assert client.post("/api/influencing-options",
                       json={"from": "default", "to": "user"}).status_code == 200
