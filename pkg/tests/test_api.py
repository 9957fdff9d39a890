import io
import json

import pytest

from app.cli import main
from app.main import create_app
from src.api.codec import dump_job, parse_input, serialize
from src.api.runner import run
from src.api.schemas import Command
from src.api.settings import RunSettings
from src.api.suite import run_suite
from src.errors import InputError
from src.report import Status

WORKED_TUPLE = {"entries": [{"coeffs": [[0, 0], [1, 0]]}, {"coeffs": [[1, 0], [-1, 0]]}]}
AT_ONE = {"atoms": [{"zeta": [1, 0], "weight": 1}]}


def job(command, **inputs):
    params = inputs.pop("params", {})
    return json.dumps({"command": command, "inputs": inputs, "params": params})


def test_parse_polynomial_and_atom():
    parsed = parse_input(
        job("norm", polynomial={"coeffs": [[0, 0], [1, 0]]}, measure={"atoms": [{"zeta": [0.70710678, 0.70710678]}]})
    )
    assert parsed.command is Command.NORM
    assert parsed.polynomial.degree == 1
    assert abs(parsed.measure.atoms[0].zeta.value) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize(
    "text, code",
    [
        ("{not json", "MALFORMED_JSON"),
        (job("norm", polynomial={"coeffs": [[1, 0]]}, measure={"atoms": [{"zeta": [2, 0]}]}), "OFF_CIRCLE"),
        (job("norm", polynomial={"coeffs": [[1, 0]]}, measure={"atoms": [{"zeta": [1, 0], "weight": -1}]}), "NONPOSITIVE_WEIGHT"),
        (json.dumps({"command": "norm", "extra": 1}), "UNKNOWN_KEY"),
        (job("norm", params={"grid_n": 0}), "INVALID_PARAM"),
        (json.dumps({"command": "teleport"}), "SCHEMA"),
    ],
)
def test_parse_errors(text, code):
    with pytest.raises(InputError) as info:
        parse_input(text)
    assert info.value.code == code


def test_missing_input_is_a_schema_error():
    with pytest.raises(InputError) as info:
        run(parse_input(job("corona")))
    assert info.value.code == "SCHEMA"


def test_dump_job_is_stable():
    text = job("corona", tuple=WORKED_TUPLE, measure=AT_ONE, params={"seed": 7})
    once = dump_job(parse_input(text))
    assert dump_job(parse_input(once)) == once


def test_serialize_is_canonical():
    assert serialize({"b": float("inf"), "a": 1 + 2j}) == '{"a":[1.0,2.0],"b":null}'


def test_settings_follow_params():
    settings = RunSettings.from_params(parse_input(job("reduce", params={"seed": 11, "max_iters": 5})).params)
    assert settings.seed == 11
    assert settings.budget.max_iters == 5


def test_norm_job():
    report = run(parse_input(job("norm", polynomial={"coeffs": [[0, 0], [1, 0]]}, measure=AT_ONE)))
    assert report.status is Status.PASS
    assert report.artifacts["dmu_norm_sq"] == pytest.approx(2.0)


def test_ldi_job():
    report = run(parse_input(job("ldi", polynomial={"coeffs": [[0, 0], [1, 0]]}, zeta=[1, 0])))
    assert report.status is Status.PASS
    assert report.artifacts["local_dirichlet"] == pytest.approx(1.0)
    assert report.artifacts["quadrature"] == pytest.approx(1.0, abs=1e-4)


def test_multnorm_job():
    report = run(parse_input(job("multnorm", tuple={"entries": [{"coeffs": [[0, 0], [1, 0]]}]}, measure=AT_ONE)))
    assert report.status is Status.PASS
    estimate = report.artifacts["estimate"]
    assert estimate["lower"] >= 2 ** 0.5 - 1e-12
    assert estimate["lower"] <= estimate["upper"]


def test_corona_job_embeds_solution():
    report = run(parse_input(job("corona", tuple=WORKED_TUPLE, measure=AT_ONE)))
    assert report.status is Status.PASS, report.failures()
    solution = report.artifacts["certificate"]["solution"]["entries"]
    flat = [[x for pair in entry["coeffs"] for x in pair] for entry in solution]
    assert flat[0] == pytest.approx([2.0, 0.0, -1.0, 0.0], abs=1e-12)
    assert flat[1] == pytest.approx([1.0, 0.0, -1.0, 0.0], abs=1e-12)


def test_corona_job_anchor_uses_certificate_base(monkeypatch):
    def no_second_base(*args, **kwargs):
        raise AssertionError("base solution recomputed")

    monkeypatch.setattr("src.api.runner.bezout_base", no_second_base)
    report = run(parse_input(job("corona", tuple=WORKED_TUPLE, measure=AT_ONE)))
    assert report.status is Status.PASS
    assert len(report.artifacts["anchor"]) == 1
    assert report.artifacts["anchor"][0]["residual"] <= 1e-12


def test_corona_job_reports_failed_condition():
    tuple_ = {"entries": [{"coeffs": [[0, 0], [1, 0]]}, {"coeffs": [[0, 0], [0, 0], [1, 0]]}]}
    report = run(parse_input(job("corona", tuple=tuple_, measure=AT_ONE)))
    assert report.status is Status.FAIL


def test_koszul_check_job():
    text = job(
        "koszul-check",
        vector_a=[[1, 0], [2, 1], [0, -1]],
        vector_d=[[0, 1], [1, 1], [3, 0]],
        tuple=WORKED_TUPLE,
        measure=AT_ONE,
    )
    report = run(parse_input(text))
    assert report.status is Status.PASS
    assert {item.name for item in report.items} >= {"identity_a", "identity_b", "identity_c", "koszul_vs_lift[0]"}


def test_reduce_job():
    text = job("reduce", f={"coeffs": [[0, 0], [1, 0]]}, h={"coeffs": [[1, 0], [-1, 0]]}, measure=AT_ONE)
    report = run(parse_input(text))
    assert report.status is Status.PASS
    u = report.artifacts["witness"]["u"]["coeffs"]
    assert [c[0] for c in u] == pytest.approx([8 / 27, 12 / 27, 6 / 27, 1 / 27], abs=1e-8)


def test_reduce_job_not_unimodular():
    text = job("reduce", f={"coeffs": [[0, 0], [1, 0]]}, h={"coeffs": [[0, 0], [1, 0]]}, measure=AT_ONE)
    assert run(parse_input(text)).status is Status.INCONCLUSIVE


def test_verify_suite_quick():
    report = run_suite(RunSettings(workers=2))
    assert report.status is Status.PASS, report.failures()
    prefixes = {item.name.split("/")[0] for item in report.items}
    assert prefixes == {
        "bounds.soundness",
        "corona.random",
        "corona.worked",
        "dirichlet.product_inequalities",
        "dirichlet.quadrature_oracle",
        "koszul.identities",
        "multipliers.sandwich",
        "stable_rank.curated",
    }


def test_verify_suite_independent_of_workers():
    names = ["koszul.identities", "dirichlet.product_inequalities"]
    one = run_suite(RunSettings(workers=1), names)
    three = run_suite(RunSettings(workers=3), names)
    assert serialize(one.to_dict()) == serialize(three.to_dict())


@pytest.mark.slow
def test_verify_suite_full():
    report = run_suite(RunSettings(full=True, workers=4))
    assert report.status is Status.PASS, report.failures()


def test_cli_exit_codes(tmp_path):
    out = io.StringIO()
    code = main([], stdin=io.StringIO(job("corona", tuple=WORKED_TUPLE, measure=AT_ONE)), stdout=out)
    assert code == 0
    assert json.loads(out.getvalue())["status"] == "PASS"

    out = io.StringIO()
    assert main([], stdin=io.StringIO("{oops"), stdout=out) == 3
    assert json.loads(out.getvalue())["code"] == "MALFORMED_JSON"

    bad = {"entries": [{"coeffs": [[0, 0], [1, 0]]}, {"coeffs": [[0, 0], [0, 0], [1, 0]]}]}
    path = tmp_path / "job.json"
    path.write_text(job("corona", tuple=bad, measure=AT_ONE))
    assert main([str(path)], stdout=io.StringIO()) == 1


def test_cli_writes_csv(tmp_path):
    target = tmp_path / "grid.csv"
    out = io.StringIO()
    text = job("grid-export", tuple={"entries": [{"coeffs": [[1, 0]]}]}, params={"resolution": 2, "angles": 4})
    assert main(["--csv-out", str(target)], stdin=io.StringIO(text), stdout=out) == 0
    lines = target.read_text().splitlines()
    assert lines[0] == "r,theta,re_z,im_z,sum_sq,abs_b0"
    assert len(lines) == 1 + 2 * 4
    assert json.loads(out.getvalue())["artifacts"]["csv_path"] == str(target)


def test_grid_export_job_solves_for_b():
    text = job("grid-export", tuple=WORKED_TUPLE, measure=AT_ONE, params={"resolution": 2, "angles": 4})
    report = run(parse_input(text))
    assert report.status is Status.PASS
    lines = report.artifacts["csv"].splitlines()
    assert lines[0] == "r,theta,re_z,im_z,sum_sq,abs_b0,abs_b1"
    # origin row: B = (2 - z, 1 - z) gives |b_0| = 2, |b_1| = 1
    assert [float(x) for x in lines[1].split(",")[-2:]] == pytest.approx([2.0, 1.0], abs=1e-10)


def test_grid_export_job_with_common_root():
    tuple_ = {"entries": [{"coeffs": [[0, 0], [1, 0]]}, {"coeffs": [[0, 0], [0, 0], [1, 0]]}]}
    report = run(parse_input(job("grid-export", tuple=tuple_, params={"resolution": 2, "angles": 4})))
    assert report.status is Status.FAIL
    assert report.artifacts["csv"].splitlines()[0] == "r,theta,re_z,im_z,sum_sq"


def test_http_run_endpoint():
    client = create_app().test_client()
    assert client.get("/api/ping").get_json() == {"status": "success"}

    response = client.post("/api/run", data=job("corona", tuple=WORKED_TUPLE, measure=AT_ONE))
    assert response.status_code == 200
    assert response.get_json()["status"] == "PASS"

    response = client.post("/api/run", data="{oops")
    assert response.status_code == 400
    assert response.get_json()["code"] == "MALFORMED_JSON"
