import orjson
import pytest
from typer.testing import CliRunner

from plurilag import __version__
from plurilag.commands import runner as command_runner
from plurilag.core.exceptions import UnknownFlow
from plurilag.core.logging import logger
from plurilag.main import app
from plurilag.models.responses import HeaderRecord
from plurilag.services.report_service import Report

cli = CliRunner()


@pytest.fixture(autouse=True)
def detach_log_sinks():
    # the CLI attaches loguru to the runner's captured stderr
    yield
    logger.remove()


def invoke(*args):
    return cli.invoke(app, list(args))


def records(result):
    return [orjson.loads(line) for line in result.stdout.splitlines()]


def test_version():
    result = invoke("--version")
    assert result.exit_code == 0
    assert __version__ in result.stdout


def test_generate_structured():
    result = invoke("generate", "--n", "3", "--k", "3", "--format", "structured", "--cache-dir", "")
    assert result.exit_code == 0
    out = records(result)
    assert out[0]["record"] == "header"
    assert out[0]["coordinates"] == ["x", "t2", "t3"]
    values = {r["name"]: r["value"] for r in out if r["record"] == "polynomial"}
    assert values["r_3"] == "10*u^3 + 5*u_x^2 + 10*u*u_xx + u_xxxx"
    assert values["g_2"] == "3*v_x^2 + v_xxx"
    assert out[-1]["record"] == "summary"


def test_generate_text():
    result = invoke("generate", "--k", "0", "--format", "text", "--cache-dir", "")
    assert result.exit_code == 0
    assert "r_0" in result.stdout
    assert "1/2" in result.stdout
    assert result.stdout.splitlines()[-1] == "PASSED"


def test_generate_uses_the_cache(tmp_path):
    cold = invoke("generate", "--n", "2", "--k", "2", "--format", "structured", "--cache-dir", str(tmp_path))
    assert (tmp_path / "kdv-n2-k2.json").exists()
    warm = invoke("generate", "--n", "2", "--k", "2", "--format", "structured", "--cache-dir", str(tmp_path))
    assert cold.exit_code == warm.exit_code == 0
    assert cold.stdout == warm.stdout


@pytest.mark.parametrize(
    "args",
    [
        ("verify", "pkdv", "--n", "2"),
        ("verify", "pkdv", "--n", "3", "--k", "2"),
        ("verify", "pkdv", "--n", "3", "--omit", "5"),
        ("verify", "curves-demo", "--n", "1"),
        ("bicomplex-props", "--n", "1"),
        ("bicomplex-props", "--count", "0"),
    ],
)
def test_invalid_arguments_exit_with_usage_error(args):
    result = invoke(*args)
    assert result.exit_code == 2
    assert "Error" in result.stderr


def test_verify_sine_gordon():
    result = invoke("verify", "sine-gordon", "--format", "structured", "--jobs", "1")
    assert result.exit_code == 0
    summary = records(result)[-1]
    assert summary["passed"] is True
    assert summary["counts"]["NONZERO-RESIDUAL"] == 0


def test_verify_curves_demo():
    result = invoke("verify", "curves-demo", "--n", "2")
    assert result.exit_code == 0
    assert "[FAIL]" not in result.stdout


def test_involutivity():
    result = invoke("involutivity", "--k", "2", "--format", "structured", "--cache-dir", "")
    assert result.exit_code == 0
    matrix = [r for r in records(result) if r["record"] == "matrix"]
    assert matrix[0]["rows"] == [[True, True], [True, True]]


def test_bicomplex_props():
    result = invoke("bicomplex-props", "--count", "10", "--seed", "3")
    assert result.exit_code == 0
    assert result.stdout.count("[PASS]") == 6


def test_engine_errors_exit_with_failure(monkeypatch):
    def broken(cfg, cache=None):
        raise UnknownFlow(4)

    monkeypatch.setattr(command_runner.verification_service, "run", broken)
    result = invoke("verify", "curves-demo")
    assert result.exit_code == 1


def test_failed_report_exits_with_failure(monkeypatch):
    def failing(cfg, cache=None):
        report = Report(HeaderRecord(command=cfg.command.value, n=cfg.n))
        report.flag("always fails", False)
        report.finish()
        return report

    monkeypatch.setattr(command_runner.verification_service, "run", failing)
    result = invoke("verify", "curves-demo", "--format", "text")
    assert result.exit_code == 1
    assert "[FAIL] always fails: ?" in result.stdout
    assert result.stdout.splitlines()[-1] == "FAILED"


@pytest.mark.slow
def test_verify_pkdv_is_byte_stable(tmp_path):
    args = ["verify", "pkdv", "--n", "3", "--format", "structured", "--jobs", "1", "--cache-dir", str(tmp_path)]
    cold = invoke(*args)
    warm = invoke(*args)
    assert cold.exit_code == 0
    assert cold.stdout == warm.stdout
    parallel = invoke(*args[:-3], "2", "--cache-dir", str(tmp_path))
    assert parallel.stdout == cold.stdout


@pytest.mark.slow
def test_verify_pkdv_in_four_dimensions_is_byte_stable(tmp_path):
    args = ["verify", "pkdv", "--n", "4", "--format", "structured", "--cache-dir", str(tmp_path)]
    cold = invoke(*args, "--jobs", "1")
    warm = invoke(*args, "--jobs", "1")
    parallel = invoke(*args, "--jobs", "2")
    assert cold.exit_code == 0
    assert records(cold)[-1]["passed"] is True
    assert cold.stdout == warm.stdout == parallel.stdout
