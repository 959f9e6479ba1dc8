import json

import pytest
from click.testing import CliRunner

from main import InformeSchema, cli


@pytest.fixture
def runner(monkeypatch):
    for variable in ("PLEBANSKI_N", "PLEBANSKI_SEED", "PLEBANSKI_TOL", "PLEBANSKI_THREADS",
                     "PLEBANSKI_SAMPLES", "PLEBANSKI_LOG_LEVEL"):
        monkeypatch.delenv(variable, raising=False)
    return CliRunner()


def test_suite_desconocida(runner):
    resultado = runner.invoke(cli, ["verify", "bogus"])
    assert resultado.exit_code == 2


def test_red_impar(runner):
    resultado = runner.invoke(cli, ["verify", "algebra", "--n", "5"])
    assert resultado.exit_code == 2
    assert "Configuración inválida" in resultado.output


def test_tolerancia_negativa(runner):
    resultado = runner.invoke(cli, ["verify", "algebra", "--n", "4", "--tol", "-1"])
    assert resultado.exit_code == 2


def test_verify_algebra_escribe_json(runner, tmp_path):
    ruta = tmp_path / "informe.json"
    resultado = runner.invoke(cli, ["verify", "algebra", "--n", "4", "--out", str(ruta)])
    assert resultado.exit_code == 0, resultado.output
    datos = json.loads(ruta.read_text(encoding="utf-8"))
    assert all("paper_ref" in registro and "referencia" not in registro for registro in datos["records"])
    informe = InformeSchema.model_validate(datos)
    assert informe.aprobado
    assert informe.suite == "algebra"


def test_tripleta_inexistente(runner, tmp_path):
    resultado = runner.invoke(cli, ["verify", "algebra", "--n", "4", "--triple", str(tmp_path / "nada.json")])
    assert resultado.exit_code == 2


def test_solve_b_coeffs(runner):
    resultado = runner.invoke(cli, ["solve", "b-coeffs"])
    assert resultado.exit_code == 0, resultado.output
    assert "b = 1/4, 2, 0, 0, -1" in resultado.output


def test_solve_b_coeffs_degenerado(runner):
    resultado = runner.invoke(cli, ["solve", "b-coeffs", "--c", "1,1"])
    assert resultado.exit_code == 1
    assert "DegenerateFamily" in resultado.output


def test_solve_literal_invalido(runner):
    resultado = runner.invoke(cli, ["solve", "b-coeffs", "--a", "1,x,2"])
    assert resultado.exit_code == 2


def test_solve_inner_products(runner):
    resultado = runner.invoke(cli, ["solve", "inner-products", "--pleb"])
    assert resultado.exit_code == 0, resultado.output
    assert "β = (1/4, 8, 1), γ = (1, 0)" in resultado.output


def test_solve_adjoints(runner):
    resultado = runner.invoke(cli, ["solve", "adjoints", "--pleb"])
    assert resultado.exit_code == 0, resultado.output
    assert "a′ = -1/4, 2, -1" in resultado.output


def test_export_field(runner, tmp_path):
    ruta = tmp_path / "campo.plbk"
    resultado = runner.invoke(cli, ["export-field", str(ruta), "--fiber", "3", "--n", "4", "--seed", "1"])
    assert resultado.exit_code == 0, resultado.output
    assert ruta.stat().st_size == 16 + 8 * 3 * 4 ** 4
