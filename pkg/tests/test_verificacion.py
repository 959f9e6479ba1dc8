import numpy as np
import pytest

from models.errores import ErrorPlebanski
from models.reporte import CheckRecord, EstadoCheck, VerificationReport
from services.verificacion_service import SUITES, VerificacionService


def test_suite_desconocida(verificacion_service):
    with pytest.raises(ErrorPlebanski):
        verificacion_service.verificar("bogus")


def test_tabla_de_suites(verificacion_service):
    assert tuple(verificacion_service.suites()) == SUITES


def test_suite_algebra(verificacion_service):
    reporte = verificacion_service.verificar("algebra", seed=3)
    assert reporte.ok(), reporte.fallidos()
    ids = {r.check_id for r in reporte.records}
    assert {"algebra.perfeccion", "algebra.traza", "algebra.metrica"} <= ids


@pytest.mark.parametrize("suite", ["coefficients", "twisted"])
def test_suites_exactas(verificacion_service, suite):
    reporte = verificacion_service.verificar(suite, seed=0)
    assert reporte.ok(), reporte.fallidos()


def test_signos_en_el_informe(verificacion_service):
    reporte = verificacion_service.verificar("twisted", seed=1)
    registro = next(r for r in reporte.records if r.check_id == "twisted.signos_base")
    assert registro.status == EstadoCheck.PASS


def test_esquema_de_registros(verificacion_service):
    datos = verificacion_service.verificar("algebra").to_dict()
    assert set(datos) == {"suite", "seed", "fecha", "pass", "records", "notas"}
    for registro in datos["records"]:
        assert set(registro) == {"check_id", "paper_ref", "status", "residual", "tolerance", "seed"}
        assert registro["status"] in ("pass", "fail", "info")


def test_registro_informativo_no_falla():
    reporte = VerificationReport("prueba", 0)
    reporte.agregar(CheckRecord.informar("prueba.info", "valor", 1e3))
    reporte.agregar(CheckRecord.comparar("prueba.ok", "residuo", 1e-14, 1e-12))
    assert reporte.ok()
    reporte.agregar(CheckRecord.comparar("prueba.mal", "residuo", 1e-3, 1e-12))
    assert [r.check_id for r in reporte.fallidos()] == ["prueba.mal"]
    assert not reporte.to_dict()["pass"]


def test_registro_from_dict():
    registro = CheckRecord.afirmar("prueba.rango", "rango 9", True, seed=4)
    copia = CheckRecord.from_dict(registro.to_dict())
    assert copia.to_dict() == registro.to_dict()


def test_operador_ingenuo_pleb_no_ajusta_en_la_red(sigma_service, formas_service, operadores_service, simbolo_service,
                                                   coeficientes_service, reticulo_ocho, twisted_service):
    servicio = VerificacionService(sigma_service, formas_service, operadores_service, simbolo_service,
                                   coeficientes_service, reticulo_ocho, twisted_service, samples=50, pullbacks=3, trials=3)
    reporte = servicio.verificar("coefficients", seed=0)
    registro = next(r for r in reporte.records if r.check_id == "coefficients.naive_pleb_red")
    assert registro.status == EstadoCheck.PASS
    assert registro.residual > 0.1


def test_tripleta_ignorada_queda_anotada(verificacion_service, sigma_service, estandar):
    triple = sigma_service.gl4_pullback(estandar, np.diag([1.0, 2.0, 0.5, 1.5]))
    coeficientes = verificacion_service.verificar("coefficients", triple=triple)
    assert any("coefficients" in nota and "tripleta estándar" in nota for nota in coeficientes.notas)
    algebra = verificacion_service.verificar("algebra", triple=triple)
    assert not any("tripleta estándar" in nota for nota in algebra.notas)
    assert not any("tripleta estándar" in nota for nota in verificacion_service.verificar("coefficients").notas)
