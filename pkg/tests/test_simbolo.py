import numpy as np
import pytest
from hypothesis import given, settings

from conftest import covectores, matrices_gl4
from models.errores import DegenerateK
from services.simbolo_service import SimboloService


@settings(max_examples=30, deadline=None)
@given(covectores())
def test_exactitud_en_direcciones_aleatorias(simbolo_service, estandar, k):
    reporte = simbolo_service.exactness_report(estandar, k)
    assert reporte["ranks"] == [4, 9, 3]
    assert reporte["kernel_dims"] == [0, 4, 9]
    assert reporte["max_principal_angle"] < 1e-10
    assert reporte["min_gap"] > 1e4


@settings(max_examples=5, deadline=None)
@given(matrices_gl4())
def test_exactitud_en_pullbacks(sigma_service, simbolo_service, estandar, M):
    triple = sigma_service.gl4_pullback(estandar, M)
    barrido = simbolo_service.exactness_sweep(triple, 5, 0)
    assert barrido["fallos"] == 0
    assert barrido["rangos"] == [(4, 9, 3)]


def test_barrido_incluye_ejes_y_esquinas(simbolo_service, estandar):
    barrido = simbolo_service.exactness_sweep(estandar, 20, 7)
    assert barrido["direcciones"] == 20 + 8 + 16
    assert barrido["fallos"] == 0
    assert barrido["composiciones"] < 1e-12


def test_covector_nulo(simbolo_service, estandar):
    with pytest.raises(DegenerateK):
        simbolo_service.exactness_report(estandar, [0.0, 0.0, 0.0, 0.0])


def test_suma_alternada_de_dimensiones(operadores_service, estandar):
    d1, d2, d3 = (operadores_service.build_d1(estandar), operadores_service.build_d2(estandar),
                  operadores_service.build_d3(estandar))
    assert d1.dim_in - d1.dim_out + d2.dim_out - d3.dim_out == 0


def test_rango_y_brecha():
    rango, brecha = SimboloService.rango_y_brecha(np.diag([3.0, 1.0, 1e-14]))
    assert rango == 2
    assert brecha > 1e10


@settings(max_examples=20, deadline=None)
@given(covectores())
def test_base_adaptada_a_k(simbolo_service, estandar, k):
    residuos = simbolo_service.kbasis_residuals(estandar, k)
    assert max(residuos.values()) < 1e-12



def test_simbolo_lineal_en_k(simbolo_service, operadores_service, estandar_float):
    d3 = operadores_service.build_d3(estandar_float)
    k = np.array([0.4, -1.0, 0.2, 0.7])
    simbolo = simbolo_service.symbol_at(d3, k)
    assert np.allclose(simbolo_service.symbol_at(d3, 2 * k).matrix, 2 * simbolo.matrix)
    assert simbolo.rango() == 3
    assert not np.any(simbolo_service.symbol_at(d3, np.zeros(4)).matrix)


def test_base_k_en_el_eje(simbolo_service, estandar):
    e = simbolo_service.kbasis_frame(estandar, [2.0, 0.0, 0.0, 0.0])
    assert np.allclose(e.dot(e.T), np.eye(3))
    assert np.allclose(e[:, 0], 0.0)


def test_base_k_degenerada(simbolo_service, estandar):
    with pytest.raises(DegenerateK):
        simbolo_service.kbasis_frame(estandar, np.zeros(4))
