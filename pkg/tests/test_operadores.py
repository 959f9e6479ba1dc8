import numpy as np
import pytest
from hypothesis import given, settings

from conftest import matrices_gl4
from models.errores import FiberMismatch
from models.stencil import OperatorStencil


@pytest.fixture(scope="module")
def plebanski(operadores_service, estandar):
    d1 = operadores_service.build_d1(estandar)
    d2 = operadores_service.build_d2(estandar)
    d3 = operadores_service.build_d3(estandar)
    return d1, d2, d3


def test_dimensiones(plebanski):
    d1, d2, d3 = plebanski
    assert (d1.dim_in, d1.dim_out) == (4, 13)
    assert (d2.dim_in, d2.dim_out) == (13, 12)
    assert (d3.dim_in, d3.dim_out) == (12, 3)
    assert d1.exacto and d2.exacto and d3.exacto


def test_composiciones_exactas(operadores_service, plebanski):
    d1, d2, d3 = plebanski
    assert operadores_service.is_zero(operadores_service.compose(d2, d1))
    assert operadores_service.is_zero(operadores_service.compose(d3, d2))


def test_composiciones_de_adjuntos(operadores_service, estandar):
    d1_adj, d2_adj, d3_adj = operadores_service.build_adjoints_pleb(estandar)
    assert operadores_service.is_zero(operadores_service.compose(d1_adj, d2_adj))
    assert operadores_service.is_zero(operadores_service.compose(d2_adj, d3_adj))


@settings(max_examples=8, deadline=None)
@given(matrices_gl4())
def test_composiciones_en_pullbacks(sigma_service, operadores_service, estandar, M):
    triple = sigma_service.gl4_pullback(estandar, M)
    d1, d2, d3 = (operadores_service.build_d1(triple), operadores_service.build_d2(triple),
                  operadores_service.build_d3(triple))
    assert operadores_service.compose(d2, d1).norma() < 1e-9
    assert operadores_service.compose(d3, d2).norma() < 1e-9


def test_d2_por_estrella_d(operadores_service, estandar, plebanski):
    _, d2, _ = plebanski
    assert (operadores_service.build_d2_map2(estandar) - d2).es_cero()


def test_adjuntos_formales(operadores_service, estandar):
    grams = operadores_service.grams_pleb(estandar)
    d1_adj, d2_adj, d3_adj = operadores_service.build_adjoints_pleb(estandar)
    d1, d2, d3 = (operadores_service.build_d1(estandar), operadores_service.build_d2(estandar),
                  operadores_service.build_d3(estandar))
    assert (operadores_service.formal_adjoint(d1, grams["TM"], grams["S"]) - d1_adj).es_cero()
    assert (operadores_service.formal_adjoint(d2, grams["S"], grams["EL1"]) - d2_adj).es_cero()
    assert (operadores_service.formal_adjoint(d3, grams["EL1"], grams["E"]) - d3_adj).es_cero()


def test_d2_estrella_d2_forma_cerrada(operadores_service, estandar, plebanski):
    _, d2, _ = plebanski
    d2_adj = operadores_service.build_adjoints_pleb(estandar)[1]
    cerrada = operadores_service.d2star_d2_stencil(estandar)
    assert (operadores_service.compose(d2_adj, d2) - cerrada).es_cero()


def test_componer_fibras_incompatibles(operadores_service, plebanski):
    d1, _, d3 = plebanski
    with pytest.raises(FiberMismatch):
        operadores_service.compose(d3, d1)


def test_stencil_to_dict_exacto(plebanski):
    _, d2, _ = plebanski
    copia = OperatorStencil.from_dict(d2.to_dict())
    assert copia.exacto
    assert (copia - d2).es_cero()


def test_d2d1_en_la_red(operadores_service, reticulo_service, estandar_float):
    d1 = operadores_service.build_d1(estandar_float)
    d2 = operadores_service.build_d2(estandar_float)
    xi = reticulo_service.random_field(4, 11)
    d1xi = reticulo_service.apply_stencil(d1, xi)
    resto = reticulo_service.apply_stencil(d2, d1xi)
    assert reticulo_service.norma(resto) < 1e-12 * reticulo_service.norma(d1xi)


def test_d3_contra_producto_cuna(operadores_service, reticulo_service, estandar_float):
    a = reticulo_service.random_field(12, 4)
    directa = reticulo_service.apply_stencil(operadores_service.build_d3(estandar_float), a)
    cuna = operadores_service.d3_wedge_oracle(estandar_float, a, reticulo_service)
    assert reticulo_service.norma(directa - cuna) < 1e-10 * reticulo_service.norma(directa)


def test_pares_adjuntos_en_la_red(operadores_service, reticulo_service, estandar_float):
    grams = operadores_service.grams_pleb(estandar_float)
    d1_adj, d2_adj, d3_adj = operadores_service.build_adjoints_pleb(estandar_float)
    pares = [
        (operadores_service.build_d1(estandar_float), d1_adj, grams["TM"], grams["S"]),
        (operadores_service.build_d2(estandar_float), d2_adj, grams["S"], grams["EL1"]),
        (operadores_service.build_d3(estandar_float), d3_adj, grams["EL1"], grams["E"]),
    ]
    for operador, adjunto, gram_in, gram_out in pares:
        assert reticulo_service.adjoint_pair_check(operador, adjunto, gram_in, gram_out, trials=3, seed=1) < 1e-10


def test_signo_equivocado_rompe_la_adjuncion(operadores_service, reticulo_service, estandar_float):
    grams = operadores_service.grams_pleb(estandar_float)
    d1 = operadores_service.build_d1(estandar_float)
    d1_adj = operadores_service.build_adjoints_pleb(estandar_float)[0]
    residuo = reticulo_service.adjoint_pair_check(d1, d1_adj.escalar(-1), grams["TM"], grams["S"], trials=2, seed=0)
    assert residuo > 1e-3


def test_canal_tres_de_d_d2_sigma(operadores_service, reticulo_service, estandar_float):
    sigma = reticulo_service.random_field(13, 8)
    a = reticulo_service.apply_stencil(operadores_service.build_d2(estandar_float), sigma)
    _, canales = operadores_service.einstein_residual(estandar_float, a, reticulo_service)
    escala = float(np.max(np.abs(reticulo_service.gradiente(a))))
    assert float(np.max(np.abs(canales["3"]))) < 1e-10 * escala


def test_canal_hi_de_d2_estrella_d2(operadores_service, reticulo_service, estandar_float):
    sigma = reticulo_service.random_field(13, 9)
    resultado = operadores_service.d2star_d2(estandar_float, sigma, reticulo_service)
    assert reticulo_service.norma(resultado.componentes(1, 4)) < 1e-12 * reticulo_service.norma(resultado)


def test_ondas_gravitacionales(operadores_service, estandar):
    resultado = operadores_service.einstein_symbol_check(estandar, np.array([1.0, 1.0j, 0.0, 0.0]))
    assert resultado["k_cuadrado"] == pytest.approx(0.0)
    assert resultado["dim_nucleo"] > 0
    assert resultado["residuo_canales"] < 1e-8
