import numpy as np
import pytest

from models.campo_reticulo import LatticeField
from models.errores import ErrorPlebanski, FiberMismatch
from models.formas import GramForm
from models.stencil import OperatorStencil
from services.reticulo_service import ReticuloService


@pytest.mark.parametrize("n", [3, 5, 2])
def test_tamano_invalido(n):
    with pytest.raises(ErrorPlebanski):
        ReticuloService(n)


def test_campo_aleatorio_determinista(reticulo_service):
    a = reticulo_service.random_field(3, 42)
    b = reticulo_service.random_field(3, 42)
    assert a.data.shape == (3, 4, 4, 4, 4)
    assert np.array_equal(a.data, b.data)
    assert np.allclose(a.data.reshape(3, -1).std(axis=1), 1.0)


def test_derivada_de_onda_plana(reticulo_service):
    k = np.array([1, 0, -1, 1])
    onda = reticulo_service.onda_plana(np.array([2.0]), k)
    fase = np.einsum("m,m...->...", k.astype(float), reticulo_service.coordenadas())
    for mu in range(4):
        derivada = reticulo_service.derivada(onda, mu)
        assert np.allclose(derivada.data[0], -2.0 * k[mu] * np.sin(fase), atol=1e-12)


def test_laplaciano_de_onda_plana(reticulo_service):
    k = np.array([1, 1, 0, 1])
    onda = reticulo_service.onda_plana(np.array([1.0]), k)
    assert np.allclose(reticulo_service.laplaciano(onda).data, -3.0 * onda.data, atol=1e-12)


def test_derivada_antisimetrica(reticulo_service):
    u = reticulo_service.random_field(1, 1)
    v = reticulo_service.random_field(1, 2)
    gram = GramForm(np.eye(1), True, "R")
    for mu in range(4):
        izquierda = reticulo_service.inner(v, reticulo_service.derivada(u, mu), gram)
        derecha = reticulo_service.inner(reticulo_service.derivada(v, mu), u, gram)
        assert izquierda == pytest.approx(-derecha, abs=1e-10)


def test_apply_stencil_es_la_derivada(reticulo_service):
    coef = np.zeros((1, 4, 1))
    coef[0, 2, 0] = 1.0
    u = reticulo_service.random_field(1, 3)
    resultado = reticulo_service.apply_stencil(OperatorStencil(coef, "∂₂"), u)
    assert np.allclose(resultado.data, reticulo_service.derivada(u, 2).data)


def test_apply_stencil_fibra_incorrecta(reticulo_service):
    with pytest.raises(FiberMismatch):
        reticulo_service.apply_stencil(OperatorStencil(np.zeros((2, 4, 3)), "op"), reticulo_service.random_field(4, 0))


def test_campo_de_otra_red(reticulo_service):
    otro = ReticuloService(6).random_field(1, 0)
    with pytest.raises(FiberMismatch):
        reticulo_service.derivada(otro, 0)


def test_adjunto_formal_del_gradiente(reticulo_service):
    coef = np.zeros((4, 4, 1))
    for mu in range(4):
        coef[mu, mu, 0] = 1.0
    grad = OperatorStencil(coef, "grad")
    div = OperatorStencil(-np.swapaxes(coef, 0, 2), "-div")
    residuo = reticulo_service.adjoint_pair_check(
        grad, div, GramForm(np.eye(1), True), GramForm(np.eye(4), True), trials=3, seed=5)
    assert residuo < 1e-12


def test_ajuste_del_laplaciano(reticulo_service):
    coef = np.zeros((4, 4, 1))
    for mu in range(4):
        coef[mu, mu, 0] = 1.0
    M, residuo = reticulo_service.laplacian_multiple_check(
        OperatorStencil(coef, "grad"), GramForm(np.eye(1), True), GramForm(np.eye(4), True))
    assert residuo < 1e-10
    assert M[0, 0] == pytest.approx(1.0)


def test_export_import(reticulo_service, tmp_path):
    campo = reticulo_service.random_field(5, 7)
    ruta = tmp_path / "campo.plbk"
    reticulo_service.export_field(campo, ruta)
    leido = reticulo_service.import_field(ruta)
    assert np.array_equal(leido.data, campo.data)
    assert leido.band_limit == campo.band_limit


def test_import_archivo_corrupto(tmp_path):
    ruta = tmp_path / "malo.plbk"
    ruta.write_bytes(b"NOPE" + bytes(20))
    with pytest.raises(FiberMismatch):
        LatticeField.import_field(ruta)


def residuos_en_la_red(red, operadores_service, twisted_service, triple):
    grams = operadores_service.grams_pleb(triple)
    d1 = operadores_service.build_d1(triple)
    d2 = operadores_service.build_d2(triple)
    d1_adj = operadores_service.build_adjoints_pleb(triple)[0]
    adjuncion = red.adjoint_pair_check(d1, d1_adj, grams["TM"], grams["S"], trials=2, seed=3)
    d1xi = red.apply_stencil(d1, red.random_field(4, 11))
    complejo = red.norma(red.apply_stencil(d2, d1xi)) / red.norma(d1xi)
    dominio, imagen = twisted_service.grams_twisted(triple)
    _, laplaciano = red.laplacian_multiple_check(twisted_service.build_D_tilde(triple).completo(), dominio, imagen, 2, 3)
    return {"adjuncion": adjuncion, "d2d1": complejo, "laplaciano": laplaciano}


def test_refinar_la_red_no_empeora(reticulo_ocho, reticulo_dieciseis, operadores_service, twisted_service, estandar_float):
    gruesa = residuos_en_la_red(reticulo_ocho, operadores_service, twisted_service, estandar_float)
    fina = residuos_en_la_red(reticulo_dieciseis, operadores_service, twisted_service, estandar_float)
    for clave, residuo in gruesa.items():
        assert residuo < 1e-9, clave
        assert fina[clave] <= max(10.0 * residuo, 1e-12), clave
