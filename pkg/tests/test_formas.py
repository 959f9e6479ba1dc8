import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import matrices_gl4
from models.errores import NotInS
from models.formas import EOneForm, ETwoForm, SElement
from models.raiz_dos import a_float, es_cero_exacto, identidad
from services.formas_service import CANALES

vectores = st.lists(st.floats(-2.0, 2.0, allow_nan=False), min_size=13, max_size=13).map(np.array)


def test_j1_polinomio_minimo_exacto(formas_service, estandar):
    J = formas_service.j1_matrix(estandar)
    I = identidad(12, True)
    assert es_cero_exacto(J.dot(J) - 2 * I - J)


def test_j1_multiplicidades(formas_service, estandar):
    autovalores = np.round(np.real(np.linalg.eigvals(a_float(formas_service.j1_matrix(estandar)))), 8)
    assert np.sum(autovalores == 2.0) == 4
    assert np.sum(autovalores == -1.0) == 8


def test_j1_proyectores(formas_service, estandar):
    P4, P8 = formas_service.j1_projectors(estandar)
    I = identidad(12, True)
    assert es_cero_exacto(P4 + P8 - I)
    assert es_cero_exacto(P4.dot(P8))
    assert es_cero_exacto(P4.dot(P4) - P4)


def test_j2_polinomio_exacto(formas_service, estandar):
    J = formas_service.j2_matrix(estandar)
    I = identidad(18, True)
    assert es_cero_exacto(J.dot(J - 2 * I).dot(J - I).dot(J + I))


def test_j2_multiplicidades(formas_service, estandar):
    autovalores = np.round(np.real(np.linalg.eigvals(a_float(formas_service.j2_matrix(estandar)))), 8)
    conteo = [int(np.sum(autovalores == float(lam))) for lam in CANALES.values()]
    assert conteo == [1, 3, 5, 9]


def test_proyectores_de_canal(formas_service, estandar):
    canales = formas_service.channel_projectors(estandar)
    lagrange = formas_service.j2_projectors(estandar)
    suma = sum(canales.values())
    assert es_cero_exacto(suma - identidad(18, True))
    for nombre, dimension in (("1", 1), ("3", 3), ("5", 5), ("9", 9)):
        assert np.linalg.matrix_rank(a_float(canales[nombre])) == dimension
        assert np.max(np.abs(a_float(canales[nombre] - lagrange[nombre]))) < 1e-12


@settings(max_examples=25, deadline=None)
@given(vectores)
def test_s_embed_extract_ida_y_vuelta(formas_service, estandar_float, v):
    s = formas_service.s_desde_vector(estandar_float, v)
    sigma = formas_service.s_embed(estandar_float, s)
    vuelta = formas_service.s_vector(estandar_float, formas_service.s_extract(estandar_float, sigma))
    assert np.max(np.abs(vuelta - v)) < 1e-12


@settings(max_examples=10, deadline=None)
@given(vectores, matrices_gl4())
def test_s_embed_no_tiene_canal_cinco(sigma_service, formas_service, estandar_float, v, M):
    triple = sigma_service.gl4_pullback(estandar_float, M)
    sigma = formas_service.s_embed(triple, formas_service.s_desde_vector(triple, v))
    s4, _, _, _ = formas_service.decompose_two_form(triple, sigma)
    assert np.max(np.abs(s4)) < 1e-10


def test_s_extract_rechaza_canal_cinco(formas_service, estandar_float):
    B = ETwoForm(np.einsum("ij,jmn->imn", np.diag([1.0, -1.0, 0.0]), estandar_float.sigma))
    with pytest.raises(NotInS):
        formas_service.s_extract(estandar_float, B)


def test_descomposicion_y_reconstruccion(formas_service, estandar_float):
    rng = np.random.default_rng(3)
    B = rng.standard_normal((3, 4, 4))
    B = ETwoForm(B - np.swapaxes(B, 1, 2))
    partes = formas_service.decompose_two_form(estandar_float, B)
    assert np.max(np.abs(formas_service.reconstruct_two_form(estandar_float, *partes).B - B.B)) < 1e-12


def test_gram_s_reproduce_la_norma_de_sigma(formas_service, estandar_float):
    rng = np.random.default_rng(5)
    gram = a_float(formas_service.gram_S(0.25, 8.0, 1.0).matrix)
    for _ in range(5):
        v = rng.standard_normal(13)
        sigma = formas_service.s_embed(estandar_float, formas_service.s_desde_vector(estandar_float, v))
        traza = np.einsum("imn,imn->", estandar_float.sigma_arriba(), sigma.B)
        cuadrados = np.sum(sigma.B ** 2)
        assert v.dot(gram).dot(v) == pytest.approx(0.25 * cuadrados - traza ** 2 / 72.0, abs=1e-10)


def test_gram_el1_inversa(formas_service, estandar):
    for gammas in ((0, 1), (1, 0), (3, 1)):
        G = formas_service.gram_EL1(*gammas, triple=estandar)
        assert es_cero_exacto(G.matrix.dot(G.inversa()) - identidad(12, True))


def test_gram_el1_plebanski_indefinida(formas_service, estandar):
    autovalores = formas_service.gram_EL1(0, 1, triple=estandar).autovalores()
    assert np.sum(autovalores > 0) == 8
    assert np.sum(autovalores < 0) == 4


def test_s_element_to_dict(formas_service, estandar_float):
    s = SElement(0.5, np.array([1.0, 2.0, 3.0]), formas_service.htilde_de_coordenadas(estandar_float, np.arange(9.0)))
    copia = SElement.from_dict(s.to_dict())
    assert np.allclose(formas_service.s_vector(estandar_float, copia), formas_service.s_vector(estandar_float, s))


def test_j1_en_formas_generadas_por_xi(formas_service, estandar_float):
    xi = np.array([0.3, -1.0, 2.0, 0.5])
    a = EOneForm(np.einsum("a,iam->im", xi, estandar_float.sigma))
    assert np.allclose(formas_service.j1_apply(estandar_float, a).a, 2.0 * a.a, atol=1e-12)


def test_j2_en_sigma_y_en_diamante(formas_service, estandar_float):
    sigma = ETwoForm(estandar_float.sigma)
    assert np.allclose(formas_service.j2_apply(estandar_float, sigma).B, 2.0 * sigma.B, atol=1e-12)
    htilde = formas_service.htilde_de_coordenadas(estandar_float, np.linspace(-1.0, 1.0, 9))
    rombo = formas_service.diamond(estandar_float, htilde)
    assert np.max(np.abs(formas_service.j2_apply(estandar_float, rombo).B)) < 1e-12


def test_canal_nueve_de_sigma_es_nulo(formas_service, estandar_float):
    T = formas_service.canal_nueve_tensor(estandar_float, ETwoForm(estandar_float.sigma))
    assert np.max(np.abs(T)) < 1e-12


def test_gram_el1_avisa_con_metrica_no_plana(sigma_service, formas_service, estandar, caplog):
    triple = sigma_service.gl4_pullback(estandar, np.diag([1.0, 2.0, 0.5, 1.5]))
    with caplog.at_level(logging.WARNING, logger="services.formas_service"):
        caplog.clear()
        formas_service.gram_EL1(1, 0, triple=estandar)
        assert not caplog.records
        G = formas_service.gram_EL1(1, 0, triple=triple)
    assert any("g ≠ 𝟙" in r.getMessage() for r in caplog.records)
    assert np.allclose(G.como_float(), np.eye(12))
