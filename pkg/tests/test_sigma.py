import numpy as np
import pytest
from hypothesis import given, settings

from conftest import matrices_gl4
from models.errores import NotPerfect, OrientationError, SingularMatrix
from models.triple import PerfectTriple

IDENTIDADES = ("perfeccion", "algebra", "sigma_sigma", "sse_1", "sse_2", "traza", "metrica")


def test_tripleta_estandar_es_perfecta(sigma_service, estandar):
    gram = sigma_service.gram_wedge(estandar.sigma)
    assert all(gram[i, j] == (2 if i == j else 0) for i in range(3) for j in range(3))
    assert estandar.exacto


def test_identidades_en_la_tripleta_estandar(sigma_service, estandar):
    residuos = sigma_service.identity_residuals(estandar)
    for clave in IDENTIDADES:
        assert residuos[clave] < 1e-12, clave


def test_constante_de_la_metrica(sigma_service, estandar):
    assert sigma_service.identity_residuals(estandar)["constante_metrica"] == pytest.approx(-2.0)


def test_metrica_recuperada(sigma_service, estandar):
    metrica, volumen = sigma_service.metric_from_triple(estandar.sigma)
    assert np.allclose(metrica, np.eye(4))
    assert volumen == pytest.approx(1.0)


@settings(max_examples=20, deadline=None)
@given(matrices_gl4())
def test_identidades_en_pullbacks(sigma_service, estandar, M):
    triple = sigma_service.gl4_pullback(estandar, M)
    residuos = sigma_service.identity_residuals(triple)
    escala = sigma_service.escala(triple)
    for clave in IDENTIDADES:
        assert residuos[clave] <= 1e-9 * escala, clave


@settings(max_examples=20, deadline=None)
@given(matrices_gl4())
def test_pullback_metrica_y_volumen(sigma_service, estandar, M):
    triple = sigma_service.gl4_pullback(estandar, M)
    assert np.allclose(triple.metric, M.dot(M.T), atol=1e-10)
    assert float(triple.volume) == pytest.approx(np.linalg.det(M))


def test_pullback_que_invierte_orientacion(sigma_service, estandar):
    with pytest.raises(OrientationError):
        sigma_service.gl4_pullback(estandar, np.diag([-1.0, 1.0, 1.0, 1.0]))


def test_pullback_singular(sigma_service, estandar):
    with pytest.raises(SingularMatrix):
        sigma_service.gl4_pullback(estandar, np.diag([1.0, 1.0, 1.0, 0.0]))


def test_tripleta_no_perfecta(sigma_service, estandar_float):
    sigma = estandar_float.sigma.copy()
    sigma[1] = 2.0 * sigma[1]
    with pytest.raises(NotPerfect):
        sigma_service.construir_triple(sigma)


def test_wedge(sigma_service, estandar):
    assert sigma_service.wedge(estandar.sigma[0], estandar.sigma[0]) == 2
    assert sigma_service.wedge(estandar.sigma[0], estandar.sigma[1]) == 0


def test_guardar_y_cargar(sigma_service, estandar, tmp_path):
    triple = sigma_service.gl4_pullback(estandar, np.diag([1.0, 2.0, 0.5, 1.5]))
    ruta = tmp_path / "triple.json"
    sigma_service.guardar_triple(triple, ruta)
    cargada = sigma_service.cargar_triple(ruta)
    assert np.allclose(cargada.sigma, triple.sigma)
    assert np.allclose(cargada.metric, triple.metric)


def test_to_dict(estandar):
    copia = PerfectTriple.from_dict(estandar.to_dict())
    assert np.allclose(copia.sigma, estandar.a_float().sigma)
    assert copia.volume == pytest.approx(1.0)
