import numpy as np
import pytest

from models.coeficientes import InnerProductSet
from models.formas import EOneForm
from models.raiz_dos import es_cero_exacto, identidad


def test_identidades_de_phi(twisted_service, estandar):
    residuos = twisted_service.phi_identities(estandar)
    assert residuos == {"phi_j1": 0.0, "phi_star_phi": 0.0, "adjuncion": 0.0, "canal_cuatro": 0.0}


def test_identidades_de_phi_en_pullback(sigma_service, twisted_service, estandar):
    triple = sigma_service.gl4_pullback(estandar, np.diag([1.0, 2.0, 0.5, 1.5]))
    residuos = twisted_service.phi_identities(triple)
    for clave in ("phi_j1", "phi_star_phi", "canal_cuatro"):
        assert residuos[clave] < 1e-10, clave


def test_reescritura_exacta(twisted_service, estandar):
    assert all(valor == 0.0 for valor in twisted_service.rewriting_residuals(estandar).values())


def test_adjunto_explicito(twisted_service, estandar):
    assert twisted_service.adjoint_residual(estandar) == 0.0


def test_cuadrado_es_laplaciano(twisted_service, estandar):
    assert twisted_service.delta_multiple_residual(estandar) == 0.0


def test_mezcla_es_involucion(twisted_service):
    M = twisted_service.mixing_matrix(True)
    assert es_cero_exacto(M.dot(M) - identidad(16, True))


def test_cuadrado_del_simbolo(twisted_service, simbolo_service, estandar):
    resultado = twisted_service.symbol_square_check(estandar, simbolo_service.direcciones(30, 3))
    assert max(resultado.values()) < 1e-12


def test_congruencias_de_gram(twisted_service, estandar):
    congruencias = twisted_service.gram_congruence(estandar)
    for clave in ("inner_omega", "t1_producto", "t1_cruzado", "t1_inversa", "t2_inversa"):
        assert congruencias[clave] == 0.0, clave
    assert (congruencias["positivos"], congruencias["negativos"]) == (12, 4)


def test_inversas_de_T1_T2(twisted_service, estandar):
    T1, T2 = twisted_service.build_T1_T2(estandar)
    assert T1.residuo_inversa() == 0.0
    assert T2.residuo_inversa() == 0.0
    assert T1.exacta and T2.exacta


def test_separacion_en_D4_D12(twisted_service, simbolo_service, estandar):
    resultado = twisted_service.split_check(estandar, simbolo_service.direcciones(20, 1))
    for clave in ("fuera_diagonal", "d4", "d12", "d12_diamante"):
        assert resultado[clave] == 0.0, clave
    assert resultado["simbolo_d4"] < 1e-12
    assert resultado["simbolo_d12"] < 1e-12


def test_identidades_de_accion(twisted_service, reticulo_service, estandar):
    acciones = twisted_service.action_identities(estandar, reticulo_service, seed=2)
    assert acciones["residuo_primer_orden"] < 1e-10
    assert acciones["residuo_separacion"] < 1e-10
    assert acciones["residuo_variacion"] < 1e-10
    assert acciones["separacion"] == pytest.approx(2.0 * acciones["segundo_orden"])


def test_operador_ingenuo_euclideo(twisted_service, simbolo_service, estandar):
    M, desviacion = twisted_service.naive_square(estandar, InnerProductSet.euclideo(), simbolo_service.direcciones(10, 0))
    assert desviacion < 1e-12
    assert np.allclose(M, np.diag([1.0] * 13 + [2.0] * 3), atol=1e-12)


def test_operador_ingenuo_plebanski_depende_de_k(twisted_service, simbolo_service, estandar):
    _, desviacion = twisted_service.naive_square(estandar, InnerProductSet.plebanski(), simbolo_service.direcciones(10, 0))
    assert desviacion > 1e-6


def test_signos_base_validos(twisted_service, simbolo_service, estandar):
    sondeo = twisted_service.sign_probe(estandar, simbolo_service.direcciones(10, 0))
    assert len(sondeo["elecciones"]) == 8
    assert [1, 1, 1] in sondeo["validas"]


def test_phi_y_phi_estrella_adjuntos(twisted_service, formas_service, estandar_float):
    rng = np.random.default_rng(4)
    a = EOneForm(rng.standard_normal((3, 4)))
    xi = rng.standard_normal(4)
    gram = formas_service.gram_EL1(0.0, 1.0, triple=estandar_float).como_float()
    izquierda = xi.dot(twisted_service.phi_apply(estandar_float, a))
    derecha = a.vector().dot(gram).dot(twisted_service.phi_star_apply(estandar_float, xi).vector())
    assert izquierda == pytest.approx(derecha, abs=1e-12)
