from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from models.raiz_dos import INV_SQRT2, SQRT2, RaizDos, a_float, es_cero_exacto, exacto, norma_max

racional = st.fractions(min_value=-20, max_value=20, max_denominator=12)
elemento = st.builds(RaizDos, racional, racional)


def test_sqrt2_al_cuadrado():
    assert SQRT2 * SQRT2 == 2
    assert SQRT2 * INV_SQRT2 == 1
    assert float(SQRT2) == pytest.approx(np.sqrt(2.0))


@given(elemento, elemento)
def test_producto_conmutativo(x, y):
    assert x * y == y * x


@given(elemento, elemento, elemento)
def test_distributiva(x, y, z):
    assert x * (y + z) == x * y + x * z


@given(elemento)
def test_inverso(x):
    if not x:
        with pytest.raises(ZeroDivisionError):
            x.inv()
    else:
        assert x * x.inv() == 1
        assert x / x == 1


@given(elemento)
def test_signo_coincide_con_float(x):
    if x:
        assert x.signo() == (1 if float(x) > 0 else -1)


@given(elemento)
def test_sqrt_de_un_cuadrado(x):
    raiz = (x * x).sqrt()
    assert raiz is not None
    assert raiz == abs(x)


def test_sqrt_sin_solucion():
    assert RaizDos(3).sqrt() is None
    assert RaizDos(-1).sqrt() is None
    assert RaizDos(2).sqrt() == SQRT2
    assert RaizDos(3, 2).sqrt() == RaizDos(1, 1)


@pytest.mark.parametrize("texto, esperado", [
    ("1/4", RaizDos(Fraction(1, 4))),
    ("-2", RaizDos(-2)),
    ("sqrt2", SQRT2),
    ("-sqrt2", -SQRT2),
    ("1/2*sqrt2", INV_SQRT2),
    ("1+sqrt2", RaizDos(1, 1)),
    ("3/2√2", RaizDos(0, Fraction(3, 2))),
])
def test_parse(texto, esperado):
    assert RaizDos.parse(texto) == esperado


def test_parse_invalido():
    with pytest.raises(ValueError):
        RaizDos.parse("uno")


def test_str():
    assert str(RaizDos(Fraction(1, 4))) == "1/4"
    assert str(RaizDos(-1)) == "-1"
    assert str(SQRT2) == "√2"
    assert str(RaizDos(1, -1)) == "1 - √2"


def test_mezcla_con_float_devuelve_float():
    assert isinstance(SQRT2 * 0.5, float)
    assert isinstance(0.5 + SQRT2, float)


def test_no_acepta_partes_float():
    with pytest.raises(TypeError):
        RaizDos(0.5)


@given(elemento)
def test_to_dict_from_dict(x):
    assert RaizDos.from_dict(x.to_dict()) == x


def test_arreglos_de_objetos():
    matriz = np.array([[SQRT2, 0], [Fraction(1, 2), -1]], dtype=object)
    assert norma_max(matriz) == pytest.approx(np.sqrt(2.0))
    assert a_float(matriz).dtype == float
    assert not es_cero_exacto(matriz)
    assert es_cero_exacto(matriz - matriz)


def test_exacto_rechaza_float():
    with pytest.raises(TypeError):
        exacto(0.25)
    assert exacto("1/4") == Fraction(1, 4)
