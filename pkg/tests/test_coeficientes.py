from fractions import Fraction

import pytest
from hypothesis import assume, given, settings

from conftest import racionales
from models.coeficientes import AdjointCoefficientSet, CoefficientSet, InnerProductSet
from models.errores import DegenerateFamily, SingularPairing
from models.raiz_dos import INV_SQRT2, SQRT2, RaizDos


def test_residuos_plebanski(coeficientes_service):
    r1, r2 = coeficientes_service.composition_residuals(CoefficientSet.plebanski())
    assert all(r == 0 for r in r1 + r2)


def test_solve_b_plebanski(coeficientes_service):
    b = coeficientes_service.solve_b(1, Fraction(1, 4), Fraction(1, 2), 0, 1, Fraction(1, 4))
    assert tuple(b) == (2, 0, 0, -1)


def test_solve_b_c1_igual_c2(coeficientes_service):
    with pytest.raises(DegenerateFamily):
        coeficientes_service.solve_b(1, Fraction(1, 4), Fraction(1, 2), 1, 1, Fraction(1, 4))


def test_solve_b_a2_nulo(coeficientes_service):
    with pytest.raises(DegenerateFamily):
        coeficientes_service.solve_b(1, 0, Fraction(1, 2), 0, 1, Fraction(1, 4))


@settings(max_examples=60, deadline=None)
@given(racionales(), racionales(), racionales(), racionales(), racionales(), racionales())
def test_solve_b_cierra_el_complejo(coeficientes_service, a1, a2, a3, c1, c2, b1):
    assume(a2 != 0 and a3 != 0 and c1 != c2)
    b2, b3, b4, b5 = coeficientes_service.solve_b(a1, a2, a3, c1, c2, b1)
    c = CoefficientSet(a1=a1, a2=a2, a3=a3, b1=b1, b2=b2, b3=b3, b4=b4, b5=b5, c1=c1, c2=c2)
    r1, r2 = coeficientes_service.composition_residuals(c)
    assert all(r == 0 for r in r1 + r2)


@settings(max_examples=5, deadline=None)
@given(racionales(1, 3), racionales(1, 3), racionales(1, 3), racionales(-2, 2), racionales(1, 3))
def test_solve_b_stencils_nulos(coeficientes_service, estandar, a2, a3, c2, c1, b1):
    assume(c1 != c2)
    b2, b3, b4, b5 = coeficientes_service.solve_b(1, a2, a3, c1, c2, b1)
    c = CoefficientSet(a1=1, a2=a2, a3=a3, b1=b1, b2=b2, b3=b3, b4=b4, b5=b5, c1=c1, c2=c2)
    assert coeficientes_service.stencil_composition_norms(estandar, c) == (0.0, 0.0)


def test_adjuntos_plebanski(coeficientes_service):
    primas = coeficientes_service.adjoint_from_inner(CoefficientSet.plebanski(), InnerProductSet.plebanski())
    assert primas == AdjointCoefficientSet.plebanski()


@pytest.mark.parametrize("ip", [InnerProductSet.plebanski(), InnerProductSet.euclideo()])
def test_oraculo_de_adjuntos(coeficientes_service, estandar, ip):
    normas = coeficientes_service.adjoint_oracle(estandar, CoefficientSet.plebanski(), ip)
    assert max(normas.values()) == 0.0


def test_oraculo_con_familia_general(coeficientes_service, estandar):
    c = CoefficientSet(a1=2, a2=Fraction(1, 3), a3=-1, b1=1, b2=Fraction(1, 2), b3=3, b4=-2, b5=1, c1=1, c2=-1)
    ip = InnerProductSet(beta1=1, beta2=2, beta3=Fraction(1, 2), gamma1=2, gamma2=Fraction(1, 3))
    normas = coeficientes_service.adjoint_oracle(estandar, c, ip)
    assert max(normas.values()) == 0.0


def test_adjuntos_beta_nulo(coeficientes_service):
    ip = InnerProductSet(beta1=0, beta2=8, beta3=1, gamma1=1, gamma2=0)
    with pytest.raises(DegenerateFamily):
        coeficientes_service.adjoint_from_inner(CoefficientSet.plebanski(), ip)


def test_adjuntos_pairing_singular(coeficientes_service):
    ip = InnerProductSet(beta1=1, beta2=1, beta3=1, gamma1=2, gamma2=1)
    with pytest.raises(SingularPairing):
        coeficientes_service.adjoint_from_inner(CoefficientSet.plebanski(), ip)


def test_condiciones_de_laplaciano_euclideas(coeficientes_service):
    pleb = CoefficientSet.plebanski()
    primas = coeficientes_service.adjoint_from_inner(pleb, InnerProductSet.euclideo())
    residuos, multiplicadores = coeficientes_service.delta_conditions(pleb, primas)
    assert all(r == 0 for r in residuos)
    assert list(multiplicadores) == [-1, -1, -1, -2]


def test_multiplicador_literal_difiere(coeficientes_service):
    pleb = CoefficientSet.plebanski()
    primas = coeficientes_service.adjoint_from_inner(pleb, InnerProductSet.euclideo())
    assert coeficientes_service.multiplicador_h_literal(pleb, primas) == -2


def test_condiciones_fallan_con_productos_plebanski(coeficientes_service):
    pleb = CoefficientSet.plebanski()
    residuos, _ = coeficientes_service.delta_conditions(pleb, AdjointCoefficientSet.plebanski())
    assert residuos[0] == Fraction(-3, 4)


@pytest.mark.parametrize("gammas, esperado", [
    ((1, 0), (Fraction(1, 4), 8, 1)),
    ((7, 1), (Fraction(5, 12), Fraction(56, 3), 3)),
])
def test_solve_inner_products(coeficientes_service, gammas, esperado):
    ip = coeficientes_service.solve_inner_products(CoefficientSet.plebanski(), *gammas)
    assert ip.beta == esperado
    assert ip.gamma == gammas


@pytest.mark.parametrize("gammas", [(0, 1), (2, 1), (1, 1)])
def test_solve_inner_products_degenerados(coeficientes_service, gammas):
    with pytest.raises(DegenerateFamily):
        coeficientes_service.solve_inner_products(CoefficientSet.plebanski(), *gammas)


def test_condicion_f_torcida(coeficientes_service):
    cp = AdjointCoefficientSet(a3p=-SQRT2, fp=-1)
    c = CoefficientSet.plebanski().reemplazar(c1=SQRT2, c2=INV_SQRT2, f=-1)
    assert coeficientes_service.f_condition(cp, c) == 0


def test_condicion_f_con_signo_cambiado(coeficientes_service):
    cp = AdjointCoefficientSet(a3p=-SQRT2, fp=1)
    c = CoefficientSet.plebanski().reemplazar(c1=SQRT2, c2=INV_SQRT2, f=1)
    assert coeficientes_service.f_condition(cp, c) == RaizDos(0, -2)


def test_coeficientes_to_dict(coeficientes_service):
    c = CoefficientSet.plebanski().reemplazar(c1=SQRT2)
    assert CoefficientSet.from_dict(c.to_dict()) == c
