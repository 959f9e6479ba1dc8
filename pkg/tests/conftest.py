import numpy as np
import pytest
from hypothesis import strategies as st

from services.coeficientes_service import CoeficientesService
from services.formas_service import FormasService
from services.operadores_service import OperadoresService
from services.reticulo_service import ReticuloService
from services.sigma_service import SigmaService
from services.simbolo_service import SimboloService
from services.twisted_service import TwistedService
from services.verificacion_service import VerificacionService


@pytest.fixture(scope="session")
def sigma_service():
    return SigmaService()


@pytest.fixture(scope="session")
def formas_service(sigma_service):
    return FormasService(sigma_service)


@pytest.fixture(scope="session")
def operadores_service(formas_service):
    return OperadoresService(formas_service)


@pytest.fixture(scope="session")
def simbolo_service(operadores_service):
    return SimboloService(operadores_service)


@pytest.fixture(scope="session")
def coeficientes_service(operadores_service):
    return CoeficientesService(operadores_service)


@pytest.fixture(scope="session")
def reticulo_service():
    return ReticuloService(4)


@pytest.fixture(scope="session")
def reticulo_ocho():
    return ReticuloService(8)


@pytest.fixture(scope="session")
def reticulo_dieciseis():
    return ReticuloService(16)


@pytest.fixture(scope="session")
def twisted_service(operadores_service, simbolo_service):
    return TwistedService(operadores_service, simbolo_service)


@pytest.fixture(scope="session")
def verificacion_service(sigma_service, formas_service, operadores_service, simbolo_service,
                         coeficientes_service, reticulo_service, twisted_service):
    return VerificacionService(
        sigma_service, formas_service, operadores_service, simbolo_service,
        coeficientes_service, reticulo_service, twisted_service,
        samples=50, pullbacks=3, trials=3,
    )


@pytest.fixture(scope="session")
def estandar(sigma_service):
    """Tripleta estándar exacta."""
    return sigma_service.standard_triple()


@pytest.fixture(scope="session")
def estandar_float(estandar):
    return estandar.a_float()


def matrices_gl4(amplitud=0.3):
    """Matrices I + A con det > 0.1, como las de SigmaService.matriz_aleatoria."""
    return (
        st.lists(st.floats(-amplitud, amplitud, allow_nan=False), min_size=16, max_size=16)
        .map(lambda v: np.eye(4) + np.array(v).reshape(4, 4))
        .filter(lambda M: np.linalg.det(M) > 0.1)
    )


def covectores():
    """Covectores con norma entre 0.5 y 3."""
    return (
        st.lists(st.floats(-3.0, 3.0, allow_nan=False), min_size=4, max_size=4)
        .map(np.array)
        .filter(lambda k: 0.5 <= np.linalg.norm(k) <= 3.0)
    )


def racionales(minimo=-6, maximo=6, denominador=5):
    return st.fractions(min_value=minimo, max_value=maximo, max_denominator=denominador)
