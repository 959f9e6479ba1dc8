import logging
from typing import Dict, List, Tuple

import numpy as np

from models.coeficientes import AdjointCoefficientSet, CoefficientSet, InnerProductSet
from models.errores import DegenerateFamily, SingularPairing
from models.raiz_dos import RaizDos, exacto_o_float
from models.triple import PerfectTriple
from services.operadores_service import OperadoresService

LOGGER = logging.getLogger(__name__)


def _es_cero(valor, tol: float = 1e-12) -> bool:
    if isinstance(valor, float):
        return abs(valor) <= tol
    return valor == 0


def _raiz(valor):
    """Raíz positiva exacta en Q(√2) o float; None si no existe."""
    if isinstance(valor, float):
        return float(np.sqrt(valor)) if valor > 0 else None
    raiz = RaizDos.desde(valor).sqrt()
    if raiz is None or raiz == 0:
        return None
    return raiz


class CoeficientesService:
    """
    Familia general de operadores: restricciones de composición, adjuntos
    a partir de productos internos y condiciones para que D*D sea un
    múltiplo del laplaciano.

    Todas las cuentas se hacen con los valores tal como vienen en los
    conjuntos de coeficientes: exactas con RaizDos, en float si alguno lo es.
    """

    def __init__(self, operadores: OperadoresService):
        """
        Inicializa el servicio.

        Args:
            operadores (OperadoresService): Servicio de operadores, usado como oráculo de stencils.
        """
        self.operadores = operadores

    # ---------- composiciones ----------

    def composition_residuals(self, c: CoefficientSet) -> Tuple[List, List]:
        """
        Residuos de d₂d₁ = 0 y d₃d₂ = 0 en los coeficientes.

        Args:
            c (CoefficientSet): Coeficientes de la familia.

        Returns:
            Tuple[List, List]: (r1 con 3 entradas para d₂d₁, r2 con 2 entradas para d₃d₂).
        """
        a1, a2, a3 = c.a
        b1, b2, b3, b4, b5 = c.b
        c1, c2 = c.c
        r1 = [
            b1 * a1 - b3 * a2 + (b4 + b5) * a3 / 2,
            b2 * a2 - b3 * a2 + b5 * a3,
            b3 * a2 + b4 * a3,
        ]
        r2 = [
            c1 * b2 + 2 * c2 * b3,
            c1 * b4 + c1 * b5 + 2 * c2 * b4,
        ]
        return r1, r2

    def stencil_composition_norms(self, triple: PerfectTriple, c: CoefficientSet) -> Tuple[float, float]:
        """Normas de los stencils compuestos d₂∘d₁ y d₃∘d₂ construidos con los mismos coeficientes."""
        familia = self.operadores.build_family(triple, c)
        d21 = self.operadores.compose(familia["d2"], familia["d1"])
        d32 = self.operadores.compose(familia["d3"], familia["d2"])
        return d21.norma(), d32.norma()

    def solve_b(self, a1, a2, a3, c1, c2, b1) -> Tuple:
        """
        Resuelve las restricciones de composición para b₂..b₅.

        Returns:
            Tuple: (b₂, b₃, b₄, b₅).

        Raises:
            DegenerateFamily: Si a₂ = 0, a₃ = 0 o c₁ = c₂.
        """
        a1, a2, a3, c1, c2, b1 = (exacto_o_float(v) for v in (a1, a2, a3, c1, c2, b1))
        if _es_cero(a2) or _es_cero(a3):
            raise DegenerateFamily(f"a₂ y a₃ deben ser no nulos (a₂={a2}, a₃={a3})")
        if _es_cero(c1 - c2):
            raise DegenerateFamily(f"c₁ = c₂ = {c1} deja la familia singular")
        base = a1 * b1 / (c1 - c2)
        b2 = -2 * base * c2 / a2
        b3 = base * c1 / a2
        b4 = -base * c1 / a3
        b5 = base * (c1 + 2 * c2) / a3
        LOGGER.info("b resuelto: b₂=%s, b₃=%s, b₄=%s, b₅=%s", b2, b3, b4, b5)
        return b2, b3, b4, b5

    # ---------- adjuntos ----------

    def adjoint_from_inner(self, c: CoefficientSet, ip: InnerProductSet) -> AdjointCoefficientSet:
        """
        Coeficientes a′, b′, c′ de los adjuntos para unos productos internos.

        Args:
            c (CoefficientSet): Coeficientes de la familia.
            ip (InnerProductSet): Pesos β y γ.

        Returns:
            AdjointCoefficientSet: Primas (f′ se deja en 0; lo fija la construcción torcida).

        Raises:
            DegenerateFamily: Si algún β es nulo.
            SingularPairing: Si el sistema 2×2 de c′ es singular.
        """
        a1, a2, a3 = c.a
        b1, b2, b3, b4, b5 = c.b
        c1, c2 = c.c
        beta1, beta2, beta3 = ip.beta
        g1, g2 = ip.gamma
        if any(_es_cero(b) for b in ip.beta):
            raise DegenerateFamily(f"Los pesos β deben ser no nulos: {ip.beta}")
        determinante = g1 * (g1 - g2) - 2 * g2 * g2
        if _es_cero(determinante):
            raise SingularPairing(f"Sistema de c′ singular para γ = ({g1}, {g2})")
        return AdjointCoefficientSet(
            a1p=-beta1 * a1,
            a2p=beta2 * a2,
            a3p=-2 * beta3 * a3,
            b1p=b1 * (g1 - 2 * g2) / beta1,
            b2p=-(g1 * b2 - 2 * g2 * b3) / beta2,
            b3p=-(g1 * b3 - g2 * b2 - g2 * b3) / beta2,
            b4p=(g1 * b4 - 2 * g2 * b4 - g2 * b5) / (2 * beta3),
            b5p=(g1 + g2) * b5 / (2 * beta3),
            c1p=(-c1 * (g1 - g2) - 2 * g2 * c2) / determinante,
            c2p=(-g1 * c2 - g2 * c1) / determinante,
            fp=0,
        )

    def adjoint_oracle(self, triple: PerfectTriple, c: CoefficientSet, ip: InnerProductSet) -> Dict[str, float]:
        """
        Distancia entre los adjuntos por coeficientes y los adjuntos formales de los stencils.

        Returns:
            dict: {"d1*", "d2*", "d3*"} con la norma de la diferencia de stencils.
        """
        primas = self.adjoint_from_inner(c, ip)
        familia = self.operadores.build_family(triple, c)
        adjuntos = self.operadores.build_adjoint_family(triple, primas)
        formas = self.operadores.formas
        exacto = triple.exacto
        G_tm = formas.gram_TM(exacto)
        G_s = formas.gram_S(*ip.beta)
        G_el1 = formas.gram_EL1(*ip.gamma, triple=triple)
        G_e = formas.gram_E(exacto)
        pares = {
            "d1*": (familia["d1"], G_tm, G_s),
            "d2*": (familia["d2"], G_s, G_el1),
            "d3*": (familia["d3"], G_el1, G_e),
        }
        resultado = {}
        for nombre, (operador, gram_in, gram_out) in pares.items():
            formal = self.operadores.formal_adjoint(operador, gram_in, gram_out)
            resultado[nombre] = (formal - adjuntos[nombre]).norma()
        return resultado

    # ---------- condiciones de laplaciano ----------

    def delta_conditions(self, c: CoefficientSet, cp: AdjointCoefficientSet) -> Tuple[List, List]:
        """
        Condiciones para que D*D actúe como laplaciano canal por canal.

        Returns:
            Tuple[List, List]: (cinco residuos, multiplicadores de h, hⁱ, h̃ y χ).
        """
        a1, a2, a3 = c.a
        b1, b2, b3, b4, b5 = c.b
        c1, c2 = c.c
        a1p, a2p, a3p = cp.a
        b1p, b2p, b3p, b4p, b5p = cp.b
        c1p, c2p = cp.c
        residuos = [
            -6 * b1 * b4p - 2 * b1 * b5p + 2 * a3 * a1p,
            2 * b2 * b4p + 4 * b3 * b4p + 2 * b2 * b5p + 2 * a3 * a2p,
            -6 * b4 * b4p - 2 * b5 * b4p - 2 * b4 * b5p + 2 * b5 * b5p + 2 * a3 * a3p,
            b4 * b2p + b5 * b2p + 2 * b4 * b3p + a2 * a3p,
            -3 * b4 * b1p - b5 * b1p + a1 * a3p,
        ]
        multiplicadores = [
            -3 * b1 * b1p + a1 * a1p,
            b2 * b2p + 2 * b3 * b3p - a2 * a2p,
            -2 * b5 * b5p,
            c1 * c1p + 2 * c2 * c2p,
        ]
        literal = self.multiplicador_h_literal(c, cp)
        if not _es_cero(literal - multiplicadores[0]):
            LOGGER.warning("Multiplicador de h literal %s difiere del implementado %s", literal, multiplicadores[0])
        return residuos, multiplicadores

    @staticmethod
    def multiplicador_h_literal(c: CoefficientSet, cp: AdjointCoefficientSet):
        """Lectura literal −3b₁b₁′ + b₅b₁′ + a₁a₁′ del multiplicador de h."""
        return -3 * c.b1 * cp.b1p + c.b5 * cp.b1p + c.a1 * cp.a1p

    def f_condition(self, cp: AdjointCoefficientSet, c: CoefficientSet):
        """f′a₃′ + c₁(b₄ + b₅) + 2c₂b₄: se anula si el bloque mixto de D̃*D̃ no tiene término Σ∂∂h̃."""
        return cp.fp * cp.a3p + c.c1 * (c.b4 + c.b5) + 2 * c.c2 * c.b4

    def solve_inner_products(self, c: CoefficientSet, gamma1=1, gamma2=0) -> InnerProductSet:
        """
        Pesos β que anulan las condiciones de laplaciano con los operadores fijos.

        Las tres primeras condiciones fijan β₁β₃, β₂β₃ y β₃²; las dos
        últimas se comprueban con la solución.

        Args:
            c (CoefficientSet): Coeficientes de los operadores.
            gamma1: Peso γ₁ de ⟨a,a⟩.
            gamma2: Peso γ₂ de ⟨a,a⟩.

        Returns:
            InnerProductSet: Pesos (β₁, β₂, β₃, γ₁, γ₂).

        Raises:
            DegenerateFamily: Si algún denominador se anula, β₃² no es un cuadrado
                positivo o las condiciones restantes no se cumplen.
        """
        g1, g2 = exacto_o_float(gamma1), exacto_o_float(gamma2)
        a1, a2, a3 = c.a
        b1, b2, b3, b4, b5 = c.b
        A1, A2, A3 = -a1, a2, -2 * a3
        B4 = (g1 * b4 - 2 * g2 * b4 - g2 * b5) / 2
        B5 = (g1 + g2) * b5 / 2
        if any(_es_cero(v) for v in (a3, A1, A2)):
            raise DegenerateFamily(f"Coeficientes a = {c.a} sin solución para los pesos")
        b1b3 = (6 * b1 * B4 + 2 * b1 * B5) / (2 * a3 * A1)
        b2b3 = -(2 * b2 * B4 + 4 * b3 * B4 + 2 * b2 * B5) / (2 * a3 * A2)
        cuadrado = -(-6 * b4 * B4 - 2 * b5 * B4 - 2 * b4 * B5 + 2 * b5 * B5) / (2 * a3 * A3)
        beta3 = _raiz(cuadrado)
        if beta3 is None:
            raise DegenerateFamily(f"β₃² = {cuadrado} no es un cuadrado positivo")
        beta1 = b1b3 / beta3
        beta2 = b2b3 / beta3
        if _es_cero(beta1) or _es_cero(beta2):
            raise DegenerateFamily(f"Pesos degenerados β₁={beta1}, β₂={beta2} para γ = ({g1}, {g2})")
        ip = InnerProductSet(beta1=beta1, beta2=beta2, beta3=beta3, gamma1=g1, gamma2=g2)
        residuos, _ = self.delta_conditions(c, self.adjoint_from_inner(c, ip))
        if not all(_es_cero(r) for r in residuos):
            raise DegenerateFamily(f"Las condiciones restantes no se anulan: {residuos}")
        LOGGER.info("Productos internos resueltos: %s", ip)
        return ip
