import logging
from fractions import Fraction
from itertools import product
from typing import Dict, Optional, Tuple

import numpy as np

from models.bloques import FiberTransform, TwistedBlockOperator, bloque_nulo
from models.campo_reticulo import LatticeField
from models.coeficientes import AdjointCoefficientSet, CoefficientSet, InnerProductSet
from models.errores import SplitFailure
from models.formas import EOneForm, GramForm, suma_directa
from models.raiz_dos import INV_SQRT2, SQRT2, a_float, ceros, es_cero_exacto, identidad, norma_max, segun_modo
from models.stencil import OperatorStencil, bloques
from models.triple import PerfectTriple
from services.operadores_service import OperadoresService
from services.simbolo_service import SimboloService

LOGGER = logging.getLogger(__name__)

# dominio S⊕E: h, hⁱ, h̃ (9 coordenadas), χⁱ
_H, _HV, _HT, _CHI = slice(0, 1), slice(1, 4), slice(4, 13), slice(13, 16)
# coordenadas de T₁: h, h₊ⁱ, h₋ⁱ, h̃
_HMAS, _HMENOS, _HT1 = slice(1, 4), slice(4, 7), slice(7, 16)


def _residuo(arreglo) -> float:
    """0.0 si el arreglo es exactamente nulo; si no, su máximo absoluto."""
    datos = np.asarray(arreglo)
    if datos.dtype == object and es_cero_exacto(datos):
        return 0.0
    return norma_max(datos)


class TwistedService:
    """
    Operador torcido D̃ = (d̃₁*σ + d̃₄χ, d₂σ + d̃₃*χ), los mapas Φ y Φ*,
    los cambios de variables T₁, T₂ y la separación de T₂D̃T₁ en D₄ ⊕ D₁₂.
    """

    def __init__(self, operadores: OperadoresService, simbolo: SimboloService):
        """
        Inicializa el servicio.

        Args:
            operadores (OperadoresService): Servicio de operadores.
            simbolo (SimboloService): Servicio de símbolos, para los cuadrados de D̃.
        """
        self.operadores = operadores
        self.simbolo = simbolo
        self.formas = operadores.formas

    @staticmethod
    def _constante(valor, triple: PerfectTriple):
        return segun_modo(valor, triple.exacto)

    # ---------- Φ y Φ* ----------

    def phi_matrix(self, triple: PerfectTriple) -> np.ndarray:
        """Φ(a)_μ = Σⁱ_μ{}^αaⁱ_α como matriz 4×12."""
        return np.transpose(triple.sigma_mixto(), (1, 0, 2)).reshape(4, 12)

    def phi_star_matrix(self, triple: PerfectTriple) -> np.ndarray:
        """Φ*(ξ)ⁱ_μ = (1/2)Σⁱ_μ{}^αξ_α como matriz 12×4."""
        return triple.sigma_mixto().reshape(12, 4) * self._constante(Fraction(1, 2), triple)

    def phi_apply(self, triple: PerfectTriple, a: EOneForm) -> np.ndarray:
        return np.einsum("ima,ia->m", triple.sigma_mixto(), a.a)

    def phi_star_apply(self, triple: PerfectTriple, xi) -> EOneForm:
        return EOneForm(np.einsum("ima,a->im", triple.sigma_mixto(), np.asarray(xi)) * self._constante(Fraction(1, 2), triple))

    def phi_identities(self, triple: PerfectTriple) -> Dict[str, float]:
        """
        Residuos de ΦJ₁ = 2Φ, Φ*Φ = −(1/2)(1 + J₁), la adjunción ⟨ξ, Φa⟩ = ⟨a, Φ*ξ⟩
        y Φ(a) = 3ξ para aⁱ_μ = ξ^αΣⁱ_{αμ}.

        La adjunción usa gram_EL1, que es euclídea en μ: con g ≠ 𝟙 ese residuo
        no se anula y solo los otros tres son covariantes.
        """
        exacto = triple.exacto
        Phi = self.phi_matrix(triple)
        Phi_s = self.phi_star_matrix(triple)
        J = self.formas.j1_matrix(triple)
        I = identidad(12, exacto)
        medio = self._constante(Fraction(1, 2), triple)
        gram = self.formas.gram_EL1(0, 1, triple).matrix
        # columna β: aⁱ_μ = g^{αβ}Σⁱ_{αμ}
        canal = np.einsum("ab,iam->imb", triple.inv_metric, triple.sigma).reshape(12, 4)
        return {
            "phi_j1": _residuo(Phi.dot(J) - 2 * Phi),
            "phi_star_phi": _residuo(Phi_s.dot(Phi) + (I + J) * medio),
            "adjuncion": _residuo(Phi.T - gram.dot(Phi_s)),
            "canal_cuatro": _residuo(Phi.dot(canal) - 3 * identidad(4, exacto)),
        }

    # ---------- piezas de D̃ ----------

    def build_tilde_d1(self, triple: PerfectTriple) -> Tuple[OperatorStencil, OperatorStencil]:
        """
        d̃₁ξ = √2(−∂^μξ_μ, 0, ∂_⟨μξ_ν⟩) y d̃₁*σ = √2((1/4)∂_μh − ∂^νh̃_{μν}).

        Returns:
            Tuple: (d̃₁, d̃₁*).
        """
        c = CoefficientSet(a1=-SQRT2, a2=0, a3=INV_SQRT2)
        cp = AdjointCoefficientSet(a1p=SQRT2 * Fraction(1, 4), a2p=0, a3p=-SQRT2)
        d1 = self.operadores.build_family(triple, c)["d1"]
        d1_adj = self.operadores.build_adjoint_family(triple, cp)["d1*"]
        d1.nombre, d1_adj.nombre = "d̃1", "d̃1*"
        return d1, d1_adj

    def build_tilde_d3_d4(self, triple: PerfectTriple, c1=SQRT2, c2=INV_SQRT2, f=-1) -> Tuple[OperatorStencil, ...]:
        """
        d̃₃, d̃₃*, d̃₄ y d̃₄*.

        Los adjuntos usan ⟨a,a⟩ = εⁱʲᵏΣⁱ{}^{μν}aʲ_μaᵏ_ν: c₁′ = c₂ − c₁/2, c₂′ = c₁/2 y f′ = f.

        Returns:
            Tuple: (d̃₃, d̃₃*, d̃₄, d̃₄*).
        """
        c = CoefficientSet(c1=c1, c2=c2, f=f)
        cp = AdjointCoefficientSet(c1p=c.c2 - c.c1 * Fraction(1, 2), c2p=c.c1 * Fraction(1, 2), fp=f)
        familia = self.operadores.build_family(triple, c)
        adjuntos = self.operadores.build_adjoint_family(triple, cp)
        d3, d3_adj, d4, d4_adj = familia["d3"], adjuntos["d3*"], familia["d4"], adjuntos["d4*"]
        d3.nombre, d3_adj.nombre, d4.nombre, d4_adj.nombre = "d̃3", "d̃3*", "d̃4", "d̃4*"
        return d3, d3_adj, d4, d4_adj

    def build_D_tilde(self, triple: PerfectTriple, c1=SQRT2, c2=INV_SQRT2, f=-1) -> TwistedBlockOperator:
        """D̃ = (d̃₁*, d̃₄; d₂, d̃₃*) de S⊕E en Λ¹⊕(E⊗Λ¹)."""
        _, d1_adj = self.build_tilde_d1(triple)
        _, d3_adj, d4, _ = self.build_tilde_d3_d4(triple, c1, c2, f)
        d2 = self.operadores.build_d2(triple)
        return TwistedBlockOperator(d1_adj, d4, d2, d3_adj, "D̃")

    def build_D_tilde_phi(self, triple: PerfectTriple) -> TwistedBlockOperator:
        """D̃ escrito con Φ: ((1/√2)(d₁* − Φd₂), −Φd₃*; d₂, (1/√2)J₁d₃*) con los adjuntos de Plebański."""
        inv = self._constante(INV_SQRT2, triple)
        Phi = self.phi_matrix(triple)
        J = self.formas.j1_matrix(triple)
        d2 = self.operadores.build_d2(triple)
        d1_adj, _, d3_adj = self.operadores.build_adjoints_pleb(triple)
        return TwistedBlockOperator(
            (d1_adj - d2.izquierda(Phi)).escalar(inv),
            d3_adj.izquierda(Phi).escalar(-1),
            d2,
            d3_adj.izquierda(J).escalar(inv),
            "D̃ (Φ)",
        )

    def grams_twisted(self, triple: PerfectTriple) -> Tuple[GramForm, GramForm]:
        """Formas de Gram del dominio S⊕E y de la imagen Λ¹⊕(E⊗Λ¹)."""
        grams = self.operadores.grams_pleb(triple)
        dominio = suma_directa(grams["S"], grams["E"], nombre="S⊕E")
        imagen = suma_directa(grams["TM"], grams["EL1"], nombre="TM⊕EL1")
        return dominio, imagen

    def rewriting_residuals(self, triple: PerfectTriple) -> Dict[str, float]:
        """
        Identidades entre stencils que definen las piezas torcidas.

        Returns:
            dict: Norma de cada diferencia (0.0 exacto con una tripleta exacta).
        """
        raiz = self._constante(SQRT2, triple)
        Phi = self.phi_matrix(triple)
        Phi_s = self.phi_star_matrix(triple)
        d1, d2 = self.operadores.build_d1(triple), self.operadores.build_d2(triple)
        d1_adj, d2_adj, _ = self.operadores.build_adjoints_pleb(triple)
        t1, t1_adj = self.build_tilde_d1(triple)
        t3, t3_adj, t4, t4_adj = self.build_tilde_d3_d4(triple)
        cuadrado = self.operadores.compose(t4_adj, t4) + self.operadores.compose(t3, t3_adj)
        literal = self.build_D_tilde_phi(triple).completo()
        resultado = {
            "d1_estrella": _residuo((d1_adj - d2.izquierda(Phi) - t1_adj.escalar(raiz)).coef),
            "d1": _residuo((d1 - d2_adj.derecha(Phi_s) - t1.escalar(raiz)).coef),
            "d4_d3": _residuo(cuadrado.coef),
            "forma_phi": _residuo((literal - self.build_D_tilde(triple).completo()).coef),
        }
        LOGGER.info("Identidades de reescritura: %s", resultado)
        return resultado

    # ---------- adjunto y cuadrado de D̃ ----------

    def explicit_adjoint(self, triple: PerfectTriple) -> OperatorStencil:
        """D̃* = (d̃₁, d₂*; d̃₄*, d̃₃) de Λ¹⊕(E⊗Λ¹) en S⊕E."""
        t1, _ = self.build_tilde_d1(triple)
        t3, _, _, t4_adj = self.build_tilde_d3_d4(triple)
        d2_adj = self.operadores.build_adjoints_pleb(triple)[1]
        return bloques([[t1, d2_adj], [t4_adj, t3]], "D̃*")

    def adjoint_residual(self, triple: PerfectTriple) -> float:
        """Diferencia entre D̃* explícito y el adjunto formal de D̃."""
        dominio, imagen = self.grams_twisted(triple)
        formal = self.operadores.formal_adjoint(self.build_D_tilde(triple).completo(), dominio, imagen)
        return _residuo((formal - self.explicit_adjoint(triple)).coef)

    def mixing_matrix(self, exacto: bool = True) -> np.ndarray:
        """
        M con D̃*D̃ = −Δ∘M: −1 en h, I en h̃ y el bloque ((0, −1/(2√2)), (−2√2, 0)) en (hⁱ, χⁱ).
        """
        M = ceros((16, 16), exacto)
        M[0, 0] = -1
        for k in range(4, 13):
            M[k, k] = 1
        for i in range(3):
            M[1 + i, 13 + i] = segun_modo(-SQRT2 * Fraction(1, 4), exacto)
            M[13 + i, 1 + i] = segun_modo(-2 * SQRT2, exacto)
        return M

    def delta_multiple_residual(self, triple: PerfectTriple) -> float:
        """Norma de D̃*D̃ + Δ∘M como stencil de segundo orden."""
        dominio, imagen = self.grams_twisted(triple)
        D = self.build_D_tilde(triple).completo()
        adjunto = self.operadores.formal_adjoint(D, dominio, imagen)
        cuadrado = self.operadores.compose(adjunto, D, "D̃*D̃")
        total = cuadrado + self.operadores.laplaciano_stencil(triple, self.mixing_matrix(triple.exacto))
        return _residuo(total.coef)

    def symbol_square_check(self, triple: PerfectTriple, direcciones: np.ndarray) -> Dict[str, float]:
        """Ajuste de M en el símbolo de D̃*D̃, su desviación entre direcciones y M² − I."""
        t = triple.a_float()
        dominio, imagen = self.grams_twisted(t)
        M, desviacion = self.simbolo.delta_multiple(self.build_D_tilde(t).completo(), dominio, imagen, direcciones)
        return {
            "desviacion": desviacion,
            "diferencia_mezcla": float(np.max(np.abs(M - a_float(self.mixing_matrix(False))))),
            "m_cuadrado": float(np.max(np.abs(M.dot(M) - np.eye(16)))),
        }

    # ---------- T₁ y T₂ ----------

    def build_T1_T2(self, triple: PerfectTriple) -> Tuple[FiberTransform, FiberTransform]:
        """
        T₁: (h, h₊ⁱ, h₋ⁱ, h̃) → (h, hⁱ, h̃, χⁱ) y T₂: (ξ, a) → (ω, Ω).

        hⁱ = (h₊ⁱ + h₋ⁱ)/4, χⁱ = (h₊ⁱ − h₋ⁱ)/√2; ω = ξ + √2Φ(a), Ω = a − √2Φ*(ξ).
        """
        exacto = triple.exacto
        raiz = self._constante(SQRT2, triple)
        inv = self._constante(INV_SQRT2, triple)
        cuarto = self._constante(Fraction(1, 4), triple)
        medio = self._constante(Fraction(1, 2), triple)
        I3, I4, I9, I12 = (identidad(n, exacto) for n in (3, 4, 9, 12))

        T1 = ceros((16, 16), exacto)
        T1[0, 0] = 1
        T1[_HV, _HMAS] = I3 * cuarto
        T1[_HV, _HMENOS] = I3 * cuarto
        T1[_HT, _HT1] = I9
        T1[_CHI, _HMAS] = I3 * inv
        T1[_CHI, _HMENOS] = I3 * (-inv)
        T1_inv = ceros((16, 16), exacto)
        T1_inv[0, 0] = 1
        T1_inv[_HMAS, _HV] = I3 * 2
        T1_inv[_HMAS, _CHI] = I3 * inv
        T1_inv[_HMENOS, _HV] = I3 * 2
        T1_inv[_HMENOS, _CHI] = I3 * (-inv)
        T1_inv[_HT1, _HT] = I9

        Phi = self.phi_matrix(triple)
        Phi_s = self.phi_star_matrix(triple)
        J = self.formas.j1_matrix(triple)
        T2 = ceros((16, 16), exacto)
        T2[0:4, 0:4] = I4
        T2[0:4, 4:16] = Phi * raiz
        T2[4:16, 0:4] = Phi_s * (-raiz)
        T2[4:16, 4:16] = I12
        T2_inv = ceros((16, 16), exacto)
        T2_inv[0:4, 0:4] = I4 * (-medio)
        T2_inv[0:4, 4:16] = Phi * inv
        T2_inv[4:16, 0:4] = Phi_s * (-inv)
        T2_inv[4:16, 4:16] = (I12 - J) * medio
        return FiberTransform(T1, T1_inv, "T1"), FiberTransform(T2, T2_inv, "T2")

    def inversa_T2_literal(self, triple: PerfectTriple) -> np.ndarray:
        """Lectura literal ξ = (1/2)ω + (1/√2)Φ(Ω), a = (1/2)(Ω + J₁Ω) − (1/√2)Φ*(ω)."""
        exacto = triple.exacto
        inv = self._constante(INV_SQRT2, triple)
        medio = self._constante(Fraction(1, 2), triple)
        literal = ceros((16, 16), exacto)
        literal[0:4, 0:4] = identidad(4, exacto) * medio
        literal[0:4, 4:16] = self.phi_matrix(triple) * inv
        literal[4:16, 0:4] = self.phi_star_matrix(triple) * (-inv)
        literal[4:16, 4:16] = (identidad(12, exacto) + self.formas.j1_matrix(triple)) * medio
        return literal

    def gram_congruence(self, triple: PerfectTriple) -> Dict[str, float]:
        """
        Congruencias de las formas de Gram bajo T₁ y T₂.

        Returns:
            dict: inner_omega, t1_producto, t1_cruzado, t2_inversa, t1_inversa,
            t2_inversa_literal (informativo) y los índices de signatura.
        """
        exacto = triple.exacto
        T1, T2 = self.build_T1_T2(triple)
        dominio, imagen = self.grams_twisted(triple)
        medio = self._constante(Fraction(1, 2), triple)

        esperado_omega = identidad(16, exacto)
        for k in range(4):
            esperado_omega[k, k] = -medio
        omega = T2.inversa.T.dot(imagen.matrix).dot(T2.inversa) - esperado_omega

        esperado_t1 = identidad(16, exacto)
        esperado_t1[0, 0] = self._constante(Fraction(1, 4), triple)
        producto = T1.matrix.T.dot(dominio.matrix).dot(T1.matrix) - esperado_t1

        cruzado = ceros((16, 16), exacto)
        esperado_cruzado = ceros((16, 16), exacto)
        for i in range(3):
            cruzado[1 + i, 13 + i] = self._constante(2 * SQRT2, triple)
            cruzado[13 + i, 1 + i] = self._constante(2 * SQRT2, triple)
            esperado_cruzado[1 + i, 1 + i] = 1
            esperado_cruzado[4 + i, 4 + i] = -1
        diagonal = T1.matrix.T.dot(cruzado).dot(T1.matrix) - esperado_cruzado

        literal = self.inversa_T2_literal(triple)
        autovalores = imagen.autovalores()
        return {
            "inner_omega": _residuo(omega),
            "t1_producto": _residuo(producto),
            "t1_cruzado": _residuo(diagonal),
            "t1_inversa": T1.residuo_inversa(),
            "t2_inversa": T2.residuo_inversa(),
            "t2_inversa_literal": FiberTransform(T2.matrix, literal, "T2 literal").residuo_inversa(),
            "positivos": int(np.sum(autovalores > 0)),
            "negativos": int(np.sum(autovalores < 0)),
        }

    # ---------- D₄ ⊕ D₁₂ ----------

    def d4_stencil(self, triple: PerfectTriple) -> OperatorStencil:
        """D₄(h, h₊ⁱ) = −(1/√2)(∂_μh − 2Σⁱ_μ{}^α∂_αh₊ⁱ)."""
        Sm = triple.sigma_mixto()
        inv = self._constante(INV_SQRT2, triple)
        raiz = self._constante(SQRT2, triple)

        def d4(G):
            return G[:, 0] * (-inv) + np.einsum("ima,ai->m", Sm, G[:, 1:4]) * raiz

        return self.operadores.stencil_desde_funcion(triple, d4, 4, 4, "D4")

    def d12_stencil(self, triple: PerfectTriple, diamante: bool = False) -> OperatorStencil:
        """
        D₁₂(h₋ⁱ, h̃) = ∂_μh₋ⁱ + Σⁱ_μ{}^α∂^βh̃_{αβ} − Σⁱ{}^{αβ}∂_αh̃_{μβ}.

        Con `diamante` la parte de h̃ se escribe −∂^μ(h̃⋄Σⁱ)_{μν}.
        """
        Sm, Su, Gi = triple.sigma_mixto(), triple.sigma_arriba(), triple.inv_metric
        base = np.array(
            [self.formas.htilde_de_coordenadas(triple, fila) for fila in identidad(9, triple.exacto)],
            dtype=object if triple.exacto else float,
        )

        def d12(G):
            Dht = np.einsum("lk,krs->lrs", G[:, 3:12], base)
            if diamante:
                rombos = np.array([self.formas.diamond(triple, Dht[l]).B for l in range(4)])
                parte = -np.einsum("ml,limn->in", Gi, rombos)
            else:
                parte = np.einsum("ima,bl,lab->im", Sm, Gi, Dht) - np.einsum("iab,amb->im", Su, Dht)
            return G[:, 0:3].T + parte

        return self.operadores.stencil_desde_funcion(triple, d12, 12, 12, "D12 (⋄)" if diamante else "D12")

    def split_check(self, triple: PerfectTriple, direcciones: np.ndarray = None) -> Dict[str, float]:
        """
        Separa T₂D̃T₁ en D₄ ⊕ D₁₂ y comprueba los cuadrados de sus símbolos.

        Returns:
            dict: Normas de los bloques fuera de la diagonal, diferencias con D₄ y D₁₂,
            las dos formas de D₁₂ y las desviaciones de los cuadrados de símbolos.

        Raises:
            SplitFailure: Si algún bloque fuera de la diagonal no se anula.
        """
        T1, T2 = self.build_T1_T2(triple)
        total = self.build_D_tilde(triple).completo().izquierda(T2.matrix).derecha(T1.matrix, "T2·D̃·T1")
        superior = total.bloque(slice(0, 4), slice(4, 16))
        inferior = total.bloque(slice(4, 16), slice(0, 4))
        for nombre, bloque in (("omega_menos", superior), ("Omega_mas", inferior)):
            norma = _residuo(bloque.coef)
            if norma > 1e-12:
                raise SplitFailure(f"El bloque {nombre} de T2·D̃·T1 no se anula (norma {norma:.3e})", nombre, norma)
        d4, d12 = self.d4_stencil(triple), self.d12_stencil(triple)
        resultado = {
            "fuera_diagonal": 0.0,
            "d4": _residuo((total.bloque(slice(0, 4), slice(0, 4)) - d4).coef),
            "d12": _residuo((total.bloque(slice(4, 16), slice(4, 16)) - d12).coef),
            "d12_diamante": _residuo((self.d12_stencil(triple, diamante=True) - d12).coef),
        }
        if direcciones is None:
            direcciones = self.simbolo.direcciones(16, 0)
        d4f, d12f = d4.a_float(), d12.a_float()
        esperado4 = np.diag([0.5, 2.0, 2.0, 2.0])
        peor4, peor12 = 0.0, 0.0
        for k in direcciones:
            kk = float(np.dot(k, k))
            s4, s12 = d4f.simbolo(k), d12f.simbolo(k)
            peor4 = max(peor4, float(np.max(np.abs(s4.T.dot(s4) / kk - esperado4))))
            peor12 = max(peor12, float(np.max(np.abs(s12.T.dot(s12) / kk - np.eye(12)))))
        resultado["simbolo_d4"] = peor4
        resultado["simbolo_d12"] = peor12
        LOGGER.info("Separación de T2·D̃·T1: %s", resultado)
        return resultado

    # ---------- acciones ----------

    def first_order_action(self, triple: PerfectTriple, reticulo, xi: LatticeField, a: LatticeField,
                           campo: LatticeField) -> float:
        """
        ∫ ξ·(d̃₁*σ + d̃₄χ) + ⟨a, d₂σ + d̃₃*χ⟩ − (1/2)ξ² − (1/2)⟨a,a⟩
        con ⟨a,b⟩ = εⁱʲᵏΣⁱ{}^{μν}aʲ_μbᵏ_ν.

        Args:
            triple (PerfectTriple): Tripleta de fondo.
            reticulo (ReticuloService): Red donde viven los campos.
            xi (LatticeField): Campo de Λ¹ (fibra 4).
            a (LatticeField): Campo de E⊗Λ¹ (fibra 12).
            campo (LatticeField): Campo (σ, χ) de S⊕E (fibra 16).
        """
        t = triple.a_float()
        _, imagen = self.grams_twisted(t)
        G_tm = GramForm(imagen.como_float()[0:4, 0:4], True, "TM")
        G_el1 = GramForm(imagen.como_float()[4:16, 4:16], False, "EL1")
        v = reticulo.apply_stencil(self.build_D_tilde(t).completo(), campo)
        v1, v2 = v.componentes(0, 4), v.componentes(4, 16)
        return (
            reticulo.inner(xi, v1, G_tm) + reticulo.inner(a, v2, G_el1)
            - 0.5 * reticulo.inner(xi, xi, G_tm) - 0.5 * reticulo.inner(a, a, G_el1)
        )

    def second_order_action(self, reticulo, campo: LatticeField) -> float:
        """S = (1/2)∫ −(1/4)(∂h)² − 4√2∂hⁱ∂χⁱ + (∂h̃)² sobre la red plana."""
        D = reticulo.gradiente(campo)
        peso = (2.0 * np.pi / reticulo.n) ** 4
        densidad = (
            -0.25 * np.sum(D[:, 0] ** 2)
            - 4.0 * np.sqrt(2.0) * np.sum(D[:, 1:4] * D[:, 13:16])
            + np.sum(D[:, 4:13] ** 2)
        )
        return float(0.5 * peso * densidad)

    def split_action(self, triple: PerfectTriple, reticulo, campo: LatticeField) -> float:
        """∫(D₁₂)² − (1/2)∫(D₄)² en las variables (h, h₊, h₋, h̃) = T₁⁻¹(σ, χ)."""
        t = triple.a_float()
        T1, _ = self.build_T1_T2(t)
        w = LatticeField(np.einsum("oi,i...->o...", a_float(T1.inversa), campo.data), campo.band_limit)
        cuatro = reticulo.apply_stencil(self.d4_stencil(t), w.componentes(0, 4))
        doce = reticulo.apply_stencil(self.d12_stencil(t), w.componentes(4, 16))
        return reticulo.norma(doce) ** 2 - 0.5 * reticulo.norma(cuatro) ** 2

    def action_identities(self, triple: PerfectTriple, reticulo, seed: int = 0,
                          campo: Optional[LatticeField] = None) -> Dict[str, float]:
        """
        Compara la acción de primer orden en su punto estacionario, la acción de
        segundo orden S y ∫(D₁₂)² − (1/2)∫(D₄)² = 2S sobre un campo (aleatorio si no se da).

        Returns:
            dict: Valores de las tres acciones y residuos relativos (primer_orden,
            separacion, variacion).
        """
        t = triple.a_float()
        if campo is None:
            campo = reticulo.random_field(16, seed)
        v = reticulo.apply_stencil(self.build_D_tilde(t).completo(), campo)
        xi, a = v.componentes(0, 4), v.componentes(4, 16)
        primer_orden = self.first_order_action(t, reticulo, xi, a, campo)
        segundo_orden = self.second_order_action(reticulo, campo)
        separacion = self.split_action(t, reticulo, campo)

        dxi = reticulo.random_field(4, seed + 1)
        da = reticulo.random_field(12, seed + 2)
        _, imagen = self.grams_twisted(t)
        G_tm = GramForm(imagen.como_float()[0:4, 0:4], True, "TM")
        G_el1 = GramForm(imagen.como_float()[4:16, 4:16], False, "EL1")
        variada = self.first_order_action(t, reticulo, xi + dxi, a + da, campo)
        segunda_variacion = -0.5 * reticulo.inner(dxi, dxi, G_tm) - 0.5 * reticulo.inner(da, da, G_el1)

        gradiente = reticulo.gradiente(campo)
        escala = 0.5 * (2.0 * np.pi / reticulo.n) ** 4 * float(np.sum(gradiente ** 2))
        resultado = {
            "primer_orden": primer_orden,
            "segundo_orden": segundo_orden,
            "separacion": separacion,
            "residuo_primer_orden": abs(primer_orden - segundo_orden) / escala,
            "residuo_separacion": abs(separacion - 2.0 * segundo_orden) / escala,
            "residuo_variacion": abs(variada - primer_orden - segunda_variacion) / escala,
        }
        LOGGER.info("Identidades de acción (seed=%d): %s", seed, resultado)
        return resultado

    # ---------- operador ingenuo y signos ----------

    def build_D_naive(self, triple: PerfectTriple, ip: InnerProductSet) -> Tuple[TwistedBlockOperator, GramForm, GramForm]:
        """
        D = (d₁*, 0; d₂, d₃*) con los adjuntos formales de los productos `ip`.

        Returns:
            Tuple: (operador, Gram del dominio S⊕E, Gram de la imagen TM⊕EL1).
        """
        exacto = triple.exacto
        formas = self.formas
        G_tm, G_e = formas.gram_TM(exacto), formas.gram_E(exacto)
        G_s = formas.gram_S(*ip.beta) if exacto else formas.gram_S(*(float(b) for b in ip.beta))
        G_el1 = formas.gram_EL1(*ip.gamma, triple=triple)
        d1 = self.operadores.build_d1(triple)
        d2 = self.operadores.build_d2(triple)
        d3 = self.operadores.build_d3(triple)
        d1_adj = self.operadores.formal_adjoint(d1, G_tm, G_s, "d1*")
        d3_adj = self.operadores.formal_adjoint(d3, G_el1, G_e, "d3*")
        operador = TwistedBlockOperator(d1_adj, bloque_nulo(4, 3, d1_adj.exacto), d2, d3_adj, "D")
        return operador, suma_directa(G_s, G_e), suma_directa(G_tm, G_el1)

    def naive_square(self, triple: PerfectTriple, ip: InnerProductSet, direcciones: np.ndarray) -> Tuple[np.ndarray, float]:
        """M ajustada en el símbolo de D*D para el operador ingenuo y su desviación entre direcciones."""
        t = triple.a_float()
        operador, dominio, imagen = self.build_D_naive(t, ip)
        return self.simbolo.delta_multiple(operador.completo(), dominio, imagen, direcciones)

    def sign_probe(self, triple: PerfectTriple, direcciones: np.ndarray, tol: float = 1e-10) -> Dict:
        """
        Prueba las ocho elecciones (s₁√2, s₂/√2, −s₃) de (c₁, c₂, f).

        Returns:
            dict: "elecciones" con la desviación y M² − I de cada una y "validas"
            con los signos que mantienen D̃*D̃ = −Δ∘M con M² = I.
        """
        t = triple.a_float()
        dominio, imagen = self.grams_twisted(t)
        elecciones = []
        for s1, s2, s3 in product((1, -1), repeat=3):
            D = self.build_D_tilde(t, s1 * SQRT2, s2 * INV_SQRT2, -s3).completo()
            M, desviacion = self.simbolo.delta_multiple(D, dominio, imagen, direcciones)
            m2 = float(np.max(np.abs(M.dot(M) - np.eye(16))))
            elecciones.append({
                "signos": [s1, s2, s3],
                "desviacion": desviacion,
                "m_cuadrado": m2,
                "laplaciano": desviacion < tol and m2 < tol,
            })
        validas = [e["signos"] for e in elecciones if e["laplaciano"]]
        LOGGER.info("Signos que conservan D̃*D̃ = −ΔM: %s", validas)
        return {"elecciones": elecciones, "validas": validas}
