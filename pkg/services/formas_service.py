import logging
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from models.errores import NotInS
from models.formas import EOneForm, ETwoForm, GramForm, SElement
from models.raiz_dos import INV_SQRT2, a_float, ceros, exacto_o_float, identidad, norma_max, segun_modo
from models.triple import PerfectTriple
from services.sigma_service import SigmaService

LOGGER = logging.getLogger(__name__)

_PARES_SIMETRICOS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
_DIAGONALES = [(1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1)]

# dimensión de cada canal de Λ²⊗E y el autovalor de J₂ que le corresponde
CANALES = {"1": 2, "3": 1, "5": -1, "9": 0}


class FormasService:
    """
    Servicio de formas con valores en E.

    Construye J₁, J₂, la descomposición en irreducibles de Λ²⊗E, la
    parametrización (h, hⁱ, h̃) del espacio S y las formas de Gram.
    """

    def __init__(self, sigma_service: SigmaService):
        """
        Inicializa el servicio.

        Args:
            sigma_service (SigmaService): Servicio de tripletas.
        """
        self.sigma_service = sigma_service
        self._base_exacta = self._construir_base(True)
        self._base_float = a_float(self._base_exacta)

    # ---------- h̃ y tensores simétricos sin traza ----------

    @staticmethod
    def _construir_base(exacto: bool) -> np.ndarray:
        """Base ortonormal (Frobenius) de las matrices 4×4 simétricas sin traza."""
        base = ceros((9, 4, 4), exacto)
        fuera = INV_SQRT2 if exacto else float(INV_SQRT2)
        for k, (m, n) in enumerate(_PARES_SIMETRICOS):
            base[k, m, n] = fuera
            base[k, n, m] = fuera
        medio = segun_modo(Fraction(1, 2), exacto)
        for k, signos in enumerate(_DIAGONALES):
            for m, s in enumerate(signos):
                base[6 + k, m, m] = s * medio
        return base

    def base_htilde(self, exacto: bool = True) -> np.ndarray:
        return self._base_exacta if exacto else self._base_float

    def traza_g(self, triple: PerfectTriple, T: np.ndarray):
        """g^{μν}T_{μν}."""
        return np.einsum("mn,mn->", triple.inv_metric, T)

    def tracefree(self, triple: PerfectTriple, T: np.ndarray) -> np.ndarray:
        """Parte simétrica sin traza: (1/2)(T + Tᵀ) − (1/4)g·tr_g T."""
        exacto = triple.exacto
        simetrica = (T + T.T) * segun_modo(Fraction(1, 2), exacto)
        traza = self.traza_g(triple, simetrica)
        return simetrica - triple.metric * (traza * segun_modo(Fraction(1, 4), exacto))

    def htilde_de_coordenadas(self, triple: PerfectTriple, t: np.ndarray) -> np.ndarray:
        """Tensor h̃_{μν} (sin traza respecto de g) a partir de sus 9 coordenadas."""
        B = np.einsum("k,kmn->mn", t, self.base_htilde(triple.exacto))
        if triple.exacto:
            return B - triple.metric * (self.traza_g(triple, B) * Fraction(1, 4))
        return B - 0.25 * triple.metric * self.traza_g(triple, B)

    def coordenadas_de_htilde(self, triple: PerfectTriple, T: np.ndarray) -> np.ndarray:
        """
        Coordenadas de un tensor simétrico sin traza.

        Inversa exacta de htilde_de_coordenadas: se quita la parte
        proporcional a g que anula la traza euclídea y se proyecta sobre la base.
        """
        traza_T = np.trace(T)
        traza_g = np.trace(triple.metric)
        if triple.exacto:
            c = traza_T * Fraction(1) / traza_g
        else:
            c = float(traza_T) / float(traza_g)
        return np.einsum("kmn,mn->k", self.base_htilde(triple.exacto), T - c * triple.metric)

    # ---------- coordenadas de S ----------

    def s_vector(self, triple: PerfectTriple, s: SElement) -> np.ndarray:
        """Vector de 13 coordenadas (h, h¹, h², h³, t₁..t₉)."""
        v = ceros(13, triple.exacto)
        v[0] = s.h
        v[1:4] = s.hvec
        v[4:13] = self.coordenadas_de_htilde(triple, np.asarray(s.htilde))
        return v

    def s_desde_vector(self, triple: PerfectTriple, v: np.ndarray) -> SElement:
        v = np.asarray(v)
        return SElement(v[0], v[1:4].copy(), self.htilde_de_coordenadas(triple, v[4:13]))

    # ---------- J₁ ----------

    def j1_apply(self, triple: PerfectTriple, a: EOneForm) -> EOneForm:
        """J₁(a)ⁱ_μ = εⁱʲᵏ Σʲ_μ{}^α aᵏ_α."""
        return EOneForm(np.einsum("ijk,jma,ka->im", triple.eps3, triple.sigma_mixto(), a.a))

    def j1_matrix(self, triple: PerfectTriple) -> np.ndarray:
        """J₁ como matriz 12×12 en el índice 4·i + μ."""
        return np.einsum("ijk,jma->imka", triple.eps3, triple.sigma_mixto()).reshape(12, 12)

    def j1_projectors(self, triple: PerfectTriple) -> Tuple[np.ndarray, np.ndarray]:
        """
        Proyectores espectrales de J₁.

        Returns:
            Tuple[np.ndarray, np.ndarray]: P4 = (J₁ + I)/3 (autovalor 2) y P8 = (2I − J₁)/3 (autovalor −1).
        """
        exacto = triple.exacto
        J = self.j1_matrix(triple)
        I = identidad(12, exacto)
        tercio = segun_modo(Fraction(1, 3), exacto)
        return (J + I) * tercio, (2 * I - J) * tercio

    # ---------- J₂ y los irreducibles de Λ²⊗E ----------

    def j2_apply(self, triple: PerfectTriple, B: ETwoForm) -> ETwoForm:
        """J₂(B)ⁱ_{μν} = εⁱʲᵏ Σʲ_{[μ}{}^α Bᵏ_{|α|ν]}."""
        X = np.einsum("ijk,jma,kan->imn", triple.eps3, triple.sigma_mixto(), B.B)
        return ETwoForm((X - np.swapaxes(X, 1, 2)) * segun_modo(Fraction(1, 2), triple.exacto))

    def _matriz_en_pares(self, triple: PerfectTriple, funcion) -> np.ndarray:
        """Matriz 18×18 de un mapa lineal de 2-formas en las coordenadas μ<ν."""
        exacto = triple.exacto
        matriz = ceros((18, 18), exacto)
        for k in range(18):
            e = ceros(18, exacto)
            e[k] = 1
            matriz[:, k] = funcion(ETwoForm.desde_vector(e)).vector()
        return matriz

    def j2_matrix(self, triple: PerfectTriple) -> np.ndarray:
        return self._matriz_en_pares(triple, lambda B: self.j2_apply(triple, B))

    def decompose_two_form(self, triple: PerfectTriple, B: ETwoForm) -> Tuple[np.ndarray, np.ndarray, object, ETwoForm]:
        """
        Partes irreducibles de una 2-forma con valores en E.

        Con Mⁱʲ = Bⁱ_{αβ}Σʲ{}^{αβ}:
            s4 = M₍ᵢⱼ₎ − (1/3)δⁱʲ tr M,  s2ⁱ = εⁱʲᵏMʲᵏ,  s0 = tr M,  s9 = B − (1/4)MⁱʲΣʲ

        Args:
            triple (PerfectTriple): Tripleta de fondo.
            B (ETwoForm): 2-forma antisimétrica.

        Returns:
            Tuple: (s4, s2, s0, s9).
        """
        return self._canales(triple, B.B)

    def _canales(self, triple: PerfectTriple, B: np.ndarray):
        """Los cuatro canales; B puede llevar índices de sitio al final."""
        exacto = triple.exacto
        M = np.einsum("iab...,jab->ij...", B, triple.sigma_arriba())
        s0 = np.asarray(np.einsum("ii...->...", M))
        s2 = np.einsum("ijk,jk...->i...", triple.eps3, M)
        simetrica = (M + np.swapaxes(M, 0, 1)) * segun_modo(Fraction(1, 2), exacto)
        delta = identidad(3, exacto).reshape((3, 3) + (1,) * s0.ndim)
        s4 = simetrica - delta * s0 * segun_modo(Fraction(1, 3), exacto)
        s9 = B - np.einsum("ij...,jmn->imn...", M, triple.sigma) * segun_modo(Fraction(1, 4), exacto)
        if s9.ndim == 3:
            return s4, s2, s0[()], ETwoForm(s9)
        return s4, s2, s0, s9

    def canales_campo(self, triple: PerfectTriple, B: np.ndarray) -> Dict[str, np.ndarray]:
        """Canales de una 2-forma sobre la red, arreglo (3, 4, 4, sitios...)."""
        s4, s2, s0, s9 = self._canales(triple, B)
        return {"5": s4, "3": s2, "1": s0, "9": s9}

    def reconstruct_two_form(self, triple: PerfectTriple, s4: np.ndarray, s2: np.ndarray, s0, s9: ETwoForm) -> ETwoForm:
        """B = (1/4)(s4 + (s0/3)δ + (1/2)ε·s2)ⁱʲΣʲ + s9."""
        exacto = triple.exacto
        delta = identidad(3, exacto)
        N = (
            s4
            + delta * (s0 * segun_modo(Fraction(1, 3), exacto))
            + np.einsum("ijk,k->ij", triple.eps3, s2) * segun_modo(Fraction(1, 2), exacto)
        )
        B = np.einsum("ij,jmn->imn", N, triple.sigma) * segun_modo(Fraction(1, 4), exacto) + s9.B
        return ETwoForm(B)

    def channel_projectors(self, triple: PerfectTriple) -> Dict[str, np.ndarray]:
        """Proyectores 18×18 sobre los canales de dimensiones 1, 3, 5 y 9."""
        exacto = triple.exacto
        cero3 = ceros(3, exacto)
        cero33 = ceros((3, 3), exacto)
        cero9 = ETwoForm(ceros((3, 4, 4), exacto))

        def canal(nombre):
            def proyectar(B):
                s4, s2, s0, s9 = self.decompose_two_form(triple, B)
                return self.reconstruct_two_form(
                    triple,
                    s4 if nombre == "5" else cero33,
                    s2 if nombre == "3" else cero3,
                    s0 if nombre == "1" else 0,
                    s9 if nombre == "9" else cero9,
                )
            return proyectar

        return {nombre: self._matriz_en_pares(triple, canal(nombre)) for nombre in CANALES}

    def j2_projectors(self, triple: PerfectTriple) -> Dict[str, np.ndarray]:
        """Proyectores espectrales de J₂ por interpolación de Lagrange en {2, 1, −1, 0}."""
        exacto = triple.exacto
        J = self.j2_matrix(triple)
        I = identidad(18, exacto)
        proyectores = {}
        for nombre, lam in CANALES.items():
            P = I.copy()
            for otro in CANALES.values():
                if otro == lam:
                    continue
                P = P.dot(J - otro * I) * segun_modo(Fraction(1, lam - otro), exacto)
            proyectores[nombre] = P
        return proyectores

    def canal_nueve_tensor(self, triple: PerfectTriple, B: ETwoForm) -> np.ndarray:
        """Tensor simétrico sin traza Bⁱ_{⟨μ|α|}Σ^{iα}{}_{ν⟩}; solo ve el canal de dimensión 9."""
        T = np.einsum("ima,ab,ibn->mn", B.B, triple.inv_metric, triple.sigma)
        return self.tracefree(triple, T)

    def diamond(self, triple: PerfectTriple, htilde: np.ndarray) -> ETwoForm:
        """(h̃⋄Σⁱ)_{μν} = h̃_μ{}^αΣⁱ_{αν} − h̃_ν{}^αΣⁱ_{αμ}."""
        Y = np.einsum("mb,ba,ian->imn", htilde, triple.inv_metric, triple.sigma)
        return ETwoForm(Y - np.swapaxes(Y, 1, 2))

    # ---------- el espacio S ----------

    def s_embed(self, triple: PerfectTriple, s: SElement) -> ETwoForm:
        """
        σⁱ_{μν} = 2εⁱʲᵏΣʲ_{μν}hᵏ + 2h_{[μ}{}^αΣⁱ_{|α|ν]} con h_{μν} = h̃_{μν} + (1/4)g_{μν}h.

        Args:
            triple (PerfectTriple): Tripleta de fondo.
            s (SElement): Elemento de S.

        Returns:
            ETwoForm: La 2-forma σ, sin componente en el canal de dimensión 5.
        """
        h_mn = np.asarray(s.htilde) + triple.metric * (s.h * segun_modo(Fraction(1, 4), triple.exacto))
        vectorial = 2 * np.einsum("ijk,jmn,k->imn", triple.eps3, triple.sigma, np.asarray(s.hvec))
        return ETwoForm(vectorial + self.diamond(triple, h_mn).B)

    def s_extract(self, triple: PerfectTriple, sigma: ETwoForm, tol: float = 1e-10) -> SElement:
        """
        Inversa de s_embed.

        Raises:
            NotInS: Si el canal de dimensión 5 supera la tolerancia.
        """
        s4, s2, s0, _ = self.decompose_two_form(triple, sigma)
        escala = max(norma_max(sigma.B), 1.0)
        residuo = norma_max(s4)
        if residuo > tol * escala:
            raise NotInS(f"La 2-forma tiene componente {residuo:.3e} en el canal de dimensión 5")
        exacto = triple.exacto
        h = s0 * segun_modo(Fraction(1, 6), exacto)
        hvec = s2 * segun_modo(Fraction(1, 16), exacto)
        htilde = self.canal_nueve_tensor(triple, sigma) * segun_modo(Fraction(-1, 2), exacto)
        return SElement(h, hvec, htilde)

    def norma_sigma(self, sigma: ETwoForm) -> float:
        """Suma de cuadrados de todas las componentes σⁱ_{μν}."""
        return float(np.sum(a_float(sigma.B) ** 2))

    # ---------- formas de Gram ----------

    def gram_S(self, beta1, beta2, beta3) -> GramForm:
        """⟨σ,σ⟩ = β₁h² + β₂(hⁱ)² + β₃(h̃)² en las 13 coordenadas de S."""
        exacto = not any(isinstance(b, float) for b in (beta1, beta2, beta3))
        beta1, beta2, beta3 = (segun_modo(b, exacto) for b in (beta1, beta2, beta3))
        betas = [beta1] + [beta2] * 3 + [beta3] * 9
        matriz = ceros((13, 13), exacto)
        inversa = None
        if all(b != 0 for b in betas):
            inversa = ceros((13, 13), exacto)
        for k, b in enumerate(betas):
            matriz[k, k] = b
            if inversa is not None:
                inversa[k, k] = 1 / b
        positiva = all(b > 0 for b in (beta1, beta2, beta3))
        return GramForm(matriz, positiva, f"S({beta1}, {beta2}, {beta3})", inversa)

    @staticmethod
    def metrica_plana(triple: PerfectTriple) -> bool:
        return norma_max(a_float(triple.metric) - np.eye(4)) < 1e-12

    def gram_EL1(self, gamma1, gamma2, triple: Optional[PerfectTriple] = None) -> GramForm:
        """
        ⟨a,a⟩ = γ₁(aⁱ_μ)² + γ₂εⁱʲᵏΣⁱ{}^{μν}aʲ_μaᵏ_ν = aᵀ(γ₁I − γ₂J₁)a.

        La inversa es (γ₁−2γ₂)⁻¹P4 + (γ₁+γ₂)⁻¹P8 cuando ambos autovalores son no nulos.

        El índice μ se contrae con la identidad, en el marco ortonormal de la
        tripleta plana: la forma solo es la de la métrica g cuando g = 𝟙. Con
        una tripleta de pullback se registra un WARNING y se devuelve la forma
        euclídea.
        """
        triple = triple or self.sigma_service.standard_triple()
        if not self.metrica_plana(triple):
            LOGGER.warning("gram_EL1 contrae μ con 𝟙 pero la tripleta tiene g ≠ 𝟙; la forma no es covariante")
        exacto = triple.exacto and not isinstance(gamma1, float) and not isinstance(gamma2, float)
        if not exacto:
            triple = triple.a_float()
            gamma1, gamma2 = float(gamma1), float(gamma2)
        else:
            gamma1, gamma2 = exacto_o_float(gamma1), exacto_o_float(gamma2)
        J = self.j1_matrix(triple)
        I = identidad(12, exacto)
        matriz = I * gamma1 - J * gamma2
        lam4 = gamma1 - 2 * gamma2
        lam8 = gamma1 + gamma2
        inversa = None
        if lam4 != 0 and lam8 != 0:
            P4, P8 = self.j1_projectors(triple)
            inversa = P4 * (1 / lam4) + P8 * (1 / lam8)
        positiva = lam4 > 0 and lam8 > 0
        return GramForm(matriz, positiva, f"EL1({gamma1}, {gamma2})", inversa)

    def gram_TM(self, exacto: bool = True) -> GramForm:
        I = identidad(4, exacto)
        return GramForm(I, True, "TM", I.copy())

    def gram_E(self, exacto: bool = True) -> GramForm:
        I = identidad(3, exacto)
        return GramForm(I, True, "E", I.copy())
