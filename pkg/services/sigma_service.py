import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, Tuple

import numpy as np

from models.errores import NotPerfect, NotRiemannian, OrientationError, SingularMatrix
from models.raiz_dos import a_float
from models.triple import EPS3, EPS4, PerfectTriple

LOGGER = logging.getLogger(__name__)

# pares (μ, ν) con Σⁱ_{μν} = +1 en la tripleta estándar
_PARES_ESTANDAR = (
    ((0, 1), (2, 3)),
    ((0, 3), (1, 2)),
    ((0, 2), (3, 1)),
)


class SigmaService:
    """Servicio de tripletas perfectas, su métrica y las identidades del álgebra Σ."""

    def __init__(self, tol: float = 1e-9):
        """
        Inicializa el servicio.

        Args:
            tol (float): Tolerancia relativa para perfección y residuos.
        """
        self.tol = tol

    def standard_triple(self, exacto: bool = True) -> PerfectTriple:
        """
        Tripleta autodual canónica sobre R⁴ con g = 𝟙 y v_Σ = 1.

        Args:
            exacto (bool): Si True las componentes son enteros de Python.

        Returns:
            PerfectTriple: Σ¹ = e⁰¹+e²³, Σ² = e⁰³+e¹², Σ³ = e⁰²+e³¹.
        """
        tipo = object if exacto else float
        sigma = np.zeros((3, 4, 4), dtype=tipo)
        for i, pares in enumerate(_PARES_ESTANDAR):
            for m, n in pares:
                sigma[i, m, n] = 1
                sigma[i, n, m] = -1
        identidad = np.zeros((4, 4), dtype=tipo)
        for m in range(4):
            identidad[m, m] = 1
        volumen = Fraction(1) if exacto else 1.0
        return PerfectTriple(sigma, identidad, volumen, identidad.copy())

    def wedge(self, omega: np.ndarray, eta: np.ndarray):
        """Coeficiente de dx⁰∧dx¹∧dx²∧dx³ en ω∧η: (1/4)ε̃^{μνρσ}ω_{μν}η_{ρσ}."""
        if omega.dtype == object or eta.dtype == object:
            return np.einsum("mnrs,mn,rs->", EPS4, omega, eta) * Fraction(1, 4)
        return float(np.einsum("mnrs,mn,rs->", EPS4.astype(float), omega, eta)) / 4.0

    def gram_wedge(self, sigma: np.ndarray) -> np.ndarray:
        """Matriz 3×3 de Σⁱ∧Σʲ."""
        eps = EPS4 if sigma.dtype == object else EPS4.astype(float)
        gram = np.einsum("mnrs,imn,jrs->ij", eps, sigma, sigma)
        return gram * Fraction(1, 4) if sigma.dtype == object else gram / 4.0

    def densidad_metrica(self, sigma: np.ndarray) -> np.ndarray:
        """R_{μν} = (1/6)εⁱʲᵏΣⁱ_{μα}Σʲ_{νβ}Σᵏ_{γδ}ε̃^{αβγδ}."""
        sigma = a_float(sigma)
        eps3 = EPS3.astype(float)
        eps4 = EPS4.astype(float)
        # Σᵏ_{γδ}ε̃^{αβγδ} primero
        dual = np.einsum("kgd,abgd->kab", sigma, eps4)
        return np.einsum("ijk,ima,jnb,kab->mn", eps3, sigma, sigma, dual) / 6.0

    def metric_from_triple(self, sigma: np.ndarray) -> Tuple[np.ndarray, float]:
        """
        Recupera la métrica y el volumen de una tripleta.

        v_Σ se toma de la traza de Σⁱ∧Σʲ (= 6v); la métrica sale de la
        densidad R_{μν}, que para una tripleta autodual vale −2·g·v.

        Args:
            sigma (np.ndarray): Arreglo (3, 4, 4) antisimétrico.

        Returns:
            Tuple[np.ndarray, float]: (g_{μν}, v_Σ) en punto flotante.

        Raises:
            NotPerfect: Si Σⁱ∧Σʲ no es proporcional a δⁱʲ.
            NotRiemannian: Si v_Σ <= 0 o la métrica no es definida positiva.
        """
        sigma = a_float(sigma)
        gram = self.gram_wedge(sigma)
        volumen = float(np.trace(gram)) / 6.0
        escala = max(float(np.max(np.abs(gram))), 1.0)
        desviacion = float(np.max(np.abs(gram - 2.0 * volumen * np.eye(3))))
        if desviacion > self.tol * escala:
            raise NotPerfect(f"Σⁱ∧Σʲ se aparta de 2δⁱʲv en {desviacion:.3e}")
        if volumen <= 0:
            raise NotRiemannian(f"Volumen no positivo v_Σ = {volumen:.6g}")
        metrica = self.densidad_metrica(sigma) / (-2.0 * volumen)
        metrica = 0.5 * (metrica + metrica.T)
        autovalores = np.linalg.eigvalsh(metrica)
        if autovalores[0] <= self.tol * max(abs(autovalores[-1]), 1.0):
            raise NotRiemannian(f"La métrica recuperada no es definida positiva (autovalores {autovalores})")
        return metrica, volumen

    def construir_triple(self, sigma: np.ndarray) -> PerfectTriple:
        """PerfectTriple en punto flotante con métrica y volumen recalculados."""
        metrica, volumen = self.metric_from_triple(sigma)
        return PerfectTriple(a_float(sigma), metrica, volumen)

    def gl4_pullback(self, triple: PerfectTriple, M: np.ndarray) -> PerfectTriple:
        """
        Tira hacia atrás la tripleta por una matriz de GL(4) que preserva la orientación.

        Args:
            triple (PerfectTriple): Tripleta de partida.
            M (np.ndarray): Matriz 4×4 con det M > 0.

        Returns:
            PerfectTriple: Σ′ⁱ_{μν} = M_μ{}^α M_ν{}^β Σⁱ_{αβ} con métrica y volumen recalculados.

        Raises:
            SingularMatrix: Si |det M| es menor que la tolerancia.
            OrientationError: Si det M < 0.
        """
        M = np.asarray(M, dtype=float)
        det = float(np.linalg.det(M))
        escala = max(float(np.max(np.abs(M))), 1.0) ** 4
        if abs(det) < self.tol * escala:
            raise SingularMatrix(f"det M = {det:.3e} demasiado pequeño")
        if det < 0:
            raise OrientationError(f"det M = {det:.6g} invierte la orientación")
        sigma = np.einsum("ma,nb,iab->imn", M, M, a_float(triple.sigma))
        LOGGER.debug("Pullback por M con det %.6g", det)
        return self.construir_triple(sigma)

    def identity_residuals(self, triple: PerfectTriple) -> Dict[str, float]:
        """
        Residuos max-abs de las identidades del álgebra de la tripleta.

        Returns:
            dict: perfeccion, algebra, sigma_sigma, sse_1, sse_2, traza y
            metrica (residuo de R − c·g·v), más la constante c medida.
        """
        t = triple.a_float()
        sigma, g, v = t.sigma, t.metric, float(t.volume)
        eps3 = EPS3.astype(float)
        mixto = t.sigma_mixto()
        arriba = t.sigma_arriba()
        delta3 = np.eye(3)
        delta4 = np.eye(4)

        gram = self.gram_wedge(sigma)
        perfeccion = np.max(np.abs(gram - 2.0 * v * delta3))

        algebra = (
            np.einsum("iab,jbc->ijac", mixto, mixto)
            + np.einsum("ij,ac->ijac", delta3, delta4)
            - np.einsum("ijk,kac->ijac", eps3, mixto)
        )

        sigma_sigma = (
            np.einsum("imn,irs->mnrs", sigma, sigma)
            - np.einsum("mr,ns->mnrs", g, g)
            + np.einsum("ms,nr->mnrs", g, g)
            - t.eps4_lower
        )

        sse_1 = (
            np.einsum("ijk,jmn,krs->imnrs", eps3, sigma, sigma)
            + np.einsum("mr,ins->imnrs", g, sigma)
            - np.einsum("nr,ims->imnrs", g, sigma)
            - np.einsum("ms,inr->imnrs", g, sigma)
            + np.einsum("ns,imr->imnrs", g, sigma)
        )

        sse_2 = (
            np.einsum("mnra,isa->ismnr", t.eps4_upper, sigma)
            - np.einsum("sr,imn->ismnr", delta4, arriba)
            - np.einsum("sm,inr->ismnr", delta4, arriba)
            - np.einsum("sn,irm->ismnr", delta4, arriba)
        )

        traza = float(np.einsum("iab,iba->", mixto, mixto))

        densidad = self.densidad_metrica(sigma)
        constante = float(np.sum(densidad * g) / (v * np.sum(g * g)))
        metrica = np.max(np.abs(densidad - constante * g * v))

        return {
            "perfeccion": float(perfeccion),
            "algebra": float(np.max(np.abs(algebra))),
            "sigma_sigma": float(np.max(np.abs(sigma_sigma))),
            "sse_1": float(np.max(np.abs(sse_1))),
            "sse_2": float(np.max(np.abs(sse_2))),
            "traza": abs(traza + 12.0),
            "metrica": float(metrica),
            "constante_metrica": constante,
        }

    def escala(self, triple: PerfectTriple) -> float:
        """Escala de los residuos: producto de los máximos de Σ y g⁻¹ al cubo."""
        t = triple.a_float()
        return max(float(np.max(np.abs(t.sigma))), 1.0) ** 3 * max(float(np.max(np.abs(t.inv_metric))), 1.0) ** 2

    def matriz_aleatoria(self, rng: np.random.Generator, amplitud: float = 0.3) -> np.ndarray:
        """Matriz I + A con entradas de A uniformes en [−amplitud, amplitud] y det > 0."""
        while True:
            M = np.eye(4) + rng.uniform(-amplitud, amplitud, size=(4, 4))
            if np.linalg.det(M) > 0.1:
                return M

    def cargar_triple(self, path) -> PerfectTriple:
        """
        Lee una tripleta desde un fixture JSON y recalcula su métrica.

        Raises:
            NotPerfect, NotRiemannian: Si la tripleta guardada no es perfecta.
        """
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        guardada = PerfectTriple.from_dict(data)
        triple = self.construir_triple(guardada.sigma)
        if np.max(np.abs(triple.metric - guardada.metric)) > self.tol * max(1.0, float(np.max(np.abs(triple.metric)))):
            LOGGER.warning("La métrica guardada en %s no coincide con la recalculada", path)
        return triple

    def guardar_triple(self, triple: PerfectTriple, path) -> None:
        Path(path).write_text(json.dumps(triple.to_dict(), indent=2), encoding="utf-8")
