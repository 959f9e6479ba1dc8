import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import null_space, orth, subspace_angles, svdvals

from models.errores import DegenerateK, NotExact
from models.formas import GramForm
from models.raiz_dos import a_float
from models.stencil import OperatorStencil, SymbolMatrix
from models.triple import PerfectTriple
from services.operadores_service import OperadoresService

LOGGER = logging.getLogger(__name__)

RTOL_RANGO = 1e-8
BRECHA_MINIMA = 1e4
RANGOS_ESPERADOS = (4, 9, 3)


class SimboloService:
    """Cálculo de símbolos: rangos, núcleos, exactitud y cuadrados de operadores."""

    def __init__(self, operadores: OperadoresService, tol: float = 1e-10):
        """
        Inicializa el servicio.

        Args:
            operadores (OperadoresService): Servicio de operadores.
            tol (float): Ángulo principal máximo admitido entre imagen y núcleo.
        """
        self.operadores = operadores
        self.tol = tol

    def symbol_at(self, stencil: OperatorStencil, k) -> SymbolMatrix:
        """Símbolo de un stencil en k (∂_μ → k_μ)."""
        return SymbolMatrix(k, stencil.simbolo(k))

    @staticmethod
    def rango_y_brecha(matriz: np.ndarray) -> Tuple[int, float]:
        """
        Rango numérico con umbral relativo RTOL_RANGO y brecha espectral.

        Returns:
            Tuple[int, float]: (rango, s_r / s_{r+1}); la brecha es inf si no hay valores nulos.
        """
        valores = svdvals(a_float(matriz) if matriz.dtype == object else matriz)
        if valores.size == 0 or valores[0] == 0:
            return 0, float("inf")
        rango = int(np.sum(valores > RTOL_RANGO * valores[0]))
        if rango == valores.size or valores[rango] == 0:
            return rango, float("inf")
        return rango, float(valores[rango - 1] / valores[rango])

    def _stencils_float(self, triple: PerfectTriple):
        t = triple.a_float()
        return (
            self.operadores.build_d1(t),
            self.operadores.build_d2(t),
            self.operadores.build_d3(t),
        )

    def _exactitud(self, d1: OperatorStencil, d2: OperatorStencil, d3: OperatorStencil, k) -> Dict:
        k = np.asarray(k, dtype=float)
        if float(np.linalg.norm(k)) < 1e-12:
            raise DegenerateK(f"Covector demasiado pequeño: {k}")
        s1, s2, s3 = d1.simbolo(k), d2.simbolo(k), d3.simbolo(k)
        rangos, brechas = [], []
        for matriz in (s1, s2, s3):
            rango, brecha = self.rango_y_brecha(matriz)
            rangos.append(rango)
            brechas.append(brecha)
        nucleo2 = null_space(s2, rcond=RTOL_RANGO)
        nucleo3 = null_space(s3, rcond=RTOL_RANGO)
        imagen1 = orth(s1, rcond=RTOL_RANGO)
        imagen2 = orth(s2, rcond=RTOL_RANGO)
        angulo = 0.0
        for imagen, nucleo in ((imagen1, nucleo2), (imagen2, nucleo3)):
            if imagen.shape[1] != nucleo.shape[1] or imagen.shape[1] == 0:
                angulo = float("inf")
                break
            angulo = max(angulo, float(np.max(subspace_angles(imagen, nucleo))))
        composiciones = max(
            float(np.max(np.abs(s2.dot(s1)))),
            float(np.max(np.abs(s3.dot(s2)))),
        )
        reporte = {
            "k": k.tolist(),
            "ranks": rangos,
            "kernel_dims": [s1.shape[1] - rangos[0], nucleo2.shape[1], nucleo3.shape[1]],
            "max_principal_angle": angulo,
            "min_gap": min(brechas),
            "composiciones": composiciones,
        }
        reporte["pass"] = (
            tuple(rangos) == RANGOS_ESPERADOS
            and reporte["kernel_dims"] == [0, 4, 9]
            and angulo < self.tol
            and reporte["min_gap"] > BRECHA_MINIMA
        )
        return reporte

    def exactness_report(self, triple: PerfectTriple, k) -> Dict:
        """
        Verifica la exactitud de la sucesión de símbolos 4 → 13 → 12 → 3 en k.

        Args:
            triple (PerfectTriple): Tripleta de fondo.
            k: Covector no nulo.

        Returns:
            dict: {k, ranks, kernel_dims, max_principal_angle, min_gap, composiciones, pass}.

        Raises:
            DegenerateK: Si |k| es demasiado pequeño.
            NotExact: Si algún rango, núcleo o ángulo principal falla.
        """
        reporte = self._exactitud(*self._stencils_float(triple), k)
        if not reporte["pass"]:
            raise NotExact(
                f"Sucesión no exacta en k={reporte['k']}: rangos {reporte['ranks']}, "
                f"ángulo {reporte['max_principal_angle']:.3e}",
                reporte,
            )
        return reporte

    def direcciones(self, muestras: int, seed: int = 0) -> np.ndarray:
        """Covectores unitarios aleatorios, los 8 ejes con signo y las 16 esquinas (±1, ±1, ±1, ±1)/2."""
        rng = np.random.default_rng(seed)
        aleatorias = rng.standard_normal((muestras, 4))
        aleatorias /= np.linalg.norm(aleatorias, axis=1)[:, None]
        ejes = np.vstack([np.eye(4), -np.eye(4)])
        esquinas = np.array(
            [[s0, s1, s2, s3] for s0 in (1, -1) for s1 in (1, -1) for s2 in (1, -1) for s3 in (1, -1)],
            dtype=float,
        ) / 2.0
        return np.vstack([aleatorias, ejes, esquinas])

    def exactness_sweep(self, triple: PerfectTriple, muestras: int = 1000, seed: int = 0) -> Dict:
        """
        Repite la comprobación de exactitud sobre muchas direcciones.

        Returns:
            dict: direcciones, fallos, rangos observados, ángulo máximo y brecha mínima.
        """
        d1, d2, d3 = self._stencils_float(triple)
        fallos = 0
        angulo = 0.0
        brecha = float("inf")
        composiciones = 0.0
        rangos = set()
        direcciones = self.direcciones(muestras, seed)
        for k in direcciones:
            reporte = self._exactitud(d1, d2, d3, k)
            fallos += 0 if reporte["pass"] else 1
            angulo = max(angulo, reporte["max_principal_angle"])
            brecha = min(brecha, reporte["min_gap"])
            composiciones = max(composiciones, reporte["composiciones"])
            rangos.add(tuple(reporte["ranks"]))
        LOGGER.info("Barrido de exactitud: %d direcciones, %d fallos", len(direcciones), fallos)
        return {
            "direcciones": int(len(direcciones)),
            "fallos": fallos,
            "rangos": sorted(rangos),
            "max_principal_angle": angulo,
            "min_gap": brecha,
            "composiciones": composiciones,
        }

    # ---------- base adaptada a k ----------

    def kbasis_frame(self, triple: PerfectTriple, k) -> np.ndarray:
        """
        Base eⁱ_ν = k̂^μΣⁱ_{μν} ortogonal a k.

        Returns:
            np.ndarray: Arreglo (3, 4) con Σⁱ = k̂eⁱ − eⁱk̂ − εⁱʲᵏeʲeᵏ.

        Raises:
            DegenerateK: Si |k| es demasiado pequeño.
        """
        t = triple.a_float()
        k = np.asarray(k, dtype=float)
        norma = float(np.sqrt(np.einsum("m,mn,n->", k, t.inv_metric, k)))
        if norma < 1e-12:
            raise DegenerateK(f"Covector demasiado pequeño: {k}")
        k_arriba = t.inv_metric.dot(k) / norma
        return np.einsum("m,imn->in", k_arriba, t.sigma)

    def kbasis_residuals(self, triple: PerfectTriple, k) -> Dict[str, float]:
        """Residuos de ortonormalidad, ortogonalidad a k y reconstrucción de Σ."""
        t = triple.a_float()
        k = np.asarray(k, dtype=float)
        e = self.kbasis_frame(t, k)
        k_hat = k / float(np.sqrt(np.einsum("m,mn,n->", k, t.inv_metric, k)))
        reconstruida = (
            np.einsum("m,in->imn", k_hat, e)
            - np.einsum("n,im->imn", k_hat, e)
            - np.einsum("ijk,jm,kn->imn", t.eps3, e, e)
        )
        return {
            "ortonormalidad": float(np.max(np.abs(np.einsum("im,mn,jn->ij", e, t.inv_metric, e) - np.eye(3)))),
            "ortogonalidad": float(np.max(np.abs(np.einsum("im,mn,n->i", e, t.inv_metric, k)))),
            "reconstruccion": float(np.max(np.abs(reconstruida - t.sigma))),
        }

    # ---------- cuadrados ----------

    def symbol_square(self, arriba: OperatorStencil, gram_dom: GramForm, gram_arriba: GramForm, k,
                      abajo: Optional[OperatorStencil] = None, gram_abajo: Optional[GramForm] = None) -> np.ndarray:
        """
        Símbolo de D*D (+ d d* si se da el operador de abajo) en k.

        G_dom⁻¹σ(arriba)ᵀG_arriba σ(arriba) + σ(abajo)G_abajo⁻¹σ(abajo)ᵀG_dom; vale |k|²M
        exactamente cuando el operador de segundo orden es −Δ∘M.

        Raises:
            SingularGram: Si alguna forma de Gram no es invertible.
        """
        s = arriba.simbolo(np.asarray(k, dtype=float))
        G_dom = gram_dom.como_float()
        resultado = a_float(gram_dom.inversa()).dot(s.T).dot(gram_arriba.como_float()).dot(s)
        if abajo is not None:
            t = abajo.simbolo(np.asarray(k, dtype=float))
            resultado = resultado + t.dot(a_float(gram_abajo.inversa())).dot(t.T).dot(G_dom)
        return resultado

    def delta_multiple(self, arriba: OperatorStencil, gram_dom: GramForm, gram_arriba: GramForm,
                       direcciones: np.ndarray, abajo: Optional[OperatorStencil] = None,
                       gram_abajo: Optional[GramForm] = None) -> Tuple[np.ndarray, float]:
        """
        Matriz M con symbol_square(k) = |k|²M y su desviación máxima sobre las direcciones.

        Returns:
            Tuple[np.ndarray, float]: (M en la primera dirección, max ‖cuadrado/|k|² − M‖).
        """
        matrices: List[np.ndarray] = []
        for k in direcciones:
            cuadrado = self.symbol_square(arriba, gram_dom, gram_arriba, k, abajo, gram_abajo)
            matrices.append(cuadrado / float(np.dot(k, k)))
        M = matrices[0]
        desviacion = max(float(np.max(np.abs(m - M))) for m in matrices)
        return M, desviacion
