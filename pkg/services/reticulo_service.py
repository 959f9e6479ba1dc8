import logging
from typing import Optional, Tuple

import numpy as np
from scipy import fft as sfft

from models.campo_reticulo import LatticeField
from models.errores import ErrorPlebanski, FiberMismatch
from models.formas import GramForm
from models.raiz_dos import a_float
from models.stencil import OperatorStencil, SecondOrderStencil

LOGGER = logging.getLogger(__name__)

_EJES = (-4, -3, -2, -1)


class ReticuloService:
    """
    Campos periódicos sobre el 4-toro de lado 2π con derivadas espectrales.

    Los números de onda son enteros; los campos aleatorios solo llevan modos
    con |k_μ| <= kmax en cada dirección, de modo que las derivadas son
    exactamente antisimétricas y las sumas de red integran sin error.
    """

    def __init__(self, n: int = 8, workers: int = 1, kmax: Optional[int] = None):
        """
        Inicializa el servicio.

        Args:
            n (int): Sitios por dirección (par, >= 4).
            workers (int): Hilos de scipy.fft.
            kmax (int): Corte de banda; por defecto max(1, n // 4).

        Raises:
            ErrorPlebanski: Si n es impar o menor que 4.
        """
        if n < 4 or n % 2:
            raise ErrorPlebanski(f"El tamaño de red debe ser par y >= 4, recibido {n}")
        self.n = n
        self.workers = workers
        self.kmax = kmax if kmax is not None else max(1, n // 4)
        completas = sfft.fftfreq(n, 1.0 / n)
        media = sfft.rfftfreq(n, 1.0 / n)
        self.k = np.array(np.meshgrid(completas, completas, completas, media, indexing="ij"))
        self.mascara = np.all(np.abs(self.k) <= self.kmax, axis=0)
        # el modo de Nyquist no tiene derivada real
        self.k_derivada = np.where(np.abs(self.k) == n // 2, 0.0, self.k)
        LOGGER.debug("Red N=%d, kmax=%d, %d hilos", n, self.kmax, workers)

    # ---------- transformadas ----------

    def _directa(self, data: np.ndarray) -> np.ndarray:
        return sfft.rfftn(data, axes=_EJES, workers=self.workers)

    def _inversa(self, espectro: np.ndarray) -> np.ndarray:
        return sfft.irfftn(espectro, s=(self.n,) * 4, axes=_EJES, workers=self.workers)

    def _verificar(self, campo: LatticeField) -> None:
        if campo.n != self.n:
            raise FiberMismatch(f"Campo con N={campo.n} en una red de N={self.n}")

    # ---------- campos ----------

    def random_field(self, fiber: int, seed: int) -> LatticeField:
        """
        Campo real aleatorio limitado en banda, con varianza unidad por componente.

        Args:
            fiber (int): Dimensión de la fibra.
            seed (int): Semilla de numpy.random.default_rng.

        Returns:
            LatticeField: Campo de forma (fiber, N, N, N, N).
        """
        rng = np.random.default_rng(seed)
        ruido = rng.standard_normal((fiber,) + (self.n,) * 4)
        data = self._inversa(self._directa(ruido) * self.mascara)
        desviacion = data.reshape(fiber, -1).std(axis=1)
        desviacion[desviacion == 0] = 1.0
        data = data / desviacion[(slice(None),) + (None,) * 4]
        return LatticeField(data)

    def coordenadas(self) -> np.ndarray:
        """x_μ de cada sitio, arreglo (4, N, N, N, N)."""
        x = 2.0 * np.pi * np.arange(self.n) / self.n
        return np.array(np.meshgrid(x, x, x, x, indexing="ij"))

    def onda_plana(self, vector, k) -> LatticeField:
        """Campo vector·cos(k·x) para un k entero."""
        fase = np.einsum("m,m...->...", np.asarray(k, dtype=float), self.coordenadas())
        vector = a_float(vector)
        return LatticeField(vector[(slice(None),) + (None,) * 4] * np.cos(fase)[None])

    # ---------- derivadas ----------

    def gradiente(self, campo: LatticeField) -> np.ndarray:
        """∂_μu_i con forma (4, fibra, N, N, N, N)."""
        self._verificar(campo)
        espectro = self._directa(campo.data)
        return np.array([self._inversa(1j * self.k_derivada[m] * espectro) for m in range(4)])

    def derivada(self, campo: LatticeField, mu: int) -> LatticeField:
        self._verificar(campo)
        return LatticeField(self._inversa(1j * self.k_derivada[mu] * self._directa(campo.data)), campo.band_limit)

    def segunda_derivada(self, campo: LatticeField, mu: int, nu: int) -> LatticeField:
        """∂_μ∂_νu."""
        self._verificar(campo)
        factor = -self.k_derivada[mu] * self.k_derivada[nu]
        return LatticeField(self._inversa(factor * self._directa(campo.data)), campo.band_limit)

    def laplaciano(self, campo: LatticeField, inv_metric: Optional[np.ndarray] = None) -> LatticeField:
        """Δu = g^{μν}∂_μ∂_νu; métrica plana por defecto."""
        self._verificar(campo)
        g = np.eye(4) if inv_metric is None else a_float(inv_metric)
        simbolo = -np.einsum("mn,m...,n...->...", g, self.k_derivada, self.k_derivada)
        return LatticeField(self._inversa(simbolo * self._directa(campo.data)), campo.band_limit)

    def apply_stencil(self, operador: OperatorStencil, campo: LatticeField) -> LatticeField:
        """
        (Op u)_o = C[o, μ, i]∂_μu_i evaluado en el espacio de Fourier.

        Raises:
            FiberMismatch: Si la fibra del campo no es la entrada del operador.
        """
        self._verificar(campo)
        if operador.dim_in != campo.fiber:
            raise FiberMismatch(
                f"{operador.nombre} espera fibra {operador.dim_in}, el campo tiene {campo.fiber}"
            )
        espectro = self._directa(campo.data)
        salida = np.einsum("omi,m...,i...->o...", operador.como_float(), 1j * self.k_derivada, espectro)
        return LatticeField(self._inversa(salida), campo.band_limit)

    def apply_second_order(self, operador: SecondOrderStencil, campo: LatticeField) -> LatticeField:
        """(K u)_o = K[o, μ, ν, i]∂_μ∂_νu_i."""
        self._verificar(campo)
        K = operador.como_float()
        if K.shape[3] != campo.fiber:
            raise FiberMismatch(f"{operador.nombre} espera fibra {K.shape[3]}, el campo tiene {campo.fiber}")
        espectro = self._directa(campo.data)
        parcial = np.einsum("omni,m...->oni...", K, self.k_derivada)
        salida = -np.einsum("oni...,n...,i...->o...", parcial, self.k_derivada, espectro)
        return LatticeField(self._inversa(salida), campo.band_limit)

    # ---------- productos internos ----------

    def inner(self, u: LatticeField, v: LatticeField, gram: GramForm) -> float:
        """
        ∫ u·G·v como suma de red con peso (2π/N)⁴.

        Raises:
            FiberMismatch: Si las fibras no coinciden con la forma de Gram.
        """
        if u.fiber != gram.dim or v.fiber != gram.dim:
            raise FiberMismatch(f"Campos de fibra {u.fiber} y {v.fiber} con una Gram de dimensión {gram.dim}")
        peso = (2.0 * np.pi / self.n) ** 4
        return float(peso * np.einsum("oabcd,oi,iabcd->", u.data, gram.como_float(), v.data))

    def norma(self, u: LatticeField) -> float:
        peso = (2.0 * np.pi / self.n) ** 4
        return float(np.sqrt(peso * np.sum(u.data * u.data)))

    def adjoint_pair_check(self, operador: OperatorStencil, adjunto: OperatorStencil, gram_in: GramForm,
                           gram_out: GramForm, trials: int = 5, seed: int = 0) -> float:
        """
        max |⟨v, Op u⟩ − ⟨Op* v, u⟩| / (‖u‖‖v‖) sobre campos aleatorios.

        Args:
            operador (OperatorStencil): Operador de la fibra de gram_in a la de gram_out.
            adjunto (OperatorStencil): Candidato a adjunto.
            gram_in (GramForm): Producto del dominio.
            gram_out (GramForm): Producto de la imagen.
            trials (int): Pares de campos.
            seed (int): Semilla; el par t usa seed + 2t y seed + 2t + 1.

        Returns:
            float: Residuo máximo.
        """
        peor = 0.0
        for t in range(trials):
            u = self.random_field(operador.dim_in, seed + 2 * t)
            v = self.random_field(operador.dim_out, seed + 2 * t + 1)
            izquierda = self.inner(v, self.apply_stencil(operador, u), gram_out)
            derecha = self.inner(self.apply_stencil(adjunto, v), u, gram_in)
            peor = max(peor, abs(izquierda - derecha) / (self.norma(u) * self.norma(v)))
        LOGGER.debug("Adjunción %s / %s: residuo %.3e", operador.nombre, adjunto.nombre, peor)
        return peor

    def laplacian_multiple_check(self, operador: OperatorStencil, gram_dom: GramForm, gram_cod: GramForm,
                                 trials: int = 2, seed: int = 0) -> Tuple[np.ndarray, float]:
        """
        Ajusta D*D u = M(−Δu) por mínimos cuadrados.

        D* es el adjunto formal respecto de las dos formas de Gram.

        Returns:
            Tuple[np.ndarray, float]: Matriz de canales M y residuo relativo tras el ajuste.
        """
        C = operador.como_float()
        adjunto = -np.einsum("pi,omi,oq->pmq", a_float(gram_dom.inversa()), C, gram_cod.como_float())
        estrella = OperatorStencil(adjunto, f"{operador.nombre}*")
        fibra = operador.dim_in
        entradas, salidas = [], []
        for t in range(trials):
            u = self.random_field(fibra, seed + t)
            salida = self.apply_stencil(estrella, self.apply_stencil(operador, u))
            entradas.append((-self.laplaciano(u).data).reshape(fibra, -1).T)
            salidas.append(salida.data.reshape(fibra, -1).T)
        A = np.vstack(entradas)
        B = np.vstack(salidas)
        escala = float(np.linalg.norm(B))
        if escala == 0.0:
            return np.zeros((fibra, fibra)), 0.0
        X, *_ = np.linalg.lstsq(A, B, rcond=None)
        residuo = float(np.linalg.norm(A.dot(X) - B)) / escala
        LOGGER.info("Ajuste D*D = −ΔM para %s: residuo %.3e", operador.nombre, residuo)
        return X.T, residuo

    # ---------- formato binario ----------

    def export_field(self, campo: LatticeField, path) -> None:
        campo.export_field(path)

    def import_field(self, path) -> LatticeField:
        campo = LatticeField.import_field(path)
        self._verificar(campo)
        return campo
