from typing import Optional

import numpy as np

from models.errores import FiberMismatch
from models.raiz_dos import a_float, es_cero_exacto
from models.stencil import OperatorStencil, bloques


class TwistedBlockOperator:
    """
    Operador de bloques S⊕E → Λ¹⊕(E⊗Λ¹).

        ( xi_sigma  xi_chi )
        ( a_sigma   a_chi  )

    Cada bloque es un OperatorStencil de primer orden.
    """

    def __init__(self, xi_sigma: OperatorStencil, xi_chi: OperatorStencil,
                 a_sigma: OperatorStencil, a_chi: OperatorStencil, nombre: str = "D̃"):
        """
        Inicializa el operador.

        Args:
            xi_sigma (OperatorStencil): Bloque S → Λ¹ (13 → 4).
            xi_chi (OperatorStencil): Bloque E → Λ¹ (3 → 4).
            a_sigma (OperatorStencil): Bloque S → E⊗Λ¹ (13 → 12).
            a_chi (OperatorStencil): Bloque E → E⊗Λ¹ (3 → 12).
            nombre (str): Etiqueta del operador.

        Raises:
            FiberMismatch: Si algún bloque tiene dimensiones incorrectas.
        """
        esperadas = {
            "xi_sigma": (xi_sigma, 4, 13),
            "xi_chi": (xi_chi, 4, 3),
            "a_sigma": (a_sigma, 12, 13),
            "a_chi": (a_chi, 12, 3),
        }
        for etiqueta, (bloque, salida, entrada) in esperadas.items():
            if bloque.dim_out != salida or bloque.dim_in != entrada:
                raise FiberMismatch(
                    f"Bloque {etiqueta} de {nombre}: {bloque.dim_in}→{bloque.dim_out}, se esperaba {entrada}→{salida}"
                )
        self.xi_sigma = xi_sigma
        self.xi_chi = xi_chi
        self.a_sigma = a_sigma
        self.a_chi = a_chi
        self.nombre = nombre

    def completo(self) -> OperatorStencil:
        """Stencil 16 → 16 con el dominio ordenado (S, E) y la imagen (Λ¹, E⊗Λ¹)."""
        return bloques(
            [[self.xi_sigma, self.xi_chi], [self.a_sigma, self.a_chi]],
            self.nombre,
        )

    def to_dict(self) -> dict:
        return {
            "nombre": self.nombre,
            "xi_sigma": self.xi_sigma.to_dict(),
            "xi_chi": self.xi_chi.to_dict(),
            "a_sigma": self.a_sigma.to_dict(),
            "a_chi": self.a_chi.to_dict(),
        }

    @staticmethod
    def from_dict(data: dict) -> "TwistedBlockOperator":
        return TwistedBlockOperator(
            OperatorStencil.from_dict(data["xi_sigma"]),
            OperatorStencil.from_dict(data["xi_chi"]),
            OperatorStencil.from_dict(data["a_sigma"]),
            OperatorStencil.from_dict(data["a_chi"]),
            data.get("nombre", "D̃"),
        )

    def __repr__(self) -> str:
        return f"TwistedBlockOperator({self.nombre!r})"


class FiberTransform:
    """Cambio de variables lineal sobre una fibra de dimensión 16."""

    def __init__(self, matrix: np.ndarray, inversa: np.ndarray, nombre: str = ""):
        if matrix.shape != inversa.shape or matrix.shape[0] != matrix.shape[1]:
            raise FiberMismatch(f"Transformación {nombre} con formas {matrix.shape} y {inversa.shape}")
        self.matrix = matrix
        self.inversa = inversa
        self.nombre = nombre

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def exacta(self) -> bool:
        return self.matrix.dtype == object

    def residuo_inversa(self, exacto: bool = True) -> float:
        """max |T·T⁻¹ − I|; 0.0 exacto cuando ambas matrices son exactas."""
        producto = self.matrix.dot(self.inversa)
        diferencia = producto - np.eye(self.dim, dtype=int)
        if exacto and self.exacta and es_cero_exacto(diferencia):
            return 0.0
        return float(np.max(np.abs(a_float(diferencia))))

    def aplicar(self, vector: np.ndarray, inversa: bool = False) -> np.ndarray:
        matriz = self.inversa if inversa else self.matrix
        return matriz.dot(vector)

    def to_dict(self) -> dict:
        return {
            "nombre": self.nombre,
            "matrix": a_float(self.matrix).tolist(),
            "inversa": a_float(self.inversa).tolist(),
        }

    @staticmethod
    def from_dict(data: dict) -> "FiberTransform":
        return FiberTransform(
            np.asarray(data["matrix"], dtype=float),
            np.asarray(data["inversa"], dtype=float),
            data.get("nombre", ""),
        )

    def __repr__(self) -> str:
        return f"FiberTransform({self.nombre!r}, {self.dim}×{self.dim})"


def bloque_nulo(salida: int, entrada: int, exacto: bool = True, nombre: Optional[str] = None) -> OperatorStencil:
    """Stencil idénticamente cero."""
    return OperatorStencil(
        np.zeros((salida, 4, entrada), dtype=object if exacto else float),
        nombre or "0",
    )
