from typing import Optional

import numpy as np

from models.errores import FiberMismatch, SingularGram
from models.raiz_dos import a_float


class EOneForm:
    """1-forma con valores en E: aⁱ_μ, arreglo (3, 4)."""

    def __init__(self, a: np.ndarray):
        a = np.asarray(a)
        if a.shape != (3, 4):
            raise FiberMismatch(f"EOneForm espera forma (3, 4), recibió {a.shape}")
        self.a = a

    def vector(self) -> np.ndarray:
        """Coordenadas en la fibra de 12 (índice 4·i + μ)."""
        return self.a.reshape(12)

    @staticmethod
    def desde_vector(v: np.ndarray) -> "EOneForm":
        return EOneForm(np.asarray(v).reshape(3, 4))

    def to_dict(self) -> dict:
        return {"a": a_float(self.a).tolist()}

    @staticmethod
    def from_dict(data: dict) -> "EOneForm":
        return EOneForm(np.asarray(data["a"], dtype=float))


class ETwoForm:
    """2-forma con valores en E: Bⁱ_{μν}, arreglo (3, 4, 4) antisimétrico en μν."""

    PARES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

    def __init__(self, B: np.ndarray):
        B = np.asarray(B)
        if B.shape != (3, 4, 4):
            raise FiberMismatch(f"ETwoForm espera forma (3, 4, 4), recibió {B.shape}")
        self.B = B

    def vector(self) -> np.ndarray:
        """Las 18 componentes independientes Bⁱ_{μν}, μ<ν."""
        return np.array([self.B[i, m, n] for i in range(3) for (m, n) in self.PARES], dtype=self.B.dtype)

    @staticmethod
    def desde_vector(v: np.ndarray) -> "ETwoForm":
        v = np.asarray(v)
        B = np.zeros((3, 4, 4), dtype=v.dtype)
        for i in range(3):
            for p, (m, n) in enumerate(ETwoForm.PARES):
                B[i, m, n] = v[6 * i + p]
                B[i, n, m] = -v[6 * i + p]
        return ETwoForm(B)

    def antisimetria(self) -> float:
        return float(np.max(np.abs(a_float(self.B + np.swapaxes(self.B, 1, 2)))))

    def to_dict(self) -> dict:
        return {"B": a_float(self.B).tolist()}

    @staticmethod
    def from_dict(data: dict) -> "ETwoForm":
        return ETwoForm(np.asarray(data["B"], dtype=float))


class SElement:
    """
    Vector tangente al espacio de tripletas perfectas: (h, hⁱ, h̃_{μν}).

    h̃ es simétrico y sin traza respecto de la métrica de la tripleta.
    """

    def __init__(self, h, hvec: np.ndarray, htilde: np.ndarray):
        """
        Inicializa el elemento.

        Args:
            h: Parte de traza.
            hvec (np.ndarray): hⁱ, arreglo (3,).
            htilde (np.ndarray): h̃_{μν}, arreglo (4, 4).
        """
        self.h = h
        self.hvec = hvec
        self.htilde = htilde

    def to_dict(self) -> dict:
        return {
            "h": float(self.h),
            "hvec": a_float(self.hvec).tolist(),
            "htilde": a_float(self.htilde).tolist(),
        }

    @staticmethod
    def from_dict(data: dict) -> "SElement":
        return SElement(
            float(data["h"]),
            np.asarray(data["hvec"], dtype=float),
            np.asarray(data["htilde"], dtype=float),
        )


class EScalar:
    """Sección de E: χⁱ."""

    def __init__(self, chi: np.ndarray):
        self.chi = chi

    def to_dict(self) -> dict:
        return {"chi": a_float(self.chi).tolist()}

    @staticmethod
    def from_dict(data: dict) -> "EScalar":
        return EScalar(np.asarray(data["chi"], dtype=float))


class GramForm:
    """Matriz de Gram de un producto interno sobre una fibra."""

    def __init__(self, matrix: np.ndarray, positiva: bool, nombre: str = "", inversa: Optional[np.ndarray] = None):
        """
        Inicializa la forma.

        Args:
            matrix (np.ndarray): Matriz simétrica N×N (exacta o float).
            positiva (bool): True si la forma es definida positiva.
            nombre (str): Etiqueta para reportes.
            inversa (np.ndarray): Inversa exacta, si se conoce.
        """
        self.matrix = matrix
        self.positiva = positiva
        self.nombre = nombre
        self._inversa = inversa

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def exacta(self) -> bool:
        return self.matrix.dtype == object

    def inversa(self) -> np.ndarray:
        """
        Inversa de la forma.

        Returns:
            np.ndarray: La inversa exacta si se construyó con ella; si no, en float.

        Raises:
            SingularGram: Si la matriz no es invertible.
        """
        if self._inversa is not None:
            return self._inversa
        matriz = a_float(self.matrix)
        if np.linalg.cond(matriz) > 1e12:
            raise SingularGram(f"La forma de Gram '{self.nombre}' no es invertible")
        return np.linalg.inv(matriz)

    def como_float(self) -> np.ndarray:
        return a_float(self.matrix)

    def autovalores(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.como_float())

    def to_dict(self) -> dict:
        return {
            "nombre": self.nombre,
            "positiva": self.positiva,
            "matrix": self.como_float().tolist(),
        }

    @staticmethod
    def from_dict(data: dict) -> "GramForm":
        return GramForm(np.asarray(data["matrix"], dtype=float), data["positiva"], data.get("nombre", ""))


def suma_directa(*formas: GramForm, nombre: str = "") -> GramForm:
    """Forma de Gram diagonal por bloques."""
    total = sum(f.dim for f in formas)
    exacta = all(f.exacta for f in formas)
    con_inversa = all(f._inversa is not None for f in formas)
    tipo = object if exacta else float
    matriz = np.zeros((total, total), dtype=tipo)
    inversa = np.zeros((total, total), dtype=object if con_inversa and exacta else float)
    inicio = 0
    for forma in formas:
        fin = inicio + forma.dim
        matriz[inicio:fin, inicio:fin] = forma.matrix if exacta else forma.como_float()
        if con_inversa:
            inversa[inicio:fin, inicio:fin] = forma._inversa if exacta else a_float(forma._inversa)
        inicio = fin
    return GramForm(
        matriz,
        all(f.positiva for f in formas),
        nombre or "⊕".join(f.nombre for f in formas),
        inversa if con_inversa else None,
    )
