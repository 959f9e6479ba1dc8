import numpy as np

from models.errores import FiberMismatch
from models.raiz_dos import RaizDos, a_float, es_cero_exacto


def _codificar(valor):
    """Valor de coeficiente para JSON: exacto como {"p","q"}, float como número."""
    convertido = RaizDos.desde(valor)
    if convertido is not None:
        return convertido.to_dict()
    return float(valor)


def _decodificar(valor):
    if isinstance(valor, dict):
        return RaizDos.from_dict(valor)
    return float(valor)


class OperatorStencil:
    """
    Operador diferencial de primer orden con coeficientes constantes.

    (Op u)_o = Σ_{μ,i} C[o, μ, i] ∂_μ u_i
    """

    def __init__(self, coef: np.ndarray, nombre: str = ""):
        """
        Inicializa el stencil.

        Args:
            coef (np.ndarray): Tensor C de forma (dim_out, 4, dim_in).
            nombre (str): Etiqueta del operador.
        """
        if coef.ndim != 3 or coef.shape[1] != 4:
            raise FiberMismatch(f"Stencil con forma inválida {coef.shape}")
        self.coef = coef
        self.nombre = nombre

    @property
    def dim_out(self) -> int:
        return self.coef.shape[0]

    @property
    def dim_in(self) -> int:
        return self.coef.shape[2]

    @property
    def exacto(self) -> bool:
        return self.coef.dtype == object

    def como_float(self) -> np.ndarray:
        return a_float(self.coef)

    def a_float(self) -> "OperatorStencil":
        return OperatorStencil(self.como_float(), self.nombre)

    def simbolo(self, k) -> np.ndarray:
        """Matriz Σ_μ C[·, μ, ·] k_μ."""
        k = np.asarray(k)
        if self.exacto and k.dtype == object:
            return np.einsum("omi,m->oi", self.coef, k)
        return np.einsum("omi,m->oi", self.como_float(), k)

    def es_cero(self, tol: float = 0.0) -> bool:
        if self.exacto and tol == 0.0:
            return es_cero_exacto(self.coef)
        return self.norma() <= tol

    def norma(self) -> float:
        """Norma de Frobenius del tensor de coeficientes."""
        return float(np.linalg.norm(self.como_float()))

    def _compatible(self, otro: "OperatorStencil") -> None:
        if self.coef.shape != otro.coef.shape:
            raise FiberMismatch(f"Stencils incompatibles {self.coef.shape} y {otro.coef.shape}")

    def __add__(self, otro: "OperatorStencil") -> "OperatorStencil":
        self._compatible(otro)
        return OperatorStencil(self.coef + otro.coef, f"({self.nombre} + {otro.nombre})")

    def __sub__(self, otro: "OperatorStencil") -> "OperatorStencil":
        self._compatible(otro)
        return OperatorStencil(self.coef - otro.coef, f"({self.nombre} - {otro.nombre})")

    def escalar(self, factor) -> "OperatorStencil":
        return OperatorStencil(self.coef * factor, f"{factor}·{self.nombre}")

    def izquierda(self, matriz: np.ndarray, nombre: str = "") -> "OperatorStencil":
        """Compone con un mapa de fibra en la salida: M ∘ Op."""
        if matriz.shape[1] != self.dim_out:
            raise FiberMismatch(f"Mapa {matriz.shape} no actúa sobre la salida de dimensión {self.dim_out}")
        return OperatorStencil(np.einsum("po,omi->pmi", matriz, self.coef), nombre or f"M∘{self.nombre}")

    def derecha(self, matriz: np.ndarray, nombre: str = "") -> "OperatorStencil":
        """Compone con un mapa de fibra en la entrada: Op ∘ M."""
        if matriz.shape[0] != self.dim_in:
            raise FiberMismatch(f"Mapa {matriz.shape} no llega a la entrada de dimensión {self.dim_in}")
        return OperatorStencil(np.einsum("omi,ij->omj", self.coef, matriz), nombre or f"{self.nombre}∘M")

    def bloque(self, filas: slice, columnas: slice, nombre: str = "") -> "OperatorStencil":
        return OperatorStencil(self.coef[filas, :, columnas], nombre or f"{self.nombre}[bloque]")

    def to_dict(self) -> dict:
        """Tripletas dispersas [o, μ, i, valor] de los coeficientes no nulos."""
        entradas = []
        for (o, m, i), valor in np.ndenumerate(self.coef):
            if valor != 0:
                entradas.append([int(o), int(m), int(i), _codificar(valor)])
        return {
            "nombre": self.nombre,
            "dim_out": self.dim_out,
            "dim_in": self.dim_in,
            "exacto": self.exacto,
            "coeficientes": entradas,
        }

    @staticmethod
    def from_dict(data: dict) -> "OperatorStencil":
        tipo = object if data.get("exacto") else float
        coef = np.zeros((data["dim_out"], 4, data["dim_in"]), dtype=tipo)
        for o, m, i, valor in data["coeficientes"]:
            coef[o, m, i] = _decodificar(valor)
        return OperatorStencil(coef, data.get("nombre", ""))

    def __repr__(self) -> str:
        return f"OperatorStencil({self.nombre!r}, {self.dim_in}→{self.dim_out})"


def bloques(filas: list, nombre: str = "") -> OperatorStencil:
    """
    Ensambla una matriz de bloques de stencils; None es un bloque nulo.

    Args:
        filas (list): Lista de filas; cada fila es una lista de OperatorStencil o None.
        nombre (str): Etiqueta del operador ensamblado.

    Returns:
        OperatorStencil: El operador completo.
    """
    alturas = []
    for fila in filas:
        alturas.append(next(b.dim_out for b in fila if b is not None))
    anchos = []
    for j in range(len(filas[0])):
        anchos.append(next(fila[j].dim_in for fila in filas if fila[j] is not None))
    exacto = all(b.exacto for fila in filas for b in fila if b is not None)
    coef = np.zeros((sum(alturas), 4, sum(anchos)), dtype=object if exacto else float)
    fila_inicio = 0
    for fila, alto in zip(filas, alturas):
        col_inicio = 0
        for b, ancho in zip(fila, anchos):
            if b is not None:
                if b.dim_out != alto or b.dim_in != ancho:
                    raise FiberMismatch(f"Bloque {b.nombre} con dimensiones {b.dim_in}→{b.dim_out} fuera de lugar")
                coef[fila_inicio:fila_inicio + alto, :, col_inicio:col_inicio + ancho] = (
                    b.coef if exacto else b.como_float()
                )
            col_inicio += ancho
        fila_inicio += alto
    return OperatorStencil(coef, nombre)


class SecondOrderStencil:
    """Operador de segundo orden Σ K[o, μ, ν, i] ∂_μ∂_ν u_i con K simétrico en (μ, ν)."""

    def __init__(self, coef: np.ndarray, nombre: str = ""):
        self.coef = coef
        self.nombre = nombre

    @property
    def exacto(self) -> bool:
        return self.coef.dtype == object

    def como_float(self) -> np.ndarray:
        return a_float(self.coef)

    def es_cero(self) -> bool:
        if self.exacto:
            return es_cero_exacto(self.coef)
        return self.norma() == 0.0

    def norma(self) -> float:
        return float(np.linalg.norm(self.como_float()))

    def simbolo(self, k) -> np.ndarray:
        return np.einsum("omni,m,n->oi", self.como_float(), np.asarray(k, dtype=float), np.asarray(k, dtype=float))

    def __sub__(self, otro: "SecondOrderStencil") -> "SecondOrderStencil":
        return SecondOrderStencil(self.coef - otro.coef, f"({self.nombre} - {otro.nombre})")

    def __add__(self, otro: "SecondOrderStencil") -> "SecondOrderStencil":
        return SecondOrderStencil(self.coef + otro.coef, f"({self.nombre} + {otro.nombre})")

    def escalar(self, factor) -> "SecondOrderStencil":
        return SecondOrderStencil(self.coef * factor, f"{factor}·{self.nombre}")


class SymbolMatrix:
    """Símbolo de un stencil en el covector k (∂_μ → k_μ)."""

    def __init__(self, k, matrix: np.ndarray):
        self.k = np.asarray(k)
        self.matrix = matrix

    def rango(self, rtol: float = 1e-8) -> int:
        valores = np.linalg.svd(a_float(self.matrix) if self.matrix.dtype == object else self.matrix, compute_uv=False)
        if valores.size == 0 or valores[0] == 0:
            return 0
        return int(np.sum(valores > rtol * valores[0]))

    def to_dict(self) -> dict:
        return {
            "k": a_float(self.k).tolist(),
            "matrix": a_float(self.matrix).tolist(),
        }
