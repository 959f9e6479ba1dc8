from __future__ import annotations

import math
import numbers
import re
from fractions import Fraction
from math import isqrt
from typing import Optional, Union

import numpy as np

Racional = Union[int, Fraction]


def _raiz_racional(valor: Fraction) -> Optional[Fraction]:
    """Raíz cuadrada exacta de un racional no negativo, o None si no es un cuadrado."""
    if valor < 0:
        return None
    num, den = valor.numerator, valor.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _signo_racional(valor: Fraction) -> int:
    return (valor > 0) - (valor < 0)


class RaizDos:
    """
    Número exacto p + q·√2 con p, q racionales.

    Las operaciones con enteros o fracciones devuelven RaizDos; al mezclarlo
    con un float el resultado es float.
    """

    __slots__ = ("_p", "_q")

    def __init__(self, p: Racional = 0, q: Racional = 0):
        """
        Inicializa el número.

        Args:
            p (int | Fraction | str): Parte racional.
            q (int | Fraction | str): Coeficiente de √2.
        """
        if isinstance(p, float) or isinstance(q, float):
            raise TypeError("RaizDos solo admite partes racionales exactas")
        self._p = Fraction(p)
        self._q = Fraction(q)

    @property
    def p(self) -> Fraction:
        return self._p

    @property
    def q(self) -> Fraction:
        return self._q

    @classmethod
    def desde(cls, valor) -> Optional["RaizDos"]:
        """Convierte enteros, fracciones o RaizDos; None para cualquier otra cosa."""
        if isinstance(valor, RaizDos):
            return valor
        if isinstance(valor, numbers.Rational):
            return cls(Fraction(int(valor.numerator), int(valor.denominator)))
        return None

    # ---- aritmética ----

    def __add__(self, otro):
        o = RaizDos.desde(otro)
        if o is None:
            if isinstance(otro, numbers.Real):
                return float(self) + float(otro)
            if isinstance(otro, numbers.Complex):
                return complex(self) + complex(otro)
            return NotImplemented
        return RaizDos(self._p + o._p, self._q + o._q)

    def __radd__(self, otro):
        return self.__add__(otro)

    def __neg__(self) -> "RaizDos":
        return RaizDos(-self._p, -self._q)

    def __pos__(self) -> "RaizDos":
        return self

    def __sub__(self, otro):
        return self.__add__(-otro)

    def __rsub__(self, otro):
        return (-self).__add__(otro)

    def __mul__(self, otro):
        o = RaizDos.desde(otro)
        if o is None:
            if isinstance(otro, numbers.Real):
                return float(self) * float(otro)
            if isinstance(otro, numbers.Complex):
                return complex(self) * complex(otro)
            return NotImplemented
        return RaizDos(
            self._p * o._p + 2 * self._q * o._q,
            self._p * o._q + self._q * o._p,
        )

    def __rmul__(self, otro):
        return self.__mul__(otro)

    def norma(self) -> Fraction:
        """Norma de Q(√2)/Q: p² − 2q²."""
        return self._p * self._p - 2 * self._q * self._q

    def conj_sq2(self) -> "RaizDos":
        """Conjugado de Galois p − q√2."""
        return RaizDos(self._p, -self._q)

    def inv(self) -> "RaizDos":
        n = self.norma()
        if n == 0:
            raise ZeroDivisionError("inverso de cero en Q(√2)")
        return RaizDos(self._p / n, -self._q / n)

    def __truediv__(self, otro):
        o = RaizDos.desde(otro)
        if o is None:
            if isinstance(otro, numbers.Real):
                return float(self) / float(otro)
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, otro):
        o = RaizDos.desde(otro)
        if o is None:
            if isinstance(otro, numbers.Real):
                return float(otro) / float(self)
            return NotImplemented
        return o * self.inv()

    def __pow__(self, exponente: int) -> "RaizDos":
        if not isinstance(exponente, int):
            return NotImplemented
        base = self if exponente >= 0 else self.inv()
        resultado = RaizDos(1)
        for _ in range(abs(exponente)):
            resultado = resultado * base
        return resultado

    def sqrt(self) -> Optional["RaizDos"]:
        """
        Raíz cuadrada positiva dentro de Q(√2), si existe.

        Returns:
            RaizDos | None: x + y√2 con (x + y√2)² = self, o None.
        """
        if self.signo() < 0:
            return None
        if not self:
            return RaizDos(0)
        p, q = self._p, self._q
        # x² + 2y² = p, 2xy = q
        discriminante = _raiz_racional(p * p - 2 * q * q)
        if discriminante is None:
            return None
        for x2 in ((p + discriminante) / 2, (p - discriminante) / 2):
            if x2 < 0:
                continue
            x = _raiz_racional(x2)
            if x is None:
                continue
            if x == 0:
                y = _raiz_racional(p / 2)
                if y is None:
                    continue
            else:
                y = q / (2 * x)
            candidato = RaizDos(x, y)
            if candidato * candidato == self:
                return abs(candidato)
        return None

    # ---- comparación ----

    def signo(self) -> int:
        """Signo exacto de p + q√2."""
        sp, sq = _signo_racional(self._p), _signo_racional(self._q)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        diferencia = self._p * self._p - 2 * self._q * self._q
        return sp * _signo_racional(diferencia)

    def __eq__(self, otro) -> bool:
        o = RaizDos.desde(otro)
        if o is None:
            if isinstance(otro, numbers.Real):
                return float(self) == float(otro)
            return NotImplemented
        return self._p == o._p and self._q == o._q

    def __hash__(self) -> int:
        if self._q == 0:
            return hash(self._p)
        return hash((self._p, self._q))

    def __lt__(self, otro) -> bool:
        diferencia = self - otro
        if isinstance(diferencia, RaizDos):
            return diferencia.signo() < 0
        return diferencia < 0

    def __le__(self, otro) -> bool:
        return self < otro or self == otro

    def __gt__(self, otro) -> bool:
        diferencia = self - otro
        if isinstance(diferencia, RaizDos):
            return diferencia.signo() > 0
        return diferencia > 0

    def __ge__(self, otro) -> bool:
        return self > otro or self == otro

    def __abs__(self) -> "RaizDos":
        return -self if self.signo() < 0 else self

    def __bool__(self) -> bool:
        return self._p != 0 or self._q != 0

    # ---- conversiones ----

    def __float__(self) -> float:
        return float(self._p) + float(self._q) * math.sqrt(2.0)

    def __complex__(self) -> complex:
        return complex(float(self))

    def es_racional(self) -> bool:
        return self._q == 0

    def to_dict(self) -> dict:
        """Codificación JSON exacta {"p": [num, den], "q": [num, den]}."""
        return {
            "p": [self._p.numerator, self._p.denominator],
            "q": [self._q.numerator, self._q.denominator],
        }

    @staticmethod
    def from_dict(data: dict) -> "RaizDos":
        """Crea el número desde su codificación JSON."""
        p = data.get("p", [0, 1])
        q = data.get("q", [0, 1])
        return RaizDos(Fraction(p[0], p[1]), Fraction(q[0], q[1]))

    @staticmethod
    def parse(texto: str) -> "RaizDos":
        """
        Lee literales como "1/4", "-2", "sqrt2", "1/2*sqrt2", "1+sqrt2" o "3/2√2".

        Args:
            texto (str): Literal racional o racional+√2.

        Returns:
            RaizDos: El número leído.
        """
        limpio = texto.strip().replace(" ", "").replace("√2", "*sqrt2").replace("**sqrt2", "*sqrt2")
        if not limpio:
            raise ValueError("literal vacío")
        # separa en términos conservando el signo
        terminos = re.findall(r"[+-]?[^+-]+", limpio)
        p, q = Fraction(0), Fraction(0)
        for termino in terminos:
            if "sqrt2" in termino:
                coef = termino.replace("sqrt2", "").rstrip("*")
                if coef in ("", "+"):
                    q += 1
                elif coef == "-":
                    q -= 1
                else:
                    q += Fraction(coef)
            else:
                p += Fraction(termino)
        return RaizDos(p, q)

    def __repr__(self) -> str:
        return f"RaizDos({self._p}, {self._q})"

    def __str__(self) -> str:
        if self._q == 0:
            return str(self._p)
        raiz = "√2" if self._q == 1 else "-√2" if self._q == -1 else f"{self._q}√2"
        if self._p == 0:
            return raiz
        signo = "+" if self._q > 0 else "-"
        raiz_abs = "√2" if abs(self._q) == 1 else f"{abs(self._q)}√2"
        return f"{self._p} {signo} {raiz_abs}"


SQRT2 = RaizDos(0, 1)
INV_SQRT2 = RaizDos(0, Fraction(1, 2))


def exacto(valor) -> RaizDos:
    """Constante exacta desde int, Fraction, str o RaizDos."""
    if isinstance(valor, str):
        return RaizDos.parse(valor)
    convertido = RaizDos.desde(valor)
    if convertido is None:
        raise TypeError(f"No se puede representar {valor!r} de forma exacta")
    return convertido


def a_float(arreglo) -> np.ndarray:
    """Convierte un arreglo de objetos (RaizDos, Fraction, int, float) a float64."""
    datos = np.asarray(arreglo)
    if datos.dtype != object:
        return datos.astype(float)
    if datos.size == 0:
        return np.zeros(datos.shape)
    return np.vectorize(float, otypes=[float])(datos)


def es_cero_exacto(arreglo) -> bool:
    """True si todas las entradas son exactamente cero."""
    return all(x == 0 for x in np.asarray(arreglo, dtype=object).flat)


def norma_max(arreglo) -> float:
    """Máximo valor absoluto de un arreglo (exacto o float), como float."""
    valores = a_float(arreglo)
    return float(np.max(np.abs(valores))) if valores.size else 0.0


def segun_modo(valor, exacto: bool):
    """La constante tal cual en modo exacto; como float en modo numérico."""
    if exacto:
        return exacto_o_float(valor)
    return float(valor)


def exacto_o_float(valor):
    """RaizDos si el valor admite representación exacta; si no, el float."""
    if isinstance(valor, float):
        return valor
    return exacto(valor)


def ceros(forma, exacto: bool) -> np.ndarray:
    """Arreglo de ceros: enteros de Python en modo exacto, float64 si no."""
    return np.zeros(forma, dtype=object if exacto else float)


def identidad(n: int, exacto: bool) -> np.ndarray:
    """Matriz identidad con enteros de Python en modo exacto."""
    if exacto:
        matriz = np.zeros((n, n), dtype=object)
        for k in range(n):
            matriz[k, k] = 1
        return matriz
    return np.eye(n)
