"""
Errores del kit de verificación.

Todos heredan de ValueError: los servicios los lanzan y solo main.py
los traduce a códigos de salida.
"""


class ErrorPlebanski(ValueError):
    """Error base de todas las comprobaciones."""


class SingularMatrix(ErrorPlebanski):
    """La matriz de GL(4) no es invertible dentro de la tolerancia."""


class OrientationError(ErrorPlebanski):
    """La matriz invierte la orientación (det < 0)."""


class NotPerfect(ErrorPlebanski):
    """La matriz de Gram de Σⁱ∧Σʲ no es proporcional a la identidad."""


class NotRiemannian(ErrorPlebanski):
    """La métrica recuperada no es definida positiva, o v_Σ <= 0."""


class NotInS(ErrorPlebanski):
    """La 2-forma tiene componente en el canal S₊⁴."""


class NotExact(ErrorPlebanski):
    """La sucesión de símbolos no es exacta en el covector pedido."""

    def __init__(self, mensaje: str, diagnostico: dict = None):
        super().__init__(mensaje)
        self.diagnostico = diagnostico or {}


class DegenerateK(ErrorPlebanski):
    """Covector nulo o demasiado pequeño."""


class SingularGram(ErrorPlebanski):
    """Una forma de Gram no se puede invertir."""


class DegenerateFamily(ErrorPlebanski):
    """Los coeficientes caen en un denominador excluido del solver."""


class SingularPairing(ErrorPlebanski):
    """El sistema 2×2 de c′ es singular para ese producto interno."""


class SplitFailure(ErrorPlebanski):
    """T₂D̃T₁ no se separa en bloques."""

    def __init__(self, mensaje: str, bloque: str = "", norma: float = 0.0):
        super().__init__(mensaje)
        self.bloque = bloque
        self.norma = norma


class FiberMismatch(ErrorPlebanski):
    """Las dimensiones de fibra no coinciden."""
