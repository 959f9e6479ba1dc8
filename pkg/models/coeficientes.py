from fractions import Fraction

from models.raiz_dos import RaizDos, exacto_o_float


def _codificar(valor):
    if isinstance(valor, RaizDos):
        return valor.to_dict()
    return float(valor)


def _decodificar(valor):
    if isinstance(valor, dict):
        return RaizDos.from_dict(valor)
    if isinstance(valor, str):
        return RaizDos.parse(valor)
    return valor


class _ConjuntoCoeficientes:
    """Base de los conjuntos de constantes con nombre fijo."""

    CAMPOS: tuple = ()

    def __init__(self, **valores):
        for campo in self.CAMPOS:
            setattr(self, campo, exacto_o_float(valores.get(campo, 0)))

    def valores(self) -> dict:
        return {campo: getattr(self, campo) for campo in self.CAMPOS}

    def reemplazar(self, **cambios):
        datos = self.valores()
        datos.update(cambios)
        return type(self)(**datos)

    def to_dict(self) -> dict:
        return {campo: _codificar(valor) for campo, valor in self.valores().items()}

    @classmethod
    def from_dict(cls, data: dict):
        return cls(**{campo: _decodificar(data[campo]) for campo in cls.CAMPOS if campo in data})

    def __eq__(self, otro) -> bool:
        return type(self) is type(otro) and self.valores() == otro.valores()

    def __repr__(self) -> str:
        cuerpo = ", ".join(f"{c}={v}" for c, v in self.valores().items())
        return f"{type(self).__name__}({cuerpo})"


class CoefficientSet(_ConjuntoCoeficientes):
    """Constantes a₁..a₃ de d₁, b₁..b₅ de d₂, c₁, c₂ de d₃ y f de d̃₄."""

    CAMPOS = ("a1", "a2", "a3", "b1", "b2", "b3", "b4", "b5", "c1", "c2", "f")

    @property
    def a(self) -> tuple:
        return (self.a1, self.a2, self.a3)

    @property
    def b(self) -> tuple:
        return (self.b1, self.b2, self.b3, self.b4, self.b5)

    @property
    def c(self) -> tuple:
        return (self.c1, self.c2)

    @staticmethod
    def plebanski() -> "CoefficientSet":
        """Operadores del complejo de Plebański."""
        return CoefficientSet(
            a1=1, a2=Fraction(1, 4), a3=Fraction(1, 2),
            b1=Fraction(1, 4), b2=2, b3=0, b4=0, b5=-1,
            c1=0, c2=1, f=0,
        )


class AdjointCoefficientSet(_ConjuntoCoeficientes):
    """Constantes a₁′..a₃′, b₁′..b₅′, c₁′, c₂′ y f′ de los adjuntos."""

    CAMPOS = ("a1p", "a2p", "a3p", "b1p", "b2p", "b3p", "b4p", "b5p", "c1p", "c2p", "fp")

    @property
    def a(self) -> tuple:
        return (self.a1p, self.a2p, self.a3p)

    @property
    def b(self) -> tuple:
        return (self.b1p, self.b2p, self.b3p, self.b4p, self.b5p)

    @property
    def c(self) -> tuple:
        return (self.c1p, self.c2p)

    @staticmethod
    def plebanski() -> "AdjointCoefficientSet":
        """Adjuntos de los operadores de Plebański con ⟨σ,σ⟩ = (1/4)h² + 8(hⁱ)² + (h̃)² y ⟨a,a⟩ = −(a, J₁a)."""
        return AdjointCoefficientSet(
            a1p=Fraction(-1, 4), a2p=2, a3p=-1,
            b1p=-2, b2p=0, b3p=Fraction(1, 4), b4p=Fraction(1, 2), b5p=Fraction(-1, 2),
            c1p=1, c2p=0, fp=0,
        )


class InnerProductSet(_ConjuntoCoeficientes):
    """
    Pesos de los productos internos.

    ⟨σ,σ⟩ = ∫ β₁h² + β₂(hⁱ)² + β₃(h̃)²,  ⟨a,a⟩ = ∫ γ₁(aⁱ_μ)² + γ₂ εⁱʲᵏΣ^{iμν}aʲ_μaᵏ_ν
    """

    CAMPOS = ("beta1", "beta2", "beta3", "gamma1", "gamma2")

    @property
    def beta(self) -> tuple:
        return (self.beta1, self.beta2, self.beta3)

    @property
    def gamma(self) -> tuple:
        return (self.gamma1, self.gamma2)

    @staticmethod
    def plebanski() -> "InnerProductSet":
        """Productos con J₁ en E⊗Λ¹ (γ₁ = 0, γ₂ = 1)."""
        return InnerProductSet(beta1=Fraction(1, 4), beta2=8, beta3=1, gamma1=0, gamma2=1)

    @staticmethod
    def euclideo() -> "InnerProductSet":
        """Productos con ⟨a,a⟩ = ∫(aⁱ_μ)², los que hacen D*D ∼ Δ."""
        return InnerProductSet(beta1=Fraction(1, 4), beta2=8, beta3=1, gamma1=1, gamma2=0)
