from datetime import datetime
from enum import Enum
from typing import List, Optional


class EstadoCheck(str, Enum):
    """Resultado de una comprobación."""
    PASS = "pass"
    FAIL = "fail"
    INFO = "info"


class CheckRecord:
    """Una comprobación individual del informe."""

    def __init__(self, check_id: str, referencia: str, status: EstadoCheck, residual: float,
                 tolerance: Optional[float], seed: Optional[int] = None):
        """
        Inicializa el registro.

        Args:
            check_id (str): Identificador estable de la comprobación.
            referencia (str): Etiqueta de la ecuación o identidad verificada.
            status (EstadoCheck): pass, fail o info.
            residual (float): Residuo medido.
            tolerance (float): Tolerancia aplicada; None en registros informativos.
            seed (int): Semilla de los campos aleatorios, si se usaron.
        """
        self.check_id = check_id
        self.referencia = referencia
        self.status = status
        self.residual = float(residual)
        self.tolerance = tolerance
        self.seed = seed

    @staticmethod
    def comparar(check_id: str, referencia: str, residual: float, tolerance: float,
                 seed: Optional[int] = None) -> "CheckRecord":
        """Registro pass/fail según residual <= tolerance."""
        estado = EstadoCheck.PASS if float(residual) <= tolerance else EstadoCheck.FAIL
        return CheckRecord(check_id, referencia, estado, residual, tolerance, seed)

    @staticmethod
    def afirmar(check_id: str, referencia: str, condicion: bool, residual: float = 0.0,
                seed: Optional[int] = None) -> "CheckRecord":
        """Registro de una condición booleana (rangos, dimensiones, signaturas)."""
        estado = EstadoCheck.PASS if condicion else EstadoCheck.FAIL
        return CheckRecord(check_id, referencia, estado, residual, 0.0, seed)

    @staticmethod
    def informar(check_id: str, referencia: str, valor: float, seed: Optional[int] = None) -> "CheckRecord":
        """Registro informativo que no afecta al código de salida."""
        return CheckRecord(check_id, referencia, EstadoCheck.INFO, valor, None, seed)

    @property
    def ok(self) -> bool:
        return self.status != EstadoCheck.FAIL

    def to_dict(self) -> dict:
        """Esquema estable del informe JSON."""
        return {
            "check_id": self.check_id,
            "paper_ref": self.referencia,
            "status": self.status.value,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "seed": self.seed,
        }

    @staticmethod
    def from_dict(data: dict) -> "CheckRecord":
        return CheckRecord(
            data["check_id"],
            data["paper_ref"],
            EstadoCheck(data["status"]),
            data["residual"],
            data.get("tolerance"),
            data.get("seed"),
        )

    def __repr__(self) -> str:
        return f"CheckRecord({self.check_id!r}, {self.status.value}, {self.residual:.3e})"


class VerificationReport:
    """Informe de una suite de verificación."""

    def __init__(self, suite: str, seed: Optional[int] = None):
        self.suite = suite
        self.seed = seed
        self.records: List[CheckRecord] = []
        self.notas: List[str] = []
        self.fecha = datetime.now()

    def agregar(self, registro: CheckRecord) -> CheckRecord:
        self.records.append(registro)
        return registro

    def extender(self, otro: "VerificationReport") -> None:
        self.records.extend(otro.records)
        self.notas.extend(otro.notas)

    def nota(self, texto: str) -> None:
        self.notas.append(texto)

    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def fallidos(self) -> List[CheckRecord]:
        return [r for r in self.records if not r.ok]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "fecha": self.fecha.isoformat(),
            "pass": self.ok(),
            "records": [r.to_dict() for r in self.records],
            "notas": list(self.notas),
        }

    def __repr__(self) -> str:
        return f"VerificationReport({self.suite!r}, {len(self.records)} registros, ok={self.ok()})"
