from fractions import Fraction
from itertools import permutations
from typing import Optional

import numpy as np


def _signo_permutacion(perm) -> int:
    """Paridad de una permutación de 0..n-1."""
    signo = 1
    vista = list(perm)
    for i in range(len(vista)):
        while vista[i] != i:
            j = vista[i]
            vista[i], vista[j] = vista[j], vista[i]
            signo = -signo
    return signo


def _levi_civita(n: int) -> np.ndarray:
    tensor = np.zeros((n,) * n, dtype=object)
    for perm in permutations(range(n)):
        tensor[perm] = _signo_permutacion(perm)
    return tensor


# ε^{ijk} y ε̃^{μνρσ} con entradas enteras de Python (sirven en modo exacto y float)
EPS3 = _levi_civita(3)
EPS4 = _levi_civita(4)


class PerfectTriple:
    """
    Tripleta perfecta Σⁱ_{μν} sobre R⁴ con su métrica, volumen y tensores ε.

    Si `sigma` es un arreglo de objetos (enteros, Fraction o RaizDos) la
    tripleta es exacta y todo lo que se construye a partir de ella también.
    """

    def __init__(self, sigma: np.ndarray, metric: np.ndarray, volume, inv_metric: Optional[np.ndarray] = None):
        """
        Inicializa la tripleta.

        Args:
            sigma (np.ndarray): Arreglo (3, 4, 4) antisimétrico en los dos últimos índices.
            metric (np.ndarray): Métrica g_{μν} (4, 4).
            volume: Volumen v_Σ > 0.
            inv_metric (np.ndarray): g^{μν}; se calcula si no se da.
        """
        self.sigma = sigma
        self.metric = metric
        self.volume = volume
        if inv_metric is None:
            inv_metric = np.linalg.inv(np.asarray(metric, dtype=float))
        self.inv_metric = inv_metric
        self.eps3 = EPS3 if self.exacto else EPS3.astype(float)
        self.eps4_lower = volume * EPS4 if self.exacto else float(volume) * EPS4.astype(float)
        self._copia_float = None

    @property
    def exacto(self) -> bool:
        return self.sigma.dtype == object

    @property
    def eps4_upper(self) -> np.ndarray:
        """ε^{μνρσ} compatible con la métrica (= signo/v_Σ)."""
        if self.exacto:
            return EPS4 * (Fraction(1) / self.volume)
        return EPS4.astype(float) / float(self.volume)

    def sigma_mixto(self) -> np.ndarray:
        """Σⁱ_μ{}^ν."""
        return np.einsum("iab,bc->iac", self.sigma, self.inv_metric)

    def sigma_arriba(self) -> np.ndarray:
        """Σ^{iμν}."""
        return np.einsum("ab,ibc,cd->iad", self.inv_metric, self.sigma, self.inv_metric)

    def a_float(self) -> "PerfectTriple":
        """Copia en punto flotante."""
        if not self.exacto:
            return self
        if self._copia_float is None:
            self._copia_float = PerfectTriple(
                np.asarray(self.sigma.tolist(), dtype=float),
                np.asarray(self.metric.tolist(), dtype=float),
                float(self.volume),
                np.asarray(self.inv_metric.tolist(), dtype=float),
            )
        return self._copia_float

    def to_dict(self) -> dict:
        """Convierte la tripleta a diccionario para JSON."""
        return {
            "sigma": np.asarray(self.sigma.tolist(), dtype=float).tolist(),
            "metric": np.asarray(self.metric.tolist(), dtype=float).tolist(),
            "volume": float(self.volume),
        }

    @staticmethod
    def from_dict(data: dict) -> "PerfectTriple":
        """
        Crea una tripleta desde un diccionario.

        La métrica y el volumen guardados se toman tal cual; SigmaService
        los recalcula cuando se carga un fixture.
        """
        sigma = np.asarray(data["sigma"], dtype=float)
        metric = np.asarray(data.get("metric", np.eye(4).tolist()), dtype=float)
        return PerfectTriple(sigma, metric, float(data.get("volume", 1.0)))

    def __repr__(self) -> str:
        modo = "exacta" if self.exacto else "float"
        return f"PerfectTriple({modo}, v={float(self.volume):.6g})"
