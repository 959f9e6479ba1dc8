import struct
from pathlib import Path

import numpy as np

from models.errores import FiberMismatch

MAGIA = b"PLBK"
VERSION = 1
CABECERA = struct.Struct("<4sIII")


class LatticeField:
    """
    Campo periódico sobre el 4-toro de lado 2π.

    `data` tiene forma (fibra, N, N, N, N): la primera dimensión recorre la
    fibra y las cuatro siguientes los sitios de la red.
    """

    def __init__(self, data: np.ndarray, band_limit: bool = True):
        if data.ndim != 5 or len(set(data.shape[1:])) != 1:
            raise FiberMismatch(f"Campo de red con forma inválida {data.shape}")
        self.data = data
        self.band_limit = band_limit

    @property
    def fiber(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    def componentes(self, inicio: int, fin: int) -> "LatticeField":
        return LatticeField(self.data[inicio:fin], self.band_limit)

    def __add__(self, otro: "LatticeField") -> "LatticeField":
        if otro.data.shape != self.data.shape:
            raise FiberMismatch(f"Campos incompatibles {self.data.shape} y {otro.data.shape}")
        return LatticeField(self.data + otro.data, self.band_limit and otro.band_limit)

    def __sub__(self, otro: "LatticeField") -> "LatticeField":
        if otro.data.shape != self.data.shape:
            raise FiberMismatch(f"Campos incompatibles {self.data.shape} y {otro.data.shape}")
        return LatticeField(self.data - otro.data, self.band_limit and otro.band_limit)

    def escalar(self, factor: float) -> "LatticeField":
        return LatticeField(self.data * factor, self.band_limit)

    @staticmethod
    def concatenar(*campos: "LatticeField") -> "LatticeField":
        return LatticeField(
            np.concatenate([c.data for c in campos], axis=0),
            all(c.band_limit for c in campos),
        )

    def export_field(self, path) -> None:
        """
        Escribe el campo en formato binario.

        Cabecera de 16 bytes (magia "PLBK", versión, N, fibra) y luego los
        valores float64 little-endian en orden de sitios row-major, con la
        fibra como índice más rápido.
        """
        cabecera = CABECERA.pack(MAGIA, VERSION, self.n, self.fiber)
        cuerpo = np.ascontiguousarray(np.moveaxis(self.data, 0, -1)).astype("<f8").tobytes()
        Path(path).write_bytes(cabecera + cuerpo)

    @staticmethod
    def import_field(path) -> "LatticeField":
        """Lee un campo escrito por export_field."""
        contenido = Path(path).read_bytes()
        if len(contenido) < CABECERA.size:
            raise FiberMismatch(f"Archivo {path} demasiado corto")
        magia, version, n, fibra = CABECERA.unpack_from(contenido)
        if magia != MAGIA:
            raise FiberMismatch(f"Magia inválida {magia!r} en {path}")
        if version != VERSION:
            raise FiberMismatch(f"Versión {version} no soportada")
        esperado = CABECERA.size + 8 * fibra * n ** 4
        if len(contenido) != esperado:
            raise FiberMismatch(f"Tamaño {len(contenido)} no coincide con N={n}, fibra={fibra}")
        valores = np.frombuffer(contenido, dtype="<f8", offset=CABECERA.size)
        data = np.moveaxis(valores.reshape(n, n, n, n, fibra), -1, 0).astype(float)
        return LatticeField(data)

    def to_dict(self) -> dict:
        return {"fiber": self.fiber, "n": self.n, "band_limit": self.band_limit}

    def __repr__(self) -> str:
        return f"LatticeField(fibra={self.fiber}, N={self.n})"
