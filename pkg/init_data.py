#!/usr/bin/env python3
"""
Script de inicialización de fixtures para la verificación
Escribe tripletas perfectas, conjuntos de coeficientes y un campo de red de ejemplo en data/
"""

import json
import sys
from pathlib import Path

import numpy as np
from colorama import Fore, Style, init

from models.coeficientes import AdjointCoefficientSet, CoefficientSet, InnerProductSet
from models.errores import ErrorPlebanski
from services.reticulo_service import ReticuloService
from services.sigma_service import SigmaService

DATA_DIR = Path(__file__).resolve().parent / "data"

init()


# Colores para la consola
class Colors:
    GREEN = Fore.GREEN
    RED = Fore.RED
    BLUE = Fore.BLUE
    CYAN = Fore.CYAN
    END = Style.RESET_ALL
    BOLD = Style.BRIGHT


def print_success(msg):
    print(f"{Colors.GREEN}✓{Colors.END} {msg}")


def print_error(msg):
    print(f"{Colors.RED}✗{Colors.END} {msg}")


def print_info(msg):
    print(f"{Colors.BLUE}ℹ{Colors.END} {msg}")


def print_section(msg):
    print(f"\n{Colors.BOLD}{Colors.CYAN}{'='*60}{Colors.END}")
    print(f"{Colors.BOLD}{Colors.CYAN}{msg}{Colors.END}")
    print(f"{Colors.BOLD}{Colors.CYAN}{'='*60}{Colors.END}\n")


# Matrices GL(4) de los pullbacks de ejemplo
PULLBACKS = {
    "triple_diagonal.json": np.diag([1.0, 2.0, 0.5, 1.5]),
    "triple_cizalla.json": np.array([
        [1.0, 0.3, 0.0, 0.0],
        [0.0, 1.0, -0.2, 0.0],
        [0.1, 0.0, 1.0, 0.4],
        [0.0, 0.0, 0.0, 1.0],
    ]),
}

COEFICIENTES = {
    "coeficientes_plebanski.json": CoefficientSet.plebanski(),
    "adjuntos_plebanski.json": AdjointCoefficientSet.plebanski(),
    "productos_plebanski.json": InnerProductSet.plebanski(),
    "productos_euclideos.json": InnerProductSet.euclideo(),
}


def escribir_json(nombre: str, datos: dict) -> None:
    (DATA_DIR / nombre).write_text(json.dumps(datos, indent=2), encoding="utf-8")


def crear_tripletas(sigma_service: SigmaService) -> int:
    """Escribe la tripleta estándar y los pullbacks; devuelve cuántas se escribieron."""
    print_section("TRIPLETAS PERFECTAS")
    escritas = 0
    estandar = sigma_service.standard_triple(exacto=False)
    sigma_service.guardar_triple(estandar, DATA_DIR / "triple_estandar.json")
    print_success("Tripleta estándar autodual (g = 𝟙, v_Σ = 1)")
    escritas += 1
    for nombre, matriz in PULLBACKS.items():
        try:
            triple = sigma_service.gl4_pullback(estandar, matriz)
        except ErrorPlebanski as exc:
            print_error(f"{nombre}: {exc}")
            continue
        sigma_service.guardar_triple(triple, DATA_DIR / nombre)
        residuo = max(sigma_service.identity_residuals(triple)[clave] for clave in ("perfeccion", "algebra", "traza"))
        print_success(f"{nombre} (v = {float(triple.volume):.4g}, residuo {residuo:.1e})")
        escritas += 1
    return escritas


def crear_coeficientes() -> None:
    print_section("CONJUNTOS DE COEFICIENTES")
    for nombre, conjunto in COEFICIENTES.items():
        escribir_json(nombre, conjunto.to_dict())
        print_success(f"{nombre}: {conjunto}")


def crear_campo(n: int = 8, seed: int = 0) -> None:
    print_section("CAMPO DE RED")
    reticulo_service = ReticuloService(n)
    campo = reticulo_service.random_field(16, seed)
    reticulo_service.export_field(campo, DATA_DIR / "campo_s_e.plbk")
    print_success(f"Campo de S⊕E con N={n}, seed={seed}")


def main():
    print_section("INICIALIZACIÓN DE FIXTURES")
    DATA_DIR.mkdir(exist_ok=True)
    print_info(f"Directorio de datos: {DATA_DIR}")

    sigma_service = SigmaService()
    escritas = crear_tripletas(sigma_service)
    crear_coeficientes()
    crear_campo()

    print_section("RESUMEN")
    print_success(f"Tripletas escritas: {escritas}/{len(PULLBACKS) + 1}")
    print_info("Verificar con: python3 main.py verify algebra --triple data/triple_cizalla.json")
    if escritas < len(PULLBACKS) + 1:
        sys.exit(1)


if __name__ == "__main__":
    main()
