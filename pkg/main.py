"""
CLI de verificación del complejo de Plebański sobre el 4-toro plano
"""
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Literal, Optional

import click
from colorama import Fore, Style, init as colorama_init
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from models.coeficientes import CoefficientSet, InnerProductSet
from models.errores import ErrorPlebanski
from models.raiz_dos import RaizDos
from models.reporte import EstadoCheck, VerificationReport
from services.coeficientes_service import CoeficientesService
from services.formas_service import FormasService
from services.operadores_service import OperadoresService
from services.reticulo_service import ReticuloService
from services.sigma_service import SigmaService
from services.simbolo_service import SimboloService
from services.twisted_service import TwistedService
from services.verificacion_service import SUITES, VerificacionService

LOGGER = logging.getLogger(__name__)

load_dotenv()
colorama_init()

NIVELES = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


# ========== SCHEMAS PYDANTIC ==========

class ConfiguracionVerificacion(BaseModel):
    """Configuración de una corrida: flags > .env > valores por defecto."""
    n: int = Field(default=8, ge=4)
    seed: int = Field(default=0, ge=0)
    tol: Optional[float] = Field(default=None, gt=0)
    threads: int = Field(default=1, ge=1)
    samples: int = Field(default=1000, ge=1)
    log_level: str = Field(default="WARNING")

    @field_validator("n")
    @classmethod
    def n_par(cls, valor: int) -> int:
        if valor % 2:
            raise ValueError(f"el tamaño de red debe ser par, recibido {valor}")
        return valor

    @field_validator("log_level")
    @classmethod
    def nivel_valido(cls, valor: str) -> str:
        valor = valor.upper()
        if valor not in NIVELES:
            raise ValueError(f"nivel de log desconocido '{valor}'")
        return valor


class RegistroCheckSchema(BaseModel):
    """Schema de un registro del informe JSON."""
    check_id: str
    paper_ref: str
    status: Literal["pass", "fail", "info"]
    residual: float
    tolerance: Optional[float] = None
    seed: Optional[int] = None


class InformeSchema(BaseModel):
    """Schema del informe completo."""
    model_config = ConfigDict(populate_by_name=True)

    suite: str
    seed: Optional[int] = None
    fecha: str
    aprobado: bool = Field(alias="pass")
    records: List[RegistroCheckSchema]
    notas: List[str] = []


# ========== CONFIGURACIÓN ==========

ENTORNO = {
    "n": "PLEBANSKI_N",
    "seed": "PLEBANSKI_SEED",
    "tol": "PLEBANSKI_TOL",
    "threads": "PLEBANSKI_THREADS",
    "samples": "PLEBANSKI_SAMPLES",
    "log_level": "PLEBANSKI_LOG_LEVEL",
}


def cargar_configuracion(**flags) -> ConfiguracionVerificacion:
    """
    Combina las variables PLEBANSKI_* del entorno con los flags explícitos.

    Raises:
        ValidationError: Si algún valor no cumple las restricciones.
    """
    datos = {}
    for campo, variable in ENTORNO.items():
        valor = os.getenv(variable)
        if valor not in (None, ""):
            datos[campo] = valor
    datos.update({campo: valor for campo, valor in flags.items() if valor is not None})
    return ConfiguracionVerificacion(**datos)


def configurar_logging(nivel: str) -> None:
    logging.basicConfig(
        level=getattr(logging, nivel.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def construir_servicios(config: ConfiguracionVerificacion) -> VerificacionService:
    """Inicializa los servicios y los conecta por constructor."""
    sigma_service = SigmaService()
    formas_service = FormasService(sigma_service)
    operadores_service = OperadoresService(formas_service)
    simbolo_service = SimboloService(operadores_service)
    coeficientes_service = CoeficientesService(operadores_service)
    reticulo_service = ReticuloService(config.n, config.threads)
    twisted_service = TwistedService(operadores_service, simbolo_service)
    return VerificacionService(
        sigma_service, formas_service, operadores_service, simbolo_service,
        coeficientes_service, reticulo_service, twisted_service,
        tol=config.tol, samples=config.samples,
    )


# ========== SALIDA POR CONSOLA ==========

def print_success(msg):
    click.echo(f"{Fore.GREEN}✓{Style.RESET_ALL} {msg}")


def print_error(msg):
    click.echo(f"{Fore.RED}✗{Style.RESET_ALL} {msg}")


def print_info(msg):
    click.echo(f"{Fore.BLUE}ℹ{Style.RESET_ALL} {msg}")


def print_section(msg):
    click.echo(f"\n{Style.BRIGHT}{Fore.CYAN}{'=' * 60}{Style.RESET_ALL}")
    click.echo(f"{Style.BRIGHT}{Fore.CYAN}{msg}{Style.RESET_ALL}")
    click.echo(f"{Style.BRIGHT}{Fore.CYAN}{'=' * 60}{Style.RESET_ALL}\n")


def mostrar_informe(reporte: VerificationReport) -> None:
    print_section(f"Suite {reporte.suite} (seed={reporte.seed})")
    for registro in reporte.records:
        texto = f"{registro.check_id}: residuo {registro.residual:.3e}  [{registro.referencia}]"
        if registro.status == EstadoCheck.PASS:
            print_success(texto)
        elif registro.status == EstadoCheck.FAIL:
            print_error(f"{texto} > {registro.tolerance:.1e}")
        else:
            print_info(texto)
    for nota in reporte.notas:
        print_info(nota)
    total = len(reporte.records)
    fallidos = len(reporte.fallidos())
    resumen = f"{total - fallidos}/{total} comprobaciones sin fallo"
    if fallidos:
        print_error(resumen)
    else:
        print_success(resumen)


def informe_json(reporte: VerificationReport) -> dict:
    """Valida el informe contra los schemas antes de escribirlo."""
    return InformeSchema.model_validate(reporte.to_dict()).model_dump(by_alias=True)


# ========== LECTURA DE LITERALES ==========

def leer_literales(texto: str, cantidad: int, nombre: str) -> List[RaizDos]:
    """
    Lee una lista separada por comas de literales racionales o racional+√2.

    Raises:
        click.BadParameter: Si algún literal no se puede leer o la cantidad no es la esperada.
    """
    try:
        valores = [RaizDos.parse(parte) for parte in texto.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"'{texto}' no es una lista de literales válida: {exc}", param_hint=nombre)
    if len(valores) != cantidad:
        raise click.BadParameter(f"se esperaban {cantidad} valores, se recibieron {len(valores)}", param_hint=nombre)
    return valores


def formatear(valores) -> str:
    return ", ".join(str(v) for v in valores)


# ========== COMANDOS ==========

@click.group()
@click.option("--log-level", default=None, help="Nivel de logging (por defecto PLEBANSKI_LOG_LEVEL o WARNING).")
@click.pass_context
def cli(ctx, log_level):
    """Verificación numérica y exacta del complejo de Plebański."""
    ctx.ensure_object(dict)
    nivel = (log_level or os.getenv("PLEBANSKI_LOG_LEVEL") or "WARNING").upper()
    if nivel not in NIVELES:
        raise click.BadParameter(f"nivel de log desconocido '{nivel}'", param_hint="--log-level")
    ctx.obj["log_level"] = nivel
    configurar_logging(nivel)


@cli.command()
@click.argument("suite", type=click.Choice(SUITES + ("all",)))
@click.option("--n", type=int, default=None, help="Sitios por dirección de la red (par, >= 4).")
@click.option("--seed", type=int, default=None, help="Semilla de los campos y covectores aleatorios.")
@click.option("--tol", type=float, default=None, help="Reemplaza las tolerancias por defecto.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Escribe el informe JSON en esta ruta.")
@click.option("--triple", "triple_path", type=click.Path(dir_okay=False), default=None,
              help="Fixture JSON de una tripleta perfecta (suites algebra, decompose y ellipticity).")
@click.option("--threads", type=int, default=None, help="Hilos de scipy.fft.")
@click.option("--samples", type=int, default=None, help="Covectores por barrido de exactitud.")
@click.pass_context
def verify(ctx, suite, n, seed, tol, out, triple_path, threads, samples):
    """Corre una suite de verificación (o todas) y resume sus comprobaciones."""
    try:
        config = cargar_configuracion(n=n, seed=seed, tol=tol, threads=threads, samples=samples,
                                      log_level=ctx.obj.get("log_level"))
    except ValidationError as exc:
        print_error(f"Configuración inválida: {exc}")
        sys.exit(2)

    verificacion = construir_servicios(config)
    triple = None
    if triple_path:
        try:
            triple = verificacion.sigma.cargar_triple(triple_path)
        except (OSError, json.JSONDecodeError, KeyError, ErrorPlebanski) as exc:
            print_error(f"No se pudo cargar la tripleta {triple_path}: {exc}")
            sys.exit(2)

    LOGGER.info("verify %s con %s", suite, config.model_dump())
    try:
        reporte = verificacion.verificar(suite, config.seed, triple)
    except ErrorPlebanski as exc:
        print_error(f"{type(exc).__name__}: {exc}")
        sys.exit(1)

    mostrar_informe(reporte)
    if out:
        Path(out).write_text(json.dumps(informe_json(reporte), indent=2, ensure_ascii=False), encoding="utf-8")
        print_info(f"Informe escrito en {out}")
    if not reporte.ok():
        for registro in reporte.fallidos():
            print_error(f"Falló {registro.check_id} [{registro.referencia}]")
        sys.exit(1)


@cli.command()
@click.argument("what", type=click.Choice(["b-coeffs", "inner-products", "adjoints"]))
@click.option("--a", "a_texto", default="1,1/4,1/2", show_default=True, help="a₁, a₂, a₃ de d₁.")
@click.option("--c", "c_texto", default="0,1", show_default=True, help="c₁, c₂ de d₃.")
@click.option("--b1", "b1_texto", default="1/4", show_default=True, help="b₁ de d₂.")
@click.option("--gamma", "gamma_texto", default=None, help="γ₁, γ₂ de ⟨a,a⟩.")
@click.option("--beta", "beta_texto", default="1/4,8,1", show_default=True, help="β₁, β₂, β₃ de ⟨σ,σ⟩ (adjoints).")
@click.option("--pleb", is_flag=True, help="Usa los coeficientes de Plebański.")
def solve(what, a_texto, c_texto, b1_texto, gamma_texto, beta_texto, pleb):
    """Resuelve b, los pesos de los productos internos o los adjuntos, en forma exacta."""
    a = leer_literales(a_texto, 3, "--a")
    c = leer_literales(c_texto, 2, "--c")
    (b1,) = leer_literales(b1_texto, 1, "--b1")
    sigma_service = SigmaService()
    operadores_service = OperadoresService(FormasService(sigma_service))
    coeficientes_service = CoeficientesService(operadores_service)

    try:
        if pleb:
            familia = CoefficientSet.plebanski()
        else:
            b2, b3, b4, b5 = coeficientes_service.solve_b(*a, *c, b1)
            familia = CoefficientSet(a1=a[0], a2=a[1], a3=a[2], b1=b1, b2=b2, b3=b3, b4=b4, b5=b5, c1=c[0], c2=c[1])
        r1, r2 = coeficientes_service.composition_residuals(familia)
        if any(r != 0 for r in r1 + r2):
            print_error(f"Los residuos de composición no se anulan: {r1}, {r2}")
            sys.exit(1)

        if what == "b-coeffs":
            print_success("d₂d₁ = 0 y d₃d₂ = 0 verificados")
            click.echo(f"b = {formatear(familia.b)}")
        elif what == "inner-products":
            g1, g2 = leer_literales(gamma_texto or "1,0", 2, "--gamma")
            ip = coeficientes_service.solve_inner_products(familia, g1, g2)
            _, multiplicadores = coeficientes_service.delta_conditions(
                familia, coeficientes_service.adjoint_from_inner(familia, ip))
            print_success("Condiciones D*D ∼ Δ verificadas")
            click.echo(f"β = ({formatear(ip.beta)}), γ = ({formatear(ip.gamma)})")
            click.echo(f"multiplicadores (h, hⁱ, h̃, χ) = ({formatear(multiplicadores)})")
        else:
            g1, g2 = leer_literales(gamma_texto or "0,1", 2, "--gamma")
            b_1, b_2, b_3 = leer_literales(beta_texto, 3, "--beta")
            ip = InnerProductSet(beta1=b_1, beta2=b_2, beta3=b_3, gamma1=g1, gamma2=g2)
            primas = coeficientes_service.adjoint_from_inner(familia, ip)
            oraculo = coeficientes_service.adjoint_oracle(sigma_service.standard_triple(), familia, ip)
            if max(oraculo.values()) > 1e-12:
                print_error(f"Los adjuntos no coinciden con los formales: {oraculo}")
                sys.exit(1)
            print_success("Adjuntos comparados con los adjuntos formales de los stencils")
            click.echo(f"a′ = {formatear(primas.a)}")
            click.echo(f"b′ = {formatear(primas.b)}")
            click.echo(f"c′ = {formatear(primas.c)}")
    except ErrorPlebanski as exc:
        print_error(f"{type(exc).__name__}: {exc}")
        sys.exit(1)


@cli.command("export-field")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--fiber", type=int, default=16, show_default=True, help="Dimensión de la fibra.")
@click.option("--n", type=int, default=None, help="Sitios por dirección de la red.")
@click.option("--seed", type=int, default=None, help="Semilla del campo.")
def export_field(path, fiber, n, seed):
    """Escribe un campo aleatorio limitado en banda en el formato binario."""
    try:
        config = cargar_configuracion(n=n, seed=seed)
    except ValidationError as exc:
        print_error(f"Configuración inválida: {exc}")
        sys.exit(2)
    if fiber < 1:
        print_error(f"La fibra debe ser positiva, recibida {fiber}")
        sys.exit(2)
    reticulo_service = ReticuloService(config.n, config.threads)
    campo = reticulo_service.random_field(fiber, config.seed)
    reticulo_service.export_field(campo, path)
    print_success(f"Campo de fibra {fiber} en N={config.n} escrito en {path}")


if __name__ == "__main__":
    cli()
