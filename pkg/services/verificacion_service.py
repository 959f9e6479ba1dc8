import logging
from fractions import Fraction
from typing import Callable, Dict, Optional

import numpy as np

from models.coeficientes import AdjointCoefficientSet, CoefficientSet, InnerProductSet
from models.errores import DegenerateFamily, ErrorPlebanski, NotExact, NotInS, SplitFailure
from models.formas import ETwoForm, SElement
from models.raiz_dos import SQRT2, INV_SQRT2, a_float, es_cero_exacto, identidad, norma_max
from models.reporte import CheckRecord, VerificationReport
from models.triple import PerfectTriple
from services.coeficientes_service import CoeficientesService
from services.formas_service import CANALES, FormasService
from services.operadores_service import OperadoresService
from services.reticulo_service import ReticuloService
from services.sigma_service import SigmaService
from services.simbolo_service import SimboloService
from services.twisted_service import TwistedService

LOGGER = logging.getLogger(__name__)

SUITES = ("algebra", "decompose", "ellipticity", "complex", "einstein", "coefficients", "twisted", "split")
SUITES_CON_TRIPLETA = ("algebra", "decompose", "ellipticity")

TOL_EXACTA = 1e-12
TOL_ALGEBRA = 1e-9
TOL_RETICULO = 1e-10
TOL_SIMBOLO = 1e-12


class VerificacionService:
    """
    Orquesta las suites de verificación y arma los informes.

    Cada suite devuelve un VerificationReport con un CheckRecord por
    identidad; los registros informativos no afectan al resultado.
    """

    def __init__(self, sigma: SigmaService, formas: FormasService, operadores: OperadoresService,
                 simbolo: SimboloService, coeficientes: CoeficientesService, reticulo: ReticuloService,
                 twisted: TwistedService, tol: Optional[float] = None, samples: int = 1000,
                 pullbacks: int = 20, trials: int = 50):
        """
        Inicializa el servicio.

        Args:
            sigma (SigmaService): Servicio de tripletas.
            formas (FormasService): Servicio de formas.
            operadores (OperadoresService): Servicio de operadores.
            simbolo (SimboloService): Servicio de símbolos.
            coeficientes (CoeficientesService): Servicio de la familia general.
            reticulo (ReticuloService): Red sobre la que se evalúan los campos.
            twisted (TwistedService): Servicio del operador torcido.
            tol (float): Si se da, reemplaza todas las tolerancias por defecto.
            samples (int): Covectores aleatorios por barrido de exactitud.
            pullbacks (int): Tripletas GL(4) aleatorias por suite.
            trials (int): Pares de campos por comprobación de adjunción.
        """
        self.sigma = sigma
        self.formas = formas
        self.operadores = operadores
        self.simbolo = simbolo
        self.coeficientes = coeficientes
        self.reticulo = reticulo
        self.twisted = twisted
        self.tol = tol
        self.samples = samples
        self.pullbacks = pullbacks
        self.trials = trials

    def _tol(self, defecto: float) -> float:
        return self.tol if self.tol is not None else defecto

    def _comparar(self, reporte: VerificationReport, check_id: str, referencia: str, residual: float,
                  defecto: float, seed: Optional[int] = None) -> CheckRecord:
        return reporte.agregar(CheckRecord.comparar(check_id, referencia, residual, self._tol(defecto), seed))

    def suites(self) -> Dict[str, Callable[[PerfectTriple, int], VerificationReport]]:
        return {
            "algebra": self.suite_algebra,
            "decompose": self.suite_decompose,
            "ellipticity": self.suite_ellipticity,
            "complex": self.suite_complex,
            "einstein": self.suite_einstein,
            "coefficients": self.suite_coefficients,
            "twisted": self.suite_twisted,
            "split": self.suite_split,
        }

    def verificar(self, suite: str, seed: int = 0, triple: Optional[PerfectTriple] = None) -> VerificationReport:
        """
        Corre una suite o todas.

        Args:
            suite (str): Nombre de la suite o "all".
            seed (int): Semilla de los campos y covectores aleatorios.
            triple (PerfectTriple): Tripleta de fondo para algebra, decompose y
                ellipticity; por defecto la estándar exacta. El resto de suites
                usa siempre la estándar y lo deja anotado en el informe.

        Returns:
            VerificationReport: Informe con todos los registros.

        Raises:
            ErrorPlebanski: Si el nombre de la suite no existe.
        """
        tabla = self.suites()
        if suite != "all" and suite not in tabla:
            raise ErrorPlebanski(f"Suite desconocida '{suite}'")
        triple_dada = triple is not None
        triple = triple or self.sigma.standard_triple()
        nombres = SUITES if suite == "all" else (suite,)
        total = VerificationReport(suite, seed)
        for nombre in nombres:
            LOGGER.info("Suite %s: inicio (seed=%d)", nombre, seed)
            parcial = tabla[nombre](triple, seed)
            if triple_dada and nombre not in SUITES_CON_TRIPLETA:
                LOGGER.info("Suite %s: ignora la tripleta dada", nombre)
                parcial.nota(f"La suite {nombre} usa la tripleta estándar; la tripleta dada no se aplica")
            LOGGER.info("Suite %s: %d registros, %d fallidos", nombre, len(parcial.records), len(parcial.fallidos()))
            total.extender(parcial)
        return total

    # ---------- algebra ----------

    def suite_algebra(self, triple: PerfectTriple, seed: int) -> VerificationReport:
        """Identidades de Σ en la tripleta dada y en pullbacks GL(4) aleatorios."""
        reporte = VerificationReport("algebra", seed)
        referencias = {
            "perfeccion": "Σⁱ∧Σʲ = 2δⁱʲv",
            "algebra": "Σⁱ_μ^αΣʲ_α^ν = −δⁱʲδ_μ^ν + εⁱʲᵏΣᵏ_μ^ν",
            "sigma_sigma": "Σⁱ_{μν}Σⁱ_{ρσ} = g_{μρ}g_{νσ} − g_{μσ}g_{νρ} + ε_{μνρσ}",
            "sse_1": "εⁱʲᵏΣʲ_{μν}Σᵏ_{ρσ} = −g_{μρ}Σⁱ_{νσ} + ...",
            "sse_2": "ε_{μνρ}^αΣⁱ_{σα} = δ_σ^ρΣ^i_{μν} + ...",
            "traza": "Σⁱ_μ^αΣⁱ_α^μ = −12",
            "metrica": "g_{μν}v ∝ εⁱʲᵏΣⁱ_{μα}Σʲ_{νβ}Σᵏ_{γδ}ε̃^{αβγδ}",
        }
        rng = np.random.default_rng(seed)
        triples = [("base", triple)]
        for r in range(self.pullbacks):
            triples.append((f"pullback{r}", self.sigma.gl4_pullback(triple, self.sigma.matriz_aleatoria(rng))))
        peores = {clave: 0.0 for clave in referencias}
        for _, t in triples:
            residuos = self.sigma.identity_residuals(t)
            escala = self.sigma.escala(t)
            for clave in referencias:
                peores[clave] = max(peores[clave], residuos[clave] / escala)
        for clave, referencia in referencias.items():
            self._comparar(reporte, f"algebra.{clave}", referencia, peores[clave], TOL_ALGEBRA, seed)
        constante = self.sigma.identity_residuals(triple)["constante_metrica"]
        reporte.agregar(CheckRecord.informar("algebra.constante_metrica", "R_{μν} = c·g_{μν}v", constante))
        reporte.nota(f"Constante medida entre el lado derecho de la métrica y g·v: {constante:.6g}")
        return reporte

    # ---------- decompose ----------

    def suite_decompose(self, triple: PerfectTriple, seed: int) -> VerificationReport:
        """J₁, J₂, canales de Λ²⊗E y la parametrización de S."""
        reporte = VerificationReport("decompose", seed)
        exacto = triple.exacto
        J1 = self.formas.j1_matrix(triple)
        I12 = identidad(12, exacto)
        self._comparar(reporte, "decompose.j1_cuadrado", "J₁² = 2I + J₁", norma_max(J1.dot(J1) - 2 * I12 - J1), TOL_EXACTA)
        autovalores = np.round(np.real(np.linalg.eigvals(a_float(J1))), 6)
        multiplicidades = (int(np.sum(autovalores == 2.0)), int(np.sum(autovalores == -1.0)))
        reporte.agregar(CheckRecord.afirmar("decompose.j1_multiplicidades", "dim (Λ¹⊗E)₄, (Λ¹⊗E)₈ = 4, 8",
                                            multiplicidades == (4, 8)))
        P4, P8 = self.formas.j1_projectors(triple)
        self._comparar(reporte, "decompose.j1_proyectores", "P4 + P8 = I, P4P8 = 0, P4² = P4",
                       max(norma_max(P4 + P8 - I12), norma_max(P4.dot(P8)), norma_max(P4.dot(P4) - P4)), TOL_EXACTA)

        J2 = self.formas.j2_matrix(triple)
        I18 = identidad(18, exacto)
        polinomio = J2.dot(J2 - 2 * I18).dot(J2 - I18).dot(J2 + I18)
        self._comparar(reporte, "decompose.j2_polinomio", "J₂(J₂−2)(J₂−1)(J₂+1) = 0", norma_max(polinomio), TOL_EXACTA)
        autovalores = np.round(np.real(np.linalg.eigvals(a_float(J2))), 6)
        conteo = tuple(int(np.sum(autovalores == float(lam))) for lam in CANALES.values())
        reporte.agregar(CheckRecord.afirmar("decompose.j2_multiplicidades", "autovalores 2, 1, −1, 0 con dimensiones 1, 3, 5, 9",
                                            conteo == (1, 3, 5, 9)))
        canales = self.formas.channel_projectors(triple)
        lagrange = self.formas.j2_projectors(triple)
        rangos = {n: int(np.linalg.matrix_rank(a_float(P))) for n, P in canales.items()}
        reporte.agregar(CheckRecord.afirmar("decompose.rangos_canales", "Λ²⊗E = S₊⁴ ⊕ S₊² ⊕ R ⊕ S₊²⊗S₋²",
                                            rangos == {"1": 1, "3": 3, "5": 5, "9": 9}))
        self._comparar(reporte, "decompose.proyectores_j2", "proyectores de J₂ = proyectores de canal",
                       max(norma_max(canales[n] - lagrange[n]) for n in CANALES), 1e-10)

        t = triple.a_float()
        rng = np.random.default_rng(seed)
        peor_ida, peor_canal, peor_gram, peor_reconstruccion = 0.0, 0.0, 0.0, 0.0
        gram = a_float(self.formas.gram_S(Fraction(1, 4), 8, 1).matrix)
        for _ in range(10):
            s = SElement(rng.standard_normal(), rng.standard_normal(3),
                         self.formas.htilde_de_coordenadas(t, rng.standard_normal(9)))
            sigma = self.formas.s_embed(t, s)
            v = self.formas.s_vector(t, s)
            vuelta = self.formas.s_vector(t, self.formas.s_extract(t, sigma))
            peor_ida = max(peor_ida, float(np.max(np.abs(vuelta - v))))
            s4, s2, s0, s9 = self.formas.decompose_two_form(t, sigma)
            peor_canal = max(peor_canal, float(np.max(np.abs(s4))))
            traza = float(np.einsum("imn,imn->", t.sigma_arriba(), sigma.B))
            cuadrados = float(np.einsum("imn,ma,nb,iab->", sigma.B, t.inv_metric, t.inv_metric, sigma.B))
            peor_gram = max(peor_gram, abs(v.dot(gram).dot(v) - (0.25 * cuadrados - traza ** 2 / 72.0)))
            B = ETwoForm(rng.standard_normal((3, 4, 4)))
            B = ETwoForm(B.B - np.swapaxes(B.B, 1, 2))
            partes = self.formas.decompose_two_form(t, B)
            peor_reconstruccion = max(peor_reconstruccion,
                                      float(np.max(np.abs(self.formas.reconstruct_two_form(t, *partes).B - B.B))))
        self._comparar(reporte, "decompose.s_ida_vuelta", "s_extract ∘ s_embed = id", peor_ida, TOL_EXACTA, seed)
        self._comparar(reporte, "decompose.s_canal_cinco", "σ ∈ S no tiene canal S₊⁴", peor_canal, TOL_EXACTA, seed)
        self._comparar(reporte, "decompose.s_reconstruccion", "B = suma de sus cuatro canales", peor_reconstruccion, TOL_EXACTA, seed)
        if np.allclose(t.metric, np.eye(4)):
            self._comparar(reporte, "decompose.gram_s", "(1/4)h² + 8(hⁱ)² + (h̃)² = (1/4)(σ)² − (1/72)(Σσ)²",
                           peor_gram, 1e-10, seed)
        try:
            self.formas.s_extract(t, ETwoForm(np.einsum("ij,jmn->imn", np.diag([1.0, -1.0, 0.0]), t.sigma)))
            rechazo = False
        except NotInS:
            rechazo = True
        reporte.agregar(CheckRecord.afirmar("decompose.not_in_s", "Mₛⁱʲ Σʲ ∉ S", rechazo))
        return reporte

    # ---------- ellipticity ----------

    def suite_ellipticity(self, triple: PerfectTriple, seed: int) -> VerificationReport:
        """Exactitud de la sucesión de símbolos en muchas direcciones y en pullbacks GL(4)."""
        reporte = VerificationReport("ellipticity", seed)
        reporte.agregar(CheckRecord.afirmar("ellipticity.dimensiones", "4 − 13 + 12 − 3 = 0", 4 - 13 + 12 - 3 == 0))
        barrido = self.simbolo.exactness_sweep(triple, self.samples, seed)
        self._registrar_barrido(reporte, "ellipticity", barrido, seed)
        try:
            self.simbolo.exactness_report(triple, [1.0, 0.0, 0.0, 0.0])
            reporte.agregar(CheckRecord.afirmar("ellipticity.eje", "rangos (4, 9, 3) en k = e₁", True))
        except NotExact as error:
            reporte.agregar(CheckRecord.afirmar("ellipticity.eje", "rangos (4, 9, 3) en k = e₁", False,
                                                error.diagnostico.get("max_principal_angle", 0.0)))
        rng = np.random.default_rng(seed)
        peor = {"fallos": 0, "angulo": 0.0}
        for _ in range(self.pullbacks):
            t = self.sigma.gl4_pullback(triple, self.sigma.matriz_aleatoria(rng))
            parcial = self.simbolo.exactness_sweep(t, 10, int(rng.integers(1 << 30)))
            peor["fallos"] += parcial["fallos"]
            peor["angulo"] = max(peor["angulo"], parcial["max_principal_angle"])
        reporte.agregar(CheckRecord.afirmar("ellipticity.pullbacks", "exactitud en tripletas GL(4)", peor["fallos"] == 0,
                                            peor["angulo"], seed))
        marco = 0.0
        for k in self.simbolo.direcciones(10, seed):
            marco = max(marco, max(self.simbolo.kbasis_residuals(triple, k).values()))
        self._comparar(reporte, "ellipticity.kbasis", "Σⁱ = k̂eⁱ − eⁱk̂ − εⁱʲᵏeʲeᵏ", marco, TOL_EXACTA, seed)
        return reporte

    def _registrar_barrido(self, reporte: VerificationReport, prefijo: str, barrido: Dict, seed: int) -> None:
        reporte.agregar(CheckRecord.afirmar(f"{prefijo}.rangos", "rangos (4, 9, 3) en todas las direcciones",
                                            barrido["fallos"] == 0 and barrido["rangos"] == [(4, 9, 3)], float(barrido["fallos"]), seed))
        self._comparar(reporte, f"{prefijo}.angulo", "im σ(d₁) = ker σ(d₂), im σ(d₂) = ker σ(d₃)",
                       barrido["max_principal_angle"], 1e-10, seed)
        reporte.agregar(CheckRecord.afirmar(f"{prefijo}.brecha", "brecha espectral > 10⁴",
                                            barrido["min_gap"] > 1e4, barrido["min_gap"], seed))
        self._comparar(reporte, f"{prefijo}.composiciones", "σ(d₂)σ(d₁) = 0, σ(d₃)σ(d₂) = 0",
                       barrido["composiciones"], TOL_EXACTA, seed)

    # ---------- complex ----------

    def suite_complex(self, triple: PerfectTriple, seed: int) -> VerificationReport:
        """Composiciones nulas, caminos alternativos y pares adjuntos en la red."""
        reporte = VerificationReport("complex", seed)
        estandar = self.sigma.standard_triple()
        op = self.operadores
        d1, d2, d3 = op.build_d1(estandar), op.build_d2(estandar), op.build_d3(estandar)
        reporte.agregar(CheckRecord.afirmar("complex.d2d1", "d₂∘d₁ = 0 (stencil exacto)", op.is_zero(op.compose(d2, d1))))
        reporte.agregar(CheckRecord.afirmar("complex.d3d2", "d₃∘d₂ = 0 (stencil exacto)", op.is_zero(op.compose(d3, d2))))
        reporte.agregar(CheckRecord.afirmar("complex.d2_estrella", "d₂ = (1/2)J₁⁻¹(⋆dσ)",
                                            es_cero_exacto((op.build_d2_map2(estandar) - d2).coef)))

        rng = np.random.default_rng(seed)
        malas = 0
        for _ in range(100):
            c = self._familia_aleatoria(rng)
            r1, r2 = self.coeficientes.composition_residuals(c)
            n21, n32 = self.coeficientes.stencil_composition_norms(estandar, c)
            if any(r != 0 for r in r1 + r2) or n21 != 0.0 or n32 != 0.0:
                malas += 1
        reporte.agregar(CheckRecord.afirmar("complex.familias_aleatorias", "d₂d₁ = d₃d₂ = 0 para b de solve_b",
                                            malas == 0, float(malas), seed))

        red = self.reticulo
        xi = red.random_field(4, seed)
        sigma = red.random_field(13, seed + 1)
        a = red.random_field(12, seed + 2)
        t = estandar.a_float()
        f1, f2, f3 = d1.a_float(), d2.a_float(), d3.a_float()
        d1xi = red.apply_stencil(f1, xi)
        d2s = red.apply_stencil(f2, sigma)
        self._comparar(reporte, "complex.red_d2d1", "d₂(d₁ξ) = 0 en la red",
                       red.norma(red.apply_stencil(f2, d1xi)) / red.norma(d1xi), 1e-12, seed)
        self._comparar(reporte, "complex.red_d3d2", "d₃(d₂σ) = 0 en la red",
                       red.norma(red.apply_stencil(f3, d2s)) / red.norma(d2s), 1e-12, seed)
        cuna = op.d3_wedge_oracle(t, a, red)
        directa = red.apply_stencil(f3, a)
        self._comparar(reporte, "complex.d3_cuna", "d₃a = εⁱʲᵏΣʲ∧daᵏ/v",
                       red.norma(directa - cuna) / red.norma(directa), TOL_RETICULO, seed)

        grams = op.grams_pleb(t)
        d1_adj, d2_adj, d3_adj = (s.a_float() for s in op.build_adjoints_pleb(estandar))
        pares = {
            "d1": (f1, d1_adj, grams["TM"], grams["S"]),
            "d2": (f2, d2_adj, grams["S"], grams["EL1"]),
            "d3": (f3, d3_adj, grams["EL1"], grams["E"]),
        }
        primas = self.coeficientes.adjoint_from_inner(CoefficientSet.plebanski(), InnerProductSet.euclideo())
        euclideos = op.grams_euclideos(t)
        adjuntos_1 = op.build_adjoint_family(t, primas)
        pares.update({
            "d1_ip1": (f1, adjuntos_1["d1*"], euclideos["TM"], euclideos["S"]),
            "d2_ip1": (f2, adjuntos_1["d2*"], euclideos["S"], euclideos["EL1"]),
            "d3_ip1": (f3, adjuntos_1["d3*"], euclideos["EL1"], euclideos["E"]),
        })
        for nombre, (operador, adjunto, gram_in, gram_out) in pares.items():
            residuo = red.adjoint_pair_check(operador, adjunto, gram_in, gram_out, self.trials, seed)
            self._comparar(reporte, f"complex.adjunto_{nombre}", f"⟨v, {nombre[:2]}u⟩ = ⟨{nombre[:2]}*v, u⟩", residuo,
                           TOL_RETICULO, seed)
        control = red.adjoint_pair_check(f1, d1_adj.escalar(-1), grams["TM"], grams["S"], 2, seed)
        reporte.agregar(CheckRecord.informar("complex.control_signo", "d₁* con el signo cambiado", control, seed))
        reporte.agregar(CheckRecord.afirmar(
            "complex.adjuntos_compuestos", "d₁*∘d₂* = 0, d₂*∘d₃* = 0",
            op.is_zero(op.compose(d1_adj, d2_adj), 1e-12) and op.is_zero(op.compose(d2_adj, d3_adj), 1e-12),
        ))
        return reporte

    @staticmethod
    def _racional(rng: np.random.Generator) -> Fraction:
        return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))

    def _familia_aleatoria(self, rng: np.random.Generator) -> CoefficientSet:
        """Coeficientes racionales aleatorios con b resuelto para que el complejo cierre."""
        while True:
            a1, a2, a3, c1, c2, b1 = (self._racional(rng) for _ in range(6))
            try:
                b2, b3, b4, b5 = self.coeficientes.solve_b(a1, a2, a3, c1, c2, b1)
            except DegenerateFamily:
                continue
            return CoefficientSet(a1=a1, a2=a2, a3=a3, b1=b1, b2=b2, b3=b3, b4=b4, b5=b5, c1=c1, c2=c2)

    # ---------- einstein ----------

    def suite_einstein(self, triple: PerfectTriple, seed: int) -> VerificationReport:
        """d₂*d₂ en forma cerrada y los canales de da para a = d₂σ."""
        reporte = VerificationReport("einstein", seed)
        estandar = self.sigma.standard_triple()
        op = self.operadores
        d2 = op.build_d2(estandar)
        d2_adj = op.build_adjoints_pleb(estandar)[1]
        cerrada = op.d2star_d2_stencil(estandar)
        reporte.agregar(CheckRecord.afirmar("einstein.d2_estrella_d2", "d₂*d₂ = forma cerrada (stencil exacto)",
                                            (op.compose(d2_adj, d2) - cerrada).es_cero()))

        red = self.reticulo
        t = estandar.a_float()
        sigma = red.random_field(13, seed)
        d2s = red.apply_stencil(d2.a_float(), sigma)
        compuesta = red.apply_stencil(d2_adj.a_float(), d2s)
        formula = op.d2star_d2(t, sigma, red)
        escala = red.norma(compuesta)
        self._comparar(reporte, "einstein.red_cerrada", "d₂*d₂σ = forma cerrada en la red",
                       red.norma(compuesta - formula) / escala, TOL_RETICULO, seed)
        self._comparar(reporte, "einstein.canal_hi", "canal hⁱ de d₂*d₂ = 0",
                       red.norma(compuesta.componentes(1, 4)) / escala, 1e-12, seed)

        _, canales = op.einstein_residual(t, d2s, red)
        F = red.gradiente(d2s)
        escala_da = float(np.max(np.abs(F)))
        self._comparar(reporte, "einstein.canal_tres", "canal 3 de d(d₂σ) = 0",
                       float(np.max(np.abs(canales["3"]))) / escala_da, TOL_RETICULO, seed)

        nulo = op.einstein_symbol_check(estandar, np.array([1.0, 1.0j, 0.0, 0.0]))
        reporte.agregar(CheckRecord.informar("einstein.nucleo_nulo", "dim ker σ(d₂*d₂)(k), k·k = 0", nulo["dim_nucleo"]))
        self._comparar(reporte, "einstein.ondas_planas", "canales 1, 3, 9 de k∧σ(d₂)(k)σ = 0",
                       nulo["residuo_canales"], 1e-8)
        for clave, valor in op.untraced_variant_check(estandar).items():
            reporte.agregar(CheckRecord.informar(f"einstein.variante_{clave}", "operadores con h_{μν} sin separar", valor))
        return reporte

    # ---------- coefficients ----------

    def suite_coefficients(self, triple: PerfectTriple, seed: int) -> VerificationReport:
        """Familia general: composiciones, adjuntos, condiciones de laplaciano y solvers."""
        reporte = VerificationReport("coefficients", seed)
        lab = self.coeficientes
        pleb = CoefficientSet.plebanski()
        estandar = self.sigma.standard_triple()
        r1, r2 = lab.composition_residuals(pleb)
        reporte.agregar(CheckRecord.afirmar("coefficients.composiciones", "residuos de composición = 0",
                                            all(r == 0 for r in r1 + r2)))
        b = lab.solve_b(*pleb.a, *pleb.c, pleb.b1)
        reporte.agregar(CheckRecord.afirmar("coefficients.solve_b", "b = 1/4, 2, 0, 0, −1", tuple(b) == (2, 0, 0, -1)))
        primas = lab.adjoint_from_inner(pleb, InnerProductSet.plebanski())
        reporte.agregar(CheckRecord.afirmar("coefficients.adjuntos_pleb", "primas de ⟨,⟩_Pleb",
                                            primas == AdjointCoefficientSet.plebanski()))
        for ip, etiqueta in ((InnerProductSet.plebanski(), "pleb"), (InnerProductSet.euclideo(), "ip1")):
            for nombre, norma in lab.adjoint_oracle(estandar, pleb, ip).items():
                self._comparar(reporte, f"coefficients.oraculo_{etiqueta}_{nombre}", f"{nombre} por coeficientes = adjunto formal",
                               norma, TOL_EXACTA)

        primas_1 = lab.adjoint_from_inner(pleb, InnerProductSet.euclideo())
        residuos, multiplicadores = lab.delta_conditions(pleb, primas_1)
        reporte.agregar(CheckRecord.afirmar("coefficients.delta_ip1", "condiciones D*D ∼ Δ con ⟨,⟩₁",
                                            all(r == 0 for r in residuos)))
        reporte.agregar(CheckRecord.afirmar("coefficients.multiplicadores", "D*D = Δ·(−1, −1, −1, −2)",
                                            [float(m) for m in multiplicadores] == [-1.0, -1.0, -1.0, -2.0]))
        literal = lab.multiplicador_h_literal(pleb, primas_1)
        reporte.agregar(CheckRecord.informar("coefficients.multiplicador_h_literal", "−3b₁b₁′ + b₅b₁′ + a₁a₁′", float(literal)))
        residuos_pleb, _ = lab.delta_conditions(pleb, primas)
        negativo = max(abs(float(r)) for r in residuos_pleb)
        reporte.agregar(CheckRecord.afirmar("coefficients.delta_pleb", "con ⟨,⟩_Pleb D*D no es múltiplo de Δ", negativo > 0,
                                            negativo))
        ip = lab.solve_inner_products(pleb)
        reporte.agregar(CheckRecord.afirmar("coefficients.inner_products", "β = (1/4, 8, 1), γ = (1, 0)",
                                            ip == InnerProductSet.euclideo()))

        cp_twisted = AdjointCoefficientSet(a3p=-SQRT2, fp=-1)
        c_twisted = pleb.reemplazar(c1=SQRT2, c2=INV_SQRT2, f=-1)
        reporte.agregar(CheckRecord.afirmar("coefficients.f_condicion", "f′a₃′ + c₁(b₄+b₅) + 2c₂b₄ = 0",
                                            lab.f_condition(cp_twisted, c_twisted) == 0))

        direcciones = self.simbolo.direcciones(20, seed)
        M1, desviacion_1 = self.twisted.naive_square(estandar, InnerProductSet.euclideo(), direcciones)
        esperado = np.diag([1.0] * 13 + [2.0] * 3)
        self._comparar(reporte, "coefficients.naive_ip1", "D*D = −Δ·diag(1, 1, 1, 2)",
                       max(desviacion_1, float(np.max(np.abs(M1 - esperado)))), TOL_SIMBOLO, seed)
        _, desviacion_pleb = self.twisted.naive_square(estandar, InnerProductSet.plebanski(), direcciones)
        reporte.agregar(CheckRecord.afirmar("coefficients.naive_pleb", "parte de σ(D*D) que depende de k ≠ 0",
                                            desviacion_pleb > 1e-6, desviacion_pleb, seed))
        operador, dominio, imagen = self.twisted.build_D_naive(estandar.a_float(), InnerProductSet.plebanski())
        _, ajuste = self.reticulo.laplacian_multiple_check(operador.completo(), dominio, imagen, 2, seed)
        reporte.agregar(CheckRecord.afirmar("coefficients.naive_pleb_red", "el mejor ajuste D*D = −ΔM no se anula",
                                            ajuste > 0.1, ajuste, seed))
        return reporte

    # ---------- twisted ----------

    def suite_twisted(self, triple: PerfectTriple, seed: int) -> VerificationReport:
        """Φ, piezas torcidas, D̃*D̃ = −Δ∘M y los signos alternativos."""
        reporte = VerificationReport("twisted", seed)
        estandar = self.sigma.standard_triple()
        tw = self.twisted
        for clave, valor in tw.phi_identities(estandar).items():
            self._comparar(reporte, f"twisted.phi_{clave}", "ΦJ₁ = 2Φ, Φ*Φ = −(1/2)(1 + J₁), Φᵀ = G·Φ*", valor, TOL_EXACTA)
        for clave, valor in tw.rewriting_residuals(estandar).items():
            self._comparar(reporte, f"twisted.reescritura_{clave}", "d₁* − Φd₂ = √2d̃₁*, d₁ − d₂*Φ* = √2d̃₁", valor, TOL_EXACTA)
        self._comparar(reporte, "twisted.adjunto", "D̃* = (d̃₁, d₂*; d̃₄*, d̃₃)", tw.adjoint_residual(estandar), TOL_EXACTA)
        self._comparar(reporte, "twisted.laplaciano", "D̃*D̃ = −Δ∘M (stencil exacto)", tw.delta_multiple_residual(estandar), TOL_EXACTA)
        M = tw.mixing_matrix(True)
        reporte.agregar(CheckRecord.afirmar("twisted.m_cuadrado", "M² = I", es_cero_exacto(M.dot(M) - identidad(16, True))))

        direcciones = self.simbolo.direcciones(100, seed)
        for clave, valor in tw.symbol_square_check(estandar, direcciones).items():
            self._comparar(reporte, f"twisted.simbolo_{clave}", "σ(D̃*D̃)(k) = |k|²M", valor, TOL_SIMBOLO, seed)

        red = self.reticulo
        t = estandar.a_float()
        dominio, imagen = tw.grams_twisted(t)
        D = tw.build_D_tilde(t).completo()
        ajuste, residuo = red.laplacian_multiple_check(D, dominio, imagen, 2, seed)
        self._comparar(reporte, "twisted.red_laplaciano", "D̃*D̃u = −Δ(Mu) en la red", residuo, TOL_RETICULO, seed)
        self._comparar(reporte, "twisted.red_mezcla", "M ajustada = M exacta",
                       float(np.max(np.abs(ajuste - a_float(M)))), TOL_RETICULO, seed)
        residuo = red.adjoint_pair_check(D, tw.explicit_adjoint(t), dominio, imagen, self.trials, seed)
        self._comparar(reporte, "twisted.red_adjunto", "⟨v, D̃u⟩ = ⟨D̃*v, u⟩", residuo, TOL_RETICULO, seed)

        sondeo = tw.sign_probe(estandar, self.simbolo.direcciones(20, seed))
        reporte.agregar(CheckRecord.afirmar("twisted.signos_base", "(c₁, c₂, f) = (√2, 1/√2, −1) da un laplaciano",
                                            [1, 1, 1] in sondeo["validas"]))
        reporte.agregar(CheckRecord.informar("twisted.signos_validos", "elecciones de signo con D̃*D̃ = −ΔM",
                                             float(len(sondeo["validas"]))))
        reporte.nota(f"Signos válidos (s₁, s₂, s₃): {sondeo['validas']}")
        return reporte

    # ---------- split ----------

    def suite_split(self, triple: PerfectTriple, seed: int) -> VerificationReport:
        """Congruencias de T₁ y T₂, separación en D₄ ⊕ D₁₂ e identidades de acción."""
        reporte = VerificationReport("split", seed)
        estandar = self.sigma.standard_triple()
        tw = self.twisted
        congruencias = tw.gram_congruence(estandar)
        for clave in ("inner_omega", "t1_producto", "t1_cruzado", "t1_inversa", "t2_inversa"):
            self._comparar(reporte, f"split.{clave}", "congruencias de Gram bajo T₁, T₂", congruencias[clave], TOL_EXACTA)
        reporte.agregar(CheckRecord.informar("split.t2_inversa_literal", "ξ = (1/2)ω + (1/√2)Φ(Ω)",
                                             congruencias["t2_inversa_literal"]))
        reporte.agregar(CheckRecord.afirmar("split.signatura", "signatura (12, 4)",
                                            (congruencias["positivos"], congruencias["negativos"]) == (12, 4)))
        try:
            separacion = tw.split_check(estandar, self.simbolo.direcciones(100, seed))
        except SplitFailure as error:
            reporte.agregar(CheckRecord.afirmar(f"split.{error.bloque}", "T₂D̃T₁ = D₄ ⊕ D₁₂", False, error.norma))
            return reporte
        for clave, valor in separacion.items():
            defecto = TOL_SIMBOLO if clave.startswith("simbolo") else TOL_EXACTA
            self._comparar(reporte, f"split.{clave}", "T₂D̃T₁ = D₄ ⊕ D₁₂", valor, defecto, seed)

        acciones = tw.action_identities(estandar, self.reticulo, seed)
        for clave in ("residuo_primer_orden", "residuo_separacion", "residuo_variacion"):
            self._comparar(reporte, f"split.{clave}", "L = S, ∫(D₁₂)² − (1/2)∫(D₄)² = 2S", acciones[clave], TOL_RETICULO, seed)
        reporte.agregar(CheckRecord.informar("split.accion", "S sobre el campo aleatorio", acciones["segundo_orden"], seed))
        return reporte
