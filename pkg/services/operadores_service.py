import logging
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import null_space

from models.campo_reticulo import LatticeField
from models.coeficientes import AdjointCoefficientSet, CoefficientSet
from models.errores import FiberMismatch
from models.formas import ETwoForm, GramForm, SElement
from models.raiz_dos import a_float, ceros, identidad, segun_modo
from models.stencil import OperatorStencil, SecondOrderStencil
from models.triple import EPS4, PerfectTriple
from services.formas_service import FormasService

LOGGER = logging.getLogger(__name__)

# nombre de cada operador, dimensión de entrada, dimensión de salida y coeficientes en orden
FAMILIA = {
    "d1": (4, 13, ("a1", "a2", "a3")),
    "d2": (13, 12, ("b1", "b2", "b3", "b4", "b5")),
    "d3": (12, 3, ("c1", "c2")),
    "d4": (3, 4, ("f",)),
}
FAMILIA_ADJUNTA = {
    "d1*": (13, 4, ("a1p", "a2p", "a3p")),
    "d2*": (12, 13, ("b1p", "b2p", "b3p", "b4p", "b5p")),
    "d3*": (3, 12, ("c1p", "c2p")),
    "d4*": (4, 3, ("fp",)),
}


class OperadoresService:
    """
    Servicio de los operadores del complejo.

    Cada operador de la familia general es una combinación lineal de
    stencils base (uno por coeficiente) que se construyen una sola vez por
    tripleta; los operadores de Plebański son la familia evaluada en sus
    coeficientes.
    """

    def __init__(self, formas: FormasService):
        """
        Inicializa el servicio.

        Args:
            formas (FormasService): Servicio de formas con valores en E.
        """
        self.formas = formas
        self._bases: Dict[int, Tuple[PerfectTriple, Dict[str, List[OperatorStencil]]]] = {}

    # ---------- lectura y escritura de fibras ----------

    def _htilde_base(self, triple: PerfectTriple) -> np.ndarray:
        """Tensores h̃ de cada una de las 9 coordenadas."""
        exacto = triple.exacto
        tensores = []
        for k in range(9):
            e = ceros(9, exacto)
            e[k] = 1
            tensores.append(self.formas.htilde_de_coordenadas(triple, e))
        return np.array(tensores, dtype=object if exacto else float)

    def _leer_s(self, triple: PerfectTriple, G: np.ndarray, base: np.ndarray):
        """Gradiente de un campo de S: (∂h, ∂hⁱ, ∂h̃) con índices [λ], [λ, i], [λ, ρ, σ]."""
        return G[:, 0], G[:, 1:4], np.einsum("lk,krs->lrs", G[:, 4:13], base)

    def _vector_s(self, triple: PerfectTriple, h=0, hvec=None, T=None) -> np.ndarray:
        exacto = triple.exacto
        v = ceros(13, exacto)
        v[0] = h
        if hvec is not None:
            v[1:4] = hvec
        if T is not None:
            v[4:13] = self.formas.coordenadas_de_htilde(triple, T)
        return v

    def _stencils_desde_gradiente(self, triple: PerfectTriple, funcion: Callable, dim_in: int,
                                  dim_out: int, nombres: Tuple[str, ...]) -> List[OperatorStencil]:
        """
        Lee los stencils evaluando `funcion` sobre gradientes unitarios.

        `funcion(G)` recibe G[μ, i] = ∂_μu_i y devuelve una salida por cada
        coeficiente de `nombres`.
        """
        exacto = triple.exacto
        coefs = [ceros((dim_out, 4, dim_in), exacto) for _ in nombres]
        for m in range(4):
            for i in range(dim_in):
                G = ceros((4, dim_in), exacto)
                G[m, i] = 1
                for coef, salida in zip(coefs, funcion(G)):
                    coef[:, m, i] = np.asarray(salida).reshape(dim_out)
        return [OperatorStencil(coef, nombre) for coef, nombre in zip(coefs, nombres)]

    def stencil_desde_funcion(self, triple: PerfectTriple, funcion: Callable, dim_in: int, dim_out: int,
                              nombre: str = "") -> OperatorStencil:
        """Stencil de un operador lineal dado por `funcion(G)` con G[μ, i] = ∂_μu_i."""
        return self._stencils_desde_gradiente(triple, lambda G: (funcion(G),), dim_in, dim_out, (nombre,))[0]

    # ---------- stencils base ----------

    def _construir_bases(self, triple: PerfectTriple) -> Dict[str, List[OperatorStencil]]:
        exacto = triple.exacto
        Sm = triple.sigma_mixto()
        Su = triple.sigma_arriba()
        Gi = triple.inv_metric
        eps = triple.eps3
        base = self._htilde_base(triple)

        def tf(T):
            return self.formas.tracefree(triple, T)

        def vs(**partes):
            return self._vector_s(triple, **partes)

        def d1(X):
            return (
                vs(h=np.einsum("mn,mn->", Gi, X)),
                vs(hvec=np.einsum("imn,mn->i", Su, X)),
                vs(T=2 * tf(X)),
            )

        def d2(G):
            Dh, Dhv, Dht = self._leer_s(triple, G, base)
            traza = np.einsum("sl,lrs->r", Gi, Dht)
            return (
                np.einsum("imn,n->im", Sm, Dh),
                Dhv.T,
                np.einsum("ijk,jmn,nk->im", eps, Sm, Dhv),
                np.einsum("imr,r->im", Sm, traza),
                np.einsum("irs,rms->im", Su, Dht),
            )

        def d3(G):
            Da = G.reshape(4, 3, 4)
            return (
                np.einsum("mn,min->i", Gi, Da),
                np.einsum("ijk,jmn,mkn->i", eps, Su, Da),
            )

        def d4(G):
            return (np.einsum("ima,ai->m", Sm, G),)

        def d1_adj(G):
            Dh, Dhv, Dht = self._leer_s(triple, G, base)
            return (
                Dh,
                np.einsum("imn,ni->m", Sm, Dhv),
                np.einsum("nl,lmn->m", Gi, Dht),
            )

        def d2_adj(G):
            Da = G.reshape(4, 3, 4)
            return (
                vs(h=np.einsum("imn,min->", Su, Da)),
                vs(hvec=np.einsum("mn,min->i", Gi, Da)),
                vs(hvec=np.einsum("ijk,jmn,mkn->i", eps, Su, Da)),
                vs(T=2 * tf(np.einsum("ima,nia->mn", Sm, Da))),
                vs(T=2 * tf(np.einsum("ima,ain->mn", Sm, Da))),
            )

        def d3_adj(G):
            return (G.T, np.einsum("ijk,jma,ak->im", eps, Sm, G))

        def d4_adj(X):
            return (np.einsum("imn,mn->i", Su, X),)

        formulas = {
            "d1": d1, "d2": d2, "d3": d3, "d4": d4,
            "d1*": d1_adj, "d2*": d2_adj, "d3*": d3_adj, "d4*": d4_adj,
        }
        tablas = dict(FAMILIA)
        tablas.update(FAMILIA_ADJUNTA)
        bases = {}
        for nombre, (dim_in, dim_out, campos) in tablas.items():
            bases[nombre] = self._stencils_desde_gradiente(triple, formulas[nombre], dim_in, dim_out, campos)
        LOGGER.debug("Stencils base construidos (%s)", "exactos" if exacto else "float")
        return bases

    def bases(self, triple: PerfectTriple) -> Dict[str, List[OperatorStencil]]:
        """Stencils base de la tripleta, en caché por identidad del objeto."""
        guardado = self._bases.get(id(triple))
        if guardado is None or guardado[0] is not triple:
            if len(self._bases) >= 16:
                self._bases.clear()
            guardado = (triple, self._construir_bases(triple))
            self._bases[id(triple)] = guardado
        return guardado[1]

    @staticmethod
    def _combinar(bases: List[OperatorStencil], valores: tuple, nombre: str) -> OperatorStencil:
        exacto = all(b.exacto for b in bases) and not any(isinstance(v, float) for v in valores)
        total = None
        for base, valor in zip(bases, valores):
            termino = base.coef * valor if exacto else base.como_float() * float(valor)
            total = termino if total is None else total + termino
        return OperatorStencil(total, nombre)

    # ---------- familias ----------

    def build_family(self, triple: PerfectTriple, coeficientes: CoefficientSet) -> Dict[str, OperatorStencil]:
        """
        Operadores d₁, d₂, d₃ y d̃₄ de la familia general.

        Args:
            triple (PerfectTriple): Tripleta de fondo.
            coeficientes (CoefficientSet): a, b, c y f.

        Returns:
            dict: {"d1": 4→13, "d2": 13→12, "d3": 12→3, "d4": 3→4}.
        """
        bases = self.bases(triple)
        valores = coeficientes.valores()
        return {
            nombre: self._combinar(bases[nombre], tuple(valores[c] for c in campos), nombre)
            for nombre, (_, _, campos) in FAMILIA.items()
        }

    def build_adjoint_family(self, triple: PerfectTriple, primas: AdjointCoefficientSet) -> Dict[str, OperatorStencil]:
        """Operadores d₁*, d₂*, d₃* y d̃₄* parametrizados por a′, b′, c′ y f′."""
        bases = self.bases(triple)
        valores = primas.valores()
        return {
            nombre: self._combinar(bases[nombre], tuple(valores[c] for c in campos), nombre)
            for nombre, (_, _, campos) in FAMILIA_ADJUNTA.items()
        }

    def build_d1(self, triple: PerfectTriple, coeficientes: Optional[CoefficientSet] = None) -> OperatorStencil:
        """d₁ξ = (∂^μξ_μ, (1/4)Σⁱ{}^{μν}∂_μξ_ν, ∂_⟨μξ_ν⟩)."""
        return self.build_family(triple, coeficientes or CoefficientSet.plebanski())["d1"]

    def build_d2(self, triple: PerfectTriple, coeficientes: Optional[CoefficientSet] = None) -> OperatorStencil:
        """d₂σ = (1/4)Σⁱ_μ{}^ν∂_νh + 2∂_μhⁱ − Σⁱ{}^{αβ}∂_αh̃_{μβ}."""
        return self.build_family(triple, coeficientes or CoefficientSet.plebanski())["d2"]

    def build_d3(self, triple: PerfectTriple, coeficientes: Optional[CoefficientSet] = None) -> OperatorStencil:
        """d₃a = εⁱʲᵏΣʲ{}^{μν}∂_μaᵏ_ν."""
        return self.build_family(triple, coeficientes or CoefficientSet.plebanski())["d3"]

    def build_adjoints_pleb(self, triple: PerfectTriple) -> Tuple[OperatorStencil, OperatorStencil, OperatorStencil]:
        """
        Adjuntos de los operadores de Plebański con ⟨σ,σ⟩ = (1/4)h² + 8(hⁱ)² + (h̃)² y ⟨a,a⟩ = −(a, J₁a).

        Returns:
            Tuple: (d₁*, d₂*, d₃*).
        """
        familia = self.build_adjoint_family(triple, AdjointCoefficientSet.plebanski())
        return familia["d1*"], familia["d2*"], familia["d3*"]

    def grams_pleb(self, triple: PerfectTriple) -> Dict[str, GramForm]:
        """Formas de Gram de TM, S, E⊗Λ¹ y E para el producto de Plebański."""
        exacto = triple.exacto
        return {
            "TM": self.formas.gram_TM(exacto),
            "S": self.formas.gram_S(Fraction(1, 4), 8, 1) if exacto else self.formas.gram_S(0.25, 8.0, 1.0),
            "EL1": self.formas.gram_EL1(0, 1, triple),
            "E": self.formas.gram_E(exacto),
        }

    def grams_euclideos(self, triple: PerfectTriple) -> Dict[str, GramForm]:
        """Formas de Gram con ⟨a,a⟩ = (aⁱ_μ)², las que dan D*D ∼ Δ."""
        grams = self.grams_pleb(triple)
        grams["EL1"] = self.formas.gram_EL1(1, 0, triple)
        return grams

    # ---------- adjunto formal y composición ----------

    def formal_adjoint(self, stencil: OperatorStencil, gram_in: GramForm, gram_out: GramForm,
                       nombre: str = "") -> OperatorStencil:
        """
        Adjunto formal C*_μ = −G_in⁻¹ C_μᵀ G_out de un stencil de primer orden.

        Args:
            stencil (OperatorStencil): Operador de la fibra de gram_in a la de gram_out.
            gram_in (GramForm): Producto en el dominio.
            gram_out (GramForm): Producto en la imagen.

        Returns:
            OperatorStencil: Operador de la fibra de gram_out a la de gram_in.

        Raises:
            FiberMismatch: Si las dimensiones no coinciden.
            SingularGram: Si gram_in no es invertible.
        """
        if gram_in.dim != stencil.dim_in or gram_out.dim != stencil.dim_out:
            raise FiberMismatch(
                f"Grams {gram_in.dim}/{gram_out.dim} para un stencil {stencil.dim_in}→{stencil.dim_out}"
            )
        inversa = gram_in.inversa()
        exacto = stencil.exacto and gram_out.exacta and np.asarray(inversa).dtype == object
        if exacto:
            C, Gi, Go = stencil.coef, inversa, gram_out.matrix
        else:
            C, Gi, Go = stencil.como_float(), a_float(inversa), gram_out.como_float()
        intermedio = np.einsum("omi,oq->imq", C, Go)
        adjunto = -np.einsum("pi,imq->pmq", Gi, intermedio)
        return OperatorStencil(adjunto, nombre or f"{stencil.nombre}*")

    def compose(self, segundo: OperatorStencil, primero: OperatorStencil, nombre: str = "") -> SecondOrderStencil:
        """
        Composición segundo∘primero como operador de segundo orden simetrizado en (μ, ν).

        En modo exacto se recorren solo los coeficientes no nulos.

        Raises:
            FiberMismatch: Si la salida de `primero` no es la entrada de `segundo`.
        """
        if segundo.dim_in != primero.dim_out:
            raise FiberMismatch(f"No se puede componer {segundo.nombre} ({segundo.dim_in}) con {primero.nombre} ({primero.dim_out})")
        nombre = nombre or f"{segundo.nombre}∘{primero.nombre}"
        if not (segundo.exacto and primero.exacto):
            P = np.einsum("oam,mbi->oabi", segundo.como_float(), primero.como_float())
            return SecondOrderStencil(0.5 * (P + np.swapaxes(P, 1, 2)), nombre)
        K = ceros((segundo.dim_out, 4, 4, primero.dim_in), True)
        por_m = defaultdict(list)
        for (m, nu, i), valor in np.ndenumerate(primero.coef):
            if valor != 0:
                por_m[m].append((nu, i, valor))
        medio = Fraction(1, 2)
        for (o, mu, m), valor in np.ndenumerate(segundo.coef):
            if valor == 0 or m not in por_m:
                continue
            for nu, i, otro in por_m[m]:
                producto = valor * otro * medio
                K[o, mu, nu, i] = K[o, mu, nu, i] + producto
                K[o, nu, mu, i] = K[o, nu, mu, i] + producto
        return SecondOrderStencil(K, nombre)

    def is_zero(self, stencil, tol: float = 0.0) -> bool:
        """True si un stencil de primer o segundo orden es idénticamente nulo."""
        if isinstance(stencil, SecondOrderStencil) and tol > 0:
            return stencil.norma() <= tol
        if isinstance(stencil, SecondOrderStencil):
            return stencil.es_cero()
        return stencil.es_cero(tol)

    def segundo_orden(self, triple: PerfectTriple, funcion: Callable, dim_in: int, dim_out: int,
                      nombre: str = "") -> SecondOrderStencil:
        """
        Stencil de segundo orden leído de `funcion(H)` con H[μ, ν, i] = ∂_μ∂_νu_i simétrico.
        """
        exacto = triple.exacto
        medio = segun_modo(Fraction(1, 2), exacto)
        K = ceros((dim_out, 4, 4, dim_in), exacto)
        for m in range(4):
            for n in range(m, 4):
                for i in range(dim_in):
                    H = ceros((4, 4, dim_in), exacto)
                    H[m, n, i] = 1
                    H[n, m, i] = 1
                    salida = np.asarray(funcion(H)).reshape(dim_out)
                    if m == n:
                        K[:, m, m, i] = salida
                    else:
                        K[:, m, n, i] = salida * medio
                        K[:, n, m, i] = salida * medio
        return SecondOrderStencil(K, nombre)

    def laplaciano_stencil(self, triple: PerfectTriple, matriz: np.ndarray, nombre: str = "Δ") -> SecondOrderStencil:
        """Δ∘M: K[o, μ, ν, i] = g^{μν}M[o, i]."""
        K = np.einsum("mn,oi->omni", triple.inv_metric, matriz)
        return SecondOrderStencil(K, nombre)

    # ---------- caminos alternativos y oráculos ----------

    def build_d2_map2(self, triple: PerfectTriple) -> OperatorStencil:
        """
        d₂ por el camino (1/2)J₁⁻¹(⋆dσ) con J₁⁻¹ = (1/2)(J₁ − I).

        (⋆dσ)ⁱ_μ = ε_μ{}^{αβγ}∂_ασⁱ_{βγ}, con σ = s_embed(h, hⁱ, h̃).
        """
        exacto = triple.exacto
        J = self.formas.j1_matrix(triple)
        I = identidad(12, exacto)
        cuarto = segun_modo(Fraction(1, 4), exacto)
        estrella = np.einsum("mn,nabc->mabc", triple.metric, triple.eps4_upper)

        def camino(G):
            derivadas = []
            for a in range(4):
                s = SElement(G[a, 0], G[a, 1:4], self.formas.htilde_de_coordenadas(triple, G[a, 4:13]))
                derivadas.append(self.formas.s_embed(triple, s).B)
            Dsigma = np.array(derivadas, dtype=object if exacto else float)
            Y = np.einsum("mabc,aibc->im", estrella, Dsigma).reshape(12)
            return ((J.dot(Y) - I.dot(Y)) * cuarto,)

        return self._stencils_desde_gradiente(triple, camino, 13, 12, ("d2 (⋆d)",))[0]

    def _derivada_exterior(self, gradiente: np.ndarray) -> np.ndarray:
        """(da)ᵏ_{ρσ} = ∂_ρaᵏ_σ − ∂_σaᵏ_ρ a partir de ∂_μaᵏ_ν con forma (4, 12, sitios...)."""
        Da = gradiente.reshape((4, 3, 4) + gradiente.shape[2:])
        Da = np.moveaxis(Da, 1, 0)
        return Da - np.swapaxes(Da, 1, 2)

    def d3_wedge_oracle(self, triple: PerfectTriple, a: LatticeField, reticulo) -> LatticeField:
        """
        εⁱʲᵏΣʲ∧daᵏ/v_Σ evaluado punto a punto.

        Args:
            triple (PerfectTriple): Tripleta de fondo.
            a (LatticeField): Campo de E⊗Λ¹ (fibra 12).
            reticulo (ReticuloService): Servicio que deriva en la red.

        Returns:
            LatticeField: Campo de E (fibra 3).
        """
        if a.fiber != 12:
            raise FiberMismatch(f"d3_wedge_oracle espera fibra 12, recibió {a.fiber}")
        t = triple.a_float()
        F = self._derivada_exterior(reticulo.gradiente(a))
        cuna = np.einsum("mnrs,jmn,krs...->jk...", EPS4.astype(float), t.sigma, F) / 4.0
        chi = np.einsum("ijk,jk...->i...", t.eps3, cuna) / float(t.volume)
        return LatticeField(chi, a.band_limit)

    def d2star_d2_stencil(self, triple: PerfectTriple) -> SecondOrderStencil:
        """
        Forma cerrada de d₂*d₂ con los productos de Plebański.

        d₂*d₂σ = ((3/2)∂²h − 2∂^μ∂^νh̃_{μν}, 0, −(1/2)∂_⟨μ∂_ν⟩h + 2∂_⟨μ∂^ρh̃_{ν⟩ρ} − ∂²h̃_{μν})
        """
        exacto = triple.exacto
        Gi = triple.inv_metric
        base = self._htilde_base(triple)

        def tf(T):
            return self.formas.tracefree(triple, T)

        def cerrada(H):
            Dh2 = H[:, :, 0]
            Dht2 = np.einsum("mnk,krs->mnrs", H[:, :, 4:13], base)
            h = (
                np.einsum("mn,mn->", Gi, Dh2) * segun_modo(Fraction(3, 2), exacto)
                - 2 * np.einsum("ma,nb,abmn->", Gi, Gi, Dht2)
            )
            mezcla = np.einsum("rl,mlnr->mn", Gi, Dht2)
            T = (
                tf(Dh2) * segun_modo(Fraction(-1, 2), exacto)
                + 2 * tf(mezcla)
                - np.einsum("ab,abmn->mn", Gi, Dht2)
            )
            return self._vector_s(triple, h=h, T=T)

        return self.segundo_orden(triple, cerrada, 13, 13, "d2*d2 (forma cerrada)")

    def d2star_d2(self, triple: PerfectTriple, campo: LatticeField, reticulo) -> LatticeField:
        """Aplica la forma cerrada de d₂*d₂ a un campo de S sobre la red."""
        if campo.fiber != 13:
            raise FiberMismatch(f"d2star_d2 espera fibra 13, recibió {campo.fiber}")
        return reticulo.apply_second_order(self.d2star_d2_stencil(triple.a_float()), campo)

    def einstein_residual(self, triple: PerfectTriple, a: LatticeField, reticulo) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
        """
        Canales de (da)ⁱ para un campo a de E⊗Λ¹.

        La ecuación de Einstein linealizada es la anulación de los canales 1, 3 y 9;
        el canal de dimensión 5 es el ψⁱʲ libre.

        Returns:
            Tuple: (s5 con forma (3, 3, sitios...), {"1", "3", "9"}).
        """
        if a.fiber != 12:
            raise FiberMismatch(f"einstein_residual espera fibra 12, recibió {a.fiber}")
        F = self._derivada_exterior(reticulo.gradiente(a))
        canales = self.formas.canales_campo(triple.a_float(), F)
        s5 = canales.pop("5")
        return s5, canales

    @staticmethod
    def es_einstein(resto: Dict[str, np.ndarray], tol: float = 1e-10) -> bool:
        return all(float(np.max(np.abs(v))) <= tol for v in resto.values())

    def einstein_symbol_check(self, triple: PerfectTriple, k) -> Dict[str, float]:
        """
        Núcleo del símbolo de d₂*d₂ en un covector k, real o complejo nulo.

        Para cada vector del núcleo los canales 1, 3 y 9 de k∧σ(d₂)(k)σ deben anularse.

        Returns:
            dict: dim_nucleo, residuo_canales y k·k.
        """
        t = triple.a_float()
        k = np.asarray(k, dtype=complex)
        d2 = self.build_d2(t)
        d2_adj = self.build_adjoints_pleb(t)[1]
        sd2 = d2.simbolo(k)
        cuadrado = d2_adj.simbolo(k).dot(sd2)
        nucleo = null_space(cuadrado, rcond=1e-8)
        residuo = 0.0
        for columna in nucleo.T:
            a = sd2.dot(columna).reshape(3, 4)
            B = np.einsum("m,in->imn", k, a) - np.einsum("n,im->imn", k, a)
            _, s2, s0, s9 = self.formas.decompose_two_form(t, ETwoForm(B))
            residuo = max(residuo, float(np.max(np.abs(s2))), abs(complex(s0)), float(np.max(np.abs(s9.B))))
        nulo = complex(np.einsum("m,mn,n->", k, t.inv_metric, k))
        LOGGER.info("Símbolo de d2*d2 en k=%s: núcleo de dimensión %d", k, nucleo.shape[1])
        return {"dim_nucleo": int(nucleo.shape[1]), "residuo_canales": residuo, "k_cuadrado": abs(nulo)}

    # ---------- variante con h_{μν} sin separar ----------

    def untraced_variant_check(self, triple: PerfectTriple) -> Dict[str, float]:
        """
        Operadores escritos con h_{μν} completo (fibra E ⊕ R¹⁶) y ⟨σ,σ⟩ = 8(hⁱ)² + (h_{μν})².

        Compara los adjuntos escritos a mano con los formales y mide
        d₁d₁* + d₂*d₂ + Δ y d₃d₃* + 2Δ sobre la parte simétrica.

        Returns:
            dict: Residuos adjunto_d1, adjunto_d2, adjunto_d3, laplaciano_s, laplaciano_chi.
        """
        exacto = triple.exacto
        Sm = triple.sigma_mixto()
        Su = triple.sigma_arriba()
        Gi = triple.inv_metric
        eps = triple.eps3
        medio = segun_modo(Fraction(1, 2), exacto)
        cuarto = segun_modo(Fraction(1, 4), exacto)

        def simetrica(T):
            return (T + T.T) * medio

        def vector(hvec, T):
            v = ceros(19, exacto)
            v[0:3] = hvec
            v[3:19] = T.reshape(16)
            return v

        def leer(G):
            return G[:, 0:3], G[:, 3:19].reshape(4, 4, 4)

        def d1(X):
            return (vector(np.einsum("imn,mn->i", Su, X) * cuarto, simetrica(X)),)

        def d2(G):
            Dhv, Dh = leer(G)
            return (-np.einsum("iab,amb->im", Su, Dh) + 2 * Dhv.T,)

        def d1_adj(G):
            Dhv, Dh = leer(G)
            return (2 * np.einsum("imn,ni->m", Sm, Dhv) - np.einsum("nl,lmn->m", Gi, Dh),)

        def d2_adj(G):
            Da = G.reshape(4, 3, 4)
            return (vector(
                -np.einsum("mn,min->i", Gi, Da) * cuarto,
                -simetrica(np.einsum("ima,ain->mn", Sm, Da)),
            ),)

        def d3_adj(G):
            return (-np.einsum("ijk,jma,ak->im", eps, Sm, G),)

        construir = self._stencils_desde_gradiente
        d1u = construir(triple, d1, 4, 19, ("d1",))[0]
        d2u = construir(triple, d2, 19, 12, ("d2",))[0]
        d1u_adj = construir(triple, d1_adj, 19, 4, ("d1*",))[0]
        d2u_adj = construir(triple, d2_adj, 12, 19, ("d2*",))[0]
        d3u_adj = construir(triple, d3_adj, 3, 12, ("d3*",))[0]
        d3 = self.build_d3(triple)

        pesos = ceros((19, 19), exacto)
        inversa = ceros((19, 19), exacto)
        for k in range(19):
            pesos[k, k] = 8 if k < 3 else 1
            inversa[k, k] = segun_modo(Fraction(1, 8), exacto) if k < 3 else 1
        gram_s = GramForm(pesos, True, "8(hⁱ)² + (h_{μν})²", inversa)
        gram_tm = self.formas.gram_TM(exacto)
        gram_el1 = self.formas.gram_EL1(1, 0, triple)
        gram_e = self.formas.gram_E(exacto)

        # simetrizador sobre la fibra E ⊕ R¹⁶
        P = ceros((19, 19), exacto)
        for k in range(3):
            P[k, k] = 1
        for m in range(4):
            for n in range(4):
                P[3 + 4 * m + n, 3 + 4 * m + n] = P[3 + 4 * m + n, 3 + 4 * m + n] + medio
                P[3 + 4 * m + n, 3 + 4 * n + m] = P[3 + 4 * m + n, 3 + 4 * n + m] + medio

        adj1 = (self.formal_adjoint(d1u, gram_tm, gram_s) - d1u_adj).derecha(P)
        adj2 = (self.formal_adjoint(d2u, gram_s, gram_el1) - d2u_adj).izquierda(P)
        adj3 = self.formal_adjoint(d3, gram_el1, gram_e) - d3u_adj

        cuadrado = self.compose(d1u, d1u_adj) + self.compose(d2u_adj, d2u)
        cuadrado_p = np.einsum("omni,ij->omnj", cuadrado.coef, P)
        residuo_s = cuadrado_p + self.laplaciano_stencil(triple, P).coef
        residuo_chi = self.compose(d3, d3u_adj).coef + 2 * self.laplaciano_stencil(triple, identidad(3, exacto)).coef
        resultado = {
            "adjunto_d1": adj1.norma(),
            "adjunto_d2": adj2.norma(),
            "adjunto_d3": adj3.norma(),
            "laplaciano_s": float(np.linalg.norm(a_float(residuo_s))),
            "laplaciano_chi": float(np.linalg.norm(a_float(residuo_chi))),
        }
        if max(resultado.values()) > 1e-12:
            LOGGER.warning("La variante con h_{μν} completo no es consistente: %s", resultado)
        return resultado

