"""
Crossed Module Module
Módulos cruzados sobre grupos finitos: validación de CM1/CM2, los cuatro
constructores estándar, consecuencias y el módulo cruzado libre C(ω) → F(X)
"""

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    EnumeratedGroup,
    FiniteGroup,
    FreeWord,
    GroupPresentation,
    automorphism_group,
    enumerate_fp_group,
    format_word,
)
from .errors import InfiniteCarrier, InvalidCrossedModule, PreconditionFailed

logger = logging.getLogger(__name__)

STANDARD_KINDS = ("normal_inclusion", "inner_automorphism", "zero_module", "central_epi")

# Máximo de contraejemplos guardados por axioma
MAX_COUNTEREXAMPLES = 5


@dataclass
class CrossedModule:
    """
    μ: M → P con acción a derecha de P sobre M

    Attributes:
        mu: arreglo |M| con índices en P
        action: arreglo |M|×|P| con action[m, p] = m^p
    """
    M: FiniteGroup
    P: FiniteGroup
    mu: np.ndarray
    action: np.ndarray
    name: str = ""
    kind: str = "explicit"
    source: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=np.int64)
        self.action = np.asarray(self.action, dtype=np.int64)
        if self.mu.shape != (self.M.order,) or self.action.shape != (self.M.order, self.P.order):
            raise PreconditionFailed("Dimensiones de μ o de la acción incompatibles con M y P")

    def boundary(self, m: int) -> int:
        return int(self.mu[m])

    def act(self, m: int, p: int) -> int:
        return int(self.action[m, p])

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, CrossedModule):
            return NotImplemented
        return (np.array_equal(self.M.mul, other.M.mul) and np.array_equal(self.P.mul, other.P.mul)
                and np.array_equal(self.mu, other.mu) and np.array_equal(self.action, other.action))

    def __repr__(self):
        return f"CrossedModule({self.name or self.kind}: |M|={self.M.order}, |P|={self.P.order})"


@dataclass
class CrossedModuleReport:
    """Resultado de la verificación exhaustiva de axiomas"""
    cm1_ok: bool
    cm2_ok: bool
    action_ok: bool
    counterexamples: Dict[str, List[Tuple[int, ...]]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.cm1_ok and self.cm2_ok and self.action_ok


def _witnesses(mask: np.ndarray) -> List[Tuple[int, ...]]:
    return [tuple(int(v) for v in row) for row in np.argwhere(mask)[:MAX_COUNTEREXAMPLES]]


def validate(x: CrossedModule) -> CrossedModuleReport:
    """
    Verificación exhaustiva de CM1, CM2 y de la acción

    Raises:
        InfiniteCarrier: si M o P no son grupos finitos por tabla
    """
    if not isinstance(x.M, FiniteGroup) or not isinstance(x.P, FiniteGroup):
        raise InfiniteCarrier("validate requiere M y P finitos")
    M, P, mu, A = x.M, x.P, x.mu, x.action
    m_ids = np.arange(M.order)
    p_ids = np.arange(P.order)
    counterexamples: Dict[str, List[Tuple[int, ...]]] = {}

    # CM1: μ(m^p) = p⁻¹ μ(m) p
    lhs = mu[A]
    rhs = P.mul[P.mul[P.inv[None, :], mu[:, None]], p_ids[None, :]]
    cm1 = lhs != rhs
    if cm1.any():
        counterexamples["cm1"] = _witnesses(cm1)

    # CM2: n⁻¹ m n = m^{μ n}
    lhs = M.mul[M.mul[M.inv[None, :], m_ids[:, None]], m_ids[None, :]]
    rhs = A[m_ids[:, None], mu[None, :]]
    cm2 = lhs != rhs
    if cm2.any():
        counterexamples["cm2"] = _witnesses(cm2)

    action_bad = []
    if not np.array_equal(A[:, 0], m_ids):
        action_bad.append(("unit",))
        counterexamples["action_unit"] = [(int(m),) for m in np.nonzero(A[:, 0] != m_ids)[0][:MAX_COUNTEREXAMPLES]]
    composite = A[A] != A[:, P.mul]
    if composite.any():
        action_bad.append(("composite",))
        counterexamples["action_composite"] = _witnesses(composite)
    automorphism = A[M.mul] != M.mul[A[:, None, :], A[None, :, :]]
    if automorphism.any():
        action_bad.append(("automorphism",))
        counterexamples["action_automorphism"] = _witnesses(automorphism)
    homomorphism = mu[M.mul] != P.mul[mu[:, None], mu[None, :]]
    if homomorphism.any():
        action_bad.append(("mu",))
        counterexamples["mu_homomorphism"] = _witnesses(homomorphism)

    return CrossedModuleReport(
        cm1_ok=not cm1.any(),
        cm2_ok=not cm2.any(),
        action_ok=not action_bad,
        counterexamples=counterexamples,
    )


def action_from_generators(M: FiniteGroup, P: FiniteGroup, m_generators: Sequence[int],
                           p_generators: Sequence[int], images: Dict[int, Sequence[int]]) -> np.ndarray:
    """
    Extiende la acción dada en generadores a una tabla completa

    Args:
        m_generators: Generadores de M (índices)
        p_generators: Generadores de P (índices)
        images: para cada generador de P, las imágenes de m_generators

    Raises:
        PreconditionFailed: si las imágenes no definen automorfismos coherentes
    """
    def extend(gen_images: Sequence[int]) -> np.ndarray:
        phi = [-1] * M.order
        phi[0] = 0
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for g, h in zip(m_generators, gen_images):
                v = M.op(u, g)
                value = M.op(phi[u], h)
                if phi[v] == -1:
                    phi[v] = value
                    queue.append(v)
                elif phi[v] != value:
                    raise PreconditionFailed("Las imágenes de la acción no definen un homomorfismo")
        if -1 in phi or len(set(phi)) != M.order:
            raise PreconditionFailed("La acción de un generador no es un automorfismo")
        return np.asarray(phi, dtype=np.int64)

    generator_maps = {p: extend(images.get(p, list(m_generators))) for p in p_generators}
    table = np.full((M.order, P.order), -1, dtype=np.int64)
    table[:, 0] = np.arange(M.order)
    queue = deque([0])
    while queue:
        p = queue.popleft()
        for g, phi in generator_maps.items():
            q = P.op(p, g)
            column = phi[table[:, p]]      # m^{pg} = (m^p)^g
            if table[0, q] == -1:
                table[:, q] = column
                queue.append(q)
            elif not np.array_equal(table[:, q], column):
                raise PreconditionFailed("La acción no es compatible con las relaciones de P")
    if (table < 0).any():
        raise PreconditionFailed("Los generadores de P no generan P")
    return table


def make_standard(kind: str, **data: Any) -> CrossedModule:
    """
    Constructores estándar de módulos cruzados

    Args:
        kind: normal_inclusion | inner_automorphism | zero_module | central_epi
        data: P y subgroup (normal_inclusion); M (inner_automorphism);
              M, P y action (zero_module); M, P y mu (central_epi)

    Raises:
        PreconditionFailed: con la hipótesis violada
    """
    name = data.get("name", "")
    if kind == "normal_inclusion":
        P: FiniteGroup = data["P"]
        subset = P.subgroup_generated(data["subgroup"])
        if not P.is_normal(subset):
            raise PreconditionFailed("El subgrupo no es normal", witness=subset)
        M, embedding = P.subgroup(subset, name=data.get("M_name", ""))
        index = {g: i for i, g in enumerate(embedding)}
        action = np.array([[index[P.conjugate(g, p)] for p in P.elements()] for g in embedding], dtype=np.int64)
        x = CrossedModule(M, P, np.asarray(embedding), action, name=name, kind=kind)
    elif kind == "inner_automorphism":
        M = data["M"]
        aut = automorphism_group(M)
        inner = []
        for m in M.elements():
            images = [M.conjugate(g, m) for g in M.elements()]
            inner.append(aut.index_of(images))
        action = np.stack([aut.maps[phi] for phi in range(aut.group.order)], axis=1)
        x = CrossedModule(M, aut.group, np.asarray(inner), action, name=name, kind=kind)
    elif kind == "zero_module":
        M, P = data["M"], data["P"]
        if not M.is_abelian():
            raise PreconditionFailed("M no es abeliano: no es un P-módulo")
        action = np.asarray(data["action"], dtype=np.int64)
        x = CrossedModule(M, P, np.zeros(M.order, dtype=np.int64), action, name=name, kind=kind)
        report = validate(x)
        if not report.action_ok:
            raise PreconditionFailed("La acción no es una acción por automorfismos", witness=report.counterexamples)
    elif kind == "central_epi":
        M, P = data["M"], data["P"]
        mu = np.asarray(data["mu"], dtype=np.int64)
        if not np.array_equal(mu[M.mul], P.mul[mu[:, None], mu[None, :]]):
            raise PreconditionFailed("μ no es un homomorfismo")
        if set(mu.tolist()) != set(P.elements()):
            raise PreconditionFailed("μ no es sobreyectivo")
        center = set(M.center())
        kernel = [m for m in M.elements() if mu[m] == 0]
        if not set(kernel) <= center:
            raise PreconditionFailed("El núcleo no es central", witness=kernel)
        preimage = {}
        for m in M.elements():
            preimage.setdefault(int(mu[m]), m)
        action = np.array([[M.conjugate(m, preimage[p]) for p in P.elements()] for m in M.elements()],
                          dtype=np.int64)
        x = CrossedModule(M, P, mu, action, name=name, kind=kind)
    else:
        raise PreconditionFailed(f"Constructor desconocido: {kind}")
    logger.debug("Módulo cruzado %s construido (%s)", name, kind)
    return x


def consequences(x: CrossedModule) -> Dict[str, bool]:
    """
    Im μ normal en P, Ker μ central en M y fijo por Im μ

    Se calcula sin asumir los axiomas: sobre una estructura rota el
    resultado se informa, no se afirma.
    """
    image = sorted(set(int(v) for v in x.mu))
    kernel = [m for m in x.M.elements() if x.mu[m] == 0]
    center = set(x.M.center())
    return {
        "im_normal": x.P.is_normal(image),
        "ker_central": set(kernel) <= center,
        "ker_fixed_by_im": all(x.act(k, p) == k for k in kernel for p in image),
    }


@dataclass
class KernelImage:
    kernel: List[int]
    image: List[int]
    coker_order: int


def kernel_and_image(x: CrossedModule) -> KernelImage:
    """Ker μ (π₂) e Im μ; el conúcleo (π₁) tiene orden |P|/|Im μ|"""
    image = sorted(set(int(v) for v in x.mu))
    kernel = [m for m in x.M.elements() if x.mu[m] == 0]
    return KernelImage(kernel, image, x.P.order // len(image))


# ---------------------------------------------------------------------------
# Módulo cruzado libre C(ω) → F(X)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeifferTriple:
    """(r, ε, p): el generador r con signo ε conjugado por p"""
    relator: int
    sign: int
    conjugator: FreeWord = FreeWord()

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise PreconditionFailed(f"Signo inválido: {self.sign}")


@dataclass(frozen=True)
class FreeCrossedModuleElement:
    """Sucesión de ternas de Peiffer; el producto es la concatenación"""
    triples: Tuple[PeifferTriple, ...] = ()

    @classmethod
    def generator(cls, relator: int, sign: int = 1, conjugator: FreeWord = FreeWord()) -> "FreeCrossedModuleElement":
        return cls((PeifferTriple(relator, sign, conjugator),))

    def __mul__(self, other: "FreeCrossedModuleElement") -> "FreeCrossedModuleElement":
        return FreeCrossedModuleElement(self.triples + other.triples)

    def inverse(self) -> "FreeCrossedModuleElement":
        return FreeCrossedModuleElement(tuple(
            PeifferTriple(t.relator, -t.sign, t.conjugator) for t in reversed(self.triples)
        ))

    def __len__(self) -> int:
        return len(self.triples)


def fcm_boundary(e: FreeCrossedModuleElement, relators: Sequence[FreeWord]) -> FreeWord:
    """∂ = Π p⁻¹ (ωr)^ε p, libremente reducido"""
    result = FreeWord()
    for t in e.triples:
        if not 0 <= t.relator < len(relators):
            raise PreconditionFailed(f"Índice de relator inválido: {t.relator}")
        result = result * (relators[t.relator] ** t.sign).conjugate(t.conjugator)
    return result


def action_on_fcm(e: FreeCrossedModuleElement, q: FreeWord) -> FreeCrossedModuleElement:
    """(r, ε, p)^q = (r, ε, pq)"""
    return FreeCrossedModuleElement(tuple(
        PeifferTriple(t.relator, t.sign, t.conjugator * q) for t in e.triples
    ))


def fcm_linearize(e: FreeCrossedModuleElement, group: EnumeratedGroup) -> Counter:
    """h₂: (r, ε, p) ↦ ε·r·φ(p) como vector de pares (r, g)"""
    vector: Counter = Counter()
    for t in e.triples:
        vector[(t.relator, group.evaluate(t.conjugator))] += t.sign
    return Counter({k: v for k, v in vector.items() if v != 0})


def fcm_equal(e1: FreeCrossedModuleElement, e2: FreeCrossedModuleElement,
              presentation: GroupPresentation, bound: int,
              group: Optional[EnumeratedGroup] = None) -> bool:
    """
    Igualdad en C(ω): ∂ igual en F(X) y h₂ igual en el Z[G]-módulo libre sobre R

    Raises:
        Unbounded: si G no se enumera dentro de la cota
    """
    relators = presentation.relators
    if fcm_boundary(e1, relators) != fcm_boundary(e2, relators):
        return False
    group = group or enumerate_fp_group(presentation, bound)
    return fcm_linearize(e1, group) == fcm_linearize(e2, group)


def peiffer_swap(r: int, p: FreeWord, s: int, q: FreeWord,
                 relators: Sequence[FreeWord]) -> Tuple[FreeCrossedModuleElement, FreeCrossedModuleElement]:
    """
    Par de Peiffer: (s,+1,q)·(r,+1,p) y (r,+1,p)·(s,+1,q·p⁻¹(ωr)p)

    Ambos lados son iguales en C(ω).
    """
    left = FreeCrossedModuleElement.generator(s, 1, q) * FreeCrossedModuleElement.generator(r, 1, p)
    shifted = q * relators[r].conjugate(p)
    right = FreeCrossedModuleElement.generator(r, 1, p) * FreeCrossedModuleElement.generator(s, 1, shifted)
    return left, right


def format_fcm(e: FreeCrossedModuleElement, presentation: GroupPresentation,
               relator_names: Optional[Sequence[str]] = None) -> str:
    """Formato ASCII: r@x*(s@y)^-1, '1' para la identidad"""
    if not e.triples:
        return "1"
    names = relator_names or [f"r{k}" for k in range(len(presentation.relators))]
    parts = []
    for t in e.triples:
        body = names[t.relator]
        if not t.conjugator.is_identity:
            conj = format_word(t.conjugator, presentation.generators)
            body = f"{body}@{conj}" if len(t.conjugator) == 1 else f"{body}@({conj})"
        if t.sign == -1:
            body = f"({body})^-1" if "@" in body else f"{body}^-1"
        parts.append(body)
    return "*".join(parts)


class FreeCrossedModule:
    """
    El módulo cruzado de homotopía de una presentación: C(ω) → F(X)

    Es la definición algebraica del π₂ relativo de un 2-complejo.
    """

    def __init__(self, presentation: GroupPresentation, relator_names: Optional[Sequence[str]] = None):
        self.presentation = presentation
        self.relator_names = tuple(relator_names or [f"r{k}" for k in range(len(presentation.relators))])
        self._groups: Dict[int, EnumeratedGroup] = {}

    def group(self, bound: int) -> EnumeratedGroup:
        if bound not in self._groups:
            self._groups[bound] = enumerate_fp_group(self.presentation, bound)
        return self._groups[bound]

    def boundary(self, e: FreeCrossedModuleElement) -> FreeWord:
        return fcm_boundary(e, self.presentation.relators)

    def act(self, e: FreeCrossedModuleElement, q: FreeWord) -> FreeCrossedModuleElement:
        return action_on_fcm(e, q)

    def equal(self, e1: FreeCrossedModuleElement, e2: FreeCrossedModuleElement, bound: int) -> bool:
        return fcm_equal(e1, e2, self.presentation, bound, group=self.group(bound))

    def is_identity_among_relations(self, e: FreeCrossedModuleElement, bound: int) -> bool:
        """Elemento del núcleo de ∂ que no es trivial en C(ω)"""
        return self.boundary(e).is_identity and not self.equal(e, FreeCrossedModuleElement(), bound)

    def identities(self, bound: int):
        from .fox import identities_module
        return identities_module(self.presentation, bound)

    def format(self, e: FreeCrossedModuleElement) -> str:
        return format_fcm(e, self.presentation, self.relator_names)


def second_homotopy_crossed_module(presentation: GroupPresentation) -> FreeCrossedModule:
    return FreeCrossedModule(presentation)
