"""
Fox Module
Sombra lineal de los módulos cruzados: módulo derivado, derivadas de Fox
(convención a derecha), módulo de identidades entre relaciones y el
funtor ∇ hacia complejos de cadenas con operadores
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .algebra import (
    EnumeratedGroup,
    FreeGroup,
    FreeWord,
    GroupPresentation,
    GroupRingElement,
    GroupRingMatrix,
    apply_matrix,
    compose_matrices,
    enumerate_fp_group,
    format_group_ring,
    kernel_coinvariants,
    module_kernel,
    regular_representation,
)
from .crossed_module import FreeCrossedModuleElement, PeifferTriple, fcm_boundary
from .errors import PreconditionFailed
from .linalg import AbelianInvariants, left_kernel, sub_quotient_invariants

logger = logging.getLogger(__name__)


class GroupMap:
    """
    φ: F(X) → G, con G finito (enumerado) o G = F(X) (palabras formales)

    Args:
        generators: Nombres de X
        group: Grupo enumerado; None para el caso libre
    """

    def __init__(self, generators: Sequence[str], group: Optional[EnumeratedGroup] = None):
        self.generators = tuple(generators)
        self.group = group
        self.carrier = group.group if group is not None else FreeGroup(self.generators)

    def __call__(self, word: FreeWord) -> Any:
        if self.group is None:
            return word
        return self.group.evaluate(word)

    def letter(self, index: int, sign: int = 1) -> Any:
        return self(FreeWord.generator(index, sign))

    @property
    def identity(self) -> Any:
        return self.carrier.identity

    @classmethod
    def for_presentation(cls, p: GroupPresentation, bound: Optional[int] = None) -> "GroupMap":
        """Libre si no hay relatores, enumerado en otro caso"""
        if not p.relators or bound is None:
            return cls(p.generators, None)
        return cls(p.generators, enumerate_fp_group(p, bound))


def evaluate_in_group_ring(word: FreeWord, phi: GroupMap) -> GroupRingElement:
    """La palabra como elemento φ(w) de Z[G]"""
    return GroupRingElement.of(phi.carrier, phi(word))


def fox_derivative(w: FreeWord, x: int, phi: Optional[GroupMap] = None,
                   generators: Optional[Sequence[str]] = None) -> GroupRingElement:
    """
    Derivada de Fox a derecha ∂w/∂x

    Para w = l₁…l_k: Σ_{l_i = x} φ(l_{i+1}…l_k) − Σ_{l_i = x⁻¹} φ(l_i…l_k).
    Satisface ∂(uv)/∂x = (∂u/∂x)·φ(v) + ∂v/∂x.

    Args:
        w: Palabra
        x: Índice del generador
        phi: Aplicación a G (None: grupo libre)
        generators: Nombres para el caso libre

    Returns:
        Elemento de Z[G]
    """
    if phi is None:
        names = generators or tuple(f"g{k}" for k in range(max([g for g, _ in w.letters] + [x]) + 1))
        phi = GroupMap(names, None)
    carrier = phi.carrier
    terms: Dict[Any, int] = {}
    suffix = phi.identity
    for gen, sign in reversed(w.letters):
        step = phi.letter(gen, sign)
        if gen == x:
            if sign == 1:
                terms[suffix] = terms.get(suffix, 0) + 1
            else:
                key = carrier.op(step, suffix)
                terms[key] = terms.get(key, 0) - 1
        suffix = carrier.op(step, suffix)
    return GroupRingElement(carrier, terms)


def h0(g: Any, phi: GroupMap) -> GroupRingElement:
    """Derivación g ↦ g − 1"""
    return GroupRingElement.of(phi.carrier, g) - GroupRingElement.one(phi.carrier)


def h1(w: FreeWord, phi: GroupMap) -> List[GroupRingElement]:
    """Derivación universal en el módulo derivado D_φ (libre sobre X)"""
    return [fox_derivative(w, x, phi) for x in range(len(phi.generators))]


def h2(e: FreeCrossedModuleElement, phi: GroupMap, relator_count: int) -> List[GroupRingElement]:
    """Abelianización C(ω) → ⊕_R Z[G]: (r, ε, p) ↦ ε·r·φ(p)"""
    row = [GroupRingElement.zero(phi.carrier) for _ in range(relator_count)]
    for t in e.triples:
        row[t.relator] = row[t.relator] + GroupRingElement.of(phi.carrier, phi(t.conjugator), t.sign)
    return row


def boundary_one(phi: GroupMap) -> GroupRingMatrix:
    """∂₁: D_φ → Z[G], matriz columna (φx − 1)"""
    return [[h0(phi.letter(x), phi)] for x in range(len(phi.generators))]


@dataclass
class FoxJacobian:
    """Matriz |R|×|X| de derivadas de Fox empujadas a Z[G]"""
    presentation: GroupPresentation
    phi: GroupMap
    matrix: GroupRingMatrix

    def format(self) -> List[str]:
        return ["[" + ", ".join(format_group_ring(entry) for entry in row) + "]" for row in self.matrix]


def fox_jacobian(p: GroupPresentation, bound: int, phi: Optional[GroupMap] = None) -> FoxJacobian:
    """
    Jacobiano de Fox de una presentación

    Raises:
        Unbounded: si G = F/N no se enumera dentro de la cota
    """
    phi = phi or GroupMap(p.generators, enumerate_fp_group(p, bound))
    matrix = [[fox_derivative(r, x, phi) for x in range(p.rank)] for r in p.relators]
    return FoxJacobian(p, phi, matrix)


def _is_zero_row(row: Sequence[GroupRingElement]) -> bool:
    return all(entry.is_zero for entry in row)


def words_up_to(rank: int, length: int) -> List[FreeWord]:
    """Todas las palabras reducidas de longitud <= length"""
    letters = [(g, s) for g in range(rank) for s in (1, -1)]
    seen = {FreeWord()}
    words = [FreeWord()]
    for n in range(1, length + 1):
        for combo in itertools.product(letters, repeat=n):
            w = FreeWord(combo)
            if len(w) == n and w not in seen:
                seen.add(w)
                words.append(w)
    return words


def fcm_sequences(relator_count: int, length: int, conjugators: Sequence[FreeWord]) -> List[FreeCrossedModuleElement]:
    """Sucesiones de ternas de Peiffer de longitud <= length"""
    triples = [PeifferTriple(r, s, q) for r in range(relator_count) for s in (1, -1) for q in conjugators]
    result = [FreeCrossedModuleElement()]
    for n in range(1, length + 1):
        result.extend(FreeCrossedModuleElement(combo) for combo in itertools.product(triples, repeat=n))
    return result


@dataclass
class DiagramReport:
    """Conmutatividad del diagrama derivado y exactitud en D_φ"""
    square_two_ok: bool
    square_one_ok: bool
    composite_zero: bool
    exact_at_derived: Optional[bool]
    cases: int
    witnesses: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.square_two_ok and self.square_one_ok and self.composite_zero
                and self.exact_at_derived is not False)


def derived_diagram_check(p: GroupPresentation, bound: int, max_length: int = 2,
                          max_conjugator: int = 1, max_word: int = 3) -> DiagramReport:
    """
    Verifica ∂₂∘h₂ = h₁∘μ y ∂₁∘h₁ = h₀∘φ, ∂₁∂₂ = 0 y exactitud en D_φ

    Args:
        p: Presentación con G finito
        bound: Cota de enumeración
        max_length: Longitud de las sucesiones de C(ω)
        max_conjugator: Longitud de los conjugadores
        max_word: Longitud de las palabras de F(X) para el segundo cuadrado
    """
    jac = fox_jacobian(p, bound)
    phi = jac.phi
    d1 = boundary_one(phi)
    witnesses: List[str] = []
    cases = 0

    square_two = True
    conjugators = words_up_to(p.rank, max_conjugator)
    for e in fcm_sequences(len(p.relators), max_length, conjugators):
        cases += 1
        left = apply_matrix(h2(e, phi, len(p.relators)), jac.matrix) if p.relators else \
            [GroupRingElement.zero(phi.carrier) for _ in range(p.rank)]
        right = h1(fcm_boundary(e, p.relators), phi)
        if left != right:
            square_two = False
            if len(witnesses) < 5:
                witnesses.append(f"d2*h2 != h1*mu en {len(e)} ternas")

    square_one = True
    for w in words_up_to(p.rank, max_word):
        cases += 1
        left = apply_matrix(h1(w, phi), d1)[0] if p.rank else GroupRingElement.zero(phi.carrier)
        if left != h0(phi(w), phi):
            square_one = False
            if len(witnesses) < 5:
                witnesses.append(f"d1*h1 != h0*phi en {p.word_text(w)}")

    composite = compose_matrices(jac.matrix, d1) if p.relators and p.rank else []
    composite_zero = all(_is_zero_row(row) for row in composite)

    exact = None
    if phi.group is not None and p.rank:
        G = phi.group.group
        E1 = regular_representation(d1, G)
        kernel = left_kernel(E1)
        image = regular_representation(jac.matrix, G) if p.relators else \
            np.zeros((0, p.rank * G.order), dtype=object)
        exact = sub_quotient_invariants(kernel, image).is_trivial
    return DiagramReport(square_two, square_one, composite_zero, exact, cases, witnesses)


@dataclass
class IdentitiesModule:
    """Ker ∂₂ ≅ módulo de identidades entre relaciones"""
    presentation: GroupPresentation
    group: EnumeratedGroup
    generators: List[List[GroupRingElement]]
    invariants: AbelianInvariants
    coinvariants: AbelianInvariants

    @property
    def rank(self) -> int:
        return self.invariants.free_rank

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def format(self) -> List[str]:
        return ["(" + ", ".join(format_group_ring(e) for e in row) + ")" for row in self.generators]


def identities_module(p: GroupPresentation, bound: int) -> IdentitiesModule:
    """
    Núcleo del Jacobiano de Fox actuando sobre el módulo libre en R

    Returns:
        Generadores (base entera plegada a Z[G]), invariantes del grupo
        abeliano subyacente y de K/K·I(G)
    """
    jac = fox_jacobian(p, bound)
    G = jac.phi.group.group
    kernel = module_kernel(jac.matrix, G, rows=len(p.relators)) if p.rank else \
        module_kernel([], G, rows=len(p.relators))
    invariants = AbelianInvariants(free_rank=len(kernel))
    coinvariants = kernel_coinvariants(kernel, G)
    logger.info("Identidades de %s: rango %d", p.name or p.generators, len(kernel))
    return IdentitiesModule(p, jac.phi.group, kernel, invariants, coinvariants)


# ---------------------------------------------------------------------------
# ∇: complejos cruzados → complejos de cadenas con operadores
# ---------------------------------------------------------------------------

@dataclass
class OperatorChainComplex:
    """Z[G]-módulos libres graduados con matrices de borde ∂_n: C_n → C_{n-1}"""
    carrier: Any
    basis: Dict[int, List[str]]
    boundaries: Dict[int, GroupRingMatrix]

    @property
    def top_degree(self) -> int:
        return max(self.basis) if self.basis else 0

    def rank(self, n: int) -> int:
        return len(self.basis.get(n, []))

    def failing_degrees(self) -> List[int]:
        """Grados n con ∂_{n}∘∂_{n-1} ≠ 0"""
        failing = []
        for n in sorted(self.boundaries):
            if n - 1 not in self.boundaries or not self.boundaries[n] or not self.boundaries[n - 1]:
                continue
            product = compose_matrices(self.boundaries[n], self.boundaries[n - 1])
            if not all(_is_zero_row(row) for row in product):
                failing.append(n)
        return failing

    def format(self) -> List[str]:
        lines = []
        for n in sorted(self.boundaries, reverse=True):
            lines.append(f"d{n}: {self.rank(n)} -> {self.rank(n - 1)}")
            for name, row in zip(self.basis[n], self.boundaries[n]):
                lines.append(f"  {name}: [" + ", ".join(format_group_ring(e) for e in row) + "]")
        return lines


def nabla(C: Any, bound: int) -> OperatorChainComplex:
    """
    ∇C para complejos cruzados libres de un solo objeto

    Grado 0: Z[π₁C]; grado 1: D_φ sobre las aristas; grado 2: C₂^{ab};
    grados >= 3: copiados. Las aristas de C₁ actúan como generadores de F(X).

    Raises:
        PreconditionFailed: si C tiene varios objetos o relaciones
        Unbounded: si π₁C no se enumera dentro de la cota
    """
    if len(C.objects) != 1:
        raise PreconditionFailed("nabla está implementado para complejos de un solo objeto")
    if not C.is_free:
        raise PreconditionFailed("nabla requiere un complejo cruzado libre")
    obj = C.objects[0]
    edges = [e.name for e in C.c1.edges]
    edge_index = {name: k for k, name in enumerate(edges)}

    def word_of(path) -> FreeWord:
        return FreeWord(tuple((edge_index[name], sign) for name, sign in path.letters))

    pi1 = GroupPresentation(tuple(edges), tuple(word_of(C.boundary(r)) for r in C.basis(2)),
                            name=C.name)
    phi = GroupMap.for_presentation(pi1, bound)
    carrier = phi.carrier

    basis: Dict[int, List[str]] = {0: [obj], 1: edges}
    boundaries: Dict[int, GroupRingMatrix] = {}
    if edges:
        boundaries[1] = boundary_one(phi)
    for n in range(2, C.top_degree + 1):
        basis[n] = list(C.basis(n))
    if basis.get(2):
        boundaries[2] = [h1(word_of(C.boundary(r)), phi) for r in basis[2]]
    for n in range(3, C.top_degree + 1):
        lower = basis.get(n - 1, [])
        index = {name: k for k, name in enumerate(lower)}
        rows = []
        for c in basis[n]:
            row = [GroupRingElement.zero(carrier) for _ in lower]
            for name, path, coeff in C.linear_terms(C.boundary(c), n - 1):
                row[index[name]] = row[index[name]] + GroupRingElement.of(carrier, phi(word_of(path)), coeff)
            rows.append(row)
        boundaries[n] = rows
    complex_ = OperatorChainComplex(carrier, basis, boundaries)
    failing = complex_.failing_degrees()
    if failing:
        logger.warning("nabla(%s): d∘d != 0 en grados %s", C.name, failing)
    return complex_
