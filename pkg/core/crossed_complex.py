"""
Crossed Complex Module
Complejos cruzados sobre un grupoide: C₁ presentado por un grafo, C₂ módulo
cruzado libre sobre una base, Cₙ (n >= 3) módulos libres sobre π₁C.
Validación de axiomas, grupoide fundamental, homología, ejemplos canónicos
y morfismos.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import FiniteGroup, GroupPresentation, abelian_invariants, \
    enumerate_fp_group, presentation_from_group
from .errors import InfiniteCarrier, MathFailure, NotComposable, ObjectNotFound, \
    PreconditionFailed, Unbounded, UnsupportedAction
from .groupoids import DirectedGraph, Edge, EdgePath, GroupoidCarrier, GroupoidPresentation, \
    format_path, groupoid_carrier, vertex_group
from .linalg import AbelianInvariants, express_in_basis, int_matrix, left_kernel, \
    row_space_basis, sub_quotient_invariants

logger = logging.getLogger(__name__)

Conjugator = EdgePath


# ---------------------------------------------------------------------------
# Elementos
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Degree2Element:
    """
    Producto de ternas (r, ε, p) en C₂(base): r^ε actuado por el camino p

    El camino p va de t(r) a base. La multiplicación es concatenación; la
    igualdad fina se decide en el complejo (CrossedComplex.equal).
    """
    base: str
    terms: Tuple[Tuple[str, int, Conjugator], ...] = ()

    def __post_init__(self):
        for name, sign, path in self.terms:
            if sign not in (1, -1):
                raise PreconditionFailed(f"Signo inválido en {name}: {sign}")
            if path.target != self.base:
                raise NotComposable(f"El conjugador de {name} termina en {path.target}, no en {self.base}",
                                    witness=(name, path.target, self.base))
        # cancelación libre de ternas adyacentes inversas
        stack: List[Tuple[str, int, Conjugator]] = []
        for term in self.terms:
            if stack and stack[-1][0] == term[0] and stack[-1][1] == -term[1] and stack[-1][2] == term[2]:
                stack.pop()
            else:
                stack.append(term)
        object.__setattr__(self, "terms", tuple(stack))

    @classmethod
    def identity(cls, base: str) -> "Degree2Element":
        return cls(base)

    @property
    def is_identity(self) -> bool:
        return not self.terms

    def __mul__(self, other: "Degree2Element") -> "Degree2Element":
        if self.base != other.base:
            raise NotComposable(f"Elementos de C₂ en objetos distintos: {self.base}, {other.base}",
                                witness=(self.base, other.base))
        return Degree2Element(self.base, self.terms + other.terms)

    def inverse(self) -> "Degree2Element":
        return Degree2Element(self.base, tuple((n, -s, p) for n, s, p in reversed(self.terms)))

    def __pow__(self, k: int) -> "Degree2Element":
        base = self if k >= 0 else self.inverse()
        result = Degree2Element(self.base)
        for _ in range(abs(k)):
            result = result * base
        return result

    def act(self, path: EdgePath) -> "Degree2Element":
        """Acción a derecha de un camino base -> base'"""
        if path.source != self.base:
            raise NotComposable(f"El camino parte de {path.source}, no de {self.base}",
                                witness=(path.source, self.base))
        return Degree2Element(path.target, tuple((n, s, p * path) for n, s, p in self.terms))

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class ModuleElement:
    """Combinación entera Σ k·(c, p) en Cₙ(base), n >= 3, con p: t(c) -> base"""
    base: str
    degree: int
    terms: Tuple[Tuple[str, Conjugator, int], ...] = ()

    def __post_init__(self):
        combined: Dict[Tuple[str, EdgePath], int] = {}
        for name, path, coeff in self.terms:
            if path.target != self.base:
                raise NotComposable(f"El camino de {name} termina en {path.target}, no en {self.base}",
                                    witness=(name, path.target, self.base))
            key = (name, path.reduced())
            combined[key] = combined.get(key, 0) + int(coeff)
        cleaned = tuple((n, p, k) for (n, p), k in combined.items() if k != 0)
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def zero(cls, base: str, degree: int) -> "ModuleElement":
        return cls(base, degree)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "ModuleElement"):
        if self.base != other.base or self.degree != other.degree:
            raise NotComposable("Elementos de módulos distintos",
                                witness=((self.base, self.degree), (other.base, other.degree)))

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        self._check(other)
        return ModuleElement(self.base, self.degree, self.terms + other.terms)

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(self.base, self.degree, tuple((n, p, -k) for n, p, k in self.terms))

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return self + (-other)

    def scale(self, k: int) -> "ModuleElement":
        return ModuleElement(self.base, self.degree, tuple((n, p, c * k) for n, p, c in self.terms))

    def __rmul__(self, k: int) -> "ModuleElement":
        return self.scale(k)

    def act(self, path: EdgePath) -> "ModuleElement":
        if path.source != self.base:
            raise NotComposable(f"El camino parte de {path.source}, no de {self.base}",
                                witness=(path.source, self.base))
        return ModuleElement(path.target, self.degree, tuple((n, p * path, k) for n, p, k in self.terms))


Element = Union[str, EdgePath, Degree2Element, ModuleElement]


def _format_conjugated(name: str, path: EdgePath) -> str:
    if path.is_identity:
        return name
    text = format_path(path)
    return f"{name}@({text})" if len(path) > 1 else f"{name}@{text}"


def format_element(element: Element) -> str:
    """Literal ASCII de un elemento en la gramática de los archivos .crs"""
    if isinstance(element, str):
        return element
    if isinstance(element, EdgePath):
        return format_path(element)
    if isinstance(element, Degree2Element):
        if element.is_identity:
            return f"id_{element.base}"
        parts = []
        for name, sign, path in element.terms:
            head = name if sign == 1 else f"{name}^-1"
            parts.append(_format_conjugated(head, path))
        return " * ".join(parts)
    if element.is_zero:
        return f"0_{element.base}"
    parts = []
    for name, path, coeff in element.terms:
        body = _format_conjugated(name, path)
        magnitude = abs(coeff)
        body = body if magnitude == 1 else f"{magnitude}*{body}"
        if not parts:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Complejo cruzado
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    """Generador libre de grado >= 2 con objeto base y borde"""
    name: str
    degree: int
    base: str
    boundary: Any


class CrossedComplex:
    """
    Complejo cruzado libre (o presentado) con base finita

    Args:
        name: Nombre
        c1: Presentación del grupoide C₁
        cells: Generadores de grado >= 2
        relations: Elementos (por grado >= 2) declarados triviales
    """

    def __init__(self, name: str, c1: GroupoidPresentation, cells: Iterable[Cell] = (),
                 relations: Optional[Dict[int, Sequence[Element]]] = None):
        self.name = name
        self.c1 = c1
        self.cells: Dict[int, Dict[str, Cell]] = {}
        self.relations: Dict[int, Tuple[Element, ...]] = {
            n: tuple(items) for n, items in (relations or {}).items() if items
        }
        self.carrier_builder: Optional[Callable[[int], GroupoidCarrier]] = None
        self.notes: List[str] = []
        self._carriers: Dict[Tuple[str, int], GroupoidCarrier] = {}
        taken = set(c1.objects) | {e.name for e in c1.edges}
        for cell in cells:
            if cell.degree < 2:
                raise PreconditionFailed(f"La celda {cell.name} debe tener grado >= 2")
            if cell.name in taken:
                raise PreconditionFailed(f"Nombre repetido: {cell.name}")
            if not c1.graph.has_object(cell.base):
                raise ObjectNotFound(f"Objeto desconocido: {cell.base}", witness=cell.base)
            taken.add(cell.name)
            self.cells.setdefault(cell.degree, {})[cell.name] = cell
        for cell in self.all_cells():
            self._check_boundary_shape(cell)

    # -- estructura --------------------------------------------------------

    @property
    def objects(self) -> Tuple[str, ...]:
        return self.c1.objects

    @property
    def top_degree(self) -> int:
        degrees = [n for n, cells in self.cells.items() if cells]
        if degrees:
            return max(degrees)
        return 1 if self.c1.edges else 0

    def basis(self, n: int) -> List[str]:
        if n == 0:
            return list(self.objects)
        if n == 1:
            return [e.name for e in self.c1.edges]
        return list(self.cells.get(n, {}))

    def all_cells(self) -> List[Cell]:
        return [cell for n in sorted(self.cells) for cell in self.cells[n].values()]

    def cell(self, name: str) -> Cell:
        for cells in self.cells.values():
            if name in cells:
                return cells[name]
        raise ObjectNotFound(f"Generador desconocido: {name}", witness=name)

    def degree_of(self, name: str) -> int:
        if self.c1.graph.has_object(name):
            return 0
        if self.c1.graph.has_edge(name):
            return 1
        return self.cell(name).degree

    def boundary(self, name: str) -> Any:
        return self.cell(name).boundary

    def base_of(self, name: str) -> str:
        if self.c1.graph.has_edge(name):
            return self.c1.graph.edge(name).target
        return self.cell(name).base

    @property
    def is_free(self) -> bool:
        return self.c1.is_free and not any(self.relations.values())

    def generator(self, name: str) -> Element:
        """El generador como elemento de su grado"""
        degree = self.degree_of(name)
        if degree == 0:
            return name
        if degree == 1:
            return EdgePath.of(self.c1.graph.edge(name))
        base = self.cell(name).base
        if degree == 2:
            return Degree2Element(base, ((name, 1, EdgePath.identity(base)),))
        return ModuleElement(base, degree, ((name, EdgePath.identity(base), 1),))

    def identity(self, degree: int, base: str) -> Element:
        if degree == 0:
            return base
        if degree == 1:
            return EdgePath.identity(base)
        if degree == 2:
            return Degree2Element(base)
        return ModuleElement(base, degree)

    def _check_boundary_shape(self, cell: Cell):
        b = cell.boundary
        if cell.degree == 2:
            if not isinstance(b, EdgePath) or not b.is_loop or b.source != cell.base:
                raise PreconditionFailed(f"El borde de {cell.name} debe ser un lazo en {cell.base}")
            self.c1.graph.path(b.letters, source=b.source)
        elif cell.degree == 3:
            if not isinstance(b, Degree2Element) or b.base != cell.base:
                raise PreconditionFailed(f"El borde de {cell.name} debe estar en C₂({cell.base})")
            self._check_terms(cell.name, [(n, p) for n, _, p in b.terms], 2)
        else:
            if not isinstance(b, ModuleElement) or b.base != cell.base or b.degree != cell.degree - 1:
                raise PreconditionFailed(
                    f"El borde de {cell.name} debe estar en C{cell.degree - 1}({cell.base})"
                )
            self._check_terms(cell.name, [(n, p) for n, p, _ in b.terms], cell.degree - 1)

    def _check_terms(self, owner: str, terms: Sequence[Tuple[str, EdgePath]], degree: int):
        for name, path in terms:
            if name not in self.cells.get(degree, {}):
                raise PreconditionFailed(f"{owner}: {name} no es generador de grado {degree}")
            if path.source != self.cells[degree][name].base:
                raise NotComposable(f"{owner}: el camino de {name} no parte de su objeto base",
                                    witness=(name, path.source))
            self.c1.graph.path(path.letters, source=path.source)

    # -- bordes y acciones -------------------------------------------------

    def delta(self, element: Element, degree: int) -> Element:
        """δ_degree extendido a elementos"""
        if degree == 1:
            return element.target
        if degree == 2:
            result = EdgePath.identity(element.base)
            for name, sign, path in element.terms:
                loop = self.boundary(name)
                result = result * (path.inverse() * (loop if sign == 1 else loop.inverse()) * path)
            return result
        if degree == 3:
            result = Degree2Element(element.base)
            for name, path, coeff in element.terms:
                result = result * (self.boundary(name) ** coeff).act(path)
            return result
        result = ModuleElement(element.base, degree - 1)
        for name, path, coeff in element.terms:
            result = result + self.boundary(name).act(path).scale(coeff)
        return result

    def linear_terms(self, element: Element, degree: int) -> List[Tuple[str, EdgePath, int]]:
        """Términos (generador, camino, coeficiente) de la abelianización"""
        if degree == 2:
            return [(name, path, sign) for name, sign, path in element.terms]
        return list(element.terms)

    # -- portadores --------------------------------------------------------

    def c1_carrier(self, bound: int) -> GroupoidCarrier:
        key = ("c1", bound)
        if key not in self._carriers:
            self._carriers[key] = groupoid_carrier(self.c1, bound)
        return self._carriers[key]

    def pi1_carrier(self, bound: int) -> GroupoidCarrier:
        """Portador de π₁C (producto de factores para productos tensoriales)"""
        key = ("pi1", bound)
        if key not in self._carriers:
            if self.carrier_builder is not None:
                self._carriers[key] = self.carrier_builder(bound)
            else:
                self._carriers[key] = groupoid_carrier(fundamental_groupoid(self), bound)
        return self._carriers[key]

    def vector(self, element: Element, degree: int, carrier: GroupoidCarrier) -> Counter:
        """Coordenadas enteras {(generador, flecha de π₁)} de un elemento de grado >= 2"""
        vec: Counter = Counter()
        for name, path, coeff in self.linear_terms(element, degree):
            vec[(name, carrier.evaluate(path))] += coeff
        return Counter({k: v for k, v in vec.items() if v})

    def relation_translates(self, degree: int, base: str, carrier: GroupoidCarrier) -> List[Counter]:
        """Trasladados de las relaciones de un grado a un objeto (requiere homs finitos)"""
        rows = []
        for rel in self.relations.get(degree, ()):
            rel_base = rel.base
            rel_vec = self.vector(rel, degree, carrier)
            for g in carrier.hom(rel_base, base):
                rows.append(Counter({(n, carrier.compose(a, g)): k for (n, a), k in rel_vec.items()}))
        return rows

    def in_relation_span(self, vec: Counter, degree: int, base: str, carrier: GroupoidCarrier) -> Optional[bool]:
        """
        ¿Está vec en el retículo generado por las relaciones trasladadas?

        Returns:
            True/False, o None si el portador es infinito y hay relaciones
        """
        vec = Counter({k: v for k, v in vec.items() if v})
        if not self.relations.get(degree):
            return not vec
        try:
            rows = self.relation_translates(degree, base, carrier)
        except InfiniteCarrier:
            return None
        keys = sorted(set(vec) | {k for row in rows for k in row},
                      key=lambda k: (k[0], carrier.sort_key(k[1])))
        index = {k: i for i, k in enumerate(keys)}
        R = int_matrix([[row.get(k, 0) for k in keys] for row in rows], len(keys))
        v = int_matrix([[vec.get(k, 0) for k in keys]], len(keys))
        basis = row_space_basis(R)
        try:
            express_in_basis(basis, v)
        except PreconditionFailed:
            return False
        return True

    def equal(self, x: Element, y: Element, degree: int, bound: int) -> Optional[bool]:
        """
        Igualdad en Cₙ; None si no es decidible con los portadores disponibles

        En grado 2 se comparan δ₂ en C₁ y la abelianización: la diferencia
        queda en Ker δ₂, donde la abelianización es inyectiva.
        """
        if degree == 0:
            return x == y
        if degree == 1:
            if (x.source, x.target) != (y.source, y.target):
                return False
            return self.c1_carrier(bound).equal_paths(x, y)
        if x.base != y.base:
            return False
        if degree == 2:
            diff = x * y.inverse()
            if not self.c1_carrier(bound).is_identity(self.c1_carrier(bound).evaluate(self.delta(diff, 2))):
                return False
            carrier = self.pi1_carrier(bound)
            return self.in_relation_span(self.vector(diff, 2, carrier), 2, diff.base, carrier)
        carrier = self.pi1_carrier(bound)
        return self.in_relation_span(self.vector(x - y, degree, carrier), degree, x.base, carrier)

    def is_trivial(self, element: Element, degree: int, bound: int) -> Optional[bool]:
        base = element if degree == 0 else element.source if degree == 1 else element.base
        return self.equal(element, self.identity(degree, base), degree, bound)

    def __repr__(self):
        ranks = ", ".join(f"{n}:{len(self.basis(n))}" for n in range(self.top_degree + 1))
        return f"CrossedComplex({self.name}; {ranks})"


def fundamental_groupoid(C: CrossedComplex) -> GroupoidPresentation:
    """π₁C = C₁/Im δ₂: relaciones de C₁ más δ₂(b) = identidad"""
    relations = list(C.c1.relations)
    for cell in C.cells.get(2, {}).values():
        relations.append((cell.boundary, EdgePath.identity(cell.base)))
    for rel in C.relations.get(2, ()):
        relations.append((C.delta(rel, 2), EdgePath.identity(rel.base)))
    return GroupoidPresentation(C.c1.graph, tuple(relations), name=f"pi1({C.name})")


def free_cover(C: CrossedComplex) -> CrossedComplex:
    """El complejo libre sobre la misma base (se descartan las relaciones)"""
    c1 = GroupoidPresentation(C.c1.graph, (), name=C.c1.name)
    return CrossedComplex(f"{C.name}~", c1, C.all_cells())


# ---------------------------------------------------------------------------
# Validación
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    """Resultado por axioma con testigos y advertencias"""
    checks: Dict[str, bool] = field(default_factory=dict)
    witnesses: Dict[str, List[str]] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, check: str, passed: bool, witness: Optional[str] = None):
        self.checks[check] = self.checks.get(check, True) and passed
        if not passed and witness is not None:
            self.witnesses.setdefault(check, []).append(witness)

    def warn(self, message: str):
        logger.warning(message)
        self.warnings.append(message)


def validate_complex(C: CrossedComplex, bound: int) -> ValidationReport:
    """
    Verifica los axiomas de complejo cruzado sobre los generadores

    - δ₂δ₃ = 0 en C₁ y δₙ₋₁δₙ = 0 para n >= 4
    - las relaciones de cada grado tienen borde trivial
    - δ₂ es módulo cruzado: δ₂(c^{δ₂b}) = δ₂(b⁻¹cb) para generadores b, c
    - δ₂c actúa trivialmente sobre Cₙ, n >= 3
    - Cₙ abeliano para n >= 3 (por construcción)

    Las comprobaciones no decidibles dentro de la cota quedan como advertencias.
    """
    report = ValidationReport()

    def guarded(check: str, action: Callable[[], Optional[bool]], witness: str):
        try:
            result = action()
        except (Unbounded, InfiniteCarrier) as exc:
            report.warn(f"{C.name}: {check} omitido para {witness} ({exc})")
            report.record(check, True)
            return
        if result is None:
            report.warn(f"{C.name}: {check} no decidible para {witness}")
            report.record(check, True)
        else:
            report.record(check, bool(result), witness)

    # δ₂δ₃ y δδ superiores
    report.record("delta_delta", True)
    for n in range(3, C.top_degree + 1):
        for cell in C.cells.get(n, {}).values():
            image = C.delta(cell.boundary, n - 1)
            guarded("delta_delta", lambda: C.is_trivial(image, n - 2, bound), cell.name)

    # relaciones respetadas por el borde
    report.record("relations", True)
    for n, rels in C.relations.items():
        for rel in rels:
            image = C.delta(rel, n)
            guarded("relations", lambda: C.is_trivial(image, n - 1, bound), format_element(rel))

    # axioma de módulo cruzado sobre generadores de C₂
    report.record("crossed_module", True)
    cells2 = list(C.cells.get(2, {}).values())
    for b in cells2:
        for c in cells2:
            if b.base != c.base:
                continue
            gb, gc = C.generator(b.name), C.generator(c.name)
            left = gb.inverse() * gc * gb
            right = gc.act(b.boundary)
            guarded("crossed_module", lambda: C.equal(left, right, 2, bound), f"{b.name},{c.name}")

    # δ₂c actúa trivialmente en grados >= 3
    report.record("trivial_action", True)
    for n in range(3, C.top_degree + 1):
        for x in C.cells.get(n, {}).values():
            for c in cells2:
                if c.base != x.base:
                    continue
                gx = C.generator(x.name)
                guarded("trivial_action", lambda: C.equal(gx.act(c.boundary), gx, n, bound),
                        f"{x.name}^{c.name}")

    report.record("abelian_high_degrees", True)
    if not report.ok:
        logger.info("Complejo %s: fallan %s", C.name, [k for k, v in report.checks.items() if not v])
    return report


# ---------------------------------------------------------------------------
# Homología
# ---------------------------------------------------------------------------

def _fox_vector(loop: EdgePath, graph: DirectedGraph, carrier: GroupoidCarrier) -> Counter:
    """Derivada de Fox a derecha de un lazo: coordenadas {(arista, flecha)}"""
    vec: Counter = Counter()
    suffix = carrier.identity(loop.target)
    for name, sign in reversed(loop.letters):
        step = carrier.evaluate(EdgePath.of(graph.edge(name), sign))
        if sign == 1:
            vec[(name, suffix)] += 1
            suffix = carrier.compose(step, suffix)
        else:
            suffix = carrier.compose(step, suffix)
            vec[(name, suffix)] -= 1
    return vec


def _translate(vec: Counter, g: Any, carrier: GroupoidCarrier) -> Counter:
    return Counter({(n, carrier.compose(a, g)): k for (n, a), k in vec.items()})


def _coordinates(C: CrossedComplex, n: int, p: str, carrier: GroupoidCarrier) -> List[Tuple[str, Any]]:
    if n == 1:
        return [(e.name, g) for e in C.c1.edges for g in carrier.hom(e.target, p)]
    return [(name, g) for name in C.basis(n) for g in carrier.hom(C.base_of(name), p)]


def _boundary_matrix(C: CrossedComplex, n: int, p: str, carrier: GroupoidCarrier,
                     rows: List[Tuple[str, Any]], cols: List[Tuple[str, Any]]) -> np.ndarray:
    index = {key: j for j, key in enumerate(cols)}
    matrix = np.zeros((len(rows), len(cols)), dtype=object)
    for i, (name, g) in enumerate(rows):
        if n == 2:
            image = _fox_vector(C.boundary(name), C.c1.graph, carrier)
        else:
            image = C.vector(C.boundary(name), n - 1, carrier)
        for key, coeff in _translate(image, g, carrier).items():
            if key in index:
                matrix[i, index[key]] += coeff
            elif coeff:
                raise MathFailure(f"Borde de {name} fuera de la base en grado {n - 1}", witness=key)
    return matrix


def _relation_matrix(C: CrossedComplex, n: int, p: str, carrier: GroupoidCarrier,
                     cols: List[Tuple[str, Any]]) -> np.ndarray:
    if n < 2:
        return np.zeros((0, len(cols)), dtype=object)
    index = {key: j for j, key in enumerate(cols)}
    rows = C.relation_translates(n, p, carrier)
    matrix = np.zeros((len(rows), len(cols)), dtype=object)
    for i, row in enumerate(rows):
        for key, coeff in row.items():
            matrix[i, index[key]] += coeff
    return matrix


def homology(C: CrossedComplex, n: int, p: str, bound: int) -> AbelianInvariants:
    """
    Hₙ(C, p) = Ker δₙ / Im δₙ₊₁ en el objeto p

    Linealiza Cₖ(p) sobre la base (c, g) con g ∈ π₁C(t(c), p); en grado 2
    usa C₂^{ab} y el módulo derivado de C₁ (exacto si C₁ es libre o δ₂ es
    trivial). Las relaciones de cada grado se cocientan.

    Args:
        C: Complejo cruzado
        n: Grado (1 devuelve la abelianización del grupo de vértices)
        p: Objeto
        bound: Cota de enumeración de π₁

    Raises:
        ObjectNotFound: si p no es objeto de C
        UnsupportedAction: si π₁C es infinito
        Unbounded: si π₁C no se enumera dentro de la cota
    """
    if not C.c1.graph.has_object(p):
        raise ObjectNotFound(f"Objeto desconocido: {p}", witness=p)
    if n < 1:
        raise PreconditionFailed("La homología se calcula para n >= 1")
    if n == 1:
        return abelian_invariants(vertex_group(fundamental_groupoid(C), p))

    carrier = C.pi1_carrier(bound)
    if not carrier.finite:
        raise UnsupportedAction("Homología con operadores requiere π₁C finito", witness=C.name)

    c1_carrier = C.c1_carrier(bound)
    trivial_delta2 = all(c1_carrier.is_identity(c1_carrier.evaluate(cell.boundary))
                         for cell in C.cells.get(2, {}).values())
    if n == 2 and not C.c1.is_free and C.cells.get(2) and not trivial_delta2:
        logger.warning("H2(%s): C1 con relaciones y δ₂ no trivial, el resultado es aproximado", C.name)

    basis_n = _coordinates(C, n, p, carrier)
    basis_lower = _coordinates(C, n - 1, p, carrier)
    basis_upper = _coordinates(C, n + 1, p, carrier)

    if n == 2 and trivial_delta2:
        D_n = np.zeros((len(basis_n), len(basis_lower)), dtype=object)
    else:
        D_n = _boundary_matrix(C, n, p, carrier, basis_n, basis_lower)
    Q_lower = _relation_matrix(C, n - 1, p, carrier, basis_lower)
    stacked = np.vstack([D_n, Q_lower]) if Q_lower.shape[0] else D_n
    if stacked.shape[1] == 0:
        cycles = np.eye(len(basis_n), dtype=np.int64).astype(object)
    else:
        cycles = left_kernel(stacked)[:, :len(basis_n)]
    cycles = row_space_basis(cycles)

    D_upper = _boundary_matrix(C, n + 1, p, carrier, basis_upper, basis_n)
    Q_n = _relation_matrix(C, n, p, carrier, basis_n)
    image = np.vstack([D_upper, Q_n]) if D_upper.size or Q_n.size else np.zeros((0, len(basis_n)), dtype=object)
    try:
        result = sub_quotient_invariants(cycles, image)
    except PreconditionFailed as exc:
        raise MathFailure(f"Imagen fuera del núcleo en grado {n}: δδ != 0", witness=C.name) from exc
    logger.debug("H%d(%s, %s) = %s", n, C.name, p, result)
    return result


# ---------------------------------------------------------------------------
# Ejemplos
# ---------------------------------------------------------------------------

def point(name: str = "point") -> CrossedComplex:
    return CrossedComplex(name, GroupoidPresentation(DirectedGraph(["o"]), (), name=name))


def interval(name: str = "I") -> CrossedComplex:
    """El grupoide indiscreto en dos objetos: i0 --iota--> i1"""
    graph = DirectedGraph(["i0", "i1"], [Edge("iota", "i0", "i1")])
    return CrossedComplex(name, GroupoidPresentation(graph, (), name=name))


def _one_object_groupoid(p: GroupPresentation, obj: str = "o") -> GroupoidPresentation:
    graph = DirectedGraph([obj], [Edge(g, obj, obj) for g in p.generators])
    relations = []
    for r in p.relators:
        loop = EdgePath(obj, obj, tuple((p.generators[g], s) for g, s in r.letters))
        relations.append((loop, EdgePath.identity(obj)))
    return GroupoidPresentation(graph, tuple(relations), name=p.name)


def _as_presentation(G: Union[GroupPresentation, FiniteGroup]) -> GroupPresentation:
    if isinstance(G, FiniteGroup):
        return presentation_from_group(G)
    return G


def _linear_element(degree: int, base: str, coefficients: Dict[str, int]) -> Element:
    ident = EdgePath.identity(base)
    if degree == 2:
        terms = []
        for name, k in coefficients.items():
            terms.extend([(name, 1 if k > 0 else -1, ident)] * abs(k))
        return Degree2Element(base, tuple(terms))
    return ModuleElement(base, degree, tuple((name, ident, k) for name, k in coefficients.items()))


def _zero_boundary(degree: int, base: str) -> Element:
    if degree == 2:
        return EdgePath.identity(base)
    if degree == 3:
        return Degree2Element(base)
    return ModuleElement(base, degree - 1)


def from_presentation(p: GroupPresentation, relator_names: Optional[Sequence[str]] = None,
                      name: Optional[str] = None) -> CrossedComplex:
    """Complejo cruzado libre de una presentación (grados 1 y 2)"""
    obj = "o"
    graph = DirectedGraph([obj], [Edge(g, obj, obj) for g in p.generators])
    names = list(relator_names) if relator_names else [f"r{k}" for k in range(len(p.relators))]
    cells = []
    for rname, r in zip(names, p.relators):
        loop = EdgePath(obj, obj, tuple((p.generators[g], s) for g, s in r.letters))
        cells.append(Cell(rname, 2, obj, loop))
    title = name or p.name or "presentation"
    return CrossedComplex(title, GroupoidPresentation(graph, (), name=title), cells)


def _abelian_check(p: GroupPresentation, bound: int):
    if p.rank <= 1:
        return
    group = enumerate_fp_group(p, bound).group
    if not group.is_abelian():
        raise PreconditionFailed(f"El grupo {p.name or p.generators} no es abeliano")


def make_example(kind: str, bound: int, **data: Any) -> CrossedComplex:
    """
    Ejemplos canónicos

    Args:
        kind: 'CGn' (group, n), 'CG1Mn' (group, module, n) o
              'from_presentation' (presentation)
        bound: Cota para comprobar conmutatividad

    El módulo de 'CG1Mn' es un dict con 'generators', 'relations' (filas
    enteras) y 'action' ({generador de G: matriz entera}); 'trivial' o un
    entero k dan Z^k con acción trivial.

    Raises:
        PreconditionFailed: si los datos no son válidos
    """
    if kind == "from_presentation":
        return from_presentation(data["presentation"], data.get("relator_names"), data.get("name"))

    if kind == "CGn":
        p = _as_presentation(data["group"])
        n = int(data["n"])
        if n < 1:
            raise PreconditionFailed("CGn requiere n >= 1")
        title = data.get("name") or f"C({p.name or 'G'},{n})"
        if n == 1:
            return CrossedComplex(title, _one_object_groupoid(p))
        _abelian_check(p, bound)
        c1 = GroupoidPresentation(DirectedGraph(["o"]), (), name=title)
        cells = [Cell(g, n, "o", _zero_boundary(n, "o")) for g in p.generators]
        relations = []
        for r in p.relators:
            coeffs = {g: r.exponent_sum(k) for k, g in enumerate(p.generators) if r.exponent_sum(k)}
            if coeffs:
                relations.append(_linear_element(n, "o", coeffs))
        return CrossedComplex(title, c1, cells, {n: relations})

    if kind == "CG1Mn":
        p = _as_presentation(data["group"])
        n = int(data["n"])
        if n < 2:
            raise PreconditionFailed("CG1Mn requiere n >= 2")
        module = data.get("module", "trivial")
        if module == "trivial":
            module = 1
        if isinstance(module, int):
            gens = [f"m{k}" for k in range(module)] if module > 1 else ["m"]
            identity = [[int(i == j) for j in range(len(gens))] for i in range(len(gens))]
            module = {"generators": gens, "relations": [], "action": {x: identity for x in p.generators}}
        gens = list(module["generators"])
        title = data.get("name") or f"C({p.name or 'G'},1;M,{n})"
        c1 = _one_object_groupoid(p)
        c1 = GroupoidPresentation(c1.graph, c1.relations, name=title)
        cells = [Cell(m, n, "o", _zero_boundary(n, "o")) for m in gens]
        relations: List[Element] = []
        for row in module.get("relations", []):
            if len(row) != len(gens):
                raise PreconditionFailed("Relación del módulo con longitud incorrecta")
            coeffs = {m: int(k) for m, k in zip(gens, row) if k}
            if coeffs:
                relations.append(_linear_element(n, "o", coeffs))
        for x, matrix in module.get("action", {}).items():
            if x not in p.generators:
                raise PreconditionFailed(f"{x} no es generador de G")
            edge_path = EdgePath("o", "o", ((x, 1),))
            for i, m in enumerate(gens):
                moved = _linear_element(n, "o", {m: 1})
                if n == 2:
                    moved = moved.act(edge_path)
                    target = _linear_element(2, "o", {g: int(k) for g, k in zip(gens, matrix[i]) if k})
                    relations.append(moved * target.inverse())
                else:
                    moved = moved.act(edge_path)
                    target = _linear_element(n, "o", {g: int(k) for g, k in zip(gens, matrix[i]) if k})
                    relations.append(moved - target)
        return CrossedComplex(title, c1, cells, {n: relations})

    raise PreconditionFailed(f"Ejemplo desconocido: {kind}")


# ---------------------------------------------------------------------------
# Morfismos
# ---------------------------------------------------------------------------

@dataclass
class MorphismReport:
    checks: Dict[str, bool] = field(default_factory=dict)
    witnesses: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


class CrossedComplexMorphism:
    """
    Morfismo dado por imágenes de objetos y generadores

    Args:
        source, target: Complejos
        object_map: Objeto -> objeto
        images: Generador (grado >= 1) -> elemento del destino
    """

    def __init__(self, source: CrossedComplex, target: CrossedComplex,
                 object_map: Dict[str, str], images: Dict[str, Element], name: str = ""):
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.images = dict(images)
        self.name = name
        for obj in source.objects:
            if obj not in self.object_map:
                raise PreconditionFailed(f"El objeto {obj} no tiene imagen")
        for n in range(1, source.top_degree + 1):
            for g in source.basis(n):
                if g not in self.images:
                    raise PreconditionFailed(f"El generador {g} no tiene imagen")

    def apply(self, element: Element, degree: int) -> Element:
        if degree == 0:
            return self.object_map[element]
        if degree == 1:
            result = EdgePath.identity(self.object_map[element.source])
            for name, sign in element.letters:
                image = self.images[name]
                result = result * (image if sign == 1 else image.inverse())
            return result
        base = self.object_map[element.base]
        if degree == 2:
            result = Degree2Element(base)
            for name, sign, path in element.terms:
                result = result * (self.images[name] ** sign).act(self.apply(path, 1))
            return result
        result = ModuleElement(base, degree)
        for name, path, coeff in element.terms:
            result = result + self.images[name].act(self.apply(path, 1)).scale(coeff)
        return result

    def check(self, bound: int) -> MorphismReport:
        """Compatibilidad con bordes y relaciones sobre los generadores"""
        report = MorphismReport()
        S, T = self.source, self.target

        def verdict(check: str, outcome: Optional[bool], witness: str):
            if outcome is None:
                message = f"{check}: no decidible para {witness}"
                logger.warning(message)
                report.warnings.append(message)
                outcome = True
            report.checks[check] = report.checks.get(check, True) and outcome
            if not outcome:
                report.witnesses.append(f"{check}: {witness}")

        for e in S.c1.edges:
            image = self.images[e.name]
            ok = isinstance(image, EdgePath) and \
                (image.source, image.target) == (self.object_map[e.source], self.object_map[e.target])
            verdict("degree_1", ok, e.name)
        for n in range(2, S.top_degree + 1):
            for cell in S.cells.get(n, {}).values():
                image = self.images[cell.name]
                try:
                    left = self.apply(cell.boundary, n - 1)
                    right = T.delta(image, n)
                    verdict(f"boundary_{n}", T.equal(left, right, n - 1, bound), cell.name)
                except (Unbounded, InfiniteCarrier) as exc:
                    verdict(f"boundary_{n}", None, f"{cell.name} ({exc})")
                except NotComposable:
                    verdict(f"boundary_{n}", False, cell.name)
        for lhs, rhs in S.c1.relations:
            try:
                verdict("relations", T.equal(self.apply(lhs, 1), self.apply(rhs, 1), 1, bound),
                        f"{format_path(lhs)} = {format_path(rhs)}")
            except (Unbounded, InfiniteCarrier) as exc:
                verdict("relations", None, str(exc))
        for n, rels in S.relations.items():
            for rel in rels:
                try:
                    verdict("relations", T.is_trivial(self.apply(rel, n), n, bound), format_element(rel))
                except (Unbounded, InfiniteCarrier) as exc:
                    verdict("relations", None, str(exc))
        return report

    @classmethod
    def identity(cls, C: CrossedComplex) -> "CrossedComplexMorphism":
        images = {g: C.generator(g) for n in range(1, C.top_degree + 1) for g in C.basis(n)}
        return cls(C, C, {o: o for o in C.objects}, images, name=f"id_{C.name}")

    def then(self, other: "CrossedComplexMorphism") -> "CrossedComplexMorphism":
        """Composición self seguido de other"""
        objects = {o: other.object_map[t] for o, t in self.object_map.items()}
        images = {}
        for g, image in self.images.items():
            images[g] = other.apply(image, self.source.degree_of(g))
        return CrossedComplexMorphism(self.source, other.target, objects, images,
                                      name=f"{other.name}*{self.name}")
