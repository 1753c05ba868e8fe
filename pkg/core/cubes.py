"""
Cubes Module
Combinatoria del n-cubo: celdas como vectores sobre {0, 1, *}, subcomplejos,
colapsos elementales, colapsos de productos, cajas parciales con cadenas de
colapsos entre ellas y subdivisiones de tipo (m)
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import (
    IncidenceMismatch,
    NotContained,
    NotFace,
    NotFree,
    NotPartialBox,
    NotSubcomplex,
    ParseError,
    PreconditionFailed,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_DIMENSION = 6
SYMBOLS = "01*"


@dataclass(frozen=True, order=True)
class CubeCell:
    """Celda de Iⁿ: '*' marca coordenadas libres"""
    spec: str

    def __post_init__(self):
        if not self.spec or any(ch not in SYMBOLS for ch in self.spec):
            raise ParseError(f"Celda inválida: {self.spec!r}", witness=self.spec)

    @property
    def n(self) -> int:
        return len(self.spec)

    @property
    def dimension(self) -> int:
        return self.spec.count("*")

    @property
    def free_coordinates(self) -> List[int]:
        return [i for i, ch in enumerate(self.spec) if ch == "*"]

    def with_coordinate(self, i: int, value: str) -> "CubeCell":
        return CubeCell(self.spec[:i] + value + self.spec[i + 1:])

    def contains(self, other: "CubeCell") -> bool:
        """other es cara (no necesariamente propia) de self"""
        return other.n == self.n and all(a == "*" or a == b for a, b in zip(self.spec, other.spec))

    def sort_key(self) -> Tuple[int, str]:
        return (-self.dimension, self.spec)

    def __str__(self):
        return self.spec


def faces(c: CubeCell) -> List[CubeCell]:
    """Caras de codimensión 1: cada '*' fijado a 0 o a 1"""
    return [c.with_coordinate(i, v) for i in c.free_coordinates for v in "01"]


def opposite(cell: CubeCell, facet: CubeCell) -> CubeCell:
    """La cara de cell opuesta a facet (no se cortan)"""
    if not cell.contains(facet) or facet.dimension != cell.dimension - 1:
        raise NotFace(f"{facet} no es cara de {cell}", witness=(str(facet), str(cell)))
    i = next(k for k in cell.free_coordinates if facet.spec[k] != "*")
    return facet.with_coordinate(i, "1" if facet.spec[i] == "0" else "0")


def closure(cells: Iterable[CubeCell]) -> FrozenSet[CubeCell]:
    """Todas las caras de las celdas dadas (incluidas ellas)"""
    result: Set[CubeCell] = set()
    for cell in cells:
        positions = cell.free_coordinates
        for values in itertools.product("01*", repeat=len(positions)):
            spec = list(cell.spec)
            for i, v in zip(positions, values):
                spec[i] = v
            result.add(CubeCell("".join(spec)))
    return frozenset(result)


def cells_of_cube(n: int, max_dimension: int = DEFAULT_MAX_DIMENSION) -> FrozenSet[CubeCell]:
    """
    Las 3ⁿ celdas de Iⁿ

    Raises:
        PreconditionFailed: si n < 1 o n supera la dimensión máxima
    """
    if n < 1:
        raise PreconditionFailed("La dimensión debe ser >= 1")
    if n > max_dimension:
        raise PreconditionFailed(f"Dimensión {n} mayor que el máximo {max_dimension}")
    return frozenset(CubeCell("".join(p)) for p in itertools.product("01*", repeat=n))


class CubeComplex:
    """Subcomplejo de Iⁿ (cerrado por caras)"""

    def __init__(self, n: int, cells: Iterable[CubeCell], check: bool = True):
        self.n = n
        self.cells: FrozenSet[CubeCell] = frozenset(cells)
        if check:
            for cell in self.cells:
                if cell.n != n:
                    raise PreconditionFailed(f"La celda {cell} no está en I^{n}")
            missing = sorted(closure(self.cells) - self.cells)
            if missing:
                raise NotSubcomplex(f"Faltan caras: {', '.join(map(str, missing[:5]))}",
                                    witness=str(missing[0]))

    @classmethod
    def cube(cls, n: int, max_dimension: int = DEFAULT_MAX_DIMENSION) -> "CubeComplex":
        return cls(n, cells_of_cube(n, max_dimension), check=False)

    @classmethod
    def generated(cls, cells: Sequence[CubeCell]) -> "CubeComplex":
        cells = list(cells)
        if not cells:
            raise PreconditionFailed("Un complejo generado necesita al menos una celda")
        return cls(cells[0].n, closure(cells), check=False)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell: CubeCell) -> bool:
        return cell in self.cells

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, CubeComplex) and self.n == other.n and self.cells == other.cells

    def __hash__(self):
        return hash((self.n, self.cells))

    def issubset(self, other: "CubeComplex") -> bool:
        return self.n == other.n and self.cells <= other.cells

    def cofaces(self, cell: CubeCell) -> List[CubeCell]:
        """Celdas del complejo que contienen propiamente a cell"""
        return [c for c in self.cells if c != cell and c.contains(cell)]

    def sorted_cells(self) -> List[CubeCell]:
        return sorted(self.cells, key=CubeCell.sort_key)

    def __repr__(self):
        return f"CubeComplex(n={self.n}, {len(self.cells)} celdas)"


def elementary_collapse(B: CubeComplex, a: CubeCell, b: CubeCell) -> CubeComplex:
    """
    Colapso elemental B ↘ B ∖ {a, b} con b cara libre de a

    Raises:
        NotFace: si a no está en B, tiene dimensión 0 o b no es cara de codimensión 1
        NotFree: si b es cara de otra celda de B
    """
    if a not in B or b not in B:
        raise NotFace(f"{a} o {b} no están en el complejo", witness=(str(a), str(b)))
    if a.dimension < 1 or b.dimension != a.dimension - 1 or not a.contains(b):
        raise NotFace(f"{b} no es cara de codimensión 1 de {a}", witness=(str(a), str(b)))
    others = [c for c in B.cofaces(b) if c != a]
    if others:
        raise NotFree(f"{b} es también cara de {others[0]}", witness=(str(b), str(others[0])))
    return CubeComplex(B.n, B.cells - {a, b}, check=False)


Collapse = Tuple[CubeCell, CubeCell]


def replay(B: CubeComplex, sequence: Sequence[Collapse]) -> CubeComplex:
    """
    Aplica una sucesión de colapsos elementales verificando cada paso

    Raises:
        NotFree / NotFace: en el primer paso inválido (con su índice en 'step')
    """
    current = B
    for step, (a, b) in enumerate(sequence):
        try:
            current = elementary_collapse(current, a, b)
        except (NotFree, NotFace) as exc:
            exc.context["step"] = step
            raise
    return current


def _prism_collapses(cells: Iterable[CubeCell], j: int, keep_value: str) -> List[Collapse]:
    """
    Colapsos (c, c con j = 1 - keep_value) para las celdas con '*' en j,
    en dimensión decreciente
    """
    free_value = "1" if keep_value == "0" else "0"
    chosen = sorted((c for c in cells if c.spec[j] == "*"), key=CubeCell.sort_key)
    return [(c, c.with_coordinate(j, free_value)) for c in chosen]


def collapse_to_vertex(n: int, v: str, max_dimension: int = DEFAULT_MAX_DIMENSION) -> List[Collapse]:
    """
    Iⁿ ↘ {v} colapsando en la dirección 1, luego 2, ...

    Returns:
        (3ⁿ - 1)/2 pares (a, b)
    """
    cube = cells_of_cube(n, max_dimension)
    if len(v) != n or any(ch not in "01" for ch in v):
        raise PreconditionFailed(f"Vértice inválido: {v!r}")
    sequence: List[Collapse] = []
    for i in range(n):
        stage = [c for c in cube if c.spec[:i] == v[:i]]
        sequence.extend(_prism_collapses(stage, i, v[i]))
    logger.debug("Colapso de I^%d a %s: %d pasos", n, v, len(sequence))
    return sequence


@dataclass
class ProductCollapse:
    """B×I ↘ B×{0} ∪ C×I con sus complejos inicial y final"""
    start: CubeComplex
    target: CubeComplex
    sequence: List[Collapse]


def product_collapse(B: CubeComplex, C: CubeComplex) -> ProductCollapse:
    """
    Colapso de B×I sobre B×{0} ∪ C×I (la última coordenada es el intervalo)

    Raises:
        NotSubcomplex: si C no está contenido en B
    """
    if not C.issubset(B):
        raise NotSubcomplex("C no es subcomplejo de B", witness=sorted(map(str, C.cells - B.cells))[:1])
    start = CubeComplex(B.n + 1, [CubeCell(c.spec + t) for c in B.cells for t in "01*"], check=False)
    target_cells = [CubeCell(c.spec + "0") for c in B.cells]
    target_cells += [CubeCell(c.spec + t) for c in C.cells for t in "1*"]
    target = CubeComplex(B.n + 1, target_cells, check=False)
    moving = [CubeCell(c.spec + "*") for c in B.cells - C.cells]
    sequence = _prism_collapses(moving, B.n, "0")
    return ProductCollapse(start, target, sequence)


# ---------------------------------------------------------------------------
# Cajas parciales
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartialBox:
    """
    Subcomplejo de una r-celda generado por una cara base y caras laterales,
    ninguna opuesta a la base
    """
    cell: CubeCell
    base: CubeCell
    sides: FrozenSet[CubeCell] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "sides", frozenset(self.sides) - {self.base})
        facets = set(faces(self.cell))
        for f in (self.base, *self.sides):
            if f not in facets:
                raise NotPartialBox(f"{f} no es cara de {self.cell}", witness=str(f))
        opp = opposite(self.cell, self.base)
        if opp in self.sides:
            raise NotPartialBox(f"La cara {opp} es opuesta a la base {self.base}", witness=str(opp))

    @property
    def facets(self) -> FrozenSet[CubeCell]:
        return frozenset({self.base} | self.sides)

    @property
    def is_box(self) -> bool:
        return len(self.facets) == 2 * self.cell.dimension - 1

    def complex(self) -> CubeComplex:
        return CubeComplex.generated(sorted(self.facets))

    @classmethod
    def from_facets(cls, cell: CubeCell, facets: Iterable[CubeCell]) -> "PartialBox":
        """
        Caja parcial con las caras dadas, eligiendo la primera base válida

        Raises:
            NotPartialBox: si ninguna cara sirve de base
        """
        facets = frozenset(facets)
        for candidate in sorted(facets):
            if opposite(cell, candidate) not in facets:
                return cls(cell, candidate, facets - {candidate})
        raise NotPartialBox(f"Las caras {sorted(map(str, facets))} no forman una caja parcial en {cell}",
                            witness=str(cell))

    def __str__(self):
        sides = ",".join(sorted(map(str, self.sides)))
        return f"{self.cell}[{self.base}|{sides}]"


def all_partial_boxes(cell: CubeCell) -> List[PartialBox]:
    """Todas las cajas parciales (base, laterales) de una celda"""
    boxes = []
    facets = faces(cell)
    for base in facets:
        opp = opposite(cell, base)
        allowed = [f for f in facets if f not in (base, opp)]
        for k in range(len(allowed) + 1):
            for sides in itertools.combinations(allowed, k):
                boxes.append(PartialBox(cell, base, frozenset(sides)))
    return boxes


def collapse_cell_onto(a: CubeCell, box: PartialBox) -> List[Collapse]:
    """
    Colapsos de la celda a (con todas sus caras) sobre una caja parcial en a

    Con base en la coordenada j con valor v, a = F × I y la caja es
    F×{v} ∪ Q×I; se colapsan las celdas de (F ∖ Q)×I desde su cara j = 1-v.
    """
    if box.cell != a:
        raise NotContained(f"La caja no está en {a}", witness=str(box.cell))
    j = next(k for k in a.free_coordinates if box.base.spec[k] != "*")
    kept = box.complex().cells
    moving = [c for c in closure([a]) if c not in kept]
    sequence = _prism_collapses(moving, j, box.base.spec[j])
    return sequence


@dataclass
class ChainStep:
    """B_{i+1} = B_i ∪ a_i con a_i ∩ B_i caja parcial en a_i"""
    larger: PartialBox
    smaller: PartialBox
    added: CubeCell
    trace: PartialBox
    collapses: List[Collapse]


def _meet_box(a: CubeCell, facets: FrozenSet[CubeCell]) -> Optional[PartialBox]:
    """a ∩ closure(facets) como caja parcial en a, o None"""
    generated = closure(facets)
    meet = frozenset(f for f in faces(a) if f in generated)
    if not meet:
        return None
    try:
        return PartialBox.from_facets(a, meet)
    except NotPartialBox:
        return None


def _as_box(cell: CubeCell, facets: FrozenSet[CubeCell]) -> Optional[PartialBox]:
    try:
        return PartialBox.from_facets(cell, facets)
    except NotPartialBox:
        return None


def box_chain(B: PartialBox, B_prime: PartialBox) -> List[ChainStep]:
    """
    Cadena B = B_s ↘ ... ↘ B_1 = B' de cajas parciales

    Cada paso quita una (r-1)-cara a_i con a_i ∩ B_i caja parcial en a_i;
    el colapso se realiza con collapse_cell_onto. La búsqueda es en
    profundidad y determinista (orden lexicográfico de caras).

    Raises:
        NotContained: si B' no está contenida en B o las celdas difieren
        NotPartialBox: si no existe cadena (no ocurre para cajas válidas)
    """
    if B.cell != B_prime.cell:
        raise NotContained("Las cajas están en celdas distintas", witness=(str(B.cell), str(B_prime.cell)))
    if not B_prime.facets <= B.facets:
        raise NotContained("B' no está contenida en B",
                           witness=sorted(map(str, B_prime.facets - B.facets))[:1])
    cell = B.cell
    target = B_prime.facets

    def search(current: FrozenSet[CubeCell]) -> Optional[List[ChainStep]]:
        if current == target:
            return []
        for a in sorted(current - target):
            remaining = current - {a}
            smaller = _as_box(cell, remaining)
            if smaller is None:
                continue
            trace = _meet_box(a, remaining)
            if trace is None:
                continue
            rest = search(remaining)
            if rest is not None:
                larger = _as_box(cell, current)
                step = ChainStep(larger, smaller, a, trace, collapse_cell_onto(a, trace))
                return [step] + rest
        return None

    chain = search(B.facets)
    if chain is None:
        raise NotPartialBox(f"Sin cadena de {B} a {B_prime}", witness=str(B))
    return chain


def chain_collapses(chain: Sequence[ChainStep]) -> List[Collapse]:
    return [pair for step in chain for pair in step.collapses]


def verify_chain(B: PartialBox, B_prime: PartialBox, chain: Sequence[ChainStep]) -> bool:
    """Reproduce la cadena: condiciones de caja parcial y colapsos válidos"""
    current = B.complex()
    for step in chain:
        if step.added in step.smaller.facets or step.added not in step.larger.facets:
            return False
        if step.larger.facets != step.smaller.facets | {step.added}:
            return False
        if step.trace.complex().cells != frozenset(c for c in closure([step.added])
                                                   if c in step.smaller.complex().cells):
            return False
        current = replay(current, step.collapses)
        if current != step.smaller.complex():
            return False
    return current == B_prime.complex()


# ---------------------------------------------------------------------------
# Subdivisiones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubdivisionPart:
    index: Tuple[int, ...]
    domain: Tuple[Tuple[int, int], ...]


@dataclass
class Subdivision:
    """Subdivisión de tipo (m): partes α_(r) con dominio r_i - 1 <= x_i <= r_i"""
    m: Tuple[int, ...]
    parts: List[SubdivisionPart]

    def part(self, index: Sequence[int]) -> SubdivisionPart:
        index = tuple(index)
        for p in self.parts:
            if p.index == index:
                return p
        raise PreconditionFailed(f"Índice fuera de la subdivisión: {index}")

    def adjacent_pairs(self) -> List[Tuple[Tuple[int, ...], Tuple[int, ...], int]]:
        """Pares (r, r + e_i, i) que comparten la cara x_i = r_i"""
        pairs = []
        for p in self.parts:
            for i, mi in enumerate(self.m):
                if p.index[i] < mi:
                    nxt = p.index[:i] + (p.index[i] + 1,) + p.index[i + 1:]
                    pairs.append((p.index, nxt, i))
        return pairs


def subdivide(m: Sequence[int]) -> Subdivision:
    """
    Raises:
        PreconditionFailed: si algún m_i < 1
    """
    m = tuple(int(k) for k in m)
    if not m or any(k < 1 for k in m):
        raise PreconditionFailed(f"Tipo de subdivisión inválido: {m}")
    parts = []
    for index in itertools.product(*[range(1, k + 1) for k in m]):
        parts.append(SubdivisionPart(index, tuple((r - 1, r) for r in index)))
    return Subdivision(m, parts)


FaceLabels = Dict[Tuple[int, int], Any]


@dataclass
class CompositionReport:
    pairs_checked: int
    parts: int


def compose_check(s: Subdivision, labels: Dict[Tuple[int, ...], FaceLabels]) -> CompositionReport:
    """
    Verifica ∂_i⁺ a_(r) = ∂_i⁻ a_(r + e_i) para cada par adyacente

    Args:
        s: Subdivisión
        labels: índice r -> {(i, ±1): etiqueta de la cara}

    Raises:
        IncidenceMismatch: con el par (r, r') que no encaja
        PreconditionFailed: si falta alguna parte o cara
    """
    for p in s.parts:
        if p.index not in labels:
            raise PreconditionFailed(f"Sin etiquetas para la parte {p.index}")
    pairs = s.adjacent_pairs()
    for r, r_next, i in pairs:
        try:
            upper = labels[r][(i, 1)]
            lower = labels[r_next][(i, -1)]
        except KeyError as exc:
            raise PreconditionFailed(f"Cara sin etiqueta en {r} o {r_next}") from exc
        if upper != lower:
            raise IncidenceMismatch(
                f"Incidencia incompatible en dirección {i + 1} entre {r} y {r_next}",
                pair=(r, r_next), witness=(upper, lower),
            )
    return CompositionReport(len(pairs), len(s.parts))


def parse_cells(text: str) -> List[CubeCell]:
    """Una celda por línea; '#' inicia comentario"""
    cells = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            cells.append(CubeCell(line))
        except ParseError as exc:
            exc.context["line"] = lineno
            raise
    return cells


def format_certificate(sequence: Sequence[Collapse]) -> str:
    return "".join(f"{a} {b}\n" for a, b in sequence)


def parse_certificate(text: str) -> List[Collapse]:
    """Líneas 'a b' de un certificado de colapsos"""
    sequence = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"Línea {lineno}: se esperaban dos celdas", line=lineno)
        sequence.append((CubeCell(parts[0]), CubeCell(parts[1])))
    return sequence
