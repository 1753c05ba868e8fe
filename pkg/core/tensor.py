"""
Tensor Module
Producto tensorial de complejos cruzados libres por la bimorfismo universal,
simetría, inclusión del segundo factor, cilindro 𝕀 ⊗ C y verificación de
homotopías de dimensión 1
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .crossed_complex import (
    Cell,
    CrossedComplex,
    CrossedComplexMorphism,
    Degree2Element,
    Element,
    ModuleElement,
    free_cover,
    interval,
)
from .errors import ObjectNotFound, PreconditionFailed
from .groupoids import DirectedGraph, Edge, EdgePath, GroupoidPresentation, ProductGroupoid

logger = logging.getLogger(__name__)

SEPARATOR = "__"


def pair_name(a: str, b: str) -> str:
    return f"{a}{SEPARATOR}{b}"


@dataclass(frozen=True)
class _Gen:
    """Generador de un factor (grado 0: objeto)"""
    name: str
    degree: int


class TensorComplex(CrossedComplex):
    """A ⊗ B con la tabla de decodificación nombre -> (a, b)"""

    def __init__(self, name: str, c1: GroupoidPresentation, cells, left: CrossedComplex,
                 right: CrossedComplex, pairs: Dict[str, Tuple[str, str]]):
        super().__init__(name, c1, cells)
        self.left = left
        self.right = right
        self.pairs = pairs

    def factors(self, name: str) -> Tuple[str, str]:
        return self.pairs[name]


class _Bimorphism:
    """θ: A_m × B_n → (A⊗B)_{m+n} sobre elementos sin reducir"""

    def __init__(self, A: CrossedComplex, B: CrossedComplex):
        self.A = A
        self.B = B

    # -- utilidades de grado ----------------------------------------------

    @staticmethod
    def degree(x: Any) -> int:
        if isinstance(x, _Gen):
            return x.degree
        if isinstance(x, str):
            return 0
        if isinstance(x, EdgePath):
            return 1
        if isinstance(x, Degree2Element):
            return 2
        return x.degree

    def beta(self, x: Any, side: CrossedComplex) -> str:
        if isinstance(x, _Gen):
            return x.name if x.degree == 0 else side.base_of(x.name)
        if isinstance(x, str):
            return x
        if isinstance(x, EdgePath):
            return x.target
        return x.base

    @staticmethod
    def zero(degree: int, base: str) -> Element:
        if degree == 1:
            return EdgePath.identity(base)
        if degree == 2:
            return Degree2Element(base)
        return ModuleElement(base, degree)

    @staticmethod
    def add(u: Element, v: Element, degree: int) -> Element:
        if degree == 1 or degree == 2:
            return u * v
        return u + v

    @staticmethod
    def neg(u: Element, degree: int) -> Element:
        if degree == 1 or degree == 2:
            return u.inverse()
        return -u

    @staticmethod
    def scale(u: Element, k: int, degree: int) -> Element:
        if degree == 2:
            return u ** k
        return u.scale(k)

    def left_path(self, path: EdgePath, b0: str) -> EdgePath:
        """θ(p, b0) para un camino p de A y un objeto b0 de B"""
        return EdgePath(pair_name(path.source, b0), pair_name(path.target, b0),
                        tuple((pair_name(e, b0), s) for e, s in path.letters))

    def right_path(self, a0: str, path: EdgePath) -> EdgePath:
        return EdgePath(pair_name(a0, path.source), pair_name(a0, path.target),
                        tuple((pair_name(a0, e), s) for e, s in path.letters))

    def letter_path(self, side: CrossedComplex, name: str, sign: int) -> EdgePath:
        return EdgePath.of(side.c1.graph.edge(name), sign)

    # -- θ -------------------------------------------------------------------

    def __call__(self, x: Any, y: Any) -> Element:
        m, n = self.degree(x), self.degree(y)
        d = m + n
        base = pair_name(self.beta(x, self.A), self.beta(y, self.B))

        if isinstance(x, (Degree2Element, ModuleElement)):
            # aditividad y acción en el primer factor (m >= 2)
            result = self.zero(d, base)
            by = self.beta(y, self.B)
            for name, path, coeff in self._terms(x):
                piece = self(_Gen(name, m), y)
                piece = self.scale(piece, coeff, d).act(self.left_path(path, by))
                result = self.add(result, piece, d)
            return result

        if isinstance(x, EdgePath):
            if n == 0:
                return self.left_path(x, self.beta(y, self.B))
            # θ(aa', b) = θ(a', b) + θ(a, b)^{θ(a', βb)}, m = 1
            result = self.zero(d, base)
            by = self.beta(y, self.B)
            letters = x.letters
            for k in range(len(letters) - 1, -1, -1):
                name, sign = letters[k]
                suffix = EdgePath(self.A.c1.graph.letter_target(letters[k]), x.target, letters[k + 1:])
                piece = self._theta_letter(name, sign, y)
                piece = piece.act(self.left_path(suffix, by))
                result = self.add(result, piece, d)
            return result

        if isinstance(x, str):
            x = _Gen(x, 0)
        return self._theta_gen(x, y)

    @staticmethod
    def _terms(x: Any) -> List[Tuple[str, EdgePath, int]]:
        if isinstance(x, Degree2Element):
            return [(name, path, sign) for name, sign, path in x.terms]
        return list(x.terms)

    def _theta_letter(self, name: str, sign: int, y: Any) -> Element:
        """θ(e^{±1}, y) con θ(e⁻¹, y) = −θ(e, y)^{θ(e⁻¹, βy)}"""
        value = self._theta_gen(_Gen(name, 1), y)
        if sign == 1:
            return value
        d = 1 + self.degree(y)
        back = self.left_path(self.letter_path(self.A, name, -1), self.beta(y, self.B))
        return self.neg(value, d).act(back)

    def _theta_gen(self, x: _Gen, y: Any) -> Element:
        m, n = x.degree, self.degree(y)
        d = m + n
        bx = self.beta(x, self.A)
        base = pair_name(bx, self.beta(y, self.B))

        if isinstance(y, (Degree2Element, ModuleElement)):
            result = self.zero(d, base)
            for name, path, coeff in self._terms(y):
                piece = self._theta_gen(x, _Gen(name, n))
                piece = self.scale(piece, coeff, d).act(self.right_path(bx, path))
                result = self.add(result, piece, d)
            return result

        if isinstance(y, EdgePath):
            if m == 0:
                return self.right_path(x.name, y)
            # θ(a, bb') = θ(a, b)^{θ(βa, b')} + θ(a, b'), n = 1
            result = self.zero(d, base)
            letters = y.letters
            for k, (name, sign) in enumerate(letters):
                suffix = EdgePath(self.B.c1.graph.letter_target(letters[k]), y.target, letters[k + 1:])
                piece = self._theta_gen(x, _Gen(name, 1))
                if sign == -1:
                    back = self.right_path(bx, self.letter_path(self.B, name, -1))
                    piece = self.neg(piece, d).act(back)
                piece = piece.act(self.right_path(bx, suffix))
                result = self.add(result, piece, d)
            return result

        if isinstance(y, str):
            y = _Gen(y, 0)
        return self.generator(x, y)

    def generator(self, x: _Gen, y: _Gen) -> Element:
        name = pair_name(x.name, y.name)
        d = x.degree + y.degree
        if d == 0:
            return name
        if d == 1:
            if x.degree == 1:
                edge = self.A.c1.graph.edge(x.name)
                return EdgePath(pair_name(edge.source, y.name), pair_name(edge.target, y.name), ((name, 1),))
            edge = self.B.c1.graph.edge(y.name)
            return EdgePath(pair_name(x.name, edge.source), pair_name(x.name, edge.target), ((name, 1),))
        base = pair_name(self.beta(x, self.A), self.beta(y, self.B))
        if d == 2:
            return Degree2Element(base, ((name, 1, EdgePath.identity(base)),))
        return ModuleElement(base, d, ((name, EdgePath.identity(base), 1),))


def tensor_boundary(A: CrossedComplex, B: CrossedComplex, a: str, b: str) -> Element:
    """
    Borde del generador a ⊗ b (deg a = m, deg b = n, m + n >= 2)

    m = n = 1:       −(βa⊗b) − (a⊗αb) + (αa⊗b) + (a⊗βb)
    m = 1, n >= 2:   −θ(a,δb) − θ(βa,b) + θ(αa,b)^{θ(a,βb)}
    m >= 2, n = 1:   (−)^{m+1}θ(a,βb) + (−)^m θ(a,αb)^{θ(βa,b)} + θ(δa,b)
    m, n >= 2:       θ(δa,b) + (−)^m θ(a,δb)
    m = 0 / n = 0:   θ(a,δb) / θ(δa,b)

    Raises:
        PreconditionFailed: si m + n < 2 (aristas: usar α y β)
    """
    theta = _Bimorphism(A, B)
    m, n = A.degree_of(a), B.degree_of(b)
    d = m + n
    if d < 2:
        raise PreconditionFailed(f"{a}⊗{b} tiene grado {d}: su borde son sus extremos")
    ga, gb = _Gen(a, m), _Gen(b, n)

    def sign(value: Element, k: int) -> Element:
        return value if k % 2 == 0 else theta.neg(value, d - 1)

    def total(*parts: Element) -> Element:
        result = parts[0]
        for part in parts[1:]:
            result = theta.add(result, part, d - 1)
        return result

    if m == 0:
        return theta(a, B.boundary(b))
    if n == 0:
        return theta(A.boundary(a), b)
    ea = A.c1.graph.edge(a) if m == 1 else None
    eb = B.c1.graph.edge(b) if n == 1 else None
    if m == 1 and n == 1:
        return total(
            theta.neg(theta(ea.target, gb), 1),
            theta.neg(theta(ga, eb.source), 1),
            theta(ea.source, gb),
            theta(ga, eb.target),
        )
    if m == 1:
        moved = theta(ea.source, gb).act(theta(ga, B.base_of(b)))
        return total(
            theta.neg(theta(ga, B.boundary(b)), d - 1),
            theta.neg(theta(ea.target, gb), d - 1),
            moved,
        )
    if n == 1:
        moved = theta(ga, eb.source).act(theta(A.base_of(a), gb))
        return total(
            sign(theta(ga, eb.target), m + 1),
            sign(moved, m),
            theta(A.boundary(a), gb),
        )
    return total(theta(A.boundary(a), gb), sign(theta(ga, B.boundary(b)), m))


def tensor_complex(A: CrossedComplex, B: CrossedComplex, maxdeg: int = 4,
                   name: Optional[str] = None) -> TensorComplex:
    """
    A ⊗ B truncado en grado maxdeg

    Los factores con relaciones se sustituyen por sus recubrimientos libres
    (advertencia registrada en notes). π₁(A⊗B) se evalúa en π₁A × π₁B.

    Args:
        A, B: Complejos con base finita
        maxdeg: Grado máximo de la salida
    """
    notes = []
    if not A.is_free:
        A = free_cover(A)
        notes.append(f"{A.name}: tensor calculado sobre el recubrimiento libre")
    if not B.is_free:
        B = free_cover(B)
        notes.append(f"{B.name}: tensor calculado sobre el recubrimiento libre")
    for note in notes:
        logger.warning(note)

    objects = [pair_name(a, b) for a in A.objects for b in B.objects]
    object_pairs = {pair_name(a, b): (a, b) for a in A.objects for b in B.objects}
    edges: List[Edge] = []
    edge_decode: Dict[str, Tuple[str, str, str]] = {}
    pairs: Dict[str, Tuple[str, str]] = dict(object_pairs)
    for e in A.c1.edges:
        for b in B.objects:
            name = pair_name(e.name, b)
            edges.append(Edge(name, pair_name(e.source, b), pair_name(e.target, b)))
            edge_decode[name] = ("L", e.name, b)
            pairs[name] = (e.name, b)
    for a in A.objects:
        for f in B.c1.edges:
            name = pair_name(a, f.name)
            edges.append(Edge(name, pair_name(a, f.source), pair_name(a, f.target)))
            edge_decode[name] = ("R", a, f.name)
            pairs[name] = (a, f.name)
    if len(pairs) != len(object_pairs) + len(edges):
        raise PreconditionFailed("Nombres del producto tensorial en conflicto")

    title = name or f"{A.name}(x){B.name}"
    graph = DirectedGraph(objects, edges)
    c1 = GroupoidPresentation(graph, (), name=title)
    theta = _Bimorphism(A, B)
    cells: List[Cell] = []
    for k in range(2, maxdeg + 1):
        for m in range(0, k + 1):
            n = k - m
            for a in A.basis(m):
                for b in B.basis(n):
                    cname = pair_name(a, b)
                    if cname in pairs:
                        raise PreconditionFailed(f"Nombre repetido en el tensor: {cname}")
                    pairs[cname] = (a, b)
                    base = pair_name(theta.beta(_Gen(a, m), A), theta.beta(_Gen(b, n), B))
                    cells.append(Cell(cname, k, base, tensor_boundary(A, B, a, b)))

    T = TensorComplex(title, c1, cells, A, B, pairs)
    T.notes.extend(notes)
    T.carrier_builder = lambda bound: ProductGroupoid(
        A.pi1_carrier(bound), B.pi1_carrier(bound), object_pairs, edge_decode, A.c1.graph, B.c1.graph
    )
    logger.info("Tensor %s: %s", title, {k: len(T.basis(k)) for k in range(maxdeg + 1)})
    return T


def theta(T: TensorComplex, x: Any, y: Any) -> Element:
    """Imagen de (x, y) por la bimorfismo universal (A, B) → T"""
    return _Bimorphism(T.left, T.right)(x, y)


def symmetry(T: TensorComplex, S: TensorComplex) -> CrossedComplexMorphism:
    """
    Morfismo A⊗B → B⊗A: a⊗b ↦ (−1)^{mn} b⊗a

    Raises:
        PreconditionFailed: si S no es el tensor de los factores intercambiados
    """
    if S.left.name != T.right.name or S.right.name != T.left.name:
        raise PreconditionFailed("Los tensores no tienen los factores intercambiados")
    objects = {}
    images: Dict[str, Element] = {}
    for name, (a, b) in T.pairs.items():
        swapped = pair_name(b, a)
        degree = T.degree_of(name)
        if degree == 0:
            objects[name] = swapped
            continue
        image = S.generator(swapped)
        m = T.left.degree_of(a)
        n = T.right.degree_of(b)
        if (m * n) % 2:
            image = image.inverse() if degree <= 2 else -image
        images[name] = image
    return CrossedComplexMorphism(T, S, objects, images, name="swap")


def embed_second_factor(a0: str, T: TensorComplex) -> CrossedComplexMorphism:
    """
    B → A⊗B, b ↦ a0 ⊗ b

    Raises:
        ObjectNotFound: si a0 no es objeto de A
    """
    A, B = T.left, T.right
    if a0 not in A.objects:
        raise ObjectNotFound(f"Objeto desconocido: {a0}", witness=a0)
    objects = {b: pair_name(a0, b) for b in B.objects}
    images = {}
    for n in range(1, B.top_degree + 1):
        for b in B.basis(n):
            name = pair_name(a0, b)
            if name in T.pairs:
                images[b] = T.generator(name)
    return CrossedComplexMorphism(B, T, objects, images, name=f"{a0}(x)-")


def cylinder(C: CrossedComplex, maxdeg: Optional[int] = None) -> TensorComplex:
    """𝕀 ⊗ C hasta un grado por encima del de C"""
    return tensor_complex(interval(), C, maxdeg if maxdeg is not None else C.top_degree + 1,
                          name=f"Cyl({C.name})")


# ---------------------------------------------------------------------------
# Homotopías
# ---------------------------------------------------------------------------

@dataclass
class HomotopyData:
    """
    f, g: A → C y H: H0 (objeto -> camino f(x) → g(x)) y H (generador de
    grado n -> elemento de grado n+1)
    """
    f: CrossedComplexMorphism
    g: CrossedComplexMorphism
    H0: Dict[str, EdgePath]
    H: Dict[str, Element] = field(default_factory=dict)


@dataclass
class HomotopyReport:
    ok: bool
    witnesses: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)


def check_homotopy(h: HomotopyData, bound: int) -> HomotopyReport:
    """
    Verifica una 1-homotopía como morfismo 𝕀 ⊗ A → C

    i0⊗x ↦ f(x), i1⊗x ↦ g(x), ι⊗x ↦ H(x); las condiciones en cada grado
    son las del borde de ι⊗x en el cilindro, por ejemplo
    δ₂H(x) = g(x)⁻¹ H(αx)⁻¹ f(x) H(βx) para aristas.
    """
    f, g = h.f, h.g
    A, C = f.source, f.target
    if g.source is not A or g.target is not C:
        raise PreconditionFailed("f y g deben tener el mismo origen y destino")
    witnesses: List[str] = []
    warnings: List[str] = []
    for label, morphism in (("f", f), ("g", g)):
        report = morphism.check(bound)
        warnings.extend(report.warnings)
        witnesses.extend(f"{label}: {w}" for w in report.witnesses)

    cyl = cylinder(A, A.top_degree + 1)
    warnings.extend(cyl.notes)
    objects: Dict[str, str] = {}
    images: Dict[str, Element] = {}
    for name, (i, x) in cyl.pairs.items():
        degree = cyl.degree_of(name)
        if degree == 0:
            objects[name] = (f if i == "i0" else g).object_map[x]
        elif i in ("i0", "i1"):
            images[name] = (f if i == "i0" else g).images[x]
        elif A.degree_of(x) == 0:
            if x not in h.H0:
                witnesses.append(f"H0 sin valor en {x}")
                return HomotopyReport(False, witnesses, warnings)
            images[name] = h.H0[x]
        else:
            if x not in h.H:
                witnesses.append(f"H sin valor en {x}")
                return HomotopyReport(False, witnesses, warnings)
            images[name] = h.H[x]
    try:
        F = CrossedComplexMorphism(cyl, C, objects, images, name="H")
        report = F.check(bound)
    except PreconditionFailed as exc:
        witnesses.append(str(exc))
        return HomotopyReport(False, witnesses, warnings)
    warnings.extend(report.warnings)
    witnesses.extend(report.witnesses)
    return HomotopyReport(not witnesses, witnesses, warnings)
