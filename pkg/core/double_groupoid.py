"""
Double Groupoid Module
Grupoide doble con conexiones y un vértice construido desde un módulo
cruzado μ: M → P: cuadrados (m; c, a, d, b) con a·b·μ(m) = c·d, sus dos
composiciones, conexiones, rellenos delgados y 3-cascarones conmutativos
"""

import functools
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .crossed_module import CrossedModule, validate
from .cubes import compose_check, subdivide
from .errors import InfiniteCarrier, InvalidCrossedModule, MalformedShell, NotComposable, PreconditionFailed
from .algebra import FiniteGroup

logger = logging.getLogger(__name__)

FACE_NAMES = ("a1-", "a1+", "a2-", "a2+", "a3-", "a3+")
EDGE_LABELS = tuple(f"{k}{s}{t}" for k in "ABC" for s in "01" for t in "01")
# Árbol generador del cubo: A_yz une (0,y,z) con (1,y,z), B_xz y C_xy en las direcciones 2 y 3
GAUGE_TREE = ("A00", "A01", "A10", "A11", "B00", "B01", "C00")
# Órdenes de M y P hasta los que la batería de leyes es exhaustiva
EXHAUSTIVE_ORDER = 6


@dataclass(frozen=True)
class Square:
    """
    Cuadrado con elemento m ∈ M y aristas en P

    Attributes:
        c: arista superior (∂₁⁻)
        a: arista izquierda (∂₂⁻)
        d: arista derecha (∂₂⁺)
        b: arista inferior (∂₁⁺)
    """
    m: int
    c: int
    a: int
    d: int
    b: int

    @property
    def edges(self) -> Tuple[int, int, int, int]:
        return (self.c, self.a, self.d, self.b)

    def side(self, name: str) -> int:
        return getattr(self, name)


def _face_sides(name: str) -> Dict[str, str]:
    """Etiquetas de las aristas (c, a, d, b) de la cara α_i^σ"""
    i, sigma = int(name[1]), "0" if name[2] == "-" else "1"
    if i == 1:
        return {"c": f"C{sigma}0", "a": f"B{sigma}0", "d": f"B{sigma}1", "b": f"C{sigma}1"}
    if i == 2:
        return {"c": f"C0{sigma}", "a": f"A{sigma}0", "d": f"A{sigma}1", "b": f"C1{sigma}"}
    return {"c": f"B0{sigma}", "a": f"A0{sigma}", "d": f"A1{sigma}", "b": f"B1{sigma}"}


FACE_SIDES = {name: _face_sides(name) for name in FACE_NAMES}


@dataclass(frozen=True)
class Shell3:
    """Seis caras α₁^±, α₂^±, α₃^± en el orden de FACE_NAMES"""
    faces: Tuple[Square, ...]

    def __post_init__(self):
        if len(self.faces) != 6:
            raise MalformedShell("Un 3-cascarón tiene exactamente seis caras")

    def face(self, name: str) -> Square:
        return self.faces[FACE_NAMES.index(name)]

    def replace(self, **faces: Square) -> "Shell3":
        """replace(a1p=...) con p/m en lugar de +/-"""
        current = dict(zip(FACE_NAMES, self.faces))
        for key, value in faces.items():
            current[key.replace("p", "+").replace("m", "-")] = value
        return Shell3(tuple(current[name] for name in FACE_NAMES))

    def edges(self) -> Dict[str, int]:
        """
        Las doce aristas del cubo

        Raises:
            MalformedShell: si dos caras no coinciden en una arista común
        """
        values: Dict[str, Tuple[int, str]] = {}
        for name, square in zip(FACE_NAMES, self.faces):
            for side, label in FACE_SIDES[name].items():
                value = square.side(side)
                if label in values and values[label][0] != value:
                    other = values[label][1]
                    raise MalformedShell(f"Las caras {other} y {name} no coinciden en la arista {label}",
                                         witness=(label, other, name))
                values.setdefault(label, (value, name))
        return {label: values[label][0] for label in EDGE_LABELS}


class DoubleGroupoid:
    """Cuadrados de un módulo cruzado finito con sus operaciones"""

    def __init__(self, xm: CrossedModule):
        self.xm = xm
        self.M: FiniteGroup = xm.M
        self.P: FiniteGroup = xm.P
        self._fibers: Dict[int, List[int]] = {}
        for m in self.M.elements():
            self._fibers.setdefault(xm.boundary(m), []).append(m)
        self._squares: Optional[List[Square]] = None

    # -- pertenencia ---------------------------------------------------
    def _p(self, *elements: int) -> int:
        return self.P.product(elements)

    def is_square(self, s: Square) -> bool:
        return self._p(s.a, s.b, self.xm.boundary(s.m)) == self._p(s.c, s.d)

    def square(self, m: int, c: int, a: int, d: int, b: int) -> Square:
        """
        Raises:
            PreconditionFailed: si no se cumple a·b·μ(m) = c·d
        """
        s = Square(m, c, a, d, b)
        if not self.is_square(s):
            raise PreconditionFailed(f"{self.format_square(s)} no cumple a·b·μ(m) = c·d",
                                     witness=self.format_square(s))
        return s

    def solutions(self, c: int, a: int, d: int, b: int) -> List[int]:
        """Elementos m con μ(m) = (a·b)⁻¹·c·d"""
        target = self._p(self.P.inverse(self._p(a, b)), c, d)
        return list(self._fibers.get(target, []))

    @property
    def squares(self) -> List[Square]:
        """Todos los cuadrados: para cada m, a, c, d se resuelve b"""
        if self._squares is None:
            P, mu = self.P, self.xm.boundary
            result = []
            for m in self.M.elements():
                for a, c, d in itertools.product(P.elements(), repeat=3):
                    b = self._p(P.inverse(a), c, d, P.inverse(mu(m)))
                    result.append(Square(m, c, a, d, b))
            self._squares = result
        return self._squares

    # -- composiciones -------------------------------------------------
    def compose_h(self, s: Square, t: Square) -> Square:
        """
        s | t con m'' = m^{b'}·m'

        Raises:
            NotComposable: si la arista derecha de s no es la izquierda de t
        """
        if s.d != t.a:
            raise NotComposable("compose_h: arista derecha distinta de la izquierda",
                                witness=(self.format_square(s), self.format_square(t)))
        m = self.M.op(self.xm.act(s.m, t.b), t.m)
        return Square(m, self._p(s.c, t.c), s.a, t.d, self._p(s.b, t.b))

    def compose_v(self, s: Square, t: Square) -> Square:
        """
        s sobre t con m'' = m'·m^{d'}

        Raises:
            NotComposable: si la arista inferior de s no es la superior de t
        """
        if s.b != t.c:
            raise NotComposable("compose_v: arista inferior distinta de la superior",
                                witness=(self.format_square(s), self.format_square(t)))
        m = self.M.op(t.m, self.xm.act(s.m, t.d))
        return Square(m, s.c, self._p(s.a, t.a), self._p(s.d, t.d), t.b)

    def hid(self, a: int) -> Square:
        """Identidad horizontal de la arista vertical a"""
        return Square(0, 0, a, a, 0)

    def vid(self, c: int) -> Square:
        """Identidad vertical de la arista horizontal c"""
        return Square(0, c, 0, 0, c)

    def hinv(self, s: Square) -> Square:
        P = self.P
        m = self.xm.act(self.M.inverse(s.m), P.inverse(s.b))
        return Square(m, P.inverse(s.c), s.d, s.a, P.inverse(s.b))

    def vinv(self, s: Square) -> Square:
        P = self.P
        m = self.xm.act(self.M.inverse(s.m), P.inverse(s.d))
        return Square(m, s.b, P.inverse(s.a), P.inverse(s.d), s.c)

    def transpose(self, s: Square) -> Square:
        return Square(self.M.inverse(s.m), s.a, s.c, s.b, s.d)

    # -- conexiones ----------------------------------------------------
    def connection(self, a: int, sign: int) -> Square:
        """Γ⁻(a): arriba e izquierda a; Γ⁺(a): derecha y abajo a"""
        if sign < 0:
            return Square(0, a, a, 0, 0)
        return Square(0, 0, 0, a, a)

    def corner(self, z: int) -> Square:
        """Conexión de esquina (1; 1, z, 1, z⁻¹)"""
        return Square(0, 0, z, 0, self.P.inverse(z))

    def elbow(self, z: int) -> Square:
        """Conexión de esquina (1; z, 1, z⁻¹, 1)"""
        return Square(0, z, 0, self.P.inverse(z), 0)

    # -- delgados ------------------------------------------------------
    def is_thin(self, s: Square) -> bool:
        return s.m == self.M.identity

    def fold(self, s: Square) -> int:
        return s.m

    def thin_filler(self, a: int, c: int, d: int) -> Square:
        """El único cuadrado con m = 1 y aristas a, c, d"""
        return Square(0, c, a, d, self._p(self.P.inverse(a), c, d))

    # -- arreglos ------------------------------------------------------
    def compose_array(self, grid: Sequence[Sequence[Square]]) -> Square:
        """
        Compone un arreglo rectangular de cuadrados

        Raises:
            PreconditionFailed: si el arreglo no es rectangular
            IncidenceMismatch: si dos cuadrados adyacentes no comparten arista
        """
        rows = [list(row) for row in grid]
        if not rows or not rows[0] or any(len(row) != len(rows[0]) for row in rows):
            raise PreconditionFailed("El arreglo de cuadrados debe ser rectangular y no vacío")
        labels = {}
        for i, row in enumerate(rows, 1):
            for j, s in enumerate(row, 1):
                labels[(i, j)] = {(0, -1): s.c, (0, 1): s.b, (1, -1): s.a, (1, 1): s.d}
        compose_check(subdivide((len(rows), len(rows[0]))), labels)
        composed_rows = []
        for row in rows:
            acc = row[0]
            for s in row[1:]:
                acc = self.compose_h(acc, s)
            composed_rows.append(acc)
        result = composed_rows[0]
        for s in composed_rows[1:]:
            result = self.compose_v(result, s)
        return result

    # -- cascarones ----------------------------------------------------
    def check_shell(self, sh: Shell3) -> Dict[str, int]:
        """
        Raises:
            MalformedShell: si una cara no es cuadrado o las aristas no encajan
        """
        for name, s in zip(FACE_NAMES, sh.faces):
            if not self.is_square(s):
                raise MalformedShell(f"La cara {name} no cumple a·b·μ(m) = c·d", witness=name)
        return sh.edges()

    def odd_composite(self, sh: Shell3) -> Square:
        e = self.check_shell(sh)
        f = sh.face
        return self.compose_array([
            [self.connection(e["B00"], 1), f("a1-"), self.connection(e["B01"], -1)],
            [f("a3-"), f("a2+"), self.hid(e["A11"])],
        ])

    def even_composite(self, sh: Shell3) -> Square:
        e = self.check_shell(sh)
        f = sh.face
        return self.compose_array([
            [self.hid(e["A00"]), f("a2-"), f("a3+")],
            [self.connection(e["B10"], 1), f("a1+"), self.connection(e["B11"], -1)],
        ])

    def hcl_commutative(self, sh: Shell3) -> bool:
        """Ley de homotopía: composición de caras impares = pares"""
        return self.odd_composite(sh) == self.even_composite(sh)

    def c1_composite(self, sh: Shell3) -> Square:
        """α₁⁺ expresada con las otras cinco caras"""
        e = self.check_shell(sh)
        f = sh.face
        P = self.P
        return self.compose_array([
            [self.connection(P.inverse(e["A00"]), 1), self.vinv(f("a2-")), self.corner(P.inverse(e["A01"]))],
            [self.hinv(self.transpose(f("a3-"))), f("a1-"), self.transpose(f("a3+"))],
            [self.elbow(P.inverse(e["A10"])), f("a2+"), self.connection(e["A11"], -1)],
        ])

    def c1_commutative(self, sh: Shell3) -> bool:
        return self.c1_composite(sh) == sh.face("a1+")

    def degenerate_shell(self, s: Optional[Square] = None, direction: int = 1) -> Shell3:
        """Cascarón degenerado sobre s en la dirección dada (identidad de compose_shells)"""
        s = s if s is not None else Square(0, 0, 0, 0, 0)
        if direction == 1:
            faces = {"a1-": s, "a1+": s, "a2-": self.vid(s.c), "a2+": self.vid(s.b),
                     "a3-": self.vid(s.a), "a3+": self.vid(s.d)}
        elif direction == 2:
            faces = {"a2-": s, "a2+": s, "a1-": self.vid(s.c), "a1+": self.vid(s.b),
                     "a3-": self.hid(s.a), "a3+": self.hid(s.d)}
        elif direction == 3:
            faces = {"a3-": s, "a3+": s, "a1-": self.hid(s.c), "a1+": self.hid(s.b),
                     "a2-": self.hid(s.a), "a2+": self.hid(s.d)}
        else:
            raise PreconditionFailed(f"Dirección inválida: {direction}")
        return Shell3(tuple(faces[name] for name in FACE_NAMES))

    def shell_from_faces(self, faces: Dict[str, Square]) -> Shell3:
        missing = [name for name in FACE_NAMES if name not in faces]
        if missing:
            raise MalformedShell(f"Faltan caras: {', '.join(missing)}", witness=missing)
        sh = Shell3(tuple(faces[name] for name in FACE_NAMES))
        self.check_shell(sh)
        return sh

    def compose_shells(self, sh: Shell3, other: Shell3, direction: int) -> Shell3:
        """
        Pega dos cascarones por α_d⁺(sh) = α_d⁻(other)

        Raises:
            NotComposable: si las caras de pegado difieren
        """
        if direction not in (1, 2, 3):
            raise PreconditionFailed(f"Dirección inválida: {direction}")
        self.check_shell(sh)
        self.check_shell(other)
        if sh.face(f"a{direction}+") != other.face(f"a{direction}-"):
            raise NotComposable(f"Las caras de pegado en la dirección {direction} difieren",
                                witness=direction)
        faces = {f"a{direction}-": sh.face(f"a{direction}-"), f"a{direction}+": other.face(f"a{direction}+")}
        for k in (1, 2, 3):
            if k == direction:
                continue
            # la dirección d alarga las aristas A, B o C; A es vertical en α₂ y α₃, B sólo en α₁
            horizontal = direction == 3 or (direction == 2 and k == 3)
            op = self.compose_h if horizontal else self.compose_v
            for sign in "-+":
                faces[f"a{k}{sign}"] = op(sh.face(f"a{k}{sign}"), other.face(f"a{k}{sign}"))
        return self.shell_from_faces(faces)

    # -- enumeración de cascarones ------------------------------------
    def _face_targets(self, edges: np.ndarray) -> np.ndarray:
        """(N, 6) con (a·b)⁻¹·c·d por cara, para aristas (N, 12)"""
        mul, inv = self.P.mul, self.P.inv
        col = {label: k for k, label in enumerate(EDGE_LABELS)}
        targets = []
        for name in FACE_NAMES:
            sides = FACE_SIDES[name]
            a, b, c, d = (edges[:, col[sides[k]]] for k in "abcd")
            targets.append(mul[mul[inv[mul[a, b]], c], d])
        return np.stack(targets, axis=1)

    def _shells_from_edges(self, row: np.ndarray, choose: Callable[[List[int]], int]) -> Shell3:
        labels = dict(zip(EDGE_LABELS, (int(v) for v in row)))
        faces = []
        for name in FACE_NAMES:
            sides = FACE_SIDES[name]
            c, a, d, b = (labels[sides[k]] for k in "cadb")
            faces.append(Square(choose(self.solutions(c, a, d, b)), c, a, d, b))
        return Shell3(tuple(faces))

    def shell_count(self) -> int:
        """Número de cascarones bien formados (suma sobre las aristas)"""
        fiber = np.zeros(self.P.order, dtype=np.int64)
        for p, ms in self._fibers.items():
            fiber[p] = len(ms)
        total = 0
        for batch in self._edge_batches():
            total += int(np.prod(fiber[self._face_targets(batch)], axis=1).sum())
        return total

    def _edge_batches(self, size: int = 65536) -> Iterator[np.ndarray]:
        n = self.P.order
        total = n ** 12
        for start in range(0, total, size):
            codes = np.arange(start, min(start + size, total), dtype=np.int64)
            digits = np.stack([(codes // n ** k) % n for k in range(11, -1, -1)], axis=1)
            yield digits

    def _expand_rows(self, batch: np.ndarray, fixed: Optional[Dict[str, Square]] = None) -> Iterator[Shell3]:
        """Cascarones sobre las filas de aristas bien formadas, con todas las elecciones de m"""
        fixed = fixed or {}
        image = np.zeros(self.P.order, dtype=bool)
        image[list(self._fibers)] = True
        ok = image[self._face_targets(batch)].all(axis=1)
        for row in batch[ok]:
            labels = dict(zip(EDGE_LABELS, (int(v) for v in row)))
            choices = []
            for name in FACE_NAMES:
                if name in fixed:
                    choices.append([fixed[name]])
                    continue
                sides = FACE_SIDES[name]
                c, a, d, b = (labels[sides[k]] for k in "cadb")
                choices.append([Square(m, c, a, d, b) for m in self.solutions(c, a, d, b)])
            for faces in itertools.product(*choices):
                yield Shell3(tuple(faces))

    def _edge_grid(self, preset: Dict[str, int]) -> np.ndarray:
        """Filas (N, 12) con las aristas de preset fijas y las demás recorriendo P"""
        n = self.P.order
        free = [label for label in EDGE_LABELS if label not in preset]
        codes = np.arange(n ** len(free), dtype=np.int64)
        grid = np.zeros((codes.size, 12), dtype=np.int64)
        for k, label in enumerate(free):
            grid[:, EDGE_LABELS.index(label)] = (codes // n ** k) % n
        for label, value in preset.items():
            grid[:, EDGE_LABELS.index(label)] = value
        return grid

    def all_shells(self) -> Iterator[Shell3]:
        """Todos los cascarones bien formados (exhaustivo)"""
        for batch in self._edge_batches():
            yield from self._expand_rows(batch)

    def gauge_shells(self) -> Iterator[Shell3]:
        """
        Un representante por clase de gauge: las aristas de GAUGE_TREE valen 1

        Un gauge g: vértices → P cambia cada arista x: u → v por g_u⁻¹·x·g_v y
        cada m por m^{g_w}, con w el vértice inferior derecho de su cara; conmuta
        con compose_h y compose_v, así que la HCL y la fórmula c₁ no lo ven.
        """
        yield from self._expand_rows(self._edge_grid({label: self.P.identity for label in GAUGE_TREE}))

    def glued_shells(self, sh: Shell3, direction: int) -> Iterator[Shell3]:
        """
        Cascarones other con α_d⁻(other) = α_d⁺(sh) y aristas de la dirección d
        iguales a 1: representantes de gauge de todos los pegables a sh
        """
        glued = sh.face(f"a{direction}+")
        preset = {label: glued.side(side) for side, label in FACE_SIDES[f"a{direction}-"].items()}
        for label in EDGE_LABELS:
            if label[0] == "ABC"[direction - 1]:
                preset[label] = self.P.identity
        yield from self._expand_rows(self._edge_grid(preset), {f"a{direction}-": glued})

    def sample_shells(self, count: int, rng: np.random.Generator,
                      fixed: Optional[Dict[str, Square]] = None) -> List[Shell3]:
        """
        Cascarones bien formados al azar (muestreo por rechazo en lotes)

        Args:
            fixed: caras impuestas por nombre; sus aristas y m se respetan
        """
        fixed = fixed or {}
        preset: Dict[str, int] = {}
        for name, s in fixed.items():
            for side, label in FACE_SIDES[name].items():
                value = s.side(side)
                if preset.get(label, value) != value:
                    raise MalformedShell(f"Caras impuestas incompatibles en {label}", witness=label)
                preset[label] = value
        image = np.zeros(self.P.order, dtype=bool)
        image[list(self._fibers)] = True
        shells: List[Shell3] = []
        attempts = 0
        while len(shells) < count:
            attempts += 1
            if attempts > 1000:
                raise PreconditionFailed("No se encontraron cascarones con las caras impuestas")
            batch = rng.integers(0, self.P.order, size=(max(256, 8 * count), 12))
            for k, label in enumerate(EDGE_LABELS):
                if label in preset:
                    batch[:, k] = preset[label]
            ok = image[self._face_targets(batch)].all(axis=1)
            for row in batch[ok][: count - len(shells)]:
                sh = self._shells_from_edges(row, lambda ms: ms[int(rng.integers(len(ms)))])
                if fixed:
                    sh = sh.replace(**{n.replace("+", "p").replace("-", "m"): s for n, s in fixed.items()})
                shells.append(sh)
        return shells

    def commutative_completion(self, sh: Shell3) -> Shell3:
        """Sustituye α₁⁺ por la composición de las otras cinco caras"""
        return sh.replace(a1p=self.c1_composite(sh))

    # -- formato -------------------------------------------------------
    def format_square(self, s: Square) -> str:
        P, M = self.P, self.M
        return f"({M.label(s.m)}; {P.label(s.c)},{P.label(s.a)},{P.label(s.d)},{P.label(s.b)})"

    def format_shell(self, sh: Shell3) -> str:
        return "".join(f"{name}: {self.format_square(s)}\n" for name, s in zip(FACE_NAMES, sh.faces))


def from_crossed_module(x: CrossedModule) -> DoubleGroupoid:
    """
    Raises:
        InvalidCrossedModule: si x no cumple CM1/CM2
        InfiniteCarrier: si M o P no son finitos
    """
    if not isinstance(x.M, FiniteGroup) or not isinstance(x.P, FiniteGroup):
        raise InfiniteCarrier("El grupoide doble requiere M y P finitos")
    report = validate(x)
    if not report.ok:
        raise InvalidCrossedModule(f"{x!r} no es un módulo cruzado", witness=report.counterexamples)
    dg = DoubleGroupoid(x)
    logger.debug("Grupoide doble de %r: %d cuadrados", x, x.M.order * x.P.order ** 3)
    return dg


# ---------------------------------------------------------------------------
# Batería de leyes
# ---------------------------------------------------------------------------

@dataclass
class LawResult:
    name: str
    passed: bool
    cases: int
    exhaustive: bool
    counterexample: Optional[str] = None


@dataclass
class LawReport:
    xmod: str
    results: List[LawResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, name: str) -> LawResult:
        return next(r for r in self.results if r.name == name)


# Casos por lote numpy en los recorridos exhaustivos
_BLOCK_CASES = 1 << 19
_COLUMNS = "mcadb"


class _Squares(NamedTuple):
    """Arreglos numpy de cuadrados, uno por componente"""
    m: np.ndarray
    c: np.ndarray
    a: np.ndarray
    d: np.ndarray
    b: np.ndarray


class _SquareTables:
    """compose_h, compose_v y a·b·μ(m) = c·d sobre arreglos de cuadrados"""

    def __init__(self, dg: DoubleGroupoid):
        self.pmul, self.mmul = dg.P.mul, dg.M.mul
        self.act, self.mu = dg.xm.action, dg.xm.mu
        self.table = np.array([(s.m, s.c, s.a, s.d, s.b) for s in dg.squares], dtype=np.int64)

    def take(self, index: np.ndarray) -> _Squares:
        return _Squares(*(self.table[index, k] for k in range(5)))

    def h(self, s: _Squares, t: _Squares) -> _Squares:
        return _Squares(self.mmul[self.act[s.m, t.b], t.m], self.pmul[s.c, t.c], s.a, t.d,
                        self.pmul[s.b, t.b])

    def v(self, s: _Squares, t: _Squares) -> _Squares:
        return _Squares(self.mmul[t.m, self.act[s.m, t.d]], s.c, self.pmul[s.a, t.a],
                        self.pmul[s.d, t.d], t.b)

    def valid(self, s: _Squares) -> np.ndarray:
        return self.pmul[self.pmul[s.a, s.b], self.mu[s.m]] == self.pmul[s.c, s.d]

    @staticmethod
    def same(x: _Squares, y: _Squares) -> np.ndarray:
        return functools.reduce(np.logical_and, (p == q for p, q in zip(x, y)))


def _flatten(passed: np.ndarray, *indices: np.ndarray) -> Tuple[np.ndarray, List[np.ndarray]]:
    shape = np.broadcast_shapes(passed.shape, *(i.shape for i in indices))
    return np.broadcast_to(passed, shape).ravel(), [np.broadcast_to(i, shape).ravel() for i in indices]


class _LawRunner:
    """
    Recorre casos exhaustivamente; muestrea sólo si superan max_cases y M o P
    tienen orden mayor que EXHAUSTIVE_ORDER
    """

    def __init__(self, dg: DoubleGroupoid, max_cases: int, seed: int):
        self.dg = dg
        self.max_cases = max_cases
        self.small = max(dg.M.order, dg.P.order) <= EXHAUSTIVE_ORDER
        self.rng = np.random.default_rng(seed)
        self.tables = _SquareTables(dg)
        n = dg.P.order
        table = self.tables.table
        per_edge = len(table) // n
        # índices de cuadrados por arista superior, izquierda y ambas
        self.by_top = np.argsort(table[:, 1], kind="stable").reshape(n, per_edge)
        self.by_left = np.argsort(table[:, 2], kind="stable").reshape(n, per_edge)
        self.by_top_left = np.argsort(table[:, 1] * n + table[:, 2], kind="stable").reshape(n, n, per_edge // n)

    def covers(self, total: int) -> bool:
        return self.small or total <= self.max_cases

    def pick(self, items: Sequence) -> object:
        return items[int(self.rng.integers(len(items)))]

    def square(self, index) -> Square:
        return self.dg.squares[int(index)]

    def _failed(self, name: str, count: int, exhaustive: bool, case: tuple) -> LawResult:
        shown = "; ".join(self.dg.format_square(x) if isinstance(x, Square) else str(x) for x in case)
        logger.warning("Ley %s falla en %s", name, shown)
        return LawResult(name, False, count, exhaustive, shown)

    def _passed(self, name: str, count: int, exhaustive: bool) -> LawResult:
        logger.debug("Ley %s: %d casos (%s)", name, count, "exhaustivo" if exhaustive else "muestreo")
        return LawResult(name, True, count, exhaustive)

    def run(self, name: str, total: int, exhaustive: Callable[[], Iterable[tuple]],
            sample: Callable[[], tuple], check: Callable[..., bool],
            samples: Optional[int] = None) -> LawResult:
        is_exhaustive = self.covers(total)
        draws = samples if samples is not None else self.max_cases
        cases = exhaustive() if is_exhaustive else (sample() for _ in range(draws))
        count = 0
        for case in cases:
            count += 1
            if not check(*case):
                return self._failed(name, count, is_exhaustive, case)
        return self._passed(name, count, is_exhaustive)

    def run_blocks(self, name: str, total: int,
                   blocks: Callable[[], Iterator[Tuple[np.ndarray, List[np.ndarray]]]],
                   sample: Callable[[], tuple], check: Callable[..., bool]) -> LawResult:
        """Como run, pero el recorrido exhaustivo evalúa lotes (aprobados, índices de cuadrados)"""
        if not self.covers(total):
            return self.run(name, total, lambda: iter(()), sample, check)
        count = 0
        for passed, cases in blocks():
            bad = np.flatnonzero(~passed)
            if bad.size:
                k = int(bad[0])
                return self._failed(name, count + k + 1, True, tuple(self.square(c[k]) for c in cases))
            count += passed.size
        return self._passed(name, count, True)


def law_suite(dg: DoubleGroupoid, max_cases: int = 20000, seed: int = 0,
              max_shells: int = 2000) -> LawReport:
    """
    Verifica todas las leyes del grupoide doble

    Con |M|, |P| ≤ EXHAUSTIVE_ORDER todas las leyes se recorren
    exhaustivamente: las de cuadrados con uniones numpy por arista común y
    las de cascarones sobre representantes de gauge. Con grupos mayores, los
    casos que no caben en max_cases se muestrean (max_shells para las leyes
    de cascarones) con un generador numpy de semilla fija.
    """
    run = _LawRunner(dg, max_cases, seed)
    tabs = run.tables
    table = tabs.table
    P = dg.P
    squares = dg.squares
    report = LawReport(dg.xm.name or dg.xm.kind)
    ok = dg.is_square
    count = len(squares)
    per_edge = run.by_top.shape[1]

    def chains(index: np.ndarray, key: str, op: Callable[[_Squares, _Squares], _Squares]):
        column = _COLUMNS.index(key)

        def blocks():
            step = max(1, _BLOCK_CASES // per_edge ** 2)
            for lo in range(0, count, step):
                s = np.arange(lo, min(lo + step, count))
                t = index[table[s, column]]
                u = index[table[t, column]]
                s, t = s[:, None, None], t[:, :, None]
                S, T, U = tabs.take(s), tabs.take(t), tabs.take(u)
                first = op(S, T)
                left, right = op(first, U), op(S, op(T, U))
                yield _flatten(tabs.same(left, right) & tabs.valid(left) & tabs.valid(first), s, t, u)

        def sample():
            s = run.pick(squares)
            t = run.square(run.pick(index[s.side(key)]))
            return (s, t, run.square(run.pick(index[t.side(key)])))

        return count * per_edge * per_edge, blocks, sample

    def associative(op):
        def check(s, t, u):
            left, right = op(op(s, t), u), op(s, op(t, u))
            return left == right and ok(left) and ok(op(s, t))
        return check

    total, blocks, sm = chains(run.by_top, "b", tabs.v)
    report.results.append(run.run_blocks("vertical_associativity", total, blocks, sm, associative(dg.compose_v)))
    total, blocks, sm = chains(run.by_left, "d", tabs.h)
    report.results.append(run.run_blocks("horizontal_associativity", total, blocks, sm,
                                         associative(dg.compose_h)))

    singles = (lambda: ((s,) for s in squares), lambda: (run.pick(squares),))

    def identities(s):
        return (dg.compose_v(dg.vid(s.c), s) == s and dg.compose_v(s, dg.vid(s.b)) == s
                and dg.compose_h(dg.hid(s.a), s) == s and dg.compose_h(s, dg.hid(s.d)) == s)

    def inverses(s):
        v, h = dg.vinv(s), dg.hinv(s)
        return (ok(v) and ok(h)
                and dg.compose_v(s, v) == dg.vid(s.c) and dg.compose_v(v, s) == dg.vid(s.b)
                and dg.compose_h(s, h) == dg.hid(s.a) and dg.compose_h(h, s) == dg.hid(s.d))

    report.results.append(run.run("quintuple", count, *singles, ok))
    report.results.append(run.run("identities", count, *singles, identities))
    report.results.append(run.run("inverses", count, *singles, inverses))

    width = run.by_top_left.shape[2]

    def arrays():
        step = max(1, _BLOCK_CASES // (per_edge * per_edge * width))
        for lo in range(0, count, step):
            s = np.arange(lo, min(lo + step, count))
            t = run.by_left[table[s, 3]]
            u = run.by_top[table[s, 4]]
            v = run.by_top_left[table[t, 4][:, :, None], table[u, 3][:, None, :]]
            s, t, u = s[:, None, None, None], t[:, :, None, None], u[:, None, :, None]
            S, T, U, V = (tabs.take(x) for x in (s, t, u, v))
            rows = tabs.v(tabs.h(S, T), tabs.h(U, V))
            # las aristas de ambos lados son los mismos productos en P
            cols_m = tabs.h(tabs.v(S, U), tabs.v(T, V)).m
            yield _flatten((rows.m == cols_m) & tabs.valid(rows), s, t, u, v)

    def sample_array():
        s = run.pick(squares)
        t = run.square(run.pick(run.by_left[s.d]))
        u = run.square(run.pick(run.by_top[s.b]))
        return (s, t, u, run.square(run.pick(run.by_top_left[t.b, u.d])))

    def interchange(s, t, u, v):
        rows = dg.compose_v(dg.compose_h(s, t), dg.compose_h(u, v))
        cols = dg.compose_h(dg.compose_v(s, u), dg.compose_v(t, v))
        return rows == cols and ok(rows)

    array_total = count * per_edge * per_edge * width
    report.results.append(run.run_blocks("interchange", array_total, arrays, sample_array, interchange))

    edges = (lambda: ((a,) for a in P.elements()), lambda: (int(run.rng.integers(P.order)),))

    def cancellation(a):
        plus, minus = dg.connection(a, 1), dg.connection(a, -1)
        return dg.compose_v(plus, minus) == dg.hid(a) and dg.compose_h(plus, minus) == dg.vid(a)

    def connections_thin(a):
        built = [dg.connection(a, 1), dg.connection(a, -1), dg.hid(a), dg.vid(a), dg.corner(a), dg.elbow(a)]
        return all(ok(s) and dg.is_thin(s) for s in built)

    report.results.append(run.run("connection_cancellation", P.order, *edges, cancellation))
    report.results.append(run.run("connections_thin", P.order, *edges, connections_thin))

    def transport(a, b):
        ab = P.op(a, b)
        plus = dg.compose_array([[dg.connection(a, 1), dg.hid(a)], [dg.vid(a), dg.connection(b, 1)]])
        minus = dg.compose_array([[dg.connection(a, -1), dg.vid(b)], [dg.hid(b), dg.connection(b, -1)]])
        return plus == dg.connection(ab, 1) and minus == dg.connection(ab, -1)

    report.results.append(run.run(
        "connection_transport", P.order ** 2,
        lambda: itertools.product(P.elements(), repeat=2),
        lambda: tuple(int(v) for v in run.rng.integers(P.order, size=2)), transport))

    thin_count: Dict[Tuple[int, int, int], int] = {}
    for s in squares:
        if dg.is_thin(s):
            thin_count[(s.a, s.c, s.d)] = thin_count.get((s.a, s.c, s.d), 0) + 1

    def unique_filler(a, c, d):
        filler = dg.thin_filler(a, c, d)
        return thin_count.get((a, c, d), 0) == 1 and ok(filler) and dg.is_thin(filler)

    report.results.append(run.run(
        "thin_filler_unique", P.order ** 3,
        lambda: itertools.product(P.elements(), repeat=3),
        lambda: tuple(int(v) for v in run.rng.integers(P.order, size=3)), unique_filler))

    thin = [s for s in squares if dg.is_thin(s)]
    thin_by_top = {}
    thin_by_left = {}
    for s in thin:
        thin_by_top.setdefault(s.c, []).append(s)
        thin_by_left.setdefault(s.a, []).append(s)

    def thin_pairs():
        for s in thin:
            for t in thin_by_top.get(s.b, []):
                yield (s, t, "v")
            for t in thin_by_left.get(s.d, []):
                yield (s, t, "h")

    def sample_thin_pair():
        s = run.pick(thin)
        if run.rng.integers(2):
            return (s, run.pick(thin_by_top[s.b]), "v")
        return (s, run.pick(thin_by_left[s.d]), "h")

    def thin_closed(s, t, direction):
        r = dg.compose_v(s, t) if direction == "v" else dg.compose_h(s, t)
        return dg.is_thin(r)

    report.results.append(run.run("thin_closure", 2 * len(thin) * P.order ** 2,
                                  thin_pairs, sample_thin_pair, thin_closed))

    report.results.extend(_shell_laws(dg, run, max_shells))
    return report


def _shell_laws(dg: DoubleGroupoid, run: _LawRunner, max_shells: int) -> List[LawResult]:
    """
    Leyes sobre 3-cascarones: HCL ⟺ fórmula c₁ y composición de conmutativos

    Con |P|¹² ≤ max_cases se recorren todos los cascarones; con M y P
    pequeños, un representante por clase de gauge (gauge_shells, y
    glued_shells para los pares); en otro caso se muestrea.
    """
    results = []
    unreachable = run.max_cases + 1
    gauge = False
    if dg.P.order ** 12 <= run.max_cases:
        shells = list(dg.all_shells())
    elif run.small:
        shells = list(dg.gauge_shells())
        gauge = True
    else:
        shells = []
    total = len(shells) if shells else unreachable
    logger.debug("Cascarones %s: %d", "por gauge" if gauge else "completos", len(shells))

    def sample_shell():
        return (dg.sample_shells(1, run.rng)[0],)

    results.append(run.run("hcl_c1_agreement", total, lambda: ((sh,) for sh in shells), sample_shell,
                           lambda sh: dg.hcl_commutative(sh) == dg.c1_commutative(sh), max_shells))

    commutative = [sh for sh in shells if dg.hcl_commutative(sh)]
    for direction in (1, 2, 3):
        partners: Dict[Square, List[Shell3]] = {}
        if gauge:
            for sh in commutative:
                face = sh.face(f"a{direction}+")
                if face not in partners:
                    partners[face] = [o for o in dg.glued_shells(sh, direction) if dg.hcl_commutative(o)]
        else:
            for sh in commutative:
                partners.setdefault(sh.face(f"a{direction}-"), []).append(sh)
        pair_list = [(sh, other, direction) for sh in commutative
                     for other in partners.get(sh.face(f"a{direction}+"), [])]
        pairs_total = len(pair_list) if shells else unreachable

        def sample_pair(direction=direction, partners=partners):
            if commutative:
                first = run.pick(commutative)
                options = partners.get(first.face(f"a{direction}+"), [])
                if options:
                    return (first, run.pick(options), direction)
            first = dg.commutative_completion(dg.sample_shells(1, run.rng)[0])
            fixed = {f"a{direction}-": first.face(f"a{direction}+")}
            second = dg.commutative_completion(dg.sample_shells(1, run.rng, fixed)[0])
            return (first, second, direction)

        def composed_commutative(sh, other, d):
            return dg.hcl_commutative(dg.compose_shells(sh, other, d))

        results.append(run.run(f"shell_composition_{direction}", pairs_total,
                               lambda pair_list=pair_list: iter(pair_list), sample_pair,
                               composed_commutative, max_shells))
    return results


@dataclass
class ShellCensus:
    total: int
    commutative: int
    exhaustive: bool


def shell_census(dg: DoubleGroupoid, max_cases: int = 20000, seed: int = 0) -> ShellCensus:
    """Cuenta cascarones bien formados y cuántos cumplen la HCL"""
    if dg.P.order ** 12 <= max_cases:
        total = 0
        commutative = 0
        for sh in dg.all_shells():
            total += 1
            commutative += dg.hcl_commutative(sh)
        return ShellCensus(total, commutative, True)
    sample = dg.sample_shells(max_cases, np.random.default_rng(seed))
    return ShellCensus(len(sample), sum(dg.hcl_commutative(sh) for sh in sample), False)
