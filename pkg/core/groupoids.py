"""
Groupoids Module
Grupoides con conjunto finito de objetos: grupoides libres sobre grafos,
presentaciones, pushout de van Kampen y grupos de vértices por árbol maximal
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
from networkx.utils import UnionFind

from .algebra import EnumeratedGroup, FreeWord, GroupPresentation, enumerate_fp_group
from .errors import InfiniteCarrier, NotComposable, ObjectNotFound, PreconditionFailed

logger = logging.getLogger(__name__)

PathLetter = Tuple[str, int]


@dataclass(frozen=True)
class Edge:
    """Arista generadora e: source -> target"""
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class EdgePath:
    """Palabra en aristas y sus inversas con extremos fijos"""
    source: str
    target: str
    letters: Tuple[PathLetter, ...] = ()

    @classmethod
    def identity(cls, obj: str) -> "EdgePath":
        return cls(obj, obj, ())

    @classmethod
    def of(cls, edge: Edge, sign: int = 1) -> "EdgePath":
        if sign == 1:
            return cls(edge.source, edge.target, ((edge.name, 1),))
        return cls(edge.target, edge.source, ((edge.name, -1),))

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @property
    def is_loop(self) -> bool:
        return self.source == self.target

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "EdgePath") -> "EdgePath":
        if not isinstance(other, EdgePath):
            return NotImplemented
        if self.target != other.source:
            raise NotComposable(
                f"No componibles: {self.target} != {other.source}",
                witness=(self.target, other.source),
            )
        return EdgePath(self.source, other.target, _cancel(self.letters + other.letters))

    def inverse(self) -> "EdgePath":
        return EdgePath(self.target, self.source, tuple((e, -s) for e, s in reversed(self.letters)))

    def __pow__(self, n: int) -> "EdgePath":
        if n == 1:
            return self
        if n == -1:
            return self.inverse()
        if not self.is_loop:
            raise NotComposable("Solo los lazos admiten potencias")
        base = self if n >= 0 else self.inverse()
        result = EdgePath.identity(self.source)
        for _ in range(abs(n)):
            result = result * base
        return result

    def reduced(self) -> "EdgePath":
        return EdgePath(self.source, self.target, _cancel(self.letters))

    def prefix(self, k: int, graph: "DirectedGraph") -> "EdgePath":
        return graph.path(self.letters[:k], source=self.source)

    def suffix(self, k: int, graph: "DirectedGraph") -> "EdgePath":
        """Sufijo que empieza tras la letra k-1"""
        start = self.source if k == 0 else graph.letter_target(self.letters[k - 1])
        return graph.path(self.letters[k:], source=start)

    def rename(self, edges: Dict[str, str], objects: Dict[str, str]) -> "EdgePath":
        return EdgePath(
            objects.get(self.source, self.source),
            objects.get(self.target, self.target),
            tuple((edges.get(e, e), s) for e, s in self.letters),
        )


def _cancel(letters: Iterable[PathLetter]) -> Tuple[PathLetter, ...]:
    stack: List[PathLetter] = []
    for name, sign in letters:
        if stack and stack[-1][0] == name and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((name, sign))
    return tuple(stack)


def format_path(path: EdgePath) -> str:
    """Formato ASCII: e*f^-1, id_p para identidades"""
    if path.is_identity:
        return f"id_{path.source}"
    parts = []
    for (name, sign), run in itertools.groupby(path.letters):
        power = len(list(run)) * sign
        parts.append(name if power == 1 else f"{name}^{power}")
    return "*".join(parts)


class DirectedGraph:
    """Grafo dirigido finito con aristas nombradas (multigrafo)"""

    def __init__(self, objects: Sequence[str], edges: Sequence[Edge] = ()):
        self.objects: Tuple[str, ...] = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise PreconditionFailed(f"Objetos repetidos: {self.objects}")
        self.edges: Tuple[Edge, ...] = tuple(edges)
        self._edges: Dict[str, Edge] = {}
        self._graph = nx.MultiDiGraph()
        self._graph.add_nodes_from(self.objects)
        for edge in self.edges:
            if edge.name in self._edges:
                raise PreconditionFailed(f"Arista repetida: {edge.name}")
            for end in (edge.source, edge.target):
                if end not in self._graph:
                    raise ObjectNotFound(f"La arista {edge.name} usa el objeto desconocido {end}", witness=end)
            self._edges[edge.name] = edge
            self._graph.add_edge(edge.source, edge.target, key=edge.name)

    @property
    def nx_graph(self) -> nx.MultiDiGraph:
        return self._graph

    def has_object(self, obj: str) -> bool:
        return obj in self._graph

    def edge(self, name: str) -> Edge:
        try:
            return self._edges[name]
        except KeyError:
            raise PreconditionFailed(f"Arista desconocida: {name}") from None

    def has_edge(self, name: str) -> bool:
        return name in self._edges

    def letter_source(self, letter: PathLetter) -> str:
        edge = self.edge(letter[0])
        return edge.source if letter[1] == 1 else edge.target

    def letter_target(self, letter: PathLetter) -> str:
        edge = self.edge(letter[0])
        return edge.target if letter[1] == 1 else edge.source

    def path(self, letters: Sequence[PathLetter], source: Optional[str] = None) -> EdgePath:
        """
        Construye un camino verificando que sea una cadena componible

        Args:
            letters: Letras (arista, ±1)
            source: Objeto inicial (obligatorio si no hay letras)

        Raises:
            NotComposable: si dos letras consecutivas no encajan
        """
        letters = tuple(letters)
        if not letters:
            if source is None:
                raise PreconditionFailed("Un camino vacío necesita un objeto")
            if not self.has_object(source):
                raise ObjectNotFound(f"Objeto desconocido: {source}", witness=source)
            return EdgePath.identity(source)
        start = self.letter_source(letters[0])
        if source is not None and source != start:
            raise NotComposable(f"El camino empieza en {start}, no en {source}", witness=(source, start))
        current = start
        for letter in letters:
            if self.letter_source(letter) != current:
                raise NotComposable(
                    f"La letra {letter[0]} no parte de {current}",
                    witness=(current, letter),
                )
            current = self.letter_target(letter)
        return EdgePath(start, current, letters)

    def components(self) -> List[List[str]]:
        """Componentes conexas en el orden de los objetos"""
        position = {obj: i for i, obj in enumerate(self.objects)}
        comps = [sorted(c, key=position.get) for c in nx.weakly_connected_components(self._graph)]
        return sorted(comps, key=lambda c: position[c[0]])

    def component_of(self, obj: str) -> List[str]:
        if not self.has_object(obj):
            raise ObjectNotFound(f"Objeto desconocido: {obj}", witness=obj)
        for comp in self.components():
            if obj in comp:
                return comp
        return [obj]

    def is_forest(self) -> bool:
        return len(self.edges) == len(self.objects) - len(self.components())

    def __repr__(self):
        return f"DirectedGraph({len(self.objects)} objetos, {len(self.edges)} aristas)"


def groupoid_reduce(path: Any, g: DirectedGraph, source: Optional[str] = None) -> EdgePath:
    """
    Reducción libre de un camino en el grupoide libre sobre g

    Args:
        path: EdgePath o sucesión de letras (arista, ±1)
        g: Grafo
        source: Objeto inicial para caminos vacíos

    Returns:
        Camino reducido con los mismos extremos

    Raises:
        NotComposable: si el camino no es una cadena componible
    """
    if isinstance(path, EdgePath):
        checked = g.path(path.letters, source=path.source)
    else:
        checked = g.path(tuple(path), source=source)
    return checked.reduced()


@dataclass
class GroupoidPresentation:
    """Grafo más relaciones entre caminos paralelos"""
    graph: DirectedGraph
    relations: Tuple[Tuple[EdgePath, EdgePath], ...] = ()
    name: str = ""

    def __post_init__(self):
        self.relations = tuple(self.relations)
        for lhs, rhs in self.relations:
            for side in (lhs, rhs):
                self.graph.path(side.letters, source=side.source)
            if lhs.source != rhs.source or lhs.target != rhs.target:
                raise PreconditionFailed(
                    f"Relación con lados no paralelos: {format_path(lhs)} = {format_path(rhs)}"
                )

    @property
    def objects(self) -> Tuple[str, ...]:
        return self.graph.objects

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self.graph.edges

    def relation_loops(self) -> List[EdgePath]:
        return [(lhs * rhs.inverse()) for lhs, rhs in self.relations]

    @property
    def is_free(self) -> bool:
        return all(loop.is_identity for loop in self.relation_loops())


@dataclass
class GroupoidMorphism:
    """Morfismo dado por imagen de objetos y caminos imagen de generadores"""
    source: GroupoidPresentation
    target: GroupoidPresentation
    object_map: Dict[str, str]
    edge_map: Dict[str, EdgePath]

    def __post_init__(self):
        for obj in self.source.objects:
            image = self.object_map.get(obj)
            if image is None or not self.target.graph.has_object(image):
                raise PreconditionFailed(f"El objeto {obj} no tiene imagen válida")
        for edge in self.source.edges:
            image = self.edge_map.get(edge.name)
            if image is None:
                raise PreconditionFailed(f"La arista {edge.name} no tiene imagen")
            self.target.graph.path(image.letters, source=image.source)
            if (image.source, image.target) != (self.object_map[edge.source], self.object_map[edge.target]):
                raise PreconditionFailed(f"La imagen de {edge.name} no respeta extremos")

    def apply(self, path: EdgePath) -> EdgePath:
        result = EdgePath.identity(self.object_map[path.source])
        for name, sign in path.letters:
            image = self.edge_map[name]
            result = result * (image if sign == 1 else image.inverse())
        return result

    def relation_status(self) -> List[str]:
        """
        Estado de cada relación del origen en el destino

        Returns:
            'verified', 'violated' (destino libre) o 'unverified'
        """
        free_target = self.target.is_free
        status = []
        for lhs, rhs in self.source.relations:
            if self.apply(lhs) == self.apply(rhs):
                status.append("verified")
            elif free_target:
                status.append("violated")
            else:
                status.append("unverified")
        return status

    @classmethod
    def identity(cls, p: GroupoidPresentation) -> "GroupoidMorphism":
        return cls(p, p, {o: o for o in p.objects}, {e.name: EdgePath.of(e) for e in p.edges})


def discrete_groupoid(objects: Sequence[str], name: str = "") -> GroupoidPresentation:
    return GroupoidPresentation(DirectedGraph(objects), (), name=name)


@dataclass
class Pushout:
    """Presentación del pushout y los morfismos inducidos U → P, V → P"""
    presentation: GroupoidPresentation
    from_u: GroupoidMorphism
    from_v: GroupoidMorphism


def pushout(i: GroupoidMorphism, j: GroupoidMorphism) -> Pushout:
    """
    Pushout de presentaciones de grupoides a lo largo de W

    Objetos: cociente de U ⊔ V por i(w) ~ j(w). Generadores: los de U ⊔ V
    (los de V se renombran si chocan). Relaciones: las de U, las de V y
    i(w) = j(w) por cada generador w de W.

    Toda componente del pushout debe contener la imagen de algún objeto de W.

    Raises:
        PreconditionFailed: si W no es común o alguna componente queda sin alcanzar
    """
    if i.source is not j.source and (i.source.objects != j.source.objects
                                     or [e.name for e in i.source.edges] != [e.name for e in j.source.edges]):
        raise PreconditionFailed("i y j deben compartir la presentación origen W")
    U, V, W = i.target, j.target, i.source

    tagged_u = [("U", o) for o in U.objects]
    tagged_v = [("V", o) for o in V.objects]
    classes = UnionFind(tagged_u + tagged_v)
    for w in W.objects:
        classes.union(("U", i.object_map[w]), ("V", j.object_map[w]))

    names: Dict[Tuple[str, str], str] = {}
    used: Set[str] = set()
    representative: Dict[Any, str] = {}
    for tag in tagged_u + tagged_v:
        root = classes[tag]
        if root not in representative:
            candidate = tag[1]
            if candidate in used:
                candidate = f"{candidate}_v"
            representative[root] = candidate
            used.add(candidate)
        names[tag] = representative[root]
    objects = list(dict.fromkeys(names[tag] for tag in tagged_u + tagged_v))

    u_objects = {o: names[("U", o)] for o in U.objects}
    v_objects = {o: names[("V", o)] for o in V.objects}
    u_edges = {e.name: e.name for e in U.edges}
    taken = set(u_edges)
    v_edges = {}
    for e in V.edges:
        new = e.name if e.name not in taken else f"{e.name}_v"
        while new in taken:
            new = f"{new}_v"
        v_edges[e.name] = new
        taken.add(new)

    edges = [Edge(u_edges[e.name], u_objects[e.source], u_objects[e.target]) for e in U.edges]
    edges += [Edge(v_edges[e.name], v_objects[e.source], v_objects[e.target]) for e in V.edges]
    graph = DirectedGraph(objects, edges)
    reached = {u_objects[i.object_map[w]] for w in W.objects}
    for comp in graph.components():
        if reached.isdisjoint(comp):
            witness = ", ".join(comp)
            raise PreconditionFailed(f"Ningún objeto de W llega a la componente {{{witness}}}", witness=witness)

    relations = [(l.rename(u_edges, u_objects), r.rename(u_edges, u_objects)) for l, r in U.relations]
    relations += [(l.rename(v_edges, v_objects), r.rename(v_edges, v_objects)) for l, r in V.relations]
    for w in W.edges:
        left = EdgePath.of(w)
        relations.append((i.apply(left).rename(u_edges, u_objects), j.apply(left).rename(v_edges, v_objects)))

    presentation = GroupoidPresentation(graph, tuple(relations), name=f"{U.name}+{V.name}".strip("+"))
    from_u = GroupoidMorphism(U, presentation, u_objects,
                              {e.name: EdgePath.of(e).rename(u_edges, u_objects) for e in U.edges})
    from_v = GroupoidMorphism(V, presentation, v_objects,
                              {e.name: EdgePath.of(e).rename(v_edges, v_objects) for e in V.edges})
    logger.debug("Pushout: %d objetos, %d aristas, %d relaciones",
                 len(objects), len(edges), len(relations))
    return Pushout(presentation, from_u, from_v)


def maximal_tree(g: DirectedGraph) -> Tuple[str, ...]:
    """
    Bosque generador (árbol maximal por componente)

    Returns:
        Nombres de las aristas del árbol, en el orden del grafo
    """
    undirected = nx.MultiGraph()
    undirected.add_nodes_from(g.objects)
    for edge in g.edges:
        undirected.add_edge(edge.source, edge.target, key=edge.name)
    chosen = {key for _, _, key in nx.minimum_spanning_edges(undirected, algorithm="kruskal",
                                                             keys=True, data=False)}
    return tuple(e.name for e in g.edges if e.name in chosen)


def tree_paths(g: DirectedGraph, root: str, tree: Iterable[str]) -> Dict[str, EdgePath]:
    """Caminos τ_u desde root hasta cada objeto de su componente por el árbol"""
    tree = set(tree)
    adjacency: Dict[str, List[Tuple[str, PathLetter]]] = {o: [] for o in g.objects}
    for edge in g.edges:
        if edge.name in tree:
            adjacency[edge.source].append((edge.target, (edge.name, 1)))
            adjacency[edge.target].append((edge.source, (edge.name, -1)))
    paths = {root: EdgePath.identity(root)}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v, letter in adjacency[u]:
            if v not in paths:
                paths[v] = EdgePath(root, v, paths[u].letters + (letter,))
                queue.append(v)
    return paths


def vertex_group(p: GroupoidPresentation, obj: str, tree: Optional[Iterable[str]] = None) -> GroupPresentation:
    """
    Presentación del grupo de vértices en obj

    Args:
        p: Presentación del grupoide
        obj: Objeto base
        tree: Aristas de un árbol que genera la componente (por defecto maximal_tree)

    Returns:
        Presentación sobre las aristas fuera del árbol; cada relación se
        reescribe como lazo en obj (las letras del árbol desaparecen)

    Raises:
        ObjectNotFound: si obj no es un objeto de p
    """
    graph = p.graph
    component = graph.component_of(obj)
    comp_set = set(component)
    tree = tuple(maximal_tree(graph)) if tree is None else tuple(tree)
    tree_in_comp = [t for t in tree if graph.edge(t).source in comp_set]
    paths = tree_paths(graph, obj, tree_in_comp)
    if len(paths) != len(component) or len(tree_in_comp) != len(component) - 1:
        raise PreconditionFailed(f"Las aristas {tree_in_comp} no forman un árbol generador de la componente de {obj}")

    generators = [e.name for e in graph.edges if e.source in comp_set and e.name not in tree_in_comp]
    index = {name: k for k, name in enumerate(generators)}

    def loop_word(path: EdgePath) -> FreeWord:
        return FreeWord(tuple((index[name], sign) for name, sign in path.letters if name in index))

    relators = []
    for loop in p.relation_loops():
        if loop.source not in comp_set:
            continue
        word = loop_word(loop)
        if not word.is_identity:
            relators.append(word)
    return GroupPresentation(tuple(generators), tuple(relators), name=f"{p.name}@{obj}" if p.name else obj)


# ---------------------------------------------------------------------------
# Portadores: grupoides donde se evalúan caminos
# ---------------------------------------------------------------------------

class GroupoidCarrier:
    """Interfaz común de los grupoides en los que se evalúan caminos"""

    finite = False

    def evaluate(self, path: EdgePath) -> Any:
        raise NotImplementedError

    def compose(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def inverse(self, a: Any) -> Any:
        raise NotImplementedError

    def identity(self, obj: str) -> Any:
        raise NotImplementedError

    def source(self, a: Any) -> str:
        raise NotImplementedError

    def target(self, a: Any) -> str:
        raise NotImplementedError

    def hom(self, u: str, v: str) -> List[Any]:
        raise InfiniteCarrier("El grupoide no es finito")

    def sort_key(self, a: Any) -> Any:
        return repr(a)

    def label(self, a: Any) -> str:
        return repr(a)

    def equal_paths(self, p: EdgePath, q: EdgePath) -> bool:
        return self.evaluate(p) == self.evaluate(q)

    def is_identity(self, a: Any) -> bool:
        return a == self.identity(self.source(a))


class FreeGroupoidCarrier(GroupoidCarrier):
    """El grupoide libre sobre un grafo: caminos reducidos"""

    def __init__(self, graph: DirectedGraph):
        self.graph = graph
        self.finite = graph.is_forest()
        self._tree = maximal_tree(graph) if self.finite else ()
        self._roots: Dict[str, Dict[str, EdgePath]] = {}
        if self.finite:
            for comp in graph.components():
                paths = tree_paths(graph, comp[0], self._tree)
                for obj in comp:
                    self._roots[obj] = paths

    def evaluate(self, path: EdgePath) -> EdgePath:
        return groupoid_reduce(path, self.graph)

    def compose(self, a: EdgePath, b: EdgePath) -> EdgePath:
        return a * b

    def inverse(self, a: EdgePath) -> EdgePath:
        return a.inverse()

    def identity(self, obj: str) -> EdgePath:
        return EdgePath.identity(obj)

    def source(self, a: EdgePath) -> str:
        return a.source

    def target(self, a: EdgePath) -> str:
        return a.target

    def hom(self, u: str, v: str) -> List[EdgePath]:
        if not self.finite:
            raise InfiniteCarrier("Grupoide libre con ciclos: homs infinitos")
        paths = self._roots[u]
        if v not in paths:
            return []
        return [paths[u].inverse() * paths[v]]

    def sort_key(self, a: EdgePath) -> Tuple:
        return (a.source, a.target, len(a.letters), a.letters)

    def label(self, a: EdgePath) -> str:
        return format_path(a)


class EnumeratedGroupoid(GroupoidCarrier):
    """
    Grupoide finito presentado, enumerado por árbol + grupo de vértices

    Los elementos son ternas (s, t, g): el morfismo τ_s⁻¹·g·τ_t con g en
    el grupo de vértices de la componente.
    """

    finite = True

    def __init__(self, p: GroupoidPresentation, bound: int):
        self.presentation = p
        self.bound = bound
        graph = p.graph
        self._tree = maximal_tree(graph)
        tree_set = set(self._tree)
        self.base: Dict[str, str] = {}
        self.groups: Dict[str, EnumeratedGroup] = {}
        self._letters: Dict[str, Tuple[str, str, int]] = {}
        self._order = {o: k for k, o in enumerate(graph.objects)}
        for comp in graph.components():
            root = comp[0]
            for obj in comp:
                self.base[obj] = root
            vg = vertex_group(p, root, self._tree)
            self.groups[root] = enumerate_fp_group(vg, bound)
            for k, name in enumerate(vg.generators):
                edge = graph.edge(name)
                self._letters[name] = (edge.source, edge.target,
                                       self.groups[root].evaluate(FreeWord.generator(k)))
        for edge in graph.edges:
            if edge.name in tree_set:
                self._letters[edge.name] = (edge.source, edge.target, 0)

    def group_of(self, obj: str) -> EnumeratedGroup:
        return self.groups[self.base[obj]]

    def evaluate(self, path: EdgePath) -> Tuple[str, str, int]:
        result = self.identity(path.source)
        for name, sign in path.letters:
            s, t, g = self._letters[name]
            step = (s, t, g) if sign == 1 else (t, s, self.group_of(s).group.inverse(g))
            result = self.compose(result, step)
        return result

    def letter(self, name: str, sign: int = 1) -> Tuple[str, str, int]:
        s, t, g = self._letters[name]
        return (s, t, g) if sign == 1 else (t, s, self.group_of(s).group.inverse(g))

    def compose(self, a, b):
        if a[1] != b[0]:
            raise NotComposable(f"No componibles: {a[1]} != {b[0]}", witness=(a, b))
        return (a[0], b[1], self.group_of(a[0]).group.op(a[2], b[2]))

    def inverse(self, a):
        return (a[1], a[0], self.group_of(a[0]).group.inverse(a[2]))

    def identity(self, obj: str):
        if obj not in self.base:
            raise ObjectNotFound(f"Objeto desconocido: {obj}", witness=obj)
        return (obj, obj, 0)

    def source(self, a) -> str:
        return a[0]

    def target(self, a) -> str:
        return a[1]

    def hom(self, u: str, v: str) -> List[Tuple[str, str, int]]:
        if self.base[u] != self.base[v]:
            return []
        return [(u, v, g) for g in range(self.group_of(u).order)]

    def arrows(self) -> List[Tuple[str, str, int]]:
        objs = self.presentation.objects
        return [a for u in objs for v in objs for a in self.hom(u, v)]

    def sort_key(self, a):
        return (self._order[a[0]], self._order[a[1]], a[2])

    def label(self, a) -> str:
        return f"{a[0]}->{a[1]}:{self.group_of(a[0]).group.label(a[2])}"


class ProductGroupoid(GroupoidCarrier):
    """
    Producto de dos portadores; evalúa caminos de un producto tensorial

    Args:
        left, right: Portadores de los factores
        objects: nombre de objeto producto -> (objeto izquierdo, objeto derecho)
        edges: nombre de arista -> ('L', arista izquierda, objeto derecho)
               o ('R', objeto izquierdo, arista derecha)
    """

    def __init__(self, left: GroupoidCarrier, right: GroupoidCarrier,
                 objects: Dict[str, Tuple[str, str]], edges: Dict[str, Tuple[str, str, str]],
                 left_graph: DirectedGraph, right_graph: DirectedGraph):
        self.left = left
        self.right = right
        self.objects = objects
        self.edges = edges
        self.left_graph = left_graph
        self.right_graph = right_graph
        self.finite = left.finite and right.finite
        self._names = {pair: name for name, pair in objects.items()}

    def object_name(self, left_obj: str, right_obj: str) -> str:
        return self._names[(left_obj, right_obj)]

    def evaluate(self, path: EdgePath):
        a, b = self.objects[path.source]
        result = (self.left.identity(a), self.right.identity(b))
        for name, sign in path.letters:
            side, x, y = self.edges[name]
            if side == "L":
                step = (self.left.evaluate(EdgePath.of(self.left_graph.edge(x), sign)), self.right.identity(y))
            else:
                step = (self.left.identity(x), self.right.evaluate(EdgePath.of(self.right_graph.edge(y), sign)))
            result = self.compose(result, step)
        return result

    def compose(self, a, b):
        return (self.left.compose(a[0], b[0]), self.right.compose(a[1], b[1]))

    def inverse(self, a):
        return (self.left.inverse(a[0]), self.right.inverse(a[1]))

    def identity(self, obj: str):
        a, b = self.objects[obj]
        return (self.left.identity(a), self.right.identity(b))

    def source(self, a) -> str:
        return self.object_name(self.left.source(a[0]), self.right.source(a[1]))

    def target(self, a) -> str:
        return self.object_name(self.left.target(a[0]), self.right.target(a[1]))

    def hom(self, u: str, v: str) -> List[Any]:
        (a0, b0), (a1, b1) = self.objects[u], self.objects[v]
        return [(x, y) for x in self.left.hom(a0, a1) for y in self.right.hom(b0, b1)]

    def sort_key(self, a):
        return (self.left.sort_key(a[0]), self.right.sort_key(a[1]))

    def label(self, a) -> str:
        return f"({self.left.label(a[0])} x {self.right.label(a[1])})"


def groupoid_carrier(p: GroupoidPresentation, bound: int) -> GroupoidCarrier:
    """Portador libre si no hay relaciones efectivas, enumerado en otro caso"""
    if p.is_free:
        return FreeGroupoidCarrier(p.graph)
    return EnumeratedGroupoid(p, bound)


@dataclass
class SquareReport:
    """Doble categoría de cuadrados conmutativos de un grupoide finito"""
    squares: int
    closed_vertical: bool
    closed_horizontal: bool
    witnesses: List[Any] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.closed_vertical and self.closed_horizontal


def commutative_squares(carrier: EnumeratedGroupoid, limit: Optional[int] = None) -> SquareReport:
    """
    Enumera los cuadrados (c arriba, a izquierda, d derecha, b abajo) con
    a·b = c·d y verifica que ambas composiciones los preservan

    Args:
        carrier: Grupoide finito
        limit: Máximo de composiciones a probar por dirección
    """
    arrows = carrier.arrows()
    by_source: Dict[str, List[Any]] = {}
    for a in arrows:
        by_source.setdefault(carrier.source(a), []).append(a)
    squares = []
    for a in arrows:
        for b in by_source.get(carrier.target(a), []):
            for c in by_source.get(carrier.source(a), []):
                for d in by_source.get(carrier.target(c), []):
                    if carrier.target(d) == carrier.target(b) and \
                            carrier.compose(a, b) == carrier.compose(c, d):
                        squares.append((c, a, d, b))
    square_set = set(squares)
    by_top: Dict[Any, List[Tuple]] = {}
    by_left: Dict[Any, List[Tuple]] = {}
    for sq in squares:
        by_top.setdefault(sq[0], []).append(sq)
        by_left.setdefault(sq[1], []).append(sq)

    witnesses = []
    vertical_ok = horizontal_ok = True
    checked = 0
    for c, a, d, b in squares:
        for _, a2, d2, e in by_top.get(b, []):
            glued = (c, carrier.compose(a, a2), carrier.compose(d, d2), e)
            if glued not in square_set:
                vertical_ok = False
                witnesses.append(("vertical", (c, a, d, b), glued))
            checked += 1
        for c2, _, f, b2 in by_left.get(d, []):
            glued = (carrier.compose(c, c2), a, f, carrier.compose(b, b2))
            if glued not in square_set:
                horizontal_ok = False
                witnesses.append(("horizontal", (c, a, d, b), glued))
            checked += 1
        if limit is not None and checked >= limit:
            break
    return SquareReport(len(squares), vertical_ok, horizontal_ok, witnesses[:5])
