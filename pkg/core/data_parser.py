"""
Data Parser Module
Parser de la gramática ASCII compartida por todos los formatos de archivo:
palabras, caminos, elementos de complejos cruzados, anillos de grupo,
módulos cruzados, cascarones y homotopías. Incluye los serializadores.
"""

import ast
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import FiniteGroup, FreeWord, GroupPresentation, GroupRingElement, _extend_images, format_word
from .config_manager import DEFAULT_BOUND
from .crossed_complex import Cell, CrossedComplex, CrossedComplexMorphism, Degree2Element, Element, \
    ModuleElement, format_element
from .crossed_module import CrossedModule, FreeCrossedModuleElement, STANDARD_KINDS, action_from_generators, \
    action_on_fcm, make_standard
from .cubes import CubeCell, parse_cells, parse_certificate
from .double_groupoid import FACE_NAMES, DoubleGroupoid, Shell3, Square, from_crossed_module
from .errors import ParseError, PreconditionFailed, XkitError
from .fox import GroupMap
from .groupoids import DirectedGraph, Edge, EdgePath, GroupoidMorphism, GroupoidPresentation, format_path
from .tensor import HomotopyData

logger = logging.getLogger(__name__)

FILE_KINDS = {
    ".pres": "presentation",
    ".gpd": "groupoid",
    ".po": "pushout",
    ".xmod": "xmod",
    ".crs": "crs",
    ".shell": "shell",
    ".cells": "cells",
    ".cert": "certificate",
    ".hty": "homotopy",
}

_ZERO = re.compile(r"\b0_(\w+)")


@dataclass
class ParseResult:
    """Resultado del parseo de un archivo"""
    original_text: str
    value: Any
    kind: str
    success: bool
    error_message: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


@dataclass
class _Scope:
    """Grafo de C₁ y generadores (grado, base) visibles al parsear elementos"""
    graph: DirectedGraph
    cells: Dict[str, Tuple[int, str]] = field(default_factory=dict)

    @classmethod
    def of(cls, C: CrossedComplex) -> "_Scope":
        return cls(C.c1.graph, {cell.name: (cell.degree, cell.base) for cell in C.all_cells()})


def _split_top(text: str, sep: str) -> List[str]:
    """Divide por sep fuera de paréntesis y corchetes"""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    parts.append("".join(current).strip())
    return [p for p in parts if p]


def _fields(text: str) -> List[Tuple[str, str, int]]:
    """Líneas 'clave: valor' (o varias separadas por ';') con su número de línea"""
    fields = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for part in _split_top(line, ";"):
            if ":" not in part:
                raise ParseError(f"Línea {lineno}: se esperaba 'clave: valor'", line=lineno)
            key, value = part.split(":", 1)
            fields.append((key.strip(), value.strip(), lineno))
    return fields


def _arrow(value: str, lineno: int) -> Tuple[str, str]:
    if "->" not in value:
        raise ParseError(f"Línea {lineno}: se esperaba 'a -> b'", line=lineno)
    left, right = value.split("->", 1)
    return left.strip(), right.strip()


class DataParser:
    """Parser especializado para los formatos de texto de xkit"""

    def __init__(self, bound: int = DEFAULT_BOUND):
        """
        Inicializa el parser

        Args:
            bound: Cota de enumeración para grupos dados por presentación
        """
        self.bound = bound

    # ------------------------------------------------------------------
    # Árbol sintáctico
    # ------------------------------------------------------------------

    def _tree(self, text: str) -> ast.AST:
        """
        Parsea una expresión con ast tras normalizar '^' a '**'

        Raises:
            ParseError: si la expresión no es sintácticamente válida
        """
        expression = _ZERO.sub(r"_zero_\1", text.strip().replace("^", "**"))
        if not expression:
            raise ParseError("Expresión vacía", witness=text)
        try:
            return ast.parse(expression, mode="eval").body
        except SyntaxError as exc:
            raise ParseError(f"Expresión inválida: {text!r}", witness=text) from exc

    @staticmethod
    def _is_int(node: ast.AST) -> bool:
        while isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            node = node.operand
        return isinstance(node, ast.Constant) and isinstance(node.value, int)

    @staticmethod
    def _int(node: ast.AST, text: str) -> int:
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -DataParser._int(node.operand, text)
        raise ParseError(f"Se esperaba un entero en {text!r}", witness=text)

    # ------------------------------------------------------------------
    # Palabras y presentaciones
    # ------------------------------------------------------------------

    def parse_word(self, text: str, generators: Sequence[str]) -> FreeWord:
        """
        Palabra libre: x*y^-1, [x,y] (conmutador), x@y (conjugado y⁻¹xy), 1

        Raises:
            ParseError: con el símbolo desconocido
        """
        generators = list(generators)

        def evaluate(node: ast.AST) -> FreeWord:
            if isinstance(node, ast.Name):
                if node.id not in generators:
                    raise ParseError(f"Generador desconocido: {node.id}", witness=node.id)
                return FreeWord.generator(generators.index(node.id))
            if isinstance(node, ast.Constant) and node.value == 1:
                return FreeWord()
            if isinstance(node, ast.List) and len(node.elts) == 2:
                a, b = evaluate(node.elts[0]), evaluate(node.elts[1])
                return a.inverse() * b.inverse() * a * b
            if isinstance(node, ast.BinOp):
                if isinstance(node.op, ast.Mult):
                    return evaluate(node.left) * evaluate(node.right)
                if isinstance(node.op, ast.Pow):
                    return evaluate(node.left) ** self._int(node.right, text)
                if isinstance(node.op, ast.MatMult):
                    return evaluate(node.left).conjugate(evaluate(node.right))
            raise ParseError(f"Construcción no soportada en la palabra {text!r}", witness=text)

        return evaluate(self._tree(text))

    def parse_presentation(self, text: str) -> GroupPresentation:
        """
        Formato .pres: 'name:', 'gens: x, y', 'rels: x^2, [x,y]'

        Raises:
            ParseError: si faltan generadores o un relator es inválido
        """
        name, generators, relators = "", None, []
        for key, value, lineno in _fields(text):
            if key == "name":
                name = value
            elif key == "gens":
                generators = tuple(_split_top(value, ","))
            elif key == "rels":
                if generators is None:
                    raise ParseError(f"Línea {lineno}: 'rels' antes de 'gens'", line=lineno)
                relators.extend(self.parse_word(r, generators) for r in _split_top(value, ","))
            else:
                raise ParseError(f"Línea {lineno}: clave desconocida {key!r}", line=lineno)
        if generators is None:
            raise ParseError("La presentación no declara 'gens'")
        return GroupPresentation(generators, tuple(relators), name=name)

    @staticmethod
    def format_presentation(p: GroupPresentation) -> str:
        lines = []
        if p.name:
            lines.append(f"name: {p.name}")
        lines.append(f"gens: {', '.join(p.generators)}")
        if p.relators:
            lines.append(f"rels: {', '.join(format_word(r, p.generators) for r in p.relators)}")
        return "\n".join(lines) + "\n"

    def parse_group_ring(self, text: str, phi: GroupMap) -> GroupRingElement:
        """Elemento de Z[G]: 1 + x - 2*x^2, (1 - x)*y"""
        carrier = phi.carrier

        def evaluate(node: ast.AST) -> GroupRingElement:
            if isinstance(node, ast.Constant) and isinstance(node.value, int):
                return GroupRingElement.of(carrier, carrier.identity, node.value)
            if isinstance(node, ast.Name):
                word = self.parse_word(node.id, phi.generators)
                return GroupRingElement.of(carrier, phi(word))
            if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
                return -evaluate(node.operand)
            if isinstance(node, ast.BinOp):
                if isinstance(node.op, ast.Pow):
                    word = self.parse_word(ast.unparse(node), phi.generators)
                    return GroupRingElement.of(carrier, phi(word))
                left, right = evaluate(node.left), evaluate(node.right)
                if isinstance(node.op, ast.Add):
                    return left + right
                if isinstance(node.op, ast.Sub):
                    return left - right
                if isinstance(node.op, ast.Mult):
                    return left * right
            raise ParseError(f"Construcción no soportada en {text!r}", witness=text)

        return evaluate(self._tree(text))

    def parse_fcm(self, text: str, presentation: GroupPresentation,
                  relator_names: Optional[Sequence[str]] = None) -> FreeCrossedModuleElement:
        """Elemento de C(ω): r0@x * (r1@y)^-1, 1 para la identidad"""
        names = list(relator_names or [f"r{k}" for k in range(len(presentation.relators))])

        def evaluate(node: ast.AST) -> FreeCrossedModuleElement:
            if isinstance(node, ast.Name):
                if node.id not in names:
                    raise ParseError(f"Relator desconocido: {node.id}", witness=node.id)
                return FreeCrossedModuleElement.generator(names.index(node.id))
            if isinstance(node, ast.Constant) and node.value == 1:
                return FreeCrossedModuleElement()
            if isinstance(node, ast.BinOp):
                if isinstance(node.op, ast.Mult):
                    return evaluate(node.left) * evaluate(node.right)
                if isinstance(node.op, ast.MatMult):
                    word = self.parse_word(ast.unparse(node.right), presentation.generators)
                    return action_on_fcm(evaluate(node.left), word)
                if isinstance(node.op, ast.Pow):
                    base, k = evaluate(node.left), self._int(node.right, text)
                    result = FreeCrossedModuleElement()
                    for _ in range(abs(k)):
                        result = result * (base if k > 0 else base.inverse())
                    return result
            raise ParseError(f"Construcción no soportada en {text!r}", witness=text)

        return evaluate(self._tree(text))

    # ------------------------------------------------------------------
    # Grupoides
    # ------------------------------------------------------------------

    def parse_path(self, text: str, graph: DirectedGraph) -> EdgePath:
        """
        Camino en el grupoide libre: e*f^-1, id_p

        Raises:
            ParseError: con la arista desconocida
            NotComposable: si los extremos no encajan
        """
        def evaluate(node: ast.AST) -> EdgePath:
            if isinstance(node, ast.Name):
                if node.id.startswith("id_") and graph.has_object(node.id[3:]):
                    return EdgePath.identity(node.id[3:])
                if not graph.has_edge(node.id):
                    raise ParseError(f"Arista desconocida: {node.id}", witness=node.id)
                return EdgePath.of(graph.edge(node.id))
            if isinstance(node, ast.BinOp):
                if isinstance(node.op, ast.Mult):
                    return evaluate(node.left) * evaluate(node.right)
                if isinstance(node.op, ast.Pow):
                    return evaluate(node.left) ** self._int(node.right, text)
            raise ParseError(f"Construcción no soportada en el camino {text!r}", witness=text)

        return evaluate(self._tree(text))

    def _parse_edges(self, value: str, lineno: int) -> List[Edge]:
        edges = []
        for item in _split_top(value, ","):
            if ":" not in item:
                raise ParseError(f"Línea {lineno}: arista sin 'nombre: origen->destino'", line=lineno)
            name, ends = item.split(":", 1)
            source, target = _arrow(ends, lineno)
            edges.append(Edge(name.strip(), source, target))
        return edges

    def parse_groupoid(self, text: str) -> GroupoidPresentation:
        """Formato .gpd: 'objects: p, q', 'edges: e: p->q', 'rels: e*f = id_p'"""
        name, objects, edges, relation_texts = "", [], [], []
        for key, value, lineno in _fields(text):
            if key == "name":
                name = value
            elif key == "objects":
                objects.extend(_split_top(value, ","))
            elif key == "edges":
                edges.extend(self._parse_edges(value, lineno))
            elif key == "rels":
                relation_texts.extend((r, lineno) for r in _split_top(value, ","))
            else:
                raise ParseError(f"Línea {lineno}: clave desconocida {key!r}", line=lineno)
        graph = DirectedGraph(objects, edges)
        relations = []
        for rel, lineno in relation_texts:
            if "=" not in rel:
                raise ParseError(f"Línea {lineno}: relación sin '='", line=lineno)
            lhs, rhs = rel.split("=", 1)
            relations.append((self.parse_path(lhs, graph), self.parse_path(rhs, graph)))
        return GroupoidPresentation(graph, tuple(relations), name=name)

    @staticmethod
    def format_groupoid(p: GroupoidPresentation) -> str:
        lines = []
        if p.name:
            lines.append(f"name: {p.name}")
        lines.append(f"objects: {', '.join(p.objects)}")
        if p.edges:
            lines.append("edges: " + ", ".join(f"{e.name}: {e.source}->{e.target}" for e in p.edges))
        for lhs, rhs in p.relations:
            lines.append(f"rels: {format_path(lhs)} = {format_path(rhs)}")
        return "\n".join(lines) + "\n"

    def _sections(self, text: str) -> Dict[str, str]:
        sections: Dict[str, List[str]] = {}
        current = None
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            match = re.fullmatch(r"\[(\w+)\]", line)
            if match:
                current = match.group(1)
                sections[current] = []
            elif line:
                if current is None:
                    raise ParseError("Contenido antes de la primera sección")
                sections[current].append(line)
        return {k: "\n".join(v) for k, v in sections.items()}

    def _parse_groupoid_morphism(self, text: str, source: GroupoidPresentation,
                                 target: GroupoidPresentation) -> GroupoidMorphism:
        object_map, edge_map = {}, {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            left, right = _arrow(raw, lineno)
            if source.graph.has_object(left):
                object_map[left] = right
            elif source.graph.has_edge(left):
                edge_map[left] = self.parse_path(right, target.graph)
            else:
                raise ParseError(f"Línea {lineno}: {left} no es objeto ni arista del origen", witness=left)
        return GroupoidMorphism(source, target, object_map, edge_map)

    def parse_pushout(self, text: str) -> Tuple[GroupoidMorphism, GroupoidMorphism]:
        """
        Formato de pushout: secciones [W], [U], [V] (cuerpos .gpd) e [i], [j]
        con líneas 'objeto -> objeto' y 'arista -> camino'
        """
        sections = self._sections(text)
        missing = [s for s in ("W", "U", "V", "i", "j") if s not in sections]
        if missing:
            raise ParseError(f"Faltan secciones: {', '.join(missing)}", witness=missing)
        W, U, V = (self.parse_groupoid(sections[s]) for s in "WUV")
        i = self._parse_groupoid_morphism(sections["i"], W, U)
        j = self._parse_groupoid_morphism(sections["j"], W, V)
        return i, j

    # ------------------------------------------------------------------
    # Módulos cruzados
    # ------------------------------------------------------------------

    def parse_group_spec(self, text: str) -> FiniteGroup:
        """
        Grupos con nombre: C4, S3, A4, D8 (orden 8), Q8, 1 y productos C2xC2

        Raises:
            ParseError: si el nombre no es reconocido
        """
        factors = [f.strip() for f in text.strip().split("x")]
        groups = []
        for factor in factors:
            match = re.fullmatch(r"([CSAD])(\d+)", factor)
            if factor == "1":
                groups.append(FiniteGroup.trivial())
            elif factor == "Q8":
                groups.append(FiniteGroup.quaternion())
            elif match:
                kind, n = match.group(1), int(match.group(2))
                if kind == "C":
                    groups.append(FiniteGroup.cyclic(n))
                elif kind == "S":
                    groups.append(FiniteGroup.symmetric(n))
                elif kind == "A":
                    groups.append(FiniteGroup.alternating(n))
                elif n % 2 == 0 and n >= 4:
                    groups.append(FiniteGroup.dihedral(n // 2))
                else:
                    raise ParseError(f"Orden diedral inválido: {factor}", witness=factor)
            else:
                raise ParseError(f"Grupo desconocido: {factor!r}", witness=factor)
        group = groups[0]
        for other in groups[1:]:
            group = FiniteGroup.direct_product(group, other)
        return group

    @staticmethod
    def parse_label(G: FiniteGroup, text: str) -> int:
        text = text.strip()
        try:
            return G.labels.index(text)
        except ValueError:
            raise ParseError(f"{text!r} no es elemento de {G.name or 'el grupo'}", witness=text) from None

    def parse_xmod(self, text: str) -> CrossedModule:
        """
        Formato .xmod

        Claves: name, standard (normal_inclusion | inner_automorphism |
        zero_module | central_epi; ausente = explícito), M, P, sub (generadores
        del subgrupo normal), mu ('m -> p' por generador de M) y act
        ('m @ p -> m'' por generador de P).

        Raises:
            ParseError: si falta un dato
            PreconditionFailed: si los datos no cumplen la hipótesis del constructor
        """
        source: Dict[str, Any] = {"mu": [], "act": [], "sub": []}
        for key, value, lineno in _fields(text):
            if key in ("mu", "act"):
                source[key].append(_arrow(value, lineno))
            elif key == "sub":
                source["sub"].extend(_split_top(value, ","))
            elif key in ("name", "standard", "M", "P"):
                source[key] = value
            else:
                raise ParseError(f"Línea {lineno}: clave desconocida {key!r}", line=lineno)
        kind = source.get("standard", "explicit")
        name = source.get("name", "")

        def group(key: str) -> FiniteGroup:
            if key not in source:
                raise ParseError(f"Falta '{key}' en el módulo cruzado {name}", witness=key)
            return self.parse_group_spec(source[key])

        if kind == "normal_inclusion":
            P = group("P")
            x = make_standard(kind, P=P, subgroup=[self.parse_label(P, s) for s in source["sub"]], name=name)
        elif kind == "inner_automorphism":
            x = make_standard(kind, M=group("M"), name=name)
        elif kind == "zero_module":
            M, P = group("M"), group("P")
            x = make_standard(kind, M=M, P=P, action=self._action_table(M, P, source["act"]), name=name)
        elif kind == "central_epi":
            M, P = group("M"), group("P")
            x = make_standard(kind, M=M, P=P, mu=self._mu_table(M, P, source["mu"]), name=name)
        elif kind == "explicit":
            M, P = group("M"), group("P")
            x = CrossedModule(M, P, self._mu_table(M, P, source["mu"]),
                              self._action_table(M, P, source["act"]), name=name)
        else:
            raise ParseError(f"Constructor desconocido: {kind} (opciones: {', '.join(STANDARD_KINDS)})",
                             witness=kind)
        x.source = source
        return x

    def _mu_table(self, M: FiniteGroup, P: FiniteGroup, pairs: List[Tuple[str, str]]) -> List[int]:
        gens = [self.parse_label(M, m) for m, _ in pairs]
        images = [self.parse_label(P, p) for _, p in pairs]
        table = _extend_images(M, P, gens, images)
        if table is None or -1 in table:
            raise PreconditionFailed("Las imágenes de μ no definen un homomorfismo de M")
        return table

    def _action_table(self, M: FiniteGroup, P: FiniteGroup, pairs: List[Tuple[str, str]]):
        images: Dict[int, Dict[int, int]] = {}
        m_generators: List[int] = []
        for left, right in pairs:
            if "@" not in left:
                raise ParseError(f"Acción sin '@': {left}", witness=left)
            m_text, p_text = left.split("@", 1)
            m, p = self.parse_label(M, m_text), self.parse_label(P, p_text)
            if m not in m_generators:
                m_generators.append(m)
            images.setdefault(p, {})[m] = self.parse_label(M, right)
        m_generators = m_generators or M.generating_set()
        p_generators = list(images) or P.generating_set()
        full = {p: [images.get(p, {}).get(m, m) for m in m_generators] for p in p_generators}
        return action_from_generators(M, P, m_generators, p_generators, full)

    @staticmethod
    def format_xmod(x: CrossedModule) -> str:
        """
        Raises:
            PreconditionFailed: si el módulo no proviene de un archivo .xmod
        """
        source = x.source
        if not source:
            raise PreconditionFailed(f"{x!r} no tiene forma textual")
        lines = []
        for key in ("name", "standard", "M", "P"):
            if key in source:
                lines.append(f"{key}: {source[key]}")
        if source.get("sub"):
            lines.append(f"sub: {', '.join(source['sub'])}")
        lines.extend(f"mu: {m} -> {p}" for m, p in source.get("mu", []))
        lines.extend(f"act: {left} -> {right}" for left, right in source.get("act", []))
        return "\n".join(lines) + "\n"

    # ------------------------------------------------------------------
    # Complejos cruzados
    # ------------------------------------------------------------------

    def parse_element(self, text: str, scope: Any, degree: int) -> Element:
        """
        Elemento de grado dado

        Grado 1: camino. Grado 2: producto de r, r^-1, r@camino, id_o.
        Grado >= 3: combinación entera 2*c@x - c, 0_o.
        """
        if isinstance(scope, CrossedComplex):
            scope = _Scope.of(scope)
        if degree == 0:
            if not scope.graph.has_object(text.strip()):
                raise ParseError(f"Objeto desconocido: {text}", witness=text)
            return text.strip()
        if degree == 1:
            return self.parse_path(text, scope.graph)

        def generator(name: str) -> Element:
            if name.startswith("id_") and degree == 2 and scope.graph.has_object(name[3:]):
                return Degree2Element(name[3:])
            if name.startswith("_zero_") and degree >= 3 and scope.graph.has_object(name[6:]):
                return ModuleElement(name[6:], degree)
            if name not in scope.cells:
                raise ParseError(f"Generador desconocido: {name}", witness=name)
            n, base = scope.cells[name]
            if n != degree:
                raise ParseError(f"{name} tiene grado {n}, no {degree}", witness=name)
            ident = EdgePath.identity(base)
            if degree == 2:
                return Degree2Element(base, ((name, 1, ident),))
            return ModuleElement(base, degree, ((name, ident, 1),))

        def evaluate(node: ast.AST) -> Element:
            if isinstance(node, ast.Name):
                return generator(node.id)
            if isinstance(node, ast.BinOp):
                if isinstance(node.op, ast.MatMult):
                    return evaluate(node.left).act(self.parse_path(ast.unparse(node.right), scope.graph))
                if isinstance(node.op, ast.Pow) and degree == 2:
                    return evaluate(node.left) ** self._int(node.right, text)
                if isinstance(node.op, ast.Mult):
                    if degree == 2:
                        return evaluate(node.left) * evaluate(node.right)
                    if self._is_int(node.left):
                        return evaluate(node.right).scale(self._int(node.left, text))
                    return evaluate(node.left).scale(self._int(node.right, text))
                if degree >= 3 and isinstance(node.op, (ast.Add, ast.Sub)):
                    left, right = evaluate(node.left), evaluate(node.right)
                    return left + right if isinstance(node.op, ast.Add) else left - right
            if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub) and degree >= 3:
                return -evaluate(node.operand)
            raise ParseError(f"Construcción no soportada en grado {degree}: {text!r}", witness=text)

        return evaluate(self._tree(text))

    def parse_crossed_complex(self, text: str) -> CrossedComplex:
        """
        Formato .crs

        Claves: name, objects, deg1 ('x: o->o'), rel1 ('lhs = rhs'),
        degN ('c@o = borde') y relN (elemento trivial de grado N).
        """
        name, objects, edges = "", [], []
        rel1: List[Tuple[str, int]] = []
        cells: Dict[int, List[Tuple[str, str, str, int]]] = {}
        relations: Dict[int, List[Tuple[str, int]]] = {}
        for key, value, lineno in _fields(text):
            match = re.fullmatch(r"(deg|rel)(\d+)", key)
            if key == "name":
                name = value
            elif key == "objects":
                objects.extend(_split_top(value, ","))
            elif key == "deg1":
                edges.extend(self._parse_edges(value, lineno))
            elif key == "rel1":
                rel1.extend((r, lineno) for r in _split_top(value, ","))
            elif match and int(match.group(2)) >= 2:
                n = int(match.group(2))
                if match.group(1) == "rel":
                    relations.setdefault(n, []).append((value, lineno))
                    continue
                if "=" not in value or "@" not in value.split("=", 1)[0]:
                    raise ParseError(f"Línea {lineno}: se esperaba 'c@objeto = borde'", line=lineno)
                head, boundary = value.split("=", 1)
                cell, base = (s.strip() for s in head.split("@", 1))
                cells.setdefault(n, []).append((cell, base, boundary.strip(), lineno))
            else:
                raise ParseError(f"Línea {lineno}: clave desconocida {key!r}", line=lineno)

        graph = DirectedGraph(objects, edges)
        c1_relations = []
        for rel, lineno in rel1:
            if "=" not in rel:
                raise ParseError(f"Línea {lineno}: relación sin '='", line=lineno)
            lhs, rhs = rel.split("=", 1)
            c1_relations.append((self.parse_path(lhs, graph), self.parse_path(rhs, graph)))
        scope = _Scope(graph)
        built: List[Cell] = []
        for n in sorted(cells):
            for cell, base, _, _ in cells[n]:
                scope.cells[cell] = (n, base)
            for cell, base, boundary, lineno in cells[n]:
                try:
                    built.append(Cell(cell, n, base, self.parse_element(boundary, scope, n - 1)))
                except ParseError as exc:
                    exc.context["line"] = lineno
                    raise
        parsed_relations = {
            n: [self.parse_element(r, scope, n) for r, _ in items] for n, items in relations.items()
        }
        c1 = GroupoidPresentation(graph, tuple(c1_relations), name=name)
        return CrossedComplex(name or "complex", c1, built, parsed_relations)

    @staticmethod
    def format_crossed_complex(C: CrossedComplex) -> str:
        lines = [f"name: {C.name}", f"objects: {', '.join(C.objects)}"]
        for e in C.c1.edges:
            lines.append(f"deg1: {e.name}: {e.source}->{e.target}")
        for lhs, rhs in C.c1.relations:
            lines.append(f"rel1: {format_path(lhs)} = {format_path(rhs)}")
        for cell in C.all_cells():
            lines.append(f"deg{cell.degree}: {cell.name}@{cell.base} = {format_element(cell.boundary)}")
        for n in sorted(C.relations):
            lines.extend(f"rel{n}: {format_element(r)}" for r in C.relations[n])
        return "\n".join(lines) + "\n"

    # ------------------------------------------------------------------
    # Morfismos y homotopías
    # ------------------------------------------------------------------

    def parse_homotopy(self, text: str, load_complex: Callable[[str], CrossedComplex]) -> HomotopyData:
        """
        Formato .hty: source, target, f.objects / f.degN, g.objects / g.degN,
        H.deg0 (objeto -> camino) y H.degN (generador -> elemento de grado N+1)
        """
        fields = _fields(text)
        refs = {key: value for key, value, _ in fields if key in ("source", "target")}
        if set(refs) != {"source", "target"}:
            raise ParseError("El archivo de homotopía necesita 'source' y 'target'")
        A, C = load_complex(refs["source"]), load_complex(refs["target"])
        scope = _Scope.of(C)
        maps: Dict[str, Dict[str, Any]] = {"f": {}, "g": {}}
        objects: Dict[str, Dict[str, str]] = {"f": {}, "g": {}}
        H0: Dict[str, EdgePath] = {}
        H: Dict[str, Element] = {}
        for key, value, lineno in fields:
            if key in ("source", "target"):
                continue
            match = re.fullmatch(r"(f|g|H)\.(objects|deg(\d+))", key)
            if not match:
                raise ParseError(f"Línea {lineno}: clave desconocida {key!r}", line=lineno)
            left, right = _arrow(value, lineno)
            who, what = match.group(1), match.group(2)
            if who in ("f", "g") and what == "objects":
                objects[who][left] = right
            elif who in ("f", "g"):
                maps[who][left] = self.parse_element(right, scope, int(match.group(3)))
            elif what == "deg0":
                H0[left] = self.parse_path(right, scope.graph)
            elif what != "objects":
                H[left] = self.parse_element(right, scope, int(match.group(3)) + 1)
            else:
                raise ParseError(f"Línea {lineno}: H no tiene 'objects'", line=lineno)
        f = CrossedComplexMorphism(A, C, objects["f"], maps["f"], name="f")
        g = CrossedComplexMorphism(A, C, objects["g"], maps["g"], name="g")
        return HomotopyData(f, g, H0, H)

    # ------------------------------------------------------------------
    # Cuadrados y cascarones
    # ------------------------------------------------------------------

    def parse_square(self, text: str, dg: DoubleGroupoid) -> Square:
        """Literal '(m; c,a,d,b)' con etiquetas de M y P"""
        body = text.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise ParseError(f"Cuadrado mal formado: {text!r}", witness=text)
        parts = _split_top(body[1:-1], ";")
        if len(parts) != 2:
            raise ParseError(f"Cuadrado mal formado: {text!r}", witness=text)
        edges = _split_top(parts[1], ",")
        if len(edges) != 4:
            raise ParseError(f"Un cuadrado tiene cuatro aristas: {text!r}", witness=text)
        c, a, d, b = (self.parse_label(dg.P, e) for e in edges)
        return Square(self.parse_label(dg.M, parts[0]), c, a, d, b)

    def parse_shell(self, text: str, load_xmod: Callable[[str], CrossedModule]) -> Tuple[DoubleGroupoid, Shell3]:
        """Formato .shell: 'xmod: archivo' y las seis caras 'a1-: (m; c,a,d,b)'"""
        fields = _fields(text)
        refs = [value for key, value, _ in fields if key == "xmod"]
        if len(refs) != 1:
            raise ParseError("El cascarón debe declarar exactamente un 'xmod'")
        dg = from_crossed_module(load_xmod(refs[0]))
        faces = {}
        for key, value, lineno in fields:
            if key == "xmod":
                continue
            if key not in FACE_NAMES:
                raise ParseError(f"Línea {lineno}: cara desconocida {key!r}", line=lineno)
            faces[key] = self.parse_square(value, dg)
        return dg, dg.shell_from_faces(faces)

    @staticmethod
    def format_shell(dg: DoubleGroupoid, sh: Shell3, xmod_ref: str) -> str:
        return f"xmod: {xmod_ref}\n" + dg.format_shell(sh)

    # ------------------------------------------------------------------
    # Despacho por tipo de archivo
    # ------------------------------------------------------------------

    def parse_cells(self, text: str) -> List[CubeCell]:
        return parse_cells(text)

    def parse_certificate(self, text: str):
        return parse_certificate(text)

    def parse_file(self, path: Path) -> Any:
        """
        Parsea un archivo según su extensión

        Raises:
            ParseError: si la extensión no es conocida o el contenido es inválido
        """
        path = Path(path)
        kind = FILE_KINDS.get(path.suffix)
        if kind is None:
            raise ParseError(f"Extensión desconocida: {path.suffix}", witness=str(path))
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"No se pudo leer {path}: {exc}", witness=str(path)) from exc
        base = path.parent
        if kind == "presentation":
            return self.parse_presentation(text)
        if kind == "groupoid":
            if re.search(r"^\s*\[W\]", text, re.MULTILINE):
                return self.parse_pushout(text)
            return self.parse_groupoid(text)
        if kind == "pushout":
            return self.parse_pushout(text)
        if kind == "xmod":
            return self.parse_xmod(text)
        if kind == "crs":
            return self.parse_crossed_complex(text)
        if kind == "shell":
            return self.parse_shell(text, lambda ref: self.parse_file(base / ref))
        if kind == "cells":
            return self.parse_cells(text)
        if kind == "certificate":
            return self.parse_certificate(text)
        return self.parse_homotopy(text, lambda ref: self.parse_file(base / ref))

    def parse(self, path: Path) -> ParseResult:
        """Versión sin excepciones de parse_file, para inventarios"""
        path = Path(path)
        kind = FILE_KINDS.get(path.suffix, "unknown")
        try:
            value = self.parse_file(path)
            if kind == "groupoid" and isinstance(value, tuple):
                kind = "pushout"
            return ParseResult(str(path), value, kind, True)
        except XkitError as exc:
            logger.debug("Error parseando %s: %s", path, exc)
            return ParseResult(str(path), None, kind, False, error_message=str(exc),
                               metadata=dict(exc.context))
