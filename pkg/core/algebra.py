"""
Algebra Module
Sustrato aritmético exacto: palabras en grupos libres, grupos finitos
por tabla de multiplicación, enumeración acotada de grupos finitamente
presentados, anillos de grupo y núcleos de módulos sobre Z[G].
"""

import itertools
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import PreconditionFailed, Unbounded
from .linalg import AbelianInvariants, int_matrix, left_kernel, quotient_invariants, sub_quotient_invariants

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]

# Límite de la búsqueda exhaustiva de isomorfismos
ISOMORPHISM_SEARCH_LIMIT = 24

# Clases de palabras admitidas mientras la clausura no estabiliza, por unidad de cota
CLOSURE_WORKSPACE_FACTOR = 16
CLOSURE_MIN_WORKSPACE = 256


def free_reduce(letters: Iterable[Letter]) -> "FreeWord":
    """
    Reducción libre de una sucesión de letras (generador, ±1)

    Args:
        letters: Letras o una FreeWord

    Returns:
        La única palabra libremente reducida igual a la entrada
    """
    if isinstance(letters, FreeWord):
        return letters
    return FreeWord(tuple(letters))


def _reduce_letters(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    stack: List[Letter] = []
    for gen, sign in letters:
        if sign not in (1, -1):
            raise PreconditionFailed(f"Exponente de letra inválido: {sign}")
        if stack and stack[-1][0] == gen and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((int(gen), int(sign)))
    return tuple(stack)


@dataclass(frozen=True)
class FreeWord:
    """Palabra libremente reducida en un grupo libre F(X)"""
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'letters', _reduce_letters(self.letters))

    @classmethod
    def generator(cls, index: int, sign: int = 1) -> "FreeWord":
        return cls(((index, sign),))

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if not isinstance(other, FreeWord):
            return NotImplemented
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, n: int) -> "FreeWord":
        base = self if n >= 0 else self.inverse()
        return FreeWord(base.letters * abs(n))

    def conjugate(self, q: "FreeWord") -> "FreeWord":
        """q⁻¹·w·q"""
        return q.inverse() * self * q

    def sort_key(self) -> Tuple:
        return (len(self.letters), tuple((g, -s) for g, s in self.letters))

    def exponent_sum(self, index: int) -> int:
        return sum(s for g, s in self.letters if g == index)


def format_word(word: FreeWord, names: Sequence[str]) -> str:
    """Formato ASCII de una palabra: x^2*y^-1, '1' para la identidad"""
    if word.is_identity:
        return "1"
    parts = []
    for (gen, sign), run in itertools.groupby(word.letters):
        power = len(list(run)) * sign
        name = names[gen]
        parts.append(name if power == 1 else f"{name}^{power}")
    return "*".join(parts)


@dataclass(frozen=True)
class GroupPresentation:
    """Presentación ⟨X | R⟩ con relatores como palabras libres"""
    generators: Tuple[str, ...]
    relators: Tuple[FreeWord, ...] = ()
    name: str = ""

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise PreconditionFailed(f"Generadores repetidos en {self.generators}")
        for r in self.relators:
            for gen, _ in r.letters:
                if not 0 <= gen < len(self.generators):
                    raise PreconditionFailed(f"Relator con generador fuera de rango: {gen}")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def generator_index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise PreconditionFailed(f"Generador desconocido: {name}") from None

    def word_text(self, word: FreeWord) -> str:
        return format_word(word, self.generators)


class FreeGroup:
    """Grupo libre sobre nombres de generadores, usado como portador"""

    def __init__(self, generators: Sequence[str]):
        self.generators = tuple(generators)

    @property
    def identity(self) -> FreeWord:
        return FreeWord()

    def op(self, a: FreeWord, b: FreeWord) -> FreeWord:
        return a * b

    def inverse(self, a: FreeWord) -> FreeWord:
        return a.inverse()

    def sort_key(self, a: FreeWord) -> Tuple:
        return a.sort_key()

    def label(self, a: FreeWord) -> str:
        return format_word(a, self.generators)

    def __repr__(self):
        return f"FreeGroup({', '.join(self.generators)})"


class FiniteGroup:
    """Grupo finito por tabla de multiplicación; la identidad es el índice 0"""

    def __init__(self, mul: np.ndarray, labels: Optional[Sequence[str]] = None, name: str = "",
                 check: bool = True):
        mul = np.asarray(mul, dtype=np.int64)
        n = mul.shape[0]
        if mul.shape != (n, n) or n == 0:
            raise PreconditionFailed("La tabla de multiplicación debe ser cuadrada y no vacía")
        self.mul = mul
        self.mul.setflags(write=False)
        self.name = name
        self.labels = tuple(labels) if labels is not None else tuple(f"g{i}" for i in range(n))
        if check:
            problems = self.validate()
            if problems:
                raise PreconditionFailed(f"Tabla de grupo inválida: {problems[0]}")
        inv = np.zeros(n, dtype=np.int64)
        rows, cols = np.nonzero(mul == 0)
        inv[rows] = cols
        self.inv = inv
        self.inv.setflags(write=False)
        self._orders: Optional[np.ndarray] = None

    # -- axiomas -------------------------------------------------------
    def validate(self) -> List[str]:
        """
        Verifica exhaustivamente los axiomas de grupo

        Returns:
            Lista de descripciones de violaciones (vacía si es un grupo)
        """
        n = self.order
        mul = self.mul
        problems = []
        if mul.min() < 0 or mul.max() >= n:
            return ["entradas fuera de rango"]
        ids = np.arange(n)
        if not (np.array_equal(mul[0, :], ids) and np.array_equal(mul[:, 0], ids)):
            problems.append("el índice 0 no es identidad bilateral")
        for row in range(n):
            if len(set(mul[row, :].tolist())) != n:
                problems.append(f"la fila {row} no es una permutación")
                break
        left = mul[mul, :]          # left[a, b, c] = (ab)c
        right = mul[:, mul]         # right[a, b, c] = a(bc)
        if not np.array_equal(left, right):
            a, b, c = np.argwhere(left != right)[0]
            problems.append(f"asociatividad falla en ({a},{b},{c})")
        return problems

    # -- aritmética ----------------------------------------------------
    @property
    def order(self) -> int:
        return self.mul.shape[0]

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def power(self, a: int, k: int) -> int:
        base = a if k >= 0 else self.inverse(a)
        result = 0
        for _ in range(abs(k)):
            result = self.op(result, base)
        return result

    def conjugate(self, m: int, p: int) -> int:
        """m^p = p⁻¹·m·p"""
        return self.op(self.op(self.inverse(p), m), p)

    def commutator(self, a: int, b: int) -> int:
        return self.op(self.op(self.inverse(a), self.inverse(b)), self.op(a, b))

    def product(self, elements: Iterable[int]) -> int:
        result = 0
        for e in elements:
            result = self.op(result, e)
        return result

    def sort_key(self, a: int) -> int:
        return a

    def label(self, a: int) -> str:
        return self.labels[a]

    def element_order(self, a: int) -> int:
        return int(self.element_orders()[a])

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            n = self.order
            orders = np.zeros(n, dtype=np.int64)
            current = np.arange(n)
            for k in range(1, n + 1):
                hit = (current == 0) & (orders == 0)
                orders[hit] = k
                if orders.min() > 0:
                    break
                current = self.mul[current, np.arange(n)]
            self._orders = orders
        return self._orders

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def center(self) -> List[int]:
        return [a for a in self.elements() if np.array_equal(self.mul[a, :], self.mul[:, a])]

    def evaluate(self, word: FreeWord, images: Sequence[int]) -> int:
        """Evalúa una palabra dadas las imágenes de los generadores"""
        result = 0
        for gen, sign in word.letters:
            g = images[gen]
            result = self.op(result, g if sign == 1 else self.inverse(g))
        return result

    # -- subgrupos -----------------------------------------------------
    def subgroup_generated(self, gens: Iterable[int]) -> List[int]:
        """Cierre de un conjunto bajo producto (sorted)"""
        gens = list(gens)
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.op(x, g)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(seen)

    def is_subgroup(self, subset: Iterable[int]) -> bool:
        s = set(subset)
        if 0 not in s:
            return False
        return all(self.op(a, self.inverse(b)) in s for a in s for b in s)

    def is_normal(self, subset: Iterable[int]) -> bool:
        s = set(subset)
        if not self.is_subgroup(s):
            return False
        return all(self.conjugate(m, p) in s for m in s for p in self.elements())

    def generating_set(self) -> List[int]:
        """Conjunto generador voraz, determinista"""
        gens: List[int] = []
        span = {0}
        by_order = sorted(self.elements(), key=lambda a: (-self.element_order(a), a))
        for a in by_order:
            if a not in span:
                gens.append(a)
                span = set(self.subgroup_generated(gens))
            if len(span) == self.order:
                break
        return gens

    def subgroup(self, elements: Sequence[int], name: str = "") -> Tuple["FiniteGroup", List[int]]:
        """
        Subgrupo como grupo propio con su inclusión

        Returns:
            (H, embedding) donde embedding[i] es el elemento de self
        """
        elements = sorted(set(elements))
        if not self.is_subgroup(elements):
            raise PreconditionFailed("El subconjunto no es un subgrupo")
        index = {g: i for i, g in enumerate(elements)}
        mul = np.array([[index[self.op(a, b)] for b in elements] for a in elements], dtype=np.int64)
        return FiniteGroup(mul, [self.labels[g] for g in elements], name=name, check=False), list(elements)

    # -- constructores -------------------------------------------------
    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls(np.zeros((1, 1), dtype=np.int64), ["1"], name="1")

    @classmethod
    def cyclic(cls, n: int, generator: str = "x") -> "FiniteGroup":
        if n < 1:
            raise PreconditionFailed("El orden de un grupo cíclico debe ser >= 1")
        idx = np.arange(n)
        mul = (idx[:, None] + idx[None, :]) % n
        labels = ["1"] + [generator if k == 1 else f"{generator}^{k}" for k in range(1, n)]
        return cls(mul, labels, name=f"C{n}", check=False)

    @classmethod
    def from_permutations(cls, generators: Sequence[Sequence[int]], name: str = "") -> "FiniteGroup":
        """
        Grupo generado por permutaciones (producto: primero p, luego q)

        Args:
            generators: Permutaciones como tuplas de imágenes de 0..n-1
        """
        generators = [tuple(int(v) for v in g) for g in generators]
        degree = len(generators[0]) if generators else 1
        ident = tuple(range(degree))
        elements = [ident]
        index = {ident: 0}
        queue = deque([ident])
        while queue:
            p = queue.popleft()
            for g in generators:
                q = tuple(g[p[i]] for i in range(degree))
                if q not in index:
                    index[q] = len(elements)
                    elements.append(q)
                    queue.append(q)
        n = len(elements)
        mul = np.zeros((n, n), dtype=np.int64)
        for i, p in enumerate(elements):
            for j, q in enumerate(elements):
                mul[i, j] = index[tuple(q[p[k]] for k in range(degree))]
        labels = [_cycle_notation(p) for p in elements]
        return cls(mul, labels, name=name, check=False)

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        if n <= 1:
            return cls.trivial()
        transposition = tuple([1, 0] + list(range(2, n)))
        cycle = tuple(list(range(1, n)) + [0])
        return cls.from_permutations([cycle, transposition], name=f"S{n}")

    @classmethod
    def alternating(cls, n: int) -> "FiniteGroup":
        if n <= 2:
            return cls.trivial()
        gens = [tuple([1, 2, 0] + list(range(3, n)))]
        for k in range(3, n):
            perm = list(range(n))
            perm[0], perm[1], perm[k] = perm[1], perm[k], perm[0]
            gens.append(tuple(perm))
        return cls.from_permutations(gens, name=f"A{n}")

    @classmethod
    def dihedral(cls, n: int) -> "FiniteGroup":
        """Grupo diedral de orden 2n actuando sobre los vértices de un n-gono"""
        rotation = tuple((i + 1) % n for i in range(n))
        reflection = tuple((-i) % n for i in range(n))
        return cls.from_permutations([rotation, reflection], name=f"D{2 * n}")

    @classmethod
    def quaternion(cls) -> "FiniteGroup":
        # acción regular a derecha sobre 1,-1,i,-i,j,-j,k,-k
        i = (2, 3, 1, 0, 7, 6, 4, 5)
        j = (4, 5, 6, 7, 1, 0, 3, 2)
        return cls.from_permutations([i, j], name="Q8")

    @classmethod
    def direct_product(cls, G: "FiniteGroup", H: "FiniteGroup") -> "FiniteGroup":
        n, m = G.order, H.order
        mul = np.zeros((n * m, n * m), dtype=np.int64)
        for a in range(n):
            for b in range(m):
                row = a * m + b
                mul[row, :] = (G.mul[a, :][:, None] * m + H.mul[b, :][None, :]).reshape(-1)
        labels = [f"({G.labels[a]},{H.labels[b]})" for a in range(n) for b in range(m)]
        return cls(mul, labels, name=f"{G.name}x{H.name}", check=False)

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"


def _cycle_notation(perm: Tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle, x = [], start
        while x not in seen:
            seen.add(x)
            cycle.append(x)
            x = perm[x]
        cycles.append("(" + ",".join(str(c + 1) for c in cycle) + ")")
    return "".join(cycles) or "1"


# ---------------------------------------------------------------------------
# Enumeración acotada
# ---------------------------------------------------------------------------

@dataclass
class EnumeratedGroup:
    """Grupo finito obtenido de una presentación por clausura acotada"""
    presentation: GroupPresentation
    group: FiniteGroup
    normal_forms: Tuple[FreeWord, ...]
    columns: np.ndarray            # columns[c, x] = x·letra(c)
    word_index: Dict[FreeWord, int] = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def generator_images(self) -> Tuple[int, ...]:
        return tuple(int(self.columns[2 * i, 0]) for i in range(self.presentation.rank))

    def evaluate(self, word: FreeWord) -> int:
        """Índice del elemento representado por una palabra"""
        x = 0
        for gen, sign in word.letters:
            x = int(self.columns[2 * gen + (0 if sign == 1 else 1), x])
        return x

    def normal_form(self, word: FreeWord) -> FreeWord:
        return self.normal_forms[self.evaluate(word)]


class _WordClosure:
    """
    Grafo de Cayley de las palabras, crecido longitud a longitud

    Cada clase guarda sus productos por las 2k letras. En cada nivel se
    multiplican por todas las letras las clases aún incompletas y luego se
    imponen los relatores: un lazo r leído desde una clase que vuelve a
    otra clase las identifica, y un lazo al que le falta una sola letra la
    deduce. El grafo es estable cuando está completo y ningún relator
    cambia nada.
    """

    def __init__(self, presentation: GroupPresentation, bound: int):
        self.k = presentation.rank
        self.bound = bound
        self.workspace = max(CLOSURE_MIN_WORKSPACE, CLOSURE_WORKSPACE_FACTOR * bound)
        self.table: List[List[Optional[int]]] = [[None] * (2 * self.k)]
        self.parent = [0]
        self.live = 1
        self.relators = [self._columns_of(r) for r in presentation.relators if not r.is_identity]

    @staticmethod
    def _columns_of(word: FreeWord) -> List[int]:
        return [2 * g + (0 if s == 1 else 1) for g, s in word.letters]

    def find(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def follow(self, c: int, col: int) -> Optional[int]:
        t = self.table[c][col]
        return None if t is None else self.find(t)

    def classes(self) -> List[int]:
        return [c for c in range(len(self.table)) if self.parent[c] == c]

    def _extend(self, c: int, col: int):
        self.live += 1
        if self.live > self.workspace:
            raise Unbounded(f"La clausura no estabilizó: más de {self.workspace} clases de palabras "
                            f"(cota {self.bound})", bound=self.bound)
        d = len(self.table)
        self.table.append([None] * (2 * self.k))
        self.parent.append(d)
        self.table[c][col] = d
        self.table[d][col ^ 1] = c

    def _identify(self, a: int, b: int):
        queue = [(a, b)]
        while queue:
            a, b = queue.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if a > b:
                a, b = b, a
            self.parent[b] = a
            self.live -= 1
            for col in range(2 * self.k):
                t = self.table[b][col]
                if t is None:
                    continue
                self.table[b][col] = None
                t = self.find(t)
                existing = self.table[a][col]
                if existing is None:
                    self.table[a][col] = t
                else:
                    queue.append((existing, t))
                back = self.table[t][col ^ 1]
                if back is None:
                    self.table[t][col ^ 1] = a
                elif self.find(back) != a:
                    queue.append((back, a))

    def _impose(self, c: int, word: List[int]) -> bool:
        """Impone el lazo word en la clase c; True si el grafo cambió"""
        n = len(word)
        f, i = c, 0
        while i < n:
            nxt = self.follow(f, word[i])
            if nxt is None:
                break
            f, i = nxt, i + 1
        if i == n:
            if f == c:
                return False
            self._identify(f, c)
            return True
        b, j = c, n - 1
        while j > i:
            prv = self.follow(b, word[j] ^ 1)
            if prv is None:
                return False
            b, j = prv, j - 1
        # falta exactamente la letra word[i] entre f y b
        col = word[i]
        back = self.follow(b, col ^ 1)
        if back is None:
            self.table[f][col] = b
            self.table[b][col ^ 1] = f
        else:
            self._identify(back, f)
        return True

    def _saturate(self) -> bool:
        changed = False
        while True:
            round_changed = False
            for c in self.classes():
                for word in self.relators:
                    if self.parent[c] != c:
                        break
                    round_changed |= self._impose(c, word)
            if not round_changed:
                return changed
            changed = True

    def _grow(self) -> bool:
        grown = False
        for c in self.classes():
            for col in range(2 * self.k):
                if self.find(c) == c and self.table[c][col] is None:
                    self._extend(c, col)
                    grown = True
        return grown

    def run(self) -> int:
        """
        Crece y satura hasta estabilizar

        Returns:
            Número de clases (el orden del grupo)

        Raises:
            Unbounded: si se agota el espacio de trabajo o el orden supera la cota
        """
        while True:
            changed = self._saturate()
            if not self._grow() and not changed:
                break
        if self.live > self.bound:
            raise Unbounded(f"El grupo tiene orden {self.live}, mayor que la cota {self.bound}",
                            bound=self.bound)
        return self.live


def enumerate_fp_group(p: GroupPresentation, bound: int) -> EnumeratedGroup:
    """
    Enumera G = F(X)/N(R) cerrando las palabras bajo multiplicación módulo R

    Si la abelianización tiene parte libre el grupo es infinito y se
    rechaza sin crecer el grafo.

    Args:
        p: Presentación
        bound: Orden máximo admitido para G

    Returns:
        EnumeratedGroup con tabla, formas normales de longitud mínima y evaluador

    Raises:
        Unbounded: si la clausura no estabiliza o G tiene orden mayor que bound
    """
    if bound < 1:
        raise PreconditionFailed("La cota debe ser >= 1")
    if abelian_invariants(p).free_rank > 0:
        raise Unbounded(f"{p.name or 'G'} es infinito: su abelianización tiene parte libre", bound=bound)
    closure = _WordClosure(p, bound)
    order_found = closure.run()
    logger.debug("Clausura estable con %d clases (cota %d)", order_found, bound)

    k = p.rank
    order: Dict[int, int] = {0: 0}
    words: List[FreeWord] = [FreeWord()]
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for col in range(2 * k):
            t = closure.follow(c, col)
            if t is not None and t not in order:
                order[t] = len(words)
                words.append(words[order[c]] * FreeWord.generator(col // 2, 1 if col % 2 == 0 else -1))
                queue.append(t)

    n = len(words)
    columns = np.zeros((2 * k, n), dtype=np.int64)
    for c, idx in order.items():
        for col in range(2 * k):
            columns[col, idx] = order[closure.follow(c, col)]

    # mul[:, y] se obtiene aplicando las letras de la forma normal de y
    word_index = {w: i for i, w in enumerate(words)}
    mul = np.zeros((n, n), dtype=np.int64)
    mul[:, 0] = np.arange(n)
    for y in range(1, n):
        # el prefijo de una forma normal BFS es una forma normal anterior
        prefix = FreeWord(words[y].letters[:-1])
        gen, sign = words[y].letters[-1]
        col = 2 * gen + (0 if sign == 1 else 1)
        mul[:, y] = columns[col, mul[:, word_index[prefix]]]

    labels = [format_word(w, p.generators) for w in words]
    group = FiniteGroup(mul, labels, name=p.name, check=False)
    logger.debug("Presentación %s enumerada: orden %d", p.name or p.generators, n)
    return EnumeratedGroup(
        presentation=p,
        group=group,
        normal_forms=tuple(words),
        columns=columns,
        word_index=word_index,
    )


def presentation_from_group(G: FiniteGroup, names: Optional[Sequence[str]] = None) -> GroupPresentation:
    """
    Presentación de un grupo finito con los relatores del grafo de Cayley

    Los relatores son los lazos w_x·g·w_{xg}⁻¹ de las aristas fuera de un
    árbol generador BFS.
    """
    gens = G.generating_set()
    names = tuple(names) if names else tuple(f"g{i}" for i in range(len(gens)))
    tree_word: Dict[int, FreeWord] = {0: FreeWord()}
    queue = deque([0])
    tree_edges = set()
    while queue:
        x = queue.popleft()
        for i, g in enumerate(gens):
            y = G.op(x, g)
            if y not in tree_word:
                tree_word[y] = tree_word[x] * FreeWord.generator(i)
                tree_edges.add((x, i))
                queue.append(y)
    relators = []
    for x in G.elements():
        for i, g in enumerate(gens):
            if (x, i) in tree_edges:
                continue
            loop = tree_word[x] * FreeWord.generator(i) * tree_word[G.op(x, g)].inverse()
            if not loop.is_identity:
                relators.append(loop)
    return GroupPresentation(names, tuple(relators), name=G.name)


def abelian_invariants(p: GroupPresentation) -> AbelianInvariants:
    """Invariantes de la abelianización G^ab (matriz de sumas de exponentes)"""
    rows = [[r.exponent_sum(i) for i in range(p.rank)] for r in p.relators]
    return quotient_invariants(int_matrix(rows, p.rank), p.rank)


# ---------------------------------------------------------------------------
# Isomorfismos y automorfismos
# ---------------------------------------------------------------------------

def _extend_images(G: FiniteGroup, H: FiniteGroup, gens: List[int], images: Sequence[int]) -> Optional[List[int]]:
    phi = [-1] * G.order
    phi[0] = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g, h in zip(gens, images):
            y = G.op(x, g)
            value = H.op(phi[x], h)
            if phi[y] == -1:
                phi[y] = value
                queue.append(y)
            elif phi[y] != value:
                return None
    return phi


def homomorphisms_from_generators(G: FiniteGroup, H: FiniteGroup, bijective: bool = False) -> List[List[int]]:
    """Todos los homomorfismos G → H (o isomorfismos) por búsqueda de imágenes"""
    gens = G.generating_set()
    h_orders = H.element_orders()
    candidates = []
    for g in gens:
        order = G.element_order(g)
        if bijective:
            candidates.append([h for h in H.elements() if h_orders[h] == order])
        else:
            candidates.append([h for h in H.elements() if order % h_orders[h] == 0])
    results = []
    for images in itertools.product(*candidates):
        phi = _extend_images(G, H, gens, images)
        if phi is None:
            continue
        if bijective and len(set(phi)) != H.order:
            continue
        results.append(phi)
    return results


def isomorphism_test(G: FiniteGroup, H: FiniteGroup) -> Tuple[bool, str]:
    """
    Decide si G ≅ H

    Returns:
        (resultado, método): 'order', 'element-orders', 'search' o 'invariants-only'
    """
    if G.order != H.order:
        return False, "order"
    if Counter(G.element_orders().tolist()) != Counter(H.element_orders().tolist()):
        return False, "element-orders"
    if G.order > ISOMORPHISM_SEARCH_LIMIT:
        logger.warning("Orden %d > %d: isomorfismo decidido solo por invariantes",
                       G.order, ISOMORPHISM_SEARCH_LIMIT)
        return True, "invariants-only"
    gens = G.generating_set()
    h_orders = H.element_orders()
    candidates = [[h for h in H.elements() if h_orders[h] == G.element_order(g)] for g in gens]
    for images in itertools.product(*candidates):
        phi = _extend_images(G, H, gens, images)
        if phi is not None and len(set(phi)) == H.order:
            return True, "search"
    return False, "search"


def are_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return isomorphism_test(G, H)[0]


@dataclass
class AutomorphismGroup:
    """Aut(G) con producto φ·ψ = primero φ, luego ψ (acción a derecha)"""
    base: FiniteGroup
    group: FiniteGroup
    maps: List[np.ndarray]

    def apply(self, automorphism: int, element: int) -> int:
        return int(self.maps[automorphism][element])

    def index_of(self, images: Sequence[int]) -> int:
        target = np.asarray(images)
        for i, m in enumerate(self.maps):
            if np.array_equal(m, target):
                return i
        raise PreconditionFailed("La aplicación no es un automorfismo")


def automorphism_group(G: FiniteGroup) -> AutomorphismGroup:
    autos = homomorphisms_from_generators(G, G, bijective=True)
    identity = list(range(G.order))
    autos.sort(key=lambda phi: (phi != identity, phi))
    maps = [np.asarray(phi, dtype=np.int64) for phi in autos]
    index = {tuple(m.tolist()): i for i, m in enumerate(maps)}
    n = len(maps)
    mul = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            mul[i, j] = index[tuple(maps[j][maps[i]].tolist())]
    labels = ["id"] + [f"aut{i}" for i in range(1, n)]
    return AutomorphismGroup(base=G, group=FiniteGroup(mul, labels, name=f"Aut({G.name})", check=False), maps=maps)


# ---------------------------------------------------------------------------
# Anillos de grupo
# ---------------------------------------------------------------------------

class GroupRingElement:
    """Suma formal finita Σ k_g·g sobre un portador (grupo finito o libre)"""

    __slots__ = ("carrier", "terms")

    def __init__(self, carrier: Any, terms: Optional[Dict[Any, int]] = None):
        self.carrier = carrier
        cleaned = {g: int(k) for g, k in (terms or {}).items() if k != 0}
        self.terms: Tuple[Tuple[Any, int], ...] = tuple(
            sorted(cleaned.items(), key=lambda item: carrier.sort_key(item[0]))
        )

    @classmethod
    def zero(cls, carrier: Any) -> "GroupRingElement":
        return cls(carrier)

    @classmethod
    def one(cls, carrier: Any) -> "GroupRingElement":
        return cls(carrier, {carrier.identity: 1})

    @classmethod
    def of(cls, carrier: Any, g: Any, coefficient: int = 1) -> "GroupRingElement":
        return cls(carrier, {g: coefficient})

    def as_dict(self) -> Dict[Any, int]:
        return dict(self.terms)

    def coefficient(self, g: Any) -> int:
        return self.as_dict().get(g, 0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: "GroupRingElement"):
        if not isinstance(other, GroupRingElement):
            raise TypeError(f"Operando no es un elemento de anillo de grupo: {other!r}")
        if other.carrier is not self.carrier:
            raise TypeError("Aritmética entre portadores distintos")

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        result = self.as_dict()
        for g, k in other.terms:
            result[g] = result.get(g, 0) + k
        return GroupRingElement(self.carrier, result)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.carrier, {g: -k for g, k in self.terms})

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other: Any) -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement(self.carrier, {g: k * other for g, k in self.terms})
        self._check(other)
        op = self.carrier.op
        result: Dict[Any, int] = {}
        for g, k in self.terms:
            for h, l in other.terms:
                gh = op(g, h)
                result[gh] = result.get(gh, 0) + k * l
        return GroupRingElement(self.carrier, result)

    def __rmul__(self, other: Any) -> "GroupRingElement":
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def right_act(self, g: Any) -> "GroupRingElement":
        """Multiplicación a derecha por un elemento del grupo"""
        op = self.carrier.op
        return GroupRingElement(self.carrier, {op(h, g): k for h, k in self.terms})

    def left_act(self, g: Any) -> "GroupRingElement":
        op = self.carrier.op
        return GroupRingElement(self.carrier, {op(g, h): k for h, k in self.terms})

    def augmentation(self) -> int:
        return sum(k for _, k in self.terms)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, int):
            return self == GroupRingElement.one(self.carrier) * other
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.carrier is other.carrier and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"GroupRingElement({format_group_ring(self)})"


def format_group_ring(element: GroupRingElement) -> str:
    """Literal ASCII del anillo de grupo, p.ej. '1 + x - x^2'"""
    if element.is_zero:
        return "0"
    parts = []
    for g, k in element.terms:
        label = element.carrier.label(g)
        magnitude = abs(k)
        if label == "1":
            body = str(magnitude)
        elif magnitude == 1:
            body = label
        else:
            body = f"{magnitude}*{label}"
        if not parts:
            parts.append(body if k > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if k > 0 else f"- {body}")
    return " ".join(parts)


def group_ring_op(a: GroupRingElement, b: GroupRingElement, kind: str, G: Any) -> GroupRingElement:
    """
    Suma o producto en Z[G]

    Args:
        a, b: Elementos sobre el portador G
        kind: 'add' o 'mul'
    """
    for element in (a, b):
        if element.carrier is not G:
            raise TypeError("El elemento no pertenece al anillo de grupo indicado")
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    raise PreconditionFailed(f"Operación desconocida: {kind}")


# ---------------------------------------------------------------------------
# Matrices sobre Z[G]
# ---------------------------------------------------------------------------

GroupRingMatrix = List[List[GroupRingElement]]


def apply_matrix(vector: Sequence[GroupRingElement], m: GroupRingMatrix) -> List[GroupRingElement]:
    """
    Aplica m a un vector fila de coeficientes a derecha: (v ⋆ m)_j = Σ_i m_ij·v_i

    Es la convención de módulos a derecha: el coeficiente de cada
    generador del dominio multiplica a la derecha su imagen.
    """
    if not m:
        return []
    carrier = m[0][0].carrier if m[0] else None
    cols = len(m[0])
    result = [GroupRingElement.zero(carrier) for _ in range(cols)]
    for i, v in enumerate(vector):
        if v.is_zero:
            continue
        for j in range(cols):
            result[j] = result[j] + m[i][j] * v
    return result


def compose_matrices(first: GroupRingMatrix, second: GroupRingMatrix) -> GroupRingMatrix:
    """Matriz de 'first seguido de second' en la convención de apply_matrix"""
    return [apply_matrix(row, second) for row in first]


def regular_representation(m: GroupRingMatrix, G: FiniteGroup) -> np.ndarray:
    """
    Expande una matriz k×l sobre Z[G] a una matriz entera (k|G|)×(l|G|)

    La fila (i,g) y la columna (j,h) guardan el coeficiente de h en m_ij·g.
    """
    k = len(m)
    l = len(m[0]) if k else 0
    n = G.order
    E = np.zeros((k * n, l * n), dtype=object)
    for i in range(k):
        for j in range(l):
            entry = m[i][j]
            for g in range(n):
                for h, coeff in entry.right_act(g).terms:
                    E[i * n + g, j * n + h] += coeff
    return E


def fold_row(vector: Sequence[int], k: int, G: FiniteGroup) -> List[GroupRingElement]:
    n = G.order
    return [GroupRingElement(G, {g: int(vector[i * n + g]) for g in range(n)}) for i in range(k)]


def _normalize_sign(vector: np.ndarray) -> np.ndarray:
    for value in vector:
        if value != 0:
            return -vector if value < 0 else vector
    return vector


def module_kernel(m: GroupRingMatrix, G: FiniteGroup, rows: Optional[int] = None) -> List[List[GroupRingElement]]:
    """
    Núcleo de m sobre Z[G] vía la representación regular

    Args:
        m: Matriz k×l de elementos de Z[G]
        G: Grupo finito
        rows: k, necesario si m no tiene columnas

    Returns:
        Base entera del núcleo plegada a filas de Z[G]^k
    """
    k = len(m) if rows is None else rows
    n = G.order
    if k == 0:
        return []
    if not m or not m[0]:
        basis = np.eye(k * n, dtype=np.int64).astype(object)
    else:
        basis = left_kernel(regular_representation(m, G))
    return [fold_row(_normalize_sign(basis[r, :]), k, G) for r in range(basis.shape[0])]


def kernel_coinvariants(kernel: List[List[GroupRingElement]], G: FiniteGroup) -> AbelianInvariants:
    """Invariantes de K/K·I(G) para un submódulo K dado por base entera"""
    if not kernel:
        return AbelianInvariants()
    k = len(kernel[0])
    n = G.order

    def flatten(row):
        vector = [0] * (k * n)
        for i, entry in enumerate(row):
            for g, coeff in entry.terms:
                vector[i * n + g] += coeff
        return vector

    K = int_matrix([flatten(row) for row in kernel], k * n)
    augmentation_images = []
    for row in kernel:
        for g in G.generating_set():
            shifted = [entry.right_act(g) - entry for entry in row]
            augmentation_images.append(flatten(shifted))
    I = int_matrix(augmentation_images, k * n)
    return sub_quotient_invariants(K, I)
