"""
Linalg Module
Álgebra lineal entera exacta: forma normal de Smith, núcleos
y cocientes de retículos. Las matrices son arreglos numpy de
dtype=object para conservar enteros de Python sin desbordamiento.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from .errors import PreconditionFailed


def int_matrix(rows: Sequence[Sequence[int]], num_cols: Optional[int] = None) -> np.ndarray:
    """
    Construye una matriz entera exacta

    Args:
        rows: Filas de enteros
        num_cols: Número de columnas (obligatorio si no hay filas)

    Returns:
        Arreglo numpy 2D de dtype=object
    """
    rows = [list(r) for r in rows]
    if num_cols is None:
        num_cols = len(rows[0]) if rows else 0
    matrix = np.zeros((len(rows), num_cols), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != num_cols:
            raise PreconditionFailed(f"Fila {i} con {len(row)} entradas, se esperaban {num_cols}")
        for j, value in enumerate(row):
            matrix[i, j] = int(value)
    return matrix


def identity_matrix(n: int) -> np.ndarray:
    matrix = np.zeros((n, n), dtype=object)
    for i in range(n):
        matrix[i, i] = 1
    return matrix


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Retorna (x, y, g) con x*a + y*b == g >= 0"""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def determinant(matrix: np.ndarray) -> int:
    """Determinante exacto por eliminación fraccionaria de Bareiss"""
    n = matrix.shape[0]
    if n == 0:
        return 1
    work = [[int(matrix[i, j]) for j in range(n)] for i in range(n)]
    sign, previous = 1, 1
    for k in range(n - 1):
        if work[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if work[i][k] != 0), None)
            if swap is None:
                return 0
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                work[i][j] = (work[i][j] * work[k][k] - work[i][k] * work[k][j]) // previous
        previous = work[k][k]
    return sign * work[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """Resultado U·m·V = D con D diagonal y d1 | d2 | ..."""
    D: np.ndarray
    U: np.ndarray
    V: np.ndarray
    rank: int

    @property
    def diagonal(self) -> List[int]:
        size = min(self.D.shape) if self.D.size else 0
        return [int(self.D[i, i]) for i in range(size)]

    @property
    def nonzero_diagonal(self) -> List[int]:
        return self.diagonal[:self.rank]


def smith_normal_form(m: np.ndarray) -> SmithForm:
    """
    Forma normal de Smith con matrices de paso unimodulares

    Args:
        m: Matriz entera (numpy, dtype=object o int)

    Returns:
        SmithForm con U·m·V = D
    """
    D = np.array(m, dtype=object).copy()
    if D.ndim != 2:
        raise PreconditionFailed("Se esperaba una matriz 2D")
    rows, cols = D.shape
    U = identity_matrix(rows)
    V = identity_matrix(cols)

    def swap_rows(i, j):
        if i != j:
            D[[i, j], :] = D[[j, i], :]
            U[[i, j], :] = U[[j, i], :]

    def swap_cols(i, j):
        if i != j:
            D[:, [i, j]] = D[:, [j, i]]
            V[:, [i, j]] = V[:, [j, i]]

    k = 0
    while k < min(rows, cols):
        block = [(abs(D[i, j]), i, j) for i in range(k, rows) for j in range(k, cols) if D[i, j] != 0]
        if not block:
            break
        _, pi, pj = min(block)
        swap_rows(k, pi)
        swap_cols(k, pj)

        while True:
            dirty = False
            for i in range(k + 1, rows):
                if D[i, k] != 0:
                    q = D[i, k] // D[k, k]
                    D[i, :] = D[i, :] - q * D[k, :]
                    U[i, :] = U[i, :] - q * U[k, :]
                    if D[i, k] != 0:
                        dirty = True
            for j in range(k + 1, cols):
                if D[k, j] != 0:
                    q = D[k, j] // D[k, k]
                    D[:, j] = D[:, j] - q * D[:, k]
                    V[:, j] = V[:, j] - q * V[:, k]
                    if D[k, j] != 0:
                        dirty = True
            if dirty:
                # residuo menor que el pivote: nuevo pivote en la cruz
                cross = [(abs(D[i, k]), i, k) for i in range(k, rows) if D[i, k] != 0]
                cross += [(abs(D[k, j]), k, j) for j in range(k, cols) if D[k, j] != 0]
                _, pi, pj = min(cross)
                swap_rows(k, pi)
                swap_cols(k, pj)
                continue

            offender = next(
                ((i, j) for i in range(k + 1, rows) for j in range(k + 1, cols)
                 if D[i, j] % D[k, k] != 0),
                None,
            )
            if offender is None:
                break
            i, _ = offender
            D[k, :] = D[k, :] + D[i, :]
            U[k, :] = U[k, :] + U[i, :]

        if D[k, k] < 0:
            D[k, :] = -D[k, :]
            U[k, :] = -U[k, :]
        k += 1

    return SmithForm(D=D, U=U, V=V, rank=k)


def integer_rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return smith_normal_form(m).rank


def left_kernel(m: np.ndarray) -> np.ndarray:
    """Base entera de {x : x·m = 0} como filas"""
    rows = m.shape[0]
    if m.shape[1] == 0:
        return identity_matrix(rows)
    snf = smith_normal_form(m)
    return snf.U[snf.rank:, :].copy()


def right_kernel(m: np.ndarray) -> np.ndarray:
    """Base entera de {x : m·x = 0} como columnas"""
    cols = m.shape[1]
    if m.shape[0] == 0:
        return identity_matrix(cols)
    snf = smith_normal_form(m)
    return snf.V[:, snf.rank:].copy()


def express_in_basis(basis: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """
    Coordenadas enteras de cada fila de vectors en la base (filas de basis)

    Raises:
        PreconditionFailed: si algún vector no está en el retículo
    """
    count, n = vectors.shape
    a = basis.shape[0]
    coords = np.zeros((count, a), dtype=object)
    if count == 0:
        return coords
    if a == 0:
        if any(v != 0 for v in vectors.flat):
            raise PreconditionFailed("Vector fuera del retículo vacío")
        return coords
    snf = smith_normal_form(basis)
    diagonal = snf.diagonal
    for row in range(count):
        z = vectors[row, :].dot(snf.V) if n else np.zeros(0, dtype=object)
        y = np.zeros(a, dtype=object)
        for j in range(n):
            value = z[j]
            if j < snf.rank:
                if value % diagonal[j] != 0:
                    raise PreconditionFailed("Vector fuera del retículo")
                y[j] = value // diagonal[j]
            elif value != 0:
                raise PreconditionFailed("Vector fuera del retículo")
        coords[row, :] = y.dot(snf.U)
    return coords


@dataclass(frozen=True)
class AbelianInvariants:
    """Grupo abeliano finitamente generado Z^r + C_d1 + ... con d1 | d2 | ..."""
    free_rank: int = 0
    torsion: Tuple[int, ...] = field(default_factory=tuple)

    @classmethod
    def from_diagonal(cls, diagonal: Sequence[int], ambient: int) -> "AbelianInvariants":
        nonzero = [abs(int(d)) for d in diagonal if d != 0]
        torsion = tuple(sorted(d for d in nonzero if d > 1))
        return cls(free_rank=ambient - len(nonzero), torsion=torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> Optional[int]:
        """Orden del grupo o None si es infinito"""
        if self.free_rank:
            return None
        result = 1
        for d in self.torsion:
            result *= d
        return result

    def elementary_divisors(self) -> List[int]:
        divisors = []
        for d in self.torsion:
            for p, e in factorint(d).items():
                divisors.append(p ** e)
        return sorted(divisors)

    def __str__(self):
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"C_{d}" for d in self.torsion)
        return " + ".join(parts)

    @classmethod
    def from_string(cls, text: str) -> "AbelianInvariants":
        text = text.strip()
        if text == "0":
            return cls()
        rank, torsion = 0, []
        for part in text.split("+"):
            part = part.strip()
            if part == "Z":
                rank += 1
            elif part.startswith("Z^"):
                rank += int(part[2:])
            elif part.startswith("C_"):
                torsion.append(int(part[2:]))
            else:
                raise PreconditionFailed(f"Invariante no reconocido: {part}")
        return cls(free_rank=rank, torsion=tuple(sorted(torsion)))


def quotient_invariants(relations: np.ndarray, ambient: int) -> AbelianInvariants:
    """Invariantes de Z^ambient / span(filas de relations)"""
    if relations.shape[0] == 0 or ambient == 0:
        return AbelianInvariants(free_rank=ambient)
    snf = smith_normal_form(relations)
    return AbelianInvariants.from_diagonal(snf.nonzero_diagonal, ambient)


def sub_quotient_invariants(kernel_basis: np.ndarray, image: np.ndarray) -> AbelianInvariants:
    """
    Invariantes de span(K) / span(I) con span(I) contenido en span(K)

    Args:
        kernel_basis: Base (filas linealmente independientes) del retículo K
        image: Generadores (filas) del subretículo I
    """
    a = kernel_basis.shape[0]
    if a == 0:
        return AbelianInvariants()
    coords = express_in_basis(kernel_basis, image)
    return quotient_invariants(coords, a)


def row_space_basis(m: np.ndarray) -> np.ndarray:
    """Base entera (filas) del retículo generado por las filas de m"""
    if m.shape[0] == 0:
        return np.zeros((0, m.shape[1]), dtype=object)
    snf = smith_normal_form(m.T)
    # columnas de m.T = filas de m; V^T * m = (D^T) U^-T, el span se conserva
    hermite = np.array(snf.V.T.dot(m), dtype=object)
    nonzero = [i for i in range(hermite.shape[0]) if any(v != 0 for v in hermite[i, :])]
    return hermite[nonzero, :].copy()
