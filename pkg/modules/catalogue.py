"""
Catalogue Module
Ejemplos con nombre distribuidos como archivos de texto en catalogue/.
Cada entrada debe pasar el validador de su módulo y sobrevivir a un ciclo
parseo -> serialización -> parseo.
"""

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.config_manager import DEFAULT_BOUND
from core.crossed_complex import CrossedComplex, validate_complex
from core.crossed_module import CrossedModule, validate
from core.cubes import CubeComplex
from core.data_parser import FILE_KINDS, DataParser
from core.errors import ObjectNotFound, XkitError
from core.groupoids import pushout, vertex_group
from core.tensor import check_homotopy

logger = logging.getLogger(__name__)

CATALOGUE_DIR = Path(__file__).parent.parent / "catalogue"


@dataclass(frozen=True)
class CatalogueEntry:
    """Archivo del catálogo"""
    name: str
    kind: str
    path: Path


@dataclass
class CatalogueCheck:
    """Resultado de validar una entrada"""
    name: str
    kind: str
    valid: bool
    round_trip: Optional[bool]
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.valid and self.round_trip is not False


class Catalogue:
    """
    Índice de los ejemplos del catálogo

    Args:
        root: Directorio con los archivos (por defecto catalogue/)
        bound: Cota de enumeración usada por los validadores
    """

    def __init__(self, root: Optional[Path] = None, bound: int = DEFAULT_BOUND):
        self.root = Path(root) if root is not None else CATALOGUE_DIR
        self.bound = bound
        self.parser = DataParser(bound)
        self._cache: Dict[str, Any] = {}
        self._entries: Dict[str, CatalogueEntry] = {}
        for path in sorted(self.root.glob("*")):
            kind = FILE_KINDS.get(path.suffix)
            if kind is None or not path.is_file():
                continue
            if path.stem in self._entries:
                logger.warning("Entrada duplicada en el catálogo: %s", path.stem)
                continue
            self._entries[path.stem] = CatalogueEntry(path.stem, kind, path)
        logger.debug("Catálogo %s: %d entradas", self.root, len(self._entries))

    def entries(self, kind: Optional[str] = None) -> List[CatalogueEntry]:
        return [e for e in self._entries.values() if kind is None or e.kind == kind]

    def entry(self, name: str) -> CatalogueEntry:
        """
        Raises:
            ObjectNotFound: si el nombre no está en el catálogo
        """
        key = Path(name).stem
        if key not in self._entries:
            raise ObjectNotFound(f"'{name}' no está en el catálogo", witness=name)
        return self._entries[key]

    def path(self, name: str) -> Path:
        return self.entry(name).path

    def load(self, name: str) -> Any:
        entry = self.entry(name)
        if entry.name not in self._cache:
            self._cache[entry.name] = self.parser.parse_file(entry.path)
        return self._cache[entry.name]

    def crossed_modules(self) -> List[Tuple[str, CrossedModule]]:
        return [(e.name, self.load(e.name)) for e in self.entries("xmod")]

    def presentations(self) -> List[Tuple[str, Any]]:
        return [(e.name, self.load(e.name)) for e in self.entries("presentation")]

    def complexes(self) -> List[Tuple[str, CrossedComplex]]:
        return [(e.name, self.load(e.name)) for e in self.entries("crs")]

    # ------------------------------------------------------------------
    # Verificación
    # ------------------------------------------------------------------

    def _serializer(self, kind: str, value: Any) -> Optional[Callable[[Any], str]]:
        parser = self.parser
        if kind == "presentation":
            return parser.format_presentation
        if kind == "groupoid" and not isinstance(value, tuple):
            return parser.format_groupoid
        if kind == "xmod":
            return parser.format_xmod
        if kind == "crs":
            return parser.format_crossed_complex
        if kind == "cells":
            return lambda cells: "".join(f"{c}\n" for c in cells)
        return None

    def _reparse(self, kind: str, text: str) -> Any:
        parser = self.parser
        return {
            "presentation": parser.parse_presentation,
            "groupoid": parser.parse_groupoid,
            "xmod": parser.parse_xmod,
            "crs": parser.parse_crossed_complex,
            "cells": parser.parse_cells,
        }[kind](text)

    def _validate(self, entry: CatalogueEntry, value: Any) -> Tuple[bool, str]:
        if entry.kind == "xmod":
            report = validate(value)
            return report.ok, ", ".join(sorted(report.counterexamples))
        if entry.kind == "crs":
            report = validate_complex(value, self.bound)
            failed = [name for name, passed in report.checks.items() if not passed]
            return report.ok, "; ".join(failed + report.warnings)
        if entry.kind == "groupoid" and isinstance(value, tuple):
            result = pushout(*value)
            obj = result.presentation.objects[0]
            group = vertex_group(result.presentation, obj)
            return True, f"π1 en {obj}: {len(group.generators)} generadores, {len(group.relators)} relatores"
        if entry.kind == "shell":
            dg, sh = value
            dg.check_shell(sh)
            return True, "conmutativo" if dg.hcl_commutative(sh) else "no conmutativo"
        if entry.kind == "cells":
            complex_ = CubeComplex.generated(value)
            return True, f"{len(complex_)} celdas"
        if entry.kind == "homotopy":
            report = check_homotopy(value, self.bound)
            return report.ok, "; ".join(report.witnesses)
        return True, ""

    def check_entry(self, name: str) -> CatalogueCheck:
        """
        Valida una entrada y su ciclo de serialización

        Los errores de entrada se informan en el resultado, no se propagan.
        """
        entry = self.entry(name)
        try:
            value = self.load(entry.name)
            valid, detail = self._validate(entry, value)
            round_trip = None
            serialize = self._serializer(entry.kind, value)
            if serialize is not None:
                text = serialize(value)
                round_trip = serialize(self._reparse(entry.kind, text)) == text
            return CatalogueCheck(entry.name, entry.kind, valid, round_trip, detail)
        except XkitError as exc:
            logger.warning("Entrada %s inválida: %s", entry.name, exc)
            return CatalogueCheck(entry.name, entry.kind, False, None, str(exc))

    def check(self) -> List[CatalogueCheck]:
        return [self.check_entry(e.name) for e in self.entries()]
