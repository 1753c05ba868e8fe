"""
Acceptance Module
Ejecuta las baterías de aceptación sobre el catálogo y produce un reporte
tabular (pandas) exportable a CSV, JSON o Excel
"""

import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.algebra import GroupRingElement, abelian_invariants, compose_matrices
from core.config_manager import XkitSettings
from core.crossed_complex import from_presentation, homology, make_example, point, validate_complex
from core.crossed_module import STANDARD_KINDS, FreeCrossedModule, consequences, peiffer_swap, validate
from core.cubes import (CubeCell, CubeComplex, all_partial_boxes, box_chain, closure, collapse_to_vertex,
                        product_collapse, replay, verify_chain)
from core.data_parser import DataParser
from core.double_groupoid import from_crossed_module, law_suite
from core.errors import PreconditionFailed, UnknownSuite, Unbounded, XkitError
from core.fox import (GroupMap, boundary_one, derived_diagram_check, fox_derivative, fox_jacobian,
                      identities_module, words_up_to)
from core.groupoids import pushout, vertex_group
from core.tensor import cylinder, embed_second_factor, symmetry, tensor_complex

from .catalogue import Catalogue

logger = logging.getLogger(__name__)

SUITES = ("pushout", "xmod", "fcm", "fox", "diagram", "dg", "collapse", "tensor", "crs")

REPORT_COLUMNS = ["suite", "criterion", "passed", "cases", "seconds", "detail"]

# Segundos por módulo cruzado para la batería de leyes del grupoide doble
DG_TIME_LIMIT = 60.0

# (B, C) con C ⊆ B, como generadores de cada subcomplejo
PRODUCT_FIXTURES: Tuple[Tuple[Tuple[str, ...], Tuple[str, ...]], ...] = (
    (("*",), ("0",)),
    (("**",), ("*0",)),
    (("*0", "1*"), ("00",)),
    (("**",), ("*0", "*1", "0*", "1*")),
    (("***",), ("**0",)),
)

TENSOR_PAIRS = (
    ("interval", "interval"),
    ("interval", "rp_infinity"),
    ("c3_complex", "interval"),
    ("c3_complex", "rp_infinity"),
    ("rp_infinity", "c3_complex"),
)


@dataclass
class CriterionResult:
    """Una fila del reporte de aceptación"""
    suite: str
    criterion: str
    passed: bool
    cases: int
    seconds: float
    detail: str = ""


Outcome = Tuple[bool, int, str]


class AcceptanceRunner:
    """
    Ejecutor de las baterías de aceptación

    Args:
        catalogue: Catálogo con los ejemplos
        settings: Configuración (cota, límites de las leyes, semilla)
        workers: Hilos para ejecutar baterías independientes
    """

    def __init__(self, catalogue: Catalogue, settings: Optional[XkitSettings] = None, workers: int = 1):
        self.catalogue = catalogue
        self.settings = settings or XkitSettings()
        self.bound = self.settings.bound
        self.workers = max(1, workers)
        self.parser = DataParser(self.bound)
        self._suites: Dict[str, Callable[[], List[CriterionResult]]] = {
            name: getattr(self, f"suite_{name}") for name in SUITES
        }

    # ------------------------------------------------------------------
    # Infraestructura
    # ------------------------------------------------------------------

    def _criterion(self, suite: str, name: str, action: Callable[[], Outcome]) -> CriterionResult:
        """Mide y ejecuta un criterio; los errores de xkit cuentan como fallo"""
        start = time.perf_counter()
        try:
            passed, cases, detail = action()
        except XkitError as exc:
            logger.warning("%s/%s: %s", suite, name, exc)
            passed, cases, detail = False, 0, f"{type(exc).__name__}: {exc}"
        seconds = round(time.perf_counter() - start, 4)
        if not passed:
            logger.info("❌ %s/%s: %s", suite, name, detail)
        return CriterionResult(suite, name, bool(passed), int(cases), seconds, detail)

    def run(self, suite: str = "all") -> pd.DataFrame:
        """
        Ejecuta una batería (o todas) y devuelve el reporte

        Raises:
            UnknownSuite: si el nombre no corresponde a ninguna batería
        """
        if suite == "all":
            names = list(SUITES)
        elif suite in self._suites:
            names = [suite]
        else:
            raise UnknownSuite(f"Batería desconocida: {suite} (opciones: all, {', '.join(SUITES)})",
                               witness=suite)
        if self.workers > 1 and len(names) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                batches = list(pool.map(lambda n: self._suites[n](), names))
        else:
            batches = [self._suites[n]() for n in names]
        rows = [asdict(r) for batch in batches for r in batch]
        frame = pd.DataFrame(rows, columns=REPORT_COLUMNS)
        order = {name: k for k, name in enumerate(SUITES)}
        frame["_order"] = frame["suite"].map(order)
        frame = frame.sort_values(["_order"], kind="stable").drop(columns="_order").reset_index(drop=True)
        logger.info("Aceptación %s: %d/%d criterios", suite, int(frame["passed"].sum()), len(frame))
        return frame

    @staticmethod
    def export(frame: pd.DataFrame, path: Path) -> Path:
        """
        Exporta el reporte según la extensión (.csv, .json, .xlsx)

        Raises:
            PreconditionFailed: si la extensión no es soportada
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        if path.suffix == ".csv":
            frame.to_csv(path, index=False)
        elif path.suffix == ".json":
            frame.to_json(path, orient="records", indent=2, force_ascii=False)
        elif path.suffix == ".xlsx":
            frame.to_excel(path, index=False, engine="openpyxl", sheet_name="acceptance")
        else:
            raise PreconditionFailed(f"Formato de exportación no soportado: {path.suffix}", witness=str(path))
        logger.info("Reporte exportado: %s", path)
        return path

    # ------------------------------------------------------------------
    # 1. Pushout del círculo
    # ------------------------------------------------------------------

    def suite_pushout(self) -> List[CriterionResult]:
        def circle() -> Outcome:
            result = pushout(*self.catalogue.load("circle"))
            obj = result.presentation.objects[0]
            group = vertex_group(result.presentation, obj)
            free_rank_one = len(group.generators) == 1 and not group.relators
            return free_rank_one, 1, f"π1({obj}) = {abelian_invariants(group)}"

        def triangle() -> Outcome:
            p = self.catalogue.load("triangle")
            invariants = abelian_invariants(vertex_group(p, p.objects[0]))
            return invariants.is_trivial, 1, str(invariants)

        return [
            self._criterion("pushout", "circle_free_rank_1", circle),
            self._criterion("pushout", "triangle_simply_connected", triangle),
        ]

    # ------------------------------------------------------------------
    # 2. Axiomas de módulos cruzados
    # ------------------------------------------------------------------

    def suite_xmod(self) -> List[CriterionResult]:
        xmods = self.catalogue.crossed_modules()
        rows = []
        for name, x in xmods:
            def check(x=x) -> Outcome:
                report = validate(x)
                found = consequences(x)
                passed = report.ok and found["im_normal"] and found["ker_central"]
                failed = sorted(report.counterexamples) + [k for k, v in found.items() if not v]
                return passed, x.M.order * x.P.order, ", ".join(failed)
            rows.append(self._criterion("xmod", name, check))

        def coverage() -> Outcome:
            kinds = {x.kind for _, x in xmods}
            small = all(x.M.order <= 24 and x.P.order <= 24 for _, x in xmods)
            missing = sorted(set(STANDARD_KINDS) - kinds)
            passed = not missing and len(xmods) >= 10 and small
            return passed, len(xmods), f"faltan: {', '.join(missing)}" if missing else f"{len(xmods)} instancias"

        rows.append(self._criterion("xmod", "catalogue_coverage", coverage))
        return rows

    # ------------------------------------------------------------------
    # 3. Módulo cruzado libre
    # ------------------------------------------------------------------

    def suite_fcm(self) -> List[CriterionResult]:
        p = self.catalogue.load("cyclic2")
        F = FreeCrossedModule(p)

        def peiffer() -> Outcome:
            words = words_up_to(p.rank, 2)
            cases = 0
            for u in words:
                for v in words:
                    left, right = peiffer_swap(0, u, 0, v, p.relators)
                    cases += 1
                    if not F.equal(left, right, self.bound):
                        return False, cases, f"{F.format(left)} != {F.format(right)}"
            return True, cases, ""

        def identity() -> Outcome:
            e = self.parser.parse_fcm("r0 * (r0@x)^-1", p)
            return F.is_identity_among_relations(e, self.bound), 1, F.format(e)

        return [
            self._criterion("fcm", "peiffer_pairs_equal", peiffer),
            self._criterion("fcm", "identity_detected", identity),
        ]

    # ------------------------------------------------------------------
    # 4. Cálculo de Fox
    # ------------------------------------------------------------------

    def suite_fox(self) -> List[CriterionResult]:
        phi = GroupMap(("x", "y"))

        def derivation_law() -> Outcome:
            words = words_up_to(2, 5)
            cases = 0
            for u in words:
                for v in words:
                    if len(u) + len(v) > 5:
                        continue
                    for x in (0, 1):
                        cases += 1
                        left = fox_derivative(u * v, x, phi)
                        right = fox_derivative(u, x, phi).right_act(phi(v)) + fox_derivative(v, x, phi)
                        if left != right:
                            return False, cases, f"{u} {v}"
            return True, cases, ""

        def power_rule() -> Outcome:
            x = phi.letter(0)
            for n in range(1, 6):
                expected = GroupRingElement.zero(phi.carrier)
                for k in range(n):
                    expected = expected + GroupRingElement.of(phi.carrier, x ** k)
                if fox_derivative(x ** n, 0, phi) != expected:
                    return False, n, f"n = {n}"
            return True, 5, ""

        def composite_zero() -> Outcome:
            skipped = []
            presentations = self.catalogue.presentations()
            for name, p in presentations:
                try:
                    jac = fox_jacobian(p, self.bound, GroupMap.for_presentation(p, self.bound))
                except Unbounded:
                    skipped.append(name)
                    continue
                if jac.matrix and p.rank:
                    product = compose_matrices(jac.matrix, boundary_one(jac.phi))
                    if not all(entry.is_zero for row in product for entry in row):
                        return False, len(presentations), name
            detail = f"omitidos: {', '.join(skipped)}" if skipped else ""
            return True, len(presentations), detail

        rows = [
            self._criterion("fox", "derivation_law", derivation_law),
            self._criterion("fox", "power_rule", power_rule),
            self._criterion("fox", "d1_d2_zero", composite_zero),
        ]
        for n in range(2, 6):
            def rank(n=n) -> Outcome:
                module = identities_module(self.catalogue.load(f"cyclic{n}"), self.bound)
                return module.rank == n - 1, 1, f"rango {module.rank}"
            rows.append(self._criterion("fox", f"identities_rank_c{n}", rank))
        return rows

    # ------------------------------------------------------------------
    # 5. Diagrama derivado
    # ------------------------------------------------------------------

    def suite_diagram(self) -> List[CriterionResult]:
        rows = []
        for name in ("cyclic2", "cyclic3"):
            def check(name=name) -> Outcome:
                report = derived_diagram_check(self.catalogue.load(name), self.bound)
                return report.ok, report.cases, "; ".join(report.witnesses)
            rows.append(self._criterion("diagram", name, check))
        return rows

    # ------------------------------------------------------------------
    # 6. Leyes del grupoide doble
    # ------------------------------------------------------------------

    def suite_dg(self) -> List[CriterionResult]:
        """Las leyes deben recorrerse exhaustivamente; un resultado por muestreo cuenta como fallo"""
        rows = []
        s = self.settings
        for name in ("c2c2", "a3s3"):
            start = time.perf_counter()
            try:
                dg = from_crossed_module(self.catalogue.load(name))
                report = law_suite(dg, s.law_max_cases, s.law_seed, s.law_max_shells)
            except XkitError as exc:
                rows.append(CriterionResult("dg", name, False, 0, 0.0, str(exc)))
                continue
            seconds = round(time.perf_counter() - start, 4)
            for law in report.results:
                if not law.passed:
                    detail = law.counterexample or ""
                elif not law.exhaustive:
                    detail = "muestreo: se exige recorrido exhaustivo"
                else:
                    detail = "exhaustivo"
                rows.append(CriterionResult("dg", f"{name}:{law.name}", law.passed and law.exhaustive,
                                            law.cases, seconds, detail))
            rows.append(CriterionResult("dg", f"{name}:time", seconds < DG_TIME_LIMIT, len(report.results),
                                        seconds, f"límite {DG_TIME_LIMIT:g} s"))
        return rows

    # ------------------------------------------------------------------
    # 7. Colapsos
    # ------------------------------------------------------------------

    def suite_collapse(self) -> List[CriterionResult]:
        rows = []
        for n in range(1, 5):
            def to_vertex(n=n) -> Outcome:
                v = "0" * n
                sequence = collapse_to_vertex(n, v, self.settings.max_cube_dimension)
                final = replay(CubeComplex.cube(n, self.settings.max_cube_dimension), sequence)
                passed = len(sequence) == (3 ** n - 1) // 2 and final.cells == {CubeCell(v)}
                return passed, len(sequence), f"{len(sequence)} pasos"
            rows.append(self._criterion("collapse", f"to_vertex_n{n}", to_vertex))

        def products() -> Outcome:
            for B_gens, C_gens in PRODUCT_FIXTURES:
                B = CubeComplex.generated([CubeCell(s) for s in B_gens])
                C = CubeComplex(B.n, closure(CubeCell(s) for s in C_gens))
                result = product_collapse(B, C)
                if replay(result.start, result.sequence) != result.target:
                    return False, len(PRODUCT_FIXTURES), f"{B_gens} / {C_gens}"
            return True, len(PRODUCT_FIXTURES), ""

        def chains() -> Outcome:
            boxes = {}
            for box in all_partial_boxes(CubeCell("***")):
                boxes.setdefault(box.facets, box)
            cases = 0
            for big in boxes.values():
                for small in boxes.values():
                    if not small.facets <= big.facets:
                        continue
                    cases += 1
                    chain = box_chain(big, small)
                    if not verify_chain(big, small, chain):
                        return False, cases, f"{big} -> {small}"
            return True, cases, f"{len(boxes)} cajas"

        rows.append(self._criterion("collapse", "product_collapse", products))
        rows.append(self._criterion("collapse", "box_chains", chains))
        return rows

    # ------------------------------------------------------------------
    # 8. Producto tensorial
    # ------------------------------------------------------------------

    def suite_tensor(self) -> List[CriterionResult]:
        rows = []
        maxdeg = self.settings.tensor_maxdeg
        load = self.catalogue.load
        for left, right in TENSOR_PAIRS:
            label = f"{left}(x){right}"

            def delta_delta(left=left, right=right) -> Outcome:
                T = tensor_complex(load(left), load(right), maxdeg)
                report = validate_complex(T, self.bound)
                size = sum(len(T.basis(k)) for k in range(2, maxdeg + 1))
                return report.checks.get("delta_delta", True), size, "; ".join(report.warnings)

            def swap(left=left, right=right) -> Outcome:
                T = tensor_complex(load(left), load(right), maxdeg)
                S = tensor_complex(load(right), load(left), maxdeg)
                there, back = symmetry(T, S), symmetry(S, T)
                report = there.check(self.bound)
                if not report.ok:
                    return False, 0, "; ".join(report.witnesses)
                round_trip = there.then(back)
                cases = 0
                for name, image in round_trip.images.items():
                    degree = T.degree_of(name)
                    cases += 1
                    if T.equal(image, T.generator(name), degree, self.bound) is False:
                        return False, cases, name
                identity_objects = all(round_trip.object_map[o] == o for o in T.objects)
                return identity_objects, cases, ""

            def embedding(left=left, right=right) -> Outcome:
                A = load(left)
                T = tensor_complex(A, load(right), maxdeg)
                e = embed_second_factor(A.objects[0], T)
                objects = list(e.object_map.values())
                images = [repr(v) for v in e.images.values()]
                injective = len(set(objects)) == len(objects) and len(set(images)) == len(images)
                return injective and e.check(self.bound).ok, len(images), ""

            rows.append(self._criterion("tensor", f"{label}:delta_delta", delta_delta))
            rows.append(self._criterion("tensor", f"{label}:symmetry", swap))
            rows.append(self._criterion("tensor", f"{label}:embed_second", embedding))

        def cylinder_of_point() -> Outcome:
            cyl = cylinder(point())
            higher = sum(len(cyl.basis(k)) for k in range(2, cyl.top_degree + 1))
            passed = len(cyl.objects) == 2 and len(cyl.c1.edges) == 1 and higher == 0
            return passed, 1, f"{len(cyl.objects)} objetos, {len(cyl.c1.edges)} aristas"

        rows.append(self._criterion("tensor", "cylinder_point_is_interval", cylinder_of_point))
        return rows

    # ------------------------------------------------------------------
    # 9. Complejos cruzados
    # ------------------------------------------------------------------

    def suite_crs(self) -> List[CriterionResult]:
        load = self.catalogue.load
        bound = self.bound

        def validates(build: Callable[[], object]) -> Callable[[], Outcome]:
            def action() -> Outcome:
                C = build()
                report = validate_complex(C, bound)
                failed = [k for k, v in report.checks.items() if not v]
                return report.ok, len(report.checks), ", ".join(failed)
            return action

        examples: Sequence[Tuple[str, Callable[[], object]]] = (
            ("CGn_c6_3", lambda: make_example("CGn", bound, group=load("cyclic6"), n=3)),
            ("CG1Mn_c2_2", lambda: make_example("CG1Mn", bound, group=load("cyclic2"), n=2)),
            ("CG1Mn_c3_3", lambda: make_example("CG1Mn", bound, group=load("cyclic3"), n=3)),
            ("from_presentation_c3", lambda: from_presentation(load("cyclic3"))),
            ("tensor_c3_interval", lambda: tensor_complex(load("c3_complex"), load("interval"),
                                                          self.settings.tensor_maxdeg)),
        )
        rows = [self._criterion("crs", f"validate_{name}", validates(build)) for name, build in examples]
        for name, _ in self.catalogue.complexes():
            rows.append(self._criterion("crs", f"validate_{name}", validates(lambda name=name: load(name))))

        def homology_c6() -> Outcome:
            C = make_example("CGn", bound, group=load("cyclic6"), n=3)
            groups = {n: homology(C, n, "o", bound) for n in (2, 3, 4)}
            passed = str(groups[3]) == "C_6" and groups[2].is_trivial and groups[4].is_trivial
            return passed, 3, ", ".join(f"H{n} = {g}" for n, g in groups.items())

        def pi1_c3() -> Outcome:
            C = from_presentation(load("cyclic3"))
            order = C.pi1_carrier(bound).group_of("o").order
            return order == 3, order, f"|π1| = {order}"

        rows.append(self._criterion("crs", "homology_CGn_c6_3", homology_c6))
        rows.append(self._criterion("crs", "pi1_from_presentation_c3", pi1_c3))
        return rows
