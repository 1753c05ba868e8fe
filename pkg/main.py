"""
xkit - Main Application
Interfaz de línea de comandos unificada para todas las herramientas:
grupos, grupoides, módulos cruzados, cálculo de Fox, complejos cruzados,
cubos, grupoides dobles, catálogo y baterías de aceptación.

Códigos de salida: 0 éxito, 1 violación matemática, 2 error de entrada,
3 cota de enumeración alcanzada.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from colorama import Fore, Style, init as colorama_init

# Añadir el directorio al path para importar módulos
sys.path.insert(0, str(Path(__file__).parent))

from core.algebra import abelian_invariants, enumerate_fp_group, format_group_ring, format_word
from core.config_manager import ConfigManager, XkitSettings
from core.crossed_complex import CrossedComplex, homology, validate_complex
from core.crossed_module import FreeCrossedModule, consequences, kernel_and_image, validate
from core.cubes import (CubeCell, CubeComplex, PartialBox, box_chain, chain_collapses, collapse_to_vertex,
                        format_certificate, product_collapse, replay, subdivide)
from core.data_parser import DataParser
from core.double_groupoid import from_crossed_module, law_suite, shell_census
from core.errors import ParseError, PreconditionFailed, XkitError
from core.fox import GroupMap, fox_derivative, fox_jacobian, identities_module, nabla
from core.groupoids import format_path, pushout, vertex_group
from core.linalg import int_matrix, smith_normal_form
from core.tensor import check_homotopy, cylinder, tensor_complex
from modules.acceptance import AcceptanceRunner
from modules.catalogue import Catalogue

logger = logging.getLogger("xkit")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2


class _ColorFormatter(logging.Formatter):
    COLORS = {
        logging.DEBUG: Style.DIM,
        logging.INFO: Fore.CYAN,
        logging.WARNING: Fore.YELLOW,
        logging.ERROR: Fore.RED,
        logging.CRITICAL: Fore.RED + Style.BRIGHT,
    }

    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        return f"{self.COLORS.get(record.levelno, '')}{message}{Style.RESET_ALL}"


def configure_logging(level: str = "WARNING"):
    """Configura el logging de la CLI una sola vez (stderr, con color)"""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_xkit", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_ColorFormatter("%(levelname)s %(name)s: %(message)s"))
    handler._xkit = True
    root.addHandler(handler)
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))


class Reporter:
    """
    Salida de los comandos

    En modo humano imprime líneas con ✅ / ❌ / ⚠️; en modo máquina un
    registro 'clave=valor' por línea con las claves ordenadas.
    """

    def __init__(self, machine: bool = False, stream=None):
        self.machine = machine
        self.stream = stream or sys.stdout

    def _write(self, text: str):
        print(text, file=self.stream)

    def record(self, **fields: Any):
        if self.machine:
            self._write(" ".join(f"{k}={self._value(fields[k])}" for k in sorted(fields)))
        else:
            self._write("  ".join(f"{k}: {v}" for k, v in fields.items()))

    def status(self, passed: bool, label: str, detail: str = "", **fields: Any):
        if self.machine:
            self.record(check=label, passed=passed, **({"detail": detail} if detail else {}), **fields)
            return
        icon = f"{Fore.GREEN}✅" if passed else f"{Fore.RED}❌"
        extra = "  ".join(f"{k}={v}" for k, v in fields.items())
        line = f"{icon} {label}{Style.RESET_ALL}"
        if extra:
            line += f"  {extra}"
        if detail:
            line += f"  ({detail})"
        self._write(line)

    def warning(self, message: str):
        if self.machine:
            self.record(warning=message)
        else:
            self._write(f"{Fore.YELLOW}⚠️  {message}{Style.RESET_ALL}")

    def lines(self, title: str, items: Iterable[str]):
        if self.machine:
            for k, item in enumerate(items):
                self.record(section=title, index=k, value=item)
        else:
            self._write(f"{Style.BRIGHT}{title}{Style.RESET_ALL}")
            for item in items:
                self._write(f"  {item}")

    @staticmethod
    def _value(value: Any) -> str:
        text = str(value)
        return f'"{text}"' if (" " in text or not text) else text


class XkitCLI:
    """Contexto compartido por los comandos: configuración, parser y salida"""

    def __init__(self, settings: XkitSettings, reporter: Reporter):
        self.settings = settings
        self.bound = settings.bound
        self.parser = DataParser(settings.bound)
        self.out = reporter

    def load(self, path: str, expected: Optional[Sequence[type]] = None) -> Any:
        """
        Carga un archivo; los nombres sin extensión se buscan en el catálogo

        Raises:
            ParseError: si el archivo no existe o no es del tipo esperado
        """
        candidate = Path(path)
        if not candidate.exists():
            candidate = Catalogue(bound=self.bound).path(path)
        value = self.parser.parse_file(candidate)
        if expected and not isinstance(value, tuple(expected)):
            raise ParseError(f"{path}: se esperaba {', '.join(t.__name__ for t in expected)}", witness=path)
        return value

    # ------------------------------------------------------------------
    # group
    # ------------------------------------------------------------------

    def cmd_group_enum(self, args) -> int:
        p = self.load(args.presentation)
        enumerated = enumerate_fp_group(p, args.bound or self.bound)
        G = enumerated.group
        self.out.record(group=p.name or "G", order=G.order, abelian=G.is_abelian(),
                        abelianization=str(abelian_invariants(p)))
        if args.elements:
            self.out.lines("elements", G.labels)
        return EXIT_OK

    def cmd_group_snf(self, args) -> int:
        p = self.load(args.presentation)
        rows = [[r.exponent_sum(i) for i in range(p.rank)] for r in p.relators]
        snf = smith_normal_form(int_matrix(rows, p.rank))
        self.out.record(group=p.name or "G", diagonal=",".join(str(d) for d in snf.diagonal) or "-",
                        invariants=str(abelian_invariants(p)))
        return EXIT_OK

    # ------------------------------------------------------------------
    # gpd
    # ------------------------------------------------------------------

    def cmd_gpd_pushout(self, args) -> int:
        value = self.load(args.file)
        if not isinstance(value, tuple):
            raise ParseError(f"{args.file} no describe un pushout (faltan las secciones [W], [U], [V], [i], [j])")
        result = pushout(*value)
        P = result.presentation
        self.out.record(objects=len(P.objects), edges=len(P.edges), relations=len(P.relations))
        if not self.out.machine:
            self.out.lines("pushout", self.parser.format_groupoid(P).splitlines())
        return self._report_vertex_group(P, args.object or P.objects[0])

    def cmd_gpd_vertex_group(self, args) -> int:
        p = self.load(args.file)
        if isinstance(p, tuple):
            p = pushout(*p).presentation
        return self._report_vertex_group(p, args.object or p.objects[0])

    def _report_vertex_group(self, p, obj: str) -> int:
        group = vertex_group(p, obj)
        if not group.relators:
            kind = f"free of rank {group.rank}"
        else:
            kind = f"{group.rank} generators, {len(group.relators)} relators"
        self.out.record(object=obj, vertex_group=kind, abelianization=str(abelian_invariants(group)))
        if not self.out.machine:
            self.out.lines("presentation", self.parser.format_presentation(group).splitlines())
        return EXIT_OK

    # ------------------------------------------------------------------
    # xmod
    # ------------------------------------------------------------------

    def cmd_xmod_validate(self, args) -> int:
        x = self.load(args.xmod)
        report = validate(x)
        self.out.status(report.cm1_ok, "CM1", ", ".join(map(str, report.counterexamples.get("cm1", []))))
        self.out.status(report.cm2_ok, "CM2", ", ".join(map(str, report.counterexamples.get("cm2", []))))
        self.out.status(report.action_ok, "action")
        return EXIT_OK if report.ok else EXIT_FAILURE

    def cmd_xmod_consequences(self, args) -> int:
        x = self.load(args.xmod)
        found = consequences(x)
        for name, passed in found.items():
            self.out.status(passed, name)
        info = kernel_and_image(x)
        self.out.record(kernel=len(info.kernel), image=len(info.image), coker_order=info.coker_order)
        return EXIT_OK if all(found.values()) else EXIT_FAILURE

    def cmd_xmod_show(self, args) -> int:
        x = self.load(args.xmod)
        self.out.record(name=x.name, kind=x.kind, M=f"{x.M.name}({x.M.order})", P=f"{x.P.name}({x.P.order})")
        if not self.out.machine:
            mu = [f"{x.M.label(m)} -> {x.P.label(x.boundary(m))}" for m in x.M.elements()]
            self.out.lines("mu", mu)
            self.out.lines("source", self.parser.format_xmod(x).splitlines())
        return EXIT_OK

    def cmd_xmod_fcm_eq(self, args) -> int:
        p = self.load(args.presentation)
        F = FreeCrossedModule(p)
        e1 = self.parser.parse_fcm(args.left, p)
        e2 = self.parser.parse_fcm(args.right, p)
        equal = F.equal(e1, e2, self.bound)
        self.out.status(equal, "fcm_equal", f"{F.format(e1)} vs {F.format(e2)}")
        return EXIT_OK if equal else EXIT_FAILURE

    # ------------------------------------------------------------------
    # fox
    # ------------------------------------------------------------------

    def cmd_fox_deriv(self, args) -> int:
        p = self.load(args.presentation)
        phi = GroupMap(p.generators) if args.free else GroupMap.for_presentation(p, self.bound)
        word = self.parser.parse_word(args.word, p.generators)
        x = p.generator_index(args.gen)
        self.out.record(word=format_word(word, p.generators), gen=args.gen,
                        derivative=format_group_ring(fox_derivative(word, x, phi)))
        return EXIT_OK

    def cmd_fox_jacobian(self, args) -> int:
        p = self.load(args.presentation)
        jac = fox_jacobian(p, self.bound, GroupMap.for_presentation(p, self.bound))
        self.out.lines(f"jacobian {p.name or ''}".strip(), jac.format())
        return EXIT_OK

    def cmd_fox_identities(self, args) -> int:
        p = self.load(args.presentation)
        module = identities_module(p, self.bound)
        self.out.record(presentation=p.name or "G", rank=module.rank, coinvariants=str(module.coinvariants))
        self.out.lines("generators", module.format())
        return EXIT_OK

    def cmd_fox_nabla(self, args) -> int:
        C = self.load(args.complex, [CrossedComplex])
        chains = nabla(C, self.bound)
        failing = chains.failing_degrees()
        self.out.lines(f"nabla {C.name}", chains.format())
        self.out.status(not failing, "dd=0", ", ".join(map(str, failing)))
        return EXIT_OK if not failing else EXIT_FAILURE

    # ------------------------------------------------------------------
    # crs
    # ------------------------------------------------------------------

    def _report_validation(self, C: CrossedComplex) -> int:
        report = validate_complex(C, self.bound)
        for check, passed in report.checks.items():
            self.out.status(passed, check, "; ".join(report.witnesses.get(check, [])[:3]))
        for note in list(C.notes) + report.warnings:
            self.out.warning(note)
        return EXIT_OK if report.ok else EXIT_FAILURE

    def cmd_crs_validate(self, args) -> int:
        return self._report_validation(self.load(args.complex, [CrossedComplex]))

    def cmd_crs_pi1(self, args) -> int:
        C = self.load(args.complex, [CrossedComplex])
        carrier = C.pi1_carrier(self.bound)
        for obj in C.objects:
            order = len(carrier.hom(obj, obj)) if carrier.finite else "infinite"
            self.out.record(object=obj, order=order)
        return EXIT_OK

    def cmd_crs_homology(self, args) -> int:
        C = self.load(args.complex, [CrossedComplex])
        obj = args.object or C.objects[0]
        degrees = [args.degree] if args.degree else range(1, C.top_degree + 1)
        for n in degrees:
            self.out.record(object=obj, degree=n, homology=str(homology(C, n, obj, self.bound)))
        return EXIT_OK

    def _emit_complex(self, C: CrossedComplex, out: Optional[str]) -> int:
        text = self.parser.format_crossed_complex(C)
        if out:
            Path(out).write_text(text, encoding="utf-8")
            logger.info("Complejo escrito en %s", out)
        ranks = {f"rank{n}": len(C.basis(n)) for n in range(C.top_degree + 1)}
        self.out.record(name=C.name, **ranks)
        for note in C.notes:
            self.out.warning(note)
        return EXIT_OK

    def cmd_crs_tensor(self, args) -> int:
        A = self.load(args.left, [CrossedComplex])
        B = self.load(args.right, [CrossedComplex])
        T = tensor_complex(A, B, args.maxdeg or self.settings.tensor_maxdeg)
        code = self._emit_complex(T, args.out)
        if args.validate:
            code = max(code, self._report_validation(T))
        return code

    def cmd_crs_cylinder(self, args) -> int:
        C = self.load(args.complex, [CrossedComplex])
        return self._emit_complex(cylinder(C, args.maxdeg), args.out)

    def cmd_crs_homotopy(self, args) -> int:
        h = self.load(args.homotopy)
        report = check_homotopy(h, self.bound)
        self.out.status(report.ok, "homotopy", "; ".join(report.witnesses[:3]))
        for warning in report.warnings:
            self.out.warning(warning)
        return EXIT_OK if report.ok else EXIT_FAILURE

    # ------------------------------------------------------------------
    # cube
    # ------------------------------------------------------------------

    def _write_certificate(self, sequence, out: Optional[str]):
        text = format_certificate(sequence)
        if out:
            Path(out).write_text(text, encoding="utf-8")
        elif not self.out.machine:
            self.out.lines("certificate", text.splitlines())

    def cmd_cube_collapse(self, args) -> int:
        vertex = args.to_vertex or "0" * args.n
        if len(vertex) != args.n:
            raise PreconditionFailed(f"El vértice {vertex} no está en I^{args.n}")
        sequence = collapse_to_vertex(args.n, vertex, self.settings.max_cube_dimension)
        replay(CubeComplex.cube(args.n, self.settings.max_cube_dimension), sequence)
        self.out.record(n=args.n, vertex=vertex, steps=len(sequence))
        self._write_certificate(sequence, args.out)
        return EXIT_OK

    def cmd_cube_product_collapse(self, args) -> int:
        B = CubeComplex.generated(self.load(args.big))
        C = CubeComplex.generated(self.load(args.small))
        result = product_collapse(B, C)
        final = replay(result.start, result.sequence)
        self.out.status(final == result.target, "product_collapse", steps=len(result.sequence))
        self._write_certificate(result.sequence, args.out)
        return EXIT_OK if final == result.target else EXIT_FAILURE

    def cmd_cube_boxchain(self, args) -> int:
        cell = CubeCell(args.cell)
        big = PartialBox.from_facets(cell, [CubeCell(s) for s in args.big.split(",")])
        small = PartialBox.from_facets(cell, [CubeCell(s) for s in args.small.split(",")])
        chain = box_chain(big, small)
        self.out.lines("chain", [f"{step.added}: {step.larger} -> {step.smaller}" for step in chain])
        sequence = chain_collapses(chain)
        self.out.record(steps=len(chain), collapses=len(sequence))
        self._write_certificate(sequence, args.out)
        return EXIT_OK

    def cmd_cube_subdivide(self, args) -> int:
        try:
            m = [int(v) for v in args.m.split(",")]
        except ValueError as exc:
            raise ParseError(f"Tipo de subdivisión inválido: {args.m}", witness=args.m) from exc
        s = subdivide(m)
        self.out.record(type="x".join(map(str, m)), parts=len(s.parts), adjacent_pairs=len(s.adjacent_pairs()))
        return EXIT_OK

    def cmd_cube_replay(self, args) -> int:
        cells = self.load(args.cells) if args.cells else None
        B = CubeComplex.generated(cells) if cells else CubeComplex.cube(args.n, self.settings.max_cube_dimension)
        sequence = self.load(args.certificate)
        final = replay(B, sequence)
        self.out.status(True, "replay", steps=len(sequence), remaining=len(final))
        if not self.out.machine:
            self.out.lines("remaining", [str(c) for c in final.sorted_cells()])
        return EXIT_OK

    # ------------------------------------------------------------------
    # dg
    # ------------------------------------------------------------------

    def cmd_dg_laws(self, args) -> int:
        x = self.load(args.xmod)
        s = self.settings
        report = law_suite(from_crossed_module(x), args.max_cases or s.law_max_cases, s.law_seed, s.law_max_shells)
        for law in report.results:
            coverage = "exhaustive" if law.exhaustive else "sampled"
            self.out.status(law.passed, law.name, law.counterexample or "", cases=law.cases, coverage=coverage)
        return EXIT_OK if report.ok else EXIT_FAILURE

    def cmd_dg_hcl(self, args) -> int:
        dg, sh = self.load(args.shell)
        edges = dg.check_shell(sh)
        odd, even = dg.odd_composite(sh), dg.even_composite(sh)
        commutative = dg.hcl_commutative(sh)
        agrees = commutative == dg.c1_commutative(sh)
        self.out.record(edges=len(edges), odd=dg.format_square(odd), even=dg.format_square(even))
        self.out.status(commutative, "hcl")
        self.out.status(agrees, "c1_formula_agrees")
        return EXIT_OK if agrees else EXIT_FAILURE

    def cmd_dg_shells(self, args) -> int:
        dg = from_crossed_module(self.load(args.xmod))
        census = shell_census(dg, args.max_cases or self.settings.law_max_cases, self.settings.law_seed)
        self.out.record(shells=census.total, commutative=census.commutative,
                        coverage="exhaustive" if census.exhaustive else "sampled")
        return EXIT_OK

    # ------------------------------------------------------------------
    # acceptance / catalogue
    # ------------------------------------------------------------------

    def cmd_acceptance(self, args) -> int:
        runner = AcceptanceRunner(Catalogue(bound=self.bound), self.settings, workers=args.workers)
        frame = runner.run(args.suite)
        for row in frame.itertuples(index=False):
            self.out.status(row.passed, f"{row.suite}/{row.criterion}", row.detail if not row.passed else "",
                            cases=row.cases, seconds=row.seconds)
        if args.export:
            runner.export(frame, Path(args.export))
        passed = bool(frame["passed"].all())
        if not self.out.machine:
            self.out.status(passed, f"{int(frame['passed'].sum())}/{len(frame)} criterios")
        return EXIT_OK if passed else EXIT_FAILURE

    def cmd_catalogue_list(self, args) -> int:
        for entry in Catalogue(bound=self.bound).entries(args.kind):
            self.out.record(name=entry.name, kind=entry.kind, path=entry.path.name)
        return EXIT_OK

    def cmd_catalogue_check(self, args) -> int:
        results = Catalogue(bound=self.bound).check()
        for r in results:
            round_trip = "n/a" if r.round_trip is None else r.round_trip
            self.out.status(r.ok, f"{r.kind}/{r.name}", r.detail, round_trip=round_trip)
        return EXIT_OK if all(r.ok for r in results) else EXIT_FAILURE


def build_parser(cli_factory=None) -> argparse.ArgumentParser:
    """Parser de argumentos con un subcomando por verbo"""
    ap = argparse.ArgumentParser(prog="xkit", description="Álgebra homotópica de dimensión superior")
    ap.add_argument("--machine", action="store_true", help="Salida estable clave=valor")
    ap.add_argument("--bound", type=int, default=None, help="Cota de enumeración (prioridad sobre XKIT_BOUND)")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    ap.add_argument("--config", default=None, help="Directorio de configuración")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def verb(group, name: str, handler: str, *arguments):
        p = group.add_parser(name)
        for names, options in arguments:
            p.add_argument(*names, **options)
        p.set_defaults(handler=handler)
        return p

    def family(name: str):
        return sub.add_parser(name).add_subparsers(dest=f"{name}_cmd", required=True)

    file_ = lambda dest: ((dest,), {})

    group = family("group")
    verb(group, "enum", "cmd_group_enum", file_("presentation"),
         (("--elements",), {"action": "store_true"}))
    verb(group, "snf", "cmd_group_snf", file_("presentation"))

    gpd = family("gpd")
    verb(gpd, "pushout", "cmd_gpd_pushout", file_("file"), (("--object",), {"default": None}))
    verb(gpd, "vertex-group", "cmd_gpd_vertex_group", file_("file"), (("--object",), {"default": None}))

    xmod = family("xmod")
    verb(xmod, "validate", "cmd_xmod_validate", file_("xmod"))
    verb(xmod, "consequences", "cmd_xmod_consequences", file_("xmod"))
    verb(xmod, "show", "cmd_xmod_show", file_("xmod"))
    verb(xmod, "fcm-eq", "cmd_xmod_fcm_eq", file_("presentation"), file_("left"), file_("right"))

    fox = family("fox")
    verb(fox, "deriv", "cmd_fox_deriv", file_("presentation"), file_("word"),
         (("--gen",), {"required": True}), (("--free",), {"action": "store_true"}))
    verb(fox, "jacobian", "cmd_fox_jacobian", file_("presentation"))
    verb(fox, "identities", "cmd_fox_identities", file_("presentation"))
    verb(fox, "nabla", "cmd_fox_nabla", file_("complex"))

    crs = family("crs")
    verb(crs, "validate", "cmd_crs_validate", file_("complex"))
    verb(crs, "pi1", "cmd_crs_pi1", file_("complex"))
    verb(crs, "homology", "cmd_crs_homology", file_("complex"),
         (("--degree",), {"type": int, "default": None}), (("--object",), {"default": None}))
    verb(crs, "tensor", "cmd_crs_tensor", file_("left"), file_("right"),
         (("--maxdeg",), {"type": int, "default": None}), (("--out",), {"default": None}),
         (("--validate",), {"action": "store_true"}))
    verb(crs, "cylinder", "cmd_crs_cylinder", file_("complex"),
         (("--maxdeg",), {"type": int, "default": None}), (("--out",), {"default": None}))
    verb(crs, "homotopy", "cmd_crs_homotopy", file_("homotopy"))

    cube = family("cube")
    verb(cube, "collapse", "cmd_cube_collapse", (("--n",), {"type": int, "required": True}),
         (("--to-vertex",), {"default": None}), (("--out",), {"default": None}))
    verb(cube, "product-collapse", "cmd_cube_product_collapse", file_("big"), file_("small"),
         (("--out",), {"default": None}))
    verb(cube, "boxchain", "cmd_cube_boxchain", file_("cell"), file_("big"), file_("small"),
         (("--out",), {"default": None}))
    verb(cube, "subdivide", "cmd_cube_subdivide", (("--m",), {"required": True}))
    verb(cube, "replay", "cmd_cube_replay", file_("certificate"),
         (("--cells",), {"default": None}), (("--n",), {"type": int, "default": 1}))

    dg = family("dg")
    verb(dg, "laws", "cmd_dg_laws", file_("xmod"), (("--max-cases",), {"type": int, "default": None}))
    verb(dg, "hcl", "cmd_dg_hcl", file_("shell"))
    verb(dg, "shells", "cmd_dg_shells", file_("xmod"), (("--max-cases",), {"type": int, "default": None}))

    acc = sub.add_parser("acceptance")
    acc.add_argument("suite", nargs="?", default="all")
    acc.add_argument("--export", default=None, help="Reporte .csv, .json o .xlsx")
    acc.add_argument("--workers", type=int, default=1)
    acc.set_defaults(handler="cmd_acceptance")

    cat = family("catalogue")
    verb(cat, "list", "cmd_catalogue_list", (("--kind",), {"default": None}))
    verb(cat, "check", "cmd_catalogue_check")
    return ap


def run(argv: Optional[List[str]] = None, stream=None) -> int:
    """
    Punto de entrada de la CLI

    Args:
        argv: Argumentos (por defecto sys.argv[1:])
        stream: Destino de la salida (por defecto stdout)

    Returns:
        Código de salida
    """
    colorama_init()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK

    config = ConfigManager(args.config, persist=args.config is not None)
    settings = config.settings()
    if args.bound is not None:
        if args.bound < 1:
            parser.print_usage(sys.stderr)
            return EXIT_INPUT
        settings.bound = args.bound
    level = {0: settings.log_level, 1: "INFO"}.get(args.verbose, "DEBUG")
    configure_logging(level)

    machine = args.machine or settings.output_mode == "machine"
    cli = XkitCLI(settings, Reporter(machine, stream))
    try:
        return getattr(cli, args.handler)(args)
    except XkitError as exc:
        context: Dict[str, Any] = {k: v for k, v in exc.context.items() if v is not None}
        logger.debug("Contexto del error: %s", context)
        if machine:
            cli.out.record(error=type(exc).__name__, message=exc.message, exit=exc.exit_code, **{
                k: v for k, v in context.items() if k in ("witness", "pair", "bound", "step", "line")
            })
        else:
            detail = ", ".join(f"{k}={v}" for k, v in context.items())
            print(f"{Fore.RED}❌ {type(exc).__name__}: {exc.message}{Style.RESET_ALL}"
                  + (f" ({detail})" if detail else ""), file=stream or sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(run())
