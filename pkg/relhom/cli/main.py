"""
Interface en ligne de commande : `python -m relhom <commande>`.

Chaque commande écrit un RunReport JSON sur la sortie standard. Code de
sortie 0 si toutes les vérifications dures passent, 1 sinon, 2 pour une
entrée mal formée.
"""
import argparse
import sys
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..algebra.quiver import Algebra
from ..approximation.approx import SubcatSpec, injectives_subcat, projectives_subcat
from ..balanced.balanced import check_balanced
from ..compare.eta import build_dualizing, check_tensor_ginj, verify_eta_iso
from ..complexes.complex import Complex
from ..core.config import settings
from ..core.exceptions import InputFormatError, RelHomException
from ..core.logger import get_logger
from ..equivalence.functor import FunctorSession, verify_equivalence
from ..gorenstein.profile import GorensteinProfile, build_profile, check_proj_inj_restriction, profile_report
from ..models.schemas import CheckReport, RunReport
from ..services.corpus import CorpusBuilder, build_corpus
from ..services.runner import (
    DemoRunner,
    algebra_check,
    approximation_check,
    complex_check,
    membership_check,
    resolution_check,
)
from ..services.serialization import (
    CorpusLoader,
    complex_to_schema,
    load_algebra,
    load_complex,
    load_module,
    load_subcat,
)
from ..totalization.lifting import verify_totalization
from ..totalization.quasi_bicomplex import build_quasi_bicomplex, totalize

logger = get_logger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class Session:
    """Algèbre, corpus et profils partagés par une invocation"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.algebra: Algebra = load_algebra(args.algebra, args.field)
        self._profile: Optional[GorensteinProfile] = None
        self._loader: Optional[CorpusLoader] = None
        self.builder = CorpusBuilder(self.algebra, args.seed)

    @property
    def profile(self) -> GorensteinProfile:
        if self._profile is None:
            self._profile = build_profile(self.algebra)
        return self._profile

    @property
    def loader(self) -> Optional[CorpusLoader]:
        if self._loader is None and getattr(self.args, "corpus", None):
            self._loader = CorpusLoader(self.algebra).load_directory(self.args.corpus)
        return self._loader

    def subcat(self, spec: str) -> SubcatSpec:
        """Mot-clé (proj, inj, gproj, ginj) ou fichier de sous-catégorie"""
        keywords: Dict[str, Callable[[], SubcatSpec]] = {
            "proj": lambda: projectives_subcat(self.algebra),
            "inj": lambda: injectives_subcat(self.algebra),
            "gproj": lambda: self.profile.gproj,
            "ginj": lambda: self.profile.ginj,
        }
        if spec in keywords:
            return keywords[spec]()
        return load_subcat(self.algebra, spec)

    def modules(self):
        files = getattr(self.args, "module", None) or []
        modules = [load_module(self.algebra, f) for f in files]
        if self.loader is not None:
            modules += self.loader.modules
        return modules or self.builder.probes()

    def complexes(self, x: Optional[SubcatSpec] = None) -> List[Complex]:
        files = getattr(self.args, "complex", None) or []
        complexes = [load_complex(self.algebra, f) for f in files]
        if self.loader is not None:
            complexes += self.loader.complexes
        if complexes or x is None:
            return complexes
        return build_corpus(self.algebra, x, self.args.seed, self.args.count).complexes


# Commandes

def cmd_algebra_check(s: Session) -> List[CheckReport]:
    return [algebra_check(s.algebra)]


def cmd_complex_check(s: Session) -> List[CheckReport]:
    return [complex_check(s.complexes())]


def cmd_approx(s: Session) -> List[CheckReport]:
    return [approximation_check(s.subcat(s.args.subcat), s.modules(), s.args.side)]


def cmd_resolve(s: Session) -> List[CheckReport]:
    return [resolution_check(s.subcat(s.args.subcat), s.modules(), s.args.max_len, co=s.args.co)]


def cmd_balanced_check(s: Session) -> List[CheckReport]:
    x, y = s.subcat(s.args.x), s.subcat(s.args.y)
    return [check_balanced(x, y, s.modules(), s.complexes(), max_len=s.args.max_len)]


def cmd_totalize(s: Session) -> List[CheckReport]:
    x = s.subcat(s.args.x)
    y = s.subcat(s.args.y) if s.args.y else None
    reports = []
    for c in s.complexes(x):
        maps = tuple(s.builder.cocycle_maps(x, c))
        at = totalize(build_quasi_bicomplex(x, c, s.args.width))
        report = verify_totalization(x, c, s.args.width, y, maps, at)
        report.total = complex_to_schema(at.total)
        report.epsilon = [[b.tolist() for b in at.epsilon.component(n).blocks] for n in at.total.degrees]
        report.notes.append(c.name)
        reports.append(report)
    return reports


def cmd_equiv_verify(s: Session) -> List[CheckReport]:
    x, y = s.subcat(s.args.x), s.subcat(s.args.y)
    session = FunctorSession(x, y, s.args.width)
    if s.loader is not None:
        x_complexes, maps = s.complexes(), []
    else:
        corpus = build_corpus(s.algebra, x, s.args.seed, s.args.count)
        x_complexes, maps = corpus.complexes, corpus.maps
    y_complexes = s.builder.subcat_complexes(y, s.args.count)
    return [verify_equivalence(session, x_complexes, y_complexes, maps)]


def cmd_gorenstein_profile(s: Session) -> List[CheckReport]:
    return [profile_report(s.profile, s.modules())]


def cmd_gorenstein_check(s: Session) -> List[CheckReport]:
    reports: List[CheckReport] = []
    if getattr(s.args, "module", None) or s.loader is not None:
        reports.append(membership_check(s.modules(), s.args.injective, s.profile.window))
    proj = s.complexes(projectives_subcat(s.algebra))
    inj = s.builder.subcat_complexes(injectives_subcat(s.algebra), s.args.count)
    reports.append(check_proj_inj_restriction(s.profile, proj, inj))
    return reports


def cmd_eta_verify(s: Session) -> List[CheckReport]:
    profile = s.profile
    session = FunctorSession(profile.gproj, profile.ginj, s.args.width)
    dualizing = build_dualizing(s.algebra)
    if s.loader is not None:
        complexes, maps = s.complexes(), []
    else:
        corpus = build_corpus(s.algebra, projectives_subcat(s.algebra), s.args.seed, s.args.count)
        complexes, maps = corpus.complexes, corpus.maps
    return [check_tensor_ginj(profile), verify_eta_iso(session, dualizing, complexes, maps)]


# Analyse des arguments

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=None, help="caractéristique p du corps")
    common.add_argument("--seed", type=int, default=None, help="graine de l'aléa")
    common.add_argument("--max-len", type=int, default=None, help="longueur maximale des résolutions")
    common.add_argument("--width", type=int, default=None, help="largeur des quasi-bicomplexes")
    common.add_argument("--corpus", default=None, help="répertoire de fichiers *.json")
    common.add_argument("--count", type=int, default=3, help="nombre de complexes aléatoires")
    common.add_argument("--json-out", default=None, help="copie du rapport dans un fichier")
    common.add_argument("--timing", action="store_true", help="inclut les durées dans le rapport")
    return common


def _with_algebra(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    parser.add_argument("--algebra", required=True, help="fichier JSON ou nom d'exemple")
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="relhom", description="Algèbre homologique relative sur GF(p)")
    commands = parser.add_subparsers(dest="command", required=True)

    def group(name: str, help_text: str):
        sub = commands.add_parser(name, help=help_text)
        return sub.add_subparsers(dest="action", required=True)

    algebra = group("algebra", "présentation d'algèbre")
    _with_algebra(algebra.add_parser("check", parents=[common])).set_defaults(handler=cmd_algebra_check)

    complex_ = group("complex", "complexes de modules")
    p = _with_algebra(complex_.add_parser("check", parents=[common]))
    p.add_argument("--complex", action="append", help="fichier de complexe (répétable)")
    p.set_defaults(handler=cmd_complex_check)

    p = _with_algebra(commands.add_parser("approx", parents=[common], help="approximations"))
    p.add_argument("--subcat", required=True)
    p.add_argument("--module", action="append")
    p.add_argument("--side", choices=["right", "left"], default="right")
    p.add_argument("--left", action="store_const", dest="side", const="left", help="approximation à gauche")
    p.set_defaults(handler=cmd_approx)

    p = _with_algebra(commands.add_parser("resolve", parents=[common], help="(co)résolutions"))
    p.add_argument("--subcat", required=True)
    p.add_argument("--module", action="append")
    p.add_argument("--co", action="store_true", help="corésolution")
    p.set_defaults(handler=cmd_resolve)

    balanced = group("balanced", "paires équilibrées")
    p = _with_algebra(balanced.add_parser("check", parents=[common]))
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--module", action="append")
    p.add_argument("--complex", action="append")
    p.set_defaults(handler=cmd_balanced_check)

    p = _with_algebra(commands.add_parser("totalize", parents=[common], help="quasi-bicomplexes"))
    p.add_argument("--x", required=True)
    p.add_argument("--y", default=None)
    p.add_argument("--complex", action="append")
    p.set_defaults(handler=cmd_totalize)

    equiv = group("equiv", "foncteur F")
    p = _with_algebra(equiv.add_parser("verify", parents=[common]))
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--complex", action="append")
    p.set_defaults(handler=cmd_equiv_verify)

    gorenstein = group("gorenstein", "profil de Gorenstein")
    p = _with_algebra(gorenstein.add_parser("profile", parents=[common]))
    p.add_argument("--module", action="append")
    p.set_defaults(handler=cmd_gorenstein_profile)
    p = _with_algebra(gorenstein.add_parser("check", parents=[common]))
    p.add_argument("--module", action="append")
    p.add_argument("--complex", action="append")
    p.add_argument("--injective", action="store_true", help="teste l'injectivité de Gorenstein")
    p.set_defaults(handler=cmd_gorenstein_check)

    eta = group("eta", "comparaison η")
    p = _with_algebra(eta.add_parser("verify", parents=[common]))
    p.add_argument("--complex", action="append")
    p.set_defaults(handler=cmd_eta_verify)

    commands.add_parser("demo", parents=[common], help="corpus complet").set_defaults(handler=None)
    return parser


def _apply_overrides(args: argparse.Namespace) -> None:
    """Les options de la ligne de commande priment sur la configuration"""
    if args.field is not None:
        settings.field.p = args.field
    args.field = settings.field.p
    if args.seed is not None:
        settings.corpus.seed = args.seed
    args.seed = settings.corpus.seed
    if args.max_len is not None:
        settings.resolution.max_len = args.max_len
    if args.width is not None:
        settings.resolution.width = args.width
    else:
        args.width = settings.resolution.width


def _emit(report: RunReport, json_out: Optional[str]) -> None:
    text = report.model_dump_json(by_alias=True, indent=2)
    sys.stdout.write(text + "\n")
    if json_out:
        Path(json_out).write_text(text + "\n", encoding="utf-8")


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    _apply_overrides(args)
    report = RunReport(command=argv, seed=args.seed, field=args.field)
    timing: Dict[str, float] = {}
    start_time = datetime.now()
    try:
        if args.handler is None:
            demo = DemoRunner(args.field, args.seed, args.count, args.width, args.max_len)
            labelled: List[Tuple[str, CheckReport]] = demo.run()
            for _, r in labelled:
                report.attach(r)
            timing.update(demo.timing)
        else:
            for r in args.handler(Session(args)):
                report.attach(r)
    except InputFormatError as exc:
        logger.error("Entrée mal formée", error_code=exc.error_code, context=exc.context)
        report.verdict = False
        error = CheckReport(kind="input_error")
        error.add(
            "input",
            "le document d'entrée est conforme au schéma",
            False,
            error=exc.error_code,
            message=exc.message,
            pointer=exc.context.get("pointer", ""),
        )
        report.attach(error)
        _emit(report, args.json_out)
        return EXIT_INPUT
    except RelHomException as exc:
        logger.error("Échec de la commande", error_code=exc.error_code, context=exc.context)
        failure = CheckReport(kind="error")
        failure.add("command", "la commande se termine sans erreur", False, error=exc.error_code, message=exc.message)
        report.attach(failure)
    if args.timing or settings.report.include_timing:
        timing["total"] = round((datetime.now() - start_time).total_seconds(), 3)
        report.timing = timing
    _emit(report, args.json_out)
    return EXIT_OK if report.verdict else EXIT_FAILED


def main() -> None:
    sys.exit(run())
