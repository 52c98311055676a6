"""
Lecture et écriture des documents JSON (algèbres, modules, complexes,
sous-catégories) et conversion vers les objets du moteur.

Toute erreur de format devient une InputFormatError dont le contexte porte
un pointeur JSON (`pointer`) vers le champ fautif.
"""
import json
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from pydantic import BaseModel, ValidationError

from ..algebra.library import EXAMPLES, get_example
from ..algebra.modules import Module, ModuleMap
from ..algebra.quiver import Algebra, AlgebraPresentation, Arrow, Quiver, Relation, build_algebra
from ..approximation.approx import SubcatSpec
from ..complexes.complex import Complex
from ..core.config import settings
from ..core.exceptions import InputFormatError, RelHomException
from ..core.logger import get_logger
from ..linalg.exactlin import Matrix
from ..models.schemas import (
    AlgebraSchema,
    ArrowSchema,
    ComplexSchema,
    ModuleSchema,
    QuiverSchema,
    RelationSchema,
    RelationTermSchema,
    SubcatSchema,
)

logger = get_logger(__name__)

Document = Union[str, Path, Dict[str, Any]]


def _pointer(loc) -> str:
    return "/" + "/".join(str(part) for part in loc) if loc else ""


def _parse(schema: type, data: Dict[str, Any], base: str = "") -> BaseModel:
    try:
        return schema.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise InputFormatError(
            f"Document {schema.__name__} invalide : {first['msg']}",
            error_code="SCHEMA_VALIDATION",
            context={"pointer": base + _pointer(first["loc"]), "errors": exc.error_count()},
        )


def read_json(source: Document) -> Dict[str, Any]:
    """Charge un fichier JSON (ou renvoie le dictionnaire tel quel)"""
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputFormatError(
            f"Fichier introuvable : {path}",
            error_code="FILE_NOT_FOUND",
            context={"pointer": "", "path": str(path)},
        )
    except json.JSONDecodeError as exc:
        raise InputFormatError(
            f"JSON invalide dans {path} : {exc.msg}",
            error_code="INVALID_JSON",
            context={"pointer": "", "path": str(path), "line": exc.lineno},
        )
    if not isinstance(data, dict):
        raise InputFormatError(
            "Le document doit être un objet JSON",
            error_code="NOT_AN_OBJECT",
            context={"pointer": ""},
        )
    return data


def _domain(builder: Callable[[], Any], pointer: str) -> Any:
    """Convertit une erreur du moteur levée à la construction en erreur de format"""
    try:
        return builder()
    except InputFormatError:
        raise
    except RelHomException as exc:
        raise InputFormatError(
            exc.message,
            error_code=exc.error_code,
            context={**exc.context, "pointer": pointer},
        )


# Algèbres

def algebra_from_schema(schema: AlgebraSchema, p: Optional[int] = None) -> Algebra:
    p = schema.field or p or settings.field.p
    quiver = _domain(
        lambda: Quiver(
            schema.quiver.vertex_count,
            tuple(Arrow(a.source, a.target, a.name) for a in schema.quiver.arrows),
        ),
        "/quiver",
    )
    relations = tuple(
        Relation(tuple((t.coeff, tuple(t.path)) for t in r.terms)) for r in schema.relations
    )
    presentation = AlgebraPresentation(quiver, relations, schema.nilpotency_bound, p, schema.name)
    return _domain(lambda: build_algebra(presentation), "/relations")


def load_algebra(source: Document, p: Optional[int] = None) -> Algebra:
    """Nom d'exemple du registre, fichier JSON ou dictionnaire"""
    if isinstance(source, str) and source in EXAMPLES:
        return get_example(source, p or settings.field.p)
    schema = _parse(AlgebraSchema, read_json(source))
    algebra = algebra_from_schema(schema, p)
    logger.info("Algèbre chargée", algebra=algebra.name, dimension=algebra.dim())
    return algebra


def algebra_to_schema(algebra: Algebra) -> AlgebraSchema:
    pres = algebra.presentation
    return AlgebraSchema(
        name=pres.name,
        field=pres.p,
        quiver=QuiverSchema(
            vertex_count=pres.quiver.vertex_count,
            arrows=[ArrowSchema(source=a.source, target=a.target, name=a.name) for a in pres.quiver.arrows],
        ),
        relations=[
            RelationSchema(terms=[RelationTermSchema(coeff=c, path=list(path)) for c, path in r.terms])
            for r in pres.relations
        ],
        nilpotency_bound=pres.nilpotency_bound,
    )


# Modules et complexes

def module_from_schema(algebra: Algebra, schema: ModuleSchema, pointer: str = "") -> Module:
    def build() -> Module:
        if len(schema.dims) != algebra.vertex_count:
            raise InputFormatError(
                "Vecteur de dimensions de mauvaise longueur",
                error_code="BAD_DIMS",
                context={"pointer": pointer + "/dims", "dims": schema.dims},
            )
        action = {}
        for arrow in algebra.quiver.arrows:
            rows = schema.action.get(arrow.name)
            if rows is None:
                continue
            shape = (schema.dims[arrow.target], schema.dims[arrow.source])
            action[arrow.name] = _matrix(algebra.p, rows, shape, f"{pointer}/action/{arrow.name}")
        return Module(algebra, schema.dims, action, name=schema.name)

    return _domain(build, pointer)


def _matrix(p: int, rows: List[List[int]], shape, pointer: str) -> Matrix:
    flat = [v for row in rows for v in row]
    if len(rows) != shape[0] or len(flat) != shape[0] * shape[1]:
        raise InputFormatError(
            "Matrice de taille incorrecte",
            error_code="MATRIX_SHAPE",
            context={"pointer": pointer, "expected": list(shape)},
        )
    return Matrix(p, flat, shape=shape)


def load_module(algebra: Algebra, source: Document) -> Module:
    return module_from_schema(algebra, _parse(ModuleSchema, read_json(source)))


def module_to_schema(m: Module) -> ModuleSchema:
    return ModuleSchema(
        name=m.name,
        dims=list(m.dims),
        action={name: mat.tolist() for name, mat in m.action.items()},
    )


def complex_from_schema(algebra: Algebra, schema: ComplexSchema, pointer: str = "") -> Complex:
    """
    Les différentielles ne sont pas validées ici : d∘d = 0 et la linéarité
    sont des vérifications de `complex check`, pas des erreurs de format.
    """
    terms = [module_from_schema(algebra, t, f"{pointer}/terms/{k}") for k, t in enumerate(schema.terms)]
    if len(schema.differentials) != max(len(terms) - 1, 0):
        raise InputFormatError(
            "Nombre de différentielles incorrect",
            error_code="DIFF_COUNT",
            context={"pointer": pointer + "/differentials", "terms": len(terms)},
        )
    diffs = []
    for k, blocks in enumerate(schema.differentials):
        here = f"{pointer}/differentials/{k}"
        if len(blocks) != algebra.vertex_count:
            raise InputFormatError(
                "Une matrice par sommet est attendue",
                error_code="MAP_BLOCK_COUNT",
                context={"pointer": here},
            )
        source, target = terms[k], terms[k + 1]
        matrices = [
            _matrix(algebra.p, rows, (target.dims[v], source.dims[v]), f"{here}/{v}")
            for v, rows in enumerate(blocks)
        ]
        diffs.append(ModuleMap(source, target, matrices, validate=False))
    return _domain(
        lambda: Complex(algebra, schema.lo, terms, diffs, name=schema.name, validate=False),
        pointer,
    )


def load_complex(algebra: Algebra, source: Document) -> Complex:
    return complex_from_schema(algebra, _parse(ComplexSchema, read_json(source)))


def complex_to_schema(c: Complex) -> ComplexSchema:
    return ComplexSchema(
        name=c.name,
        lo=c.lo,
        terms=[module_to_schema(t) for t in c.terms],
        differentials=[[b.tolist() for b in d.blocks] for d in c.diffs],
    )


def subcat_from_schema(algebra: Algebra, schema: SubcatSchema) -> SubcatSpec:
    generators = [
        module_from_schema(algebra, g, f"/generators/{k}") for k, g in enumerate(schema.generators)
    ]
    return _domain(lambda: SubcatSpec(generators, name=schema.name), "/generators")


def load_subcat(algebra: Algebra, source: Document) -> SubcatSpec:
    return subcat_from_schema(algebra, _parse(SubcatSchema, read_json(source)))


class CorpusLoader:
    """
    Lit tous les fichiers *.json d'un répertoire ; le champ `kind` choisit le
    type de document. L'ordre des fichiers (tri par nom) est déterministe.
    """

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self.modules: List[Module] = []
        self.complexes: List[Complex] = []
        self.handlers = {
            "module": self._load_module,
            "complex": self._load_complex,
        }

    def _load_module(self, data: Dict[str, Any], name: str) -> None:
        module = module_from_schema(self.algebra, _parse(ModuleSchema, data))
        module.name = module.name or name
        self.modules.append(module)

    def _load_complex(self, data: Dict[str, Any], name: str) -> None:
        c = complex_from_schema(self.algebra, _parse(ComplexSchema, data))
        c.name = c.name or name
        self.complexes.append(c)

    def load_directory(self, directory: Union[str, Path]) -> "CorpusLoader":
        directory = Path(directory)
        if not directory.is_dir():
            raise InputFormatError(
                f"Répertoire de corpus introuvable : {directory}",
                error_code="CORPUS_NOT_FOUND",
                context={"pointer": "", "path": str(directory)},
            )
        for path in sorted(directory.glob("*.json")):
            data = read_json(path)
            kind = data.get("kind")
            handler = self.handlers.get(kind)
            if handler is None:
                raise InputFormatError(
                    f"Type de document inconnu dans {path.name}",
                    error_code="UNKNOWN_KIND",
                    context={"pointer": "/kind", "path": str(path), "kind": kind},
                )
            try:
                handler(data, path.stem)
            except InputFormatError as exc:
                exc.context["path"] = str(path)
                raise
        logger.info(
            "Corpus chargé",
            directory=str(directory),
            modules=len(self.modules),
            complexes=len(self.complexes),
        )
        return self
