"""
Modèles de données Pydantic pour les documents JSON et les rapports.
Ces modèles garantissent la cohérence des entrées/sorties de la CLI.
"""
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator

SCHEMA_VERSION = 1


class VersionedDocument(BaseModel):
    """Document JSON portant le champ `schema`"""
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    schema_version: int = Field(SCHEMA_VERSION, alias="schema", description="Version du format")

    @field_validator("schema_version")
    @classmethod
    def check_version(cls, v: int) -> int:
        if v != SCHEMA_VERSION:
            raise ValueError(f"version de schéma non supportée : {v}")
        return v


# Entrées

class ArrowSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: int = Field(..., ge=0)
    target: int = Field(..., ge=0)
    name: str = Field(..., min_length=1)


class QuiverSchema(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    vertex_count: int = Field(..., ge=1, alias="vertex-count")
    arrows: List[ArrowSchema] = Field(default_factory=list)


class RelationTermSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coeff: int = 1
    path: List[str] = Field(..., min_length=1)


class RelationSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    terms: List[RelationTermSchema] = Field(..., min_length=1)


class AlgebraSchema(VersionedDocument):
    """Présentation d'algèbre : carquois, relations, borne de nilpotence"""
    kind: Literal["algebra"] = "algebra"
    name: str = ""
    field: Optional[int] = Field(None, description="Caractéristique p ; sinon celle de la session")
    quiver: QuiverSchema
    relations: List[RelationSchema] = Field(default_factory=list)
    nilpotency_bound: int = Field(..., ge=1, alias="nilpotency-bound")


class ModuleSchema(VersionedDocument):
    """Représentation : dimensions et une matrice (but × source) par flèche"""
    kind: Literal["module"] = "module"
    name: str = ""
    dims: List[int]
    action: Dict[str, List[List[int]]] = Field(default_factory=dict)


class ComplexSchema(VersionedDocument):
    """Complexe borné : termes à partir du degré lo, différentielles par sommet"""
    kind: Literal["complex"] = "complex"
    name: str = ""
    lo: int = 0
    terms: List[ModuleSchema] = Field(default_factory=list)
    differentials: List[List[List[List[int]]]] = Field(
        default_factory=list,
        description="d^n pour n = lo..hi-1 : une matrice par sommet",
    )


class SubcatSchema(VersionedDocument):
    kind: Literal["subcategory"] = "subcategory"
    name: str = ""
    generators: List[ModuleSchema] = Field(..., min_length=1)


# Sorties

class CheckResult(BaseModel):
    """Verdict d'une vérification avec l'invariant énoncé en clair"""
    name: str
    invariant: str
    passed: bool
    hard: bool = True
    details: Dict[str, Any] = Field(default_factory=dict)


class CheckReport(BaseModel):
    """Rapport générique : liste ordonnée de vérifications"""
    kind: str = "report"
    checks: List[CheckResult] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    def add(self, name: str, invariant: str, passed: bool, hard: bool = True, **details: Any) -> bool:
        self.checks.append(CheckResult(name=name, invariant=invariant, passed=bool(passed), hard=hard, details=details))
        return bool(passed)

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for check in other.checks:
            name = f"{prefix}{check.name}" if prefix else check.name
            self.checks.append(check.model_copy(update={"name": name}))

    @computed_field
    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.hard)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if c.hard and not c.passed]


class AlgebraReport(CheckReport):
    kind: str = "algebra"
    algebra: str = ""
    dimension: int = 0
    vertex_count: int = 0
    projective_dims: List[List[int]] = Field(default_factory=list)
    injective_dims: List[List[int]] = Field(default_factory=list)


class ComplexReport(CheckReport):
    kind: str = "complex"
    cohomology: Dict[str, Dict[int, List[int]]] = Field(default_factory=dict)


class ApproximationReport(CheckReport):
    kind: str = "approximation"
    subcategory: str = ""
    side: Literal["right", "left"] = "right"


class ResolutionReport(CheckReport):
    kind: str = "resolution"
    subcategory: str = ""
    coresolution: bool = False
    terms: Dict[str, List[List[int]]] = Field(default_factory=dict, description="Vecteurs de dimension par module")
    complexes: Dict[str, ComplexSchema] = Field(default_factory=dict, description="(Co)résolution augmentée par module")


class MembershipReport(CheckReport):
    kind: str = "gorenstein_membership"


class AdmissibilityReport(CheckReport):
    kind: str = "admissibility"
    subcategory: str = ""
    side: Literal["right", "left"] = "right"
    admissible: bool = False
    structural: bool = Field(False, description="Certificat structurel (contient les projectifs/injectifs)")


class BalancedReport(CheckReport):
    kind: str = "balanced"
    x: str = ""
    y: str = ""
    x_admissible: bool = False
    y_coadmissible: bool = False
    x_resolution_dim: Optional[int] = Field(None, description="None : dépasse la borne")
    y_coresolution_dim: Optional[int] = None


class CotorsionReport(CheckReport):
    kind: str = "cotorsion_triple"


class TotalizationReport(CheckReport):
    kind: str = "totalization"
    width: int = 0
    total_dims: Dict[int, List[int]] = Field(default_factory=dict)
    total: Optional[ComplexSchema] = Field(None, description="T• = tot(X•,•), renseigné par la CLI")
    epsilon: List[List[List[List[int]]]] = Field(default_factory=list, description="ε^n : T^n → M^n par sommet")


class EquivalenceReport(CheckReport):
    kind: str = "equivalence"


class GorensteinProfileReport(CheckReport):
    kind: str = "gorenstein_profile"
    algebra: str = ""
    dimension: Optional[int] = None
    gproj: List[List[int]] = Field(default_factory=list, description="Vecteurs de dimension des générateurs")
    ginj: List[List[int]] = Field(default_factory=list)
    finite_dimension_generators: List[List[int]] = Field(default_factory=list)


class ProjInjRestrictionReport(CheckReport):
    kind: str = "proj_inj_restriction"


class TensorGInjReport(CheckReport):
    kind: str = "tensor_ginj"


class EtaReport(CheckReport):
    kind: str = "eta"
    dualizing_dimension: Optional[int] = None
    note: str = ""


class RunReport(VersionedDocument):
    """Rapport d'exécution de la CLI"""
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    command: List[str]
    seed: int
    field: int
    verdict: bool = True
    reports: List[Dict[str, Any]] = Field(default_factory=list)
    timing: Optional[Dict[str, float]] = None

    def attach(self, report: CheckReport) -> None:
        self.reports.append(report.model_dump(mode="json"))
        self.verdict = self.verdict and report.passed
