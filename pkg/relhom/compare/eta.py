"""
Comparaison de F avec le produit tensoriel par un complexe dualisant sur une
algèbre commutative locale de Gorenstein.

Le complexe dualisant est la corésolution injective minimale
0 → R → I^0 → ⋯ → I^d → 0. Pour un complexe G• de Gorenstein projectifs,
η_G : F(G•) → G•⊗I• est l'unique morphisme (à homotopie près) avec
η_G∘θ_G ≃ Id⊗ε.
"""
from dataclasses import dataclass
from datetime import datetime
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.homological import indecomposable_injectives, injective_coresolution_maps, injective_dimension, projective
from ..algebra.modules import Module, ModuleMap
from ..algebra.quiver import Algebra
from ..approximation.approx import all_members, injectives_subcat, projectives_subcat
from ..balanced.acyclicity import is_right_acyclic
from ..complexes.complex import ChainMap, Complex, Homotopy, _sign, is_acyclic, mapping_cone, stalk
from ..complexes.homotopy import factor_after, homotopy_inverse, null_homotopy
from ..core.config import settings
from ..core.exceptions import FactorizationError, GorensteinError, RelHomException
from ..core.logger import get_logger
from ..equivalence.functor import FunctorSession
from ..gorenstein.profile import GorensteinProfile, is_gorenstein_injective
from ..models.schemas import EtaReport, TensorGInjReport
from .tensor import (
    TensorComplex,
    check_commutative,
    tensor_chain_map,
    tensor_complex,
    tensor_modules,
    tensor_with_element,
    unit_element,
)

logger = get_logger(__name__)

SELF_INJECTIVE_NOTE = (
    "R est auto-injective : I• est concentré en degré 0 et −⊗I• est isomorphe à l'identité"
)


@dataclass
class DualizingData:
    """R, sa corésolution injective I• (degrés 0..d) et ε : R → I•"""
    algebra: Algebra
    regular: Module
    complex: Complex
    epsilon: ChainMap
    dimension: int

    @property
    def unit_image(self) -> np.ndarray:
        """ε(1) ∈ I^0"""
        block = self.epsilon.component(0).blocks[0]
        return (block.array @ unit_element(self.algebra)) % self.algebra.p

    def augmented(self) -> Complex:
        """Y• = 0 → R → I^0 → ⋯ → I^d → 0, R en degré −1"""
        return Complex(
            self.algebra, -1,
            [self.regular] + list(self.complex.terms),
            [self.epsilon.component(0)] + list(self.complex.diffs),
            name=f"Y({self.algebra.name})", validate=False,
        )


def build_dualizing(algebra: Algebra, bound: Optional[int] = None) -> DualizingData:
    check_commutative(algebra)
    bound = settings.gorenstein.bound if bound is None else bound
    regular = projective(algebra, 0)
    d = injective_dimension(regular, bound)
    if d is None:
        raise GorensteinError(
            "R n'est pas de dimension injective finie sous la borne",
            error_code="DIMENSION_EXCEEDS_BOUND",
            context={"algebra": algebra.name, "bound": bound},
        )
    terms, diffs = injective_coresolution_maps(regular, d)
    complex_ = Complex(algebra, 0, terms, diffs[1:], name="I", validate=False)
    epsilon = ChainMap(stalk(regular, 0, name="R"), complex_, {0: diffs[0]}, validate=False)
    data = DualizingData(algebra, regular, complex_, epsilon, d)
    if not (all_members(injectives_subcat(algebra), terms) and is_acyclic(data.augmented())):
        raise GorensteinError(
            "La corésolution de R n'est pas une corésolution injective exacte",
            error_code="DUALIZING_INVALID",
            context={"algebra": algebra.name},
        )
    return data


def tensor_unit_map(g: Complex, tc: TensorComplex, dd: DualizingData) -> ChainMap:
    """Id⊗ε : G• → G•⊗I•, m ↦ m ⊗ ε(1) dans le facteur G^n ⊗ I^0"""
    vec = dd.unit_image
    components = {
        n: tc.injection(n, (n, 0)) @ tensor_with_element(tc.products[(n, 0)], vec)
        for n in g.degrees
    }
    return ChainMap(g, tc.complex, components, validate=False)


@dataclass
class EtaWitness:
    source: Complex
    theta: ChainMap
    unit_map: ChainMap
    eta: ChainMap
    homotopy: Homotopy
    tensor: TensorComplex

    def verify(self) -> bool:
        """η chaîne et η∘θ − Id⊗ε = ds + sd"""
        return self.eta.is_chain_map() and self.homotopy.witnesses(self.eta @ self.theta - self.unit_map)


def build_eta(session: FunctorSession, dd: DualizingData, g: Complex) -> EtaWitness:
    start_time = datetime.now()
    tc = tensor_complex(g, dd.complex)
    if not g.terms:
        identity = ChainMap.identity(g)
        zero = ChainMap.zero(g, tc.complex)
        return EtaWitness(g, identity, zero, zero, Homotopy(g, tc.complex), tc)
    _, theta = session.f_object(g)
    unit_map = tensor_unit_map(g, tc, dd)
    try:
        eta, homotopy = session.compare_from_theta(g, unit_map)
    except FactorizationError:
        found = factor_after(theta, unit_map)
        if found is None:
            raise FactorizationError(
                "Id⊗ε ne se factorise pas par θ : θ n'est pas une corésolution",
                error_code="ETA_NOT_FOUND",
                context={"complex": g.name},
            )
        eta, homotopy = found
    logger.log_performance(
        "build_eta",
        (datetime.now() - start_time).total_seconds(),
        complex=g.name,
    )
    return EtaWitness(g, theta, unit_map, eta, homotopy, tc)


def identify_cone(witness: EtaWitness, dd: DualizingData) -> Tuple[ChainMap, TensorComplex]:
    """
    Cone(Id⊗ε) → G•⊗Y• : diag((−1)^{n+1} ψ, id) où ψ : G^{n+1} → G^{n+1}⊗R
    est l'isomorphisme m ↦ m ⊗ 1.
    """
    g, tc = witness.source, witness.tensor
    p = g.p
    triangle = mapping_cone(witness.unit_map)
    ty = tensor_complex(g, dd.augmented())
    one = unit_element(dd.algebra)
    components = {}
    for n in triangle.cone.degrees:
        comp = ModuleMap.zero(triangle.cone.term(n), ty.complex.term(n))
        pairs = ty.indices.get(n, [])
        if (n + 1, -1) in pairs:
            psi = tensor_with_element(ty.products[(n + 1, -1)], one).scale(_sign(p, n + 1))
            comp = comp + ty.injection(n, (n + 1, -1)) @ psi @ triangle.sums[n].projections[0]
        for pair in tc.indices.get(n, []):
            if pair not in pairs:
                continue
            source, target = tc.products[pair].module, ty.products[pair].module
            same = ModuleMap.identity(source).retarget(source, target)
            comp = comp + ty.injection(n, pair) @ same @ tc.projection(n, pair) @ triangle.sums[n].projections[1]
        components[n] = comp
    return ChainMap(triangle.cone, ty.complex, components, validate=False), ty


def _is_isomorphism(f: ChainMap) -> bool:
    return f.is_chain_map() and all(
        c.is_injective() and c.is_surjective() for c in f.components.values()
    )


def check_tensor_ginj(
    profile: GorensteinProfile, pairs: Optional[Sequence[Tuple[Module, Module]]] = None
) -> TensorGInjReport:
    """G⊗_R I est Gorenstein injectif pour G Gorenstein projectif et I injectif"""
    algebra = profile.algebra
    check_commutative(algebra)
    if pairs is None:
        pairs = [(g, i) for g in profile.gproj.generators for i in indecomposable_injectives(algebra)]
    report = TensorGInjReport()
    if not pairs:
        report.add("corpus", "aucune paire", True, vacuous=True)
    for k, (g, i) in enumerate(pairs):
        product = tensor_modules(g, i)
        report.add(
            "tensor_balanced",
            "q(x·m ⊗ n) = q(m ⊗ x·n)",
            product.is_balanced(),
            pair=k,
        )
        report.add(
            "tensor_ginj",
            "G⊗_R I est Gorenstein injectif",
            is_gorenstein_injective(product.module, profile.window),
            pair=k,
            dims=list(product.module.dims),
        )
    logger.log_check("tensor_ginj", report.passed, algebra=algebra.name)
    return report


def verify_eta_iso(
    session: FunctorSession,
    dd: DualizingData,
    complexes: Sequence[Complex] = (),
    maps: Sequence[ChainMap] = (),
) -> EtaReport:
    """
    Pour chaque complexe de projectifs : η_P est une équivalence
    d'homotopie, P•⊗Y• est GProj-acyclique à droite, les deux critères
    coïncident et Cone(Id⊗ε) ≅ P•⊗Y•. Puis naturalité de η.
    """
    report = EtaReport(
        dualizing_dimension=dd.dimension,
        note=SELF_INJECTIVE_NOTE if dd.dimension == 0 else "",
    )
    if not complexes:
        report.add("corpus", "corpus vide", True, vacuous=True)
    proj = projectives_subcat(dd.algebra)
    y_aug = dd.augmented()
    witnesses: Dict[int, EtaWitness] = {}

    for k, c in enumerate(complexes):
        report.add(
            "projective_terms",
            "les termes de P• sont projectifs",
            all_members(proj, c.terms),
            hard=False,
            complex=k,
        )
        try:
            witness = build_eta(session, dd, c)
        except RelHomException as exc:
            report.add("eta_witness", "η∘θ ≃ Id⊗ε", False, complex=k, error=exc.error_code)
            continue
        witnesses[id(c)] = witness
        report.add("eta_witness", "η∘θ ≃ Id⊗ε", witness.verify(), complex=k)

        inverse = homotopy_inverse(witness.eta)
        iso = inverse is not None and inverse.verify()
        report.add(
            "eta_homotopy_equivalence",
            "η_P est une équivalence d'homotopie",
            iso,
            complex=k,
            inverse_found=inverse is not None,
        )
        criterion = is_right_acyclic(session.x, tensor_complex(c, y_aug).complex)
        report.add(
            "tensor_right_gproj_acyclic",
            "P•⊗Y• est GProj-acyclique à droite",
            criterion,
            complex=k,
        )
        report.add(
            "criteria_agree",
            "η_P est un isomorphisme si et seulement si P•⊗Y• est GProj-acyclique à droite",
            iso == criterion,
            complex=k,
        )
        if c.terms:
            phi, _ = identify_cone(witness, dd)
            report.add("cone_identification", "Cone(Id⊗ε) ≅ P•⊗Y•", _is_isomorphism(phi), complex=k)

    for k, f in enumerate(maps):
        source, target = witnesses.get(id(f.source)), witnesses.get(id(f.target))
        if source is None or target is None:
            report.add("naturality", "η∘F(f) ≃ (f⊗Id)∘η", False, hard=False, map=k, skipped=True)
            continue
        try:
            ff, _ = session.f_map(f)
        except RelHomException as exc:
            report.add("naturality", "η∘F(f) ≃ (f⊗Id)∘η", False, map=k, error=exc.error_code)
            continue
        f_tensor = tensor_chain_map(source.tensor, target.tensor, f, ChainMap.identity(dd.complex))
        difference = target.eta @ ff - f_tensor @ source.eta
        report.add(
            "naturality",
            "η∘F(f) ≃ (f⊗Id)∘η",
            null_homotopy(difference) is not None,
            map=k,
        )

    logger.log_check("eta", report.passed, algebra=dd.algebra.name, dimension=dd.dimension)
    return report


def eta_corpus_maps(complexes: Sequence[Complex], maps: Sequence[ChainMap]) -> List[ChainMap]:
    """Morphismes du corpus dont la source et le but sont dans le corpus"""
    ids = {id(c) for c in complexes}
    return [f for f in maps if id(f.source) in ids and id(f.target) in ids]
