"""
Configuration centralisée avec Pydantic pour validation et typage fort.
Chaque préoccupation du moteur (corps de base, résolutions, Gorenstein,
corpus de sondes, rapports) a sa propre section.
"""
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n ** 0.5) + 1))


class FieldConfig(BaseSettings):
    """Corps de base GF(p)"""
    model_config = SettingsConfigDict(env_prefix="RELHOM_FIELD_", extra="ignore")

    p: int = 2

    @field_validator("p")
    @classmethod
    def check_prime(cls, v: int) -> int:
        if not _is_prime(v) or v > 97:
            raise ValueError(f"p doit être un nombre premier entre 2 et 97, reçu {v}")
        return v


class ResolutionConfig(BaseSettings):
    """Bornes et stratégie des (co)résolutions"""
    model_config = SettingsConfigDict(env_prefix="RELHOM_RESOLUTION_", extra="ignore")

    max_len: int = 6
    width: Optional[int] = None  # None: calculée par instance
    strategy: Literal["classical_first", "approximation"] = "classical_first"
    iso_probes: int = 4  # sondes croisées deux à deux pour H^k(Hom(X•, N)) ≅ H^k(Hom(M, Y•))


class GorensteinConfig(BaseSettings):
    """Paramètres de la couche Gorenstein"""
    model_config = SettingsConfigDict(env_prefix="RELHOM_GORENSTEIN_", extra="ignore")

    bound: int = 4
    window_extra: int = 4  # fenêtre = 2d + window_extra


class CorpusConfig(BaseSettings):
    """Corpus de sondes et aléa reproductible"""
    model_config = SettingsConfigDict(env_prefix="RELHOM_CORPUS_", extra="ignore")

    seed: int = 0
    random_modules: int = 2
    random_maps: int = 3


class ReportConfig(BaseSettings):
    """Contenu des rapports JSON"""
    model_config = SettingsConfigDict(env_prefix="RELHOM_REPORT_", extra="ignore")

    include_timing: bool = False


class Settings(BaseSettings):
    """Configuration globale centralisée"""
    model_config = SettingsConfigDict(
        env_prefix="RELHOM_",
        env_file=".env",
        env_nested_delimiter="__",
        extra="ignore",
    )

    field: FieldConfig = FieldConfig()
    resolution: ResolutionConfig = ResolutionConfig()
    gorenstein: GorensteinConfig = GorensteinConfig()
    corpus: CorpusConfig = CorpusConfig()
    report: ReportConfig = ReportConfig()

    # Environnement
    environment: str = "development"
    log_level: str = "WARNING"
    log_dir: Optional[str] = None
    ext_bound: Optional[int] = None  # None: N × nombre de sommets + 2

    def ext_bound_for(self, nilpotency_bound: int, vertex_count: int) -> int:
        """Borne Ext par défaut d'une algèbre"""
        if self.ext_bound is not None:
            return self.ext_bound
        return nilpotency_bound * vertex_count + 2


# Instance globale
settings = Settings()
