"""
Exceptions personnalisées du moteur.
Chaque exception porte un code d'erreur et un contexte détaillé.
Les échecs de vérification ne sont jamais des exceptions : ils vont dans les rapports.
"""
from typing import Any, Dict, Optional


class RelHomException(Exception):
    """Exception de base du moteur"""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.error_code = error_code
        self.context = context or {}
        super().__init__(self.message)


class DimensionMismatchError(RelHomException):
    """Formats de matrices ou de modules incompatibles"""
    pass


class AlgebraPresentationError(RelHomException):
    """Carquois ou relation mal formés"""
    pass


class InfiniteDimensionalError(RelHomException):
    """Aucune borne de nilpotence ne certifie la dimension finie"""
    pass


class ModuleValidationError(RelHomException):
    """Module ou morphisme ne vérifiant pas ses invariants"""
    pass


class ComplexValidationError(RelHomException):
    """Complexe avec d∘d ≠ 0 ou morphisme de complexes non commutatif"""
    pass


class ResolutionBoundExceededError(RelHomException):
    """(Co)résolution plus longue que la borne demandée"""
    pass


class NotAdmissibleError(RelHomException):
    """Approximation non épique pour une sous-catégorie supposée admissible"""
    pass


class FactorizationError(RelHomException):
    """Un système linéaire garanti résoluble ne l'est pas"""
    pass


class HorseshoeError(RelHomException):
    """Suite d'entrée non exacte pour le lemme du fer à cheval"""
    pass


class NonCommutativeAlgebraError(RelHomException):
    """Produit tensoriel demandé sur une algèbre non commutative"""
    pass


class GorensteinError(RelHomException):
    """Construction du profil Gorenstein impossible"""
    pass


class InputFormatError(RelHomException):
    """Entrée JSON mal formée"""
    pass


class ConfigurationError(RelHomException):
    """Erreur de configuration"""
    pass
