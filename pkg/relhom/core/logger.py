"""
Logging structuré du moteur.

Tout part sur stderr (stdout ne porte que le rapport JSON de la CLI) ;
chaque entrée reçoit le corps p et la graine de la session en cours.
"""
import logging
import logging.handlers
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict

from pythonjsonlogger import jsonlogger

from .config import settings

_READABLE = "%(asctime)s %(levelname)-7s [%(name)s] %(message)s"
_JSON_FIELDS = "%(asctime)s %(name)s %(levelname)s %(funcName)s %(lineno)d %(message)s"


def _handlers():
    stream = logging.StreamHandler(sys.stderr)
    if settings.environment == "development":
        stream.setFormatter(logging.Formatter(_READABLE))
    else:
        stream.setFormatter(jsonlogger.JsonFormatter(_JSON_FIELDS))
    yield stream

    if settings.log_dir:
        folder = Path(settings.log_dir)
        folder.mkdir(parents=True, exist_ok=True)
        rotating = logging.handlers.RotatingFileHandler(
            folder / "relhom.log", maxBytes=5 * 1024 * 1024, backupCount=3
        )
        rotating.setFormatter(jsonlogger.JsonFormatter(_JSON_FIELDS))
        yield rotating


class StructuredLogger:
    """Enveloppe de logging.Logger : les mots-clés deviennent des champs JSON"""

    def __init__(self, name: str):
        self.logger = logging.getLogger(name)
        self.logger.setLevel(settings.log_level.upper())
        if not self.logger.handlers:
            for handler in _handlers():
                self.logger.addHandler(handler)
            self.logger.propagate = False

    def _emit(self, level: int, message: str, fields: Dict[str, Any]) -> None:
        if not self.logger.isEnabledFor(level):
            return
        extra = {
            "field_p": settings.field.p,
            "seed": settings.corpus.seed,
            "at": datetime.now().isoformat(timespec="milliseconds"),
            **fields,
        }
        self.logger.log(level, message, extra=extra)

    def debug(self, message: str, **fields):
        self._emit(logging.DEBUG, message, fields)

    def info(self, message: str, **fields):
        self._emit(logging.INFO, message, fields)

    def warning(self, message: str, **fields):
        self._emit(logging.WARNING, message, fields)

    def error(self, message: str, **fields):
        self._emit(logging.ERROR, message, fields)

    def log_performance(self, operation: str, duration: float, **fields):
        """Durée d'une construction longue (résolution, quasi-bicomplexe, ...)"""
        self.debug(f"{operation} en {duration * 1000:.1f} ms", operation=operation,
                   duration_ms=round(duration * 1000, 3), **fields)

    def log_check(self, check: str, passed: bool, **fields):
        # un échec reste visible au niveau WARNING par défaut
        level = logging.INFO if passed else logging.WARNING
        verdict = "ok" if passed else "ÉCHEC"
        self._emit(level, f"{check} : {verdict}", {"check": check, "passed": passed, **fields})


def get_logger(name: str) -> StructuredLogger:
    return StructuredLogger(name)
