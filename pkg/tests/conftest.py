"""
Fixtures partagées : algèbres d'exemple sur GF(2) et GF(3).
"""
import sys
from pathlib import Path

import pytest

# Ajouter la racine du dépôt au path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from relhom.algebra.library import (  # noqa: E402
    a2_path,
    commutative_square_zero,
    dual_numbers,
    nakayama_cycle,
    triangular_dual_numbers,
)
from relhom.core.config import settings  # noqa: E402

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(params=[2, 3], ids=["gf2", "gf3"])
def p(request):
    return request.param


@pytest.fixture
def a2(p):
    return a2_path(p)


@pytest.fixture
def dual(p):
    return dual_numbers(p)


@pytest.fixture
def a2_gf2():
    return a2_path(2)


@pytest.fixture
def dual_gf2():
    return dual_numbers(2)


@pytest.fixture
def nakayama_gf2():
    return nakayama_cycle(2)


@pytest.fixture
def triangular_gf2():
    return triangular_dual_numbers(2)


@pytest.fixture
def square_zero_gf2():
    return commutative_square_zero(2)


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    """Les options de la CLI modifient la configuration globale : on la restaure"""
    for section in ("field", "resolution", "gorenstein", "corpus", "report"):
        monkeypatch.setattr(settings, section, getattr(settings, section).model_copy())
