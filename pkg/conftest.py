"""
Shared fixtures for the garage dynamics tests
"""
import pytest

from garage_catalog import generate
from garage_io import parse_garage
from garage_model import validate_garage
from translation_surface import TranslationSurface
from unfolding_engine import unfold

SQUARE_TEXT = """\
name unit square
base
v 0 0
v 1 0
v 1 1
v 0 1
"""


@pytest.fixture
def square():
    """Unit square as a one-tile garage"""
    return validate_garage(parse_garage(SQUARE_TEXT))


@pytest.fixture
def torus():
    return TranslationSurface.unit_torus()


@pytest.fixture
def double_pentagon():
    return TranslationSurface.double_pentagon()


@pytest.fixture(scope="session")
def thm3_9():
    return generate("thm3", 9)


@pytest.fixture(scope="session")
def isosceles_9():
    return generate("veech-isosceles", 9)


@pytest.fixture(scope="session")
def m_p_9(isosceles_9):
    return unfold(isosceles_9)


@pytest.fixture(scope="session")
def m_q_9(thm3_9):
    return unfold(thm3_9)
