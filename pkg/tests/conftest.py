import pytest

from trslab.config import settings
from trslab.services.field_service import make_field


@pytest.fixture(scope="session")
def gf5():
    return make_field(5)


@pytest.fixture(scope="session")
def gf7():
    return make_field(7)


@pytest.fixture(scope="session")
def gf8():
    return make_field(2, 3)


@pytest.fixture(scope="session")
def gf9():
    return make_field(3, 2)


@pytest.fixture(scope="session")
def gf16():
    return make_field(2, 4)


@pytest.fixture
def data_dir(tmp_path, monkeypatch):
    """Point settings.data_dir at a scratch directory."""
    monkeypatch.setattr(settings, "data_dir", tmp_path)
    return tmp_path
