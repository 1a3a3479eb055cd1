from fractions import Fraction

import pytest

from hypergeo.core.config import ENV_KEYS, reset_settings
from hypergeo.core.run_id import reset_run_id
from hypergeo.numeric import Precision
from hypergeo.series import HyperParams
from hypergeo.special import GammaContext


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    # Cada test arranca sin settings ni run id cacheados
    for key in list(ENV_KEYS) + ["HYPERGEO_CONFIG", "HYPERGEO_RUN_ID"]:
        monkeypatch.delenv(key, raising=False)
    reset_settings()
    reset_run_id()
    yield
    reset_settings()
    reset_run_id()


@pytest.fixture
def prec():
    return Precision.from_digits(40)


@pytest.fixture
def gctx(prec):
    return GammaContext.at(prec)


@pytest.fixture
def example1():
    return HyperParams((Fraction(10, 3), Fraction(10, 3)), (Fraction(7, 2),))


@pytest.fixture
def example2():
    return HyperParams((Fraction(7, 2), Fraction(7, 2)), (Fraction(31, 5),))


@pytest.fixture
def example3():
    return HyperParams((Fraction(7, 2),) * 3, (Fraction(31, 5), Fraction(36, 7)))
