import pytest

import leech
import mog
import surface


@pytest.fixture
def tmp_journal(tmp_path):
    return tmp_path / "checks.jsonl"


@pytest.fixture(scope="session")
def steiner():
    return mog.steiner_system()


@pytest.fixture(scope="session")
def minimal_shell():
    """The 196560 norm -4 vectors, enumerated once per session."""
    return leech.minimal_shell()


@pytest.fixture(scope="session")
def model_for(minimal_shell):
    """Surface models keyed by case id, built on first use."""
    models = {}

    def build(case):
        if case not in models:
            models[case] = surface.load_case(case, minimal_shell)
        return models[case]

    return build


@pytest.fixture(scope="session")
def ordinary_model(model_for):
    return model_for("jacobian-ordinary")
