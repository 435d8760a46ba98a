import pytest

from orthofact.catalog import VerifierEnv, load_desk_catalog


@pytest.fixture(scope="session")
def shared_env():
    """One environment for the acceptance run: worlds, handles, and ambient
    orbits are built once and reused across criteria."""
    return VerifierEnv()


@pytest.fixture(scope="session")
def desk_catalog():
    return load_desk_catalog()
