import pytest

from bicatkit.library import load_chain_pseudofunctor, load_fixture
from bicatkit.presentation import load_presentation_with_sigma
from bicatkit.sigma import make_sigma


@pytest.fixture(scope="session")
def split():
    return load_fixture("split")


@pytest.fixture(scope="session")
def split_sigma(split):
    return make_sigma(split.bicategory, split.sigma_names)


@pytest.fixture(scope="session")
def iso():
    return load_fixture("iso")


@pytest.fixture(scope="session")
def grpd():
    return load_fixture("grpd")


@pytest.fixture(scope="session")
def triv():
    return load_fixture("triv")


@pytest.fixture(scope="session")
def chain_f():
    return load_chain_pseudofunctor()


# two parallel order-2 cells, one on an endo-identity whose right whisker onto
# the generating arrow is nontrivial; used for perturbation-style checks
TWOCELL_DOC = """
strict true
objects: U V
arrows:
  m : U -> V
cells:
  k : m => m
  j : id_V => id_V
vcomp:
  k . k = id_m
  j . j = id_id_V
rwhisk:
  j * m = k
"""


@pytest.fixture(scope="session")
def twocell():
    return load_presentation_with_sigma(TWOCELL_DOC, name="twocell")
