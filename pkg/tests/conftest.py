import numpy as np
import pytest

from phhs import models
from phhs.hamiltonian import assemble_phhs


@pytest.fixture(scope="session")
def central():
    model = models.build_central_problem()
    return model, assemble_phhs(model)


@pytest.fixture(scope="session")
def harmonic():
    # standard system on C^2 with H = (P1^2 + Q1^2)/2; curvy trajectories
    model = models.build_standard_hhs(1, "(P1^2 + Q1^2)/2")
    return model, assemble_phhs(model)


@pytest.fixture(scope="session")
def proper():
    # the flagship twisted system: f = 1, h = exp(x1), H_R = -y1
    model = models.build_proper_phhs(f="1", h="exp(x1)", H_R="-y1")
    return model, assemble_phhs(model)


@pytest.fixture(scope="session")
def torus_square():
    lattice = models.Lattice(np.eye(2))
    model = models.build_torus_model(lattice)
    return model, assemble_phhs(model)
