import pytest

from wiresplit import ScatteringInputs, default_medium
from wiresplit.designer import DesignSpec, design_trajectories

PAPER_INPUTS = dict(v0=0.01, b=0.5e-6, x0=300e-6, tau=0.1)


@pytest.fixture(scope="session")
def medium():
    return default_medium()


@pytest.fixture(scope="session")
def paper_inputs():
    return ScatteringInputs(**PAPER_INPUTS)


@pytest.fixture(scope="session")
def triangular_design(paper_inputs):
    """(DesignResult, top branch, bottom branch) for the reference inputs."""
    spec = DesignSpec(scheme="triangular", inputs=paper_inputs)
    return design_trajectories(spec)


@pytest.fixture(scope="session")
def inverse_design(paper_inputs):
    spec = DesignSpec(scheme="inverse", inputs=paper_inputs)
    return design_trajectories(spec)
