import pytest

from cnotsynth.linalg import AugmentedTransform, ParityMatrix, parity_mask
from cnotsynth.topology import preset_graph

# 6x6 linear transformation of the worked linear-synthesis example (flip column zero).
APPENDIX_A_BITS = [
    [1, 1, 0, 1, 1, 0, 0],
    [0, 0, 1, 1, 0, 1, 0],
    [1, 0, 1, 0, 1, 0, 0],
    [1, 1, 0, 1, 0, 0, 0],
    [1, 1, 1, 1, 0, 0, 0],
    [0, 1, 0, 1, 0, 1, 0],
]

# The seven (coefficient, parity) terms of the worked phase-network example.
APPENDIX_PHASE_TERMS = [
    (1, parity_mask([1, 4, 5], const=True)),
    (2, parity_mask([2, 3, 5, 6])),
    (4, parity_mask([4, 5, 6], const=True)),
    (4, parity_mask([1, 2, 6], const=True)),
    (6, parity_mask([1, 2, 3], const=True)),
    (7, parity_mask([1, 2, 4, 6], const=True)),
    (1, parity_mask([2, 4, 5])),
]


@pytest.fixture(scope="session")
def grid2x3():
    return preset_graph("appendix-2x3")


@pytest.fixture()
def appendix_transform():
    return AugmentedTransform.from_bits(APPENDIX_A_BITS)


@pytest.fixture()
def appendix_parity_matrix():
    return ParityMatrix.from_terms(6, APPENDIX_PHASE_TERMS)
