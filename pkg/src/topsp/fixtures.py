"""The running-example complex (seven nodes, two filled triangles) and its signals."""

from importlib import resources

import numpy as np

from .complex import from_maximal_simplices

EXAMPLE_MAXIMAL = [(1, 3, 4), (5, 6, 7), (1, 2), (2, 3), (3, 6), (4, 5)]

#: interpolation ground truth, canonical edge order (1,2), (1,3), ..., (6,7)
EXAMPLE_FLOW = np.array([-2.0, -2.0, 4.0, -2.0, 3.0, -7.0, 7.0, 3.0, 4.0, -4.0])
EXAMPLE_LABELED_EDGES = [(1, 3), (1, 4), (3, 6), (4, 5), (5, 6)]

#: alpha values tried for the worked interpolation example
INTERPOLATION_ALPHAS = (0.01, 0.05, 0.1, 0.5)


def example_complex():
    return from_maximal_simplices(EXAMPLE_MAXIMAL)


def path(name):
    """Filesystem path of a bundled data file (``example.sc``, ``example_flow.sig``, ...)."""
    return resources.files("topsp") / "data" / name
