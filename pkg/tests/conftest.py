import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dwpgeom import jets
from dwpgeom.contact import standard_sasakian
from dwpgeom.geometry import MetricField, ScalarField, euclidean
from dwpgeom.submanifolds import IsometricImmersion
from dwpgeom.warped import DoublyWarpedProduct

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def diag_metric(*entries):
    """Metric with diagonal entries given as functions of the coordinate list."""
    n = len(entries)
    return MetricField(n, lambda x: [[entries[i](x) if i == j else 0.0 for j in range(n)] for i in range(n)])


def const(value, dim=1):
    return ScalarField(dim, lambda x: value + 0.0 * x[0])


@pytest.fixture
def sphere_metric():
    return diag_metric(lambda x: 1.0 + 0.0 * x[0], lambda x: jets.sin(x[0]) ** 2)


@pytest.fixture
def half_plane():
    return diag_metric(lambda x: 1 / x[1] ** 2, lambda x: 1 / x[1] ** 2)


@pytest.fixture
def sphere_product():
    e1 = euclidean(1)
    return DoublyWarpedProduct(e1, e1, ScalarField(1, lambda x: jets.sin(x[0])), const(1.0))


@pytest.fixture
def sphere_immersion(sphere_product):
    def fmap(x):
        t, s = x
        return [jets.sin(t) * jets.cos(s), jets.sin(t) * jets.sin(s), jets.cos(t)]

    return IsometricImmersion(fmap, ambient=euclidean(3), product=sphere_product)


@pytest.fixture
def torus_immersion():
    e1 = euclidean(1)
    dwp = DoublyWarpedProduct(e1, e1, const(1.0), const(1.0))

    def fmap(x):
        u, v = x
        return [jets.cos(u), jets.sin(u), jets.cos(v), jets.sin(v)]

    return IsometricImmersion(fmap, ambient=euclidean(4), product=dwp)


@pytest.fixture
def legendrian_immersion():
    e1 = euclidean(1)
    dwp = DoublyWarpedProduct(e1, e1, const(1.0), const(1.0))
    form = standard_sasakian(2)
    return IsometricImmersion(lambda x: [2 * x[0], 2 * x[1], 0.0, 0.0, 0.0], form=form, product=dwp)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


PI = math.pi


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(line)
