import numpy as np
import pytest

from rectcurves import curves, kernels


def unit_curve(spec, domain=None, count=1001, jet_order=None, source="analytic", origin=None):
    """Sample ``spec`` and reparameterize it by arc length."""
    domain = domain or spec.domain or curves.default_domain(spec)
    jet_order = spec.dimension if jet_order is None else jet_order
    base = curves.sample_jets(spec, domain, count, jet_order, source)
    return curves.reparameterize_arclength(base, origin=origin)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    return kernels.available_backends()[request.param]


# One line per acceptance criterion, filled by test_acceptance.py.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
