import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from multisymplectic.exterior import DifferentialForm, euclidean
from multisymplectic.observables import PrePlectic
from multisymplectic.polynomial import Polynomial

# derandomized so repeated runs explore the same examples
settings.register_profile("repo", derandomize=True, deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def plane() -> PrePlectic:
    c = euclidean("x", "y")
    return PrePlectic(DifferentialForm.basis(c, 0, 1))


def volume3() -> PrePlectic:
    c = euclidean("x", "y", "z")
    return PrePlectic(DifferentialForm.basis(c, 0, 1, 2))


def symplectic4() -> PrePlectic:
    c = euclidean("x1", "y1", "x2", "y2")
    return PrePlectic(DifferentialForm.basis(c, 0, 1) + DifferentialForm.basis(c, 2, 3))


STRUCTURES = {"plane": plane, "volume3": volume3, "symplectic4": symplectic4}


@pytest.fixture(params=sorted(STRUCTURES))
def structure(request) -> PrePlectic:
    return STRUCTURES[request.param]()


small_fracs = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def polynomials(draw, nvars: int, max_deg: int = 2, max_terms: int = 4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        mono = tuple(draw(st.lists(st.integers(0, max_deg), min_size=nvars, max_size=nvars)))
        terms[mono] = terms.get(mono, Fraction(0)) + draw(small_fracs)
    return Polynomial(nvars, terms)


@st.composite
def forms(draw, chart, degree: int, max_deg: int = 2):
    from itertools import combinations

    idx = list(combinations(range(chart.dim), degree))
    terms = {}
    for I in draw(st.lists(st.sampled_from(idx), max_size=3, unique=True)) if idx else []:
        terms[I] = draw(polynomials(chart.dim, max_deg, 3))
    return DifferentialForm(chart, degree, terms)


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not getattr(acc, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.RESULTS[n])
