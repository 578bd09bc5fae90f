import functools
import os
import sys

import hypothesis
import pytest

sys.path.insert(0, os.path.dirname(__file__))

hypothesis.settings.register_profile("default", max_examples=25, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@functools.lru_cache(maxsize=None)
def catalog_entry(label):
    from iwasawa import catalog

    return catalog.entry(label)


@functools.lru_cache(maxsize=None)
def reconstruction(label):
    from iwasawa import catalog
    from iwasawa.reconstruct import reconstruct_from_iwasawa

    return reconstruct_from_iwasawa(catalog.iwasawa_of(catalog_entry(label)))


@pytest.fixture
def h3():
    from iwasawa.algebra import from_structure

    return from_structure(["X", "Y", "Z"], {("X", "Y"): {"Z": 1}})


@pytest.fixture
def sl2():
    from iwasawa.algebra import from_structure

    return from_structure(["H", "E", "F"], {("H", "E"): {"E": 2}, ("H", "F"): {"F": -2}, ("E", "F"): {"H": 1}})


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
