"""Shared worked examples used across the test suite.

Each builder returns (monodromy, g1, g2) for one of the three bundled
fixtures; tests that need only the monodromy ignore the roots.
"""

import pytest

from necroots.harness import fixture_monodromy


def build_c8c3():
    return fixture_monodromy("c8c3")


def build_ex1():
    return fixture_monodromy("ex1")


def build_ex2():
    return fixture_monodromy("ex2-m4")


@pytest.fixture
def c8c3():
    return build_c8c3()


@pytest.fixture
def ex1():
    return build_ex1()


@pytest.fixture
def ex2():
    return build_ex2()
