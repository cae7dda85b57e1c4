import random

import pytest

from rurlex.fields import QQ, PrimeField
from rurlex.groebner import quotient_structure
from rurlex.mpoly import parse_system


def system_from(lines, variables="x, y", field="QQ"):
    text = f"vars: {variables}\nfield: {field}\n" + "\n".join(lines) + "\n"
    return parse_system(text)


def structure_from(lines, variables="x, y", field="QQ"):
    return quotient_structure(system_from(lines, variables, field))


@pytest.fixture
def four_points():
    return structure_from(["x^2 - 1", "y^2 - 1"])


@pytest.fixture
def fat_origin():
    return structure_from(["x^2", "x*y", "y^2"])


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(params=[QQ, PrimeField(101), PrimeField(2147483647)], ids=["QQ", "F101", "F2^31-1"])
def field(request):
    return request.param
