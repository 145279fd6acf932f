from fractions import Fraction

import pytest

from pygqe.admissible import (
    AdmissibleData,
    BaseFactor,
    baseQuantities,
    validate
)
from pygqe.gqe.profile import buildP

def sixData(x1, x2) -> AdmissibleData:
    """Two curve factors of opposite sign and no endpoint factors."""
    return AdmissibleData(
        d0 = 0,
        dinf = 0,
        factors = (
            BaseFactor(1, Fraction(-2), Fraction(x1)),
            BaseFactor(1, Fraction(2), Fraction(x2))
        )
    )

def sixPayload(x1: str, x2: str) -> dict:
    return {
        "d0": 0,
        "dinf": 0,
        "factors": [
            {"d": 1, "s": "-2", "x": x1},
            {"d": 1, "s": "2", "x": x2}
        ]
    }

def smallTemplate(d0: int, dinf: int) -> AdmissibleData:
    return AdmissibleData(d0, dinf, (BaseFactor(1, Fraction(2), Fraction(1, 2)), ))

def profileOf(data: AdmissibleData, mode = "gqe", b = None):
    validated = validate(data)
    return buildP(baseQuantities(validated), validated, mode, b)

@pytest.fixture
def half():
    """x1 = 1/2, x2 = -1/2: the CSC class with closed-form P and F."""
    return validate(sixData(Fraction(1, 2), Fraction(-1, 2)))

@pytest.fixture
def failing():
    return validate(sixData(Fraction(4, 5), Fraction(-4, 5)))

@pytest.fixture
def offLine():
    return validate(sixData(Fraction(9, 10), Fraction(-3, 4)))
