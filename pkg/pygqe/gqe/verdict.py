from enum import Enum

class Verdict(Enum):
    Exists = "exists"
    FailsPositivity = "fails_positivity"
    NoKFound = "no_k_found"
    Inconclusive = "inconclusive"
