from enum import Enum

class Mode(Enum):
    # Scal - Scal_bar = k Δz
    Gqe = "gqe"
    # Scal - Scal_bar = k Δz + b (z + l)
    Generalized = "generalized"
