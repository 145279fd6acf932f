import pytest

from pygqe.types import (
    Map,
    Real,
    String,
    Tuple
)

def test_markers_check_their_arity():
    with pytest.raises(TypeError):
        Map[String]
    assert Tuple[Real, Real, Real].__args__ == (Real, Real, Real)

def test_marker_names_spell_out_their_arguments():
    assert Map[String, int].__name__ == "Map[pygqe.types.String, int]"
