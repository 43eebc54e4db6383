import pytest

from dunklriesz.config import parse_setup_text


def test_minimal_setup():
    ls = parse_setup_text("dimension = 2\nmultiplicities = 0.5, 1.0\n", "x.cfg")
    assert ls.setup.dimension == 2
    assert ls.setup.multiplicities == (0.5, 1.0)
    assert ls.label == "x"
    assert ls.spec.radius == 9.0  # dimension default


def test_overrides_and_comments():
    text = """
    # comment line
    dimension = 1
    multiplicities = 0.5   # trailing comment
    radius = 10.0
    outer_points = 9
    label = custom
    """
    ls = parse_setup_text(text)
    assert ls.label == "custom"
    assert ls.spec.radius == 10.0
    assert ls.spec.outer_points == 9


def test_missing_required_keys():
    with pytest.raises(ValueError, match="required"):
        parse_setup_text("dimension = 1\n")


def test_unknown_key_rejected():
    with pytest.raises(ValueError, match="unknown"):
        parse_setup_text("dimension = 1\nmultiplicities = 0.5\nbogus = 1\n")


def test_malformed_line():
    with pytest.raises(ValueError, match="expected"):
        parse_setup_text("dimension 1\n")


def test_grid_is_cached():
    ls = parse_setup_text("dimension = 1\nmultiplicities = 0.0\n")
    assert ls.grid() is ls.grid()
