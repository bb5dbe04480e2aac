import pytest

from errors import DomainError, ParseError
from wells.permutation import Permutation, parse_cycles, symmetric_group


def test_parse_transposition():
    assert parse_cycles("(12)", 3).image == (2, 1, 3)


def test_parse_empty_is_identity():
    assert parse_cycles("()", 4).is_identity()


def test_parse_with_explicit_fixed_point():
    assert parse_cycles("(123)(4)", 4).image == (2, 3, 1, 4)


def test_parse_ignores_whitespace():
    assert parse_cycles(" ( 1 2 ) ( 3 4 )", 4).image == (2, 1, 4, 3)


def test_parse_comma_separated_symbols():
    p = parse_cycles("(1,10)", 10)
    assert p(1) == 10 and p(10) == 1


@pytest.mark.parametrize(
    "text, position",
    [
        ("(12", 0),
        ("12)", 0),
        ("(1(2))", 0),
    ],
)
def test_parse_malformed_parentheses(text, position):
    with pytest.raises(ParseError) as info:
        parse_cycles(text, 3)
    assert info.value.position == position


def test_parse_repeated_symbol_reports_its_second_occurrence():
    with pytest.raises(ParseError) as info:
        parse_cycles("(12)(13)", 3)
    assert info.value.position == 5


def test_parse_out_of_range_symbol():
    with pytest.raises(ParseError):
        parse_cycles("(14)", 3)


def test_parse_error_is_a_domain_error():
    with pytest.raises(DomainError):
        parse_cycles("(1x)", 3)


def test_compose_applies_right_factor_first():
    p = parse_cycles("(12)", 3)
    q = parse_cycles("(23)", 3)
    assert (p * q)(2) == p(q(2)) == 1
    assert (p * q).image == (2, 3, 1)


def test_inverse_and_identity():
    for p in symmetric_group(4):
        assert (p * p.inverse()).is_identity()


def test_cycle_type_and_sign():
    p = Permutation.from_cycles([(1, 2, 3)], 4)
    assert p.cycle_type() == (3, 1)
    assert p.sign() == 1
    assert Permutation.transposition(4, 2, 4).sign() == -1


def test_cycle_string_round_trip():
    for p in symmetric_group(4):
        assert parse_cycles(p.to_cycle_string(), 4) == p


def test_symmetric_group_is_lexicographic():
    group = symmetric_group(3)
    assert len(group) == 6
    assert [p.image for p in group] == sorted(p.image for p in group)


def test_invalid_image_rejected():
    with pytest.raises(DomainError):
        Permutation((1, 1, 2))
