from fractions import Fraction

import pytest

from totquot.ratio import (
    digits_matched,
    ratio_from_json,
    ratio_to_json,
    round_sigfigs,
    truncate_decimal,
    truncate_sigfigs,
)


class TestTruncateDecimal:
    def test_exact_value(self):
        assert truncate_decimal(Fraction(33, 32), 5) == "1.03125"

    def test_truncates_toward_zero(self):
        # 2/3 = 0.666..., never rounds up to 0.667
        assert truncate_decimal(Fraction(2, 3), 3) == "0.666"

    def test_trailing_zeros_kept(self):
        assert truncate_decimal(Fraction(53, 50), 6) == "1.060000"

    def test_zero_digits(self):
        assert truncate_decimal(Fraction(7, 2), 0) == "3"

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            truncate_decimal(Fraction(-1, 2), 3)


class TestSigfigs:
    def test_truncate_strips_zeros(self):
        assert truncate_sigfigs(Fraction(53, 50), 6) == "1.06"

    def test_truncate_does_not_round(self):
        # 161/144 = 1.1180555...
        assert truncate_sigfigs(Fraction(161, 144), 6) == "1.11805"
        assert round_sigfigs(Fraction(161, 144), 6) == "1.11806"

    def test_round_half_goes_up(self):
        # 727/640 = 1.1359375
        assert round_sigfigs(Fraction(727, 640), 6) == "1.13594"

    def test_small_value(self):
        assert truncate_sigfigs(Fraction(1, 800), 3) == "0.00125"

    def test_integer_scale(self):
        assert truncate_sigfigs(Fraction(123456), 3) == "123000"

    def test_rollover(self):
        assert round_sigfigs(Fraction(9999, 10000), 3) == "1"


class TestDigitsMatched:
    def test_counts_shared_prefix_ignoring_point(self):
        value = Fraction("0.31415926535897921341")
        target = Fraction("0.31415926535897932384")
        # "0.314159265358979" agrees: 16 digit characters including the 0
        assert digits_matched(value, target) == 16

    def test_mismatch_in_integer_part(self):
        assert digits_matched(Fraction(2), Fraction(3)) == 0

    def test_identical_up_to_truncation(self):
        assert digits_matched(Fraction(1, 3), Fraction(1, 3), digits=10) == 11

    def test_point_must_align(self):
        # 10.5 vs 1.05: integer parts differ at the second character
        assert digits_matched(Fraction(21, 2), Fraction(21, 20)) == 1


def test_json_round_trip():
    value = Fraction(161, 144)
    assert ratio_from_json(ratio_to_json(value)) == value
    assert ratio_to_json(value) == {"num": "161", "den": "144"}
