from __future__ import annotations

import math

import pytest

from cpmm.errors import IndeterminateForm
from cpmm.extreal import ExtInterval, add, apply_affine, ext, fmt, invert_affine, mul, sub

INF = math.inf


def test_indeterminate_forms():
    with pytest.raises(IndeterminateForm):
        add(INF, -INF)
    with pytest.raises(IndeterminateForm):
        sub(INF, INF)
    with pytest.raises(IndeterminateForm):
        mul(0.0, -INF)
    with pytest.raises(IndeterminateForm):
        ext("nan")


def test_affine_on_infinities():
    assert apply_affine(-2.0, 3.0, INF) == -INF
    assert apply_affine(2.0, 3.0, 1.0) == 5.0
    assert invert_affine(2.0, 3.0, 5.0) == 1.0
    assert invert_affine(-1.0, 0.0, -INF) == INF
    with pytest.raises(IndeterminateForm):
        invert_affine(0.0, 1.0, 2.0)


def test_interval():
    iv = ExtInterval("-inf", 0)
    assert iv.length == INF and iv.contains(-1e300)
    assert ExtInterval(1, 3).length == 2
    assert str(ExtInterval(0, INF)) == "[0, inf]"
    with pytest.raises(ValueError):
        ExtInterval(2, 1)


def test_fmt():
    assert fmt(math.pi) == "3.14159265359"
    assert fmt(-INF) == "-inf"
