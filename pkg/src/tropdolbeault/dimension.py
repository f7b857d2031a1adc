"""Dimensions in the lattice of non-negative integers extended by infinity."""

from __future__ import annotations

from typing import Union


class Infinite:
    """The single infinite dimension.  Absorbs addition and subtraction of finite values."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __str__(self):
        return "inf"

    def __add__(self, other):
        if isinstance(other, (int, Infinite)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Infinite):
            raise ArithmeticError("inf - inf is undefined")
        if isinstance(other, int):
            return self
        return NotImplemented

    def __rsub__(self, other):
        raise ArithmeticError("finite - inf is undefined")

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITE")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __reduce__(self):
        return (Infinite, ())


INFINITE = Infinite()

Dim = Union[int, Infinite]


def is_finite(d: Dim) -> bool:
    return d is not INFINITE


def dim_str(d: Dim) -> str:
    return str(d)


def dim_json(d: Dim):
    return "inf" if d is INFINITE else d
