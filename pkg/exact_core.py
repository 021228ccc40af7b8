"""
Exact Core
Rational angles (in units of pi) and dihedral groups D_N with integer arithmetic
"""
from fractions import Fraction
from functools import reduce
from math import gcd, lcm, pi
from typing import Iterable, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from errors import InvalidAngle


class Angle(BaseModel):
    """Rational multiple of pi, stored reduced as num/den"""
    model_config = ConfigDict(frozen=True)

    num: int
    den: int

    @model_validator(mode="before")
    @classmethod
    def _reduce(cls, data):
        if isinstance(data, dict) and "num" in data and "den" in data:
            num, den = int(data["num"]), int(data["den"])
            if num < 1 or den < 1:
                raise ValueError(f"angle {num}/{den} must have positive numerator and denominator")
            g = gcd(num, den)
            data = {"num": num // g, "den": den // g}
        return data

    @classmethod
    def parse(cls, text: str) -> "Angle":
        """Parse 'num/den' (or a bare integer)"""
        try:
            if "/" in text:
                num, den = text.strip().split("/", 1)
                return reduce_angle(int(num), int(den))
            return reduce_angle(int(text), 1)
        except ValueError as e:
            if isinstance(e, InvalidAngle):
                raise
            raise InvalidAngle(f"cannot parse angle '{text}'") from e

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def radians(self) -> float:
        return pi * self.num / self.den

    def times(self, k: int) -> "Angle":
        """Angle multiplied by a positive integer"""
        return reduce_angle(k * self.num, self.den)

    def __lt__(self, other: "Angle") -> bool:
        return self.value < other.value

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def reduce_angle(num: int, den: int) -> Angle:
    if num < 1 or den < 1:
        raise InvalidAngle(f"angle {num}/{den} must have positive numerator and denominator")
    return Angle(num=num, den=den)


class DihedralElement(BaseModel):
    """
    Element of D_N as (rot, flip).

    (k, False) is rotation by 2*pi*k/N; (k, True) is the reflection across the
    line at angle k*pi/N, i.e. rotation(k) composed with the reflection in the x-axis.
    """
    model_config = ConfigDict(frozen=True)

    rot: int
    flip: bool
    n: int

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data):
        if isinstance(data, dict) and "rot" in data and "n" in data:
            n = int(data["n"])
            if n < 1:
                raise ValueError("dihedral order must be positive")
            data = dict(data)
            data["rot"] = int(data["rot"]) % n
        return data

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        if other.n != self.n:
            raise ValueError(f"cannot compose elements of D_{self.n} and D_{other.n}")
        r2 = -other.rot if self.flip else other.rot
        return DihedralElement(rot=self.rot + r2, flip=self.flip != other.flip, n=self.n)

    def inverse(self) -> "DihedralElement":
        if self.flip:
            return self
        return DihedralElement(rot=-self.rot, flip=False, n=self.n)

    @property
    def is_identity(self) -> bool:
        return self.rot == 0 and not self.flip

    def matrix(self) -> np.ndarray:
        """Float 2x2 orthogonal matrix (derived view only)"""
        theta = 2 * pi * self.rot / self.n
        c, s = np.cos(theta), np.sin(theta)
        rotation = np.array([[c, -s], [s, c]])
        if self.flip:
            return rotation @ np.array([[1.0, 0.0], [0.0, -1.0]])
        return rotation

    def apply(self, vec) -> np.ndarray:
        return self.matrix() @ np.asarray(vec, dtype=float)

    def lift(self, big_n: int) -> "DihedralElement":
        """Same isometry viewed inside D_big_n (requires n | big_n)"""
        if big_n % self.n:
            raise ValueError(f"D_{self.n} is not a subgroup of D_{big_n}")
        return DihedralElement(rot=self.rot * (big_n // self.n), flip=self.flip, n=big_n)

    @classmethod
    def parse(cls, text: str, n: int) -> "DihedralElement":
        """Inverse of str(): 'r3' or 's3' in D_n"""
        if len(text) < 2 or text[0] not in "rs":
            raise ValueError(f"cannot parse dihedral element '{text}'")
        return cls(rot=int(text[1:]), flip=text[0] == "s", n=n)

    def sort_key(self) -> Tuple[bool, int]:
        return (self.flip, self.rot)

    def __str__(self) -> str:
        return f"{'s' if self.flip else 'r'}{self.rot}"


class DihedralGroup(BaseModel):
    """D_N with 2N elements"""
    model_config = ConfigDict(frozen=True)

    order_n: int

    @model_validator(mode="after")
    def _check_order(self):
        if self.order_n < 1:
            raise ValueError("dihedral order must be positive")
        return self

    def identity(self) -> DihedralElement:
        return DihedralElement(rot=0, flip=False, n=self.order_n)

    def rotation(self, k: int) -> DihedralElement:
        return DihedralElement(rot=k, flip=False, n=self.order_n)

    def reflection(self, k: int) -> DihedralElement:
        return reflection_in_direction(self, k)

    def elements(self) -> List[DihedralElement]:
        n = self.order_n
        return [DihedralElement(rot=r, flip=f, n=n) for f in (False, True) for r in range(n)]

    def __len__(self) -> int:
        return 2 * self.order_n

    def contains_minus_id(self) -> bool:
        return contains_minus_id(self)

    def minus_id(self) -> DihedralElement:
        if not contains_minus_id(self):
            raise ValueError(f"D_{self.order_n} does not contain -Id")
        return self.rotation(self.order_n // 2)

    def generate(self, generators: Iterable[DihedralElement]) -> List[DihedralElement]:
        """Subgroup generated by the given elements, sorted"""
        found = {self.identity()}
        frontier = [self.identity()]
        gens = list(generators)
        while frontier:
            g = frontier.pop()
            for s in gens:
                h = g * s
                if h not in found:
                    found.add(h)
                    frontier.append(h)
        return sorted(found, key=DihedralElement.sort_key)

    def __str__(self) -> str:
        return f"D_{self.order_n}"


def group_from_angles(angles: List[Angle]) -> DihedralGroup:
    if not angles:
        raise ValueError("need at least one angle")
    return DihedralGroup(order_n=reduce(lcm, (a.den for a in angles)))


def contains_minus_id(group: DihedralGroup) -> bool:
    # rotation by pi is (N/2, False), present exactly when N is even
    return group.order_n % 2 == 0


def reflection_in_direction(group: DihedralGroup, k: int) -> DihedralElement:
    if not 0 <= k < group.order_n:
        raise IndexError(f"reflection index {k} out of range for D_{group.order_n}")
    return DihedralElement(rot=k, flip=True, n=group.order_n)
