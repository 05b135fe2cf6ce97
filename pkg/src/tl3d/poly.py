"""Sparse polynomials in q (bubble weight) and k (handle weight) over Q."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator, Mapping, Union

Number = Union[int, Fraction]


class Poly2:
    """A polynomial sum c * q^a * k^b with exact rational coefficients.

    Instances are treated as immutable; ``terms`` maps ``(a, b)`` to a
    nonzero :class:`~fractions.Fraction`.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], Number] | None = None):
        clean = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError("negative exponent")
            c = Fraction(c)
            if c:
                clean[(a, b)] = c
        self.terms: dict[tuple[int, int], Fraction] = clean
        self._hash = None

    @classmethod
    def const(cls, c: Number) -> "Poly2":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, q_exp: int = 0, k_exp: int = 0, coeff: Number = 1) -> "Poly2":
        return cls({(q_exp, k_exp): coeff})

    @classmethod
    def _raw(cls, terms: dict) -> "Poly2":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly2.const(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other) -> "Poly2":
        other = _lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly2._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly2":
        return Poly2._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly2":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "Poly2":
        return _lift(other) - self

    def __mul__(self, other) -> "Poly2":
        other = _lift(other)
        out: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                m = (a1 + a2, b1 + b2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly2._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly2":
        out = Poly2.const(1)
        for _ in range(n):
            out = out * self
        return out

    def leading(self) -> tuple[tuple[int, int], Fraction]:
        """Leading term under lex order with q > k."""
        m = max(self.terms)
        return m, self.terms[m]

    def exact_div(self, other: "Poly2") -> "Poly2":
        """Quotient of an exact division; raises ``ArithmeticError`` otherwise."""
        other = _lift(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        (la, lb), lc = other.leading()
        rem = self
        quot: dict[tuple[int, int], Fraction] = {}
        while rem:
            (ra, rb), rc = rem.leading()
            if ra < la or rb < lb:
                raise ArithmeticError(f"{other} does not divide {self}")
            m = (ra - la, rb - lb)
            c = rc / lc
            quot[m] = c
            rem = rem - Poly2._raw({m: c}) * other
        return Poly2(quot)

    def evaluate(self, q_val: Number, k_val: Number) -> Fraction:
        q_val, k_val = Fraction(q_val), Fraction(k_val)
        return sum((c * q_val**a * k_val**b for (a, b), c in self.terms.items()), Fraction(0))

    def substitute_k(self, k_val: Number) -> "Poly2":
        """Specialise the handle weight only, keeping q symbolic."""
        k_val = Fraction(k_val)
        out = Poly2()
        for (a, b), c in self.terms.items():
            out = out + Poly2.monomial(a, 0, c * k_val**b)
        return out

    def is_associate(self, other: "Poly2") -> bool:
        """Equal up to a nonzero rational factor."""
        if not self or not other:
            return not self and not other
        r = self.leading()[1] / other.leading()[1]
        return self == other * r

    def monic(self) -> "Poly2":
        if not self:
            return self
        return self * (1 / self.leading()[1])

    def __iter__(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        return iter(sorted(self.terms.items(), key=_display_key))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in self:
            mono = "*".join(s for s in (_power("q", a), _power("k", b)) if s)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly2({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "Poly2":
        """Read the textual form produced by ``str``, e.g. ``"1 + 2*q^2*k - 1/2*q"``."""
        s = text.replace(" ", "").replace("κ", "k")
        if not s:
            raise ValueError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        out = Poly2()
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            coeff = Fraction(1)
            factors = body.split("*")
            mono_parts = []
            for f in factors:
                if re.fullmatch(r"\d+(/\d+)?", f):
                    coeff *= Fraction(f)
                else:
                    mono_parts.append(f)
            a = b = 0
            for f in mono_parts:
                m = re.fullmatch(r"([qk])(?:\^(\d+))?", f)
                if not m:
                    raise ValueError(f"cannot parse term {body!r} in {text!r}")
                e = int(m.group(2) or 1)
                if m.group(1) == "q":
                    a += e
                else:
                    b += e
            out = out + cls.monomial(a, b, -coeff if sign == "-" else coeff)
        return out

    def to_json(self) -> dict[str, str]:
        return {f"q^{a}*k^{b}": str(c) for (a, b), c in self}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "Poly2":
        terms: dict[tuple[int, int], Fraction] = {}
        for key, val in data.items():
            m = re.fullmatch(r"q\^(\d+)\*k\^(\d+)", key.replace(" ", ""))
            if not m:
                raise ValueError(f"bad monomial key {key!r}")
            terms[(int(m.group(1)), int(m.group(2)))] = Fraction(val)
        return cls(terms)


def _power(var: str, e: int) -> str:
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


def _display_key(item):
    (a, b), _ = item
    return (-(a + b), -a)


def _lift(x) -> Poly2:
    if isinstance(x, Poly2):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly2.const(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a polynomial")


ONE = Poly2.const(1)
ZERO = Poly2()
q = Poly2.monomial(1, 0)
k = Poly2.monomial(0, 1)


def specialise(p: Poly2, q_val: Number, k_val: Number) -> Fraction:
    return p.evaluate(q_val, k_val)
