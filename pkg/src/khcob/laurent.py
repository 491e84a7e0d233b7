"""Laurent polynomials in one variable with integer coefficients."""

from __future__ import annotations

from typing import Iterable, Mapping


class LaurentPolynomial:
    """Sparse Laurent polynomial ``sum c_k q^k``; zero coefficients are never stored."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, int] = {}
        for k, c in items:
            acc[int(k)] = acc.get(int(k), 0) + c
        self._coeffs = {k: c for k, c in sorted(acc.items()) if c != 0}

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPolynomial":
        return cls({exponent: coeff})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    def __getitem__(self, k: int) -> int:
        return self._coeffs.get(k, 0)

    def __iter__(self):
        return iter(self._coeffs.items())

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self._coeffs == other._coeffs
        if isinstance(other, int):
            return self._coeffs == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __add__(self, other):
        other = _coerce(other)
        return LaurentPolynomial(list(self._coeffs.items()) + list(other._coeffs.items()))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        acc: dict[int, int] = {}
        for a, ca in self._coeffs.items():
            for b, cb in other._coeffs.items():
                acc[a + b] = acc.get(a + b, 0) + ca * cb
        return LaurentPolynomial(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are only defined for monomials")
        result = LaurentPolynomial({0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def substitute_power(self, factor: int) -> "LaurentPolynomial":
        """Return ``p(q**factor)``."""
        return LaurentPolynomial({k * factor: c for k, c in self._coeffs.items()})

    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for k, c in self._coeffs.items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "q" if k == 1 else f"q^{k}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPolynomial({self._coeffs!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPolynomial":
        """Inverse of :meth:`__str__`."""
        text = text.strip()
        if text == "0":
            return cls()
        tokens = text.replace(" - ", " + -").split(" + ")
        acc = []
        for tok in tokens:
            tok = tok.strip()
            sign = 1
            if tok.startswith("-"):
                sign, tok = -1, tok[1:]
            if "q" not in tok:
                acc.append((0, sign * int(tok)))
                continue
            coeff = 1
            if "*" in tok:
                c, tok = tok.split("*")
                coeff = int(c)
            exp = 1 if tok == "q" else int(tok[2:])
            acc.append((exp, sign * coeff))
        return cls(acc)


def _coerce(x) -> LaurentPolynomial:
    if isinstance(x, LaurentPolynomial):
        return x
    if isinstance(x, int):
        return LaurentPolynomial({0: x})
    raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPolynomial")
