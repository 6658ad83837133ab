"""Exact integer polynomials, Laurent polynomials and symbolic 2x2 matrices.

Word polynomials are extracted by multiplying 2x2 matrices whose entries
live in the Laurent ring Z[s, 1/s], where s is a square root of the slice
parameter z.  Everything here uses Python integers, so coefficients never
overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def _strip_high(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial in z with integer coefficients, lowest degree first.

    The zero polynomial has an empty coefficient tuple and no degree.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        for c in self.coeffs:
            if isinstance(c, bool) or not isinstance(c, int):
                raise TypeError(f"coefficients must be int, got {type(c).__name__}")
        object.__setattr__(self, "coeffs", _strip_high(self.coeffs))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        return cls((0,) * degree + (coeff,))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if self.is_zero:
            raise ValueError("the zero polynomial has no degree")
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if self.is_zero:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other):
        return poly_add(self, other)

    def __sub__(self, other):
        return poly_add(self, -other)

    def __neg__(self):
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(tuple(other * c for c in self.coeffs))
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __call__(self, z):
        """Horner evaluation; works for int, Fraction, complex and numpy arrays."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' if mono else ''}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        sign, body = terms[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> dict:
        return {"var": "z", "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "IntPolynomial":
        if obj.get("var", "z") != "z":
            raise ValueError(f"expected variable 'z', got {obj.get('var')!r}")
        return cls(tuple(int(c) for c in obj["coeffs"]))


def poly_add(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    a, b = p.coeffs, q.coeffs
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return IntPolynomial(tuple(out))


def poly_mul(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    if p.is_zero or q.is_zero:
        return IntPolynomial()
    out = [0] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return IntPolynomial(tuple(out))


def poly_compose(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Return p(q(z)) exactly."""
    acc = IntPolynomial()
    for c in reversed(p.coeffs):
        acc = poly_add(poly_mul(acc, q), IntPolynomial((c,)))
    return acc


def poly_iterate(p: IntPolynomial, n: int) -> IntPolynomial:
    """n-fold composition p∘...∘p; n = 0 gives the identity z."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = IntPolynomial((0, 1))
    for _ in range(n):
        out = poly_compose(p, out)
    return out


@dataclass(frozen=True)
class LaurentPolynomial:
    """Laurent polynomial in s: sum of coeffs[k] * s**(min_exp + k)."""

    min_exp: int = 0
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        lo = 0
        while lo < len(coeffs) and coeffs[lo] == 0:
            lo += 1
        coeffs = list(_strip_high(coeffs[lo:]))
        min_exp = self.min_exp + lo if coeffs else 0
        object.__setattr__(self, "min_exp", min_exp)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def const(cls, c: int) -> "LaurentPolynomial":
        return cls(0, (c,))

    @classmethod
    def mono(cls, exp: int, c: int = 1) -> "LaurentPolynomial":
        return cls(exp, (c,))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def max_exp(self) -> int:
        return self.min_exp + len(self.coeffs) - 1

    def terms(self):
        for k, c in enumerate(self.coeffs):
            if c:
                yield self.min_exp + k, c

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo = min(self.min_exp, other.min_exp)
        hi = max(self.max_exp, other.max_exp)
        out = [0] * (hi - lo + 1)
        for e, c in self.terms():
            out[e - lo] += c
        for e, c in other.terms():
            out[e - lo] += c
        return LaurentPolynomial(lo, tuple(out))

    def __neg__(self):
        return LaurentPolynomial(self.min_exp, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        if self.is_zero or other.is_zero:
            return LaurentPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LaurentPolynomial(self.min_exp + other.min_exp, tuple(out))

    def __call__(self, s):
        return sum(c * s**e for e, c in self.terms())

    def __repr__(self):
        return f"LaurentPolynomial(min_exp={self.min_exp}, coeffs={list(self.coeffs)})"

    def to_json(self) -> dict:
        return {"var": "s", "min_exp": self.min_exp, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "LaurentPolynomial":
        return cls(int(obj["min_exp"]), tuple(int(c) for c in obj["coeffs"]))


_ZERO = LaurentPolynomial()
_ONE = LaurentPolynomial.const(1)


@dataclass(frozen=True)
class SymbolicMatrix2:
    """Row-major 2x2 matrix [[a, b], [c, d]] over Z[s, 1/s]."""

    a: LaurentPolynomial
    b: LaurentPolynomial
    c: LaurentPolynomial
    d: LaurentPolynomial

    @classmethod
    def from_ints(cls, rows: Sequence[Sequence[int]]) -> "SymbolicMatrix2":
        (a, b), (c, d) = rows
        return cls(*(LaurentPolynomial.const(x) for x in (a, b, c, d)))

    def det(self) -> LaurentPolynomial:
        return self.a * self.d - self.b * self.c

    def trace(self) -> LaurentPolynomial:
        return self.a + self.d

    def __matmul__(self, other: "SymbolicMatrix2") -> "SymbolicMatrix2":
        return matrix_mul(self, other)

    def __neg__(self):
        return SymbolicMatrix2(-self.a, -self.b, -self.c, -self.d)


IDENTITY = SymbolicMatrix2(_ONE, _ZERO, _ZERO, _ONE)

# parabolic generator f
F = SymbolicMatrix2.from_ints([[1, 1], [0, 1]])
# order-two generator phi with lower-left entry s, so gamma(F, PHI) = s^2 = z
PHI = SymbolicMatrix2(_ZERO, LaurentPolynomial.mono(-1, -1), LaurentPolynomial.mono(1), _ZERO)


def f_power(k: int) -> SymbolicMatrix2:
    return SymbolicMatrix2.from_ints([[1, k], [0, 1]])


def matrix_mul(M: SymbolicMatrix2, N: SymbolicMatrix2) -> SymbolicMatrix2:
    return SymbolicMatrix2(
        M.a * N.a + M.b * N.c,
        M.a * N.b + M.b * N.d,
        M.c * N.a + M.d * N.c,
        M.c * N.b + M.d * N.d,
    )


def matrix_inverse(M: SymbolicMatrix2) -> SymbolicMatrix2:
    if M.det() != _ONE:
        raise ValueError(f"matrix_inverse requires determinant 1, got {M.det()!r}")
    return SymbolicMatrix2(M.d, -M.b, -M.c, M.a)


def gamma_of(M: SymbolicMatrix2) -> LaurentPolynomial:
    """tr(F M F^-1 M^-1) - 2, the commutator parameter of the pair (F, M)."""
    Minv = matrix_inverse(M)
    comm = F @ M @ matrix_inverse(F) @ Minv
    return comm.trace() - LaurentPolynomial.const(2)


def to_z_polynomial(L: LaurentPolynomial) -> IntPolynomial:
    """Rewrite a Laurent polynomial in even non-negative powers of s as a polynomial in z = s^2."""
    if L.is_zero:
        return IntPolynomial()
    out = [0] * (L.max_exp // 2 + 1) if L.max_exp >= 0 else []
    for e, c in L.terms():
        if e < 0 or e % 2:
            raise ValueError(f"term s^{e} is not a non-negative even power; cannot rewrite in z")
        out[e // 2] = c
    return IntPolynomial(tuple(out))
