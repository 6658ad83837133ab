"""Words in Z * Z2 = <a, b | b^2 = 1>, exponent sequences and their word polynomials.

A good word ``b a^s1 b^-1 a^s2 b ... a^sm b^±1`` is identified with its
exponent sequence ``s = (s1, ..., sm)``.  Exponent sequences are plain
tuples of non-zero ints throughout the package.

Numeric helpers at the bottom build the concrete groups: the parabolic
``f = [[1, 1], [0, 1]]``, the order-two ``phi`` with ``gamma(f, phi) = z``,
and the involution ``psi`` sharing ``hfh^-1`` with an arbitrary ``h``.
"""

from __future__ import annotations

import cmath
import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .algebra import (
    IDENTITY,
    PHI,
    IntPolynomial,
    SymbolicMatrix2,
    f_power,
    gamma_of,
    matrix_inverse,
    to_z_polynomial,
)

Token = tuple[str, int]


def exponent_word(seq: Sequence[int]) -> tuple[int, ...]:
    """Validate and freeze an exponent sequence."""
    out = []
    for x in seq:
        if isinstance(x, bool) or int(x) != x:
            raise ValueError(f"exponents must be integers, got {x!r}")
        if x == 0:
            raise ValueError("exponent sequences may not contain 0")
        out.append(int(x))
    if not out:
        raise ValueError("exponent sequence must be non-empty")
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    tokens: tuple[Token, ...] = ()

    def __post_init__(self):
        for g, e in self.tokens:
            if g not in ("a", "b"):
                raise ValueError(f"unknown generator {g!r}")
        object.__setattr__(self, "tokens", tuple((g, int(e)) for g, e in self.tokens))

    @property
    def reduced(self) -> bool:
        return reduce(self) == self

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -e) for g, e in reversed(self.tokens)))

    def __add__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.tokens + other.tokens)

    def count(self, gen: str) -> int:
        """Number of letters of ``gen`` counted with multiplicity |exponent|."""
        return sum(abs(e) for g, e in self.tokens if g == gen)

    def __str__(self):
        return format_word(self)


_TOKEN_RE = re.compile(r"^(a)([+-]?\d+)$|^(b)$")


def parse_word(text: str) -> FreeWord:
    """Parse ``"b a1 b a-2 b"`` style text."""
    tokens = []
    for tok in text.split():
        m = _TOKEN_RE.match(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}; expected aN or b")
        if m.group(1):
            tokens.append(("a", int(m.group(2))))
        else:
            tokens.append(("b", 1))
    return FreeWord(tuple(tokens))


def format_word(w: FreeWord) -> str:
    parts = []
    for g, e in w.tokens:
        if g == "a":
            parts.append(f"a{e}")
        else:
            parts.append("b" if e == 1 else f"b{e}")
    return " ".join(parts)


def reduce(w: FreeWord, strip_boundary: bool = False) -> FreeWord:
    """Normal form in Z * Z2.

    With ``strip_boundary`` the leading and trailing powers of ``a`` are also
    dropped; they do not change ``gamma(f, w)``.
    """
    stack: list[list] = []
    for g, e in w.tokens:
        if g == "b":
            e %= 2
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            top = stack[-1]
            top[1] = (top[1] + e) % 2 if g == "b" else top[1] + e
            if top[1] == 0:
                stack.pop()
        else:
            stack.append([g, e])
    if strip_boundary:
        if stack and stack[0][0] == "a":
            stack.pop(0)
        if stack and stack[-1][0] == "a":
            stack.pop()
    return FreeWord(tuple((g, e) for g, e in stack))


def exponents_of(w: FreeWord) -> tuple[int, ...]:
    """Interior a-exponents of a word.

    Returns ``()`` for a bare ``b`` (identity polynomial ``z``).  Raises if the
    word has no ``b`` at all, since then ``gamma(f, w) = 0`` identically.
    """
    r = reduce(w, strip_boundary=True)
    if not r.tokens:
        raise ValueError(f"word {format_word(w)!r} reduces to a power of a; it has no b-letter")
    return tuple(e for g, e in r.tokens if g == "a")


def good_word(s: Sequence[int], alternating: bool = True) -> FreeWord:
    """``b a^s1 b^-1 a^s2 b ...``; with ``alternating=False`` every b has exponent +1."""
    tokens: list[Token] = [("b", 1)]
    sign = -1
    for e in s:
        tokens.append(("a", e))
        tokens.append(("b", sign if alternating else 1))
        if alternating:
            sign = -sign
    return FreeWord(tuple(tokens))


def symbolic_word_matrix(w: FreeWord) -> SymbolicMatrix2:
    """Evaluate a word at a -> F, b -> PHI over Z[s, 1/s]."""
    phi_inv = matrix_inverse(PHI)
    M = IDENTITY
    for g, e in w.tokens:
        if g == "a":
            M = M @ f_power(e)
        else:
            step = PHI if e > 0 else phi_inv
            for _ in range(abs(e)):
                M = M @ step
    return M


def free_word_polynomial(w: FreeWord) -> IntPolynomial:
    """``gamma(f, w)`` as an exact polynomial in ``z = gamma(f, phi)``."""
    return to_z_polynomial(gamma_of(symbolic_word_matrix(w)))


@lru_cache(maxsize=65536)
def _word_polynomial(s: tuple[int, ...]) -> IntPolynomial:
    if not s:
        return IntPolynomial((0, 1))
    try:
        return free_word_polynomial(good_word(s))
    except ValueError as exc:  # pragma: no cover - unreachable for valid input
        raise RuntimeError(f"internal error extracting word polynomial for {s}") from exc


def word_polynomial(s: Sequence[int]) -> IntPolynomial:
    """Integer polynomial p with p(gamma(f, phi)) = gamma(f, w_s).

    The empty sequence (bare ``b``) gives the identity polynomial ``z``.
    """
    s = tuple(s)
    if s:
        s = exponent_word(s)
    return _word_polynomial(s)


def reverse_negate(s: Sequence[int]) -> tuple[int, ...]:
    """Exponents of ``w_s^-1``; it has the same word polynomial as ``s``."""
    return tuple(-e for e in reversed(s))


def canonical(s: Sequence[int]) -> tuple[int, ...]:
    s = tuple(s)
    return max(s, reverse_negate(s))


def star(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """Semigroup product with ``word_polynomial(star(s, t)) == p_s ∘ p_t``.

    Every ``b^±1`` of the alternating word ``w_s`` is replaced by ``w_t^±1``
    and the result is reduced.  The output has ``mn + m + n`` entries.
    """
    s, t = exponent_word(s), exponent_word(t)
    wt = good_word(t)
    wt_inv = wt.inverse()
    tokens: list[Token] = []
    for g, e in good_word(s).tokens:
        if g == "a":
            tokens.append((g, e))
        else:
            tokens.extend((wt if e > 0 else wt_inv).tokens)
    out = exponents_of(FreeWord(tuple(tokens)))
    m, n = len(s), len(t)
    assert len(out) == m * n + m + n, "star product has unexpected length"
    return out


def star_power(s: Sequence[int], n: int) -> tuple[int, ...]:
    """``s * s * ... * s`` with n factors; its polynomial is the n-th iterate of p_s."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = exponent_word(s)
    for _ in range(n - 1):
        out = star(out, s)
    return out


def enumerate_words(
    max_len: int, max_exp: int, limit: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Exponent sequences in shortlex order (by length, then lexicographic).

    Entries are drawn from ``-max_exp..-1, 1..max_exp``.
    """
    if max_len < 1 or max_exp < 1:
        raise ValueError("max_len and max_exp must be >= 1")
    alphabet = [e for e in range(-max_exp, max_exp + 1) if e]
    count = 0
    for m in range(1, max_len + 1):
        for s in itertools.product(alphabet, repeat=m):
            if limit is not None and count >= limit:
                return
            yield s
            count += 1


def polynomial_classes(
    max_len: int, max_exp: int, limit: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Like :func:`enumerate_words` but skips ``s`` when ``reverse_negate(s)`` is preferred.

    ``w_s`` and ``w_s^-1`` give the same polynomial, so searches only need one.
    ``limit`` counts the emitted representatives.
    """
    count = 0
    for s in enumerate_words(max_len, max_exp):
        if limit is not None and count >= limit:
            return
        if canonical(s) == s:
            yield s
            count += 1


# ---------------------------------------------------------------------------
# numeric groups
# ---------------------------------------------------------------------------

F_NUM = np.array([[1, 1], [0, 1]], dtype=complex)


def phi_matrix(z: complex, branch: int = 1) -> np.ndarray:
    """``[[0, -1/r], [r, 0]]`` with ``r = ±sqrt(z)`` (principal root for branch=+1)."""
    r = cmath.sqrt(z) * (1 if branch >= 0 else -1)
    if r == 0:
        raise ValueError("phi is undefined at z = 0")
    return np.array([[0, -1 / r], [r, 0]], dtype=complex)


def inv2(M: np.ndarray) -> np.ndarray:
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    det = a * d - b * c
    return np.array([[d, -b], [-c, a]]) / det


def word_matrix(w: FreeWord | Sequence[int], b: np.ndarray, f: np.ndarray = F_NUM) -> np.ndarray:
    """Evaluate a word numerically with ``a -> f`` and ``b -> b``.

    An exponent sequence is expanded to its alternating good word first.
    """
    if not isinstance(w, FreeWord):
        w = good_word(w)
    b_inv = inv2(b)
    f_inv = inv2(f)
    M = np.eye(2, dtype=complex)
    for g, e in w.tokens:
        base = (f if e > 0 else f_inv) if g == "a" else (b if e > 0 else b_inv)
        M = M @ np.linalg.matrix_power(base, abs(e))
    return M


def gamma(A: np.ndarray, B: np.ndarray) -> complex:
    """tr(A B A^-1 B^-1) - 2."""
    return complex(np.trace(A @ B @ inv2(A) @ inv2(B)) - 2)


def beta(A: np.ndarray) -> complex:
    """tr^2 - 4 of the determinant-normalized matrix."""
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    return complex(np.trace(A) ** 2 / det - 4)


@dataclass(frozen=True)
class PrincipalCharacter:
    gamma: complex
    beta_a: complex
    beta_b: complex


def principal_character(A: np.ndarray, B: np.ndarray) -> PrincipalCharacter:
    return PrincipalCharacter(gamma(A, B), beta(A), beta(B))


@dataclass(frozen=True)
class ParabolicPair:
    """The two-parabolic group with f = [[1, 1], [0, 1]] and g = [[1, 0], [z, 1]]."""

    z: complex

    @property
    def f_mat(self) -> np.ndarray:
        return F_NUM.copy()

    @property
    def g_mat(self) -> np.ndarray:
        return np.array([[1, 0], [self.z, 1]], dtype=complex)

    @property
    def character(self) -> PrincipalCharacter:
        return principal_character(self.f_mat, self.g_mat)


def psi_involution(h) -> np.ndarray:
    """Order-two ``psi`` with ``psi f psi^-1 = h f h^-1`` and ``gamma(f, psi) = gamma(f, h)``.

    ``h`` must have determinant 1 and non-zero lower-left entry.  Entries may
    be ``fractions.Fraction`` for exact results (object array).
    """
    a, c = h[0][0], h[1][0]
    if c == 0:
        raise ValueError("lower-left entry of h is 0: <f, h> is reducible")
    y = -(1 + a * a) / c
    return np.array([[a, y], [c, -a]])


def _parabolic_frame(f: np.ndarray) -> np.ndarray:
    """alpha with det 1 and alpha^-1 (±f) alpha = [[1, 1], [0, 1]]."""
    f = np.asarray(f, dtype=complex)
    if abs(f[0, 0] * f[1, 1] - f[0, 1] * f[1, 0] - 1) > 1e-9:
        raise ValueError("f must have determinant 1")
    tr = np.trace(f)
    if abs(tr**2 - 4) > 1e-9:
        raise ValueError(f"f is not parabolic (trace {tr})")
    fs = f * (1 if tr.real >= 0 else -1)
    N = fs - np.eye(2)
    scale = np.abs(N).max()
    if scale < 1e-12:
        raise ValueError("f is the identity")
    w = np.array([1, 0], dtype=complex) if np.abs(N[:, 0]).max() >= np.abs(N[:, 1]).max() else np.array([0, 1], dtype=complex)
    v = N @ w
    alpha = np.column_stack([v, w])
    det = alpha[0, 0] * alpha[1, 1] - alpha[0, 1] * alpha[1, 0]
    return alpha / cmath.sqrt(det)


def z2_extend(f: np.ndarray, h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Replace h by an order-two psi with the same commutator parameter against f.

    f is conjugated to ``[[1, 1], [0, 1]]``, :func:`psi_involution` is applied
    and the result conjugated back.
    """
    f = np.asarray(f, dtype=complex)
    h = np.asarray(h, dtype=complex)
    alpha = _parabolic_frame(f)
    alpha_inv = inv2(alpha)
    h_norm = alpha_inv @ h @ alpha
    h_norm = h_norm / cmath.sqrt(h_norm[0, 0] * h_norm[1, 1] - h_norm[0, 1] * h_norm[1, 0])
    if abs(h_norm[1, 0]) <= 1e-12 * max(1.0, np.abs(h_norm).max()):
        raise ValueError("gamma(f, h) = 0: <f, h> is reducible")
    psi = alpha @ psi_involution(h_norm) @ alpha_inv
    return f, psi
