"""Reference word polynomials for eight short words, with a checker."""

from __future__ import annotations

from .algebra import IntPolynomial
from .words import format_word, good_word, word_polynomial

# (exponent sequence, coefficients of the reference polynomial, lowest first)
REFERENCE_TABLE: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = (
    ((1,), (0, 0, 1)),  # z^2
    ((2,), (0, 0, 4)),  # 4 z^2
    ((1, 1), (0, 1, -2, 1)),  # z (1 - z)^2
    ((1, -1), (0, 1, 2, 1)),  # z (1 + z)^2
    ((1, 2), (0, 1, -4, 4)),  # z (1 - 2z)^2
    ((2, 2), (0, 1, -8, 16)),  # z (1 - 4z)^2
    ((1, 1, 1), (0, 0, 4, -4, 1)),  # z^2 (2 - z)^2
    ((3, -3, 3), (0, 0, 25, -180, 324)),  # z^2 (324 z^2 - 180 z + 25)
)


def check_table1() -> list[dict]:
    """Compare each reference entry with the computed word polynomial."""
    rows = []
    for s, coeffs in REFERENCE_TABLE:
        expected = IntPolynomial(coeffs)
        got = word_polynomial(s)
        rows.append(
            {
                "seq": list(s),
                "word": format_word(good_word(s)),
                "expected": str(expected),
                "computed": str(got),
                "match": got == expected,
            }
        )
    return rows
