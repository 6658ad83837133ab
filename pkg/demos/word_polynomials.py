# Word polynomials: from exponent sequences to integer polynomials and back.
import numpy as np

from rileyslice import check_table1, star, word_matrix, word_polynomial
from rileyslice.words import F_NUM, enumerate_words, gamma, phi_matrix

# The word b a^s1 b^-1 a^s2 b ... evaluated at a = [[1,1],[0,1]] and
# b = [[0,-1/r],[r,0]] has commutator trace a polynomial in z = r^2.
for s in [(1,), (2,), (1, 1), (1, -1), (1, 1, 1)]:
    print(s, "->", word_polynomial(s))

# reference table (one entry is known not to match, see README)
for row in check_table1():
    print(f"{str(row['seq']):12s} {row['computed']:32s} {'ok' if row['match'] else 'differs: ' + row['expected']}")

# numeric check at a random point
z = 0.7 - 1.3j
s = (2, -1, 3)
print("polynomial:", complex(word_polynomial(s)(z)))
print("matrices:  ", gamma(F_NUM, word_matrix(s, phi_matrix(z))))

# substitution of words is composition of polynomials
s, t = (1, 1), (2,)
u = star(s, t)
print(u, word_polynomial(u))

# leading coefficients are perfect squares, degree is length + 1
leads = [(s, word_polynomial(s).leading) for s in enumerate_words(3, 2, limit=12)]
for s, lead in leads:
    print(s, lead, int(np.sqrt(lead)) ** 2 == lead)
