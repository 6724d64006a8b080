"""A tour of the exact algebra kernel.

Everything downstream rests on one data structure: sparse rational
combinations of PBW-ordered words in the matrix-unit generators e[a,b]@i.
This script walks through products, commutators, Poisson brackets, and the
classical limit, printing each identity as it is verified.
"""

from gaudin import (
    AlgebraSignature,
    Mode,
    classical_limit,
    commutator,
    diagonal_generators,
    poisson_bracket,
)

# One copy of gl(2), quantum flavor: the enveloping algebra U(gl_2).
sig = AlgebraSignature(rank=2, sites=1, mode=Mode.QUANTUM)
e11, e12, e21 = sig.gen(1, 1, 1), sig.gen(1, 1, 2), sig.gen(1, 2, 1)

print("PBW straightening moves out-of-order products back to normal form:")
print("  e12 * e11 =", e12 * e11)

print("\nThe gl(2) relation [e12, e21] = e11 - e22:")
print("  ", commutator(e12, e21))

print("\nSelf-brackets vanish exactly:")
print("  [e11, e11] =", commutator(e11, e11))

# Classical mode: same letters, commuting product, Lie-Poisson bracket.
csig = AlgebraSignature(rank=2, sites=2, mode=Mode.CLASSICAL)
x12, x21 = csig.gen(1, 1, 2), csig.gen(1, 2, 1)
x21_other_site = csig.gen(2, 2, 1)

print("\nLie-Poisson bracket on coordinates of one site:")
print("  {x12, x21} =", poisson_bracket(x12, x21))
print("Distinct sites Poisson-commute:")
print("  {x12@1, x21@2} =", poisson_bracket(x12, x21_other_site))

print("\nThe classical limit keeps the top-degree part with letters commuting:")
p = e11 * e12 - e12
print("  symbol(e11*e12 - e12) =", classical_limit(p))

print("\nDiagonal Cartan generators (components of total spin):")
qsig = AlgebraSignature(rank=2, sites=2, mode=Mode.QUANTUM)
for gen in diagonal_generators(qsig):
    print("  ", gen)
