"""Published reference values used by the checks.

The characteristic-0 matrices are the q^1, q^2, q^3 coefficients of the flat
extension seeded by minus the cup product with the fiber class, on the basis
(1, b). Entries are {(t_exp, h_exp): coefficient}.
"""

from fractions import Fraction as F

# the reference matrices are the flat extension of -(cup with a)
CHAR0_SEED_SIGN = -1

CHAR0_MATRICES = {
    1: (
        ({(-1, 2): F(-1)}, {}),
        ({(-2, 2): F(-2), (-1, 1): F(2)}, {(-1, 2): F(1)}),
    ),
    2: (
        ({(-3, 4): F(-3, 2), (-2, 3): F(1), (-1, 2): F(-1, 2)}, {(-2, 4): F(1)}),
        (
            {(-4, 4): F(-3, 2), (-3, 3): F(3), (-2, 2): F(-5, 2), (-1, 1): F(1)},
            {(-3, 4): F(3, 2), (-2, 3): F(-1), (-1, 2): F(1, 2)},
        ),
    ),
    3: (
        (
            {(-5, 6): F(-5, 6), (-4, 5): F(1), (-3, 4): F(-11, 6), (-2, 3): F(1), (-1, 2): F(-1, 3)},
            {(-4, 6): F(1), (-2, 4): F(1)},
        ),
        (
            {(-6, 6): F(-5, 9), (-5, 5): F(5, 3), (-4, 4): F(-29, 9), (-3, 3): F(11, 3),
             (-2, 2): F(-20, 9), (-1, 1): F(2, 3)},
            {(-5, 6): F(5, 6), (-4, 5): F(-1), (-3, 4): F(11, 6), (-2, 3): F(-1), (-1, 2): F(1, 3)},
        ),
    ),
}
