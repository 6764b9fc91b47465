"""Literature values the verification battery must reproduce.

Every entry is an externally published number (or matrix) for the objects
computed natively by this package: local-factor polynomial coefficients,
exact polytope volumes, eight-digit density constants, and the worksheet
inequality matrices for the dropped-coordinate polytopes.
"""

from __future__ import annotations

from fractions import Fraction

#: local-factor polynomial coefficients (c_0..c_v) for k = 2, 3, 4
LOCAL_POLY = {
    2: (1, 0, -1, 0),
    3: (1, 0, -9, 16, -9, 0, 1, 0),
    4: (1, 0, -55, 320, -891, 1408, -1155, 0, 1155, -1408, 891, -320, 55, 0, -1, 0),
}

#: published edge counts of the coprimality graphs
EDGE_COUNTS = {2: 1, 3: 9, 4: 55}

#: the k = 3 edge set under bit labeling (hand-derived from the
#: gcd/lcm decomposition n1 = a1*a3*a5*a7, n2 = a2*a3*a6*a7, n3 = a4*a5*a6*a7)
EDGES_K3 = frozenset(
    {(1, 2), (1, 4), (1, 6), (2, 4), (2, 5), (3, 4), (3, 5), (3, 6), (5, 6)}
)

#: independent-set counts of the k = 3 graph
ISM_K3 = (1, 7, 12, 6, 0, 0, 0, 0)

#: exact volumes, keyed by (kind, k)
VOLUMES = {
    ("D", 2): Fraction(1, 3),
    ("D", 3): Fraction(11, 3360),
    ("D", 4): Fraction(739, 387459072000),
    ("D_star", 3): Fraction(11, 480),
    ("D_star", 4): Fraction(739, 25830604800),
    ("D_star2", 3): Fraction(1, 16),
    ("D_star2", 4): Fraction(299, 479001600),
    ("D_star3", 3): Fraction(1, 4),
    ("T", 2): Fraction(1, 6),
    ("T", 3): Fraction(1, 5040),
    ("T", 4): Fraction(1, 1307674368000),
}

#: eight-digit published decimals (round-to-nearest assumed)
RHO_K3 = 0.04932167
C_K3 = 0.00016147

#: worksheet inequality matrices: constraint rows then unit rows
IEQS = {
    ("D_star", 3): [
        [1, -1, 0, -1, 0, -1, 0],
        [1, 0, -1, -1, 0, 0, -1],
        [1, 0, 0, 0, -1, -1, -1],
        [0, 1, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 1],
    ],
    ("D_star", 4): [
        [1, -1, 0, -1, 0, -1, 0, -1, 0, -1, 0, -1, 0, -1, 0],
        [1, 0, -1, -1, 0, 0, -1, -1, 0, 0, -1, -1, 0, 0, -1],
        [1, 0, 0, 0, -1, -1, -1, -1, 0, 0, 0, 0, -1, -1, -1],
        [1, 0, 0, 0, 0, 0, 0, 0, -1, -1, -1, -1, -1, -1, -1],
        [0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    ],
    ("D_star3", 3): [
        [1, -1, -1, 0],
        [1, -1, 0, -1],
        [1, 0, -1, -1],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
    ],
    ("D_star3", 4): [
        [1, -1, -1, 0, -1, -1, 0, -1, 0, -1, 0],
        [1, -1, 0, -1, -1, 0, -1, -1, 0, 0, -1],
        [1, 0, -1, -1, -1, 0, 0, 0, -1, -1, -1],
        [1, 0, 0, 0, 0, -1, -1, -1, -1, -1, -1],
        [0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    ],
}
