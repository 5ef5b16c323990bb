"""Published numbers for the invariants of V1 + V3 + V4, used by --expect-paper."""

POINCARE_COEFFS = (
    1, 0, 1, 2, 5, 10, 18, 31, 55, 92, 144, 223, 341, 499, 725, 1031, 1436, 1978, 2685,
    3592, 4761, 6235, 8078, 10379, 13226, 16698, 20937, 26069, 32230, 39614, 48401,
)

HSOP_DEGREES = (3, 4, 4, 5, 5, 6, 6, 7)

NUMERATOR = (
    1, 0, 1, 1, 3, 7, 12, 21, 32, 47, 58, 72, 83, 89, 94, 94, 89, 83, 72, 58, 47, 32, 21,
    12, 7, 3, 1, 1, 0, 1,
)

DEGREE_BOUND = 29

GENERATOR_DEGREES = {2: 1, 3: 2, 4: 4, 5: 8, 6: 10, 7: 13, 8: 11, 9: 10, 10: 3, 11: 1}
TOTAL_GENERATORS = 63
INVARIANT_GENERATORS = 20

# (order, degree in cubic) -> counts by degree in quartic, starting at 0
_ROWS = {
    (0, 0): (0, 0, 1, 1),
    (0, 2): (0, 0, 0, 1),
    (0, 4): (1, 1, 2, 3, 2, 1),
    (0, 6): (0, 0, 1, 3, 2, 1),
    (1, 1): (0, 1, 1),
    (1, 3): (0, 2, 3, 2, 1),
    (1, 5): (0, 1, 2, 2, 1),
    (2, 2): (1, 2, 2, 1),
    (2, 4): (0, 2, 2, 1),
    (3, 1): (1, 1, 1, 1),
    (3, 3): (1, 1, 1, 1),
    (4, 0): (0, 1, 1),
    (4, 2): (0, 1, 1, 1),
    (5, 1): (0, 1, 1),
    (6, 0): (0, 0, 0, 1),
}

GENERATOR_TABLE = {
    (order, cubic, quartic): n
    for (order, cubic), row in _ROWS.items()
    for quartic, n in enumerate(row)
    if n
}

# the cells where the nineteenth-century tables were wrong
CORRECTED_CELLS = {(1, 5, 4): 1, (2, 4, 3): 1}

# first layout: orders 0-1 with quartic degrees 0..5; second: orders 2-6, 0..3
TABLE_LAYOUTS = (
    {"orders": (0, 1), "quartic": tuple(range(6))},
    {"orders": (2, 3, 4, 5, 6), "quartic": tuple(range(4))},
)

SYLVESTER_EXAMPLES = {
    # multidegree: (dim, rank of reducible products, new generators)
    (2, 4, 3): (8, 7, 1),
    (1, 5, 4): (12, 11, 1),
}
