"""Published reference values transcribed for regression tests."""

# the displayed determinant of W: (F1, F2, F3, q) -> coefficient
DET_W = {
    (7, 0, 0, 0): 1,
    (0, 7, 0, 7): -1, (1, 5, 0, 7): -7, (2, 3, 0, 7): -14, (4, 2, 1, 7): 7, (3, 1, 0, 7): -7, (5, 0, 1, 7): 7,
    (1, 4, 2, 14): 7, (2, 2, 2, 14): 7, (1, 1, 1, 14): -14, (3, 0, 2, 14): 14, (0, 3, 1, 14): -7, (0, 0, 0, 14): -1,
    (2, 1, 4, 21): -7, (0, 2, 3, 21): 14, (1, 0, 3, 21): 7,
    (0, 1, 5, 28): -7,
    (0, 0, 7, 35): 1,
}

# bracketed coefficients of the l=4 residue-2 cofactor, as (F1, F2, F3) exponents
CF13 = {
    (23, 0, 0): -532544, (22, 2, 0): 2822366, (21, 4, 0): -9375040, (20, 6, 0): 21207130,
    (19, 8, 0): -34041692, (18, 10, 0): 39647716, (17, 12, 0): -34010032, (16, 14, 0): 21762764,
    (15, 16, 0): -10688908, (14, 18, 0): 4393575, (13, 20, 0): -1624042, (12, 22, 0): 347825,
    (11, 24, 0): 133384, (10, 26, 0): -115269, (9, 28, 0): 17154, (8, 30, 0): 3047,
    (7, 32, 0): 36, (26, 0, 2): 54691, (29, 0, 4): -2174, (32, 0, 6): 15,
}
