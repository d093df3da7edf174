"""Published reference numbers that ``dpaudit tables`` compares against.

All use X = Z = [0, 1].
"""

# family, parameter, D, C, eps, C < 2/W^2
TABLE_I = [
    ("trunc-laplace", 0.5, 9.25, 4.63, 2.00, False),
    ("trunc-laplace", 0.8, 4.38, 2.19, 1.25, False),
    ("trunc-laplace", 1.0, 3.16, 1.58, 1.00, True),
    ("trunc-laplace", 2.0, 1.27, 0.64, 0.50, True),
    ("trunc-laplace", 5.0, 0.44, 0.22, 0.20, True),
    ("trunc-gaussian", 0.3, 7.06, 5.40, 5.56, False),
    ("trunc-gaussian", 0.5, 2.42, 2.03, 2.00, False),
    ("trunc-gaussian", 0.6, 1.62, 1.49, 1.39, True),
    ("trunc-gaussian", 1.0, 0.54, 0.70, 0.50, True),
    ("trunc-gaussian", 2.0, 0.13, 0.23, 0.13, True),
]

# LDP grid run, truncated Laplace B=1, gamma=.5, delta=.8: (x_i, x_j, estimate)
TABLE_II = {
    "B": 1.0, "gamma": 0.5, "delta": 0.8,
    "rows": [
        (0.00, 1.00, 1.00), (0.06, 0.49, 0.62), (0.11, 0.99, 0.96), (0.18, 0.48, 0.40),
        (0.23, 0.98, 0.89), (0.30, 0.47, 0.21), (0.36, 0.97, 0.80), (0.42, 0.46, 0.06),
        (0.48, 0.96, 0.66), (0.54, 0.44, 0.12), (0.60, 0.94, 0.52), (0.67, 0.43, 0.26),
        (0.72, 0.93, 0.34), (0.79, 0.42, 0.45), (0.84, 0.92, 0.14), (0.91, 0.41, 0.65),
        (0.97, 0.91, 0.10), (1.00, 0.00, 1.00),
    ],
}

# LDP sample sizes at delta=.8. Columns are keyed by eps = 1/B of a truncated
# Laplace; the printed C headers are rounded. Each cell: (n_TH, n_PR, m);
# n_TH None marks an undefined cell. digits = significant figures printed
# for n_TH (None when printed in full).
TABLE_III = {
    "delta": 0.8,
    "columns": {0.5: 0.63, 0.7: 0.97, 1.0: 1.58, 2.0: 4.62},
    "cells": {
        (1.0, 0.5): (9588, 56, 6, None), (1.0, 0.7): (25488, 112, 12, None),
        (1.0, 1.0): (2.4e5, 625, 46, 2), (1.0, 2.0): (None, 2600, 100, None),
        (0.5, 0.5): (75618, 262, 12, None), (0.5, 0.7): (1.9e5, 575, 23, 2),
        (0.5, 1.0): (1.9e6, 4000, 91, 2), (0.5, 2.0): (None, 15600, 200, None),
        (0.1, 0.5): (8.7e6, 25600, 56, 2), (0.1, 0.7): (2.4e7, 68000, 114, 2),
        (0.1, 1.0): (2.3e8, 4.6e5, 455, 2), (0.1, 2.0): (None, 1.5e6, 1000, None),
        (0.05, 0.5): (7e7, 20800, 112, 1), (0.05, 0.7): (1.9e8, 5e5, 228, 2),
        (0.05, 1.0): (1.9e9, 3.3e6, 909, 2), (0.05, 2.0): (None, 1.2e7, 2000, None),
    },
}

# n for gamma=.5, delta=.8, C=1.58 quoted in full alongside the grid run
LDP_GRID_RUN = {"n": 1863132, "k": 91, "D": 3.16, "C": 1.58, "gamma": 0.5, "delta": 0.8}

# LRDP grid run, truncated Laplace B=3.5, alpha=2, gamma=.5, delta=.9
TABLE_IV = {
    "B": 3.5, "alpha": 2.0, "gamma": 0.5, "delta": 0.9, "C": 0.33, "D": 0.66, "k": 39,
    "rows": [
        (0.00, 1.00, 0.027), (0.05, 0.87, 0.024), (0.11, 0.71, 0.017), (0.16, 0.55, 0.008),
        (0.21, 0.39, 0.002), (0.26, 0.24, 0.000), (0.32, 0.08, 0.002), (0.39, 0.95, 0.012),
        (0.45, 0.79, 0.007), (0.50, 0.63, 0.001), (0.55, 0.47, 0.000), (0.61, 0.32, 0.005),
        (0.66, 0.16, 0.013), (0.71, 0.00, 0.018), (0.79, 0.87, 0.000), (0.84, 0.71, 0.001),
        (0.89, 0.55, 0.006), (0.95, 0.39, 0.012), (1.00, 0.24, 0.021), (1.00, 0.00, 0.027),
    ],
}

# LRDP sample sizes, alpha=2, delta=.9. Column key: (B, printed C).
# Cell: (n_TH, n_PR, m).
TABLE_V = {
    "alpha": 2.0, "delta": 0.9,
    "columns": [(5.0, 0.013), (3.0, 0.036), (2.0, 0.081), (1.5, 0.142)],
    "cells": {
        (1.0, 5.0): (17794, 56, 3), (1.0, 3.0): (2.3e5, 56, 10),
        (1.0, 2.0): (6.7e6, 293, 41), (1.0, 1.5): (3.4e8, 1800, 195),
        (0.5, 5.0): (1.6e5, 56, 6), (0.5, 3.0): (2.1e6, 150, 20),
        (0.5, 2.0): (5.7e7, 650, 81), (0.5, 1.5): (3.0e9, 3962, 389),
        (0.1, 5.0): (2.5e7, 831, 29), (0.1, 3.0): (3.1e8, 2556, 97),
        (0.1, 2.0): (8.6e9, 9812, 403), (0.1, 1.5): (4.3e11, 45875, 1945),
    },
}
