"""Reference values computed with mpmath at 40 significant digits and frozen here."""

import math

SQRT_PI = math.sqrt(math.pi)

TWO_K0_2 = 0.22778774549906687131
TWO_K0_2_SQUARED = 0.051887256999547659687
K0_2 = 0.11389387274953343565
E_K1_1 = 1.6361534862632582465
K1_1 = 0.60190723019723457474
K2_1 = 1.6248388986351774828
REDUCED_K0_2 = 0.090874162636898920189

# Z_rho^nu(u) values, keyed by (rho, nu, u)
Z = {
    (1.0, -1.0, 1.0): 0.27973176363304485457,  # 2 K_1(2)
    (1.0, 2.0, 0.25): 0.81241944931758874141,  # 0.5 K_2(1)
    (1.0, 1.0, 4.0): 0.049933995549073725882,  # 4 K_1(4)
    (2.0, -1.0, 0.5): 1.0127046955290814347,
    (2.0, 1.0, 200.0): 8.7034196402777926476e-29,
    (-1.0, -2.0, 1.0): 0.25,
    (2.5, -0.3, 3.0): 0.0146455902921441159,
    (0.5, 3.5, 10.0): 1080.8996192365097585,
}


def z_half(u):
    """Z_1^(1/2)(u) = sqrt(pi) exp(-2 sqrt(u))."""
    return SQRT_PI * math.exp(-2.0 * math.sqrt(u))
