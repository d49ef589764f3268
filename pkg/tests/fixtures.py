"""Reference values used by the tests."""

# Example with u = t^(sigma+1) sin x sin y, sigma = beta - 1, beta = 1.5, gamma = 2
SMOOTH_SIGMA_BETA15_GAMMA2 = {
    "N": [40, 80, 160, 320],
    "errors": [9.19e-3, 4.93e-3, 2.57e-3, 1.33e-3],
    "orders": [0.90, 0.94, 0.96],
}

# Low-regularity column, beta = 1.1, gamma = 1
SMOOTH_SIGMA_BETA11_GAMMA1 = {
    "N": [40, 80, 160, 320],
    "errors": [2.79e-1, 2.66e-1, 2.51e-1, 2.35e-1],
    "orders": [0.07, 0.09, 0.09],
}

# sigma = beta / 2
HALF_BETA_SIGMA_BETA15_GAMMA2 = {"N": [40, 80], "errors": [9.88e-4, 3.71e-4], "orders": [1.41]}
HALF_BETA_SIGMA_BETA11_GAMMA2 = {"N": [40, 80], "errors": [7.71e-3, 3.64e-3], "orders": [1.08]}

# Klein-Gordon problem, beta = 1.5, gamma = 2, M = 256
KLEIN_GORDON_BETA15_GAMMA2 = {
    "N": [40, 80, 160],
    "errors": [6.64e-3, 3.66e-3, 1.95e-3],
    "orders": [0.86, 0.91],
}

# (beta, sigma, gamma) -> min(gamma sigma, 3 - beta)
EXPECTED_ORDERS = [
    ((1.5, 0.5, 2), 1.0),
    ((1.1, 0.1, 3), 0.3),
    ((1.9, 0.95, 5), 1.1),
    ((1.5, 0.75, 3), 1.5),
    ((1.1, 0.55, 1), 0.55),
]

# Helmholtz check: (c I - 1/2 Delta_h) sin x sin y = (c + lambda_h / 2) sin x sin y
HELMHOLTZ_C = 3.0

# Kernel properties must hold to this relative margin
LEMMA_TOL = 1e-13
DCC_IDENTITY_TOL = 1e-11
PSD_TOL = 1e-10
