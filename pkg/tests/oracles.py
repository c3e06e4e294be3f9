"""Independent reference values and helpers shared by the tests."""

import math

GOLDEN_BETA = (1.0 + math.sqrt(5.0)) / 4.0
LOG_PHI = math.log((1.0 + math.sqrt(5.0)) / 2.0)

# (alpha, beta, gamma, slope via gamma, slope via theta)
REFERENCE_ROWS = [
    (0.3, 0.8, 0.20444, -0.36406, -0.36452),
    (0.49, 0.56, 0.30996, -0.40344, -0.4244),
    (0.5, 0.7, 0.27034, -0.64303, -0.64064),
    (0.5, 0.8, 0.26918, -0.73861, -0.73739),
    (0.6, 0.75, 0.35597, -0.76258, -0.76132),
    (0.6, 0.9, 0.47736, -0.4599, -0.45991),
]
SLOW_ROW = (0.49, 0.56)


def tent(alpha, beta, x):
    """Reference map evaluation, independent of the package kernels."""
    if x <= alpha:
        return beta * (x / alpha)
    return beta * ((1.0 - x) / (1.0 - alpha))


def itinerary(alpha, beta, n, c_tol):
    """Reference kneading prefix by direct iteration."""
    out = []
    x = alpha
    for _ in range(n):
        x = tent(alpha, beta, x)
        if abs(x - alpha) <= c_tol:
            out.append("C")
            break
        out.append("L" if x < alpha else "R")
    return "".join(out)


def theta_closed_form(alpha, beta, m):
    """Theta for the periodic word with constant block exponent ``m``."""
    r = -((1.0 - alpha) / beta) * (alpha / beta) ** m
    return 1.0 - beta + r / (1.0 - r)


