"""Sharp polynomials: bivariate, nonnegative, and equal to 1 on ``x + y = 1``."""

__version__ = "0.1.0"
