"""Independent reference solvers shared by the test modules."""
from functools import lru_cache
from itertools import combinations

import sympy as sp

from sharppoly.exactpoly import BivariatePoly

t = sp.symbols("t")


@lru_cache(maxsize=None)
def oracle(d, n):
    """Every support of ``n`` monomials of degree <= d (constant included), solved with sympy.

    No pruning rule is applied.  Returns the isolated members as sorted
    strings and the supports with a positive-dimensional solution set.
    """
    mons = [(j, s - j) for s in range(d + 1) for j in range(s, -1, -1)]
    cs = sp.symbols(f"c0:{n}")
    isolated, families = [], []
    for sup in combinations(mons, n):
        if max(j + k for j, k in sup) != d:
            continue
        expr = sp.expand(sum(c * t ** j * (1 - t) ** k for c, (j, k) in zip(cs, sup)) - 1)
        sol = sp.linsolve(sp.Poly(expr, t).all_coeffs(), cs)
        if not sol:
            continue
        (vals,) = sol
        if any(sp.sympify(v).free_symbols for v in vals):
            families.append(sup)
        elif all(v > 0 for v in vals):
            isolated.append(BivariatePoly.from_terms({m: sp.Rational(v) for m, v in zip(sup, vals)}))
    return sorted(map(str, isolated)), families
