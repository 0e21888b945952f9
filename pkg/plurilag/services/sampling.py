"""Seeded random differential polynomials and forms for property checks."""

import random
from itertools import product
from typing import List, Optional

from sympy import QQ

from plurilag.algebra.bicomplex import BiForm
from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.jets import MultiIndex, make_monomial


def jet_indices(n: int, max_order: int, pure_x: bool = False) -> List[MultiIndex]:
    if pure_x:
        return [MultiIndex.pure_x(n, k) for k in range(max_order + 1)]
    found = [MultiIndex(e) for e in product(range(max_order + 1), repeat=n) if sum(e) <= max_order]
    return sorted(found, key=MultiIndex.sort_key)


def random_rational(rng: random.Random, bound: int = 5) -> "QQ.dtype":
    """Nonzero p/q with |p| <= bound, 1 <= q <= 3."""
    num = rng.choice([k for k in range(-bound, bound + 1) if k])
    return QQ(num, rng.randint(1, 3))


def random_poly(
    rng: random.Random,
    n: int,
    max_order: int = 3,
    max_degree: int = 3,
    terms: int = 4,
    pure_x: bool = False,
    constant: bool = True,
    exclude: Optional[List[MultiIndex]] = None,
) -> DiffPoly:
    """Random polynomial with up to `terms` monomials over jets of order <= max_order."""
    variables = [v for v in jet_indices(n, max_order, pure_x) if not exclude or v not in exclude]
    out = {}
    for _ in range(rng.randint(1, terms)):
        degree = rng.randint(0 if constant else 1, max_degree)
        jets = {}
        for _ in range(degree):
            var = rng.choice(variables)
            jets[var] = jets.get(var, 0) + 1
        mono = make_monomial(jets)
        out[mono] = out.get(mono, 0) + random_rational(rng)
    return DiffPoly(n, out)


def random_form(rng: random.Random, n: int, p: int, q: int, max_order: int = 2, terms: int = 2) -> BiForm:
    """Random (p,q)-form with polynomial coefficients; q is capped by N."""
    q = min(q, n)
    verticals = jet_indices(n, max_order)
    raw = []
    for _ in range(rng.randint(1, terms)):
        coeff = random_poly(rng, n, max_order=max_order, max_degree=2, terms=3)
        vertical = rng.sample(verticals, p)
        horizontal = rng.sample(range(1, n + 1), q)
        raw.append((coeff, [("v", v) for v in vertical] + [("h", j) for j in horizontal]))
    return BiForm.from_raw(n, (p, q), raw)
