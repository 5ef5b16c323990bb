"""The twelve k-invariants and the eight parameters j1..j8."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .polys import CoeffPoly
from .recipe import evaluate_recipe

K_RECIPES = {
    "k2": "(q,q)_4",
    "k3": "((q,q)_2,q)_4",
    "k4_1": "((c,c)_2,(c,c)_2)_2",
    "k4_2": "(lc,lc)_4",
    "k4_3": "(c,l^3)_3",
    "k5_1": "((q,(q,q)_2)_1,c^2)_6",
    "k5_2": "((q,c^2)_2,c^2)_6",
    "k5_3": "(q,l^4)_4",
    "k6_1": "([(c,c)_2]^2,(q,q)_2)_4",
    "k6_2": "((lc,lc)_2,lc)_4",
    "k6_3": "((q,q)_2,l^4)_4",
    "k7": "(c^4,q^3)_12",
}

# j_i as signed sums of monomials in the k's: (coefficient, ((name, power), ...))
J_COMBINATIONS = {
    "j1": ((1, (("k3", 1),)),),
    "j2": ((1, (("k4_1", 1),)), (1, (("k2", 2),))),
    "j3": ((1, (("k4_2", 1),)), (1, (("k4_3", 1),)), (-1, (("k2", 2),))),
    "j4": ((1, (("k5_1", 1),)), (1, (("k5_2", 1),))),
    "j5": ((1, (("k5_3", 1),)),),
    "j6": ((1, (("k6_1", 1),)), (1, (("k6_2", 1),))),
    "j7": ((1, (("k6_3", 1),)),),
    "j8": ((1, (("k7", 1),)),),
}

HSOP_DEGREES = (3, 4, 4, 5, 5, 6, 6, 7)


@dataclass(frozen=True)
class GradedInvariant:
    """An invariant stored as its multihomogeneous pieces."""

    name: str
    pieces: tuple[tuple[tuple[int, int, int], CoeffPoly], ...]

    @property
    def poly(self) -> CoeffPoly:
        out = CoeffPoly()
        for _, p in self.pieces:
            out = out + p
        return out

    @property
    def degree(self) -> int:
        degs = {sum(md) for md, _ in self.pieces}
        if len(degs) != 1:
            raise ValueError(f"{self.name} is not homogeneous in the total degree")
        return degs.pop()

    @property
    def multidegrees(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(md for md, _ in self.pieces)

    def is_multihomogeneous(self) -> bool:
        return len(self.pieces) == 1


@dataclass(frozen=True)
class NamedInvariantSet:
    k: dict[str, CoeffPoly]
    j: dict[str, GradedInvariant]

    def all_polys(self) -> dict[str, CoeffPoly]:
        out = dict(self.k)
        out.update({name: g.poly for name, g in self.j.items()})
        return out


def _k_monomial(k: dict[str, CoeffPoly], factors) -> CoeffPoly:
    out = CoeffPoly.constant(1)
    for name, power in factors:
        out = out * k[name] ** power
    return out


@lru_cache(maxsize=1)
def named_invariants() -> NamedInvariantSet:
    k = {name: evaluate_recipe(r).value for name, r in K_RECIPES.items()}
    j = {}
    for name, combo in J_COMBINATIONS.items():
        pieces: dict = {}
        for coeff, factors in combo:
            term = _k_monomial(k, factors).scale(Fraction(coeff))
            md = term.multidegree()
            pieces[md] = pieces.get(md, CoeffPoly()) + term
        j[name] = GradedInvariant(name, tuple(sorted(pieces.items())))
    return NamedInvariantSet(k, j)
