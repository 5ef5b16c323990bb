"""Nullcone membership and the case analysis showing j1..j8 cut out the nullcone."""
from __future__ import annotations

import json
import random
from functools import reduce
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import sympy

from .linalg import rank_exact
from .named import named_invariants
from .polys import VAR_NAMES, CoeffPoly, format_fraction, pack, unpack

X, Y = sympy.symbols("x y")
SYMBOLS = sympy.symbols(VAR_NAMES)
_SYM_BY_NAME = dict(zip(VAR_NAMES, SYMBOLS))


@dataclass(frozen=True)
class ConcretePoint:
    """Numeric (l, c, q); c and q are given in the binomial convention."""

    l: tuple[Fraction, Fraction]
    c: tuple[Fraction, ...]
    q: tuple[Fraction, ...]

    def __post_init__(self):
        if (len(self.l), len(self.c), len(self.q)) != (2, 4, 5):
            raise ValueError("a point needs 2, 4 and 5 coefficients for l, c, q")
        for name in ("l", "c", "q"):
            object.__setattr__(self, name, tuple(Fraction(v) for v in getattr(self, name)))

    @classmethod
    def from_forms(cls, l, c, q) -> ConcretePoint:
        """Build from sympy binary forms in x, y (raw polynomials)."""
        def coeffs(f, n):
            poly = sympy.Poly(sympy.expand(f), X, Y) if f != 0 else None
            out = []
            for i in range(n + 1):
                raw = poly.coeff_monomial(X ** (n - i) * Y ** i) if poly is not None else 0
                out.append(Fraction(str(sympy.Rational(raw))) / comb(n, i))
            return out
        return cls(coeffs(l, 1), coeffs(c, 3), coeffs(q, 4))

    @classmethod
    def from_json(cls, data) -> ConcretePoint:
        try:
            return cls(tuple(Fraction(v) for v in data["l"]),
                       tuple(Fraction(v) for v in data["c"]),
                       tuple(Fraction(v) for v in data["q"]))
        except KeyError as exc:
            raise ValueError(f"point is missing key {exc.args[0]!r}") from None

    def to_json(self) -> dict:
        return {k: [format_fraction(v) for v in getattr(self, k)] for k in ("l", "c", "q")}

    def values(self) -> list[Fraction]:
        return list(self.l) + list(self.c) + list(self.q)

    def forms(self):
        """(l, c, q) as sympy polynomials in x, y."""
        def raw(vals, n):
            return sum(sympy.Rational(v.numerator, v.denominator) * comb(n, i)
                       * X ** (n - i) * Y ** i for i, v in enumerate(vals))
        return raw(self.l, 1), raw(self.c, 3), raw(self.q, 4)


def _divides(divisor, f) -> bool:
    if f == 0:
        return True
    _, r = sympy.div(f, divisor, X, Y, domain="QQ")
    return r == 0


def is_nullform(point: ConcretePoint) -> bool:
    """Hilbert-Mumford: a common root of multiplicity >= 1, 2, 3 in l, c, q."""
    l, c, q = point.forms()
    if l != 0:
        return _divides(l ** 2, c) and _divides(l ** 3, q)
    # repeated roots: roots of all first partials of c, all second partials of q
    conditions = []
    if c != 0:
        conditions += [sympy.diff(c, X), sympy.diff(c, Y)]
    if q != 0:
        conditions += [sympy.diff(q, X, 2), sympy.diff(q, X, Y), sympy.diff(q, Y, 2)]
    conditions = [f for f in conditions if f != 0]
    if not conditions:
        return True
    polys = [sympy.Poly(f, X, Y, domain="QQ") for f in conditions]
    g = reduce(lambda a, b: a.gcd(b), polys)
    return g.total_degree() >= 1


def evaluate_invariants(point: ConcretePoint) -> dict[str, Fraction]:
    vals = point.values()
    return {name: p.evaluate(vals) for name, p in named_invariants().all_polys().items()}


# -- conversions --------------------------------------------------------------

def to_sympy(poly: CoeffPoly):
    expr = 0
    for e, c in poly.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, x in zip(SYMBOLS, e):
            if x:
                term *= s ** x
        expr += term
    return expr


def from_sympy(expr) -> CoeffPoly:
    expr = sympy.sympify(expr)
    if expr == 0:
        return CoeffPoly()
    poly = sympy.Poly(sympy.expand(expr), *SYMBOLS)
    return CoeffPoly({pack(m): Fraction(str(c)) for m, c in poly.terms()})


def parse_poly(text: str) -> CoeffPoly:
    return from_sympy(sympy.sympify(text, locals=_SYM_BY_NAME))


# -- the case analysis ---------------------------------------------------------

@dataclass
class IdentityCheck:
    label: str
    claimed: str
    computed: CoeffPoly
    scalar: Fraction | None
    passed: bool

    def to_json(self) -> dict:
        return {"label": self.label, "claimed": self.claimed, "computed": str(self.computed),
                "scalar": None if self.scalar is None else format_fraction(self.scalar),
                "passed": self.passed}


@dataclass
class CaseReport:
    case: int
    checks: list[IdentityCheck] = field(default_factory=list)
    conclusion: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"case": self.case, "passed": self.passed, "conclusion": self.conclusion,
                "checks": [c.to_json() for c in self.checks]}


def _check(label: str, computed: CoeffPoly, claimed: str, exact: bool = False) -> IdentityCheck:
    """computed ~ claimed (nonzero scalar), or computed == claimed when exact."""
    target = parse_poly(claimed)
    if exact:
        ok = computed == target
        return IdentityCheck(label, claimed, computed, Fraction(1) if ok else None, ok)
    s = computed.proportionality(target)
    ok = s is not None and s != 0 and not target.is_zero()
    return IdentityCheck(label, claimed, computed, s, ok)


def _check_equal(label: str, computed: CoeffPoly, other: CoeffPoly, desc: str) -> IdentityCheck:
    ok = computed == other
    return IdentityCheck(label, desc, computed, Fraction(1) if ok else None, ok)


def _zero(names) -> dict:
    return {n: 0 for n in names}


def verify_case_identities() -> list[CaseReport]:
    N = named_invariants()
    k = N.k
    j = {n: g.poly for n, g in N.j.items()}
    B = ("b0", "b1", "b2", "b3", "b4")

    # case 1: q = 0
    r1 = CaseReport(1)
    q0 = _zero(B)
    jq = {n: p.subs(q0) for n, p in j.items()}
    for n in ("j1", "j4", "j5", "j7", "j8"):
        r1.checks.append(_check_equal(f"q=0: {n} vanishes", jq[n], CoeffPoly(), "0"))
    r1.checks.append(_check_equal("q=0: j2 = k4_1", jq["j2"], k["k4_1"], "k4_1"))
    r1.checks.append(_check_equal("q=0: j3 = k4_2 + k4_3", jq["j3"],
                                  k["k4_2"] + k["k4_3"], "k4_2 + k4_3"))
    r1.checks.append(_check_equal("q=0: j6 = k6_2", jq["j6"], k["k6_2"], "k6_2"))
    s = {"a2": 0, "a3": 0, **q0}
    r1.checks.append(_check("a2=a3=0: k6_2", k["k6_2"].subs(s), "a1**3*c1**3"))
    s["a1"] = 0
    r1.checks.append(_check("a1=0: k4_2 + k4_3", (k["k4_2"] + k["k4_3"]).subs(s),
                            "a0*c1**3"))
    r1.conclusion = "(l, c) is a nullform"

    # case 2: l = 0
    r2 = CaseReport(2)
    l0 = {"c0": 0, "c1": 0}
    jl = {n: p.subs(l0) for n, p in j.items()}
    r2.checks.append(_check_equal("l=0: j1 = k3", jl["j1"], k["k3"], "k3"))
    r2.checks.append(_check_equal("l=0: j2 = k4_1 + k2^2", jl["j2"],
                                  k["k4_1"] + k["k2"] ** 2, "k4_1 + k2^2"))
    r2.checks.append(_check_equal("l=0: j3 = -k2^2", jl["j3"], -(k["k2"] ** 2), "-k2^2"))
    r2.checks.append(_check_equal("l=0: j4 = k5_1 + k5_2", jl["j4"],
                                  k["k5_1"] + k["k5_2"], "k5_1 + k5_2"))
    r2.checks.append(_check_equal("l=0: j6 = k6_1", jl["j6"], k["k6_1"], "k6_1"))
    for n in ("j5", "j7"):
        r2.checks.append(_check_equal(f"l=0: {n} vanishes", jl[n], CoeffPoly(), "0"))
    r2.checks.append(_check_equal("l=0: j8 = k7", jl["j8"], k["k7"], "k7"))
    s = {**l0, "a2": 0, "a3": 0, "b0": 0, "b1": 0, "b2": 0}
    r2.checks.append(_check("a2=a3=b0=b1=b2=0: k6_1", k["k6_1"].subs(s), "a1**4*b3**2"))
    k5 = k["k5_1"] + k["k5_2"]
    sa = {**s, "a1": 0}
    r2.checks.append(_check("a1=0: k5_1 + k5_2", k5.subs(sa), "a0**2*b3**3"))
    r2.checks.append(_check("a1=0: k7", k["k7"].subs(sa), "a0**4*b4**3"))
    sb = {**s, "b3": 0}
    r2.checks.append(_check("b3=0: k5_1 + k5_2", k5.subs(sb), "a1**4*b4"))
    r2.checks.append(_check("b3=0: k7", k["k7"].subs(sb), "a0**4*b4**3"))
    r2.conclusion = "(c, q) is a nullform"

    # case 3: q, l nonzero with common root x = 0
    r3 = CaseReport(3)
    s = {"c1": 0, "b4": 0}
    r3.checks.append(_check("c1=b4=0: j7", j["j7"].subs(s), "b3**2*c0**4"))
    s["b3"] = 0
    r3.checks.append(_check("b3=0: j1", j["j1"].subs(s), "b2**3"))
    s["b2"] = 0
    j8 = j["j8"].subs(s)
    r3.checks.append(IdentityCheck("b2=0: a3 divides j8", "a3 | j8", j8, None,
                                   not j8.is_zero() and j8.subs({"a3": 0}).is_zero()))
    r3.checks.append(_check("a3=0: j3", j["j3"].subs({**s, "a3": 0}), "a2**2*c0**2"))
    s.update({"a3": 1, "c0": 1})
    r3.checks.append(_check("a3=c0=1: j3", j["j3"].subs(s), "3*a2**2 - 3*a1 - 2"))
    substitutions = [
        ("a1", "a2**2 - 2/3"),
        ("a0", "a2**3 - 2*a2 - 256/27*b1**2"),
        ("b0", "4*a2*b1 + 949/36*b1**3"),
    ]
    special = {n: p.subs(s) for n, p in j.items()}

    def advance(name, expr):
        val = parse_poly(expr)
        for n in special:
            special[n] = special[n].subs({name: val})

    advance(*substitutions[0])
    r3.checks.append(_check("a1 = a2^2 - 2/3: j6", special["j6"],
                            "27*a2**3 - 54*a2 - 27*a0 - 256*b1**2"))
    advance(*substitutions[1])
    r3.checks.append(_check("a0 = a2^3 - 2a2 - 256/27 b1^2: j4", special["j4"],
                            "36*b0 - 144*a2*b1 - 949*b1**3"))
    advance(*substitutions[2])
    r3.checks.append(_check("b0 = 4a2b1 + 949/36 b1^3: j2", special["j2"], "27 - 2048*b1**4"))
    r3.checks.append(_check("b0 = 4a2b1 + 949/36 b1^3: j8", special["j8"],
                            "b1**5*(33205248 - 4273351745*b1**4)"))
    b1 = _SYM_BY_NAME["b1"]
    g = sympy.gcd(sympy.Poly(to_sympy(special["j2"]), b1, domain="QQ"),
                  sympy.Poly(to_sympy(special["j8"]), b1, domain="QQ"))
    coprime = g.degree() == 0
    r3.checks.append(IdentityCheck("gcd(j2, j8) over Q", "1", CoeffPoly.constant(1) if coprime
                                   else from_sympy(g.as_expr()), None, coprime))
    r3.conclusion = "no solution" if coprime else f"common factor {g.as_expr()}"
    return [r1, r2, r3]


# -- algebraic independence --------------------------------------------------

@dataclass
class IndependenceReport:
    ranks: list[int]
    points: list[list[str]]
    target: int = 8

    @property
    def certified(self) -> bool:
        return any(r == self.target for r in self.ranks)

    @property
    def status(self) -> str:
        return "independent" if self.certified else "inconclusive"

    def to_json(self) -> dict:
        return {"ranks": self.ranks, "points": self.points, "status": self.status}


def independence_evidence(sample_count: int = 5, seed: int = 0,
                          names: Sequence[str] = tuple(f"j{i}" for i in range(1, 9))
                          ) -> IndependenceReport:
    """Rank of the Jacobian of j1..j8 at seeded random rational points."""
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    N = named_invariants()
    polys = [N.j[n].poly if n in N.j else N.k[n] for n in names]
    grads = [[p.diff(v) for v in VAR_NAMES[:11]] for p in polys]
    rng = random.Random(seed)
    ranks, pts = [], []
    for _ in range(sample_count):
        point = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(11)]
        rows = [{i: g.evaluate(point) for i, g in enumerate(row)} for row in grads]
        ranks.append(rank_exact(rows))
        pts.append([format_fraction(v) for v in point])
    return IndependenceReport(ranks, pts, len(names))


# -- sampling helpers --------------------------------------------------------------

def random_nullform(rng: random.Random, bound: int = 3) -> ConcretePoint:
    """A random point of the nullcone: l, c, q share a root of multiplicity 1, 2, 3.

    Each component is independently zero with small probability; when l is
    zero the shared root is still imposed on c and q.
    """
    def rnd():
        return sympy.Rational(rng.randint(-bound, bound), rng.randint(1, bound))

    r0, r1 = rnd(), rnd()
    if r0 == 0 and r1 == 0:
        r1 = 1
    L = r1 * X - r0 * Y

    def lin():
        return rnd() * X + rnd() * Y

    l = 0 if rng.random() < 0.2 else rnd() * L
    c = 0 if rng.random() < 0.1 else L ** 2 * lin()
    q = 0 if rng.random() < 0.1 else L ** 3 * lin()
    return ConcretePoint.from_forms(l, c, q)


def random_point(rng: random.Random, bound: int = 5) -> ConcretePoint:
    def rnd():
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    return ConcretePoint(tuple(rnd() for _ in range(2)), tuple(rnd() for _ in range(4)),
                         tuple(rnd() for _ in range(5)))


def load_point(path) -> ConcretePoint:
    with open(path) as fh:
        return ConcretePoint.from_json(json.load(fh))
