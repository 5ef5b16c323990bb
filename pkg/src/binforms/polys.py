"""Sparse polynomials over Q in the coefficient variables of (l, c, q).

Exponent vectors are packed into a single Python integer, 8 bits per
variable, so monomial multiplication is integer addition.  Exponents must
stay below 256, which is far beyond anything the invariant computations
reach (degree 29 at most).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

VAR_NAMES = ("c0", "c1", "a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3", "b4", "t")
NVARS = len(VAR_NAMES)
NCOEFF = 11  # the auxiliary parameter t is the last slot
VAR_INDEX = {name: i for i, name in enumerate(VAR_NAMES)}

# slot of MultiDegree each variable feeds: 0 -> l, 1 -> c, 2 -> q, None for t
VAR_SLOT = (0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 2, None)
VAR_WEIGHT = (1, -1, 3, 1, -1, -3, 4, 2, 0, -2, -4, 0)

_BITS = 8
_MASK = (1 << _BITS) - 1


def pack(exps: Iterable[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > _MASK:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (_BITS * i)
    return key


def unpack(key: int, n: int = NVARS) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(n))


def var_key(i: int) -> int:
    return 1 << (_BITS * i)


def key_multidegree(key: int) -> tuple[int, int, int]:
    e = unpack(key)
    return (e[0] + e[1], e[2] + e[3] + e[4] + e[5], e[6] + e[7] + e[8] + e[9] + e[10])


def key_weight(key: int) -> int:
    e = unpack(key)
    return sum(w * x for w, x in zip(VAR_WEIGHT, e))


def key_order(key: int):
    """Graded lexicographic sort key over the fixed variable order."""
    e = unpack(key)
    return (-sum(e), tuple(-x for x in e))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, eq=False)
class CoeffPoly:
    """Immutable sparse polynomial: packed exponent key -> nonzero Fraction."""

    terms: Mapping[int, Fraction]

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, v in terms.items():
                if v:
                    clean[k] = _as_fraction(v)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _raw(cls, terms: dict) -> CoeffPoly:
        # caller guarantees no zero values
        obj = cls.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def constant(cls, value) -> CoeffPoly:
        return cls({0: value})

    @classmethod
    def var(cls, name: str | int) -> CoeffPoly:
        i = VAR_INDEX[name] if isinstance(name, str) else name
        return cls._raw({var_key(i): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff=1) -> CoeffPoly:
        return cls({pack(exps): coeff})

    # -- inspection -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(k == 0 for k in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(0, Fraction(0))

    def items(self):
        """(exponent tuple, coefficient) pairs in canonical order."""
        for k in sorted(self.terms, key=key_order):
            yield unpack(k), self.terms[k]

    def multidegrees(self) -> set[tuple[int, int, int]]:
        return {key_multidegree(k) for k in self.terms}

    def multidegree(self) -> tuple[int, int, int] | None:
        """The common multidegree, or None for the zero polynomial.

        Raises ValueError when the terms do not share one multidegree.
        """
        mds = self.multidegrees()
        if not mds:
            return None
        if len(mds) > 1:
            raise ValueError(f"polynomial is not multihomogeneous: {sorted(mds)}")
        return mds.pop()

    def weights(self) -> set[int]:
        return {key_weight(k) for k in self.terms}

    def homogeneous_parts(self) -> dict[tuple[int, int, int], CoeffPoly]:
        parts: dict = {}
        for k, v in self.terms.items():
            parts.setdefault(key_multidegree(k), {})[k] = v
        return {md: CoeffPoly._raw(t) for md, t in sorted(parts.items())}

    def uses_variable(self, name: str) -> bool:
        i = VAR_INDEX[name]
        return any((k >> (_BITS * i)) & _MASK for k in self.terms)

    # -- arithmetic -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CoeffPoly.constant(other)
        if not isinstance(other, CoeffPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> CoeffPoly:
        return CoeffPoly._raw({k: -v for k, v in self.terms.items()})

    def __add__(self, other) -> CoeffPoly:
        if not isinstance(other, CoeffPoly):
            other = CoeffPoly.constant(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return CoeffPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> CoeffPoly:
        if not isinstance(other, CoeffPoly):
            other = CoeffPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> CoeffPoly:
        return (-self) + other

    def scale(self, s) -> CoeffPoly:
        s = _as_fraction(s)
        if not s:
            return CoeffPoly()
        return CoeffPoly._raw({k: v * s for k, v in self.terms.items()})

    def __mul__(self, other) -> CoeffPoly:
        if not isinstance(other, CoeffPoly):
            return self.scale(other)
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out: dict[int, Fraction] = {}
        get = out.get
        for ka, va in a.items():
            for kb, vb in b.items():
                k = ka + kb
                out[k] = get(k, 0) + va * vb
        return CoeffPoly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> CoeffPoly:
        if n < 0:
            raise ValueError("negative power")
        result = CoeffPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def diff(self, name: str | int) -> CoeffPoly:
        i = VAR_INDEX[name] if isinstance(name, str) else name
        shift = _BITS * i
        unit = 1 << shift
        out = {}
        for k, v in self.terms.items():
            e = (k >> shift) & _MASK
            if e:
                out[k - unit] = v * e
        return CoeffPoly._raw(out)

    def subs(self, mapping: Mapping[str, object]) -> CoeffPoly:
        """Substitute variables by CoeffPolys or rationals."""
        idx = {VAR_INDEX[n]: (v if isinstance(v, CoeffPoly) else CoeffPoly.constant(v))
               for n, v in mapping.items()}
        powers: dict[tuple[int, int], CoeffPoly] = {}

        def power(i, e):
            if (i, e) not in powers:
                powers[(i, e)] = idx[i] ** e
            return powers[(i, e)]

        # group terms by the part of the exponent that is kept, to share work
        result = CoeffPoly()
        groups: dict[int, dict[tuple, Fraction]] = {}
        for k, v in self.terms.items():
            kept = k
            subst = []
            for i in idx:
                e = (k >> (_BITS * i)) & _MASK
                if e:
                    kept -= e << (_BITS * i)
                    subst.append((i, e))
            groups.setdefault(tuple(subst), {})[kept] = v
        for subst, rest in groups.items():
            factor = CoeffPoly.constant(1)
            for i, e in subst:
                factor = factor * power(i, e)
            result = result + factor * CoeffPoly._raw(rest)
        return result

    def evaluate(self, values: Mapping[str, object] | Iterable) -> Fraction:
        """Evaluate at a point (all variables that occur must be given)."""
        if isinstance(values, Mapping):
            vals = [None] * NVARS
            for n, v in values.items():
                vals[VAR_INDEX[n]] = _as_fraction(v)
        else:
            vals = [_as_fraction(v) for v in values]
            vals += [None] * (NVARS - len(vals))
        total = Fraction(0)
        for k, c in self.terms.items():
            term = c
            for i, e in enumerate(unpack(k)):
                if e:
                    if vals[i] is None:
                        raise ValueError(f"no value for {VAR_NAMES[i]}")
                    term *= vals[i] ** e
            total += term
        return total

    def evaluate_mod(self, values, p: int) -> int:
        """Value modulo p at an integer point (denominators inverted mod p)."""
        total = 0
        for k, c in self.terms.items():
            term = c.numerator * pow(c.denominator, -1, p)
            for i, e in enumerate(unpack(k)):
                if e:
                    term = term * pow(values[i], e, p) % p
            total += term
        return total % p

    def proportionality(self, other: CoeffPoly) -> Fraction | None:
        """The scalar s with self == s*other, or None if there is none.

        Zero is proportional only to zero (s = 1 by convention)."""
        if not self.terms or not other.terms:
            return Fraction(1) if not self.terms and not other.terms else None
        if self.terms.keys() != other.terms.keys():
            return None
        it = iter(self.terms)
        k0 = next(it)
        s = self.terms[k0] / other.terms[k0]
        for k in it:
            if self.terms[k] != s * other.terms[k]:
                return None
        return s

    def content_normalized(self) -> CoeffPoly:
        """Scale to a primitive integer polynomial with positive leading term."""
        if not self.terms:
            return self
        from math import gcd, lcm

        den = 1
        for v in self.terms.values():
            den = lcm(den, v.denominator)
        nums = [int(v * den) for v in self.terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        lead = self.terms[min(self.terms, key=key_order)]
        s = Fraction(den, g) * (1 if lead > 0 else -1)
        return self.scale(s)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> list:
        return [[list(e[:NCOEFF]) if len(e) > NCOEFF and e[NCOEFF] == 0 else list(e),
                 format_fraction(c)] for e, c in self.items()]

    @classmethod
    def from_json(cls, data) -> CoeffPoly:
        return cls({pack(e): Fraction(c) for e, c in data})

    def __repr__(self) -> str:
        return f"CoeffPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                VAR_NAMES[i] + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def variables(*names: str) -> tuple[CoeffPoly, ...]:
    return tuple(CoeffPoly.var(n) for n in names)
