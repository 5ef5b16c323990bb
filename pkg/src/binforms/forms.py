"""Binary forms with polynomial coefficients and the transvectant."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .polys import CoeffPoly, format_fraction


class TransvectantIndexError(ValueError):
    """Transvectant index outside 0..min(orders)."""


class HomogeneityError(ValueError):
    """Combining forms of different order or multidegree."""


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


@dataclass(frozen=True)
class Form:
    """sum_j coeffs[j] x^(order-j) y^j, raw coefficients (no binomials)."""

    order: int
    coeffs: tuple[CoeffPoly, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError(f"order {self.order} needs {self.order + 1} coefficients")

    @classmethod
    def zero(cls, order: int) -> Form:
        return cls(order, tuple(CoeffPoly() for _ in range(order + 1)))

    @classmethod
    def constant(cls, value) -> Form:
        value = value if isinstance(value, CoeffPoly) else CoeffPoly.constant(value)
        return cls(0, (value,))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    @property
    def value(self) -> CoeffPoly:
        """The polynomial of an order-0 form."""
        if self.order:
            raise ValueError("only order-0 forms have a scalar value")
        return self.coeffs[0]

    def multidegree(self):
        mds = set()
        for c in self.coeffs:
            mds |= c.multidegrees()
        if len(mds) > 1:
            raise HomogeneityError(f"form is not multihomogeneous: {sorted(mds)}")
        return mds.pop() if mds else None

    def total_degree(self) -> int | None:
        md = self.multidegree()
        return None if md is None else sum(md)

    def check_weight_balance(self, total_weight: int | None = None) -> bool:
        """Every term of coeffs[j] has weight total_weight - 2j.

        A covariant's leading coefficient has weight equal to its order, so
        total_weight defaults to the order."""
        if total_weight is None:
            total_weight = self.order
        for j, c in enumerate(self.coeffs):
            want = total_weight - 2 * j
            if any(w != want for w in c.weights()):
                return False
        return True

    def is_homogeneous(self) -> bool:
        try:
            self.multidegree()
        except HomogeneityError:
            return False
        return True

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: Form) -> Form:
        if self.order != other.order:
            raise HomogeneityError(f"cannot add forms of order {self.order} and {other.order}")
        out = Form(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))
        out.multidegree()
        return out

    def __neg__(self) -> Form:
        return Form(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def scale(self, s) -> Form:
        return Form(self.order, tuple(c * s for c in self.coeffs))

    def __mul__(self, other) -> Form:
        if not isinstance(other, Form):
            return self.scale(other)
        out = [CoeffPoly() for _ in range(self.order + other.order + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return Form(self.order + other.order, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Form:
        result = Form.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def derivative(self, nx: int, ny: int) -> Form:
        """d^(nx+ny) / dx^nx dy^ny."""
        m = self.order
        k = nx + ny
        if k > m:
            return Form.zero(0)
        out = []
        # x^(m-j) y^j  ->  falling(m-j, nx) falling(j, ny) x^(m-j-nx) y^(j-ny)
        for j in range(ny, m - nx + 1):
            out.append(self.coeffs[j] * (_falling(m - j, nx) * _falling(j, ny)))
        return Form(m - k, tuple(out))

    # -- substitution -----------------------------------------------------
    def substitute_xy(self, matrix) -> Form:
        """f(alpha x + beta y, gamma x + delta y) for matrix [[alpha, beta], [gamma, delta]].

        Matrix entries are rationals or CoeffPolys."""
        (al, be), (ga, de) = [[_poly(e) for e in row] for row in matrix]
        X = Form(1, (al, be))
        Y = Form(1, (ga, de))
        m = self.order
        xp = [Form.constant(1)]
        yp = [Form.constant(1)]
        for _ in range(m):
            xp.append(xp[-1] * X)
            yp.append(yp[-1] * Y)
        total = Form.zero(m)
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            # skip the multidegree check on partial sums
            term = (xp[m - j] * yp[j]) * c
            total = Form(m, tuple(a + b for a, b in zip(total.coeffs, term.coeffs)))
        return total

    def subs(self, mapping) -> Form:
        return Form(self.order, tuple(c.subs(mapping) for c in self.coeffs))

    def evaluate(self, values) -> tuple[Fraction, ...]:
        return tuple(c.evaluate(values) for c in self.coeffs)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> Form:
        return cls(data["order"], tuple(CoeffPoly.from_json(c) for c in data["coeffs"]))


def _poly(e) -> CoeffPoly:
    return e if isinstance(e, CoeffPoly) else CoeffPoly.constant(e)


@lru_cache(maxsize=None)
def _transvectant_scale(m: int, n: int, p: int) -> Fraction:
    return Fraction(factorial(m - p) * factorial(n - p), factorial(m) * factorial(n))


def transvectant(g: Form, h: Form, p: int) -> Form:
    """The p-th transvectant (g, h)_p of forms of orders m and n.

    ((m-p)!(n-p)!/(m!n!)) sum_i (-1)^i C(p,i) d^p g/dx^(p-i)dy^i * d^p h/dx^i dy^(p-i)
    """
    m, n = g.order, h.order
    if p < 0 or p > min(m, n):
        raise TransvectantIndexError(
            f"transvectant index {p} out of range for orders {m} and {n}")
    if p == 0:
        return g * h
    total = None
    for i in range(p + 1):
        term = g.derivative(p - i, i) * h.derivative(i, p - i)
        coeff = (-1) ** i * comb(p, i)
        term = term.scale(coeff)
        if total is None:
            total = term
        else:
            total = Form(total.order, tuple(a + b for a, b in zip(total.coeffs, term.coeffs)))
    return total.scale(_transvectant_scale(m, n, p))


class GenericForms:
    """l, c, q with the binomial coefficient convention."""

    def __init__(self):
        v = CoeffPoly.var
        self.l = Form(1, (v("c0"), v("c1")))
        self.c = Form(3, tuple(v(f"a{i}") * comb(3, i) for i in range(4)))
        self.q = Form(4, tuple(v(f"b{i}") * comb(4, i) for i in range(5)))

    def atoms(self) -> dict[str, Form]:
        return {"l": self.l, "c": self.c, "q": self.q}

    def coefficient_images(self, matrix) -> dict[str, CoeffPoly]:
        """New coefficient variables after composing each form with matrix.

        Returns the substitution {var: poly} such that v(matrix . (x, y))
        has the same shape as v with the variables replaced."""
        out = {}
        for name, form, n, prefix in (("l", self.l, 1, "c"), ("c", self.c, 3, "a"),
                                      ("q", self.q, 4, "b")):
            img = form.substitute_xy(matrix)
            for i in range(n + 1):
                out[f"{prefix}{i}"] = img.coeffs[i] * Fraction(1, comb(n, i))
        return out


GENERIC = GenericForms()


def _matrix_det(matrix) -> CoeffPoly:
    (a, b), (c, d) = [[_poly(e) for e in row] for row in matrix]
    return a * d - b * c


def _matrix_inverse(matrix):
    (a, b), (c, d) = [[_poly(e) for e in row] for row in matrix]
    return ((d, -b), (-c, a))


def apply_group_element(f: Form, matrix, mode: str = "covariant") -> Form:
    """Act by a determinant-one matrix A via (A.f)(v) = f(A^-1 v).

    mode "covariant" moves both the coefficient variables and (x, y), so
    covariants (and invariants) are fixed.  "variables" acts on x, y only,
    i.e. f(A^-1 (x, y)).  "coefficients" acts on the coefficient variables
    only, substituting the coefficients of v(A (x, y)).
    """
    if _matrix_det(matrix) != CoeffPoly.constant(1):
        raise ValueError("group element must have determinant 1")
    result = f
    if mode in ("covariant", "coefficients"):
        result = result.subs(GENERIC.coefficient_images(matrix))
    if mode in ("covariant", "variables"):
        result = result.substitute_xy(_matrix_inverse(matrix))
    if mode not in ("covariant", "variables", "coefficients"):
        raise ValueError(f"unknown mode {mode!r}")
    return result


__all__ = [
    "Form", "GenericForms", "GENERIC", "transvectant", "apply_group_element",
    "TransvectantIndexError", "HomogeneityError", "format_fraction",
]
