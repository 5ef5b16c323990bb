"""Weight counting, Cayley-Sylvester dimensions and the Poincare series."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

# (number of variables - 1) of each summand, i.e. the binary form degree
FORM_DEGREES = (1, 3, 4)
MODULE_DIMENSION = sum(n + 1 for n in FORM_DEGREES)  # d = 11


class MultiDegree(NamedTuple):
    d_l: int
    d_c: int
    d_q: int

    @property
    def total(self) -> int:
        return self.d_l + self.d_c + self.d_q

    @property
    def top_weight(self) -> int:
        return self.d_l + 3 * self.d_c + 4 * self.d_q

    def admissible(self) -> bool:
        return self.top_weight % 2 == 0

    def __add__(self, other):
        return MultiDegree(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        return MultiDegree(*(a - b for a, b in zip(self, other)))

    def __le__(self, other):
        return all(a <= b for a, b in zip(self, other))


def multidegrees_of_total(i: int, admissible_only: bool = True) -> list[MultiDegree]:
    out = []
    for d_l in range(i + 1):
        for d_c in range(i + 1 - d_l):
            d = MultiDegree(d_l, d_c, i - d_l - d_c)
            if not admissible_only or d.admissible():
                out.append(d)
    return out


@lru_cache(maxsize=None)
def _index_sum_counts(n: int, deg: int) -> tuple[int, ...]:
    """counts[s] = number of degree-deg monomials in x_0..x_n with index sum s.

    These are the coefficients of the Gaussian binomial [n+deg choose deg]_q.
    """
    if deg == 0:
        return (1,)
    if n == 0:
        return (1,)
    # monomials with no x_n, plus x_n times degree-(deg-1) monomials
    without = _index_sum_counts(n - 1, deg)
    with_top = _index_sum_counts(n, deg - 1)
    size = n * deg + 1
    out = [0] * size
    for s, v in enumerate(without):
        out[s] += v
    for s, v in enumerate(with_top):
        out[s + n] += v
    return tuple(out)


@lru_cache(maxsize=None)
def _weight_table(n: int, deg: int) -> dict[int, int]:
    # weight of x_i is n - 2i, so a monomial with index sum s has weight n*deg - 2s
    return {n * deg - 2 * s: v for s, v in enumerate(_index_sum_counts(n, deg)) if v}


def weight_count(d: Sequence[int], w: int) -> int:
    """Number of coefficient monomials of multidegree d and weight w."""
    return _weight_count(tuple(d), w)


@lru_cache(maxsize=None)
def _pair_table(d_l: int, d_c: int) -> dict[int, int]:
    """Weight counts for monomials in the coefficients of l and c together."""
    tl = _weight_table(FORM_DEGREES[0], d_l)
    tc = _weight_table(FORM_DEGREES[1], d_c)
    out: dict[int, int] = {}
    for wl, nl in tl.items():
        for wc, nc in tc.items():
            out[wl + wc] = out.get(wl + wc, 0) + nl * nc
    return out


@lru_cache(maxsize=None)
def _weight_count(d: tuple, w: int) -> int:
    pair = _pair_table(d[0], d[1])
    tq = _weight_table(FORM_DEGREES[2], d[2])
    if len(pair) < len(tq):
        return sum(n * tq.get(w - wt, 0) for wt, n in pair.items())
    return sum(n * pair.get(w - wt, 0) for wt, n in tq.items())


def invariant_dimension(d: Sequence[int]) -> int:
    """Cayley-Sylvester: (weight-0 count) - (weight-2 count)."""
    return weight_count(tuple(d), 0) - weight_count(tuple(d), 2)


def poincare_coeffs(maxdeg: int) -> list[int]:
    if maxdeg < 0:
        raise ValueError("maxdeg must be nonnegative")
    return [sum(invariant_dimension(d) for d in multidegrees_of_total(i))
            for i in range(maxdeg + 1)]


class SeriesInconsistencyError(ValueError):
    """Truncated series times the denominator did not terminate."""


def _times_one_minus(coeffs: list[int], b: int) -> list[int]:
    return [c - (coeffs[i - b] if i >= b else 0) for i, c in enumerate(coeffs)]


def series_numerator(coeffs: Sequence[int], denominator_degrees: Sequence[int],
                     max_degree: int | None = None) -> list[int]:
    """a(t) = P(t) * prod(1 - t^b), truncated at len(coeffs) - 1.

    Coefficients above max_degree (default sum(b) - 1) must vanish; otherwise
    the denominators do not fit the series.
    """
    if max_degree is None:
        max_degree = sum(denominator_degrees) - 1
    if len(coeffs) <= max_degree + 1:
        raise ValueError(
            f"need more than {max_degree + 1} coefficients, got {len(coeffs)}")
    out = list(coeffs)
    for b in denominator_degrees:
        out = _times_one_minus(out, b)
    tail = [(i, c) for i, c in enumerate(out) if i > max_degree and c]
    if tail:
        i, c = tail[0]
        raise SeriesInconsistencyError(
            f"nonzero numerator coefficient {c} at degree {i} > {max_degree}")
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def series_expand(numerator: Sequence[int], denominator_degrees: Sequence[int],
                  maxdeg: int) -> list[int]:
    """Power series coefficients of numerator / prod(1 - t^b) up to maxdeg."""
    out = [numerator[i] if i < len(numerator) else 0 for i in range(maxdeg + 1)]
    for b in denominator_degrees:
        for i in range(b, maxdeg + 1):
            out[i] += out[i - b]
    return out


@dataclass(frozen=True)
class PoincareSeries:
    coeffs: tuple[int, ...]
    numerator: tuple[int, ...]
    denominator_degrees: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.coeffs):
            raise ValueError("Poincare coefficients must be nonnegative")
        expanded = series_expand(self.numerator, self.denominator_degrees,
                                 len(self.coeffs) - 1)
        if tuple(expanded) != self.coeffs:
            raise SeriesInconsistencyError("coeffs do not match numerator/denominator")


@dataclass(frozen=True)
class FunctionalEquationResult:
    holds: bool
    failing_index: int | None = None
    checked: list = field(default_factory=list)

    def __bool__(self):
        return self.holds


def functional_equation_check(numerator: Sequence[int], denominator_degrees: Sequence[int],
                              d: int = MODULE_DIMENSION) -> FunctionalEquationResult:
    """Check P(1/t) = (-1)^(d-3) t^d P(t) for P = a(t) / prod(1 - t^b).

    With r denominators this is t^(sum b - d) a(1/t) = (-1)^(d-3-r) a(t),
    i.e. a_k = sign * a_(s-k) with s = sum b - d.
    """
    s = sum(denominator_degrees) - d
    sign = -1 if (d - 3 - len(denominator_degrees)) % 2 else 1
    a = list(numerator)
    top = max(len(a) - 1, s)
    a += [0] * (top + 1 - len(a))
    checked = []
    for k in range(top + 1):
        mirror = a[s - k] if 0 <= s - k < len(a) else 0
        if a[k] != sign * mirror:
            return FunctionalEquationResult(False, k, checked)
        checked.append(k)
    return FunctionalEquationResult(True, None, checked)


def degree_bound(hsop_degrees: Sequence[int], d: int = MODULE_DIMENSION) -> int:
    """Largest degree of a secondary invariant: sum(b) - d."""
    if not hsop_degrees:
        raise ValueError("hsop degrees must be nonempty")
    return sum(hsop_degrees) - d


def poincare_series(maxdeg: int, denominator_degrees: Sequence[int]) -> PoincareSeries:
    """Dimensions up to maxdeg in rational form over the given denominators."""
    limit = max(maxdeg, sum(denominator_degrees) + 1)
    coeffs = poincare_coeffs(limit)
    num = series_numerator(coeffs, denominator_degrees)
    return PoincareSeries(tuple(coeffs[: maxdeg + 1]), tuple(num), tuple(denominator_degrees))
