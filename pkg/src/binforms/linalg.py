"""Monomial bases, the raising operator, kernels and modular ranks.

Vectors are sparse dicts column -> value.  Elimination keeps an echelon
basis keyed by pivot column (the leftmost nonzero); when two rows compete
for a pivot the sparser one keeps it, which bounds fill-in without making
the result depend on input order beyond determinism.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .forms import GENERIC
from .grading import MultiDegree, weight_count
from .polys import NCOEFF, VAR_WEIGHT, CoeffPoly, key_order, pack, unpack

DEFAULT_PRIMES = (2147483659, 2147483693)
BACKUP_PRIMES = (2147483713, 2147483743, 2147483777, 2147483783)
# (p - 1)^2 fits in int64 below this bound, so numpy elimination is exact
INT64_PRIME_LIMIT = 3037000499

_GROUPS = ((0, 2), (2, 6), (6, 11))  # variable slots of l, c, q


@lru_cache(maxsize=None)
def _group_monomials(lo: int, hi: int, deg: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    n = hi - lo
    out = []
    for comb in itertools.combinations_with_replacement(range(n), deg):
        e = [0] * n
        for i in comb:
            e[i] += 1
        w = sum(VAR_WEIGHT[lo + i] * x for i, x in enumerate(e))
        out.append((tuple(e), w))
    return tuple(out)


@dataclass(frozen=True)
class MonomialBasis:
    multidegree: MultiDegree
    weight: int
    keys: tuple[int, ...]
    index: dict = field(compare=False, repr=False)

    @property
    def monomials(self) -> list[tuple[int, ...]]:
        return [unpack(k, NCOEFF) for k in self.keys]

    def __len__(self) -> int:
        return len(self.keys)


@lru_cache(maxsize=512)
def monomial_basis(d: Sequence[int], w: int) -> MonomialBasis:
    """All monomials of multidegree d and weight w, in canonical order."""
    d = MultiDegree(*d)
    keys = []
    gl, gc, gq = (_group_monomials(lo, hi, k) for (lo, hi), k in zip(_GROUPS, d))
    q_by_weight: dict[int, list] = {}
    for e, wt in gq:
        q_by_weight.setdefault(wt, []).append(e)
    for el, wl in gl:
        for ec, wc in gc:
            for eq in q_by_weight.get(w - wl - wc, ()):
                keys.append(pack(el + ec + eq))
    keys.sort(key=key_order)
    keys = tuple(keys)
    assert len(keys) == weight_count(d, w)
    return MonomialBasis(d, w, keys, {k: i for i, k in enumerate(keys)})


# -- the infinitesimal unipotent action -----------------------------------

@lru_cache(maxsize=None)
def _derivation(direction: str) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Linear part of the coefficient substitution induced by a unipotent.

    "raising" comes from (x, y) -> (x + t y, y) and raises weight by 2;
    "lowering" from (x, y) -> (x, y + t x).  Entry i lists (j, m) with
    D(var_i) = sum m * var_j, read off the t-linear term of the substitution.
    """
    t = CoeffPoly.var("t")
    matrix = ((1, t), (0, 1)) if direction == "raising" else ((1, 0), (t, 1))
    images = GENERIC.coefficient_images(matrix)
    from .polys import VAR_NAMES, var_key
    tkey = var_key(VAR_NAMES.index("t"))
    out = []
    for name in VAR_NAMES[:NCOEFF]:
        lin = []
        for key, coeff in images[name].terms.items():
            if unpack(key)[-1] == 1:
                rest = key - tkey
                j = unpack(rest).index(1)
                if coeff.denominator != 1:
                    raise ValueError("non-integral derivation coefficient")
                lin.append((j, int(coeff)))
        out.append(tuple(sorted(lin)))
    return tuple(out)


def apply_derivation(poly: CoeffPoly, direction: str = "raising") -> CoeffPoly:
    """D(F) = sum_v dF/dv * D(v)."""
    der = _derivation(direction)
    out: dict[int, Fraction] = {}
    for key, coeff in poly.terms.items():
        e = unpack(key)
        for i in range(NCOEFF):
            if not e[i]:
                continue
            base = key - (1 << (8 * i))
            for j, m in der[i]:
                k = base + (1 << (8 * j))
                out[k] = out.get(k, 0) + coeff * e[i] * m
    return CoeffPoly({k: v for k, v in out.items() if v})


@dataclass(frozen=True)
class SparseMatrix:
    """rows x cols matrix as a tuple of sparse rows {col: value}."""

    nrows: int
    ncols: int
    rows: tuple[dict, ...]

    def __post_init__(self):
        for r in self.rows:
            for c, v in r.items():
                if not v:
                    raise ValueError("explicit zero in sparse matrix")
                if not 0 <= c < self.ncols:
                    raise ValueError("column out of range")

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for c, v in r.items():
                out[i][c] = v
        return out

    def transpose(self) -> SparseMatrix:
        cols = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for c, v in r.items():
                cols[c][i] = v
        return SparseMatrix(self.ncols, self.nrows, tuple(cols))


def operator_matrix(d: Sequence[int], w: int = 0, direction: str = "raising") -> SparseMatrix:
    """Row i is the image of the i-th weight-w monomial, in the target weight basis."""
    src = monomial_basis(tuple(d), w)
    tgt = monomial_basis(tuple(d), w + 2 if direction == "raising" else w - 2)
    rows = []
    for key in src.keys:
        img = apply_derivation(CoeffPoly._raw({key: Fraction(1)}), direction)
        rows.append({tgt.index[k]: int(v) for k, v in img.terms.items()})
    return SparseMatrix(len(src), len(tgt), tuple(rows))


def raising_matrix(d: Sequence[int]) -> SparseMatrix:
    """Weight-0 basis -> weight-2 basis; invariants are its left kernel."""
    return operator_matrix(d, 0, "raising")


# -- elimination ------------------------------------------------------------

class EchelonModP:
    """Incremental echelon basis over GF(p) with leftmost pivots."""

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        p = self.p
        row = {c: v % p for c, v in row.items() if v % p}
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                return row
            f = row[lead]
            for c, v in piv.items():
                nv = (row.get(c, 0) - f * v) % p
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        return row

    def add(self, row: dict[int, int]) -> bool:
        """Insert a row; True if it increased the rank."""
        p = self.p
        row = {c: v % p for c, v in row.items() if v % p}
        grew = False
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                inv = pow(row[lead], -1, p)
                self.pivots[lead] = {c: v * inv % p for c, v in row.items()}
                return True
            if len(row) < len(piv):
                # sparser row takes the pivot; keep reducing the old one
                inv = pow(row[lead], -1, p)
                self.pivots[lead] = {c: v * inv % p for c, v in row.items()}
                row = dict(piv)
                continue
            f = row[lead]
            for c, v in piv.items():
                nv = (row.get(c, 0) - f * v) % p
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        return grew


class EchelonQ:
    """Incremental echelon basis over Q (Fractions)."""

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: dict) -> bool:
        row = {c: Fraction(v) for c, v in row.items() if v}
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                inv = 1 / row[lead]
                self.pivots[lead] = {c: v * inv for c, v in row.items()}
                return True
            if len(row) < len(piv):
                inv = 1 / row[lead]
                self.pivots[lead] = {c: v * inv for c, v in row.items()}
                row = dict(piv)
                continue
            f = row[lead]
            for c, v in piv.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        return False

    def reduced(self) -> dict[int, dict[int, Fraction]]:
        """Reduced row echelon form: pivot columns cleared in every other row."""
        cols = sorted(self.pivots, reverse=True)
        done: dict[int, dict[int, Fraction]] = {}
        for lead in cols:
            row = dict(self.pivots[lead])
            for c in sorted(k for k in row if k != lead and k in done):
                f = row.get(c)
                if not f:
                    continue
                for cc, v in done[c].items():
                    nv = row.get(cc, 0) - f * v
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
            done[lead] = row
        return done


def rank_mod_p(rows: Iterable[dict], p: int) -> int:
    ech = EchelonModP(p)
    for r in rows:
        ech.add(r)
    return ech.rank


def rank_exact(rows: Iterable[dict]) -> int:
    ech = EchelonQ()
    for r in rows:
        ech.add(r)
    return ech.rank


def kernel_exact(matrix: SparseMatrix) -> list[dict[int, Fraction]]:
    """Reduced-echelon basis of the left kernel {x : x M = 0} over Q.

    Basis vector for free column f has a 1 at f and zeros at the other free
    columns; vectors are ordered by free column.
    """
    ech = EchelonQ()
    for r in matrix.transpose().rows:
        ech.add(r)
    rref = ech.reduced()
    free = [c for c in range(matrix.nrows) if c not in rref]
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for lead, row in rref.items():
            v = row.get(f)
            if v:
                vec[lead] = -v
        basis.append(vec)
    return basis


def invariant_basis(d: Sequence[int]) -> list[CoeffPoly]:
    """Reduced-echelon basis of the invariants of multidegree d."""
    d = MultiDegree(*d)
    basis = monomial_basis(d, 0)
    vecs = kernel_exact(raising_matrix(d))
    return [CoeffPoly._raw({basis.keys[i]: v for i, v in vec.items()}) for vec in vecs]


def coordinates(poly: CoeffPoly, basis: MonomialBasis) -> dict[int, Fraction]:
    out = {}
    for k, v in poly.terms.items():
        i = basis.index.get(k)
        if i is None:
            raise ValueError("polynomial has a term outside the monomial basis")
        out[i] = v
    return out


def _to_mod_p(row: dict[int, Fraction], p: int) -> dict[int, int]:
    return {c: v.numerator * pow(v.denominator, -1, p) % p for c, v in row.items()}


# -- rank certificates -------------------------------------------------------

@dataclass
class RankCertificate:
    primes: list[int]
    ranks: list[int]
    rank: int
    exact_rank: int | None = None
    note: str = ""

    @property
    def agreed(self) -> bool:
        return len(set(self.ranks)) == 1

    def to_json(self) -> dict:
        out = {"primes": self.primes, "ranks": self.ranks, "rank": self.rank}
        if self.exact_rank is not None:
            out["exact_rank"] = self.exact_rank
        if self.note:
            out["note"] = self.note
        return out


def certify_rank(rank_at, primes: Sequence[int] = DEFAULT_PRIMES,
                 backups: Sequence[int] = BACKUP_PRIMES) -> RankCertificate:
    """Run rank_at(p) over the primes; on disagreement add backup primes.

    Modular rank never exceeds the rational rank, so the agreed value is the
    maximum seen.
    """
    primes = list(primes)
    ranks = [rank_at(p) for p in primes]
    note = ""
    spare = [b for b in backups if b not in primes]
    if len(set(ranks)) > 1:
        note = f"primes disagreed on rank: {dict(zip(primes, ranks))}"
        extra = spare.pop(0)
        primes.append(extra)
        ranks.append(rank_at(extra))
        note += f"; added prime {extra}"
    return RankCertificate(primes, ranks, max(ranks), note=note)


def span_rank(vectors: Sequence[CoeffPoly], d: Sequence[int],
              primes: Sequence[int] = DEFAULT_PRIMES, exact: bool | None = None,
              exact_limit: int = 400) -> RankCertificate:
    """Rank of polynomials in the weight-0 monomial coordinates of d.

    exact=None runs the rational recomputation only when the coordinate
    matrix has at most exact_limit columns.
    """
    d = MultiDegree(*d)
    if not vectors:
        return RankCertificate(list(primes), [0] * len(primes), 0, exact_rank=0)
    basis = monomial_basis(d, 0)
    rows = [coordinates(v, basis) for v in vectors]
    cert = certify_rank(lambda p: rank_mod_p((_to_mod_p(r, p) for r in rows), p), primes)
    if exact or (exact is None and len(basis) <= exact_limit):
        cert.exact_rank = rank_exact(rows)
        if cert.exact_rank != cert.rank:
            cert.note = (cert.note + "; " if cert.note else "") + (
                f"modular rank {cert.rank} below exact rank {cert.exact_rank}")
            cert.rank = cert.exact_rank
    return cert


# -- dense modular helpers for the evaluation route ---------------------------

def _dtype(p: int):
    return np.int64 if p < INT64_PRIME_LIMIT else object


def dense_rank_mod_p(mat: np.ndarray, p: int) -> int:
    """Rank of a dense matrix over GF(p) by Gaussian elimination."""
    if mat.size == 0:
        return 0
    a = np.array(mat, dtype=_dtype(p)) % p
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        below = a[r + 1:, c].copy()
        rows = np.nonzero(below)[0]
        if rows.size:
            idx = rows + r + 1
            a[idx] = (a[idx] - (below[rows, None] * a[r][None, :]) % p) % p
        r += 1
    return r


class DenseEchelonModP:
    """Incremental dense echelon basis over GF(p) for evaluation vectors."""

    def __init__(self, p: int, ncols: int):
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=_dtype(p))
        self.leads: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.leads)

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        p = self.p
        v = np.array(vec, dtype=_dtype(p)) % p
        for lead, row in zip(self.leads, self.rows):
            f = v[lead]
            if f:
                v = (v - f * row % p) % p
        return v

    def add(self, vec) -> bool:
        v = self.reduce(vec)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        lead = int(nz[0])
        v = v * pow(int(v[lead]), -1, self.p) % self.p
        self.rows = np.vstack([self.rows, v[None, :]])
        self.leads.append(lead)
        return True

    def add_many(self, mat: np.ndarray) -> int:
        """Add rows of mat; returns how many increased the rank."""
        grown = 0
        if mat.shape[0] == 0:
            return 0
        # pre-reduce the whole block against the current basis, then eliminate
        p = self.p
        m = np.array(mat, dtype=_dtype(p)) % p
        for lead, row in zip(self.leads, self.rows):
            col = m[:, lead].copy()
            idx = np.nonzero(col)[0]
            if idx.size:
                m[idx] = (m[idx] - (col[idx, None] * row[None, :]) % p) % p
        for c in range(self.ncols):
            if self.rank >= self.ncols:
                break
            nz = np.nonzero(m[:, c])[0]
            if nz.size == 0:
                continue
            piv = int(nz[0])
            row = m[piv] * pow(int(m[piv, c]), -1, p) % p
            m = np.delete(m, piv, axis=0)
            col = m[:, c].copy()
            idx = np.nonzero(col)[0]
            if idx.size:
                m[idx] = (m[idx] - (col[idx, None] * row[None, :]) % p) % p
            # keep earlier pivots reduced form irrelevant; only leads matter
            self.rows = np.vstack([self.rows, row[None, :]])
            self.leads.append(c)
            grown += 1
        return grown
