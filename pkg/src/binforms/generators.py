"""Degree-by-degree search for a minimal generating set.

For each multidegree d the invariant space R_d (dimension from the
Cayley-Sylvester count) is compared with the span of products of generators
found so far; the shortfall is filled with reduced-echelon kernel vectors.

Ranks inside the pipeline are taken on evaluation vectors: every invariant
is represented by its values mod p at a fixed set of random points, so a
product of generators costs one elementwise product.  Evaluation can only
lose rank, and so can reduction mod p; a block's rank reaching the
Cayley-Sylvester dimension is therefore a certificate.  Whenever new
generators are needed the exact kernel basis is also evaluated, and it must
reach full rank, which certifies the points separate R_d.
"""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .grading import MultiDegree, invariant_dimension, multidegrees_of_total
from .linalg import (BACKUP_PRIMES, DEFAULT_PRIMES, DenseEchelonModP, EchelonModP,
                     RankCertificate, _dtype, _to_mod_p, coordinates, dense_rank_mod_p,
                     invariant_basis, monomial_basis, rank_exact, span_rank)
from .polys import NCOEFF, CoeffPoly, unpack

log = logging.getLogger(__name__)


class InconsistencyError(RuntimeError):
    """A rank exceeded the Cayley-Sylvester dimension, or points failed to separate."""


@dataclass(frozen=True)
class GeneratorRecord:
    multidegree: MultiDegree
    representative: CoeffPoly
    name: str = ""
    provenance: str = "new at this multidegree"

    @property
    def total_degree(self) -> int:
        return self.multidegree.total

    def to_json(self) -> dict:
        return {"name": self.name, "multidegree": list(self.multidegree),
                "representative": self.representative.to_json()}

    @classmethod
    def from_json(cls, data) -> GeneratorRecord:
        return cls(MultiDegree(*data["multidegree"]),
                   CoeffPoly.from_json(data["representative"]), data.get("name", ""))


@dataclass
class BlockResult:
    multidegree: MultiDegree
    dim: int
    rank: int
    new: int
    certificate: RankCertificate
    n_products: int = 0
    representatives: list = field(default_factory=list)

    def to_json(self) -> dict:
        d_l, d_c, d_q = self.multidegree
        return {"d_l": d_l, "d_c": d_c, "d_q": d_q, "dim": self.dim, "rank": self.rank,
                "new": self.new, "products": self.n_products,
                "rank_certificate": self.certificate.to_json()}


@dataclass
class GeneratorCertificate:
    degrees: list[dict]
    config: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(deg["d_i"] for deg in self.degrees)

    def d_table(self) -> dict[int, int]:
        return {deg["i"]: deg["d_i"] for deg in self.degrees}

    def blocks(self):
        for deg in self.degrees:
            yield from deg["blocks"]

    def to_json(self) -> dict:
        return {"config": self.config, "degrees": self.degrees, "total": self.total}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, data) -> GeneratorCertificate:
        return cls(data["degrees"], data.get("config", {}))


# -- products ---------------------------------------------------------------

def product_index_sets(d: Sequence[int], mdegs: Sequence[MultiDegree]):
    """Multisets (as nondecreasing index tuples) of at least two generators
    whose multidegrees sum to d."""
    d = MultiDegree(*d)
    mdegs = tuple(MultiDegree(*m) for m in mdegs)
    memo: dict = {}

    def rec(rest: MultiDegree, start: int) -> list[tuple[int, ...]]:
        key = (rest, start)
        if key in memo:
            return memo[key]
        if rest == (0, 0, 0):
            return [()]
        out = []
        for i in range(start, len(mdegs)):
            g = mdegs[i]
            if g <= rest:
                for tail in rec(rest - g, i):
                    out.append((i,) + tail)
        memo[key] = out
        return out

    return [s for s in rec(d, 0) if len(s) >= 2]


def reducible_products(d: Sequence[int], found: Sequence[GeneratorRecord]) -> list[CoeffPoly]:
    """All products of >= 2 found generators with multidegrees summing to d."""
    sets = product_index_sets(d, [g.multidegree for g in found])
    cache: dict[tuple[int, ...], CoeffPoly] = {}

    def prod(idx: tuple[int, ...]) -> CoeffPoly:
        if len(idx) == 1:
            return found[idx[0]].representative
        if idx not in cache:
            cache[idx] = prod(idx[:-1]) * found[idx[-1]].representative
        return cache[idx]

    return [prod(s) for s in sets]


def new_generator_count(d: Sequence[int], found: Sequence[GeneratorRecord],
                        primes: Sequence[int] = DEFAULT_PRIMES, pivot: str = "first",
                        exact: bool | None = None):
    """(dim, rank, new_count, representatives) by the monomial-coordinate route."""
    d = MultiDegree(*d)
    dim = invariant_dimension(d)
    products = reducible_products(d, found)
    cert = span_rank(products, d, primes, exact=exact)
    if cert.rank > dim:
        raise InconsistencyError(f"reducible rank {cert.rank} exceeds dimension {dim} at {d}")
    new = dim - cert.rank
    reps = []
    if new:
        basis = monomial_basis(d, 0)
        p = primes[0]
        ech = EchelonModP(p)
        for v in products:
            ech.add(_to_mod_p(coordinates(v, basis), p))
        kernel = invariant_basis(d)
        if pivot == "last":
            kernel = kernel[::-1]
        for vec in kernel:
            if ech.add(_to_mod_p(coordinates(vec, basis), p)):
                reps.append(vec)
            if len(reps) == new:
                break
        if len(reps) != new:
            raise InconsistencyError(f"kernel does not complete the span at {d}")
    return dim, cert.rank, new, reps


def exact_reducible_rank(d: Sequence[int], found: Sequence[GeneratorRecord]) -> int:
    basis = monomial_basis(tuple(d), 0)
    return rank_exact(coordinates(v, basis) for v in reducible_products(d, found))


# -- evaluation context ---------------------------------------------------------

@dataclass(frozen=True)
class EvalPoints:
    p: int
    values: np.ndarray  # shape (n_points, 11), entries in [1, p)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def make_points(primes: Sequence[int], n_points: int, seed: int) -> dict[int, EvalPoints]:
    seqs = np.random.SeedSequence(seed).spawn(len(primes))
    out = {}
    for p, s in zip(primes, seqs):
        rng = np.random.Generator(np.random.PCG64(s))
        vals = rng.integers(1, p, size=(n_points, NCOEFF), dtype=np.int64)
        out[p] = EvalPoints(p, vals.astype(_dtype(p)))
    return out


def evaluate_mod(poly: CoeffPoly, pts: EvalPoints) -> np.ndarray:
    """Values of poly mod p at every point."""
    p = pts.p
    n = pts.n
    dtype = _dtype(p)
    powers: dict[tuple[int, int], np.ndarray] = {}

    def power(i: int, e: int) -> np.ndarray:
        key = (i, e)
        if key not in powers:
            if e == 1:
                powers[key] = pts.values[:, i] % p
            else:
                powers[key] = power(i, e - 1) * power(i, 1) % p
        return powers[key]

    total = np.zeros(n, dtype=dtype)
    for key, c in poly.terms.items():
        coeff = c.numerator % p * pow(c.denominator, -1, p) % p
        term = np.full(n, coeff, dtype=dtype)
        for i, e in enumerate(unpack(key, NCOEFF)):
            if e:
                term = term * power(i, e) % p
        total = (total + term) % p
    return total


def iter_product_sets(d: Sequence[int], mdegs: Sequence[MultiDegree]):
    """Lazy depth-first version of product_index_sets (same order)."""
    d = MultiDegree(*d)
    mdegs = tuple(MultiDegree(*m) for m in mdegs)

    @lru_cache(maxsize=None)
    def feasible(rest: MultiDegree, start: int) -> bool:
        if rest == (0, 0, 0):
            return True
        return any(mdegs[i] <= rest and feasible(rest - mdegs[i], i)
                   for i in range(start, len(mdegs)))

    def rec(rest, start, prefix):
        if rest == (0, 0, 0):
            if len(prefix) >= 2:
                yield prefix
            return
        for i in range(start, len(mdegs)):
            g = mdegs[i]
            if g <= rest and feasible(rest - g, i):
                yield from rec(rest - g, i, prefix + (i,))

    yield from rec(d, 0, ())


def _product_echelon(p: int, vals, sets, dim: int, ncols: int):
    """Echelon basis of the product evaluation vectors, stopping at full rank."""
    ech = DenseEchelonModP(p, ncols)
    chunk = []
    used = 0
    size = max(2 * dim, 16)
    for s in sets:
        v = vals[s[0]]
        for i in s[1:]:
            v = v * vals[i] % p
        chunk.append(v)
        used += 1
        if len(chunk) >= size:
            ech.add_many(np.vstack(chunk))
            chunk = []
            if ech.rank >= dim:
                break
    if chunk and ech.rank < dim:
        ech.add_many(np.vstack(chunk))
    return ech, used


def _block_task(args):
    (d, sets, mdegs, gen_values, primes, points, pivot, exact_products) = args
    d = MultiDegree(*d)
    dim = invariant_dimension(d)
    echs = {}
    used = 0
    for p in primes:
        source = sets if sets is not None else iter_product_sets(d, mdegs)
        echs[p], n = _product_echelon(p, gen_values[p], source, dim, points[p].n)
        used = max(used, n)
    n_products = len(sets) if sets is not None else used

    ranks = [echs[p].rank for p in primes]
    cert = RankCertificate(list(primes), ranks, max(ranks))
    if len(set(ranks)) > 1:
        cert.note = f"primes disagreed on rank: {dict(zip(primes, ranks))}"
    if exact_products is not None:
        cert.exact_rank = rank_exact(
            coordinates(v, monomial_basis(d, 0)) for v in exact_products)
        if cert.exact_rank != cert.rank:
            cert.note += f"; evaluation rank {cert.rank} vs exact rank {cert.exact_rank}"
    rank = cert.rank
    if rank > dim or (cert.exact_rank or 0) > dim:
        raise InconsistencyError(f"reducible rank {rank} exceeds dimension {dim} at {tuple(d)}")
    new = dim - rank
    reps = []
    rep_values = {p: [] for p in primes}
    if new:
        kernel = invariant_basis(d)
        if pivot == "last":
            kernel = kernel[::-1]
        kvals = {p: [evaluate_mod(v, points[p]) for v in kernel] for p in primes}
        for p in primes:
            if dense_rank_mod_p(np.vstack(kvals[p]), p) != dim:
                raise InconsistencyError(
                    f"evaluation points do not separate invariants at {tuple(d)} mod {p}; "
                    "increase n_points")
        good = [p for p, r in zip(primes, ranks) if r == rank]
        p0 = good[0]
        chosen = []
        for idx, v in enumerate(kvals[p0]):
            if echs[p0].add(v):
                chosen.append(idx)
            if len(chosen) == new:
                break
        if len(chosen) != new or echs[p0].rank != dim:
            raise InconsistencyError(f"kernel failed to complete the span at {tuple(d)}")
        for p in good[1:]:
            for i in chosen:
                echs[p].add(kvals[p][i])
            if echs[p].rank != dim:
                raise InconsistencyError(
                    f"representatives do not complete the span mod {p} at {tuple(d)}")
        reps = [kernel[i] for i in chosen]
        rep_values = {p: [kvals[p][i] for i in chosen] for p in primes}
    return BlockResult(d, dim, rank, new, cert, n_products, reps), rep_values


# -- the pipeline ---------------------------------------------------------------

@dataclass
class PipelineConfig:
    max_degree: int = 14
    primes: tuple[int, ...] = DEFAULT_PRIMES
    seed: int = 0
    jobs: int = 1
    n_points: int | None = None
    pivot: str = "first"
    exact_upto: int = 0
    lazy_products: bool | None = None  # default: lazy above degree 14
    checkpoint_dir: str | None = None

    def points_needed(self) -> int:
        if self.n_points is not None:
            return self.n_points
        top = max(invariant_dimension(d) for i in range(2, self.max_degree + 1)
                  for d in multidegrees_of_total(i))
        return top + 8

    def validate(self):
        if self.max_degree < 2:
            raise ValueError("max_degree must be at least 2")
        if len(set(self.primes)) != len(self.primes) or not self.primes:
            raise ValueError("primes must be distinct and nonempty")
        if any(p <= 2 ** 31 for p in self.primes):
            raise ValueError("primes must exceed 2^31")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.pivot not in ("first", "last"):
            raise ValueError("pivot must be 'first' or 'last'")

    def fingerprint(self) -> dict:
        # an automatic point count grows with max_degree; it is left out so a
        # run can resume to a higher degree (values are recomputed from the
        # stored representatives, and each block certifies its own points)
        return {"primes": list(self.primes), "seed": self.seed,
                "n_points": self.n_points, "pivot": self.pivot,
                "exact_upto": self.exact_upto, "lazy_products": self.lazy_products}


@dataclass
class PipelineResult:
    certificate: GeneratorCertificate
    generators: list[GeneratorRecord]
    blocks: list[BlockResult]


def _checkpoint_path(directory: str, i: int) -> Path:
    return Path(directory) / f"degree_{i:02d}.json"


def _write_checkpoint(directory, i, entry, gens, fingerprint):
    Path(directory).mkdir(parents=True, exist_ok=True)
    data = {"i": i, "fingerprint": fingerprint, "entry": entry,
            "generators": [g.to_json() for g in gens]}
    path = _checkpoint_path(directory, i)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(data, sort_keys=True))
    os.replace(tmp, path)


def _read_checkpoint(directory, i, fingerprint):
    path = _checkpoint_path(directory, i)
    if not path.exists():
        return None
    data = json.loads(path.read_text())
    if data.get("fingerprint") != fingerprint:
        log.warning("checkpoint %s has a different configuration; ignoring", path)
        return None
    return data


def run_pipeline(max_total_degree: int | None = None, config: PipelineConfig | None = None,
                 progress=None) -> PipelineResult:
    """Search all admissible multidegrees of total degree 2..max_total_degree."""
    config = config or PipelineConfig()
    if max_total_degree is not None:
        config.max_degree = max_total_degree
    config.validate()
    primes = tuple(config.primes)
    points = make_points(primes, config.points_needed(), config.seed)
    fingerprint = config.fingerprint()

    found: list[GeneratorRecord] = []
    values: dict[int, list[np.ndarray]] = {p: [] for p in primes}
    degrees: list[dict] = []
    all_blocks: list[BlockResult] = []

    pool = ProcessPoolExecutor(config.jobs) if config.jobs > 1 else None
    try:
        for i in range(2, config.max_degree + 1):
            ck = None
            if config.checkpoint_dir:
                ck = _read_checkpoint(config.checkpoint_dir, i, fingerprint)
            if ck is not None:
                entry = ck["entry"]
                new_gens = [GeneratorRecord.from_json(g) for g in ck["generators"]]
                for g in new_gens:
                    for p in primes:
                        values[p].append(evaluate_mod(g.representative, points[p]))
                found.extend(new_gens)
                degrees.append(entry)
                if progress:
                    progress(i, entry, resumed=True)
                continue

            mdegs = [g.multidegree for g in found]
            tasks = []
            for d in multidegrees_of_total(i):
                if invariant_dimension(d) == 0:
                    continue
                lazy = config.lazy_products
                if lazy is None:
                    lazy = config.max_degree > 14
                sets = None if lazy else product_index_sets(d, mdegs)
                gv = {p: values[p] for p in primes}
                exact_products = None
                if i <= config.exact_upto:
                    exact_products = reducible_products(d, found)
                tasks.append((tuple(d), sets, mdegs, gv, primes, points, config.pivot, exact_products))
            if pool is not None:
                results = list(pool.map(_block_task, tasks))
            else:
                results = [_block_task(t) for t in tasks]

            blocks_json = []
            new_gens = []
            for task, (block, rep_values) in zip(tasks, results):
                if not block.certificate.agreed:
                    _add_backup_prime(block, task[1], found, config)
                for k, rep in enumerate(block.representatives):
                    name = f"g{len(found) + len(new_gens) + 1}"
                    new_gens.append(GeneratorRecord(block.multidegree, rep, name))
                    for p in primes:
                        values[p].append(rep_values[p][k])
                blocks_json.append(block.to_json())
                all_blocks.append(block)
            found.extend(new_gens)
            entry = {"i": i, "blocks": blocks_json, "d_i": len(new_gens)}
            degrees.append(entry)
            if config.checkpoint_dir:
                _write_checkpoint(config.checkpoint_dir, i, entry, new_gens, fingerprint)
            if progress:
                progress(i, entry, resumed=False)
    finally:
        if pool is not None:
            pool.shutdown()

    cert = GeneratorCertificate(degrees, {"max_degree": config.max_degree, **fingerprint})
    return PipelineResult(cert, found, all_blocks)


def _add_backup_prime(block: BlockResult, sets, found, config: PipelineConfig):
    """Recompute a block's product rank at a fresh prime after a disagreement."""
    cert = block.certificate
    extra = next(b for b in BACKUP_PRIMES if b not in cert.primes)
    pts = make_points((extra,), config.points_needed(), config.seed + 1)[extra]
    vals = [evaluate_mod(g.representative, pts) for g in found]
    if sets is None:
        sets = iter_product_sets(block.multidegree, [g.multidegree for g in found])
    ech, _ = _product_echelon(extra, vals, sets, block.dim, pts.n)
    r = ech.rank
    cert.primes.append(extra)
    cert.ranks.append(r)
    cert.note += f"; added prime {extra}"
    if r > block.rank:
        raise InconsistencyError(
            f"prime {extra} found rank {r} above {block.rank} at {tuple(block.multidegree)}")


def sylvester_table(cert: GeneratorCertificate) -> dict[tuple[int, int, int], int]:
    """Generator counts keyed by (order, degree in cubic, degree in quartic)."""
    table: dict[tuple[int, int, int], int] = {}
    for b in cert.blocks():
        if b["new"]:
            key = (b["d_l"], b["d_c"], b["d_q"])
            table[key] = table.get(key, 0) + b["new"]
    return dict(sorted(table.items()))


def table_cell(table: dict, order: int, cubic: int, quartic: int) -> int:
    return table.get((order, cubic, quartic), 0)
