"""Command-line entry point: ``binforms <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails (including any
mismatch under --expect-paper) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import reference_values as ref
from .forms import TransvectantIndexError
from .generators import (GeneratorCertificate, PipelineConfig, new_generator_count,
                         run_pipeline, sylvester_table)
from .grading import (MultiDegree, functional_equation_check, invariant_dimension,
                      poincare_coeffs, series_numerator, weight_count)
from .linalg import DEFAULT_PRIMES, invariant_basis
from .nullcone import (evaluate_invariants, independence_evidence, is_nullform, load_point,
                       verify_case_identities)
from .polys import format_fraction
from .recipe import RecipeSyntaxError, evaluate_recipe

log = logging.getLogger("binforms")


class UsageError(Exception):
    pass


@dataclass
class Config:
    max_degree: int = 14
    mode: str = "desk"
    primes: list[int] = field(default_factory=lambda: list(DEFAULT_PRIMES))
    jobs: int = 1
    seed: int = 0
    output: str | None = None
    resume: str | None = None

    def validate(self):
        if self.mode not in ("desk", "full"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if len(set(self.primes)) != len(self.primes) or not self.primes:
            raise UsageError("primes must be distinct")
        bad = [p for p in self.primes if p <= 2 ** 31]
        if bad:
            raise UsageError(f"prime {bad[0]} is not above 2^31")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if self.max_degree < 2:
            raise UsageError("--max-degree must be at least 2")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _parse_multidegree(text: str) -> MultiDegree:
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad multidegree {text!r}") from None
    if len(parts) != 3 or min(parts) < 0:
        raise UsageError(f"bad multidegree {text!r}: need three nonnegative integers")
    return MultiDegree(*parts)


def _parse_primes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise UsageError(f"bad prime list {text!r}") from None


class Mismatches:
    def __init__(self):
        self.items: list[str] = []

    def expect(self, label, got, want):
        if got != want:
            self.items.append(f"{label}: got {got}, expected {want}")

    def report(self) -> int:
        for m in self.items:
            print(f"MISMATCH {m}", file=sys.stderr)
        return 1 if self.items else 0


# -- subcommands ------------------------------------------------------------

def cmd_poincare(args) -> int:
    maxdeg = args.max_degree
    dens = [int(b) for b in args.denominators.split(",")]
    coeffs = poincare_coeffs(max(maxdeg, sum(dens) + 1))
    num = series_numerator(coeffs, dens)
    fe = functional_equation_check(num, dens, args.d)
    out = {"coeffs": coeffs[: maxdeg + 1], "numerator": num,
           "denominator_degrees": dens, "functional_equation": fe.holds}
    _emit(_dump(out), args.out)
    if args.expect_paper:
        m = Mismatches()
        n = min(len(ref.POINCARE_COEFFS), maxdeg + 1)
        m.expect("coeffs", tuple(coeffs[:n]), ref.POINCARE_COEFFS[:n])
        if tuple(dens) == ref.HSOP_DEGREES:
            m.expect("numerator", tuple(num), ref.NUMERATOR)
        m.expect("functional_equation", fe.holds, True)
        return m.report()
    return 0 if fe.holds else 1


def cmd_dims(args) -> int:
    d = _parse_multidegree(args.multidegree)
    dim = invariant_dimension(d)
    if args.json:
        print(_dump({"multidegree": list(d), "dim": dim, "weight0": weight_count(d, 0),
                     "weight2": weight_count(d, 2)}))
    else:
        print(dim)
    return 0


def cmd_basis(args) -> int:
    d = _parse_multidegree(args.multidegree)
    basis = invariant_basis(d)
    _emit(_dump({"multidegree": list(d), "dim": len(basis),
                 "basis": [b.to_json() for b in basis]}), args.out)
    return 0 if len(basis) == invariant_dimension(d) else 1


def _pipeline_config(args) -> PipelineConfig:
    cfg = Config(max_degree=args.max_degree or (29 if args.mode == "full" else 14),
                 mode=args.mode, primes=_parse_primes(args.primes) if args.primes
                 else list(DEFAULT_PRIMES), jobs=args.jobs, seed=args.seed,
                 output=args.out, resume=args.resume)
    cfg.validate()
    return PipelineConfig(max_degree=cfg.max_degree, primes=tuple(cfg.primes), seed=cfg.seed,
                          jobs=cfg.jobs, exact_upto=args.exact_upto, checkpoint_dir=cfg.resume,
                          lazy_products=cfg.mode == "full")


def _check_certificate(cert: GeneratorCertificate, m: Mismatches):
    table = cert.d_table()
    top = max(table)
    for i, want in ref.GENERATOR_DEGREES.items():
        if i <= top:
            m.expect(f"d_{i}", table.get(i), want)
    for i in range(12, top + 1):
        m.expect(f"d_{i}", table.get(i), 0)
    if top >= 11:
        m.expect("total", cert.total, ref.TOTAL_GENERATORS)
        st = sylvester_table(cert)
        m.expect("table", st, ref.GENERATOR_TABLE)
        m.expect("order-0 total", sum(v for k, v in st.items() if k[0] == 0),
                 ref.INVARIANT_GENERATORS)
        for cell, want in ref.CORRECTED_CELLS.items():
            m.expect(f"cell {cell}", st.get(cell, 0), want)


def table_csv(table: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for n, layout in enumerate(ref.TABLE_LAYOUTS, 1):
        w.writerow([f"table {n}"])
        w.writerow(["order", "cubic"] + [f"quartic {j}" for j in layout["quartic"]])
        rows = sorted({(o, c) for (o, c, _) in table if o in layout["orders"]})
        for o, c in rows:
            w.writerow([o, c] + [table.get((o, c, j), "") for j in layout["quartic"]])
    return buf.getvalue()


def cmd_generators(args) -> int:
    config = _pipeline_config(args)

    def progress(i, entry, resumed):
        log.info("degree %d: %d new generators%s", i, entry["d_i"],
                 " (checkpoint)" if resumed else "")

    result = run_pipeline(config=config, progress=progress)
    cert = result.certificate
    _emit(cert.dumps(), args.out)
    if args.csv:
        Path(args.csv).write_text(table_csv(sylvester_table(cert)))
    if args.representatives:
        Path(args.representatives).write_text(
            _dump([g.to_json() for g in result.generators]) + "\n")
    if args.expect_paper:
        m = Mismatches()
        _check_certificate(cert, m)
        return m.report()
    return 0


def cmd_sylvester_table(args) -> int:
    if args.cert:
        cert = GeneratorCertificate.from_json(json.loads(Path(args.cert).read_text()))
    else:
        cert = run_pipeline(config=PipelineConfig(max_degree=11, jobs=args.jobs)).certificate
    table = sylvester_table(cert)
    text = table_csv(table)
    if args.csv:
        Path(args.csv).write_text(text)
    print(text, end="")
    if args.expect_paper:
        m = Mismatches()
        m.expect("table", table, ref.GENERATOR_TABLE)
        return m.report()
    return 0


def cmd_nullcone(args) -> int:
    try:
        point = load_point(args.point)
    except (OSError, ValueError, json.JSONDecodeError, ZeroDivisionError, TypeError) as exc:
        raise UsageError(f"malformed point file {args.point}: {exc}") from None
    vals = evaluate_invariants(point)
    out = {"point": point.to_json(), "nullform": is_nullform(point),
           "invariants": {k: format_fraction(v) for k, v in vals.items()}}
    print(_dump(out))
    return 0


def cmd_hsop_verify(args) -> int:
    reports = verify_case_identities()
    indep = independence_evidence(args.samples, args.seed)
    out = {"cases": [r.to_json() for r in reports], "independence": indep.to_json(),
           "passed": all(r.passed for r in reports)}
    _emit(_dump(out), args.out)
    return 0 if out["passed"] else 1


def cmd_transvect(args) -> int:
    try:
        form = evaluate_recipe(args.recipe)
    except RecipeSyntaxError as exc:
        raise UsageError(f"invalid recipe: {exc} (token {exc.token!r})") from None
    except TransvectantIndexError as exc:
        raise UsageError(f"invalid recipe: {exc}") from None
    print(_dump(form.to_json()))
    return 0


def cmd_check_sylvester(args) -> int:
    """Recompute the two cells Sylvester got wrong by the coordinate route."""
    m = Mismatches()
    found_by_degree = run_pipeline(
        config=PipelineConfig(max_degree=9, jobs=args.jobs)).generators
    out = {}
    for d, want in ref.SYLVESTER_EXAMPLES.items():
        found = [g for g in found_by_degree if g.total_degree < sum(d)]
        dim, rank, new, _ = new_generator_count(d, found)
        out[",".join(map(str, d))] = {"dim": dim, "rank": rank, "new": new}
        m.expect(f"{d}", (dim, rank, new), want)
    print(_dump(out))
    return m.report()


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="binforms", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("poincare", help="Poincare series, numerator, functional equation")
    s.add_argument("--max-degree", type=int, default=30)
    s.add_argument("--denominators", default=",".join(map(str, ref.HSOP_DEGREES)))
    s.add_argument("--d", type=int, default=11)
    s.add_argument("--out")
    s.add_argument("--expect-paper", action="store_true",
                   help="compare with the published values; exit 1 on any mismatch")
    s.set_defaults(func=cmd_poincare)

    s = sub.add_parser("dims", help="dimension of the invariants of one multidegree")
    s.add_argument("--multidegree", required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_dims)

    s = sub.add_parser("basis", help="reduced-echelon invariant basis of one multidegree")
    s.add_argument("--multidegree", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("generators", help="run the generator search")
    s.add_argument("--max-degree", type=int)
    s.add_argument("--mode", choices=("desk", "full"), default="desk")
    s.add_argument("--primes")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--exact-upto", type=int, default=0,
                   help="also compute reducible ranks over Q up to this total degree")
    s.add_argument("--out")
    s.add_argument("--csv")
    s.add_argument("--representatives")
    s.add_argument("--resume", help="checkpoint directory, one file per total degree")
    s.add_argument("--expect-paper", action="store_true",
                   help="compare with the published values; exit 1 on any mismatch")
    s.set_defaults(func=cmd_generators)

    s = sub.add_parser("sylvester-table", help="generator counts in the classical layout")
    s.add_argument("--cert")
    s.add_argument("--csv")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--expect-paper", action="store_true",
                   help="compare with the published values; exit 1 on any mismatch")
    s.set_defaults(func=cmd_sylvester_table)

    s = sub.add_parser("check-sylvester", help="recheck the (2,4,3) and (1,5,4) cells")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_check_sylvester)

    s = sub.add_parser("nullcone", help="nullcone membership and invariant values")
    s.add_argument("--point", required=True)
    s.set_defaults(func=cmd_nullcone)

    s = sub.add_parser("hsop-verify", help="replay the case analysis for j1..j8")
    s.add_argument("--samples", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_hsop_verify)

    s = sub.add_parser("transvect", help="evaluate a transvectant recipe")
    s.add_argument("recipe")
    s.set_defaults(func=cmd_transvect)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"binforms: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"binforms: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
