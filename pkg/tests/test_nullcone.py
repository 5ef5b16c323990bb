import itertools
import json
import random
from fractions import Fraction

import pytest
import sympy

from binforms.forms import transvectant
from binforms.nullcone import (ConcretePoint, X, Y, evaluate_invariants, independence_evidence,
                               is_nullform, load_point, random_nullform, random_point,
                               verify_case_identities)
from binforms.forms import Form
from binforms.polys import CoeffPoly

J_NAMES = [f"j{i}" for i in range(1, 9)]


def point(l, c, q):
    return ConcretePoint.from_forms(l, c, q)


def test_nullform_examples():
    assert is_nullform(point(X, X ** 2 * Y, X ** 3 * Y))
    assert not is_nullform(point(X, Y ** 3, Y ** 4))
    assert is_nullform(point(0, X ** 2 * (X + Y), X ** 3 * Y))


def test_nullform_edge_cases():
    assert is_nullform(point(0, 0, 0))
    assert is_nullform(point(X + Y, 0, 0))
    # l = 0, c with a double root, q with a triple root, but at different places
    assert not is_nullform(point(0, X ** 2 * Y, Y ** 3 * X))
    # irrational common root: (x^2 - 2y^2) squared divides nothing linear over Q,
    # but c alone with a double root at an irrational point is impossible; use q only
    assert is_nullform(point(0, 0, X ** 3 * (X - 2 * Y)))
    assert not is_nullform(point(0, 0, (X ** 2 - 2 * Y ** 2) ** 2))


def test_k2_of_x4_plus_y4():
    vals = evaluate_invariants(point(0, 0, X ** 4 + Y ** 4))
    q = Form(4, tuple(CoeffPoly.constant(v) for v in (1, 0, 0, 0, 1)))
    assert vals["k2"] == transvectant(q, q, 4).value.constant_term() == 2


def test_j5_is_resultant_like():
    vals = evaluate_invariants(point(X + Y, X ** 3, Y ** 4))
    assert vals["j5"] != 0
    # the resultant of q = y^4 and l = x + y is nonzero, and j5 vanishes when they share a root
    assert evaluate_invariants(point(X + Y, X ** 3, Y * (X + Y) ** 3))["j5"] == 0


def test_seeded_nullforms_annihilate_everything():
    rng = random.Random(2024)
    for _ in range(100):
        p = random_nullform(rng)
        assert is_nullform(p)
        vals = evaluate_invariants(p)
        assert not any(vals.values()), p


def test_seeded_generic_points_are_detected():
    rng = random.Random(7)
    for _ in range(100):
        p = random_point(rng)
        vals = evaluate_invariants(p)
        if not is_nullform(p):
            assert any(vals[n] for n in J_NAMES), p


def _grid_nullforms():
    lins = [(a, b) for a, b in itertools.product(range(-2, 3), repeat=2) if (a, b) != (0, 0)]
    cof = [X, Y, X + Y, X - 2 * Y]
    for (a, b) in lins:
        L = a * X + b * Y
        for l in (0, L):
            for c in [0] + [L ** 2 * m for m in cof[:2]]:
                for q in [0] + [L ** 3 * m for m in cof[1:3]]:
                    yield point(l, c, q)


def test_small_grid_forward_direction():
    count = 0
    for p in _grid_nullforms():
        assert is_nullform(p)
        assert not any(evaluate_invariants(p).values())
        count += 1
    assert count > 200


def test_grid_points_vs_invariants():
    # small coefficients |num|, |den| <= 2: nullform implies every invariant vanishes,
    # and a point where j1..j8 vanish is a nullform
    vals = [Fraction(n, d) for n in range(-2, 3) for d in (1, 2)]
    rng = random.Random(11)
    for _ in range(150):
        l = [rng.choice(vals) if rng.random() < 0.5 else 0 for _ in range(2)]
        c = [rng.choice(vals) if rng.random() < 0.4 else 0 for _ in range(4)]
        q = [rng.choice(vals) if rng.random() < 0.4 else 0 for _ in range(5)]
        p = ConcretePoint(l, c, q)
        inv = evaluate_invariants(p)
        if is_nullform(p):
            assert not any(inv.values()), p
        else:
            assert any(inv[n] for n in J_NAMES), p


def test_case_identities():
    reports = verify_case_identities()
    assert [r.case for r in reports] == [1, 2, 3]
    for r in reports:
        assert r.passed, [c.label for c in r.checks if not c.passed]
        for c in r.checks:
            if c.scalar is not None:
                assert c.scalar != 0
    assert reports[2].conclusion == "no solution"


def test_case3_key_steps():
    checks = {c.label: c for c in verify_case_identities()[2].checks}
    j2 = next(c for label, c in checks.items() if label.endswith(": j2"))
    assert j2.claimed == "27 - 2048*b1**4" and j2.passed
    j8 = next(c for label, c in checks.items() if label.startswith("b0") and label.endswith("j8"))
    assert j8.passed and "4273351745" in j8.claimed
    k61 = next(c for c in verify_case_identities()[1].checks
               if c.label.startswith("a2=a3=b0") and c.label.endswith("k6_1"))
    assert k61.passed and k61.claimed == "a1**4*b3**2"


def test_case_report_json():
    data = [r.to_json() for r in verify_case_identities()]
    json.dumps(data)
    assert all(r["passed"] for r in data)


def test_independence():
    rep = independence_evidence(5, seed=0)
    assert rep.ranks == [8] * 5
    assert rep.status == "independent"


def test_independence_needs_samples():
    with pytest.raises(ValueError):
        independence_evidence(0)


def test_point_json(tmp_path):
    p = point(X + Y, X ** 3, Y ** 4)
    path = tmp_path / "p.json"
    path.write_text(json.dumps(p.to_json()))
    assert load_point(path) == p
    assert p.to_json()["c"] == ["1/1", "0/1", "0/1", "0/1"]
    with pytest.raises(ValueError):
        ConcretePoint.from_json({"l": [1, 0], "c": [0] * 4})
    with pytest.raises(ValueError):
        ConcretePoint([1], [0] * 4, [0] * 5)


def test_binomial_convention_roundtrip():
    l, c, q = X - Y, 3 * X ** 2 * Y, 6 * X ** 2 * Y ** 2
    p = point(l, c, q)
    assert p.c == (0, 1, 0, 0) and p.q == (0, 0, 1, 0, 0)
    back = p.forms()
    assert [sympy.expand(a - b) for a, b in zip(back, (l, c, q))] == [0, 0, 0]
