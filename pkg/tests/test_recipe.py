from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from binforms.forms import GENERIC, TransvectantIndexError, transvectant
from binforms.recipe import (Atom, Power, Product, RecipeSyntaxError, Transvectant,
                             evaluate_recipe, parse_recipe)


def test_k2():
    f = evaluate_recipe("(q,q)_4")
    assert f.order == 0 and f.multidegree() == (0, 0, 2)


def test_k4_3():
    f = evaluate_recipe("(c,l^3)_3")
    assert f.order == 0 and f.multidegree() == (3, 1, 0)


def test_k7():
    f = evaluate_recipe("(c^4,q^3)_12")
    assert f.order == 0 and f.multidegree() == (0, 4, 3) and f.total_degree() == 7


def test_parse_tree_shape():
    tree = parse_recipe("((q,q)_2,l^4)_4")
    assert isinstance(tree, Transvectant) and tree.index == 4
    assert isinstance(tree.right, Power) and tree.right.exponent == 4
    assert tree.right.base == Atom("l")
    assert isinstance(parse_recipe("lc"), Product)


def test_notation_variants_agree():
    a = evaluate_recipe("([(c,c)_2]^2,(q,q)_2)_4")
    b = evaluate_recipe("(((c,c)_{2})^2, (q,q)_{2})_{4}")
    assert a == b
    assert evaluate_recipe("l*c") == evaluate_recipe("lc") == GENERIC.l * GENERIC.c


def test_sums_and_scalars():
    f = evaluate_recipe("(q,q)_4 - 1/2 (q,q)_4")
    assert f == evaluate_recipe("(q,q)_4").scale(Fraction(1, 2))
    g = evaluate_recipe("2(c,c)_2 + (c,c)_2")
    assert g == transvectant(GENERIC.c, GENERIC.c, 2).scale(3)


def test_bad_index_is_transvectant_error():
    with pytest.raises(TransvectantIndexError):
        evaluate_recipe("(q,c)_5")


@pytest.mark.parametrize("text,token", [("(q,q)_4 %", "%"), ("(q,z)_1", "z"),
                                        ("(q,q)", None), ("q^", None), ("", None)])
def test_syntax_errors_name_token(text, token):
    with pytest.raises(RecipeSyntaxError) as err:
        parse_recipe(text)
    if token is not None:
        assert err.value.token == token
        assert token in str(err.value)


def test_mixed_sum_rejected():
    from binforms.forms import HomogeneityError
    with pytest.raises(HomogeneityError):
        evaluate_recipe("(q,q)_4 + (c,c)_2")


# random well-formed recipes: (text, order)
_ATOMS = st.sampled_from([("l", 1), ("c", 3), ("q", 4)])


def _extend(children):
    prod = st.tuples(children, children).map(
        lambda ab: (f"{ab[0][0]}*{ab[1][0]}", ab[0][1] + ab[1][1]))
    power = st.tuples(children, st.integers(1, 2)).map(
        lambda ae: (f"[{ae[0][0]}]^{ae[1]}", ae[0][1] * ae[1]))

    @st.composite
    def trans(draw):
        a, m = draw(children)
        b, n = draw(children)
        p = draw(st.integers(0, min(m, n)))
        return f"({a},{b})_{p}", m + n - 2 * p

    return st.one_of(prod, power, trans())


recipes = st.recursive(_ATOMS, _extend, max_leaves=4).filter(lambda r: r[1] <= 8)


@settings(max_examples=30)
@given(recipes)
def test_random_recipes_are_homogeneous_and_balanced(r):
    text, order = r
    f = evaluate_recipe(text)
    assert f.order == order
    if not f.is_zero():
        assert f.is_homogeneous()
        assert f.check_weight_balance()
