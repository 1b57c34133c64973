import pytest

from ramseykit.colouring import LengthColouring, pentagon, single_edge
from ramseykit.templates import (
    TemplateError,
    TemplateGraph,
    double_to_template,
    is_tf_template,
    phi,
    rainbow_colouring,
    repetition_check,
    template_usable,
    tiled_colouring,
)

# found by the extension search from a cyclic order-8 prototype; frozen here
TEMPLATE_343 = LengthColouring(
    "linear", 19, 3,
    (1, 2, 2, 1, 2, 2, 1, 3, 1, 2, 3, 3, 3, 3, 3, 2, 1, 3),
    template_colour=3,
)


def test_is_tf_template_positive():
    base = double_to_template(pentagon()).base
    assert is_tf_template(base, 3)
    assert not is_tf_template(base, 1)  # class misses the top length


def test_is_tf_template_rejects_triangle():
    # template class {2, 3, 5}: 2 + 3 = 5 is a monochromatic triangle
    c = LengthColouring("linear", 6, 2, (1, 2, 2, 1, 2))
    assert not is_tf_template(c, 2)


def test_is_tf_template_requires_linear():
    with pytest.raises(TemplateError):
        is_tf_template(pentagon(), 1)


def test_template_graph_validates():
    # colour class {2, 3} misses the top length 4
    with pytest.raises(TemplateError):
        TemplateGraph(pentagon().as_linear(), 2)


def test_doubling_pentagon():
    T = double_to_template(pentagon())
    assert T.order == 10
    assert T.template_colour == 3
    assert T.base.colour_of == (1, 2, 2, 1, 3, 3, 3, 3, 3)
    assert T.template_lengths() == {5, 6, 7, 8, 9}
    assert phi(T) == 4
    assert T.base.avoid == (3, 3, 3)


def test_doubling_compact_variant():
    T = double_to_template(pentagon(), compact=True)
    assert T.order == 9
    assert T.template_lengths() == {5, 6, 7, 8}
    assert phi(T) == 4


def test_tiled_colouring_order_and_pattern():
    T = double_to_template(pentagon())
    tiled = tiled_colouring(T, 3)
    assert tiled.order == 3 * 9 + 1 + 4
    # residues 1..4 repeat the pentagon pattern
    assert tiled.colour(1) == tiled.colour(10) == tiled.colour(19) == 1
    assert tiled.colour(2) == tiled.colour(11) == 2
    assert tiled.colour(5) == tiled.colour(14) == 3


def test_repetition_check_doubled_pentagon():
    T = double_to_template(pentagon())
    for q in range(1, 9):
        assert repetition_check(T, q, (3, 3)).passes


def test_repetition_check_avoid_arity():
    T = double_to_template(pentagon())
    with pytest.raises(Exception):
        repetition_check(T, 2, (3, 3, 3))


def test_rainbow_colouring():
    r = rainbow_colouring(5)
    assert r.order == 5
    assert r.num_colours == 4
    assert r.colour_of == (1, 2, 3, 4)
    # singleton classes cannot hold a triangle
    from ramseykit.cliques import ramsey_check
    assert ramsey_check(r, (3, 3, 3, 3)).passes


def test_template_usable_doubled_pentagon():
    T = double_to_template(pentagon())
    assert template_usable(T, (3, 3), reps=8, rainbow_n=6)


def test_template_usable_doubled_edge():
    T = double_to_template(single_edge())
    assert T.order == 4
    assert phi(T) == 1
    assert template_usable(T, (3,), reps=6, rainbow_n=5)


def test_frozen_search_template_is_valid():
    T = TemplateGraph(TEMPLATE_343, 3)
    assert phi(T) == 7
    assert template_usable(T, (3, 4), reps=6, rainbow_n=5)
