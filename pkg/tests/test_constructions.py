import pytest

from ramseykit.cliques import max_clique_brute, ramsey_check
from ramseykit.colouring import (
    check_cyclic_symmetry,
    expand_to_explicit,
    pentagon,
    single_edge,
)
from ramseykit.constructions import (
    paley_colouring,
    predict_product,
    predict_song,
    predict_template_compound,
    product_cyclic,
    product_linear,
    song_product,
    template_compound,
)
from ramseykit.templates import double_to_template

from conftest import all_linear_colourings


def test_product_order_formula():
    e = single_edge()
    p5 = product_linear(e, e)
    assert p5.order == 5
    p14 = product_linear(p5, e)
    assert p14.order == 14
    p41 = product_linear(p5, p5)
    assert p41.order == 41
    for A, B, out in ((e, e, p5), (p5, e, p14), (p5, p5, p41)):
        m, n = A.order, B.order
        assert out.order == ((2 * m - 1) * (2 * n - 1) + 1) // 2
        assert predict_product(A, B).predicted_order == out.order


def test_product_chain_verifies():
    e = single_edge()
    p5 = product_linear(e, e)
    assert ramsey_check(p5, (3, 3)).passes
    assert p5.avoid == (3, 3)
    p14 = product_linear(p5, e)
    assert ramsey_check(p14, (3, 3, 3)).passes
    p41 = product_linear(p5, p5)
    assert ramsey_check(p41, (3, 3, 3, 3)).passes


def test_product_band_layout():
    # residues 1..m-1 carry the first factor, 0 and m..2m-2 the second
    p5 = product_linear(single_edge(), single_edge())
    assert p5.colour_of == (1, 2, 2, 1)
    p14 = product_linear(p5, single_edge())
    assert p14.colour_class(1) == {1, 4, 10, 13}
    assert p14.colour_class(2) == {2, 3, 11, 12}
    assert p14.colour_class(3) == {5, 6, 7, 8, 9}


def test_product_cyclic_closure():
    prod = product_cyclic(pentagon(), pentagon())
    assert prod.kind == "cyclic"
    assert prod.order == 41
    assert ramsey_check(prod, (3, 3, 3, 3)).passes
    # the linear form of the same product is reflection symmetric
    lin = product_linear(pentagon(), pentagon())
    assert check_cyclic_symmetry(lin)


def test_product_cyclic_requires_cyclic_inputs():
    with pytest.raises(Exception):
        product_cyclic(pentagon().as_linear(), pentagon())


def test_template_compound_matches_product_spot():
    A = product_linear(single_edge(), single_edge())
    for B in (single_edge(), A):
        via_template = template_compound(double_to_template(A), B)
        direct = product_linear(A, B)
        assert via_template.order == direct.order
        assert via_template.colour_of == direct.colour_of


def test_template_compound_order_formula():
    T = double_to_template(pentagon())
    B = pentagon().as_linear()
    out = template_compound(T, B)
    assert out.order == (T.order - 1) * (B.order - 1) + 1 + T.phi
    assert predict_template_compound(T, B).predicted_order == out.order
    assert predict_template_compound(T, B).predicted_avoid == (3, 3, 3, 3)


def test_template_colour_never_appears():
    T = double_to_template(pentagon())
    out = template_compound(T, pentagon().as_linear())
    classes = {out.colour(l) for l in range(1, out.order)}
    assert classes == {1, 2, 3, 4}  # two from each factor, none left template


def test_song_product_shape():
    g = expand_to_explicit(pentagon())
    prod = song_product(g, g)
    assert prod.order == 25
    assert predict_song(g, g).predicted_order == 25
    assert predict_song(g, g).predicted_avoid == (5, 5)
    for s in (1, 2):
        assert max_clique_brute(prod, s, order_cap=25) <= 4


def test_paley_5_is_pentagon():
    p = paley_colouring(5)
    assert p.kind == "cyclic"
    assert p.colour_of == pentagon().colour_of


def test_paley_13():
    p = paley_colouring(13)
    assert p.order == 13
    # quadratic residues mod 13: 1, 3, 4, 9, 10, 12
    assert p.as_linear().colour_class(1) == {1, 3, 4, 9, 10, 12}


def test_paley_rejects_bad_orders():
    with pytest.raises(Exception):
        paley_colouring(7)  # 7 = 3 mod 4, residues are not symmetric
    with pytest.raises(Exception):
        paley_colouring(15)  # composite


def test_small_exhaustive_template_product_identity():
    # doubling then compounding is the same map as the direct product,
    # across every small passing pair
    passing = []
    for order in range(2, 8):
        for c in all_linear_colourings(order, 2 if order > 2 else 1):
            avoid = (3,) * c.num_colours
            if ramsey_check(c, avoid).passes:
                passing.append(LengthReplace(c, avoid))
    # no two-colour triangle-free linear colouring exists beyond order 5
    assert len(passing) == 9
    for A in passing:
        for B in passing:
            direct = product_linear(A, B)
            via = template_compound(double_to_template(A), B)
            assert via.colour_of == direct.colour_of


def LengthReplace(c, avoid):
    from dataclasses import replace

    return replace(c, avoid=avoid)
