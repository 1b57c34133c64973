"""Compound constructions for linear/cyclic Ramsey graphs, plus seed
generators.

Every construction here is an explicit colouring rule whose output order is
given by a closed formula; callers are expected to re-verify outputs with the
clique checker before treating them as certificates (the CLI refuses to emit
unverified compounds).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .colouring import (
    CYCLIC,
    LINEAR,
    ColouringError,
    ExplicitColouring,
    LengthColouring,
    check_cyclic_symmetry,
    to_cyclic,
)
from .templates import TemplateGraph, phi


class ConstructionError(RuntimeError):
    """An internal arithmetic invariant of a construction failed."""


@dataclass(frozen=True)
class CompoundRecipe:
    """Predicted outcome of a compound rule, before construction."""

    rule: str  # product_2017 | template_2021 | song_grid
    predicted_order: int
    predicted_avoid: tuple[int, ...]


def predict_product(A: LengthColouring, B: LengthColouring) -> CompoundRecipe:
    m, n = A.order, B.order
    order = ((2 * m - 1) * (2 * n - 1) + 1) // 2
    avoid = tuple(A.avoid or ()) + tuple(B.avoid or ())
    return CompoundRecipe("product_2017", order, avoid)


def predict_template_compound(T: TemplateGraph, B: LengthColouring) -> CompoundRecipe:
    order = (T.order - 1) * (B.order - 1) + 1 + phi(T)
    non_template = tuple(
        (T.base.avoid or ())[s - 1] for s in T.non_template_colours()
    ) if T.base.avoid else ()
    avoid = non_template + tuple(B.avoid or ())
    return CompoundRecipe("template_2021", order, avoid)


def predict_song(G: ExplicitColouring, H: ExplicitColouring) -> CompoundRecipe:
    if G.avoid is None or H.avoid is None:
        avoid: tuple[int, ...] = ()
    else:
        avoid = tuple((p - 1) * (q - 1) + 1 for p, q in zip(G.avoid, H.avoid))
    return CompoundRecipe("song_grid", G.order * H.order, avoid)


def product_linear(A: LengthColouring, B: LengthColouring) -> LengthColouring:
    """Banded product of two linear colourings.

    Output order ((2m-1)(2n-1)+1)/2.  Writing a length l as (2m-1)q + r with
    r in [0, 2m-2]: colours of A fill the residues 1..m-1, and B (with
    offset colour ids) fills residue 0 and the band m..2m-2.
    """
    A = A.as_linear()
    B = B.as_linear()
    m, n = A.order, B.order
    off = A.num_colours
    M = ((2 * m - 1) * (2 * n - 1) + 1) // 2
    colours = []
    for l in range(1, M):
        q, r = divmod(l, 2 * m - 1)
        if 1 <= r <= m - 1:
            colours.append(A.colour_of[r - 1])
        else:
            b_index = q if r == 0 else q + 1
            if not (1 <= b_index <= n - 1):
                raise ConstructionError(
                    f"B index {b_index} out of range at length {l}"
                )
            colours.append(B.colour_of[b_index - 1] + off)
    avoid = None
    if A.avoid is not None and B.avoid is not None:
        avoid = tuple(A.avoid) + tuple(B.avoid)
    return LengthColouring(LINEAR, M, off + B.num_colours, tuple(colours),
                           avoid=avoid)


def product_cyclic(A: LengthColouring, B: LengthColouring) -> LengthColouring:
    """Product of two cyclic colourings; the result is again cyclic."""
    if A.kind != CYCLIC or B.kind != CYCLIC:
        raise ColouringError("product_cyclic requires cyclic inputs")
    prod = product_linear(A, B)
    if not check_cyclic_symmetry(prod):
        raise ConstructionError(
            "cyclic product lost reflection symmetry (construction bug)"
        )
    return to_cyclic(prod)


def template_compound(T: TemplateGraph, B: LengthColouring) -> LengthColouring:
    """Compound of a template graph with a linear prototype.

    Output order (t-1)(n-1) + 1 + phi(T).  Non-template residues repeat the
    template's pattern; template-coloured residues are filled block by block
    from B (offset colour ids).  The template colour itself never appears in
    the output.
    """
    B = B.as_linear()
    t = T.order
    n = B.order
    bonus = phi(T)
    M = (t - 1) * (n - 1) + 1 + bonus
    non_template = T.non_template_colours()
    remap = {s: i + 1 for i, s in enumerate(non_template)}
    p = len(non_template)
    template_lengths = T.template_lengths()
    colours = []
    for l in range(1, M):
        r = ((l - 1) % (t - 1)) + 1
        if r in template_lengths:
            b_index = -(-l // (t - 1))  # ceil(l / (t-1))
            if not (1 <= b_index <= n - 1):
                raise ConstructionError(
                    f"B block index {b_index} out of range at length {l}"
                )
            colours.append(B.colour_of[b_index - 1] + p)
        else:
            colours.append(remap[T.base.colour_of[r - 1]])
    avoid = None
    if T.base.avoid is not None and B.avoid is not None:
        avoid = tuple(T.base.avoid[s - 1] for s in non_template) + tuple(B.avoid)
    return LengthColouring(LINEAR, M, p + B.num_colours, tuple(colours),
                           avoid=avoid)


def song_product(G: ExplicitColouring, H: ExplicitColouring) -> ExplicitColouring:
    """Grid product on vertex pairs (u, v), lexicographically numbered u*b + v.

    Edges between distinct u-blocks take G's colour; edges inside a block
    take H's.  If G avoids (p_i + 1) and H avoids (q_i + 1) colourwise, the
    product avoids (p_i q_i + 1).
    """
    if G.num_colours != H.num_colours:
        raise ColouringError(
            f"colour-count mismatch: {G.num_colours} vs {H.num_colours}"
        )
    a, b = G.order, H.order
    order = a * b
    mat = np.zeros((order, order), dtype=np.int32)
    for u in range(a):
        for v in range(b):
            x = u * b + v
            for u2 in range(a):
                for v2 in range(b):
                    y = u2 * b + v2
                    if x == y:
                        continue
                    mat[x, y] = G.edge_colour[u, u2] if u != u2 else H.edge_colour[v, v2]
    avoid = None
    if G.avoid is not None and H.avoid is not None:
        avoid = tuple((p - 1) * (q - 1) + 1 for p, q in zip(G.avoid, H.avoid))
    return ExplicitColouring(order, G.num_colours, mat, avoid=avoid)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def paley_colouring(q: int) -> LengthColouring:
    """Cyclic 2-colouring of order q from quadratic residues mod q.

    Needs q prime with q = 1 (mod 4), so that -1 is a residue and the
    residue classes are symmetric under l -> q - l.
    """
    if not _is_prime(q):
        raise ColouringError(f"{q} is not prime")
    if q % 4 != 1:
        raise ColouringError(f"{q} is not 1 mod 4")
    residues = {pow(x, 2, q) for x in range(1, q)}
    colours = tuple(1 if l in residues else 2 for l in range(1, q // 2 + 1))
    return LengthColouring(CYCLIC, q, 2, colours)
