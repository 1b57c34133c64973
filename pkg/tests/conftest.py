"""Shared helpers for the test suite."""

from ramseykit.colouring import LengthColouring, length_domain_size


def random_colouring(rng, kind, order, num_colours):
    """A uniformly random length colouring of the given shape."""
    n = length_domain_size(kind, order)
    colours = tuple(rng.randint(1, num_colours) for _ in range(n))
    return LengthColouring(kind, order, num_colours, colours)


def all_linear_colourings(order, num_colours):
    """Every linear colouring of the given order, in lexicographic order."""
    from itertools import product

    n = order - 1
    for combo in product(range(1, num_colours + 1), repeat=n):
        yield LengthColouring("linear", order, num_colours, combo)


def all_cyclic_colourings(order, num_colours):
    from itertools import product

    n = order // 2
    for combo in product(range(1, num_colours + 1), repeat=n):
        yield LengthColouring("cyclic", order, num_colours, combo)
