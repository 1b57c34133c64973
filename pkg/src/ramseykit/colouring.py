"""Edge-colourings of complete graphs keyed by edge-length.

A *linear* colouring assigns a colour to each length 1..m-1; the colour of
edge (i, j) is the colour of |j - i|.  A *cyclic* colouring additionally
satisfies c(l) = c(m - l), which we make structural by storing only the
lengths 1..floor(m/2).  An ExplicitColouring is the fully expanded edge
matrix used by the clique verifier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

LINEAR = "linear"
CYCLIC = "cyclic"
EXPLICIT = "explicit"


class ColouringError(ValueError):
    """Raised for malformed or inconsistent colourings and colouring files."""


def length_domain_size(kind: str, order: int) -> int:
    if kind == LINEAR:
        return order - 1
    if kind == CYCLIC:
        return order // 2
    raise ColouringError(f"kind: unknown colouring kind {kind!r}")


def cyclic_length(i: int, j: int, m: int) -> int:
    """Canonical cyclic distance between vertices i and j on m vertices."""
    if not (0 <= i < m and 0 <= j < m):
        raise ColouringError(f"vertex out of range for order {m}: ({i}, {j})")
    if i == j:
        raise ColouringError(f"degenerate edge ({i}, {i})")
    d = abs(j - i)
    return min(d, m - d)


@dataclass(frozen=True)
class LengthColouring:
    """Colour-per-length representation of a linear or cyclic colouring."""

    kind: str
    order: int
    num_colours: int
    colour_of: tuple[int, ...]  # colour_of[l - 1] is the colour of length l
    avoid: tuple[int, ...] | None = None
    template_colour: int | None = None
    comment: str | None = None

    def __post_init__(self):
        if self.kind not in (LINEAR, CYCLIC):
            raise ColouringError(f"kind: expected linear or cyclic, got {self.kind!r}")
        if self.order < 2:
            raise ColouringError(f"order: must be >= 2, got {self.order}")
        if self.num_colours < 1:
            raise ColouringError(f"num_colours: must be >= 1, got {self.num_colours}")
        want = length_domain_size(self.kind, self.order)
        if len(self.colour_of) != want:
            raise ColouringError(
                f"colours: expected {want} entries for {self.kind} order "
                f"{self.order}, got {len(self.colour_of)}"
            )
        for idx, c in enumerate(self.colour_of):
            if not (1 <= c <= self.num_colours):
                raise ColouringError(
                    f"colours[{idx}]: colour {c} out of range 1..{self.num_colours}"
                )
        if self.avoid is not None:
            if len(self.avoid) != self.num_colours:
                raise ColouringError(
                    f"avoid: expected {self.num_colours} entries, got {len(self.avoid)}"
                )
            for idx, k in enumerate(self.avoid):
                if k < 2:
                    raise ColouringError(f"avoid[{idx}]: clique bound {k} below 2")
        if self.template_colour is not None and not (
            1 <= self.template_colour <= self.num_colours
        ):
            raise ColouringError(
                f"template_colour: {self.template_colour} out of range "
                f"1..{self.num_colours}"
            )

    def colour(self, l: int) -> int:
        """Colour of length l, for any l in 1..order-1."""
        m = self.order
        if not (1 <= l <= m - 1):
            raise ColouringError(f"length {l} out of range 1..{m - 1}")
        if self.kind == CYCLIC:
            l = min(l, m - l)
        return self.colour_of[l - 1]

    def as_linear(self) -> "LengthColouring":
        """The same colouring over the full length range 1..order-1."""
        if self.kind == LINEAR:
            return self
        full = tuple(self.colour(l) for l in range(1, self.order))
        return LengthColouring(
            LINEAR, self.order, self.num_colours, full,
            avoid=self.avoid, template_colour=self.template_colour,
        )

    def colour_class(self, s: int) -> set[int]:
        """Stored lengths carrying colour s."""
        return {l for l in range(1, len(self.colour_of) + 1)
                if self.colour_of[l - 1] == s}


@dataclass(frozen=True)
class ExplicitColouring:
    """Full edge-colour matrix of a coloured complete graph."""

    order: int
    num_colours: int
    edge_colour: np.ndarray = field(repr=False)  # symmetric (m, m), 0 diagonal
    avoid: tuple[int, ...] | None = None
    comment: str | None = None

    def __post_init__(self):
        m = self.order
        mat = np.asarray(self.edge_colour, dtype=np.int32)
        object.__setattr__(self, "edge_colour", mat)
        if mat.shape != (m, m):
            raise ColouringError(f"edge_colour: expected shape ({m}, {m})")
        if not np.array_equal(mat, mat.T):
            raise ColouringError("edge_colour: matrix is not symmetric")
        if np.any(np.diagonal(mat) != 0):
            raise ColouringError("edge_colour: diagonal must be zero")
        off = mat[~np.eye(m, dtype=bool)]
        if m >= 2 and (off.min() < 1 or off.max() > self.num_colours):
            raise ColouringError(
                f"edge_colour: entries must lie in 1..{self.num_colours}"
            )

    def colour(self, i: int, j: int) -> int:
        if i == j:
            raise ColouringError(f"degenerate edge ({i}, {i})")
        return int(self.edge_colour[i, j])

    def upper_triangle(self) -> list[int]:
        """Row-major list of colours for pairs (i, j), i < j."""
        m = self.order
        return [int(self.edge_colour[i, j])
                for i in range(m) for j in range(i + 1, m)]

    def __eq__(self, other):
        return (
            isinstance(other, ExplicitColouring)
            and self.order == other.order
            and self.num_colours == other.num_colours
            and np.array_equal(self.edge_colour, other.edge_colour)
        )

    def __hash__(self):
        return hash((self.order, self.num_colours, tuple(self.upper_triangle())))


def explicit_from_upper_triangle(order: int, num_colours: int,
                                 entries: list[int], **extra) -> ExplicitColouring:
    m = order
    want = m * (m - 1) // 2
    if len(entries) != want:
        raise ColouringError(
            f"colours: expected {want} upper-triangular entries for order {m}, "
            f"got {len(entries)}"
        )
    mat = np.zeros((m, m), dtype=np.int32)
    it = iter(entries)
    for i in range(m):
        for j in range(i + 1, m):
            c = next(it)
            mat[i, j] = c
            mat[j, i] = c
    return ExplicitColouring(order, num_colours, mat, **extra)


def expand_to_explicit(c: LengthColouring) -> ExplicitColouring:
    """Expand a length colouring to its full edge-colour matrix."""
    m = c.order
    mat = np.zeros((m, m), dtype=np.int32)
    lin = c.as_linear()
    for l in range(1, m):
        col = lin.colour_of[l - 1]
        for i in range(m - l):
            mat[i, i + l] = col
            mat[i + l, i] = col
    return ExplicitColouring(m, c.num_colours, mat, avoid=c.avoid)


def check_cyclic_symmetry(c: LengthColouring) -> bool:
    """True iff c(l) = c(m - l) for every length, i.e. c admits a cyclic form."""
    lin = c.as_linear()
    m = lin.order
    return all(lin.colour_of[l - 1] == lin.colour_of[m - l - 1]
               for l in range(1, m))


def to_cyclic(c: LengthColouring) -> LengthColouring:
    """Cyclic representation of a reflection-symmetric linear colouring."""
    if c.kind == CYCLIC:
        return c
    if not check_cyclic_symmetry(c):
        raise ColouringError("colouring is not reflection-symmetric")
    half = tuple(c.colour_of[: c.order // 2])
    return LengthColouring(CYCLIC, c.order, c.num_colours, half,
                           avoid=c.avoid, template_colour=c.template_colour)


def offset_colours(c: LengthColouring, by: int) -> LengthColouring:
    """Shift every colour id up by `by` (for disjoint colour sets)."""
    return LengthColouring(
        c.kind, c.order, c.num_colours + by,
        tuple(col + by for col in c.colour_of),
        template_colour=(None if c.template_colour is None
                         else c.template_colour + by),
    )


# ---------------------------------------------------------------------------
# File format.  One JSON object; canonical key order is fixed so that
# serialization is byte-exact and golden-file friendly.

_KEY_ORDER = ("kind", "order", "num_colours", "avoid", "colours",
              "template_colour", "comment")


def serialize_colouring(c: LengthColouring | ExplicitColouring) -> str:
    obj: dict = {}
    if isinstance(c, LengthColouring):
        obj["kind"] = c.kind
        obj["order"] = c.order
        obj["num_colours"] = c.num_colours
        if c.avoid is not None:
            obj["avoid"] = list(c.avoid)
        obj["colours"] = list(c.colour_of)
        if c.template_colour is not None:
            obj["template_colour"] = c.template_colour
        if c.comment is not None:
            obj["comment"] = c.comment
    elif isinstance(c, ExplicitColouring):
        obj["kind"] = EXPLICIT
        obj["order"] = c.order
        obj["num_colours"] = c.num_colours
        if c.avoid is not None:
            obj["avoid"] = list(c.avoid)
        obj["colours"] = c.upper_triangle()
        if c.comment is not None:
            obj["comment"] = c.comment
    else:
        raise ColouringError(f"cannot serialize {type(c).__name__}")
    return json.dumps(obj, indent=2) + "\n"


def parse_colouring(text: str) -> LengthColouring | ExplicitColouring:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ColouringError(f"document: invalid JSON ({e})") from None
    if not isinstance(obj, dict):
        raise ColouringError("document: expected a JSON object")
    for key in obj:
        if key not in _KEY_ORDER:
            raise ColouringError(f"{key}: unknown field")
    for key in ("kind", "order", "num_colours", "colours"):
        if key not in obj:
            raise ColouringError(f"{key}: missing required field")
    kind = obj["kind"]
    order = _expect_int(obj, "order")
    num_colours = _expect_int(obj, "num_colours")
    colours = obj["colours"]
    if not (isinstance(colours, list) and all(isinstance(x, int) for x in colours)):
        raise ColouringError("colours: expected a list of integers")
    avoid = None
    if "avoid" in obj:
        if not (isinstance(obj["avoid"], list)
                and all(isinstance(x, int) for x in obj["avoid"])):
            raise ColouringError("avoid: expected a list of integers")
        avoid = tuple(obj["avoid"])
    comment = obj.get("comment")
    if comment is not None and not isinstance(comment, str):
        raise ColouringError("comment: expected a string")
    if kind == EXPLICIT:
        if "template_colour" in obj:
            raise ColouringError("template_colour: not valid on explicit colourings")
        return explicit_from_upper_triangle(order, num_colours, colours,
                                            avoid=avoid, comment=comment)
    template_colour = obj.get("template_colour")
    if template_colour is not None and not isinstance(template_colour, int):
        raise ColouringError("template_colour: expected an integer")
    return LengthColouring(kind, order, num_colours, tuple(colours),
                           avoid=avoid, template_colour=template_colour,
                           comment=comment)


def _expect_int(obj: dict, key: str) -> int:
    v = obj[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ColouringError(f"{key}: expected an integer")
    return v


def load_colouring(path) -> LengthColouring | ExplicitColouring:
    with open(path, encoding="utf-8") as f:
        return parse_colouring(f.read())


def save_colouring(c, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(serialize_colouring(c))


# Small named colourings used throughout.

def single_edge() -> LengthColouring:
    """Order-2 one-colour colouring, the base case for compound chains."""
    return LengthColouring(LINEAR, 2, 1, (1,), avoid=(3,))


def pentagon() -> LengthColouring:
    """The classic triangle-free 2-colouring of K_5 (cyclic, order 5)."""
    return LengthColouring(CYCLIC, 5, 2, (1, 2), avoid=(3, 3))
