"""Persistent database of graph-existence facts and derived lower bounds.

Facts come in three kinds: graph_exists (a colouring of some order with the
stated clique bounds), ramsey_lower_bound (R(...) >= value), and
gamma_lower_bound (limiting growth rate, stored as an exact radical).
Certificates are explicit (a verified colouring file), asserted (a sourced
claim), or derived (a rule application with parent facts), and every derived
value is recomputable from its parents.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from decimal import ROUND_DOWN, Decimal, getcontext
from fractions import Fraction
from importlib import resources

from .colouring import load_colouring
from .cliques import ramsey_check

GRAPH = "graph_exists"
RAMSEY = "ramsey_lower_bound"
GAMMA = "gamma_lower_bound"


class LedgerError(ValueError):
    pass


@dataclass(frozen=True)
class GammaValue:
    """Exact radical base**(1/root); rendered to 6 decimals, rounded down.

    Rounding toward zero keeps the rendered figure a valid lower bound.
    """

    base: Fraction
    root: int = 1

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        if self.root < 1:
            raise LedgerError(f"root must be >= 1, got {self.root}")

    def render(self, places: int = 6) -> str:
        getcontext().prec = 50
        x = Decimal(self.base.numerator) / Decimal(self.base.denominator)
        val = x ** (Decimal(1) / Decimal(self.root)) if self.root > 1 else x
        quantum = Decimal(1).scaleb(-places)
        return str(val.quantize(quantum, rounding=ROUND_DOWN))

    def __float__(self) -> float:
        return float(self.base) ** (1.0 / self.root)

    def _cmp_key(self, other: "GammaValue"):
        # a**(1/p) vs c**(1/q)  <=>  a**q vs c**p, exactly in rationals
        return self.base ** other.root, other.base ** self.root

    def __lt__(self, other):
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_key(other)
        return a <= b


@dataclass(frozen=True)
class BoundFact:
    kind: str
    parameters: tuple[int, ...]
    value: int | GammaValue
    certificate: dict
    flags: dict = field(default_factory=dict)
    fact_id: int | None = None

    def __post_init__(self):
        if self.kind not in (GRAPH, RAMSEY, GAMMA):
            raise LedgerError(f"unknown fact kind {self.kind!r}")
        ctype = self.certificate.get("type")
        if ctype not in ("explicit", "asserted", "derived"):
            raise LedgerError(f"unknown certificate type {ctype!r}")
        if self.kind == GAMMA and not isinstance(self.value, GammaValue):
            raise LedgerError("gamma facts need a GammaValue")
        if self.kind != GAMMA and not isinstance(self.value, int):
            raise LedgerError("order/bound facts need an integer value")

    @property
    def sorted_parameters(self) -> tuple[int, ...]:
        return tuple(sorted(self.parameters))

    def identity(self):
        value_key = (
            (self.value.base, self.value.root)
            if isinstance(self.value, GammaValue) else self.value
        )
        return (self.kind, self.parameters, value_key,
                json.dumps(self.certificate, sort_keys=True),
                json.dumps(self.flags, sort_keys=True))


def graph_fact(parameters, order, certificate, **flags) -> BoundFact:
    return BoundFact(GRAPH, tuple(parameters), order, certificate, dict(flags))


def asserted(source: str) -> dict:
    return {"type": "asserted", "source": source}


def derived(rule: str, parents: list[int], note: str | None = None) -> dict:
    cert = {"type": "derived", "rule": rule, "parents": list(parents)}
    if note:
        cert["note"] = note
    return cert


# ---------------------------------------------------------------------------
# Derivation rules.  Each rule is pure: given parent facts it either returns
# a new fact (without an id) or None when inapplicable.

def _is_linear_graph(f: BoundFact) -> bool:
    # every cyclic colouring is in particular linear
    return f.kind == GRAPH and (f.flags.get("linear") or f.flags.get("cyclic"))


def _rule_giraud(f: BoundFact, k_new: int = 3):
    """Add one colour with bound k_new to a cyclic graph: order x (2k-3)."""
    if f.kind != GRAPH or not f.flags.get("cyclic"):
        return None
    params = f.parameters + (k_new,)
    value = (2 * k_new - 3) * f.value
    return BoundFact(GRAPH, params, value, derived("r1", [f.fact_id]),
                     {"cyclic": True})


def _product_value(m: int, n: int) -> int:
    return ((2 * m - 1) * (2 * n - 1) + 1) // 2


def _rule_abbott_hanson(f1: BoundFact, f2: BoundFact):
    """Equal-k linear product (the historical special case of r3)."""
    if not (_is_linear_graph(f1) and _is_linear_graph(f2)):
        return None
    ks = set(f1.parameters) | set(f2.parameters)
    if len(ks) != 1:
        return None
    params = f1.parameters + f2.parameters
    return BoundFact(GRAPH, params, _product_value(f1.value, f2.value),
                     derived("r2", [f1.fact_id, f2.fact_id]),
                     {"linear": True})


def _rule_product_linear(f1: BoundFact, f2: BoundFact):
    if not (_is_linear_graph(f1) and _is_linear_graph(f2)):
        return None
    params = f1.parameters + f2.parameters
    return BoundFact(GRAPH, params, _product_value(f1.value, f2.value),
                     derived("r3", [f1.fact_id, f2.fact_id]),
                     {"linear": True})


def _rule_product_cyclic(f1: BoundFact, f2: BoundFact):
    if not (f1.kind == GRAPH and f2.kind == GRAPH
            and f1.flags.get("cyclic") and f2.flags.get("cyclic")):
        return None
    params = f1.parameters + f2.parameters
    return BoundFact(GRAPH, params, _product_value(f1.value, f2.value),
                     derived("r4", [f1.fact_id, f2.fact_id]),
                     {"cyclic": True})


def _rule_template_compound(ft: BoundFact, fg: BoundFact):
    """Template of order t with offset phi, times a linear graph of order n:
    order (t-1)(n-1) + 1 + phi."""
    if not (ft.kind == GRAPH and ft.flags.get("template")
            and ft.flags.get("phi") is not None
            and ft.parameters and ft.parameters[-1] == 3):
        return None
    if not _is_linear_graph(fg):
        return None
    params = ft.parameters[:-1] + fg.parameters  # drop the template's 3
    value = (ft.value - 1) * (fg.value - 1) + 1 + ft.flags["phi"]
    return BoundFact(GRAPH, params, value,
                     derived("r5", [ft.fact_id, fg.fact_id]),
                     {"linear": True})


def _rule_song(f1: BoundFact, f2: BoundFact):
    """Pointwise product of Ramsey lower bounds (bounds matched sorted)."""
    if not (f1.kind == RAMSEY and f2.kind == RAMSEY):
        return None
    if len(f1.parameters) != len(f2.parameters):
        return None
    p1 = f1.sorted_parameters
    p2 = f2.sorted_parameters
    if any(k < 2 for k in p1 + p2):
        return None
    params = tuple((a - 1) * (b - 1) + 1 for a, b in zip(p1, p2))
    value = (f1.value - 1) * (f2.value - 1) + 1
    return BoundFact(RAMSEY, params, value,
                     derived("r6", [f1.fact_id, f2.fact_id]))


def _rule_graph_to_bound(f: BoundFact):
    if f.kind != GRAPH:
        return None
    note = f.flags.get("provenance_note")
    return BoundFact(RAMSEY, f.parameters, f.value + 1,
                     derived("r7", [f.fact_id], note=note))


def _rule_quadruple_twice(f: BoundFact):
    """Two quadrupling steps: (3, k_2, ..., k_r; n) -> (9, k_2+1, ...; 16n).

    Applies to cyclic graphs with exactly one bound equal to 3 (the
    triangle-free colour).  A known colour-degree in that colour propagates
    through the composite degree formula 9*d + 7*n + 5.
    """
    if f.kind != GRAPH or not f.flags.get("cyclic"):
        return None
    if f.parameters.count(3) != 1 or len(f.parameters) < 2:
        return None
    i3 = f.parameters.index(3)
    others = tuple(k + 1 for j, k in enumerate(f.parameters) if j != i3)
    params = (9,) + others
    flags = {}
    d = f.flags.get("special_degree")
    if d is not None:
        flags["special_degree"] = 9 * d + 7 * f.value + 5
        flags["special_degree_index"] = 0
    return BoundFact(GRAPH, params, 16 * f.value,
                     derived("r8", [f.fact_id]), flags)


def _rule_degree_neighbourhood(f: BoundFact):
    """Regular colour degree D: the neighbourhood in that colour induces a
    graph with the colour's bound reduced by one and order D."""
    if f.kind != GRAPH:
        return None
    d = f.flags.get("special_degree")
    idx = f.flags.get("special_degree_index")
    if d is None or idx is None:
        return None
    k = f.parameters[idx]
    if k <= 2:
        return None
    params = (f.parameters[:idx] + (k - 1,) + f.parameters[idx + 1:])
    return BoundFact(GRAPH, params, d, derived("r9", [f.fact_id]))


def _rule_gamma_from_template(f: BoundFact):
    """Diagonal (k x p, 3)-template of order t gives Gamma(k) >= (t-1)**(1/p)."""
    if f.kind != GRAPH or not f.flags.get("template"):
        return None
    non_template = tuple(k for k in f.parameters if k != 3)
    p = len(non_template)
    if p == 0 or len(non_template) != len(f.parameters) - 1:
        return None
    if len(set(non_template)) != 1:
        return None
    k = non_template[0]
    return BoundFact(GAMMA, (k,), GammaValue(Fraction(f.value - 1), p),
                     derived("r10", [f.fact_id]))


def _rule_abbott_fifth(f: BoundFact):
    """R_r(5) >= (R_r(3) - 1)**2 + 1, and Gamma(5) >= Gamma(3)**2."""
    if f.kind == GAMMA and f.parameters == (3,):
        g = f.value
        return BoundFact(GAMMA, (5,),
                         GammaValue(g.base ** 2, g.root),
                         derived("r11", [f.fact_id]))
    if f.kind == RAMSEY and f.parameters and set(f.parameters) == {3}:
        r = len(f.parameters)
        return BoundFact(RAMSEY, (5,) * r, (f.value - 1) ** 2 + 1,
                         derived("r11", [f.fact_id]))
    return None


UNARY_RULES = {
    "r1": _rule_giraud,
    "r7": _rule_graph_to_bound,
    "r8": _rule_quadruple_twice,
    "r9": _rule_degree_neighbourhood,
    "r10": _rule_gamma_from_template,
    "r11": _rule_abbott_fifth,
}

BINARY_RULES = {
    "r2": _rule_abbott_hanson,
    "r3": _rule_product_linear,
    "r4": _rule_product_cyclic,
    "r5": _rule_template_compound,
    "r6": _rule_song,
}

ALL_RULES = tuple(sorted(UNARY_RULES | BINARY_RULES))


class Ledger:
    """In-memory fact set with optional append-only file persistence."""

    def __init__(self):
        self.facts: list[BoundFact] = []
        self._identities: set = set()
        # value-level dedup: (kind, sorted params, value key) already present
        self._value_keys: set = set()

    def _value_key(self, f: BoundFact):
        value_key = (
            (f.value.base, f.value.root) if isinstance(f.value, GammaValue)
            else f.value
        )
        return (f.kind, f.sorted_parameters, value_key)

    def add_fact(self, f: BoundFact, base_dir: str = ".") -> int:
        """Store a fact; idempotent on identical facts.

        Explicit certificates are re-verified on ingest: the referenced
        colouring file must pass the fact's parameter vector.
        """
        probe = replace(f, fact_id=None)
        if probe.identity() in self._identities:
            for existing in self.facts:
                if replace(existing, fact_id=None).identity() == probe.identity():
                    return existing.fact_id
        if f.certificate.get("type") == "explicit":
            self._verify_explicit(f, base_dir)
            f = replace(f, certificate={**f.certificate, "verified": True})
            probe = replace(f, fact_id=None)
            if probe.identity() in self._identities:
                for existing in self.facts:
                    if replace(existing, fact_id=None).identity() == probe.identity():
                        return existing.fact_id
        fact = replace(f, fact_id=len(self.facts) + 1)
        self.facts.append(fact)
        self._identities.add(probe.identity())
        self._value_keys.add(self._value_key(fact))
        return fact.fact_id

    def _verify_explicit(self, f: BoundFact, base_dir: str) -> None:
        if f.kind != GRAPH:
            raise LedgerError("explicit certificates apply to graph facts")
        path = f.certificate.get("path")
        if not path:
            raise LedgerError("explicit certificate without a file path")
        full = path if os.path.isabs(path) else os.path.join(base_dir, path)
        colouring = load_colouring(full)
        if colouring.order != f.value:
            raise LedgerError(
                f"certificate order {colouring.order} != fact order {f.value}"
            )
        report = ramsey_check(colouring, f.parameters, want_witness=True)
        if not report.passes:
            raise LedgerError(
                f"certificate fails verification: clique sizes "
                f"{report.per_colour_max} vs bounds {f.parameters}"
            )

    def get(self, fact_id: int) -> BoundFact:
        return self.facts[fact_id - 1]

    # -- closure ----------------------------------------------------------

    def derive_closure(self, rules=None, depth: int = 2,
                       max_colours: int = 16) -> list[BoundFact]:
        """Apply the rule set to fixpoint, bounded by `depth` passes.

        Facts are processed in id order, so the result is deterministic for
        a given insertion order.  Re-running is idempotent.
        """
        enabled = list(rules) if rules is not None else list(ALL_RULES)
        for r in enabled:
            if r not in UNARY_RULES and r not in BINARY_RULES:
                raise LedgerError(f"unknown rule {r!r}")
        new_facts: list[BoundFact] = []
        for _ in range(depth):
            produced: list[BoundFact] = []
            snapshot = list(self.facts)
            for rule_id in enabled:
                if rule_id in UNARY_RULES:
                    fn = UNARY_RULES[rule_id]
                    for f in snapshot:
                        out = fn(f)
                        if out is not None:
                            produced.append(out)
                else:
                    fn = BINARY_RULES[rule_id]
                    for f1 in snapshot:
                        for f2 in snapshot:
                            out = fn(f1, f2)
                            if out is not None:
                                produced.append(out)
            added_any = False
            for out in produced:
                if len(out.parameters) > max_colours:
                    continue
                if self._value_key(out) in self._value_keys:
                    continue
                self.add_fact(out)
                new_facts.append(self.facts[-1])
                added_any = True
            if not added_any:
                break
        return new_facts

    # -- queries ----------------------------------------------------------

    def best_bound(self, kind: str, parameters) -> BoundFact | None:
        """Maximal fact matching kind and parameters up to colour order."""
        key = tuple(sorted(parameters))
        best = None
        for f in self.facts:
            if f.kind != kind or f.sorted_parameters != key:
                continue
            if best is None or _value_less(best.value, f.value):
                best = f
        return best

    def provenance_chain(self, f: BoundFact) -> list[BoundFact]:
        """The fact and all its ancestors, oldest first."""
        seen: dict[int, BoundFact] = {}

        def walk(fact: BoundFact):
            if fact.fact_id in seen:
                return
            if fact.certificate.get("type") == "derived":
                for pid in fact.certificate["parents"]:
                    walk(self.get(pid))
            seen[fact.fact_id] = fact

        walk(f)
        return list(seen.values())

    def recompute_check(self) -> None:
        """Re-derive every derived fact from its parents; raise on mismatch."""
        for f in self.facts:
            if f.certificate.get("type") != "derived":
                continue
            rule_id = f.certificate["rule"]
            parents = [self.get(p) for p in f.certificate["parents"]]
            if rule_id in UNARY_RULES:
                out = UNARY_RULES[rule_id](*parents)
            else:
                out = BINARY_RULES[rule_id](*parents)
            if out is None or out.value != f.value or out.parameters != f.parameters:
                raise LedgerError(
                    f"fact {f.fact_id}: not recomputable by rule {rule_id}"
                )

    def emit_table(self, k_range, r_range, fmt: str = "md") -> str:
        """Grid of best known graph orders for diagonal parameters.

        Cell markers: e = explicit certificate, a = asserted, d = derived.
        """
        ks = list(k_range)
        rs = list(r_range)
        rows = []
        header = ["k\\r"] + [str(r) for r in rs]
        rows.append(header)
        for k in ks:
            row = [str(k)]
            for r in rs:
                f = self.best_bound(GRAPH, (k,) * r)
                if f is None:
                    row.append("-")
                else:
                    marker = f.certificate["type"][0]
                    row.append(f"{f.value} ({marker})")
            rows.append(row)
        if fmt == "csv":
            return "\n".join(",".join(row) for row in rows) + "\n"
        if fmt == "md":
            out = ["| " + " | ".join(rows[0]) + " |",
                   "|" + "|".join("---" for _ in rows[0]) + "|"]
            for row in rows[1:]:
                out.append("| " + " | ".join(row) + " |")
            return "\n".join(out) + "\n"
        raise LedgerError(f"unknown table format {fmt!r}")

    # -- persistence ------------------------------------------------------

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for fact in self.facts:
                f.write(json.dumps(_fact_to_json(fact)) + "\n")

    @classmethod
    def load(cls, path) -> "Ledger":
        ledger = cls()
        with open(path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                fact = _fact_from_json(json.loads(line))
                ledger.add_fact(replace(fact, fact_id=None))
        return ledger


def _value_less(a, b) -> bool:
    if isinstance(a, GammaValue) and isinstance(b, GammaValue):
        return a < b
    return a < b


def _fact_to_json(f: BoundFact) -> dict:
    value = (
        {"base": [f.value.base.numerator, f.value.base.denominator],
         "root": f.value.root}
        if isinstance(f.value, GammaValue) else f.value
    )
    return {"id": f.fact_id, "kind": f.kind, "parameters": list(f.parameters),
            "value": value, "certificate": f.certificate, "flags": f.flags}


def _fact_from_json(obj: dict) -> BoundFact:
    value = obj["value"]
    if isinstance(value, dict):
        num, den = value["base"]
        value = GammaValue(Fraction(num, den), value["root"])
    return BoundFact(obj["kind"], tuple(obj["parameters"]), value,
                     obj["certificate"], obj.get("flags", {}),
                     obj.get("id"))


def load_seed_pack(ledger: Ledger) -> list[int]:
    """Load the shipped asserted-fact pack into a ledger."""
    text = (resources.files("ramseykit.data") / "seed_facts.jsonl").read_text()
    ids = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        fact = _fact_from_json(json.loads(line))
        ids.append(ledger.add_fact(replace(fact, fact_id=None)))
    return ids
