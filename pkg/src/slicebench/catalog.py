"""Named function families and graph constructions.

Each constructor returns a plain LabeledFunction (or SliceGraph); the
ConstructionSpec layer gives every scalar-parameter family a stable textual
name so the command line can rebuild any of them from a short string.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Any, Callable

from .errors import DomainError
from .slicecore import (
    BOOLEAN,
    Domain,
    LabeledFunction,
    SliceGraph,
    from_graph,
    string_to_mask,
)


def make_eq(k: int) -> LabeledFunction:
    """Equality of the two halves, on slice(4k, 2k)."""
    if k < 1:
        raise DomainError("make_eq needs k >= 1")
    half = 2 * k
    low = (1 << half) - 1
    dom = Domain.slice(4 * k, half)
    return LabeledFunction.from_callable(
        dom, lambda x: 1 if (x & low) == (x >> half) else 0, BOOLEAN
    )


def make_ed(k: int, l: int) -> LabeledFunction:
    """Element distinctness of k blocks of l bits, on slice(kl, kl/2)."""
    if l < 1 or not 2 <= k <= (1 << l):
        raise DomainError("make_ed needs l >= 1 and 2 <= k <= 2^l")
    if k * l % 2:
        raise DomainError("make_ed needs kl even")
    n = k * l
    dom = Domain.slice(n, n // 2)
    low = (1 << l) - 1

    def distinct(x: int) -> int:
        seen = 0
        for i in range(k):
            block = x >> (i * l) & low
            if seen >> block & 1:
                return 0
            seen |= 1 << block
        return 1

    return LabeledFunction.from_callable(dom, distinct, BOOLEAN)


def graham_sloane(n: int, k: int, i: int | None = None):
    """Sum-classes of k-subsets of Z_n.

    Returns (classes, best, indicator): classes[j] lists the member masks
    whose set positions sum to j mod n, best is the argmax class index
    (smallest on ties), and indicator marks class i (default: best).
    """
    if not 1 <= k <= n - 1:
        raise DomainError("graham_sloane needs 1 <= k <= n-1")
    dom = Domain.slice(n, k)
    classes: list[list[int]] = [[] for _ in range(n)]
    for xm in dom.members():
        total = 0
        m = xm
        while m:
            low = m & -m
            total += low.bit_length() - 1
            m ^= low
        classes[total % n].append(xm)
    best = max(range(n), key=lambda j: (len(classes[j]), -j))
    pick = best if i is None else i
    if not 0 <= pick < n:
        raise DomainError(f"class index {pick} outside Z_{n}")
    chosen = set(classes[pick])
    f = LabeledFunction.from_callable(dom, lambda x: 1 if x in chosen else 0, BOOLEAN)
    return classes, best, f


def kml_cardinality(r: int) -> int:
    """Closed form for the size of the XOR-zero class on slice(2^r, 2^(r-1))."""
    if r < 2:
        raise DomainError("kml needs r >= 2")
    n = 1 << r
    return (math.comb(n, n // 2) + (n - 1) * math.comb(n // 2, n // 4)) // n


def kml_set(r: int) -> LabeledFunction:
    """Indicator of half-size subsets of Z_2^r whose elements XOR to zero."""
    if r < 2:
        raise DomainError("kml needs r >= 2")
    n = 1 << r
    dom = Domain.slice(n, n // 2)

    def xor_zero(xm: int) -> int:
        acc = 0
        m = xm
        while m:
            low = m & -m
            acc ^= low.bit_length() - 1
            m ^= low
        return 1 if acc == 0 else 0

    return LabeledFunction.from_callable(dom, xor_zero, BOOLEAN)


def paley_weight2(q: int) -> SliceGraph:
    """Paley graph on q vertices; q must be a prime with q % 4 == 1."""
    if q < 5 or any(q % d == 0 for d in range(2, math.isqrt(q) + 1)):
        raise DomainError("paley needs a prime q >= 5")
    if q % 4 != 1:
        raise DomainError("paley needs q % 4 == 1 so the graph is undirected")
    squares = {x * x % q for x in range(1, q)}
    edges = [(u, v) for u in range(q) for v in range(u + 1, q) if (v - u) % q in squares]
    return SliceGraph.from_edges(q, edges)


def random_graph(n: int, seed: int) -> SliceGraph:
    """Uniform random graph: each pair independently an edge with odds 1/2."""
    rng = random.Random(seed)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.getrandbits(1)
    ]
    return SliceGraph.from_edges(n, edges)


def _rubinstein(n: int, patterns: Callable[[int], list[str]]) -> LabeledFunction:
    root = math.isqrt(n)
    if root * root != n or root % 2:
        raise DomainError("needs n a perfect square with sqrt(n) even")
    masks = {string_to_mask(s) for s in patterns(root // 2)}
    low = (1 << root) - 1

    def g(x: int) -> int:
        for j in range(root):
            if x >> (j * root) & low in masks:
                return 1
        return 0

    return LabeledFunction.from_callable(Domain.cube(n), g, BOOLEAN)


def rubinstein_variant(n: int) -> LabeledFunction:
    """OR over sqrt(n) blocks of the swapped-pair pattern predicate."""
    return _rubinstein(
        n, lambda k: ["01" * i + "10" + "01" * (k - i - 1) for i in range(k)]
    )


def rubinstein_original(n: int) -> LabeledFunction:
    """OR over sqrt(n) blocks of the adjacent-ones pattern predicate."""
    return _rubinstein(
        n, lambda k: ["00" * i + "11" + "00" * (k - i - 1) for i in range(k)]
    )


def slice_restriction(g: LabeledFunction, k: int | None = None) -> LabeledFunction:
    """The same evaluation rule on slice(n, k); default is the balanced slice."""
    if g.domain.kind != "cube":
        raise DomainError("slice_restriction starts from a cube function")
    n = g.domain.n
    if k is None:
        if n % 2:
            raise DomainError("default balanced slice needs n even")
        k = n // 2
    return LabeledFunction.from_callable(
        Domain.slice(n, k), g.evaluate, g.alphabet
    )


def lift(g: LabeledFunction) -> LabeledFunction:
    """f(x, y) = g(x) on slice(2n, n), for total Boolean g on cube(n)."""
    if g.domain.kind != "cube":
        raise DomainError("lift starts from a cube function")
    if not g.is_boolean:
        raise DomainError("lift needs a Boolean function")
    n = g.domain.n
    low = (1 << n) - 1
    return LabeledFunction.from_callable(
        Domain.slice(2 * n, n), lambda z: g.evaluate(z & low), BOOLEAN
    )


def weights_task(n: int, m: int, k: int) -> LabeledFunction:
    """Labels each input by its descending-sorted vector of block weights."""
    if n < 1 or m < 1:
        raise DomainError("weights_task needs n, m >= 1")
    dom = Domain.slice(n * m, k)
    low = (1 << m) - 1

    def label(x: int):
        return tuple(
            sorted(((x >> (i * m) & low).bit_count() for i in range(n)), reverse=True)
        )

    return LabeledFunction.from_callable(dom, label)


def compose_symmetric(fsym, gsym, k: int) -> LabeledFunction:
    """(f of g) on slice(nm, k) for symmetric f, g given value-by-weight.

    fsym has n+1 entries (any int labels); gsym has m+1 entries in {0,1};
    the value at z is fsym[sum over blocks of gsym[block weight]].
    """
    fsym = list(fsym)
    gsym = list(gsym)
    n = len(fsym) - 1
    m = len(gsym) - 1
    if n < 1 or m < 1:
        raise DomainError("symmetric specs need at least 2 entries")
    if not set(gsym) <= {0, 1}:
        raise DomainError("inner symmetric values must be 0/1")
    dom = Domain.slice(n * m, k)
    low = (1 << m) - 1

    def value(z: int):
        total = sum(gsym[(z >> (i * m) & low).bit_count()] for i in range(n))
        return fsym[total]

    return LabeledFunction.from_callable(dom, value)


def random_slice_function(
    n: int, k: int, seed: int, alphabet=BOOLEAN
) -> LabeledFunction:
    """Uniform random table on slice(n, k), reproducible from the seed."""
    dom = Domain.slice(n, k)
    rng = random.Random(seed)
    idx = [rng.randrange(len(alphabet)) for _ in range(dom.size)]
    return LabeledFunction.from_indices(dom, alphabet, idx)


def or_first_half(n: int) -> LabeledFunction:
    """OR of the first floor(n/2) positions, on slice(n, 1)."""
    if n < 2:
        raise DomainError("or_first_half needs n >= 2")
    mask = (1 << (n // 2)) - 1
    return LabeledFunction.from_callable(
        Domain.slice(n, 1), lambda x: 1 if x & mask else 0, BOOLEAN
    )


# -- construction registry -------------------------------------------------------


@dataclass(frozen=True)
class ConstructionSpec:
    """A named scalar-parameter construction, rebuildable from a string."""

    name: str
    params: tuple[tuple[str, Any], ...]

    @classmethod
    def of(cls, name: str, **params: Any) -> "ConstructionSpec":
        return cls(name=name, params=tuple(sorted(params.items())))

    def build(self) -> LabeledFunction:
        builder = REGISTRY.get(self.name)
        if builder is None:
            raise DomainError(
                f"unknown construction {self.name!r}; known: {', '.join(sorted(REGISTRY))}"
            )
        try:
            return builder(**dict(self.params))
        except TypeError as e:
            raise DomainError(f"bad parameters for {self.name!r}: {e}") from None

    def to_string(self) -> str:
        if not self.params:
            return self.name
        parts = []
        for key, value in self.params:
            if isinstance(value, tuple):
                value = "-".join(str(v) for v in value)
            parts.append(f"{key}={value}")
        return self.name + ":" + ",".join(parts)

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "params": {k: list(v) if isinstance(v, tuple) else v for k, v in self.params},
        }


def parse_construction(text: str) -> ConstructionSpec:
    """Parse "name" or "name:key=val,..."; dash-joined ints become tuples."""
    name, sep, rest = text.partition(":")
    name = name.strip()
    if not name:
        raise DomainError("empty construction name")
    params: dict[str, Any] = {}
    if sep:
        for part in rest.split(","):
            key, eq, raw = part.partition("=")
            key = key.strip()
            raw = raw.strip()
            if not eq or not key or not raw:
                raise DomainError(f"bad construction parameter {part!r}")
            if key in params:
                raise DomainError(f"duplicate construction parameter {key!r}")
            params[key] = _parse_value(raw)
    return ConstructionSpec.of(name, **params)


def _parse_value(raw: str) -> Any:
    try:
        if "-" in raw.lstrip("-"):
            return tuple(int(v) for v in raw.split("-"))
        return int(raw)
    except ValueError:
        raise DomainError(f"construction parameters must be ints, not {raw!r}") from None


REGISTRY: dict[str, Callable[..., LabeledFunction]] = {
    "eq": make_eq,
    "ed": make_ed,
    "gs": lambda n, k, i=None: graham_sloane(n, k, i)[2],
    "kml": kml_set,
    "paley": lambda q: from_graph(paley_weight2(q)),
    "random-graph": lambda n, seed: from_graph(random_graph(n, seed)),
    "rubinstein-variant": rubinstein_variant,
    "rubinstein-original": rubinstein_original,
    "rubinstein-slice": lambda n: slice_restriction(rubinstein_original(n)),
    "weights": weights_task,
    "compose": lambda fsym, gsym, k: compose_symmetric(fsym, gsym, k),
    "random": random_slice_function,
    "or-first-half": or_first_half,
}
