"""Domains, labeled function tables, partial assignments, and slice graphs.

Strings of length n are stored as machine-word bitmasks: bit i of the mask is
the character at position i, so the textual form "1100" has positions {0, 1}
set.  Domains enumerate their members in a fixed order (colexicographic for
slices, numeric for the cube, list order for explicit domains) and expose
rank/unrank between members and table indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    DomainError,
    EmptyRestrictionError,
    MembershipError,
    ResourceCapError,
)

MAX_POSITIONS = 64
MAX_DOMAIN_SIZE = 1 << 26
MAX_ALPHABET = 256

Label = int | tuple[int, ...]


def string_to_mask(s: str) -> int:
    """Parse a 0/1 string; character i gives position i."""
    m = 0
    for i, ch in enumerate(s):
        if ch == "1":
            m |= 1 << i
        elif ch != "0":
            raise DomainError(f"invalid character {ch!r} in bit string {s!r}")
    return m


def mask_to_string(mask: int, n: int) -> str:
    return "".join("1" if mask >> i & 1 else "0" for i in range(n))


def iter_colex_masks(n: int, k: int) -> Iterator[int]:
    """All weight-k masks on n positions in colexicographic order."""
    if k == 0:
        yield 0
        return
    for top in range(k - 1, n):
        bit = 1 << top
        for rest in iter_colex_masks(top, k - 1):
            yield rest | bit


def colex_rank(mask: int) -> int:
    """Rank of a mask among same-weight masks, colexicographic order."""
    r = 0
    j = 1
    while mask:
        low = mask & -mask
        r += math.comb(low.bit_length() - 1, j)
        j += 1
        mask ^= low
    return r


def colex_unrank(r: int, n: int, k: int) -> int:
    mask = 0
    c = n - 1
    for j in range(k, 0, -1):
        while math.comb(c, j) > r:
            c -= 1
        mask |= 1 << c
        r -= math.comb(c, j)
        c -= 1
    return mask


@dataclass(frozen=True)
class Domain:
    """A set of equal-length 0/1 strings: a weight slice, the full cube, or an
    explicit list."""

    n: int
    kind: str
    k: int | None = None
    explicit_members: tuple[int, ...] | None = None

    def __post_init__(self):
        if not 0 <= self.n <= MAX_POSITIONS:
            raise DomainError(f"n={self.n} outside 0..{MAX_POSITIONS}")
        if self.kind == "slice":
            if self.n < 2 or self.k is None or not 1 <= self.k <= self.n - 1:
                raise DomainError(f"slice needs 1 <= k <= n-1, got n={self.n} k={self.k}")
        elif self.kind == "cube":
            if self.n < 1:
                raise DomainError("cube needs n >= 1")
            if self.k is not None:
                raise DomainError("cube takes no k")
        elif self.kind == "explicit":
            mem = self.explicit_members
            if not mem:
                raise DomainError("explicit domain needs at least one member")
            if len(set(mem)) != len(mem):
                raise DomainError("explicit members must be distinct")
            top = 1 << self.n
            if any(not 0 <= x < top for x in mem):
                raise DomainError("explicit member out of range for n")
        else:
            raise DomainError(f"unknown domain kind {self.kind!r}")
        if self.size > MAX_DOMAIN_SIZE:
            raise ResourceCapError(
                f"domain size {self.size} exceeds cap {MAX_DOMAIN_SIZE}"
            )

    # -- constructors ---------------------------------------------------

    @classmethod
    def slice(cls, n: int, k: int) -> "Domain":
        return cls(n=n, kind="slice", k=k)

    @classmethod
    def cube(cls, n: int) -> "Domain":
        return cls(n=n, kind="cube")

    @classmethod
    def explicit(cls, n: int, members: Iterable[int]) -> "Domain":
        return cls(n=n, kind="explicit", explicit_members=tuple(members))

    # -- basic queries ---------------------------------------------------

    @cached_property
    def size(self) -> int:
        if self.kind == "slice":
            return math.comb(self.n, self.k)
        if self.kind == "cube":
            return 1 << self.n
        return len(self.explicit_members)

    @property
    def is_balanced_slice(self) -> bool:
        return self.kind == "slice" and self.n == 2 * self.k

    def __contains__(self, mask: int) -> bool:
        if not 0 <= mask < (1 << self.n):
            return False
        if self.kind == "slice":
            return mask.bit_count() == self.k
        if self.kind == "cube":
            return True
        return mask in self._explicit_index

    def members(self) -> Iterator[int]:
        if self.kind == "slice":
            yield from iter_colex_masks(self.n, self.k)
        elif self.kind == "cube":
            yield from range(1 << self.n)
        else:
            yield from self.explicit_members

    def rank(self, mask: int) -> int:
        if mask not in self:
            raise MembershipError(
                f"{mask_to_string(mask, self.n)} not in {self.describe()}"
            )
        if self.kind == "slice":
            return colex_rank(mask)
        if self.kind == "cube":
            return mask
        return self._explicit_index[mask]

    def unrank(self, r: int) -> int:
        if not 0 <= r < self.size:
            raise MembershipError(f"rank {r} out of range for {self.describe()}")
        if self.kind == "slice":
            return colex_unrank(r, self.n, self.k)
        if self.kind == "cube":
            return r
        return self.explicit_members[r]

    def rank_map(self) -> dict[int, int]:
        """mask -> rank dictionary; build on demand for hot loops."""
        return {x: r for r, x in enumerate(self.members())}

    @cached_property
    def _explicit_index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.explicit_members)}

    def describe(self) -> str:
        if self.kind == "slice":
            return f"slice({self.n},{self.k})"
        if self.kind == "cube":
            return f"cube({self.n})"
        return f"explicit({self.n},size={self.size})"


@dataclass(frozen=True)
class Assignment:
    """A partial assignment: two disjoint position masks."""

    zeros: int = 0
    ones: int = 0

    def __post_init__(self):
        if self.zeros & self.ones:
            raise DomainError("assignment fixes a position to both 0 and 1")
        if self.zeros < 0 or self.ones < 0:
            raise DomainError("negative position mask")

    @classmethod
    def of(cls, zeros: Iterable[int] = (), ones: Iterable[int] = ()) -> "Assignment":
        z = 0
        for p in zeros:
            z |= 1 << p
        o = 0
        for p in ones:
            o |= 1 << p
        return cls(zeros=z, ones=o)

    @property
    def fixed(self) -> int:
        return self.zeros | self.ones

    @property
    def size(self) -> int:
        return self.fixed.bit_count()

    @property
    def is_balanced(self) -> bool:
        return self.zeros.bit_count() == self.ones.bit_count()

    def consistent_with(self, mask: int) -> bool:
        return (mask & self.ones) == self.ones and not (mask & self.zeros)

    def union(self, other: "Assignment") -> "Assignment":
        if (self.zeros & other.ones) or (self.ones & other.zeros):
            raise DomainError("assignments conflict on a fixed position")
        return Assignment(self.zeros | other.zeros, self.ones | other.ones)

    def positions(self) -> tuple[list[int], list[int]]:
        return (_mask_positions(self.zeros), _mask_positions(self.ones))

    def to_json_obj(self) -> dict:
        zs, os_ = self.positions()
        return {"zeros": zs, "ones": os_}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Assignment":
        return cls.of(zeros=obj.get("zeros", ()), ones=obj.get("ones", ()))


def _mask_positions(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


BOOLEAN: tuple[Label, ...] = (0, 1)


@dataclass(frozen=True)
class LabeledFunction:
    """A total function from a domain to a finite label alphabet.

    Tables are dense arrays of alphabet indices in rank order, bit-packed when
    the function is Boolean.  Labels are ints or int tuples.
    """

    domain: Domain
    alphabet: tuple[Label, ...]
    packed: bytes

    @classmethod
    def from_indices(
        cls, domain: Domain, alphabet: Sequence[Label], indices: Iterable[int]
    ) -> "LabeledFunction":
        alphabet = _normalize_alphabet(alphabet)
        idx = list(indices)
        if len(idx) != domain.size:
            raise DomainError(
                f"table length {len(idx)} != domain size {domain.size}"
            )
        if idx and (min(idx) < 0 or max(idx) >= len(alphabet)):
            raise DomainError("table index outside alphabet")
        return cls(domain=domain, alphabet=alphabet, packed=_pack(alphabet, idx))

    @classmethod
    def from_callable(
        cls,
        domain: Domain,
        fn: Callable[[int], Label],
        alphabet: Sequence[Label] | None = None,
    ) -> "LabeledFunction":
        values = [fn(x) for x in domain.members()]
        if alphabet is None:
            distinct = sorted(set(values), key=_label_sort_key)
            if set(distinct) <= {0, 1}:
                distinct = [0, 1]
            alphabet = distinct
        alphabet = _normalize_alphabet(alphabet)
        pos = {lab: i for i, lab in enumerate(alphabet)}
        try:
            idx = [pos[v] for v in values]
        except KeyError as e:
            raise DomainError(f"value {e.args[0]!r} not in alphabet") from None
        return cls(domain=domain, alphabet=alphabet, packed=_pack(alphabet, idx))

    # -- access ----------------------------------------------------------

    @property
    def is_boolean(self) -> bool:
        return self.alphabet == BOOLEAN

    def label_index(self, r: int) -> int:
        if self.is_boolean:
            return self.packed[r >> 3] >> (r & 7) & 1
        return self.packed[r]

    def label(self, r: int) -> Label:
        return self.alphabet[self.label_index(r)]

    def evaluate(self, mask: int) -> Label:
        return self.label(self.domain.rank(mask))

    def indices(self) -> list[int]:
        """The full table as a list of alphabet indices, rank order."""
        if self.is_boolean:
            p = self.packed
            return [p[r >> 3] >> (r & 7) & 1 for r in range(self.domain.size)]
        return list(self.packed)

    def labels_used(self) -> set[int]:
        return set(self.indices())

    def ones_bitset(self) -> int:
        """Big-int bitset of ranks labeled 1 (Boolean functions)."""
        if not self.is_boolean:
            raise DomainError("ones_bitset needs a Boolean function")
        return int.from_bytes(self.packed, "little") & ((1 << self.domain.size) - 1)


def position_rank_bitsets(dom: Domain) -> list[int]:
    """Per position p, the bitset of member ranks whose bit p is set."""
    out = [0] * dom.n
    for r, x in enumerate(dom.members()):
        while x:
            low = x & -x
            out[low.bit_length() - 1] |= 1 << r
            x ^= low
    return out


def label_rank_bitsets(f: LabeledFunction) -> list[int]:
    """Per alphabet index, the bitset of member ranks carrying that label."""
    out = [0] * len(f.alphabet)
    for r, li in enumerate(f.indices()):
        out[li] |= 1 << r
    return out


def _label_sort_key(lab: Label):
    # ints sort before tuples so mixed alphabets stay deterministic
    if isinstance(lab, tuple):
        return (1, lab)
    return (0, (lab,))


def _normalize_alphabet(alphabet: Sequence[Label]) -> tuple[Label, ...]:
    labs = []
    for lab in alphabet:
        if isinstance(lab, list):
            lab = tuple(lab)
        if not isinstance(lab, (int, tuple)):
            raise DomainError(f"label {lab!r} must be int or int tuple")
        if isinstance(lab, tuple) and not all(isinstance(v, int) for v in lab):
            raise DomainError(f"tuple label {lab!r} must hold ints")
        labs.append(lab)
    if len(set(labs)) != len(labs):
        raise DomainError("alphabet labels must be distinct")
    if len(labs) > MAX_ALPHABET:
        raise ResourceCapError(f"alphabet size {len(labs)} exceeds {MAX_ALPHABET}")
    if set(labs) == {0, 1} and tuple(labs) != BOOLEAN:
        labs = [0, 1]
    return tuple(labs)


def _pack(alphabet: Sequence[Label], indices: list[int]) -> bytes:
    if tuple(alphabet) == BOOLEAN:
        out = bytearray((len(indices) + 7) // 8)
        for r, v in enumerate(indices):
            if v:
                out[r >> 3] |= 1 << (r & 7)
        return bytes(out)
    return bytes(indices)


# -- restriction -------------------------------------------------------------


def residual_positions(n: int, a: Assignment) -> list[int]:
    """Unfixed positions in increasing order; residual position j of a
    restriction is original position residual_positions(n, a)[j]."""
    return [p for p in range(n) if not a.fixed >> p & 1]


def expand_member(residual_mask: int, residual: Sequence[int], a: Assignment) -> int:
    """Embed a residual-domain member back into the original positions."""
    x = a.ones
    for j, p in enumerate(residual):
        if residual_mask >> j & 1:
            x |= 1 << p
    return x


def lift_assignment(b: Assignment, residual: Sequence[int]) -> Assignment:
    """Map an assignment on residual positions back to original positions."""
    z = o = 0
    for j, p in enumerate(residual):
        if b.zeros >> j & 1:
            z |= 1 << p
        if b.ones >> j & 1:
            o |= 1 << p
    return Assignment(z, o)


def _residual_domain(dom: Domain, a: Assignment) -> Domain:
    rp = residual_positions(dom.n, a)
    n2 = len(rp)
    if dom.kind == "slice":
        k2 = dom.k - a.ones.bit_count()
        if k2 < 0 or k2 > n2:
            raise EmptyRestrictionError(
                f"assignment incompatible with {dom.describe()}"
            )
        if n2 >= 2 and 1 <= k2 <= n2 - 1:
            return Domain.slice(n2, k2)
        # degenerate residual: a single forced member
        single = 0 if k2 == 0 else (1 << n2) - 1
        return Domain.explicit(n2, (single,))
    if dom.kind == "cube":
        if n2 == 0:
            return Domain.explicit(0, (0,))
        return Domain.cube(n2)
    # explicit: filter and compress
    kept = []
    for x in dom.explicit_members:
        if a.consistent_with(x):
            y = 0
            for j, p in enumerate(rp):
                if x >> p & 1:
                    y |= 1 << j
            kept.append(y)
    if not kept:
        raise EmptyRestrictionError("no explicit member consistent with assignment")
    return Domain.explicit(n2, kept)


def restrict(f: LabeledFunction, a: Assignment) -> LabeledFunction:
    """Restriction of f by a partial assignment.

    Residual positions are renumbered in increasing original order (see
    residual_positions); the alphabet is kept whole so labels keep their
    indices.  Raises EmptyRestrictionError when nothing is consistent.
    """
    dom = f.domain
    if a.fixed >> dom.n:
        raise DomainError("assignment fixes a position outside the domain")
    if a.size == 0:
        return f
    sub = _residual_domain(dom, a)
    rp = residual_positions(dom.n, a)
    idx = [
        f.label_index(dom.rank(expand_member(y, rp, a))) for y in sub.members()
    ]
    return LabeledFunction.from_indices(sub, f.alphabet, idx)


def complement_domain(f: LabeledFunction) -> LabeledFunction:
    """Carry f across the complement involution slice(n,k) -> slice(n,n-k)."""
    dom = f.domain
    if dom.kind != "slice":
        raise DomainError("complement_domain needs a slice domain")
    full = (1 << dom.n) - 1
    sub = Domain.slice(dom.n, dom.n - dom.k)
    idx = [f.label_index(dom.rank(x ^ full)) for x in sub.members()]
    return LabeledFunction.from_indices(sub, f.alphabet, idx)


# -- weight-2 slice <-> graph correspondence ---------------------------------


@dataclass(frozen=True)
class SliceGraph:
    """Simple undirected graph on vertices 0..n-1, adjacency as bitmask rows."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise DomainError("adjacency length != n")
        for u, row in enumerate(self.adj):
            if row >> self.n:
                raise DomainError("adjacency row exceeds vertex range")
            if row >> u & 1:
                raise DomainError("self-loop")
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if (self.adj[u] >> v & 1) != (self.adj[v] >> u & 1):
                    raise DomainError("adjacency not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SliceGraph":
        adj = [0] * n
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"bad edge ({u},{v}) on {n} vertices")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n=n, adj=tuple(adj))

    @classmethod
    def complete(cls, n: int) -> "SliceGraph":
        full = (1 << n) - 1
        return cls(n=n, adj=tuple(full ^ (1 << u) for u in range(n)))

    @classmethod
    def empty(cls, n: int) -> "SliceGraph":
        return cls(n=n, adj=(0,) * n)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            row = self.adj[u] >> (u + 1) << (u + 1)
            for v in _mask_positions(row):
                out.append((u, v))
        return out

    def complement(self) -> "SliceGraph":
        full = (1 << self.n) - 1
        return SliceGraph(
            n=self.n, adj=tuple((full ^ row) & ~(1 << u) for u, row in enumerate(self.adj))
        )

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2


def from_graph(g: SliceGraph) -> LabeledFunction:
    """Indicator of g's edge set on slice(n, 2)."""
    if g.n < 3:
        raise DomainError("graph correspondence needs n >= 3")

    def fn(mask: int) -> int:
        u = (mask & -mask).bit_length() - 1
        v = (mask ^ (1 << u)).bit_length() - 1
        return 1 if g.has_edge(u, v) else 0

    return LabeledFunction.from_callable(Domain.slice(g.n, 2), fn, BOOLEAN)


def to_graph(f: LabeledFunction) -> SliceGraph:
    """The graph whose edges are f's 1-inputs; f must be Boolean on slice(n, 2)."""
    dom = f.domain
    if dom.kind != "slice" or dom.k != 2:
        raise DomainError("to_graph needs a function on slice(n, 2)")
    if not f.is_boolean:
        raise DomainError("to_graph needs a Boolean function")
    edges = []
    for r, mask in enumerate(dom.members()):
        if f.label_index(r):
            u = (mask & -mask).bit_length() - 1
            v = (mask ^ (1 << u)).bit_length() - 1
            edges.append((u, v))
    return SliceGraph.from_edges(dom.n, edges)
