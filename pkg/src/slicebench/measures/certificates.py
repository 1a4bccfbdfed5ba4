"""Certificate-style measures: plain, unambiguous, partition, and balanced.

A certificate for an input is a partial assignment consistent with it whose
consistent domain members all carry the input's label.  The variants differ
in what collection structure is demanded (none / exact cover of the domain /
partition of the whole cube / balanced assignments only).
"""

from __future__ import annotations

from itertools import combinations

from ..errors import DomainError, ResourceCapError
from ..kernels import exact_cover, min_hitting_set
from ..slicecore import (
    Assignment,
    LabeledFunction,
    label_rank_bitsets,
    mask_to_string,
    position_rank_bitsets,
)

_UC_MAX_SIZE = 64
_UC_MAX_N = 12
_SC_MAX_N = 6


def certificate_complexity(f: LabeledFunction, x: int | None = None):
    """C(f) or C(f, x); returns (value, witness).

    Witness: {"input": bit string, "zeros": [...], "ones": [...]}; the max
    mode reports the lowest-rank input attaining the maximum.
    """
    dom = f.domain
    members = list(dom.members())
    table = f.indices()
    if x is not None:
        return _certificate_at(f, members, table, dom.rank(x))
    best = -1
    witness = None
    for r in range(len(members)):
        v, w = _certificate_at(f, members, table, r)
        if v > best:
            best, witness = v, w
    return best, witness


def _certificate_at(f, members, table, r):
    xm = members[r]
    diffs = [xm ^ members[j] for j in range(len(members)) if table[j] != table[r]]
    if not diffs:
        return 0, {"input": mask_to_string(xm, f.domain.n), "zeros": [], "ones": []}
    size, mask = min_hitting_set(diffs, f.domain.n)
    a = Assignment(zeros=mask & ~xm, ones=mask & xm)
    w = {"input": mask_to_string(xm, f.domain.n)}
    w.update(a.to_json_obj())
    return size, w


# -- unambiguous certificates --------------------------------------------------


def _monochromatic_assignments(f: LabeledFunction):
    """All assignments with a nonempty label-constant consistent set.

    Yields (zeros, ones, member bitset), deduplicated to the smallest
    assignment per member set (earliest in the position-major scan on ties).
    """
    dom = f.domain
    ones_at = position_rank_bitsets(dom)
    labels = label_rank_bitsets(f)
    table = f.indices()
    full = (1 << dom.size) - 1
    best: dict[int, tuple[int, int, int]] = {}

    def mono(S: int) -> bool:
        r = (S & -S).bit_length() - 1
        return not S & ~labels[table[r]]

    def rec(p: int, zeros: int, ones: int, S: int) -> None:
        if p == dom.n:
            if mono(S):
                size = (zeros | ones).bit_count()
                kept = best.get(S)
                if kept is None or size < kept[0]:
                    best[S] = (size, zeros, ones)
            return
        bit = 1 << p
        rec(p + 1, zeros, ones, S)
        S0 = S & ~ones_at[p]
        if S0:
            rec(p + 1, zeros | bit, ones, S0)
        S1 = S & ones_at[p]
        if S1:
            rec(p + 1, zeros, ones | bit, S1)

    rec(0, 0, 0, full)
    return best


def unambiguous_certificate_complexity(f: LabeledFunction):
    """UC(f): smallest s admitting an exact cover of the domain by
    monochromatic certificates of size <= s.  Returns (value, witness)."""
    dom = f.domain
    if not f.is_boolean:
        raise DomainError("unambiguous certificates need a Boolean function")
    if dom.size > _UC_MAX_SIZE:
        raise ResourceCapError(f"UC capped at domain size <= {_UC_MAX_SIZE}")
    if dom.n > _UC_MAX_N:
        raise ResourceCapError(f"UC capped at n <= {_UC_MAX_N}")
    candidates = _monochromatic_assignments(f)
    items = sorted(
        (size, zeros, ones, S) for S, (size, zeros, ones) in candidates.items()
    )
    full = (1 << dom.size) - 1
    for s in range(dom.n + 1):
        usable = [(S, zeros, ones) for size, zeros, ones, S in items if size <= s]
        chosen = exact_cover(full, [S for S, _, _ in usable])
        if chosen is not None:
            certs = [
                Assignment(usable[i][1], usable[i][2]).to_json_obj() for i in chosen
            ]
            return s, {"certificates": certs}
    raise AssertionError("full assignments always cover the domain exactly")


def subcube_partition_complexity(f: LabeledFunction):
    """SC(f): partition the whole cube into subcubes, each either missing the
    domain or label-constant on it, minimizing the max fixed-position count.
    Returns (value, witness)."""
    dom = f.domain
    if not f.is_boolean:
        raise DomainError("subcube partitions need a Boolean function")
    if dom.n > _SC_MAX_N:
        raise ResourceCapError(f"SC capped at n <= {_SC_MAX_N}")
    n = dom.n
    points = 1 << n
    member_label = {}
    for r, xm in enumerate(dom.members()):
        member_label[xm] = f.label_index(r)
    cells = []
    for zeros, ones in _all_assignments(n):
        seen = set()
        ok = True
        cell = 0
        for pt in range(points):
            if pt & zeros or (pt & ones) != ones:
                continue
            cell |= 1 << pt
            if pt in member_label:
                seen.add(member_label[pt])
                if len(seen) > 1:
                    ok = False
                    break
        if ok:
            cells.append(((zeros | ones).bit_count(), zeros, ones, cell))
    cells.sort()
    full = (1 << points) - 1
    for s in range(n + 1):
        usable = [(cell, zeros, ones) for size, zeros, ones, cell in cells if size <= s]
        chosen = exact_cover(full, [c for c, _, _ in usable])
        if chosen is not None:
            parts = [
                Assignment(usable[i][1], usable[i][2]).to_json_obj() for i in chosen
            ]
            return s, {"subcubes": parts}
    raise AssertionError("singleton subcubes always partition the cube")


def _all_assignments(n: int):
    def rec(p: int, zeros: int, ones: int):
        if p == n:
            yield zeros, ones
            return
        bit = 1 << p
        yield from rec(p + 1, zeros, ones)
        yield from rec(p + 1, zeros | bit, ones)
        yield from rec(p + 1, zeros, ones | bit)

    yield from rec(0, 0, 0)


# -- balanced certificates ------------------------------------------------------


def balanced_certificate(
    f: LabeledFunction, x: int | None = None, min_mode: bool = False
):
    """BC(f, x), BC(f) (default max mode), or mBC(f) (min_mode=True).

    Only balanced assignments (equal fixed 0s and 1s) are admitted, so the
    domain must be a balanced slice.  Returns (value, witness).
    """
    dom = f.domain
    if not dom.is_balanced_slice:
        raise DomainError("balanced certificates need a balanced slice domain")
    if not f.is_boolean:
        raise DomainError("balanced certificates need a Boolean function")
    ones_at = position_rank_bitsets(dom)
    labels = label_rank_bitsets(f)
    table = f.indices()
    full = (1 << dom.size) - 1
    if x is not None:
        return _bc_at(f, ones_at, labels, table, full, x)
    best = None
    witness = None
    for xm in dom.members():
        v, w = _bc_at(f, ones_at, labels, table, full, xm)
        if best is None or (v < best if min_mode else v > best):
            best, witness = v, w
    return best, witness


def _bc_at(f, ones_at, labels, table, full, xm):
    dom = f.domain
    want = labels[table[dom.rank(xm)]]
    one_pos = [p for p in range(dom.n) if xm >> p & 1]
    zero_pos = [p for p in range(dom.n) if not xm >> p & 1]
    for h in range(dom.k + 1):
        for ones_pick in combinations(one_pos, h):
            S_ones = full
            for p in ones_pick:
                S_ones &= ones_at[p]
            for zeros_pick in combinations(zero_pos, h):
                S = S_ones
                for p in zeros_pick:
                    S &= ~ones_at[p]
                if not S & ~want:
                    w = {"input": mask_to_string(xm, dom.n)}
                    w.update(Assignment.of(zeros_pick, ones_pick).to_json_obj())
                    return 2 * h, w
    raise AssertionError("the full input is always a balanced certificate")
