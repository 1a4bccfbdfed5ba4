"""Exact decision-tree depth.

The solver runs memoized alpha-beta over game states (sets of still-possible
inputs, keyed by the masks of answered positions).  Iterative deepening with
unit windows keeps most probes cheap; the transposition table stores [lo, hi]
bounds per state and survives across probes.  Fail-soft convention: a return
value v means the true value is exactly v when alpha < v < beta, at most v
when v <= alpha, and at least v when v >= beta.
"""

from __future__ import annotations

from ..errors import DomainError, ResourceCapError
from ..slicecore import LabeledFunction
from .trees import Leaf, Node, Tree

_NONADAPTIVE_MAX_N = 20
_NONADAPTIVE_MAX_SIZE = 4096
_HINT_MAX_SIZE = 1 << 20
_HINT_MAX_SIDE = 256


class DepthSolver:
    """Reusable exact-depth engine for one function.

    States are bitsets over member ranks; per-position rank bitsets make the
    child split two big-int ANDs.  Only splitting positions are searched:
    querying a position constant on the live set never helps.
    """

    def __init__(self, f: LabeledFunction):
        dom = f.domain
        self.f = f
        self.n = dom.n
        self.size = dom.size
        self.kind = dom.kind
        self.is_boolean = f.is_boolean
        self.table = f.indices()
        ones_at = [0] * dom.n
        for r, x in enumerate(dom.members()):
            while x:
                low = x & -x
                ones_at[low.bit_length() - 1] |= 1 << r
                x ^= low
        self.ones_at = ones_at
        lbs = [0] * len(f.alphabet)
        for r, li in enumerate(self.table):
            lbs[li] |= 1 << r
        self.label_bitsets = lbs
        self.full = (1 << self.size) - 1
        # state key: (zeros mask, ones mask) of answered positions; the live
        # set is a function of the key, so the table is sound
        self.tt: dict[tuple[int, int], list[int]] = {}
        self.nodes = 0

    # -- state helpers -----------------------------------------------------

    def _mono(self, S: int) -> bool:
        r = (S & -S).bit_length() - 1
        return not S & ~self.label_bitsets[self.table[r]]

    def _leaf_index(self, S: int) -> int:
        return self.table[(S & -S).bit_length() - 1]

    def _label_count(self, S: int) -> int:
        cnt = 0
        while S:
            r = (S & -S).bit_length() - 1
            S &= ~self.label_bitsets[self.table[r]]
            cnt += 1
        return cnt

    def _static_hi(self, fixed: int, S: int) -> int:
        nf = self.n - fixed.bit_count()
        if self.kind == "slice":
            # weight pins the last free position, and Boolean slice
            # functions always finish two queries early for nf >= 3
            hi = nf - 2 if self.is_boolean and nf >= 3 else nf - 1
        else:
            hi = nf
        return min(hi, S.bit_count() - 1)

    def _entry(self, S: int, zeros: int, ones: int) -> list[int]:
        key = (zeros, ones)
        ent = self.tt.get(key)
        if ent is None:
            lo = max(1, (self._label_count(S) - 1).bit_length())
            ent = [lo, self._static_hi(zeros | ones, S)]
            self.tt[key] = ent
        return ent

    def _moves(self, S: int, zeros: int, ones: int) -> list[tuple[int, int, int, int]]:
        free = ~(zeros | ones)
        out = []
        for p in range(self.n):
            if not free >> p & 1:
                continue
            S1 = S & self.ones_at[p]
            if S1 == 0 or S1 == S:
                continue
            S0 = S ^ S1
            out.append((max(S0.bit_count(), S1.bit_count()), p, S0, S1))
        out.sort()
        return out

    # -- alpha-beta ---------------------------------------------------------

    def _search(self, S: int, zeros: int, ones: int, alpha: int, beta: int) -> int:
        if self._mono(S):
            return 0
        ent = self._entry(S, zeros, ones)
        lo, hi = ent
        if lo >= beta:
            return lo
        if hi <= alpha:
            return hi
        if lo == hi:
            return lo
        self.nodes += 1
        moves = self._moves(S, zeros, ones)
        if len(moves) < hi:
            hi = ent[1] = len(moves)
            if hi <= alpha:
                return hi
            if lo == hi:
                return lo
        best = hi + 1  # min over exact move costs found so far
        pruned = hi + 1  # min over lower bounds of pruned moves
        for _, p, S0, S1 in moves:
            bcut = min(beta, best)
            ca, cb = alpha - 1, bcut - 1
            bit = 1 << p
            if S0.bit_count() >= S1.bit_count():
                kids = ((S0, zeros | bit, ones), (S1, zeros, ones | bit))
            else:
                kids = ((S1, zeros, ones | bit), (S0, zeros | bit, ones))
            v1 = self._search(kids[0][0], kids[0][1], kids[0][2], ca, cb)
            if v1 >= cb:
                pruned = min(pruned, 1 + v1)
                continue
            v2 = self._search(kids[1][0], kids[1][1], kids[1][2], max(ca, v1), cb)
            c = 1 + (v2 if v2 > v1 else v1)
            if c <= alpha:
                if c < ent[1]:
                    ent[1] = c
                return c
            if c < bcut:
                best = c
            else:
                pruned = min(pruned, c)
        if best < beta:
            ent[0] = ent[1] = best
            return best
        v = min(best, pruned)
        if v > ent[1]:
            raise AssertionError("state value crossed its proven upper bound")
        if v > ent[0]:
            ent[0] = v
        return v

    def _resolve(self, S: int, zeros: int, ones: int) -> int:
        """Exact value of a state via unit-window deepening."""
        if self._mono(S):
            return 0
        while True:
            ent = self.tt.get((zeros, ones))
            d = ent[0] if ent else 1
            v = self._search(S, zeros, ones, d - 1, d + 1)
            if v == d:
                return v
            if v < d:
                raise AssertionError("search fell below an admissible bound")

    # -- packing hint at the root -------------------------------------------

    def _span_live(self, x: int, y: int) -> int:
        """Live set after fixing every position where x and y agree."""
        S = self.full
        both = x & y
        while both:
            low = both & -both
            S &= self.ones_at[low.bit_length() - 1]
            both ^= low
        neither = ~(x | y) & ((1 << self.n) - 1)
        while neither:
            low = neither & -neither
            S &= ~self.ones_at[low.bit_length() - 1]
            neither ^= low
        return S

    def _packing_hint(self) -> int:
        """Leaf-count bound when no two same-label inputs share a
        monochromatic subcube: depth >= log2(count of that label)."""
        if not self.is_boolean or self.size > _HINT_MAX_SIZE:
            return 0
        members = list(self.f.domain.members())
        best = 0
        for side in (1, 0):
            lb = self.label_bitsets[side]
            cnt = lb.bit_count()
            if not 2 <= cnt <= _HINT_MAX_SIDE:
                continue
            sides = [x for r, x in enumerate(members) if lb >> r & 1]
            packed = True
            for i in range(len(sides)):
                for j in range(i + 1, len(sides)):
                    live = self._span_live(sides[i], sides[j])
                    if not live & ~lb:
                        packed = False
                        break
                if not packed:
                    break
            if packed:
                best = max(best, cnt.bit_length())
        return best

    # -- public entry points --------------------------------------------------

    def solve(self) -> int:
        S = self.full
        if self._mono(S):
            return 0
        if (0, 0) not in self.tt:
            ent = self._entry(S, 0, 0)
            ent[0] = max(ent[0], self._packing_hint())
            if ent[0] > ent[1]:
                raise AssertionError("root bounds crossed")
        return self._resolve(S, 0, 0)

    def build_tree(self) -> Tree:
        self.solve()
        return self._build(self.full, 0, 0)

    def _build(self, S: int, zeros: int, ones: int) -> Tree:
        if self._mono(S):
            return Leaf(self._leaf_index(S))
        v = self._resolve(S, zeros, ones)
        for p in range(self.n):
            bit = 1 << p
            if (zeros | ones) & bit:
                continue
            S1 = S & self.ones_at[p]
            if S1 == 0 or S1 == S:
                continue
            S0 = S ^ S1
            v0 = self._resolve(S0, zeros | bit, ones)
            if v0 >= v:
                continue
            v1 = self._resolve(S1, zeros, ones | bit)
            if 1 + max(v0, v1) == v:
                return Node(
                    position=p,
                    on_zero=self._build(S0, zeros | bit, ones),
                    on_one=self._build(S1, zeros, ones | bit),
                )
        raise AssertionError("no move achieves the computed optimum")


def exact_depth(f: LabeledFunction) -> int:
    """Depth of an optimal decision tree for f."""
    return DepthSolver(f).solve()


def exact_depth_with_tree(f: LabeledFunction) -> tuple[int, Tree]:
    """Optimal depth plus one optimal tree (lowest query position on ties)."""
    solver = DepthSolver(f)
    value = solver.solve()
    return value, solver.build_tree()


def nonadaptive_depth(f: LabeledFunction) -> int:
    """Fewest positions that, read all at once, always determine the label."""
    dom = f.domain
    if dom.n > _NONADAPTIVE_MAX_N:
        raise ResourceCapError(f"nonadaptive depth capped at n <= {_NONADAPTIVE_MAX_N}")
    if dom.size > _NONADAPTIVE_MAX_SIZE:
        raise ResourceCapError(
            f"nonadaptive depth capped at domain size <= {_NONADAPTIVE_MAX_SIZE}"
        )
    members = list(dom.members())
    table = f.indices()
    diffs = set()
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if table[i] != table[j]:
                diffs.add(members[i] ^ members[j])
    if not diffs:
        return 0
    from ..kernels import min_hitting_set

    size, _ = min_hitting_set(sorted(diffs), dom.n)
    return size


def nonadaptive_positions(f: LabeledFunction) -> tuple[int, list[int]]:
    """Like nonadaptive_depth but also returns one optimal position set."""
    dom = f.domain
    if dom.n > _NONADAPTIVE_MAX_N or dom.size > _NONADAPTIVE_MAX_SIZE:
        raise ResourceCapError("nonadaptive depth cap exceeded")
    members = list(dom.members())
    table = f.indices()
    diffs = set()
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if table[i] != table[j]:
                diffs.add(members[i] ^ members[j])
    if not diffs:
        return 0, []
    from ..kernels import min_hitting_set, _bits

    size, mask = min_hitting_set(sorted(diffs), dom.n)
    return size, _bits(mask)
