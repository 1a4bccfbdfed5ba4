"""Query algorithms and adversary strategies as interacting state machines.

An AlgorithmPlayer decides what to query next from the answers it has seen;
an AdversaryPlayer invents answers on the fly while keeping at least one
domain member consistent.  run_match plays one against the other under a
referee that tracks the consistent set online, and forced_query_count
certifies lower bounds by exhaustive minimax over an adversary's answers.
"""

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product
import random

from .errors import (
    AdversaryExhaustedError,
    AdversaryInvalidError,
    DomainError,
    MatchProtocolError,
)
from .measures.bounds import monochromatic_number
from .measures.depth import exact_depth_with_tree
from .measures.trees import Node
from .slicecore import (
    Assignment,
    LabeledFunction,
    label_rank_bitsets,
    position_rank_bitsets,
    residual_positions,
    restrict,
    to_graph,
)

_UNSET = object()


# -- player interfaces ------------------------------------------------------------


class AlgorithmPlayer:
    """Single-use query strategy driven by an internal generator script.

    Subclasses implement _script as a generator that yields positions,
    receives the answers back through send, and returns the final label.
    """

    strategy: str = ""

    def __init__(self):
        self.params: dict = getattr(self, "params", {})
        self._gen = self._script()
        self._label = _UNSET
        self._pending: int | None = None
        self._queried: set[int] = set()
        self._step(None, first=True)

    def _script(self):
        raise NotImplementedError

    def _step(self, bit, first=False):
        try:
            pos = next(self._gen) if first else self._gen.send(bit)
        except StopIteration as stop:
            self._label = stop.value
            self._pending = None
            return
        if not isinstance(pos, int) or pos < 0:
            raise MatchProtocolError(f"script produced a bad position: {pos!r}")
        if pos in self._queried:
            raise MatchProtocolError(f"position {pos} queried twice")
        self._queried.add(pos)
        self._pending = pos

    def next_action(self) -> tuple[str, object]:
        """("query", position) while querying, then ("claim", label)."""
        if self._label is not _UNSET:
            return ("claim", self._label)
        return ("query", self._pending)

    def feed(self, position: int, bit: int) -> None:
        """Deliver the answer to the pending query."""
        if self._pending is None or position != self._pending:
            raise MatchProtocolError("feed does not match the pending query")
        self._step(bit)


class AdversaryPlayer:
    """Answer oracle that commits to bits only as they are queried.

    memo_safe means the reachable state is a function of which positions
    were queried and what was answered, so minimax may memoize on those.
    """

    strategy: str = ""
    memo_safe: bool = True

    def answer(self, position: int) -> int:
        raise NotImplementedError

    def clone(self) -> "AdversaryPlayer":
        raise NotImplementedError


# -- algorithm players ------------------------------------------------------------


class TreePlayer(AlgorithmPlayer):
    """Follows a fixed decision tree and claims the leaf's label."""

    strategy = "tree"

    def __init__(self, tree, alphabet):
        self.tree = tree
        self.alphabet = tuple(alphabet)
        self.params = {"depth": None}
        super().__init__()

    def _script(self):
        node = self.tree
        while isinstance(node, Node):
            bit = yield node.position
            node = node.on_one if bit else node.on_zero
        return self.alphabet[node.label_index]


def optimal_tree_player(f: LabeledFunction) -> TreePlayer:
    """TreePlayer for one optimal decision tree of f."""
    _, tree = exact_depth_with_tree(f)
    return TreePlayer(tree, f.alphabet)


class EqAlgorithm(AlgorithmPlayer):
    """Decides equality of the two halves on slice(4k, 2k) in 3k-1 queries.

    Reads the first 2k-1 bits of the left half; unless the majority bit b
    appears exactly k times the halves cannot be equal.  Otherwise the k
    left positions holding b are compared against the same positions on
    the right, and any mismatch rejects.
    """

    strategy = "eq"

    def __init__(self, k: int):
        if k < 1:
            raise DomainError("eq_algorithm needs k >= 1")
        self.k = k
        self.params = {"k": k}
        super().__init__()

    def _script(self):
        half = 2 * self.k
        answers = []
        for p in range(half - 1):
            answers.append((yield p))
        ones = sum(answers)
        b = 1 if 2 * ones > half - 1 else 0
        if max(ones, half - 1 - ones) != self.k:
            return 0
        for i in (i for i, bit in enumerate(answers) if bit == b):
            if (yield half + i) != b:
                return 0
        return 1


class Weight1Algorithm(AlgorithmPlayer):
    """Evaluates a Boolean function on slice(n, 1) via its smaller side.

    Probes the positions of the smaller preimage class in increasing
    order; a hit settles the label, and a clean miss means the single one
    sits in the other class.
    """

    strategy = "weight1"

    def __init__(self, f: LabeledFunction):
        dom = f.domain
        if dom.kind != "slice" or dom.k != 1:
            raise DomainError("weight1_algorithm needs a slice(n, 1) function")
        if not f.is_boolean:
            raise DomainError("weight1_algorithm needs Boolean labels")
        self.f = f
        self.params = {"n": dom.n}
        super().__init__()

    def _script(self):
        f = self.f
        dom = f.domain
        sides: tuple[list[int], list[int]] = ([], [])
        for p in range(dom.n):
            sides[f.label(dom.rank(1 << p))].append(p)
        probe = 0 if len(sides[0]) <= len(sides[1]) else 1
        for p in sides[probe]:
            if (yield p):
                return probe
        return 1 - probe


class Weight2Algorithm(AlgorithmPlayer):
    """Evaluates a Boolean function on slice(n, 2) around a monochromatic set.

    Scans the positions outside a maximum monochromatic set T of the
    one-edge graph until a one appears.  No one means both ones lie inside
    T, so the answer is T's color; otherwise the leftover weight-1
    restriction is finished with an optimal subtree.
    """

    strategy = "weight2"

    def __init__(self, f: LabeledFunction):
        dom = f.domain
        if dom.kind != "slice" or dom.k != 2:
            raise DomainError("weight2_algorithm needs a slice(n, 2) function")
        if not f.is_boolean:
            raise DomainError("weight2_algorithm needs Boolean labels")
        self.f = f
        self.params = {"n": dom.n}
        super().__init__()

    def _script(self):
        f = self.f
        n = f.domain.n
        _, wit = monochromatic_number(to_graph(f))
        inside = set(wit["vertices"])
        zeros: list[int] = []
        hit = None
        for p in (p for p in range(n) if p not in inside):
            if (yield p):
                hit = p
                break
            zeros.append(p)
        if hit is None:
            return 1 if wit["kind"] == "clique" else 0
        a = Assignment.of(zeros=zeros, ones=[hit])
        sub = restrict(f, a)
        back = residual_positions(n, a)
        _, tree = exact_depth_with_tree(sub)
        node = tree
        while isinstance(node, Node):
            bit = yield back[node.position]
            node = node.on_one if bit else node.on_zero
        return f.alphabet[node.label_index]


def _check_weights_params(n: int, m: int, k: int) -> None:
    if n < 1 or m < 1:
        raise DomainError("block weights need n, m >= 1")
    if not 0 <= k <= n * m:
        raise DomainError(f"total weight {k} out of range for {n} blocks of {m}")


class WeightsAlgA(AlgorithmPlayer):
    """Finds the block-weight multiset by reading all blocks but the last.

    Always exactly (n-1)m queries; the last block's weight is whatever
    remains of the known total.
    """

    strategy = "weights-A"

    def __init__(self, n: int, m: int, k: int):
        _check_weights_params(n, m, k)
        self.n, self.m, self.k = n, m, k
        self.params = {"n": n, "m": m, "k": k}
        super().__init__()

    def _script(self):
        n, m = self.n, self.m
        weights = []
        for i in range(n - 1):
            w = 0
            for j in range(m):
                w += yield i * m + j
            weights.append(w)
        weights.append(self.k - sum(weights))
        return tuple(sorted(weights, reverse=True))


class WeightsAlgB(AlgorithmPlayer):
    """Finds the block-weight multiset, skipping a plurality of last bits.

    Reads m-1 bits of every block, groups blocks by partial weight, and
    only finishes the blocks outside the largest group (ties keep the
    smallest partial weight).  The leftover total pins down how many
    blocks of the plurality group round up.  At most nm - ceil(n/m)
    queries.
    """

    strategy = "weights-B"

    def __init__(self, n: int, m: int, k: int):
        _check_weights_params(n, m, k)
        self.n, self.m, self.k = n, m, k
        self.params = {"n": n, "m": m, "k": k}
        super().__init__()

    def _script(self):
        n, m = self.n, self.m
        partial = []
        for i in range(n):
            w = 0
            for j in range(m - 1):
                w += yield i * m + j
            partial.append(w)
        counts = Counter(partial)
        plural = max(counts, key=lambda w: (counts[w], -w))
        weights = []
        for i in range(n):
            if partial[i] != plural:
                weights.append(partial[i] + (yield i * m + m - 1))
        ups = self.k - sum(weights) - plural * counts[plural]
        weights += [plural + 1] * ups + [plural] * (counts[plural] - ups)
        return tuple(sorted(weights, reverse=True))


class WeightsM2Algorithm(AlgorithmPlayer):
    """Block-weight multiset for m = 2 within n + k - 1 queries.

    Reads every block's first bit.  Seeing k ones or none at all already
    forces the multiset 1^k 0^(n-k); otherwise the second bits of the
    one-first blocks pin down the rest.
    """

    strategy = "weights-m2"

    def __init__(self, n: int, k: int):
        _check_weights_params(n, 2, k)
        if not 2 <= k <= n // 2:
            raise DomainError("weights_m2_algorithm needs 2 <= k <= n/2")
        self.n, self.k = n, k
        self.params = {"n": n, "k": k}
        super().__init__()

    def _script(self):
        n, k = self.n, self.k
        first = []
        for i in range(n):
            first.append((yield 2 * i))
        c = sum(first)
        if c == 0 or c == k:
            return tuple(sorted([1] * k + [0] * (n - k), reverse=True))
        weights = []
        for i in range(n):
            if first[i]:
                weights.append(1 + (yield 2 * i + 1))
        ones_left = k - sum(weights)
        weights += [1] * ones_left + [0] * (n - c - ones_left)
        return tuple(sorted(weights, reverse=True))


# -- adversary players ------------------------------------------------------------


class FixedInputAdversary(AdversaryPlayer):
    """Answers from one concrete member; the honest oracle used in replays."""

    strategy = "fixed-input"
    memo_safe = True

    def __init__(self, member: int):
        if member < 0:
            raise DomainError("member mask must be nonnegative")
        self.member = member

    def answer(self, position: int) -> int:
        if position < 0:
            raise DomainError("position must be nonnegative")
        return self.member >> position & 1

    def clone(self) -> "FixedInputAdversary":
        return FixedInputAdversary(self.member)


class EqAdversary(AdversaryPlayer):
    """Forces 3k-1 queries against half-equality on slice(4k, 2k).

    Maintains one shared string for both halves: a query to a fresh pair
    index commits the next bit of an alternating 0/1 pattern, and both
    halves answer with the committed bit, so equality stays plausible as
    long as possible.
    """

    strategy = "eq"
    memo_safe = True

    def __init__(self, k: int):
        if k < 1:
            raise DomainError("eq_adversary needs k >= 1")
        self.k = k
        self.z: list[int | None] = [None] * (2 * k)
        self.b = 0

    def answer(self, position: int) -> int:
        if not 0 <= position < 4 * self.k:
            raise DomainError(f"position {position} out of range")
        i = position % (2 * self.k)
        if self.z[i] is None:
            self.z[i] = self.b
            self.b ^= 1
        return self.z[i]

    def clone(self) -> "EqAdversary":
        c = EqAdversary.__new__(EqAdversary)
        c.k = self.k
        c.z = list(self.z)
        c.b = self.b
        return c


class _BasicWeightsAdversary(AdversaryPlayer):
    """Keeps two ones and two zeros unrevealed for as long as possible.

    Any answer that would drop the unrevealed supply of either bit below
    two is illegal; once both answers are illegal the strategy's validity
    horizon has ended and it raises AdversaryExhaustedError.
    """

    strategy = "weights-basic"

    def __init__(self, n: int, m: int, k: int, seed: int | None = None):
        self.n, self.m, self.k = n, m, k
        self.total = n * m
        self.ones = 0
        self.zeros = 0
        self.rng = random.Random(seed) if seed is not None else None
        self.memo_safe = seed is None

    def _legal(self, bit: int) -> bool:
        ones = self.ones + (bit == 1)
        zeros = self.zeros + (bit == 0)
        return self.k - ones >= 2 and (self.total - self.k) - zeros >= 2

    def answer(self, position: int) -> int:
        if not 0 <= position < self.total:
            raise DomainError(f"position {position} out of range")
        legal = [b for b in (0, 1) if self._legal(b)]
        if not legal:
            raise AdversaryExhaustedError(
                "no answer keeps two ones and two zeros unrevealed"
            )
        bit = legal[0] if self.rng is None else self.rng.choice(legal)
        if bit:
            self.ones += 1
        else:
            self.zeros += 1
        return bit

    def clone(self) -> "_BasicWeightsAdversary":
        c = _BasicWeightsAdversary.__new__(_BasicWeightsAdversary)
        c.n, c.m, c.k, c.total = self.n, self.m, self.k, self.total
        c.ones, c.zeros = self.ones, self.zeros
        c.memo_safe = self.memo_safe
        if self.rng is None:
            c.rng = None
        else:
            c.rng = random.Random()
            c.rng.setstate(self.rng.getstate())
        return c


def _balanced_assignment(n: int, m: int) -> tuple[int, ...]:
    """Near-equal class assignment with weight sum nm/2 - floor(n/2).

    Starts from round-robin i mod m and changes as few positions as
    possible, scanning candidate changes in a fixed order so the result
    is deterministic.
    """
    base = tuple(i % m for i in range(n))
    lo = n // m
    want = n * m // 2 - n // 2

    def valid(a) -> bool:
        sizes = [0] * m
        for j in a:
            sizes[j] += 1
        if any(not lo <= s <= lo + 1 for s in sizes):
            return False
        return sum(j * s for j, s in enumerate(sizes)) == want

    if valid(base):
        return base
    for changes in range(1, n + 1):
        for idxs in combinations(range(n), changes):
            for vals in product(range(m), repeat=changes):
                if any(vals[t] == base[i] for t, i in enumerate(idxs)):
                    continue
                a = list(base)
                for t, i in enumerate(idxs):
                    a[i] = vals[t]
                if valid(a):
                    return tuple(a)
    raise DomainError("no near-equal class assignment meets the weight sum")


class _BalancedWeightsAdversary(AdversaryPlayer):
    """Balanced-slice strategy: scripted block weights plus a reserve pool.

    Each block's first m-1 answers sum to a scripted per-block weight a(i);
    the final answer of a block comes out of a reserve multiset S that
    starts with floor(n/2) ones and keeps two of each bit while larger
    than four.  When S is down to four bits and another final bit is
    queried, the strategy abandons the script and falls back to keeping
    two ones and two zeros unrevealed overall, eventually exhausting.
    """

    strategy = "weights-balanced"

    def __init__(self, n: int, m: int, k: int, seed: int | None = None):
        self.n, self.m, self.k = n, m, k
        self.total = n * m
        self.assignment = _balanced_assignment(n, m)
        self.s_ones = n // 2
        self.s_zeros = n - n // 2
        self.block_seen = [0] * n
        self.block_ones = [0] * n
        self.ones = 0
        self.zeros = 0
        self.abandoned = False
        self.rng = random.Random(seed) if seed is not None else None
        self.memo_safe = seed is None

    def _record(self, i: int, bit: int) -> None:
        self.block_seen[i] += 1
        self.block_ones[i] += bit
        if bit:
            self.ones += 1
        else:
            self.zeros += 1

    def _fallback(self, i: int) -> int:
        ones_left = self.k - self.ones
        zeros_left = (self.total - self.k) - self.zeros
        legal = []
        if zeros_left - 1 >= 2 and ones_left >= 2:
            legal.append(0)
        if ones_left - 1 >= 2 and zeros_left >= 2:
            legal.append(1)
        if not legal:
            raise AdversaryExhaustedError(
                "no answer keeps two ones and two zeros unrevealed"
            )
        bit = legal[0] if self.rng is None else self.rng.choice(legal)
        self._record(i, bit)
        return bit

    def answer(self, position: int) -> int:
        if not 0 <= position < self.total:
            raise DomainError(f"position {position} out of range")
        i = position // self.m
        if self.abandoned:
            return self._fallback(i)
        if self.block_seen[i] == self.m - 1:
            if self.s_ones + self.s_zeros == 4:
                self.abandoned = True
                return self._fallback(i)
            legal = []
            if self.s_zeros - 1 >= 2:
                legal.append(0)
            if self.s_ones - 1 >= 2:
                legal.append(1)
            bit = legal[0] if self.rng is None else self.rng.choice(legal)
            if bit:
                self.s_ones -= 1
            else:
                self.s_zeros -= 1
            self._record(i, bit)
            return bit
        slots_left = (self.m - 1) - self.block_seen[i]
        need = self.assignment[i] - self.block_ones[i]
        if need == slots_left:
            bit = 1
        elif need == 0:
            bit = 0
        else:
            bit = 0 if self.rng is None else self.rng.choice((0, 1))
        self._record(i, bit)
        return bit

    def clone(self) -> "_BalancedWeightsAdversary":
        c = _BalancedWeightsAdversary.__new__(_BalancedWeightsAdversary)
        c.n, c.m, c.k, c.total = self.n, self.m, self.k, self.total
        c.assignment = self.assignment
        c.s_ones, c.s_zeros = self.s_ones, self.s_zeros
        c.block_seen = list(self.block_seen)
        c.block_ones = list(self.block_ones)
        c.ones, c.zeros = self.ones, self.zeros
        c.abandoned = self.abandoned
        c.memo_safe = self.memo_safe
        if self.rng is None:
            c.rng = None
        else:
            c.rng = random.Random()
            c.rng.setstate(self.rng.getstate())
        return c


class _M2WeightsAdversary(AdversaryPlayer):
    """Two-bit-block strategy driven by untouched and all-zero block counts.

    A fresh block answers 0 while enough other blocks are untouched
    (threshold k-1 in the low regime, floor(n/2) in the high regime) and
    1 afterwards.  A block whose first answer was 1 completes to 10; one
    whose first answer was 0 completes to 01 exactly when n-k blocks have
    already been pinned to 00.  Never exhausts.
    """

    strategy = "weights-m2"
    memo_safe = True

    def __init__(self, n: int, k: int, high: bool):
        self.n, self.k, self.high = n, k, high
        self.fresh_threshold = (n // 2) if high else (k - 1)
        self.block_seen = [0] * n
        self.block_ones = [0] * n
        self.untouched = n
        self.double_zero = 0

    def answer(self, position: int) -> int:
        if not 0 <= position < 2 * self.n:
            raise DomainError(f"position {position} out of range")
        i = position // 2
        if self.block_seen[i] == 0:
            bit = 0 if self.untouched - 1 >= self.fresh_threshold else 1
            self.untouched -= 1
        elif self.block_seen[i] == 1:
            if self.block_ones[i]:
                bit = 0
            else:
                bit = 1 if self.double_zero >= self.n - self.k else 0
                if bit == 0:
                    self.double_zero += 1
        else:
            raise MatchProtocolError(f"block {i} already fully revealed")
        self.block_seen[i] += 1
        self.block_ones[i] += bit
        return bit

    def clone(self) -> "_M2WeightsAdversary":
        c = _M2WeightsAdversary.__new__(_M2WeightsAdversary)
        c.n, c.k, c.high = self.n, self.k, self.high
        c.fresh_threshold = self.fresh_threshold
        c.block_seen = list(self.block_seen)
        c.block_ones = list(self.block_ones)
        c.untouched = self.untouched
        c.double_zero = self.double_zero
        return c


# -- factories matching the public names ------------------------------------------


def eq_algorithm(k: int) -> EqAlgorithm:
    return EqAlgorithm(k)


def eq_adversary(k: int) -> EqAdversary:
    return EqAdversary(k)


def weights_alg_A(n: int, m: int, k: int) -> WeightsAlgA:
    return WeightsAlgA(n, m, k)


def weights_alg_B(n: int, m: int, k: int) -> WeightsAlgB:
    return WeightsAlgB(n, m, k)


def weights_m2_algorithm(n: int, k: int) -> WeightsM2Algorithm:
    return WeightsM2Algorithm(n, k)


def weight1_algorithm(f: LabeledFunction) -> Weight1Algorithm:
    return Weight1Algorithm(f)


def weight2_algorithm(f: LabeledFunction) -> Weight2Algorithm:
    return Weight2Algorithm(f)


def weights_adversary(
    n: int, m: int, k: int, mode: str = "basic", seed: int | None = None
) -> AdversaryPlayer:
    """Adversary for the block-weight multiset task on slice(nm, k).

    mode "basic" works whenever 2 <= k <= nm/2; "balanced" needs k = nm/2
    and n >= 4; "m2_low" / "m2_high" need m = 2 and n >= 4 with k at most
    (resp. above) floor(n/2); "m2" picks the right one from k.  seed
    switches strategies with arbitrary choices to seeded-random answers.
    """
    _check_weights_params(n, m, k)
    if mode == "m2":
        mode = "m2_low" if k <= n // 2 else "m2_high"
    if mode == "basic":
        if not 2 <= k <= n * m // 2:
            raise DomainError("basic mode needs 2 <= k <= nm/2")
        return _BasicWeightsAdversary(n, m, k, seed)
    if mode == "balanced":
        if n < 4 or 2 * k != n * m:
            raise DomainError("balanced mode needs n >= 4 and k = nm/2")
        return _BalancedWeightsAdversary(n, m, k, seed)
    if mode == "m2_low":
        if m != 2 or n < 4 or not 2 <= k <= n // 2:
            raise DomainError("m2_low mode needs m = 2, n >= 4, 2 <= k <= n/2")
        return _M2WeightsAdversary(n, k, high=False)
    if mode == "m2_high":
        if m != 2 or n < 4 or not n // 2 + 1 <= k <= n:
            raise DomainError("m2_high mode needs m = 2, n >= 4, k > n/2")
        return _M2WeightsAdversary(n, k, high=True)
    raise DomainError(f"unknown adversary mode: {mode}")


# -- referee ----------------------------------------------------------------------


@dataclass
class MatchTranscript:
    """Everything that happened in one match, verdicts included.

    status is "claimed" when the algorithm finished, "budget" when it ran
    out of allowed queries, "exhausted" when the adversary's validity
    horizon ended first.  Verdicts are recomputable from the query/answer
    pairs, the claim, and the function alone.
    """

    pairs: list[tuple[int, int]] = field(default_factory=list)
    claimed: object = None
    status: str = "claimed"
    determined: bool = False
    correct: bool = False
    forced_guess: bool = False
    consistent_count: int = 0

    @property
    def query_count(self) -> int:
        return len(self.pairs)

    def to_json_obj(self) -> dict:
        claimed = self.claimed
        if isinstance(claimed, tuple):
            claimed = list(claimed)
        return {
            "queries": [[p, b] for p, b in self.pairs],
            "claimed": claimed,
            "status": self.status,
            "query_count": self.query_count,
            "determined": self.determined,
            "correct": self.correct,
            "forced_guess": self.forced_guess,
            "consistent_count": self.consistent_count,
        }


def run_match(
    alg: AlgorithmPlayer,
    adv: AdversaryPlayer,
    f: LabeledFunction,
    budget: int | None = None,
) -> MatchTranscript:
    """Referee one algorithm-versus-adversary match over f's domain.

    Alternates queries and answers while tracking the consistent member
    set; an answer that empties it raises AdversaryInvalidError.  The
    final claim is correct only if every still-consistent member carries
    it; claiming while two labels remain is a forced guess, the
    adversary's win.
    """
    dom = f.domain
    ones_at = position_rank_bitsets(dom)
    live = (1 << dom.size) - 1
    pairs: list[tuple[int, int]] = []
    queried: set[int] = set()
    status = "claimed"
    claimed = None
    while True:
        kind, payload = alg.next_action()
        if kind == "claim":
            claimed = payload
            break
        if kind != "query":
            raise MatchProtocolError(f"unknown action kind: {kind!r}")
        p = payload
        if not isinstance(p, int) or not 0 <= p < dom.n:
            raise MatchProtocolError(f"query position {p!r} out of range")
        if p in queried:
            raise MatchProtocolError(f"position {p} queried twice")
        if budget is not None and len(pairs) >= budget:
            status = "budget"
            break
        try:
            bit = adv.answer(p)
        except AdversaryExhaustedError:
            status = "exhausted"
            break
        if bit not in (0, 1):
            raise AdversaryInvalidError(f"adversary answered {bit!r}")
        queried.add(p)
        pairs.append((p, bit))
        live &= ones_at[p] if bit else ~ones_at[p]
        if live == 0:
            raise AdversaryInvalidError(
                "no domain member is consistent with the answers"
            )
        alg.feed(p, bit)
    table = f.indices()
    seen: set[int] = set()
    rest = live
    while rest and len(seen) < 2:
        rank = (rest & -rest).bit_length() - 1
        seen.add(table[rank])
        rest &= rest - 1
    determined = len(seen) == 1
    if status != "claimed":
        claimed = None
    correct = (
        status == "claimed"
        and determined
        and claimed == f.alphabet[next(iter(seen))]
    )
    forced_guess = status == "claimed" and not determined
    return MatchTranscript(
        pairs=pairs,
        claimed=claimed,
        status=status,
        determined=determined,
        correct=correct,
        forced_guess=forced_guess,
        consistent_count=live.bit_count(),
    )


def replay_answers(adv: AdversaryPlayer, positions) -> list[int]:
    """Answers a fresh adversary gives to the positions, in order."""
    return [adv.answer(p) for p in positions]


def forced_query_count(adv: AdversaryPlayer, f: LabeledFunction) -> int:
    """Certified minimum queries any always-correct strategy needs vs adv.

    Exhaustive minimax: the value of a state is 0 once every consistent
    member carries one label, else one plus the best continuation over
    all unqueried positions, with the adversary fixing each answer.  A
    state where the adversary's validity horizon has ended still needs at
    least one more query, so it counts 1; the result is therefore a sound
    lower bound on the depth of any correct decision tree, and exact when
    the adversary never exhausts.
    """
    dom = f.domain
    ones_at = position_rank_bitsets(dom)
    full = (1 << dom.size) - 1
    label_sets = label_rank_bitsets(f)
    table: dict[tuple[int, int], int] | None = {} if adv.memo_safe else None

    def mono(live: int) -> bool:
        return any(live & ls == live for ls in label_sets)

    def rec(live: int, queried: int, answers: int, state: AdversaryPlayer) -> int:
        if live == 0:
            raise AdversaryInvalidError(
                "no domain member is consistent with the answers"
            )
        if mono(live):
            return 0
        if table is not None:
            hit = table.get((queried, answers))
            if hit is not None:
                return hit
        best: int | None = None
        for p in range(dom.n):
            if queried >> p & 1:
                continue
            child = state.clone()
            try:
                bit = child.answer(p)
            except AdversaryExhaustedError:
                best = 1
                break
            nxt = live & (ones_at[p] if bit else ~ones_at[p])
            value = 1 + rec(nxt, queried | 1 << p, answers | bit << p, child)
            if best is None or value < best:
                best = value
                if best == 1:
                    break
        if best is None:
            raise AdversaryInvalidError(
                "all positions answered without determining the label"
            )
        if table is not None:
            table[(queried, answers)] = best
        return best

    return rec(full, 0, 0, adv)
