"""Domains, assignments, functions, restriction, and graph round-trips."""

import math

import pytest

from slicebench.errors import DomainError, EmptyRestrictionError, MembershipError
from slicebench.slicecore import (
    BOOLEAN,
    Assignment,
    Domain,
    LabeledFunction,
    SliceGraph,
    colex_rank,
    colex_unrank,
    complement_domain,
    expand_member,
    from_graph,
    iter_colex_masks,
    label_rank_bitsets,
    lift_assignment,
    mask_to_string,
    position_rank_bitsets,
    residual_positions,
    restrict,
    string_to_mask,
    to_graph,
)


def test_string_convention_index_is_position():
    assert string_to_mask("0010") == 0b100
    assert string_to_mask("1000") == 1
    assert mask_to_string(0b1100, 4) == "0011"
    for s in ("", "0", "0110", "111000"):
        assert mask_to_string(string_to_mask(s), len(s)) == s


def test_string_rejects_non_bits():
    with pytest.raises(DomainError):
        string_to_mask("01x0")


def test_colex_enumeration_is_increasing_masks():
    for n in range(2, 9):
        for k in range(1, n):
            masks = list(iter_colex_masks(n, k))
            assert len(masks) == math.comb(n, k)
            assert masks == sorted(masks)
            assert all(m.bit_count() == k for m in masks)
            for r, m in enumerate(masks):
                assert colex_rank(m) == r
                assert colex_unrank(r, n, k) == m


@pytest.mark.parametrize(
    "dom",
    [
        Domain.slice(5, 2),
        Domain.cube(4),
        Domain.explicit(4, [0b0000, 0b1010, 0b0111]),
    ],
)
def test_rank_unrank_bijection(dom):
    seen = set()
    for r, x in enumerate(dom.members()):
        assert dom.rank(x) == r
        assert dom.unrank(r) == x
        assert x in dom
        seen.add(x)
    assert len(seen) == dom.size
    assert dom.rank_map() == {x: r for r, x in enumerate(dom.members())}


def test_domain_membership_errors():
    dom = Domain.slice(4, 2)
    with pytest.raises(MembershipError):
        dom.rank(0b0111)
    with pytest.raises(MembershipError):
        dom.rank(1 << 5)
    with pytest.raises(MembershipError):
        dom.unrank(6)
    assert 0b0111 not in dom
    assert Domain.cube(3).rank(5) == 5


def test_domain_validation():
    with pytest.raises(DomainError):
        Domain.slice(4, 0)
    with pytest.raises(DomainError):
        Domain.slice(4, 4)
    with pytest.raises(DomainError):
        Domain.explicit(2, [])
    with pytest.raises(DomainError):
        Domain.explicit(2, [1, 1])
    with pytest.raises(DomainError):
        Domain.explicit(2, [4])
    assert Domain.slice(6, 3).is_balanced_slice
    assert not Domain.slice(6, 2).is_balanced_slice
    assert not Domain.cube(6).is_balanced_slice


def test_assignment_basics():
    a = Assignment.of(zeros=[1], ones=[0, 3])
    assert a.fixed == 0b1011
    assert a.size == 3
    assert not a.is_balanced
    assert a.consistent_with(0b1001)
    assert not a.consistent_with(0b1011)
    assert a.positions() == ([1], [0, 3])
    assert Assignment.from_json_obj(a.to_json_obj()) == a
    assert Assignment.of(zeros=[2], ones=[4]).is_balanced
    with pytest.raises(DomainError):
        Assignment.of(zeros=[1], ones=[1])


def test_assignment_union():
    a = Assignment.of(zeros=[0])
    b = Assignment.of(ones=[2])
    assert a.union(b) == Assignment.of(zeros=[0], ones=[2])
    with pytest.raises(DomainError):
        a.union(Assignment.of(ones=[0]))


def test_labeled_function_constructors_agree():
    dom = Domain.slice(4, 2)
    by_callable = LabeledFunction.from_callable(
        dom, lambda x: 1 if x & 1 else 0, BOOLEAN
    )
    by_indices = LabeledFunction.from_indices(
        dom, BOOLEAN, [1 if x & 1 else 0 for x in dom.members()]
    )
    assert by_callable == by_indices
    assert by_callable.indices() == by_indices.indices()
    assert by_callable.is_boolean
    assert by_callable.labels_used() == {0, 1}


def test_labeled_function_tuple_alphabet():
    dom = Domain.slice(4, 2)
    alpha = ((1, 1), (2, 0))
    f = LabeledFunction.from_callable(
        dom, lambda x: (2, 0) if x & 1 else (1, 1), alpha
    )
    assert f.evaluate(0b0011) == (2, 0)
    assert f.evaluate(0b1100) == (1, 1)
    assert not f.is_boolean
    with pytest.raises(DomainError):
        f.ones_bitset()


def test_ones_bitset_matches_table():
    dom = Domain.slice(5, 2)
    f = LabeledFunction.from_callable(dom, lambda x: x & 1, BOOLEAN)
    bits = f.ones_bitset()
    for r in range(dom.size):
        assert (bits >> r & 1) == f.label(r)


def test_position_and_label_bitsets():
    dom = Domain.slice(4, 2)
    ones_at = position_rank_bitsets(dom)
    for p in range(4):
        for r, x in enumerate(dom.members()):
            assert (ones_at[p] >> r & 1) == (x >> p & 1)
    f = LabeledFunction.from_callable(dom, lambda x: x & 1, BOOLEAN)
    by_label = label_rank_bitsets(f)
    assert len(by_label) == 2
    assert by_label[0] ^ by_label[1] == (1 << dom.size) - 1


def test_restrict_renumbers_residual_positions():
    dom = Domain.slice(5, 2)
    f = LabeledFunction.from_callable(
        dom, lambda x: 1 if x >> 3 & 1 else 0, BOOLEAN
    )
    a = Assignment.of(zeros=[1], ones=[4])
    residual = residual_positions(5, a)
    assert residual == [0, 2, 3]
    sub = restrict(f, a)
    assert sub.domain.n == 3
    for y in sub.domain.members():
        full = expand_member(y, residual, a)
        assert a.consistent_with(full)
        assert full in dom
        assert sub.evaluate(y) == f.evaluate(full)


def test_restrict_slice_stays_slice_and_cube_stays_cube():
    f = LabeledFunction.from_callable(Domain.slice(5, 2), lambda x: x & 1, BOOLEAN)
    sub = restrict(f, Assignment.of(ones=[0]))
    assert sub.domain.kind == "slice"
    assert (sub.domain.n, sub.domain.k) == (4, 1)
    g = LabeledFunction.from_callable(Domain.cube(3), lambda x: x & 1, BOOLEAN)
    subg = restrict(g, Assignment.of(zeros=[2]))
    assert subg.domain.kind == "cube"
    assert subg.domain.n == 2


def test_restrict_empty_raises():
    f = LabeledFunction.from_callable(Domain.slice(4, 2), lambda x: 0, BOOLEAN)
    with pytest.raises(EmptyRestrictionError):
        restrict(f, Assignment.of(ones=[0, 1, 2]))


def test_lift_assignment_round_trip():
    a = Assignment.of(zeros=[1], ones=[4])
    residual = residual_positions(5, a)
    b = Assignment.of(zeros=[0], ones=[2])
    lifted = lift_assignment(b, residual)
    assert lifted.positions() == ([0], [3])


def test_complement_domain_flips_members():
    f = LabeledFunction.from_callable(
        Domain.slice(5, 2), lambda x: 1 if x & 0b11 else 0, BOOLEAN
    )
    g = complement_domain(f)
    assert (g.domain.n, g.domain.k) == (5, 3)
    full = (1 << 5) - 1
    for x in f.domain.members():
        assert g.evaluate(full ^ x) == f.evaluate(x)


def test_graph_round_trip():
    g = SliceGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    f = from_graph(g)
    assert (f.domain.n, f.domain.k) == (5, 2)
    assert f.evaluate(string_to_mask("11000")) == 1
    assert f.evaluate(string_to_mask("10100")) == 0
    assert to_graph(f) == g
    assert g.complement().complement() == g
    assert g.edge_count() == 5
    assert SliceGraph.complete(4).edge_count() == 6
    assert SliceGraph.empty(3).edge_count() == 0


def test_graph_validation():
    with pytest.raises(DomainError):
        SliceGraph.from_edges(3, [(0, 0)])
    with pytest.raises(DomainError):
        SliceGraph.from_edges(3, [(0, 3)])
    with pytest.raises(DomainError):
        SliceGraph(n=2, adj=(2, 0))


def test_to_graph_needs_weight_two_boolean():
    f = LabeledFunction.from_callable(Domain.slice(5, 3), lambda x: 0, BOOLEAN)
    with pytest.raises(DomainError):
        to_graph(f)
