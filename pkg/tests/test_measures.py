"""Measure engines against the naive oracles, witness checks, and caps."""

import pytest

from oracles import (
    block_sensitivity_max,
    certificate_max,
    degree_oracle,
    minimax_depth,
    mono_number_oracle,
    sensitivity_max,
)
from slicebench.catalog import (
    make_ed,
    make_eq,
    or_first_half,
    paley_weight2,
    random_graph,
    random_slice_function,
)
from slicebench.errors import ResourceCapError, VerificationError
from slicebench.measures.algebra import degree
from slicebench.measures.bounds import (
    max_one_subcube_intersection,
    monochromatic_number,
    packing_lower_bound,
)
from slicebench.measures.certificates import (
    balanced_certificate,
    certificate_complexity,
    subcube_partition_complexity,
    unambiguous_certificate_complexity,
)
from slicebench.measures.depth import (
    exact_depth,
    exact_depth_with_tree,
    nonadaptive_positions,
)
from slicebench.measures.report import compute_measures, verify_entry
from slicebench.measures.sensitivity import block_sensitivity, sensitivity
from slicebench.measures.trees import depth as tree_depth
from slicebench.measures.trees import (
    evaluate as tree_evaluate,
    tree_from_json_obj,
    validate as validate_tree,
)
from slicebench.slicecore import (
    BOOLEAN,
    Domain,
    LabeledFunction,
    SliceGraph,
    from_graph,
    string_to_mask,
)


def all_boolean_functions(dom):
    for code in range(1 << dom.size):
        yield LabeledFunction.from_indices(
            dom, BOOLEAN, [code >> r & 1 for r in range(dom.size)]
        )


def test_frozen_oracle_values_eq1():
    f = make_eq(1)
    assert exact_depth(f) == 2
    assert certificate_complexity(f)[0] == 2
    assert sensitivity(f)[0] == 2
    assert block_sensitivity(f)[0] == 2
    assert block_sensitivity(f, max_block_size=2)[0] == 2
    assert degree(f)[0] == 2


def test_frozen_oracle_values_random_functions():
    expected = {
        0: ([1, 1, 0, 1, 1, 1], 2, 2, 2, 2, 2),
        1: ([0, 0, 1, 0, 1, 1], 1, 1, 1, 1, 1),
        2: ([0, 0, 0, 1, 0, 1], 2, 2, 2, 2, 2),
    }
    for seed, (table, d, c, s, bs, dg) in expected.items():
        f = random_slice_function(4, 2, seed)
        assert f.indices() == table
        assert exact_depth(f) == d
        assert certificate_complexity(f)[0] == c
        assert sensitivity(f)[0] == s
        assert block_sensitivity(f)[0] == bs
        assert degree(f)[0] == dg


def test_frozen_oracle_values_cube3():
    dom = Domain.cube(3)
    parity = LabeledFunction.from_callable(dom, lambda x: x.bit_count() % 2, BOOLEAN)
    assert exact_depth(parity) == 3
    assert degree(parity)[0] == 3
    assert sensitivity(parity)[0] == 3
    majority = LabeledFunction.from_callable(
        dom, lambda x: 1 if x.bit_count() >= 2 else 0, BOOLEAN
    )
    assert exact_depth(majority) == 3
    assert certificate_complexity(majority)[0] == 2
    assert sensitivity(majority)[0] == 2
    assert block_sensitivity(majority)[0] == 2
    assert degree(majority)[0] == 3


def test_exhaustive_slice42_against_oracles():
    dom = Domain.slice(4, 2)
    for f in all_boolean_functions(dom):
        assert exact_depth(f) == minimax_depth(f)
        assert certificate_complexity(f)[0] == certificate_max(f)
        assert sensitivity(f)[0] == sensitivity_max(f)
        assert block_sensitivity(f)[0] == block_sensitivity_max(f)
        assert degree(f)[0] == degree_oracle(f)


def test_exhaustive_cube2_against_oracles():
    dom = Domain.cube(2)
    for f in all_boolean_functions(dom):
        assert exact_depth(f) == minimax_depth(f)
        assert certificate_complexity(f)[0] == certificate_max(f)
        assert sensitivity(f)[0] == sensitivity_max(f)
        assert block_sensitivity(f)[0] == block_sensitivity_max(f)
        assert degree(f)[0] == degree_oracle(f)


def test_sampled_cube3_against_oracles():
    dom = Domain.cube(3)
    for code in range(0, 256, 7):
        f = LabeledFunction.from_indices(
            dom, BOOLEAN, [code >> r & 1 for r in range(8)]
        )
        assert exact_depth(f) == minimax_depth(f)
        assert degree(f)[0] == degree_oracle(f)
        assert block_sensitivity(f)[0] == block_sensitivity_max(f)


def test_explicit_domain_measures():
    dom = Domain.explicit(3, [0b000, 0b011, 0b101, 0b111])
    f = LabeledFunction.from_callable(dom, lambda x: 1 if x == 0b111 else 0, BOOLEAN)
    assert exact_depth(f) == minimax_depth(f)
    assert sensitivity(f)[0] == sensitivity_max(f)
    assert block_sensitivity(f)[0] == block_sensitivity_max(f)
    assert degree(f)[0] == degree_oracle(f)


def test_constant_function_measures_are_zero():
    f = LabeledFunction.from_callable(Domain.slice(5, 2), lambda x: 1, BOOLEAN)
    assert exact_depth(f) == 0
    assert certificate_complexity(f)[0] == 0
    assert sensitivity(f)[0] == 0
    assert block_sensitivity(f)[0] == 0
    assert degree(f)[0] == 0


def test_depth_tree_witness_validates():
    for seed in range(10):
        f = random_slice_function(5, 2, seed)
        value, tree = exact_depth_with_tree(f)
        validate_tree(tree, f)
        assert tree_depth(tree) == value
        for x in f.domain.members():
            assert f.alphabet[tree_evaluate(tree, x)] == f.evaluate(x)


def test_tree_json_round_trip():
    f = random_slice_function(5, 2, 3)
    _, tree = exact_depth_with_tree(f)
    clone = tree_from_json_obj(tree.to_json_obj())
    assert clone == tree


def test_nonadaptive_dominates_depth():
    for seed in range(10):
        f = random_slice_function(5, 2, seed)
        value, positions = nonadaptive_positions(f)
        assert exact_depth(f) <= value <= 5
        assert len(positions) == value
        fixed = {}
        for x in f.domain.members():
            key = tuple(x >> p & 1 for p in positions)
            assert fixed.setdefault(key, f.evaluate(x)) == f.evaluate(x)


def test_balanced_certificate_bounds():
    dom = Domain.slice(4, 2)
    for f in all_boolean_functions(dom):
        bc, _ = balanced_certificate(f)
        mbc, _ = balanced_certificate(f, min_mode=True)
        c, _ = certificate_complexity(f)
        assert mbc <= bc
        assert c <= bc
        assert mbc % 2 == 0 and bc % 2 == 0
        assert exact_depth(f) >= mbc - 1


def test_uc_sc_chain_exhaustive_slice42():
    dom = Domain.slice(4, 2)
    for f in all_boolean_functions(dom):
        c, _ = certificate_complexity(f)
        uc, _ = unambiguous_certificate_complexity(f)
        sc, _ = subcube_partition_complexity(f)
        d = exact_depth(f)
        assert c <= uc <= sc <= d


def test_monochromatic_number_matches_oracle_on_small_graphs():
    for seed in range(20):
        g = random_graph(5, seed)
        size, witness = monochromatic_number(g)
        assert size == mono_number_oracle(g)
        verts = witness["vertices"]
        assert len(verts) == size
        pairs = [(u, v) for i, u in enumerate(verts) for v in verts[i + 1 :]]
        if witness["kind"] == "clique":
            assert all(g.has_edge(u, v) for u, v in pairs)
        else:
            assert not any(g.has_edge(u, v) for u, v in pairs)
    assert monochromatic_number(paley_weight2(5))[0] == 2
    assert monochromatic_number(SliceGraph.complete(5))[0] == 5
    assert monochromatic_number(SliceGraph.empty(5))[0] == 5


def test_packing_bound_below_depth():
    ed = make_ed(3, 2)
    packing, witness = packing_lower_bound(ed)
    assert packing <= exact_depth(ed)
    assert packing >= 1
    assert isinstance(witness, dict)


def test_max_one_subcube_on_graph_function():
    g = SliceGraph.from_edges(4, [(0, 1), (2, 3)])
    f = from_graph(g)
    value, witness = max_one_subcube_intersection(f)
    assert value == 1
    assert isinstance(witness, dict)


def test_resource_caps():
    big = or_first_half(21)
    with pytest.raises(ResourceCapError):
        nonadaptive_positions(big)
    wide = LabeledFunction.from_callable(Domain.slice(13, 1), lambda x: x & 1, BOOLEAN)
    with pytest.raises(ResourceCapError):
        unambiguous_certificate_complexity(wide)
    with pytest.raises(ResourceCapError):
        subcube_partition_complexity(
            LabeledFunction.from_callable(Domain.slice(7, 1), lambda x: x & 1, BOOLEAN)
        )


def test_compute_measures_report_shape_and_verify():
    f = make_eq(1)
    names = ["D", "C", "s", "bs", "bs2", "BC", "mBC", "deg", "nonadaptive"]
    report = compute_measures(f, names, {"construction": "eq:k=1"})
    assert set(report["measures"]) == set(names)
    for name in names:
        entry = report["measures"][name]
        assert set(entry) == {"value", "witness", "nodes", "millis"}
        verify_entry(f, name, entry)


def test_verify_rejects_tampered_entries():
    f = make_eq(1)
    report = compute_measures(f, ["D", "C", "s"], None)
    for name in ("D", "C", "s"):
        entry = dict(report["measures"][name])
        entry["value"] = entry["value"] + 1
        with pytest.raises(VerificationError):
            verify_entry(f, name, entry)


def test_verify_rejects_foreign_witness():
    f = make_eq(1)
    g = random_slice_function(4, 2, 0)
    entry = compute_measures(g, ["D"], None)["measures"]["D"]
    with pytest.raises(VerificationError):
        verify_entry(f, "D", entry)


def test_weight_one_depth_is_half_n():
    for n in range(2, 9):
        f = or_first_half(n)
        assert exact_depth(f) == n // 2
    assert exact_depth(or_first_half(6)) == minimax_depth(or_first_half(6))


def test_distinctness_small_instance_frozen_values():
    ed = make_ed(3, 2)
    assert exact_depth(ed) == 4
    assert exact_depth(ed) == minimax_depth(ed)
    assert max_one_subcube_intersection(ed)[0] == 4


def test_depth_on_strings_spread_across_positions():
    f = LabeledFunction.from_callable(
        Domain.slice(6, 3),
        lambda x: 1 if string_to_mask("111000") == x else 0,
        BOOLEAN,
    )
    d = exact_depth(f)
    assert 1 <= d <= 4
