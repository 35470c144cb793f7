from __future__ import annotations

import json

import pytest
from hypothesis import given

from hassepareto.decomposition import (
    ComponentTooLarge,
    compute_interface,
    monotone_units,
    resolve_interface,
    solve_by_decomposition,
)
from hassepareto.hasse import Colour, Instance, classify_vertex, conflicting_edges
from hassepareto.instances import (
    chain_instance,
    chained_tov_instance,
    fence_instance,
    grid_instance,
    random_series_parallel_instance,
)
from hassepareto.solver import canonical, dedupe_and_prune, solve_improved

from conftest import instances


def keys(faces) -> list:
    return [f.key for f in canonical(faces)]


def test_interface_empty_when_aligned():
    assert compute_interface(chain_instance(4, (1, 2)).diagram()) == frozenset()


def test_interface_two_variable_conflict():
    assert compute_interface(Instance(2, (2,), ((1, 2),)).diagram()) == {1, 2}


def test_interface_grid_pairs():
    # 2x2 grid, only cell 4 (bottom right) maximized: its two upper
    # neighbours conflict with it
    h = grid_instance(2, 2, (4,)).diagram()
    scan = {x for u, v in h.edges() if u in (2, 3) and v == 4 for x in (u, v)}
    assert compute_interface(h) == scan == {2, 3, 4}


@given(instances(max_n=8))
def test_interface_is_conflict_endpoints(inst):
    h = inst.diagram()
    assert compute_interface(h) == {x for e in conflicting_edges(h) for x in e}


@given(instances(max_n=8))
def test_interface_containment(inst):
    # an extremal vertex aiming at no boundary is in the interface or aims
    # only at trade-off vertices
    h = inst.diagram()
    iface = compute_interface(h)
    for v in h.vertices():
        ext, aims, _ = classify_vertex(h, v)
        if not ext or any(h.colours[t].is_boundary for t in aims):
            continue
        assert v in iface or all(h.colours[t] is Colour.TRADEOFF for t in aims)


def test_resolve_two_variable_conflict():
    (hu,) = resolve_interface(Instance(2, (2,), ((1, 2),)).diagram())
    assert hu.colours[1] is Colour.TRADEOFF and len(hu) == 3


@pytest.mark.parametrize("seed", range(40))
def test_series_parallel_unique_resolution(seed):
    inst = random_series_parallel_instance(2 + seed % 9, seed)
    assert len(resolve_interface(inst.diagram())) == 1


def test_fence_resolution():
    # the N motif admits several resolutions in principle; here the
    # frozen-edge rules leave a single live one
    h = fence_instance().diagram()
    assert len(resolve_interface(h)) == 1
    assert keys(solve_by_decomposition(h).expand()) == keys(solve_improved(h).faces)


def test_resolved_diagrams_have_no_conflicts():
    h = chained_tov_instance(3).diagram()
    for hu in resolve_interface(h):
        assert not conflicting_edges(hu)


def test_independent_conflicts():
    inst = Instance(4, (2, 4), ((1, 2), (3, 4)))
    front = solve_by_decomposition(inst.diagram())
    assert front.n_terms == 1
    (face,) = front.expand()
    assert face.dimension == 2


def test_two_components_two_leaves_each():
    h = chained_tov_instance(2).diagram()
    front = solve_by_decomposition(h)
    (res,) = front.resolutions
    assert [len(c.leaves) for c in res.components] == [2, 2]
    assert res.product_size == 4
    assert keys(front.expand()) == keys(solve_improved(h).faces)


def test_chain_is_direct_solve():
    h = chain_instance(6, (2, 5)).diagram()
    front = solve_by_decomposition(h)
    assert front.n_terms == 1
    assert keys(front.expand()) == keys(solve_improved(h).faces)


@pytest.mark.parametrize("k", range(2, 7))
def test_compression(k):
    front = solve_by_decomposition(chained_tov_instance(k).diagram())
    assert front.n_leaves == 2 * k
    assert front.n_terms == 2 ** k
    assert len(front.expand()) == 2 ** k


def test_monotone_units_partition_mono_vertices():
    h = grid_instance(3, 3, (5, 9)).diagram()
    units = monotone_units(h)
    covered = sorted(v for u in units for v in u)
    assert covered == sorted(v for v in h.vertices() if h.colours[v].is_monochrome)


def test_component_size_bound():
    with pytest.raises(ComponentTooLarge):
        solve_by_decomposition(chain_instance(6, ()).diagram(), max_component=3)


@given(instances(max_n=8))
def test_expand_matches_pruned_improved(inst):
    h = inst.diagram()
    expected = dedupe_and_prune(solve_improved(h).faces)
    assert keys(solve_by_decomposition(h).expand()) == keys(expected)


def test_product_json():
    front = solve_by_decomposition(chained_tov_instance(2).diagram())
    obj = json.loads(front.to_json())
    assert obj[0]["product"] == [2, 2]
    assert len(obj[0]["components"][0]["leaves"]) == 2
