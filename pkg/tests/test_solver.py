from __future__ import annotations

import pytest
from hypothesis import given

from hassepareto.hasse import Instance
from hassepareto.instances import chain_instance, chained_tov_instance, fig4_instance
from hassepareto.oracle import verify_front
from hassepareto.solver import (
    Aggregate,
    Binding,
    ParetoFace,
    StuckError,
    canonical,
    dedupe_and_prune,
    face_contains,
    face_from_terminal,
    faces_from_json,
    faces_to_json,
    is_terminal,
    solve_basic,
    solve_improved,
)

from conftest import dag_instances, instances

# K_{2,2}: minimized 1, 2 both above maximized 3, 4
K22 = Instance(4, (3, 4), ((1, 3), (1, 4), (2, 3), (2, 4)))
# improved leaves here contain a face nested in a sibling face
NESTED = Instance(
    12,
    (1, 2, 3, 4, 5, 6, 9, 10),
    (
        (11, 4), (11, 10), (11, 9), (11, 1), (8, 5), (8, 4), (8, 9), (8, 7),
        (12, 5), (12, 4), (12, 9), (12, 3), (12, 7), (5, 10), (5, 3), (5, 1),
        (5, 2), (4, 3), (4, 1), (4, 7), (4, 2), (10, 9), (10, 3), (10, 1),
        (10, 7), (9, 3), (9, 1), (9, 7), (1, 7),
    ),
)


def strs(faces) -> list[str]:
    return [str(f) for f in faces]


def keys(faces) -> list:
    return [f.key for f in canonical(faces)]


# -- small worked instances (each also passes the lattice oracle) ----------------


@pytest.mark.parametrize("solve", [solve_basic, solve_improved])
def test_single_ascending_variable(solve):
    inst = Instance(1, (1,), ())
    faces = solve(inst.diagram()).faces
    assert strs(faces) == ["{1}=one"]
    assert faces[0].dimension == 0


@pytest.mark.parametrize("solve", [solve_basic, solve_improved])
def test_two_variable_conflict(solve):
    inst = Instance(2, (2,), ((1, 2),))
    faces = solve(inst.diagram()).faces
    assert strs(faces) == ["{1,2}=t1"]
    assert verify_front(inst, faces).passed


@pytest.mark.parametrize("solve", [solve_basic, solve_improved])
def test_aligned_pair(solve):
    inst = Instance(2, (1,), ((1, 2),))
    assert strs(solve(inst.diagram()).faces) == ["{1}=one {2}=zero"]


def test_two_minimized_above_one_maximized_is_one_segment():
    # x1 >= x2 <= x3 with 2 maximized: the front is the diagonal
    inst = Instance(3, (2,), ((1, 2), (3, 2)))
    faces = solve_improved(inst.diagram()).faces
    assert strs(faces) == ["{1,2,3}=t1"]
    report = verify_front(inst, faces)
    assert report.passed and report.n_pareto == 11


def test_hub_over_two_pairs_gives_two_faces():
    inst = chained_tov_instance(1)
    front = solve_improved(inst.diagram())
    assert strs(front.faces) == [
        "{1,2}=t1 {3,4,5}=t3 | t3>=t1",
        "{1,2,5}=t1 {3,4}=t3 | t1>=t3",
    ]
    assert front.stats.branchings == 1
    assert verify_front(inst, front, k=10).passed


def test_fig4_two_faces():
    front = solve_improved(fig4_instance().diagram())
    assert sorted(f.dimension for f in front.faces) == [5, 6]
    assert front.n_faces == 2


@pytest.mark.parametrize("mask", range(0, 1 << 7, 5))
def test_chain_single_face(mask):
    mx = [i for i in range(1, 8) if mask >> (i - 1) & 1]
    inst = chain_instance(7, mx)
    assert solve_improved(inst.diagram()).n_faces == 1
    assert len(dedupe_and_prune(solve_basic(inst.diagram()).faces)) == 1


# -- structural properties -----------------------------------------------------------


@given(instances(max_n=7))
def test_leaves_are_terminal(inst):
    for solve in (solve_basic, solve_improved):
        front = solve(inst.diagram())
        assert all(is_terminal(leaf) for leaf in front.leaves)
        assert sum(1 for node in front.tree.walk() if not node.children) >= len(front.leaves)


@given(instances(max_n=7))
def test_improved_matches_pruned_basic(inst):
    h = inst.diagram()
    assert keys(dedupe_and_prune(solve_basic(h).faces)) == keys(dedupe_and_prune(solve_improved(h).faces))


@given(instances(max_n=7))
def test_improved_faces_distinct(inst):
    faces = solve_improved(inst.diagram()).faces
    assert len({f.key for f in faces}) == len(faces)


@given(dag_instances(max_n=5))
def test_oracle_agrees(inst):
    h = inst.diagram()
    for solve in (solve_basic, solve_improved):
        assert verify_front(inst, solve(h).faces, k=8).passed


@given(instances(max_n=7))
def test_deterministic(inst):
    a = solve_improved(inst.diagram())
    b = solve_improved(inst.diagram())
    assert faces_to_json(a.faces) == faces_to_json(b.faces)
    assert a.stats == b.stats


@given(instances(max_n=7))
def test_depth_bound(inst):
    front = solve_improved(inst.diagram())
    # every contraction removes a vertex
    assert front.stats.max_depth <= inst.n + 1


def test_dead_branch_on_k22():
    front = solve_improved(K22.diagram())
    assert front.stats.dead_branches == 1
    assert strs(front.faces) == ["{1,2,3,4}=t1"]
    assert verify_front(K22, front).passed
    with pytest.raises(StuckError):
        solve_improved(K22.diagram(), strict=True)


def test_nested_face_instance():
    # improved leaves contain a face inside its sibling; pruning removes it
    h = NESTED.diagram()
    faces = solve_improved(h).faces
    pruned = dedupe_and_prune(faces)
    assert len(pruned) == len(faces) - 1
    assert keys(pruned) == keys(dedupe_and_prune(solve_basic(h).faces))


def test_basic_repeats_faces_on_k22():
    front = solve_basic(K22.diagram())
    assert front.n_faces >= 2
    assert len(dedupe_and_prune(front.faces)) == 1


@given(instances(max_n=7))
def test_node_table_keeps_faces(inst):
    h = inst.diagram()
    plain = solve_improved(h, keep_tree=False)
    tabled = solve_improved(h, keep_tree=False, dedupe_nodes=True)
    assert keys(plain.faces) == keys(tabled.faces)


# -- faces ------------------------------------------------------------------------------


def face(*aggs, cons=()):
    out = []
    for idx, b in aggs:
        binding = Binding(b) if b in ("zero", "one") else Binding.FREE
        out.append(Aggregate(tuple(idx), binding, None if binding is not Binding.FREE else b))
    return ParetoFace(tuple(sorted(out)), tuple(cons))


def test_face_from_terminal_tov_order():
    h = chained_tov_instance(1).diagram()
    leaf = solve_improved(h).leaves[0]
    f = face_from_terminal(leaf)
    assert f.dimension == 2 and f.param_constraints in ((("t1", "t3"),), (("t3", "t1"),))


def test_face_from_terminal_rejects_monochrome():
    with pytest.raises(ValueError):
        face_from_terminal(Instance(1, (1,), ()).diagram())


def test_face_contains_coarser_tov():
    big = face(((1, 2), "t1"), ((3, 4), "t3"))
    small = face(((1, 2, 3, 4), "t1"))
    assert face_contains(big, small)
    assert not face_contains(small, big)
    assert dedupe_and_prune([small, big, big]) == [big]


def test_face_contains_fixed_values():
    big = face(((1,), "t1"), ((2,), "zero"))
    assert face_contains(big, face(((1,), "one"), ((2,), "zero")))
    assert not face_contains(big, face(((1,), "one"), ((2,), "one")))


def test_face_contains_respects_order():
    big = face(((1,), "t1"), ((2,), "t2"), cons=[("t1", "t2")])
    assert face_contains(big, face(((1,), "one"), ((2,), "t2")))
    assert not face_contains(big, face(((1,), "zero"), ((2,), "t2")))
    assert face_contains(big, face(((1,), "t1"), ((2,), "zero")))


def test_faces_json_roundtrip():
    faces = solve_improved(fig4_instance().diagram()).faces
    assert faces_from_json(faces_to_json(faces)) == faces


def test_tree_dot():
    front = solve_improved(chained_tov_instance(1).diagram())
    dot = front.tree.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == sum(1 for _ in front.tree.walk()) - 1
