"""Interface resolution and the product form of the Pareto front.

The interface of a diagram is its set of conflicting vertices.  Once every
conflict has been absorbed into a trade-off vertex, the remaining monotone
components only touch each other through trade-off vertices and can be
solved one at a time.  The front is then the union, over interface
resolutions, of all combinations of component leaves, glued together by
merging aggregates that share variables.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import networkx as nx

from .hasse import (
    Colour,
    ContradictionError,
    HasseDiagram,
    aim_edge,
    classify_vertex,
    conflicting_edges,
    contract_edge,
    transitive_reduction,
)
from .solver import ParetoFace, _target_rank, dedupe_and_prune, face_from_terminal, solve_improved


class ComponentTooLarge(RuntimeError):
    pass


def compute_interface(h: HasseDiagram) -> frozenset[int]:
    """Vertex ids of all conflicting vertices."""
    out: set[int] = set()
    for u, v in conflicting_edges(h):
        out.update((u, v))
    return frozenset(out)


def _plan_interface(h: HasseDiagram) -> tuple[str, list[tuple[int, int]]]:
    conflicted = bool(conflicting_edges(h))
    forced_conflict = forced = branch = None
    for v in h.vertices():
        extremal, aims, conflicts = classify_vertex(h, v)
        if not extremal:
            continue
        free = [t for t in aims if aim_edge(h, v, t) not in h.frozen]
        if not free:
            return "dead", []
        if not conflicted:
            continue
        touches = any(t in conflicts for t in free)
        if len(free) == 1:
            edge = [aim_edge(h, v, free[0])]
            if touches and forced_conflict is None:
                forced_conflict = edge
            elif forced is None:
                forced = edge
        elif touches and branch is None:
            targets = sorted(free, key=lambda t: _target_rank(h, v, t))
            branch = [aim_edge(h, v, t) for t in targets]
    for kind, edges in (("single", forced_conflict), ("single", forced), ("branch", branch)):
        if edges is not None:
            return kind, edges
    # the remaining conflicts sit behind branchings that do not involve
    # them; they are left to the component solves
    return "done", []


def resolve_interface(h: HasseDiagram) -> list[HasseDiagram]:
    """Diagrams ``H_u`` reached by resolving the interface first.

    Uses the frozen-edge contraction rules, restricted to forced
    contractions and to branchings of extremal vertices that have a
    conflicting target.
    """
    out: list[HasseDiagram] = []
    stack = [h]
    while stack:
        d = stack.pop()
        kind, edges = _plan_interface(d)
        if kind == "done":
            out.append(d)
        elif kind == "single":
            stack.append(contract_edge(d, *edges[0]))
        elif kind == "branch":
            children = [
                contract_edge(d.with_frozen(edges[:k]) if k else d, *e) for k, e in enumerate(edges)
            ]
            stack.extend(reversed(children))
    return out


def monotone_units(h: HasseDiagram) -> list[frozenset[int]]:
    """Groups of monochromatic vertices linked by an aiming relation.

    After a full interface resolution these are exactly the monotone
    connected components; a conflict left unresolved joins its two sides.
    """
    g = nx.Graph()
    mono = [v for v in h.vertices() if h.colours[v].is_monochrome]
    g.add_nodes_from(mono)
    for u, v in h.edges():
        cu, cv = h.colours[u], h.colours[v]
        if not (cu.is_monochrome and cv.is_monochrome):
            continue
        if cu is Colour.DESCENDING or cv is Colour.ASCENDING:
            g.add_edge(u, v)
    units = [frozenset(c) for c in nx.connected_components(g)]
    return sorted(units, key=min)


def component_diagram(h: HasseDiagram, unit: frozenset[int]) -> HasseDiagram:
    """Sub-diagram of a unit together with the vertices it aims at."""
    keep = set(unit) | {0, h.upper}
    for v in unit:
        _, aims, _ = classify_vertex(h, v)
        keep.update(aims)
    edges = {(u, v) for u, v in h.edges() if u in keep and v in keep}
    has_in = {v for _, v in edges}
    has_out = {u for u, _ in edges}
    for v in keep:
        if v != h.upper and v not in has_in:
            edges.add((h.upper, v))
        if v != 0 and v not in has_out:
            edges.add((v, 0))
    frozen = [e for e in h.frozen if e in edges]
    return HasseDiagram.from_parts(h.signature, [h.blocks[v] for v in keep], edges, frozen)


@dataclass
class ComponentSolution:
    cid: tuple[int, int]
    subdiagram: HasseDiagram
    leaves: list[HasseDiagram]


@dataclass
class Resolution:
    diagram: HasseDiagram
    components: list[ComponentSolution]

    @property
    def product_size(self) -> int:
        return math.prod(len(c.leaves) for c in self.components)


@dataclass
class ProductFront:
    resolutions: list[Resolution] = field(default_factory=list)

    @property
    def n_leaves(self) -> int:
        """Stored component leaves: the size of the unexpanded representation."""
        return sum(len(c.leaves) for r in self.resolutions for c in r.components)

    @property
    def n_terms(self) -> int:
        """Number of concatenations the product stands for."""
        return sum(r.product_size for r in self.resolutions)

    def expand(self) -> list[ParetoFace]:
        faces = []
        for r in self.resolutions:
            for combo in itertools.product(*(c.leaves for c in r.components)):
                faces.append(face_from_terminal(concatenate(r.diagram, combo)))
        return dedupe_and_prune(faces)

    def to_json(self) -> str:
        obj = []
        for u, r in enumerate(self.resolutions, start=1):
            comps = []
            for c in r.components:
                comps.append({
                    "component": list(c.cid),
                    "vertices": [sorted(c.subdiagram.blocks[v]) for v in c.subdiagram.vertices()],
                    "leaves": [face_from_terminal(leaf).to_dict() for leaf in c.leaves],
                })
            obj.append({
                "resolution": u,
                "blocks": [sorted(r.diagram.blocks[v]) for v in r.diagram.vertices()],
                "edges": [list(e) for e in r.diagram.edges()],
                "components": comps,
                "product": [len(c.leaves) for c in r.components],
            })
        return json.dumps(obj, indent=1) + "\n"


def concatenate(h: HasseDiagram, leaves) -> HasseDiagram:
    """Glue component leaves onto ``h``: vertices sharing variables merge."""
    owner = {i: v for v, b in h.blocks.items() for i in b}
    g = nx.DiGraph()
    g.add_nodes_from(h.vertices())
    uf = nx.utils.UnionFind(h.vertices())
    for leaf in leaves:
        for b in leaf.blocks.values():
            members = {owner[i] for i in b}
            uf.union(*members)
    for u, v in h.edges():
        g.add_edge(uf[u], uf[v])
    g.remove_edges_from(nx.selfloop_edges(g))
    # residual cycles mean the glued aggregates are forced equal
    groups: dict[int, set[int]] = {}
    for v in h.vertices():
        groups.setdefault(uf[v], set()).add(v)
    for scc in nx.strongly_connected_components(g):
        if len(scc) > 1:
            uf.union(*scc)
    blocks: dict[int, set[int]] = {}
    for v in h.vertices():
        blocks.setdefault(uf[v], set()).update(h.blocks[v])
    rep = {v: min(blocks[uf[v]]) for v in h.vertices()}
    edges = {(rep[u], rep[v]) for u, v in h.edges() if rep[u] != rep[v]}
    out = transitive_reduction(
        HasseDiagram.from_parts(h.signature, [frozenset(b) for b in blocks.values()], edges)
    )
    if any(c.is_monochrome for c in out.colours.values()):
        raise ContradictionError("concatenation left a monochromatic vertex")
    return out


def solve_by_decomposition(h: HasseDiagram, max_component: int | None = None) -> ProductFront:
    """Product-form front.

    With ``max_component`` set, raises :class:`ComponentTooLarge` when some
    unit has more vertices than the bound (the bounded-size regime where the
    representation stays linear).
    """
    front = ProductFront()
    for hu in resolve_interface(h):
        comps = []
        for unit in monotone_units(hu):
            if max_component is not None and len(unit) > max_component:
                raise ComponentTooLarge(f"component of {len(unit)} vertices exceeds {max_component}")
            sub = component_diagram(hu, unit)
            leaves = solve_improved(sub, keep_tree=False).leaves
            comps.append(ComponentSolution((len(front.resolutions) + 1, len(comps) + 1), sub, leaves))
        front.resolutions.append(Resolution(hu, comps))
    return front
