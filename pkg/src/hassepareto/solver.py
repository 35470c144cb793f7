"""Edge-contraction dynamic program over coloured Hasse diagrams.

Both variants expand a resolution tree whose leaves are terminal diagrams
(only trade-off and boundary vertices).  Each terminal diagram is rendered
as a :class:`ParetoFace`.

``solve_basic`` branches an extremal vertex against everything it aims at.
``solve_improved`` adds frozen edges and a contraction priority so that the
leaves are pairwise distinct faces.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .hasse import (
    Colour,
    ContradictionError,
    HasseDiagram,
    aim_edge,
    classify_vertex,
    contract_edge,
)


class Binding(enum.Enum):
    ZERO = "zero"
    ONE = "one"
    FREE = "free"


@dataclass(frozen=True, order=True)
class Aggregate:
    indices: tuple[int, ...]
    binding: Binding = field(compare=False)
    param: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ParetoFace:
    """One face: variables fixed at 0, fixed at 1, or tied to a free parameter.

    ``param_constraints`` holds pairs ``(a, b)`` meaning ``t_a >= t_b``,
    transitively reduced.
    """

    aggregates: tuple[Aggregate, ...]
    param_constraints: tuple[tuple[str, str], ...] = ()

    @property
    def dimension(self) -> int:
        return sum(1 for a in self.aggregates if a.binding is Binding.FREE)

    @property
    def key(self) -> tuple:
        aggs = tuple((a.indices, a.binding.value) for a in self.aggregates)
        return (aggs, self.param_constraints)

    def free(self) -> list[Aggregate]:
        return [a for a in self.aggregates if a.binding is Binding.FREE]

    def block_of(self) -> dict[int, int]:
        """Variable index -> position of its aggregate in ``aggregates``."""
        return {i: k for k, a in enumerate(self.aggregates) for i in a.indices}

    def to_dict(self) -> dict:
        aggs = []
        for a in self.aggregates:
            d: dict = {"indices": list(a.indices), "binding": a.binding.value}
            if a.param is not None:
                d["param"] = a.param
            aggs.append(d)
        return {
            "aggregates": aggs,
            "constraints": [list(c) for c in self.param_constraints],
            "dimension": self.dimension,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParetoFace":
        aggs = tuple(
            sorted(
                Aggregate(tuple(sorted(a["indices"])), Binding(a["binding"]), a.get("param"))
                for a in d["aggregates"]
            )
        )
        cons = tuple(sorted(tuple(c) for c in d.get("constraints", [])))
        face = cls(aggs, cons)
        if "dimension" in d and d["dimension"] != face.dimension:
            raise ValueError(f"dimension {d['dimension']} does not match {face.dimension} free aggregates")
        return face

    def __str__(self) -> str:
        parts = []
        for a in self.aggregates:
            tag = a.param if a.binding is Binding.FREE else a.binding.value
            parts.append("{" + ",".join(map(str, a.indices)) + "}=" + tag)
        cons = " ".join(f"{a}>={b}" for a, b in self.param_constraints)
        return " ".join(parts) + (f" | {cons}" if cons else "")


def faces_to_json(faces: Sequence[ParetoFace]) -> str:
    return json.dumps([f.to_dict() for f in faces], indent=1) + "\n"


def faces_from_json(text: str) -> list[ParetoFace]:
    return [ParetoFace.from_dict(d) for d in json.loads(text)]


def canonical(faces: Sequence[ParetoFace]) -> list[ParetoFace]:
    return sorted(faces, key=lambda f: f.key)


@dataclass(eq=False)
class ResolutionNode:
    diagram: HasseDiagram
    parent: "ResolutionNode | None" = None
    action: tuple[int, int] | None = None
    children: list["ResolutionNode"] = field(default_factory=list)
    depth: int = 0

    def walk(self) -> Iterator["ResolutionNode"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def to_dot(self) -> str:
        lines = ["digraph resolution {", "  node [shape=box, fontsize=9];"]
        ids: dict[int, int] = {}
        for k, node in enumerate(self.walk()):
            ids[id(node)] = k
            h = node.diagram
            label = " ".join(
                "{" + ",".join(map(str, sorted(h.blocks[v]))) + "}" + h.colours[v].value[0].upper()
                for v in h.vertices()
            )
            lines.append(f'  n{k} [label="{label}"];')
            if node.parent is not None:
                u, v = node.action
                lines.append(f'  n{ids[id(node.parent)]} -> n{k} [label="{u}-{v}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class SolveStats:
    nodes: int = 0
    branchings: int = 0
    faces: int = 0
    dead_branches: int = 0
    max_depth: int = 0
    duplicate_nodes: int = 0


@dataclass
class FrontRepresentation:
    faces: list[ParetoFace]
    tree: ResolutionNode | None
    stats: SolveStats
    leaves: list[HasseDiagram] = field(default_factory=list, repr=False)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def max_dimension(self) -> int:
        return max((f.dimension for f in self.faces), default=0)


def is_terminal(h: HasseDiagram) -> bool:
    return not any(c.is_monochrome for c in h.colours.values())


def face_from_terminal(h: HasseDiagram) -> ParetoFace:
    """Render a terminal diagram as an explicit parameterization."""
    if not is_terminal(h):
        raise ValueError("diagram still has ascending or descending vertices")
    top = h.n + 1
    aggs: list[Aggregate] = []
    tovs: list[int] = []
    for v in h.vertices():
        idx = tuple(sorted(i for i in h.blocks[v] if 0 < i < top))
        c = h.colours[v]
        if c is Colour.TRADEOFF:
            aggs.append(Aggregate(idx, Binding.FREE, f"t{idx[0]}"))
            tovs.append(v)
        elif idx:
            aggs.append(Aggregate(idx, Binding.ZERO if c is Colour.LOWER else Binding.ONE))
    # the diagram is reduced and no path between TOVs passes through a
    # boundary vertex, so TOV-to-TOV edges are exactly the cover relations
    tovset = set(tovs)
    cons = [
        (f"t{min(h.blocks[a])}", f"t{min(h.blocks[b])}")
        for a, b in h.edges()
        if a in tovset and b in tovset
    ]
    return ParetoFace(tuple(sorted(aggs)), tuple(sorted(cons)))


def face_contains(big: ParetoFace, small: ParetoFace) -> bool:
    """True iff every point of ``small`` is a point of ``big``."""
    sblock = small.block_of()
    sagg = small.aggregates
    sparam = {a.param: k for k, a in enumerate(sagg) if a.binding is Binding.FREE}
    bagg_of_param: dict[str, int] = {}
    for a in big.aggregates:
        blocks = {sblock[i] for i in a.indices}
        if len(blocks) != 1:
            return False
        (k,) = blocks
        if a.binding is not Binding.FREE and sagg[k].binding is not a.binding:
            return False
        if a.binding is Binding.FREE:
            bagg_of_param[a.param] = k
    # transitive closure of small's parameter order
    above: dict[int, set[int]] = {k: set() for k in sparam.values()}
    for a, b in small.param_constraints:
        above[sparam[a]].add(sparam[b])
    changed = True
    while changed:
        changed = False
        for k, s in above.items():
            extra = set().union(*(above[j] for j in s)) - s if s else set()
            if extra:
                s |= extra
                changed = True
    for a, b in big.param_constraints:
        ka, kb = bagg_of_param[a], bagg_of_param[b]
        if ka == kb or sagg[ka].binding is Binding.ONE or sagg[kb].binding is Binding.ZERO:
            continue
        if sagg[ka].binding is Binding.FREE and sagg[kb].binding is Binding.FREE and kb in above[ka]:
            continue
        return False
    return True


def dedupe_and_prune(faces: Sequence[ParetoFace]) -> list[ParetoFace]:
    """Drop duplicate faces and faces whose point set lies inside another face."""
    unique = {f.key: f for f in faces}
    items = canonical(list(unique.values()))
    keep = []
    for f in items:
        if not any(g is not f and face_contains(g, f) for g in items):
            keep.append(f)
    return keep


def _target_rank(h: HasseDiagram, v: int, t: int) -> tuple[int, int]:
    c = h.colours[t]
    if c.is_monochrome:
        rank = 0
    elif c is Colour.TRADEOFF:
        rank = 1
    else:
        rank = 2
    return (rank, t)


def _plan_basic(h: HasseDiagram) -> tuple[str, list[tuple[int, int]]]:
    for v in h.vertices():
        extremal, aims, _ = classify_vertex(h, v)
        if extremal:
            targets = sorted(aims, key=lambda t: _target_rank(h, v, t))
            return "branch", [aim_edge(h, v, t) for t in targets]
    return "terminal", []


def _plan_improved(h: HasseDiagram) -> tuple[str, list[tuple[int, int]]]:
    """Next action under the frozen-edge priority rule.

    Returns ``("terminal", [])``, ``("dead", [])`` when some extremal vertex
    can only be reached through frozen edges, ``("single", [edge])`` for a
    forced contraction, or ``("branch", edges)`` in contraction order.
    """
    first_branch: list[tuple[int, int]] | None = None
    single: list[tuple[int, int]] | None = None
    for v in h.vertices():
        extremal, aims, _ = classify_vertex(h, v)
        if not extremal:
            continue
        free = [t for t in aims if aim_edge(h, v, t) not in h.frozen]
        if not free:
            return "dead", [aim_edge(h, v, t) for t in aims]
        if len(free) == 1:
            if single is None:
                single = [aim_edge(h, v, free[0])]
        elif first_branch is None:
            targets = sorted(free, key=lambda t: _target_rank(h, v, t))
            first_branch = [aim_edge(h, v, t) for t in targets]
    if single is not None:
        return "single", single
    if first_branch is not None:
        return "branch", first_branch
    return "terminal", []


class StuckError(ContradictionError):
    """An extremal vertex is connected only through frozen edges."""


def _solve(
    h: HasseDiagram,
    improved: bool,
    keep_tree: bool,
    dedupe_nodes: bool,
    strict: bool,
) -> FrontRepresentation:
    stats = SolveStats()
    leaves: list[HasseDiagram] = []
    seen: set = set()
    root = ResolutionNode(h) if keep_tree else None
    plan = _plan_improved if improved else _plan_basic

    # explicit stack: (diagram, tree node, depth)
    stack: list[tuple[HasseDiagram, ResolutionNode | None, int]] = [(h, root, 0)]
    while stack:
        d, node, depth = stack.pop()
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, depth)
        if dedupe_nodes:
            k = d.key(with_frozen=True)
            if k in seen:
                stats.duplicate_nodes += 1
                continue
            seen.add(k)
        kind, edges = plan(d)
        if kind == "terminal":
            leaves.append(d)
            continue
        if kind == "dead":
            stats.dead_branches += 1
            if strict:
                raise StuckError(f"extremal vertex reachable only through frozen edges {edges}")
            continue
        if len(edges) > 1:
            stats.branchings += 1
        children = []
        for k, e in enumerate(edges):
            base = d.with_frozen(edges[:k]) if improved and k else d
            child = contract_edge(base, *e)
            cnode = None
            if node is not None:
                cnode = ResolutionNode(child, node, e, depth=depth + 1)
                node.children.append(cnode)
            children.append((child, cnode, depth + 1))
        stack.extend(reversed(children))

    faces = canonical([face_from_terminal(leaf) for leaf in leaves])
    stats.faces = len(faces)
    return FrontRepresentation(faces, root, stats, leaves)


def solve_basic(h: HasseDiagram, keep_tree: bool = True) -> FrontRepresentation:
    """Branch every extremal vertex against all of its targets; no dedup."""
    return _solve(h, improved=False, keep_tree=keep_tree, dedupe_nodes=False, strict=False)


def solve_improved(
    h: HasseDiagram,
    keep_tree: bool = True,
    dedupe_nodes: bool = False,
    strict: bool = False,
) -> FrontRepresentation:
    """Frozen-edge variant: leaves are pairwise distinct faces.

    A branch on which some extremal vertex is connected only through frozen
    edges holds no face that an earlier sibling has not already produced;
    it is cut and counted in ``stats.dead_branches`` (``strict=True``
    raises :class:`StuckError` instead).  ``dedupe_nodes`` keeps a table of
    visited diagrams and counts repeats in ``stats.duplicate_nodes``.
    """
    return _solve(h, improved=True, keep_tree=keep_tree, dedupe_nodes=dedupe_nodes, strict=strict)
