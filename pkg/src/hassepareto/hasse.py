"""Coloured Hasse diagrams and the graph operations the solvers are built on.

A diagram is a DAG of aggregate vertices.  Each vertex holds a block of
variable indices that share one value; the blocks partition
``{0, 1, ..., n+1}`` where 0 and n+1 are the virtual lower (value 0) and
upper (value 1) bounds.  An edge ``u -> v`` reads ``x_u >= x_v``.

Vertices are identified by the smallest index of their block, so the lower
boundary always has id 0.  Diagrams are treated as values: every operation
returns a new diagram and never mutates its input.
"""

from __future__ import annotations

import heapq

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx


class InstanceError(ValueError):
    """Malformed instance: bad index, bad schema."""


class FrozenEdgeError(ValueError):
    """Attempt to contract an edge that is frozen on this branch."""


class ContradictionError(RuntimeError):
    """Internal state that a correct run cannot produce."""


class Colour(enum.Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"
    TRADEOFF = "tov"
    LOWER = "lower"
    UPPER = "upper"

    @property
    def is_boundary(self) -> bool:
        return self in (Colour.LOWER, Colour.UPPER)

    @property
    def is_monochrome(self) -> bool:
        return self in (Colour.ASCENDING, Colour.DESCENDING)


DOT_COLOURS = {
    Colour.ASCENDING: "blue",
    Colour.DESCENDING: "red",
    Colour.TRADEOFF: "gray",
    Colour.LOWER: "black",
    Colour.UPPER: "black",
}


@dataclass(frozen=True)
class Signature:
    """Split of the variables 1..n into maximized and minimized sets."""

    n: int
    ascending: frozenset[int]
    descending: frozenset[int] = field(init=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InstanceError(f"n must be >= 1, got {self.n}")
        asc = frozenset(self.ascending)
        bad = [i for i in asc if not 1 <= i <= self.n]
        if bad:
            raise InstanceError(f"maximize indices out of range 1..{self.n}: {sorted(bad)}")
        object.__setattr__(self, "ascending", asc)
        object.__setattr__(self, "descending", frozenset(range(1, self.n + 1)) - asc)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Signature":
        """Bit ``i-1`` of ``mask`` set means variable ``i`` is maximized."""
        return cls(n, frozenset(i for i in range(1, n + 1) if mask >> (i - 1) & 1))

    @property
    def mask(self) -> int:
        return sum(1 << (i - 1) for i in self.ascending)

    @property
    def upper_index(self) -> int:
        return self.n + 1

    def colour_of(self, indices: Iterable[int]) -> Colour:
        idx = set(indices)
        has_lower = 0 in idx
        has_upper = self.n + 1 in idx
        if has_lower and has_upper:
            raise ContradictionError("block contains both the lower and the upper bound")
        if has_lower:
            return Colour.LOWER
        if has_upper:
            return Colour.UPPER
        if not idx:
            raise ContradictionError("empty block")
        if idx <= self.ascending:
            return Colour.ASCENDING
        if idx <= self.descending:
            return Colour.DESCENDING
        return Colour.TRADEOFF


def merge_colour(a: Colour, b: Colour) -> Colour:
    """Colour of the aggregate obtained by fusing an ``a`` and a ``b`` vertex."""
    if {a, b} == {Colour.LOWER, Colour.UPPER}:
        raise ContradictionError("cannot merge the lower and the upper bound")
    if a.is_boundary:
        return a
    if b.is_boundary:
        return b
    if a is b and a.is_monochrome:
        return a
    return Colour.TRADEOFF


class HasseDiagram:
    """Immutable coloured DAG of aggregate vertices.

    ``blocks`` maps vertex id -> frozenset of indices; ``succ``/``pred`` map
    vertex id -> frozenset of neighbour ids; ``frozen`` is the set of frozen
    edges ``(u, v)``.
    """

    __slots__ = ("signature", "blocks", "colours", "succ", "pred", "frozen", "upper", "_reach")

    def __init__(
        self,
        signature: Signature,
        blocks: dict[int, frozenset[int]],
        colours: dict[int, Colour],
        succ: dict[int, frozenset[int]],
        pred: dict[int, frozenset[int]],
        frozen: frozenset[tuple[int, int]],
        upper: int,
        reach: dict[int, int] | None = None,
    ) -> None:
        self._reach = reach
        self.signature = signature
        self.blocks = blocks
        self.colours = colours
        self.succ = succ
        self.pred = pred
        self.frozen = frozen
        self.upper = upper

    @classmethod
    def from_parts(
        cls,
        signature: Signature,
        blocks: Iterable[Iterable[int]],
        edges: Iterable[tuple[int, int]],
        frozen: Iterable[tuple[int, int]] = (),
    ) -> "HasseDiagram":
        """Assemble a diagram from blocks and block-id edges.  No reduction."""
        bl = {min(b): frozenset(b) for b in map(frozenset, blocks)}
        colours = {v: signature.colour_of(b) for v, b in bl.items()}
        succ: dict[int, set[int]] = {v: set() for v in bl}
        pred: dict[int, set[int]] = {v: set() for v in bl}
        for u, v in edges:
            if u == v:
                continue
            succ[u].add(v)
            pred[v].add(u)
        edge_set = {(u, v) for u in succ for v in succ[u]}
        fr = frozenset(e for e in frozen if e in edge_set)
        upper = next((v for v, c in colours.items() if c is Colour.UPPER), -1)
        return cls(
            signature,
            bl,
            colours,
            {v: frozenset(s) for v, s in succ.items()},
            {v: frozenset(p) for v, p in pred.items()},
            fr,
            upper,
        )

    # -- read-only views ---------------------------------------------------

    @property
    def n(self) -> int:
        return self.signature.n

    @property
    def lower(self) -> int:
        return 0

    def vertices(self) -> list[int]:
        return sorted(self.blocks)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in self.succ for v in self.succ[u])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.succ.get(u, ())

    def is_frozen(self, u: int, v: int) -> bool:
        return (u, v) in self.frozen

    def __len__(self) -> int:
        return len(self.blocks)

    def vertex_of(self, index: int) -> int:
        for v, b in self.blocks.items():
            if index in b:
                return v
        raise KeyError(index)

    def key(self, with_frozen: bool = False) -> tuple:
        """Canonical value of the diagram (partition, colours, edges)."""
        parts = tuple(
            (tuple(sorted(self.blocks[v])), self.colours[v].value) for v in self.vertices()
        )
        k = (parts, tuple(self.edges()))
        if with_frozen:
            k = k + (tuple(sorted(self.frozen)),)
        return k

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HasseDiagram):
            return NotImplemented
        return self.signature == other.signature and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.signature, self.key()))

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{_fmt_block(self.blocks[v])}:{self.colours[v].value[0].upper()}"
            for v in self.vertices()
        )
        return f"HasseDiagram(n={self.n}, [{parts}], edges={self.edges()})"

    # -- reachability ------------------------------------------------------

    def topological_order(self) -> list[int]:
        """Kahn order, ties broken by vertex id; raises on a cycle."""
        indeg = {v: len(p) for v, p in self.pred.items()}
        ready = [v for v, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order: list[int] = []
        while ready:
            v = heapq.heappop(ready)
            order.append(v)
            for w in self.succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(ready, w)
        if len(order) != len(self.blocks):
            raise ContradictionError("diagram contains a cycle")
        return order

    def reach(self) -> dict[int, int]:
        """Bitset of strict descendants per vertex (bit ``w`` for vertex ``w``).

        Cached; do not mutate the returned dict.
        """
        if self._reach is not None:
            return self._reach
        out: dict[int, int] = {}
        for v in reversed(self.topological_order()):
            r = 0
            for w in self.succ[v]:
                r |= (1 << w) | out[w]
            out[v] = r
        self._reach = out
        return out

    def validate(self, full: bool = True) -> None:
        """Check the structural invariants; raise ``ContradictionError``."""
        sig = self.signature
        seen: set[int] = set()
        for v, b in self.blocks.items():
            if not b or min(b) != v:
                raise ContradictionError(f"vertex id {v} does not match block {sorted(b)}")
            if seen & b:
                raise ContradictionError("blocks overlap")
            seen |= b
            if self.colours[v] is not sig.colour_of(b):
                raise ContradictionError(f"colour of {sorted(b)} inconsistent")
        if full and seen != set(range(sig.n + 2)):
            raise ContradictionError("blocks do not partition {0..n+1}")
        if 0 not in self.blocks or self.upper not in self.blocks:
            raise ContradictionError("missing boundary vertex")
        for u in self.succ:
            for v in self.succ[u]:
                if u not in self.pred[v]:
                    raise ContradictionError("succ/pred mismatch")
        if self.pred[self.upper] or self.succ[0]:
            raise ContradictionError("boundary has an edge in the wrong direction")
        r = self.reach()
        for v in self.blocks:
            if v != self.upper and not (r[self.upper] >> v & 1):
                raise ContradictionError(f"vertex {v} not below the upper bound")
            if v != 0 and not (r[v] & 1):
                raise ContradictionError(f"vertex {v} not above the lower bound")
        for e in self.frozen:
            if not self.has_edge(*e):
                raise ContradictionError(f"frozen flag on missing edge {e}")

    # -- derived diagrams ----------------------------------------------------

    def with_frozen(self, edges: Iterable[tuple[int, int]]) -> "HasseDiagram":
        extra = frozenset(edges)
        for e in extra:
            if not self.has_edge(*e):
                raise KeyError(f"no edge {e}")
        return HasseDiagram(
            self.signature, self.blocks, self.colours, self.succ, self.pred,
            self.frozen | extra, self.upper, self._reach,
        )

    def without_edges(self, edges: Iterable[tuple[int, int]]) -> "HasseDiagram":
        drop = set(edges)
        if not drop:
            return self
        succ = dict(self.succ)
        pred = dict(self.pred)
        for u, v in drop:
            succ[u] = succ[u] - {v}
            pred[v] = pred[v] - {u}
        return HasseDiagram(
            self.signature, self.blocks, self.colours, succ, pred,
            self.frozen - drop, self.upper,
        )

    def to_dot(self, name: str = "H") -> str:
        lines = [f"digraph {name} {{", "  node [style=filled, fontcolor=white];"]
        for v in self.vertices():
            c = self.colours[v]
            label = _fmt_block(self.blocks[v])
            lines.append(f'  v{v} [label="{label}", fillcolor={DOT_COLOURS[c]}];')
        for u, v in self.edges():
            style = ' [style=dashed]' if (u, v) in self.frozen else ""
            lines.append(f"  v{u} -> v{v}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _fmt_block(b: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(b)) + "}"


def _redundant_edges(h: HasseDiagram, candidates: Iterable[tuple[int, int]], reach: dict[int, int]):
    for u, v in candidates:
        if (u, v) in h.frozen:
            continue
        for s in h.succ[u]:
            if s != v and reach[s] >> v & 1:
                yield (u, v)
                break


def transitive_reduction(h: HasseDiagram) -> HasseDiagram:
    """Drop every free edge implied by a longer path.  Frozen edges stay."""
    reach = h.reach()
    return h.without_edges(list(_redundant_edges(h, h.edges(), reach)))


def build_diagram(signature: Signature, constraints: Iterable[Sequence[int]]) -> HasseDiagram:
    """Initial diagram of an instance: condensed, bounded, transitively reduced."""
    n = signature.n
    pairs = [tuple(c) for c in constraints]
    for c in pairs:
        if len(c) != 2 or not all(isinstance(i, int) and 1 <= i <= n for i in c):
            raise InstanceError(f"constraint {list(c)} must be a pair of indices in 1..{n}")
    g = nx.DiGraph()
    g.add_nodes_from(range(1, n + 1))
    g.add_edges_from(pairs)
    blocks = [frozenset(c) for c in nx.strongly_connected_components(g)]
    owner = {i: min(b) for b in blocks for i in b}
    edges = {(owner[i], owner[j]) for i, j in pairs if owner[i] != owner[j]}
    has_in = {v for _, v in edges}
    has_out = {u for u, _ in edges}
    top = n + 1
    for b in blocks:
        v = min(b)
        if v not in has_in:
            edges.add((top, v))
        if v not in has_out:
            edges.add((v, 0))
    h = HasseDiagram.from_parts(signature, blocks + [frozenset({0}), frozenset({top})], edges)
    return transitive_reduction(h)


def contract_edge(h: HasseDiagram, u: int, v: int) -> HasseDiagram:
    """Fuse the endpoints of the free edge ``u -> v`` into one aggregate.

    The diagram is kept transitively reduced by re-examining only the edges
    that run from an ancestor of the fused vertex to one of its descendants.
    """
    if not h.has_edge(u, v):
        raise KeyError(f"no edge {u} -> {v}")
    if (u, v) in h.frozen:
        raise FrozenEdgeError(f"edge {u} -> {v} is frozen")
    w = min(u, v)
    colour = merge_colour(h.colours[u], h.colours[v])
    block = h.blocks[u] | h.blocks[v]

    blocks = {x: b for x, b in h.blocks.items() if x not in (u, v)}
    blocks[w] = block
    colours = {x: c for x, c in h.colours.items() if x not in (u, v)}
    colours[w] = colour

    def relabel(x: int) -> int:
        return w if x in (u, v) else x

    succ: dict[int, frozenset[int]] = {}
    pred: dict[int, frozenset[int]] = {}
    for x in blocks:
        if x == w:
            continue
        s, p = h.succ[x], h.pred[x]
        succ[x] = frozenset(map(relabel, s)) if (u in s or v in s) else s
        pred[x] = frozenset(map(relabel, p)) if (u in p or v in p) else p
    succ[w] = (h.succ[u] | h.succ[v]) - {u, v}
    pred[w] = (h.pred[u] | h.pred[v]) - {u, v}

    # a second path u -> ... -> v would close a cycle through the fused vertex
    old = h.reach()
    if any(old[s] >> v & 1 for s in h.succ[u] if s != v):
        raise ContradictionError(f"contracting {u} -> {v} creates a cycle")

    # fusing only changes what the ancestors of u or v reach; bits u, v
    # collapse onto w
    uv = (1 << u) | (1 << v)
    below = (old[u] | old[v]) & ~uv
    reach = {}
    for x in blocks:
        r = old[x]
        if x == w:
            r = below
        elif r & uv:
            r = (r | below) & ~uv | (1 << w)
        reach[x] = r

    frozen = set()
    for a, b in h.frozen:
        a2, b2 = relabel(a), relabel(b)
        if a2 != b2:
            frozen.add((a2, b2))
    upper = w if colour is Colour.UPPER else h.upper
    out = HasseDiagram(h.signature, blocks, colours, succ, pred, frozenset(frozen), upper, reach)

    anc = [x for x in blocks if reach[x] >> w & 1] + [w]
    desc = reach[w] | (1 << w)
    cand = [(a, b) for a in anc for b in out.succ[a] if desc >> b & 1]
    reduced = out.without_edges(list(_redundant_edges(out, cand, reach)))
    # dropping redundant edges leaves reachability unchanged
    reduced._reach = reach
    return reduced


def classify_vertex(h: HasseDiagram, v: int) -> tuple[bool, list[int], list[int]]:
    """Return ``(is_extremal, aims_at, conflicts_with)`` for vertex ``v``.

    A descending vertex aims at its out-neighbours, an ascending one at its
    in-neighbours.  Other colours aim at nothing and are never extremal.
    """
    c = h.colours[v]
    if c is Colour.DESCENDING:
        aims = sorted(h.succ[v])
        other = Colour.ASCENDING
    elif c is Colour.ASCENDING:
        aims = sorted(h.pred[v])
        other = Colour.DESCENDING
    else:
        return False, [], []
    conflicts = [t for t in aims if h.colours[t] is other]
    extremal = all(h.colours[t] is not c for t in aims)
    return extremal, aims, conflicts


def aim_edge(h: HasseDiagram, v: int, target: int) -> tuple[int, int]:
    """The diagram edge through which ``v`` aims at ``target``."""
    return (v, target) if h.colours[v] is Colour.DESCENDING else (target, v)


def conflicting_edges(h: HasseDiagram) -> list[tuple[int, int]]:
    """Edges from a descending vertex to an ascending one."""
    return [
        (u, v)
        for u, v in h.edges()
        if h.colours[u] is Colour.DESCENDING and h.colours[v] is Colour.ASCENDING
    ]


# -- instance files ------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """A problem: n variables, the maximized set, and ``x_i >= x_j`` pairs."""

    n: int
    maximize: tuple[int, ...]
    constraints: tuple[tuple[int, int], ...]
    comment: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "maximize", tuple(sorted(set(self.maximize))))
        object.__setattr__(self, "constraints", tuple(tuple(c) for c in self.constraints))
        self.signature  # validates indices
        for c in self.constraints:
            if len(c) != 2 or not all(isinstance(i, int) and 1 <= i <= self.n for i in c):
                raise InstanceError(f"constraint {list(c)} must be a pair of indices in 1..{self.n}")

    @property
    def signature(self) -> Signature:
        return Signature(self.n, frozenset(self.maximize))

    def diagram(self) -> HasseDiagram:
        return build_diagram(self.signature, self.constraints)

    def to_json(self) -> str:
        obj: dict = {
            "n": self.n,
            "maximize": list(self.maximize),
            "constraints": [list(c) for c in self.constraints],
        }
        if self.comment is not None:
            obj["comment"] = self.comment
        return json.dumps(obj) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        if not isinstance(obj, dict):
            raise InstanceError("top level must be an object")
        extra = set(obj) - {"n", "maximize", "constraints", "comment"}
        if extra:
            raise InstanceError(f"unknown fields: {sorted(extra)}")
        n = obj.get("n")
        if not isinstance(n, int) or isinstance(n, bool):
            raise InstanceError("field 'n': expected an integer")
        maximize = obj.get("maximize", [])
        if not isinstance(maximize, list) or not all(isinstance(i, int) for i in maximize):
            raise InstanceError("field 'maximize': expected an array of integers")
        cons = obj.get("constraints", [])
        if not isinstance(cons, list) or not all(
            isinstance(c, list) and len(c) == 2 and all(isinstance(i, int) for i in c) for c in cons
        ):
            raise InstanceError("field 'constraints': expected an array of [i, j] pairs")
        comment = obj.get("comment")
        if comment is not None and not isinstance(comment, str):
            raise InstanceError("field 'comment': expected a string")
        return cls(n, tuple(maximize), tuple(tuple(c) for c in cons), comment)

    @classmethod
    def load(cls, path: str | Path) -> "Instance":
        return cls.from_json(Path(path).read_text())

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())
