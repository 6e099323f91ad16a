"""Quivers, seeds, Fomin-Zelevinsky mutation, and walk cluster variables.

Arrows are a multiset of ordered vertex pairs (counts matter during
mutation even though affine type-D quivers themselves stay multiplicity
one).  Walks reference concrete arrow instances, so traversal direction is
never ambiguous when two arrows join the same pair of vertices.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from friezelab.errors import InputError
from friezelab.exactalg import RationalFunction

__all__ = [
    "Quiver",
    "Seed",
    "Walk",
    "WalkStep",
    "Arrow",
    "build_d_tilde",
    "classify_forks",
    "dtilde_n",
    "mutate_seed",
    "reduced_walk",
    "walk_cluster_variable",
    "quiver_from_json",
    "quiver_to_json",
    "load_quiver",
]

_RF_ONE = RationalFunction.one()


class Quiver:
    """Finite directed graph without loops or oriented 2-cycles."""

    __slots__ = ("vertices", "arrows")

    def __init__(self, vertices: Iterable[int], arrows):
        self.vertices = frozenset(int(v) for v in vertices)
        counts = Counter()
        if isinstance(arrows, (Counter, dict)):
            items = arrows.items()
        else:
            items = ((a, 1) for a in arrows)
        for (s, t), m in items:
            if m < 0:
                raise InputError("negative arrow multiplicity")
            if m:
                counts[(int(s), int(t))] += m
        self.arrows = counts
        self._validate()

    def _validate(self):
        for (s, t), m in self.arrows.items():
            if s not in self.vertices or t not in self.vertices:
                raise InputError(f"arrow ({s},{t}) references unknown vertex")
            if s == t:
                raise InputError(f"loop at vertex {s}")
            if (t, s) in self.arrows:
                raise InputError(f"oriented 2-cycle between {s} and {t}")

    def arrows_out(self, v: int) -> list[tuple[int, int, int]]:
        """Arrow instances (s, t, copy) with source v."""
        return [(s, t, i) for (s, t), m in sorted(self.arrows.items()) if s == v for i in range(m)]

    def arrows_in(self, v: int) -> list[tuple[int, int, int]]:
        return [(s, t, i) for (s, t), m in sorted(self.arrows.items()) if t == v for i in range(m)]

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for s, t in self.arrows:
            if s == v:
                out.add(t)
            elif t == v:
                out.add(s)
        return out

    def mutate(self, k: int) -> Quiver:
        """Quiver mutation at k: reverse at k, add composites, cancel 2-cycles."""
        if k not in self.vertices:
            raise InputError(f"unknown vertex {k}")
        new = Counter()
        ins, outs = [], []
        for (s, t), m in self.arrows.items():
            if s == k:
                new[(t, k)] += m
                outs.append((t, m))
            elif t == k:
                new[(k, s)] += m
                ins.append((s, m))
            else:
                new[(s, t)] += m
        for i, mi in ins:
            for j, mj in outs:
                new[(i, j)] += mi * mj
        for s, t in [p for p in new if p[0] < p[1]]:
            c = min(new[(s, t)], new.get((t, s), 0))
            if c:
                new[(s, t)] -= c
                new[(t, s)] -= c
        return Quiver(self.vertices, new)

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None

    def topological_order(self) -> list[int] | None:
        indeg = {v: 0 for v in self.vertices}
        for (s, t), m in self.arrows.items():
            indeg[t] += m
        ready = sorted(v for v, d in indeg.items() if d == 0)
        order = []
        queue = deque(ready)
        while queue:
            v = queue.popleft()
            order.append(v)
            for (s, t), m in sorted(self.arrows.items()):
                if s == v:
                    indeg[t] -= m
                    if indeg[t] == 0:
                        queue.append(t)
        return order if len(order) == len(self.vertices) else None

    def canonical_arrows(self) -> tuple:
        return tuple(sorted((s, t, m) for (s, t), m in self.arrows.items() if m))

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.vertices, self.canonical_arrows()))

    def __repr__(self):
        arrows = ", ".join(
            f"{s}->{t}" + (f" (x{m})" if m > 1 else "")
            for (s, t), m in sorted(self.arrows.items())
        )
        return f"Quiver({sorted(self.vertices)}; {arrows})"


@dataclass(frozen=True)
class Seed:
    """A quiver together with one rational-function variable per vertex."""

    quiver: Quiver
    variables: Mapping[int, RationalFunction]

    def __post_init__(self):
        missing = self.quiver.vertices - set(self.variables)
        if missing:
            raise InputError(f"seed is missing variables for vertices {sorted(missing)}")

    @staticmethod
    def initial(quiver: Quiver) -> Seed:
        """Seed with the indeterminate u_v at every vertex v."""
        return Seed(quiver, {v: RationalFunction.variable(v) for v in quiver.vertices})

    def variable(self, v: int) -> RationalFunction:
        return self.variables[v]

    def canonical_key(self) -> tuple:
        """Sorted variable strings plus the arrow multiset (oracle dedup key)."""
        return (
            tuple(sorted(str(x) for x in self.variables.values())),
            self.quiver.canonical_arrows(),
        )

    def __repr__(self):
        vals = ", ".join(f"{v}: {self.variables[v]}" for v in sorted(self.quiver.vertices))
        return f"Seed({vals})"


def mutate_seed(seed: Seed, k: int) -> Seed:
    """Fomin-Zelevinsky mutation: rewrite the quiver and exchange x_k."""
    q = seed.quiver
    if k not in q.vertices:
        raise InputError(f"unknown vertex {k}")
    prod_in = _RF_ONE
    prod_out = _RF_ONE
    for (s, t), m in q.arrows.items():
        if t == k:
            prod_in = prod_in * seed.variables[s] ** m
        elif s == k:
            prod_out = prod_out * seed.variables[t] ** m
    new_vars = dict(seed.variables)
    new_vars[k] = (prod_in + prod_out) / seed.variables[k]
    return Seed(q.mutate(k), new_vars)


# ---------------------------------------------------------------------------
# the affine type-D diagram
# ---------------------------------------------------------------------------

def _dtilde_edges(n: int) -> list[tuple[int, int]]:
    edges = [(1, 3), (2, 3)]
    edges += [(i, i + 1) for i in range(3, n - 1)]
    edges += [(n, n - 1), (n + 1, n - 1)]
    return edges


def build_d_tilde(n: int, orientation) -> Quiver:
    """The affine D quiver on vertices 1..n+1 with the given orientation.

    ``orientation`` is either a list of directed arrows covering each diagram
    edge exactly once, or one of the shorthands:

    - ``"all-in"``: fork arrows point at the joints, chain runs 3 -> 4 -> ...
    - ``"all-out"``: the reverse of all-in
    - ``"canonical"``: bottom fork into 3, chain forward, top fork out of n-1
    """
    if n < 4:
        raise InputError("affine type D needs n >= 4")
    edges = _dtilde_edges(n)
    if isinstance(orientation, str):
        if orientation == "all-in":
            arrows = [(1, 3), (2, 3), (n, n - 1), (n + 1, n - 1)]
            arrows += [(i, i + 1) for i in range(3, n - 1)]
        elif orientation == "all-out":
            arrows = [(3, 1), (3, 2), (n - 1, n), (n - 1, n + 1)]
            arrows += [(i + 1, i) for i in range(3, n - 1)]
        elif orientation == "canonical":
            arrows = [(1, 3), (2, 3), (n - 1, n), (n - 1, n + 1)]
            arrows += [(i, i + 1) for i in range(3, n - 1)]
        else:
            raise InputError(f"unknown orientation shorthand {orientation!r}")
    else:
        arrows = [(int(s), int(t)) for s, t in orientation]
        need = {frozenset(e) for e in edges}
        got = [frozenset(a) for a in arrows]
        if len(got) != len(need) or set(got) != need:
            raise InputError("orientation must direct each diagram edge exactly once")
    return Quiver(range(1, n + 2), arrows)


def dtilde_n(quiver: Quiver) -> int | None:
    """n when the quiver's underlying graph is the affine D_n diagram, else None."""
    n = len(quiver.vertices) - 1
    if n < 4 or quiver.vertices != frozenset(range(1, n + 2)):
        return None
    if any(m != 1 for m in quiver.arrows.values()):
        return None
    undirected = sorted(tuple(sorted(a)) for a in quiver.arrows)
    expected = sorted(tuple(sorted(e)) for e in _dtilde_edges(n))
    return n if undirected == expected else None


def classify_forks(quiver: Quiver) -> dict[str, str]:
    """Orientation class of each fork: both-in, both-out, or mixed."""
    n = dtilde_n(quiver)
    if n is None:
        raise InputError("not an affine type-D quiver")

    def classify(joint, a, b):
        inward = ((a, joint) in quiver.arrows, (b, joint) in quiver.arrows)
        if all(inward):
            return "both-in"
        if not any(inward):
            return "both-out"
        return "mixed"

    return {
        "bottom": classify(3, 1, 2),
        "top": classify(n - 1, n, n + 1),
    }


# ---------------------------------------------------------------------------
# reduced walks and the matrix-product cluster-variable formula
# ---------------------------------------------------------------------------

Arrow = tuple  # (source, target, copy index)


@dataclass(frozen=True)
class WalkStep:
    arrow: Arrow
    forward: bool

    @property
    def start(self) -> int:
        return self.arrow[0] if self.forward else self.arrow[1]

    @property
    def end(self) -> int:
        return self.arrow[1] if self.forward else self.arrow[0]


@dataclass(frozen=True)
class Walk:
    """A reduced walk v1 - v2 - ... - v_{m+1} along concrete arrow instances."""

    start: int
    steps: tuple[WalkStep, ...]

    @property
    def vertices(self) -> list[int]:
        out = [self.start]
        for step in self.steps:
            out.append(step.end)
        return out

    def __len__(self):
        return len(self.steps)

    def validate(self, quiver: Quiver):
        at = self.start
        if at not in quiver.vertices:
            raise InputError(f"walk starts at unknown vertex {at}")
        prev = None
        for step in self.steps:
            s, t, i = step.arrow
            if i >= quiver.arrows.get((s, t), 0):
                raise InputError(f"walk references missing arrow {s}->{t}")
            if step.start != at:
                raise InputError("walk steps are not contiguous")
            if prev is not None and prev.arrow == step.arrow and prev.forward != step.forward:
                raise InputError("walk is not reduced")
            at = step.end
            prev = step


def reduced_walk(quiver: Quiver, start: int, end: int) -> Walk:
    """The unique reduced walk between two vertices of a tree-shaped quiver."""
    if start not in quiver.vertices or end not in quiver.vertices:
        raise InputError("walk endpoints must be vertices")
    if start == end:
        return Walk(start, ())
    paths = []

    def dfs(v, used, acc):
        if v == end:
            paths.append(tuple(acc))
            return
        for arrow in quiver.arrows_out(v) + quiver.arrows_in(v):
            if arrow in used:
                continue
            forward = arrow[0] == v
            nxt = arrow[1] if forward else arrow[0]
            dfs(nxt, used | {arrow}, acc + [WalkStep(arrow, forward)])

    dfs(start, frozenset(), [])
    if not paths:
        raise InputError(f"vertices {start} and {end} are not connected")
    if len(paths) > 1:
        raise InputError(f"walk from {start} to {end} is not unique")
    return Walk(start, paths[0])


def _step_matrix(seed: Seed, step: WalkStep):
    s, t, _ = step.arrow
    us, ut = seed.variables[s], seed.variables[t]
    zero, one = RationalFunction.zero(), _RF_ONE
    if step.forward:
        return (ut, zero, one, us)
    return (ut, one, zero, us)


def _vertex_matrix(seed: Seed, quiver: Quiver, v: int, banned: set):
    top = _RF_ONE
    bot = _RF_ONE
    for arrow in quiver.arrows_out(v):
        if arrow not in banned:
            top = top * seed.variables[arrow[1]]
    for arrow in quiver.arrows_in(v):
        if arrow not in banned:
            bot = bot * seed.variables[arrow[0]]
    return top, bot


def walk_cluster_variable(seed: Seed, walk: Walk) -> RationalFunction:
    """Evaluate the matrix-product formula attached to a reduced walk.

    The leading divisor multiplies the seed variable at every vertex the
    walk visits (the conventional identity factor contributes the start
    vertex).  Step matrices use the arrow's own source/target variables and
    the diagonal vertex matrices skip the two walk arrows meeting there.
    """
    q = seed.quiver
    walk.validate(q)
    verts = walk.vertices
    divisor = _RF_ONE
    for v in verts:
        divisor = divisor * seed.variables[v]
    zero, one = RationalFunction.zero(), _RF_ONE
    row = (one, one)
    for k, v in enumerate(verts):
        banned = set()
        if k > 0:
            banned.add(walk.steps[k - 1].arrow)
        if k < len(walk.steps):
            banned.add(walk.steps[k].arrow)
        if k > 0:
            a, b, c, d = _step_matrix(seed, walk.steps[k - 1])
            row = (row[0] * a + row[1] * c, row[0] * b + row[1] * d)
        top, bot = _vertex_matrix(seed, q, v, banned)
        row = (row[0] * top, row[1] * bot)
    return (row[0] + row[1]) / divisor


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def quiver_from_json(data) -> Quiver:
    """Read the quiver file format, including the affine-D shorthand."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid quiver JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("quiver JSON must be an object")
    if "dtilde" in data:
        spec = data["dtilde"]
        if not isinstance(spec, dict) or "n" not in spec:
            raise InputError('the "dtilde" shorthand needs {"n": ..., "arrows": ...}')
        return build_d_tilde(int(spec["n"]), spec.get("arrows", "all-in"))
    try:
        return Quiver(data["vertices"], [tuple(a) for a in data["arrows"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid quiver JSON: {exc}") from exc


def quiver_to_json(quiver: Quiver) -> dict:
    arrows = []
    for (s, t), m in sorted(quiver.arrows.items()):
        arrows.extend([[s, t]] * m)
    return {"vertices": sorted(quiver.vertices), "arrows": arrows}


def load_quiver(path: str) -> Quiver:
    with open(path, "r", encoding="utf-8") as fh:
        return quiver_from_json(fh.read())
