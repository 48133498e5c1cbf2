"""Certified maximum clique search with lazy vertex-dominance breaking.

The solver is a colour-bounded branch and bound.  Every step it takes is
logged so that the checker can replay it:

* improving cliques become ``sol`` lines;
* leaving a search node becomes a RUP clause saying that not all vertices of
  the current clique can be chosen;
* a colour-bound cut first derives an at-most-one constraint per remaining
  colour class, adds them to the objective bound, and then claims the RUP
  clause;
* a vertex skipped because an already considered vertex dominates it gets
  ``u + ~v >= 1`` by the dominance rule with the swap ``u <-> v`` as witness,
  under the lexicographic order over the vertices listed ascending in the
  tie-break order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from ..core import Objective, Vocabulary, geq
from ..formats import FormatError, ParsedInstance
from .symmetry import lex_pre_order_text


@dataclass(frozen=True)
class GraphSpec:
    """Undirected graph on vertices ``1..n`` without self-loops."""

    n: int
    edges: frozenset[tuple[int, int]] = frozenset()

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "GraphSpec":
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{n}")
            norm.add((min(u, v), max(u, v)))
        return cls(n, frozenset(norm))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbours(self, u: int) -> frozenset[int]:
        return self._adjacency[u]

    def degree(self, u: int) -> int:
        return len(self._adjacency[u])

    @property
    def _adjacency(self) -> dict[int, frozenset[int]]:
        adj = self.__dict__.get("_adj")
        if adj is None:
            sets: dict[int, set[int]] = {v: set() for v in self.vertices}
            for u, v in self.edges:
                sets[u].add(v)
                sets[v].add(u)
            adj = {v: frozenset(s) for v, s in sets.items()}
            object.__setattr__(self, "_adj", adj)
        return adj

    def rank(self, u: int) -> tuple[int, int]:
        """Sort key of the tie-break order: larger degree first, then larger index."""
        return (self.degree(u), u)

    def precedes(self, u: int, v: int) -> bool:
        """``u`` is above ``v`` in the tie-break order."""
        return self.rank(u) > self.rank(v)


def parse_dimacs(text: str) -> GraphSpec:
    """Read ``p edge n m`` / ``e u v`` graph files; ``c`` lines are comments."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) < 3 or n is not None:
                raise FormatError(lineno, 1, "bad problem line")
            try:
                n = int(parts[2])
            except ValueError:
                raise FormatError(lineno, 1, "vertex count must be an integer") from None
        elif parts[0] == "e":
            if n is None:
                raise FormatError(lineno, 1, "edge before the problem line")
            try:
                u, v = int(parts[1]), int(parts[2])
            except (IndexError, ValueError):
                raise FormatError(lineno, 1, "expected 'e u v'") from None
            if u == v or not (1 <= u <= n and 1 <= v <= n):
                raise FormatError(lineno, 1, f"invalid edge {u} {v}")
            edges.append((u, v))
        else:
            raise FormatError(lineno, 1, f"unknown line type {parts[0]!r}")
    if n is None:
        raise FormatError(1, 1, "missing problem line")
    return GraphSpec.from_edges(n, edges)


def render_dimacs(g: GraphSpec) -> str:
    lines = [f"p edge {g.n} {len(g.edges)}"]
    lines.extend(f"e {u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def vertex_dominates(g: GraphSpec, u: int, v: int) -> bool:
    """``N(u) - {v}`` contains ``N(v) - {u}``."""
    if u == v:
        raise ValueError("a vertex is not compared with itself")
    return (g.neighbours(v) - {u}) <= (g.neighbours(u) - {v})


def greedy_colouring(g: GraphSpec, order: Sequence[int]) -> list[list[int]]:
    """Give each vertex the lowest class with no neighbour in it, in ``order``."""
    classes: list[list[int]] = []
    for v in order:
        nb = g.neighbours(v)
        for cls in classes:
            if not nb.intersection(cls):
                cls.append(v)
                break
        else:
            classes.append([v])
    return classes


def colouring_order(g: GraphSpec, vertices: Iterable[int]) -> list[int]:
    """Vertices ascending in the tie-break order, so dominators get later classes."""
    return sorted(vertices, key=g.rank)


def tie_breaking_violations(g: GraphSpec, classes: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Pairs breaking the consistency conditions on a colouring.

    For mutually dominating ``u`` above ``v``: non-adjacent ones must share a
    class, adjacent ones must put ``u`` in a strictly later class.
    """
    where = {v: k for k, cls in enumerate(classes) for v in cls}
    bad = []
    for u, v in combinations(where, 2):
        if not (vertex_dominates(g, u, v) and vertex_dominates(g, v, u)):
            continue
        if g.precedes(v, u):
            u, v = v, u
        if g.adjacent(u, v):
            if where[u] <= where[v]:
                bad.append((u, v))
        elif where[u] != where[v]:
            bad.append((u, v))
    return bad


def clique_instance(g: GraphSpec) -> ParsedInstance:
    """``min sum ~v`` subject to ``~v + ~w >= 1`` for every non-adjacent pair."""
    vocab = Vocabulary(f"v{i}" for i in g.vertices)
    constraints = [geq([(1, -u), (1, -v)], 1)
                   for u, v in combinations(g.vertices, 2) if not g.adjacent(u, v)]
    inst = ParsedInstance(vocab, constraints, Objective([(1, -v) for v in g.vertices]),
                          declared_vars=g.n, declared_constraints=len(constraints))
    inst.source_count = len(constraints)
    return inst


@dataclass
class _Logger:
    g: GraphSpec
    non_edge: dict[tuple[int, int], int]
    next_id: int
    lines: list[str] = field(default_factory=list)
    bound_id: int | None = None

    def emit(self, text: str) -> int:
        self.lines.append(text)
        cid = self.next_id
        self.next_id += 1
        return cid

    def clause(self, vertices: Iterable[int]) -> str:
        body = " ".join(f"1 ~v{w}" for w in sorted(vertices))
        return f"{body} >= 1 ;" if body else ">= 1 ;"

    def at_most_one(self, cls: Sequence[int]) -> tuple[int | None, list[int]]:
        """Derive ``sum ~x >= |cls| - 1``; returns its id and the helper ids."""
        if len(cls) < 2:
            return None, []
        ids = []
        acc = self.non_edge[min(cls[0], cls[1]), max(cls[0], cls[1])]
        for t in range(3, len(cls) + 1):
            x = cls[t - 1]
            parts = [f"{acc} {t - 2} *"] if t > 3 else [str(acc)]
            for y in cls[:t - 1]:
                parts.append(f"{self.non_edge[min(x, y), max(x, y)]} +")
            parts.append(f"{t - 1} d")
            acc = self.emit("pol " + " ".join(parts))
            ids.append(acc)
        return acc, ids

    def bound_cut(self, classes: Sequence[Sequence[int]]) -> list[int]:
        """Add the bound and one at-most-one per class; returns ids to delete."""
        assert self.bound_id is not None
        parts = [str(self.bound_id)]
        helpers = []
        for cls in classes:
            amo, ids = self.at_most_one(cls)
            helpers.extend(ids)
            parts.append(f"{amo} +" if amo is not None else f"~v{cls[0]} +")
        helpers.append(self.emit("pol " + " ".join(parts)))
        return helpers


def solve_clique_certified(g: GraphSpec, use_dominance: bool = True
                           ) -> tuple[ParsedInstance, str, int]:
    """Find a maximum clique and a proof of its optimality."""
    inst = clique_instance(g)
    pairs = [(u, v) for u, v in combinations(g.vertices, 2) if not g.adjacent(u, v)]
    log = _Logger(g, {p: k for k, p in enumerate(pairs, 1)}, len(pairs) + 1)
    out = log.lines
    out.append("pseudo-Boolean proof version 2.0")
    out.append(f"f {inst.formula_count}")
    if use_dominance and g.n:
        out.extend(lex_pre_order_text("vertex_lex", g.n))
        out.append("load_order vertex_lex " + " ".join(
            f"v{v}" for v in colouring_order(g, g.vertices)))

    best: list[int] = []
    if g.n == 0:
        log.bound_id = log.emit("sol")

    def record(clique: list[int]) -> None:
        nonlocal best
        best = list(clique)
        chosen = set(clique)
        lits = " ".join(f"v{v}" if v in chosen else f"~v{v}" for v in g.vertices)
        log.bound_id = log.emit(f"sol {lits}")

    def search(remaining: list[int], current: list[int]) -> None:
        if len(current) > len(best):
            record(current)
        classes = greedy_colouring(g, colouring_order(g, remaining))
        assert not tie_breaking_violations(g, classes)
        alive = set(remaining)
        considered: list[int] = []
        j = len(classes)
        while j >= 1 and len(current) + j > len(best):
            for v in sorted(classes[j - 1], key=g.rank, reverse=True):
                dominator = None
                if use_dominance:
                    dominator = next((u for u in considered
                                      if g.precedes(u, v) and vertex_dominates(g, u, v)), None)
                considered.append(v)
                if dominator is not None:
                    w = f"v{dominator} -> v{v} v{v} -> v{dominator}"
                    log.emit(f"dom 1 v{dominator} 1 ~v{v} >= 1 ; {w}")
                    continue
                search(sorted(alive & g.neighbours(v)), current + [v])
            alive -= set(classes[j - 1])
            j -= 1
        helpers = log.bound_cut(classes[:j]) if j >= 1 else []
        log.emit("rup " + log.clause(current))
        if helpers:
            out.append("del id " + " ".join(map(str, helpers)))

    search(list(g.vertices), [])
    omega = len(best)
    out.append("output NONE")
    out.append(f"conclusion OPTIMAL {g.n - omega}")
    out.append("end pseudo-Boolean proof")
    return inst, "\n".join(out) + "\n", omega


def max_clique_brute_force(g: GraphSpec) -> int:
    """Largest clique size by trying every vertex subset."""
    best = 0
    verts = list(g.vertices)
    for mask in range(1 << g.n):
        chosen = [verts[i] for i in range(g.n) if mask >> i & 1]
        if len(chosen) > best and all(g.adjacent(u, v) for u, v in combinations(chosen, 2)):
            best = len(chosen)
    return best
