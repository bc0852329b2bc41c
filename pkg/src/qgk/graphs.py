"""Finite simplicial graphs, forbidden induced subgraphs and cone/union trees.

Vertices are 1-based.  Edges are stored as ``(i, j)`` with ``i < j``; the
W-basis of the graph map follows the lexicographic order of these pairs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterator, Union

from .bilform import AugBilinearMap


class GraphParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class SimplicialGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative vertex count")
        for e in self.edges:
            i, j = e
            if not (1 <= i < j <= self.n):
                raise ValueError(f"bad edge {e} for {self.n} vertices")

    @classmethod
    def from_edges(cls, n: int, edges) -> SimplicialGraph:
        es = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            e = (min(i, j), max(i, j))
            if e in es:
                raise ValueError(f"duplicate edge {e}")
            es.add(e)
        return cls(n, frozenset(es))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbours(self, v: int) -> set[int]:
        return {j if i == v else i for i, j in self.edges if v in (i, j)}

    def adjacency_masks(self) -> list[int]:
        """``masks[v]`` has bit u set iff u ~ v (index 0 unused)."""
        masks = [0] * (self.n + 1)
        for i, j in self.edges:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks

    def to_text(self) -> str:
        return "\n".join([str(self.n)] + [f"{i} {j}" for i, j in self.sorted_edges()]) + "\n"


def path_graph(n: int) -> SimplicialGraph:
    return SimplicialGraph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> SimplicialGraph:
    return SimplicialGraph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def complete_graph(n: int) -> SimplicialGraph:
    return SimplicialGraph.from_edges(n, combinations(range(1, n + 1), 2))


def parse_graph(text: str) -> SimplicialGraph:
    n = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        try:
            nums = [int(t) for t in toks]
        except ValueError:
            raise GraphParseError(f"expected integers, got {line!r}", lineno) from None
        if n is None:
            if len(nums) != 1 or nums[0] < 0:
                raise GraphParseError("first line must be the vertex count", lineno)
            n = nums[0]
            continue
        if len(nums) != 2:
            raise GraphParseError("edge lines take two vertex indices", lineno)
        i, j = nums
        if i == j:
            raise GraphParseError(f"loop at vertex {i}", lineno)
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphParseError(f"vertex out of range 1..{n}", lineno)
        e = (min(i, j), max(i, j))
        if e in edges:
            raise GraphParseError(f"duplicate edge {e[0]} {e[1]}", lineno)
        edges.add(e)
    if n is None:
        raise GraphParseError("empty graph file")
    return SimplicialGraph(n, frozenset(edges))


# -- forbidden subgraphs --------------------------------------------------

class ForbiddenKind(enum.Enum):
    L3 = "L3"
    C4 = "C4"


@dataclass(frozen=True)
class ForbiddenWitness:
    kind: ForbiddenKind
    vertices: tuple[int, int, int, int]

    def verify(self, g: SimplicialGraph) -> bool:
        """The induced edge set on the four vertices is exactly the path (or circle)."""
        a, b, c, d = self.vertices
        if len(set(self.vertices)) != 4:
            return False
        want = {frozenset(e) for e in ((a, b), (b, c), (c, d))}
        if self.kind is ForbiddenKind.C4:
            want.add(frozenset((d, a)))
        have = {frozenset(e) for e in combinations(self.vertices, 2) if g.adjacent(*e)}
        return have == want

    def __str__(self) -> str:
        return f"forbidden {self.kind.value} [{' '.join(map(str, self.vertices))}]"


def _classify(g: SimplicialGraph, quad: tuple[int, ...]) -> ForbiddenWitness | None:
    es = [e for e in combinations(quad, 2) if g.adjacent(*e)]
    deg = {v: 0 for v in quad}
    for a, b in es:
        deg[a] += 1
        deg[b] += 1
    if len(es) == 3 and sorted(deg.values()) == [1, 1, 2, 2]:
        kind = ForbiddenKind.L3
        start = min(v for v in quad if deg[v] == 1)
    elif len(es) == 4 and all(d == 2 for d in deg.values()):
        kind = ForbiddenKind.C4
        start = min(quad)
    else:
        return None
    order = [start]
    prev = None
    while len(order) < 4:
        cur = order[-1]
        nxt = sorted(v for v in quad if v != prev and v not in order and g.adjacent(cur, v))
        prev = cur
        order.append(nxt[0])
    return ForbiddenWitness(kind, tuple(order))


def find_forbidden(g: SimplicialGraph) -> ForbiddenWitness | None:
    """First 4-subset (lexicographic) inducing L3 or C4."""
    for quad in combinations(g.vertices, 4):
        w = _classify(g, quad)
        if w is not None:
            return w
    return None


# -- construction trees ---------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    label: str


@dataclass(frozen=True)
class Cone:
    child: "ConstructionTree"
    apex: str


@dataclass(frozen=True)
class Free:
    children: tuple["ConstructionTree", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("a free product needs at least two factors")


ConstructionTree = Union[Leaf, Cone, Free]


def tree_labels(t: ConstructionTree) -> list[str]:
    """Vertex labels in evaluation order (the V-basis order of the evaluated map)."""
    if isinstance(t, Leaf):
        return [t.label]
    if isinstance(t, Cone):
        return tree_labels(t.child) + [t.apex]
    return [lab for c in t.children for lab in tree_labels(c)]


def format_tree(t: ConstructionTree) -> str:
    if isinstance(t, Leaf):
        return f"(v {t.label})"
    if isinstance(t, Cone):
        return f"(* {format_tree(t.child)} {t.apex})"
    return "(+ " + " ".join(format_tree(c) for c in t.children) + ")"


class TreeParseError(ValueError):
    pass


def parse_tree(text: str) -> ConstructionTree:
    toks = text.replace("(", " ( ").replace(")", " ) ").split()
    toks = [t for t in toks if not t.startswith("#")]
    pos = 0

    def expect(tok: str) -> None:
        nonlocal pos
        if pos >= len(toks) or toks[pos] != tok:
            got = toks[pos] if pos < len(toks) else "end of input"
            raise TreeParseError(f"token {pos}: expected {tok!r}, got {got!r}")
        pos += 1

    def label() -> str:
        nonlocal pos
        if pos >= len(toks) or toks[pos] in ("(", ")"):
            raise TreeParseError(f"token {pos}: expected a label")
        pos += 1
        return toks[pos - 1]

    def node() -> ConstructionTree:
        nonlocal pos
        expect("(")
        if pos >= len(toks):
            raise TreeParseError("unexpected end of input")
        head = toks[pos]
        pos += 1
        if head == "v":
            out: ConstructionTree = Leaf(label())
        elif head == "*":
            child = node()
            out = Cone(child, label())
        elif head == "+":
            kids = []
            while pos < len(toks) and toks[pos] == "(":
                kids.append(node())
            if len(kids) < 2:
                raise TreeParseError(f"token {pos}: free product needs at least two factors")
            out = Free(tuple(kids))
        else:
            raise TreeParseError(f"token {pos - 1}: unknown node kind {head!r}")
        expect(")")
        return out

    tree = node()
    if pos != len(toks):
        raise TreeParseError(f"token {pos}: trailing input")
    labels = tree_labels(tree)
    if len(set(labels)) != len(labels):
        raise TreeParseError("vertex labels must be distinct")
    return tree


def _components(g: SimplicialGraph, verts: list[int]) -> list[list[int]]:
    vs = set(verts)
    seen: set[int] = set()
    comps = []
    for v in verts:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in g.neighbours(x):
                if y in vs and y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return sorted(comps)


def _decompose(g: SimplicialGraph, verts: list[int]) -> ConstructionTree | None:
    if len(verts) == 1:
        return Leaf(str(verts[0]))
    comps = _components(g, verts)
    if len(comps) > 1:
        kids = [_decompose(g, c) for c in comps]
        if any(k is None for k in kids):
            return None
        return Free(tuple(kids))
    vs = set(verts)
    for v in verts:
        if g.neighbours(v) >= vs - {v}:
            child = _decompose(g, [u for u in verts if u != v])
            return None if child is None else Cone(child, str(v))
    return None


def decompose(g: SimplicialGraph) -> ConstructionTree | ForbiddenWitness:
    """Split into components and strip universal vertices; on failure return the
    forbidden subgraph found by :func:`find_forbidden`."""
    if g.n == 0:
        raise ValueError("empty graph has no construction tree")
    tree = _decompose(g, list(g.vertices))
    if tree is not None:
        return tree
    w = find_forbidden(g)
    assert w is not None, "connected piece without universal vertex must contain L3 or C4"
    return w


# -- graph map ------------------------------------------------------------

def graph_bilinear(g: SimplicialGraph, p: int) -> AugBilinearMap:
    """``b(v_k, v_l) = e`` for the edge ``e = (k, l)``, ``k < l``, skew-extended; eps = 0."""
    n = g.n
    edges = g.sorted_edges()
    m = len(edges)
    gram = [[[0] * m for _ in range(n)] for _ in range(n)]
    for idx, (k, l) in enumerate(edges):
        gram[k - 1][l - 1][idx] = 1
        gram[l - 1][k - 1][idx] = p - 1
    return AugBilinearMap.build(
        p, n, m, gram, None,
        vlabels=[str(v) for v in g.vertices],
        wlabels=[f"{k}-{l}" for k, l in edges],
    )


# -- enumeration ----------------------------------------------------------

MAX_ENUM_N = 7


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(1, n + 1), 2))


def graph_from_code(n: int, code: int) -> SimplicialGraph:
    """Graph whose adjacency bit-string (first pair most significant) is ``code``."""
    pairs = _pairs(n)
    N = len(pairs)
    return SimplicialGraph(n, frozenset(pr for k, pr in enumerate(pairs) if (code >> (N - 1 - k)) & 1))


def graph_code(g: SimplicialGraph) -> int:
    pairs = _pairs(g.n)
    N = len(pairs)
    return sum(1 << (N - 1 - k) for k, pr in enumerate(pairs) if pr in g.edges)


def _pair_perms(n: int) -> list[list[int]]:
    """For each vertex permutation, the induced map on pair indices."""
    pairs = _pairs(n)
    index = {pr: k for k, pr in enumerate(pairs)}
    out = []
    for perm in permutations(range(1, n + 1)):
        out.append([index[tuple(sorted((perm[i - 1], perm[j - 1])))] for i, j in pairs])
    return out


def _apply(code: int, pmap: list[int], N: int) -> int:
    out = 0
    for k in range(N):
        if (code >> (N - 1 - k)) & 1:
            out |= 1 << (N - 1 - pmap[k])
    return out


def canonical_code(g: SimplicialGraph) -> int:
    """Minimal adjacency bit-string over all vertex relabellings."""
    if g.n > MAX_ENUM_N:
        raise ValueError(f"canonical forms limited to n <= {MAX_ENUM_N}")
    N = g.n * (g.n - 1) // 2
    code = graph_code(g)
    return min(_apply(code, pm, N) for pm in _pair_perms(g.n))


def enumerate_graphs(n: int, up_to_iso: bool = False) -> Iterator[SimplicialGraph]:
    """All labelled graphs on n vertices, or one minimal-code representative per class."""
    if n > MAX_ENUM_N:
        raise ValueError(f"enumeration limited to n <= {MAX_ENUM_N}")
    N = n * (n - 1) // 2
    if not up_to_iso:
        for code in range(1 << N):
            yield graph_from_code(n, code)
        return
    perms = _pair_perms(n)
    seen = bytearray(1 << N)
    for code in range(1 << N):
        if seen[code]:
            continue
        # codes are visited in increasing order, so this one is its orbit's minimum
        for pm in perms:
            seen[_apply(code, pm, N)] = 1
        yield graph_from_code(n, code)
