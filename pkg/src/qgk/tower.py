"""Field-side data: base fields, power-series extensions and construction trees.

Cohomology of a power-series field E = K((Z^m)) is modelled on
``V_E = V_K ⊕ F_p^m`` (new symbols t_1..t_m) and
``W_E = W_K ⊕ (V_K ⊗ F_p^m) ⊕ Λ²(F_p^m)`` with product

    b_E((v, a), (v', a')) = (b_K(v, v'), v⊗a' - v'⊗a + eps_K⊗(a⊙a'), a∧a')

where ``(a⊙a')_l = a_l a'_l``.  The diagonal term makes t∪t = eps∪t.
W-blocks are ordered: old W, then V⊗new (old-basis-major), then Λ² in
lexicographic pairs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations, product

from . import bilform
from .bilform import AugBilinearMap, Morphism
from .fpla import FpMat
from .graphs import Cone, ConstructionTree, Free, Leaf


class BaseKind(enum.Enum):
    COMPLEX = "Complex"
    Z2EXT = "Z2Ext"
    Q2 = "Q2"


@dataclass(frozen=True)
class FieldData:
    map: AugBilinearMap
    provenance: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        viol = bilform.validate(self.map)
        if viol:
            raise ValueError(f"field data does not validate: {viol}")
        for labels in (self.map.vlabels, self.map.wlabels):
            if labels is not None and len(set(labels)) != len(labels):
                raise ValueError("labels must be distinct")

    @property
    def vlabels(self) -> tuple[str, ...]:
        return self.map.vlabels or tuple(f"v{i + 1}" for i in range(self.map.n))

    @property
    def wlabels(self) -> tuple[str, ...]:
        return self.map.wlabels or tuple(f"w{i + 1}" for i in range(self.map.m))


# -- 2-adic Hilbert symbols -----------------------------------------------

def _split2(a: int) -> tuple[int, int]:
    k = 0
    while a % 2 == 0:
        a //= 2
        k += 1
    return k, a


def hilbert_symbol_2(a: int, b: int) -> int:
    """(a, b)_2 in {1, -1} by the unit formula."""
    alpha, u = _split2(a)
    beta, v = _split2(b)
    eps = lambda x: ((x - 1) // 2) % 2  # noqa: E731
    omega = lambda x: ((x * x - 1) // 8) % 2  # noqa: E731
    e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
    return -1 if e % 2 else 1


def hilbert_symbol_2_search(a: int, b: int, k: int = 6) -> int:
    """(a, b)_2 by searching primitive solutions of a x^2 + b y^2 = z^2 modulo 2^k.

    Valid for a, b with 2-adic valuation at most 1 and k >= 5.
    """
    mod = 2**k
    sq = [x * x % mod for x in range(mod)]
    for x, y, z in product(range(mod), repeat=3):
        if x % 2 == 0 and y % 2 == 0 and z % 2 == 0:
            continue
        if (a * sq[x] + b * sq[y] - sq[z]) % mod == 0:
            return 1
    return -1


Q2_GENERATORS = (-1, 2, 5)


def q2_gram_from_symbols(symbol=hilbert_symbol_2) -> list[list[tuple[int]]]:
    """Gram table of Q_2 on the Kummer basis (-1), (2), (5): 1 where the symbol is -1."""
    return [[((1 if symbol(a, b) == -1 else 0),) for b in Q2_GENERATORS] for a in Q2_GENERATORS]


_Q2_GRAM = (
    ((1,), (0,), (0,)),
    ((0,), (0,), (1,)),
    ((0,), (1,), (0,)),
)


def base_field(kind: BaseKind | str, p: int) -> FieldData:
    kind = BaseKind(kind)
    if kind is BaseKind.COMPLEX:
        return FieldData(AugBilinearMap.build(p, 0, 0, [], [], (), ()), ("base C",))
    if p != 2:
        raise ValueError(f"{kind.value} is only modelled for p = 2")
    if kind is BaseKind.Z2EXT:
        M = AugBilinearMap.build(2, 1, 0, [[()]], [1], ("(-1)",), ())
        return FieldData(M, ("base Z2Ext: -1 sum of two squares, not a square",))
    M = AugBilinearMap.build(2, 3, 1, _Q2_GRAM, [1, 0, 0], ("(-1)", "(2)", "(5)"), ("(2)∪(5)",))
    return FieldData(M, ("base Q2",))


# -- extensions -----------------------------------------------------------

def extend_power_series(K: FieldData, m: int, names=None) -> tuple[FieldData, Morphism]:
    """E = K((Z^m)) with lexicographic order; returns E and the restriction K -> E."""
    if m < 0:
        raise ValueError("m must be non-negative")
    M = K.map
    p, n, w0 = M.p, M.n, M.m
    names = list(names) if names is not None else [f"(t{n + l + 1})" for l in range(m)]
    if len(names) != m:
        raise ValueError("need one name per new generator")
    pairs = list(combinations(range(m), 2))
    N, Wn = n + m, w0 + n * m + len(pairs)
    cross = lambda i, l: w0 + i * m + l  # noqa: E731
    wedge = {pr: w0 + n * m + k for k, pr in enumerate(pairs)}

    gram = [[[0] * Wn for _ in range(N)] for _ in range(N)]
    for i in range(n):
        for j in range(n):
            gram[i][j][:w0] = list(M.gram[i][j])
        for l in range(m):
            gram[i][n + l][cross(i, l)] = 1
            gram[n + l][i][cross(i, l)] = p - 1
    for l in range(m):
        for i, e in enumerate(M.eps):
            if e:
                gram[n + l][n + l][cross(i, l)] = e
        for k in range(l + 1, m):
            gram[n + l][n + k][wedge[(l, k)]] = 1
            gram[n + k][n + l][wedge[(l, k)]] = p - 1

    vl = list(K.vlabels) + names
    wl = list(K.wlabels)
    wl += [f"{vl[i]}∪{names[l]}" for i in range(n) for l in range(m)]
    wl += [f"{names[a]}∪{names[b]}" for a, b in pairs]
    E = FieldData(
        AugBilinearMap.build(p, N, Wn, gram, tuple(M.eps) + (0,) * m, vl, wl),
        K.provenance + (f"power series in {m} variable(s): {' '.join(names)}",),
    )
    f1 = FpMat.from_rows(p, [[int(r == c) for c in range(n)] for r in range(N)], n)
    f2 = FpMat.from_rows(p, [[int(r == c) for c in range(w0)] for r in range(Wn)], w0)
    return E, Morphism(f1, f2, M, E.map)


class NotSkewError(ValueError):
    pass


def extend_to_augmented(b: AugBilinearMap) -> AugBilinearMap:
    """Augment a skew-symmetric map, ignoring its eps, adding at most one dimension.

    Odd p: the map is alternating and eps = 0 works.  p = 2: adjoin eps with
    b(v + a eps, v' + a' eps) = b(v, v') + a' b(v, v) + a b(v', v').
    """
    p, n, m = b.p, b.n, b.m
    for i in range(n):
        for j in range(i, n):
            if any((x + y) % p for x, y in zip(b.gram[i][j], b.gram[j][i])):
                raise NotSkewError(f"b(v{i + 1},v{j + 1}) != -b(v{j + 1},v{i + 1})")
    if p != 2:
        return AugBilinearMap.build(p, n, m, b.gram, None, b.vlabels, b.wlabels)
    zero = (0,) * m
    gram = [list(row) + [row[i]] for i, row in enumerate(b.gram)]
    gram.append([b.gram[j][j] for j in range(n)] + [zero])
    vl = tuple(b.vlabels) + ("eps",) if b.vlabels else None
    return AugBilinearMap.build(p, n + 1, m, gram, (0,) * n + (1,), vl, b.wlabels)


def free_product_fields(K1: FieldData, K2: FieldData) -> FieldData:
    M = bilform.free_product(K1.map, K2.map).with_labels(K1.vlabels + K2.vlabels, K1.wlabels + K2.wlabels)
    return FieldData(M, (f"free product of [{'; '.join(K1.provenance)}] and [{'; '.join(K2.provenance)}]",))


def eval_tree(T: ConstructionTree, p: int) -> FieldData:
    """Evaluate a cone/free-product tree starting from Z_p leaves.

    The V-basis follows :func:`graphs.tree_labels`; each cone adds the W
    vectors labelled ``u-v`` for u in the child and v the apex.
    """
    if isinstance(T, Leaf):
        E, _ = extend_power_series(base_field(BaseKind.COMPLEX, p), 1, [T.label])
        return FieldData(E.map, (f"leaf {T.label}",))
    if isinstance(T, Cone):
        K = eval_tree(T.child, p)
        E, _ = extend_power_series(K, 1, [T.apex])
        wl = list(K.wlabels) + [f"{u}-{T.apex}" for u in K.vlabels]
        return FieldData(E.map.with_labels(wlabels=wl), K.provenance + (f"cone {T.apex}",))
    if isinstance(T, Free):
        out = eval_tree(T.children[0], p)
        for child in T.children[1:]:
            out = free_product_fields(out, eval_tree(child, p))
        return out
    raise TypeError(f"not a construction tree: {T!r}")


def _label_key(lab: str):
    return (0, int(lab), "") if lab.lstrip("-").isdigit() else (1, 0, lab)


def canonical_tree_map(T: ConstructionTree, p: int) -> AugBilinearMap:
    return canonical_form(eval_tree(T, p).map)


def canonical_form(M: AugBilinearMap) -> AugBilinearMap:
    """Evaluated tree map re-expressed in label order with edge-ordered W.

    V is sorted by label (numerically when labels are integers).  Every
    W-vector of a tree map is one cone edge ``u-v``; these are ordered
    lexicographically by the positions of their endpoints and signed so that
    b(smaller, larger) = +1, matching the graph map convention.
    """
    p = M.p
    vl = list(M.vlabels)
    vorder = sorted(range(M.n), key=lambda i: _label_key(vl[i]))
    pos = {vl[i]: k for k, i in enumerate(vorder)}
    keyed = []
    for k, lab in enumerate(M.wlabels):
        cuts = [c for c in range(1, len(lab)) if lab[c] == "-" and lab[:c] in pos and lab[c + 1 :] in pos]
        if len(cuts) != 1:
            raise ValueError(f"cannot read edge label {lab!r}")
        a, b = pos[lab[: cuts[0]]], pos[lab[cuts[0] + 1 :]]
        # the cone step wrote b(u, apex) = +1 with u the child vertex
        sign = 1 if a < b else p - 1
        keyed.append(((min(a, b), max(a, b)), k, sign))
    keyed.sort()
    return bilform.reorder(M, vorder, [k for _, k, _ in keyed], [s for _, _, s in keyed])
