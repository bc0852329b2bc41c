"""Pro-p presentations, normal forms modulo S^(3) and cup products.

Commutators follow ``[a, b] = a^-1 b^-1 a b``, so ``ab = ba[a, b]``.
Modulo S^(3) commutators are central and bilinear, which gives the swap rule
used by the collector (for k > j)::

    x_k^s x_j^t  =  x_j^t x_k^s [x_j, x_k]^(-s t)

Powers x^p are central modulo S^(3) and x^(p^2) lies in it, so the
collected exponents are kept mod p^2 and commutator exponents mod p.

The degree-2 Magnus expansion (x -> 1 + X) is an independent oracle: with
collected exponents c and commutator exponents d one has, for i < j,
``coef(X_i X_j) = c_i c_j + d_ij`` and ``coef(X_i^2) = C(c_i, 2)`` mod p.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from . import fpla
from .bilform import AugBilinearMap

Word = tuple[tuple[int, int], ...]  # (generator index 1..n, nonzero exponent)


class PresentationError(ValueError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        if pos is not None and text is not None:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


class FrattiniError(ValueError):
    """The relator is not in the Frattini subgroup S^p[S, S]."""

    def __init__(self, generator: int, exponent: int, p: int):
        self.generator = generator
        super().__init__(
            f"relator not in Frattini subgroup: exponent sum {exponent} of generator {generator} is not divisible by {p}"
        )


class CupProductError(ValueError):
    pass


def reduce_word(letters) -> Word:
    """Free reduction: merge equal neighbours, drop zero exponents."""
    out: list[list[int]] = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


def inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def power(w: Word, k: int) -> Word:
    base = w if k > 0 else inverse(w)
    return reduce_word(base * abs(k))


def commutator(a: Word, b: Word) -> Word:
    return reduce_word(inverse(a) + inverse(b) + a + b)


@dataclass(frozen=True)
class Presentation:
    names: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise PresentationError("generator names must be distinct")
        for r in self.relators:
            if not r:
                raise PresentationError("empty relator")
            for g, e in r:
                if not 1 <= g <= len(self.names) or e == 0:
                    raise PresentationError(f"bad letter ({g}, {e})")

    @property
    def n(self) -> int:
        return len(self.names)

    def format_word(self, w: Word) -> str:
        return "*".join(self.names[g - 1] + (f"^{e}" if e != 1 else "") for g, e in w)

    def to_text(self) -> str:
        lines = ["gens " + " ".join(self.names) + " ;"]
        lines += [f"rel {self.format_word(r)} ;" for r in self.relators]
        return "\n".join(lines) + "\n"


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"[+-]?\d+")


class _WordParser:
    def __init__(self, text: str, start: int, end: int, names: Sequence[str], full: str):
        self.s = text
        self.pos = start
        self.end = end
        self.index = {nm: k + 1 for k, nm in enumerate(names)}
        # longest match first so that e.g. x10 is not read as x1 followed by 0
        self.names = sorted(names, key=len, reverse=True)
        self.full = full

    def error(self, msg: str, pos: int | None = None):
        return PresentationError(msg, self.pos if pos is None else pos, self.full)

    def peek(self) -> str:
        return self.s[self.pos] if self.pos < self.end else ""

    def word(self, stop: str) -> Word:
        letters: list[tuple[int, int]] = []
        start = self.pos
        while self.pos < self.end and self.peek() not in stop:
            if self.peek() in "*.":
                self.pos += 1
                continue
            letters.extend(self.atom())
        if self.pos == start:
            raise self.error("empty word")
        return reduce_word(letters)

    def exponent(self) -> int:
        if self.peek() != "^":
            return 1
        self.pos += 1
        if self.peek() == "(":
            close = self.s.find(")", self.pos, self.end)
            if close < 0:
                raise self.error("unclosed exponent")
            tok, at = self.s[self.pos + 1 : close], self.pos + 1
            self.pos = close + 1
        else:
            mt = _INT.match(self.s, self.pos, self.end)
            if not mt:
                raise self.error("malformed exponent")
            tok, at = mt.group(), self.pos
            self.pos = mt.end()
        try:
            k = int(tok)
        except ValueError:
            raise self.error(f"malformed exponent {tok!r}", at) from None
        if k == 0:
            raise self.error("exponent must be nonzero", at)
        return k

    def atom(self) -> Word:
        c = self.peek()
        if c == "[":
            self.pos += 1
            a = self.word(",]")
            if self.peek() != ",":
                raise self.error("expected ',' in commutator")
            self.pos += 1
            b = self.word(",]")
            if self.peek() != "]":
                raise self.error("expected ']'")
            self.pos += 1
            return power(commutator(a, b), self.exponent())
        if c == "(":
            self.pos += 1
            w = self.word(")")
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return power(w, self.exponent())
        for nm in self.names:
            if self.s.startswith(nm, self.pos) and self.pos + len(nm) <= self.end:
                self.pos += len(nm)
                return power(((self.index[nm], 1),), self.exponent())
        mt = _NAME.match(self.s, self.pos, self.end)
        if mt:
            raise self.error(f"unknown generator {mt.group()!r}")
        raise self.error(f"unexpected character {c!r}")


def parse_presentation(text: str) -> Presentation:
    """``gens a b ... ;`` followed by zero or more ``rel <word> ;``.

    Words are whitespace-free products of ``g``, ``g^k``, ``[w1,w2]`` and
    ``(w)^k``; ``*`` or ``.`` may separate factors.  ``#`` starts a comment.
    """
    body = re.sub(r"#[^\n]*", lambda mt: " " * len(mt.group()), text)
    stmts = []
    pos = 0
    while True:
        semi = body.find(";", pos)
        if semi < 0:
            if body[pos:].strip():
                raise PresentationError("missing ';'", pos + len(body[pos:]) - len(body[pos:].lstrip()), text)
            break
        stmts.append((pos, semi))
        pos = semi + 1
    if not stmts:
        raise PresentationError("missing 'gens' statement", 0, text)
    names: list[str] = []
    relators: list[Word] = []
    for k, (a, b) in enumerate(stmts):
        chunk = body[a:b]
        lead = len(chunk) - len(chunk.lstrip())
        start = a + lead
        toks = chunk.split()
        if not toks:
            raise PresentationError("empty statement", start, text)
        if k == 0:
            if toks[0] != "gens":
                raise PresentationError("presentation must start with 'gens'", start, text)
            names = toks[1:]
            for nm in names:
                if not _NAME.fullmatch(nm):
                    raise PresentationError(f"invalid generator name {nm!r}", body.find(nm, start), text)
            if len(set(names)) != len(names):
                raise PresentationError("duplicate generator name", start, text)
            continue
        if toks[0] != "rel":
            raise PresentationError(f"expected 'rel', got {toks[0]!r}", start, text)
        if len(toks) == 1:
            raise PresentationError("empty relator", start, text)
        if len(toks) > 2:
            raise PresentationError("relator words may not contain whitespace", start, text)
        wstart = body.index(toks[1], start + 3)
        parser = _WordParser(body, wstart, wstart + len(toks[1]), names, text)
        w = parser.word("")
        if not w:
            raise PresentationError("relator reduces to the empty word", wstart, text)
        relators.append(w)
    return Presentation(tuple(names), tuple(relators))


# -- normal forms mod S^(3) -----------------------------------------------

@dataclass(frozen=True)
class NormalFormS3:
    """``x_1^c_1 ... x_n^c_n * prod_{i<j} [x_i, x_j]^d_ij`` modulo S^(3)."""

    p: int
    c: tuple[int, ...]
    d: tuple[tuple[int, ...], ...]  # full n x n, zero on and below the diagonal

    @property
    def n(self) -> int:
        return len(self.c)

    @classmethod
    def identity(cls, n: int, p: int) -> NormalFormS3:
        return cls(p, (0,) * n, tuple((0,) * n for _ in range(n)))

    def __mul__(self, other: NormalFormS3) -> NormalFormS3:
        p, n = self.p, self.n
        q = p * p
        d = [list(r) for r in self.d]
        for i in range(n):
            for j in range(i + 1, n):
                # moving x_i^{c'_i} left past x_j^{c_j}
                d[i][j] = (d[i][j] + other.d[i][j] - other.c[i] * self.c[j]) % p
        c = tuple((a + b) % q for a, b in zip(self.c, other.c))
        return NormalFormS3(p, c, tuple(tuple(r) for r in d))

    def inverse(self) -> NormalFormS3:
        p, n = self.p, self.n
        d = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                d[i][j] = (-self.d[i][j] - self.c[i] * self.c[j]) % p
        return NormalFormS3(p, tuple((-a) % (p * p) for a in self.c), tuple(tuple(r) for r in d))


def collect_mod_s3(w: Word, n: int, p: int) -> NormalFormS3:
    """Collect ``w`` into normal form by swapping letters into generator order."""
    q = p * p
    c = [0] * n
    d = [[0] * n for _ in range(n)]
    for g, s in w:
        k = g - 1
        # right-multiplying x_1^c_1 ... x_n^c_n by x_k^s: move it left past x_j^c_j, j > k
        for j in range(k + 1, n):
            if c[j]:
                d[k][j] = (d[k][j] - s * c[j]) % p
        c[k] = (c[k] + s) % q
    return NormalFormS3(p, tuple(c), tuple(tuple(r) for r in d))


def collect_by_swaps(w: Word, n: int, p: int) -> NormalFormS3:
    """Collection as literal adjacent transpositions of letters (bubble sort).

    Slower twin of :func:`collect_mod_s3` that performs every swap on the
    letter sequence itself.
    """
    letters = [list(x) for x in w]
    d = [[0] * n for _ in range(n)]
    changed = True
    while changed:
        changed = False
        out: list[list[int]] = []
        for g, e in letters:
            if out and out[-1][0] == g:
                out[-1][1] += e
                continue
            out.append([g, e])
        letters = [x for x in out if x[1]]
        for i in range(len(letters) - 1):
            (k, s), (j, t) = letters[i], letters[i + 1]
            if k > j:
                d[j - 1][k - 1] = (d[j - 1][k - 1] - s * t) % p
                letters[i], letters[i + 1] = letters[i + 1], letters[i]
                changed = True
                break
    c = [0] * n
    for g, e in letters:
        c[g - 1] = (c[g - 1] + e) % (p * p)
    return NormalFormS3(p, tuple(c), tuple(tuple(r) for r in d))


def magnus_degree2(w: Word, n: int, p: int) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Linear (mod p^2) and quadratic (mod p) coefficients of the Magnus expansion."""
    q = p * p
    e = [0] * n
    quad = [[0] * n for _ in range(n)]
    for g, k in w:
        i = g - 1
        # (1 + X)^k = 1 + kX + C(k,2)X^2, valid for negative k as well
        # multiply (1 + lin + quad) by (1 + k X_i + C(k,2) X_i^2), dropping degree > 2
        for a in range(n):
            quad[a][i] += e[a] * k
        quad[i][i] += k * (k - 1) // 2
        e[i] += k
    return tuple(x % q for x in e), tuple(tuple(x % p for x in r) for r in quad)


def relator_coordinates(w: Word, n: int, p: int) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """``(a_i, a_ij)`` with r = prod x_i^(p a_i) prod [x_i, x_j]^(a_ij) mod S^(3)."""
    nf = collect_mod_s3(w, n, p)
    for i, c in enumerate(nf.c):
        if c % p:
            raise FrattiniError(i + 1, c, p)
    return tuple(c // p for c in nf.c), nf.d


def presentation_cup_product(P: Presentation, p: int) -> AugBilinearMap:
    """Cup products on the dual basis chi_i, one W-coordinate per relator.

    Off the diagonal (chi_i ∪ chi_j)_r = a_rij for i < j.  Diagonal entries
    are 0 for odd p; for p = 2 they are a_ri.  eps solves b(v_i, eps) = b(v_i, v_i).
    """
    fpla.check_prime(p)
    n, m = P.n, len(P.relators)
    coords = [relator_coordinates(r, n, p) for r in P.relators]
    flat = [list(a) + [d[i][j] for i in range(n) for j in range(i + 1, n)] for a, d in coords]
    if m and fpla.rank_rows(p, flat, len(flat[0])) < m:
        raise CupProductError("cannot certify minimal presentation: relator coordinates mod S^(3) are dependent")
    gram = [[[0] * m for _ in range(n)] for _ in range(n)]
    for r, (a, d) in enumerate(coords):
        for i in range(n):
            for j in range(i + 1, n):
                gram[i][j][r] = d[i][j]
                gram[j][i][r] = (-d[i][j]) % p
            if p == 2:
                gram[i][i][r] = a[i]
    if p == 2 and m:
        # rows of the system: for each i and each W-coordinate r, sum_j eps_j b(v_i, v_j)_r = b(v_i, v_i)_r
        rows = [[gram[i][j][r] for j in range(n)] for i in range(n) for r in range(m)]
        rhs = [gram[i][i][r] for i in range(n) for r in range(m)]
        eps = fpla.solve_rows(p, rows, n, rhs)
        if eps is None:
            raise CupProductError("no augmentation exists for this map")
    else:
        eps = (0,) * n
    return AugBilinearMap.build(
        p, n, m, gram, eps, vlabels=P.names, wlabels=[f"r{k + 1}" for k in range(m)]
    )


def raag_presentation(g) -> Presentation:
    """Generators x1..xn, one commutator relator per edge in lexicographic order."""
    names = tuple(f"x{i}" for i in g.vertices)
    rels = tuple(commutator(((k, 1),), ((l, 1),)) for k, l in g.sorted_edges())
    return Presentation(names, rels)


def raag_text(g) -> str:
    names = [f"x{i}" for i in g.vertices]
    lines = ["gens " + " ".join(names) + " ;"]
    lines += [f"rel [x{k},x{l}] ;" for k, l in g.sorted_edges()]
    return "\n".join(lines) + "\n"
