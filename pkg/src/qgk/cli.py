"""Command-line front end: ``qgk <command> ...``.

Exit status is 0 when the report has no failed item, 1 when a check failed
and 2 for unreadable input or an exceeded size guard.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import bilform, fpla
from .graphs import (
    ForbiddenWitness,
    GraphParseError,
    TreeParseError,
    decompose,
    format_tree,
    graph_bilinear,
    parse_graph,
    parse_tree,
)
from .hull import HullGuardError, functor_F_of_G, hull_dims
from .presentations import CupProductError, FrattiniError, PresentationError, parse_presentation, presentation_cup_product
from .slot import SizeGuardError, has_common_slot, is_quaternionic, verify_witness
from .tower import canonical_tree_map
from .verify import run_suite

PASS, FAIL, SKIP, INFO = "PASS", "FAIL", "SKIP", "INFO"


@dataclass
class ReportItem:
    status: str
    text: str
    key: str = ""


@dataclass
class Report:
    command: str
    items: list[ReportItem] = field(default_factory=list)

    def add(self, status: str, text: str, key: str = "") -> None:
        self.items.append(ReportItem(status, text, key))

    def count(self, status: str) -> int:
        return sum(it.status == status for it in self.items)

    @property
    def exit_code(self) -> int:
        return 1 if self.count(FAIL) else 0

    def summary(self) -> str:
        return f"{self.count(PASS)} passed, {self.count(FAIL)} failed, {self.count(SKIP)} skipped"

    def render(self, fmt: str = "human") -> str:
        if fmt == "tsv":
            lines = ["status\tkey\ttext", f"CMD\t-\t{self.command}"]
            lines += [f"{it.status}\t{it.key or '-'}\t{it.text}" for it in self.items]
            lines.append(f"SUMMARY\t-\t{self.summary()}")
        else:
            lines = [f"$ {self.command}"]
            lines += [f"{it.status} {it.key} {it.text}" if it.key else it.text for it in self.items]
            lines.append(f"summary: {self.summary()}")
        return "\n".join(lines) + "\n"


class InputError(Exception):
    """Unreadable or malformed input; reported with exit status 2."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _load_map(path: str) -> bilform.AugBilinearMap:
    try:
        M = bilform.loads(_read(path))
    except bilform.BilinearFormatError as exc:
        raise InputError(f"{path}: {exc}") from None
    viol = bilform.validate(M)
    if viol:
        raise InputError(f"{path}: invalid map: " + "; ".join(f"{v.kind.value} {v.message}".strip() for v in viol))
    return M


def _fmt(v) -> str:
    return "(" + " ".join(map(str, v)) + ")"


# -- commands -------------------------------------------------------------

def cmd_graph_check(path: str, p: int = 2) -> Report:
    fpla.check_prime(p)
    rep = Report(f"qgk graph-check {path} --p {p}")
    try:
        g = parse_graph(_read(path))
    except GraphParseError as exc:
        raise InputError(f"{path}: {exc}") from None
    dec = decompose(g)
    realizable = not isinstance(dec, ForbiddenWitness)
    verdict = f"tree: {format_tree(dec)}" if realizable else str(dec)
    slot = has_common_slot(graph_bilinear(g, p)) is True
    line = f"{verdict}; common-slot: {'true' if slot else 'false'}"
    if p == 2:
        rep.add(PASS if slot == realizable else FAIL, line)
    else:
        # no equivalence is claimed for odd p; both sides are only reported
        rep.add(INFO, line)
    return rep


_KIND_BY_SUFFIX = {
    ".graph": "graph", ".gr": "graph",
    ".pres": "presentation", ".presentation": "presentation",
    ".tree": "tree",
    ".bil": "map", ".map": "map",
}


def detect_kind(path: str, text: str) -> str:
    kind = _KIND_BY_SUFFIX.get(Path(path).suffix.lower())
    if kind:
        return kind
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if head == "gens":
            return "presentation"
        if line.startswith("("):
            return "tree"
        if head == "p":
            return "map"
        return "graph"
    raise InputError(f"{path}: cannot detect input kind of an empty file")


def build_map(path: str, p: int, kind: str | None = None) -> bilform.AugBilinearMap:
    text = _read(path)
    kind = kind or detect_kind(path, text)
    try:
        if kind == "graph":
            return graph_bilinear(parse_graph(text), p)
        if kind == "presentation":
            return presentation_cup_product(parse_presentation(text), p)
        if kind == "tree":
            return canonical_tree_map(parse_tree(text), p)
        if kind == "map":
            M = bilform.loads(text)
            if M.p != p:
                raise InputError(f"{path}: map is over F_{M.p}, not F_{p}")
            return M
    except (GraphParseError, TreeParseError, PresentationError, FrattiniError,
            CupProductError, bilform.BilinearFormatError) as exc:
        raise InputError(f"{path}: {exc}") from None
    raise InputError(f"unknown input kind {kind!r}")


def cmd_emit_bilinear(path: str, p: int = 2, out: str | None = None, kind: str | None = None) -> tuple[Report, str]:
    fpla.check_prime(p)
    M = build_map(path, p, kind)
    text = bilform.dumps(M)
    rep = Report(f"qgk emit {path} --p {p}" + (f" --out {out}" if out else ""))
    viol = bilform.validate(M)
    rep.add(FAIL if viol else PASS, f"map p={M.p} dimV={M.n} dimW={M.m}" + (f" invalid: {viol}" if viol else ""))
    if out:
        Path(out).write_text(text)
        rep.add(INFO, f"wrote {out}")
    return rep, text


def cmd_slot(path: str) -> Report:
    M = _load_map(path)
    rep = Report(f"qgk slot {path}")
    res = has_common_slot(M)
    if res is True:
        rep.add(INFO, "common-slot: true")
    else:
        rep.add(INFO, f"common-slot: false; witness {res}; value {_fmt(M.value(res.v, res.u))}")
        rep.add(PASS if verify_witness(M, res) else FAIL, "re-verified by exhaustive search", "witness")
    if M.p == 2:
        q = is_quaternionic(M)
        for k, ax in sorted(q.axioms.items()):
            extra = f" witness {' '.join(map(_fmt, ax.witness)) if isinstance(ax.witness[0], tuple) else ax.witness}" if ax.witness else ""
            rep.add(INFO, f"quaternionic axiom {k}: {'holds' if ax.passed else 'fails'} ({ax.method}){extra}")
    return rep


def cmd_verify(nmax: int = 6, p: int = 2, seed: int = 42) -> Report:
    rep = Report(f"qgk verify --nmax {nmax} --p {p} --seed {seed}")
    if p != 2:
        rep.add(INFO, f"odd p: slot-oracle agreement only, no equivalence claim at p={p}")
    for r in run_suite(nmax, p, seed):
        rep.add(PASS if r.passed else FAIL, f"{r.name}: {r.detail}", r.key)
    return rep


def cmd_hull(path: str, dmax: int = 3) -> Report:
    M = _load_map(path)
    rep = Report(f"qgk hull {path} --dmax {dmax}")
    try:
        H = hull_dims(M, dmax)
        FG = functor_F_of_G(M)
    except HullGuardError as exc:
        raise InputError(f"size guard: {exc}") from None
    rep.add(INFO, H.report_line())
    if FG.iso is not None:
        rep.add(INFO, "F(G(b)) ~ b: yes")
    else:
        rep.add(INFO, f"F(G(b)) ~ b: no (dim W of F(G(b)) = {FG.map.m}, dim W = {M.m}, pure-tensor gap {FG.gap})")
    return rep


# -- argument parsing -----------------------------------------------------

def _prime(s: str) -> int:
    p = int(s)
    try:
        fpla.check_prime(p)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return p


def _seed(s: str) -> int:
    k = int(s)
    if not 0 <= k < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return k


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "tsv"), default="human")
    common.add_argument("--out", help="write the output here instead of stdout")

    ap = argparse.ArgumentParser(prog="qgk", description="Augmented bilinear maps, graphs and their checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("graph-check", parents=[common], help="decompose a graph and decide the slot property")
    s.add_argument("path")
    s.add_argument("--p", type=_prime, default=2)

    s = sub.add_parser("emit", aliases=["emit-bilinear"], parents=[common], help="write the bilinear map of an input")
    s.add_argument("path")
    s.add_argument("--p", type=_prime, default=2)
    s.add_argument("--kind", choices=("graph", "presentation", "tree", "map"))

    s = sub.add_parser("slot", parents=[common], help="common slot property of a map file")
    s.add_argument("path")

    s = sub.add_parser("verify", parents=[common], help="run the verification suites")
    s.add_argument("--nmax", type=int, default=6)
    s.add_argument("--p", type=_prime, default=2)
    s.add_argument("--seed", type=_seed, default=42)

    s = sub.add_parser("hull", parents=[common], help="truncated purely quadratic hull of a map file")
    s.add_argument("path")
    s.add_argument("--dmax", type=int, default=3)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("emit", "emit-bilinear"):
            rep, text = cmd_emit_bilinear(args.path, args.p, args.out, args.kind)
            sys.stdout.write(rep.render(args.format) if args.out else text)
            return rep.exit_code
        if args.command == "graph-check":
            rep = cmd_graph_check(args.path, args.p)
        elif args.command == "slot":
            rep = cmd_slot(args.path)
        elif args.command == "verify":
            if not 1 <= args.nmax <= 6:
                raise InputError("--nmax must lie in 1..6")
            rep = cmd_verify(args.nmax, args.p, args.seed)
        else:
            rep = cmd_hull(args.path, args.dmax)
    except (InputError, SizeGuardError) as exc:
        print(f"qgk: error: {exc}", file=sys.stderr)
        return 2
    text = rep.render(args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
