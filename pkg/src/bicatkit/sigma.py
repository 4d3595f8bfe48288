"""Property checkers for a marked arrow class: 3-for-2, w-splitness and its
decompositions, quasiequivalences and equivalences.

All searches are exhaustive over the tables and deterministic (sorted id
order), so witnesses are reproducible.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .core import Bicategory, StructureError


@dataclass(frozen=True)
class SigmaClass:
    """A class of marked arrows; always contains every identity arrow."""

    bic: Bicategory
    members: frozenset[str]

    def __contains__(self, arrow: str) -> bool:
        return arrow in self.members

    def sorted_members(self) -> tuple[str, ...]:
        return tuple(sorted(self.members))


def make_sigma(bic: Bicategory, arrows: tuple[str, ...] | list[str]) -> SigmaClass:
    for f in arrows:
        if f not in bic.arrows:
            raise StructureError(f"sigma lists unknown arrow {f!r}")
    members = set(arrows) | set(bic.id1.values())
    return SigmaClass(bic, frozenset(members))


@dataclass(frozen=True)
class ThreeForTwoViolation:
    f: str  # inner arrow (applied first)
    g: str  # outer arrow
    h: str  # arrow isomorphic to g * f
    cell: str  # invertible cell g * f => h
    missing: str  # the one of f, g, h outside the class

    def to_json(self) -> dict:
        return {
            "f": self.f,
            "g": self.g,
            "h": self.h,
            "cell": self.cell,
            "missing": self.missing,
        }


def check_three_for_two(sigma: SigmaClass) -> ThreeForTwoViolation | None:
    """None when the class is 3-for-2 closed, else the first violating triple.

    A triple counts when some invertible 2-cell g*f => h exists and exactly two
    of f, g, h are members.  Membership is literal by arrow id.
    """
    bic = sigma.bic
    fallback: ThreeForTwoViolation | None = None
    for g, f in bic.composable_arrow_pairs():
        gf = bic.hcomp1[(g, f)]
        for h in bic.arrows_between(bic.arrow_src(f), bic.arrow_dst(g)):
            cell = next(
                (c for c in bic.cells_between(gf, h) if bic.is_invertible(c)), None
            )
            if cell is None:
                continue
            flags = {"f": f in sigma, "g": g in sigma, "h": h in sigma}
            if sum(flags.values()) == 2:
                missing = next(k for k, v in flags.items() if not v)
                hit = ThreeForTwoViolation(f, g, h, cell, {"f": f, "g": g, "h": h}[missing])
                # a missing composite is the sharpest witness; report it first
                if missing == "h":
                    return hit
                if fallback is None:
                    fallback = hit
    return fallback


@dataclass(frozen=True)
class WSplitWitness:
    section: str  # s : X -> Y
    retraction: str  # r : Y -> X
    cell: str  # invertible r * s => id_X

    def to_json(self) -> dict:
        return {"section": self.section, "retraction": self.retraction, "cell": self.cell}


@dataclass(frozen=True)
class WSplitResult:
    arrow: str
    as_section: WSplitWitness | None
    as_retraction: WSplitWitness | None

    @property
    def role(self) -> str:
        if self.as_section and self.as_retraction:
            return "both"
        if self.as_section:
            return "section"
        if self.as_retraction:
            return "retraction"
        return "none"

    @property
    def is_w_split(self) -> bool:
        return self.role != "none"

    def to_json(self) -> dict:
        return {
            "arrow": self.arrow,
            "role": self.role,
            "as_section": self.as_section.to_json() if self.as_section else None,
            "as_retraction": self.as_retraction.to_json() if self.as_retraction else None,
        }


def _splitting_cell(bic: Bicategory, r: str, s: str) -> str | None:
    """First invertible cell r*s => id, if r*s lands on the right object."""
    if not bic.composable1(r, s):
        return None
    x = bic.arrow_src(s)
    if bic.arrow_dst(r) != x:
        return None
    rs = bic.hcomp1[(r, s)]
    for c in bic.cells_between(rs, bic.id1[x]):
        if bic.is_invertible(c):
            return c
    return None


def find_w_split(bic: Bicategory, f: str) -> WSplitResult:
    """Search every candidate partner for f in both roles."""
    x, y = bic.arrows[f]
    as_section = None
    for r in bic.arrows_between(y, x):
        cell = _splitting_cell(bic, r, f)
        if cell is not None:
            as_section = WSplitWitness(section=f, retraction=r, cell=cell)
            break
    as_retraction = None
    for s in bic.arrows_between(y, x):
        cell = _splitting_cell(bic, f, s)
        if cell is not None:
            as_retraction = WSplitWitness(section=s, retraction=f, cell=cell)
            break
    return WSplitResult(f, as_section, as_retraction)


@dataclass(frozen=True)
class Decomposition:
    arrow: str
    chain: tuple[str, ...]  # outermost-first; chain[-1] is applied first
    cell: str  # invertible (chain composite) => arrow

    def to_json(self) -> dict:
        return {"arrow": self.arrow, "chain": list(self.chain), "cell": self.cell}


def w_split_decompose(sigma: SigmaClass, f: str, max_len: int) -> Decomposition | None:
    """Breadth-first search for a chain of w-split class members whose
    composite is isomorphic to f; None when no chain of length <= max_len works."""
    if max_len < 1:
        raise StructureError("max_len must be >= 1")
    bic = sigma.bic
    x, y = bic.arrows[f]
    pieces = [
        g
        for g in sigma.sorted_members()
        if find_w_split(bic, g).is_w_split
    ]
    # frontier entries: (composite arrow, chain outermost-first)
    queue: deque[tuple[str, tuple[str, ...]]] = deque()
    seen: set[tuple[str, int]] = set()
    for g in pieces:
        if bic.arrow_src(g) == x:
            queue.append((g, (g,)))
    while queue:
        composite, chain = queue.popleft()
        if bic.arrow_dst(composite) == y:
            for c in bic.cells_between(composite, f):
                if bic.is_invertible(c):
                    return Decomposition(f, chain, c)
        if len(chain) >= max_len:
            continue
        for g in pieces:
            if bic.arrow_src(g) != bic.arrow_dst(composite):
                continue
            nxt = bic.hcomp1[(g, composite)]
            key = (nxt, len(chain) + 1)
            new_chain = (g,) + chain
            if (nxt, len(chain) + 1) in seen:
                continue
            seen.add(key)
            queue.append((nxt, new_chain))
    return None


def is_quasiequivalence(bic: Bicategory, f: str) -> bool:
    """Both composition functors with f are full and faithful on every hom.

    Checked as a bijection between cell sets for every arrow pair, with the
    result memoized on the bicategory.
    """
    cached = bic._qe_cache.get(f)
    if cached is not None:
        return cached
    x, y = bic.arrows[f]

    def bijective(pairs: list[tuple[str, str]], image: dict[str, str]) -> bool:
        seen: dict[str, str] = {}
        for a, fa in pairs:
            if fa in seen:
                return False
            seen[fa] = a
        # fullness: every cell between the two image arrows is hit
        return set(seen) == set(image)

    ok = True
    for z in bic.objects:
        # post-composition f * (-): hom(z, x) -> hom(z, y)
        for a in bic.arrows_between(z, x):
            for b in bic.arrows_between(z, x):
                fa, fb = bic.hcomp1[(f, a)], bic.hcomp1[(f, b)]
                pairs = [(c, bic.whisker_l(f, c)) for c in bic.cells_between(a, b)]
                targets = {c: c for c in bic.cells_between(fa, fb)}
                if not bijective(pairs, targets):
                    ok = False
        # pre-composition (-) * f: hom(y, z) -> hom(x, z)
        for u in bic.arrows_between(y, z):
            for v in bic.arrows_between(y, z):
                uf, vf = bic.hcomp1[(u, f)], bic.hcomp1[(v, f)]
                pairs = [(c, bic.whisker_r(c, f)) for c in bic.cells_between(u, v)]
                targets = {c: c for c in bic.cells_between(uf, vf)}
                if not bijective(pairs, targets):
                    ok = False
        if not ok:
            break
    bic._qe_cache[f] = ok
    return ok


@dataclass(frozen=True)
class EquivalenceWitness:
    arrow: str
    quasiinverse: str
    cell_to_id_src: str  # invertible quasiinverse * arrow => id_src
    cell_to_id_dst: str  # invertible arrow * quasiinverse => id_dst

    def to_json(self) -> dict:
        return {
            "arrow": self.arrow,
            "quasiinverse": self.quasiinverse,
            "cell_to_id_src": self.cell_to_id_src,
            "cell_to_id_dst": self.cell_to_id_dst,
        }


def find_equivalence(bic: Bicategory, f: str) -> EquivalenceWitness | None:
    """Exhaustive search over partner arrows and invertible cell pairs."""
    x, y = bic.arrows[f]
    for g in bic.arrows_between(y, x):
        c1 = _splitting_cell(bic, g, f)
        if c1 is None:
            continue
        c2 = _splitting_cell(bic, f, g)
        if c2 is None:
            continue
        return EquivalenceWitness(f, g, c1, c2)
    return None


def sigma_report(sigma: SigmaClass, max_len: int = 4) -> dict:
    """JSON-shaped summary used by the CLI sigma-check command."""
    bic = sigma.bic
    v = check_three_for_two(sigma)
    rows = []
    for f in sigma.sorted_members():
        ws = find_w_split(bic, f)
        dec = w_split_decompose(sigma, f, max_len)
        eq = find_equivalence(bic, f)
        rows.append(
            {
                "arrow": f,
                "w_split": ws.to_json(),
                "decomposition": dec.to_json() if dec else None,
                "quasiequivalence": is_quasiequivalence(bic, f),
                "equivalence": eq.to_json() if eq else None,
            }
        )
    return {
        "three_for_two": {"ok": v is None, "witness": v.to_json() if v else None},
        "arrows": rows,
    }
