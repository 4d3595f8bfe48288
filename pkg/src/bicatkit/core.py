"""Finite tabulated bicategories and pseudofunctors.

Everything is a lookup table over string ids: objects, arrows (with a source
and a target object), 2-cells (between parallel arrows), vertical composition,
whiskering by arrows, unitors and associators.  All axiom checks are exhaustive
loops over table entries, so validity is decidable at desk scale.

Conventions.  Composition is written right-to-left: ``hcomp1[(g, f)]`` is the
composite "g after f" and needs dst(f) == src(g); ``vcomp[(b, a)]`` is "b after
a" and needs dst(a) == src(b).  The left unitor lam_f goes f*id_X => f, the
right unitor rho_f goes id_Y*f => f, and the associator theta_{h,g,f} goes
h*(g*f) => (h*g)*f.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class StructureError(Exception):
    """Raised for malformed references or ill-typed constructions."""


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[str, ...]
    left: str = ""
    right: str = ""

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "witness": list(self.witness),
            "left": self.left,
            "right": self.right,
        }


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [v.to_json() for v in self.violations],
        }

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}


class Bicategory:
    """A finite bicategory given by tables.  Immutable after construction.

    Instances compare by identity; cell/arrow equality inside one instance is
    plain id equality after table lookup.
    """

    def __init__(
        self,
        name: str,
        objects: Iterable[str],
        arrows: dict[str, tuple[str, str]],
        id1: dict[str, str],
        hcomp1: dict[tuple[str, str], str],
        cells: dict[str, tuple[str, str]],
        idc: dict[str, str],
        vcomp: dict[tuple[str, str], str],
        lwhisk: dict[tuple[str, str], str],
        rwhisk: dict[tuple[str, str], str],
        lunitor: dict[str, str],
        runitor: dict[str, str],
        assoc: dict[tuple[str, str, str], str],
        strict: bool,
    ) -> None:
        self.name = name
        self.objects = tuple(objects)
        self.arrows = dict(arrows)
        self.id1 = dict(id1)
        self.hcomp1 = dict(hcomp1)
        self.cells = dict(cells)
        self.idc = dict(idc)
        self.vcomp = dict(vcomp)
        self.lwhisk = dict(lwhisk)
        self.rwhisk = dict(rwhisk)
        self.lunitor = dict(lunitor)
        self.runitor = dict(runitor)
        self.assoc = dict(assoc)
        self.strict = bool(strict)
        self._identity_cells = frozenset(self.idc.values())
        self._cells_between: dict[tuple[str, str], tuple[str, ...]] = {}
        for c in sorted(self.cells):
            key = self.cells[c]
            self._cells_between.setdefault(key, ())
            self._cells_between[key] += (c,)
        self._arrows_between: dict[tuple[str, str], tuple[str, ...]] = {}
        for a in sorted(self.arrows):
            key = self.arrows[a]
            self._arrows_between.setdefault(key, ())
            self._arrows_between[key] += (a,)
        self._inv_cache: dict[str, str | None] = {}
        self._qe_cache: dict[str, bool] = {}

    def __repr__(self) -> str:
        return (
            f"Bicategory({self.name!r}, {len(self.objects)} objects, "
            f"{len(self.arrows)} arrows, {len(self.cells)} cells)"
        )

    # -- arrows ----------------------------------------------------------

    def arrow_src(self, f: str) -> str:
        return self.arrows[f][0]

    def arrow_dst(self, f: str) -> str:
        return self.arrows[f][1]

    def arrows_between(self, x: str, y: str) -> tuple[str, ...]:
        return self._arrows_between.get((x, y), ())

    def composable1(self, g: str, f: str) -> bool:
        return self.arrow_dst(f) == self.arrow_src(g)

    def compose1(self, g: str, f: str) -> str:
        try:
            return self.hcomp1[(g, f)]
        except KeyError:
            raise StructureError(
                f"{self.name}: composite {g} * {f} not in hcomp1 table"
            ) from None

    def compose_path(self, path: Iterable[str]) -> str:
        """Composite of arrows listed outermost-first (path[-1] applied first)."""
        names = list(path)
        if not names:
            raise StructureError("empty arrow path has no composite without an object")
        acc = names[-1]
        for g in reversed(names[:-1]):
            acc = self.compose1(g, acc)
        return acc

    # -- cells -----------------------------------------------------------

    def cell_src(self, a: str) -> str:
        return self.cells[a][0]

    def cell_dst(self, a: str) -> str:
        return self.cells[a][1]

    def cells_between(self, f: str, g: str) -> tuple[str, ...]:
        return self._cells_between.get((f, g), ())

    def is_identity_cell(self, a: str) -> bool:
        return a in self._identity_cells

    def vertical(self, b: str, a: str) -> str:
        try:
            return self.vcomp[(b, a)]
        except KeyError:
            raise StructureError(
                f"{self.name}: vertical composite {b} . {a} not in vcomp table"
            ) from None

    def vertical_chain(self, cells: Iterable[str], on_arrow: str | None = None) -> str:
        """Fold vcomp over cells listed first-applied-first; empty chain is idc."""
        acc: str | None = None
        for c in cells:
            acc = c if acc is None else self.vertical(c, acc)
        if acc is None:
            if on_arrow is None:
                raise StructureError("empty cell chain needs an arrow for its identity")
            return self.idc[on_arrow]
        return acc

    def whisker_l(self, g: str, a: str) -> str:
        try:
            return self.lwhisk[(g, a)]
        except KeyError:
            raise StructureError(
                f"{self.name}: whisker {g} * {a} not in lwhisk table"
            ) from None

    def whisker_r(self, a: str, f: str) -> str:
        try:
            return self.rwhisk[(a, f)]
        except KeyError:
            raise StructureError(
                f"{self.name}: whisker {a} * {f} not in rwhisk table"
            ) from None

    def hcomp2(self, beta: str, alpha: str) -> str:
        """Horizontal composite beta * alpha, derived from whiskers (axiom W1)."""
        f2 = self.cell_dst(alpha)
        g1 = self.cell_src(beta)
        return self.vertical(self.whisker_r(beta, f2), self.whisker_l(g1, alpha))

    def inverse(self, a: str) -> str | None:
        """The vcomp inverse of cell a, or None; memoized exhaustive search."""
        if a in self._inv_cache:
            return self._inv_cache[a]
        f, g = self.cells[a]
        found: str | None = None
        for b in self.cells_between(g, f):
            if (
                self.vcomp.get((b, a)) == self.idc[f]
                and self.vcomp.get((a, b)) == self.idc[g]
            ):
                found = b
                break
        self._inv_cache[a] = found
        return found

    def is_invertible(self, a: str) -> bool:
        return self.inverse(a) is not None

    def require_strict(self, context: str) -> None:
        if not self.strict:
            raise StructureError(f"{context} requires a strict bicategory ({self.name})")

    # -- enumeration helpers ----------------------------------------------

    def composable_arrow_pairs(self) -> Iterator[tuple[str, str]]:
        for g in sorted(self.arrows):
            for f in sorted(self.arrows):
                if self.composable1(g, f):
                    yield g, f

    def composable_arrow_triples(self) -> Iterator[tuple[str, str, str]]:
        for h in sorted(self.arrows):
            for g in sorted(self.arrows):
                if not self.composable1(h, g):
                    continue
                for f in sorted(self.arrows):
                    if self.composable1(g, f):
                        yield h, g, f


def validate_bicategory(bic: Bicategory) -> ValidationReport:
    """Exhaustively check every structural axiom of the tables."""
    out: list[Violation] = []
    add = out.append
    arrows = bic.arrows
    cells = bic.cells

    # reference integrity and identity pointers
    for f, (x, y) in sorted(arrows.items()):
        if x not in bic.objects or y not in bic.objects:
            add(Violation("arrow-typing", (f, x, y)))
    for x in bic.objects:
        i = bic.id1.get(x)
        if i is None or i not in arrows:
            add(Violation("id1-missing", (x,)))
        elif arrows[i] != (x, x):
            add(Violation("id1-typing", (x, i)))
    for a, (f, g) in sorted(cells.items()):
        if f not in arrows or g not in arrows:
            add(Violation("cell-typing", (a, f, g)))
        elif arrows[f] != arrows[g]:
            add(Violation("cell-parallel", (a, f, g)))
    for f in sorted(arrows):
        i = bic.idc.get(f)
        if i is None or i not in cells:
            add(Violation("idc-missing", (f,)))
        elif cells[i] != (f, f):
            add(Violation("idc-typing", (f, i)))
    if out:
        # tables below would only cascade noise on broken references
        return ValidationReport(tuple(out))

    # hcomp1: defined iff composable, total, boundary-correct
    for (g, f), h in sorted(bic.hcomp1.items()):
        if g not in arrows or f not in arrows or h not in arrows:
            add(Violation("hcomp1-ref", (g, f, str(h))))
            continue
        if not bic.composable1(g, f):
            add(Violation("hcomp1-typing", (g, f), left="not composable"))
        elif arrows[h] != (bic.arrow_src(f), bic.arrow_dst(g)):
            add(Violation("hcomp1-typing", (g, f), left=h))
    for g, f in bic.composable_arrow_pairs():
        if (g, f) not in bic.hcomp1:
            add(Violation("hcomp1-totality", (g, f)))
    if any(v.axiom.startswith("hcomp1") for v in out):
        return ValidationReport(tuple(out))

    # vcomp: category structure on every hom
    for (b, a), c in sorted(bic.vcomp.items()):
        if b not in cells or a not in cells or c not in cells:
            add(Violation("vcomp-ref", (b, a, str(c))))
            continue
        if bic.cell_dst(a) != bic.cell_src(b):
            add(Violation("vcomp-typing", (b, a), left="not composable"))
        elif cells[c] != (bic.cell_src(a), bic.cell_dst(b)):
            add(Violation("vcomp-typing", (b, a), left=c))
    for b in sorted(cells):
        for a in sorted(cells):
            if bic.cell_dst(a) == bic.cell_src(b) and (b, a) not in bic.vcomp:
                add(Violation("vcomp-totality", (b, a)))
    if any(v.axiom.startswith("vcomp-") for v in out):
        return ValidationReport(tuple(out))
    for a in sorted(cells):
        f, g = cells[a]
        if bic.vcomp[(a, bic.idc[f])] != a:
            add(Violation("vcomp-unit", (a,), left=bic.vcomp[(a, bic.idc[f])], right=a))
        if bic.vcomp[(bic.idc[g], a)] != a:
            add(Violation("vcomp-unit", (a,), left=bic.vcomp[(bic.idc[g], a)], right=a))
    for a in sorted(cells):
        for b in sorted(cells):
            if bic.cell_dst(a) != bic.cell_src(b):
                continue
            for c in sorted(cells):
                if bic.cell_dst(b) != bic.cell_src(c):
                    continue
                lhs = bic.vcomp[(c, bic.vcomp[(b, a)])]
                rhs = bic.vcomp[(bic.vcomp[(c, b)], a)]
                if lhs != rhs:
                    add(Violation("vcomp-assoc", (c, b, a), left=lhs, right=rhs))

    # whisker tables: typing and totality
    for (g, a), c in sorted(bic.lwhisk.items()):
        if g not in arrows or a not in cells or c not in cells:
            add(Violation("lwhisk-ref", (g, a, str(c))))
            continue
        f1, f2 = cells[a]
        if bic.arrow_dst(f1) != bic.arrow_src(g):
            add(Violation("lwhisk-typing", (g, a), left="not composable"))
            continue
        want = (bic.hcomp1.get((g, f1)), bic.hcomp1.get((g, f2)))
        if None in want or cells[c] != want:
            add(Violation("lwhisk-typing", (g, a), left=c))
    for g in sorted(arrows):
        for a in sorted(cells):
            f1, _ = cells[a]
            if bic.arrow_dst(f1) == bic.arrow_src(g) and (g, a) not in bic.lwhisk:
                add(Violation("lwhisk-totality", (g, a)))
    for (a, f), c in sorted(bic.rwhisk.items()):
        if f not in arrows or a not in cells or c not in cells:
            add(Violation("rwhisk-ref", (a, f, str(c))))
            continue
        g1, g2 = cells[a]
        if bic.arrow_dst(f) != bic.arrow_src(g1):
            add(Violation("rwhisk-typing", (a, f), left="not composable"))
            continue
        want = (bic.hcomp1.get((g1, f)), bic.hcomp1.get((g2, f)))
        if None in want or cells[c] != want:
            add(Violation("rwhisk-typing", (a, f), left=c))
    for a in sorted(cells):
        g1, _ = cells[a]
        for f in sorted(arrows):
            if bic.arrow_dst(f) == bic.arrow_src(g1) and (a, f) not in bic.rwhisk:
                add(Violation("rwhisk-totality", (a, f)))
    if any("whisk" in v.axiom for v in out):
        return ValidationReport(tuple(out))

    # W1: both whisker orders of a horizontal composite agree
    for a in sorted(cells):
        f1, f2 = cells[a]
        x, y = arrows[f1]
        for b in sorted(cells):
            g1, g2 = cells[b]
            if bic.arrow_src(g1) != y:
                continue
            lhs = bic.vcomp[(bic.lwhisk[(g2, a)], bic.rwhisk[(b, f1)])]
            rhs = bic.vcomp[(bic.rwhisk[(b, f2)], bic.lwhisk[(g1, a)])]
            if lhs != rhs:
                add(Violation("W1", (b, a), left=lhs, right=rhs))

    # W2 / H1: whiskered identities are identities
    for g, f in bic.composable_arrow_pairs():
        gf = bic.hcomp1[(g, f)]
        if bic.lwhisk[(g, bic.idc[f])] != bic.idc[gf]:
            add(Violation("W2", (g, f), left=bic.lwhisk[(g, bic.idc[f])], right=bic.idc[gf]))
        if bic.rwhisk[(bic.idc[g], f)] != bic.idc[gf]:
            add(Violation("W2", (g, f), left=bic.rwhisk[(bic.idc[g], f)], right=bic.idc[gf]))

    # W3: whiskering is functorial in the cell
    for a in sorted(cells):
        for b in sorted(cells):
            if bic.cell_dst(a) != bic.cell_src(b):
                continue
            ba = bic.vcomp[(b, a)]
            x = bic.arrow_src(bic.cell_src(a))
            y = bic.arrow_dst(bic.cell_src(a))
            for g in sorted(arrows):
                if bic.arrow_src(g) != y:
                    continue
                lhs = bic.vcomp[(bic.lwhisk[(g, b)], bic.lwhisk[(g, a)])]
                if lhs != bic.lwhisk[(g, ba)]:
                    add(Violation("W3", (g, b, a), left=lhs, right=bic.lwhisk[(g, ba)]))
            for f in sorted(arrows):
                if bic.arrow_dst(f) != x:
                    continue
                lhs = bic.vcomp[(bic.rwhisk[(b, f)], bic.rwhisk[(a, f)])]
                if lhs != bic.rwhisk[(ba, f)]:
                    add(Violation("W3", (b, a, f), left=lhs, right=bic.rwhisk[(ba, f)]))

    if any(v.axiom in ("W1", "W2", "W3") for v in out):
        return ValidationReport(tuple(out))

    # H2: interchange for the derived horizontal composition
    for a in sorted(cells):  # a: f1 => f2
        f1, f2 = cells[a]
        y = bic.arrow_dst(f1)
        for c in sorted(cells):  # c: f2 => f3
            if bic.cell_src(c) != f2:
                continue
            for b in sorted(cells):  # b: g1 => g2
                g1, g2 = cells[b]
                if bic.arrow_src(g1) != y:
                    continue
                for d in sorted(cells):  # d: g2 => g3
                    if bic.cell_src(d) != g2:
                        continue
                    lhs = bic.vcomp[(bic.hcomp2(d, c), bic.hcomp2(b, a))]
                    rhs = bic.hcomp2(bic.vcomp[(d, b)], bic.vcomp[(c, a)])
                    if lhs != rhs:
                        add(Violation("H2", (d, c, b, a), left=lhs, right=rhs))

    # unitors: typing, invertibility, naturality
    for f in sorted(arrows):
        x, y = arrows[f]
        lam = bic.lunitor.get(f)
        rho = bic.runitor.get(f)
        fid = bic.hcomp1[(f, bic.id1[x])]
        idf = bic.hcomp1[(bic.id1[y], f)]
        if lam is None or lam not in cells:
            add(Violation("unitor-missing", (f, "lambda")))
        elif cells[lam] != (fid, f):
            add(Violation("unitor-typing", (f, "lambda"), left=lam))
        elif not bic.is_invertible(lam):
            add(Violation("unitor-invertible", (f, "lambda"), left=lam))
        if rho is None or rho not in cells:
            add(Violation("unitor-missing", (f, "rho")))
        elif cells[rho] != (idf, f):
            add(Violation("unitor-typing", (f, "rho"), left=rho))
        elif not bic.is_invertible(rho):
            add(Violation("unitor-invertible", (f, "rho"), left=rho))
    if any(v.axiom.startswith("unitor") for v in out):
        return ValidationReport(tuple(out))
    for a in sorted(cells):
        f, g = cells[a]
        x, y = arrows[f]
        lhs = bic.vcomp[(bic.lunitor[g], bic.rwhisk[(a, bic.id1[x])])]
        rhs = bic.vcomp[(a, bic.lunitor[f])]
        if lhs != rhs:
            add(Violation("Nlambda", (a,), left=lhs, right=rhs))
        lhs = bic.vcomp[(bic.runitor[g], bic.lwhisk[(bic.id1[y], a)])]
        rhs = bic.vcomp[(a, bic.runitor[f])]
        if lhs != rhs:
            add(Violation("Nrho", (a,), left=lhs, right=rhs))

    # associator: typing, invertibility, naturality, pentagon, triangle
    for h, g, f in bic.composable_arrow_triples():
        th = bic.assoc.get((h, g, f))
        src = bic.hcomp1[(h, bic.hcomp1[(g, f)])]
        dst = bic.hcomp1[(bic.hcomp1[(h, g)], f)]
        if th is None or th not in cells:
            add(Violation("assoc-missing", (h, g, f)))
        elif cells[th] != (src, dst):
            add(Violation("assoc-typing", (h, g, f), left=th))
        elif not bic.is_invertible(th):
            add(Violation("assoc-invertible", (h, g, f), left=th))
    if any(v.axiom.startswith("assoc") for v in out):
        return ValidationReport(tuple(out))

    for a in sorted(cells):
        f1, f2 = cells[a]
        y = bic.arrow_dst(f1)
        for g in sorted(arrows):
            if bic.arrow_src(g) != y:
                continue
            for h in sorted(arrows):
                if not bic.composable1(h, g):
                    continue
                lhs = bic.vcomp[(bic.assoc[(h, g, f2)], bic.lwhisk[(h, bic.lwhisk[(g, a)])])]
                rhs = bic.vcomp[(bic.lwhisk[(bic.hcomp1[(h, g)], a)], bic.assoc[(h, g, f1)])]
                if lhs != rhs:
                    add(Violation("Ntheta1", (h, g, a), left=lhs, right=rhs))
    for b in sorted(cells):
        g1, g2 = cells[b]
        for f in sorted(arrows):
            if bic.arrow_dst(f) != bic.arrow_src(g1):
                continue
            for h in sorted(arrows):
                if bic.arrow_src(h) != bic.arrow_dst(g1):
                    continue
                lhs = bic.vcomp[(bic.assoc[(h, g2, f)], bic.lwhisk[(h, bic.rwhisk[(b, f)])])]
                rhs = bic.vcomp[(bic.rwhisk[(bic.lwhisk[(h, b)], f)], bic.assoc[(h, g1, f)])]
                if lhs != rhs:
                    add(Violation("Ntheta2", (h, b, f), left=lhs, right=rhs))
    for c in sorted(cells):
        h1, h2 = cells[c]
        for g in sorted(arrows):
            if bic.arrow_dst(g) != bic.arrow_src(h1):
                continue
            for f in sorted(arrows):
                if not bic.composable1(g, f):
                    continue
                gf = bic.hcomp1[(g, f)]
                lhs = bic.vcomp[(bic.assoc[(h2, g, f)], bic.rwhisk[(c, gf)])]
                rhs = bic.vcomp[(bic.rwhisk[(bic.rwhisk[(c, g)], f)], bic.assoc[(h1, g, f)])]
                if lhs != rhs:
                    add(Violation("Ntheta3", (c, g, f), left=lhs, right=rhs))

    for k in sorted(arrows):
        for h, g, f in bic.composable_arrow_triples():
            if not bic.composable1(k, h):
                continue
            gf = bic.hcomp1[(g, f)]
            hg = bic.hcomp1[(h, g)]
            kh = bic.hcomp1[(k, h)]
            lhs = bic.vcomp[(bic.assoc[(kh, g, f)], bic.assoc[(k, h, gf)])]
            rhs = bic.vcomp[
                (
                    bic.rwhisk[(bic.assoc[(k, h, g)], f)],
                    bic.vcomp[(bic.assoc[(k, hg, f)], bic.lwhisk[(k, bic.assoc[(h, g, f)])])],
                )
            ]
            if lhs != rhs:
                add(Violation("pentagon", (k, h, g, f), left=lhs, right=rhs))

    for g, f in bic.composable_arrow_pairs():
        y = bic.arrow_dst(f)
        lhs = bic.vcomp[(bic.rwhisk[(bic.lunitor[g], f)], bic.assoc[(g, bic.id1[y], f)])]
        rhs = bic.lwhisk[(g, bic.runitor[f])]
        if lhs != rhs:
            add(Violation("triangle", (g, f), left=lhs, right=rhs))

    # strictness, when claimed
    if bic.strict:
        for f in sorted(arrows):
            x, y = arrows[f]
            if bic.hcomp1[(f, bic.id1[x])] != f or bic.hcomp1[(bic.id1[y], f)] != f:
                add(Violation("strict-unital", (f,)))
            if bic.lunitor[f] != bic.idc[f] or bic.runitor[f] != bic.idc[f]:
                add(Violation("strict-unitors", (f,)))
        for h, g, f in bic.composable_arrow_triples():
            if bic.hcomp1[(h, bic.hcomp1[(g, f)])] != bic.hcomp1[(bic.hcomp1[(h, g)], f)]:
                add(Violation("strict-assoc", (h, g, f)))
            elif bic.assoc[(h, g, f)] not in bic._identity_cells:
                add(Violation("strict-assoc-cell", (h, g, f)))

    return ValidationReport(tuple(out))


class PseudofunctorData:
    """Maps between tabulated bicategories plus structural cells xi and phi.

    xi[x] is a target cell id_{FX} => F(id_X); phi[(g, f)] is a target cell
    Fg * Ff => F(g*f), one per composable source pair.  A 2-functor is the
    special case where every xi and phi entry is an identity cell.
    """

    def __init__(
        self,
        name: str,
        source: Bicategory,
        target: Bicategory,
        obj_map: dict[str, str],
        arr_map: dict[str, str],
        cell_map: dict[str, str],
        xi: dict[str, str] | None = None,
        phi: dict[tuple[str, str], str] | None = None,
    ) -> None:
        self.name = name
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.arr_map = dict(arr_map)
        self.cell_map = dict(cell_map)
        self.xi = dict(xi or {})
        self.phi = dict(phi or {})
        # identity structural cells may be left implicit when well-typed
        for x in source.objects:
            if x not in self.xi:
                fx = self.obj_map[x]
                fid = self.arr_map[source.id1[x]]
                if fid != target.id1[fx]:
                    raise StructureError(
                        f"{name}: xi[{x}] required, F(id_{x}) is not id_{{F{x}}}"
                    )
                self.xi[x] = target.idc[target.id1[fx]]
        for g, f in source.composable_arrow_pairs():
            if (g, f) not in self.phi:
                lhs = target.hcomp1.get((self.arr_map[g], self.arr_map[f]))
                rhs = self.arr_map[source.hcomp1[(g, f)]]
                if lhs != rhs:
                    raise StructureError(
                        f"{name}: phi[({g}, {f})] required, F{g} * F{f} != F({g}*{f})"
                    )
                self.phi[(g, f)] = target.idc[rhs]

    def __repr__(self) -> str:
        return f"PseudofunctorData({self.name!r}: {self.source.name} -> {self.target.name})"

    @property
    def is_2functor(self) -> bool:
        t = self.target
        return all(t.is_identity_cell(c) for c in self.xi.values()) and all(
            t.is_identity_cell(c) for c in self.phi.values()
        )

    def on_obj(self, x: str) -> str:
        return self.obj_map[x]

    def on_arr(self, f: str) -> str:
        return self.arr_map[f]

    def on_cell(self, a: str) -> str:
        return self.cell_map[a]


def validate_pseudofunctor(fun: PseudofunctorData) -> ValidationReport:
    """Check hom-functoriality plus the unit, composition and naturality axioms."""
    out: list[Violation] = []
    add = out.append
    c, d = fun.source, fun.target

    for x in c.objects:
        if fun.obj_map.get(x) not in d.arrows and fun.obj_map.get(x) not in d.objects:
            add(Violation("map-obj", (x,)))
    for f, (x, y) in sorted(c.arrows.items()):
        ff = fun.arr_map.get(f)
        if ff is None or ff not in d.arrows:
            add(Violation("map-arr", (f,)))
        elif d.arrows[ff] != (fun.obj_map[x], fun.obj_map[y]):
            add(Violation("map-arr-typing", (f, ff)))
    for a, (f, g) in sorted(c.cells.items()):
        fa = fun.cell_map.get(a)
        if fa is None or fa not in d.cells:
            add(Violation("map-cell", (a,)))
        elif d.cells[fa] != (fun.arr_map[f], fun.arr_map[g]):
            add(Violation("map-cell-typing", (a, fa)))
    if out:
        return ValidationReport(tuple(out))

    # hom-functoriality
    for f in sorted(c.arrows):
        if fun.cell_map[c.idc[f]] != d.idc[fun.arr_map[f]]:
            add(
                Violation(
                    "hom-functor-id",
                    (f,),
                    left=fun.cell_map[c.idc[f]],
                    right=d.idc[fun.arr_map[f]],
                )
            )
    for (b, a), r in sorted(c.vcomp.items()):
        lhs = d.vcomp.get((fun.cell_map[b], fun.cell_map[a]))
        rhs = fun.cell_map[r]
        if lhs != rhs:
            add(Violation("hom-functor-vcomp", (b, a), left=str(lhs), right=rhs))

    # structural cells: typing and invertibility
    for x in c.objects:
        xi = fun.xi.get(x)
        fx = fun.obj_map[x]
        want = (d.id1[fx], fun.arr_map[c.id1[x]])
        if xi is None or xi not in d.cells or d.cells[xi] != want:
            add(Violation("xi-typing", (x,), left=str(xi)))
        elif not d.is_invertible(xi):
            add(Violation("xi-invertible", (x,), left=xi))
    for g, f in c.composable_arrow_pairs():
        ph = fun.phi.get((g, f))
        src = d.hcomp1.get((fun.arr_map[g], fun.arr_map[f]))
        want = (src, fun.arr_map[c.hcomp1[(g, f)]])
        if ph is None or ph not in d.cells or src is None or d.cells[ph] != want:
            add(Violation("phi-typing", (g, f), left=str(ph)))
        elif not d.is_invertible(ph):
            add(Violation("phi-invertible", (g, f), left=ph))
    if out:
        return ValidationReport(tuple(out))

    # P1/P2: unit coherence (lambda/rho corrected in the non-strict case)
    for f, (x, y) in sorted(c.arrows.items()):
        ff = fun.arr_map[f]
        lhs = d.vertical_chain(
            [
                d.whisker_l(ff, fun.xi[x]),
                fun.phi[(f, c.id1[x])],
                fun.cell_map[c.lunitor[f]],
            ]
        )
        if lhs != d.lunitor[ff]:
            add(Violation("P1", (f,), left=lhs, right=d.lunitor[ff]))
        lhs = d.vertical_chain(
            [
                d.whisker_r(fun.xi[y], ff),
                fun.phi[(c.id1[y], f)],
                fun.cell_map[c.runitor[f]],
            ]
        )
        if lhs != d.runitor[ff]:
            add(Violation("P2", (f,), left=lhs, right=d.runitor[ff]))

    # P3: composition coherence across triples
    for h, g, f in c.composable_arrow_triples():
        fh, fg, ff = fun.arr_map[h], fun.arr_map[g], fun.arr_map[f]
        lhs = d.vertical_chain(
            [
                d.assoc[(fh, fg, ff)],
                d.whisker_r(fun.phi[(h, g)], ff),
                fun.phi[(c.hcomp1[(h, g)], f)],
            ]
        )
        rhs = d.vertical_chain(
            [
                d.whisker_l(fh, fun.phi[(g, f)]),
                fun.phi[(h, c.hcomp1[(g, f)])],
                fun.cell_map[c.assoc[(h, g, f)]],
            ]
        )
        if lhs != rhs:
            add(Violation("P3", (h, g, f), left=lhs, right=rhs))

    # Nphi: phi is natural in both cells
    for a in sorted(c.cells):
        f1, f2 = c.cells[a]
        for b in sorted(c.cells):
            g1, g2 = c.cells[b]
            if c.arrow_src(g1) != c.arrow_dst(f1):
                continue
            lhs = d.vertical(
                fun.cell_map[c.hcomp2(b, a)], fun.phi[(g1, f1)]
            )
            rhs = d.vertical(
                fun.phi[(g2, f2)], d.hcomp2(fun.cell_map[b], fun.cell_map[a])
            )
            if lhs != rhs:
                add(Violation("Nphi", (b, a), left=lhs, right=rhs))

    return ValidationReport(tuple(out))


def comp_sub_f(
    fun: PseudofunctorData,
    beta: str,
    alpha: str,
    g1: str,
    f1: str,
    g2: str,
    f2: str,
) -> str:
    """The composite F(g1*f1) => F(g2*f2) conjugating beta * alpha by phi."""
    c, d = fun.source, fun.target
    for g, f in ((g1, f1), (g2, f2)):
        if (g, f) not in c.hcomp1:
            raise StructureError(f"{fun.name}: source pair ({g}, {f}) not composable")
    if d.cells.get(alpha) != (fun.arr_map[f1], fun.arr_map[f2]):
        raise StructureError(f"{fun.name}: alpha {alpha} is not F{f1} => F{f2}")
    if d.cells.get(beta) != (fun.arr_map[g1], fun.arr_map[g2]):
        raise StructureError(f"{fun.name}: beta {beta} is not F{g1} => F{g2}")
    phi_in = d.inverse(fun.phi[(g1, f1)])
    if phi_in is None:
        raise StructureError(f"{fun.name}: phi[({g1}, {f1})] is not invertible")
    return d.vertical_chain([phi_in, d.hcomp2(beta, alpha), fun.phi[(g2, f2)]])


def _cf_cell(f: str, g: str, dcell: str) -> str:
    return f"{f}|{g}|{dcell}"


def factorize(
    fun: PseudofunctorData,
) -> tuple[Bicategory, PseudofunctorData, PseudofunctorData]:
    """Split fun as a 2-functor into an intermediate bicategory, then a
    pseudofunctor carrying the original xi/phi.

    The intermediate bicategory keeps the source's objects and arrows; a 2-cell
    f => g is a target 2-cell Ff => Fg, composed vertically in the target and
    horizontally via comp_sub_f.  Returns (intermediate, f1, f2) with
    f1 . f2 == fun.
    """
    c, d = fun.source, fun.target
    name = f"{c.name}_{fun.name}"

    cells: dict[str, tuple[str, str]] = {}
    for f in sorted(c.arrows):
        for g in c.arrows_between(*c.arrows[f]):
            for dc in d.cells_between(fun.arr_map[f], fun.arr_map[g]):
                cells[_cf_cell(f, g, dc)] = (f, g)
    idc = {f: _cf_cell(f, f, d.idc[fun.arr_map[f]]) for f in c.arrows}

    def parts(cell: str) -> tuple[str, str, str]:
        f, g, dc = cell.split("|", 2)
        return f, g, dc

    vcomp: dict[tuple[str, str], str] = {}
    for b in cells:
        fb, gb, db = parts(b)
        for a in cells:
            fa, ga, da = parts(a)
            if ga != fb:
                continue
            vcomp[(b, a)] = _cf_cell(fa, gb, d.vertical(db, da))

    lwhisk: dict[tuple[str, str], str] = {}
    rwhisk: dict[tuple[str, str], str] = {}
    for a in cells:
        fa, ga, da = parts(a)
        x, y = c.arrows[fa]
        for g in sorted(c.arrows):
            if c.arrow_src(g) == y:
                val = comp_sub_f(
                    fun, d.idc[fun.arr_map[g]], da, g, fa, g, ga
                )
                lwhisk[(g, a)] = _cf_cell(c.hcomp1[(g, fa)], c.hcomp1[(g, ga)], val)
        for f in sorted(c.arrows):
            if c.arrow_dst(f) == x:
                val = comp_sub_f(
                    fun, da, d.idc[fun.arr_map[f]], fa, f, ga, f
                )
                rwhisk[(a, f)] = _cf_cell(c.hcomp1[(fa, f)], c.hcomp1[(ga, f)], val)

    lunitor = {}
    runitor = {}
    for f, (x, y) in c.arrows.items():
        lunitor[f] = _cf_cell(c.hcomp1[(f, c.id1[x])], f, fun.cell_map[c.lunitor[f]])
        runitor[f] = _cf_cell(c.hcomp1[(c.id1[y], f)], f, fun.cell_map[c.runitor[f]])
    assoc = {}
    for h, g, f in c.composable_arrow_triples():
        left = c.hcomp1[(h, c.hcomp1[(g, f)])]
        right = c.hcomp1[(c.hcomp1[(h, g)], f)]
        assoc[(h, g, f)] = _cf_cell(left, right, fun.cell_map[c.assoc[(h, g, f)]])

    mid = Bicategory(
        name=name,
        objects=c.objects,
        arrows=c.arrows,
        id1=c.id1,
        hcomp1=c.hcomp1,
        cells=cells,
        idc=idc,
        vcomp=vcomp,
        lwhisk=lwhisk,
        rwhisk=rwhisk,
        lunitor=lunitor,
        runitor=runitor,
        assoc=assoc,
        strict=c.strict,
    )

    f2 = PseudofunctorData(
        name=f"{fun.name}.head",
        source=c,
        target=mid,
        obj_map={x: x for x in c.objects},
        arr_map={f: f for f in c.arrows},
        cell_map={
            a: _cf_cell(c.cells[a][0], c.cells[a][1], fun.cell_map[a]) for a in c.cells
        },
    )
    f1 = PseudofunctorData(
        name=f"{fun.name}.tail",
        source=mid,
        target=d,
        obj_map=dict(fun.obj_map),
        arr_map=dict(fun.arr_map),
        cell_map={cell: parts(cell)[2] for cell in cells},
        xi=dict(fun.xi),
        phi=dict(fun.phi),
    )
    return mid, f1, f2


class TransformationData:
    """Arrow family theta_X: FX -> GX plus cell family theta_f: Gf*theta_X => theta_Y*Ff."""

    def __init__(
        self,
        name: str,
        fun_from: PseudofunctorData,
        fun_to: PseudofunctorData,
        comp_obj: dict[str, str],
        comp_arr: dict[str, str],
    ) -> None:
        if fun_from.source is not fun_to.source or fun_from.target is not fun_to.target:
            raise StructureError(f"{name}: transformation endpoints disagree")
        self.name = name
        self.fun_from = fun_from
        self.fun_to = fun_to
        self.comp_obj = dict(comp_obj)
        self.comp_arr = dict(comp_arr)


def validate_transformation(tr: TransformationData) -> ValidationReport:
    out: list[Violation] = []
    add = out.append
    f_, g_ = tr.fun_from, tr.fun_to
    c, d = f_.source, f_.target
    if not (c.strict and d.strict):
        return ValidationReport((Violation("strictness-required", (tr.name,)),))

    for x in c.objects:
        t = tr.comp_obj.get(x)
        if t is None or t not in d.arrows or d.arrows[t] != (f_.obj_map[x], g_.obj_map[x]):
            add(Violation("transf-obj-typing", (x,), left=str(t)))
    if out:
        return ValidationReport(tuple(out))
    for f, (x, y) in sorted(c.arrows.items()):
        t = tr.comp_arr.get(f)
        src = d.hcomp1[(g_.arr_map[f], tr.comp_obj[x])]
        dst = d.hcomp1[(tr.comp_obj[y], f_.arr_map[f])]
        if t is None or t not in d.cells or d.cells[t] != (src, dst):
            add(Violation("transf-arr-typing", (f,), left=str(t)))
        elif not d.is_invertible(t):
            add(Violation("transf-arr-invertible", (f,), left=t))
    if out:
        return ValidationReport(tuple(out))

    # PN0: unit compatibility
    for x in c.objects:
        tx = tr.comp_obj[x]
        lhs = d.whisker_l(tx, f_.xi[x])
        rhs = d.vertical(tr.comp_arr[c.id1[x]], d.whisker_r(g_.xi[x], tx))
        if lhs != rhs:
            add(Violation("PN0", (x,), left=lhs, right=rhs))

    # PN1: composition compatibility
    for g, f in c.composable_arrow_pairs():
        x = c.arrow_src(f)
        z = c.arrow_dst(g)
        tz = tr.comp_obj[z]
        lhs = d.vertical_chain(
            [
                d.whisker_l(g_.arr_map[g], tr.comp_arr[f]),
                d.whisker_r(tr.comp_arr[g], f_.arr_map[f]),
                d.whisker_l(tz, f_.phi[(g, f)]),
            ]
        )
        rhs = d.vertical_chain(
            [
                d.whisker_r(g_.phi[(g, f)], tr.comp_obj[x]),
                tr.comp_arr[c.hcomp1[(g, f)]],
            ]
        )
        if lhs != rhs:
            add(Violation("PN1", (g, f), left=lhs, right=rhs))

    # PN2: naturality in cells
    for a, (f, g) in sorted(c.cells.items()):
        x, y = c.arrows[f]
        lhs = d.vertical(
            tr.comp_arr[g], d.whisker_r(g_.cell_map[a], tr.comp_obj[x])
        )
        rhs = d.vertical(
            d.whisker_l(tr.comp_obj[y], f_.cell_map[a]), tr.comp_arr[f]
        )
        if lhs != rhs:
            add(Violation("PN2", (a,), left=lhs, right=rhs))

    return ValidationReport(tuple(out))


class ModificationData:
    """Cell family rho_X: theta_X => eta_X between parallel transformations."""

    def __init__(
        self,
        name: str,
        theta: TransformationData,
        eta: TransformationData,
        comp: dict[str, str],
    ) -> None:
        if theta.fun_from is not eta.fun_from or theta.fun_to is not eta.fun_to:
            raise StructureError(f"{name}: modification endpoints disagree")
        self.name = name
        self.theta = theta
        self.eta = eta
        self.comp = dict(comp)


def validate_modification(mod: ModificationData) -> ValidationReport:
    out: list[Violation] = []
    add = out.append
    theta, eta = mod.theta, mod.eta
    f_, g_ = theta.fun_from, theta.fun_to
    c, d = f_.source, f_.target
    if not (c.strict and d.strict):
        return ValidationReport((Violation("strictness-required", (mod.name,)),))

    for x in c.objects:
        r = mod.comp.get(x)
        want = (theta.comp_obj[x], eta.comp_obj[x])
        if r is None or r not in d.cells or d.cells[r] != want:
            add(Violation("modif-typing", (x,), left=str(r)))
    if out:
        return ValidationReport(tuple(out))

    for f, (x, y) in sorted(c.arrows.items()):
        lhs = d.vertical(
            d.whisker_r(mod.comp[y], f_.arr_map[f]), theta.comp_arr[f]
        )
        rhs = d.vertical(
            eta.comp_arr[f], d.whisker_l(g_.arr_map[f], mod.comp[x])
        )
        if lhs != rhs:
            add(Violation("PM", (f,), left=lhs, right=rhs))

    return ValidationReport(tuple(out))


def identity_pseudofunctor(bic: Bicategory) -> PseudofunctorData:
    return PseudofunctorData(
        name=f"id[{bic.name}]",
        source=bic,
        target=bic,
        obj_map={x: x for x in bic.objects},
        arr_map={f: f for f in bic.arrows},
        cell_map={a: a for a in bic.cells},
    )


def compose_pseudofunctors(
    outer: PseudofunctorData, inner: PseudofunctorData, name: str | None = None
) -> PseudofunctorData:
    """Composite outer . inner; defined when at least one side is a 2-functor.

    The general composite's phi mixes both structures; for this workbench the
    composite is only ever taken against a 2-functor leg, which keeps the
    structural cells equal to the pseudofunctor side's image.
    """
    if inner.target is not outer.source:
        raise StructureError("compose_pseudofunctors: middle bicategories differ")
    if not inner.is_2functor and not outer.is_2functor:
        raise StructureError("compose_pseudofunctors: need a 2-functor on one side")
    if inner.is_2functor:
        xi = {x: outer.xi[inner.obj_map[x]] for x in inner.source.objects}
        phi = {
            (g, f): outer.phi[(inner.arr_map[g], inner.arr_map[f])]
            for g, f in inner.source.composable_arrow_pairs()
        }
    else:
        xi = {x: outer.cell_map[inner.xi[x]] for x in inner.source.objects}
        phi = {
            (g, f): outer.cell_map[inner.phi[(g, f)]]
            for g, f in inner.source.composable_arrow_pairs()
        }
    return PseudofunctorData(
        name=name or f"{outer.name}.{inner.name}",
        source=inner.source,
        target=outer.target,
        obj_map={x: outer.obj_map[inner.obj_map[x]] for x in inner.source.objects},
        arr_map={f: outer.arr_map[inner.arr_map[f]] for f in inner.source.arrows},
        cell_map={a: outer.cell_map[inner.cell_map[a]] for a in inner.source.cells},
        xi=xi,
        phi=phi,
    )
