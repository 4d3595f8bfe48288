"""The homotopy bicategory of a pair (bicategory, marked class).

2-cells are finite composable sequences of homotopy terms modulo the relation
"every admissible 2-functor evaluates both sides to the same target cell".
That relation quantifies over all functors, so equality is decided three-ways:

* Equal   -- both sequences normalize, under a fixed set of class-preserving
             rewrite rules, to the same canonical term list.  Every rule
             carries the algebraic law that justifies it into the trace.
* Distinct-- some probe (an admissible 2-functor into a finite target)
             evaluates the two sides to different cells.
* Unknown -- neither; an honest outcome, reported with exit code 2 by the CLI.

Sequences are stored first-applied-first.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import (
    Bicategory,
    PseudofunctorData,
    StructureError,
    validate_pseudofunctor,
)
from .homotopy import (
    HomotopyTerm,
    Homotopy,
    ICell,
    LemmaOrigin,
    TransformOrigin,
    compose_lemma,
    cylinder_homotopy,
    f_hat,
    inverse_cylinder,
    make_cylinder,
    make_homotopy,
    transform_homotopy,
)
from .sigma import SigmaClass, is_quasiequivalence

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class HoCell:
    """A 2-cell of the homotopy bicategory: a composable term sequence."""

    sigma: SigmaClass
    f: str
    g: str
    terms: tuple[HomotopyTerm, ...]

    @property
    def bic(self) -> Bicategory:
        return self.sigma.bic

    def __str__(self) -> str:
        if not self.terms:
            return f"id[{self.f}]"
        names = []
        for t in reversed(self.terms):
            names.append(f"I({t.cell})" if isinstance(t, ICell) else f"H({t.f}=>{t.g})")
        return "[" + ", ".join(names) + "]"

    def to_json(self) -> dict:
        return {
            "f": self.f,
            "g": self.g,
            "terms": [t.to_json() for t in self.terms],
        }


def ho_cell(
    sigma: SigmaClass,
    terms: list[HomotopyTerm] | tuple[HomotopyTerm, ...],
    f: str | None = None,
    g: str | None = None,
) -> HoCell:
    bic = sigma.bic
    terms = tuple(terms)
    if not terms:
        if f is None or f != g:
            raise StructureError("an empty sequence needs equal endpoints f == g")
        if f not in bic.arrows:
            raise StructureError(f"unknown arrow {f!r}")
        return HoCell(sigma, f, f, ())
    prev: str | None = None
    for t in terms:
        if t.bic is not bic:
            raise StructureError("term lives in a different bicategory")
        if isinstance(t, Homotopy) and t.cyl.s not in sigma:
            raise StructureError(
                f"homotopy cylinder arrow {t.cyl.s!r} is not in the marked class"
            )
        if prev is not None and t.f != prev:
            raise StructureError(f"terms do not chain at {t.f!r} (expected {prev!r})")
        prev = t.g
    first, last = terms[0].f, terms[-1].g
    if f is not None and f != first or g is not None and g != last:
        raise StructureError("declared endpoints disagree with the terms")
    return HoCell(sigma, first, last, terms)


def ho_identity(sigma: SigmaClass, f: str) -> HoCell:
    return ho_cell(sigma, (), f, f)


def i_cell(sigma: SigmaClass, mu: str) -> HoCell:
    """Projection of a bicategory cell; identity cells project to the empty
    sequence (the identity class)."""
    bic = sigma.bic
    if mu not in bic.cells:
        raise StructureError(f"unknown cell {mu!r}")
    if bic.is_identity_cell(mu):
        return ho_identity(sigma, bic.cell_src(mu))
    return ho_cell(sigma, (ICell(bic, mu),))


def ho_vcomp(k2: HoCell, k1: HoCell) -> HoCell:
    """Juxtaposition: k2 after k1."""
    if k2.sigma != k1.sigma:
        raise StructureError("cells live over different marked classes")
    if k1.g != k2.f:
        raise StructureError(f"cells do not chain: {k1.g!r} vs {k2.f!r}")
    return ho_cell(k1.sigma, k1.terms + k2.terms, k1.f, k2.g)


def ho_whisk(side: str, arrow: str, k: HoCell) -> HoCell:
    """Elementwise whiskering of the term sequence by an arrow."""
    bic = k.bic
    if side not in ("left", "right"):
        raise StructureError(f"whisker side must be left or right, not {side!r}")
    if arrow not in bic.arrows:
        raise StructureError(f"unknown arrow {arrow!r}")
    kind = "lwhisk" if side == "left" else "rwhisk"
    out: list[HomotopyTerm] = []
    for t in k.terms:
        if isinstance(t, ICell):
            val = (
                bic.whisker_l(arrow, t.cell)
                if side == "left"
                else bic.whisker_r(t.cell, arrow)
            )
            out.append(ICell(bic, val))
        else:
            out.append(transform_homotopy(kind, arrow, t))
    if side == "left":
        f, g = bic.compose1(arrow, k.f), bic.compose1(arrow, k.g)
    else:
        f, g = bic.compose1(k.f, arrow), bic.compose1(k.g, arrow)
    return ho_cell(k.sigma, out, f, g)


def ho_inverse(k: HoCell) -> HoCell:
    """Formal inverse: reversed sequence of inverted terms.  Defined when every
    term has invertible cells."""
    bic = k.bic
    out: list[HomotopyTerm] = []
    for t in reversed(k.terms):
        if isinstance(t, ICell):
            inv = bic.inverse(t.cell)
            if inv is None:
                raise StructureError(f"cell {t.cell!r} is not invertible")
            out.append(ICell(bic, inv))
        else:
            out.append(transform_homotopy("invert", "", t))
    return ho_cell(k.sigma, out, k.g, k.f)


def hocell_from_json(sigma: SigmaClass, data: dict) -> HoCell:
    bic = sigma.bic
    terms: list[HomotopyTerm] = []
    for td in data["terms"]:
        if td.get("kind") == "icell":
            terms.append(ICell(bic, td["cell"]))
            continue
        cd = td["cylinder"]
        cyl = make_cylinder(
            bic,
            cd["d0"],
            cd["d1"],
            cd["x"],
            cd["s"],
            cd["alpha0"],
            cd["alpha1"],
            sigma=sigma,
        )
        terms.append(make_homotopy(cyl, td["h"], td["eta"], td["eps"]))
    return ho_cell(sigma, terms, data["f"], data["g"])


# -- probes -----------------------------------------------------------------


@dataclass(frozen=True)
class ProbeSet:
    probes: tuple[PseudofunctorData, ...]

    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.probes)


def make_probe_set(sigma: SigmaClass, functors: list[PseudofunctorData]) -> ProbeSet:
    """Validate the probe side conditions: 2-functors out of the marked pair
    whose marked images are quasiequivalences."""
    for fun in functors:
        if fun.source is not sigma.bic:
            raise StructureError(f"probe {fun.name!r} has the wrong source")
        if not fun.is_2functor:
            raise StructureError(f"probe {fun.name!r} is not a 2-functor")
        if not validate_pseudofunctor(fun).ok:
            raise StructureError(f"probe {fun.name!r} fails validation")
        for s in sigma.sorted_members():
            if not is_quasiequivalence(fun.target, fun.arr_map[s]):
                raise StructureError(
                    f"probe {fun.name!r} sends {s!r} outside the quasiequivalences"
                )
    return ProbeSet(tuple(functors))


def enumerate_2functors(
    src: Bicategory, dst: Bicategory, name_prefix: str = ""
) -> list[PseudofunctorData]:
    """All 2-functors between two finite tabulated bicategories, by exhaustive
    backtracking over object, arrow and cell assignments."""
    objs = list(src.objects)
    ids = set(src.id1.values())
    idcs = set(src.idc.values())
    gen_arrows = [f for f in sorted(src.arrows) if f not in ids]
    gen_cells = [a for a in sorted(src.cells) if a not in idcs]
    found: list[PseudofunctorData] = []

    def arrows_ok(amap: dict[str, str]) -> bool:
        for (g, f), c in src.hcomp1.items():
            if dst.hcomp1.get((amap[g], amap[f])) != amap[c]:
                return False
        return True

    def cells_ok(amap: dict[str, str], cmap: dict[str, str]) -> bool:
        for (b, a), c in src.vcomp.items():
            if dst.vcomp.get((cmap[b], cmap[a])) != cmap[c]:
                return False
        for (g, a), c in src.lwhisk.items():
            if dst.lwhisk.get((amap[g], cmap[a])) != cmap[c]:
                return False
        for (a, f), c in src.rwhisk.items():
            if dst.rwhisk.get((cmap[a], amap[f])) != cmap[c]:
                return False
        if not src.strict or not dst.strict:
            for f in src.arrows:
                if cmap[src.lunitor[f]] != dst.lunitor[amap[f]]:
                    return False
                if cmap[src.runitor[f]] != dst.runitor[amap[f]]:
                    return False
            for key, c in src.assoc.items():
                if cmap[c] != dst.assoc[(amap[key[0]], amap[key[1]], amap[key[2]])]:
                    return False
        return True

    for combo in itertools.product(dst.objects, repeat=len(objs)):
        omap = dict(zip(objs, combo))
        amap_base = {src.id1[x]: dst.id1[omap[x]] for x in objs}

        def extend_arrows(i: int, amap: dict[str, str]) -> None:
            if i == len(gen_arrows):
                if not arrows_ok(amap):
                    return
                cmap_base = {src.idc[f]: dst.idc[amap[f]] for f in src.arrows}
                extend_cells(0, dict(cmap_base), amap)
                return
            f = gen_arrows[i]
            x, y = src.arrows[f]
            for cand in dst.arrows_between(omap[x], omap[y]):
                amap[f] = cand
                extend_arrows(i + 1, amap)
            amap.pop(f, None)

        def extend_cells(j: int, cmap: dict[str, str], amap: dict[str, str]) -> None:
            if j == len(gen_cells):
                if cells_ok(amap, cmap):
                    fun = PseudofunctorData(
                        name=f"{name_prefix}{src.name}->{dst.name}#{len(found)}",
                        source=src,
                        target=dst,
                        obj_map=dict(omap),
                        arr_map=dict(amap),
                        cell_map=dict(cmap),
                    )
                    found.append(fun)
                return
            a = gen_cells[j]
            f, g = src.cells[a]
            for cand in dst.cells_between(amap[f], amap[g]):
                cmap[a] = cand
                extend_cells(j + 1, cmap, amap)
            cmap.pop(a, None)

        extend_arrows(0, dict(amap_base))
    return found


def enumerate_probes(
    sigma: SigmaClass, targets: list[Bicategory], include_self: bool = True
) -> ProbeSet:
    """All 2-functors into the targets (plus the bicategory itself when its
    marked arrows are quasiequivalences) that satisfy the probe conditions."""
    src = sigma.bic
    all_targets = list(targets)
    if include_self and all(is_quasiequivalence(src, s) for s in sigma.members):
        if all(t is not src for t in all_targets):
            all_targets.append(src)
    probes: list[PseudofunctorData] = []
    for dst in all_targets:
        for fun in enumerate_2functors(src, dst):
            if all(
                is_quasiequivalence(dst, fun.arr_map[s]) for s in sigma.members
            ):
                probes.append(fun)
    return ProbeSet(tuple(probes))


def f_hat_chain(fun: PseudofunctorData, k: HoCell) -> str:
    """Composite of the term images under a probe, in application order."""
    d = fun.target
    return d.vertical_chain(
        (f_hat(fun, t) for t in k.terms), on_arrow=fun.arr_map[k.f]
    )


# -- the equality decider ----------------------------------------------------


@dataclass(frozen=True)
class TraceStep:
    side: str
    rule: str
    law: str
    detail: str

    def to_json(self) -> dict:
        return {"side": self.side, "rule": self.rule, "law": self.law, "detail": self.detail}


@dataclass(frozen=True)
class EqVerdict:
    verdict: str  # equal | distinct | unknown
    trace: tuple[TraceStep, ...] = ()
    probe: str = ""
    left_value: str = ""
    right_value: str = ""

    @property
    def is_equal(self) -> bool:
        return self.verdict == "equal"

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.verdict == "equal":
            out["trace"] = [s.to_json() for s in self.trace]
        if self.verdict == "distinct":
            out["probe"] = self.probe
            out["left_value"] = self.left_value
            out["right_value"] = self.right_value
        return out


_LAW_ICELL_ID = "[I(id_f)] = id_f"
_LAW_CYL_ID = "[h*H^C] = id when d0 = d1 and alpha0 = alpha1 (hat is unique)"
_LAW_ICELL_MERGE = "[I(mu'), I(mu)] = [I(mu' o mu)]"
_LAW_DECOMPOSE = "[H] = [I(eps)] o (h * [H^C]) o [I(eta)]"
_LAW_CYL_CANCEL = "(h * [H^C]) o (h * [H^C^-1]) = id"
_LAW_POST = "[mu o H] = [I(mu)] o [H]"
_LAW_PRE = "[H o nu] = [H] o [I(nu)]"
_LAW_LEMMA = "[H] = [H2, H1] under the gluing hypotheses"
_LAW_W1 = "[K*f1, g2*H] = [g1*H, K*f2]"
_LAW_SYNTACTIC = "identical sequences denote the same class"


def _flatten(
    sigma: SigmaClass,
    terms: tuple[HomotopyTerm, ...],
    side: str,
    trace: list[TraceStep],
    budget: int,
) -> list[HomotopyTerm]:
    out: list[HomotopyTerm] = []

    def go(t: HomotopyTerm) -> None:
        if isinstance(t, ICell):
            out.append(t)
            return
        origin = t.origin
        if isinstance(origin, LemmaOrigin) and len(out) + 2 <= budget:
            replay = compose_lemma(sigma, origin.h1, origin.h2, origin.glue)
            if replay == t:
                trace.append(
                    TraceStep(side, "lemma-expand", _LAW_LEMMA, f"{t.f}=>{t.g}")
                )
                go(origin.h1)
                go(origin.h2)
                return
        if isinstance(origin, TransformOrigin) and origin.kind == "post":
            trace.append(TraceStep(side, "post-split", _LAW_POST, origin.arg))
            go(origin.base)
            go(ICell(t.bic, origin.arg))
            return
        if isinstance(origin, TransformOrigin) and origin.kind == "pre":
            trace.append(TraceStep(side, "pre-split", _LAW_PRE, origin.arg))
            go(ICell(t.bic, origin.arg))
            go(origin.base)
            return
        out.append(t)

    for t in terms:
        go(t)
    return out


def _w1_sort(
    terms: list[HomotopyTerm], side: str, trace: list[TraceStep]
) -> list[HomotopyTerm]:
    """Directed exchange: a right-whiskered term followed by a left-whiskered
    term in the W1 square pattern is rewritten to the other bracketing."""
    work = list(terms)
    changed = True
    rounds = 0
    while changed and rounds < len(work) * len(work) + 1:
        changed = False
        rounds += 1
        for i in range(len(work) - 1):
            t1, t2 = work[i], work[i + 1]
            if not (isinstance(t1, Homotopy) and isinstance(t2, Homotopy)):
                continue
            o1, o2 = t1.origin, t2.origin
            if not (
                isinstance(o1, TransformOrigin)
                and o1.kind == "rwhisk"
                and isinstance(o2, TransformOrigin)
                and o2.kind == "lwhisk"
            ):
                continue
            k_hom, f1 = o1.base, o1.arg
            h_hom, g2 = o2.base, o2.arg
            if g2 != k_hom.g or f1 != h_hom.f:
                continue
            work[i] = transform_homotopy("lwhisk", k_hom.f, h_hom)
            work[i + 1] = transform_homotopy("rwhisk", h_hom.g, k_hom)
            trace.append(
                TraceStep(side, "w1-exchange", _LAW_W1, f"{k_hom.f}|{h_hom.g}")
            )
            changed = True
    return work


def _decompose(
    terms: list[HomotopyTerm], side: str, trace: list[TraceStep]
) -> list[tuple]:
    """Each homotopy becomes I(eta); h*H^C; I(eps).  Canonical items are
    ('ci', cell) and ('cyl', h, cylinder)."""
    out: list[tuple] = []
    for t in terms:
        if isinstance(t, ICell):
            out.append(("ci", t.cell))
            continue
        bic = t.bic
        plain = (
            t.h == bic.id1[t.cyl.w]
            and t.eta == bic.idc[t.cyl.d0]
            and t.eps == bic.idc[t.cyl.d1]
        )
        whiskered = t.eta == bic.idc.get(bic.hcomp1.get((t.h, t.cyl.d0))) and (
            t.eps == bic.idc.get(bic.hcomp1.get((t.h, t.cyl.d1)))
        )
        if plain or whiskered:
            out.append(("cyl", t.h, t.cyl))
            continue
        trace.append(TraceStep(side, "decompose", _LAW_DECOMPOSE, f"{t.f}=>{t.g}"))
        out.append(("ci", t.eta))
        out.append(("cyl", t.h, t.cyl))
        out.append(("ci", t.eps))
    return out


def _simplify(
    bic: Bicategory, items: list[tuple], side: str, trace: list[TraceStep]
) -> list[tuple]:
    work = list(items)
    changed = True
    while changed:
        changed = False
        # drop identity projections and identity-hat cylinder classes
        kept: list[tuple] = []
        for it in work:
            if it[0] == "ci" and bic.is_identity_cell(it[1]):
                trace.append(TraceStep(side, "icell-identity", _LAW_ICELL_ID, it[1]))
                changed = True
            elif (
                it[0] == "cyl"
                and it[2].d0 == it[2].d1
                and it[2].alpha0 == it[2].alpha1
            ):
                trace.append(TraceStep(side, "cylinder-identity", _LAW_CYL_ID, it[2].s))
                changed = True
            else:
                kept.append(it)
        work = kept
        # merge adjacent projections
        i = 0
        merged: list[tuple] = []
        while i < len(work):
            if (
                i + 1 < len(work)
                and work[i][0] == "ci"
                and work[i + 1][0] == "ci"
            ):
                first, second = work[i][1], work[i + 1][1]
                val = bic.vertical(second, first)
                trace.append(
                    TraceStep(side, "icell-merge", _LAW_ICELL_MERGE, f"{second} o {first}")
                )
                merged.append(("ci", val))
                i += 2
                changed = True
                continue
            merged.append(work[i])
            i += 1
        work = merged
        # cancel inverse cylinder pairs with the same mediating arrow
        i = 0
        cancelled: list[tuple] = []
        while i < len(work):
            if (
                i + 1 < len(work)
                and work[i][0] == "cyl"
                and work[i + 1][0] == "cyl"
                and work[i][1] == work[i + 1][1]
                and inverse_cylinder(work[i][2]) == work[i + 1][2]
            ):
                trace.append(
                    TraceStep(
                        side,
                        "cylinder-cancel",
                        _LAW_CYL_CANCEL,
                        f"{work[i][2].s} via {work[i][1]}",
                    )
                )
                i += 2
                changed = True
                continue
            cancelled.append(work[i])
            i += 1
        work = cancelled
    return work


def _normalize_side(
    k: HoCell, side: str, trace: list[TraceStep], budget: int
) -> list[tuple]:
    flat = _flatten(k.sigma, k.terms, side, trace, budget)
    flat = _w1_sort(flat, side, trace)
    items = _decompose(flat, side, trace)
    return _simplify(k.bic, items, side, trace)


def ho_eq(
    k1: HoCell, k2: HoCell, probes: ProbeSet | None = None, budget: int = 8
) -> EqVerdict:
    """Three-valued equality on homotopy-bicategory 2-cells."""
    if k1.sigma != k2.sigma:
        raise StructureError("cells live over different marked classes")
    if (k1.f, k1.g) != (k2.f, k2.g):
        raise StructureError(
            f"boundary mismatch: {k1.f}=>{k1.g} vs {k2.f}=>{k2.g}"
        )
    if budget < 1:
        raise StructureError("budget must be >= 1")
    if k1.terms == k2.terms:
        return EqVerdict(
            "equal", (TraceStep("both", "syntactic", _LAW_SYNTACTIC, ""),)
        )
    trace: list[TraceStep] = []
    left = _normalize_side(k1, "left", trace, budget)
    right = _normalize_side(k2, "right", trace, budget)
    if left == right:
        return EqVerdict("equal", tuple(trace))
    if probes is not None:
        for fun in probes.probes:
            v1 = f_hat_chain(fun, k1)
            v2 = f_hat_chain(fun, k2)
            if v1 != v2:
                return EqVerdict("distinct", (), fun.name, v1, v2)
    return EqVerdict("unknown")


# -- extensions along the projection ----------------------------------------


@dataclass
class ExtensionReport:
    agrees_on_cells: bool
    functorial_vertical: bool
    functorial_whisker: bool
    preserves_units: bool
    checked_cells: int
    checked_pairs: int
    checked_whiskers: int

    @property
    def ok(self) -> bool:
        return (
            self.agrees_on_cells
            and self.functorial_vertical
            and self.functorial_whisker
            and self.preserves_units
        )

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "agrees_on_cells": self.agrees_on_cells,
            "functorial_vertical": self.functorial_vertical,
            "functorial_whisker": self.functorial_whisker,
            "preserves_units": self.preserves_units,
            "checked_cells": self.checked_cells,
            "checked_pairs": self.checked_pairs,
            "checked_whiskers": self.checked_whiskers,
        }


@dataclass
class ExtensionG:
    """A functor out of the homotopy bicategory, determined by its restriction
    along the projection: objects and arrows as the base functor, 2-cell
    values forced to the composite of term hats.

    On the pseudofunctor route the values are computed through the
    factorization: head is the 2-functor leg, tail carries them back down."""

    fun: PseudofunctorData
    sigma: SigmaClass
    head: PseudofunctorData | None = None
    tail: PseudofunctorData | None = None
    report: ExtensionReport | None = None
    materialized: list[HoCell] = field(default_factory=list)

    def value(self, k: HoCell) -> str:
        if self.head is not None and self.tail is not None:
            return self.tail.cell_map[f_hat_chain(self.head, k)]
        return f_hat_chain(self.fun, k)


def sample_homotopies(sigma: SigmaClass, cap: int = 200) -> list[Homotopy]:
    """Deterministic enumeration of homotopies at desk scale: every cylinder
    (all parallel pairs, diagonals, marked arrows and comparison cells), its
    tautological homotopy, and every homotopy over it, capped."""
    bic = sigma.bic
    out: list[Homotopy] = []
    for d0 in sorted(bic.arrows):
        x, w = bic.arrows[d0]
        for d1 in bic.arrows_between(x, w):
            for s in sorted(sigma.members):
                if bic.arrow_src(s) != w:
                    continue
                z = bic.arrow_dst(s)
                for diag in bic.arrows_between(x, z):
                    sd0, sd1 = bic.hcomp1[(s, d0)], bic.hcomp1[(s, d1)]
                    for a0 in bic.cells_between(sd0, diag):
                        if not bic.is_invertible(a0):
                            continue
                        for a1 in bic.cells_between(sd1, diag):
                            if not bic.is_invertible(a1):
                                continue
                            cyl = make_cylinder(bic, d0, d1, diag, s, a0, a1, sigma)
                            out.append(cylinder_homotopy(cyl))
                            for h in sorted(bic.arrows):
                                if bic.arrow_src(h) != w:
                                    continue
                                hd0 = bic.hcomp1[(h, d0)]
                                hd1 = bic.hcomp1[(h, d1)]
                                for ffrom in bic.arrows_between(
                                    x, bic.arrow_dst(h)
                                ):
                                    for eta in bic.cells_between(ffrom, hd0):
                                        for gto in bic.arrows_between(
                                            x, bic.arrow_dst(h)
                                        ):
                                            for eps in bic.cells_between(hd1, gto):
                                                out.append(
                                                    make_homotopy(cyl, h, eta, eps)
                                                )
                                                if len(out) >= cap:
                                                    return out
                            if len(out) >= cap:
                                return out
    return out


def extend_2functor(
    fun: PseudofunctorData, sigma: SigmaClass, cap: int = 60
) -> ExtensionG:
    """Extend a 2-functor along the projection and verify, on a materialized
    family of cells, that the forced values are functorial."""
    if not fun.is_2functor:
        raise StructureError(f"{fun.name!r} is not a 2-functor")
    for s in sigma.sorted_members():
        if not is_quasiequivalence(fun.target, fun.arr_map[s]):
            raise StructureError(
                f"{fun.name!r} sends {s!r} outside the quasiequivalences"
            )
    ext = ExtensionG(fun, sigma)
    bic = sigma.bic
    d = fun.target

    family: list[HoCell] = []
    for mu in sorted(bic.cells):
        family.append(i_cell(sigma, mu))
    for hom in sample_homotopies(sigma, cap=cap):
        family.append(ho_cell(sigma, (hom,)))
    ext.materialized = family

    agrees = all(
        ext.value(i_cell(sigma, mu)) == fun.cell_map[mu] for mu in sorted(bic.cells)
    )
    pairs = 0
    vert_ok = True
    for k1 in family:
        for k2 in family:
            if k1.g != k2.f:
                continue
            pairs += 1
            comp = ho_vcomp(k2, k1)
            if ext.value(comp) != d.vertical(ext.value(k2), ext.value(k1)):
                vert_ok = False
    whisk = 0
    whisk_ok = True
    for k in family:
        y = bic.arrow_dst(k.f)
        x = bic.arrow_src(k.f)
        for r in sorted(bic.arrows):
            if bic.arrow_src(r) == y:
                whisk += 1
                lhs = ext.value(ho_whisk("left", r, k))
                if lhs != d.whisker_l(fun.arr_map[r], ext.value(k)):
                    whisk_ok = False
            if bic.arrow_dst(r) == x:
                whisk += 1
                lhs = ext.value(ho_whisk("right", r, k))
                if lhs != d.whisker_r(ext.value(k), fun.arr_map[r]):
                    whisk_ok = False
    units_ok = all(
        ext.value(ho_identity(sigma, f)) == d.idc[fun.arr_map[f]]
        for f in sorted(bic.arrows)
    )
    ext.report = ExtensionReport(
        agrees, vert_ok, whisk_ok, units_ok, len(bic.cells), pairs, whisk
    )
    return ext


def perturbation_breaks(ext: ExtensionG, k: HoCell, other_value: str) -> bool:
    """True when overriding the extension's value on k with other_value breaks
    a verified equation (restriction along the projection, the forced value of
    marked cylinder classes, or vertical/whisker functoriality).  Defined for
    2-functor extensions, where whiskering needs no conjugation."""
    if ext.head is not None:
        raise StructureError("perturbation check runs on the 2-functor leg")
    fun = ext.fun
    d = fun.target
    if other_value == ext.value(k):
        return False

    def val(cell: HoCell) -> str:
        return other_value if cell.terms == k.terms else ext.value(cell)

    # restriction along the projection
    for mu in sorted(ext.sigma.bic.cells):
        ic = i_cell(ext.sigma, mu)
        if ic.terms == k.terms and val(ic) != fun.cell_map[mu]:
            return True
    # identity classes have forced values
    if not k.terms:
        return val(k) != d.idc[fun.arr_map[k.f]]
    # decomposition pins singleton homotopy classes to their hat composites
    if len(k.terms) == 1 and isinstance(k.terms[0], Homotopy):
        if val(k) != f_hat(fun, k.terms[0]):
            return True
    # vertical functoriality against the identity-free split of the sequence
    if len(k.terms) >= 2:
        left = ho_cell(ext.sigma, k.terms[:1])
        right = ho_cell(ext.sigma, k.terms[1:])
        if val(k) != d.vertical(val(right), val(left)):
            return True
    # whisker functoriality detects the rest
    bic = ext.sigma.bic
    for r in sorted(bic.arrows):
        if bic.arrow_src(r) == bic.arrow_dst(k.f):
            moved = ho_whisk("left", r, k)
            if val(moved) != d.whisker_l(fun.arr_map[r], val(k)):
                return True
    return False


def extend_pseudofunctor(
    fun: PseudofunctorData, sigma: SigmaClass, cap: int = 60
) -> ExtensionG:
    """Extension for arbitrary pseudofunctors via the head/tail factorization:
    extend the 2-functor head, then push values through the tail."""
    from .core import factorize

    rep = validate_pseudofunctor(fun)
    if not rep.ok:
        raise StructureError(f"{fun.name!r} fails validation")
    for s in sigma.sorted_members():
        if not is_quasiequivalence(fun.target, fun.arr_map[s]):
            raise StructureError(
                f"{fun.name!r} sends {s!r} outside the quasiequivalences"
            )
    if fun.is_2functor:
        return extend_2functor(fun, sigma, cap=cap)
    _, f1, f2 = factorize(fun)
    head_ext = extend_2functor(f2, sigma, cap=cap)
    return ExtensionG(
        fun,
        sigma,
        head=f2,
        tail=f1,
        report=head_ext.report,
        materialized=head_ext.materialized,
    )


@dataclass
class TwoCellExtensionReport:
    kind: str
    ok: bool
    failures: list[str]

    def to_json(self) -> dict:
        return {"kind": self.kind, "ok": self.ok, "failures": self.failures}


def extend_2cell_data(kind: str, data, sigma: SigmaClass, cap: int = 40):
    """Extensions of transformations (checked against materialized classes via
    the naturality square) and modifications (rechecked on arrows).  Values are
    unchanged; what is verified is that they stay lawful over the homotopy
    bicategory."""
    from .core import ModificationData, TransformationData

    failures: list[str] = []
    if kind == "transformation":
        assert isinstance(data, TransformationData)
        f_, g_ = data.fun_from, data.fun_to
        d = f_.target
        ext_f = extend_2functor(f_, sigma, cap=cap)
        ext_g = extend_2functor(g_, sigma, cap=cap)
        for k in ext_f.materialized:
            x = sigma.bic.arrow_src(k.f)
            y = sigma.bic.arrow_dst(k.f)
            lhs = d.vertical(
                data.comp_arr[k.g],
                d.whisker_r(ext_g.value(k), data.comp_obj[x]),
            )
            rhs = d.vertical(
                d.whisker_l(data.comp_obj[y], ext_f.value(k)),
                data.comp_arr[k.f],
            )
            if lhs != rhs:
                failures.append(f"PN2 fails on {k}: {lhs} != {rhs}")
        return data, TwoCellExtensionReport(kind, not failures, failures)
    if kind == "modification":
        assert isinstance(data, ModificationData)
        theta, eta = data.theta, data.eta
        f_ = theta.fun_from
        g_ = theta.fun_to
        d = f_.target
        c = f_.source
        for f in sorted(c.arrows):
            x, y = c.arrows[f]
            lhs = d.vertical(
                d.whisker_r(data.comp[y], f_.arr_map[f]), theta.comp_arr[f]
            )
            rhs = d.vertical(
                eta.comp_arr[f], d.whisker_l(g_.arr_map[f], data.comp[x])
            )
            if lhs != rhs:
                failures.append(f"PM fails on {f}: {lhs} != {rhs}")
        return data, TwoCellExtensionReport(kind, not failures, failures)
    raise StructureError(f"unknown extension kind {kind!r}")
