"""End-to-end localization pipeline and replayable certificates.

A certificate records everything needed to re-check that the projection into
the homotopy bicategory turns the marked arrows into equivalences: the 3-for-2
sweep, a w-split decomposition chain per marked arrow, an equivalence witness
in the homotopy bicategory per marked arrow (quasiinverse plus two invertible
classes with their equality derivations), a functoriality report for the
projection, and the probe family used.  Sections are deterministic, so equal
inputs give byte-identical JSON.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import Bicategory, StructureError
from .homotopy import cylinder_homotopy, retraction_cylinder
from .ho import (
    SCHEMA_VERSION,
    EqVerdict,
    HoCell,
    ProbeSet,
    enumerate_probes,
    f_hat_chain,
    ho_cell,
    ho_eq,
    ho_identity,
    ho_inverse,
    ho_vcomp,
    ho_whisk,
    hocell_from_json,
    i_cell,
)
from .sigma import (
    SigmaClass,
    check_three_for_two,
    find_w_split,
    w_split_decompose,
)


@dataclass(frozen=True)
class HoEquivalenceSide:
    """One of the two invertible classes of an equivalence witness, with the
    derivations that re-check its invertibility."""

    cell: HoCell
    inverse: HoCell
    cancel_left: EqVerdict  # inverse o cell vs identity
    cancel_right: EqVerdict  # cell o inverse vs identity

    @property
    def ok(self) -> bool:
        return self.cancel_left.is_equal and self.cancel_right.is_equal

    def to_json(self) -> dict:
        return {
            "hocell": self.cell.to_json(),
            "inverse": self.inverse.to_json(),
            "cancel_left": self.cancel_left.to_json(),
            "cancel_right": self.cancel_right.to_json(),
        }


@dataclass(frozen=True)
class HoEquivalence:
    arrow: str
    quasiinverse: str
    to_id_src: HoEquivalenceSide  # quasiinverse * arrow => id
    to_id_dst: HoEquivalenceSide  # arrow * quasiinverse => id

    def to_json(self) -> dict:
        return {
            "arrow": self.arrow,
            "quasiinverse": self.quasiinverse,
            "to_id_src": self.to_id_src.to_json(),
            "to_id_dst": self.to_id_dst.to_json(),
        }


@dataclass
class LocalizationCertificate:
    bicategory: str
    sigma: tuple[str, ...]
    status: str  # ok | three-for-two-failed | decomposition-failed | derivation-failed
    three_for_two: dict
    decompositions: list[dict] = field(default_factory=list)
    equivalences: list[HoEquivalence] = field(default_factory=list)
    i_functoriality: dict = field(default_factory=dict)
    probes_used: list[str] = field(default_factory=list)
    max_len: int = 4
    budget: int = 8

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "bicategory": self.bicategory,
            "sigma": sorted(self.sigma),
            "status": self.status,
            "three_for_two": self.three_for_two,
            "decompositions": self.decompositions,
            "equivalences": [e.to_json() for e in self.equivalences],
            "i_functoriality": self.i_functoriality,
            "probes_used": sorted(self.probes_used),
            "max_len": self.max_len,
            "budget": self.budget,
        }


@dataclass(frozen=True)
class _Witness:
    """Working form of an equivalence witness before derivations are attached."""

    arrow: str
    quasiinverse: str
    u: HoCell  # quasiinverse * arrow => id_src
    v: HoCell  # arrow * quasiinverse => id_dst


def _base_witness(sigma: SigmaClass, arrow: str) -> _Witness:
    """Witness for a w-split marked arrow from its splitting pair: one side is
    the projected splitting cell, the other the tautological cylinder class."""
    bic = sigma.bic
    ws = find_w_split(bic, arrow)
    if not ws.is_w_split:
        raise StructureError(f"arrow {arrow!r} is not w-split")
    pair = ws.as_section or ws.as_retraction
    assert pair is not None
    s, r, alpha = pair.section, pair.retraction, pair.cell
    cyl = retraction_cylinder(sigma, s, r, alpha)
    hc = ho_cell(sigma, (cylinder_homotopy(cyl),))  # s*r => id_dst(s)
    ia = i_cell(sigma, alpha)  # r*s => id_src(s)
    if arrow == s:
        return _Witness(arrow, r, ia, hc)
    return _Witness(arrow, s, hc, ia)


def _compose_witness(sigma: SigmaClass, outer: _Witness, inner: _Witness) -> _Witness:
    """Witness for outer.arrow * inner.arrow from witnesses of the factors."""
    bic = sigma.bic
    g1, g2 = outer.arrow, inner.arrow
    q1, q2 = outer.quasiinverse, inner.quasiinverse
    comp = bic.compose1(g1, g2)
    q = bic.compose1(q2, q1)
    u = ho_vcomp(inner.u, ho_whisk("right", g2, ho_whisk("left", q2, outer.u)))
    v = ho_vcomp(outer.v, ho_whisk("right", q1, ho_whisk("left", g1, inner.v)))
    return _Witness(comp, q, u, v)


def _adjust_witness(sigma: SigmaClass, wit: _Witness, arrow: str, iso: str) -> _Witness:
    """Transport a witness along an invertible cell composite => arrow."""
    bic = sigma.bic
    if bic.cells[iso] != (wit.arrow, arrow):
        raise StructureError(f"iso cell {iso!r} is not {wit.arrow} => {arrow}")
    inv = bic.inverse(iso)
    if inv is None:
        raise StructureError(f"cell {iso!r} is not invertible")
    u = ho_vcomp(wit.u, ho_whisk("left", wit.quasiinverse, i_cell(sigma, inv)))
    v = ho_vcomp(wit.v, ho_whisk("right", wit.quasiinverse, i_cell(sigma, inv)))
    return _Witness(arrow, wit.quasiinverse, u, v)


def _attach_derivations(
    wit: _Witness, probes: ProbeSet, budget: int
) -> HoEquivalence | None:
    sides = []
    for cell in (wit.u, wit.v):
        inv = ho_inverse(cell)
        left = ho_eq(ho_vcomp(inv, cell), ho_identity(cell.sigma, cell.f), probes, budget)
        right = ho_eq(ho_vcomp(cell, inv), ho_identity(cell.sigma, cell.g), probes, budget)
        side = HoEquivalenceSide(cell, inv, left, right)
        if not side.ok:
            return None
        sides.append(side)
    return HoEquivalence(wit.arrow, wit.quasiinverse, sides[0], sides[1])


def _i_functoriality(sigma: SigmaClass, probes: ProbeSet, budget: int) -> dict:
    """The projection preserves identities and both compositions, decided by
    the equality machinery on every table entry."""
    bic = sigma.bic
    failures: list[str] = []
    checked = 0
    for f in sorted(bic.arrows):
        checked += 1
        if i_cell(sigma, bic.idc[f]).terms != ():
            failures.append(f"identity {f}")
    for (b, a), c in sorted(bic.vcomp.items()):
        checked += 1
        lhs = i_cell(sigma, c)
        rhs = ho_vcomp(i_cell(sigma, b), i_cell(sigma, a))
        if not ho_eq(lhs, rhs, probes, budget).is_equal:
            failures.append(f"vcomp {b} . {a}")
    for (g, a), c in sorted(bic.lwhisk.items()):
        checked += 1
        lhs = i_cell(sigma, c)
        rhs = ho_whisk("left", g, i_cell(sigma, a))
        if not ho_eq(lhs, rhs, probes, budget).is_equal:
            failures.append(f"lwhisk {g} * {a}")
    for (a, f), c in sorted(bic.rwhisk.items()):
        checked += 1
        lhs = i_cell(sigma, c)
        rhs = ho_whisk("right", f, i_cell(sigma, a))
        if not ho_eq(lhs, rhs, probes, budget).is_equal:
            failures.append(f"rwhisk {a} * {f}")
    return {"ok": not failures, "checked": checked, "failures": failures}


def default_probe_targets(sigma: SigmaClass) -> list[Bicategory]:
    from .library import DEFAULT_PROBE_TARGETS, load_fixture_bicategory

    out: list[Bicategory] = []
    for name in DEFAULT_PROBE_TARGETS:
        if name == sigma.bic.name:
            continue  # the bicategory itself is handled by enumerate_probes
        out.append(load_fixture_bicategory(name))
    return out


def localize(
    sigma: SigmaClass,
    probes: ProbeSet | None = None,
    max_len: int = 4,
    budget: int = 8,
) -> LocalizationCertificate:
    """Run the whole pipeline and assemble a certificate.

    Fails fast with a witness when 3-for-2 does not hold, and with the arrow
    name when some marked arrow has no w-split decomposition within max_len.
    """
    bic = sigma.bic
    if max_len < 1 or budget < 1:
        raise StructureError("bounds must be >= 1")
    cert = LocalizationCertificate(
        bicategory=bic.name,
        sigma=sigma.sorted_members(),
        status="ok",
        three_for_two={"ok": True, "witness": None},
        max_len=max_len,
        budget=budget,
    )
    violation = check_three_for_two(sigma)
    if violation is not None:
        cert.status = "three-for-two-failed"
        cert.three_for_two = {"ok": False, "witness": violation.to_json()}
        return cert

    if probes is None:
        probes = enumerate_probes(sigma, default_probe_targets(sigma))
    cert.probes_used = list(probes.names())

    decs = []
    for arrow in sigma.sorted_members():
        dec = w_split_decompose(sigma, arrow, max_len)
        if dec is None:
            cert.status = "decomposition-failed"
            cert.decompositions.append({"arrow": arrow, "chain": None, "cell": None})
            return cert
        decs.append(dec)
        cert.decompositions.append(dec.to_json())

    for dec in decs:
        wit = _base_witness(sigma, dec.chain[-1])
        for g in reversed(dec.chain[:-1]):
            wit = _compose_witness(sigma, _base_witness(sigma, g), wit)
        if wit.arrow != dec.arrow or not bic.is_identity_cell(dec.cell):
            wit = _adjust_witness(sigma, wit, dec.arrow, dec.cell)
        eq = _attach_derivations(wit, probes, budget)
        if eq is None:
            cert.status = "derivation-failed"
            return cert
        cert.equivalences.append(eq)

    cert.i_functoriality = _i_functoriality(sigma, probes, budget)
    if not cert.i_functoriality["ok"]:
        cert.status = "derivation-failed"
    return cert


def replay_certificate(
    sigma: SigmaClass, cert_json: dict, probes: ProbeSet | None = None
) -> tuple[bool, list[str]]:
    """Re-check every recorded derivation of a certificate against the loaded
    bicategory (and a probe set, freshly enumerated unless supplied)."""
    bic = sigma.bic
    problems: list[str] = []
    if cert_json.get("schema_version") != SCHEMA_VERSION:
        problems.append("schema_version mismatch")
        return False, problems
    if cert_json.get("status") != "ok":
        problems.append(f"certificate status is {cert_json.get('status')!r}")
        return False, problems
    if set(cert_json.get("sigma", [])) != set(sigma.members):
        problems.append("marked class does not match the certificate")
    if check_three_for_two(sigma) is not None:
        problems.append("3-for-2 no longer holds")
    if probes is None:
        probes = enumerate_probes(sigma, default_probe_targets(sigma))
    budget = int(cert_json.get("budget", 8))

    for dec in cert_json.get("decompositions", []):
        arrow, chain, cell = dec["arrow"], dec["chain"], dec["cell"]
        if chain is None:
            problems.append(f"stored decomposition for {arrow} is empty")
            continue
        composite = bic.compose_path(chain)
        if bic.cells.get(cell) != (composite, arrow) or not bic.is_invertible(cell):
            problems.append(f"decomposition iso for {arrow} does not re-check")
        for g in chain:
            if g not in sigma or not find_w_split(bic, g).is_w_split:
                problems.append(f"chain arrow {g} for {arrow} is not a w-split member")

    for entry in cert_json.get("equivalences", []):
        arrow = entry["arrow"]
        for side_name in ("to_id_src", "to_id_dst"):
            side = entry[side_name]
            try:
                cell = hocell_from_json(sigma, side["hocell"])
                inv = hocell_from_json(sigma, side["inverse"])
                left = ho_eq(ho_vcomp(inv, cell), ho_identity(sigma, cell.f), probes, budget)
                right = ho_eq(ho_vcomp(cell, inv), ho_identity(sigma, cell.g), probes, budget)
                if not (left.is_equal and right.is_equal):
                    problems.append(f"{arrow}/{side_name}: invertibility does not re-derive")
                for fun in probes.probes:
                    if f_hat_chain(fun, ho_vcomp(inv, cell)) != fun.target.idc[
                        fun.arr_map[cell.f]
                    ]:
                        problems.append(f"{arrow}/{side_name}: probe {fun.name} separates")
            except StructureError as exc:
                problems.append(f"{arrow}/{side_name}: {exc}")

    if not _i_functoriality(sigma, probes, budget)["ok"]:
        problems.append("projection functoriality does not re-check")
    return not problems, problems
