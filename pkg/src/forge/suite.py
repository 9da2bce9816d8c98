"""The verification suite: named checks over the default (or user-supplied) construction."""

from __future__ import annotations

import fnmatch
import json
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Callable, Iterable, Optional

import numpy as np

from . import bundles, forms, homcalc, knots, mcg, quotients
from .bundles import BundleSpec, LuttingerDatum, SurgeredBundleSpec
from .dsl import Claim, FormSpec, Node, format_expr, parse
from .knots import KnotRecord
from .mcg import BoundExhausted, TwistWord
from .quotients import CycleLedger
from .reports import MERIDIANS, NOVIKOV, SLICE_FAMILY, Assumption

DEFAULT_BOUND = 16


# -- workspace ----------------------------------------------------------------------

@dataclass
class Workspace:
    """Named constructions the checks read from."""

    bundle: BundleSpec
    surgeries: dict[str, LuttingerDatum]
    ledgers: dict[str, CycleLedger]
    forms: dict[str, FormSpec]
    knots: dict[str, KnotRecord]
    claims: list[Claim] = field(default_factory=list)

    @classmethod
    def default(cls) -> "Workspace":
        text = resources.files("forge.data").joinpath("construction.dsl").read_text(encoding="utf-8")
        ws = cls(bundle=bundles.default_bundle(), surgeries={}, ledgers={}, forms={}, knots=knots.load_table())
        ws.merge(parse(text))
        return ws

    def merge(self, nodes: Iterable[Node]) -> "Workspace":
        for node in nodes:
            if isinstance(node, BundleSpec):
                self.bundle = node
            elif isinstance(node, LuttingerDatum):
                # one surgery per base direction; a new one replaces the old
                self.surgeries[node.direction] = node
            elif isinstance(node, CycleLedger):
                self.ledgers[node.name] = node
            elif isinstance(node, FormSpec):
                self.forms[node.name] = node
            elif isinstance(node, KnotRecord):
                self.knots[node.name] = node
            elif isinstance(node, Claim):
                self.claims.append(node)
        return self

    def v_spec(self) -> SurgeredBundleSpec:
        return SurgeredBundleSpec(self.bundle, tuple(self.surgeries[d] for d in sorted(self.surgeries)))


# -- checks -------------------------------------------------------------------------

@dataclass(frozen=True)
class Outcome:
    ok: bool
    value: Any
    assumptions: tuple[Assumption, ...] = ()


@dataclass(frozen=True)
class CheckSpec:
    id: str
    description: str
    anchor: str
    run: Callable[[Workspace, int], Outcome]
    expected: str = "pass"
    aliases: tuple[str, ...] = ()

    def matches(self, pattern: Optional[str]) -> bool:
        if not pattern:
            return True
        names = (self.id,) + self.aliases
        return any(fnmatch.fnmatchcase(n, pattern) or pattern == n for n in names)


@dataclass(frozen=True)
class CheckResult:
    id: str
    status: str
    value: Any
    assumptions: tuple[str, ...]
    ms: float

    def as_dict(self) -> dict:
        return {"id": self.id, "status": self.status, "value": self.value,
                "assumptions": list(self.assumptions), "ms": self.ms}


def _tw(text: str) -> TwistWord:
    from .dsl import parse_expr
    return parse_expr(text)


def _eq(lhs: str | TwistWord, rhs: str | TwistWord, bound: int) -> bool:
    lhs = _tw(lhs) if isinstance(lhs, str) else lhs
    rhs = _tw(rhs) if isinstance(rhs, str) else rhs
    return mcg.mc_equal(mcg.evaluate(lhs), mcg.evaluate(rhs), bound)


def _all_equal(pairs: dict[str, tuple[str, str]], bound: int) -> Outcome:
    results = {k: _eq(a, b, bound) for k, (a, b) in pairs.items()}
    return Outcome(all(results.values()), results)


def check_commutator(ws: Workspace, bound: int) -> Outcome:
    lhs, rhs = _tw("a b d^-1 e^-1"), _tw("comm(a b, phi)")
    w = mcg.outer_witness(mcg.evaluate(lhs), mcg.evaluate(rhs), bound)
    value = {"lhs": format_expr(lhs), "rhs": format_expr(rhs)}
    if w is None:
        return Outcome(False, {**value, "refuted": "orientation or H_1 action differs"})
    return Outcome(True, {**value, "witness": mcg.SURFACE.format(w), "witness_length": len(w)})


def check_conjugated(ws: Workspace, bound: int) -> Outcome:
    return _all_equal({"conj(a b d^-1 e^-1, e^-1) == a b e^-1 d^-1":
                       ("conj(a b d^-1 e^-1, e^-1)", "a b e^-1 d^-1")}, bound)


def check_phi(ws: Workspace, bound: int) -> Outcome:
    return _all_equal({
        "phi^2 == 1": ("phi phi", "1"),
        "phi a phi^-1 == e": ("conj(a, phi)", "e"),
        "phi b phi^-1 == d": ("conj(b, phi)", "d"),
        "phi c phi^-1 == c": ("conj(c, phi)", "c"),
    }, bound)


def check_epsilon(ws: Workspace, bound: int) -> Outcome:
    eps = mcg.generator("eps")
    out = _all_equal({
        "eps^2 == 1": ("eps eps", "1"),
        "eps a eps^-1 == e^-1": ("conj(a, eps)", "e^-1"),
        "eps b eps^-1 == d^-1": ("conj(b, eps)", "d^-1"),
        "eps c eps^-1 == c^-1": ("conj(c, eps)", "c^-1"),
    }, bound)
    value = {**out.value, "orientation": eps.orientation}
    return Outcome(out.ok and eps.orientation == -1, value)


def check_gluing(ws: Workspace, bound: int) -> Outcome:
    ok = mcg.check_gluing_condition(_tw("a b"), _tw("e^-1 d^-1"), mcg.generator("eps"), bound)
    return Outcome(ok, {"eps (a b) eps^-1 == e^-1 d^-1": ok})


def check_relations(ws: Workspace, bound: int) -> Outcome:
    value: dict[str, Any] = {}
    ok = True
    for i, x in enumerate(mcg.CHAIN):
        for y in mcg.CHAIN[i + 1:]:
            j = mcg.CHAIN.index(y)
            if j == i + 1:
                key, holds = f"braid {x}{y}", _eq(f"{x} {y} {x}", f"{y} {x} {y}", bound)
            else:
                key, holds = f"commute {x}{y}", _eq(f"{x} {y}", f"{y} {x}", bound)
            value[key] = holds
            ok &= holds
    J = mcg.omega_matrix()
    for x in mcg.CHAIN:
        M = mcg.generator(x).h1_matrix()
        tv = bool(np.array_equal(M, mcg.transvection(mcg.curve_class(x))))
        sym = bool(np.array_equal(M.T @ J @ M, J))
        valid = mcg.twist_auto(x).is_valid()
        value[f"{x}: transvection, symplectic, valid"] = [tv, sym, valid]
        ok &= tv and sym and valid
    return Outcome(ok, value)


def check_s30q(ws: Workspace, bound: int) -> Outcome:
    M = mcg.evaluate(_tw("a b d^-1 e^-1")).h1_matrix()
    h1 = homcalc.mapping_torus_h1(M)
    n = len(M)
    d = homcalc.det([[int(i == j) - int(M[i][j]) for j in range(n)] for i in range(n)])
    delta = knots.alexander(ws.knots["Q"].seifert)
    cp = homcalc.charpoly(M)
    ok = str(h1) == "Z" and abs(d) == abs(int(delta(1))) and cp == list(delta.coeffs)
    return Outcome(ok, {"h1": str(h1), "det(I-M)": d, "alexander_Q(1)": int(delta(1)),
                        "charpoly": cp, "alexander_Q": str(delta)})


def check_boundary_monodromy(ws: Workspace, bound: int) -> Outcome:
    ok = mcg.mc_equal(ws.bundle.boundary_monodromy(), mcg.evaluate(_tw("a b d^-1 e^-1")), bound)
    return Outcome(ok, {"[m_beta, m_alpha] == a b d^-1 e^-1": ok})


def check_tori(ws: Workspace, bound: int) -> Outcome:
    """Each surgery torus is invariant under its monodromy and has a dual curve."""
    value: dict[str, Any] = {}
    ok = True
    spec = ws.v_spec()
    alpha = bundles._complement_alphabet(spec.surgeries)
    dual = {"c": "b", "e": "z"}
    for d in spec.surgeries:
        fixed = mcg.fixes_curve(ws.bundle.monodromy(d.direction), mcg.curve_word(d.fiber_curve), bound)
        mer = bundles.eval_expression(d.meridian, spec, alpha) if d.meridian is not None else None
        null = mer is not None and not any(mer.abelianize(len(alpha)))
        entry = {"monodromy fixes curve": fixed, "meridian null-homologous": null}
        if d.fiber_curve in dual:
            entry["dual curve pairing"] = mcg.omega(mcg.curve_class(dual[d.fiber_curve]),
                                                    mcg.curve_class(d.fiber_curve))
            ok &= abs(entry["dual curve pairing"]) == 1
        value[d.name or d.direction] = entry
        ok &= fixed and null
    return Outcome(ok and len(spec.surgeries) == 2, value, (MERIDIANS,))


def check_homology_r(ws: Workspace, bound: int) -> Outcome:
    P = bundles.bundle_presentation(ws.bundle)
    h1 = homcalc.abelianization(P)
    Ma = ws.bundle.monodromy("alpha").h1_matrix()
    Mb = ws.bundle.monodromy("beta").h1_matrix()
    n = len(Ma)
    block = [[int(i == j) - int(Ma[i][j]) for j in range(n)] + [int(i == j) - int(Mb[i][j]) for j in range(n)]
             for i in range(n)]
    fiber = homcalc.FPAbelianGroup.from_relations(n, [list(c) for c in zip(*block)])
    cross = homcalc.FPAbelianGroup(fiber.free_rank + 2, fiber.torsion)
    chi = bundles.euler_characteristic(ws.bundle)
    ok = str(h1) == "Z^2" and h1 == cross and chi == 2
    return Outcome(ok, {"h1": str(h1), "fiber_coker_plus_Z2": str(cross), "chi": chi})


def _v_report(ws: Workspace):
    return bundles.v_report(ws.v_spec())


def check_homology_v(ws: Workspace, bound: int) -> Outcome:
    spec = ws.v_spec()
    P = bundles.surgery_presentation(spec)
    h1 = homcalc.abelianization(P)
    h1_meridians_dead = homcalc.abelianization(bundles.surgery_presentation(spec, meridians_trivial=True))
    killed = bundles.kill_fiber(P)
    rep = bundles.v_report(spec)
    ok = (h1.is_trivial and h1_meridians_dead == h1 and rep.chi == 2 and killed.is_trivial_presentation
          and rep.spin is True and str(rep.h2) == "Z" and str(rep.boundary_h1) == "Z")
    value = {"h1": str(h1), "chi": rep.chi, "fiber_killed_generators": list(killed.generators.names),
             "h2": str(rep.h2), "boundary_h1": str(rep.boundary_h1), "spin": rep.spin,
             "betti": list(rep.betti)}
    return Outcome(ok, value, rep.assumptions)


def check_sections(ws: Workspace, bound: int) -> Outcome:
    spec = ws.v_spec()
    rep = bundles.v_report(spec)
    gens = {s.name: bundles.section_generates_relative_h2(s) for s in spec.sections}
    ok = str(rep.h2) == "Z" and all(gens.values()) and len(gens) == 2
    return Outcome(ok, gens, rep.assumptions)


def check_canonical(ws: Workspace, bound: int) -> Outcome:
    ev = bundles.canonical_fiber_evaluation(ws.bundle.fiber_genus)
    return Outcome(ev == (2, -2), {"canonical_on_fiber": list(ev), "c1_spinc_pm_on_fiber": list(ev)})


def _w_pipeline(ws: Workspace):
    V = _v_report(ws)
    Z = quotients.double_report(quotients.DoubleSpec(V, name="Z"))
    W = quotients.quotient_report(quotients.QuotientSpec(quotients.DoubleSpec(V, name="Z"),
                                                         ledger=ws.ledgers.get("W"), name="W"))
    return Z, W


def check_quotient_w(ws: Workspace, bound: int) -> Outcome:
    Z, W = _w_pipeline(ws)
    lf = quotients.mod2_form_from_ledger(ws.ledgers["W"])
    ok = (Z.chi == 4 and Z.b2 == 2 and Z.h1.is_trivial and str(W.h1) == "Z/2" and W.chi == 2
          and W.b2 == 0 and lf.hyperbolic and lf.even and W.spin is True)
    value = {"Z": Z.as_dict(), "W": W.as_dict(), "ledger_form": [list(r) for r in lf.form.matrix],
             "hyperbolic": lf.hyperbolic, "even": lf.even}
    return Outcome(ok, value, W.assumptions)


def check_quotient_b(ws: Workspace, bound: int) -> Outcome:
    k = ws.knots["4_1"]
    X = quotients.zero_trace_report(k.name)
    D = quotients.DoubleSpec(X, name=f"D(X_0({k.name}))")
    cover = quotients.double_report(D)
    B = quotients.quotient_report(quotients.QuotientSpec(D, name="B"))
    ok = k.strongly_neg_amphichiral and str(B.h1) == "Z/2" and B.chi == 2 and cover.chi == 4 and cover.b2 == 2
    return Outcome(ok, {"cover": cover.as_dict(), "B": B.as_dict(),
                        "strongly_neg_amphichiral": k.strongly_neg_amphichiral},
                   B.assumptions + (SLICE_FAMILY,))


def check_forms_a(ws: Workspace, bound: int) -> Outcome:
    V = _v_report(ws)
    v_part = (V.b2, V.signature)
    d_form = forms.direct_sum(forms.form([[0]]), forms.diag(-1, -1, -1, -1))
    d_part = (d_form.rank, forms.signature(d_form))
    total = forms.novikov_sum([v_part, d_part])
    classes = forms.classify_parametric_a()
    names = {f"n {'odd' if p else 'even'}": c.name for p, c in classes.items()}
    user = ws.forms.get("A")
    user_name = forms.classify_indefinite(user.form()).name if user else None
    target = "⟨1⟩⊕5⟨−1⟩"
    ok = (total == (6, -4) and all(n == target for n in names.values())
          and all((c.rank, c.signature) == total for c in classes.values())
          and user_name in (None, target))
    value = {"V": list(v_part), "D": list(d_part), "A": list(total), "classes": names, "form_A": user_name}
    return Outcome(ok, value, V.assumptions + (NOVIKOV,))


def check_knots(ws: Workspace, bound: int) -> Outcome:
    k41, q = ws.knots["4_1"], ws.knots["Q"]
    a_brute, a_levine = knots.arf(k41.seifert), knots.arf_from_alexander(k41.seifert)
    det41, sig41 = knots.determinant_and_signature(k41.seifert)
    dq = knots.alexander(q.seifert)
    eligible = knots.slice_family_eligible(k41)
    ok = (a_brute == a_levine == 1 and det41 == 5 and sig41 == 0 and dq.leading == 1
          and dq.span == 2 * q.genus == 4 and eligible)
    value = {"arf_4_1": a_brute, "arf_4_1_levine": a_levine, "det_4_1": det41, "sigma_4_1": sig41,
             "alexander_4_1": str(knots.alexander(k41.seifert)), "alexander_Q": str(dq),
             "alexander_Q_degree": dq.span, "eligible_4_1": eligible}
    return Outcome(ok, value, (SLICE_FAMILY,))


CHECKS: tuple[CheckSpec, ...] = (
    CheckSpec("bundles.boundary-monodromy", "monodromy around the puncture",
              "boundary monodromy of R equals [ab, phi]", check_boundary_monodromy),
    CheckSpec("bundles.canonical", "canonical class on a fiber",
              "K . F = 2g - 2 = 2 and c_1 of the conjugate structure gives -2", check_canonical),
    CheckSpec("bundles.sections", "sections generate relative H_2",
              "sections meeting F once generate H_2(V, dV)", check_sections),
    CheckSpec("bundles.tori", "surgery tori are well defined",
              "T_alpha = (c, alpha'), T_beta = (e, beta') with null-homologous meridians", check_tori),
    CheckSpec("forms.A", "form of A", "b_2(A) = 6, sigma(A) = -4, form <1> + 5<-1>", check_forms_a),
    CheckSpec("homology.R", "H_1 and chi of R", "H_1(R) generated by alpha', beta'; chi(R) = 2",
              check_homology_r),
    CheckSpec("homology.V", "homology of V", "H_1(V) = 0, chi(V) = 2, pi_1(V) normally generated by pi_1(F)",
              check_homology_v, aliases=("h1v",)),
    CheckSpec("homology.s30q", "fiber homology dies in the 0-surgery",
              "H_1 of the mapping torus of a b d^-1 e^-1 is Z", check_s30q),
    CheckSpec("knots", "knot invariants", "4_1 has Arf 1 and g_4 = 1; Q is fibered of genus 2", check_knots),
    CheckSpec("mcg.commutator-identity", "monodromy is a commutator", "a b d^-1 e^-1 = [ab, phi]",
              check_commutator),
    CheckSpec("mcg.conjugated-monodromy", "conjugating by e^-1", "e^-1 (a b d^-1 e^-1) e = a b e^-1 d^-1",
              check_conjugated),
    CheckSpec("mcg.epsilon-table", "epsilon conjugation table", "eps^2 = 1, orientation -1; eps a eps^-1 = e^-1, eps c eps^-1 = c^-1",
              check_epsilon),
    CheckSpec("mcg.gluing", "free orientation-reversing bundle map", "eps (ab) eps^-1 = e^-1 d^-1",
              check_gluing),
    CheckSpec("mcg.phi-table", "phi conjugation table", "phi^2 = 1; phi a phi^-1 = e, phi b phi^-1 = d, phi c phi^-1 = c",
              check_phi),
    CheckSpec("mcg.relations", "chain relations", "braid and commutation relations; twists act by transvections",
              check_relations),
    CheckSpec("quotient.B", "quotient of the doubled 0-trace", "H_1(B) = Z/2, chi(B) = 2", check_quotient_b),
    CheckSpec("quotient.W", "Z and its quotient W", "chi(Z) = 4, H_1(W) = Z/2, b_2(W) = 0, W spin",
              check_quotient_w),
)


def _claim_check(c: Claim) -> CheckSpec:
    def run(ws: Workspace, bound: int) -> Outcome:
        ok = _eq(c.lhs, c.rhs, bound)
        return Outcome(ok, {f"{format_expr(c.lhs)} == {format_expr(c.rhs)}": ok})
    return CheckSpec(f"claim.{c.id}", "user claim", "user file", run)


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def run_check(spec: CheckSpec, ws: Workspace, bound: int, timing: bool = True) -> CheckResult:
    t0 = time.perf_counter()
    try:
        out = spec.run(ws, bound)
        status = "pass" if out.ok else "fail"
        value, assumptions = out.value, out.assumptions
    except BoundExhausted as exc:
        status, value, assumptions = "inconclusive", {"bound": bound, "reason": str(exc)}, ()
    except Exception as exc:  # failures are data
        status, value, assumptions = "fail", {"error": f"{type(exc).__name__}: {exc}"}, ()
    ms = round((time.perf_counter() - t0) * 1000, 1) if timing else 0
    labels = tuple(dict.fromkeys(str(a) for a in assumptions))
    return CheckResult(spec.id, status, _jsonable(value), labels, ms)


def run_suite(pattern: Optional[str] = None, bound: int = DEFAULT_BOUND,
              workspace: Optional[Workspace] = None, timing: bool = True) -> list[CheckResult]:
    ws = workspace or Workspace.default()
    specs = list(CHECKS) + [_claim_check(c) for c in ws.claims]
    selected = sorted((s for s in specs if s.matches(pattern)), key=lambda s: s.id)
    return [run_check(s, ws, bound, timing) for s in selected]


def exit_code(results: Iterable[CheckResult]) -> int:
    statuses = {r.status for r in results}
    if "fail" in statuses:
        return 1
    if "inconclusive" in statuses:
        return 2
    return 0


def to_json(results: list[CheckResult], bound: int) -> str:
    counts = {s: sum(r.status == s for r in results) for s in ("pass", "fail", "inconclusive")}
    doc = {"bound": bound, "summary": counts, "checks": [r.as_dict() for r in results]}
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def to_text(results: list[CheckResult], bound: int) -> str:
    lines = []
    for r in results:
        if r.status == "pass":
            tag = "PASS*" if r.assumptions else "PASS"
        elif r.status == "inconclusive":
            tag = f"INCONCLUSIVE(bound={bound})"
        else:
            tag = "FAIL"
        lines.append(f"{tag:<22} {r.id:<30} {r.ms:>8.1f} ms")
        if r.assumptions:
            labels = ", ".join(a.split(":", 1)[0] for a in r.assumptions)
            lines.append(f"{'':<22}   assumes {labels}")
        if r.status != "pass":
            lines.append(f"{'':<22}   {json.dumps(r.value, ensure_ascii=False)}")
    counts = {s: sum(r.status == s for r in results) for s in ("pass", "fail", "inconclusive")}
    lines.append(f"{len(results)} checks: {counts['pass']} pass, {counts['fail']} fail, "
                 f"{counts['inconclusive']} inconclusive (bound {bound})")
    if any(r.assumptions for r in results if r.status == "pass"):
        lines.append("PASS* = holds given the listed assumptions")
    return "\n".join(lines) + "\n"
