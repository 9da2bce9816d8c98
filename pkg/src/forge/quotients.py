"""Doubles along the boundary, free Z/2 quotients, and mod-2 cycle ledgers.

Only the covering-space theorem below produces quotient homology: a connected
double cover with H_1 = 0 forces H_1 of the quotient to be Z/2, because the
index-2 subgroup is perfect and so equals the commutator subgroup.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .forms import BilinearForm, congruent_mod2, direct_sum, hyperbolic
from .homcalc import FPAbelianGroup
from .reports import (DUALITY, FREE_ACTION, MAYER_VIETORIS, NOVIKOV, SPIN_GLUING, TRANSFER, WU,
                      Assumption, ManifoldReport)


class IncompatibleBoundary(ValueError):
    pass


class HypothesisFailure(ValueError):
    pass


class MissingEntry(KeyError):
    pass


class UnprovenancedEntry(ValueError):
    pass


@dataclass(frozen=True)
class DoubleSpec:
    half: ManifoldReport
    gluing: str = "sigma"
    name: str = ""


@dataclass(frozen=True)
class PairEntry:
    left: str
    right: str
    value: int
    provenance: str


def _tag(text: str) -> str:
    return text if re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_']*", text) and not text.isdigit() else f'"{text}"'


@dataclass(frozen=True)
class CycleLedger:
    name: str
    classes: tuple[str, ...] = ()
    entries: tuple[PairEntry, ...] = ()

    def __post_init__(self):
        if len(set(self.classes)) != len(self.classes):
            raise ValueError("duplicate class names")
        for e in self.entries:
            for c in (e.left, e.right):
                if c not in self.classes:
                    raise KeyError(f"ledger {self.name}: undeclared class {c!r}")
            if not e.provenance:
                raise UnprovenancedEntry(f"ledger {self.name}: entry {e.left}.{e.right} has no provenance")
            if '"' in e.provenance or "\n" in e.provenance:
                raise ValueError("provenance may not contain quotes or newlines")

    def lookup(self, a: str, b: str) -> int:
        found = {e.value % 2 for e in self.entries if (e.left, e.right) in ((a, b), (b, a))}
        if not found:
            raise MissingEntry(f"ledger {self.name}: no entry for {a}.{b}")
        if len(found) > 1:
            raise ValueError(f"ledger {self.name}: inconsistent entries for {a}.{b}")
        return found.pop()

    def to_dsl(self) -> str:
        parts = [f"class {c}" for c in self.classes]
        parts += [f"pair {e.left} {e.right} = {e.value} {_tag(e.provenance)}" for e in self.entries]
        return f"ledger {self.name} {{ {'; '.join(parts)} }}"


@dataclass(frozen=True)
class LedgerForm:
    form: BilinearForm
    even: bool
    hyperbolic: bool


@dataclass(frozen=True)
class QuotientSpec:
    """Quotient of ``double`` (or of a cover given directly as a report) by a free Z/2."""

    double: Union[DoubleSpec, ManifoldReport]
    deck_order: int = 2
    free: bool = True
    connected: bool = True
    ledger: Optional[CycleLedger] = None
    name: str = ""

    def cover(self) -> ManifoldReport:
        return double_report(self.double) if isinstance(self.double, DoubleSpec) else self.double


# -- reference pieces -----------------------------------------------------------

def ball_report() -> ManifoldReport:
    return ManifoldReport("B^4", 1, (1, 0, 0, 0, 0), FPAbelianGroup(), spin=True, signature=0,
                          h2=FPAbelianGroup(), boundary_h1=FPAbelianGroup())


def zero_trace_report(knot: str) -> ManifoldReport:
    """B^4 with a 0-framed 2-handle: H_2 = Z with form [0], boundary the 0-surgery."""
    return ManifoldReport(f"X_0({knot})", 2, (1, 0, 1, 0, 0), FPAbelianGroup(), spin=True, signature=0,
                          h2=FPAbelianGroup(1), boundary_h1=FPAbelianGroup(1),
                          derivation=("one 0-handle and one 2-handle", "intersection form [0] is even"))


def sphere_report(dim: int = 4) -> ManifoldReport:
    if dim != 4:
        raise ValueError("only S^4 is provided")
    return ManifoldReport("S^4", 2, (1, 0, 0, 0, 1), FPAbelianGroup(), spin=True, signature=0, h2=FPAbelianGroup())


# -- doubles ----------------------------------------------------------------------

def _dedupe(items) -> tuple[Assumption, ...]:
    out: list[Assumption] = []
    for a in items:
        if a not in out:
            out.append(a)
    return tuple(out)


def double_report(d: DoubleSpec) -> ManifoldReport:
    """Closed manifold ``X u_g X`` for a connected boundary that is a homology S^3 or S^1 x S^2.

    With H_1(X) = 0, Mayer-Vietoris gives H_1(double) = 0, duality gives b_3 = 0,
    and chi(double) = 2 chi(X) since the boundary has chi 0.
    """
    X = d.half
    if not X.h1.is_trivial:
        raise IncompatibleBoundary(f"{X.name}: H_1 = {X.h1}, doubles are only modeled for H_1 = 0")
    dY = X.boundary_h1
    if dY is None or dY.torsion or dY.free_rank > 1:
        raise IncompatibleBoundary(f"{X.name}: boundary H_1 = {dY}, need 0 or Z")
    chi = 2 * X.chi
    b2 = chi - 2
    if X.b2 is not None and b2 != 2 * X.b2:
        raise IncompatibleBoundary(f"{X.name}: chi and b_2 of the half are inconsistent with the double")
    steps = [f"chi = 2 * {X.chi} = {chi}",
             "H_1 = 0: H_1(X) + H_1(X) = 0 and H_0 of the boundary injects",
             "b_3 = b_1 = 0 by duality",
             f"b_2 = chi - 2 = {b2}"]
    assumptions = list(X.assumptions) + [MAYER_VIETORIS, DUALITY]
    spin = None
    if X.spin:
        spin = True
        assumptions.append(SPIN_GLUING)
        steps.append("both halves spin and the gluing carries spin structures")
    sig = None
    if X.signature is not None:
        sig = 2 * X.signature
        assumptions.append(NOVIKOV)
        steps.append(f"signature = 2 * {X.signature} by Novikov additivity")
    name = d.name or f"D({X.name})"
    return ManifoldReport(name, chi, (1, 0, b2, 0, 1), FPAbelianGroup(), spin=spin, signature=sig,
                          h2=FPAbelianGroup(b2), assumptions=_dedupe(assumptions), derivation=tuple(steps))


# -- quotients --------------------------------------------------------------------

def quotient_h1(q: QuotientSpec) -> FPAbelianGroup:
    """Z/2, provided the free Z/2 cover is connected with H_1 = 0; otherwise refuse."""
    if q.deck_order != 2 or not q.free or not q.connected:
        raise HypothesisFailure("need a free Z/2 action with connected cover")
    cover = q.cover()
    if not cover.h1.is_trivial:
        raise HypothesisFailure(f"cover has H_1 = {cover.h1}; no conclusion drawn")
    return FPAbelianGroup(0, (2,))


def mod2_h2_rank(h1: FPAbelianGroup, h2: FPAbelianGroup) -> int:
    """dim H_2(-; Z/2) = dim H_2 (x) Z/2 + dim Tor(H_1, Z/2)."""
    return h2.rank_mod(2) + h1.rank_mod(2)


def quotient_report(q: QuotientSpec) -> ManifoldReport:
    cover = q.cover()
    h1 = quotient_h1(q)
    if cover.chi % 2:
        raise HypothesisFailure(f"cover chi = {cover.chi} is odd")
    chi = cover.chi // 2
    b2 = chi - 2
    if b2 < 0:
        raise HypothesisFailure(f"chi = {chi} is impossible for a closed orientable quotient with b_1 = 0")
    # torsion of H_2 matches torsion of H_1 (duality + universal coefficients)
    h2 = FPAbelianGroup(b2, h1.torsion)
    steps = [f"H_1 = {h1} (perfect index-2 subgroup is the commutator subgroup)",
             f"chi = {cover.chi} / 2 = {chi}",
             "b_1 = b_3 = 0 from finite H_1 and duality",
             f"b_2 = chi - 2 = {b2}",
             f"H_2 = {h2}, so dim H_2(Z/2) = {mod2_h2_rank(h1, h2)}"]
    assumptions = list(cover.assumptions) + [FREE_ACTION, TRANSFER, DUALITY]
    spin = None
    if q.ledger is not None:
        lf = mod2_form_from_ledger(q.ledger)
        if lf.form.rank == mod2_h2_rank(h1, h2) and lf.form.det() == 1:
            spin = wu_spin_check(lf.form)
            assumptions.append(WU)
            steps.append(f"ledger classes span H_2(Z/2); form is {'even' if lf.even else 'odd'}")
        else:
            steps.append("ledger does not span H_2(Z/2); spin undetermined")
    name = q.name or f"{cover.name}/Z2"
    return ManifoldReport(name, chi, (1, 0, b2, 0, 1), h1, spin=spin, signature=0 if b2 == 0 else None,
                          h2=h2, assumptions=_dedupe(assumptions), derivation=tuple(steps))


# -- ledgers ----------------------------------------------------------------------

def mod2_form_from_ledger(l: CycleLedger) -> LedgerForm:
    n = len(l.classes)
    M = tuple(tuple(l.lookup(a, b) for b in l.classes) for a in l.classes)
    f = BilinearForm(M, "Z/2")
    even = f.is_even
    if n % 2:
        hyp = False
    elif n <= 6:
        target = direct_sum(*([hyperbolic("Z/2")] * (n // 2))) if n else BilinearForm((), "Z/2")
        hyp = congruent_mod2(f, target)
    else:
        hyp = even and f.det() == 1
    return LedgerForm(f, even, hyp)


def wu_spin_check(f: BilinearForm) -> bool:
    """Even mod-2 form means zero is characteristic, so w_2 = 0."""
    return f.mod2().is_even


def default_w_ledger() -> CycleLedger:
    return CycleLedger("W", ("F", "Gamma"), (
        PairEntry("F", "F", 0, "fiber_pushoff"),
        PairEntry("F", "Gamma", 1, "section_meets_fiber"),
        PairEntry("Gamma", "Gamma", 0, "section_square"),
    ))
