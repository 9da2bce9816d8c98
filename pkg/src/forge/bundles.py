"""Genus-2 surface bundles over the once-punctured torus and their torus surgeries.

The bundle group is the semidirect product ``pi_1(F) x| F(alpha', beta')`` with
relators ``t x t^-1 = m_t(x)`` for each base generator ``t`` and fiber
generator ``x``.  Torus surgeries are recorded homologically: each adds a
meridian generator ``mu``, a relator tying ``mu`` to its free-homotopy
expression, and the filling relator ``mu * pushoff``.  The complement's
fundamental group is not derived; the meridian expressions are inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import mcg
from .homcalc import FPAbelianGroup, GroupPresentation, abelianization, mapping_torus_h1, quotient_presentation
from .mcg import Comm, Conj, Gen, MappingClass, TwistWord
from .reports import DUALITY, MERIDIANS, PUSHOFF, WU, ManifoldReport
from .words import Alphabet, Word

FIBER_GENS = ("x1", "y1", "x2", "y2")
BASE = {"alpha": "alpha'", "beta": "beta'"}
MERIDIAN = {"alpha": "mu_alpha", "beta": "mu_beta"}


class MissingMeridian(ValueError):
    """A torus surgery was given without its meridian expression."""


@dataclass(frozen=True)
class BundleSpec:
    monodromy_alpha: TwistWord
    monodromy_beta: TwistWord
    fiber_genus: int = 2
    base: str = "punctured_torus"
    name: str = "R"

    def __post_init__(self):
        if self.fiber_genus != 2:
            raise ValueError("only genus-2 fibers are modeled")
        if self.base not in ("punctured_torus", "torus"):
            raise ValueError(f"unknown base {self.base!r}")

    def monodromy(self, direction: str) -> MappingClass:
        return mcg.evaluate(self.monodromy_alpha if direction == "alpha" else self.monodromy_beta)

    def boundary_monodromy(self) -> MappingClass:
        """``[m_beta, m_alpha]``: the monodromy around the puncture."""
        return mcg.evaluate(TwistWord((Comm(self.monodromy_beta, self.monodromy_alpha),)))

    def to_dsl(self) -> str:
        from .dsl import format_expr

        head = "bundle" if self.name == "R" else f"bundle {self.name}"
        base = "" if self.base == "punctured_torus" else f" base {self.base};"
        return (f"{head} {{ fiber_genus {self.fiber_genus};{base} alpha: {format_expr(self.monodromy_alpha)}; "
                f"beta: {format_expr(self.monodromy_beta)} }}")


@dataclass(frozen=True)
class LuttingerDatum:
    """Torus ``fiber_curve x direction'`` with meridian expression and surgery coefficient.

    ``meridian`` is an expression tree over curve names (a..e, z, x1..y2) and
    the base symbols alpha', beta', alpha'', beta''.
    """

    fiber_curve: str
    direction: str
    meridian: Optional[TwistWord]
    coefficient: int = 1
    name: str = ""

    def __post_init__(self):
        if self.direction not in BASE:
            raise ValueError(f"direction must be alpha or beta, got {self.direction!r}")
        if self.fiber_curve not in mcg.CURVE_WORDS:
            raise ValueError(f"unknown fiber curve {self.fiber_curve!r}")
        if self.coefficient != 1:
            raise ValueError("only +1 surgeries are modeled")

    @property
    def pushoff(self) -> str:
        return BASE[self.direction]

    def to_dsl(self) -> str:
        from .dsl import format_expr

        head = f"luttinger {self.name}" if self.name else "luttinger"
        mer = "" if self.meridian is None else f" meridian {format_expr(self.meridian)};"
        return f"{head} {{ torus {self.fiber_curve} {self.direction};{mer} slope {self.coefficient:+d} }}"


@dataclass(frozen=True)
class SectionMarker:
    name: str
    fiber_intersection: int = 1


@dataclass(frozen=True)
class SurgeredBundleSpec:
    base_bundle: BundleSpec
    surgeries: tuple[LuttingerDatum, ...] = ()
    sections: tuple[SectionMarker, ...] = (SectionMarker("Gamma"), SectionMarker("Gamma'"))
    # lifts of the base loops used in the dual tori; change only by fiber commutators
    alpha_dd: str = "alpha'"
    beta_dd: str = "beta'"
    name: str = "V"

    def __post_init__(self):
        dirs = [s.direction for s in self.surgeries]
        if len(set(dirs)) != len(dirs):
            raise ValueError("at most one surgery per base direction")


# -- presentations ------------------------------------------------------------

def _complement_alphabet(surgeries) -> Alphabet:
    mus = tuple(MERIDIAN[d] for d in ("alpha", "beta") if any(s.direction == d for s in surgeries))
    return Alphabet(FIBER_GENS + (BASE["alpha"], BASE["beta"]) + mus)


def _monodromy_relators(b: BundleSpec, alpha: Alphabet) -> list[Word]:
    # surface-group letters are indices 1..4, matching FIBER_GENS
    rels = [mcg.SURFACE.relator]
    for direction in ("alpha", "beta"):
        t = alpha.gen(BASE[direction])
        m = b.monodromy(direction)
        for x in mcg.SURFACE.generators:
            rels.append(t * x * t.inverse() * m.rep(x).inverse())
    if b.base == "torus":
        a, bb = alpha.gen(BASE["alpha"]), alpha.gen(BASE["beta"])
        rels.append(a * bb * a.inverse() * bb.inverse())
    return rels


def bundle_presentation(b: BundleSpec) -> GroupPresentation:
    """Presentation on ``x1 y1 x2 y2 alpha' beta'``.

    For a closed-torus base the relator ``[alpha', beta']`` is added; this is
    only right when the two monodromies commute on the nose (e.g. trivial).
    """
    alpha = _complement_alphabet(())
    return GroupPresentation(alpha, tuple(_monodromy_relators(b, alpha)))


def _eval_symbol(name: str, s: SurgeredBundleSpec, alpha: Alphabet) -> Word:
    if name in mcg.CURVE_WORDS:
        return mcg.curve_word(name)
    if name in ("alpha'", "beta'"):
        return alpha.gen(name)
    if name == "alpha''":
        return alpha.parse(s.alpha_dd)
    if name == "beta''":
        return alpha.parse(s.beta_dd)
    raise KeyError(f"unknown symbol {name!r} in meridian expression")


def eval_expression(expr: TwistWord, s: SurgeredBundleSpec, alpha: Alphabet) -> Word:
    """Evaluate an expression tree to a word in the complement alphabet."""
    out = Word()
    for item in expr.items:
        if isinstance(item, Gen):
            out = out * _eval_symbol(item.name, s, alpha) ** item.exp
        elif isinstance(item, Comm):
            u, v = eval_expression(item.left, s, alpha), eval_expression(item.right, s, alpha)
            out = out * u * v * u.inverse() * v.inverse()
        elif isinstance(item, Conj):
            body, by = eval_expression(item.body, s, alpha), eval_expression(item.by, s, alpha)
            out = out * by * body * by.inverse()
        else:
            raise TypeError(f"bad expression item {item!r}")
    return out


def surgery_presentation(s: SurgeredBundleSpec, meridians_trivial: bool = False) -> GroupPresentation:
    """Presentation of the surgered manifold's fundamental group (bookkeeping level).

    With ``meridians_trivial`` the meridian relators become ``mu = 1``; the
    abelianization must not change, since the expressions are commutators.
    """
    if not s.surgeries:
        return bundle_presentation(s.base_bundle)
    alpha = _complement_alphabet(s.surgeries)
    rels = _monodromy_relators(s.base_bundle, alpha)
    for datum in s.surgeries:
        if datum.meridian is None:
            raise MissingMeridian(f"surgery on ({datum.fiber_curve}, {datum.direction}) has no meridian")
        mu = alpha.gen(MERIDIAN[datum.direction])
        expr = Word() if meridians_trivial else eval_expression(datum.meridian, s, alpha)
        rels.append(mu.inverse() * expr)
        rels.append(mu * alpha.gen(datum.pushoff) ** datum.coefficient)
    return GroupPresentation(alpha, tuple(r for r in rels if r))


def kill_fiber(P: GroupPresentation) -> GroupPresentation:
    return quotient_presentation(P, FIBER_GENS)


# -- numerical invariants -------------------------------------------------------

def euler_characteristic(b: BundleSpec | SurgeredBundleSpec) -> int:
    """chi(fiber) * chi(base); torus surgeries remove and reglue chi-0 pieces."""
    if isinstance(b, SurgeredBundleSpec):
        b = b.base_bundle
    chi_fiber = 2 - 2 * b.fiber_genus
    chi_base = -1 if b.base == "punctured_torus" else 0
    return chi_fiber * chi_base


def canonical_fiber_evaluation(fiber_genus: int) -> tuple[int, int]:
    """``(+(2g-2), -(2g-2))``: the canonical class (or c_1 of the two extremal spin-c structures) on a fiber."""
    if fiber_genus < 2:
        raise ValueError("fiber genus must be at least 2")
    k = 2 * fiber_genus - 2
    return (k, -k)


def section_generates_relative_h2(section: SectionMarker) -> bool:
    """With H_2(V) = Z<F> and a unimodular duality pairing, a class generates H_2(V, dV) iff it meets F once."""
    return abs(section.fiber_intersection) == 1


def boundary_h1(b: BundleSpec) -> FPAbelianGroup:
    return mapping_torus_h1(b.boundary_monodromy().h1_matrix())


def v_report(s: SurgeredBundleSpec) -> ManifoldReport:
    """Homology of the surgered bundle, with every non-computed step labeled."""
    P = surgery_presentation(s)
    h1 = abelianization(P)
    chi = euler_characteristic(s)
    steps = [f"H_1 = {h1} from the surgery presentation ({len(P.generators)} generators, {len(P.relators)} relators)",
             f"chi = {chi} (fiber chi * base chi; torus surgeries preserve chi)"]
    if not h1.is_trivial:
        return ManifoldReport(s.name, chi, (1, h1.free_rank, None, None, 0), h1,
                              assumptions=(PUSHOFF, MERIDIANS), derivation=tuple(steps))
    # H_1(V) = 0 gives H_1(V, dV) = 0, hence H^1(V, dV) = 0 = H_3(V); H_2 is then free
    steps += ["H_1(V, dV) = coker(H_1(dV) -> H_1(V)) = 0",
              "H_3(V) = H^1(V, dV) = Hom(H_1(V, dV), Z) = 0",
              "H_2(V) = H^2(V, dV) = Hom(H_2(V, dV), Z) + Ext(H_1(V, dV), Z) is free"]
    b2 = chi - 1
    steps.append(f"b_2 = chi - b_0 + b_1 + b_3 = {b2}")
    spin = None
    if b2 == 1 and any(section_generates_relative_h2(g) for g in s.sections):
        steps.append("a section meets F once, so F generates H_2(V) and F.F = 0 makes the form even")
        steps.append("H_1 has no 2-torsion, so an even form means w_2 = 0")
        spin = True
    return ManifoldReport(
        s.name, chi, (1, 0, b2, 0, 0), h1,
        spin=spin,
        signature=0 if spin else None,
        h2=FPAbelianGroup(b2),
        boundary_h1=boundary_h1(s.base_bundle),
        assumptions=(PUSHOFF, MERIDIANS, DUALITY, WU),
        derivation=tuple(steps),
    )


# -- the construction ------------------------------------------------------------

def default_bundle() -> BundleSpec:
    return BundleSpec(monodromy_alpha=TwistWord.of("phi"), monodromy_beta=TwistWord.of("a", "b"))


def default_surgeries() -> tuple[LuttingerDatum, LuttingerDatum]:
    t_alpha = LuttingerDatum("c", "alpha", TwistWord((Comm(TwistWord.of("b"), TwistWord.of("beta''")),)),
                             name="T_alpha")
    t_beta = LuttingerDatum("e", "beta", TwistWord((Comm(TwistWord.of("z"), TwistWord.of("alpha''")),)),
                            name="T_beta")
    return t_alpha, t_beta


def default_v(**overrides) -> SurgeredBundleSpec:
    return SurgeredBundleSpec(default_bundle(), default_surgeries(), **overrides)


__all__ = [
    "BundleSpec", "LuttingerDatum", "MissingMeridian", "SectionMarker", "SurgeredBundleSpec",
    "boundary_h1", "bundle_presentation", "canonical_fiber_evaluation", "euler_characteristic",
    "eval_expression", "kill_fiber", "default_bundle", "default_surgeries", "default_v",
    "section_generates_relative_h2", "surgery_presentation", "v_report",
]
