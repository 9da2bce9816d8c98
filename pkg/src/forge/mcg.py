"""Genus-2 mapping classes as outer automorphisms of the surface group.

Model.  The surface group is ``<x1, y1, x2, y2 | [x1,y1][x2,y2]>`` (an octagon
with the standard side pairing).  The chain curves are the reduced words

    a = x1^-1,   b = y1,   c = x2^-1 y1 x1 y1^-1,   d = y2,   e = x2

with homology classes oriented so consecutive curves pair to +1 under
``omega(u, v) = sum_i (u[y_i] v[x_i] - u[x_i] v[y_i])``.  A positive twist
acts on ``H_1`` as ``v -> v + omega(v, [curve]) [curve]``.

None of the explicit automorphisms below are canonical; they are certified
by the relations they satisfy in Out(pi_1) (transvection abelianization, braid
and commutation relations, fixing disjoint curves, the conjugation tables of
the involutions phi and epsilon).  See ``tests/test_mcg.py``.

Composition convention: words act left to right.  ``compose(f, g)`` applies
``f`` first, then ``g``; as automorphisms of pi_1 this is ``g o f`` and
``h1_matrix(compose(f, g)) == h1_matrix(g) @ h1_matrix(f)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Union

import numpy as np

from .words import SurfaceGroup, Word, commutator

SURFACE = SurfaceGroup(2)

CHAIN = ("a", "b", "c", "d", "e")

CURVE_WORDS = {
    "a": "x1^-1",
    "b": "y1",
    "c": "x2^-1 y1 x1 y1^-1",
    "d": "y2",
    "e": "x2",
    "z": "y2 y1",
    "x1": "x1",
    "y1": "y1",
    "x2": "x2",
    "y2": "y2",
}

# (forward images, images of an outer inverse), generator order x1 y1 x2 y2
_TWISTS = {
    "a": (("x1", "y1 x1", "x2", "y2"), ("x1", "y1 x1^-1", "x2", "y2")),
    "b": (("x1 y1^-1", "y1", "x2", "y2"), ("x1 y1", "y1", "x2", "y2")),
    "c": (
        ("x1", "x2^-1 y1 x1", "x2^-1 y1 x1 y1^-1 x2 y1 x1^-1 y1^-1 x2", "y2 y1 x1^-1 y1^-1 x2"),
        ("x1", "y1 x1^-1 y1^-1 x2 y1", "y1 x1^-1 y1^-1 x2 y1 x1 y1^-1", "y2 x2^-1 y1 x1 y1^-1"),
    ),
    "d": (("x1", "y1", "x2 y2^-1", "y2"), ("x1", "y1", "x2 y2", "y2")),
    "e": (("x1", "y1", "x2", "y2 x2"), ("x1", "y1", "x2", "y2 x2^-1")),
}

# Handle swap composed with the hyperelliptic involution (a b c d e e d c b a),
# so c is preserved with its orientation.
_PHI = ("x1 y1^-1 x1^-1 x2^-1 y1", "y1^-1 y2^-1 x1 y1 x1^-1", "x1^-1", "x1 y1^-1 x1^-1")

# The reflection x1 -> x1, y1 -> y1^-1, x2 -> y1^-1 y2 x2 y2^-1 y1,
# y2 -> y1^-1 y2^-1 y1 (fixes every chain curve setwise) followed by phi.
_EPSILON = (
    "y2 x2^-1 y2^-1",
    "y2 y1 x1 y1^-1 x1^-1",
    "y2 y1 x1 y1^-1 x1^-1 y1 x1^-1 y1^-1 y2^-1",
    "y2 y1 x1 y1 x1^-1 y1^-1 y2^-1",
)


class BoundExhausted(Exception):
    """Search limit reached without a witness or a disproof."""


# -- homology ---------------------------------------------------------------

def omega_matrix(genus: int = 2) -> np.ndarray:
    """Gram matrix of the intersection pairing in the basis x1, y1, x2, y2, ..."""
    J = np.zeros((2 * genus, 2 * genus), dtype=np.int64)
    for i in range(genus):
        J[2 * i + 1, 2 * i] = 1
        J[2 * i, 2 * i + 1] = -1
    return J


def omega(u, v) -> int:
    u, v = np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64)
    return int(u @ omega_matrix(len(u) // 2) @ v)


def curve_word(name: str) -> Word:
    return SURFACE.word(CURVE_WORDS[name])


def curve_class(name: str) -> np.ndarray:
    return np.array(SURFACE.abelianize(curve_word(name)), dtype=np.int64)


def transvection(c) -> np.ndarray:
    """Matrix of ``v -> v + omega(v, c) c`` (columns are images of basis vectors)."""
    c = np.asarray(c, dtype=np.int64)
    n = len(c)
    J = omega_matrix(n // 2)
    return np.eye(n, dtype=np.int64) + np.outer(c, c @ J.T)


# -- automorphisms ----------------------------------------------------------

@dataclass(frozen=True)
class Automorphism:
    """Endomorphism of the surface group given by generator images.

    Images are kept Dehn-reduced.  ``orientation`` is +1 when the relator maps
    to a conjugate of itself and -1 when it maps to a conjugate of its inverse.
    """

    images: tuple[Word, ...]
    orientation: int = 1
    group: SurfaceGroup = field(default=SURFACE, compare=False, repr=False)

    def __post_init__(self):
        if len(self.images) != self.group.n_gens:
            raise ValueError("need one image per generator")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        object.__setattr__(self, "images", tuple(self.group.dehn_reduce(w) for w in self.images))

    @classmethod
    def from_strings(cls, images: Iterable[str], orientation: int = 1,
                     group: SurfaceGroup = SURFACE) -> "Automorphism":
        return cls(tuple(group.word(s) for s in images), orientation, group)

    @classmethod
    def identity(cls, group: SurfaceGroup = SURFACE) -> "Automorphism":
        return cls(group.generators, 1, group)

    def __call__(self, w: Word) -> Word:
        out: list[int] = []
        for x in w.letters:
            img = self.images[abs(x) - 1]
            out.extend(img.letters if x > 0 else img.inverse().letters)
        return self.group.dehn_reduce(Word(tuple(out)))

    def then(self, other: "Automorphism") -> "Automorphism":
        """Apply ``self`` first, then ``other`` (the automorphism ``other o self``)."""
        return Automorphism(tuple(other(w) for w in self.images),
                            self.orientation * other.orientation, self.group)

    def conjugated_by(self, w: Word) -> "Automorphism":
        """Post-compose with the inner automorphism ``x -> w x w^-1``."""
        return Automorphism(tuple(img.conj(w) for img in self.images), self.orientation, self.group)

    def h1_matrix(self) -> np.ndarray:
        return np.array([self.group.abelianize(w) for w in self.images], dtype=np.int64).T

    def is_valid(self) -> bool:
        """Relator goes to the identity and the H_1 action is (anti-)symplectic."""
        if not self.group.is_trivial(self(self.group.relator)):
            return False
        M = self.h1_matrix()
        J = omega_matrix(self.group.genus)
        return bool(np.array_equal(M.T @ J @ M, self.orientation * J))

    def format(self) -> str:
        names = self.group.alphabet.names
        return ", ".join(f"{n} -> {self.group.format(w)}" for n, w in zip(names, self.images))


def twist_auto(c: str) -> Automorphism:
    """Positive Dehn twist about a chain curve."""
    if c not in _TWISTS:
        raise KeyError(f"no twist for curve {c!r}; expected one of {CHAIN}")
    return Automorphism.from_strings(_TWISTS[c][0])


def involution_phi() -> Automorphism:
    return Automorphism.from_strings(_PHI)


def involution_epsilon() -> Automorphism:
    return Automorphism.from_strings(_EPSILON, orientation=-1)


# -- mapping classes --------------------------------------------------------

@dataclass(frozen=True)
class MappingClass:
    """Outer automorphism class, carried with a representative of its inverse."""

    rep: Automorphism
    inv: Automorphism
    label: str = field(default="", compare=False)

    @property
    def orientation(self) -> int:
        return self.rep.orientation

    def inverse(self) -> "MappingClass":
        return MappingClass(self.inv, self.rep, f"({self.label})^-1" if self.label else "")

    def __pow__(self, k: int) -> "MappingClass":
        out = identity()
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = compose(out, base)
        return out

    def h1_matrix(self) -> np.ndarray:
        return self.rep.h1_matrix()


def identity() -> MappingClass:
    ident = Automorphism.identity()
    return MappingClass(ident, ident, "id")


@lru_cache(maxsize=None)
def generator(name: str) -> MappingClass:
    """Named generator: a chain twist ``a``..``e``, ``phi`` or ``eps``."""
    if name in _TWISTS:
        fwd, back = _TWISTS[name]
        return MappingClass(Automorphism.from_strings(fwd), Automorphism.from_strings(back), name)
    if name in ("phi", "φ"):
        f = involution_phi()
        return MappingClass(f, f, "phi")
    if name in ("eps", "epsilon", "ε"):
        f = involution_epsilon()
        return MappingClass(f, f, "eps")
    raise KeyError(f"unknown mapping class generator {name!r}")


def compose(f: MappingClass, g: MappingClass) -> MappingClass:
    """``f`` first, then ``g``."""
    label = " ".join(x for x in (f.label, g.label) if x and x != "id") or "id"
    return MappingClass(f.rep.then(g.rep), g.inv.then(f.inv), label)


def h1_matrix(f: MappingClass) -> np.ndarray:
    return f.h1_matrix()


def is_inner(h: Automorphism, bound: int = 16) -> Optional[Word]:
    """Return ``w`` with ``h(x) = w x w^-1`` for every generator, if found.

    Raises ``BoundExhausted`` when the search gives up; returns ``None`` only
    when the abelianization already rules out innerness.
    """
    G = h.group
    if h.orientation != 1 or not np.array_equal(h.h1_matrix(), np.eye(G.n_gens, dtype=np.int64)):
        return None
    x1, y1 = G.generators[0], G.generators[1]
    w0 = G.conjugacy_witness(h(x1), x1, bound)
    if w0 is None:
        raise BoundExhausted(f"no conjugator of length <= {bound} for the first generator")
    # all solutions for x1 are w0 x1^k; the second generator pins k
    rest = G.dehn_reduce(h(y1).conj(w0.inverse()))
    lead = 0
    for x in rest.letters:
        if abs(x) != 1 or (lead and (x > 0) != (lead > 0)):
            break
        lead += 1 if x > 0 else -1
    for k in sorted({lead, 0, lead - 1, lead + 1, lead - 2, lead + 2}, key=lambda k: (abs(k - lead), k)):
        w = G.dehn_reduce(w0 * x1 ** k)
        if all(G.equal(h(g), g.conj(w)) for g in G.generators):
            if len(w) > bound:
                raise BoundExhausted(f"inner witness has length {len(w)} > {bound}")
            return w
    raise BoundExhausted("conjugator for the first generator does not extend to the others")


def outer_witness(f: MappingClass, g: MappingClass, bound: int = 16) -> Optional[Word]:
    """Word ``w`` with ``f(x) = w g(x) w^-1`` for all generators ``x``.

    ``None`` means ``f`` and ``g`` are provably different (orientation or H_1
    action differ); ``BoundExhausted`` means the search was inconclusive.
    """
    if f.orientation != g.orientation:
        return None
    if not np.array_equal(f.h1_matrix(), g.h1_matrix()):
        return None
    w1 = is_inner(f.rep.then(g.inv), bound)
    if w1 is None:
        return None
    # g.inv is an inverse only up to inn(u): g ginv = inn(u) and ginv f = inn(w1),
    # so f(x) = w g(x) w^-1 with w = u^-1 g(w1)
    u = is_inner(g.inv.then(g.rep), bound)
    if u is None:
        raise ValueError(f"{g.label or 'mapping class'}: stored inverse is not an outer inverse")
    G = f.rep.group
    w = G.dehn_reduce(u.inverse() * g.rep(w1))
    if len(w) > bound:
        raise BoundExhausted(f"outer witness has length {len(w)} > {bound}")
    return w


def mc_equal(f: MappingClass, g: MappingClass, bound: int = 16) -> bool:
    """Equality in Out(pi_1).  Raises ``BoundExhausted`` when undecided."""
    return outer_witness(f, g, bound) is not None


# -- twist words --------------------------------------------------------------

@dataclass(frozen=True)
class Gen:
    name: str
    exp: int = 1


@dataclass(frozen=True)
class Comm:
    left: "TwistWord"
    right: "TwistWord"


@dataclass(frozen=True)
class Conj:
    """``by * body * by^-1`` (left-to-right)."""

    body: "TwistWord"
    by: "TwistWord"


Item = Union[Gen, Comm, Conj]


@dataclass(frozen=True)
class TwistWord:
    items: tuple[Item, ...] = ()

    @classmethod
    def of(cls, *names: str) -> "TwistWord":
        """``TwistWord.of("a", "b", "d^-1")``."""
        items = []
        for n in names:
            base, _, exp = n.partition("^")
            items.append(Gen(base, int(exp) if exp else 1))
        return cls(tuple(items))

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.items + other.items)


def _eval_item(item: Item) -> MappingClass:
    if isinstance(item, Gen):
        return generator(item.name) ** item.exp
    if isinstance(item, Comm):
        u, v = evaluate(item.left), evaluate(item.right)
        return compose(compose(compose(u, v), u.inverse()), v.inverse())
    if isinstance(item, Conj):
        body, by = evaluate(item.body), evaluate(item.by)
        return compose(compose(by, body), by.inverse())
    raise TypeError(f"not a twist-word item: {item!r}")


def evaluate(tw: TwistWord) -> MappingClass:
    out = identity()
    for item in tw.items:
        out = compose(out, _eval_item(item))
    return out


def check_gluing_condition(f: TwistWord, g: TwistWord, eps: Optional[MappingClass] = None,
                           bound: int = 16) -> bool:
    """Whether ``eps f eps^-1 == g`` in the mapping class group.

    When it holds, rotating the base circle by pi while reflecting the fiber by
    ``eps`` is a free orientation-reversing involution of the mapping torus of
    ``f g``.  Propagates ``BoundExhausted``.
    """
    eps = generator("eps") if eps is None else eps
    if eps.orientation != -1:
        raise ValueError("eps must reverse orientation")
    lhs = compose(compose(eps, evaluate(f)), eps.inverse())
    return mc_equal(lhs, evaluate(g), bound)


def fixes_curve(f: MappingClass, curve: Word, bound: int = 16) -> bool:
    """Whether ``f`` maps the free homotopy class of ``curve`` to itself (with orientation)."""
    G = f.rep.group
    image = f.rep(curve)
    if G.conjugacy_obstructed(image, curve):
        return False
    if G.conjugacy_witness(image, curve, bound) is None:
        raise BoundExhausted(f"no conjugator of length <= {bound} for the curve image")
    return True


__all__ = [
    "Automorphism", "BoundExhausted", "CHAIN", "Comm", "Conj", "Gen", "MappingClass",
    "SURFACE", "TwistWord", "check_gluing_condition", "compose", "curve_class", "curve_word",
    "evaluate", "fixes_curve", "generator", "h1_matrix", "identity", "involution_epsilon",
    "involution_phi", "is_inner", "mc_equal", "omega", "omega_matrix", "outer_witness",
    "transvection", "twist_auto", "commutator",
]
