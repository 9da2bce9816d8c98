"""Manifold reports and the labeled facts they may depend on."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .homcalc import FPAbelianGroup


@dataclass(frozen=True)
class Assumption:
    """A fact used but not computed here.  ``label`` is the stable key shown in reports."""

    label: str
    statement: str

    def __str__(self) -> str:
        return f"{self.label}: {self.statement}"


PUSHOFF = Assumption(
    "pushoff-identification",
    "the framed pushoffs alpha'_d, beta'_d are homologous to alpha', beta' in the torus complement",
)
MERIDIANS = Assumption(
    "meridian-expressions",
    "mu_alpha ~ [b, beta''] and mu_beta ~ [z, alpha''] hold in the torus complement (structured input)",
)
DUALITY = Assumption(
    "lefschetz-duality",
    "Poincare-Lefschetz duality and universal coefficients for compact oriented 4-manifolds",
)
MAYER_VIETORIS = Assumption(
    "mayer-vietoris",
    "Mayer-Vietoris for the double along a rational homology S^1 x S^2 (or S^3) boundary",
)
SPIN_GLUING = Assumption(
    "spin-gluing",
    "the boundary identification carries the spin structure of one half to the other",
)
TRANSFER = Assumption(
    "transfer",
    "rational homology of a free Z/2 quotient is the invariant part of the cover's",
)
FREE_ACTION = Assumption(
    "free-involution",
    "the deck involution acts freely on the double and the cover is connected",
)
WU = Assumption(
    "wu-formula",
    "w_2 is characteristic for the mod-2 intersection pairing of a closed 4-manifold",
)
NOVIKOV = Assumption(
    "novikov-additivity",
    "signatures and b_2 add when gluing along rational homology S^1 x S^2 boundaries",
)
SLICE_FAMILY = Assumption(
    "knot-table-flags",
    "four-ball genus and strong negative amphichirality are table inputs, not computed",
)


@dataclass(frozen=True)
class ManifoldReport:
    """Homological summary of a compact 4-manifold.

    ``betti`` holds b_0..b_4; entries may be None when not determined.
    """

    name: str
    chi: int
    betti: tuple[Optional[int], ...]
    h1: FPAbelianGroup
    spin: Optional[bool] = None
    signature: Optional[int] = None
    h2: Optional[FPAbelianGroup] = None
    boundary_h1: Optional[FPAbelianGroup] = None
    assumptions: tuple[Assumption, ...] = ()
    derivation: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.betti) != 5:
            raise ValueError("betti must list b_0..b_4")
        if all(b is not None for b in self.betti):
            alt = sum((-1) ** i * b for i, b in enumerate(self.betti))
            if alt != self.chi:
                raise ValueError(f"{self.name}: chi={self.chi} but alternating betti sum is {alt}")
        if self.betti[1] is not None and self.betti[1] != self.h1.free_rank:
            raise ValueError(f"{self.name}: b_1 disagrees with H_1")

    @property
    def b2(self) -> Optional[int]:
        return self.betti[2]

    @property
    def is_rational_homology_sphere(self) -> bool:
        return self.betti == (1, 0, 0, 0, 1)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "chi": self.chi,
            "betti": list(self.betti),
            "h1": str(self.h1),
            "h2": None if self.h2 is None else str(self.h2),
            "boundary_h1": None if self.boundary_h1 is None else str(self.boundary_h1),
            "signature": self.signature,
            "spin": self.spin,
        }
