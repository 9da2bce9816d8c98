"""Computer-algebra checks for surface bundles, Luttinger surgery homology and knot obstructions."""

__version__ = "0.1.0"
