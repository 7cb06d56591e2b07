"""dimw: a finite-lattice dimension monoid workbench."""

from . import congruence, dimension, errors, geometry, lattice, monoid

__all__ = ["lattice", "congruence", "monoid", "dimension", "geometry", "errors"]
__version__ = "0.1.0"
