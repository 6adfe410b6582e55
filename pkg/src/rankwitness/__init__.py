"""Computational checks around rank growth of elliptic curves in towers of
imaginary quadratic extensions: explicit point families, ring class field
degrees, Heegner points and their trace relations, auxiliary prime searches
and a p-adic recurrence."""

__version__ = "0.1.0"
