"""Numerical laboratory for weighted shifts, their resolvents and Hardy-space diagnostics."""

__version__ = "0.1.0"
