"""Exact computational toolkit for Lie-algebra stabilizers, local models of
group orbits, limits of forms under one-parameter subgroups, conjugation
orbit closures, and orbit curvature / Kempf diagnostics."""

__version__ = "0.1.0"
