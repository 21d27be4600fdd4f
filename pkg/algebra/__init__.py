"""Computational core: exact linear algebra, quiver representations, complexes,
torsion pairs, the tilted heart and the derived equivalence."""
