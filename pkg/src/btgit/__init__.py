"""Exact torus GIT over non-archimedean valued fields.

Modules:
    valfield      exact arithmetic in the working valued field
    rootdata      root systems, Weyl groups, relative (restricted) data
    polyhedra     exact rational convex geometry and linear programming
    apartment     the affine apartment of a maximal split torus
    torusgit      weight polytopes, stability criteria, GIT chambers
    interval      intervals of torus semistability as exact polyhedra
    models        concrete flag-variety point models with group actions
    treebuilding  rank-one tree computations and finite apartment families
    cli           JSON batch front-end
"""

__version__ = "0.1.0"
