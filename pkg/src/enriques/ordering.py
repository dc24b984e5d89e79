"""The partial order on infinitely near points used by the recovery walk.

Every point q has a *defining free point*: the last free point on its chain
(q itself when q is free).  The position of q among the satellites of its
defining free point p is pinned down by one exact fraction,

    weight of the unibranch chain of q at p  /  weight at the origin,

which lies in (0, 1] and equals 1 exactly for free points.  Distinct points
sharing the same defining free point always get distinct fractions: walking
from p into the satellite tree refines the fraction like a mediant
(Stern-Brocot) search, one side per step.

A point q1 with defining free point p1 is *smaller* than q2 (written q1 < q2
here, "prec" in code) when p1 lies on the chain of q2's defining free point
and the fraction of q1 at p1 does not exceed the fraction of q2 measured at
p1.  Restricted to one free point and its satellites this is a total order;
across unrelated free points it is only partial, and ``Incomparable`` is a
first-class outcome rather than an error.

Navigation: every free point p (proximate to p') has exactly one satellite
in its first neighbourhood, namely the point proximate to p and p'; it is
called the first satellite of p and sits strictly between p' and p.  A
satellite q proximate to a and b with a < b has exactly two satellites in
its first neighbourhood: the *first* satellite (proximate to q and a, below
q) and the *second* satellite (proximate to q and b, above q).  The
functions here find the requested neighbour in the arena, creating it when
it does not exist yet (find-or-create), since the recovery walk routinely
visits points that carry no weight in the input cluster.

All comparisons use exact integer cross-multiplication; no floats anywhere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .arena import ArenaTree, PointId
from .cluster import WeightedCluster, WeightKind, unibranch_chain
from .errors import (
    EmptySet,
    NotComparable,
    NotUnibranch,
    OriginHasNoSatellite,
    SecondSatelliteOfFreePoint,
)


class PrecComparison(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class SatelliteQuotient:
    """Defining free point of a point plus its exact position fraction."""

    defining_free_point: PointId
    fraction: Fraction


def defining_free_point(tree: ArenaTree, q: PointId) -> PointId:
    """The last free point on the chain of ``q`` (``q`` itself when free)."""
    p = q
    while tree.is_satellite(p):
        p = tree.parent(p)  # satellites are never the origin
    return p


def fraction_at(tree: ArenaTree, p: PointId, q: PointId) -> Fraction:
    """Chain weight of ``q`` at ``p`` over its origin weight.

    ``p`` must lie on the chain of ``q``.
    """
    chain = unibranch_chain(tree, q)
    return Fraction(chain[p], chain[tree.origin])


def satellite_quotient(tree: ArenaTree, q: PointId) -> SatelliteQuotient:
    p = defining_free_point(tree, q)
    return SatelliteQuotient(p, fraction_at(tree, p, q))


def prec_compare(tree: ArenaTree, q1: PointId, q2: PointId) -> PrecComparison:
    """Compare two points, allowing ``INCOMPARABLE``.

    ``EQUAL`` only for identical ids.  Otherwise q1 is smaller exactly when
    the defining free point p1 of q1 precedes that of q2 and the fraction of
    q1 at p1 is at most the fraction of q2 measured at p1 (and symmetrically
    for greater).
    """
    tree.record(q1), tree.record(q2)
    if q1 == q2:
        return PrecComparison.EQUAL
    p1 = defining_free_point(tree, q1)
    p2 = defining_free_point(tree, q2)
    if tree.precedes(p1, p2):
        if fraction_at(tree, p1, q1) <= fraction_at(tree, p1, q2):
            return PrecComparison.LESS
    if tree.precedes(p2, p1):
        if fraction_at(tree, p2, q2) <= fraction_at(tree, p2, q1):
            return PrecComparison.GREATER
    return PrecComparison.INCOMPARABLE


def _ordered_proximities(tree: ArenaTree, q: PointId) -> tuple[PointId, PointId]:
    """The two proximities of a satellite, smaller first."""
    a = tree.parent(q)
    b = tree.second_proximity(q)
    if prec_compare(tree, a, b) is PrecComparison.LESS:
        return a, b
    return b, a


def _find_or_create(tree: ArenaTree, parent: PointId, second: PointId) -> PointId:
    existing = tree.find_satellite(parent, second)
    if existing is not None:
        return existing
    return tree.add_point(parent=parent, second_proximity=second)


def first_satellite(tree: ArenaTree, q: PointId) -> PointId:
    """The smaller satellite in the first neighbourhood of ``q``.

    For a free point this is its only first-neighbourhood satellite.  The
    point is created if the arena does not contain it yet.
    """
    if tree.is_origin(q):
        raise OriginHasNoSatellite("the origin has no satellite points")
    if tree.is_free(q):
        return _find_or_create(tree, q, tree.parent(q))
    smaller, _ = _ordered_proximities(tree, q)
    return _find_or_create(tree, q, smaller)


def second_satellite(tree: ArenaTree, q: PointId) -> PointId:
    """The bigger satellite in the first neighbourhood of a satellite ``q``."""
    if not (q in tree and tree.is_satellite(q)):
        tree.record(q)
        raise SecondSatelliteOfFreePoint(
            f"point {q} is free; only satellites have a second satellite")
    _, bigger = _ordered_proximities(tree, q)
    return _find_or_create(tree, q, bigger)


def max_under_prec(tree: ArenaTree, points: Iterable[PointId]) -> PointId:
    """The biggest of a set of points sharing one defining free point."""
    pts = list(points)
    if not pts:
        raise EmptySet("cannot take the maximum of no points")
    base = defining_free_point(tree, pts[0])
    best = pts[0]
    best_fraction = fraction_at(tree, base, best)
    for q in pts[1:]:
        if defining_free_point(tree, q) != base:
            raise NotComparable(
                f"points {best} and {q} have different defining free points")
        f = fraction_at(tree, base, q)
        if f > best_fraction:
            best, best_fraction = q, f
    return best


def compare_point_to_branch(
    tree: ArenaTree, q: PointId, branch: WeightedCluster
) -> bool:
    """Whether ``q`` is smaller than the branch described by ``branch``.

    ``branch`` must be a unibranch multiplicity cluster (a chain).  True
    exactly when the defining free point p of q lies on the branch and the
    fraction of q at p is strictly below the branch's own multiplicity
    ratio e_p / e_origin.
    """
    branch.require_kind(WeightKind.MULTIPLICITY)
    for p in branch.points:
        in_cluster = [c for c in branch.tree.child_list(p) if c in branch]
        if len(in_cluster) > 1:
            raise NotUnibranch(
                f"branch cluster forks at point {p}")
    p = defining_free_point(tree, q)
    if p not in branch:
        return False
    return fraction_at(tree, p, q) < Fraction(
        branch[p], branch[branch.tree.origin])
