"""Multiplicities and heights attached to a cluster of polar base points.

Fix a consistent virtual cluster ``bp`` (the shared points of the polar
curves of some singular curve, weighted with their virtual multiplicities).
Pairing the curve's equation with a generic transversal coordinate gives,
at every point p of the cluster and at every satellite above it, a pair of
positive integers:

* ``n_p`` -- the multiplicity of the composite map at p, and
* ``m_p`` -- the height at which the images of generic arcs through p split.

Only the recursion producing them survives into this artifact:

    n at the origin is 1,   m at the origin is (origin weight of bp) + 1,
    for p free proximate to p':      n_p = n_p',
                                     m_p = m_p' + w_p + 1,
    for p satellite proximate to p', p'':
                                     n_p = n_p' + n_p'',
                                     m_p = m_p' + m_p'' + w_p,

where w_p is the bp-weight of p, taken as 0 for points outside the cluster
(a generic polar is non-singular away from its base points, which is also
why created satellites never carry weight).  The table grows lazily: asking
for a point outside the current domain extends it along the point's chain.

``m_p/n_p`` is the *height quotient*; its comparisons against dicritical
invariants drive the satellite walk of the recovery algorithm.  As an
internal cross-check, :meth:`MorphismInvariants.jacobian_multiplicity_check`
recomputes the cluster weight at any domain point from m and n alone.
"""

from __future__ import annotations

from fractions import Fraction

from .arena import ArenaTree, PointId
from .cluster import WeightedCluster, WeightKind, is_consistent
from .errors import InconsistentCluster


class MorphismInvariants:
    """Lazily extendable table of (n_p, m_p) over an arena.

    Created by :func:`compute`; reads are cheap dict lookups, extension
    follows the exclusive-writer contract of the arena.
    """

    def __init__(self, bp: WeightedCluster):
        self.bp = bp
        self.n: dict[PointId, int] = {}
        self.m: dict[PointId, int] = {}

    @property
    def tree(self) -> ArenaTree:
        return self.bp.tree

    def _compute_point(self, p: PointId) -> None:
        tree = self.tree
        w = self.bp.get(p, 0)
        parent = tree.parent(p)
        if parent is None:
            self.n[p] = 1
            self.m[p] = self.bp.get(p, 0) + 1
            return
        second = tree.second_proximity(p)
        if second is None:
            self.n[p] = self.n[parent]
            self.m[p] = self.m[parent] + w + 1
        else:
            self.n[p] = self.n[parent] + self.n[second]
            self.m[p] = self.m[parent] + self.m[second] + w

    def extend_to(self, p: PointId) -> tuple[int, int]:
        """Ensure (n, m) are defined on the chain of ``p``; return its pair."""
        if p not in self.n:
            for q in self.tree.ancestors(p):
                if q not in self.n:
                    self._compute_point(q)
        return self.n[p], self.m[p]

    def height_quotient(self, p: PointId) -> Fraction:
        n, m = self.extend_to(p)
        return Fraction(m, n)

    def jacobian_multiplicity_check(self, p: PointId) -> int:
        """Recompute the expected cluster weight at ``p`` from m and n.

        Returns m+n-2 at the origin, m+n-m'-n'-1 at free points and
        m+n-m'-n'-m''-n'' at satellites; on every point this must equal the
        bp-weight of ``p`` (0 outside the cluster).
        """
        n, m = self.extend_to(p)
        tree = self.tree
        parent = tree.parent(p)
        if parent is None:
            return m + n - 2
        np_, mp_ = self.extend_to(parent)
        second = tree.second_proximity(p)
        if second is None:
            return m + n - mp_ - np_ - 1
        np2, mp2 = self.extend_to(second)
        return m + n - mp_ - np_ - mp2 - np2


def compute(bp: WeightedCluster) -> MorphismInvariants:
    """Build the (n, m) table on every point of a base-point cluster.

    The cluster must be virtual, consistent, and give the origin weight at
    least 1 (the polar of a singular curve is itself a curve through the
    origin).
    """
    bp.require_kind(WeightKind.VIRTUAL)
    origin = bp.tree.origin
    if origin is None or bp.get(origin, 0) < 1:
        raise InconsistentCluster(
            "base-point cluster must weight the origin with at least 1")
    if not is_consistent(bp):
        raise InconsistentCluster(
            "base-point cluster has a point of negative excess")
    inv = MorphismInvariants(bp)
    for p in bp.ordered_points():
        inv._compute_point(p)
    return inv
