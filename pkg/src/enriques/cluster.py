"""Weighted clusters of infinitely near points.

A weighted cluster is a finite, ancestor-closed set of arena points with an
integer weight on each point, together with a declared *kind* telling what
the weights mean:

* ``VIRTUAL``      -- virtual multiplicities of a cluster of base points,
* ``MULTIPLICITY`` -- effective multiplicities of a curve at its points,
* ``VALUE``        -- multiplicities of the total transforms of a curve.

The three kinds enter the same formulas in different roles, so mixing them
is a type error here, not a warning.  Weights are plain Python integers and
therefore arbitrary precision; nothing in this module ever overflows or
rounds.

The conversions between values and multiplicities implement

    v_p = e_p + sum of v_q over the points q that p is proximate to,

and its inverse.  The excess of a cluster at p is the weight at p minus the
total weight of the cluster points proximate to p; points of positive excess
are called dicritical, and a cluster is consistent when no excess is
negative.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .arena import ArenaTree, PointId
from .errors import (
    ArenaMismatch,
    InvalidWeight,
    NonPositiveMultiplicity,
    NotDownwardClosed,
    PointNotInCluster,
    UnknownPoint,
    WrongKind,
)


class WeightKind(enum.Enum):
    VIRTUAL = "virtual"
    MULTIPLICITY = "multiplicity"
    VALUE = "value"


@dataclass(frozen=True)
class WeightedCluster:
    """An ancestor-closed set of points with integer weights.

    Instances are immutable; derive new clusters instead of mutating.
    Weights must be >= 1, except that virtual clusters may carry explicit
    zero weights ("carrier" points that take part in no sum but keep a
    point in the set).
    """

    tree: ArenaTree
    kind: WeightKind
    weight: Mapping[PointId, int]

    def __post_init__(self) -> None:
        weights = dict(self.weight)
        object.__setattr__(self, "weight", weights)
        floor = 0 if self.kind is WeightKind.VIRTUAL else 1
        for p, w in weights.items():
            if p not in self.tree:
                raise UnknownPoint(f"cluster mentions unknown point {p}")
            if not isinstance(w, int) or w < floor:
                raise InvalidWeight(
                    f"weight {w!r} at point {p} below {floor}"
                    f" for kind {self.kind.value}")
            parent = self.tree.parent(p)
            if parent is not None and parent not in weights:
                raise NotDownwardClosed(
                    f"point {p} is in the cluster but its parent"
                    f" {parent} is not")

    # -- set-like access --------------------------------------------------

    @property
    def points(self):
        return self.weight.keys()

    def __contains__(self, p: object) -> bool:
        return p in self.weight

    def __len__(self) -> int:
        return len(self.weight)

    def __getitem__(self, p: PointId) -> int:
        try:
            return self.weight[p]
        except KeyError:
            raise PointNotInCluster(f"point {p} is not in the cluster")

    def get(self, p: PointId, default: int = 0) -> int:
        return self.weight.get(p, default)

    def ordered_points(self) -> list[PointId]:
        """Cluster points in arena (topological) order."""
        return sorted(self.weight)

    def require_kind(self, kind: WeightKind) -> None:
        if self.kind is not kind:
            raise WrongKind(
                f"expected a {kind.value} cluster, got {self.kind.value}")

    def _same_arena(self, other: "WeightedCluster") -> None:
        if self.tree is not other.tree:
            raise ArenaMismatch("clusters live over different arenas")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedCluster):
            return NotImplemented
        return (self.tree is other.tree and self.kind is other.kind
                and dict(self.weight) == dict(other.weight))

    def __hash__(self):
        return hash((id(self.tree), self.kind, frozenset(self.weight.items())))


# -- value / multiplicity conversion ------------------------------------


def values_from_multiplicities(cluster: WeightedCluster) -> WeightedCluster:
    """Total-transform values from effective multiplicities.

    Sweeps the cluster in topological order: the value at a point is its
    multiplicity plus the values at the points it is proximate to (both of
    which lie strictly earlier, hence are already known).
    """
    cluster.require_kind(WeightKind.MULTIPLICITY)
    tree = cluster.tree
    values: dict[PointId, int] = {}
    for p in cluster.ordered_points():
        v = cluster.weight[p]
        for q in tree.proximities(p):
            v += values[q]
        values[p] = v
    return WeightedCluster(tree, WeightKind.VALUE, values)


def multiplicities_from_values(cluster: WeightedCluster) -> WeightedCluster:
    """Exact inverse of :func:`values_from_multiplicities`.

    Raises :class:`NonPositiveMultiplicity` when the given values are not
    realizable by a curve through all cluster points.
    """
    cluster.require_kind(WeightKind.VALUE)
    tree = cluster.tree
    mults: dict[PointId, int] = {}
    for p in cluster.ordered_points():
        e = cluster.weight[p]
        for q in tree.proximities(p):
            e -= cluster.weight[q]
        if e < 1:
            raise NonPositiveMultiplicity(
                f"values force multiplicity {e} at point {p}")
        mults[p] = e
    return WeightedCluster(tree, WeightKind.MULTIPLICITY, mults)


# -- excesses, dicritical points, consistency -----------------------------


def excesses(cluster: WeightedCluster) -> dict[PointId, int]:
    """Excess at every cluster point in one pass."""
    tree = cluster.tree
    rho = dict(cluster.weight)
    for q, w in cluster.weight.items():
        for p in tree.proximities(q):
            if p in rho:
                rho[p] -= w
    return rho


def excess(cluster: WeightedCluster, p: PointId) -> int:
    if p not in cluster:
        raise PointNotInCluster(f"point {p} is not in the cluster")
    tree = cluster.tree
    rho = cluster.weight[p]
    for q in cluster.points:
        if tree.is_proximate(q, p):
            rho -= cluster.weight[q]
    return rho


def dicritical_points(cluster: WeightedCluster) -> set[PointId]:
    return {p for p, r in excesses(cluster).items() if r > 0}


def is_consistent(cluster: WeightedCluster) -> bool:
    return all(r >= 0 for r in excesses(cluster).values())


# -- unibranch chains ------------------------------------------------------


def unibranch_chain(tree: ArenaTree, p: PointId) -> WeightedCluster:
    """The irreducible cluster ending at ``p``.

    Its points are the chain from the origin to ``p``; the weights are the
    unique solution with weight 1 at ``p`` and excess 0 at every earlier
    chain point, computed by a single reverse-topological sweep.  Germs
    through this cluster are irreducible and leave it at a free simple
    point right after ``p``.
    """
    chain = tree.ancestors(p)
    acc: dict[PointId, int] = {q: 0 for q in chain}
    acc[p] = 1
    for q in reversed(chain):
        w = acc[q]
        for r in tree.proximities(q):
            acc[r] += w
    return WeightedCluster(tree, WeightKind.VIRTUAL, acc)


# -- intersection pairing ---------------------------------------------------


def noether_pairing(a: WeightedCluster, b: WeightedCluster) -> int:
    """Sum of weight products over the shared points."""
    a._same_arena(b)
    if len(b.weight) < len(a.weight):
        a, b = b, a
    return sum(w * b.weight[p] for p, w in a.weight.items() if p in b.weight)


def self_intersection(cluster: WeightedCluster) -> int:
    return sum(w * w for w in cluster.weight.values())
