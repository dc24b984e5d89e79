"""Forward computations from a curve's own singular cluster.

Everything here starts from the answer -- a curve's weighted cluster of
singular points with effective multiplicities -- and derives the quantities
the recovery algorithm reconstructs from polar base points: rupture points,
invariant quotients, polar invariants.  The two directions share no code
paths, so agreement between them is a meaningful check.

A multiplicity cluster describes an actual curve exactly when it is
consistent (no negative excess) and *singular-saturated*: every point is
multiple, or satellite, or precedes a satellite point of the cluster.  The
excess at a point then counts the branches of the curve that leave the
cluster there, each through its own free simple point in the first
neighbourhood.  Hence the number of free points of the curve in the first
neighbourhood of p is

    (free cluster children of p)  +  excess at p,

and p is a rupture point when this count reaches 2 for free p, or 1 for
satellite p.

Branches are never materialized: a branch leaving the cluster at t is
equisingular to a germ through the chain cluster of t, which is all the
point-versus-branch comparison needs.

The invariant quotient at p is pairing(curve, chain cluster of p) divided
by the chain's origin weight; the polar invariants of the curve are the
invariant quotients at its rupture points.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable

from .arena import ArenaTree, PointId
from .cluster import (
    WeightedCluster,
    WeightKind,
    excesses,
    is_consistent,
    noether_pairing,
    unibranch_chain,
)
from .errors import Diagnostic, NegativeResidual, UnknownPoint
from .ordering import compare_point_to_branch, defining_free_point


def validate_curve_cluster(curve: WeightedCluster) -> list[Diagnostic]:
    """Diagnostics for the curve-cluster invariants (empty = valid)."""
    out: list[Diagnostic] = []
    curve.require_kind(WeightKind.MULTIPLICITY)
    tree = curve.tree
    rho = excesses(curve)
    for p, r in rho.items():
        if r < 0:
            out.append(Diagnostic(
                "Inconsistent", p, f"excess {r} is negative"))
    has_satellite = {p: tree.is_satellite(p) for p in curve.points}
    for p in sorted(curve.points, reverse=True):
        parent = tree.parent(p)
        if has_satellite[p] and parent in has_satellite:
            has_satellite[parent] = True
    for p in curve.points:
        if curve.weight[p] == 1 and not has_satellite[p]:
            out.append(Diagnostic(
                "NotSaturated", p,
                "simple free point with no satellite above it"))
    origin = tree.origin
    if origin is not None and origin in curve:
        if curve.weight[origin] < 2 and not any(
                tree.is_satellite(p) for p in curve.points):
            out.append(Diagnostic(
                "NotSingular", origin,
                "cluster describes a smooth curve"))
    return out


def free_count_first_neighbourhood(curve: WeightedCluster, p: PointId) -> int:
    """Number of free points of the curve in the first neighbourhood of p.

    Free cluster children plus the excess at p; the excess counts the
    branches continuing to free non-singular points outside the cluster.
    """
    if p not in curve:
        raise UnknownPoint(f"point {p} is not in the curve cluster")
    tree = curve.tree
    residual = curve.weight[p]
    free_children = 0
    for q in curve.points:
        if tree.is_proximate(q, p):
            residual -= curve.weight[q]
        if tree.parent(q) == p and tree.is_free(q):
            free_children += 1
    if residual < 0:
        raise NegativeResidual(
            f"multiplicity bookkeeping at point {p} is negative")
    return free_children + residual


def rupture_points(curve: WeightedCluster) -> set[PointId]:
    """Points with >= 2 curve-free points after them (>= 1 for satellites)."""
    out = set()
    for p in curve.points:
        needed = 1 if curve.tree.is_satellite(p) else 2
        if free_count_first_neighbourhood(curve, p) >= needed:
            out.add(p)
    return out


def invariant_quotient(curve: WeightedCluster, p: PointId) -> Fraction:
    """pairing(curve, chain of p) / origin weight of the chain.

    ``p`` may lie outside the curve cluster; chain points the curve does
    not weight simply contribute nothing (multiplicity 0), which makes the
    result a lower bound rather than the true quotient in that case.
    """
    chain = unibranch_chain(curve.tree, p)
    return Fraction(noether_pairing(curve, chain), chain[curve.tree.origin])


def chain_inside(curve: WeightedCluster, p: PointId) -> bool:
    """Whether the whole chain of ``p`` carries curve multiplicities."""
    return all(q in curve for q in curve.tree.ancestors(p))


def polar_invariants(curve: WeightedCluster) -> set[Fraction]:
    return {invariant_quotient(curve, q) for q in rupture_points(curve)}


def polar_invariants_local(curve: WeightedCluster, p: PointId) -> set[Fraction]:
    """Invariant quotients at rupture points equal to or satellite of ``p``."""
    tree = curve.tree
    return {
        invariant_quotient(curve, q)
        for q in rupture_points(curve)
        if q == p or (tree.is_satellite(q) and defining_free_point(tree, q) == p)
    }


def branch_clusters(curve: WeightedCluster) -> list[WeightedCluster]:
    """One chain cluster per leaving branch, with excess multiplicity.

    A branch that leaves the curve cluster at t is equisingular to a germ
    through the chain cluster of t; a point of excess k contributes k such
    branches (returned once each).
    """
    out = []
    for t, r in sorted(excesses(curve).items()):
        for _ in range(r):
            chain = unibranch_chain(curve.tree, t)
            out.append(WeightedCluster(
                curve.tree, WeightKind.MULTIPLICITY, dict(chain.weight)))
    return out


def has_bigger_branch(curve: WeightedCluster, q: PointId) -> bool:
    """Whether some branch of the curve is bigger than the point ``q``."""
    return any(
        compare_point_to_branch(curve.tree, q, branch)
        for branch in branch_clusters(curve)
    )


def check_growth(
    curve: WeightedCluster,
    samples: Iterable[tuple[PointId, PointId]],
) -> list[str]:
    """Check monotonicity of invariant quotients on sampled pairs.

    Each sample (q1, q2) must have q1 satellite, q2 equal to or satellite
    of the same free point p, and q1 smaller than q2.  With p' the point p
    is proximate to, the checks are

        I(p') <= I(q1),  equality iff p is not on the curve, and
        I(q1) <= I(q2),  equality iff no branch of the curve is bigger
                         than q1.

    Returns a description of every violated check (expected: none).
    """
    tree = curve.tree
    violations = []
    for q1, q2 in samples:
        p = defining_free_point(tree, q1)
        p_prev = tree.parent(p)
        i_prev = invariant_quotient(curve, p_prev)
        i_q1 = invariant_quotient(curve, q1)
        i_q2 = invariant_quotient(curve, q2)
        if not i_prev <= i_q1:
            violations.append(f"I({p_prev}) > I({q1})")
        if (i_prev == i_q1) != (p not in curve):
            violations.append(
                f"equality I({p_prev}) = I({q1}) disagrees with"
                f" membership of {p}")
        if not i_q1 <= i_q2:
            violations.append(f"I({q1}) > I({q2})")
        if (i_q1 == i_q2) != (not has_bigger_branch(curve, q1)):
            violations.append(
                f"equality I({q1}) = I({q2}) disagrees with branches"
                f" bigger than {q1}")
    return violations


# -- random generation --------------------------------------------------------


def random_proximity_tree(
    rng: random.Random, max_points: int
) -> ArenaTree:
    """A random arena: free children anywhere, satellites where legal."""
    tree = ArenaTree()
    tree.add_point(label="O")
    n_points = rng.randint(1, max(1, max_points - 1))
    for _ in range(n_points):
        parent = rng.randrange(len(tree))
        legal_seconds = [
            s for s in tree.proximities(parent)
            if tree.find_satellite(parent, s) is None
        ]
        if legal_seconds and rng.random() < 0.5:
            tree.add_point(parent, rng.choice(legal_seconds))
        else:
            tree.add_point(parent)
    return tree


def _random_weights_from_excesses(
    rng: random.Random, tree: ArenaTree, max_excess: int
) -> dict[PointId, int]:
    """Consistent weights: pick excesses >= 0, force >= 1 at childless points."""
    weights: dict[PointId, int] = {p: 0 for p in tree.points()}
    for p in sorted(tree.points(), reverse=True):
        rho = rng.randint(0, max_excess)
        if not tree.child_list(p):
            rho = max(1, rho)
        weights[p] += rho
        for q in tree.proximities(p):
            weights[q] += weights[p]
    return weights


def random_curve(
    seed: int, max_points: int = 12, max_multiplicity: int = 40
) -> WeightedCluster:
    """Deterministic random valid curve cluster.

    Draws a proximity tree and excess-generated multiplicities, prunes the
    non-singular points (free, simple, nothing satellite above), and
    retries with a derived seed until the outcome is singular and within
    the multiplicity bound.  Retrying shrinks the tree so termination is
    guaranteed.
    """
    for attempt in range(64):
        rng = random.Random(seed * 997 + attempt)
        shrink = max(2, max_points - attempt // 4)
        tree = random_proximity_tree(rng, shrink)
        weights = _random_weights_from_excesses(rng, tree, max_excess=2)
        if weights[tree.origin] > max_multiplicity:
            continue
        has_satellite = {p: tree.is_satellite(p) for p in tree.points()}
        for p in sorted(tree.points(), reverse=True):
            parent = tree.parent(p)
            if has_satellite[p] and parent is not None:
                has_satellite[parent] = True
        singular = {
            p: w for p, w in weights.items()
            if w >= 2 or has_satellite[p]
        }
        if not singular:
            continue
        curve = WeightedCluster(tree, WeightKind.MULTIPLICITY, singular)
        if not is_consistent(curve):
            continue
        if validate_curve_cluster(curve):
            continue
        return curve
    raise RuntimeError(f"no valid curve cluster found for seed {seed}")
