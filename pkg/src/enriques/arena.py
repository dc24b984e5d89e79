"""The ambient tree of infinitely near points.

An :class:`ArenaTree` owns every point that any cluster may mention.  Points
are created once and never deleted; a :data:`PointId` is simply the index of
the point's record in the arena, so ids are stable across all later
extensions (the recovery algorithms only ever append satellite points).

Each non-origin point carries a ``parent`` (the point in whose first
neighbourhood it appeared) and, for satellite points, a ``second_proximity``:
the earlier point whose exceptional divisor the point also lies on.  A point
is *free* when it is proximate to its parent only, *satellite* when it is
proximate to exactly two points; no other arrangement occurs.

Labels are decorative.  All structural queries and all equality notions use
ids only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import (
    Diagnostic,
    DuplicateOrigin,
    DuplicateSatellite,
    IllegalProximity,
    UnknownParent,
    UnknownPoint,
)

PointId = int


@dataclass(frozen=True)
class PointRecord:
    """One infinitely near point: identity, parent link, proximity."""

    id: PointId
    parent: Optional[PointId]
    second_proximity: Optional[PointId]
    label: Optional[str] = None


class ArenaTree:
    """Append-only arena of :class:`PointRecord`.

    Records are topologically sorted: every referenced id precedes its
    referrer.  Construction through :meth:`add_point` enforces all structural
    invariants eagerly; :meth:`from_records` admits raw (possibly broken)
    data so that :meth:`validate` can report problems as diagnostics.

    A fully built arena is safe to share read-only between threads; the
    operations that extend it (satellite creation during recovery) require
    exclusive access.
    """

    def __init__(self) -> None:
        self._records: list[PointRecord] = []
        self._children: list[list[PointId]] = []
        self._satellite_index: dict[tuple[PointId, PointId], PointId] = {}
        self._ancestor_cache: dict[PointId, tuple[PointId, ...]] = {}

    # -- construction --------------------------------------------------

    def add_point(
        self,
        parent: Optional[PointId] = None,
        second_proximity: Optional[PointId] = None,
        label: Optional[str] = None,
    ) -> PointId:
        """Append a new point and return its id.

        With no ``parent`` the point becomes the origin (allowed once).
        A ``second_proximity`` must be one of the points the parent itself
        is proximate to, and no existing point may already carry the same
        proximity pair.
        """
        new_id = len(self._records)
        if parent is None:
            if second_proximity is not None:
                raise IllegalProximity("the origin has no proximities")
            if any(r.parent is None for r in self._records):
                raise DuplicateOrigin("arena already has an origin")
        else:
            if not self._has(parent):
                raise UnknownParent(f"no point with id {parent}")
            if second_proximity is not None:
                if not self._has(second_proximity):
                    raise UnknownPoint(f"no point with id {second_proximity}")
                if second_proximity not in self.proximities(parent):
                    raise IllegalProximity(
                        f"point {second_proximity} is not among the"
                        f" proximities of parent {parent}"
                    )
                pair = (parent, second_proximity)
                if pair in self._satellite_index:
                    raise DuplicateSatellite(
                        f"a satellite proximate to {parent} and"
                        f" {second_proximity} already exists"
                    )
        record = PointRecord(new_id, parent, second_proximity, label)
        self._append(record)
        return new_id

    @classmethod
    def from_records(
        cls,
        records: list[tuple[Optional[PointId], Optional[PointId], Optional[str]]],
    ) -> "ArenaTree":
        """Build an arena from raw (parent, second_proximity, label) triples.

        No invariants are enforced; run :meth:`validate` afterwards.
        """
        tree = cls()
        for i, (parent, second, label) in enumerate(records):
            tree._append(PointRecord(i, parent, second, label))
        return tree

    def _append(self, record: PointRecord) -> None:
        self._records.append(record)
        self._children.append([])
        p = record.parent
        if p is not None and 0 <= p < record.id:
            self._children[p].append(record.id)
        if record.parent is not None and record.second_proximity is not None:
            self._satellite_index.setdefault(
                (record.parent, record.second_proximity), record.id
            )

    def clone(self) -> "ArenaTree":
        """Independent copy sharing no mutable state (records are frozen)."""
        tree = ArenaTree()
        tree._records = list(self._records)
        tree._children = [list(c) for c in self._children]
        tree._satellite_index = dict(self._satellite_index)
        return tree

    # -- basic queries --------------------------------------------------

    def _has(self, p: PointId) -> bool:
        return isinstance(p, int) and 0 <= p < len(self._records)

    def _check(self, p: PointId) -> PointRecord:
        if not self._has(p):
            raise UnknownPoint(f"no point with id {p}")
        return self._records[p]

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, p: object) -> bool:
        return isinstance(p, int) and 0 <= p < len(self._records)

    def points(self) -> Iterator[PointId]:
        return iter(range(len(self._records)))

    def record(self, p: PointId) -> PointRecord:
        return self._check(p)

    def parent(self, p: PointId) -> Optional[PointId]:
        return self._check(p).parent

    def second_proximity(self, p: PointId) -> Optional[PointId]:
        return self._check(p).second_proximity

    def label(self, p: PointId) -> Optional[str]:
        return self._check(p).label

    @property
    def origin(self) -> Optional[PointId]:
        for r in self._records:
            if r.parent is None:
                return r.id
        return None

    def is_origin(self, p: PointId) -> bool:
        return self._check(p).parent is None

    def is_free(self, p: PointId) -> bool:
        """True for non-origin points proximate to their parent only.

        The origin is counted as free: it is not satellite, and every rule
        that branches on freeness treats it like a free point.
        """
        return self._check(p).second_proximity is None

    def is_satellite(self, p: PointId) -> bool:
        return self._check(p).second_proximity is not None

    # -- proximity structure ---------------------------------------------

    def proximities(self, q: PointId) -> set[PointId]:
        """The one or two points ``q`` is proximate to."""
        r = self._check(q)
        out: set[PointId] = set()
        if r.parent is not None:
            out.add(r.parent)
        if r.second_proximity is not None:
            out.add(r.second_proximity)
        return out

    def is_proximate(self, q: PointId, p: PointId) -> bool:
        r = self._check(q)
        self._check(p)
        return p == r.parent or p == r.second_proximity

    def children(self, p: PointId) -> set[PointId]:
        self._check(p)
        return set(self._children[p])

    def child_list(self, p: PointId) -> list[PointId]:
        """Children in arena order (cheaper than :meth:`children`)."""
        self._check(p)
        return self._children[p]

    def satellite_children(self, p: PointId) -> set[PointId]:
        self._check(p)
        return {
            c for c in self._children[p]
            if self._records[c].second_proximity is not None
        }

    def find_satellite(
        self, parent: PointId, second_proximity: PointId
    ) -> Optional[PointId]:
        """The point with exactly this proximity pair, if it exists."""
        return self._satellite_index.get((parent, second_proximity))

    def ancestors(self, p: PointId) -> tuple[PointId, ...]:
        """The chain from the origin up to and including ``p``."""
        self._check(p)
        cached = self._ancestor_cache.get(p)
        if cached is not None:
            return cached
        chain: list[PointId] = []
        q: Optional[PointId] = p
        while q is not None:
            chain.append(q)
            q = self._records[q].parent
        chain.reverse()
        result = tuple(chain)
        self._ancestor_cache[p] = result
        return result

    def precedes(self, p: PointId, q: PointId) -> bool:
        """Whether ``p`` lies on the chain of ``q`` (ancestor or equal)."""
        self._check(p)
        if p == q:
            return True
        if p > q:
            return False
        r: Optional[PointId] = self._check(q).parent
        while r is not None and r >= p:
            if r == p:
                return True
            r = self._records[r].parent
        return False

    # -- validation ------------------------------------------------------

    def validate(self) -> list[Diagnostic]:
        """Report every violated structural invariant (empty list = valid)."""
        out: list[Diagnostic] = []
        origin_seen = False
        pairs_seen: set[tuple[PointId, PointId]] = set()
        for r in self._records:
            if r.parent is None:
                if r.second_proximity is not None:
                    out.append(Diagnostic(
                        "IllegalProximity", r.id,
                        "origin cannot have a second proximity"))
                if origin_seen:
                    out.append(Diagnostic(
                        "DuplicateOrigin", r.id,
                        "more than one point without a parent"))
                origin_seen = True
                continue
            if r.parent == r.id or r.second_proximity == r.id:
                out.append(Diagnostic(
                    "SelfReference", r.id, "point references itself"))
                continue
            if not 0 <= r.parent < r.id:
                out.append(Diagnostic(
                    "UnknownParent", r.id,
                    f"parent {r.parent} does not precede the point"))
                continue
            if r.second_proximity is None:
                continue
            if not 0 <= r.second_proximity < r.id:
                out.append(Diagnostic(
                    "UnknownPoint", r.id,
                    f"second proximity {r.second_proximity} does not"
                    " precede the point"))
                continue
            if r.second_proximity not in self.proximities(r.parent):
                out.append(Diagnostic(
                    "IllegalProximity", r.id,
                    f"second proximity {r.second_proximity} is not among"
                    f" the proximities of parent {r.parent}"))
                continue
            pair = (r.parent, r.second_proximity)
            if pair in pairs_seen:
                out.append(Diagnostic(
                    "DuplicateSatellite", r.id,
                    f"another satellite already carries the proximity"
                    f" pair {pair}"))
            pairs_seen.add(pair)
        return out

    def __repr__(self) -> str:
        return f"ArenaTree({len(self._records)} points)"
