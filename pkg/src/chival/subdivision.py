"""Standard chromatic subdivision of chromatic complexes.

One facet of the subdivision per ordered partition (schedule) of the ids: in
the facet for blocks B_1..B_t, the vertex of id i in B_j sees exactly the
parent vertices with ids in B_1 u .. u B_j.  Vertices glue across facets through
their canonical keys, so subdividing facet-by-facet yields the subdivision of
the whole complex.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Iterable, Optional

from .core import (
    Complex,
    ProcessId,
    Simplex,
    Vertex,
    order_preserving_map,
    relabel_vertex,
    seen_vertex,
)
from .errors import (
    DimensionMismatch,
    EmptyIdSet,
    NotASingleSubdivision,
    ResourceLimit,
)

DEFAULT_FACET_BUDGET = 10**7

Schedule = tuple[frozenset[ProcessId], ...]


def ordered_partitions(ids: Iterable[ProcessId]) -> list[Schedule]:
    """All ordered partitions of ``ids`` into non-empty blocks.

    Deterministic order: first blocks enumerated by size then lexicographically,
    recursing on the rest.  The count is the Fubini number of ``len(ids)``.
    """
    elems = tuple(sorted(set(ids)))
    if not elems:
        raise EmptyIdSet("ordered_partitions of empty id set")

    def rec(rest: tuple[ProcessId, ...]) -> list[Schedule]:
        if not rest:
            return [()]
        out: list[Schedule] = []
        for size in range(1, len(rest) + 1):
            for block in combinations(rest, size):
                chosen = frozenset(block)
                remaining = tuple(x for x in rest if x not in chosen)
                for tail in rec(remaining):
                    out.append((chosen,) + tail)
        return out

    return rec(elems)


def fubini(n: int) -> int:
    """Ordered-partition count via the standard recurrence."""
    if n < 0:
        raise EmptyIdSet(f"need n >= 0, got {n}")
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(comb(m, k) * a[m - k] for k in range(1, m + 1)))
    return a[n]


def schedule_facet(
    s: Simplex,
    schedule: Schedule,
    _cache: Optional[dict[str, Vertex]] = None,
) -> Simplex:
    """The facet of the one-round subdivision of ``s`` for one schedule."""
    cache = _cache if _cache is not None else {}
    by_id = {v.id: v for v in s.vertices}
    out: list[Vertex] = []
    prefix: list[Vertex] = []
    for block in schedule:
        prefix = prefix + [by_id[i] for i in sorted(block)]
        view = tuple(prefix)
        for i in block:
            v = seen_vertex(i, view)
            out.append(cache.setdefault(v.key, v))
    return Simplex(out)


def subdivide_simplex(s: Simplex) -> Complex:
    """One round of chromatic subdivision of a single simplex."""
    cache: dict[str, Vertex] = {}
    return Complex(
        schedule_facet(s, sched, cache)
        for sched in ordered_partitions(s.ids)
    )


def subdivide_complex(K: Complex, budget: int = DEFAULT_FACET_BUDGET) -> Complex:
    """One round of chromatic subdivision of every facet, glued by keys."""
    predicted = len(K.facets) * fubini(K.n)
    if predicted > budget:
        raise ResourceLimit(
            f"subdivision would have {predicted} facets (budget {budget})"
        )
    cache: dict[str, Vertex] = {}
    facets: list[Simplex] = []
    for f in K.facets:
        scheds = ordered_partitions(f.ids)
        for sched in scheds:
            facets.append(schedule_facet(f, sched, cache))
    return Complex(facets)


def iterated_subdivision(
    base: Simplex | Complex,
    rounds: int,
    budget: int = DEFAULT_FACET_BUDGET,
) -> Complex:
    """``rounds`` rounds of chromatic subdivision (0 returns the base complex)."""
    K = Complex((base,)) if isinstance(base, Simplex) else base
    if rounds < 0:
        raise EmptyIdSet(f"need rounds >= 0, got {rounds}")
    predicted = len(K.facets) * fubini(K.n) ** rounds
    if predicted > budget:
        raise ResourceLimit(
            f"{rounds} rounds would reach {predicted} facets (budget {budget})"
        )
    for _ in range(rounds):
        K = subdivide_complex(K, budget)
    return K


def schedule_of(facet: Simplex) -> Schedule:
    """Recover the schedule that produced a subdivision facet.

    Vertices of one block share their view; blocks are ordered by view size.
    """
    if facet.level == 0:
        raise NotASingleSubdivision("level-0 simplexes have no schedule")
    groups: dict[tuple[str, ...], set[ProcessId]] = {}
    for v in facet.vertices:
        groups.setdefault(tuple(u.key for u in v.view), set()).add(v.id)
    blocks = sorted(groups.items(), key=lambda kv: len(kv[0]))
    seen: set[ProcessId] = set()
    for view_keys, ids in blocks:
        seen.update(ids)
        if len(view_keys) != len(seen):
            raise NotASingleSubdivision(
                f"views do not nest as schedule prefixes in {facet!r}"
            )
    return tuple(frozenset(ids) for _, ids in blocks)


def parent_facet(facet: Simplex) -> Simplex:
    """The simplex one level up whose subdivision produced this facet."""
    if facet.level == 0:
        raise NotASingleSubdivision("level-0 simplexes have no parent")
    members: dict[str, Vertex] = {}
    for v in facet.vertices:
        for u in v.view:
            members.setdefault(u.key, u)
    return Simplex(members.values())


def orientation_sign(facet: Simplex) -> int:
    """Orientation of a subdivision facet relative to its level-0 ancestor.

    A facet produced by a schedule with t blocks flips orientation by
    (-1)^(n-t) relative to its parent; signs accumulate through the levels.
    """
    sign = 1
    f = facet
    while f.level > 0:
        t = len(schedule_of(f))
        sign *= (-1) ** (len(f) - t)
        f = parent_facet(f)
    return sign


def central_simplex(K: Complex) -> Simplex:
    """The facet of a one-round subdivision whose vertices see everything."""
    if K.level == 0:
        raise NotASingleSubdivision("complex is not a subdivision")
    members: dict[str, Vertex] = {}
    for v in K.vertices:
        if v.view is None:
            raise NotASingleSubdivision("level-0 vertex in subdivision")
        for u in v.view:
            members.setdefault(u.key, u)
    ids = [u.id for u in members.values()]
    if len(set(ids)) != len(ids) or len(ids) != K.n:
        raise NotASingleSubdivision(
            "complex is not the subdivision of a single simplex"
        )
    full = tuple(sorted(members.values(), key=lambda u: u.key))
    hits = [f for f in K.facets if all(v.view == full for v in f.vertices)]
    if len(hits) != 1:
        raise NotASingleSubdivision(
            f"expected one all-seeing facet, found {len(hits)}"
        )
    return hits[0]


def symmetry_bijection(
    src: Simplex, dst: Simplex, ell: int, budget: int = DEFAULT_FACET_BUDGET
) -> dict[str, Vertex]:
    """Vertex map of chi^ell(src) -> chi^ell(dst) induced by id order.

    Returned as a mapping from source vertex key to destination vertex.
    """
    if len(src) != len(dst):
        raise DimensionMismatch(
            f"faces have sizes {len(src)} and {len(dst)}"
        )
    idmap = order_preserving_map(src.ids, dst.ids)
    K = iterated_subdivision(src, ell, budget)
    memo: dict[str, Vertex] = {}
    return {v.key: relabel_vertex(v, idmap, memo) for v in K.vertices}


def vertices_in_face(K: Complex, ids: frozenset[ProcessId]) -> list[Vertex]:
    """Vertices of the subdivision lying in the face spanned by ``ids``."""
    return [v for v in K.vertices if v.carrier_ids <= ids]
