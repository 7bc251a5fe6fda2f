"""Chromatic simplicial complexes for immediate-snapshot protocols.

A vertex is a pair (process id, view).  A level-0 vertex has the trivial view;
a level-l vertex's view is a set of level-(l-1) vertices containing its own
predecessor.  Vertex identity is its canonical key string, so vertices glue
across facets exactly when their keys coincide:

    level 0:  v(<id>)
    level l:  v(<id>|{<key>,...,<key>})   inner keys sorted lexicographically

Simplexes have pairwise-distinct ids; complexes are given by their facets with
downward closure implicit.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, Optional

from .errors import (
    DimensionMismatch,
    DimensionOutOfRange,
    EmptyIdSet,
    LevelMismatch,
    NotInComplex,
)

ProcessId = int


class Vertex:
    """Immutable (id, view) pair; equality and hashing go through ``key``."""

    __slots__ = ("id", "view", "level", "key", "carrier_ids", "_hash")

    id: ProcessId
    view: Optional[tuple["Vertex", ...]]  # None at level 0, else sorted by key
    level: int
    key: str
    carrier_ids: frozenset[ProcessId]  # ids reachable by unfolding views

    def __init__(self, id: ProcessId, view: Optional[tuple["Vertex", ...]]):
        if id < 0:
            raise EmptyIdSet(f"process id must be >= 0, got {id}")
        object.__setattr__(self, "id", id)
        if view is None:
            object.__setattr__(self, "view", None)
            object.__setattr__(self, "level", 0)
            object.__setattr__(self, "key", f"v({id})")
            object.__setattr__(self, "carrier_ids", frozenset((id,)))
        else:
            members = tuple(sorted(view, key=lambda u: u.key))
            if not members:
                raise EmptyIdSet("view must be non-empty")
            levels = {u.level for u in members}
            if len(levels) != 1:
                raise LevelMismatch(f"view mixes levels {sorted(levels)}")
            ids = [u.id for u in members]
            if len(set(ids)) != len(ids):
                raise DimensionMismatch("view has repeated ids")
            if id not in ids:
                raise NotInComplex(f"view of v({id}|...) must contain id {id}")
            object.__setattr__(self, "view", members)
            object.__setattr__(self, "level", members[0].level + 1)
            inner = ",".join(u.key for u in members)
            object.__setattr__(self, "key", f"v({id}|{{{inner}}})")
            carrier: frozenset[ProcessId] = frozenset().union(
                *(u.carrier_ids for u in members)
            )
            object.__setattr__(self, "carrier_ids", carrier)
        object.__setattr__(self, "_hash", hash(self.key))

    def __setattr__(self, name, value):
        raise AttributeError("Vertex is immutable")

    def __eq__(self, other):
        return isinstance(other, Vertex) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.key

    @property
    def prev(self) -> Optional["Vertex"]:
        """Own predecessor one level down (None at level 0)."""
        if self.view is None:
            return None
        for u in self.view:
            if u.id == self.id:
                return u
        raise AssertionError("view lost its own id")

    def ancestor(self, level: int) -> "Vertex":
        """Own predecessor at the given level (following the self chain)."""
        if not 0 <= level <= self.level:
            raise LevelMismatch(f"no ancestor of level {level} for {self.key}")
        v = self
        while v.level > level:
            v = v.prev  # type: ignore[assignment]
        return v


def base_vertex(id: ProcessId) -> Vertex:
    return Vertex(id, None)


def seen_vertex(id: ProcessId, view: Iterable[Vertex]) -> Vertex:
    return Vertex(id, tuple(view))


class Simplex:
    """Non-empty set of same-level vertices with pairwise-distinct ids."""

    __slots__ = ("vertices", "level", "ids", "key", "_vertex_keys", "_hash")

    vertices: tuple[Vertex, ...]  # sorted by id
    level: int
    ids: frozenset[ProcessId]
    key: tuple[str, ...]  # vertex keys sorted lexicographically

    def __init__(self, vertices: Iterable[Vertex]):
        vs = tuple(sorted(vertices, key=lambda v: v.id))
        if not vs:
            raise EmptyIdSet("simplex must have at least one vertex")
        levels = {v.level for v in vs}
        if len(levels) != 1:
            raise LevelMismatch(f"simplex mixes levels {sorted(levels)}")
        ids = [v.id for v in vs]
        if len(set(ids)) != len(ids):
            raise DimensionMismatch("simplex has repeated ids")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "level", vs[0].level)
        object.__setattr__(self, "ids", frozenset(ids))
        object.__setattr__(self, "key", tuple(sorted(v.key for v in vs)))
        object.__setattr__(self, "_vertex_keys", frozenset(v.key for v in vs))
        object.__setattr__(self, "_hash", hash(self.key))

    def __setattr__(self, name, value):
        raise AttributeError("Simplex is immutable")

    def __eq__(self, other):
        return isinstance(other, Simplex) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "s[" + " ".join(v.key for v in self.vertices) + "]"

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v: Vertex) -> bool:
        return v.key in self._vertex_keys

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def vertex_keys(self) -> frozenset[str]:
        return self._vertex_keys

    @property
    def carrier_ids(self) -> frozenset[ProcessId]:
        return frozenset().union(*(v.carrier_ids for v in self.vertices))

    def face(self, ids: Iterable[ProcessId]) -> "Simplex":
        """Sub-simplex spanned by the given ids."""
        want = frozenset(ids)
        if not want:
            raise EmptyIdSet("face needs at least one id")
        if not want <= self.ids:
            raise NotInComplex(f"ids {sorted(want)} not in {sorted(self.ids)}")
        return Simplex(v for v in self.vertices if v.id in want)

    def faces(self, dim: int) -> list["Simplex"]:
        """All faces of the given dimension, in canonical order."""
        if not 0 <= dim <= self.dim:
            raise DimensionOutOfRange(f"dim {dim} not in 0..{self.dim}")
        return [Simplex(c) for c in combinations(self.vertices, dim + 1)]

    def proper_faces(self) -> list["Simplex"]:
        out: list[Simplex] = []
        for d in range(self.dim):
            out.extend(self.faces(d))
        return out


class Complex:
    """Pure simplicial complex given by facets; downward closure implicit."""

    __slots__ = ("facets", "level", "n", "_vertices", "_vertex_keys",
                 "_facet_keys", "_simplex_cache")

    facets: tuple[Simplex, ...]  # sorted by key
    level: int
    n: int  # vertex count of a facet (all facets here are equal-sized)

    def __init__(self, facets: Iterable[Simplex]):
        seen: dict[tuple[str, ...], Simplex] = {}
        for f in facets:
            seen.setdefault(f.key, f)
        fs = tuple(seen[k] for k in sorted(seen))
        if not fs:
            raise EmptyIdSet("complex must have at least one facet")
        levels = {f.level for f in fs}
        if len(levels) != 1:
            raise LevelMismatch(f"facets mix levels {sorted(levels)}")
        sizes = {len(f) for f in fs}
        if len(sizes) != 1:
            raise DimensionMismatch(f"facets mix sizes {sorted(sizes)}")
        object.__setattr__(self, "facets", fs)
        object.__setattr__(self, "level", fs[0].level)
        object.__setattr__(self, "n", len(fs[0]))
        by_key: dict[str, Vertex] = {}
        for f in fs:
            for v in f.vertices:
                by_key.setdefault(v.key, v)
        vs = tuple(by_key[k] for k in sorted(by_key))
        object.__setattr__(self, "_vertices", vs)
        object.__setattr__(self, "_vertex_keys", frozenset(by_key))
        object.__setattr__(self, "_facet_keys", frozenset(f.key for f in fs))
        object.__setattr__(self, "_simplex_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("Complex is immutable")

    def __repr__(self):
        return f"Complex(level={self.level}, facets={len(self.facets)})"

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self._vertices

    @property
    def vertex_keys(self) -> frozenset[str]:
        return self._vertex_keys

    def __contains__(self, s: Simplex) -> bool:
        return any(s.vertex_keys <= f.vertex_keys for f in self.facets)

    def has_facet(self, s: Simplex) -> bool:
        return s.key in self._facet_keys

    def simplexes(self, dim: Optional[int] = None) -> list[Simplex]:
        """All distinct faces of all facets (of one dimension if given)."""
        cache = self._simplex_cache
        if dim is not None:
            if not 0 <= dim <= self.n - 1:
                raise DimensionOutOfRange(f"dim {dim} not in 0..{self.n - 1}")
            if dim not in cache:
                seen: dict[tuple[str, ...], Simplex] = {}
                for f in self.facets:
                    for s in f.faces(dim):
                        seen.setdefault(s.key, s)
                cache[dim] = [seen[k] for k in sorted(seen)]
            return list(cache[dim])
        out: list[Simplex] = []
        for d in range(self.n):
            out.extend(self.simplexes(d))
        return out

    def euler_characteristic(self) -> int:
        return sum(
            (-1) ** d * len(self.simplexes(d)) for d in range(self.n)
        )


def standard_simplex(n: int) -> Simplex:
    """Level-0 simplex on ids 0..n-1."""
    if n <= 0:
        raise EmptyIdSet(f"need n >= 1, got {n}")
    return Simplex(base_vertex(i) for i in range(n))


def simplex_complex(s: Simplex) -> Complex:
    return Complex((s,))


def carrier(s: Simplex | Vertex, sigma: Simplex) -> frozenset[ProcessId]:
    """Ids of the smallest face of ``sigma`` whose subdivision contains ``s``.

    Equals the transitive id-closure of views, which is validated against
    ``sigma``; raises NotInComplex if ``s`` involves ids outside ``sigma``.
    """
    ids = s.carrier_ids
    if not ids <= sigma.ids:
        raise NotInComplex(
            f"carrier ids {sorted(ids)} not within {sorted(sigma.ids)}"
        )
    return ids


def order_preserving_map(
    src: Iterable[ProcessId], dst: Iterable[ProcessId]
) -> dict[ProcessId, ProcessId]:
    """The unique order-preserving id bijection src -> dst."""
    a, b = sorted(set(src)), sorted(set(dst))
    if len(a) != len(b):
        raise DimensionMismatch(f"|{a}| != |{b}|")
    return dict(zip(a, b))


def relabel_vertex(
    v: Vertex,
    idmap: dict[ProcessId, ProcessId],
    _memo: Optional[dict[str, Vertex]] = None,
) -> Vertex:
    """Apply an id relabeling through all view levels."""
    memo = _memo if _memo is not None else {}
    got = memo.get(v.key)
    if got is not None:
        return got
    if v.view is None:
        out = base_vertex(idmap[v.id])
    else:
        out = seen_vertex(
            idmap[v.id], (relabel_vertex(u, idmap, memo) for u in v.view)
        )
    memo[v.key] = out
    return out


def relabel_simplex(
    s: Simplex,
    idmap: dict[ProcessId, ProcessId],
    _memo: Optional[dict[str, Vertex]] = None,
) -> Simplex:
    memo = _memo if _memo is not None else {}
    return Simplex(relabel_vertex(v, idmap, memo) for v in s.vertices)


def unfold(v: Vertex, level: int) -> frozenset[Vertex]:
    """All level-``level`` vertices reachable through views of ``v``."""
    if not 0 <= level <= v.level:
        raise LevelMismatch(f"level {level} not in 0..{v.level}")
    frontier: set[Vertex] = {v}
    while frontier and next(iter(frontier)).level > level:
        nxt: set[Vertex] = set()
        for u in frontier:
            nxt.update(u.view)  # type: ignore[arg-type]
        frontier = nxt
    return frozenset(frontier)


def iter_vertex_tree(v: Vertex) -> Iterator[Vertex]:
    """The vertex and every vertex reachable through its views."""
    stack = [v]
    seen: set[str] = set()
    while stack:
        u = stack.pop()
        if u.key in seen:
            continue
        seen.add(u.key)
        yield u
        if u.view is not None:
            stack.extend(u.view)
