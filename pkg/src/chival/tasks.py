"""Valency tasks and coloring predicates.

A valency task assigns every simplex of an iterated subdivision a non-empty
set of allowed decisions (its valency).  A coloring of a deeper subdivision is
*consistent* when the decisions appearing over chi^m of a simplex stay within
its valency, and *complete* when they exhaust it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .core import (
    Complex,
    Simplex,
    Vertex,
    carrier,
    order_preserving_map,
    relabel_vertex,
    unfold,
)
from .errors import LevelMismatch, NotInComplex, NotSperner

Valency = frozenset[int]


@dataclass(frozen=True)
class ValencyTask:
    """A named valency map over the simplexes of chi^level(sigma)."""

    kind: str
    sigma: Simplex
    level: int
    alphabet: Valency
    _val: Callable[[Simplex], Valency]

    def val(self, tau: Simplex) -> Valency:
        if tau.level != self.level:
            raise LevelMismatch(
                f"task maps level {self.level}, got level {tau.level}"
            )
        return self._val(tau)


def set_agreement_task(sigma: Simplex, level: int) -> ValencyTask:
    """Decisions are seen ids; small simplexes are pinned to their own ids."""
    n = len(sigma)

    def val(tau: Simplex) -> Valency:
        if len(tau) <= n - 2:
            return frozenset(tau.ids)
        return frozenset(carrier(tau, sigma))

    return ValencyTask(
        kind="sa",
        sigma=sigma,
        level=level,
        alphabet=frozenset(sigma.ids),
        _val=val,
    )


def symmetry_breaking_task(sigma: Simplex, level: int) -> ValencyTask:
    """Binary decisions; simplexes of dimension <= n-3 are pinned to {1}."""
    n = len(sigma)

    def val(tau: Simplex) -> Valency:
        if tau.dim <= n - 3:
            return frozenset((1,))
        return frozenset((0, 1))

    return ValencyTask(
        kind="wsb",
        sigma=sigma,
        level=level,
        alphabet=frozenset((0, 1)),
        _val=val,
    )


def table_task(
    kind: str,
    sigma: Simplex,
    level: int,
    alphabet: Valency,
    table: dict[tuple[str, ...], Valency],
) -> ValencyTask:
    """Extensional task from an explicit simplex-key table."""

    def val(tau: Simplex) -> Valency:
        got = table.get(tau.key)
        if got is None:
            raise NotInComplex(f"no valency recorded for {tau!r}")
        return got

    return ValencyTask(
        kind=kind, sigma=sigma, level=level, alphabet=alphabet, _val=val
    )


@dataclass(frozen=True)
class Coloring:
    """Decision per vertex key of one subdivision level."""

    level: int
    alphabet: Valency
    decide: dict[str, int]

    def __post_init__(self):
        bad = {v for v in self.decide.values() if v not in self.alphabet}
        if bad:
            raise NotSperner(f"decisions {sorted(bad)} outside alphabet")

    def of(self, v: Vertex) -> int:
        try:
            return self.decide[v.key]
        except KeyError:
            raise NotInComplex(f"no decision for {v.key}") from None

    def decision_set(self, vertices: Iterable[Vertex]) -> Valency:
        return frozenset(self.decide[v.key] for v in vertices)


def is_sperner(c: Coloring, K: Complex, sigma: Simplex) -> tuple[bool, list[str]]:
    """Every vertex decides an id it has (transitively) seen."""
    bad = [
        v.key
        for v in K.vertices
        if c.of(v) not in carrier(v, sigma)
    ]
    return (not bad, bad)


def is_symmetric_coloring(
    c: Coloring, K: Complex, sigma: Simplex
) -> tuple[bool, list[str]]:
    """Decisions agree across order-preserving maps of equal-dim proper faces."""
    if K.level != c.level:
        raise LevelMismatch("coloring and complex levels differ")
    witnesses: list[str] = []
    n = len(sigma)
    for d in range(n - 1):
        faces = sigma.faces(d)
        for a in faces:
            for b in faces:
                if a.ids == b.ids:
                    continue
                idmap = order_preserving_map(a.ids, b.ids)
                memo: dict[str, Vertex] = {}
                for v in K.vertices:
                    if not v.carrier_ids <= a.ids:
                        continue
                    w = relabel_vertex(v, idmap, memo)
                    if c.decide.get(v.key) != c.decide.get(w.key):
                        witnesses.append(f"{v.key} vs {w.key}")
    return (not witnesses, witnesses)


def support_groups(
    colored: Complex, level: int
) -> dict[frozenset[str], list[str]]:
    """Group colored-vertex keys by their unfolded level-``level`` support.

    Independent of any coloring, so callers running many colorings over the
    same pair of complexes can compute this once.
    """
    if colored.level < level:
        raise LevelMismatch("colored complex is above the requested level")
    groups: dict[frozenset[str], list[str]] = {}
    for v in colored.vertices:
        support = frozenset(u.key for u in unfold(v, level))
        groups.setdefault(support, []).append(v.key)
    return groups


def subdivision_decision_sets(
    c: Coloring,
    colored: Complex,
    L: Complex,
    groups: Optional[dict[frozenset[str], list[str]]] = None,
) -> dict[tuple[str, ...], Valency]:
    """Decision set over chi^m(tau) for every simplex tau of L.

    ``colored`` is the level-(L.level + m) complex that ``c`` colors; a colored
    vertex lies in chi^m(tau) exactly when its unfolded support is within tau.
    """
    if groups is None:
        groups = support_groups(colored, L.level)
    out: dict[tuple[str, ...], Valency] = {}
    for tau in L.simplexes():
        decisions: set[int] = set()
        keys = sorted(tau.vertex_keys)
        for mask in range(1, 1 << len(keys)):
            support = frozenset(
                keys[i] for i in range(len(keys)) if mask >> i & 1
            )
            for vk in groups.get(support, ()):
                decisions.add(c.decide[vk])
        out[tau.key] = frozenset(decisions)
    return out


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    complete: bool
    witnesses: tuple[str, ...] = ()


def check_consistent_complete(
    c: Coloring,
    task: ValencyTask,
    L: Complex,
    colored: Complex,
    groups: Optional[dict[frozenset[str], list[str]]] = None,
) -> ConsistencyReport:
    """Compare decision sets over chi^m of every simplex of L with the task."""
    if L.level != task.level:
        raise LevelMismatch("complex level differs from task level")
    sets = subdivision_decision_sets(c, colored, L, groups)
    consistent = True
    complete = True
    witnesses: list[str] = []
    for tau in L.simplexes():
        got = sets[tau.key]
        want = task.val(tau)
        if not got <= want:
            consistent = False
            witnesses.append(
                f"decisions {sorted(got)} exceed valency {sorted(want)} on {tau!r}"
            )
        elif got != want:
            complete = False
            witnesses.append(
                f"decisions {sorted(got)} miss valency {sorted(want)} on {tau!r}"
            )
    return ConsistencyReport(
        consistent=consistent, complete=complete, witnesses=tuple(witnesses)
    )


def census_fully_colored(
    c: Coloring, within: Complex
) -> tuple[int, list[Simplex]]:
    """Facets whose vertices decide pairwise-distinct values."""
    hits = [
        f
        for f in within.facets
        if len({c.decide[v.key] for v in f.vertices}) == len(f)
    ]
    return len(hits), hits


def census_monochromatic(
    c: Coloring, within: Complex
) -> tuple[int, list[Simplex]]:
    """Facets whose vertices all decide the same value."""
    hits = [
        f
        for f in within.facets
        if len({c.decide[v.key] for v in f.vertices}) == 1
    ]
    return len(hits), hits


def id_coloring(K: Complex, alphabet: Valency) -> Coloring:
    """Every vertex decides its own process id."""
    return Coloring(
        level=K.level,
        alphabet=alphabet,
        decide={v.key: v.id for v in K.vertices},
    )
