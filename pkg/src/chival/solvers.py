"""Constructive local solutions over one extra subdivision round.

Given a facet tau of chi^ell(sigma), these builders color chi^(ell+1)(sigma)
so that the coloring is consistent and complete for the task's valencies
everywhere, yet free of violating facets (rainbow for set agreement,
monochromatic for symmetry breaking) within chi(tau).  Every construction
re-checks its own promises by census and raises UnsatisfiedPostcondition on
any miss, so a returned solution is a verified one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .core import (
    Complex,
    ProcessId,
    Simplex,
    Vertex,
    order_preserving_map,
    relabel_vertex,
    seen_vertex,
    standard_simplex,
)
from .errors import (
    AmbiguousReplication,
    BadFace,
    DimensionOutOfRange,
    ForcedValencyViolated,
    NotInComplex,
    UnsatisfiedPostcondition,
    UnsupportedN,
)
from .subdivision import (
    DEFAULT_FACET_BUDGET,
    central_simplex,
    iterated_subdivision,
    subdivide_complex,
    subdivide_simplex,
)
from .tasks import (
    Coloring,
    ConsistencyReport,
    Valency,
    ValencyTask,
    census_fully_colored,
    census_monochromatic,
    check_consistent_complete,
    is_sperner,
    is_symmetric_coloring,
    set_agreement_task,
    support_groups,
    symmetry_breaking_task,
)


def view_ids(v: Vertex) -> frozenset[ProcessId]:
    """Ids in the one-step view: the face of the parent simplex v sits over."""
    if v.view is None:
        return frozenset((v.id,))
    return frozenset(u.id for u in v.view)


def is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, n + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return False


# ---------------------------------------------------------------------------
# shared workspace


class SolverContext:
    """Complexes and indexes shared by every local solution over (n, ell)."""

    def __init__(self, n: int, ell: int, budget: int = DEFAULT_FACET_BUDGET):
        if n < 3:
            raise UnsupportedN(f"local solutions need n >= 3, got {n}")
        if ell < 1:
            raise DimensionOutOfRange(f"need ell >= 1, got {ell}")
        self.n = n
        self.ell = ell
        self.sigma = standard_simplex(n)
        self.L = iterated_subdivision(self.sigma, ell, budget)
        self.M = subdivide_complex(self.L, budget)
        self.groups = support_groups(self.M, ell)
        self.vertex_of = {v.key: v for v in self.M.vertices}
        self.sa_task = set_agreement_task(self.sigma, ell)
        self.wsb_task = symmetry_breaking_task(self.sigma, ell)
        self._chi: dict[tuple[str, ...], Complex] = {}

    def chi(self, tau: Simplex) -> Complex:
        """The one-round subdivision of tau, as a subcomplex of M."""
        got = self._chi.get(tau.key)
        if got is None:
            got = subdivide_simplex(tau)
            self._chi[tau.key] = got
        return got

    def require_facet(self, tau: Simplex) -> None:
        if not self.L.has_facet(tau):
            raise NotInComplex(f"{tau!r} is not a facet of chi^{self.ell}")

    def decisions_over(
        self, decide: dict[str, int], s: Simplex
    ) -> set[int]:
        """Decision set over the one-round subdivision of a level-ell simplex."""
        keys = sorted(s.vertex_keys)
        out: set[int] = set()
        for mask in range(1, 1 << len(keys)):
            support = frozenset(
                keys[i] for i in range(len(keys)) if mask >> i & 1
            )
            for vk in self.groups.get(support, ()):
                out.add(decide[vk])
        return out


# ---------------------------------------------------------------------------
# set agreement


def face_center_coloring(
    face: Simplex, introduce: ProcessId, avoid: ProcessId
) -> dict[str, int]:
    """Color the all-seeing vertices of chi(face) so that ``introduce``
    appears while no facet of chi(face) realizes the full color set minus
    ``avoid`` (the boundary being id-colored).
    """
    if introduce in face.ids:
        raise BadFace(f"id {introduce} already in face {sorted(face.ids)}")
    K = subdivide_simplex(face)
    cen = central_simplex(K)
    out: dict[str, int] = {}
    if introduce == avoid:
        for v in cen.vertices:
            out[v.key] = introduce
    else:
        others = sorted(i for i in face.ids if i != avoid)
        if not others:
            raise BadFace(f"no id in {sorted(face.ids)} differs from {avoid}")
        k = others[0]
        for v in cen.vertices:
            out[v.key] = introduce if v.id == k else avoid
    # self-check: boundary id-colored, banned color set never realized
    full = {
        v.key: v.id for v in K.vertices if len(view_ids(v)) < len(face)
    }
    full.update(out)
    banned = (face.ids | {introduce}) - {avoid}
    for f in K.facets:
        if {full[v.key] for v in f.vertices} == banned:
            raise UnsatisfiedPostcondition(
                f"facet of chi({sorted(face.ids)}) realized banned set "
                f"{sorted(banned)}"
            )
    if introduce not in set(out.values()):
        raise UnsatisfiedPostcondition(f"color {introduce} never introduced")
    return out


def rainbow_free_coloring(
    rho: Simplex, chosen: Optional[frozenset[ProcessId]] = None
) -> dict[str, int]:
    """Color chi(rho) by ids(rho) with zero rainbow facets.

    Vertices over faces of dimension <= n-3 keep their ids; the all-seeing
    simplex is monochromatic in a base color; each codimension-1 face's
    subdivision realizes every color of rho, except the optional ``chosen``
    face whose subdivision keeps exactly its own ids.
    """
    n = len(rho)
    if n < 3:
        raise UnsupportedN(f"need n >= 3, got {n}")
    ids_sorted = sorted(rho.ids)
    q: Optional[ProcessId] = None
    if chosen is not None:
        if not (chosen < rho.ids and len(chosen) == n - 1):
            raise BadFace(
                f"chosen {sorted(chosen)} is not a codim-1 face of "
                f"{sorted(rho.ids)}"
            )
        q = next(iter(rho.ids - chosen))
    # base color must differ from the id missing from the chosen face
    a = ids_sorted[0] if q != ids_sorted[0] else ids_sorted[1]
    K = subdivide_simplex(rho)
    decide: dict[str, int] = {}
    for v in K.vertices:
        size = len(view_ids(v))
        if size <= n - 2:
            decide[v.key] = v.id
        elif size == n:
            decide[v.key] = a
    for F in rho.faces(n - 2):
        missing = next(iter(rho.ids - F.ids))
        if chosen is not None and F.ids == chosen:
            for v in K.vertices:
                if view_ids(v) == F.ids:
                    decide[v.key] = v.id
        else:
            decide.update(face_center_coloring(F, missing, a))
    if len(decide) != len(K.vertices):
        raise UnsatisfiedPostcondition("some vertex left uncolored")
    # self-check the promised face decision sets and the rainbow census
    for F in rho.faces(n - 2):
        got = {
            decide[v.key] for v in K.vertices if view_ids(v) <= F.ids
        }
        want = set(F.ids) if (chosen is not None and F.ids == chosen) else set(
            rho.ids
        )
        if got != want:
            raise UnsatisfiedPostcondition(
                f"chi({sorted(F.ids)}) decided {sorted(got)}, "
                f"wanted {sorted(want)}"
            )
    for f in K.facets:
        if len({decide[v.key] for v in f.vertices}) == n:
            raise UnsatisfiedPostcondition(
                f"rainbow facet {list(f.key)} in rainbow_free_coloring"
            )
    return decide


# ---------------------------------------------------------------------------
# weak symmetry breaking


def mono_free_coloring(rho: Simplex) -> dict[str, int]:
    """Binary-color chi(rho) with zero monochromatic facets.

    Faces of dimension <= n-3 are all 1; each codimension-1 face's
    subdivision and the whole complex realize both values.
    """
    n = len(rho)
    if n < 3:
        raise UnsupportedN(f"need n >= 3, got {n}")
    lead = min(rho.ids)
    K = subdivide_simplex(rho)
    decide: dict[str, int] = {}
    for v in K.vertices:
        size = len(view_ids(v))
        if size <= n - 2:
            decide[v.key] = 1
        elif size == n:
            decide[v.key] = 1 if v.id == lead else 0
    for F in rho.faces(n - 2):
        missing = next(iter(rho.ids - F.ids))
        fmin = min(F.ids)
        for v in K.vertices:
            if view_ids(v) == F.ids:
                if missing == lead:
                    decide[v.key] = 0
                else:
                    decide[v.key] = 1 if v.id == fmin else 0
    if len(decide) != len(K.vertices):
        raise UnsatisfiedPostcondition("some vertex left uncolored")
    for F in rho.faces(n - 2):
        got = {decide[v.key] for v in K.vertices if view_ids(v) <= F.ids}
        if got != {0, 1}:
            raise UnsatisfiedPostcondition(
                f"chi({sorted(F.ids)}) decided {sorted(got)}, wanted both"
            )
    for f in K.facets:
        if len({decide[v.key] for v in f.vertices}) == 1:
            raise UnsatisfiedPostcondition(
                f"monochromatic facet {list(f.key)} in mono_free_coloring"
            )
    return decide


# ---------------------------------------------------------------------------
# local solutions


@dataclass(frozen=True)
class SolutionReport:
    kind: str
    sperner: Optional[bool]
    symmetric: Optional[bool]
    consistent: bool
    complete: bool
    violations_in_tau: int
    violations_global: int
    all_green: bool
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class LocalSolution:
    kind: str
    ell: int
    tau: Simplex
    coloring: Coloring
    case: str
    chosen_face: Optional[tuple[str, ...]]
    repairs: tuple[tuple[tuple[str, ...], str, int], ...]
    report: SolutionReport


def solve_set_agreement_locally(
    ctx: SolverContext, tau: Simplex
) -> LocalSolution:
    """Sperner coloring of chi^(ell+1)(sigma), consistent and complete for
    the seen-ids task, with zero rainbow facets inside chi(tau) and an odd
    rainbow census globally."""
    ctx.require_facet(tau)
    n = ctx.n
    sig_ids = ctx.sigma.ids
    boundary = [
        F for F in tau.faces(n - 2) if F.carrier_ids != sig_ids
    ]
    if len(boundary) > 1:
        raise UnsatisfiedPostcondition(
            f"{len(boundary)} boundary faces on one facet at ell={ctx.ell}"
        )
    chosen = boundary[0] if boundary else None
    case = "pinned" if chosen else "spread"

    decide = {v.key: v.id for v in ctx.M.vertices}
    decide.update(
        rainbow_free_coloring(tau, chosen.ids if chosen else None)
    )
    chi_tau = ctx.chi(tau)

    repairs: list[tuple[tuple[str, ...], str, int]] = []
    deficient: list[tuple[Simplex, int]] = []
    for lam in ctx.L.simplexes(n - 2):
        if lam.carrier_ids != sig_ids:
            continue
        got = ctx.decisions_over(decide, lam)
        if got == set(sig_ids):
            continue
        missing = sig_ids - got
        if missing != sig_ids - lam.ids:
            raise UnsatisfiedPostcondition(
                f"{lam!r} misses {sorted(missing)}, not its complement id"
            )
        deficient.append((lam, next(iter(missing))))
    for lam, d in deficient:
        cands = [
            vk
            for vk in ctx.groups.get(frozenset(lam.vertex_keys), ())
            if vk not in chi_tau.vertex_keys
        ]
        if not cands:
            raise UnsatisfiedPostcondition(
                f"no repair vertex outside chi(tau) for {lam!r}"
            )
        pick = min(cands, key=lambda k: ctx.vertex_of[k].id)
        decide[pick] = d
        repairs.append((lam.key, pick, d))

    coloring = Coloring(
        level=ctx.ell + 1, alphabet=frozenset(sig_ids), decide=decide
    )
    ok_sperner, _ = is_sperner(coloring, ctx.M, ctx.sigma)
    cons = check_consistent_complete(
        coloring, ctx.sa_task, ctx.L, ctx.M, ctx.groups
    )
    in_tau, _ = census_fully_colored(coloring, chi_tau)
    global_count, _ = census_fully_colored(coloring, ctx.M)
    all_green = (
        ok_sperner
        and cons.consistent
        and cons.complete
        and in_tau == 0
        and global_count % 2 == 1
    )
    report = SolutionReport(
        kind="sa",
        sperner=ok_sperner,
        symmetric=None,
        consistent=cons.consistent,
        complete=cons.complete,
        violations_in_tau=in_tau,
        violations_global=global_count,
        all_green=all_green,
        notes=cons.witnesses[:5],
    )
    return LocalSolution(
        kind="sa",
        ell=ctx.ell,
        tau=tau,
        coloring=coloring,
        case=case,
        chosen_face=chosen.key if chosen else None,
        repairs=tuple(repairs),
        report=report,
    )


def solve_symmetry_breaking_locally(
    ctx: SolverContext, tau: Simplex
) -> LocalSolution:
    """Symmetric binary coloring of chi^(ell+1)(sigma), consistent and
    complete for the binary task, with zero monochromatic facets inside
    chi(tau) and at least one globally (n a prime power)."""
    ctx.require_facet(tau)
    n = ctx.n
    sig_ids = ctx.sigma.ids
    chi_tau = ctx.chi(tau)
    decide = dict(mono_free_coloring(tau))

    # chi(tau) may touch at most one face of sigma per dimension
    touched: dict[int, set[frozenset[ProcessId]]] = {}
    for v in chi_tau.vertices:
        cids = v.carrier_ids
        if cids != sig_ids:
            touched.setdefault(len(cids), set()).add(cids)
    for size, faces_hit in sorted(touched.items()):
        if len(faces_hit) > 1:
            raise AmbiguousReplication(
                f"chi(tau) touches {len(faces_hit)} faces of size {size}"
            )

    # replicate boundary values to every equal-dimension face
    memo: dict[str, Vertex] = {}
    for v in chi_tau.vertices:
        cids = v.carrier_ids
        if cids == sig_ids:
            continue
        for other in combinations(sorted(sig_ids), len(cids)):
            oset = frozenset(other)
            if oset == cids:
                continue
            w = relabel_vertex(v, order_preserving_map(cids, oset), memo)
            if w.key in chi_tau.vertex_keys:
                raise AmbiguousReplication(
                    f"replica {w.key} of {v.key} lands inside chi(tau)"
                )
            prior = decide.get(w.key)
            if prior is not None and prior != decide[v.key]:
                raise AmbiguousReplication(
                    f"conflicting replicas at {w.key}"
                )
            decide[w.key] = decide[v.key]

    for v in ctx.M.vertices:
        decide.setdefault(v.key, 1)

    repairs: list[tuple[tuple[str, ...], str, int]] = []
    deficient: list[Simplex] = []
    for lam in ctx.L.simplexes(n - 2):
        if ctx.decisions_over(decide, lam) == {1}:
            deficient.append(lam)
    for lam in deficient:
        cands = list(ctx.groups.get(frozenset(lam.vertex_keys), ()))
        if not cands:
            raise UnsatisfiedPostcondition(f"no central vertex for {lam!r}")
        pick = min(cands, key=lambda k: ctx.vertex_of[k].id)
        if pick in chi_tau.vertex_keys:
            raise UnsatisfiedPostcondition(
                f"repair vertex {pick} lies inside chi(tau)"
            )
        decide[pick] = 0
        repairs.append((lam.key, pick, 0))

    coloring = Coloring(
        level=ctx.ell + 1, alphabet=frozenset((0, 1)), decide=decide
    )
    ok_sym, _ = is_symmetric_coloring(coloring, ctx.M, ctx.sigma)
    cons = check_consistent_complete(
        coloring, ctx.wsb_task, ctx.L, ctx.M, ctx.groups
    )
    in_tau, _ = census_monochromatic(coloring, chi_tau)
    global_count, _ = census_monochromatic(coloring, ctx.M)
    global_ok = global_count >= 1 if is_prime_power(n) else True
    all_green = (
        ok_sym
        and cons.consistent
        and cons.complete
        and in_tau == 0
        and global_ok
    )
    report = SolutionReport(
        kind="wsb",
        sperner=None,
        symmetric=ok_sym,
        consistent=cons.consistent,
        complete=cons.complete,
        violations_in_tau=in_tau,
        violations_global=global_count,
        all_green=all_green,
        notes=cons.witnesses[:5],
    )
    return LocalSolution(
        kind="wsb",
        ell=ctx.ell,
        tau=tau,
        coloring=coloring,
        case="replicated",
        chosen_face=None,
        repairs=tuple(repairs),
        report=report,
    )


def solve_locally(
    kind: str, n: int, ell: int, tau: Optional[Simplex] = None,
    ctx: Optional[SolverContext] = None,
) -> list[LocalSolution]:
    """Convenience wrapper: solve one facet, or every facet when tau is None."""
    if ctx is None:
        ctx = SolverContext(n, ell)
    solver = {
        "sa": solve_set_agreement_locally,
        "wsb": solve_symmetry_breaking_locally,
    }.get(kind)
    if solver is None:
        raise BadFace(f"unknown task kind {kind!r}")
    targets = [tau] if tau is not None else list(ctx.L.facets)
    return [solver(ctx, t) for t in targets]


# ---------------------------------------------------------------------------
# binary consensus on an edge (2 processes)


def consensus_complex() -> tuple[Simplex, Complex]:
    """The standard edge and its one-round subdivision (a 4-vertex path)."""
    sigma = standard_simplex(2)
    return sigma, subdivide_simplex(sigma)


def path_vertices(edge: Simplex) -> tuple[Vertex, Vertex, Vertex, Vertex]:
    """Vertices of chi(edge) in path order: corner, full, full, corner."""
    u, v = edge.vertices  # sorted by id
    both = (u, v)
    return (
        seen_vertex(u.id, (u,)),
        seen_vertex(v.id, both),
        seen_vertex(u.id, both),
        seen_vertex(v.id, (v,)),
    )


def find_bivalent_edge(
    valencies: dict[str, Valency], edge: Optional[Simplex] = None
) -> Simplex:
    """First edge of the path whose endpoints carry valencies {0} and {1}.

    ``valencies`` maps the four path-vertex keys; the corner inheriting from
    input 0 must be {0} and the other corner {1}.
    """
    if edge is None:
        edge = standard_simplex(2)
    p0, p1, p2, p3 = path_vertices(edge)
    for v in (p0, p1, p2, p3):
        if v.key not in valencies:
            raise NotInComplex(f"no valency for path vertex {v.key}")
        if valencies[v.key] not in ({0}, {1}, frozenset((0,)), frozenset((1,))):
            raise ForcedValencyViolated(
                f"valency of {v.key} must be a singleton bit"
            )
    if set(valencies[p0.key]) != {0} or set(valencies[p3.key]) != {1}:
        raise ForcedValencyViolated(
            "solo corners must keep their own inputs ({0} and {1})"
        )
    for a, b in ((p0, p1), (p1, p2), (p2, p3)):
        pair = (set(valencies[a.key]), set(valencies[b.key]))
        if pair in (({0}, {1}), ({1}, {0})):
            lo, hi = (a, b) if pair == ({0}, {1}) else (b, a)
            return Simplex((lo, hi))
    raise ForcedValencyViolated("no bivalent edge found (impossible)")


@dataclass(frozen=True)
class ConsensusReport:
    edge: Simplex
    colorings_tried: int
    survivors: int
    verdicts: tuple[tuple[tuple[int, int, int, int], str], ...]


def consensus_impossibility_report(
    edge: Simplex, valencies: dict[str, Valency]
) -> ConsensusReport:
    """Try all 16 binary colorings of chi(edge); none can agree everywhere,
    stay within the endpoint valencies, and realize both values."""
    zero_end = next(
        v for v in edge.vertices if set(valencies[v.key]) == {0}
    )
    one_end = next(
        v for v in edge.vertices if set(valencies[v.key]) == {1}
    )
    p = path_vertices(edge)
    corner_of = {
        zero_end.key: seen_vertex(zero_end.id, (zero_end,)),
        one_end.key: seen_vertex(one_end.id, (one_end,)),
    }
    verdicts: list[tuple[tuple[int, int, int, int], str]] = []
    survivors = 0
    for bits in range(16):
        c = {p[i].key: bits >> i & 1 for i in range(4)}
        reason = ""
        if c[corner_of[zero_end.key].key] != 0:
            reason = "decides outside the 0-valent endpoint"
        elif c[corner_of[one_end.key].key] != 1:
            reason = "decides outside the 1-valent endpoint"
        elif any(
            c[a.key] != c[b.key]
            for a, b in ((p[0], p[1]), (p[1], p[2]), (p[2], p[3]))
        ):
            reason = "an edge disagrees"
        elif set(c.values()) != {0, 1}:
            reason = "misses a value of the bivalent edge"
        if reason:
            verdicts.append((tuple(c[p[i].key] for i in range(4)), reason))
        else:
            survivors += 1
            verdicts.append(
                (tuple(c[p[i].key] for i in range(4)), "survives")
            )
    return ConsensusReport(
        edge=edge,
        colorings_tried=16,
        survivors=survivors,
        verdicts=tuple(verdicts),
    )
