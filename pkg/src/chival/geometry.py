"""Planar realization of iterated subdivisions of a triangle (3 processes).

Level-0 vertices sit at the corners of an equilateral triangle.  A vertex
(i, V) one level down is the weighted average of the positions of V, with
weight 1 on its own previous vertex and 1 + delta on every other seen vertex.
Seeing others therefore pulls a vertex away from its own corner, which is what
makes the realization an embedding.

A facet produced by a schedule with t blocks has orientation (-1)^(3-t)
relative to its parent; the embedding check verifies every realized facet
matches its accumulated expected sign and that the facets tile the triangle
exactly (area identity, containment, pairwise-disjoint interiors).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Optional

from .core import Complex, Simplex, Vertex
from .errors import EmbeddingFailed, UnsupportedN
from .subdivision import orientation_sign

DEFAULT_DELTA = 0.5

Point = tuple[float, float]

_CORNERS: dict[int, Point] = {
    0: (0.0, 0.0),
    1: (1.0, 0.0),
    2: (0.5, sqrt(3.0) / 2.0),
}


@dataclass(frozen=True)
class Realization:
    """Vertex positions plus per-facet data for one realized complex."""

    points: dict[str, Point]  # vertex key -> position
    facets: tuple[Simplex, ...]
    delta: float

    def facet_area2(self, f: Simplex) -> float:
        """Twice the signed area, vertices in id order."""
        (ax, ay), (bx, by), (cx, cy) = (
            self.points[v.key] for v in f.vertices
        )
        return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def realize(K: Complex, delta: float = DEFAULT_DELTA) -> Realization:
    """Realize an iterated subdivision of the standard triangle."""
    if K.n != 3:
        raise UnsupportedN(f"planar realization needs 3 processes, got {K.n}")
    if delta <= 0:
        raise EmbeddingFailed(f"delta must be positive, got {delta}")
    points: dict[str, Point] = {}

    def place(v: Vertex) -> Point:
        got = points.get(v.key)
        if got is not None:
            return got
        if v.view is None:
            p = _CORNERS[v.id]
        else:
            wsum = 0.0
            x = 0.0
            y = 0.0
            for u in v.view:
                px, py = place(u)
                w = 1.0 if u.id == v.id else 1.0 + delta
                wsum += w
                x += w * px
                y += w * py
            p = (x / wsum, y / wsum)
        points[v.key] = p
        return p

    for v in K.vertices:
        place(v)
    return Realization(points=points, facets=K.facets, delta=delta)


@dataclass(frozen=True)
class EmbeddingReport:
    ok: bool
    nondegenerate: bool
    orientation_uniform: bool
    inside: bool
    area_match: bool
    disjoint_interiors: bool
    witness: Optional[str] = None


def _triangles_overlap(
    t1: tuple[Point, Point, Point], t2: tuple[Point, Point, Point]
) -> bool:
    """Open-interior intersection test via separating axes."""

    def axes(t):
        for i in range(3):
            ax, ay = t[i]
            bx, by = t[(i + 1) % 3]
            yield (ay - by, bx - ax)

    for t in (t1, t2):
        for nx, ny in axes(t):
            p1 = [nx * x + ny * y for x, y in t1]
            p2 = [nx * x + ny * y for x, y in t2]
            if max(p1) <= min(p2) + 1e-12 or max(p2) <= min(p1) + 1e-12:
                return False
    return True


def check_embedding(r: Realization, eps: float = 1e-9) -> EmbeddingReport:
    """Verify the realization embeds: signs, tiling identity, no overlaps."""
    signed: list[float] = []
    expected: list[int] = []
    witness = None
    for f in r.facets:
        signed.append(r.facet_area2(f))
        expected.append(orientation_sign(f))
    nondegenerate = all(abs(a) > eps for a in signed)
    orientation_uniform = all(
        (a > 0) == (e > 0) for a, e in zip(signed, expected)
    )
    if not orientation_uniform:
        bad = next(
            f for f, a, e in zip(r.facets, signed, expected)
            if (a > 0) != (e > 0)
        )
        witness = f"facet {list(bad.key)} realized against expected sign"

    xs = [p[0] for p in r.points.values()]
    ys = [p[1] for p in r.points.values()]
    inside = (
        min(xs) >= -eps
        and max(xs) <= 1 + eps
        and min(ys) >= -eps
        and max(ys) <= _CORNERS[2][1] + eps
    )
    total = sum(abs(a) for a in signed) / 2.0
    outer = sqrt(3.0) / 4.0
    area_match = abs(total - outer) < 1e-6

    # Tiling + containment already rules out overlapping interiors up to
    # measure zero; the pairwise test below is the direct witness check,
    # pre-filtered by a coarse grid so large levels stay tractable.
    tris = [
        tuple(r.points[v.key] for v in f.vertices) for f in r.facets
    ]
    boxes = [
        (min(x for x, _ in t), min(y for _, y in t),
         max(x for x, _ in t), max(y for _, y in t))
        for t in tris
    ]
    cell = max(1e-6, max(bx2 - bx1 for bx1, _, bx2, _ in boxes))
    grid: dict[tuple[int, int], list[int]] = {}
    disjoint = True
    for i, (bx1, by1, bx2, by2) in enumerate(boxes):
        gx1, gy1 = int(bx1 / cell), int(by1 / cell)
        gx2, gy2 = int(bx2 / cell), int(by2 / cell)
        near: set[int] = set()
        for gx in range(gx1 - 1, gx2 + 2):
            for gy in range(gy1 - 1, gy2 + 2):
                bucket = grid.setdefault((gx, gy), [])
                near.update(bucket)
                if gx1 <= gx <= gx2 and gy1 <= gy <= gy2:
                    bucket.append(i)
        for j in near:
            ox1, oy1, ox2, oy2 = boxes[j]
            if ox2 < bx1 or bx2 < ox1 or oy2 < by1 or by2 < oy1:
                continue
            if _triangles_overlap(tris[i], tris[j]):
                disjoint = False
                witness = witness or (
                    f"facets {list(r.facets[i].key)} and "
                    f"{list(r.facets[j].key)} overlap"
                )
                break
        if not disjoint:
            break

    ok = (
        nondegenerate and orientation_uniform and inside
        and area_match and disjoint
    )
    return EmbeddingReport(
        ok=ok,
        nondegenerate=nondegenerate,
        orientation_uniform=orientation_uniform,
        inside=inside,
        area_match=area_match,
        disjoint_interiors=disjoint,
        witness=witness,
    )


def realize_checked(K: Complex, delta: float = DEFAULT_DELTA) -> Realization:
    """Realize and raise EmbeddingFailed unless the embedding check passes."""
    r = realize(K, delta)
    report = check_embedding(r)
    if not report.ok:
        raise EmbeddingFailed(
            f"realization with delta={delta} fails: {report}", detail=report
        )
    return r
