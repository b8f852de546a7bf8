"""Validated rigid quadrangulations of the disk.

A rigid quadrangulation is a flat quadrangulation (inner vertices of degree
4, simple boundary) whose concave corners have degree exactly 4 and whose
every ray runs from a concave corner to a straight boundary vertex.  Inner
edges carry the ray orientation, stored as the set of darts pointing along
their ray.

Conventions: the root face (boundary face) lies on the left of the root
dart, so the root dart runs clockwise along the boundary; the edges from
the root corner in root-dart direction form the base.
"""

from .errors import (NonQuadFace, NonSimpleBoundary, BadVertexPattern, BadRay,
                     RootNotConvex)
from .maps import PlanarMap

CONVEX = "convex"
STRAIGHT = "straight"
CONCAVE = "concave"
INNER = "inner"


class RigidQuad:
    """A validated rigid quadrangulation; construct via :func:`validate_rigid`."""

    __slots__ = ("map", "ray_darts", "corner_class", "boundary_darts", "n")

    def __init__(self, m, ray_darts, corner_class, boundary_darts, n):
        self.map = m
        self.ray_darts = ray_darts
        self.corner_class = corner_class
        self.boundary_darts = boundary_darts
        self.n = n  # number of non-root convex corners

    # equality is root-preserving isomorphism; ray orientations are implied
    # by the map (they are re-derivable), so the canonical map suffices.
    def __eq__(self, other):
        return isinstance(other, RigidQuad) and self.map == other.map

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"RigidQuad(n={self.n}, faces={self.map.n_faces - 1})"

    @property
    def perimeter(self):
        return len(self.boundary_darts)

    def is_boundary_edge(self, d):
        return self.map.face_of(d) == self.map.root_face or \
            self.map.face_of(self.map.twin[d]) == self.map.root_face

    def boundary_vertices(self):
        """Boundary vertices in clockwise order starting at the root corner."""
        return [self.map.vertex_of(d) for d in self.boundary_darts]

    def corner_counts(self):
        counts = {CONVEX: 0, STRAIGHT: 0, CONCAVE: 0}
        for v in self.boundary_vertices():
            counts[self.corner_class[v]] += 1
        return counts

    def sides(self):
        """Maximal straight runs of boundary edges, clockwise from the root.

        Each side is a list of contour darts; sides are separated by convex
        or concave corners.
        """
        m = self.map
        out = []
        cur = []
        for d in self.boundary_darts:
            cur.append(d)
            end = m.head(d)
            if self.corner_class[end] != STRAIGHT:
                out.append(cur)
                cur = []
        if cur:
            # boundary starts at the (convex) root corner, so the walk always
            # closes a side on the last edge
            raise AssertionError("boundary walk did not close at the root")
        return out

    def mirror(self):
        """Orientation-reversed copy with the same root corner; involutive."""
        m = self.map
        # contour dart arriving at the root vertex
        arriving = self.boundary_darts[-1]
        new_root = m.twin[arriving]
        mm = m.mirrored(new_root)
        return validate_rigid(mm, self.ray_darts)

    def to_json_dict(self):
        d = self.map.to_json_dict()
        d["kind"] = "rigid"
        d["orientation"] = sorted(self.ray_darts)
        return d


def validate_rigid(m, orientation):
    """Check all rigid-quadrangulation invariants; return a :class:`RigidQuad`.

    ``orientation`` is an iterable of darts, one per inner edge, each pointing
    from the concave end of its ray toward the straight end.
    """
    ray_darts = frozenset(orientation)

    root_face = m.root_face
    boundary = m.face_contour(m.root)
    if len(boundary) % 2 or len(boundary) < 4:
        raise NonQuadFace(f"root face has degree {len(boundary)}")
    for f, contour in enumerate(m.faces):
        if f != root_face and len(contour) != 4:
            raise NonQuadFace(f"face {f} has degree {len(contour)}")

    bverts = [m.vertex_of(d) for d in boundary]
    if len(set(bverts)) != len(bverts):
        raise NonSimpleBoundary("boundary visits a vertex twice")
    bvert_set = set(bverts)

    is_bdart = [False] * m.n_darts
    for d in boundary:
        is_bdart[d] = True
        is_bdart[m.twin[d]] = True

    # orientation sanity: exactly one ray dart per inner edge, none on boundary
    for d in ray_darts:
        if is_bdart[d]:
            raise BadRay(f"boundary dart {d} carries a ray orientation")
        if m.twin[d] in ray_darts:
            raise BadRay(f"edge of dart {d} oriented both ways")
    n_inner_edges = sum(1 for d in range(m.n_darts) if not is_bdart[d]) // 2
    if len(ray_darts) != n_inner_edges:
        raise BadRay(f"{len(ray_darts)} ray darts for {n_inner_edges} inner edges")

    def outgoing_ray(d):
        return d in ray_darts

    def incoming_ray(d):
        return m.twin[d] in ray_darts

    # classify vertices and check local patterns
    corner_class = {}
    for v, cyc in enumerate(m.vertices):
        deg = len(cyc)
        if v in bvert_set:
            inner = [d for d in cyc if not is_bdart[d]]
            if deg == 2:
                corner_class[v] = CONVEX
            elif deg == 3:
                corner_class[v] = STRAIGHT
                if not incoming_ray(inner[0]):
                    raise BadVertexPattern(
                        f"straight vertex {v}: ray does not end there")
            elif deg == 4:
                corner_class[v] = CONCAVE
                if len(inner) != 2 or not all(outgoing_ray(d) for d in inner):
                    raise BadVertexPattern(
                        f"concave vertex {v}: rays must start there")
            else:
                raise BadVertexPattern(f"boundary vertex {v} has degree {deg}")
        else:
            if deg != 4:
                raise BadVertexPattern(f"inner vertex {v} has degree {deg}")
            corner_class[v] = INNER
            for d in cyc[:2]:
                opp = cyc[(cyc.index(d) + 2) % 4]
                through = (outgoing_ray(d) and incoming_ray(opp)) or \
                          (incoming_ray(d) and outgoing_ray(opp))
                if not through:
                    raise BadVertexPattern(
                        f"inner vertex {v}: rays do not pass straight through")

    if corner_class[m.root_vertex] != CONVEX:
        raise RootNotConvex(f"root corner is {corner_class[m.root_vertex]}")

    counts = {CONVEX: 0, STRAIGHT: 0, CONCAVE: 0}
    for v in bverts:
        counts[corner_class[v]] += 1
    if counts[CONVEX] - counts[CONCAVE] != 4:
        raise BadVertexPattern(
            f"{counts[CONVEX]} convex vs {counts[CONCAVE]} concave corners")

    # trace rays from concave corners; each inner edge on exactly one ray
    seen = set()
    for v, cyc in enumerate(m.vertices):
        if corner_class[v] != CONCAVE:
            continue
        for d0 in cyc:
            if is_bdart[d0]:
                continue
            d = d0
            while True:
                if not outgoing_ray(d):
                    raise BadRay(f"ray from concave corner {v} misoriented at dart {d}")
                if d in seen:
                    raise BadRay(f"inner edge of dart {d} lies on two rays")
                seen.add(d)
                head = m.head(d)
                if corner_class[head] == INNER:
                    hcyc = m.vertices[head]
                    t = m.twin[d]
                    d = hcyc[(hcyc.index(t) + 2) % 4]
                    continue
                if corner_class[head] != STRAIGHT:
                    raise BadRay(
                        f"ray from concave corner {v} ends at a "
                        f"{corner_class[head]} vertex")
                break
    if len(seen) != n_inner_edges:
        raise BadRay("some inner edges belong to no concave-to-straight ray")

    return RigidQuad(m, ray_darts, corner_class, boundary,
                     n=counts[CONVEX] - 1)


def rigid_from_json_dict(data):
    m = PlanarMap.from_json_dict(data)
    return validate_rigid(m, data.get("orientation", []))


def base_signature(r):
    """Side lengths (l1, ..., lk) of the k-fold base, clockwise from the root."""
    m = r.map
    lengths = []
    run = 0
    for d in r.boundary_darts:
        run += 1
        end = m.head(d)
        cls = r.corner_class[end]
        if cls == STRAIGHT:
            continue
        lengths.append(run)
        run = 0
        if cls == CONVEX:
            break
    return tuple(lengths)


def walk_of_signature(sig):
    """Boundary-label walk of the k-fold base (l1, ..., lk).

    Odd-indexed blocks contribute ascending (i-1, i) pairs, then even-indexed
    blocks contribute (i, i-1) pairs in descending index order; the result
    starts at 0 and ends at 1.
    """
    if not sig or any(l < 1 for l in sig):
        raise ValueError(f"bad signature {sig!r}")
    walk = []
    k = len(sig)
    for i in range(1, k + 1, 2):
        walk.extend([i - 1, i] * sig[i - 1])
    evens = [i for i in range(2, k + 1, 2)]
    for i in reversed(evens):
        walk.extend([i, i - 1] * sig[i - 1])
    return walk
