"""Rooted planar maps as half-edge (dart) permutations.

A map on n darts is a pair of permutations: ``twin`` (a fixed-point-free
involution pairing the two darts of each edge) and ``nxt`` (counterclockwise
rotation of darts around their origin vertex), plus a distinguished root
dart.  The face permutation is ``phi(d) = nxt[twin[d]]``; its orbits traverse
each face counterclockwise, i.e. with the face on the *left* of every dart.
The root face is the face on the left of the root dart.

Maps are built either from explicit permutations or from a full list of face
contours via :func:`planar_map_from_faces` (the face contours determine the
rotation system).
"""

from .errors import InvalidMap


def _orbits(perm):
    """Orbits of a permutation given as a list, in order of smallest element."""
    n = len(perm)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        d = start
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = perm[d]
        out.append(cyc)
    return out


class PlanarMap:
    """Immutable rooted planar map.

    Vertices and faces are numbered in order of their smallest dart.
    """

    __slots__ = ("twin", "nxt", "root", "_vertex_of", "_face_of",
                 "_vertices", "_faces", "_canonical")

    def __init__(self, twin, nxt, root, check=True):
        self.twin = list(twin)
        self.nxt = list(nxt)
        self.root = root
        self._vertex_of = None
        self._face_of = None
        self._vertices = None
        self._faces = None
        self._canonical = None
        if check:
            self._check()

    # -- construction checks --------------------------------------------------

    def _check(self):
        n = len(self.twin)
        if len(self.nxt) != n or n == 0 or n % 2:
            raise InvalidMap("dart count must be positive and even")
        if sorted(self.nxt) != list(range(n)):
            raise InvalidMap("nxt is not a permutation")
        for d in range(n):
            t = self.twin[d]
            if not 0 <= t < n or t == d or self.twin[t] != d:
                raise InvalidMap("twin is not a fixed-point-free involution")
        if not 0 <= self.root < n:
            raise InvalidMap("root dart out of range")
        # connectivity
        seen = {self.root}
        stack = [self.root]
        while stack:
            d = stack.pop()
            for e in (self.twin[d], self.nxt[d]):
                if e not in seen:
                    seen.add(e)
                    stack.append(e)
        if len(seen) != n:
            raise InvalidMap("map is not connected")
        if self.n_vertices - self.n_edges + self.n_faces != 2:
            raise InvalidMap("Euler relation fails (map is not planar)")

    # -- basic structure -------------------------------------------------------

    @property
    def n_darts(self):
        return len(self.twin)

    @property
    def n_edges(self):
        return len(self.twin) // 2

    def phi(self, d):
        """Next dart along the face on the left of ``d``."""
        return self.nxt[self.twin[d]]

    def prev(self, d):
        """Inverse of ``nxt`` at ``d``."""
        e = d
        while self.nxt[e] != d:
            e = self.nxt[e]
        return e

    def _compute_vertices(self):
        if self._vertices is None:
            self._vertices = _orbits(self.nxt)
            self._vertex_of = [0] * self.n_darts
            for i, cyc in enumerate(self._vertices):
                for d in cyc:
                    self._vertex_of[d] = i

    def _compute_faces(self):
        if self._faces is None:
            phi = [self.nxt[self.twin[d]] for d in range(self.n_darts)]
            self._faces = _orbits(phi)
            self._face_of = [0] * self.n_darts
            for i, cyc in enumerate(self._faces):
                for d in cyc:
                    self._face_of[d] = i

    @property
    def vertices(self):
        """List of vertex orbits (dart cycles in ccw rotation order)."""
        self._compute_vertices()
        return self._vertices

    @property
    def faces(self):
        """List of face orbits (contours, ccw = face on the left)."""
        self._compute_faces()
        return self._faces

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_faces(self):
        return len(self.faces)

    def vertex_of(self, d):
        self._compute_vertices()
        return self._vertex_of[d]

    def face_of(self, d):
        self._compute_faces()
        return self._face_of[d]

    def head(self, d):
        """Vertex at the tip of dart ``d`` (= origin of its twin)."""
        return self.vertex_of(self.twin[d])

    def degree(self, v):
        return len(self.vertices[v])

    def face_degree(self, f):
        return len(self.faces[f])

    @property
    def root_face(self):
        return self.face_of(self.root)

    @property
    def root_vertex(self):
        return self.vertex_of(self.root)

    def face_contour(self, d):
        """Darts of the face on the left of ``d``, starting at ``d``."""
        out = [d]
        e = self.phi(d)
        while e != d:
            out.append(e)
            e = self.phi(e)
        return out

    # -- canonical form ---------------------------------------------------------

    def canonical(self):
        """Canonical (twin, nxt, 0) relabeling by BFS from the root dart.

        Two rooted maps are root-preservingly isomorphic iff their canonical
        forms are equal.
        """
        if self._canonical is None:
            n = self.n_darts
            new = [-1] * n
            new[self.root] = 0
            order = [self.root]
            count = 1
            i = 0
            while i < len(order):
                d = order[i]
                i += 1
                for e in (self.nxt[d], self.twin[d]):
                    if new[e] < 0:
                        new[e] = count
                        count += 1
                        order.append(e)
            ctwin = [0] * n
            cnxt = [0] * n
            for d in range(n):
                ctwin[new[d]] = new[self.twin[d]]
                cnxt[new[d]] = new[self.nxt[d]]
            self._canonical = (tuple(ctwin), tuple(cnxt))
        return self._canonical

    def __eq__(self, other):
        if not isinstance(other, PlanarMap):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return (f"PlanarMap(darts={self.n_darts}, V={self.n_vertices}, "
                f"F={self.n_faces}, root={self.root})")

    # -- transforms ---------------------------------------------------------------

    def mirrored(self, new_root=None):
        """Orientation-reversed copy (rotations inverted), rooted at ``new_root``."""
        n = self.n_darts
        inv = [0] * n
        for d in range(n):
            inv[self.nxt[d]] = d
        return PlanarMap(self.twin, inv, self.root if new_root is None else new_root,
                         check=False)

    def rerooted(self, d):
        return PlanarMap(self.twin, self.nxt, d, check=False)

    # -- JSON interchange -----------------------------------------------------------

    def to_json_dict(self):
        return {"darts": self.n_darts, "twin": list(self.twin),
                "next": list(self.nxt), "root": self.root}

    @classmethod
    def from_json_dict(cls, data):
        m = cls(data["twin"], data["next"], data["root"])
        if m.n_darts != data.get("darts", m.n_darts):
            raise InvalidMap("dart count disagrees with permutation length")
        return m


def planar_map_from_faces(face_lists, twin, root, check=True):
    """Build a map from the full set of face contours.

    ``face_lists`` must cover every dart exactly once; each contour is read
    counterclockwise (face on the left).  The rotation system is recovered
    from ``nxt[d] = phi[twin[d]]``.
    """
    n = len(twin)
    phi = [-1] * n
    for contour in face_lists:
        for a, b in zip(contour, contour[1:] + contour[:1]):
            if phi[a] != -1:
                raise InvalidMap(f"dart {a} appears twice in face contours")
            phi[a] = b
    if -1 in phi:
        raise InvalidMap("face contours do not cover all darts")
    nxt = [phi[twin[d]] for d in range(n)]
    return PlanarMap(twin, nxt, root, check=check)
