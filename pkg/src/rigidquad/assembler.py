"""Row-by-row assembly of rigid quadrangulations from traces.

The assembler realizes a complete trace as a half-edge map, processing steps
depth-first against a stack of *slots*.  A slot describes the line onto which
the next sub-quadrangulation's base row is glued, as a token list in *walk
order* (a fixed direction along the line):

* ``("E", dart)``    -- one line edge; the new row reuses ``dart`` (pointing
  walk-forward; the new face sits on its left),
* ``("E", None)``    -- a fresh line edge whose far side stays boundary,
* ``("pass", v)``    -- base vertex at existing vertex ``v``; the vertical
  ray through ``v`` continues into the structure below (an X junction),
* ``("sink", None)`` -- fresh base vertex at which the row's vertical ray ends,
* ``("pdown", v)``   -- base vertex at existing ``v`` created by subdividing a
  line edge; its ray has already been pierced into the far side of the line,
* ``("pup", v)``     -- not a base vertex: a paused ray chain at existing
  ``v`` that must pierce up through the new row, splitting a face.

``pass``/``sink``/``pdown`` tokens separate base edges, so a slot of size p
carries p - 1 of them.  ``root_at`` records which walk end carries the glued
piece's root corner: G and R steps pass it down unchanged, L steps flip it.
Words are stored corner-outward (first letter nearest the concave corner of
the step).
"""

from .errors import FrontierMismatch, IncompleteTrace, MalformedState
from .maps import PlanarMap
from .rigid import RigidQuad, validate_rigid
from .trace import DOWN, UP, Trace


def derive_rotations(n_darts, twin, tail, faces):
    """Recover the rotation system from face contours, closing the single
    boundary gap at each boundary vertex."""
    nxt = [-1] * n_darts
    pointed = [False] * n_darts
    for contour in faces:
        for a, b in zip(contour, contour[1:] + contour[:1]):
            nxt[twin[a]] = b
            pointed[b] = True
    by_vertex = {}
    for d in range(n_darts):
        by_vertex.setdefault(tail[d], []).append(d)
    for v, ds in by_vertex.items():
        missing = [d for d in ds if nxt[d] == -1]
        if not missing:
            continue
        unpointed = [d for d in ds if not pointed[d]]
        if len(missing) != 1 or len(unpointed) != 1:
            raise MalformedState(f"vertex {v} has {len(missing)} boundary gaps")
        nxt[missing[0]] = unpointed[0]
    return nxt


class _Slot:
    """An open side.  Tokens run along the line with the glued piece's root
    corner at the walk end; the piece's faces lie on the left of the reused
    (walk-forward) darts.  ``lazy`` defers token construction until the
    other side of an R/L step has been glued."""

    __slots__ = ("tokens", "start_v", "end_v", "lazy",
                 "line_frees", "break_verts", "end_verts")

    def __init__(self, tokens, start_v, end_v, lazy=None):
        self.tokens = tokens
        self.start_v = start_v
        self.end_v = end_v
        self.lazy = lazy
        self.line_frees = None
        self.break_verts = None
        self.end_verts = None


def _fresh_slot_tokens(p):
    tokens = [("E", None)]
    for _ in range(p - 1):
        tokens.append(("sink", None))
        tokens.append(("E", None))
    return tokens


class _Arena:
    """Mutable face/twin store; rotations are derived on finalize.

    Only inner faces are materialized; darts with ``face_of == -1`` border
    the (implicit) outer region.  The same engine drives assembly, the
    explorer's surgical decomposition, and the expand/unexpand surgeries.
    """

    def __init__(self):
        self.twin = []
        self.tail = []
        self.face_of = []   # dart -> face id, -1 = no face yet
        self.faces = []     # face id -> contour (dart list, ccw) or None
        self.nv = 0
        self.ray = set()
        self.dead = set()

    @classmethod
    def load(cls, r):
        """Load a validated rigid quadrangulation (inner faces only)."""
        A = cls()
        m = r.map
        A.twin = list(m.twin)
        A.tail = [m.vertex_of(d) for d in range(m.n_darts)]
        A.face_of = [-1] * m.n_darts
        A.nv = m.n_vertices
        A.ray = set(r.ray_darts)
        for fid, c in enumerate(m.faces):
            if fid != m.root_face:
                A.add_face(c)
        return A

    def new_vertex(self):
        self.nv += 1
        return self.nv - 1

    def new_edge(self, u, v):
        d = len(self.twin)
        self.twin.extend([d + 1, d])
        self.tail.extend([u, v])
        self.face_of.extend([-1, -1])
        return d, d + 1

    def head(self, d):
        return self.tail[self.twin[d]]

    def add_face(self, contour):
        fid = len(self.faces)
        self.faces.append(list(contour))
        for d in contour:
            self.face_of[d] = fid
        return fid

    def replace_face(self, fid, contour):
        self.faces[fid] = list(contour)
        for d in contour:
            self.face_of[d] = fid

    def subdivide(self, a):
        """Split the edge of dart ``a`` (u->v) at a new vertex w.  ``a`` keeps
        its tail (u->w); returns (w, a, n2) with n2 the w->v dart.  Face lists
        on both sides are patched."""
        a2 = self.twin[a]
        w = self.new_vertex()
        n1 = len(self.twin)
        n2 = n1 + 1
        self.twin.extend([a, a2])
        self.tail.extend([w, w])
        self.face_of.extend([-1, -1])
        self.twin[a] = n1
        self.twin[a2] = n2
        fa = self.face_of[a]
        if fa >= 0:
            c = self.faces[fa]
            i = c.index(a)
            self.replace_face(fa, c[:i + 1] + [n2] + c[i + 1:])
        fb = self.face_of[a2]
        if fb >= 0:
            c = self.faces[fb]
            i = c.index(a2)
            self.replace_face(fb, c[:i + 1] + [n1] + c[i + 1:])
        # both halves of a subdivided ray edge stay on the ray
        if a in self.ray:
            self.ray.add(n2)
        if a2 in self.ray:
            self.ray.add(n1)
        return w, a, n2

    def split_face(self, fid, v, exit_dart):
        """Pierce face ``fid`` from its corner at ``v`` through ``exit_dart``.

        Returns (w2, fwd_id, back_id, kept, other): w2 subdivides the exit
        edge; ``kept`` is the exit half in the forward piece (the piece whose
        contour starts with the dart out of ``v``), ``other`` the half in the
        back piece.  The chord v->w2 is recorded as a ray dart.
        """
        w2, kept, other = self.subdivide(exit_dart)
        c = self.faces[fid]
        start = next(i for i, d in enumerate(c) if self.tail[d] == v)
        c = c[start:] + c[:start]
        iex = c.index(kept)
        g = len(self.twin)
        g2 = g + 1
        self.twin.extend([g2, g])
        self.tail.extend([v, w2])
        self.face_of.extend([-1, -1])
        self.ray.add(g)
        self.replace_face(fid, c[:iex + 1] + [g2])
        back_id = self.add_face([g] + c[iex + 1:])
        return w2, fid, back_id, kept, other

    def pierce_away(self, v, fid):
        """Ray chain from corner ``v`` of face ``fid`` through successive
        opposite sides until the far side has no face; returns the final
        (boundary) vertex.  Every entered face must be a pentagon created by
        subdividing a quad at ``v`` (or, once, a quad entered at a corner)."""
        while True:
            c = self.faces[fid]
            start = next(i for i, d in enumerate(c) if self.tail[d] == v)
            exit_dart = c[(start + 2) % len(c)]
            w2, _, _, kept, _ = self.split_face(fid, v, exit_dart)
            beyond = self.twin[kept]
            if self.face_of[beyond] < 0:
                return w2
            v, fid = w2, self.face_of[beyond]

    # -- edit operations (decomposition / unexpand) -------------------------------

    def merge_across(self, g):
        """Remove the chain edge of dart ``g``, merging its two faces."""
        g2 = self.twin[g]
        f1, f2 = self.face_of[g], self.face_of[g2]
        if f1 < 0 or f2 < 0 or f1 == f2:
            raise MalformedState("chain edge does not separate two faces")
        c1, c2 = self.faces[f1], self.faces[f2]
        i, j = c1.index(g), c2.index(g2)
        merged = c1[:i] + c2[j + 1:] + c2[:j] + c1[i + 1:]
        self.replace_face(f1, merged)
        self.faces[f2] = None
        self.dead.update((g, g2))
        self.ray.discard(g)
        self.ray.discard(g2)

    def merge_edges(self, a, b):
        """Smooth the degree-2 vertex between darts ``a`` (ending there) and
        ``b`` (leaving it); both sides of the merged edge are rewired."""
        a2, b2 = self.twin[a], self.twin[b]
        self.twin[a] = b2
        self.twin[b2] = a
        fa = self.face_of[a]
        if fa >= 0:
            c = self.faces[fa]
            i = c.index(a)
            if c[(i + 1) % len(c)] != b:
                raise MalformedState("smoothing non-consecutive darts")
            c = c[:i + 1] + c[i + 2:] if i + 1 < len(c) else c[1:]
            self.replace_face(fa, c)
        fb = self.face_of[b2]
        if fb >= 0:
            c = self.faces[fb]
            j = c.index(b2)
            if c[(j + 1) % len(c)] != a2:
                raise MalformedState("smoothing non-consecutive darts")
            c = c[:j + 1] + c[j + 2:] if j + 1 < len(c) else c[1:]
            self.replace_face(fb, c)
        if b in self.ray:
            self.ray.add(a)
        if a2 in self.ray:
            self.ray.add(b2)
        self.dead.update((b, a2))
        self.ray.discard(b)
        self.ray.discard(a2)

    def drop_in_face(self, keep, drop):
        """One-sided smoothing: remove ``drop`` from the face of ``keep``
        (where it must follow ``keep``); the far side is left stale and is
        resolved by orphan pairing at extraction."""
        f = self.face_of[keep]
        c = self.faces[f]
        i = c.index(keep)
        if c[(i + 1) % len(c)] != drop:
            raise MalformedState("dropping a non-consecutive dart")
        c = c[:i + 1] + c[i + 2:] if i + 1 < len(c) else c[1:]
        self.replace_face(f, c)
        self.dead.add(drop)
        self.ray.discard(drop)

    def finalize(self, root_dart):
        contours = [c for c in self.faces if c is not None]
        if self.dead:
            alive = sorted(set(range(len(self.twin))) - self.dead)
            remap = {d: i for i, d in enumerate(alive)}
            twin = [remap[self.twin[d]] for d in alive]
            tail = [self.tail[d] for d in alive]
            contours = [[remap[d] for d in c] for c in contours]
            root_dart = remap[root_dart]
            ray = frozenset(remap[d] for d in self.ray if d in remap)
            nxt = derive_rotations(len(twin), twin, tail, contours)
            return PlanarMap(twin, nxt, root_dart), ray
        nxt = derive_rotations(len(self.twin), self.twin, self.tail, contours)
        m = PlanarMap(self.twin, nxt, root_dart)
        return m, frozenset(self.ray)


def _parse_word(word):
    """Corner-outward word -> (number of leading UPs, letters after the first
    DOWN; empty if the word has no DOWN)."""
    if DOWN not in word:
        return len(word), None
    first = word.index(DOWN)
    return first, word[first + 1:]


class _Assembler:
    def __init__(self, p):
        self.A = _Arena()
        self.stack = [_Slot(_fresh_slot_tokens(p), None, None)]
        self.root_dart = None
        self.initial = True

    # -- one row onto a slot ------------------------------------------------------

    def glue_strip(self, slot):
        A = self.A
        tokens = slot.tokens

        # pre-scan: edge entries with their bounding vertex tokens
        entries = []     # ("E", dart-or-None)
        seps = []        # vertex token after each edge entry, or ("end", None)
        for tok in tokens:
            if tok[0] == "E":
                entries.append(tok[1])
                seps.append(("end", None))
            else:
                if not entries:
                    raise MalformedState("slot starts with a vertex token")
                seps[-1] = tok

        cur = slot.start_v
        if cur is None:
            cur = A.new_vertex()
        start_vertex = cur
        bottoms = [[]]      # per face: in-face bottom darts, walk order
        pups = [[]]         # per face: pup vertices, walk order
        break_info = []     # (kind, vertex) per face boundary
        line_frees = []
        for i, dart in enumerate(entries):
            kind, v = seps[i]
            if dart is not None:
                if A.tail[dart] != cur:
                    raise MalformedState("slot edge does not continue the walk")
                if A.face_of[dart] >= 0:
                    raise MalformedState("slot edge already carries a face")
                bottoms[-1].append(dart)
                line_frees.append(A.twin[dart])
                cur = A.head(dart)
                if kind in ("pass", "pdown", "pup") and cur != v:
                    raise MalformedState("slot vertex does not match the walk")
            else:
                if kind in ("pass", "pdown", "pup"):
                    target = v
                elif kind == "sink":
                    target = A.new_vertex()
                else:  # end of slot
                    target = slot.end_v if slot.end_v is not None \
                        else A.new_vertex()
                fwd, free = A.new_edge(cur, target)
                bottoms[-1].append(fwd)
                line_frees.append(free)
                cur = target
            if kind in ("pass", "sink", "pdown"):
                break_info.append((kind, cur))
                bottoms.append([])
                pups.append([])
            elif kind == "pup":
                pups[-1].append(cur)
        end_vertex = cur
        nfaces = len(bottoms)
        if any(not b for b in bottoms):
            raise MalformedState("slot has an empty face span")

        slot.line_frees = line_frees
        slot.break_verts = [v for _, v in break_info]
        slot.end_verts = (start_vertex, end_vertex)
        if self.initial:
            self.root_dart = line_frees[-1]
            self.initial = False

        # top vertices, top edges, verticals, caps
        tops = [A.new_vertex() for _ in range(nfaces + 1)]
        top_in = []          # in-face (walk-backward) top darts
        for i in range(nfaces):
            fwd, bwd = A.new_edge(tops[i], tops[i + 1])
            top_in.append(bwd)
        up0, down0 = A.new_edge(start_vertex, tops[0])
        upN, downN = A.new_edge(end_vertex, tops[-1])
        vups, vdowns = [], []
        for i in range(nfaces - 1):
            up, down = A.new_edge(slot.break_verts[i], tops[i + 1])
            vups.append(up)
            vdowns.append(down)
            A.ray.add(down)       # row verticals point at the glued line

        face_ids = []
        for i in range(nfaces):
            east = upN if i == nfaces - 1 else vups[i]
            west = down0 if i == 0 else vdowns[i - 1]
            face_ids.append(A.add_face(bottoms[i] + [east, top_in[i], west]))

        # pup chains pierce the fresh row, pausing at its top
        top_tokens = []
        for i in range(nfaces):
            fid, exit_dart = face_ids[i], top_in[i]
            for w in pups[i]:
                w2, fwd_id, _, kept, other = A.split_face(fid, w, exit_dart)
                top_tokens.append(("E", A.twin[other]))
                top_tokens.append(("pup", w2))
                fid, exit_dart = fwd_id, kept
            top_tokens.append(("E", A.twin[exit_dart]))
            if i < nfaces - 1:
                top_tokens.append(("pass", tops[i + 1]))
        return top_tokens, tops[0], tops[-1]

    # -- seals ----------------------------------------------------------------------

    def seal_G(self, step, slot, top_tokens, top_start, top_end):
        A = self.A
        passes = [i for i, t in enumerate(top_tokens) if t[0] == "pass"]
        p = len(passes) + 1
        left, right = step.left, step.right
        if left + right != p - 1:
            raise FrontierMismatch(-1, f"G({left},{right}) on a size-{p} side")
        # A1 (right, explored first) sits at the walk end, A2 at the start
        i2 = passes[left - 1] if left else None
        i1 = passes[left] if right else None

        def orient(span, forward):
            for i in span:
                if top_tokens[i][0] == "E":
                    free = top_tokens[i][1]
                    A.ray.add(free if forward else A.twin[free])

        new_slots = []
        if right:
            new_slots.append(_Slot(top_tokens[i1 + 1:], top_tokens[i1][1],
                                   top_end))
            orient(range(i1 + 1, len(top_tokens)), True)
        if left:
            new_slots.append(_Slot(top_tokens[:i2], top_start,
                                   top_tokens[i2][1]))
            orient(range(0, i2), False)
        self.stack[0:0] = new_slots

    def seal_RL(self, step, slot, top_tokens, top_start, top_end):
        A = self.A
        corner_at_end = step.kind == "R"
        corner = top_end if corner_at_end else top_start

        # the covered row top becomes the ray running away from the corner
        for tok in top_tokens:
            if tok[0] == "E":
                free = tok[1]
                A.ray.add(A.twin[free] if corner_at_end else free)

        d_enders, tail = _parse_word(step.word)
        k = step.n_down
        z = tail.count(UP) if tail is not None else 0

        if k == 0:
            outward = [("pup", corner), ("E", None)]
            for _ in range(d_enders):
                outward += [("sink", None), ("E", None)]
            if corner_at_end:
                t_slot = _Slot(top_tokens + outward, top_start, None)
            else:
                t_slot = _Slot(outward[::-1] + top_tokens, None, top_end)
            self.stack[0:0] = [t_slot]
            return

        if step.kind == "R":
            # small side glued first; the large side reuses its line edges
            b_slot = _Slot(_fresh_slot_tokens(k), None, None)
            t_slot = _Slot(None, None, None,
                           lazy=("R", top_tokens, top_start, corner,
                                 d_enders, tail, b_slot))
            self.stack[0:0] = [b_slot, t_slot]
        else:
            # large side glued first: it lays fresh line edges over the future
            # small side; z of its break vertices carry descending rays
            outward = [("pup", corner), ("E", None)]
            for _ in range(d_enders):
                outward += [("sink", None), ("E", None)]
            for _ in range(z):
                outward += [("sink", None), ("E", None)]
            t_slot = _Slot(outward[::-1] + top_tokens, None, top_end)
            b_slot = _Slot(None, None, None, lazy=("L", t_slot, tail, z))
            self.stack[0:0] = [t_slot, b_slot]

    def resolve_lazy_R(self, slot):
        A = self.A
        _, top_tokens, top_start, corner, d_enders, tail, b_slot = slot.lazy
        if b_slot.line_frees is None:
            raise MalformedState("large side reached before the small one")
        # B's walk ran away from its root (the line end nearest the step's
        # concave corner); traverse its line corner-outward
        frees = b_slot.line_frees[::-1]
        verts = b_slot.break_verts[::-1]
        near, far = b_slot.end_verts[1], b_slot.end_verts[0]

        outward = [("pup", corner), ("E", None)]
        for _ in range(d_enders):
            outward += [("sink", None), ("E", None)]
        outward.append(("pup", near))
        vi = fi = 0
        cur = frees[0]
        for ch in tail:
            if ch == DOWN:
                A.ray.add(cur)
                outward.append(("E", cur))
                outward.append(("pup", verts[vi]))
                vi += 1
                fi += 1
                cur = frees[fi]
            else:
                # descending ray: subdivide the line and pierce the small side
                w, kept, rest = A.subdivide(cur)
                A.ray.add(kept)
                outward.append(("E", kept))
                outward.append(("pdown", w))
                below = A.face_of[A.twin[kept]]
                if below < 0:
                    raise MalformedState("no face beyond a pierced line edge")
                A.pierce_away(w, below)
                cur = rest
        A.ray.add(cur)
        outward.append(("E", cur))
        if vi != len(verts) or fi != len(frees) - 1:
            raise MalformedState("small-side line not fully consumed")
        slot.tokens = top_tokens + outward
        slot.start_v, slot.end_v = top_start, far
        slot.lazy = None

    def resolve_lazy_L(self, slot):
        A = self.A
        _, t_slot, tail, z = slot.lazy
        if t_slot.line_frees is None:
            raise MalformedState("small side reached before the large one")
        # the large side's first z+1 line edges run over this slot; its first
        # z break vertices carry the rays descending into it
        frees = t_slot.line_frees[z::-1]         # corner-outward order
        sink_verts = t_slot.break_verts[z - 1::-1] if z else []
        far_end = t_slot.end_verts[0]

        # the near corner subdivides the edge shared with the boundary side
        w, kept, rest = A.subdivide(frees[0])
        above = A.face_of[A.twin[rest]]
        if above < 0:
            raise MalformedState("no face beyond a pierced line edge")
        A.pierce_away(w, above)
        tokens = []
        cur = rest
        A.ray.add(cur)
        vi = fi = 0
        for ch in tail:
            if ch == UP:
                tokens.append(("E", cur))
                tokens.append(("pup", sink_verts[vi]))
                vi += 1
                fi += 1
                cur = frees[fi]
                A.ray.add(cur)
            else:
                w2, kept2, rest2 = A.subdivide(cur)
                above = A.face_of[A.twin[rest2]]
                if above < 0:
                    raise MalformedState("no face beyond a pierced line edge")
                A.pierce_away(w2, above)
                tokens.append(("E", kept2))
                tokens.append(("pdown", w2))
                cur = rest2
                A.ray.add(cur)
        tokens.append(("E", cur))
        if vi != len(sink_verts) or fi != len(frees) - 1:
            raise MalformedState("large-side line not fully consumed")
        slot.tokens = tokens
        slot.start_v, slot.end_v = w, far_end
        slot.lazy = None

    # -- driver ------------------------------------------------------------------------

    def process(self, step, index):
        if not self.stack:
            raise FrontierMismatch(index, "no open side remains")
        slot = self.stack.pop(0)
        if slot.lazy is not None:
            if slot.lazy[0] == "R":
                self.resolve_lazy_R(slot)
            else:
                self.resolve_lazy_L(slot)
        try:
            top_tokens, ts, te = self.glue_strip(slot)
            if step.kind == "G":
                self.seal_G(step, slot, top_tokens, ts, te)
            else:
                self.seal_RL(step, slot, top_tokens, ts, te)
        except FrontierMismatch as exc:
            raise FrontierMismatch(index, str(exc)) from None


def assemble_rigid(trace, validate=True):
    """Build the rigid quadrangulation whose row-by-row exploration is the
    given complete trace."""
    asm = _Assembler(trace.p)
    for i, step in enumerate(trace.steps):
        asm.process(step, i)
    if asm.stack:
        raise IncompleteTrace(f"{len(asm.stack)} open sides remain")
    m, ray = asm.A.finalize(asm.root_dart)
    if validate:
        return validate_rigid(m, ray)
    return RigidQuad(m, ray, None, m.face_contour(m.root), None)
