"""Row-by-row exploration (the inverse of assembly) and the expand surgery.

``explore_rigid`` detects the unique first step of a rigid quadrangulation
(the case analysis on the endpoints of the vertical edges flanking the base),
surgically splits the map into the step's sub-quadrangulations, and recurses.
Words are read corner-outward, matching the assembler.
"""

from .errors import MalformedState
from .maps import PlanarMap
from .rigid import (CONCAVE, CONVEX, INNER, STRAIGHT, RigidQuad,
                    base_signature, validate_rigid)
from .trace import DOWN, UP, G, L, R, Step, Trace
from .assembler import _Arena, derive_rotations


def _first_side(r):
    return base_signature(r)[0]


def _hmirror(r):
    """Mirror image re-rooted at the far end of the base (maps base-p objects
    to base-p objects and swaps R and L first steps)."""
    p = _first_side(r)
    far_dart = r.map.twin[r.boundary_darts[p - 1]]
    return validate_rigid(r.map.mirrored(far_dart), r.ray_darts)


def _strip_tops(r, p):
    """In-face top darts of the base row, in contour order (root end first)."""
    m = r.map
    tops = []
    for d in r.boundary_darts[:p]:
        c = m.faces[m.face_of(m.twin[d])]
        if len(c) != 4:
            raise MalformedState("base row face is not a quadrangle")
        j = c.index(m.twin[d])
        tops.append(c[(j + 2) % 4])
    return tops


def _trace_chain(r, c0):
    """Follow a ray chain from its first dart to its boundary end; returns
    (chain darts, interior junction vertices, final vertex)."""
    m = r.map
    darts = [c0]
    junctions = []
    v = m.head(c0)
    guard = m.n_edges + 1
    while r.corner_class[v] == INNER:
        junctions.append(v)
        cyc = m.vertices[v]
        nxt_dart = cyc[(cyc.index(m.twin[darts[-1]]) + 2) % 4]
        darts.append(nxt_dart)
        v = m.head(nxt_dart)
        guard -= 1
        if guard < 0:
            raise MalformedState("ray chain does not terminate")
    if r.corner_class[v] != STRAIGHT:
        raise MalformedState("ray chain ends at a non-straight vertex")
    return darts, junctions, v


def _remove_chain(A, r, darts, junctions, end_v):
    """Delete a traced chain from the arena: merge the flanking faces, smooth
    the crossed-edge subdivision vertices, and absorb the boundary end."""
    m = r.map
    for g in darts:
        A.merge_across(g)
    for v in junctions:
        ins = [d for d in m.vertices[v] if d not in A.dead]
        if len(ins) != 2:
            raise MalformedState("chain junction did not become degree 2")
        a_cand, b_cand = ins
        # orient: merge_edges(a, b) needs head(a) == v == tail(b)
        A.merge_edges(A.twin[a_cand], b_cand)
    # boundary end: merge the two rim halves (their outer sides carry no face)
    ins = [d for d in m.vertices[end_v]
           if d not in A.dead and A.face_of[d] >= 0]
    outs = [d for d in m.vertices[end_v]
            if d not in A.dead and A.face_of[d] < 0]
    arriving = [A.twin[d] for d in outs if A.face_of[A.twin[d]] >= 0]
    if len(arriving) != 1 or len(ins) != 1:
        raise MalformedState("chain boundary end did not become degree 2")
    A.merge_edges(arriving[0], ins[0])


def _region(A, seed_face, blocked):
    """Faces reachable from ``seed_face`` without crossing ``blocked`` darts."""
    seen = {seed_face}
    stack = [seed_face]
    while stack:
        f = stack.pop()
        for d in A.faces[f]:
            if d in blocked:
                continue
            t = A.twin[d]
            if t in A.dead or t in blocked:
                continue
            g = A.face_of[t]
            if g >= 0 and A.faces[g] is not None and g not in seen:
                seen.add(g)
                stack.append(g)
    return seen


def _extract(A, face_ids, root_vertex):
    """Rebuild the faces of ``face_ids`` as a standalone rigid quadrangulation
    rooted at the unique boundary dart out of ``root_vertex``."""
    contours = [A.faces[f] for f in sorted(face_ids)]
    darts = [d for c in contours for d in c]
    dset = set(darts)
    remap = {d: i for i, d in enumerate(darts)}
    n = len(darts)
    twin = [-1] * n
    tail = [A.tail[d] for d in darts]
    partners = []
    for d in darts:
        t = A.twin[d]
        if t in dset:
            twin[remap[d]] = remap[t]
    new_contours = [[remap[d] for d in c] for c in contours]
    # orphan darts get fresh partners (the new boundary)
    head = {}
    for c in new_contours:
        for a, b in zip(c, c[1:] + c[:1]):
            head[a] = tail[b]
    for i in range(n):
        if twin[i] == -1:
            j = len(twin)
            twin.append(i)
            twin[i] = j
            tail.append(head[i])
            partners.append(j)
    nxt = derive_rotations(len(twin), twin, tail, new_contours)
    m0 = PlanarMap(twin, nxt, 0, check=False)
    outer = m0.face_of(partners[0])
    roots = [d for d in partners
             if tail[d] == root_vertex and m0.face_of(d) == outer]
    if len(roots) != 1:
        raise MalformedState(f"{len(roots)} candidate root darts")
    m = PlanarMap(twin, nxt, roots[0])
    ray = frozenset(remap[d] for d in A.ray
                    if d in dset and A.twin[d] in dset)
    return validate_rigid(m, ray)


def _classify_line_vertex(r, v):
    return r.corner_class[v]


def _decompose(r):
    """Detect the first exploration step of ``r`` and split off its
    sub-quadrangulations; returns (step, [pieces in frontier order])."""
    m = r.map
    p = _first_side(r)
    tops = _strip_tops(r, p)
    vR = m.vertex_of(tops[0])
    vL = m.head(tops[-1])
    clsR = r.corner_class[vR]
    clsL = r.corner_class[vL]

    if clsR == CONCAVE:
        return _decompose_R(r, p, tops, vR)
    if clsL == CONCAVE:
        rm = _hmirror(r)
        step, pieces = _decompose(rm)
        if step.kind != "R":
            raise MalformedState("mirrored first step is not of R type")
        return Step("L", word=step.word), [_hmirror(u) for u in pieces[::-1]]
    return _decompose_G(r, p, tops, clsR, clsL)


def _decompose_G(r, p, tops, clsR, clsL):
    m = r.map
    # right: walk west from the root-side corner to the first concave corner
    if clsR == CONVEX:
        right = 0
    else:
        i = 0
        while r.corner_class[m.head(tops[i])] == INNER:
            i += 1
        if r.corner_class[m.head(tops[i])] != CONCAVE:
            raise MalformedState("bad vertex on the revealed row top")
        right = i + 1
    if clsL == CONVEX:
        left = 0
    else:
        j = 0
        while r.corner_class[m.vertex_of(tops[p - 1 - j])] == INNER:
            j += 1
        if r.corner_class[m.vertex_of(tops[p - 1 - j])] != CONCAVE:
            raise MalformedState("bad vertex on the revealed row top")
        left = j + 1
    if left + right != p - 1:
        raise MalformedState("G split sizes do not fit the base")

    A = _Arena.load(r)
    blocked = set()
    for t in tops:
        blocked.add(t)
        blocked.add(m.twin[t])
    pieces = []
    if right:
        seed = A.face_of[m.twin[tops[0]]]
        pieces.append(_extract(A, _region(A, seed, blocked),
                               m.vertex_of(tops[0])))
    if left:
        seed = A.face_of[m.twin[tops[right + 1]]]
        pieces.append(_extract(A, _region(A, seed, blocked),
                               m.vertex_of(tops[right + 1])))
    return G(left, right), pieces


def _decompose_R(r, p, tops, vR):
    m = r.map
    A = _Arena.load(r)
    contour = r.boundary_darts
    if m.vertex_of(contour[-1]) != vR:
        raise MalformedState("boundary does not close at the concave corner")

    # stretch walk, eastward = backward along the boundary list
    idx = len(contour) - 2
    d_enders = 0
    vR2 = None
    far = None
    while True:
        vx = m.vertex_of(contour[idx])
        cls = r.corner_class[vx]
        if cls == STRAIGHT:
            d_enders += 1
            idx -= 1
        elif cls == CONVEX:
            far = vx
            break
        elif cls == CONCAVE:
            vR2 = vx
            break
        else:
            raise MalformedState("bad vertex on the revealed side")

    # the corner's own chain: the outgoing ray dart that is not the row top
    chain0 = [d for d in m.vertices[vR] if d in r.ray_darts and d != tops[0]]
    if len(chain0) != 1:
        raise MalformedState("concave corner without its upward ray")
    chains = [_trace_chain(r, chain0[0])]

    word = UP * d_enders
    blocked = set()
    for t in tops:
        blocked.add(t)
        blocked.add(m.twin[t])
    junctions = []        # (continuation dart, lower drop pair or None)
    rb0 = None

    if vR2 is not None:
        word += DOWN
        capS = m.twin[contour[idx - 1]]
        rb0 = m.nxt[capS]
        cvr2 = m.nxt[rb0]
        if rb0 not in r.ray_darts or cvr2 not in r.ray_darts:
            raise MalformedState("concave corner rays not found on the line")
        chains.append(_trace_chain(r, cvr2))
        cur = rb0
        blocked.update((cur, m.twin[cur]))
        while True:
            h = m.head(cur)
            cls = r.corner_class[h]
            if cls == INNER:
                cyc = m.vertices[h]
                i = cyc.index(m.twin[cur])
                cont = cyc[(i + 2) % 4]
                nd = cyc[(i + 1) % 4]
                nu = cyc[(i + 3) % 4]
                if nd in r.ray_darts:
                    word += UP          # ray descends: pierces the small side
                    chains.append(_trace_chain(r, nd))
                    junctions.append((cont, (m.twin[cont], m.twin[cur])))
                elif nu in r.ray_darts:
                    word += DOWN        # ray ascends from the small side
                    chains.append(_trace_chain(r, nu))
                    junctions.append((cont, None))
                else:
                    raise MalformedState("junction without an oriented ray")
                cur = cont
                blocked.update((cur, m.twin[cur]))
            elif cls == STRAIGHT:
                far = h
                break
            else:
                raise MalformedState("bad vertex at the end of the line")
    k = word.count(DOWN)

    for darts, juncs, end_v in chains:
        _remove_chain(A, r, darts, juncs, end_v)

    # merge the large side's base over the absorbed corner positions, with a
    # running dart that accumulates the dropped pieces
    stretch = [m.twin[contour[j]] for j in range(len(contour) - 2, idx - 1, -1)]
    cur_keep = m.twin[tops[0]]
    A.drop_in_face(cur_keep, stretch[0])
    if len(stretch) > 1:
        cur_keep = stretch[-1]
    if k:
        A.drop_in_face(cur_keep, rb0)
        for cont, lower in junctions:
            A.drop_in_face(cur_keep, cont)
        for cont, lower in junctions:
            if lower is not None:
                A.drop_in_face(*lower)

    pieces = []
    if k:
        seed_b = A.face_of[m.twin[rb0]]
        pieces.append(_extract(A, _region(A, seed_b, blocked), vR2))
    seed_t = A.face_of[m.twin[tops[0]]]
    pieces.append(_extract(A, _region(A, seed_t, blocked), far))
    return R(word), pieces


def detect_step_rigid(r):
    """The unique first step of the row-by-row exploration of ``r``."""
    m = r.map
    p = _first_side(r)
    tops = _strip_tops(r, p)
    vR = m.vertex_of(tops[0])
    vL = m.head(tops[-1])
    if r.corner_class[vR] == CONCAVE:
        step, _ = _decompose_R(r, p, tops, vR)
        return step
    if r.corner_class[vL] == CONCAVE:
        step, _ = _decompose(r)
        return step
    step, _ = _decompose_G(r, p, tops, r.corner_class[vR], r.corner_class[vL])
    return step


def explore_rigid(r):
    """The complete row-by-row exploration trace of ``r`` (depth-first over
    the frontier, matching the assembler)."""
    p = _first_side(r)

    def rec(piece):
        step, subs = _decompose(piece)
        out = [step]
        for u in subs:
            out.extend(rec(u))
        return out

    return Trace(p, rec(r))


# -- expand / unexpand -------------------------------------------------------------


def expand(r):
    """Split the column left of the root into two and hang a new quadrangle
    under the right half; the result is a base-1 rigid quadrangulation whose
    first exploration step is of L type."""
    A = _Arena.load(r)
    m = r.map
    e0 = r.boundary_darts[0]
    b0 = m.twin[e0]
    rv = m.vertex_of(e0)
    f0 = A.face_of[b0]
    w, _, n2 = A.subdivide(b0)
    A.ray.add(n2)
    A.pierce_away(w, f0)
    # e0 now spans rv -> w; attach the new quadrangle below it
    nw = A.new_vertex()
    nr = A.new_vertex()
    west_q, _ = A.new_edge(w, nw)
    bot_q, new_root = A.new_edge(nw, nr)
    east_q, _ = A.new_edge(nr, rv)
    A.add_face([e0, west_q, bot_q, east_q])
    m2, ray = A.finalize(new_root)
    return validate_rigid(m2, ray)


def unexpand(r):
    """Inverse of :func:`expand`."""
    A = _Arena.load(r)
    m = r.map
    root = r.boundary_darts[0]
    q_in = m.twin[root]
    fq = A.face_of[q_in]
    c = A.faces[fq]
    j = c.index(q_in)
    top_q = c[(j + 2) % 4]            # old-root -> w
    rv = m.vertex_of(top_q)
    w = m.head(top_q)
    # delete the hanging quadrangle
    for d in c:
        if d != top_q:
            A.dead.update((d, A.twin[d]))
            A.ray.discard(d)
            A.ray.discard(A.twin[d])
    A.faces[fq] = None
    A.face_of[top_q] = -1
    # remove the splitting ray chain from w
    chain0 = [d for d in m.vertices[w]
              if d in r.ray_darts and m.head(d) != rv]
    if len(chain0) != 1:
        raise MalformedState("expanded column ray not found")
    darts, junctions, end_v = _trace_chain(r, chain0[0])
    _remove_chain(A, r, darts, junctions, end_v)
    # smooth w on both sides (the base piece east of w carries the old root)
    east_in = [d for d in m.vertices[w]
               if d not in A.dead and A.face_of[d] >= 0 and m.head(d) == rv]
    if len(east_in) != 1:
        raise MalformedState("unexpand could not locate the split base edge")
    n2 = east_in[0]
    west_in = A.twin[[d for d in m.vertices[w]
                      if d not in A.dead and d != n2
                      and A.face_of[d] < 0][0]]
    A.merge_edges(west_in, n2)
    m2, ray = A.finalize(A.twin[west_in])
    return validate_rigid(m2, ray)
