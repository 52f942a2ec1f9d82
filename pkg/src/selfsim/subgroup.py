"""Finite-index subgroups of pc groups: sifting, membership, index, transversals.

A subgroup is held as a standard sequence: elements with strictly
increasing leading indices and positive leading exponents, closed under
the sifting procedure.  Because the basis is graded, the exponent at
the leading index of s^q * x is exactly x's exponent plus q times the
leading exponent (collection corrections can only land in strictly
higher weight blocks), which is what makes peeling, membership and
coset reduction exact.

Sifting saturates with commutators among the sequence elements (the
subgroup's own closure, not the normal closure: <a> in the Heisenberg
group must stay rank one).  Optionally, sifting tracks "shadow" images
alongside every element, so a generator assignment g_i -> im_i can be
pushed through to images of the standard sequence; this is how virtual
endomorphisms are built from generator pairs.
"""

from __future__ import annotations

from collections import deque

from selfsim.errors import InfiniteIndexError, PresentationError
from selfsim.intlattice import xgcd
from selfsim.pcgroup import GroupElement, PcPresentation, commutator


class Subgroup:
    """Standard (triangular) generating sequence for a subgroup."""

    __slots__ = ("pres", "seq", "lead_idx", "lead_exp")

    def __init__(self, pres: PcPresentation, seq):
        self.pres = pres
        self.seq = tuple(seq)
        lead = [x.leading() for x in self.seq]
        if any(l is None for l in lead):
            raise ValueError("identity in standard sequence")
        self.lead_idx = tuple(l[0] for l in lead)
        self.lead_exp = tuple(l[1] for l in lead)
        if any(e <= 0 for e in self.lead_exp):
            raise ValueError("leading exponents must be positive")
        if any(
            self.lead_idx[i] >= self.lead_idx[i + 1] for i in range(len(lead) - 1)
        ):
            raise ValueError("leading indices must strictly increase")

    def __repr__(self):
        return "Subgroup(%s; %d gens, index %s)" % (
            self.pres.label or "?",
            len(self.seq),
            self.index(),
        )

    def index(self):
        """[G : H] as an int, or None when the index is infinite."""
        if len(self.seq) != self.pres.k:
            return None
        out = 1
        for e in self.lead_exp:
            out *= e
        return out

    def is_whole_group(self):
        return self.index() == 1

    def __contains__(self, x):
        return contains(self, x)


def sift(pres: PcPresentation, gens, images=None):
    """Standard sequence generating <gens>; returns a Subgroup.

    With images given (parallel to gens), every sifting operation is
    mirrored on the shadows and the call returns (Subgroup, std_images)
    with std_images aligned to the standard sequence.  No homomorphism
    property is assumed or checked here.
    """
    track = images is not None
    if track and len(images) != len(gens):
        raise ValueError("images must be parallel to gens")
    table: list = [None] * pres.k

    queue = deque()
    for pos, g in enumerate(gens):
        if isinstance(g, str):
            raise TypeError("sift takes elements, not words")
        if g.pres is not pres:
            raise PresentationError("generator from a different presentation")
        queue.append((g, images[pos] if track else None))

    def enqueue_comms(h, hi):
        for entry in table:
            if entry is None:
                continue
            z, zi = entry
            c = commutator(h, z)
            if not c.is_identity():
                queue.append((c, commutator(hi, zi) if track else None))

    def drain():
        while queue:
            g, gi = queue.popleft()
            while not g.is_identity():
                d, e = g.leading()
                if table[d] is None:
                    if e < 0:
                        g = g.inverse()
                        gi = gi.inverse() if track else None
                    table[d] = (g, gi)
                    enqueue_comms(g, gi)
                    break
                z, zi = table[d]
                le = z.leading()[1]
                if e % le == 0:
                    q = e // le
                    g = (z ** (-q)) * g
                    gi = (zi ** (-q)) * gi if track else None
                    continue
                gg, s, t = xgcd(le, e)
                u = (z ** s) * (g ** t)
                ui = (zi ** s) * (gi ** t) if track else None
                # u leads at d with exponent gg > 0 (graded exactness)
                table[d] = (u, ui)
                enqueue_comms(u, ui)
                qz = le // gg
                z2 = (u ** (-qz)) * z
                if not z2.is_identity():
                    queue.append((z2, ((ui ** (-qz)) * zi) if track else None))
                qg = e // gg
                g = (u ** (-qg)) * g
                gi = ((ui ** (-qg)) * gi) if track else None

    drain()

    # stability sweep: pairwise commutators must already be members
    while True:
        entries = [t for t in table if t is not None]
        missing = None
        for a in range(len(entries)):
            for b in range(a + 1, len(entries)):
                c = commutator(entries[a][0], entries[b][0])
                if c.is_identity():
                    continue
                if _coords(pres, table, c) is None:
                    ci = (
                        commutator(entries[a][1], entries[b][1]) if track else None
                    )
                    missing = (c, ci)
                    break
            if missing:
                break
        if missing is None:
            break
        queue.append(missing)
        drain()

    seq = [t[0] for t in table if t is not None]
    sub = Subgroup(pres, seq)
    if track:
        return sub, [t[1] for t in table if t is not None]
    return sub


def _coords(pres, table, x):
    # coefficients of x over the (possibly partial) table, or None
    coords = {}
    while not x.is_identity():
        d, e = x.leading()
        if table[d] is None:
            return None
        z = table[d][0]
        le = z.leading()[1]
        if e % le != 0:
            return None
        q = e // le
        coords[d] = q
        x = (z ** (-q)) * x
    return coords


def membership_coords(h: Subgroup, x: GroupElement):
    """Coefficients (q_1, ..., q_r) with x = s_1^q_1 * ... * s_r^q_r, or None."""
    if x.pres is not h.pres:
        raise PresentationError("element from a different presentation")
    coords = [0] * len(h.seq)
    pos = {d: i for i, d in enumerate(h.lead_idx)}
    while not x.is_identity():
        d, e = x.leading()
        i = pos.get(d)
        if i is None:
            return None
        le = h.lead_exp[i]
        if e % le != 0:
            return None
        q = e // le
        coords[i] = q
        x = (h.seq[i] ** (-q)) * x
    return tuple(coords)


def contains(h: Subgroup, x: GroupElement) -> bool:
    return membership_coords(h, x) is not None


def reduce_mod(h: Subgroup, x: GroupElement):
    """Decompose x = hh * t with hh in H and t the box representative.

    The box representative has every exponent at a leading index of H
    reduced into [0, leading exponent); requires finite index.
    Returns (hh, t).
    """
    if h.index() is None:
        raise InfiniteIndexError("subgroup has infinite index")
    y = x
    hh = h.pres.identity()
    for i in range(len(h.seq)):
        d = h.lead_idx[i]
        e = y.exps[d]
        le = h.lead_exp[i]
        q = e // le  # floor
        if q:
            y = (h.seq[i] ** (-q)) * y
            hh = hh * (h.seq[i] ** q)
    return hh, y


def coset_index(h: Subgroup, x: GroupElement) -> int:
    """0-based index of the right coset H*x under the lexicographic
    ordering of box representatives (index 0 is the identity coset)."""
    _, t = reduce_mod(h, x)
    j = 0
    for i in range(len(h.seq)):
        j = j * h.lead_exp[i] + t.exps[h.lead_idx[i]]
    return j


def coset_of(h: Subgroup, x: GroupElement) -> int:
    return coset_index(h, x)


def coset_rep(h: Subgroup, j: int) -> GroupElement:
    """Transversal element number j (inverse of coset_index)."""
    m = h.index()
    if m is None:
        raise InfiniteIndexError("subgroup has infinite index")
    if not (0 <= j < m):
        raise ValueError("coset index out of range")
    exps = [0] * h.pres.k
    for i in range(len(h.seq) - 1, -1, -1):
        exps[h.lead_idx[i]] = j % h.lead_exp[i]
        j //= h.lead_exp[i]
    return h.pres.element(exps)


def transversal(h: Subgroup, verify=False):
    """Ordered right transversal (t_0 = identity, lexicographic).

    With verify=True the pairwise distinctness t_i t_j^-1 not in H is
    checked explicitly (quadratic in the index; meant for small cases).
    """
    m = h.index()
    if m is None:
        raise InfiniteIndexError("subgroup has infinite index")
    ts = [coset_rep(h, j) for j in range(m)]
    if verify:
        for i in range(m):
            for j in range(i + 1, m):
                if contains(h, ts[i] * ts[j].inverse()):
                    raise AssertionError(
                        "transversal not distinct: %d vs %d" % (i, j)
                    )
    return ts


def index(h: Subgroup):
    return h.index()
