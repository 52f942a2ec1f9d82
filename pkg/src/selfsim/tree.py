"""Coset-tree representations and rooted-tree automorphism algebra.

Given an injective endomorphism psi of G with finite-index image H, the
chain G >= H >= H^psi >= ... identifies the coset tree of G with the
regular m-ary tree (m = [G : H]) via the lexicographically ordered
transversal (t_0 = identity).  The induced state-closed representation
is

    lambda(g) = ( lambda((t_j g t_j'^-1)^(psi^-1)) )_j sigma(g),

with j' the coset of t_j g and sigma(g) the right-multiplication
permutation on the transversal.  States expand lazily and are memoized
by the normal form of the underlying group element.

Automorphisms compose as a right action (apply alpha, then beta), so
lambda is a homomorphism: lambda(g) lambda(h) = lambda(gh).

Portraits are depth-truncated automorphisms stored as nested tuples
(perm, children); children are empty at the final level, and the depth-0
portrait is the empty tuple.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from selfsim.errors import InfiniteIndexError
from selfsim.intlattice import IntMatrix, hnf_solver
from selfsim.pcgroup import GroupElement, PcPresentation, graded_image
from selfsim.subgroup import Subgroup, coset_rep, reduce_mod
from selfsim.vendo import (
    VirtualEndomorphism,
    graded_blocks,
    image_subgroup,
    is_injective_endo,
)


class CosetTreeRep:
    """State-closed representation of G from an injective endomorphism.

    psi must have the whole group as domain, nonzero graded block
    determinants (injectivity), and finite-index image.
    """

    def __init__(self, psi: VirtualEndomorphism):
        pres = psi.pres
        if psi.domain.index() != 1:
            raise ValueError("psi must be defined on the whole group")
        if not is_injective_endo(psi):
            raise ValueError("psi is not injective (zero graded determinant)")
        h = image_subgroup(psi)
        m = h.index()
        if m is None:
            raise InfiniteIndexError("image of psi has infinite index")
        self.pres = pres
        self.psi = psi
        self.image = h
        self.m = m
        # graded solve data for psi^-1: per weight, the block matrix
        self._blocks = {}
        for w in (1, 2, 3):
            idxs = list(pres.block(w))
            if idxs:
                rows = [graded_image(psi.images[i], w) for i in idxs]
                self._blocks[w] = (idxs, IntMatrix(rows))
        self._sigma_memo = {}
        self._portrait_memo = {}

    # -- psi^-1 ---------------------------------------------------------

    def preimage(self, x: GroupElement):
        """y with psi(y) = x, or None when x is outside the image.

        Solved blockwise: peel the weight-1 part, then weight-2, then
        weight-3, verifying the final product exactly.
        """
        pres = self.pres
        y = pres.identity()
        rem = x
        for w in (1, 2, 3):
            if w not in self._blocks:
                continue
            idxs, mat = self._blocks[w]
            target = graded_image(rem, w)
            if not any(target):
                continue
            sol = solve_left(mat, target)
            if sol is None:
                return None
            part = pres.identity()
            for pos, i in enumerate(idxs):
                if sol[pos]:
                    part = part * (pres.gen(i) ** sol[pos])
            img = pres.identity()
            for pos, i in enumerate(idxs):
                if sol[pos]:
                    img = img * (self.psi.images[i] ** sol[pos])
            y = y * part
            rem = img.inverse() * rem
        if not rem.is_identity():
            return None
        return y

    # -- wreath recursion ------------------------------------------------

    def letter_action(self, x: GroupElement, j: int):
        """(j', state element) at letter j: H t_j x = H t_j' and the
        pulled-back state (t_j x t_j'^-1)^(psi^-1)."""
        t = coset_rep(self.image, j)
        hh, t2 = reduce_mod(self.image, t * x)
        jp = 0
        for i in range(len(self.image.seq)):
            jp = jp * self.image.lead_exp[i] + t2.exps[self.image.lead_idx[i]]
        y = self.preimage(hh)
        if y is None:
            raise AssertionError("state fell outside the image subgroup")
        return jp, y

    def sigma(self, x: GroupElement):
        """Root permutation of lambda(x) as a tuple (right action on letters)."""
        perm = self._sigma_memo.get(x.exps)
        if perm is None:
            perm = tuple(self.letter_action(x, j)[0] for j in range(self.m))
            self._sigma_memo[x.exps] = perm
        return perm

    def first_moved_letter(self, x: GroupElement):
        """Least letter moved by sigma(x), or None; scans with early exit."""
        for j in range(self.m):
            if self.letter_action(x, j)[0] != j:
                return j
        return None

    def aut(self, x: GroupElement) -> "TreeAutomorphism":
        """lambda(x)."""
        return _RepAut(self, x)

    def portrait(self, x: GroupElement, depth: int):
        """Portrait of lambda(x), memoized on (normal form, depth)."""
        key = (x.exps, depth)
        got = self._portrait_memo.get(key)
        if got is None:
            got = self.aut(x).portrait(depth)
            self._portrait_memo[key] = got
        return got


class TreeAutomorphism:
    """Automorphism of the rooted m-ary tree in wreath-recursion form."""

    alphabet: int

    def perm(self):
        raise NotImplementedError

    def state(self, j: int) -> "TreeAutomorphism":
        raise NotImplementedError

    def key(self):
        """Hashable identity when known (same key => same automorphism)."""
        return None

    def portrait(self, depth: int):
        if depth <= 0:
            return ()
        return (
            self.perm(),
            tuple(self.state(j).portrait(depth - 1) for j in range(self.alphabet)),
        )

    def act(self, word):
        """Image of a letter word under the automorphism."""
        out = []
        cur = self
        for y in word:
            y = int(y)
            if not (0 <= y < self.alphabet):
                raise ValueError("letter out of range")
            out.append(cur.perm()[y])
            cur = cur.state(y)
        return out

    def compose(self, other: "TreeAutomorphism") -> "TreeAutomorphism":
        if self.alphabet != other.alphabet:
            raise ValueError("alphabet mismatch")
        return _Compose(self, other)

    def inverse(self) -> "TreeAutomorphism":
        return _Inverse(self)

    def __mul__(self, other):
        if isinstance(other, TreeAutomorphism):
            return self.compose(other)
        return NotImplemented


class IdentityAut(TreeAutomorphism):
    def __init__(self, alphabet):
        self.alphabet = alphabet
        self._perm = tuple(range(alphabet))

    def perm(self):
        return self._perm

    def state(self, j):
        return self

    def key(self):
        return ("id",)


class _RepAut(TreeAutomorphism):
    def __init__(self, rep: CosetTreeRep, x: GroupElement):
        self.rep = rep
        self.x = x
        self.alphabet = rep.m
        self._states = {}

    def perm(self):
        return self.rep.sigma(self.x)

    def state(self, j):
        got = self._states.get(j)
        if got is None:
            _, y = self.rep.letter_action(self.x, j)
            got = _RepAut(self.rep, y)
            self._states[j] = got
        return got

    def key(self):
        return ("elt", self.x.exps)


class _Compose(TreeAutomorphism):
    def __init__(self, a, b):
        self.a = a
        self.b = b
        self.alphabet = a.alphabet

    def perm(self):
        pa, pb = self.a.perm(), self.b.perm()
        return tuple(pb[pa[j]] for j in range(self.alphabet))

    def state(self, j):
        return self.a.state(j).compose(self.b.state(self.a.perm()[j]))

    def key(self):
        ka, kb = self.a.key(), self.b.key()
        if ka is None or kb is None:
            return None
        return ("comp", ka, kb)


class _Inverse(TreeAutomorphism):
    def __init__(self, a):
        self.a = a
        self.alphabet = a.alphabet

    def perm(self):
        pa = self.a.perm()
        out = [0] * self.alphabet
        for j, pj in enumerate(pa):
            out[pj] = j
        return tuple(out)

    def state(self, j):
        return self.a.state(self.perm()[j]).inverse()

    def key(self):
        ka = self.a.key()
        return None if ka is None else ("inv", ka)


# -- portrait algebra ------------------------------------------------------


def compose_to_depth(a: TreeAutomorphism, b: TreeAutomorphism, depth: int):
    """Portrait of a*b (apply a, then b) truncated at the given depth."""
    if a.alphabet != b.alphabet:
        raise ValueError("alphabet mismatch")
    return a.compose(b).portrait(depth)


def compose_portraits(pa, pb):
    """Portrait composition on already-materialized portraits."""
    if pa == () or pb == ():
        return ()
    perm_a, kids_a = pa
    perm_b, kids_b = pb
    perm = tuple(perm_b[perm_a[j]] for j in range(len(perm_a)))
    kids = tuple(
        compose_portraits(kids_a[j], kids_b[perm_a[j]]) for j in range(len(perm_a))
    )
    return (perm, kids)


def invert_portrait(p):
    if p == ():
        return ()
    perm, kids = p
    inv = [0] * len(perm)
    for j, pj in enumerate(perm):
        inv[pj] = j
    return (tuple(inv), tuple(invert_portrait(kids[inv[j]]) for j in range(len(perm))))


def identity_portrait(m, depth):
    if depth <= 0:
        return ()
    return (tuple(range(m)), (identity_portrait(m, depth - 1),) * m)


def portrait_is_trivial(p):
    if p == ():
        return True
    perm, kids = p
    return perm == tuple(range(len(perm))) and all(portrait_is_trivial(c) for c in kids)


def act_on_word(a: TreeAutomorphism, word):
    return a.act(word)


def states(a: TreeAutomorphism, depth: int):
    """Set of portraits (at the probe depth) of all states down to that depth."""
    seen_keys = set()
    out = set()
    frontier = [a]
    for _ in range(depth + 1):
        nxt = []
        for s in frontier:
            k = s.key()
            if k is not None:
                if k in seen_keys:
                    continue
                seen_keys.add(k)
            out.add(s.portrait(depth))
            nxt.extend(s.state(j) for j in range(s.alphabet))
        frontier = nxt
        if not frontier:
            break
    return out


# -- faithfulness probes ---------------------------------------------------


@dataclass
class FaithfulnessReport:
    depth: int
    detections: list = field(default_factory=list)  # (element, least depth | None)
    divisibility: list = field(default_factory=list)  # (k, bool) certificates
    ok: bool = True


def least_nontrivial_depth(rep: CosetTreeRep, x: GroupElement, max_depth: int):
    """Least level at which lambda(x)'s portrait is nontrivial, or None.

    Breadth-first over distinct state elements with early exit on the
    first moved letter.
    """
    if x.is_identity():
        return None
    frontier = {x.exps: x}
    for depth in range(1, max_depth + 1):
        nxt = {}
        for elt in frontier.values():
            if rep.first_moved_letter(elt) is not None:
                return depth
            for j in range(rep.m):
                _, y = rep.letter_action(elt, j)
                nxt.setdefault(y.exps, y)
        frontier = nxt
    return None


def faithful_to_depth(rep: CosetTreeRep, elements, depth: int, m1=None):
    """Detection report: least nontrivial depth per element, plus the
    power-divisibility certificate when m1 is given (exponents of the
    psi^(2k)-images of the generators must be divisible by m1^k)."""
    report = FaithfulnessReport(depth=depth)
    for x in elements:
        d = least_nontrivial_depth(rep, x, depth)
        report.detections.append((x, d))
        if d is None and not x.is_identity():
            report.ok = False
    if m1 is not None:
        from selfsim.vendo import apply

        for kk in range(1, depth + 1):
            gens = rep.pres.gens()
            imgs = gens
            for _ in range(2 * kk):
                imgs = [apply(rep.psi, g) for g in imgs]
            good = all(e % (m1 ** kk) == 0 for g in imgs for e in g.exps)
            report.divisibility.append((kk, good))
            if not good:
                report.ok = False
    return report


# -- exports ---------------------------------------------------------------


def export_automaton(rep: CosetTreeRep, x: GroupElement, max_states=4096):
    """Finite-state truncation as {alphabet, states, initial}.

    States are discovered breadth-first and keyed by normal form; when
    the closure exceeds max_states, outgoing arrows of undiscovered
    states are null.
    """
    ids = {}
    order = []
    queue = [x]
    while queue and len(order) < max_states:
        elt = queue.pop(0)
        if elt.exps in ids:
            continue
        ids[elt.exps] = len(order)
        order.append(elt)
        for j in range(rep.m):
            _, y = rep.letter_action(elt, j)
            if y.exps not in ids:
                queue.append(y)
    state_objs = []
    for elt in order:
        nxt = []
        for j in range(rep.m):
            _, y = rep.letter_action(elt, j)
            nxt.append(ids.get(y.exps))
        state_objs.append({"perm": list(rep.sigma(elt)), "next": nxt})
    return {"alphabet": rep.m, "states": state_objs, "initial": 0}


def portrait_to_dot(p, name="portrait"):
    """Graphviz rendering of a portrait; nodes are labeled by their
    permutations in one-line notation."""
    lines = ["digraph %s {" % name, '  node [shape=box, fontname="monospace"];']
    counter = [0]

    def visit(node):
        my = counter[0]
        counter[0] += 1
        if node == ():
            lines.append('  n%d [label="..."];' % my)
            return my
        perm, kids = node
        lines.append('  n%d [label="%s"];' % (my, " ".join(map(str, perm))))
        for j, child in enumerate(kids):
            cid = visit(child)
            lines.append('  n%d -> n%d [label="%d"];' % (my, cid, j))
        return my

    visit(p)
    lines.append("}")
    return "\n".join(lines)


def portrait_to_text(p, indent=0):
    """Indented text rendering of a portrait."""
    if p == ():
        return []
    perm, kids = p
    lines = ["%s(%s)" % ("  " * indent, " ".join(map(str, perm)))]
    for j, child in enumerate(kids):
        sub = portrait_to_text(child, indent + 1)
        if sub:
            lines.append("%s%d:" % ("  " * (indent + 1), j))
            lines.extend(sub)
    return lines
