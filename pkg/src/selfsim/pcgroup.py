"""Weighted polycyclic presentations of class-<=3 torsion-free nilpotent groups.

A presentation is a Mal'cev basis g_1 < ... < g_k with weights in
{1, 2, 3} (nondecreasing) together with the commutator table
[g_j, g_i] for i < j.  The commutator convention throughout the
package is

    [x, y] = x^-1 y^-1 x y,      [x, y, z] = [[x, y], z].

Grading: the table entry for a pair of weights (w_i, w_j) is supported
on generators of weight >= w_i + w_j; in particular weight-3 generators
are central and gamma_2 (the span of weight >= 2) is abelian, so every
table entry is just an exponent vector over the tail block.  Elements
are exponent vectors (the unique normal form g_1^e_1 ... g_k^e_k);
multiplication is collection from the left, see selfsim.kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

from selfsim import kernel
from selfsim.errors import PresentationError
from selfsim.intlattice import IntMatrix, Lattice, hnf, lattice_kernel, solve_left


class PcPresentation:
    """Polycyclic presentation on a weighted basis with commutator table.

    comm maps pairs (i, j) with i < j to the exponent vector of
    [g_j, g_i], given as a dict {index: exponent}.  Missing pairs
    commute.  Presentations are validated eagerly; pass check=False
    only to inspect a deliberately broken table with consistency_check.
    """

    __slots__ = ("names", "weights", "comm", "ctx", "k", "label", "_center")

    def __init__(self, names, weights, comm, label="", check=True):
        names = tuple(names)
        weights = tuple(int(w) for w in weights)
        if len(names) != len(weights):
            raise PresentationError("names and weights differ in length")
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator names")
        if any(w not in (1, 2, 3) for w in weights):
            raise PresentationError("weights must lie in {1, 2, 3}")
        if any(weights[i] > weights[i + 1] for i in range(len(weights) - 1)):
            raise PresentationError("basis must be ordered by weight")
        k = len(names)
        table = {}
        for (i, j), vec in comm.items():
            if not (0 <= i < j < k):
                raise PresentationError("bad table pair (%d, %d)" % (i, j))
            entry = tuple(sorted((idx, int(e)) for idx, e in vec.items() if e))
            if not entry:
                continue
            wsum = weights[i] + weights[j]
            if wsum > 3:
                raise PresentationError(
                    "[%s, %s] must be trivial (weight %d)" % (names[j], names[i], wsum)
                )
            for idx, _ in entry:
                if weights[idx] < wsum:
                    raise PresentationError(
                        "entry for [%s, %s] hits weight-%d generator %s"
                        % (names[j], names[i], weights[idx], names[idx])
                    )
            table[(i, j)] = entry
        self.names = names
        self.weights = weights
        self.k = k
        self.label = label
        self.comm = table
        self.ctx = _build_ctx(weights, table, k)
        self._center = None
        if check:
            report = consistency_check(self)
            if not report.ok:
                raise PresentationError("inconsistent table: %s" % report.failure)

    def __repr__(self):
        return "PcPresentation(%s, k=%d)" % (self.label or "?", self.k)

    # -- elements ------------------------------------------------------

    def element(self, exps) -> "GroupElement":
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.k:
            raise PresentationError("exponent vector has wrong length")
        return GroupElement(self, exps)

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.k)

    def gen(self, i) -> "GroupElement":
        if isinstance(i, str):
            i = self.names.index(i)
        exps = [0] * self.k
        exps[i] = 1
        return GroupElement(self, tuple(exps))

    def gens(self):
        return [self.gen(i) for i in range(self.k)]

    # -- weight blocks -------------------------------------------------

    def block(self, weight):
        """range of basis indices carrying the given weight."""
        lo = next((i for i, w in enumerate(self.weights) if w == weight), self.k)
        hi = next((i for i, w in enumerate(self.weights) if w > weight), self.k)
        return range(lo, hi)

    def hirsch_length(self):
        return self.k


def _bracket_vec(weights, table, a, b, k):
    # exponent vector of [g_a, g_b] from the table (group-exact)
    if a == b:
        return ()
    if a > b:
        return table.get((b, a), ())
    entry = table.get((a, b), ())
    return tuple((idx, -e) for idx, e in entry)  # tail block is abelian


def _build_ctx(weights, table, k):
    comm = [[() for _ in range(k)] for _ in range(k)]
    for (i, j), entry in table.items():
        comm[i][j] = entry
    utab = [[() for _ in range(k)] for _ in range(k)]
    vtab = [[() for _ in range(k)] for _ in range(k)]
    for (i, j), entry in table.items():
        if weights[i] == 1 and weights[j] == 1:
            for tab, g in ((utab, j), (vtab, i)):
                acc = {}
                for idx, e in entry:
                    if weights[idx] != 2:
                        continue
                    for idx2, e2 in _bracket_vec(weights, table, idx, g, k):
                        acc[idx2] = acc.get(idx2, 0) + e * e2
                tab[i][j] = tuple(sorted((x, e) for x, e in acc.items() if e))
    return (weights, tuple(map(tuple, comm)), tuple(map(tuple, utab)), tuple(map(tuple, vtab)))


class GroupElement:
    """Group element in normal form: an exponent vector over the basis."""

    __slots__ = ("pres", "exps")

    def __init__(self, pres, exps):
        self.pres = pres
        self.exps = exps

    def _check(self, other):
        if self.pres is not other.pres:
            raise PresentationError("elements from different presentations")

    def __mul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._check(other)
        return GroupElement(self.pres, kernel.mul(self.exps, other.exps, self.pres.ctx))

    def inverse(self):
        return GroupElement(self.pres, kernel.inv(self.exps, self.pres.ctx))

    def __pow__(self, n):
        return GroupElement(self.pres, kernel.pw(self.exps, int(n), self.pres.ctx))

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.pres is other.pres
            and self.exps == other.exps
        )

    def __hash__(self):
        return hash(self.exps)

    def is_identity(self):
        return not any(self.exps)

    def leading(self):
        """(index, exponent) of the first nonzero exponent, or None."""
        for i, e in enumerate(self.exps):
            if e:
                return i, e
        return None

    def __repr__(self):
        return "<%s>" % format_element(self)


def multiply(x: GroupElement, y: GroupElement) -> GroupElement:
    return x * y


def inverse(x: GroupElement) -> GroupElement:
    return x.inverse()


def power(x: GroupElement, n) -> GroupElement:
    return x ** n


def commutator(x: GroupElement, y: GroupElement) -> GroupElement:
    """[x, y] = x^-1 y^-1 x y."""
    x._check(y)
    return x.inverse() * y.inverse() * x * y


def conjugate(x: GroupElement, y: GroupElement) -> GroupElement:
    """x^y = y^-1 x y."""
    x._check(y)
    return y.inverse() * x * y


def graded_image(x: GroupElement, weight):
    """Sub-vector of exponents at the given weight (1, 2 or 3)."""
    return tuple(x.exps[i] for i in x.pres.block(weight))


@dataclass
class ConsistencyReport:
    ok: bool
    overlaps: int
    jacobi: int
    failure: str | None = None


def consistency_check(pres: PcPresentation) -> ConsistencyReport:
    """Associativity overlaps (g_k g_j) g_i = g_k (g_j g_i), i < j < k,
    plus the graded Jacobi identity on weight-1 triples (exact in class 3
    because gamma_4 = 1).  Failures are reported, not raised.
    """
    g = pres.gens()
    overlaps = 0
    for i in range(pres.k):
        for j in range(i + 1, pres.k):
            for kk in range(j + 1, pres.k):
                left = (g[kk] * g[j]) * g[i]
                right = g[kk] * (g[j] * g[i])
                overlaps += 1
                if left != right:
                    return ConsistencyReport(
                        False,
                        overlaps,
                        0,
                        "overlap (%s %s) %s" % (pres.names[kk], pres.names[j], pres.names[i]),
                    )
    jac = 0
    w1 = list(pres.block(1))
    for a in range(len(w1)):
        for b in range(a + 1, len(w1)):
            for c in range(b + 1, len(w1)):
                x, y, z = g[w1[a]], g[w1[b]], g[w1[c]]
                prod = (
                    commutator(commutator(x, y), z)
                    * commutator(commutator(y, z), x)
                    * commutator(commutator(z, x), y)
                )
                jac += 1
                if not prod.is_identity():
                    return ConsistencyReport(
                        False,
                        overlaps,
                        jac,
                        "jacobi (%s, %s, %s)"
                        % (pres.names[w1[a]], pres.names[w1[b]], pres.names[w1[c]]),
                    )
    return ConsistencyReport(True, overlaps, jac)


def center_lattice(pres: PcPresentation) -> Lattice:
    """Lattice of exponent vectors of central elements.

    Solved linearly over the graded structure: the weight-1 part must
    have vanishing graded brackets against every generator; the
    weight-2 part must have vanishing (central) brackets against the
    weight-1 generators; weight-3 coordinates are free.  Each basis
    vector of the result is verified central by exact commutators, so a
    presentation outside the family this layered solve covers is
    rejected rather than silently miscomputed.
    """
    if pres._center is not None:
        return pres._center
    k = pres.k
    w1 = list(pres.block(1))
    w2 = list(pres.block(2))
    # constraints on the weight-1 part: the bracket against every
    # generator of weight 1 or 2 must vanish (one row per variable,
    # columns = dense bracket vectors, concatenated over targets)
    con_rows = []
    for i in w1:
        row = []
        for j in range(k):
            dense = [0] * k
            if pres.weights[j] != 3 and j != i:
                for idx, e in _bracket_vec(pres.weights, pres.comm, i, j, k):
                    dense[idx] = e
            row.extend(dense)
        con_rows.append(tuple(row))
    v1 = lattice_kernel(IntMatrix(con_rows)) if con_rows else Lattice.full(0)
    # constraints on the weight-2 part: brackets against weight-1 gens
    con2 = []
    for t in w2:
        row = []
        for j in w1:
            vec = _bracket_vec(pres.weights, pres.comm, t, j, k)
            dense = [0] * k
            for idx, e in vec:
                dense[idx] = e
            row.extend(dense)
        con2.append(tuple(row))
    v2 = lattice_kernel(IntMatrix(con2)) if con2 else Lattice.full(0)

    basis_rows = []
    for alpha in v1.basis.entries:
        full = [0] * k
        for pos, i in enumerate(w1):
            full[i] = alpha[pos]
        basis_rows.append(tuple(full))
    for beta in v2.basis.entries:
        full = [0] * k
        for pos, t in enumerate(w2):
            full[t] = beta[pos]
        basis_rows.append(tuple(full))
    for z in pres.block(3):
        full = [0] * k
        full[z] = 1
        basis_rows.append(tuple(full))
    lat = Lattice.from_rows(k, basis_rows)
    # exact verification of every basis vector
    gens = pres.gens()
    for row in lat.basis.entries:
        x = pres.element(row)
        for g in gens:
            if not commutator(x, g).is_identity():
                raise PresentationError(
                    "center solve not exact for this presentation (basis vector %r)"
                    % (row,)
                )
    pres._center = lat
    return lat


# -- element word grammar ---------------------------------------------
#
# word   := term ('*' term)*
# term   := atom ('^' int)?
# atom   := name | '1' | '[' word ',' word ']' | '(' word ')'
#
# Only weight-1 generators need atomic names; bracket words evaluate to
# the corresponding basis elements anyway.


class _Parser:
    def __init__(self, pres, text):
        self.pres = pres
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise ValueError("bad element word at position %d: %s" % (self.pos, msg))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error("expected %r" % ch)
        self.pos += 1

    def parse_int(self):
        self.skip_ws()
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            self.error("expected integer")
        return int(self.text[start : self.pos])

    def parse_word(self):
        x = self.parse_term()
        while self.peek() == "*":
            self.pos += 1
            x = x * self.parse_term()
        return x

    def parse_term(self):
        x = self.parse_atom()
        if self.peek() == "^":
            self.pos += 1
            x = x ** self.parse_int()
        return x

    def parse_atom(self):
        ch = self.peek()
        if ch == "[":
            self.pos += 1
            a = self.parse_word()
            self.expect(",")
            b = self.parse_word()
            self.expect("]")
            return commutator(a, b)
        if ch == "(":
            self.pos += 1
            a = self.parse_word()
            self.expect(")")
            return a
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        name = self.text[start : self.pos]
        if not name:
            self.error("expected generator name")
        if name == "1":
            return self.pres.identity()
        if name not in self.pres.names:
            self.error("unknown generator %r" % name)
        return self.pres.gen(name)


def parse_element(pres: PcPresentation, text: str) -> GroupElement:
    """Evaluate an element word like 'a^2*[a,b]^-1*b'."""
    p = _Parser(pres, text)
    x = p.parse_word()
    p.skip_ws()
    if p.pos != len(text):
        p.error("trailing input")
    return x


def format_element(x: GroupElement) -> str:
    """Normal-form word of x; '1' for the identity."""
    parts = []
    for i, e in enumerate(x.exps):
        if not e:
            continue
        name = x.pres.names[i]
        if not name.isidentifier():
            name = "(%s)" % name if "," not in name else name
        parts.append(name if e == 1 else "%s^%d" % (name, e))
    return "*".join(parts) if parts else "1"
