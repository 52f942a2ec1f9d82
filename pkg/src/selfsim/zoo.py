"""Constructors for the groups and endomorphisms under study.

Groups: free abelian, Heisenberg, free nilpotent of class 3 and rank 2,
its one-relator torsion-free quotients, upper unitriangular groups over
Z (dimension <= 4, so the class stays <= 3; the matrix side works for
any dimension), and the 4-generator class-3 group with Hirsch length 13
whose tree actions are all non-faithful.

The commutator table of the 13-generator group is not copied from
anywhere: it is derived in the graded Lie ring by imposing the defining
relation blocks and closing under the Jacobi identity, then validated
by the consistency check and by the derived-relation test suite.

Convention everywhere: [x, y] = x^-1 y^-1 x y, brackets left-normed,
basis ordered by weight.
"""

from __future__ import annotations

from dataclasses import dataclass

from selfsim.errors import TorsionError
from selfsim.intlattice import IntMatrix, snf, xgcd
from selfsim.pcgroup import GroupElement, PcPresentation, commutator
from selfsim.subgroup import Subgroup, sift
from selfsim.vendo import VirtualEndomorphism, make_vendo, vendo_from_pairs


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    params: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parse CLI spec strings: free_abelian:3, heisenberg,
        two_gen_c3:1,0, free_nil_c3_r2, ut:4, n34."""
        if ":" in text:
            kind, rest = text.split(":", 1)
            params = tuple(int(p) for p in rest.split(","))
        else:
            kind, params = text, ()
        return cls(kind, params)


_CACHE: dict = {}


def make_group(spec) -> PcPresentation:
    """Validated presentation for a GroupSpec (or CLI spec string)."""
    if isinstance(spec, str):
        spec = GroupSpec.parse(spec)
    if spec in _CACHE:
        return _CACHE[spec]
    kind, params = spec.kind, spec.params
    if kind == "free_abelian":
        (n,) = params
        if n < 1:
            raise ValueError("free_abelian needs n >= 1")
        pres = PcPresentation(
            ["x%d" % (i + 1) for i in range(n)], [1] * n, {}, label="free_abelian:%d" % n
        )
    elif kind == "heisenberg":
        pres = PcPresentation(
            ["a", "b", "[a,b]"], [1, 1, 2], {(0, 1): {2: -1}}, label="heisenberg"
        )
    elif kind == "free_nil_c3_r2" or (kind == "two_gen_c3" and params == (0, 0)):
        pres = PcPresentation(
            ["a", "b", "[a,b]", "[a,b,a]", "[a,b,b]"],
            [1, 1, 2, 3, 3],
            {(0, 1): {2: -1}, (0, 2): {3: 1}, (1, 2): {4: 1}},
            label="free_nil_c3_r2",
        )
    elif kind == "two_gen_c3":
        k14, k15 = params
        d = snf(IntMatrix([[k14, k15]]))
        if d[0] != 1:
            raise TorsionError(
                "quotient by [a,b,a]^%d [a,b,b]^%d has torsion (snf %s)"
                % (k14, k15, d)
            )
        # complete (k14, k15) to a basis of Z^2; the surviving weight-3
        # coordinate of (v_d, v_e) is k14*v_e - k15*v_d
        pres = PcPresentation(
            ["a", "b", "[a,b]", "t"],
            [1, 1, 2, 3],
            {(0, 1): {2: -1}, (0, 2): {3: -k15}, (1, 2): {3: k14}},
            label="two_gen_c3:%d,%d" % (k14, k15),
        )
    elif kind == "ut":
        (n,) = params
        pres = _make_unitriangular(n)
    elif kind == "n34":
        pres = _make_n34()
    else:
        raise ValueError("unknown group kind %r" % kind)
    _CACHE[spec] = pres
    return pres


# -- the 4-generator class-3 group ---------------------------------------
#
# Basis: a b c d | [a,c] [a,d] [b,c] [b,d] | [a,b] [c,d] [a,[a,d]]
# [a,[b,c]] [a,[b,d]].  The pair brackets [a,b] and [c,d] are central
# (they equal triple brackets by the defining relations), which is why
# they sit in the weight-3 block.  Triple-bracket values, derived from
# the relation blocks plus Jacobi (z1..z5 the weight-3 basis):
#
#   [a,c,*]: a -> -z2   b -> -z4   c -> z1    d -> -z5
#   [a,d,*]: a -> -z3   b -> -z5   c -> -z5   d -> 0
#   [b,c,*]: a -> -z4   b -> 0     c -> z3    d -> z1
#   [b,d,*]: a -> -z5   b -> -z2   c -> z1    d -> -z4
#
# ([a,c,d] and [b,c,d] are the two values forced by Jacobi.)


def _make_n34() -> PcPresentation:
    names = [
        "a", "b", "c", "d",
        "[a,c]", "[a,d]", "[b,c]", "[b,d]",
        "[a,b]", "[c,d]", "[a,[a,d]]", "[a,[b,c]]", "[a,[b,d]]",
    ]
    weights = [1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 3]
    E1, E2, E3, E4 = 4, 5, 6, 7
    Z1, Z2, Z3, Z4, Z5 = 8, 9, 10, 11, 12
    comm = {
        # weight-1 pairs: [g_j, g_i] = [g_i, g_j]^-1
        (0, 1): {Z1: -1},
        (0, 2): {E1: -1},
        (0, 3): {E2: -1},
        (1, 2): {E3: -1},
        (1, 3): {E4: -1},
        (2, 3): {Z2: -1},
        # weight-2 against weight-1: the triple-bracket table above
        (0, E1): {Z2: -1},
        (1, E1): {Z4: -1},
        (2, E1): {Z1: 1},
        (3, E1): {Z5: -1},
        (0, E2): {Z3: -1},
        (1, E2): {Z5: -1},
        (2, E2): {Z5: -1},
        (0, E3): {Z4: -1},
        (2, E3): {Z3: 1},
        (3, E3): {Z1: 1},
        (0, E4): {Z5: -1},
        (1, E4): {Z2: -1},
        (2, E4): {Z1: 1},
        (3, E4): {Z4: -1},
    }
    return PcPresentation(names, weights, comm, label="n34")


# -- unitriangular groups -------------------------------------------------


class UTMatrix:
    """Upper unitriangular integer matrix (unit diagonal)."""

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(int(e) for e in r) for r in rows)
        n = len(rows)
        for i, r in enumerate(rows):
            if len(r) != n:
                raise ValueError("not square")
            if r[i] != 1 or any(r[j] for j in range(i)):
                raise ValueError("not unit upper triangular")
        self.n = n
        self.rows = rows

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def transvection(cls, n, i, j, e=1):
        """I + e*E_ij (0-based, i < j)."""
        if not (0 <= i < j < n):
            raise ValueError("need i < j")
        rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
        rows[i][j] = e
        return cls(rows)

    def __eq__(self, other):
        return isinstance(other, UTMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "UTMatrix(%r)" % (list(map(list, self.rows)),)

    def __mul__(self, other):
        if not isinstance(other, UTMatrix) or self.n != other.n:
            return NotImplemented
        n = self.n
        a, b = self.rows, other.rows
        return UTMatrix(
            tuple(
                tuple(sum(a[i][k] * b[k][j] for k in range(i, j + 1)) for j in range(n))
                for i in range(n)
            )
        )

    def inverse(self):
        # back substitution; the inverse is again integral unitriangular
        n = self.n
        inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for i in range(n - 1, -1, -1):
            for j in range(i + 1, n):
                s = -sum(self.rows[i][k] * inv[k][j] for k in range(i + 1, j + 1))
                inv[i][j] = s
        return UTMatrix(inv)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        acc = UTMatrix.identity(self.n)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            e >>= 1
            if e:
                base = base * base
        return acc

    def conjugate_by_diag(self, diag):
        """D^-1 * M * D for D = diag(diag); entry (i,j) scales by d_j/d_i.

        Raises when a scaled entry is not integral.
        """
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                if j <= i:
                    row.append(self.rows[i][j])
                    continue
                num = self.rows[i][j] * diag[j]
                if num % diag[i]:
                    raise ValueError("conjugate is not integral at (%d, %d)" % (i, j))
                row.append(num // diag[i])
            out.append(row)
        return UTMatrix(out)


def _ut_positions(n):
    """Transvection positions ordered by weight j - i, then lexicographically."""
    return [
        (i, j)
        for w in range(1, n)
        for i in range(n - w)
        for j in (i + w,)
    ]


def _make_unitriangular(n) -> PcPresentation:
    if n < 2:
        raise ValueError("unitriangular needs n >= 2")
    if n > 4:
        raise ValueError(
            "unitriangular pc presentations are limited to n <= 4 (class <= 3)"
        )
    pos = _ut_positions(n)
    names = ["t%d%d" % (i + 1, j + 1) for i, j in pos]
    weights = [j - i for i, j in pos]
    comm = {}
    for bi in range(len(pos)):
        for bj in range(bi + 1, len(pos)):
            m = _ut_comm_matrix(n, pos[bj], pos[bi])
            vec = {}
            for idx, e in enumerate(ut_to_exponents(n, m)):
                if e:
                    vec[idx] = e
            if vec:
                comm[(bi, bj)] = vec
    return PcPresentation(names, weights, comm, label="ut:%d" % n)


def _ut_comm_matrix(n, pj, pi):
    a = UTMatrix.transvection(n, *pj)
    b = UTMatrix.transvection(n, *pi)
    return a.inverse() * b.inverse() * a * b


def ut_to_exponents(n, m: UTMatrix):
    """Exponent vector of a unitriangular matrix over the transvection basis.

    Peels diagonals in weight order; the running matrix determines each
    exponent directly at its position.
    """
    exps = []
    cur = m
    for i, j in _ut_positions(n):
        e = cur.rows[i][j]
        exps.append(e)
        if e:
            cur = UTMatrix.transvection(n, i, j, -e) * cur
    if cur != UTMatrix.identity(n):
        raise AssertionError("peeling did not terminate at the identity")
    return tuple(exps)


def ut_element_to_matrix(pres: PcPresentation, x: GroupElement) -> UTMatrix:
    """Matrix of a pc element of a ut:n presentation."""
    n = _ut_dim(pres)
    m = UTMatrix.identity(n)
    for (i, j), e in zip(_ut_positions(n), x.exps):
        if e:
            m = m * UTMatrix.transvection(n, i, j, e)
    return m


def ut_matrix_to_element(pres: PcPresentation, m: UTMatrix) -> GroupElement:
    return pres.element(ut_to_exponents(_ut_dim(pres), m))


def _ut_dim(pres):
    k = pres.k
    for n in range(2, 6):
        if n * (n - 1) // 2 == k:
            return n
    raise ValueError("not a unitriangular presentation")


def dm_scaling(n, m):
    """Diagonal D = (1, m, m^2, ..., m^(n-1))."""
    return tuple(m ** i for i in range(n))


def dm_endo(n, m) -> VirtualEndomorphism:
    """The division map on the diagonally scaled copy of ut:n.

    Domain: the subgroup of matrices with entry (i, j) divisible by
    m^(j-i) (generated by the scaled transvections); map: conjugation
    by the inverse scaling diagonal, i.e. t_ij^(m^(j-i)) -> t_ij.
    Recurrent and bijective onto the whole group by construction.
    """
    if n < 2 or m < 2:
        raise ValueError("need n >= 2 and m >= 2")
    pres = make_group(GroupSpec("ut", (n,)))
    pairs = []
    for pos, (i, j) in enumerate(_ut_positions(n)):
        g = pres.gen(pos)
        pairs.append((g ** (m ** (j - i)), g))
    return vendo_from_pairs(pres, pairs, label="dm:%d,%d" % (n, m))


def dm_section(n, m) -> VirtualEndomorphism:
    """The scaling embedding t_ij -> t_ij^(m^(j-i)) on the whole group.

    This is the injective endomorphism whose image is dm_endo's domain;
    it is the map fed to the coset-tree construction.
    """
    pres = make_group(GroupSpec("ut", (n,)))
    pairs = []
    for pos, (i, j) in enumerate(_ut_positions(n)):
        g = pres.gen(pos)
        pairs.append((g, g ** (m ** (j - i))))
    return vendo_from_pairs(pres, pairs, label="dm_section:%d,%d" % (n, m))


def diag_section(n, diag) -> VirtualEndomorphism:
    """Conjugation x -> D^-1 x D as an endomorphism of ut:n, for any
    positive diagonal with integral scalings d_j/d_i."""
    pres = make_group(GroupSpec("ut", (n,)))
    pairs = []
    for pos, (i, j) in enumerate(_ut_positions(n)):
        if (diag[j] // diag[i]) * diag[i] != diag[j]:
            raise ValueError("diagonal scalings must be integral")
        g = pres.gen(pos)
        pairs.append((g, g ** (diag[j] // diag[i])))
    return vendo_from_pairs(pres, pairs, label="diag:%s" % (",".join(map(str, diag))))


# -- the 2-generator class-3 mechanism ------------------------------------


def psi_params(k11, k12, k13, d):
    """(m_1, m_2, m_3) by literal evaluation of the construction formulas."""
    m1 = k11 * d
    m2 = k13 * d - d * m1 * k13 - m1 * (m1 - 1) // 2
    m3 = -k12 * d + d * m1 * k12 + m1 * (m1 - 1) // 2
    return m1, m2, m3


def psi_endo(pres: PcPresentation, m1, m2, m3) -> VirtualEndomorphism:
    """a -> a^m1 [a,b]^m2, b -> b^m1 [a,b]^m3 on a 2-generator class-3 group.

    The assignment is pushed through shadow sifting to the whole basis,
    validated as a homomorphism (relator images must collapse), and
    checked injective via the graded block determinants.
    """
    if m1 < 1:
        raise ValueError("m1 must be >= 1")
    from selfsim.vendo import is_injective_endo

    a, b = pres.gen(0), pres.gen(1)
    c = commutator(a, b)
    big_a = (a ** m1) * (c ** m2)
    big_b = (b ** m1) * (c ** m3)
    f = vendo_from_pairs(
        pres, [(a, big_a), (b, big_b)], label="psi:%d,%d,%d" % (m1, m2, m3)
    )
    if f.domain.index() != 1:
        raise ValueError("a and b do not generate this presentation")
    if not is_injective_endo(f):
        raise ValueError("psi has a zero induced determinant (not injective)")
    return f


def n34_subgroup_K(m, n, k, j) -> Subgroup:
    """K = <a^m, b^n, c^k, d^j> in the 13-generator group."""
    if min(m, n, k, j) < 1:
        raise ValueError("powers must be positive")
    pres = make_group("n34")
    gens = [
        pres.gen(0) ** m,
        pres.gen(1) ** n,
        pres.gen(2) ** k,
        pres.gen(3) ** j,
    ]
    return sift(pres, gens)


def scale_endo(pres: PcPresentation, exps) -> VirtualEndomorphism:
    """g_i -> g_i^e_i on the weight-1 generators, mechanically validated."""
    w1 = list(pres.block(1))
    if len(exps) != len(w1):
        raise ValueError("need one exponent per weight-1 generator")
    pairs = [(pres.gen(i), pres.gen(i) ** e) for i, e in zip(w1, exps)]
    return vendo_from_pairs(pres, pairs, label="pow:%s" % (",".join(map(str, exps))))
