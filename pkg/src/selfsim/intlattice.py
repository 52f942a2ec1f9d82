"""Exact integer linear algebra: matrices, Hermite/Smith normal forms, lattices.

Everything runs on arbitrary-precision Python ints; no floating point
anywhere.  The Hermite normal form convention is fixed once and for all:
row style, positive pivots, entries above a pivot reduced into
[0, pivot).  Fixing the convention makes every canonical form
deterministic, so results can be frozen into tests byte for byte.
"""

from __future__ import annotations


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g == a*x + b*y."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        rows = tuple(tuple(int(e) for e in row) for row in entries)
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
        else:
            ncols = 0
        self.entries = rows
        self.rows = len(rows)
        self.cols = ncols

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, r, c):
        return cls(tuple((0,) * c for _ in range(r)))

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "IntMatrix(%r)" % (list(map(list, self.entries)),)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def __mul__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.entries
        out = []
        for r in self.entries:
            out.append(
                tuple(
                    sum(r[k] * ot[k][j] for k in range(self.cols))
                    for j in range(other.cols)
                )
            )
        return IntMatrix(out)

    def transpose(self):
        return IntMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("det of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def _row_sub(rows, i, j, q, cols):
    # rows[i] -= q * rows[j]
    ri, rj = rows[i], rows[j]
    for c in range(cols):
        ri[c] -= q * rj[c]


def hnf(m: IntMatrix):
    """Row Hermite normal form with transform: returns (h, u), h = u*m.

    u is unimodular; pivots of h are positive with the entries above each
    pivot reduced into [0, pivot).  Zero rows of h sink to the bottom.
    """
    nr, nc = m.rows, m.cols
    a = [list(r) for r in m.entries]
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    piv = 0
    for col in range(nc):
        if piv >= nr:
            break
        # gcd out the column below piv
        while True:
            nz = [i for i in range(piv, nr) if a[i][col]]
            if not nz:
                break
            imin = min(nz, key=lambda i: abs(a[i][col]))
            if imin != piv:
                a[piv], a[imin] = a[imin], a[piv]
                u[piv], u[imin] = u[imin], u[piv]
            done = True
            for i in range(piv + 1, nr):
                if a[i][col]:
                    q = a[i][col] // a[piv][col]
                    _row_sub(a, i, piv, q, nc)
                    _row_sub(u, i, piv, q, nr)
                    if a[i][col]:
                        done = False
            if done:
                break
        if a[piv][col] == 0:
            continue
        if a[piv][col] < 0:
            a[piv] = [-e for e in a[piv]]
            u[piv] = [-e for e in u[piv]]
        p = a[piv][col]
        for i in range(piv):
            q = a[i][col] // p  # floor: entries land in [0, p)
            if q:
                _row_sub(a, i, piv, q, nc)
                _row_sub(u, i, piv, q, nr)
        piv += 1
    return IntMatrix(a), IntMatrix(u)


def snf(m: IntMatrix):
    """Invariant factors d_1 | d_2 | ... of m (length min(rows, cols))."""
    nr, nc = m.rows, m.cols
    n = min(nr, nc)
    if n == 0:
        return []
    a = [list(r) for r in m.entries]

    def find_pivot(t):
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j]:
                    return i, j
        return None

    for t in range(n):
        pos = find_pivot(t)
        if pos is None:
            break
        i, j = pos
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            # clear column t
            for i in range(t + 1, nr):
                while a[i][t]:
                    q = a[i][t] // a[t][t]
                    for c in range(t, nc):
                        a[i][c] -= q * a[t][c]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
            # clear row t
            dirty = False
            for j in range(t + 1, nc):
                while a[t][j]:
                    q = a[t][j] // a[t][t]
                    for r in range(t, nr):
                        a[r][j] -= q * a[r][t]
                    if a[t][j]:
                        for r in range(t, nr):
                            a[r][t], a[r][j] = a[r][j], a[r][t]
                        dirty = True
            if not dirty and all(a[i][t] == 0 for i in range(t + 1, nr)):
                break
    d = [abs(a[t][t]) if t < nr and t < nc else 0 for t in range(n)]
    # enforce the divisibility chain
    for i in range(n):
        for j in range(i + 1, n):
            if d[j] % (d[i] or 1) != 0 or d[i] == 0:
                g, _, _ = xgcd(d[i], d[j])
                lcm = 0 if g == 0 else d[i] * d[j] // g
                d[i], d[j] = g, lcm
    return d


class Lattice:
    """Sublattice of Z^n given by a basis in row HNF with zero rows removed."""

    __slots__ = ("ambient_rank", "basis")

    def __init__(self, ambient_rank, basis: IntMatrix):
        h, _ = hnf(basis)
        rows = tuple(r for r in h.entries if any(r))
        self.ambient_rank = ambient_rank
        self.basis = IntMatrix(rows)
        if self.basis.rows and self.basis.cols != ambient_rank:
            raise ValueError("basis width does not match ambient rank")

    @classmethod
    def from_rows(cls, ambient_rank, rows):
        if not rows:
            return cls(ambient_rank, IntMatrix.zero(0, ambient_rank))
        return cls(ambient_rank, IntMatrix(rows))

    @classmethod
    def full(cls, n):
        return cls(n, IntMatrix.identity(n))

    @classmethod
    def zero(cls, n):
        return cls(n, IntMatrix.zero(0, n))

    @property
    def rank(self):
        return self.basis.rows

    def is_zero(self):
        return self.basis.rows == 0

    def __eq__(self, other):
        return (
            isinstance(other, Lattice)
            and self.ambient_rank == other.ambient_rank
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_rank, self.basis))

    def __repr__(self):
        return "Lattice(%d, %r)" % (self.ambient_rank, list(map(list, self.basis.entries)))

    def contains(self, v):
        return lattice_member(v, self)


def hnf_solver(m: IntMatrix):
    """Precomputed solver for x*m == target; call it per target.

    Works through the row HNF: with h = u*m, solve z*h = target by
    back-substitution over the pivot columns, then x = z*u.
    """
    h, u = hnf(m)
    pivots = []  # (row, col)
    for i in range(h.rows):
        row = h.entries[i]
        for j in range(h.cols):
            if row[j]:
                pivots.append((i, j))
                break

    def solve(target):
        target = tuple(int(t) for t in target)
        if len(target) != m.cols:
            raise ValueError("target length mismatch")
        rem = list(target)
        z = [0] * h.rows
        for i, j in pivots:
            p = h.entries[i][j]
            if rem[j] % p != 0:
                return None
            q = rem[j] // p
            z[i] = q
            if q:
                for c in range(h.cols):
                    rem[c] -= q * h.entries[i][c]
        if any(rem):
            return None
        return tuple(
            sum(z[i] * u.entries[i][j] for i in range(h.rows)) for j in range(u.cols)
        )

    return solve


def solve_left(m: IntMatrix, target):
    """Integer solution x of x*m == target, or None."""
    return hnf_solver(m)(target)


def lattice_member(v, lat: Lattice):
    """True iff v is an integer combination of the lattice basis."""
    v = tuple(int(e) for e in v)
    if len(v) != lat.ambient_rank:
        raise ValueError("rank mismatch")
    if not any(v):
        return True
    if lat.basis.rows == 0:
        return False
    return solve_left(lat.basis, v) is not None


def lattice_kernel(m: IntMatrix):
    """Lattice of integer row vectors v with v*m == 0 (ambient = m.rows)."""
    h, u = hnf(m)
    rows = [u.entries[i] for i in range(h.rows) if not any(h.entries[i])]
    return Lattice.from_rows(m.rows, rows)


def lattice_intersect(a: Lattice, b: Lattice):
    """Intersection of two lattices in the same ambient space."""
    if a.ambient_rank != b.ambient_rank:
        raise ValueError("rank mismatch")
    n = a.ambient_rank
    if a.basis.rows == 0 or b.basis.rows == 0:
        return Lattice.zero(n)
    stacked = IntMatrix(a.basis.entries + b.basis.entries)
    ker = lattice_kernel(stacked)
    p = a.basis.rows
    rows = []
    for krow in ker.basis.entries:
        x = krow[:p]
        rows.append(
            tuple(
                sum(x[i] * a.basis.entries[i][j] for i in range(p)) for j in range(n)
            )
        )
    return Lattice.from_rows(n, rows)
