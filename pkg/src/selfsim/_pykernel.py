"""Collection engine for weighted class-<=3 polycyclic presentations.

Pure-Python reference implementation; selfsim._ckernel is the compiled
twin with identical semantics.  Keep the two in lockstep.

A word is a list of (generator index, exponent) runs; the normal form
has strictly increasing indices.  Collection from the left repeatedly
swaps the leftmost out-of-order pair of runs.  With generators ordered
by weight, only two swap shapes produce corrections:

    w(x) = w(y) = 1:   x^e y^f -> y^f x^e  c^(e*f) u^(f*C(e,2)) v^(e*C(f,2))
    w(x) = 2, w(y) = 1: x^e y^f -> y^f x^e  c^(e*f)

where c = [x, y], u = [c, x], v = [c, y] and C(e,2) = e*(e-1)/2 (valid
for negative e as well).  Everything else commutes: gamma_2 is abelian
and weight-3 generators are central.  Exponents are plain Python ints,
so they may grow without bound.

The kernel context is the tuple (weights, comm, utab, vtab) built by
pcgroup: comm[i][j] holds [g_j, g_i] for i < j as a sparse, sorted
tuple of (index, exponent) pairs, and utab/vtab hold the precomputed
u and v vectors for weight-1 pairs.
"""


def collect(runs, ctx):
    """Collect a run word to its normal form (list of sorted runs)."""
    weights, comm, utab, vtab = ctx
    w = [(g, e) for (g, e) in runs if e]
    i = 0
    while i + 1 < len(w):
        p, e = w[i]
        q, f = w[i + 1]
        if p == q:
            e += f
            if e:
                w[i] = (p, e)
                del w[i + 1]
            else:
                del w[i : i + 2]
            if i:
                i -= 1
            continue
        if p < q:
            i += 1
            continue
        # out of order: g_p^e g_q^f with p > q
        w[i] = (q, f)
        w[i + 1] = (p, e)
        wp = weights[p]
        wq = weights[q]
        if wp + wq <= 3:
            corr = {}
            c = comm[q][p]
            ef = e * f
            for idx, ce in c:
                corr[idx] = corr.get(idx, 0) + ce * ef
            if wp == 1:  # wq == 1 as well; binomial corrections
                m = f * (e * (e - 1) // 2)
                if m:
                    for idx, ce in utab[q][p]:
                        corr[idx] = corr.get(idx, 0) + ce * m
                m = e * (f * (f - 1) // 2)
                if m:
                    for idx, ce in vtab[q][p]:
                        corr[idx] = corr.get(idx, 0) + ce * m
            ins = sorted((idx, ce) for idx, ce in corr.items() if ce)
            if ins:
                w[i + 2 : i + 2] = ins
        if i:
            i -= 1
    return w


def _to_runs(vec):
    return [(g, e) for g, e in enumerate(vec) if e]


def _to_vec(runs, k):
    out = [0] * k
    for g, e in runs:
        out[g] = e
    return tuple(out)


def mul(x, y, ctx):
    """Normal form of x*y for exponent vectors x, y."""
    k = len(x)
    return _to_vec(collect(_to_runs(x) + _to_runs(y), ctx), k)


def inv(x, ctx):
    """Normal form of x^-1."""
    k = len(x)
    runs = [(g, -e) for g, e in reversed(_to_runs(x))]
    return _to_vec(collect(runs, ctx), k)


def pw(x, n, ctx):
    """Normal form of x^n (n any integer), by binary powering."""
    k = len(x)
    if n == 0:
        return (0,) * k
    if n < 0:
        x = inv(x, ctx)
        n = -n
    acc = None
    base = x
    while n:
        if n & 1:
            acc = base if acc is None else mul(acc, base, ctx)
        n >>= 1
        if n:
            base = mul(base, base, ctx)
    return acc
