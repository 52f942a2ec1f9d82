# cython: language_level=3
"""Compiled collection engine; semantic twin of selfsim._pykernel.

Exponents stay Python objects (they are unbounded big integers); the
speedup comes from typed list bookkeeping in the hot swap loop.
"""


def collect(runs, ctx):
    """Collect a run word to its normal form (list of sorted runs)."""
    weights, comm, utab, vtab = ctx
    cdef list w = [(g, e) for (g, e) in runs if e]
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t p, q, wp, wq, idx
    while i + 1 < len(w):
        p, e = <tuple>w[i]
        q, f = <tuple>w[i + 1]
        if p == q:
            e = e + f
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
            if wp == 1:
                m = f * (e * (e - 1) // 2)
                if m:
                    for idx, ce in utab[q][p]:
                        corr[idx] = corr.get(idx, 0) + ce * m
                m = e * (f * (f - 1) // 2)
                if m:
                    for idx, ce in vtab[q][p]:
                        corr[idx] = corr.get(idx, 0) + ce * m
            ins = sorted([(idx, ce) for idx, ce in corr.items() if ce])
            if ins:
                w[i + 2 : i + 2] = ins
        if i:
            i -= 1
    return w


cdef list _to_runs(x):
    cdef list out = []
    cdef Py_ssize_t g = 0
    for e in x:
        if e:
            out.append((g, e))
        g += 1
    return out


cdef tuple _to_vec(list runs, Py_ssize_t k):
    cdef list out = [0] * k
    for g, e in runs:
        out[g] = e
    return tuple(out)


def mul(x, y, ctx):
    """Normal form of x*y for exponent vectors x, y."""
    cdef Py_ssize_t k = len(x)
    return _to_vec(collect(_to_runs(x) + _to_runs(y), ctx), k)


def inv(x, ctx):
    """Normal form of x^-1."""
    cdef Py_ssize_t k = len(x)
    cdef list runs = _to_runs(x)
    runs.reverse()
    runs = [(g, -e) for g, e in runs]
    return _to_vec(collect(runs, ctx), k)


def pw(x, n, ctx):
    """Normal form of x^n (n any integer), by binary powering."""
    cdef Py_ssize_t k = len(x)
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
