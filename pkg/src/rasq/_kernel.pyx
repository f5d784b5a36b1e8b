# cython: language_level=3, boundscheck=False, wraparound=False
"""Bitmask loops behind the brute-force semantics, compiled version.

Same functions and results as ``_kernel_py``.  Masks are 64-bit, so programs
with more than 62 atoms (and guard memo tables above 16 atoms) fall back to
the Python implementation.
"""

from libc.stdlib cimport malloc, calloc, free
from libc.stdint cimport uint64_t, uint32_t

from . import _kernel_py

ctypedef unsigned long long u64

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

cdef struct Prog:
    int nr
    int n
    int *heads
    u64 *pos
    u64 *neg


cdef int _load(Prog *p, heads, pos, neg, int n) except -1:
    cdef int k
    p.nr = len(heads)
    p.n = n
    p.heads = <int *> malloc(max(p.nr, 1) * sizeof(int))
    p.pos = <u64 *> malloc(max(p.nr, 1) * sizeof(u64))
    p.neg = <u64 *> malloc(max(p.nr, 1) * sizeof(u64))
    if p.heads == NULL or p.pos == NULL or p.neg == NULL:
        raise MemoryError()
    for k in range(p.nr):
        p.heads[k] = heads[k]
        p.pos[k] = pos[k]
        p.neg[k] = neg[k]
    return 0


cdef void _unload(Prog *p):
    free(p.heads)
    free(p.pos)
    free(p.neg)


cdef inline int _n_atoms(heads, pos, neg):
    cdef int n = 0
    for h in heads:
        if h + 1 > n:
            n = h + 1
    for m in pos:
        if m.bit_length() > n:
            n = m.bit_length()
    for m in neg:
        if m.bit_length() > n:
            n = m.bit_length()
    return n


cdef u64 _gl(Prog *p, u64 i_mask) nogil:
    cdef u64 m = 0, h
    cdef int k
    cdef bint changed = True
    while changed:
        changed = False
        for k in range(p.nr):
            if p.neg[k] & i_mask:
                continue
            h = (<u64> 1) << p.heads[k]
            if not (m & h) and (p.pos[k] & m) == p.pos[k]:
                m |= h
                changed = True
    return m


cdef u64 _supported_closure(Prog *p, u64 m) nogil:
    cdef u64 out = 0, h, q
    cdef int k
    cdef bint changed = True
    while changed:
        changed = False
        for k in range(p.nr):
            q = p.pos[k]
            if (p.neg[k] & m) or (q & m) != q:
                continue
            h = (<u64> 1) << p.heads[k]
            if not (out & h) and (q & out) == q:
                out |= h
                changed = True
    return out


def gl_least_model(heads, pos, neg, i_mask):
    cdef Prog p
    n = _n_atoms(heads, pos, neg)
    if n > 62 or i_mask.bit_length() > 62:
        return _kernel_py.gl_least_model(heads, pos, neg, i_mask)
    _load(&p, heads, pos, neg, n)
    try:
        return _gl(&p, i_mask)
    finally:
        _unload(&p)


def supported_closure(heads, pos, neg, m):
    cdef Prog p
    n = _n_atoms(heads, pos, neg)
    if n > 62 or m.bit_length() > 62:
        return _kernel_py.supported_closure(heads, pos, neg, m)
    _load(&p, heads, pos, neg, n)
    try:
        return _supported_closure(&p, m)
    finally:
        _unload(&p)


def is_cs_mask(heads, pos, neg, m):
    return m & ~supported_closure(heads, pos, neg, m) == 0


def answer_set_masks(heads, pos, neg, cand):
    cdef Prog p
    cdef u64 sub, c
    n = _n_atoms(heads, pos, neg)
    if n > 62 or cand.bit_length() > 62:
        return _kernel_py.answer_set_masks(heads, pos, neg, cand)
    _load(&p, heads, pos, neg, n)
    out = []
    c = cand
    sub = 0
    try:
        while True:
            if _gl(&p, sub) == sub:
                out.append(sub)
            if sub == c:
                break
            sub = (sub - c) & c
    finally:
        _unload(&p)
    return out


def cs_subsets(heads, pos, neg, cand):
    cdef Prog p
    cdef u64 sub, c
    n = _n_atoms(heads, pos, neg)
    if n > 62 or cand.bit_length() > 62:
        return _kernel_py.cs_subsets(heads, pos, neg, cand)
    _load(&p, heads, pos, neg, n)
    out = []
    c = cand
    sub = 0
    try:
        while True:
            if (sub & ~_supported_closure(&p, sub)) == 0:
                out.append(sub)
            if sub == c:
                break
            sub = (sub - c) & c
    finally:
        _unload(&p)
    return out


# Guarded derivability.  memo[a << n | forb] holds 1 (no) / 2 (yes) when its
# stamp equals the current round, so the table is reused across rounds
# without clearing.
cdef struct Guarded:
    Prog *p
    int *first
    int *nxt
    uint32_t *stamp
    unsigned char *val
    uint32_t round


cdef bint _derivable(Guarded *g, int a, u64 forb) nogil:
    cdef Prog *p = g.p
    cdef size_t key = ((<size_t> a) << p.n) | <size_t> forb
    cdef int k, b
    cdef u64 rest, low
    cdef bint ok
    if g.stamp[key] == g.round:
        return g.val[key] == 2
    k = g.first[a]
    ok = False
    while k >= 0:
        if not (p.neg[k] & forb) and not (p.pos[k] & forb):
            ok = True
            rest = p.pos[k]
            while rest:
                low = rest & (~rest + 1)
                b = __builtin_ctzll(rest)
                if not _derivable(g, b, forb | low):
                    ok = False
                    break
                rest ^= low
            if ok:
                break
        k = g.nxt[k]
    g.stamp[key] = g.round
    g.val[key] = 2 if ok else 1
    return ok


cdef u64 _gamma(Guarded *g, u64 i_mask) nogil:
    cdef Prog *p = g.p
    cdef int k, a
    cdef u64 out = 0
    for a in range(p.n):
        g.first[a] = -1
    for k in range(p.nr - 1, -1, -1):
        if p.neg[k] & i_mask:
            continue
        g.nxt[k] = g.first[p.heads[k]]
        g.first[p.heads[k]] = k
    g.round += 1
    for a in range(p.n):
        if g.first[a] >= 0 and _derivable(g, a, (<u64> 1) << a):
            out |= (<u64> 1) << a
    return out


cdef int _guarded_init(Guarded *g, Prog *p) except -1:
    cdef size_t size = (<size_t> p.n) << p.n
    g.p = p
    g.first = <int *> malloc(max(p.n, 1) * sizeof(int))
    g.nxt = <int *> malloc(max(p.nr, 1) * sizeof(int))
    g.stamp = <uint32_t *> calloc(max(size, 1), sizeof(uint32_t))
    g.val = <unsigned char *> malloc(max(size, 1))
    g.round = 0
    if g.first == NULL or g.nxt == NULL or g.stamp == NULL or g.val == NULL:
        raise MemoryError()
    return 0


cdef void _guarded_free(Guarded *g):
    free(g.first)
    free(g.nxt)
    free(g.stamp)
    free(g.val)


def gamma_hat_mask(heads, pos, neg, n, i_mask):
    cdef Prog p
    cdef Guarded g
    if n > 16:
        return _kernel_py.gamma_hat_mask(heads, pos, neg, n, i_mask)
    _load(&p, heads, pos, neg, n)
    try:
        _guarded_init(&g, &p)
        try:
            return _gamma(&g, i_mask)
        finally:
            _guarded_free(&g)
    finally:
        _unload(&p)


def gamma_images(heads, pos, neg, n, cand):
    cdef Prog p
    cdef Guarded g
    cdef u64 sub, c
    if n > 16:
        return _kernel_py.gamma_images(heads, pos, neg, n, cand)
    _load(&p, heads, pos, neg, n)
    seen = set()
    c = cand
    sub = 0
    try:
        _guarded_init(&g, &p)
        try:
            while True:
                seen.add(_gamma(&g, sub))
                if sub == c:
                    break
                sub = (sub - c) & c
        finally:
            _guarded_free(&g)
    finally:
        _unload(&p)
    return sorted(seen)
