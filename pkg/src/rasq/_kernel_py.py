"""Bitmask loops behind the brute-force semantics, pure Python version.

A program is passed as three parallel lists: ``heads[k]`` is the atom index
of rule ``k``, ``pos[k]`` and ``neg[k]`` are bitmasks of its positive and
negative body.  Sets of atoms are bitmasks too.  ``_kernel.pyx`` implements
the same functions in C and is preferred when it has been built.
"""


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _subsets(cand):
    sub = 0
    while True:
        yield sub
        if sub == cand:
            return
        sub = (sub - cand) & cand


def gl_least_model(heads, pos, neg, i_mask):
    """Least model of the reduct modulo ``i_mask`` (negation stripped)."""
    m = 0
    changed = True
    while changed:
        changed = False
        for k in range(len(heads)):
            if neg[k] & i_mask:
                continue
            h = 1 << heads[k]
            if not m & h and pos[k] & m == pos[k]:
                m |= h
                changed = True
    return m


def answer_set_masks(heads, pos, neg, cand):
    return [i for i in _subsets(cand) if gl_least_model(heads, pos, neg, i) == i]


def supported_closure(heads, pos, neg, m):
    """Least model of the positive parts of the rules supported in ``m``."""
    out = 0
    changed = True
    while changed:
        changed = False
        for k in range(len(heads)):
            p = pos[k]
            if neg[k] & m or p & m != p:
                continue
            h = 1 << heads[k]
            if not out & h and p & out == p:
                out |= h
                changed = True
    return out


def is_cs_mask(heads, pos, neg, m):
    return m & ~supported_closure(heads, pos, neg, m) == 0


def cs_subsets(heads, pos, neg, cand):
    return [m for m in _subsets(cand) if is_cs_mask(heads, pos, neg, m)]


def gamma_hat_mask(heads, pos, neg, n, i_mask):
    """Atoms with a derivation in the modified reduct not guarded by their own negation.

    A derivation tree is acceptable when no node's atom is negated anywhere
    inside its own subtree.  Searching top-down, the atoms on the current path
    form the forbidden set; a positive body atom already on the path would
    only repeat a shorter derivation, so it is cut as well.
    """
    by_head = [[] for _ in range(n)]
    for k in range(len(heads)):
        if not neg[k] & i_mask:
            by_head[heads[k]].append(k)
    memo = {}

    def derivable(a, forb):
        key = (a, forb)
        hit = memo.get(key)
        if hit is not None:
            return hit
        memo[key] = False
        ok = False
        for k in by_head[a]:
            if neg[k] & forb or pos[k] & forb:
                continue
            if all(derivable(b, forb | (1 << b)) for b in _bits(pos[k])):
                ok = True
                break
        memo[key] = ok
        return ok

    out = 0
    for a in range(n):
        if by_head[a] and derivable(a, 1 << a):
            out |= 1 << a
    return out


def gamma_images(heads, pos, neg, n, cand):
    """Distinct values of ``gamma_hat_mask`` over all subsets of ``cand``."""
    return sorted({gamma_hat_mask(heads, pos, neg, n, i) for i in _subsets(cand)})
