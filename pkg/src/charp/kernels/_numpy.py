"""Pure-numpy versions of the kernels.

The straightening kernel advances every partial state by one scan
position per step, so a whole vector moves through the state machine
together.
"""

import numpy as np


def merge_sorted(keys, coefs, p):
    if keys.size == 0:
        return keys.astype(np.int64), coefs.astype(np.int64)
    uk, inv = np.unique(keys, return_inverse=True)
    acc = np.zeros(uk.size, dtype=np.int64)
    np.add.at(acc, inv, coefs)
    acc %= p
    keep = acc != 0
    return uk[keep], acc[keep]


def apply_letter(a, e, keys, coefs, comm_root, comm_sign, binom, p, q, cache=None, ws=None):
    n = comm_root.shape[0]
    keys = np.asarray(keys, dtype=np.int64)
    powers = q ** np.arange(n, dtype=np.int64)
    d = (keys[:, None] // powers) % q
    coef = np.asarray(coefs, dtype=np.int64).copy()
    width = 2 * n + 4
    s = keys.size
    pr = np.zeros((s, width), dtype=np.int64)
    pe = np.zeros((s, width), dtype=np.int64)
    ps = np.zeros((s, width), dtype=np.int64)
    pr[:, 0] = a
    pe[:, 0] = e
    npd = np.ones(s, dtype=np.int64)
    done_d = []
    done_c = []
    while d.shape[0]:
        rows = np.arange(d.shape[0])
        top = npd - 1
        r = pr[rows, top]
        ee = pe[rows, top]
        pos = ps[rows, top]

        at = pos == r
        if at.any():
            idx = np.nonzero(at)[0]
            co = binom[ee[idx], d[idx, r[idx]]]
            d[idx, r[idx]] += ee[idx]
            coef[idx] = coef[idx] * co % p
            npd[idx] -= 1
            dead = np.zeros(d.shape[0], dtype=bool)
            dead[idx[co == 0]] = True
            fin = np.zeros(d.shape[0], dtype=bool)
            fin[idx[(co != 0) & (npd[idx] == 0)]] = True
            if fin.any():
                done_d.append(d[fin])
                done_c.append(coef[fin])
            keep = ~(dead | fin)
            d, coef, pr, pe, ps, npd = d[keep], coef[keep], pr[keep], pe[keep], ps[keep], npd[keep]
            continue

        c = d[rows, pos]
        g = comm_root[r, pos]
        sgn = comm_sign[r, pos]
        kmax = np.where((c > 0) & (g >= 0), np.minimum(ee, c), 0)
        ps[rows, top] = pos + 1
        if kmax.any():
            parent = np.repeat(rows, kmax)
            # k runs 1..kmax within each parent's block
            offs = np.cumsum(kmax) - kmax
            k = np.arange(parent.size) - np.repeat(offs, kmax) + 1
            cd = d[parent].copy()
            cd[np.arange(parent.size), pos[parent]] -= k
            flip = (sgn[parent] < 0) & (k % 2 == 1)
            cc = np.where(flip, coef[parent] * (p - 1) % p, coef[parent])
            cpr, cpe, cps = pr[parent].copy(), pe[parent].copy(), ps[parent].copy()
            cn = npd[parent].copy()
            h = cn - 1
            rest = ee[parent] - k
            ar = np.arange(parent.size)
            more = rest > 0
            cpe[ar[more], h[more]] = rest[more]
            cps[ar, h] = pos[parent] + 1
            h = np.where(more, h + 1, h)
            if h.max() >= width:
                extra = width
                width *= 2
                pad = lambda x: np.concatenate([x, np.zeros((x.shape[0], extra), dtype=np.int64)], axis=1)
                pr, pe, ps, cpr, cpe, cps = map(pad, (pr, pe, ps, cpr, cpe, cps))
            cpr[ar, h] = g[parent]
            cpe[ar, h] = k
            cps[ar, h] = pos[parent] + 1
            cn = h + 1
            d = np.concatenate([d, cd])
            coef = np.concatenate([coef, cc])
            pr = np.concatenate([pr, cpr])
            pe = np.concatenate([pe, cpe])
            ps = np.concatenate([ps, cps])
            npd = np.concatenate([npd, cn])
    if not done_d:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    dd = np.concatenate(done_d)
    out_keys = dd @ powers
    return merge_sorted(out_keys, np.concatenate(done_c), p)


def make_push_cache():
    return None


def make_workspace(n):
    return None


def push_cache_full(cache) -> bool:
    return False


def reduce_rows(rows, pivots, piv_cols, rank, p, limit):
    inv = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv[x] = pow(x, -1, p)
    for row in rows:
        if rank >= limit:
            break
        v = row.astype(np.int64)
        for i in range(rank):
            f = v[piv_cols[i]]
            if f:
                pc = piv_cols[i]
                v[pc:] = (v[pc:] + pivots[i, p - f - 1, pc:]) % p
        nz = np.flatnonzero(v)
        if nz.size == 0:
            continue
        lead = nz[0]
        base = v * inv[v[lead]] % p
        for g in range(1, p):
            pivots[rank, g - 1] = base * g % p
        piv_cols[rank] = lead
        rank += 1
    return rank


def scatter_rows(cols, starts, keys, coefs, ncols):
    nrows = starts.size - 1
    out = np.zeros((nrows, ncols), dtype=np.uint8)
    which = np.repeat(np.arange(nrows), np.diff(starts))
    out[which, np.searchsorted(cols, keys)] = coefs
    return out
