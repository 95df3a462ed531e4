"""Compiled kernels: packed straightening and GF(p) elimination."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _grow1(a, cap):
    out = np.empty(cap, dtype=a.dtype)
    out[: a.shape[0]] = a
    return out


@njit(cache=True, nogil=True)
def radix_sort(a):
    """Sorted copy of a nonnegative int64 array (LSD radix, 11-bit digits)."""
    n = a.size
    if n < 48:
        out = a.copy()
        for i in range(1, n):
            x = out[i]
            j = i - 1
            while j >= 0 and out[j] > x:
                out[j + 1] = out[j]
                j -= 1
            out[j + 1] = x
        return out
    mx = 0
    for i in range(n):
        if a[i] > mx:
            mx = a[i]
    src = a.copy()
    dst = np.empty(n, dtype=a.dtype)
    cnt = np.empty(2048, dtype=np.int64)
    shift = 0
    while (mx >> shift) > 0:
        cnt[:] = 0
        for i in range(n):
            cnt[(src[i] >> shift) & 2047] += 1
        tot = 0
        for b in range(2048):
            c = cnt[b]
            cnt[b] = tot
            tot += c
        for i in range(n):
            b = (src[i] >> shift) & 2047
            dst[cnt[b]] = src[i]
            cnt[b] += 1
        src, dst = dst, src
        shift += 11
    return src


@njit(cache=True, nogil=True)
def merge_sorted(keys, coefs, p):
    """Sort by key, add duplicate coefficients mod p, drop zeros.

    Key and coefficient are packed into one integer so a single radix
    sort does the work.
    """
    n = keys.size
    if n == 0:
        return keys.copy(), coefs.copy()
    bits = 1
    while (1 << bits) <= p:
        bits += 1
    comb = np.empty(n, dtype=np.int64)
    for i in range(n):
        comb[i] = (keys[i] << bits) | coefs[i]
    comb = radix_sort(comb)
    mask = (1 << bits) - 1
    ok = np.empty(n, dtype=np.int64)
    oc = np.empty(n, dtype=np.int64)
    m = 0
    cur = comb[0] >> bits
    acc = 0
    for i in range(n):
        k = comb[i] >> bits
        if k != cur:
            if acc % p:
                ok[m] = cur
                oc[m] = acc % p
                m += 1
            cur = k
            acc = 0
        acc += comb[i] & mask
    if acc % p:
        ok[m] = cur
        oc[m] = acc % p
        m += 1
    return ok[:m].copy(), oc[:m].copy()


STACK = 4096  # partial states alive while pushing one letter into one monomial


@njit(cache=True, nogil=True)
def make_workspace(n):
    depth = 2 * n + 4
    return (
        np.empty((STACK, n), dtype=np.int64),
        np.empty(STACK, dtype=np.int64),
        np.empty(STACK, dtype=np.int64),
        np.empty((STACK, depth), dtype=np.int64),
        np.empty((STACK, depth), dtype=np.int64),
        np.empty((STACK, depth), dtype=np.int64),
        np.empty(STACK, dtype=np.int64),
        np.empty(STACK, dtype=np.int64),
        np.empty(n, dtype=np.int64),
        np.empty((3, depth), dtype=np.int64),
    )


@njit(cache=True, nogil=True)
def _push(a, e, key, comm_root, comm_sign, binom, p, q, ws):
    """f_a^(e) times one packed monomial.

    Runs an explicit stack of partial states.  A state carries the
    monomial digits, its coefficient and a stack of pending letters
    (root, exponent, scan position).  Returns the number of terms written
    to the output buffers ws[6], ws[7] (unmerged, coefficients mod p).
    """
    sd, sc, sn, spr, spe, sps, ok, oc, d, pend = ws
    n = comm_root.shape[0]
    pr = pend[0]
    pe = pend[1]
    ps = pend[2]
    for i in range(n):
        sd[0, i] = key % q
        key //= q
    sc[0] = 1
    sn[0] = 1
    spr[0, 0] = a
    spe[0, 0] = e
    sps[0, 0] = 0
    sp = 1
    m = 0
    while sp > 0:
        sp -= 1
        for i in range(n):
            d[i] = sd[sp, i]
        coef = sc[sp]
        npd = sn[sp]
        for i in range(npd):
            pr[i] = spr[sp, i]
            pe[i] = spe[sp, i]
            ps[i] = sps[sp, i]
        alive = True
        while npd > 0:
            r = pr[npd - 1]
            ee = pe[npd - 1]
            pos = ps[npd - 1]
            while pos != r:
                c = d[pos]
                g = comm_root[r, pos]
                if c > 0 and g >= 0:
                    s = comm_sign[r, pos]
                    kmax = ee if ee < c else c
                    if sp + kmax >= STACK:
                        raise RuntimeError("straightening stack overflow")
                    for k in range(1, kmax + 1):
                        for i in range(n):
                            sd[sp, i] = d[i]
                        sd[sp, pos] = c - k
                        if s < 0 and k % 2 == 1:
                            sc[sp] = coef * (p - 1) % p
                        else:
                            sc[sp] = coef
                        for i in range(npd - 1):
                            spr[sp, i] = pr[i]
                            spe[sp, i] = pe[i]
                            sps[sp, i] = ps[i]
                        h = npd - 1
                        if ee > k:
                            spr[sp, h] = r
                            spe[sp, h] = ee - k
                            sps[sp, h] = pos + 1
                            h += 1
                        if h >= spr.shape[1]:
                            raise RuntimeError("pending-letter stack overflow")
                        spr[sp, h] = g
                        spe[sp, h] = k
                        sps[sp, h] = pos + 1
                        sn[sp] = h + 1
                        sp += 1
                pos += 1
            co = binom[ee, d[r]]
            if co == 0:
                alive = False
                break
            d[r] += ee
            coef = coef * co % p
            npd -= 1
        if alive:
            if m >= ok.size:
                raise RuntimeError("too many terms from a single push")
            key = 0
            for i in range(n - 1, -1, -1):
                key = key * q + d[i]
            ok[m] = key
            oc[m] = coef
            m += 1
    return m


@njit(cache=True, nogil=True)
def _slot(tkey, ck):
    """Linear-probing slot for ck: its own slot if present, else the first empty one."""
    mask = tkey.size - 1
    h = (np.uint64(ck) * np.uint64(0x9E3779B97F4A7C15)) >> np.uint64(20)
    i = np.int64(h & np.uint64(mask))
    while tkey[i] != -1 and tkey[i] != ck:
        i = (i + 1) & mask
    return i


@njit(cache=True, nogil=True)
def apply_letter(a, e, keys, coefs, comm_root, comm_sign, binom, p, q, cache, ws):
    """f_a^(e) applied to a packed vector; all exponents stay below q.

    ``cache`` is an open-addressing table from (monomial, letter) to the
    merged push result (see make_push_cache); pass None to push every
    term afresh.  A full table stops accepting entries but stays valid.
    ``ws`` is scratch space from make_workspace.
    """
    ocap = max(16, 4 * keys.size)
    outk = np.empty(ocap, dtype=np.int64)
    outc = np.empty(ocap, dtype=np.int64)
    m = 0
    tag = a * q + e
    stride = comm_root.shape[0] * q
    for t in range(keys.size):
        c0 = coefs[t]
        if cache is None:
            cnt = _push(a, e, keys[t], comm_root, comm_sign, binom, p, q, ws)
            rk, rc = merge_sorted(ws[6][:cnt], ws[7][:cnt], p)
            if m + rk.size > ocap:
                while m + rk.size > ocap:
                    ocap *= 2
                outk = _grow1(outk, ocap)
                outc = _grow1(outc, ocap)
            for i in range(rk.size):
                outk[m] = rk[i]
                outc[m] = c0 * rc[i] % p
                m += 1
            continue
        tkey, tstart, tlen, pk, pc, fill = cache
        ck = keys[t] * stride + tag
        i = _slot(tkey, ck)
        if tkey[i] == ck:
            st = tstart[i]
            ln = tlen[i]
        else:
            cnt = _push(a, e, keys[t], comm_root, comm_sign, binom, p, q, ws)
            rk, rc = merge_sorted(ws[6][:cnt], ws[7][:cnt], p)
            ln = rk.size
            st = fill[1]
            if 4 * (fill[0] + 1) < 3 * tkey.size and st + ln <= pk.size:
                tkey[i] = ck
                tstart[i] = st
                tlen[i] = ln
                fill[0] += 1
                fill[1] += ln
                for j in range(ln):
                    pk[st + j] = rk[j]
                    pc[st + j] = rc[j]
            else:
                if m + ln > ocap:
                    while m + ln > ocap:
                        ocap *= 2
                    outk = _grow1(outk, ocap)
                    outc = _grow1(outc, ocap)
                for j in range(ln):
                    outk[m] = rk[j]
                    outc[m] = c0 * rc[j] % p
                    m += 1
                continue
        if m + ln > ocap:
            while m + ln > ocap:
                ocap *= 2
            outk = _grow1(outk, ocap)
            outc = _grow1(outc, ocap)
        for j in range(st, st + ln):
            outk[m] = pk[j]
            outc[m] = c0 * pc[j] % p
            m += 1
    return merge_sorted(outk[:m], outc[:m], p)


def make_push_cache(slots_log2: int = 22, pool: int = 12_000_000):
    """Arrays backing the push table: keys, starts, lengths, pooled terms, fill counters."""
    return (
        np.full(1 << slots_log2, -1, dtype=np.int64),
        np.zeros(1 << slots_log2, dtype=np.int64),
        np.zeros(1 << slots_log2, dtype=np.int32),
        np.zeros(pool, dtype=np.int64),
        np.zeros(pool, dtype=np.uint8),
        np.zeros(2, dtype=np.int64),
    )


def push_cache_full(cache) -> bool:
    tkey, _, _, pk, _, fill = cache
    return 4 * fill[0] >= 3 * tkey.size or fill[1] >= pk.size - 4096


@njit(cache=True, nogil=True)
def _inverse_table(p):
    inv = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        for y in range(1, p):
            if x * y % p == 1:
                inv[x] = y
    return inv


@njit(cache=True, nogil=True)
def reduce_rows(rows, pivots, piv_cols, rank, p, limit):
    """Insert dense rows into an echelon basis, stopping at ``limit``.

    ``pivots[i, g - 1]`` holds g times the i-th normalized pivot row, so
    eliminating is an add and one conditional subtract per entry, which
    vectorizes over uint8.  Returns the new rank.
    """
    inv = _inverse_table(p)
    ncols = rows.shape[1]
    v = np.empty(ncols, dtype=np.uint8)
    pp = np.uint8(p)
    for r in range(rows.shape[0]):
        if rank >= limit:
            break
        v[:] = rows[r]
        for i in range(rank):
            pc = piv_cols[i]
            f = v[pc]
            if f:
                w = pivots[i, p - f - 1]
                for j in range(pc, ncols):
                    x = v[j] + w[j]
                    v[j] = x - pp if x >= pp else x
        lead = -1
        for j in range(ncols):
            if v[j]:
                lead = j
                break
        if lead < 0:
            continue
        f = inv[v[lead]]
        for g in range(1, p):
            for j in range(ncols):
                pivots[rank, g - 1, j] = (v[j] * f * g) % p
        piv_cols[rank] = lead
        rank += 1
    return rank


@njit(cache=True, nogil=True)
def scatter_rows(cols, starts, keys, coefs, ncols):
    """Dense uint8 rows from packed vectors laid end to end."""
    nrows = starts.size - 1
    out = np.zeros((nrows, ncols), dtype=np.uint8)
    for r in range(nrows):
        for t in range(starts[r], starts[r + 1]):
            # keys of each vector are sorted, so a binary search per term is enough
            lo = 0
            hi = cols.size
            k = keys[t]
            while lo < hi:
                mid = (lo + hi) // 2
                if cols[mid] < k:
                    lo = mid + 1
                else:
                    hi = mid
            out[r, lo] = coefs[t]
    return out
