"""Hot loops shared by every chain.

All functions here are written in the numba-compatible subset and are
compiled with ``@njit`` unless ``CURVEBALL_BACKEND=numpy``. Integer state is
kept inside int64 without overflow so the plain-Python path and the
compiled path agree bit for bit.

Adjacency sets are stored as a padded ``rows[n, width]`` int64 array with
``deg[n]`` valid entries per row; trades never change row lengths.
"""
import numpy as np

from ._backend import jit

M32 = 0xFFFFFFFF

# flavor codes
BIPARTITE = 0
LOOPS = 1
DIRECTED = 2
UNDIRECTED = 3

# chain kind codes (order mirrors chains.ChainKind)
CURVEBALL = 0
DIRECTED_CURVEBALL = 1
UNDIRECTED_CURVEBALL = 2
GLOBAL_CURVEBALL = 3
GLOBAL_DIRECTED_CURVEBALL = 4
SWITCHING = 5
ADJUSTED_SWITCHING = 6
GOOD_SHUFFLE_CURVEBALL = 7
GOOD_SHUFFLE_DIRECTED = 8
GOOD_SHUFFLE_UNDIRECTED = 9

# subset selection modes for a pair trade
MODE_PLAIN = 0
MODE_GOOD_SHUFFLE = 1
MODE_SIZE_ONE = 2


# ---------------------------------------------------------------- rng

@jit
def next_u32(s):
    # xoshiro128** on four 32-bit words held in int64 slots
    s0 = s[0]
    s1 = s[1]
    s2 = s[2]
    s3 = s[3]
    r = (s1 * 5) & M32
    r = ((r << 7) | (r >> 25)) & M32
    r = (r * 9) & M32
    t = (s1 << 9) & M32
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = ((s3 << 11) | (s3 >> 21)) & M32
    s[0] = s0
    s[1] = s1
    s[2] = s2
    s[3] = s3
    return r


@jit
def bounded(bound, s):
    """Unbiased draw from ``range(bound)`` by rejection under a 2^k mask."""
    if bound <= 1:
        return 0
    mask = bound - 1
    mask |= mask >> 1
    mask |= mask >> 2
    mask |= mask >> 4
    mask |= mask >> 8
    mask |= mask >> 16
    while True:
        r = next_u32(s) & mask
        if r < bound:
            return r


@jit
def pick_pair(n, s):
    i = bounded(n, s)
    j = bounded(n - 1, s)
    if j >= i:
        j += 1
    return i, j


# ---------------------------------------------------------------- row helpers

@jit
def row_contains(rows, deg, r, x):
    for t in range(deg[r]):
        if rows[r, t] == x:
            return True
    return False


@jit
def row_replace(rows, deg, r, old, new):
    for t in range(deg[r]):
        if rows[r, t] == old:
            rows[r, t] = new
            return True
    return False


# ---------------------------------------------------------------- trades

@jit
def trade(rows, deg, i, j, excl, undirected, mode, mark, pool, perm, buf, s):
    """One trade between sets i and j in place; returns the trade size.

    ``excl`` drops j from A_i and i from A_j before comparing (no
    self-loops); ``undirected`` additionally mirrors every moved index.
    """
    di = deg[i]
    dj = deg[j]
    for t in range(dj):
        mark[rows[j, t]] = 1
    si = 0
    for t in range(di):
        x = rows[i, t]
        if mark[x] == 0 and not (excl and x == j):
            pool[si] = x
            si += 1
    for t in range(dj):
        mark[rows[j, t]] = 0
    for t in range(di):
        mark[rows[i, t]] = 1
    sj = 0
    for t in range(dj):
        x = rows[j, t]
        if mark[x] == 0 and not (excl and x == i):
            pool[si + sj] = x
            sj += 1
    for t in range(di):
        mark[rows[i, t]] = 0
    if si == 0 or sj == 0:
        return 0

    tot = si + sj
    if mode == MODE_SIZE_ONE:
        for t in range(tot):
            perm[t] = t
        k = bounded(si, s)
        l = si + bounded(sj, s)
        perm[k] = l
        perm[l] = k
    else:
        while True:
            for t in range(tot):
                perm[t] = t
            for t in range(si):
                r = t + bounded(tot - t, s)
                tmp = perm[t]
                perm[t] = perm[r]
                perm[r] = tmp
            if mode != MODE_GOOD_SHUFFLE:
                break
            # reject the one subset that reproduces A_{i-j}
            same = True
            for t in range(si):
                if perm[t] >= si:
                    same = False
                    break
            if not same:
                break

    # buf[:size] = indices entering B_i (from A_j), buf[w:w+size] = leaving A_i
    w = pool.shape[0]
    size = 0
    for t in range(si):
        if perm[t] >= si:
            buf[size] = pool[perm[t]]
            size += 1
    q = 0
    for t in range(si, tot):
        if perm[t] < si:
            buf[w + q] = pool[perm[t]]
            q += 1
    if size == 0:
        return 0

    for q in range(size):
        mark[buf[w + q]] = q + 1
    for t in range(di):
        x = rows[i, t]
        if mark[x] > 0:
            rows[i, t] = buf[mark[x] - 1]
    for q in range(size):
        mark[buf[w + q]] = 0
    for q in range(size):
        mark[buf[q]] = q + 1
    for t in range(dj):
        x = rows[j, t]
        if mark[x] > 0:
            rows[j, t] = buf[w + mark[x] - 1]
    for q in range(size):
        mark[buf[q]] = 0

    if undirected:
        for q in range(size):
            row_replace(rows, deg, buf[q], j, i)
            row_replace(rows, deg, buf[w + q], i, j)
    return size


@jit
def sample_partition(n, out, avail, gone, s):
    """Uniform 2-partition of range(n) into ``out``.

    Pairs are ``(out[2q], out[2q+1])``; for odd n the singleton sits in
    ``out[n-1]``. The smallest remaining index i is paired with a uniform
    partner from the rest. ``avail`` holds candidates with swap-with-last
    deletion; i is left behind there as a stale entry that a later draw
    discards and redraws, so every draw deletes one entry and there are at
    most n draws. ``gone`` flags used indices and is scanned only to find
    the next i.
    """
    for v in range(n):
        avail[v] = v
        gone[v] = 0
    cnt = n
    if n % 2 == 1:
        r = bounded(cnt, s)
        v = avail[r]
        cnt -= 1
        avail[r] = avail[cnt]
        gone[v] = 1
        out[n - 1] = v
    lo = 0
    for q in range(n // 2):
        while gone[lo]:
            lo += 1
        gone[lo] = 1
        while True:
            r = bounded(cnt, s)
            b = avail[r]
            cnt -= 1
            avail[r] = avail[cnt]
            # stale entries are earlier choices of i, all <= lo; partners
            # already taken were deleted from avail when drawn
            if b > lo:
                break
        gone[b] = 1
        out[2 * q] = lo
        out[2 * q + 1] = b


@jit
def sample_partitions(n, k, s):
    out = np.empty((k, n), dtype=np.int64)
    avail = np.empty(n, dtype=np.int32)
    gone = np.empty(n, dtype=np.uint8)
    for t in range(k):
        sample_partition(n, out[t], avail, gone, s)
    return out


@jit
def global_trade(rows, deg, excl, mark, pool, perm, buf, part, avail, gone, s):
    n = rows.shape[0]
    sample_partition(n, part, avail, gone, s)
    total = 0
    for q in range(n // 2):
        total += trade(rows, deg, part[2 * q], part[2 * q + 1], excl, False,
                       MODE_PLAIN, mark, pool, perm, buf, s)
    return total


@jit
def switch(rows, deg, cum, flavor, s):
    """Classic switch: two distinct random edge entries, applied when legal."""
    n = rows.shape[0]
    total = cum[n]
    if total < 2:
        return 0
    e1 = bounded(total, s)
    e2 = bounded(total - 1, s)
    if e2 >= e1:
        e2 += 1
    x = np.searchsorted(cum, e1, side="right") - 1
    y = rows[x, e1 - cum[x]]
    u = np.searchsorted(cum, e2, side="right") - 1
    v = rows[u, e2 - cum[u]]
    if x == u or y == v:
        return 0
    if flavor >= DIRECTED and (x == v or u == y):
        return 0
    if row_contains(rows, deg, x, v) or row_contains(rows, deg, u, y):
        return 0
    row_replace(rows, deg, x, y, v)
    row_replace(rows, deg, u, v, y)
    if flavor == UNDIRECTED:
        row_replace(rows, deg, y, x, u)
        row_replace(rows, deg, v, u, x)
    return 1


@jit
def step(kind, flavor, rows, deg, cum, mark, pool, perm, buf, part, avail, gone, s):
    excl = flavor >= DIRECTED
    if kind == SWITCHING:
        return switch(rows, deg, cum, flavor, s)
    if kind == GLOBAL_CURVEBALL or kind == GLOBAL_DIRECTED_CURVEBALL:
        return global_trade(rows, deg, excl, mark, pool, perm, buf, part, avail, gone, s)
    mode = MODE_PLAIN
    if kind == ADJUSTED_SWITCHING:
        mode = MODE_SIZE_ONE
    elif kind >= GOOD_SHUFFLE_CURVEBALL:
        mode = MODE_GOOD_SHUFFLE
    i, j = pick_pair(rows.shape[0], s)
    return trade(rows, deg, i, j, excl, flavor == UNDIRECTED, mode, mark, pool, perm, buf, s)


@jit
def run_steps(kind, flavor, rows, deg, cum, nsteps, mark, pool, perm, buf, part, avail, gone, s):
    """Advance ``nsteps`` steps in place; returns how many changed the state."""
    moved = 0
    for _ in range(nsteps):
        if step(kind, flavor, rows, deg, cum, mark, pool, perm, buf, part, avail, gone, s) > 0:
            moved += 1
    return moved


# ---------------------------------------------------------------- observables

@jit
def missing_count(init_rows, init_deg, rows, deg, mark):
    """Number of entries of the initial rows absent from the current rows."""
    miss = 0
    for r in range(rows.shape[0]):
        for t in range(deg[r]):
            mark[rows[r, t]] = 1
        for t in range(init_deg[r]):
            if mark[init_rows[r, t]] == 0:
                miss += 1
        for t in range(deg[r]):
            mark[rows[r, t]] = 0
    return miss


@jit
def encode_bits(rows, deg, m):
    code = 0
    for r in range(rows.shape[0]):
        for t in range(deg[r]):
            code |= 1 << (r * m + rows[r, t])
    return code


@jit
def one_step_codes(kind, flavor, rows0, deg, cum, m, nsamples, mark, pool, perm, buf, part,
                   avail, gone, s):
    """Bitmask codes of ``nsamples`` independent single steps from ``rows0``."""
    out = np.empty(nsamples, dtype=np.int64)
    rows = rows0.copy()
    for t in range(nsamples):
        rows[:, :] = rows0
        step(kind, flavor, rows, deg, cum, mark, pool, perm, buf, part, avail, gone, s)
        out[t] = encode_bits(rows, deg, m)
    return out
