# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled run kernels.

Mirrors ``_pykernels`` function for function. The raw 64-bit words come from
the numpy bit generator owned by the caller's ``RngStream``; bounded integers,
uniforms and flip positions are derived with the same recipes as
``bitcore.RngStream``, so both backends consume identical draws.
"""
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport INFINITY, log, log1p
from libc.stdint cimport int64_t, uint64_t, uint8_t
from libc.stdlib cimport free, malloc, qsort
from libc.string cimport memcpy, memmove, memset
from numpy.random cimport bitgen_t

ctypedef long long ll


# -- random recipes -------------------------------------------------------

cdef bitgen_t* _bitgen(rng) except NULL:
    return <bitgen_t*> PyCapsule_GetPointer(rng.bitgen.capsule, "BitGenerator")


cdef inline uint64_t _raw(bitgen_t* bg) noexcept nogil:
    return bg.next_uint64(bg.state)


cdef inline ll _below(bitgen_t* bg, uint64_t m) noexcept nogil:
    cdef uint64_t thr = (<uint64_t>0 - m) % m
    cdef uint64_t r
    while True:
        r = _raw(bg)
        if r >= thr:
            return <ll>(r % m)


cdef inline double _uniform(bitgen_t* bg) noexcept nogil:
    return (<double>((_raw(bg) >> 11) + 1)) * (1.0 / 9007199254740992.0)


cdef int _flips(bitgen_t* bg, int n, double log_q, int* out) noexcept nogil:
    cdef int cnt = 0
    cdef ll pos = -1
    cdef double gap
    if n == 1:
        out[0] = 0
        return 1
    while True:
        gap = log(_uniform(bg)) / log_q
        if <double>(pos + 1) + gap >= n:
            return cnt
        pos += 1 + <ll>gap
        out[cnt] = <int>pos
        cnt += 1


cdef void _random_bits(bitgen_t* bg, int n, uint8_t* out) noexcept nogil:
    cdef uint64_t word = 0
    cdef int i
    for i in range(n):
        if i % 64 == 0:
            word = _raw(bg)
        out[i] = <uint8_t>((word >> (i % 64)) & 1)


cdef inline void _value(uint8_t* g, int n, int a, int k, int* f1, int* f2) noexcept nogil:
    cdef int head = 0, tail = 0, i
    for i in range(a):
        head += g[i]
    for i in range(a, n):
        tail += g[i]
    f1[0] = head + tail
    f2[0] = head + k - tail


cdef inline void _apply(uint8_t* g, int a, int* flips, int m, int* f1, int* f2) noexcept nogil:
    # value after flipping, genome untouched
    cdef int t, j, up
    for t in range(m):
        j = flips[t]
        up = 1 if g[j] == 0 else -1
        f1[0] += up
        if j < a:
            f2[0] += up
        else:
            f2[0] -= up


cdef inline void _flip_bits(uint8_t* g, int* flips, int m) noexcept nogil:
    cdef int t
    for t in range(m):
        g[flips[t]] ^= 1


cdef inline double _log_q(int n) noexcept nogil:
    if n == 1:
        return 0.0
    return log1p(-1.0 / n)


# -- single-solution search -----------------------------------------------

cdef inline ll _score(int kind, ll c1, ll c2, ll c3, ll c4, int f1, int f2) noexcept nogil:
    cdef ll v
    if kind == 0:
        return c1 * f1 + (c2 - c1) * f2
    v = f2 * c2 - c1
    if v > 0:
        v = 0
    return f1 * c2 * c4 + c3 * v


def scalar_run(int n, int k, int kind, ll c1, ll c2, ll c3, ll c4, ll ceil_eps, bint check,
               bint bitwise, const unsigned char[:] mask, ll budget, rng):
    cdef bitgen_t* bg = _bitgen(rng)
    cdef int a = n - k
    cdef uint8_t* g = <uint8_t*> malloc(n)
    cdef int* flips = <int*> malloc(n * sizeof(int))
    cdef double log_q = _log_q(n)
    cdef int f1, f2, u1, u2, m, j
    cdef ll cur, val, evals = 1, violations = 0
    cdef bint hit, ok, feasible
    try:
        with nogil:
            _random_bits(bg, n, g)
            _value(g, n, a, k, &f1, &f2)
            cur = _score(kind, c1, c2, c3, c4, f1, f2)
            hit = f1 + f2 == 2 * n - k and mask[f2]
            while not hit and evals < budget:
                if bitwise:
                    m = _flips(bg, n, log_q, flips)
                else:
                    flips[0] = <int>_below(bg, n)
                    m = 1
                u1 = f1
                u2 = f2
                _apply(g, a, flips, m, &u1, &u2)
                evals += 1
                val = _score(kind, c1, c2, c3, c4, u1, u2)
                if val >= cur:
                    if check:
                        j = flips[0]
                        feasible = f2 * c2 >= c1
                        if feasible:
                            ok = u2 * c2 >= c1 and ((j < a and g[j] == 0) or
                                                    (j >= a and g[j] == 0 and f2 >= ceil_eps + 1))
                        else:
                            ok = (j < a and g[j] == 0) or (j >= a and g[j] == 1)
                        if not ok:
                            violations += 1
                    _flip_bits(g, flips, m)
                    f1 = u1
                    f2 = u2
                    cur = val
                    hit = f1 + f2 == 2 * n - k and mask[f2]
        return bytes((<char*>g)[:n]), f1, f2, evals, bool(hit), violations
    finally:
        free(g)
        free(flips)


# -- (G)SEMO --------------------------------------------------------------

def semo_run(int n, int k, bint bitwise, ll budget, rng):
    """Population stored as one slot per f1 value; ``mem`` lists slots by ascending f1."""
    cdef bitgen_t* bg = _bitgen(rng)
    cdef int a = n - k, S = n + 1, top = 2 * n - k
    cdef uint8_t* pool = <uint8_t*> malloc(<size_t>S * n)
    cdef int* sf2 = <int*> malloc(S * sizeof(int))
    cdef int* mem = <int*> malloc((S + 1) * sizeof(int))
    cdef int* flips = <int*> malloc(n * sizeof(int))
    cdef double log_q = _log_q(n)
    cdef int cnt, f1, f2, u1, u2, m, p, s, t, lo, hi, mid, ncov, gone
    cdef ll evals = 1, first = -1, full = -1, violations = 0
    try:
        with nogil:
            for s in range(S):
                sf2[s] = -1
            _random_bits(bg, n, pool)
            _value(pool, n, a, k, &f1, &f2)
            if f1 != 0:
                memcpy(pool + <size_t>f1 * n, pool, n)
            sf2[f1] = f2
            mem[0] = f1
            cnt = 1
            ncov = 1 if f1 + f2 == top else 0
            if ncov:
                first = evals
                if k == 0:
                    full = evals
            while full < 0 and evals + 1 <= budget:
                p = mem[_below(bg, cnt)]
                if bitwise:
                    m = _flips(bg, n, log_q, flips)
                else:
                    flips[0] = <int>_below(bg, n)
                    m = 1
                u1 = p
                u2 = sf2[p]
                _apply(pool + <size_t>p * n, a, flips, m, &u1, &u2)
                evals += 1
                # the first occupied slot at or above u1 holds the largest f2 there
                s = u1
                while s < S and sf2[s] < 0:
                    s += 1
                if s < S and ((s > u1 and sf2[s] >= u2) or (s == u1 and sf2[s] > u2)):
                    continue
                # weakly dominated members: slot u1 plus a run of slots below it
                t = u1 - 1
                while t >= 0 and (sf2[t] < 0 or sf2[t] <= u2):
                    t -= 1
                if p != u1:
                    memcpy(pool + <size_t>u1 * n, pool + <size_t>p * n, n)
                _flip_bits(pool + <size_t>u1 * n, flips, m)
                lo = 0
                hi = cnt
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if mem[mid] <= t:
                        lo = mid + 1
                    else:
                        hi = mid
                hi = lo
                gone = 0
                while hi < cnt and mem[hi] <= u1:
                    s = mem[hi]
                    if s + sf2[s] == top:
                        gone += 1
                    sf2[s] = -1
                    hi += 1
                if hi - lo != 1:
                    memmove(mem + lo + 1, mem + hi, (cnt - hi) * sizeof(int))
                cnt += 1 - (hi - lo)
                mem[lo] = u1
                sf2[u1] = u2
                ncov -= gone
                if u1 + u2 == top:
                    ncov += 1
                    if gone:
                        gone -= 1  # an equal front value replaced itself
                violations += gone
                if cnt > k + 1:
                    violations += 1
                if ncov > 0 and first < 0:
                    first = evals
                if ncov == k + 1:
                    full = evals
        vals = [(mem[t], sf2[mem[t]]) for t in range(cnt)]
        return evals, first, full, violations, vals
    finally:
        free(pool)
        free(sf2)
        free(mem)
        free(flips)


# -- shared ranking, crowding and hypervolume helpers ----------------------

cdef void _count_sort(int M, int* key, int n, bint desc, int* src, int* dst, int* bucket) noexcept nogil:
    # stable counting sort of the indices in src by key (values in [0, n])
    cdef int i, t, c, kk, acc = 0
    memset(bucket, 0, (n + 2) * sizeof(int))
    for t in range(M):
        kk = key[src[t]]
        if desc:
            kk = n - kk
        bucket[kk] += 1
    for c in range(n + 1):
        i = bucket[c]
        bucket[c] = acc
        acc += i
    for t in range(M):
        kk = key[src[t]]
        if desc:
            kk = n - kk
        dst[bucket[kk]] = src[t]
        bucket[kk] += 1


cdef int _rank(int M, int* f1, int* f2, int n, int* rank, int* idx, int* tmp, int* ord,
               int* bucket, int* lf2) noexcept nogil:
    """Non-domination ranks (1-based); returns the number of fronts.

    Points are visited by f1 then f2 descending; each joins the first layer
    whose latest member has a smaller f2. Equal values share a rank.
    """
    cdef int t, i, prev = -1, lo, hi, mid, nl = 0
    for t in range(M):
        idx[t] = t
    _count_sort(M, f2, n, True, idx, tmp, bucket)
    _count_sort(M, f1, n, True, tmp, ord, bucket)
    for t in range(M):
        i = ord[t]
        if prev >= 0 and f1[i] == f1[prev] and f2[i] == f2[prev]:
            rank[i] = rank[prev]
            continue
        lo = 0
        hi = nl
        while lo < hi:
            mid = (lo + hi) >> 1
            if lf2[mid] < f2[i]:
                hi = mid
            else:
                lo = mid + 1
        if lo == nl:
            nl += 1
        lf2[lo] = f2[i]
        rank[i] = lo + 1
        prev = i
    return nl


cdef void _crowd(int M, int* f1, int* f2, int* rank, int upto, int n, double* cd,
                 int* idx, int* srt, int* bucket, int* off, int* lst) noexcept nogil:
    """Crowding distance of every member of fronts 1..upto (others untouched)."""
    cdef int obj, t, i, r, lo_i, hi_i, size
    cdef int* val
    cdef double span
    for t in range(M):
        idx[t] = t
        if rank[t] <= upto:
            cd[t] = 0.0
    for obj in range(2):
        val = f1 if obj == 0 else f2
        _count_sort(M, val, n, False, idx, srt, bucket)
        memset(off, 0, (upto + 2) * sizeof(int))
        for t in range(M):
            if rank[t] <= upto:
                off[rank[t] + 1] += 1
        for r in range(1, upto + 1):
            off[r + 1] += off[r]
        for t in range(M):
            i = srt[t]
            r = rank[i]
            if r <= upto:
                lst[off[r]] = i
                off[r] += 1
        # off[r] now marks the end of front r
        lo_i = 0
        for r in range(1, upto + 1):
            hi_i = off[r]
            size = hi_i - lo_i
            if size > 0:
                cd[lst[lo_i]] = INFINITY
                cd[lst[hi_i - 1]] = INFINITY
                span = val[lst[hi_i - 1]] - val[lst[lo_i]]
                if span != 0:
                    for t in range(lo_i + 1, hi_i - 1):
                        cd[lst[t]] += (val[lst[t + 1]] - val[lst[t - 1]]) / span
            lo_i = hi_i


cdef struct Item:
    int f1
    int f2
    int pos


cdef int _cmp_item(const void* x, const void* y) noexcept nogil:
    cdef Item* a = <Item*> x
    cdef Item* b = <Item*> y
    if a.f1 != b.f1:
        return -1 if a.f1 < b.f1 else 1
    if a.f2 != b.f2:
        return -1 if a.f2 < b.f2 else 1
    return -1 if a.pos < b.pos else (1 if a.pos > b.pos else 0)


cdef int _hv_pick(bitgen_t* bg, int m, int* members, int* f1, int* f2, int r1, int r2,
                  Item* items, ll* contrib) noexcept nogil:
    """Position in ``members`` of the least hypervolume contributor.

    ``members`` is a mutually non-dominated set listed in population order.
    Ties draw uniformly, and only when there is more than one candidate.
    """
    cdef int t, u, g, j, prev_f1, next_f2, cnt
    cdef ll best, area
    for t in range(m):
        items[t].f1 = f1[members[t]]
        items[t].f2 = f2[members[t]]
        items[t].pos = t
    qsort(items, m, sizeof(Item), _cmp_item)
    # walk groups of equal value; unique values on the ref-dominating staircase get area
    prev_f1 = r1
    t = 0
    while t < m:
        u = t
        while u < m and items[u].f1 == items[t].f1 and items[u].f2 == items[t].f2:
            u += 1
        if items[t].f1 > r1 and items[t].f2 > r2:
            next_f2 = r2
            j = u
            while j < m:
                if items[j].f1 > r1 and items[j].f2 > r2:
                    next_f2 = items[j].f2
                    break
                j += 1
            if u - t == 1:
                area = <ll>(items[t].f1 - prev_f1) * (items[t].f2 - next_f2)
            else:
                area = 0
            prev_f1 = items[t].f1
        else:
            area = 0
        for g in range(t, u):
            contrib[items[g].pos] = area
        t = u
    best = contrib[0]
    for t in range(1, m):
        if contrib[t] < best:
            best = contrib[t]
    cnt = 0
    for t in range(m):
        if contrib[t] == best:
            cnt += 1
    g = 0 if cnt == 1 else <int>_below(bg, cnt)
    for t in range(m):
        if contrib[t] == best:
            if g == 0:
                return t
            g -= 1
    return 0


# -- SMS-EMOA -------------------------------------------------------------

cdef inline void _slot_add(int* cnt, int* dup, int s) noexcept nogil:
    cnt[s] += 1
    if cnt[s] == 2:
        dup[0] += 2
    elif cnt[s] > 2:
        dup[0] += 1


cdef inline void _slot_remove(int* cnt, int* dup, int s) noexcept nogil:
    if cnt[s] == 2:
        dup[0] -= 2
    elif cnt[s] > 2:
        dup[0] -= 1
    cnt[s] -= 1


def smsemoa_run(int n, int k, int mu, int ref1, int ref2, ll budget, rng):
    """Steady-state hypervolume selection.

    While the whole population is mutually non-dominated (the usual state),
    per-f1 counters decide each step without a full sort; otherwise the
    merged population is ranked from scratch.
    """
    cdef bitgen_t* bg = _bitgen(rng)
    cdef int a = n - k, S = n + 1, top = 2 * n - k, M = mu + 1
    cdef uint8_t* pool = <uint8_t*> malloc(<size_t>M * n)
    cdef int* pslot = <int*> malloc(M * sizeof(int))
    cdef int* pf1 = <int*> malloc(M * sizeof(int))
    cdef int* pf2 = <int*> malloc(M * sizeof(int))
    cdef int* cnt = <int*> malloc(S * sizeof(int))
    cdef int* f2of = <int*> malloc(S * sizeof(int))
    cdef ll* cslot = <ll*> malloc(S * sizeof(ll))
    cdef int* covcnt = <int*> malloc((k + 1) * sizeof(int))
    cdef int* rank = <int*> malloc(M * sizeof(int))
    cdef int* idx = <int*> malloc(M * sizeof(int))
    cdef int* tmp = <int*> malloc(M * sizeof(int))
    cdef int* ord = <int*> malloc(M * sizeof(int))
    cdef int* lf2 = <int*> malloc(M * sizeof(int))
    cdef int* bucket = <int*> malloc((n + 2) * sizeof(int))
    cdef int* members = <int*> malloc(M * sizeof(int))
    cdef Item* items = <Item*> malloc(M * sizeof(Item))
    cdef ll* contrib = <ll*> malloc(M * sizeof(ll))
    cdef int* flips = <int*> malloc(n * sizeof(int))
    cdef double log_q = _log_q(n)
    cdef bint allf1 = False, fast_ok = ref1 < 0 and ref2 < 0, keep_f1, added, was_fast
    cdef int i, t, s, m, pi, u1, u2, y, nm, d, gt1, dup = 0, zc, sl, ncov = 0, prev_f1, next_f2
    cdef ll evals = mu, first = -1, full = -1, violations = 0, best, c
    try:
        with nogil:
            memset(covcnt, 0, (k + 1) * sizeof(int))
            for i in range(mu):
                pslot[i] = i
                _random_bits(bg, n, pool + <size_t>i * n)
                _value(pool + <size_t>i * n, n, a, k, &pf1[i], &pf2[i])
                if pf1[i] + pf2[i] == top:
                    covcnt[pf1[i] - a] += 1
                    if covcnt[pf1[i] - a] == 1:
                        ncov += 1
            if ncov > 0:
                first = evals
            if ncov == k + 1:
                full = evals
            while full < 0 and evals + 1 <= budget:
                pi = <int>_below(bg, mu)
                m = _flips(bg, n, log_q, flips)
                u1 = pf1[pi]
                u2 = pf2[pi]
                _apply(pool + <size_t>pslot[pi] * n, a, flips, m, &u1, &u2)
                evals += 1
                pf1[mu] = u1
                pf2[mu] = u2
                y = -1
                added = False
                was_fast = allf1 and fast_ok
                if was_fast:
                    keep_f1 = True
                    s = u1
                    while s < S and cnt[s] == 0:
                        s += 1
                    if s < S and ((s > u1 and f2of[s] >= u2) or (s == u1 and f2of[s] > u2)):
                        continue  # dominated child is the sole member of the last front
                    if s == u1 and f2of[s] == u2:
                        zc = 0
                    else:
                        zc = cnt[u1] if cnt[u1] > 0 else 0
                        t = u1 - 1
                        while t >= 0 and (cnt[t] == 0 or f2of[t] <= u2):
                            zc += cnt[t]
                            t -= 1
                    if zc == 0:
                        _slot_add(cnt, &dup, u1)
                        f2of[u1] = u2
                        added = True
                        if dup > 0:
                            # duplicated values contribute nothing
                            nm = dup
                            t = 0 if nm == 1 else <int>_below(bg, nm)
                            for i in range(M):
                                if cnt[pf1[i]] >= 2:
                                    if t == 0:
                                        y = i
                                        break
                                    t -= 1
                        else:
                            prev_f1 = ref1
                            best = -1
                            s = 0
                            while s < S:
                                if cnt[s] > 0:
                                    t = s + 1
                                    while t < S and cnt[t] == 0:
                                        t += 1
                                    next_f2 = f2of[t] if t < S else ref2
                                    c = <ll>(s - prev_f1) * (f2of[s] - next_f2)
                                    cslot[s] = c
                                    if best < 0 or c < best:
                                        best = c
                                    prev_f1 = s
                                    s = t
                                else:
                                    s += 1
                            nm = 0
                            for i in range(M):
                                if cslot[pf1[i]] == best:
                                    nm += 1
                            t = 0 if nm == 1 else <int>_below(bg, nm)
                            for i in range(M):
                                if cslot[pf1[i]] == best:
                                    if t == 0:
                                        y = i
                                        break
                                    t -= 1
                    else:
                        # the last front is exactly the members the child dominates
                        nm = 0
                        for i in range(mu):
                            if pf1[i] <= u1 and pf2[i] <= u2:
                                members[nm] = i
                                nm += 1
                        y = members[_hv_pick(bg, nm, members, pf1, pf2, ref1, ref2, items, contrib)]
                        keep_f1 = zc == 1
                        if keep_f1:
                            _slot_add(cnt, &dup, u1)
                            f2of[u1] = u2
                            added = True
                else:
                    d = _rank(M, pf1, pf2, n, rank, idx, tmp, ord, bucket, lf2)
                    nm = 0
                    gt1 = 0
                    for i in range(M):
                        if rank[i] == d:
                            members[nm] = i
                            nm += 1
                        if rank[i] > 1:
                            gt1 += 1
                    y = members[_hv_pick(bg, nm, members, pf1, pf2, ref1, ref2, items, contrib)]
                    keep_f1 = gt1 == 0 or (gt1 == 1 and rank[y] > 1)
                # apply: drop y; a surviving child takes the last position
                if y == mu:
                    if added:
                        _slot_remove(cnt, &dup, u1)
                else:
                    sl = pslot[y]
                    if sl != pslot[pi]:
                        memcpy(pool + <size_t>sl * n, pool + <size_t>pslot[pi] * n, n)
                    _flip_bits(pool + <size_t>sl * n, flips, m)
                    if u1 + u2 == top:
                        covcnt[u1 - a] += 1
                        if covcnt[u1 - a] == 1:
                            ncov += 1
                    if pf1[y] + pf2[y] == top:
                        covcnt[pf1[y] - a] -= 1
                        if covcnt[pf1[y] - a] == 0:
                            ncov -= 1
                            violations += 1
                    if added:
                        _slot_remove(cnt, &dup, pf1[y])
                    memmove(pslot + y, pslot + y + 1, (mu - 1 - y) * sizeof(int))
                    memmove(pf1 + y, pf1 + y + 1, (mu - y) * sizeof(int))
                    memmove(pf2 + y, pf2 + y + 1, (mu - y) * sizeof(int))
                    pslot[mu - 1] = sl
                if keep_f1 and fast_ok and not was_fast:
                    memset(cnt, 0, S * sizeof(int))
                    dup = 0
                    for i in range(mu):
                        _slot_add(cnt, &dup, pf1[i])
                        f2of[pf1[i]] = pf2[i]
                allf1 = keep_f1
                if ncov > 0 and first < 0:
                    first = evals
                if ncov == k + 1:
                    full = evals
        vals = [(pf1[i], pf2[i]) for i in range(mu)]
        return evals, first, full, violations, vals
    finally:
        free(pool); free(pslot); free(pf1); free(pf2); free(cnt); free(f2of); free(cslot)
        free(covcnt); free(rank); free(idx); free(tmp); free(ord); free(lf2); free(bucket)
        free(members); free(items); free(contrib); free(flips)


# -- NSGA-II --------------------------------------------------------------

cdef struct CdItem:
    double cd
    int pos


cdef int _cmp_cd(const void* x, const void* y) noexcept nogil:
    # crowding distance descending, original position ascending (a stable sort)
    cdef CdItem* a = <CdItem*> x
    cdef CdItem* b = <CdItem*> y
    if a.cd > b.cd:
        return -1
    if a.cd < b.cd:
        return 1
    return -1 if a.pos < b.pos else (1 if a.pos > b.pos else 0)


cdef inline int _better(int* rank, double* cd, int a, int b) noexcept nogil:
    if rank[a] != rank[b]:
        return 1 if rank[a] < rank[b] else -1
    if cd[a] != cd[b]:
        return 1 if cd[a] > cd[b] else -1
    return 0


cdef inline int _tournament(bitgen_t* bg, int N, int* rank, double* cd) noexcept nogil:
    cdef int a, b, c
    if N == 1:
        return 0
    a = <int>_below(bg, N)
    b = <int>_below(bg, N - 1)
    if b >= a:
        b += 1
    c = _better(rank, cd, a, b)
    if c == 0:
        return a if _below(bg, 2) == 0 else b
    return a if c > 0 else b


def nsga2_run(int n, int k, int N, int selection, ll budget, rng):
    cdef bitgen_t* bg = _bitgen(rng)
    cdef int a = n - k, top = 2 * n - k, M = 2 * N
    cdef uint8_t* pool = <uint8_t*> malloc(<size_t>M * n)
    cdef int* rslot = <int*> malloc(M * sizeof(int))
    cdef int* rf1 = <int*> malloc(M * sizeof(int))
    cdef int* rf2 = <int*> malloc(M * sizeof(int))
    cdef int* rrank = <int*> malloc(M * sizeof(int))
    cdef double* rcd = <double*> malloc(M * sizeof(double))
    cdef int* prank = <int*> malloc(N * sizeof(int))
    cdef double* pcd = <double*> malloc(N * sizeof(double))
    cdef int* spare = <int*> malloc(N * sizeof(int))
    cdef int* idx = <int*> malloc(M * sizeof(int))
    cdef int* tmp = <int*> malloc(M * sizeof(int))
    cdef int* ord = <int*> malloc(M * sizeof(int))
    cdef int* lf2 = <int*> malloc(M * sizeof(int))
    cdef int* lst = <int*> malloc(M * sizeof(int))
    cdef int* off = <int*> malloc((M + 2) * sizeof(int))
    cdef int* fsize = <int*> malloc((M + 2) * sizeof(int))
    cdef int* bucket = <int*> malloc((n + 2) * sizeof(int))
    cdef char* keep = <char*> malloc(M)
    cdef CdItem* cdi = <CdItem*> malloc(M * sizeof(CdItem))
    cdef int* covcnt = <int*> malloc((k + 1) * sizeof(int))
    cdef char* wascov = <char*> malloc(k + 1)
    cdef int* flips = <int*> malloc(n * sizeof(int))
    cdef double log_q = _log_q(n)
    cdef int i, j, t, s, m, par, sl, nl, istar, cum, need, L, ncov, ns, nf
    cdef ll evals = N, first = -1, full = -1, violations = 0
    try:
        with nogil:
            for i in range(N):
                rslot[i] = i
                spare[i] = N + i
                _random_bits(bg, n, pool + <size_t>i * n)
                _value(pool + <size_t>i * n, n, a, k, &rf1[i], &rf2[i])
            nl = _rank(N, rf1, rf2, n, rrank, idx, tmp, ord, bucket, lf2)
            _crowd(N, rf1, rf2, rrank, nl, n, rcd, idx, tmp, bucket, off, lst)
            for i in range(N):
                prank[i] = rrank[i]
                pcd[i] = rcd[i]
            memset(wascov, 0, k + 1)
            memset(covcnt, 0, (k + 1) * sizeof(int))
            ncov = 0
            for i in range(N):
                if rf1[i] + rf2[i] == top:
                    if covcnt[rf1[i] - a] == 0:
                        ncov += 1
                    covcnt[rf1[i] - a] += 1
            for j in range(k + 1):
                wascov[j] = covcnt[j] > 0
            if ncov > 0:
                first = evals
            if ncov == k + 1:
                full = evals
            while full < 0 and evals + N <= budget:
                # offspring: select, then mutate, one at a time
                for j in range(N):
                    if selection == 0:
                        par = j
                    elif selection == 1:
                        par = <int>_below(bg, N)
                    else:
                        par = _tournament(bg, N, prank, pcd)
                    sl = spare[j]
                    memcpy(pool + <size_t>sl * n, pool + <size_t>rslot[par] * n, n)
                    m = _flips(bg, n, log_q, flips)
                    rf1[N + j] = rf1[par]
                    rf2[N + j] = rf2[par]
                    _apply(pool + <size_t>sl * n, a, flips, m, &rf1[N + j], &rf2[N + j])
                    _flip_bits(pool + <size_t>sl * n, flips, m)
                    rslot[N + j] = sl
                evals += N
                nl = _rank(M, rf1, rf2, n, rrank, idx, tmp, ord, bucket, lf2)
                memset(fsize, 0, (nl + 2) * sizeof(int))
                for i in range(M):
                    fsize[rrank[i]] += 1
                cum = 0
                istar = nl
                need = 0
                for t in range(1, nl + 1):
                    if cum + fsize[t] >= N:
                        istar = t
                        need = N - cum
                        break
                    cum += fsize[t]
                _crowd(M, rf1, rf2, rrank, istar, n, rcd, idx, tmp, bucket, off, lst)
                for i in range(M):
                    keep[i] = rrank[i] < istar
                if fsize[istar] > need:
                    L = 0
                    for i in range(M):
                        if rrank[i] == istar:
                            lst[L] = i
                            L += 1
                    for t in range(L - 1, 0, -1):
                        s = <int>_below(bg, t + 1)
                        i = lst[t]
                        lst[t] = lst[s]
                        lst[s] = i
                    for t in range(L):
                        cdi[t].cd = rcd[lst[t]]
                        cdi[t].pos = t
                    qsort(cdi, L, sizeof(CdItem), _cmp_cd)
                    for t in range(need):
                        keep[lst[cdi[t].pos]] = 1
                else:
                    for i in range(M):
                        if rrank[i] == istar:
                            keep[i] = 1
                # survivors in merged order; the rest free their genome slots
                ns = 0
                nf = 0
                for i in range(M):
                    if keep[i]:
                        rslot[ns] = rslot[i]
                        rf1[ns] = rf1[i]
                        rf2[ns] = rf2[i]
                        prank[ns] = rrank[i]
                        pcd[ns] = rcd[i]
                        ns += 1
                    else:
                        spare[nf] = rslot[i]
                        nf += 1
                if ns != N:
                    violations += 1
                memset(covcnt, 0, (k + 1) * sizeof(int))
                ncov = 0
                for i in range(N):
                    if rf1[i] + rf2[i] == top:
                        if covcnt[rf1[i] - a] == 0:
                            ncov += 1
                        covcnt[rf1[i] - a] += 1
                for j in range(k + 1):
                    if wascov[j] and covcnt[j] == 0:
                        violations += 1
                    wascov[j] = covcnt[j] > 0
                if ncov > 0 and first < 0:
                    first = evals
                if ncov == k + 1:
                    full = evals
        vals = [(rf1[i], rf2[i]) for i in range(N)]
        return evals, first, full, violations, vals
    finally:
        free(pool); free(rslot); free(rf1); free(rf2); free(rrank); free(rcd); free(prank)
        free(pcd); free(spare); free(idx); free(tmp); free(ord); free(lf2); free(lst); free(off)
        free(fsize); free(bucket); free(keep); free(cdi); free(covcnt); free(wascov); free(flips)


def tournament_hits(rank, crowd, int target, ll generations, rng):
    cdef bitgen_t* bg = _bitgen(rng)
    cdef int N = len(rank), i, j
    cdef int* rk = <int*> malloc(N * sizeof(int))
    cdef double* cd = <double*> malloc(N * sizeof(double))
    cdef ll g, hits = 0
    cdef bint won
    try:
        for i in range(N):
            rk[i] = rank[i]
            cd[i] = crowd[i]
        with nogil:
            for g in range(generations):
                won = False
                for j in range(N):
                    if _tournament(bg, N, rk, cd) == target:
                        won = True
                hits += won
        return hits
    finally:
        free(rk)
        free(cd)


# -- MOEA/D ---------------------------------------------------------------

cdef inline ll _tcheb(int k, int i, int f1, int f2, int z1, int z2) noexcept nogil:
    cdef ll d1 = f1 - z1, d2 = f2 - z2, h1, h2
    if d1 < 0:
        d1 = -d1
    if d2 < 0:
        d2 = -d2
    h1 = i * d1
    h2 = (k - i) * d2
    return h1 if h1 > h2 else h2


def moead_run(int n, int k, ll budget, rng):
    """Tchebycheff decomposition with one subproblem per weight ``i/k`` and T = 1."""
    cdef bitgen_t* bg = _bitgen(rng)
    cdef int a = n - k, S = n + 1, top = 2 * n - k, H = k + 1
    cdef uint8_t* pool = <uint8_t*> malloc(<size_t>H * n)
    cdef int* xf1 = <int*> malloc(H * sizeof(int))
    cdef int* xf2 = <int*> malloc(H * sizeof(int))
    cdef int* af2 = <int*> malloc(S * sizeof(int))
    cdef int i, j, s, t, u1, u2, z1, z2, ncov = 0
    cdef bint acc
    cdef ll evals = H, first = -1, full = -1, violations = 0
    try:
        with nogil:
            for s in range(S):
                af2[s] = -1
            for i in range(H):
                _random_bits(bg, n, pool + <size_t>i * n)
                _value(pool + <size_t>i * n, n, a, k, &xf1[i], &xf2[i])
            z1 = xf1[0]
            z2 = xf2[0]
            for i in range(1, H):
                if xf1[i] > z1:
                    z1 = xf1[i]
                if xf2[i] > z2:
                    z2 = xf2[i]
            while full < 0 and evals + H <= budget:
                for i in range(H):
                    j = <int>_below(bg, n)
                    u1 = xf1[i]
                    u2 = xf2[i]
                    _apply(pool + <size_t>i * n, a, &j, 1, &u1, &u2)
                    if k == 0:
                        acc = u1 >= xf1[i]
                    else:
                        acc = _tcheb(k, i, u1, u2, z1, z2) <= _tcheb(k, i, xf1[i], xf2[i], z1, z2)
                    if acc:
                        pool[<size_t>i * n + j] ^= 1
                        xf1[i] = u1
                        xf2[i] = u2
                    if u1 > z1:
                        z1 = u1
                    if u2 > z2:
                        z2 = u2
                    # archive: skip dominated or duplicate values, else evict what the child dominates
                    s = u1
                    while s < S and af2[s] < 0:
                        s += 1
                    if s < S and af2[s] >= u2:
                        continue
                    t = u1
                    while t >= 0 and (af2[t] < 0 or af2[t] <= u2):
                        if af2[t] >= 0:
                            if t + af2[t] == top:
                                ncov -= 1
                                violations += 1
                            af2[t] = -1
                        t -= 1
                    af2[u1] = u2
                    if u1 + u2 == top:
                        ncov += 1
                evals += H
                if ncov > 0 and first < 0:
                    first = evals
                if ncov == k + 1:
                    full = evals
        vals = [(s, af2[s]) for s in range(S) if af2[s] >= 0]
        return evals, first, full, violations, vals
    finally:
        free(pool); free(xf1); free(xf2); free(af2)
