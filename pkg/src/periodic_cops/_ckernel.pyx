# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for the shadow-edge fixpoint; same contract as ``_pykernel``."""

from ._pykernel import COUNTER_NAMES

BACKEND = "cython"

ctypedef signed int i32
ctypedef long long i64
ctypedef unsigned char u8


def initialize(Py_ssize_t n, Py_ssize_t p, Py_ssize_t m,
               const i32[::1] out_ptr, const i32[::1] out_idx,
               const i32[::1] in_ptr, const i32[::1] in_idx,
               u8[::1] dif, i32[::1] size, u8[::1] sc, u8[::1] se, u8[::1] adj,
               i32[::1] adeg, i32[::1] rho, i32[::1] queue,
               i64[::1] qpos, i64[::1] counters):
    cdef Py_ssize_t t, t1, u, v, w, y, z, a, b, k, j, lo, hi, row, base, i, e, s
    cdef i64 init_ops = 0, dif_init = 0, corner_scans = 0, pushes = 0
    cdef i64 tail = qpos[1]

    for t in range(p):
        for u in range(n):
            a = t * n + u
            for k in range(out_ptr[a], out_ptr[a + 1]):
                y = out_idx[k]
                e = a * n + y
                adj[e] = 1
                se[e] = 1
                rho[e] = <i32>y
                if y != u:
                    adeg[a] += 1
                init_ops += 1

    for t in range(p):
        t1 = (t + 1) % p
        for u in range(n):
            a = t * n + u
            lo = out_ptr[a]
            hi = out_ptr[a + 1]
            for v in range(n):
                init_ops += 1
                row = (t1 * n + v) * n
                base = v * m
                s = hi - lo
                for k in range(lo, hi):
                    w = out_idx[k]
                    dif_init += 1
                    if w == v or adj[row + w]:
                        dif[base + k] = 0
                        s -= 1
                    else:
                        dif[base + k] = 1
                i = a * n + v
                size[i] = <i32>s
                if s == 0 and u != v and not sc[i]:
                    sc[i] = 1
                    b = t1 * n + v
                    for j in range(in_ptr[b], in_ptr[b + 1]):
                        z = in_idx[j]
                        corner_scans += 1
                        if z != u:
                            e = (t * n + z) * n + u
                            if not se[e]:
                                se[e] = 1
                                rho[e] = <i32>v
                                queue[tail] = <i32>e
                                tail += 1
                                pushes += 1

    qpos[1] = tail
    counters[0] += init_ops
    counters[1] += dif_init
    counters[4] += corner_scans
    counters[5] += pushes


def run(Py_ssize_t n, Py_ssize_t p, Py_ssize_t m,
        const i32[::1] in_ptr, const i32[::1] in_idx, const i32[::1] in_eid,
        u8[::1] dif, i32[::1] size, u8[::1] sc, u8[::1] se, u8[::1] adj,
        i32[::1] adeg, i32[::1] rho, i32[::1] queue,
        i64[::1] qpos, i64[::1] counters,
        const u8[::1] anchored, i64 limit, bint early_stop):
    cdef i64 head = qpos[0], tail = qpos[1]
    cdef Py_ssize_t nn = n * n
    cdef Py_ssize_t e, f, t, tp, x, y, z, w, a, b, j, jj, cell, i
    cdef i64 steps = 0, checks = 0, updates = 0, corner_scans = 0, pushes = 0, stars = 0

    while head < tail and steps != limit:
        e = queue[head]
        head += 1
        steps += 1
        t = e // nn
        x = (e // n) % n
        y = e % n
        adj[e] = 1
        a = t * n + x
        adeg[a] += 1
        tp = (t - 1 + p) % p
        b = t * n + y
        for j in range(in_ptr[b], in_ptr[b + 1]):
            z = in_idx[j]
            cell = x * m + in_eid[j]
            checks += 1
            i = (tp * n + z) * n + x
            if dif[cell]:
                dif[cell] = 0
                size[i] -= 1
                updates += 1
            if size[i] == 0 and z != x and not sc[i]:
                sc[i] = 1
                for jj in range(in_ptr[a], in_ptr[a + 1]):
                    w = in_idx[jj]
                    corner_scans += 1
                    if w != z:
                        f = (tp * n + w) * n + z
                        if not se[f]:
                            se[f] = 1
                            rho[f] = <i32>x
                            queue[tail] = <i32>f
                            tail += 1
                            pushes += 1
        if early_stop:
            stars += 1
            if anchored[a] and adeg[a] == n - 1:
                qpos[2] = a
                break

    qpos[0] = head
    qpos[1] = tail
    counters[2] += checks
    counters[3] += updates
    counters[4] += corner_scans
    counters[5] += pushes
    counters[6] += steps
    counters[7] += stars
    return steps
