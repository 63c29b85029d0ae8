"""Pure-Python kernel for the shadow-edge fixpoint.

Mirrors ``_ckernel.pyx`` statement for statement; both operate in place on the
flat arrays allocated by :class:`periodic_cops.solver.SolverState`. Layout:

* node ``(t, u)``                -> ``t*n + u``
* triple ``(t, u, v)``           -> ``(t*n + u)*n + v`` (size, sc, se, adj, rho)
* DIF cell ``(t, u, v)[w]``      -> ``v*m + eid`` with ``eid`` the out-edge id
  of ``((t,u),(t+1,w))``; only these core cells exist
* queue entries are triple indices of shadow edges
* ``qpos = [head, tail, star]``; ``star`` is a node index or -1
* ``counters`` follow :data:`COUNTER_NAMES`
"""

COUNTER_NAMES = (
    "init_ops",
    "dif_init",
    "dif_checks",
    "dif_updates",
    "corner_scans",
    "queue_pushes",
    "iterations",
    "star_tests",
)
INIT_OPS, DIF_INIT, DIF_CHECKS, DIF_UPDATES, CORNER_SCANS, QUEUE_PUSHES, ITERATIONS, STAR_TESTS = range(8)

BACKEND = "python"


def initialize(n, p, m, out_ptr, out_idx, in_ptr, in_idx, dif, size, sc, se, adj, adeg, rho, queue, qpos, counters):
    out_ptr = memoryview(out_ptr)
    out_idx = memoryview(out_idx)
    in_ptr = memoryview(in_ptr)
    in_idx = memoryview(in_idx)
    dif = memoryview(dif)
    size = memoryview(size)
    sc = memoryview(sc)
    se = memoryview(se)
    adj = memoryview(adj)
    adeg = memoryview(adeg)
    rho = memoryview(rho)
    queue = memoryview(queue)
    qpos = memoryview(qpos)
    counters = memoryview(counters)

    init_ops = dif_init = corner_scans = pushes = 0
    tail = qpos[1]

    for t in range(p):
        for u in range(n):
            a = t * n + u
            for k in range(out_ptr[a], out_ptr[a + 1]):
                y = out_idx[k]
                e = a * n + y
                adj[e] = 1
                se[e] = 1
                rho[e] = y
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
                size[i] = s
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
                                rho[e] = v
                                queue[tail] = e
                                tail += 1
                                pushes += 1

    qpos[1] = tail
    counters[INIT_OPS] += init_ops
    counters[DIF_INIT] += dif_init
    counters[CORNER_SCANS] += corner_scans
    counters[QUEUE_PUSHES] += pushes


def run(n, p, m, in_ptr, in_idx, in_eid, dif, size, sc, se, adj, adeg, rho, queue, qpos, counters,
        anchored, limit, early_stop):
    """Pop and examine up to ``limit`` queued shadow edges (``limit < 0``: no bound).

    Returns the number of edges examined. With ``early_stop`` the loop also
    ends once the source of a committed edge is an anchored star; its node
    index is then left in ``qpos[2]``.
    """
    in_ptr = memoryview(in_ptr)
    in_idx = memoryview(in_idx)
    in_eid = memoryview(in_eid)
    dif = memoryview(dif)
    size = memoryview(size)
    sc = memoryview(sc)
    se = memoryview(se)
    adj = memoryview(adj)
    adeg = memoryview(adeg)
    rho = memoryview(rho)
    queue = memoryview(queue)
    qpos = memoryview(qpos)
    counters = memoryview(counters)
    anchored = memoryview(anchored)

    head = qpos[0]
    tail = qpos[1]
    nn = n * n
    steps = checks = updates = corner_scans = pushes = stars = 0

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
        tp = (t - 1) % p
        # robber at (t-1, z) stepping into (t, y) now lands under the cop at (t, x)
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
                            rho[f] = x
                            queue[tail] = f
                            tail += 1
                            pushes += 1
        if early_stop:
            stars += 1
            if anchored[a] and adeg[a] == n - 1:
                qpos[2] = a
                break

    qpos[0] = head
    qpos[1] = tail
    counters[DIF_CHECKS] += checks
    counters[DIF_UPDATES] += updates
    counters[CORNER_SCANS] += corner_scans
    counters[QUEUE_PUSHES] += pushes
    counters[ITERATIONS] += steps
    counters[STAR_TESTS] += stars
    return steps
