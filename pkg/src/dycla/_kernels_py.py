"""Pure-Python cascade kernels.

Reference twin of ``_kernels.pyx``. Both consume the same counter-based
random stream, so a compiled and an interpreted run produce identical
cascade sizes for the same (stream key, simulation index).

Randomness: cascade ``i`` of a stream with key ``k`` owns the 64-bit key
``mix(k + (i + 1) * GOLDEN)``; edge ``e`` of the CSR layout is live in that
cascade iff ``uniform(mix(cascade_key + (e + 1) * GOLDEN)) < prob[e]``.
Coins are keyed by edge, so the realization does not depend on visiting
order.
"""

NAME = "python"

MASK = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
_INV53 = 1.0 / 9007199254740992.0


def mix64(z):
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def cascade_key(stream_key, index):
    return mix64(stream_key + (index + 1) * GOLDEN)


def edge_uniform(ckey, edge):
    return (mix64(ckey + (edge + 1) * GOLDEN) >> 11) * _INV53


def cascade_size(indptr, indices, probs, seeds, n_vertices, stream_key, index):
    """Size of the activated set for one cascade realization."""
    ckey = cascade_key(stream_key, index)
    active = bytearray(n_vertices)
    queue = []
    for s in seeds:
        s = int(s)
        if not active[s]:
            active[s] = 1
            queue.append(s)
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for e in range(int(indptr[u]), int(indptr[u + 1])):
            v = int(indices[e])
            if active[v]:
                continue
            if edge_uniform(ckey, e) < probs[e]:
                active[v] = 1
                queue.append(v)
    return len(queue)


def cascade_batch(indptr, indices, probs, seeds, n_vertices, stream_key, start, count):
    """Sum and sum of squares of cascade sizes for indices [start, start+count)."""
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    probs = [float(x) for x in probs]
    total = 0
    total_sq = 0
    for i in range(start, start + count):
        size = cascade_size(indptr, indices, probs, seeds, n_vertices, stream_key, i)
        total += size
        total_sq += size * size
    return total, total_sq
