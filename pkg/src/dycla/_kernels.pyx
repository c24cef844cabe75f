# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cascade kernels.

Must stay bit-compatible with ``_kernels_py``: same mixing function, same
per-cascade and per-edge keys, same comparison against the edge probability.
"""

from libc.stdint cimport int32_t, int64_t, uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset

import numpy as np

NAME = "cython"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double INV53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef int64_t _cascade(const int64_t[::1] indptr, const int32_t[::1] indices,
                      const double[::1] probs, const int64_t[::1] seeds,
                      int64_t n, uint64_t ckey,
                      unsigned char* active, int64_t* queue) noexcept nogil:
    cdef int64_t head = 0, tail = 0, i, u, e, v
    cdef double draw
    memset(active, 0, n)
    for i in range(seeds.shape[0]):
        u = seeds[i]
        if not active[u]:
            active[u] = 1
            queue[tail] = u
            tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if active[v]:
                continue
            draw = <double>(mix64(ckey + <uint64_t>(e + 1) * GOLDEN) >> 11) * INV53
            if draw < probs[e]:
                active[v] = 1
                queue[tail] = v
                tail += 1
    return tail


def _as_arrays(indptr, indices, probs, seeds):
    return (np.ascontiguousarray(indptr, dtype=np.int64),
            np.ascontiguousarray(indices, dtype=np.int32),
            np.ascontiguousarray(probs, dtype=np.float64),
            np.ascontiguousarray(seeds, dtype=np.int64))


def cascade_size(indptr, indices, probs, seeds, int64_t n_vertices,
                 uint64_t stream_key, int64_t index):
    cdef const int64_t[::1] ip
    cdef const int32_t[::1] ix
    cdef const double[::1] pr
    cdef const int64_t[::1] sd
    ip, ix, pr, sd = _as_arrays(indptr, indices, probs, seeds)
    cdef uint64_t ckey = mix64(stream_key + <uint64_t>(index + 1) * GOLDEN)
    cdef unsigned char* active = <unsigned char*>malloc(n_vertices)
    cdef int64_t* queue = <int64_t*>malloc(n_vertices * sizeof(int64_t))
    cdef int64_t size
    if active == NULL or queue == NULL:
        free(active)
        free(queue)
        raise MemoryError()
    try:
        size = _cascade(ip, ix, pr, sd, n_vertices, ckey, active, queue)
    finally:
        free(active)
        free(queue)
    return size


def cascade_batch(indptr, indices, probs, seeds, int64_t n_vertices,
                  uint64_t stream_key, int64_t start, int64_t count):
    """Sum and sum of squares of cascade sizes; releases the GIL."""
    cdef const int64_t[::1] ip
    cdef const int32_t[::1] ix
    cdef const double[::1] pr
    cdef const int64_t[::1] sd
    ip, ix, pr, sd = _as_arrays(indptr, indices, probs, seeds)
    cdef unsigned char* active = <unsigned char*>malloc(n_vertices)
    cdef int64_t* queue = <int64_t*>malloc(n_vertices * sizeof(int64_t))
    cdef int64_t i, size, total = 0, total_sq = 0
    cdef uint64_t ckey
    if active == NULL or queue == NULL:
        free(active)
        free(queue)
        raise MemoryError()
    try:
        with nogil:
            for i in range(start, start + count):
                ckey = mix64(stream_key + <uint64_t>(i + 1) * GOLDEN)
                size = _cascade(ip, ix, pr, sd, n_vertices, ckey, active, queue)
                total += size
                total_sq += size * size
    finally:
        free(active)
        free(queue)
    return total, total_sq
