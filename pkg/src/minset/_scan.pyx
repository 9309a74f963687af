# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernel: subsequence-avoidance filtering of value blocks.

Same contract as ``_scan_py.scan_segment``; digits are matched least
significant first against reversed patterns (the subsequence relation
is invariant under simultaneous reversal), which avoids reversing the
digit buffer for every candidate.
"""

import numpy as np

from .numerals import DIGIT_ALPHABET

cimport numpy as cnp

DEF MAX_DIGITS = 64


def scan_segment(cnp.int64_t[::1] values, list patterns, int base):
    """Return the survivors of ``values``; mutates ``patterns`` in place."""
    cdef Py_ssize_t npat = len(patterns)
    cdef Py_ssize_t cap = npat + 4096
    pat_arr = np.zeros((cap, MAX_DIGITS), dtype=np.uint8)
    len_arr = np.zeros(cap, dtype=np.int32)
    cdef unsigned char[:, ::1] pat = pat_arr
    cdef int[::1] plen = len_arr

    cdef Py_ssize_t i, j
    cdef int k
    for i in range(npat):
        s = patterns[i]
        if len(s) > MAX_DIGITS:
            raise ValueError("pattern longer than %d digits" % MAX_DIGITS)
        plen[i] = len(s)
        for k in range(plen[i]):
            # store reversed
            pat[i, k] = DIGIT_ALPHABET.index(s[len(s) - 1 - k])

    cdef unsigned char dig[MAX_DIGITS]
    cdef long long v
    cdef int nd, pos
    cdef bint matched
    survivors = []

    for j in range(values.shape[0]):
        v = values[j]
        nd = 0
        while v > 0:
            dig[nd] = <unsigned char>(v % base)
            v = v // base
            nd += 1
        matched = False
        for i in range(npat):
            if plen[i] > nd:
                continue
            pos = 0
            for k in range(nd):
                if dig[k] == pat[i, pos]:
                    pos += 1
                    if pos == plen[i]:
                        break
            if pos == plen[i]:
                matched = True
                break
        if not matched:
            if npat >= cap:
                raise RuntimeError("pattern capacity exceeded")
            if nd > MAX_DIGITS:
                raise ValueError("value needs more than %d digits" % MAX_DIGITS)
            for k in range(nd):
                pat[npat, k] = dig[k]
            plen[npat] = nd
            npat += 1
            survivors.append(int(values[j]))
            patterns.append("".join(DIGIT_ALPHABET[dig[k]]
                                    for k in range(nd - 1, -1, -1)))
    return survivors
