# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see _kernels_py.py for the reference semantics.

Callers (latref.kernels) guarantee every intermediate fits in int64.
"""

from libc.stdlib cimport malloc, free


def box_vectors(gram, long long target2, int box):
    cdef int n = len(gram)
    cdef long long *G = <long long *> malloc(n * n * sizeof(long long))
    cdef long long *v = <long long *> malloc(n * sizeof(long long))
    cdef long long *w = <long long *> malloc(n * sizeof(long long))
    cdef long long val, delta
    cdef int i, j, k, first
    out = []
    try:
        for i in range(n):
            for j in range(n):
                G[i * n + j] = gram[i][j]
        for i in range(n):
            v[i] = -box
        for i in range(n):
            w[i] = 0
            for j in range(n):
                w[i] += G[i * n + j] * v[j]
        val = 0
        for i in range(n):
            val += v[i] * w[i]
        while True:
            if val == target2:
                first = 0
                for i in range(n):
                    if v[i] != 0:
                        first = 1 if v[i] > 0 else -1
                        break
                if first > 0:
                    out.append(tuple([v[i] for i in range(n)]))
            # odometer step on the last coordinate
            k = n - 1
            while k >= 0 and v[k] == box:
                k -= 1
            if k < 0:
                break
            for j in range(k + 1, n):
                delta = -2 * box
                val += 2 * delta * w[j] + delta * delta * G[j * n + j]
                for i in range(n):
                    w[i] += delta * G[i * n + j]
                v[j] = -box
            val += 2 * w[k] + G[k * n + k]
            for i in range(n):
                w[i] += G[i * n + k]
            v[k] += 1
    finally:
        free(G)
        free(v)
        free(w)
    return out


def split_vectors(sigma_gram, long long target_q, int box):
    cdef int s = len(sigma_gram)
    cdef long long *S = <long long *> malloc((s * s + 1) * sizeof(long long))
    cdef long long *z = <long long *> malloc((s + 1) * sizeof(long long))
    cdef long long *w = <long long *> malloc((s + 1) * sizeof(long long))
    cdef long long val2, m, a, t, delta
    cdef long long bb = <long long> box * box
    cdef int i, j, k
    out = []
    try:
        for i in range(s):
            for j in range(s):
                S[i * s + j] = sigma_gram[i][j]
        for i in range(s):
            z[i] = -box
        for i in range(s):
            w[i] = 0
            for j in range(s):
                w[i] += S[i * s + j] * z[j]
        val2 = 0
        for i in range(s):
            val2 += z[i] * w[i]
        while True:
            zt = tuple([z[i] for i in range(s)])
            m = target_q - val2 // 2
            if m == 0:
                for t in range(-box, box + 1):
                    out.append((t, 0) + zt)
                    if t != 0:
                        out.append((0, t) + zt)
            elif -bb <= m <= bb:
                for a in range(1, box + 1):
                    if m % a == 0 and -box <= m // a <= box:
                        out.append((a, m // a) + zt)
                        out.append((-a, -(m // a)) + zt)
            if s == 0:
                break
            k = s - 1
            while k >= 0 and z[k] == box:
                k -= 1
            if k < 0:
                break
            for j in range(k + 1, s):
                delta = -2 * box
                val2 += 2 * delta * w[j] + delta * delta * S[j * s + j]
                for i in range(s):
                    w[i] += delta * S[i * s + j]
                z[j] = -box
            val2 += 2 * w[k] + S[k * s + k]
            for i in range(s):
                w[i] += S[i * s + k]
            z[k] += 1
    finally:
        free(S)
        free(z)
        free(w)
    return out


def argmin_height(Re, Rf, x):
    cdef int K = len(Re)
    cdef int n = len(x)
    cdef long long *X = <long long *> malloc((n + 1) * sizeof(long long))
    cdef long long he, hf, h, best_h = -1
    cdef int best = -1, k, i
    try:
        for i in range(n):
            X[i] = x[i]
        for k in range(K):
            re = Re[k]
            rf = Rf[k]
            he = 0
            hf = 0
            for i in range(n):
                he += <long long> re[i] * X[i]
                hf += <long long> rf[i] * X[i]
            h = (he if he >= 0 else -he) + (hf if hf >= 0 else -hf)
            if best_h < 0 or h < best_h:
                best_h = h
                best = k
    finally:
        free(X)
    return best, (best_h if best >= 0 else None)
