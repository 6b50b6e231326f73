"""Fast a_p for many primes: baby-step giant-step on random points (numba).

For a good prime p >= 5 the curve is reduced to y^2 = x^3 + A x + B.  A point
is produced without square roots: for c = f(x0) != 0 the point (c x0, c^2)
lies on Y^2 = X^3 + A c^2 X + B c^3, which is the curve itself when c is a
square and its quadratic twist otherwise.  Each point constrains the trace a
through [p + 1]P = [s a]P (s the Legendre symbol of c); candidates are
intersected until one remains.  Returns a sentinel when undecided so the
caller can fall back to direct counting.
"""

from __future__ import annotations

import math

import numba as nb
import numpy as np

UNDECIDED = 1 << 40


@nb.njit(cache=True)
def _inv(a, p):
    a %= p
    t, nt, r, nr = 0, 1, p, a
    while nr:
        q = r // nr
        t, nt = nt, t - q * nt
        r, nr = nr, r - q * nr
    return t % p


@nb.njit(cache=True)
def _powmod(b, e, p):
    r = 1
    b %= p
    while e:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@nb.njit(cache=True)
def _add(x1, y1, z1, x2, y2, z2, A, p):
    # z is 0 for the point at infinity, 1 otherwise
    if z1 == 0:
        return x2, y2, z2
    if z2 == 0:
        return x1, y1, z1
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return 0, 0, 0
        lam = (3 * x1 % p * x1 + A) % p * _inv(2 * y1, p) % p
    else:
        lam = (y2 - y1) % p * _inv(x2 - x1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return x3, y3, 1


@nb.njit(cache=True)
def _mul(k, x, y, z, A, p):
    if k < 0:
        k = -k
        y = (-y) % p
    rx, ry, rz = 0, 0, 0
    while k:
        if k & 1:
            rx, ry, rz = _add(rx, ry, rz, x, y, z, A, p)
        x, y, z = _add(x, y, z, x, y, z, A, p)
        k >>= 1
    return rx, ry, rz


@nb.njit(cache=True)
def _isqrt(n):
    r = int(math.sqrt(n))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@nb.njit(cache=True)
def ap_bsgs(A, B, p, max_points):
    A %= p
    B %= p
    bound = _isqrt(4 * p)
    width = 2 * bound + 1
    alive = np.ones(width, dtype=np.bool_)  # alive[t + bound]: trace t still possible
    m = _isqrt(width) + 1
    step = 2 * m + 1
    kmax = bound // step + 2
    bx = np.empty(m + 1, dtype=np.int64)
    by = np.empty(m + 1, dtype=np.int64)
    x0 = 0
    used = 0
    while used < max_points:
        x0 += 1
        if x0 >= p:
            break
        c = ((x0 * x0 % p + A) * x0 + B) % p
        if c == 0:
            continue
        s = 1 if _powmod(c, (p - 1) // 2, p) == 1 else -1
        c2 = c * c % p
        Ac = A * c2 % p
        px, py, pz = c * x0 % p, c2, 1
        used += 1
        # baby steps jP, j = 0..m (index 0 unused, infinity)
        qx, qy, qz = 0, 0, 0
        for j in range(1, m + 1):
            qx, qy, qz = _add(qx, qy, qz, px, py, pz, Ac, p)
            bx[j] = qx if qz else -1
            by[j] = qy
        gx, gy, gz = _mul(step, px, py, pz, Ac, p)
        rx, ry, rz = _mul(p + 1, px, py, pz, Ac, p)
        hits = np.zeros(width, dtype=np.bool_)
        # T_k = R - k*G, for k from -kmax to kmax
        tx, ty, tz = _mul(kmax, gx, gy, gz, Ac, p)
        tx, ty, tz = _add(rx, ry, rz, tx, ty, tz, Ac, p)  # R + kmax G  (k = -kmax)
        ngx, ngy, ngz = gx, (-gy) % p, gz
        for k in range(-kmax, kmax + 1):
            # R - kG = jP  =>  t = k*step + j
            if tz == 0:
                t = k * step
                if -bound <= t <= bound:
                    hits[t + bound] = True
            else:
                for j in range(1, m + 1):
                    if bx[j] == tx:
                        jj = j if by[j] == ty else -j
                        t = k * step + jj
                        if -bound <= t <= bound:
                            hits[t + bound] = True
            tx, ty, tz = _add(tx, ty, tz, ngx, ngy, ngz, Ac, p)
        for t in range(-bound, bound + 1):
            if not hits[t + bound]:
                alive[s * t + bound] = False
        count = 0
        last = 0
        for a in range(-bound, bound + 1):
            if alive[a + bound]:
                count += 1
                last = a
        if count == 1:
            return last
        if count == 0:
            return UNDECIDED
    return UNDECIDED


@nb.njit(cache=True)
def ap_naive_short(A, B, p):
    """Trace of y^2 = x^3 + A x + B over F_p (p odd) by Euler's criterion."""
    A %= p
    B %= p
    sq = np.zeros(p, dtype=np.int8)
    for y in range(1, (p + 1) // 2):
        sq[y * y % p] = 1
    total = 0
    for x in range(p):
        f = ((x * x % p + A) * x + B) % p
        if f != 0:
            total += 1 if sq[f] else -1
    return -total


@nb.njit(cache=True)
def ap_short_many(A, B, primes, naive_below):
    out = np.empty(len(primes), dtype=np.int64)
    for i in range(len(primes)):
        p = primes[i]
        if p < naive_below:
            out[i] = ap_naive_short(A, B, p)
        else:
            a = ap_bsgs(A, B, p, 40)
            out[i] = ap_naive_short(A, B, p) if a == UNDECIDED else a
    return out


@nb.njit(cache=True)
def extend_multiplicative(ap_table, good, n_max):
    """a_n for 1 <= n <= n_max from a_p (indexed by p) and good-reduction flags.

    Uses a smallest-prime-factor sieve; a_{p^k} follows the Hecke recursion at
    good p and is a_p^k at bad p.
    """
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for i in range(2, n_max + 1):
        if spf[i] == 0:
            for j in range(i, n_max + 1, i):
                if spf[j] == 0:
                    spf[j] = i
    an = np.zeros(n_max + 1, dtype=np.int64)
    if n_max >= 1:
        an[1] = 1
    for n in range(2, n_max + 1):
        p = spf[n]
        m = n
        pk = 1
        while m % p == 0:
            m //= p
            pk *= p
        if m > 1:
            an[n] = an[pk] * an[m]
            continue
        # n = p^k
        if pk == p:
            an[n] = ap_table[p]
        elif good[p]:
            an[n] = ap_table[p] * an[n // p] - p * an[n // (p * p)]
        else:
            an[n] = ap_table[p] * an[n // p]
    return an
