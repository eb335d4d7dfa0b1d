"""Fast Buchberger kernel over prime fields.

Monomials in up to 16 variables are packed into two uint64 words, one
8-bit lane per variable, exponents capped at 127. Degrevlex (optionally
in two elimination blocks) compares block degree first, then the packed
words as a 128-bit integer with the sense inverted, which is exactly
reverse-lexicographic tie-breaking. Divisibility is the usual guard-bit
SWAR subtraction; block degrees come from masked lane sums.

Normal forms run as heap-of-streams sparse division: the working
polynomial is never materialized, each pending summand (a scaled,
shifted basis tail) advances through a binary heap keyed by the term
order, so every elementary coefficient product costs O(log #streams).
The Buchberger pair loop and Gebauer-Moeller bookkeeping live in
groebner.py; the kernels below do all the arithmetic.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

MAX_EXP = 127
MAX_VARS = 16
_GUARD = 0x8080808080808080


class EngineOverflow(Exception):
    """An exponent exceeded the packed-representation cap."""


def pack_exponents(exps) -> tuple[np.ndarray, np.ndarray]:
    """Pack an (nterms, nvars) exponent matrix into two uint64 columns."""
    exps = np.asarray(exps, dtype=np.int64)
    if exps.ndim != 2 or exps.shape[1] > MAX_VARS:
        raise EngineOverflow("too many variables for the packed engine")
    if exps.size and int(exps.max()) > MAX_EXP:
        raise EngineOverflow("exponent exceeds packed-engine cap")
    n = exps.shape[0]
    m0 = np.zeros(n, dtype=np.uint64)
    m1 = np.zeros(n, dtype=np.uint64)
    for j in range(exps.shape[1]):
        col = exps[:, j].astype(np.uint64)
        if j < 8:
            m0 |= col << np.uint64(8 * j)
        else:
            m1 |= col << np.uint64(8 * (j - 8))
    return m0, m1


def unpack_exponents(m0, m1, nvars: int) -> np.ndarray:
    n = len(m0)
    exps = np.zeros((n, nvars), dtype=np.int64)
    for j in range(nvars):
        if j < 8:
            exps[:, j] = ((m0 >> np.uint64(8 * j)) & np.uint64(0xFF)).astype(np.int64)
        else:
            exps[:, j] = ((m1 >> np.uint64(8 * (j - 8))) & np.uint64(0xFF)).astype(np.int64)
    return exps


def block_masks(nvars: int, split: int):
    """Lane masks for block 1 (vars < split) and block 2 (the rest)."""
    k0 = k1 = b0 = b1 = 0
    for j in range(nvars):
        lane = 0xFF << (8 * (j % 8))
        if j < split:
            if j < 8:
                k0 |= lane
            else:
                k1 |= lane
        else:
            if j < 8:
                b0 |= lane
            else:
                b1 |= lane
    return (np.uint64(k0), np.uint64(k1), np.uint64(b0), np.uint64(b1))


@njit(inline="always", cache=True)
def _lanesum(w):
    lo = uint64(0x00FF00FF00FF00FF)
    s = (w & lo) + ((w >> uint64(8)) & lo)
    lo2 = uint64(0x0000FFFF0000FFFF)
    s = (s & lo2) + ((s >> uint64(16)) & lo2)
    return int((s + (s >> uint64(32))) & uint64(0xFFFFFFFF))


@njit(inline="always", cache=True)
def _term_gt(a0, a1, b0, b1, k0, k1, q0, q1):
    ad = _lanesum(a0 & k0) + _lanesum(a1 & k1)
    bd = _lanesum(b0 & k0) + _lanesum(b1 & k1)
    if ad != bd:
        return ad > bd
    x = a1 & k1
    y = b1 & k1
    if x != y:
        return x < y
    x = a0 & k0
    y = b0 & k0
    if x != y:
        return x < y
    ad = _lanesum(a0 & q0) + _lanesum(a1 & q1)
    bd = _lanesum(b0 & q0) + _lanesum(b1 & q1)
    if ad != bd:
        return ad > bd
    x = a1 & q1
    y = b1 & q1
    if x != y:
        return x < y
    return (a0 & q0) < (b0 & q0)


@njit(inline="always", cache=True)
def _divides(t0, t1, m0, m1):
    g = uint64(0x8080808080808080)
    if (((m0 | g) - t0) & g) != g:
        return False
    return (((m1 | g) - t1) & g) == g


@njit(cache=True)
def _nf_heap(wm0, wm1, wc, spair_i, spair_j,
             bm0, bm1, bc, boff, lt0, lt1, ltdeg, ltlen, nb,
             p, k0, k1, q0msk, q1msk, skip):
    """Heap-of-streams normal form, fully tail-reduced.

    If spair_i >= 0, the input is the S-polynomial of basis elements
    spair_i/spair_j (the w* arrays are ignored); otherwise the input is
    the sorted polynomial in wm0/wm1/wc. Returns (m0, m1, c, status);
    status 1 signals exponent overflow. Reducers are chosen among the
    dividing leading terms by minimal support length.
    """
    guard = uint64(0x8080808080808080)

    cap_s = 256
    s_src = np.empty(cap_s, dtype=np.int64)    # basis index, -1 = input poly
    s_q0 = np.empty(cap_s, dtype=np.uint64)
    s_q1 = np.empty(cap_s, dtype=np.uint64)
    s_scale = np.empty(cap_s, dtype=np.int64)
    s_pos = np.empty(cap_s, dtype=np.int64)
    s_end = np.empty(cap_s, dtype=np.int64)
    ns = 0

    cap_h = 256
    h_m0 = np.empty(cap_h, dtype=np.uint64)
    h_m1 = np.empty(cap_h, dtype=np.uint64)
    h_sid = np.empty(cap_h, dtype=np.int64)
    nh = 0

    cap_r = 64
    rm0 = np.empty(cap_r, dtype=np.uint64)
    rm1 = np.empty(cap_r, dtype=np.uint64)
    rc = np.empty(cap_r, dtype=np.int64)
    nr = 0

    status = 0

    # heap push/pop are inlined below (numba closures cannot mutate
    # outer-scope arrays); the sift code is repetitive but straightforward

    # seed the streams
    if spair_i >= 0:
        # lcm of the two leading monomials
        l0 = uint64(0)
        l1 = uint64(0)
        for lane in range(8):
            sh = uint64(8 * lane)
            mask = uint64(0xFF) << sh
            a = lt0[spair_i] & mask
            b = lt0[spair_j] & mask
            l0 |= a if a > b else b
            a = lt1[spair_i] & mask
            b = lt1[spair_j] & mask
            l1 |= a if a > b else b
        # two streams over the full polys; the heads cancel in the sum
        s_src[0] = spair_i
        s_q0[0] = l0 - lt0[spair_i]
        s_q1[0] = l1 - lt1[spair_i]
        s_scale[0] = 1
        s_pos[0] = boff[spair_i]
        s_end[0] = boff[spair_i + 1]
        s_src[1] = spair_j
        s_q0[1] = l0 - lt0[spair_j]
        s_q1[1] = l1 - lt1[spair_j]
        s_scale[1] = p - 1
        s_pos[1] = boff[spair_j]
        s_end[1] = boff[spair_j + 1]
        ns = 2
    else:
        s_src[0] = -1
        s_q0[0] = uint64(0)
        s_q1[0] = uint64(0)
        s_scale[0] = 1
        s_pos[0] = 0
        s_end[0] = len(wm0)
        ns = 1

    # push initial heap entries
    for sid in range(ns):
        pos = s_pos[sid]
        if pos >= s_end[sid]:
            continue
        if s_src[sid] < 0:
            t0 = wm0[pos]
            t1 = wm1[pos]
        else:
            t0 = bm0[pos] + s_q0[sid]
            t1 = bm1[pos] + s_q1[sid]
            if ((t0 | t1) & guard) != uint64(0):
                return rm0[:0], rm1[:0], rc[:0], 1
        # sift up
        i = nh
        nh += 1
        h_m0[i] = t0
        h_m1[i] = t1
        h_sid[i] = sid
        while i > 0:
            par = (i - 1) >> 1
            if _term_gt(h_m0[i], h_m1[i], h_m0[par], h_m1[par], k0, k1, q0msk, q1msk):
                h_m0[i], h_m0[par] = h_m0[par], h_m0[i]
                h_m1[i], h_m1[par] = h_m1[par], h_m1[i]
                h_sid[i], h_sid[par] = h_sid[par], h_sid[i]
                i = par
            else:
                break

    while nh > 0:
        top0 = h_m0[0]
        top1 = h_m1[0]
        acc = 0
        # drain all heap entries equal to the top monomial
        while nh > 0 and h_m0[0] == top0 and h_m1[0] == top1:
            sid = h_sid[0]
            pos = s_pos[sid]
            if s_src[sid] < 0:
                acc = (acc + s_scale[sid] * wc[pos]) % p
            else:
                acc = (acc + s_scale[sid] * bc[pos]) % p
            # advance the stream
            pos += 1
            s_pos[sid] = pos
            have_next = pos < s_end[sid]
            if have_next:
                if s_src[sid] < 0:
                    t0 = wm0[pos]
                    t1 = wm1[pos]
                else:
                    t0 = bm0[pos] + s_q0[sid]
                    t1 = bm1[pos] + s_q1[sid]
                    if ((t0 | t1) & guard) != uint64(0):
                        return rm0[:0], rm1[:0], rc[:0], 1
                # replace root and sift down
                h_m0[0] = t0
                h_m1[0] = t1
                h_sid[0] = sid
            else:
                nh -= 1
                if nh > 0:
                    h_m0[0] = h_m0[nh]
                    h_m1[0] = h_m1[nh]
                    h_sid[0] = h_sid[nh]
                else:
                    break
            i = 0
            while True:
                l = 2 * i + 1
                r = l + 1
                big = i
                if l < nh and _term_gt(h_m0[l], h_m1[l], h_m0[big], h_m1[big],
                                       k0, k1, q0msk, q1msk):
                    big = l
                if r < nh and _term_gt(h_m0[r], h_m1[r], h_m0[big], h_m1[big],
                                       k0, k1, q0msk, q1msk):
                    big = r
                if big == i:
                    break
                h_m0[i], h_m0[big] = h_m0[big], h_m0[i]
                h_m1[i], h_m1[big] = h_m1[big], h_m1[i]
                h_sid[i], h_sid[big] = h_sid[big], h_sid[i]
                i = big
        if acc == 0:
            continue
        # find a reducer with minimal support length
        tdeg = _lanesum(top0) + _lanesum(top1)
        red = -1
        best = 1 << 60
        for i in range(nb):
            if i != skip and ltdeg[i] <= tdeg and ltlen[i] < best \
                    and _divides(lt0[i], lt1[i], top0, top1):
                red = i
                best = ltlen[i]
        if red < 0:
            if nr >= cap_r:
                cap_r *= 2
                t0a = np.empty(cap_r, dtype=np.uint64)
                t0a[:nr] = rm0[:nr]
                rm0 = t0a
                t1a = np.empty(cap_r, dtype=np.uint64)
                t1a[:nr] = rm1[:nr]
                rm1 = t1a
                tca = np.empty(cap_r, dtype=np.int64)
                tca[:nr] = rc[:nr]
                rc = tca
            rm0[nr] = top0
            rm1[nr] = top1
            rc[nr] = acc
            nr += 1
            continue
        # spawn a stream over the reducer's tail
        gs = boff[red]
        ge = boff[red + 1]
        if ge - gs <= 1:
            continue  # monomial reducer, term simply cancels
        if ns >= cap_s:
            cap_s *= 2
            n1 = np.empty(cap_s, dtype=np.int64)
            n1[:ns] = s_src[:ns]
            s_src = n1
            n2 = np.empty(cap_s, dtype=np.uint64)
            n2[:ns] = s_q0[:ns]
            s_q0 = n2
            n3 = np.empty(cap_s, dtype=np.uint64)
            n3[:ns] = s_q1[:ns]
            s_q1 = n3
            n4 = np.empty(cap_s, dtype=np.int64)
            n4[:ns] = s_scale[:ns]
            s_scale = n4
            n5 = np.empty(cap_s, dtype=np.int64)
            n5[:ns] = s_pos[:ns]
            s_pos = n5
            n6 = np.empty(cap_s, dtype=np.int64)
            n6[:ns] = s_end[:ns]
            s_end = n6
        sid = ns
        ns += 1
        s_src[sid] = red
        s_q0[sid] = top0 - lt0[red]
        s_q1[sid] = top1 - lt1[red]
        s_scale[sid] = p - acc
        s_pos[sid] = gs + 1
        s_end[sid] = ge
        t0 = bm0[gs + 1] + s_q0[sid]
        t1 = bm1[gs + 1] + s_q1[sid]
        if ((t0 | t1) & guard) != uint64(0):
            return rm0[:0], rm1[:0], rc[:0], 1
        if nh >= cap_h:
            cap_h *= 2
            g1 = np.empty(cap_h, dtype=np.uint64)
            g1[:nh] = h_m0[:nh]
            h_m0 = g1
            g2 = np.empty(cap_h, dtype=np.uint64)
            g2[:nh] = h_m1[:nh]
            h_m1 = g2
            g3 = np.empty(cap_h, dtype=np.int64)
            g3[:nh] = h_sid[:nh]
            h_sid = g3
        i = nh
        nh += 1
        h_m0[i] = t0
        h_m1[i] = t1
        h_sid[i] = sid
        while i > 0:
            par = (i - 1) >> 1
            if _term_gt(h_m0[i], h_m1[i], h_m0[par], h_m1[par], k0, k1, q0msk, q1msk):
                h_m0[i], h_m0[par] = h_m0[par], h_m0[i]
                h_m1[i], h_m1[par] = h_m1[par], h_m1[i]
                h_sid[i], h_sid[par] = h_sid[par], h_sid[i]
                i = par
            else:
                break

    return rm0[:nr], rm1[:nr], rc[:nr], status


class PackedBasis:
    """Growable flat storage for monic basis polynomials."""

    def __init__(self, nvars: int, p: int, masks):
        self.nvars = nvars
        self.p = p
        self.k0, self.k1, self.q0, self.q1 = masks
        cap = 1 << 12
        self.bm0 = np.empty(cap, dtype=np.uint64)
        self.bm1 = np.empty(cap, dtype=np.uint64)
        self.bc = np.empty(cap, dtype=np.int64)
        self.boff = np.zeros(1, dtype=np.int64)
        self.lt0 = np.empty(0, dtype=np.uint64)
        self.lt1 = np.empty(0, dtype=np.uint64)
        self.ltdeg = np.empty(0, dtype=np.int64)
        self.ltlen = np.empty(0, dtype=np.int64)
        self.nterms = 0
        self.n = 0

    def _ensure(self, extra: int):
        need = self.nterms + extra
        cap = len(self.bm0)
        if need <= cap:
            return
        while cap < need:
            cap *= 2
        for name in ("bm0", "bm1", "bc"):
            old = getattr(self, name)
            new = np.empty(cap, dtype=old.dtype)
            new[:self.nterms] = old[:self.nterms]
            setattr(self, name, new)

    def append(self, m0, m1, c):
        """Insert a poly (already sorted descending); normalizes monic."""
        n = len(m0)
        if n == 0:
            raise ValueError("cannot insert zero polynomial")
        lc = int(c[0]) % self.p
        if lc != 1:
            inv = pow(lc, self.p - 2, self.p)
            c = (c * inv) % self.p
        self._ensure(n)
        s = self.nterms
        self.bm0[s:s + n] = m0
        self.bm1[s:s + n] = m1
        self.bc[s:s + n] = c
        self.nterms += n
        self.boff = np.append(self.boff, self.nterms)
        self.lt0 = np.append(self.lt0, m0[0])
        self.lt1 = np.append(self.lt1, m1[0])
        deg = int(_py_lanesum(int(m0[0])) + _py_lanesum(int(m1[0])))
        self.ltdeg = np.append(self.ltdeg, deg)
        self.ltlen = np.append(self.ltlen, n)
        self.n += 1

    _EMPTY_W = (np.empty(0, dtype=np.uint64), np.empty(0, dtype=np.uint64),
                np.empty(0, dtype=np.int64))

    def normal_form(self, m0, m1, c, skip: int = -1):
        if len(m0) == 0:
            return m0, m1, c
        rm0, rm1, rc, status = _nf_heap(
            m0, m1, c % self.p, -1, -1,
            self.bm0, self.bm1, self.bc, self.boff,
            self.lt0, self.lt1, self.ltdeg, self.ltlen, self.n,
            self.p, self.k0, self.k1, self.q0, self.q1, skip)
        if status:
            raise EngineOverflow("exponent overflow during reduction")
        return rm0, rm1, rc

    def spoly_reduced(self, i: int, j: int):
        w0, w1, wc = self._EMPTY_W
        rm0, rm1, rc, status = _nf_heap(
            w0, w1, wc, i, j,
            self.bm0, self.bm1, self.bc, self.boff,
            self.lt0, self.lt1, self.ltdeg, self.ltlen, self.n,
            self.p, self.k0, self.k1, self.q0, self.q1, -1)
        if status:
            raise EngineOverflow("exponent overflow in S-polynomial")
        return rm0, rm1, rc

    def poly(self, i: int):
        s, e = self.boff[i], self.boff[i + 1]
        return self.bm0[s:e], self.bm1[s:e], self.bc[s:e]


def _py_lanesum(w: int) -> int:
    s = 0
    while w:
        s += w & 0xFF
        w >>= 8
    return s


def monomial_lcm_packed(a0: int, a1: int, b0: int, b1: int) -> tuple[int, int]:
    l0 = 0
    l1 = 0
    for lane in range(8):
        sh = 8 * lane
        mask = 0xFF << sh
        l0 |= max(a0 & mask, b0 & mask)
        l1 |= max(a1 & mask, b1 & mask)
    return l0, l1


def divides_packed(t0: int, t1: int, m0: int, m1: int) -> bool:
    if (((m0 | _GUARD) - t0) & _GUARD) != _GUARD:
        return False
    return (((m1 | _GUARD) - t1) & _GUARD) == _GUARD


def sort_packed_poly(m0, m1, c, masks):
    """Sort term arrays descending in the (block) degrevlex order."""
    k0, k1, q0, q1 = (int(x) for x in masks)
    idx = sorted(range(len(m0)),
                 key=lambda t: _order_key(int(m0[t]), int(m1[t]), k0, k1, q0, q1),
                 reverse=True)
    sel = np.array(idx, dtype=np.int64)
    return m0[sel], m1[sel], c[sel]


def _order_key(w0: int, w1: int, k0: int, k1: int, q0: int, q1: int):
    d1 = _py_lanesum(w0 & k0) + _py_lanesum(w1 & k1)
    d2 = _py_lanesum(w0 & q0) + _py_lanesum(w1 & q1)
    big = (1 << 64) - 1
    return (d1, (big - (w1 & k1), big - (w0 & k0)), d2,
            (big - (w1 & q1), big - (w0 & q0)))
