"""Degree-batched matrix reduction (F4-style) over prime fields.

All S-pairs of minimal lcm degree are reduced together: symbolic
preprocessing designates one monic reducer row per reducible monomial
(the U rows, upper triangular by construction since a row's tail
monomials are strictly smaller than its pivot), the remaining pair
products become S rows, and elimination runs in two structured phases:

  1. forward substitution of each S row through the U rows, touching
     only columns to the right of the current one;
  2. dense Gaussian elimination among the reduced S rows, which are
     supported on reducer-free (standard) columns only.

Every surviving phase-2 row has an irreducible leading monomial and an
irreducible tail, so it enters the basis already fully reduced. The
same machinery tail-reduces a minimal basis in one shared batch.

Monomial bookkeeping is vectorized for up to 8 variables (keys are
single packed words); wider rings fall back to dict-keyed columns.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._engine import EngineOverflow, PackedBasis, _py_lanesum

_GUARD = np.uint64(0x8080808080808080)


@njit(cache=True)
def _find_reducers_bulk(m0, m1, lt0, lt1, ltdeg, ltlen, nb):
    """For each monomial, the min-support-length basis index dividing it."""
    n = len(m0)
    out = np.full(n, -1, dtype=np.int64)
    g = np.uint64(0x8080808080808080)
    for t in range(n):
        a0 = m0[t]
        a1 = m1[t]
        deg = 0
        w = a0
        while w:
            deg += int(w & np.uint64(0xFF))
            w >>= np.uint64(8)
        w = a1
        while w:
            deg += int(w & np.uint64(0xFF))
            w >>= np.uint64(8)
        best = 1 << 60
        red = -1
        for i in range(nb):
            if ltdeg[i] <= deg and ltlen[i] < best:
                if (((a0 | g) - lt0[i]) & g) == g and (((a1 | g) - lt1[i]) & g) == g:
                    red = i
                    best = ltlen[i]
        out[t] = red
    return out


@njit(cache=True)
def _reduce_srows(scols, soff, svals, ucols, uoff, uvals, piv_of_col,
                  colmap, nN, ncols, p):
    """Phase 1: forward-substitute S rows through U; emit dense N-blocks."""
    nrows = len(soff) - 1
    out = np.zeros((nrows, nN), dtype=np.int64)
    d = np.zeros(ncols, dtype=np.int64)
    for r in range(nrows):
        for k in range(soff[r], soff[r + 1]):
            d[scols[k]] += svals[k]
        for c in range(ncols):
            v = d[c] % p
            if v == 0:
                continue
            ur = piv_of_col[c]
            if ur >= 0:
                neg = p - v
                for k in range(uoff[ur], uoff[ur + 1]):
                    d[ucols[k]] += neg * uvals[k]
            else:
                out[r, colmap[c]] = v
        d[:] = 0
    return out


@njit(cache=True)
def _dense_eliminate(block, p):
    """Phase 2: row echelon over the N-columns; surviving rows end up
    monic with distinct pivots and mutually reduced. Returns surviving
    row indices in pivot-registration order."""
    nrows, ncols = block.shape
    piv_of_col = np.full(ncols, -1, dtype=np.int64)
    order = np.full(nrows, -1, dtype=np.int64)
    nout = 0
    for r in range(nrows):
        c = 0
        while c < ncols:
            v = block[r, c] % p
            block[r, c] = v
            if v == 0:
                c += 1
                continue
            pr = piv_of_col[c]
            if pr < 0:
                inv = 1
                base = v
                e = p - 2
                while e:
                    if e & 1:
                        inv = inv * base % p
                    base = base * base % p
                    e >>= 1
                for cc in range(c, ncols):
                    block[r, cc] = block[r, cc] % p * inv % p
                piv_of_col[c] = r
                order[nout] = r
                nout += 1
                break
            neg = p - v
            for cc in range(c, ncols):
                block[r, cc] = (block[r, cc] + neg * block[pr, cc]) % p
            c += 1
    # back-substitute right-to-left so every pivot row ends fully reduced
    pivcols = np.empty(nout, dtype=np.int64)
    for idx in range(nout):
        r = order[idx]
        c = 0
        while block[r, c] % p == 0:
            c += 1
        pivcols[idx] = c
    by_col = np.argsort(pivcols)
    for pos in range(nout - 1, -1, -1):
        idx = by_col[pos]
        r = order[idx]
        c = pivcols[idx]
        for cc in range(c + 1, ncols):
            v = block[r, cc] % p
            block[r, cc] = v
            if v == 0:
                continue
            pr = piv_of_col[cc]
            if pr >= 0 and pr != r:
                neg = p - v
                for c2 in range(cc, ncols):
                    block[r, c2] = (block[r, c2] + neg * block[pr, c2]) % p
    return order[:nout]


def _lane_degrees(words: np.ndarray) -> np.ndarray:
    """Total degree of each packed word (sum of its 8 byte lanes)."""
    return words.view(np.uint8).reshape(-1, 8).sum(axis=1).astype(np.int64)


class F4Matrix:
    """One degree batch: symbolic preprocessing and structured elimination.

    ``wide=False`` (up to 8 variables) keeps every monomial as a single
    uint64 and runs all set logic through numpy; the wide path keys
    columns by python ints.
    """

    def __init__(self, basis: PackedBasis, masks, wide: bool):
        self.basis = basis
        self.masks = masks
        self.p = basis.p
        self.wide = wide
        self.u_rows: list = []          # (gidx, q0, q1)
        self.u_pivkey: list = []
        self.s_rows: list = []
        self._u_slot: dict = {}
        self._prod_seen: set = set()
        self._chunks: list = []         # pending monomial arrays (narrow)
        self._chunks1: list = []        # second words (wide)

    @staticmethod
    def _key(w0: int, w1: int) -> int:
        return (w1 << 64) | w0 if w1 else w0

    def _shifted(self, g: int, q0: int, q1: int):
        b = self.basis
        s, e = b.boff[g], b.boff[g + 1]
        m0 = b.bm0[s:e] + np.uint64(q0)
        m1 = b.bm1[s:e] + np.uint64(q1)
        if len(m0) and int(((m0 | m1) & _GUARD).max()):
            raise EngineOverflow("exponent overflow in F4 product")
        return m0, m1

    def _note(self, m0, m1):
        self._chunks.append(m0)
        if self.wide:
            self._chunks1.append(m1)

    def add_pair(self, i: int, j: int, lcm):
        b = self.basis
        qi = (lcm[0] - int(b.lt0[i]), lcm[1] - int(b.lt1[i]))
        qj = (lcm[0] - int(b.lt0[j]), lcm[1] - int(b.lt1[j]))
        lk = self._key(lcm[0], lcm[1])
        if lk not in self._u_slot:
            self._add_u(lk, i, qi)
            self._add_s(j, qj)
        else:
            self._add_s(i, qi)
            self._add_s(j, qj)

    def add_tail_row(self, g: int):
        """Register basis element g's tail as an S row (interreduction)."""
        self.s_rows.append((g, 0, 0, True))
        m0, m1 = self._shifted(g, 0, 0)
        self._note(m0[1:], m1[1:])

    def _add_u(self, pivkey: int, g: int, q):
        self._u_slot[pivkey] = len(self.u_rows)
        self.u_rows.append((g, q[0], q[1]))
        self.u_pivkey.append(pivkey)
        m0, m1 = self._shifted(g, q[0], q[1])
        self._note(m0, m1)

    def _add_s(self, g: int, q):
        sig = (g, self._key(q[0], q[1]))
        if sig in self._prod_seen:
            return
        self._prod_seen.add(sig)
        self.s_rows.append((g, q[0], q[1], False))
        m0, m1 = self._shifted(g, q[0], q[1])
        self._note(m0, m1)

    def _seen_chunk(self):
        if self.wide:
            k0 = np.concatenate(self._chunks) if self._chunks else np.empty(0, np.uint64)
            k1 = np.concatenate(self._chunks1) if self._chunks1 else np.empty(0, np.uint64)
            self._chunks = []
            self._chunks1 = []
            return k0, k1
        k0 = np.concatenate(self._chunks) if self._chunks else np.empty(0, np.uint64)
        self._chunks = []
        return k0, None

    def preprocess(self):
        """Close the monomial set under reduction by designated U rows."""
        b = self.basis
        seen0 = np.empty(0, dtype=np.uint64)
        seen_wide: set = set()
        while self._chunks or self._chunks1:
            k0, k1 = self._seen_chunk()
            if not self.wide:
                chunk = np.unique(k0)
                fresh = chunk[~np.isin(chunk, seen0, assume_unique=True)]
                if len(fresh) == 0:
                    continue
                seen0 = np.union1d(seen0, fresh)
                f0 = fresh
                f1 = np.zeros(len(fresh), dtype=np.uint64)
            else:
                pairs = {self._key(int(a), int(bb)) for a, bb in zip(k0, k1)}
                fresh_keys = [k for k in pairs if k not in seen_wide]
                if not fresh_keys:
                    continue
                seen_wide.update(fresh_keys)
                f0 = np.array([k & ((1 << 64) - 1) for k in fresh_keys],
                              dtype=np.uint64)
                f1 = np.array([k >> 64 for k in fresh_keys], dtype=np.uint64)
            red = _find_reducers_bulk(f0, f1, b.lt0, b.lt1, b.ltdeg,
                                      b.ltlen, b.n)
            for t in np.nonzero(red >= 0)[0].tolist():
                g = int(red[t])
                w0, w1 = int(f0[t]), int(f1[t])
                k = self._key(w0, w1)
                if k in self._u_slot:
                    continue
                self._add_u(k, g, (w0 - int(b.lt0[g]), w1 - int(b.lt1[g])))
        self._seen0 = seen0
        self._seen_wide = seen_wide

    def eliminate(self, interreduce: bool = False):
        """Run both phases. Returns new polys as packed triples, or, in
        interreduce mode, the reduced tail rows in s_rows order."""
        if not self.s_rows:
            return []
        b = self.basis
        p = self.p
        if self.wide:
            cols0, cols1, lookup = self._columns_wide()
        else:
            cols0, cols1, lookup = self._columns_narrow()
        ncols = len(cols0)
        piv_of_col = np.full(ncols, -1, dtype=np.int64)
        ckeys = [self._key(int(a), int(bb)) for a, bb in zip(cols0, cols1)]
        col_of_key = {k: i for i, k in enumerate(ckeys)}
        for pos, pk in enumerate(self.u_pivkey):
            piv_of_col[col_of_key[pk]] = pos

        def csr(rows, drop_head):
            cols_list = []
            vals_list = []
            off = [0]
            total = 0
            for row in rows:
                g, qa, qb = row[0], row[1], row[2]
                skip = 1 if (drop_head and row[3]) else 0
                m0, m1 = self._shifted(g, qa, qb)
                s, e = b.boff[g] + skip, b.boff[g + 1]
                idx = lookup(m0[skip:], m1[skip:])
                srt = np.argsort(idx, kind="stable")
                cols_list.append(idx[srt])
                vals_list.append(b.bc[s:e][srt].astype(np.int64))
                total += e - s
                off.append(total)
            if cols_list:
                return (np.concatenate(cols_list),
                        np.array(off, dtype=np.int64),
                        np.concatenate(vals_list))
            return (np.empty(0, dtype=np.int64), np.array(off, dtype=np.int64),
                    np.empty(0, dtype=np.int64))

        ucols, uoff, uvals = csr([(g, qa, qb, False) for (g, qa, qb) in self.u_rows],
                                 False)
        scols, soff, svals = csr(self.s_rows, interreduce)
        colmap = np.full(ncols, -1, dtype=np.int64)
        free = np.nonzero(piv_of_col < 0)[0]
        colmap[free] = np.arange(len(free))
        nN = len(free)
        if nN == 0:
            return [] if not interreduce else [
                (np.empty(0, np.uint64), np.empty(0, np.uint64),
                 np.empty(0, np.int64)) for _ in self.s_rows]
        block = _reduce_srows(scols, soff, svals, ucols, uoff, uvals,
                              piv_of_col, colmap, nN, ncols, p)
        ncol0 = cols0[free]
        ncol1 = cols1[free]

        def row_to_poly(row):
            nz = np.nonzero(row)[0]
            return (ncol0[nz].copy(), ncol1[nz].copy(),
                    (row[nz] % p).astype(np.int64))

        if interreduce:
            return [row_to_poly(block[r] % p) for r in range(block.shape[0])]
        surviving = _dense_eliminate(block, p)
        return [row_to_poly(block[int(r)] % p) for r in surviving.tolist()]

    def _columns_narrow(self):
        keys = self._seen0
        k0, _, q0, _ = (np.uint64(x) for x in self.masks)
        d1 = _lane_degrees(keys & k0)
        d2 = _lane_degrees(keys & q0)
        # block degrevlex descending: block-1 degree desc, masked word asc
        # (smaller packed word = larger monomial), then block 2 likewise
        perm = np.lexsort((keys & q0, -d2, keys & k0, -d1))
        cols0 = keys[perm]
        cols1 = np.zeros(len(cols0), dtype=np.uint64)
        asc = keys  # unique and ascending from union1d
        inv = np.empty(len(keys), dtype=np.int64)
        inv[perm] = np.arange(len(keys))

        def lookup(m0, m1):
            pos = np.searchsorted(asc, m0)
            return inv[pos]

        return cols0, cols1, lookup

    def _columns_wide(self):
        keys = sorted(self._seen_wide, reverse=True,
                      key=lambda k: _order_key_int(k, *(int(x) for x in self.masks)))
        col_of = {k: i for i, k in enumerate(keys)}
        cols0 = np.array([k & ((1 << 64) - 1) for k in keys], dtype=np.uint64)
        cols1 = np.array([k >> 64 for k in keys], dtype=np.uint64)

        def lookup(m0, m1):
            return np.fromiter(
                (col_of[self._key(int(a), int(bb))]
                 for a, bb in zip(m0, m1)),
                dtype=np.int64, count=len(m0))

        return cols0, cols1, lookup


def _order_key_int(k: int, k0: int, k1: int, q0: int, q1: int):
    w0 = k & ((1 << 64) - 1)
    w1 = k >> 64
    d1 = _py_lanesum(w0 & k0) + _py_lanesum(w1 & k1)
    d2 = _py_lanesum(w0 & q0) + _py_lanesum(w1 & q1)
    big = (1 << 64) - 1
    return (d1, (big - (w1 & k1), big - (w0 & k0)), d2,
            (big - (w1 & q1), big - (w0 & q0)))
