"""Reduced Groebner bases and the ideal-theoretic queries built on them.

Two computation paths sit behind ``buchberger``: a packed numba kernel
for prime fields in degrevlex/elimination orders (the production path,
see _engine.py) and a plain dict-based path that works for any field
and order (the reference; also the only path for lex and for QQ). Both
run the same pair strategy: normal selection by lcm degree with the
Gebauer-Moeller criteria.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

import numpy as np

from . import _engine, _f4
from .fields import PrimeField
from .polynomials import (MultiPoly, PolyRing, monomial_div, monomial_divides,
                          monomial_lcm, monomial_mul)


class BudgetExceeded(Exception):
    """The pair budget ran out before the basis was complete."""

    def __init__(self, message, pairs_processed=0):
        super().__init__(message)
        self.pairs_processed = pairs_processed


DEFAULT_MAX_PAIRS = 1_000_000


class MonomialOrder:
    """A global monomial order: degrevlex, lex, or a two-block elimination
    order (degrevlex within each block, first block dominant)."""

    __slots__ = ("kind", "split")

    def __init__(self, kind: str, split: int | None = None):
        if kind not in ("degrevlex", "lex", "block"):
            raise ValueError(f"unknown order {kind!r}")
        if kind == "block" and (split is None or split < 0):
            raise ValueError("block order needs a split index")
        self.kind = kind
        self.split = split

    def key(self, m: tuple):
        """Sort key; larger key = larger monomial."""
        if self.kind == "degrevlex":
            return (sum(m), tuple(-e for e in reversed(m)))
        if self.kind == "lex":
            return m
        k = self.split
        head, tail = m[:k], m[k:]
        return (sum(head), tuple(-e for e in reversed(head)),
                sum(tail), tuple(-e for e in reversed(tail)))

    @property
    def tag(self) -> str:
        return self.kind if self.kind != "block" else f"block:{self.split}"

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and other.kind == self.kind
                and other.split == self.split)

    def __hash__(self):
        return hash((self.kind, self.split))

    def __repr__(self):
        return f"MonomialOrder({self.tag})"


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


def block_order(split: int) -> MonomialOrder:
    return MonomialOrder("block", split)


class Ideal:
    """Generator list in a fixed ring, with write-once cached bases."""

    __slots__ = ("ring", "gens", "_gb_cache")

    def __init__(self, ring: PolyRing, gens: Iterable[MultiPoly]):
        self.ring = ring
        clean = []
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator ring mismatch")
            if not g.is_zero():
                clean.append(g)
        self.gens = tuple(clean)
        self._gb_cache: dict = {}

    def groebner(self, order: MonomialOrder = DEGREVLEX,
                 max_pairs: int | None = None) -> "GroebnerBasis":
        got = self._gb_cache.get(order.tag)
        if got is None:
            got = buchberger(self, order, max_pairs=max_pairs)
            self._gb_cache[order.tag] = got
        return got

    def dimension(self, max_pairs: int | None = None) -> int:
        return ideal_dimension(self, max_pairs=max_pairs)

    def contains(self, f: MultiPoly, max_pairs: int | None = None) -> bool:
        return normal_form(f, self.groebner(max_pairs=max_pairs)).is_zero()

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise ValueError("ring mismatch")
        return Ideal(self.ring, self.gens + other.gens)

    def __repr__(self):
        return f"Ideal({len(self.gens)} gens in {self.ring})"


class GroebnerBasis:
    """A reduced Groebner basis: auto-reduced, monic, deterministic order."""

    __slots__ = ("ring", "order", "polys")

    def __init__(self, ring: PolyRing, order: MonomialOrder,
                 polys: Sequence[MultiPoly]):
        self.ring = ring
        self.order = order
        self.polys = tuple(polys)

    def leading_monomials(self) -> list[tuple]:
        return [max(g.terms, key=self.order.key) for g in self.polys]

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant() \
            and not self.polys[0].is_zero()

    def normal_form(self, f: MultiPoly) -> MultiPoly:
        return normal_form(f, self)

    def contains(self, f: MultiPoly) -> bool:
        return self.normal_form(f).is_zero()

    def audit_s_polynomials(self) -> bool:
        """Re-check the full Buchberger criterion (for small instances)."""
        for i in range(len(self.polys)):
            for j in range(i):
                s = _s_polynomial(self.polys[i], self.polys[j], self.order)
                if not normal_form(s, self).is_zero():
                    return False
        return True

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __repr__(self):
        return f"GroebnerBasis({len(self.polys)} polys, {self.order.tag})"


# -- reference path ------------------------------------------------------------


def _leading(f: MultiPoly, order: MonomialOrder):
    m = max(f.terms, key=order.key)
    return m, f.terms[m]


def _nf_reference(f: MultiPoly, basis: Sequence[MultiPoly],
                  order: MonomialOrder) -> MultiPoly:
    if not basis:
        return f
    field = f.ring.field
    lts = [_leading(g, order) for g in basis]
    remainder: dict = {}
    work = dict(f.terms)
    key = order.key
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        hit = -1
        for i, (lm, _) in enumerate(lts):
            if monomial_divides(lm, m):
                hit = i
                break
        if hit < 0:
            remainder[m] = c
            continue
        lm, lc = lts[hit]
        q = monomial_div(m, lm)
        scale = field.div(c, lc)
        for gm, gc in basis[hit].terms.items():
            if gm == lm:
                continue
            tm = monomial_mul(gm, q)
            delta = field.neg(field.mul(gc, scale))
            if tm in work:
                s = field.add(work[tm], delta)
                if field.is_zero(s):
                    del work[tm]
                else:
                    work[tm] = s
            else:
                work[tm] = delta
    return MultiPoly(f.ring, remainder)


def _s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    field = f.ring.field
    fm, fc = _leading(f, order)
    gm, gc = _leading(g, order)
    l = monomial_lcm(fm, gm)
    uf = f.mul_monomial(monomial_div(l, fm), field.inv(fc))
    ug = g.mul_monomial(monomial_div(l, gm), field.inv(gc))
    return uf - ug


def _gm_update(lts: dict, alive: set, pairs: dict, h: int,
               lcm_fn, divides_fn, degree_fn, product_fn):
    """Gebauer-Moeller pair update; mutates alive/pairs, returns new pairs.

    lts maps basis index -> leading monomial (abstract); pairs maps
    (i, j) with i < j to the pair's lcm. New pairs involving h are
    filtered by the M/F criteria, coprime pairs dropped (B criterion),
    and stale old pairs pruned.
    """
    mh = lts[h]
    cands = []
    for g in sorted(alive):
        if g == h:
            continue
        cands.append((g, lcm_fn(lts[g], mh)))
    kept = []
    for g, l in sorted(cands, key=lambda t: (degree_fn(t[1]), t[0])):
        strict = False
        for g2, l2 in cands:
            if g2 != g and l2 != l and divides_fn(l2, l):
                strict = True
                break
        if strict:
            continue
        if any(l2 == l for _, l2 in kept):
            continue
        kept.append((g, l))
    new_pairs = [(min(g, h), max(g, h), l) for g, l in kept
                 if l != product_fn(lts[g], mh)]
    for (i, j), l in list(pairs.items()):
        if divides_fn(mh, l) and lcm_fn(lts[i], mh) != l and lcm_fn(lts[j], mh) != l:
            del pairs[(i, j)]
    for g in list(alive):
        if g != h and divides_fn(mh, lts[g]):
            alive.discard(g)
    alive.add(h)
    for (i, j, l) in new_pairs:
        pairs[(i, j)] = l
    return new_pairs


def _buchberger_reference(gens: Sequence[MultiPoly], ring: PolyRing,
                          order: MonomialOrder, max_pairs: int) -> list[MultiPoly]:
    field = ring.field
    basis: list[MultiPoly] = []
    lts: dict = {}
    alive: set = set()
    pairs: dict = {}
    heap: list = []

    def insert(f: MultiPoly):
        f = f.scale(field.inv(_leading(f, order)[1]))
        idx = len(basis)
        basis.append(f)
        lts[idx] = _leading(f, order)[0]
        new = _gm_update(lts, alive, pairs, idx,
                         monomial_lcm, monomial_divides, sum, monomial_mul)
        for (i, j, l) in new:
            heapq.heappush(heap, (sum(l), i, j, l))

    for g in sorted(gens, key=lambda f: (f.total_degree(), len(f.terms))):
        r = _nf_reference(g, basis, order)
        if not r.is_zero():
            insert(r)

    processed = 0
    while heap:
        d, i, j, l = heapq.heappop(heap)
        if pairs.pop((i, j), None) is None:
            continue
        processed += 1
        if processed > max_pairs:
            raise BudgetExceeded(
                f"pair budget {max_pairs} exceeded", pairs_processed=processed)
        s = _s_polynomial(basis[i], basis[j], order)
        r = _nf_reference(s, basis, order)
        if not r.is_zero():
            insert(r)
    return _interreduce_reference(basis, order)


def _interreduce_reference(basis: list[MultiPoly], order: MonomialOrder) -> list[MultiPoly]:
    if not basis:
        return []
    field = basis[0].ring.field
    lts = [_leading(g, order)[0] for g in basis]
    keep = []
    for i, m in enumerate(lts):
        redundant = False
        for j, m2 in enumerate(lts):
            if j != i and monomial_divides(m2, m):
                if m2 != m or j < i:
                    redundant = True
                    break
        if not redundant:
            keep.append(i)
    reduced = []
    kept_polys = [basis[i] for i in keep]
    for i, g in enumerate(kept_polys):
        others = kept_polys[:i] + kept_polys[i + 1:]
        r = _nf_reference(g, others, order) if others else g
        reduced.append(r.scale(field.inv(_leading(r, order)[1])))
    reduced.sort(key=lambda f: order.key(_leading(f, order)[0]), reverse=True)
    return reduced


# -- packed fast path ----------------------------------------------------------

_G64 = np.uint64(0x8080808080808080)


def _divides_vec(t0: int, t1: int, M0: np.ndarray, M1: np.ndarray) -> np.ndarray:
    """Does the packed monomial (t0, t1) divide each entry of (M0, M1)."""
    a = (((M0 | _G64) - np.uint64(t0)) & _G64) == _G64
    b = (((M1 | _G64) - np.uint64(t1)) & _G64) == _G64
    return a & b


def _dividedby_vec(M0: int, M1: int, T0: np.ndarray, T1: np.ndarray) -> np.ndarray:
    """Does each entry of (T0, T1) divide the packed monomial (M0, M1)."""
    a = (((np.uint64(M0) | _G64) - T0) & _G64) == _G64
    b = (((np.uint64(M1) | _G64) - T1) & _G64) == _G64
    return a & b


def _lcm_vec(A0: np.ndarray, A1: np.ndarray, b0: int, b1: int):
    """Lane-wise max of each packed array entry with a fixed monomial."""
    out0 = np.maximum(A0.view(np.uint8).reshape(-1, 8),
                      np.frombuffer(np.uint64(b0).tobytes(), dtype=np.uint8))
    out1 = np.maximum(A1.view(np.uint8).reshape(-1, 8),
                      np.frombuffer(np.uint64(b1).tobytes(), dtype=np.uint8))
    return (out0.reshape(-1, 8).copy().view(np.uint64).ravel(),
            out1.reshape(-1, 8).copy().view(np.uint64).ravel())


def _lane_deg_vec(W0: np.ndarray, W1: np.ndarray) -> np.ndarray:
    d0 = W0.view(np.uint8).reshape(-1, 8).sum(axis=1)
    d1 = W1.view(np.uint8).reshape(-1, 8).sum(axis=1)
    return (d0 + d1).astype(np.int64)


class _PackedPairQueue:
    """Gebauer-Moeller pair bookkeeping, vectorized over packed words."""

    def __init__(self):
        self.pairs: dict = {}   # (i, j) -> lcm (l0, l1)
        self.heap: list = []

    def pop_batch(self):
        """All surviving pairs of minimal lcm degree, or []."""
        batch = []
        d = None
        while self.heap and (d is None or self.heap[0][0] == d):
            dd, i, j = heapq.heappop(self.heap)
            l = self.pairs.pop((i, j), None)
            if l is None:
                continue
            d = dd
            batch.append((i, j, l))
        return batch

    def update(self, basis: "_engine.PackedBasis", alive: np.ndarray, h: int):
        lt0 = basis.lt0
        lt1 = basis.lt1
        mh0, mh1 = int(lt0[h]), int(lt1[h])
        # prune old pairs: lcm strictly absorbed by the new leading term
        if self.pairs:
            keys = list(self.pairs.keys())
            n = len(keys)
            L0 = np.fromiter((self.pairs[k][0] for k in keys), np.uint64, n)
            L1 = np.fromiter((self.pairs[k][1] for k in keys), np.uint64, n)
            dv = _divides_vec(mh0, mh1, L0, L1)
            if dv.any():
                ii = np.fromiter((k[0] for k in keys), np.int64, n)
                jj = np.fromiter((k[1] for k in keys), np.int64, n)
                li0, li1 = _lcm_vec(lt0[ii], lt1[ii], mh0, mh1)
                lj0, lj1 = _lcm_vec(lt0[jj], lt1[jj], mh0, mh1)
                cond = dv & ~((li0 == L0) & (li1 == L1)) \
                          & ~((lj0 == L0) & (lj1 == L1))
                for t in np.nonzero(cond)[0].tolist():
                    del self.pairs[keys[t]]
        # candidates against the current alive set
        cand = np.nonzero(alive[:h])[0]
        if len(cand):
            C0, C1 = _lcm_vec(lt0[cand], lt1[cand], mh0, mh1)
            cdeg = _lane_deg_vec(C0, C1)
            # M criterion: drop candidates strictly dominated by another.
            # A proper divisor has strictly smaller degree, so only test
            # each degree class against the block of smaller-degree lcms.
            order = np.lexsort((cand, cdeg))
            C0s = C0[order]
            C1s = C1[order]
            degs = cdeg[order]
            keep_sorted = np.ones(len(order), dtype=bool)
            s = 0
            while s < len(order):
                e = s
                while e < len(order) and degs[e] == degs[s]:
                    e += 1
                if s > 0:
                    a0 = (((C0s[s:e, None] | _G64) - C0s[None, :s]) & _G64) == _G64
                    a1 = (((C1s[s:e, None] | _G64) - C1s[None, :s]) & _G64) == _G64
                    keep_sorted[s:e] = ~np.any(a0 & a1, axis=1)
                s = e
            # F criterion: one representative per lcm value
            seen_lcm: set = set()
            survivors = []
            for pos in range(len(order)):
                if not keep_sorted[pos]:
                    continue
                t = int(order[pos])
                key = (int(C0s[pos]), int(C1s[pos]))
                if key in seen_lcm:
                    continue
                seen_lcm.add(key)
                survivors.append(t)
            # B criterion: drop pairs with coprime leading terms
            for t in survivors:
                g = int(cand[t])
                prod0 = int(lt0[g]) + mh0
                prod1 = int(lt1[g]) + mh1
                if prod0 == int(C0[t]) and prod1 == int(C1[t]):
                    continue
                i, j = min(g, h), max(g, h)
                self.pairs[(i, j)] = (int(C0[t]), int(C1[t]))
                heapq.heappush(self.heap, (int(cdeg[t]), i, j))
        # retire basis elements whose head the new one absorbs
        if h:
            stale = np.nonzero(alive[:h] & _divides_vec(
                mh0, mh1, lt0[:h], lt1[:h]))[0]
            alive[stale] = False
        alive[h] = True


def _poly_to_packed(f: MultiPoly, perm: Sequence[int], masks):
    exps = np.array([[m[v] for v in perm] for m in f.terms], dtype=np.int64)
    m0, m1 = _engine.pack_exponents(exps)
    c = np.array([f.terms[m] for m in f.terms], dtype=np.int64)
    return _engine.sort_packed_poly(m0, m1, c, masks)

def _packed_to_poly(m0, m1, c, ring: PolyRing, perm: Sequence[int]) -> MultiPoly:
    exps = _engine.unpack_exponents(m0, m1, len(perm))
    terms = {}
    inv = {pos: v for pos, v in enumerate(perm)}
    for row, coeff in zip(exps, c):
        m = [0] * ring.nvars
        for pos, e in enumerate(row):
            m[inv[pos]] = int(e)
        terms[tuple(m)] = int(coeff)
    return ring.from_terms(terms)


def _buchberger_packed(gens: Sequence[MultiPoly], ring: PolyRing,
                       order: MonomialOrder, max_pairs: int) -> list[MultiPoly]:
    p = ring.field.p
    n = ring.nvars
    split = n if order.kind == "degrevlex" else order.split
    perm = list(range(n))
    masks = _engine.block_masks(n, split)
    wide = n > 8
    basis = _engine.PackedBasis(n, p, masks)
    queue = _PackedPairQueue()
    alive = np.zeros(1 << 10, dtype=bool)

    def insert(m0, m1, c):
        nonlocal alive
        idx = basis.n
        basis.append(m0, m1, c)
        if idx >= len(alive):
            bigger = np.zeros(2 * len(alive), dtype=bool)
            bigger[:len(alive)] = alive
            alive = bigger
        queue.update(basis, alive, idx)

    key0, key1, key2, key3 = (int(x) for x in masks)
    packed = [_poly_to_packed(g, perm, masks) for g in gens]
    packed.sort(key=lambda t: (_engine._order_key(
        int(t[0][0]), int(t[1][0]), key0, key1, key2, key3), len(t[0])))
    for (m0, m1, c) in packed:
        rm0, rm1, rc = basis.normal_form(m0, m1, c)
        if len(rm0):
            insert(rm0, rm1, rc)

    processed = 0
    while True:
        batch = queue.pop_batch()
        if not batch:
            break
        processed += len(batch)
        if processed > max_pairs:
            raise BudgetExceeded(
                f"pair budget {max_pairs} exceeded", pairs_processed=processed)
        mat = _f4.F4Matrix(basis, masks, wide)
        for (i, j, l) in batch:
            mat.add_pair(i, j, l)
        mat.preprocess()
        new = mat.eliminate()
        new.sort(key=lambda t: _engine._order_key(
            int(t[0][0]), int(t[1][0]), key0, key1, key2, key3))
        for (m0, m1, c) in new:
            insert(m0, m1, c)

    return _interreduce_packed(basis, ring, perm, masks, wide)


def _interreduce_packed(basis: "_engine.PackedBasis", ring: PolyRing,
                        perm, masks, wide: bool) -> list[MultiPoly]:
    n = basis.n
    if n == 0:
        return []
    keep = []
    for i in range(n):
        redundant = False
        for j in range(n):
            if j == i:
                continue
            if _engine.divides_packed(int(basis.lt0[j]), int(basis.lt1[j]),
                                      int(basis.lt0[i]), int(basis.lt1[i])):
                same = (basis.lt0[j] == basis.lt0[i]
                        and basis.lt1[j] == basis.lt1[i])
                if not same or j < i:
                    redundant = True
                    break
        if not redundant:
            keep.append(i)
    minimal = _engine.PackedBasis(basis.nvars, basis.p, masks)
    for i in keep:
        m0, m1, c = basis.poly(i)
        minimal.append(m0, m1, c)
    # one shared batch tail-reduces every element against the others
    mat = _f4.F4Matrix(minimal, masks, wide)
    for i in range(minimal.n):
        mat.add_tail_row(i)
    mat.preprocess()
    tails = mat.eliminate(interreduce=True)
    out = []
    for i in range(minimal.n):
        t0, t1, tc = tails[i]
        m0 = np.concatenate(([minimal.lt0[i]], t0)).astype(np.uint64)
        m1 = np.concatenate(([minimal.lt1[i]], t1)).astype(np.uint64)
        c = np.concatenate(([1], tc)).astype(np.int64)
        out.append((m0, m1, c))
    key0, key1, key2, key3 = (int(x) for x in masks)
    out.sort(key=lambda t: _engine._order_key(int(t[0][0]), int(t[1][0]),
                                              key0, key1, key2, key3),
             reverse=True)
    return [_packed_to_poly(m0, m1, c, ring, perm) for (m0, m1, c) in out]


# -- public operations -----------------------------------------------------


def _can_use_packed(ring: PolyRing, order: MonomialOrder) -> bool:
    return (isinstance(ring.field, PrimeField)
            and ring.field.p < (1 << 30)
            and ring.nvars <= _engine.MAX_VARS
            and order.kind in ("degrevlex", "block"))


def buchberger(ideal: Ideal, order: MonomialOrder = DEGREVLEX,
               max_pairs: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis; deterministic for fixed input and order."""
    if max_pairs is None:
        max_pairs = DEFAULT_MAX_PAIRS
    ring = ideal.ring
    gens = [g for g in ideal.gens if not g.is_zero()]
    if not gens:
        return GroebnerBasis(ring, order, [])
    if _can_use_packed(ring, order):
        try:
            polys = _buchberger_packed(gens, ring, order, max_pairs)
        except _engine.EngineOverflow:
            polys = _buchberger_reference(gens, ring, order, max_pairs)
    else:
        polys = _buchberger_reference(gens, ring, order, max_pairs)
    return GroebnerBasis(ring, order, polys)


def normal_form(f: MultiPoly, gb: GroebnerBasis) -> MultiPoly:
    """The unique remainder of f modulo the reduced basis."""
    if f.ring != gb.ring:
        raise ValueError("ring mismatch")
    if not gb.polys:
        return f
    return _nf_reference(f, gb.polys, gb.order)


def ideal_dimension(ideal: Ideal, max_pairs: int | None = None) -> int:
    """Krull dimension of the affine scheme; -1 for the unit ideal."""
    gb = ideal.groebner(DEGREVLEX, max_pairs=max_pairs)
    if gb.is_unit():
        return -1
    if not gb.polys:
        return ideal.ring.nvars
    lts = gb.leading_monomials()
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lts]
    if frozenset() in supports:
        return -1
    n = ideal.ring.nvars
    best = 0

    def extend(chosen: frozenset, i: int):
        nonlocal best
        if len(chosen) + (n - i) <= best:
            return
        if i == n:
            if len(chosen) > best:
                best = len(chosen)
            return
        trial = chosen | {i}
        if not any(s <= trial for s in supports):
            extend(trial, i + 1)
        extend(chosen, i + 1)

    extend(frozenset(), 0)
    return best


def quotient_degree(ideal: Ideal, max_pairs: int | None = None) -> int:
    """Vector-space dimension of the quotient ring (solutions with
    multiplicity) for a zero-dimensional ideal."""
    dim = ideal_dimension(ideal, max_pairs=max_pairs)
    if dim > 0:
        raise ValueError(f"ideal has dimension {dim}, not zero-dimensional")
    if dim == -1:
        return 0
    gb = ideal.groebner(DEGREVLEX, max_pairs=max_pairs)
    lts = gb.leading_monomials()
    n = ideal.ring.nvars
    seen = {(0,) * n}
    stack = [(0,) * n]
    count = 0
    while stack:
        m = stack.pop()
        count += 1
        if count > 5_000_000:
            raise BudgetExceeded("standard-monomial enumeration exploded")
        for i in range(n):
            m2 = m[:i] + (m[i] + 1,) + m[i + 1:]
            if m2 in seen:
                continue
            if any(monomial_divides(lt, m2) for lt in lts):
                continue
            seen.add(m2)
            stack.append(m2)
    return count


def elimination_ideal(ideal: Ideal, keep: Sequence[int],
                      max_pairs: int | None = None) -> Ideal:
    """Generators of the ideal's intersection with the subring on ``keep``
    (variable indices), via a block order; result lives in the same ring."""
    ring = ideal.ring
    keep_set = set(keep)
    drop = [i for i in range(ring.nvars) if i not in keep_set]
    if not drop:
        gb = ideal.groebner(DEGREVLEX, max_pairs=max_pairs)
        return Ideal(ring, list(gb.polys))
    perm = drop + [i for i in range(ring.nvars) if i in keep_set]
    perm_ring = PolyRing([ring.vars[i] for i in perm], ring.field)
    fwd = {old: new for new, old in enumerate(perm)}

    def permute(f: MultiPoly, target: PolyRing, mapping) -> MultiPoly:
        terms = {}
        for m, c in f.terms.items():
            nm = [0] * len(m)
            for old, e in enumerate(m):
                nm[mapping[old]] = e
            terms[tuple(nm)] = c
        return MultiPoly(target, terms)

    pgens = [permute(g, perm_ring, fwd) for g in ideal.gens]
    gb = buchberger(Ideal(perm_ring, pgens), block_order(len(drop)),
                    max_pairs=max_pairs)
    back = {new: old for old, new in fwd.items()}
    out = []
    ndrop = len(drop)
    for g in gb.polys:
        if all(all(m[i] == 0 for i in range(ndrop)) for m in g.terms):
            out.append(permute(g, ring, back))
    return Ideal(ring, out)


def saturation(ideal: Ideal, f: MultiPoly, max_pairs: int | None = None) -> Ideal:
    """(ideal : f^infinity) via the extra-variable construction."""
    if f.is_zero():
        raise ValueError("cannot saturate by zero")
    ring = ideal.ring
    aux = "sat0"
    while aux in ring.vars:
        aux += "_"
    big = PolyRing((aux,) + ring.vars, ring.field)

    def lift(g: MultiPoly) -> MultiPoly:
        return MultiPoly(big, {(0,) + m: c for m, c in g.terms.items()})

    t = big.var(0)
    gens = [lift(g) for g in ideal.gens]
    gens.append(t * lift(f) - big.one())
    gb = buchberger(Ideal(big, gens), block_order(1), max_pairs=max_pairs)
    out = []
    for g in gb.polys:
        if all(m[0] == 0 for m in g.terms):
            out.append(MultiPoly(ring, {m[1:]: c for m, c in g.terms.items()}))
    return Ideal(ring, out)
