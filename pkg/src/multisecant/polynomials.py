"""Sparse exact multivariate polynomials over QQ or GF(p).

A polynomial is a dict mapping exponent tuples to nonzero coefficients,
tied to a ``PolyRing`` context (variable names + coefficient field).
Values are immutable by convention: every operation returns a fresh
polynomial and nothing mutates ``terms`` after construction.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .fields import FieldError, field_from_tag


class ParseError(ValueError):
    """Syntax error in polynomial text, with position information."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text[max(0, pos - 10):pos + 10]!r}")
        self.pos = pos


class PolyRing:
    """Ring context: an ordered tuple of variable names over a field."""

    __slots__ = ("vars", "field", "_index")

    def __init__(self, varnames: Sequence[str], field):
        self.vars = tuple(varnames)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")
        self.field = field
        self._index = {v: i for i, v in enumerate(self.vars)}

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return MultiPoly(self, {(0,) * self.nvars: self.field.one()})

    def const(self, c) -> "MultiPoly":
        c = self.field.coerce(c)
        if self.field.is_zero(c):
            return self.zero()
        return MultiPoly(self, {(0,) * self.nvars: c})

    def var(self, i) -> "MultiPoly":
        if isinstance(i, str):
            i = self._index[i]
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): self.field.one()})

    def gens(self) -> list["MultiPoly"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], coeff=None) -> "MultiPoly":
        c = self.field.one() if coeff is None else self.field.coerce(coeff)
        if self.field.is_zero(c):
            return self.zero()
        return MultiPoly(self, {tuple(exps): c})

    def from_terms(self, terms: Mapping[tuple, object]) -> "MultiPoly":
        """Build from a monomial->coefficient mapping, normalizing zeros."""
        f = self.field
        clean = {}
        for m, c in terms.items():
            c = f.coerce(c)
            if not f.is_zero(c):
                if len(m) != self.nvars:
                    raise ValueError("exponent arity mismatch")
                clean[tuple(m)] = c
        return MultiPoly(self, clean)

    def parse(self, text: str) -> "MultiPoly":
        return _parse_poly(text, self)

    def random_poly(self, degree: int, rng, homogeneous: bool = True,
                    density: float = 1.0) -> "MultiPoly":
        """A seeded random polynomial of the given (top) degree."""
        terms = {}
        f = self.field
        for m in monomials_of_degree(self.nvars, degree):
            if density >= 1.0 or rng.random() < density:
                c = f.random(rng)
                if not f.is_zero(c):
                    terms[m] = c
        if not homogeneous:
            for d in range(degree):
                for m in monomials_of_degree(self.nvars, d):
                    if density >= 1.0 or rng.random() < density:
                        c = f.random(rng)
                        if not f.is_zero(c):
                            terms[m] = c
        p = MultiPoly(self, terms)
        if p.is_zero():
            # vanishing odds are negligible, but stay total
            return self.monomial((degree,) + (0,) * (self.nvars - 1))
        return p

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and other.vars == self.vars
                and other.field == self.field)

    def __hash__(self):
        return hash((self.vars, self.field))

    def __repr__(self):
        return f"{self.field}[{', '.join(self.vars)}]"


def monomials_of_degree(nvars: int, degree: int) -> Iterable[tuple]:
    """All exponent tuples of the given total degree, lexicographic."""
    if nvars == 1:
        yield (degree,)
        return
    for e in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - e):
            yield (e,) + rest


def monomial_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def degrevlex_key(m: tuple):
    """Sort key: larger key = larger monomial in degrevlex."""
    return (sum(m), tuple(-e for e in reversed(m)))


class MultiPoly:
    """Immutable sparse polynomial in a fixed ring context."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- predicates and views ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return -1
        return max(m[var] for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_component(self, d: int) -> "MultiPoly":
        return MultiPoly(self.ring, {m: c for m, c in self.terms.items() if sum(m) == d})

    def homogeneous_components(self) -> dict:
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(sum(m), {})[m] = c
        return {d: MultiPoly(self.ring, t) for d, t in sorted(out.items())}

    def coefficient_of(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.ring.field.zero())

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero())

    def variables_used(self) -> set:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.ring != other.ring:
            raise ValueError("ring mismatch")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = self.ring.const(other)
        self._check(other)
        f = self.ring.field
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = f.add(res[m], c) if m in res else c
            if f.is_zero(s):
                res.pop(m, None)
            else:
                res[m] = s
        return MultiPoly(self.ring, res)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        f = self.ring.field
        return MultiPoly(self.ring, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = self.ring.const(other)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return self.ring.const(other).__sub__(self)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        f = self.ring.field
        res: dict = {}
        if len(self.terms) > len(other.terms):
            a, b = other, self
        else:
            a, b = self, other
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = monomial_mul(m1, m2)
                c = f.mul(c1, c2)
                if m in res:
                    s = f.add(res[m], c)
                    if f.is_zero(s):
                        del res[m]
                    else:
                        res[m] = s
                else:
                    res[m] = c
        return MultiPoly(self.ring, res)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c) -> "MultiPoly":
        f = self.ring.field
        c = f.coerce(c)
        if f.is_zero(c):
            return self.ring.zero()
        return MultiPoly(self.ring, {m: f.mul(v, c) for m, v in self.terms.items()})

    def mul_monomial(self, exps: tuple, coeff=None) -> "MultiPoly":
        f = self.ring.field
        c = f.one() if coeff is None else f.coerce(coeff)
        if f.is_zero(c):
            return self.ring.zero()
        return MultiPoly(self.ring, {monomial_mul(m, exps): f.mul(v, c)
                                     for m, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = self.ring.const(other)
            except (FieldError, ValueError):
                return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- calculus and evaluation ----------------------------------------------

    def derivative(self, var: int) -> "MultiPoly":
        f = self.ring.field
        res = {}
        for m, c in self.terms.items():
            e = m[var]
            if e:
                nm = list(m)
                nm[var] = e - 1
                nc = f.mul(c, f.coerce(e))
                if not f.is_zero(nc):
                    key = tuple(nm)
                    if key in res:
                        nc = f.add(res[key], nc)
                    if f.is_zero(nc):
                        res.pop(key, None)
                    else:
                        res[key] = nc
        return MultiPoly(self.ring, res)

    def evaluate(self, point: Sequence):
        """Value at a full point (one field element per variable)."""
        f = self.ring.field
        pt = [f.coerce(x) for x in point]
        if len(pt) != self.ring.nvars:
            raise ValueError("point arity mismatch")
        total = f.zero()
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                for _ in range(e):
                    v = f.mul(v, pt[i])
            total = f.add(total, v)
        return total

    def substitute(self, images: Mapping[int, "MultiPoly"], target: PolyRing | None = None) -> "MultiPoly":
        """Substitute polynomials for variables.

        Every variable actually occurring must be mapped; images live in
        ``target`` (default: the ring of the first image).
        """
        if target is None:
            target = next(iter(images.values())).ring
        f = target.field
        cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i, e):
            key = (i, e)
            got = cache.get(key)
            if got is None:
                got = cache[key] = images[i] ** e
            return got

        total = target.zero()
        for m, c in self.terms.items():
            part = target.const(f.coerce(c) if self.ring.field == target.field else c)
            for i, e in enumerate(m):
                if e:
                    if i not in images:
                        raise ValueError(f"no image for variable {self.ring.vars[i]}")
                    part = part * power(i, e)
            total = total + part
        return total

    def map_coefficients(self, fn, target_ring: PolyRing) -> "MultiPoly":
        f = target_ring.field
        res = {}
        for m, c in self.terms.items():
            nc = fn(c)
            if not f.is_zero(nc):
                res[m] = nc
        return MultiPoly(target_ring, res)

    def reduce_mod(self, target_ring: PolyRing) -> "MultiPoly":
        """Image under QQ -> GF(p) for p-integral coefficients."""
        f = target_ring.field
        return self.map_coefficients(
            lambda c: f.from_quotient(c.numerator, c.denominator), target_ring)

    # -- leading data (degrevlex unless a groebner order says otherwise) ------

    def leading_monomial(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=degrevlex_key)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        f = self.ring.field
        inv = f.inv(self.leading_coefficient())
        return self.scale(inv)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: degrevlex_key(t[0]), reverse=True)

    # -- printing --------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        f = self.ring.field
        names = self.ring.vars
        chunks = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(m) if e)
            cs = f.to_str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if mono and cs == "1":
                body = mono
            elif mono:
                body = f"{cs}*{mono}"
            else:
                body = cs
            if not chunks:
                chunks.append(f"-{body}" if neg else body)
            else:
                chunks.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(chunks)

    def __repr__(self):
        return f"MultiPoly({self})"


# -- parsing -------------------------------------------------------------------


def _parse_poly(text: str, ring: PolyRing) -> MultiPoly:
    """Parse the artifact grammar: +/- separated products of coefficients
    and powers ``name^e``; coefficients are ``int`` or ``int/int``."""
    f = ring.field
    n = len(text)
    pos = 0
    total: dict = {}

    def skip_ws(p):
        while p < n and text[p].isspace():
            p += 1
        return p

    def parse_int(p):
        start = p
        while p < n and text[p].isdigit():
            p += 1
        if p == start:
            raise ParseError("expected integer", text, start)
        return int(text[start:p]), p

    def parse_name(p):
        start = p
        while p < n and (text[p].isalnum() or text[p] == "_"):
            p += 1
        return text[start:p], p

    pos = skip_ws(pos)
    if pos == n:
        raise ParseError("empty input", text, 0)
    first = True
    while pos < n:
        sign = 1
        pos = skip_ws(pos)
        if pos < n and text[pos] in "+-":
            if text[pos] == "-":
                sign = -1
            pos = skip_ws(pos + 1)
        elif not first:
            raise ParseError("expected '+' or '-'", text, pos)
        first = False
        # one term: factors joined by '*'
        coeff_num, coeff_den = 1, 1
        exps = [0] * ring.nvars
        saw_factor = False
        while True:
            pos = skip_ws(pos)
            if pos < n and text[pos].isdigit():
                num, pos = parse_int(pos)
                pos2 = skip_ws(pos)
                if pos2 < n and text[pos2] == "/":
                    den, pos = parse_int(skip_ws(pos2 + 1))
                    if den == 0:
                        raise ParseError("zero denominator", text, pos2)
                    coeff_den *= den
                coeff_num *= num
                saw_factor = True
            elif pos < n and (text[pos].isalpha() or text[pos] == "_"):
                name, pos = parse_name(pos)
                if name not in ring._index:
                    raise ParseError(f"unknown variable {name!r}", text, pos - len(name))
                e = 1
                pos2 = skip_ws(pos)
                if pos2 < n and text[pos2] == "^":
                    e, pos = parse_int(skip_ws(pos2 + 1))
                exps[ring._index[name]] += e
                saw_factor = True
            else:
                raise ParseError("expected coefficient or variable", text, pos)
            pos = skip_ws(pos)
            if pos < n and text[pos] == "*":
                pos += 1
                continue
            break
        if not saw_factor:
            raise ParseError("empty term", text, pos)
        try:
            c = f.from_quotient(sign * coeff_num, coeff_den)
        except FieldError as exc:
            raise ParseError(str(exc), text, pos) from exc
        key = tuple(exps)
        if key in total:
            c = f.add(total[key], c)
        if f.is_zero(c):
            total.pop(key, None)
        else:
            total[key] = c
        pos = skip_ws(pos)
    return MultiPoly(ring, total)


def parse_poly(text: str, ring: PolyRing) -> MultiPoly:
    """Module-level alias for the ring parser."""
    return _parse_poly(text, ring)


def ring_from_spec(varnames: Sequence[str], field_tag: str) -> PolyRing:
    return PolyRing(varnames, field_from_tag(field_tag))
