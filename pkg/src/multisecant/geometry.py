"""Points, lines, Grassmann charts, varieties, and per-line intersection.

Lines are spanned by two independent points; the cached Pluecker vector
(all 2x2 minors of the spanning matrix) is the coordinate-free identity
used for equality and the Pluecker-relation invariant. A Grassmann
chart presents nearby lines as the row space of [I_2 | A] in the
coordinates of an invertible frame, with the 2(n-1) entries of A as
affine chart coordinates.

The length of the scheme cut on a line is the degree of the gcd of the
restricted generators; this is exact whenever the stored generators cut
the variety scheme-theoretically, which corpus entries guarantee.
"""

from __future__ import annotations

import json
import random
from itertools import combinations
from typing import Sequence

from . import linalg
from .binforms import AllFormsZero, BinaryForm, gcd_binary_forms, univariate_roots
from .fields import field_from_tag
from .groebner import DEGREVLEX, Ideal, LEX, buchberger
from .polynomials import MultiPoly, PolyRing

INFINITE = float("inf")


class GeometryError(Exception):
    pass


class ProjectivePoint:
    """A point of P^n: nonzero coordinate vector up to scale."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords: Sequence):
        coords = [field.coerce(c) for c in coords]
        if all(field.is_zero(c) for c in coords):
            raise GeometryError("zero vector is not a projective point")
        self.field = field
        self.coords = coords

    @property
    def ambient(self) -> int:
        return len(self.coords) - 1

    def normalized(self) -> list:
        """Coordinates scaled so the first nonzero entry is 1."""
        f = self.field
        for c in self.coords:
            if not f.is_zero(c):
                inv = f.inv(c)
                return [f.mul(x, inv) for x in self.coords]
        raise GeometryError("zero vector")

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.field == other.field and self.normalized() == other.normalized()

    def __hash__(self):
        return hash((self.field, tuple(self.normalized())))

    def __repr__(self):
        return "[" + ", ".join(self.field.to_str(c) for c in self.coords) + "]"


class Line:
    """A line in P^n spanned by two independent points."""

    __slots__ = ("field", "points", "pluecker")

    def __init__(self, a: ProjectivePoint, b: ProjectivePoint):
        if a.field != b.field or a.ambient != b.ambient:
            raise GeometryError("spanning points incompatible")
        f = a.field
        self.field = f
        self.points = (a, b)
        plk = []
        u, v = a.coords, b.coords
        for i, j in combinations(range(len(u)), 2):
            plk.append(f.sub(f.mul(u[i], v[j]), f.mul(u[j], v[i])))
        if all(f.is_zero(c) for c in plk):
            raise GeometryError("spanning points are dependent")
        self.pluecker = plk

    @property
    def ambient(self) -> int:
        return self.points[0].ambient

    def point_at(self, s, t) -> ProjectivePoint:
        f = self.field
        u, v = self.points
        coords = [f.add(f.mul(f.coerce(s), x), f.mul(f.coerce(t), y))
                  for x, y in zip(u.coords, v.coords)]
        return ProjectivePoint(f, coords)

    def contains(self, p: ProjectivePoint) -> bool:
        rows = [self.points[0].coords, self.points[1].coords, p.coords]
        return linalg.rank(rows, self.field) == 2

    def pluecker_normalized(self) -> tuple:
        f = self.field
        for c in self.pluecker:
            if not f.is_zero(c):
                inv = f.inv(c)
                return tuple(f.mul(x, inv) for x in self.pluecker)
        raise GeometryError("degenerate line")

    def __eq__(self, other):
        if not isinstance(other, Line):
            return NotImplemented
        return (self.field == other.field
                and self.pluecker_normalized() == other.pluecker_normalized())

    def __hash__(self):
        return hash(self.pluecker_normalized())

    def pluecker_relations_hold(self) -> bool:
        """All quadratic Pluecker relations vanish exactly."""
        f = self.field
        n = self.ambient
        idx = {pair: k for k, pair in enumerate(combinations(range(n + 1), 2))}

        def p(i, j):
            if i == j:
                return f.zero()
            if i < j:
                return self.pluecker[idx[(i, j)]]
            return f.neg(self.pluecker[idx[(j, i)]])

        for quad in combinations(range(n + 1), 4):
            i, j, k, l = quad
            val = f.add(
                f.sub(f.mul(p(i, j), p(k, l)), f.mul(p(i, k), p(j, l))),
                f.mul(p(i, l), p(j, k)))
            if not f.is_zero(val):
                return False
        return True

    def __repr__(self):
        return f"Line({self.points[0]!r}, {self.points[1]!r})"


def line_from_equations(forms: Sequence[MultiPoly]) -> Line:
    """The line cut out by n-1 independent linear forms in P^n."""
    if not forms:
        raise GeometryError("need linear forms")
    ring = forms[0].ring
    f = ring.field
    rows = []
    for g in forms:
        if g.total_degree() != 1:
            raise GeometryError("line equations must be linear")
        row = [f.zero()] * ring.nvars
        for m, c in g.terms.items():
            row[list(m).index(1)] = c
        rows.append(row)
    ker = linalg.nullspace(rows, f)
    if len(ker) != 2:
        raise GeometryError(f"equations cut a subspace of dimension {len(ker) - 1}, not a line")
    return Line(ProjectivePoint(f, ker[0]), ProjectivePoint(f, ker[1]))


class GrassmannChart:
    """An affine chart of G(1, n): lines transverse to the span of the
    last n-1 frame columns, written as rowspace of [I_2 | A]."""

    __slots__ = ("ambient", "field", "frame", "ring")

    def __init__(self, ambient: int, field, frame=None, seed: int | None = None,
                 varnames: Sequence[str] | None = None):
        self.ambient = ambient
        self.field = field
        if frame is None:
            rng = random.Random(seed)
            frame = linalg.random_invertible(ambient + 1, field, rng)
        self.frame = frame
        k = ambient - 1
        if varnames is None:
            varnames = tuple(f"a{j + 1}" for j in range(k)) \
                + tuple(f"b{j + 1}" for j in range(k))
        self.ring = PolyRing(varnames, field)

    @property
    def nparams(self) -> int:
        return 2 * (self.ambient - 1)

    def spanning_images(self) -> tuple[list, list]:
        """Coordinates of the two spanning points of the generic chart
        line, as polynomials in the chart ring: frame * (1,0,a...) and
        frame * (0,1,b...)."""
        f = self.field
        k = self.ambient - 1
        a = [self.ring.var(j) for j in range(k)]
        b = [self.ring.var(k + j) for j in range(k)]
        u = []
        v = []
        for i in range(self.ambient + 1):
            pu = self.ring.const(self.frame[i][0])
            pv = self.ring.const(self.frame[i][1])
            for j in range(k):
                pu = pu + a[j].scale(self.frame[i][j + 2])
                pv = pv + b[j].scale(self.frame[i][j + 2])
            u.append(pu)
            v.append(pv)
        return u, v

    def line_at(self, params: Sequence) -> Line:
        f = self.field
        k = self.ambient - 1
        params = [f.coerce(x) for x in params]
        if len(params) != 2 * k:
            raise GeometryError("wrong number of chart parameters")
        cu = [f.one(), f.zero()] + params[:k]
        cv = [f.zero(), f.one()] + params[k:]
        u = linalg.mat_vec(self.frame, cu, f)
        v = linalg.mat_vec(self.frame, cv, f)
        return Line(ProjectivePoint(f, u), ProjectivePoint(f, v))

    def parameters_of(self, line: Line):
        """Chart coordinates of a line, or None when outside the chart."""
        f = self.field
        inv = linalg.invert(self.frame, f)
        rows = [linalg.mat_vec(inv, pt.coords, f) for pt in line.points]
        # normalize the 2 x (n+1) matrix so the left 2x2 block is I_2
        a, b = rows
        d = f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0]))
        if f.is_zero(d):
            return None
        dinv = f.inv(d)
        r1 = [f.mul(dinv, f.sub(f.mul(b[1], x), f.mul(a[1], y)))
              for x, y in zip(a, b)]
        r2 = [f.mul(dinv, f.sub(f.mul(a[0], y), f.mul(b[0], x)))
              for x, y in zip(a, b)]
        return r1[2:] + r2[2:]

    def contains(self, line: Line) -> bool:
        return self.parameters_of(line) is not None


class Variety:
    """A closed subscheme of P^n given by homogeneous generators, with
    an optional polynomial parametrization used for point sampling."""

    __slots__ = ("ambient", "ring", "ideal", "parametrization")

    def __init__(self, ambient: int, ideal: Ideal, parametrization=None):
        if ideal.ring.nvars != ambient + 1:
            raise GeometryError("ideal ring arity must be ambient + 1")
        for g in ideal.gens:
            if not g.is_homogeneous():
                raise GeometryError("generators must be homogeneous")
        self.ambient = ambient
        self.ring = ideal.ring
        self.ideal = ideal
        self.parametrization = parametrization
        if parametrization is not None:
            self._check_parametrization()

    @property
    def field(self):
        return self.ring.field

    def _check_parametrization(self):
        coords = self.parametrization
        images = {i: c for i, c in enumerate(coords)}
        for g in self.ideal.gens:
            if not g.substitute(images, coords[0].ring).is_zero():
                raise GeometryError("parametrization does not satisfy the generators")

    def degrees(self) -> list[int]:
        return [g.total_degree() for g in self.ideal.gens]

    def contains_point(self, p: ProjectivePoint) -> bool:
        return all(self.field.is_zero(g.evaluate(p.coords))
                   for g in self.ideal.gens)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        doc = {
            "ambient": self.ambient,
            "field": self.field.tag,
            "generators": [str(g) for g in self.ideal.gens],
        }
        if self.parametrization is not None:
            coords = self.parametrization
            doc["parametrization"] = {
                "params": coords[0].ring.nvars,
                "coords": [str(c) for c in coords],
            }
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Variety":
        field = field_from_tag(doc["field"])
        n = int(doc["ambient"])
        ring = PolyRing(tuple(f"x{i}" for i in range(n + 1)), field)
        gens = [ring.parse(s) for s in doc["generators"]]
        par = None
        if doc.get("parametrization"):
            k = int(doc["parametrization"]["params"])
            pring = PolyRing(tuple(f"t{i}" for i in range(k)), field)
            par = [pring.parse(s) for s in doc["parametrization"]["coords"]]
        return cls(n, Ideal(ring, gens), parametrization=par)

    def save(self, path: str):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1, sort_keys=True)

    @classmethod
    def load(cls, path: str) -> "Variety":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def __repr__(self):
        return (f"Variety(P^{self.ambient}, degrees {self.degrees()}, "
                f"{self.field})")


# -- restriction and secancy -------------------------------------------------


def restrict_to_line(f: MultiPoly, line: Line) -> BinaryForm:
    """The binary form f(s*A + t*B) for the line's spanning points A, B;
    the zero form of degree deg f when the line lies inside V(f)."""
    if not f.is_homogeneous():
        raise GeometryError("restriction needs a homogeneous input")
    d = f.total_degree()
    field = f.ring.field
    if d <= 0:
        return BinaryForm(field, max(d, 0), [f.constant_term()] if d == 0 else [])
    u, v = line.points
    coeffs = [field.zero()] * (d + 1)
    # expand each monomial as a product of linear forms in (s, t)
    for m, c in f.terms.items():
        # polynomial in s of degree d with binary-form coefficients
        acc = {0: c}
        for var, e in enumerate(m):
            for _ in range(e):
                nxt: dict = {}
                a = u.coords[var]
                b = v.coords[var]
                for k, val in acc.items():
                    if not field.is_zero(a):
                        nxt[k + 1] = field.add(nxt.get(k + 1, field.zero()),
                                               field.mul(val, a))
                    if not field.is_zero(b):
                        nxt[k] = field.add(nxt.get(k, field.zero()),
                                           field.mul(val, b))
                acc = nxt
        for k, val in acc.items():
            coeffs[k] = field.add(coeffs[k], val)
    return BinaryForm(field, d, coeffs)


def secant_length(X: Variety, line: Line):
    """Length of the scheme X cut on the line; INFINITE when contained."""
    restrictions = [restrict_to_line(g, line) for g in X.ideal.gens]
    try:
        return gcd_binary_forms(restrictions).degree
    except AllFormsZero:
        return INFINITE


def tangent_space(X: Variety, p: ProjectivePoint) -> list[MultiPoly]:
    """Linear forms cutting the embedded tangent space at p (the
    Jacobian rows evaluated at p), reduced to an independent set."""
    if not X.contains_point(p):
        raise GeometryError("point not on the variety")
    f = X.field
    rows = []
    for g in X.ideal.gens:
        rows.append([g.derivative(i).evaluate(p.coords)
                     for i in range(X.ambient + 1)])
    ech, pivots = linalg._echelon(rows, f, reduce_back=True)
    out = []
    for r, _ in zip(ech, pivots):
        terms = {}
        for i, c in enumerate(r):
            if not f.is_zero(c):
                e = [0] * X.ring.nvars
                e[i] = 1
                terms[tuple(e)] = c
        out.append(MultiPoly(X.ring, terms))
    return out


def jacobian_rank_at(X: Variety, p: ProjectivePoint) -> int:
    f = X.field
    rows = [[g.derivative(i).evaluate(p.coords) for i in range(X.ambient + 1)]
            for g in X.ideal.gens]
    return linalg.rank(rows, f)


def is_smooth_at(X: Variety, p: ProjectivePoint, codim: int) -> bool:
    return jacobian_rank_at(X, p) == codim


def random_point_on(X: Variety, seed: int, smooth_codim: int | None = None,
                    retries: int = 200) -> ProjectivePoint:
    """A seeded random point of X: via the parametrization when stored,
    else by slicing with random lines/planes over a finite field. With
    smooth_codim set, resample until the Jacobian rank matches."""
    rng = random.Random(seed)
    f = X.field
    for _ in range(retries):
        p = _sample_point(X, rng)
        if p is None:
            continue
        if smooth_codim is not None and not is_smooth_at(X, p, smooth_codim):
            continue
        return p
    raise GeometryError("no point found within the retry budget")


def _sample_point(X: Variety, rng):
    f = X.field
    if X.parametrization is not None:
        k = X.parametrization[0].ring.nvars
        for _ in range(50):
            vals = [f.random(rng) for _ in range(k)]
            coords = [c.evaluate(vals) for c in X.parametrization]
            if any(not f.is_zero(c) for c in coords):
                return ProjectivePoint(f, coords)
        return None
    if f.characteristic == 0:
        raise GeometryError("point sampling without a parametrization needs GF(p)")
    codim = len(X.ideal.gens)
    if codim == 1:
        # intersect with a random line and solve on it
        a = ProjectivePoint(f, [f.random(rng) for _ in range(X.ambient + 1)])
        b = ProjectivePoint(f, [f.random(rng) for _ in range(X.ambient + 1)])
        try:
            line = Line(a, b)
        except GeometryError:
            return None
        r = restrict_to_line(X.ideal.gens[0], line).dehomogenized()
        if not r:
            return None
        roots = univariate_roots(r, f)
        if not roots:
            return None
        s0 = roots[rng.randrange(len(roots))]
        return line.point_at(s0, f.one())
    # codimension >= 2: slice with a random plane and solve the 2d system
    return _sample_point_plane_slice(X, rng)


def _sample_point_plane_slice(X: Variety, rng):
    f = X.field
    n = X.ambient
    base = [[f.random(rng) for _ in range(n + 1)] for _ in range(3)]
    if linalg.rank(base, f) != 3:
        return None
    uv_ring = PolyRing(("u", "v"), f)
    u, v = uv_ring.var(0), uv_ring.var(1)
    images = {}
    for i in range(n + 1):
        img = uv_ring.const(base[0][i])
        img = img + u.scale(base[1][i]) + v.scale(base[2][i])
        images[i] = img
    gens2 = []
    for g in X.ideal.gens:
        h = g.substitute(images, uv_ring)
        if not h.is_zero():
            gens2.append(h)
    if not gens2:
        return None
    sols = _solve_affine_2d(Ideal(uv_ring, gens2))
    if not sols:
        return None
    u0, v0 = sols[rng.randrange(len(sols))]
    coords = [f.add(base[0][i], f.add(f.mul(u0, base[1][i]),
                                      f.mul(v0, base[2][i])))
              for i in range(n + 1)]
    if all(f.is_zero(c) for c in coords):
        return None
    return ProjectivePoint(f, coords)


def _solve_affine_2d(ideal: Ideal) -> list[tuple]:
    """All rational solutions of a zero-dimensional ideal in two
    variables, via a lex basis and back substitution."""
    f = ideal.ring.field
    gb = buchberger(ideal, LEX)
    if gb.is_unit() or not gb.polys:
        return []
    # univariate polynomial in the last variable
    last = [g for g in gb.polys
            if all(m[0] == 0 for m in g.terms)]
    if not last:
        return []
    uni = last[-1]
    coeffs = [f.zero()] * (uni.total_degree() + 1)
    for m, c in uni.terms.items():
        coeffs[m[1]] = c
    sols = []
    for v0 in univariate_roots(coeffs, f):
        # substitute and collect the univariate condition on u
        residual = []
        for g in gb.polys:
            acc: dict = {}
            for m, c in g.terms.items():
                val = c
                for _ in range(m[1]):
                    val = f.mul(val, v0)
                k = m[0]
                acc[k] = f.add(acc.get(k, f.zero()), val)
            res = [acc.get(k, f.zero()) for k in range(max(acc) + 1)]
            while res and f.is_zero(res[-1]):
                res.pop()
            if res:
                residual.append(res)
        if not residual:
            continue
        g0 = residual[0]
        from .binforms import poly_gcd
        for r in residual[1:]:
            g0 = poly_gcd(g0, r, f)
        if len(g0) == 1:
            continue
        for u0 in univariate_roots(g0, f):
            sols.append((u0, v0))
    return sols
