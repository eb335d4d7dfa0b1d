"""Binary forms in (s, t), subresultants, gcds, and root finding.

A BinaryForm carries its declared degree explicitly, so the zero form
of degree d stays distinguishable (needed when a hypersurface equation
restricts to zero on a line). coeffs[i] is the coefficient of
s^i t^(d-i).

Principal subresultant coefficients are computed by fraction-free
(Bareiss) elimination of the Sylvester submatrices, the matrix form of
the subresultant remainder sequence, so intermediate integers stay
small over QQ; the values are the Sylvester-submatrix determinants by
construction.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import PrimeField, RationalField
from .linalg import det


class AllFormsZero(Exception):
    """Every input form vanished; for restrictions this means the line
    lies inside the variety."""


class BinaryForm:
    __slots__ = ("field", "degree", "coeffs")

    def __init__(self, field, degree: int, coeffs):
        coeffs = [field.coerce(c) for c in coeffs]
        if len(coeffs) != degree + 1:
            raise ValueError("coefficient vector length must be degree + 1")
        self.field = field
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def zero(cls, field, degree: int) -> "BinaryForm":
        return cls(field, degree, [field.zero()] * (degree + 1))

    def is_zero(self) -> bool:
        return all(self.field.is_zero(c) for c in self.coeffs)

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if other.degree != self.degree or other.field != self.field:
            raise ValueError("degree or field mismatch")
        f = self.field
        return BinaryForm(f, self.degree,
                          [f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c) -> "BinaryForm":
        f = self.field
        c = f.coerce(c)
        return BinaryForm(f, self.degree, [f.mul(a, c) for a in self.coeffs])

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        f = self.field
        d = self.degree + other.degree
        out = [f.zero()] * (d + 1)
        for i, a in enumerate(self.coeffs):
            if f.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return BinaryForm(f, d, out)

    def __eq__(self, other):
        return (isinstance(other, BinaryForm) and other.field == self.field
                and other.degree == self.degree and other.coeffs == self.coeffs)

    def evaluate(self, s0, t0):
        f = self.field
        s0, t0 = f.coerce(s0), f.coerce(t0)
        acc = f.zero()
        sp = [f.one()]
        tp = [f.one()]
        for _ in range(self.degree):
            sp.append(f.mul(sp[-1], s0))
            tp.append(f.mul(tp[-1], t0))
        for i, c in enumerate(self.coeffs):
            acc = f.add(acc, f.mul(c, f.mul(sp[i], tp[self.degree - i])))
        return acc

    def s_valuation(self) -> int:
        """Multiplicity of the root [0:1] (power of s dividing)."""
        for i, c in enumerate(self.coeffs):
            if not self.field.is_zero(c):
                return i
        raise ValueError("zero form has no valuation")

    def t_valuation(self) -> int:
        """Multiplicity of the root [1:0] (power of t dividing)."""
        for i in range(self.degree, -1, -1):
            if not self.field.is_zero(self.coeffs[i]):
                return self.degree - i
        raise ValueError("zero form has no valuation")

    def dehomogenized(self) -> list:
        """Coefficients of f(x, 1) = sum coeffs[i] x^i, trimmed."""
        return poly_trim(list(self.coeffs), self.field)

    def monic(self) -> "BinaryForm":
        f = self.field
        for i in range(self.degree, -1, -1):
            if not f.is_zero(self.coeffs[i]):
                inv = f.inv(self.coeffs[i])
                return self.scale(inv)
        return self

    def actual_degree(self) -> int:
        """Degree as a form: declared degree, or -1 when zero."""
        return -1 if self.is_zero() else self.degree

    def __str__(self):
        f = self.field
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if f.is_zero(c):
                continue
            j = self.degree - i
            mono = "*".join((["s"] if i == 1 else [f"s^{i}"] if i else [])
                            + (["t"] if j == 1 else [f"t^{j}"] if j else []))
            cs = f.to_str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def __repr__(self):
        return f"BinaryForm({self})"


# -- dense univariate helpers over a field -------------------------------------


def poly_trim(c: list, field) -> list:
    while c and field.is_zero(c[-1]):
        c.pop()
    return c


def poly_deg(c: list) -> int:
    return len(c) - 1


def poly_divmod(a: list, b: list, field):
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    a = list(a)
    q = [field.zero()] * max(0, len(a) - len(b) + 1)
    inv = field.inv(b[-1])
    while len(a) >= len(b) and a:
        if field.is_zero(a[-1]):
            a.pop()
            continue
        k = len(a) - len(b)
        f = field.mul(a[-1], inv)
        q[k] = f
        for i in range(len(b)):
            a[k + i] = field.sub(a[k + i], field.mul(f, b[i]))
        a.pop()
    return poly_trim(q, field), poly_trim(a, field)


def poly_gcd(a: list, b: list, field) -> list:
    a, b = poly_trim(list(a), field), poly_trim(list(b), field)
    while b:
        _, r = poly_divmod(a, b, field)
        a, b = b, r
    if a:
        inv = field.inv(a[-1])
        a = [field.mul(x, inv) for x in a]
    return a


def poly_mul(a: list, b: list, field) -> list:
    if not a or not b:
        return []
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if field.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return poly_trim(out, field)


def poly_powmod(base: list, e: int, mod: list, field) -> list:
    result = [field.one()]
    base = poly_divmod(base, mod, field)[1]
    while e:
        if e & 1:
            result = poly_divmod(poly_mul(result, base, field), mod, field)[1]
        base = poly_divmod(poly_mul(base, base, field), mod, field)[1]
        e >>= 1
    return result


# -- subresultants ---------------------------------------------------------------


def subresultant_sequence(f: BinaryForm | list, g: BinaryForm | list,
                          field=None) -> list:
    """Principal subresultant coefficients sres_0 .. sres_{min(m,n)-1}.

    Inputs are dehomogenized (univariate coefficient lists) or binary
    forms, in which case their dehomogenizations at t = 1 are used; m, n
    are the actual degrees. The smallest index with a nonzero value is
    deg gcd(f, g).
    """
    if isinstance(f, BinaryForm):
        field = f.field
        f = f.dehomogenized()
    if isinstance(g, BinaryForm):
        field = g.field
        g = g.dehomogenized()
    if field is None:
        raise ValueError("field required for coefficient-list input")
    f = poly_trim(list(f), field)
    g = poly_trim(list(g), field)
    if not f and not g:
        raise AllFormsZero("both inputs are zero")
    if not f or not g:
        return []
    m, n = poly_deg(f), poly_deg(g)
    out = []
    for j in range(min(m, n)):
        out.append(_sylvester_subdet(f, g, m, n, j, field))
    return out


def _sylvester_subdet(f, g, m, n, j, field):
    """Determinant of the j-th Sylvester submatrix, size m + n - 2j."""
    size = m + n - 2 * j
    top = m + n - j - 1  # highest power represented by column 0
    rows = []
    for r in range(n - j):
        # x^(n-j-1-r) * f
        shift = n - j - 1 - r
        row = [field.zero()] * size
        for i, c in enumerate(f):
            power = i + shift
            col = top - power
            if 0 <= col < size:
                row[col] = c
        rows.append(row)
    for r in range(m - j):
        shift = m - j - 1 - r
        row = [field.zero()] * size
        for i, c in enumerate(g):
            power = i + shift
            col = top - power
            if 0 <= col < size:
                row[col] = c
        rows.append(row)
    if isinstance(field, RationalField):
        return _bareiss_det(rows)
    return det(rows, field)


def _bareiss_det(rows):
    """Fraction-free determinant for rational (integral) input."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    # scale rows to integers first
    m = []
    scale = Fraction(1)
    for r in rows:
        lcm = 1
        for x in r:
            lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
        scale /= lcm
        m.append([int(x * lcm) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return Fraction(0)
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for jj in range(k + 1, n):
                m[i][jj] = (m[i][jj] * m[k][k] - m[i][k] * m[k][jj]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * scale * m[n - 1][n - 1]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def resultant(f: BinaryForm, g: BinaryForm):
    """Resultant of the dehomogenizations (actual degrees)."""
    field = f.field
    fc, gc = f.dehomogenized(), g.dehomogenized()
    if not fc or not gc:
        return field.zero()
    m, n = poly_deg(fc), poly_deg(gc)
    if m == 0 and n == 0:
        return field.one()
    if m == 0:
        return _pow(field, fc[0], n)
    if n == 0:
        return _pow(field, gc[0], m)
    return _sylvester_subdet(fc, gc, m, n, 0, field)


def _pow(field, a, e):
    acc = field.one()
    for _ in range(e):
        acc = field.mul(acc, a)
    return acc


def gcd_degree(f: BinaryForm, g: BinaryForm) -> int:
    """Degree of the projective gcd of two binary forms."""
    return gcd_binary_forms([f, g]).degree


def gcd_binary_forms(forms) -> BinaryForm:
    """Monic gcd of binary forms (projective: s- and t-power factors
    included). Raises AllFormsZero when every input vanishes."""
    forms = list(forms)
    if not forms:
        raise ValueError("need at least one form")
    field = forms[0].field
    nonzero = [f for f in forms if not f.is_zero()]
    if not nonzero:
        raise AllFormsZero("all forms are zero")
    sv = min(f.s_valuation() for f in nonzero)
    tv = min(f.t_valuation() for f in nonzero)
    # strip the common s^sv t^tv factor and gcd the dehomogenized cores
    cores = []
    for f in nonzero:
        c = f.coeffs[f.s_valuation():]
        core = poly_trim(list(c), field)
        cores.append(core)
    g = cores[0]
    for c in cores[1:]:
        g = poly_gcd(g, c, field)
        if poly_deg(g) == 0:
            break
    d = poly_deg(g) + sv + tv
    coeffs = [field.zero()] * (d + 1)
    for i, c in enumerate(g):
        coeffs[sv + i] = c
    return BinaryForm(field, d, coeffs).monic()


# -- roots ----------------------------------------------------------------------


def univariate_roots(coeffs: list, field) -> list:
    """Distinct roots in the field of a univariate polynomial
    (coefficient list, ascending). Over GF(p) uses x^p - x splitting;
    over QQ only degrees <= 2 are supported (enough for focal loci)."""
    c = poly_trim(list(coeffs), field)
    if not c:
        raise ValueError("zero polynomial")
    if poly_deg(c) == 0:
        return []
    if isinstance(field, PrimeField):
        return _roots_gfp(c, field)
    return _roots_qq(c, field)


def _roots_qq(c, field):
    d = poly_deg(c)
    if d == 1:
        return [field.div(field.neg(c[0]), c[1])]
    if d == 2:
        a, b, cc = c[2], c[1], c[0]
        disc = b * b - 4 * a * cc
        if disc < 0:
            return []
        num = disc.numerator * disc.denominator
        root = _isqrt(num)
        if root * root != num:
            return []
        sq = Fraction(root, disc.denominator)
        out = [(-b + sq) / (2 * a), (-b - sq) / (2 * a)]
        return sorted(set(out))
    raise NotImplementedError("rational roots implemented through degree 2")


def _isqrt(n: int) -> int:
    if n < 0:
        return -1
    x = int(n ** 0.5)
    while x * x > n:
        x -= 1
    while (x + 1) * (x + 1) <= n:
        x += 1
    return x


def _roots_gfp(c, field):
    p = field.p
    # gcd with x^p - x isolates the product of distinct linear factors
    xp = poly_powmod([field.zero(), field.one()], p, c, field)
    base = list(xp)
    while len(base) < 2:
        base.append(field.zero())
    base[1] = field.sub(base[1], field.one())
    lin = poly_gcd(poly_trim(base, field), c, field)
    roots = []
    stack = [lin]
    state = 0x9E3779B97F4A7C15
    while stack:
        g = stack.pop()
        d = poly_deg(g)
        if d <= 0:
            continue
        if d == 1:
            roots.append(field.div(field.neg(g[0]), g[1]))
            continue
        # random shift equal-degree splitting (all factors linear)
        state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
        delta = state % p
        shifted = [field.add(field.zero(), delta), field.one()]
        h = poly_powmod(shifted, (p - 1) // 2, g, field)
        h = list(h)
        if not h:
            h = [field.zero()]
        h[0] = field.sub(h[0], field.one())
        f1 = poly_gcd(poly_trim(h, field), g, field) if poly_trim(list(h), field) else g
        if 0 < poly_deg(f1) < d:
            f2, _ = poly_divmod(g, f1, field)
            stack.append(f1)
            stack.append(f2)
        else:
            stack.append(g)
    return sorted(roots)


def binary_form_roots(f: BinaryForm):
    """Projective roots of a nonzero binary form over its base field.

    Returns (roots, irreducible_part): roots is a list of
    ((s0, t0), multiplicity) pairs normalized to t0 = 1 or [1:0]; the
    leftover factor (rootless over the base field) is returned as a
    monic BinaryForm, or None when the form splits completely.
    """
    field = f.field
    if f.is_zero():
        raise ValueError("zero form has every point as a root")
    out = []
    sv = f.s_valuation()
    tv = f.t_valuation()
    if sv:
        out.append(((field.zero(), field.one()), sv))
    if tv:
        out.append(((field.one(), field.zero()), tv))
    rem = poly_trim(list(f.coeffs[sv:len(f.coeffs) - tv]), field)
    if poly_deg(rem) <= 0:
        return out, None
    for r in univariate_roots(rem, field):
        mult = 0
        while True:
            q, rr = poly_divmod(rem, [field.neg(r), field.one()], field)
            if rr:
                break
            mult += 1
            rem = q
        out.append(((r, field.one()), mult))
    if poly_deg(rem) > 0:
        inv = field.inv(rem[-1])
        bf = BinaryForm(field, poly_deg(rem), [field.mul(x, inv) for x in rem])
        return out, bf
    return out, None
