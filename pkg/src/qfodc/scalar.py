"""Exact arithmetic in the field Q(p) of rational functions over the integers.

Every quantity in this package is a Scalar: a quotient num/den of integer
Laurent polynomials in the formal parameter p, kept in canonical form.  The
deformation parameter of the quantum group is q = p^N for the A series (so
that the N-th root z = p^{-1} of q^{-1} is an honest field element) and
q = p for the C series.

Internally num is a sparse Laurent polynomial (exponents may be negative)
and den is an ordinary polynomial with nonzero constant term and positive
leading coefficient, coprime to num.  Arithmetic is exact; there is no
floating point anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd as _igcd


# ---------------------------------------------------------------------------
# sparse integer (Laurent) polynomial helpers: dicts {exponent: coefficient}
# ---------------------------------------------------------------------------

def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        elif e in out:
            del out[e]
    return out


def _pneg(a):
    return {e: -c for e, c in a.items()}

def _psub(a, b):
    return _padd(a, _pneg(b))


def _pmul(a, b):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            elif e in out:
                del out[e]
    return out


def _pscale(a, k):
    if k == 0:
        return {}
    return {e: c * k for e, c in a.items()}


def _pshift(a, k):
    if k == 0:
        return dict(a)
    return {e + k: c for e, c in a.items()}


def _pcontent(a):
    g = 0
    for c in a.values():
        g = _igcd(g, abs(c))
        if g == 1:
            return 1
    return g


def _pval(a):
    return min(a) if a else 0


def _pdeg(a):
    return max(a) if a else 0


def _to_dense(a):
    """Laurent dict with min exponent 0 -> ascending dense list."""
    n = _pdeg(a)
    out = [0] * (n + 1)
    for e, c in a.items():
        out[e] = c
    return out


def _to_dict(lst):
    return {e: c for e, c in enumerate(lst) if c}


def _dense_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _dense_prem(a, b):
    """Pseudo-remainder of dense int polys (ascending), lc(b)^k * a mod b."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        da, la = len(a) - 1, a[-1]
        a = [c * lb for c in a]
        for i in range(db + 1):
            a[da - db + i] -= la * b[i]
        _dense_trim(a)
    return a


def _dense_primitive(a):
    g = 0
    for c in a:
        g = _igcd(g, abs(c))
        if g == 1:
            return list(a)
    if g <= 1:
        return list(a)
    return [c // g for c in a]


def _poly_gcd(a, b):
    """Gcd of two polynomial dicts (min exponent 0), primitive PRS over Z.

    Returns a primitive gcd with positive leading coefficient.
    """
    da, db = _to_dense(a), _to_dense(b)
    _dense_trim(da)
    _dense_trim(db)
    if not da:
        return _to_dict(_dense_primitive(db))
    if not db:
        return _to_dict(_dense_primitive(da))
    if len(da) < len(db):
        da, db = db, da
    da, db = _dense_primitive(da), _dense_primitive(db)
    while db:
        r = _dense_prem(da, db)
        da, db = db, _dense_primitive(r)
    if da[-1] < 0:
        da = [-c for c in da]
    return _to_dict(da)


def _poly_exact_div(a, b):
    """Exact division a / b of polynomial dicts; raises if not exact."""
    da, db = _to_dense(a), _to_dense(b)
    _dense_trim(da)
    _dense_trim(db)
    if not db:
        raise ZeroDivisionError("polynomial division by zero")
    if not da:
        return {}
    out = [0] * (len(da) - len(db) + 1)
    lb = db[-1]
    while len(da) >= len(db):
        la = da[-1]
        if la % lb:
            raise ArithmeticError("inexact polynomial division")
        k = len(da) - len(db)
        coef = la // lb
        out[k] = coef
        for i in range(len(db)):
            da[k + i] -= coef * db[i]
        _dense_trim(da)
        if not da:
            break
    if da:
        raise ArithmeticError("inexact polynomial division")
    return _to_dict(out)


_ONE_POLY = {0: 1}


def _reduce(num, den):
    """Bring a num/den pair of Laurent dicts to canonical form."""
    num = {e: c for e, c in num.items() if c}
    den = {e: c for e, c in den.items() if c}
    if not den:
        raise ZeroDivisionError("scalar with zero denominator")
    if not num:
        return {}, {0: 1}
    # move all p powers into num: den becomes a poly with den(0) != 0
    dv = _pval(den)
    if dv:
        den = _pshift(den, -dv)
        num = _pshift(num, -dv)
    if len(den) == 1:
        d0 = den[0]
        if d0 < 0:
            d0 = -d0
            num = _pneg(num)
        if d0 != 1:
            g = _igcd(_pcontent(num), d0)
            if g > 1:
                num = {e: c // g for e, c in num.items()}
                d0 //= g
        return num, {0: d0}
    # general fraction: integer content, then polynomial gcd
    cn, cd = _pcontent(num), _pcontent(den)
    g = _igcd(cn, cd)
    if g > 1:
        num = {e: c // g for e, c in num.items()}
        den = {e: c // g for e, c in den.items()}
    nv = _pval(num)
    g = _poly_gcd(_pshift(num, -nv), den)
    if len(g) > 1 or g.get(0, 1) != 1:
        den = _poly_exact_div(den, g)
        num = _pshift(_poly_exact_div(_pshift(num, -nv), g), nv)
    if den[_pdeg(den)] < 0:
        den = _pneg(den)
        num = _pneg(num)
    return num, den


class Scalar:
    """An element of Q(p), immutable and always canonical."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _canonical=False):
        if den is None:
            den = {0: 1}
        if not _canonical:
            num, den = _reduce(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_int(k):
        return Scalar({0: k} if k else {}, {0: 1}, _canonical=True)

    @staticmethod
    def from_fraction(a, b):
        return Scalar({0: a} if a else {}, {0: b})

    @staticmethod
    def p_power(k):
        """The monomial p^k (k may be negative)."""
        return Scalar({k: 1}, {0: 1}, _canonical=True)

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == {0: 1} and self.den == {0: 1}

    def is_laurent(self):
        """True when the denominator is 1 (a Laurent polynomial in p)."""
        return self.den == {0: 1}

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.den == other.den:
            num = _padd(self.num, other.num)
            if self.den == {0: 1}:
                return Scalar(num, {0: 1}, _canonical=True)
            return Scalar(num, dict(self.den))
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return Scalar(num, _pmul(self.den, other.den))

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.den == other.den:
            num = _psub(self.num, other.num)
            if self.den == {0: 1}:
                return Scalar(num, {0: 1}, _canonical=True)
            return Scalar(num, dict(self.den))
        num = _psub(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return Scalar(num, _pmul(self.den, other.den))

    def __neg__(self):
        return Scalar(_pneg(self.num), dict(self.den), _canonical=True)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if self.den == {0: 1} and other.den == {0: 1}:
            return Scalar(_pmul(self.num, other.num), {0: 1}, _canonical=True)
        return Scalar(_pmul(self.num, other.num), _pmul(self.den, other.den))

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inversion of zero scalar")
        return Scalar(dict(self.den), dict(self.num))

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k):
        if k == 0:
            return ONE
        base = self if k > 0 else self.inverse()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((frozenset(self.num.items()), frozenset(self.den.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- evaluation (used by the probabilistic rank pre-screen) -------------

    def eval_mod(self, point, prime):
        """Evaluate at p = point modulo prime; raises ZeroDivisionError if
        the denominator vanishes at the point."""
        n = 0
        for e, c in self.num.items():
            n = (n + c * pow(point, e % (prime - 1) if e < 0 else e, prime)) % prime
        d = 0
        for e, c in self.den.items():
            d = (d + c * pow(point, e, prime)) % prime
        return n * pow(d, -1, prime) % prime

    # -- rendering -----------------------------------------------------------

    def __str__(self):
        num, den = self.num, self.den
        v = _pval(num)
        if v < 0:
            num = _pshift(num, -v)
            den = _pshift(den, -v)
        ns = _poly_str(num)
        if den == {0: 1}:
            return ns
        ds = _poly_str(den)
        if len(num) > 1:
            ns = "(" + ns + ")"
        de = _pdeg(den)
        if len(den) > 1 or (de > 0 and den[de] != 1):
            ds = "(" + ds + ")"
        return ns + "/" + ds

    def __repr__(self):
        return f"Scalar({self})"


def _poly_str(a):
    if not a:
        return "0"
    parts = []
    for e in sorted(a, reverse=True):
        c = a[e]
        if e == 0:
            t = str(abs(c))
        else:
            t = "p" if e == 1 else f"p^{e}"
            if abs(c) != 1:
                t = str(abs(c)) + t
        if not parts:
            parts.append(("-" if c < 0 else "") + t)
        else:
            parts.append(("-" if c < 0 else "+") + t)
    return "".join(parts)


_TERM_RE = re.compile(r"^([+-]?)(\d*)(?:\*?(p)(?:\^([+-]?\d+))?)?$")


def _parse_poly(s):
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        depth = 0
        for i, ch in enumerate(s):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0 and i < len(s) - 1:
                break
        else:
            s = s[1:-1]
    s = s.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    # split into signed terms
    terms = re.findall(r"[+-]?[^+-]+", s)
    out = {}
    for t in terms:
        m = _TERM_RE.match(t)
        if not m:
            raise ValueError(f"cannot parse term {t!r}")
        sign, coef, pvar, exp = m.groups()
        if not coef and not pvar:
            raise ValueError(f"cannot parse term {t!r}")
        c = int(coef) if coef else 1
        if sign == "-":
            c = -c
        e = 0
        if pvar:
            e = int(exp) if exp is not None else 1
        out = _padd(out, {e: c})
    return out


def parse_scalar(s):
    """Parse the canonical text rendering back into a Scalar (exact)."""
    s = s.strip().replace(" ", "")
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return Scalar(_parse_poly(s[:i]), _parse_poly(s[i + 1:]))
    return Scalar(_parse_poly(s))


ZERO = Scalar.from_int(0)
ONE = Scalar.from_int(1)
MINUS_ONE = Scalar.from_int(-1)


# ---------------------------------------------------------------------------
# field configuration
# ---------------------------------------------------------------------------

class UnsupportedConfigError(ValueError):
    pass


@dataclass(frozen=True)
class FieldConfig:
    """Ground data of one quantum group: series, matrix size and the fixed
    root z used to normalize the universal r-form.

    Series A is SL_q(N) with q = p^N and z = p^{-1} (so z^N = q^{-1} holds
    identically in Q(p)); series C is Sp_q(2n) with q = p and z in {1, -1}.
    """

    series: str
    N: int
    root_exponent: int
    z_choice: int = 1

    def __post_init__(self):
        if self.series == "A":
            if self.N < 2:
                raise UnsupportedConfigError("series A needs N >= 2")
            if self.root_exponent != self.N:
                raise UnsupportedConfigError("series A uses q = p^N")
        elif self.series == "C":
            if self.N < 2 or self.N % 2:
                raise UnsupportedConfigError("series C needs N = 2n, n >= 1")
            if self.root_exponent != 1:
                raise UnsupportedConfigError("series C uses q = p")
            if self.z_choice not in (1, -1):
                raise UnsupportedConfigError("series C needs z in {1, -1}")
        else:
            raise UnsupportedConfigError(f"unknown series {self.series!r}")

    @staticmethod
    def sl(N):
        return FieldConfig("A", N, N)

    @staticmethod
    def sp(n, z_choice=1):
        return FieldConfig("C", 2 * n, 1, z_choice)

    @property
    def rank(self):
        """Rank n of the underlying simple Lie algebra."""
        return self.N - 1 if self.series == "A" else self.N // 2

    @property
    def zeta_order(self):
        """Admissible zeta satisfy zeta^order = 1."""
        return self.N if self.series == "A" else 2

    @property
    def q(self):
        return Scalar.p_power(self.root_exponent)

    @property
    def z(self):
        if self.series == "A":
            return Scalar.p_power(-1)
        return ONE if self.z_choice == 1 else MINUS_ONE

    def d_i(self, i):
        """Symmetrizing integers of the Cartan matrix (1-based index)."""
        if not 1 <= i <= self.rank:
            raise ValueError(f"simple root index {i} out of range")
        if self.series == "A":
            return 1
        return 2 if i == self.rank else 1

    def q_i(self, i):
        return self.q ** self.d_i(i)

    def cartan(self):
        """Cartan matrix as a list of rows (integers)."""
        n = self.rank
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = 2
            if i + 1 < n:
                a[i][i + 1] = -1
                a[i + 1][i] = -1
        if self.series == "C" and n >= 2:
            # long simple root alpha_n: a_{n-1,n} = -2 in the convention
            # with a_{ij} = 2(alpha_i,alpha_j)/(alpha_i,alpha_i)
            a[n - 1][n - 2] = -1
            a[n - 2][n - 1] = -2
        return a

    def __str__(self):
        if self.series == "A":
            return f"SL_q({self.N})"
        return f"Sp_q({self.N})"


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------

def q_int(m, base):
    """The symmetric q-integer (base^m - base^{-m}) / (base - base^{-1})."""
    if base.is_zero() or base.is_one() or base == MINUS_ONE:
        raise ValueError("q-integer base must differ from 0, 1, -1")
    if m < 0:
        return -q_int(-m, base)
    out = ZERO
    inv = base.inverse()
    term = base ** (m - 1) if m else ZERO
    step = inv * inv
    for _ in range(m):
        out = out + term
        term = term * step
    return out


def q_factorial(m, base):
    if m < 0:
        raise ValueError("q-factorial of a negative integer")
    out = ONE
    for k in range(2, m + 1):
        out = out * q_int(k, base)
    return out


def q_binomial(m, k, base):
    """Bracketed binomial [m]!/([k]![m-k]!); a Laurent polynomial in base."""
    if k < 0 or m < 0 or k > m:
        raise ValueError("q-binomial needs 0 <= k <= m")
    num = ONE
    for i in range(1, k + 1):
        num = num * q_int(m - k + i, base)
    return num / q_factorial(k, base)
