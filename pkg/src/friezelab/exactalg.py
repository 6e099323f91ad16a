"""Exact arithmetic over multivariate polynomials and rational functions.

Values live in Q(u0, u1, ..., uN).  A polynomial is a sparse dict mapping
exponent tuples to nonzero integer coefficients; exponent tuples are stored
with trailing zeros stripped, so a monomial has one canonical key no matter
how many variables its neighbours mention.  Variable index i renders as
``u<i>``.

The term order is graded lexicographic: higher total degree first, ties
broken by comparing exponent tuples left to right (at equal degree a
u1-heavy monomial sorts above a u2-heavy one).  Canonical printing, leading
coefficients and sign normalisation all use this order.

Rational functions are kept fully reduced: numerator and denominator are
coprime in Z[u], their integer contents are coprime, and the denominator's
leading coefficient is positive.  Equality is structural equality of the
canonical forms.  Everything here is immutable after construction and pure,
so concurrent use needs no locking.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd, isqrt
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Monomial",
    "Polynomial",
    "RationalFunction",
    "rf_canonicalize",
    "rf_arith",
    "poly_sqrt",
    "poly_gcd",
    "laurent_decompose",
    "evaluate",
    "parse_polynomial",
    "parse_rational",
]


# ---------------------------------------------------------------------------
# exponent-tuple helpers (internal representation of monomials)
# ---------------------------------------------------------------------------

def _estrip(exps):
    """Drop trailing zeros so equal monomials share one key."""
    n = len(exps)
    while n and exps[n - 1] == 0:
        n -= 1
    return tuple(exps[:n])


def _emul(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, e in enumerate(b):
        out[i] += e
    return tuple(out)


def _ediv(a, b):
    """a / b componentwise, or None when b does not divide a."""
    if len(b) > len(a):
        return None
    out = list(a)
    for i, e in enumerate(b):
        out[i] -= e
        if out[i] < 0:
            return None
    return _estrip(out)


def _ekey(e):
    # graded lex sort key; valid across stripped tuples of different widths
    return (sum(e), e)


def _lead(terms):
    """Leading (exponents, coefficient) in graded lex order."""
    e = max(terms, key=_ekey)
    return e, terms[e]


# ---------------------------------------------------------------------------
# raw dict arithmetic (shared by Polynomial and the gcd machinery)
# ---------------------------------------------------------------------------

def _dict_add(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            del out[e]
    return out


def _dict_sub(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) - c
        if s:
            out[e] = s
        else:
            del out[e]
    return out


def _dict_mul(a, b):
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = _emul(ea, eb)
            s = get(e, 0) + ca * cb
            if s:
                out[e] = s
            elif e in out:
                del out[e]
    return out


def _dict_scale(a, c):
    if c == 0:
        return {}
    return {e: k * c for e, k in a.items()}


def _dict_content(a):
    g = 0
    for c in a.values():
        g = _int_gcd(g, c)
        if g == 1:
            break
    return g


def _dict_exact_div(a, b):
    """Quotient a/b over Z[u], or None when the division is not exact."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return {}
    eb, cb = _lead(b)
    rem = dict(a)
    quo = {}
    while rem:
        er, cr = _lead(rem)
        eq = _ediv(er, eb)
        if eq is None or cr % cb:
            return None
        cq = cr // cb
        quo[eq] = cq
        for e, c in b.items():
            key = _emul(eq, e)
            s = rem.get(key, 0) - cq * c
            if s:
                rem[key] = s
            else:
                del rem[key]
    return quo


# ---------------------------------------------------------------------------
# multivariate gcd: content extraction + primitive pseudo-remainder sequence
# ---------------------------------------------------------------------------

def _mono_content(a):
    """Componentwise min of all exponent tuples (the monomial content)."""
    it = iter(a)
    first = next(it)
    width = len(first)
    mins = list(first)
    for e in it:
        if len(e) < width:
            width = len(e)
            del mins[width:]
        for i in range(width):
            if e[i] < mins[i]:
                mins[i] = e[i]
    return _estrip(mins)


def _mono_shift_down(a, m):
    if not m:
        return dict(a)
    return {_ediv(e, m): c for e, c in a.items()}


def _max_var(a):
    v = -1
    for e in a:
        if len(e) - 1 > v:
            v = len(e) - 1
    return v


def _deg_in(a, v):
    d = 0
    for e in a:
        if len(e) > v and e[v] > d:
            d = e[v]
    return d


def _coeffs_in(a, v):
    """Split a by the degree of variable v: {deg: coefficient-dict}."""
    out = {}
    for e, c in a.items():
        d = e[v] if len(e) > v else 0
        rest = list(e)
        if len(rest) > v:
            rest[v] = 0
        out.setdefault(d, {})[_estrip(rest)] = c
    return out


def _join_var(split, v):
    out = {}
    for d, coeff in split.items():
        if d == 0:
            for e, c in coeff.items():
                out[e] = c
            continue
        for e, c in coeff.items():
            ee = list(e) + [0] * (v + 1 - len(e))
            ee[v] = d
            out[_estrip(ee)] = c
    return out


def _prem(a, b, v):
    """Pseudo-remainder of a by b with respect to variable v."""
    db = _deg_in(b, v)
    # leading v-coefficient of b as a polynomial in the other variables
    lcb = _coeffs_in(b, v)[db]
    rem = dict(a)
    while rem:
        dr = _deg_in(rem, v)
        if dr < db:
            break
        sr = _coeffs_in(rem, v)
        lcr = sr[dr]
        # rem = lcb*rem - lcr * x_v^(dr-db) * b
        shift = [0] * (v + 1)
        shift[v] = dr - db
        shift = _estrip(shift)
        t = {_emul(e, shift): c for e, c in _dict_mul(lcr, b).items()}
        rem = _dict_sub(_dict_mul(lcb, rem), t)
    return rem


def _gcd_many(polys):
    g = {}
    for p in polys:
        g = _gcd_dict(g, p)
        if len(g) == 1 and () in g and abs(g[()]) == 1:
            break
    return g


def _normalize_sign(a):
    if a and _lead(a)[1] < 0:
        return _dict_scale(a, -1)
    return a


def _gcd_dict(a, b):
    """Gcd over Z[u] with positive leading coefficient (content included)."""
    if not a:
        return _normalize_sign(dict(b))
    if not b:
        return _normalize_sign(dict(a))
    ca, cb = _dict_content(a), _dict_content(b)
    ma, mb = _mono_content(a), _mono_content(b)
    aa = _mono_shift_down({e: c // ca for e, c in a.items()}, ma)
    bb = _mono_shift_down({e: c // cb for e, c in b.items()}, mb)
    gc = _int_gcd(ca, cb)
    gm = _estrip([min(x, y) for x, y in zip(ma, mb)])
    core = _gcd_primitive(aa, bb)
    out = _dict_scale({_emul(e, gm): c for e, c in core.items()}, gc)
    return _normalize_sign(out)


def _pp_wrt(r, v):
    """Strip integer, monomial, and v-coefficient content from a remainder."""
    c = _dict_content(r)
    if c > 1:
        r = {e: k // c for e, k in r.items()}
    mc = _mono_content(r)
    if mc:
        r = _mono_shift_down(r, mc)
    rc = _gcd_many(list(_coeffs_in(r, v).values()))
    if not (len(rc) == 1 and rc.get(()) == 1):
        r = _dict_exact_div(r, rc)
    return r


def _gcd_primitive(a, b):
    """Gcd of two primitive, monomial-content-free polynomials."""
    if a == b:
        return dict(a)
    if (() in a and len(a) == 1) or (() in b and len(b) == 1):
        return {(): 1}
    if _dict_exact_div(a, b) is not None:
        return _normalize_sign(dict(b))
    if _dict_exact_div(b, a) is not None:
        return _normalize_sign(dict(a))
    v = max(_max_var(a), _max_var(b))
    da, db = _deg_in(a, v), _deg_in(b, v)
    if da == 0:
        return _gcd_dict(a, _gcd_many(list(_coeffs_in(b, v).values())))
    if db == 0:
        return _gcd_dict(b, _gcd_many(list(_coeffs_in(a, v).values())))
    conta = _gcd_many(list(_coeffs_in(a, v).values()))
    contb = _gcd_many(list(_coeffs_in(b, v).values()))
    r0 = _dict_exact_div(a, conta)
    r1 = _dict_exact_div(b, contb)
    if _deg_in(r0, v) < _deg_in(r1, v):
        r0, r1 = r1, r0
    while r1:
        r = _prem(r0, r1, v)
        if r:
            r = _pp_wrt(r, v)
        r0, r1 = r1, r
    core = _normalize_sign(r0)
    # cheap insurance against a subtle PRS bug corrupting canonical forms
    if _dict_exact_div(a, core) is None or _dict_exact_div(b, core) is None:
        raise ArithmeticError("internal gcd error")  # pragma: no cover
    return _dict_mul(core, _gcd_dict(conta, contb))


# ---------------------------------------------------------------------------
# public polynomial type
# ---------------------------------------------------------------------------

class Monomial:
    """A monomial in the u-variables, viewed as an exponent map."""

    __slots__ = ("_exps",)

    def __init__(self, exponents):
        if isinstance(exponents, Monomial):
            self._exps = exponents._exps
        elif isinstance(exponents, tuple):
            self._exps = _estrip(exponents)
        else:
            width = max(exponents, default=-1) + 1
            buf = [0] * width
            for i, e in exponents.items():
                if i < 0 or e < 0:
                    raise ValueError("variable indices and exponents must be nonnegative")
                buf[i] = e
            self._exps = _estrip(buf)

    @property
    def exponents(self) -> dict[int, int]:
        return {i: e for i, e in enumerate(self._exps) if e}

    def as_tuple(self) -> tuple[int, ...]:
        return self._exps

    def degree(self) -> int:
        return sum(self._exps)

    def is_one(self) -> bool:
        return not self._exps

    def as_polynomial(self) -> Polynomial:
        return Polynomial({self._exps: 1})

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._exps == other._exps

    def __hash__(self):
        return hash(self._exps)

    def __str__(self):
        if not self._exps:
            return "1"
        return "*".join(
            f"u{i}" if e == 1 else f"u{i}^{e}" for i, e in enumerate(self._exps) if e
        )

    def __repr__(self):
        return f"Monomial({self!s})"


class Polynomial:
    """Sparse multivariate polynomial with arbitrary-precision int coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict | None = None):
        cleaned = {}
        if terms:
            for e, c in terms.items():
                if c:
                    cleaned[_estrip(e)] = c
        self._terms = cleaned
        self._hash = None

    # -- constructors --

    @staticmethod
    def zero() -> Polynomial:
        return _P_ZERO

    @staticmethod
    def one() -> Polynomial:
        return _P_ONE

    @staticmethod
    def constant(c: int) -> Polynomial:
        return Polynomial({(): int(c)})

    @staticmethod
    def variable(i: int) -> Polynomial:
        if i < 0:
            raise ValueError("variable index must be nonnegative")
        return Polynomial({(0,) * i + (1,): 1})

    # -- structure --

    @property
    def terms(self) -> dict:
        """Internal map from exponent tuple to coefficient (do not mutate)."""
        return self._terms

    def iter_terms(self) -> Iterator[tuple[Monomial, int]]:
        for e, c in self._terms.items():
            yield Monomial(e), c

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return self._terms == {(): 1}

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def variables(self) -> set[int]:
        out = set()
        for e in self._terms:
            out.update(i for i, k in enumerate(e) if k)
        return out

    def leading_term(self) -> tuple[Monomial, int]:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading term")
        e, c = _lead(self._terms)
        return Monomial(e), c

    def leading_coefficient(self) -> int:
        return self.leading_term()[1]

    def int_content(self) -> int:
        return _dict_content(self._terms)

    # -- arithmetic --

    def __add__(self, other):
        return Polynomial(_dict_add(self._terms, _coerce_poly(other)._terms))

    __radd__ = __add__

    def __sub__(self, other):
        return Polynomial(_dict_sub(self._terms, _coerce_poly(other)._terms))

    def __rsub__(self, other):
        return Polynomial(_dict_sub(_coerce_poly(other)._terms, self._terms))

    def __neg__(self):
        return Polynomial(_dict_scale(self._terms, -1))

    def __mul__(self, other):
        other = _coerce_poly(other)
        return Polynomial(_dict_mul(self._terms, other._terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power; use RationalFunction")
        out = _P_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def exact_div(self, other: Polynomial) -> Polynomial | None:
        """Exact quotient in Z[u], or None when other does not divide self."""
        q = _dict_exact_div(self._terms, _coerce_poly(other)._terms)
        return None if q is None else Polynomial(q)

    def evaluate(self, assignment: Mapping[int, Fraction | int]) -> Fraction:
        total = Fraction(0)
        for e, c in self._terms.items():
            term = Fraction(c)
            for i, k in enumerate(e):
                if k:
                    if i not in assignment:
                        raise ValueError(f"assignment does not cover u{i}")
                    term *= Fraction(assignment[i]) ** k
            total += term
        return total

    # -- comparisons / hashing / printing --

    def __eq__(self, other):
        if isinstance(other, int):
            return self._terms == ({(): other} if other else {})
        return isinstance(other, Polynomial) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), key=lambda kv: _ekey(kv[0]), reverse=True):
            mono = "*".join(f"u{i}" if k == 1 else f"u{i}^{k}" for i, k in enumerate(e) if k)
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Polynomial({self!s})"


_P_ZERO = Polynomial({})
_P_ONE = Polynomial({(): 1})


def _coerce_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, int):
        return Polynomial.constant(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a polynomial")


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Gcd in Z[u] (integer content included, leading coefficient positive)."""
    return Polynomial(_gcd_dict(_coerce_poly(a)._terms, _coerce_poly(b)._terms))


def poly_sqrt(p: Polynomial) -> Polynomial:
    """Exact square root of a perfect-square polynomial.

    Works term by term against the graded-lex leading term, then verifies
    the square; raises ValueError("not a perfect square") otherwise.
    """
    p = _coerce_poly(p)
    if p.is_zero():
        return _P_ZERO
    le, lc = _lead(p._terms)
    if lc < 0 or any(e & 1 for e in le):
        raise ValueError("not a perfect square")
    s = isqrt(lc)
    if s * s != lc:
        raise ValueError("not a perfect square")
    half = tuple(e >> 1 for e in le)
    root = {half: s}
    prev_key = None
    while True:
        rem = _dict_sub(p._terms, _dict_mul(root, root))
        if not rem:
            return Polynomial(root)
        re, rc = _lead(rem)
        te = _ediv(re, half)
        if te is None or rc % (2 * s):
            raise ValueError("not a perfect square")
        key = _ekey(te)
        if prev_key is not None and key >= prev_key:
            raise ValueError("not a perfect square")
        prev_key = key
        root[te] = rc // (2 * s)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RationalFunction:
    """A reduced fraction of polynomials; the value type of cluster variables."""

    __slots__ = ("_num", "_den", "_str", "_hash")

    def __init__(self, num: Polynomial, den: Polynomial, _trusted: bool = False):
        if not _trusted:
            rf = rf_canonicalize(num, den)
            num, den = rf._num, rf._den
        self._num = num
        self._den = den
        self._str = None
        self._hash = None

    # -- constructors --

    @staticmethod
    def from_int(c: int) -> RationalFunction:
        return RationalFunction(Polynomial.constant(c), _P_ONE, _trusted=True)

    @staticmethod
    def from_fraction(q: Fraction) -> RationalFunction:
        return rf_canonicalize(Polynomial.constant(q.numerator), Polynomial.constant(q.denominator))

    @staticmethod
    def variable(i: int) -> RationalFunction:
        return RationalFunction(Polynomial.variable(i), _P_ONE, _trusted=True)

    @staticmethod
    def one() -> RationalFunction:
        return _RF_ONE

    @staticmethod
    def zero() -> RationalFunction:
        return _RF_ZERO

    # -- structure --

    @property
    def numerator(self) -> Polynomial:
        return self._num

    @property
    def denominator(self) -> Polynomial:
        return self._den

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_one(self) -> bool:
        return self._num.is_one() and self._den.is_one()

    def variables(self) -> set[int]:
        return self._num.variables() | self._den.variables()

    # -- arithmetic --

    def __add__(self, other):
        other = _coerce_rf(other)
        return rf_canonicalize(
            self._num * other._den + other._num * self._den, self._den * other._den
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_rf(other)
        return rf_canonicalize(
            self._num * other._den - other._num * self._den, self._den * other._den
        )

    def __rsub__(self, other):
        return _coerce_rf(other) - self

    def __neg__(self):
        return RationalFunction(-self._num, self._den, _trusted=True)

    def __mul__(self, other):
        other = _coerce_rf(other)
        return rf_canonicalize(self._num * other._num, self._den * other._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_rf(other)
        if other._num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return rf_canonicalize(self._num * other._den, self._den * other._num)

    def __rtruediv__(self, other):
        return _coerce_rf(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (_RF_ONE / self) ** (-k)
        out = _RF_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> RationalFunction:
        return _RF_ONE / self

    def evaluate(self, assignment: Mapping[int, Fraction | int]) -> Fraction:
        den = self._den.evaluate(assignment)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the given point")
        return self._num.evaluate(assignment) / den

    def substitute(self, assignment: Mapping[int, RationalFunction]) -> RationalFunction:
        """Substitute rational functions for variables (missing ones stay)."""

        def sub_poly(p: Polynomial) -> RationalFunction:
            total = _RF_ZERO
            for e, c in p.terms.items():
                term = RationalFunction.from_int(c)
                for i, k in enumerate(e):
                    if k:
                        base = assignment.get(i)
                        if base is None:
                            base = RationalFunction.variable(i)
                        term = term * base**k
                total = total + term
            return total

        return sub_poly(self._num) / sub_poly(self._den)

    # -- comparisons / hashing / printing --

    def __eq__(self, other):
        if isinstance(other, int):
            other = RationalFunction.from_int(other)
        return (
            isinstance(other, RationalFunction)
            and self._num == other._num
            and self._den == other._den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._num, self._den))
        return self._hash

    def __bool__(self):
        return not self._num.is_zero()

    def __str__(self):
        if self._str is None:
            if self._den.is_one():
                self._str = str(self._num)
            else:
                self._str = f"({self._num})/({self._den})"
        return self._str

    def __repr__(self):
        return f"RationalFunction({self!s})"


def _coerce_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, int):
        return RationalFunction.from_int(x)
    if isinstance(x, Fraction):
        return RationalFunction.from_fraction(x)
    if isinstance(x, Polynomial):
        return RationalFunction(x, _P_ONE, _trusted=True)
    raise TypeError(f"cannot treat {type(x).__name__} as a rational function")


def rf_canonicalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """The unique reduced representative of num/den (idempotent)."""
    num = _coerce_poly(num)
    den = _coerce_poly(den)
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.is_zero():
        return RationalFunction(_P_ZERO, _P_ONE, _trusted=True)
    if not den.is_one():
        g = _gcd_dict(num._terms, den._terms)
        if not (len(g) == 1 and g.get(()) == 1):
            num = Polynomial(_dict_exact_div(num._terms, g))
            den = Polynomial(_dict_exact_div(den._terms, g))
    if den.leading_coefficient() < 0:
        num, den = -num, -den
    return RationalFunction(num, den, _trusted=True)


_RF_ZERO = RationalFunction(_P_ZERO, _P_ONE, _trusted=True)
_RF_ONE = RationalFunction(_P_ONE, _P_ONE, _trusted=True)


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Field arithmetic dispatcher: op is one of add, sub, mul, div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def laurent_decompose(f: RationalFunction) -> tuple[Polynomial, Monomial] | None:
    """Split f as numerator over a plain monomial, or None when impossible.

    Succeeds exactly when the reduced denominator is a single monomial with
    coefficient one, i.e. when f is a Laurent polynomial over Z.
    """
    den = f.denominator.terms
    if len(den) != 1:
        return None
    (exps, coeff), = den.items()
    if coeff != 1:
        return None
    return f.numerator, Monomial(exps)


def evaluate(f: RationalFunction, assignment: Mapping[int, Fraction | int]) -> Fraction:
    """Exact rational value of f at the given point."""
    return f.evaluate(assignment)


# ---------------------------------------------------------------------------
# parsing: the canonical text grammar plus ordinary +,-,*,/,^ expressions
# ---------------------------------------------------------------------------

def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, ch))
            i += 1
        else:
            raise ValueError(f"unexpected character {ch!r} in expression")
    tokens.append(("end", ""))
    return tokens


class _ExprParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ValueError(f"expected {kind!r}, found {tok[1]!r}")
        self.pos += 1
        return tok

    def parse(self) -> RationalFunction:
        value = self.expr()
        if self.peek() != "end":
            raise ValueError(f"trailing input {self.tokens[self.pos][1]!r}")
        return value

    def expr(self):
        sign = 1
        while self.peek() in "+-":
            if self.take()[0] == "-":
                sign = -sign
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek() in "+-":
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek() in "*/":
            op = self.take()[0]
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self):
        if self.peek() == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        while self.peek() == "^":
            self.take()
            exp = int(self.take("int")[1])
            base = base**exp
        return base

    def atom(self):
        kind = self.peek()
        if kind == "int":
            return RationalFunction.from_int(int(self.take()[1]))
        if kind == "name":
            name = self.take()[1]
            if not (name.startswith("u") and name[1:].isdigit()):
                raise ValueError(f"unknown variable {name!r} (variables are u0, u1, ...)")
            return RationalFunction.variable(int(name[1:]))
        if kind == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        raise ValueError(f"unexpected token {self.tokens[self.pos][1]!r}")


def parse_rational(text: str) -> RationalFunction:
    """Parse an expression in u-variables into a canonical rational function."""
    return _ExprParser(text).parse()


def parse_polynomial(text: str) -> Polynomial:
    """Parse an expression that must reduce to a polynomial."""
    rf = parse_rational(text)
    if not rf.denominator.is_one():
        raise ValueError(f"{text!r} is not a polynomial")
    return rf.numerator


def rf_sqrt(f: RationalFunction) -> RationalFunction:
    """Square root of a rational function whose reduced parts are squares."""
    return RationalFunction(
        poly_sqrt(f.numerator), poly_sqrt(f.denominator), _trusted=True
    )
