"""Sparse multivariate Laurent polynomials and factored rational functions.

A polynomial is stored as an integer coefficient dict plus one rational
content factor, so the inner loops are pure machine-integer arithmetic:

    p = content * sum_e icoeffs[e] * x**e,  gcd(icoeffs) = 1,
    lex-leading icoeff > 0.

Exponents may be negative (Laurent), which is what the root parameters
t_k need.  Rational functions keep their denominator factored, so pole
orders stay readable and cancellation never needs a multivariate gcd: we
only ever divide by known factors (exact integer division by Gauss's
lemma, with cheap fail-fast checks).
"""

from fractions import Fraction
from math import gcd


def _frac(c):
    return c if isinstance(c, Fraction) else Fraction(c)


_PROBE_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_POW_CACHE = {}


def _ppow(i, k):
    key = (i, k)
    v = _POW_CACHE.get(key)
    if v is None:
        v = _PROBE_PRIMES[i % len(_PROBE_PRIMES)] ** k
        _POW_CACHE[key] = v
    return v


def _probe_value(shifted):
    """Integer value of a shifted-nonnegative coefficient dict at a fixed
    point with prime coordinates.  If f divides g (Laurent sense), the
    probe of f divides the probe of g, giving an O(terms) fail-fast."""
    total = 0
    for e, v in shifted.items():
        w = v
        for i, k in enumerate(e):
            if k:
                w *= _ppow(i, k)
        total += w
    return total


class Poly:
    """Sparse Laurent polynomial over Q in a fixed tuple of variable names."""

    __slots__ = ("names", "content", "icoeffs", "_probe")

    def __init__(self, names, coeffs=None):
        self.names = tuple(names)
        self.content = Fraction(1)
        self.icoeffs = {}
        self._probe = None
        if coeffs:
            n = len(self.names)
            den = 1
            vals = {}
            for exps, c in coeffs.items():
                c = _frac(c)
                if c == 0:
                    continue
                if len(exps) != n:
                    raise ValueError("exponent tuple has wrong length")
                vals[tuple(exps)] = c
                den = den * c.denominator // gcd(den, c.denominator)
            self.icoeffs = {
                e: int(c * den) for e, c in vals.items()
            }
            self.content = Fraction(1, den)
            self._reduce()

    @classmethod
    def _raw(cls, names, content, icoeffs):
        p = cls.__new__(cls)
        p.names = names
        p.content = content
        p.icoeffs = icoeffs
        p._probe = None
        p._reduce()
        return p

    def _reduce(self):
        if not self.icoeffs:
            self.content = Fraction(1)
            return
        g = 0
        for v in self.icoeffs.values():
            g = gcd(g, v)
            if g == 1:
                break
        if self.icoeffs[max(self.icoeffs)] < 0:
            g = -g
        if g != 1:
            self.icoeffs = {e: v // g for e, v in self.icoeffs.items()}
            self.content *= g

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, names, c):
        c = _frac(c)
        if c == 0:
            return cls(names)
        names = tuple(names)
        return cls._raw(names, c, {(0,) * len(names): 1})

    @classmethod
    def var(cls, names, name, power=1):
        names = tuple(names)
        i = names.index(name)
        exps = [0] * len(names)
        exps[i] = power
        return cls._raw(names, Fraction(1), {tuple(exps): 1})

    @classmethod
    def monomial(cls, names, exps, c=1):
        c = _frac(c)
        names = tuple(names)
        if c == 0:
            return cls(names)
        return cls._raw(names, c, {tuple(exps): 1})

    # -- predicates and access ----------------------------------------------

    def is_zero(self):
        return not self.icoeffs

    def is_constant(self):
        zero = (0,) * len(self.names)
        return all(e == zero for e in self.icoeffs)

    def constant_value(self):
        zero = (0,) * len(self.names)
        return self.content * self.icoeffs.get(zero, 0)

    def is_monomial(self):
        return len(self.icoeffs) <= 1

    def coefficient(self, exps):
        return self.content * self.icoeffs.get(tuple(exps), 0)

    def terms(self):
        """Iterate (exponent tuple, Fraction coefficient)."""
        c = self.content
        for e, v in self.icoeffs.items():
            yield e, c * v

    def num_terms(self):
        return len(self.icoeffs)

    def __bool__(self):
        return bool(self.icoeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.names, other)
        return (
            self.names == other.names
            and self.content == other.content
            and self.icoeffs == other.icoeffs
        )

    def __hash__(self):
        return hash((self.names, self.content, frozenset(self.icoeffs.items())))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.names != self.names:
                raise ValueError("polynomials over different variables")
            return other
        return Poly.const(self.names, other)

    def __add__(self, other):
        other = self._coerce(other)
        if not self.icoeffs:
            return other
        if not other.icoeffs:
            return self
        ca, cb = self.content, other.content
        # common content: scale both integer dicts by integers
        num = gcd(ca.numerator, cb.numerator)
        den = ca.denominator * cb.denominator // gcd(ca.denominator, cb.denominator)
        c = Fraction(num, den)
        ma = int(ca / c)
        mb = int(cb / c)
        out = {e: v * ma for e, v in self.icoeffs.items()}
        for e, v in other.icoeffs.items():
            s = out.get(e, 0) + v * mb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.names, c, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.names, -self.content, dict(self.icoeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        get = out.get
        for e1, c1 in self.icoeffs.items():
            for e2, c2 in other.icoeffs.items():
                e = tuple(map(sum, zip(e1, e2)))
                s = get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly._raw(self.names, self.content * other.content, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if self.is_monomial() and self.icoeffs:
                (e, v), = self.icoeffs.items()
                c = (self.content * v) ** k
                return Poly._raw(
                    self.names, c, {tuple(x * k for x in e): 1}
                )
            raise ValueError("negative power of non-monomial")
        out = Poly.const(self.names, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def scale(self, c):
        c = _frac(c)
        if c == 0:
            return Poly(self.names)
        return Poly._raw(self.names, self.content * c, dict(self.icoeffs))

    # -- calculus and substitution ----------------------------------------

    def diff(self, name):
        i = self.names.index(name)
        out = {}
        for e, v in self.icoeffs.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = v * e[i]
        return Poly._raw(self.names, self.content, out)

    def subs(self, assignment):
        """Substitute variables by polynomials (or constants).

        Variables with negative exponents may only be replaced by
        monomials.
        """
        result = Poly.const(self.names, 0)
        cache = {}
        for e, c in self.terms():
            term = Poly.const(self.names, c)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                nm = self.names[i]
                if nm in assignment:
                    rep = assignment[nm]
                    if not isinstance(rep, Poly):
                        rep = Poly.const(self.names, rep)
                    key = (nm, k)
                    if key not in cache:
                        if k < 0 and not rep.is_monomial():
                            raise ValueError(
                                "negative power of substituted non-monomial"
                            )
                        cache[key] = rep ** k
                    term = term * cache[key]
                else:
                    term = term * Poly.var(self.names, nm, k)
            result = result + term
        return result

    def eval(self, point):
        total = Fraction(0)
        for e, c in self.terms():
            v = c
            for i, k in enumerate(e):
                if k == 0:
                    continue
                x = _frac(point[self.names[i]])
                if k < 0 and x == 0:
                    raise ZeroDivisionError("pole of Laurent monomial")
                v *= x ** k
            total += v
        return total

    def rename(self, names, mapping=None):
        """Re-embed into a ring with variable tuple `names`."""
        names = tuple(names)
        mapping = mapping or {}
        idx = []
        for nm in self.names:
            nm2 = mapping.get(nm, nm)
            idx.append(names.index(nm2))
        out = {}
        for e, v in self.icoeffs.items():
            e2 = [0] * len(names)
            for j, k in enumerate(e):
                e2[idx[j]] += k
            key = tuple(e2)
            s = out.get(key, 0) + v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Poly._raw(names, self.content, out)

    # -- division ----------------------------------------------------------

    def exact_div(self, other):
        """Return self/other as a Poly, or None when not divisible.

        Integer arithmetic throughout: primitives divide to a primitive
        (Gauss), so any non-integer step means "not divisible" and fails
        fast.  Laurent operands are shifted to genuine polynomials first.
        """
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return Poly(self.names)
        a, sa = self._shift_nonneg()
        b, sb = other._shift_nonneg()
        if self._probe is None:
            self._probe = _probe_value(a)
        if other._probe is None:
            other._probe = _probe_value(b)
        if other._probe != 0 and self._probe % other._probe:
            return None
        lead = max(b)
        lc = b[lead]
        quot = {}
        rem = dict(a)
        bitems = list(b.items())
        while rem:
            e = max(rem)
            if any(x < y for x, y in zip(e, lead)):
                return None
            r = rem[e]
            if r % lc:
                return None
            qe = tuple(x - y for x, y in zip(e, lead))
            qc = r // lc
            quot[qe] = qc
            for be, bc in bitems:
                ke = tuple(x + y for x, y in zip(qe, be))
                s = rem.get(ke, 0) - qc * bc
                if s:
                    rem[ke] = s
                else:
                    rem.pop(ke, None)
        shift = tuple(x - y for x, y in zip(sa, sb))
        return Poly._raw(
            self.names,
            self.content / other.content,
            {tuple(a2 + b2 for a2, b2 in zip(e, shift)): c
             for e, c in quot.items()},
        )

    def _shift_nonneg(self):
        """Integer dict with nonnegative exponents plus the applied shift."""
        mins = [0] * len(self.names)
        for e in self.icoeffs:
            for i, x in enumerate(e):
                if x < mins[i]:
                    mins[i] = x
        shift = tuple(mins)
        if not any(shift):
            return self.icoeffs, shift
        return {
            tuple(a - b for a, b in zip(e, shift)): c
            for e, c in self.icoeffs.items()
        }, shift

    # -- presentation -------------------------------------------------------

    def sort_key(self):
        return tuple(sorted(self.icoeffs.items()))

    def normalized_factor(self):
        """Return (unit, primitive factor): factor has content 1 and a
        positive lex-leading coefficient, canonical across computations."""
        if self.is_zero():
            return Fraction(1), self
        return self.content, Poly._raw(self.names, Fraction(1), dict(self.icoeffs))

    def __str__(self):
        if not self.icoeffs:
            return "0"
        parts = []
        for e in sorted(self.icoeffs, reverse=True):
            c = self.content * self.icoeffs[e]
            mono = "*".join(
                f"{self.names[i]}^{k}" if k != 1 else self.names[i]
                for i, k in enumerate(e)
                if k != 0
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


class RatFun:
    """Rational function num / prod(factor_i^e_i) with tracked factors.

    Factors are primitive polynomials with positive leading coefficient
    and positive integer exponents, sorted deterministically.
    Normalisation cancels any factor that exactly divides the numerator;
    no general gcd is attempted.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=()):
        self.num = num
        self.den = tuple(den)
        self._normalize()

    @classmethod
    def from_poly(cls, p):
        return cls(p, ())

    @classmethod
    def const(cls, names, c):
        return cls(Poly.const(names, c), ())

    @property
    def names(self):
        return self.num.names

    def _normalize(self):
        if self.num.is_zero():
            self.den = ()
            return
        merged = {}
        unit = Fraction(1)
        for q, e in self.den:
            if e == 0:
                continue
            if q.is_monomial():
                (me, mv), = q.icoeffs.items()
                unit /= (q.content * mv) ** e
                self.num = self.num * Poly._raw(
                    q.names, Fraction(1), {tuple(-x * e for x in me): 1}
                )
                continue
            u, qn = q.normalized_factor()
            unit /= u ** e
            key = qn.sort_key()
            if key in merged:
                merged[key] = (qn, merged[key][1] + e)
            else:
                merged[key] = (qn, e)
        if unit != 1:
            self.num = self.num.scale(unit)
        out = []
        for key in sorted(merged):
            q, e = merged[key]
            while e > 0:
                quo = self.num.exact_div(q)
                if quo is None:
                    break
                self.num = quo
                e -= 1
            if e > 0:
                out.append((q, e))
        self.den = tuple(out)

    def is_zero(self):
        return self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, Poly):
            return RatFun(other)
        return RatFun(Poly.const(self.names, other))

    def __eq__(self, other):
        other = self._coerce(other)
        return (self - other).is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        da = {q.sort_key(): (q, e) for q, e in self.den}
        db = {q.sort_key(): (q, e) for q, e in other.den}
        num_a, num_b = self.num, other.num
        den = {}
        for key in set(da) | set(db):
            qa = da.get(key)
            qb = db.get(key)
            q = (qa or qb)[0]
            ea = qa[1] if qa else 0
            eb = qb[1] if qb else 0
            m = max(ea, eb)
            den[key] = (q, m)
            if m > ea:
                num_a = num_a * q ** (m - ea)
            if m > eb:
                num_b = num_b * q ** (m - eb)
        return RatFun(num_a + num_b, tuple(den[k] for k in sorted(den)))

    __radd__ = __add__

    def __neg__(self):
        r = RatFun.__new__(RatFun)
        r.num = -self.num
        r.den = self.den
        return r

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFun(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def div_poly(self, q, e=1):
        """Divide by q^e, tracking q as a denominator factor."""
        return RatFun(self.num, self.den + ((q, e),))

    def diff(self, name):
        """Partial derivative, by quotient rule on the factored form."""
        out = RatFun(self.num.diff(name), self.den)
        for i, (q, e) in enumerate(self.den):
            dq = q.diff(name)
            if dq.is_zero():
                continue
            den = list(self.den)
            den[i] = (q, e + 1)
            out = out + RatFun(self.num * dq.scale(-e), tuple(den))
        return out

    def subs(self, assignment):
        """Substitute variables; denominators must not vanish identically."""
        num = self.num.subs(assignment)
        out = RatFun(num)
        for q, e in self.den:
            q2 = q.subs(assignment)
            if q2.is_zero():
                from .errors import ChartOnPole

                raise ChartOnPole(f"substitution kills denominator factor {q}")
            out = out.div_poly(q2, e)
        return out

    def rename(self, names, mapping=None):
        num = self.num.rename(names, mapping)
        den = tuple((q.rename(names, mapping), e) for q, e in self.den)
        return RatFun(num, den)

    def pole_order(self, factor):
        """Order of the pole along a given (primitive) factor."""
        _, fn = factor.normalized_factor()
        key = fn.sort_key()
        for q, e in self.den:
            if q.sort_key() == key:
                return e
        return 0

    def as_poly(self):
        """Return the numerator when there is no denominator, else None."""
        return self.num if not self.den else None

    def __str__(self):
        if not self.den:
            return str(self.num)
        dens = " * ".join(
            f"({q})^{e}" if e != 1 else f"({q})" for q, e in self.den
        )
        return f"({self.num}) / [{dens}]"

    __repr__ = __str__
