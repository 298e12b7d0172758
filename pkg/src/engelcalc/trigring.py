"""Exact scalar arithmetic for trigonometric polynomials.

A scalar is a finite Fourier sum

    c_0  +  sum_w  c_w * trig(<w, x> + p_w),       trig in {cos, sin},

over formal coordinates x.  Every frequency component and every phase is an
exact value ``r + s*pi`` with rational r, s; coefficients live in the Laurent
ring Q[pi, 1/pi].  (Plain rationals are not closed under differentiation:
d/dt sin(pi*t) = pi*cos(pi*t) pushes pi into the coefficient, and products of
such coefficients push in higher powers.)

Values are kept in a canonical normal form at all times:

* products of waves are expanded by product-to-sum before storage,
* the leading frequency of each wave is sign-normalised,
* phases are reduced mod 2*pi and quarter-turn phases (multiples of pi/2,
  the only ones whose sine and cosine are both rational) are absorbed into
  the cos/sin basis,
* zero coefficients are dropped and ``sin`` of the zero angle never appears.

Semantically equal inputs therefore map to identical term maps, so equality
and the zero test are syntactic.  All values are immutable and all operations
are pure.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "Frequency",
    "PiScalar",
    "TrigScalar",
    "normalize",
    "differentiate",
    "evaluate",
    "is_identically_zero",
    "parse",
    "rat",
]

RationalLike = Union[int, str, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)
_TWO = Fraction(2)


def rat(x: RationalLike) -> Fraction:
    """Coerce an int, ``"p/q"`` string, or Fraction to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


class Frequency:
    """Exact frequency/phase value ``rat + pi * pi``.

    Since pi is irrational the value is zero iff both parts are zero, which
    keeps equality and sign-normalisation exact.  The hash is precomputed:
    frequencies live inside the wave keys of every term map, and hashing
    Fractions directly dominated profiles.
    """

    __slots__ = ("rat", "pi", "_hash")

    def __init__(self, rat_part: Fraction, pi_part: Fraction):
        self.rat = rat_part
        self.pi = pi_part
        self._hash = hash((rat_part.numerator, rat_part.denominator,
                           pi_part.numerator, pi_part.denominator))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Frequency)
                and self.rat == other.rat and self.pi == other.pi)

    def __repr__(self) -> str:
        return f"Frequency(rat={self.rat!r}, pi={self.pi!r})"

    @staticmethod
    def of(rational: RationalLike = 0, pi_part: RationalLike = 0) -> "Frequency":
        return Frequency(rat(rational), rat(pi_part))

    def is_zero(self) -> bool:
        return self.rat == 0 and self.pi == 0

    def neg(self) -> "Frequency":
        return Frequency(-self.rat, -self.pi)

    def add(self, other: "Frequency") -> "Frequency":
        return Frequency(self.rat + other.rat, self.pi + other.pi)

    def scale(self, q: Fraction) -> "Frequency":
        return Frequency(self.rat * q, self.pi * q)

    def as_coeff(self) -> "PiScalar":
        return PiScalar.from_pairs([(0, self.rat), (1, self.pi)])

    def value(self) -> float:
        return float(self.rat) + float(self.pi) * math.pi

    def to_json(self) -> dict:
        return {"rat": str(self.rat), "pi": str(self.pi)}

    @staticmethod
    def from_json(obj: Mapping[str, str]) -> "Frequency":
        return Frequency(rat(obj["rat"]), rat(obj["pi"]))


FREQ_ZERO = Frequency(_ZERO, _ZERO)


def _freq_is_negative(f: Frequency) -> bool:
    # canonical orientation only; does not claim the real value is negative
    return (f.pi, f.rat) < (_ZERO, _ZERO)


class PiScalar:
    """Exact element of Q[pi, 1/pi], stored as sorted (exponent, coeff) pairs."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[int, Fraction]] = ()):
        acc: dict[int, Fraction] = {}
        for e, c in terms:
            c = acc.get(e, _ZERO) + c
            if c == 0:
                acc.pop(e, None)
            else:
                acc[e] = c
        self._terms: tuple[tuple[int, Fraction], ...] = tuple(sorted(acc.items()))

    @staticmethod
    def _raw(terms: tuple[tuple[int, Fraction], ...]) -> "PiScalar":
        out = object.__new__(PiScalar)
        out._terms = terms
        return out

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[int, RationalLike]]) -> "PiScalar":
        return PiScalar((e, rat(c)) for e, c in pairs)

    @staticmethod
    def of(x: "PiScalarLike") -> "PiScalar":
        if isinstance(x, PiScalar):
            return x
        q = rat(x)
        return PiScalar._raw(((0, q),) if q else ())

    def items(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> Fraction | None:
        """The value as a Fraction if it is a pure rational, else None."""
        if not self._terms:
            return _ZERO
        if len(self._terms) == 1 and self._terms[0][0] == 0:
            return self._terms[0][1]
        return None

    def __add__(self, other: "PiScalarLike") -> "PiScalar":
        other = PiScalar.of(other)
        a, b = self._terms, other._terms
        if not a:
            return other
        if not b:
            return self
        # merge two short sorted runs
        out: list[tuple[int, Fraction]] = []
        i = j = 0
        while i < len(a) and j < len(b):
            if a[i][0] < b[j][0]:
                out.append(a[i]); i += 1
            elif a[i][0] > b[j][0]:
                out.append(b[j]); j += 1
            else:
                c = a[i][1] + b[j][1]
                if c:
                    out.append((a[i][0], c))
                i += 1; j += 1
        out.extend(a[i:]); out.extend(b[j:])
        return PiScalar._raw(tuple(out))

    __radd__ = __add__

    def __neg__(self) -> "PiScalar":
        return PiScalar._raw(tuple((e, -c) for e, c in self._terms))

    def __sub__(self, other: "PiScalarLike") -> "PiScalar":
        return self + (-PiScalar.of(other))

    def __rsub__(self, other: "PiScalarLike") -> "PiScalar":
        return PiScalar.of(other) - self

    def __mul__(self, other: "PiScalarLike") -> "PiScalar":
        other = PiScalar.of(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return PiScalar._raw(())
        if len(a) == 1 and len(b) == 1:
            return PiScalar._raw(((a[0][0] + b[0][0], a[0][1] * b[0][1]),))
        return PiScalar((e1 + e2, c1 * c2) for e1, c1 in a for e2, c2 in b)

    __rmul__ = __mul__

    def div_exact(self, other: "PiScalarLike") -> "PiScalar | None":
        """Exact quotient in Q[pi, 1/pi], or None when the division is inexact."""
        d = PiScalar.of(other)
        if d.is_zero():
            raise ZeroDivisionError("division by the zero coefficient")
        if self.is_zero():
            return self
        # shift both to ordinary polynomials and long-divide
        shift_n = self._terms[0][0]
        shift_d = d._terms[0][0]
        num = {e - shift_n: c for e, c in self._terms}
        den = {e - shift_d: c for e, c in d._terms}
        dd = max(den)
        lead = den[dd]
        quot: dict[int, Fraction] = {}
        while num:
            nd = max(num)
            if nd < dd:
                return None
            q = num[nd] / lead
            quot[nd - dd] = q
            for e, c in den.items():
                r = num.get(nd - dd + e, _ZERO) - q * c
                if r == 0:
                    num.pop(nd - dd + e, None)
                else:
                    num[nd - dd + e] = r
        return PiScalar((e + shift_n - shift_d, c) for e, c in quot.items())

    def evaluate(self) -> float:
        return sum(float(c) * math.pi**e for e, c in self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PiScalar.of(other)
        if not isinstance(other, PiScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms:
            if e == 0:
                parts.append(str(c))
            else:
                p = "pi" if e == 1 else f"pi^{e}"
                if c == 1:
                    parts.append(p)
                elif c == -1:
                    parts.append(f"-{p}")
                else:
                    parts.append(f"{c}*{p}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"PiScalar({self})"

    def to_json(self) -> dict:
        return {str(e): str(c) for e, c in self._terms}


PiScalarLike = Union[PiScalar, int, str, Fraction]

PI = PiScalar.from_pairs([(1, 1)])

# wave key: (kind, ((coord, Frequency), ...) sorted by coord, phase Frequency)
Wave = tuple[str, tuple[tuple[str, Frequency], ...], Frequency]

_CONST_WAVE: Wave = ("c", (), FREQ_ZERO)

# quarter-turn phase absorption: phase pi-part in {0, 1/2, 1, 3/2} after mod 2
_QUARTER = {
    ("c", Fraction(0)): ("c", 1),
    ("c", Fraction(1, 2)): ("s", -1),
    ("c", Fraction(1)): ("c", -1),
    ("c", Fraction(3, 2)): ("s", 1),
    ("s", Fraction(0)): ("s", 1),
    ("s", Fraction(1, 2)): ("c", 1),
    ("s", Fraction(1)): ("s", -1),
    ("s", Fraction(3, 2)): ("c", -1),
}


def _reduce_phase(p: Frequency) -> Frequency:
    return Frequency(p.rat, p.pi % _TWO)


def _canonical(
    kind: str, freqs: Mapping[str, Frequency], phase: Frequency
) -> tuple[Wave, int] | None:
    """Canonical wave key plus the sign picked up by the normalisation.

    Returns None when the wave is identically zero (sin of the zero angle).
    """
    fr = {c: f for c, f in freqs.items() if not f.is_zero()}
    sign = 1
    if fr:
        flip = _freq_is_negative(fr[min(fr)])
    else:
        p1 = _reduce_phase(phase)
        p2 = _reduce_phase(phase.neg())
        flip = (p2.rat, p2.pi) < (p1.rat, p1.pi)
    if flip:
        fr = {c: f.neg() for c, f in fr.items()}
        phase = phase.neg()
        if kind == "s":
            sign = -sign
    phase = _reduce_phase(phase)
    if phase.rat == 0 and phase.pi.denominator in (1, 2):
        kind, s2 = _QUARTER[(kind, phase.pi)]
        sign *= s2
        phase = FREQ_ZERO
    if kind == "s" and not fr and phase.is_zero():
        return None
    return (kind, tuple(sorted(fr.items())), phase), sign


def _angle_add(w1: Wave, w2: Wave, subtract: bool = False) -> tuple[dict, Frequency]:
    fr = dict(w1[1])
    for c, f in w2[1]:
        g = f.neg() if subtract else f
        fr[c] = fr.get(c, FREQ_ZERO).add(g)
    ph = w1[2].add(w2[2].neg() if subtract else w2[2])
    return fr, ph


def _wave_product(w1: Wave, w2: Wave) -> list[tuple[str, dict, Frequency, Fraction]]:
    """Product-to-sum expansion of a product of two waves."""
    sf, sp = _angle_add(w1, w2)
    df, dp = _angle_add(w1, w2, subtract=True)
    k1, k2 = w1[0], w2[0]
    if k1 == "c" and k2 == "c":
        return [("c", df, dp, _HALF), ("c", sf, sp, _HALF)]
    if k1 == "s" and k2 == "s":
        return [("c", df, dp, _HALF), ("c", sf, sp, -_HALF)]
    if k1 == "s":  # sin * cos
        return [("s", sf, sp, _HALF), ("s", df, dp, _HALF)]
    # cos * sin
    return [("s", sf, sp, _HALF), ("s", df, dp, -_HALF)]


class TrigScalar:
    """Canonical trigonometric polynomial over named coordinates."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Wave, PiScalar] | None = None):
        # terms must already be canonical; public construction goes through
        # the classmethods and arithmetic below
        self._terms: dict[Wave, PiScalar] = dict(terms) if terms else {}

    # -- construction -------------------------------------------------------

    @staticmethod
    def constant(c: PiScalarLike) -> "TrigScalar":
        c = PiScalar.of(c)
        return TrigScalar({} if c.is_zero() else {_CONST_WAVE: c})

    @staticmethod
    def _wave(kind: str, freqs: Mapping[str, Frequency], phase: Frequency,
              coeff: PiScalarLike = 1) -> "TrigScalar":
        coeff = PiScalar.of(coeff)
        out = TrigScalar()
        out._add_term(kind, freqs, phase, coeff)
        return out

    @staticmethod
    def cosine(freqs: Mapping[str, Frequency], phase: Frequency = FREQ_ZERO,
               coeff: PiScalarLike = 1) -> "TrigScalar":
        return TrigScalar._wave("c", freqs, phase, coeff)

    @staticmethod
    def sine(freqs: Mapping[str, Frequency], phase: Frequency = FREQ_ZERO,
             coeff: PiScalarLike = 1) -> "TrigScalar":
        return TrigScalar._wave("s", freqs, phase, coeff)

    def _add_term(self, kind: str, freqs: Mapping[str, Frequency],
                  phase: Frequency, coeff: PiScalar) -> None:
        if coeff.is_zero():
            return
        canon = _canonical(kind, freqs, phase)
        if canon is None:
            return
        key, sign = canon
        self._merge(key, coeff if sign > 0 else -coeff)

    def _merge(self, key: Wave, coeff: PiScalar) -> None:
        # key must already be canonical
        prev = self._terms.get(key)
        c = coeff if prev is None else prev + coeff
        if c.is_zero():
            self._terms.pop(key, None)
        else:
            self._terms[key] = c

    # -- queries ------------------------------------------------------------

    def terms(self) -> Mapping[Wave, PiScalar]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def constant_value(self) -> PiScalar | None:
        """The value as a PiScalar constant, or None if any wave is present."""
        if not self._terms:
            return PiScalar()
        if len(self._terms) == 1 and _CONST_WAVE in self._terms:
            return self._terms[_CONST_WAVE]
        return None

    def coordinates(self) -> set[str]:
        return {c for kind, fr, ph in self._terms for c, _ in fr}

    def frequencies_of(self, coord: str) -> set[Frequency]:
        out = set()
        for _, fr, _ in self._terms:
            for c, f in fr:
                if c == coord:
                    out.add(f)
        return out

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "TrigLike") -> "TrigScalar":
        other = normalize(other)
        out = TrigScalar(self._terms)
        for key, c in other._terms.items():
            out._merge(key, c)
        return out

    __radd__ = __add__

    def __neg__(self) -> "TrigScalar":
        return TrigScalar({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "TrigLike") -> "TrigScalar":
        return self + (-normalize(other))

    def __rsub__(self, other: "TrigLike") -> "TrigScalar":
        return normalize(other) - self

    def __mul__(self, other: "TrigLike") -> "TrigScalar":
        other = normalize(other)
        out = TrigScalar()
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                c = c1 * c2
                if w1 == _CONST_WAVE:
                    out._merge(w2, c)
                elif w2 == _CONST_WAVE:
                    out._merge(w1, c)
                else:
                    for kind, fr, ph, half in _wave_product(w1, w2):
                        out._add_term(kind, fr, ph, c * half)
        return out

    __rmul__ = __mul__

    def div_constant(self, divisor: PiScalarLike) -> "TrigScalar":
        """Divide by a nonzero constant; raises ValueError when inexact."""
        d = PiScalar.of(divisor)
        out: dict[Wave, PiScalar] = {}
        for w, c in self._terms.items():
            q = c.div_exact(d)
            if q is None:
                raise ValueError(f"inexact division of {c} by {d}")
            out[w] = q
        return TrigScalar(out)

    # -- calculus -----------------------------------------------------------

    def differentiate(self, coord: str) -> "TrigScalar":
        out = TrigScalar()
        for (kind, fr, ph), c in self._terms.items():
            omega = dict(fr).get(coord)
            if omega is None:
                continue
            dc = c * omega.as_coeff()
            if kind == "c":
                out._add_term("s", dict(fr), ph, -dc)
            else:
                out._add_term("c", dict(fr), ph, dc)
        return out

    def shift(self, coord: str, delta: RationalLike) -> "TrigScalar":
        """Exact substitution coord -> coord + delta for rational delta."""
        d = rat(delta)
        out = TrigScalar()
        for (kind, fr, ph), c in self._terms.items():
            omega = dict(fr).get(coord)
            nph = ph if omega is None else ph.add(omega.scale(d))
            out._add_term(kind, dict(fr), nph, c)
        return out

    def evaluate(self, point: Mapping[str, float]) -> float:
        total = 0.0
        for (kind, fr, ph), c in self._terms.items():
            angle = ph.value()
            for coord, f in fr:
                if coord not in point:
                    raise ValueError(f"coordinate '{coord}' not assigned")
                angle += f.value() * point[coord]
            wave = math.cos(angle) if kind == "c" else math.sin(angle)
            total += c.evaluate() * wave
        return total

    # -- comparisons / formatting -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, PiScalar)):
            other = TrigScalar.constant(other)
        if not isinstance(other, TrigScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"TrigScalar({format_scalar(self)})"


TrigLike = Union[TrigScalar, PiScalar, int, str, Fraction]


def normalize(x: TrigLike) -> TrigScalar:
    """Canonical normal form of a scalar expression.

    Accepts a TrigScalar (already canonical: this is the identity), an exact
    constant, or an expression string such as ``"sin(t)*cos(t) + 1/2"``.
    """
    if isinstance(x, TrigScalar):
        return x
    if isinstance(x, str):
        return parse(x)
    if isinstance(x, (int, Fraction, PiScalar)):
        return TrigScalar.constant(x)
    raise TypeError(f"cannot normalise {x!r}")


def differentiate(s: TrigLike, coord: str) -> TrigScalar:
    return normalize(s).differentiate(coord)


def evaluate(s: TrigLike, point: Mapping[str, float]) -> float:
    return normalize(s).evaluate(point)


def is_identically_zero(s: TrigLike) -> bool:
    return normalize(s).is_zero()


ZERO = TrigScalar.constant(0)
ONE = TrigScalar.constant(1)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^]))")


def _tokenize(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ValueError(f"bad character in scalar expression: {text[pos:]!r}")
            break
        out.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expect: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expect is not None and tok != expect):
            raise ValueError(f"expected {expect or 'token'} at position {self.pos}")
        self.pos += 1
        return tok

    # scalar grammar: expr := term (('+'|'-') term)*
    def expr(self) -> TrigScalar:
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    # term := ['-'] factor ('*' factor)*
    def term(self) -> TrigScalar:
        neg = False
        while self.peek() == "-":
            self.take()
            neg = not neg
        out = self.factor()
        while self.peek() == "*":
            self.take()
            out = out * self.factor()
        return -out if neg else out

    def factor(self) -> TrigScalar:
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of expression")
        if tok == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        if tok.isdigit():
            return TrigScalar.constant(self.rational())
        if tok == "pi":
            self.take()
            e = 1
            if self.peek() == "^":
                self.take()
                e = self.signed_int()
            return TrigScalar.constant(PiScalar.from_pairs([(e, 1)]))
        if tok in ("sin", "cos"):
            kind = "s" if tok == "sin" else "c"
            self.take()
            self.take("(")
            freqs, phase = self.affine()
            self.take(")")
            return TrigScalar._wave(kind, freqs, phase)
        raise ValueError(
            f"unsupported factor {tok!r}: coordinates may appear only inside sin/cos"
        )

    def rational(self) -> Fraction:
        num = int(self.take())
        if self.peek() == "/":
            self.take()
            return Fraction(num, int(self.take()))
        return Fraction(num)

    def signed_int(self) -> int:
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        return sign * int(self.take())

    # affine angle: sum of products of {rational, pi, coordinate}
    def affine(self) -> tuple[dict[str, Frequency], Frequency]:
        freqs: dict[str, Frequency] = {}
        const = FREQ_ZERO
        sign = 1
        while True:
            q, pideg, coord = _ONE, 0, None
            while True:
                tok = self.peek()
                if tok == "-" and coord is None and pideg == 0 and q == _ONE:
                    self.take()
                    sign = -sign
                    continue
                if tok is not None and tok.isdigit():
                    q *= self.rational()
                elif tok == "pi":
                    self.take()
                    pideg += 1
                elif tok == "(":
                    self.take()
                    q *= self.rational_expr()
                    self.take(")")
                elif tok is not None and tok.isidentifier() and tok not in ("sin", "cos"):
                    if coord is not None:
                        raise ValueError("sin/cos argument must be affine in one "
                                         "coordinate per product")
                    coord = self.take()
                else:
                    break
                while self.peek() == "/":
                    self.take()
                    q /= Fraction(int(self.take()))
                if self.peek() == "*":
                    self.take()
            if pideg > 1:
                raise ValueError("sin/cos argument may carry at most one factor of pi")
            f = Frequency(q * sign, _ZERO) if pideg == 0 else Frequency(_ZERO, q * sign)
            if coord is None:
                const = const.add(f)
            else:
                freqs[coord] = freqs.get(coord, FREQ_ZERO).add(f)
            tok = self.peek()
            if tok == "+":
                self.take()
                sign = 1
            elif tok == "-":
                self.take()
                sign = -1
            else:
                return freqs, const

    # parenthesised rational inside an angle, e.g. (8/3)*pi*x2
    def rational_expr(self) -> Fraction:
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        return sign * self.rational()


def parse(text: str) -> TrigScalar:
    """Parse a sum-of-products expression into canonical normal form."""
    p = _Parser(text)
    out = p.expr()
    if p.peek() is not None:
        raise ValueError(f"trailing input in scalar expression: {p.toks[p.pos:]}")
    return out


# -- formatting ---------------------------------------------------------------


def _format_coeff(c: PiScalar, lead: bool) -> tuple[str, str]:
    """(connector, text) pair for a coefficient in a term position."""
    items = c.items()
    if len(items) == 1:
        e, q = items[0]
        sign = "-" if q < 0 else "+"
        q = abs(q)
        if e == 0:
            body = str(q)
        else:
            p = "pi" if e == 1 else f"pi^{e}"
            body = p if q == 1 else f"{q}*{p}"
        return sign, body
    return "+", f"({c})"


def _format_angle(fr: tuple[tuple[str, Frequency], ...], ph: Frequency) -> str:
    parts: list[str] = []

    def add_part(q: Fraction, pideg: int, coord: str | None) -> None:
        if q == 0:
            return
        sign = "-" if q < 0 else "+"
        q = abs(q)
        bits = []
        if q != 1 or (pideg == 0 and coord is None):
            bits.append(str(q) if q.denominator == 1 else f"({q})")
        if pideg:
            bits.append("pi")
        if coord:
            bits.append(coord)
        parts.append((sign, "*".join(bits)))

    for coord, f in fr:
        add_part(f.rat, 0, coord)
        add_part(f.pi, 1, coord)
    add_part(ph.rat, 0, None)
    add_part(ph.pi, 1, None)
    out = ""
    for i, (sign, body) in enumerate(parts):
        if i == 0:
            out = body if sign == "+" else f"-{body}"
        else:
            out += f" {sign} {body}"
    return out


def format_scalar(s: TrigScalar) -> str:
    """Canonical, re-parseable text form."""
    if s.is_zero():
        return "0"

    def sort_key(item: tuple[Wave, PiScalar]):
        (kind, fr, ph), _ = item
        freqs = tuple((c, f.rat, f.pi) for c, f in fr)
        return (len(fr), freqs, (ph.rat, ph.pi), kind)

    out = ""
    for (kind, fr, ph), c in sorted(s.terms().items(), key=sort_key):
        if (kind, fr, ph) == _CONST_WAVE:
            sign, body = _format_coeff(c, lead=not out)
        else:
            wave = f"{'cos' if kind == 'c' else 'sin'}({_format_angle(fr, ph)})"
            if c == PiScalar.of(1):
                sign, body = "+", wave
            elif c == PiScalar.of(-1):
                sign, body = "-", wave
            else:
                sign, body = _format_coeff(c, lead=not out)
                body = f"{body}*{wave}"
        if not out:
            out = body if sign == "+" else f"-{body}"
        else:
            out += f" {sign} {body}"
    return out
