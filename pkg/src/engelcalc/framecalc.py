"""Framed 4-manifolds: vector fields, brackets, exterior calculus, certificates.

A :class:`FramedSpace` is a global frame E_1..E_4 together with a structure
table [E_i, E_j] = sum_k f^k_ij E_k, optional coordinate symbols, and a
derivation table D_ij = E_i(x_j) describing how the frame differentiates the
coordinates.  Coefficients throughout are exact :class:`TrigScalar` values,
so brackets, the Nijenhuis tensor and exterior derivatives are computed in
closed form; rank claims are certified either symbolically (the witness
scalar normalises to a nonzero constant) or by sampling a deterministic grid
over one fundamental period per appearing coordinate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .trigring import Frequency, TrigLike, TrigScalar, normalize

__all__ = [
    "VecField",
    "FramedSpace",
    "ComplexStructure",
    "KForm",
    "Certificate",
    "bracket",
    "apply_J",
    "nijenhuis",
    "exterior_derivative",
    "wedge",
    "global_rank",
    "det_of_fields",
    "minors_of_fields",
    "grid_points",
    "certify_nonvanishing",
    "certify_vanishing",
]

ZERO = TrigScalar.constant(0)
ONE = TrigScalar.constant(1)

DEFAULT_GRID = 17
DEFAULT_TOL = 1e-6


def _coerce4(coeffs: Sequence[TrigLike]) -> tuple[TrigScalar, ...]:
    if len(coeffs) != 4:
        raise ValueError("expected 4 frame coefficients")
    return tuple(normalize(c) for c in coeffs)


@dataclass(frozen=True)
class VecField:
    """Vector field given by its coefficient 4-vector over the frame."""

    coeffs: tuple[TrigScalar, TrigScalar, TrigScalar, TrigScalar]

    @staticmethod
    def of(*coeffs: TrigLike) -> "VecField":
        return VecField(_coerce4(coeffs))

    @staticmethod
    def basis(i: int) -> "VecField":
        return VecField.of(*(1 if j == i else 0 for j in range(4)))

    @staticmethod
    def zero() -> "VecField":
        return VecField.of(0, 0, 0, 0)

    def __add__(self, other: "VecField") -> "VecField":
        return VecField(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "VecField") -> "VecField":
        return VecField(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "VecField":
        return VecField(tuple(-a for a in self.coeffs))

    def scale(self, s: TrigLike) -> "VecField":
        s = normalize(s)
        return VecField(tuple(s * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def evaluate(self, point: Mapping[str, float]) -> tuple[float, float, float, float]:
        return tuple(c.evaluate(point) for c in self.coeffs)

    def coordinates(self) -> set[str]:
        out: set[str] = set()
        for c in self.coeffs:
            out |= c.coordinates()
        return out


class FramedSpace:
    """Frame names, structure table, coordinates, and derivation table."""

    def __init__(
        self,
        frame: Sequence[str] = ("E1", "E2", "E3", "E4"),
        coords: Sequence[str] = (),
        structure: Mapping[tuple[int, int], Sequence[TrigLike]] | None = None,
        derivation: Mapping[tuple[int, str], TrigLike] | None = None,
        periods: Mapping[str, Frequency] | None = None,
        name: str = "",
        validate: bool = True,
    ):
        if len(frame) != 4 or len(set(frame)) != 4:
            raise ValueError("frame must consist of 4 distinct names")
        if len(coords) > 4 or len(set(coords)) != len(coords):
            raise ValueError("at most 4 distinct coordinate symbols")
        self.name = name
        self.frame = tuple(frame)
        self.coords = tuple(coords)
        self._structure: dict[tuple[int, int], tuple[TrigScalar, ...]] = {}
        for (i, j), comp in (structure or {}).items():
            if not 0 <= i < j < 4:
                raise ValueError(f"structure key must have i < j, got {(i, j)}")
            cc = _coerce4(comp)
            if not all(c.is_zero() for c in cc):
                self._structure[(i, j)] = cc
        self._deriv: tuple[dict[str, TrigScalar], ...] = tuple({} for _ in range(4))
        for (i, coord), s in (derivation or {}).items():
            if coord not in self.coords:
                raise ValueError(f"derivation refers to undeclared coordinate {coord!r}")
            s = normalize(s)
            if not s.is_zero():
                self._deriv[i][coord] = s
        self.periods = dict(periods or {})
        declared = set(self.coords)
        for entry in self._structure.values():
            for c in entry:
                if not c.coordinates() <= declared:
                    raise ValueError("structure table uses undeclared coordinates")
        if validate:
            self.validate()

    # -- basic calculus ------------------------------------------------------

    def structure_bracket(self, i: int, j: int) -> VecField:
        """[E_i, E_j] from the table, for any index order."""
        if i == j:
            return VecField.zero()
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        comp = self._structure.get((i, j))
        if comp is None:
            return VecField.zero()
        return VecField(comp) if sign > 0 else -VecField(comp)

    def frame_derivative(self, i: int, s: TrigScalar) -> TrigScalar:
        """E_i(s) through the derivation table."""
        out = ZERO
        for coord in s.coordinates():
            d = self._deriv[i].get(coord)
            if d is not None:
                out = out + d * s.differentiate(coord)
        return out

    def apply(self, v: VecField, s: TrigLike) -> TrigScalar:
        """Directional derivative v(s)."""
        s = normalize(s)
        out = ZERO
        for i in range(4):
            if v.coeffs[i].is_zero():
                continue
            ds = self.frame_derivative(i, s)
            if not ds.is_zero():
                out = out + v.coeffs[i] * ds
        return out

    def coordinate_derivative(self, v: VecField, coord: str) -> TrigScalar:
        """v(coord) straight from the derivation table."""
        if coord not in self.coords:
            raise ValueError(f"undeclared coordinate {coord!r}")
        out = ZERO
        for i in range(4):
            d = self._deriv[i].get(coord)
            if d is not None and not v.coeffs[i].is_zero():
                out = out + v.coeffs[i] * d
        return out

    def index(self, frame_name: str) -> int:
        return self.frame.index(frame_name)

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        """Jacobi identity and frame/coordinate compatibility, symbolically."""
        basis = [VecField.basis(i) for i in range(4)]
        for i, j, k in itertools.combinations(range(4), 3):
            jac = (
                bracket(basis[i], bracket(basis[j], basis[k], self), self)
                + bracket(basis[j], bracket(basis[k], basis[i], self), self)
                + bracket(basis[k], bracket(basis[i], basis[j], self), self)
            )
            if not jac.is_zero():
                raise ValueError(
                    f"structure table violates the Jacobi identity on "
                    f"({self.frame[i]},{self.frame[j]},{self.frame[k]})"
                )
        for i, j in itertools.combinations(range(4), 2):
            br = self.structure_bracket(i, j)
            for coord in self.coords:
                lhs = self.frame_derivative(i, self._deriv[j].get(coord, ZERO)) - \
                    self.frame_derivative(j, self._deriv[i].get(coord, ZERO))
                rhs = ZERO
                for k in range(4):
                    d = self._deriv[k].get(coord)
                    if d is not None:
                        rhs = rhs + br.coeffs[k] * d
                if lhs != rhs:
                    raise ValueError(
                        f"derivation table inconsistent with brackets on "
                        f"coordinate {coord!r}"
                    )

    # -- periods / sampling ---------------------------------------------------

    def coordinate_period(self, coord: str, scalars: Iterable[TrigScalar]) -> float:
        """One fundamental period of the given scalars in a coordinate.

        Declared periods win; otherwise the period is derived from the set of
        exact frequencies, which must be commensurate.
        """
        if coord in self.periods:
            return self.periods[coord].value()
        freqs: set[Frequency] = set()
        for s in scalars:
            freqs |= s.frequencies_of(coord)
        if not freqs:
            raise ValueError(f"coordinate {coord!r} does not appear")
        base = next(iter(freqs))
        ratios: list[Fraction] = []
        for f in freqs:
            q = _commensurate_ratio(f, base)
            if q is None:
                raise ValueError(
                    f"incommensurate frequencies in {coord!r}; declare a period"
                )
            ratios.append(q)
        g = ratios[0]
        for q in ratios[1:]:
            g = _fraction_gcd(g, q)
        omega = abs(base.value() * float(g))
        return 2.0 * 3.141592653589793 / omega

    def __repr__(self) -> str:
        return f"FramedSpace({self.name or ','.join(self.frame)})"


def _commensurate_ratio(f: Frequency, base: Frequency) -> Fraction | None:
    """q with f = q * base, if it exists."""
    if base.rat != 0:
        q = f.rat / base.rat
        return q if f.pi == q * base.pi else None
    if base.pi != 0:
        q = f.pi / base.pi
        return q if f.rat == 0 else None
    return None


def _fraction_gcd(a: Fraction, b: Fraction) -> Fraction:
    a, b = abs(a), abs(b)
    return Fraction(
        gcd(a.numerator * b.denominator, b.numerator * a.denominator),
        a.denominator * b.denominator,
    )


def grid_points(
    space: FramedSpace,
    scalars: Sequence[TrigScalar],
    per_axis: int,
) -> tuple[list[dict[str, float]], dict[str, int]]:
    """Deterministic grid over one period per coordinate appearing in scalars."""
    coords = sorted(set().union(*(s.coordinates() for s in scalars)) if scalars else set())
    axes: list[list[float]] = []
    shape: dict[str, int] = {}
    for c in coords:
        period = space.coordinate_period(c, scalars)
        axes.append([period * k / per_axis for k in range(per_axis)])
        shape[c] = per_axis
    points = [dict(zip(coords, combo)) for combo in itertools.product(*axes)] \
        if coords else [{}]
    return points, shape


# -- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Outcome of a global scalar claim (nonvanishing or vanishing)."""

    kind: str                      # SYMBOLIC | SAMPLED | FAILED
    claim: str                     # nonvanishing | vanishing
    witness: str = ""              # constant value / "identically zero"
    grid: Mapping[str, int] = field(default_factory=dict)
    bound: float | None = None     # min |value| (nonvanishing) or max (vanishing)
    tolerance: float | None = None
    witness_point: Mapping[str, float] | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.kind != "FAILED"

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "claim": self.claim}
        if self.witness:
            out["witness"] = self.witness
        if self.grid:
            out["grid"] = dict(sorted(self.grid.items()))
        if self.bound is not None:
            out["bound"] = self.bound
        if self.tolerance is not None:
            out["tolerance"] = self.tolerance
        if self.witness_point is not None:
            out["witness_point"] = dict(sorted(self.witness_point.items()))
        if self.note:
            out["note"] = self.note
        return out


def certify_nonvanishing(
    witness: TrigScalar,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    note: str = "",
) -> Certificate:
    """Certify that a scalar vanishes nowhere."""
    const = witness.constant_value()
    if const is not None:
        if const.is_zero():
            return Certificate("FAILED", "nonvanishing", witness="identically zero",
                               note=note)
        return Certificate("SYMBOLIC", "nonvanishing", witness=str(const), note=note)
    points, shape = grid_points(space, [witness], grid)
    best, best_pt = None, None
    for p in points:
        v = abs(witness.evaluate(p))
        if best is None or v < best:
            best, best_pt = v, p
    if best > tol:
        return Certificate("SAMPLED", "nonvanishing", grid=shape, bound=best,
                           tolerance=tol, note=note)
    return Certificate("FAILED", "nonvanishing", grid=shape, bound=best,
                       tolerance=tol, witness_point=best_pt, note=note)


def certify_vanishing(
    scalars: Sequence[TrigScalar],
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = 1e-9,
    note: str = "",
) -> Certificate:
    """Certify that every scalar in the list is identically zero."""
    if all(s.is_zero() for s in scalars):
        return Certificate("SYMBOLIC", "vanishing", witness="identically zero",
                           note=note)
    live = [s for s in scalars if not s.is_zero()]
    points, shape = grid_points(space, live, grid)
    worst, worst_pt = 0.0, None
    for p in points:
        for s in live:
            v = abs(s.evaluate(p))
            if v > worst:
                worst, worst_pt = v, p
    if worst <= tol:
        return Certificate("SAMPLED", "vanishing", grid=shape, bound=worst,
                           tolerance=tol, note=note)
    return Certificate("FAILED", "vanishing", grid=shape, bound=worst,
                       tolerance=tol, witness_point=worst_pt, note=note)


# -- brackets and the complex structure ---------------------------------------


def bracket(v: VecField, w: VecField, space: FramedSpace) -> VecField:
    """Lie bracket via the Leibniz rule plus the structure table."""
    out = [ZERO, ZERO, ZERO, ZERO]
    for k in range(4):
        out[k] = space.apply(v, w.coeffs[k]) - space.apply(w, v.coeffs[k])
    for i, j in itertools.combinations(range(4), 2):
        comp = space.structure_bracket(i, j)
        if comp.is_zero():
            continue
        c = v.coeffs[i] * w.coeffs[j] - v.coeffs[j] * w.coeffs[i]
        if c.is_zero():
            continue
        for k in range(4):
            if not comp.coeffs[k].is_zero():
                out[k] = out[k] + c * comp.coeffs[k]
    return VecField(tuple(out))


class ComplexStructure:
    """Endomorphism J over the frame with J*J = -id, checked symbolically."""

    def __init__(self, matrix: Sequence[Sequence[TrigLike]]):
        if len(matrix) != 4 or any(len(row) != 4 for row in matrix):
            raise ValueError("J must be a 4x4 matrix over the frame")
        self.matrix: tuple[tuple[TrigScalar, ...], ...] = tuple(
            tuple(normalize(e) for e in row) for row in matrix
        )
        for i in range(4):
            for j in range(4):
                acc = ZERO
                for k in range(4):
                    acc = acc + self.matrix[i][k] * self.matrix[k][j]
                expected = TrigScalar.constant(-1 if i == j else 0)
                if acc != expected:
                    raise ValueError("J*J differs from -identity")

    @staticmethod
    def pairing(first: int, second: int, third: int, fourth: int) -> "ComplexStructure":
        """J sending E_first -> E_second and E_third -> E_fourth."""
        m = [[ZERO] * 4 for _ in range(4)]
        for a, b in ((first, second), (third, fourth)):
            m[b][a] = ONE
            m[a][b] = TrigScalar.constant(-1)
        return ComplexStructure(m)

    def apply(self, v: VecField) -> VecField:
        out = []
        for i in range(4):
            acc = ZERO
            for j in range(4):
                if not self.matrix[i][j].is_zero() and not v.coeffs[j].is_zero():
                    acc = acc + self.matrix[i][j] * v.coeffs[j]
            out.append(acc)
        return VecField(tuple(out))


def apply_J(J: ComplexStructure, v: VecField) -> VecField:
    return J.apply(v)


def nijenhuis(J: ComplexStructure, v: VecField, w: VecField,
              space: FramedSpace) -> VecField:
    """N(v,w) = [Jv,Jw] - J[Jv,w] - J[v,Jw] - [v,w]."""
    jv, jw = J.apply(v), J.apply(w)
    return (
        bracket(jv, jw, space)
        - J.apply(bracket(jv, w, space))
        - J.apply(bracket(v, jw, space))
        - bracket(v, w, space)
    )


# -- exterior algebra ----------------------------------------------------------


def _sorted_with_sign(idx: Sequence[int]) -> tuple[tuple[int, ...], int] | None:
    """Sorted index tuple and permutation sign; None for repeated indices."""
    if len(set(idx)) != len(idx):
        return None
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return tuple(sorted(idx)), sign


@dataclass(frozen=True)
class KForm:
    """Exterior form of degree 0..4 over the coframe a_1..a_4."""

    degree: int
    terms: Mapping[tuple[int, ...], TrigScalar]

    @staticmethod
    def of(degree: int, terms: Mapping[tuple[int, ...], TrigLike] | None = None) -> "KForm":
        if not 0 <= degree <= 4:
            raise ValueError("degree must lie in 0..4")
        canon: dict[tuple[int, ...], TrigScalar] = {}
        for idx, c in (terms or {}).items():
            if len(idx) != degree or list(idx) != sorted(set(idx)):
                raise ValueError(f"term index {idx} invalid for degree {degree}")
            c = normalize(c)
            if not c.is_zero():
                canon[tuple(idx)] = c
        return KForm(degree, canon)

    @staticmethod
    def scalar(s: TrigLike) -> "KForm":
        return KForm.of(0, {(): s})

    @staticmethod
    def coframe(i: int) -> "KForm":
        return KForm.of(1, {(i,): 1})

    @staticmethod
    def one_form(row: Sequence[TrigLike]) -> "KForm":
        return KForm.of(1, {(i,): c for i, c in enumerate(row)})

    def component(self, idx: Sequence[int]) -> TrigScalar:
        ss = _sorted_with_sign(idx)
        if ss is None:
            return ZERO
        key, sign = ss
        c = self.terms.get(key, ZERO)
        return c if sign > 0 else -c

    def __add__(self, other: "KForm") -> "KForm":
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        keys = set(self.terms) | set(other.terms)
        return KForm.of(self.degree, {
            k: self.terms.get(k, ZERO) + other.terms.get(k, ZERO) for k in keys
        })

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __neg__(self) -> "KForm":
        return KForm(self.degree, {k: -c for k, c in self.terms.items()})

    def scale(self, s: TrigLike) -> "KForm":
        s = normalize(s)
        return KForm.of(self.degree, {k: s * c for k, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, *fields: VecField) -> TrigScalar:
        if len(fields) != self.degree:
            raise ValueError(f"degree-{self.degree} form takes {self.degree} arguments")
        if self.degree == 0:
            return self.terms.get((), ZERO)
        out = ZERO
        for idx, c in self.terms.items():
            out = out + c * _det([[fields[col].coeffs[row] for col in range(self.degree)]
                                  for row in idx])
        return out

    def interior(self, v: VecField) -> "KForm":
        if self.degree == 0:
            raise ValueError("no interior product with a 0-form")
        out: dict[tuple[int, ...], TrigScalar] = {}
        for idx, c in self.terms.items():
            for pos, i in enumerate(idx):
                if v.coeffs[i].is_zero():
                    continue
                rest = idx[:pos] + idx[pos + 1:]
                sign = -1 if pos % 2 else 1
                acc = out.get(rest, ZERO) + (v.coeffs[i] * c if sign > 0
                                             else -(v.coeffs[i] * c))
                out[rest] = acc
        return KForm.of(self.degree - 1, out)

    def kernel_field(self) -> VecField:
        """For a 3-form: the vector K with i_K(volume) equal to the form.

        The kernel of a nonzero 3-form in dimension 4 is exactly span(K).
        """
        if self.degree != 3:
            raise ValueError("kernel_field applies to 3-forms")
        comps = []
        for l in range(4):
            rest = tuple(i for i in range(4) if i != l)
            c = self.terms.get(rest, ZERO)
            comps.append(c if l % 2 == 0 else -c)
        return VecField(tuple(comps))


def wedge(a: KForm, b: KForm) -> KForm:
    if a.degree + b.degree > 4:
        raise ValueError("wedge degree exceeds the manifold dimension")
    out: dict[tuple[int, ...], TrigScalar] = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            ss = _sorted_with_sign(ia + ib)
            if ss is None:
                continue
            key, sign = ss
            c = ca * cb
            out[key] = out.get(key, ZERO) + (c if sign > 0 else -c)
    return KForm.of(a.degree + b.degree, out)


def exterior_derivative(form: KForm, space: FramedSpace) -> KForm:
    """Palais formula on frame tuples; degree-2 input supported for d(d(.)) checks."""
    if form.degree > 2:
        raise ValueError("exterior derivative supported for degrees 0..2")
    d = form.degree
    out: dict[tuple[int, ...], TrigScalar] = {}
    for idx in itertools.combinations(range(4), d + 1):
        acc = ZERO
        for a in range(d + 1):
            rest = idx[:a] + idx[a + 1:]
            term = space.frame_derivative(idx[a], form.component(rest))
            acc = acc + (term if a % 2 == 0 else -term)
        for a, b in itertools.combinations(range(d + 1), 2):
            br = space.structure_bracket(idx[a], idx[b])
            if br.is_zero():
                continue
            rest = tuple(idx[c] for c in range(d + 1) if c not in (a, b))
            val = ZERO
            for k in range(4):
                if not br.coeffs[k].is_zero():
                    val = val + br.coeffs[k] * form.component((k,) + rest)
            acc = acc + (-val if (a + b) % 2 else val)
        if not acc.is_zero():
            out[idx] = acc
    return KForm.of(d + 1, out)


# -- determinants and rank certificates ----------------------------------------


def _det(mat: list[list[TrigScalar]]) -> TrigScalar:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    out = ZERO
    for col in range(n):
        c = mat[0][col]
        if c.is_zero():
            continue
        minor = [[row[cc] for cc in range(n) if cc != col] for row in mat[1:]]
        sub = c * _det(minor)
        out = out + (sub if col % 2 == 0 else -sub)
    return out


def det_of_fields(fields: Sequence[VecField]) -> TrigScalar:
    """Determinant of the 4x4 coefficient matrix (fields as columns)."""
    if len(fields) != 4:
        raise ValueError("need exactly 4 fields for a determinant")
    return _det([[fields[col].coeffs[row] for col in range(4)] for row in range(4)])


def minors_of_fields(fields: Sequence[VecField]) -> list[TrigScalar]:
    """All maximal minors of the 4 x k coefficient matrix, k = len(fields)."""
    k = len(fields)
    out = []
    for rows in itertools.combinations(range(4), k):
        out.append(_det([[fields[col].coeffs[row] for col in range(k)]
                         for row in rows]))
    return out


def global_rank(
    vs: Sequence[VecField],
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    note: str = "",
) -> Certificate:
    """Certify that the fields have full rank len(vs) at every point.

    For four fields the witness is the determinant; for fewer it is the sum
    of squares of the maximal minors, which is positive exactly where the
    rank is maximal.
    """
    if not 1 <= len(vs) <= 4:
        raise ValueError("global_rank takes between 1 and 4 fields")
    if len(vs) == 4:
        witness = det_of_fields(vs)
    else:
        witness = ZERO
        for m in minors_of_fields(vs):
            witness = witness + m * m
    return certify_nonvanishing(witness, space, grid, tol, note=note)
