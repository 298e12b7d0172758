"""Oscillating plane fields on mapping tori and the minimal-twist search.

Given a framing {V, JV, X, JX} with V projecting to the base circle
coordinate t (so V(t) = 1), the twisted plane field at level n is

    A_n = V + (1/n) sin(n^2 t) X - (1/n) cos(n^2 t) JX,      D_n = <A_n, J A_n>.

For n large enough D_n is a complex-line Engel structure; the module builds
the family, compares the exact brackets against their leading-order
expressions, fits the decay rate of the residuals, and searches for the
smallest level with a passing certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .engelcheck import (
    EngelFlag,
    PreconditionError,
    j_invariance_check,
    verify_engel,
)
from .framecalc import (
    Certificate,
    ComplexStructure,
    FramedSpace,
    VecField,
    bracket,
    global_rank,
    grid_points,
)
from .trigring import Frequency, TrigScalar

__all__ = [
    "MappingTorusInput",
    "flat_torus_input",
    "twisted_torus_input",
    "build_An",
    "leading_order_residual",
    "residual_decay_fit",
    "minimal_n_search",
    "SearchResult",
]

GRID_PER_LEVEL = 17  # samples per period, scaled by the level n


@dataclass(frozen=True)
class MappingTorusInput:
    """Framing data over a circle coordinate; validated at construction."""

    space: FramedSpace
    V: VecField
    X: VecField
    J: ComplexStructure
    t: str
    a: TrigScalar = None  # L_{JV} t, derived
    framing_certificate: Certificate = None

    def __post_init__(self):
        if self.t not in self.space.coords:
            raise PreconditionError(f"coordinate {self.t!r} is not declared")
        vt = self.space.coordinate_derivative(self.V, self.t)
        if vt != TrigScalar.constant(1):
            raise PreconditionError(f"the framing requires V(t) = 1 exactly, "
                                    f"got {vt}")
        jv = self.J.apply(self.V)
        object.__setattr__(self, "a",
                           self.space.coordinate_derivative(jv, self.t))
        cert = global_rank([self.V, jv, self.X, self.J.apply(self.X)], self.space)
        if not cert.passed:
            raise PreconditionError("V, JV, X, JX do not frame the tangent bundle")
        object.__setattr__(self, "framing_certificate", cert)


def flat_torus_input() -> MappingTorusInput:
    """Product framing on the flat 4-torus: V = d/dt, constant J, a = 0."""
    space = FramedSpace(
        frame=("V", "JV", "X", "JX"),
        coords=("t",),
        derivation={(0, "t"): 1},
        name="flat_torus",
    )
    return MappingTorusInput(
        space=space,
        V=VecField.basis(0),
        X=VecField.basis(2),
        J=ComplexStructure.pairing(0, 1, 2, 3),
        t="t",
    )


def twisted_torus_input() -> MappingTorusInput:
    """Flat torus with V tilted by sin(t) X; still a = 0, but [V, JV] != 0.

    The tilt makes the first-order correction to the bracket expansion
    genuinely nonzero, so residuals decay like 1/n instead of vanishing.
    """
    space = FramedSpace(
        frame=("E1", "E2", "E3", "E4"),
        coords=("t",),
        derivation={(0, "t"): 1},
        name="twisted_torus",
    )
    sin_t = TrigScalar.sine({"t": Frequency.of(1)})
    return MappingTorusInput(
        space=space,
        V=VecField.of(1, 0, sin_t, 0),
        X=VecField.basis(2),
        J=ComplexStructure.pairing(0, 1, 2, 3),
        t="t",
    )


def _waves(inp: MappingTorusInput, n: int) -> tuple[TrigScalar, TrigScalar]:
    freq = {inp.t: Frequency.of(n * n)}
    return TrigScalar.sine(freq), TrigScalar.cosine(freq)


def build_An(inp: MappingTorusInput, n: int,
             variant: str = "j_engel") -> tuple[VecField, VecField]:
    """The level-n plane field generators for either variant.

    j_engel:      (A_n, J A_n) with A_n = V + (1/n) sin(n^2 t) X
                                          - (1/n) cos(n^2 t) JX
    totally_real: (V, JV + (1/n) cos(n^2 t) X + (1/n) sin(n^2 t) JX)
    """
    if n < 1:
        raise ValueError("the level n must be a positive integer")
    s, c = _waves(inp, n)
    inv = Fraction(1, n)
    jx = inp.J.apply(inp.X)
    if variant == "j_engel":
        a_n = inp.V + inp.X.scale(s * inv) - jx.scale(c * inv)
        return a_n, inp.J.apply(a_n)
    if variant == "totally_real":
        jv = inp.J.apply(inp.V)
        return inp.V, jv + inp.X.scale(c * inv) + jx.scale(s * inv)
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class ResidualReport:
    n: int
    sup_first: float
    sup_second: float
    first_exact_zero: bool
    second_exact_zero: bool


def leading_order_residual(inp: MappingTorusInput, n: int,
                           grid: int | None = None) -> ResidualReport:
    """Sup-norm distance of the exact scaled brackets from their leading terms.

    The leading expressions are
        (1/n) [A_n, JA_n]            ~ -(s + a c) X + (c - a s) JX
        (1/n^2) [A_n, (1/n)[...]]    ~ -(c - a s) X - (s + a c) JX
    with s, c the level-n waves; the differences are bounded by C/n.
    """
    a_n, ja_n = build_An(inp, n, "j_engel")
    s, c = _waves(inp, n)
    a = inp.a
    jx = inp.J.apply(inp.X)
    inv = Fraction(1, n)

    b1 = bracket(a_n, ja_n, inp.space).scale(inv)
    lead1 = inp.X.scale(-(s + a * c)) + jx.scale(c - a * s)
    res1 = b1 - lead1

    b2 = bracket(a_n, b1, inp.space).scale(inv * inv)
    lead2 = inp.X.scale(-(c - a * s)) + jx.scale(-(s + a * c))
    res2 = b2 - lead2

    per_axis = grid if grid is not None else GRID_PER_LEVEL * n
    sups = []
    for res in (res1, res2):
        if res.is_zero():
            sups.append(0.0)
            continue
        points, _ = grid_points(inp.space, [c for c in res.coeffs
                                            if not c.is_zero()], per_axis)
        sups.append(max(max(abs(v) for v in res.evaluate(p)) for p in points))
    return ResidualReport(n, sups[0], sups[1], res1.is_zero(), res2.is_zero())


def residual_decay_fit(inp: MappingTorusInput,
                       levels: Sequence[int] = (2, 4, 8, 16, 32),
                       grid: int | None = None) -> dict:
    """Least-squares log-log slopes of both residual norms over the levels."""
    reports = [leading_order_residual(inp, n, grid) for n in levels]

    def slope(values: Sequence[float]) -> float | None:
        pairs = [(math.log(n), math.log(v))
                 for n, v in zip(levels, values) if v > 0.0]
        if len(pairs) < 2:
            return None
        mx = sum(x for x, _ in pairs) / len(pairs)
        my = sum(y for _, y in pairs) / len(pairs)
        den = sum((x - mx) ** 2 for x, _ in pairs)
        return sum((x - mx) * (y - my) for x, y in pairs) / den

    sup1 = [r.sup_first for r in reports]
    sup2 = [r.sup_second for r in reports]
    return {
        "levels": list(levels),
        "sup_first": sup1,
        "sup_second": sup2,
        "slope_first": slope(sup1),
        "slope_second": slope(sup2),
    }


@dataclass(frozen=True)
class SearchResult:
    n_star: int | None
    flag: EngelFlag | None
    trace: tuple[dict, ...]


def minimal_n_search(inp: MappingTorusInput, n_max: int,
                     grid: int = GRID_PER_LEVEL,
                     tol: float = 1e-6) -> SearchResult:
    """Smallest level whose plane field earns an Engel certificate.

    Levels are swept in order with grid resolution scaled by the level (the
    waves oscillate at frequency n^2).  The result is deterministic; on
    exhaustion the trace still carries the per-level certificates.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    trace: list[dict] = []
    for n in range(1, n_max + 1):
        a_n, ja_n = build_An(inp, n, "j_engel")
        flag = verify_engel(a_n, ja_n, inp.space, grid=grid * n, tol=tol)
        entry = {"n": n, "passed": flag.passed}
        for key, cert in flag.certificates.items():
            entry[key] = cert.kind
            if cert.bound is not None:
                entry[f"{key}_bound"] = cert.bound
        inv = j_invariance_check(a_n, ja_n, inp.J, inp.space, grid=grid * n)
        entry["j_invariant"] = inv.passed
        trace.append(entry)
        if flag.passed and inv.passed:
            return SearchResult(n, flag, tuple(trace))
    return SearchResult(None, None, tuple(trace))
