"""Certification of Engel flags, defining forms, Reeb fields, and symmetries.

The checks work over a :class:`FramedSpace` with a candidate plane field
D = <D1, D2>.  Rank claims come back as :class:`Certificate` values; identity
claims (residuals, invariance of spans) are certified symbolically whenever
the normal form collapses, with deterministic grid sampling as the fallback.

Reeb fields are represented as exact quotients ``raw / normaliser`` where the
normaliser is a certified nowhere-zero scalar.  Working in this fraction
field keeps every identity check exact even when the normaliser is not a
constant, in which case plain division would leave the trig-polynomial ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .framecalc import (
    DEFAULT_GRID,
    DEFAULT_TOL,
    Certificate,
    ComplexStructure,
    FramedSpace,
    KForm,
    VecField,
    bracket,
    certify_nonvanishing,
    certify_vanishing,
    det_of_fields,
    exterior_derivative,
    global_rank,
    minors_of_fields,
    wedge,
)
from .trigring import TrigLike, TrigScalar, normalize

__all__ = [
    "CheckError",
    "PreconditionError",
    "VerificationError",
    "EngelFlag",
    "Frac",
    "FracField",
    "DefiningForms",
    "StructureFunctions",
    "verify_engel",
    "characteristic_foliation",
    "j_invariance_check",
    "complex_framing",
    "totally_real_check",
    "annihilating_form",
    "defining_forms",
    "structure_functions",
    "nijenhuis_certificate",
    "jofreeb_residual",
    "j_engel_splitting",
    "transverse_engel_check",
    "k_engel_check",
]

ZERO = TrigScalar.constant(0)
ONE = TrigScalar.constant(1)

IDENTITY_TOL = 1e-9


class CheckError(Exception):
    """Base class for verification failures."""


class PreconditionError(CheckError):
    """A stated precondition does not hold; the check is rejected, not failed."""


class VerificationError(CheckError):
    """A certified condition failed."""


# -- exact fractions over the trig ring ---------------------------------------


@dataclass(frozen=True)
class Frac:
    """Exact quotient of trig scalars; the denominator vanishes nowhere."""

    num: TrigScalar
    den: TrigScalar = ONE

    @staticmethod
    def of(x: TrigLike) -> "Frac":
        return Frac(normalize(x))

    def __add__(self, other: "Frac") -> "Frac":
        if self.den == other.den:
            return Frac(self.num + other.num, self.den)
        return Frac(self.num * other.den + other.num * self.den,
                    self.den * other.den)

    def __sub__(self, other: "Frac") -> "Frac":
        return self + (-other)

    def __neg__(self) -> "Frac":
        return Frac(-self.num, self.den)

    def __mul__(self, other: "Frac") -> "Frac":
        return Frac(self.num * other.num, self.den * other.den)

    def invert(self) -> "Frac":
        if self.num.is_zero():
            raise ZeroDivisionError("inverting a zero scalar")
        return Frac(self.den, self.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def as_trig(self) -> TrigScalar | None:
        """Exact TrigScalar value when the denominator divides out."""
        const = self.den.constant_value()
        if const is None:
            return None
        try:
            return self.num.div_constant(const)
        except ValueError:
            return None

    def evaluate(self, point: Mapping[str, float]) -> float:
        return self.num.evaluate(point) / self.den.evaluate(point)

    def __str__(self) -> str:
        exact = self.as_trig()
        if exact is not None:
            return str(exact)
        return f"({self.num}) / ({self.den})"


@dataclass(frozen=True)
class FracField:
    """Vector field raw/den with a nowhere-zero scalar denominator."""

    raw: VecField
    den: TrigScalar = ONE

    def __add__(self, other: "FracField") -> "FracField":
        if self.den == other.den:
            return FracField(self.raw + other.raw, self.den)
        return FracField(self.raw.scale(other.den) + other.raw.scale(self.den),
                         self.den * other.den)

    def __sub__(self, other: "FracField") -> "FracField":
        return self + (-other)

    def __neg__(self) -> "FracField":
        return FracField(-self.raw, self.den)

    def scale(self, q: Frac) -> "FracField":
        return FracField(self.raw.scale(q.num), self.den * q.den)

    def is_zero(self) -> bool:
        return self.raw.is_zero()

    def apply_J(self, J: ComplexStructure) -> "FracField":
        return FracField(J.apply(self.raw), self.den)

    def pair(self, form: KForm) -> Frac:
        return Frac(form(self.raw), self.den)

    def as_field(self) -> VecField | None:
        const = self.den.constant_value()
        if const is None:
            return None
        try:
            return VecField(tuple(c.div_constant(const) for c in self.raw.coeffs))
        except ValueError:
            return None

    def evaluate(self, point: Mapping[str, float]) -> tuple[float, ...]:
        d = self.den.evaluate(point)
        return tuple(c.evaluate(point) / d for c in self.raw.coeffs)


def frac_bracket(a: FracField, b: FracField, space: FramedSpace) -> FracField:
    """[u/s, v/r] = (s r [u,v] - s u(r) v + r v(s) u) / (s r)^2."""
    u, s = a.raw, a.den
    v, r = b.raw, b.den
    core = bracket(u, v, space).scale(s * r)
    core = core - v.scale(s * space.apply(u, r)) + u.scale(r * space.apply(v, s))
    return FracField(core, s * s * r * r)


def _plain(v: VecField) -> FracField:
    return FracField(v, ONE)


def _zero_certificate(
    scalars: Sequence[TrigScalar],
    space: FramedSpace,
    grid: int,
    tol: float,
    note: str = "",
) -> Certificate:
    return certify_vanishing(scalars, space, grid, tol, note=note)


# -- Engel flags ----------------------------------------------------------------


@dataclass(frozen=True)
class EngelFlag:
    """The flag W < D < E < TM with its rank certificates."""

    d1: VecField
    d2: VecField
    e3: VecField
    certificates: Mapping[str, Certificate]
    w: VecField | None = None

    @property
    def passed(self) -> bool:
        needed = ("rank_d", "rank_e", "rank_tm")
        return all(k in self.certificates and self.certificates[k].passed
                   for k in needed)

    def with_characteristic(self, w: VecField) -> "EngelFlag":
        return EngelFlag(self.d1, self.d2, self.e3, self.certificates, w)


def verify_engel(
    d1: VecField,
    d2: VecField,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
) -> EngelFlag:
    """Certify rank(D) = 2, rank(D + [D1,D2]) = 3, and rank([D,E]) = 4.

    The top rank is witnessed by the pair of determinants obtained by
    adjoining [D1, E3] and [D2, E3]: at each point at least one of them must
    be nonzero, so the sampled witness is their sum of squares.
    """
    certs: dict[str, Certificate] = {}
    certs["rank_d"] = global_rank([d1, d2], space, grid, tol)
    e3 = bracket(d1, d2, space)
    if not certs["rank_d"].passed:
        return EngelFlag(d1, d2, e3, certs)
    certs["rank_e"] = global_rank([d1, d2, e3], space, grid, tol)
    if not certs["rank_e"].passed:
        return EngelFlag(d1, d2, e3, certs)
    det1 = det_of_fields([d1, d2, e3, bracket(d1, e3, space)])
    det2 = det_of_fields([d1, d2, e3, bracket(d2, e3, space)])
    cert_tm = None
    for w, label in ((det1, "det with [D1,E3]"), (det2, "det with [D2,E3]")):
        const = w.constant_value()
        if const is not None and not const.is_zero():
            cert_tm = Certificate("SYMBOLIC", "nonvanishing", witness=str(const),
                                  note=label)
            break
    if cert_tm is None:
        cert_tm = certify_nonvanishing(det1 * det1 + det2 * det2, space, grid, tol,
                                       note="sum of squares of the two top minors")
    certs["rank_tm"] = cert_tm
    return EngelFlag(d1, d2, e3, certs)


def annihilating_form(d1: VecField, d2: VecField, e3: VecField) -> KForm:
    """The 1-form u -> det(D1, D2, E3, u); its kernel is span(D1, D2, E3)."""
    coeffs = [det_of_fields([d1, d2, e3, VecField.basis(i)]) for i in range(4)]
    return KForm.one_form(coeffs)


def characteristic_foliation(
    flag: EngelFlag,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = IDENTITY_TOL,
) -> VecField:
    """The line field W in D with [W, E] inside E.

    Writing W = l1 D1 + l2 D2, the constraint alpha([W, E3]) = 0 is pointwise
    linear with coefficients u_i = alpha([D_i, E3]), so W = -u2 D1 + u1 D2.
    The Engel certificate guarantees (u1, u2) never both vanish.
    """
    if not flag.passed:
        raise PreconditionError("characteristic foliation needs a certified flag")
    alpha = annihilating_form(flag.d1, flag.d2, flag.e3)
    u1 = alpha(bracket(flag.d1, flag.e3, space))
    u2 = alpha(bracket(flag.d2, flag.e3, space))
    if u1.is_zero() and u2.is_zero():
        raise VerificationError("characteristic direction undetermined: "
                                "both defining coefficients vanish identically")
    w = flag.d1.scale(-u2) + flag.d2.scale(u1)
    residuals = [alpha(bracket(w, e, space)) for e in (flag.d1, flag.d2, flag.e3)]
    cert = _zero_certificate(residuals, space, grid, tol,
                             note="alpha([W, E-generators])")
    if not cert.passed:
        raise VerificationError(
            f"[W, E] does not stay in E; worst residual {cert.bound} "
            f"at {cert.witness_point}"
        )
    return w


def j_invariance_check(
    d1: VecField,
    d2: VecField,
    J: ComplexStructure,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = IDENTITY_TOL,
) -> Certificate:
    """JD = D, certified by vanishing of the maximal minors of (D1, D2, JDi)."""
    scalars: list[TrigScalar] = []
    for v in (J.apply(d1), J.apply(d2)):
        scalars.extend(minors_of_fields([d1, d2, v]))
    return _zero_certificate(scalars, space, grid, tol,
                             note="minors of (D1, D2, J D_i)")


def complex_framing(
    d1: VecField,
    d2: VecField,
    J: ComplexStructure,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
) -> Certificate:
    """Global rank-4 certificate for {W, JW, [W,JW], J[W,JW]}.

    This framing exists exactly when D is J-invariant Engel, and its global
    existence is the computable counterpart of the vanishing of both Chern
    classes.
    """
    flag = verify_engel(d1, d2, space, grid, tol)
    if not flag.passed:
        raise PreconditionError("complex framing needs a certified Engel structure")
    if not j_invariance_check(d1, d2, J, space, grid).passed:
        raise PreconditionError("complex framing needs JD = D")
    w = characteristic_foliation(flag, space, grid)
    jw = J.apply(w)
    y = bracket(w, jw, space)
    return global_rank([w, jw, y, J.apply(y)], space, grid, tol,
                       note="framing W, JW, [W,JW], J[W,JW]")


def totally_real_check(
    d1: VecField,
    d2: VecField,
    J: ComplexStructure,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
) -> Certificate:
    """JD meets D only in zero, certified by rank of {D1, D2, JD1, JD2}."""
    return global_rank([d1, d2, J.apply(d1), J.apply(d2)], space, grid, tol,
                       note="rank of (D1, D2, J D1, J D2)")


# -- defining forms and the Reeb distribution -----------------------------------


@dataclass(frozen=True)
class DefiningForms:
    """alpha, beta = alpha o J, and the Reeb pair T, R they determine."""

    alpha: KForm
    beta: KForm
    T: FracField
    R: FracField
    certificates: Mapping[str, Certificate]
    normalization: str = ""

    @property
    def T_field(self) -> VecField | None:
        return self.T.as_field()

    @property
    def R_field(self) -> VecField | None:
        return self.R.as_field()


def _compose_with_J(alpha: KForm, J: ComplexStructure) -> KForm:
    row = []
    for i in range(4):
        acc = ZERO
        for k in range(4):
            c = alpha.component((k,))
            if not c.is_zero() and not J.matrix[k][i].is_zero():
                acc = acc + c * J.matrix[k][i]
        row.append(acc)
    return KForm.one_form(row)


def _reeb_from_threeform(
    omega: KForm,
    unit_form: KForm,
    zero_form: KForm,
    space: FramedSpace,
    grid: int,
    tol: float,
    label: str,
    certs: dict[str, Certificate],
) -> FracField:
    kernel = omega.kernel_field()
    if kernel.is_zero():
        raise VerificationError(f"{label}: defining 3-form vanishes identically")
    den = unit_form(kernel)
    cert = certify_nonvanishing(den, space, grid, tol, note=f"{label} normaliser")
    certs[f"{label}_normaliser"] = cert
    if not cert.passed:
        raise VerificationError(f"{label}: normalising pairing vanishes somewhere")
    certs[f"{label}_annihilation"] = _zero_certificate(
        [zero_form(kernel)], space, grid, IDENTITY_TOL,
        note=f"{label} annihilates the complementary form")
    if not certs[f"{label}_annihilation"].passed:
        raise VerificationError(f"{label}: complementary pairing does not vanish")
    return FracField(kernel, den)


def defining_forms(
    flag: EngelFlag,
    J: ComplexStructure,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
) -> DefiningForms:
    """Construct alpha (annihilating E), beta = alpha o J, and the Reeb pair.

    alpha is normalised, when the pairing is an exactly invertible constant,
    so that alpha([D1, E3]) = 1 (falling back to [D2, E3], then to the raw
    form).  The three defining-form conditions are certified and a failure
    raises: it signals either a non-Engel plane field or a beta outside the
    expected conformal class.
    """
    if not flag.passed:
        raise PreconditionError("defining forms need a certified Engel flag")
    alpha = annihilating_form(flag.d1, flag.d2, flag.e3)
    normalization = "raw"
    for gen, label in ((flag.d1, "[D1,[D1,D2]]"), (flag.d2, "[D2,[D1,D2]]")):
        s0 = alpha(bracket(gen, flag.e3, space)).constant_value()
        if s0 is not None and not s0.is_zero():
            try:
                alpha = KForm.one_form(
                    [alpha.component((i,)).div_constant(s0) for i in range(4)]
                )
                normalization = f"alpha({label}) = 1"
                break
            except ValueError:
                continue
    beta = _compose_with_J(alpha, J)
    d_alpha = exterior_derivative(alpha, space)
    d_beta = exterior_derivative(beta, space)
    certs: dict[str, Certificate] = {}

    ada = wedge(alpha, d_alpha)
    witness = ZERO
    for c in ada.terms.values():
        witness = witness + c * c
    certs["alpha_da_nonzero"] = certify_nonvanishing(
        witness, space, grid, tol, note="alpha ^ d(alpha) != 0")

    abdb = wedge(wedge(alpha, beta), d_beta)
    certs["alpha_beta_dbeta_nonzero"] = certify_nonvanishing(
        abdb.component((0, 1, 2, 3)), space, grid, tol,
        note="alpha ^ beta ^ d(beta) != 0")

    adab = wedge(ada, beta)
    certs["alpha_da_beta_zero"] = _zero_certificate(
        [adab.component((0, 1, 2, 3))], space, grid, IDENTITY_TOL,
        note="alpha ^ d(alpha) ^ beta = 0")

    for key in ("alpha_da_nonzero", "alpha_beta_dbeta_nonzero",
                "alpha_da_beta_zero"):
        if not certs[key].passed:
            raise VerificationError(f"defining-form condition failed: {key}")

    T = _reeb_from_threeform(wedge(alpha, d_beta), beta, alpha, space, grid, tol,
                             "T", certs)
    R = _reeb_from_threeform(wedge(beta, d_beta), alpha, beta, space, grid, tol,
                             "R", certs)
    return DefiningForms(alpha, beta, T, R, certs, normalization)


@dataclass(frozen=True)
class StructureFunctions:
    """The pairings c_WX, d_XT, d_WR, d_XR of brackets against the forms."""

    c_WX: TrigScalar
    d_XT: Frac
    d_WR: Frac
    d_XR: Frac
    certificate: Certificate


def structure_functions(
    forms: DefiningForms,
    w: VecField,
    x: VecField,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
) -> StructureFunctions:
    """c_WX = beta([W,X]), d_XT = alpha([X,T]), d_WR, d_XR; c_WX must not vanish."""
    c_wx = forms.beta(bracket(w, x, space))
    cert = certify_nonvanishing(c_wx, space, grid, tol, note="c_WX = beta([W,X])")
    if not cert.passed:
        raise VerificationError("c_WX vanishes; D is not bracket-generating "
                                "against these forms")
    d_xt = frac_bracket(_plain(x), forms.T, space).pair(forms.alpha)
    d_wr = frac_bracket(_plain(w), forms.R, space).pair(forms.alpha)
    d_xr = frac_bracket(_plain(x), forms.R, space).pair(forms.alpha)
    return StructureFunctions(c_wx, d_xt, d_wr, d_xr, cert)


def nijenhuis_certificate(
    J: ComplexStructure,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = IDENTITY_TOL,
) -> Certificate:
    """Certify N_J = 0 on all frame pairs (integrability of J)."""
    from .framecalc import nijenhuis

    scalars: list[TrigScalar] = []
    for i, j in itertools.combinations(range(4), 2):
        n = nijenhuis(J, VecField.basis(i), VecField.basis(j), space)
        scalars.extend(n.coeffs)
    return _zero_certificate(scalars, space, grid, tol, note="Nijenhuis tensor")


@dataclass(frozen=True)
class JofReebResult:
    residual_T: FracField
    residual_R: FracField
    certificate: Certificate
    dalpha_identity: Certificate


def jofreeb_residual(
    forms: DefiningForms,
    sf: StructureFunctions,
    w: VecField,
    x: VecField,
    J: ComplexStructure,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = IDENTITY_TOL,
) -> JofReebResult:
    """Residuals of the closed formulas for J(T) and J(R).

    With q1 = (d_WR + d_XT)/c_WX and q2 = d_XR/c_WX the expected identities
    are J(T) = R + q1 W + q2 JW and J(R) = -T + q2 W - q1 JW.  They rely on
    the integrability of J, so a nonzero Nijenhuis tensor rejects the check.
    Additionally certifies d(alpha)^2 = -2 d_WR alpha ^ beta ^ d(beta).
    """
    n_cert = nijenhuis_certificate(J, space, grid, tol)
    if not n_cert.passed:
        raise PreconditionError("J is not integrable (nonzero Nijenhuis tensor); "
                                "the Reeb rotation formulas do not apply")
    c_inv = Frac(ONE, sf.c_WX)
    q1 = (sf.d_WR + sf.d_XT) * c_inv
    q2 = sf.d_XR * c_inv
    res_t = (forms.T.apply_J(J) - forms.R
             - _plain(w).scale(q1) - _plain(J.apply(w)).scale(q2))
    res_r = (forms.R.apply_J(J) + forms.T
             - _plain(w).scale(q2) + _plain(J.apply(w)).scale(q1))
    cert = _zero_certificate(
        list(res_t.raw.coeffs) + list(res_r.raw.coeffs), space, grid, tol,
        note="J(T), J(R) rotation residuals (numerators)")

    d_alpha = exterior_derivative(forms.alpha, space)
    lhs = wedge(d_alpha, d_alpha).component((0, 1, 2, 3))
    abdb = wedge(wedge(forms.alpha, forms.beta),
                 exterior_derivative(forms.beta, space)).component((0, 1, 2, 3))
    # cross-multiplied: lhs * den(d_WR) + 2 * num(d_WR) * abdb = 0
    identity = lhs * sf.d_WR.den + TrigScalar.constant(2) * sf.d_WR.num * abdb
    dalpha_cert = _zero_certificate([identity], space, grid, tol,
                                    note="d(alpha)^2 + 2 d_WR alpha^beta^d(beta)")
    return JofReebResult(res_t, res_r, cert, dalpha_cert)


# -- splitting, transverse fields, K-structure ----------------------------------


@dataclass(frozen=True)
class SplittingResult:
    w: VecField
    jw: VecField
    z: FracField
    jz: FracField
    invariance: Certificate
    tested_scalings: tuple[str, ...]


def j_engel_splitting(
    d1: VecField,
    d2: VecField,
    J: ComplexStructure,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = IDENTITY_TOL,
    scalings: Sequence[TrigLike] | None = None,
) -> SplittingResult:
    """The four line fields W, JW, JZ, Z and the scaling-invariance certificate.

    Z = span(R) must not move when alpha is replaced by lambda*alpha: for each
    tested nowhere-zero lambda the raw Reeb directions of the rescaled forms
    must stay proportional to the original one at every point.
    """
    flag = verify_engel(d1, d2, space, grid)
    if not flag.passed:
        raise PreconditionError("splitting needs a certified Engel structure")
    if not j_invariance_check(d1, d2, J, space, grid).passed:
        raise PreconditionError("splitting needs JD = D")
    w = characteristic_foliation(flag, space, grid)
    forms = defining_forms(flag, J, space, grid)
    if scalings is None:
        scalings = ["2", "3/2"]
        if space.coords:
            scalings.append(f"2 + cos({space.coords[0]})")
    base = forms.R.raw
    residuals: list[TrigScalar] = []
    labels = []
    for lam in scalings:
        lam_s = normalize(lam)
        labels.append(str(lam_s))
        alpha_l = forms.alpha.scale(lam_s)
        beta_l = _compose_with_J(alpha_l, J)
        kernel = wedge(beta_l, exterior_derivative(beta_l, space)).kernel_field()
        if kernel.is_zero():
            raise VerificationError(f"rescaled Reeb direction vanished for "
                                    f"lambda = {lam_s}")
        residuals.extend(minors_of_fields([base, kernel]))
    cert = _zero_certificate(residuals, space, grid, tol,
                             note="span(R_lambda) = span(R)")
    return SplittingResult(w, J.apply(w), forms.R, forms.R.apply_J(J), cert,
                           tuple(labels))


@dataclass(frozen=True)
class TransverseReport:
    engel_field: Certificate
    conclusion: Certificate
    reeb_match: Certificate
    rescaled_alpha: KForm | None
    rescaled_beta: KForm | None
    note: str


def transverse_engel_check(
    z: VecField,
    d1: VecField,
    d2: VecField,
    J: ComplexStructure,
    forms: DefiningForms,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = IDENTITY_TOL,
) -> TransverseReport:
    """For an Engel field Z transverse to E with JZ in E: certify i_Z(beta^dbeta)=0.

    Preconditions are rejected (not failed): alpha(Z) must vanish nowhere and
    beta(Z) must vanish identically.  The conclusion certificate implies
    Z spans the Reeb direction of the rescaled forms alpha/alpha(Z).
    """
    az = forms.alpha(z)
    trans = certify_nonvanishing(az, space, grid, DEFAULT_TOL, note="alpha(Z)")
    if not trans.passed:
        raise PreconditionError("Z is not transverse to E: alpha(Z) vanishes "
                                f"(witness {trans.witness_point})")
    bz = _zero_certificate([forms.beta(z)], space, grid, tol, note="beta(Z)")
    if not bz.passed:
        raise PreconditionError("JZ is not tangent to E: beta(Z) is not zero")
    minors: list[TrigScalar] = []
    for gen in (d1, d2):
        minors.extend(minors_of_fields([d1, d2, bracket(z, gen, space)]))
    engel_field = _zero_certificate(minors, space, grid, tol,
                                    note="L_Z D stays in D")
    if not engel_field.passed:
        raise VerificationError("Z does not preserve D; it is not an Engel field")
    contraction = wedge(forms.beta, exterior_derivative(forms.beta, space)).interior(z)
    conclusion = _zero_certificate(list(contraction.terms.values()), space, grid,
                                   tol, note="i_Z(beta ^ d(beta)) = 0")
    reeb_match = _zero_certificate(minors_of_fields([forms.R.raw, z]), space, grid,
                                   tol, note="span(Z) = span(R)")
    # the rescaled pair alpha/alpha(Z), (alpha/alpha(Z)) o J has Z as its
    # Reeb field; the division is exact only for invertible constant alpha(Z)
    alpha_r = beta_r = None
    az_const = az.constant_value()
    if az_const is not None:
        try:
            alpha_r = KForm.one_form(
                [forms.alpha.component((i,)).div_constant(az_const)
                 for i in range(4)])
            beta_r = _compose_with_J(alpha_r, J)
        except ValueError:
            alpha_r = beta_r = None
    note = f"alpha(Z) = {az}" + ("" if alpha_r is not None
                                 else "; rescaling kept implicit (non-constant)")
    return TransverseReport(engel_field, conclusion, reeb_match,
                            alpha_r, beta_r, note)


@dataclass(frozen=True)
class KEngelReport:
    passed: bool
    commutators: Mapping[str, Certificate]
    obstructions: Mapping[str, str]
    rescaling_solvable: bool | None
    dbeta_squared_zero: bool
    note: str = ""


def _expand_in_basis(
    target: FracField,
    basis: Sequence[FracField],
    space: FramedSpace,
) -> list[Frac] | None:
    """Coefficients of target in a 4-element basis, by Cramer's rule."""
    raws = [b.raw for b in basis]
    det = det_of_fields(raws)
    if det.is_zero():
        return None
    out = []
    for i in range(4):
        cols = list(raws)
        cols[i] = target.raw
        # clear the denominators: target.raw/target.den = sum coef_i raw_i/den_i
        num = det_of_fields(cols) * basis[i].den
        out.append(Frac(num, det * target.den))
    return out


def k_engel_check(
    forms: DefiningForms,
    w: VecField,
    x: VecField,
    space: FramedSpace,
    grid: int = DEFAULT_GRID,
    tol: float = IDENTITY_TOL,
) -> KEngelReport:
    """Diagnose whether R commutes with W, X and T.

    All three commutators vanishing exhibits defining forms and a framing
    admitting a compatible metric with R as a Killing Engel field.  On
    failure the report carries the expansion of each commutator in the
    adapted frame (W, X, T, R) plus the solvability of the rescaling
    equation, which for translation-invariant data amounts to a_WR = 0.
    """
    t, r = forms.T, forms.R
    names = ("W", "X", "T", "R")
    basis = [_plain(w), _plain(x), t, r]
    comms = {
        "WR": frac_bracket(_plain(w), r, space),
        "XR": frac_bracket(_plain(x), r, space),
        "TR": frac_bracket(t, r, space),
    }
    certs: dict[str, Certificate] = {}
    obstructions: dict[str, str] = {}
    all_zero = True
    a_wr: Frac | None = None
    for key, br in comms.items():
        certs[key] = _zero_certificate(list(br.raw.coeffs), space, grid, tol,
                                       note=f"[{key[0]},{key[1]}] = 0")
        if not certs[key].passed:
            all_zero = False
        coefs = _expand_in_basis(br, basis, space)
        if coefs is not None:
            for name, c in zip(names, coefs):
                if not c.is_zero():
                    obstructions[f"{key}.{name}"] = str(c)
            if key == "WR":
                a_wr = coefs[0]
    if a_wr is None:
        rescaling = None
        note = "adapted frame degenerate; no obstruction expansion"
    else:
        exact = a_wr.as_trig()
        if exact is not None and exact.constant_value() is not None:
            rescaling = exact.is_zero()
            note = ""
        else:
            rescaling = None
            note = "a_WR is not constant; rescaling equation not decided"
    dbeta = exterior_derivative(forms.beta, space)
    dbeta2 = wedge(dbeta, dbeta).component((0, 1, 2, 3))
    return KEngelReport(
        passed=all_zero,
        commutators=certs,
        obstructions=obstructions,
        rescaling_solvable=rescaling,
        dbeta_squared_zero=dbeta2.is_zero(),
        note=note,
    )
