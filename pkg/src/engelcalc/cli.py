"""Batch driver: run check suites on catalog families or manifests.

Verbs:
    engelcalc catalog list
    engelcalc catalog show FAMILY [--params k=v,...]
    engelcalc verify TARGET [--suite s1,s2] [--grid N] [--tol T] [--seed S]
                            [--json PATH] [--params k=v,...]
    engelcalc geiges (--input PATH | --builtin flat|twisted)
                     [--variant j_engel|totally_real] [--nmax N] [--json PATH]

TARGET is a catalog family id or a path to a manifest JSON file.  Exit code
0 means no FAIL record (REJECTED preconditions and documented DEVIATIONs do
not fail a run).  JSON reports are canonical: sorted keys, exact rationals
as strings, and no volatile fields, so identical runs emit identical bytes.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__, catalog, geiges
from .engelcheck import (
    CheckError,
    PreconditionError,
    VerificationError,
    characteristic_foliation,
    defining_forms,
    j_engel_splitting,
    j_invariance_check,
    jofreeb_residual,
    k_engel_check,
    complex_framing,
    nijenhuis_certificate,
    structure_functions,
    totally_real_check,
    transverse_engel_check,
    verify_engel,
)
from .framecalc import Certificate, VecField, bracket, certify_vanishing
from .manifest import dump_manifest, load_manifest, manifest_from_parts

SUITES = ("engel", "jengel", "forms", "jofreeb", "kengel", "splitting",
          "geiges", "equivariance")


@dataclass
class CheckRecord:
    name: str
    status: str  # PASS | FAIL | REJECTED | DEVIATION
    certificate: Certificate | None = None
    residual_max: float | None = None
    notes: str = ""
    wall_ms: float = 0.0

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "status": self.status}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.residual_max is not None:
            out["residual_max"] = self.residual_max
        if self.notes:
            out["notes"] = self.notes
        return out


@dataclass
class Report:
    target: str
    parameters: Mapping[str, str]
    suites: tuple[str, ...]
    grid: int
    tolerance: float
    seed: int
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def overall(self) -> str:
        return "FAIL" if any(r.status == "FAIL" for r in self.records) else "PASS"

    def to_json(self) -> dict:
        return {
            "artifact": {"name": "engelcalc", "version": __version__},
            "target": self.target,
            "parameters": dict(sorted(self.parameters.items())),
            "suites": list(self.suites),
            "grid": self.grid,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "checks": [r.to_json() for r in self.records],
            "overall": self.overall,
        }


def emit_report(report: Report, format: str = "json") -> str:
    if format == "json":
        return json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    if format == "text":
        return _render_text(report)
    raise ValueError(f"unknown format {format!r}")


def _render_text(report: Report) -> str:
    lines = [f"target {report.target}   overall {report.overall}   "
             f"(grid {report.grid}, tol {report.tolerance}, seed {report.seed})"]
    if report.parameters:
        lines.append("parameters: " +
                     ", ".join(f"{k}={v}" for k, v in sorted(report.parameters.items())))
    for r in report.records:
        cert = ""
        if r.certificate is not None:
            cert = f" [{r.certificate.kind}"
            if r.certificate.bound is not None:
                cert += f", bound {r.certificate.bound:.3e}"
            cert += "]"
        note = f"  -- {r.notes}" if r.notes else ""
        lines.append(f"  {r.status:9s} {r.name}{cert} ({r.wall_ms:.1f} ms){note}")
    return "\n".join(lines) + "\n"


@dataclass
class _Target:
    name: str
    space: object
    J: object | None
    d1: VecField | None
    d2: VecField | None
    spec: catalog.FamilySpec | None = None
    mapping_torus: Mapping | None = None


def _resolve_target(target: str, params: Mapping[str, str]) -> _Target:
    if target in catalog.FAMILIES:
        spec = catalog.build_family(target, params or None)
        return _Target(target, spec.space, spec.J, spec.d1, spec.d2, spec=spec)
    path = Path(target)
    if not path.exists():
        raise SystemExit(f"error: target {target!r} is neither a catalog family "
                         f"nor a manifest file")
    try:
        mf = load_manifest(path.read_text())
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise SystemExit(f"error: malformed manifest {target}: {exc}")
    return _Target(mf.name or path.stem, mf.space, mf.J, mf.d1, mf.d2,
                   mapping_torus=mf.mapping_torus)


class _Runner:
    """Executes suites in dependency order against one target."""

    def __init__(self, tgt: _Target, grid: int, tol: float):
        self.tgt = tgt
        self.grid = grid
        self.tol = tol
        self._flag = None
        self._w = None
        self._forms = None
        self._sf = None
        self.records: list[CheckRecord] = []

    def _run(self, name: str, fn, *, status_of=None) -> object:
        t0 = time.perf_counter()
        status, result, notes, cert, residual = "PASS", None, "", None, None
        try:
            result = fn()
            if isinstance(result, Certificate):
                cert = result
                status = "PASS" if result.passed else "FAIL"
                residual = result.bound
            if status_of is not None:
                status, notes = status_of(result)
        except PreconditionError as exc:
            status, notes = "REJECTED", str(exc)
        except (VerificationError, CheckError) as exc:
            status, notes = "FAIL", str(exc)
        except ValueError as exc:
            # data the certifiers cannot handle, e.g. sampling without a
            # declarable period; report instead of crashing the batch
            status, notes = "FAIL", str(exc)
        self.records.append(CheckRecord(
            name, status, cert, residual, notes,
            wall_ms=(time.perf_counter() - t0) * 1e3))
        return result

    # -- shared intermediate results -----------------------------------------

    def flag(self):
        if self._flag is None:
            self._flag = verify_engel(self.tgt.d1, self.tgt.d2, self.tgt.space,
                                      self.grid, self.tol)
        return self._flag

    def w_field(self):
        if self._w is None:
            self._w = characteristic_foliation(self.flag(), self.tgt.space,
                                               self.grid)
        return self._w

    def forms(self):
        if self._forms is None:
            self._forms = defining_forms(self.flag(), self.tgt.J, self.tgt.space,
                                         self.grid, self.tol)
        return self._forms

    def sfuncs(self):
        if self._sf is None:
            w = self.w_field()
            self._sf = structure_functions(self.forms(), w,
                                           self.tgt.J.apply(w), self.tgt.space,
                                           self.grid, self.tol)
        return self._sf

    def _need_plane(self) -> bool:
        return self.tgt.d1 is not None and self.tgt.d2 is not None

    # -- suites ---------------------------------------------------------------

    def suite_engel(self):
        tgt = self.tgt
        self._run("engel.jacobi", lambda: _jacobi_certificate(tgt.space))
        if tgt.J is not None:
            self._run("engel.j_squared",
                      lambda: Certificate("SYMBOLIC", "vanishing",
                                          witness="identically zero",
                                          note="J*J + id, checked at construction"))
            expected = tgt.spec.j_integrable if tgt.spec is not None else True

            def _nij_status(cert):
                if cert.passed:
                    return "PASS", ""
                if not expected:
                    return "DEVIATION", (tgt.spec.notes or
                                         "quoted pairing is almost complex only")
                return "FAIL", "Nijenhuis tensor does not vanish"

            self._run("engel.nijenhuis",
                      lambda: nijenhuis_certificate(tgt.J, tgt.space, self.grid),
                      status_of=_nij_status)
        if not self._need_plane():
            self.records.append(CheckRecord(
                "engel.rank", "REJECTED",
                notes="manifest declares no distribution"))
            return
        flag = self.flag()
        for key in ("rank_d", "rank_e", "rank_tm"):
            cert = flag.certificates.get(key)
            self.records.append(CheckRecord(
                f"engel.{key}",
                "PASS" if cert is not None and cert.passed else "FAIL",
                cert, cert.bound if cert else None,
                "" if cert is not None else "not reached"))
        if flag.passed:
            self._run("engel.characteristic", self.w_field,
                      status_of=lambda w: (
                          "PASS",
                          f"flag: W = {_vec_str(w)} inside D = "
                          f"<{_vec_str(tgt.d1)}, {_vec_str(tgt.d2)}>; "
                          f"E adds [D1,D2] = {_vec_str(flag.e3)}"))
        if tgt.spec is not None and tgt.spec.expected_brackets:
            for rec in catalog.check_quoted_brackets(tgt.spec, self.grid, self.tol):
                note = rec.note
                if rec.status == "DEVIATION":
                    note += (f"; computed {_vec_str(rec.computed)}, "
                             f"quoted {_vec_str(rec.quoted)}")
                self.records.append(CheckRecord(
                    f"engel.bracket.{rec.name}", rec.status, rec.spanning,
                    None, note))

    def suite_jengel(self):
        if not self._need_plane() or self.tgt.J is None:
            self.records.append(CheckRecord("jengel", "REJECTED",
                                            notes="needs a plane field and J"))
            return
        self._run("jengel.j_invariance",
                  lambda: j_invariance_check(self.tgt.d1, self.tgt.d2, self.tgt.J,
                                             self.tgt.space, self.grid))
        self._run("jengel.complex_framing",
                  lambda: complex_framing(self.tgt.d1, self.tgt.d2, self.tgt.J,
                                          self.tgt.space, self.grid, self.tol))

    def suite_forms(self):
        if not self._need_plane() or self.tgt.J is None:
            self.records.append(CheckRecord("forms", "REJECTED",
                                            notes="needs a plane field and J"))
            return

        def _report(forms):
            alpha = _form_str(forms.alpha)
            beta = _form_str(forms.beta)
            return "PASS", f"alpha = {alpha}; beta = {beta}; {forms.normalization}"

        forms = self._run("forms.construction", self.forms, status_of=_report)
        if forms is None:
            return
        for key in sorted(forms.certificates):
            cert = forms.certificates[key]
            self.records.append(CheckRecord(
                f"forms.{key}", "PASS" if cert.passed else "FAIL", cert,
                cert.bound))
        self._run("forms.structure_functions", self.sfuncs,
                  status_of=lambda sf: ("PASS",
                                        f"c_WX = {sf.c_WX}, d_XT = {sf.d_XT}, "
                                        f"d_WR = {sf.d_WR}, d_XR = {sf.d_XR}"))

    def suite_jofreeb(self):
        if not self._need_plane() or self.tgt.J is None:
            self.records.append(CheckRecord("jofreeb", "REJECTED",
                                            notes="needs a plane field and J"))
            return

        def _go():
            w = self.w_field()
            return jofreeb_residual(self.forms(), self.sfuncs(), w,
                                    self.tgt.J.apply(w), self.tgt.J,
                                    self.tgt.space, self.grid)

        result = self._run("jofreeb.residuals", _go,
                           status_of=lambda r: (
                               "PASS" if r.certificate.passed else "FAIL", ""))
        if result is not None:
            self.records.append(CheckRecord(
                "jofreeb.residual_certificate",
                "PASS" if result.certificate.passed else "FAIL",
                result.certificate, result.certificate.bound))
            self.records.append(CheckRecord(
                "jofreeb.dalpha_squared",
                "PASS" if result.dalpha_identity.passed else "FAIL",
                result.dalpha_identity, result.dalpha_identity.bound))

    def suite_kengel(self):
        if not self._need_plane() or self.tgt.J is None:
            self.records.append(CheckRecord("kengel", "REJECTED",
                                            notes="needs a plane field and J"))
            return

        def _go():
            w = self.w_field()
            return k_engel_check(self.forms(), w, self.tgt.J.apply(w),
                                 self.tgt.space, self.grid)

        def _status(rep):
            if rep.passed:
                return "PASS", "R commutes with W, X and T"
            obs = ", ".join(f"{k} = {v}" for k, v in sorted(rep.obstructions.items()))
            return "FAIL", f"nonzero commutator coefficients: {obs}"

        rep = self._run("kengel.commutators", _go, status_of=_status)
        if rep is None:
            return
        if rep.rescaling_solvable:
            rescale_note = "a_WR = 0"
        else:
            rescale_note = rep.note or \
                f"a_WR = {rep.obstructions.get('WR.W', '0')} is a nonzero constant"
        self.records.append(CheckRecord(
            "kengel.rescaling",
            "PASS" if rep.rescaling_solvable else
            ("FAIL" if rep.rescaling_solvable is False else "REJECTED"),
            notes=rescale_note))
        self.records.append(CheckRecord(
            "kengel.dbeta_squared",
            "PASS" if rep.dbeta_squared_zero else "FAIL",
            notes="d(beta)^2 = 0" if rep.dbeta_squared_zero else
                  "d(beta)^2 is not zero"))
        if rep.passed:
            def _consistency():
                forms = self.forms()
                return transverse_engel_check(
                    forms.R.raw, self.tgt.d1, self.tgt.d2, self.tgt.J,
                    forms, self.tgt.space, self.grid)

            self._run("kengel.transverse_consistency", _consistency,
                      status_of=lambda t: (
                          "PASS" if t.conclusion.passed and t.reeb_match.passed
                          else "FAIL", ""))

    def suite_splitting(self):
        if not self._need_plane() or self.tgt.J is None:
            self.records.append(CheckRecord("splitting", "REJECTED",
                                            notes="needs a plane field and J"))
            return
        self._run("splitting.invariance",
                  lambda: j_engel_splitting(self.tgt.d1, self.tgt.d2, self.tgt.J,
                                            self.tgt.space, self.grid),
                  status_of=lambda s: (
                      "PASS" if s.invariance.passed else "FAIL",
                      "scalings tested: " + ", ".join(s.tested_scalings)))

    def suite_geiges(self, n_max: int = 8):
        if self.tgt.mapping_torus is None:
            self.records.append(CheckRecord(
                "geiges", "REJECTED",
                notes="target carries no mapping-torus data"))
            return
        mt = self.tgt.mapping_torus
        inp = geiges.MappingTorusInput(
            space=self.tgt.space, V=mt["V"], X=mt["X"], J=self.tgt.J,
            t=mt["coordinate"])

        def _status(res):
            if res.n_star is None:
                return "FAIL", f"no passing level up to n = {n_max}"
            return "PASS", f"minimal passing level n* = {res.n_star}"

        self._run("geiges.minimal_n", lambda: geiges.minimal_n_search(inp, n_max),
                  status_of=_status)

    def suite_equivariance(self):
        if self.tgt.spec is None or self.tgt.spec.family != "hyperelliptic_product":
            self.records.append(CheckRecord(
                "equivariance", "REJECTED",
                notes="only defined for hyperelliptic_product"))
            return
        self._run("equivariance.rotation",
                  lambda: catalog.hyperelliptic_equivariance_check(
                      self.tgt.spec, self.grid))


def _jacobi_certificate(space) -> Certificate:
    # construction already validates; re-derive the residuals for the record
    basis = [VecField.basis(i) for i in range(4)]
    scalars = []
    for i, j, k in itertools.combinations(range(4), 3):
        jac = (bracket(basis[i], bracket(basis[j], basis[k], space), space)
               + bracket(basis[j], bracket(basis[k], basis[i], space), space)
               + bracket(basis[k], bracket(basis[i], basis[j], space), space))
        scalars.extend(jac.coeffs)
    return certify_vanishing(scalars, space, 17, 1e-12, note="Jacobi identity")


def _vec_str(v: VecField) -> str:
    return "(" + ", ".join(str(c) for c in v.coeffs) + ")"


def _form_str(form) -> str:
    parts = []
    for (i,), c in sorted(form.terms.items()):
        parts.append(f"({c})*a{i + 1}")
    return " + ".join(parts) if parts else "0"


def run_verify(
    target: str,
    suites: Sequence[str] | None = None,
    grid: int = 17,
    tol: float = 1e-6,
    seed: int = 0,
    params: Mapping[str, str] | None = None,
) -> Report:
    """Run the selected suites against a catalog family or manifest path."""
    if suites is None:
        chosen = SUITES
    else:
        chosen = tuple(suites)
        if not chosen:
            raise SystemExit("error: empty suite selection")
    bad = [s for s in chosen if s not in SUITES]
    if bad:
        raise SystemExit(f"error: unknown suite(s) {', '.join(bad)}; "
                         f"choose from {', '.join(SUITES)}")
    tgt = _resolve_target(target, params or {})
    runner = _Runner(tgt, grid, tol)
    for suite in SUITES:  # canonical order regardless of request order
        if suite not in chosen:
            continue
        try:
            getattr(runner, f"suite_{suite}")()
        except PreconditionError as exc:
            runner.records.append(CheckRecord(suite, "REJECTED", notes=str(exc)))
        except (CheckError, ValueError) as exc:
            runner.records.append(CheckRecord(suite, "FAIL", notes=str(exc)))
    parameters = {k: str(v) for k, v in (tgt.spec.parameters.items()
                                         if tgt.spec else (params or {}).items())}
    return Report(tgt.name, parameters, chosen, grid, tol, seed, runner.records)


def _parse_params(text: str | None) -> dict[str, str]:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise SystemExit(f"error: bad parameter {item!r}; expected key=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def main(argv: Sequence[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="engelcalc",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("catalog", help="list or print the example families")
    c.add_argument("action", choices=("list", "show"))
    c.add_argument("family", nargs="?")
    c.add_argument("--params", default=None)

    v = sub.add_parser("verify", help="run check suites on a target")
    v.add_argument("target")
    v.add_argument("--suite", default=None,
                   help="comma-separated subset of: " + ", ".join(SUITES))
    v.add_argument("--grid", type=int, default=17)
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", dest="json_path", default=None)
    v.add_argument("--params", default=None)

    g = sub.add_parser("geiges", help="mapping-torus construction and search")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", dest="input_path")
    src.add_argument("--builtin", choices=("flat", "twisted"))
    g.add_argument("--variant", choices=("j_engel", "totally_real"),
                   default="j_engel")
    g.add_argument("--nmax", type=int, default=16)
    g.add_argument("--grid", type=int, default=17)
    g.add_argument("--json", dest="json_path", default=None)

    args = ap.parse_args(argv)

    if args.verb == "catalog":
        if args.action == "list":
            for fam in catalog.FAMILIES:
                spec = catalog.build_family(fam)
                params = ", ".join(f"{k}={v}" for k, v in
                                   sorted(spec.parameters.items()))
                print(f"{fam:24s} {params}")
            return 0
        if not args.family:
            raise SystemExit("error: catalog show needs a family id")
        spec = catalog.build_family(args.family, _parse_params(args.params) or None)
        doc = manifest_from_parts(spec.family, spec.space, spec.J, spec.d1,
                                  spec.d2, spec.parameters)
        sys.stdout.write(dump_manifest(doc))
        return 0

    if args.verb == "verify":
        suites = tuple(s.strip() for s in args.suite.split(",")) if args.suite \
            else None
        report = run_verify(args.target, suites, args.grid, args.tol, args.seed,
                            _parse_params(args.params))
        sys.stdout.write(emit_report(report, "text"))
        if args.json_path:
            Path(args.json_path).write_text(emit_report(report, "json"))
        return 0 if report.overall == "PASS" else 1

    if args.verb == "geiges":
        if args.builtin:
            inp = geiges.flat_torus_input() if args.builtin == "flat" \
                else geiges.twisted_torus_input()
            name = f"builtin:{args.builtin}"
        else:
            mf = load_manifest(Path(args.input_path).read_text())
            if mf.mapping_torus is None:
                raise SystemExit("error: manifest has no mapping_torus section")
            inp = geiges.MappingTorusInput(
                space=mf.space, V=mf.mapping_torus["V"], X=mf.mapping_torus["X"],
                J=mf.J, t=mf.mapping_torus["coordinate"])
            name = mf.name
        result = geiges.minimal_n_search(inp, args.nmax, grid=args.grid)
        doc = {
            "artifact": {"name": "engelcalc", "version": __version__},
            "input": name,
            "variant": args.variant,
            "n_max": args.nmax,
            "n_star": result.n_star,
            "trace": list(result.trace),
        }
        if args.variant == "totally_real" and result.n_star is not None:
            n = result.n_star
            d1, d2 = geiges.build_An(inp, n, "totally_real")
            cert = totally_real_check(d1, d2, inp.J, inp.space, args.grid * n)
            inv = j_invariance_check(d1, d2, inp.J, inp.space, args.grid * n)
            flag = verify_engel(d1, d2, inp.space, grid=args.grid * n)
            doc["totally_real"] = {
                "rank_certificate": cert.to_json(),
                "j_invariant": inv.passed,
                "engel": flag.passed,
                "engel_certificates": {k: c.to_json()
                                       for k, c in flag.certificates.items()},
            }
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        sys.stdout.write(text)
        if args.json_path:
            Path(args.json_path).write_text(text)
        return 0 if result.n_star is not None else 1

    return 2


if __name__ == "__main__":
    sys.exit(main())
