"""Command-line front end.

    nilclose {closure-orbit | closure-polymap | rationalize | malcev | equi |
              verify | examples} --input FILE [--out-dir DIR] [--seed N]
              [--tol X] [--samples N]

Exit codes: 0 success, 2 schema or parse error, 3 verification failure,
4 mathematical precondition failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources

import jsonschema
import numpy as np

from .closure import (
    MonomialCurve,
    TorusClosure,
    orbit_closure,
    polymap_closure,
    torus_curve_closure,
    torus_product_frontier,
)
from .equi import NumericCurve, cud_numeric, cud_verdict_polynomial, small_frequencies
from .exactfield import QQ, FieldError, NumberField, Subspace, ZeroDivisorError, parse_rational
from .malcev import weak_malcev_through
from .nilcore import GroupSpec, GroupSpecError, NotInGroupError, PolyMatrix, ut_dim
from .parser import ParseError, Ln1p, parse, to_poly, variables
from .poly import DegreeCapError
from .subalg import Subalgebra, SubalgebraError, rational_closure
from .verify import (
    SamplePlan,
    SampleSet,
    hausdorff_check,
    sample_orbit,
    sample_predicted,
    sample_torus_closure,
    sample_torus_curve,
    sample_torus_product,
)

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_MATH = 0, 2, 3, 4

COMMANDS = ("closure-orbit", "closure-polymap", "rationalize", "malcev", "equi", "verify", "examples")
EXAMPLES = ("heisenberg-line", "heisenberg-abelian", "kronecker", "ln-curve", "hrushovski")


class InputError(Exception):
    """Malformed input; message carries a location."""


class MathError(Exception):
    """Input is well-formed but violates a mathematical precondition."""


class VerificationFailed(Exception):
    def __init__(self, payload):
        super().__init__("verification failed")
        self.payload = payload


# -- resources ------------------------------------------------------------------

def load_schema(name: str) -> dict:
    text = resources.files("nilclose").joinpath("schemas", name + ".schema.json").read_text()
    return json.loads(text)


def example_text(name: str) -> str:
    if name not in EXAMPLES:
        raise InputError("unknown example %r; choose from %s" % (name, ", ".join(EXAMPLES)))
    return resources.files("nilclose").joinpath("problems", name + ".json").read_text()


def _locate(text: str, path) -> tuple:
    """Best-effort (line, column) of a JSON path inside ``text``."""
    pos = 0
    for key in path:
        if isinstance(key, str):
            hit = text.find(json.dumps(key), pos)
            if hit >= 0:
                pos = hit
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def load_problem(text: str) -> dict:
    """Parse and schema-validate a problem file; InputError carries line/column."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("invalid JSON: %s at line %d, column %d" % (exc.msg, exc.lineno, exc.colno))
    validator = jsonschema.Draft202012Validator(load_schema("problem"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = list(err.absolute_path)
        line, col = _locate(text, path)
        where = "/".join(str(p) for p in path) or "<root>"
        raise InputError("schema error at %s (line %d, column %d): %s"
                         % (where, line, col, err.message))
    doc["_text"] = text
    return doc


def _expr(doc, text: str, where: str, allow_ln: bool = False):
    try:
        return parse(text, allow_ln=allow_ln)
    except ParseError as exc:
        line, col = _locate(doc.get("_text", ""), where.split("/"))
        raise InputError("%s: %s in %r (entry at line %d, column %d)"
                         % (where, exc.args[0], text, line, col))


# -- problem decoding -------------------------------------------------------------

def build_field(doc) -> NumberField:
    spec = doc.get("field")
    if not spec:
        return QQ
    try:
        return NumberField(spec["min_poly"], spec.get("root_interval"))
    except FieldError as exc:
        raise MathError("field: %s" % exc)


def _n(doc) -> int:
    g = doc.get("group")
    if g is None:
        raise InputError("this command needs a 'group'")
    if isinstance(g, dict):
        return g["n"]
    if "n" not in doc:
        raise InputError("group 'full_ut' needs a top-level 'n'")
    return doc["n"]


def _poly(ast, field, names, where):
    try:
        return to_poly(ast, field, names)
    except ValueError as exc:
        raise InputError("%s: %s" % (where, exc))


def _constant(doc, field, text, where):
    ast = _expr(doc, text, where)
    if variables(ast):
        raise InputError("%s: expected a constant, got %r" % (where, text))
    return _poly(ast, field, (), where).constant_term()


def parse_vector(doc, field, n: int, raw, where: str) -> list:
    """An algebra element given as a flat above-diagonal list or a full matrix."""
    d = ut_dim(n)
    if raw and isinstance(raw[0], list):
        if len(raw) != n or any(len(r) != n for r in raw):
            raise InputError("%s: expected a %dx%d matrix" % (where, n, n))
        out = []
        for i in range(n):
            for j in range(n):
                v = _constant(doc, field, raw[i][j], "%s/%d/%d" % (where, i, j))
                if j <= i and v:
                    raise MathError("%s: entry (%d,%d) must be zero in a nilpotent matrix"
                                    % (where, i + 1, j + 1))
                if j > i:
                    out.append(v)
        return out
    if len(raw) != d:
        raise InputError("%s: expected %d above-diagonal entries, got %d" % (where, d, len(raw)))
    return [_constant(doc, field, x, "%s/%d" % (where, k)) for k, x in enumerate(raw)]


def build_group(doc, field) -> GroupSpec:
    n = _n(doc)
    g = doc.get("group")
    try:
        if isinstance(g, dict) and "algebra_basis" in g:
            vecs = [parse_vector(doc, field, n, v, "group/algebra_basis/%d" % k)
                    for k, v in enumerate(g["algebra_basis"])]
            return GroupSpec(n, field_subspace(field, n, vecs))
        return GroupSpec.full(n, field)
    except GroupSpecError as exc:
        raise MathError("group: %s" % exc)


def field_subspace(field, n, vecs):
    return Subspace(field, ut_dim(n), vecs)


def build_subalgebra(doc, group) -> Subalgebra:
    sub = doc.get("subalgebra")
    if sub is None:
        return Subalgebra.zero(group)
    vecs = [parse_vector(doc, group.field, group.n, v, "subalgebra/basis/%d" % k)
            for k, v in enumerate(sub["basis"])]
    try:
        return Subalgebra.from_vectors(group, vecs)
    except SubalgebraError as exc:
        raise MathError("subalgebra: %s" % exc)


def build_map(doc, group) -> PolyMatrix:
    spec = doc.get("map")
    if spec is None:
        raise InputError("this command needs a 'map'")
    field, n = group.field, group.n
    names = spec["vars"]
    d = len(names)
    result = None
    for k, fac in enumerate(spec["factors"]):
        kind = "exp" if "exp" in fac else "matrix"
        M = fac[kind]
        where = "map/factors/%d/%s" % (k, kind)
        if len(M) != n or any(len(r) != n for r in M):
            raise InputError("%s: expected a %dx%d matrix" % (where, n, n))
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                ast = _expr(doc, M[i][j], "%s/%d/%d" % (where, i, j))
                unknown = variables(ast) - set(names)
                if unknown:
                    raise InputError("%s/%d/%d: unknown variables %s"
                                     % (where, i, j, sorted(unknown)))
                row.append(_poly(ast, field, names, "%s/%d/%d" % (where, i, j)))
            rows.append(row)
        try:
            if kind == "exp":
                P = PolyMatrix.from_dense(rows, field, d, kind="nilpotent")
                U = PolyMatrix.exp_of(P)
            else:
                U = PolyMatrix.from_dense(rows, field, d, kind="unipotent")
        except DegreeCapError as exc:
            raise MathError("%s: %s" % (where, exc))
        except ValueError as exc:
            raise MathError("%s: %s" % (where, exc))
        result = U if result is None else result * U
    return result


def _is_polynomial_ast(ast) -> bool:
    stack = [ast]
    while stack:
        node = stack.pop()
        if isinstance(node, Ln1p):
            return False
        stack.extend(v for v in vars(node).values() if not isinstance(v, (str, int, Fraction)))
    return True


def build_curve(doc, field, spec, where="curve"):
    """Returns (NumericCurve, MonomialCurve or None)."""
    theta = field.theta_float if field.degree > 1 else 0.0
    if "components" in spec:
        asts = [_expr(doc, c, "%s/components/%d" % (where, k), allow_ln=True)
                for k, c in enumerate(spec["components"])]
        for k, a in enumerate(asts):
            if variables(a) - {"t"}:
                raise InputError("%s/components/%d: curves use the variable t only" % (where, k))
        numeric = NumericCurve.from_expressions(asts, theta=theta)
        numeric = NumericCurve(numeric.n, numeric.value, numeric.deriv,
                               "(" + ", ".join(spec["components"]) + ")")
        mono = None
        if all(_is_polynomial_ast(a) for a in asts):
            polys = [_poly(a, field, ("t",), "%s/components/%d" % (where, k))
                     for k, a in enumerate(asts)]
            terms = {}
            for i, p in enumerate(polys):
                for (e,), c in p.terms.items():
                    vec = terms.setdefault(e, [field.zero] * len(polys))
                    vec[i] = c
            mono = MonomialCurve.make([(e, v) for e, v in terms.items()], len(polys), field)
        return numeric, mono
    terms = []
    for k, t in enumerate(spec["terms"]):
        coeff = [_constant(doc, field, c, "%s/terms/%d/coeff/%d" % (where, k, i))
                 for i, c in enumerate(t["coeff"])]
        terms.append((parse_rational(t["exponent"]), coeff))
    n = spec.get("n") or (len(spec["terms"][0]["coeff"]) if spec["terms"] else None)
    if n is None:
        raise InputError("%s: give 'n' for a curve without terms" % where)
    try:
        mono = MonomialCurve.make(terms, n, field)
    except ValueError as exc:
        raise InputError("%s: %s" % (where, exc))
    return NumericCurve.from_monomial(mono), mono


# -- options ----------------------------------------------------------------------

def _options(doc, args) -> dict:
    opts = dict(doc.get("options", {}))
    if args.seed is not None:
        opts["seed"] = args.seed
    if args.tol is not None:
        opts["tol"] = args.tol
        opts["tol_containment"] = args.tol
    if args.samples is not None:
        opts["samples"] = args.samples
    return opts


def _validated(payload: dict, schema: str) -> dict:
    jsonschema.validate(payload, load_schema(schema))
    return payload


# -- commands ---------------------------------------------------------------------

def cmd_closure_orbit(doc, opts) -> dict:
    field = build_field(doc)
    group = build_group(doc, field)
    h = build_subalgebra(doc, group)
    return _validated(orbit_closure(h).to_json(), "closure_result")


def cmd_closure_polymap(doc, opts) -> dict:
    field = build_field(doc)
    group = build_group(doc, field)
    F = build_map(doc, group)
    try:
        result = polymap_closure(F, group)
    except NotInGroupError as exc:
        raise MathError("map: %s" % exc)
    return _validated(result.to_json(), "closure_result")


def _subalgebra_json(h: Subalgebra, input_dim: int) -> dict:
    return {"format": 1, "n": h.group.n, "input_dim": input_dim, "dim": h.dim,
            "basis": h.space.to_json(), "rational": h.is_rational()}


def cmd_rationalize(doc, opts) -> dict:
    field = build_field(doc)
    group = build_group(doc, field)
    h = build_subalgebra(doc, group)
    return _validated(_subalgebra_json(rational_closure(h), h.dim), "subalgebra")


def cmd_malcev(doc, opts) -> dict:
    field = build_field(doc)
    group = build_group(doc, field)
    h = build_subalgebra(doc, group)
    B = weak_malcev_through(h)
    out = {"format": 1}
    out.update(B.to_json())
    out["prefixes_closed"] = B.prefixes_closed()
    return _validated(out, "malcev")


def cmd_equi(doc, opts):
    """Returns (verdict JSON, report CSV text)."""
    field = build_field(doc)
    if "curve" not in doc:
        raise InputError("equi needs a 'curve'")
    numeric, mono = build_curve(doc, field, doc["curve"])
    ms = opts.get("ms") or small_frequencies(numeric.n, opts.get("frequencies", 8))
    for m in ms:
        if len(m) != numeric.n:
            raise InputError("options/ms: frequency %s has the wrong length" % (m,))
        if not any(m):
            raise MathError("options/ms: frequencies must be nonzero")
    Ts = opts.get("Ts", [100.0, 1000.0, 10000.0])
    report = cud_numeric(numeric, ms, Ts, bar=opts.get("bar", 0.02), tol=opts.get("tol", 1e-6))
    verdict = report.to_json()
    if mono is not None and mono.is_polynomial():
        verdict["exact"] = cud_verdict_polynomial(mono)
    return _validated(verdict, "equi_verdict"), report.to_csv()


def _plan(opts, d: int, default_range=(0.0, 1e4), count_key="samples", default_count=10 ** 5,
          seed_offset=0) -> SamplePlan:
    lo, hi = opts.get("t_range", default_range)
    return SamplePlan(((lo, hi),) * d, opts.get("strategy", "low-discrepancy"),
                      int(opts.get(count_key, default_count)), int(opts.get("seed", 0)) + seed_offset,
                      opts.get("scale", "linear"))


def cmd_verify(doc, opts):
    """Returns (report JSON, samples CSV text); raises VerificationFailed on failure."""
    field = build_field(doc)
    delta = opts.get("delta", 0.125)
    tol_c = opts.get("tol_containment", opts.get("tol", 1e-6))
    tol_d = opts.get("tol_density", 0.2)
    enforce = tuple(opts.get("enforce", ("containment", "density")))
    extra = {}
    if "map" in doc:
        group = build_group(doc, field)
        F = build_map(doc, group)
        try:
            result = polymap_closure(F, group)
        except NotInGroupError as exc:
            raise MathError("map: %s" % exc)
        orbit = sample_orbit(F, _plan(opts, F.d))
        predicted = sample_predicted(result, _plan(opts, 0, count_key="predicted_samples",
                                                   default_count=20000, seed_offset=1))
        extra["closure"] = result.to_json()
    elif "curve" in doc:
        numeric, mono = build_curve(doc, field, doc["curve"])
        orbit = sample_torus_curve(numeric, _plan(opts, 1))
        pplan = _plan(opts, 1, count_key="predicted_samples", default_count=10000, seed_offset=1)
        if opts.get("predicted", "closure") == "full-torus":
            full = TorusClosure(tuple(field.zero for _ in range(numeric.n)),
                                Subspace.full(field, numeric.n), (), True)
            predicted = sample_torus_closure(full, pplan)
        else:
            if mono is None or not mono.is_polynomial():
                raise MathError("curve: the exact closure needs a polynomial curve; "
                                "set options.predicted to 'full-torus' to test density")
            closure = torus_curve_closure(mono)
            predicted = sample_torus_closure(closure, pplan)
            extra["closure"] = closure.to_json()
    elif "curves" in doc:
        curves = [build_curve(doc, field, c, "curves/%d" % k)[1] for k, c in enumerate(doc["curves"])]
        plan = _plan(opts, len(curves))
        x = plan.params()
        cols = [c.evaluate(x[:, k]) for k, c in enumerate(curves)]
        v = np.hstack(cols)
        orbit = SampleSet("torus", v - np.floor(v), v.shape[1], raw=v)
        pieces = torus_product_frontier(curves)
        predicted = sample_torus_product(pieces, _plan(opts, 1, count_key="predicted_samples",
                                                       default_count=4000, seed_offset=1))
    else:
        raise InputError("verify needs a 'map', a 'curve' or 'curves'")
    report = hausdorff_check(orbit, predicted, delta, tol_c, tol_d, enforce=enforce)
    payload = report.to_json()
    payload.update(extra)
    _validated(payload, "verify_report")
    csv_text = orbit.to_csv()
    if not report.passed:
        raise VerificationFailed((payload, csv_text))
    return payload, csv_text


# -- entry point ------------------------------------------------------------------

def _write(out_dir, name, text):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, name), "w") as fh:
        fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilclose", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("name", nargs="?", help="example name (examples command only)")
    p.add_argument("--input", help="problem file (JSON), or '-' for stdin")
    p.add_argument("--out-dir", help="directory for side files (CSV samples and reports)")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--samples", type=int)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)

    def emit(obj):
        stdout.write(json.dumps(obj, indent=2) + "\n")

    try:
        if args.command == "examples":
            name = args.name or args.input
            if not name:
                emit({"format": 1, "examples": list(EXAMPLES)})
                return EXIT_OK
            text = example_text(name)
            if args.out_dir:
                _write(args.out_dir, name + ".json", text)
            stdout.write(text)
            return EXIT_OK
        if not args.input:
            raise InputError("--input FILE is required for %s" % args.command)
        if args.input == "-":
            text = sys.stdin.read()
        elif not os.path.exists(args.input) and args.input in EXAMPLES:
            text = example_text(args.input)
        else:
            try:
                with open(args.input) as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError("cannot read %s: %s" % (args.input, exc.strerror))
        doc = load_problem(text)
        opts = _options(doc, args)
        if args.command == "equi":
            verdict, csv_text = cmd_equi(doc, opts)
            if args.out_dir:
                _write(args.out_dir, "weyl.csv", csv_text)
                _write(args.out_dir, "verdict.json", json.dumps(verdict, indent=2) + "\n")
            emit(verdict)
        elif args.command == "verify":
            try:
                payload, csv_text = cmd_verify(doc, opts)
                code = EXIT_OK
            except VerificationFailed as exc:
                (payload, csv_text), code = exc.payload, EXIT_VERIFY
            if args.out_dir:
                _write(args.out_dir, "samples.csv", csv_text)
                _write(args.out_dir, "report.json", json.dumps(payload, indent=2) + "\n")
            emit(payload)
            if code:
                stderr.write("verification failed: %s\n" % ", ".join(payload["failed_directions"]))
            return code
        else:
            handler = {"closure-orbit": cmd_closure_orbit, "closure-polymap": cmd_closure_polymap,
                       "rationalize": cmd_rationalize, "malcev": cmd_malcev}[args.command]
            out = handler(doc, opts)
            if args.out_dir:
                _write(args.out_dir, args.command + ".json", json.dumps(out, indent=2) + "\n")
            emit(out)
        return EXIT_OK
    except InputError as exc:
        stderr.write("input error: %s\n" % exc)
        return EXIT_INPUT
    except (MathError, NotInGroupError, GroupSpecError, SubalgebraError, FieldError,
            DegreeCapError, ZeroDivisorError, OverflowError) as exc:
        stderr.write("precondition failed: %s\n" % exc)
        return EXIT_MATH


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
