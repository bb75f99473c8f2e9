"""Command-line interface.

Subcommands: kernel, gamma, cse, jn, kiselman, newton, extremal, mc-check,
verify.  Inputs come from an instance JSON file (--spec) or inline JSON
flags; inline flags override the file.  Exit codes: 0 success / all checks
pass, 1 verification violation, 2 invalid input, 3 numeric failure.

Seeds are explicit flags with fixed defaults; no environment variables are
consulted, so identical invocations reproduce identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from ._backend import MC_BACKEND
from .core import Functional, InfiniteTailError, WeightPair
from .exponents import (
    Valuation,
    cse,
    gamma,
    jumping_number,
    kiselman,
    thinness,
    valuation_of_functional,
    valuation_of_germ,
)
from .instances import InstanceSpec
from .integrals import McIndeterminateError
from .kernels import extremal_function, kernel_curve
from .lp import newton_membership
from .serialize import (
    SCHEMA,
    SpecValidationError,
    functional_from_json,
    germ_from_json,
    germ_to_json,
    optional_weight_from_json,
    weight_from_json,
)
from .verify import run_mc_check, run_verification, slope_report


def _add_common(p: argparse.ArgumentParser, *, grid: bool = False):
    p.add_argument("--spec", help="instance JSON file")
    p.add_argument("--phi", help="inline weight JSON, e.g. '{\"pieces\":[[1,0],[0,1]]}'")
    p.add_argument("--psi", help="inline fixed-weight JSON (null/omitted for zero)")
    p.add_argument("--xi", help="inline functional JSON")
    p.add_argument("--germ", help="inline germ JSON")
    p.add_argument("--seed", type=int, default=0, help="root RNG seed (default 0)")
    p.add_argument("--samples", type=int, default=100_000, help="Monte Carlo sample count")
    p.add_argument("--tol", type=float, default=1e-9, help="decision tolerance")
    p.add_argument(
        "--format", choices=("text", "json", "csv"), default=None, help="output format"
    )
    p.add_argument(
        "--exact-rational",
        action="store_true",
        help="force exact rational arithmetic on LP-backed exponent paths",
    )
    if grid:
        p.add_argument("--grid", default=None, help="t-grid as t0:t1:steps (default 0:5:11)")


def _parse_json_flag(text: str, name: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecValidationError(f"invalid JSON in --{name}: {exc}", f"/{name}") from None


def _load_inputs(args) -> dict:
    """Resolve --spec plus inline overrides into domain objects."""
    out = {"phi": None, "psi": None, "xi": None, "germ": None, "spec": None}
    if args.spec:
        try:
            with open(args.spec, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise SpecValidationError(f"cannot read spec file: {exc}", "/spec") from None
        except json.JSONDecodeError as exc:
            raise SpecValidationError(f"invalid JSON: {exc}", "/spec") from None
        spec = InstanceSpec.from_json(raw)
        out["spec"] = spec
        out["phi"] = spec.phi
        out["psi"] = spec.psi
        if spec.functionals:
            out["xi"] = spec.functionals[0]
        if spec.germs:
            out["germ"] = spec.germs[0]
    if args.phi:
        out["phi"] = weight_from_json(_parse_json_flag(args.phi, "phi"), "/phi")
    if args.psi:
        obj = _parse_json_flag(args.psi, "psi")
        out["psi"] = optional_weight_from_json(obj, "/psi")
    dim = out["phi"].dimension if out["phi"] is not None else None
    if args.xi:
        out["xi"] = functional_from_json(_parse_json_flag(args.xi, "xi"), dim, "/xi")
    if args.germ:
        out["germ"] = germ_from_json(_parse_json_flag(args.germ, "germ"), dim, "/germ")
    return out


def _require(inputs, key):
    if inputs[key] is None:
        raise SpecValidationError(f"missing required input {key}", f"/{key}")
    return inputs[key]


def _weights(inputs) -> WeightPair:
    return WeightPair(_require(inputs, "phi"), inputs["psi"])


def _parse_grid(text, spec: InstanceSpec | None):
    if text:
        parts = text.split(":")
        if len(parts) != 3:
            raise SpecValidationError("grid must be t0:t1:steps", "/grid")
        try:
            t0, t1, steps = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise SpecValidationError("grid must be numeric t0:t1:steps", "/grid") from None
        if steps < 1 or t1 < t0 or t0 < 0:
            raise SpecValidationError("grid range invalid", "/grid")
        if steps == 1:
            return (t0,)
        return tuple(t0 + (t1 - t0) * i / (steps - 1) for i in range(steps))
    if spec is not None:
        return spec.grid_values
    return tuple(0.5 * i for i in range(11))


def _vector_flag(text: str, name: str):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise SpecValidationError(f"--{name} must be a comma-separated vector", f"/{name}") from None


def _print_number(value, fmt, payload_key, extra=None):
    """Scalar results: bare value in text mode, schema envelope in json mode."""
    exp_json = value.to_json()
    if fmt in (None, "text"):
        if value.exact is not None and value.exact.denominator == 1:
            print(int(value.exact))
        elif value.value in (math.inf, -math.inf):
            print("+inf" if value.value > 0 else "-inf")
        else:
            print(repr(value.value))
        return
    body = {"schema": SCHEMA, payload_key: exp_json}
    if extra:
        body.update(extra)
    print(json.dumps(body, sort_keys=True))


def _cmd_gamma(args) -> int:
    inputs = _load_inputs(args)
    val = gamma(_require(inputs, "xi"), _weights(inputs), exact=args.exact_rational)
    _print_number(val, args.format, "gamma")
    return 0


def _cmd_cse(args) -> int:
    inputs = _load_inputs(args)
    val = cse(_weights(inputs), exact=args.exact_rational)
    _print_number(val, args.format, "cse")
    return 0


def _cmd_jn(args) -> int:
    inputs = _load_inputs(args)
    val = jumping_number(_require(inputs, "germ"), _weights(inputs), exact=args.exact_rational)
    _print_number(val, args.format, "jumping_number")
    return 0


def _cmd_kiselman(args) -> int:
    inputs = _load_inputs(args)
    nu = Valuation(_vector_flag(args.w, "w"))
    phi = _require(inputs, "phi")
    out = {
        "schema": SCHEMA,
        "kiselman": float(kiselman(nu, phi)),
        "thinness": float(thinness(nu)),
    }
    if inputs["germ"] is not None:
        out["germ_valuation"] = float(valuation_of_germ(nu, inputs["germ"]))
    if inputs["xi"] is not None:
        v = valuation_of_functional(nu, inputs["xi"])
        out["functional_valuation"] = "+inf" if v == math.inf else float(v)
    if args.format in (None, "text"):
        print(repr(out["kiselman"]))
    else:
        print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_newton(args) -> int:
    inputs = _load_inputs(args)
    phi = _require(inputs, "phi")
    mu = _vector_flag(args.mu, "mu")
    cls = newton_membership(phi.newton_body(), mu, tol=args.tol)
    if args.format in (None, "text"):
        print(cls)
    else:
        print(json.dumps({"schema": SCHEMA, "classification": cls, "mu": list(mu)}, sort_keys=True))
    return 0


def _cmd_extremal(args) -> int:
    inputs = _load_inputs(args)
    ext = extremal_function(_require(inputs, "xi"), _weights(inputs), args.t)
    out = {
        "schema": SCHEMA,
        "t": args.t,
        "germ": germ_to_json(ext.germ),
        "log_kernel": ext.log_kernel,
        "kernel": ext.kernel_value,
    }
    print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_kernel(args) -> int:
    inputs = _load_inputs(args)
    grid = _parse_grid(args.grid, inputs["spec"])
    curve = kernel_curve(
        _require(inputs, "xi"),
        _weights(inputs),
        grid,
        samples=args.samples,
        seed=args.seed,
    )
    if args.format == "json":
        out = {
            "schema": SCHEMA,
            "grid": list(curve.grid),
            "log_K": list(curve.log_k),
            "secant_slope": list(curve.secant_slopes),
            "second_difference": list(curve.second_differences),
            "method": list(curve.methods),
            "stderr": list(curve.stderrs),
        }
        print(json.dumps(out, sort_keys=True))
    else:
        sys.stdout.write(curve.to_csv())
    return 0


def _cmd_slope(args) -> int:
    inputs = _load_inputs(args)
    report = slope_report(
        _require(inputs, "xi"),
        _weights(inputs),
        args.t_max,
        samples=args.samples,
        seed=args.seed,
    )
    print(json.dumps(report, sort_keys=True))
    return 0


def _cmd_mc_check(args) -> int:
    report = run_mc_check(args.seed, samples=args.samples, instances=args.instances)
    print(json.dumps(report, sort_keys=True))
    return 0 if report["passed"] else 1


def _cmd_verify(args) -> int:
    report = run_verification(args.seed, samples=args.samples, instances=args.instances)
    if args.format == "text":
        print(report.to_text())
    else:
        print(report.to_json())
        print(report.to_text(), file=sys.stderr)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xicse",
        description="Kernels, singularity exponents, and jumping numbers "
        "for toric weights on the unit polydisc.",
    )
    parser.add_argument("--version", action="version", version=f"xicse {__version__} (mc backend: {MC_BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", help="kernel curve over a t-grid (CSV by default)")
    _add_common(p, grid=True)
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("gamma", help="singularity exponent of a functional")
    _add_common(p)
    p.set_defaults(func=_cmd_gamma)

    p = sub.add_parser("cse", help="integrability threshold of the weight pair")
    _add_common(p)
    p.set_defaults(func=_cmd_cse)

    p = sub.add_parser("jn", help="jumping number of a germ")
    _add_common(p)
    p.set_defaults(func=_cmd_jn)

    p = sub.add_parser("kiselman", help="directional numbers along a valuation")
    _add_common(p)
    p.add_argument("--w", required=True, help="valuation direction, comma separated")
    p.set_defaults(func=_cmd_kiselman)

    p = sub.add_parser("newton", help="Newton body membership classification")
    _add_common(p)
    p.add_argument("--mu", required=True, help="query point, comma separated")
    p.set_defaults(func=_cmd_newton)

    p = sub.add_parser("extremal", help="extremal germ attaining the kernel")
    _add_common(p)
    p.add_argument("--t", type=float, default=0.0, help="sublevel parameter")
    p.set_defaults(func=_cmd_extremal)

    p = sub.add_parser("slope", help="secant-slope report toward the exponent")
    _add_common(p)
    p.add_argument("--t-max", type=float, default=40.0)
    p.set_defaults(func=_cmd_slope)

    p = sub.add_parser("mc-check", help="Monte Carlo vs exact cross-validation")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--instances", type=int, default=30)
    p.set_defaults(func=_cmd_mc_check)

    p = sub.add_parser("verify", help="run the full property-verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--instances", type=int, default=None, help="cap per-check instance counts")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecValidationError as exc:
        print(json.dumps(exc.to_json(), sort_keys=True), file=sys.stderr)
        return 2
    except (InfiniteTailError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True), file=sys.stderr)
        return 2
    except (McIndeterminateError, ArithmeticError) as exc:
        print(json.dumps({"error": str(exc), "kind": "numeric"}, sort_keys=True), file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
