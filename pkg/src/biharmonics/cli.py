"""Command-line front end: spectra, radial bases, separable products,
catalog verification, and sample classification.

Configuration precedence: command-line flag > BIHARMONICS_* environment
variable > key=value config file (--config) > built-in default.

Exit codes: 0 success, 1 verification failure, 2 usage or construction
error.
"""

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import exprlang, jets
from .errors import BiharmonicsError, ConstructionError, DomainError
from .geometry import (ModelSpace, SeparableField, WarpFunction,
                       bilaplacian_radial,
                       bilaplacian_separable_radial_factor)
from .harmonics import HomogeneousPolynomial, harmonic_basis
from .punctured import fit_family, validate
from .radial import (QuadratureConfig, closed_form_basis,
                     radial_biharmonic_basis, span_match)
from .separable import build as build_separable
from .sphere import SphereFunction, spectra
from .verify import (EuclideanSpace, Sampler, SphereSpace, classify,
                     default_sampler, run_catalog, sphere_points)

_DEFAULTS = {
    "format": "table",
    "seed": 0,
    "sample_count": 50,
    "quad_abs_tol": 1e-10,
    "quad_rel_tol": 1e-10,
    "tol": 1e-6,
}

_ENV_PREFIX = "BIHARMONICS_"


def _load_config_file(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConstructionError("bad config line %r" % line)
            key, _, val = line.partition("=")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def resolve_config(args):
    """flag > environment > config file > default, per key."""
    file_vals = {}
    if getattr(args, "config", None):
        file_vals = _load_config_file(args.config)
    out = {}
    for key, default in _DEFAULTS.items():
        val = getattr(args, key, None)
        if val is None:
            env = os.environ.get(_ENV_PREFIX + key.upper())
            if env is not None:
                val = env
            elif key in file_vals:
                val = file_vals[key]
            else:
                val = default
        out[key] = type(default)(val)
    return out


def _quad_config(cfg, r0=None):
    return QuadratureConfig(abs_tol=cfg["quad_abs_tol"],
                            rel_tol=cfg["quad_rel_tol"],
                            base_point=r0)


def _emit(data, cfg, table_renderer=None):
    if cfg["format"] == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    elif table_renderer is not None:
        print(table_renderer())
    else:
        print(json.dumps(data, indent=2, sort_keys=True))


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _meta_path(out_path):
    base, ext = os.path.splitext(out_path)
    return (base if ext == ".csv" else out_path) + ".meta.json"


# subcommands ---------------------------------------------------------------

def cmd_spectrum(args, cfg):
    orders = tuple(args.k_laplacian or ())
    entries = spectra(args.m, args.kmax, orders=orders)
    data = [e.to_json_dict() for e in entries]

    def table():
        cols = "k lambda bi buckling".split()
        lines = ["  ".join("%10s" % c for c in cols
                           + ["lap^%d" % o for o in orders])]
        for e in entries:
            row = [e.k, e.laplace, e.bi, e.buckling] + \
                  [e.k_laplacian[o] for o in orders]
            lines.append("  ".join("%10g" % v for v in row))
        lines.append("# degree-2 restrictions all buckle at nu = 2(m+1) = %g"
                     % (2 * (args.m + 1)))
        return "\n".join(lines)

    if cfg["format"] == "csv":
        import io
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["k", "lambda", "bi", "buckling"]
                   + ["lap^%d" % o for o in orders])
        for e in entries:
            w.writerow([e.k, e.laplace, e.bi, e.buckling]
                       + [e.k_laplacian[o] for o in orders])
        print(buf.getvalue(), end="")
        return 0
    _emit(data, cfg, table)
    return 0


def _space_for_sigma(sigma, m, domain=None):
    if sigma in ("r", "sin", "sinh", "euclidean", "spherical", "hyperbolic"):
        return ModelSpace.from_tag(sigma, m)
    # custom warp from an expression in r, with an explicit domain
    expr = exprlang.parse_expression(sigma)
    fn = exprlang.radial_field(expr)
    lo, hi = domain or (0.05, 3.0)
    warp = WarpFunction(fn, (lo, hi), tag="custom")
    return ModelSpace(m, warp)


def cmd_radial_basis(args, cfg):
    domain = None
    if args.domain:
        lo, hi = (float(t) for t in args.domain.split(","))
        domain = (lo, hi)
    space = _space_for_sigma(args.sigma, args.m, domain)
    qcfg = _quad_config(cfg, args.r0)
    basis = radial_biharmonic_basis(space, qcfg)
    lo, hi = basis.default_interval()
    if domain:
        lo, hi = max(lo, domain[0] + 0.05), min(hi, domain[1] - 0.05)
    rs = np.linspace(lo, hi, cfg["sample_count"])
    values = basis.sample(rs)

    status = 0
    check_result = None
    if args.check:
        try:
            closed = closed_form_basis(args.sigma, args.m, qcfg)
        except (DomainError, ConstructionError) as exc:
            raise ConstructionError(
                "--check: no closed form available: %s" % exc) from exc
        resid = span_match(basis.functions, closed.functions, rs)
        check_result = {"span_residual": resid,
                        "closed_labels": closed.labels,
                        "pass": bool(resid < cfg["tol"])}
        print("span check vs {%s}: residual %.3e -> %s"
              % (", ".join(closed.labels), resid,
                 "PASS" if check_result["pass"] else "FAIL"))
        if not check_result["pass"]:
            status = 1

    meta = dict(basis.meta)
    meta.update({"samples": int(cfg["sample_count"]), "interval": [lo, hi]})
    if check_result:
        meta["check"] = check_result
    rows = [[r] + list(v) for r, v in zip(rs, values)]
    if args.out:
        _write_csv(args.out, ["r", "w1", "w2", "w3", "w4"], rows)
        with open(_meta_path(args.out), "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
        print("wrote %s and %s" % (args.out, _meta_path(args.out)))
    else:
        w = csv.writer(sys.stdout)
        w.writerow(["r", "w1", "w2", "w3", "w4"])
        w.writerows(rows)
    return status


def cmd_separable(args, cfg):
    if args.k < 1:
        raise ConstructionError("separation degree k must be >= 1")
    coeffs = [float(t) for t in args.coeffs.split(",")]
    if len(coeffs) != 4:
        raise ConstructionError("--coeffs needs c1,c2,c3,c4")
    space = _space_for_sigma(args.sigma, args.m)
    if args.angular:
        with open(args.angular) as fh:
            poly = HomogeneousPolynomial.from_json_dict(json.load(fh))
        from .harmonics import SphericalHarmonic
        angular = SphericalHarmonic(poly)
    else:
        angular = harmonic_basis(space.m, args.k)[0]
    qcfg = _quad_config(cfg)
    product = build_separable(space, args.k, angular, coeffs, qcfg)

    lo, hi = default_sampler(space).region
    lo = max(lo, product.pair.valid_interval[0] + 0.05)
    hi = min(hi, product.pair.valid_interval[1] - 0.05)
    rs = np.linspace(lo, hi, max(4, cfg["sample_count"] // 5))
    thetas = sphere_points(space.m, 8, cfg["seed"])
    resid = max(abs(bilaplacian_separable_radial_factor(
        space, product.radial, args.k, float(r))) for r in rs)
    scale = max(abs(product(float(r), th)) for r in rs for th in thetas)
    passed = resid < cfg["tol"] * (1.0 + scale)
    print("bi-laplacian residual %.3e (scale %.3g) -> %s"
          % (resid, scale, "PASS" if passed else "FAIL"))

    rows = [[float(r), ti, product(float(r), th)]
            for r in rs for ti, th in enumerate(thetas)]
    meta = {"sigma": space.warp.tag, "m": space.m, "k": args.k,
            "c1": coeffs[0], "c2": coeffs[1], "c3": coeffs[2],
            "c4": coeffs[3], "solution_source": product.pair.source,
            "residual": resid}
    if args.out:
        _write_csv(args.out, ["r", "theta_index", "value"], rows)
        with open(_meta_path(args.out), "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
        print("wrote %s and %s" % (args.out, _meta_path(args.out)))
    return 0 if passed else 1


def _parse_space(spec):
    spec = spec.strip().lower()
    if spec.startswith("sphere"):
        return SphereSpace(int(spec[len("sphere"):]))
    if spec.startswith("euclidean"):
        return EuclideanSpace(int(spec[len("euclidean"):]))
    if spec.startswith("r") and spec[1:].isdigit():
        return EuclideanSpace(int(spec[1:]))
    if spec.startswith("model:"):
        _, sigma, m = spec.split(":")
        return ModelSpace.from_tag(sigma, int(m))
    raise ConstructionError("cannot parse space %r" % spec)


def cmd_verify(args, cfg):
    if args.catalog:
        report = run_catalog(tol=cfg["tol"], seed=cfg["seed"])
        if cfg["format"] == "json":
            print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
        else:
            print(report.format_table())
        return 0 if report.ok else 1
    if not args.field:
        raise ConstructionError("verify needs --catalog or --field EXPR")
    space = _parse_space(args.space or "euclidean2")
    expr = exprlang.parse_expression(args.field)
    if isinstance(space, SphereSpace):
        ambient = exprlang.ambient_field(expr, space.m + 1)
        field_obj = SphereFunction(space.m, ambient, check=False,
                                   name=args.field)
    elif isinstance(space, EuclideanSpace):
        field_obj = exprlang.ambient_field(expr, space.n)
    else:
        field_obj = exprlang.radial_field(expr)
    sampler = default_sampler(space, cfg["sample_count"], cfg["seed"])
    report = classify(field_obj, space, sampler, tol=cfg["tol"])
    data = report.to_json_dict()
    data["field"] = args.field
    data["proper_biharmonic"] = report.proper_biharmonic

    def table():
        lines = ["field: %s" % args.field,
                 "verdict: %s" % report.verdict,
                 "proper biharmonic: %s" % report.proper_biharmonic,
                 "max |lap f|   = %.3e" % report.max_laplacian,
                 "max |lap^2 f| = %.3e" % report.max_bilaplacian,
                 "scale         = %.3g" % report.scale]
        if "quasi_constant" in report.detail:
            lines.append("lap f constant = %.6g"
                         % report.detail["quasi_constant"])
        return "\n".join(lines)

    _emit(data, cfg, table)
    return 0


def cmd_classify(args, cfg):
    with open(args.samples, newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        raise ConstructionError("empty samples file %r" % args.samples)
    try:
        float(rows[0][0])
        data = rows
    except ValueError:
        data = rows[1:]  # header row
    if not data:
        raise ConstructionError("no sample rows in %r" % args.samples)
    m = args.m
    samples = []
    for row in data:
        if len(row) != m + 1:
            raise ConstructionError(
                "expected %d columns (x1..x%d, value), got %d"
                % (m + 1, m, len(row)))
        vals = [float(t) for t in row]
        samples.append((vals[:m], vals[m]))
    fam, residual = fit_family(samples, m)
    report = validate(fam)
    out = {"m": m, "c1": fam.c1, "c2": fam.c2, "a": fam.a, "b": fam.b,
           "residual": residual, "constraints_ok": report["ok"],
           "in_family": bool(residual < cfg["tol"])}
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


# entry point ---------------------------------------------------------------

def _add_common(parser):
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--format", choices=["table", "json", "csv"])
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples-count", dest="sample_count", type=int,
                        help="sample count for residual sweeps")
    parser.add_argument("--quad-abs-tol", dest="quad_abs_tol", type=float)
    parser.add_argument("--quad-rel-tol", dest="quad_rel_tol", type=float)
    parser.add_argument("--tol", type=float,
                        help="verification tolerance")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="biharmonics",
        description="Constructions and residual verification of "
                    "biharmonic functions on spheres and model spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="closed-form sphere spectra")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--k-laplacian", type=int, action="append",
                   metavar="ORDER",
                   help="also tabulate iterated-Laplacian eigenvalues")
    _add_common(p)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("radial-basis",
                       help="numeric four-function radial basis")
    p.add_argument("--sigma", required=True,
                   help="r | sin | sinh | expression in r")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r0", type=float, help="antiderivative base point")
    p.add_argument("--domain", help="lo,hi for custom warps")
    p.add_argument("--check", action="store_true",
                   help="span-check against the closed form")
    p.add_argument("--out", help="CSV output path")
    _add_common(p)
    p.set_defaults(fn=cmd_radial_basis)

    p = sub.add_parser("separable",
                       help="biharmonic product u(r) v_k(theta)")
    p.add_argument("--sigma", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--coeffs", required=True, metavar="c1,c2,c3,c4")
    p.add_argument("--angular", help="JSON file with a harmonic polynomial")
    p.add_argument("--out", help="CSV output path")
    _add_common(p)
    p.set_defaults(fn=cmd_separable)

    p = sub.add_parser("verify", help="catalog or single-field verification")
    p.add_argument("--catalog", action="store_true")
    p.add_argument("--field", help="field expression")
    p.add_argument("--space", help="sphere2 | euclidean3 | model:sin:2 ...")
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("classify",
                       help="fit samples against the positive-Laplacian "
                            "family")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--samples", required=True, metavar="FILE.csv")
    _add_common(p)
    p.set_defaults(fn=cmd_classify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return args.fn(args, cfg)
    except (ConstructionError, DomainError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except BiharmonicsError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
