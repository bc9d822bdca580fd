"""``bohr``: command-line front end.

Every subcommand is seeded and writes a machine-readable payload (JSON, or
CSV where a table is natural).  JSON payloads carry the schema tag, the tool
version and the full run configuration, and contain no timestamps, so two
runs with the same command line produce identical output.

Exit status: 0 on success, 1 when a verified inequality fails (invalid
certificate, corpus violation, exhausted search), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable

SCHEMA = "bohr-lab/1"
_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


class Violation(Exception):
    """A checked inequality failed; carries the payload to emit."""

    def __init__(self, payload: dict):
        self.payload = payload
        super().__init__("verification failed")


# --------------------------------------------------------------------------
# argument parsing


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--seed", type=int, default=0, help="64-bit seed for corpora and sampling (default 0)")
    g.add_argument("--threads", type=int, default=None, help="cap on BLAS/OpenMP threads; results do not depend on it")
    g.add_argument("--format", choices=("json", "csv"), default=None, help="output format (default per subcommand)")
    g.add_argument("--out", default=None, help="write the payload here instead of stdout")
    g.add_argument("--boundary-count", type=int, default=None, help="override SamplingPlan.boundary_count")
    g.add_argument("--angle-count", type=int, default=None, help="override SamplingPlan.angle_count")
    g.add_argument("--refinement-rounds", type=int, default=None, help="override SamplingPlan.refinement_rounds")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="bohr", description="Bohr inequalities, radii, certificates and "
                                     "extremal functions for bases of entire functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def add(name, help_, fn):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_,
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        sp.set_defaults(handler=fn)
        return sp

    sp = add("radius", "Bohr radius estimate: kappa_d search (monomial) or R0 bracket (faber).", cmd_radius)
    sp.add_argument("--basis", choices=("monomial", "faber"), default="monomial")
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--budget", type=int, default=100, help="random candidates per block / corpus size")

    sp = add("curve", "Majorant curve M(r) of one function against its reference sup.", cmd_curve)
    sp.add_argument("--basis", choices=("monomial", "faber"), default="monomial")
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--mobius", type=float, default=0.5, help="Moebius parameter a (monomial basis)")
    sp.add_argument("--decay", type=float, default=0.6, help="coefficient decay of the random Faber test function")
    sp.add_argument("--rmin", type=float, default=0.05, help="smallest family parameter (Faber: offset above 1)")
    sp.add_argument("--rmax", type=float, default=1.0)
    sp.add_argument("--points", type=int, default=21)

    sp = add("kappa", "Upper estimate of the polydisc Bohr radius kappa_d.", cmd_kappa)
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--budget", type=int, default=100)

    sp = add("certify", "Build and check a Bohr certificate B(r) -> B(R).", cmd_certify)
    sp.add_argument("--basis", choices=("monomial", "faber"), default="monomial")
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--r", type=float, default=1.0)
    sp.add_argument("--r1", type=float, default=None, help="intermediate radius (default 2 r, or 2 r_tilde)")
    sp.add_argument("--corpus", type=int, default=200)

    sp = add("verify", "Re-check a saved certificate on a fresh corpus.", cmd_verify)
    sp.add_argument("certificate", help="certificate JSON written by 'bohr certify'")
    sp.add_argument("--corpus", type=int, default=200)

    sp = add("faber-r0", "Corpus-relative bracket for the Faber Bohr radius R0.", cmd_faber_r0)
    sp.add_argument("--corpus", type=int, default=50)
    sp.add_argument("--degree", type=int, default=12)
    sp.add_argument("--rho-max", type=float, default=10.0)

    sp = add("gamma", "Extremal values gamma_n(z) along an exhaustion, with a Liouville verdict.", cmd_gamma)
    sp.add_argument("--exhaustion", choices=("plane", "unitdisc", "ellipse"), default="plane")
    sp.add_argument("--z", type=_complex, default=0.5)
    sp.add_argument("--zmax-index", type=int, default=8, help="number of domains in the exhaustion")
    sp.add_argument("--degree", type=int, default=12, help="polynomial degree m of the LP")
    sp.add_argument("--method", choices=("auto", "lp", "closed"), default="auto")
    sp.add_argument("--tol", type=float, default=1e-2, help="decay tolerance of the verdict")

    sp = add("bc-general", "Generalized Borel-Caratheodory compact K1 and corpus check.", cmd_bc_general)
    sp.add_argument("--epsilon", type=float, default=1.0)
    sp.add_argument("--exhaustion", choices=("plane", "unitdisc"), default="plane")
    sp.add_argument("--zmax-index", type=int, default=8)
    sp.add_argument("--k-radius", type=float, default=1.0, help="K is the closed disc of this radius about 0")
    sp.add_argument("--corpus", type=int, default=100)
    sp.add_argument("--degree", type=int, default=12)

    add("selftest", "Run the built-in sanity checks.", cmd_selftest)
    return parser


def _version() -> str:
    from . import __version__
    return __version__


def _plan(args, **defaults):
    from .compact import SamplingPlan

    fields = dict(defaults)
    for name in ("boundary_count", "angle_count", "refinement_rounds"):
        v = getattr(args, name)
        if v is not None:
            fields[name] = v
    fields["seed"] = args.seed
    return SamplingPlan(**fields)


def run_config(args) -> dict:
    skip = {"handler"}
    return {k: (repr(v) if isinstance(v, complex) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def _envelope(args, result: dict) -> dict:
    return {"schema": SCHEMA, "tool_version": _version(), "config": run_config(args), "result": result}


# --------------------------------------------------------------------------
# subcommands; each returns (payload, csv_text or None)


def cmd_kappa(args):
    from .radius import kappa_upper_search

    plan = _plan(args, **_kappa_plan(args.dim))
    est = kappa_upper_search(args.dim, args.budget, args.seed, plan)
    return est.to_dict(), None


def _kappa_plan(d):
    from .compact import default_plan

    p = default_plan(d)
    return {"boundary_count": p.boundary_count, "angle_count": p.angle_count,
            "refinement_rounds": p.refinement_rounds}


def cmd_radius(args):
    if args.basis == "monomial":
        return cmd_kappa(args)
    from .radius import faber_bohr_R0, random_faber_corpus

    if args.dim != 1:
        raise ValueError("the Faber family lives in one variable")
    est = faber_bohr_R0(random_faber_corpus(args.budget, 12, args.seed), _plan(args, boundary_count=256))
    return est.to_dict(), None


def cmd_curve(args):
    import numpy as np

    from .bases import FaberSegment, Monomial
    from .compact import Polydisc
    from .radius import green_family, majorant_curve, mobius_series, polydisc_family

    rs = np.linspace(args.rmin, args.rmax, args.points)
    if args.basis == "monomial":
        plan = _plan(args, **_kappa_plan(args.dim))
        f = mobius_series(args.mobius, args.dim)
        curve = majorant_curve(f, Monomial(args.dim), polydisc_family(args.dim), rs,
                               Polydisc(0.0, 1.0, args.dim), plan)
        label = {"function": f"mobius(a={args.mobius}) in z1", "family": "r * unit polydisc"}
    else:
        plan = _plan(args, boundary_count=256)
        rng = np.random.default_rng(args.seed)
        coeffs = {n: complex(c) * args.decay ** n for n, c in
                  enumerate(np.exp(2j * np.pi * rng.random(13)))}
        rs = 1.0 + rs  # Green levels start at the segment
        curve = majorant_curve(coeffs, FaberSegment(), green_family, rs, green_family(float(rs[-1])), plan)
        label = {"function": f"faber series with |c_n| = {args.decay}**n", "family": "Green levels E_rho"}
    result = {"r": curve.r, "M": curve.values, "S": curve.reference_sup, "basis": curve.basis.to_dict(),
              **label}
    return result, curve.to_csv()


def cmd_certify(args):
    from .bases import basis_by_name
    from .certify import certify

    plan = _plan(args, boundary_count=128)
    B = basis_by_name(args.basis, args.dim)
    cert = certify(B, args.r, plan=plan, r1=args.r1, corpus_size=args.corpus, seed=args.seed)
    payload = cert.to_dict(plan)
    if args.out:
        _emit(_dump(payload | {"config": run_config(args)}), args.out)
    if not cert.valid:
        raise Violation(payload)
    return payload, None


def cmd_verify(args):
    from .certify import load_certificate, verify_certificate

    cert, plan = load_certificate(args.certificate)
    if plan is not None:
        plan = plan.replace(seed=args.seed)
    else:
        plan = _plan(args, boundary_count=128)
    rep = verify_certificate(cert, args.seed, args.corpus, plan)
    payload = {"certificate": args.certificate, "R": cert.R, "r": cert.r, **rep.to_dict()}
    if not rep.ok:
        raise Violation(payload)
    return payload, None


def cmd_faber_r0(args):
    from .radius import faber_bohr_R0, random_faber_corpus

    est = faber_bohr_R0(random_faber_corpus(args.corpus, args.degree, args.seed),
                        _plan(args, boundary_count=256), args.rho_max)
    return est.to_dict(), None


def _exhaustion(name, n):
    from .gamma import ellipse_exhaustion, plane_by_balls, unit_disc_by_balls

    if name == "plane":
        return plane_by_balls(n)
    if name == "unitdisc":
        return unit_disc_by_balls(n)
    return ellipse_exhaustion([1.5 * 2 ** (k / 2) for k in range(n)])


def cmd_gamma(args):
    from .gamma import gamma_curve, liouville_verdict

    plan = _plan(args, boundary_count=128, angle_count=64)
    curve = gamma_curve(_exhaustion(args.exhaustion, args.zmax_index), args.z, args.degree, plan, args.method)
    verdict = liouville_verdict(curve, args.tol) if len(curve.values) >= 4 else None
    result = {"curve": curve.to_dict(), "verdict": None if verdict is None else verdict.to_dict()}
    return result, curve.to_csv()


def cmd_bc_general(args):
    from .compact import Ball
    from .gamma import SchwarzPropertyError, borel_caratheodory_general, default_bc_corpus

    plan = _plan(args, boundary_count=128, angle_count=64)
    E = _exhaustion(args.exhaustion, args.zmax_index)
    corpus = default_bc_corpus(args.corpus, args.seed)
    try:
        _, report = borel_caratheodory_general(E, Ball(0.0, args.k_radius), args.epsilon, corpus,
                                               args.degree, plan)
    except SchwarzPropertyError as exc:
        raise Violation({"error": str(exc), "epsilon": args.epsilon}) from None
    if not report["holds"]:
        raise Violation(report)
    return report, None


def cmd_selftest(args):
    from .selftest import run_all

    results = run_all()
    payload = {"checks": results, "passed": sum(r["ok"] for r in results), "total": len(results)}
    if not all(r["ok"] for r in results):
        raise Violation(payload)
    return payload, None


# --------------------------------------------------------------------------


_DEFAULT_FORMAT: dict[str, str] = {"curve": "csv", "gamma": "csv"}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if hasattr(o, "tolist"):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None:
        if args.threads < 1:
            parser.error("--threads must be >= 1")
        for var in _THREAD_VARS:
            os.environ[var] = str(args.threads)
    fmt = args.format or _DEFAULT_FORMAT.get(args.subcommand, "json")
    handler: Callable = args.handler
    status = 0
    try:
        result, table = handler(args)
    except Violation as v:
        result, table, status = v.payload, None, 1
    except (ValueError, TypeError, FileNotFoundError) as exc:
        parser.exit(2, f"bohr {args.subcommand}: error: {exc}\n")
    if fmt == "csv":
        if table is None:
            parser.exit(2, f"bohr {args.subcommand}: error: no CSV output for this subcommand\n")
        _emit(table, None if args.subcommand == "certify" else args.out)
        if args.subcommand == "gamma":
            verdict = _dump(_envelope(args, {"verdict": result["verdict"]}))
            if args.out:
                _emit(verdict, args.out + ".verdict.json")
            else:
                sys.stderr.write(verdict)
    else:
        _emit(_dump(_envelope(args, result)), None if args.subcommand == "certify" else args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
