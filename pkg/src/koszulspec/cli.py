"""Command line front-end.

Exit codes: 0 success/pass, 2 input error, 3 resource guard,
4 hypothesis failure, 5 verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import formats
from .errors import HypothesisError, SizeError, SpecError
from .instances import (
    JointDiagonalSpec,
    conjugated_normal_tuple,
    diagonal_tuple,
    tensor_pair,
    truncated_weighted_shift,
)
from .koszul import boundary_map, chain_defect, recursive_split_check
from .operator_tuple import OperatorTuple, classify
from .scalar_function import ScalarFunction
from .spectral_mapping import verify_mapping
from .taylor_spectrum import (
    Polydisc,
    coverage_threshold,
    default_threshold,
    extract_adjoint_witness,
    grid_scan,
    singularity_residual,
)

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_HYPOTHESIS, EXIT_FAIL = 0, 2, 3, 4, 5


def _complex_list(text: str) -> list:
    try:
        return [complex(part.strip().replace(" ", "")) for part in text.split(",")]
    except ValueError:
        raise SpecError(f"cannot parse complex list {text!r}") from None


def _values(text: str) -> list:
    return [_complex_list(chunk) for chunk in text.split(";") if chunk.strip()]


def _float_list(text: str) -> list:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise SpecError(f"cannot parse number list {text!r}") from None


def _nonneg(name: str, value):
    if value is not None and not value >= 0:
        raise SpecError(f"--{name} must be non-negative")
    return value


def _positive(name: str, value):
    if value is not None and not value > 0:
        raise SpecError(f"--{name} must be positive")
    return value


def _load_tuple(path: str, checked: bool) -> OperatorTuple:
    return formats.tuple_from_json(formats.read_json(path), checked=checked)


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        formats.write_text(args.output, text, overwrite=args.force)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _summary(T: OperatorTuple) -> dict:
    comm, double = T.defects
    return {"n": T.n, "dim": T.dim, "commuting_defect": comm, "double_commuting_defect": double}


def cmd_gen(args) -> int:
    kind = args.kind
    if kind in ("diagonal", "conjugated"):
        if not args.values:
            raise SpecError("--values is required, e.g. --values '1,3;2,4'")
        vals = _values(args.values)
        spec = JointDiagonalSpec(len(vals), tuple(map(tuple, vals)))
        T = diagonal_tuple(spec) if kind == "diagonal" else conjugated_normal_tuple(spec, args.seed)
    elif kind == "tensor":
        if len(args.inputs) != 2:
            raise SpecError("gen tensor needs two matrix files")
        A, B = (_load_tuple(p, checked=False)[0] for p in args.inputs)
        T = tensor_pair(A, B)
    else:
        if len(args.inputs) != 1:
            raise SpecError("gen shift needs one weight list, e.g. 1,2")
        T = OperatorTuple((truncated_weighted_shift(_float_list(args.inputs[0])),))
    formats.write_text(args.output, formats.dumps(formats.tuple_to_json(T)), overwrite=args.force)
    print(json.dumps(_summary(T)))
    return EXIT_OK


def cmd_classify(args) -> int:
    T = _load_tuple(args.tuple, checked=False)
    report = classify(T, _float_list(args.p))
    print(formats.dumps(report.to_dict()))
    return EXIT_OK


def cmd_koszul_check(args) -> int:
    T = _load_tuple(args.tuple, checked=False)
    out = {
        **_summary(T),
        "boundaries": [
            {"k": k, "shape": list(boundary_map(T, k).shape)} for k in range(1, T.n + 1)
        ],
        "chain_defect": chain_defect(T),
        "split_defects": [
            {"k": k, "defect": recursive_split_check(T, k)} for k in range(1, T.n)
        ],
    }
    print(formats.dumps(out))
    return EXIT_OK


def _region(args, T: OperatorTuple, default_radius: float) -> Polydisc:
    center = _complex_list(args.center) if args.center else [0.0] * T.n
    if len(center) == 1 and T.n > 1:
        center = center * T.n
    radius = default_radius if args.radius is None else _nonneg("radius", args.radius)
    return Polydisc(tuple(center), radius)


def cmd_scan(args) -> int:
    T = _load_tuple(args.tuple, checked=True)
    region = _region(args, T, T.max_norm)
    if args.res < 2:
        raise SpecError("--res must be at least 2")
    threshold = _nonneg("threshold", args.threshold)
    if threshold is None:
        threshold = coverage_threshold(region.pitch(args.res), T.n) + default_threshold(T)
    cloud = grid_scan(T, region, args.res, threshold, local_minima=args.local_min, workers=args.workers)
    text = formats.cloud_to_csv(cloud) if args.csv else formats.dumps(formats.cloud_to_json(cloud))
    _emit(args, text)
    return EXIT_OK


def cmd_point(args) -> int:
    T = _load_tuple(args.tuple, checked=True)
    z = _complex_list(args.z)
    threshold = _nonneg("threshold", args.threshold)
    threshold = default_threshold(T) if threshold is None else threshold
    point = singularity_residual(T, z)
    out = {
        "z": [[c.real, c.imag] for c in point.coords],
        "residual": point.residual,
        "per_k": list(point.per_k),
        "threshold": threshold,
        "member": point.residual <= threshold,
    }
    if args.witness:
        w = extract_adjoint_witness(T, z, threshold)
        out["witness"] = {
            "vector": [[c.real, c.imag] for c in w.vector],
            "residuals": list(w.residuals),
            "degree": w.degree,
            "source_block": w.source_block,
            "subset": list(w.subset),
        }
    _emit(args, formats.dumps(out))
    return EXIT_OK


def cmd_map_verify(args) -> int:
    T = _load_tuple(args.tuple, checked=True)
    f = ScalarFunction.parse(args.f)
    region = _region(args, T, T.max_norm)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = verify_mapping(
            T, f, region, args.res, args.mode, _positive("tol", args.tol), workers=args.workers
        )
    _emit(args, formats.dumps(report.to_dict()))
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="koszulspec",
        description="Taylor joint spectra of commuting matrix tuples via Koszul Laplacians.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(p, required=False):
        p.add_argument("-o", "--output", required=required, help="output file")
        p.add_argument("--force", action="store_true", help="overwrite an existing output file")

    def region_flags(p):
        p.add_argument("--center", help="comma-separated complex centre, e.g. 0,1+1j")
        p.add_argument("--radius", type=float, help="polydisc radius (default: max ||T_j||)")
        p.add_argument("--res", type=int, default=41, help="grid points per real axis")
        p.add_argument("--workers", type=int, default=None)

    g = sub.add_parser("gen", help="generate an instance tuple file")
    g.add_argument("kind", choices=["diagonal", "conjugated", "tensor", "shift"])
    g.add_argument("inputs", nargs="*", help="matrix files (tensor) or weights (shift)")
    g.add_argument("--values", help="joint values: points separated by ';', coordinates by ','")
    g.add_argument("--seed", type=int, default=0)
    output_flags(g, required=True)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("classify", help="report commutation defects and operator classes")
    c.add_argument("tuple")
    c.add_argument("--p", default="0.25,0.5,0.75", help="comma-separated p values in (0, 1]")
    c.set_defaults(func=cmd_classify)

    k = sub.add_parser("koszul-check", help="boundary shapes, chain defect and split defects")
    k.add_argument("tuple")
    k.set_defaults(func=cmd_koszul_check)

    s = sub.add_parser("scan", help="grid scan of the Taylor spectrum (n <= 2)")
    s.add_argument("tuple")
    region_flags(s)
    s.add_argument("--threshold", type=float, help="membership threshold (default: cell half-diagonal)")
    s.add_argument("--local-min", action="store_true", help="keep only residual minima")
    s.add_argument("--csv", action="store_true", help="write CSV instead of JSON")
    output_flags(s)
    s.set_defaults(func=cmd_scan)

    p = sub.add_parser("point", help="singularity residual at one point")
    p.add_argument("tuple")
    p.add_argument("--z", required=True, help="comma-separated complex coordinates")
    p.add_argument("--threshold", type=float)
    p.add_argument("--witness", action="store_true", help="also extract an adjoint witness")
    output_flags(p)
    p.set_defaults(func=cmd_point)

    m = sub.add_parser("map-verify", help="verify the polar spectral mapping on a grid")
    m.add_argument("tuple")
    m.add_argument("--f", required=True, help="identity | power:EXP | inverse-power:EXP | log | exp | poly:c0,c1,...")
    m.add_argument("--mode", choices=["inclusion", "equality"], default="equality")
    m.add_argument("--tol", type=float, help="Hausdorff tolerance (default 1.5 x pitch)")
    region_flags(m)
    output_flags(m)
    m.set_defaults(func=cmd_map_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HypothesisError as exc:
        print(f"hypothesis failed: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except SizeError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (SpecError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
