"""Command-line front end.

Subcommands: short | spectral-short | kolmogorov | order | verify.
All I/O is UTF-8 JSON; matrices are {"n": int, "data": [n*n row-major]},
subspaces are {"n": int, "basis": [[...], ...]} or {"n": int, "xi": [...]}.
Numeric output uses shortest round-trip decimal formatting, so emitting and
re-reading a matrix reproduces it bitwise.

Exit codes: 0 success (for `order`: the relation holds), 1 relation fails /
verification failures, 2 malformed input, 3 symmetry or positivity violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .core import (
    DEFAULT_TOL,
    STRICT_TOL,
    DomainError,
    Subspace,
    SymMatrix,
    Tolerances,
)
from .harness import run_suite
from .kolmogorov import kolmogorov_closed, kolmogorov_duality, kolmogorov_power
from .order import spectral_leq
from .shorted import short_at, short_schur
from .spectral_shorted import spectral_short_closed, spectral_short_iterative

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BAD_INPUT = 2
EXIT_BAD_MATRIX = 3


class CliInputError(Exception):
    """Malformed input file or schema violation (exit 2)."""


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path} is not valid JSON: {exc}") from exc


def load_matrix(path: str, tol: Tolerances) -> SymMatrix:
    obj = _load_json(path)
    if not isinstance(obj, dict) or "n" not in obj or "data" not in obj:
        raise CliInputError(f'{path}: expected an object with "n" and "data"')
    n = obj["n"]
    data = obj["data"]
    if not isinstance(n, int) or n < 1:
        raise CliInputError(f'{path}: "n" must be a positive integer')
    if not isinstance(data, list) or len(data) != n * n:
        raise CliInputError(f'{path}: "data" must hold exactly n*n = {n * n} numbers')
    try:
        arr = np.array(data, dtype=float).reshape(n, n)
    except (TypeError, ValueError) as exc:
        raise CliInputError(f"{path}: matrix entries must be numbers") from exc
    if not np.all(np.isfinite(arr)):
        raise CliInputError(f"{path}: matrix entries must be finite")
    return SymMatrix(arr, tol)  # DomainError here surfaces as exit 3


def load_subspace(path: str, n: int, tol: Tolerances) -> Subspace:
    obj = _load_json(path)
    if not isinstance(obj, dict) or obj.get("n") != n:
        raise CliInputError(f'{path}: expected an object with "n" equal to {n}')
    if "xi" in obj:
        vecs = [obj["xi"]]
    elif "basis" in obj:
        vecs = obj["basis"]
    else:
        raise CliInputError(f'{path}: expected a "basis" or "xi" field')
    if not isinstance(vecs, list) or not vecs:
        raise CliInputError(f"{path}: basis must be a nonempty list of vectors")
    rows = []
    for v in vecs:
        if not isinstance(v, list) or len(v) != n:
            raise CliInputError(f"{path}: each vector must have length {n}")
        arr = np.array(v, dtype=float)
        if not np.all(np.isfinite(arr)) or float(np.linalg.norm(arr)) == 0.0:
            raise CliInputError(f"{path}: vectors must be finite and nonzero")
        rows.append(arr)
    return Subspace.span(np.column_stack(rows), tol)


def load_vector(path: str, n: int) -> np.ndarray:
    obj = _load_json(path)
    if not isinstance(obj, dict) or obj.get("n") != n or "xi" not in obj:
        raise CliInputError(f'{path}: expected an object with "n" = {n} and "xi"')
    v = obj["xi"]
    if not isinstance(v, list) or len(v) != n:
        raise CliInputError(f'{path}: "xi" must have length {n}')
    arr = np.array(v, dtype=float)
    if not np.all(np.isfinite(arr)) or float(np.linalg.norm(arr)) == 0.0:
        raise CliInputError(f"{path}: xi must be finite and nonzero")
    return arr


def matrix_payload(M: SymMatrix) -> dict:
    return {"n": M.n, "data": [float(x) for x in M.entries.reshape(-1)]}


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _base_tolerances() -> Tolerances:
    profile = os.environ.get("SPECSHORT_TOL_PROFILE", "default")
    if profile == "strict":
        return STRICT_TOL
    if profile == "default":
        return DEFAULT_TOL
    raise CliInputError(
        f"SPECSHORT_TOL_PROFILE must be 'strict' or 'default', got {profile!r}"
    )


def _tolerances(args: argparse.Namespace) -> Tolerances:
    tol = _base_tolerances()
    updates = {}
    if args.tol_eig is not None:
        updates["cluster_tol"] = args.tol_eig
    if args.tol_rank is not None:
        updates["rank_tol"] = args.tol_rank
    if args.tol_meet is not None:
        updates["meet_tol"] = args.tol_meet
    if args.tol_conv is not None:
        updates["conv_tol"] = args.tol_conv
    if updates:
        from dataclasses import replace

        tol = replace(tol, **updates)
    return tol


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol-eig", type=float, default=None, help="eigenvalue clustering tolerance")
    parser.add_argument("--tol-rank", type=float, default=None, help="rank cutoff, relative to the spectral norm")
    parser.add_argument("--tol-meet", type=float, default=None, help="projection-meet eigenvalue cutoff")
    parser.add_argument("--tol-conv", type=float, default=None, help="iterative stopping threshold")
    parser.add_argument("--out", default=None, help="output path (default stdout)")


def _trace_payload(trace) -> dict:
    steps = []
    for st in trace.iterates:
        entry: dict = {"power": float(st.power)}
        if np.isscalar(st.value) or isinstance(st.value, float):
            entry["value"] = float(st.value)
        if st.delta is not None:
            entry["delta"] = float(st.delta)
        steps.append(entry)
    return {
        "converged": trace.converged,
        "stop_reason": trace.stop_reason,
        "final_delta": float(trace.final_delta),
        "steps": steps,
    }


def _cmd_short(args) -> int:
    tol = _tolerances(args)
    A = load_matrix(args.matrix, tol)
    S = load_subspace(args.subspace, A.n, tol)
    A.assert_psd(tol)
    report: dict = {"method": args.method}
    if args.method in ("at", "both"):
        r_at = short_at(A, S, tol)
        report["sigma"] = matrix_payload(r_at.value)
        report["range_residual"] = float(r_at.range_residual)
    if args.method in ("schur", "both"):
        r_schur = short_schur(A, S, tol)
        if args.method == "schur":
            report["sigma"] = matrix_payload(r_schur.value)
            report["range_residual"] = float(r_schur.range_residual)
    report["cross_residual"] = (
        float(np.abs(r_at.value.entries - r_schur.value.entries).max())
        if args.method == "both"
        else None
    )
    _emit(report, args.out)
    return EXIT_OK


def _cmd_spectral_short(args) -> int:
    tol = _tolerances(args)
    A = load_matrix(args.matrix, tol)
    S = load_subspace(args.subspace, A.n, tol)
    A.assert_psd(tol)
    report: dict = {"method": args.method}
    closed = iterative = None
    if args.method in ("closed", "both"):
        closed = spectral_short_closed(A, S, tol)
        report["rho"] = matrix_payload(closed.value)
        report["levels"] = [
            {"value": float(mu), "rank": int(round(float(np.trace(dp))))}
            for mu, dp in closed.levels
        ]
    if args.method in ("iterative", "both"):
        iterative = spectral_short_iterative(A, S, k_max=args.k_max, tol=tol)
        if args.method == "iterative":
            report["rho"] = matrix_payload(iterative.value)
        report["trace"] = _trace_payload(iterative.trace)
    report["cross_residual"] = (
        float(np.abs(closed.value.entries - iterative.value.entries).max())
        if args.method == "both"
        else None
    )
    _emit(report, args.out)
    return EXIT_OK


def _cmd_kolmogorov(args) -> int:
    tol = _tolerances(args)
    A = load_matrix(args.matrix, tol)
    xi = load_vector(args.vector, A.n)
    A.assert_psd(tol)
    report: dict = {"method": args.method}
    if args.method == "closed":
        res = kolmogorov_closed(A, xi, tol)
    elif args.method == "power":
        res = kolmogorov_power(A, xi, n_max=args.n_max, tol=tol)
        report["trace"] = _trace_payload(res.trace)
    else:
        k_value, dual = kolmogorov_duality(A, xi, tol)
        res = kolmogorov_closed(A, xi, tol)
        report["duality"] = {"k": float(k_value), "dual": float(dual)}
    report["value"] = float(res.value)
    report["K"] = "-inf" if res.value == 0.0 else float(math.log(res.value))
    _emit(report, args.out)
    return EXIT_OK


def _cmd_order(args) -> int:
    tol = _tolerances(args)
    A = load_matrix(args.matrix_a, tol)
    B = load_matrix(args.matrix_b, tol)
    A.assert_psd(tol)
    B.assert_psd(tol)
    cert = spectral_leq(A, B, tol)
    _emit(
        {
            "holds": cert.holds,
            "witness_lambda": None if cert.witness_lambda is None else float(cert.witness_lambda),
            "worst_residual": float(cert.worst_residual),
        },
        args.out,
    )
    return EXIT_OK if cert.holds else EXIT_FAIL


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise CliInputError(f"--dims must be a comma-separated list of integers: {exc}") from exc
    if not dims or any(d < 1 for d in dims):
        raise CliInputError("--dims needs at least one positive dimension")
    return dims


def _cmd_verify(args) -> int:
    tol = _tolerances(args)
    report = run_suite(
        dims=_parse_dims(args.dims),
        trials=args.trials,
        seed=args.seed,
        tol=tol,
    )
    text = report.to_json()
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(
        f"verify: {report.total_failures} failures over {report.trials} trials/theorem "
        f"({report.wall_time_s:.2f}s)",
        file=sys.stderr,
    )
    return EXIT_OK if report.total_failures == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specshort",
        description="Shorted operators, spectral order, and spectral shorted operators for dense symmetric matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("short", help="shorted operator of a matrix to a subspace")
    p.add_argument("matrix")
    p.add_argument("subspace")
    p.add_argument("--method", choices=("at", "schur", "both"), default="both")
    _add_common(p)
    p.set_defaults(func=_cmd_short)

    p = sub.add_parser("spectral-short", help="spectral shorted operator")
    p.add_argument("matrix")
    p.add_argument("subspace")
    p.add_argument("--method", choices=("closed", "iterative", "both"), default="both")
    p.add_argument("--k-max", type=int, default=20)
    _add_common(p)
    p.set_defaults(func=_cmd_spectral_short)

    p = sub.add_parser("kolmogorov", help="vector complexity under a matrix")
    p.add_argument("matrix")
    p.add_argument("vector")
    p.add_argument("--method", choices=("closed", "power", "duality"), default="closed")
    p.add_argument("--n-max", type=int, default=200)
    _add_common(p)
    p.set_defaults(func=_cmd_kolmogorov)

    p = sub.add_parser("order", help="decide the spectral order between two matrices")
    p.add_argument("matrix_a")
    p.add_argument("matrix_b")
    _add_common(p)
    p.set_defaults(func=_cmd_order)

    p = sub.add_parser("verify", help="run the theorem verification suite")
    p.add_argument("--dims", default="2,3,4,5,6,7,8,9,10,11,12")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliInputError as exc:
        print(f"specshort: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except DomainError as exc:
        print(f"specshort: {exc}", file=sys.stderr)
        return EXIT_BAD_MATRIX


if __name__ == "__main__":
    sys.exit(main())
