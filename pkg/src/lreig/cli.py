"""Command line front end: eigensolve, Jordan-structure verification,
benchmarking, and factorization over Matrix Market files.

Exit codes: 0 success, 2 residual above tolerance, 3 input or assumption
error, 4 rank decision refused as ambiguous.
"""

import argparse
import statistics
import sys
import time
from pathlib import Path

import numpy as np
from numpy.linalg import LinAlgError

from .densekit import Tolerances, eig_dense, symmetric_eig
from .factorize import symmetric_factor, truncated_svd_factor
from .jordan import AmbiguousRankError, verify_structure
from .lowrank import (
    FactorPair,
    dense_flop_model,
    flop_model,
    lowrank_eig,
    nonzero_filter,
    residual,
    small_product,
)
from .mmio import read_matrix_market, write_matrix_market
from .report import RunReport
from .symmetric import (
    SymmetricFactorization,
    apply_congruence,
    reduce_to_sign,
    symmetric_lowrank_eig,
)

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_RESIDUAL = 2
EXIT_INPUT = 3
EXIT_AMBIGUOUS = 4

# Beyond this the dense baseline would form an unreasonably large matrix.
DENSE_BASELINE_CAP = 4000


def _common_options(parser):
    parser.add_argument("--json", metavar="PATH", help="write the JSON report here")
    parser.add_argument(
        "--seed", type=int, default=0, help="random seed for generated fixtures"
    )
    parser.add_argument(
        "--tol-rank", type=float, default=None, help="relative singular-value cutoff"
    )
    parser.add_argument(
        "--tol-zero",
        type=float,
        default=None,
        help="relative cutoff below which eigenvalues count as zero",
    )
    parser.add_argument(
        "--tol-residual",
        type=float,
        default=None,
        help="acceptance threshold for normalized residuals",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lreig",
        description=(
            "Eigenvalues, eigenvectors, and Jordan structure of large "
            "low-rank matrix products"
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_eig = sub.add_parser(
        "eig",
        help="nonzero eigenpairs of a factored (or factorizable) matrix",
    )
    p_eig.add_argument("--a", metavar="PATH", help="left factor (Matrix Market)")
    p_eig.add_argument("--b", metavar="PATH", help="right factor (Matrix Market)")
    p_eig.add_argument("--x", metavar="PATH", help="dense square matrix to factor")
    p_eig.add_argument(
        "--s",
        metavar="PATH",
        help="middle factor for the symmetric path (defaults to identity)",
    )
    p_eig.add_argument("--rank", type=int, default=None, help="truncation rank for --x")
    p_eig.add_argument(
        "--symmetric",
        action="store_true",
        help="use the symmetry-preserving path (real eigenvalues, orthonormal vectors)",
    )
    p_eig.add_argument(
        "--vectors", action="store_true", help="also compute lifted eigenvectors"
    )
    p_eig.add_argument(
        "--oracle",
        action="store_true",
        help="solve the explicitly formed product densely instead (reference run)",
    )
    p_eig.add_argument(
        "--out-vectors",
        metavar="PATH",
        help="write the lifted eigenvectors as Matrix Market",
    )
    _common_options(p_eig)
    p_eig.set_defaults(func=cmd_eig)

    p_jordan = sub.add_parser(
        "jordan",
        help="predict and verify the zero-eigenvalue Jordan structure",
    )
    p_jordan.add_argument("--a", metavar="PATH", required=True)
    p_jordan.add_argument("--b", metavar="PATH", required=True)
    _common_options(p_jordan)
    p_jordan.set_defaults(func=cmd_jordan)

    p_bench = sub.add_parser(
        "bench",
        help="time the factored eigensolve against the flop model and optional dense baseline",
    )
    p_bench.add_argument("--n", type=int, required=True, help="outer dimension")
    p_bench.add_argument("--r", type=int, required=True, help="inner dimension")
    p_bench.add_argument(
        "--trials", type=int, default=3, help="timed repetitions (median reported)"
    )
    p_bench.add_argument("--symmetric", action="store_true")
    p_bench.add_argument("--vectors", action="store_true")
    p_bench.add_argument(
        "--dense-baseline",
        action="store_true",
        help="also time a dense eigensolve of the explicitly formed product",
    )
    _common_options(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_factor = sub.add_parser(
        "factor", help="factor a dense matrix into low-rank form"
    )
    p_factor.add_argument("--x", metavar="PATH", required=True)
    p_factor.add_argument("--rank", type=int, default=None)
    p_factor.add_argument("--symmetric", action="store_true")
    p_factor.add_argument("--out-a", metavar="PATH", required=True)
    p_factor.add_argument("--out-b", metavar="PATH")
    p_factor.add_argument("--out-s", metavar="PATH")
    _common_options(p_factor)
    p_factor.set_defaults(func=cmd_factor)

    return parser


def _tolerances(args):
    kwargs = {}
    if args.tol_rank is not None:
        kwargs["rank_rtol"] = args.tol_rank
    if args.tol_zero is not None:
        kwargs["zero_eig_atol"] = args.tol_zero
    if args.tol_residual is not None:
        kwargs["residual_rtol"] = args.tol_residual
    return Tolerances(**kwargs)


def _sorted_pairs(values):
    """Eigenvalues as (re, im) pairs in a canonical report order."""
    values = np.asarray(values, dtype=np.complex128).ravel()
    order = np.lexsort((values.imag, values.real, -np.abs(values)))
    return [[float(v.real), float(v.imag)] for v in values[order]]


def cmd_eig(args, cfg):
    t0 = time.perf_counter()
    notes = []
    if args.symmetric:
        values, resid_max, n, r, dropped = _eig_symmetric_path(args, cfg, notes)
        symmetric = True
    else:
        values, resid_max, n, r, dropped = _eig_general_path(args, cfg, notes)
        symmetric = False
    code = EXIT_OK
    if resid_max is not None and resid_max > cfg.residual_rtol:
        notes.append(
            f"residual {resid_max:.3e} exceeds tolerance {cfg.residual_rtol:g}"
        )
        code = EXIT_RESIDUAL
    wall = time.perf_counter() - t0

    rep = RunReport(
        command="eig",
        inputs={"n": n, "r": r, "symmetric": symmetric},
        eigenvalues=_sorted_pairs(values),
        dropped=dropped,
        residual_max=resid_max,
        flops_model_lowrank=flop_model(n, r, symmetric, args.vectors) if r else 0,
        flops_model_dense=dense_flop_model(n, symmetric, args.vectors),
        wall_time_seconds=wall,
        notes=notes,
    )
    return rep, code


def _eig_general_path(args, cfg, notes):
    if args.x:
        if args.a or args.b:
            raise ValueError("give either --x or --a/--b, not both")
        x = read_matrix_market(args.x)
        pair = truncated_svd_factor(x, args.rank, cfg)
    else:
        if not (args.a and args.b):
            raise ValueError("eig needs --a and --b, or --x")
        pair = FactorPair(read_matrix_market(args.a), read_matrix_market(args.b))

    if args.oracle:
        notes.append("dense oracle path: eigendecomposed the explicit product")
        big = pair.a @ pair.b
        scale = float(np.linalg.norm(small_product(pair)))
        values, _ = eig_dense(big)
        keep = nonzero_filter(values, scale, cfg)
        dropped = int(values.size - keep.size)
        return values[keep], None, pair.n, pair.r, dropped

    result = lowrank_eig(pair, want_vectors=args.vectors, cfg=cfg)
    resid_max = result.max_residual if args.vectors else None
    if args.out_vectors and result.vectors is not None:
        write_matrix_market(result.vectors, args.out_vectors)
    return result.eigenvalues, resid_max, pair.n, pair.r, result.dropped


def _eig_symmetric_path(args, cfg, notes):
    if args.b:
        raise ValueError("--symmetric takes --a [--s] or --x, not --b")
    if args.x:
        fact = symmetric_factor(read_matrix_market(args.x), cfg)
    elif args.a:
        atilde = read_matrix_market(args.a)
        if args.s:
            stilde = read_matrix_market(args.s)
        else:
            stilde = np.eye(atilde.shape[1])
            notes.append("no --s given; middle factor taken as identity")
        fact = SymmetricFactorization(atilde, stilde)
    else:
        raise ValueError("eig --symmetric needs --a [--s] or --x")
    wc, s = reduce_to_sign(fact.stilde, cfg)
    reduced = apply_congruence(fact, wc, s)
    lam, w = symmetric_lowrank_eig(reduced, cfg)
    # Residuals against x = (a*s) @ a^H, evaluated without forming x.
    signed = reduced.a * s.signs
    resid_pair = FactorPair(signed, reduced.a.conj().T)
    resid_max = 0.0
    for i in range(lam.size):
        resid_max = max(resid_max, residual(resid_pair, lam[i], w[:, i]))
    if args.out_vectors:
        write_matrix_market(w, args.out_vectors)
    return lam, resid_max, reduced.n, reduced.r, 0


def cmd_jordan(args, cfg):
    t0 = time.perf_counter()
    pair = FactorPair(read_matrix_market(args.a), read_matrix_market(args.b))
    check = verify_structure(pair, cfg)
    wall = time.perf_counter() - t0
    rep = RunReport(
        command="jordan",
        inputs={"n": pair.n, "r": pair.r, "symmetric": False},
        structure_predicted=list(check.predicted.predicted.block_sizes),
        structure_measured=list(check.measured.block_sizes),
        match=bool(check.match),
        wall_time_seconds=wall,
        notes=[] if check.match else ["predicted and measured structures differ"],
    )
    return rep, EXIT_OK


def _median_time(run, trials):
    run()  # warm-up, excluded
    times = []
    for _ in range(max(1, trials)):
        t0 = time.perf_counter()
        run()
        times.append(time.perf_counter() - t0)
    return float(statistics.median(times))


def cmd_bench(args, cfg):
    n, r, trials = args.n, args.r, args.trials
    if n < 1 or r < 1:
        raise ValueError(f"dimensions must be positive, got n={n}, r={r}")
    if r > n:
        raise ValueError(f"inner dimension r={r} exceeds n={n}")
    rng = np.random.default_rng(args.seed)
    notes = []
    t0 = time.perf_counter()

    if args.symmetric:
        atilde = rng.standard_normal((n, r))
        picks = rng.uniform(0.5, 2.0, r) * rng.choice([-1.0, 1.0], r)
        basis, _ = np.linalg.qr(rng.standard_normal((r, r)))
        stilde = (basis * picks) @ basis.T
        stilde = (stilde + stilde.T) / 2.0
        fact = SymmetricFactorization(atilde, stilde)

        def run():
            wc, s = reduce_to_sign(fact.stilde, cfg)
            reduced = apply_congruence(fact, wc, s)
            return symmetric_lowrank_eig(reduced, cfg)

        values = run()[0]
        if not args.vectors:
            notes.append(
                "symmetric path computes eigenvectors as a by-product; the "
                "model reflects the values-only cost"
            )

        def dense_run():
            symmetric_eig(atilde @ stilde @ atilde.T)

    else:
        a = rng.standard_normal((n, r))
        b = rng.standard_normal((r, n))
        pair = FactorPair(a, b)

        def run():
            return lowrank_eig(pair, want_vectors=args.vectors, cfg=cfg)

        values = run().eigenvalues

        def dense_run():
            eig_dense(pair.a @ pair.b, want_vectors=args.vectors)

    lowrank_seconds = _median_time(run, trials)

    dense_seconds = None
    speedup = None
    if args.dense_baseline:
        if n > DENSE_BASELINE_CAP:
            notes.append(
                f"dense baseline skipped: n={n} exceeds the "
                f"{DENSE_BASELINE_CAP} cap"
            )
        else:
            dense_seconds = _median_time(dense_run, trials)
            if lowrank_seconds > 0:
                speedup = dense_seconds / lowrank_seconds

    flops_lowrank = flop_model(n, r, args.symmetric, args.vectors)
    flops_dense = dense_flop_model(n, args.symmetric, args.vectors)
    if flops_lowrank >= flops_dense:
        notes.append(
            "no compression at this rank: the factored model cost meets or "
            "exceeds the dense model"
        )
    wall = time.perf_counter() - t0

    rep = RunReport(
        command="bench",
        inputs={"n": n, "r": r, "symmetric": bool(args.symmetric)},
        eigenvalues=_sorted_pairs(values),
        flops_model_lowrank=flops_lowrank,
        flops_model_dense=flops_dense,
        wall_time_seconds=wall,
        bench={
            "seed": args.seed,
            "trials": trials,
            "lowrank_seconds": lowrank_seconds,
            "dense_seconds": dense_seconds,
            "speedup": speedup,
        },
        notes=notes,
    )
    return rep, EXIT_OK


def cmd_factor(args, cfg):
    t0 = time.perf_counter()
    x = read_matrix_market(args.x)
    notes = []
    if args.symmetric:
        if not args.out_s:
            raise ValueError("factor --symmetric needs --out-s for the middle factor")
        fact = symmetric_factor(x, cfg)
        write_matrix_market(fact.atilde, args.out_a)
        write_matrix_market(fact.stilde, args.out_s)
        n, r = fact.n, fact.r
        recon = fact.atilde @ fact.stilde @ fact.atilde.conj().T
    else:
        if not args.out_b:
            raise ValueError("factor needs --out-b for the right factor")
        pair = truncated_svd_factor(x, args.rank, cfg)
        write_matrix_market(pair.a, args.out_a)
        write_matrix_market(pair.b, args.out_b)
        n, r = pair.n, pair.r
        recon = pair.a @ pair.b
    xnorm = float(np.linalg.norm(x))
    err = float(np.linalg.norm(x - recon))
    rel = err / xnorm if xnorm > 0 else err
    notes.append(f"relative reconstruction error {rel:.3e} at rank {r}")
    wall = time.perf_counter() - t0
    rep = RunReport(
        command="factor",
        inputs={"n": n, "r": r, "symmetric": bool(args.symmetric)},
        wall_time_seconds=wall,
        notes=notes,
    )
    return rep, EXIT_OK


def _emit(rep, args):
    print(rep.to_text())
    if args.json:
        Path(args.json).write_text(rep.to_json() + "\n", encoding="utf-8")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; map those onto the input-error
        # code so 2 stays reserved for residual failures.
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        cfg = _tolerances(args)
        rep, code = args.func(args, cfg)
    except AmbiguousRankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (ValueError, OSError, LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(rep, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
