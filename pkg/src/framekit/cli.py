"""``framekit`` command-line interface.

Subcommands::

    framekit bounds SYSTEM [--k OPERATOR]
    framekit construct {atomic,partition,direct_sum,intersect} ... [-o OUT]
    framekit demo THEOREM_ID [--seed N] [--dim D]
    framekit reconstruct SYSTEM SIGNAL

Every subcommand accepts ``--tol-rank``, ``--tol-eq``, ``--tol-psd`` and
``--field``. Exit status: 0 when the property is verified, 1 when it fails,
2 on bad input (unreadable or invalid documents, unknown theorem ids).
"""

import argparse
import sys

import numpy as np
from scipy.linalg import block_diag

from . import io
from .demos import REGISTRY, run_demo
from .exceptions import (
    BadPartition,
    CommutationHypothesisFailed,
    DimensionMismatch,
    FramekitError,
    HypothesisViolated,
    MemberCountMismatch,
    NonCommutingProjections,
    NotAFrame,
    NotAFusionFrame,
    NotAKFrame,
    NotKFusion,
    ParseError,
    WeightMismatch,
    ZeroOperator,
)
from .frames import VectorFrame, frame_bounds, is_exact, kframe_bounds, reconstruct
from .fusion import (
    CertifiedBounds,
    analysis,
    construct_atomic,
    direct_sum_kfusion,
    fusion_bounds,
    fusion_reconstruct,
    intersect_system,
    kfusion_bounds,
    partition_kframe,
)
from .numkit import DEFAULT_TOL, Tolerances, opnorm
from .subspace import Subspace, project

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

# Which registered demo id backs each construction, and which library errors
# mean that its hypotheses are not met.
_CONSTRUCTIONS = {
    "atomic": ("thm3.2", (ZeroOperator,)),
    "partition": ("thm4.6", (BadPartition, NotAKFrame, MemberCountMismatch)),
    "direct_sum": ("thm4.9", (MemberCountMismatch, WeightMismatch, NotKFusion)),
    "intersect": ("lem4.11", (NonCommutingProjections, CommutationHypothesisFailed)),
}


# -- helpers ------------------------------------------------------------------


def _load(path, kinds, tol):
    doc = io.load(path)
    if doc.kind not in kinds:
        raise ParseError(f"{path}: expected a {' or '.join(kinds)} document, got {doc.kind}")
    return doc, io.to_object(doc, tol)


def _load_operator(path, n, tol):
    _, K = _load(path, ("operator",), tol)
    if K.shape != (n, n):
        raise DimensionMismatch(f"{path}: operator must be {n}x{n}, got {K.shape}")
    return K


def _num(x):
    return format(float(x), ".17g")


def _vec(v):
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return "[" + ", ".join(f"{_num(z.real)}{'+' if z.imag >= 0 else '-'}{_num(abs(z.imag))}j" for z in v) + "]"
    return "[" + ", ".join(_num(x) for x in v) + "]"


def _flag(b):
    return "true" if b else "false"


def _write(doc, path, out):
    text = io.dumps(doc)
    if path in (None, "-"):
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _render_bounds(report, out):
    for key, value in report.as_dict().items():
        out.write(f"{key}: {_flag(value) if isinstance(value, bool) else _num(value)}\n")
    out.write(f"witness_low: {_vec(report.witness_low)}\n")
    out.write(f"witness_high: {_vec(report.witness_high)}\n")


# -- subcommands --------------------------------------------------------------


def cmd_bounds(args, tol, out):
    doc, system = _load(args.system, ("vector_frame", "fusion_system"), tol)
    n = doc.ambient_dim
    fusion = doc.kind == "fusion_system"
    if args.k is None:
        report = fusion_bounds(system, tol) if fusion else frame_bounds(system, tol)
        name = "fusion frame" if fusion else "frame"
    else:
        K = _load_operator(args.k, n, tol)
        report = kfusion_bounds(system, K, tol) if fusion else kframe_bounds(system, K, tol)
        name = "K-fusion frame" if fusion else "K-frame"
    out.write(f"kind: {doc.kind}\n")
    out.write(f"ambient_dim: {n}\n")
    out.write(f"operator: {'identity' if args.k is None else args.k}\n")
    _render_bounds(report, out)
    if not fusion and args.k is None:
        out.write(f"exact: {_flag(is_exact(system, tol))}\n")
    verdict = report.lower_ok
    out.write(f"verdict: {name if verdict else 'not a ' + name}\n")
    return EXIT_OK if verdict else EXIT_FAIL


def _parse_partition(text, size):
    """``"1,2;3"`` (1-based, as in the usual index notation) to 0-based parts."""
    try:
        parts = [[int(tok) - 1 for tok in part.split(",")] for part in text.split(";")]
    except ValueError:
        raise ParseError(f"bad partition {text!r}; expected e.g. '1,2;3'") from None
    if any(j < 0 or j >= size for part in parts for j in part):
        raise BadPartition(f"indices must lie in 1..{size}")
    return parts


def _parse_floats(text):
    try:
        return np.array([float(tok) for tok in text.split(",")])
    except ValueError:
        raise ParseError(f"bad number list {text!r}") from None


def _construct(args, tol):
    """Build the requested system. Returns ``(system, operator, certificate)``."""
    if args.kind == "atomic":
        K = _load(args.k, ("operator",), tol)[1]
        basis = None
        if args.basis is not None:
            basis = _load(args.basis, ("vector_frame", "operator"), tol)[1]
            basis = basis.vectors if isinstance(basis, VectorFrame) else basis
        W = construct_atomic(K, basis, tol)
        # The identity sum v_n^2 |P_n f|^2 = |K^* f|^2 pins A = 1 and B = |K|^2.
        return W, K, CertifiedBounds(1.0, opnorm(K) ** 2, kfusion_bounds(W, K, tol))
    if args.kind == "partition":
        _, F = _load(args.frame, ("vector_frame",), tol)
        n = F.ambient_dim
        K = np.eye(n) if args.k is None else _load_operator(args.k, n, tol)
        parts = _parse_partition(args.parts, F.size)
        weights = None if args.weights is None else _parse_floats(args.weights)
        W, cert = partition_kframe(F, K, parts, weights, tol)
        return W, K, cert
    if args.kind == "direct_sum":
        systems = [_load(p, ("fusion_system",), tol)[1] for p in args.system]
        if args.k and len(args.k) != len(systems):
            raise MemberCountMismatch("give --k once per --system, or not at all")
        Ks = [
            np.eye(W.ambient_dim) if not args.k else _load_operator(p, W.ambient_dim, tol)
            for W, p in zip(systems, args.k or [None] * len(systems))
        ]
        W, cert = direct_sum_kfusion(systems, Ks, tol)
        return W, block_diag(*Ks), cert
    # intersect
    _, W = _load(args.system, ("fusion_system",), tol)
    n = W.ambient_dim
    _, span = _load(args.subspace, ("vector_frame",), tol)
    V = Subspace.span(span.vectors, tol, ambient_dim=n)
    K = None if args.k is None else _load_operator(args.k, n, tol)
    out, report = intersect_system(W, V, K, tol)
    # For f in V the restricted inequality reads the same with P_V K in place of K,
    # and both sides vanish on V's complement, so P_V K certifies it on the whole space.
    P = project(V)
    op = P if K is None else P @ K
    return out, op, report


def cmd_construct(args, tol, out):
    theorem, hypotheses = _CONSTRUCTIONS[args.kind]
    try:
        W, K, cert = _construct(args, tol)
    except hypotheses as exc:
        raise HypothesisViolated(theorem, str(exc)) from exc
    _write(io.fusion_document(W, args.field), args.output, out)
    if args.k_out is not None:
        _write(io.operator_document(K, args.field), args.k_out, out)
    # Status goes to stderr when the document itself is on stdout.
    log = sys.stderr if args.output in (None, "-") else out
    report = kfusion_bounds(W, K, tol)
    log.write(f"construction: {args.kind} ({theorem})\n")
    log.write(f"members: {len(W)}\n")
    holds = report.lower_ok
    if cert.certified_A is not None:
        log.write(f"certified_A: {_num(cert.certified_A)}\n")
        holds = holds and cert.certified_A <= report.A_opt + cert.slack
    if hasattr(cert, "certified_B"):
        log.write(f"certified_B: {_num(cert.certified_B)}\n")
        holds = holds and report.B_opt <= cert.certified_B + cert.slack
    if hasattr(cert, "bessel_before"):
        log.write(f"bessel_before: {_num(cert.bessel_before)}\n")
        holds = holds and cert.holds
    log.write(f"A_opt: {_num(report.A_opt)}\n")
    log.write(f"B_opt: {_num(report.B_opt)}\n")
    log.write(f"verdict: {'certified' if holds else 'certificate violated'}\n")
    return EXIT_OK if holds else EXIT_FAIL


def cmd_demo(args, tol, out):
    field = args.field or "real"
    result = run_demo(args.theorem_id, seed=args.seed, dim=args.dim, field=field, tol=tol)
    out.write(result.render() + "\n")
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_reconstruct(args, tol, out):
    doc, system = _load(args.system, ("vector_frame", "fusion_system"), tol)
    _, f = _load(args.signal, ("signal",), tol)
    if f.shape != (doc.ambient_dim,):
        raise DimensionMismatch(f"signal has length {f.shape[0]}, system lives in dimension {doc.ambient_dim}")
    if doc.kind == "vector_frame":
        g = reconstruct(system, f, tol)
    else:
        g = fusion_reconstruct(system, analysis(system, f), tol)
    norm = np.linalg.norm(f)
    err = np.linalg.norm(g - f) / norm if norm > 0 else np.linalg.norm(g)
    out.write(f"reconstruction: {_vec(g)}\n")
    out.write(f"relative_error: {_num(err)}\n")
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-rank", type=float, default=DEFAULT_TOL.rank_tol, help="relative rank cutoff")
    common.add_argument("--tol-eq", type=float, default=DEFAULT_TOL.eq_tol, help="slack for equalities")
    common.add_argument("--tol-psd", type=float, default=DEFAULT_TOL.psd_tol, help="slack for semidefiniteness")
    common.add_argument(
        "--field",
        choices=("real", "complex"),
        default=None,
        help="field for demo instances and emitted documents (input documents carry their own)",
    )

    parser = argparse.ArgumentParser(prog="framekit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="optimal (K-)frame or (K-)fusion frame bounds")
    p.add_argument("system", help="vector_frame or fusion_system document")
    p.add_argument("--k", help="operator document; switches to the K-inequality")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("construct", help="build a system with certified bounds")
    kinds = p.add_subparsers(dest="kind", required=True)
    out_args = argparse.ArgumentParser(add_help=False)
    out_args.add_argument("-o", "--output", help="output document (default: stdout)")
    out_args.add_argument("--k-out", help="also write the operator the certificate refers to")

    q = kinds.add_parser("atomic", parents=[common, out_args], help="atomic subspaces {span K e_n}")
    q.add_argument("--k", required=True, help="operator document")
    q.add_argument("--basis", help="orthonormal basis as columns (default: standard basis)")

    q = kinds.add_parser("partition", parents=[common, out_args], help="K-fusion frame from a K-frame partition")
    q.add_argument("--frame", required=True, help="vector_frame document")
    q.add_argument("--parts", required=True, help="1-based index blocks, e.g. '1,2;3'")
    q.add_argument("--weights", help="comma-separated weights, one per block (default: all 1)")
    q.add_argument("--k", help="operator document (default: identity)")

    q = kinds.add_parser("direct_sum", parents=[common, out_args], help="member-wise direct sum")
    q.add_argument("--system", action="append", required=True, help="fusion_system document (repeat)")
    q.add_argument("--k", action="append", help="operator document per system (default: identities)")

    q = kinds.add_parser("intersect", parents=[common, out_args], help="intersect every member with V")
    q.add_argument("--system", required=True, help="fusion_system document")
    q.add_argument("--subspace", required=True, help="vector_frame document whose columns span V")
    q.add_argument("--k", help="operator document commuting with P_V")
    for q in kinds.choices.values():
        q.set_defaults(func=cmd_construct)

    p = sub.add_parser("demo", parents=[common], help="randomized property run for a theorem id")
    p.add_argument("theorem_id", help="one of: " + ", ".join(REGISTRY))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=8)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("reconstruct", parents=[common], help="reconstruct a signal from its measurements")
    p.add_argument("system", help="vector_frame or fusion_system document")
    p.add_argument("signal", help="signal document")
    p.set_defaults(func=cmd_reconstruct)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        tol = Tolerances(rank_tol=args.tol_rank, psd_tol=args.tol_psd, eq_tol=args.tol_eq)
    except ValueError as exc:
        print(f"framekit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args, tol, out)
    except (HypothesisViolated, NotAFrame, NotAFusionFrame) as exc:
        print(f"framekit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (FramekitError, OSError) as exc:
        print(f"framekit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
