"""
Command-line surface.

Exit codes: 0 success, 1 usage, 2 parse, 3 numerical or scale limits, 4 a
certificate or cross-check failed. Reports go to stdout, diagnostics to stderr.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .core.config import settings
from .core.errors import BadFaceIndex, ParseError, RltQpError, VerificationFailed
from .duality.exactness import ExactnessStatus, certify_exactness
from .duality.underestimator import underestimator
from .generators.instances import (
    InstanceKind, gen_exact, gen_inexact_minfaces, gen_inexact_vertices, gen_unbounded,
    verify_generated,
)
from .io.instance_file import emit_instance, read_instance
from .io.report import (
    certify_fields, render, sandwich_fields, solve_fields, vertex_fields,
)
from .lp.certificate import verify_certificate
from .polyhedra.enumeration import enumerate_minimal_faces, enumerate_vertices, extreme_rays
from .relaxation.builder import build_rlt, solve_rlt
from .relaxation.vertices import enumerate_lifted_vertices
from .special.qpa import bound_sandwich, build_qpa
from .special.specific import SpecificClassInstance, stqp_bound

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1

KIND_NAMES = {
    "unbounded": InstanceKind.UNBOUNDED,
    "exact": InstanceKind.EXACT,
    "inexact-vertices": InstanceKind.INEXACT_VERTICES,
    "inexact-faces": InstanceKind.INEXACT_MINFACES,
}

EXPECTED_VERDICTS = {
    InstanceKind.UNBOUNDED: {ExactnessStatus.UNBOUNDED_RELAXATION, ExactnessStatus.UNBOUNDED_QP},
    InstanceKind.EXACT: {ExactnessStatus.EXACT},
    InstanceKind.INEXACT_VERTICES: {ExactnessStatus.INEXACT},
    InstanceKind.INEXACT_MINFACES: {ExactnessStatus.INEXACT},
}

STQP_AGREEMENT_TOL = 1e-8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse reports usage errors with exit status 2; ours is 1."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}")
    return read_instance(text)


def _parse_point(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise UsageError(f"--at expects comma-separated reals, got '{text}'")


def cmd_solve(args) -> int:
    qp, _ = _read(args.file)
    rel = build_rlt(qp)
    sol = solve_rlt(qp, rel)
    sys.stdout.write(render(solve_fields(sol)))
    check = verify_certificate(rel.lp, sol.outcome)
    if not check:
        raise VerificationFailed(f"LP certificate rejected: {', '.join(check.reasons)}")
    return EXIT_OK


def cmd_certify(args) -> int:
    qp, meta = _read(args.file)
    report = certify_exactness(qp)
    sys.stdout.write(render(certify_fields(report)))
    if meta is not None and meta.kind is not None:
        try:
            kind = InstanceKind(meta.kind)
        except ValueError:
            raise ParseError(f"unknown instance kind '{meta.kind}'", field="meta.kind")
        if report.status not in EXPECTED_VERDICTS[kind]:
            raise VerificationFailed(f"file claims {kind.value} but the verdict is {report.status.value}")
    return EXIT_OK


def cmd_vertices(args) -> int:
    qp, _ = _read(args.file)
    P = qp.poly
    lifted = enumerate_lifted_vertices(build_rlt(qp)) if args.lifted else None
    fields = vertex_fields(enumerate_vertices(P), enumerate_minimal_faces(P), extreme_rays(P), lifted)
    sys.stdout.write(render(fields))
    return EXIT_OK


def cmd_generate(args) -> int:
    qp, _ = _read(args.file)
    P = qp.poly
    kind = KIND_NAMES[args.kind]
    if kind == InstanceKind.UNBOUNDED:
        inst = gen_unbounded(P, args.seed)
    elif kind == InstanceKind.EXACT:
        inst = gen_exact(P, args.face, args.seed)
    elif kind == InstanceKind.INEXACT_VERTICES:
        vertices = enumerate_vertices(P)
        if not (0 <= args.v1 < len(vertices) and 0 <= args.v2 < len(vertices)):
            raise BadFaceIndex(f"vertex indices must be below {len(vertices)}")
        inst = gen_inexact_vertices(P, vertices[args.v1], vertices[args.v2], args.seed)
    else:
        inst = gen_inexact_minfaces(P, args.v1, args.v2, args.seed)
    if not verify_generated(inst):
        raise VerificationFailed(f"generated {inst.kind.value} instance (seed {inst.seed}) failed its own checks")

    doc = emit_instance(inst.qp, {"seed": inst.seed, "kind": inst.kind, "certificate": inst.certificate})
    if args.out:
        Path(args.out).write_text(doc)
        logger.info(f"wrote {inst.kind.value} instance to {args.out}")
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def cmd_stqp_bound(args) -> int:
    qp, _ = _read(args.file)
    closed = stqp_bound(qp.Q, qp.c)
    rlt = solve_rlt(SpecificClassInstance(Q=qp.Q, c=qp.c, a=np.ones(qp.n)).to_qp()).value
    agree = abs(closed - rlt) <= STQP_AGREEMENT_TOL * (1.0 + abs(closed))
    sys.stdout.write(render([("stqp", closed), ("rlt", rlt), ("agree", agree)]))
    if not agree:
        raise VerificationFailed(f"closed form {closed:.12g} disagrees with the LP value {rlt:.12g}")
    return EXIT_OK


def cmd_qpa(args) -> int:
    qp, _ = _read(args.file)
    reformulation = build_qpa(qp)
    doc = emit_instance(reformulation.to_instance().to_qp())
    if args.out:
        Path(args.out).write_text(doc)
    else:
        sys.stdout.write(doc)
    sandwich = bound_sandwich(qp)
    sys.stdout.write(render([("witnesses", reformulation.M.shape[1]),
                             ("generators", reformulation.P.shape[1])] + sandwich_fields(sandwich)))
    if not sandwich.ordered:
        raise VerificationFailed("bounds are out of order")
    return EXIT_OK


def cmd_underest(args) -> int:
    qp, _ = _read(args.file)
    x_hat = _parse_point(args.at)
    if x_hat.shape != (qp.n,):
        raise UsageError(f"--at needs {qp.n} coordinates, got {x_hat.size}")
    value = underestimator(qp, x_hat)
    sys.stdout.write(render([("underest", value), ("q", qp.objective(x_hat))]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rltqp", description="RLT relaxations of quadratic programs over polyhedra")
    parser.add_argument("--log-level", default=None, type=str.upper,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help=f"logging level (default {settings.LOG_LEVEL})")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("solve", help="solve the RLT relaxation")
    p.add_argument("file")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("certify", help="compare the relaxation bound with the global optimum")
    p.add_argument("file")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("vertices", help="vertices, minimal faces and rays of the region")
    p.add_argument("file")
    p.add_argument("--lifted", action="store_true", help="also enumerate vertices of the lifted region")
    p.set_defaults(handler=cmd_vertices)

    p = sub.add_parser("generate", help="generate an objective with a prescribed relaxation behaviour")
    p.add_argument("file", help="instance file providing the region")
    p.add_argument("--kind", required=True, choices=sorted(KIND_NAMES))
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--face", type=int, default=0, help="minimal face index for --kind exact")
    p.add_argument("--v1", type=int, default=0, help="first vertex or minimal face index")
    p.add_argument("--v2", type=int, default=1, help="second vertex or minimal face index")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("stqp-bound", help="closed-form standard QP bound with an LP cross-check")
    p.add_argument("file")
    p.set_defaults(handler=cmd_stqp_bound)

    p = sub.add_parser("qpa", help="reformulate over minimal-face witnesses and rays")
    p.add_argument("file")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_qpa)

    p = sub.add_parser("underest", help="evaluate the convex underestimator")
    p.add_argument("file")
    p.add_argument("--at", required=True, help="comma-separated point")
    p.set_defaults(handler=cmd_underest)
    return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
    except UsageError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_USAGE

    logging.basicConfig(level=(args.log_level or settings.LOG_LEVEL).upper(), format=settings.LOG_FORMAT,
                        stream=sys.stderr)
    try:
        return args.handler(args)
    except UsageError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_USAGE
    except RltQpError as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code


def main(argv: Optional[List[str]] = None):
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
