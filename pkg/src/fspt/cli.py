"""``fspt`` command line: group checks, cohomology summaries, pentads, classification, SDC self-test.

Every command writes one UTF-8 JSON document (sorted keys, newline-terminated)
to stdout or ``--out``.  Exit codes: 0 ok, 1 I/O, 2 validation or membership
failure, 3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import sdc
from .classify import (
    DEFAULT_CLASSIFIER_BOUND,
    KAPPA_BOUND,
    classify_by_witness,
    classify_pd0,
    default_root_order,
    kappa_classes,
)
from .cochain import Z2, differential_matrix, mu
from .errors import FsptError, GroupTooLarge, NotAMember
from .group import DEFAULT_MAX_ORDER, FiniteGroup, enumerate_twist_homs, parse_group_file
from .pentad import (
    DEFAULT_EQUIVALENCE_BOUND,
    check_pentad,
    equivalent,
    pentad_from_json,
    reduce_to_pd0,
    triple_to_json,
    witness_to_json,
)
from .zmod import rank_f2

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_BOUND = 0, 1, 2, 3
DEFAULT_SEED = 20240607


class _Failure(Exception):
    def __init__(self, code: int, payload: dict):
        super().__init__(payload.get("error"))
        self.code = code
        self.payload = payload


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise _Failure(EXIT_IO, {"error": "io", "message": str(exc)}) from exc


def _read_json(path: str):
    try:
        return json.loads(_read(path).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise _Failure(EXIT_INVALID, {"error": "ParseError", "message": f"{path}: {exc}"}) from exc


def _load_group(path: str, max_order: int) -> FiniteGroup:
    return parse_group_file(_read(path), max_order=max_order)


def cmd_group_check(args) -> tuple[int, dict]:
    group = _load_group(args.path, args.max_group)
    homs = enumerate_twist_homs(group)
    return EXIT_OK, {
        "valid": True,
        "order": group.order,
        "identity": group.identity,
        "inverse": list(group.inverse),
        "twists": [list(a.values) for a in homs],
    }


def cmd_cohom(args) -> tuple[int, dict]:
    group = _load_group(args.path, args.max_group)
    n = args.root_order or default_root_order(group)
    ring = mu(n)
    cells = group.order ** 2 * 2
    entries = []
    for a in enumerate_twist_homs(group):
        d1 = differential_matrix(a, 1, Z2, group).matrix
        d2 = differential_matrix(a, 2, Z2, group).matrix
        cocycles = cells - rank_f2(d2)
        boundaries = rank_f2(d1)
        entries.append({
            "a": list(a.values),
            "z2_degree2": {
                "cocycle_dim": cocycles,
                "coboundary_dim": boundaries,
                "cohomology_dim": cocycles - boundaries,
                "kappa_classes": len(kappa_classes(group, a)),
            },
            "mu_degree3": {
                "cocycles": differential_matrix(a, 3, ring, group).kernel.size(),
                "coboundaries": differential_matrix(a, 2, ring, group).image.size(),
            },
        })
    return EXIT_OK, {"order": group.order, "root_order": n, "twists": entries}


def _load_pentad(path: str):
    return pentad_from_json(_read_json(path))


def cmd_pentad(args) -> tuple[int, dict]:
    if args.verb == "check":
        report = check_pentad(_load_pentad(args.paths[0]))
        return (EXIT_OK if report.member else EXIT_INVALID), report.to_json()
    if args.verb == "reduce":
        triple, witness = reduce_to_pd0(_load_pentad(args.paths[0]))
        return EXIT_OK, {"triple": triple_to_json(triple), "witness": witness_to_json(witness)}
    first, second = (_load_pentad(p) for p in args.paths)
    witness = equivalent(first, second, max_order=args.max_group)
    return EXIT_OK, {"equivalent": witness is not None, "witness": witness_to_json(witness)}


def cmd_classify(args) -> tuple[int, dict]:
    group = _load_group(args.group, max(args.max_group, DEFAULT_MAX_ORDER))
    if args.orbit_by_witness:
        result = classify_by_witness(group, args.root_order, samples=args.samples, seed=args.seed,
                                     max_order=args.max_group)
    else:
        result = classify_pd0(group, args.root_order, max_order=args.max_group, threads=args.threads)
    return EXIT_OK, result.to_json()


def sdc_selftest(seed: int = DEFAULT_SEED, max_modes: int = 5, samples: int = 20) -> dict:
    """Seeded numerical sweep of the SDC invariants; every residual is reported."""
    rng = np.random.default_rng(seed)

    def cvec(d):
        return rng.normal(size=d) + 1j * rng.normal(size=d)

    reps = []
    for n in range(1, max_modes + 1):
        space = sdc.ConjugatedSpace.standard(2 * n)
        rep = sdc.build_fock_rep(space, sdc.random_basis_projection(space, rng))
        car = max(sdc.car_residual(rep, cvec(2 * n), cvec(2 * n)) for _ in range(samples))
        adj = max(sdc.adjoint_residual(rep, cvec(2 * n)) for _ in range(samples))
        grading = max(float(np.linalg.norm(rep.gamma @ b @ rep.gamma + b)) for b in rep.generators)
        vacuum = max(
            abs(complex(np.vdot(rep.vacuum, rep.B(rep.mode_vector(j)) @ rep.B(rep.mode_vector(j)).conj().T @ rep.vacuum)))
            for j in range(n)
        )
        _, evals, ground = sdc.onsite_hamiltonian(rep)
        reps.append({
            "modes": n,
            "car_residual": car,
            "adjoint_residual": adj,
            "grading_residual": grading,
            "vacuum_residual": vacuum,
            "ground_energy": float(evals[0]),
            "gap": float(evals[1] - evals[0]),
            "ground_overlap": float(abs(np.vdot(rep.vacuum, ground))),
            "spectrum": [round(float(e), 9) for e in evals],
        })

    space = sdc.ConjugatedSpace.standard(4)
    implementers = []
    for _ in range(samples):
        left = sdc.build_fock_rep(space, sdc.random_basis_projection(space, rng))
        right = sdc.build_fock_rep(space, sdc.random_basis_projection(space, rng))
        report = sdc.check_graded_implementers(
            left, right,
            sdc.bogoliubov(left, sdc.random_real_orthogonal(4, rng)),
            sdc.bogoliubov(right, sdc.random_real_orthogonal(4, rng)),
        )
        implementers.append(report)
    passed = (
        all(r["car_residual"] <= sdc.ALGEBRA_TOL and r["vacuum_residual"] <= sdc.ALGEBRA_TOL for r in reps)
        and all(abs(r["ground_energy"] + r["modes"]) <= sdc.IMPLEMENTER_TOL for r in reps)
        and all(abs(r["gap"] - 2) <= sdc.IMPLEMENTER_TOL for r in reps)
        and all(r["passed"] for r in implementers)
    )
    return {
        "seed": seed,
        "representations": reps,
        "graded_implementers": {
            "samples": len(implementers),
            "max_right_residual": max(r["right_residual"] for r in implementers),
            "max_left_residual": max(r["left_residual"] for r in implementers),
            "parities": sorted({f'{r["parity_left"]}/{r["parity_right"]}' for r in implementers}),
            "all_passed": all(r["passed"] for r in implementers),
        },
        "passed": passed,
    }


def cmd_sdc_selftest(args) -> tuple[int, dict]:
    report = sdc_selftest(args.seed)
    return (EXIT_OK if report["passed"] else EXIT_INVALID), report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fspt", description=__doc__.splitlines()[0])
    parser.add_argument("--out", help="write the JSON document here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, max_group):
        p.add_argument("--out", default=argparse.SUPPRESS)
        p.add_argument("--max-group", type=int, default=max_group)

    group = sub.add_parser("group", help="validate a group table")
    gsub = group.add_subparsers(dest="verb", required=True)
    check = gsub.add_parser("check")
    check.add_argument("path")
    common(check, DEFAULT_MAX_ORDER)
    check.set_defaults(func=cmd_group_check)

    cohom = sub.add_parser("cohom", help="degree-2 and degree-3 cohomology summary per twist")
    cohom.add_argument("path")
    cohom.add_argument("--root-order", type=int)
    common(cohom, KAPPA_BOUND)
    cohom.set_defaults(func=cmd_cohom)

    pentad = sub.add_parser("pentad", help="membership, reduction and equivalence of pentads")
    pentad.add_argument("verb", choices=["check", "reduce", "equiv"])
    pentad.add_argument("paths", nargs="+")
    common(pentad, DEFAULT_EQUIVALENCE_BOUND)
    pentad.set_defaults(func=cmd_pentad)

    classify = sub.add_parser("classify", help="enumerate classes of reduced triples")
    classify.add_argument("group")
    classify.add_argument("--root-order", type=int)
    classify.add_argument("--threads", type=int, default=1)
    classify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    classify.add_argument("--samples", type=int, default=8)
    classify.add_argument("--orbit-by-witness", action="store_true")
    common(classify, DEFAULT_CLASSIFIER_BOUND)
    classify.set_defaults(func=cmd_classify)

    sdc_parser = sub.add_parser("sdc", help="finite self-dual CAR checks")
    ssub = sdc_parser.add_subparsers(dest="verb", required=True)
    selftest = ssub.add_parser("selftest")
    selftest.add_argument("--seed", type=int, default=DEFAULT_SEED)
    selftest.add_argument("--out", default=argparse.SUPPRESS)
    selftest.set_defaults(func=cmd_sdc_selftest)
    return parser


def _validate_args(args):
    if getattr(args, "command", None) == "pentad":
        want = 2 if args.verb == "equiv" else 1
        if len(args.paths) != want:
            raise _Failure(EXIT_INVALID, {"error": "usage", "message": f"pentad {args.verb} takes {want} path(s)"})
    for name in ("max_group", "threads", "samples"):
        if getattr(args, name, 1) < 1:
            raise _Failure(EXIT_INVALID, {"error": "usage", "message": f"--{name.replace('_', '-')} must be positive"})


def run(argv=None) -> tuple[int, dict, str | None]:
    args = build_parser().parse_args(argv)
    try:
        _validate_args(args)
        code, payload = args.func(args)
    except _Failure as exc:
        code, payload = exc.code, exc.payload
    except GroupTooLarge as exc:
        code, payload = EXIT_BOUND, {"error": "GroupTooLarge", "message": str(exc)}
    except NotAMember as exc:
        code, payload = EXIT_INVALID, {"error": "NotAMember", "message": str(exc)}
    except FsptError as exc:
        code, payload = EXIT_INVALID, {"error": type(exc).__name__, "message": str(exc)}
    return code, payload, getattr(args, "out", None)


def main(argv=None) -> int:
    code, payload, out = run(argv)
    text = dumps(payload)
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            sys.stderr.write(dumps({"error": "io", "message": str(exc)}))
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
