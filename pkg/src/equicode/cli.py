"""Command-line surface: construct, verify, certify, project, reduce.

Files are written in a canonical JSON form: fixed key order, floats at 17
significant digits, no whitespace.  Writing, reading, and re-writing a file
reproduces identical bytes, so every certificate is reproducible from the
file alone.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .bounds import (
    dgs_bound_check,
    gerzon_certificate,
    matching_full_rank_certificate,
    multipartite_certificate,
    negative_clique_certificate,
    schnirelman_applied_certificate,
)
from .certificate import Certificate
from .codes import (
    AngleSet,
    Code,
    angle_set_of,
    gram_of,
    project_onto_complement,
    validate_code,
)
from .constructions import (
    ConcatParams,
    binary_kcode,
    concatenated_code,
    lemmens_seidel_code,
    lemmens_seidel_gram,
    lines28_gram,
    odd_reciprocal_code,
    odd_reciprocal_gram,
    regular_simplex,
    seven_dim_28_lines,
    simplex_gram,
)
from .errors import EquicodeError, InvalidParams, RandomizedFailure, TooLarge
from .graphlab import lambda_inequality_check, reduction_pipeline
from .matcore import DEFAULT_TOL, Tolerance, embed_from_gram, is_psd

GRAM_CSV_HEADER = "# equicode gram v1"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3


# canonical JSON ---------------------------------------------------------


def _float_token(x: float) -> str:
    if not math.isfinite(x):
        raise InvalidParams("cannot serialize non-finite numbers")
    return format(float(x), ".17g")


def canonical_json(obj) -> str:
    """Serialize with deterministic bytes; floats carry 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float_token(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        inner = ",".join(f"{json.dumps(str(k))}:{canonical_json(v)}"
                         for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return canonical_json(obj.tolist())
    raise InvalidParams(f"cannot serialize {type(obj).__name__}")


def write_code_file(path: str, dim: int, vectors=None, gram=None,
                    metadata: Optional[dict] = None) -> None:
    if (vectors is None) == (gram is None):
        raise InvalidParams("exactly one of vectors/gram must be given")
    doc = {"format_version": "1", "dim": int(dim)}
    if vectors is not None:
        doc["vectors"] = [[float(x) for x in row] for row in vectors]
    else:
        doc["gram"] = [[float(x) for x in row] for row in gram]
    doc["metadata"] = metadata or {}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc))
        fh.write("\n")


def read_code_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format_version") != "1":
        raise InvalidParams("unsupported or missing format_version")
    if ("vectors" in doc) == ("gram" in doc):
        raise InvalidParams("file must carry exactly one of vectors/gram")
    rows = doc.get("vectors", doc.get("gram"))
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise InvalidParams("arrays must be rectangular")
    return doc


def rewrite_code_file(path: str, doc: dict) -> None:
    """Re-serialize a parsed document canonically (byte-stable round trip)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc))
        fh.write("\n")


def load_code(path: str, tol: Tolerance = DEFAULT_TOL) -> tuple:
    """Code from a file; Gram-only files are embedded on load."""
    doc = read_code_file(path)
    dim = int(doc["dim"])
    if "vectors" in doc:
        vectors = np.array(doc["vectors"], dtype=float)
        if vectors.shape[1] != dim:
            raise InvalidParams("vector length disagrees with dim")
        return Code(vectors, tol), doc
    from .matcore import SymMatrix

    gram = SymMatrix.from_array_symmetrized(np.array(doc["gram"], dtype=float))
    code = embed_from_gram(gram, tol)
    if code.dim > dim:
        raise InvalidParams("gram rank exceeds the declared dim")
    if code.dim < dim:
        pad = np.zeros((len(code), dim - code.dim))
        code = Code(np.hstack([code.vectors, pad]), tol)
    return code, doc


def write_gram_csv(path: str, code: Code) -> None:
    g = gram_of(code).as_array()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(GRAM_CSV_HEADER + "\n")
        for row in g:
            fh.write(",".join(_float_token(float(x)) for x in row))
            fh.write("\n")


def write_report(path: Optional[str], certificates: Sequence[Certificate],
                 tol: Tolerance) -> dict:
    doc = {
        "format_version": "1",
        "artifact_version": __version__,
        "tolerances": {"eig_zero": tol.eig_zero, "psd_slack": tol.psd_slack,
                       "angle_tol": tol.angle_tol},
        "certificates": [c.to_dict() for c in certificates],
    }
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(doc))
            fh.write("\n")
    return doc


# angle-set grammar ------------------------------------------------------


def parse_angle_set(spec: str, tol: float) -> AngleSet:
    """Parse 'interval:lo,hi' and 'point:x' terms joined by '+'."""
    intervals, points = [], []
    for term in spec.split("+"):
        term = term.strip()
        if term.startswith("interval:"):
            body = term[len("interval:"):]
            lo, hi = body.split(",")
            intervals.append((float(lo), float(hi)))
        elif term.startswith("point:"):
            points.append(float(term[len("point:"):]))
        else:
            raise InvalidParams(f"cannot parse angle-set term {term!r}")
    return AngleSet(intervals=tuple(intervals), points=tuple(points), tol=tol)


def tolerance_from_env(base: Tolerance = DEFAULT_TOL) -> Tolerance:
    """Apply EQUICODE_TOL: either one float (sets angle_tol) or 'k=v' pairs."""
    raw = os.environ.get("EQUICODE_TOL")
    if not raw:
        return base
    fields = {"eig_zero": base.eig_zero, "psd_slack": base.psd_slack,
              "angle_tol": base.angle_tol}
    if "=" in raw:
        for piece in raw.split(","):
            key, value = piece.split("=")
            key = key.strip()
            if key not in fields:
                raise InvalidParams(f"unknown tolerance field {key!r}")
            fields[key] = float(value)
    else:
        fields["angle_tol"] = float(raw)
    return Tolerance(**fields)


# subcommands ------------------------------------------------------------


def _detected_points(code: Code, tol: Tolerance) -> list:
    if len(code) < 2:
        return []
    return [float(p) for p in angle_set_of(code, tol).points]


def cmd_construct(args, tol: Tolerance) -> int:
    name = args.name
    seed = args.seed
    metadata = {"construction": name, "parameters": {}, "seed": seed}
    if name == "lemmens-seidel":
        _need(args, "n")
        code = lemmens_seidel_code(args.n)
        metadata["parameters"] = {"n": args.n}
        metadata["gram_rank"] = is_psd(lemmens_seidel_gram(args.n)).witness["rank"]
    elif name == "odd-reciprocal":
        _need(args, "n")
        _need(args, "r")
        code = odd_reciprocal_code(args.n, args.r)
        metadata["parameters"] = {"n": args.n, "r": args.r}
        metadata["gram_rank"] = is_psd(odd_reciprocal_gram(args.n, args.r)).witness["rank"]
    elif name == "lines28":
        code = seven_dim_28_lines()
        metadata["gram_rank"] = is_psd(lines28_gram()).witness["rank"]
    elif name == "simplex":
        _need(args, "r")
        code = regular_simplex(args.r)
        metadata["parameters"] = {"r": args.r}
        metadata["gram_rank"] = is_psd(simplex_gram(args.r)).witness["rank"]
    elif name == "binary-kcode":
        _need(args, "n")
        _need(args, "k")
        code = binary_kcode(args.n, args.k)
        metadata["parameters"] = {"n": args.n, "k": args.k}
    elif name == "concat":
        for field in ("n", "k", "r", "alpha1"):
            _need(args, field)
        params = ConcatParams.from_inputs(args.n, args.k, args.r, args.alpha1,
                                          seed if seed is not None else 0)
        code, achieved_beta, report = concatenated_code(params)
        metadata["parameters"] = {"n": args.n, "k": args.k, "r": args.r,
                                  "alpha1": args.alpha1}
        metadata["seed"] = params.seed
        metadata["achieved_beta"] = achieved_beta
        metadata["beta_target"] = params.beta_target
        metadata["attempts"] = report.attempts
        metadata["attempt_seed"] = report.attempt_seed
        metadata["copy_seeds"] = [list(s) for s in report.copy_seeds]
    else:
        raise InvalidParams(f"unknown construction {name!r}")
    metadata["size"] = len(code)
    points = _detected_points(code, tol)
    metadata["angles"] = points
    write_code_file(args.out, code.dim, vectors=code.vectors, metadata=metadata)
    if args.gram_csv:
        write_gram_csv(args.gram_csv, code)
    print(f"{name}: {len(code)} vectors in R^{code.dim} -> {args.out}")
    print("angles: " + (", ".join(_float_token(p) for p in points) or "n/a"))
    return EXIT_OK


def _need(args, field):
    if getattr(args, field, None) is None:
        raise InvalidParams(f"construction requires --{field.replace('_', '-')}")


def cmd_verify(args, tol: Tolerance) -> int:
    code, _ = load_code(args.file, tol)
    aset = parse_angle_set(args.L, tol.angle_tol)
    report = validate_code(code, aset)
    for label, count in sorted(report.histogram.items()):
        print(f"matched {label}: {count} pairs")
    for i, j, value, dist in report.violations[:20]:
        print(f"violation ({i},{j}): value {_float_token(value)} "
              f"distance {_float_token(dist)}")
    extra = len(report.violations) - 20
    if extra > 0:
        print(f"... and {extra} more violations")
    cert = Certificate(
        name="validate", statement="every pair lies in the angle set",
        passed=report.passed, lhs=len(report.violations), rhs=0,
        margin=-len(report.violations), tol=0.0,
        witness={"histogram": dict(sorted(report.histogram.items()))})
    write_report(args.report, [cert], tol)
    print("PASS" if report.passed else f"FAIL ({len(report.violations)} violations)")
    return EXIT_OK if report.passed else EXIT_FAIL


SUITES = ("gerzon", "negclique", "schnirelman", "matching", "multipartite",
          "dgs", "lambda", "all")


def _parse_parts(raw: str) -> list:
    parts = []
    for piece in raw.split(";"):
        piece = piece.strip()
        if "-" in piece:
            lo, hi = piece.split("-")
            parts.append(list(range(int(lo), int(hi) + 1)))
        else:
            parts.append([int(x) for x in piece.split(",") if x])
    return parts


def _concat_parts(doc: dict) -> Optional[list]:
    meta = doc.get("metadata", {})
    if meta.get("construction") != "concat":
        return None
    p = meta.get("parameters", {})
    try:
        block = math.comb(int(p["n"]), int(p["k"]))
        copies = int(p["r"]) + 1
    except (KeyError, ValueError):
        return None
    return [list(range(c * block, (c + 1) * block)) for c in range(copies)]


def cmd_certify(args, tol: Tolerance) -> int:
    code, doc = load_code(args.file, tol)
    wanted = SUITES[:-1] if args.suite == "all" else (args.suite,)
    certificates = []

    def attempt(name, thunk):
        try:
            result = thunk()
            if isinstance(result, list):
                certificates.extend(result)
            else:
                certificates.append(result)
        except EquicodeError as exc:
            certificates.append(Certificate.skip(name, f"{type(exc).__name__}: {exc}"))

    for suite in wanted:
        if suite == "gerzon":
            attempt("gerzon", lambda: gerzon_certificate(code, tol))
        elif suite == "negclique":
            alpha = args.alpha
            if alpha is None:
                g = gram_of(code).as_array()
                off = g[np.triu_indices(len(code), k=1)] if len(code) > 1 else np.array([-1.0])
                alpha = -float(off.max())
            if alpha <= 0:
                certificates.append(Certificate.skip(
                    "negative-clique", "code has non-negative inner products"))
            else:
                a = alpha
                attempt("negative-clique",
                        lambda: negative_clique_certificate(code, a, tol))
        elif suite == "schnirelman":
            attempt("schnirelman-applied",
                    lambda: schnirelman_applied_certificate(code, None, tol))
        elif suite == "matching":
            attempt("matching-full-rank",
                    lambda: matching_full_rank_certificate(code, None, tol))
        elif suite == "multipartite":
            meta = doc.get("metadata", {})
            parts = _parse_parts(args.parts) if args.parts else _concat_parts(doc)
            alpha = args.alpha
            if alpha is None and meta.get("construction") == "concat":
                alpha = meta.get("parameters", {}).get("alpha1")
            beta = args.beta
            if beta is None:
                beta = meta.get("achieved_beta")
            if parts is None:
                certificates.append(Certificate.skip(
                    "multipartite", "no --parts given and none derivable"))
            elif alpha is None or beta is None or beta <= 0:
                certificates.append(Certificate.skip(
                    "multipartite", "needs --alpha and a positive --beta"))
            else:
                a_val, b_val = alpha, beta
                attempt("multipartite", lambda: multipartite_certificate(
                    code, parts, a_val, b_val, tol))
        elif suite == "dgs":
            if args.L:
                aset = parse_angle_set(args.L, tol.angle_tol)
            else:
                aset = angle_set_of(code, tol) if len(code) > 1 else None
            if aset is None:
                certificates.append(Certificate.skip("dgs", "no angle set available"))
            else:
                als = aset
                attempt("dgs", lambda: dgs_bound_check(code, als, tol))
        elif suite == "lambda":
            attempt("lambda-inequality",
                    lambda: lambda_inequality_check(code, None, tol))
    write_report(args.report, certificates, tol)
    failed = 0
    for cert in certificates:
        if cert.skipped:
            print(f"SKIP {cert.name}: {cert.reason}")
        elif cert.passed:
            print(f"PASS {cert.name}: {cert.statement}")
        else:
            failed += 1
            print(f"FAIL {cert.name}: {cert.statement} "
                  f"(lhs={cert.lhs}, rhs={cert.rhs})")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_project(args, tol: Tolerance) -> int:
    code, _ = load_code(args.file, tol)
    clique = [int(x) for x in args.clique.split(",") if x]
    rest = [i for i in range(len(code)) if i not in set(clique)]
    if not rest:
        raise InvalidParams("the clique covers the whole code")
    projected = project_onto_complement(code.subset(rest), code.subset(clique), tol)
    metadata = {"construction": "projection",
                "parameters": {"clique": clique, "source": os.path.basename(args.file)},
                "seed": None, "size": len(projected),
                "angles": _detected_points(projected, tol)}
    write_code_file(args.out, projected.dim, vectors=projected.vectors,
                    metadata=metadata)
    print(f"projected {len(projected)} vectors -> {args.out}")
    return EXIT_OK


def cmd_reduce(args, tol: Tolerance) -> int:
    code, _ = load_code(args.file, tol)
    outcome = reduction_pipeline(code, args.t, tol)
    sidecar = args.sidecar or (args.out + ".reduction.json")
    bucket_doc = {}
    for key, members in sorted(outcome.buckets.items(), key=lambda kv: str(kv[0])):
        label = ",".join(str(v) for v in key) if isinstance(key, tuple) else f"size:{key}"
        bucket_doc[label or "(empty)"] = list(members)
    doc = {
        "alpha": outcome.alpha,
        "t": args.t,
        "clique": list(outcome.clique),
        "switched": list(outcome.switched),
        "accounting": dict(outcome.accounting),
        "accounting_identity": outcome.accounting["size"] ==
            outcome.accounting["s_y"] + outcome.accounting["others"] +
            outcome.accounting["clique"],
        "buckets": bucket_doc,
        "garbage_checks": [dict(g) for g in outcome.garbage_checks],
        "projected_size": len(outcome.projected) if outcome.projected else 0,
    }
    with open(sidecar, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc))
        fh.write("\n")
    if outcome.projected is not None:
        metadata = {"construction": "reduction",
                    "parameters": {"t": args.t, "source": os.path.basename(args.file)},
                    "seed": None, "size": len(outcome.projected),
                    "angles": _detected_points(outcome.projected, tol)}
        write_code_file(args.out, outcome.projected.dim,
                        vectors=outcome.projected.vectors, metadata=metadata)
        print(f"reduced to {len(outcome.projected)} vectors -> {args.out}")
    else:
        print("reduction produced an empty projected bucket; sidecar only")
    print(f"accounting: {doc['accounting']} -> {sidecar}")
    return EXIT_OK


# entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equicode",
        description="Construct and certify spherical codes and equiangular lines.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a named code and write it to a file")
    p.add_argument("name", choices=["lemmens-seidel", "odd-reciprocal", "lines28",
                                    "simplex", "binary-kcode", "concat"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--alpha1", type=float)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--gram-csv", dest="gram_csv", default=None)

    p = sub.add_parser("verify", help="validate a code file against an angle set")
    p.add_argument("file")
    p.add_argument("--L", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--report", default=None)

    p = sub.add_parser("certify", help="run certificate suites on a code file")
    p.add_argument("file")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--parts", default=None)
    p.add_argument("--L", default=None)
    p.add_argument("--report", default=None)

    p = sub.add_parser("project", help="project the rest of a code off a clique")
    p.add_argument("file")
    p.add_argument("--clique", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("reduce", help="clique/switch/project reduction pipeline")
    p.add_argument("file")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--sidecar", default=None)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"construct": cmd_construct, "verify": cmd_verify,
                "certify": cmd_certify, "project": cmd_project,
                "reduce": cmd_reduce}
    try:
        tol = tolerance_from_env()
        if getattr(args, "tol", None):
            tol = Tolerance(eig_zero=tol.eig_zero, psd_slack=tol.psd_slack,
                            angle_tol=args.tol)
        return handlers[args.command](args, tol)
    except (InvalidParams, TooLarge, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RandomizedFailure as exc:
        print(f"RandomizedFailure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except EquicodeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"OSError: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
