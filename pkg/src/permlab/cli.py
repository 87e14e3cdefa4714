"""Command-line front end.

Every subcommand prints exactly one JSON document on stdout, with a
``manifest`` object recording how it was produced.  Diagnostics go to
stderr.  Exit codes: 0 success, 1 usage or input error, 2 a checked
inequality was violated, 3 the built-in instance verification failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from . import conjectures as cj
from .errors import PermlabError, VerificationError
from .gmf import (
    Partition,
    gmf,
    immanant,
    irreducible_character,
    linear_characters,
    normalized_gmf,
    parse_generators,
    sign_character,
    subgroup_from_generators,
    symmetric_group,
    trivial_character,
)
from .matrix import det
from .matrix_io import format_matrix, load_matrices
from .numeric import DEFAULT_PRECISION, normalize_field_tag, scalar_to_json
from .permanent import per_glynn, per_naive, per_ryser
from .registry import verify_paper
from .reports import VIOLATED, _jsonable, simplify
from .schur import SchurPower, spectral_summary
from .search import FLAG_SLACK, TARGETS, SearchConfig, SearchState, search

EXIT_OK, EXIT_USAGE, EXIT_VIOLATED, EXIT_MISMATCH = 0, 1, 2, 3
DUMP_MAX_N = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would exit with status 2, which is reserved for violations
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------


def resolve_threads(requested=None):
    if requested is not None:
        k = requested
    else:
        env = os.environ.get("PERMLAB_THREADS")
        try:
            k = int(env) if env else (os.cpu_count() or 1)
        except ValueError:
            raise UsageError(f"PERMLAB_THREADS must be an integer, got {env!r}") from None
    if k < 1:
        raise UsageError("thread count must be positive")
    return k


class Run:
    """Collects inputs and options for the manifest of one invocation."""

    def __init__(self, args):
        self.args = args
        self.inputs = []
        self.started = datetime.now(timezone.utc)
        self.t0 = time.perf_counter()
        self.threads = resolve_threads(getattr(args, "threads", None))

    def load(self, source):
        prec = getattr(self.args, "precision", DEFAULT_PRECISION)
        mats = load_matrices(source, prec)
        out = []
        for M in mats:
            if getattr(self.args, "float", False) and M.is_exact():
                M = M.to_float(prec)
            self.inputs.append({"source": str(source), "n": M.n, "field": M.field, "digest": M.digest()})
            out.append(M)
        return out

    def matrices(self, count=None):
        sources = self.args.input or []
        if not sources:
            raise UsageError("--input is required")
        mats = [M for s in sources for M in self.load(s)]
        if count is not None and len(mats) < count:
            raise UsageError(f"this operation needs {count} matrices, got {len(mats)}")
        return mats

    def manifest(self):
        opts = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func", "exact")}
        if "float" in opts:
            opts["float"] = bool(self.args.float)
            opts["mode"] = "float" if self.args.float or any(i["field"] == "float" for i in self.inputs) else "exact"
        return {
            "subcommand": self.args.command,
            "options": dict(opts, threads=self.threads),
            "inputs": self.inputs,
            "version": __version__,
            "seed": getattr(self.args, "seed", None),
            "timing": {"started": self.started.isoformat(timespec="seconds"),
                       "seconds": round(time.perf_counter() - self.t0, 6)},
        }


def value_json(x):
    return scalar_to_json(simplify(x))


def emit(doc, run):
    doc = dict(doc)
    doc["manifest"] = run.manifest() if run is not None else None
    sys.stdout.write(json.dumps(_jsonable(doc), indent=2) + "\n")


def _reports_exit(reports):
    return EXIT_VIOLATED if any(r.verdict == VIOLATED for r in reports) else EXIT_OK


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

_PER_ALGOS = {"ryser": per_ryser, "glynn": per_glynn, "naive": per_naive}


def cmd_per(run):
    (A, *_) = run.matrices(1)
    algo = run.args.algorithm
    if algo == "ryser":
        res = per_ryser(A, workers=run.threads)
    else:
        res = _PER_ALGOS[algo](A)
    emit({"value": value_json(res.value), "algorithm": res.algorithm, "exact": res.exact,
          "error_radius": res.error_radius, "n": A.n, "field": A.field}, run)
    return EXIT_OK


def cmd_det(run):
    (A, *_) = run.matrices(1)
    emit({"value": value_json(det(A)), "n": A.n, "field": A.field}, run)
    return EXIT_OK


def _group(args, n):
    if not args.group:
        return symmetric_group(n)
    return subgroup_from_generators(n, parse_generators(args.group, n))


def _character(text, G):
    text = (text or "trivial").strip()
    if text == "trivial":
        return trivial_character(G)
    if text == "sign":
        return sign_character(G)
    if text.startswith("linear:"):
        chars = linear_characters(G)
        k = int(text.split(":", 1)[1])
        if not 0 <= k < len(chars):
            raise UsageError(f"group has {len(chars)} linear characters; index {k} out of range")
        return chars[k]
    if len(G) != _factorial(G.n):
        raise UsageError("partition characters need the full symmetric group")
    return irreducible_character(Partition.parse(text))


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def cmd_gmf(run):
    (A, *_) = run.matrices(1)
    G = _group(run.args, A.n)
    chi = _character(run.args.character, G)
    emit({"value": value_json(gmf(A, G, chi)), "normalized": value_json(normalized_gmf(A, G, chi)),
          "group_order": len(G), "character": chi.name, "degree": value_json(chi.degree)}, run)
    return EXIT_OK


def cmd_immanant(run):
    (A, *_) = run.matrices(1)
    lam = Partition.parse(run.args.partition)
    chi = irreducible_character(lam)
    emit({"value": value_json(immanant(A, lam)), "partition": list(lam), "degree": chi.degree}, run)
    return EXIT_OK


def cmd_schur(run):
    (A, *_) = run.matrices(1)
    S = SchurPower(A)
    summary = spectral_summary(S, seed=run.args.seed)
    doc = {"n": A.n, "size": S.size, "form": S.form, "summary": summary.to_json()}
    if run.args.dump:
        if A.n > DUMP_MAX_N:
            raise UsageError(f"--dump is limited to n <= {DUMP_MAX_N}")
        Path(run.args.dump).write_text(format_matrix(S.dense(), comment="Schur power matrix, lexicographic order"))
        doc["dump"] = run.args.dump
    emit(doc, run)
    return EXIT_OK


def _check_reports(name, mats, args):
    A = mats[0]
    # a lone input is paired with its conjugate
    B = mats[1] if len(mats) > 1 else None

    def need_b():
        return B if B is not None else A.conjugate()

    if name == "pot":
        return [cj.pot_check(A, seed=args.seed)]
    if name == "bapat-sunder":
        return [cj.bapat_sunder(A, need_b())]
    if name == "per-max":
        return [cj.bapat_sunder_per_max(A)]
    if name == "chollet":
        return [cj.chollet(A, need_b())]
    if name == "chollet-self":
        return [cj.chollet_self(A)]
    if name == "real-chollet":
        return [cj.real_chollet(A)]
    if name == "classical":
        return cj.classical_suite(A, args.split or max(1, A.n // 2), B)
    if name == "dominance":
        G = _group(args, A.n)
        return [cj.permanent_dominance(A, G, _character(args.character, G))]
    if name == "merris":
        G = _group(args, A.n)
        return cj.merris_bound(A, G, _character(args.character, G))
    if name == "drury":
        return cj.drury_inequalities(A)
    if name in ("per-in-per", "per-in-per-weak", "det-in-det"):
        m = args.blocks
        if not m or A.n % m:
            raise UsageError("--blocks m must divide n")
        fn = {"per-in-per": cj.per_in_per, "per-in-per-weak": cj.per_in_per_weak, "det-in-det": cj.det_in_det}[name]
        return [fn(A, m, A.n // m)]
    if name == "tensor":
        return cj.tensor_suite(A, need_b())
    if name == "pate":
        return [cj.pate(A, args.k)]
    if name == "zfz":
        return cj.zfz_result5(A, need_b())
    if name == "compression":
        return cj.hadamard_compression_probe(A, args.budget, seed=args.seed)
    if name == "foregger":
        return cj.foregger(A, args.kmax).reports
    if name == "unitary":
        return [cj.max_per_unitary(A, args.budget, seed=args.seed).report]
    raise UsageError(f"unknown check {name!r}")


CHECKS = ["pot", "bapat-sunder", "per-max", "chollet", "chollet-self", "real-chollet", "classical", "dominance",
          "merris", "drury", "per-in-per", "per-in-per-weak", "det-in-det", "tensor", "pate", "zfz", "compression",
          "foregger", "unitary"]

PROBES = ["maximizer", "hadamard-power"]


def cmd_check(run):
    name = run.args.name
    mats = run.matrices(1)
    if name == "maximizer":
        res = cj.maximizer_search(mats[0], run.args.budget, seed=run.args.seed)
        emit({"check": name, "result": res.to_json()}, run)
        return EXIT_OK
    if name == "hadamard-power":
        res = cj.hadamard_power_probe(mats[0], run.args.kmax)
        emit({"check": name, "result": res.to_json()}, run)
        return EXIT_OK
    reports = _check_reports(name, mats, run.args)
    emit({"check": name, "reports": [r.to_json(include_witness=run.args.witness) for r in reports]}, run)
    return _reports_exit(reports)


def cmd_verify_paper(run):
    rep = verify_paper(raise_on_mismatch=False)
    doc = rep.to_json()
    doc["mismatches"] = [c.to_json() for c in rep.checks if not c.ok]
    emit(doc, run)
    if not rep.ok:
        for c in rep.checks:
            if not c.ok:
                print(f"mismatch: {c.instance}.{c.quantity}: expected {c.expected}, observed {c.observed}",
                      file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_search(run):
    a = run.args
    state_path = Path(a.state) if a.state else None
    if state_path is not None and state_path.exists() and not a.fresh:
        state = SearchState.load(state_path)
        print(f"resuming {state.config.target} at iteration {state.next_iteration}", file=sys.stderr)
    else:
        if not a.target:
            raise UsageError("--target is required for a new search")
        if a.n is None and not a.pinned:
            raise UsageError("--n is required for a new search")
        cfg = SearchConfig(a.target, a.n or 0, a.rank, a.field, a.seed, a.top_k, a.bits, a.enforce_deficient,
                           a.pinned, a.flag_ratio)
        state = cfg.validate()
    state = search(state, a.budget, workers=run.threads, max_seconds=a.max_seconds)
    if state_path is not None:
        state.save(state_path)
    doc = state.to_json()
    if not a.full:
        for c in doc["candidates"]:
            c.pop("matrices", None)
    doc["violations"] = len(state.violations)
    emit(doc, run)
    return EXIT_VIOLATED if state.violations else EXIT_OK


def cmd_convert(run):
    mats = run.matrices(1)
    tag = normalize_field_tag(run.args.to) if run.args.to != "cyc40" else "cycN:40"
    out = [M.with_field(tag, run.args.precision) for M in mats]
    text = "".join(format_matrix(M) for M in out)
    if run.args.output:
        Path(run.args.output).write_text(text)
    emit({"to": tag, "count": len(out), "digests": [M.digest() for M in out], "output": run.args.output,
          "text": None if run.args.output else text}, run)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _common(p, inputs=True):
    if inputs:
        p.add_argument("--input", "-i", action="append", metavar="FILE",
                       help="matrix file or builtin:<name>; repeat for a second matrix")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact arithmetic (default for exact fields)")
    mode.add_argument("--float", action="store_true", help="certified floating point at --precision bits")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, metavar="BITS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="worker cap (default: PERMLAB_THREADS or all cores)")


def build_parser():
    parser = _Parser(prog="permlab", description="permanents, immanants and Schur power matrices")
    parser.add_argument("--version", action="version", version=f"permlab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("per", help="permanent")
    _common(p)
    p.add_argument("--algorithm", choices=sorted(_PER_ALGOS), default="ryser")
    p.set_defaults(func=cmd_per)

    p = sub.add_parser("det", help="determinant")
    _common(p)
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("gmf", help="generalized matrix function")
    _common(p)
    p.add_argument("--group", help="generators in cycle notation, e.g. '(1 2); (3 4)' (default: S_n)")
    p.add_argument("--character", default="trivial", help="trivial, sign, linear:<k> or a partition like 2,1")
    p.set_defaults(func=cmd_gmf)

    p = sub.add_parser("immanant", help="immanant for a partition")
    _common(p)
    p.add_argument("--partition", required=True, help="comma list, e.g. 2,1")
    p.set_defaults(func=cmd_immanant)

    p = sub.add_parser("schur", help="Schur power matrix spectral summary")
    _common(p)
    p.add_argument("--dump", metavar="FILE", help=f"write the dense matrix (n <= {DUMP_MAX_N})")
    p.set_defaults(func=cmd_schur)

    p = sub.add_parser("check", help="run one inequality checker")
    p.add_argument("name", choices=CHECKS + PROBES)
    _common(p)
    p.add_argument("--budget", type=int, default=200, help="samples or evaluations for probes")
    p.add_argument("--split", type=int, help="block split for the classical suite")
    p.add_argument("--blocks", type=int, help="number of diagonal blocks m")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--group")
    p.add_argument("--character", default="trivial")
    p.add_argument("--witness", action="store_true", help="include full witnesses")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify-paper", help="re-derive all stored values of the built-in instances")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("search", help="seeded randomized violation search")
    p.add_argument("--target", choices=sorted(TARGETS))
    p.add_argument("--n", type=int)
    p.add_argument("--rank", type=int)
    p.add_argument("--field", choices=["gaussian", "rational"], default="gaussian")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--top-k", type=int, default=32)
    p.add_argument("--bits", type=int, default=6)
    p.add_argument("--enforce-deficient", action="store_true")
    p.add_argument("--flag-ratio", type=float, default=1 + FLAG_SLACK,
                   help="float ratio above which a sample is re-checked exactly")
    p.add_argument("--pinned", metavar="SOURCE", help="evaluate a fixed matrix instead of sampling")
    p.add_argument("--state", metavar="FILE", help="state file; resumed when it exists, written afterwards")
    p.add_argument("--fresh", action="store_true", help="ignore an existing state file")
    p.add_argument("--max-seconds", type=float)
    p.add_argument("--full", action="store_true", help="include candidate matrices in stdout")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("convert", help="rewrite matrices in another field")
    _common(p)
    p.add_argument("--to", required=True, help="rational, gaussian, cyc40, cycN:<N> or float")
    p.add_argument("--output", "-o", metavar="FILE")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None):
    parser = build_parser()
    run = None
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        run = Run(args)
        return args.func(run)
    except VerificationError as exc:
        return _fail(EXIT_MISMATCH, "verification", exc, run)
    except (UsageError, PermlabError, OSError, ValueError) as exc:
        return _fail(EXIT_USAGE, type(exc).__name__, exc, run)


def _fail(code, kind, exc, run):
    print(f"permlab: error: {exc}", file=sys.stderr)
    doc = {"error": {"kind": kind, "message": str(exc)}}
    line = getattr(exc, "line", None)
    if line is not None:
        doc["error"]["line"] = line
    emit(doc, run)
    return code


if __name__ == "__main__":
    sys.exit(main())
