"""Command-line front door.

Subcommands: construct, measure, match, experiment, verify.  Exit codes:
0 all assertions pass, 2 assertion failure (counterexample on stderr),
3 resource cap hit, 4 input error.  Reports are JSON by default; --csv
flattens tabular parts.  Repeated runs are byte-identical: measure reports
via the result cache, experiment reports by construction.
"""

import argparse
import csv
import hashlib
import io
import json
import sys
from pathlib import Path

from ..adversary import (
    FixedInputAdversary,
    eq_adversary,
    eq_algorithm,
    optimal_tree_player,
    run_match,
    weight1_algorithm,
    weight2_algorithm,
    weights_adversary,
    weights_alg_A,
    weights_alg_B,
    weights_m2_algorithm,
)
from ..catalog import REGISTRY, parse_construction
from ..errors import (
    AdversaryInvalidError,
    DomainError,
    FormatError,
    MatchProtocolError,
    MembershipError,
    ResourceCapError,
    VerificationError,
)
from ..fileio import (
    canonical_function_bytes,
    function_to_json_obj,
    read_function,
)
from ..measures.report import MEASURES, compute_measures, verify_entry
from ..slicecore import string_to_mask
from .cache import ResultCache
from .experiments import ExperimentSpec, experiment_names, run_experiment

_EXIT_OK = 0
_EXIT_ASSERTION = 2
_EXIT_CAP = 3
_EXIT_INPUT = 4


class _Parser(argparse.ArgumentParser):
    """argparse reserves exit code 2; remap usage errors onto the input code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _error(kind: str, message: str, **extra) -> None:
    obj = {"error": kind, "message": message}
    obj.update(extra)
    sys.stderr.write(_json_text(obj))


def _load_function(args):
    """Resolve --function/--construct into (function, stable reference)."""
    if getattr(args, "construct", None):
        spec = parse_construction(args.construct)
        return spec.build(), {"construction": spec.to_string()}
    if getattr(args, "function", None):
        f = read_function(args.function)
        digest = hashlib.sha256(canonical_function_bytes(f)).hexdigest()
        return f, {"sha256": digest}
    raise DomainError("give either --function FILE or --construct SPEC")


def _split_player_spec(text: str) -> tuple[str, dict[str, str]]:
    name, sep, rest = text.partition(":")
    name = name.strip()
    params: dict[str, str] = {}
    if sep:
        for part in rest.split(","):
            key, eq, raw = part.partition("=")
            if not eq or not key.strip() or not raw.strip():
                raise DomainError(f"bad player parameter {part!r}")
            if key.strip() in params:
                raise DomainError(f"duplicate player parameter {key.strip()!r}")
            params[key.strip()] = raw.strip()
    return name, params


def _int_params(name: str, params: dict[str, str], *wanted: str) -> list[int]:
    missing = [w for w in wanted if w not in params]
    if missing:
        raise DomainError(f"{name} needs parameters {', '.join(wanted)}")
    extra = set(params) - set(wanted)
    if extra:
        raise DomainError(f"{name} got unknown parameters {', '.join(sorted(extra))}")
    try:
        return [int(params[w]) for w in wanted]
    except ValueError as e:
        raise DomainError(f"{name}: {e}") from None


_ALGORITHMS = "eq, weights-a, weights-b, weights-m2, weight1, weight2, optimal"


def _make_algorithm(text: str, f):
    name, params = _split_player_spec(text)
    if name == "eq":
        (k,) = _int_params(name, params, "k")
        return eq_algorithm(k)
    if name == "weights-a":
        n, m, k = _int_params(name, params, "n", "m", "k")
        return weights_alg_A(n, m, k)
    if name == "weights-b":
        n, m, k = _int_params(name, params, "n", "m", "k")
        return weights_alg_B(n, m, k)
    if name == "weights-m2":
        n, k = _int_params(name, params, "n", "k")
        return weights_m2_algorithm(n, k)
    if name in ("weight1", "weight2", "optimal"):
        if params:
            raise DomainError(f"{name} takes no parameters; it reads the function")
        if name == "weight1":
            return weight1_algorithm(f)
        if name == "weight2":
            return weight2_algorithm(f)
        return optimal_tree_player(f)
    raise DomainError(f"unknown algorithm {name!r}; known: {_ALGORITHMS}")


_ADVERSARIES = "eq, weights-basic, weights-balanced, weights-m2, fixed"


def _make_adversary(text: str, f, seed: int | None):
    name, params = _split_player_spec(text)
    if name == "eq":
        (k,) = _int_params(name, params, "k")
        return eq_adversary(k)
    if name == "fixed":
        x = params.pop("x", None)
        if x is None or params:
            raise DomainError("fixed needs exactly one parameter x=<bitstring>")
        mask = string_to_mask(x)
        f.domain.rank(mask)
        return FixedInputAdversary(mask)
    if name in ("weights-basic", "weights-balanced"):
        mode = name.removeprefix("weights-")
        own_seed = params.pop("seed", None)
        n, m, k = _int_params(name, params, "n", "m", "k")
        chosen = int(own_seed) if own_seed is not None else seed
        return weights_adversary(n, m, k, mode=mode, seed=chosen)
    if name == "weights-m2":
        n, k = _int_params(name, params, "n", "k")
        return weights_adversary(n, 2, k, mode="m2")
    raise DomainError(f"unknown adversary {name!r}; known: {_ADVERSARIES}")


def _flat_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None or isinstance(value, (int, float, str)):
        return str(value)
    return json.dumps(value, sort_keys=True)


def _measure_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["measure", "value", "nodes", "millis"])
    for name, entry in report["measures"].items():
        writer.writerow([name, entry["value"], entry["nodes"], entry["millis"]])
    return buf.getvalue()


def _experiment_csv(report: dict) -> str:
    cases = report["cases"]
    observed_keys: set[str] = set()
    expected_keys: set[str] = set()
    for c in cases:
        if isinstance(c["observed"], dict):
            observed_keys.update(c["observed"])
        if isinstance(c["expected"], dict):
            expected_keys.update(c["expected"])
    header = (
        ["key", "pass"]
        + sorted(observed_keys)
        + [f"expected_{k}" for k in sorted(expected_keys)]
    )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for c in cases:
        observed = c["observed"] if isinstance(c["observed"], dict) else {}
        expected = c["expected"] if isinstance(c["expected"], dict) else {}
        row = [c["key"], _flat_cell(c["pass"])]
        row += [_flat_cell(observed.get(k, "")) for k in sorted(observed_keys)]
        row += [_flat_cell(expected.get(k, "")) for k in sorted(expected_keys)]
        writer.writerow(row)
    return buf.getvalue()


def _cmd_construct(args) -> int:
    spec = parse_construction(args.spec)
    f = spec.build()
    obj = function_to_json_obj(f, construction=spec.to_json_obj())
    _emit(_json_text(obj), args.out)
    return _EXIT_OK


def _cmd_measure(args) -> int:
    f, ref = _load_function(args)
    names = [part.strip() for part in args.measures.split(",") if part.strip()]
    if not names:
        raise DomainError("empty measure list")
    for name in names:
        if name not in MEASURES:
            raise DomainError(
                f"unknown measure {name!r}; known: {', '.join(sorted(MEASURES))}"
            )
    cache = None if args.no_cache else ResultCache()
    report = compute_measures(f, names, ref, cache)
    text = _measure_csv(report) if args.csv else _json_text(report)
    _emit(text, args.out)
    return _EXIT_OK


def _cmd_match(args) -> int:
    f, ref = _load_function(args)
    alg = _make_algorithm(args.algorithm, f)
    adv = _make_adversary(args.adversary, f, args.seed)
    transcript = run_match(alg, adv, f, budget=args.budget)
    lines = []
    for i, (position, answer) in enumerate(transcript.pairs):
        lines.append(
            json.dumps(
                {"query": i + 1, "position": position, "answer": answer},
                sort_keys=True,
            )
        )
    verdict = transcript.to_json_obj()
    del verdict["queries"]
    verdict["function"] = ref
    lines.append(json.dumps({"verdict": verdict}, sort_keys=True))
    _emit("\n".join(lines) + "\n", args.out)
    return _EXIT_OK


def _cmd_experiment(args) -> int:
    if args.spec_file is not None:
        if args.name is not None or args.set:
            raise DomainError("--spec replaces the name and any --set overrides")
        try:
            obj = json.loads(Path(args.spec_file).read_text())
        except json.JSONDecodeError as e:
            raise FormatError(f"invalid JSON: {e.msg}", line=e.lineno) from None
        spec = ExperimentSpec.from_json_obj(obj)
    elif args.name is not None:
        overrides = {}
        for item in args.set:
            key, eq, raw = item.partition("=")
            if not eq or not key or not raw:
                raise DomainError(f"bad override {item!r}; expected key=value")
            if key in overrides:
                raise DomainError(f"duplicate override {key!r}")
            try:
                overrides[key] = (
                    [int(v) for v in raw.split("-")] if "-" in raw.lstrip("-")
                    else int(raw)
                )
            except ValueError:
                raise DomainError(
                    f"override {key!r} must be an int or dash-joined ints; "
                    "use --spec for anything richer"
                ) from None
        spec = ExperimentSpec.of(args.name, overrides)
    else:
        raise DomainError(
            f"give an experiment name or --spec FILE; known: "
            f"{', '.join(experiment_names())}"
        )
    report = run_experiment(spec, jobs=args.jobs)
    out = args.out if args.out is not None else spec.out
    text = _experiment_csv(report) if args.csv else _json_text(report)
    _emit(text, out)
    if report["failures"] > 0:
        bad = next((c for c in report["cases"] if c["pass"] is False), None)
        counterexample = bad if bad is not None else {"aggregate": report["aggregate"]}
        _error(
            "assertion",
            f"experiment {spec.name!r}: {report['failures']} failing",
            counterexample=counterexample,
        )
        return _EXIT_ASSERTION
    return _EXIT_OK


def _cmd_verify(args) -> int:
    f, ref = _load_function(args)
    try:
        obj = json.loads(Path(args.report).read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    if not isinstance(obj, dict):
        raise FormatError("report file must hold a JSON object")
    entries = obj.get("measures", obj)
    if not isinstance(entries, dict) or not entries:
        raise FormatError("report holds no measure entries")
    for name in sorted(entries):
        verify_entry(f, name, entries[name])
    _emit(_json_text({"function": ref, "verified": sorted(entries)}), args.out)
    return _EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="slicebench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "construct",
        help="build a catalog function and print it as a function file",
    )
    p.add_argument(
        "spec",
        help=f"construction, e.g. eq:k=2; known: {', '.join(sorted(REGISTRY))}",
    )
    p.add_argument("--out", help="write to this path instead of stdout")
    p.set_defaults(handler=_cmd_construct)

    p = sub.add_parser("measure", help="compute measures of one function")
    p.add_argument("--function", help="function file to load")
    p.add_argument("--construct", help="construction spec instead of a file")
    p.add_argument(
        "--measures",
        default="D",
        help=f"comma-separated list from: {', '.join(sorted(MEASURES))}",
    )
    p.add_argument("--no-cache", action="store_true", help="skip the result cache")
    p.add_argument("--csv", action="store_true", help="flatten the report to CSV")
    p.add_argument("--out", help="write to this path instead of stdout")
    p.set_defaults(handler=_cmd_measure)

    p = sub.add_parser(
        "match", help="referee one algorithm-versus-adversary match"
    )
    p.add_argument("--function", help="function file to load")
    p.add_argument("--construct", help="construction spec instead of a file")
    p.add_argument(
        "--algorithm", required=True, help=f"one of: {_ALGORITHMS}"
    )
    p.add_argument(
        "--adversary", required=True, help=f"one of: {_ADVERSARIES}"
    )
    p.add_argument("--budget", type=int, help="cap on the number of queries")
    p.add_argument("--seed", type=int, help="seed for randomized adversaries")
    p.add_argument("--out", help="write to this path instead of stdout")
    p.set_defaults(handler=_cmd_match)

    p = sub.add_parser("experiment", help="run one registered batch experiment")
    p.add_argument(
        "name",
        nargs="?",
        help=f"registered name; known: {', '.join(experiment_names())}",
    )
    p.add_argument("--spec", dest="spec_file", help="JSON spec file to rerun")
    p.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one parameter (int or dash-joined ints)",
    )
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--csv", action="store_true", help="flatten cases to CSV")
    p.add_argument("--out", help="write to this path instead of stdout")
    p.set_defaults(handler=_cmd_experiment)

    p = sub.add_parser(
        "verify", help="re-check a stored measure report against a function"
    )
    p.add_argument("--function", help="function file to load")
    p.add_argument("--construct", help="construction spec instead of a file")
    p.add_argument("--report", required=True, help="measure report JSON file")
    p.add_argument("--out", help="write to this path instead of stdout")
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except FormatError as e:
        _error("format", str(e), line=e.line)
        return _EXIT_INPUT
    except ResourceCapError as e:
        _error("resource-cap", str(e))
        return _EXIT_CAP
    except VerificationError as e:
        _error("verification", str(e))
        return _EXIT_ASSERTION
    except (
        AdversaryInvalidError,
        DomainError,
        MatchProtocolError,
        MembershipError,
    ) as e:
        _error("input", str(e))
        return _EXIT_INPUT
    except FileNotFoundError as e:
        _error("input", f"no such file: {e.filename}")
        return _EXIT_INPUT
    except IsADirectoryError as e:
        _error("input", f"path is a directory: {e.filename}")
        return _EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
