"""Command-line front end.

Subcommands: validate, invariants, classify, scan, paper-example.  Every
run prints a human-readable report (suppress with --quiet) and can write
the same content as versioned JSON (--json PATH).

Exit codes: 0 success or Equivalent, 3 NotEquivalent, 4 Inconclusive,
1 invalid input, 2 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .classify import EQUIVALENT, INCONCLUSIVE, NOT_EQUIVALENT, classify_nonorientable
from .groups import InconsistencyError
from .harness import FIXTURE_IDS, paper_example, scan_cell
from .instance import InstanceError, InstanceFile, parse_instance
from .monodromy import validate
from .report import (
    classify_document,
    fixture_document,
    invariants_document,
    render_classify_text,
    render_fixture_text,
    render_invariants_text,
    render_scan_text,
    render_validate_text,
    scan_document,
    validate_document,
    write_scan_report,
)
from .schreier import VerificationFailed, invariant_tuple
from .signature import NecConstructionError


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage by default; 2 is reserved for
    # internal inconsistencies here, so usage errors exit 1 instead
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH")
    common.add_argument("--quiet", action="store_true", help="suppress the text report")
    common.add_argument(
        "--transversal",
        choices=("bfs", "glide-shift"),
        default="bfs",
        help="coset representative strategy (the invariants agree for both)",
    )

    parser = _Parser(prog="necroots", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check an instance file's monodromy")
    p.add_argument("instance", help="instance file path")

    p = sub.add_parser("invariants", parents=[common], help="invariant tuples of the declared roots")
    p.add_argument("instance", help="instance file path")

    p = sub.add_parser("classify", parents=[common], help="decide equivalence of the declared roots")
    p.add_argument("instance", help="instance file path")

    p = sub.add_parser("scan", parents=[common], help="classify every pair of every monodromy of a cell")
    p.add_argument("instance", nargs="?", help="instance file naming the signature and group")
    p.add_argument("--bundled", action="store_true", help="scan the bundled signature/group matrix")
    p.add_argument("--report-dir", metavar="DIR", help="write scan_rows.csv and figures to DIR")

    p = sub.add_parser("paper-example", parents=[common], help="recompute a worked fixture")
    p.add_argument("fixture", help=f"one of {', '.join(FIXTURE_IDS)}")

    return parser


def _load(path: str) -> InstanceFile:
    return parse_instance(Path(path).read_text())


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        Path(args.json).write_text(json.dumps(doc, indent=2) + "\n")
    if not args.quiet:
        print(text)


def _require_valid(mono) -> None:
    report = validate(mono)
    if not report.valid:
        raise ValueError("invalid monodromy: " + "; ".join(report.failures))


def _root_tuples(instance: InstanceFile, mono, strategy: str):
    if instance.pair is None:
        raise ValueError("this command needs a pair block (pair g1 = ..., pair g2 = ...)")
    tuples = []
    for label, g in zip(("g1", "g2"), instance.pair):
        tuples.append(invariant_tuple(mono, g, marking=instance.marking_for(label), strategy=strategy))
    return tuples


def _cmd_validate(args) -> int:
    instance = _load(args.instance)
    mono = instance.monodromy()
    report = validate(mono)
    doc = validate_document(args.instance, mono, report)
    _emit(args, doc, render_validate_text(doc))
    return 0 if report.valid else 1


def _cmd_invariants(args) -> int:
    instance = _load(args.instance)
    mono = instance.monodromy()
    _require_valid(mono)
    t1, t2 = _root_tuples(instance, mono, args.transversal)
    doc = invariants_document(args.instance, mono, {"g1": t1, "g2": t2})
    _emit(args, doc, render_invariants_text(doc))
    return 0


def _cmd_classify(args) -> int:
    instance = _load(args.instance)
    mono = instance.monodromy()
    _require_valid(mono)
    t1, t2 = _root_tuples(instance, mono, args.transversal)
    verdict = classify_nonorientable(t1, t2)
    doc = classify_document(args.instance, mono, t1, t2, verdict)
    _emit(args, doc, render_classify_text(doc))
    return {EQUIVALENT: 0, NOT_EQUIVALENT: 3, INCONCLUSIVE: 4}[verdict.outcome]


def _cmd_scan(args) -> int:
    if args.bundled == (args.instance is not None):
        raise ValueError("scan needs an instance file or --bundled, not both")
    if args.bundled:
        from .harness import run_bundled_scan

        cells = list(run_bundled_scan(strategy=args.transversal).cells)
    else:
        instance = _load(args.instance)
        mono = instance.monodromy()
        _require_valid(mono)
        cells = [scan_cell(instance.signature, mono.group, strategy=args.transversal)]
    doc = scan_document(cells)
    text = render_scan_text(doc)
    if args.report_dir:
        paths = write_scan_report(cells, args.report_dir)
        text += "\nwritten: " + ", ".join(str(p) for p in paths)
    _emit(args, doc, text)
    return 0 if doc["disagreements"] == 0 and doc["homology_ok"] else 2


def _cmd_paper_example(args) -> int:
    report = paper_example(args.fixture, strategy=args.transversal)
    doc = fixture_document(report)
    _emit(args, doc, render_fixture_text(doc))
    return 0 if report.passed else 2


_COMMANDS = {
    "validate": _cmd_validate,
    "invariants": _cmd_invariants,
    "classify": _cmd_classify,
    "scan": _cmd_scan,
    "paper-example": _cmd_paper_example,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InconsistencyError as err:
        print(f"internal inconsistency: {err}", file=sys.stderr)
        return 2
    except VerificationFailed as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (InstanceError, NecConstructionError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
