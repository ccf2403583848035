"""Report rendering: versioned JSON documents, plain text, scan exports.

Every CLI run produces one JSON document (stable schema, versioned at
the top level) and one human-readable text block.  Scan runs can also
export their rows as CSV together with two overview figures.
"""

from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path
from typing import Iterable, Optional

from .classify import EQUIVALENT, INCONCLUSIVE, NOT_EQUIVALENT, InvariantTuple, Verdict
from .harness import CellResult, FixtureReport, ScanRow
from .monodromy import Monodromy, ValidityReport, kernel_genus

SCHEMA_VERSION = "1"

CONDITION_NAMES = {
    1: "subgroup signatures disagree",
    2: "residue multisets disagree (cone classes with glide sum)",
    3: "marked glide residue classes disagree mod z",
}


def _base(command: str, instance: Optional[str]) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "command": command}
    if instance is not None:
        doc["instance"] = instance
    return doc


def tuple_document(t: InvariantTuple) -> dict:
    classes = t.d_first_classes()
    return {
        "two_m": t.two_m,
        "subgroup_signature": str(t.sub_signature),
        "x_classes": [[p, r] for p, r in t.x_classes],
        "d_sum": t.d_sum,
        "z": t.z,
        "d_first": t.d_first,
        "d_first_classes": sorted(classes) if classes is not None else None,
    }


def validate_document(instance: str, mono: Monodromy, report: ValidityReport) -> dict:
    doc = _base("validate", instance)
    doc["signature"] = str(mono.presentation.signature)
    doc["group"] = mono.group.name
    doc["valid"] = report.valid
    doc["failures"] = list(report.failures)
    doc["kernel_genus"] = kernel_genus(mono) if report.valid else None
    return doc


def invariants_document(instance: str, mono: Monodromy, tuples: dict[str, InvariantTuple]) -> dict:
    doc = _base("invariants", instance)
    doc["signature"] = str(mono.presentation.signature)
    doc["group"] = mono.group.name
    doc["roots"] = {label: tuple_document(t) for label, t in tuples.items()}
    return doc


def classify_document(
    instance: str,
    mono: Monodromy,
    t1: InvariantTuple,
    t2: InvariantTuple,
    verdict: Verdict,
) -> dict:
    doc = _base("classify", instance)
    doc["signature"] = str(mono.presentation.signature)
    doc["group"] = mono.group.name
    doc["g1"] = tuple_document(t1)
    doc["g2"] = tuple_document(t2)
    doc["verdict"] = verdict.outcome
    doc["failed_condition"] = verdict.failed_condition
    doc["reason"] = verdict.reason
    doc["moves"] = [list(move) for move in verdict.moves]
    return doc


def fixture_document(report: FixtureReport) -> dict:
    doc = _base("paper-example", None)
    doc["fixture"] = report.fixture
    doc["passed"] = report.passed
    doc["verdict"] = report.verdict.outcome
    doc["failed_condition"] = report.verdict.failed_condition
    doc["checks"] = [
        {"name": c.name, "expected": _jsonable(c.expected), "got": _jsonable(c.got), "ok": c.ok}
        for c in report.checks
    ]
    return doc


def scan_document(cells: Iterable[CellResult]) -> dict:
    cells = list(cells)
    rows = [row for cell in cells for row in cell.rows]
    doc = _base("scan", None)
    doc["cells"] = [
        {
            "signature": str(cell.signature),
            "group": cell.group_name,
            "monodromies": cell.monodromies,
            "rows": len(cell.rows),
        }
        for cell in cells
    ]
    doc["total_monodromies"] = sum(cell.monodromies for cell in cells)
    doc["total_rows"] = len(rows)
    doc["verdict_counts"] = dict(Counter(row.verdict for row in rows))
    doc["prediction_counts"] = dict(Counter(row.prediction for row in rows))
    doc["disagreements"] = sum(1 for row in rows if not row.agreement)
    doc["homology_ok"] = all(row.homology_ok for row in rows)
    return doc


def _jsonable(value):
    if isinstance(value, frozenset):
        return sorted(value)
    if hasattr(value, "sign") and hasattr(value, "periods"):
        return str(value)
    return value


# ---------------------------------------------------------------------------
# plain text


def _classes_text(doc: dict) -> str:
    classes = doc["d_first_classes"]
    if classes is None:
        return "no sound marking"
    return "{" + ", ".join(str(c) for c in classes) + "} mod " + str(doc["z"])


def render_validate_text(doc: dict) -> str:
    lines = [f"instance {doc['instance']}: {doc['signature']} onto {doc['group']}"]
    if doc["valid"]:
        lines.append(f"valid surface-kernel monodromy, covering surface genus {doc['kernel_genus']}")
    else:
        lines.append("INVALID:")
        lines.extend(f"  - {failure}" for failure in doc["failures"])
    return "\n".join(lines)


def render_invariants_text(doc: dict) -> str:
    lines = [f"instance {doc['instance']}: {doc['signature']} onto {doc['group']}"]
    for label, t in doc["roots"].items():
        lines.append(
            f"{label}: subgroup {t['subgroup_signature']}, classes "
            + " ".join(f"({p},{r})" for p, r in t["x_classes"])
            + f", glide sum {t['d_sum']} mod {t['two_m']}, first glide {_classes_text(t)}"
        )
    return "\n".join(lines)


def render_classify_text(doc: dict) -> str:
    lines = [f"instance {doc['instance']}: {doc['signature']} onto {doc['group']}"]
    for label in ("g1", "g2"):
        t = doc[label]
        lines.append(
            f"{label}: subgroup {t['subgroup_signature']}, classes "
            + " ".join(f"({p},{r})" for p, r in t["x_classes"])
            + f", glide sum {t['d_sum']}, first glide {_classes_text(t)}"
        )
    if doc["verdict"] == NOT_EQUIVALENT:
        condition = doc["failed_condition"]
        lines.append(f"verdict: NotEquivalent, condition {condition} ({CONDITION_NAMES[condition]})")
    elif doc["verdict"] == INCONCLUSIVE:
        lines.append(f"verdict: Inconclusive ({doc['reason']})")
    else:
        moves = doc["moves"]
        how = "identical tuples" if not moves else f"aligned by {len(moves)} move(s)"
        lines.append(f"verdict: Equivalent ({how})")
    return "\n".join(lines)


def render_fixture_text(doc: dict) -> str:
    lines = [f"fixture {doc['fixture']}: " + ("all checks pass" if doc["passed"] else "MISMATCH")]
    for check in doc["checks"]:
        mark = "ok " if check["ok"] else "FAIL"
        lines.append(f"  [{mark}] {check['name']}: expected {check['expected']}, got {check['got']}")
    return "\n".join(lines)


def render_scan_text(doc: dict) -> str:
    lines = ["scan summary"]
    for cell in doc["cells"]:
        lines.append(
            f"  {cell['signature']} onto {cell['group']}: "
            f"{cell['monodromies']} monodromies, {cell['rows']} pairs"
        )
    lines.append(
        f"total: {doc['total_monodromies']} monodromies, {doc['total_rows']} pairs, "
        f"{doc['disagreements']} disagreement(s)"
    )
    lines.append(f"verdicts: {doc['verdict_counts']}")
    lines.append(f"predictions: {doc['prediction_counts']}")
    lines.append(f"homology oracle: {'all pass' if doc['homology_ok'] else 'FAILURES PRESENT'}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# scan exports

CSV_COLUMNS = [
    "signature", "group", "images", "g1", "g2", "m", "n", "abelian",
    "quotient_genus", "sub_genus", "prediction", "verdict", "failed_condition",
    "agreement", "witness_alpha", "witness_w", "lemma2_checked", "homology_ok",
]


def _csv_row(row: ScanRow) -> list:
    alpha, w = row.conjugacy_witness if row.conjugacy_witness is not None else (None, None)
    return [
        str(row.signature),
        row.group_name,
        ";".join(f"{name}={value}" for name, value in row.images),
        row.g1, row.g2, row.m, row.n, row.abelian,
        row.quotient_genus, row.sub_genus, row.prediction, row.verdict,
        row.failed_condition, row.agreement, alpha, w,
        row.lemma2_checked, row.homology_ok,
    ]


def write_scan_report(cells: Iterable[CellResult], directory) -> list[Path]:
    """Write scan_rows.csv plus two overview figures; returns the paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    cells = list(cells)
    rows = [row for cell in cells for row in cell.rows]
    written = []

    csv_path = directory / "scan_rows.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(_csv_row(row))
    written.append(csv_path)

    # verdict mix per prediction clause
    predictions = sorted({row.prediction for row in rows})
    verdicts = [EQUIVALENT, NOT_EQUIVALENT, INCONCLUSIVE]
    counts = {
        v: [sum(1 for r in rows if r.prediction == p and r.verdict == v) for p in predictions]
        for v in verdicts
    }
    fig, ax = plt.subplots(figsize=(7, 4))
    bottom = [0] * len(predictions)
    for verdict, color in zip(verdicts, ("#4c72b0", "#c44e52", "#bbbbbb")):
        ax.bar(predictions, counts[verdict], bottom=bottom, label=verdict, color=color)
        bottom = [b + c for b, c in zip(bottom, counts[verdict])]
    ax.set_ylabel("pairs")
    ax.set_title("verdicts by prediction clause")
    ax.legend()
    fig.tight_layout()
    verdict_path = directory / "verdicts_by_prediction.png"
    fig.savefig(verdict_path, dpi=120)
    plt.close(fig)
    written.append(verdict_path)

    # cell sizes
    labels = [f"{cell.signature}\n{cell.group_name}" for cell in cells if cell.rows]
    sizes = [len(cell.rows) for cell in cells if cell.rows]
    fig, ax = plt.subplots(figsize=(max(7, 1.2 * len(labels)), 4))
    ax.bar(range(len(labels)), sizes, color="#55a868")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("pairs")
    ax.set_title("pairs per scanned cell")
    fig.tight_layout()
    cells_path = directory / "cell_sizes.png"
    fig.savefig(cells_path, dpi=120)
    plt.close(fig)
    written.append(cells_path)

    return written
