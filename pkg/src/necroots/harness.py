"""Desk-scale exhaustive verification: enumeration, scans, fixtures.

The scan pipeline enumerates every valid monodromy over a signature and
a finite group, walks the square-root pairs of each, and checks the
coarse equivalence forecasts against computed verdicts.  A disagreement
row (forecast says equivalent, verdict says not) would falsify the
classification theorems, so the suite treats a single one as fatal.

Forecast and verdict live at different granularities for odd n: the
conjugacy search certifies that the two cyclic subgroups are conjugate,
while the residue invariants can still separate the chosen generators
(the order-24 fixture is exactly that situation).  Scan rows therefore
carry the subgroup-level verdict when n is odd and the generator-level
one when n is even.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Optional

from .classify import (
    EQUIVALENT,
    NOT_EQUIVALENT,
    PREDICTION_NONE,
    Verdict,
    classify_nonorientable,
    theorem_prediction,
)
from .groups import (
    FiniteGroup,
    InconsistencyError,
    characters,
    cyclic,
    direct_product,
    element_order,
    semidirect_c2,
)
from .homology import presentation_abelianization
from .monodromy import (
    Monodromy,
    SquareRootPair,
    dihedral_quotient,
    kernel_genus,
    pair_census,
    validate,
)
from .schreier import (
    SchreierSystem,
    build_coset_system,
    build_schreier,
    homology_invariants,
    invariant_tuple_from_system,
    subgroup_signature,
)
from .signature import KIND_ELLIPTIC, NecSignature, canonical_presentation, expand_letters


# ---------------------------------------------------------------------------
# enumeration


def enumerate_epimorphisms(sig: NecSignature, group: FiniteGroup) -> list[Monodromy]:
    """All valid monodromies from the signature's NEC group onto <group>.

    Candidate pools are cut per orientation character before the
    product is expanded (reversing generators from the odd part, the
    rest from the even part, elliptic images prefiltered by exact
    order).  When the signature carries periods the long relation is
    solved for the last elliptic image instead of enumerating it.
    Deterministic: results sorted by their image tuples.
    """
    if sig.empty_cycles:
        raise ValueError("enumeration covers reflection-free signatures only")
    if not sig.is_hyperbolic():
        warnings.warn(f"signature {sig} is not hyperbolic; nothing to enumerate")
        return []

    pres = canonical_presentation(sig)
    syms = pres.generators
    names = [sym.name for sym in syms]
    position = {name: i for i, name in enumerate(names)}
    letters = [(position[name], exp) for name, exp in expand_letters(pres.long_relation)]

    solve_last = bool(sig.periods)
    if solve_last:
        # the long relation ends with the plain last elliptic letter
        assert letters[-1] == (len(syms) - 1, 1)
        letters = letters[:-1]
        last = syms[-1]
        head = syms[:-1]
    else:
        last = None
        head = syms

    table = group.mul_table
    inv = group.inv_table
    orders = [element_order(group, e) for e in group.elements]

    found: list[Monodromy] = []
    for chi in characters(group):
        pools = []
        for sym in head:
            if sym.reverses_orientation:
                pool = [e for e in group.elements if chi[e] == 1]
            elif sym.kind == KIND_ELLIPTIC:
                pool = [
                    e for e in group.elements if chi[e] == 0 and orders[e] == sym.period
                ]
            else:
                pool = [e for e in group.elements if chi[e] == 0]
            pools.append(pool)
        if any(not pool for pool in pools):
            continue
        for combo in itertools.product(*pools):
            value = 0
            for pos, exp in letters:
                e = combo[pos]
                value = table[value][e if exp == 1 else inv[e]]
            if solve_last:
                image = inv[value]
                if orders[image] != last.period or chi[image] != 0:
                    continue
                images = dict(zip(names, combo + (image,)))
            else:
                if value != 0:
                    continue
                images = dict(zip(names, combo))
            mono = Monodromy(pres, group, images)
            if validate(mono).valid:
                found.append(mono)
    found.sort(key=lambda m: tuple(m.image_ids()))
    return found


# ---------------------------------------------------------------------------
# odd-n conjugacy witness


def proposition_conjugacy_check(group: FiniteGroup, pair: SquareRootPair) -> tuple[int, int]:
    """Lexicographically first (alpha, w) conjugating g2 onto g1.

    Certifies g1 = (g1 g2)^alpha g2^(2w+1) (g1 g2)^-alpha, which makes
    the two cyclic subgroups conjugate inside the acting group.  Failure
    on an odd-n pair contradicts the conjugacy argument, so it raises.
    """
    if pair.n % 2 == 0:
        raise ValueError("the conjugacy argument needs n odd")
    prod = group.mul(pair.g1, pair.g2)
    for alpha in range(element_order(group, prod)):
        conj = group.power(prod, alpha)
        conj_inv = group.inv(conj)
        for w in range(pair.m):
            value = group.mul(
                group.mul(conj, group.power(pair.g2, 2 * w + 1)), conj_inv
            )
            if value == pair.g1:
                return alpha, w
    raise InconsistencyError("odd-n pair admits no conjugating power")


# ---------------------------------------------------------------------------
# homology cross-check


_direct_invariants: dict[NecSignature, tuple[int, tuple[int, ...]]] = {}


def _direct_abelianization(sig: NecSignature) -> tuple[int, tuple[int, ...]]:
    cached = _direct_invariants.get(sig)
    if cached is None:
        cached = presentation_abelianization(canonical_presentation(sig))
        _direct_invariants[sig] = cached
    return cached


def _homology_matches(system: SchreierSystem) -> bool:
    direct = _direct_abelianization(subgroup_signature(system))
    return homology_invariants(system) == direct


def homology_oracle(mono: Monodromy, g: int, strategy: str = "bfs") -> bool:
    """Rewritten-presentation invariants against the derived signature's."""
    return _homology_matches(build_schreier(mono, g, strategy=strategy))


class _RootData:
    """Per-root coset data shared by every pair touching the root."""

    def __init__(self, mono: Monodromy, g: int, strategy: str) -> None:
        self.system = build_schreier(mono, g, strategy=strategy)
        self.sub_genus = subgroup_signature(self.system).genus
        self.homology_ok = _homology_matches(self.system)
        self._tuple = None

    def invariants(self):
        # marking extraction only pays off when a classifier run needs it
        if self._tuple is None:
            self._tuple = invariant_tuple_from_system(self.system)
        return self._tuple


# ---------------------------------------------------------------------------
# scan


@dataclass(frozen=True)
class ScanRow:
    """One square-root pair of one monodromy, fully classified."""

    signature: NecSignature
    group_name: str
    images: tuple[tuple[str, int], ...]
    g1: int
    g2: int
    m: int
    n: int
    abelian: bool
    quotient_genus: int
    sub_genus: int
    prediction: str
    verdict: str
    failed_condition: Optional[int]
    agreement: bool
    conjugacy_witness: Optional[tuple[int, int]]
    lemma2_checked: bool
    homology_ok: bool


def _scan_pair(
    mono: Monodromy,
    pair: SquareRootPair,
    strategy: str,
    quotient_cache: dict,
    root_cache: dict,
) -> ScanRow:
    group = mono.group
    # raises if a glide image lands in the rotation subgroup
    quotient = dihedral_quotient(mono, pair)

    if pair.subgroup not in quotient_cache:
        quotient_cache[pair.subgroup] = subgroup_signature(
            build_coset_system(mono, pair.subgroup)
        ).genus
    q_genus = quotient_cache[pair.subgroup]

    roots = []
    for g in (pair.g1, pair.g2):
        if g not in root_cache:
            root_cache[g] = _RootData(mono, g, strategy)
        roots.append(root_cache[g])
    homology_ok = roots[0].homology_ok and roots[1].homology_ok
    sub_genus = roots[0].sub_genus

    prediction = theorem_prediction(pair, sub_genus, q_genus)
    witness = None
    if pair.n % 2 == 1:
        witness = proposition_conjugacy_check(group, pair)
        outcome, failed = EQUIVALENT, None
    else:
        verdict = classify_nonorientable(roots[0].invariants(), roots[1].invariants())
        outcome, failed = verdict.outcome, verdict.failed_condition

    agreement = not (prediction != PREDICTION_NONE and outcome == NOT_EQUIVALENT)
    return ScanRow(
        signature=mono.presentation.signature,
        group_name=group.name,
        images=tuple((name, mono.images[name]) for name in mono.presentation.generator_names),
        g1=pair.g1,
        g2=pair.g2,
        m=pair.m,
        n=pair.n,
        abelian=pair.abelian,
        quotient_genus=q_genus,
        sub_genus=sub_genus,
        prediction=prediction,
        verdict=outcome,
        failed_condition=failed,
        agreement=agreement,
        conjugacy_witness=witness,
        lemma2_checked=quotient.lemma2_checked,
        homology_ok=homology_ok,
    )


def scan(sig: NecSignature, group: FiniteGroup, strategy: str = "bfs") -> list[ScanRow]:
    """Classify every square-root pair of every valid monodromy."""
    rows: list[ScanRow] = []
    for mono in enumerate_epimorphisms(sig, group):
        pairs, _ = pair_census(mono)
        quotient_cache: dict = {}
        root_cache: dict = {}
        for pair in pairs:
            rows.append(_scan_pair(mono, pair, strategy, quotient_cache, root_cache))
    rows.sort(key=lambda r: (r.images, r.g1, r.g2))
    return rows


# ---------------------------------------------------------------------------
# bundled matrix


BUNDLED_SIGNATURES: tuple[NecSignature, ...] = (
    NecSignature(2, "-", (2,)),
    NecSignature(2, "-", (3, 3)),
    NecSignature(3, "-", ()),
    NecSignature(3, "-", (4, 2, 2)),
    NecSignature(2, "-", (2, 2)),
)


def bundled_groups() -> list[FiniteGroup]:
    return [
        direct_product(cyclic(16), cyclic(2, "t")),
        direct_product(cyclic(8), cyclic(3, "t")),
        direct_product(cyclic(4), cyclic(2, "t")),
        semidirect_c2(8, 5),
        semidirect_c2(12, 7),
        direct_product(cyclic(8), cyclic(2, "t")),
    ]


@dataclass(frozen=True)
class CellResult:
    signature: NecSignature
    group_name: str
    monodromies: int
    rows: tuple[ScanRow, ...]


@dataclass(frozen=True)
class ScanSummary:
    cells: tuple[CellResult, ...]

    @property
    def populated_cells(self) -> int:
        return sum(1 for cell in self.cells if cell.monodromies)

    @property
    def total_monodromies(self) -> int:
        return sum(cell.monodromies for cell in self.cells)

    @property
    def rows(self) -> list[ScanRow]:
        return [row for cell in self.cells for row in cell.rows]

    @property
    def disagreements(self) -> list[ScanRow]:
        return [row for row in self.rows if not row.agreement]


def scan_cell(sig: NecSignature, group: FiniteGroup, strategy: str = "bfs") -> CellResult:
    monos = enumerate_epimorphisms(sig, group)
    rows: list[ScanRow] = []
    for mono in monos:
        pairs, _ = pair_census(mono)
        quotient_cache: dict = {}
        root_cache: dict = {}
        for pair in pairs:
            rows.append(_scan_pair(mono, pair, strategy, quotient_cache, root_cache))
    rows.sort(key=lambda r: (r.images, r.g1, r.g2))
    return CellResult(sig, group.name, len(monos), tuple(rows))


def run_bundled_scan(strategy: str = "bfs") -> ScanSummary:
    cells = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for sig in BUNDLED_SIGNATURES:
            for group in bundled_groups():
                cells.append(scan_cell(sig, group, strategy=strategy))
    return ScanSummary(tuple(cells))


# ---------------------------------------------------------------------------
# worked fixtures


FIXTURE_IDS = ("c8c3", "ex1", "ex2-m4")


def fixture_monodromy(fixture_id: str) -> tuple[Monodromy, int, int]:
    """The three worked instances: monodromy plus its two roots."""
    if fixture_id == "c8c3":
        group = direct_product(cyclic(8), cyclic(3, "t"))
        u, t = group.gen_names["u"], group.gen_names["t"]
        pres = canonical_presentation(NecSignature(2, "-", (3, 3)))
        mono = Monodromy(pres, group, {
            "d1": u,
            "d2": group.power(u, 7),
            "x1": t,
            "x2": group.power(t, 2),
        })
        return mono, group.mul(u, t), group.mul(group.power(u, 5), t)
    if fixture_id == "ex1":
        group = direct_product(cyclic(16), cyclic(2, "t"))
        u, t = group.gen_names["u"], group.gen_names["t"]
        pres = canonical_presentation(NecSignature(2, "-", (2,)))
        mono = Monodromy(pres, group, {
            "d1": u,
            "d2": group.mul(group.power(u, 3), t),
            "x1": group.power(u, 8),
        })
        return mono, u, group.mul(u, t)
    if fixture_id == "ex2-m4":
        group = semidirect_c2(8, 5)
        u, c = group.gen_names["u"], group.gen_names["c"]
        pres = canonical_presentation(NecSignature(3, "-", (4, 2, 2)))
        mono = Monodromy(pres, group, {
            "d": u,
            "a1": 0,
            "b1": 0,
            "x1": group.power(u, 6),
            "x2": c,
            "x3": c,
        })
        return mono, group.power(u, 3), group.mul(c, u)
    raise ValueError(f"unknown fixture {fixture_id!r}; pick one of {FIXTURE_IDS}")


@dataclass(frozen=True)
class FixtureCheck:
    name: str
    expected: object
    got: object

    @property
    def ok(self) -> bool:
        return self.expected == self.got


@dataclass(frozen=True)
class FixtureReport:
    fixture: str
    checks: tuple[FixtureCheck, ...]
    verdict: Verdict

    @property
    def passed(self) -> bool:
        return all(check.ok for check in self.checks)


def paper_example(fixture_id: str, strategy: str = "bfs") -> FixtureReport:
    """Recompute a worked instance and compare against its frozen values."""
    mono, g1, g2 = fixture_monodromy(fixture_id)
    system1 = build_schreier(mono, g1, strategy=strategy)
    system2 = build_schreier(mono, g2, strategy=strategy)
    t1 = invariant_tuple_from_system(system1)
    t2 = invariant_tuple_from_system(system2)
    verdict = classify_nonorientable(t1, t2)

    pinned = {
        "c8c3": (
            FixtureCheck("glide residue g1", 9, t1.d_first),
            FixtureCheck("glide residue g2", 21, t2.d_first),
            FixtureCheck("residue modulus z", 8, t1.z),
            FixtureCheck("g1 residue class mod z", frozenset({1, 7}), t1.d_first_classes()),
            FixtureCheck("g2 residue class mod z", frozenset({3, 5}), t2.d_first_classes()),
            FixtureCheck("kernel genus", 17, kernel_genus(mono)),
            FixtureCheck("verdict", NOT_EQUIVALENT, verdict.outcome),
            FixtureCheck("failed condition", 3, verdict.failed_condition),
        ),
        "ex1": (
            FixtureCheck("subgroup signature g1", NecSignature(2, "-", (2, 2)), t1.sub_signature),
            FixtureCheck("subgroup signature g2", NecSignature(2, "-", (2, 2)), t2.sub_signature),
            FixtureCheck("residue modulus z", 8, t1.z),
            FixtureCheck("g1 residue class mod z", frozenset({1, 7}), t1.d_first_classes()),
            FixtureCheck("g2 residue class mod z", frozenset({3, 5}), t2.d_first_classes()),
            FixtureCheck("kernel genus", 9, kernel_genus(mono)),
            FixtureCheck("verdict", NOT_EQUIVALENT, verdict.outcome),
            FixtureCheck("failed condition", 3, verdict.failed_condition),
        ),
        "ex2-m4": (
            FixtureCheck("subgroup signature g1", NecSignature(6, "-", (4, 4)), t1.sub_signature),
            FixtureCheck("subgroup signature g2", NecSignature(6, "-", (4, 4)), t2.sub_signature),
            FixtureCheck("glide residue sum g1", 2, t1.d_sum),
            FixtureCheck("glide residue sum g2", 6, t2.d_sum),
            FixtureCheck("kernel genus", 23, kernel_genus(mono)),
            FixtureCheck("verdict", NOT_EQUIVALENT, verdict.outcome),
            FixtureCheck("failed condition", 2, verdict.failed_condition),
        ),
    }[fixture_id]
    return FixtureReport(fixture_id, pinned, verdict)
