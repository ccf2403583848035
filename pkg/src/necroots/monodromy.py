"""Monodromy epimorphisms onto finite groups and square-root pairs.

A monodromy assigns group elements to the canonical generators of a
signature's presentation.  When it is valid (relations die, the images
generate, elliptic orders are exact, and an orientation character
exists) its kernel is the fundamental group of a closed orientable
surface on which the finite group acts; everything downstream reads the
action through that assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .groups import (
    FiniteGroup,
    InconsistencyError,
    element_order,
    generated_subgroup,
    solve_character,
)
from .signature import Presentation, Word, expand_letters


@dataclass(frozen=True)
class Monodromy:
    """Generator assignment presentation -> group, keyed by name."""

    presentation: Presentation
    group: FiniteGroup
    images: dict[str, int]

    def __post_init__(self) -> None:
        declared = set(self.presentation.generator_names)
        given = set(self.images)
        if declared != given:
            missing = declared - given
            extra = given - declared
            raise ValueError(f"image map mismatch: missing {sorted(missing)}, undeclared {sorted(extra)}")

    def image(self, name: str) -> int:
        return self.images[name]

    def image_ids(self) -> list[int]:
        return [self.images[name] for name in self.presentation.generator_names]

    def character(self) -> Optional[dict[int, int]]:
        """Parities on <images> matching the generators' orientation behaviour.

        Computed once per instance; the assignment is frozen so the
        answer cannot change.
        """
        try:
            return self._character
        except AttributeError:
            pass
        result = self._solve_character()
        object.__setattr__(self, "_character", result)
        return result

    def _solve_character(self) -> Optional[dict[int, int]]:
        constraints: dict[int, int] = {}
        for sym in self.presentation.generators:
            parity = 1 if sym.reverses_orientation else 0
            e = self.images[sym.name]
            if constraints.setdefault(e, parity) != parity:
                return None
        return solve_character(self.group, constraints)


def evaluate(mono: Monodromy, word: Word) -> int:
    acc = 0
    group = mono.group
    for name, exp in word:
        if name not in mono.images:
            raise KeyError(f"undeclared generator {name!r}")
        acc = group.mul(acc, group.power(mono.images[name], exp))
    return acc


def omega_value(mono: Monodromy, g: int, word: Word) -> int:
    """Exponent w with evaluate(word) = g^w; NotInSubgroup if outside <g>."""
    from .groups import discrete_log

    return discrete_log(mono.group, g, evaluate(mono, word))


@dataclass(frozen=True)
class ValidityReport:
    failures: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return not self.failures


def validate(mono: Monodromy) -> ValidityReport:
    """Check every structural requirement, reporting all failures."""
    failures: list[str] = []
    sig = mono.presentation.signature
    group = mono.group

    if not sig.is_hyperbolic():
        failures.append(f"non-hyperbolic signature: reduced area {sig.reduced_area()} <= 0")

    for rel in mono.presentation.relations:
        value = evaluate(mono, rel)
        if value != 0:
            failures.append(f"relation does not close: value {group.label(value)}")

    if len(generated_subgroup(group, mono.image_ids())) != group.order:
        failures.append("images do not generate the group")

    for sym in mono.presentation.generators:
        if sym.kind == "elliptic":
            got = element_order(group, mono.images[sym.name])
            if got != sym.period:
                failures.append(
                    f"elliptic generator {sym.name} has order {got}, period demands {sym.period}"
                )

    if mono.character() is None:
        failures.append("no orientation character is compatible with the images")

    return ValidityReport(tuple(failures))


def kernel_genus(mono: Monodromy) -> int:
    """Genus of the covering surface, from exact area bookkeeping."""
    doubled = mono.group.order * mono.presentation.signature.reduced_area() + 2
    if doubled.denominator != 1 or doubled.numerator % 2 != 0:
        raise InconsistencyError(f"kernel genus is not an integer: 2g = {doubled}")
    genus = doubled.numerator // 2
    if genus < 2:
        raise InconsistencyError(f"kernel genus {genus} < 2 on a supposedly valid monodromy")
    return genus


@dataclass(frozen=True)
class SquareRootPair:
    """Two anticonformal elements with the same square of even order."""

    g1: int
    g2: int
    f: int
    m: int
    n: int
    abelian: bool
    subgroup: tuple[int, ...]

    @property
    def two_m(self) -> int:
        return 2 * self.m


def pair_census(mono: Monodromy) -> tuple[list[SquareRootPair], int]:
    """All square-root pairs plus the count of discarded odd-order ones.

    Pairs are unordered, deduplicated by the pair of generated cyclic
    subgroups (the classification concerns those subgroups), and only
    kept when the common square has even order.
    """
    if mono.presentation.signature.sign != "-":
        raise ValueError("square-root pairs require a minus-sign signature")
    chi = mono.character()
    if chi is None:
        raise ValueError("monodromy admits no orientation character")
    group = mono.group
    anticonformal = [e for e in group.elements if chi.get(e) == 1]

    squares = {g: group.mul(g, g) for g in anticonformal}
    cyclic: dict[int, tuple[int, ...]] = {}

    def cyc(g: int) -> tuple[int, ...]:
        if g not in cyclic:
            cyclic[g] = generated_subgroup(group, [g])
        return cyclic[g]

    pairs: list[SquareRootPair] = []
    seen: set[frozenset[tuple[int, ...]]] = set()
    odd_m = 0
    for i, g1 in enumerate(anticonformal):
        f = squares[g1]
        for g2 in anticonformal[i + 1:]:
            if squares[g2] != f:
                continue
            key = frozenset((cyc(g1), cyc(g2)))
            if key in seen:
                continue
            seen.add(key)
            m = element_order(group, f)
            if m % 2 != 0:
                odd_m += 1
                continue
            if element_order(group, g1) != 2 * m or element_order(group, g2) != 2 * m:
                raise InconsistencyError("anticonformal square root without order 2m")
            sub = generated_subgroup(group, [g1, g2])
            if len(sub) % (2 * m) != 0:
                raise InconsistencyError("subgroup order is not a multiple of 2m")
            n = len(sub) // (2 * m)
            # two generators commute iff everything they generate does
            abelian = group.mul(g1, g2) == group.mul(g2, g1)
            pairs.append(SquareRootPair(g1, g2, f, m, n, abelian, sub))
    return pairs, odd_m


def square_root_pairs(mono: Monodromy) -> list[SquareRootPair]:
    return pair_census(mono)[0]


@dataclass(frozen=True)
class DihedralQuotient:
    """The quotient of <g1,g2> by the central subgroup <f>, as a group.

    theta maps each element of <g1,g2> to a quotient element id; a and b
    are the images of the two roots, words render quotient elements over
    the letters a, b.
    """

    group: FiniteGroup
    theta: dict[int, int]
    a: int
    b: int
    n: int
    words: tuple[str, ...]
    lemma2_checked: bool

    def theta_word(self, e: int) -> str:
        return self.words[self.theta[e]]


def dihedral_quotient(mono: Monodromy, pair: SquareRootPair) -> DihedralQuotient:
    """Build theta: <g1,g2> -> D_n and verify the glide exclusion.

    When the pair generates the whole image group, every glide image
    must land outside the rotation subgroup <ab>; a violation means the
    pipeline broke an always-true fact, so it raises rather than
    returning a value.
    """
    if pair.g1 == pair.g2:
        raise ValueError("degenerate pair: the two roots coincide")
    group = mono.group
    sub = pair.subgroup
    centre = generated_subgroup(group, [pair.f])

    cosets: list[tuple[int, ...]] = []
    coset_of: dict[int, int] = {}
    for x in sub:
        if x in coset_of:
            continue
        coset = tuple(sorted(group.mul(h, x) for h in centre))
        index = len(cosets)
        cosets.append(coset)
        for y in coset:
            coset_of[y] = index
    # reindex deterministically by minimal member, identity coset first
    order = sorted(range(len(cosets)), key=lambda i: cosets[i][0])
    relabel = {old: new for new, old in enumerate(order)}
    cosets = [cosets[i] for i in order]
    theta = {x: relabel[c] for x, c in coset_of.items()}

    size = len(cosets)
    if size != 2 * pair.n:
        raise InconsistencyError(f"quotient order {size} != 2n = {2 * pair.n}")

    table = [[theta[group.mul(cosets[i][0], cosets[j][0])] for j in range(size)] for i in range(size)]

    a = theta[pair.g1]
    b = theta[pair.g2]
    words = [""] * size
    rot = theta[group.mul(pair.g1, pair.g2)]
    acc = 0
    for k in range(pair.n):
        word = "1" if k == 0 else ("ab" if k == 1 else f"(ab)^{k}")
        words[acc] = word
        refl = table[acc][a]
        words[refl] = "a" if k == 0 else f"(ab)^{k}*a" if k > 1 else "ab*a"
        acc = table[acc][rot]
    if any(not w for w in words):
        raise InconsistencyError("quotient is not dihedral: ab-walk missed cosets")

    labels = list(words)
    quotient = FiniteGroup(table, labels, {"a": a, "b": b}, f"D{pair.n}")

    rotations = {0}
    acc = rot
    while acc not in rotations:
        rotations.add(acc)
        acc = quotient.mul(acc, rot)

    lemma2_checked = len(sub) == group.order
    if lemma2_checked:
        for sym in mono.presentation.generators:
            if sym.kind == "glide" and theta[mono.images[sym.name]] in rotations:
                raise InconsistencyError(
                    f"glide {sym.name} maps into the rotation subgroup of D{pair.n}"
                )

    return DihedralQuotient(quotient, theta, a, b, pair.n, tuple(words), lemma2_checked)
