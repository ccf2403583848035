"""Equivalence decision procedure for anticonformal square roots.

The topological class of a root g is captured by a small arithmetic
tuple read off the rewritten subgroup presentation: the residues of the
cone classes, the summed glide residue, and (for genus-2 orbit
surfaces) the residue of a canonically marked glide.  Two roots are
equivalent exactly when the tuples can be aligned by the legal moves:
negating one cone class while absorbing its old value into the glide
sum, permuting equal-period classes, and inverting everything at once.
The search over that finite orbit is exhaustive, so verdicts come with
replayable witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator, Optional

from .monodromy import SquareRootPair
from .signature import NecSignature, signatures_equivalent

EQUIVALENT = "Equivalent"
NOT_EQUIVALENT = "NotEquivalent"
INCONCLUSIVE = "Inconclusive"

# Predicted-equivalent clauses: n odd (C); n even with even quotient
# genus and orbit genus other than 2 (A); n even with odd quotient genus
# and abelian root closure (B).
PREDICTION_EVEN_QUOTIENT = "EquivalentByA"
PREDICTION_ABELIAN = "EquivalentByB"
PREDICTION_ODD_N = "EquivalentByC"
PREDICTION_NONE = "NoPrediction"

Move = tuple
MoveSequence = tuple[Move, ...]


@dataclass(frozen=True)
class Verdict:
    outcome: str
    moves: MoveSequence = ()
    failed_condition: Optional[int] = None
    reason: Optional[str] = None


def compute_z(two_m: int, x_residues, d_sum: int, genus_is_even: bool) -> int:
    """Modulus for the genus-2 glide comparison.

    gcd of the cone residues, the glide sum (only on even-genus orbit
    surfaces, where it is homologically pinned) and two_m; zeros drop
    out of the gcd, so the result always divides two_m.
    """
    value = two_m
    for r in x_residues:
        value = gcd(value, r)
    if genus_is_even:
        value = gcd(value, d_sum)
    return value


@dataclass(frozen=True)
class InvariantTuple:
    """Alignment data for one root: residues mod two_m plus the orbit signature.

    x_classes keeps construction order (flips address positions); all
    comparisons use the sorted view.  d_first is the residue of the
    first canonically marked glide and stays None when no sound marking
    is available.
    """

    two_m: int
    sub_signature: NecSignature
    x_classes: tuple[tuple[int, int], ...]
    d_sum: int
    d_first: Optional[int] = None

    def __post_init__(self) -> None:
        if self.two_m < 4 or self.two_m % 4 != 0:
            raise ValueError("two_m must be twice an even root order")
        if self.sub_signature.sign != "-" or self.sub_signature.empty_cycles:
            raise ValueError("orbit signature must be minus-sign without boundary")
        object.__setattr__(self, "x_classes", tuple((p, r % self.two_m) for p, r in self.x_classes))
        object.__setattr__(self, "d_sum", self.d_sum % self.two_m)
        if self.d_first is not None:
            object.__setattr__(self, "d_first", self.d_first % self.two_m)
            if self.d_first % 2 == 0:
                raise ValueError("a marked glide residue must be odd")
        if sorted(p for p, _ in self.x_classes) != sorted(self.sub_signature.periods):
            raise ValueError("cone class periods disagree with the orbit signature")
        for p, r in self.x_classes:
            if r % 2:
                raise ValueError("cone residues must be even")
            if self.two_m // gcd(r, self.two_m) != p:
                raise ValueError(f"residue {r} does not have order {p} mod {self.two_m}")
        if (2 * self.d_sum + sum(r for _, r in self.x_classes)) % self.two_m != 0:
            raise ValueError("lifted long relation fails: 2*d_sum + sum(x) != 0")

    @property
    def z(self) -> int:
        return compute_z(
            self.two_m,
            [r for _, r in self.x_classes],
            self.d_sum,
            self.sub_signature.genus % 2 == 0,
        )

    def sorted_classes(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.x_classes))

    def d_first_classes(self) -> Optional[frozenset[int]]:
        if self.d_first is None:
            return None
        z = self.z
        if z <= 1:
            return frozenset({0})
        return frozenset({self.d_first % z, (-self.d_first) % z})


def flip_x_class(t: InvariantTuple, class_index: int) -> InvariantTuple:
    """Negate one cone residue; its old value moves into the glide sum."""
    period, residue = t.x_classes[class_index]
    classes = list(t.x_classes)
    classes[class_index] = (period, (-residue) % t.two_m)
    return InvariantTuple(
        t.two_m, t.sub_signature, tuple(classes), (t.d_sum + residue) % t.two_m, t.d_first
    )


def global_inversion(t: InvariantTuple) -> InvariantTuple:
    classes = tuple((p, (-r) % t.two_m) for p, r in t.x_classes)
    d_first = None if t.d_first is None else (-t.d_first) % t.two_m
    return InvariantTuple(t.two_m, t.sub_signature, classes, (-t.d_sum) % t.two_m, d_first)


def apply_moves(t: InvariantTuple, moves: MoveSequence) -> InvariantTuple:
    for move in moves:
        if move[0] == "invert":
            t = global_inversion(t)
        elif move[0] == "flip":
            t = flip_x_class(t, move[1])
        else:
            raise ValueError(f"unknown move {move!r}")
    return t


def tuple_orbit(t: InvariantTuple) -> Iterator[tuple[MoveSequence, InvariantTuple]]:
    """All tuples reachable by moves, with the move sequences, in fixed order."""
    count = len(t.x_classes)
    for invert in (False, True):
        base = global_inversion(t) if invert else t
        base_moves: list[Move] = [("invert",)] if invert else []
        for mask in range(1 << count):
            u = base
            moves = list(base_moves)
            for i in range(count):
                if (mask >> i) & 1:
                    u = flip_x_class(u, i)
                    moves.append(("flip", i))
            yield tuple(moves), u


@dataclass(frozen=True)
class Case1Tuple:
    """Direct residue data for roots with orientable quotient."""

    two_m: int
    x_values: tuple[int, ...]
    e_values: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_values", tuple(v % self.two_m for v in self.x_values))
        object.__setattr__(self, "e_values", tuple(v % self.two_m for v in self.e_values))


def classify_orientable(t1: Case1Tuple, t2: Case1Tuple) -> Verdict:
    """Multiset comparison of rotation data, up to one global sign."""
    if t1.two_m != t2.two_m:
        raise ValueError("tuples live modulo different root orders")
    for epsilon in (1, -1):
        x = sorted((epsilon * v) % t1.two_m for v in t2.x_values)
        e = sorted((epsilon * v) % t1.two_m for v in t2.e_values)
        if x == sorted(t1.x_values) and e == sorted(t1.e_values):
            moves: MoveSequence = () if epsilon == 1 else (("invert",),)
            return Verdict(EQUIVALENT, moves=moves, reason=f"epsilon={epsilon:+d}")
    return Verdict(NOT_EQUIVALENT, failed_condition=1)


def classify_nonorientable(t1: InvariantTuple, t2: InvariantTuple) -> Verdict:
    """Search the move orbit of t2 for an alignment with t1.

    Conditions, in order: the cone-class multisets agree; the glide
    sums agree (only checked when no residue has order two, where the
    flips would shift the sum silently); on genus-2 orbit surfaces the
    marked-glide residues agree up to sign mod z.  The verdict carries
    the aligning move sequence or the first condition that cannot be
    met; it is Inconclusive when everything hinges on an absent
    marking.
    """
    if t1.two_m != t2.two_m:
        raise ValueError("tuples live modulo different root orders")
    if not signatures_equivalent(t1.sub_signature, t2.sub_signature):
        return Verdict(NOT_EQUIVALENT, reason="orbit signatures are not equivalent")

    m = t1.two_m // 2
    residues = [r for _, r in t1.x_classes] + [r for _, r in t2.x_classes]
    c2_applicable = all(r != m for r in residues)
    genus2 = t1.sub_signature.genus == 2

    target = t1.sorted_classes()
    deepest = 0
    undetermined = False
    for moves, u in tuple_orbit(t2):
        if u.sorted_classes() != target:
            continue
        deepest = max(deepest, 1)
        if c2_applicable:
            if u.d_sum != t1.d_sum:
                continue
            deepest = max(deepest, 2)
        if genus2:
            if t1.z <= 2 and u.z <= 2:
                pass  # every glide residue is odd, so the classes agree mod z
            elif u.z != t1.z:
                continue
            elif t1.d_first is None or u.d_first is None:
                undetermined = True
                continue
            elif t1.d_first_classes() != u.d_first_classes():
                continue
        return Verdict(EQUIVALENT, moves=moves)

    if undetermined:
        return Verdict(INCONCLUSIVE, reason="no verified glide marking for the genus-2 comparison")
    if deepest == 0:
        return Verdict(NOT_EQUIVALENT, failed_condition=1)
    if deepest == 1 and c2_applicable:
        return Verdict(NOT_EQUIVALENT, failed_condition=2)
    return Verdict(NOT_EQUIVALENT, failed_condition=3)


def theorem_prediction(pair: SquareRootPair, sub_genus: int, quotient_genus: int) -> str:
    """Equivalence forecast from the coarse structure of the pair."""
    if pair.n % 2 == 1:
        return PREDICTION_ODD_N
    if quotient_genus % 2 == 0 and sub_genus != 2:
        return PREDICTION_EVEN_QUOTIENT
    if quotient_genus % 2 == 1 and pair.abelian:
        return PREDICTION_ABELIAN
    return PREDICTION_NONE
