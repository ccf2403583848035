"""Combinatorial signatures and canonical presentations.

A signature ``(g; sign; [m1, ..., mr]; {(-), ..., (-)})`` records the
genus, orientability, cone orders and empty boundary cycles of a compact
two-orbifold.  It determines a canonical finite presentation of the
corresponding crystallographic group, which is the object every other
module manipulates: monodromies assign group elements to its generators,
the rewriting machinery produces subgroup presentations from it, and the
homology oracle abelianizes it.

Only empty period-cycles ``(-)`` are representable; signatures with
corner reflections never occur in the algorithms implemented here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional


class NecConstructionError(ValueError):
    """Structurally invalid signature or presentation data."""


# Generator kinds.  Glides and reflections are the orientation-reversing
# kinds; everything else preserves orientation.
KIND_GLIDE = "glide"
KIND_HANDLE_A = "handle_a"
KIND_HANDLE_B = "handle_b"
KIND_ELLIPTIC = "elliptic"
KIND_CONNECTOR = "connector"
KIND_REFLECTION = "reflection"

REVERSING_KINDS = frozenset({KIND_GLIDE, KIND_REFLECTION})

# A word is a tuple of (generator name, nonzero exponent) letters.
Letter = tuple[str, int]
Word = tuple[Letter, ...]


def expand_letters(word: Word) -> list[Letter]:
    """Flatten a word into single-step letters with exponents +1 or -1."""
    out: list[Letter] = []
    for name, exp in word:
        if exp == 0:
            continue
        step = 1 if exp > 0 else -1
        out.extend((name, step) for _ in range(abs(exp)))
    return out


def invert_word(word: Word) -> Word:
    return tuple((name, -exp) for name, exp in reversed(word))


def word_str(word: Word) -> str:
    if not word:
        return "1"
    parts = []
    for name, exp in word:
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return "*".join(parts)


@dataclass(frozen=True)
class GeneratorSymbol:
    """One named generator of a canonical presentation.

    ``period`` is the order relation attached to the symbol: the cone
    order for elliptic generators, 2 for reflections, ``None`` when the
    symbol satisfies no power relation of its own.
    """

    name: str
    kind: str
    index: int
    period: Optional[int] = None

    @property
    def reverses_orientation(self) -> bool:
        return self.kind in REVERSING_KINDS


@dataclass(frozen=True)
class NecSignature:
    """The symbol (genus; sign; [periods]; {empty cycles})."""

    genus: int
    sign: str
    periods: tuple[int, ...] = ()
    empty_cycles: int = 0

    def __post_init__(self) -> None:
        if self.sign not in ("+", "-"):
            raise NecConstructionError(f"sign must be '+' or '-', got {self.sign!r}")
        if not isinstance(self.genus, int) or self.genus < 0:
            raise NecConstructionError(f"genus must be a nonnegative integer, got {self.genus!r}")
        if self.sign == "-" and self.genus < 1:
            raise NecConstructionError("a minus-sign signature needs genus >= 1")
        for m in self.periods:
            if not isinstance(m, int) or m < 2:
                raise NecConstructionError(f"proper periods must be integers >= 2, got {m!r}")
        if not isinstance(self.empty_cycles, int) or self.empty_cycles < 0:
            raise NecConstructionError("empty_cycles must be a nonnegative integer")
        object.__setattr__(self, "periods", tuple(self.periods))

    @property
    def is_orientable(self) -> bool:
        return self.sign == "+"

    def reduced_area(self) -> Fraction:
        """Orbifold area divided by 2*pi, an exact rational.

        Positive exactly when the group is hyperbolic; the value feeds
        the Riemann-Hurwitz genus bookkeeping, so it must never round.
        """
        eps = 2 if self.sign == "+" else 1
        area = Fraction(eps * self.genus + self.empty_cycles - 2)
        for m in self.periods:
            area += Fraction(m - 1, m)
        return area

    def is_hyperbolic(self) -> bool:
        return self.reduced_area() > 0

    def __str__(self) -> str:
        periods = ",".join(str(m) for m in self.periods)
        body = f"({self.genus}; {self.sign}; [{periods}]"
        if self.empty_cycles:
            cycles = ",".join("(-)" for _ in range(self.empty_cycles))
            body += f"; {{{cycles}}}"
        return body + ")"


_SIGNATURE_RE = re.compile(
    r"""^\(\s*(?P<genus>\d+)\s*;\s*(?P<sign>[+\-−])\s*;\s*
        \[(?P<periods>[^\]]*)\]\s*
        (?:;\s*\{(?P<cycles>[^}]*)\}\s*)?\)$""",
    re.VERBOSE,
)


def parse_signature(text: str) -> NecSignature:
    """Parse "(2; -; [3,3])" or "(1; +; []; {(-)})" style notation."""
    match = _SIGNATURE_RE.match(text.strip())
    if match is None:
        raise NecConstructionError(f"cannot parse signature {text!r}")
    sign = "-" if match.group("sign") in ("-", "−") else "+"
    periods_src = match.group("periods").strip()
    periods: tuple[int, ...] = ()
    if periods_src:
        try:
            periods = tuple(int(tok) for tok in periods_src.split(","))
        except ValueError:
            raise NecConstructionError(f"bad period list in {text!r}") from None
    cycles_src = match.group("cycles")
    empty_cycles = 0
    if cycles_src is not None and cycles_src.strip():
        tokens = [tok.strip() for tok in cycles_src.split(",")]
        if any(tok != "(-)" for tok in tokens):
            raise NecConstructionError(f"only empty period-cycles '(-)' are supported, got {text!r}")
        empty_cycles = len(tokens)
    return NecSignature(int(match.group("genus")), sign, periods, empty_cycles)


def signatures_equivalent(a: NecSignature, b: NecSignature) -> bool:
    """Equality of signatures up to reordering the proper periods."""
    return (
        a.genus == b.genus
        and a.sign == b.sign
        and a.empty_cycles == b.empty_cycles
        and sorted(a.periods) == sorted(b.periods)
    )


@dataclass(frozen=True)
class Presentation:
    """Canonical presentation attached to a signature.

    ``relations[0]`` is always the long relation; it is followed by one
    power relation per proper period and the two relations of each empty
    period-cycle, giving ``1 + r + 2k`` relations in total.
    """

    signature: NecSignature
    generators: tuple[GeneratorSymbol, ...]
    relations: tuple[Word, ...]

    @property
    def long_relation(self) -> Word:
        return self.relations[0]

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(sym.name for sym in self.generators)

    def symbol(self, name: str) -> GeneratorSymbol:
        for sym in self.generators:
            if sym.name == name:
                return sym
        raise KeyError(name)

    def parity(self, name: str) -> int:
        return 1 if self.symbol(name).reverses_orientation else 0


def canonical_presentation(sig: NecSignature) -> Presentation:
    """Build the canonical generators and relations for a signature.

    Minus-sign surfaces use the hybrid generating system with one glide
    reflection for odd genus (d plus (g-1)/2 handle pairs) and two for
    even genus (d1, d2 plus (g-2)/2 handle pairs); the long relation
    opens with d^2 respectively d1^2 d2^2.  Plus-sign surfaces use the
    usual g handle pairs.
    """
    gens: list[GeneratorSymbol] = []
    long_rel: list[Letter] = []

    if sig.sign == "-":
        if sig.genus % 2 == 1:
            gens.append(GeneratorSymbol("d", KIND_GLIDE, 1))
            long_rel.append(("d", 2))
            pairs = (sig.genus - 1) // 2
        else:
            gens.append(GeneratorSymbol("d1", KIND_GLIDE, 1))
            gens.append(GeneratorSymbol("d2", KIND_GLIDE, 2))
            long_rel.append(("d1", 2))
            long_rel.append(("d2", 2))
            pairs = (sig.genus - 2) // 2
    else:
        pairs = sig.genus

    for i in range(1, pairs + 1):
        a = GeneratorSymbol(f"a{i}", KIND_HANDLE_A, i)
        b = GeneratorSymbol(f"b{i}", KIND_HANDLE_B, i)
        gens.extend((a, b))
        long_rel.extend(((a.name, 1), (b.name, 1), (a.name, -1), (b.name, -1)))

    for j, m in enumerate(sig.periods, start=1):
        gens.append(GeneratorSymbol(f"x{j}", KIND_ELLIPTIC, j, period=m))
        long_rel.append((f"x{j}", 1))

    for l in range(1, sig.empty_cycles + 1):
        gens.append(GeneratorSymbol(f"e{l}", KIND_CONNECTOR, l))
        gens.append(GeneratorSymbol(f"c{l}", KIND_REFLECTION, l, period=2))
        long_rel.append((f"e{l}", 1))

    relations: list[Word] = [tuple(long_rel)]
    for j, m in enumerate(sig.periods, start=1):
        relations.append(((f"x{j}", m),))
    for l in range(1, sig.empty_cycles + 1):
        relations.append(((f"c{l}", 2),))
        relations.append(((f"e{l}", 1), (f"c{l}", 1), (f"e{l}", -1), (f"c{l}", -1)))

    return Presentation(sig, tuple(gens), tuple(relations))


def generator_parities(pres: Presentation) -> dict[str, int]:
    """Orientation character on the canonical generators (1 = reversing)."""
    return {sym.name: (1 if sym.reverses_orientation else 0) for sym in pres.generators}


def word_parity(pres: Presentation, word: Word) -> int:
    par = generator_parities(pres)
    total = 0
    for name, exp in word:
        total += par[name] * exp
    return total % 2
