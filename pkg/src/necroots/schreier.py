"""Coset rewriting of glide presentations into root-subgroup data.

Given a surface-kernel monodromy and a root g, the preimage of <g> is a
finite-index subgroup of the orbifold group.  This module builds a
coset transversal whose representatives all preserve orientation,
rewrites the generators and relators onto the subgroup (the classical
coset-scanning process), and extracts the arithmetic the classifier
consumes: cone-class residues, the glide residue sum, and a canonically
marked glide value when one exists.

The parity-constrained transversal is deliberately not prefix-closed,
so the rewritten generators need not be a free basis.  Homology is
therefore computed over a second, prefix-closed transversal whose
generators do form a basis, with definition rows tying the two
generating sets together; rewritten words stay comparable across both.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional
from weakref import WeakKeyDictionary

from .classify import InvariantTuple
from .groups import (
    FiniteGroup,
    InconsistencyError,
    coset_partition,
    discrete_log,
    element_order,
    generated_subgroup,
)
from .homology import RowLatticeSolver, abelian_invariants
from .monodromy import Monodromy, evaluate
from .signature import (
    KIND_ELLIPTIC,
    KIND_GLIDE,
    NecSignature,
    Word,
    expand_letters,
    generator_parities,
    invert_word,
)

STRATEGIES = ("bfs", "glide-shift")


class VerificationFailed(RuntimeError):
    """No transversal-stable canonical marking exists for this system."""


def free_reduce(word: Word) -> Word:
    out: list = []
    for name, exp in expand_letters(word):
        if out and out[-1] == (name, -exp):
            out.pop()
        else:
            out.append((name, exp))
    return tuple(out)


@dataclass(frozen=True)
class SchreierGenerator:
    coset: int
    symbol: str
    word: Word
    image: int
    reversing: bool
    omega: Optional[int] = None


@dataclass(frozen=True)
class EllipticClass:
    symbol: str
    coset: int
    length: int
    period: int
    word: Word
    image: int
    residue: Optional[int] = None


@dataclass(frozen=True, eq=False)
class SchreierSystem:
    mono: Monodromy
    subgroup: tuple[int, ...]
    root: Optional[int]
    strategy: str
    reps: tuple[int, ...]
    coset_of: tuple[int, ...]
    transversal: tuple[Word, ...]
    generators: tuple[SchreierGenerator, ...]
    elliptic: tuple[EllipticClass, ...]
    d_sum: Optional[int]

    @property
    def index(self) -> int:
        return len(self.transversal)

    def act(self, coset: int, element: int) -> int:
        return self.coset_of[self.mono.group.mul(self.reps[coset], element)]

    def reversing_generators(self) -> tuple[SchreierGenerator, ...]:
        return tuple(gen for gen in self.generators if gen.reversing)

    # The prefix-closed transversal only matters for homology questions,
    # so it is built on first access and then kept.
    @property
    def aux_transversal(self) -> tuple[Word, ...]:
        try:
            return self._aux_transversal
        except AttributeError:
            pass
        words = tuple(_plain_bfs(self.mono, self.act, self.index))
        object.__setattr__(self, "_aux_transversal", words)
        return words

    @property
    def aux_generators(self) -> tuple[SchreierGenerator, ...]:
        try:
            return self._aux_generators
        except AttributeError:
            pass
        gens = _schreier_generators(
            self.mono, self.act, self.aux_transversal, frozenset(self.subgroup), None
        )
        object.__setattr__(self, "_aux_generators", gens)
        return gens


def _bfs_steps(mono: Monodromy) -> list[tuple[str, int, int]]:
    """(name, exponent, group element) steps in presentation order."""
    steps = []
    for sym in mono.presentation.generators:
        image = mono.images[sym.name]
        steps.append((sym.name, 1, image))
        steps.append((sym.name, -1, mono.group.inv(image)))
    return steps


def _plain_bfs(mono: Monodromy, act, n_cosets: int) -> list[Word]:
    """Shortest coset representatives; prefix-closed by parent pointers."""
    steps = _bfs_steps(mono)
    words: list[Optional[Word]] = [None] * n_cosets
    words[0] = ()
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for name, exp, e in steps:
            j = act(i, e)
            if words[j] is None:
                words[j] = words[i] + ((name, exp),)
                queue.append(j)
    if any(w is None for w in words):
        raise InconsistencyError("coset graph is not connected")
    return words


def _parity_bfs(mono: Monodromy, act, n_cosets: int, parities) -> list[Word]:
    """Shortest even-parity representative per coset.

    Breadth-first over (coset, parity) states, letters tried in
    presentation order with exponent +1 before -1; the base coset keeps
    the empty word.
    """
    steps = _bfs_steps(mono)
    seen: dict[tuple[int, int], Word] = {(0, 0): ()}
    queue = deque([(0, 0)])
    while queue:
        i, p = queue.popleft()
        w = seen[(i, p)]
        for name, exp, e in steps:
            j = act(i, e)
            q = p ^ parities[name]
            if (j, q) not in seen:
                seen[(j, q)] = w + ((name, exp),)
                queue.append((j, q))
    words = []
    for i in range(n_cosets):
        if (i, 0) not in seen:
            raise InconsistencyError(
                "some coset admits no orientation-preserving representative"
            )
        words.append(seen[(i, 0)])
    return words


def _glide_shift_transversal(mono: Monodromy, act, n_cosets: int, parities, members) -> list[Word]:
    """Plain shortest representatives, odd ones fixed by a glide prefix.

    The prefix must evaluate into the subgroup so that left
    multiplication stays inside each right coset; a bare glide
    generator is preferred, otherwise the shortest word landing on an
    orientation-reversing subgroup element is used.
    """
    words = _plain_bfs(mono, act, n_cosets)
    if all(_word_parity(parities, w) == 0 for w in words):
        return words

    shift: Optional[Word] = None
    for sym in mono.presentation.generators:
        if sym.kind == KIND_GLIDE and mono.images[sym.name] in members:
            shift = ((sym.name, 1),)
            break
    if shift is None:
        chi = mono.character()
        targets = {h for h in members if chi is not None and chi[h] == 1}
        if not targets:
            raise InconsistencyError("subgroup preimage preserves orientation")
        seen = {0: ()}
        queue = deque([0])
        while queue and shift is None:
            e = queue.popleft()
            for sym in mono.presentation.generators:
                for exp in (1, -1):
                    f = mono.group.mul(e, mono.group.power(mono.images[sym.name], exp))
                    if f not in seen:
                        seen[f] = seen[e] + ((sym.name, exp),)
                        if f in targets:
                            shift = seen[f]
                            break
                        queue.append(f)
                if shift is not None:
                    break

    fixed = []
    for w in words:
        if _word_parity(parities, w) == 0:
            fixed.append(w)
        else:
            fixed.append(free_reduce(shift + w))
    return fixed


def _word_parity(parities, word: Word) -> int:
    return sum(parities[name] * exp for name, exp in word) % 2


def _schreier_generators(mono: Monodromy, act, transversal, members, root) -> tuple[SchreierGenerator, ...]:
    """All non-trivial rewritten generators, symbol-major, cosets ascending."""
    group = mono.group
    reps = [evaluate(mono, t) for t in transversal]
    gens = []
    for sym in mono.presentation.generators:
        image = mono.images[sym.name]
        for i in range(len(transversal)):
            j = act(i, image)
            word = free_reduce(transversal[i] + ((sym.name, 1),) + invert_word(transversal[j]))
            if not word:
                continue
            value = group.mul(group.mul(reps[i], image), group.inv(reps[j]))
            if value not in members:
                raise InconsistencyError("rewritten generator leaves the subgroup")
            omega = discrete_log(mono.group, root, value) if root is not None else None
            gens.append(
                SchreierGenerator(i, sym.name, word, value, sym.reverses_orientation, omega)
            )
    return tuple(gens)


def _elliptic_classes(mono: Monodromy, act, transversal, members, root) -> tuple[EllipticClass, ...]:
    classes = []
    for sym in mono.presentation.generators:
        if sym.kind != KIND_ELLIPTIC:
            continue
        image = mono.images[sym.name]
        seen = set()
        for start in range(len(transversal)):
            if start in seen:
                continue
            length = 0
            i = start
            while True:
                seen.add(i)
                i = act(i, image)
                length += 1
                if i == start:
                    break
            if sym.period % length != 0:
                raise InconsistencyError("coset cycle length does not divide the period")
            period = sym.period // length
            word = free_reduce(
                transversal[start] + ((sym.name, length),) + invert_word(transversal[start])
            )
            value = evaluate(mono, word)
            if value not in members:
                raise InconsistencyError("cone class word leaves the subgroup")
            residue = discrete_log(mono.group, root, value) if root is not None else None
            if period == 1:
                if value != 0:
                    raise InconsistencyError("length-m coset cycle with non-trivial class")
                continue
            classes.append(EllipticClass(sym.name, start, length, period, word, value, residue))
    return tuple(classes)


def build_coset_system(
    mono: Monodromy,
    subgroup,
    strategy: str = "bfs",
    root: Optional[int] = None,
) -> SchreierSystem:
    """Orientation-preserving coset system for an arbitrary subgroup.

    Cosets are right cosets indexed by minimal member id, coset 0 the
    subgroup itself with the empty representative.
    """
    sig = mono.presentation.signature
    if sig.sign != "-" or sig.empty_cycles:
        raise ValueError("coset rewriting expects a glide presentation without boundary")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown transversal strategy {strategy!r}")

    group = mono.group
    members = frozenset(subgroup)
    reps, coset_of = coset_partition(group, sorted(members), side="right")
    coset_of = tuple(coset_of)

    def act(i: int, e: int) -> int:
        return coset_of[group.mul(reps[i], e)]

    parities = generator_parities(mono.presentation)
    if strategy == "bfs":
        transversal = _parity_bfs(mono, act, len(reps), parities)
    else:
        transversal = _glide_shift_transversal(mono, act, len(reps), parities, members)

    for i, w in enumerate(transversal):
        if _word_parity(parities, w) != 0:
            raise InconsistencyError("transversal word reverses orientation")
        if coset_of[evaluate(mono, w)] != i:
            raise InconsistencyError("transversal word lands in the wrong coset")
    if transversal[0] != ():
        raise InconsistencyError("base coset representative must be empty")

    generators = _schreier_generators(mono, act, transversal, members, root)
    elliptic = _elliptic_classes(mono, act, transversal, members, root)

    d_sum = None
    if root is not None:
        two_m = len(members)
        reversing = [gen for gen in generators if gen.reversing]
        glide_count = sum(
            1 for sym in mono.presentation.generators if sym.kind == KIND_GLIDE
        )
        if len(reversing) != glide_count * len(reps):
            raise InconsistencyError("unexpected number of reversing generators")
        for gen in reversing:
            if gen.omega % 2 == 0:
                raise InconsistencyError("reversing generator with even residue")
        for cls in elliptic:
            if cls.residue % 2 == 1:
                raise InconsistencyError("cone class with odd residue")
        d_sum = sum(gen.omega for gen in reversing) % two_m

    return SchreierSystem(
        mono=mono,
        subgroup=tuple(sorted(members)),
        root=root,
        strategy=strategy,
        reps=tuple(reps),
        coset_of=coset_of,
        transversal=tuple(transversal),
        generators=generators,
        elliptic=elliptic,
        d_sum=d_sum,
    )


def build_schreier(mono: Monodromy, g: int, strategy: str = "bfs") -> SchreierSystem:
    """Coset system for the cyclic subgroup generated by a root."""
    subgroup = generated_subgroup(mono.group, (g,))
    return build_coset_system(mono, subgroup, strategy=strategy, root=g)


# systems are immutable once built, so derived data is cached per instance
_signature_cache: WeakKeyDictionary = WeakKeyDictionary()
_matrix_cache: WeakKeyDictionary = WeakKeyDictionary()
_solver_cache: WeakKeyDictionary = WeakKeyDictionary()
_invariant_cache: WeakKeyDictionary = WeakKeyDictionary()


def subgroup_signature(system: SchreierSystem) -> NecSignature:
    """Signature of the subgroup, solved from area multiplicativity."""
    cached = _signature_cache.get(system)
    if cached is not None:
        return cached
    mono = system.mono
    chi = mono.character()
    if chi is None:
        raise InconsistencyError("monodromy admits no orientation character")
    sign = "-" if any(chi[h] == 1 for h in system.subgroup) else "+"
    periods = tuple(cls.period for cls in system.elliptic)
    area = system.index * mono.presentation.signature.reduced_area()
    genus = area + 2 - sum(1 - Fraction(1, p) for p in periods)
    if sign == "+":
        genus = genus / 2
    if genus.denominator != 1:
        raise InconsistencyError("subgroup signature has non-integral genus")
    genus = int(genus)
    if genus < (1 if sign == "-" else 0):
        raise InconsistencyError("subgroup signature has impossible genus")
    result = NecSignature(genus, sign, periods)
    _signature_cache[system] = result
    return result


def _scan(system: SchreierSystem, lookup, word: Word) -> list[tuple[tuple[str, int], int]]:
    """Coset-scan a subgroup word into rewritten-generator letters."""
    mono = system.mono
    coset = 0
    out = []
    for name, exp in expand_letters(word):
        image = mono.images[name]
        if exp == 1:
            key = (name, coset)
            if key in lookup:
                out.append((key, 1))
            coset = system.act(coset, image)
        else:
            coset = system.act(coset, mono.group.inv(image))
            key = (name, coset)
            if key in lookup:
                out.append((key, -1))
    if coset != 0:
        raise ValueError("word does not represent a subgroup element")
    return out


def _lookup(gens) -> dict[tuple[str, int], int]:
    return {(gen.symbol, gen.coset): pos for pos, gen in enumerate(gens)}


def rewrite_word(system: SchreierSystem, word: Word) -> tuple[tuple[int, int], ...]:
    """Word in the ambient generators to letters over system.generators.

    Letters are (generator position, exponent); rewritten generators
    that freely cancelled are the identity and produce no letter.
    """
    lookup = _lookup(system.generators)
    return tuple((lookup[key], exp) for key, exp in _scan(system, lookup, word))


def _relator_rows(system: SchreierSystem, aux_lookup) -> list[list[int]]:
    """Conjugated-relator exponent rows over the prefix-basis columns."""
    n_aux = len(system.aux_generators)
    rows = []
    for relator in system.mono.presentation.relations:
        for i in range(system.index):
            word = system.aux_transversal[i] + relator + invert_word(system.aux_transversal[i])
            row = [0] * n_aux
            for (key, exp) in _scan(system, aux_lookup, word):
                row[aux_lookup[key]] += exp
            rows.append(row)
    return rows


def relator_matrix(system: SchreierSystem) -> list[list[int]]:
    """Abelianized relators over the joint generating set.

    Columns are the prefix-transversal generators (a free basis)
    followed by the parity-transversal generators; rows are the
    rewritten conjugated relators plus one definition row per
    parity-transversal generator expressing it over the basis.
    Cached per system; treat the result as read-only.
    """
    cached = _matrix_cache.get(system)
    if cached is not None:
        return cached
    aux_lookup = _lookup(system.aux_generators)
    n_aux = len(system.aux_generators)
    n_main = len(system.generators)
    rows = [row + [0] * n_main for row in _relator_rows(system, aux_lookup)]
    for pos, gen in enumerate(system.generators):
        row = [0] * (n_aux + n_main)
        for (key, exp) in _scan(system, aux_lookup, gen.word):
            row[aux_lookup[key]] += exp
        row[n_aux + pos] -= 1
        rows.append(row)
    _matrix_cache[system] = rows
    return rows


def homology_invariants(system: SchreierSystem) -> tuple[int, tuple[int, ...]]:
    """Free rank and torsion of the subgroup's abelianization.

    Agrees with ``abelian_invariants(relator_matrix(system))`` but
    reduces the relator block alone: each definition row holds the only
    entry in its dependent column, a unit, so eliminating those pairs
    leaves the relator block and the invariants unchanged.
    """
    cached = _invariant_cache.get(system)
    if cached is None:
        rows = _relator_rows(system, _lookup(system.aux_generators))
        cached = abelian_invariants(rows) if rows else (len(system.aux_generators), ())
        _invariant_cache[system] = cached
    return cached


def relator_solver(system: SchreierSystem) -> RowLatticeSolver:
    """Shared Smith reduction of the system's relator matrix."""
    solver = _solver_cache.get(system)
    if solver is None:
        solver = RowLatticeSolver(relator_matrix(system))
        _solver_cache[system] = solver
    return solver


def class_vector(system: SchreierSystem, word: Word) -> list[int]:
    """Homology coordinates of a subgroup word, over the joint columns."""
    n_aux = len(system.aux_generators)
    vector = [0] * (n_aux + len(system.generators))
    for pos, exp in rewrite_word(system, word):
        vector[n_aux + pos] += exp
    return vector


@dataclass(frozen=True)
class CanonicalMarking:
    words: tuple[Word, ...]
    omegas: tuple[int, ...]
    source: str


def verify_marking(system: SchreierSystem, words) -> tuple[str, ...]:
    """Check a glide-pair marking; empty result means it is sound.

    The two words must reverse orientation, evaluate into the root
    subgroup, reproduce the glide residue sum, and together be
    homologous to the total reversing class of the rewritten system.
    """
    if system.root is None:
        raise ValueError("markings only make sense over a root subgroup")
    if len(words) != 2:
        raise ValueError("a marking consists of exactly two words")
    mono = system.mono
    parities = generator_parities(mono.presentation)
    members = set(system.subgroup)
    failures = []
    omegas = []
    for k, word in enumerate(words, start=1):
        try:
            value = evaluate(mono, word)
        except KeyError as err:
            failures.append(f"marking word {k} uses {err.args[0]}")
            continue
        if _word_parity(parities, word) != 1:
            failures.append(f"marking word {k} preserves orientation")
        elif value not in members:
            failures.append(f"marking word {k} does not map into the root subgroup")
        else:
            omegas.append(discrete_log(mono.group, system.root, value))
    if failures:
        return tuple(failures)

    two_m = len(system.subgroup)
    if (omegas[0] + omegas[1] - system.d_sum) % two_m != 0:
        failures.append("marking residues do not reproduce the glide residue sum")

    vector = class_vector(system, words[0])
    for pos, value in enumerate(class_vector(system, words[1])):
        vector[pos] += value
    n_aux = len(system.aux_generators)
    for pos, gen in enumerate(system.generators):
        if gen.reversing:
            vector[n_aux + pos] -= 1
    if not relator_solver(system).contains(vector):
        failures.append("marking is not homologous to the total reversing class")
    return tuple(failures)


def canonicalize_index2(system: SchreierSystem) -> CanonicalMarking:
    """Canonical glide marking for subgroups of index one or two.

    At index one the presentation glides mark themselves.  At index two
    the marking depends on which glide images fall into the subgroup;
    the mixed patterns admit fixed marking words, the remaining ones
    provably depend on the transversal and are refused.
    """
    if system.root is None:
        raise ValueError("markings only make sense over a root subgroup")
    mono = system.mono
    glides = [sym for sym in mono.presentation.generators if sym.kind == KIND_GLIDE]
    members = set(system.subgroup)

    if system.index == 1:
        words = tuple(((sym.name, 1),) for sym in glides)
        omegas = tuple(
            discrete_log(mono.group, system.root, mono.images[sym.name]) for sym in glides
        )
        return CanonicalMarking(words, omegas, "presentation-glides")

    if system.index != 2:
        raise ValueError("canonical marking rules cover index at most two")

    inside = [mono.images[sym.name] in members for sym in glides]
    if len(glides) == 2:
        d1, d2 = glides[0].name, glides[1].name
        if inside[0] and not inside[1]:
            words = (((d2, 1), (d1, 1), (d2, -1)), ((d1, 1), (d2, 2)))
        elif inside[1] and not inside[0]:
            words = (((d1, 1), (d2, 1), (d1, -1)), ((d2, 1), (d1, 2)))
        else:
            raise VerificationFailed(
                "glide images both inside or both outside the root subgroup"
            )
    else:
        d = glides[0].name
        if inside[0]:
            t1 = system.transversal[1]
            words = (((d, 1),), free_reduce(t1 + ((d, 1),) + invert_word(t1)))
        else:
            raise VerificationFailed("single glide image outside the root subgroup")

    failures = verify_marking(system, words)
    if failures:
        raise InconsistencyError("canonical marking failed its own checks: " + "; ".join(failures))
    omegas = tuple(
        discrete_log(mono.group, system.root, evaluate(mono, w)) for w in words
    )
    return CanonicalMarking(words, omegas, "index-two-shift")


def invariant_tuple_from_system(system: SchreierSystem, marking=None) -> InvariantTuple:
    """Classifier input read off an already built root coset system."""
    if system.root is None:
        raise ValueError("invariant tuples require a root coset system")
    mono = system.mono
    sub_sig = subgroup_signature(system)
    x_classes = tuple((cls.period, cls.residue) for cls in system.elliptic)

    d_first = None
    if marking is not None:
        failures = verify_marking(system, tuple(marking))
        if failures:
            warnings.warn("ignoring unsound marking: " + "; ".join(failures))
        else:
            d_first = discrete_log(
                mono.group, system.root, evaluate(mono, tuple(marking)[0])
            )
    if d_first is None and system.index <= 2:
        try:
            d_first = canonicalize_index2(system).omegas[0]
        except VerificationFailed:
            d_first = None

    return InvariantTuple(
        len(system.subgroup), sub_sig, x_classes, system.d_sum, d_first=d_first
    )


def invariant_tuple(
    mono: Monodromy,
    g: int,
    marking=None,
    strategy: str = "bfs",
) -> InvariantTuple:
    """Full classifier input for one root.

    A user marking is verified first and falls back to the canonical
    one (with a warning) when unsound; without any usable marking the
    tuple carries no marked glide value and genus-2 comparisons may
    come out inconclusive.
    """
    group = mono.group
    order = element_order(group, g)
    if order % 4 != 0:
        raise ValueError("root order must be divisible by four")
    chi = mono.character()
    if chi is None or chi[g] != 1:
        raise ValueError("root must reverse orientation")

    system = build_schreier(mono, g, strategy=strategy)
    return invariant_tuple_from_system(system, marking=marking)


def quotient_genus(mono: Monodromy, subgroup) -> int:
    """Genus of the subgroup's quotient surface signature."""
    system = build_coset_system(mono, subgroup)
    return subgroup_signature(system).genus
