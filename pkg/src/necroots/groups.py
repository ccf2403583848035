"""Explicit finite groups given by full multiplication tables.

Groups at the scale used here (orders up to 64) are cheapest to handle
as closed tables: every query becomes exact table lookup and every
structural property can be checked exhaustively in tests.  Element ids
follow the lexicographic order of normal forms (powers for cyclic
groups, c^a*u^b for the order-2 extensions, id pairs for products), so
fixtures are stable across runs.
"""

from __future__ import annotations

from typing import Optional


class NotInSubgroup(Exception):
    """Target element is not a power of the requested base."""


class InconsistencyError(RuntimeError):
    """An internal cross-check that must hold mathematically failed."""


class FiniteGroup:
    """Immutable multiplication-table group.

    ``mul_table[a][b]`` is the id of the product a*b, identity is id 0,
    ``gen_names`` maps parseable generator names to ids and must
    generate, ``labels`` are printable normal forms.
    """

    def __init__(
        self,
        mul_table: list[list[int]],
        labels: list[str],
        gen_names: dict[str, int],
        name: str,
        direct_factors: Optional[tuple["FiniteGroup", "FiniteGroup"]] = None,
    ) -> None:
        self.order = len(mul_table)
        self.mul_table = mul_table
        self.labels = labels
        self.gen_names = dict(gen_names)
        self.name = name
        self.direct_factors = direct_factors
        if any(len(row) != self.order for row in mul_table):
            raise ValueError("multiplication table is not square")
        if len(labels) != self.order:
            raise ValueError("one label per element required")
        if any(mul_table[0][b] != b or mul_table[b][0] != b for b in range(self.order)):
            raise ValueError("element 0 must be the identity")
        self.inv_table = [0] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if mul_table[a][b] == 0:
                    self.inv_table[a] = b
                    break
            else:
                raise ValueError(f"element {a} has no inverse")
        self._abelian: Optional[bool] = None

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        return self.inv_table[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv_table[a], -k
        acc = 0
        while k:
            if k & 1:
                acc = self.mul_table[acc][a]
            a = self.mul_table[a][a]
            k >>= 1
        return acc

    def conjugate(self, c: int, g: int) -> int:
        return self.mul_table[self.mul_table[c][g]][self.inv_table[c]]

    def label(self, a: int) -> str:
        return self.labels[a]

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            self._abelian = all(
                self.mul_table[a][b] == self.mul_table[b][a]
                for a in range(self.order)
                for b in range(a)
            )
        return self._abelian


def element_order(group: FiniteGroup, e: int) -> int:
    order = 1
    acc = e
    while acc != 0:
        acc = group.mul(acc, e)
        order += 1
    return order


def discrete_log(group: FiniteGroup, base: int, target: int) -> int:
    """Least w >= 0 with base^w = target; NotInSubgroup otherwise."""
    acc = 0
    for w in range(element_order(group, base)):
        if acc == target:
            return w
        acc = group.mul(acc, base)
    raise NotInSubgroup(
        f"{group.label(target)} is not a power of {group.label(base)} in {group.name}"
    )


def generated_subgroup(group: FiniteGroup, seed) -> tuple[int, ...]:
    """Closure of ``seed`` under multiplication and inverse, sorted."""
    closed = {0}
    frontier = [0]
    gens = [g for g in seed]
    for g in gens:
        if g not in closed:
            closed.add(g)
            frontier.append(g)
    while frontier:
        x = frontier.pop()
        for g in gens:
            for y in (group.mul(x, g), group.mul(x, group.inv(g))):
                if y not in closed:
                    closed.add(y)
                    frontier.append(y)
    return tuple(sorted(closed))


def is_subgroup(group: FiniteGroup, elements) -> bool:
    members = set(elements)
    if 0 not in members:
        return False
    return all(group.mul(a, b) in members for a in members for b in members)


def coset_partition(group: FiniteGroup, subgroup, side: str = "left") -> tuple[tuple[int, ...], list[int]]:
    """Cosets of a subgroup, indexed by minimal representative id.

    Returns (reps, coset_of) with coset_of[x] the coset index of x;
    coset 0 is the subgroup itself.  ``side`` picks xH or Hx.
    """
    members = sorted(set(subgroup))
    if not is_subgroup(group, members):
        raise ValueError("the given element set is not a subgroup")
    coset_of = [-1] * group.order
    reps = []
    for x in range(group.order):
        if coset_of[x] >= 0:
            continue
        if side == "left":
            coset = [group.mul(x, h) for h in members]
        else:
            coset = [group.mul(h, x) for h in members]
        index = len(reps)
        reps.append(min(coset))
        for y in coset:
            coset_of[y] = index
    return tuple(reps), coset_of


def left_coset_action(group: FiniteGroup, subgroup, e: int) -> tuple[int, ...]:
    """Permutation of left cosets induced by left multiplication by e."""
    reps, coset_of = coset_partition(group, subgroup, side="left")
    return tuple(coset_of[group.mul(e, rep)] for rep in reps)


def find_conjugator(group: FiniteGroup, g1: int, g2: int) -> Optional[int]:
    """First element c in id order with c*g2*c^-1 = g1, else None."""
    for c in range(group.order):
        if group.conjugate(c, g2) == g1:
            return c
    return None


# ---------------------------------------------------------------------------
# constructors


def cyclic(n: int, name: str = "u") -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be at least 1")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    labels = ["1"] + [name if k == 1 else f"{name}^{k}" for k in range(1, n)]
    return FiniteGroup(table, labels, {name: 1 % n}, f"C{n}")


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    clash = set(a.gen_names) & set(b.gen_names)
    if clash:
        raise ValueError(f"generator name clash in direct product: {sorted(clash)}")
    order_b = b.order
    table = [
        [a.mul(x1, x2) * order_b + b.mul(y1, y2) for x2 in a.elements for y2 in b.elements]
        for x1 in a.elements
        for y1 in b.elements
    ]
    labels = [f"({a.label(x)},{b.label(y)})" for x in a.elements for y in b.elements]
    gen_names = {n: g * order_b for n, g in a.gen_names.items()}
    gen_names.update({n: g for n, g in b.gen_names.items()})
    return FiniteGroup(table, labels, gen_names, f"{a.name}x{b.name}", direct_factors=(a, b))


def semidirect_c2(n: int, twist: int) -> FiniteGroup:
    """Order-2n group <u, c : u^n = c^2 = 1, c*u^k*c = u^(twist*k)>."""
    if n < 3:
        raise ValueError("semidirect_c2 requires n >= 3")
    twist %= n
    if (twist * twist) % n != 1:
        raise ValueError(f"twist {twist} is not an involution mod {n}")

    def mul(a1: int, b1: int, a2: int, b2: int) -> tuple[int, int]:
        # (c^a1 u^b1)(c^a2 u^b2) = c^(a1+a2) u^(b1*twist^a2 + b2)
        b = (b1 * (twist if a2 else 1) + b2) % n
        return (a1 + a2) % 2, b

    table = [
        [mul(a1, b1, a2, b2)[0] * n + mul(a1, b1, a2, b2)[1]
         for a2 in range(2) for b2 in range(n)]
        for a1 in range(2)
        for b1 in range(n)
    ]
    labels = []
    for a in range(2):
        for b in range(n):
            upart = "" if b == 0 else ("u" if b == 1 else f"u^{b}")
            if a == 0:
                labels.append(upart or "1")
            else:
                labels.append(f"c*{upart}" if upart else "c")
    return FiniteGroup(table, labels, {"u": 1, "c": n}, f"C{n}:C2(t{twist})")


# ---------------------------------------------------------------------------
# Z2 characters


def solve_character(group: FiniteGroup, constraints: dict[int, int]) -> Optional[dict[int, int]]:
    """Extend prescribed parities to <keys> by the homomorphism law.

    Returns parities on the generated subgroup, or None when the
    prescription is contradictory.  Uniqueness on that subgroup is
    forced by construction.
    """
    values = {0: 0}
    frontier = [0]
    gens = list(constraints.items())
    while frontier:
        x = frontier.pop()
        for g, pg in gens:
            for y, py in ((group.mul(x, g), pg), (group.mul(x, group.inv(g)), pg)):
                val = (values[x] + py) % 2
                if y in values:
                    if values[y] != val:
                        return None
                else:
                    values[y] = val
                    frontier.append(y)
    return values


def characters(group: FiniteGroup, nontrivial_only: bool = False) -> list[tuple[int, ...]]:
    """All homomorphisms into Z2, as per-element parity tuples."""
    gen_ids = sorted(set(group.gen_names.values()))
    found: list[tuple[int, ...]] = []
    for mask in range(1 << len(gen_ids)):
        constraints = {g: (mask >> i) & 1 for i, g in enumerate(gen_ids)}
        values = solve_character(group, constraints)
        if values is None or len(values) != group.order:
            continue
        chi = tuple(values[e] for e in group.elements)
        if chi not in found:
            found.append(chi)
    if nontrivial_only:
        found = [chi for chi in found if any(chi)]
    return found
