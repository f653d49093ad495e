"""Permutations of {1..m} and small permutation groups.

Permutations are image tuples: p[i-1] is the image of i.  Composition is
function composition, apply the right factor first.  Groups stay tiny here
(degree <= 6), so everything is honest enumeration: no stabilizer chains.
"""

from __future__ import annotations

from itertools import permutations as _itperms

from .lattice import FiniteLattice
from .limits import DEFAULT_LIMITS, CapExceededError, Limits
from .partition import Partition

Perm = tuple[int, ...]


def identity_perm(m: int) -> Perm:
    return tuple(range(1, m + 1))


def compose(p: Perm, q: Perm) -> Perm:
    """(p . q)(i) = p(q(i))."""
    return tuple(p[q[i] - 1] for i in range(len(p)))


def invert(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, img in enumerate(p):
        inv[img - 1] = i + 1
    return tuple(inv)


def format_cycles(p: Perm) -> str:
    """Cycle notation; the identity renders as '()'."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start] or p[start] == start + 1:
            seen[start] = True
            continue
        cyc = [start + 1]
        seen[start] = True
        nxt = p[start]
        while nxt != start + 1:
            cyc.append(nxt)
            seen[nxt - 1] = True
            nxt = p[nxt - 1]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) if out else "()"


def format_images(p: Perm) -> str:
    return ",".join(map(str, p))


def parse_perm(text: str, degree: int) -> Perm:
    """Accepts cycle notation '(1 2)(3 4)' or one-line images '2,1,4,3'."""
    text = text.strip()
    if text.startswith("("):
        images = list(range(1, degree + 1))
        body = text.replace(")", ")|")
        for chunk in filter(None, (c.strip("|() ") for c in body.split("|"))):
            pts = [int(t) for t in chunk.split()]
            if len(set(pts)) != len(pts) or any(
                x < 1 or x > degree for x in pts
            ):
                raise ValueError(f"bad cycle {chunk!r} at degree {degree}")
            for a, b in zip(pts, pts[1:] + pts[:1]):
                images[a - 1] = b
        p = tuple(images)
    elif text == "()" or not text:
        p = identity_perm(degree)
    else:
        p = tuple(int(t) for t in text.split(","))
    if sorted(p) != list(range(1, degree + 1)):
        raise ValueError(f"{text!r} is not a permutation of 1..{degree}")
    return p


class PermutationGroup:
    """A set of permutations of fixed degree, closed under the group ops."""

    def __init__(self, degree: int, elements):
        self.degree = degree
        self.elements = tuple(sorted(set(elements)))
        if identity_perm(degree) not in self.elements:
            raise ValueError("group must contain the identity")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in set(self.elements)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PermutationGroup)
            and self.degree == other.degree
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((self.degree, self.elements))

    def __repr__(self):
        return f"PermutationGroup(degree={self.degree}, order={self.order})"

    def is_trivial(self) -> bool:
        return self.order == 1

    def verify_closure(self) -> bool:
        elems = set(self.elements)
        return all(
            compose(a, b) in elems for a in elems for b in elems
        ) and all(invert(a) in elems for a in elems)

    def is_subgroup_of(self, other: "PermutationGroup") -> bool:
        return set(self.elements) <= set(other.elements)

    def conjugate(self, g: Perm) -> "PermutationGroup":
        gi = invert(g)
        return PermutationGroup(
            self.degree, (compose(compose(g, h), gi) for h in self.elements)
        )


def trivial_group(m: int) -> PermutationGroup:
    return PermutationGroup(m, [identity_perm(m)])


def symmetric_group(m: int, limits: Limits = DEFAULT_LIMITS) -> PermutationGroup:
    if m < 1 or m > limits.max_group_degree:
        raise CapExceededError(
            f"symmetric group degree {m} outside 1..{limits.max_group_degree}"
        )
    return PermutationGroup(m, _itperms(range(1, m + 1)))


def part_symmetry_group(p: Partition,
                        limits: Limits = DEFAULT_LIMITS) -> PermutationGroup:
    """Permutations of part indices preserving the part sequence pointwise:
    sigma with p[i] == p[sigma(i)] for all i.  Acts on words by letter
    renaming."""
    m = p.num_parts
    full = symmetric_group(m, limits)
    keep = [
        sigma
        for sigma in full.elements
        if all(p.parts[i] == p.parts[sigma[i] - 1] for i in range(m))
    ]
    return PermutationGroup(m, keep)


def generate(gens, degree: int) -> PermutationGroup:
    """Smallest group containing gens (closure under composition)."""
    gens = list(gens)
    for g in gens:
        if len(g) != degree:
            raise ValueError("generator degree mismatch")
    elems = {identity_perm(degree)}
    frontier = [g for g in gens if g not in elems]
    elems.update(frontier)
    while frontier:
        new = []
        for a in gens:
            for b in frontier:
                c = compose(a, b)
                if c not in elems:
                    elems.add(c)
                    new.append(c)
        frontier = new
    return PermutationGroup(degree, elems)


def all_subgroups(G: PermutationGroup,
                  limits: Limits = DEFAULT_LIMITS) -> list[PermutationGroup]:
    """Every subgroup of G, canonically sorted.

    Seeds with all cyclic subgroups, then joins pairs to a fixpoint; every
    subgroup is a join of cyclic ones, so this is complete.
    """
    if G.order > limits.max_group_order:
        raise CapExceededError(
            f"subgroup enumeration needs |G| <= {limits.max_group_order}, "
            f"got {G.order}"
        )
    elems = set(G.elements)
    cyclics = {}
    for g in G.elements:
        H = generate([g], G.degree)
        cyclics[H.elements] = H
    found = {trivial_group(G.degree).elements: trivial_group(G.degree)}
    found.update(cyclics)
    frontier = list(found.values())
    while frontier:
        new = []
        for H in frontier:
            for C in cyclics.values():
                joined = set(H.elements) | set(C.elements)
                if joined == set(H.elements):
                    continue
                K = generate(joined, G.degree)
                if K.elements not in found and set(K.elements) <= elems:
                    found[K.elements] = K
                    new.append(K)
        frontier = new
    return sorted(found.values(), key=lambda H: (H.order, H.elements))


def subgroup_lattice(G: PermutationGroup,
                     limits: Limits = DEFAULT_LIMITS
                     ) -> tuple[FiniteLattice, list[PermutationGroup]]:
    """Subgroups of G ordered by inclusion; meet is intersection, join the
    generated subgroup.  Returns the lattice and its element list."""
    subs = all_subgroups(G, limits)
    n = len(subs)
    sets = [set(H.elements) for H in subs]
    leq = []
    for i in range(n):
        mask = 0
        for j in range(n):
            if sets[i] <= sets[j]:
                mask |= 1 << j
        leq.append(mask)
    labels = tuple(
        "{" + ",".join(format_cycles(p) for p in H.elements) + "}"
        if H.order <= 3 else f"order-{H.order}#{i}"
        for i, H in enumerate(subs)
    )
    return FiniteLattice(tuple(leq), labels), subs


def interval_above(G: PermutationGroup, H: PermutationGroup,
                   limits: Limits = DEFAULT_LIMITS
                   ) -> tuple[FiniteLattice, list[PermutationGroup]]:
    """The interval [H, G] inside the subgroup lattice of G."""
    subs = [K for K in all_subgroups(G, limits) if H.is_subgroup_of(K)]
    n = len(subs)
    sets = [set(K.elements) for K in subs]
    leq = []
    for i in range(n):
        mask = 0
        for j in range(n):
            if sets[i] <= sets[j]:
                mask |= 1 << j
        leq.append(mask)
    return FiniteLattice(tuple(leq)), subs


def subgroup_conjugacy_classes(
    G: PermutationGroup, limits: Limits = DEFAULT_LIMITS
) -> list[list[PermutationGroup]]:
    """Subgroups of G grouped by conjugacy, each class sorted canonically."""
    subs = all_subgroups(G, limits)
    remaining = {H.elements: H for H in subs}
    classes = []
    while remaining:
        _, H = min(remaining.items())
        cls = {}
        for g in G.elements:
            K = H.conjugate(g)
            cls[K.elements] = K
        for key in cls:
            remaining.pop(key, None)
        classes.append(sorted(cls.values(), key=lambda K: K.elements))
    return classes
