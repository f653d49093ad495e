"""Finite G-sets, their congruences, and the greedy-congruence machinery.

A GSet is a finite carrier with a permutation-group action, stored as one
index table per group element.  A Congruence is an action-compatible set
partition of the carrier, stored as a restricted-growth label tuple (block
ids in first-occurrence order), which doubles as the canonical form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .lattice import FiniteLattice
from .limits import DEFAULT_LIMITS, CapExceededError, Limits, PreconditionError
from .partition import Partition
from .permgroup import Perm, PermutationGroup, part_symmetry_group, trivial_group
from .word import apply_permutation, transversal, word_str


def _normalize(labels) -> tuple[int, ...]:
    """Relabel block ids in first-occurrence order."""
    remap: dict[int, int] = {}
    out = []
    for lab in labels:
        if lab not in remap:
            remap[lab] = len(remap)
        out.append(remap[lab])
    return tuple(out)


@dataclass(frozen=True, order=True)
class Congruence:
    """A set partition of carrier indices in restricted-growth form.

    Only the GSet knows whether the partition is action-compatible; the
    algebraic operations (join, meet, refinement) are pure partition
    operations and never need the action.
    """

    labels: tuple[int, ...]

    @classmethod
    def equality(cls, n: int) -> "Congruence":
        return cls(tuple(range(n)))

    @classmethod
    def universal(cls, n: int) -> "Congruence":
        return cls((0,) * n)

    @classmethod
    def from_blocks(cls, n: int, blocks) -> "Congruence":
        labels = [-1] * n
        for bi, block in enumerate(blocks):
            for x in block:
                if labels[x] != -1:
                    raise ValueError(f"element {x} in two blocks")
                labels[x] = bi
        if any(lab == -1 for lab in labels):
            raise ValueError("blocks do not cover the carrier")
        return cls(_normalize(labels))

    @classmethod
    def from_raw_labels(cls, labels) -> "Congruence":
        """Normalize an arbitrary hashable labeling into a congruence."""
        return cls(_normalize(labels))

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "Congruence":
        """Equivalence generated by the given pairs (union-find closure)."""
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in pairs:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        return cls(_normalize(find(x) for x in range(n)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def num_blocks(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for idx, lab in enumerate(self.labels):
            out[lab].append(idx)
        return tuple(tuple(b) for b in out)

    def relates(self, a: int, b: int) -> bool:
        return self.labels[a] == self.labels[b]

    def is_equality(self) -> bool:
        return self.num_blocks == self.size

    def is_universal(self) -> bool:
        return self.num_blocks == 1

    def join(self, other: "Congruence") -> "Congruence":
        if self.size != other.size:
            raise ValueError("size mismatch")
        n = self.size
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        first_self: dict[int, int] = {}
        first_other: dict[int, int] = {}
        for idx in range(n):
            for labs, first in ((self.labels, first_self),
                                (other.labels, first_other)):
                lab = labs[idx]
                if lab in first:
                    ra, rb = find(first[lab]), find(idx)
                    if ra != rb:
                        parent[rb] = ra
                else:
                    first[lab] = idx
        return Congruence(_normalize(find(x) for x in range(n)))

    def meet(self, other: "Congruence") -> "Congruence":
        if self.size != other.size:
            raise ValueError("size mismatch")
        return Congruence(_normalize(zip(self.labels, other.labels)))

    def refines(self, other: "Congruence") -> bool:
        """True iff every block of self lies inside a block of other."""
        seen: dict[int, int] = {}
        for a, b in zip(self.labels, other.labels):
            if a in seen:
                if seen[a] != b:
                    return False
            else:
                seen[a] = b
        return True

    def restrict(self, indices) -> "Congruence":
        """The induced partition on a sub-carrier, reindexed by position."""
        return Congruence(_normalize(self.labels[i] for i in indices))


class GSet:
    """Finite carrier plus a permutation-group action given by index tables."""

    def __init__(self, carrier: tuple, group: PermutationGroup,
                 tables: dict[Perm, tuple[int, ...]]):
        self.carrier = tuple(carrier)
        self.group = group
        self.tables = tables
        self._orbits: tuple[tuple[int, ...], ...] | None = None
        n = len(self.carrier)
        if tables[_identity_of(group)] != tuple(range(n)):
            raise ValueError("identity does not act as identity")

    @classmethod
    def from_action(cls, carrier, group: PermutationGroup, act) -> "GSet":
        """Build index tables from a callable act(g, element) -> element."""
        carrier = tuple(carrier)
        index = {x: i for i, x in enumerate(carrier)}
        if len(index) != len(carrier):
            raise ValueError("carrier has duplicates")
        tables = {}
        for g in group.elements:
            tables[g] = tuple(index[act(g, x)] for x in carrier)
        A = cls(carrier, group, tables)
        A.verify_action()
        return A

    @property
    def size(self) -> int:
        return len(self.carrier)

    def act(self, g: Perm, i: int) -> int:
        return self.tables[g][i]

    def verify_action(self):
        from .permgroup import compose

        ident = _identity_of(self.group)
        n = self.size
        assert self.tables[ident] == tuple(range(n))
        for g in self.group.elements:
            for h in self.group.elements:
                gh = compose(g, h)
                th, tg, tgh = self.tables[h], self.tables[g], self.tables[gh]
                for x in range(n):
                    if tgh[x] != tg[th[x]]:
                        raise ValueError(
                            f"action not compatible at g={g}, h={h}, x={x}"
                        )

    def label(self, i: int) -> str:
        x = self.carrier[i]
        return word_str(x) if isinstance(x, tuple) else str(x)


def _identity_of(group: PermutationGroup) -> Perm:
    return tuple(range(1, group.degree + 1))


def transversal_gset(p: Partition, limits: Limits = DEFAULT_LIMITS) -> GSet:
    """The word transversal of p acted on by its part-symmetry group."""
    words = transversal(p, limits).words
    group = part_symmetry_group(p, limits)
    return GSet.from_action(words, group,
                            lambda g, w: apply_permutation(g, w))


def regular_gset(group: PermutationGroup) -> GSet:
    """The group acting on itself by left multiplication."""
    from .permgroup import compose

    return GSet.from_action(group.elements, group, compose)


def natural_gset(group: PermutationGroup) -> GSet:
    """The group acting on the points 1..degree."""
    return GSet.from_action(range(1, group.degree + 1), group,
                            lambda g, x: g[x - 1])


# -- orbits and stabilizers ----------------------------------------------------


def orbits(A: GSet) -> tuple[tuple[int, ...], ...]:
    """Disjoint action-minimal subsets covering the carrier, each sorted,
    ordered by minimum element."""
    if A._orbits is not None:
        return A._orbits
    n = A.size
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        orb = {A.act(g, start) for g in A.group.elements}
        for x in orb:
            seen[x] = True
        out.append(tuple(sorted(orb)))
    result = tuple(sorted(out, key=lambda o: o[0]))
    A._orbits = result
    return result


def stabilizer(A: GSet, x: int) -> PermutationGroup:
    fixing = [g for g in A.group.elements if A.act(g, x) == x]
    return PermutationGroup(A.group.degree, fixing)


def is_transitive(A: GSet) -> bool:
    return len(orbits(A)) == 1


def is_free(A: GSet) -> bool:
    """Every stabilizer trivial; then each orbit is a copy of the group."""
    return all(stabilizer(A, x).is_trivial() for x in range(A.size))


def orbit_of(A: GSet, x: int) -> int:
    """Index of the orbit containing carrier index x."""
    for oi, orb in enumerate(orbits(A)):
        if x in orb:
            return oi
    raise ValueError("index outside carrier")


# -- congruence construction -----------------------------------------------------


def is_congruence(A: GSet, c: Congruence) -> bool:
    """Action compatibility: every group element maps blocks onto blocks."""
    labels = c.labels
    for g in A.group.elements:
        table = A.tables[g]
        image_label: dict[int, int] = {}
        for x in range(A.size):
            src, dst = labels[x], labels[table[x]]
            if src in image_label:
                if image_label[src] != dst:
                    return False
            else:
                image_label[src] = dst
    return True


def principal_closure(A: GSet, pairs) -> Congruence:
    """Least congruence relating every given pair: close the pair set under
    the action, then take the generated equivalence."""
    closed = []
    for a, b in pairs:
        for g in A.group.elements:
            closed.append((A.act(g, a), A.act(g, b)))
    return Congruence.from_pairs(A.size, closed)


def collapse_congruence(A: GSet, subset) -> Congruence:
    """Collapse an action-closed subset to one block, all else singletons."""
    subset = set(subset)
    for g in A.group.elements:
        if {A.act(g, x) for x in subset} != subset:
            raise PreconditionError("subset is not action-closed")
    first = min(subset)
    return Congruence.from_pairs(A.size, [(first, x) for x in subset])


def paired_orbit_congruence(A: GSet, b: int, c: int) -> Congruence:
    """The relation pairing g(b) with g(c) for every g, plus equality.

    Requires b and c in distinct orbits with equal stabilizers; under that
    hypothesis the pair blocks cannot chain, so the result is a congruence
    and coincides with principal_closure of {(b, c)}.
    """
    if orbit_of(A, b) == orbit_of(A, c):
        raise PreconditionError(
            f"elements {b} and {c} lie in the same orbit"
        )
    if stabilizer(A, b) != stabilizer(A, c):
        raise PreconditionError(
            f"stabilizers of {b} and {c} differ"
        )
    rel = principal_closure(A, [(b, c)])
    # sanity: blocks are exactly the {g(b), g(c)} pairs plus singletons
    for block in rel.blocks():
        if len(block) > 2:
            raise AssertionError("paired-orbit relation chained unexpectedly")
    return rel


# -- congruence enumeration ------------------------------------------------------


def all_congruences(A: GSet, limits: Limits = DEFAULT_LIMITS,
                    strategy: str = "auto") -> list[Congruence]:
    """Every action-compatible partition of the carrier, sorted canonically.

    strategy 'exhaustive' scans all set partitions (carrier <= cap);
    'principal' joins principal congruences to a fixpoint, which is complete
    because every congruence is the join of its principal subcongruences.
    """
    if strategy == "auto":
        strategy = (
            "exhaustive" if A.size <= limits.max_exhaustive_carrier
            else "principal"
        )
    if strategy == "exhaustive":
        if A.size > limits.max_exhaustive_carrier:
            raise CapExceededError(
                f"exhaustive congruence scan needs carrier <= "
                f"{limits.max_exhaustive_carrier}, got {A.size}"
            )
        return sorted(_congruences_exhaustive(A))
    if strategy == "principal":
        return sorted(_congruences_principal(A, limits))
    raise ValueError(f"unknown strategy {strategy!r}")


def _congruences_exhaustive(A: GSet) -> list[Congruence]:
    n = A.size
    nontrivial_group = A.group.order > 1
    out = []

    def rec(i, labels, num):
        if i == n:
            c = Congruence(tuple(labels))
            if not nontrivial_group or is_congruence(A, c):
                out.append(c)
            return
        for lab in range(num):
            labels.append(lab)
            rec(i + 1, labels, num)
            labels.pop()
        labels.append(num)
        rec(i + 1, labels, num + 1)
        labels.pop()

    rec(0, [], 0)
    return out


def _congruences_principal(A: GSet, limits: Limits) -> list[Congruence]:
    n = A.size
    bottom = Congruence.equality(n)
    principals = set()
    for a in range(n):
        for b in range(a + 1, n):
            principals.add(principal_closure(A, [(a, b)]))
    principals = sorted(principals)
    found = {bottom}
    found.update(principals)
    frontier = list(found)
    while frontier:
        new = []
        for c in frontier:
            for p in principals:
                if p.refines(c):
                    continue
                j = c.join(p)
                if j not in found:
                    found.add(j)
                    new.append(j)
                    if len(found) > limits.max_congruences:
                        raise CapExceededError(
                            f"congruence count exceeds cap "
                            f"{limits.max_congruences}"
                        )
        frontier = new
    return list(found)


def congruence_lattice(A: GSet, limits: Limits = DEFAULT_LIMITS
                       ) -> tuple[FiniteLattice, list[Congruence]]:
    """The congruences of A under refinement, as an explicit lattice."""
    cons = all_congruences(A, limits)
    n = len(cons)
    if n > limits.max_iso_size * 8:
        raise CapExceededError(
            f"congruence lattice with {n} elements too large to materialize"
        )
    leq = []
    for i in range(n):
        mask = 0
        for j in range(n):
            if cons[i].refines(cons[j]):
                mask |= 1 << j
        leq.append(mask)
    labels = tuple(
        "|".join("".join(A.label(x) for x in b) for b in c.blocks())
        if A.size <= 6 else f"c{i}"
        for i, c in enumerate(cons)
    )
    return FiniteLattice(tuple(leq), labels), cons


# -- orbit-level structure of a congruence ----------------------------------------


class OrbitPairRelation(Enum):
    ISOLATED = "isolated"
    CONNECTS_ONLY = "connects-only"
    COLLAPSES = "collapses"


def orbit_relation(A: GSet, c: Congruence) -> Congruence:
    """The equivalence induced on orbit indices: two orbits are related iff
    equal or joined by some cross pair of c."""
    orbs = orbits(A)
    owner = [0] * A.size
    for oi, orb in enumerate(orbs):
        for x in orb:
            owner[x] = oi
    pairs = []
    for block in c.blocks():
        first = block[0]
        for x in block[1:]:
            if owner[x] != owner[first]:
                pairs.append((owner[first], owner[x]))
    return Congruence.from_pairs(len(orbs), pairs)


def orbit_pair_relation(A: GSet, c: Congruence, bi: int, ci: int
                        ) -> OrbitPairRelation:
    """Trichotomy for two distinct orbits: no cross pair, some cross pair
    without full collapse, or the union collapsed to one class."""
    if bi == ci:
        raise PreconditionError("orbits must be distinct")
    orbs = orbits(A)
    union = orbs[bi] + orbs[ci]
    labs = {c.labels[x] for x in union}
    if len(labs) == 1:
        return OrbitPairRelation.COLLAPSES
    cross = any(
        c.labels[x] == c.labels[y] for x in orbs[bi] for y in orbs[ci]
    )
    return (
        OrbitPairRelation.CONNECTS_ONLY if cross else OrbitPairRelation.ISOLATED
    )


def greedy_violation(A: GSet, c: Congruence) -> tuple[int, int] | None:
    """An orbit pair connected but not collapsed by c, or None.

    None means c is a greedy congruence: it collapses every orbit pair it
    connects.
    """
    orbs = orbits(A)
    rel = orbit_relation(A, c)
    for cls in rel.blocks():
        if len(cls) == 1:
            continue
        for bi in cls:
            for ci in cls:
                if bi < ci:
                    kind = orbit_pair_relation(A, c, bi, ci)
                    if kind is OrbitPairRelation.CONNECTS_ONLY:
                        return (bi, ci)
    return None


def is_greedy(A: GSet, c: Congruence) -> bool:
    return greedy_violation(A, c) is None


def greedy_congruences(A: GSet, cons=None,
                       limits: Limits = DEFAULT_LIMITS) -> list[Congruence]:
    if cons is None:
        cons = all_congruences(A, limits)
    return [c for c in cons if is_greedy(A, c)]


# -- the embedding of greedy congruences -------------------------------------------


def _embed_image(A: GSet, c: Congruence):
    orbs = orbits(A)
    return (orbit_relation(A, c),
            tuple(c.restrict(orb) for orb in orbs))


def _reconstruct_greedy(A: GSet, star: Congruence, restrictions) -> Congruence:
    """A greedy congruence is determined by its orbit relation and per-orbit
    restrictions: related orbits are fully collapsed."""
    orbs = orbits(A)
    pairs = []
    for cls in star.blocks():
        anchor = orbs[cls[0]][0]
        for oi in cls:
            for x in orbs[oi]:
                if x != anchor:
                    pairs.append((anchor, x))
    singles = {cls[0] for cls in star.blocks() if len(cls) == 1}
    out = Congruence.from_pairs(A.size, pairs)
    for oi in singles:
        orb = orbs[oi]
        r = restrictions[oi]
        extra = []
        for block in r.blocks():
            first = orb[block[0]]
            for pos in block[1:]:
                extra.append((first, orb[pos]))
        if extra:
            out = out.join(Congruence.from_pairs(A.size, extra))
    return out


@dataclass
class EmbeddingReport:
    ok: bool
    checked_elements: int
    checked_pairs: int
    method: str
    counterexample: dict | None = None


def greedy_embedding_check(A: GSet, cons=None,
                           limits: Limits = DEFAULT_LIMITS) -> EmbeddingReport:
    """Verify that the greedy congruences form a sublattice of Con(A) and
    that c -> (orbit relation, per-orbit restrictions) embeds it into the
    product of the orbit-set equivalence lattice with the orbit congruence
    lattices, preserving joins and meets componentwise.

    Injectivity is checked per element by reconstructing c from its image;
    closure and preservation are checked on all pairs.
    """
    if cons is None:
        cons = all_congruences(A, limits)
    greedy = [c for c in cons if is_greedy(A, c)]
    greedy_set = set(greedy)
    orbs = orbits(A)

    for c in greedy:
        star, restr = _embed_image(A, c)
        if _reconstruct_greedy(A, star, restr) != c:
            return EmbeddingReport(
                False, len(greedy), 0, "full",
                {"kind": "not-reconstructible", "labels": c.labels},
            )

    images = {c: _embed_image(A, c) for c in greedy}
    pairs_checked = 0
    for i, a in enumerate(greedy):
        star_a, restr_a = images[a]
        for b in greedy[i:]:
            star_b, restr_b = images[b]
            j, m = a.join(b), a.meet(b)
            pairs_checked += 1
            if j not in greedy_set or m not in greedy_set:
                return EmbeddingReport(
                    False, len(greedy), pairs_checked, "full",
                    {"kind": "not-closed", "a": a.labels, "b": b.labels},
                )
            exp_j = (star_a.join(star_b),
                     tuple(ra.join(rb) for ra, rb in zip(restr_a, restr_b)))
            exp_m = (star_a.meet(star_b),
                     tuple(ra.meet(rb) for ra, rb in zip(restr_a, restr_b)))
            if images[j] != exp_j or images[m] != exp_m:
                return EmbeddingReport(
                    False, len(greedy), pairs_checked, "full",
                    {"kind": "not-preserved", "a": a.labels, "b": b.labels},
                )
    return EmbeddingReport(True, len(greedy), pairs_checked, "full")


# -- orbit isomorphism --------------------------------------------------------------


def orbit_isomorphism(A: GSet, bi: int, ci: int) -> dict[int, int] | None:
    """An action-equivariant bijection between two distinct orbits, or None.

    Tries every base-point image; complete because an equivariant map is
    determined by one value on a transitive piece.
    """
    if bi == ci:
        raise PreconditionError("orbits must be distinct")
    orbs = orbits(A)
    B, C = orbs[bi], orbs[ci]
    if len(B) != len(C):
        return None
    b0 = B[0]
    for c0 in C:
        phi = {}
        good = True
        for g in A.group.elements:
            src, dst = A.act(g, b0), A.act(g, c0)
            if src in phi and phi[src] != dst:
                good = False
                break
            phi[src] = dst
        if not good or len(phi) != len(B):
            continue
        if set(phi.values()) != set(C):
            continue
        if all(
            phi[A.act(g, x)] == A.act(g, phi[x])
            for g in A.group.elements for x in B
        ):
            return phi
    return None


# -- serialization --------------------------------------------------------------------


def congruence_to_json(A: GSet, c: Congruence) -> str:
    return json.dumps({
        "carrier": [A.label(i) for i in range(A.size)],
        "blocks": [list(b) for b in c.blocks()],
    })


def congruence_from_json(text: str) -> tuple[list[str], Congruence]:
    data = json.loads(text)
    carrier = data["carrier"]
    c = Congruence.from_blocks(len(carrier), data["blocks"])
    return carrier, c
