"""Finite lattices and the special-element predicates.

A FiniteLattice stores its order relation as bitmask rows plus join/meet
tables recomputed and verified at construction, so the predicates are pure
table lookups.  Element classification covers the seven flavors (cancellable,
distributive, codistributive, standard, costandard, modular, neutral), each
with the lexicographically first violating witness when false.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .limits import DEFAULT_LIMITS, CapExceededError, Limits


class NotALatticeError(ValueError):
    pass


@dataclass(frozen=True)
class ElementClassification:
    element: int
    cancellable: bool
    distributive: bool
    codistributive: bool
    standard: bool
    costandard: bool
    modular: bool
    neutral: bool
    witnesses: dict

    def flags(self) -> dict:
        return {
            "cancellable": self.cancellable,
            "distributive": self.distributive,
            "codistributive": self.codistributive,
            "standard": self.standard,
            "costandard": self.costandard,
            "modular": self.modular,
            "neutral": self.neutral,
        }


class FiniteLattice:
    """Lattice on elements 0..size-1 given by a reflexive order relation.

    leq is a tuple of int bitmasks: bit j of leq[i] set iff i <= j.
    Join and meet tables are derived at construction; construction fails if
    some pair lacks a least upper bound or greatest lower bound.
    """

    def __init__(self, leq: tuple[int, ...], labels: tuple | None = None):
        n = len(leq)
        self.size = n
        self.leq = tuple(leq)
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels length mismatch")
        self._check_partial_order()
        geq = [0] * n
        for i in range(n):
            for j in range(n):
                if (leq[i] >> j) & 1:
                    geq[j] |= 1 << i
        self.geq = tuple(geq)
        self.join = self._binop_table(self.leq)
        self.meet = self._binop_table(self.geq)

    # -- construction helpers ------------------------------------------------

    def _check_partial_order(self):
        n, leq = self.size, self.leq
        for i in range(n):
            if not (leq[i] >> i) & 1:
                raise NotALatticeError(f"order not reflexive at {i}")
        for i in range(n):
            for j in range(n):
                if i != j and (leq[i] >> j) & 1 and (leq[j] >> i) & 1:
                    raise NotALatticeError(f"order not antisymmetric at ({i},{j})")
        for i in range(n):
            mask = leq[i]
            acc = 0
            for j in range(n):
                if (mask >> j) & 1:
                    acc |= leq[j]
            if acc & ~mask:
                raise NotALatticeError(f"order not transitive above {i}")

    def _binop_table(self, up: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        # least element of the intersection of up-sets (or of down-sets for meet)
        n = len(up)
        least_of = {up[i]: i for i in range(n)}
        table = []
        for i in range(n):
            row = []
            for j in range(n):
                common = up[i] & up[j]
                k = least_of.get(common)
                if k is None:
                    raise NotALatticeError(
                        f"elements {i} and {j} have no least bound"
                    )
                row.append(k)
            table.append(tuple(row))
        return tuple(table)

    # -- basic structure -----------------------------------------------------

    def le(self, i: int, j: int) -> bool:
        return bool((self.leq[i] >> j) & 1)

    @property
    def bottom(self) -> int:
        for i in range(self.size):
            if self.leq[i] == (1 << self.size) - 1:
                return i
        raise NotALatticeError("no bottom element")

    @property
    def top(self) -> int:
        for i in range(self.size):
            if self.geq[i] == (1 << self.size) - 1:
                return i
        raise NotALatticeError("no top element")

    def covers(self) -> list[tuple[int, int]]:
        """Pairs (i, j) where j covers i."""
        out = []
        for i in range(self.size):
            for j in range(self.size):
                if i != j and self.le(i, j):
                    between = self.leq[i] & self.geq[j] & ~(1 << i) & ~(1 << j)
                    if between == 0:
                        out.append((i, j))
        return out

    def dual(self) -> "FiniteLattice":
        return FiniteLattice(self.geq, self.labels)

    # -- axioms --------------------------------------------------------------

    def verify_axioms(self) -> tuple[bool, tuple | None]:
        """Exact check of commutativity, associativity and absorption.

        Returns (True, None) or (False, first violating tuple).  The order
        axioms were already enforced at construction.
        """
        n, join, meet = self.size, self.join, self.meet
        for i in range(n):
            for j in range(n):
                if join[i][j] != join[j][i]:
                    return False, ("join-commutativity", i, j)
                if meet[i][j] != meet[j][i]:
                    return False, ("meet-commutativity", i, j)
                if join[i][meet[i][j]] != i:
                    return False, ("absorption", i, j)
                if meet[i][join[i][j]] != i:
                    return False, ("absorption-dual", i, j)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if join[join[i][j]][k] != join[i][join[j][k]]:
                        return False, ("join-associativity", i, j, k)
                    if meet[meet[i][j]][k] != meet[i][meet[j][k]]:
                        return False, ("meet-associativity", i, j, k)
        return True, None

    # -- special element predicates -------------------------------------------

    def is_cancellable(self, x: int) -> tuple[bool, tuple | None]:
        """No pair y != z may agree with x on both join and meet."""
        n, join, meet = self.size, self.join[x], self.meet[x]
        seen: dict[tuple[int, int], int] = {}
        for y in range(n):
            key = (join[y], meet[y])
            if key in seen:
                return False, (seen[key], y)
            seen[key] = y
        return True, None

    def is_distributive_element(self, x: int) -> tuple[bool, tuple | None]:
        n, join, meet = self.size, self.join, self.meet
        jx = join[x]
        for y in range(n):
            for z in range(n):
                if jx[meet[y][z]] != meet[jx[y]][jx[z]]:
                    return False, (y, z)
        return True, None

    def is_codistributive_element(self, x: int) -> tuple[bool, tuple | None]:
        n, join, meet = self.size, self.join, self.meet
        mx = meet[x]
        for y in range(n):
            for z in range(n):
                if mx[join[y][z]] != join[mx[y]][mx[z]]:
                    return False, (y, z)
        return True, None

    def is_standard_element(self, x: int) -> tuple[bool, tuple | None]:
        n, join, meet = self.size, self.join, self.meet
        jx, mx = self.join[x], self.meet[x]
        for y in range(n):
            for z in range(n):
                if meet[jx[y]][z] != join[mx[z]][meet[y][z]]:
                    return False, (y, z)
        return True, None

    def is_costandard_element(self, x: int) -> tuple[bool, tuple | None]:
        n, join, meet = self.size, self.join, self.meet
        jx, mx = self.join[x], self.meet[x]
        for y in range(n):
            for z in range(n):
                if join[mx[y]][z] != meet[jx[z]][join[y][z]]:
                    return False, (y, z)
        return True, None

    def is_modular_element(self, x: int) -> tuple[bool, tuple | None]:
        n, join, meet = self.size, self.join, self.meet
        jx, mx = self.join[x], self.meet[x]
        for y in range(n):
            for z in range(n):
                if self.le(y, z) and meet[jx[y]][z] != join[mx[z]][y]:
                    return False, (y, z)
        return True, None

    def is_neutral(self, x: int) -> tuple[bool, tuple | None]:
        """Median identity for all (y, z), cross-checked against the
        generated-sublattice characterization; the two must agree."""
        n, join, meet = self.size, self.join, self.meet
        result, witness = True, None
        for y in range(n):
            for z in range(n):
                med_j = meet[meet[join[x][y]][join[y][z]]][join[z][x]]
                med_m = join[join[meet[x][y]][meet[y][z]]][meet[z][x]]
                median_ok = med_j == med_m
                sublattice_ok = self._generated_distributive(x, y, z)
                if median_ok != sublattice_ok:
                    raise AssertionError(
                        f"neutrality characterizations disagree at x={x}, "
                        f"y={y}, z={z}: median={median_ok}, "
                        f"sublattice={sublattice_ok}"
                    )
                if not median_ok and result:
                    result, witness = False, (y, z)
        return result, witness

    def _generated_distributive(self, x: int, y: int, z: int) -> bool:
        sub = self._generated_sublattice(frozenset((x, y, z)))
        join, meet = self.join, self.meet
        for a in sub:
            for b in sub:
                jb = join[a][b]
                for c in sub:
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]:
                        return False
        return True

    def _generated_sublattice(self, gens: frozenset[int]) -> frozenset[int]:
        cache = getattr(self, "_sub_cache", None)
        if cache is None:
            cache = self._sub_cache = {}
        hit = cache.get(gens)
        if hit is not None:
            return hit
        join, meet = self.join, self.meet
        current = set(gens)
        while True:
            new = set()
            elems = list(current)
            for i, a in enumerate(elems):
                for b in elems[i:]:
                    j, m = join[a][b], meet[a][b]
                    if j not in current:
                        new.add(j)
                    if m not in current:
                        new.add(m)
            if not new:
                break
            current |= new
        result = frozenset(current)
        cache[gens] = result
        return result

    def classify(self, x: int) -> ElementClassification:
        canc, w_canc = self.is_cancellable(x)
        dist, w_dist = self.is_distributive_element(x)
        codist, w_codist = self.is_codistributive_element(x)
        std, w_std = self.is_standard_element(x)
        costd, w_costd = self.is_costandard_element(x)
        mod, w_mod = self.is_modular_element(x)
        neut, w_neut = self.is_neutral(x)
        witnesses = {}
        for name, ok, w in [
            ("cancellable", canc, w_canc),
            ("distributive", dist, w_dist),
            ("codistributive", codist, w_codist),
            ("standard", std, w_std),
            ("costandard", costd, w_costd),
            ("modular", mod, w_mod),
            ("neutral", neut, w_neut),
        ]:
            if not ok:
                witnesses[name] = w
        cls = ElementClassification(
            x, canc, dist, codist, std, costd, mod, neut, witnesses
        )
        _assert_hierarchy(cls)
        return cls

    def cancellable_elements(self) -> list[int]:
        return [x for x in range(self.size) if self.is_cancellable(x)[0]]

    def is_distributive_lattice(self) -> bool:
        return all(self.is_distributive_element(x)[0] for x in range(self.size))

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> str:
        rows = [[bool((self.leq[i] >> j) & 1) for j in range(self.size)]
                for i in range(self.size)]
        return json.dumps({"size": self.size, "leq": rows})

    @classmethod
    def from_json(cls, text: str) -> "FiniteLattice":
        data = json.loads(text)
        rows = data["leq"]
        if len(rows) != data["size"]:
            raise ValueError("size/leq mismatch")
        leq = tuple(
            sum(1 << j for j, v in enumerate(row) if v) for row in rows
        )
        return cls(leq)

    def to_dot(self, tooltips: dict[int, str] | None = None) -> str:
        lines = ["digraph lattice {", "  rankdir=BT;"]
        for i in range(self.size):
            label = str(self.labels[i]) if self.labels else str(i)
            tip = f' tooltip="{tooltips[i]}"' if tooltips and i in tooltips else ""
            lines.append(f'  n{i} [label="{label}"{tip}];')
        for i, j in self.covers():
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines)


def _assert_hierarchy(cls: ElementClassification):
    """neutral => standard & costandard; [co]standard => [co]distributive &
    cancellable; cancellable => modular."""
    checks = [
        (cls.neutral, cls.standard, "neutral->standard"),
        (cls.neutral, cls.costandard, "neutral->costandard"),
        (cls.standard, cls.distributive, "standard->distributive"),
        (cls.standard, cls.cancellable, "standard->cancellable"),
        (cls.costandard, cls.codistributive, "costandard->codistributive"),
        (cls.costandard, cls.cancellable, "costandard->cancellable"),
        (cls.cancellable, cls.modular, "cancellable->modular"),
    ]
    for premise, conclusion, name in checks:
        if premise and not conclusion:
            raise AssertionError(
                f"hierarchy violated at element {cls.element}: {name}"
            )


def lattice_from_le_pairs(n: int, pairs: set[tuple[int, int]],
                          labels: tuple | None = None) -> FiniteLattice:
    """Build a lattice from the set of (i, j) with i <= j (reflexive pairs
    implied)."""
    leq = [1 << i for i in range(n)]
    for i, j in pairs:
        leq[i] |= 1 << j
    return FiniteLattice(tuple(leq), labels)


def chain(n: int) -> FiniteLattice:
    leq = tuple(sum(1 << j for j in range(i, n)) for i in range(n))
    return FiniteLattice(leq)


def eq_lattice(k: int, limits: Limits = DEFAULT_LIMITS) -> FiniteLattice:
    """Lattice of all set partitions of {0..k-1} under refinement."""
    if k > limits.max_eq_points:
        raise CapExceededError(f"eq_lattice({k}) exceeds cap {limits.max_eq_points}")
    parts = list(_set_partitions(k))
    # refinement: p <= q iff every p-block is inside one q-block
    n = len(parts)
    leq = []
    for i in range(n):
        mask = 0
        for j in range(n):
            if _refines(parts[i], parts[j]):
                mask |= 1 << j
        leq.append(mask)
    labels = tuple("|".join("".join(map(str, b)) for b in p) for p in parts)
    return FiniteLattice(tuple(leq), labels)


def _set_partitions(k: int):
    """Canonical set partitions of range(k) via restricted growth strings."""
    def rec(i, labels, num):
        if i == k:
            blocks = [[] for _ in range(num)]
            for idx, lab in enumerate(labels):
                blocks[lab].append(idx)
            yield tuple(tuple(b) for b in blocks)
            return
        for lab in range(num):
            yield from rec(i + 1, labels + [lab], num)
        yield from rec(i + 1, labels + [num], num + 1)

    yield from rec(0, [], 0)


def _refines(p, q) -> bool:
    owner = {}
    for bi, block in enumerate(q):
        for x in block:
            owner[x] = bi
    return all(len({owner[x] for x in block}) == 1 for block in p)


# -- isomorphism ----------------------------------------------------------------


def _fingerprints(L: FiniteLattice) -> tuple[tuple, ...]:
    """Per-element isomorphism invariants, refined a few rounds."""
    n = L.size
    down = [bin(L.geq[i]).count("1") for i in range(n)]
    up = [bin(L.leq[i]).count("1") for i in range(n)]
    covers = L.covers()
    cov_up = [0] * n
    cov_down = [0] * n
    for i, j in covers:
        cov_up[i] += 1
        cov_down[j] += 1
    fp = [(down[i], up[i], cov_up[i], cov_down[i]) for i in range(n)]
    for _ in range(2):
        nxt = []
        for i in range(n):
            below = sorted(fp[j] for j in range(n) if L.le(j, i))
            above = sorted(fp[j] for j in range(n) if L.le(i, j))
            nxt.append((fp[i], tuple(below), tuple(above)))
        fp = nxt
    return tuple(fp)


def find_isomorphism(L1: FiniteLattice, L2: FiniteLattice,
                     limits: Limits = DEFAULT_LIMITS,
                     max_size: int | None = None) -> tuple[int, ...] | None:
    """An order isomorphism L1 -> L2 as an image tuple, or None."""
    cap = max_size if max_size is not None else limits.max_iso_size
    if L1.size > cap or L2.size > cap:
        raise CapExceededError(f"isomorphism search beyond size cap {cap}")
    if L1.size != L2.size:
        return None
    fp1, fp2 = _fingerprints(L1), _fingerprints(L2)
    if sorted(fp1) != sorted(fp2):
        return None
    n = L1.size
    candidates = [[j for j in range(n) if fp2[j] == fp1[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: len(candidates[i]))
    image: list[int | None] = [None] * n
    used = [False] * n

    def ok(i, j):
        for i2 in range(n):
            j2 = image[i2]
            if j2 is None:
                continue
            if L1.le(i, i2) != L2.le(j, j2) or L1.le(i2, i) != L2.le(j2, j):
                return False
        return True

    def backtrack(pos):
        if pos == n:
            return True
        i = order[pos]
        for j in candidates[i]:
            if not used[j] and ok(i, j):
                image[i] = j
                used[j] = True
                if backtrack(pos + 1):
                    return True
                image[i] = None
                used[j] = False
        return False

    if backtrack(0):
        return tuple(image)  # type: ignore[arg-type]
    return None


def find_anti_isomorphism(L1: FiniteLattice, L2: FiniteLattice,
                          limits: Limits = DEFAULT_LIMITS,
                          max_size: int | None = None) -> tuple[int, ...] | None:
    """An order-reversing bijection L1 -> L2, or None."""
    return find_isomorphism(L1.dual(), L2, limits, max_size)


# -- exhaustive small lattice generation ------------------------------------------


def all_lattices(max_size: int) -> list[FiniteLattice]:
    """Every lattice with 1..max_size elements, up to isomorphism.

    Posets are generated by repeatedly adding a maximal element (every poset
    arises this way), deduplicated by canonical form, then filtered to
    lattices.
    """
    out: list[FiniteLattice] = []
    seen_lattice = set()
    for leq in _all_posets(max_size):
        try:
            L = FiniteLattice(leq)
        except NotALatticeError:
            continue
        key = _canonical_key(leq)
        if key in seen_lattice:
            continue
        seen_lattice.add(key)
        out.append(L)
    return out


def _all_posets(max_size: int):
    """Canonical representatives of all posets with 1..max_size elements."""
    current = {(1,)}  # the 1-element poset: leq masks
    yield (1,)
    for n in range(2, max_size + 1):
        nxt = {}
        for leq in current:
            for ideal in _order_ideals(leq):
                new = _add_maximal(leq, ideal)
                key = _canonical_key(new)
                if key not in nxt:
                    nxt[key] = new
        current = set(nxt.values())
        yield from current


def _order_ideals(leq: tuple[int, ...]):
    """All down-closed subsets of the poset, as bitmasks."""
    n = len(leq)
    down = [0] * n
    for i in range(n):
        for j in range(n):
            if (leq[j] >> i) & 1:
                down[i] |= 1 << j
    ideals = set()
    for mask in range(1 << n):
        if all(not (mask >> i) & 1 or (down[i] & mask) == down[i]
               for i in range(n)):
            ideals.add(mask)
    return ideals


def _add_maximal(leq: tuple[int, ...], ideal: int) -> tuple[int, ...]:
    n = len(leq)
    new = [m for m in leq]
    top_bit = 1 << n
    for i in range(n):
        if (ideal >> i) & 1:
            new[i] |= top_bit
    new.append(top_bit)
    return tuple(new)


def _canonical_key(leq: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically smallest relabeling of the relation matrix.

    Brute force over fingerprint-compatible permutations; fine at n <= 7.
    """
    n = len(leq)
    down = [sum((leq[j] >> i) & 1 for j in range(n)) for i in range(n)]
    up = [bin(leq[i]).count("1") for i in range(n)]
    fp = [(down[i], up[i]) for i in range(n)]
    for _ in range(2):
        fp = [
            (fp[i],
             tuple(sorted(fp[j] for j in range(n) if (leq[j] >> i) & 1)),
             tuple(sorted(fp[j] for j in range(n) if (leq[i] >> j) & 1)))
            for i in range(n)
        ]
    groups: dict = {}
    for i in range(n):
        groups.setdefault(fp[i], []).append(i)
    ordered_groups = [groups[k] for k in sorted(groups.keys(), key=repr)]

    best: tuple[int, ...] | None = None

    def relabel(perm):
        out = [0] * n
        for i in range(n):
            mask = 0
            src = leq[perm[i]]
            for j in range(n):
                if (src >> perm[j]) & 1:
                    mask |= 1 << j
            out[i] = mask
        return tuple(out)

    def assignments(groups_left, acc):
        nonlocal best
        if not groups_left:
            cand = relabel(acc)
            if best is None or cand < best:
                best = cand
            return
        from itertools import permutations as iperm
        head, *rest = groups_left
        for p in iperm(head):
            assignments(rest, acc + list(p))

    assignments(ordered_groups, [])
    assert best is not None
    return best
