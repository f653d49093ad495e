"""Classification of cancellable congruences on finite G-sets.

For a non-transitive G-set with coinciding stabilizers, the only cancellable
members of the congruence lattice are the equality and universal relations.
This module certifies that computationally: every other congruence gets an
explicit witness pair (beta, gamma) with

    alpha v beta == alpha v gamma,  alpha ^ beta == alpha ^ gamma,  beta != gamma,

validated by direct computation.  The witness recipes split on the orbit
structure of alpha:

  * alpha connects two orbits without collapsing them: keep alpha but
    inflate one side's restriction to full, either way round;
  * alpha is greedy with exactly one linked orbit class: collapse the
    complement together with one of two linked orbits;
  * alpha is greedy with two or more linked classes: alpha then fails the
    modular law, and a modularity violation converts into a cancellation
    witness pair;
  * alpha isolates every orbit but is nontrivial on one: pair that orbit
    with an isomorphic copy through two different equivariant maps.

Congruence lattices here explode combinatorially (a free order-2 action with
15 orbits already has ~7.2e12 congruences), so besides the full sweep there
is a reduced sweep over representatives of congruence classes modulo G-set
automorphisms.  For a free action, a congruence is determined by a partition
of the orbit set plus, per class, a subgroup and a coset vector; orbit
relabelings and per-orbit translations reduce that to (class sizes, subgroup
up to conjugacy), which is a small list even when the lattice is huge.  The
parametrized count is cross-validated against honest enumeration on small
carriers by the test suite.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from math import comb

from .gset import (
    Congruence,
    GSet,
    all_congruences,
    collapse_congruence,
    greedy_violation,
    is_congruence,
    is_free,
    is_transitive,
    orbit_isomorphism,
    orbit_relation,
    orbits,
    principal_closure,
    stabilizer,
)
from .limits import DEFAULT_LIMITS, CapExceededError, Limits, PreconditionError
from .permgroup import all_subgroups, subgroup_conjugacy_classes


class WitnessError(AssertionError):
    """A witness recipe failed to validate; indicates a bug, never ignored."""


@dataclass(frozen=True)
class CancellationWitness:
    beta: Congruence
    gamma: Congruence
    recipe: str


def _validated(A: GSet, alpha: Congruence, beta: Congruence,
               gamma: Congruence, recipe: str) -> CancellationWitness:
    if beta == gamma:
        raise WitnessError(f"{recipe}: witnesses coincide")
    if not is_congruence(A, beta) or not is_congruence(A, gamma):
        raise WitnessError(f"{recipe}: witness is not a congruence")
    if alpha.join(beta) != alpha.join(gamma):
        raise WitnessError(f"{recipe}: joins differ")
    if alpha.meet(beta) != alpha.meet(gamma):
        raise WitnessError(f"{recipe}: meets differ")
    return CancellationWitness(beta, gamma, recipe)


def noncancellable_witness(A: GSet, alpha: Congruence
                           ) -> CancellationWitness | None:
    """A validated cancellation-law violation for alpha, or None when alpha
    is the equality or universal congruence (which are always cancellable:
    the bottom satisfies bottom v y == y, the top dually)."""
    if alpha.is_equality() or alpha.is_universal():
        return None
    pair = greedy_violation(A, alpha)
    if pair is not None:
        return _case_not_greedy(A, alpha, pair)
    star = orbit_relation(A, alpha)
    linked = [cls for cls in star.blocks() if len(cls) > 1]
    if len(linked) == 1:
        return _case_single_linked_class(A, alpha, linked[0])
    if len(linked) >= 2:
        return _case_two_linked_classes(A, alpha, linked[0], linked[1])
    return _case_isolating(A, alpha)


def _case_not_greedy(A, alpha, pair) -> CancellationWitness:
    bi, ci = pair
    orbs = orbits(A)
    B, C = set(orbs[bi]), set(orbs[ci])
    for side in (B, C):
        if len({alpha.labels[x] for x in side}) == 1:
            raise WitnessError(
                "connected-not-collapsed orbit pair has a collapsed side"
            )

    def inflated(full_side, kept_side):
        labels = []
        for x in range(A.size):
            if x in full_side:
                labels.append(("full",))
            elif x in kept_side:
                labels.append(("kept", alpha.labels[x]))
            else:
                labels.append(("out", alpha.labels[x]))
        return Congruence.from_raw_labels(labels)

    beta = inflated(B, C)
    gamma = inflated(C, B)
    return _validated(A, alpha, beta, gamma, "not-greedy")


def _case_single_linked_class(A, alpha, linked) -> CancellationWitness:
    orbs = orbits(A)
    outside = [oi for oi in range(len(orbs)) if oi not in set(linked)]
    if not outside:
        raise WitnessError("linked class spans all orbits yet alpha != top")
    xi, yi = linked[0], linked[1]
    rest = [p for oi in outside for p in orbs[oi]]
    xbar, ybar = list(orbs[xi]), list(orbs[yi])
    beta = collapse_congruence(A, rest + xbar).join(
        collapse_congruence(A, ybar))
    gamma = collapse_congruence(A, rest + ybar).join(
        collapse_congruence(A, xbar))
    return _validated(A, alpha, beta, gamma, "single-linked-class")


def _case_two_linked_classes(A, alpha, n1, n2) -> CancellationWitness:
    orbs = orbits(A)
    p, q = n1[0], n1[1]
    r, t = n2[0], n2[1]
    y = collapse_congruence(A, list(orbs[p]) + list(orbs[r]))
    z = y.join(collapse_congruence(A, list(orbs[q]) + list(orbs[t])))
    # alpha violates the modular law at y <= z; the standard conversion
    # turns that into a cancellation witness pair.
    u = alpha.join(y).meet(z)
    v = alpha.meet(z).join(y)
    if u == v:
        raise WitnessError("expected modular-law violation did not appear")
    return _validated(A, alpha, u, v, "two-linked-classes")


def _case_isolating(A, alpha) -> CancellationWitness:
    orbs = orbits(A)
    target = None
    for oi, orb in enumerate(orbs):
        if len({alpha.labels[x] for x in orb}) < len(orb):
            target = oi
            break
    if target is None:
        raise WitnessError("isolating congruence with trivial restrictions "
                           "should have been the equality relation")
    orb = orbs[target]
    rel_pair = None
    for i, x in enumerate(orb):
        for y in orb[i + 1:]:
            if alpha.relates(x, y):
                rel_pair = (x, y)
                break
        if rel_pair:
            break
    assert rel_pair is not None
    other = 0 if target != 0 else 1
    phi = orbit_isomorphism(A, target, other)
    if phi is None:
        raise WitnessError("isomorphic-orbit hypothesis failed")
    x, y = rel_pair
    beta = principal_closure(A, [(x, phi[x])])
    gamma = principal_closure(A, [(x, phi[y])])
    return _validated(A, alpha, beta, gamma, "isolating")


# -- free-action congruence parametrization ------------------------------------


def _int_partitions(k: int):
    """Non-increasing positive tuples summing to k."""
    def rec(remaining, bound):
        if remaining == 0:
            yield ()
            return
        for part in range(min(bound, remaining), 0, -1):
            for rest in rec(remaining - part, part):
                yield (part,) + rest

    yield from rec(k, k)


def _left_cosets(group, subgroup_elements):
    from .permgroup import compose

    seen = set()
    out = []
    for g in group.elements:
        if g in seen:
            continue
        coset = tuple(sorted(compose(g, h) for h in subgroup_elements))
        seen.update(coset)
        out.append(coset)
    return out


def congruence_from_classes(A: GSet, classes) -> Congruence:
    """Instantiate a congruence of a free G-set from per-class data.

    classes: iterable of (orbit index tuple, subgroup element tuple).  The
    class block through the lead base points is {g(b_i) : g in H}; its
    translates under left cosets of H tile the class union.
    """
    orbs = orbits(A)
    base = [o[0] for o in orbs]
    blocks = []
    for orb_idxs, H_elems in classes:
        for coset in _left_cosets(A.group, H_elems):
            blocks.append(
                [A.act(g, base[oi]) for g in coset for oi in orb_idxs]
            )
    return Congruence.from_blocks(A.size, blocks)


def reduced_congruence_types(A: GSet, greedy_only: bool = False,
                             limits: Limits = DEFAULT_LIMITS):
    """Representatives of Con(A) modulo G-set automorphisms, for free A.

    Orbit relabelings realize any class pattern of a given size multiset and
    per-orbit translations normalize coset vectors, so a representative is
    determined by class sizes plus one subgroup (up to conjugacy) per class.
    With greedy_only, classes of size >= 2 are forced to full collapse.
    """
    if not is_free(A):
        raise PreconditionError("reduced sweep requires a free action")
    G = A.group
    k = len(orbits(A))
    reps = [cls[0].elements for cls in subgroup_conjugacy_classes(G, limits)]
    emitted = 0
    for mu in _int_partitions(k):
        sizes = Counter(mu)
        per_size = []
        for s in sorted(sizes):
            if greedy_only and s >= 2:
                options = [G.elements]
            else:
                options = reps
            per_size.append(
                (s, list(combinations_with_replacement(options, sizes[s])))
            )
        for combo in product(*(choices for _, choices in per_size)):
            assignment = []
            next_orbit = 0
            for (s, _), chosen in zip(per_size, combo):
                for H_elems in chosen:
                    assignment.append(
                        (tuple(range(next_orbit, next_orbit + s)), H_elems)
                    )
                    next_orbit += s
            emitted += 1
            if emitted > limits.max_orbit_types:
                raise CapExceededError(
                    f"orbit-type sweep exceeds cap {limits.max_orbit_types}"
                )
            yield assignment


def predicted_congruence_count(A: GSet, limits: Limits = DEFAULT_LIMITS) -> int:
    """|Con(A)| for a free action, from the class parametrization.

    A class of c orbits carries sum over subgroups H of [G:H]^(c-1) choices;
    the total is the corresponding partition-sum over the orbit set.
    """
    if not is_free(A):
        raise PreconditionError("count formula requires a free action")
    G = A.group
    k = len(orbits(A))
    subs = all_subgroups(G, limits)

    def per_class(c: int) -> int:
        return sum((G.order // H.order) ** (c - 1) for H in subs)

    table = [1]
    for n in range(1, k + 1):
        table.append(
            sum(
                comb(n - 1, j - 1) * per_class(j) * table[n - j]
                for j in range(1, n + 1)
            )
        )
    return table[k]


# -- transporters and automorphism shifts ------------------------------------------


def _transporters(A: GSet):
    """For a free action: t[x] is the unique g with g(base of x's orbit) = x."""
    trans = [None] * A.size
    for orb in orbits(A):
        b = orb[0]
        for g in A.group.elements:
            trans[A.act(g, b)] = g
    return trans


def shift_congruence(A: GSet, c: Congruence, shift: int) -> Congruence:
    """Image of c under the automorphism rotating orbits by `shift`.

    Free actions only: the rotation maps g(b_i) to g(b_{i+shift mod k}),
    which is equivariant, so congruences map to congruences.
    """
    orbs = orbits(A)
    k = len(orbs)
    trans = _transporters(A)
    base = [o[0] for o in orbs]
    owner = [0] * A.size
    for oi, orb in enumerate(orbs):
        for x in orb:
            owner[x] = oi
    new = [None] * A.size
    for x in range(A.size):
        image = A.act(trans[x], base[(owner[x] + shift) % k])
        new[image] = c.labels[x]
    return Congruence.from_raw_labels(new)


# -- classification sweeps -----------------------------------------------------------


@dataclass
class CancellabilityReport:
    method: str
    congruence_count: int
    swept: int
    witnesses_validated: int
    ok: bool
    cancellable: tuple[Congruence, ...]
    failure: dict | None = None


def classify_cancellable_congruences(A: GSet, limits: Limits = DEFAULT_LIMITS,
                                     mode: str = "auto",
                                     full_sweep_cap: int = 20_000
                                     ) -> CancellabilityReport:
    """Certify that the cancellable congruences of A are exactly the equality
    and universal relations.

    Requires a non-transitive action with coinciding stabilizers.  In full
    mode every congruence is swept; in reduced mode (huge lattices over free
    actions) one representative per automorphism class is swept, which
    suffices because G-set automorphisms induce lattice automorphisms of
    Con(A) and cancellability is isomorphism-invariant.
    """
    if is_transitive(A):
        raise PreconditionError("classification needs a non-transitive action")
    stabs = {stabilizer(A, x) for x in range(A.size)}
    if len(stabs) != 1:
        raise PreconditionError("classification needs coinciding stabilizers")

    if mode == "auto":
        if is_free(A):
            total = predicted_congruence_count(A, limits)
            mode = "full" if total <= full_sweep_cap else "reduced"
        else:
            mode = "full"

    if mode == "full":
        cons = all_congruences(A, limits)
        total = len(cons)
        sweep = cons
    elif mode == "reduced":
        total = predicted_congruence_count(A, limits)
        sweep = [
            congruence_from_classes(A, assignment)
            for assignment in reduced_congruence_types(A, limits=limits)
        ]
    else:
        raise ValueError(f"unknown mode {mode!r}")

    validated = 0
    for alpha in sweep:
        witness = noncancellable_witness(A, alpha)
        if witness is None:
            if not (alpha.is_equality() or alpha.is_universal()):
                return CancellabilityReport(
                    mode, total, len(sweep), validated, False, (),
                    {"kind": "unwitnessed", "labels": alpha.labels},
                )
        else:
            validated += 1
    bottom = Congruence.equality(A.size)
    top = Congruence.universal(A.size)
    return CancellabilityReport(
        mode, total, len(sweep), validated, True, (bottom, top)
    )


def brute_force_cancellable_set(cons: list[Congruence]) -> list[Congruence]:
    """Cancellable members of a congruence set by the raw definition: no pair
    y != z agreeing on join and meet with x.  Quadratic per element; the
    independent oracle for the witness-based classification."""
    out = []
    for x in cons:
        seen = {}
        good = True
        for y in cons:
            key = (x.join(y), x.meet(y))
            if key in seen:
                good = False
                break
            seen[key] = y
        if good:
            out.append(x)
    return out
