"""Balanced-identity deduction at fixed letter multiset.

Rewriting uses the elementary derivation step of semigroup equational logic:
w = a.phi(u).b  ->  a.phi(v).b for an identity u = v (either direction),
where phi maps letters to non-empty words and the contexts a, b may be
empty.  Balanced identities preserve exact letter counts, so every
derivation between words of one transversal stays inside that transversal;
closing the one-step relation on a transversal therefore computes the
restriction there of the fully invariant congruence the identities generate.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .gset import Congruence
from .limits import DEFAULT_LIMITS, Limits
from .partition import Partition, all_partitions, padded, padding_depth
from .word import BalancedIdentity, Word, transversal, word_str, parse_identity


@dataclass(frozen=True)
class IdentitySet:
    """A finite set of balanced identities, canonically ordered, with trivial
    u = u members dropped."""

    identities: tuple[BalancedIdentity, ...]

    def __init__(self, identities):
        keep = sorted({i for i in identities if i.lhs != i.rhs})
        object.__setattr__(self, "identities", tuple(keep))

    def __iter__(self):
        return iter(self.identities)

    def __len__(self):
        return len(self.identities)

    def union(self, other: "IdentitySet") -> "IdentitySet":
        return IdentitySet(self.identities + other.identities)


@dataclass(frozen=True)
class InducedCongruence:
    part: Partition
    words: tuple[Word, ...]
    congruence: Congruence


def _match_instances(w: Word, u: Word):
    """All (start, end, phi) with w[start:end] == phi(u) for a letter-to-word
    substitution phi with non-empty images.  Exhaustive backtracking over cut
    points; repeated letters must reuse their bound image."""
    n, m = len(w), len(u)
    if m > n:
        return
    for start in range(n - m + 1):
        stack = [(0, start, {})]
        while stack:
            pos_u, pos_w, phi = stack.pop()
            if pos_u == m:
                yield start, pos_w, phi
                continue
            letter = u[pos_u]
            rest = m - pos_u - 1
            bound = phi.get(letter)
            if bound is not None:
                L = len(bound)
                if pos_w + L + rest <= n and w[pos_w:pos_w + L] == bound:
                    stack.append((pos_u + 1, pos_w + L, phi))
            else:
                max_len = n - pos_w - rest
                for L in range(1, max_len + 1):
                    nxt = dict(phi)
                    nxt[letter] = w[pos_w:pos_w + L]
                    stack.append((pos_u + 1, pos_w + L, nxt))


def one_step_rewrites(w: Word, E: IdentitySet) -> set[Word]:
    """Words reachable from w by one application of an identity of E, in
    either direction.  Every result has the same letter counts as w."""
    out: set[Word] = set()
    counts = Counter(w)
    for ident in E:
        for u, v in ((ident.lhs, ident.rhs), (ident.rhs, ident.lhs)):
            for start, end, phi in _match_instances(w, u):
                image = []
                for letter in v:
                    image.extend(phi[letter])
                result = w[:start] + tuple(image) + w[end:]
                if result != w:
                    if Counter(result) != counts:
                        raise AssertionError(
                            f"rewrite changed letter counts: "
                            f"{word_str(w)} -> {word_str(result)}"
                        )
                    out.add(result)
    return out


def induced_congruence(E: IdentitySet, p: Partition,
                       limits: Limits = DEFAULT_LIMITS) -> InducedCongruence:
    """The finest equivalence on the transversal of p containing every
    one-step rewrite edge.  One union-find pass suffices: the edge relation
    is symmetric and union-find supplies transitivity."""
    words = transversal(p, limits).words
    index = {w: i for i, w in enumerate(words)}
    pairs = []
    for i, w in enumerate(words):
        for result in one_step_rewrites(w, E):
            j = index.get(result)
            if j is None:
                raise AssertionError(
                    f"rewrite left the transversal: {word_str(result)}"
                )
            pairs.append((i, j))
    return InducedCongruence(p, words, Congruence.from_pairs(len(words), pairs))


def transversal_identity_set(p: Partition,
                             limits: Limits = DEFAULT_LIMITS) -> IdentitySet:
    """Identities between the first word of the transversal and every other;
    a generating set equivalent to all pairs."""
    words = transversal(p, limits).words
    first = words[0]
    return IdentitySet(BalancedIdentity(first, w) for w in words[1:])


def greedy_variety_identity_set(p: Partition,
                                limits: Limits = DEFAULT_LIMITS) -> IdentitySet:
    """Union of the transversal identity sets of p and its unit-padded
    companions, up to padding_depth(p) extra parts.  Generates the canonical
    greedy variety attached to p (the meet of the padded slice varieties is
    given by the union of their identity sets)."""
    out = IdentitySet(())
    for i in range(padding_depth(p) + 1):
        out = out.union(transversal_identity_set(padded(p, i), limits))
    return out


def reduces(E: IdentitySet, p: Partition,
            limits: Limits = DEFAULT_LIMITS) -> bool:
    """True iff the induced congruence on the transversal of p is not the
    equality relation."""
    return not induced_congruence(E, p, limits).congruence.is_equality()


def collapses(E: IdentitySet, p: Partition,
              limits: Limits = DEFAULT_LIMITS) -> bool:
    """True iff the induced congruence is the universal relation."""
    return induced_congruence(E, p, limits).congruence.is_universal()


def is_greedy_up_to(E: IdentitySet, n_max: int,
                    limits: Limits = DEFAULT_LIMITS
                    ) -> tuple[bool, Partition | None]:
    """Bounded greediness: every transversal with total <= n_max that E
    reduces must be collapsed.  Returns (True, None) or (False, witness).
    A True result certifies greediness only up to length n_max."""
    if n_max > limits.max_identity_length:
        raise ValueError(
            f"bound {n_max} exceeds length cap {limits.max_identity_length}"
        )
    for p in all_partitions(n_max):
        c = induced_congruence(E, p, limits).congruence
        if not c.is_equality() and not c.is_universal():
            return False, p
    return True, None


def parse_identity_file(text: str) -> IdentitySet:
    """One identity per line, '<word>=<word>'; blank lines and lines starting
    with '#' are ignored.  Non-balanced identities are rejected."""
    idents = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            idents.append(parse_identity(line))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return IdentitySet(idents)
