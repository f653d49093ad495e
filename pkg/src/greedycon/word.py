"""Words over a countable alphabet of 1-based letter indices.

A word is a plain tuple of positive ints.  The transversal of a partition p
collects every word whose count of letter i equals the i-th part, i.e. the
distinct arrangements of the multiset 1^p1 2^p2 ... m^pm, in lexicographic
order.
"""

from collections import Counter
from dataclasses import dataclass

from .limits import DEFAULT_LIMITS, CapExceededError, Limits
from .partition import Partition, transversal_size

Word = tuple[int, ...]


def letter_count(w: Word, i: int) -> int:
    """Occurrences of letter i in w."""
    if i < 1:
        raise ValueError("letters are 1-based")
    return sum(1 for x in w if x == i)


def content(w: Word) -> frozenset[int]:
    """The set of letters occurring in w."""
    return frozenset(w)


def partition_of(w: Word) -> Partition:
    """Multiset of nonzero letter counts, sorted non-increasingly."""
    counts = sorted(Counter(w).values(), reverse=True)
    return Partition(tuple(counts))


def is_balanced(u: Word, v: Word) -> bool:
    """True iff every letter occurs equally often in u and v."""
    return Counter(u) == Counter(v)


@dataclass(frozen=True, order=True)
class BalancedIdentity:
    """A two-sided identity whose sides share all letter counts."""

    lhs: Word
    rhs: Word

    def __post_init__(self):
        if not self.lhs or not self.rhs:
            raise ValueError("identity sides must be non-empty")
        if min(min(self.lhs), min(self.rhs)) < 1:
            raise ValueError("letters are 1-based")
        if not is_balanced(self.lhs, self.rhs):
            raise ValueError(
                f"identity is not balanced: {word_str(self.lhs)} = {word_str(self.rhs)}"
            )

    def __str__(self) -> str:
        return f"{word_str(self.lhs)}={word_str(self.rhs)}"


@dataclass(frozen=True)
class Transversal:
    """All words realizing one partition, in lexicographic order."""

    part: Partition
    words: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


def transversal(p: Partition, limits: Limits = DEFAULT_LIMITS) -> Transversal:
    """The words w with letter_count(w, i) == p.parts[i-1] for every i.

    Requires p to be a genuine slice member (2 <= m <= n) and the word count
    to fit under limits.max_carrier.
    """
    n, m = p.total, p.num_parts
    if m < 2 or m > n:
        raise ValueError(f"partition {p} lies outside the 2 <= m <= n range")
    size = transversal_size(p)
    if size > limits.max_carrier:
        raise CapExceededError(
            f"transversal of {p} has {size} words > cap {limits.max_carrier}"
        )

    words: list[Word] = []
    counts = list(p.parts)

    def rec(prefix: list[int], remaining: int):
        if remaining == 0:
            words.append(tuple(prefix))
            return
        for letter in range(1, m + 1):
            if counts[letter - 1] > 0:
                counts[letter - 1] -= 1
                prefix.append(letter)
                rec(prefix, remaining - 1)
                prefix.pop()
                counts[letter - 1] += 1

    rec([], n)
    return Transversal(p, tuple(words))


def apply_permutation(perm: tuple[int, ...], w: Word) -> Word:
    """Replace every occurrence of letter i by perm[i-1]."""
    m = len(perm)
    if any(x > m for x in w):
        raise ValueError(f"word {word_str(w)} has a letter outside 1..{m}")
    return tuple(perm[x - 1] for x in w)


def word_str(w: Word) -> str:
    """Digit string when all letters fit one digit, else comma-separated."""
    if all(x <= 9 for x in w):
        return "".join(str(x) for x in w)
    return ",".join(str(x) for x in w)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        raise ValueError("empty word")
    if "," in text:
        w = tuple(int(tok) for tok in text.split(","))
    else:
        w = tuple(int(ch) for ch in text)
    if any(x < 1 for x in w):
        raise ValueError(f"letters must be positive in {text!r}")
    return w


def parse_identity(text: str) -> BalancedIdentity:
    if text.count("=") != 1:
        raise ValueError(f"identity must be <word>=<word>, got {text!r}")
    left, right = text.split("=")
    return BalancedIdentity(parse_word(left), parse_word(right))
