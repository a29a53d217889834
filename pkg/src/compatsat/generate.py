"""Seeded random k-SAT instances and the worked-example formulas.

Randomness comes from SplitMix64 (Steele, Lea and Flood, 2014), written out
here so a seed yields the same formula on every platform and in any language:

    state  = (state + 0x9E3779B97F4A7C15) mod 2**64
    z      = state
    z      = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z      = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    output = z ^ (z >> 31)

Bounded draws use rejection: for a bound ``b`` outputs ``x >= 2**64 - (2**64 mod b)``
are discarded and ``x mod b`` is returned. A clause picks its ``k`` variables
by a partial Fisher-Yates shuffle of ``[1..n]`` (position ``i`` swaps with
``i + below(n - i)``), then draws one word per literal and negates the
literal when the top bit of that word is set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cnf import MAX_WIDTH, Formula

_MASK = (1 << 64) - 1


class InvalidSpec(ValueError):
    pass


class UnknownId(KeyError):
    pass


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    k: int
    seed: int = 0
    distinct_clauses: bool = False

    def __post_init__(self):
        if not 1 <= self.k <= min(self.n, MAX_WIDTH):
            raise InvalidSpec(f"need 1 <= k <= min(n, {MAX_WIDTH}); got k={self.k}, n={self.n}")
        if self.m < 0:
            raise InvalidSpec(f"m must be nonnegative, got {self.m}")
        if not 0 <= self.seed <= _MASK:
            raise InvalidSpec("seed must be an unsigned 64-bit integer")


def random_ksat(spec: GenSpec) -> Formula:
    """Uniform random k-SAT. With ``distinct_clauses`` repeated clauses are redrawn."""
    rng = SplitMix64(spec.seed)
    if spec.distinct_clauses:
        from math import comb

        if spec.m > comb(spec.n, spec.k) * 2**spec.k:
            raise InvalidSpec("more distinct clauses requested than exist")
    clauses: list[list[int]] = []
    seen: set[tuple[int, ...]] = set()
    while len(clauses) < spec.m:
        pool = list(range(1, spec.n + 1))
        lits = []
        for i in range(spec.k):
            j = i + rng.below(spec.n - i)
            pool[i], pool[j] = pool[j], pool[i]
            lits.append(pool[i])
        lits = [-v if rng.next_u64() >> 63 else v for v in lits]
        if spec.distinct_clauses:
            key = tuple(sorted(lits))
            if key in seen:
                continue
            seen.add(key)
        clauses.append(lits)
    return Formula.from_ints(clauses, spec.n)


# p=1, q=2, r=3, s=4; x=1 for the contradiction
_EX4_F1 = [
    [1, 2, 3],
    [1, 2, -3],
    [1, -2, 3],
    [1, -2, -3],
    [-1, 2, 3],
    [-1, 2, -3],
    [-1, -2, 3],
]

WORKED_EXAMPLES: dict[str, tuple[list[list[int]], int]] = {
    "ex1": ([[1, 2, 3], [-1, 2, -3], [1, -2, 4], [-1, -3, -4]], 4),
    "ex2": ([[1, 2, 3], [1, 2, -3], [-1, 4], [-1, -4], [-2]], 4),
    "ex3": ([[-1], [-2], [-3], [1, 2], [1, 3], [2, 3]], 3),
    "ex4_f1": (_EX4_F1, 3),
    "ex4_f2": (_EX4_F1 + [[-1, -2, -3]], 3),
    "contradiction": ([[1], [-1]], 1),
}


def paper_example(name: str) -> Formula:
    try:
        clauses, n = WORKED_EXAMPLES[name]
    except KeyError:
        raise UnknownId(f"unknown example {name!r}; choose from {sorted(WORKED_EXAMPLES)}") from None
    return Formula.from_ints(clauses, n)
