"""Finite abelian groups in invariant-factor form.

A group is a chain d_1 | d_2 | ... | d_k of invariant factors (each >= 2
after normalization), elements are coordinate tuples with coords[i] in
[0, d_i).  Generation probabilities come in two independent flavors: the
exact per-prime product formula, and an exhaustive tuple count used as
its oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence

from . import bounds
from .exactmat import ExactMatrix, _hnf_columns, det, snf_with_transforms, unimodular_columns
from .lattice import LatticeBasis

GroupElement = tuple[int, ...]


class FiniteAbelianGroup:
    """Z/d_1 x ... x Z/d_k with d_1 | d_2 | ... | d_k, all d_i >= 2.

    Invariant factors equal to 1 are dropped at construction, so k is
    always the minimal number of generators; the trivial group has an
    empty factor list.
    """

    __slots__ = ("invariant_factors",)

    def __init__(self, invariant_factors: Iterable[int]):
        factors = [int(d) for d in invariant_factors]
        if any(d < 1 for d in factors):
            raise ValueError("invariant factors must be positive")
        factors = [d for d in factors if d > 1]
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise ValueError(f"broken divisibility chain: {a} does not divide {b}")
        self.invariant_factors = tuple(factors)

    @property
    def order(self) -> int:
        result = 1
        for d in self.invariant_factors:
            result *= d
        return result

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    def element(self, coords: Sequence[int]) -> GroupElement:
        if len(coords) != self.ngens:
            raise ValueError("coordinate count mismatch")
        return tuple(int(c) % d for c, d in zip(coords, self.invariant_factors))

    def elements(self) -> Iterator[GroupElement]:
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return tuple(
            (x + y) % d for x, y, d in zip(a, b, self.invariant_factors)
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteAbelianGroup)
            and self.invariant_factors == other.invariant_factors
        )

    def __hash__(self) -> int:
        return hash(self.invariant_factors)

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({list(self.invariant_factors)!r})"


def quotient_group(
    basis: LatticeBasis, sub: Sequence[Sequence]
) -> tuple[FiniteAbelianGroup, Callable[[Sequence], GroupElement]]:
    """Quotient of a lattice by the full-rank sublattice spanned by ``sub``.

    ``sub`` must be n vectors of the lattice; its coordinate matrix C is
    diagonalized as U C V = diag(d_i) and the returned projection sends a
    lattice vector with coordinates x to (U x mod d) restricted to the
    nontrivial factors.  The group order equals |det C|, the sublattice
    index.
    """
    n = basis.dim
    if len(sub) != n:
        raise ValueError(f"need exactly {n} sublattice generators")
    coord_cols = [basis.coordinates(v) for v in sub]
    c = ExactMatrix.from_columns(coord_cols)
    if det(c) == 0:
        raise ValueError("sublattice generators are not full rank")
    divisors, u, _ = snf_with_transforms(c)
    group = FiniteAbelianGroup(divisors)
    kept = [i for i, d in enumerate(divisors) if d > 1]
    u_rows = u.to_rows()

    def projection(vector: Sequence) -> GroupElement:
        x = basis.coordinates(vector)
        return tuple(
            sum(u_rows[i][j] * x[j] for j in range(n)) % divisors[i] for i in kept
        )

    return group, projection


def lambda_t_pgroup(p: int, d: int, t: int) -> Fraction:
    """Probability that t uniform elements generate a p-group needing d
    generators: prod_{i=t-d+1}^{t} (1 - p^-i); zero when t < d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if t < 0:
        raise ValueError("t must be >= 0")
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if t < d:
        return Fraction(0)
    result = Fraction(1)
    for i in range(t - d + 1, t + 1):
        result *= 1 - Fraction(1, p**i)
    return result


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def _prime_factors(n: int) -> list[int]:
    primes = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            primes.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        primes.append(n)
    return primes


def generation_prob_exact(group: FiniteAbelianGroup, t: int) -> Fraction:
    """Exact probability that t uniform elements generate the group.

    Product over the primes p dividing the order of the p-group formula,
    where the p-part needs d_p = #{invariant factors divisible by p}
    generators.
    """
    k = group.ngens
    if t < 0:
        raise ValueError("t must be >= 0")
    if k == 0:
        return Fraction(1)
    if t < k:
        return Fraction(0)
    result = Fraction(1)
    for p in _prime_factors(group.invariant_factors[-1]):
        d_p = sum(1 for d in group.invariant_factors if d % p == 0)
        result *= lambda_t_pgroup(p, d_p, t)
    return result


def generates(group: FiniteAbelianGroup, elems: Iterable[Sequence[int]]) -> bool:
    """True iff the elements generate the group.

    Stacks the element coordinate columns next to diag(d_1..d_k); the
    subgroup is everything exactly when those columns generate Z^k.
    """
    k = group.ngens
    if k == 0:
        return True
    cols = [list(group.element(e)) for e in elems]
    for i, d in enumerate(group.invariant_factors):
        col = [0] * k
        col[i] = d
        cols.append(col)
    return unimodular_columns(cols, k)


def generation_prob_bruteforce(group: FiniteAbelianGroup, t: int) -> Fraction:
    """Exhaustive count of generating t-tuples over all |G|^t tuples.

    Counts by walking tuple prefixes and merging prefixes that span the
    same subgroup (the subgroup is kept as a canonical Hermite basis), so
    the count is exactly the naive enumeration's without repeating
    identical continuations.  Guarded to |G|^t <= 10^7 nominal tuples.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    order = group.order
    if order**t > 10**7:
        raise ValueError(f"brute force guard exceeded: |G|^t = {order ** t}")
    k = group.ngens
    if k == 0:
        return Fraction(1)
    if t < k:
        return Fraction(0)

    diag_cols = []
    for i, d in enumerate(group.invariant_factors):
        col = [0] * k
        col[i] = d
        diag_cols.append(col)

    def canonical(extra_cols: list[list[int]]) -> tuple:
        cols = [list(c) for c in extra_cols] + [list(c) for c in diag_cols]
        _hnf_columns(cols, k, None)
        return tuple(tuple(col) for col in cols[:k])

    identity_key = canonical(
        [[1 if i == j else 0 for i in range(k)] for j in range(k)]
    )
    start_key = canonical([])
    elements = [list(e) for e in group.elements()]

    levels: dict[tuple, int] = {start_key: 1}
    for _ in range(t):
        nxt: dict[tuple, int] = {}
        for key, count in levels.items():
            base_cols = [list(col) for col in key]
            for g in elements:
                new_key = canonical(base_cols + [g])
                nxt[new_key] = nxt.get(new_key, 0) + count
        levels = nxt
    return Fraction(levels.get(identity_key, 0), order**t)


# ---------------------------------------------------------------------------
# group library and the generation bound check
# ---------------------------------------------------------------------------


def _partitions(n: int, cap: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    cap = n if cap is None else min(cap, n)
    for first in range(cap, 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def abelian_groups_of_order(n: int) -> list[FiniteAbelianGroup]:
    """All abelian groups of order n, in invariant-factor form."""
    if n < 1:
        raise ValueError("order must be >= 1")
    if n == 1:
        return [FiniteAbelianGroup([])]
    factorization = {}
    m = n
    for p in _prime_factors(n):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        factorization[p] = e
    per_prime = []
    for p, e in factorization.items():
        per_prime.append([(p, part) for part in _partitions(e)])
    groups = []
    for combo in itertools.product(*per_prime):
        k = max(len(part) for _, part in combo)
        factors = []
        for i in range(k):
            d = 1
            for p, part in combo:
                if i < len(part):
                    d *= p ** part[i]
            factors.append(d)
        factors.reverse()  # exponents were descending; chain wants ascending
        groups.append(FiniteAbelianGroup(factors))
    return groups


def abelian_groups_up_to(max_order: int) -> list[FiniteAbelianGroup]:
    out = []
    for n in range(1, max_order + 1):
        out.extend(abelian_groups_of_order(n))
    return out


@dataclass
class Prop1Row:
    factors: tuple[int, ...]
    n: int
    t: int
    probability: Fraction
    bound_lower: Fraction
    ok: bool


@dataclass
class Prop1Report:
    rows: list[Prop1Row] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)


def proposition1_check(
    n_max: int, ctx: Optional[bounds.ZetaContext] = None
) -> Prop1Report:
    """Check that every n-generated library group is generated by n + 1
    uniform elements with probability at least the certified zeta-product
    lower bound (itself at least the infinite-product constant)."""
    ctx = ctx or bounds.default_context()
    report = Prop1Report()
    hat_lower = bounds.zeta_hat(ctx).lo
    for n in range(1, n_max + 1):
        bound_lower = bounds.ideal_probability(n, n + 1, ctx).lo
        assert bound_lower >= hat_lower
        for group in _library_groups(n):
            prob = generation_prob_exact(group, n + 1)
            report.rows.append(
                Prop1Row(
                    factors=group.invariant_factors,
                    n=n,
                    t=n + 1,
                    probability=prob,
                    bound_lower=bound_lower,
                    ok=prob >= bound_lower,
                )
            )
    return report


def _library_groups(n: int) -> list[FiniteAbelianGroup]:
    """Groups with at most n generators exercising varied prime mixes."""
    groups = [
        FiniteAbelianGroup([]),
        FiniteAbelianGroup([2] * n),
        FiniteAbelianGroup([6] * n),
        FiniteAbelianGroup([30] * max(1, n - 1)),
        FiniteAbelianGroup([12]),
        FiniteAbelianGroup([2**i for i in range(1, n + 1)]),
        FiniteAbelianGroup([2, 4] + [12] * max(0, n - 2)),
    ]
    # dedupe while preserving order
    seen = set()
    unique = []
    for g in groups:
        if g.invariant_factors not in seen and g.ngens <= n:
            seen.add(g.invariant_factors)
            unique.append(g)
    return unique
