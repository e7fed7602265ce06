"""Exact rational evaluation of the transversal bound formulas.

Everything here is integer or `fractions.Fraction` arithmetic; comparisons
reduce to integer cross-multiplication, so floor/ceiling boundary cases are
decided exactly.  Formulas applied outside their hypotheses raise
:class:`HypothesisError` instead of silently falling back.

Vocabulary, matching the extremal functions of the problem:

* ``n(r, D, delta)`` is the largest class size for which some r-partite graph
  with max degree ``delta`` and classes that large has no ``(r - D + 1)``
  partial transversal.
* ``f(n, r, t)`` is the complement view: the largest minimum degree of an
  r-partite graph with classes of size n and no complete subgraph on t
  vertices.
* ``Delta(n, r, t)`` is the least max degree at which a t-transversal-free
  instance with classes of size n exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Iterator

from .errors import HypothesisError, InvariantError

Rat = Fraction


@dataclass(frozen=True)
class Params:
    """Problem point (r, d, delta) with the division r = q(d+1) + k, 0 <= k <= d."""

    r: int
    d: int
    delta: int = 0
    q: int = field(init=False)
    k: int = field(init=False)

    def __post_init__(self):
        if self.r < 2:
            raise HypothesisError(f"need r >= 2, got r={self.r}")
        if not 0 <= self.d < self.r:
            raise HypothesisError(f"need 0 <= d < r, got d={self.d}, r={self.r}")
        if self.delta < 0:
            raise HypothesisError(f"need delta >= 0, got {self.delta}")
        object.__setattr__(self, "q", self.r // (self.d + 1))
        object.__setattr__(self, "k", self.r - self.q * (self.d + 1))


def decompose(r: int, d: int, delta: int = 0) -> Params:
    """Unique (q, k) with r = q(d+1) + k and 0 <= k <= d, carried in a Params."""
    return Params(r, d, delta)


def n_exact_defect_one(r: int, delta: int) -> int:
    """Known exact value of n(r, 1, delta): the full-transversal threshold minus one.

    Equals floor(2*delta*(1 - 1/r)) for even r and floor(2*delta*(1 - 1/(r-1)))
    for odd r.
    """
    if r < 2:
        raise HypothesisError(f"need r >= 2, got {r}")
    if delta < 1:
        raise HypothesisError(f"need delta >= 1, got {delta}")
    if r % 2 == 0:
        return floor(2 * delta * (1 - Fraction(1, r)))
    return floor(2 * delta * (1 - Fraction(1, r - 1)))


def upper_linear(p: Params) -> Rat:
    """Upper bound 2*delta*(1 - (d+1)/r) on n(r, d+1, delta)."""
    return 2 * p.delta * (1 - Fraction(p.d + 1, p.r))


def upper_general(p: Params) -> Rat:
    """Upper bound max{2*delta*(1 - (4d+5)/(4r)), 2*delta*(1 - 1/q)}."""
    return max(
        2 * p.delta * (1 - Fraction(4 * p.d + 5, 4 * p.r)),
        2 * p.delta * (1 - Fraction(1, p.q)),
    )


def upper_odd_balanced(p: Params) -> Rat:
    """Upper bound for odd q >= 3 and r = q(d+1) exactly.

    Value: max{2*delta*(1 - (4d+5)/(4r)), 2*delta*(1 - q/(q^2-1))}.
    """
    if p.k != 0:
        raise HypothesisError(f"balanced odd-q bound requires r = q(d+1); got k={p.k}")
    if p.q < 3 or p.q % 2 == 0:
        raise HypothesisError(f"balanced odd-q bound requires odd q >= 3; got q={p.q}")
    return max(
        2 * p.delta * (1 - Fraction(4 * p.d + 5, 4 * p.r)),
        2 * p.delta * (1 - Fraction(p.q, p.q * p.q - 1)),
    )


def upper_odd_general(p: Params) -> Rat:
    """Upper bound for odd q >= 3, any k: max{2*delta*(1 - (6d+7)/(6r)), 2*delta*(1 - 1/(q-1))}."""
    if p.q < 3 or p.q % 2 == 0:
        raise HypothesisError(f"general odd-q bound requires odd q >= 3; got q={p.q}")
    return max(
        2 * p.delta * (1 - Fraction(6 * p.d + 7, 6 * p.r)),
        2 * p.delta * (1 - Fraction(1, p.q - 1)),
    )


def exact_even_q(p: Params) -> int:
    """Exact n(r, d+1, delta) when q is even and q >= 4k: floor(2*delta*(1 - 1/q))."""
    if p.q % 2 != 0 or p.q < 4 * p.k:
        raise HypothesisError(f"even-q identity requires even q >= 4k; got q={p.q}, k={p.k}")
    return floor(2 * p.delta * (1 - Fraction(1, p.q)))


def exact_odd_q(p: Params) -> int:
    """Exact n(r, d+1, delta) when q is odd and q >= 6d+6k+7: floor(2*delta*(1 - 1/(q-1)))."""
    if p.q % 2 == 0 or p.q < 6 * p.d + 6 * p.k + 7:
        raise HypothesisError(
            f"odd-q identity requires odd q >= 6d+6k+7; got q={p.q}, d={p.d}, k={p.k}"
        )
    return floor(2 * p.delta * (1 - Fraction(1, p.q - 1)))


def convert(c, direction: str, *, n: int | None = None, delta: int | None = None, r: int | None = None) -> int:
    """Move between the three equivalent formula shapes at scale c >= 1.

    direction "n":     n-value floor(c * delta) from a degree bound.
    direction "delta": degree threshold ceil(n / c) from a class size.
    direction "f":     complement minimum degree (r-1)*n - ceil(n / c).
    """
    c = Fraction(c)
    if c < 1:
        raise HypothesisError(f"scale must be >= 1, got {c}")
    if direction == "n":
        if delta is None:
            raise HypothesisError("direction 'n' needs delta")
        return floor(c * delta)
    if direction == "delta":
        if n is None:
            raise HypothesisError("direction 'delta' needs n")
        return ceil(Fraction(n) / c)
    if direction == "f":
        if n is None or r is None:
            raise HypothesisError("direction 'f' needs n and r")
        return (r - 1) * n - ceil(Fraction(n) / c)
    raise HypothesisError(f"unknown direction {direction!r}")


def extension_threshold(r: int, d: int, k_it: int) -> Rat:
    """Per-delta class-size threshold for growing a k-transversal to r - d picks.

    Returns the coefficient c in ``n > c * delta``, namely
    2*(1 - (d + 1 - k/2) / (r - k)).
    """
    if not 0 <= d < r:
        raise HypothesisError(f"need 0 <= d < r, got d={d}, r={r}")
    if not 0 <= k_it < r - d:
        raise HypothesisError(f"need 0 <= k < r - d, got k={k_it}")
    return Fraction(2 * r - k_it - 2 * d - 2, r - k_it)


@dataclass(frozen=True)
class BoundReport:
    """Best known lower/upper values for n(r, d+1, delta) with provenance tags."""

    r: int
    d: int
    delta: int
    lower: int
    upper: int
    lower_tags: tuple[str, ...]
    upper_tags: tuple[str, ...]
    exact: bool
    exact_tags: tuple[str, ...]


def even_family_points(r: int, d: int) -> Iterator[tuple[int, int]]:
    """Valid (q, i) parameters of the even-q construction family at (r, d).

    Constraints: q even >= 2, 1 <= i <= d+2, r = q(d+i) + k with 0 <= k < d+i,
    and either i = 1 or i-1 divides d+i.
    """
    for i in range(1, d + 3):
        if i > 1 and (d + i) % (i - 1) != 0:
            continue
        q = r // (d + i)
        if q >= 2 and q % 2 == 0:
            yield q, i


def even_family_value(q: int, i: int, d: int, delta: int) -> int:
    """Claimed class size floor(2*delta*(1-1/q)) + floor((i-1)*delta/((d+1)*q))."""
    return (2 * delta * (q - 1)) // q + ((i - 1) * delta) // ((d + 1) * q)


def summary(r: int, d: int, delta: int) -> BoundReport:
    """Best applicable lower and upper bounds at one point, with provenance.

    Lower candidates: the half-blocks construction (delta whenever d+1 <= r/2),
    the disjoint-family chain through n(q, 1, delta), and every valid even-q
    family point.  Upper candidates: the linear defect-fraction bound, the
    general refined bound, and the two odd-q bounds where their gates hold.
    All uppers are floored since class sizes are integers.  ``exact`` records
    lower == upper; ``exact_tags`` names the identity gates that apply.
    """
    p = Params(r, d, delta)
    lower_cands: list[tuple[int, str]] = [(0, "trivial")]
    if p.q >= 2 and delta >= 1:
        lower_cands.append((delta, "half-blocks"))
        lower_cands.append((n_exact_defect_one(p.q, delta), f"disjoint-family(q={p.q})"))
    for q, i in even_family_points(r, d):
        if delta >= 1:
            lower_cands.append((even_family_value(q, i, d, delta), f"even-q-family(q={q},i={i})"))
    lower = max(v for v, _ in lower_cands)
    lower_tags = tuple(tag for v, tag in lower_cands if v == lower)

    upper_cands: list[tuple[int, str]] = [
        (floor(upper_linear(p)), "defect-fraction"),
        (floor(upper_general(p)), "general"),
    ]
    if p.q >= 3 and p.q % 2 == 1:
        if p.k == 0:
            upper_cands.append((floor(upper_odd_balanced(p)), "odd-q"))
        upper_cands.append((floor(upper_odd_general(p)), "odd-q-general"))
    upper = min(v for v, _ in upper_cands)
    upper_tags = tuple(tag for v, tag in upper_cands if v == upper)

    exact_tags: list[str] = []
    if p.q % 2 == 0 and p.q >= 4 * p.k:
        exact_tags.append("even-q")
    if p.q % 2 == 1 and p.q >= 6 * p.d + 6 * p.k + 7:
        exact_tags.append("odd-q")
    if (r, d) == (6, 1):
        exact_tags.append("six-five")
    if lower > upper:
        raise InvariantError(f"lower bound {lower} exceeds upper bound {upper} at (r={r}, d={d}, delta={delta})")
    return BoundReport(
        r=r,
        d=d,
        delta=delta,
        lower=lower,
        upper=upper,
        lower_tags=lower_tags,
        upper_tags=upper_tags,
        exact=lower == upper,
        exact_tags=tuple(exact_tags),
    )
