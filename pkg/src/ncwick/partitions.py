"""Partition lattices used as independent oracles for moment-cumulant relations.

Partitions are tuples of blocks, each block a sorted tuple of positions
``0..n-1``, blocks ordered by their minimum.  Enumeration follows restricted
growth strings, so the order is reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence, Union

from .core import ONE, ZERO, Scalar, Word

Partition = tuple[tuple[int, ...], ...]
Cumulant = Union[Callable[[Word], Scalar], Mapping[Word, object]]

FAMILIES = ("set", "free", "boolean", "monotone")


class IncompleteTableError(KeyError):
    """A cumulant or moment table lacks a value that a sum needs."""


# ----------------------------------------------------------------------------
# enumeration


def _rgs(n: int):
    """Restricted growth strings of length n."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    a[0] = 0
    yield from rec(1, 0)


def _blocks_from_rgs(s: tuple[int, ...], labels: Sequence[int]) -> Partition:
    blocks: dict[int, list[int]] = {}
    for pos, b in zip(labels, s):
        blocks.setdefault(b, []).append(pos)
    return tuple(tuple(blocks[b]) for b in sorted(blocks))


def set_partitions_of(items: Sequence[int]) -> list[Partition]:
    """All set partitions of the given (sorted) positions."""
    items = tuple(items)
    return [_blocks_from_rgs(s, items) for s in _rgs(len(items))]


def is_noncrossing(pi: Partition) -> bool:
    owner = {}
    for k, B in enumerate(pi):
        for x in B:
            owner[x] = k
    for k, B in enumerate(pi):
        for a, b in zip(B, B[1:]):
            # a block strictly between a and b must lie entirely inside (a, b)
            inside = {owner[c] for c in range(a + 1, b) if c in owner}
            for j in inside:
                if j != k and any(x < a or x > b for x in pi[j]):
                    return False
    return True


def is_interval(pi: Partition) -> bool:
    return all(B[-1] - B[0] == len(B) - 1 for B in pi)


@lru_cache(maxsize=None)
def enumerate_P(n: int) -> tuple[Partition, ...]:
    if n < 0:
        raise ValueError("n must be non-negative")
    return tuple(set_partitions_of(range(n)))


@lru_cache(maxsize=None)
def enumerate_NC(n: int) -> tuple[Partition, ...]:
    return tuple(p for p in enumerate_P(n) if is_noncrossing(p))


@lru_cache(maxsize=None)
def enumerate_Int(n: int) -> tuple[Partition, ...]:
    return tuple(p for p in enumerate_P(n) if is_interval(p))


def bell(n: int) -> int:
    # Bell triangle
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def catalan(n: int) -> int:
    return factorial(2 * n) // (factorial(n) * factorial(n + 1))


# ----------------------------------------------------------------------------
# nesting structure


def _nests(outer: tuple[int, ...], inner: tuple[int, ...]) -> bool:
    """``inner`` sits strictly between two consecutive elements of ``outer``."""
    return any(a < inner[0] and inner[-1] < b for a, b in zip(outer, outer[1:]))


def nesting_forest(pi: Partition) -> list[int | None]:
    """Parent index of every block (``None`` for roots).

    The parent of a block is the innermost block it is nested in.
    """
    if not is_noncrossing(pi):
        raise ValueError(f"{pi} is crossing")
    parents: list[int | None] = []
    for k, B in enumerate(pi):
        holders = [j for j, C in enumerate(pi) if j != k and _nests(C, B)]
        if not holders:
            parents.append(None)
        else:
            # innermost holder: the one with the largest minimum
            parents.append(max(holders, key=lambda j: pi[j][0]))
    return parents


def tree_factorial(pi: Partition) -> int:
    """Product over the blocks of the sizes of their subtrees in the nesting forest."""
    parents = nesting_forest(pi)
    size = [1] * len(pi)
    # blocks with larger minima are never ancestors of blocks with smaller ones
    for k in sorted(range(len(pi)), key=lambda j: -pi[j][0]):
        p = parents[k]
        if p is not None:
            size[p] += size[k]
    out = 1
    for s in size:
        out *= s
    return out


def inner_outer(pi: Partition) -> tuple[Partition, Partition]:
    """Split the blocks of a non-crossing partition into (outer, inner)."""
    if not is_noncrossing(pi):
        raise ValueError(f"{pi} is crossing")
    outer, inner = [], []
    for k, B in enumerate(pi):
        if any(j != k and C[0] < B[0] and B[-1] < C[-1] for j, C in enumerate(pi)):
            inner.append(B)
        else:
            outer.append(B)
    return tuple(outer), tuple(inner)


# ----------------------------------------------------------------------------
# moment-cumulant sums


def _lookup(cumulant: Cumulant, w: Word) -> Scalar:
    if callable(cumulant):
        return Scalar.coerce(cumulant(w))
    try:
        return Scalar.coerce(cumulant[w])
    except KeyError:
        raise IncompleteTableError(f"no cumulant value for word {w}") from None


def _block_product(cumulant: Cumulant, w: Word, pi: Partition) -> Scalar:
    out = ONE
    for B in pi:
        out = out * _lookup(cumulant, tuple(w[i] for i in B))
        if not out:
            break
    return out


def moments_from_cumulants(family: str, cumulant: Cumulant, w: Word) -> Scalar:
    """Sum over the family's partitions of the product of block cumulants.

    ``family`` is one of ``set`` (all partitions), ``free`` (non-crossing),
    ``boolean`` (interval) or ``monotone`` (non-crossing, weighted by the
    inverse tree factorial).
    """
    n = len(w)
    if family == "set":
        parts, weight = enumerate_P(n), None
    elif family == "free":
        parts, weight = enumerate_NC(n), None
    elif family == "boolean":
        parts, weight = enumerate_Int(n), None
    elif family == "monotone":
        parts, weight = enumerate_NC(n), tree_factorial
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    total = ZERO
    for pi in parts:
        term = _block_product(cumulant, w, pi)
        if weight is not None:
            term = term * Fraction(1, weight(pi))
        total = total + term
    return total


def moments_from_monotone_t(cumulant: Cumulant, w: Word, t) -> Scalar:
    """``sum_{pi in NC} t^|pi| / tau(pi)! prod r(a_B)``, the time-t monotone sum."""
    t = Scalar.coerce(t)
    total = ZERO
    for pi in enumerate_NC(len(w)):
        total = total + _block_product(cumulant, w, pi) * t ** len(pi) * Fraction(1, tree_factorial(pi))
    return total


def moments_from_cfree(R: Cumulant, kappa_psi: Cumulant, w: Word) -> Scalar:
    """Non-crossing sum with outer blocks weighted by R and inner ones by kappa_psi."""
    total = ZERO
    for pi in enumerate_NC(len(w)):
        outer, inner = inner_outer(pi)
        total = total + _block_product(R, w, outer) * _block_product(kappa_psi, w, inner)
    return total


def interval_partitions_of(items: Sequence[int]) -> list[Partition]:
    """Partitions of a set of integers whose blocks are runs of consecutive integers."""
    return [p for p in set_partitions_of(items) if is_interval(p)]


def boolean_recursion(moments: Cumulant, w: Word) -> dict[Word, Scalar]:
    """Solve ``phi(a1..an) = sum_j b(a1..aj) phi(a_{j+1}..an)`` for b on all prefixes.

    Returns the table of boolean cumulants of every contiguous subword of ``w``.
    """
    n = len(w)
    b: dict[Word, Scalar] = {}

    def phi_of(v: Word) -> Scalar:
        return ONE if not v else _lookup(moments, v)

    for length in range(1, n + 1):
        for start in range(0, n - length + 1):
            v = w[start:start + length]
            if v in b:
                continue
            val = phi_of(v)
            for j in range(1, length):
                val = val - b[v[:j]] * phi_of(v[j:])
            b[v] = val
    return b


# ----------------------------------------------------------------------------
# univariate monotone t-calculus


def _increasing_chains(n: int):
    """Sequences 1 = i_0 < i_1 < ... < i_s = n + 1."""
    inner = range(2, n + 1)
    from itertools import combinations

    for s in range(1, n + 1):
        for mid in combinations(inner, s - 1):
            yield (1,) + mid + (n + 1,)


def monotone_mt(r: Callable[[int], object] | Sequence, n: int) -> list[Scalar]:
    """Coefficients ``[c_0, ..., c_n]`` of the polynomial m_n(t).

    ``m_n(t) = sum_s sum_{1 = i_0 < ... < i_s = n+1} t^s/s! prod_j i_{j-1} r_{i_j - i_{j-1}}``
    where ``r(q)`` (or ``r[q]``) is the q-th univariate monotone cumulant.
    """
    get = r if callable(r) else (lambda q: r[q])
    coeffs = [ZERO] * (n + 1)
    if n == 0:
        coeffs[0] = ONE
        return coeffs
    for chain in _increasing_chains(n):
        s = len(chain) - 1
        term = Scalar.const(Fraction(1, factorial(s)))
        for j in range(1, s + 1):
            term = term * chain[j - 1] * Scalar.coerce(get(chain[j] - chain[j - 1]))
        coeffs[s] = coeffs[s] + term
    return coeffs


def monotone_mt_integral(r: Callable[[int], object] | Sequence, n: int) -> list[Scalar]:
    """m_n(t) from the integral equation ``m_n = sum_p p r_{n-p+1} int_0^t m_{p-1}``."""
    get = r if callable(r) else (lambda q: r[q])
    polys: list[list[Scalar]] = [[ONE]]
    for k in range(1, n + 1):
        acc = [ZERO] * (k + 1)
        for p in range(1, k + 1):
            rq = Scalar.coerce(get(k - p + 1))
            for d, c in enumerate(polys[p - 1]):
                acc[d + 1] = acc[d + 1] + c * rq * Fraction(p, d + 1)
        polys.append(acc)
    return polys[n]


def evaluate_poly(coeffs: Iterable[Scalar], t) -> Scalar:
    t = Scalar.coerce(t)
    total = ZERO
    power = ONE
    for c in coeffs:
        total = total + c * power
        power = power * t
    return total


def clear_caches() -> None:
    for fn in (enumerate_P, enumerate_NC, enumerate_Int):
        getattr(fn, "cache_clear", lambda: None)()
