"""Characters, contents and Jucys-Murphy calculus on the symmetric group."""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .combinat import (
    IntegerPartition,
    Permutation,
    all_permutations,
    word_norm,
)
from .exactalg.poly import UniPolynomial


# ---------------------------------------------------------------------------
# dimensions and characters


def _parts(lam) -> tuple[int, ...]:
    return lam.parts if isinstance(lam, IntegerPartition) else tuple(lam)


def hook_dimension(lam: IntegerPartition) -> int:
    """Dimension of the Specht module, by the hook length formula."""
    parts = _parts(lam)
    n = sum(parts)
    conj = [sum(1 for p in parts if p > c) for c in range(parts[0])] if parts else []
    hooks = 1
    for i, row in enumerate(parts):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(n) // hooks


@lru_cache(maxsize=None)
def _mn(beta: frozenset, alpha: tuple[int, ...]) -> int:
    # beta-set form of Murnaghan-Nakayama: removing an r-rim hook moves one
    # bead from b to b - r, with sign given by the beads jumped over
    if not alpha:
        return 1
    r, rest = alpha[0], alpha[1:]
    total = 0
    for b in beta:
        if b - r < 0 or (b - r) in beta:
            continue
        jumped = sum(1 for c in beta if b - r < c < b)
        total += (-1) ** jumped * _mn((beta - {b}) | {b - r}, rest)
    return total


def mn_character(lam: IntegerPartition, alpha: IntegerPartition) -> int:
    """Irreducible character value chi^lam on the class of cycle type alpha."""
    lp, ap = _parts(lam), _parts(alpha)
    if sum(lp) != sum(ap):
        raise ValueError(f"size mismatch: |{lam}| != |{alpha}|")
    ell = len(lp)
    beta = frozenset(p + ell - 1 - i for i, p in enumerate(lp))
    return _mn(beta, tuple(sorted(ap, reverse=True)))


def centralizer_order(alpha: IntegerPartition) -> int:
    """z_alpha = prod_k k^{m_k} m_k!."""
    z = 1
    for k, m in Counter(_parts(alpha)).items():
        z *= k**m * math.factorial(m)
    return z


def class_size(alpha: IntegerPartition) -> int:
    return math.factorial(sum(_parts(alpha))) // centralizer_order(alpha)


# ---------------------------------------------------------------------------
# contents


@dataclass(frozen=True)
class ContentMultiset:
    values: tuple[int, ...]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def contents(lam: IntegerPartition) -> ContentMultiset:
    """Column minus row over the cells of the diagram (English notation)."""
    vals = [j - i for i, row in enumerate(_parts(lam)) for j in range(row)]
    return ContentMultiset(tuple(sorted(vals)))


def content_product(lam: IntegerPartition) -> UniPolynomial:
    """prod over cells of (N + c)."""
    out = UniPolynomial.constant(1)
    for c in contents(lam):
        out = out * UniPolynomial((c, 1))
    return out


def _esym(values: Iterable[int], r: int) -> int:
    e = [1] + [0] * r
    for v in values:
        for k in range(r, 0, -1):
            e[k] += e[k - 1] * v
    return e[r]


def _hsym(values: Iterable[int], r: int) -> int:
    h = [1] + [0] * r
    for v in values:
        for k in range(1, r + 1):
            h[k] += h[k - 1] * v
    return h[r]


def elementary_on_contents(r: int, lam: IntegerPartition) -> int:
    if r < 0:
        raise ValueError("r must be non-negative")
    return _esym(contents(lam), r)


def complete_on_contents(r: int, lam: IntegerPartition) -> int:
    if r < 0:
        raise ValueError("r must be non-negative")
    return _hsym(contents(lam), r)


# ---------------------------------------------------------------------------
# group algebra Q[q][S(d)]


class GroupAlgebraElement:
    """Finite formal sum of permutations with coefficients in Q[q]."""

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Mapping[Permutation, UniPolynomial | int | Fraction] | None = None):
        self.d = d
        clean: dict[Permutation, UniPolynomial] = {}
        for p, c in (terms or {}).items():
            if p.degree != d:
                raise ValueError("permutation degree does not match the algebra")
            if not isinstance(c, UniPolynomial):
                c = UniPolynomial.constant(c)
            if not c.is_zero():
                clean[p] = c
        self.terms = clean

    @classmethod
    def zero(cls, d: int) -> GroupAlgebraElement:
        return cls(d)

    @classmethod
    def identity(cls, d: int) -> GroupAlgebraElement:
        return cls(d, {Permutation.identity(d): 1})

    @classmethod
    def basis(cls, p: Permutation, coeff=1) -> GroupAlgebraElement:
        return cls(p.degree, {p: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, p: Permutation) -> UniPolynomial:
        return self.terms.get(p, UniPolynomial())

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.d == other.d and self.terms == other.terms

    def __add__(self, other: GroupAlgebraElement) -> GroupAlgebraElement:
        self._check(other)
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out[p] + c if p in out else c
        return GroupAlgebraElement(self.d, out)

    def __sub__(self, other: GroupAlgebraElement) -> GroupAlgebraElement:
        return self + other.scale(UniPolynomial.constant(-1))

    def scale(self, c) -> GroupAlgebraElement:
        if not isinstance(c, UniPolynomial):
            c = UniPolynomial.constant(c)
        return GroupAlgebraElement(self.d, {p: v * c for p, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return self.scale(other)
        self._check(other)
        out: dict[Permutation, UniPolynomial] = {}
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                pq = p * q
                v = a * b
                out[pq] = out[pq] + v if pq in out else v
        return GroupAlgebraElement(self.d, out)

    __rmul__ = scale

    def _check(self, other):
        if other.d != self.d:
            raise ValueError("group algebra elements of different degree")

    def __repr__(self):
        body = " + ".join(f"({c.format('q')})*{p}" for p, c in sorted(self.terms.items()))
        return f"GroupAlgebraElement(d={self.d}: {body or '0'})"


def jm_element(j: int, d: int) -> GroupAlgebraElement:
    """J_j = sum_{i<j} (i j)."""
    if not 1 <= j <= d:
        raise ValueError(f"j must lie in [1, {d}], got {j}")
    return GroupAlgebraElement(d, {Permutation.transposition(d, i, j): 1 for i in range(1, j)})


def sphere_sum(r: int, d: int) -> GroupAlgebraElement:
    """Sum of all permutations at transposition distance r from the identity.

    For r >= d the sum is empty; a zero element is returned with a warning.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if r >= d:
        warnings.warn(f"no permutation of degree {d} has norm {r}; returning zero", stacklevel=2)
        return GroupAlgebraElement.zero(d)
    return GroupAlgebraElement(d, {p: 1 for p in all_permutations(d) if word_norm(p) == r})


def elementary_jm(r: int, d: int) -> GroupAlgebraElement:
    """e_r(J_1, ..., J_d) expanded in the group algebra."""
    # e[k] holds e_k of the Jucys-Murphy elements seen so far
    e = [GroupAlgebraElement.identity(d)] + [GroupAlgebraElement.zero(d)] * r
    for j in range(2, d + 1):
        J = jm_element(j, d)
        for k in range(r, 0, -1):
            if not e[k - 1].is_zero():
                e[k] = e[k] + e[k - 1] * J
    return e[r]


def gamma_element(d: int) -> GroupAlgebraElement:
    """sum over S(d) of q^{|p|} p."""
    if d < 1:
        raise ValueError("d must be positive")
    return GroupAlgebraElement(d, {p: UniPolynomial.monomial(word_norm(p)) for p in all_permutations(d)})


def gamma_product(d: int) -> GroupAlgebraElement:
    """The same element as prod_k (1 + q J_k), expanded."""
    q = UniPolynomial.x()
    out = GroupAlgebraElement.identity(d)
    for k in range(2, d + 1):
        out = out * (GroupAlgebraElement.identity(d) + jm_element(k, d).scale(q))
    return out


# ---------------------------------------------------------------------------
# monotone factorizations and walks


def strictly_monotone_factorization(p: Permutation) -> list[tuple[int, int]]:
    """The unique factorization p = (i_1 j_1)...(i_k j_k) with j_1 < ... < j_k."""
    d = p.degree
    factors = []
    cur = p
    while not cur.is_identity():
        m = max(x for x in range(1, d + 1) if cur(x) != x)
        i = cur.inverse()(m)
        factors.append((i, m))
        cur = cur * Permutation.transposition(d, i, m)
    factors.reverse()
    return factors


def count_monotone_walks(rho: Permutation, sigma: Permutation, length: int, strict: bool = False) -> int:
    """Walks rho -> sigma of the given length on the transposition Cayley graph
    whose labels (larger moved symbol) never decrease (strictly increase if strict).
    """
    if rho.degree != sigma.degree:
        raise ValueError("permutations of different degree")
    if length < 0:
        raise ValueError("length must be non-negative")
    target = rho.inverse() * sigma
    if length < word_norm(target) or (length - word_norm(target)) % 2:
        return 0
    return _count_factorizations(target.images, length, strict)


@lru_cache(maxsize=None)
def _count_factorizations(images: tuple[int, ...], length: int, strict: bool) -> int:
    d = len(images)
    transp = [(i, j, Permutation.transposition(d, i, j)) for j in range(2, d + 1) for i in range(1, j)]
    target = Permutation._unchecked(images)

    @lru_cache(maxsize=None)
    def walk(cur: Permutation, min_label: int, remaining: int) -> int:
        gap = word_norm(cur.inverse() * target)
        if gap > remaining or (remaining - gap) % 2:
            return 0
        if remaining == 0:
            return 1
        total = 0
        for i, j, t in transp:
            if j < min_label:
                continue
            total += walk(cur * t, j + 1 if strict else j, remaining - 1)
        return total

    return walk(Permutation.identity(d), 2, length)


def catalan_product(alpha: IntegerPartition) -> int:
    """prod_i Cat(alpha_i - 1): leading monotone walk count on the class alpha."""
    out = 1
    for a in _parts(alpha):
        out *= math.comb(2 * a - 2, a - 1) // a
    return out


def central_binomial_product(alpha: IntegerPartition) -> Fraction:
    """prod_i binom(2 alpha_i, alpha_i) / alpha_i, kept for comparison with the Catalan form."""
    out = Fraction(1)
    for a in _parts(alpha):
        out *= Fraction(math.comb(2 * a, a), a)
    return out
