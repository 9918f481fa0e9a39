"""Gram matrices of tensor invariants and Weingarten functions.

Symbolic results are rational functions in the rank parameter (written
``N`` for U, Sp, S and the circular ensembles, ``z`` for O).  Numeric
results at a fixed integer rank fall back to the Moore-Penrose inverse of
the Gram matrix, which stays meaningful when the invariants are linearly
dependent.
"""

from __future__ import annotations

import enum
import json
import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .combinat import (
    IntegerPartition,
    Pairing,
    Permutation,
    SetPartition,
    all_permutations,
    coset_type,
    cycle_type,
    enumerate_pairings,
    enumerate_set_partitions,
    integer_partitions,
    kappa,
    longest_decreasing_subsequence,
    pairing_to_permutation,
    sign,
    word_norm,
)
from .exactalg import (
    ExactMatrix,
    PoleError,
    RationalFunction,
    UniPolynomial,
    expand_at_infinity,
    invert_symmetric,
    pseudo_invert_gram,
)
from .symchar import content_product, count_monotone_walks, hook_dimension, mn_character

log = logging.getLogger(__name__)

Value = Union[RationalFunction, Fraction]

#: largest number of index tuples a brute-force Gram may enumerate
BRUTEFORCE_LIMIT = 10**7


class GroupKind(enum.Enum):
    SYMMETRIC = "S"
    UNITARY = "U"
    ORTHOGONAL = "O"
    SYMPLECTIC = "Sp"
    COE = "COE"
    CSE = "CSE"

    @classmethod
    def parse(cls, text: str | GroupKind) -> GroupKind:
        if isinstance(text, GroupKind):
            return text
        for g in cls:
            if text.lower() in (g.value.lower(), g.name.lower()):
                return g
        raise ValueError(f"unknown group {text!r}; expected one of {[g.value for g in cls]}")

    @property
    def variable(self) -> str:
        return "z" if self is GroupKind.ORTHOGONAL else "N"


class InfeasibleError(ValueError):
    """A brute-force computation would exceed its enumeration budget."""

    def __init__(self, cost: int, limit: int = BRUTEFORCE_LIMIT):
        self.cost = cost
        self.limit = limit
        super().__init__(f"brute force needs {cost} index tuples, limit is {limit}")


@dataclass(frozen=True)
class GramMatrix:
    group: GroupKind
    d: int
    labels: tuple
    matrix: ExactMatrix

    def __len__(self):
        return len(self.labels)

    def evaluate(self, N) -> GramMatrix:
        return GramMatrix(self.group, self.d, self.labels, self.matrix.evaluate(N))


_X = UniPolynomial.x()


def _power(k: int, base: UniPolynomial = _X, coeff: int = 1) -> RationalFunction:
    return RationalFunction(base**k * coeff)


def falling_factorial(N, k: int):
    """N (N-1) ... (N-k+1); N may be a number or a polynomial."""
    out = UniPolynomial.constant(1) if isinstance(N, UniPolynomial) else 1
    for r in range(k):
        out = out * (N - r)
    return out


# ---------------------------------------------------------------------------
# symbolic Gram matrices


@lru_cache(maxsize=None)
def gram_symmetric(d: int) -> GramMatrix:
    """Diagonal Gram of the set-partition invariants of S(N) on (C^N)^{⊗d}."""
    labels = tuple(enumerate_set_partitions(d))
    diag = [RationalFunction(falling_factorial(_X, p.n_blocks)) for p in labels]
    return GramMatrix(GroupKind.SYMMETRIC, d, labels, ExactMatrix.diagonal(diag, RationalFunction(0)))


@lru_cache(maxsize=None)
def gram_unitary(d: int) -> GramMatrix:
    perms = tuple(all_permutations(d))
    powers = [_power(k) for k in range(d + 1)]
    inv = [p.inverse() for p in perms]
    entries = [powers[(inv[a] * perms[b]).num_cycles()] for a in range(len(perms)) for b in range(len(perms))]
    return GramMatrix(GroupKind.UNITARY, d, perms, ExactMatrix(len(perms), len(perms), entries))


def _pairing_data(d: int) -> tuple[tuple[Pairing, ...], list[Permutation], list[Permutation]]:
    pairings = tuple(enumerate_pairings(2 * d))
    perms = [pairing_to_permutation(p) for p in pairings]
    return pairings, perms, [p.inverse() for p in perms]


@lru_cache(maxsize=None)
def gram_orthogonal(d: int) -> GramMatrix:
    """Gram z^{kappa(p_s^{-1} p_t)} over the pairings of [2d]."""
    pairings, perms, inv = _pairing_data(d)
    powers = [_power(k) for k in range(d + 1)]
    n = len(perms)
    entries = [powers[kappa(inv[a] * perms[b])] for a in range(n) for b in range(n)]
    return GramMatrix(GroupKind.ORTHOGONAL, d, pairings, ExactMatrix(n, n, entries))


@lru_cache(maxsize=None)
def gram_symplectic(d: int) -> GramMatrix:
    """Gram (-1)^{d-kappa} sgn(p_s^{-1} p_t) (2N)^kappa over the pairings of [2d]."""
    pairings, perms, inv = _pairing_data(d)
    two_n = UniPolynomial((0, 2))
    n = len(perms)
    entries = []
    for a in range(n):
        for b in range(n):
            s = inv[a] * perms[b]
            k = kappa(s)
            entries.append(_power(k, two_n, (-1) ** (d - k) * sign(s)))
    return GramMatrix(GroupKind.SYMPLECTIC, d, pairings, ExactMatrix(n, n, entries))


def gram_symbolic(group: GroupKind, d: int) -> GramMatrix:
    group = GroupKind.parse(group)
    builders = {
        GroupKind.SYMMETRIC: gram_symmetric,
        GroupKind.UNITARY: gram_unitary,
        GroupKind.ORTHOGONAL: gram_orthogonal,
        GroupKind.SYMPLECTIC: gram_symplectic,
    }
    if group not in builders:
        raise ValueError(f"no symbolic Gram matrix for {group.value}")
    if d < 1:
        raise ValueError("d must be positive")
    return builders[group](d)


# ---------------------------------------------------------------------------
# brute force over index tuples


def bruteforce_cost(group: GroupKind, d: int, N: int) -> int:
    group = GroupKind.parse(group)
    if group is GroupKind.SYMMETRIC:
        return N**d
    if group in (GroupKind.UNITARY, GroupKind.ORTHOGONAL):
        return N ** (2 * d)
    if group is GroupKind.SYMPLECTIC:
        return (2 * N) ** (2 * d)
    raise ValueError(f"no brute-force Gram for {group.value}")


def _index_grid(alphabet: int, length: int) -> np.ndarray:
    """All of Fun(length, alphabet) as rows of 1-based indices, lexicographic."""
    grids = np.indices((alphabet,) * length, dtype=np.int16).reshape(length, -1).T
    return grids + 1


def invariant_vectors(group: GroupKind, d: int, N: int) -> tuple[tuple, list[tuple[np.ndarray, np.ndarray]]]:
    """Explicit invariant tensors as sparse (flat index, value) pairs.

    Coordinates are flat lexicographic positions in Fun(L, alphabet), 0-based.
    Set partitions with more than N blocks give the zero vector and are dropped.
    """
    group = GroupKind.parse(group)
    cost = bruteforce_cost(group, d, N)
    if cost > BRUTEFORCE_LIMIT:
        raise InfeasibleError(cost)
    vectors = []
    if group is GroupKind.SYMMETRIC:
        labels = tuple(enumerate_set_partitions(d, max_blocks=N))
        grid = _index_grid(N, d)
        for p in labels:
            mask = np.ones(len(grid), dtype=bool)
            reps = [b[0] - 1 for b in p.blocks]
            for b in p.blocks:
                for x in b[1:]:
                    mask &= grid[:, x - 1] == grid[:, b[0] - 1]
            for a in range(len(reps)):
                for c in range(a + 1, len(reps)):
                    mask &= grid[:, reps[a]] != grid[:, reps[c]]
            idx = np.flatnonzero(mask)
            vectors.append((idx, np.ones(len(idx), dtype=np.int64)))
        return labels, vectors
    if group is GroupKind.UNITARY:
        labels = tuple(all_permutations(d))
        grid = _index_grid(N, 2 * d)
        # coordinates (y, y'), y in the first d slots
        for pi in labels:
            mask = np.ones(len(grid), dtype=bool)
            for x in range(1, d + 1):
                mask &= grid[:, x - 1] == grid[:, d + pi(x) - 1]
            idx = np.flatnonzero(mask)
            vectors.append((idx, np.ones(len(idx), dtype=np.int64)))
        return labels, vectors
    labels = tuple(enumerate_pairings(2 * d))
    if group is GroupKind.ORTHOGONAL:
        grid = _index_grid(N, 2 * d)
        for s in labels:
            mask = np.ones(len(grid), dtype=bool)
            for a, b in s.pairs:
                mask &= grid[:, a - 1] == grid[:, b - 1]
            idx = np.flatnonzero(mask)
            vectors.append((idx, np.ones(len(idx), dtype=np.int64)))
        return labels, vectors
    grid = _index_grid(2 * N, 2 * d)
    for s in labels:
        val = np.ones(len(grid), dtype=np.int64)
        for a, b in s.pairs:
            ia, ib = grid[:, a - 1].astype(np.int64), grid[:, b - 1].astype(np.int64)
            val *= (ib == ia + N).astype(np.int64) - (ia == ib + N).astype(np.int64)
        idx = np.flatnonzero(val)
        vectors.append((idx, val[idx]))
    return labels, vectors


def _sparse_dot(u: tuple[np.ndarray, np.ndarray], v: tuple[np.ndarray, np.ndarray]) -> int:
    _, iu, iv = np.intersect1d(u[0], v[0], assume_unique=True, return_indices=True)
    return int(np.dot(u[1][iu], v[1][iv]))


def gram_bruteforce(group: GroupKind, d: int, N: int) -> GramMatrix:
    """Gram matrix at a fixed rank by summing over explicit index tuples."""
    group = GroupKind.parse(group)
    labels, vectors = invariant_vectors(group, d, N)
    n = len(labels)
    entries = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            entries[a][b] = entries[b][a] = Fraction(_sparse_dot(vectors[a], vectors[b]))
    return GramMatrix(group, d, labels, ExactMatrix.from_rows(entries))


# ---------------------------------------------------------------------------
# class representatives


def sigma_k(k: int) -> Permutation:
    """One-line (1, 2k, 2, 3, ..., 2k-1); even, of coset-type (k)."""
    if k < 1:
        raise ValueError("k must be positive")
    return Permutation((1, 2 * k) + tuple(range(2, 2 * k)))


def sigma_mu(mu: IntegerPartition) -> Permutation:
    """Block concatenation of sigma_k over the parts of mu."""
    images: list[int] = []
    offset = 0
    for k in mu:
        images.extend(v + offset for v in sigma_k(k).images)
        offset += 2 * k
    return Permutation(tuple(images))


def cycle_representative(alpha: IntegerPartition) -> Permutation:
    """Product of consecutive cycles of the given lengths."""
    d = sum(alpha)
    cycles = []
    start = 1
    for k in alpha:
        cycles.append(tuple(range(start, start + k)))
        start += k
    return Permutation.from_cycles(d, *cycles)


# ---------------------------------------------------------------------------
# tables


@dataclass
class WeingartenTable:
    """Weingarten values per class label for one group and degree.

    ``regime`` is ``"symbolic"`` or the integer rank.  ``matrix`` keeps the
    full Weingarten matrix (indexed like ``labels``) when it was computed.
    """

    group: GroupKind
    d: int
    entries: dict
    regime: Union[str, int] = "symbolic"
    labels: tuple = ()
    matrix: ExactMatrix | None = field(default=None, repr=False)

    @property
    def symbolic(self) -> bool:
        return self.regime == "symbolic"

    def __getitem__(self, label):
        if isinstance(label, str):
            label = IntegerPartition.parse(label)
        elif isinstance(label, (tuple, list)):
            label = IntegerPartition(tuple(label))
        return self.entries[label]

    def value(self, label, N=None) -> Value:
        v = self[label]
        if N is not None and isinstance(v, RationalFunction):
            return v.evaluate(N)
        return v

    def to_json(self) -> dict:
        rows = []
        for label, v in self.entries.items():
            rf = v if isinstance(v, RationalFunction) else RationalFunction(v)
            rows.append({"label": _label_str(label), "value": rf.to_json()})
        return {"group": self.group.value, "d": self.d, "regime": self.regime, "entries": rows}

    @classmethod
    def from_json(cls, obj: dict) -> WeingartenTable:
        group = GroupKind.parse(obj["group"])
        regime = obj["regime"]
        entries = {}
        for row in obj["entries"]:
            label = int(row["label"]) if group is GroupKind.SYMMETRIC else IntegerPartition.parse(row["label"])
            rf = RationalFunction.from_json(row["value"])
            entries[label] = rf if regime == "symbolic" else rf.num.leading if not rf.is_zero() else Fraction(0)
        return cls(group, obj["d"], entries, regime)


def _label_str(label) -> str:
    if isinstance(label, IntegerPartition):
        return ",".join(map(str, label.parts))
    return str(label)


def _invert(gram: ExactMatrix, symbolic: bool) -> ExactMatrix:
    if symbolic:
        return invert_symmetric(gram)
    return pseudo_invert_gram(gram)


@lru_cache(maxsize=None)
def weingarten_matrix(group: GroupKind, d: int, regime: Union[str, int] = "symbolic") -> tuple[tuple, ExactMatrix]:
    """(labels, W) with W the (pseudo)inverse Gram matrix."""
    group = GroupKind.parse(group)
    gram = gram_symbolic(group, d)
    if regime == "symbolic":
        return gram.labels, _invert(gram.matrix, True)
    N = int(regime)
    if N < 1:
        raise ValueError("N must be positive")
    return gram.labels, _invert(gram.matrix.evaluate(N), False)


def wg_table_from_gram(group: GroupKind, d: int, regime: Union[str, int] = "symbolic") -> WeingartenTable:
    """Invert the Gram matrix and keep one entry per class label.

    The symbolic regime raises SingularMatrixError when no inverse exists
    over Q(N); a numeric regime uses the Moore-Penrose inverse at that N.
    """
    group = GroupKind.parse(group)
    if group in (GroupKind.COE, GroupKind.CSE):
        return _circular_table(group, d, regime)
    labels, W = weingarten_matrix(group, d, regime)
    entries: dict = {}
    if group is GroupKind.SYMMETRIC:
        for k, p in enumerate(labels):
            entries.setdefault(p.n_blocks, W[k, k])
    elif group is GroupKind.UNITARY:
        # row of the identity: W[iota, s] = Wg(cycle_type(s))
        for k, s in enumerate(labels):
            entries.setdefault(cycle_type(s), W[0, k])
    else:
        for k, p in enumerate(labels):
            s = pairing_to_permutation(p)
            v = W[0, k]
            if group is GroupKind.SYMPLECTIC:
                v = v * sign(s)
            entries.setdefault(coset_type(s), v)
    entries = dict(sorted(entries.items(), key=lambda kv: _sort_key(kv[0])))
    return WeingartenTable(group, d, entries, regime, labels, W)


def _sort_key(label):
    if isinstance(label, IntegerPartition):
        return tuple(-p for p in label.parts)
    return -label


# ---------------------------------------------------------------------------
# closed forms


@lru_cache(maxsize=None)
def _wg_unitary_terms(parts: tuple[int, ...]) -> tuple[tuple[IntegerPartition, Fraction], ...]:
    d = sum(parts)
    alpha = IntegerPartition(parts)
    out = []
    for lam in integer_partitions(d):
        chi = mn_character(lam, alpha)
        if chi:
            out.append((lam, Fraction(chi * hook_dimension(lam), math.factorial(d))))
    return tuple(out)


@lru_cache(maxsize=None)
def _wg_unitary_cached(parts: tuple[int, ...]) -> RationalFunction:
    total = RationalFunction(0)
    for lam, c in _wg_unitary_terms(parts):
        total = total + RationalFunction(UniPolynomial.constant(c), content_product(lam))
    return total


def _as_partition(alpha) -> IntegerPartition:
    if isinstance(alpha, IntegerPartition):
        return alpha
    if isinstance(alpha, str):
        return IntegerPartition.parse(alpha)
    if isinstance(alpha, int):
        return IntegerPartition((alpha,))
    return IntegerPartition(tuple(sorted(alpha, reverse=True)))


def wg_unitary(alpha: IntegerPartition) -> RationalFunction:
    """Unitary Weingarten function as a character sum over lambda |- d."""
    return _wg_unitary_cached(_as_partition(alpha).parts)


def wg_unitary_numeric(alpha: IntegerPartition, N: int) -> Fraction:
    """Character sum restricted to diagrams with at most N rows.

    Agrees with the rational function for N >= d and gives the
    pseudoinverse entry below that.
    """
    alpha = _as_partition(alpha)
    total = Fraction(0)
    for lam, c in _wg_unitary_terms(alpha.parts):
        if len(lam) <= N:
            total += c / content_product(lam)(N)
    return total


@lru_cache(maxsize=None)
def _orthogonal_table(d: int) -> WeingartenTable:
    return wg_table_from_gram(GroupKind.ORTHOGONAL, d)


def wg_orthogonal(mu: IntegerPartition) -> RationalFunction:
    """Orthogonal Weingarten function of coset-type mu, in z."""
    mu = _as_partition(mu)
    return _orthogonal_table(mu.size)[mu]


def wg_symplectic(mu: IntegerPartition) -> RationalFunction:
    """Value at the even representative sigma_mu, in N.

    Obtained from the orthogonal function at z = -2N with a factor (-1)^d.
    """
    mu = _as_partition(mu)
    sign_d = -1 if mu.size % 2 else 1
    return wg_orthogonal(mu).compose_linear(-2, 0) * sign_d


def wg_symplectic_at(s: Permutation) -> RationalFunction:
    """Symplectic Weingarten function at an arbitrary permutation of [2d]."""
    return wg_symplectic(coset_type(s)) * sign(s)


def wg_orthogonal_at(s: Permutation) -> RationalFunction:
    return wg_orthogonal(coset_type(s))


def wg_coe(s: Permutation, N=None) -> Value:
    """Orthogonal function at the shifted parameter z = N + 1.

    With N omitted the result is a rational function in N; a numeric N
    raises PoleError at a pole.
    """
    rf = wg_orthogonal_at(s).compose_linear(1, 1)
    return rf if N is None else rf.evaluate(N)


def wg_cse(s: Permutation, N=None) -> Value:
    """Symplectic function (sign included) at the shifted parameter N - 1/2."""
    rf = wg_symplectic_at(s).compose_linear(1, Fraction(-1, 2))
    return rf if N is None else rf.evaluate(N)


def _circular_table(group: GroupKind, d: int, regime) -> WeingartenTable:
    f = wg_coe if group is GroupKind.COE else wg_cse
    entries = {}
    for mu in integer_partitions(d):
        s = sigma_mu(mu)
        entries[mu] = f(s) if regime == "symbolic" else f(s, int(regime))
    return WeingartenTable(group, d, entries, regime)


def stable_range(group: GroupKind, d: int, N: int) -> bool:
    """Whether the symbolic Weingarten function is valid at rank N."""
    group = GroupKind.parse(group)
    if group is GroupKind.SYMMETRIC:
        return N >= d
    if group is GroupKind.COE:
        return N + 1 >= d
    return N >= d


# ---------------------------------------------------------------------------
# unstable range: Baik-Rains basis


@dataclass(frozen=True)
class BaikRainsResult:
    """Invariants A_pi indexed by permutations with no decreasing run longer than N."""

    d: int
    N: int
    basis: tuple[Permutation, ...]
    gram: ExactMatrix
    weingarten: ExactMatrix

    def entry(self, rho: Permutation, sigma: Permutation) -> Fraction:
        a, b = self.basis.index(rho), self.basis.index(sigma)
        return self.weingarten[a, b]


@lru_cache(maxsize=None)
def wg_unitary_baik_rains(d: int, N: int) -> BaikRainsResult:
    if N < 1:
        raise ValueError("N must be positive")
    basis = tuple(p for p in all_permutations(d) if longest_decreasing_subsequence(p) <= N)
    full = gram_unitary(d)
    pos = [full.labels.index(p) for p in basis]
    G = ExactMatrix(len(basis), len(basis), (full.matrix[a, b].evaluate(N) for a in pos for b in pos))
    return BaikRainsResult(d, N, basis, G, invert_symmetric(G))


# ---------------------------------------------------------------------------
# 1/N expansion


def wg_unitary_asymptotic(rho: Permutation, sigma: Permutation, k_max: int) -> list[int]:
    """Weakly monotone walk counts of length |rho^{-1} sigma| + 2k for k <= k_max."""
    base = word_norm(rho.inverse() * sigma)
    return [count_monotone_walks(rho, sigma, base + 2 * k) for k in range(k_max + 1)]


def wg_unitary_series(rho: Permutation, sigma: Permutation, k_max: int) -> list[Fraction]:
    """Coefficients of N^{-2k} in (-1)^{|p|} N^{d+|p|} Wg(p), p = rho^{-1} sigma.

    Also checks that the odd powers vanish.
    """
    p = rho.inverse() * sigma
    d, r = p.degree, word_norm(p)
    rf = wg_unitary(cycle_type(p)) * (RationalFunction(UniPolynomial.monomial(d + r)) * (-1) ** r)
    lead, coeffs = expand_at_infinity(rf, 2 * k_max + 1)
    if lead != 0:
        raise ArithmeticError(f"unexpected leading order N^{lead}")
    if any(coeffs[k] for k in range(1, 2 * k_max + 1, 2)):
        raise ArithmeticError("odd powers present in the expansion")
    return [coeffs[2 * k] for k in range(k_max + 1)]


# ---------------------------------------------------------------------------
# persistence


def _cache_dir(cache_dir=None) -> Path | None:
    path = cache_dir or os.environ.get("WG_CACHE_DIR")
    return Path(path) if path else None


def cached_table(group: GroupKind, d: int, regime: Union[str, int] = "symbolic", cache_dir=None) -> WeingartenTable:
    """wg_table_from_gram with optional JSON persistence in a cache directory."""
    group = GroupKind.parse(group)
    directory = _cache_dir(cache_dir)
    path = directory / f"wg_{group.value}_{d}_{regime}.json" if directory else None
    if path is not None and path.exists():
        try:
            return WeingartenTable.from_json(json.loads(path.read_text()))
        except (ValueError, KeyError) as exc:
            log.warning("ignoring unreadable cache file %s: %s", path, exc)
    table = wg_table_from_gram(group, d, regime)
    if path is not None:
        directory.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(table.to_json(), sort_keys=True))
        tmp.replace(path)
    return table


__all__ = [
    "BaikRainsResult",
    "GramMatrix",
    "GroupKind",
    "InfeasibleError",
    "PoleError",
    "WeingartenTable",
    "cached_table",
    "cycle_representative",
    "gram_bruteforce",
    "gram_orthogonal",
    "gram_symbolic",
    "gram_symmetric",
    "gram_symplectic",
    "gram_unitary",
    "invariant_vectors",
    "sigma_k",
    "sigma_mu",
    "stable_range",
    "weingarten_matrix",
    "wg_coe",
    "wg_cse",
    "wg_orthogonal",
    "wg_orthogonal_at",
    "wg_symplectic",
    "wg_symplectic_at",
    "wg_table_from_gram",
    "wg_unitary",
    "wg_unitary_asymptotic",
    "wg_unitary_baik_rains",
    "wg_unitary_numeric",
    "wg_unitary_series",
]
