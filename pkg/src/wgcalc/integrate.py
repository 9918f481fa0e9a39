"""Haar integrals of monomials in matrix entries.

Every evaluator returns a :class:`RationalFunction` in ``N`` when ``N`` is
omitted (valid in the stable range) and an exact ``Fraction`` at a fixed
integer ``N``.  Below the stable range the numeric evaluators switch to
Moore-Penrose Weingarten matrices, which stay correct there.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .combinat import (
    IndexSequence,
    Pairing,
    Permutation,
    coset_type,
    cycle_type,
    enumerate_pairings,
    fiber_type,
    pairing_to_permutation,
)
from .exactalg import ExactMatrix, RationalFunction, UniPolynomial, pseudo_invert_gram
from .exactalg.matrix import to_integer_array
from .weingarten import (
    GroupKind,
    InfeasibleError,
    falling_factorial,
    gram_bruteforce,
    invariant_vectors,
    stable_range,
    weingarten_matrix,
    wg_coe,
    wg_cse,
    wg_orthogonal,
    wg_symplectic_at,
    wg_unitary,
    wg_unitary_numeric,
)

Value = Union[RationalFunction, Fraction]

#: largest number of coordinates for which a dense projection is built
PROJECTION_LIMIT = 4096


# ---------------------------------------------------------------------------
# indices and monomials


@dataclass(frozen=True, order=True)
class SpIndex:
    """Index in [2N] written as ``k`` (lower half) or ``N+k`` (upper half)."""

    k: int
    upper: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"index must be positive, got {self.k}")

    @classmethod
    def from_int(cls, v: int, N: int) -> SpIndex:
        if not 1 <= v <= 2 * N:
            raise ValueError(f"index {v} out of range [1, {2 * N}]")
        return cls(v - N, True) if v > N else cls(v, False)

    def value(self, N: int) -> int:
        if self.k > N:
            raise ValueError(f"index {self} out of range for N={N}")
        return self.k + N if self.upper else self.k

    def __str__(self):
        return f"N+{self.k}" if self.upper else str(self.k)


Index = Union[int, SpIndex]


class MonomialSyntaxError(ValueError):
    def __init__(self, message: str, token: str, column: int):
        self.token = token
        self.column = column
        super().__init__(f"{message}: {token!r} at column {column}")


@dataclass(frozen=True)
class UnitaryMonomial:
    """prod conj(U_{i(x) j(x)}) * prod U_{i'(x) j'(x)}."""

    conj_pairs: tuple[tuple[Index, Index], ...] = ()
    plain_pairs: tuple[tuple[Index, Index], ...] = ()

    @property
    def d_conj(self) -> int:
        return len(self.conj_pairs)

    @property
    def d_plain(self) -> int:
        return len(self.plain_pairs)

    def __str__(self):
        fmt = lambda ps: ";".join(f"{a},{b}" for a, b in ps)  # noqa: E731
        return f"conj:{fmt(self.conj_pairs)} plain:{fmt(self.plain_pairs)}"


@dataclass(frozen=True)
class RealMonomial:
    """prod_x g_{i(x) j(x)} for a real (orthogonal) or symplectic matrix."""

    pairs: tuple[tuple[Index, Index], ...] = ()

    @property
    def rows(self) -> tuple:
        return tuple(p[0] for p in self.pairs)

    @property
    def cols(self) -> tuple:
        return tuple(p[1] for p in self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __str__(self):
        return ";".join(f"{a},{b}" for a, b in self.pairs)


_TOKEN = re.compile(r"\s*(?:(?P<kw>conj:|plain:)|(?P<sym>N\s*\+\s*\d+)|(?P<int>\d+)|(?P<sep>[,;]))")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            end = start
            while end < len(text) and not text[end].isspace() and text[end] not in ",;":
                end += 1
            raise MonomialSyntaxError("unexpected token", text[start:max(end, start + 1)], start + 1)
        col = m.start(m.lastgroup) + 1
        kind = m.lastgroup
        raw = m.group(kind)
        if kind == "sym":
            value: object = SpIndex(int(raw.split("+")[1]), True)
        elif kind == "int":
            value = int(raw)
        else:
            value = raw
        tokens.append((kind, value, col))
        pos = m.end()
    return tokens


def _parse_pairs(tokens: list, start: int, text_len: int) -> tuple[list[tuple], int]:
    pairs = []
    k = start
    expect_pair = True
    while k < len(tokens) and tokens[k][0] != "kw":
        if not expect_pair:
            kind, value, col = tokens[k]
            if (kind, value) != ("sep", ";"):
                raise MonomialSyntaxError("expected ';'", str(value), col)
            k += 1
            expect_pair = True
            continue
        window = tokens[k:k + 3]
        if len(window) < 3:
            kind, value, col = window[-1] if window else (None, "", text_len + 1)
            raise MonomialSyntaxError("incomplete index pair", str(value), col)
        (ka, a, ca), (ks, s, cs), (kb, b, cb) = window
        if ka not in ("int", "sym"):
            raise MonomialSyntaxError("expected an index", str(a), ca)
        if (ks, s) != ("sep", ","):
            raise MonomialSyntaxError("expected ','", str(s), cs)
        if kb not in ("int", "sym"):
            raise MonomialSyntaxError("expected an index", str(b), cb)
        for v, c in ((a, ca), (b, cb)):
            if isinstance(v, int) and v < 1:
                raise MonomialSyntaxError("indices start at 1", str(v), c)
        pairs.append((a, b))
        k += 3
        expect_pair = False
    return pairs, k


def parse_monomial(text: str, unitary: bool = False):
    """Parse ``"i,j;i,j"`` (real) or ``"conj:... plain:..."`` (unitary).

    Indices are positive integers or ``N+k``.  Whitespace is ignored.
    """
    tokens = _tokenize(text)
    if not unitary:
        for kind, value, col in tokens:
            if kind == "kw":
                raise MonomialSyntaxError("section keywords only apply to unitary monomials", str(value), col)
        pairs, _ = _parse_pairs(tokens, 0, len(text))
        return RealMonomial(tuple(pairs))
    sections: dict[str, list] = {}
    k = 0
    while k < len(tokens):
        kind, value, col = tokens[k]
        if kind != "kw":
            raise MonomialSyntaxError("expected 'conj:' or 'plain:'", str(value), col)
        name = str(value)[:-1]
        if name in sections:
            raise MonomialSyntaxError("repeated section", str(value), col)
        sections[name], k = _parse_pairs(tokens, k + 1, len(text))
    return UnitaryMonomial(tuple(sections.get("conj", ())), tuple(sections.get("plain", ())))


def _check_range(indices: Iterable, N, limit_factor: int = 1):
    if N is None:
        return
    for v in indices:
        if isinstance(v, SpIndex):
            v.value(N)
        elif not 1 <= v <= limit_factor * N:
            raise ValueError(f"index {v} out of range [1, {limit_factor * N}]")


def _plain_ints(indices: Iterable, what: str) -> tuple[int, ...]:
    out = []
    for v in indices:
        if isinstance(v, SpIndex):
            if v.upper:
                raise ValueError(f"{what} indices cannot use the N+k form")
            v = v.k
        out.append(v)
    return tuple(out)


# ---------------------------------------------------------------------------
# delta symbols


def _entries(i) -> tuple:
    return i.entries if isinstance(i, IndexSequence) else tuple(i)


def delta_pairing(sigma: Pairing, i) -> int:
    """1 if i is constant on every block of sigma."""
    i = _entries(i)
    if len(i) != 2 * sigma.d:
        raise ValueError(f"index length {len(i)} does not match pairing of [{2 * sigma.d}]")
    return int(all(i[a - 1] == i[b - 1] for a, b in sigma.pairs))


def j_form(a: SpIndex, b: SpIndex) -> int:
    """<e_a, e_b>_J for the standard skew form with J = [[0, I], [-I, 0]]."""
    if a.k != b.k or a.upper == b.upper:
        return 0
    return 1 if b.upper else -1


def _sp(v, N) -> SpIndex:
    if isinstance(v, SpIndex):
        return v
    return SpIndex.from_int(v, N) if N is not None else SpIndex(v)


def delta_prime(sigma: Pairing, i, N: int | None = None) -> int:
    """prod over blocks a < b of sigma of <e_{i(a)}, e_{i(b)}>_J."""
    i = _entries(i)
    if len(i) != 2 * sigma.d:
        raise ValueError(f"index length {len(i)} does not match pairing of [{2 * sigma.d}]")
    out = 1
    for a, b in sigma.pairs:
        out *= j_form(_sp(i[a - 1], N), _sp(i[b - 1], N))
        if not out:
            return 0
    return out


def delta_perm(s: Permutation, i, j) -> int:
    """1 if i(s(r)) == j(r) for all r."""
    i, j = _entries(i), _entries(j)
    if len(i) != s.degree or len(j) != s.degree:
        raise ValueError("length mismatch")
    return int(all(i[s(r) - 1] == j[r - 1] for r in range(1, s.degree + 1)))


def matching_permutations(a: Sequence, b: Sequence) -> list[Permutation]:
    """All p with a[x] == b[p(x)] for every x, by backtracking."""
    a, b = tuple(a), tuple(b)
    n = len(a)
    if len(b) != n:
        raise ValueError("length mismatch")
    if sorted(map(repr, a)) != sorted(map(repr, b)):
        return []
    out = []
    used = [False] * n
    images = [0] * n

    def rec(x: int):
        if x == n:
            out.append(Permutation._unchecked(tuple(images)))
            return
        for y in range(n):
            if not used[y] and b[y] == a[x]:
                used[y] = True
                images[x] = y + 1
                rec(x + 1)
                used[y] = False

    rec(0)
    return out


# ---------------------------------------------------------------------------
# symmetric group


def integrate_symmetric_group(i, j, N: int | None = None) -> Value:
    """Integral of prod_x g_{i(x) j(x)} over the permutation matrices of S(N)."""
    i, j = _entries(i), _entries(j)
    if len(i) != len(j):
        raise ValueError("i and j must have the same length")
    if not i:
        return Fraction(1) if N is not None else RationalFunction(1)
    _check_range(i + j, N)
    if fiber_type(i) != fiber_type(j):
        return Fraction(0) if N is not None else RationalFunction(0)
    k = fiber_type(i).n_blocks
    if N is None:
        return RationalFunction(UniPolynomial.constant(1), falling_factorial(UniPolynomial.x(), k))
    if N < k:
        raise ValueError(f"insufficient alphabet: {k} distinct values need N >= {k}")
    return Fraction(1, falling_factorial(N, k))


@lru_cache(maxsize=8)
def _all_perms_array(N: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(1, N + 1))), dtype=np.int8).reshape(-1, N)


def integrate_symmetric_group_oracle(i, j, N: int) -> Fraction:
    """Average of prod_x [i(x) == g(j(x))] over all N! permutations."""
    if N > 8:
        raise InfeasibleError(math.factorial(N), math.factorial(8))
    i, j = _entries(i), _entries(j)
    if len(i) != len(j):
        raise ValueError("i and j must have the same length")
    _check_range(i + j, N)
    perms = _all_perms_array(N)
    ok = np.ones(len(perms), dtype=bool)
    for a, b in zip(i, j):
        ok &= perms[:, b - 1] == a
    return Fraction(int(ok.sum()), math.factorial(N))


# ---------------------------------------------------------------------------
# unitary group


def integrate_unitary(m: UnitaryMonomial, N: int | None = None) -> Value:
    """Sum over rho, sigma with i = i' rho and j = j' sigma of Wg(rho^{-1} sigma)."""
    zero = Fraction(0) if N is not None else RationalFunction(0)
    if m.d_conj != m.d_plain:
        return zero
    d = m.d_conj
    if d == 0:
        return Fraction(1) if N is not None else RationalFunction(1)
    i = _plain_ints((p[0] for p in m.conj_pairs), "unitary")
    j = _plain_ints((p[1] for p in m.conj_pairs), "unitary")
    ip = _plain_ints((p[0] for p in m.plain_pairs), "unitary")
    jp = _plain_ints((p[1] for p in m.plain_pairs), "unitary")
    _check_range(i + j + ip + jp, N)
    rhos = matching_permutations(i, ip)
    if not rhos:
        return zero
    sigmas = matching_permutations(j, jp)
    if not sigmas:
        return zero
    counts: dict = {}
    for rho in rhos:
        rinv = rho.inverse()
        for sigma in sigmas:
            a = cycle_type(rinv * sigma)
            counts[a] = counts.get(a, 0) + 1
    if N is None:
        total = RationalFunction(0)
        for a, c in counts.items():
            total = total + wg_unitary(a) * c
        return total
    if N >= d:
        return sum((wg_unitary(a).evaluate(N) * c for a, c in counts.items()), Fraction(0))
    return sum((wg_unitary_numeric(a, N) * c for a, c in counts.items()), Fraction(0))


# ---------------------------------------------------------------------------
# orthogonal and symplectic groups


@lru_cache(maxsize=None)
def _pairings(two_d: int) -> tuple[Pairing, ...]:
    return tuple(enumerate_pairings(two_d))


@lru_cache(maxsize=None)
def _pairing_index(two_d: int) -> dict:
    return {p: k for k, p in enumerate(_pairings(two_d))}


def _as_real(m) -> RealMonomial:
    if isinstance(m, RealMonomial):
        return m
    return parse_monomial(m) if isinstance(m, str) else RealMonomial(tuple(map(tuple, m)))


def real_monomial(i: Sequence, j: Sequence) -> RealMonomial:
    if len(i) != len(j):
        raise ValueError("i and j must have the same length")
    return RealMonomial(tuple(zip(i, j)))


def integrate_orthogonal(m: RealMonomial, N: int | None = None) -> Value:
    """Sum over pairings s, t compatible with i, j of Wg^O(p_s^{-1} p_t)."""
    m = _as_real(m)
    zero = Fraction(0) if N is not None else RationalFunction(0)
    k = len(m)
    if k % 2:
        return zero
    if k == 0:
        return Fraction(1) if N is not None else RationalFunction(1)
    i = _plain_ints(m.rows, "orthogonal")
    j = _plain_ints(m.cols, "orthogonal")
    _check_range(i + j, N)
    d = k // 2
    left = [p for p in _pairings(k) if delta_pairing(p, i)]
    right = [p for p in _pairings(k) if delta_pairing(p, j)]
    if not left or not right:
        return zero
    if N is not None and not stable_range(GroupKind.ORTHOGONAL, d, N):
        _, W = weingarten_matrix(GroupKind.ORTHOGONAL, d, N)
        idx = _pairing_index(k)
        return sum((W[idx[s], idx[t]] for s in left for t in right), Fraction(0))
    counts: dict = {}
    for s in left:
        sinv = pairing_to_permutation(s).inverse()
        for t in right:
            mu = coset_type(sinv * pairing_to_permutation(t))
            counts[mu] = counts.get(mu, 0) + 1
    total = RationalFunction(0)
    for mu, c in counts.items():
        total = total + wg_orthogonal(mu) * c
    return total if N is None else total.evaluate(N)


def integrate_symplectic(m: RealMonomial, N: int | None = None) -> Value:
    """Signed sum over pairings of Delta'_s(i) Delta'_t(j) Wg^Sp(p_s^{-1} p_t)."""
    m = _as_real(m)
    zero = Fraction(0) if N is not None else RationalFunction(0)
    k = len(m)
    if k % 2:
        return zero
    if k == 0:
        return Fraction(1) if N is not None else RationalFunction(1)
    _check_range(m.rows + m.cols, N, 2)
    i = tuple(_sp(v, N) for v in m.rows)
    j = tuple(_sp(v, N) for v in m.cols)
    d = k // 2
    left = [(p, v) for p in _pairings(k) if (v := delta_prime(p, i))]
    right = [(p, v) for p in _pairings(k) if (v := delta_prime(p, j))]
    if not left or not right:
        return zero
    if N is not None and not stable_range(GroupKind.SYMPLECTIC, d, N):
        _, W = weingarten_matrix(GroupKind.SYMPLECTIC, d, N)
        idx = _pairing_index(k)
        return sum((a * b * W[idx[s], idx[t]] for s, a in left for t, b in right), Fraction(0))
    total = RationalFunction(0)
    cache: dict = {}
    for s, a in left:
        sinv = pairing_to_permutation(s).inverse()
        for t, b in right:
            p = sinv * pairing_to_permutation(t)
            if p not in cache:
                cache[p] = wg_symplectic_at(p)
            total = total + cache[p] * (a * b)
    return total if N is None else total.evaluate(N)


# ---------------------------------------------------------------------------
# circular ensembles


def _circular(i, j, N, weight) -> Value:
    i, j = _entries(i), _entries(j)
    if len(i) % 2 or len(j) % 2:
        raise ValueError("circular ensemble monomials need even-length index sequences")
    zero = Fraction(0) if N is not None else RationalFunction(0)
    if len(i) != len(j):
        return zero
    if not i:
        return Fraction(1) if N is not None else RationalFunction(1)
    total = RationalFunction(0)
    counts: dict = {}
    for s in matching_permutations(j, i):
        key = weight(s)
        counts[key] = counts.get(key, 0) + 1
    for (kind, label), c in counts.items():
        total = total + kind(label) * c
    return total if N is None else total.evaluate(N)


def integrate_coe(i, j, N: int | None = None) -> Value:
    """E[v_{i1 i2} ... conj(v_{j1 j2} ...)] for V = U U^T."""
    _check_range(_plain_ints(_entries(i), "COE") + _plain_ints(_entries(j), "COE"), N)
    return _circular(i, j, N, lambda s: (_coe_value, coset_type(s)))


def integrate_cse(i, j, N: int | None = None) -> Value:
    """E[h_{i1 i2} ... conj(h_{j1 j2} ...)] for H = U J U^T, U in U(2N)."""
    _check_range(_entries(i) + _entries(j), N, 2)
    if N is not None:
        i = tuple(_sp(v, N) for v in _entries(i))
        j = tuple(_sp(v, N) for v in _entries(j))
    else:
        i = tuple(_sp(v, None) for v in _entries(i))
        j = tuple(_sp(v, None) for v in _entries(j))
    return _circular(i, j, N, lambda s: (_cse_value, s))


def _coe_value(mu) -> RationalFunction:
    return wg_orthogonal(mu).compose_linear(1, 1)


def _cse_value(s: Permutation) -> RationalFunction:
    return wg_cse(s)


def integrate(group: GroupKind, monomial, N: int | None = None) -> Value:
    """Dispatch on the group; ``monomial`` is parsed from text if needed.

    For S, COE and CSE the monomial is given as ``"i,j;i,j"`` pairs (S)
    or with ``conj:``/``plain:`` sections (COE, CSE) whose plain pairs
    flatten to the index sequence of the plain entries and conj pairs to
    that of the conjugated ones.
    """
    group = GroupKind.parse(group)
    if group is GroupKind.UNITARY:
        m = parse_monomial(monomial, unitary=True) if isinstance(monomial, str) else monomial
        return integrate_unitary(m, N)
    if group is GroupKind.ORTHOGONAL:
        return integrate_orthogonal(_as_real(monomial), N)
    if group is GroupKind.SYMPLECTIC:
        return integrate_symplectic(_as_real(monomial), N)
    if group is GroupKind.SYMMETRIC:
        m = _as_real(monomial)
        return integrate_symmetric_group(_plain_ints(m.rows, "S"), _plain_ints(m.cols, "S"), N)
    m = parse_monomial(monomial, unitary=True) if isinstance(monomial, str) else monomial
    i = tuple(v for p in m.plain_pairs for v in p)
    j = tuple(v for p in m.conj_pairs for v in p)
    if group is GroupKind.COE:
        return integrate_coe(i, j, N)
    return integrate_cse(i, j, N)


# ---------------------------------------------------------------------------
# projection matrices


def _tensor_shape(group: GroupKind, d: int, N: int) -> tuple[int, int]:
    """(alphabet, length) of the coordinates of the invariant tensors."""
    if group is GroupKind.SYMMETRIC:
        return N, d
    if group is GroupKind.SYMPLECTIC:
        return 2 * N, 2 * d
    return N, 2 * d


def flat_index(indices: Sequence[int], alphabet: int) -> int:
    """Lexicographic 0-based position of a 1-based index tuple."""
    out = 0
    for v in indices:
        if not 1 <= v <= alphabet:
            raise ValueError(f"index {v} out of range [1, {alphabet}]")
        out = out * alphabet + (v - 1)
    return out


@dataclass(frozen=True)
class Projection:
    group: GroupKind
    d: int
    N: int
    alphabet: int
    length: int
    matrix: ExactMatrix
    rank: int

    def entry(self, row: Sequence[int], col: Sequence[int]) -> Fraction:
        return self.matrix[flat_index(row, self.alphabet), flat_index(col, self.alphabet)]


@lru_cache(maxsize=32)
def projection(group: GroupKind, d: int, N: int) -> Projection:
    """P = A W A^T from explicit invariant coordinates and the pseudoinverse Gram.

    Unitary coordinates are ``(y, y')`` with y on the conjugated factors.
    """
    group = GroupKind.parse(group)
    if group in (GroupKind.COE, GroupKind.CSE):
        raise ValueError(f"no tensor projection for {group.value}")
    alphabet, length = _tensor_shape(group, d, N)
    size = alphabet**length
    if size > PROJECTION_LIMIT:
        raise InfeasibleError(size, PROJECTION_LIMIT)
    _, vectors = invariant_vectors(group, d, N)
    gram = gram_bruteforce(group, d, N)
    W = pseudo_invert_gram(gram.matrix)
    n = len(vectors)
    A = np.zeros((size, n), dtype=object)
    for c, (idx, val) in enumerate(vectors):
        A[idx, c] = [int(v) for v in val]
    Wint, delta = to_integer_array(W)
    P = A.dot(Wint).dot(A.T) if n else np.zeros((size, size), dtype=object)
    matrix = ExactMatrix(size, size, (Fraction(int(v), delta) for v in P.ravel()))
    rank = int(matrix.trace())
    return Projection(group, d, N, alphabet, length, matrix, rank)


def projection_matrix(group: GroupKind, d: int, N: int) -> ExactMatrix:
    return projection(group, d, N).matrix


def monomial_entry_from_projection(group: GroupKind, d: int, N: int, row: Sequence[int], col: Sequence[int]) -> Fraction:
    """Read an integral off the projection matrix.

    For U the row is ``i + i'`` (conjugated rows then plain rows) and the
    column ``j + j'``; for the other groups row and column are i and j.
    """
    return projection(group, d, N).entry(row, col)
