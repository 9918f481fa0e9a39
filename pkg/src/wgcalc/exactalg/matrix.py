"""Dense exact matrices and their inverses.

Rational matrices are inverted by modular Gauss-Jordan elimination
(``wgcalc.kernels``), Chinese remaindering and rational reconstruction;
every inverse is certified by an exact integer product before it is
returned.  Matrices over Q(x) are either eliminated fraction-free over
Q[x] (small sizes) or evaluated at integer points, inverted there, and
reassembled by rational interpolation.  The interpolated inverse is
certified with a degree bound, see :func:`_invert_rf_interpolating`.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt, lcm
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .. import kernels
from .poly import RationalFunction, UniPolynomial, poly_gcd, rational_interpolate

log = logging.getLogger(__name__)

#: largest size eliminated directly over Q[x]; larger ones are interpolated
BAREISS_MAX = 6


class SingularMatrixError(ArithmeticError):
    def __init__(self, rank: int, size: int):
        self.rank = rank
        self.size = size
        super().__init__(f"matrix is singular: rank {rank} < {size}")


class ExactMatrix:
    """Row-major dense matrix over Fraction or RationalFunction entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows, self.cols, self.entries = rows, cols, entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> ExactMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, (_lift(v) for r in rows for v in r))

    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> ExactMatrix:
        return cls(n, n, (one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence, zero=None) -> ExactMatrix:
        n = len(values)
        if zero is None:
            zero = values[0] * 0 if n else Fraction(0)
        return cls(n, n, (_lift(values[i]) if i == j else zero for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> ExactMatrix:
        r, c = self.rows, self.cols
        return ExactMatrix(c, r, (self.entries[i * c + j] for j in range(c) for i in range(r)))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        n = self.rows
        e = self.entries
        return all(e[i * n + j] == e[j * n + i] for i in range(n) for j in range(i + 1, n))

    def is_rational(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.entries)

    def map(self, f: Callable) -> ExactMatrix:
        return ExactMatrix(self.rows, self.cols, (f(v) for v in self.entries))

    def evaluate(self, at) -> ExactMatrix:
        """Specialize rational-function entries at a number."""
        return self.map(lambda v: v.evaluate(at) if isinstance(v, RationalFunction) else Fraction(v))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(self.rows, self.cols, (a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(self.rows, self.cols, (a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c) -> ExactMatrix:
        return self.map(lambda v: v * c)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.is_rational() and other.is_rational():
            return _rational_matmul(self, other)
        out = []
        oc = other.cols
        for i in range(self.rows):
            r = self.row(i)
            for j in range(oc):
                acc = None
                for k, a in enumerate(r):
                    b = other.entries[k * oc + j]
                    if _is_zero(a) or _is_zero(b):
                        continue
                    acc = a * b if acc is None else acc + a * b
                out.append(acc if acc is not None else _zero_like(r[0] if r else Fraction(0)))
        return ExactMatrix(self.rows, oc, out)

    def trace(self):
        return sum((self[i, i] for i in range(min(self.shape))), Fraction(0))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"

    def format(self, var: str = "N") -> str:
        cells = [[_fmt(v, var) for v in self.row(i)] for i in range(self.rows)]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("[" + ", ".join(c.rjust(width) for c in row) + "]" for row in cells)


def _lift(v):
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, UniPolynomial):
        return RationalFunction(v)
    return v


def _is_zero(v) -> bool:
    if isinstance(v, RationalFunction):
        return v.is_zero()
    return v == 0


def _zero_like(v):
    return RationalFunction(0) if isinstance(v, RationalFunction) else Fraction(0)


def _fmt(v, var: str) -> str:
    if isinstance(v, RationalFunction):
        return v.format(var)
    return str(v)


# ---------------------------------------------------------------------------
# rational matrices via integer object arrays


def _common_denominator(values: Iterable[Fraction]) -> int:
    return reduce(lcm, (Fraction(v).denominator for v in values), 1)


def to_integer_array(m: ExactMatrix) -> tuple[np.ndarray, int]:
    """(A, L) with A an object array of Python ints and m == A / L."""
    L = _common_denominator(m.entries)
    arr = np.empty((m.rows, m.cols), dtype=object)
    for k, v in enumerate(m.entries):
        v = Fraction(v)
        arr[k // m.cols, k % m.cols] = v.numerator * (L // v.denominator)
    return arr, L


def _from_integer_array(arr: np.ndarray, denom: int) -> ExactMatrix:
    rows, cols = arr.shape
    return ExactMatrix(rows, cols, (Fraction(int(v), denom) for v in arr.ravel()))


def _rational_matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    A, la = to_integer_array(a)
    B, lb = to_integer_array(b)
    if a.rows == 0 or b.cols == 0 or a.cols == 0:
        return ExactMatrix(a.rows, b.cols, [Fraction(0)] * (a.rows * b.cols))
    return _from_integer_array(A.dot(B), la * lb)


def _primes_below(start: int = 2**31) -> Iterator[int]:
    n = start - 1
    while n > 2:
        if n % 2 and all(n % f for f in range(3, isqrt(n) + 1, 2)):
            yield n
        n -= 1


_PRIMES: list[int] = []


def _prime(k: int) -> int:
    if len(_PRIMES) <= k:
        gen = _primes_below(_PRIMES[-1] if _PRIMES else 2**31)
        while len(_PRIMES) <= k:
            _PRIMES.append(next(gen))
    return _PRIMES[k]


def _rational_reconstruct(u: int, modulus: int) -> Fraction | None:
    bound = isqrt(modulus // 2)
    r0, r1 = modulus, u % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _int_array_mod(A: np.ndarray, p: int) -> np.ndarray:
    return np.array([[int(v) % p for v in row] for row in A], dtype=np.int64)


def exact_rank(m: ExactMatrix) -> int:
    """Rank over Q by fraction-free elimination on the integer-scaled matrix."""
    A, _ = to_integer_array(m)
    rows = [[int(v) for v in r] for r in A]
    rank = 0
    prev = 1
    ncols = m.cols
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            ri = rows[i]
            f = ri[c]
            rows[i] = [(pr[c] * ri[j] - f * pr[j]) // prev for j in range(ncols)]
        prev = pr[c]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _integer_inverse(A: np.ndarray) -> tuple[np.ndarray, int]:
    """(M, delta) with A @ M == delta * I, for a nonsingular integer matrix A.

    Raises SingularMatrixError after confirming singularity exactly.
    """
    n = A.shape[0]
    if n == 0:
        return np.empty((0, 0), dtype=object), 1
    modulus = 1
    acc = None
    previous = None
    failures = 0
    k = 0
    while True:
        p = _prime(k)
        k += 1
        inv = kernels.inverse_mod_p(_int_array_mod(A, p), p)
        if inv is None:
            failures += 1
            if acc is None and failures >= 3:
                r = exact_rank(_from_integer_array(A, 1))
                if r < n:
                    raise SingularMatrixError(r, n)
                failures = -10**9
            continue
        inv = inv.astype(object)
        if acc is None:
            acc, modulus = inv, p
        else:
            # Garner step: acc + modulus * ((inv - acc) * modulus^{-1} mod p)
            t = pow(modulus % p, -1, p)
            acc = acc + modulus * (((inv - acc) * t) % p)
            modulus *= p
        cache: dict[int, Fraction | None] = {}
        cand = []
        ok = True
        for u in acc.ravel():
            u = int(u)
            if u not in cache:
                cache[u] = _rational_reconstruct(u, modulus)
            f = cache[u]
            if f is None:
                ok = False
                break
            cand.append(f)
        if not ok:
            previous = None
            continue
        if previous is not None and cand == previous:
            delta = _common_denominator(cand)
            M = np.array([f.numerator * (delta // f.denominator) for f in cand], dtype=object).reshape(n, n)
            check = A.dot(M)
            if all(check[i, j] == (delta if i == j else 0) for i in range(n) for j in range(n)):
                return M, delta
            log.debug("inverse certification failed at %d primes; continuing", k)
        previous = cand


def invert_rational(m: ExactMatrix) -> ExactMatrix:
    """Exact inverse of a nonsingular square rational matrix."""
    if not m.is_square():
        raise ValueError("matrix must be square")
    A, L = to_integer_array(m)
    M, delta = _integer_inverse(A)
    # m^{-1} = L * A^{-1} = L * M / delta
    return ExactMatrix(m.rows, m.cols, (Fraction(int(v) * L, delta) for v in M.ravel()))


# ---------------------------------------------------------------------------
# matrices over Q(x)


def _poly_lcm(a: UniPolynomial, b: UniPolynomial) -> UniPolynomial:
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def _clear_denominators(m: ExactMatrix) -> tuple[list[list[UniPolynomial]], UniPolynomial]:
    e = UniPolynomial.constant(1)
    for v in m.entries:
        if v.den.degree > 0:
            e = _poly_lcm(e, v.den)
    P = [[(v.num * e.exact_div(v.den)) * (1 / v.den.leading) for v in m.row(i)] for i in range(m.rows)]
    return P, e


def _generic_rank(m: ExactMatrix) -> int:
    best = 0
    for x in (7919, 104729, -3571):
        try:
            best = max(best, exact_rank(m.evaluate(x)))
        except ZeroDivisionError:
            continue
    return best


def _bareiss_inverse(m: ExactMatrix) -> ExactMatrix:
    """Fraction-free Gauss-Jordan over Q[x] followed by a single division pass.

    After elimination the left block equals ``d * I`` and the right block
    ``d * P^{-1}``, where d is the last pivot (the determinant up to the
    sign of the row swaps).
    """
    n = m.rows
    P, e = _clear_denominators(m)
    one, zero = UniPolynomial.constant(1), UniPolynomial()
    aug = [P[i] + [one if i == j else zero for j in range(n)] for i in range(n)]
    prev = one
    for k in range(n):
        piv = next((i for i in range(k, n) if not aug[i][k].is_zero()), None)
        if piv is None:
            raise SingularMatrixError(_generic_rank(m), n)
        aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k]
        pkk = pk[k]
        for i in range(n):
            if i == k:
                continue
            ri = aug[i]
            f = ri[k]
            aug[i] = [(pkk * ri[j] - f * pk[j]).exact_div(prev) for j in range(2 * n)]
        prev = pkk
    d = prev
    # m^{-1} = e * P^{-1} = e * right / d
    return ExactMatrix(n, n, (RationalFunction(aug[i][n + j] * e, d) for i in range(n) for j in range(n)))


def _invert_rf_interpolating(m: ExactMatrix, max_consecutive_singular: int = 25) -> ExactMatrix:
    """Invert over Q(x) by evaluation at integers and rational interpolation.

    Write m = P/e with P polynomial (entries of degree <= p) and e the
    common denominator, and the candidate inverse W = Q/D likewise (Q of
    degree <= q).  Every entry of ``e*D*(m W - I) = P Q - e D I`` is a
    polynomial of degree <= K = max(p + q, deg e + deg D).  Each sample
    point x is an exact inverse m(x)^{-1} that W reproduces, so that
    polynomial vanishes at every sample; with at least K + 1 samples it is
    identically zero and W is the exact inverse.
    """
    n = m.rows
    P, e = _clear_denominators(m)
    p_deg = max((v.degree for row in P for v in row), default=0)
    xs: list[int] = []
    samples: list[list[Fraction]] = []
    x = 0
    singular_run = 0
    target = 8
    while True:
        while len(xs) < target:
            x += 1
            if e(x) == 0:
                continue
            try:
                inv = invert_rational(m.evaluate(x))
            except SingularMatrixError:
                singular_run += 1
                if singular_run >= max_consecutive_singular:
                    raise SingularMatrixError(_generic_rank(m), n)
                continue
            singular_run = 0
            xs.append(x)
            samples.append(list(inv.entries))
        # one reconstruction per distinct value vector
        columns: dict[tuple, RationalFunction | None] = {}
        entries = []
        failed = False
        for k in range(n * n):
            key = tuple(s[k] for s in samples)
            if key not in columns:
                columns[key] = rational_interpolate(xs, key, slack=1)
            rf = columns[key]
            if rf is None:
                failed = True
                break
            entries.append(rf)
        if failed:
            target = int(target * 1.5) + 1
            continue
        D = UniPolynomial.constant(1)
        for rf in columns.values():
            if rf.den.degree > 0:
                D = _poly_lcm(D, rf.den)
        q_deg = max(((rf.num * D.exact_div(rf.den)).degree for rf in columns.values()), default=0)
        K = max(p_deg + q_deg, e.degree + D.degree)
        if len(xs) >= K + 1:
            log.debug("interpolated %dx%d inverse from %d points (bound %d)", n, n, len(xs), K)
            return ExactMatrix(n, n, entries)
        target = K + 1


def invert_symmetric(m: ExactMatrix) -> ExactMatrix:
    """Exact inverse of a symmetric matrix over Q or Q(x)."""
    if not m.is_square():
        raise ValueError("matrix must be square")
    if not m.is_symmetric():
        raise ValueError("matrix must be symmetric")
    if m.rows == 0:
        return m
    if m.is_rational():
        return invert_rational(m)
    m = m.map(_lift)
    if m.rows <= BAREISS_MAX:
        return _bareiss_inverse(m)
    return _invert_rf_interpolating(m)


def pivot_columns(m: ExactMatrix) -> list[int]:
    """A maximal set of linearly independent columns of a rational matrix."""
    A, _ = to_integer_array(m)
    best: list[int] = []
    rank = exact_rank(m) if m.rows <= 12 else None
    for k in range(8):
        p = _prime(k)
        piv = list(kernels.pivot_columns_mod_p(_int_array_mod(A, p), p))
        if len(piv) > len(best):
            best = piv
        if rank is not None and len(best) == rank:
            return best
        if rank is None and k >= 1:
            return best
    return best


def pseudo_invert_gram(m: ExactMatrix) -> ExactMatrix:
    """Moore-Penrose inverse of a symmetric positive semidefinite rational matrix.

    With B a maximal independent set of columns, G = X G_BB^{-1} X^T for
    X = G[:, B] and the pseudoinverse is X K^{-1} G_BB K^{-1} X^T where
    K = X^T X.  The rank factorization is checked exactly, so a pivot set
    that is only independent modulo a prime cannot slip through.
    """
    if not m.is_square():
        raise ValueError("matrix must be square")
    if not m.is_symmetric():
        raise ValueError("matrix must be symmetric")
    n = m.rows
    m = m.map(Fraction)
    for attempt in range(4):
        B = pivot_columns(m)
        if not B:
            if all(v == 0 for v in m.entries):
                return m
            continue
        r = len(B)
        X = ExactMatrix(n, r, (m[i, j] for i in range(n) for j in B))
        Gbb = ExactMatrix(r, r, (m[i, j] for i in B for j in B))
        Gbb_inv = invert_rational(Gbb)
        if X @ Gbb_inv @ X.transpose() != m:
            log.debug("pivot set of size %d is not a column basis; retrying", r)
            continue
        K_inv = invert_rational(X.transpose() @ X)
        return X @ K_inv @ Gbb @ K_inv @ X.transpose()
    raise ArithmeticError("could not determine an exact column basis")
