"""Monte Carlo sampling of Haar matrices and monomial estimators.

Used as an independent floating-point check on the exact evaluators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .integrate import RealMonomial, SpIndex, UnitaryMonomial, parse_monomial
from .weingarten import GroupKind

#: samples drawn per RNG stream
CHUNK = 10_000
Z_THRESHOLD = 5.0


@dataclass(frozen=True)
class MatrixSample:
    entries: np.ndarray
    group: GroupKind
    N: int


@dataclass(frozen=True)
class EstimatorResult:
    mean: complex
    std_error: float
    n_samples: int
    seed: int


def j_matrix(N: int) -> np.ndarray:
    J = np.zeros((2 * N, 2 * N))
    J[:N, N:] = np.eye(N)
    J[N:, :N] = -np.eye(N)
    return J


# ---------------------------------------------------------------------------
# batched samplers; every function returns an array of shape (size, n, n)


def _qr_haar(Z: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(Z)
    diag = np.diagonal(R, axis1=-2, axis2=-1)
    # rescale columns so that R has a positive real diagonal
    phase = diag / np.abs(diag)
    return Q * phase[..., None, :]


def unitary_batch(N: int, size: int, rng: np.random.Generator) -> np.ndarray:
    Z = (rng.standard_normal((size, N, N)) + 1j * rng.standard_normal((size, N, N))) / math.sqrt(2)
    return _qr_haar(Z)


def orthogonal_batch(N: int, size: int, rng: np.random.Generator) -> np.ndarray:
    return _qr_haar(rng.standard_normal((size, N, N)))


def _quaternion_partner(v: np.ndarray, N: int) -> np.ndarray:
    """phi(v) = J^T conj(v), applied to the last axis."""
    c = np.conj(v)
    return np.concatenate([-c[..., N:], c[..., :N]], axis=-1)


def symplectic_batch(N: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Quaternionic Ginibre matrices orthonormalized column by column.

    Each new column is made orthogonal to all previous columns and their
    quaternionic partners, then the partner is appended in the second
    half, so S is unitary with S^T J S = J.
    """
    shape = (size, N, N)
    A = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    B = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    first = np.concatenate([A, -np.conj(B)], axis=1)  # columns 1..N of [[A, B], [-conj B, conj A]]
    qs: list[np.ndarray] = []
    partners: list[np.ndarray] = []
    for k in range(N):
        v = first[:, :, k]
        for _ in range(2):
            for q in qs + partners:
                v = v - np.sum(np.conj(q) * v, axis=-1, keepdims=True) * q
        v = v / np.linalg.norm(v, axis=-1, keepdims=True)
        qs.append(v)
        partners.append(_quaternion_partner(v, N))
    return np.stack(qs + partners, axis=-1)


def coe_batch(N: int, size: int, rng: np.random.Generator) -> np.ndarray:
    U = unitary_batch(N, size, rng)
    return U @ np.swapaxes(U, -1, -2)


def cse_batch(N: int, size: int, rng: np.random.Generator) -> np.ndarray:
    U = unitary_batch(2 * N, size, rng)
    return U @ j_matrix(N) @ np.swapaxes(U, -1, -2)


_BATCH = {
    GroupKind.UNITARY: unitary_batch,
    GroupKind.ORTHOGONAL: orthogonal_batch,
    GroupKind.SYMPLECTIC: symplectic_batch,
    GroupKind.COE: coe_batch,
    GroupKind.CSE: cse_batch,
}


def sample_batch(group: GroupKind, N: int, size: int, rng: np.random.Generator) -> np.ndarray:
    group = GroupKind.parse(group)
    if N < 1:
        raise ValueError("N must be positive")
    if group not in _BATCH:
        raise ValueError(f"no sampler for {group.value}")
    return _BATCH[group](N, size, rng)


def _single(group: GroupKind, N: int, rng) -> MatrixSample:
    return MatrixSample(sample_batch(group, N, 1, rng)[0], group, N)


def sample_haar_unitary(N: int, rng: np.random.Generator) -> MatrixSample:
    return _single(GroupKind.UNITARY, N, rng)


def sample_haar_orthogonal(N: int, rng: np.random.Generator) -> MatrixSample:
    return _single(GroupKind.ORTHOGONAL, N, rng)


def sample_haar_symplectic(N: int, rng: np.random.Generator) -> MatrixSample:
    return _single(GroupKind.SYMPLECTIC, N, rng)


def sample_coe(N: int, rng: np.random.Generator) -> MatrixSample:
    return _single(GroupKind.COE, N, rng)


def sample_cse(N: int, rng: np.random.Generator) -> MatrixSample:
    return _single(GroupKind.CSE, N, rng)


def constraint_error(sample: MatrixSample) -> float:
    """Largest violation of the defining identities of the sample's group."""
    M = sample.entries
    eye = np.eye(M.shape[0])
    err = float(np.max(np.abs(M.conj().T @ M - eye)))
    if sample.group is GroupKind.ORTHOGONAL:
        err = max(err, float(np.max(np.abs(M.imag))) if np.iscomplexobj(M) else 0.0)
    elif sample.group is GroupKind.SYMPLECTIC:
        J = j_matrix(sample.N)
        err = max(err, float(np.max(np.abs(M.T @ J @ M - J))))
    elif sample.group is GroupKind.COE:
        err = max(err, float(np.max(np.abs(M - M.T))))
    elif sample.group is GroupKind.CSE:
        err = max(err, float(np.max(np.abs(M + M.T))))
    return err


# ---------------------------------------------------------------------------
# estimators


def _resolve(v, N: int) -> int:
    return v.value(N) if isinstance(v, SpIndex) else int(v)


def monomial_factors(group: GroupKind, monomial, N: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """0-based (row, col) lists of plain and conjugated factors."""
    group = GroupKind.parse(group)
    unitary_like = group in (GroupKind.UNITARY, GroupKind.COE, GroupKind.CSE)
    if isinstance(monomial, str):
        monomial = parse_monomial(monomial, unitary=unitary_like)
    size = 2 * N if group in (GroupKind.SYMPLECTIC, GroupKind.CSE) else N

    def conv(pairs):
        out = []
        for a, b in pairs:
            r, c = _resolve(a, N), _resolve(b, N)
            if not (1 <= r <= size and 1 <= c <= size):
                raise ValueError(f"index pair ({a},{b}) out of range [1, {size}]")
            out.append((r - 1, c - 1))
        return out

    if isinstance(monomial, UnitaryMonomial):
        if not unitary_like:
            raise ValueError(f"{group.value} monomials have no conjugated part")
        return conv(monomial.plain_pairs), conv(monomial.conj_pairs)
    if isinstance(monomial, RealMonomial):
        if unitary_like:
            return conv(monomial.pairs), []
        return conv(monomial.pairs), []
    raise TypeError(f"unsupported monomial {monomial!r}")


def evaluate_monomial(batch: np.ndarray, plain, conj) -> np.ndarray:
    out = np.ones(batch.shape[0], dtype=complex)
    for r, c in plain:
        out = out * batch[:, r, c]
    for r, c in conj:
        out = out * np.conj(batch[:, r, c])
    return out


def monomial_samples(group: GroupKind, monomial, N: int, n_samples: int, seed: int,
                     left: np.ndarray | None = None) -> np.ndarray:
    """Monomial values on n_samples draws, chunked over independent streams.

    ``left`` optionally multiplies every draw on the left by a fixed matrix.
    """
    group = GroupKind.parse(group)
    plain, conj = monomial_factors(group, monomial, N)
    n_chunks = -(-n_samples // CHUNK)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    values = []
    remaining = n_samples
    for ss in streams:
        size = min(CHUNK, remaining)
        rng = np.random.Generator(np.random.PCG64(ss))
        batch = sample_batch(group, N, size, rng)
        if left is not None:
            batch = left @ batch
        values.append(evaluate_monomial(batch, plain, conj))
        remaining -= size
    return np.concatenate(values)


def estimate_monomial(group: GroupKind, monomial, N: int, n_samples: int = 100_000, seed: int = 0,
                      left: np.ndarray | None = None) -> EstimatorResult:
    """Sample mean and standard error of a monomial over Haar draws."""
    if n_samples < 100:
        raise ValueError("n_samples must be at least 100")
    vals = monomial_samples(group, monomial, N, n_samples, seed, left)
    mean = complex(vals.mean())
    var = float(vals.real.var(ddof=1) + vals.imag.var(ddof=1))
    return EstimatorResult(mean, math.sqrt(var / n_samples), n_samples, seed)


def compare(exact: Fraction | float | complex, est: EstimatorResult) -> float:
    """z-score |mean - exact| / std_error; infinite for a mismatch with zero error."""
    diff = abs(est.mean - complex(exact))
    if est.std_error == 0:
        return 0.0 if diff < 1e-12 else math.inf
    return diff / est.std_error
