"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from wgcalc import symchar, weingarten
from wgcalc.combinat import (
    IntegerPartition,
    Permutation,
    all_permutations,
    cycle_type,
    fiber_type,
    index_tuples,
    integer_partitions,
    pairing_to_permutation,
    word_norm,
)
from wgcalc.exactalg import ExactMatrix, PoleError, exact_rank, RationalFunction, UniPolynomial, pseudo_invert_gram
from wgcalc.exactalg.matrix import to_integer_array
from wgcalc.haar_mc import compare, estimate_monomial
from wgcalc.integrate import (
    integrate,
    integrate_symmetric_group,
    integrate_symmetric_group_oracle,
    integrate_symplectic,
    integrate_unitary,
    parse_monomial,
    projection,
)
from wgcalc.symchar import (
    catalan_product,
    central_binomial_product,
    count_monotone_walks,
    elementary_jm,
    gamma_element,
    gamma_product,
    sphere_sum,
    strictly_monotone_factorization,
)
from wgcalc.weingarten import (
    GroupKind,
    gram_bruteforce,
    gram_symbolic,
    gram_unitary,
    invariant_vectors,
    weingarten_matrix,
    wg_symplectic_at,
    wg_table_from_gram,
    wg_unitary,
    wg_unitary_asymptotic,
    wg_unitary_baik_rains,
    wg_unitary_series,
)

N = UniPolynomial.x()


def rf(num, den) -> RationalFunction:
    return RationalFunction(UniPolynomial.constant(num) if isinstance(num, int) else num, den)


@pytest.mark.criterion(1, "link integral 2/(N(N^2-1)(N^2-4)), 1/60 at N=3, < 1 s")
def test_criterion_01_link_integral(criterion):
    weingarten._wg_unitary_cached.cache_clear()
    weingarten._wg_unitary_terms.cache_clear()
    symchar._mn.cache_clear()
    t0 = time.perf_counter()
    m = parse_monomial("conj:1,1;2,2;3,3 plain:1,2;2,3;3,1", unitary=True)
    symbolic = integrate_unitary(m)
    at3 = integrate_unitary(m, 3)
    elapsed = time.perf_counter() - t0
    expected = rf(2, N * (N**2 - 1) * (N**2 - 4))
    criterion.check(symbolic == expected, f"symbolic {symbolic}")
    criterion.check(at3 == Fraction(1, 60), f"N=3 gives {at3}")
    criterion.check(elapsed < 1.0, f"{elapsed:.3f} s")
    assert criterion.ok


@pytest.mark.criterion(2, "symmetric group: formula == Gram route == N! oracle, d<=3, N<=4")
def test_criterion_02_symmetric_group(criterion):
    t0 = time.perf_counter()
    compared = 0
    for d in range(1, 4):
        for n in range(1, 5):
            labels, W = weingarten_matrix(GroupKind.SYMMETRIC, d, n)
            pos = {p: k for k, p in enumerate(labels)}
            tuples = list(index_tuples(n, d))
            types = {i: fiber_type(i) for i in tuples}
            for i in tuples:
                for j in tuples:
                    oracle = integrate_symmetric_group_oracle(i, j, n)
                    formula = integrate_symmetric_group(i, j, n)
                    # Gram route: sum_{p,q} a_p(i) W_pq a_q(j) with a_p(i) = [type(i) == p]
                    gram_route = W[pos[types[i]], pos[types[j]]]
                    if not (oracle == formula == gram_route):
                        criterion.check(False, f"d={d} N={n} i={i} j={j}: {oracle} {formula} {gram_route}")
                    compared += 1
    elapsed = time.perf_counter() - t0
    criterion.check(compared == sum(n ** (2 * d) for d in range(1, 4) for n in range(1, 5)), f"{compared} index pairs")
    criterion.check(elapsed < 30, f"{elapsed:.1f} s")
    assert criterion.ok


@pytest.mark.criterion(3, "unitary character sum == exact Gram inversion, d<=5, < 10 min")
def test_criterion_03_unitary_routes(criterion):
    t0 = time.perf_counter()
    for d in range(1, 6):
        gram = gram_unitary(d)
        W = weingarten.invert_symmetric(gram.matrix)
        perms = gram.labels
        closed = {a: wg_unitary(a) for a in integer_partitions(d)}
        bad = [
            (a, b)
            for a, rho in enumerate(perms)
            for b, sigma in enumerate(perms)
            if W[a, b] != closed[cycle_type(rho.inverse() * sigma)]
        ]
        criterion.check(not bad, f"d={d}: {len(perms)}x{len(perms)} entries, {len(bad)} mismatches")
    elapsed = time.perf_counter() - t0
    criterion.check(elapsed < 600, f"{elapsed:.1f} s")
    assert criterion.ok


@pytest.mark.criterion(4, "orthogonal d=2 table and the r12 r13 r22 r23 integral")
def test_criterion_04_orthogonal(criterion):
    table = wg_table_from_gram(GroupKind.ORTHOGONAL, 2)
    den = N * (N - 1) * (N + 2)
    criterion.check(table[(1, 1)] == rf(N + 1, den), f"Wg(1,1) = {table[(1, 1)].format('z')}")
    criterion.check(table[(2,)] == rf(-1, den), f"Wg(2) = {table[(2,)].format('z')}")
    value = integrate(GroupKind.ORTHOGONAL, "1,2;1,3;2,2;2,3")
    criterion.check(value == rf(-1, den), f"integral {value}")
    assert criterion.ok


def _symplectic_routes(d: int, n: int):
    """(brute-force pseudoinverse W, closed-form W or PoleError, Gram-evaluated pseudoinverse W)."""
    bf = gram_bruteforce(GroupKind.SYMPLECTIC, d, n)
    W_bf = pseudo_invert_gram(bf.matrix)
    perms = [pairing_to_permutation(p) for p in bf.labels]
    try:
        closed = ExactMatrix(
            len(perms), len(perms),
            (wg_symplectic_at(s.inverse() * t).evaluate(n) for s in perms for t in perms),
        )
    except PoleError as exc:
        closed = exc
    W_sym = pseudo_invert_gram(gram_symbolic(GroupKind.SYMPLECTIC, d).matrix.evaluate(n))
    return bf, W_bf, closed, W_sym


@pytest.mark.criterion(5, "symplectic worked integral and closed form vs brute-force Gram, d<=3, N in {2,3}")
def test_criterion_05_symplectic(criterion):
    value = integrate_symplectic(parse_monomial("1,1;2,N+2;N+1,2;N+2,N+1"))
    criterion.check(value == rf(1, 4 * N * (N - 1) * (2 * N + 1)), f"worked integral {value}")
    for d in range(1, 4):
        for n in (2, 3):
            bf, W_bf, closed, W_sym = _symplectic_routes(d, n)
            criterion.check(W_sym == W_bf, f"d={d} N={n}: Gram route pseudoinverse == brute force")
            if isinstance(closed, PoleError):
                rank = exact_rank(bf.matrix)
                # outside the stable range the closed form has a genuine pole and
                # the Gram matrix is singular, so only the pseudoinverse exists
                criterion.check(rank < len(bf.labels), f"d={d} N={n}: closed form N/A (pole at {closed.point}), Gram rank {rank}/{len(bf.labels)}")
            else:
                criterion.check(closed == W_bf, f"d={d} N={n}: closed form == brute-force inverse")
    assert criterion.ok


@pytest.mark.criterion(6, "Jucys: e_r(J) == L_r and prod(1 + qJ_k) == sum q^|p| p, d<=6")
def test_criterion_06_jucys(criterion):
    for d in range(1, 7):
        ok = all(elementary_jm(r, d) == sphere_sum(r, d) for r in range(d))
        criterion.check(ok, f"d={d}: e_r(J) = L_r for r < {d}")
        criterion.check(gamma_product(d) == gamma_element(d), f"d={d}: gamma product form")
    assert criterion.ok


def _strict_products(d: int) -> dict[Permutation, int]:
    """Count every product of transpositions with strictly increasing labels."""
    counts: dict[Permutation, int] = {}
    labels = range(2, d + 1)
    for k in range(d):
        for js in itertools.combinations(labels, k):
            for iis in itertools.product(*[range(1, j) for j in js]):
                p = Permutation.identity(d)
                for i, j in zip(iis, js):
                    p = p * Permutation.transposition(d, i, j)
                counts[p] = counts.get(p, 0) + 1
    return counts


@pytest.mark.criterion(7, "strictly monotone factorization: uniqueness d<=4, post-conditions d<=6")
def test_criterion_07_monotone_factorization(criterion):
    for d in range(1, 5):
        counts = _strict_products(d)
        unique = len(counts) == len(all_permutations(d)) and set(counts.values()) == {1}
        criterion.check(unique, f"d={d}: every permutation has exactly one strictly monotone factorization")
        agree = all(
            strictly_monotone_factorization(p) == list(_strict_factor(p, d)) for p in all_permutations(d)
        )
        criterion.check(agree, f"d={d}: algorithm returns the enumerated factorization")
    for d in range(1, 7):
        ok = True
        for p in all_permutations(d):
            f = strictly_monotone_factorization(p)
            prod = Permutation.identity(d)
            for i, j in f:
                prod = prod * Permutation.transposition(d, i, j)
            labels = [j for _, j in f]
            ok &= prod == p and len(f) == word_norm(p) and all(a < b for a, b in zip(labels, labels[1:]))
            ok &= all(1 <= i < j <= d for i, j in f)
        criterion.check(ok, f"d={d}: product, length and strict labels")
    assert criterion.ok


def _strict_factor(p: Permutation, d: int):
    for k in range(d):
        for js in itertools.combinations(range(2, d + 1), k):
            for iis in itertools.product(*[range(1, j) for j in js]):
                q = Permutation.identity(d)
                for i, j in zip(iis, js):
                    q = q * Permutation.transposition(d, i, j)
                if q == p:
                    return list(zip(iis, js))
    raise AssertionError("no factorization")


@pytest.mark.criterion(8, "1/N expansion == weakly monotone walk counts, d<=4; leading count 2 vs central binomial form 20/3")
def test_criterion_08_expansion(criterion):
    for d in range(1, 5):
        perms = all_permutations(d)
        ok = True
        for rho in perms:
            for sigma in perms:
                series = wg_unitary_series(rho, sigma, 2)
                walks = wg_unitary_asymptotic(rho, sigma, 2)
                ok &= [Fraction(w) for w in walks] == series
        criterion.check(ok, f"d={d}: {len(perms) ** 2} pairs, first 3 coefficients")
    report = []
    for d in range(1, 5):
        for alpha in integer_partitions(d):
            s = weingarten.cycle_representative(alpha)
            enumerated = count_monotone_walks(Permutation.identity(d), s, word_norm(s))
            report.append((alpha, enumerated, catalan_product(alpha), central_binomial_product(alpha)))
            criterion.check(enumerated == catalan_product(alpha), f"{alpha}: enumeration {enumerated} == Catalan product")
    three = next(r for r in report if r[0] == IntegerPartition((3,)))
    print("\nleading monotone walk counts (alpha, enumeration, Catalan form, central binomial form):")
    for alpha, e, c, b in report:
        print(f"  {str(alpha):10s} {e:4d} {c:4d} {str(b):>8s}")
    criterion.note(f"alpha=(3): enumeration {three[1]} vs central binomial form {three[3]}")
    criterion.check(three[1] == 2 and three[3] == Fraction(20, 3), "discrepancy documented: 2 vs 20/3")
    assert criterion.ok


def _unitary_coordinates(d: int, n: int) -> np.ndarray:
    labels, vectors = invariant_vectors(GroupKind.UNITARY, d, n)
    A = np.zeros((n ** (2 * d), len(labels)), dtype=object)
    for c, (idx, val) in enumerate(vectors):
        A[idx, c] = [int(v) for v in val]
    return A


@pytest.mark.criterion(9, "unstable range: Baik-Rains projection == pseudoinverse projection, d<=4, N<d; U(1) |u11|^4")
def test_criterion_09_unstable(criterion):
    for d in range(2, 5):
        for n in range(1, d):
            br = wg_unitary_baik_rains(d, n)
            full = gram_unitary(d).matrix.evaluate(n)
            W_pinv = pseudo_invert_gram(full)
            perms = gram_unitary(d).labels
            pos = [perms.index(p) for p in br.basis]
            if n ** (2 * d) <= 256:
                A = _unitary_coordinates(d, n)
                Wb, db = to_integer_array(br.weingarten)
                Wp, dp = to_integer_array(W_pinv)
                AB = A[:, pos]
                P_br = AB.dot(Wb).dot(AB.T)
                P_pinv = A.dot(Wp).dot(A.T)
                same = bool(np.all(P_br * dp == P_pinv * db))
                criterion.check(same, f"d={d} N={n}: explicit {A.shape[0]}x{A.shape[0]} projections equal, basis {len(br.basis)}")
            else:
                # compare A* P A, which determines P on the span of the invariants
                GB = ExactMatrix(full.rows, len(pos), (full[i, j] for i in range(full.rows) for j in pos))
                lhs = GB @ br.weingarten @ GB.transpose()
                rhs = full @ W_pinv @ full
                criterion.check(lhs == rhs == full, f"d={d} N={n}: projections equal in Gram coordinates, basis {len(br.basis)}")
    m = parse_monomial("conj:1,1;1,1 plain:1,1;1,1", unitary=True)
    via_characters = integrate_unitary(m, 1)
    labels, W = weingarten_matrix(GroupKind.UNITARY, 2, 1)
    via_pinv = sum((W[a, b] for a in range(len(labels)) for b in range(len(labels))), Fraction(0))
    criterion.check(via_characters == via_pinv == 1, f"U(1) |u11|^4: {via_characters} (characters), {via_pinv} (pseudoinverse)")
    assert criterion.ok


MC_CASES = {
    "U": [
        ("conj:1,1;2,2;3,3 plain:1,2;2,3;3,1", 3),
        ("conj:1,1 plain:1,1", 2),
        ("conj:1,1;1,1 plain:1,1;1,1", 2),
        ("conj:1,1;2,2 plain:1,1;2,2", 3),
        ("conj:1,1;2,2 plain:1,2;2,1", 4),
        ("conj:1,2;2,1;3,3 plain:1,1;2,2;3,3", 3),
    ],
    "O": [
        ("1,2;1,3;2,2;2,3", 3),
        ("1,1;1,1", 2),
        ("1,1;1,1;1,1;1,1", 3),
        ("1,1;1,1;2,2;2,2", 4),
        ("1,1;2,2;1,2;2,1", 2),
        ("1,1;1,1;1,1;1,1;1,1;1,1", 2),
    ],
    "Sp": [
        ("1,1;2,N+2;N+1,2;N+2,N+1", 2),
        ("1,1;N+1,N+1", 2),
        ("1,1;N+1,N+1", 3),
        ("1,1;1,1;N+1,N+1;N+1,N+1", 2),
        ("1,2;N+1,N+2", 3),
        ("1,1;N+1,N+1;2,2;N+2,N+2", 4),
    ],
    "COE": [
        ("conj:1,1 plain:1,1", 2),
        ("conj:1,1 plain:1,1", 3),
        ("conj:1,2 plain:1,2", 4),
        ("conj:1,1;1,1 plain:1,1;1,1", 3),
        ("conj:1,2;1,2 plain:1,2;1,2", 2),
        ("conj:1,1;2,2 plain:1,2;1,2", 3),
    ],
    "CSE": [
        ("conj:1,N+1 plain:1,N+1", 2),
        ("conj:1,N+1 plain:1,N+1", 3),
        ("conj:1,2 plain:1,2", 2),
        ("conj:1,N+1;1,N+1 plain:1,N+1;1,N+1", 3),
        ("conj:1,2;N+1,N+2 plain:1,2;N+1,N+2", 2),
        ("conj:1,N+2 plain:1,N+2", 4),
    ],
}


@pytest.mark.criterion(10, "Monte Carlo cross-validation for U/O/Sp/COE/CSE, z <= 5, < 5 min")
def test_criterion_10_monte_carlo(criterion):
    t0 = time.perf_counter()
    worst = {}
    for group, cases in MC_CASES.items():
        zs = []
        for k, (mono, n) in enumerate(cases):
            exact = integrate(group, mono, n)
            est = estimate_monomial(group, mono, n, 100_000, seed=1000 + k)
            z = compare(exact, est)
            zs.append(z)
            criterion.check(z <= 5, f"{group} N={n} {mono}: exact {exact}, mean {est.mean.real:.5f}, z={z:.2f}")
        worst[group] = max(zs)
    # the two normalization questions, decided by the data
    sp = estimate_monomial("Sp", "1,1;N+1,N+1", 2, 100_000, seed=7)
    criterion.check(compare(Fraction(1, 4), sp) <= 5 < compare(Fraction(-1, 4), sp),
                    f"Sp degree-1 sign: mean {sp.mean.real:.4f} selects +1/(2N)")
    coe = estimate_monomial("COE", "conj:1,1 plain:1,1", 3, 100_000, seed=8)
    criterion.check(compare(Fraction(2, 4), coe) <= 5 < compare(Fraction(1, 4), coe),
                    f"COE E|v11|^2 at N=3: mean {coe.mean.real:.4f} selects 2/(N+1)")
    elapsed = time.perf_counter() - t0
    criterion.note("worst z: " + ", ".join(f"{g} {z:.2f}" for g, z in worst.items()))
    criterion.check(elapsed < 300, f"{elapsed:.1f} s")
    assert criterion.ok


@pytest.mark.criterion(11, "projection idempotency P^2 = P = P* for S, U, O")
def test_criterion_11_projections(criterion):
    grid = [("S", 3, 4), ("U", 2, 3), ("O", 2, 3)]
    for group, d_max, n_max in grid:
        for d in range(1, d_max + 1):
            for n in range(1, n_max + 1):
                proj = projection(group, d, n)
                P = proj.matrix
                ok = P @ P == P and P == P.transpose()
                criterion.check(ok, f"{group} d={d} N={n}: {P.rows}x{P.rows}, rank {proj.rank}")
    assert criterion.ok
