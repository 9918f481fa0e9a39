"""``wg`` command line front end.

Exit codes: 0 success, 1 usage error, 2 mathematical error (pole,
singular matrix, infeasible brute force), 3 failed Monte Carlo check.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from .combinat import IntegerPartition, Permutation, word_norm
from .exactalg import PoleError, RationalFunction, SingularMatrixError
from .integrate import MonomialSyntaxError, integrate
from .weingarten import (
    GroupKind,
    InfeasibleError,
    cached_table,
    falling_factorial,
    gram_bruteforce,
    gram_symbolic,
    sigma_mu,
    stable_range,
    wg_coe,
    wg_cse,
    wg_unitary,
    wg_unitary_asymptotic,
    wg_unitary_numeric,
    wg_unitary_series,
)

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_MC_FAIL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rank(text: str):
    if text == "symbolic":
        return None
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'symbolic' or a positive integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("N must be positive")
    return n


def _group(text: str) -> GroupKind:
    try:
        return GroupKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _one_line(text: str) -> Permutation:
    try:
        return Permutation(tuple(int(t) for t in text.split(",")))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad permutation {text!r}: {exc}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wg", description="Exact Weingarten calculus.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, group=True):
        if group:
            sp.add_argument("--group", required=True, type=_group, help="U, O, Sp, S, COE or CSE")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    fn = sub.add_parser("fn", help="Weingarten function at a class label")
    common(fn)
    fn.add_argument("--type", required=True, help="class label: partition parts '2,1' (block count for S)")
    fn.add_argument("--n", default="symbolic", type=_rank)

    it = sub.add_parser("integrate", help="exact Haar integral of a monomial")
    common(it)
    it.add_argument("--monomial", required=True)
    it.add_argument("--n", default="symbolic", type=_rank)

    ex = sub.add_parser("expand", help="1/N expansion against monotone walk counts")
    common(ex, group=False)
    ex.add_argument("--d", type=int, required=True)
    ex.add_argument("--rho", type=_one_line, required=True)
    ex.add_argument("--sigma", type=_one_line, required=True)
    ex.add_argument("--orders", type=int, default=3)

    gr = sub.add_parser("gram", help="Gram matrix of the invariants")
    common(gr)
    gr.add_argument("--d", type=int, required=True)
    gr.add_argument("--n", default="symbolic", type=_rank)

    mc = sub.add_parser("mc-verify", help="compare an exact integral with Monte Carlo")
    common(mc)
    mc.add_argument("--n", type=_rank, required=True)
    mc.add_argument("--monomial", required=True)
    mc.add_argument("--samples", type=int, default=100_000)
    mc.add_argument("--seed", type=int, default=0)
    return p


def _fmt(value, var: str = "N") -> str:
    if isinstance(value, RationalFunction):
        return value.format(var)
    return str(Fraction(value))


def _json_value(value) -> dict:
    rf = value if isinstance(value, RationalFunction) else RationalFunction(Fraction(value))
    return rf.to_json()


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _query(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k == "json":
            continue
        if isinstance(v, GroupKind):
            v = v.value
        elif isinstance(v, Permutation):
            v = list(v.images)
        elif v is None and k == "n":
            v = "symbolic"
        out[k] = v
    return out


def _value_payload(args, value, d: int) -> dict:
    N = getattr(args, "n", None)
    return {
        "query": _query(args),
        "value": _json_value(value),
        "regime": "symbolic" if N is None else "numeric",
        "stable": True if N is None else stable_range(args.group, d, N),
    }


def _orth_table_value(group: GroupKind, mu: IntegerPartition, N):
    table = cached_table(group, mu.size, "symbolic" if N is None or stable_range(group, mu.size, N) else N)
    v = table[mu]
    if N is not None and isinstance(v, RationalFunction):
        return v.evaluate(N)
    return v


def cmd_fn(args) -> int:
    g, N = args.group, args.n
    if g is GroupKind.SYMMETRIC:
        try:
            k = int(args.type)
        except ValueError:
            raise UsageError(f"the S label is a block count, got {args.type!r}")
        if k < 1:
            raise UsageError("block count must be positive")
        if N is None:
            from .exactalg import UniPolynomial

            value = RationalFunction(UniPolynomial.constant(1), falling_factorial(UniPolynomial.x(), k))
        elif N < k:
            raise ArithmeticError(f"insufficient alphabet: {k} blocks need N >= {k}")
        else:
            value = Fraction(1, falling_factorial(N, k))
        _emit(args, _value_payload(args, value, k), _fmt(value))
        return EXIT_OK
    try:
        mu = IntegerPartition.parse(args.type)
    except ValueError as exc:
        raise UsageError(f"bad partition {args.type!r}: {exc}")
    if not mu.parts:
        raise UsageError("empty partition")
    d = mu.size
    if g is GroupKind.UNITARY:
        if N is None:
            value = wg_unitary(mu)
        elif N >= d:
            value = wg_unitary(mu).evaluate(N)
        else:
            value = wg_unitary_numeric(mu, N)
    elif g in (GroupKind.ORTHOGONAL, GroupKind.SYMPLECTIC):
        value = _orth_table_value(g, mu, N)
    elif g is GroupKind.COE:
        value = wg_coe(sigma_mu(mu), N)
    else:
        value = wg_cse(sigma_mu(mu), N)
    _emit(args, _value_payload(args, value, d), _fmt(value))
    return EXIT_OK


def _monomial_degree(group: GroupKind, text: str) -> int:
    from .integrate import parse_monomial

    unitary_like = group in (GroupKind.UNITARY, GroupKind.COE, GroupKind.CSE)
    m = parse_monomial(text, unitary=unitary_like)
    if group is GroupKind.UNITARY:
        return max(m.d_conj, m.d_plain)
    if group in (GroupKind.COE, GroupKind.CSE):
        return max(m.d_conj, m.d_plain)
    if group is GroupKind.SYMMETRIC:
        return len(m)
    return len(m) // 2


def cmd_integrate(args) -> int:
    d = _monomial_degree(args.group, args.monomial)
    value = integrate(args.group, args.monomial, args.n)
    _emit(args, _value_payload(args, value, d), _fmt(value))
    return EXIT_OK


def cmd_expand(args) -> int:
    rho, sigma = args.rho, args.sigma
    if rho.degree != args.d or sigma.degree != args.d:
        raise UsageError(f"--rho and --sigma must be permutations of [{args.d}]")
    if args.orders < 0:
        raise UsageError("--orders must be non-negative")
    walks = wg_unitary_asymptotic(rho, sigma, args.orders)
    series = wg_unitary_series(rho, sigma, args.orders)
    match = [Fraction(w) == s for w, s in zip(walks, series)]
    r = word_norm(rho.inverse() * sigma)
    payload = {
        "query": _query(args),
        "walks": walks,
        "series": [str(s) for s in series],
        "match": all(match),
    }
    lines = [f"(-1)^{r} N^{args.d + r} Wg = sum_k W_k N^(-2k)", "k\twalks\tseries"]
    lines += [f"{k}\t{w}\t{s}" for k, (w, s) in enumerate(zip(walks, series))]
    lines.append("MATCH" if all(match) else "MISMATCH")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if all(match) else EXIT_MATH


def cmd_gram(args) -> int:
    g, N = args.group, args.n
    if args.d < 1:
        raise UsageError("--d must be positive")
    if g in (GroupKind.COE, GroupKind.CSE):
        raise UsageError(f"no Gram matrix for {g.value}")
    gram = gram_symbolic(g, args.d) if N is None else gram_bruteforce(g, args.d, N)
    labels = [str(lab) for lab in gram.labels]
    m = gram.matrix
    payload = {
        "query": _query(args),
        "labels": labels,
        "matrix": [[_json_value(v) for v in m.row(i)] for i in range(m.rows)],
        "regime": "symbolic" if N is None else "numeric",
    }
    text = "\n".join(f"{lab}\t" + "\t".join(_fmt(v) for v in m.row(i)) for i, lab in enumerate(labels))
    _emit(args, payload, text)
    return EXIT_OK


def cmd_mc_verify(args) -> int:
    from .haar_mc import Z_THRESHOLD, compare, estimate_monomial

    if args.group is GroupKind.SYMMETRIC:
        raise UsageError("Monte Carlo is available for U, O, Sp, COE and CSE")
    if args.samples < 100:
        raise UsageError("--samples must be at least 100")
    exact = integrate(args.group, args.monomial, args.n)
    est = estimate_monomial(args.group, args.monomial, args.n, args.samples, args.seed)
    z = compare(exact, est)
    ok = z <= Z_THRESHOLD
    payload = {
        "query": _query(args),
        "exact": str(exact),
        "mean": [est.mean.real, est.mean.imag],
        "std_error": est.std_error,
        "z": z,
        "pass": ok,
    }
    text = "\n".join([
        f"exact    {exact}  ({float(exact):.10g})",
        f"estimate {est.mean.real:.10g} {est.mean.imag:+.3g}i",
        f"stderr   {est.std_error:.4g}",
        f"z        {z:.4f}",
        "PASS" if ok else "FAIL",
    ])
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_MC_FAIL


COMMANDS = {
    "fn": cmd_fn,
    "integrate": cmd_integrate,
    "expand": cmd_expand,
    "gram": cmd_gram,
    "mc-verify": cmd_mc_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except MonomialSyntaxError as exc:
        print(f"wg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"wg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PoleError, SingularMatrixError, InfeasibleError, ArithmeticError) as exc:
        print(f"wg: math error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except ValueError as exc:
        print(f"wg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
