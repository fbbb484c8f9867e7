"""``kfree`` command line.

Exit status: 0 success, 1 internal inconsistency (two routes disagree),
2 usage or input error.
"""

import argparse
import json
import os
import re
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

from . import closed_form, interval, oracle
from .closed_form import InconsistencyError
from .forest import build_forest, construct_max_kfree, forest_to_dot, rk_general, select_optimal
from .strata import is_kfree, make_context

METHOD_CHOICES = ("auto", "coprime", "km", "k2m", "thm5", "forest", "oracle")
ORACLES = ("rk-exhaustive", "rk-pseudoforest", "tilde-exhaustive")


class UsageError(Exception):
    pass


def _dumps(obj):
    return json.dumps(obj, separators=(",", ":"))


def threads():
    """Worker cap from KFREE_THREADS, defaulting to the machine's CPU count."""
    raw = os.environ.get("KFREE_THREADS", "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"KFREE_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"KFREE_THREADS must be a positive integer, got {raw!r}")
    return value


def oracle_value(k, n):
    """Best available independent value: enumeration for tiny n, else the pseudoforest DP."""
    if n <= oracle.EXHAUSTIVE_MAX_N:
        return oracle.oracle_rk_exhaustive(k, n), "rk-exhaustive"
    if n <= oracle.PSEUDOFOREST_MAX_N:
        return oracle.oracle_rk_pseudoforest(k, n), "rk-pseudoforest"
    raise UsageError(f"--check needs n <= {oracle.PSEUDOFOREST_MAX_N}")


def compute_rk(k, n, method):
    if method == "auto":
        ref, _ = closed_form.cross_check(k, n)
        return ref
    if method == "forest":
        return rk_general(k, n)
    if method == "oracle":
        if n > oracle.PSEUDOFOREST_MAX_N:
            raise UsageError(f"--method oracle needs n <= {oracle.PSEUDOFOREST_MAX_N}")
        return closed_form.RkValue(oracle.oracle_rk_pseudoforest(k, n), "oracle")
    found = closed_form.applicable(k, n).get(method)
    if found is None:
        raise UsageError(f"method {method!r} does not apply to k={k}, n={n}")
    return found


def cmd_rk(args, out):
    res = compute_rk(args.k, args.n, args.method)
    payload = {"k": args.k, "n": args.n, "rk": res.value, "method": res.method}
    if args.check:
        ref, which = oracle_value(args.k, args.n)
        if ref != res.value:
            raise InconsistencyError(f"k={args.k}, n={args.n}: {res.method}={res.value}, {which}={ref}")
        payload["check"] = which
    if args.json:
        out.write(_dumps(payload) + "\n")
    else:
        out.write(f"{res.value}\n")
    return 0


def cmd_construct(args, out):
    witness = construct_max_kfree(args.k, args.n)
    expected = rk_general(args.k, args.n).value
    if len(witness) != expected or not witness.is_kfree():
        raise InconsistencyError(f"witness of size {len(witness)} fails against R={expected}")
    elems = witness.tolist()
    if args.json:
        out.write(_dumps({"k": args.k, "n": args.n, "size": len(elems), "elements": elems}) + "\n")
    elif args.csv:
        out.write("residue\n")
        out.writelines(f"{x}\n" for x in elems)
    else:
        out.write(",".join(map(str, elems)) + "\n")
    return 0


def parse_elements(text):
    text = text.strip()
    if text.startswith("{") or text.startswith("["):
        data = json.loads(text)
        if isinstance(data, dict):
            data = data["elements"]
        return [int(x) for x in data]
    tokens = [t for t in re.split(r"[\s,]+", text) if t]
    if tokens and tokens[0] == "residue":
        tokens = tokens[1:]
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise UsageError(f"cannot parse element list: {exc}") from None


def cmd_verify(args, out):
    if args.file is not None:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file) as fh:
                text = fh.read()
    else:
        text = args.set
    elems = sorted(set(parse_elements(text)))
    ok = is_kfree(elems, make_context(args.k, args.n))
    if args.json:
        out.write(_dumps({"k": args.k, "n": args.n, "kfree": ok, "size": len(elems)}) + "\n")
    else:
        out.write(f"k-free: {'true' if ok else 'false'}, size {len(elems)}\n")
    return 0


def cmd_forest(args, out):
    ctx = make_context(args.k, args.n)
    forest = build_forest(ctx)
    sel = select_optimal(forest)
    dot = forest_to_dot(forest, sel if args.boxed else None)
    if args.dot == "-":
        out.write(dot)
    else:
        with open(args.dot, "w") as fh:
            fh.write(dot)
        out.write(
            f"trees: {len(forest.roots)}, nodes: {len(forest)}, "
            f"selected: {len(sel.chosen)}, rk: {rk_general(ctx).value}\n"
        )
    return 0


def cmd_tilde(args, out):
    value = interval.tilde_rk(args.k, args.n)
    mt = interval.main_term(args.k, args.n)
    err = value - mt
    elems = None
    if args.construct:
        sol = interval.construct_min_maximal(args.k, args.n)
        if len(sol) != value or not interval.is_maximal_kfree_interval(sol.elements, args.k, args.n):
            raise InconsistencyError(f"construction of size {len(sol)} fails against {value}")
        elems = sol.elements
    if args.json:
        payload = {"k": args.k, "n": args.n, "tilde_rk": value, "main_term": str(mt), "error": str(err)}
        if elems is not None:
            payload["elements"] = elems
        out.write(_dumps(payload) + "\n")
    else:
        out.write("k,n,tilde_rk,main_term,error\n")
        out.write(f"{args.k},{args.n},{value},{mt},{err}\n")
        if elems is not None:
            out.write(",".join(map(str, elems)) + "\n")
    return 0


def _table_row(job):
    k, n, oracle_max = job
    value = rk_general(k, n).value
    method = "forest"
    if n <= oracle_max:
        ref, _ = oracle_value(k, n)
        if ref != value:
            return k, n, value, method, f"forest={value} oracle={ref}"
        method = "forest+oracle"
    return k, n, value, method, None


def cmd_table(args, out):
    if args.step < 1 or args.n_from < 1 or args.n_to < args.n_from:
        raise UsageError("need 1 <= --n-from <= --n-to and --step >= 1")
    if args.oracle_max > oracle.PSEUDOFOREST_MAX_N:
        raise UsageError(f"--oracle-max is capped at {oracle.PSEUDOFOREST_MAX_N}")
    jobs = [(args.k, n, args.oracle_max) for n in range(args.n_from, args.n_to + 1, args.step)]
    workers = min(threads(), len(jobs))
    if workers > 1 and len(jobs) >= 64:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_table_row, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        rows = [_table_row(j) for j in jobs]
    lines = ["k,n,rk,method\n"] + [f"{k},{n},{v},{m}\n" for k, n, v, m, _ in rows]
    if args.out == "-":
        out.writelines(lines)
    else:
        with open(args.out, "w") as fh:
            fh.writelines(lines)
    bad = [(n, msg) for _, n, _, _, msg in rows if msg]
    if bad:
        raise InconsistencyError(f"{len(bad)} rows disagree with the oracle, first n={bad[0][0]}: {bad[0][1]}")
    return 0


def cmd_sidon(args, out):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        b = closed_form.sidon_bound(args.m)
    if b.warning:
        args.err.write(f"kfree: warning: {b.warning}\n")
    if args.json:
        payload = {
            "m": b.m,
            "n": b.n,
            "rk": b.rk,
            "rk_log_form": b.rk_log_form,
            "exact_bound": b.exact,
            "exact_floor": b.exact_floor,
            "printed_bound": None if b.printed_floor is None else b.printed,
            "printed_floor": b.printed_floor,
            "warning": b.warning,
        }
        out.write(_dumps(payload) + "\n")
    else:
        out.write(f"n = 2^{b.m} - 1 = {b.n}\n")
        out.write(f"R_2(n) = {b.rk} (log2(n-1) form: {b.rk_log_form:.6f})\n")
        out.write(f"bound from exact R_2: {b.exact:.6f} (floor {b.exact_floor})\n")
        if b.printed_floor is None:
            out.write("printed bound: undefined (negative radicand)\n")
        else:
            out.write(f"printed bound: {b.printed:.6f} (floor {b.printed_floor})\n")
    return 0


def cmd_oracle(args, out):
    if args.which == "rk-exhaustive":
        value = oracle.oracle_rk_exhaustive(args.k, args.n)
    elif args.which == "rk-pseudoforest":
        value = oracle.oracle_rk_pseudoforest(args.k, args.n)
    else:
        value = oracle.oracle_tilde_exhaustive(args.k, args.n)
    out.write(f"{value}\n")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="kfree", description="k-free sets in Z/nZ and in [1, n]")
    sub = p.add_subparsers(dest="command", required=True)

    def kn(sp):
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("rk", help="maximum size of a k-free set in Z/nZ")
    kn(sp)
    sp.add_argument("--method", choices=METHOD_CHOICES, default="auto")
    sp.add_argument("--check", action="store_true", help="compare against an oracle")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_rk)

    sp = sub.add_parser("construct", help="print a maximum k-free set")
    kn(sp)
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="check that a residue set is k-free")
    kn(sp)
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--set", help="comma separated residues")
    src.add_argument("--file", help="file with residues ('-' for stdin)")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("forest", help="write the divisor forest as Graphviz DOT")
    kn(sp)
    sp.add_argument("--dot", required=True, help="output path ('-' for stdout)")
    sp.add_argument("--boxed", action="store_true", help="box the selected divisors")
    sp.set_defaults(func=cmd_forest)

    sp = sub.add_parser("tilde", help="smallest maximal k-free subset of [1, n]")
    kn(sp)
    sp.add_argument("--construct", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_tilde)

    sp = sub.add_parser("table", help="CSV of R_k(n) over a range of n")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n-from", type=int, required=True)
    sp.add_argument("--n-to", type=int, required=True)
    sp.add_argument("--step", type=int, default=1)
    sp.add_argument("--oracle-max", type=int, default=0, help="oracle-check rows with n <= M")
    sp.add_argument("--out", required=True, help="output path ('-' for stdout)")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("sidon-bound", help="2-fold Sidon bound for Mersenne prime moduli")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_sidon)

    sp = sub.add_parser("oracle", help="run a brute-force reference directly")
    sp.add_argument("--which", choices=ORACLES, required=True)
    kn(sp)
    sp.set_defaults(func=cmd_oracle)
    return p


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    args.err = err
    try:
        return args.func(args, out)
    except InconsistencyError as exc:
        err.write(f"kfree: inconsistency: {exc}\n")
        return 1
    except (UsageError, ValueError, OverflowError, TypeError, KeyError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        err.write(f"kfree: error: {msg}\n")
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
