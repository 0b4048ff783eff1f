"""Command-line front end: ``starspec <command> --model NAME [options]``.

Commands
--------
dos      D0, D1 and rho sweeps over lambda (CSV + atom sidecar, or JSON)
roots    approximate eigenvalues from the index function, optionally checked
expect   <Q>(lambda) sweeps, optionally split by support branch
trace    T0, T1 for f(x), optionally Richardson-checked against the oracle
symbol   exact coherent-state symbol against h0 + h1/j on an x grid
verify   oracle-consistency battery; exit status 3 on any failure

Exit codes: 0 success, 1 usage, 2 numerical failure, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__, expr, models, oracle, spectra, states, symbols
from .numerics import BracketError, QuadratureError
from .sequence import load_profile_json, materialize, profiles_from_expressions

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3

MODEL_PARAMS = {
    "toeplitz": ("a", "b"),
    "alternating": (),
    "lipkin-even": ("gamma",),
    "lipkin-odd": ("gamma",),
    "uniaxial": ("gamma",),
    "laguerre": ("alpha0", "alpha1"),
    "jacobi": ("alpha0", "alpha1", "beta0", "beta1"),
    "collective": ("hx", "hy", "hz", "gx", "gy"),
}


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


# --- configuration -----------------------------------------------------------


def _j_list(text):
    try:
        js = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad j list {text!r}")
    if not js or any(j <= 0 or (2 * j) != int(2 * j) for j in js):
        raise argparse.ArgumentTypeError("j values must be positive multiples of 1/2")
    return js


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model")
    g.add_argument("--model", required=True,
                   help="one of " + ", ".join(sorted(MODEL_PARAMS)) + ", custom")
    for name in ("gamma", "alpha0", "alpha1", "beta0", "beta1", "a", "b",
                 "hx", "hy", "hz", "gx", "gy"):
        g.add_argument(f"--{name}", type=float)
    for name in ("A0", "A1", "B0", "B1"):
        g.add_argument(f"--{name}", metavar="EXPR", help=f"custom profile {name}(x)")
    g.add_argument("--profile-file", help="JSON file with A0, A1, B0, B1 expressions")
    o = common.add_argument_group("output")
    o.add_argument("--out", help="output path (default: stdout)")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--lambda-min", type=float)
    grid.add_argument("--lambda-max", type=float)
    grid.add_argument("--lambda-points", type=int, default=401,
                      help="grid nodes (default 401, i.e. 400 intervals)")

    ap = argparse.ArgumentParser(prog="starspec", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dos", parents=[common, grid], help="distribution and density sweep")
    p.add_argument("--order", type=int, choices=(0, 1), default=1)
    p.add_argument("--verify", action="store_true", help="compare with closed forms")

    p = sub.add_parser("roots", parents=[common], help="approximate eigenvalues")
    p.add_argument("--j", type=_j_list, default=[100.0])
    p.add_argument("--order", type=int, choices=(0, 1), default=1)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int)
    p.add_argument("--verify", action="store_true", help="add oracle roots and errors")

    p = sub.add_parser("expect", parents=[common, grid], help="expectation value sweep")
    p.add_argument("--Q-A0", default="x", metavar="EXPR")
    p.add_argument("--Q-B0", default="0", metavar="EXPR")
    p.add_argument("--branches", action="store_true")

    p = sub.add_parser("trace", parents=[common], help="trace expansion of f")
    p.add_argument("--f", required=True, metavar="EXPR")
    p.add_argument("--j", type=_j_list, default=[100.0, 200.0, 400.0])
    p.add_argument("--verify", action="store_true")
    p.add_argument("--threshold", type=float, default=0.05,
                   help="allowed |Richardson - T1| with --verify")

    p = sub.add_parser("symbol", parents=[common], help="coherent-state symbol grid")
    p.add_argument("--j", type=_j_list, default=[64.0])
    p.add_argument("--x-points", type=int, default=49)
    p.add_argument("--theta", type=float, nargs="+", default=[0.0, math.pi / 2])

    p = sub.add_parser("verify", parents=[common], help="oracle-consistency battery")
    p.add_argument("--j", type=_j_list, default=[100.0, 200.0])
    return ap


def _model_params(args):
    name = args.model
    allowed = MODEL_PARAMS[name]
    given = {k: getattr(args, k) for k in ("gamma", "alpha0", "alpha1", "beta0", "beta1",
                                            "a", "b", "hx", "hy", "hz", "gx", "gy")
             if getattr(args, k) is not None}
    extra = sorted(set(given) - set(allowed))
    if extra:
        raise UsageError(f"model {name!r} does not take --{', --'.join(extra)}")
    return given


def build_model(args) -> models.ModelDescriptor:
    name = args.model
    if name == "custom":
        if args.profile_file:
            try:
                p = load_profile_json(args.profile_file)
            except (OSError, ValueError, KeyError) as exc:
                raise UsageError(f"cannot read {args.profile_file}: {exc}")
        else:
            if args.A0 is None:
                raise UsageError("custom model needs --A0 (and optionally --A1, --B0, --B1) "
                                 "or --profile-file")
            p = profiles_from_expressions(args.A0, args.A1 or "0",
                                          args.B0 or "1", args.B1 or "0")
        return models.ModelDescriptor("custom", dict(p.parameters), p, lambda j: materialize(p, j))
    if name not in MODEL_PARAMS:
        raise UsageError(f"unknown model {name!r}; choose from "
                         f"{', '.join(sorted(MODEL_PARAMS))}, custom")
    params = _model_params(args)
    if name == "collective":
        h = tuple(params.pop(k, d) for k, d in (("hx", 0.0), ("hy", 0.0), ("hz", 1.0)))
        return models.collective_spin(h, **params)
    return models.build(name, **params)


def _lambda_grid(args, md):
    lo, hi = _range(md)
    lo = lo if args.lambda_min is None else args.lambda_min
    hi = hi if args.lambda_max is None else args.lambda_max
    if args.lambda_points < 2 or not hi > lo:
        raise UsageError("lambda grid must have at least 2 points and lambda-max > lambda-min")
    return np.linspace(lo, hi, args.lambda_points)


def _range(md):
    if md.is_band:
        ev = oracle.eig_dense_hermitian(md.exact(64)).eigenvalues
        pad = 0.05 * (ev[-1] - ev[0])
        return float(ev[0] - pad), float(ev[-1] + pad)
    return md.profiles.range


# --- output ------------------------------------------------------------------


def _metadata(args, md, **extra):
    meta = dict(command=args.command, model=md.name,
                parameters={k: v for k, v in md.parameters.items()},
                tolerances=dict(tol=args.tol), version=__version__)
    meta.update(extra)
    return meta


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _jsonable(v):
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return v if math.isfinite(v) else None


def emit(args, columns, rows, meta, atoms=None):
    """Write a table as CSV (plus atom sidecar) or JSON."""
    if args.format == "json":
        doc = dict(metadata=meta, columns=list(columns),
                   rows=[[_jsonable(v) for v in r] for r in rows])
        if atoms is not None:
            doc["atoms"] = [dict(location=a.location, weight=a.weight) for a in atoms]
        text = json.dumps(doc, indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
        if atoms is not None and args.format == "csv":
            side = Path(args.out).with_suffix(".atoms.json")
            side.write_text(json.dumps(
                dict(metadata=meta,
                     atoms=[dict(location=a.location, weight=a.weight) for a in atoms]),
                indent=1) + "\n")
    else:
        sys.stdout.write(text)


def _safe(f, *a):
    try:
        return f(*a)
    except ValueError:
        return float("nan")


# --- commands ----------------------------------------------------------------


def cmd_dos(args):
    md = build_model(args)
    grid = _lambda_grid(args, md)
    tol = args.tol
    if md.is_band:
        cols = ["lambda", "d0"] + (["d1"] if args.order == 1 else [])
        rows = []
        for lam in grid:
            D0, D1 = spectra.band_d0_d1(md.profiles, lam, max(tol, 1e-9))
            rows.append([lam, D0] + ([D1] if args.order == 1 else []))
        emit(args, cols, rows, _metadata(args, md, order=args.order), atoms=[])
        return EXIT_OK

    p = md.profiles
    cf = md.closed_forms
    cols = ["lambda", "d0", "rho0"]
    if args.order == 1:
        cols += ["d1", "rho1_cont"]
    extra = [k for k in ("d0", "rho0", "d1", "rho1") if k in cf
             and (args.order == 1 or k in ("d0", "rho0"))]
    cols += [f"{k}_closed" for k in extra]
    rows = []
    for lam in grid:
        r = [lam, spectra.d0(p, lam, tol), _safe(spectra.rho0, p, lam)]
        if args.order == 1:
            r += [spectra.d1(p, lam, tol), _safe(spectra.rho1, p, lam)]
        r += [_safe(cf[k], lam) for k in extra]
        rows.append(r)
    atom_list = spectra.atoms(p) if args.order == 1 else []
    emit(args, cols, rows, _metadata(args, md, order=args.order), atoms=atom_list)

    if args.verify:
        if not extra:
            raise UsageError(f"model {md.name!r} has no closed forms to verify against")
        arr = np.array(rows, dtype=float)
        bad = []
        generic = dict(d0="d0", rho0="rho0", d1="d1", rho1="rho1_cont")
        for k in extra:
            a, b = arr[:, cols.index(generic[k])], arr[:, cols.index(f"{k}_closed")]
            ok = np.isfinite(a) & np.isfinite(b)
            # densities blow up at the edges; compare them relative to size
            scale = 1.0 if k.startswith("d") else np.maximum(1.0, np.abs(b[ok]))
            err = float(np.max(np.abs(a[ok] - b[ok]) / scale)) if ok.any() else 0.0
            lim = 1e-7 if k.startswith("d") else 1e-5
            print(f"{k}: max deviation {err:.3e} (limit {lim:g})", file=sys.stderr)
            if err > lim:
                bad.append(k)
        if bad:
            raise VerificationFailed(f"closed forms disagree for {', '.join(bad)}")
    return EXIT_OK


def cmd_roots(args):
    md = build_model(args)
    if md.is_band:
        raise UsageError("roots needs a tridiagonal model")
    cols = ["j", "n", "root0", "root1"]
    if args.verify:
        cols += ["oracle", "err0_pct", "err1_pct", "gap_err0_pct", "gap_err1_pct"]
    rows = []
    summary = []
    for j in args.j:
        D = int(round(2 * j)) + 1
        n_max = D if args.n_max is None else min(args.n_max, D)
        if not 1 <= args.n_min <= n_max:
            raise UsageError(f"n range must lie inside 1..{D}")
        ns = np.arange(args.n_min, n_max + 1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", models.BoundaryRootWarning)
            r0 = np.array([models.polynomial_roots(md, j, int(n), 0) for n in ns])
            r1 = np.array([models.polynomial_roots(md, j, int(n), 1) for n in ns])
        if args.verify:
            ev = oracle.eig_tridiagonal(md.exact(j)).eigenvalues
            gaps = np.append(np.diff(ev), np.nan)[ns - 1]
            ex = ev[ns - 1]
            with np.errstate(divide="ignore", invalid="ignore"):
                e0 = 100 * np.abs(r0 - ex) / np.abs(ex)
                e1 = 100 * np.abs(r1 - ex) / np.abs(ex)
                g0 = 100 * np.abs(r0 - ex) / gaps
                g1 = 100 * np.abs(r1 - ex) / gaps
            for k, n in enumerate(ns):
                rows.append([j, int(n), r0[k], r1[k], ex[k], e0[k], e1[k], g0[k], g1[k]])
            fin = np.isfinite(e1)
            summary.append((j, np.max(e1[fin]), np.mean(e1[fin]), np.mean(e0[fin]),
                            np.nanmax(g1), np.nanmean(g1)))
        else:
            rows += [[j, int(n), r0[k], r1[k]] for k, n in enumerate(ns)]
    emit(args, cols, rows, _metadata(args, md))
    for j, mx, mean, mean0, gmx, gmean in summary:
        print(f"j={j:g}: order-1 error max {mx:.4f}% mean {mean:.5f}% "
              f"(order-0 mean {mean0:.5f}%); gap-relative max {gmx:.3f}% mean {gmean:.4f}%",
              file=sys.stderr)
    return EXIT_OK


def cmd_expect(args):
    md = build_model(args)
    if md.is_band:
        raise UsageError("expect needs a tridiagonal model")
    p = md.profiles
    q = states.ObservableProfiles(expr.parse(args.Q_A0), expr.parse(args.Q_B0))
    grid = _lambda_grid(args, md)
    cols = ["lambda", "expect", "intervals"]
    if args.branches:
        cols += ["branch0", "branch1"]
    rows = []
    for lam in grid:
        try:
            sup = states.support_set(p, lam)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", states.MultiIntervalWarning)
                val = states.expectation(p, q, lam)
        except ValueError:
            rows.append([lam, float("nan"), 0] + ([float("nan")] * 2 if args.branches else []))
            continue
        r = [lam, val, len(sup)]
        if args.branches:
            r += [states.expectation(p, q, lam, k) if k < len(sup) else float("nan")
                  for k in (0, 1)]
        rows.append(r)
    emit(args, cols, rows, _metadata(args, md, observable=dict(A0=args.Q_A0, B0=args.Q_B0)))
    return EXIT_OK


def cmd_trace(args):
    md = build_model(args)
    if md.is_band:
        raise UsageError("trace needs a tridiagonal model")
    p = md.profiles
    f = expr.parse(args.f)
    T0 = spectra.trace_T0(p, f, args.tol)
    T1 = spectra.trace_T1(p, f, tol=args.tol)
    cols, row = ["T0", "T1"], [T0, T1]
    if args.verify:
        if len(args.j) < 2:
            raise UsageError("--verify needs at least two j values")
        vals = [(j, oracle.finite_trace(md.exact(j), f)) for j in args.j]
        rich = oracle.richardson_T1(vals, T0)
        cols += ["richardson_T1", "residual"]
        row += [rich, rich - T1]
    emit(args, cols, [row], _metadata(args, md, f=args.f, j=args.j))
    if args.verify and abs(row[-1]) > args.threshold:
        raise VerificationFailed(f"Richardson T1 = {row[-2]:.6g} differs from T1 = {T1:.6g} "
                                 f"by more than {args.threshold:g}")
    return EXIT_OK


def cmd_symbol(args):
    md = build_model(args)
    if md.is_band:
        exp = symbols.band_h0_h1(md.profiles)
    else:
        exp = symbols.h0_h1(md.profiles)
    xs = np.linspace(0, 1, args.x_points + 2)[1:-1]
    cols = ["j", "x", "theta", "exact", "h0", "h1", "predicted"]
    rows = []
    for j in args.j:
        m = md.exact(j)
        jj = int(round(2 * j)) / 2
        for th in args.theta:
            h0 = np.asarray(exp.h0(xs, th), dtype=float)
            h1 = np.asarray(exp.h1(xs, th), dtype=float)
            for k, x in enumerate(xs):
                if md.is_band:
                    c = symbols._coherent_vector(m.two_j, x, th)
                    ex = float(np.vdot(c, m.dense() @ c).real)
                else:
                    ex = symbols.exact_symbol(m, x, th)
                rows.append([j, x, th, ex, h0[k], h1[k], h0[k] + h1[k] / jj])
    emit(args, cols, rows, _metadata(args, md))
    return EXIT_OK


def _battery(md, js, tol):
    """Yield (name, value, limit) triples; a check passes when value <= limit."""
    p = md.profiles
    j = js[-1]
    m = md.exact(j)
    if md.is_band:
        e = oracle.eig_dense_hermitian(m)
        lo, hi = e.eigenvalues[0], e.eigenvalues[-1]
        lams = np.linspace(lo, hi, 12)[1:-1]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", spectra.NearSingularWarning)
            dev = max(abs(oracle.staircase(e, lam) - spectra.band_d0_d1(p, lam)[0])
                      for lam in lams)
        yield "staircase vs D0", dev, 3 / j
        return
    e = oracle.eig_tridiagonal(m)
    lo, hi = p.range
    yield "eigenvalues inside spectral range", \
        max(0.0, lo - e.eigenvalues[0], e.eigenvalues[-1] - hi), 0.05 + 4 / j
    lams = np.linspace(lo, hi, 12)[1:-1]
    dev = max(abs(oracle.staircase(e, lam) - spectra.d0(p, lam, tol)) for lam in lams)
    yield "staircase vs D0", dev, 3 / j
    sc = max(abs(oracle.sturm_count(m, lam) / m.dim - oracle.staircase(e, lam)) for lam in lams)
    yield "Sturm count vs staircase", sc, 1e-12
    mass = spectra.d0(p, lo + 1e-9 * (hi - lo), tol) + 1 - spectra.d0(p, hi - 1e-9 * (hi - lo), tol)
    yield "D0 mass outside the spectrum", mass, 1e-4
    mid = 0.5 * (lo + hi) + 0.1234 * (hi - lo)
    r = spectra.rho0(p, mid, tol)
    h = 1e-4 * (hi - lo)
    fd = (spectra.d0(p, mid + h, tol) - spectra.d0(p, mid - h, tol)) / (2 * h)
    yield "rho0 = dD0/dlambda", abs(fd - r) / max(1.0, abs(r)), 1e-5
    sq = expr.parse("x^2")
    T0 = spectra.trace_T0(p, sq, tol)
    T1 = spectra.trace_T1(p, sq, tol=tol)
    vals = [(jj, oracle.finite_trace(md.exact(jj), sq)) for jj in js]
    yield "Richardson T1 for x^2", abs(oracle.richardson_T1(vals, T0) - T1), 0.05 * max(1.0, abs(T1))
    for k in ("d0", "d1"):
        if k in md.closed_forms:
            f = getattr(spectra, k)
            dev = max(abs(f(p, lam, tol) - md.closed_forms[k](lam)) for lam in lams)
            yield f"closed-form {k}", dev, 1e-7


def cmd_verify(args):
    md = build_model(args)
    failed = []
    rows = []
    for name, value, limit in _battery(md, args.j, args.tol):
        ok = bool(value <= limit)
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {value:.3e} (limit {limit:.3e})",
              file=sys.stderr)
        rows.append([name, value, limit, int(ok)])
        if not ok:
            failed.append(name)
    if args.format == "json" or args.out:
        emit(args, ["check", "value", "limit", "passed"], [r[1:] for r in rows],
             _metadata(args, md, checks=[r[0] for r in rows]))
    if failed:
        raise VerificationFailed(f"{len(failed)} check(s) failed: {', '.join(failed)}")
    return EXIT_OK


COMMANDS = dict(dos=cmd_dos, roots=cmd_roots, expect=cmd_expect, trace=cmd_trace,
                symbol=cmd_symbol, verify=cmd_verify)


def main(argv=None):
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, expr.ParseError) as exc:
        print(f"starspec {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationFailed as exc:
        print(f"starspec {args.command}: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (QuadratureError, BracketError, oracle.OracleError, ArithmeticError,
            ValueError, np.linalg.LinAlgError) as exc:
        print(f"starspec {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
