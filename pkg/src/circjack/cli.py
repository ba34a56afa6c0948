"""Command-line front end.

Every command writes a table: ``#`` header lines (version, full config,
seed), a column-name row, then data rows.  Floats are printed with 17
significant digits so the files round-trip exactly.  Exit status is 0 on
success, 1 on a domain error (bad parameter, unwritable path) and 2 when some
series or quadrature did not converge; partial output is still written.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from .errors import ConsistencyError, DomainError
from .ensemble import EnsembleParams, MCMCConfig, MomentQuery, correlation_R, mcmc_sample, moments_K, oracle_K_quadrature
from .hyper import HyperSeriesSpec, TruncationPolicy, hyper_F, hyper_F2, identity_suite, positivity_check
from .jack import jack_coefficients, jack_eval
from .limits import (
    LimitQuery,
    bulk_edge_check,
    correlation_limit,
    singularity_limit_check,
    transition_check,
)

COMMANDS = ("jack", "hyper", "moments", "correlation", "limit-check", "sample", "identities")
EXIT_OK, EXIT_DOMAIN, EXIT_NONCONV = 0, 1, 2


class UsageError(DomainError):
    pass


# ------------------------------------------------------------------ parsing


def parse_complex(text: str) -> complex:
    """``re+imi`` literal (also ``re``, ``imi``); dot decimal separator only."""
    t = text.strip()
    if not t or "j" in t or "J" in t or "," in t:
        raise UsageError(f"bad complex literal {text!r}", param="complex")
    try:
        return complex(t[:-1] + "j") if t.endswith("i") else complex(float(t))
    except ValueError:
        raise UsageError(f"bad complex literal {text!r}", param="complex") from None


def _complex_list(text):
    return [parse_complex(v) for v in text.split(",") if v.strip()] if text else []


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()] if text else []
    except ValueError:
        raise UsageError(f"bad number list {text!r}", param="list") from None


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()] if text else []
    except ValueError:
        raise UsageError(f"bad integer list {text!r}", param="list") from None


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.16e}"
    return str(v)


# ------------------------------------------------------------------ config


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    output_path: Optional[str] = None
    format: str = "csv"
    seed: Optional[int] = None
    threads: Optional[int] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}", param="command")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}", param="format")
        allowed = set(_PARAMS[self.command])
        unknown = sorted(set(self.params) - allowed)
        if unknown:
            raise UsageError(f"unknown key {unknown[0]!r} for {self.command}", param=unknown[0])

    def header(self) -> dict:
        cfg = {"command": self.command, "params": self.params, "format": self.format, "threads": self.threads}
        return {"version": __version__, "config": json.dumps(cfg, sort_keys=True), "seed": self.seed}


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    converged: bool = True


def emit(table: Table, config: RunConfig) -> str:
    """Serialize a table (CSV or JSON) with the run header."""
    header = config.header()
    header.update(table.notes)
    if config.format == "json":
        payload = {
            **{k: v for k, v in header.items() if k != "config"},
            "config": json.loads(header["config"]),
            "columns": table.columns,
            "rows": [[_fmt(v) for v in r] for r in table.rows],
        }
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    for k, v in header.items():
        buf.write(f"# {k}: {v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _pmap(fn, items, threads):
    if threads and threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(it) for it in items]


def _need(p, key):
    if p.get(key) is None:
        raise UsageError(f"missing --{key.replace('_', '-')}", param=key)
    return p[key]


def _policy(p):
    return TruncationPolicy(max_degree=p.get("max_degree") or 96, rel_tol=p.get("rel_tol") or 1e-14)


# ------------------------------------------------------------------ commands


def _run_jack(cfg: RunConfig) -> Table:
    p = cfg.params
    kappa = tuple(_int_list(_need(p, "kappa")))
    alpha_text = str(_need(p, "alpha"))
    alpha = Fraction(alpha_text) if p.get("exact") else float(alpha_text)
    points = [_complex_list(x) for x in p.get("x") or []]
    if not points:
        exp = jack_coefficients(kappa, alpha, max_length=p.get("n"))
        rows = [[" ".join(map(str, mu)), str(c) if p.get("exact") else float(c)] for mu, c in exp.coefficients.items()]
        return Table(["mu", "coefficient"], rows)

    def one(item):
        i, x = item
        v = complex(jack_eval(kappa, alpha, np.asarray(x, dtype=complex)))
        return [i, v.real, v.imag]

    return Table(["index", "value_re", "value_im"], _pmap(one, list(enumerate(points)), cfg.threads))


def _run_hyper(cfg: RunConfig) -> Table:
    p = cfg.params
    spec = HyperSeriesSpec(
        _complex_list(p.get("upper")), _complex_list(p.get("lower")), float(_need(p, "alpha")), _policy(p)
    )
    xs = [_complex_list(x) for x in _need(p, "x")]
    ys = [_complex_list(y) for y in p.get("y") or []]
    if ys and len(ys) != len(xs):
        raise UsageError("need one --y per --x", param="y")

    def one(item):
        i = item
        r = (hyper_F2(spec, xs[i], ys[i]) if ys else hyper_F(spec, xs[i])).scalar()
        v = complex(r.value)
        return [i, v.real, v.imag, r.degree_used, bool(r.converged), float(r.tail_estimate)]

    rows = _pmap(one, list(range(len(xs))), cfg.threads)
    return Table(["index", "value_re", "value_im", "degree", "converged", "tail"], rows, converged=all(r[4] for r in rows))


def _params(p):
    return EnsembleParams(float(_need(p, "beta")), parse_complex(str(_need(p, "b"))), int(_need(p, "N")))


def _run_moments(cfg: RunConfig) -> Table:
    p = cfg.params
    P = _params(p)
    ss = [_complex_list(s) for s in p.get("s") or []]
    ts = [_complex_list(t) for t in p.get("t") or []]
    if not ss and not ts:
        raise UsageError("need at least one --s or --t", param="s")
    npts = max(len(ss), len(ts))
    ss = ss or [[]] * npts
    ts = ts or [[]] * npts
    if len(ss) != len(ts):
        raise UsageError("--s and --t must be repeated the same number of times", param="t")
    for s, t in zip(ss, ts):
        if p.get("m") is not None and len(s) != p["m"]:
            raise UsageError(f"--m {p['m']} does not match {len(s)} s-values", param="m")
        if p.get("n") is not None and len(t) != p["n"]:
            raise UsageError(f"--n {p['n']} does not match {len(t)} t-values", param="n")
    oracle = bool(p.get("oracle"))

    def one(i):
        q = MomentQuery(ss[i], ts[i])
        v = complex(moments_K(P, q))
        row = [i, v.real, v.imag]
        if oracle:
            o = oracle_K_quadrature(P, q)
            row += [complex(o.value).real, complex(o.value).imag, bool(o.converged)]
        return row

    cols = ["index", "value_re", "value_im"] + (["oracle_re", "oracle_im", "oracle_converged"] if oracle else [])
    rows = _pmap(one, list(range(npts)), cfg.threads)
    return Table(cols, rows, converged=all(r[5] for r in rows) if oracle else True)


def _run_correlation(cfg: RunConfig) -> Table:
    p = cfg.params
    kind = p.get("kind") or "finite"
    k = int(_need(p, "k"))
    pts = [_float_list(r) for r in _need(p, "r")]
    for r in pts:
        if len(r) != k:
            raise UsageError(f"each --r needs k = {k} values", param="r")
    if kind == "finite":
        P = _params(p)

        def one(i):
            return [i, correlation_R(P, k, pts[i])]

    else:
        beta = float(_need(p, "beta"))
        b = parse_complex(str(p.get("b") or "0"))
        rho = float(p.get("rho") or 1.0)

        def one(i):
            return [i, correlation_limit(kind, beta, k, pts[i], b=b, rho=rho)]

    notes = {"convention": "k-point function of an ensemble of k + N points"} if kind == "finite" else {}
    return Table(["index", "value"], _pmap(one, list(range(len(pts))), cfg.threads), notes)


def _run_limit_check(cfg: RunConfig) -> Table:
    p = cfg.params
    regime = _need(p, "regime")
    m, n = int(p.get("m") or 0), int(p.get("n") or 0)
    if regime == "singularity":
        rep = singularity_limit_check(
            _params({**p, "N": 1}), m, n, _float_list(p.get("x")), float(p.get("rho") or 1.0),
            _int_list(p.get("N_list") or "8,16,32"),
        )
    elif regime in ("bulk", "edge"):
        q = LimitQuery(regime, _float_list(p.get("x")), m, n, float(_need(p, "d")), p.get("theta"), rho=p.get("rho"))
        rep = bulk_edge_check(q, float(_need(p, "beta")), _int_list(p.get("N_list") or "8,16,24"))
    elif regime == "transition":
        rep = transition_check(
            _float_list(p.get("b_list") or "20,40,80"), float(p.get("alpha") or 1.0), m, n, _float_list(_need(p, "eta"))
        )
    else:
        raise UsageError(f"unknown regime {regime!r}", param="regime")
    rows = [
        [r.key, r.lhs.real, r.lhs.imag, r.rhs.real, r.rhs.imag, r.rel_err, r.series_degree, r.phase_offset]
        for r in rep.rows
    ]
    cols = ["key", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_err", "series_degree", "phase_offset"]
    return Table(cols, rows, {"strictly_decreasing": rep.strictly_decreasing()})


def _run_sample(cfg: RunConfig) -> Table:
    p = cfg.params
    P = _params(p)
    conf = MCMCConfig(
        sweeps=int(p.get("sweeps") or 10000), burn_in=int(p.get("burn_in") or 1000), seed=int(cfg.seed or 0)
    )
    chain = mcmc_sample(P, config=conf)
    rows = [list(a) for a in chain.angles]
    return Table([f"theta{j}" for j in range(P.N)], rows, {"acceptance": f"{chain.acceptance:.6f}", "step": f"{chain.step:.16e}"})


def _run_identities(cfg: RunConfig) -> Table:
    p = cfg.params
    npoints = int(p.get("npoints") or 100)
    seed = int(cfg.seed or 0)
    rep = identity_suite(npoints=npoints, seed=seed, tol=float(p.get("tol") or 1e-10))
    rows = [[c.name, c.max_residual, c.passed, c.npoints] for c in rep.checks]
    if p.get("positivity"):
        for name in ("0F0", "1F0"):
            c = positivity_check(name, npoints=int(p.get("positivity_points") or 10000), seed=seed)
            rows.append([f"positivity_{name}", float(c.nonpositive), c.passed, c.npoints])
    return Table(["identity", "max_rel_residual", "passed", "points"], rows)


_RUNNERS = {
    "jack": _run_jack,
    "hyper": _run_hyper,
    "moments": _run_moments,
    "correlation": _run_correlation,
    "limit-check": _run_limit_check,
    "sample": _run_sample,
    "identities": _run_identities,
}

_PARAMS = {
    "jack": ("kappa", "alpha", "x", "n", "exact"),
    "hyper": ("upper", "lower", "alpha", "x", "y", "max_degree", "rel_tol"),
    "moments": ("beta", "b", "N", "m", "n", "s", "t", "oracle"),
    "correlation": ("kind", "beta", "b", "N", "k", "r", "rho"),
    "limit-check": ("regime", "b", "beta", "m", "n", "x", "N_list", "rho", "d", "theta", "b_list", "alpha", "eta"),
    "sample": ("beta", "b", "N", "sweeps", "burn_in"),
    "identities": ("npoints", "tol", "positivity", "positivity_points"),
}


def dispatch(config: RunConfig, out=None) -> int:
    """Run one command and write its table.  Returns the exit status."""
    err = sys.stderr
    try:
        table = _RUNNERS[config.command](config)
    except DomainError as e:
        err.write(f"error [{getattr(e, 'param', None) or '?'}]: {e}\n")
        return EXIT_DOMAIN
    except ConsistencyError as e:
        err.write(f"error [consistency]: {e}\n")
        return EXIT_NONCONV
    text = emit(table, config)
    if config.output_path and config.output_path != "-":
        try:
            with open(config.output_path, "w", newline="\n") as fh:
                fh.write(text)
        except OSError as e:
            err.write(f"error [output]: cannot write {config.output_path}: {e}\n")
            return EXIT_DOMAIN
    else:
        (out or sys.stdout).write(text)
    if not table.converged:
        err.write("warning: some evaluations did not converge\n")
        return EXIT_NONCONV
    return EXIT_OK


# ------------------------------------------------------------------ argparse


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message, param="argv")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="circjack", description="Jack-type hypergeometric functions and circular Jacobi ensembles.")
    ap.add_argument("--version", action="version", version=f"circjack {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", "-o", default=None, help="output file (default: standard output)")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--threads", type=int, default=None, help="evaluate grid points in parallel; order is kept")
        return sp

    sp = common(sub.add_parser("jack", help="Jack polynomial coefficients or values"))
    sp.add_argument("--kappa", required=True, help="partition, e.g. 2,1")
    sp.add_argument("--alpha", required=True, help="Jack parameter (a fraction such as 1/2 with --exact)")
    sp.add_argument("--n", type=int, default=None, help="number of variables (limits the monomials)")
    sp.add_argument("--x", action="append", help="evaluation point, comma-separated; repeat for a grid")
    sp.add_argument("--exact", action="store_true", help="rational arithmetic")

    sp = common(sub.add_parser("hyper", help="one-set or two-set hypergeometric series"))
    sp.add_argument("--upper", default="", help="upper parameters a_1,...,a_p")
    sp.add_argument("--lower", default="", help="lower parameters b_1,...,b_q")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--x", action="append", required=True, help="argument, comma-separated; repeat for a grid")
    sp.add_argument("--y", action="append", help="second argument set (two-set series); one per --x")
    sp.add_argument("--max-degree", type=int, default=None)
    sp.add_argument("--rel-tol", type=float, default=None)

    def ens(sp):
        sp.add_argument("--beta", type=float, required=True)
        sp.add_argument("--b", default="0", help="singularity parameter, re+imi")
        sp.add_argument("--N", type=int, required=True)

    sp = common(sub.add_parser("moments", help="moments of characteristic polynomials"))
    ens(sp)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--s", action="append", help="s_1,...,s_m (re+imi); repeat for a grid")
    sp.add_argument("--t", action="append", help="t_1,...,t_n (re+imi); repeat for a grid")
    sp.add_argument("--oracle", action="store_true", help="also run the quadrature oracle (N <= 3)")

    sp = common(sub.add_parser(
        "correlation",
        help="even-beta correlation functions",
        description="The finite k-point function refers to an ensemble of k + N points "
        "(N is the background size), so it integrates to (k+N)!/N! over [0, 2pi)^k.",
    ))
    sp.add_argument("--kind", choices=("finite", "singularity", "bulk", "edge"), default="finite")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--b", default="0")
    sp.add_argument("--N", type=int, default=None, help="background size (finite only)")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--r", action="append", required=True, help="k angles or scaled points; repeat for a grid")
    sp.add_argument("--rho", type=float, default=None)

    sp = common(sub.add_parser("limit-check", help="convergence run against a scaling limit"))
    sp.add_argument("--regime", choices=("singularity", "bulk", "edge", "transition"), required=True)
    sp.add_argument("--beta", type=float, default=2.0)
    sp.add_argument("--b", default="0")
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--x", default="", help="scaled arguments x_1,...,x_{m+n}")
    sp.add_argument("--N-list", default=None)
    sp.add_argument("--rho", type=float, default=None)
    sp.add_argument("--d", type=float, default=None)
    sp.add_argument("--theta", type=float, default=None)
    sp.add_argument("--b-list", default=None)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--eta", default=None)

    sp = common(sub.add_parser("sample", help="Metropolis samples of the eigenangles"))
    ens(sp)
    sp.add_argument("--sweeps", type=int, default=None)
    sp.add_argument("--burn-in", type=int, default=None)

    sp = common(sub.add_parser("identities", help="randomized identity and positivity checks"))
    sp.add_argument("--npoints", type=int, default=None)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--positivity", action="store_true")
    sp.add_argument("--positivity-points", type=int, default=None)
    return ap


_COMMON = ("command", "format", "output", "seed", "threads")


def config_from_args(argv=None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    params = {k: v for k, v in ns.items() if k not in _COMMON and v is not None and v is not False}
    return RunConfig(ns["command"], params, ns["output"], ns["format"], ns["seed"], ns["threads"])


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except DomainError as e:
        sys.stderr.write(f"error [{getattr(e, 'param', None) or '?'}]: {e}\n")
        return EXIT_DOMAIN
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
