"""Command-line front end.

    complex-ou hermite --m 1 --n 1
    complex-ou eigencheck --max-degree 6 --theta 0.7
    complex-ou semicheck --theta 0.5 --t 0.5,1.0 --degree 4 --dim 2 --mode both
    complex-ou simulate --theta 0.3 --t-end 1 --steps 50 --paths 4
    complex-ou hyper --p 2 --t 0.5 --theta 0.9 --variant proof
    complex-ou chaos --degree 3 --dim 2

Flags may also come from ``--config FILE`` (``key = value`` lines; flags win).
Exit status: 0 success, 1 a check exceeded its tolerance, 2 usage error.
Each run writes a JSON manifest next to ``--out`` (or to stderr).
"""
import argparse
import csv
import datetime as _dt
import io
import json
import sys

import numpy as np

from . import __version__
from .chaos import ChaosIndex, basis_polynomial, expand, project
from .generator import RotationParams
from .hermite import make_hermite
from .hyper import SCAN_COLUMNS, hyper_scan, scan_to_csv
from .montecarlo import DEFAULT_SEED, make_rng
from .polynomial import WirtingerPolynomial, random_polynomial
from .process import PathConfig, SDEParams, sample_paths
from .semigroup import eigen_residuals, mehler_apply, mehler_apply_mc, spectral_semigroup

DEFAULT_THETAS = (0.0, 0.3, -0.3, 1.2, -1.2, 1.5, -1.5)


class UsageError(Exception):
    pass


def _floats(s):
    try:
        return [float(x) for x in str(s).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}")


def _pair(s):
    try:
        m, n = (int(x) for x in str(s).split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'm,n', got {s!r}")
    return m, n


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


# -- subcommands -------------------------------------------------------------
# each returns (text, exit_code)

def cmd_hermite(a):
    if a.m < 0 or a.n < 0:
        raise UsageError("--m and --n must be nonnegative")
    p = make_hermite(a.m, a.n)
    if a.normalized:
        p = basis_polynomial(ChaosIndex((a.m,), (a.n,)), 1)
    return p.to_json(indent=2) + "\n", 0


def cmd_eigencheck(a):
    thetas = a.theta if a.theta else list(DEFAULT_THETAS)
    rows = eigen_residuals(a.max_degree, thetas, a.dim)
    code = 1 if any(r[3] > a.tol for r in rows) else 0
    return _csv(("m", "n", "theta", "residual"), rows), code


def _fixture(degree, dim, seed):
    rng = make_rng(seed)
    f = random_polynomial(rng, dim, degree)
    x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return f, x


def cmd_semicheck(a):
    f, x = _fixture(a.degree, a.dim, a.seed)
    e = expand(f)
    rows = []
    code = 0
    for t in a.t:
        for th in a.theta:
            pr = RotationParams(th)
            sv = spectral_semigroup(e, t, pr).reconstruct()(x)
            meh = mehler_apply(f, x, t, pr)
            rel = abs(sv - meh) / max(1.0, abs(meh))
            if rel > a.tol:
                code = 1
            if a.mode in ("spectral", "both"):
                rows.append((t, pr.theta, sv.real, sv.imag, rel, "spectral"))
            if a.mode in ("mehler", "both"):
                rows.append((t, pr.theta, meh.real, meh.imag, rel, "mehler"))
            if a.samples > 0:
                est = mehler_apply_mc(f, x, t, pr, n_samples=a.samples, seed=a.seed)
                z = max(est.zscores(meh))
                if z > 4:
                    code = 1
                rows.append((t, pr.theta, est.value.real, est.value.imag, float(z), "monte-carlo"))
    return _csv(("t", "theta", "value_re", "value_im", "residual", "route"), rows), code


def cmd_simulate(a):
    try:
        p = SDEParams(a.a, a.theta, a.sigma2)
        cfg = PathConfig(complex(a.z0_re, a.z0_im), a.t_end, a.steps, a.seed, a.scheme)
    except ValueError as exc:
        raise UsageError(str(exc))
    if a.summary:
        z = sample_paths(cfg, p, a.paths).values
        mean_exact = complex(np.exp(-p.alpha * a.t_end) * cfg.z0)
        out = {
            "paths": a.paths, "t_end": a.t_end, "scheme": a.scheme,
            "mean": [float(z.mean().real), float(z.mean().imag)],
            "mean_exact": [mean_exact.real, mean_exact.imag],
            "abs2": float(np.mean(np.abs(z) ** 2)),
            "var_per_coord": [float(np.var(z.real, ddof=1)), float(np.var(z.imag, ddof=1))],
            "stationary_var_per_coord": p.stationary_variance,
        }
        return json.dumps(out, indent=2) + "\n", 0
    traj = sample_paths(cfg, p, a.paths, record=True)
    ts = np.arange(a.steps + 1) * cfg.dt
    rows = [(pid, s, float(ts[s]), float(traj[s, pid].real), float(traj[s, pid].imag))
            for pid in range(a.paths) for s in range(a.steps + 1)]
    return _csv(("path_id", "step", "t", "re", "im"), rows), 0


def cmd_hyper(a):
    if min(a.p) <= 1:
        raise UsageError("--p values must exceed 1")
    rows = hyper_scan(a.degree, a.dim, a.p, a.t, a.theta, n_polys=a.polys,
                      n_samples=a.samples, seed=a.seed, variant=a.variant)
    code = 1 if a.variant == "proof" and not all(r["pass"] for r in rows) else 0
    return scan_to_csv(rows, SCAN_COLUMNS, extra=("n_violations",)), code


def cmd_chaos(a):
    if a.poly:
        try:
            with open(a.poly) as fh:
                f = WirtingerPolynomial.from_json(fh.read())
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read polynomial from {a.poly}: {exc}")
    else:
        f = random_polynomial(make_rng(a.seed), a.dim, a.degree)
    if a.project:
        return project(f, *a.project).to_json(indent=2) + "\n", 0
    return expand(f).to_json(indent=2) + "\n", 0


# -- parser ------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="complex-ou", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command")

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="key=value parameter file")
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.set_defaults(func=fn)
        return sp

    sp = add("hermite", cmd_hermite, "print J_{m,n} as JSON")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--normalized", action="store_true")

    sp = add("eigencheck", cmd_eigencheck, "generator eigen-relation residuals")
    sp.add_argument("--max-degree", type=int, default=8)
    sp.add_argument("--theta", type=_floats, default=None)
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--tol", type=float, default=1e-12)

    sp = add("semicheck", cmd_semicheck, "spectral vs Mehler semigroup")
    sp.add_argument("--theta", type=_floats, default=[0.5])
    sp.add_argument("--t", type=_floats, default=[1.0])
    sp.add_argument("--degree", type=int, default=4)
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--mode", choices=("spectral", "mehler", "both"), default="both")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--samples", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("simulate", cmd_simulate, "simulate the complex OU SDE")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--theta", type=float, default=0.0)
    sp.add_argument("--sigma2", type=float, default=None)
    sp.add_argument("--z0-re", type=float, default=0.0)
    sp.add_argument("--z0-im", type=float, default=0.0)
    sp.add_argument("--t-end", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--paths", type=int, default=1)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--scheme", choices=("exact", "euler"), default="exact")
    sp.add_argument("--summary", action="store_true", help="moment summary JSON instead of paths")

    sp = add("hyper", cmd_hyper, "hypercontractivity scan")
    sp.add_argument("--p", type=_floats, default=[2.0])
    sp.add_argument("--t", type=_floats, default=[0.5])
    sp.add_argument("--theta", type=_floats, default=[0.0])
    sp.add_argument("--variant", choices=("statement", "proof"), default="proof")
    sp.add_argument("--degree", type=int, default=3)
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--polys", type=int, default=20)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sp = add("chaos", cmd_chaos, "chaos expansion of a polynomial")
    sp.add_argument("--poly", help="polynomial JSON file; random if omitted")
    sp.add_argument("--degree", type=int, default=3)
    sp.add_argument("--dim", type=int, default=1)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--project", type=_pair, default=None, metavar="M,N")
    return ap, sub


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def _apply_config(sp, path):
    try:
        cfg = read_config(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    actions = {a.dest: a for a in sp._actions}
    defaults = {}
    for k, v in cfg.items():
        if k not in actions or k in ("config", "help", "func"):
            raise UsageError(f"unknown config key {k!r}")
        act = actions[k]
        if isinstance(act, argparse._StoreTrueAction):
            defaults[k] = v.lower() in ("1", "true", "yes", "on")
        elif act.type is not None:
            try:
                defaults[k] = act.type(v)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"bad value for {k}: {exc}")
        else:
            defaults[k] = v
        if act.required:
            act.required = False
    sp.set_defaults(**defaults)


def _manifest(args):
    params = {k: v for k, v in vars(args).items() if k not in ("func",)}
    return {
        "subcommand": args.command,
        "parameters": params,
        "seed": params.get("seed"),
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    ap, sub = build_parser()
    if not argv:
        ap.print_usage(stderr)
        return 2
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv[1:])
        if known.config and argv[0] in sub.choices:
            _apply_config(sub.choices[argv[0]], known.config)
        try:
            args = ap.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        if args.command is None:
            ap.print_usage(stderr)
            return 2
        text, code = args.func(args)
    except UsageError as exc:
        print(f"complex-ou: error: {exc}", file=stderr)
        return 2
    manifest = json.dumps(_manifest(args), indent=2, default=str)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
            with open(args.out + ".manifest.json", "w") as fh:
                fh.write(manifest + "\n")
        except OSError as exc:
            print(f"complex-ou: error: cannot write {args.out}: {exc}", file=stderr)
            return 2
    else:
        stdout.write(text)
        print(manifest, file=stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
