"""Command-line interface: ``thinpoint {disc,thin,bound,sweep,profile}``.

Exit status is 0 on success, 2 on invalid usage or input, 3 on output
failures. Outputs are written to a temporary file and renamed into place,
so a failed run leaves no partial files behind.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bounds
from ._io import OutputError, atomic_path
from .discrepancy import ContractError, ks_vs_cdf, star_discrepancy
from .distributions import Uniform01, parse_distribution
from .harness import PRESETS, TrialConfig, derive_seed, emit_profiles, run_sweep, run_trial
from .pointset import DomainError, PointFileError, PointSet, from_unsorted, read_point_file
from .thinning import OnlineThinner, ThinningReport, offline_keep_mask

EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _load_input(args) -> tuple[np.ndarray, object]:
    """Raw sample values and the distribution they are measured against."""
    sources = (args.infile is not None) + (args.n is not None)
    if sources != 1:
        raise UsageError("give exactly one input source: --in FILE or --n N")
    dist = parse_distribution(args.dist) if args.dist else None
    if args.infile is not None:
        try:
            raw = read_point_file(args.infile)
        except OSError as exc:
            raise UsageError(f"cannot read {args.infile}: {exc.strerror or exc}") from exc
        if raw.size == 0:
            raise UsageError(f"{args.infile}: no points")
        return raw, dist or Uniform01()
    if args.seed is None:
        raise UsageError("--seed is required when generating points")
    dist = dist or Uniform01()
    if args.n < 1:
        raise UsageError("--n must be positive")
    rng = np.random.default_rng(derive_seed(args.seed, 0))
    return dist.sample(args.n, rng), dist


def _images(raw: np.ndarray, dist) -> np.ndarray:
    if isinstance(dist, Uniform01):
        # a file without --dist must already hold points in [0, 1]
        from_unsorted(raw)
        return raw.copy()
    return np.atleast_1d(dist.cdf(raw))


def cmd_disc(args) -> int:
    raw, dist = _load_input(args)
    if args.dist and args.infile is not None:
        value = ks_vs_cdf(raw, dist.cdf)
    else:
        value = star_discrepancy(from_unsorted(_images(raw, dist)))
    print(_fmt(value))
    return 0


def _write_points(path, values, header=None):
    text = "".join(f"# {h}\n" for h in (header or [])) + "".join(f"{float(v)!r}\n" for v in values)
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with atomic_path(path) as tmp:
        tmp.write_text(text, encoding="utf-8")


def _c_lambda(args) -> float:
    if args.c_lambda is not None:
        return args.c_lambda
    return PRESETS[args.preset]


def cmd_thin(args) -> int:
    if args.m is None:
        raise UsageError("--m is required")
    raw, dist = _load_input(args)
    images = _images(raw, dist)
    n = images.size
    if n < 2:
        raise UsageError("thinning needs at least 2 points")
    plan = bounds.plan_thinning(n, args.m, _c_lambda(args))
    order = np.argsort(images, kind="stable")
    before = PointSet(images[order])

    if args.online:
        thinner = OnlineThinner(plan)
        mask = np.array([thinner.offer(float(x)).accepted for x in images], dtype=bool)
        kept_images = PointSet(np.sort(images[mask]))
        report = thinner.finish(kept_images, before)
        # sort raw values by their images so output order matches the uniform scale
        kept_raw = raw[mask][np.argsort(images[mask], kind="stable")]
    elif plan.is_thin:
        if args.seed is None:
            raise UsageError("--seed is required for offline thinning")
        rng = np.random.default_rng(derive_seed(args.seed, 1))
        keep, counts, level = offline_keep_mask(before, plan, rng)
        after = PointSet(before.values[keep])
        report = ThinningReport(
            plan=plan, n_in=n, n_kept=after.n,
            per_bin_in=counts.tolist(),
            per_bin_kept=np.minimum(counts, level).tolist(),
            deficient_bins=[i + 1 for i in range(plan.k) if counts[i] < plan.cap],
            discrepancy_before=star_discrepancy(before),
            discrepancy_after=star_discrepancy(after) if after.n else None,
            effective_cap=level, budget_binding=level > plan.cap,
        )
        kept_raw = raw[order][keep]
    else:
        d = star_discrepancy(before)
        report = ThinningReport(plan, n, n, [n], [n], [], d, d)
        kept_raw = raw[order]

    doc = report.to_dict()
    doc["mode"] = "online" if args.online else "offline"
    doc["seed"] = args.seed
    doc["distribution"] = str(dist)
    _write_points(args.out, kept_raw)
    if args.report:
        with atomic_path(args.report) as tmp:
            tmp.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return 0


_BOUND_ARGS = {
    "chernoff": ("mu", "delta"),
    "dkw": ("n", "eps"),
    "kolmogorov": ("z",),
    "theorem": ("n", "m"),
    "proof": ("M", "k"),
    "binning": ("n", "k", "lam"),
    "plan": ("n", "m"),
}


def cmd_bound(args) -> int:
    need = _BOUND_ARGS[args.kind]
    missing = [f"--{a}" for a in need if getattr(args, a) is None]
    if missing:
        raise UsageError(f"--kind {args.kind} needs {', '.join(missing)}")
    v = {a: getattr(args, a) for a in need}
    if args.kind == "chernoff":
        out = bounds.chernoff_lower_tail(v["mu"], v["delta"])
    elif args.kind == "dkw":
        out = bounds.dkw_tail(int(v["n"]), v["eps"])
    elif args.kind == "kolmogorov":
        out = bounds.kolmogorov_sf(v["z"])
    elif args.kind == "theorem":
        out = bounds.theorem_bound(v["n"], v["m"])
    elif args.kind == "proof":
        out = bounds.proof_bound(int(v["M"]), int(v["k"]))
    elif args.kind == "binning":
        out = bounds.binning_failure_prob(int(v["n"]), int(v["k"]), v["lam"])
    else:
        plan = bounds.plan_thinning(_int(v["n"], "--n"), _int(v["m"], "--m"), _c_lambda(args))
        print(json.dumps(plan.to_dict(), indent=2))
        return 0
    print(_fmt(out))
    return 0


def _int(x: float, flag: str) -> int:
    if x != int(x):
        raise UsageError(f"{flag} must be an integer")
    return int(x)


def _trial_config(args, m: int) -> TrialConfig:
    if args.seed is None:
        raise UsageError("--seed is required")
    if args.n is None:
        raise UsageError("--n is required")
    dist = parse_distribution(args.dist) if args.dist else Uniform01()
    return TrialConfig(n=args.n, m=m, c_lambda=_c_lambda(args), distribution=dist,
                       master_seed=args.seed, mode="online" if args.online else "offline")


def cmd_sweep(args) -> int:
    try:
        m_values = [int(s) for s in args.m_list.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--m-list must be comma-separated integers, got {args.m_list!r}") from None
    if not m_values:
        raise UsageError("--m-list is empty")
    result = run_sweep(_trial_config(args, m_values[0]), args.trials, m_values, workers=args.threads)
    if args.format == "csv":
        if args.out in (None, "-"):
            raise UsageError("--format csv needs --out FILE")
        result.write_csv(args.out)
    elif args.out in (None, "-"):
        print(result.to_json())
    else:
        result.write_json(args.out)
    return 0


def cmd_profile(args) -> int:
    if args.m is None:
        raise UsageError("--m is required")
    if args.out in (None, "-"):
        raise UsageError("--out DIR is required")
    record, before, after = run_trial(_trial_config(args, args.m), args.trial, return_sets=True)
    paths = emit_profiles(before, after, args.out)
    print(json.dumps({"before": str(paths[0]), "after": str(paths[1]),
                      "bridge_max_before": record.bridge_max_before,
                      "bridge_max_after": record.bridge_max_after}, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thinpoint", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, with_file=True):
        if with_file:
            sp.add_argument("--in", dest="infile", metavar="FILE", help="point file")
        sp.add_argument("--n", type=int, help="generate N points")
        sp.add_argument("--seed", type=int, help="master seed (64-bit unsigned)")
        sp.add_argument("--dist", help="uniform | normal:MU,SIGMA | exp:RATE")

    def constants(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--c-lambda", dest="c_lambda", type=float, help="shortfall constant")
        g.add_argument("--preset", choices=sorted(PRESETS), default="paper-safe")

    sp = sub.add_parser("disc", help="star discrepancy / KS statistic")
    common(sp)
    sp.set_defaults(func=cmd_disc)

    sp = sub.add_parser("thin", help="delete at most M points to regularise a sample")
    common(sp)
    sp.add_argument("--m", type=int, help="deletion budget")
    constants(sp)
    sp.add_argument("--online", action="store_true", help="accept/reject in arrival order")
    sp.add_argument("--out", default="-", metavar="FILE", help="kept points (default stdout)")
    sp.add_argument("--report", metavar="FILE", help="JSON thinning report")
    sp.set_defaults(func=cmd_thin)

    sp = sub.add_parser("bound", help="evaluate a tail bound or a thinning plan")
    sp.add_argument("--kind", required=True, choices=sorted(_BOUND_ARGS))
    for name in ("mu", "delta", "n", "eps", "z", "m", "M", "k", "lam"):
        sp.add_argument(f"--{name}", type=float)
    constants(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("sweep", help="Monte Carlo sweep over deletion budgets")
    common(sp, with_file=False)
    sp.add_argument("--m-list", required=True, help="comma-separated budgets")
    sp.add_argument("--trials", type=int, default=10)
    constants(sp)
    sp.add_argument("--online", action="store_true")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", default="-")
    sp.add_argument("--threads", type=int, help="worker threads (else THINPOINT_THREADS)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("profile", help="write before/after bridge profile CSVs")
    common(sp, with_file=False)
    sp.add_argument("--m", type=int)
    sp.add_argument("--trial", type=int, default=0, help="trial index")
    constants(sp)
    sp.add_argument("--online", action="store_true")
    sp.add_argument("--out", metavar="DIR")
    sp.set_defaults(func=cmd_profile)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OutputError as exc:
        print(f"thinpoint: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, DomainError, ContractError, PointFileError) as exc:
        print(f"thinpoint {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
