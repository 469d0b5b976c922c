"""Command-line interface.

Subcommands take a JSON config (via --config) merged with flag overrides;
every run can emit a deterministic JSON artifact (--out) that embeds the
resolved configuration, so identical inputs produce byte-identical files.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__, empirical, index_sets, kernel, kummer
from .density import density as compute_density
from .constants import A_global, A_local, E
from .errors import ValidationError
from .index_sets import ValuationSet, spec_from_json
from .kummer import FrobeniusCondition, validate_group


def _load_config(args) -> dict:
    cfg = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise ValidationError("config root must be a JSON object")
    for key in ("group", "set", "frob", "x", "eps", "method", "n", "m",
                "r", "seed", "target_error", "cutoff", "budget"):
        v = getattr(args, key.replace("-", "_"), None)
        if v is not None:
            cfg[key] = v
    return cfg


def _group(cfg) -> kummer.RationalGroup:
    if "group" not in cfg:
        raise ValidationError("missing 'group' (list of rationals or comma string)")
    g = cfg["group"]
    if isinstance(g, str):
        g = [Fraction(part) for part in g.split(",") if part]
    return validate_group(g)


def _spec(cfg) -> index_sets.IndexSetSpec:
    if "set" not in cfg:
        raise ValidationError("missing 'set' (index set spec object)")
    s = cfg["set"]
    if isinstance(s, str):
        s = json.loads(s)
    return spec_from_json(s)


def _frob(cfg) -> FrobeniusCondition | None:
    f = cfg.get("frob")
    if f is None:
        return None
    if isinstance(f, str):
        f = json.loads(f)
    return FrobeniusCondition.make(f["conductor"], f["residues"])


def _emit(args, cfg: dict, payload: dict) -> None:
    doc = {
        "version": __version__,
        "kernel": kernel.NAME,
        "config": cfg,
        "result": payload,
    }
    text = json.dumps(doc, sort_keys=True, indent=1, default=str)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)


def _cmd_density(args) -> int:
    cfg = _load_config(args)
    group = _group(cfg)
    spec = _spec(cfg)
    frob = _frob(cfg)
    method = cfg.get("method", "series")
    eps = float(cfg.get("eps", 1e-6))
    res = compute_density(group, spec, method=method, frob=frob, eps=eps)
    _emit(args, cfg, res.to_dict())
    return 0


def _cmd_count(args) -> int:
    cfg = _load_config(args)
    group = _group(cfg)
    x = int(cfg.get("x", 10**6))
    frob = _frob(cfg)
    if "n" in cfg and "set" not in cfg:
        res = empirical.count_divisible(group, int(cfg["n"]), x)
    else:
        res = empirical.count_index_in_set(group, _spec(cfg), x, frob=frob)
    _emit(args, cfg, res.to_dict())
    return 0


def _cmd_compare(args) -> int:
    cfg = _load_config(args)
    group = _group(cfg)
    spec = _spec(cfg)
    frob = _frob(cfg)
    x = int(cfg.get("x", 10**6))
    eps = float(cfg.get("eps", 1e-6))
    method = cfg.get("method", "series")
    dres = compute_density(group, spec, method=method, frob=frob, eps=eps)
    cres = empirical.count_index_in_set(group, spec, x, frob=frob)
    comp = empirical.compare(cres.ratio, cres.total, dres.lo, dres.hi)
    payload = {"density": dres.to_dict(), "count": cres.to_dict(),
               "comparison": comp.to_dict()}
    _emit(args, cfg, payload)
    return 0 if comp.ok else 3


def _cmd_constants(args) -> int:
    cfg = _load_config(args)
    r = int(cfg.get("r", 1))
    if "set" in cfg:
        spec = _spec(cfg)
        bv = A_global(spec, r, target_error=float(cfg.get("target_error", 1e-9)),
                      cutoff=cfg.get("cutoff"))
        payload = {"A_global_lo": bv.lo, "A_global_hi": bv.hi,
                   "value": bv.value, "error": bv.error}
    else:
        l = int(cfg.get("l", 2))
        if "v" in cfg:
            payload = {"E": str(E(int(cfg["v"]), r, l))}
        else:
            vset = ValuationSet.from_json(cfg.get("vset", [[0, None]]))
            payload = {"A_local": str(A_local(vset, r, l))}
    _emit(args, cfg, payload)
    return 0


def _cmd_classify(args) -> int:
    cfg = _load_config(args)
    spec = _spec(cfg)
    cls = spec.classify()
    payload = {"kind": cls.kind, "kappa": cls.kappa, "detail": cls.detail,
               "certified": cls.certified, "describe": spec.describe()}
    if cls.inner is not None:
        payload["inner"] = {"kind": cls.inner.kind, "kappa": cls.inner.kappa}
    _emit(args, cfg, payload)
    return 0


def _cmd_degree(args) -> int:
    cfg = _load_config(args)
    group = _group(cfg)
    n = int(cfg.get("n", 1))
    m = int(cfg.get("m", n))
    deg = kummer.degree(group, m, n)
    payload = {"degree": deg, "m": m, "n": n,
               "entanglement_bound": kummer.entanglement_bound(group)}
    if cfg.get("budget"):
        mc = kummer.degree_montecarlo(group, n, int(cfg["budget"]), m=m)
        payload["montecarlo"] = mc
        payload["agree"] = mc == deg
    _emit(args, cfg, payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="indexdensity",
        description="Densities of primes by the index of a rational multiplicative group.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--group", help="comma-separated rational generators")
        p.add_argument("--set", help="index set spec as inline JSON")
        p.add_argument("--frob", help='Frobenius condition, e.g. {"conductor":4,"residues":[1]}')
        p.add_argument("--out", help="write the JSON artifact here")
        p.add_argument("--seed", type=int, help="recorded in the artifact")

    p = sub.add_parser("density", help="compute a density with certified error")
    common(p)
    p.add_argument("--method", choices=sorted({"series", "product", "almostcut"}))
    p.add_argument("--eps", type=float)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("count", help="empirical counts over primes up to x")
    common(p)
    p.add_argument("--x", type=int)
    p.add_argument("--n", type=int, help="count indices divisible by n instead")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("compare", help="density vs empirical frequency")
    common(p)
    p.add_argument("--x", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--method", choices=sorted({"series", "product", "almostcut"}))
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("constants", help="local factors and global constants")
    common(p)
    p.add_argument("--r", type=int)
    p.add_argument("--target-error", type=float, dest="target_error")
    p.add_argument("--cutoff", type=int)
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("classify", help="convergence class of an index set")
    common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("degree", help="cyclotomic-Kummer degrees")
    common(p)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--budget", type=int, help="also cross-check by prime sampling")
    p.set_defaults(func=_cmd_degree)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
