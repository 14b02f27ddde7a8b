"""Command-line interface.

Every command prints ``key=value`` lines on stdout.  Exit codes: 0 success,
1 malformed input file, 2 invalid parameters, 3 failed verification,
4 failed self-test property.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import sympy

from . import census as cz
from .evalsets import (FAMILIES, CardinalityError, ConstructionParams, ValidationError, validate,
                       write_evalset)
from .gf import FieldParams, build_field
from .grscodes import (MatrixFileError, ScalingError, generator_matrix, read_matrix, synthesize,
                       verify_mds, verify_self_dual, write_matrix)

EXIT_OK, EXIT_MALFORMED, EXIT_INVALID, EXIT_VERIFY, EXIT_SELFTEST = 0, 1, 2, 3, 4

# parameters whose published length (314) disagrees with the closed form
_KNOWN_LENGTH_NOTES = {
    ("cor1", 19, (("u", 20), ("v", 18), ("s", 2), ("s_prime", 10), ("t", 1))):
        "published length 314 for these parameters disagrees with the closed form; the closed form is used",
}


class UsageError(Exception):
    pass


# -- config ------------------------------------------------------------------

@dataclass
class Config:
    q_cap: int = 1 << 24  # field tables only; the census never builds a field
    threads: int = 1
    samples: int = 0
    seed: int = 0
    out_dir: str = "."

    KEYS = ("q_cap", "threads", "samples", "seed", "out_dir")

    @classmethod
    def load(cls, path: str | None) -> "Config":
        cfg = cls()
        env = os.environ.get("GRSSD_THREADS")
        if path:
            try:
                lines = Path(path).read_text().splitlines()
            except OSError as exc:
                raise UsageError(f"cannot read config {path}: {exc}") from None
            for n, line in enumerate(lines, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, val = (x.strip() for x in line.partition("="))
                if not sep or key not in cls.KEYS:
                    raise UsageError(f"{path}:{n}: expected one of {', '.join(cls.KEYS)} as 'key = value'")
                setattr(cfg, key, val if key == "out_dir" else _int(val, f"{path}:{n}: {key}"))
        if env:
            cfg.threads = _int(env, "GRSSD_THREADS")
        cfg.check()
        return cfg

    def check(self) -> None:
        if self.threads < 1:
            raise UsageError("threads must be >= 1")
        if self.samples < 0:
            raise UsageError("samples must be >= 0")
        if self.q_cap < 4:
            raise UsageError("q_cap must be >= 4")


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{what}: not an integer: {text!r}") from None


def _emit(**kv) -> None:
    for k, v in kv.items():
        if isinstance(v, (bool, np.bool_)):
            v = int(v)
        print(f"{k}={v}")


def _field_of(args) -> FieldParams:
    try:
        if args.r is not None:
            return FieldParams.from_r(args.r)
        if args.p is not None:
            return FieldParams(args.p, args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError("give --r, or --p with --m")


# -- commands --------------------------------------------------------------

def cmd_field_info(args, cfg: Config) -> int:
    p, m = args.p, args.m
    if p < 2 or not sympy.isprime(p):
        raise UsageError(f"p = {p} is not prime")
    try:
        r = FieldParams(p, m).r
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if r * r > cfg.q_cap:
        raise UsageError(f"q = {r * r} exceeds q_cap = {cfg.q_cap}")
    F = build_field(p, m)
    factors = sorted(sympy.factorint(F.order))
    # theta has order q-1: theta^((q-1)/f) != 1 for every prime f | q-1
    certified = all(F.exp[F.order // f] != 1 for f in factors) and F.exp[0] == 1
    _emit(p=p, m=m, r=r, q=F.q, degree=F.degree, modulus=",".join(map(str, F.modulus)),
          r_mod_4=r % 4, theta_order=F.order, order_prime_factors=",".join(map(str, factors)),
          theta_order_certified=certified, eta_minus_one=F.eta(F.neg(1)))
    return EXIT_OK


def _params_from_args(args) -> ConstructionParams:
    fp = _field_of(args)
    names = FAMILIES[args.construction]
    values = {}
    for name in names:
        val = getattr(args, name, None)
        if val is None:
            raise UsageError(f"{args.construction} needs --{name.replace('_', '-')}")
        values[name] = val
    try:
        return ConstructionParams.create(args.construction, p=fp.p, m=fp.m, **values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_build(args, cfg: Config) -> int:
    params = _params_from_args(args)
    if params.q > cfg.q_cap:
        raise UsageError(f"q = {params.q} exceeds q_cap = {cfg.q_cap}")
    rep = validate(params)
    if not rep.ok:
        for line in rep.lines():
            print(line)
        _emit(status="invalid", first_failure=rep.first_failure())
        return EXIT_INVALID
    _emit(construction=params.family, params=params.text(), q=params.q)
    note = _KNOWN_LENGTH_NOTES.get((params.family, params.r, params.values))
    if note:
        _emit(note=note)
    try:
        res = synthesize(params, matrix_method=args.matrix_method or None, seed=args.seed)
    except (CardinalityError, ScalingError, ArithmeticError) as exc:
        _emit(status="verification-failed", reason=str(exc).replace("\n", " "))
        return EXIT_VERIFY
    spec = res.spec
    vr = res.verify
    if cfg.samples:
        extra = verify_self_dual(spec, matrix_method=False, samples=cfg.samples, seed=args.seed)
        vr.methods["randomized"] = extra.methods["randomized"]
        vr.self_orthogonal &= extra.self_orthogonal
    _emit(set_size=len(res.evalset), code_length=spec.n, dimension=spec.k, extended=spec.extended,
          character=res.characters.common_value, delta_method=res.characters.method,
          scaling_constant=res.choice.constant,
          **{f"check_{k}": v for k, v in vr.methods.items()},
          rank_ok=vr.rank_ok, rank_method=vr.rank_method, self_dual=vr.self_dual)
    G = None
    if args.mds_bruteforce or spec.n <= 16:
        G = generator_matrix(spec)
        mds, how = verify_mds(spec, G)
        _emit(mds=mds, mds_detail=how)
        if mds:
            _emit(min_distance=spec.n - spec.k + 1)
        if mds is False:
            return EXIT_VERIFY
    if not vr.self_dual:
        _emit(status="verification-failed")
        return EXIT_VERIFY
    out = args.out or os.path.join(cfg.out_dir, f"{params.family}_q{params.q}_n{spec.n}.{args.emit}")
    if args.emit == "matrix":
        write_matrix(G or generator_matrix(spec), out)
        read_matrix(out)
    elif args.emit == "set":
        write_evalset(res.evalset, out)
    else:
        out = None
    if out:
        _emit(out=out)
    _emit(seconds=f"{time.perf_counter() - args.t0:.3f}", status="ok")
    return EXIT_OK


def cmd_verify(args, cfg: Config) -> int:
    try:
        G = read_matrix(args.path)
    except (MatrixFileError, OSError) as exc:
        _emit(status="malformed", reason=str(exc))
        return EXIT_MALFORMED
    spec = G.spec
    samples = args.samples if args.samples is not None else cfg.samples
    vr = verify_self_dual(spec, matrix_method=args.matrix_method or None, samples=samples,
                          seed=args.seed, G=G)
    _emit(q=spec.field.q, code_length=spec.n, dimension=spec.k, extended=spec.extended,
          **{f"check_{k}": v for k, v in vr.methods.items()},
          rank_ok=vr.rank_ok, rank_method=vr.rank_method, self_dual=vr.self_dual)
    ok = vr.self_dual
    if args.mds_bruteforce:
        mds, how = verify_mds(spec, G)
        _emit(mds=mds, mds_detail=how)
        if mds:
            _emit(min_distance=spec.n - spec.k + 1)
        ok &= mds is not False
    _emit(status="ok" if ok else "failed")
    return EXIT_OK if ok else EXIT_VERIFY


def _classes(text: str | None) -> tuple[int, ...]:
    if not text:
        return cz.ALL_CLASSES
    try:
        out = tuple(sorted({int(x) for x in text.split(",") if x.strip()}))
    except ValueError:
        raise UsageError(f"bad class list {text!r}") from None
    if not out or any(c not in cz.ALL_CLASSES for c in out):
        raise UsageError("classes are integers 1..8")
    return out


def _census(args, cfg: Config) -> cz.LengthCensus:
    threads = args.threads or cfg.threads
    try:
        return cz.enumerate_lengths(args.r, _classes(args.classes), mode=args.mode,
                                    thm5_variant=args.thm5_variant, threads=threads,
                                    progress=not args.quiet)
    except (ValueError, cz.BudgetExceeded) as exc:
        raise UsageError(str(exc)) from None


def cmd_enumerate(args, cfg: Config) -> int:
    census = _census(args, cfg)
    out = args.out or os.path.join(cfg.out_dir, f"census_r{args.r}.csv")
    cz.export_census(census, out)
    summ = cz.summary(census)
    if args.summary:
        cz.write_summary(census, args.summary)
    _emit(r=census.r, q=census.q, mode=census.mode, N=summ["N"], out=out)
    for c, n in summ["classSizes"].items():
        _emit(**{f"class{c}_lengths": n})
    return EXIT_OK


def cmd_ratio(args, cfg: Config) -> int:
    t0 = time.perf_counter()
    census = _census(args, cfg)
    rep = cz.ratio(census)
    _emit(r=rep.r, q=rep.q, mode=rep.mode, N=rep.N, denominator=f"{rep.denominator}",
          universe=rep.universe.replace(" ", "_"), ratio=f"{rep.percent:.2f}%",
          seconds=f"{time.perf_counter() - t0:.1f}")
    return EXIT_OK


def cmd_self_test(args, cfg: Config) -> int:
    from .properties import run_suite
    fields = {"49": [7], "361": [19], "all": [7, 19]}[args.field]
    first = None
    for r in fields:
        F = build_field(r)
        for res in run_suite(F, seed=args.seed, fault=2 if args.inject_fault else 1,
                             as_stated=args.as_stated, light=F.q > 100):
            _emit(**{f"q{F.q}_{res.name}": "pass" if res.ok else "FAIL"})
            if not res.ok:
                print(f"# {res.name}: {res.detail}", file=sys.stderr)
                first = first or res.name
    if first:
        _emit(status="failed", first_failure=first)
        return EXIT_SELFTEST
    _emit(status="ok")
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grssd", description="Self-dual GRS codes from coset evaluation sets.")
    ap.add_argument("--config", help="flat 'key = value' file (q_cap, threads, samples, seed, out_dir)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", help="describe GF(r^2) with r = p^m")
    p.add_argument("p", type=int)
    p.add_argument("m", type=int, nargs="?", default=1)
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("build", help="build, verify and export one code")
    p.add_argument("construction", choices=list(FAMILIES))
    p.add_argument("--r", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int, default=1)
    for name in sorted({n for names in FAMILIES.values() for n in names}):
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, type=int)
    p.add_argument("--emit", choices=("set", "matrix", "summary"), default="summary")
    p.add_argument("--out")
    p.add_argument("--matrix-method", action="store_true", help="also check G G^T = 0 directly")
    p.add_argument("--mds-bruteforce", action="store_true")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="re-verify a matrix file")
    p.add_argument("path")
    p.add_argument("--mds-bruteforce", action="store_true")
    p.add_argument("--matrix-method", action="store_true")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_verify)

    for name, func in (("enumerate", cmd_enumerate), ("ratio", cmd_ratio)):
        p = sub.add_parser(name, help="length census" if name == "enumerate" else "census ratio N/(q/2)")
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--classes")
        p.add_argument("--mode", choices=cz.MODES, default="stated")
        p.add_argument("--thm5-variant", choices=cz.THM5_VARIANTS, default="theorem")
        p.add_argument("--threads", type=int)
        p.add_argument("--quiet", action="store_true", help="no progress on stderr")
        if name == "enumerate":
            p.add_argument("--out")
            p.add_argument("--summary", help="also write a JSON summary here")
        p.set_defaults(func=func)

    p = sub.add_parser("self-test", help="property suites over GF(49) and GF(361)")
    p.add_argument("--field", choices=("49", "361", "all"), default="all")
    p.add_argument("--seed", type=int)
    p.add_argument("--as-stated", action="store_true",
                   help="check the norm-fiber character claim in its unconditional form")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_self_test)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    args.t0 = time.perf_counter()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = Config.load(args.config)
        if getattr(args, "seed", None) is None and hasattr(args, "seed"):
            args.seed = cfg.seed
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
