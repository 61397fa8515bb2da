"""Command line front end.

One verb per object of study, one printed line per certificate:

    eggplane egg verify --egg pw
    eggplane spread verify --semifield d243
    eggplane unital verify --egg pw --semifield d243
    eggplane pipeline pw

Every verification prints ``ok``/``FAIL``, the certificate object, mode,
check count and wall time; ``--out DIR`` additionally appends each
certificate as one JSON line to DIR/certificates.jsonl.  With the same
``--seed`` the JSON is byte-identical across runs except for wall_ms.

Settings resolve in the order: command line flag, then environment
(EGGPLANE_SEED, EGGPLANE_MODE, EGGPLANE_OUT, EGGPLANE_THREADS), then
``--config FILE`` (flat TOML or JSON), then built-in defaults.

Exit status: 0 all certificates ok, 1 at least one failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .catalog import EGGS, SEMIFIELDS, egg_by_name, semifield_by_name
from .egg import Flock, build_egg, verify_egg, verify_flock, verify_goodness, verify_shears
from .field import FieldError
from .plane import (
    BruckBosePlane,
    CoordinatePlane,
    check_dictionary,
    dickson_dictionary,
    verify_bb_axioms,
    verify_plane_axioms,
)
from .polarity import absolute_points_certificate, non_polarity_certificate, verify_duality
from .report import Certificate, stopwatch, substream
from .spread import (
    nuclei,
    nucleus_membership,
    spread_from_tau,
    verify_semifield,
    verify_spread,
    verify_tau_correspondence,
)
from .unital import (
    blocking_certificate,
    solvability_certificate,
    unital_model,
    verify_trace_match,
    verify_unital,
)

# the semifield whose plane hosts each egg's unital
EGG_PARTNER = {"pw": "d243", "m1": "f9"}


def _load_config(path: str) -> dict:
    data = Path(path).read_bytes()
    if path.endswith(".toml"):
        return tomllib.loads(data.decode())
    return json.loads(data)


class Settings:
    """Flag > environment > config file > default, per key."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        cfg_path = getattr(args, "config", None)
        self.cfg = _load_config(cfg_path) if cfg_path else {}

    def get(self, name: str, default, cast=lambda v: v):
        flag = getattr(self.args, name, None)
        if flag is not None:
            return flag
        env = os.environ.get(f"EGGPLANE_{name.upper()}")
        if env is not None:
            return cast(env)
        if name in self.cfg:
            return cast(self.cfg[name])
        return default


class Run:
    """Collects certificates, prints one line each, tracks the exit code."""

    def __init__(self, out_dir: str | None):
        self.certs: list[Certificate] = []
        self.out = Path(out_dir) if out_dir else None
        if self.out:
            self.out.mkdir(parents=True, exist_ok=True)

    def emit(self, cert: Certificate) -> Certificate:
        self.certs.append(cert)
        mark = "ok  " if cert.ok else "FAIL"
        print(
            f"{mark} {cert.object:<42} mode={cert.mode:<17} "
            f"checks={cert.checks_run:<10} {cert.wall_ms:8.0f}ms"
        )
        if not cert.ok and cert.failures:
            print(f"     first failure: {json.dumps(cert.failures[0], default=str)}")
        if self.out:
            with open(self.out / "certificates.jsonl", "a") as fh:
                fh.write(cert.to_json() + "\n")
        return cert

    @property
    def exit_code(self) -> int:
        return 0 if all(c.ok for c in self.certs) else 1


def _build_stage_cert(name: str, ok: bool, checks: int, details: dict, ms: float) -> Certificate:
    return Certificate(
        object=name,
        mode="exhaustive",
        ok=ok,
        checks_run=checks,
        failures=[] if ok else [{"check": "build", **details}],
        details=details,
        wall_ms=ms,
    )


# ------------------------------------------------------------------ verbs


def cmd_egg(args, s: Settings, run: Run) -> None:
    spec = egg_by_name(args.egg)
    seed = s.get("seed", 0, int)
    mode = s.get("mode", "auto")
    if args.action == "build":
        with stopwatch() as sw:
            egg = build_egg(spec, tangents=not args.no_tangents)
        expected = spec.field.order**2 + 1
        run.emit(
            _build_stage_cert(
                f"egg({spec.name}):build",
                egg.size == expected,
                egg.size,
                {
                    "size": egg.size,
                    "expected": expected,
                    "ambient": egg.ambient,
                    "q": egg.q,
                    "m": egg.m,
                    "tangents": not args.no_tangents,
                },
                sw.ms,
            )
        )
    elif args.action == "verify":
        egg = build_egg(spec)
        run.emit(
            verify_egg(
                egg,
                mode=mode,
                seed=seed,
                triple_samples=args.triples,
                pair_samples=args.pairs,
            )
        )
    else:  # goodness
        egg = build_egg(spec)
        at = args.at if args.at == "infinity" else int(args.at)
        run.emit(verify_goodness(egg, at=at, mode=mode, seed=seed, samples=args.samples))


def cmd_flock(args, s: Settings, run: Run) -> None:
    spec = egg_by_name(args.egg)
    run.emit(verify_flock(Flock.from_egg_coefficients(spec)))


def cmd_semifield(args, s: Settings, run: Run) -> None:
    sf = semifield_by_name(args.semifield)
    seed = s.get("seed", 0, int)
    if args.action == "verify":
        run.emit(verify_semifield(sf, mode=s.get("mode", "auto"), seed=seed, samples=args.samples))
        return
    # nuclei: exhaustive for small orders, sampled membership for big ones
    if sf.order <= 256:
        with stopwatch() as sw:
            info = nuclei(sf)
        run.emit(
            _build_stage_cert(
                f"nuclei({sf.name})",
                True,
                4 * sf.order,
                {"sizes": info["sizes"], "center": info["center"]},
                sw.ms,
            )
        )
    else:
        n = sf.half
        F = sf.field
        rng = substream(seed, "cli", "nuclei", sf.name)
        # middle nucleus takes every (a, 0); left/right only keep the ones
        # with a fixed by the twist (the prime subfield, for our members)
        mid = [sf.encode(int(a), 0) for a in rng.integers(0, n, 24)]
        fixed = [sf.encode(a, 0) for a in range(n) if F.frob_i(a, sf.alpha) == a]
        for which, cand in (("left", fixed), ("middle", mid), ("right", fixed)):
            run.emit(nucleus_membership(sf, cand, which=which, seed=seed, samples=args.samples))


def cmd_spread(args, s: Settings, run: Run) -> None:
    sf = semifield_by_name(args.semifield)
    if args.action == "verify":
        spread = spread_from_tau(sf)
        run.emit(
            verify_spread(
                spread,
                mode=s.get("mode", "auto"),
                seed=s.get("seed", 0, int),
                pair_samples=args.pairs,
            )
        )
    else:
        run.emit(verify_tau_correspondence(sf))


def cmd_plane(args, s: Settings, run: Run) -> None:
    sf = semifield_by_name(args.semifield)
    seed = s.get("seed", 0, int)
    if args.model in ("coordinate", "both"):
        run.emit(verify_plane_axioms(CoordinatePlane(sf), seed=seed, samples=args.samples))
    # the spread-model axiom sweep enumerates every coset, so 'both' only
    # includes it where that is feasible; asking for it explicitly on a
    # big spread surfaces the verifier's own size error
    if args.model == "bruck-bose" or (args.model == "both" and sf.order <= 9):
        bb = BruckBosePlane(spread_from_tau(sf))
        run.emit(verify_bb_axioms(bb, seed=seed, samples=args.samples))
    if args.dictionary:
        spread = spread_from_tau(sf)
        bb = BruckBosePlane(spread)
        plane = CoordinatePlane(sf)
        pm, em = dickson_dictionary(sf, spread)
        run.emit(check_dictionary(bb, plane, pm, em, mode=s.get("mode", "auto"), seed=seed))


def cmd_blocking(args, s: Settings, run: Run) -> None:
    spec = egg_by_name(args.egg)
    if args.action == "solvability":
        run.emit(solvability_certificate(spec))
    else:
        run.emit(
            blocking_certificate(
                spec,
                seed=s.get("seed", 0, int),
                mode=s.get("mode", "auto"),
                ab_samples=args.ab_samples,
            )
        )


def cmd_unital(args, s: Settings, run: Run) -> None:
    spec = egg_by_name(args.egg)
    sf = semifield_by_name(args.semifield or EGG_PARTNER.get(args.egg, "d243"))
    seed = s.get("seed", 0, int)
    model = unital_model(spec, sf)
    if args.action == "build":
        with stopwatch() as sw:
            ids = model.point_ids()
        digest = hashlib.sha256(ids.astype("<u4").tobytes()).hexdigest()
        details = {
            "size": int(ids.shape[0]),
            "expected": model.size,
            "sha256_le_u4": digest,
        }
        if run.out:
            path = run.out / f"unital_{spec.name}_{sf.name}.npy"
            np.save(path, ids)
            details["saved"] = str(path)
        run.emit(
            _build_stage_cert(
                f"unital({sf.name}):build", ids.shape[0] == model.size, int(ids.shape[0]), details, sw.ms
            )
        )
    else:
        run.emit(
            verify_unital(
                model,
                mode=s.get("mode", "auto"),
                seed=seed,
                lines=args.lines,
                predicate_samples=args.points,
            )
        )


def cmd_polar(args, s: Settings, run: Run) -> None:
    spec = egg_by_name(args.egg)
    sf = semifield_by_name(args.semifield or EGG_PARTNER.get(args.egg, "d243"))
    seed = s.get("seed", 0, int)
    threads = s.get("threads", 1, int)
    mode = s.get("mode", "auto")
    if args.lam is not None:
        lams = [args.lam]
    else:
        rng = substream(seed, "cli", "polar", sf.name)
        lams = sorted({int(v) for v in rng.integers(1, sf.field.order, 3)})
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futs = [pool.submit(verify_duality, sf, lam, mode=mode, seed=seed) for lam in lams]
        for f in futs:
            run.emit(f.result())
    run.emit(absolute_points_certificate(sf, lams[0], mode=mode, seed=seed))
    model = unital_model(spec, sf)
    run.emit(non_polarity_certificate(sf, model, seed=seed))


def cmd_pipeline(args, s: Settings, run: Run) -> None:
    """The whole chain for the order-3^10 plane, failing fast."""
    if args.target != "pw":
        raise KeyError(f"unknown pipeline {args.target!r}; have ['pw']")
    seed = s.get("seed", 0, int)
    spec = egg_by_name("pw")
    sf = semifield_by_name("d243")

    with stopwatch() as sw:
        egg = build_egg(spec)
    expected = spec.field.order**2 + 1
    c = run.emit(
        _build_stage_cert(
            "egg(pw):build",
            egg.size == expected,
            egg.size,
            {"size": egg.size, "expected": expected, "ambient": egg.ambient},
            sw.ms,
        )
    )
    if not c.ok:
        return
    if not run.emit(verify_shears(egg, seed=seed)).ok:
        return
    spread = spread_from_tau(sf)
    if not run.emit(verify_spread(spread, seed=seed)).ok:
        return
    if not run.emit(verify_trace_match(spec, spread, seed=seed)).ok:
        return
    if not run.emit(solvability_certificate(spec)).ok:
        return
    model = unital_model(spec, sf)
    with stopwatch() as sw:
        ids = model.point_ids()
    c = run.emit(
        _build_stage_cert(
            "unital(d243):build",
            ids.shape[0] == model.size,
            int(ids.shape[0]),
            {"size": int(ids.shape[0]), "expected": model.size},
            sw.ms,
        )
    )
    if not c.ok:
        return
    if not run.emit(verify_unital(model, mode="sampled", seed=seed)).ok:
        return
    run.emit(non_polarity_certificate(sf, model, seed=seed))


# ------------------------------------------------------------------ parser


def _parser() -> argparse.ArgumentParser:
    # default=SUPPRESS so a flag given before the verb survives: the
    # subparser re-declares these (parents=) and would otherwise paper
    # over the already-parsed value with its own None default
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="TOML or JSON file with default settings")
    common.add_argument("--out", help="directory for certificates.jsonl and artifacts")
    common.add_argument("--seed", type=int, help="master seed for all sampling (default 0)")
    common.add_argument(
        "--mode",
        choices=["auto", "exhaustive", "sampled", "symmetry_reduced", "streamed"],
        help="verification effort; auto picks by object size",
    )
    common.add_argument(
        "--threads",
        type=int,
        help="parallel workers where a verb runs independent certificates (polar check)",
    )
    top = argparse.ArgumentParser(
        prog="eggplane",
        description="build and verify eggs, spreads, translation planes and the big unital",
        parents=[common],
    )
    sub = top.add_subparsers(dest="verb", required=True)

    egg = sub.add_parser("egg", help="eggs of PG(4m-1, q)", parents=[common])
    egg.add_argument("action", choices=["build", "verify", "goodness"])
    egg.add_argument("--egg", default="pw", choices=sorted(EGGS))
    egg.add_argument("--no-tangents", action="store_true")
    egg.add_argument("--triples", type=int, default=100_000)
    egg.add_argument("--pairs", type=int, default=20_000)
    egg.add_argument("--samples", type=int, default=10_000)
    egg.add_argument("--at", default="infinity", help="'infinity' or an element id")
    egg.set_defaults(func=cmd_egg)

    fl = sub.add_parser("flock", help="flocks of the quadratic cone", parents=[common])
    fl.add_argument("action", choices=["verify"])
    fl.add_argument("--egg", default="pw", choices=sorted(EGGS))
    fl.set_defaults(func=cmd_flock)

    sf = sub.add_parser("semifield", help="commutative Dickson semifields", parents=[common])
    sf.add_argument("action", choices=["verify", "nuclei"])
    sf.add_argument("--semifield", default="d243", choices=sorted(SEMIFIELDS))
    sf.add_argument("--samples", type=int, default=1_000_000)
    sf.set_defaults(func=cmd_semifield)

    sp = sub.add_parser("spread", help="semifield spreads of PG(4m-1, p)", parents=[common])
    sp.add_argument("action", choices=["verify", "correspondence"])
    sp.add_argument("--semifield", default="d243", choices=sorted(SEMIFIELDS))
    sp.add_argument("--pairs", type=int, default=10_000)
    sp.set_defaults(func=cmd_spread)

    pl = sub.add_parser("plane", help="the translation plane, two models", parents=[common])
    pl.add_argument("action", choices=["axioms"])
    pl.add_argument("--semifield", default="d9", choices=sorted(SEMIFIELDS))
    pl.add_argument("--model", default="both", choices=["coordinate", "bruck-bose", "both"])
    pl.add_argument("--dictionary", action="store_true", help="also check the model dictionary")
    pl.add_argument("--samples", type=int, default=2000)
    pl.set_defaults(func=cmd_plane)

    bl = sub.add_parser("blocking", help="the blocking cone over the egg's base points", parents=[common])
    bl.add_argument("action", choices=["check", "solvability"])
    bl.add_argument("--egg", default="pw", choices=sorted(EGGS))
    bl.add_argument("--ab-samples", type=int, default=120)
    bl.set_defaults(func=cmd_blocking)

    un = sub.add_parser("unital", help="the unital in the semifield plane", parents=[common])
    un.add_argument("action", choices=["build", "verify"])
    un.add_argument("--egg", default="pw", choices=sorted(EGGS))
    un.add_argument("--semifield", choices=sorted(SEMIFIELDS))
    un.add_argument("--lines", type=int, default=10_000)
    un.add_argument("--points", type=int, default=1_000_000)
    un.set_defaults(func=cmd_unital)

    po = sub.add_parser("polar", help="dualities of the plane and the non-polarity result", parents=[common])
    po.add_argument("action", choices=["check"])
    po.add_argument("--egg", default="pw", choices=sorted(EGGS))
    po.add_argument("--semifield", choices=sorted(SEMIFIELDS))
    po.add_argument("--lam", type=int, help="check one duality instead of a sampled few")
    po.set_defaults(func=cmd_polar)

    pp = sub.add_parser("pipeline", help="chained end-to-end verification, fail-fast", parents=[common])
    pp.add_argument("target", choices=["pw"])
    pp.set_defaults(func=cmd_pipeline)

    return top


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        settings = Settings(args)
    except (OSError, ValueError, tomllib.TOMLDecodeError) as exc:
        print(f"bad --config: {exc}", file=sys.stderr)
        return 2
    run = Run(settings.get("out", None))
    try:
        args.func(args, settings, run)
    except (KeyError, FieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run.exit_code


if __name__ == "__main__":
    sys.exit(main())
