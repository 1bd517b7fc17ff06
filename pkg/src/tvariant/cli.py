"""Command-line interface.

    tvariant <command> --n N --theta WORD [--rank K] [--format text|json|dot] [--max-n M]

Exit codes: 0 ok, 1 verification failure, 2 usage or parse error, 3 guard exceeded.
All output is deterministic.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import biorder, categories, crossconn, engine, render, variant, verify
from .errors import GuardError, NotAnObjectError, ParseError, TVariantError
from .transform import all_transformations, parse_partition, parse_subset, parse_transformation
from .variant import VariantContext

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

COMMANDS = ("info", "reg", "eggbox", "green", "cones", "crossconn", "biorder", "sandwich", "verify", "sweep")
FORMATS = {
    "info": ("text", "json"), "reg": ("text", "json"), "eggbox": ("text", "json", "dot"),
    "green": ("text", "json"), "cones": ("text", "json"), "crossconn": ("text", "json"),
    "biorder": ("text", "json"), "sandwich": ("text", "json"), "verify": ("text", "json"),
    "sweep": ("text", "json"),
}
DEFAULT_MAX_N = 5


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int
    theta: str | None
    fmt: str
    max_n: int
    rank: int | None = None

    def context(self) -> VariantContext:
        if self.theta is None:
            raise UsageError(f"{self.command} needs --theta")
        return VariantContext(parse_transformation(self.theta, self.n))

    def guard(self, what: str):
        if self.n > self.max_n:
            raise GuardError(what, self.n, self.max_n)


def _emit(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------- commands

def cmd_info(cfg: RunConfig, args) -> tuple[str, int]:
    cfg.guard("info")
    ctx = cfg.context()
    info = variant.summary(ctx)
    objs = categories.enumerate_objects(ctx)
    info["objects"] = {"pTheta": len(objs.pTheta), "piTheta": len(objs.piTheta)}
    if cfg.fmt == "json":
        info["objects"] = objs.to_json()
        return _emit(info), EXIT_OK
    lines = [f"theta {ctx.theta} on n={ctx.n}, rank {ctx.rank}",
             f"kernel(theta) {ctx.kernel}, image(theta) {ctx.image}",
             f"|Reg| = {info['reg_count']} of {ctx.n ** ctx.n}",
             "P cells: " + ", ".join(f"{k}={v}" for k, v in info["decomposition"].items()),
             f"subset objects ({len(objs.pTheta)}): " + " ".join(map(str, objs.pTheta)),
             f"partition objects ({len(objs.piTheta)}): " + " ".join(map(str, objs.piTheta)),
             "regular D-classes:"]
    for d in info["d_classes"]:
        lines.append(f"  rank {d['rank']}: {d['rows']} x {d['cols']}, |H| = {d['hsize']}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_reg(cfg: RunConfig, args) -> tuple[str, int]:
    cfg.guard("reg")
    ctx = cfg.context()
    reg = variant.reg_elements(ctx)
    if cfg.fmt == "json":
        return _emit({"theta": str(ctx.theta), "n": ctx.n, "count": len(reg), "elements": [str(a) for a in reg]}), 0
    return f"{len(reg)} regular elements\n" + "\n".join(str(a) for a in reg) + "\n", EXIT_OK


def cmd_eggbox(cfg: RunConfig, args) -> tuple[str, int]:
    cfg.guard("eggbox")
    ctx = cfg.context()
    try:
        boxes = render.eggboxes(ctx, cfg.rank)
    except KeyError:
        raise UsageError(f"no regular D-class of rank {cfg.rank}") from None
    if cfg.fmt == "json":
        return _emit(render.eggbox_json(ctx, boxes)), EXIT_OK
    if cfg.fmt == "dot":
        return render.eggbox_dot(ctx, boxes), EXIT_OK
    return render.eggbox_text(ctx, boxes), EXIT_OK


def cmd_green(cfg: RunConfig, args) -> tuple[str, int]:
    cfg.guard("green")
    ctx = cfg.context()
    S = variant.reg_semigroup(ctx)
    G = engine.green_classes(S)
    if cfg.fmt == "json":
        return _emit(G.to_json(S)), EXIT_OK
    lines = [f"{G.count(r)} {r}-classes" for r in "LRDH"]
    for cls in sorted(G.classes("D"), key=lambda c: -S.elements[c[0]].rank):
        lines.append(f"D-class rank {S.elements[cls[0]].rank}: {len(cls)} elements")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_cones(cfg: RunConfig, args) -> tuple[str, int]:
    cfg.guard("cones")
    ctx = cfg.context()
    side = args.side
    if args.word:
        a = parse_transformation(args.word, cfg.n)
        cone = categories.cone_from_transformation(a, ctx, side, strict=False)
        report = categories.is_normal_cone(cone, ctx)
        out = {**cone.to_json(), "normal": report.ok, "violations": [list(v) for v in report.violations]}
        if cfg.fmt == "json":
            return _emit(out), EXIT_OK
        lines = [f"cone of {a} ({side}), vertex {cone.vertex}, normal: {report.ok}"]
        lines += [f"  {o}: {m}" for o, m in cone.components]
        lines += [f"  violation: {' '.join(v)}" for v in report.violations]
        return "\n".join(lines) + "\n", EXIT_OK
    pool = categories.p1_elements(ctx) if side == categories.SUBSET else categories.p2_elements(ctx)
    rows = []
    for a in pool:
        c = categories.cone_from_transformation(a, ctx, side, strict=False)
        rows.append({"word": str(a), "vertex": str(c.vertex), "normal": categories.is_normal_cone(c, ctx).ok})
    distinct = len({categories.cone_from_transformation(a, ctx, side, strict=False) for a in pool})
    out = {"side": side, "pool": len(pool), "normal": sum(r["normal"] for r in rows),
           "distinct": distinct, "cones": rows}
    if cfg.fmt == "json":
        return _emit(out), EXIT_OK
    lines = [f"{side} side: {len(pool)} maps, {out['normal']} normal cones, {distinct} distinct cones"]
    lines += [f"  {r['word']} vertex {r['vertex']}" + ("" if r["normal"] else "  NOT NORMAL") for r in rows]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_crossconn(cfg: RunConfig, args) -> tuple[str, int]:
    cfg.guard("crossconn")
    ctx = cfg.context()
    if args.A or args.pi:
        if not (args.A and args.pi):
            raise UsageError("a cell needs both --A and --pi")
        cell = crossconn.bifunctor_cell(parse_subset(args.A, cfg.n), parse_partition(args.pi, cfg.n), ctx)
        d = crossconn.chi(cell, ctx)
        out = {**cell.to_json(), "chi": {str(g): str(v) for g, v in d.forward.items()}, "bijective": d.bijective}
        if cfg.fmt == "json":
            return _emit(out), EXIT_OK
        lines = [f"cell A={cell.A} pi={cell.pi}: |Gamma| = {len(cell.gammaSet)}, |Delta| = {len(cell.deltaSet)}"]
        lines += [f"  {g} -> {v}" for g, v in d.forward.items()]
        return "\n".join(lines) + "\n", EXIT_OK
    cc = crossconn.build_cross_connection_semigroup(ctx)
    loc = [crossconn.verify_local_isomorphism(ctx, f) for f in ("delta", "gamma")]
    out = {**cc.to_json(), "local_isomorphism": [r.to_json() for r in loc]}
    code = EXIT_OK if cc.ok and all(r.ok for r in loc) else EXIT_FAIL
    if cfg.fmt == "json":
        return _emit(out), code
    lines = [f"{len(cc.pairs)} linked pairs (theta.a, a.theta); isomorphic to Reg: {cc.iso.isomorphism}"]
    for r in loc:
        lines.append(f"{r.functor}: local isomorphism {r.ok}, {r.objects} -> {r.target_objects} objects, "
                     + ("isomorphism" if r.is_isomorphism else "proper"))
    lines += [f"  {p.source}: {p}" for p in cc.pairs]
    return "\n".join(lines) + "\n", code


def cmd_biorder(cfg: RunConfig, args) -> tuple[str, int]:
    cfg.guard("biorder")
    ctx = cfg.context() if args.flavor == biorder.VARIANT else None
    pairs = biorder.enumerate_idempotents(ctx, args.flavor, n=cfg.n)
    if cfg.fmt == "json":
        return _emit({"flavor": args.flavor, "count": len(pairs), "pairs": [p.to_json() for p in pairs]}), 0
    lines = [f"{len(pairs)} {args.flavor} idempotents"]
    lines += [f"  {p}  {biorder.pair_to_idempotent(p)}" for p in pairs]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_sandwich(cfg: RunConfig, args) -> tuple[str, int]:
    cfg.guard("sandwich")
    if not (args.A and args.pi):
        raise UsageError("sandwich needs --A and --pi")
    A, pi = parse_subset(args.A, cfg.n), parse_partition(args.pi, cfg.n)
    ctx = cfg.context() if args.flavor == biorder.VARIANT else None
    members = biorder.sandwich_set(A, pi, ctx, args.flavor, transport=args.transport)
    out = {"A": str(A), "pi": str(pi), "flavor": args.flavor, "transport": args.transport,
           "members": [p.to_json() for p in members]}
    if cfg.fmt == "json":
        return _emit(out), EXIT_OK
    lines = [f"S({A}, {pi}) [{args.flavor}]: {len(members)} members"]
    lines += [f"  {p}  {biorder.pair_to_idempotent(p)}" for p in members]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> tuple[str, int]:
    cfg.guard("verify")
    rep = verify.run_battery(cfg.context(), only=args.only)
    code = EXIT_OK if rep.ok else EXIT_FAIL
    return (_emit(rep.to_json()) if cfg.fmt == "json" else rep.text()), code


def sweep_rows(n: int) -> list[dict]:
    rows = []
    for theta in all_transformations(n):
        ctx = VariantContext(theta)
        counts = variant.p_counts(ctx)
        rows.append({
            "theta": str(theta), "reg_count": counts["p1p2"], **counts,
            "shapes": ";".join(f"{d['rank']}:{d['rows']}x{d['cols']}" for d in variant.grid_shapes(ctx)),
            "all_regular": counts["p1p2"] == n ** n, "permutation": theta.is_permutation(),
        })
    return rows


def cmd_sweep(cfg: RunConfig, args) -> tuple[str, int]:
    cfg.guard("sweep")
    rows = sweep_rows(cfg.n)
    if cfg.fmt == "json":
        return _emit({"n": cfg.n, "rows": rows}), EXIT_OK
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue(), EXIT_OK


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# ---------------------------------------------------------------- parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tvariant", description="Regular elements of variants of T_n.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--n", type=int, required=True, help="size of the ground set")
    p.add_argument("--theta", help="sandwich transformation, e.g. 1233 or [1,2,3,3]")
    p.add_argument("--rank", type=int, help="eggbox: only the D-class of this rank")
    p.add_argument("--format", dest="fmt", default="text", choices=("text", "json", "dot"))
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="size guard (default %(default)s)")
    p.add_argument("--side", default=categories.SUBSET, choices=(categories.SUBSET, categories.PARTITION))
    p.add_argument("--word", help="cones: a single transformation")
    p.add_argument("--A", help="subset, e.g. {12}")
    p.add_argument("--pi", help="partition, e.g. {13|2}")
    p.add_argument("--flavor", default=biorder.VARIANT, choices=(biorder.PLAIN, biorder.VARIANT))
    p.add_argument("--transport", action="store_true", help="sandwich: apply theta in both tests")
    p.add_argument("--only", nargs="*", help="verify: run only these checks")
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.n < 1:
        print("error: --n must be positive", file=stderr)
        return EXIT_USAGE
    if args.fmt not in FORMATS[args.command]:
        print(f"error: {args.command} does not support --format {args.fmt}", file=stderr)
        return EXIT_USAGE
    cfg = RunConfig(args.command, args.n, args.theta, args.fmt, args.max_n, args.rank)
    try:
        text, code = HANDLERS[args.command](cfg, args)
    except GuardError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_GUARD
    except (UsageError, ParseError, NotAnObjectError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except TVariantError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_FAIL
    stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
