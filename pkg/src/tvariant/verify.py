"""The property battery behind ``tvariant verify``.

Each check returns a PropertyResult; a failing check carries a concrete
witness.  Checks that would exceed their size guard are reported as skipped
rather than silently passing.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import biorder, categories, crossconn, engine, variant
from .errors import AssociativityError, ClosureError, InvariantError, TVariantError

from .variant import VariantContext

__all__ = ["PropertyResult", "VerifyReport", "run_battery", "CHECKS",
           "check_reg_oracle", "check_green", "check_decomposition", "check_subset_cones",
           "check_partition_cones", "check_idempotents", "check_biorder", "check_functors",
           "check_local_iso", "check_duality", "check_naturality", "check_linked_pairs",
           "check_u_sets", "check_sandwich", "check_all_regular", "check_product"]


@dataclass
class PropertyResult:
    name: str
    status: str                     # pass | fail | skipped
    detail: str = ""
    witness: object = None
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        w = self.witness
        if w is not None and not isinstance(w, (str, int, float, bool, dict)):
            w = [str(x) for x in w] if isinstance(w, (list, tuple)) else str(w)
        return {"name": self.name, "status": self.status, "detail": self.detail,
                "witness": w}


@dataclass
class VerifyReport:
    theta: str
    n: int
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_json(self) -> dict:
        return {"theta": self.theta, "n": self.n, "ok": self.ok,
                "properties": [r.to_json() for r in self.results]}

    def text(self) -> str:
        lines = [f"verify theta={self.theta} n={self.n}"]
        for r in self.results:
            lines.append(f"  {r.status.upper():7s} {r.name}: {r.detail}"
                         + (f"  witness={r.to_json()['witness']}" if r.status == "fail" else ""))
        lines.append("ALL PASS" if self.ok else "FAILURES")
        return "\n".join(lines) + "\n"


def _res(name, ok, detail="", witness=None) -> PropertyResult:
    return PropertyResult(name, "pass" if ok else "fail", detail, None if ok else witness)


def _skip(name, why) -> PropertyResult:
    return PropertyResult(name, "skipped", why)


# ---------------------------------------------------------------- checks

def check_product(ctx: VariantContext, product: Callable | None = None) -> PropertyResult:
    """The sandwich product closes and associates on Reg (or a supplied product)."""
    product = product or ctx.product
    reg = variant.reg_elements(ctx)
    try:
        S = engine.build_semigroup(reg, product, check_assoc=True)
    except AssociativityError as exc:
        return _res("product", False, "not associative", exc.witness)
    except ClosureError as exc:
        return _res("product", False, "not closed on Reg", exc.witness)
    return _res("product", True, f"closed and associative on {len(S)} elements")


def check_reg_oracle(ctx: VariantContext) -> PropertyResult:
    if ctx.n > variant.MAX_ORACLE_N:
        return _skip("reg_oracle", "n too large for the search oracle")
    fast = set(variant.reg_elements(ctx))
    slow = set(variant.regular_by_search(ctx))
    diff = sorted(fast ^ slow)
    return _res("reg_oracle", not diff, f"|P1 n P2| = {len(fast)}, search finds {len(slow)}",
                diff[:1] or None)


def check_green(ctx: VariantContext) -> PropertyResult:
    S = variant.reg_semigroup(ctx)
    G = engine.green_classes(S)
    E = S.elements
    for rel in "LRDH":
        M = getattr(G, rel)
        eng = M[:, None] == M[None, :]
        fast = np.array([[getattr(variant.green_variant(a, b, ctx), rel) for b in E] for a in E])
        bad = np.argwhere(eng != fast)
        if len(bad):
            i, j = bad[0]
            return _res("green", False, f"{rel} differs", (rel, E[i], E[j]))
    return _res("green", True, f"L/R/D/H agree on {len(E)}^2 pairs")


def check_decomposition(ctx: VariantContext) -> PropertyResult:
    if ctx.n > variant.MAX_ORACLE_N:
        return _skip("decomposition", "n too large for the full variant table")
    dec = variant.d_theta_decomposition(ctx)
    bad = [k for k, v in dec.flags.items() if not v]
    return _res("decomposition", not bad, f"sizes {dec.sizes()}", bad or None)


def _cone_semigroup(elements, ctx, side):
    cones = {a: categories.cone_from_transformation(a, ctx, side, strict=False) for a in elements}
    T = engine.build_semigroup(list(dict.fromkeys(cones.values())),
                               lambda g, s: categories.cone_compose(g, s, ctx))
    return cones, T


def check_subset_cones(ctx: VariantContext, max_n: int = 4) -> PropertyResult:
    """a -> cone(a) on P1: injective, multiplicative, and normal exactly on
    the regular elements of (P1, .)."""
    if ctx.n > max_n:
        return _skip("subset_cones", f"n > {max_n}")
    P1 = categories.p1_elements(ctx)
    S = variant.transformation_table(P1)
    cones, T = _cone_semigroup(P1, ctx, categories.SUBSET)
    rep = engine.verify_homomorphism(lambda a: cones[a], S, T)
    regular = set(engine.regular_elements(S))
    normal = {a for a in P1 if categories.is_normal_cone(cones[a], ctx)}
    ok = rep.isomorphism and normal == regular
    detail = (f"|P1| = {len(P1)}, normal cones {len(normal)}, regular in (P1,.) {len(regular)}, "
              f"iso {rep.isomorphism}")
    return _res("subset_cones", ok, detail, rep.witness or sorted(normal ^ regular)[:1])


def check_partition_cones(ctx: VariantContext, max_n: int = 4) -> PropertyResult:
    """a -> cone(a) on P2 is an anti-isomorphism onto its image."""
    if ctx.n > max_n:
        return _skip("partition_cones", f"n > {max_n}")
    P2 = categories.p2_elements(ctx)
    S = variant.transformation_table(P2)
    cones, T = _cone_semigroup(P2, ctx, categories.PARTITION)
    rep = engine.verify_homomorphism(lambda a: cones[a], S, T, anti=True)
    witness = rep.witness
    if rep.homomorphism and not rep.injective:
        seen: dict = {}
        for a in P2:
            if cones[a] in seen:
                witness = ("same cone", seen[cones[a]], a)
                break
            seen[cones[a]] = a
    return _res("partition_cones", rep.isomorphism,
                f"|P2| = {len(P2)}, distinct cones {len(T)}, anti-hom {rep.homomorphism}", witness)


def check_idempotents(ctx: VariantContext) -> PropertyResult:
    if ctx.n > variant.MAX_ORACLE_N:
        return _skip("idempotents", "n too large")
    V = variant.reg_semigroup(ctx)
    eng = {(e.image, e.kernel) for e in engine.idempotents(V)}
    ours = {(p.A, p.pi) for p in biorder.enumerate_idempotents(ctx, biorder.VARIANT)}
    diff = sorted(eng ^ ours, key=str)
    return _res("idempotents", not diff, f"{len(ours)} pairs", diff[:1] or None)


def check_biorder(ctx: VariantContext, max_pairs: int = 40000) -> PropertyResult:
    E = biorder.enumerate_idempotents(ctx, biorder.VARIANT)
    if len(E) ** 2 > max_pairs:
        return _skip("biorder", f"{len(E)}^2 pairs over budget")
    words = {p: biorder.pair_to_idempotent(p) for p in E}
    defined = 0
    for p in E:
        for q in E:
            e, f = words[p], words[q]
            ol, orr = biorder.omega(p, q)
            if ol != (ctx.product(e, f) == e) or orr != (ctx.product(f, e) == e):
                return _res("biorder", False, "omega disagrees with the product", (p, q))
            try:
                bp = biorder.basic_product(p, q)
            except InvariantError as exc:
                return _res("biorder", False, str(exc), (p, q))
            defined += bp is not None
    return _res("biorder", True, f"{len(E)} idempotents, {defined} basic products agree")


def check_functors(ctx: VariantContext, max_n: int = 4) -> PropertyResult:
    if ctx.n > max_n:
        return _skip("functors", f"n > {max_n}")
    P = categories._objects(ctx, categories.SUBSET)
    Pi = categories._objects(ctx, categories.PARTITION)
    homs = {(A, B): list(crossconn.subset_morphisms(A, B)) for A in P for B in P}
    dm = {f: crossconn.delta_morphism(f, ctx) for fs in homs.values() for f in fs}
    for A in P:
        if dm[categories.SubsetMorphism.identity(A)] != categories.SubsetMorphism.identity(crossconn.delta_object(A, ctx)):
            return _res("functors", False, "Delta(1_A) != 1", A)
    count = 0
    for (A, B), fs in homs.items():
        for C in P:
            for f in fs:
                for g in homs[B, C]:
                    count += 1
                    if dm[f.then(g)] != dm[f].then(dm[g]):
                        return _res("functors", False, "Delta(f;g) != Delta(f);Delta(g)", (f, g))
    pm = {(p, q): list(crossconn.partition_morphisms(p, q)) for p in Pi for q in Pi}
    gm = {e: crossconn.gamma_morphism(e, ctx) for es in pm.values() for e in es}
    for p in Pi:
        if gm[categories.PartitionMorphism.identity(p)] != categories.PartitionMorphism.identity(
                crossconn.gamma_object(p, ctx)):
            return _res("functors", False, "Gamma(1) != 1", p)
    for (p, q), es in pm.items():
        for r in Pi:
            for e in es:
                for h in pm[q, r]:
                    count += 1
                    if gm[e.then(h)] != gm[e].then(gm[h]):
                        return _res("functors", False, "Gamma(e;h) != Gamma(e);Gamma(h)", (e, h))
    return _res("functors", True, f"identities and {count} composable pairs")


def check_local_iso(ctx: VariantContext) -> PropertyResult:
    reps = [crossconn.verify_local_isomorphism(ctx, f) for f in ("delta", "gamma")]
    bad = [r for r in reps if not r.ok]
    detail = ", ".join(f"{r.functor}: {r.objects}->{r.target_objects} objects, "
                       f"{'isomorphism' if r.is_isomorphism else 'proper'}" for r in reps)
    return _res("local_iso", not bad, detail, [r.functor for r in bad] or None)


def check_duality(ctx: VariantContext) -> PropertyResult:
    P = categories._objects(ctx, categories.SUBSET)
    Pi = categories._objects(ctx, categories.PARTITION)
    cells = 0
    for A in P:
        for pi in Pi:
            cell = crossconn.bifunctor_cell(A, pi, ctx)
            try:
                d = crossconn.chi(cell, ctx)
            except InvariantError as exc:
                return _res("duality", False, str(exc), (A, pi))
            if not d.bijective:
                return _res("duality", False, "chi not bijective", (A, pi))
            cells += 1
    return _res("duality", True, f"chi bijective on {cells} cells")


def check_naturality(ctx: VariantContext, max_n: int = 4) -> PropertyResult:
    if ctx.n > max_n:
        return _skip("naturality", f"n > {max_n}")
    rep = crossconn.check_naturality(ctx, max_n=max_n)
    return _res("naturality", rep.ok, f"{rep.squares} morphism pairs, {rep.elements} element chases",
                rep.failures[:1] or None)


def check_linked_pairs(ctx: VariantContext) -> PropertyResult:
    try:
        cc = crossconn.build_cross_connection_semigroup(ctx)
    except InvariantError as exc:
        return _res("linked_pairs", False, str(exc), None)
    return _res("linked_pairs", cc.ok, f"{len(cc.pairs)} linked pairs, iso {cc.iso.isomorphism}",
                cc.iso.witness)


def check_u_sets(ctx: VariantContext) -> PropertyResult:
    for name, fn in (("U Gamma", crossconn.u_gamma), ("U Delta", crossconn.u_delta)):
        a, b = set(fn(ctx)), set(fn(ctx, via="reg"))
        if a != b:
            return _res("u_sets", False, f"{name} differs", sorted(a ^ b)[:1])
    return _res("u_sets", True, "characterizations match {theta.a} and {a.theta}")


def check_sandwich(ctx: VariantContext, max_n: int = 3) -> PropertyResult:
    """The theta-transported sandwich set of (e, f) is exactly the set of
    idempotents h with e R eh L h R hf L f."""
    if ctx.n > max_n:
        return _skip("sandwich", f"n > {max_n}")
    E = biorder.enumerate_idempotents(ctx, biorder.VARIANT)
    words = {p: biorder.pair_to_idempotent(p) for p in E}
    mul = ctx.product

    def chain(e, h, f):
        eh, hf = mul(e, h), mul(h, f)
        return (eh.kernel == e.kernel and eh.image == h.image
                and hf.kernel == h.kernel and hf.image == f.image)

    checked = 0
    for p in E:
        for q in E:
            e, f = words[p], words[q]
            got = set(biorder.sandwich_set(p.A, q.pi, ctx, biorder.VARIANT, transport=True))
            want = {h for h in E if chain(e, words[h], f)}
            checked += len(got)
            if got != want:
                h = next(iter(got ^ want))
                return _res("sandwich", False, "sandwich set differs from the Green chain", (e, words[h], f))
    return _res("sandwich", True, f"{checked} sandwich members")


def check_all_regular(ctx: VariantContext) -> PropertyResult:
    counts = variant.p_counts(ctx)
    all_reg = counts["p1p2"] == ctx.n ** ctx.n
    return _res("all_regular", all_reg == ctx.theta.is_permutation(),
                f"all regular {all_reg}, permutation {ctx.theta.is_permutation()}", str(ctx.theta))


CHECKS = [
    ("product", check_product), ("reg_oracle", check_reg_oracle), ("green", check_green),
    ("decomposition", check_decomposition), ("subset_cones", check_subset_cones),
    ("partition_cones", check_partition_cones), ("idempotents", check_idempotents),
    ("biorder", check_biorder), ("functors", check_functors), ("local_iso", check_local_iso),
    ("duality", check_duality), ("naturality", check_naturality), ("linked_pairs", check_linked_pairs),
    ("u_sets", check_u_sets), ("sandwich", check_sandwich), ("all_regular", check_all_regular),
]


def run_battery(ctx: VariantContext, only=None, product: Callable | None = None) -> VerifyReport:
    """Run every check (or those named in ``only``).  ``product`` replaces the
    sandwich product in the ``product`` check; it exists for negative controls."""
    rep = VerifyReport(str(ctx.theta), ctx.n)
    for name, fn in CHECKS:
        if only and name not in only:
            continue
        t0 = time.perf_counter()
        try:
            r = fn(ctx, product) if name == "product" else fn(ctx)
        except TVariantError as exc:
            r = _res(name, False, f"{type(exc).__name__}: {exc}", None)
        r.seconds = time.perf_counter() - t0
        rep.results.append(r)
    return rep
