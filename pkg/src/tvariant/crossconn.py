"""The cross-connection induced by theta.

Delta transports subsets along theta (A -> A.theta), Gamma pulls partitions
back (pi -> theta^-1(pi)).  Both bifunctor cells are built constructively;
chi sends theta.a to a.theta, and the linked pairs (theta.a, a.theta) form a
semigroup isomorphic to Reg(T_n^theta).

Throughout, "theta.a" is ``compose(theta, a)`` (theta applied first).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .categories import PARTITION, SUBSET, PartitionMorphism, SubsetMorphism, _objects
from .errors import GuardError, InvariantError, NotAnObjectError
from .transform import (SetPartition, Subset, Transformation, all_partitions, all_subsets,
                        all_transformations, compose,
                        is_cross_section, preimage_partition, saturates, separates)
from .variant import VariantContext, p_membership, reg_elements, reg_semigroup

__all__ = [
    "LinkedPair", "BifunctorCell", "Duality", "LocalIsoReport", "NaturalityReport", "CrossConnection",
    "delta_object", "delta_morphism", "gamma_object", "gamma_morphism", "canonical_cross_section",
    "verify_local_isomorphism", "bifunctor_cell", "chi", "check_naturality",
    "u_gamma", "u_delta", "linked_pair", "build_cross_connection_semigroup", "layer_grid",
    "subset_morphisms", "partition_morphisms",
]


# ---------------------------------------------------------------- Delta

def _need_subset_object(A: Subset, ctx: VariantContext):
    if not separates(ctx.kernel, A) or not len(A):
        raise NotAnObjectError(f"{A} is not separated by {ctx.kernel}")


def _need_partition_object(pi: SetPartition, ctx: VariantContext):
    if not saturates(ctx.image, pi):
        raise NotAnObjectError(f"{pi} is not saturated by {ctx.image}")


def delta_object(A: Subset, ctx: VariantContext) -> Subset:
    _need_subset_object(A, ctx)
    return A.image_under(ctx.theta)


def delta_morphism(f: SubsetMorphism, ctx: VariantContext) -> SubsetMorphism:
    """(theta|A)^-1 ; f ; theta, a map A.theta -> B.theta."""
    _need_subset_object(f.dom, ctx)
    _need_subset_object(f.cod, ctx)
    th = ctx.theta
    back = {th(x): x for x in f.dom}
    fd = f.as_dict()
    dom = delta_object(f.dom, ctx)
    return SubsetMorphism.from_mapping(dom, delta_object(f.cod, ctx), {y: th(fd[back[y]]) for y in dom})


# ---------------------------------------------------------------- Gamma

def gamma_object(pi: SetPartition, ctx: VariantContext) -> SetPartition:
    _need_partition_object(pi, ctx)
    return preimage_partition(pi, ctx.theta)


def canonical_cross_section(pi: SetPartition, ctx: VariantContext) -> Subset:
    """Least element of each block of theta^-1(pi); an object separated by
    kernel(theta) whose theta-image is a cross-section of pi."""
    return Subset.of(ctx.n, (b[0] for b in gamma_object(pi, ctx).blocks))


def _transport(eta: PartitionMorphism, ctx: VariantContext, C: Subset | None = None) -> dict[int, int]:
    """x -> (theta ; eta ; (theta|C)^-1)(x), an element of C."""
    th = ctx.theta
    C = canonical_cross_section(eta.dom, ctx) if C is None else C
    by_block = {eta.dom.block_index(th(c)): c for c in C}
    if len(by_block) != len(eta.dom) or len(C) != len(eta.dom):
        raise ValueError(f"{C} is not a cross-section of {gamma_object(eta.dom, ctx)}")
    return {x: by_block[eta.classmap[eta.cod.block_index(th(x))]] for x in range(1, ctx.n + 1)}


def gamma_morphism(eta: PartitionMorphism, ctx: VariantContext, C: Subset | None = None) -> PartitionMorphism:
    """The morphism theta^-1(pi1) -> theta^-1(pi2) carried by
    theta ; eta ; (theta|C)^-1, with C a cross-section of theta^-1(pi1)."""
    dom, cod = gamma_object(eta.dom, ctx), gamma_object(eta.cod, ctx)
    t = _transport(eta, ctx, C)
    return PartitionMorphism(dom, cod, tuple(dom.block_index(t[b[0]]) for b in cod.blocks))


# ---------------------------------------------------------------- hom-sets

def subset_morphisms(A: Subset, B: Subset):
    for values in itertools.product(B.sorted, repeat=len(A)):
        yield SubsetMorphism(A, B, values)


def partition_morphisms(p1: SetPartition, p2: SetPartition):
    for cm in itertools.product(range(len(p1)), repeat=len(p2)):
        yield PartitionMorphism(p1, p2, cm)


# ---------------------------------------------------------------- local isomorphism

@dataclass
class LocalIsoReport:
    functor: str
    ok: bool
    ideals: list                 # per vertex: dict with counts and flags
    covered: bool                # every object of the partner lies in some M-set
    uncovered: list
    objects: int                 # objects of the source category
    target_objects: int          # objects of the normal dual
    is_isomorphism: bool

    @property
    def proper(self) -> bool:
        return self.ok and not self.is_isomorphism

    def to_json(self) -> dict:
        return {"functor": self.functor, "ok": self.ok, "covered": self.covered,
                "uncovered": [str(u) for u in self.uncovered], "objects": self.objects,
                "target_objects": self.target_objects, "is_isomorphism": self.is_isomorphism,
                "proper": self.proper, "ideals": self.ideals}


def _ideal_check(vertex, ideal, target_ideal, obj_map, homs_src, homs_tgt, mor_map) -> dict:
    images = [obj_map(o) for o in ideal]
    objects_ok = len(set(images)) == len(ideal) and set(images) == set(target_ideal)
    homs = 0
    homs_ok = True
    for o1 in ideal:
        for o2 in ideal:
            src = list(homs_src(o1, o2))
            got = {mor_map(m) for m in src}
            want = set(homs_tgt(obj_map(o1), obj_map(o2)))
            homs += len(src)
            if len(got) != len(src) or got != want:
                homs_ok = False
    return {"vertex": str(vertex), "objects": len(ideal), "homs": homs,
            "objects_bijective": objects_ok, "homs_bijective": homs_ok}


def verify_local_isomorphism(ctx: VariantContext, functor: str = "delta", max_n: int = 5) -> LocalIsoReport:
    """Check the functor restricts to an isomorphism on every principal ideal
    and that every object of the partner category lies in some M-set."""
    if ctx.n > max_n:
        raise GuardError("verify_local_isomorphism", ctx.n, max_n)
    th = ctx.theta
    P, Pi = _objects(ctx, SUBSET), _objects(ctx, PARTITION)
    ideals = []
    if functor == "delta":
        for A in P:
            ideal = [B for B in P if B <= A]
            tgt = all_subsets(ctx.n)
            At = delta_object(A, ctx)
            ideals.append(_ideal_check(A, ideal, [B for B in tgt if B <= At], lambda B: delta_object(B, ctx),
                                       subset_morphisms, subset_morphisms, lambda f: delta_morphism(f, ctx)))
        uncovered = [pi for pi in Pi if not any(is_cross_section(A.image_under(th), pi) for A in P)]
        image = {delta_object(A, ctx) for A in P}
        target = [A for A in all_subsets(ctx.n) if len(A) <= ctx.rank]
        nsrc = len(P)
    elif functor == "gamma":
        parts = all_partitions(ctx.n)
        for pi in Pi:
            ideal = [q for q in Pi if pi.refines(q)]
            g = gamma_object(pi, ctx)
            ideals.append(_ideal_check(pi, ideal, [q for q in parts if g.refines(q)],
                                       lambda q: gamma_object(q, ctx), partition_morphisms,
                                       partition_morphisms, lambda e: gamma_morphism(e, ctx)))
        uncovered = [A for A in P if not any(is_cross_section(A, gamma_object(pi, ctx)) for pi in Pi)]
        image = {gamma_object(pi, ctx) for pi in Pi}
        target = [p for p in parts if len(p) <= ctx.rank]
        nsrc = len(Pi)
    else:
        raise ValueError(f"unknown functor {functor!r}")
    local = all(d["objects_bijective"] and d["homs_bijective"] for d in ideals)
    iso = local and len(image) == nsrc == len(target) and image == set(target)
    return LocalIsoReport(functor, local and not uncovered, ideals, not uncovered, uncovered,
                          nsrc, len(target), iso)


# ---------------------------------------------------------------- bifunctors

@dataclass(frozen=True)
class BifunctorCell:
    A: Subset
    pi: SetPartition
    gammaSet: tuple
    deltaSet: tuple

    def to_json(self) -> dict:
        return {"A": str(self.A), "pi": str(self.pi),
                "gamma": [str(g) for g in self.gammaSet], "delta": [str(d) for d in self.deltaSet]}


def _constant_on(blocks, values, n: int) -> list[Transformation]:
    out = []
    for choice in itertools.product(values, repeat=len(blocks)):
        img = [0] * n
        for b, v in zip(blocks, choice):
            for x in b:
                img[x - 1] = v
        out.append(Transformation(tuple(img)))
    return sorted(out)


def bifunctor_cell(A: Subset, pi: SetPartition, ctx: VariantContext) -> BifunctorCell:
    """Gamma(A, pi): image inside A, constant on the blocks of theta^-1(pi).
    Delta(A, pi): image inside A.theta, constant on the blocks of pi."""
    _need_subset_object(A, ctx)
    _need_partition_object(pi, ctx)
    g = _constant_on(gamma_object(pi, ctx).blocks, A.sorted, ctx.n)
    d = _constant_on(pi.blocks, delta_object(A, ctx).sorted, ctx.n)
    return BifunctorCell(A, pi, tuple(g), tuple(d))


@dataclass(frozen=True)
class Duality:
    cell: BifunctorCell
    forward: dict = field(repr=False)        # theta.a -> a.theta
    sources: dict = field(repr=False)        # theta.a -> a

    @property
    def bijective(self) -> bool:
        vals = list(self.forward.values())
        return (len(self.forward) == len(self.cell.gammaSet)
                and len(set(vals)) == len(vals) and set(vals) == set(self.cell.deltaSet))


def chi(cell: BifunctorCell, ctx: VariantContext) -> Duality:
    """theta.a -> a.theta on one cell.  The source a is rebuilt from g = theta.a:
    on a block B of pi it takes the value g has on theta^-1(B)."""
    th = ctx.theta
    pull = {cell.pi.block_index(th(z)): z for z in range(1, ctx.n + 1)}
    fwd, src = {}, {}
    delta = set(cell.deltaSet)
    for g in cell.gammaSet:
        a = Transformation(tuple(g(pull[cell.pi.block_index(x)]) for x in range(1, ctx.n + 1)))
        if not all(p_membership(a, ctx)) or compose(th, a) != g:
            raise InvariantError(f"{g} in Gamma({cell.A}, {cell.pi}) has no regular source")
        d = compose(a, th)
        if d not in delta:
            raise InvariantError(f"chi sends {g} to {d}, outside Delta({cell.A}, {cell.pi})")
        fwd[g], src[g] = d, a
    return Duality(cell, fwd, src)


# ---------------------------------------------------------------- naturality

@dataclass
class NaturalityReport:
    squares: int                  # morphism pairs (f, eta) checked
    elements: int                 # individual element chases
    failures: list                # (f, eta, g, lhs, rhs) witnesses, at most a few

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"ok": self.ok, "squares": self.squares, "elements": self.elements,
                "failures": [[str(x) for x in w] for w in self.failures]}


def _arr(t: Transformation) -> np.ndarray:
    return np.array(t.images, dtype=np.int64) - 1


def check_naturality(ctx: VariantContext, max_n: int = 4, cross_section=None,
                     stop_after: int = 5) -> NaturalityReport:
    """Chase every g in every cell Gamma(A, pi1) around the square for every
    (f: A -> B, eta: pi1 -> pi2), comparing
    Delta(f, eta)(chi(g)) with chi(Gamma(f, eta)(g)).

    Both bifunctor actions are evaluated literally:
      Gamma(f, eta): g -> theta ; eta ; (theta|C)^-1 ; g ; f
      Delta(f, eta): d -> eta ; d ; (theta|A)^-1 ; f ; theta
    with eta realized by a representative of each target block.  Batched over
    all f sharing (A, B).  ``cross_section(pi1)`` overrides the choice of C."""
    if ctx.n > max_n:
        raise GuardError("check_naturality", ctx.n, max_n)
    n = ctx.n
    th = _arr(ctx.theta)
    P, Pi = _objects(ctx, SUBSET), _objects(ctx, PARTITION)
    pw = n ** np.arange(n - 1, -1, -1, dtype=np.int64)

    cells, chis = {}, {}
    for A in P:
        for pi in Pi:
            c = bifunctor_cell(A, pi, ctx)
            cells[A, pi] = np.array([g.images for g in c.gammaSet], dtype=np.int64) - 1
            d = chi(c, ctx)
            chis[A, pi] = np.array([d.forward[g].images for g in c.gammaSet], dtype=np.int64) - 1
    gamma_codes = {k: set((v @ pw).tolist()) for k, v in cells.items()}

    # all f: A -> B as rows of n-arrays (entries off A unused, set to 0)
    fmaps = {}
    for A in P:
        for B in P:
            rows = []
            for vals in itertools.product(B.sorted, repeat=len(A)):
                r = np.zeros(n, dtype=np.int64)
                r[np.array(A.sorted) - 1] = np.array(vals) - 1
                rows.append(r)
            fmaps[A, B] = np.array(rows)
    invA = {}
    for A in P:
        inv = -np.ones(n, dtype=np.int64)
        for x in A:
            inv[th[x - 1]] = x - 1
        invA[A] = inv

    squares = elements = 0
    failures: list = []
    for p1 in Pi:
        C = canonical_cross_section(p1, ctx) if cross_section is None else cross_section(p1)
        for p2 in Pi:
            for eta in partition_morphisms(p1, p2):
                t = _transport(eta, ctx, C)
                c = np.array([t[x] - 1 for x in range(1, n + 1)])
                # r(x): a point of the pi1-block eta assigns to the pi2-block of x
                r = np.array([p1.blocks[eta.classmap[p2.block_index(x)]][0] - 1 for x in range(1, n + 1)])
                for A in P:
                    G = cells[A, p1]
                    if not len(G):
                        continue
                    X = invA[A][chis[A, p1][:, r]]                  # (theta|A)^-1 of eta;chi(g)
                    Gc = G[:, c]
                    for B in P:
                        F = fmaps[A, B]
                        lhs = th[F[:, X]]                           # ... ; f ; theta
                        moved = F[:, Gc]                            # Gamma(f, eta)(g)
                        codes = (moved @ pw).ravel()
                        chiB = chis[B, p2]
                        idx = {code: i for i, code in enumerate((cells[B, p2] @ pw).tolist())}
                        if not gamma_codes[B, p2].issuperset(codes.tolist()):
                            bad = next(i for i, k in enumerate(codes.tolist()) if k not in idx)
                            failures.append(("Gamma action leaves the cell", A, B, eta, bad))
                            continue
                        rhs = chiB[np.fromiter((idx[k] for k in codes.tolist()), dtype=np.int64,
                                               count=len(codes))].reshape(lhs.shape)
                        squares += len(F)
                        elements += lhs.shape[0] * lhs.shape[1]
                        if not np.array_equal(lhs, rhs) and len(failures) < stop_after:
                            i, j = np.argwhere(np.any(lhs != rhs, axis=2))[0]
                            failures.append((f"f#{i} {A}->{B}", eta, Transformation(tuple(G[j] + 1)),
                                             Transformation(tuple(lhs[i, j] + 1)),
                                             Transformation(tuple(rhs[i, j] + 1))))
    return NaturalityReport(squares, elements, failures)


# ---------------------------------------------------------------- U Gamma / U Delta

def u_gamma(ctx: VariantContext, via: str = "characterization") -> list[Transformation]:
    """Maps whose kernel coarsens kernel(theta) and whose image is an object
    (``via="reg"``: {theta.a : a in Reg})."""
    if via == "reg":
        return sorted({compose(ctx.theta, a) for a in reg_elements(ctx)})
    return [a for a in all_transformations(ctx.n)
            if ctx.kernel.refines(a.kernel) and separates(ctx.kernel, a.image)]


def u_delta(ctx: VariantContext, via: str = "characterization") -> list[Transformation]:
    """Maps whose kernel is saturated by image(theta) and whose image lies in
    image(theta) (``via="reg"``: {a.theta : a in Reg})."""
    if via == "reg":
        return sorted({compose(a, ctx.theta) for a in reg_elements(ctx)})
    return [a for a in all_transformations(ctx.n)
            if saturates(ctx.image, a.kernel) and a.image <= ctx.image]


def layer_grid(elements, rank: int) -> tuple[list, list]:
    """(kernels, images) met by the rank-``rank`` elements, canonically sorted."""
    layer = [a for a in elements if a.rank == rank]
    rows = sorted({a.kernel for a in layer}, key=SetPartition.sort_key)
    cols = sorted({a.image for a in layer}, key=Subset.sort_key)
    return rows, cols


# ---------------------------------------------------------------- linked pairs

@dataclass(frozen=True)
class LinkedPair:
    left: Transformation                          # theta.a
    right: Transformation                         # a.theta
    source: Transformation = field(compare=False)

    def to_json(self) -> dict:
        return {"left": str(self.left), "right": str(self.right), "source": str(self.source)}

    def __str__(self) -> str:
        return f"({self.left},{self.right})"


def linked_pair(a: Transformation, ctx: VariantContext) -> LinkedPair:
    if not all(p_membership(a, ctx)):
        raise InvariantError(f"{a} is not regular in the variant")
    return LinkedPair(compose(ctx.theta, a), compose(a, ctx.theta), a)


@dataclass
class CrossConnection:
    semigroup: engine.SemigroupTable
    pairs: list
    iso: engine.HomomorphismReport
    coordinates_ok: bool          # left = theta(a*b), right = (a*b)theta on all products
    reg: engine.SemigroupTable

    @property
    def ok(self) -> bool:
        return self.iso.isomorphism and self.coordinates_ok

    def to_json(self) -> dict:
        return {"size": len(self.pairs), "isomorphism": self.iso.isomorphism,
                "coordinates_ok": self.coordinates_ok,
                "witness": None if self.iso.witness is None else [str(w) for w in self.iso.witness],
                "pairs": [p.to_json() for p in self.pairs]}


def build_cross_connection_semigroup(ctx: VariantContext, max_n: int = 6) -> CrossConnection:
    """Linked pairs under (l, r)(l', r') = (l.l', r.r').

    The right coordinates multiply in plain composition order: (a.theta)(b.theta)
    is (a*b).theta, so the opposite convention of the abstract construction
    needs no separate type."""
    if ctx.n > max_n:
        raise GuardError("build_cross_connection_semigroup", ctx.n, max_n)
    reg = reg_semigroup(ctx, max_n=max_n)
    pairs = [linked_pair(a, ctx) for a in reg.elements]
    by_coords = {(p.left, p.right): p for p in pairs}
    if len(by_coords) != len(pairs):
        raise InvariantError("a -> (theta.a, a.theta) is not injective")

    def product(p: LinkedPair, q: LinkedPair) -> LinkedPair:
        key = (compose(p.left, q.left), compose(p.right, q.right))
        if key not in by_coords:
            raise InvariantError(f"{p} {q} leaves the linked pairs")
        return by_coords[key]

    S = engine.build_semigroup(pairs, product, check_assoc=True)
    coords_ok = True
    for i, a in enumerate(reg.elements):
        for j, b in enumerate(reg.elements):
            ab = reg.elements[reg.table[i, j]]
            pq = S.elements[S.table[S.index[pairs[i]], S.index[pairs[j]]]]
            if pq.left != compose(ctx.theta, ab) or pq.right != compose(ab, ctx.theta):
                coords_ok = False
                break
        if not coords_ok:
            break
    iso = engine.verify_homomorphism(lambda a: by_coords[compose(ctx.theta, a), compose(a, ctx.theta)], reg, S)
    return CrossConnection(S, pairs, iso, coords_ok, reg)
