"""The sandwich product a*b = a.theta.b on T_n and its regular part.

Two independent routes to regularity live here: the predicate pair
(P1: kernel(theta) separates image(a); P2: image(theta) saturates kernel(a))
and an exhaustive search for x with a*x*a = a.  Tests compare them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import factorial
from typing import NamedTuple, Sequence

import numpy as np

from . import engine
from .errors import GuardError, NotRegularError, SizeMismatchError
from .transform import (SetPartition, Subset, Transformation, all_partitions, all_subsets,
                        all_transformations, compose, parse_transformation, saturates,
                        separates)

__all__ = [
    "VariantContext", "variant_product", "p_membership", "reg_elements",
    "regular_by_search", "green_variant", "GreenRelation", "d_theta_decomposition",
    "Decomposition", "transformation_table", "full_semigroup", "variant_semigroup",
    "reg_semigroup", "reg_eggbox", "grid_shapes", "summary",
]

MAX_ENUM_N = 8
MAX_ORACLE_N = 5


@dataclass(frozen=True)
class VariantContext:
    theta: Transformation

    @classmethod
    def from_word(cls, word: str, n: int) -> "VariantContext":
        return cls(parse_transformation(word, n))

    @property
    def n(self) -> int:
        return self.theta.n

    @cached_property
    def image(self) -> Subset:
        return self.theta.image

    @cached_property
    def kernel(self) -> SetPartition:
        return self.theta.kernel

    @property
    def rank(self) -> int:
        return self.theta.rank

    def product(self, a: Transformation, b: Transformation) -> Transformation:
        return variant_product(a, b, self)

    def __str__(self) -> str:
        return f"theta={self.theta} (n={self.n})"


def variant_product(a: Transformation, b: Transformation, ctx: VariantContext) -> Transformation:
    if not a.n == b.n == ctx.n:
        raise SizeMismatchError(f"sizes {a.n}, {b.n} vs theta on {ctx.n}")
    th = ctx.theta.images
    bi = b.images
    return Transformation(tuple(bi[th[x - 1] - 1] for x in a.images))


def p_membership(a: Transformation, ctx: VariantContext) -> tuple[bool, bool]:
    return separates(ctx.kernel, a.image), saturates(ctx.image, a.kernel)


def _guard(what: str, n: int, max_n: int):
    if n > max_n:
        raise GuardError(what, n, max_n)


def reg_elements(ctx: VariantContext, max_n: int = MAX_ENUM_N, check: bool = False) -> list[Transformation]:
    """Reg(T_n^theta) = P1 n P2, in lexicographic word order.

    ``check=True`` additionally compares against :func:`regular_by_search`
    (needs n <= 5)."""
    _guard("reg_elements", ctx.n, max_n)
    out = [a for a in all_transformations(ctx.n) if all(p_membership(a, ctx))]
    if check:
        oracle = regular_by_search(ctx)
        if set(out) != set(oracle):
            raise AssertionError("P1 n P2 differs from the regularity oracle")
    return out


# ---------------------------------------------------------------- vectorized tables

@lru_cache(maxsize=None)
def _all_maps(n: int) -> np.ndarray:
    """All n**n maps as a read-only (n**n, n) array of 0-indexed images, row k
    being the map whose word has base-n code k (lexicographic order)."""
    grids = np.indices((n,) * n).reshape(n, -1).T
    grids = np.ascontiguousarray(grids, dtype=np.int64)
    grids.setflags(write=False)
    return grids


def _powers(n: int) -> np.ndarray:
    return n ** np.arange(n - 1, -1, -1, dtype=np.int64)


def _code(a: Transformation) -> int:
    c = 0
    for v in a.images:
        c = c * a.n + (v - 1)
    return c


def transformation_table(elements: Sequence[Transformation], theta: Transformation | None = None,
                         check_assoc: bool = True) -> engine.SemigroupTable:
    """Cayley table of ``elements`` under composition (or the theta-sandwich
    product), built with array indexing instead of n**2 Python calls."""
    elements = list(dict.fromkeys(elements))
    if not elements:
        raise ValueError("no elements")
    n = elements[0].n
    M = np.array([e.images for e in elements], dtype=np.int64) - 1
    pw = _powers(n)
    lookup = -np.ones(n ** n, dtype=np.int64)
    lookup[M @ pw] = np.arange(len(elements))
    left = M if theta is None else (np.array(theta.images, dtype=np.int64) - 1)[M]
    table = np.empty((len(elements), len(elements)), dtype=np.int64)
    for i in range(len(elements)):
        prod = M[:, left[i]]                      # row j: x -> b_j(left_i(x))
        table[i] = lookup[prod @ pw]
    bad = np.argwhere(table < 0)
    if len(bad):
        from .errors import ClosureError
        i, j = bad[0]
        raise ClosureError(elements[i], elements[j], "outside the element list")
    return engine.SemigroupTable.from_table(elements, table, check_assoc=check_assoc)


def full_semigroup(n: int, max_n: int = MAX_ORACLE_N) -> engine.SemigroupTable:
    _guard("full_semigroup", n, max_n)
    return transformation_table(list(all_transformations(n)))


def variant_semigroup(ctx: VariantContext, max_n: int = MAX_ORACLE_N) -> engine.SemigroupTable:
    _guard("variant_semigroup", ctx.n, max_n)
    return transformation_table(list(all_transformations(ctx.n)), ctx.theta)


def reg_semigroup(ctx: VariantContext, max_n: int = 6) -> engine.SemigroupTable:
    return transformation_table(reg_elements(ctx, max_n=max_n), ctx.theta)


def regular_by_search(ctx: VariantContext, max_n: int = MAX_ORACLE_N) -> list[Transformation]:
    """Oracle: every a with a*x*a = a for some x in T_n, by exhaustive search."""
    _guard("regular_by_search", ctx.n, max_n)
    n = ctx.n
    M = _all_maps(n)
    th = np.array(ctx.theta.images, dtype=np.int64) - 1
    out = []
    for k in range(len(M)):
        a = M[k]
        # a*x*a as a function of x: y -> a(th(x(th(a(y)))))
        inner = th[a]                              # th(a(y))
        vals = a[th[M[:, inner]]]                  # rows over x
        if np.any(np.all(vals == a, axis=1)):
            out.append(Transformation(tuple(int(v) + 1 for v in a)))
    return out


# ---------------------------------------------------------------- Green

class GreenRelation(NamedTuple):
    L: bool
    R: bool
    D: bool
    H: bool


def green_variant(a: Transformation, b: Transformation, ctx: VariantContext) -> GreenRelation:
    """Closed-form Green relations between two regular elements."""
    for x in (a, b):
        if not all(p_membership(x, ctx)):
            raise NotRegularError(f"{x} is not regular in T_{ctx.n}^{ctx.theta}")
    L = a.image == b.image
    R = a.kernel == b.kernel
    return GreenRelation(L, R, a.rank == b.rank, L and R)


# ---------------------------------------------------------------- decomposition

@dataclass
class PartStats:
    elements: list
    d_classes: int = 0
    l_classes: int = 0
    r_classes: int = 0
    h_classes: int = 0
    max_h: int = 0

    def to_json(self) -> dict:
        return {"size": len(self.elements), "d_classes": self.d_classes,
                "l_classes": self.l_classes, "r_classes": self.r_classes,
                "h_classes": self.h_classes, "max_h_size": self.max_h}


@dataclass
class Decomposition:
    p1p2: PartStats
    p1_only: PartStats
    p2_only: PartStats
    neither: PartStats
    flags: dict = field(default_factory=dict)

    def parts(self) -> dict[str, PartStats]:
        return {"p1p2": self.p1p2, "p1_only": self.p1_only,
                "p2_only": self.p2_only, "neither": self.neither}

    def sizes(self) -> dict[str, int]:
        return {k: len(v.elements) for k, v in self.parts().items()}

    def to_json(self) -> dict:
        return {**{k: v.to_json() for k, v in self.parts().items()}, "flags": dict(self.flags)}


def d_theta_decomposition(ctx: VariantContext, max_n: int = MAX_ORACLE_N) -> Decomposition:
    """Split T_n into the four P1/P2 cells and check them against Green's
    relations of (T_n, *) computed by the engine."""
    _guard("d_theta_decomposition", ctx.n, max_n)
    S = variant_semigroup(ctx, max_n=max_n)
    G = engine.green_classes(S)
    buckets: dict[tuple[bool, bool], list[int]] = {k: [] for k in
                                                   [(True, True), (True, False), (False, True), (False, False)]}
    for i, a in enumerate(S.elements):
        buckets[p_membership(a, ctx)].append(i)

    def stats(idx):
        st = PartStats([S.elements[i] for i in idx])
        if idx:
            h_sizes: dict[int, int] = {}
            for i in idx:
                h_sizes[int(G.H[i])] = h_sizes.get(int(G.H[i]), 0) + 1
            st.d_classes = len({int(G.D[i]) for i in idx})
            st.l_classes = len({int(G.L[i]) for i in idx})
            st.r_classes = len({int(G.R[i]) for i in idx})
            st.h_classes = len(h_sizes)
            st.max_h = max(h_sizes.values())
        return st

    dec = Decomposition(stats(buckets[True, True]), stats(buckets[True, False]),
                        stats(buckets[False, True]), stats(buckets[False, False]))
    oracle_regular = set(engine.regular_elements(S))
    d_size = np.bincount(G.D)
    h_size = np.bincount(G.H)

    def h_singleton(idx):
        return all(h_size[G.H[i]] == 1 for i in idx)

    dec.flags = {
        "p1p2_is_regular": set(dec.p1p2.elements) == oracle_regular,
        "p1_only_h_singletons": h_singleton(buckets[True, False]),
        "p2_only_h_singletons": h_singleton(buckets[False, True]),
        "neither_d_singletons": all(d_size[G.D[i]] == 1 for i in buckets[False, False]),
        # one regular D-class per rank
        "regular_d_by_rank": len({int(G.D[i]) for i in buckets[True, True]})
        == len({S.elements[i].rank for i in buckets[True, True]}),
    }
    return dec


# ---------------------------------------------------------------- egg-boxes / shapes

def reg_eggbox(ctx: VariantContext, rank: int, S: engine.SemigroupTable | None = None,
               green: engine.GreenData | None = None) -> engine.EggBox:
    """Egg-box of the regular D^theta-class of the given rank, computed by the
    engine on Reg(T_n^theta); rows are kernels, columns images."""
    S = S or reg_semigroup(ctx)
    green = green or engine.green_classes(S)
    ids = {int(green.D[i]) for i, a in enumerate(S.elements) if a.rank == rank}
    if len(ids) != 1:
        raise KeyError(f"no single regular D-class of rank {rank} (found {len(ids)})")
    return engine.egg_box(S, green, ids.pop(),
                          row_label=lambda a: a.kernel, col_label=lambda a: a.image,
                          row_key=SetPartition.sort_key, col_key=Subset.sort_key,
                          element_key=lambda a: a.images)


def grid_shapes(ctx: VariantContext) -> list[dict]:
    """Per-rank regular D-class shape from the predicates alone:
    rows = saturated k-block partitions, cols = separated k-subsets, |H| = k!."""
    parts = [p for p in all_partitions(ctx.n) if saturates(ctx.image, p)]
    subs = [s for s in all_subsets(ctx.n) if separates(ctx.kernel, s)]
    out = []
    for k in range(1, ctx.n + 1):
        rows = sum(1 for p in parts if len(p) == k)
        cols = sum(1 for s in subs if len(s) == k)
        if rows and cols:
            out.append({"rank": k, "rows": rows, "cols": cols, "hsize": factorial(k)})
    return out


def p_counts(ctx: VariantContext) -> dict[str, int]:
    """Sizes of the four P1/P2 cells, vectorized over all n**n maps."""
    n = ctx.n
    M = _all_maps(n)
    img_mask = np.zeros(len(M), dtype=np.int64)
    for col in range(n):
        img_mask |= 1 << M[:, col]
    # P1: no kernel(theta)-block contains two image points
    block = np.array([ctx.kernel.block_index(x + 1) for x in range(n)])
    block_masks = [sum(1 << x for x in range(n) if block[x] == b) for b in range(len(ctx.kernel))]
    p1 = np.ones(len(M), dtype=bool)
    for bm in block_masks:
        hit = img_mask & bm
        p1 &= (hit & (hit - 1)) == 0
    # P2: every kernel(a)-class meets image(theta) <=> every image point of a
    # has a preimage inside image(theta)
    im_theta = np.array([(x + 1) in ctx.image for x in range(n)])
    reached = np.zeros(len(M), dtype=np.int64)
    for col in range(n):
        if im_theta[col]:
            reached |= 1 << M[:, col]
    p2 = reached == img_mask
    return {"p1p2": int(np.sum(p1 & p2)), "p1_only": int(np.sum(p1 & ~p2)),
            "p2_only": int(np.sum(~p1 & p2)), "neither": int(np.sum(~p1 & ~p2))}


def summary(ctx: VariantContext, with_decomposition: bool = True) -> dict:
    """The JSON summary used by the ``info`` / ``reg`` commands."""
    counts = p_counts(ctx)
    return {
        "theta": str(ctx.theta),
        "n": ctx.n,
        "reg_count": counts["p1p2"],
        "d_classes": grid_shapes(ctx),
        "decomposition": counts if with_decomposition else None,
    }
