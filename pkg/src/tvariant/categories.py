"""Concrete normal categories attached to a sandwich element theta.

Subset side: objects are the nonempty A separated by kernel(theta), morphisms
all maps between them.  Partition side: objects are the partitions saturated
by image(theta); a morphism pi1 -> pi2 is carried by a class map from the
blocks of pi2 to the blocks of pi1 (it acts on maps out of pi1 by
precomposition).  Cones are stored with an explicit component at every
object so the axiom checker has something real to check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import GuardError, NotAnObjectError, NotNormalConeError
from .transform import (SetPartition, Subset, Transformation, all_partitions, all_subsets, all_transformations,
                        is_cross_section, saturates, separates)
from .variant import VariantContext, p_membership

__all__ = [
    "SubsetMorphism", "PartitionMorphism", "NormalCone", "ConeReport", "CategoryObjects",
    "enumerate_objects", "normal_factorization", "epimorphic_part", "cone_from_transformation",
    "is_normal_cone", "cone_compose", "m_set", "p1_elements", "p2_elements", "SUBSET", "PARTITION",
]

SUBSET = "subset"
PARTITION = "partition"


# ---------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class SubsetMorphism:
    dom: Subset
    cod: Subset
    values: tuple[int, ...]          # values[i] is the image of dom.sorted[i]

    def __post_init__(self):
        if len(self.values) != len(self.dom):
            raise ValueError("map is not total on its domain")
        for v in self.values:
            if v not in self.cod:
                raise ValueError(f"value {v} not in codomain {self.cod}")

    @classmethod
    def from_mapping(cls, dom: Subset, cod: Subset, mapping: Mapping[int, int]) -> "SubsetMorphism":
        return cls(dom, cod, tuple(mapping[x] for x in dom.sorted))

    @classmethod
    def identity(cls, A: Subset) -> "SubsetMorphism":
        return cls(A, A, A.sorted)

    @classmethod
    def inclusion(cls, A: Subset, B: Subset) -> "SubsetMorphism":
        return cls(A, B, A.sorted)

    def __call__(self, x: int) -> int:
        return self.values[self.dom.sorted.index(x)]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.dom.sorted, self.values))

    def then(self, g: "SubsetMorphism") -> "SubsetMorphism":
        """Apply self, then g."""
        if self.cod != g.dom:
            raise ValueError(f"not composable: {self.cod} vs {g.dom}")
        gd = g.as_dict()
        return SubsetMorphism(self.dom, g.cod, tuple(gd[v] for v in self.values))

    def restrict(self, A: Subset) -> "SubsetMorphism":
        d = self.as_dict()
        return SubsetMorphism(A, self.cod, tuple(d[x] for x in A.sorted))

    @property
    def image(self) -> Subset:
        return Subset(self.dom.n, frozenset(self.values))

    def is_bijection(self) -> bool:
        return len(set(self.values)) == len(self.values) == len(self.cod)

    def __str__(self) -> str:
        return f"{self.dom}->{self.cod} " + ",".join(f"{x}>{y}" for x, y in self.as_dict().items())


@dataclass(frozen=True)
class PartitionMorphism:
    """Morphism dom -> cod carried by ``classmap``: block j of ``cod`` goes
    to block ``classmap[j]`` of ``dom``."""

    dom: SetPartition
    cod: SetPartition
    classmap: tuple[int, ...]

    def __post_init__(self):
        if len(self.classmap) != len(self.cod):
            raise ValueError("class map must be total on the blocks of the codomain")
        if any(not 0 <= k < len(self.dom) for k in self.classmap):
            raise ValueError("class map value is not a block of the domain")

    @classmethod
    def identity(cls, pi: SetPartition) -> "PartitionMorphism":
        return cls(pi, pi, tuple(range(len(pi))))

    @classmethod
    def inclusion(cls, coarse: SetPartition, fine: SetPartition) -> "PartitionMorphism":
        """The inclusion of maps constant on ``coarse`` among maps constant on ``fine``."""
        if not fine.refines(coarse):
            raise ValueError(f"{fine} does not refine {coarse}")
        return cls(coarse, fine, tuple(coarse.block_index(b[0]) for b in fine.blocks))

    def then(self, g: "PartitionMorphism") -> "PartitionMorphism":
        if self.cod != g.dom:
            raise ValueError(f"not composable: {self.cod} vs {g.dom}")
        return PartitionMorphism(self.dom, g.cod, tuple(self.classmap[k] for k in g.classmap))

    def is_bijection(self) -> bool:
        return len(set(self.classmap)) == len(self.classmap) == len(self.dom)

    def as_blocks(self) -> dict:
        return {self.cod.blocks[j]: self.dom.blocks[k] for j, k in enumerate(self.classmap)}

    def __str__(self) -> str:
        return f"{self.dom}->{self.cod} " + ",".join(
            f"{''.join(map(str, b))}>{''.join(map(str, c))}" for b, c in self.as_blocks().items())


# ---------------------------------------------------------------- objects

@dataclass(frozen=True)
class CategoryObjects:
    pTheta: tuple
    piTheta: tuple
    dualP: tuple
    dualPi: tuple

    def to_json(self) -> dict:
        return {k: [str(x) for x in getattr(self, k)] for k in ("pTheta", "piTheta", "dualP", "dualPi")}


def _objects(ctx: VariantContext, side: str) -> list:
    if side == SUBSET:
        return [A for A in all_subsets(ctx.n) if separates(ctx.kernel, A)]
    if side == PARTITION:
        return [p for p in all_partitions(ctx.n) if saturates(ctx.image, p)]
    raise ValueError(f"unknown side {side!r}")


def enumerate_objects(ctx: VariantContext, max_n: int = 8) -> CategoryObjects:
    if ctx.n > max_n:
        raise GuardError("enumerate_objects", ctx.n, max_n)
    return CategoryObjects(
        pTheta=tuple(_objects(ctx, SUBSET)),
        piTheta=tuple(_objects(ctx, PARTITION)),
        dualP=tuple(p for p in all_partitions(ctx.n) if len(p) <= ctx.rank),
        dualPi=tuple(A for A in all_subsets(ctx.n) if len(A) <= ctx.rank),
    )


# ---------------------------------------------------------------- factorization

def normal_factorization(f: SubsetMorphism) -> tuple[SubsetMorphism, SubsetMorphism, SubsetMorphism]:
    """retraction ; isomorphism ; inclusion, with the least element of each
    kernel class of f as the cross-section."""
    reps: dict[int, int] = {}
    for x, y in f.as_dict().items():
        reps.setdefault(y, x)          # dom.sorted is ascending, so first = least
    C = Subset(f.dom.n, frozenset(reps.values()))
    d = f.as_dict()
    retraction = SubsetMorphism.from_mapping(f.dom, C, {x: reps[d[x]] for x in f.dom})
    iso = SubsetMorphism.from_mapping(C, f.image, {c: d[c] for c in C})
    inclusion = SubsetMorphism.inclusion(f.image, f.cod)
    return retraction, iso, inclusion


def epimorphic_part(m):
    """The morphism onto the image of ``m``."""
    if isinstance(m, SubsetMorphism):
        r, iso, _ = normal_factorization(m)
        return r.then(iso)
    # partition side: the image object groups cod-blocks by their class value
    groups: dict[int, list[int]] = {}
    for j, k in enumerate(m.classmap):
        groups.setdefault(k, []).extend(m.cod.blocks[j])
    image = SetPartition.from_blocks(m.cod.n, groups.values())
    return PartitionMorphism(m.dom, image, tuple(m.classmap[m.cod.block_index(b[0])] for b in image.blocks))


# ---------------------------------------------------------------- cones

@dataclass(frozen=True)
class NormalCone:
    side: str
    vertex: object
    components: tuple = field(repr=False)       # ((object, morphism), ...)

    def __getitem__(self, obj):
        for o, m in self.components:
            if o == obj:
                return m
        raise KeyError(obj)

    def as_dict(self) -> dict:
        return dict(self.components)

    def to_json(self) -> dict:
        if self.side == SUBSET:
            comps = {str(o): {str(k): v for k, v in m.as_dict().items()} for o, m in self.components}
        else:
            comps = {str(o): {"".join(map(str, b)): "".join(map(str, c)) for b, c in m.as_blocks().items()}
                     for o, m in self.components}
        return {"side": self.side, "vertex": str(self.vertex), "components": comps}

    def transformation(self) -> Transformation | None:
        """Subset side: the map read off the singleton components."""
        if self.side != SUBSET:
            return None
        d = self.as_dict()
        n = self.vertex.n
        return Transformation(tuple(d[Subset(n, frozenset([x]))].values[0] for x in range(1, n + 1)))


@dataclass
class ConeReport:
    ok: bool
    violations: list

    def __bool__(self) -> bool:
        return self.ok


def cone_from_transformation(a: Transformation, ctx: VariantContext, side: str = SUBSET,
                             strict: bool = True) -> NormalCone:
    """The principal cone of ``a``.

    Subset side: vertex image(a), component at A the restriction of a to A.
    Partition side: vertex kernel(a), component at pi sends a block B of
    kernel(a) to the block of pi containing a(B).
    With ``strict`` the result must pass :func:`is_normal_cone`."""
    objs = _objects(ctx, side)
    if side == SUBSET:
        vertex = a.image
        if vertex not in objs:
            raise NotAnObjectError(f"vertex {vertex} of {a} is not separated by {ctx.kernel}")
        comps = tuple((A, SubsetMorphism(A, vertex, tuple(a(x) for x in A.sorted))) for A in objs)
    else:
        vertex = a.kernel
        if vertex not in objs:
            raise NotAnObjectError(f"vertex {vertex} of {a} is not saturated by {ctx.image}")
        comps = tuple((p, PartitionMorphism(p, vertex, tuple(p.block_index(a(b[0])) for b in vertex.blocks)))
                      for p in objs)
    cone = NormalCone(side, vertex, comps)
    if strict:
        report = is_normal_cone(cone, ctx)
        if not report:
            raise NotNormalConeError(f"{a} does not give a normal cone: {report.violations[0]}", report)
    return cone


def is_normal_cone(c: NormalCone, ctx: VariantContext) -> ConeReport:
    objs = _objects(ctx, c.side)
    comps = c.as_dict()
    v: list = []
    if c.vertex not in objs:
        v.append(("vertex", str(c.vertex), "not an object"))
    for o in objs:
        m = comps.get(o)
        if m is None:
            v.append(("totality", str(o), "missing component"))
        elif m.dom != o or m.cod != c.vertex:
            v.append(("totality", str(o), f"component {m} has wrong domain/codomain"))
    for o in comps:
        if o not in objs:
            v.append(("totality", str(o), "component at a non-object"))
    if v:
        return ConeReport(False, v)
    for small in objs:
        for big in objs:
            if small == big:
                continue
            if c.side == SUBSET:
                if not small <= big:
                    continue
                lhs = SubsetMorphism.inclusion(small, big).then(comps[big])
            else:
                if not big.refines(small):
                    continue
                lhs = PartitionMorphism.inclusion(small, big).then(comps[big])
            if lhs != comps[small]:
                v.append(("compatibility", f"{small}<={big}", f"{lhs} != {comps[small]}"))
    if not any(m.is_bijection() for m in comps.values()):
        v.append(("isomorphism", str(c.vertex), "no component is an isomorphism"))
    return ConeReport(not v, v)


def cone_compose(gamma: NormalCone, sigma: NormalCone, ctx: VariantContext) -> NormalCone:
    """gamma . sigma: post-compose every component of gamma with the
    epimorphic part of sigma's component at gamma's vertex."""
    if gamma.side != sigma.side:
        raise ValueError("cones from different sides")
    epi = epimorphic_part(sigma[gamma.vertex])
    comps = tuple((o, m.then(epi)) for o, m in gamma.components)
    return NormalCone(gamma.side, epi.cod, comps)


def m_set(a: Transformation, ctx: VariantContext | None = None) -> list[SetPartition]:
    """Partitions (of the theta category, or all of them when ``ctx`` is
    None) having image(a) as a cross-section."""
    pool = all_partitions(a.n) if ctx is None else _objects(ctx, PARTITION)
    return [p for p in pool if is_cross_section(a.image, p)]


def p1_elements(ctx: VariantContext) -> list[Transformation]:
    return [a for a in all_transformations(ctx.n) if p_membership(a, ctx)[0]]


def p2_elements(ctx: VariantContext) -> list[Transformation]:
    return [a for a in all_transformations(ctx.n) if p_membership(a, ctx)[1]]
