"""
The cross-connection induced by theta
=====================================

Delta pushes subsets forward along theta, Gamma pulls partitions back.
Their bifunctor cells are matched by chi: theta.a -> a.theta, and the
linked pairs (theta.a, a.theta) rebuild Reg(T_4^theta).
"""
from tvariant.categories import SubsetMorphism, enumerate_objects
from tvariant.crossconn import (bifunctor_cell, build_cross_connection_semigroup, check_naturality, chi,
                                delta_morphism, delta_object, gamma_object, layer_grid, u_delta, u_gamma,
                                verify_local_isomorphism)
from tvariant.transform import parse_partition, parse_subset
from tvariant.variant import VariantContext

ctx = VariantContext.from_word("1233", 4)
objs = enumerate_objects(ctx)
print("subset objects   ", " ".join(map(str, objs.pTheta)))
print("partition objects", " ".join(map(str, objs.piTheta)))

A = parse_subset("{24}", 4)
print("Delta", A, "=", delta_object(A, ctx))
f = SubsetMorphism.from_mapping(A, parse_subset("{123}", 4), {2: 1, 4: 3})
print("Delta of", f, "=", delta_morphism(f, ctx))
print("Gamma {1|234} =", gamma_object(parse_partition("{1|234}", 4), ctx))

for functor in ("delta", "gamma"):
    rep = verify_local_isomorphism(ctx, functor)
    print(f"{functor}: local isomorphism {rep.ok}, {rep.objects} -> {rep.target_objects} objects,",
          "proper" if rep.proper else "isomorphism")

cell = bifunctor_cell(parse_subset("{12}", 4), parse_partition("{12|34}", 4), ctx)
d = chi(cell, ctx)
print("cell ({12}, {12|34}):")
for g, v in d.forward.items():
    print(f"  {g} -> {v}   (source {d.sources[g]})")

nat = check_naturality(ctx)
print(f"naturality: {nat.squares} morphism pairs, {nat.elements} element chases, ok {nat.ok}")

# rank-2 layers of the two images of Reg
print("U Gamma rank 2 grid: %d x %d" % tuple(map(len, layer_grid(u_gamma(ctx), 2))))
print("U Delta rank 2 grid: %d x %d" % tuple(map(len, layer_grid(u_delta(ctx), 2))))

cc = build_cross_connection_semigroup(ctx)
print(len(cc.pairs), "linked pairs; a -> (theta.a, a.theta) is an isomorphism:", cc.ok)
