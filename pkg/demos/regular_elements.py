"""
Regular elements of a variant
=============================

Walk through Reg(T_4^theta) for theta = 1233: which maps are regular, how
T_4 splits by the two predicates, and the rank-2 egg-box.
"""
from tvariant import engine, render
from tvariant.transform import compose, parse_transformation
from tvariant.variant import VariantContext, d_theta_decomposition, reg_elements, reg_semigroup

ctx = VariantContext.from_word("1233", 4)
print(ctx, "kernel", ctx.kernel, "image", ctx.image)

# a is regular iff kernel(theta) separates Im a and Im theta saturates kernel(a)
reg = reg_elements(ctx)
print(len(reg), "regular elements out of 256")

# the four cells of T_4 and their Green structure
dec = d_theta_decomposition(ctx)
for name, part in dec.parts().items():
    print(f"{name:8s}", part.to_json())
print("flags:", dec.flags)

# the variant product moves idempotents around
a, b = parse_transformation("2242", 4), parse_transformation("1414", 4)
print("2242*2242 =", ctx.product(a, a), " 2242.2242 =", compose(a, a))
print("1414*1414 =", ctx.product(b, b), " 1414.1414 =", compose(b, b))

# egg-boxes; G marks rows inside U Gamma, D marks columns inside U Delta
S = reg_semigroup(ctx)
G = engine.green_classes(S)
print(G.count("D"), "regular D-classes")
print(render.eggbox_text(ctx, render.eggboxes(ctx, rank=2)))
