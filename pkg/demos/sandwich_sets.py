"""
Idempotents and sandwich sets
=============================

Idempotents as (image, kernel) pairs in T_3 and in Reg(T_3^122), the
two preorders, and what the sandwich-set formula does and does not give.
"""
import itertools

from tvariant.biorder import (PLAIN, VARIANT, basic_product, enumerate_idempotents, pair_to_idempotent,
                              sandwich_exclusion, sandwich_set)
from tvariant.transform import compose, parse_partition, parse_subset
from tvariant.variant import VariantContext

ctx = VariantContext.from_word("122", 3)
plain = enumerate_idempotents(n=3)
variant = enumerate_idempotents(ctx, VARIANT)
print(len(plain), "idempotents in T_3,", len(variant), "in Reg(T_3^122)")
for p in variant:
    print("  ", p, pair_to_idempotent(p))

# basic products where the pairs are comparable
p, q = variant[0], variant[-1]
print("basic product of", p, "and", q, "->", basic_product(p, q))

A, pi = parse_subset("{12}", 3), parse_partition("{13|2}", 3)
print(f"S({A}, {pi}) in T_3:", [str(m) for m in sandwich_set(A, pi)])
print(f"S({A}, {pi}) for theta=122:", [str(m) for m in sandwich_set(A, pi, ctx, VARIANT)])
print("why ({23},{13|2}) is missing:",
      sandwich_exclusion(parse_subset("{23}", 3), parse_partition("{13|2}", 3), A, pi, ctx, VARIANT))

# the formula is not the order-theoretic sandwich set: ehf = ef can fail
E = [pair_to_idempotent(x) for x in plain]
bad = [(e, f, pair_to_idempotent(h)) for e, f in itertools.product(E, repeat=2)
       for h in sandwich_set(e.image, f.kernel, None, PLAIN)
       if compose(compose(e, pair_to_idempotent(h)), f) != compose(e, f)]
print(len(bad), "triples with ehf != ef, e.g. e, f, h =", *bad[0])

# what it does give: h with e R eh L h R hf L f, once theta is applied in both tests
def chain(e, h, f):
    eh, hf = ctx.product(e, h), ctx.product(h, f)
    return (eh.kernel, eh.image, hf.kernel, hf.image) == (e.kernel, h.image, h.kernel, f.image)

Ev = [pair_to_idempotent(x) for x in variant]
exact = all({pair_to_idempotent(h) for h in sandwich_set(e.image, f.kernel, ctx, VARIANT, transport=True)}
            == {h for h in Ev if chain(e, h, f)} for e, f in itertools.product(Ev, repeat=2))
print("transported sandwich sets equal the Green chain sets:", exact)
