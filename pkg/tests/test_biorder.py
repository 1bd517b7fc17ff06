import itertools

import pytest

import oracles as O
from tvariant import engine
from tvariant.biorder import (PLAIN, VARIANT, IdempotentPair, basic_product, enumerate_idempotents, make_pair,
                              omega, pair_of, pair_to_idempotent, sandwich_candidates, sandwich_exclusion,
                              sandwich_set)
from tvariant.errors import GuardError, InvariantError
from tvariant.transform import compose, identity, parse_partition, parse_subset, parse_transformation
from tvariant.variant import VariantContext, full_semigroup, reg_semigroup

P, S, T = parse_partition, parse_subset, parse_transformation
THETAS3 = ["".join(w) for w in itertools.product("123", repeat=3)]
PERMS3 = [w for w in THETAS3 if len(set(w)) == 3]


def ctx_of(w):
    return VariantContext.from_word(w, len(w))


def chain(e, h, f, mul):
    """e R eh L h R hf L f, read off kernels and images."""
    eh, hf = mul(e, h), mul(h, f)
    return (eh.kernel == e.kernel and eh.image == h.image
            and hf.kernel == h.kernel and hf.image == f.image)


def idems(ctx, flavor, n=3):
    return [pair_to_idempotent(p) for p in enumerate_idempotents(ctx, flavor, n=n)]


# ---------------------------------------------------------------- pairs

def test_plain_pair_example():
    assert pair_to_idempotent(make_pair(S("{12}", 4), P("{13|24}", 4))) == T("1212", 4)


def test_variant_pair_example():
    ctx = ctx_of("1233")
    p = make_pair(S("{24}", 4), P("{124|3}", 4), ctx, VARIANT)
    e = pair_to_idempotent(p)
    assert e == T("2242", 4) and ctx.product(e, e) == e


def test_identity_pair():
    assert pair_to_idempotent(make_pair(S("{123}", 3), P("{1|2|3}", 3))) == identity(3)


def test_invalid_pairs_rejected():
    with pytest.raises(InvariantError):
        make_pair(S("{12}", 3), P("{12|3}", 3))
    with pytest.raises(InvariantError):
        make_pair(S("{14}", 4), P("{13|24}", 4), ctx_of("1233"), VARIANT)
    with pytest.raises(InvariantError):
        pair_to_idempotent(IdempotentPair(S("{12}", 3), P("{12|3}", 3)))
    with pytest.raises(ValueError):
        make_pair(S("{1}", 3), P("{123}", 3), None, VARIANT)
    with pytest.raises(ValueError):
        make_pair(S("{1}", 3), P("{123}", 3), None, "other")


def test_1414_not_variant_idempotent():
    ctx = ctx_of("1233")
    pairs = {(str(p.A), str(p.pi)) for p in enumerate_idempotents(ctx, VARIANT)}
    # 1414 has image {14} and kernel {13|24}; {14}.theta = {13} is not a cross-section
    assert ("{24}", "{124|3}") in pairs and ("{14}", "{13|24}") not in pairs
    assert ("{14}", "{13|24}") in {(str(p.A), str(p.pi)) for p in enumerate_idempotents(n=4)}


def test_plain_count_n3():
    assert len(enumerate_idempotents(n=3)) == 10


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_plain_idempotents_match_engine(n):
    S_ = full_semigroup(n)
    assert {pair_to_idempotent(p) for p in enumerate_idempotents(n=n)} == set(engine.idempotents(S_))
    assert len(enumerate_idempotents(n=n)) == sum(1 for a in O.maps(n) if O.comp(a, a) == a)


@pytest.mark.parametrize("w", THETAS3 + ["1233", "1123", "2143", "1111"])
def test_variant_idempotents_match_engine(w):
    ctx = ctx_of(w)
    got = {pair_to_idempotent(p) for p in enumerate_idempotents(ctx, VARIANT)}
    assert got == set(engine.idempotents(reg_semigroup(ctx)))
    th = O.parse(w)
    assert {e.images for e in got} == {a for a in O.maps(len(w)) if O.vprod(a, a, th) == a}


@pytest.mark.parametrize("w", PERMS3)
def test_permutation_variant_pairs_relabel_plain(w):
    ctx = ctx_of(w)
    th = ctx.theta
    plain = {(p.A, p.pi) for p in enumerate_idempotents(n=3)}
    variant = {(p.A.image_under(th), p.pi) for p in enumerate_idempotents(ctx, VARIANT)}
    assert variant == plain


def test_pair_roundtrip_and_json():
    ctx = ctx_of("1233")
    for p in enumerate_idempotents(ctx, VARIANT):
        assert pair_of(pair_to_idempotent(p), ctx, VARIANT) == p
    js = make_pair(S("{24}", 4), P("{124|3}", 4), ctx, VARIANT).to_json()
    assert js == {"A": "{24}", "pi": "{124|3}", "word": "2242"}


def test_enumerate_guard_and_args():
    with pytest.raises(GuardError):
        enumerate_idempotents(n=7)
    with pytest.raises(ValueError):
        enumerate_idempotents()


# ---------------------------------------------------------------- omega, basic products

def test_omega_examples():
    p = make_pair(S("{1}", 4), P("{1234}", 4))
    q = make_pair(S("{13}", 4), P("{12|34}", 4))
    assert omega(p, q) == (True, True) and omega(q, p) == (False, False)
    with pytest.raises(ValueError):
        omega(p, make_pair(S("{1}", 4), P("{1234}", 4), ctx_of("1233"), VARIANT))


@pytest.mark.parametrize("w", ["123"] + THETAS3)
def test_omega_matches_products(w):
    ctx = ctx_of(w)
    mul = ctx.product
    pairs = enumerate_idempotents(ctx, VARIANT)
    for p, q in itertools.product(pairs, repeat=2):
        e, f = pair_to_idempotent(p), pair_to_idempotent(q)
        assert omega(p, q) == (mul(e, f) == e, mul(f, e) == e)


def test_omega_plain_matches_products():
    pairs = enumerate_idempotents(n=3)
    for p, q in itertools.product(pairs, repeat=2):
        e, f = pair_to_idempotent(p), pair_to_idempotent(q)
        assert omega(p, q) == (compose(e, f) == e, compose(f, e) == e)


def test_basic_product_trivial_cases():
    p = make_pair(S("{1}", 3), P("{123}", 3))
    q = make_pair(S("{12}", 3), P("{1|23}", 3))
    assert basic_product(p, q).pair == p and 1 in basic_product(p, q).cases
    assert basic_product(q, q).pair == q


@pytest.mark.parametrize("w", [None] + THETAS3)
def test_basic_products_agree_with_engine(w):
    ctx = None if w is None else ctx_of(w)
    flavor = PLAIN if w is None else VARIANT
    mul = compose if w is None else ctx.product
    defined = 0
    for p, q in itertools.product(enumerate_idempotents(ctx, flavor, n=3), repeat=2):
        bp = basic_product(p, q)
        comparable = any(omega(p, q)) or any(omega(q, p))
        assert (bp is not None) == comparable
        if bp is not None:
            defined += 1
            ef = mul(pair_to_idempotent(p), pair_to_idempotent(q))
            assert bp.word == ef and (bp.pair.A, bp.pair.pi) == (ef.image, ef.kernel)
            assert mul(ef, ef) == ef
    assert defined > 0


def test_basic_product_undefined():
    p = make_pair(S("{12}", 3), P("{1|23}", 3))
    q = make_pair(S("{13}", 3), P("{12|3}", 3))
    assert not any(omega(p, q)) and not any(omega(q, p))
    assert basic_product(p, q) is None


# ---------------------------------------------------------------- sandwich sets

def test_sandwich_plain_example():
    got = {(str(p.A), str(p.pi)) for p in sandwich_set(S("{12}", 3), P("{13|2}", 3))}
    assert ("{23}", "{13|2}") in got
    assert pair_to_idempotent(make_pair(S("{23}", 3), P("{13|2}", 3))) == T("323", 3)


def test_sandwich_variant_exclusion():
    ctx = ctx_of("122")
    got = {(str(p.A), str(p.pi)) for p in sandwich_set(S("{12}", 3), P("{13|2}", 3), ctx, VARIANT)}
    assert ("{23}", "{13|2}") not in got
    reason = sandwich_exclusion(S("{23}", 3), P("{13|2}", 3), S("{12}", 3), P("{13|2}", 3), ctx, VARIANT)
    assert reason.startswith("not an E_Γθ pair / (323) ∉ Reg")
    assert sandwich_exclusion(S("{23}", 3), P("{13|2}", 3), S("{12}", 3), P("{13|2}", 3)) is None


def test_sandwich_exclusion_reasons():
    assert "cross-section" in sandwich_exclusion(S("{12}", 3), P("{1|23}", 3), S("{12}", 3), P("{12|3}", 3))
    assert "{3} is not a cross-section" in sandwich_exclusion(
        S("{13}", 3), P("{12|3}", 3), S("{3}", 3), P("{12|3}", 3))


def test_sandwich_contains_self():
    for p in enumerate_idempotents(n=3):
        assert p in sandwich_set(p.A, p.pi)


def test_plain_sandwich_is_green_chain_n3():
    E = idems(None, PLAIN)
    members = 0
    for e, f in itertools.product(E, repeat=2):
        got = {pair_to_idempotent(p) for p in sandwich_set(e.image, f.kernel)}
        assert got == {h for h in E if chain(e, h, f, compose)}
        members += len(got)
    assert members == 124


def test_ehf_equals_ef_fails_frozen():
    # frozen counterexample count: ehf = ef is not a property of these sets
    E = idems(None, PLAIN)
    bad = total = 0
    for e, f in itertools.product(E, repeat=2):
        for p in sandwich_set(e.image, f.kernel):
            h = pair_to_idempotent(p)
            total += 1
            bad += compose(compose(e, h), f) != compose(e, f)
    assert (bad, total) == (24, 124)
    e, f, h = T("122", 3), T("113", 3), T("133", 3)
    assert make_pair(h.image, h.kernel) in sandwich_set(e.image, f.kernel)
    assert compose(compose(e, h), f) == T("133", 3) != compose(e, f) == T("111", 3)


@pytest.mark.parametrize("w", THETAS3)
def test_transported_sandwich_is_green_chain(w):
    ctx = ctx_of(w)
    E = idems(ctx, VARIANT)
    for e, f in itertools.product(E, repeat=2):
        got = {pair_to_idempotent(p) for p in sandwich_set(e.image, f.kernel, ctx, VARIANT, transport=True)}
        assert got == {h for h in E if chain(e, h, f, ctx.product)}


LITERAL_UNSOUND = {"132": 56, "213": 56, "321": 56, "231": 72, "312": 72}


@pytest.mark.parametrize("w", THETAS3)
def test_literal_variant_sandwich_frozen(w):
    # frozen: the untransported test admits non-chain members exactly for the
    # non-identity permutations
    ctx = ctx_of(w)
    E = idems(ctx, VARIANT)
    bad = 0
    for e, f in itertools.product(E, repeat=2):
        got = {pair_to_idempotent(p) for p in sandwich_set(e.image, f.kernel, ctx, VARIANT)}
        bad += sum(not chain(e, h, f, ctx.product) for h in got)
    assert bad == LITERAL_UNSOUND.get(w, 0)


@pytest.mark.parametrize("w", THETAS3)
def test_variant_candidates_inside_plain_candidates(w):
    ctx = ctx_of(w)
    for p in enumerate_idempotents(ctx, VARIANT):
        plain = set(sandwich_candidates(p.A, p.pi))
        assert set(sandwich_candidates(p.A, p.pi, ctx, VARIANT)) <= plain


def test_pairwise_inclusion_counterexample_frozen():
    # a variant member need not be a plain member: the flavors test different things
    ctx = ctx_of("122")
    A, pi = S("{12}", 3), P("{1|23}", 3)
    variant = {(q.A, q.pi) for q in sandwich_set(A, pi, ctx, VARIANT)}
    plain = {(q.A, q.pi) for q in sandwich_set(A, pi)}
    assert (S("{13}", 3), P("{13|2}", 3)) in variant - plain
