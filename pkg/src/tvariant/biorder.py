"""Idempotents as (image, kernel) pairs, the two preorders, basic products
and sandwich sets, for T_n ("plain") and for Reg(T_n^theta) ("variant").

A plain pair (A, pi) needs A to be a cross-section of pi.  A variant pair
needs A separated by kernel(theta) and A.theta a cross-section of pi.  The
plain flavor is the variant one with theta the identity, and the code
treats it that way.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import GuardError, InvariantError
from .transform import (SetPartition, Subset, Transformation, all_partitions, all_subsets, compose, identity,
                        is_cross_section, saturates, separates)
from .variant import VariantContext

__all__ = [
    "IdempotentPair", "PLAIN", "VARIANT", "make_pair", "pair_to_idempotent", "pair_of",
    "enumerate_idempotents", "omega", "basic_product", "BasicProduct",
    "sandwich_candidates", "sandwich_set", "sandwich_exclusion",
]

PLAIN = "plain"
VARIANT = "variant"


@dataclass(frozen=True)
class IdempotentPair:
    A: Subset
    pi: SetPartition
    theta: Transformation | None = None      # None for the plain flavor

    @property
    def flavor(self) -> str:
        return PLAIN if self.theta is None else VARIANT

    def _theta(self) -> Transformation:
        return identity(self.A.n) if self.theta is None else self.theta

    def valid(self) -> bool:
        th = self._theta()
        return (len(self.A) > 0 and separates(th.kernel, self.A)
                and is_cross_section(self.A.image_under(th), self.pi))

    def to_json(self) -> dict:
        return {"A": str(self.A), "pi": str(self.pi), "word": str(pair_to_idempotent(self))}

    def __str__(self) -> str:
        return f"({self.A},{self.pi})"


def _theta_of(ctx: VariantContext | None, flavor: str) -> Transformation | None:
    if flavor == PLAIN:
        return None
    if flavor != VARIANT:
        raise ValueError(f"unknown flavor {flavor!r}")
    if ctx is None:
        raise ValueError("the variant flavor needs a context")
    return ctx.theta


def make_pair(A: Subset, pi: SetPartition, ctx: VariantContext | None = None,
              flavor: str = PLAIN) -> IdempotentPair:
    p = IdempotentPair(A, pi, _theta_of(ctx, flavor))
    if not p.valid():
        raise InvariantError(f"{p} is not a {flavor} idempotent pair")
    return p


def _mul(p: IdempotentPair):
    th = p.theta
    if th is None:
        return compose
    return lambda a, b: compose(compose(a, th), b)


def pair_to_idempotent(p: IdempotentPair) -> Transformation:
    """The map with kernel pi and image A sending each block B to the x in A
    with x.theta in B; idempotent under the flavor's product."""
    if not p.valid():
        raise InvariantError(f"{p} is not a {p.flavor} idempotent pair")
    th = p._theta()
    rep = {p.pi.block_index(th(x)): x for x in p.A}
    e = Transformation(tuple(rep[p.pi.block_index(x)] for x in range(1, p.A.n + 1)))
    if _mul(p)(e, e) != e:
        raise InvariantError(f"{e} from {p} is not idempotent")
    return e


def pair_of(e: Transformation, ctx: VariantContext | None = None, flavor: str = PLAIN) -> IdempotentPair:
    return make_pair(e.image, e.kernel, ctx, flavor)


def enumerate_idempotents(ctx: VariantContext | None = None, flavor: str = PLAIN, n: int | None = None,
                          max_n: int = 6) -> list[IdempotentPair]:
    theta = _theta_of(ctx, flavor)
    n = ctx.n if ctx is not None else n
    if n is None:
        raise ValueError("give n for the plain flavor without a context")
    if n > max_n:
        raise GuardError("enumerate_idempotents", n, max_n)
    th = identity(n) if theta is None else theta
    subsets = [A for A in all_subsets(n) if separates(th.kernel, A)]
    parts = [p for p in all_partitions(n) if saturates(th.image, p)]
    return [IdempotentPair(A, pi, theta) for A in subsets for pi in parts
            if is_cross_section(A.image_under(th), pi)]


def _same_flavor(p: IdempotentPair, q: IdempotentPair):
    if p.theta != q.theta:
        raise ValueError("pairs of different flavors")


def omega(p: IdempotentPair, q: IdempotentPair) -> tuple[bool, bool]:
    """(omega_l, omega_r).  omega_l: A inside A'.  omega_r: maps constant on pi
    form a subset of maps constant on pi', i.e. pi' refines pi."""
    _same_flavor(p, q)
    return p.A <= q.A, q.pi.refines(p.pi)


@dataclass(frozen=True)
class BasicProduct:
    pair: IdempotentPair
    cases: tuple          # which of the four comparability cases applied
    word: Transformation  # product of the associated idempotents


def _case_two(p: IdempotentPair, q: IdempotentPair, e: Transformation) -> SetPartition:
    # classes of e.theta.e' when A' lies in A: e^-1(theta^-1(B) n A) over blocks B of pi'
    th = p._theta()
    groups: dict[int, list[int]] = {}
    for x in range(1, e.n + 1):
        groups.setdefault(q.pi.block_index(th(e(x))), []).append(x)
    return SetPartition.from_blocks(e.n, groups.values())


def basic_product(p: IdempotentPair, q: IdempotentPair) -> BasicProduct | None:
    """The basic product, or None when p and q are not comparable.

    Each applicable case formula is evaluated and compared with the product
    of the associated idempotents; a disagreement raises InvariantError."""
    _same_flavor(p, q)
    th = p._theta()
    e, f = pair_to_idempotent(p), pair_to_idempotent(q)
    results = []
    if p.A <= q.A:
        results.append((1, (p.A, p.pi)))
    if q.A <= p.A:
        results.append((2, (q.A, _case_two(p, q, e))))
    if p.pi.refines(q.pi):
        results.append((3, (q.A, q.pi)))
    if q.pi.refines(p.pi):
        results.append((4, (p.A.image_under(th).image_under(f), p.pi)))
    if not results:
        return None
    ef = _mul(p)(e, f)
    want = (ef.image, ef.kernel)
    for case, got in results:
        if got != want:
            raise InvariantError(f"case {case} gives {got}, product gives {want} for {p}.{q}")
    pair = IdempotentPair(want[0], want[1], p.theta)
    if not pair.valid():
        raise InvariantError(f"basic product {pair} is not an idempotent pair")
    return BasicProduct(pair, tuple(c for c, _ in results), ef)


def sandwich_candidates(A: Subset, pi: SetPartition, ctx: VariantContext | None = None,
                        flavor: str = PLAIN, transport: bool = False) -> list[tuple[Subset, SetPartition]]:
    """Object pairs (Y, sigma) with Y a cross-section of pi and A a
    cross-section of sigma, drawn from the flavor's categories.

    ``transport`` applies theta first on both tests (Y.theta against pi,
    A.theta against sigma)."""
    theta = _theta_of(ctx, flavor)
    n = A.n
    th = identity(n) if theta is None else theta
    subsets = [Y for Y in all_subsets(n) if separates(th.kernel, Y)]
    parts = [s for s in all_partitions(n) if saturates(th.image, s)]
    t = th if transport else identity(n)
    At = A.image_under(t)
    return [(Y, s) for Y in subsets if is_cross_section(Y.image_under(t), pi)
            for s in parts if is_cross_section(At, s)]


def sandwich_set(A: Subset, pi: SetPartition, ctx: VariantContext | None = None, flavor: str = PLAIN,
                 transport: bool = False) -> list[IdempotentPair]:
    """Sandwich set of any (A, pi'), (A', pi): the candidates that are
    idempotent pairs of the flavor."""
    theta = _theta_of(ctx, flavor)
    out = []
    for Y, s in sandwich_candidates(A, pi, ctx, flavor, transport):
        p = IdempotentPair(Y, s, theta)
        if p.valid():
            out.append(p)
    return out


def _flavor_reason(Y: Subset, sigma: SetPartition, theta: Transformation | None, why: str) -> str:
    head = "not an E_Γθ pair"
    if is_cross_section(Y, sigma):
        # name the plain idempotent with this image and kernel, and its regularity
        e = pair_to_idempotent(IdempotentPair(Y, sigma))
        if theta is not None and not (separates(theta.kernel, e.image) and saturates(theta.image, e.kernel)):
            head += f" / ({e}) ∉ Reg"
    return f"{head}: {why}"


def sandwich_exclusion(Y: Subset, sigma: SetPartition, A: Subset, pi: SetPartition,
                       ctx: VariantContext | None = None, flavor: str = PLAIN) -> str | None:
    """Why (Y, sigma) is not in the sandwich set of (A, pi); None if it is."""
    theta = _theta_of(ctx, flavor)
    th = identity(A.n) if theta is None else theta
    if not separates(th.kernel, Y):
        return _flavor_reason(Y, sigma, theta, f"{Y} is not separated by {th.kernel}")
    if not saturates(th.image, sigma):
        return _flavor_reason(Y, sigma, theta, f"{sigma} is not saturated by {th.image}")
    if not is_cross_section(Y, pi):
        return f"{Y} is not a cross-section of {pi}"
    if not is_cross_section(A, sigma):
        return f"{A} is not a cross-section of {sigma}"
    if not IdempotentPair(Y, sigma, theta).valid():
        return _flavor_reason(Y, sigma, theta, f"{Y.image_under(th)} is not a cross-section of {sigma}")
    return None
