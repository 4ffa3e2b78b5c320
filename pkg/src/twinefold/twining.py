"""Twining characters, the twisted Weyl denominator, and exact orthogonality.

A twining character is represented by the character polynomial of the orbit
system's irreducible with the same highest weight, supported on the kappa-fixed
weight lattice of the base.  Evaluation at torus points is numeric; all
structural identities (orthogonality, decomposition) are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import cos, fsum, pi, sin

from .linalg import Vec, vadd, vneg
from .folding import FoldingContext
from .rootcore import (
    FourierPolynomial,
    RootSystemError,
    irreducible_character,
    weyl_traverse,
)

EVAL_TOL = 1e-9


class SingularPointError(ValueError):
    """Raised when a quotient-formula evaluation hits a denominator zero."""


@dataclass(frozen=True)
class TorusPoint:
    """exp(xi) for an exact rational xi in the fixed subspace."""

    xi: Vec


@dataclass(frozen=True)
class Denominator:
    poly: FourierPolynomial

    def eval(self, ctx: FoldingContext, point: TorusPoint) -> complex:
        return self.poly.evaluate(ctx.base.ambient_gram, point.xi)


@dataclass(frozen=True)
class TwiningCharacter:
    highest_weight: Vec
    poly: FourierPolynomial

    def eval(self, ctx: FoldingContext, point: TorusPoint) -> complex:
        return self.poly.evaluate(ctx.base.ambient_gram, point.xi)

    @property
    def dimension_at_identity(self) -> int:
        return self.poly.total_mass


def weyl_denominator(ctx: FoldingContext) -> Denominator:
    """prod over positive orbit roots of (1 - e^{-alpha})."""
    dim = ctx.base.ambient_dim
    poly = FourierPolynomial.constant(dim)
    for alpha in ctx.orbit.datum.positive_roots:
        factor = FourierPolynomial.constant(dim) - FourierPolynomial({vneg(alpha): 1})
        poly = poly * factor
    return Denominator(poly)


def _require_admissible(ctx: FoldingContext, lam: Vec) -> None:
    if ctx.apply_kappa(lam) != lam:
        raise RootSystemError("highest weight is not kappa-fixed")
    if not ctx.base.is_dominant_integral(lam):
        raise RootSystemError("highest weight is not dominant integral for the base")


def twining_character(ctx: FoldingContext, lam: Vec) -> TwiningCharacter:
    _require_admissible(ctx, lam)
    return TwiningCharacter(lam, irreducible_character(ctx.orbit.datum, lam))


def is_regular(ctx: FoldingContext, point: TorusPoint) -> bool:
    """Exact test: no positive orbit root pairs integrally with xi."""
    return all(
        ctx.base.inner(alpha, point.xi).denominator != 1
        for alpha in ctx.orbit.datum.positive_roots
    )


def _phase_angle(phase: Fraction) -> float:
    # reduce mod 1 exactly so large phases cost no precision
    return 2 * pi * float(phase - (phase.numerator // phase.denominator))


def _alternating_sum(ctx: FoldingContext, shifted: Vec, xi: Vec) -> complex:
    cache = getattr(ctx, "_alt_sum_cache", None)
    if cache is None:
        cache = {}
        ctx._alt_sum_cache = cache
    orbit = cache.get(shifted)
    if orbit is None:
        # store G.w(shifted) per Weyl element so each point costs one dot product
        from .linalg import mat_vec

        gram = ctx.base.ambient_gram
        orbit = [
            (w.det, mat_vec(gram, w.apply(shifted)))
            for w in weyl_traverse(ctx.orbit.datum)
        ]
        cache[shifted] = orbit
    res, ims = [], []
    for det, gmu in orbit:
        angle = _phase_angle(sum(a * b for a, b in zip(gmu, xi)))
        res.append(det * cos(angle))
        ims.append(det * sin(angle))
    return complex(fsum(res), fsum(ims))


def jantzen_eval(ctx: FoldingContext, lam: Vec, point: TorusPoint) -> complex:
    """Quotient-formula value of the twining character at a regular point."""
    _require_admissible(ctx, lam)
    if not is_regular(ctx, point):
        raise SingularPointError(
            "point pairs integrally with an orbit root; use the polynomial instead"
        )
    rho = ctx.orbit.half_sum
    num = _alternating_sum(ctx, vadd(lam, rho), point.xi)
    den = _alternating_sum(ctx, rho, point.xi)
    return num / den


def adjoint_oracle(ctx: FoldingContext, point: TorusPoint) -> complex:
    """Trace of kappa composed with the adjoint action of exp(xi).

    Computed directly from the root-space decomposition: only the Cartan part
    and the kappa-fixed root spaces contribute, with signs given by the action
    of kappa on the Chevalley generators ((-1)^{ht+1} for the even A cases,
    +1 otherwise).  Independent of the orbit-system construction.
    """
    a_even = getattr(ctx, "_is_a_even", False)
    fixed_nodes = sum(1 for i, j in enumerate(ctx.kappa.permutation) if i == j)
    total: complex = complex(fixed_nodes)
    for alpha in ctx.kappa_fixed_roots():
        if a_even:
            height = sum(ctx.base.coords_of(alpha))
            sign = (-1) ** (int(height) + 1)
        else:
            sign = 1
        angle = _phase_angle(ctx.base.inner(alpha, point.xi))
        total += sign * complex(cos(angle), sin(angle))
    eps = -1 if a_even else 1
    return eps * total


def inner_product(
    ctx: FoldingContext, f: FourierPolynomial, g: FourierPolynomial
) -> Fraction:
    """Exact L2 inner product of class functions restricted to the fixed torus.

    (1/|W^kappa|) times the constant term of conj(f) * g * |Delta|^2, with
    conj negating all weights.
    """
    lattice = ctx.lattices["PO"]
    for poly in (f, g):
        for mu in poly.terms:
            if not lattice.contains(mu):
                raise RootSystemError(
                    "polynomial support lies outside the fixed weight lattice"
                )
    delta = weyl_denominator(ctx).poly
    product = f.conj() * g * delta * delta.conj()
    ct = product.constant_term(ctx.base.ambient_dim)
    return Fraction(ct, ctx.orbit_weyl_order)
