"""The twisted affine Weyl group, its fundamental alcove, and stabilizers.

The affine group is the semidirect product of translations by the orbit
coroot lattice with the orbit Weyl group; its fundamental alcove in the fixed
subspace parametrizes twisted conjugacy classes.  Point folding, stabilizer
root data from the extended-diagram deletion rule, and the Jacobian of the
conjugation map all live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import (
    Matrix,
    Vec,
    identity,
    mat_det,
    mat_mul,
    mat_vec,
    vadd,
    vscale,
    vsub,
    zero_vec,
)
from .folding import FoldingContext, fundamental_coweights
from .rootcore import (
    FiniteAbelianGroup,
    RootDatum,
    invariant_factors,
    root_datum_from_simple_roots,
)
from .twining import TorusPoint, weyl_denominator

FOLD_ITERATION_CAP = 100000


class AlcoveError(ValueError):
    pass


@dataclass(frozen=True)
class AffineElement:
    """x -> linear @ x + translation, with translation in the orbit coroot lattice."""

    linear: Matrix
    translation: Vec

    @classmethod
    def identity_element(cls, dim: int) -> "AffineElement":
        return cls(identity(dim), zero_vec(dim))

    def apply(self, v: Vec) -> Vec:
        return vadd(mat_vec(self.linear, v), self.translation)

    def compose(self, other: "AffineElement") -> "AffineElement":
        """self after other."""
        return AffineElement(
            mat_mul(self.linear, other.linear),
            vadd(mat_vec(self.linear, other.translation), self.translation),
        )

    @property
    def linear_det(self) -> int:
        return int(mat_det(self.linear))

    @property
    def is_identity(self) -> bool:
        return self.linear == identity(len(self.linear)) and all(
            e == 0 for e in self.translation
        )


@dataclass(frozen=True)
class AlcoveDescription:
    """0 <= <alpha, xi> for simple orbit roots, <theta, xi> <= 1."""

    simple_roots: tuple[Vec, ...]
    theta: Vec
    vertices: tuple[Vec, ...]
    _ctx: FoldingContext

    def contains(self, xi: Vec) -> bool:
        base = self._ctx.base
        return all(base.inner(a, xi) >= 0 for a in self.simple_roots) and base.inner(
            self.theta, xi
        ) <= 1

    def is_interior(self, xi: Vec) -> bool:
        base = self._ctx.base
        return all(base.inner(a, xi) > 0 for a in self.simple_roots) and base.inner(
            self.theta, xi
        ) < 1


def fundamental_alcove(ctx: FoldingContext) -> AlcoveDescription:
    """Vertices are 0 and the rescaled fundamental coweights of the orbit system."""
    orbit = ctx.orbit.datum
    theta = ctx.orbit.highest_root
    vertices = [zero_vec(ctx.base.ambient_dim)]
    for cw in fundamental_coweights(orbit):
        c = ctx.base.inner(theta, cw)
        if c <= 0:
            raise AlcoveError("highest root pairs non-positively with a coweight")
        vertices.append(vscale(1 / c, cw))
    alc = AlcoveDescription(orbit.simple_roots, theta, tuple(vertices), ctx)
    for v in alc.vertices:
        if not alc.contains(v):
            raise AlcoveError("computed vertex violates the alcove constraints")
    return alc


def _check_fixed(ctx: FoldingContext, xi: Vec) -> None:
    if ctx.apply_kappa(xi) != xi:
        raise AlcoveError("point does not lie in the fixed subspace")


def fold_to_alcove(ctx: FoldingContext, xi: Vec) -> tuple[Vec, AffineElement]:
    """Affine-Weyl representative in the closed alcove, with the group element.

    Alternates the dominant-chamber phase (simple orbit reflections) with the
    affine reflection in the ceiling wall until all constraints hold.
    """
    _check_fixed(ctx, xi)
    base = ctx.base
    orbit = ctx.orbit.datum
    theta = ctx.orbit.highest_root
    theta_cov = base.coroot(theta)
    dim = base.ambient_dim
    g = AffineElement.identity_element(dim)
    cur = xi
    for _ in range(FOLD_ITERATION_CAP):
        moved = False
        for i, alpha in enumerate(orbit.simple_roots):
            if base.inner(alpha, cur) < 0:
                cur = base.reflect(cur, alpha)
                g = AffineElement(
                    orbit.simple_reflection_matrix(i), zero_vec(dim)
                ).compose(g)
                moved = True
                break
        if moved:
            continue
        height = base.inner(theta, cur)
        if height > 1:
            # reflection in the affine wall <theta, xi> = 1
            cur = vsub(cur, vscale(height - 1, theta_cov))
            lin = _reflection_matrix(base, theta)
            g = AffineElement(lin, theta_cov).compose(g)
            continue
        if g.apply(xi) != cur:
            raise AlcoveError("affine bookkeeping drifted from the folded point")
        return cur, g
    raise AlcoveError("alcove folding did not terminate within the iteration cap")


def _reflection_matrix(datum: RootDatum, alpha: Vec) -> Matrix:
    dim = datum.ambient_dim
    cols = [
        datum.reflect(tuple(Fraction(int(i == j)) for i in range(dim)), alpha)
        for j in range(dim)
    ]
    return tuple(tuple(cols[j][r] for j in range(dim)) for r in range(dim))


@dataclass(frozen=True)
class StabilizerDatum:
    """Root data of the stabilizer of exp(xi) under the twisted action.

    ``subsystem`` collects the surviving extended-diagram nodes inside the
    orbit system; ``dual_subsystem`` carries their coroot directions, which
    are the actual infinitesimal roots of the stabilizer on the fixed torus.
    """

    surviving: tuple[Vec, ...]
    includes_affine_node: bool
    subsystem: RootDatum | None
    subsystem_label: str
    dual_subsystem: RootDatum | None
    dual_label: str
    pi1: FiniteAbelianGroup
    pi1_free_rank: int


def stabilizer_datum(ctx: FoldingContext, xi: Vec) -> StabilizerDatum:
    """Extended-diagram deletion rule at a point of the closed alcove."""
    alc = fundamental_alcove(ctx)
    if not alc.contains(xi):
        raise AlcoveError("point lies outside the fundamental alcove")
    base = ctx.base
    surviving = [a for a in alc.simple_roots if base.inner(a, xi) == 0]
    includes_affine = base.inner(alc.theta, xi) == 1
    if includes_affine:
        surviving.append(tuple(-e for e in alc.theta))

    fixed_integral = ctx.lattices["fixed_integral"]
    if not surviving:
        return StabilizerDatum(
            surviving=(),
            includes_affine_node=False,
            subsystem=None,
            subsystem_label="0",
            dual_subsystem=None,
            dual_label="maximal torus",
            pi1=FiniteAbelianGroup(()),
            pi1_free_rank=fixed_integral.rank,
        )

    sub = root_datum_from_simple_roots(tuple(surviving), base.ambient_gram)
    duals = tuple(base.coroot(a) for a in surviving)
    if ctx.is_trivial:
        # untwisted case: the stabilizer's roots are the surviving roots
        # themselves, so the "dual" realization coincides with the subsystem
        stab_simple = tuple(surviving)
    else:
        stab_simple = duals
    dual_sub = root_datum_from_simple_roots(stab_simple, base.ambient_gram)

    # coroot lattice of the stabilizer system, inside Lambda^kappa
    coroots = tuple(dual_sub.coroot(a) for a in dual_sub.simple_roots)
    rows = []
    for c in coroots:
        coords = fixed_integral.coords_of(c)
        if coords is None or any(e.denominator != 1 for e in coords):
            raise AlcoveError("stabilizer coroot lattice escapes the integral lattice")
        rows.append([int(e) for e in coords])
    torsion = tuple(d for d in invariant_factors(rows) if d != 1)
    return StabilizerDatum(
        surviving=tuple(surviving),
        includes_affine_node=includes_affine,
        subsystem=sub,
        subsystem_label=sub.type_label,
        dual_subsystem=dual_sub,
        dual_label=dual_sub.type_label,
        pi1=FiniteAbelianGroup(torsion),
        pi1_free_rank=fixed_integral.rank - len(rows),
    )


def det_diff_conj(ctx: FoldingContext, xi: Vec) -> float:
    """Jacobian of the twisted conjugation map at exp(xi).

    |T^kappa cap T_kappa| times |Delta(exp xi)|^2; vanishes exactly on the
    affine walls.
    """
    _check_fixed(ctx, xi)
    value = weyl_denominator(ctx).eval(ctx, TorusPoint(xi))
    return ctx.fixed_intersection.order * abs(value) ** 2
