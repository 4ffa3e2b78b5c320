import math
import random
from fractions import Fraction

import pytest

from twinefold.linalg import vadd, vneg, vscale, zero_vec, mat_vec
from twinefold.rootcore import build_root_datum, weyl_traverse
from twinefold.folding import automorphism_by_name, fold, fundamental_coweights
from twinefold.alcove import (
    AffineElement,
    AlcoveError,
    det_diff_conj,
    fold_to_alcove,
    fundamental_alcove,
    stabilizer_datum,
)


def ctx_for(label, name="flip"):
    d = build_root_datum(label)
    return fold(d, automorphism_by_name(d, name))


def test_a2_alcove_segment():
    ctx = ctx_for("A2")
    alc = fundamental_alcove(ctx)
    theta = ctx.base.highest_root
    assert alc.vertices == (zero_vec(2), vscale(Fraction(1, 4), theta))
    length = math.sqrt(float(ctx.base.norm_sq(alc.vertices[1])))
    assert abs(length - math.sqrt(2) / 4) < 1e-12


def test_trivial_a1_alcove():
    d = build_root_datum("A1")
    ctx = fold(d, automorphism_by_name(d, "id"))
    alc = fundamental_alcove(ctx)
    endpoint = alc.vertices[1]
    assert endpoint == vscale(Fraction(1, 2), d.coroot(d.simple_roots[0]))
    assert ctx.base.inner(d.highest_root, endpoint) == 1


def test_e6_alcove_simplex():
    ctx = ctx_for("E6")
    alc = fundamental_alcove(ctx)
    assert len(alc.vertices) == 5  # 0 plus one per F4 node
    for v in alc.vertices:
        assert ctx.base.inner(alc.theta, v) <= 1
        assert alc.contains(v)


def test_fold_fixed_point():
    ctx = ctx_for("A2")
    alc = fundamental_alcove(ctx)
    xi = vscale(Fraction(1, 8), ctx.base.highest_root)
    assert alc.contains(xi)
    folded, g = fold_to_alcove(ctx, xi)
    assert folded == xi
    assert g.is_identity


def test_fold_negative_endpoint():
    ctx = ctx_for("A2")
    v = vscale(Fraction(1, 4), ctx.base.highest_root)
    folded, g = fold_to_alcove(ctx, vneg(v))
    assert folded == v
    assert g.linear_det == -1
    assert g.apply(vneg(v)) == v


def test_fold_lattice_periodicity():
    ctx = ctx_for("A3")
    alc = fundamental_alcove(ctx)
    interior = alc.vertices[1]
    xi = vscale(Fraction(1, 3), interior)
    lam = ctx.orbit.coroot_lattice.basis[0]
    folded, g = fold_to_alcove(ctx, vadd(xi, lam))
    assert folded == xi
    assert g.translation == vneg(lam)


def test_fold_is_retraction_random():
    for label, name in [("A2", "flip"), ("A3", "flip"), ("A4", "flip"),
                        ("D4", "rot"), ("E6", "flip")]:
        ctx = ctx_for(label, name)
        alc = fundamental_alcove(ctx)
        rng = random.Random(42)
        cws = fundamental_coweights(ctx.orbit.datum)
        for _ in range(10):
            xi = zero_vec(ctx.base.ambient_dim)
            for cw in cws:
                c = Fraction(rng.randint(-50, 50), rng.randint(1, 19))
                xi = vadd(xi, vscale(c, cw))
            folded, g = fold_to_alcove(ctx, xi)
            assert alc.contains(folded)
            assert g.apply(xi) == folded
            assert ctx.orbit.coroot_lattice.contains(g.translation)
            again, h = fold_to_alcove(ctx, folded)
            assert again == folded and h.is_identity


def test_fundamental_domain_property_a2():
    """No affine element of moderate size maps one alcove point to another."""
    ctx = ctx_for("A2")
    theta = ctx.base.highest_root
    points = [vscale(Fraction(k, 32), theta) for k in (1, 3, 5, 7)]
    refl = ctx.orbit.datum.simple_reflection_matrix(0)
    ident = AffineElement.identity_element(2)
    gen = ctx.orbit.coroot_lattice.basis[0]
    elements = []
    for k in range(-4, 5):
        shift = vscale(k, gen)
        elements.append(AffineElement(ident.linear, shift))
        elements.append(AffineElement(refl, shift))
    for i, p in enumerate(points):
        for q in points[i + 1:]:
            for g in elements:
                assert g.apply(p) != q


def test_stabilizer_at_origin_full_system():
    ctx = ctx_for("A3")
    stab = stabilizer_datum(ctx, zero_vec(3))
    assert len(stab.surviving) == ctx.orbit.datum.rank
    assert not stab.includes_affine_node
    assert stab.subsystem_label == ctx.orbit.datum.type_label


def test_stabilizer_a4_origin():
    ctx = ctx_for("A4")
    stab = stabilizer_datum(ctx, zero_vec(4))
    assert stab.dual_label == "B2"
    assert stab.pi1.invariant_factors == (2,)
    assert stab.pi1_free_rank == 0


def test_stabilizer_e6_origin():
    ctx = ctx_for("E6")
    stab = stabilizer_datum(ctx, zero_vec(6))
    assert stab.dual_label == "F4"
    assert stab.pi1.is_trivial
    assert stab.pi1_free_rank == 0


def test_stabilizer_interior():
    ctx = ctx_for("A2")
    stab = stabilizer_datum(ctx, vscale(Fraction(1, 8), ctx.base.highest_root))
    assert stab.surviving == ()
    assert stab.dual_label == "maximal torus"
    assert stab.pi1.is_trivial
    assert stab.pi1_free_rank == 1


def test_stabilizer_a2_far_endpoint():
    ctx = ctx_for("A2")
    stab = stabilizer_datum(ctx, vscale(Fraction(1, 4), ctx.base.highest_root))
    assert stab.includes_affine_node
    assert stab.subsystem_label == "A1"
    assert stab.pi1.invariant_factors == (2,)


def test_stabilizer_outside_alcove():
    ctx = ctx_for("A2")
    with pytest.raises(AlcoveError):
        stabilizer_datum(ctx, vscale(2, ctx.base.highest_root))


def test_det_diff_conj_values():
    ctx = ctx_for("A2")
    assert det_diff_conj(ctx, zero_vec(2)) == 0
    mid = vscale(Fraction(1, 8), ctx.base.highest_root)
    assert abs(det_diff_conj(ctx, mid) - 8) < 1e-9
    assert det_diff_conj(ctx, vscale(Fraction(1, 16), ctx.base.highest_root)) > 0


def test_det_diff_conj_wall_zero():
    ctx = ctx_for("A3")
    alc = fundamental_alcove(ctx)
    # a vertex lies on affine walls, so the Jacobian vanishes there
    assert det_diff_conj(ctx, alc.vertices[1]) < 1e-9
