"""Family constructions: formulas, symmetries, equivalences, serialization."""

import numpy as np
import pytest

from minvar.charts import SphereChart, matrix_tuple
from minvar.errors import (
    BranchLocusError,
    DimensionMismatch,
    SpecError,
)
from minvar.families import (
    BDJ,
    ChoeHoppe,
    CliffordCone,
    CliffordTorus,
    Cylinder,
    GenHelicoidA,
    GenHelicoidB,
    HarveyLawsonCone,
    LatitudeCircle,
    LawsonSurface,
    LRaysCliffordCone,
    LRaysCone,
    PitchVector,
    SphericalJoin,
    SphericalSlice,
    build_immersion,
    choe_hoppe_graph_function,
    choe_hoppe_graph_residual,
    is_negative_control,
    lands_on_unit_sphere,
    scaling_indices,
    screw_action,
    screw_data,
    spec_dimensions,
    spec_from_json,
    spec_to_json,
    standard_block,
    standard_chart,
)
from minvar.geometry import mean_curvature, sphere_minimality_residual


def assert_close(actual, expected, tol):
    np.testing.assert_allclose(actual, expected, rtol=tol, atol=tol)


def sample_box(imm, count, seed, keep=True):
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in imm.domain])
    hi = np.array([b[1] for b in imm.domain])
    pts = lo + (hi - lo) * rng.random((count, imm.param_dim))
    if keep and imm.exclusions:
        pts = pts[~imm.excluded(pts)]
    return pts


def helicoid_a(L, N, pitch=None, kind="stereographic"):
    pitch = pitch or PitchVector(lambda0=0.7,
                                 lambdas=tuple(1.0 + 0.3 * t
                                               for t in range(L)))
    return GenHelicoidA(pitch=pitch,
                        blocks=tuple(standard_block(N, kind)
                                     for _ in range(L)))


SPEC_DIMENSION_TABLE = [
    (CliffordTorus(block=standard_block(2)), 4, 6),
    (CliffordCone(block=standard_block(1)), 3, 4),
    (LRaysCone(rays=3, base=SphereChart(dim=2)), 5, 9),
    (LRaysCliffordCone(rays=2, block=standard_block(1)), 4, 8),
    (SphericalJoin(xs=SphereChart(dim=1), base=LatitudeCircle(height=0.0)), 2, 6),
    (helicoid_a(2, 1), 7, 9),
    (helicoid_a(3, 0), 4, 7),
    (GenHelicoidB(rays=2, block=standard_block(1), angular_pitch=1.0,
                  axial_pitch=0.5), 5, 9),
    (ChoeHoppe(sphere_dim=2, pitch=1.0), 4, 5),
    (BDJ(pitch=PitchVector(lambda0=1.0, lambdas=(1.0, 2.0))), 3, 5),
    (LawsonSurface(lambda1=1.0, lambda2=2.0), 2, 4),
    (HarveyLawsonCone(sphere_dim=1), 4, 8),
    (SphericalSlice(inner=helicoid_a(2, 1, PitchVector(0.0, (1.0, 2.0)))), 6, 8),
    (LatitudeCircle(height=0.3), 1, 3),
    (Cylinder(radius=1.0), 2, 3),
]


@pytest.mark.parametrize("spec,n,K", SPEC_DIMENSION_TABLE)
def test_declared_dimensions_match_built(spec, n, K):
    assert spec_dimensions(spec) == (n, K)
    imm = build_immersion(spec)
    assert (imm.param_dim, imm.ambient_dim) == (n, K)
    assert len(imm.domain) == n
    assert imm.metadata["spec"] == spec


def test_helicoid_a_frozen_point():
    # one point-chart block: C = (1,1)/sqrt2, J C = (-1,1)/sqrt2
    spec = helicoid_a(1, 0, PitchVector(lambda0=1.0, lambdas=(1.0,)))
    imm = build_immersion(spec)
    s2 = np.sqrt(2.0)
    assert_close(imm.position(np.array([0.0, 1.0])), [1 / s2, 1 / s2, 0.0],
                 1e-15)
    th = 0.8
    expected = [np.cos(th + np.pi / 4), np.sin(th + np.pi / 4), th]
    assert_close(imm.position(np.array([th, 1.0])), expected, 1e-15)


def test_bdj_frozen_point():
    spec = BDJ(pitch=PitchVector(lambda0=0.5, lambdas=(1.0, 2.0)))
    imm = build_immersion(spec)
    got = imm.position(np.array([0.7, 1.0, 1.3]))
    expected = [np.cos(0.7), np.sin(0.7), 1.3 * np.cos(1.4),
                1.3 * np.sin(1.4), 0.35]
    assert_close(got, expected, 1e-15)


def test_choe_hoppe_reduces_to_classical_helicoid():
    imm = build_immersion(ChoeHoppe(sphere_dim=1, pitch=1.0))
    s2 = np.sqrt(2.0)
    assert_close(imm.position(np.array([0.0, 1 / s2])), [1 / s2, 1 / s2, 0.0],
                 1e-15)
    pts = sample_box(imm, 50, seed=1)
    got = imm.position(pts)
    th, s = pts[:, 0], pts[:, 1]
    classical = np.stack([s2 * s * np.cos(th + np.pi / 4),
                          s2 * s * np.sin(th + np.pi / 4), th], axis=-1)
    assert_close(got, classical, 1e-14)


def test_lawson_frozen_point():
    imm = build_immersion(LawsonSurface(lambda1=1.0, lambda2=2.0))
    t, th = 0.4, 0.9
    got = imm.position(np.array([t, th]))
    expected = [np.cos(t) * np.cos(th), np.cos(t) * np.sin(th),
                np.sin(t) * np.cos(2 * th), np.sin(t) * np.sin(2 * th)]
    assert_close(got, expected, 1e-15)


def test_harvey_lawson_matches_rays_cone_layout():
    hl = build_immersion(HarveyLawsonCone(sphere_dim=1))
    rays = build_immersion(LRaysCliffordCone(rays=2, block=standard_block(1)))
    pts = sample_box(hl, 40, seed=2)
    scaled = pts.copy()
    scaled[:, 2:] *= np.sqrt(2.0)  # rays radii absorb the 1/sqrt2 of C
    assert_close(hl.position(pts), rays.position(scaled), 1e-14)


@pytest.mark.parametrize("spec", [
    CliffordTorus(block=standard_block(1)),
    CliffordTorus(block=standard_block(2, kind="trigonometric")),
    LawsonSurface(lambda1=1.0, lambda2=2.0),
    SphericalJoin(xs=SphereChart(dim=1), base=LatitudeCircle(height=0.0)),
    SphericalSlice(inner=helicoid_a(2, 1, PitchVector(0.0, (1.0, 2.0)))),
    LatitudeCircle(height=0.4),
])
def test_sphere_containment(spec):
    assert lands_on_unit_sphere(spec)
    imm = build_immersion(spec)
    pts = sample_box(imm, 200, seed=3)
    norms = np.linalg.norm(imm.position(pts), axis=-1)
    assert_close(norms, np.ones_like(norms), 1e-12)


@pytest.mark.parametrize("spec", [
    helicoid_a(1, 1),
    helicoid_a(2, 0),
    helicoid_a(2, 2, PitchVector(0.0, (1.0, -0.5))),
    GenHelicoidB(rays=2, block=standard_block(1), angular_pitch=0.8,
                 axial_pitch=0.3),
    ChoeHoppe(sphere_dim=2, pitch=0.6),
    BDJ(pitch=PitchVector(lambda0=1.0, lambdas=(1.0, 2.0, 3.0))),
    LawsonSurface(lambda1=1.0, lambda2=2.0),
    SphericalSlice(inner=helicoid_a(2, 1, PitchVector(0.0, (1.0, 2.0)))),
])
def test_screw_invariance(spec):
    imm = build_immersion(spec)
    data = screw_data(spec)
    assert data is not None
    rng = np.random.default_rng(4)
    pts = sample_box(imm, 100, seed=5, keep=False)
    ts = rng.uniform(-2.0, 2.0, size=100)
    shifted = pts.copy()
    shifted[:, data.theta_index] += ts
    lhs = imm.position(shifted)
    rhs = np.stack([
        screw_action(data.pitch, float(ts[i]), imm.position(pts[i]),
                     block_dims=data.block_dims,
                     axial_coordinate=data.axial_coordinate)
        for i in range(len(ts))])
    assert float(np.max(np.abs(lhs - rhs))) <= 1e-12


@pytest.mark.parametrize("spec", [
    CliffordCone(block=standard_block(1)),
    LRaysCone(rays=2, base=SphereChart(dim=2)),
    LRaysCliffordCone(rays=3, block=standard_block(1)),
    HarveyLawsonCone(sphere_dim=2),
    helicoid_a(2, 1, PitchVector(0.0, (1.0, 2.0))),
    GenHelicoidB(rays=2, block=standard_block(1), angular_pitch=1.0,
                 axial_pitch=0.0),
    ChoeHoppe(sphere_dim=2, pitch=0.0),
    BDJ(pitch=PitchVector(lambda0=0.0, lambdas=(1.0, 2.0))),
])
def test_cone_scaling(spec):
    imm = build_immersion(spec)
    idx = scaling_indices(spec)
    assert idx, "cone spec must advertise its radial parameters"
    pts = sample_box(imm, 60, seed=6, keep=False)
    for s in (0.5, 2.0):
        scaled = pts.copy()
        scaled[:, list(idx)] *= s
        assert_close(imm.position(scaled), s * imm.position(pts), 1e-12)


def test_helicoid_with_axial_pitch_is_not_a_cone():
    assert scaling_indices(helicoid_a(1, 1)) == ()
    assert scaling_indices(ChoeHoppe(sphere_dim=1, pitch=1.0)) == ()


def test_screw_action_basics():
    pitch = PitchVector(lambda0=1.0, lambdas=(1.0,))
    q = np.array([1.0, 0.0, 0.0])
    assert_close(screw_action(pitch, 0.0, q), q, 0.0)
    assert_close(screw_action(pitch, np.pi / 2, q), [0.0, 1.0, np.pi / 2],
                 1e-12)


def test_screw_action_group_law():
    rng = np.random.default_rng(7)
    pitch = PitchVector(lambda0=0.4, lambdas=(1.0, -2.0, 0.5))
    q = rng.standard_normal((100, 7))
    s, t = 0.8, -1.7
    once = screw_action(pitch, s + t, q)
    twice = screw_action(pitch, s, screw_action(pitch, t, q))
    assert float(np.max(np.abs(once - twice))) <= 1e-12


def test_screw_action_validation():
    pitch = PitchVector(lambda0=0.0, lambdas=(1.0, 2.0))
    with pytest.raises(DimensionMismatch):
        screw_action(pitch, 1.0, np.zeros(6))  # 5 non-axial coords, L=2
    with pytest.raises(DimensionMismatch):
        screw_action(pitch, 1.0, np.zeros(7), block_dims=(4, 4))
    with pytest.raises(DimensionMismatch):
        screw_action(pitch, 1.0, np.zeros(7), block_dims=(3, 3))


def test_gen_helicoid_b_zero_pitch_is_rays_cone():
    block = standard_block(1)
    b = build_immersion(GenHelicoidB(rays=2, block=block, angular_pitch=0.0,
                                     axial_pitch=0.0))
    cone = build_immersion(LRaysCliffordCone(rays=2, block=block))
    rng = np.random.default_rng(8)
    pts_b = sample_box(b, 50, seed=9, keep=False)
    pts_cone = np.delete(pts_b, 2, axis=1)  # drop the sweep angle
    pos_b = b.position(pts_b)
    assert_close(pos_b[:, :-1], cone.position(pts_cone), 1e-14)
    assert_close(pos_b[:, -1], np.zeros(len(pos_b)), 0.0)


MINIMAL_SPECS = [
    CliffordCone(block=standard_block(1)),
    LRaysCliffordCone(rays=2, block=standard_block(1)),
    helicoid_a(1, 1),
    helicoid_a(2, 0, PitchVector(1.0, (1.0, 2.0))),
    GenHelicoidB(rays=2, block=standard_block(1), angular_pitch=0.9,
                 axial_pitch=0.4),
    ChoeHoppe(sphere_dim=2, pitch=1.0),
    BDJ(pitch=PitchVector(lambda0=1.0, lambdas=(1.0, 2.0))),
    HarveyLawsonCone(sphere_dim=1),
]


@pytest.mark.parametrize("spec", MINIMAL_SPECS)
def test_families_are_minimal_smoke(spec):
    imm = build_immersion(spec)
    pts = sample_box(imm, 50, seed=10)
    assert len(pts) >= 25
    mc = mean_curvature(imm, pts)
    met_scale = 1.0 + np.linalg.norm(imm.eval(pts).jacobian, axis=(-2, -1))**2
    assert float(np.max(mc.H_norm / met_scale)) <= 1e-10


@pytest.mark.parametrize("spec,n", [
    (CliffordTorus(block=standard_block(1)), 2),
    (LawsonSurface(lambda1=1.0, lambda2=2.0), 2),
    (SphericalSlice(inner=helicoid_a(2, 1, PitchVector(0.0, (1.0, 2.0)))), 6),
    (SphericalJoin(xs=SphereChart(dim=1), base=LatitudeCircle(height=0.0)), 2),
])
def test_spherical_families_are_sphere_minimal(spec, n):
    imm = build_immersion(spec)
    pts = sample_box(imm, 80, seed=11)
    res = sphere_minimality_residual(imm, pts, intrinsic_dim=n)
    assert float(np.max(res)) <= 1e-9


def test_negative_controls():
    lat = build_immersion(LatitudeCircle(height=0.5))
    pts = sample_box(lat, 30, seed=12)
    res = sphere_minimality_residual(lat, pts)
    assert float(np.min(res)) >= 0.5
    assert is_negative_control(LatitudeCircle(height=0.5))
    assert not is_negative_control(LatitudeCircle(height=0.0))

    cyl = build_immersion(Cylinder(radius=1.0))
    mc = mean_curvature(cyl, sample_box(cyl, 30, seed=13))
    assert_close(mc.H_norm, np.ones(30), 1e-12)
    assert is_negative_control(Cylinder(radius=1.0))
    assert not is_negative_control(helicoid_a(1, 1))


def test_degeneracy_guard_excludes_aligned_torus_points():
    spec = GenHelicoidA(
        pitch=PitchVector(lambda0=0.0, lambdas=(1.0,)),
        blocks=(standard_block(1, kind="trigonometric"),))
    imm = build_immersion(spec)
    aligned = np.array([[0.3, 0.3 + np.pi / 2, 0.5, 1.0]])   # m = -cos(u-v) = 0
    generic = np.array([[0.3, 0.3, 0.5, 1.0]])               # m = -1
    assert imm.excluded(aligned)[0]
    assert not imm.excluded(generic)[0]


def test_graph_function_values_and_homogeneity():
    assert_close(choe_hoppe_graph_function(np.array([1.0, 0.0])), 0.0, 1e-15)
    rng = np.random.default_rng(14)
    x = rng.uniform(0.5, 2.0, size=(100, 6))
    f1 = choe_hoppe_graph_function(x)
    f2 = choe_hoppe_graph_function(2.0 * x)
    assert_close(f1, f2, 1e-12)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_graph_residual_vanishes(N):
    rng = np.random.default_rng(20 + N)
    x = rng.uniform(0.5, 2.0, size=(200, 2 * N))
    x *= rng.choice([-1.0, 1.0], size=x.shape)
    res = choe_hoppe_graph_residual(N, x)
    assert float(np.max(np.abs(res))) <= 1e-9


def test_graph_residual_guards():
    with pytest.raises(BranchLocusError):
        choe_hoppe_graph_residual(1, np.array([0.05, 0.05]))
    with pytest.raises(DimensionMismatch):
        choe_hoppe_graph_residual(2, np.array([1.0, 0.5]))


JSON_SPECS = [
    CliffordTorus(block=standard_block(2, kind="trigonometric")),
    CliffordCone(block=standard_block(0, branches=(1, -1))),
    LRaysCone(rays=2, base=SphereChart(dim=2)),
    LRaysCone(rays=2, base=LatitudeCircle(height=0.0)),
    LRaysCliffordCone(rays=3, block=standard_block(1)),
    SphericalJoin(xs=SphereChart(dim=2, kind="trigonometric"),
                  base=CliffordTorus(block=standard_block(1))),
    helicoid_a(2, 1),
    GenHelicoidB(rays=2, block=standard_block(1), angular_pitch=1.5,
                 axial_pitch=-0.5),
    ChoeHoppe(sphere_dim=1, pitch=1.0,
              chart_p=standard_chart(0, branch=-1)),
    ChoeHoppe(sphere_dim=3, pitch=0.25),
    BDJ(pitch=PitchVector(lambda0=0.0, lambdas=(2.0,))),
    LawsonSurface(lambda1=1.0, lambda2=-2.0),
    HarveyLawsonCone(sphere_dim=2),
    SphericalSlice(inner=helicoid_a(2, 1, PitchVector(0.0, (1.0, 2.0))),
                   chart=SphereChart(dim=1, kind="trigonometric")),
    LatitudeCircle(height=-0.25),
    Cylinder(radius=2.0),
]


@pytest.mark.parametrize("spec", JSON_SPECS)
def test_spec_json_round_trip(spec):
    encoded = spec_to_json(spec)
    assert encoded["kind"] == type(spec).__name__
    decoded = spec_from_json(encoded)
    assert decoded == spec


def test_spec_json_round_trip_with_unitary():
    alpha = 0.3
    eye = np.eye(2)
    u4 = np.block([[np.cos(alpha) * eye, -np.sin(alpha) * eye],
                   [np.sin(alpha) * eye, np.cos(alpha) * eye]])
    spec = CliffordTorus(block=standard_block(1, unitary=matrix_tuple(u4)))
    assert spec_from_json(spec_to_json(spec)) == spec


def test_spec_json_strictness():
    with pytest.raises(SpecError):
        spec_from_json({"kind": "MoebiusStrip"})
    with pytest.raises(SpecError):
        spec_from_json({"kind": "Cylinder"})
    with pytest.raises(SpecError):
        spec_from_json({"kind": "Cylinder", "radius": 1.0, "color": "red"})
    with pytest.raises(SpecError):
        spec_from_json({"radius": 1.0})
    with pytest.raises(SpecError):
        spec_from_json({"kind": "SphericalSlice",
                        "inner": {"kind": "Cylinder", "radius": 1.0}})
    with pytest.raises(SpecError):
        spec_from_json([1, 2, 3])


def test_spec_validation_errors():
    with pytest.raises(SpecError):
        PitchVector(lambda0=1.0, lambdas=())
    with pytest.raises(SpecError):
        GenHelicoidA(pitch=PitchVector(1.0, (1.0, 2.0)),
                     blocks=(standard_block(1),))
    with pytest.raises(SpecError):
        GenHelicoidA(pitch=PitchVector(1.0, (1.0, 2.0)),
                     blocks=(standard_block(1), standard_block(2)))
    with pytest.raises(SpecError, match="PitchVector"):
        GenHelicoidA(pitch=0.7, blocks=(standard_block(1),))
    with pytest.raises(SpecError, match="PitchVector"):
        BDJ(pitch=0.5)
    with pytest.raises(SpecError):
        LawsonSurface(lambda1=0.0, lambda2=0.0)
    with pytest.raises(SpecError):
        LatitudeCircle(height=1.0)
    with pytest.raises(SpecError):
        Cylinder(radius=0.0)
    with pytest.raises(SpecError):
        ChoeHoppe(sphere_dim=0, pitch=1.0)
    with pytest.raises(SpecError):
        ChoeHoppe(sphere_dim=2, pitch=1.0, chart_p=standard_chart(0))
    with pytest.raises(SpecError):
        LRaysCone(rays=0, base=SphereChart(dim=1))
    with pytest.raises(SpecError):
        LRaysCone(rays=2, base=Cylinder(radius=1.0))
    with pytest.raises(SpecError):
        SphericalSlice(inner=helicoid_a(1, 1))  # nonzero axial pitch
    with pytest.raises(SpecError):
        SphericalSlice(inner=helicoid_a(2, 1, PitchVector(0.0, (1.0, 2.0))),
                       chart=SphereChart(dim=2))
    with pytest.raises(SpecError):
        HarveyLawsonCone(sphere_dim=1, chart_x=standard_chart(2))


def test_rays_cone_over_chart_base_is_minimal():
    imm = build_immersion(LRaysCone(rays=2, base=SphereChart(dim=2)))
    pts = sample_box(imm, 50, seed=15)
    mc = mean_curvature(imm, pts)
    assert float(np.max(mc.H_norm)) <= 1e-11
