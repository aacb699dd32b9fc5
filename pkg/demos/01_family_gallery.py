"""Build one instance of every family and spot-check its mean curvature.

Each row prints the parameter/ambient dimensions and the largest normalized
mean-curvature residual over a 100-point sample. The two control rows at the
bottom are deliberately non-minimal; their residuals sit far above the
tolerance and the harness marks them FAIL-EXPECTED instead of PASS.
"""

import numpy as np

from minvar import (
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
    SamplePlan,
    SphericalJoin,
    SphericalSlice,
    build_immersion,
    standard_block,
    standard_chart,
    verify_minimality,
)


def gallery():
    block = standard_block(1)
    equator = LatitudeCircle(0.0)
    flat_helicoid = GenHelicoidA(pitch=PitchVector(0.0, (1.0, 1.3)),
                                 blocks=(standard_block(1),) * 2)
    return [
        ("Clifford torus", CliffordTorus(block)),
        ("Clifford cone", CliffordCone(block)),
        ("rays cone over equator", LRaysCone(rays=2, base=equator)),
        ("rays Clifford cone", LRaysCliffordCone(rays=2, block=block)),
        ("spherical join", SphericalJoin(xs=standard_chart(1), base=equator)),
        ("multi-block helicoid", GenHelicoidA(
            pitch=PitchVector(0.7, (1.0, 1.4)),
            blocks=(standard_block(2), standard_block(2)))),
        ("shared-rate helicoid", GenHelicoidB(
            rays=2, block=block, angular_pitch=1.1, axial_pitch=0.6)),
        ("interleaved helicoid", ChoeHoppe(sphere_dim=2, pitch=0.8)),
        ("plane-pair helicoid", BDJ(pitch=PitchVector(0.5, (1.0, 2.0)))),
        ("doubly rotating surface", LawsonSurface(1.0, 2.0)),
        ("paired-sphere cone", HarveyLawsonCone(sphere_dim=2)),
        ("zero-rate sphere slice", SphericalSlice(inner=flat_helicoid)),
        ("latitude circle control", LatitudeCircle(0.5)),
        ("cylinder control", Cylinder(1.0)),
    ]


def main():
    plan = SamplePlan(count=100, seed=1)
    print(f"{'family':<26} {'params':>6} {'ambient':>7} "
          f"{'max |H| residual':>17} verdict")
    for name, spec in gallery():
        imm = build_immersion(spec)
        report = verify_minimality(spec, plan)
        check = report.checks[0]
        print(f"{name:<26} {imm.param_dim:>6} {imm.ambient_dim:>7} "
              f"{check.max_residual:>17.3e} {check.verdict}")


if __name__ == "__main__":
    main()
