"""Minimal in the sphere, minimal as a join, minimal as a cone: one property.

For an immersion into the unit sphere, three statements stand or fall
together: the spherical minimality residual |n F + delta F| vanishes on the
base, the same residual vanishes on its join with a round sphere, and the
multi-ray cone over it has zero mean curvature. The runner evaluates all
three routes independently and reports whether the verdicts agree.

The equator and the Clifford torus pass all three ways. A circle slid off
the equator fails all three ways, with residuals that no tolerance tuning
could confuse with roundoff.
"""

from minvar import (
    CliffordTorus,
    LatitudeCircle,
    SamplePlan,
    standard_block,
    takahashi_equivalence,
)


def show(tag, base, rays):
    report = takahashi_equivalence(base, rays=rays,
                                   plan=SamplePlan(count=200, seed=4))
    print(f"{tag} (rays={rays}, agreement={report.agreement})")
    for check in report.checks:
        print(f"  {check.name:<12} max={check.max_residual:.3e} "
              f"min={check.min_residual:.3e}  {check.verdict}")


def main():
    show("equator circle", LatitudeCircle(0.0), rays=2)
    print()
    show("Clifford torus", CliffordTorus(standard_block(1)), rays=3)
    print()
    show("offset circle control", LatitudeCircle(0.5), rays=2)


if __name__ == "__main__":
    main()
