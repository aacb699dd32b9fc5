"""The interleaved helicoid as a multi-valued graph over 2N variables.

Away from its axis the surface is the graph of
f = arctan(2 sum(x_k y_k) / sum(x_k^2 - y_k^2)) / 2, a function that is
invariant under scaling (degree-zero homogeneous) and solves a divergence
form equation. The residual of that equation is zero wherever the graph is
single-valued; the branch guard rejects points too close to the seam where
both arctan arguments vanish.
"""

import numpy as np

from minvar import (
    BranchLocusError,
    choe_hoppe_graph_function,
    choe_hoppe_graph_residual,
)


def main():
    for dim in (1, 2, 3):
        rng = np.random.default_rng(50 + dim)
        x = rng.uniform(0.5, 2.0, size=(1000, 2 * dim))
        res = choe_hoppe_graph_residual(dim, x)
        print(f"N={dim}: max equation residual over 1000 points "
              f"= {float(np.max(np.abs(res))):.3e}")

    x = np.array([1.3, 0.4, 0.8, 1.1])
    f1 = float(choe_hoppe_graph_function(x))
    f2 = float(choe_hoppe_graph_function(2.0 * x))
    print(f"\nscale invariance: f(x)={f1:.12f}  f(2x)={f2:.12f}  "
          f"gap={abs(f1 - f2):.1e}")

    try:
        choe_hoppe_graph_residual(1, np.array([1e-4, 1e-4]))
    except BranchLocusError as exc:
        print(f"near the seam: {exc}")


if __name__ == "__main__":
    main()
