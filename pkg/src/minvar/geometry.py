"""Induced geometry of parametrized immersions.

An ``Immersion`` wraps a component map F: box ⊂ ℝⁿ → ℝᴷ written in the jet
primitives, so one definition supports three evaluation modes: plain numpy
positions, exact first/second derivatives (``eval`` → ``PointEval``), and the
finite-difference oracle.  Everything downstream is assembled from
``PointEval`` alone:

    g_ij      = ∂ᵢF · ∂ⱼF                      (first fundamental form)
    ∂ₖg_ij    = ∂ₖ∂ᵢF · ∂ⱼF + ∂ᵢF · ∂ₖ∂ⱼF
    Δ_g F     = g^{ij}(∂ᵢ∂ⱼF − Γ^k_{ij} ∂ₖF)   (contraction form)
              = (1/√g) ∂ᵢ(√g g^{ij} ∂ⱼF)       (divergence form, cross-check)

The mean curvature vector is H = Δ_g F; it is normal to the immersion, which
the tangential-residual field quantifies.  For maps into the unit sphere,
minimality is equivalent to Δ_g F = −n·F (sphere_minimality_residual).

All operations accept batched points (leading axes broadcast through).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateMetric, DimensionMismatch, NotSpherical
from .jets import Jet2, variables

__all__ = [
    "RANK_TOL",
    "Immersion",
    "PointEval",
    "MetricEval",
    "MeanCurvatureEval",
    "metric",
    "metric_derivative",
    "laplace_beltrami",
    "laplace_from_pointeval",
    "coordinate_laplacian",
    "mean_curvature",
    "sphere_minimality_residual",
]

# Scale-invariant rank threshold: for a positive-definite g, Hadamard's
# inequality gives det g ≤ Π g_ii, so det g / Π g_ii ∈ (0, 1] measures
# conditioning independently of the metric's overall scale.
RANK_TOL = 1e-12


@dataclass(frozen=True)
class PointEval:
    """Position, Jacobian and second-derivative tensor at parameter points."""

    position: np.ndarray  # (..., K)
    jacobian: np.ndarray  # (..., K, n)
    second: np.ndarray    # (..., K, n, n), symmetric in the trailing pair


@dataclass(frozen=True)
class MetricEval:
    """First fundamental form with inverse and determinant."""

    g: np.ndarray      # (..., n, n)
    g_inv: np.ndarray  # (..., n, n)
    det_g: np.ndarray  # (...,)


@dataclass(frozen=True)
class MeanCurvatureEval:
    """Mean curvature vector H = Δ_g F with its norm and tangential defect."""

    H: np.ndarray                    # (..., K)
    H_norm: np.ndarray               # (...,)
    tangential_residual: np.ndarray  # (...,)


@dataclass(frozen=True)
class Immersion:
    """A component map over an open box with degeneracy guards.

    ``components`` receives one scalar-like object per parameter (plain
    arrays or jets) and must return a sequence of ``ambient_dim`` scalar-like
    outputs built from the jet primitives.  ``exclusions`` are named
    predicates mapping a point batch (..., n) to a boolean exclusion mask.
    """

    param_dim: int
    ambient_dim: int
    components: Callable[[Sequence], Sequence]
    domain: tuple[tuple[float, float], ...]
    exclusions: tuple[tuple[str, Callable[[np.ndarray], np.ndarray]], ...] = ()
    name: str = ""
    metadata: dict = field(default_factory=dict, compare=False)

    def _check_point_shape(self, p: np.ndarray) -> None:
        if p.ndim == 0 or p.shape[-1] != self.param_dim:
            raise DimensionMismatch(
                f"{self.name or 'immersion'}: expected points with "
                f"{self.param_dim} coordinates, got shape {p.shape}")

    def position(self, p) -> np.ndarray:
        """Fast position-only evaluation, shape (..., n) → (..., K)."""
        p = np.asarray(p, dtype=np.float64)
        self._check_point_shape(p)
        cols = [p[..., i] for i in range(self.param_dim)]
        outs = self.components(cols)
        batch = p.shape[:-1]
        stacked = [np.broadcast_to(np.asarray(o, dtype=np.float64), batch)
                   for o in outs]
        return np.stack(stacked, axis=-1)

    def eval(self, p) -> PointEval:
        """Exact first/second derivatives via jets, batched over leading axes."""
        p = np.asarray(p, dtype=np.float64)
        self._check_point_shape(p)
        seeds = variables(p)
        outs = self.components(seeds)
        if len(outs) != self.ambient_dim:
            raise DimensionMismatch(
                f"{self.name or 'immersion'}: component map returned "
                f"{len(outs)} coordinates, declared {self.ambient_dim}")
        n = self.param_dim
        batch = p.shape[:-1]
        vals, grads, hesss = [], [], []
        zg = np.zeros(batch + (n,))
        zh = np.zeros(batch + (n, n))
        for o in outs:
            if isinstance(o, Jet2):
                vals.append(np.broadcast_to(o.value, batch))
                grads.append(np.broadcast_to(o.grad, batch + (n,)))
                hesss.append(np.broadcast_to(o.hess, batch + (n, n)))
            else:
                vals.append(np.broadcast_to(np.asarray(o, float), batch))
                grads.append(zg)
                hesss.append(zh)
        return PointEval(position=np.stack(vals, axis=-1),
                         jacobian=np.stack(grads, axis=-2),
                         second=np.stack(hesss, axis=-3))

    def excluded(self, p) -> np.ndarray:
        """Boolean mask of points rejected by any degeneracy guard."""
        p = np.asarray(p, dtype=np.float64)
        self._check_point_shape(p)
        mask = np.zeros(p.shape[:-1], dtype=bool)
        for _, predicate in self.exclusions:
            mask |= np.asarray(predicate(p), dtype=bool)
        return mask


def metric(pe: PointEval, rank_tol: float = RANK_TOL) -> MetricEval:
    """First fundamental form g = JᵀJ with inverse and determinant."""
    g = np.einsum("...ki,...kj->...ij", pe.jacobian, pe.jacobian)
    det = np.linalg.det(g)
    if g.shape[-1] == 0:
        return MetricEval(g=g, g_inv=g, det_g=det)
    diag = np.einsum("...ii->...i", g)
    ratio = det / np.prod(diag, axis=-1)
    if np.any(det <= 0.0) or np.any(ratio <= rank_tol):
        worst = float(np.min(ratio))
        raise DegenerateMetric(
            f"rank-deficient metric: det/Hadamard ratio {worst:.3e} "
            f"<= {rank_tol:.1e}")
    return MetricEval(g=g, g_inv=np.linalg.inv(g), det_g=det)


def metric_derivative(pe: PointEval) -> np.ndarray:
    """∂ₖ g_ij assembled from first and second derivatives of F.

    Returns shape (..., n, n, n) indexed [k, i, j] = ∂ₖ(∂ᵢF·∂ⱼF).
    """
    t = np.einsum("...aki,...aj->...kij", pe.second, pe.jacobian)
    return t + np.swapaxes(t, -1, -2)


def laplace_from_pointeval(pe: PointEval, form: str = "contraction",
                           met: MetricEval | None = None) -> np.ndarray:
    """Δ_g F from a PointEval; ``form`` picks the independent assembly route."""
    met = met or metric(pe)
    gi = met.g_inv
    dg = metric_derivative(pe)
    trace2 = np.einsum("...ij,...aij->...a", gi, pe.second)
    if form == "contraction":
        # c_k = g^{ij} Γ_{kij} = g^{ij}∂ᵢg_{jk} − ½ g^{ij}∂ₖg_{ij}
        c = np.einsum("...ij,...ijk->...k", gi, dg) \
            - 0.5 * np.einsum("...ij,...kij->...k", gi, dg)
        corr = np.einsum("...lk,...k,...al->...a", gi, c, pe.jacobian)
        return trace2 - corr
    if form == "divergence":
        dlogs = 0.5 * np.einsum("...ab,...iab->...i", gi, dg)
        dginv = -np.einsum("...ia,...kab,...bj->...kij", gi, dg, gi)
        v = np.einsum("...i,...ij->...j", dlogs, gi) \
            + np.einsum("...iij->...j", dginv)
        return trace2 + np.einsum("...j,...aj->...a", v, pe.jacobian)
    raise ValueError(f"unknown Laplace-Beltrami form: {form!r}")


def laplace_beltrami(imm: Immersion, p, form: str = "contraction") -> np.ndarray:
    """Mean curvature vector field Δ_g F at p (shape (..., K))."""
    return laplace_from_pointeval(imm.eval(p), form=form)


def coordinate_laplacian(imm: Immersion, p, index: int) -> np.ndarray:
    """Δ_g of the parameter coordinate u_index, via the divergence form.

    For φ = u_c the divergence form collapses to
    Δφ = Σᵢ [∂ᵢ(log √g) g^{ic} + ∂ᵢ g^{ic}].
    """
    pe = imm.eval(p)
    met = metric(pe)
    gi = met.g_inv
    dg = metric_derivative(pe)
    dlogs = 0.5 * np.einsum("...ab,...iab->...i", gi, dg)
    dginv = -np.einsum("...ia,...kab,...bj->...kij", gi, dg, gi)
    return np.einsum("...i,...i->...", dlogs, gi[..., :, index]) \
        + np.einsum("...ii->...", dginv[..., :, :, index])


def mean_curvature(imm: Immersion, p) -> MeanCurvatureEval:
    """H = Δ_g F plus its norm and the norm of its tangential projection.

    The tangential part solves the normal equations g·c = Jᵀ H (the Gram
    matrix of the Jacobian columns is g itself) and measures ‖J·c‖.
    """
    pe = imm.eval(p)
    met = metric(pe)
    H = laplace_from_pointeval(pe, met=met)
    rhs = np.einsum("...an,...a->...n", pe.jacobian, H)
    coeff = np.linalg.solve(met.g, rhs[..., None])[..., 0]
    tangential = np.einsum("...an,...n->...a", pe.jacobian, coeff)
    return MeanCurvatureEval(
        H=H,
        H_norm=np.linalg.norm(H, axis=-1),
        tangential_residual=np.linalg.norm(tangential, axis=-1),
    )


def sphere_minimality_residual(imm: Immersion, p,
                               intrinsic_dim: int | None = None,
                               sphere_tol: float = 1e-12) -> np.ndarray:
    """‖n·F + Δ_g F‖ for immersions into the unit sphere (0 ⟺ minimal there)."""
    n = imm.param_dim if intrinsic_dim is None else intrinsic_dim
    pe = imm.eval(p)
    radius = np.linalg.norm(pe.position, axis=-1)
    off = float(np.max(np.abs(radius - 1.0)))
    if off > sphere_tol:
        raise NotSpherical(
            f"image point leaves the unit sphere by {off:.3e} "
            f"(tolerance {sphere_tol:.1e})")
    H = laplace_from_pointeval(pe)
    return np.linalg.norm(n * pe.position + H, axis=-1)
