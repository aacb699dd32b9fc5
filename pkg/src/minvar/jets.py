"""Second-order forward-mode differentiation (jets) and a finite-difference oracle.

A ``Jet2`` carries a scalar field together with its gradient and Hessian with
respect to ``n`` seed variables.  All three slots are numpy arrays with a
common leading batch shape::

    value : (...,)        grad : (..., n)        hess : (..., n, n)

so one jet evaluation differentiates a whole batch of points at once.  The
algebra implemented here is exact (to floating-point rounding):

    (f + g)'' = f'' + g''
    (f g)''   = f'' g + 2 sym(f' ⊗ g') + f g''
    (h ∘ f)'' = h''(f) f' ⊗ f' + h'(f) f''

Hessians are symmetrized on write, so the symmetry invariant holds exactly.

The primitives ``sin``/``cos``/``exp``/``log``/``sqrt``/``atan``/``atan2``
accept jets or plain numbers/arrays and dispatch accordingly; a map written
once in these primitives can therefore be evaluated three ways: as fast plain
numpy (positions only), as jets (exact derivatives), or through ``fd_jet``
(central differences with Richardson extrapolation, the independent oracle).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SpecError

__all__ = [
    "Jet2",
    "StepPolicy",
    "variables",
    "constant_like",
    "jet_eval",
    "fd_jet",
    "sin",
    "cos",
    "exp",
    "log",
    "sqrt",
    "atan",
    "atan2",
]

_Scalar = (int, float, np.integer, np.floating, np.ndarray)


def _sym(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + np.swapaxes(m, -1, -2))


class Jet2:
    """Value, gradient and Hessian of a scalar field over a point batch."""

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = np.asarray(value, dtype=np.float64)
        self.grad = np.asarray(grad, dtype=np.float64)
        self.hess = np.asarray(hess, dtype=np.float64)

    @property
    def nvars(self) -> int:
        return self.grad.shape[-1]

    def __repr__(self) -> str:  # debugging aid only
        return f"Jet2(value={self.value!r})"

    # ---- linear structure -------------------------------------------------

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.grad, -self.hess)

    def __add__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return Jet2(self.value + other.value, self.grad + other.grad,
                        self.hess + other.hess)
        if isinstance(other, _Scalar):
            return Jet2(self.value + other, self.grad, self.hess)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return Jet2(self.value - other.value, self.grad - other.grad,
                        self.hess - other.hess)
        if isinstance(other, _Scalar):
            return Jet2(self.value - other, self.grad, self.hess)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _Scalar):
            return Jet2(other - self.value, -self.grad, -self.hess)
        return NotImplemented

    # ---- Leibniz rule -----------------------------------------------------

    def __mul__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            av, bv = self.value, other.value
            outer = self.grad[..., :, None] * other.grad[..., None, :]
            # symmetrize the rank-one part first: addition is commutative but
            # not associative, so this grouping keeps hess exactly symmetric
            hess = (av[..., None, None] * other.hess
                    + bv[..., None, None] * self.hess
                    + (outer + np.swapaxes(outer, -1, -2)))
            return Jet2(av * bv,
                        av[..., None] * other.grad + bv[..., None] * self.grad,
                        hess)
        if isinstance(other, _Scalar):
            c = np.asarray(other, dtype=np.float64)
            return Jet2(self.value * c, self.grad * c[..., None],
                        self.hess * c[..., None, None])
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return self * _reciprocal(other)
        if isinstance(other, _Scalar):
            return self * (1.0 / np.asarray(other, dtype=np.float64))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _Scalar):
            return _reciprocal(self) * other
        return NotImplemented

    def __pow__(self, k) -> "Jet2":
        if not isinstance(k, (int, float, np.integer, np.floating)):
            return NotImplemented
        kf = float(k)
        if kf == 0.0:
            return constant_like(np.ones_like(self.value), self)
        if kf == 1.0:
            return self
        v = self.value
        if kf != int(kf) and np.any(v <= 0.0):
            raise DomainError("non-integer power of a non-positive value")
        if kf < 0.0 and np.any(v == 0.0):
            raise DomainError("negative power of zero")
        return _chain(self, v ** kf, kf * v ** (kf - 1.0),
                      kf * (kf - 1.0) * v ** (kf - 2.0))


def _chain(x: Jet2, f0: np.ndarray, f1: np.ndarray, f2: np.ndarray) -> Jet2:
    """Lift h(x) through x's jet given h, h', h'' at x.value."""
    outer = x.grad[..., :, None] * x.grad[..., None, :]
    hess = f1[..., None, None] * x.hess + f2[..., None, None] * outer
    return Jet2(f0, f1[..., None] * x.grad, hess)


def _reciprocal(x: Jet2) -> Jet2:
    v = x.value
    if np.any(v == 0.0):
        raise DomainError("division by zero")
    inv = 1.0 / v
    return _chain(x, inv, -inv * inv, 2.0 * inv * inv * inv)


def constant_like(c, like: Jet2) -> Jet2:
    """A jet with value c and vanishing derivatives, shaped like ``like``."""
    value = np.broadcast_to(np.asarray(c, dtype=np.float64),
                            np.broadcast_shapes(np.shape(c), like.value.shape))
    zero = np.zeros((), dtype=np.float64)
    grad = np.broadcast_to(zero, value.shape + (like.nvars,))
    hess = np.broadcast_to(zero, value.shape + (like.nvars, like.nvars))
    return Jet2(value, grad, hess)


# ---- primitives (dual dispatch: Jet2 or plain arrays) ----------------------


def sin(x):
    if isinstance(x, Jet2):
        s, c = np.sin(x.value), np.cos(x.value)
        return _chain(x, s, c, -s)
    return np.sin(x)


def cos(x):
    if isinstance(x, Jet2):
        s, c = np.sin(x.value), np.cos(x.value)
        return _chain(x, c, -s, -c)
    return np.cos(x)


def exp(x):
    if isinstance(x, Jet2):
        e = np.exp(x.value)
        return _chain(x, e, e, e)
    return np.exp(x)


def log(x):
    if isinstance(x, Jet2):
        v = x.value
        if np.any(v <= 0.0):
            raise DomainError("log of a non-positive value")
        return _chain(x, np.log(v), 1.0 / v, -1.0 / (v * v))
    if np.any(np.asarray(x) <= 0.0):
        raise DomainError("log of a non-positive value")
    return np.log(x)


def sqrt(x):
    if isinstance(x, Jet2):
        v = x.value
        if np.any(v <= 0.0):
            raise DomainError("sqrt requires values bounded away from zero")
        r = np.sqrt(v)
        return _chain(x, r, 0.5 / r, -0.25 / (r * v))
    if np.any(np.asarray(x) < 0.0):
        raise DomainError("sqrt of a negative value")
    return np.sqrt(x)


def atan(x):
    if isinstance(x, Jet2):
        v = x.value
        d = 1.0 / (1.0 + v * v)
        return _chain(x, np.arctan(v), d, -2.0 * v * d * d)
    return np.arctan(x)


def atan2(y, x):
    """Two-argument arctangent; branch-free away from the origin.

    The gradient and Hessian are assembled from the closed-form partials of
    θ = atan2(y, x) (first order: ∂θ = (x ∂y − y ∂x)/(x²+y²)) and the Hessian
    is symmetrized on write.
    """
    if not isinstance(y, Jet2) and not isinstance(x, Jet2):
        return np.arctan2(y, x)
    ref = y if isinstance(y, Jet2) else x
    if not isinstance(y, Jet2):
        y = constant_like(y, ref)
    if not isinstance(x, Jet2):
        x = constant_like(x, ref)
    if y.nvars != x.nvars:
        raise DomainError("jets seeded over different variable sets")
    xv, yv = x.value, y.value
    s = xv * xv + yv * yv
    if np.any(s == 0.0):
        raise DomainError("atan2 at the origin")
    num = xv[..., None] * y.grad - yv[..., None] * x.grad
    grad = num / s[..., None]
    ds = 2.0 * (xv[..., None] * x.grad + yv[..., None] * y.grad)
    cross = x.grad[..., :, None] * y.grad[..., None, :]
    raw = (cross - np.swapaxes(cross, -1, -2)
           + xv[..., None, None] * y.hess - yv[..., None, None] * x.hess) \
        / s[..., None, None] \
        - num[..., :, None] * ds[..., None, :] / (s * s)[..., None, None]
    return Jet2(np.arctan2(yv, xv), grad, _sym(raw))


# ---- seeding and evaluation -------------------------------------------------


def variables(p) -> list[Jet2]:
    """Seed jets for the coordinates of p, shape (..., n) → n unit-seeded jets."""
    p = np.asarray(p, dtype=np.float64)
    if p.ndim == 0:
        raise DomainError("variables() needs a trailing coordinate axis")
    n = p.shape[-1]
    batch = p.shape[:-1]
    eye = np.eye(n)
    zero = np.zeros((), dtype=np.float64)
    out = []
    for i in range(n):
        grad = np.broadcast_to(eye[i], batch + (n,))
        hess = np.broadcast_to(zero, batch + (n, n))
        out.append(Jet2(p[..., i], grad, hess))
    return out


def jet_eval(f, p) -> Jet2:
    """Evaluate f(u₁,…,uₙ) with jet arithmetic at p, returning value/grad/hess."""
    seeds = variables(p)
    out = f(*seeds)
    if isinstance(out, Jet2):
        return out
    return constant_like(out, seeds[0])


@dataclass(frozen=True)
class StepPolicy:
    """Central-difference controls: step h·max(1,|xᵢ|), Richardson depth ≥ 1."""

    base_step: float = 1e-4
    richardson_levels: int = 2

    def __post_init__(self):
        if not (self.base_step > 0.0):
            raise SpecError("base_step must be positive")
        if int(self.richardson_levels) != self.richardson_levels \
                or self.richardson_levels < 1:
            raise SpecError("richardson_levels must be an integer >= 1")


def _fd_once(ev, p: np.ndarray, h: np.ndarray, val: np.ndarray):
    """One central-difference pass at steps h: gradient and Hessian estimates."""
    n = p.shape[-1]
    batch = p.shape[:-1]
    grad = np.empty(batch + (n,))
    hess = np.empty(batch + (n, n))
    shifted = {}
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = 1.0
        step = h[..., i, None] * ei
        fp, fm = ev(p + step), ev(p - step)
        shifted[i] = (fp, fm)
        grad[..., i] = (fp - fm) / (2.0 * h[..., i])
        hess[..., i, i] = (fp - 2.0 * val + fm) / (h[..., i] ** 2)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = 1.0
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = 1.0
            si = h[..., i, None] * ei
            sj = h[..., j, None] * ej
            quad = (ev(p + si + sj) - ev(p + si - sj)
                    - ev(p - si + sj) + ev(p - si - sj))
            hess[..., i, j] = hess[..., j, i] = \
                quad / (4.0 * h[..., i] * h[..., j])
    return grad, hess


def fd_jet(f, p, policy: StepPolicy | None = None) -> Jet2:
    """Finite-difference Jet2 oracle: error O(h^(2·richardson_levels))."""
    policy = policy or StepPolicy()
    p = np.asarray(p, dtype=np.float64)
    if p.ndim == 0:
        raise DomainError("fd_jet needs a trailing coordinate axis")
    n = p.shape[-1]

    def ev(q):
        return np.asarray(f(*[q[..., i] for i in range(n)]), dtype=np.float64)

    val = ev(p)
    h0 = policy.base_step * np.maximum(1.0, np.abs(p))
    levels = int(policy.richardson_levels)
    rows = [_fd_once(ev, p, h0 / (2.0 ** k), val) for k in range(levels)]
    # Richardson table over the halved-step ladder; each stage cancels the
    # next even-order error term of the central-difference estimates.
    for m in range(1, levels):
        w = 4.0 ** m
        rows = [
            (
                (w * rows[k][0] - rows[k - 1][0]) / (w - 1.0),
                (w * rows[k][1] - rows[k - 1][1]) / (w - 1.0),
            )
            for k in range(m, levels)
        ]
        rows = [None] * m + rows
    grad, hess = rows[-1]
    return Jet2(val, grad, _sym(hess))
