"""Order-3 derivative jets, quadrature, and fixed-step ODE integration.

A :class:`Jet3` carries a function value together with its first three
derivatives at a point and propagates them through arithmetic by the
Leibniz and Faa di Bruno rules.  All fields may be numpy arrays, so jet
expressions evaluate vectorized over sample grids.

Profiles defined by an autonomous equation f' = phi(f) are integrated
with the classical 4th-order one-step method; their jets are *not*
obtained by differencing but follow from the equation itself:

    f'   = phi(f)
    f''  = phi'(f) phi(f)
    f''' = (phi''(f) phi(f) + phi'(f)^2) phi(f)

Finite differences appear only in :func:`fd_check`, which exists as an
independent cross-check oracle for jets produced elsewhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    IntervalOutsideDomain,
    InvalidInitialState,
    OutOfDomain,
    StepSizeNonpositive,
    ToleranceNotReached,
)

__all__ = [
    "Interval",
    "Jet3",
    "Dual",
    "SmoothFn1",
    "OdeSolution",
    "integrate_profile",
    "quadrature",
    "fd_check",
    "jet_fn",
    "constant_fn",
    "sin_offset_fn",
    "poly_fn",
]

ArrayLike = "float | np.ndarray"

#: |phi| beyond this aborts integration (recorded, not raised).
DEFAULT_OVERFLOW_BOUND = 1e12


@dataclass(frozen=True)
class Interval:
    """Open interval (lo, hi); either end may be infinite."""

    lo: float = -math.inf
    hi: float = math.inf

    def contains(self, u, margin: float = 0.0) -> bool:
        u = np.asarray(u)
        return bool(np.all(u > self.lo + margin) and np.all(u < self.hi - margin))

    def clipped(self, lo: float, hi: float) -> "Interval":
        return Interval(max(self.lo, lo), min(self.hi, hi))

    def sample(self, n: int, inset: float = 1e-3) -> np.ndarray:
        """n interior points; unbounded ends are cut to a finite window."""
        lo, hi = self.lo, self.hi
        if not math.isfinite(lo) and not math.isfinite(hi):
            lo, hi = -10.0, 10.0
        elif not math.isfinite(hi):
            hi = lo + 20.0
        elif not math.isfinite(lo):
            lo = hi - 20.0
        pad = inset * (hi - lo)
        return np.linspace(lo + pad, hi - pad, n)


@dataclass(frozen=True, eq=False)
class Jet3:
    """Value and first three derivatives of a scalar function at a point."""

    f: "ArrayLike"
    d1: "ArrayLike" = 0.0
    d2: "ArrayLike" = 0.0
    d3: "ArrayLike" = 0.0

    @classmethod
    def variable(cls, u) -> "Jet3":
        """The identity function evaluated at u."""
        u = np.asarray(u, dtype=float)
        one = np.ones_like(u) if u.ndim else 1.0
        zero = np.zeros_like(u) if u.ndim else 0.0
        return cls(u if u.ndim else float(u), one, zero, zero)

    @classmethod
    def constant(cls, c) -> "Jet3":
        return cls(c, 0.0, 0.0, 0.0)

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        o = _as_jet(other)
        return Jet3(self.f + o.f, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(-self.f, -self.d1, -self.d2, -self.d3)

    def __sub__(self, other):
        return self + (-_as_jet(other))

    def __rsub__(self, other):
        return _as_jet(other) + (-self)

    def __mul__(self, other):
        o = _as_jet(other)
        return Jet3(
            self.f * o.f,
            self.d1 * o.f + self.f * o.d1,
            self.d2 * o.f + 2.0 * self.d1 * o.d1 + self.f * o.d2,
            self.d3 * o.f + 3.0 * self.d2 * o.d1 + 3.0 * self.d1 * o.d2 + self.f * o.d3,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _as_jet(other).reciprocal()

    def __rtruediv__(self, other):
        return _as_jet(other) * self.reciprocal()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = Jet3.constant(1.0)
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- composition with elementary functions ---------------------------
    def compose(self, w0, w1, w2, w3) -> "Jet3":
        """Chain rule through an outer function with derivatives w1..w3 at self.f."""
        g1, g2, g3 = self.d1, self.d2, self.d3
        return Jet3(
            w0,
            w1 * g1,
            w2 * g1 * g1 + w1 * g2,
            w3 * g1 ** 3 + 3.0 * w2 * g1 * g2 + w1 * g3,
        )

    def reciprocal(self) -> "Jet3":
        v = self.f
        return self.compose(1.0 / v, -1.0 / v ** 2, 2.0 / v ** 3, -6.0 / v ** 4)

    def sqrt(self) -> "Jet3":
        r = np.sqrt(self.f)
        return self.compose(r, 0.5 / r, -0.25 / r ** 3, 0.375 / r ** 5)

    def exp(self) -> "Jet3":
        e = np.exp(self.f)
        return self.compose(e, e, e, e)

    def log(self) -> "Jet3":
        v = self.f
        return self.compose(np.log(v), 1.0 / v, -1.0 / v ** 2, 2.0 / v ** 3)

    def sin(self) -> "Jet3":
        s, c = np.sin(self.f), np.cos(self.f)
        return self.compose(s, c, -s, -c)

    def cos(self) -> "Jet3":
        s, c = np.sin(self.f), np.cos(self.f)
        return self.compose(c, -s, -c, s)

    def cosh(self) -> "Jet3":
        s, c = np.sinh(self.f), np.cosh(self.f)
        return self.compose(c, s, c, s)

    def sinh(self) -> "Jet3":
        s, c = np.sinh(self.f), np.cosh(self.f)
        return self.compose(s, c, s, c)

    def arcsin(self) -> "Jet3":
        v = self.f
        w = 1.0 - v * v
        return self.compose(
            np.arcsin(v),
            w ** -0.5,
            v * w ** -1.5,
            (1.0 + 2.0 * v * v) * w ** -2.5,
        )

    def derivatives(self) -> tuple:
        return (self.f, self.d1, self.d2, self.d3)


def _as_jet(x) -> Jet3:
    return x if isinstance(x, Jet3) else Jet3.constant(x)


@dataclass(frozen=True, eq=False)
class Dual:
    """First-order jet (value, derivative); used for coefficient derivatives."""

    f: "ArrayLike"
    d1: "ArrayLike" = 0.0

    def __add__(self, other):
        o = _as_dual(other)
        return Dual(self.f + o.f, self.d1 + o.d1)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.f, -self.d1)

    def __sub__(self, other):
        return self + (-_as_dual(other))

    def __rsub__(self, other):
        return _as_dual(other) + (-self)

    def __mul__(self, other):
        o = _as_dual(other)
        return Dual(self.f * o.f, self.d1 * o.f + self.f * o.d1)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_dual(other)
        return Dual(self.f / o.f, (self.d1 * o.f - self.f * o.d1) / o.f ** 2)

    def __rtruediv__(self, other):
        return _as_dual(other) / self

    def sqrt(self) -> "Dual":
        r = np.sqrt(self.f)
        return Dual(r, 0.5 * self.d1 / r)


def _as_dual(x) -> Dual:
    return x if isinstance(x, Dual) else Dual(x, 0.0)


@dataclass(frozen=True)
class SmoothFn1:
    """Scalar function with order-3 jets on a declared open interval.

    Evaluation outside the interval raises :class:`OutOfDomain` rather
    than silently returning garbage.
    """

    eval_jet: Callable[["ArrayLike"], Jet3]
    domain: Interval = field(default_factory=Interval)
    name: str = ""

    def __call__(self, u) -> Jet3:
        if not self.domain.contains(u):
            raise OutOfDomain(
                f"{self.name or 'function'} evaluated at {u} outside "
                f"({self.domain.lo}, {self.domain.hi})")
        return self.eval_jet(u)

    def value(self, u):
        return self(u).f


def jet_fn(expr: Callable[[Jet3], Jet3], domain: Interval = Interval(),
           name: str = "") -> SmoothFn1:
    """SmoothFn1 from a closed-form jet expression u -> expr(Jet3.variable(u))."""
    return SmoothFn1(lambda u: expr(Jet3.variable(u)), domain, name)


def constant_fn(c: float, domain: Interval = Interval()) -> SmoothFn1:
    return SmoothFn1(lambda u: Jet3(c + 0.0 * np.asarray(u, dtype=float),
                                    0.0, 0.0, 0.0),
                     domain, name=f"const:{c}")


def sin_offset_fn(c: float, domain: Interval = Interval()) -> SmoothFn1:
    """u -> c + sin(u)."""
    return jet_fn(lambda j: c + j.sin(), domain, name=f"sin-offset:{c}")


def poly_fn(coeffs, domain: Interval = Interval()) -> SmoothFn1:
    """Polynomial with coefficients in increasing degree order."""
    cs = [float(c) for c in coeffs]

    def expr(j: Jet3) -> Jet3:
        acc = Jet3.constant(cs[-1])
        for c in reversed(cs[:-1]):
            acc = acc * j + c
        return acc

    return jet_fn(expr, domain, name="poly:" + ",".join(map(str, cs)))


# --------------------------------------------------------------------------
# finite-difference oracle
# --------------------------------------------------------------------------

def fd_check(fn: SmoothFn1, u: float, h: float) -> float:
    """Max relative deviation of jet orders 1..3 from central differences.

    Deviation for each order is |jet - FD| / (1 + |jet|); the jets being
    checked stay out of the stencil evaluation entirely.
    """
    if not (fn.domain.contains(u - 2 * h) and fn.domain.contains(u + 2 * h)):
        raise OutOfDomain("stencil u +/- 2h leaves the function's domain")
    f = fn.value
    fm2, fm1, f0, fp1, fp2 = (f(u - 2 * h), f(u - h), f(u), f(u + h), f(u + 2 * h))
    fd1 = (fp1 - fm1) / (2 * h)
    fd2 = (fp1 - 2 * f0 + fm1) / h ** 2
    fd3 = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h ** 3)
    jet = fn(u)
    devs = [abs(jet.d1 - fd1) / (1 + abs(jet.d1)),
            abs(jet.d2 - fd2) / (1 + abs(jet.d2)),
            abs(jet.d3 - fd3) / (1 + abs(jet.d3))]
    return float(max(devs))


# --------------------------------------------------------------------------
# adaptive Simpson quadrature
# --------------------------------------------------------------------------

def quadrature(fn: SmoothFn1, a: float, b: float, tol: float = 1e-10,
               max_depth: int = 48) -> float:
    """Adaptive Simpson estimate of the integral of fn over [a, b].

    Exact to rounding on polynomials of degree <= 3 per panel; raises
    :class:`ToleranceNotReached` when the recursion depth cap is hit.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    if not (fn.domain.contains(a) and fn.domain.contains(b)):
        raise IntervalOutsideDomain(
            f"[{a}, {b}] not inside ({fn.domain.lo}, {fn.domain.hi})")

    f = fn.value

    def simpson(fa, fm, fb, lo, hi):
        return (hi - lo) * (fa + 4.0 * fm + fb) / 6.0

    def recurse(lo, hi, fa, fm, fb, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, lo, mid)
        right = simpson(fm, frm, fb, mid, hi)
        err = left + right - whole
        if abs(err) <= 15.0 * eps:
            return left + right + err / 15.0
        if depth >= max_depth:
            raise ToleranceNotReached(
                f"Simpson refinement exceeded depth {max_depth} on "
                f"[{lo}, {hi}]")
        return (recurse(lo, mid, fa, flm, fm, left, 0.5 * eps, depth + 1)
                + recurse(mid, hi, fm, frm, fb, right, 0.5 * eps, depth + 1))

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(fa, fm, fb, a, b)
    return sign * recurse(a, b, fa, fm, fb, whole, tol, 0)


class CumulativeQuadrature:
    """Antiderivative u -> integral_{u0}^{u} fn, memoized at visited points."""

    def __init__(self, fn: SmoothFn1, u0: float, tol: float = 1e-12):
        self.fn = fn
        self.tol = tol
        self._known: dict[float, float] = {float(u0): 0.0}

    def __call__(self, u: float) -> float:
        u = float(u)
        if u in self._known:
            return self._known[u]
        anchor = min(self._known, key=lambda x: abs(x - u))
        val = self._known[anchor] + quadrature(self.fn, anchor, u, self.tol)
        self._known[u] = val
        return val


# --------------------------------------------------------------------------
# fixed-step 4th-order integration of f' = phi(f)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OdeSolution:
    """Solution of f' = phi(f) on a uniform grid, with equation-derived jets."""

    phi: SmoothFn1
    u0: float
    h: float
    values: np.ndarray
    requested_end: float
    stopped_reason: str | None = None

    @property
    def u_end(self) -> float:
        return self.u0 + (len(self.values) - 1) * self.h

    @property
    def domain(self) -> Interval:
        return Interval(self.u0, self.u_end)

    def node_us(self) -> np.ndarray:
        return self.u0 + self.h * np.arange(len(self.values))

    def value_at(self, u):
        """Dense output: nearest node below, then one partial RK4 step.

        Node queries snap to the node exactly (delta = 0 bit-for-bit),
        so equation-derived jets at nodes are reproducible.
        """
        u = np.asarray(u, dtype=float)
        if np.any(u < self.u0 - 1e-9) or np.any(u > self.u_end + 1e-9):
            raise OutOfDomain(
                f"u={u} outside realized range [{self.u0}, {self.u_end}]")
        steps = (u - self.u0) / self.h
        idx = np.clip(np.floor(steps + 1e-9).astype(int), 0,
                      len(self.values) - 1)
        delta = u - (self.u0 + idx * self.h)
        y = self.values[idx]
        out = _rk4_step(lambda t: self.phi.eval_jet(t).f, y, delta)
        return out if u.ndim else float(out)

    def jet_at(self, u) -> Jet3:
        """Jets per the defining equation at the dense-output value."""
        y = self.value_at(u)
        p = self.phi.eval_jet(y)
        d1 = p.f
        d2 = p.d1 * p.f
        d3 = (p.d2 * p.f + p.d1 ** 2) * p.f
        return Jet3(y, d1, d2, d3)


def _rk4_step(rhs, y, h):
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * h * k1)
    k3 = rhs(y + 0.5 * h * k2)
    k4 = rhs(y + h * k3)
    return y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def integrate_profile(phi: SmoothFn1, f0: float, u_range: tuple[float, float],
                      h: float,
                      overflow_bound: float = DEFAULT_OVERFLOW_BOUND
                      ) -> OdeSolution:
    """Integrate f' = phi(f) from f(u_range[0]) = f0 with fixed step h.

    Integration stops early, with a recorded reason, if a stage leaves
    phi's validity interval, produces a non-finite value, or |phi|
    exceeds the overflow bound.  An early stop is an event on the
    returned solution, not an error.
    """
    if h <= 0:
        raise StepSizeNonpositive(f"h={h}")
    u0, u1 = float(u_range[0]), float(u_range[1])
    if u1 <= u0:
        raise StepSizeNonpositive(f"empty integration range [{u0}, {u1}]")
    if not phi.domain.contains(f0):
        raise InvalidInitialState(f"f0={f0} outside phi's domain")
    p0 = phi.eval_jet(f0).f
    if not np.isfinite(p0):
        raise InvalidInitialState(f"phi(f0) is not finite at f0={f0}")

    n_steps = int(round((u1 - u0) / h))
    n_steps = max(n_steps, 1)
    values = [float(f0)]
    stopped = None
    rhs = lambda t: phi.eval_jet(t).f
    y = float(f0)
    for i in range(n_steps):
        y_next, why = _guarded_rk4_step(rhs, y, h, phi.domain, overflow_bound)
        if y_next is None:
            stopped = f"{why} at u={u0 + i * h:.6g}"
            break
        y = y_next
        values.append(y)
    return OdeSolution(phi=phi, u0=u0, h=h, values=np.array(values),
                       requested_end=u1, stopped_reason=stopped)


def _guarded_rk4_step(rhs, y, h, domain: Interval, bound: float):
    """One RK4 step, or (None, reason) when a stage leaves the safe region."""
    def slope(t):
        if not (np.isfinite(t) and domain.contains(t)):
            return None, "stage left phi domain"
        k = rhs(t)
        if not np.isfinite(k):
            return None, "phi not finite at stage"
        if abs(k) > bound:
            return None, "derivative overflow"
        return k, ""

    k1, why = slope(y)
    if k1 is None:
        return None, why
    k2, why = slope(y + 0.5 * h * k1)
    if k2 is None:
        return None, why
    k3, why = slope(y + 0.5 * h * k2)
    if k3 is None:
        return None, why
    k4, why = slope(y + h * k3)
    if k4 is None:
        return None, why
    y_next = float(y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0)
    if not (np.isfinite(y_next) and domain.contains(y_next)):
        return None, "state left phi domain"
    return y_next, ""
