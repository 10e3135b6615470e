"""Timelike surfaces built from a profile curve swept along a spherical one.

The surface is the immersion

    z(u, v) = f(u) l(v) + g(u) e4

where (f, g) is a profile ("meridian") curve with f > 0 and the Lorentz
arc-length normalization f'^2 - g'^2 = -1, and l(v) is an arc-length
curve on the unit sphere S^2(1) inside span{e1, e2, e3}.  The induced
metric has signature (1,1): z_u is unit timelike and z_v is spacelike
with squared length f^2.

All point operations accept scalars or broadcastable numpy arrays in
(u, v); the typed wrappers (:class:`SurfaceJet`, :class:`FrameAtPoint`,
:class:`InvariantReport`) are for single points.  Ambient vectors are
arrays with a trailing axis of length 4 in the basis (e1, e2, e3, e4).

Surfaces and curves are immutable after construction; every evaluation
is pure, so grid sweeps may be parallelized freely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .diffkit import (
    CumulativeQuadrature,
    Dual,
    Interval,
    Jet3,
    OdeSolution,
    SmoothFn1,
    constant_fn,
)
from .errors import MinimalPoint, NonpositiveProfile, OutOfDomain
from .minkowski import CausalClass, Vec4M, causal_character, inner_arrays

__all__ = [
    "SphericalCurve",
    "MeridianProfile",
    "MeridianSurface",
    "SurfaceJet",
    "FrameAtPoint",
    "InvariantReport",
    "great_circle",
    "latitude_circle",
    "curve_from_curvature",
]

_E4 = np.array([0.0, 0.0, 0.0, 1.0])

SPHERE_TOL = 1e-10     # |<l,l>-1|, |<l',l'>-1|
FRENET_TOL = 1e-8      # Frenet closure of the directrix frame
PROFILE_TOL = 1e-10    # |f'^2 - g'^2 + 1|
MINIMAL_H_TOL = 1e-12  # <H,H> at or below this counts as a minimal point


def _pad4(components3: np.ndarray) -> np.ndarray:
    """Append a zero e4 component: shape (..., 3) -> (..., 4)."""
    pad = np.zeros(components3.shape[:-1] + (1,))
    return np.concatenate([components3, pad], axis=-1)


def _scale(s, vec: np.ndarray) -> np.ndarray:
    """Multiply an ambient (..., 4) array by a broadcastable scalar field."""
    return np.asarray(s)[..., None] * vec


# ===========================================================================
# directrix curves on S^2(1)
# ===========================================================================

class CurveData(NamedTuple):
    """Directrix position/derivative vectors and curvature jet at v.

    All ambient entries are (..., 4) arrays with vanishing e4 component:
    l and its first three v-derivatives, plus the unit normal n = l x l'
    and its derivative n' = l x l''.
    """

    l: np.ndarray
    t: np.ndarray
    tp: np.ndarray
    tpp: np.ndarray
    n: np.ndarray
    nprime: np.ndarray
    kappa: Jet3


@dataclass(frozen=True)
class SphericalCurve:
    """Arc-length curve on the unit 2-sphere with order-3 component jets.

    ``components(v)`` returns the three coordinate functions of l(v) as
    jets; ``curvature`` is the geodesic curvature kappa(v) = <t', n>
    with n = l x t (right-handed Euclidean cross product), which fixes
    kappa's sign.
    """

    components: Callable[[np.ndarray], tuple[Jet3, Jet3, Jet3]]
    curvature: SmoothFn1
    domain: Interval = field(default_factory=Interval)
    name: str = ""

    def __post_init__(self):
        self._validate()

    def data(self, v) -> CurveData:
        v = np.asarray(v, dtype=float)
        jx, jy, jz = self.components(v)
        l3 = np.stack(np.broadcast_arrays(jx.f, jy.f, jz.f), axis=-1)
        t3 = np.stack(np.broadcast_arrays(jx.d1, jy.d1, jz.d1), axis=-1)
        tp3 = np.stack(np.broadcast_arrays(jx.d2, jy.d2, jz.d2), axis=-1)
        tpp3 = np.stack(np.broadcast_arrays(jx.d3, jy.d3, jz.d3), axis=-1)
        n3 = np.cross(l3, t3)
        np3 = np.cross(l3, tp3)
        return CurveData(l=_pad4(l3), t=_pad4(t3), tp=_pad4(tp3),
                         tpp=_pad4(tpp3), n=_pad4(n3), nprime=_pad4(np3),
                         kappa=self.curvature(v))

    def _validate(self, n_samples: int = 9):
        vs = self.domain.sample(n_samples)
        d = self.data(vs)
        l3, t3, tp3, n3 = d.l[..., :3], d.t[..., :3], d.tp[..., :3], d.n[..., :3]
        unit_l = np.max(np.abs(np.sum(l3 * l3, axis=-1) - 1.0))
        unit_t = np.max(np.abs(np.sum(t3 * t3, axis=-1) - 1.0))
        if max(unit_l, unit_t) > SPHERE_TOL:
            raise ValueError(
                f"curve {self.name!r} violates sphere/arc-length normalization "
                f"(deviation {max(unit_l, unit_t):.3e})")
        # closure of the moving frame: t' = kappa n - l and n' = -kappa t
        kap = d.kappa.f
        c1 = np.max(np.abs(tp3 - (kap[..., None] * n3 - l3)))
        c2 = np.max(np.abs(d.nprime[..., :3] + kap[..., None] * t3))
        kdev = np.max(np.abs(np.sum(tp3 * n3, axis=-1) - kap))
        if max(c1, c2, kdev) > FRENET_TOL:
            raise ValueError(
                f"curve {self.name!r} breaks moving-frame closure "
                f"(deviation {max(c1, c2, kdev):.3e})")
        # independent cross-check: component jets against central differences
        h = 1e-3
        for v in vs[1:-1]:
            jets = self.components(np.asarray(v))
            for k in range(3):
                comp = lambda w, k=k: np.asarray(
                    self.components(np.asarray(w))[k].f)
                fd1 = (comp(v + h) - comp(v - h)) / (2 * h)
                if abs(fd1 - jets[k].d1) / (1 + abs(jets[k].d1)) > 1e-5:
                    raise ValueError(
                        f"curve {self.name!r}: jet d1 disagrees with finite "
                        f"differences at v={v}")


def great_circle(domain: Interval = Interval()) -> SphericalCurve:
    """Equatorial great circle; geodesic curvature identically zero."""
    return latitude_circle(0.0, domain=domain, name="great-circle")


def latitude_circle(kappa0: float, domain: Interval = Interval(),
                    name: str = "") -> SphericalCurve:
    """Arc-length circle on S^2(1) with constant geodesic curvature kappa0.

    Realized as the colatitude circle with cos(alpha) = kappa0 / sqrt(1 +
    kappa0^2); kappa0 = 0 degenerates to the great circle.  The curvature
    value is cross-checked against the frame closure at load.
    """
    r = 1.0 / np.hypot(1.0, kappa0)    # sin(alpha), circle radius
    zc = kappa0 / np.hypot(1.0, kappa0)  # cos(alpha), fixed height

    def components(v):
        w = Jet3.variable(v) * (1.0 / r)
        cw, sw = w.cos(), w.sin()
        return (r * cw, r * sw,
                Jet3(zc + 0.0 * np.asarray(v, dtype=float), 0.0, 0.0, 0.0))

    return SphericalCurve(components=components,
                          curvature=constant_fn(float(kappa0), domain),
                          domain=domain,
                          name=name or f"latitude(kappa={kappa0})")


def curve_from_curvature(kappa: SmoothFn1, v_range: tuple[float, float],
                         h: float = 1e-3, name: str = "") -> SphericalCurve:
    """Spherical curve with prescribed geodesic curvature kappa(v).

    Integrates the moving-frame system l' = t, t' = kappa n - l,
    n' = -kappa t with the same fixed-step scheme used for profiles;
    component jets then come from the closure relations, not from
    differencing.
    """
    v0, v1 = float(v_range[0]), float(v_range[1])
    n_steps = max(int(round((v1 - v0) / h)), 1)
    state = np.zeros((n_steps + 1, 9))
    state[0] = np.array([1, 0, 0, 0, 1, 0, 0, 0, 1], dtype=float)

    def rhs(y, v):
        l, t, n = y[..., 0:3], y[..., 3:6], y[..., 6:9]
        k = kappa.eval_jet(v).f
        k = np.asarray(k)[..., None]
        return np.concatenate([t, k * n - l, -k * t], axis=-1)

    y = state[0]
    for i in range(n_steps):
        v = v0 + i * h
        k1 = rhs(y, v)
        k2 = rhs(y + 0.5 * h * k1, v + 0.5 * h)
        k3 = rhs(y + 0.5 * h * k2, v + 0.5 * h)
        k4 = rhs(y + h * k3, v + h)
        y = y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
        state[i + 1] = y

    def state_at(v):
        v = np.asarray(v, dtype=float)
        idx = np.clip(((v - v0) / h).astype(int), 0, n_steps)
        delta = (v - (v0 + idx * h))[..., None]
        y = state[idx]
        vv = v0 + idx * h
        k1 = rhs(y, vv)
        k2 = rhs(y + 0.5 * delta * k1, vv + 0.5 * delta[..., 0])
        k3 = rhs(y + 0.5 * delta * k2, vv + 0.5 * delta[..., 0])
        k4 = rhs(y + delta * k3, vv + delta[..., 0])
        return y + delta * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0

    def components(v):
        v = np.asarray(v, dtype=float)
        y = state_at(v)
        l, t, n = y[..., 0:3], y[..., 3:6], y[..., 6:9]
        kj = kappa.eval_jet(v)
        k, kp = np.asarray(kj.f)[..., None], np.asarray(kj.d1)[..., None]
        d2 = k * n - l                       # t'
        d3 = kp * n - (k * k + 1.0) * t      # t'' via n' = -kappa t
        out = []
        for c in range(3):
            out.append(Jet3(l[..., c] if v.ndim else float(l[..., c]),
                            t[..., c] if v.ndim else float(t[..., c]),
                            d2[..., c] if v.ndim else float(d2[..., c]),
                            d3[..., c] if v.ndim else float(d3[..., c])))
        return tuple(out)

    return SphericalCurve(components=components, curvature=kappa,
                          domain=Interval(v0, v1),
                          name=name or f"curvature-driven({kappa.name})")


# ===========================================================================
# profile (meridian) curves
# ===========================================================================

class ProfileJets(NamedTuple):
    """f and g with first three u-derivatives at a point (or grid)."""

    f: Jet3
    g: Jet3


@dataclass(frozen=True)
class MeridianProfile:
    """Profile curve (f(u), g(u)) with f > 0 and f'^2 - g'^2 = -1.

    ``sign_g`` records which branch g' = sign * sqrt(f'^2 + 1) the curve
    uses.  ``ode`` is set when f came from integrating f' = phi(f).
    """

    f_eval: Callable[[np.ndarray], Jet3]
    g_eval: Callable[[np.ndarray], Jet3]
    domain: Interval
    sign_g: int = 1
    name: str = ""
    ode: OdeSolution | None = None

    def __post_init__(self):
        us = self.domain.sample(17)
        fj, gj = self.f_eval(us), self.g_eval(us)
        if np.any(fj.f <= 0):
            raise NonpositiveProfile(
                f"profile {self.name!r}: f <= 0 inside the domain")
        dev = np.max(np.abs(fj.d1 ** 2 - gj.d1 ** 2 + 1.0))
        if dev > PROFILE_TOL:
            raise NonpositiveProfile(
                f"profile {self.name!r}: f'^2 - g'^2 = -1 violated "
                f"(deviation {dev:.3e})")

    def jets(self, u) -> ProfileJets:
        u = np.asarray(u, dtype=float)
        if not self.domain.contains(u):
            raise OutOfDomain(
                f"u={u} outside profile domain "
                f"({self.domain.lo}, {self.domain.hi})")
        return ProfileJets(self.f_eval(u), self.g_eval(u))

    @property
    def stopped_reason(self) -> str | None:
        return self.ode.stopped_reason if self.ode else None


def g_jet_from_f(fj: Jet3, sign_g: int, g_value) -> Jet3:
    """g-jet from the Lorentz normalization g' = sign * sqrt(f'^2 + 1)."""
    fd, fdd, fddd = fj.d1, fj.d2, fj.d3
    root = np.sqrt(fd ** 2 + 1.0)
    gd = sign_g * root
    gdd = sign_g * fd * fdd / root
    gddd = sign_g * ((fdd ** 2 + fd * fddd) / root - fd ** 2 * fdd ** 2 / root ** 3)
    return Jet3(g_value, gd, gdd, gddd)


def profile_from_f_jets(f_eval: Callable[[np.ndarray], Jet3],
                        domain: Interval, sign_g: int = 1, g_offset: float = 0.0,
                        name: str = "", ode: OdeSolution | None = None,
                        quad_tol: float = 1e-12) -> MeridianProfile:
    """Profile with g obtained by quadrature of sqrt(f'^2 + 1).

    The antiderivative is anchored at the left end of the domain (or at
    u = 0 when unbounded), so g(anchor) = g_offset.
    """
    anchor = domain.lo if np.isfinite(domain.lo) else 0.0

    def gd_jet(u):
        g = g_jet_from_f(f_eval(np.asarray(u, dtype=float)), sign_g, 0.0)
        return Jet3(g.d1, g.d2, g.d3, 0.0)

    gd_fn = SmoothFn1(gd_jet, Interval(domain.lo - 1e-6, domain.hi + 1e-6),
                      name="g'")
    cumulative = CumulativeQuadrature(gd_fn, anchor, tol=quad_tol)

    def g_eval(u):
        u = np.asarray(u, dtype=float)
        if u.ndim == 0:
            gv = g_offset + cumulative(float(u))
        else:
            gv = g_offset + np.array([cumulative(x) for x in u.ravel()]
                                     ).reshape(u.shape)
        return g_jet_from_f(f_eval(u), sign_g, gv)

    return MeridianProfile(f_eval=f_eval, g_eval=g_eval, domain=domain,
                           sign_g=sign_g, name=name, ode=ode)


# ===========================================================================
# the surface and its pointwise records
# ===========================================================================

@dataclass(frozen=True)
class SurfaceJet:
    """Ambient position and partial derivatives of z at one point."""

    z: Vec4M
    z_u: Vec4M
    z_v: Vec4M
    z_uu: Vec4M
    z_uv: Vec4M
    z_vv: Vec4M
    z_uuu: Vec4M
    z_uuv: Vec4M
    z_uvv: Vec4M
    z_vvv: Vec4M


@dataclass(frozen=True)
class FrameAtPoint:
    """Orthonormal frame X, Y (tangent) and N1, N2 (normal).

    Gram matrix is diag(-1, 1, 1, 1): X is unit timelike.
    """

    X: Vec4M
    Y: Vec4M
    N1: Vec4M
    N2: Vec4M

    def labeled(self):
        return [("X", self.X), ("Y", self.Y), ("N1", self.N1), ("N2", self.N2)]


class GaussCurvature(NamedTuple):
    """Gauss curvature by two routes that must agree."""

    frame_route: float      # defining formula through the second fundamental form
    profile_route: float    # closed form f''/f


class MeanCurvature(NamedTuple):
    """Mean curvature components along (N1, N2) by two routes."""

    h1: float
    h2: float
    h1_jet: float
    h2_jet: float


@dataclass(frozen=True)
class InvariantReport:
    """Pointwise first-form data, curvatures, and causal classification."""

    E: float
    F: float
    G: float
    K: float
    K_perp: float
    h1: float
    h2: float
    H_norm_sq: float
    K_minus_H2: float
    epsilon: int
    causal_z_u: CausalClass
    causal_z_v: CausalClass


@dataclass(frozen=True)
class MeridianSurface:
    """The immersion z(u, v) = f(u) l(v) + g(u) e4."""

    profile: MeridianProfile
    directrix: SphericalCurve
    name: str = ""

    def __post_init__(self):
        us = self.profile.domain.sample(5)
        vs = self.directrix.domain.sample(5)
        d = self._raw(us[:, None], vs[None, :])
        e_dev = np.max(np.abs(inner_arrays(d["z_u"], d["z_u"]) + 1.0))
        g_dev = np.max(np.abs(inner_arrays(d["z_v"], d["z_v"]) - d["f"].f ** 2))
        if max(e_dev, g_dev) > 1e-8:
            raise ValueError(
                f"surface {self.name!r}: tangent normalization failed "
                f"(deviations {e_dev:.3e}, {g_dev:.3e})")

    # -- raw vectorized evaluation ----------------------------------------
    def _raw(self, u, v) -> dict:
        """All ambient jets at broadcastable (u, v); keys are plain arrays."""
        fj, gj = self.profile.jets(u)
        cd = self.directrix.data(v)
        e4 = _E4
        out = {
            "f": fj, "g": gj, "curve": cd,
            "z": _scale(fj.f, cd.l) + _scale(gj.f, e4),
            "z_u": _scale(fj.d1, cd.l) + _scale(gj.d1, e4),
            "z_v": _scale(fj.f, cd.t),
            "z_uu": _scale(fj.d2, cd.l) + _scale(gj.d2, e4),
            "z_uv": _scale(fj.d1, cd.t),
            "z_vv": _scale(fj.f, cd.tp),
            "z_uuu": _scale(fj.d3, cd.l) + _scale(gj.d3, e4),
            "z_uuv": _scale(fj.d2, cd.t),
            "z_uvv": _scale(fj.d1, cd.tp),
            "z_vvv": _scale(fj.f, cd.tpp),
        }
        out["N1"] = cd.n
        out["N2"] = _scale(gj.d1, cd.l) + _scale(fj.d1, e4)
        out["X"] = out["z_u"]
        out["Y"] = cd.t
        return out

    # -- spec operations ---------------------------------------------------
    def evaluate(self, u: float, v: float) -> SurfaceJet:
        d = self._raw(u, v)
        pick = lambda k: Vec4M.from_array(d[k])
        return SurfaceJet(z=pick("z"), z_u=pick("z_u"), z_v=pick("z_v"),
                          z_uu=pick("z_uu"), z_uv=pick("z_uv"),
                          z_vv=pick("z_vv"), z_uuu=pick("z_uuu"),
                          z_uuv=pick("z_uuv"), z_uvv=pick("z_uvv"),
                          z_vvv=pick("z_vvv"))

    def frame(self, u: float, v: float) -> FrameAtPoint:
        d = self._raw(u, v)
        return FrameAtPoint(X=Vec4M.from_array(d["X"]),
                            Y=Vec4M.from_array(d["Y"]),
                            N1=Vec4M.from_array(d["N1"]),
                            N2=Vec4M.from_array(d["N2"]))

    def first_form(self, u, v) -> tuple:
        """(E, F, G) measured from the ambient jets, not from closed forms."""
        d = self._raw(u, v)
        E = inner_arrays(d["z_u"], d["z_u"])
        F = inner_arrays(d["z_u"], d["z_v"])
        G = inner_arrays(d["z_v"], d["z_v"])
        return E, F, G

    def gauss_curvature(self, u, v) -> GaussCurvature:
        d = self._raw(u, v)
        return GaussCurvature(frame_route=_gauss_frame_route(d),
                              profile_route=d["f"].d2 / d["f"].f)

    def normal_curvature(self, u, v):
        """Curvature of the normal connection via its coefficient field.

        With b_u = <d_u N1, N2> and b_v = <d_v N1, N2>, the curvature
        operator on coordinate fields has the single component
        d_u b_v - d_v b_u, and the invariant normalizes by the frame:
        K_perp = -(d_u b_v - d_v b_u) / f.
        """
        d = self._raw(u, v)
        fj, gj, cd = d["f"], d["g"], d["curve"]
        dN1_u = np.zeros_like(d["N1"])
        dN1_v = cd.nprime
        dN1_uv = np.zeros_like(d["N1"])
        dN2_u = _scale(gj.d2, cd.l) + _scale(fj.d2, _E4)
        dN2_v = _scale(gj.d1, cd.t)
        du_bv = inner_arrays(dN1_uv, d["N2"]) + inner_arrays(dN1_v, dN2_u)
        dv_bu = inner_arrays(dN1_uv, d["N2"]) + inner_arrays(dN1_u, dN2_v)
        return -(du_bv - dv_bu) / fj.f

    def mean_curvature(self, u, v) -> MeanCurvature:
        d = self._raw(u, v)
        h1c, h2c = _h_closed(d)
        h1j, h2j = _h_jet_route(d)
        return MeanCurvature(h1=h1c, h2=h2c, h1_jet=h1j, h2_jet=h2j)

    def normal_derivative_H(self, u, v) -> tuple:
        """(D_X H, D_Y H), each as (N1, N2) components.

        Scalar derivatives are propagated analytically through the
        order-3 profile jets; the normal-connection coefficients are
        measured from the frame fields (they vanish identically for
        this surface class, but enter the formula).
        """
        d = self._raw(u, v)
        h1u, h2u = _h_dual(d, seed="u")
        h1v, h2v = _h_dual(d, seed="v")
        b_u, b_v = _connection_coefficients(d)
        f = d["f"].f
        dx = (h1u.d1 - h2u.f * b_u, h2u.d1 + h1u.f * b_u)
        dy = ((h1v.d1 - h2v.f * b_v) / f, (h2v.d1 + h1v.f * b_v) / f)
        return dx, dy

    def normal_derivative_H0(self, u, v, tol: float = MINIMAL_H_TOL) -> tuple:
        """(D_X H0, D_Y H0) for the unit field H0 = H / ||H||."""
        d = self._raw(u, v)
        h1, h2 = _h_closed(d)
        if np.any(h1 ** 2 + h2 ** 2 <= tol):
            raise MinimalPoint("H vanishes (to tolerance); H0 undefined")
        au, bu = _h0_dual(d, seed="u")
        av, bv = _h0_dual(d, seed="v")
        b_u, b_v = _connection_coefficients(d)
        f = d["f"].f
        dx = (au.d1 - bu.f * b_u, bu.d1 + au.f * b_u)
        dy = ((av.d1 - bv.f * b_v) / f, (bv.d1 + av.f * b_v) / f)
        return dx, dy

    def invariant_report(self, u: float, v: float) -> InvariantReport:
        E, F, G = self.first_form(u, v)
        K = self.gauss_curvature(u, v)
        kperp = self.normal_curvature(u, v)
        mc = self.mean_curvature(u, v)
        h_sq = mc.h1 ** 2 + mc.h2 ** 2
        k_minus = float(K.frame_route - h_sq)
        frame = self.frame(u, v)
        return InvariantReport(
            E=float(E), F=float(F), G=float(G),
            K=float(K.frame_route), K_perp=float(kperp),
            h1=float(mc.h1), h2=float(mc.h2), H_norm_sq=float(h_sq),
            K_minus_H2=k_minus, epsilon=1 if k_minus > 0 else -1,
            causal_z_u=causal_character(frame.X),
            causal_z_v=causal_character(self.evaluate(u, v).z_v))

    # -- frame-field derivatives (used for hyperplane witnesses) ----------
    def normal_field_derivatives(self, u, v, combo: tuple = (1.0, 0.0)):
        """Ambient partials of the field a*N1 + b*N2 for constants (a, b).

        Returns (d_u field, d_v field) as (..., 4) arrays; a constant
        field witnesses that the surface lies in a hyperplane.
        """
        d = self._raw(u, v)
        a, b = combo
        fj, gj, cd = d["f"], d["g"], d["curve"]
        dN1_u = np.zeros_like(d["N1"])
        dN1_v = cd.nprime
        dN2_u = _scale(gj.d2, cd.l) + _scale(fj.d2, _E4)
        dN2_v = _scale(gj.d1, cd.t)
        return a * dN1_u + b * dN2_u, a * dN1_v + b * dN2_v


# ---------------------------------------------------------------------------
# shared numerics on raw point data
# ---------------------------------------------------------------------------

def _gauss_frame_route(d) -> np.ndarray:
    """K from the defining formula via the frame and second derivatives."""
    f = d["f"].f
    X, Y, N1, N2 = d["X"], d["Y"], d["N1"], d["N2"]

    def normal_part(w):
        return (inner_arrays(w, N1)[..., None] * N1
                + inner_arrays(w, N2)[..., None] * N2)

    s_xx = normal_part(d["z_uu"])
    s_xy = normal_part(_scale(1.0 / f, d["z_uv"]))
    s_yy = normal_part(_scale(1.0 / f ** 2, d["z_vv"]))
    num = inner_arrays(s_xx, s_yy) - inner_arrays(s_xy, s_xy)
    den = (inner_arrays(X, X) * inner_arrays(Y, Y)
           - inner_arrays(X, Y) ** 2)
    return num / den


def _h_closed(d):
    """H components along (N1, N2): closed form in the profile jets."""
    f, fd, fdd = d["f"].f, d["f"].d1, d["f"].d2
    gd = d["g"].d1
    kap = d["curve"].kappa.f
    h1 = kap / (2.0 * f)
    h2 = -(1.0 + fd ** 2 + f * fdd) / (2.0 * f * gd)
    return h1, h2


def _h_jet_route(d):
    """H through the measured first form and normal projections."""
    E = inner_arrays(d["z_u"], d["z_u"])
    F = inner_arrays(d["z_u"], d["z_v"])
    G = inner_arrays(d["z_v"], d["z_v"])
    det = E * G - F ** 2
    out = []
    for N in (d["N1"], d["N2"]):
        s_uu = inner_arrays(d["z_uu"], N)
        s_uv = inner_arrays(d["z_uv"], N)
        s_vv = inner_arrays(d["z_vv"], N)
        out.append((G * s_uu - 2.0 * F * s_uv + E * s_vv) / (2.0 * det))
    return out[0], out[1]


def _profile_duals(d, seed: str):
    """Dual seeds for partial derivatives of profile/curvature scalars.

    seed="u": f-quantities carry their u-derivative, kappa is constant.
    seed="v": f-quantities are constants, kappa carries kappa'.
    """
    fj, gj, kj = d["f"], d["g"], d["curve"].kappa
    if seed == "u":
        return (Dual(fj.f, fj.d1), Dual(fj.d1, fj.d2), Dual(fj.d2, fj.d3),
                Dual(gj.d1, gj.d2), Dual(kj.f, 0.0))
    return (Dual(fj.f, 0.0), Dual(fj.d1, 0.0), Dual(fj.d2, 0.0),
            Dual(gj.d1, 0.0), Dual(kj.f, kj.d1))


def _h_dual(d, seed: str):
    f, fd, fdd, gd, kap = _profile_duals(d, seed)
    h1 = kap / (2.0 * f)
    h2 = -(1.0 + fd * fd + f * fdd) / (2.0 * f * gd)
    return h1, h2


def _h0_dual(d, seed: str):
    h1, h2 = _h_dual(d, seed)
    norm = (h1 * h1 + h2 * h2).sqrt()
    return h1 / norm, h2 / norm


def _connection_coefficients(d):
    """(b_u, b_v) with b_w = <d_w N1, N2>; zero for this surface class."""
    cd, fj, gj = d["curve"], d["f"], d["g"]
    dN1_u = np.zeros_like(d["N1"])
    dN1_v = cd.nprime
    b_u = inner_arrays(dN1_u, d["N2"])
    b_v = inner_arrays(dN1_v, d["N2"])
    return b_u, b_v
