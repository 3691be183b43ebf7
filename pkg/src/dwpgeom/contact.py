"""Almost contact metric structures and generalized (kappa, mu)-space forms.

Tensors act on coordinate column vectors: ``(phi X)^i = phi[i, j] X^j``,
``eta(X) = eta[i] X^i`` and ``g(X, Y) = X @ g @ Y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Callable, Optional

import numpy as np

from . import jets
from .config import DEFAULT
from .errors import KappaOne, UnknownTensorName
from .geometry import CurvatureTensorAt, MetricField, Point, as_coords, christoffel

DETA_CONVENTION = "d_eta(X,Y) = 1/2 (X eta(Y) - Y eta(X) - eta([X,Y]))"


@dataclass(frozen=True)
class PointwiseStructure:
    """Values of (g, phi, xi, eta, h) at a single point."""

    g: np.ndarray
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    h: np.ndarray

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def inner(self, X, Y) -> float:
        return float(np.asarray(X) @ self.g @ np.asarray(Y))


@dataclass(frozen=True)
class AlmostContactStructure:
    """Fields phi, xi, eta and a metric on a (2m+1)-dimensional chart.

    ``phi``, ``xi`` and ``eta`` are jet-aware functions of the coordinates
    returning a matrix, a vector and a covector.  ``h`` optionally supplies the
    tensor h analytically; otherwise it is computed from the Lie derivative.
    """

    dim: int
    phi: Callable
    xi: Callable
    eta: Callable
    metric: MetricField
    h: Optional[Callable] = None

    def fields(self, p):
        x = as_coords(p)
        phi, dphi, _ = jets.jet_eval(self.phi, x)
        xi, dxi, _ = jets.jet_eval(self.xi, x)
        eta, deta, _ = jets.jet_eval(self.eta, x)
        return (phi, dphi), (xi, dxi), (eta, deta)

    def at(self, p) -> PointwiseStructure:
        x = as_coords(p)
        (phi, dphi), (xi, dxi), (eta, _) = self.fields(x)
        if self.h is not None:
            h = np.array([[float(v) for v in row] for row in self.h([float(c) for c in x])])
        else:
            h = _half_lie(phi, dphi, xi, dxi)
        return PointwiseStructure(self.metric(x), phi, xi, eta, h)


def _half_lie(phi, dphi, xi, dxi):
    # (L_xi phi)^i_j = xi^k d_k phi^i_j - phi^k_j d_k xi^i + phi^i_k d_j xi^k
    lie = (
        np.einsum("k,ijk->ij", xi, dphi)
        - np.einsum("kj,ik->ij", phi, dxi)
        + np.einsum("ik,kj->ij", phi, dxi)
    )
    return 0.5 * lie


def lie_derivative_h(s: AlmostContactStructure, p) -> np.ndarray:
    """h = 1/2 L_xi phi at p (always from the jets, ignoring any analytic h)."""
    (phi, dphi), (xi, dxi), _ = s.fields(p)
    return _half_lie(phi, dphi, xi, dxi)


@dataclass
class AxiomReport:
    residuals: dict
    contact_residual: float
    passed: bool
    tolerance: float


def axiom_residuals(ps: PointwiseStructure) -> dict:
    n = ps.dim
    g, phi, xi, eta = ps.g, ps.phi, ps.xi, ps.eta
    eye = np.eye(n)
    return {
        "phi_squared": float(np.abs(phi @ phi - (-eye + np.outer(xi, eta))).max()),
        "eta_xi": float(abs(eta @ xi - 1.0)),
        "phi_xi": float(np.abs(phi @ xi).max()),
        "eta_phi": float(np.abs(eta @ phi).max()),
        "metric_phi": float(np.abs(phi.T @ g @ phi - (g - np.outer(eta, eta))).max()),
        "metric_xi": float(np.abs(g @ xi - eta).max()),
    }


def contact_residual(s: AlmostContactStructure, p) -> float:
    """max |d eta - Phi| with ``Phi(X, Y) = g(X, phi Y)`` and the 1/2 exterior-derivative convention."""
    (phi, _), _, (_, deta) = s.fields(p)
    g = s.metric(p)
    d_eta = 0.5 * (deta.T - deta)  # d_eta[i, j] = 1/2 (d_i eta_j - d_j eta_i)
    return float(np.abs(d_eta - g @ phi).max())


def verify_almost_contact(s: AlmostContactStructure, p, tol: float = DEFAULT.axioms) -> AxiomReport:
    res = axiom_residuals(s.at(p))
    return AxiomReport(res, contact_residual(s, p), all(v <= tol for v in res.values()), tol)


def fundamental_form(ps: PointwiseStructure) -> np.ndarray:
    """Phi[i, j] = g(d_i, phi d_j)."""
    return ps.g @ ps.phi


# curvature-like basis tensors --------------------------------------------

def _r1(ps, X, Y, Z):
    return ps.inner(Y, Z) * X - ps.inner(X, Z) * Y


def _r2(ps, X, Y, Z):
    phi = ps.phi
    return ps.inner(X, phi @ Z) * (phi @ Y) - ps.inner(Y, phi @ Z) * (phi @ X) + 2 * ps.inner(X, phi @ Y) * (phi @ Z)


def _r3(ps, X, Y, Z):
    eX, eY, eZ = ps.eta @ X, ps.eta @ Y, ps.eta @ Z
    return eX * eZ * Y - eY * eZ * X + ps.inner(X, Z) * eY * ps.xi - ps.inner(Y, Z) * eX * ps.xi


def _r4(ps, X, Y, Z):
    h = ps.h
    return ps.inner(Y, Z) * (h @ X) - ps.inner(X, Z) * (h @ Y) + ps.inner(h @ Y, Z) * X - ps.inner(h @ X, Z) * Y


def _r51(ps, X, Y, Z):
    h = ps.h
    return ps.inner(h @ Y, Z) * (h @ X) - ps.inner(h @ X, Z) * (h @ Y)


def _r52(ps, X, Y, Z):
    ph = ps.phi @ ps.h
    return ps.inner(ph @ Y, Z) * (ph @ X) - ps.inner(ph @ X, Z) * (ph @ Y)


def _r5(ps, X, Y, Z):
    h = ps.h
    ph = ps.phi @ h
    return (
        ps.inner(h @ Y, Z) * (h @ X)
        - ps.inner(h @ X, Z) * (h @ Y)
        + ps.inner(ph @ X, Z) * (ph @ Y)
        - ps.inner(ph @ Y, Z) * (ph @ X)
    )


def _r6(ps, X, Y, Z):
    h = ps.h
    eX, eY, eZ = ps.eta @ X, ps.eta @ Y, ps.eta @ Z
    return eX * eZ * (h @ Y) - eY * eZ * (h @ X) + ps.inner(h @ X, Z) * eY * ps.xi - ps.inner(h @ Y, Z) * eX * ps.xi


BASIS_TENSORS = {"R1": _r1, "R2": _r2, "R3": _r3, "R4": _r4, "R5": _r5, "R51": _r51, "R52": _r52, "R6": _r6}


def basis_tensor_eval(name: str, ps: PointwiseStructure, X, Y, Z) -> np.ndarray:
    try:
        fn = BASIS_TENSORS[name]
    except KeyError:
        raise UnknownTensorName(f"unknown tensor {name!r}; expected one of {sorted(BASIS_TENSORS)}") from None
    X, Y, Z = (np.asarray(v, dtype=float) for v in (X, Y, Z))
    return fn(ps, X, Y, Z)


# coefficient sets -----------------------------------------------------------

DIVIDED_KEYS = ("f1", "f2", "f3", "f4", "f51", "f52", "f6")


@dataclass(frozen=True)
class Coefficients:
    """f1..f6 (undivided) or f1, f2, f3, f4, f5,1, f5,2, f6 (divided).

    Entries are numbers (``Fraction`` keeps presets exact) or callables of
    the ambient coordinates.
    """

    f1: object = 0
    f2: object = 0
    f3: object = 0
    f4: object = 0
    f5: object = None
    f51: object = None
    f52: object = None
    f6: object = 0
    divided: bool = False

    def __post_init__(self):
        if self.divided:
            if self.f5 is not None:
                raise ValueError("a divided coefficient set takes f51 and f52, not f5")
            object.__setattr__(self, "f51", 0 if self.f51 is None else self.f51)
            object.__setattr__(self, "f52", 0 if self.f52 is None else self.f52)
        else:
            if self.f51 is not None or self.f52 is not None:
                raise ValueError("an undivided coefficient set takes f5; pass divided=True for f51/f52")
            object.__setattr__(self, "f5", 0 if self.f5 is None else self.f5)

    def divided_view(self) -> dict:
        """The seven divided coefficients; an undivided f5 becomes (f5, -f5)."""
        if self.divided:
            f51, f52 = self.f51, self.f52
        else:
            f51, f52 = self.f5, _negate(self.f5)
        return dict(zip(DIVIDED_KEYS, (self.f1, self.f2, self.f3, self.f4, f51, f52, self.f6)))

    def values(self, p=None) -> dict:
        """Divided coefficients as floats at ambient point ``p``."""
        return {k: _value(v, p) for k, v in self.divided_view().items()}

    def as_tuple(self) -> tuple:
        if self.divided:
            return tuple(self.divided_view().values())
        return (self.f1, self.f2, self.f3, self.f4, self.f5, self.f6)


def _negate(v):
    if callable(v):
        return lambda x: -v(x)
    return -v


def _value(v, p) -> float:
    if callable(v):
        return float(v([float(c) for c in as_coords(p)]))
    return float(v)


@dataclass(frozen=True)
class CoefficientPreset:
    kind: str
    params: dict = field(default_factory=dict)


PRESET_KINDS = ("km_space_form", "generalized_sasakian", "non_sasakian_km_divided")


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(x).limit_denominator(10**12) if isinstance(x, Real) else Fraction(x)


def preset_coefficients(preset: CoefficientPreset) -> Coefficients:
    p = preset.params
    if preset.kind == "km_space_form":
        c, kappa, mu = _q(p["c"]), _q(p["kappa"]), _q(p["mu"])
        return Coefficients(
            f1=(c + 3) / 4, f2=(c - 1) / 4, f3=(c + 3) / 4 - kappa, f4=Fraction(1), f5=Fraction(1, 2), f6=1 - mu
        )
    if preset.kind == "generalized_sasakian":
        f = {k: p[k] if callable(p[k]) else _q(p[k]) for k in ("f1", "f2", "f3")}
        return Coefficients(**f, f4=0, f5=0, f6=0)
    if preset.kind == "non_sasakian_km_divided":
        kappa, mu = _q(p["kappa"]), _q(p["mu"])
        if kappa == 1:
            raise KappaOne("the non-Sasakian divided preset needs kappa != 1")
        return Coefficients(
            f1=(2 - mu) / 2,
            f2=-mu / 2,
            f3=(2 - mu - 2 * kappa) / 2,
            f4=Fraction(1),
            f51=(2 - mu) / (2 * (1 - kappa)),
            f52=(2 * kappa - mu) / (2 * (1 - kappa)),
            f6=1 - mu,
            divided=True,
        )
    raise ValueError(f"unknown preset kind {preset.kind!r}; expected one of {PRESET_KINDS}")


# generalized (kappa, mu)-space forms ----------------------------------------

@dataclass(frozen=True)
class GeneralizedKMSpaceForm:
    structure: AlmostContactStructure
    coefficients: Coefficients

    @property
    def metric(self) -> MetricField:
        return self.structure.metric


def assemble_pointwise(coeffs: dict, ps: PointwiseStructure, X, Y, Z) -> np.ndarray:
    """sum f_a R_a(X, Y)Z over the divided basis, with ``coeffs`` from :meth:`Coefficients.values`."""
    X, Y, Z = (np.asarray(v, dtype=float) for v in (X, Y, Z))
    out = np.zeros(ps.dim)
    for key, name in zip(DIVIDED_KEYS, ("R1", "R2", "R3", "R4", "R51", "R52", "R6")):
        f = coeffs[key]
        if f != 0.0:
            out += f * BASIS_TENSORS[name](ps, X, Y, Z)
    return out


def assemble_curvature(form: GeneralizedKMSpaceForm, p, X, Y, Z) -> np.ndarray:
    return assemble_pointwise(form.coefficients.values(p), form.structure.at(p), X, Y, Z)


def assembled_tensor(form: GeneralizedKMSpaceForm, p) -> CurvatureTensorAt:
    """The assembled curvature as a full tensor in the engine's conventions."""
    ps = form.structure.at(p)
    return pointwise_tensor(form.coefficients.values(p), ps, Point(as_coords(p)))


def pointwise_tensor(coeffs: dict, ps: PointwiseStructure, point: Point) -> CurvatureTensorAt:
    n = ps.dim
    eye = np.eye(n)
    up = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                up[:, i, j, k] = assemble_pointwise(coeffs, ps, eye[i], eye[j], eye[k])
    down = np.einsum("km,mijl->ijkl", ps.g, up)
    return CurvatureTensorAt(point, up, down, ps.g)


def xi_curvature_prefactors(coeffs: dict) -> tuple[float, float]:
    """(f1 - f3, f4 - f6): the (kappa, mu) read off from R(X, Y)xi."""
    return coeffs["f1"] - coeffs["f3"], coeffs["f4"] - coeffs["f6"]


def xi_curvature_residual(coeffs: dict, ps: PointwiseStructure, X, Y) -> float:
    """|R(X,Y)xi - kappa (eta(Y)X - eta(X)Y) - mu (eta(Y)hX - eta(X)hY)| for the assembled R."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    kappa, mu = xi_curvature_prefactors(coeffs)
    eX, eY = ps.eta @ X, ps.eta @ Y
    expected = kappa * (eY * X - eX * Y) + mu * (eY * (ps.h @ X) - eX * (ps.h @ Y))
    return float(np.abs(assemble_pointwise(coeffs, ps, X, Y, ps.xi) - expected).max())


# Sasakian checks ------------------------------------------------------------

def nabla_phi(s: AlmostContactStructure, p) -> np.ndarray:
    """``D[i, j, k] = ((nabla_{d_k} phi))^i_j``."""
    (phi, dphi), _, _ = s.fields(p)
    gam = christoffel(s.metric, p)
    return dphi + np.einsum("ikl,lj->ijk", gam, phi) - np.einsum("il,lkj->ijk", phi, gam)


def nabla_xi(s: AlmostContactStructure, p) -> np.ndarray:
    """``M[i, k] = (nabla_{d_k} xi)^i``."""
    _, (xi, dxi), _ = s.fields(p)
    gam = christoffel(s.metric, p)
    return dxi + np.einsum("ikl,l->ik", gam, xi)


def sasakian_residual(s: AlmostContactStructure, p, X, Y) -> np.ndarray:
    """(nabla_X phi)Y - g(X, Y) xi + eta(Y) X; zero iff the Sasakian condition holds for (X, Y)."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    ps = s.at(p)
    D = nabla_phi(s, p)
    return np.einsum("ijk,k,j->i", D, X, Y) - ps.inner(X, Y) * ps.xi + (ps.eta @ Y) * X


# the standard Sasakian space form R^{2m+1}(-3) --------------------------------

def standard_sasakian(m: int) -> GeneralizedKMSpaceForm:
    """R^{2m+1} with coordinates (x_1..x_m, y_1..y_m, z) and

    eta = 1/2 (dz - sum y_i dx_i),  xi = 2 d_z,
    g = eta (x) eta + 1/4 sum (dx_i^2 + dy_i^2),
    phi d_x_i = -d_y_i,  phi d_y_i = d_x_i + y_i d_z,  phi d_z = 0.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    n = 2 * m + 1
    zi = 2 * m

    def eta(x):
        out = [0.0] * n
        for i in range(m):
            out[i] = -0.5 * x[m + i]
        out[zi] = 0.5
        return out

    def metric_fn(x):
        e = eta(x)
        g = [[e[i] * e[j] for j in range(n)] for i in range(n)]
        for i in range(2 * m):
            g[i][i] = g[i][i] + 0.25
        return g

    def phi(x):
        out = [[0.0] * n for _ in range(n)]
        for j in range(m):
            out[m + j][j] = -1.0
            out[j][m + j] = 1.0
            out[zi][m + j] = x[m + j]
        return out

    def xi(x):
        out = [0.0] * n
        out[zi] = 2.0
        return out

    structure = AlmostContactStructure(n, phi, xi, eta, MetricField(n, metric_fn, name=f"R^{n}(-3)"))
    coeffs = preset_coefficients(CoefficientPreset("km_space_form", {"c": -3, "kappa": 1, "mu": 0}))
    return GeneralizedKMSpaceForm(structure, coeffs)


# synthetic pointwise structures ----------------------------------------------

def random_pointwise_structure(rng: np.random.Generator, m: int, with_h: bool = True, scale: float = 1.0):
    """A random (g, phi, xi, eta, h) satisfying the almost contact axioms at one point.

    h is g-symmetric with h xi = 0 and h phi + phi h = 0.  Returns the
    structure and the adapted orthonormal frame ``F`` (columns
    e_1..e_m, phi e_1..phi e_m, xi) in coordinates.
    """
    n = 2 * m + 1
    J = np.zeros((n, n))
    J[m:2 * m, :m] = np.eye(m)
    J[:m, m:2 * m] = -np.eye(m)
    xi0 = np.zeros(n)
    xi0[-1] = 1.0
    h0 = np.zeros((n, n))
    if with_h:
        D = rng.normal(size=(m, m)) * scale
        D = D + D.T
        E = rng.normal(size=(m, m)) * scale
        E = E + E.T
        h0[:m, :m] = D
        h0[:m, m:2 * m] = E
        h0[m:2 * m, :m] = E
        h0[m:2 * m, m:2 * m] = -D
    # random unitary rotation of the contact distribution keeps J
    Z = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    Q, _ = np.linalg.qr(Z)
    U = np.eye(n)
    U[:m, :m] = Q.real
    U[:m, m:2 * m] = -Q.imag
    U[m:2 * m, :m] = Q.imag
    U[m:2 * m, m:2 * m] = Q.real
    A = rng.normal(size=(n, n)) * 0.3 + np.eye(n) * 1.5
    F = A @ U  # frame columns in coordinates
    Finv = np.linalg.inv(F)
    g = Finv.T @ Finv
    g = 0.5 * (g + g.T)
    ps = PointwiseStructure(
        g=g,
        phi=F @ J @ Finv,
        xi=F @ xi0,
        eta=xi0 @ Finv,
        h=F @ h0 @ Finv,
    )
    return ps, F
