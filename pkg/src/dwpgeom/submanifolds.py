"""Isometric immersions: second fundamental form, shape operator, mean curvatures.

An immersion is a jet-aware map from an ``n``-dimensional chart into an
``m``-dimensional ambient chart.  All tangent quantities are expressed in the
Gram-Schmidt frame ``e_1..e_n`` of the domain metric, which respects the
``n1 + n2`` split of a doubly warped product chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import jets
from .config import DEFAULT
from .contact import GeneralizedKMSpaceForm, PointwiseStructure, assembled_tensor
from .errors import NotNormal, RankDeficient
from .warped import DoublyWarpedProduct
from .geometry import (
    CurvatureTensorAt,
    MetricField,
    Point,
    _christoffel_from,
    as_coords,
    christoffel,
    frame_at,
    riemann,
    scalar_curvature,
)


@dataclass(frozen=True)
class IsometricImmersion:
    """``map`` sends domain coordinates to ambient coordinates.

    Passing ``product`` fills in the domain metric and the split from a
    doubly warped product.
    """

    map: Callable
    domain: Optional[MetricField] = None
    ambient: Optional[MetricField] = None
    form: Optional[GeneralizedKMSpaceForm] = None
    split: Optional[int] = None
    product: Optional[DoublyWarpedProduct] = None

    def __post_init__(self):
        if self.product is not None:
            if self.domain is None:
                object.__setattr__(self, "domain", self.product.metric())
            if self.split is None:
                object.__setattr__(self, "split", self.product.n1)
        if self.domain is None:
            raise ValueError("an immersion needs a domain metric or a doubly warped product")
        if self.ambient is None:
            if self.form is None:
                raise ValueError("an immersion needs an ambient metric or a space form")
            object.__setattr__(self, "ambient", self.form.metric)

    @property
    def n(self) -> int:
        return self.domain.dim

    @property
    def m(self) -> int:
        return self.ambient.dim

    def position(self, p) -> np.ndarray:
        return np.array([float(v) for v in self.map([float(c) for c in as_coords(p)])])


@dataclass(frozen=True)
class SecondFundamentalFormAt:
    point: Point
    ambient_point: np.ndarray
    frame: np.ndarray  # rows: domain frame e_a
    tangent: np.ndarray  # rows: T_a = dx(e_a), ambient coordinates
    normals: np.ndarray  # rows: orthonormal normal frame
    sigma: np.ndarray  # sigma[a, b] = sigma(e_a, e_b), ambient coordinates
    G: np.ndarray  # ambient metric at x(p)
    jacobian: np.ndarray
    tangential_residual: float  # |tangential part of ambient nabla - dx(nabla)|

    @property
    def n(self) -> int:
        return self.frame.shape[0]

    def components(self) -> np.ndarray:
        """sigma^r_ab = <sigma(e_a, e_b), nu_r>."""
        return np.einsum("abk,kl,rl->abr", self.sigma, self.G, self.normals)

    def inner(self, u, v) -> float:
        return float(np.asarray(u) @ self.G @ np.asarray(v))

    def norm(self, u) -> float:
        return float(np.sqrt(max(self.inner(u, u), 0.0)))

    def squared_norm(self) -> float:
        return float(np.einsum("abk,kl,abl->", self.sigma, self.G, self.sigma))

    def symmetry_residual(self) -> float:
        return float(np.abs(self.sigma - self.sigma.transpose(1, 0, 2)).max())

    def apply(self, X, Y) -> np.ndarray:
        """sigma(X, Y) for domain coordinate vectors X, Y."""
        a = np.linalg.solve(self.frame.T, np.asarray(X, dtype=float))
        b = np.linalg.solve(self.frame.T, np.asarray(Y, dtype=float))
        return np.einsum("a,b,abk->k", a, b, self.sigma)


def induced_metric_residual(imm: IsometricImmersion, p) -> np.ndarray:
    """Pullback metric minus domain metric."""
    x = as_coords(p)
    y, J, _ = jets.jet_eval(imm.map, x)
    _check_rank(J)
    G = imm.ambient(y)
    return J.T @ G @ J - imm.domain(x)


def _check_rank(J):
    s = np.linalg.svd(J, compute_uv=False)
    if s.size == 0 or s[-1] <= 1e-10 * max(s[0], 1.0):
        raise RankDeficient("the differential of the immersion does not have full rank")


def _normal_frame(G, T, m, tol=1e-3):
    basis = list(T)
    normals = []
    for k in range(m):
        w = np.zeros(m)
        w[k] = 1.0
        start = np.sqrt(w @ G @ w)
        for u in basis:
            w = w - (u @ G @ w) / (u @ G @ u) * u
        nrm = np.sqrt(max(w @ G @ w, 0.0))
        if nrm > tol * start:
            w = w / nrm
            basis.append(w)
            normals.append(w)
        if len(normals) == m - T.shape[0]:
            break
    if len(normals) != m - T.shape[0]:
        raise RankDeficient("could not complete a normal frame")
    return np.array(normals).reshape(-1, m)


def second_fundamental_form(imm: IsometricImmersion, p) -> SecondFundamentalFormAt:
    x = as_coords(p)
    y, J, ddx = jets.jet_eval(imm.map, x)
    _check_rank(J)
    G, dG, _ = imm.ambient.jet(y)
    gam_amb = _christoffel_from(G, dG)[0]
    # V[i, j] = ambient covariant derivative of dx(d_j) along d_i
    V = np.einsum("kij->ijk", ddx) + np.einsum("klm,li,mj->ijk", gam_amb, J, J)
    induced = J.T @ G @ J
    n = J.shape[1]
    rhs = np.einsum("lt,lk,ijk->tij", J, G, V).reshape(n, -1)
    coeff = np.linalg.solve(induced, rhs).reshape(n, n, n)  # tangential part in the d_k basis
    tangential_residual = float(np.abs(coeff - christoffel(imm.domain, x)).max())
    sig_coord = V - np.einsum("lk,kij->ijl", J, coeff)
    E = frame_at(imm.domain, x).vectors
    sigma = np.einsum("ai,bj,ijk->abk", E, E, sig_coord)
    T = (J @ E.T).T
    normals = _normal_frame(G, T, J.shape[0])
    return SecondFundamentalFormAt(Point(x), y, E, T, normals, sigma, G, J, tangential_residual)


@dataclass(frozen=True)
class ShapeData:
    A: np.ndarray  # A[b, a] = <A_zeta e_a, e_b>, from the Weingarten formula
    D: np.ndarray  # D[a] = D_{e_a} zeta, ambient coordinates
    A_from_sigma: np.ndarray  # <sigma(e_a, e_b), zeta>

    @property
    def duality_residual(self) -> float:
        return float(np.abs(self.A - self.A_from_sigma).max())


def shape_and_normal_connection(imm: IsometricImmersion, p, zeta: Callable, tol: float = DEFAULT.engine) -> ShapeData:
    """Shape operator and normal connection of a normal field ``zeta`` (a jet-aware map of domain coordinates)."""
    x = as_coords(p)
    sff = second_fundamental_form(imm, x)
    z, dz, _ = jets.jet_eval(zeta, x)
    T, G = sff.tangent, sff.G
    if np.abs(T @ G @ z).max() > tol * max(1.0, np.sqrt(z @ G @ z)):
        raise NotNormal("zeta is not normal to the immersion")
    _, dG, _ = imm.ambient.jet(sff.ambient_point)
    gam_amb = _christoffel_from(G, dG)[0]
    W = dz.T + np.einsum("klm,li,m->ik", gam_amb, sff.jacobian, z)  # W[i] = nabla_{d_i} zeta
    Wf = sff.frame @ W  # along e_a
    A = -(T @ G @ Wf.T)  # A[b, a] = -<nabla_{e_a} zeta, T_b>
    D = Wf + (A.T @ T)
    A_sigma = np.einsum("abk,kl,l->ab", sff.sigma, G, z)
    return ShapeData(A, D, A_sigma)


@dataclass(frozen=True)
class MeanCurvatureData:
    H: np.ndarray
    H1: Optional[np.ndarray]
    H2: Optional[np.ndarray]
    norm_H: float
    norm_H1: Optional[float]
    norm_H2: Optional[float]
    partial_mean_mismatch: Optional[float]  # |n1 H1 - n2 H2|
    decomposition_residual: Optional[float]  # |n H - n1 H1 - n2 H2|


def mean_curvatures_of(sff: SecondFundamentalFormAt, n1: Optional[int] = None) -> MeanCurvatureData:
    n = sff.n
    diag = np.array([sff.sigma[a, a] for a in range(n)])
    H = diag.sum(axis=0) / n
    if n1 is None:
        return MeanCurvatureData(H, None, None, sff.norm(H), None, None, None, None)
    n2 = n - n1
    if not 0 < n1 < n:
        raise ValueError(f"split n1={n1} must lie strictly between 0 and {n}")
    H1 = diag[:n1].sum(axis=0) / n1
    H2 = diag[n1:].sum(axis=0) / n2
    return MeanCurvatureData(
        H, H1, H2, sff.norm(H), sff.norm(H1), sff.norm(H2),
        sff.norm(n1 * H1 - n2 * H2), sff.norm(n * H - n1 * H1 - n2 * H2),
    )


def mean_curvatures(imm: IsometricImmersion, p, n1: Optional[int] = None) -> MeanCurvatureData:
    return mean_curvatures_of(second_fundamental_form(imm, p), imm.split if n1 is None else n1)


def ambient_curvature(imm: IsometricImmersion, y) -> CurvatureTensorAt:
    """Assembled space-form curvature when a form is attached, else the exact-jet Riemann tensor."""
    if imm.form is not None:
        return assembled_tensor(imm.form, y)
    return riemann(imm.ambient, y)


def ambient_curvature_crosscheck(imm: IsometricImmersion, y) -> Optional[float]:
    """max |assembled - exact-jet| curvature components, or None without a form."""
    if imm.form is None:
        return None
    return float(np.abs(assembled_tensor(imm.form, y).up - riemann(imm.ambient, y).up).max())


def gauss_equation_sides(imm: IsometricImmersion, p, X, Y, Z, W):
    """(<R~(X,Y)Z,W>, <R(X,Y)Z,W> + <s(X,Z),s(Y,W)> - <s(X,W),s(Y,Z)>) for domain vectors."""
    x = as_coords(p)
    sff = second_fundamental_form(imm, x)
    J = sff.jacobian
    Ra = ambient_curvature(imm, sff.ambient_point)
    lhs = Ra.form(J @ X, J @ Y, J @ Z, J @ W)
    R = riemann(imm.domain, x)
    s = sff.apply
    rhs = R.form(X, Y, Z, W) + sff.inner(s(X, Z), s(Y, W)) - sff.inner(s(X, W), s(Y, Z))
    return lhs, rhs


def gauss_equation_residual(imm: IsometricImmersion, p, X, Y, Z, W) -> float:
    lhs, rhs = gauss_equation_sides(imm, p, X, Y, Z, W)
    return abs(lhs - rhs)


def ambient_plane_curvature(Ra: CurvatureTensorAt, T: np.ndarray, a: int, b: int) -> float:
    """K~(T_a ^ T_b) for orthonormal tangent images."""
    return Ra.form(T[a], T[b], T[b], T[a])


def ambient_tau(Ra: CurvatureTensorAt, T: np.ndarray, idx) -> float:
    idx = list(idx)
    return float(sum(ambient_plane_curvature(Ra, T, a, b) for i, a in enumerate(idx) for b in idx[i + 1:]))


def pair_gauss_residual(imm: IsometricImmersion, p) -> float:
    """max over frame pairs of |K(e_a^e_b) - K~(e_a^e_b) - sum_r (s_aa s_bb - s_ab^2)|."""
    x = as_coords(p)
    sff = second_fundamental_form(imm, x)
    Ra = ambient_curvature(imm, sff.ambient_point)
    R = riemann(imm.domain, x)
    E, s = sff.frame, sff.sigma
    worst = 0.0
    for a in range(sff.n):
        for b in range(a + 1, sff.n):
            intrinsic = R.form(E[a], E[b], E[b], E[a])
            extrinsic = sff.inner(s[a, a], s[b, b]) - sff.inner(s[a, b], s[a, b])
            worst = max(worst, abs(intrinsic - ambient_plane_curvature(Ra, sff.tangent, a, b) - extrinsic))
    return worst


def two_tau_residual(imm: IsometricImmersion, p) -> float:
    """|2 tau(p) - (n^2 |H|^2 - |sigma|^2 + 2 tau~(T_p M))|."""
    x = as_coords(p)
    sff = second_fundamental_form(imm, x)
    n = sff.n
    H = mean_curvatures_of(sff)
    Ra = ambient_curvature(imm, sff.ambient_point)
    rhs = n**2 * H.norm_H**2 - sff.squared_norm() + 2 * ambient_tau(Ra, sff.tangent, range(n))
    return abs(2 * scalar_curvature(imm.domain, x) - rhs)


def mixed_totally_geodesic_residual_of(sff: SecondFundamentalFormAt, n1: int) -> float:
    return float(max(
        (sff.norm(sff.sigma[a, b]) for a in range(n1) for b in range(n1, sff.n)),
        default=0.0,
    ))


def mixed_totally_geodesic_residual(imm: IsometricImmersion, p, n1: Optional[int] = None) -> float:
    n1 = imm.split if n1 is None else n1
    if n1 is None:
        raise ValueError("mixed diagnostics need a split")
    return mixed_totally_geodesic_residual_of(second_fundamental_form(imm, p), n1)


# C-totally real submanifolds ------------------------------------------------

def compress(op: np.ndarray, T: np.ndarray, G: np.ndarray) -> np.ndarray:
    """M[a, b] = <op T_a, T_b>: the tangential part of ``op`` in the frame T."""
    return T @ G @ (op @ T.T)


@dataclass(frozen=True)
class CTotallyRealReport:
    eta_max: float
    phi_tangential_max: float
    a_xi_residual: float
    passed: bool
    A_xi: np.ndarray
    phi_h_tangential: np.ndarray
    h_tangential: np.ndarray


def c_totally_real_report(imm: IsometricImmersion, p, tol: float = DEFAULT.equality) -> CTotallyRealReport:
    if imm.form is None:
        raise ValueError("C-totally real diagnostics need an ambient almost contact structure")
    sff = second_fundamental_form(imm, p)
    return c_totally_real_of(sff, imm.form.structure.at(sff.ambient_point), tol)


def c_totally_real_of(sff: SecondFundamentalFormAt, ps: PointwiseStructure, tol: float = DEFAULT.equality):
    T, G = sff.tangent, sff.G
    eta_max = float(np.abs(T @ ps.eta).max())
    # tangential projection of phi T_a, measured in the orthonormal frame T
    phi_tan = float(np.abs(T @ G @ (ps.phi @ T.T)).max())
    A_xi = np.einsum("abk,kl,l->ab", sff.sigma, G, ps.xi)
    phi_h = compress(ps.phi @ ps.h, T, G)
    resid = float(np.abs(A_xi - phi_h).max())
    passed = eta_max <= tol and phi_tan <= tol and resid <= tol
    return CTotallyRealReport(eta_max, phi_tan, resid, passed, A_xi, phi_h, compress(ps.h, T, G))
