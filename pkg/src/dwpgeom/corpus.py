"""Random test corpora: metrics, doubly warped products and isometric immersions.

Every generator takes a ``numpy.random.Generator`` and builds jet-aware
closures, so all curvature quantities stay exact.  Coefficients are kept
small enough that metrics stay positive definite on the sampling box
``[-1, 1]^n`` returned alongside each object.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .geometry import MetricField, ScalarField, euclidean
from .submanifolds import IsometricImmersion
from .warped import DoublyWarpedProduct

BOX = 1.0


def _quadratic_map(rng, n_in: int, n_out: int, lin: float = 0.3, quad: float = 0.15):
    """x -> A x + 1/2 x^T C_k x with A = I-like, returned with its Jacobian."""
    A = np.eye(n_out, n_in) + lin * rng.uniform(-1, 1, size=(n_out, n_in))
    C = quad * rng.uniform(-1, 1, size=(n_out, n_in, n_in))
    C = 0.5 * (C + C.transpose(0, 2, 1))

    def value(x):
        out = []
        for k in range(n_out):
            v = 0.0 * x[0]
            for i in range(n_in):
                v = v + A[k, i] * x[i]
                for j in range(n_in):
                    v = v + 0.5 * C[k, i, j] * x[i] * x[j]
            out.append(v)
        return out

    def jacobian(x):
        rows = []
        for k in range(n_out):
            row = []
            for i in range(n_in):
                v = A[k, i] + 0.0 * x[0]
                for j in range(n_in):
                    v = v + C[k, i, j] * x[j]
                row.append(v)
            rows.append(row)
        return rows

    return value, jacobian


def random_polynomial_metric(rng: np.random.Generator, dim: int, scale: float = 0.2) -> MetricField:
    """g = 2I + scale * (symmetric linear + quadratic terms); SPD on the unit box."""
    L = scale * rng.uniform(-1, 1, size=(dim, dim, dim))
    Q = scale * rng.uniform(-1, 1, size=(dim, dim, dim, dim)) / dim
    L = 0.5 * (L + L.transpose(1, 0, 2))
    Q = 0.5 * (Q + Q.transpose(1, 0, 2, 3))

    def fn(x):
        g = [[0.0] * dim for _ in range(dim)]
        for i in range(dim):
            for j in range(i, dim):
                v = 2.0 if i == j else 0.0
                for k in range(dim):
                    v = v + L[i, j, k] * x[k]
                    for l in range(dim):
                        v = v + Q[i, j, k, l] * x[k] * x[l]
                g[i][j] = v
        return g

    return MetricField(dim, fn, name=f"poly{dim}")


@dataclass(frozen=True)
class WarpFunction:
    """rho(x) = 1.5 + c0 sin(u + 0.3) + c1 u cos(w) + c2 (exp(w/2) - 1) with u = a.x, w = b.x.

    Stays within [0.6, 2.4] on the unit box; ``gradient`` is analytic and jet-aware.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def _uw(self, x):
        u = 0.0 * x[0]
        w = 0.0 * x[0]
        for i in range(len(self.a)):
            u = u + self.a[i] * x[i]
            w = w + self.b[i] * x[i]
        return u, w

    def __call__(self, x):
        u, w = self._uw(x)
        c0, c1, c2 = self.c
        return 1.5 + c0 * jets.sin(u + 0.3) + c1 * u * jets.cos(w) + c2 * (jets.exp(w / 2) - 1)

    def gradient(self, x):
        u, w = self._uw(x)
        c0, c1, c2 = self.c
        da = c0 * jets.cos(u + 0.3) + c1 * jets.cos(w)
        db = -c1 * u * jets.sin(w) + c2 * jets.exp(w / 2) / 2
        return [da * self.a[i] + db * self.b[i] for i in range(len(self.a))]

    def field(self) -> ScalarField:
        return ScalarField(len(self.a), self)


def random_warp(rng: np.random.Generator, dim: int) -> WarpFunction:
    return WarpFunction(rng.uniform(-1, 1, size=dim), rng.uniform(-1, 1, size=dim), rng.uniform(0.1, 0.3, size=3))


def random_positive_function(rng: np.random.Generator, dim: int) -> ScalarField:
    return random_warp(rng, dim).field()


def random_doubly_warped(rng: np.random.Generator, n1: int, n2: int) -> DoublyWarpedProduct:
    return DoublyWarpedProduct(
        random_polynomial_metric(rng, n1),
        random_polynomial_metric(rng, n2),
        random_positive_function(rng, n1),
        random_positive_function(rng, n2),
    )


def sample_box(rng: np.random.Generator, dim: int, count: int, half: float = 0.9) -> np.ndarray:
    return rng.uniform(-half * BOX, half * BOX, size=(count, dim))


@dataclass(frozen=True)
class CorpusImmersion:
    immersion: IsometricImmersion
    product: DoublyWarpedProduct
    description: str


def _stereographic(v):
    """Inverse stereographic projection R^k -> S^k in R^{k+1}."""
    r2 = 0.0 * v[0]
    for c in v:
        r2 = r2 + c * c
    d = 1 + r2
    return [2 * c / d for c in v] + [(r2 - 1) / d]


def random_flat_immersion(rng: np.random.Generator, n1: int, n2: int, c: float = 1.0) -> CorpusImmersion:
    """x(t, s) = (F(t), rho1(t) u(s)) in flat space with u into the unit sphere.

    The induced metric is (dF^T dF + d rho1^2) + rho1^2 u*g_S, which is the
    doubly warped metric with g1 = (dF^T dF + d rho1^2)/c^2, rho2 = c and
    g2 = u*g_S.
    """
    F, dF = _quadratic_map(rng, n1, n1)
    V, dV = _quadratic_map(rng, n2, n2)
    rho1 = random_warp(rng, n1)

    def g1(t):
        J = dF(t)
        grad = rho1.gradient(t)
        return [[(sum(J[k][i] * J[k][j] for k in range(n1)) + grad[i] * grad[j]) / c**2
                 for j in range(n1)] for i in range(n1)]

    def u(s):
        return _stereographic(V(s))

    def g2(s):
        v = V(s)
        J = dV(s)
        r2 = 0.0 * v[0]
        for comp in v:
            r2 = r2 + comp * comp
        conf = 4 / (1 + r2) ** 2
        return [[conf * sum(J[k][i] * J[k][j] for k in range(n2)) for j in range(n2)] for i in range(n2)]

    dwp = DoublyWarpedProduct(
        MetricField(n1, g1, name="induced1"),
        MetricField(n2, g2, name="sphere-pullback"),
        rho1.field(),
        ScalarField(n2, lambda s: c + 0.0 * s[0]),
    )

    def fmap(x):
        t, s = x[:n1], x[n1:]
        r = rho1(t)
        return list(F(t)) + [r * comp for comp in u(s)]

    m = n1 + n2 + 1
    imm = IsometricImmersion(fmap, ambient=euclidean(m), product=dwp)
    return CorpusImmersion(imm, dwp, f"flat R^{m}, n1={n1}, n2={n2}, rho2={c}")


def random_curved_immersion(rng: np.random.Generator, n1: int, n2: int, q: int = 1) -> CorpusImmersion:
    """A random doubly warped product immersed as a graph in a curved space.

    With F a quadratic map R^n -> R^q, the ambient metric on R^{n+q} is
    ``(g_dwp(x) - dF^T dF) + I_q`` (independent of the fibre coordinates)
    and x -> (x, F(x)) is isometric by construction.
    """
    dwp = random_doubly_warped(rng, n1, n2)
    n = n1 + n2
    F, dF = _quadratic_map(rng, n, q, lin=0.0, quad=0.12)
    base = dwp.metric()

    def ambient(y):
        x = y[:n]
        g = base.fn(x)
        J = dF(x)
        out = [[0.0] * (n + q) for _ in range(n + q)]
        for i in range(n):
            for j in range(i, n):
                out[i][j] = g[i][j] - sum(J[k][i] * J[k][j] for k in range(q))
        for k in range(q):
            out[n + k][n + k] = 1.0
        return out

    def fmap(x):
        return list(x) + list(F(x))

    imm = IsometricImmersion(fmap, ambient=MetricField(n + q, ambient, name="graph-ambient"), product=dwp)
    return CorpusImmersion(imm, dwp, f"curved R^{n + q}, n1={n1}, n2={n2}")
