"""Chen's lemma, the doubly warped product inequality and its contact-geometric form.

Slack is always ``rhs - lhs`` and is nonnegative when an inequality holds.
Violations are collected in the reports instead of being clamped or raised.

Sign note for the f5,2 terms: expanding ``<R52(X,Y)Y,X>`` on an
anti-invariant plane gives ``+f52 (A_XX A_YY - A_XY^2)``.  The closed forms
below use that sign by default; ``printed_f52_sign=True`` flips it to the
minus sign in which these formulas are often quoted.  The two agree whenever
f5,2 = 0 or A_xi = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import DEFAULT, Tolerances
from .contact import Coefficients, PointwiseStructure, assemble_pointwise
from .errors import ConstraintViolated, DegeneratePlane, InvalidScenario, NotCTotallyReal
from .geometry import as_coords, orthonormalize
from .submanifolds import (
    IsometricImmersion,
    ambient_curvature,
    ambient_curvature_crosscheck,
    ambient_tau,
    c_totally_real_of,
    compress,
    mean_curvatures_of,
    mixed_totally_geodesic_residual_of,
    second_fundamental_form,
)
from .warped import factor_laplacians

F52_SIGN_NOTE = (
    "f52 terms use +f52 (consistent with R52 = g(phi h Y,Z) phi h X - g(phi h X,Z) phi h Y); "
    "the printed closed forms carry -f52"
)
TRACE_SQUARE_NOTE = "tr(h^T|P)^2 is read as (trace)^2"


# Chen's lemma ---------------------------------------------------------------

@dataclass(frozen=True)
class ChenLemmaInstance:
    a: tuple
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        if len(self.a) < 2:
            raise ValueError("Chen's lemma needs l >= 2 numbers")

    @property
    def l(self) -> int:
        return len(self.a)

    @classmethod
    def solve_b(cls, a) -> "ChenLemmaInstance":
        """The unique b making the defining identity hold for ``a``."""
        a = np.asarray(a, dtype=float)
        return cls(tuple(a), float(a.sum() ** 2 / (len(a) - 1) - (a**2).sum()))

    def constraint_residual(self) -> float:
        a = np.asarray(self.a)
        return float(a.sum() ** 2 - (self.l - 1) * ((a**2).sum() + self.b))


@dataclass(frozen=True)
class ChenResult:
    gap: float
    equality_flag: bool
    deviation: float


def chen_gap(inst: ChenLemmaInstance, tol: float = DEFAULT.chen) -> ChenResult:
    """gap = 2 a1 a2 - b; equality iff a1 + a2 = a3 = ... = a_l."""
    a = np.asarray(inst.a)
    scale = max(1.0, a.sum() ** 2, (inst.l - 1) * abs((a**2).sum() + inst.b))
    if abs(inst.constraint_residual()) > tol * scale:
        raise ConstraintViolated(
            f"(sum a)^2 != (l-1)(sum a^2 + b): residual {inst.constraint_residual():.3e}"
        )
    gap = 2 * a[0] * a[1] - inst.b
    tail = np.concatenate([[a[0] + a[1]], a[2:]])
    deviation = float(np.abs(tail - tail.mean()).max())
    return ChenResult(float(gap), deviation <= tol, deviation)


# reports ----------------------------------------------------------------------

@dataclass
class InequalityReport:
    point: tuple
    lhs: float
    rhs: float
    slack: float
    mixed_sigma_residual: float
    partial_mean_mismatch: float
    equality_flag: bool
    verdict: str = ""
    violations: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations


def _finish(report: InequalityReport, tol: Tolerances) -> InequalityReport:
    report.lhs += 0.0  # drop negative zeros
    report.rhs += 0.0
    report.slack += 0.0
    diagnostics = report.mixed_sigma_residual <= tol.equality and report.partial_mean_mismatch <= tol.equality
    if report.slack < -tol.equality:
        report.violations.append("negative_slack")
    if report.equality_flag != diagnostics:
        report.violations.append("equality_mismatch")
    if report.violations:
        report.verdict = "violation"
    else:
        report.verdict = "equality" if report.equality_flag else "strict"
    return report


def _product_lhs(imm: IsometricImmersion, p, laplacian_metric: str, laplacian_sign: float) -> float:
    dwp = imm.product
    if dwp is None:
        raise ValueError("the immersion must carry its doubly warped product")
    r1, r2 = dwp.warps(p)
    d1, d2 = factor_laplacians(dwp, p, laplacian_metric)
    return laplacian_sign * (dwp.n2 * d1 / r1 + dwp.n1 * d2 / r2)


def proposition_slack(
    imm: IsometricImmersion,
    p,
    laplacian_metric: str = "leaf",
    laplacian_sign: float = 1.0,
    tol: Tolerances = DEFAULT,
) -> InequalityReport:
    """lhs = n2 D1 rho1/rho1 + n1 D2 rho2/rho2, rhs = n^2/4 |H|^2 + tau~(TM) - tau~(TM1) - tau~(TM2).

    ``laplacian_sign`` exists to force failures in fixtures; leave it at 1.
    """
    x = as_coords(p)
    lhs = _product_lhs(imm, x, laplacian_metric, laplacian_sign)
    sff = second_fundamental_form(imm, x)
    n, n1 = sff.n, imm.split
    H = mean_curvatures_of(sff, n1)
    Ra = ambient_curvature(imm, sff.ambient_point)
    T = sff.tangent
    tau_all = ambient_tau(Ra, T, range(n))
    tau_1 = ambient_tau(Ra, T, range(n1))
    tau_2 = ambient_tau(Ra, T, range(n1, n))
    rhs = n**2 / 4 * H.norm_H**2 + tau_all - tau_1 - tau_2
    slack = rhs - lhs
    report = InequalityReport(
        point=tuple(x.tolist()),
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(slack),
        mixed_sigma_residual=mixed_totally_geodesic_residual_of(sff, n1),
        partial_mean_mismatch=float(H.partial_mean_mismatch),
        equality_flag=abs(slack) <= tol.equality,
    )
    report.extras["mean_curvature_sq"] = H.norm_H**2
    report.extras["ambient_mixed_tau"] = tau_all - tau_1 - tau_2
    cross = ambient_curvature_crosscheck(imm, sff.ambient_point)
    if cross is not None:
        report.extras["ambient_crosscheck"] = cross
        if cross > tol.equality:
            report.violations.append("ambient_crosscheck")
    return _finish(report, tol)


# contact closed forms -----------------------------------------------------------

@dataclass(frozen=True)
class TraceData:
    """Traces and squared norms of a tangential operator, in full and per factor block."""

    tr: float
    tr1: float
    tr2: float
    sq: float
    sq1: float
    sq2: float

    @classmethod
    def from_matrix(cls, M, n1: int) -> "TraceData":
        M = np.asarray(M, dtype=float)
        B1, B2 = M[:n1, :n1], M[n1:, n1:]
        return cls(
            float(np.trace(M)), float(np.trace(B1)), float(np.trace(B2)),
            float((M**2).sum()), float((B1**2).sum()), float((B2**2).sum()),
        )

    @classmethod
    def zero(cls) -> "TraceData":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def _coeff_values(coeffs, p=None) -> dict:
    if isinstance(coeffs, Coefficients):
        return coeffs.values(p)
    return {k: float(v) for k, v in coeffs.items()}


def tau_plane_closed_form(coeffs, h_plane, a_plane, printed_f52_sign: bool = False) -> float:
    """tau~ of a C-totally real k-plane from f's and the compressions of h and A_xi = (phi h)^T."""
    f = _coeff_values(coeffs)
    h = np.atleast_2d(np.asarray(h_plane, dtype=float))
    a = np.atleast_2d(np.asarray(a_plane, dtype=float))
    k = h.shape[0]
    if k < 2:
        raise DegeneratePlane("a plane section needs k >= 2")
    if h.shape != (k, k) or a.shape != (k, k):
        raise ValueError("restricted operators must be k x k")
    if np.abs(h - h.T).max() > DEFAULT.engine or np.abs(a - a.T).max() > DEFAULT.engine:
        raise ValueError("restricted operators must be symmetric")
    s52 = -1.0 if printed_f52_sign else 1.0
    return float(
        k * (k - 1) / 2 * f["f1"]
        + (k - 1) * f["f4"] * np.trace(h)
        + f["f51"] / 2 * (np.trace(h) ** 2 - (h**2).sum())
        + s52 * f["f52"] / 2 * (np.trace(a) ** 2 - (a**2).sum())
    )


def plane_restrictions(ps: PointwiseStructure, basis):
    """Orthonormalize ``basis`` and return it with the compressions of h and phi h."""
    E = orthonormalize(ps.g, basis)
    return E, compress(ps.h, E, ps.g), compress(ps.phi @ ps.h, E, ps.g)


def tau_plane_pairwise(coeffs, ps: PointwiseStructure, basis) -> float:
    """Direct sum of assembled K~ over orthonormal pairs of the plane (the oracle for the closed form)."""
    f = _coeff_values(coeffs)
    E = orthonormalize(ps.g, basis)
    k = E.shape[0]
    total = 0.0
    for i in range(k):
        for j in range(i + 1, k):
            total += assemble_pointwise(f, ps, E[i], E[j], E[j]) @ ps.g @ E[i]
    return float(total)


def obstruction_expression(n1: int, n2: int, coeffs, h: TraceData, a: TraceData, printed_f52_sign: bool = False) -> float:
    """E = tau~(TM) - tau~(TM1) - tau~(TM2) for a C-totally real doubly warped product."""
    f = _coeff_values(coeffs)
    s52 = -1.0 if printed_f52_sign else 1.0
    return float(
        n1 * n2 * f["f1"]
        + f["f4"] * (n2 * h.tr1 + n1 * h.tr2)
        + f["f51"] / 2 * (h.tr**2 - h.tr1**2 - h.tr2**2 - h.sq + h.sq1 + h.sq2)
        + s52 * f["f52"] / 2 * (a.tr**2 - a.tr1**2 - a.tr2**2 - a.sq + a.sq1 + a.sq2)
    )


def theorem_slack(
    imm: IsometricImmersion,
    p,
    laplacian_metric: str = "leaf",
    laplacian_sign: float = 1.0,
    printed_f52_sign: bool = False,
    tol: Tolerances = DEFAULT,
) -> InequalityReport:
    """The C-totally real inequality with the closed-form right-hand side, cross-checked
    against the generic right-hand side computed from the assembled curvature."""
    if imm.form is None:
        raise ValueError("theorem_slack needs an immersion into a generalized (kappa, mu)-space form")
    x = as_coords(p)
    sff = second_fundamental_form(imm, x)
    ps = imm.form.structure.at(sff.ambient_point)
    ctr = c_totally_real_of(sff, ps, tol.equality)
    if not ctr.passed:
        raise NotCTotallyReal(
            f"not C-totally real at {tuple(x)}: eta {ctr.eta_max:.2e}, "
            f"phi tangential {ctr.phi_tangential_max:.2e}, A_xi residual {ctr.a_xi_residual:.2e}"
        )
    n, n1 = sff.n, imm.split
    n2 = n - n1
    coeffs = imm.form.coefficients.values(sff.ambient_point)
    E = obstruction_expression(
        n1, n2, coeffs,
        TraceData.from_matrix(ctr.h_tangential, n1),
        TraceData.from_matrix(ctr.A_xi, n1),
        printed_f52_sign,
    )
    H = mean_curvatures_of(sff, n1)
    lhs = _product_lhs(imm, x, laplacian_metric, laplacian_sign)
    rhs = n**2 / 4 * H.norm_H**2 + E
    generic = proposition_slack(imm, x, laplacian_metric, laplacian_sign, tol)
    report = InequalityReport(
        point=tuple(x.tolist()),
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(rhs - lhs),
        mixed_sigma_residual=mixed_totally_geodesic_residual_of(sff, n1),
        partial_mean_mismatch=float(H.partial_mean_mismatch),
        equality_flag=abs(rhs - lhs) <= tol.equality,
    )
    report.extras.update(
        obstruction_expression=E,
        generic_rhs=generic.rhs,
        rhs_crosscheck_residual=abs(rhs - generic.rhs),
        eta_max=ctr.eta_max,
        phi_tangential_max=ctr.phi_tangential_max,
        a_xi_residual=ctr.a_xi_residual,
    )
    if "ambient_crosscheck" in generic.extras:
        report.extras["ambient_crosscheck"] = generic.extras["ambient_crosscheck"]
        if "ambient_crosscheck" in generic.violations:
            report.violations.append("ambient_crosscheck")
    if abs(rhs - generic.rhs) > tol.engine:
        report.violations.append("rhs_crosscheck")
    return _finish(report, tol)


# obstruction verdicts -------------------------------------------------------------

VERDICTS = ("ruled_out", "must_be_mixed_totally_geodesic", "no_obstruction")


@dataclass(frozen=True)
class ObstructionScenario:
    n1: int
    n2: int
    coefficients: object  # Coefficients or a dict of divided values
    h: TraceData = TraceData.zero()
    a_xi: TraceData = TraceData.zero()
    branch: str = "harmonic"  # or "eigenfunction"
    eigenvalue: Optional[float] = None


@dataclass(frozen=True)
class ObstructionVerdict:
    expression: float
    verdict: str
    branch: str


def obstruction_report(s: ObstructionScenario, printed_f52_sign: bool = False, tol: Tolerances = DEFAULT) -> ObstructionVerdict:
    """Verdict for a minimal C-totally real immersion.

    Harmonic warping functions make the left-hand side vanish, so the sign of
    E decides.  Positive eigenvalues make it strictly positive, so E <= 0
    already rules the immersion out.
    """
    E = obstruction_expression(s.n1, s.n2, s.coefficients, s.h, s.a_xi, printed_f52_sign)
    if s.branch == "harmonic":
        if abs(E) <= tol.verdict:
            verdict = "must_be_mixed_totally_geodesic"
        elif E < 0:
            verdict = "ruled_out"
        else:
            verdict = "no_obstruction"
    elif s.branch == "eigenfunction":
        if s.eigenvalue is None or not s.eigenvalue > 0:
            raise InvalidScenario("the eigenfunction branch needs a positive eigenvalue")
        verdict = "ruled_out" if E <= tol.verdict else "no_obstruction"
    else:
        raise InvalidScenario(f"unknown branch {s.branch!r}")
    return ObstructionVerdict(E, verdict, s.branch)
