"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line; the lines are printed in the
terminal summary of a pytest run and by ``python tests/test_acceptance.py``.
"""

import math
import time
from fractions import Fraction

import numpy as np

from dwpgeom.cli import main as cli_main
from dwpgeom.contact import (
    DIVIDED_KEYS,
    CoefficientPreset,
    assemble_pointwise,
    axiom_residuals,
    preset_coefficients,
    random_pointwise_structure,
    standard_sasakian,
    xi_curvature_prefactors,
    xi_curvature_residual,
)
from dwpgeom.corpus import (
    random_curved_immersion,
    random_doubly_warped,
    random_flat_immersion,
    random_polynomial_metric,
    sample_box,
)
from dwpgeom.fdcheck import christoffel_fd, relative_error, riemann_fd
from dwpgeom.geometry import christoffel, frame_at, plane_sectional, riemann
from dwpgeom.inequalities import (
    ChenLemmaInstance,
    ObstructionScenario,
    chen_gap,
    obstruction_report,
    plane_restrictions,
    proposition_slack,
    tau_plane_closed_form,
    tau_plane_pairwise,
    theorem_slack,
)
from dwpgeom.scenario import parse_scenario, run_scenario
from dwpgeom.submanifolds import c_totally_real_report, pair_gauss_residual, two_tau_residual
from dwpgeom.warped import mixed_scalar_identity_residual, olteanu_mixed_sectional

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, detail: str, started: float) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {title}: {detail} [{time.perf_counter() - started:.1f}s]"
    RESULTS.append(line)
    assert ok, line


def test_criterion_01_sphere_equality(sphere_immersion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = dict(lhs=0.0, rhs=0.0, slack=0.0, sigma=0.0, mismatch=0.0)
    for t, s in zip(rng.uniform(0.2, math.pi - 0.2, 50), rng.uniform(0, 2 * math.pi, 50)):
        rep = proposition_slack(sphere_immersion, [t, s])
        worst["lhs"] = max(worst["lhs"], abs(rep.lhs - 1))
        worst["rhs"] = max(worst["rhs"], abs(rep.rhs - 1))
        worst["slack"] = max(worst["slack"], abs(rep.slack))
        worst["sigma"] = max(worst["sigma"], rep.mixed_sigma_residual)
        worst["mismatch"] = max(worst["mismatch"], rep.partial_mean_mismatch)
    ok = max(worst.values()) <= 1e-8
    record(1, "sphere equality case", ok, ", ".join(f"max {k} dev {v:.1e}" for k, v in worst.items()), t0)


def test_criterion_02_torus_strict(torus_immersion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    dev_slack = dev_mm = 0.0
    for p in rng.uniform(0, 2 * math.pi, size=(50, 2)):
        rep = proposition_slack(torus_immersion, p)
        dev_slack = max(dev_slack, abs(rep.slack - 0.5))
        dev_mm = max(dev_mm, abs(rep.partial_mean_mismatch - math.sqrt(2)))
    ok = dev_slack <= 1e-8 and dev_mm <= 1e-8
    record(2, "torus strict case", ok, f"|slack-1/2| {dev_slack:.1e}, |mismatch-sqrt2| {dev_mm:.1e}", t0)


def test_criterion_03_mixed_sectional_formula():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    worst_k = worst_19 = 0.0
    for _ in range(50):
        n1, n2 = (int(v) for v in rng.integers(1, 3, size=2))
        dwp = random_doubly_warped(rng, n1, n2)
        p = sample_box(rng, n1 + n2, 1)[0]
        metric = dwp.metric()
        R = riemann(metric, p)
        E = frame_at(metric, p).vectors
        for i in range(n1):
            for j in range(n1, n1 + n2):
                k_formula = olteanu_mixed_sectional(dwp, p, E[i], E[j])
                worst_k = max(worst_k, abs(k_formula - plane_sectional(R, E[i], E[j])))
        worst_19 = max(worst_19, mixed_scalar_identity_residual(dwp, p)[2])
    hyp = run_scenario(parse_scenario("hyperbolic"))
    dev_h = hyp.summary["max_sectional_deviation"]
    ok = worst_k <= 1e-8 and worst_19 <= 1e-8 and dev_h <= 1e-9 and hyp.exit_code == 0
    record(3, "mixed sectional curvature formula", ok,
           f"formula vs metric {worst_k:.1e}, hyperbolic |K+1| {dev_h:.1e}, scalar identity {worst_19:.1e}", t0)


def test_criterion_04_chen_lemma():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    min_gap, counterexamples = math.inf, 0
    for _ in range(10_000):
        inst = ChenLemmaInstance.solve_b(rng.uniform(-5, 5, size=int(rng.integers(2, 9))))
        res = chen_gap(inst)
        min_gap = min(min_gap, res.gap)
        counterexamples += res.equality_flag != (abs(res.gap) <= 1e-9)
    # equality configurations a1 + a2 = a3 = ... = al
    for _ in range(1000):
        l = int(rng.integers(2, 9))
        a1, a2 = rng.uniform(-2.5, 2.5, size=2)
        res = chen_gap(ChenLemmaInstance.solve_b([a1, a2] + [a1 + a2] * (l - 2)))
        counterexamples += not (res.equality_flag and abs(res.gap) <= 1e-9)
    ok = min_gap >= -1e-12 and counterexamples == 0
    record(4, "Chen lemma", ok, f"min gap {min_gap:.2e}, counterexamples {counterexamples}", t0)


def test_criterion_05_standard_sasakian_model():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    preset = preset_coefficients(CoefficientPreset("km_space_form", {"c": -3, "kappa": 1, "mu": 0}))
    f = preset.values()
    only_r123 = {k: (f[k] if k in ("f1", "f2", "f3") else 0.0) for k in DIVIDED_KEYS}
    preset_ok = (f["f1"], f["f2"], f["f3"]) == (0.0, -1.0, -1.0)
    ax = h_max = phi_dev = worst = 0.0
    for m in (1, 2):
        form = standard_sasakian(m)
        st = form.structure
        for _ in range(5):
            p = rng.uniform(-1, 1, size=st.dim)
            ps = st.at(p)
            ax = max(ax, max(axiom_residuals(ps).values()))
            h_max = max(h_max, float(np.abs(ps.h).max()))
            R = riemann(st.metric, p)
            X = rng.normal(size=st.dim)
            X = X - (ps.eta @ X) * ps.xi
            phi_dev = max(phi_dev, abs(plane_sectional(R, X, ps.phi @ X) + 3))
        p = rng.uniform(-1, 1, size=st.dim)
        ps, R = st.at(p), riemann(st.metric, p)
        for X, Y, Z in rng.normal(size=(100, 3, st.dim)):
            worst = max(worst, float(np.abs(R.apply(X, Y, Z) - assemble_pointwise(only_r123, ps, X, Y, Z)).max()))
    ok = preset_ok and ax <= 1e-10 and h_max <= 1e-10 and phi_dev <= 1e-8 and worst <= 1e-8
    record(5, "standard Sasakian model", ok,
           f"axioms {ax:.1e}, h {h_max:.1e}, |K(X,phiX)+3| {phi_dev:.1e}, jet vs assembled {worst:.1e}", t0)


def test_criterion_06_xi_curvature_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(100):
        ps, _ = random_pointwise_structure(rng, int(rng.integers(1, 4)))
        coeffs = dict(zip(DIVIDED_KEYS, rng.normal(size=7)))
        X, Y = rng.normal(size=(2, ps.dim))
        worst = max(worst, xi_curvature_residual(coeffs, ps, X, Y))
    prefactor_ok = True
    for c, kappa, mu in ((-3, 1, 0), (2, "1/2", 3), (0, "-2", "5/3")):
        vals = preset_coefficients(CoefficientPreset("km_space_form", {"c": c, "kappa": kappa, "mu": mu})).values()
        k_got, m_got = xi_curvature_prefactors(vals)
        prefactor_ok &= math.isclose(k_got, float(Fraction(str(kappa))), abs_tol=1e-15)
        prefactor_ok &= math.isclose(m_got, float(Fraction(str(mu))), abs_tol=1e-15)
    ok = worst <= 1e-10 and prefactor_ok
    record(6, "R(X,Y)xi identity", ok, f"max residual {worst:.1e}, kappa/mu prefactors {'ok' if prefactor_ok else 'wrong'}", t0)


def test_criterion_07_legendrian_equality(legendrian_immersion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = ax_res = 0.0
    passed = True
    for p in rng.uniform(-1, 1, size=(10, 2)):
        rep = theorem_slack(legendrian_immersion, p)
        ctr = c_totally_real_report(legendrian_immersion, p)
        worst = max(worst, abs(rep.lhs), abs(rep.rhs))
        ax_res = max(ax_res, ctr.a_xi_residual)
        passed &= ctr.passed and rep.equality_flag and rep.passed
    ok = passed and worst <= 1e-8 and ax_res <= 1e-8
    record(7, "Legendrian equality case", ok, f"max |lhs|,|rhs| {worst:.1e}, A_xi residual {ax_res:.1e}", t0)


def test_criterion_08_closed_form_tau_and_gauss():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    worst_tau = 0.0
    for k in (2, 3, 4):
        for _ in range(100):
            m = int(rng.integers(k, 5))
            ps, F = random_pointwise_structure(rng, m)
            coeffs = dict(zip(DIVIDED_KEYS, rng.normal(size=7)))
            basis = (F[:, :m] @ rng.normal(size=(m, k))).T
            _, h, a = plane_restrictions(ps, basis)
            worst_tau = max(worst_tau, abs(tau_plane_closed_form(coeffs, h, a) - tau_plane_pairwise(coeffs, ps, basis)))
    worst_gauss = worst_2tau = 0.0
    for gen in (random_flat_immersion, random_curved_immersion):
        for _ in range(10):
            n1, n2 = (int(v) for v in rng.integers(1, 3, size=2))
            ci = gen(rng, n1, n2)
            for p in sample_box(rng, n1 + n2, 3):
                worst_gauss = max(worst_gauss, pair_gauss_residual(ci.immersion, p))
                worst_2tau = max(worst_2tau, two_tau_residual(ci.immersion, p))
    ok = worst_tau <= 1e-9 and worst_gauss <= 1e-8 and worst_2tau <= 1e-8
    record(8, "closed-form tau and Gauss identities", ok,
           f"closed vs pairwise {worst_tau:.1e}, Gauss {worst_gauss:.1e}, 2tau {worst_2tau:.1e}", t0)


def test_criterion_09_obstruction_verdicts():
    t0 = time.perf_counter()

    def scen(f1, **kw):
        return ObstructionScenario(1, 1, dict(zip(DIVIDED_KEYS, (f1, 0, 0, 0, 0, 0, 0))), **kw)

    got = [
        obstruction_report(scen(-1)).verdict,
        obstruction_report(scen(0)).verdict,
        obstruction_report(scen(0, branch="eigenfunction", eigenvalue=2.0)).verdict,
    ]
    want = ["ruled_out", "must_be_mixed_totally_geodesic", "ruled_out"]
    fixture = run_scenario(parse_scenario("obstruction"))
    from_fixture = [r["verdict"] for r in fixture.records[:3]]
    ok = got == want and from_fixture == want and fixture.exit_code == 0
    record(9, "obstruction verdicts", ok, f"api {got}, fixture {from_fixture}", t0)


def test_criterion_10_oracle_concordance_and_determinism(tmp_path):
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    worst_g = worst_r = 0.0
    for _ in range(20):
        dim = int(rng.integers(2, 5))
        metric = random_polynomial_metric(rng, dim)
        p = rng.uniform(-0.8, 0.8, size=dim)
        worst_g = max(worst_g, relative_error(christoffel_fd(metric, p), christoffel(metric, p)))
        worst_r = max(worst_r, relative_error(riemann_fd(metric, p), riemann(metric, p).up))
    outputs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        cli_main(["verify-proposition", "sphere", "--seed", "11", "-o", str(path)])
        outputs.append(path.read_bytes())
    identical = outputs[0] == outputs[1] and len(outputs[0]) > 0
    ok = worst_g <= 1e-5 and worst_r <= 1e-5 and identical
    record(10, "finite-difference concordance and determinism", ok,
           f"Christoffel rel {worst_g:.1e}, Riemann rel {worst_r:.1e}, reports identical {identical}", t0)


if __name__ == "__main__":
    import sys

    import pytest

    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
