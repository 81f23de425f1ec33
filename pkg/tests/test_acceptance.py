"""Acceptance suite: every exit criterion at its stated tolerance.

Each criterion prints one line 'ACCEPTANCE <k>: PASS|FAIL <detail>'.
Sub-checks that exact computation shows to be unattainable at these finite
configurations (4c in part, 5, 6b, 7 for the damped-series band and the
weighted-sum monotonicity) are asserted exactly as stated anyway; see the
assertion messages for the measured values.
"""

import math
import time

import numpy as np
from oracles import quadrature_bayes
from scipy.stats import chi2

from heatbayes import (
    CoefficientSequence,
    ExperimentConfig,
    LinearFunctional,
    Mu0Source,
    ObservationSet,
    PriorSpec,
    compute_posterior,
    render_panel,
    run_ball_coverage,
    run_interval_coverage,
    run_risk_curve,
)
from heatbayes.asymptotics import (
    CSBOUND_SET,
    CSBOUND_TRUNC,
    NORM_SUP_SET,
    SERIES_DAMPED,
    SERIES_UNDAMPED,
    crossover_residual,
    integral_bound_check,
    lemma_csbound_check,
    lemma_norm_trace,
    lemma_series_trace,
)
from heatbayes.credible import QuadraticForm, quadratic_form_quantile
from heatbayes.experiments import FIGURE_PROTOCOLS

SEED = 20240


def report(k: int, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {k}: {'PASS' if ok else 'FAIL'} {detail}")


def test_criterion_1_conjugacy_oracle():
    """Closed-form posterior vs quadrature Bayes, 1e-6 absolute, < 10 s."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(50):
        log_a = rng.uniform(math.log(1e-6), math.log(1e6))
        lam = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
        kappa = math.exp(rng.uniform(math.log(0.05), 0.0))
        y = rng.uniform(-3.0, 3.0)
        n = math.exp(log_a) / (lam * kappa**2)
        prior = PriorSpec.polynomial(1.0, math.sqrt(lam))
        kap = CoefficientSequence(np.array([kappa]), 1)
        obs = ObservationSet(CoefficientSequence(np.array([y]), 1), n, 0)
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            summ = compute_posterior(prior, kap, n, obs)
        mean_q, var_q = quadrature_bayes(n, lam, kappa, y)
        worst = max(worst, abs(summ.mean.values[0] - mean_q),
                    abs(summ.variance.values[0] - var_q))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-6 and elapsed < 10.0
    report(1, ok, f"(worst |closed - quadrature| {worst:.2e}, {elapsed:.1f} s)")
    assert worst < 1e-6
    assert elapsed < 10.0


def test_criterion_2_quantile_oracle():
    """Equal-weight quantiles vs chi-square, 3 MC standard errors, < 30 s."""
    t0 = time.perf_counter()
    failures = []
    for k in (1, 3, 10):
        for p in (0.5, 0.95, 0.99):
            w = CoefficientSequence(np.ones(k), k)
            est = quadratic_form_quantile(QuadraticForm.from_weights(w), p,
                                          200_000, seed=SEED + 7 * k)
            target = chi2.ppf(p, k)
            if abs(est.value - target) > 3 * est.stderr:
                failures.append((k, p, est.value, target, est.stderr))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 30.0
    report(2, ok, f"(9 cases, {elapsed:.1f} s)" if ok else f"{failures}")
    assert not failures, failures
    assert elapsed < 30.0


def test_criterion_3_bayesian_self_consistency():
    """Prior-drawn truth: ball and interval coverage within 3 binomial
    standard errors of 0.95 for both families; n = 1e4, 1000 reps, < 5 min."""
    t0 = time.perf_counter()
    se3 = 3 * math.sqrt(0.95 * 0.05 / 1000)
    rows = []
    for prior in (PriorSpec.polynomial(1.0), PriorSpec.exponential(1.0)):
        cfg = ExperimentConfig(prior=prior, n_grid=(1e4,), gamma=0.05,
                               replications=1000, mu0=Mu0Source.prior_draw(),
                               seed=SEED)
        ball = run_ball_coverage(cfg).column("coverage")[0]
        L = LinearFunctional.point_evaluation(0.5, 100)
        interval = run_interval_coverage(cfg, L).column("coverage")[0]
        rows.append((prior.kind.value, ball, interval))
    elapsed = time.perf_counter() - t0
    devs = [max(abs(b - 0.95), abs(i - 0.95)) for _, b, i in rows]
    ok = all(d <= se3 for d in devs) and elapsed < 300.0
    report(3, ok, f"({rows[0][0]} ball {rows[0][1]:.3f} int {rows[0][2]:.3f}; "
                  f"{rows[1][0]} ball {rows[1][1]:.3f} int {rows[1][2]:.3f}; "
                  f"tol {se3:.4f}, {elapsed:.0f} s)")
    for name, ball, interval in rows:
        assert abs(ball - 0.95) <= se3, (name, "ball", ball)
        assert abs(interval - 0.95) <= se3, (name, "interval", interval)
    assert elapsed < 300.0


def test_criterion_4_oversmoothing_coverage_collapse():
    """At n = 1e8 with the cubic truth: rough prior covers, smooth priors
    fail, and the stated strict ordering holds with 3-standard-error gaps."""
    t0 = time.perf_counter()
    covs, ses = {}, {}
    for key, prior in (("poly1", PriorSpec.polynomial(1.0)),
                       ("poly3", PriorSpec.polynomial(3.0)),
                       ("exp5", PriorSpec.exponential(5.0))):
        cfg = ExperimentConfig(prior=prior, n_grid=(1e8,), gamma=0.05,
                               replications=1000, seed=SEED)
        rep = run_ball_coverage(cfg)
        covs[key] = rep.column("coverage")[0]
        ses[key] = rep.column("coverage_se")[0]
    elapsed = time.perf_counter() - t0

    def gap_ok(a, b):
        return covs[a] - covs[b] > 3 * math.hypot(ses[a], ses[b])

    clauses = {
        "poly1>=0.95": covs["poly1"] >= 0.95,
        "exp5<=0.5": covs["exp5"] <= 0.5,
        "gap poly1>poly3": gap_ok("poly1", "poly3"),
        "gap poly3>exp5": gap_ok("poly3", "exp5"),
    }
    ok = all(clauses.values()) and elapsed < 600.0
    report(4, ok, f"(cov poly1 {covs['poly1']:.3f}, poly3 {covs['poly3']:.3f}, "
                  f"exp5 {covs['exp5']:.3f}; {elapsed:.0f} s; "
                  + ", ".join(f"{k}={'ok' if v else 'FAIL'}"
                              for k, v in clauses.items()) + ")")
    assert covs["poly1"] >= 0.95, covs
    assert covs["exp5"] <= 0.5, covs
    assert gap_ok("poly1", "poly3"), (covs, ses)
    assert gap_ok("poly3", "exp5"), (covs, ses)
    assert elapsed < 600.0


def test_criterion_5_radius_ratio_growth():
    """Credible/frequentist radius ratio strictly increasing over
    n in {1e4, 1e6, 1e8} for the rough polynomial prior, < 5 min."""
    t0 = time.perf_counter()
    cfg = ExperimentConfig(prior=PriorSpec.polynomial(1.0),
                           n_grid=(1e4, 1e6, 1e8), gamma=0.05,
                           replications=2, seed=SEED)
    ratios = run_ball_coverage(cfg).column("radius_ratio")
    elapsed = time.perf_counter() - t0
    increasing = bool(np.all(np.diff(ratios) > 0))
    ok = increasing and elapsed < 300.0
    report(5, ok, f"(ratios {np.round(ratios, 4).tolist()}, {elapsed:.0f} s)")
    assert increasing, f"radius ratios not strictly increasing: {ratios}"
    assert elapsed < 300.0


def test_criterion_6_contraction_trend():
    """Exact posterior risk strictly decreasing along n in {1e2..1e8} for
    the four figure priors; the exponential-prior trace risk (log n)^2.4
    stays within a factor 4, < 5 min."""
    t0 = time.perf_counter()
    grid = (1e2, 1e4, 1e6, 1e8)
    priors = {"poly1": PriorSpec.polynomial(1.0),
              "poly3": PriorSpec.polynomial(3.0),
              "exp1": PriorSpec.exponential(1.0),
              "exp5": PriorSpec.exponential(5.0)}
    totals = {}
    for key, prior in priors.items():
        cfg = ExperimentConfig(prior=prior, n_grid=grid, replications=2,
                               seed=SEED)
        totals[key] = run_risk_curve(cfg).column("risk_total")
    elapsed = time.perf_counter() - t0
    decreasing = {k: bool(np.all(np.diff(v) < 0)) for k, v in totals.items()}
    trace = totals["exp1"] * np.log(np.array(grid)) ** 2.4
    band = float(trace.max() / trace.min())
    ok = all(decreasing.values()) and band <= 4.0 and elapsed < 300.0
    report(6, ok, f"(decreasing {decreasing}, exp1 normalized band "
                  f"{band:.2f} vs 4, {elapsed:.0f} s)")
    for key, dec in decreasing.items():
        assert dec, (key, totals[key])
    assert band <= 4.0, f"exp1 risk (log n)^2.4 spans factor {band:.2f}"
    assert elapsed < 300.0


def test_criterion_7_lemma_suite():
    """Series-asymptotics checks at their stated tolerances, < 1 min."""
    t0 = time.perf_counter()
    clauses = {}

    worst_resid = 0.0
    for N in (1e4, 1e8, 1e12, 1e16):
        for u, p in ((0.0, 1.0), (1.0, 1.0), (1.0, 2.0)):
            worst_resid = max(worst_resid, crossover_residual(N, u, p)[1])
    clauses["crossover residual <= 1e-10"] = worst_resid <= 1e-10

    root, _ = crossover_residual(1e12, 1.0, 1.0)
    ratio = root / math.sqrt(math.log(1e12))
    clauses["crossover asymptote within 5%"] = abs(ratio - 1.0) <= 0.05

    damped = lemma_series_trace(SERIES_DAMPED)
    clauses["damped series band <= 4"] = damped.band() <= 4.0
    undamped = lemma_series_trace(SERIES_UNDAMPED)
    clauses["undamped series band <= 4"] = undamped.band() <= 4.0
    normsup = lemma_norm_trace(NORM_SUP_SET)
    clauses["norm-sup band <= 4"] = normsup.band() <= 4.0

    i = np.arange(1, CSBOUND_TRUNC + 1, dtype=float)
    mu = CoefficientSequence(i ** (-(CSBOUND_SET.t + 1.0) / 2.0 - 0.01),
                             CSBOUND_TRUNC)
    cs = lemma_csbound_check(mu, CSBOUND_SET)
    clauses["weighted-sum trace decreasing"] = cs.decreasing_over_top(3)

    integral = integral_bound_check(1.0, 1.0, (2.0, 5.0, 10.0, 30.0))
    clauses["growth integral within 2% at K=30"] = (
        abs(integral.part1.ratio[-1] - 1.0) <= 0.02)
    clauses["tail integral bound holds"] = bool(
        np.all(integral.part2.ratio <= 1.0))

    elapsed = time.perf_counter() - t0
    ok = all(clauses.values()) and elapsed < 60.0
    report(7, ok, f"({elapsed:.0f} s; "
           + ", ".join(f"{k}={'ok' if v else 'FAIL'}"
                       for k, v in clauses.items()) + ")")
    assert clauses["crossover residual <= 1e-10"], worst_resid
    assert clauses["crossover asymptote within 5%"], ratio
    assert clauses["damped series band <= 4"], damped.ratio
    assert clauses["undamped series band <= 4"], undamped.ratio
    assert clauses["norm-sup band <= 4"], normsup.ratio
    assert clauses["weighted-sum trace decreasing"], cs.ratio
    assert clauses["growth integral within 2% at K=30"], integral.part1.ratio
    assert clauses["tail integral bound holds"], integral.part2.ratio
    assert elapsed < 60.0


def test_criterion_8_figure_reproduction():
    """Panel protocols of all four figures regenerate deterministically;
    at n = 1e8 the rough polynomial prior's band covers more of the true
    curve than the smooth one, < 10 min."""
    t0 = time.perf_counter()
    panels = {}
    for name, maker in FIGURE_PROTOCOLS.items():
        specs = maker()
        assert len(specs) == 10, name
        cfg = ExperimentConfig(prior=specs[0].prior, n_grid=(specs[0].n,),
                               gamma=0.05, seed=SEED)
        panels[name] = [render_panel(cfg, s) for s in specs]

    # determinism: re-render one cheap panel per figure, compare tables
    rerun_ok = True
    for name, maker in FIGURE_PROTOCOLS.items():
        specs = maker()
        pick = 2 if name in ("fig3", "fig4") else 5  # avoid the heavy panels
        cfg = ExperimentConfig(prior=specs[pick].prior,
                               n_grid=(specs[pick].n,), gamma=0.05, seed=SEED)
        again = render_panel(cfg, specs[pick])
        _, rows_a = panels[name][pick].to_table()
        _, rows_b = again.to_table()
        rerun_ok = rerun_ok and rows_a == rows_b

    fig3 = {(s.prior.alpha, s.n): p
            for s, p in zip(FIGURE_PROTOCOLS["fig3"](), panels["fig3"])}
    frac_rough = fig3[(1.0, 1e8)].coverage_fraction()
    frac_smooth = fig3[(5.0, 1e8)].coverage_fraction()
    elapsed = time.perf_counter() - t0
    ok = rerun_ok and frac_rough > frac_smooth and elapsed < 600.0
    report(8, ok, f"(40 panels; deterministic={rerun_ok}; band fraction "
                  f"alpha=1 {frac_rough:.3f} > alpha=5 {frac_smooth:.3f}; "
                  f"{elapsed:.0f} s)")
    assert rerun_ok
    assert frac_rough > frac_smooth, (frac_rough, frac_smooth)
    assert elapsed < 600.0
