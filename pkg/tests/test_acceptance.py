"""End-to-end acceptance run.

Every test prints one PASS/FAIL line (visible with ``pytest -s`` or on
failure). Expensive optimizations are shared through a module-scoped
cache. Set CPTSQUEEZE_FAST_ACCEPT=1 to cut the random-draw counts by 10x
during development; the shipped defaults run the full suite.
"""

import numpy as np
import pytest

from cptsqueeze import (analytic_optimum, optimize_over_detuning,
                        optimize_over_rabi, output_squeezing,
                        propagate_correlations, propagate_mean, ratio_scan,
                        response_coefficients, squeezing_spectrum,
                        steady_state, to_db, transmission)
from cptsqueeze.correlations import optimal_theta, quadrature_variance
from cptsqueeze.optimize import detuning_setting_compare

from conftest import (accept_draw_count, draw_propagation_params,
                      draw_steady_inputs, make_params)
from oracles import finite_difference_coefficients, relax_to_steady

# Optimization-grade propagation grid; the built-in refinement doubles it
# and verifies 1e-6 convergence, so results match the default-grid ones
# far beyond every tolerance used here.
XS_OPT = 500
XS_SPec = 400
XS_DRAW = 96

OD_FAMILY = (100.0, 300.0, 1000.0, 3000.0)
SPECTRUM_SETS = {
    "4a": (1000.0, 1.0, 0.010),
    "4b": (1000.0, 1.4, 0.019),
    "4c": (300.0, 1.0, 0.019),
    "4d": (300.0, 1.4, 0.043),
}


def report(name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def study():
    """Lazy shared cache for the expensive optimizations and spectra."""
    cache = {}

    def detuning_opt(alpha, omega):
        key = ("dopt", alpha, omega)
        if key not in cache:
            cache[key] = optimize_over_detuning(alpha, omega, xi_steps=XS_OPT)
        return cache[key]

    def rabi_opt(alpha, delta):
        key = ("ropt", alpha, delta)
        if key not in cache:
            cache[key] = optimize_over_rabi(alpha, delta, xi_steps=XS_OPT)
        return cache[key]

    def spectrum(name):
        key = ("spec", name)
        if key not in cache:
            alpha, omega, delta = SPECTRUM_SETS[name]
            p = make_params(alpha, delta, omega, xi_steps=XS_SPec)
            mean = propagate_mean(p)
            v0 = output_squeezing(p, mean).variance
            bw_est = omega ** 2 / np.sqrt(2.0 * alpha)
            per_est = 4.0 * np.pi * omega ** 2 / alpha
            ws = np.linspace(0.0, max(4.0 * bw_est, 3.0 * per_est), 161)
            spec = squeezing_spectrum(p, ws, mean)
            cache[key] = (spec, v0, bw_est, per_est)
        return cache[key]

    return {"detuning_opt": detuning_opt, "rabi_opt": rabi_opt,
            "spectrum": spectrum}


def test_c01_od1000_squeezing(study):
    over_delta = study["detuning_opt"](1000.0, 1.0)
    over_rabi = study["rabi_opt"](1000.0, 0.02)
    ok = over_delta.v_opt <= 0.112 and over_rabi.v_opt <= 0.112
    report("1 od-1000-squeezing", ok,
           f"V(delta-opt) = {over_delta.v_opt:.4f} "
           f"({to_db(over_delta.v_opt):+.2f} dB), "
           f"V(rabi-opt) = {over_rabi.v_opt:.4f} "
           f"({to_db(over_rabi.v_opt):+.2f} dB), threshold 0.112")


def test_c02_od_scaling_law(study):
    vals = [study["detuning_opt"](a, 1.0).v_opt for a in OD_FAMILY]
    slope = np.polyfit(np.log10(OD_FAMILY), np.log10(vals), 1)[0]
    ok = abs(slope + 0.5) <= 0.1
    report("2 od-scaling-law", ok,
           f"slope = {slope:.3f} (target -0.5 +/- 0.1), "
           f"{-10 * slope:.2f} dB per decade")


def test_c03_optimum_locations(study):
    checks = []
    for alpha, omega, target in ((1000.0, 1.0, 0.010), (300.0, 1.0, 0.019),
                                 (300.0, 1.4, 0.043)):
        got = study["detuning_opt"](alpha, omega).x_opt
        checks.append((f"delta_opt({alpha:g},{omega:g}) = {got:.5f} "
                       f"vs {target}", abs(got - target) / target <= 0.25))
    om_opt = study["rabi_opt"](1000.0, 0.02).x_opt
    checks.append((f"omega_opt(1000, 0.02) = {om_opt:.3f} vs 1.4",
                   abs(om_opt - 1.4) / 1.4 <= 0.20))
    ok = all(c[1] for c in checks)
    report("3 optimum-locations", ok, "; ".join(c[0] for c in checks))


def test_c04_transparency_limit():
    p = make_params(1000.0, 0.0, 1.0, xi_steps=XS_OPT)
    mean = propagate_mean(p)
    res = output_squeezing(p, mean)
    t_p, t_c = transmission(mean.profile)
    ok = (abs(res.variance - 1.0) <= 1e-6
          and abs(t_p - 1.0) <= 1e-9 and abs(t_c - 1.0) <= 1e-9)
    report("4 transparency-limit", ok,
           f"V - 1 = {res.variance - 1:.2e}, Tp - 1 = {t_p - 1:.2e}, "
           f"Tc - 1 = {t_c - 1:.2e}")


def test_c05_transmission_bound(study):
    details = []
    ok = True
    for alpha in OD_FAMILY:
        scan = study["detuning_opt"](alpha, 1.0)
        details.append(f"alpha={alpha:g}: Tp={scan.t_p_opt:.4f}, "
                       f"Tc={scan.t_c_opt:.4f}")
        ok &= scan.t_p_opt > 0.88 and scan.t_c_opt > 0.88
    report("5 transmission-bound", ok, "; ".join(details))


def test_c06_eit_null_result():
    ratios = (0.1, 0.5, 1.0, 2.0)
    scans = ratio_scan(1000.0, 1.0, ratios, delta_range=(1e-3, 0.1, 15),
                       xi_steps=XS_OPT)
    eit = scans[0.1]
    valid = np.isfinite(eit.variance)
    worst_db = np.abs(10 * np.log10(eit.variance[valid])).max()
    best_r = min(scans, key=lambda r: scans[r].v_opt)
    ok = worst_db < 0.5 and best_r == 1.0 and not eit.failures
    report("6 eit-null-result", ok,
           f"max |dB| at r=0.1: {worst_db:.3f} (limit 0.5); "
           f"argmin over r: {best_r:g}; "
           + ", ".join(f"V({r:g})={scans[r].v_opt:.4f}" for r in ratios))


def test_c07_detuning_setting_robustness():
    table = detuning_setting_compare(1000.0, 1.0, 0.02, xi_steps=XS_OPT)
    dbs = {s: to_db(scan.v_opt) for s, scan in table.items()}
    spread = max(dbs.values()) - min(dbs.values())
    ok = spread < 0.5
    report("7 detuning-setting-robustness", ok,
           f"spread = {spread:.4f} dB; "
           + ", ".join(f"{s}: {v:+.3f} dB" for s, v in dbs.items()))


def test_c08_spectrum_consistency_and_features(study):
    details = []
    ok = True
    feats = {}
    for name in SPECTRUM_SETS:
        spec, v0, bw_est, per_est = study["spectrum"](name)
        s0 = spec.s[0]
        rel = abs(s0 - v0) / v0
        ok &= rel <= 1e-3
        ok &= spec.bandwidth is not None and spec.period is not None
        ok &= 0.5 <= spec.bandwidth / bw_est <= 2.0
        ok &= 0.5 <= spec.period / per_est <= 2.0
        feats[name] = (spec.bandwidth, spec.period)
        details.append(f"{name}: |S0/V-1|={rel:.1e}, "
                       f"bw/est={spec.bandwidth / bw_est:.2f}, "
                       f"per/est={spec.period / per_est:.2f}")
    bw_ratio = feats["4b"][0] / feats["4a"][0]
    ok &= abs(bw_ratio - 1.96) / 1.96 <= 0.30
    per_ratio = feats["4a"][1] / feats["4c"][1]
    ok &= abs(per_ratio - 0.3) / 0.3 <= 0.30
    details.append(f"bw(4b)/bw(4a) = {bw_ratio:.2f} (target 1.96)")
    details.append(f"per(4a)/per(4c) = {per_ratio:.2f} (target 0.30)")
    report("8 spectrum-consistency", ok, "; ".join(details))


def test_c09_oracle_equivalences(study, rng):
    n_relax = accept_draw_count(1000)
    worst_relax = 0.0
    for _ in range(n_relax):
        p, om_p, om_c = draw_steady_inputs(rng)
        x = steady_state(p, om_p, om_c).x
        x_oracle = relax_to_steady(p, om_p, om_c)
        worst_relax = max(worst_relax, np.abs(x - x_oracle).max())
    ok_relax = worst_relax < 1e-8

    n_fd = accept_draw_count(1000)
    worst_fd = 0.0
    for _ in range(n_fd):
        p, om_p, om_c = draw_steady_inputs(rng)
        bundle = response_coefficients(p, om_p, om_c)
        row13, row23 = finite_difference_coefficients(p, om_p, om_c)
        want = np.concatenate([row13, row23])
        err = np.abs(np.array(bundle.coeffs) - want).max()
        worst_fd = max(worst_fd, err / max(np.abs(want).max(), 1.0))
    ok_fd = worst_fd < 1e-5

    n_dual = accept_draw_count(100)
    worst_dual = 0.0
    for _ in range(n_dual):
        p = draw_propagation_params(rng, xi_steps=XS_DRAW)
        mean = propagate_mean(p)
        cs = propagate_correlations(p, mean, method="scalar")
        cm = propagate_correlations(p, mean, method="matrix")
        worst_dual = max(worst_dual, abs(cs.c_pp - cm.c_pp),
                         abs(cs.n_p - cm.n_p), abs(cs.c_cc - cm.c_cc),
                         abs(cs.n_c - cm.n_c), abs(cs.c_pc - cm.c_pc),
                         abs(cs.x_pc - cm.x_pc))
    ok_dual = worst_dual < 1e-10

    num = study["detuning_opt"](1000.0, 1.0)
    ana_delta, ana_v = analytic_optimum(1000.0, 1.0)
    loc_err = abs(num.x_opt - ana_delta) / ana_delta
    v_gap_db = abs(to_db(num.v_opt) - to_db(ana_v))
    ok_ana = loc_err <= 0.30 and v_gap_db <= 3.0

    ok = ok_relax and ok_fd and ok_dual and ok_ana
    report("9 oracle-equivalences", ok,
           f"relaxation({n_relax} draws) max |dx| = {worst_relax:.2e}; "
           f"finite-diff({n_fd}) max rel = {worst_fd:.2e}; "
           f"dual-form({n_dual}) max gap = {worst_dual:.2e}; "
           f"analytic: loc {loc_err * 100:.1f}%, V gap {v_gap_db:.2f} dB")


def test_c10_invariant_suites(rng):
    n_steady = accept_draw_count(1000)
    for _ in range(n_steady):
        p, om_p, om_c = draw_steady_inputs(rng)
        state = steady_state(p, om_p, om_c)
        state.validate()  # positivity, conservation, conjugation pairs
        from cptsqueeze import build_diffusion
        d = build_diffusion(state, p)
        assert np.abs(d - d.conj().T).max() < 1e-12 * max(1.0, np.abs(d).max())
        assert np.linalg.eigvalsh(0.5 * (d + d.conj().T)).min() > -1e-9

    n_prop = accept_draw_count(1000)
    for _ in range(n_prop):
        p = draw_propagation_params(rng, xi_steps=XS_DRAW)
        mean = propagate_mean(p)  # grid-refinement convergence built in
        out = (np.abs(mean.profile.omega_p[-1]) ** 2
               + np.abs(mean.profile.omega_c[-1]) ** 2)
        assert out <= p.input_power + 1e-9  # energy passivity
        corr = propagate_correlations(p, mean)
        corr.validate(tol=1e-9)
        th = optimal_theta(corr.c_pp)
        prod = (quadrature_variance(corr, th)
                * quadrature_variance(corr, th + np.pi / 2))
        assert prod >= 1.0 - 1e-6  # uncertainty product
    report("10 invariant-suites", True,
           f"{n_steady} steady draws and {n_prop} propagation draws clean")
