"""End-to-end acceptance checks at J = Q = P = Gamma = 1, unit-power Rayleigh.

Each test prints exactly one ``ACCEPTANCE n [...]: PASS/FAIL`` line (run
pytest with ``-s`` to see them live) and then asserts, so a failed criterion
is both visible in the log and red in the suite.
"""

import math

import numpy as np
from scipy import integrate

from crmid.analysis import (
    bound_constants,
    expected_capped_power,
    expected_interference_attenuation,
    reference_mdg_exact,
)
from crmid.cli import run_experiment, validate_spec
from crmid.metrics import (
    asymptotic_ratio,
    estimate_mdg_kappa,
    estimate_mdg_ratio,
    normalized_throughput_curve,
)
from crmid.model import NetworkConfig, NetworkKind, NetworkVariant, RngSpec, sample_state
from crmid.scheduler import per_user_snr

SEED = 42
CR_KINDS = (NetworkKind.c_mac(), NetworkKind.c_bc(), NetworkKind.c_pac())
ALL_KINDS = CR_KINDS + (NetworkKind.reference(),)

_ALPHAS = {
    NetworkVariant.CMAC: 1.17439,
    NetworkVariant.CBC: 1.67688,
    NetworkVariant.CPAC: 1.96930,
}


def _config(kind, users):
    return NetworkConfig(kind=kind, users=users)


def _report(number: int, title: str, ok: bool, detail: str = "") -> str:
    verdict = "PASS" if ok else "FAIL"
    line = f"ACCEPTANCE {number} [{title}]: {verdict}"
    if detail:
        line += f" -- {detail}"
    print("\n" + line, flush=True)
    return line


def test_acceptance_1_theorem_sandwich():
    K_values = (1, 2, 4, 8, 16, 32, 64, 100)
    n = 100_000
    rng = RngSpec(SEED)
    violations = []
    for kind in CR_KINDS:
        alpha = _ALPHAS[kind.variant]
        for K in K_values:
            est = estimate_mdg_ratio(_config(kind, K), n, rng)
            lower = reference_mdg_exact(K) - 3.0 * est.std_error
            upper = alpha * reference_mdg_exact(K) + 3.0 * est.std_error
            if not lower <= est.mean <= upper:
                violations.append(
                    f"{kind.label} K={K}: {est.mean:.4f} outside [{lower:.4f}, {upper:.4f}]"
                )
    ok = not violations
    detail = "; ".join(violations) if violations else f"24 points within bounds at n={n}"
    _report(1, "Theorem sandwich, diversity gain", ok, detail)
    assert ok, violations


def test_acceptance_2_per_sample_proof_steps():
    n = 10_000
    K = 8
    config = _config(NetworkKind.c_pac(), K)
    rng = RngSpec(SEED)
    power = config.symmetric_power()
    bad_lower = bad_upper = 0
    for i in range(n):
        state = sample_state(config, rng, i)
        snrs = per_user_snr(state, config)
        realized = snrs.max()
        strongest_h_user = int(np.argmax(state.h))
        if realized < snrs[strongest_h_user]:
            bad_lower += 1
        if realized > power * state.h.max():
            bad_upper += 1
    ok = bad_lower == 0 and bad_upper == 0
    _report(
        2,
        "Per-sample proof-step inequalities",
        ok,
        f"{n} draws, exact: lower-step violations={bad_lower}, upper-step violations={bad_upper}",
    )
    assert ok


def test_acceptance_3_reference_oracle():
    n = 100_000
    rng = RngSpec(SEED)
    failures = []
    for K in (2, 10, 100):
        est = estimate_mdg_ratio(_config(NetworkKind.reference(), K), n, rng)
        target = reference_mdg_exact(K)
        if abs(est.mean - target) > 3.0 * est.std_error:
            failures.append(f"K={K}: {est.mean:.5f} vs H_K={target:.5f} (se={est.std_error:.2g})")
    ok = not failures
    _report(3, "Reference network harmonic oracle", ok, "; ".join(failures) or "H_2, H_10, H_100")
    assert ok, failures


def test_acceptance_4_mdg_definitions_agree():
    n = 100_000
    rng = RngSpec(SEED)
    failures = []
    for kind in ALL_KINDS:
        for K in (2, 10, 50):
            ratio = estimate_mdg_ratio(_config(kind, K), n, rng)
            kappa = estimate_mdg_kappa(_config(kind, K), n, rng)
            combined = math.hypot(ratio.std_error, kappa.std_error)
            if abs(ratio.mean - kappa.mean) > 3.0 * combined:
                failures.append(
                    f"{kind.label} K={K}: |{ratio.mean:.4f} - {kappa.mean:.4f}| > 3x{combined:.2g}"
                )
    ok = not failures
    _report(4, "MDG ratio and kappa forms agree", ok, "; ".join(failures) or "12 comparisons")
    assert ok, failures


def test_acceptance_5_fig1_orderings():
    n = 100_000
    points = normalized_throughput_curve(ALL_KINDS, [16, 64, 100], n, RngSpec(SEED))
    by_network = {
        kind.variant: {p.K: p.value for p in points if p.network.variant is kind.variant}
        for kind in ALL_KINDS
    }
    failures = []
    for K in (16, 64, 100):
        reference = by_network[NetworkVariant.REFERENCE][K]
        pac = by_network[NetworkVariant.CPAC][K]
        for variant in (NetworkVariant.CMAC, NetworkVariant.CBC, NetworkVariant.CPAC):
            value = by_network[variant][K]
            slack = 3.0 * math.hypot(value.std_error, reference.std_error)
            if value.mean < reference.mean - slack:
                failures.append(f"{variant.value} K={K}: {value.mean:.4f} < ref {reference.mean:.4f}")
        for variant in (NetworkVariant.CMAC, NetworkVariant.CBC):
            value = by_network[variant][K]
            slack = 3.0 * math.hypot(pac.std_error, value.std_error)
            if pac.mean < value.mean - slack:
                failures.append(f"pac K={K}: {pac.mean:.4f} < {variant.value} {value.mean:.4f}")
    ok = not failures
    _report(
        5,
        "Normalized-throughput orderings",
        ok,
        "; ".join(failures) or "every secondary network >= Reference, C-PAC largest",
    )
    assert ok, failures


def test_acceptance_6_asymptotic_trend():
    n = 2_000
    rng = RngSpec(SEED)
    K_values = (10**3, 10**4, 10**5, 10**6)
    band = (0.90, 1.25)
    results = {}
    for kind in ALL_KINDS:
        results[kind.label] = {K: asymptotic_ratio(_config(kind, K), n, rng) for K in K_values}
    band_failures = []
    trend_failures = []
    for label, per_k in results.items():
        for K, est in per_k.items():
            if not band[0] <= est.mean <= band[1]:
                band_failures.append(f"{label} K=1e{int(math.log10(K))}: {est.mean:.4f}")
        first, last = per_k[K_values[0]], per_k[K_values[-1]]
        slack = 3.0 * math.hypot(first.std_error, last.std_error)
        if abs(last.mean - 1.0) > abs(first.mean - 1.0) + slack:
            trend_failures.append(
                f"{label}: |{last.mean:.4f}-1| > |{first.mean:.4f}-1| + {slack:.3f}"
            )
    summary = ", ".join(
        f"{label}: " + "/".join(f"{per_k[K].mean:.3f}" for K in K_values)
        for label, per_k in results.items()
    )
    ok = not band_failures and not trend_failures
    detail = f"ratios(K=1e3/1e4/1e5/1e6) {summary}"
    if band_failures:
        detail += f"; outside [{band[0]}, {band[1]}]: " + "; ".join(band_failures)
    if trend_failures:
        detail += "; trend: " + "; ".join(trend_failures)
    _report(6, "Asymptotic throughput scaling", ok, detail)
    assert ok, detail


def test_acceptance_7_analytic_constants():
    # Independent adaptive-quadrature oracles on the defining integrals.
    capped_quad = sum(
        integrate.quad(lambda g: min(1.0, 1.0 / g) * math.exp(-g) if g > 0 else 1.0, a, b)[0]
        for a, b in ((0.0, 1.0), (1.0, np.inf))
    )
    attenuation_quad = integrate.quad(lambda e: math.exp(-e) / (1.0 + e), 0, np.inf)[0]
    capped = expected_capped_power(1.0, 1.0)
    attenuation = expected_interference_attenuation(1.0)
    quad_ok = (
        abs(capped - 0.851504) < 1e-5
        and abs(capped - capped_quad) < 1e-5
        and abs(attenuation - 0.596347) < 1e-5
        and abs(attenuation - attenuation_quad) < 1e-5
    )

    n = 10**7
    gen = np.random.default_rng(SEED)
    g = gen.standard_exponential(n)
    capped_draws = np.minimum(1.0, 1.0 / g)
    capped_mc, capped_se = capped_draws.mean(), capped_draws.std(ddof=1) / math.sqrt(n)
    e = gen.standard_exponential(n)
    attenuation_draws = 1.0 / (1.0 + e)
    attenuation_mc = attenuation_draws.mean()
    attenuation_se = attenuation_draws.std(ddof=1) / math.sqrt(n)
    mc_ok = (
        abs(capped - capped_mc) < 4.0 * capped_se
        and abs(attenuation - attenuation_mc) < 4.0 * attenuation_se
    )
    ok = quad_ok and mc_ok
    _report(
        7,
        "Analytic constants vs oracles",
        ok,
        f"E[min]={capped:.6f} (quad {capped_quad:.6f}, MC {capped_mc:.6f}), "
        f"E[1/(1+e)]={attenuation:.6f} (quad {attenuation_quad:.6f}, MC {attenuation_mc:.6f})",
    )
    assert ok


def test_acceptance_8_worker_determinism(tmp_path):
    outputs = []
    for workers in ("1", "8"):
        path = tmp_path / f"suite_w{workers}.csv"
        spec = validate_spec(
            {
                "preset": "theorem-suite",
                "users": "1,2,4",
                "samples": "5000",  # two dispatch batches, so 8 workers really split the work
                "seed": str(SEED),
                "workers": workers,
                "output": str(path),
            }
        )
        assert run_experiment(spec) == 0
        outputs.append(path.read_bytes())
    identical = outputs[0] == outputs[1]

    streaming = []
    for workers in ("1", "8"):
        path = tmp_path / f"tp_w{workers}.csv"
        spec = validate_spec(
            {
                "preset": "custom",
                "quantity": "throughput",
                "users": "1000",
                "samples": "64",
                "seed": str(SEED),
                "workers": workers,
                "output": str(path),
            }
        )
        assert run_experiment(spec) == 0
        streaming.append(path.read_bytes())
    identical = identical and streaming[0] == streaming[1]
    _report(8, "Byte-identical output across worker counts", identical, "workers 1 vs 8")
    assert identical


def test_acceptance_alpha_constants_match_analysis():
    # The alpha values used in criterion 1 are reproduced by the analysis module.
    constants = bound_constants(_config(NetworkKind.c_pac(), 2))
    assert abs(constants.alpha_mac - _ALPHAS[NetworkVariant.CMAC]) < 1e-5
    assert abs(constants.alpha_bc - _ALPHAS[NetworkVariant.CBC]) < 1e-5
    assert abs(constants.alpha_pac - _ALPHAS[NetworkVariant.CPAC]) < 1e-5
