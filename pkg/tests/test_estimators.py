import numpy as np
import pytest

from discgrad.controlvariate import init_control_variate
from discgrad.core import (
    BinaryLogits,
    CategoricalLogits,
    HierarchicalBernoulliSpec,
    RngStream,
    logit,
)
from discgrad.estimators import (
    EstimatorConfig,
    RunningMean,
    argmax_binary,
    arm_factorial,
    cr_gradient,
    make_estimator,
    r1_multiplier,
    ram_categorical,
    ram_factorial,
    ram_hierarchical,
    rebar_decomposition,
    rebar_gradient,
    reinforce_gradient,
    relax_plus_gradient,
    sampled_ram_categorical,
    sampled_ram_factorial,
)
from discgrad.objectives import Objective, random_quadratic, toy_binary
from discgrad.oracle import bias_variance_report, enumerate_gradient

SPEC_08 = BinaryLogits(np.array([logit(0.8)]))
TOY = toy_binary("convex")


def constant_objective(value=3.25):
    return Objective(eval_discrete=lambda z: value,
                     eval_relaxed=lambda z: value,
                     grad_relaxed=lambda z: np.zeros_like(z))


def mc_check(estimator, spec, f, n=40_000, seed=17):
    """Mean within 4 standard errors of the enumeration oracle, per coordinate."""
    rep = bias_variance_report(estimator, spec, f, n, RngStream(seed=seed))
    assert np.all(np.abs(rep.bias) <= 4.0 * np.maximum(rep.stderr, 1e-14)), \
        f"bias {rep.bias} vs 4se {4 * rep.stderr}"
    return rep


class TestRamFactorial:
    def test_single_variable_closed_form_zero_variance(self):
        r = RngStream(seed=0)
        grads = [ram_factorial(SPEC_08, TOY, r.child(k)).grad_logits[0] for k in range(50)]
        assert grads[0] == pytest.approx(0.016, abs=1e-12)
        assert np.ptp(grads) == 0.0

    def test_constant_objective_zero(self):
        est = ram_factorial(BinaryLogits(np.array([0.3, -0.7])), constant_objective(),
                            RngStream(seed=1))
        assert np.all(est.grad_logits == 0.0)

    def test_two_variable_linear_expectation(self):
        f = Objective(eval_discrete=lambda z: z[0] + 2 * z[1],
                      eval_relaxed=lambda z: z[0] + 2 * z[1],
                      grad_relaxed=lambda z: np.array([1.0, 2.0]))
        spec = BinaryLogits(np.zeros(2))
        est = ram_factorial(spec, f, RngStream(seed=2))
        assert est.grad_logits == pytest.approx([0.25, 0.5], abs=1e-12)
        assert est.n_evals == 3

    def test_matches_oracle_m6(self):
        spec = BinaryLogits(np.array([0.3, -0.8, 1.2, 0.0, 2.0, -1.5]))
        mc_check(ram_factorial, spec, random_quadratic(6, RngStream(seed=33)), n=20_000)


class TestRamHierarchical:
    @staticmethod
    def _independent_spec():
        return HierarchicalBernoulliSpec(
            (1, 1),
            lambda k, prev: np.array([0.0]),
            logits_jac=lambda k, prev: np.array([[0.0]]))

    def test_independent_layers_reduce_to_factorial(self):
        f = Objective(eval_discrete=lambda z: z[0] + z[1],
                      eval_relaxed=lambda z: z[0] + z[1],
                      grad_relaxed=lambda z: np.ones(2))
        rep = bias_variance_report(ram_hierarchical, self._independent_spec(), f,
                                   5000, RngStream(seed=3))
        assert rep.oracle_grad == pytest.approx([0.25, 0.25], abs=1e-12)
        assert np.all(np.abs(rep.bias) <= 4 * np.maximum(rep.stderr, 1e-14))

    def test_deterministic_downstream_gives_zero_variance_layer1(self):
        # layer 2 is a hard copy of layer 1 (clamped logits), so the layer-1
        # branch difference is a constant
        spec = HierarchicalBernoulliSpec(
            (1, 1),
            lambda k, prev: np.array([0.2]) if k == 0 else np.array([60.0 * (2 * prev[0][0] - 1)]))
        f = Objective(eval_discrete=lambda z: (z[0] + z[1] - 0.9) ** 2,
                      eval_relaxed=lambda z: (z[0] + z[1] - 0.9) ** 2,
                      grad_relaxed=lambda z: np.full(2, 2 * (z[0] + z[1] - 0.9)))
        r = RngStream(seed=4)
        g1 = [ram_hierarchical(spec, f, r.child(k)).grad_logits[0] for k in range(200)]
        assert np.ptp(g1) == 0.0

    def test_matches_oracle_with_chain(self):
        def logits_fn(k, prev):
            if k == 0:
                return np.array([0.4, -0.6])
            return np.array([0.2 + 0.9 * prev[0][0] - 0.5 * prev[0][1],
                             -0.3 + 0.7 * prev[0][0]])

        spec = HierarchicalBernoulliSpec((2, 2), logits_fn)
        mc_check(ram_hierarchical, spec, random_quadratic(4, RngStream(seed=66)), n=30_000)

    def test_cost_is_m_plus_one(self):
        est = ram_hierarchical(self._independent_spec(), constant_objective(), RngStream(seed=5))
        assert est.n_evals == 3


class TestRamCategorical:
    def test_single_variable_uniform_lookup(self):
        fvals = np.array([1.0, 2.0, 3.0])
        f = Objective(eval_discrete=lambda y: float(fvals @ y[0]),
                      eval_relaxed=lambda y: float(fvals @ y[0]),
                      grad_relaxed=lambda y: fvals[None, :])
        spec = CategoricalLogits(np.zeros((1, 3)))
        est = ram_categorical(spec, f, RngStream(seed=6))
        assert est.grad_logits[0] == pytest.approx([-1 / 3, 0.0, 1 / 3], abs=1e-12)
        assert est.n_evals == 3

    def test_constant_objective_zero(self):
        spec = CategoricalLogits(np.array([[0.5, -0.5, 0.1]]))
        est = ram_categorical(spec, constant_objective(), RngStream(seed=7))
        assert np.allclose(est.grad_logits, 0.0, atol=1e-15)

    def test_two_class_matches_binary_parameterization(self):
        # categorical A=2 gradient maps to +-(binary gradient)
        lb = 0.7
        bspec = BinaryLogits(np.array([lb]))
        cspec = CategoricalLogits(np.array([[0.0, lb]]))  # class 1 ~ z=1
        f_bin = toy_binary("convex")
        f_cat = Objective(eval_discrete=lambda y: float((y[0, 1] - 0.45) ** 2),
                          eval_relaxed=lambda y: float((y[0, 1] - 0.45) ** 2),
                          grad_relaxed=lambda y: np.array([[0.0, 2 * (y[0, 1] - 0.45)]]))
        gb = enumerate_gradient(bspec, f_bin)
        gc = enumerate_gradient(cspec, f_cat)
        assert gc[0, 1] == pytest.approx(gb[0], abs=1e-12)
        assert gc[0, 0] == pytest.approx(-gb[0], abs=1e-12)
        est = ram_categorical(cspec, f_cat, RngStream(seed=8))
        assert est.grad_logits[0, 1] == pytest.approx(gb[0], abs=1e-12)

    def test_matches_oracle(self):
        spec = CategoricalLogits(np.array([[0.2, -0.4, 0.6], [0.0, 0.3, -0.3]]))
        f = random_quadratic(6, RngStream(seed=44), shape=(2, 3))
        mc_check(ram_categorical, spec, f, n=20_000)


class TestSampledRam:
    def test_no_clip_weight_matches_flat_rate(self):
        # q=0.5, beta=2: inclusion probability 0.5, weight = beta/4
        q = 0.5
        p = min(1.0, 4 * q * (1 - q) / 2.0)
        assert p == 0.5 and q * (1 - q) / p == pytest.approx(0.5, abs=1e-15)

    def test_reduces_to_ram_when_all_kept(self):
        spec = BinaryLogits(np.array([0.2, -0.1, 0.05]))  # q near 0.5
        f = random_quadratic(3, RngStream(seed=9))
        for k in range(20):
            a = sampled_ram_factorial(spec, f, RngStream(seed=10).child(k), beta=0.5)
            b = ram_factorial(spec, f, RngStream(seed=10).child(k))
            assert np.array_equal(a.grad_logits, b.grad_logits)
            assert a.n_evals == b.n_evals

    def test_unbiased_with_clipping(self):
        spec = BinaryLogits(np.array([0.3, -2.5, 1.2, 3.0, 0.0, -0.7, 2.2, -1.1]))
        f = random_quadratic(8, RngStream(seed=11))
        rep = mc_check(lambda s, o, r: sampled_ram_factorial(s, o, r, 2.0), spec, f, n=60_000)
        assert rep.n_evals_mean < 9.0

    def test_cost_shrinks_with_extreme_probs(self):
        spec = BinaryLogits(np.array([6.0, -6.0, 5.0, -5.0]))
        f = constant_objective()
        r = RngStream(seed=12)
        evals = [sampled_ram_factorial(spec, f, r.child(k), 2.0).n_evals for k in range(300)]
        assert np.mean(evals) < 1.5

    def test_categorical_reduces_to_ram_when_all_kept(self):
        spec = CategoricalLogits(np.array([[0.1, -0.1, 0.0]]))
        f = random_quadratic(3, RngStream(seed=13), shape=(1, 3))
        for k in range(10):
            a = sampled_ram_categorical(spec, f, RngStream(seed=14).child(k), beta=0.05)
            b = ram_categorical(spec, f, RngStream(seed=14).child(k))
            assert np.allclose(a.grad_logits, b.grad_logits, atol=1e-12)

    def test_categorical_unbiased(self):
        spec = CategoricalLogits(np.array([[0.5, -0.2, 0.3]]))
        f = random_quadratic(3, RngStream(seed=15), shape=(1, 3))
        mc_check(lambda s, o, r: sampled_ram_categorical(s, o, r, 2.0), spec, f, n=60_000)

    def test_categorical_degenerate_row_drops_edges(self):
        spec = CategoricalLogits(np.array([[12.0, 0.0, 0.0]]))
        r = RngStream(seed=16)
        evals = [sampled_ram_categorical(spec, constant_objective(), r.child(k), 2.0).n_evals
                 for k in range(200)]
        assert np.mean(evals) < 1.05


class TestArgmax:
    def test_identical_values_give_zero(self):
        est = argmax_binary(SPEC_08, constant_objective(), RngStream(seed=17), eps=0.01)
        assert np.all(est.grad_logits == 0.0)

    def test_mean_approximates_true_gradient(self):
        # E_rho[theta-difference]/eps has the closed form
        # [sigma(eps f1 + l) - sigma(eps f0 + l)] / eps, which converges to
        # q(1-q)(f1-f0) = 0.025 at q=0.5 as eps -> 0
        from discgrad.core import sigmoid

        eps = 0.01
        exact = (sigmoid(eps * 0.3025) - sigmoid(eps * 0.2025)) / eps
        assert exact == pytest.approx(0.025, abs=1e-4)
        spec = BinaryLogits(np.zeros(1))
        r = RngStream(seed=18)
        n = 200_000
        vals = np.array([argmax_binary(spec, TOY, r.child(k), eps=eps).grad_logits[0]
                         for k in range(n)])
        se = vals.std() / np.sqrt(n)
        assert abs(vals.mean() - exact) < 4 * se

    def test_variance_scales_inversely_with_eps(self):
        spec = BinaryLogits(np.zeros(1))
        out = {}
        for eps in (0.1, 0.01):
            r = RngStream(seed=19)
            g = np.array([argmax_binary(spec, TOY, r.child(k), eps=eps).grad_logits[0]
                          for k in range(200_000)])
            out[eps] = g.var()
        ratio = out[0.01] / out[0.1]
        assert 5.0 < ratio < 20.0  # ~10x when eps shrinks 10x

    def test_zero_eps_rejected(self):
        with pytest.raises(ValueError):
            argmax_binary(SPEC_08, TOY, RngStream(seed=20), eps=0.0)


class TestArm:
    def test_threshold_rule_zero_when_copies_agree(self):
        # q=0.8, rho=0.3: both antithetic samples are 1
        q = 0.8
        rho = 0.3
        z1, z2 = float(rho < q), float(rho > 1 - q)
        assert z1 == z2 == 1.0

    def test_formula_value(self):
        # q=0.8, rho=0.1: (f(0) - f(1)) (0.1 - 0.5) = 0.04
        assert (0.2025 - 0.3025) * (0.1 - 0.5) == pytest.approx(0.04, abs=1e-15)

    def test_exact_expectation_via_fine_grid(self):
        # integral of the three rho regions reproduces the closed form 0.016
        n = 2_000_001
        rho = (np.arange(n) + 0.5) / n
        q = 0.8
        z1 = (rho < q).astype(float)
        z2 = (rho > 1 - q).astype(float)
        f = lambda z: (z - 0.45) ** 2
        vals = (f(z2) - f(z1)) * (rho - 0.5)
        assert vals.mean() == pytest.approx(0.016, abs=1e-8)

    def test_matches_oracle_and_cost(self):
        spec = BinaryLogits(np.array([0.3, -0.8, 1.2, 0.0]))
        f = random_quadratic(4, RngStream(seed=21))
        rep = mc_check(arm_factorial, spec, f, n=60_000)
        assert rep.n_evals_mean == 2.0

    def test_higher_variance_than_ram_multivariate(self):
        # correlated quadratic at M=8
        spec = BinaryLogits(np.full(8, 0.4))
        f = random_quadratic(8, RngStream(seed=22))
        rep_arm = bias_variance_report(arm_factorial, spec, f, 20_000, RngStream(seed=23))
        rep_ram = bias_variance_report(ram_factorial, spec, f, 20_000, RngStream(seed=23))
        assert np.all(rep_arm.variance >= rep_ram.variance)


class TestCrGradient:
    def test_pwl_cr_icr_bit_identical(self):
        spec = BinaryLogits(np.array([0.3, -0.8, 1.2]))
        f = random_quadratic(3, RngStream(seed=24))
        for k in range(20):
            a = cr_gradient(spec, f, RngStream(seed=25).child(k), "cr", "pwl", 2.0)
            b = cr_gradient(spec, f, RngStream(seed=25).child(k), "icr", "pwl", 2.0)
            assert np.array_equal(a.grad_logits, b.grad_logits)

    def test_icr_pwl_unbiased_single_variable(self):
        mc_check(lambda s, o, r: cr_gradient(s, o, r, "icr", "pwl", 2.0),
                 SPEC_08, TOY, n=60_000)

    def test_icr_gsm_unbiased_single_variable(self):
        mc_check(lambda s, o, r: cr_gradient(s, o, r, "icr", "gsm", 2.0),
                 SPEC_08, TOY, n=60_000)

    def test_cr_gsm_biased_single_variable(self):
        rep = bias_variance_report(
            lambda s, o, r: cr_gradient(s, o, r, "cr", "gsm", 2.0),
            SPEC_08, TOY, 60_000, RngStream(seed=26))
        assert np.all(np.abs(rep.bias) > 4 * rep.stderr)

    def test_cr_gsm_wrong_sign_at_low_q(self):
        # the wrong-sign interval sits below the fixed point q* ~ 0.366
        spec = BinaryLogits(np.array([-3.0]))
        rep = bias_variance_report(
            lambda s, o, r: cr_gradient(s, o, r, "cr", "gsm", 2.0),
            spec, TOY, 60_000, RngStream(seed=27))
        assert rep.oracle_grad[0] > 0 and rep.mean[0] < 0
        assert np.abs(rep.bias[0]) > 4 * rep.stderr[0]

    def test_zeta_identical_between_modes(self):
        # mode only changes the selected derivative, never the sampled value;
        # with a linear objective the gradients differ while draws coincide
        spec = BinaryLogits(np.array([1.0]))
        f = TOY
        a = cr_gradient(spec, f, RngStream(seed=28), "cr", "gsm", 2.0)
        b = cr_gradient(spec, f, RngStream(seed=28), "icr", "gsm", 2.0)
        assert a.n_evals == b.n_evals == 1
        assert not np.array_equal(a.grad_logits, b.grad_logits)

    def test_hierarchical_independent_layers_match_factorial_expectation(self):
        spec = HierarchicalBernoulliSpec(
            (1, 1), lambda k, prev: np.array([0.4]),
            logits_jac=lambda k, prev: np.array([[0.0]]))
        flat = BinaryLogits(np.array([0.4, 0.4]))
        f = random_quadratic(2, RngStream(seed=29))
        est = lambda s, o, r: cr_gradient(s, o, r, "icr", "pwl", 2.0)
        rep_h = bias_variance_report(est, spec, f, 40_000, RngStream(seed=30),
                                     oracle=enumerate_gradient(spec, f))
        rep_f = bias_variance_report(est, flat, f, 40_000, RngStream(seed=31))
        assert np.allclose(rep_h.mean, rep_f.mean, atol=4 * (rep_h.stderr + rep_f.stderr).max())

    def test_hierarchical_chain_term_present(self):
        # downstream logits depend on upstream zeta; gradient of the first
        # variable must include the chain through the conditional
        def logits_fn(k, prev):
            if k == 0:
                return np.array([0.0])
            return np.array([3.0 * prev[0][0]])

        spec = HierarchicalBernoulliSpec((1, 1), logits_fn,
                                         logits_jac=lambda k, prev: np.array([[3.0]]))
        f = Objective(eval_discrete=lambda z: z[1],
                      eval_relaxed=lambda z: z[1],
                      grad_relaxed=lambda z: np.array([0.0, 1.0]))
        # direct term for variable 0 is zero (f ignores z0), chain is not
        est = cr_gradient(spec, f, RngStream(seed=32), "icr", "pwl", 2.0)
        assert est.grad_logits.shape == (2,)
        r = RngStream(seed=33)
        vals = [cr_gradient(spec, f, r.child(k), "icr", "pwl", 2.0).grad_logits[0]
                for k in range(3000)]
        assert np.abs(np.mean(vals)) > 1e-3

    def test_categorical_pwl_unbiased_single_variable(self):
        spec = CategoricalLogits(np.log(np.array([[0.5, 0.3, 0.2]])))
        f = random_quadratic(3, RngStream(seed=55), shape=(1, 3))
        mc_check(lambda s, o, r: cr_gradient(s, o, r, "icr", "pwl", 2.0),
                 spec, f, n=60_000)

    def test_categorical_gsm_modes_share_draws_but_differ(self):
        spec = CategoricalLogits(np.log(np.array([[0.7, 0.2, 0.1]])))
        f = random_quadratic(3, RngStream(seed=56), shape=(1, 3))
        a = cr_gradient(spec, f, RngStream(seed=57), "cr", "gsm", 2.0)
        b = cr_gradient(spec, f, RngStream(seed=57), "icr", "gsm", 2.0)
        assert not np.array_equal(a.grad_logits, b.grad_logits)
        assert np.allclose(a.grad_logits.sum(axis=1), 0.0, atol=1e-12)
        assert np.allclose(b.grad_logits.sum(axis=1), 0.0, atol=1e-12)


class TestRebar:
    def test_conditional_noise_derivative_value(self):
        # q=0.8, rho=0.5, z=1: -1 + (rho-1+q)/q = -0.625
        m = r1_multiplier(np.array([0.8]), np.array([0.5]))
        assert -1.0 + m[0] == pytest.approx(-0.625, abs=1e-12)

    def test_constant_objective_exactly_zero(self):
        spec = BinaryLogits(np.array([0.5, -0.5]))
        r = RngStream(seed=34)
        for k in range(50):
            est = rebar_gradient(spec, constant_objective(), r.child(k), 2.0, "pwl")
            assert np.all(est.grad_logits == 0.0)

    @pytest.mark.parametrize("relaxation", ["pwl", "gsm"])
    def test_unbiased(self, relaxation):
        spec = BinaryLogits(np.array([0.3, -0.8, 1.2, 0.0]))
        f = random_quadratic(4, RngStream(seed=35))
        mc_check(lambda s, o, r: rebar_gradient(s, o, r, 2.0, relaxation), spec, f, n=60_000)

    def test_decomposition_sums_exactly(self):
        spec = BinaryLogits(np.array([0.3, -0.5, 1.0, 0.1]))
        f = random_quadratic(4, RngStream(seed=36))
        for k in range(50):
            d = rebar_decomposition(spec, f, RngStream(seed=37).child(k), 2.0, "gsm")
            g = rebar_gradient(spec, f, RngStream(seed=37).child(k), 2.0, "gsm")
            total = d.components["icr"] + d.components["r1"] + d.components["r2"]
            assert np.array_equal(total, g.grad_logits)

    def test_corrections_cancel_icr_bias(self):
        # E[R1 + R2] = oracle - E[ICR]
        spec = BinaryLogits(np.array([0.6, -1.0]))
        f = random_quadratic(2, RngStream(seed=38))
        oracle = enumerate_gradient(spec, f)
        n = 60_000
        r = RngStream(seed=39)
        icr = np.zeros(2)
        corr = np.zeros(2)
        sq = np.zeros(2)
        for k in range(n):
            d = rebar_decomposition(spec, f, r.child(k), 2.0, "pwl")
            icr += d.components["icr"]
            c = d.components["r1"] + d.components["r2"]
            corr += c
            sq += c * c
        icr /= n
        corr /= n
        se = np.sqrt((sq / n - corr**2) / n)
        assert np.all(np.abs(corr - (oracle - icr)) <= 4 * se + 1e-3)

    def test_multiplier_moments(self):
        # coupled multiplier is U(0,1): mean 1/2, raw second moment 1/3
        u, _ = RngStream(seed=40).uniform(500_000)
        m = r1_multiplier(np.full(u.shape, 0.37), u)
        assert m.mean() == pytest.approx(0.5, rel=0.01)
        assert (m * m).mean() == pytest.approx(1 / 3, rel=0.01)


class TestRelaxPlus:
    def test_gamma_one_zero_cv_equals_rebar(self):
        spec = BinaryLogits(np.array([0.3, -0.5, 1.0, 0.1]))
        f = random_quadratic(4, RngStream(seed=41))
        cv = init_control_variate(4, rng=RngStream(seed=42))
        for k in range(30):
            a, _ = relax_plus_gradient(spec, f, cv, RngStream(seed=43).child(k), 2.0, 1.0, "pwl")
            b = rebar_gradient(spec, f, RngStream(seed=43).child(k), 2.0, "pwl")
            assert np.array_equal(a.grad_logits, b.grad_logits)

    def test_gamma_zero_drops_score_term(self):
        spec = BinaryLogits(np.array([0.3, -0.5]))
        f = random_quadratic(2, RngStream(seed=44))
        cv = init_control_variate(2, rng=RngStream(seed=45))
        a, _ = relax_plus_gradient(spec, f, cv, RngStream(seed=46), 2.0, 0.0, "pwl")
        d = rebar_decomposition(spec, f, RngStream(seed=46), 2.0, "pwl")
        assert np.array_equal(a.grad_logits, d.components["icr"] + d.components["r1"])

    def test_psi_gradient_descends_residual(self):
        # a small step against the psi gradient shrinks |f(z) - f(zeta) - r(zeta)|
        spec = BinaryLogits(np.array([0.4, -0.2, 0.9]))
        f = random_quadratic(3, RngStream(seed=47))
        cv = init_control_variate(3, n_hidden=8, rng=RngStream(seed=48))
        flat = cv.to_flat()
        bump, _ = RngStream(seed=49).uniform(flat.size)
        cv.set_flat(flat + 0.2 * (bump - 0.5))

        from discgrad.controlvariate import cv_value
        from discgrad.core import probs_from_logits, sample_discrete
        from discgrad.relaxations import pwl_binary

        rng = RngStream(seed=50)
        q = probs_from_logits(spec)
        rho, _ = rng.uniform(3)
        z = (rho > 1 - q).astype(float)
        zeta = pwl_binary(rho, q, 2.0).zeta
        target = f.eval_discrete(z) - f.eval_relaxed(zeta)

        _, psi_grad = relax_plus_gradient(spec, f, cv, RngStream(seed=50), 2.0, 1.0, "pwl")
        before = abs(target - cv_value(cv, zeta))
        cv.set_flat(cv.to_flat() - 1e-3 * psi_grad)
        after = abs(target - cv_value(cv, zeta))
        assert after < before


class TestReinforce:
    def test_baseline_equal_to_constant_objective_gives_zero(self):
        spec = BinaryLogits(np.array([0.4, -0.4]))
        est = reinforce_gradient(spec, constant_objective(3.25), RngStream(seed=51), 3.25)
        assert np.all(est.grad_logits == 0.0)

    def test_unbiased_with_frozen_baseline(self):
        spec = BinaryLogits(np.array([0.3, -0.8, 1.2, 0.0]))
        f = random_quadratic(4, RngStream(seed=52))
        mc_check(lambda s, o, r: reinforce_gradient(s, o, r, 0.7), spec, f, n=80_000)

    def test_running_mean_tracks(self):
        rm = RunningMean(decay=0.5)
        assert rm.current == 0.0
        rm.update(2.0)
        assert rm.current == 2.0
        rm.update(4.0)
        assert rm.current == pytest.approx(3.0)

    def test_higher_variance_than_arm_on_toy(self):
        rep_r = bias_variance_report(
            lambda s, o, r: reinforce_gradient(s, o, r, 0.0),
            SPEC_08, TOY, 20_000, RngStream(seed=53))
        rep_a = bias_variance_report(arm_factorial, SPEC_08, TOY, 20_000, RngStream(seed=53))
        assert rep_r.variance[0] > rep_a.variance[0]


class TestRegistry:
    def test_all_names_construct(self):
        cv = init_control_variate(2)
        for name in ("ram", "sampled-ram", "arm", "argmax", "gsm", "igsm", "pwl",
                     "rebar", "reinforce"):
            make_estimator(name, EstimatorConfig())
        make_estimator("relax+", EstimatorConfig(), cv=cv)

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            make_estimator("sga")

    def test_relax_plus_needs_cv(self):
        with pytest.raises(ValueError):
            make_estimator("relax+")

    def test_config_validation(self):
        with pytest.raises(ValueError):
            EstimatorConfig(beta=0.0)
        with pytest.raises(ValueError):
            EstimatorConfig(gamma=1.5)

    def test_cost_accounting(self):
        f = random_quadratic(3, RngStream(seed=54))
        spec = BinaryLogits(np.array([0.1, -0.2, 0.3]))
        assert make_estimator("ram")(spec, f, RngStream(seed=55)).n_evals == 4
        assert make_estimator("arm")(spec, f, RngStream(seed=55)).n_evals == 2
        assert make_estimator("pwl")(spec, f, RngStream(seed=55)).n_evals == 1
        cspec = CategoricalLogits(np.zeros((2, 3)))
        fc = random_quadratic(6, RngStream(seed=56), shape=(2, 3))
        assert make_estimator("ram")(cspec, fc, RngStream(seed=57)).n_evals == 6
