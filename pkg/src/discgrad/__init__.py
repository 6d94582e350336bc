"""Gradient estimation for expectations over discrete random variables.

Finite-difference, continuous-relaxation and score-function estimators with
an exact enumeration oracle, a bias/variance benchmarking harness, and the
toy / max-clique experiment suites behind the ``discgrad`` CLI.
"""

from .controlvariate import ControlVariate, cv_input_grad, cv_param_grad, cv_value, init_control_variate
from .core import (
    BinaryLogits,
    CategoricalLogits,
    GradientEstimate,
    HierarchicalBernoulliSpec,
    RngStream,
    grad_log_prob,
    logit,
    probs_from_logits,
    sample_discrete,
    sigmoid,
)
from .estimators import (
    EstimatorConfig,
    RelaxPlusEstimator,
    RunningMean,
    argmax_binary,
    arm_factorial,
    cr_gradient,
    make_estimator,
    ram,
    ram_categorical,
    ram_factorial,
    ram_hierarchical,
    rebar_decomposition,
    rebar_gradient,
    reinforce_gradient,
    relax_plus_gradient,
    sampled_ram,
    sampled_ram_categorical,
    sampled_ram_factorial,
)
from .graph import Graph, load_dimacs, parse_dimacs, planted_clique, round_and_repair, verify_clique
from .objectives import Objective, clique_objective, random_quadratic, toy_binary, toy_categorical
from .oracle import BiasVarianceReport, bias_variance_report, enumerate_expectation, enumerate_gradient
from .optim import AdamState, TrainConfig, TrainTrace, adam_step, entropy, train_distribution
from .relaxations import (
    RelaxationPoint,
    gsm_binary,
    gsm_categorical,
    pwl_binary,
    pwl_categorical_edge,
    sample_edge,
    select_derivative,
)

__version__ = "0.1.0"
