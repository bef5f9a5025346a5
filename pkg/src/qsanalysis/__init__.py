"""Numerical analysis of Quicksort comparison counts.

Frequency distributions of comparisons under five pivot-selection models,
bad-case probabilities, average and worst-case recurrences, and
instrumented reference sorters with brute-force oracles.
"""

from .numerics import WideScalar, ws_arith, ws_factorial, ws_to_decimal
from .distribution import Distribution, convolve, delta, mean, mix, stddev_of, tail_weight
from .pivot_models import Model, ModelConfig, pivot_kernel, pivot_kernel_exact_mom, sample_size, selection_cost
from .recurrences import (
    average_comparisons,
    exact_frequency_distribution,
    frequency_distribution,
    insertion_closed_forms,
    max_comparisons,
)
from .analysis import (
    BadCaseQuery,
    bad_case_probability,
    expected_time_to_event,
    iliopoulos_sigma,
    probability_ratio,
    worst_case_bound_check,
)

__version__ = "0.1.0"
