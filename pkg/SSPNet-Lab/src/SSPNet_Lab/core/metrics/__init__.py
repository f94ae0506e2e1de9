"""
Total variation, perturbation growth ratios and the variance harness.
"""

from .variation import total_variation
from .growth import group_growth_ratios, perturbation_growth_ratio, perturbation_pairs
from .variance import EXPECTED_RATIOS, STDERR_BATCHES, SignedPermutation, VarianceResult, variance_harness
from .records import epoch_table, records_to_frame
