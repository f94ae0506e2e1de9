"""
FGSM and PGD adversarial examples.
"""

from .attacks import FeasibleSet, attack_batches, fgsm, input_gradient, pgd, project
