"""
Top-level package for the SSPNet laboratory.
Holds the autodiff core, SSP residual blocks, attacks, training,
metrics, the Burgers' TVD lab and the command line.
"""

__version__ = "0.1.0"
