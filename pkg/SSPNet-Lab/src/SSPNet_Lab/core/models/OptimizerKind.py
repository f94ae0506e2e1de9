from enum import Enum


class OptimizerKind(str, Enum):
    SGD_NESTEROV = "sgd_nesterov"
    ADAM = "adam"
