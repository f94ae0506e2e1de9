from enum import Enum


class Activation(str, Enum):
    RELU = "relu"
    SIGMOID = "sigmoid"
