from enum import Enum


class TrainMode(str, Enum):
    STANDARD = "standard"
    ADVERSARIAL = "adversarial"
