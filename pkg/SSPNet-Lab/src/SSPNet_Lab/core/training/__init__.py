"""
Training loops, optimizers, evaluation and checkpoints.
"""

from .schedule import lr_at_epoch
from .optim import NO_DECAY_SUFFIXES, Optimizer, adam_step, sgd_nesterov_step
from .evaluation import evaluate, predict, robustness_sweep
from .loops import TrainResult, adversarial_train, standard_train, train
from .checkpoint import Checkpoint, config_hash, load_checkpoint, restore_network, save_checkpoint
