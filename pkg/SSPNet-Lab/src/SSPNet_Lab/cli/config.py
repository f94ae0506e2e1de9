"""
Run configuration: per-subcommand setting schemas, the plain-text
``key = value`` file format and the defaults < file < flags resolution.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from ..core.errors import ConfigError
from ..core.models import (
    Activation,
    BlockKind,
    LinearKind,
    NetworkSpec,
    OptimizerKind,
    PerturbationKind,
    RunConfig,
    SchemeKind,
    TrainConfig,
    TrainMode,
    parse_bool,
)


def parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def parse_optional_float(text: str) -> float | None:
    if text.strip().lower() in {"", "auto", "none"}:
        return None
    return float(text)


def parse_names(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(",") if v.strip())


def choice(*allowed: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        value = text.strip()
        if value not in allowed:
            raise ValueError(f"{value!r} is not one of {', '.join(allowed)}")
        return value

    return parse


def enum_choice(enum_cls) -> Callable[[str], object]:
    return lambda text: enum_cls(text.strip())


@dataclass(frozen=True)
class Setting:
    parse: Callable[[str], object]
    default: object
    help: str = ""


_NET = NetworkSpec()
_TRAIN = TrainConfig()

NETWORK_SETTINGS = {
    "block": Setting(enum_choice(BlockKind), _NET.block_kind, "block combinator"),
    "blocks_per_group": Setting(int, _NET.blocks_per_group, "blocks N per group"),
    "channels": Setting(parse_ints, _NET.group_channels, "group widths, comma separated"),
    "linear": Setting(enum_choice(LinearKind), _NET.linear_kind, "conv or dense linear maps"),
    "activation": Setting(enum_choice(Activation), _NET.activation, "relu or sigmoid"),
    "alpha21": Setting(float, _NET.alpha21, "fixed Ark coefficient alpha21"),
    "beta10_init": Setting(float, _NET.beta10_init, "initial Ark beta10"),
    "stem": Setting(parse_bool, _NET.stem, "3x3 stem before the first group"),
    "stem_stride": Setting(int, _NET.stem_stride, "stride of the stem"),
    "expansion_stride": Setting(int, _NET.expansion_stride, "stride of ResBlock-E"),
}

DATA_SETTINGS = {
    "data_dir": Setting(str, "", "directory holding the four MNIST IDX files"),
    "test_per_class": Setting(int, 100, "test samples per class"),
}

ATTACK_SETTINGS = {
    "method": Setting(choice("fgsm", "pgd"), "pgd", "attack method"),
    "epsilon": Setting(float, 0.3, "l-infinity radius"),
    "alpha": Setting(float, 0.01, "PGD step size"),
    "iters": Setting(int, 20, "PGD iterations"),
}

SCHEMAS: dict[str, dict[str, Setting]] = {
    "train": {
        **NETWORK_SETTINGS,
        **DATA_SETTINGS,
        "train_per_class": Setting(int, 200, "training samples per class"),
        "mode": Setting(enum_choice(TrainMode), _TRAIN.mode, "standard or adversarial"),
        "optimizer": Setting(enum_choice(OptimizerKind), _TRAIN.optimizer, "sgd_nesterov or adam"),
        "lr": Setting(float, _TRAIN.lr, "base learning rate"),
        "weight_decay": Setting(float, _TRAIN.weight_decay, "L2 weight decay"),
        "momentum": Setting(float, _TRAIN.momentum, "Nesterov momentum"),
        "beta1": Setting(float, _TRAIN.betas[0], "Adam beta1"),
        "beta2": Setting(float, _TRAIN.betas[1], "Adam beta2"),
        "batch_size": Setting(int, _TRAIN.batch_size, "minibatch size"),
        "epochs": Setting(int, _TRAIN.epochs, "training epochs"),
        "lr_decay_epochs": Setting(parse_ints, _TRAIN.lr_decay_epochs, "lr milestones"),
        "lr_decay_factor": Setting(float, _TRAIN.lr_decay_factor, "lr factor per milestone"),
        "noise_epsilon": Setting(float, _TRAIN.noise_epsilon, "uniform augmentation radius"),
        "epsilon": Setting(float, 0.3, "adversarial training radius"),
        "alpha": Setting(float, 0.01, "adversarial training PGD step"),
        "iters": Setting(int, 7, "adversarial training PGD iterations"),
        "eval_iters": Setting(int, 20, "PGD iterations for the adv_acc column, 0 disables"),
    },
    "attack": {
        **DATA_SETTINGS,
        **ATTACK_SETTINGS,
        "checkpoint": Setting(str, "", "model checkpoint"),
        "random_start": Setting(parse_bool, True, "PGD uniform random start"),
    },
    "sweep": {
        **DATA_SETTINGS,
        "checkpoint": Setting(str, "", "model checkpoint"),
        "method": ATTACK_SETTINGS["method"],
        "eps_list": Setting(parse_floats, (0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3), "radii"),
        "alpha": Setting(parse_optional_float, None, "PGD step, auto = epsilon/4"),
        "iters": ATTACK_SETTINGS["iters"],
    },
    "pgr": {
        **DATA_SETTINGS,
        "checkpoints": Setting(parse_names, (), "checkpoints, comma separated"),
        "perturbation": Setting(enum_choice(PerturbationKind), PerturbationKind.ADVERSARIAL, "adversarial or noise"),
        "epsilon": ATTACK_SETTINGS["epsilon"],
        "alpha": ATTACK_SETTINGS["alpha"],
        "iters": ATTACK_SETTINGS["iters"],
        "noise_draws": Setting(int, 1, "noise partners per input"),
        "p": Setting(parse_ints, (1, 2), "norm orders"),
    },
    "variance": {
        "block": Setting(parse_names, ("resblock", "midrk2", "ssp2", "ssp3", "zero"), "block kinds"),
        "d": Setting(int, 64, "dimension"),
        "samples": Setting(int, 100_000, "Monte-Carlo samples M"),
        "beta10": Setting(float, 1.0, "Ark beta10"),
        "alpha21": Setting(float, 0.5, "Ark alpha21"),
    },
    "burgers": {
        "scheme": Setting(enum_choice(SchemeKind), SchemeKind.SSP3, "time stepper"),
        "n": Setting(int, 100, "grid points"),
        "dt": Setting(parse_optional_float, None, "time step, auto = 0.8/n"),
        "t_final": Setting(float, 0.3, "final time"),
        "sigmoid": Setting(parse_bool, False, "add the sigmoid-filtered solution"),
        "beta10": Setting(float, 1.0, "Ark beta10"),
        "alpha21": Setting(float, 0.5, "Ark alpha21"),
    },
    "gradcheck": {
        "nets": Setting(int, 100, "networks, spread over the block kinds"),
        "kinds": Setting(parse_names, tuple(k.value for k in BlockKind), "block kinds"),
        "h": Setting(float, 1e-4, "finite-difference step"),
        "tolerance": Setting(float, 1e-4, "largest accepted relative error"),
    },
    "order": {
        "kinds": Setting(parse_names, tuple(k.value for k in BlockKind), "block kinds"),
        "lam": Setting(float, -1.0, "lambda of u' = lambda u"),
        "t_final": Setting(float, 1.0, "final time"),
        "dts": Setting(parse_floats, (0.125, 0.0625, 0.03125, 0.015625), "step sizes"),
        "beta10": Setting(float, 1.0, "Ark beta10"),
        "alpha21": Setting(float, 0.5, "Ark alpha21"),
    },
    "plot": {
        "kind": Setting(choice("tv", "solution", "metrics", "pgr", "sweep", "order", "variance"), "tv", "CSV kind"),
        "csv": Setting(str, "", "input CSV"),
        "png": Setting(str, "", "output PNG, defaults next to the CSV"),
    },
}


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    settings: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        settings[key] = value.strip()
    return settings


def load_config_file(path: str | Path) -> dict[str, str]:
    path = Path(path)
    return parse_config_text(path.read_text(encoding="utf-8"), str(path))


def resolve(subcommand: str, *sources: dict[str, str]) -> RunConfig:
    """Schema defaults overridden by each source in turn."""
    if subcommand not in SCHEMAS:
        raise ConfigError(f"unknown subcommand '{subcommand}'")
    schema = SCHEMAS[subcommand]
    settings = {key: setting.default for key, setting in schema.items()}
    seed = 0
    for source in sources:
        for key, text in source.items():
            if key == "seed":
                try:
                    seed = int(text)
                except ValueError:
                    raise ConfigError(f"seed: not an integer: {text!r}") from None
                continue
            if key not in schema:
                raise ConfigError(f"unknown key '{key}' for {subcommand}")
            try:
                settings[key] = schema[key].parse(text)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from None
    return RunConfig(subcommand, settings, seed)
