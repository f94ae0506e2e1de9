"""
One function per subcommand. Each takes the resolved RunConfig and the
output directory and writes its CSV files there.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ..core.attacks import attack_batches
from ..core.blocks import build_network, check_network_gradients, convergence_study
from ..core.data import load_mnist, subset
from ..core.errors import ConfigError, GradientError
from ..core.metrics import epoch_table, group_growth_ratios, perturbation_pairs, variance_harness
from ..core.models import AttackConfig, Dataset, NetworkSpec, RunConfig, SchemeSpec, TrainConfig, TrainMode
from ..core.pde import run_burgers
from ..core.plots import render_csv
from ..core.tensor import SeededRng
from ..core.training import (
    config_hash,
    predict,
    load_checkpoint,
    restore_network,
    robustness_sweep,
    save_checkpoint,
    train,
)

logger = logging.getLogger(__name__)


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False)
    logger.info("wrote %s (%d rows)", path, len(frame))
    return path


def _require(run: RunConfig, key: str) -> str:
    value = run[key]
    if not value:
        raise ConfigError(f"'{key}' is required for {run.subcommand}")
    return value


def _test_set(run: RunConfig) -> Dataset:
    data_dir = _require(run, "data_dir")
    return subset(load_mnist(data_dir, "test"), run["test_per_class"], run.seed)


def _restore(path: str):
    checkpoint = load_checkpoint(path)
    logger.info("restored %s (epoch %d)", path, checkpoint.epoch)
    return restore_network(checkpoint)


def network_spec(run: RunConfig) -> NetworkSpec:
    return NetworkSpec(
        block_kind=run["block"],
        blocks_per_group=run["blocks_per_group"],
        group_channels=run["channels"],
        linear_kind=run["linear"],
        activation=run["activation"],
        alpha21=run["alpha21"],
        beta10_init=run["beta10_init"],
        stem=run["stem"],
        stem_stride=run["stem_stride"],
        expansion_stride=run["expansion_stride"],
    )


def train_config(run: RunConfig) -> TrainConfig:
    attack = None
    if run["mode"] == TrainMode.ADVERSARIAL:
        attack = AttackConfig(run["epsilon"], run["alpha"], run["iters"])
    eval_attack = None
    if run["eval_iters"] > 0:
        eval_attack = AttackConfig(run["epsilon"], run["alpha"], run["eval_iters"])
    return TrainConfig(
        mode=run["mode"],
        optimizer=run["optimizer"],
        lr=run["lr"],
        weight_decay=run["weight_decay"],
        momentum=run["momentum"],
        betas=(run["beta1"], run["beta2"]),
        batch_size=run["batch_size"],
        epochs=run["epochs"],
        lr_decay_epochs=run["lr_decay_epochs"],
        lr_decay_factor=run["lr_decay_factor"],
        noise_epsilon=run["noise_epsilon"],
        attack=attack,
        eval_attack=eval_attack,
        seed=run.seed,
    )


def cmd_train(run: RunConfig, out_dir: Path) -> None:
    spec, config = network_spec(run), train_config(run)
    data_dir = _require(run, "data_dir")
    train_set = subset(load_mnist(data_dir, "train"), run["train_per_class"], run.seed)
    test_set = _test_set(run)
    network = build_network(spec, SeededRng(run.seed).spawn(1))
    logger.info(
        "training %s network (%d parameters) on %d samples",
        spec.block_kind.value, network.num_parameters(), len(train_set),
    )
    result = train(network, train_set, config, eval_dataset=test_set)
    write_csv(epoch_table(result.records), out_dir / "metrics.csv")
    save_checkpoint(out_dir / "model.ckpt", network, result.epochs, result.rng_state, config_hash(run.render()))


def cmd_attack(run: RunConfig, out_dir: Path) -> None:
    network = _restore(_require(run, "checkpoint"))
    test_set = _test_set(run)
    method = run["method"]
    config = AttackConfig(
        run["epsilon"],
        run["epsilon"] if method == "fgsm" else run["alpha"],
        1 if method == "fgsm" else run["iters"],
        random_start=run["random_start"] and method == "pgd",
    )
    adversarial = attack_batches(network, test_set.images, test_set.labels, method, config, SeededRng(run.seed))
    clean_pred = predict(network, test_set.images)
    adv_pred = predict(network, adversarial)
    frame = pd.DataFrame(
        {
            "index": np.arange(len(test_set)),
            "label": test_set.labels,
            "clean_pred": clean_pred,
            "adv_pred": adv_pred,
            "clean_correct": (clean_pred == test_set.labels).astype(int),
            "adv_correct": (adv_pred == test_set.labels).astype(int),
        }
    )
    summary = {
        "method": method,
        "epsilon": config.epsilon,
        "alpha": config.alpha,
        "iters": config.iterations,
        "clean_acc": float(frame["clean_correct"].mean()) if len(frame) else 0.0,
        "adv_acc": float(frame["adv_correct"].mean()) if len(frame) else 0.0,
    }
    logger.info("%s eps=%.3f: clean %.4f adversarial %.4f", method, config.epsilon, summary["clean_acc"], summary["adv_acc"])
    write_csv(frame, out_dir / "attack.csv")
    write_csv(pd.DataFrame([summary]), out_dir / "attack_summary.csv")


def cmd_sweep(run: RunConfig, out_dir: Path) -> None:
    network = _restore(_require(run, "checkpoint"))
    frame = robustness_sweep(
        network, _test_set(run), run["method"], run["eps_list"], run["alpha"], run["iters"], SeededRng(run.seed)
    )
    write_csv(frame, out_dir / "sweep.csv")


def cmd_pgr(run: RunConfig, out_dir: Path) -> None:
    checkpoints = run["checkpoints"]
    if not checkpoints:
        raise ConfigError("'checkpoints' is required for pgr")
    test_set = _test_set(run)
    attack = AttackConfig(run["epsilon"], run["alpha"], run["iters"])
    rows = []
    for index, path in enumerate(checkpoints):
        network = _restore(path)
        x, x_prime = perturbation_pairs(
            network, test_set.images, test_set.labels, run["perturbation"], attack,
            SeededRng(run.seed).spawn(index), run["noise_draws"],
        )
        for record in group_growth_ratios(network, x, x_prime, run["p"], model=Path(path).stem):
            rows.append({"model": record.index["model"], "group": record.index["group"], "p": record.norm_order, "ratio": record.value})
    write_csv(pd.DataFrame(rows, columns=["model", "group", "p", "ratio"]), out_dir / "pgr.csv")


def cmd_variance(run: RunConfig, out_dir: Path) -> None:
    rows = [
        variance_harness(kind, run["d"], run["samples"], SeededRng(run.seed).spawn(index), run["beta10"], run["alpha21"]).as_row()
        for index, kind in enumerate(run["block"])
    ]
    write_csv(pd.DataFrame(rows, columns=["block_kind", "d", "M", "ratio", "stderr"]), out_dir / "variance.csv")


def cmd_burgers(run: RunConfig, out_dir: Path) -> None:
    spec = SchemeSpec(run["scheme"], run["n"], run["dt"], run["t_final"], run["beta10"], run["alpha21"])
    result = run_burgers(spec, sigmoid=run["sigmoid"])
    tv = pd.DataFrame({"step": np.arange(len(result.tv)), "t": result.times, "tv": result.tv})
    write_csv(tv, out_dir / "tv.csv")
    solution = {"x": result.grid.x, "u": result.final}
    if result.filtered is not None:
        solution["sigmoid_u"] = result.filtered
    write_csv(pd.DataFrame(solution), out_dir / "solution.csv")
    if result.blew_up:
        logger.warning("run stopped early at t=%.5f", result.times[-1])


def cmd_gradcheck(run: RunConfig, out_dir: Path) -> None:
    kinds = run["kinds"]
    results = [
        check_network_gradients(kinds[i % len(kinds)], run.seed + i, h=run["h"])
        for i in range(run["nets"])
    ]
    write_csv(pd.DataFrame([r.as_row() for r in results]), out_dir / "gradcheck.csv")
    worst = max(results, key=lambda r: r.max_rel_error)
    logger.info("worst relative error %.3e (%s, seed %d)", worst.max_rel_error, worst.block_kind, worst.seed)
    if worst.max_rel_error >= run["tolerance"]:
        raise GradientError(
            f"gradient check failed: relative error {worst.max_rel_error:.3e} on "
            f"{worst.block_kind} seed {worst.seed} parameter '{worst.worst_parameter}'"
        )


def cmd_order(run: RunConfig, out_dir: Path) -> None:
    result = convergence_study(run["kinds"], run["lam"], run["t_final"], run["dts"], run["beta10"], run["alpha21"])
    for kind, slope in result.slopes.items():
        logger.info("%s: observed order %.3f", kind, slope)
    write_csv(result.to_frame(), out_dir / "order.csv")


def cmd_plot(run: RunConfig, out_dir: Path | None) -> None:
    csv_path = Path(_require(run, "csv"))
    png_path = Path(run["png"]) if run["png"] else csv_path.with_suffix(".png")
    render_csv(run["kind"], csv_path, png_path)


COMMANDS = {
    "train": (cmd_train, "train a network on MNIST and write metrics.csv and model.ckpt"),
    "attack": (cmd_attack, "attack a checkpoint with FGSM or PGD"),
    "sweep": (cmd_sweep, "accuracy against attack radius"),
    "pgr": (cmd_pgr, "per-group perturbation growth ratios"),
    "variance": (cmd_variance, "Monte-Carlo variance ratio of each block kind"),
    "burgers": (cmd_burgers, "Burgers' step problem with WENO3 and a time stepper"),
    "gradcheck": (cmd_gradcheck, "tape gradients against finite differences"),
    "order": (cmd_order, "convergence order of the block schemes on u' = lam u"),
    "plot": (cmd_plot, "render a CSV written by another subcommand"),
}
