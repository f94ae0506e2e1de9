"""
Self-describing binary checkpoints.

Layout::

    b"SSPNLAB1"
    uint64 little-endian header length
    UTF-8 JSON header: network settings, parameter offsets, epoch, rng state, config hash
    little-endian float64 parameter data, concatenated in header order
"""

import hashlib
import json
import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..blocks import Network, build_network
from ..errors import CheckpointError
from ..models import NetworkSpec

logger = logging.getLogger(__name__)

MAGIC = b"SSPNLAB1"
_LENGTH = struct.Struct("<Q")
_DTYPE = np.dtype("<f8")


@dataclass
class Checkpoint:
    spec: NetworkSpec
    parameters: dict[str, np.ndarray]
    epoch: int = 0
    rng_state: dict | None = None
    config_hash: str = ""
    offsets: dict[str, tuple[int, tuple[int, ...]]] = field(default_factory=dict)


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def save_checkpoint(
    path: str | Path,
    network: Network,
    epoch: int = 0,
    rng_state: dict | None = None,
    config_digest: str = "",
) -> Path:
    path = Path(path)
    offsets = []
    chunks = []
    offset = 0
    for name, param in network.named_parameters():
        offsets.append([name, offset, list(param.shape)])
        chunks.append(param.data.astype(_DTYPE).reshape(-1))
        offset += param.size
    header = {
        "network": network.spec.to_settings(),
        "offsets": offsets,
        "epoch": int(epoch),
        "rng_state": rng_state,
        "config_hash": config_digest,
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    payload = np.concatenate(chunks) if chunks else np.zeros(0, dtype=_DTYPE)
    with open(path, "wb") as handle:
        handle.write(MAGIC)
        handle.write(_LENGTH.pack(len(header_bytes)))
        handle.write(header_bytes)
        handle.write(payload.tobytes())
    logger.info("saved checkpoint %s (%d parameters)", path, offset)
    return path


def load_checkpoint(path: str | Path) -> Checkpoint:
    raw = Path(path).read_bytes()
    if raw[: len(MAGIC)] != MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint (bad magic)")
    start = len(MAGIC) + _LENGTH.size
    if len(raw) < start:
        raise CheckpointError(f"{path}: truncated header length")
    (header_length,) = _LENGTH.unpack_from(raw, len(MAGIC))
    if len(raw) < start + header_length:
        raise CheckpointError(f"{path}: truncated header")
    try:
        header = json.loads(raw[start:start + header_length].decode("utf-8"))
        spec = NetworkSpec.from_settings(header["network"])
    except (ValueError, KeyError) as exc:
        raise CheckpointError(f"{path}: unreadable header ({exc})") from exc

    data = raw[start + header_length:]
    if len(data) % _DTYPE.itemsize:
        raise CheckpointError(f"{path}: parameter data is not a whole number of reals")
    flat = np.frombuffer(data, dtype=_DTYPE)
    parameters = {}
    offsets = {}
    for name, offset, shape in header["offsets"]:
        shape = tuple(shape)
        count = int(np.prod(shape, dtype=np.int64))
        if offset + count > flat.size:
            raise CheckpointError(f"{path}: parameter '{name}' runs past the end of the data")
        parameters[name] = flat[offset:offset + count].astype(np.float64).reshape(shape)
        offsets[name] = (offset, shape)
    return Checkpoint(
        spec=spec,
        parameters=parameters,
        epoch=header.get("epoch", 0),
        rng_state=header.get("rng_state"),
        config_hash=header.get("config_hash", ""),
        offsets=offsets,
    )


def restore_network(checkpoint: Checkpoint) -> Network:
    """Rebuild the network described by the header and load its parameters."""
    network = build_network(checkpoint.spec, seed=0)
    named = network.parameters()
    if set(named) != set(checkpoint.parameters):
        missing = sorted(set(named) ^ set(checkpoint.parameters))
        raise CheckpointError(f"parameter names do not match the network: {missing[:5]}")
    for name, param in named.items():
        values = checkpoint.parameters[name]
        if values.shape != param.shape:
            raise CheckpointError(f"parameter '{name}' has shape {values.shape}, expected {param.shape}")
        param.data = values.copy()
    return network
