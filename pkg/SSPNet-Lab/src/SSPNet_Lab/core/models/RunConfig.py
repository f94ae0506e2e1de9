from dataclasses import dataclass, field
from enum import Enum


def format_value(value) -> str:
    """Inverse of the config-file value parsers."""
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (tuple, list)):
        return ",".join(format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class RunConfig:
    subcommand: str
    settings: dict[str, object] = field(default_factory=dict)
    seed: int = 0

    def render(self) -> str:
        """Resolved configuration in the `key = value` file format, keys sorted."""
        lines = [f"# {self.subcommand}", f"seed = {self.seed}"]
        for key in sorted(self.settings):
            lines.append(f"{key} = {format_value(self.settings[key])}")
        return "\n".join(lines) + "\n"

    def __getitem__(self, key: str):
        return self.settings[key]
