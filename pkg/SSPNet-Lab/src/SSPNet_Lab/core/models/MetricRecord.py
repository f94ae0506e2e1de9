import math
from dataclasses import dataclass, field

from ..errors import MetricError


@dataclass(frozen=True)
class MetricRecord:
    name: str
    value: float
    index: dict[str, int | str] = field(default_factory=dict)
    norm_order: int | None = None

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise MetricError(f"metric '{self.name}' is not finite: {self.value}")

    def as_row(self) -> dict:
        row = {"name": self.name, **self.index, "value": self.value}
        if self.norm_order is not None:
            row["p"] = self.norm_order
        return row
