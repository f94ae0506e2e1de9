from dataclasses import dataclass

from .SchemeKind import SchemeKind


@dataclass(frozen=True)
class SchemeSpec:
    kind: SchemeKind = SchemeKind.SSP3
    n: int = 100
    dt: float | None = None  # defaults to 0.8 / n
    t_final: float = 0.3
    # Ark scheme coefficients.
    beta10: float = 1.0
    alpha21: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "kind", SchemeKind(self.kind))
        if self.dt is None:
            object.__setattr__(self, "dt", 0.8 / self.n)
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_final < 0:
            raise ValueError("t_final must be non-negative")
