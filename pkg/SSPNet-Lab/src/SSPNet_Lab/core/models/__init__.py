"""
Dataclass and enum models shared by the lab modules.
"""

from .Activation import Activation
from .AttackConfig import AttackConfig
from .BlockKind import BlockKind
from .BlockSpec import BlockSpec
from .BurgersState import BurgersState
from .Dataset import Dataset
from .Grid import Grid
from .LinearKind import LinearKind
from .MetricRecord import MetricRecord
from .NetworkSpec import NetworkSpec, parse_bool
from .OptimizerKind import OptimizerKind
from .PerturbationKind import PerturbationKind
from .RunConfig import RunConfig
from .SchemeKind import SchemeKind
from .SchemeSpec import SchemeSpec
from .TrainConfig import TrainConfig
from .TrainMode import TrainMode
