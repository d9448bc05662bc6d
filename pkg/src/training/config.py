"""Training hyperparameters."""

from dataclasses import asdict, dataclass

from utils.config import Config
from utils.errors import ConfigError


@dataclass
class TrainConfig:
    """
    Optimization settings.

    lr 1e-4, batches of 200 interactions and one negative per positive;
    weight decay defaults to 1e-5.
    """

    lr: float = 1e-4
    weight_decay: float = 1e-5
    batch_size: int = 200
    neg_samples: int = 1
    max_epochs: int = 50
    patience: int = 3
    seed: int = Config.SEED
    shuffle: bool = False
    chunk_size: int = 50
    quiet: bool = False

    def validate(self) -> "TrainConfig":
        """
        Raises:
            ConfigError: Naming the first invalid field
        """
        if self.lr <= 0:
            raise ConfigError(f"must be > 0, got {self.lr}", "lr")
        if self.weight_decay < 0:
            raise ConfigError(f"must be >= 0, got {self.weight_decay}", "weight_decay")
        if self.batch_size < 1:
            raise ConfigError("must be >= 1", "batch_size")
        if self.neg_samples < 1:
            raise ConfigError("must be >= 1", "neg_samples")
        if self.max_epochs < 1:
            raise ConfigError("must be >= 1", "max_epochs")
        if self.patience < 1:
            raise ConfigError("must be >= 1", "patience")
        if self.chunk_size < 1:
            raise ConfigError("must be >= 1", "chunk_size")
        return self

    def to_dict(self) -> dict:
        return asdict(self)
