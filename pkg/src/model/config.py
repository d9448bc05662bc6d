"""Model hyperparameters."""

from dataclasses import asdict, dataclass

from utils.errors import ConfigError

NODE_FEATURE_MODES = ("zeros", "table", "learned")
SAMPLERS = ("temporal", "uniform")


@dataclass
class TipGnnConfig:
    """
    TIP-GNN architecture knobs.

    Defaults: d=128, two layers, two propagation steps with a 2-layer MLP,
    no damping, 20 sampled interactions, dropout 0.1.
    """

    d: int = 128
    d_t: int = 128
    d_e: int = 0
    layers: int = 2
    steps: int = 2
    mlp_depth: int = 2
    alpha: float = 0.0
    heads: int = 2
    neighbors: int = 20
    dropout: float = 0.1
    node_feature_mode: str = "zeros"
    sampler: str = "temporal"
    normalize_transitions: bool = False

    def validate(self) -> "TipGnnConfig":
        """
        Check field ranges and combinations.

        Raises:
            ConfigError: Naming the first invalid field
        """
        if self.d < 1:
            raise ConfigError("must be >= 1", "d")
        if self.d_t < 1:
            raise ConfigError("must be >= 1", "d_t")
        if self.d_e < 0:
            raise ConfigError("must be >= 0", "d_e")
        if self.heads < 1 or self.d % self.heads:
            raise ConfigError(f"d={self.d} must be divisible by heads={self.heads}", "heads")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"must be in [0, 1], got {self.alpha}", "alpha")
        if self.steps < 0:
            raise ConfigError("must be >= 0", "steps")
        if self.layers < 1:
            raise ConfigError("must be >= 1", "layers")
        if self.mlp_depth < 0:
            raise ConfigError("must be >= 0", "mlp_depth")
        if self.neighbors < 1:
            raise ConfigError("must be >= 1", "neighbors")
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigError(f"must be in [0, 1), got {self.dropout}", "dropout")
        if self.node_feature_mode not in NODE_FEATURE_MODES:
            raise ConfigError(f"must be one of {NODE_FEATURE_MODES}", "node_feature_mode")
        if self.sampler not in SAMPLERS:
            raise ConfigError(f"must be one of {SAMPLERS}", "sampler")
        return self

    def to_dict(self) -> dict:
        return asdict(self)
