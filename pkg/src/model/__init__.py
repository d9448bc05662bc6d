"""TIP-GNN model: time kernel, transition layers, link head and checkpoints."""

from .config import TipGnnConfig, NODE_FEATURE_MODES, SAMPLERS
from .time_encoding import TimeEncoder, initial_frequencies
from .layers import MLP, FeatureInitializer, TransitionPropagation, TransitionPooling, AttentionFusion, LinkPredictor
from .tip_gnn import TipGnn, TipGnnLayer
from .checkpoint import save_checkpoint, load_checkpoint

__all__ = [
    'TipGnnConfig', 'NODE_FEATURE_MODES', 'SAMPLERS',
    'TimeEncoder', 'initial_frequencies',
    'MLP', 'FeatureInitializer', 'TransitionPropagation', 'TransitionPooling', 'AttentionFusion', 'LinkPredictor',
    'TipGnn', 'TipGnnLayer', 'save_checkpoint', 'load_checkpoint',
]
