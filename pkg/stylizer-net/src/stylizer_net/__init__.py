"""Feed-forward neural stylizer for composed aesthetic codes, exposed through
the primary toolkit's external stylizer contract."""

from .compare import apply_model, compare_layer_configs
from .features import LAYER_CONFIGS, LossNetwork
from .losses import content_loss, gram_matrix, style_loss
from .training import TrainConfig, describe_model, load_model, save_model, train
from .transform import TransformNetwork

__version__ = "0.1.0"
