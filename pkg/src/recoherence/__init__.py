from .api import Experiments, load_config

__version__ = "0.1.0"


__all__ = ["Experiments", "load_config"]
