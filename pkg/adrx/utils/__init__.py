from .config_loader import ConfigParseError, ConfigValidationError, load_config, apply_overrides
from .file_handler import OutputWriteError, write_csv, write_metadata, version_string

__all__ = [
    "ConfigParseError", "ConfigValidationError", "load_config", "apply_overrides",
    "OutputWriteError", "write_csv", "write_metadata", "version_string",
]
