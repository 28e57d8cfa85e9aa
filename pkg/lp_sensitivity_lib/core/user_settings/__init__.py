from . import default_settings_backend # noqa
from .settings_backend import SettingsBackend

__all__ = ["SettingsBackend"]
