import os

from ..constants import ENV_BACKEND
from .utils import Singleton


class ExecutionEnvironment(metaclass=Singleton):
    """This class holds all the process-wide elements.

    Settings and solver backends are resolved lazily so that
    tests can swap them through the setters.

    This is a singleton.
    """

    def __init__(self):
        self.__settings = None
        self.__conic_backend = None
        self.__lp_backend = None

    @property
    def settings(self):
        """Return the user settings backend"""
        if self.__settings is None:
            from .user_settings import SettingsBackend
            self.__settings = SettingsBackend.get_backend()
        return self.__settings

    @settings.setter
    def settings(self, newvalue):
        self.__settings = newvalue

    @property
    def conic_backend(self):
        """Return the conic backend (env var wins over settings)"""
        if self.__conic_backend is None:
            from .conic_backend import ConicBackend
            backend_name = os.environ.get(ENV_BACKEND) or self.settings.backend
            self.__conic_backend = ConicBackend.get_backend(backend_name)
        return self.__conic_backend

    @conic_backend.setter
    def conic_backend(self, newvalue):
        self.__conic_backend = newvalue

    @property
    def lp_backend(self):
        """Return the backend used for plain LP solves."""
        if self.__lp_backend is None:
            from .conic_backend import ConicBackend
            self.__lp_backend = ConicBackend.get_backend("highs")
        return self.__lp_backend

    @lp_backend.setter
    def lp_backend(self, newvalue):
        self.__lp_backend = newvalue

    @property
    def conic_settings(self):
        """Solver settings derived from the current user settings."""
        from .conic_backend import ConicSettings
        return ConicSettings.from_settings(self.settings)

    def reset(self):
        """Drop every lazily built element."""
        self.__settings = None
        self.__conic_backend = None
        self.__lp_backend = None
