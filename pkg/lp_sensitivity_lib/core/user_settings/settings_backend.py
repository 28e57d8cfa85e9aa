from abc import abstractmethod, ABCMeta

from ... import exceptions
from ...logger import logger
from ..utils import SubclassesMixin


class SettingsBackend(SubclassesMixin, metaclass=ABCMeta):

    @classmethod
    def get_backend(cls, settings_backend="default"):
        subclasses_dict = cls._get_subclasses_dict("settings_backend")
        if settings_backend not in subclasses_dict:
            raise exceptions.SettingsError(
                "Settings backend \"{}\" not implemented".format(
                    settings_backend
                )
            )
        logger.info("Settings backend: {}".format(
            subclasses_dict[settings_backend]
        ))

        return subclasses_dict[settings_backend]()

    @property
    @abstractmethod
    def feas_tol():
        """Get primal/dual feasibility tolerance."""
        pass

    @property
    @abstractmethod
    def gap_tol():
        """Get relative duality gap tolerance."""
        pass

    @property
    @abstractmethod
    def psd_tol():
        """Get PSD acceptance tolerance."""
        pass

    @property
    @abstractmethod
    def samples():
        """Get default number of sampling trials."""
        pass

    @samples.setter
    @abstractmethod
    def samples():
        """Set default number of sampling trials."""
        pass

    @property
    @abstractmethod
    def backend():
        """Get conic backend name."""
        pass

    @backend.setter
    @abstractmethod
    def backend():
        """Set conic backend name."""
        pass

    @abstractmethod
    def get(key):
        """Get any setting by SettingEnum."""
        pass

    @abstractmethod
    def set(key, value):
        """Set any setting by SettingEnum."""
        pass

    @abstractmethod
    def reset_to_default_configs():
        """Reset user configuration to default values."""
        pass

    @abstractmethod
    def get_user_settings():
        """Get user settings."""
        pass
