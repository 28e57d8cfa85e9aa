from ...enums import BackendEnum, SettingEnum
from .settings_backend import SettingsBackend
from .settings_configurator import SettingsConfigurator


class Settings(SettingsBackend):
    """Settings class.
    Use it to get and set user settings.

    Exposes methods:
        get(SettingEnum)
        set(SettingEnum, value)
        get_user_settings()
        reset_to_default_configs()

    Properties:
        feas_tol, gap_tol, psd_tol
            Gets the acceptance tolerances.

        samples
            Gets/Sets the number of sampling trials.

        backend
            Gets/Sets the conic backend name.
    """
    settings_backend = "default"

    def __init__(self, settings_configurator=None):
        super().__init__()
        self.settings_configurator = settings_configurator or SettingsConfigurator() # noqa

    @property
    def feas_tol(self):
        return self.get(SettingEnum.FEAS_TOL)

    @property
    def gap_tol(self):
        return self.get(SettingEnum.GAP_TOL)

    @property
    def psd_tol(self):
        return self.get(SettingEnum.PSD_TOL)

    @property
    def samples(self):
        """Get number of sampling trials.

        Returns:
            int
        """
        return self.get(SettingEnum.SAMPLES)

    @samples.setter
    def samples(self, value):
        self.set(SettingEnum.SAMPLES, value)

    @property
    def backend(self):
        """Get conic backend name.

        Returns:
            string: one of BackendEnum values
        """
        return self.get(SettingEnum.BACKEND)

    @backend.setter
    def backend(self, value):
        if isinstance(value, BackendEnum):
            value = value.value
        self.set(SettingEnum.BACKEND, value)

    @property
    def improvement_rounds(self):
        return self.get(SettingEnum.IMPROVEMENT_ROUNDS)

    @property
    def relaxation_size_cap(self):
        return self.get(SettingEnum.RELAXATION_SIZE_CAP)

    @property
    def jobs(self):
        return self.get(SettingEnum.JOBS)

    def get(self, key):
        return self.settings_configurator.get_setting(key)

    def set(self, key, value):
        self.settings_configurator.set_setting(key, value)

    def reset_to_default_configs(self):
        """Reset user configuration to default values."""
        self.settings_configurator.reset_default_configs()

    def get_user_settings(self):
        """Get user settings.

        Returns:
            dict:
                Keys: SettingEnum
        """
        return self.settings_configurator.get_user_configurations()
