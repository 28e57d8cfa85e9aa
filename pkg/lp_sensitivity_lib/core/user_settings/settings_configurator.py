import json
import os

from ... import exceptions
from ...constants import (LP_SENSITIVITY_XDG_CONFIG_HOME,
                          USER_SETTINGS_FILEPATH, USER_SETTINGS_TEMPLATE)
from ...enums import BackendEnum, SettingEnum
from ...logger import logger


class SettingsConfigurator:
    def __init__(
        self,
        user_config_dir=LP_SENSITIVITY_XDG_CONFIG_HOME,
        user_config_fp=USER_SETTINGS_FILEPATH
    ):
        self.user_config_filepath = user_config_fp
        if not os.path.isdir(user_config_dir):
            os.makedirs(user_config_dir)
        self.initialize_configuration_file()

    def get_setting(self, key):
        """Get a single setting, falling back to the template."""
        self._ensure_key_is_valid(key)
        user_configs = self.get_user_configurations()
        try:
            return user_configs[key]
        except KeyError:
            return USER_SETTINGS_TEMPLATE[key]

    def set_setting(self, key, value):
        """Set a single setting.

        Args:
            key (SettingEnum)
            value: coerced to the template type
        """
        self._ensure_key_is_valid(key)
        value = self._coerce(key, value)

        user_configs = self.get_user_configurations()
        user_configs[key] = value
        self.set_user_configurations(user_configs)
        logger.info("Setting {} set to {}".format(key.value, value))

    def reset_default_configs(self):
        """Reset user configurations to default values."""
        self.initialize_configuration_file(True)

    def initialize_configuration_file(self, force_init=False):
        """Initialize configurations file.

        Args:
            force_init (bool): if True then overwrites current configs
        """
        if not os.path.isfile(self.user_config_filepath) or force_init: # noqa
            self.set_user_configurations(USER_SETTINGS_TEMPLATE)

    def get_user_configurations(self):
        """Get user configurations from file. Reads from file.

        If any keys missmatch, it will attempt to reset
        the configuration file to default values and re-read
        the values.

        Returns:
            dict: SettingEnum keys
        """
        with open(self.user_config_filepath, "r") as f:
            try:
                user_configuration_object = self.transform_dict_to_enum(
                    json.load(f)
                )
            except (KeyError, ValueError, TypeError,
                    exceptions.SettingsError) as e:
                logger.warning(
                    "Resetting unreadable settings file: {}".format(e)
                )
            else:
                return user_configuration_object

        self.reset_default_configs()
        with open(self.user_config_filepath, "r") as f:
            return self.transform_dict_to_enum(json.load(f))

    def transform_dict_to_enum(self, json_data):
        """Transform user configurations from json/dict
        to a dict keyed by SettingEnum.

        Args:
            json_data (dict): user configurations read from file

        Returns:
            dict
        """
        transformed_object = dict(USER_SETTINGS_TEMPLATE)
        for json_data_key, json_value in json_data.items():
            key = SettingEnum(json_data_key.lower())
            transformed_object[key] = self._coerce(key, json_value)
        return transformed_object

    def transform_enum_to_dict(self, config_dict):
        return dict(
            (key.value, value) for key, value in config_dict.items()
        )

    def set_user_configurations(self, config_dict):
        """Set user configurations. Writes to file.

        Args:
            config_dict (dict): user configurations
        """
        object = self.transform_enum_to_dict(config_dict)
        with open(self.user_config_filepath, "w") as f:
            json.dump(object, f, indent=4, sort_keys=True)

    def _ensure_key_is_valid(self, key):
        if not isinstance(key, SettingEnum):
            raise exceptions.SettingsError(
                "Illegal settings key {!r}".format(key)
            )

    def _coerce(self, key, value):
        template_value = USER_SETTINGS_TEMPLATE[key]
        try:
            if isinstance(template_value, bool):
                if isinstance(value, str):
                    value = value.strip().lower() in ("1", "true", "yes", "on")
                coerced = bool(value)
            elif isinstance(template_value, int):
                coerced = int(value)
                if coerced < 1:
                    raise ValueError("must be positive")
            elif isinstance(template_value, float):
                coerced = float(value)
                if not coerced > 0:
                    raise ValueError("must be positive")
            else:
                coerced = str(value)
        except (TypeError, ValueError) as e:
            raise exceptions.SettingsError(
                "Illegal value {!r} for {}: {}".format(value, key.value, e)
            )

        if key == SettingEnum.BACKEND:
            try:
                BackendEnum(coerced)
            except ValueError:
                raise exceptions.SettingsError(
                    "Illegal backend {!r}".format(coerced)
                )
        if key == SettingEnum.CONIC_SOLVER:
            coerced = coerced.upper()
        return coerced
