# This file is part of ts_sfh_torsion.
#
# Developed for the Vera C. Rubin Observatory Telescope and Site Systems.
# This product includes software developed by the LSST Project
# (https://www.lsst.org).
# See the COPYRIGHT file at the top-level directory of this distribution
# for details of code ownership.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

__all__ = ["InputFileError", "DefaultingValidator", "load_json_file", "load_yaml_file"]

import copy
import json
import logging
import pathlib

import jsonschema
import yaml


class InputFileError(ValueError):
    """An input file could not be parsed or does not match its schema."""


class DefaultingValidator:
    """Validate data against a JSON schema, filling in default values.

    Parameters
    ----------
    schema : `dict`
        JSON schema (draft 7).

    Notes
    -----
    Follows ``lsst.ts.salobj.DefaultingValidator``, which checks CSC
    configuration, without depending on salobj. Defaults are applied for
    properties missing from an object before the final validation, so the
    returned data always satisfies the schema.
    """

    def __init__(self, schema):
        validator_class = jsonschema.validators.validator_for(schema)
        validator_class.check_schema(schema)
        self.final_validator = validator_class(schema)

        validate_properties = validator_class.VALIDATORS["properties"]

        def set_defaults(validator, properties, instance, schema):
            if isinstance(instance, dict):
                for name, subschema in properties.items():
                    if "default" in subschema and name not in instance:
                        instance[name] = copy.deepcopy(subschema["default"])
            yield from validate_properties(validator, properties, instance, schema)

        defaulting_class = jsonschema.validators.extend(validator_class, {"properties": set_defaults})
        self.defaults_validator = defaulting_class(schema)

    def validate(self, data):
        """Return a copy of ``data`` with defaults applied.

        Raises
        ------
        jsonschema.ValidationError
            If the data does not match the schema.
        """
        result = copy.deepcopy(data) if data is not None else dict()
        for error in self.defaults_validator.iter_errors(result):
            raise error
        self.final_validator.validate(result)
        return result


def _format_validation_error(path, error):
    location = "/".join(str(item) for item in error.absolute_path) or "<root>"
    return f"{path}: schema violation at {location}: {error.message}"


def load_json_file(path, schema, log=None):
    """Read a JSON file and validate it against ``schema``.

    Parameters
    ----------
    path : `str` or `pathlib.Path`
        File to read (UTF-8).
    schema : `dict`
        JSON schema for the file contents.
    log : `logging.Logger`, optional
        Logger for progress messages.

    Returns
    -------
    data : `dict`
        Parsed data, with schema defaults applied.

    Raises
    ------
    InputFileError
        If the file cannot be read, is not valid JSON (the message gives the
        line and column), or does not match the schema (the message gives
        the JSON path).
    """
    log = log or logging.getLogger(__name__)
    path = pathlib.Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputFileError(f"{path}: cannot read file: {e.strerror}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFileError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    try:
        data = DefaultingValidator(schema).validate(data)
    except jsonschema.ValidationError as e:
        raise InputFileError(_format_validation_error(path, e)) from e
    log.debug("Read %s", path)
    return data


def load_yaml_file(path, schema, log=None):
    """Read a YAML file and validate it against ``schema``.

    Works like `load_json_file`; an empty file yields the schema defaults.
    """
    log = log or logging.getLogger(__name__)
    path = pathlib.Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputFileError(f"{path}: cannot read file: {e.strerror}") from e
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark is not None else ""
        raise InputFileError(f"{path}: {where}{e}") from e
    try:
        data = DefaultingValidator(schema).validate(data)
    except jsonschema.ValidationError as e:
        raise InputFileError(_format_validation_error(path, e)) from e
    log.debug("Read %s", path)
    return data
