# This file is part of ts_succinct_qwt.
#
# Developed for the Vera Rubin Observatory Telescope and Site Systems.
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

import ast
import configparser
import operator
from collections import defaultdict

__all__ = ["read_conf_file", "parse_conf_value"]

_OPERATORS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.FloorDiv: operator.floordiv,
    ast.Pow: operator.pow,
    ast.USub: operator.neg,
}


def _arithmetic(node):
    if isinstance(node, ast.Expression):
        return _arithmetic(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.BinOp) and type(node.op) in _OPERATORS:
        return _OPERATORS[type(node.op)](_arithmetic(node.left), _arithmetic(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _OPERATORS:
        return _OPERATORS[type(node.op)](_arithmetic(node.operand))
    raise ValueError("Not an arithmetic expression.")


def _scalar(text):
    text = text.strip()
    for convert in (int, float):
        try:
            return convert(text)
        except ValueError:
            pass
    if text.lower() in ("true", "yes", "on"):
        return True
    if text.lower() in ("false", "no", "off"):
        return False
    try:
        return _arithmetic(ast.parse(text, mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        return text


def parse_conf_value(text):
    """Convert one configuration value.

    Integers come first, then floats, then booleans, then arithmetic on
    numeric literals such as ``64 * 1024 * 1024``. Bracketed values become
    lists whose items are converted the same way. Anything else stays a
    string.
    """
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        inner = text[1:-1].strip()
        if not inner:
            return []
        return [_scalar(item) for item in inner.split(",")]
    return _scalar(text)


def read_conf_file(filename):
    """Read a sectioned configuration file.

    An example file is shown below:

    |  [predictor]
    |  # Integer parameter
    |  coarse_epsilon = 4096
    |  # Arithmetic on literals
    |  max_text_bytes = 64 * 1024 * 1024
    |  # List parameter
    |  epsilons = [16, 256, 2048]
    |  # Boolean parameter
    |  corrected = False

    Parameters
    ----------
    filename : `str`
        The configuration file name.

    Returns
    -------
    `dict`
        Section name to a `dict` of converted values.

    Raises
    ------
    FileNotFoundError
        The file does not exist.
    """
    config = configparser.ConfigParser()
    with open(filename) as stream:
        config.read_file(stream)

    config_dict = defaultdict(dict)
    for section in config.sections():
        for key, value in config.items(section):
            config_dict[section][key] = parse_conf_value(value)
    return config_dict
