"""Strict INI experiment configuration.

Every section is optional; every key has a default.  Unknown sections and
unknown keys are errors.  Lists are comma separated.  See README for the
full grammar.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SuppressionError
from .regulator import RegulatorParams

__all__ = ["ConfigError", "ExperimentConfig", "SCHEMA", "load_config", "parse_config"]


class ConfigError(SuppressionError):
    pass


def _float_list(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _choice(*options):
    def parse(text):
        text = text.strip()
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text
    return parse


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError("expected an integer")
    return int(value)


SCHEMA = {
    "regulator": {
        "beta": (float, 1.0),
        "eta": (float, 0.0),
        "alpha_eps": (float, 1.0),
        "k_c": (float, 1.0),
        "lambda": (float, 1.0),
        "dim": (_int, 1),
    },
    "eval": {"k": (_float_list, [1.0])},
    "admissibility": {
        "points": (_int, 1000),
        "k_min": (float, 1e-6),
        "k_max": (float, 1e6),
    },
    "integral": {
        "alpha_growth": (float, 0.0),
        "tol": (float, 1e-10),
        "tail": (_choice("rational", "inverse-square"), "rational"),
    },
    "norms": {
        "function": (_choice("gaussian", "bump"), "gaussian"),
        "width": (float, 1.0),
        "amplitude": (float, 1.0),
        "p": (float, 2.0),
        "cutoffs": (_float_list, [2.0, 4.0, 8.0]),
        "tol": (float, 1e-10),
    },
    "hsnorm": {
        "alpha_kernel": (float, 0.25),
        "mode": (_choice("regulator", "gaussian"), "regulator"),
        "gamma": (float, 1.0),
        "tol": (float, 1e-10),
    },
    "spectrum": {
        "n": (_int, 64),
        "k_max": (float, 0.0),  # 0 selects the automatic Omega(k_max) < 1e-8 Omega(0) rule
        "gamma": (float, 1.0),
        "mode": (_choice("regulator", "gaussian"), "regulator"),
        "alpha_kernel": (float, 0.25),
        "top": (_int, 10),
    },
    "gap": {"gamma": (float, 1.0)},
    "flow": {
        "k": (float, 1.0),
        "lambda_start": (float, 0.1),
        "lambda_end": (float, 10.0),
        "steps": (_int, 1000),
    },
    "ricci": {"k": (float, 1.0)},
    "partition": {
        "uv_cutoff": (float, 10.0),
        "tol": (float, 1e-10),
    },
    "report": {"samples": (_int, 20)},
}


@dataclass(frozen=True)
class ExperimentConfig:
    regulator: RegulatorParams
    sections: dict = field(default_factory=dict)

    def __getitem__(self, section):
        return self.sections[section]


def parse_config(text, source="<string>"):
    parser = configparser.ConfigParser(
        interpolation=None,
        default_section="\0no-default",
        inline_comment_prefixes=("#", ";"),
    )
    parser.optionxform = str  # keys are case sensitive
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None

    sections = {}
    for name in parser.sections():
        if name not in SCHEMA:
            raise ConfigError(f"{source}: unknown section [{name}]")
    for name, keys in SCHEMA.items():
        values = {key: default for key, (_, default) in keys.items()}
        if parser.has_section(name):
            for key, raw in parser.items(name):
                if key not in keys:
                    raise ConfigError(f"{source}: unknown key '{key}' in section [{name}]")
                conv = keys[key][0]
                try:
                    values[key] = conv(raw)
                except ValueError as exc:
                    raise ConfigError(f"{source}: bad value for [{name}] {key} = {raw!r}: {exc}") from None
        sections[name] = values

    reg = sections["regulator"]
    params = RegulatorParams(
        beta=reg["beta"], eta=reg["eta"], alpha_eps=reg["alpha_eps"],
        k_c=reg["k_c"], lam=reg["lambda"], dim=reg["dim"],
    )
    return ExperimentConfig(params, sections)


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, source=str(path))
