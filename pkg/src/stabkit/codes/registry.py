"""Bundled codes and matrices shipped as text assets."""
from functools import lru_cache
from importlib import resources

from ..errors import ParseError
from .fileformat import parse_code, parse_matrix

ALIASES = {
    "five_qubit": "five_qubit", "five": "five_qubit", "perfect5": "five_qubit",
    "seven_qubit": "seven_qubit", "steane7": "seven_qubit", "steane": "seven_qubit",
    "nine_qubit": "nine_qubit", "shor9": "nine_qubit",
}


def _asset(filename):
    return resources.files("stabkit").joinpath("data", filename).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def get_code(name):
    key = ALIASES.get(name)
    if key is None:
        raise ParseError(f"unknown code {name!r}; known: {sorted(set(ALIASES))}")
    return parse_code(_asset(key + ".stab"), name=key)


def load_matrix(name):
    return parse_matrix(_asset(name + ".mat"))


def five_qubit():
    return get_code("five_qubit")


def seven_qubit():
    return get_code("seven_qubit")


def nine_qubit():
    return get_code("nine_qubit")
