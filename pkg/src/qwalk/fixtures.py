"""Oracle-derived constants committed alongside the code (``fixtures.json``)."""

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def _all() -> dict:
    text = resources.files(__package__).joinpath("fixtures.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_fixture(name: str) -> dict:
    try:
        return _all()[name]
    except KeyError:
        raise KeyError(f"no committed fixture named {name!r}") from None
