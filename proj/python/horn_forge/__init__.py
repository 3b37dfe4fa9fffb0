"""Horn-constraint generation, solving and certification for transition systems."""

from ._core import (
    HornSystem,
    InputError,
    ResourceError,
    TransitionSystem,
    UnsupportedFragment,
    certify,
    generate,
    oracle,
    parse_program,
    solve,
)

__all__ = [
    "HornSystem",
    "InputError",
    "ResourceError",
    "TransitionSystem",
    "UnsupportedFragment",
    "certify",
    "generate",
    "oracle",
    "parse_program",
    "solve",
]
