"""Text grammar for nonlinearity specs, e.g. ``expcrit:gamma=1,q=0``.

``scaled`` takes its inner family as the remainder of the string:
``scaled:c=2,inner=powerlog:tau=1,p=2,alpha=0.5``.
"""

from typing import Dict

from ..utils.errors import ArgumentError
from .base import Nonlinearity
from .families import REGISTRY, Scaled


def _parse_params(body: str, spec: str) -> Dict[str, float]:
    params: Dict[str, float] = {}
    if not body:
        return params
    for item in body.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ArgumentError(f"Malformed parameter '{item}' in '{spec}'")
        try:
            params[key.strip()] = float(value)
        except ValueError as e:
            raise ArgumentError(f"Parameter '{key}' in '{spec}' is not a number") from e
    return params


def parse_family(spec: str) -> Nonlinearity:
    """Build a nonlinearity from its text spec.

    Raises:
        ArgumentError: Unknown family or malformed parameters
        ParameterDomainError: Parameters outside the family's domain
    """
    tag, _, body = spec.strip().partition(":")
    tag = tag.strip().lower()
    if tag not in REGISTRY:
        raise ArgumentError(f"Unknown nonlinearity family '{tag}' (known: {', '.join(REGISTRY)})")

    if tag == Scaled.family:
        head, sep, inner = body.partition("inner=")
        if not sep:
            raise ArgumentError(f"'{spec}' is missing inner=<family spec>")
        params = _parse_params(head.rstrip(","), spec)
        return Scaled(**params, inner=parse_family(inner))

    return REGISTRY[tag](**_parse_params(body, spec))


def format_family(nl: Nonlinearity) -> str:
    """Inverse of parse_family."""
    if isinstance(nl, Scaled):
        return f"scaled:c={nl.c!r},inner={format_family(nl.inner)}"
    body = ",".join(f"{name}={value!r}" for name, value in nl.parameters().items())
    return f"{nl.family}:{body}"
