"""Built-in fault-model generators.

:class:`GeneratorSpec` names a family and its parameters and builds the
model; the ``gen_*`` functions can also be called directly.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass, field
from typing import Any, Callable

from hypersplit.errors import ParameterError
from hypersplit.fault_model import FaultModel
from hypersplit.generators.basic import (
    RotatedLayout,
    gen_expander_petersen,
    gen_repetition,
    gen_surface_perfect,
    gen_surface_phenom,
    gen_three_check,
    petersen_edges,
)
from hypersplit.generators.honeycomb import HoneycombLattice, build_circuit, gen_honeycomb

FAMILIES: dict[str, Callable[..., FaultModel]] = {
    "repetition": gen_repetition,
    "surface_perfect": gen_surface_perfect,
    "surface_phenom": gen_surface_phenom,
    "honeycomb": gen_honeycomb,
    "three_check": gen_three_check,
    "expander_petersen": gen_expander_petersen,
}


def family_parameters(family: str) -> list[str]:
    """Parameter names accepted by a family's generator."""
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise ParameterError(f"unknown family {family!r}; expected one of "
                             f"{sorted(FAMILIES)}") from None
    return list(inspect.signature(fn).parameters)


@dataclass(frozen=True)
class GeneratorSpec:
    """A generator family plus keyword parameters.

    ``p`` acts as a default for any of ``p_x``, ``p_y``, ``p_z`` and
    ``p_meas`` the family takes but ``params`` leaves out.

    Examples
    --------
    >>> GeneratorSpec("repetition", {"n": 3, "p": 0.1}).build().check_count
    2
    """

    family: str
    params: dict[str, Any] = field(default_factory=dict)

    def resolved(self) -> dict[str, Any]:
        names = family_parameters(self.family)
        params = dict(self.params)
        if "p" in params and "p" not in names:
            p = params.pop("p")
            for name in names:
                if name.startswith("p_"):
                    params.setdefault(name, p)
        unknown = sorted(set(params) - set(names))
        if unknown:
            raise ParameterError(f"{self.family} does not take {unknown}; "
                                 f"parameters are {names}")
        fn = FAMILIES[self.family]
        missing = [n for n, prm in inspect.signature(fn).parameters.items()
                   if prm.default is inspect.Parameter.empty and n not in params]
        if missing:
            raise ParameterError(f"{self.family} needs {missing}")
        return params

    def build(self) -> FaultModel:
        params = self.resolved()
        return FAMILIES[self.family](**params)


__all__ = [
    "FAMILIES",
    "GeneratorSpec",
    "HoneycombLattice",
    "RotatedLayout",
    "build_circuit",
    "family_parameters",
    "gen_expander_petersen",
    "gen_honeycomb",
    "gen_repetition",
    "gen_surface_perfect",
    "gen_surface_phenom",
    "gen_three_check",
    "petersen_edges",
]
