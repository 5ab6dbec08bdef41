"""Declarative map definition files (JSON).

A map file names the dimension, the forward and inverse component
polynomials in the shared text format, an optional membership
certificate block, and an optional label:

    {
      "dimension": 2,
      "variables": ["X", "Y"],
      "forward":  ["Y", "Y^2 - X"],
      "inverse":  ["X^2 - Y", "X"],
      "label": "henon",
      "certificate": {"m": 3,
                      "P": [["0", "0"], ["0", "Y"]],
                      "Q": [["X", "0"], ["0", "0"]],
                      "R": ["X * Y", "X * Y"]}
    }

The loader verifies the inverse pair, decides regularity (dimension 2)
or verifies the supplied certificate (higher dimensions), and builds a
certificate when none is given, so a LoadedMap is always fully
validated.  R polynomials may use the extra variable "T".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .certificate import (
    Certificate,
    build_certificate_n2,
    verify_certificate_for_maps,
)
from .errors import InputError, NotRegularError, PolyParseError, UndecidedError
from .maps import PolyMap, RegularAutomorphism
from .poly import default_names, parse_poly, poly_to_text


@dataclass(frozen=True)
class LoadedMap:
    aut: RegularAutomorphism
    certificate: Certificate
    label: str
    variables: tuple
    source: str


def _parse_component(text, names, where: str):
    if not isinstance(text, str):
        raise InputError(f"{where}: polynomial must be a string")
    try:
        return parse_poly(text, names)
    except PolyParseError as exc:
        raise PolyParseError(f"{where}: {exc}") from exc


def _parse_certificate(block, names, dimension: int) -> Certificate:
    if not isinstance(block, dict):
        raise InputError("certificate block must be an object")
    try:
        m = int(block["m"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("certificate block needs an integer 'm'") from exc
    for key in ("P", "Q", "R"):
        if key not in block:
            raise InputError(f"certificate block is missing '{key}'")
    names_t = tuple(names) + ("T",)

    def matrix(key):
        rows = block[key]
        if not isinstance(rows, list) or len(rows) != dimension:
            raise InputError(f"certificate {key} must have {dimension} rows")
        out = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != dimension:
                raise InputError(f"certificate {key}[{i}] must have {dimension} entries")
            out.append(
                tuple(
                    _parse_component(entry, names, f"certificate {key}[{i}][{j}]")
                    for j, entry in enumerate(row)
                )
            )
        return tuple(out)

    r_block = block["R"]
    if not isinstance(r_block, list) or len(r_block) != dimension:
        raise InputError(f"certificate R must have {dimension} entries")
    r_polys = tuple(
        _parse_component(entry, names_t, f"certificate R[{i}]")
        for i, entry in enumerate(r_block)
    )
    return Certificate(m, matrix("P"), matrix("Q"), r_polys)


def load_map_data(data: dict, source: str = "<data>") -> LoadedMap:
    if not isinstance(data, dict):
        raise InputError(f"{source}: map definition must be a JSON object")
    try:
        dimension = int(data["dimension"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{source}: integer 'dimension' is required") from exc
    if dimension < 1:
        raise InputError(f"{source}: dimension must be >= 1")
    variables = data.get("variables")
    if variables is None:
        variables = default_names(dimension)
    else:
        variables = tuple(str(v) for v in variables)
        if len(variables) != dimension or len(set(variables)) != dimension:
            raise InputError(f"{source}: need {dimension} distinct variable names")
        if "T" in variables:
            raise InputError(f"{source}: 'T' is reserved for the certificate block")
    for key in ("forward", "inverse"):
        comp = data.get(key)
        if not isinstance(comp, list) or len(comp) != dimension:
            raise InputError(f"{source}: '{key}' must list {dimension} polynomials")
    forward = PolyMap(
        [
            _parse_component(t, variables, f"{source}: forward[{i}]")
            for i, t in enumerate(data["forward"])
        ]
    )
    inverse = PolyMap(
        [
            _parse_component(t, variables, f"{source}: inverse[{i}]")
            for i, t in enumerate(data["inverse"])
        ]
    )
    label = str(data.get("label", Path(source).stem if source != "<data>" else "map"))

    cert_block = data.get("certificate")
    cert = (
        _parse_certificate(cert_block, variables, dimension)
        if cert_block is not None
        else None
    )

    if dimension == 2:
        try:
            aut = RegularAutomorphism.validate(forward, inverse)
        except NotRegularError as exc:
            if exc.witness is not None:
                raise NotRegularError(
                    f"{source}: map is not regular: common top-form factor "
                    f"{poly_to_text(exc.witness, variables)}",
                    witness=exc.witness,
                ) from exc
            raise
        if cert is None:
            cert = build_certificate_n2(aut)
        elif not verify_certificate_for_maps(forward, inverse, cert):
            raise InputError(f"{source}: supplied certificate identities fail")
    else:
        if cert is None:
            raise UndecidedError(
                f"{source}: dimension {dimension} needs a certificate block "
                "to settle regularity"
            )
        if not verify_certificate_for_maps(forward, inverse, cert):
            raise InputError(f"{source}: supplied certificate identities fail")
        aut = RegularAutomorphism.from_certified_regularity(
            forward, inverse, detail="membership certificate verified"
        )
    return LoadedMap(aut, cert, label, variables, source)


def load_map_file(path) -> LoadedMap:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read map file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolyParseError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return load_map_data(data, str(path))
