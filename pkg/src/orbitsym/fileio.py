"""JSON file formats for orbit sets and concrete groups.

Real scalars are plain numbers, complex scalars two-element [re, im]
arrays; matrices are stored as flat row-major scalar lists.  Floats are
written with Python's shortest round-trip representation, so serialize /
parse is lossless.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .groupcore import MultiplicationTable
from .numerics import FieldTag
from .reconstruct import ConcreteGroup, table_from_matrices


class FileFormatError(ValueError):
    """Malformed orbit or group file (a usage error, not a numerics one)."""


@dataclass(frozen=True)
class OrbitData:
    field: FieldTag
    dimension: int
    orbits: list[np.ndarray]


def _encode_scalar(value, field: FieldTag):
    if field is FieldTag.COMPLEX:
        value = complex(value)
        return [value.real, value.imag]
    return float(np.real(value))


def _decode_scalar(raw, field: FieldTag, where: str):
    if field is FieldTag.COMPLEX:
        if not (isinstance(raw, list) and len(raw) == 2):
            raise FileFormatError(f"{where}: complex scalar must be [re, im]")
        return complex(float(raw[0]), float(raw[1]))
    if isinstance(raw, (list, dict)):
        raise FileFormatError(f"{where}: real scalar must be a number")
    return float(raw)


def _require(payload: dict, key: str, where: str):
    if key not in payload:
        raise FileFormatError(f"{where}: missing key {key!r}")
    return payload[key]


def _parse_field(payload: dict, where: str) -> FieldTag:
    try:
        return FieldTag.parse(str(_require(payload, "field", where)))
    except ValueError as exc:
        raise FileFormatError(f"{where}: {exc}")


def _load(path, where: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{where}: invalid JSON ({exc})")
    if not isinstance(payload, dict):
        raise FileFormatError(f"{where}: top level must be an object")
    return payload


def write_orbits(path, field: FieldTag, dimension: int, orbits) -> None:
    payload = {
        "field": field.value,
        "dimension": int(dimension),
        "orbits": [
            [[_encode_scalar(x, field) for x in point] for point in np.asarray(orbit)]
            for orbit in orbits
        ],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def read_orbits(path) -> OrbitData:
    where = str(path)
    payload = _load(path, where)
    field = _parse_field(payload, where)
    dimension = _require(payload, "dimension", where)
    if not isinstance(dimension, int) or dimension < 1:
        raise FileFormatError(f"{where}: dimension must be a positive integer")
    raw_orbits = _require(payload, "orbits", where)
    if not isinstance(raw_orbits, list) or not raw_orbits:
        raise FileFormatError(f"{where}: orbits must be a nonempty list")
    orbits = []
    for oi, raw_orbit in enumerate(raw_orbits):
        if not isinstance(raw_orbit, list) or not raw_orbit:
            raise FileFormatError(f"{where}: orbit {oi} must be a nonempty list")
        points = []
        for pi, raw_point in enumerate(raw_orbit):
            if not isinstance(raw_point, list) or len(raw_point) != dimension:
                raise FileFormatError(
                    f"{where}: orbit {oi} point {pi} does not match dimension "
                    f"{dimension}"
                )
            points.append(
                [
                    _decode_scalar(x, field, f"{where}: orbit {oi} point {pi}")
                    for x in raw_point
                ]
            )
        orbits.append(np.array(points, dtype=field.dtype))
    return OrbitData(field=field, dimension=dimension, orbits=orbits)


def write_group(path, group: ConcreteGroup, names=None) -> None:
    payload = {
        "field": group.field.value,
        "dimension": int(group.dimension),
        "matrices": [
            [_encode_scalar(x, group.field) for x in np.asarray(mat).ravel()]
            for mat in group.matrices
        ],
        "table": [[int(x) for x in row] for row in group.table.product],
        "identity": int(group.table.identity),
    }
    if names is not None:
        payload["names"] = list(names)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def read_group(path) -> ConcreteGroup:
    where = str(path)
    payload = _load(path, where)
    field = _parse_field(payload, where)
    dimension = _require(payload, "dimension", where)
    if not isinstance(dimension, int) or dimension < 1:
        raise FileFormatError(f"{where}: dimension must be a positive integer")
    raw_matrices = _require(payload, "matrices", where)
    if not isinstance(raw_matrices, list) or not raw_matrices:
        raise FileFormatError(f"{where}: matrices must be a nonempty list")
    mats = []
    for mi, raw in enumerate(raw_matrices):
        if not isinstance(raw, list) or len(raw) != dimension * dimension:
            raise FileFormatError(
                f"{where}: matrix {mi} must hold {dimension * dimension} "
                "row-major scalars"
            )
        flat = [
            _decode_scalar(x, field, f"{where}: matrix {mi}") for x in raw
        ]
        mats.append(
            np.array(flat, dtype=field.dtype).reshape(dimension, dimension)
        )
    matrices = np.stack(mats)

    raw_table = payload.get("table")
    if raw_table is not None:
        n = len(mats)
        product = np.asarray(raw_table, dtype=np.intp)
        if product.shape != (n, n):
            raise FileFormatError(f"{where}: table must be {n} x {n}")
        identity = payload.get("identity", 0)
        table = MultiplicationTable(product=product, identity=int(identity))
    else:
        table = table_from_matrices(matrices)
    return ConcreteGroup(
        field=field, dimension=dimension, matrices=matrices, table=table
    )
