"""JSON wire formats for channels, POVMs, and verification reports.

Complex entries travel as [re, im] pairs. A channel file is
{"dim_in": d, "dim_out": d', "kraus": [matrix, ...]} and a POVM file is
{"dim": d, "elements": [matrix, ...]} with each matrix a nested list of
[re, im] pairs.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .channels import Povm, QuantumChannel


class SchemaError(ValueError):
    """File content does not match the wire format."""


def matrix_to_wire(matrix: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix, dtype=complex)]


def matrix_from_wire(obj: Any, rows: int, cols: int, what: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != rows:
        raise SchemaError(f"{what}: expected {rows} rows")
    out = np.empty((rows, cols), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"{what}: row {i} must have {cols} entries")
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(v, (int, float)) for v in entry)
            ):
                raise SchemaError(f"{what}: entry ({i}, {j}) must be a [re, im] pair")
            out[i, j] = complex(entry[0], entry[1])
    return out


def _require_positive_int(obj: Any, key: str, what: str) -> int:
    value = obj.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise SchemaError(f"{what}: {key!r} must be a positive integer")
    return value


def channel_to_dict(channel: QuantumChannel) -> dict:
    return {
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "kraus": [matrix_to_wire(k) for k in channel.kraus],
    }


def channel_from_dict(obj: Any) -> QuantumChannel:
    if not isinstance(obj, dict):
        raise SchemaError("channel file must hold a JSON object")
    dim_in = _require_positive_int(obj, "dim_in", "channel")
    dim_out = _require_positive_int(obj, "dim_out", "channel")
    kraus_obj = obj.get("kraus")
    if not isinstance(kraus_obj, list) or not kraus_obj:
        raise SchemaError("channel: 'kraus' must be a non-empty list")
    kraus = [
        matrix_from_wire(k, dim_out, dim_in, f"kraus[{idx}]")
        for idx, k in enumerate(kraus_obj)
    ]
    return QuantumChannel(kraus)


def povm_to_dict(povm: Povm) -> dict:
    return {
        "dim": povm.dim,
        "elements": [matrix_to_wire(el.matrix) for el in povm.elements],
    }


def povm_from_dict(obj: Any) -> Povm:
    if not isinstance(obj, dict):
        raise SchemaError("POVM file must hold a JSON object")
    dim = _require_positive_int(obj, "dim", "povm")
    elements_obj = obj.get("elements")
    if not isinstance(elements_obj, list) or not elements_obj:
        raise SchemaError("povm: 'elements' must be a non-empty list")
    elements = [
        matrix_from_wire(el, dim, dim, f"elements[{idx}]")
        for idx, el in enumerate(elements_obj)
    ]
    return Povm(elements)


def _load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def load_channel(path: str) -> QuantumChannel:
    return channel_from_dict(_load_json(path))


def save_channel(path: str, channel: QuantumChannel) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(channel_to_dict(channel), handle)
        handle.write("\n")


def load_povm(path: str) -> Povm:
    return povm_from_dict(_load_json(path))


def save_povm(path: str, povm: Povm) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(povm_to_dict(povm), handle)
        handle.write("\n")
