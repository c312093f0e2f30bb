"""Binary parameter-vector files.

Layout: magic ``CLMO``, format version (u32 LE), length-prefixed JSON spec
descriptor, parameter count (u64 LE), then float64 little-endian values in
canonical order. Round trips are bit-exact.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from climoe.errors import SchemaError
from climoe.nn.mlp import MlpSpec, ParamVector

MAGIC = b"CLMO"
VERSION = 1


def save_params(path: str | Path, spec: MlpSpec, params: ParamVector) -> None:
    if params.spec_hash != spec.spec_hash():
        raise SchemaError("parameter vector does not belong to the given spec")
    desc = json.dumps(spec.descriptor(), sort_keys=True).encode()
    values = np.ascontiguousarray(params.values, dtype="<f8")
    blob = b"".join(
        [
            MAGIC,
            struct.pack("<I", VERSION),
            struct.pack("<I", len(desc)),
            desc,
            struct.pack("<Q", values.shape[0]),
            values.tobytes(),
        ]
    )
    Path(path).write_bytes(blob)


def load_params(path: str | Path, expected_spec: MlpSpec | None = None) -> tuple[MlpSpec, ParamVector]:
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < 12 or blob[:4] != MAGIC:
        raise SchemaError(f"{path.name}: not a CLMO parameter file")
    version = struct.unpack_from("<I", blob, 4)[0]
    if version != VERSION:
        raise SchemaError(f"{path.name}: unsupported version {version}")
    desc_len = struct.unpack_from("<I", blob, 8)[0]
    header_end = 12 + desc_len + 8
    if len(blob) < header_end:
        raise SchemaError(f"{path.name}: truncated header")
    try:
        desc = json.loads(blob[12 : 12 + desc_len].decode())
        spec = MlpSpec.from_descriptor(desc)
    except (ValueError, KeyError) as exc:
        raise SchemaError(f"{path.name}: corrupt spec descriptor: {exc}") from exc
    count = struct.unpack_from("<Q", blob, 12 + desc_len)[0]
    if count != spec.n_params:
        raise SchemaError(f"{path.name}: parameter count {count} != spec size {spec.n_params}")
    if len(blob) != header_end + 8 * count:
        raise SchemaError(f"{path.name}: truncated or oversized value block")
    if expected_spec is not None and spec != expected_spec:
        raise SchemaError(f"{path.name}: spec descriptor does not match the expected spec")
    values = np.frombuffer(blob[header_end:], dtype="<f8").astype(np.float64)
    return spec, ParamVector(values, spec.spec_hash())
