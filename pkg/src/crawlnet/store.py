"""Plain-text model files.

Example (hidden_size 2)::

    crawlnet-model
    format_version 1
    input_size 1
    hidden_size 2
    output_size 2
    meta denorm_mode affine
    meta generations_used 148
    ...
    w_ih 0.25 -0.5
    w_ho 0.1 0.2 0.3 0.4
    b_h 0.0 1.0
    b_o -0.75 0.5

Each parameter line holds its block row-major; floats are written with
``repr`` so they read back bit-for-bit.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .net import INPUT_SIZE, OUTPUT_SIZE, Network

MAGIC = "crawlnet-model"
FORMAT_VERSION = 1

_META_FIELDS = {
    "targets": "pair",
    "tolerance_deg": float,
    "learning_rate": float,
    "generations_used": int,
    "denorm_mode": str,
    "seed": int,
    "input_value": float,
}


class ModelFormatError(ValueError):
    """Raised for malformed, truncated, or incompatible model files."""


@dataclass
class ModelMetadata:
    targets: tuple[float, float] | None = None
    tolerance_deg: float | None = None
    learning_rate: float | None = None
    generations_used: int | None = None
    denorm_mode: str | None = None
    seed: int | None = None
    input_value: float | None = None


def _fmt(v: float) -> str:
    return repr(float(v))


def dumps(net: Network, meta: ModelMetadata | None = None) -> str:
    if not net.is_finite():
        raise ValueError("refusing to save a network with non-finite weights or biases")
    meta = meta or ModelMetadata()
    lines = [
        MAGIC,
        f"format_version {FORMAT_VERSION}",
        f"input_size {INPUT_SIZE}",
        f"hidden_size {net.hidden_size}",
        f"output_size {OUTPUT_SIZE}",
    ]
    for name in _META_FIELDS:
        value = getattr(meta, name)
        if value is None:
            continue
        if name == "targets":
            text = f"{_fmt(value[0])} {_fmt(value[1])}"
        elif isinstance(value, float):
            text = _fmt(value)
        else:
            text = str(value)
        lines.append(f"meta {name} {text}")
    for name, arr in (("w_ih", net.w_ih), ("w_ho", net.w_ho), ("b_h", net.b_h), ("b_o", net.b_o)):
        lines.append(name + " " + " ".join(_fmt(v) for v in arr.ravel()))
    return "\n".join(lines) + "\n"


def save(net: Network, path, meta: ModelMetadata | None = None) -> None:
    """Write atomically: a temp file in the target directory, then rename."""
    text = dumps(net, meta)
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(prefix=".tmp-", suffix=".model", dir=path.parent or ".")
    except OSError as exc:
        raise OSError(f"cannot write model to {path}: {exc.strerror or exc}") from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException as exc:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        if isinstance(exc, OSError):
            raise OSError(f"cannot write model to {path}: {exc.strerror or exc}") from exc
        raise


def _parse_float(tok: str, lineno: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ModelFormatError(f"line {lineno}: not a number: {tok!r}") from None
    if not math.isfinite(v):
        raise ModelFormatError(f"line {lineno}: non-finite value {tok!r}")
    return v


def loads(text: str) -> tuple[Network, ModelMetadata]:
    lines = text.splitlines()
    it = iter(enumerate(lines, start=1))

    def expect(key):
        try:
            lineno, line = next(it)
        except StopIteration:
            raise ModelFormatError(
                f"line {len(lines) + 1}: file ends early, expected {key!r}"
            ) from None
        parts = line.split()
        if not parts or parts[0] != key:
            raise ModelFormatError(f"line {lineno}: expected {key!r}, got {line!r}")
        return lineno, parts[1:]

    lineno, rest = expect(MAGIC)
    if rest:
        raise ModelFormatError(f"line {lineno}: unexpected text after header")
    sizes = {}
    for key in ("format_version", "input_size", "hidden_size", "output_size"):
        lineno, rest = expect(key)
        if len(rest) != 1 or not rest[0].isdigit():
            raise ModelFormatError(f"line {lineno}: {key} needs one non-negative integer")
        sizes[key] = int(rest[0])
        if key == "format_version" and sizes[key] != FORMAT_VERSION:
            raise ModelFormatError(
                f"line {lineno}: unsupported format_version {sizes[key]} (expected {FORMAT_VERSION})"
            )
    if sizes["input_size"] != INPUT_SIZE or sizes["output_size"] != OUTPUT_SIZE:
        raise ModelFormatError("only 1-input, 2-output networks are supported")
    hidden = sizes["hidden_size"]
    if hidden < 1:
        raise ModelFormatError("hidden_size must be >= 1")

    meta = ModelMetadata()
    blocks = {}
    expected = {"w_ih": hidden * INPUT_SIZE, "w_ho": OUTPUT_SIZE * hidden, "b_h": hidden, "b_o": OUTPUT_SIZE}
    order = list(expected)
    for lineno, line in it:
        parts = line.split()
        if not parts:
            continue
        key = parts[0]
        if key == "meta" and not blocks:
            if len(parts) < 3 or parts[1] not in _META_FIELDS:
                raise ModelFormatError(f"line {lineno}: bad metadata line {line!r}")
            name, vals = parts[1], parts[2:]
            kind = _META_FIELDS[name]
            try:
                if kind == "pair":
                    if len(vals) != 2:
                        raise ValueError("expected two values")
                    value = (_parse_float(vals[0], lineno), _parse_float(vals[1], lineno))
                elif len(vals) != 1:
                    raise ValueError("expected one value")
                else:
                    value = kind(vals[0])
            except ValueError as exc:
                raise ModelFormatError(f"line {lineno}: bad value for {name}: {exc}") from None
            setattr(meta, name, value)
            continue
        want = order[len(blocks)] if len(blocks) < len(order) else None
        if key != want:
            raise ModelFormatError(f"line {lineno}: expected {want!r}, got {line!r}")
        values = [_parse_float(t, lineno) for t in parts[1:]]
        if len(values) != expected[key]:
            raise ModelFormatError(
                f"line {lineno}: {key} has {len(values)} values, expected {expected[key]} "
                f"for hidden_size {hidden}"
            )
        blocks[key] = np.array(values)
    if len(blocks) < len(order):
        raise ModelFormatError(
            f"line {len(lines) + 1}: file ends early, missing {order[len(blocks)]!r}"
        )
    net = Network(blocks["w_ih"], blocks["w_ho"], blocks["b_h"], blocks["b_o"])
    return net, meta


def load(path) -> tuple[Network, ModelMetadata]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read model {path}: {exc.strerror or exc}") from exc
    try:
        return loads(text)
    except ModelFormatError as exc:
        raise ModelFormatError(f"{path}: {exc}") from None
