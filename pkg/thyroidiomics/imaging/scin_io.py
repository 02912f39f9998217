"""
SCIN image format

A SCIN image is a JSON header ``<case>.json``::

    {"width": 128, "height": 128, "spacing_mm": [1.0, 1.0],
     "dtype": "u16", "data": "<case>.raw"}

plus a raw little-endian, row-major payload. Images use ``u16`` or ``f32``;
masks use ``u8`` restricted to {0, 1}.
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from ..errors import InvalidArgumentError, MissingFileError, SchemaError
from ..utils.file_utils import read_json_file, write_bytes_atomic, write_json_file
from .grid import BinaryMask, ImageGrid

DTYPES: Dict[str, np.dtype] = {
    "u8": np.dtype("<u1"),
    "u16": np.dtype("<u2"),
    "f32": np.dtype("<f4"),
}


def _parse_header(header: Any, header_path: Path) -> Dict[str, Any]:
    if not isinstance(header, dict):
        raise SchemaError(f"{header_path}: header must be a JSON object")

    missing = [k for k in ("width", "height", "spacing_mm", "dtype", "data") if k not in header]
    if missing:
        raise SchemaError(f"{header_path}: missing header fields {', '.join(missing)}")

    width, height = header["width"], header["height"]
    if not (isinstance(width, int) and isinstance(height, int) and width > 0 and height > 0):
        raise SchemaError(f"{header_path}: width/height must be positive integers")

    spacing = header["spacing_mm"]
    if not (isinstance(spacing, list) and len(spacing) == 2):
        raise SchemaError(f"{header_path}: spacing_mm must be a two-element list")

    if header["dtype"] not in DTYPES:
        raise SchemaError(f"{header_path}: unsupported dtype '{header['dtype']}'")

    return header


def read_scin(header_path: Union[str, Path]) -> Union[ImageGrid, BinaryMask]:
    """
    Read a SCIN image or mask

    Args:
        header_path: Path to the JSON header

    Returns:
        ``BinaryMask`` for ``u8`` payloads, ``ImageGrid`` otherwise

    Raises:
        MissingFileError: If header or payload is absent
        SchemaError: If the header is malformed, the payload length is wrong,
            or a mask holds values other than 0 and 1
    """
    header_path = Path(header_path)
    header = _parse_header(read_json_file(header_path), header_path)

    data_path = header_path.parent / header["data"]
    if not data_path.exists():
        raise MissingFileError(f"payload {data_path} referenced by {header_path}")

    dtype = DTYPES[header["dtype"]]
    width, height = header["width"], header["height"]
    payload = data_path.read_bytes()
    expected = width * height * dtype.itemsize
    if len(payload) != expected:
        raise SchemaError(
            f"{data_path}: payload has {len(payload)} bytes, expected {expected}"
        )

    array = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    spacing = (float(header["spacing_mm"][0]), float(header["spacing_mm"][1]))

    if header["dtype"] == "u8":
        if not np.isin(array, (0, 1)).all():
            raise SchemaError(f"{data_path}: mask values must be 0 or 1")
        return BinaryMask(array.copy(), spacing)
    return ImageGrid(array.astype(np.float64), spacing)


def write_scin(
    grid: Union[ImageGrid, BinaryMask],
    header_path: Union[str, Path],
    dtype: Optional[str] = None,
) -> Path:
    """
    Write a grid as SCIN header + payload

    Args:
        grid: Image or mask
        header_path: Destination ``.json`` path; the payload goes next to it as ``.raw``
        dtype: ``u16`` or ``f32`` for images (default ``u16`` when every value is an
            integer in range, else ``f32``); masks are always ``u8``

    Returns:
        Path of the written header
    """
    header_path = Path(header_path)
    data_path = header_path.with_suffix(".raw")

    if isinstance(grid, BinaryMask):
        if dtype not in (None, "u8"):
            raise InvalidArgumentError("masks are stored as u8")
        dtype = "u8"
        array = grid.values
    else:
        pixels = grid.pixels
        if dtype is None:
            integral = np.all(pixels == np.round(pixels))
            in_range = pixels.min() >= 0 and pixels.max() <= np.iinfo(np.uint16).max
            dtype = "u16" if integral and in_range else "f32"
        if dtype not in ("u16", "f32"):
            raise InvalidArgumentError(f"images are stored as u16 or f32, not '{dtype}'")
        if dtype == "u16":
            array = np.clip(np.round(pixels), 0, np.iinfo(np.uint16).max)
        else:
            array = pixels

    payload = np.ascontiguousarray(array, dtype=DTYPES[dtype]).tobytes()
    write_bytes_atomic(data_path, payload)
    write_json_file(
        header_path,
        {
            "width": grid.width,
            "height": grid.height,
            "spacing_mm": [float(grid.spacing[0]), float(grid.spacing[1])],
            "dtype": dtype,
            "data": data_path.name,
        },
    )
    return header_path
