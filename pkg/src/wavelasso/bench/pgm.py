"""Binary PGM (P5, 8-bit) reading and writing.

Images travel through the harness as float arrays scaled to [0, 1].
"""

import numpy as np


def read_pgm(path):
    """Read an 8-bit binary PGM into a float array in [0, 1]."""
    with open(path, "rb") as fh:
        data = fh.read()
    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    magic, width, height, maxval = fields
    if magic != b"P5":
        raise ValueError(f"not a binary PGM (magic {magic!r}): {path}")
    width, height, maxval = int(width), int(height), int(maxval)
    if not 0 < maxval < 256:
        raise ValueError(f"only 8-bit PGM supported, maxval={maxval}: {path}")
    pos += 1  # single whitespace byte after maxval
    pixels = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    if pixels.size != width * height:
        raise ValueError(f"truncated PGM data: {path}")
    return pixels.reshape(height, width).astype(np.float64) / maxval


def write_pgm(path, img):
    """Write a float image in [0, 1] as an 8-bit binary PGM (values clipped)."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"expected a 2-D image, got shape {img.shape}")
    quantized = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(quantized.tobytes())
