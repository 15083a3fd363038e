"""The ``f2nset v1`` text format for subsets of F_2^n."""

from __future__ import annotations

import base64
import binascii
import hashlib
import os
import re
import tempfile

import numpy as np

from .errors import PreconditionError
from .sets import SetF2

FORMATS = ("hex", "bitmap")
_HEADER = re.compile(r"f2nset v1 n=(\d+) count=(\d+) format=(hex|bitmap)")


class SetFileError(ValueError):
    """Malformed set file."""


def serialize(A: SetF2, fmt: str = "hex", comment: str | None = None) -> str:
    if fmt not in FORMATS:
        raise PreconditionError(f"unknown set file format {fmt!r}")
    lines = [f"f2nset v1 n={A.n} count={len(A)} format={fmt}"]
    if comment:
        lines.append("# " + comment)
    if fmt == "hex":
        lines += [format(int(x), "x") for x in A.elements()]
    else:
        lines.append(base64.b64encode(np.packbits(A.bitmap, bitorder="little").tobytes()).decode())
    return "\n".join(lines) + "\n"


def _split(text: str) -> tuple[re.Match, str | None, list[str]]:
    lines = text.splitlines()
    if not lines:
        raise SetFileError("empty set file")
    m = _HEADER.fullmatch(lines[0].strip())
    if m is None:
        raise SetFileError(f"bad header line {lines[0]!r}")
    comment = None
    body = lines[1:]
    if body and body[0].startswith("#"):
        comment, body = body[0][1:].strip(), body[1:]
    return m, comment, [b.strip() for b in body if b.strip()]


def body_digest(text: str) -> str:
    """sha256 of the body lines, header and comment excluded."""
    _, _, body = _split(text)
    return hashlib.sha256("\n".join(body).encode()).hexdigest()


def parse(text: str) -> tuple[SetF2, str | None]:
    """Set and spec comment of a set file."""
    m, comment, body = _split(text)
    n, count, fmt = int(m[1]), int(m[2]), m[3]
    if n > 30:
        raise SetFileError(f"n={n} is too large")
    N = 1 << n
    if fmt == "hex":
        try:
            xs = [int(b, 16) for b in body]
        except ValueError as exc:
            raise SetFileError(f"bad hex element: {exc}") from None
        if any(x < 0 or x >= N for x in xs):
            raise SetFileError(f"element outside F_2^{n}")
        if len(set(xs)) != len(xs):
            raise SetFileError("repeated element")
        A = SetF2.from_elements(n, xs)
    else:
        try:
            raw = base64.b64decode("".join(body), validate=True)
        except binascii.Error as exc:
            raise SetFileError(f"bad base64 bitmap: {exc}") from None
        if len(raw) != max(1, N // 8):
            raise SetFileError(f"bitmap has {len(raw)} bytes, expected {max(1, N // 8)}")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        if bits[N:].any():
            raise SetFileError("padding bits set")
        A = SetF2(n, bits[:N].astype(bool))
    if len(A) != count:
        raise SetFileError(f"header count {count} does not match {len(A)} elements")
    return A, comment


def read(path: str) -> tuple[SetF2, str | None, str]:
    """Set, comment and body digest of the file at ``path``."""
    with open(path, encoding="ascii") as fh:
        text = fh.read()
    A, comment = parse(text)
    return A, comment, body_digest(text)


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
