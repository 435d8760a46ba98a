"""Line-oriented generator files: the ingestion path for external subgroups.

Wire format (UTF-8, LF newlines, decimal integers, '#' comments):

    orthofact-generators 1
    p 2
    f 1
    dim 8
    count 2
    frob 0 0              # optional; per-generator Frobenius exponents
    order 181440          # optional declared post-check
    form plus m=4         # optional: generators must preserve the standard form
    matrix
    0 1 0 0 0 0 0 0
    ...                   # dim rows of dim entries, field indices in [0, p^f)
    matrix
    ...
    checksum 3af512bc     # crc32 (hex) of the canonical payload above

The checksum covers every non-comment line from the magic line through the
last matrix row, stripped and joined by single LF.  Entries must be valid
field indices and every matrix must be invertible; declared post-checks run
at ingest time.
"""

from __future__ import annotations

import zlib

from . import linalg
from .ff import make_field
from .grpcore import GroupElt, GroupHandle
from .quadspace import QuadSpace


class GeneratorFileError(ValueError):
    pass


def _canonical_lines(lines):
    out = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(" ".join(line.split()))
    return out


def _checksum(payload_lines):
    data = "\n".join(payload_lines).encode("utf-8")
    return format(zlib.crc32(data) & 0xFFFFFFFF, "08x")


def write_generator_file(path, handle: GroupHandle, declared_order=None,
                         form=None, comment=None):
    """Export a handle's generators; form = (kind, m) adds the form check."""
    lines = []
    lines.append("orthofact-generators 1")
    lines.append(f"p {handle.field.p}")
    lines.append(f"f {handle.field.f}")
    lines.append(f"dim {handle.dim}")
    lines.append(f"count {len(handle.gens)}")
    if any(g.frob for g in handle.gens):
        lines.append("frob " + " ".join(str(g.frob) for g in handle.gens))
    if declared_order is not None:
        lines.append(f"order {declared_order}")
    if form is not None:
        kind, m = form
        lines.append(f"form {kind} m={m}")
    for g in handle.gens:
        lines.append("matrix")
        for row in g.matrix:
            lines.append(" ".join(str(c) for c in row))
    digest = _checksum(lines)
    text = []
    if comment:
        for c in comment.splitlines():
            text.append(f"# {c}")
    text.extend(lines)
    text.append(f"checksum {digest}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(text) + "\n")


def parse_generator_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    lines = _canonical_lines(raw)
    if not lines or not lines[0].startswith("orthofact-generators"):
        raise GeneratorFileError(f"{path}: missing magic line")
    checksum_line = None
    payload = []
    for line in lines:
        if line.startswith("checksum "):
            checksum_line = line.split()[1]
        else:
            payload.append(line)
    if checksum_line is None:
        raise GeneratorFileError(f"{path}: missing checksum")
    if _checksum(payload) != checksum_line:
        raise GeneratorFileError(f"{path}: checksum mismatch")
    header = {}
    matrices = []
    frobs = []
    i = 1
    while i < len(payload):
        line = payload[i]
        if line == "matrix":
            break
        key, _, rest = line.partition(" ")
        header[key] = rest
        i += 1
    for key in ("p", "f", "dim", "count"):
        if key not in header:
            raise GeneratorFileError(f"{path}: missing header field {key}")
    p = int(header["p"])
    f = int(header["f"])
    dim = int(header["dim"])
    count = int(header["count"])
    if "frob" in header:
        frobs = [int(x) for x in header["frob"].split()]
        if len(frobs) != count:
            raise GeneratorFileError(f"{path}: frob count mismatch")
    else:
        frobs = [0] * count
    q = p ** f
    while i < len(payload):
        if payload[i] != "matrix":
            raise GeneratorFileError(f"{path}: expected 'matrix', got "
                                     f"{payload[i]!r}")
        i += 1
        rows = []
        for _ in range(dim):
            entries = [int(x) for x in payload[i].split()]
            if len(entries) != dim:
                raise GeneratorFileError(f"{path}: row width != dim")
            if any(not 0 <= e < q for e in entries):
                raise GeneratorFileError(f"{path}: entry out of field range")
            rows.append(tuple(entries))
            i += 1
        matrices.append(tuple(rows))
    if len(matrices) != count:
        raise GeneratorFileError(f"{path}: expected {count} matrices, found "
                                 f"{len(matrices)}")
    return {
        "p": p, "f": f, "dim": dim, "count": count, "frobs": frobs,
        "matrices": matrices,
        "order": int(header["order"]) if "order" in header else None,
        "form": header.get("form"),
    }


def ingest(path, projective=False, seed=0, check_order=True) -> GroupHandle:
    """Parse, validate, and build a handle; declared post-checks must pass."""
    data = parse_generator_file(path)
    field = make_field(data["p"], data["f"])
    gens = []
    for mat, fr in zip(data["matrices"], data["frobs"]):
        try:
            linalg.mat_inv(field, mat)
        except ValueError:
            raise GeneratorFileError(f"{path}: singular matrix")
        gens.append(GroupElt(field, mat, frob=fr))
    if data["form"]:
        kind, mdecl = data["form"].split()
        m = int(mdecl.split("=")[1])
        if kind != "plus" or 2 * m != data["dim"]:
            raise GeneratorFileError(f"{path}: unsupported form declaration")
        space = QuadSpace.plus_type(field, m)
        for g in gens:
            if not space.is_isometry(g.matrix):
                raise GeneratorFileError(
                    f"{path}: generator violates the declared form")
    if check_order and data["order"] is not None:
        probe = GroupHandle(field, data["dim"], gens, name=path, seed=seed)
        got = probe.order()
        if got != data["order"]:
            raise GeneratorFileError(
                f"{path}: declared order {data['order']}, computed {got}")
        if not projective:
            return probe.freeze()
    h = GroupHandle(field, data["dim"], gens, name=path, seed=seed,
                    projective=projective)
    return h.freeze()
