"""Transcript container: tagged, length-prefixed binary records.

Each record is a tag byte, a 4-byte big-endian payload length and the
payload.  A JSON index next to the binary file lists per-epoch digests and
the verdicts observed when the transcript was produced.
"""

import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

TAG_HEADER = 0x01
TAG_EPOCH = 0x10
TAG_REGISTRATION = 0x11
TAG_UPDATE = 0x12
TAG_BUNDLE = 0x13

BIN_NAME = "transcript.bin"
INDEX_NAME = "index.json"


@dataclass
class EpochRecord:
    epoch: int
    registrations: list = field(default_factory=list)  # encoded HelperValues
    updates: list = field(default_factory=list)  # encoded SignedUpdate
    bundle: bytes = b""

    def digest(self):
        h = hashlib.sha256()
        for r in self.registrations + self.updates + [self.bundle]:
            h.update(hashlib.sha256(r).digest())
        return h.hexdigest()


@dataclass
class Transcript:
    header: dict
    epochs: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)  # per epoch, as recorded in-process

    def to_bytes(self):
        out = [_record(TAG_HEADER, json.dumps(self.header, sort_keys=True).encode())]
        for rec in self.epochs:
            out.append(_record(TAG_EPOCH, struct.pack(">Q", rec.epoch)))
            out += [_record(TAG_REGISTRATION, r) for r in rec.registrations]
            out += [_record(TAG_UPDATE, u) for u in rec.updates]
            out.append(_record(TAG_BUNDLE, rec.bundle))
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data):
        records = list(_iter_records(data))
        if not records or records[0][0] != TAG_HEADER:
            raise ValueError("transcript must start with a header record")
        t = cls(json.loads(records[0][1]))
        cur = None
        for tag, payload in records[1:]:
            if tag == TAG_EPOCH:
                cur = EpochRecord(struct.unpack(">Q", payload)[0])
                t.epochs.append(cur)
            elif cur is None:
                raise ValueError("record before the first epoch marker")
            elif tag == TAG_REGISTRATION:
                cur.registrations.append(payload)
            elif tag == TAG_UPDATE:
                cur.updates.append(payload)
            elif tag == TAG_BUNDLE:
                cur.bundle = payload
            else:
                raise ValueError(f"unknown record tag {tag:#x}")
        return t

    def index(self):
        return {
            "header": self.header,
            "epochs": [{"epoch": r.epoch, "digest": r.digest(),
                        "registrations": len(r.registrations), "updates": len(r.updates),
                        "bundle_bytes": len(r.bundle),
                        "verdicts": v}
                       for r, v in zip(self.epochs, self.verdicts or [None] * len(self.epochs))],
        }

    def save(self, out_dir):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / BIN_NAME).write_bytes(self.to_bytes())
        (out / INDEX_NAME).write_text(json.dumps(self.index(), indent=2, sort_keys=True) + "\n")
        return out / BIN_NAME

    @classmethod
    def load(cls, path):
        p = Path(path)
        if p.is_dir():
            p = p / BIN_NAME
        t = cls.from_bytes(p.read_bytes())
        idx = p.parent / INDEX_NAME
        if idx.exists():
            t.verdicts = [e.get("verdicts") for e in json.loads(idx.read_text())["epochs"]]
        return t


def _record(tag, payload):
    return struct.pack(">BI", tag, len(payload)) + payload


def _iter_records(data):
    pos = 0
    while pos < len(data):
        if pos + 5 > len(data):
            raise ValueError("truncated record header")
        tag, length = struct.unpack_from(">BI", data, pos)
        pos += 5
        if pos + length > len(data):
            raise ValueError("truncated record payload")
        yield tag, bytes(data[pos:pos + length])
        pos += length
