"""JSON instance files.

An instance file carries the generation parameters, a *public* section with
the semi-prime(s) and an optional *secret* section with the escrow key, the
factors and the hidden coefficients. Integers are written as canonical
decimal strings (or ``0x``-prefixed lowercase hex with ``fmt="hex"``), so
files stay exact and diff cleanly.

Example::

    {
      "schema_version": "1",
      "kind": "ssb",
      "params": {"alpha": 128, "c": 5, "k_max": 30},
      "public": {"N": "5457768..."},
      "secret": {"T": "6451117...", "p": "...", "q": "...", "k": "9"}
    }
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EscrowKeyError
from .ssb import EscrowKey, SsbInstance, SsbParams
from .tsb import TsbInstance, TsbParams

SCHEMA_VERSION = "1"
KINDS = ("ssb", "tsb")

_PUBLIC_FIELDS = {"ssb": ("N",), "tsb": ("N1", "N2")}
_SECRET_FIELDS = {
    "ssb": ("T", "p", "q", "k"),
    "tsb": ("T", "p1", "q1", "p2", "q2", "h", "k1", "k2"),
}

_DEC = re.compile(r"0|[1-9][0-9]*")
_HEX = re.compile(r"0x(?:0|[1-9a-f][0-9a-f]*)")


class InstanceFormatError(EscrowKeyError, ValueError):
    pass


def encode_int(n: int, fmt: str = "dec") -> str:
    if n < 0:
        raise InstanceFormatError("only non-negative integers are serialized")
    if fmt == "dec":
        return str(n)
    if fmt == "hex":
        return hex(n)
    raise InstanceFormatError(f"unknown integer format {fmt!r}")


def decode_int(text) -> int:
    """Parse a canonical decimal or ``0x`` hex string; anything else is rejected."""
    if not isinstance(text, str):
        raise InstanceFormatError(f"expected an integer string, got {text!r}")
    if _DEC.fullmatch(text):
        return int(text)
    if _HEX.fullmatch(text):
        return int(text, 16)
    raise InstanceFormatError(f"not a canonical integer string: {text!r}")


@dataclass
class InstanceFile:
    kind: str
    params: SsbParams | TsbParams
    public: dict[str, int]
    secret: dict[str, int] | None = None
    schema_version: str = field(default=SCHEMA_VERSION)

    @classmethod
    def from_ssb(cls, key: EscrowKey, inst: SsbInstance) -> "InstanceFile":
        secret = {"T": key.T, "p": inst.p, "q": inst.q, "k": inst.k}
        return cls("ssb", key.params, {"N": inst.N}, secret)

    @classmethod
    def from_tsb(cls, key: EscrowKey, inst: TsbInstance) -> "InstanceFile":
        secret = {"T": key.T}
        secret.update(
            (name, getattr(inst, name)) for name in ("p1", "q1", "p2", "q2", "h", "k1", "k2")
        )
        return cls("tsb", key.params, {"N1": inst.N1, "N2": inst.N2}, secret)

    def public_only(self) -> "InstanceFile":
        return InstanceFile(self.kind, self.params, dict(self.public), None, self.schema_version)

    def escrow_key(self) -> EscrowKey:
        return EscrowKey(self._secret()["T"], self.params)

    def instance(self) -> SsbInstance | TsbInstance:
        s = self._secret()
        if self.kind == "ssb":
            return SsbInstance(self.public["N"], s["p"], s["q"], s["k"])
        return TsbInstance(
            self.public["N1"], self.public["N2"],
            s["p1"], s["q1"], s["p2"], s["q2"], s["h"], s["k1"], s["k2"],
        )  # fmt: skip

    def _secret(self) -> dict[str, int]:
        if self.secret is None:
            raise InstanceFormatError("instance file has no secret section")
        return self.secret

    def to_dict(self, fmt: str = "dec") -> dict:
        params = {"alpha": self.params.alpha, "c": self.params.c, "k_max": self.params.k_max}
        if self.kind == "tsb":
            params["b_threshold"] = encode_int(self.params.b_threshold, fmt)
        doc = {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "params": params,
            "public": {k: encode_int(v, fmt) for k, v in self.public.items()},
        }
        if self.secret is not None:
            doc["secret"] = {k: encode_int(v, fmt) for k, v in self.secret.items()}
        return doc

    @classmethod
    def from_dict(cls, doc) -> "InstanceFile":
        if not isinstance(doc, dict):
            raise InstanceFormatError("instance document must be a JSON object")
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise InstanceFormatError(f"unsupported schema_version {version!r}")
        kind = doc.get("kind")
        if kind not in KINDS:
            raise InstanceFormatError(f"kind must be one of {KINDS}, got {kind!r}")
        try:
            raw = doc["params"]
            alpha, c, k_max = (int(raw[name]) for name in ("alpha", "c", "k_max"))
            if kind == "ssb":
                params = SsbParams(alpha, c, k_max)
            else:
                params = TsbParams(alpha, c, k_max, decode_int(raw["b_threshold"]))
            public = {name: decode_int(doc["public"][name]) for name in _PUBLIC_FIELDS[kind]}
        except (KeyError, TypeError) as exc:
            raise InstanceFormatError(f"malformed instance document: {exc}") from None
        except ValueError as exc:
            raise InstanceFormatError(str(exc)) from None
        secret = None
        if doc.get("secret") is not None:
            try:
                secret = {name: decode_int(doc["secret"][name]) for name in _SECRET_FIELDS[kind]}
            except (KeyError, TypeError) as exc:
                raise InstanceFormatError(f"incomplete secret section: {exc}") from None
        return cls(kind, params, public, secret, version)

    def dumps(self, fmt: str = "dec") -> str:
        return json.dumps(self.to_dict(fmt), indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "InstanceFile":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)

    def write(self, path, fmt: str = "dec") -> None:
        Path(path).write_text(self.dumps(fmt))

    @classmethod
    def read(cls, path) -> "InstanceFile":
        return cls.loads(Path(path).read_text())
