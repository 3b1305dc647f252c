import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from escrowkey.instancefile import InstanceFile, InstanceFormatError, decode_int, encode_int
from escrowkey.ssb import SsbParams, generate_escrow_key, ssb_generate
from escrowkey.tsb import TsbParams, tsb_generate


@given(st.integers(min_value=0, max_value=2**600))
def test_int_codec_round_trip(n):
    assert decode_int(encode_int(n)) == n
    assert decode_int(encode_int(n, "hex")) == n
    assert encode_int(n) == str(n)


@pytest.mark.parametrize("text", ["007", "-5", "+5", "1e3", " 5", "5 ", "", "0X1f", "0x1F", "0x01", "12.0"])
def test_decode_rejects_non_canonical(text):
    with pytest.raises(InstanceFormatError):
        decode_int(text)


def test_decode_rejects_non_strings():
    with pytest.raises(InstanceFormatError):
        decode_int(5)
    with pytest.raises(InstanceFormatError):
        encode_int(-1)
    with pytest.raises(InstanceFormatError):
        encode_int(1, "oct")


def test_ssb_reference_file(ssb_reference):
    key, inst = ssb_reference
    doc = InstanceFile.from_ssb(key, inst)
    raw = json.loads(doc.dumps())
    assert raw["schema_version"] == "1"
    assert raw["kind"] == "ssb"
    assert raw["params"] == {"alpha": 128, "c": 5, "k_max": 30}
    assert raw["public"]["N"] == str(inst.N)
    assert raw["secret"]["k"] == "9"
    assert InstanceFile.loads(doc.dumps()) == doc


@pytest.mark.parametrize("fmt", ["dec", "hex"])
def test_round_trip_generated(tmp_path, fmt):
    rng = random.Random(31)
    key = generate_escrow_key(TsbParams(48, 5, 40), rng)
    doc = InstanceFile.from_tsb(key, tsb_generate(key, rng))
    path = tmp_path / "inst.json"
    doc.write(path, fmt)
    back = InstanceFile.read(path)
    assert back == doc
    assert back.escrow_key() == key
    assert back.params.b_threshold == 2**38


def test_public_file_leaks_nothing(tmp_path):
    rng = random.Random(12)
    key = generate_escrow_key(SsbParams(64, 5, 32), rng)
    inst = ssb_generate(key, rng)
    doc = InstanceFile.from_ssb(key, inst)
    for fmt in ("dec", "hex"):
        text = doc.public_only().dumps(fmt)
        for secret in (key.T, inst.p, inst.q):
            assert str(secret) not in text and hex(secret) not in text
        assert "secret" not in json.loads(text)
    with pytest.raises(InstanceFormatError):
        doc.public_only().escrow_key()


def test_tsb_public_file_leaks_nothing(tsb_reference):
    key, inst = tsb_reference
    text = InstanceFile.from_tsb(key, inst).public_only().dumps()
    for secret in (key.T, inst.p1, inst.q1, inst.p2, inst.q2):
        assert str(secret) not in text


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(kind="rsa"),
        lambda d: d.update(schema_version="2"),
        lambda d: d["public"].update(N="0012"),
        lambda d: d["public"].pop("N"),
        lambda d: d["params"].pop("alpha"),
        lambda d: d["secret"].pop("q"),
        lambda d: d["public"].update(N=12),
    ],
)
def test_malformed_documents(ssb_reference, mutate):
    key, inst = ssb_reference
    doc = json.loads(InstanceFile.from_ssb(key, inst).dumps())
    mutate(doc)
    with pytest.raises(InstanceFormatError):
        InstanceFile.loads(json.dumps(doc))


def test_not_json():
    with pytest.raises(InstanceFormatError):
        InstanceFile.loads("{not json")
