import json

import pytest

import stmon_py as st


def test_parse_type_normalizes():
    assert st.parse_type("q!a(int).end") == "+{q!a(int).end}"
    with pytest.raises(Exception):
        st.parse_type("rec X.X")


def test_corpus_names():
    names = st.corpus_names()
    assert len(names) == 10
    assert "book" in names and "vpn" in names


def test_protocol_json_round_trip():
    text = st.protocol_json("dns")
    doc = json.loads(text)
    assert doc["name"] == "dns"
    assert doc["initiator"] in doc["roles"]
    assert st.protocol_json(text) == text  # normalization is idempotent


def test_synthesize_mat():
    csv = st.synthesize_mat("dns", "RootDNS", format="csv")
    lines = csv.strip().splitlines()
    assert lines[0] == "state,sender,receiver,label,sort,next"
    assert len(lines) == 3
    with pytest.raises(Exception):
        st.synthesize_mat("dns", "NoSuchRole")


def test_check_holds_on_corpus():
    report = st.check("book", queue_bound=2)
    assert all(report["monitorable"].values())
    assert report["half_duplex"]["holds"]
    assert report["output_live"]["holds"]
    assert report["bisimilar"]["holds"]


def test_simulate_reference_counts():
    r = st.simulate("book", "udp-faulty")
    assert (r["accepted"], r["rejected"], r["retransmissions"]) == (800, 100, 0)
    r = st.simulate("sip", "tcp-faulty")
    assert r["accepted"] == 200
    assert r["closed"] == 200


def test_simulate_scenario_file():
    scenario = {
        "protocol": {
            "name": "pp",
            "initiator": "p",
            "roles": {"p": "q!hi(int).end", "q": "p&hi(int).end"},
        },
        "transport": "datagram",
        "sessions": 2,
    }
    r = st.simulate_scenario(json.dumps(scenario))
    assert r["accepted"] == 2 and r["completed"] == 2


def test_header_codec():
    h = {
        "msg_size": 7,
        "session_id": 1,
        "label_id": 0,
        "sender_id": 1,
        "receiver_id": 2,
        "ssn": 9,
    }
    raw = st.encode_header(h)
    assert len(raw) == 6
    assert st.decode_header(raw) == h
    assert st.encode_header(dict(h, msg_size=0, session_id=1, sender_id=0,
                                 receiver_id=0, ssn=0))[2] == 0x40
