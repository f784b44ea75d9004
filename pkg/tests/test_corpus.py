import json
from pathlib import Path

import pytest

from weakfan import corpus as C
from weakfan.serialize import decode_session

SESSIONS = Path(__file__).resolve().parents[1] / "sessions"


@pytest.mark.parametrize("name", sorted(C.SESSIONS))
def test_session_file_is_current(name):
    text = (SESSIONS / f"{name}.json").read_text(encoding="utf-8")
    assert text == json.dumps(C.SESSIONS[name](), sort_keys=True, indent=2) + "\n"


@pytest.mark.parametrize("name", sorted(C.SESSIONS))
def test_session_decodes(name):
    s = decode_session(json.loads((SESSIONS / f"{name}.json").read_text(encoding="utf-8")))
    assert s.cones and s.flags


def test_no_stray_files():
    assert {p.stem for p in SESSIONS.glob("*.json")} == set(C.SESSIONS)
