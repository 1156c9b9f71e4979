import json

import pytest
from hypothesis import given, settings

from semlock import model
from semlock.credentials import CredentialStore
from semlock.errors import DuplicateUser, PolicyViolation, UnknownUser
from test_model import _password_strategy


class FakeClock:
    def __init__(self, now=1000.0):
        self.now = now

    def __call__(self):
        return self.now

    def advance(self, seconds):
        self.now += seconds


class TestEnroll:
    def test_roundtrip(self, reference_password):
        store = CredentialStore()
        store.enroll("u", reference_password)
        assert store.verify("u", reference_password).accepted

    def test_policy_minimum(self, grid):
        store = CredentialStore(min_moves=2)
        short = model.parse_canonical("cup>person:R", grid.icons)
        with pytest.raises(PolicyViolation):
            store.enroll("u", short)

    def test_duplicate_user(self, reference_password):
        store = CredentialStore()
        store.enroll("u", reference_password)
        with pytest.raises(DuplicateUser):
            store.enroll("u", reference_password)

    def test_unknown_user(self, reference_password):
        store = CredentialStore()
        with pytest.raises(UnknownUser):
            store.verify("ghost", reference_password)


class TestVerify:
    def test_wrong_password_rejected(self, grid, reference_password):
        store = CredentialStore()
        store.enroll("u", reference_password)
        wrong = model.parse_canonical("cup>person:L|board>cup:R", grid.icons)
        result = store.verify("u", wrong)
        assert result.status == "rejected"
        assert result.remaining == 4

    def test_lockout_after_five_failures(self, grid, reference_password):
        clock = FakeClock()
        store = CredentialStore(clock=clock)
        store.enroll("u", reference_password)
        wrong = model.parse_canonical("cup>person:L|board>cup:R", grid.icons)
        for i in range(4):
            assert store.verify("u", wrong).status == "rejected"
        assert store.verify("u", wrong).status == "locked"
        # correct attempt within the 30 s window still locked
        clock.advance(10)
        assert store.verify("u", reference_password).status == "locked"
        clock.advance(25)
        assert store.verify("u", reference_password).status == "accepted"

    def test_success_resets_counter(self, grid, reference_password):
        store = CredentialStore()
        store.enroll("u", reference_password)
        wrong = model.parse_canonical("cup>person:L|board>cup:R", grid.icons)
        for _ in range(3):
            store.verify("u", wrong)
        assert store.verify("u", reference_password).accepted
        assert store.verify("u", wrong).remaining == 4

    def test_acceptance_depends_only_on_canonical(self, grid, reference_password):
        store = CredentialStore()
        store.enroll("u", reference_password)
        rebuilt = model.parse_canonical(reference_password.canonical, grid.icons)
        assert rebuilt is not reference_password
        assert store.verify("u", rebuilt).accepted


class TestPersistence:
    def test_reload_from_file(self, tmp_path, reference_password):
        path = tmp_path / "creds.jsonl"
        CredentialStore(path).enroll("u", reference_password)
        reopened = CredentialStore(path)
        assert reopened.verify("u", reference_password).accepted
        assert reopened.users() == ["u"]

    def test_no_plaintext_in_store(self, tmp_path, reference_password):
        path = tmp_path / "creds.jsonl"
        CredentialStore(path).enroll("u", reference_password)
        raw = path.read_text()
        canonical = reference_password.canonical
        assert canonical not in raw
        for token in reference_password.tokens:
            assert token not in raw
        record = json.loads(raw.splitlines()[0])
        assert set(record) == {"user", "salt_hex", "digest_hex", "min_moves", "created_at"}

    def test_salts_unique(self, tmp_path, grid, reference_password):
        path = tmp_path / "creds.jsonl"
        store = CredentialStore(path)
        store.enroll("u1", reference_password)
        store.enroll("u2", reference_password)
        lines = [json.loads(l) for l in path.read_text().splitlines()]
        assert lines[0]["salt_hex"] != lines[1]["salt_hex"]
        assert lines[0]["digest_hex"] != lines[1]["digest_hex"]


@settings(max_examples=40)
@given(_password_strategy())
def test_enroll_verify_property(password):
    store = CredentialStore(min_moves=1)
    store.enroll("u", password)
    assert store.verify("u", password).accepted
