from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from ratrecon.core import residues_of
from ratrecon.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def pairs_payload(value, moduli, corrupt=None):
    pairs = [
        {"x": str(p.residue), "m": str(p.modulus)}
        for p in residues_of(Fraction(value), moduli)
    ]
    if corrupt is not None:
        i, delta = corrupt
        m = int(pairs[i]["m"])
        pairs[i]["x"] = str((int(pairs[i]["x"]) + delta) % m)
    return pairs


CORRUPTED_13_37 = pairs_payload(Fraction(13, 37), [101, 103, 105, 107, 109], corrupt=(0, 57))


class TestHealth:
    def test_healthz(self, client):
        body = client.get("/healthz").json()
        assert body["status"] == "ok"


class TestFtrrEndpoint:
    def test_value_with_bad_index(self, client):
        r = client.post(
            "/reconstruct/ftrr",
            json={"pairs": CORRUPTED_13_37, "num_bound": "100",
                  "den_bound": "100", "max_bad": 1},
        )
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "value"
        assert body["value"] == "13/37"
        assert body["bad_moduli"] == [1]

    def test_failure(self, client):
        r = client.post(
            "/reconstruct/ftrr",
            json={"pairs": [{"x": "2", "m": "5"}], "num_bound": 1,
                  "den_bound": 1, "max_bad": 0},
        )
        assert r.status_code == 200
        assert r.json()["status"] == "failure"

    def test_precondition_reported_as_failure(self, client):
        r = client.post(
            "/reconstruct/ftrr",
            json={"pairs": [{"x": "2", "m": "5"}], "num_bound": 10,
                  "den_bound": 10, "max_bad": 0},
        )
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "failure"
        assert "more pairs" in body["reason"]

    def test_input_order_reported(self, client):
        # same pairs, reversed request order: index follows the request
        reversed_pairs = list(reversed(CORRUPTED_13_37))
        r = client.post(
            "/reconstruct/ftrr",
            json={"pairs": reversed_pairs, "num_bound": "100",
                  "den_bound": "100", "max_bad": 1},
        )
        assert r.json()["bad_moduli"] == [5]

    def test_non_coprime_rejected(self, client):
        r = client.post(
            "/reconstruct/ftrr",
            json={"pairs": [{"x": 1, "m": 4}, {"x": 1, "m": 6}],
                  "num_bound": 1, "den_bound": 1, "max_bad": 0},
        )
        assert r.status_code == 422

    def test_garbage_integer_rejected(self, client):
        r = client.post(
            "/reconstruct/ftrr",
            json={"pairs": [{"x": "12x", "m": "101"}], "num_bound": 1,
                  "den_bound": 1, "max_bad": 0},
        )
        assert r.status_code == 422

    def test_empty_pairs_rejected(self, client):
        r = client.post(
            "/reconstruct/ftrr",
            json={"pairs": [], "num_bound": 1, "den_bound": 1, "max_bad": 0},
        )
        assert r.status_code == 422

    def test_big_decimal_strings(self, client):
        value = Fraction(2**200 + 1, 3)
        moduli = [1000000007, 1000000009, 1000000021, 1000000033,
                  1000000087, 1000000093, 1000000097, 1000000103,
                  1000000123, 1000000181]
        r = client.post(
            "/reconstruct/ftrr",
            json={"pairs": pairs_payload(value, moduli),
                  "num_bound": str(2**201), "den_bound": "10", "max_bad": 0},
        )
        body = r.json()
        assert body["status"] == "value"
        assert body["value"] == f"{2**200 + 1}/3"


class TestHrrEndpoint:
    def test_value(self, client):
        moduli = [1013, 1019, 1021, 1031, 1033, 1039, 1049, 1051, 1061, 1063]
        r = client.post(
            "/reconstruct/hrr",
            json={"pairs": pairs_payload(Fraction(13, 37), moduli)},
        )
        body = r.json()
        assert body["status"] == "value"
        assert body["value"] == "13/37"
        assert body["m_bad"] == "1"
        assert body["bad_moduli"] == []

    def test_failure_on_two_pairs(self, client):
        r = client.post(
            "/reconstruct/hrr",
            json={"pairs": pairs_payload(Fraction(13, 37), [101, 103])},
        )
        assert r.json()["status"] == "failure"

    def test_zero(self, client):
        r = client.post(
            "/reconstruct/hrr",
            json={"pairs": [{"x": 0, "m": 11}, {"x": 0, "m": 13}]},
        )
        body = r.json()
        assert body["status"] == "zero"
        assert body["value"] == "0"


class TestEtlEndpoint:
    ETL_PAIRS = [
        {"x": "-4", "m": "11"}, {"x": "-4", "m": "13"}, {"x": "-4", "m": "15"},
        {"x": "1", "m": "17"}, {"x": "1", "m": "19"},
    ]

    def test_loose_acceptance(self, client):
        r = client.post(
            "/reconstruct/etl",
            json={"pairs": self.ETL_PAIRS, "refinement_a": False, "b_divisor": 1},
        )
        body = r.json()
        assert body["status"] == "value"
        assert body["value"] == "1"
        assert body["bad_moduli"] == [1, 2, 3]

    def test_default_config_rejects(self, client):
        r = client.post("/reconstruct/etl", json={"pairs": self.ETL_PAIRS})
        assert r.json()["status"] == "failure"


class TestVoteEndpoint:
    def test_value(self, client):
        r = client.post(
            "/reconstruct/vote",
            json={"pairs": CORRUPTED_13_37, "num_bound": 100,
                  "den_bound": 100, "max_bad": 1},
        )
        body = r.json()
        assert body["status"] == "value"
        assert body["value"] == "13/37"
        assert body["bad_moduli"] == [1]

    def test_ambiguous(self, client):
        r = client.post(
            "/reconstruct/vote",
            json={"pairs": [{"x": 1, "m": 11}, {"x": 2, "m": 13}],
                  "num_bound": 2, "den_bound": 2, "max_bad": 1},
        )
        body = r.json()
        assert body["status"] == "ambiguous"
        assert "1" in body["candidates"] and "2" in body["candidates"]


class TestBenchEndpoint:
    def test_small_bench(self, client):
        req = {
            "num_bits": 32, "den_bits": 32, "bad_prob": 0.1,
            "algorithms": ["hrr", "etl"], "trials": 2, "seed": 5,
        }
        r = client.post("/bench", json=req)
        assert r.status_code == 200
        body = r.json()
        assert len(body["rows"]) == 4
        assert {s["algorithm"] for s in body["summaries"]} == {"hrr", "etl"}
        assert body["csv"].splitlines()[0].startswith("algorithm,")
        assert "32/32 bits" in body["table"]

    def test_deterministic_rows(self, client):
        req = {
            "num_bits": 24, "den_bits": 24, "algorithms": ["hrr"],
            "trials": 2, "seed": 3,
        }
        first = client.post("/bench", json=req).json()["rows"]
        second = client.post("/bench", json=req).json()["rows"]
        for a, b in zip(first, second):
            a.pop("seconds"), b.pop("seconds")
        assert first == second

    def test_bad_algorithm_rejected(self, client):
        r = client.post(
            "/bench",
            json={"num_bits": 8, "den_bits": 8, "algorithms": ["nope"]},
        )
        assert r.status_code == 422
