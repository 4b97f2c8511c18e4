"""Wire-protocol conformance: response schema on randomized well-formed
requests, 400 on malformed ones, 422 on unsupported metric/language."""
import random

import jsonschema
import pytest

RESPONSE_SCHEMA = {
    "type": "object",
    "required": ["scores", "metric_id"],
    "properties": {
        "scores": {"type": "array", "items": {"type": "number"}},
        "metric_id": {"type": "string"},
    },
}

WORD_POOL = [
    "the", "answer", "is", "supported", "document", "shows", "evidence",
    "walking", "lowers", "heart", "rate", "study", "found", "claim",
    "unknown", "false", "true", "explanation",
]

# metrics cheap enough to hammer with randomized batches
EN_METRICS = ["bleurt", "bartscore", "bartscore_precision", "bartscore_f",
              "bertscore", "moverscore", "tigerscore"]


def random_text(rng):
    return " ".join(rng.choices(WORD_POOL, k=rng.randint(3, 8)))


def random_request(rng):
    metric_id = rng.choice(EN_METRICS)
    n = rng.randint(1, 4)
    body = {
        "metric_id": metric_id,
        "candidates": [random_text(rng) for _ in range(n)],
        "references": [random_text(rng) for _ in range(n)],
        "language": "en",
    }
    if metric_id == "tigerscore":
        body["sources"] = [random_text(rng) for _ in range(n)]
    return body


class TestWellFormedRequests:
    def test_fifty_randomized_requests_validate_against_schema(self, client):
        rng = random.Random(90125)
        for i in range(50):
            body = random_request(rng)
            response = client.post("/score", json=body)
            assert response.status_code == 200, f"request {i}: {response.text}"
            payload = response.json()
            jsonschema.validate(payload, RESPONSE_SCHEMA)
            assert payload["metric_id"] == body["metric_id"]
            assert len(payload["scores"]) == len(body["candidates"])


class TestMalformedRequests:
    @pytest.mark.parametrize(
        "body",
        [
            {},  # everything missing
            {"metric_id": "bertscore"},  # candidates missing
            {"metric_id": "bertscore", "candidates": []},  # empty batch
            {"metric_id": "bertscore", "candidates": "not-a-list", "references": ["r"]},
            {"metric_id": "bertscore", "candidates": ["a"], "references": [1.5]},
            {"metric_id": "bertscore", "candidates": ["a"], "references": ["r"], "extra": 1},
        ],
        ids=["empty", "no-candidates", "empty-candidates", "wrong-type", "bad-item", "extra-field"],
    )
    def test_schema_violations_return_400(self, client, body):
        response = client.post("/score", json=body)
        assert response.status_code == 400, response.text

    def test_reference_length_mismatch_returns_400(self, client):
        body = {"metric_id": "bertscore", "candidates": ["a", "b"], "references": ["r"]}
        assert client.post("/score", json=body).status_code == 400

    def test_missing_references_for_reference_metric_returns_400(self, client):
        body = {"metric_id": "bertscore", "candidates": ["a"]}
        assert client.post("/score", json=body).status_code == 400

    def test_missing_sources_for_tigerscore_returns_400(self, client):
        body = {"metric_id": "tigerscore", "candidates": ["a"], "references": ["r"]}
        assert client.post("/score", json=body).status_code == 400

    def test_invalid_json_body_returns_400(self, client):
        response = client.post(
            "/score", content=b"{not json", headers={"Content-Type": "application/json"}
        )
        assert response.status_code == 400


class TestUnsupportedRequests:
    def test_unknown_metric_returns_422(self, client):
        body = {"metric_id": "rougelish", "candidates": ["a"], "references": ["r"]}
        assert client.post("/score", json=body).status_code == 422

    def test_unknown_language_returns_422(self, client):
        body = {
            "metric_id": "bertscore",
            "candidates": ["a"],
            "references": ["r"],
            "language": "fr",
        }
        assert client.post("/score", json=body).status_code == 422

    def test_german_only_metric_refuses_english(self, client):
        body = {
            "metric_id": "bartscore_de",
            "candidates": ["a"],
            "references": ["r"],
            "language": "en",
        }
        assert client.post("/score", json=body).status_code == 422


class TestHealth:
    def test_health_reports_loaded_metrics(self, client):
        before = client.get("/health").json()
        assert before["status"] == "ok"
        client.post(
            "/score",
            json={"metric_id": "bertscore", "candidates": ["a"], "references": ["r"]},
        )
        after = client.get("/health").json()
        assert "bertscore" in after["loaded_metrics"]
