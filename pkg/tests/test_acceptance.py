"""Acceptance suite: one test per release criterion, all hermetic.

Every test prints an ``ACCEPTANCE <name>: PASS`` line when its criterion
holds (run pytest with -s or -rA to see them). Tolerances are pinned in
the assertions, not configurable.
"""
import math
import random
import time

import pytest

from crossrefine.analysis.agreement import krippendorff_alpha
from crossrefine.analysis.langid import detect_language, language_distribution, load_labeled_corpus
from crossrefine.analysis.similarity import similarity_report
from crossrefine.analysis.text import FilterCriteria, passes_filters
from crossrefine.cli import run_experiment
from crossrefine.corpus import TaskInstance, render_instance_input
from crossrefine.metrics import (
    HashedTokenEmbedder,
    LengthMismatch,
    ProtocolError,
    ScoreRequest,
    score_batch,
)
from crossrefine.refinery import SelfRefineConfig
from crossrefine.reporting import language_table, write_report_bundle
from filter_cases import boundary_cases
from fixture_lib import (
    GOLDEN_KINDS,
    GOLDEN_MODES,
    golden_config,
    golden_trace_path,
    qa_instance,
    run_scripted,
)
from oracles import alpha_bruteforce
from scorer_stub import StubScorer
from test_agreement import random_matrix

EMBEDDER = HashedTokenEmbedder()


def ok(name: str) -> None:
    print(f"ACCEPTANCE {name}: PASS")


class TestGoldenTraceReplay:
    def test_all_kinds_and_modes_replay_byte_for_byte(self, tmp_path):
        started = time.monotonic()
        for kind in GOLDEN_KINDS:
            for mode in GOLDEN_MODES:
                out = tmp_path / kind / mode
                run_experiment(golden_config(kind, mode, out))
                produced = (out / "traces.jsonl").read_bytes()
                golden = golden_trace_path(kind, mode).read_bytes()
                assert produced == golden, f"{kind}/{mode} diverged from golden"
        elapsed = time.monotonic() - started
        assert elapsed < 5.0, f"golden replay took {elapsed:.2f}s"
        ok(f"golden-trace replay ({len(GOLDEN_KINDS) * len(GOLDEN_MODES)} runs, {elapsed:.2f}s)")


def _varied_instance(i: int) -> TaskInstance:
    kind = GOLDEN_KINDS[i % 3]
    if kind == "commonsense_qa":
        return TaskInstance(
            id=f"dep-qa-{i}", task_kind=kind,
            question=f"Question number {i} about everyday objects?",
            options=(f"choice-{i}-a", f"choice-{i}-b"),
            gold_label=f"choice-{i}-a", gold_explanation=f"gold explanation {i}",
        )
    if kind == "nli":
        return TaskInstance(
            id=f"dep-nli-{i}", task_kind=kind,
            premise=f"Premise sentence {i} describes a scene.",
            hypothesis=f"Hypothesis sentence {i} generalizes it.",
            gold_label="neutral", gold_explanation=f"gold explanation {i}",
        )
    return TaskInstance(
        id=f"dep-fc-{i}", task_kind=kind,
        claim=f"Claim number {i} about a health effect.",
        document_sentences=(f"Relevant sentence {i}.", f"Irrelevant aside {i}."),
        relevance_mask=(True, False),
        gold_label="unknown", gold_explanation=f"gold explanation {i}",
    )


class TestStageDependencies:
    def test_twenty_scripted_runs_carry_their_conditioning_artifacts(self):
        cross_modes = ("cross_refine", "ablate_feedback_only", "ablate_suggestion_only")
        violations = []
        for i in range(20):
            mode = cross_modes[i % 3]
            instance = _varied_instance(i)
            initial = f"INITIAL-ART-{i} first attempt text"
            feedback = f"FEEDBACK-ART-{i} names the flaw"
            suggestion = f"SUGGESTION-ART-{i} proposes a fix"
            refined = f"REFINED-ART-{i} final text"
            generator = [initial, refined]
            critic = [f"Yes, verdict for run {i}.", feedback]
            if mode != "ablate_feedback_only":
                critic.append(suggestion)
            trace, replayed = run_scripted(instance, mode, generator, critic)
            rendered = render_instance_input(instance)

            def expect(condition, label):
                if not condition:
                    violations.append(f"run {i} ({mode}): {label}")

            expect(rendered in trace.prompts["generate"], "input missing in generate prompt")
            expect(rendered in trace.prompts["assess"], "input missing in assess prompt")
            expect(initial in trace.prompts["assess"], "initial missing in assess prompt")
            expect(rendered in trace.prompts["feedback"], "input missing in feedback prompt")
            expect(initial in trace.prompts["feedback"], "initial missing in feedback prompt")
            if mode != "ablate_feedback_only":
                for artifact, label in ((rendered, "input"), (initial, "initial"), (feedback, "feedback")):
                    expect(artifact in trace.prompts["suggest"], f"{label} missing in suggest prompt")
            refine_prompt = trace.prompts["refine"]
            expect(rendered in refine_prompt, "input missing in refine prompt")
            expect(initial in refine_prompt, "initial missing in refine prompt")
            if mode == "cross_refine":
                expect(feedback in refine_prompt, "feedback missing in refine prompt")
                expect(suggestion in refine_prompt, "suggestion missing in refine prompt")
            elif mode == "ablate_feedback_only":
                expect(feedback in refine_prompt, "feedback missing in feedback-only refine prompt")
                expect(
                    f"SUGGESTION-ART-{i}" not in refine_prompt,
                    "suggestion leaked into feedback-only refine prompt",
                )
            else:
                expect(suggestion in refine_prompt, "suggestion missing in suggestion-only refine prompt")
                expect(
                    f"FEEDBACK-ART-{i}" not in refine_prompt,
                    "feedback leaked into suggestion-only refine prompt",
                )
        assert not violations, "\n".join(violations)
        ok("stage-dependency suite (20 runs, zero violations)")


class TestShortCircuit:
    def test_negative_verdicts_short_circuit_every_time(self):
        checked = 0
        for i in range(12):
            instance = _varied_instance(i)
            initial = f"INITIAL-{i} stands as written"
            trace, replayed = run_scripted(
                instance, "cross_refine", [initial], ["No improvement needed."]
            )
            for result in (trace, replayed):
                assert result.final == result.initial == initial
                assert result.feedback is None
                assert result.suggestion is None
                assert result.refined is None
                assert set(result.prompts) == {"generate", "assess"}
                checked += 1
        assert checked == 24
        ok("short-circuit correctness (24/24 traces)")


class TestFilterBoundarySuite:
    def test_boundary_corpus_classifies_exactly(self):
        cases = boundary_cases()
        assert len(cases) >= 24
        criteria = FilterCriteria()
        for case in cases:
            verdict = passes_filters(case.question, case.explanation, criteria, EMBEDDER)
            assert verdict.checks["length"].passed is case.expect_length, case.name
            assert verdict.checks["bigram"].passed is bool(case.expect_bigram), case.name
            assert verdict.checks["digit"].passed is case.expect_digit, case.name
            assert verdict.checks["similarity"].passed is case.expect_similarity, case.name
            assert verdict.passed is case.expect_pass, case.name
        ok(f"filter boundary suite ({len(cases)} cases exact)")


class TestKrippendorffAcceptance:
    def test_fifty_random_matrices_match_bruteforce_oracle(self):
        rng = random.Random(20240917)
        checked = 0
        while checked < 50:
            n_raters = rng.randint(2, 4)
            n_items = rng.randint(3, 10)
            level = rng.choice(["nominal", "ordinal"])
            categories = list(range(1, 6)) if level == "ordinal" else [0, 1, 2]
            rows = random_matrix(rng, n_raters, n_items, categories, missing_rate=0.1)
            expected = alpha_bruteforce([list(r) for r in rows], level)
            if expected is None:
                continue
            actual = krippendorff_alpha(rows, level)
            assert actual == pytest.approx(expected, abs=1e-9)
            checked += 1
        ok("krippendorff alpha vs brute-force oracle (50 matrices, 1e-9)")

    def test_perfect_agreement_exactly_one(self):
        for level in ("nominal", "ordinal", "interval"):
            rows = ((2, 4, 1, 4, 3), (2, 4, 1, 4, 3), (2, 4, 1, 4, 3))
            assert krippendorff_alpha(rows, level) == 1.0
        ok("krippendorff alpha perfect agreement == 1.0")


def _hand_built_trace(suffix, initial, suggestion, refined):
    generator = [initial, refined]
    critic = ["Yes, revise.", f"feedback {suffix}", suggestion]
    trace, _ = run_scripted(qa_instance(suffix), "cross_refine", generator, critic)
    return trace


class TestSimilarityAcceptance:
    # Tokens chosen collision-free under the hashed embedder (asserted below).
    TOKENS = ("alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "kappa", "lam")

    def test_five_hand_built_traces_match_hand_computation(self):
        buckets = {EMBEDDER.bucket(t) for t in self.TOKENS}
        assert len(buckets) == len(self.TOKENS)

        traces = [
            _hand_built_trace("1", "alpha", "alpha beta", "alpha beta"),
            _hand_built_trace("2", "gamma delta", "delta", "gamma gamma delta"),
            _hand_built_trace("3", "epsilon", "zeta", "epsilon zeta"),
            _hand_built_trace("4", "eta theta", "eta theta", "eta theta"),
            _hand_built_trace("5", "kappa", "lam lam", "lam lam lam lam"),
        ]
        # expected cosines from the raw token counts, written out by hand:
        expected_init = [
            1 / math.sqrt(2),        # (1,1) vs (1,)
            3 / math.sqrt(10),       # counts (2,1) vs (1,1)
            1 / math.sqrt(2),        # (1,1) vs (1,)
            1.0,                     # identical
            0.0,                     # disjoint tokens
        ]
        expected_sug = [
            1.0,                     # identical
            1 / math.sqrt(5),        # counts (2,1) vs (0,1)
            1 / math.sqrt(2),        # (1,1) vs (0,1)
            1.0,                     # identical
            1.0,                     # scaled multiset of the same token
        ]
        report = similarity_report(traces, EMBEDDER)
        [pair] = report.values()
        assert pair.init_sim == pytest.approx(sum(expected_init) / 5, abs=1e-9)
        assert pair.sug_sim == pytest.approx(sum(expected_sug) / 5, abs=1e-9)
        ok("similarity report vs hand computation (5 traces, 1e-9)")

    def test_refined_equals_suggestion_degenerate_set(self):
        traces = [
            _hand_built_trace(f"d{i}", f"start{i}", f"target{i} text{i}", f"target{i} text{i}")
            for i in range(1, 4)
        ]
        report = similarity_report(traces, EMBEDDER)
        [pair] = report.values()
        assert pair.sug_sim == pytest.approx(1.0, abs=1e-12)
        ok("similarity degenerate set: sug_sim == 1.0")


class TestLanguageAcceptance:
    def test_bundled_corpus_accuracy_and_distribution(self, tmp_path):
        pairs = load_labeled_corpus()
        assert len(pairs) == 200
        correct = sum(1 for text, label in pairs if detect_language(text) == label)
        accuracy = correct / len(pairs)
        assert accuracy >= 0.95, f"accuracy {accuracy:.3f}"

        texts = [text for text, _ in pairs]
        dist = language_distribution(texts)
        total = dist.german_pct + dist.english_pct + dist.other_pct
        assert total == pytest.approx(100.0, abs=0.01)

        distributions = {("gen-model", "critic-model", "bundled", "cross_refine"): dist}
        headers, rows = language_table(distributions)
        paths = write_report_bundle(tmp_path, "language", headers, rows)
        report_text = (tmp_path / "language.txt").read_text(encoding="utf-8")
        assert headers == ["Generator", "Critic", "German", "English", "Other"]
        assert "German" in report_text and "English" in report_text and "Other" in report_text
        ok(f"language identification (accuracy {accuracy:.1%}, distribution sums to 100)")


class TestScorerProtocolAcceptance:
    def test_hundred_candidate_round_trip_and_error_mapping(self):
        candidates = tuple(f"candidate text {i} {'pad ' * (i % 13)}" for i in range(100))
        references = tuple(f"reference {i}" for i in range(100))
        with StubScorer() as stub:
            scores = score_batch(
                ScoreRequest(metric_id="identity", candidates=candidates, references=references),
                stub.endpoint,
            )
            assert len(scores) == 100
            assert scores == [len(c) * -0.01 for c in candidates]

            with pytest.raises(LengthMismatch):
                ScoreRequest(metric_id="identity", candidates=candidates, references=references[:99])

            with pytest.raises(ProtocolError):
                score_batch(
                    ScoreRequest(metric_id="mismatch", candidates=candidates), stub.endpoint
                )
        with StubScorer(violate_bounds=True) as stub:
            with pytest.raises(ProtocolError):
                score_batch(
                    ScoreRequest(
                        metric_id="tigerscore", candidates=("a", "b"), references=("r", "s")
                    ),
                    stub.endpoint,
                )
        ok("scorer protocol conformance (100-candidate batch, error mapping)")


class TestSelfRefineIterationControl:
    def test_stop_rules_and_ceiling(self):
        # stop on no-improvement feedback: one feedback call, zero refinements
        trace, _ = run_scripted(
            qa_instance("a"), "self_refine", ["E0", "No improvement needed."],
            self_refine=SelfRefineConfig(max_iterations=5),
        )
        assert trace.iterations == () and trace.final == "E0"
        feedback_calls = [k for k in trace.prompts if k.startswith("self_refine_feedback")]
        assert feedback_calls == ["self_refine_feedback_1"]

        # stop on no change: second rewrite repeats the first
        trace, _ = run_scripted(
            qa_instance("b"), "self_refine",
            ["E0", "tighten wording", "R1", "tighten more", "R1"],
            self_refine=SelfRefineConfig(max_iterations=5, stop_on_no_change=True),
        )
        assert len(trace.iterations) == 2 and trace.final == "R1"

        # ceiling: exactly max_iterations refinements
        trace, _ = run_scripted(
            qa_instance("c"), "self_refine",
            ["E0", "f1", "R1", "f2", "R2", "f3", "R3"],
            self_refine=SelfRefineConfig(max_iterations=3, stop_on_no_change=True),
        )
        assert len(trace.iterations) == 3 and trace.final == "R3"
        ok("self-refine iteration control (stop rules and ceiling exact)")
