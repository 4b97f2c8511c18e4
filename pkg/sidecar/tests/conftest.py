"""Session fixtures building tiny local checkpoints for every model family.

The scorers should run their real code paths (tokenization, forward
passes, generation, transport solves) without any network access, so the
fixtures construct miniature randomly initialized models with a shared
word-level vocabulary and save them as regular checkpoints.
"""
from __future__ import annotations

import pytest
import torch
from tokenizers import Tokenizer
from tokenizers.models import WordLevel
from tokenizers.pre_tokenizers import Whitespace
from transformers import (
    BartConfig,
    BartForConditionalGeneration,
    BertConfig,
    BertForSequenceClassification,
    BertModel,
    BertTokenizerFast,
    GPT2Config,
    GPT2LMHeadModel,
    PreTrainedTokenizerFast,
)

from crossrefine_sidecar.registry import MetricRegistry

WORDS = [
    "the", "answer", "is", "unknown", "because", "document", "shows", "no",
    "evidence", "walking", "lowers", "resting", "heart", "rate", "daily",
    "study", "found", "a", "small", "decrease", "claim", "supported",
    "false", "true", "explanation", "refined", "initial", "suggestion",
    "feedback", "error", "score", "reduction", "in", "of", "and", "to",
    "for", "with", "this", "that", "text", "output", "die", "das", "ist",
    "nicht", "und", "eine", "antwort", "erklärung",
]


def _word_level_tokenizer() -> PreTrainedTokenizerFast:
    vocab = {"<s>": 0, "<pad>": 1, "</s>": 2, "<unk>": 3}
    for word in WORDS:
        vocab[word] = len(vocab)
    tokenizer = Tokenizer(WordLevel(vocab, unk_token="<unk>"))
    tokenizer.pre_tokenizer = Whitespace()
    return PreTrainedTokenizerFast(
        tokenizer_object=tokenizer,
        bos_token="<s>",
        eos_token="</s>",
        pad_token="<pad>",
        unk_token="<unk>",
    )


def _bert_tokenizer(path) -> BertTokenizerFast:
    vocab_path = path / "vocab.txt"
    tokens = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + WORDS
    vocab_path.write_text("\n".join(tokens) + "\n", encoding="utf-8")
    return BertTokenizerFast(vocab_file=str(vocab_path))


def _build_seq2seq(path, seed: int) -> None:
    tokenizer = _word_level_tokenizer()
    torch.manual_seed(seed)
    config = BartConfig(
        vocab_size=len(tokenizer),
        d_model=32,
        encoder_layers=1,
        decoder_layers=1,
        encoder_attention_heads=2,
        decoder_attention_heads=2,
        encoder_ffn_dim=64,
        decoder_ffn_dim=64,
        max_position_embeddings=128,
        pad_token_id=1,
        bos_token_id=0,
        eos_token_id=2,
        decoder_start_token_id=2,
        forced_eos_token_id=None,
    )
    BartForConditionalGeneration(config).save_pretrained(path)
    tokenizer.save_pretrained(path)


def _build_encoder(path, seed: int) -> None:
    path.mkdir(parents=True, exist_ok=True)
    tokenizer = _bert_tokenizer(path)
    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=tokenizer.vocab_size,
        hidden_size=32,
        num_hidden_layers=1,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=128,
        pad_token_id=0,
    )
    BertModel(config).save_pretrained(path)
    tokenizer.save_pretrained(path)


def _build_regressor(path, seed: int) -> None:
    path.mkdir(parents=True, exist_ok=True)
    tokenizer = _bert_tokenizer(path)
    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=tokenizer.vocab_size,
        hidden_size=32,
        num_hidden_layers=1,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=128,
        pad_token_id=0,
        num_labels=1,
    )
    BertForSequenceClassification(config).save_pretrained(path)
    tokenizer.save_pretrained(path)


def _build_causal(path, seed: int) -> None:
    tokenizer = _word_level_tokenizer()
    torch.manual_seed(seed)
    config = GPT2Config(
        vocab_size=len(tokenizer),
        n_positions=256,
        n_embd=32,
        n_layer=1,
        n_head=2,
        bos_token_id=0,
        eos_token_id=2,
    )
    GPT2LMHeadModel(config).save_pretrained(path)
    tokenizer.save_pretrained(path)


@pytest.fixture(scope="session")
def checkpoints(tmp_path_factory):
    root = tmp_path_factory.mktemp("tiny-checkpoints")
    _build_seq2seq(root / "seq2seq", seed=11)
    _build_seq2seq(root / "seq2seq_de", seed=13)
    _build_encoder(root / "encoder", seed=17)
    _build_encoder(root / "encoder_de", seed=19)
    _build_regressor(root / "regressor", seed=23)
    _build_causal(root / "causal", seed=29)
    return {
        "bleurt": str(root / "regressor"),
        "bartscore": str(root / "seq2seq"),
        "bartscore_precision": str(root / "seq2seq"),
        "bartscore_f": str(root / "seq2seq"),
        "bartscore_de": str(root / "seq2seq_de"),
        "tigerscore": str(root / "causal"),
        "bertscore": str(root / "encoder"),
        "bertscore_de": str(root / "encoder_de"),
        "moverscore": str(root / "encoder"),
        "moverscore_de": str(root / "encoder_de"),
    }


@pytest.fixture(scope="session")
def registry(checkpoints):
    return MetricRegistry(checkpoints=checkpoints)


@pytest.fixture(scope="session")
def client(registry):
    from fastapi.testclient import TestClient

    from crossrefine_sidecar.app import create_app

    with TestClient(create_app(registry)) as test_client:
        yield test_client
