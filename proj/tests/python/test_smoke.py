# Copyright 2026 The tinyrel Authors
# SPDX-License-Identifier: Apache-2.0

import math
import os
import random

import pytest

import tinyrel

DATA = os.environ.get("TINYREL_TEST_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "data"))


def test_tokenize_golden():
    assert tinyrel.tokenize("mac电脑") == ["mac", "电", "脑", "^mac", "mac电", "电脑", "脑$"]
    unigrams, bigrams = tinyrel.tokenize_sequence("Red SWEATER")
    assert unigrams == ["red", "sweater"]
    assert bigrams == ["^red", "red\x1fsweater", "sweater$"]
    assert tinyrel.tokenize("") == []


def test_soften_and_stack():
    assert tinyrel.soften(2.0, -2.0) == pytest.approx(1 / (1 + math.exp(-4)), abs=1e-15)
    gaps = [abs(tinyrel.soften(1.0, 0.0, t) - 0.5) for t in (1, 2, 3, 5, 10)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert tinyrel.stack_scores([0.2, 0.4, 0.9]) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(tinyrel.Error) as info:
        tinyrel.soften(1.0, 0.0, 0.0)
    assert info.value.kind == "usage"


def test_metrics_against_pairwise_count():
    rng = random.Random(3)
    scores = [rng.randrange(10) / 10 for _ in range(200)]
    labels = [float(rng.randrange(2)) for _ in range(200)]
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    credit = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    assert tinyrel.auc(scores, labels) == pytest.approx(credit / (len(pos) * len(neg)), abs=1e-12)
    assert tinyrel.pcc([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    report = tinyrel.evaluate([0.9, 0.1, 0.7, 0.3], [1, 0, 0, 1])
    assert report["count"] == 4 and report["accuracy"] == 0.5


def test_train_predict_save_load(tmp_path):
    pairs = [("red shoe", "red shoe for men"), ("blue hat", "red shoe"), ("电脑", "笔记本 电脑")]
    vocab = tinyrel.Vocab.build(pairs, min_count=1)
    assert vocab.lookup("red") is not None
    examples = [(q, t, y) for (q, t), y in zip(pairs, (0.9, 0.1, 0.8))]
    model = tinyrel.train(examples, vocab, hidden=[8, 4], dim=6, epochs=50, batch_size=3, lr=0.1, seed=2)
    scores = model.predict(pairs)
    assert all(0.0 < s < 1.0 for s in scores)
    assert scores[0] > scores[1]
    assert model.config["hidden"] == [8, 4]
    assert len(model.embed("red shoe")) == 6
    assert model.distance("red shoe", "red shoe", "euclidean") == 0.0

    path = str(tmp_path / "m.ckpt")
    model.save(path)
    loaded = tinyrel.Model.load(path)
    assert loaded.predict(pairs) == scores
    bench = loaded.bench(pairs, batches=3, batch_size=4, warmup=0)
    assert bench["total_examples"] == 12
    assert bench["cycled"]


def test_bad_checkpoint_raises_with_kind(tmp_path):
    path = tmp_path / "bad.ckpt"
    path.write_bytes(b"B2DNN1")
    with pytest.raises(tinyrel.Error) as info:
        tinyrel.Model.load(str(path))
    assert info.value.kind == "truncated"
    assert info.value.exit_code == 2


def test_cli_pipeline_in_process(tmp_path):
    fixture = os.path.join(DATA, "fixture")
    vocab = str(tmp_path / "v.tsv")
    code, out, _ = tinyrel.run_cli(["build-vocab", "--corpus", os.path.join(fixture, "corpus.tsv"), "--out", vocab])
    assert code == 0 and "vocab_size=" in out
    code, out, err = tinyrel.run_cli(["bogus"])
    assert code == 1
