#!/usr/bin/env python3
"""Regenerates tests/fixtures/metrics from sacreBLEU.

Usage: python3 make_metric_fixture.py OUT_DIR
"""
import json
import random
import sys
import unicodedata
from pathlib import Path

import sacrebleu
from sacrebleu.metrics import BLEU, CHRF

VOCAB = (
    "the a cat dog sat on mat ran quickly house green river bank old new "
    "people said that will be was is are they we you it of in to and "
    "Paris London Monday ሰላም ዓለም ቤት ውሃ café naïve über straße"
).split()
PUNCT = [",", ".", "!", "?", ";", ":", "\"", "'", "(", ")", "-", "…"]


def sentence(rng, n):
    words = []
    for _ in range(n):
        w = rng.choice(VOCAB)
        if rng.random() < 0.15:
            w = w + rng.choice(PUNCT)
        if rng.random() < 0.05:
            w = rng.choice(PUNCT) + w
        words.append(w)
    return " ".join(words)


def perturb(rng, ref):
    words = ref.split()
    out = []
    for w in words:
        r = rng.random()
        if r < 0.15:
            continue
        if r < 0.30:
            out.append(rng.choice(VOCAB))
        else:
            out.append(w)
        if rng.random() < 0.05:
            out.append(rng.choice(VOCAB))
    return " ".join(out)


def bleu_pretokenize(line):
    toks = []
    for w in line.split():
        b, e = 0, len(w)
        while b < e and unicodedata.category(w[b]).startswith("P"):
            b += 1
        while e > b and unicodedata.category(w[e - 1]).startswith("P"):
            e -= 1
        if b < e:
            toks.append(w[b:e])
    return " ".join(toks)


def main():
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240613)
    refs, hyps = [], []
    for i in range(50):
        ref = sentence(rng, rng.randint(1, 18))
        if i == 7:
            hyp = ""
        elif i == 11:
            hyp = ref
        elif i == 23:
            hyp = sentence(rng, 3)
        else:
            hyp = perturb(rng, ref)
        refs.append(ref)
        hyps.append(hyp)

    chrf = CHRF(word_order=2)
    bleu = BLEU(tokenize="none")
    tok_h = [bleu_pretokenize(h) for h in hyps]
    tok_r = [bleu_pretokenize(r) for r in refs]

    chrf_corpus = chrf.corpus_score(hyps, [refs]).score
    bleu_corpus = bleu.corpus_score(tok_h, [tok_r]).score
    expected = {
        "sacrebleu_version": sacrebleu.__version__,
        "chrf_signature": str(chrf.get_signature()),
        "bleu_signature": str(bleu.get_signature()),
        "chrfpp_corpus": chrf_corpus,
        "bleu_corpus": bleu_corpus,
        "sentences": [
            {
                "index": i,
                "chrfpp": CHRF(word_order=2).corpus_score([hyps[i]], [[refs[i]]]).score,
                "bleu": BLEU(tokenize="none").corpus_score([tok_h[i]], [[tok_r[i]]]).score,
            }
            for i in range(20)
        ],
    }
    (out / "hyps.txt").write_text("\n".join(hyps) + "\n", encoding="utf-8")
    (out / "refs.txt").write_text("\n".join(refs) + "\n", encoding="utf-8")
    (out / "expected.json").write_text(json.dumps(expected, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
