#!/usr/bin/env python3
"""Independent reference implementation of the answer metrics.

Generates fixtures/metrics_oracle.jsonl and fixtures/normalize_oracle.jsonl.
Pure Python + unicodedata; shares no code with the C++ tree. Run from the
repository root:

    python3 tests/oracles/metrics_oracle.py
"""

import json
import random
import unicodedata
from pathlib import Path

# Cc characters carrying the White_Space property (unicodedata lacks a
# direct property lookup; Zs/Zl/Zp cover the rest).
_CC_WHITESPACE = set("\t\n\v\f\r\x85")


def _is_white(ch: str) -> bool:
    return ch in _CC_WHITESPACE or unicodedata.category(ch) in ("Zs", "Zl", "Zp")


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def normalize(text: str) -> str:
    folded = unicodedata.normalize("NFKC", text).casefold()
    mapped = "".join(" " if (_is_white(c) or _is_punct(c)) else c for c in folded)
    return " ".join(mapped.split())


def flexible_em(prediction: str, golds: list[str]) -> int:
    pred = normalize(prediction)
    for gold in golds:
        g = normalize(gold)
        if g and g in pred:
            return 1
    return 0


def _trigrams(s: str) -> dict[str, int]:
    counts: dict[str, int] = {}
    for i in range(len(s) - 2):
        g = s[i : i + 3]
        counts[g] = counts.get(g, 0) + 1
    return counts


def char_3gram_recall(prediction: str, golds: list[str]) -> float:
    pred = normalize(prediction)
    pred_counts = _trigrams(pred)
    best = 0.0
    for gold in golds:
        g = normalize(gold)
        if len(g) < 3:
            score = 1.0 if (g and g in pred) else 0.0
        else:
            gold_counts = _trigrams(g)
            total = sum(gold_counts.values())
            hits = sum(min(n, pred_counts.get(gram, 0)) for gram, n in gold_counts.items())
            score = hits / total
        best = max(best, score)
    return best


# Pins: values stated by the benchmark design itself. Generation aborts if
# the oracle disagrees with any of them.
def _self_check() -> None:
    assert flexible_em("The answer is: 8", ["8"]) == 1
    assert flexible_em("The answer is: Aqua.", ["Aqua", "아쿠아"]) == 1
    assert char_3gram_recall("abc", ["abcd"]) == 0.5
    assert normalize("答案是：8") == "答案是 8"
    assert flexible_em("", ["x"]) == 0
    assert flexible_em("anything", [""]) == 0
    assert flexible_em("anything", []) == 0


CASES = [
    # (prediction, golds, note)
    ("The answer is: 8", ["8"], "marker prefix, single digit gold"),
    ("The answer is: Aqua.", ["Aqua", "아쿠아"], "latin gold among multiscript golds"),
    ("abc", ["abcd"], "one of two gold trigrams present"),
    ("Café", ["Café"], "NFC prediction vs NFD gold"),
    ("ＡＢＣ１２３", ["abc123"], "fullwidth forms fold to ascii"),
    ("STRASSE", ["straße"], "eszett casefolds to ss"),
    ("GROẞE", ["große"], "capital eszett casefolds to ss"),
    ("答案是：8", ["8"], "fullwidth colon is punctuation"),
    ("answer", ["", "   ", "..."], "golds normalizing to empty never match"),
    ("answer", [], "empty gold list"),
    ("", ["8"], "empty prediction"),
    ("aaa", ["aaaa"], "clipped overlap, gold repeats trigram"),
    ("aaaaaa", ["aaa"], "prediction repeats beyond gold count"),
    ("abc", ["xyz", "abcd"], "max over golds picks partial match"),
    ("xxabyy", ["ab"], "short gold containment hit"),
    ("xx", ["ab"], "short gold containment miss"),
    ("a b c", ["a b"], "space inside trigram"),
    ("我在北京大学读书", ["北京大学"], "han trigrams fully covered"),
    ("北京 大学", ["北京大学"], "inserted space breaks han trigrams"),
    ("ab cd", ["ab,cd"], "comma folds to space before trigrams"),
    ("the answer", ["The Answer"], "case-insensitive match"),
    ("İstanbul", ["istanbul"], "dotted capital I keeps combining dot"),
    ("ΟΔΥΣΣΕΥΣ", ["οδυσσευσ"], "greek sigma forms fold together"),
    ("①", ["1"], "circled digit compatibility-decomposes"),
    ("Ⅷ", ["viii"], "roman numeral compatibility-decomposes"),
    ("الجواب هو: القاهرة", ["القاهرة"], "arabic with colon"),
    ("答えは東京です。", ["東京"], "japanese with ideographic stop"),
    ("서울", ["서울"], "hangul jamo recompose under NFKC"),
    ("the answer is new york", ["new york city"], "partial trigram recall on phrase"),
    ("8\n\t9", ["8 9"], "tabs and newlines collapse"),
    ("8 9", ["8 9"], "no-break space collapses"),
    ("spider man", ["Spider-Man"], "hyphen folds to space"),
    ("don t care", ["don’t"], "curly apostrophe folds to space"),
    ("48", ["8"], "substring match is intentionally loose"),
    ("ab", ["ab", "wxyz"], "containment fallback wins the max"),
    ("ﬁnland", ["finland"], "fi ligature decomposes"),
    ("x²", ["x2"], "superscript decomposes"),
    ("คำตอบคือกรุงเทพมหานคร", ["กรุงเทพมหานคร"], "thai unspaced substring"),
    ("उत्तर है दिल्ली", ["दिल्ली"], "devanagari match"),
    ("МОСКВА", ["москва"], "cyrillic casefold"),
    ("...", ["a"], "punctuation-only prediction"),
    ("abcxcde", ["abcde"], "two of three gold trigrams, repeating decimal"),
    ("a b", ["a   b"], "internal space runs collapse in gold"),
    ("Answer: Berlin", ["berlin"], "ascii marker prefix"),
    ("Việt Nam", ["Việt Nam"], "viet tone mark composition variants"),
    ("answer aqua", ["  Aqua!! "], "gold with surrounding punctuation"),
]


def _random_cases(n: int, seed: int) -> list[tuple[str, list[str], str]]:
    rng = random.Random(seed)
    out = []
    alphabet = "abcde"
    for i in range(n):
        pred = "".join(rng.choice(alphabet) for _ in range(rng.randint(4, 14)))
        gold = "".join(rng.choice(alphabet) for _ in range(rng.randint(3, 9)))
        out.append((pred, [gold], f"random small-alphabet case {i}"))
    return out


NORMALIZE_CASES = [
    "The answer is: 8",
    "答案是：8",
    "  leading and trailing  ",
    "Hello,   World!!",
    "ＡＢＣ　ｄｅｆ",
    "Café du Monde",
    "don’t—stop",
    "tab\there\nnewline",
    "ΣΊΣΥΦΟΣ",
    "İzmir",
    "STRASSE und straße",
    "①②③",
    "x² + y³",
    "안녕하세요...",
    "「東京」です。",
    "¿Dónde está?",
    "a b c　d",
    "؟السؤال",
    "ʻOkina‘test’",
    "",
]


def main() -> None:
    _self_check()
    root = Path(__file__).resolve().parents[2]
    cases = CASES + _random_cases(8, seed=42)
    assert len(cases) >= 50, len(cases)

    lines = []
    for idx, (pred, golds, note) in enumerate(cases, start=1):
        rec = {
            "id": f"m{idx:03d}",
            "prediction": pred,
            "golds": golds,
            "em": flexible_em(pred, golds),
            "recall3": char_3gram_recall(pred, golds),
            "note": note,
        }
        lines.append(json.dumps(rec, ensure_ascii=False, sort_keys=True))
    out = root / "fixtures" / "metrics_oracle.jsonl"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(lines)} cases)")

    nlines = []
    for idx, text in enumerate(NORMALIZE_CASES, start=1):
        rec = {"id": f"n{idx:03d}", "input": text, "expected": normalize(text)}
        nlines.append(json.dumps(rec, ensure_ascii=False, sort_keys=True))
    nout = root / "fixtures" / "normalize_oracle.jsonl"
    nout.write_text("\n".join(nlines) + "\n", encoding="utf-8")
    print(f"wrote {nout} ({len(nlines)} cases)")


if __name__ == "__main__":
    main()
