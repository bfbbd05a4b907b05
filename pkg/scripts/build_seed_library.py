"""Regenerate src/labanimate/data/seed_library.json.

Each score row is written as ``duration: l-lower l-upper r-lower r-upper head``.
Scores are hand-authored approximations; word lists are the representative
words of each concept.
"""

from pathlib import Path

from labanimate.codebook import parse_symbol
from labanimate.io import ScoreDocument, write_library
from labanimate.library import GestureConceptPair, GestureLibrary
from labanimate.score import LabanScore

REST = "place-low place-low place-low place-low place-high"

GENERAL = {
    "away": (["away", "hurry up", "go out"], [
        f"1: {REST}",
        "1: place-low place-low forward-middle right-forward-low place-high",
        "0.5: place-low place-low right-forward-middle right-middle place-high",
        f"1: {REST}",
    ]),
    "bad": (["bad", "busy", "boring", "unusual"], [
        "1: left-forward-middle place-low right-forward-middle place-low forward-high",
        "1: left-middle left-low right-middle right-low forward-high",
        f"1: {REST}",
    ]),
    "big": (["big", "large", "huge"], [
        "1: forward-middle left-forward-low forward-middle right-forward-low place-high",
        "1.5: left-forward-high left-forward-middle right-forward-high right-forward-middle place-high",
        f"1: {REST}",
    ]),
    "bye": (["bye", "goodbye", "see you later"], [
        "1: place-low place-low place-high right-middle place-high",
        "0.5: place-low place-low right-high right-middle place-high",
        "0.5: place-low place-low place-high right-middle place-high",
        f"1: {REST}",
    ]),
    "calm": (["calm", "relax", "easy"], [
        "1: forward-middle place-low forward-middle place-low place-high",
        "1.5: forward-low place-low forward-low place-low place-high",
        f"1: {REST}",
    ]),
    "difficult": (["difficult", "hard", "problem", "trouble"], [
        "1: place-high left-forward-low place-high right-forward-low forward-high",
        "1: left-forward-high left-forward-low right-forward-high right-forward-low forward-high",
        f"1: {REST}",
    ]),
    "drink": (["drink", "coffee", "tea", "beer"], [
        "1: place-low place-low place-high right-forward-low place-high",
        "1: place-low place-low backward-high right-forward-low backward-high",
        f"1: {REST}",
    ]),
    "eat": (["eat", "food", "lunch", "dinner"], [
        "1: place-low place-low place-high forward-low place-high",
        "0.5: place-low place-low forward-high forward-low place-high",
        "0.5: place-low place-low place-high forward-low place-high",
        f"1: {REST}",
    ]),
    "good": (["good", "great", "fine", "nice"], [
        "1: place-low place-low forward-middle right-forward-low place-high",
        "1: place-low place-low forward-high right-forward-low forward-high",
        f"1: {REST}",
    ]),
    "happy": (["happy", "glad", "fun", "enjoy"], [
        "1: left-high left-middle right-high right-middle place-high",
        "1: place-high left-high place-high right-high place-high",
        f"1: {REST}",
    ]),
    "hello": (["hello", "hi", "hey", "welcome"], [
        "1: place-low place-low place-high right-low place-high",
        "0.5: place-low place-low right-forward-high right-low place-high",
        "0.5: place-low place-low place-high right-low place-high",
        f"1: {REST}",
    ]),
    "hot": (["hot", "warm", "heat"], [
        "1: forward-high forward-low forward-high forward-low place-high",
        "0.5: forward-middle forward-low forward-middle forward-low place-high",
        "0.5: forward-high forward-low forward-high forward-low place-high",
        f"1: {REST}",
    ]),
    "idea": (["idea", "think", "remember", "know"], [
        "1: place-low place-low backward-high right-low place-high",
        "1: place-low place-low place-high right-middle forward-high",
        f"1: {REST}",
    ]),
    "many": (["many", "several", "everyone", "all"], [
        "1: left-forward-middle left-forward-low right-forward-middle right-forward-low place-high",
        "1.5: left-middle left-forward-middle right-middle right-forward-middle place-high",
        f"1: {REST}",
    ]),
    "me": (["I", "me", "my", "myself"], [
        "1: place-low place-low left-middle forward-low place-high",
        "1: place-low place-low left-backward-middle right-forward-low place-high",
        f"1: {REST}",
    ]),
    "money": (["money", "pay", "price", "buy"], [
        "1: place-low place-low forward-middle place-low place-high",
        "0.5: place-low place-low forward-middle forward-low forward-high",
        f"1: {REST}",
    ]),
    "music": (["music", "song", "melody"], [
        "1: left-forward-middle place-low right-forward-middle place-low place-high",
        "0.5: left-middle place-low forward-middle place-low left-forward-high",
        "0.5: forward-middle place-low right-middle place-low right-forward-high",
        f"1: {REST}",
    ]),
    "nod": (["no", "yes", "come", "I will", "whenever", "strong", "OK"], [
        f"1: {REST}",
        "0.5: place-low place-low place-low place-low forward-high",
        "0.5: place-low place-low place-low place-low place-high",
        "0.5: place-low place-low place-low place-low forward-high",
        f"1: {REST}",
    ]),
    "panic": (["panic", "pass out", "ouch"], [
        "1: place-high left-high place-high right-high backward-high",
        "0.5: left-high left-high right-high right-high backward-high",
        f"1: {REST}",
    ]),
    "please": (["please", "go ahead", "would you", "could you", "will you",
                "take care", "clean up", "I'd like"], [
        "1: forward-middle place-low forward-middle place-low place-high",
        "1: forward-middle forward-low forward-middle forward-low forward-high",
        f"1: {REST}",
    ]),
    "quit": (["quit", "knife", "stop", "off"], [
        "1: place-low place-low place-high right-middle place-high",
        "0.5: place-low place-low right-middle right-forward-middle place-high",
        f"1: {REST}",
    ]),
    "say": (["say", "said", "talk", "request"], [
        "1: place-low place-low right-forward-high forward-low place-high",
        "1: place-low place-low right-forward-middle right-forward-low place-high",
        f"1: {REST}",
    ]),
    "shake_head": (["no", "so", "cannot", "back", "get drunk", "cannot keep", "tone-deaf"], [
        f"1: {REST}",
        "0.5: place-low place-low place-low place-low left-forward-high",
        "0.5: place-low place-low place-low place-low right-forward-high",
        "0.5: place-low place-low place-low place-low left-forward-high",
        f"1: {REST}",
    ]),
    "sleepy": (["sleepy", "sleep", "asleep", "yawn"], [
        "1: place-high left-high place-low place-low place-high",
        "1.5: backward-high left-high place-low place-low backward-high",
        f"1: {REST}",
    ]),
    "small": (["small", "out of", "dish"], [
        "1: place-low place-low forward-high forward-low place-high",
        "1: place-low place-low forward-middle forward-low forward-high",
        f"1: {REST}",
    ]),
    "sorry": (["sorry", "check"], [
        "1: right-forward-middle left-forward-low left-forward-middle right-forward-low forward-high",
        "1: right-forward-middle forward-low left-forward-middle forward-low forward-high",
        f"1: {REST}",
    ]),
    "surprise": (["surprise", "mess", "waste"], [
        "0.5: left-high left-middle right-high right-middle backward-high",
        "1: left-high left-middle right-high right-middle backward-high",
        f"1: {REST}",
    ]),
    "thanks": (["thank", "thanks"], [
        "1: forward-middle place-low forward-middle place-low place-high",
        "1: forward-middle forward-low forward-middle forward-low forward-high",
        "0.5: forward-middle place-low forward-middle place-low place-high",
        f"1: {REST}",
    ]),
    "tired": (["tired", "lie down", "drunk", "tipsy", "loaded", "not feeling"], [
        "1: place-low place-low place-low place-low forward-high",
        "1.5: left-low left-low right-low right-low forward-high",
        f"1: {REST}",
    ]),
    "wait": (["wait", "moment", "slowly", "later"], [
        "1: place-low place-low place-high forward-middle place-high",
        "1: place-low place-low place-high forward-middle place-high",
        f"1: {REST}",
    ]),
    "walk": (["walk", "run", "move", "exercise"], [
        "0.5: forward-middle backward-low place-low forward-low place-high",
        "0.5: place-low forward-low forward-middle backward-low place-high",
        "0.5: forward-middle backward-low place-low forward-low place-high",
        f"1: {REST}",
    ]),
    "weather": (["weather", "sunny", "cloudy", "windy", "rainy", "nice day"], [
        "1: left-forward-high left-forward-middle right-forward-high right-forward-middle forward-high",
        "1.5: left-high left-high right-high right-high forward-high",
        f"1: {REST}",
    ]),
}

DEICTIC = {
    "this": ["1: place-low place-low forward-low forward-low forward-high", f"1: {REST}"],
    "that": ["1: place-low place-low right-forward-middle right-forward-middle place-high", f"1: {REST}"],
    "here": ["1: forward-low forward-low forward-low forward-low forward-high", f"1: {REST}"],
    "there": ["1: place-low place-low right-middle right-middle place-high", f"1: {REST}"],
}

QUESTION = [
    "1: forward-middle left-forward-low forward-middle right-forward-low place-high",
    "1: left-forward-middle left-forward-low right-forward-middle right-forward-low forward-high",
    f"1: {REST}",
]

BEAT = [
    "0.5: place-low place-low forward-middle place-low place-high",
    "0.5: place-low place-low forward-low place-low place-high",
    "0.5: place-low place-low forward-middle place-low place-high",
    f"1: {REST}",
]


def make_score(lines):
    rows, durs = [], []
    for line in lines:
        dur, _, cells = line.partition(":")
        rows.append(tuple(parse_symbol(c) for c in cells.split()))
        durs.append(float(dur))
    return LabanScore(tuple(rows), tuple(durs)).with_holds()


def pair(concept, category, words, lines):
    doc = ScoreDocument(make_score(lines), name=concept, source="authored")
    return GestureConceptPair(concept, category, tuple(words), doc.score, (), tuple(doc.metadata.items()))


def build() -> GestureLibrary:
    pairs = [pair(c, "general", w, s) for c, (w, s) in sorted(GENERAL.items())]
    pairs += [pair(c, "deictic", [c], s) for c, s in DEICTIC.items()]
    pairs.append(pair("question", "question", ["who", "what", "when", "where", "how"], QUESTION))
    pairs.append(pair("beat", "beat", [], BEAT))
    return GestureLibrary(tuple(pairs))


if __name__ == "__main__":
    out = Path(__file__).resolve().parents[1] / "src" / "labanimate" / "data" / "seed_library.json"
    lib = build()
    out.write_text(write_library(lib), encoding="utf-8")
    print(f"wrote {len(lib)} pairs to {out}")
