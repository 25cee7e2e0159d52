"""Hand-built indexes shared by the evaluation and acceptance tests."""

import random

from hybrid_ir.color import ColorHistogram
from hybrid_ir.extract import SourceLocation as L
from hybrid_ir.index import ImageRecord, VectorIndex

H0 = ColorHistogram((0,) * 12)


def build(profiles, label="X"):
    index = VectorIndex()
    for rid, profile in profiles.items():
        index.add_record(ImageRecord(rid, "/d.html", f"/{rid}.ppm", f"{rid}.ppm", label, H0, profile))
    return index


# Relevant images name the query subject only in their filename; distractors
# repeat it in body text. Plain tf-idf prefers the distractors.
FILENAME_DOMINANT = {
    1: {"tiger": {L.FILENAME: 1}, "jungle": {L.P: 1}, "green": {L.P: 1}, "leaves": {L.P: 1}, "river": {L.P: 1}},
    2: {"tiger": {L.FILENAME: 1}, "stripes": {L.P: 1}, "orange": {L.P: 1}, "grass": {L.P: 1}, "shade": {L.P: 1}},
    3: {"tiger": {L.P: 3}, "zoo": {L.P: 1}},
    4: {"tiger": {L.P: 2}, "poster": {L.P: 1}},
    5: {"eagle": {L.FILENAME: 1}, "sky": {L.P: 1}, "cliff": {L.P: 1}, "nest": {L.P: 1}},
    6: {"eagle": {L.P: 3}, "logo": {L.P: 1}},
    7: {"cat": {L.P: 1}},
    8: {"dog": {L.P: 1}},
}
FILENAME_DOMINANT_JUDGMENTS = {"tiger": frozenset({1, 2}), "eagle": frozenset({5})}

# location-free: every count sits in P, so any table reduces to tf-idf
LOCATION_FREE = {
    rid: {t: {L.P: c} for t, c in terms.items()}
    for rid, terms in {
        1: {"apple": 2, "pear": 1},
        2: {"apple": 1, "plum": 3},
        3: {"pear": 2, "plum": 1, "fig": 1},
        4: {"fig": 4},
        5: {"kiwi": 1, "apple": 1},
    }.items()
}
LOCATION_FREE_JUDGMENTS = {"apple": frozenset({1, 2}), "pear fig": frozenset({3, 4}), "plum": frozenset({2})}


def random_profiles(seed, n_records=20, vocab=15):
    rng = random.Random(seed)
    words = [f"w{i}" for i in range(vocab)]
    return {
        rid: {
            t: {loc: rng.randint(1, 5) for loc in rng.sample(list(L), rng.randint(1, 3))}
            for t in rng.sample(words, rng.randint(2, 7))
        }
        for rid in range(1, n_records + 1)
    }
