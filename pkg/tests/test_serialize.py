import numpy as np

from muellerkit import mueller_from_k, serialize as S
from muellerkit.oracle import random_lorentz, random_pairs


def test_float_formatting_lossless():
    vals = [1.0, -0.1, 1e-300, 1.7976931348623157e308, np.pi,
            0.1 + 0.2, 3.0, 1e17]
    for v in vals:
        assert float(S._fmt(v)) == v


def test_dataset_round_trip_bytes():
    rng = np.random.default_rng(0)
    k = random_lorentz(rng=rng)
    pairs = random_pairs(k, 5, rng)
    t1 = S.dumps(S.dataset_to_json(pairs, {"kind": "test"}))
    pairs2, meta = S.dataset_from_json(S.loads(t1))
    t2 = S.dumps(S.dataset_to_json(pairs2, meta))
    assert t1 == t2
    for a, b in zip(pairs, pairs2):
        assert a.input.s0 == b.input.s0
        assert np.all(a.input.s == b.input.s)
        assert a.output.s0 == b.output.s0
        assert np.all(a.output.s == b.output.s)


def test_k_and_matrix_round_trip():
    k = random_lorentz(seed=4)
    k2 = S.k_from_json(S.loads(S.dumps(S.k_to_json(k))))
    assert np.all(k2.k == k.k)
    L = mueller_from_k(k)
    L2 = S.mueller_from_json(S.loads(S.dumps(S.mueller_to_json(L))))
    assert np.all(L2.m == L.m)


def test_dumps_is_valid_json():
    import json
    text = S.dumps({"a": 0.1, "b": [1.5, 2], "c": {"d": -0.0}})
    assert json.loads(text) == {"a": 0.1, "b": [1.5, 2], "c": {"d": -0.0}}
