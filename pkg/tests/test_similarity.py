import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from agrifed.privacy.ldp import Sketch
from agrifed.privacy.pca import PcaBasis
from agrifed.privacy.similarity import rank_similar


def sk(values, schema="h"):
    return Sketch(noised=tuple(float(v) for v in values), epsilon=1.0, schema_hash=schema)


def identity_basis(d):
    return PcaBasis(
        components=np.eye(d),
        mean=np.zeros(d),
        k=d,
        explained_variance=np.ones(d),
    )


def oracle_cosine(a, b):
    num = sum(x * y for x, y in zip(a, b))
    na = sum(x * x for x in a) ** 0.5
    nb = sum(y * y for y in b) ** 0.5
    if na == 0 or nb == 0:
        return 0.0
    return num / (na * nb)


def test_identical_candidate_scores_one_and_ranks_first():
    basis = identity_basis(3)
    me = sk([1.0, 2.0, 3.0])
    ranking = rank_similar(me, [("twin", sk([1.0, 2.0, 3.0])), ("other", sk([-1.0, 0.0, 5.0]))], basis)
    assert ranking.scores[0].peer == "twin"
    assert ranking.scores[0].score == 1.0


def test_orthogonal_candidate_scores_zero():
    basis = identity_basis(2)
    ranking = rank_similar(sk([1.0, 0.0]), [("ortho", sk([0.0, 1.0]))], basis)
    assert ranking.scores[0].score == 0.0


def test_ranking_matches_bruteforce_cosine_order():
    basis = identity_basis(4)
    me = sk([1.0, 1.0, 1.0, 1.0])
    candidates = []
    for i in range(5):
        vec = [1.0 + 0.7 * i, 1.0 - 0.3 * i, 1.0, 1.0 + 0.1 * i * i]
        candidates.append((f"peer{i}", sk(vec)))
    ranking = rank_similar(me, candidates, basis)
    oracle = sorted(
        ((name, oracle_cosine(me.noised, s.noised)) for name, s in candidates),
        key=lambda p: (-p[1], p[0]),
    )
    assert [s.peer for s in ranking.scores] == [name for name, _ in oracle]
    for got, (_, want) in zip(ranking.scores, oracle):
        assert abs(got.score - want) < 1e-12


def test_ties_broken_by_username():
    basis = identity_basis(2)
    ranking = rank_similar(
        sk([1.0, 0.0]),
        [("zeta", sk([2.0, 0.0])), ("alpha", sk([3.0, 0.0]))],
        basis,
    )
    assert [s.peer for s in ranking.scores] == ["alpha", "zeta"]


def test_zero_norm_projection_scores_zero():
    basis = identity_basis(2)
    ranking = rank_similar(sk([1.0, 1.0]), [("null", sk([0.0, 0.0]))], basis)
    assert ranking.scores[0].score == 0.0


def test_schema_mismatch_excluded_and_recorded():
    basis = identity_basis(2)
    ranking = rank_similar(
        sk([1.0, 0.0], schema="h"),
        [("ok", sk([1.0, 1.0], schema="h")), ("alien", sk([1.0, 1.0], schema="x"))],
        basis,
    )
    assert [s.peer for s in ranking.scores] == ["ok"]
    assert ranking.excluded == ["alien"]


def test_empty_candidate_set_returns_empty():
    ranking = rank_similar(sk([1.0, 0.0]), [], identity_basis(2))
    assert ranking.scores == [] and ranking.excluded == []


def test_scores_bounded():
    basis = identity_basis(3)
    ranking = rank_similar(sk([1e8, -1e8, 3.0]), [("p", sk([1e8, -1e8, 3.0]))], basis)
    assert -1.0 <= ranking.scores[0].score <= 1.0


@settings(max_examples=50, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**31),
    scale=st.floats(min_value=1e-3, max_value=1e3),
    n=st.integers(min_value=2, max_value=6),
)
def test_order_invariant_under_uniform_scaling(seed, scale, n):
    rng = np.random.default_rng(seed)
    d = 3
    basis = identity_basis(d)
    me = sk(rng.normal(size=d))
    cands = [(f"u{i}", rng.normal(size=d)) for i in range(n)]
    plain = rank_similar(me, [(u, sk(v)) for u, v in cands], basis)
    scaled = rank_similar(me, [(u, sk(v * scale)) for u, v in cands], basis)
    assert [s.peer for s in plain.scores] == [s.peer for s in scaled.scores]
