import random

import pytest

from strictfhs.errors import FormatError, NotPartitionType, SizeMismatch
from strictfhs.packing import (
    NestedFamily,
    Packing,
    certify,
    compute_di,
    digest,
    from_text,
    is_certified,
    sequences_of,
    to_text,
    verify_nested,
    verify_packing,
    verify_partition_type,
)

from oracles import di_brute, diff_counts


def test_planar_difference_set():
    assert verify_packing(Packing(7, ((0, 1, 3),))).ok


def test_mod6_repeats_three():
    res = verify_packing(Packing(6, ((0, 1, 3),)))
    assert not res.ok
    assert any("residue 3 occurs 2" in v for v in res.violations)


def test_crdp_forbidden_subgroup():
    assert verify_packing(Packing(6, ((1, 2),), "CRDP", 2)).ok
    # {0,3} differs by 3, which lies in the forbidden subgroup {0, 3}
    assert not verify_packing(Packing(6, ((0, 3),), "CRDP", 2)).ok


def test_single_member_family():
    assert verify_nested(NestedFamily(7, (((0, 1, 3),),))).ok


def test_two_member_external():
    assert verify_nested(NestedFamily(5, (((0, 1),), ((0, 2),)))).ok


def test_unequal_sizes():
    with pytest.raises(SizeMismatch):
        verify_nested(NestedFamily(5, (((0,),), ((0,), (1,)))))


def test_partition_type_examples():
    assert verify_partition_type(NestedFamily(4, (((0, 2), (1, 3)),)))
    assert not verify_partition_type(NestedFamily(2, (((0,), (0, 1)),)))


def test_di_examples():
    F = NestedFamily(4, (((0, 2), (1, 3)),), lam=2)
    assert compute_di(F) == [1, 2]
    S = NestedFamily(5, (tuple((i,) for i in range(5)),), lam=3)
    assert compute_di(S) == [5, 5, 5]


def _random_partition(rng, n, M, l):
    members = []
    for _ in range(M):
        X = [rng.randrange(l) for _ in range(n)]
        blocks = [[] for _ in range(l)]
        for t, x in enumerate(X):
            blocks[x].append(t)
        members.append(tuple(tuple(b) for b in blocks))
    return NestedFamily(n, tuple(members), lam=3)


@pytest.mark.parametrize("seed", range(15))
def test_di_matches_oracle(seed):
    rng = random.Random(seed)
    n = rng.randrange(3, 25)
    F = _random_partition(rng, n, rng.randrange(1, 4), rng.randrange(2, 6))
    seqs = sequences_of(F).tolist()
    assert compute_di(F) == di_brute(seqs, 3)


@pytest.mark.parametrize("seed", range(15))
def test_verify_nested_matches_oracle(seed):
    rng = random.Random(100 + seed)
    n = rng.randrange(5, 30)
    M = rng.randrange(1, 4)
    size = rng.randrange(1, 4)
    lam = rng.randrange(1, 3)
    members = tuple(tuple(tuple(sorted(rng.sample(range(n), rng.randrange(1, 4))))
                          for _ in range(size)) for _ in range(M))
    F = NestedFamily(n, members, lam=lam)
    want = True
    for m in members:
        c = diff_counts(m, n)
        want &= all(v <= lam for v in c.values())
    for a in range(M):
        for b in range(M):
            if a != b:
                c = diff_counts(members[a], n, internal=False, other=members[b])
                want &= all(v <= lam for v in c.values())
    assert verify_nested(F).ok == want


def test_sequences_require_partition():
    with pytest.raises(NotPartitionType):
        sequences_of(NestedFamily(4, (((0,), (1,)),)))


def test_text_round_trip():
    F = NestedFamily(8, (((1, 2), (), (3,)), ((0,), (4, 5), (6, 7))), "CRDP", 2, 1)
    G = from_text(to_text(F))
    assert G == F
    assert digest(G) == digest(F)


@pytest.mark.parametrize("text", ["", "PACK n=3", "PACKING n=3 kind=CDP g=1 lambda=1 members=2\n0 1\n",
                                  "PACKING n=3 kind=CDP g=1 lambda=1 members=1\n0 7\n",
                                  "PACKING n=3 kind=CDP g=1 lambda=x members=1\n0\n"])
def test_text_format_errors(text):
    with pytest.raises(FormatError):
        from_text(text)


def test_certify_and_detect_tampering():
    F = certify(NestedFamily(7, (((0, 1, 3),),)), "test")
    assert is_certified(F)
    tampered = F.with_(members=(((0, 1, 2),),))
    assert not is_certified(tampered)
