import json

import mpmath
import pytest
from mpmath import mp

from zdecheck.characters import DirichletCharacter, enumerate_primitive
from zdecheck.zeros import (IncompleteZeroData, build_corpus, count_zeros_rectangle, disc_count,
                            find_critical_zeros, rvm_count_window, zeros_to_jsonl)

ZETA = DirichletCharacter(1, ())
CHI4 = enumerate_primitive(4)[0]


@pytest.fixture(scope="module")
def small_corpus():
    return build_corpus(8, 20)


def test_rectangle_counts_for_zeta():
    assert count_zeros_rectangle(ZETA, 0.0, 10).count == 0
    assert count_zeros_rectangle(ZETA, 0.0, 20).count == 2


def test_zeta_zeros_to_height_30():
    zs = find_critical_zeros(ZETA, 30)
    assert zs.complete and len(zs.zeros) == 6
    for k in (1, 2, 3):
        g = float(mp.im(mpmath.zetazero(k)))
        assert any(z.gamma.contains(g) for z in zs.zeros)
        assert any(z.gamma.contains(-g) for z in zs.zeros)
    for z in zs.zeros:
        assert z.on_critical_line and z.beta.contains(0.5)


def test_zeta_empty_below_ten():
    zs = find_critical_zeros(ZETA, 10)
    assert zs.complete and zs.zeros == ()


def test_lowest_zero_mod_4():
    zs = find_critical_zeros(CHI4, 10)
    low = min(abs(float(z.gamma.mid)) for z in zs.zeros)
    assert low == pytest.approx(6.0209, abs=1e-4)


def test_disc_counts():
    zs = find_critical_zeros(ZETA, 30)
    c = (mp.mpf(1), mp.mpf("14.134725"))
    assert disc_count(ZETA, 0.52, c, zs)[0] >= 1
    assert disc_count(ZETA, 1e-3, c, zs)[0] == 0
    with pytest.raises(IncompleteZeroData):
        disc_count(ZETA, 0.5, (mp.mpf(1), mp.mpf(29.9)), zs)


def test_corpus_counts(small_corpus):
    assert small_corpus.complete
    assert len(small_corpus.sets) == sum(len(enumerate_primitive(q)) for q in range(1, 9))
    # all zeros at desk scale lie on the critical line, so strict counts above 1/2 vanish
    assert small_corpus.count(0.5, 8, 20) == 0
    total = sum(len(zs.zeros) for zs in small_corpus.sets)
    assert small_corpus.count(0.0, 8, 20) == total
    assert small_corpus.count(0.0, 8) <= total
    with pytest.raises(IncompleteZeroData):
        small_corpus.count(0.0, 9)
    with pytest.raises(IncompleteZeroData):
        small_corpus.count(0.0, 8, 21)


def test_rectangle_agrees_with_list(small_corpus):
    for zs in small_corpus.sets:
        assert zs.rectangle.count == len(zs.zeros)


def test_window_contains_counts(small_corpus):
    for zs in small_corpus.sets:
        if zs.character.is_trivial:
            continue
        main, err = rvm_count_window(zs.character, 20)
        n = sum(1 for z in zs.zeros if abs(float(z.gamma.mid)) <= 20)
        assert abs(n - float(main.mid)) <= float(err.hi)


def test_jsonl_export(small_corpus):
    lines = zeros_to_jsonl(small_corpus.sets[:3]).strip().splitlines()
    recs = [json.loads(x) for x in lines]
    assert all({"q", "char_index", "beta_lo", "beta_hi", "gamma_lo", "gamma_hi"} <= r.keys() for r in recs)


def test_desk_scale_guard():
    with pytest.raises(ValueError):
        find_critical_zeros(ZETA, 101)
