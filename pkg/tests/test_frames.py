import numpy as np
import pytest

from zakfiber import ZakTransform, bracket, frame_check, riesz_check, \
    single_generator_report
from zakfiber.oracle import dense_frame_bounds, dense_riesz_bounds

from helpers import delta, random_complex, s1_action, s2_action, \
    star_generator


def test_bracket_known_values():
    a = s1_action()
    zk = ZakTransform(a)
    brk = bracket(zk, delta(8, 0), delta(8, 2))
    # [delta_0, delta_2](alpha) = conj(i^alpha)
    expected = np.array([1, -1j, -1, 1j], dtype=complex)
    assert np.allclose(brk.values, expected, atol=1e-12)
    assert brk.mean() == pytest.approx(a.space.inner(delta(8, 0), delta(8, 2)),
                                       abs=1e-12)


def test_bracket_mean_is_inner_product():
    rng = np.random.default_rng(73)
    for a in (s1_action(), s2_action()):
        zk = ZakTransform(a)
        f = random_complex(rng, a.space.size)
        g = random_complex(rng, a.space.size)
        assert bracket(zk, f, g).mean() == pytest.approx(a.space.inner(f, g),
                                                         abs=1e-12)


def test_frame_report_orthonormal_pair():
    zk = ZakTransform(s1_action())
    rep = frame_check(zk, [delta(8, 0), delta(8, 1)])
    assert rep.lower == pytest.approx(1.0, abs=1e-12)
    assert rep.upper == pytest.approx(1.0, abs=1e-12)
    assert rep.is_frame and rep.is_parseval and rep.is_riesz
    assert list(rep.dims) == [2, 2, 2, 2]
    assert rep.support.all()


def test_frame_report_dependent_pair():
    zk = ZakTransform(s1_action())
    gens = [delta(8, 0), delta(8, 0) + delta(8, 2)]
    rep = frame_check(zk, gens)
    # fiber spectra {5,3,1,3} as alpha runs over the dual group
    assert sorted(rep.smax2.tolist()) == pytest.approx([1.0, 3.0, 3.0, 5.0])
    assert rep.lower == pytest.approx(1.0, abs=1e-12)
    assert rep.upper == pytest.approx(5.0, abs=1e-12)
    assert rep.is_frame and not rep.is_parseval
    assert not rep.is_riesz
    assert list(rep.dims) == [1, 1, 1, 1]


def test_riesz_report_dependent_pair():
    zk = ZakTransform(s1_action())
    gens = [delta(8, 0), delta(8, 0) + delta(8, 2)]
    rep = riesz_check(zk, gens)
    assert rep.lower == pytest.approx(0.0, abs=1e-12)
    assert rep.upper == pytest.approx(5.0, abs=1e-12)
    assert not rep.is_riesz
    # the system still frames its span
    assert rep.is_frame


def test_weighted_space_reports():
    zk = ZakTransform(s2_action())
    rep = frame_check(zk, [delta(4, 0) + delta(4, 3)])
    assert rep.lower == pytest.approx(1.0, abs=1e-12)
    assert rep.upper == pytest.approx(9.0, abs=1e-12)
    rep = riesz_check(zk, [delta(4, 0) + delta(4, 3)])
    assert rep.lower == pytest.approx(1.0, abs=1e-12)
    assert rep.upper == pytest.approx(9.0, abs=1e-12)
    assert rep.is_riesz


def test_star_generator_parseval_but_not_riesz():
    zk = ZakTransform(s1_action())
    psi = star_generator()
    rep, brk = single_generator_report(zk, psi)
    assert list(rep.support.astype(int)) == [1, 0, 0, 0]
    assert rep.lower == pytest.approx(1.0, abs=1e-12)
    assert rep.upper == pytest.approx(1.0, abs=1e-12)
    assert rep.is_frame and rep.is_parseval
    assert not rep.is_riesz
    # bracket values are the fiber square norms here
    assert np.allclose(brk.values, [1.0, 0.0, 0.0, 0.0], atol=1e-12)


def test_single_generator_matches_frame_check():
    rng = np.random.default_rng(79)
    for a in (s1_action(), s2_action()):
        zk = ZakTransform(a)
        for _ in range(10):
            psi = random_complex(rng, a.space.size)
            rep1, _ = single_generator_report(zk, psi)
            rep2 = frame_check(zk, [psi])
            assert rep1.lower == pytest.approx(rep2.lower, rel=1e-12)
            assert rep1.upper == pytest.approx(rep2.upper, rel=1e-12)
            assert rep1.is_riesz == rep2.is_riesz
            assert list(rep1.dims) == list(rep2.dims)


def test_bounds_match_dense_oracle():
    rng = np.random.default_rng(83)
    for a in (s1_action(), s2_action()):
        zk = ZakTransform(a)
        for _ in range(10):
            n_gens = int(rng.integers(1, 4))
            gens = [random_complex(rng, a.space.size) for _ in range(n_gens)]
            rep = frame_check(zk, gens)
            A, B = dense_frame_bounds(a, gens)
            assert rep.lower == pytest.approx(A, rel=1e-8)
            assert rep.upper == pytest.approx(B, rel=1e-8)
            rep = riesz_check(zk, gens)
            Ar, Br, ok = dense_riesz_bounds(a, gens)
            assert rep.lower == pytest.approx(Ar, rel=1e-8, abs=1e-10)
            assert rep.upper == pytest.approx(Br, rel=1e-8)
            assert rep.is_riesz == ok


def test_degenerate_report():
    zk = ZakTransform(s1_action())
    rep = frame_check(zk, [np.zeros(8)])
    assert rep.degenerate
    assert rep.lower is None and rep.upper is None
    assert not rep.is_frame and not rep.is_riesz and not rep.is_parseval
    assert rep.is_bessel
    rep, _ = single_generator_report(zk, np.zeros(8))
    assert rep.degenerate
    assert rep.lower is None


def test_tolerance_controls_support():
    zk = ZakTransform(s1_action())
    psi = delta(8, 0) + 1e-6 * delta(8, 2)
    rep, _ = single_generator_report(zk, psi, tolerance=1e-10)
    assert rep.support.all()
    rep, _ = single_generator_report(zk, psi, tolerance=1e-3)
    # the perturbation only reaches 1e-12-scale square norms off alpha=0;
    # all four fibers keep mass ~1 from delta_0 though, so support is full
    assert rep.support.all()


def test_parallel_identical():
    rng = np.random.default_rng(89)
    zk = ZakTransform(s2_action())
    gens = [random_complex(rng, 4) for _ in range(2)]
    r1 = frame_check(zk, gens, workers=1)
    r4 = frame_check(zk, gens, workers=4)
    assert np.array_equal(r1.smax2, r4.smax2)
    assert r1.lower == r4.lower and r1.upper == r4.upper
