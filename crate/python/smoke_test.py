"""Smoke test for the fareygaps extension module.

Run after `pip install -e crates/farey-py --no-build-isolation`:

    python python/smoke_test.py
"""

import math

import fareygaps as fg


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    # Enumeration and counting.
    f5 = fg.enumerate(5)
    assert f5[:3] == [(1, 5), (1, 4), (1, 3)] and f5[-1] == (1, 1)
    assert fg.count(5) == len(f5) == 10
    assert fg.count(100, ell=3) + (fg.count(100) - fg.count(100, ell=3)) == fg.count(100)
    assert all(q % 2 == 1 for _, q in fg.enumerate(20, d=2))

    # Constants.
    approx(fg.zeta2(), math.pi**2 / 6)
    approx(fg.constant_c(1), 1 / fg.zeta2())
    approx(fg.k_tilde(2) * fg.zeta2(), 1 / 3)
    approx(fg.k_d(1), 1 / (2 * fg.zeta2()))

    # Closed forms vs the region-area oracle.
    approx(fg.big_a(4.0), 1 - (math.log(4) + 1) / 4)
    for xi in (0.5, 2.0, 5.0, 17.5):
        approx(fg.a_k(3, xi), fg.omega_area([3], 3, xi), tol=1e-8)

    # Exact threshold counts (order 4: gaps 1/12, 1/12, 1/6, ... over q q').
    assert fg.threshold_count(4, (16, 1)) == 5
    assert fg.threshold_count(4, (4, 3)) == 2
    n1, n2, max_skip = fg.case_counts(100, 3, (7, 2))
    assert n1 + n2 == fg.threshold_count(100, (7, 2), ell=3)
    assert max_skip <= 1

    # Empirical CDF against the limit law.
    cdf = fg.GapCdf.compute(300, ell=3)
    curve = fg.curve_ftilde(3)
    ks = fg.ks_distance(cdf, curve)
    assert 0 < ks < 0.05, ks
    assert cdf.eval_left(1e-9) == 0.0 and cdf.eval(1e9) == 1.0
    approx(fg.ftilde_cdf(3, fg.k_tilde(3) * 1e4), 1.0, tol=1e-6)

    # The d-coprime law at a prime power.
    cdf4 = fg.GapCdf.compute(300, d=4)
    ks4 = fg.ks_distance(cdf4, fg.curve_fd(4))
    assert 0 < ks4 < 0.05, ks4

    # Triangle map on exact rationals: T(1/3, 2/3) = (2/3, 1).
    assert fg.kappa((1, 3), (2, 3)) == 2
    assert fg.apply_t((1, 3), (2, 3)) == ((2, 3), (1, 1))

    # Words, residues, continuants.
    assert fg.enumerate_words(1, 2) == [[1]]
    assert all(w[0] * w[1] - 1 == 5 for w in fg.enumerate_words(5, 3))
    assert fg.residue_set(2, [3]) == [(1, 2)]
    assert fg.continuant("regular", [1, 2, 3]) == 10
    assert fg.continuant("farey", [4, 2]) == 7
    checked, violations = fg.verify_identity_32(60, 4)
    assert checked > 0 and violations == 0

    # Runs: d = 6 is sharp at Q = 4.
    start, denoms = fg.max_run(6, 4)
    assert denoms == [4, 3, 2, 3, 4]
    emp, att_q, bound, source = fg.certify_l(6, 50)
    assert (emp, att_q, bound) == (5, 4, 5), (emp, att_q, bound)

    print("smoke test: all assertions passed")


if __name__ == "__main__":
    main()
