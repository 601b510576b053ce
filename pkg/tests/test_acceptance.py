"""Acceptance run: one test and one printed pass/fail line per criterion.

Run with `pytest tests/test_acceptance.py -s` to see the lines. Every
tolerance is stated inline; random inputs use fixed seeds so the run is
reproducible bit for bit.
"""

import numpy as np

import maxcorr as mc


def _line(num, ok, label, detail):
    verdict = "PASS" if ok else "FAIL"
    print(f"criterion {num:02d} {verdict} {label} ({detail})")
    return ok


def product_mixture(seed, terms=4):
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    rho = np.zeros((4, 4), dtype=complex)
    for w in weights:
        a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        v = np.kron(a, b)
        rho += w * np.outer(v, v.conj())
    return mc.BipartiteState(2, 2, (rho + rho.conj().T) / 2.0)


def test_01_binary_symmetric_grid():
    worst = 0.0
    for eps in np.arange(0.0, 0.51, 0.1):
        mu = mc.mu_classical(mc.classical_bsc(float(eps))).mu
        worst = max(worst, abs(mu - (1.0 - 2.0 * eps)))
    assert _line(1, worst <= 1e-10, "classical flip family mu = 1 - 2 eps", f"worst err {worst:.2e}")


def test_02_noisy_bell_grid():
    worst = 0.0
    for eps in np.arange(0.0, 1.01, 0.1):
        mu = mc.mu_schmidt(mc.isotropic(float(eps))).mu
        worst = max(worst, abs(mu - (1.0 - eps)))
    assert _line(2, worst <= 1e-8, "noisy Bell family mu = 1 - eps", f"worst err {worst:.2e}")


def test_03_leading_coefficient_is_one():
    dims = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 2), (3, 4), (4, 4)]
    worst = 0.0
    for i in range(200):
        da, db = dims[i % len(dims)]
        rank = (i % (da * db)) + 1
        st = mc.random_density(da, db, rank=rank, seed=i)
        worst = max(worst, mc.mu_schmidt(st).lambda1_deviation)
    assert _line(3, worst <= 1e-7, "leading coefficient fixed at 1 (200 states)", f"worst dev {worst:.2e}")


def test_04_two_by_two_determinant_identity():
    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(100):
        p = rng.dirichlet(np.ones(4)).reshape(2, 2)
        rep = mc.mu_classical(mc.ClassicalJoint(p))
        row, col = p.sum(axis=1), p.sum(axis=0)
        tilde = p / np.sqrt(np.outer(row, col))
        worst = max(worst, abs(abs(np.linalg.det(tilde)) - rep.mu))
    assert _line(4, worst <= 1e-10, "2x2 joints: mu = |det| of normalized table", f"worst gap {worst:.2e}")


def test_05_tensor_products_take_the_max():
    worst = 0.0
    for seed in range(50):
        r = mc.random_density(2, 2, seed=2 * seed)
        s = mc.random_density(2, 2, seed=2 * seed + 1)
        mu_t = mc.mu_schmidt(mc.tensor_bipartite(r, s)).mu
        mu_max = max(mc.mu_schmidt(r).mu, mc.mu_schmidt(s).mu)
        worst = max(worst, abs(mu_t - mu_max))
    assert _line(5, worst <= 1e-7, "tensor pairs: mu(r x s) = max (50 pairs)", f"worst gap {worst:.2e}")


def test_06_local_channels_never_increase_mu():
    dims = [(2, 2), (2, 3), (3, 2), (3, 3)]
    worst = -np.inf
    for i in range(100):
        da, db = dims[i % len(dims)]
        st = mc.random_density(da, db, seed=600 + i)
        side = "A" if i % 2 == 0 else "B"
        d_in = da if side == "A" else db
        d_out = 2 + (i % 2)
        rank = max(1 + (i % 3), -(-d_in // d_out))
        ch = mc.random_channel(d_in, d_out, kraus_rank=rank, seed=i, side=side)
        before = mc.mu_schmidt(st).mu
        after = mc.mu_schmidt(mc.apply_local(st, ch)).mu
        worst = max(worst, after - before)
    assert _line(6, worst <= 1e-7, "local channels never raise mu (100 pairs)", f"worst increase {worst:.2e}")


def test_07_product_and_pure_entangled_extremes():
    worst_product = 0.0
    worst_pure = 1.0
    for seed in range(50):
        worst_product = max(worst_product, mc.mu_schmidt(mc.random_product(2, 2, seed=seed)).mu)
        worst_pure = min(worst_pure, mc.mu_schmidt(mc.random_pure(2, 2, seed=seed)).mu)
    ok = worst_product <= 1e-8 and worst_pure >= 1.0 - 1e-8
    assert _line(7, ok, "products at 0, entangled pures at 1 (50 + 50)", f"max {worst_product:.2e}, min {worst_pure:.10f}")


def test_08_variational_oracle_agreement():
    dims = [(2, 2), (2, 3), (3, 2), (3, 3)]
    low, high = 0.0, 0.0
    for i in range(30):
        da, db = dims[i % len(dims)]
        st = mc.random_density(da, db, seed=800 + i)
        mu = mc.mu_schmidt(st).mu
        val = mc.mu_variational(st, restarts=8, seed=i).value
        low = max(low, mu - val)
        high = max(high, val - mu)
    ok = low <= 1e-4 and high <= 1e-6
    assert _line(8, ok, "oracle within [mu - 1e-4, mu + 1e-6] (30 states)", f"below {low:.2e}, above {high:.2e}")


def test_09_fidelity_lower_bound():
    worst = -np.inf
    for seed in range(100):
        st = mc.random_density(2, 2, seed=900 + seed)
        bound = mc.fidelity_mu_lower_bound(st)
        worst = max(worst, bound - mc.mu_schmidt(st).mu)
    sharp = 0.0
    for eps in (0.0, 0.2, 0.4, 0.6):
        st = mc.isotropic(eps)
        sharp = max(sharp, abs(mc.fidelity_mu_lower_bound(st) - (1.0 - 1.5 * eps)))
    ok = worst <= 1e-8 and sharp <= 1e-12
    assert _line(9, ok, "fidelity bound below mu, sharp on the family", f"worst excess {worst:.2e}, sharpness {sharp:.2e}")


def test_10_family_bracket_and_construction():
    ok = True
    detail = []
    for eps in (2.0 / 3.0, 0.75, 0.9, 1.0):
        dec = mc.separable_iso_decomposition(eps)
        ok = ok and mc.mu_ent_upper(dec) <= 1e-8 and dec.residual() <= 1e-10
    detail.append("construction <= 1e-8")
    worst_floor = np.inf
    for i, eps in enumerate((0.1, 0.2, 0.3, 0.4, 0.5, 0.6)):
        st = mc.isotropic(eps)
        lower = mc.fidelity_mu_lower_bound(st)
        upper = mc.mu_schmidt(st).mu
        ok = ok and abs(lower - (1.0 - 1.5 * eps)) < 1e-12
        ok = ok and abs(upper - (1.0 - eps)) < 1e-10
        found = mc.mu_ent_upper(mc.decomposition_search(st, k=8, restarts=2, iters=150, seed=i))
        worst_floor = min(worst_floor, found - (1.0 - 1.5 * eps))
        ok = ok and found >= 1.0 - 1.5 * eps - 1e-6
    detail.append(f"search floor margin {worst_floor:.2e}")
    assert _line(10, ok, "noisy Bell bracket with certified ends", "; ".join(detail))


def test_11_partial_transpose_family_spectrum():
    worst = 0.0
    signs_ok = True
    for eps in np.arange(0.0, 1.01, 0.1):
        rep = mc.ppt_check(mc.isotropic(float(eps)))
        worst = max(worst, abs(rep.min_eigenvalue - (3.0 * eps - 2.0) / 4.0))
        signs_ok = signs_ok and (rep.is_ppt == (eps >= 2.0 / 3.0 - 1e-9))
    ok = worst <= 1e-10 and signs_ok
    assert _line(11, ok, "partial transpose eigenvalue (3 eps - 2)/4", f"worst err {worst:.2e}")


def test_12_twirl_equals_group_average():
    worst = 0.0
    for seed in range(50):
        st = mc.random_density(2, 2, seed=1200 + seed)
        gap = np.max(np.abs(mc.twirl_exact(st).rho - mc.twirl_clifford_average(st).rho))
        worst = max(worst, float(gap))
    assert _line(12, worst <= 1e-10, "closed-form twirl = 24-element average (50 states)", f"worst gap {worst:.2e}")


def test_13_lower_semicontinuity_sequence():
    worst = 0.0
    for n in (2, 10, 100, 10**4):
        p = np.array([[1.0 - 1.0 / n, 0.0], [0.0, 1.0 / n]])
        worst = max(worst, abs(mc.mu_classical(mc.ClassicalJoint(p)).mu - 1.0))
    limit = mc.mu_classical(mc.ClassicalJoint(np.array([[1.0, 0.0], [0.0, 0.0]]))).mu
    ok = worst <= 1e-9 and limit == 0.0
    assert _line(13, ok, "mu = 1 along the sequence, 0 at its limit", f"worst dev {worst:.2e}, limit {limit}")


def test_14_search_on_known_separables():
    hits = 0
    certified = 0
    for i in range(20):
        st = product_mixture(1000 + i)
        dec = mc.decomposition_search(st, k=8, restarts=16, seed=i)
        bound = mc.mu_ent_upper(dec)  # raises if the certificate is not feasible
        if bound <= 0.05:
            hits += 1
        if dec.residual() <= 1e-8 and all(mc.validate(c).ok for c in dec.components):
            certified += 1
    ok = hits >= 16 and certified == 20
    assert _line(14, ok, "search reaches <= 0.05 on separables", f"{hits}/20 hits, {certified}/20 certified")
