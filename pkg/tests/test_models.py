import numpy as np
import pytest

from coorbit.groups import AssumptionViolation, half_weight, random_unitary
from coorbit.models import (
    MODEL_IDS,
    ConeDistance,
    LocusSample,
    ModelPoint,
    TorusModel,
    build_model,
    find_locus_point,
    hermitian_inner,
    riemann_inner,
    simplex_quadrature,
    symplectic_inner,
    unit_point,
)

from oracles import fiber_phase_moment


def t3_cp3_model():
    # rank-3 torus on CP^3; used for the multi-normal-vector invariants
    return TorusModel("t3-cp3", [[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]],
                      (2.0, 1.0, 1.0))


def test_catalog_builds_and_configs():
    for mid in MODEL_IDS:
        model = build_model(mid)
        cfg = model.config()
        assert cfg["id"] == mid
        assert model.min_moment_norm > 1e-3


def test_model_point_validation():
    ModelPoint(np.array([1.0, 0.0], dtype=complex))
    with pytest.raises(ValueError):
        ModelPoint(np.array([1.0, 1.0], dtype=complex))


def test_moment_map_fixed_points_give_lift_weights():
    model = build_model("s1-cp1-w12")
    assert np.isclose(model.moment_map(unit_point([1, 0]))[0], 1.0)
    assert np.isclose(model.moment_map(unit_point([0, 1]))[0], 2.0)
    model2 = build_model("s1-cp2-w123")
    for j, w in enumerate((1.0, 2.0, 3.0)):
        e = np.zeros(3, dtype=complex)
        e[j] = 1.0
        assert np.isclose(model2.moment_map(e)[0], w)


def test_moment_map_finite_difference_oracle():
    rng = np.random.default_rng(0)
    for mid in MODEL_IDS:
        model = build_model(mid)
        for _ in range(3):
            x = model.random_point(rng)
            xi = rng.standard_normal(model.group.dim)
            fd = fiber_phase_moment(model, x, xi)
            assert np.isclose(model.moment_map(x) @ xi, fd, atol=1e-5)


def test_su2_moment_norm_constant():
    # Duistermaat-Heckman consistency: lambda(m) = 1/2 everywhere
    model = build_model("su2-cp1")
    rng = np.random.default_rng(1)
    for _ in range(20):
        x = model.random_point(rng)
        assert np.isclose(model.moment_norm(x), 1 / np.sqrt(2), rtol=1e-12)


def test_su2_duistermaat_heckman_consistency():
    # the moment image of (CP^1, 2 omega) is a single coadjoint orbit
    # whose symplectic volume must equal int_M 2 omega = 2 pi; this pins
    # lambda(m) = 1/2 independently of the kernel checks
    from coorbit.characters import orbit_volume
    model = build_model("su2-cp1")
    nu = model.default_nu
    s = model.locus_decompose(nu, model.default_locus_point(nu))
    q_dominant = s.sigma * nu.coords     # dominant coordinates of Phi(m)
    vol_orbit = orbit_volume(model.group, model.metric, q_dominant)
    assert np.isclose(vol_orbit, 2 * np.pi * model.volume_m() / np.pi * 1.0, rtol=1e-12)
    assert np.isclose(vol_orbit, 2 * np.pi, rtol=1e-12)


def test_moment_equivariance():
    rng = np.random.default_rng(2)
    from coorbit.groups import coadjoint_action
    for mid in ("su2-cp1", "u2-cp2"):
        model = build_model(mid)
        for _ in range(10):
            x = model.random_point(rng)
            g = random_unitary(model.group.n, rng, special=(model.group.kind == "su"))
            lhs = model.moment_map(model.unitary(g) @ x)
            rhs = coadjoint_action(model.group, g, model.moment_map(x))
            assert np.allclose(lhs, rhs, atol=1e-10)
    model = build_model("t2-cp2")
    x = model.random_point(rng)
    theta = rng.uniform(0, 2 * np.pi, 2)
    assert np.allclose(model.moment_map(model.unitary(theta) @ x),
                       model.moment_map(x), atol=1e-12)


def test_hamilton_condition_finite_difference():
    # 2 omega(xi_M, u) = d<Phi, xi>(u): pins the Hamiltonian convention
    rng = np.random.default_rng(3)
    for mid in MODEL_IDS:
        model = build_model(mid)
        for _ in range(4):
            x = model.random_point(rng)
            xi = rng.standard_normal(model.group.dim)
            u = model.horizontal(x, rng.standard_normal(model.ambient_dim)
                                 + 1j * rng.standard_normal(model.ambient_dim))
            u /= np.linalg.norm(u)
            lhs = 2 * symplectic_inner(model.val(x, xi), u)
            h = 1e-6
            fp = model.moment_map(model.displace(x, 0.0, h * u)) @ xi
            fm = model.moment_map(model.displace(x, 0.0, -h * u)) @ xi
            rhs = (fp - fm) / (2 * h)
            assert abs(lhs - rhs) <= 1e-5 * max(1.0, abs(lhs))


def test_val_fixed_point_and_nonvanishing():
    model = build_model("s1-cp1-w12")
    assert np.linalg.norm(model.val(unit_point([1, 0]), [1.0])) < 1e-14
    equator = unit_point([1, 1])
    assert np.linalg.norm(model.val(equator, [1.0])) > 0.1


def test_local_freeness_on_locus():
    # smallest singular value of val restricted to the annihilator of Phi
    from scipy.linalg import null_space
    for mid in MODEL_IDS:
        model = build_model(mid)
        nu = model.default_nu
        x = model.default_locus_point(nu)
        phi = model.moment_map(x)
        ann = null_space(phi[None, :])
        if ann.shape[1] == 0:
            continue  # the annihilator is trivial (d_G = 1); vacuously free
        vm = model.val_matrix(x) @ ann
        real = np.concatenate([vm.real, vm.imag], axis=0)
        sv = np.linalg.svd(real, compute_uv=False)
        assert sv[-1] > 1e-3, mid


def test_locus_decompose_torus():
    model = build_model("s1-cp1-w12")
    nu = model.default_nu
    x = model.default_locus_point(nu)
    s = model.locus_decompose(nu, x)
    assert isinstance(s, LocusSample)
    assert np.isclose(s.sigma, model.metric.norm_covector_full(s.phi)
                      / model.metric.norm_covector(nu.coords))
    assert np.allclose(s.h, 0.0)
    assert s.residual < 1e-12


def test_locus_decompose_su2_sigma():
    model = build_model("su2-cp1")
    rng = np.random.default_rng(4)
    for nu_val in (1.0, 3.0):
        nu = half_weight(model.group, nu_val)
        for _ in range(5):
            x = model.random_point(rng)
            s = model.locus_decompose(nu, x)
            assert isinstance(s, LocusSample)
            assert np.isclose(s.sigma, 1.0 / nu_val, rtol=1e-10)


def test_locus_sample_invariants():
    from coorbit.groups import algebra_matrix
    for mid in ("su2-cp1", "u2-cp2", "t2-cp2"):
        model = build_model(mid)
        nu = model.default_nu
        x = model.default_locus_point(nu)
        s = model.locus_decompose(nu, x)
        group = model.group
        metric = model.metric
        # Phi = sigma Coad_h nu
        if group.is_matrix_group:
            nu_sharp = algebra_matrix(group, np.concatenate(
                [metric.sharp(nu.coords), np.zeros(group.dim - group.rank)]))
            moved = s.h @ nu_sharp @ s.h.conj().T
            phi_sharp = algebra_matrix(group, metric.sharp_full(s.phi))
            resid = phi_sharp - s.sigma * moved
            assert np.sqrt(metric.inner_matrices(resid, resid)) < 1e-10
            # [eta, Phi^phi] = 0 for eta in t_m
            for eta in s.t_basis:
                em = algebra_matrix(group, eta)
                comm = em @ phi_sharp - phi_sharp @ em
                assert np.sqrt(metric.inner_matrices(comm, comm)) < 1e-10
        # <Phi, eta> = 0 for eta in t'_m, and phi-orthonormality
        for i, eta in enumerate(s.t_prime_basis):
            assert abs(s.phi @ eta) < 1e-10
            for j, eta2 in enumerate(s.t_prime_basis):
                ip = metric.inner(eta, eta2)
                assert abs(ip - (1.0 if i == j else 0.0)) < 1e-10


def test_locus_decompose_off_cone_distance():
    model = build_model("t2-cp2")
    nu = model.default_nu
    x = model.point(np.sqrt([0.25, 0.45, 0.30]))
    out = model.locus_decompose(nu, x)
    assert isinstance(out, ConeDistance)
    assert out.distance > 0.05
    model2 = build_model("u2-cp2")
    out2 = model2.locus_decompose(model2.default_nu,
                                  model2.point(np.sqrt([0.5, 0.3, 0.2])))
    assert isinstance(out2, ConeDistance) and out2.distance > 0.01


def test_model_construction_rejects_vanishing_moment():
    with pytest.raises(AssumptionViolation):
        TorusModel("bad", [[0, 1]], (1.0,))  # Phi([1:0]) = 0


def test_d_phi():
    # rank 1: empty matrix, scalar 1
    model = build_model("su2-cp1")
    nu = model.default_nu
    s = model.locus_decompose(nu, model.default_locus_point(nu))
    D, scalar = model.d_phi(nu, s)
    assert D.shape == (0, 0) and scalar == 1.0
    # u2: single t' direction, scalar = ||eta_M||
    model = build_model("u2-cp2")
    nu = model.default_nu
    s = model.locus_decompose(nu, model.default_locus_point(nu))
    D, scalar = model.d_phi(nu, s)
    eta = s.t_prime_basis[0]
    assert np.isclose(scalar, np.linalg.norm(model.val(s.x, eta)), rtol=1e-12)


def test_d_phi_basis_invariance():
    # the sqrt-determinant is independent of the phi-orthonormal basis
    model = t3_cp3_model()
    nu = model.default_nu
    x = model.point(np.sqrt([0.5, 0.2, 0.2, 0.1]))
    s = model.locus_decompose(nu, x)
    assert isinstance(s, LocusSample)
    _, scalar = model.d_phi(nu, s)
    # rotate the 2-dim t' basis by assorted angles
    b1, b2 = s.t_prime_basis
    for ang in (0.3, 1.1, 2.0):
        r1 = np.cos(ang) * b1 + np.sin(ang) * b2
        r2 = -np.sin(ang) * b1 + np.cos(ang) * b2
        rotated = LocusSample(model, nu, s.x, s.phi, s.sigma, s.h,
                              s.t_basis, (r1, r2), s.residual)
        _, scalar2 = model.d_phi(nu, rotated)
        assert np.isclose(scalar2, scalar, rtol=1e-12)


def test_normal_space_dimensions():
    for mid, expected in (("s1-cp1-w12", 0), ("su2-cp1", 0),
                          ("t2-cp2", 1), ("u2-cp2", 1)):
        model = build_model(mid)
        nu = model.default_nu
        s = model.locus_decompose(nu, model.default_locus_point(nu))
        assert len(model.normal_space(nu, s)) == expected


def test_normal_space_orthogonal_to_locus_tangent():
    # finite-difference tangent vectors of M_O vs the computed normals
    for mid in ("t2-cp2", "u2-cp2"):
        model = build_model(mid)
        nu = model.default_nu
        curve = model.locus_simplex_curve(nu)
        h = 1e-5
        for s_par in (0.35, 0.6):
            x = model.point(np.sqrt(curve(s_par)))
            samp = model.locus_decompose(nu, x)
            n = model.normal_space(nu, samp)[0]
            # tangents: the curve direction and the torus orbit directions
            tangents = [model.horizontal(
                x, (np.sqrt(curve(s_par + h)) - np.sqrt(curve(s_par - h))) / (2 * h))]
            for j in range(model.group.rank):
                tangents.append(model.val(x, np.eye(model.group.dim)[j]))
            for t in tangents:
                cosine = abs(riemann_inner(n, t)) / (np.linalg.norm(n) * np.linalg.norm(t))
                assert cosine < 1e-4, mid


def test_normal_vectors_symplectically_involutive():
    # omega(v1, v2) = 0 for normal vectors (needs rank >= 3 for two of them)
    model = t3_cp3_model()
    nu = model.default_nu
    x = model.point(np.sqrt([0.5, 0.2, 0.2, 0.1]))
    s = model.locus_decompose(nu, x)
    normals = model.normal_space(nu, s)
    assert len(normals) == 2
    assert abs(symplectic_inner(normals[0], normals[1])) < 1e-12


def test_normal_space_inside_J_of_orbit_directions():
    for mid in ("t2-cp2", "u2-cp2"):
        model = build_model(mid)
        nu = model.default_nu
        s = model.locus_decompose(nu, model.default_locus_point(nu))
        n = model.normal_space(nu, s)[0]
        vm = model.val_matrix(s.x)
        J_orbit = 1j * vm
        stack = np.concatenate([J_orbit.real, J_orbit.imag], axis=0)
        target = np.concatenate([n.real, n.imag])
        coef, res, *_ = np.linalg.lstsq(stack, target, rcond=None)
        assert np.linalg.norm(stack @ coef - target) < 1e-10


def test_w_space_dimensions_and_orthogonality():
    model = build_model("s1-cp1-w12")
    x = model.default_locus_point()
    assert len(model.w_space(x)) == 0          # group + J directions fill T_mM
    model2 = build_model("s1-cp2-w123")
    x2 = model2.default_locus_point()
    wb = model2.w_space(x2)
    assert len(wb) == 1                        # complex one-dimensional
    # orthogonal to the orbit directions in the Hermitian sense
    v = model2.val(x2, [1.0])
    assert abs(hermitian_inner(wb[0], v)) < 1e-12
    # full-group fixed point: w space is all of T_mM
    e1 = unit_point([1, 0])
    assert len(build_model("s1-cp1-w12").w_space(e1)) == 1


def test_w_space_meets_normal_space_trivially():
    model = build_model("t2-cp2")
    nu = model.default_nu
    s = model.locus_decompose(nu, model.default_locus_point(nu))
    n = model.normal_space(nu, s)[0]
    for w in model.w_space(s.x):
        cosine = abs(hermitian_inner(n, w)) / (np.linalg.norm(n) * np.linalg.norm(w))
        assert cosine < np.cos(1e-3)


def test_displace_chart_properties():
    model = build_model("s1-cp2-w123")
    rng = np.random.default_rng(5)
    x = model.random_point(rng)
    assert np.allclose(model.displace(x, 0.0, np.zeros(3)), x)
    v = model.horizontal(x, rng.standard_normal(3) + 1j * rng.standard_normal(3))
    v *= 0.3 / np.linalg.norm(v)
    # alpha-horizontality of the theta = 0 curve at tau = 0
    h = 1e-7
    vel = (model.displace(x, 0.0, h * v) - model.displace(x, 0.0, -h * v)) / (2 * h)
    alpha = np.imag(np.vdot(x, vel))
    assert abs(alpha) < 1e-8
    # theta-translation is fiber rotation
    assert np.allclose(model.displace(x, 0.7, v),
                       np.exp(0.7j) * model.displace(x, 0.0, v))
    with pytest.raises(ValueError):
        model.displace(x, 0.0, 5.0 * v / np.linalg.norm(v))
    with pytest.raises(ValueError):
        model.displace(x, 0.0, x * 0.1)   # not horizontal


def test_find_locus_point_and_empty_locus():
    model = build_model("t2-cp2")
    sample = find_locus_point(model, (2.0, 1.0), seeds=60)
    assert isinstance(sample, LocusSample)
    assert sample.residual < 1e-8
    with pytest.raises(AssumptionViolation):
        find_locus_point(model, (2.0, -1.0), seeds=40)


def test_simplex_quadrature_moments():
    # exact Beta-integral moments on the simplex
    from math import factorial
    for d in (1, 2, 3):
        nodes, w = simplex_quadrature(d, 16)
        assert np.isclose(w.sum(), 1.0 / factorial(d), rtol=1e-13)
        alpha = [2] + [1] * d
        vals = np.prod(nodes ** np.array(alpha), axis=1)
        exact = np.prod([factorial(a) for a in alpha]) / factorial(sum(alpha) + d)
        assert np.isclose(vals @ w, exact, rtol=1e-12)


def test_unitary_lift_commutes_with_fiber_rotation():
    rng = np.random.default_rng(6)
    for mid in MODEL_IDS:
        model = build_model(mid)
        g = (rng.uniform(0, 2 * np.pi, model.group.rank) if model.group.kind == "torus"
             else random_unitary(model.group.n, rng, special=(model.group.kind == "su")))
        U = model.unitary(g)
        assert np.allclose(U @ U.conj().T, np.eye(model.ambient_dim), atol=1e-12)
        x = model.random_point(rng)
        assert np.allclose(U @ (1j * x), 1j * (U @ x))
