"""Prediction side of the scaling theorems: the universal Gaussian
exponent, the leading coefficient on the locus, near-diagonal kernel
predictions, the dimension-growth coefficient, and the stationary-phase
Hessian blocks.

Only the leading term of the near-diagonal expansion is computed; the
k^{-1/2} correction ladder enters the package solely through fitted
convergence orders (the diagonal error decays like 1/k because the
odd-order terms vanish at zero displacement by parity).
"""

import json
from dataclasses import dataclass, asdict

import numpy as np

from .characters import orbit_volume
from .groups import (
    AssumptionViolation,
    HalfWeight,
    ad_on_cartan_complement,
    cartan_matrix_of,
    group_volumes,
    half_weight,
)
from .models import (
    LocusSample,
    hermitian_inner,
    riemann_inner,
    simplex_quadrature,
)


def gaussian_pair_exponent(u, v):
    """psi_2(u, v) = -i omega_0(u, v) - ||u - v||^2 / 2.

    u, v are tangent vectors in the unitary chart (complex vectors with
    the standard Hermitian structure, omega_0(u, v) = -Im<u, v>).
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    omega = -hermitian_inner(u, v).imag
    return -1j * omega - 0.5 * float(np.linalg.norm(u - v) ** 2)


def leading_coefficient(model, nu, sample):
    """The positive leading factor of the near-diagonal expansion at m.

    Assembled from its definition:

        2^{1 + (r-1)/2} pi / (||Phi(m)|| D(m))
        * vol(O_{nu_u})^2 / |det S_{nu_u^phi}|
        * vol(T) / vol(G)^2,

    every factor coming from the group/character layer.  The result is
    independent of the metric scale; that invariance is an acceptance
    criterion, not an assumption.
    """
    group, metric = model.group, model.metric
    nu = nu if isinstance(nu, HalfWeight) else half_weight(group, nu)
    if not isinstance(sample, LocusSample):
        raise AssumptionViolation("leading coefficient needs an on-locus sample")
    r = group.rank
    phi_norm = metric.norm_covector_full(sample.phi)
    _, dscalar = model.d_phi(nu, sample)
    nu_unit = metric.unit_covector(nu.coords)
    vol_orbit_unit = orbit_volume(group, metric, nu_unit)
    _, det_s = ad_on_cartan_complement(metric, metric.unit_sharp(nu.coords))
    if det_s == 0:
        raise AssumptionViolation("restricted adjoint operator is singular (nu not regular)")
    vol_g, vol_t = group_volumes(metric)
    if phi_norm == 0 or dscalar == 0:
        raise AssumptionViolation("vanishing factor in the leading coefficient")
    return (2.0 ** (1 + (r - 1) / 2) * np.pi / (phi_norm * dscalar)
            * vol_orbit_unit ** 2 / det_s * vol_t / vol_g ** 2)


@dataclass
class Prediction:
    """Leading-order prediction for one near-diagonal kernel sample,
    with the sample point, displacements and ingredient breakdown."""

    model_id: str
    nu: tuple
    k: int
    x: np.ndarray
    v1: np.ndarray
    w1: np.ndarray
    v2: np.ndarray
    w2: np.ndarray
    leading_coefficient: float
    sigma: float
    power: float
    prefactor: float
    gaussian_factor: complex
    value: complex

    def to_json(self):
        d = asdict(self)
        for key in ("x", "v1", "w1", "v2", "w2"):
            vec = getattr(self, key)
            d[key] = [[z.real, z.imag] for z in np.asarray(vec, dtype=complex)]
        d["gaussian_factor"] = [self.gaussian_factor.real, self.gaussian_factor.imag]
        d["value"] = [self.value.real, self.value.imag]
        return json.dumps(d, sort_keys=True)


def _real_span_residual(vec, basis):
    """Distance of vec from the real span of the basis vectors."""
    vec = np.asarray(vec, dtype=complex)
    if np.linalg.norm(vec) == 0:
        return 0.0
    if not basis:
        return float(np.linalg.norm(vec))
    B = np.stack([np.asarray(b, dtype=complex) for b in basis], axis=1)
    Br = np.concatenate([B.real, B.imag], axis=0)
    vr = np.concatenate([vec.real, vec.imag])
    coef, *_ = np.linalg.lstsq(Br, vr, rcond=None)
    return float(np.linalg.norm(vr - Br @ coef))


def _complex_span_residual(vec, basis):
    """Distance of vec from the complex span of the basis vectors."""
    vec = np.asarray(vec, dtype=complex)
    if np.linalg.norm(vec) == 0:
        return 0.0
    if not basis:
        return float(np.linalg.norm(vec))
    B = np.stack([np.asarray(b, dtype=complex) for b in basis], axis=1)
    coef, *_ = np.linalg.lstsq(B, vec, rcond=None)
    return float(np.linalg.norm(vec - B @ coef))


def predict_near_diagonal(model, nu, sample, k, v1=None, w1=None, v2=None, w2=None):
    """Leading term of Pi^mu_{k nu}(x + (v1+w1)/sqrt(k), x + (v2+w2)/sqrt(k)).

    v_j must lie in the locus normal space and w_j in the
    h-orthocomplement of the orbit directions (residual tolerance 1e-8);
    real-subspace membership is checked, not assumed.  Displacement
    norms are guarded by the admissible-radius condition ||.|| <= 3 k^{1/6}.
    """
    group = model.group
    nu = nu if isinstance(nu, HalfWeight) else half_weight(group, nu)
    if not isinstance(sample, LocusSample):
        raise AssumptionViolation("near-diagonal prediction needs an on-locus sample")
    zero = np.zeros(model.ambient_dim, dtype=complex)
    v1 = zero if v1 is None else np.asarray(v1, dtype=complex)
    v2 = zero if v2 is None else np.asarray(v2, dtype=complex)
    w1 = zero if w1 is None else np.asarray(w1, dtype=complex)
    w2 = zero if w2 is None else np.asarray(w2, dtype=complex)

    normal = model.normal_space(nu, sample)
    wbasis = model.w_space(sample.x)
    for v in (v1, v2):
        if _real_span_residual(v, normal) > 1e-8 * max(1.0, np.linalg.norm(v)):
            raise AssumptionViolation("v displacement is not normal to the locus")
    for w in (w1, w2):
        if _complex_span_residual(w, wbasis) > 1e-8 * max(1.0, np.linalg.norm(w)):
            raise AssumptionViolation("w displacement is not h-orthogonal to the orbit")
    bound = 3.0 * k ** (1.0 / 6.0)
    for vec in (v1, v2, w1, w2):
        if np.linalg.norm(vec) > bound:
            raise AssumptionViolation("displacement exceeds the admissible radius")

    sigma = sample.sigma
    psi = leading_coefficient(model, nu, sample)
    power = model.d + (1 - group.rank) / 2.0
    prefactor = psi * (k / (sigma * np.pi)) ** power
    expo = (gaussian_pair_exponent(w1, w2)
            - float(np.linalg.norm(v1) ** 2 + np.linalg.norm(v2) ** 2)) / sigma
    gauss = np.exp(expo)
    value = prefactor * gauss
    return Prediction(model_id=model.id, nu=tuple(nu.coords), k=int(k),
                      x=sample.x, v1=v1, w1=w1, v2=v2, w2=w2,
                      leading_coefficient=float(psi), sigma=float(sigma),
                      power=float(power), prefactor=float(prefactor),
                      gaussian_factor=complex(gauss), value=complex(value))


def dimension_coefficient(model, nu=None, level=120):
    """delta_0 = 2^{-(r-1)/2} int_{M_O} Psi(m) / sigma(m)^{d+1-r} dV_{M_O}.

    Rank-1 models integrate over all of M (the locus has codimension 0)
    with the toric dV_M = pi^d dt; rank-2 models integrate over the
    locus hypersurface via its torus-invariant segment parametrization
    with a cosine endpoint map (the locus volume element is
    sqrt(det Gram(val_1, val_2, d x/d s))).
    """
    group = model.group
    nu = model.default_nu if nu is None else \
        (nu if isinstance(nu, HalfWeight) else half_weight(group, nu))
    r = group.rank
    power = model.d + 1 - r
    if r == 1:
        nodes, weights = simplex_quadrature(model.d, max(24, level // 2))
        total = 0.0
        for t, w in zip(nodes, weights):
            x = model.point(np.sqrt(t))
            sample = model.locus_decompose(nu, x)
            if not isinstance(sample, LocusSample):
                raise AssumptionViolation("rank-1 model point off the cone")
            psi = leading_coefficient(model, nu, sample)
            total += w * psi / sample.sigma ** power
        return np.pi ** model.d * total
    if r == 2 and model.d == 2:
        return _locus_line_integral(model, nu, power, level)
    raise AssumptionViolation(f"no locus quadrature for {model.id}")


def _locus_line_integral(model, nu, power, level):
    from numpy.polynomial.legendre import leggauss

    t_of_s = model.locus_simplex_curve(nu)
    mult = model.projective_torus_multiplicity()
    xs, ws = leggauss(level)
    total = 0.0
    h = 1e-4
    for u, w in zip(xs, ws):
        s = 0.5 * (1.0 - np.cos(np.pi * 0.5 * (u + 1.0)))       # cosine map [0,1]
        ds_du = 0.25 * np.pi * np.sin(np.pi * 0.5 * (u + 1.0))
        t = t_of_s(s)
        x = model.point(np.sqrt(t))
        sample = model.locus_decompose(nu, x)
        if not isinstance(sample, LocusSample):
            raise AssumptionViolation("locus curve point fell off the cone")
        psi = leading_coefficient(model, nu, sample)
        # the simplex curves are affine in s, so a wide central difference
        # of t is exact; dx_j/ds = t_j'/(2 sqrt(t_j))
        tprime = (t_of_s(min(s + h, 1.0)) - t_of_s(max(s - h, 0.0))) \
            / (min(s + h, 1.0) - max(s - h, 0.0))
        u_tan = model.horizontal(x, tprime / (2.0 * np.sqrt(t)))
        v1 = model.val(x, np.eye(model.group.dim)[0])
        v2 = model.val(x, np.eye(model.group.dim)[1])
        G = np.array([
            [riemann_inner(a, b) for b in (v1, v2, u_tan)]
            for a in (v1, v2, u_tan)])
        dens = np.sqrt(max(np.linalg.det(G), 0.0))
        total += w * ds_du * (2 * np.pi) ** 2 / mult * dens * psi / sample.sigma ** power
    return total / np.sqrt(2.0)


def phase_hessian(metric, nu, sigma, xi_prime=None, tol=1e-10):
    """Assemble the stationary-phase Hessian and check det and signature.

    Blocks: the (u, s) pair with off-diagonal sigma ||nu^phi||, the
    skew block Z of the restricted adjoint operator at nu^phi against
    the Cartan complement, and the second-order remainder block driven
    by xi' in t_nu.  Returns (det, signature); both are asserted against
    det = -sigma^2 ||nu^phi||^2 det(Z)^2 and signature 0.
    """
    group = metric.group
    nu = nu if isinstance(nu, HalfWeight) else half_weight(group, nu)
    nu_sharp = metric.sharp(nu.coords)
    nu_norm = metric.norm_covector(nu.coords)
    Z, det_z = ad_on_cartan_complement(metric, nu_sharp)
    if group.n_pos and det_z == 0:
        raise ValueError("nu is not regular; the restricted adjoint block is singular")
    m = Z.shape[0]
    size = 2 + 2 * m
    H = np.zeros((size, size))
    a = sigma * nu_norm
    H[0, 1] = H[1, 0] = a
    if m:
        H[2:2 + m, 2 + m:] = Z
        H[2 + m:, 2:2 + m] = -Z
        H[2 + m:, 2 + m:] = _remainder_block(metric, nu, xi_prime)
    det = float(np.linalg.det(H))
    predicted = -sigma ** 2 * nu_norm ** 2 * det_z ** 2
    if abs(det - predicted) > tol * max(1.0, abs(predicted)):
        raise AssertionError(f"Hessian determinant {det} != predicted {predicted}")
    eigs = np.linalg.eigvalsh(H)
    signature = int(np.sum(eigs > 0) - np.sum(eigs < 0))
    if signature != 0:
        raise AssertionError(f"Hessian signature {signature} != 0")
    return det, signature


def _remainder_block(metric, nu, xi_prime):
    """Hessian of gamma -> phi(R_2(gamma), xi') at 0 for xi' in t_nu."""
    group = metric.group
    if xi_prime is None or group.rank == 1:
        m = group.dim - group.rank
        return np.zeros((m, m))
    xi_mat = cartan_matrix_of(group, np.asarray(xi_prime, dtype=float))
    nu_mat = cartan_matrix_of(group, metric.sharp(nu.coords))
    basis = _orthonormal_complement_basis(metric)
    m = len(basis)
    B = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            ei, ej = basis[i], basis[j]
            term = (ei @ (ej @ nu_mat - nu_mat @ ej) - (ej @ nu_mat - nu_mat @ ej) @ ei
                    + ej @ (ei @ nu_mat - nu_mat @ ei) - (ei @ nu_mat - nu_mat @ ei) @ ej)
            B[i, j] = 0.5 * metric.inner_matrices(term, xi_mat)
    return B


def _orthonormal_complement_basis(metric):
    """phi-orthonormal basis of t^perp matching ad_on_cartan_complement."""
    group = metric.group
    scale = metric.scale
    out = []
    for b in group.basis_matrices[group.rank:]:
        out.append(np.asarray(b) / np.sqrt(2 * scale))
    return out
