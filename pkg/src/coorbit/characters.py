"""Character formulas: Weyl dimension/character, exp-map Jacobian,
coadjoint-orbit quadrature and the orbit-integral (Kirillov) character.

The two character routes implemented here are deliberately independent:
``weyl_character`` is the alternating-sum ratio over the Weyl group,
while ``kirillov_character`` integrates a Fourier kernel over the
coadjoint orbit and divides by the exp-map Jacobian.  Their agreement on
regular torus elements is one of the package's acceptance criteria.

Quadrature sums rely on numpy's pairwise summation, so results are
reproducible independently of how the node set would be partitioned.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import (
    CompactGroup,
    HalfWeight,
    InvariantMetric,
    cartan_matrix_of,
    half_weight,
    haar_quadrature,
    random_unitary,
    rational_pairing,
    trace_metric,
)


class WallEvaluationError(ValueError):
    """Weyl character requested exactly on a singular torus element."""


class QuadratureDisagreement(RuntimeError):
    """Successive quadrature refinements failed to agree."""


def _coords(nu):
    return nu.coords if isinstance(nu, HalfWeight) else np.atleast_1d(np.asarray(nu, dtype=float))


# -- Weyl dimension formula --------------------------------------------------

def weyl_dimension(group, metric, nu):
    """Irrep dimension d_nu = prod_beta phi(nu, beta) / phi(delta, beta).

    The product is metric-independent; ``metric`` fixes the pairing used
    to evaluate it.  The result must be a positive integer to 1e-9
    relative and is rounded after that check.
    """
    coords = _coords(nu)
    val = 1.0
    for beta in group.positive_roots:
        num = metric.pair_covectors(coords, beta)
        den = metric.pair_covectors(group.delta, beta)
        if abs(num) < 1e-14:
            raise ValueError(f"nu is not regular: phi(nu, {beta}) = 0")
        val *= num / den
    rounded = round(val)
    if rounded < 1 or abs(val - rounded) > 1e-9 * max(1.0, abs(val)):
        raise ValueError(f"Weyl dimension {val} is not a positive integer")
    return rounded


def scaled_dimension(group, nu, k):
    """d_{k nu}, with the identity d_{k nu} = k^{n_pos} d_nu checked exactly.

    Both sides are evaluated in rational arithmetic on the product
    formula, so the assertion is exact, not a float comparison.
    """
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise ValueError("k must be a positive integer")
    coords = [Fraction(x).limit_denominator(10 ** 9) for x in np.atleast_1d(_coords(nu))]
    delta = [Fraction(x).limit_denominator(10 ** 9) for x in group.delta]

    def product(cs):
        val = Fraction(1)
        for beta in group.positive_roots:
            b = [Fraction(x).limit_denominator(10 ** 9) for x in beta]
            val *= rational_pairing(group, cs, b) / rational_pairing(group, delta, b)
        return val

    d_nu = product(coords)
    d_knu = product([k * c for c in coords])
    assert d_knu == Fraction(k) ** group.n_pos * d_nu, "scaling law violated"
    if d_knu.denominator != 1:
        raise ValueError(f"dimension {d_knu} is not an integer")
    return int(d_knu)


# -- Weyl character formula ---------------------------------------------------

def _alternating_sum(group, gamma, theta):
    val = 0.0 + 0.0j
    for mat, sign in group.weyl_elements:
        val += sign * np.exp(1j * float((mat @ gamma) @ theta))
    return val


def weyl_character(group, nu, theta, extrapolate=True, wall_tol=1e-8):
    """Character chi_nu at the torus element exp(sum theta_j H_j).

    Evaluates the alternating-sum ratio A_nu / A_delta on the regular
    locus.  Near a wall (|A_delta| < ``wall_tol``) the limit is taken by
    Richardson extrapolation along a fixed regular direction; at the
    identity the dimension is returned directly.

    Raises
    ------
    WallEvaluationError
        If the element is singular and ``extrapolate`` is False; the
        message names a root beta with <beta, theta> in 2 pi Z.
    """
    nu = nu if isinstance(nu, HalfWeight) else half_weight(group, nu)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape != (group.rank,):
        raise ValueError(f"theta needs {group.rank} angles")
    if group.kind == "torus":
        return np.exp(1j * float(nu.coords @ theta))
    if np.allclose(theta, 0.0):
        return complex(weyl_dimension(group, trace_metric(group), nu))
    denom = _alternating_sum(group, group.delta, theta)
    if abs(denom) >= wall_tol:
        return _alternating_sum(group, nu.coords, theta) / denom
    if not extrapolate:
        for beta in group.positive_roots:
            phase = float(beta @ theta)
            if abs(np.remainder(phase + np.pi, 2 * np.pi) - np.pi) < 1e-6:
                raise WallEvaluationError(
                    f"theta lies on the wall of root {beta} (extrapolation disabled)")
        raise WallEvaluationError("theta lies on a Weyl wall (extrapolation disabled)")
    # Richardson extrapolation along the (regular) delta direction
    direction = group.delta / np.linalg.norm(group.delta)
    steps = np.array([1e-3, 5e-4, 2.5e-4])
    vals = []
    for h in steps:
        t = theta + h * direction
        vals.append(_alternating_sum(group, nu.coords, t)
                    / _alternating_sum(group, group.delta, t))
    # Neville extrapolation to h = 0
    v = list(vals)
    h = list(steps)
    for lvl in range(1, 3):
        for i in range(3 - lvl):
            v[i] = v[i + 1] + (v[i + 1] - v[i]) * h[i + lvl] / (h[i] - h[i + lvl])
    return v[0]


def character_at_element(group, nu, g):
    """chi_{nu} at a matrix group element, via its eigen-angles.

    Uses the stable homogeneous-sum form of the character for n = 2
    (no wall singularities); falls back on :func:`weyl_character` with
    extrapolation otherwise.  Tori take angle vectors.
    """
    nu = nu if isinstance(nu, HalfWeight) else half_weight(group, nu)
    if group.kind == "torus":
        return np.exp(1j * float(nu.coords @ np.asarray(g, dtype=float)))
    eig = np.linalg.eigvals(g)
    angles = np.sort(np.angle(eig))[::-1]
    if group.n == 2:
        lam = nu.highest_weight
        if group.kind == "su":
            m = int(round(lam[0]))          # chi = sum_{j=0..m} e^{i (m - 2j) t}
            x1, x2 = np.exp(1j * angles[0]), np.exp(1j * angles[1])
        else:
            l1, l2 = int(round(lam[0])), int(round(lam[1]))
            m = l1 - l2
            x1, x2 = np.exp(1j * angles[0]), np.exp(1j * angles[1])
            pref = (x1 * x2) ** l2
            return pref * _homogeneous_sum(x1, x2, m)
        return _homogeneous_sum(x1, x2, m)
    theta = _angles_to_cartan_coords(group, angles)
    return weyl_character(group, nu, theta)


def _homogeneous_sum(x1, x2, m):
    """sum_{j=0}^{m} x1^{m-j} x2^{j}, stable near x1 = x2."""
    total = 0.0 + 0.0j
    p = x1 ** m
    ratio = x2 / x1 if abs(x1) > 0 else 0.0
    for _ in range(m + 1):
        total += p
        p *= ratio
    return total


def _angles_to_cartan_coords(group, angles):
    if group.kind == "u":
        return np.asarray(angles, dtype=float)
    # SU(n): coords_j = theta_j - theta_{j+1} on the sum-zero pattern
    th = np.asarray(angles, dtype=float)
    th = th - th.mean()
    return th[:-1] - th[1:]


# -- exp-map Jacobian ---------------------------------------------------------

def exp_jacobian(group, xi):
    """Square root P(xi) of the exp-map volume distortion, P(0) = 1.

    For xi in the Cartan algebra (coefficients) this is the root product
    prod_{beta>0} sin(<beta,xi>/2) / (<beta,xi>/2), extended
    Ad-invariantly to matrices via eigen-angles.  Validated against a
    finite-difference Jacobian of the matrix exponential in the tests.

    Raises
    ------
    ValueError
        If xi lies outside the injectivity domain (an eigen-angle gap
        reaches 2 pi).
    """
    if group.kind == "torus":
        return 1.0
    xi = np.asarray(xi)
    if xi.ndim == 2:
        theta = np.sort(np.linalg.eigvalsh(-1j * xi))[::-1]
        gaps = [theta[j] - theta[k] for j in range(len(theta)) for k in range(j + 1, len(theta))]
    else:
        gaps = [float(beta @ xi) for beta in group.positive_roots]
    val = 1.0
    for a in gaps:
        if abs(a) >= 2 * np.pi:
            raise ValueError("xi is outside the injectivity domain of exp")
        val *= np.sinc(a / (2 * np.pi))  # sin(a/2)/(a/2)
    return float(val)


# -- coadjoint orbits ---------------------------------------------------------

def orbit_volume(group, metric, gamma):
    """Symplectic volume of the coadjoint orbit through a regular covector.

    vol(O_gamma) = (2 pi)^{n_pos} prod_beta phi(gamma, beta) / phi(delta, beta);
    for half-weights this reduces to (2 pi)^{n_pos} d_gamma.
    """
    coords = _coords(gamma)
    val = (2 * np.pi) ** group.n_pos
    for beta in group.positive_roots:
        val *= metric.pair_covectors(coords, beta) / metric.pair_covectors(group.delta, beta)
    return float(val)


@dataclass(frozen=True, eq=False)
class OrbitQuadrature:
    """Quadrature for the Kostant-Kirillov volume on a coadjoint orbit.

    ``nodes_sharp`` holds lambda^phi for each node (matrices for
    SU(n)/U(n), coefficient vectors for tori); ``weights`` sum to
    vol(O_nu).  ``pairing(xi)`` evaluates <lambda, xi> at every node for
    an algebra element xi (Cartan coefficients or matrix).
    """

    group: CompactGroup
    metric: InvariantMetric
    nu: np.ndarray
    nodes_sharp: np.ndarray
    weights: np.ndarray
    scheme: str
    std_error: float = 0.0

    @property
    def node_count(self):
        return len(self.weights)

    @property
    def volume(self):
        return float(np.sum(self.weights))

    def nodes_coords(self):
        """Nodes as full coalgebra coordinates (values on the fixed basis)."""
        if self.group.kind == "torus":
            return self.nodes_sharp @ self.metric.gram
        B = self.group.basis_matrices
        out = np.empty((self.node_count, self.group.dim))
        for i, lam in enumerate(self.nodes_sharp):
            for m, b in enumerate(B):
                out[i, m] = self.metric.inner_matrices(lam, b)
        return out

    def pairing(self, xi):
        """<lambda, xi> for every node."""
        if self.group.kind == "torus":
            xi = np.asarray(xi, dtype=float)
            return (self.nodes_sharp @ self.metric.gram) @ xi
        xi_mat = xi if np.asarray(xi).ndim == 2 else cartan_matrix_of(self.group, xi)
        vals = np.einsum("nij,ji->n", self.nodes_sharp, xi_mat.conj().T)
        return self.metric.scale * vals.real

    def integrate(self, values):
        return float(np.sum(self.weights * values)) if np.isrealobj(values) \
            else complex(np.sum(self.weights * values))

    def norms(self):
        """||lambda||_phi at every node (constant on the orbit)."""
        if self.group.kind == "torus":
            return np.array([self.metric.norm_vector(v) for v in self.nodes_sharp])
        return np.array([np.sqrt(self.metric.inner_matrices(m, m)) for m in self.nodes_sharp])


def orbit_quadrature(group, metric, nu, level=64, rng=None):
    """Nodes and weights integrating against the orbit volume form.

    Tori: the orbit is the single point nu (weight 1 = vol).  SU(2) and
    U(2): the orbit is a round 2-sphere; nodes are a Gauss-Legendre x
    uniform product grid and each weight carries the Kostant-Kirillov
    density computed from sigma(ad_xi lambda, ad_eta lambda) =
    <lambda, [xi, eta]> (the weight sum is a genuine prediction, checked
    against (2 pi)^{n_pos} d_nu in the tests).  SU(n)/U(n) with n >= 3:
    Monte Carlo only, normalized by the closed-form orbit volume, with
    the standard error reported.
    """
    nu = nu if isinstance(nu, HalfWeight) else half_weight(group, nu)
    if group.kind == "torus":
        return OrbitQuadrature(group, metric, nu.coords,
                               metric.sharp(nu.coords)[None, :],
                               np.array([1.0]), "point")
    if group.n == 2:
        return _sphere_orbit_quadrature(group, metric, nu, level)
    return _monte_carlo_orbit_quadrature(group, metric, nu, level, rng)


def _sphere_orbit_quadrature(group, metric, nu, level):
    from numpy.polynomial.legendre import leggauss

    n_polar, n_azimuth = level, 2 * level
    nu_sharp = cartan_matrix_of(group, metric.sharp(nu.coords))
    n = group.n
    center = np.trace(nu_sharp) / n * np.eye(n)
    radial = nu_sharp - center
    radius = np.sqrt(metric.inner_matrices(radial, radial))

    c = metric.scale
    z_hat = np.array([[1j, 0], [0, -1j]], dtype=complex) / np.sqrt(2 * c)
    x_hat = np.array([[0, 1], [-1, 0]], dtype=complex) / np.sqrt(2 * c)
    y_hat = np.array([[0, 1j], [1j, 0]], dtype=complex) / np.sqrt(2 * c)

    xs, ws = leggauss(n_polar)
    phis = 2 * np.pi * np.arange(n_azimuth) / n_azimuth
    nodes, weights = [], []
    for u, wu in zip(xs, ws):
        s = np.sqrt(1.0 - u * u)
        for phi in phis:
            direction = u * z_hat + s * (np.cos(phi) * x_hat + np.sin(phi) * y_hat)
            lam = center + radius * direction
            area_w = wu * (2 * np.pi / n_azimuth) * radius ** 2
            nodes.append(lam)
            weights.append(area_w * _kk_density(metric, lam))
    return OrbitQuadrature(group, metric, nu.coords, np.array(nodes),
                           np.array(weights), f"gauss-sphere-{n_polar}x{n_azimuth}")


def _kk_density(metric, lam):
    """Kostant-Kirillov 2-form density against the Euclidean area at lam.

    sigma(ad_xi lam, ad_eta lam) = <lam, [xi, eta]>; the density is the
    ratio |sigma(t1, t2)| / area(t1, t2) for any independent tangent
    pair, so the best-conditioned pair of generator fields is used.
    """
    group = metric.group
    B = group.basis_matrices
    tangents = [b @ lam - lam @ b for b in B]
    norms2 = [metric.inner_matrices(t, t) for t in tangents]
    i = int(np.argmax(norms2))
    best_j, best_area2 = None, -1.0
    for j, t2 in enumerate(tangents):
        if j == i:
            continue
        g12 = metric.inner_matrices(tangents[i], t2)
        area2 = norms2[i] * norms2[j] - g12 * g12
        if area2 > best_area2:
            best_area2, best_j = area2, j
    sigma = metric.inner_matrices(lam, B[i] @ B[best_j] - B[best_j] @ B[i])
    return abs(sigma) / np.sqrt(best_area2)


def _monte_carlo_orbit_quadrature(group, metric, nu, level, rng):
    rng = np.random.default_rng(0) if rng is None else rng
    count = max(2000, 200 * level)
    nu_sharp = cartan_matrix_of(group, metric.sharp(nu.coords))
    vol = orbit_volume(group, metric, nu.coords)
    nodes = np.empty((count, group.n, group.n), dtype=complex)
    for i in range(count):
        g = random_unitary(group.n, rng, special=group.kind == "su")
        nodes[i] = g @ nu_sharp @ g.conj().T
    weights = np.full(count, vol / count)
    return OrbitQuadrature(group, metric, nu.coords, nodes, weights,
                           f"montecarlo-{count}-volume-normalized",
                           std_error=vol / np.sqrt(count))


# -- Kirillov orbit character -------------------------------------------------

def kirillov_character(group, metric, nu, xi, k=1, quad=None, level=64):
    """Orbit-integral character value at exp(xi).

    chi_{k nu}(e^xi) = (k / 2 pi)^{n_pos} P(xi)^{-1}
    int_{O_nu} e^{i k <lambda, xi>} dV(lambda), evaluated with
    :func:`orbit_quadrature`.  With xi = 0 this returns d_{k nu}.
    """
    quad = orbit_quadrature(group, metric, nu, level) if quad is None else quad
    phases = np.exp(1j * k * quad.pairing(xi))
    integral = np.sum(quad.weights * phases)
    p = exp_jacobian(group, xi)
    return (k / (2 * np.pi)) ** group.n_pos * integral / p


# -- Peter-Weyl projector pairing --------------------------------------------

def peter_weyl_projector_weight(group, nu, k, f, level=24, tol=1e-6):
    """d_{k nu} * int_G conj(chi_{k nu}(g)) f(g) dHaar(g).

    The pairing defining the isotypic projector.  Evaluated at two
    quadrature levels; if the refinement moves the value by more than
    ``tol`` (relative to its size) a :class:`QuadratureDisagreement` is
    raised carrying both estimates.
    """
    nu = nu if isinstance(nu, HalfWeight) else half_weight(group, nu)
    knu = half_weight(group, k * nu.coords)
    metric = trace_metric(group)
    d = weyl_dimension(group, metric, knu)

    def estimate(lvl):
        nodes, weights = haar_quadrature(group, lvl)
        total = 0.0 + 0.0j
        for g, w in zip(nodes, weights):
            total += w * np.conj(character_at_element(group, knu, g)) * f(g)
        return d * total

    coarse = estimate(level)
    fine = estimate(int(level * 3 / 2) + 1)
    scale = max(1.0, abs(fine))
    if abs(fine - coarse) > tol * scale:
        raise QuadratureDisagreement(
            f"projector pairing did not converge: {coarse} vs {fine}")
    return fine
