"""The gauge pseudometric on bi-Lipschitz-equivalent metrics.

For two metrics sigma, phi comparable to a base metric d, the distance is
the worst ratio over pairs of the oscillation of sigma - phi:

    w(sigma, phi)(x, y) = sup_z |(sigma-phi)(x,z) - (sigma-phi)(y,z)|
    W_d(sigma, phi)     = max over x != y of w(x, y) / d(x, y).

Evaluated exactly (O(n^3)); exactness feeds the acceptance tests.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContainmentError, GaugeRadiusError
from .spaces import (MetricMeasureSpace, _rho_matrix, as_distance_matrix,
                     gauge_constants, shortest_path_closure)
from .separation import SeparationCertificate, lipschitz_constants

_TOL = 1e-12


@dataclass(frozen=True)
class WdReport:
    value: float
    witness: tuple            # (x, y, z) attaining the supremum
    w_matrix: np.ndarray      # pairwise oscillation w(sigma, phi)


def wd_distance(base_d, sigma, phi) -> WdReport:
    base = as_distance_matrix(base_d)
    sigma = as_distance_matrix(sigma)
    phi = as_distance_matrix(phi)
    if not base.shape == sigma.shape == phi.shape:
        raise ValueError("all three metrics must live on one point set")
    n = base.shape[0]
    delta = sigma - phi
    w = np.zeros((n, n))
    zbest = np.zeros((n, n), dtype=int)
    for x in range(n):
        osc = np.abs(delta[x][None, :] - delta)   # osc[y, z]
        zbest[x] = np.argmax(osc, axis=1)
        w[x] = osc[np.arange(n), zbest[x]]
    np.fill_diagonal(w, 0.0)
    ratios = np.where(np.eye(n, dtype=bool), -np.inf, w / np.where(base == 0, 1.0, base))
    x, y = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
    return WdReport(value=float(ratios[x, y]),
                    witness=(int(x), int(y), int(zbest[x, y])),
                    w_matrix=w)


def openness_transfer(space: MetricMeasureSpace, sigma,
                      certificate: SeparationCertificate, phi) -> SeparationCertificate:
    """Transfer a separation certificate from sigma to a nearby metric phi.

    Requires the gauge distance to be under ell(d, sigma) * eps / 2; the
    result is the certificate (ell(phi, sigma) * eps / 2, c), with the
    underlying E-set containment re-checked exhaustively. A containment
    failure after the radius precondition passed would numerically falsify
    the openness guarantee the transfer rests on, so it raises a hard
    error rather than returning a certificate.
    """
    sigma = as_distance_matrix(sigma)
    phi = as_distance_matrix(phi)
    eps, c = certificate.epsilon, certificate.c
    n = space.n

    # re-verify the certificate for sigma
    for x in range(n):
        for y in range(x + 1, n):
            members = np.abs(sigma[x] - sigma[y]) >= eps * sigma[x, y]
            if float(space.weights[members].sum()) < c - _TOL:
                raise ValueError(f"certificate does not hold for sigma at ({x}, {y})")

    ell_d_sigma = gauge_constants(space.D, sigma).ell
    radius = ell_d_sigma * eps / 2.0
    wd = wd_distance(space.D, sigma, phi)
    if not wd.value < radius:
        raise GaugeRadiusError(
            f"gauge distance {wd.value:.6g} is not below the transfer "
            f"radius {radius:.6g}", measured=wd.value, radius=radius)

    ell_phi_sigma = gauge_constants(phi, sigma).ell   # ell * phi <= sigma
    new_eps = ell_phi_sigma * eps / 2.0
    new_c = np.inf
    witness = None
    for x in range(n):
        for y in range(x + 1, n):
            in_sigma = np.abs(sigma[x] - sigma[y]) >= eps * sigma[x, y]
            in_phi = np.abs(phi[x] - phi[y]) >= new_eps * phi[x, y]
            if (in_sigma & ~in_phi).any():
                z = int(np.flatnonzero(in_sigma & ~in_phi)[0])
                raise ContainmentError(
                    f"E-set containment fails at ({x}, {y}) for z = {z} "
                    f"despite gauge radius precondition")
            mass = float(space.weights[in_phi].sum())
            if mass < new_c:
                new_c, witness = mass, (x, y)
    return SeparationCertificate(epsilon=new_eps, c=min(c, new_c), witness_pair=witness)


@dataclass(frozen=True)
class NearIsometryReport:
    """Quantities of the near-isometry criterion: the largest ell with
    ell*d <= rho <= d, the gauge distance between d and rho, the two
    sandwich bounds (reported with pass flags, not asserted), and the
    radius threshold test when a radius is supplied."""
    ell: float
    wd_d_rho: float
    lower_claim: float
    lower_ok: bool
    upper_claim: float
    upper_ok: bool
    threshold_ok: bool | None
    normalized: bool


def near_isometry_report(space: MetricMeasureSpace, r_d: float | None = None) -> NearIsometryReport:
    # rho <= d needs total mass <= 1; otherwise work on the normalised space
    normalized = space.total_mass > 1.0 + _TOL
    work = space.normalized() if normalized else space
    rho = _rho_matrix(work.D, work.weights)
    ell = lipschitz_constants(work.D, rho).lower
    wd = wd_distance(work.D, work.D, rho).value
    lower = (1.0 - ell) / (1.0 + ell)
    upper = (1.0 - ell) / ell if ell > 0 else np.inf
    threshold = None if r_d is None else bool(1.0 / (1.0 + r_d) < ell)
    return NearIsometryReport(
        ell=float(ell), wd_d_rho=float(wd),
        lower_claim=float(lower), lower_ok=bool(lower <= wd + _TOL),
        upper_claim=float(upper), upper_ok=bool(wd <= upper + _TOL),
        threshold_ok=threshold, normalized=normalized)


def perturb_metric_to_wd(space: MetricMeasureSpace, sigma, target: float,
                         seed: int, rel_tol: float = 0.01,
                         max_iter: int = 80) -> tuple[np.ndarray, float]:
    """Construct a valid metric at a controlled gauge distance from sigma.

    Adds seeded symmetric zero-diagonal noise scaled by alpha, restores the
    triangle inequality by shortest-path closure, and bisects alpha until
    the measured distance lands within rel_tol of the target. Signed noise
    is capped by entry positivity; if the target lies beyond that cap the
    draw falls back to its absolute value, which scales without bound.
    """
    sigma = as_distance_matrix(sigma)
    n = sigma.shape[0]
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-1.0, 1.0, size=(n, n))
    noise = (noise + noise.T) / 2.0
    np.fill_diagonal(noise, 0.0)

    min_off = sigma[~np.eye(n, dtype=bool)].min()

    def metric_at(alpha):
        cand = sigma + alpha * noise
        lo = cand[~np.eye(n, dtype=bool)].min()
        if lo <= 0:  # keep entries positive before closing
            return None
        return shortest_path_closure(cand)

    def wd_at(alpha):
        phi = metric_at(alpha)
        if phi is None:
            return None, None
        return phi, wd_distance(space.D, sigma, phi).value

    def expand():
        hi = 0.25 * min_off
        phi_hi, val_hi = wd_at(hi)
        tries = 0
        while val_hi is not None and val_hi < target and tries < max_iter:
            cand, val = wd_at(hi * 2.0)
            if val is None:
                break
            hi *= 2.0
            phi_hi, val_hi = cand, val
            tries += 1
        return hi, phi_hi, val_hi

    hi, phi_hi, val_hi = expand()
    if val_hi is None or val_hi < target:
        noise = np.abs(noise)
        hi, phi_hi, val_hi = expand()
    if val_hi is None or val_hi < target:
        raise ValueError(
            f"cannot reach gauge distance {target!r} with this noise draw "
            f"(best {val_hi!r})")
    lo = 0.0
    for _ in range(max_iter):
        mid = (lo + hi) / 2.0
        cand, val = wd_at(mid)
        if val is None or val > target:
            hi = mid
            if val is not None:
                phi_hi, val_hi = cand, val
        else:
            lo = mid
            if abs(val - target) <= rel_tol * target:
                return cand, float(val)
        if abs(val_hi - target) <= rel_tol * target:
            return phi_hi, float(val_hi)
    return phi_hi, float(val_hi)
