"""Jitted explicit-Euler steppers for the field and its tangent fields.

All kernels advance batches of replicates laid out as (B, nx) float64 arrays
with periodic indexing, using the update

    u_next[i] = u[i] + c1*(u[i+1] - 2*u[i] + u[i-1]) + dt*b(u[i])
                + s*sigma(u[i])*xi[i],

with c1 = dt/(2*dx^2) and s = sqrt(dt/dx).  Noise arrives as float32 rows
(one per step) and is promoted inside the arithmetic.  The built-in
coefficient families are inlined under an integer ``kind`` switch
(coefficients.KIND_*); custom pairs use the numpy reference path in
``solver``.  fastmath stays off so results are bit-reproducible.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from .coefficients import KIND_ADDITIVE, KIND_LINEAR, KIND_SMOOTH


@numba.njit(inline="always")
def _coeffs(kind, lam, ui):
    # returns (b, sigma, b', sigma', b'', sigma'') at ui
    if kind == KIND_ADDITIVE:
        return 0.0, 1.0, 0.0, 0.0, 0.0, 0.0
    elif kind == KIND_LINEAR:
        return lam * ui, ui, lam, 1.0, 0.0, 0.0
    else:
        sn = math.sin(ui)
        cs = math.cos(ui)
        return sn, 1.0 + 0.5 * cs, cs, -0.5 * sn, -sn, -0.5 * cs


@numba.njit(cache=True)
def advance_field(u, work, noise, nsteps, c1, dt, s, kind, lam):
    """Advance u by nsteps; noise[b, j, i] feeds step j.  Result lands in u."""
    B, nx = u.shape
    cur = u
    nxt = work
    for j in range(nsteps):
        for b in range(B):
            for i in range(nx):
                ip = i + 1 if i + 1 < nx else 0
                im = i - 1 if i >= 1 else nx - 1
                ui = cur[b, i]
                lap = cur[b, ip] - 2.0 * ui + cur[b, im]
                drift, diff, _, _, _, _ = _coeffs(kind, lam, ui)
                nxt[b, i] = ui + c1 * lap + dt * drift + s * diff * noise[b, j, i]
        tmp = cur
        cur = nxt
        nxt = tmp
    if nsteps % 2 == 1:
        for b in range(B):
            for i in range(nx):
                u[b, i] = cur[b, i]


@numba.njit(cache=True)
def advance_with_tangent(u, v, uw, vw, noise, nsteps, c1, dt, s, kind, lam):
    """Advance the field and one first-variation field on shared noise."""
    B, nx = u.shape
    cu, cv = u, v
    nu_, nv = uw, vw
    for j in range(nsteps):
        for b in range(B):
            for i in range(nx):
                ip = i + 1 if i + 1 < nx else 0
                im = i - 1 if i >= 1 else nx - 1
                ui = cu[b, i]
                vi = cv[b, i]
                lap_u = cu[b, ip] - 2.0 * ui + cu[b, im]
                lap_v = cv[b, ip] - 2.0 * vi + cv[b, im]
                drift, diff, db, dsig, _, _ = _coeffs(kind, lam, ui)
                xi = noise[b, j, i]
                nu_[b, i] = ui + c1 * lap_u + dt * drift + s * diff * xi
                nv[b, i] = vi + c1 * lap_v + dt * db * vi + s * dsig * vi * xi
        cu, nu_ = nu_, cu
        cv, nv = nv, cv
    if nsteps % 2 == 1:
        for b in range(B):
            for i in range(nx):
                u[b, i] = cu[b, i]
                v[b, i] = cv[b, i]


@numba.njit(cache=True)
def advance_with_two_tangents(u, v1, v2, w, uw, v1w, v2w, ww, noise, nsteps,
                              c1, dt, s, kind, lam, force_w):
    """Advance u, two first-variation fields, and the second-variation field.

    The second-variation field w carries the forcing
    b''(u) v1 v2 dt + sigma''(u) v1 v2 dW on top of its homogeneous terms;
    ``force_w`` turns the forcing on (it is off before w's source time while
    v1/v2 are still being propagated).
    """
    B, nx = u.shape
    cu, c1v, c2v, cw = u, v1, v2, w
    nu_, n1v, n2v, nw = uw, v1w, v2w, ww
    for j in range(nsteps):
        for b in range(B):
            for i in range(nx):
                ip = i + 1 if i + 1 < nx else 0
                im = i - 1 if i >= 1 else nx - 1
                ui = cu[b, i]
                a1 = c1v[b, i]
                a2 = c2v[b, i]
                wi = cw[b, i]
                lap_u = cu[b, ip] - 2.0 * ui + cu[b, im]
                lap_1 = c1v[b, ip] - 2.0 * a1 + c1v[b, im]
                lap_2 = c2v[b, ip] - 2.0 * a2 + c2v[b, im]
                lap_w = cw[b, ip] - 2.0 * wi + cw[b, im]
                drift, diff, db, dsig, d2b, d2sig = _coeffs(kind, lam, ui)
                xi = noise[b, j, i]
                nu_[b, i] = ui + c1 * lap_u + dt * drift + s * diff * xi
                n1v[b, i] = a1 + c1 * lap_1 + dt * db * a1 + s * dsig * a1 * xi
                n2v[b, i] = a2 + c1 * lap_2 + dt * db * a2 + s * dsig * a2 * xi
                if force_w:
                    prod = a1 * a2
                    nw[b, i] = (wi + c1 * lap_w + dt * (db * wi + d2b * prod)
                                + s * (dsig * wi + d2sig * prod) * xi)
                else:
                    nw[b, i] = 0.0
        cu, nu_ = nu_, cu
        c1v, n1v = n1v, c1v
        c2v, n2v = n2v, c2v
        cw, nw = nw, cw
    if nsteps % 2 == 1:
        for b in range(B):
            for i in range(nx):
                u[b, i] = cu[b, i]
                v1[b, i] = c1v[b, i]
                v2[b, i] = c2v[b, i]
                w[b, i] = cw[b, i]


def advance_field_reference(u, noise, nsteps, c1, dt, s, coeffs):
    """Numpy reference stepper for arbitrary coefficient pairs.

    Uses the same update expression and evaluation order as the jitted
    kernels; used for KIND_CUSTOM pairs and in cross-validation tests.
    """
    for j in range(nsteps):
        lap = np.roll(u, -1, axis=-1) - 2.0 * u + np.roll(u, 1, axis=-1)
        u = (u + c1 * lap + dt * np.asarray(coeffs.b(u), dtype=float)
             + s * np.asarray(coeffs.sigma(u), dtype=float) * noise[:, j, :].astype(np.float64))
    return u
