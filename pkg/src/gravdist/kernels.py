"""Fixed-step inner loops.

Each kernel advances ``n_steps`` steps of size ``dt`` (the final step uses
``last_h``), writes every ``sample_every``-th state plus the final state into
preallocated arrays and returns ``(n_filled, status)``. ``status`` is 0 on
success, otherwise the index of the first step that left the divergence guard
plus one, negated.
"""
from __future__ import annotations

import math

import numpy as np

from ._accel import njit

COORD_LIMIT = 1e12
LOG_LIMIT = 30.0

METHOD_CODES = {"RK4LogSpace": 0, "RK4Direct": 1, "EulerDirect": 2}


def n_samples_for(n_steps, sample_every):
    n = n_steps // sample_every + 1
    if n_steps % sample_every:
        n += 1
    return n


@njit(cache=True)
def _exp(x):
    # math.exp raises on overflow when interpreted; compiled code returns inf
    if x > 709.0:
        return math.inf
    return math.exp(x)


@njit(cache=True)
def _lv_log_step(u, v, g, mu, tau, rho, h):
    k1u = g - mu * _exp(v)
    k1v = -tau + rho * _exp(u)
    k2u = g - mu * _exp(v + 0.5 * h * k1v)
    k2v = -tau + rho * _exp(u + 0.5 * h * k1u)
    k3u = g - mu * _exp(v + 0.5 * h * k2v)
    k3v = -tau + rho * _exp(u + 0.5 * h * k2u)
    k4u = g - mu * _exp(v + h * k3v)
    k4v = -tau + rho * _exp(u + h * k3u)
    u_new = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    v_new = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return u_new, v_new


@njit(cache=True)
def _lv_direct_rk4_step(y, d, g, mu, tau, rho, h):
    k1y = y * (g - mu * d)
    k1d = d * (-tau + rho * y)
    y2 = y + 0.5 * h * k1y
    d2 = d + 0.5 * h * k1d
    k2y = y2 * (g - mu * d2)
    k2d = d2 * (-tau + rho * y2)
    y3 = y + 0.5 * h * k2y
    d3 = d + 0.5 * h * k2d
    k3y = y3 * (g - mu * d3)
    k3d = d3 * (-tau + rho * y3)
    y4 = y + h * k3y
    d4 = d + h * k3d
    k4y = y4 * (g - mu * d4)
    k4d = d4 * (-tau + rho * y4)
    return (y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
            d + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d))


@njit(cache=True)
def _lv_euler_step(y, d, g, mu, tau, rho, h):
    return y + h * y * (g - mu * d), d + h * d * (-tau + rho * y)


@njit(cache=True)
def lv_integrate(method, y0, d0, g, mu, tau, rho, dt, n_steps, last_h,
                 sample_every, out_y, out_d, carry):
    # carry = (a, b, flag): working coordinates ((ln Y, ln d) in log space),
    # used as the start point when flag != 0; overwritten with the end state
    log_space = method == 0
    if carry[2] != 0.0:
        a = carry[0]
        b = carry[1]
    elif log_space:
        a = math.log(y0)
        b = math.log(d0)
    else:
        a = y0
        b = d0
    out_y[0] = y0
    out_d[0] = d0
    k = 1
    for i in range(n_steps):
        h = last_h if i == n_steps - 1 else dt
        if method == 0:
            a, b = _lv_log_step(a, b, g, mu, tau, rho, h)
        elif method == 1:
            a, b = _lv_direct_rk4_step(a, b, g, mu, tau, rho, h)
        else:
            a, b = _lv_euler_step(a, b, g, mu, tau, rho, h)
        if log_space:
            if not (abs(a) <= LOG_LIMIT and abs(b) <= LOG_LIMIT):
                return k, -(i + 1)
        elif not (abs(a) <= COORD_LIMIT and abs(b) <= COORD_LIMIT):
            return k, -(i + 1)
        if (i + 1) % sample_every == 0 or i == n_steps - 1:
            if log_space:
                out_y[k] = math.exp(a)
                out_d[k] = math.exp(b)
            else:
                out_y[k] = a
                out_d[k] = b
            k += 1
    carry[0] = a
    carry[1] = b
    return k, 0


@njit(cache=True)
def _sir_deriv(s, i, a, b):
    inf = a * s * i
    rec = b * i
    return -inf, inf - rec, rec


@njit(cache=True)
def sir_integrate(s0, i0, r0, a, b, dt, n_steps, last_h, sample_every,
                  out_s, out_i, out_r):
    s = s0
    i_ = i0
    r = r0
    out_s[0] = s
    out_i[0] = i_
    out_r[0] = r
    k = 1
    for n in range(n_steps):
        h = last_h if n == n_steps - 1 else dt
        k1s, k1i, k1r = _sir_deriv(s, i_, a, b)
        k2s, k2i, k2r = _sir_deriv(s + 0.5 * h * k1s, i_ + 0.5 * h * k1i, a, b)
        k3s, k3i, k3r = _sir_deriv(s + 0.5 * h * k2s, i_ + 0.5 * h * k2i, a, b)
        k4s, k4i, k4r = _sir_deriv(s + h * k3s, i_ + h * k3i, a, b)
        s = s + h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        i_ = i_ + h / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
        r = r + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
        if not (abs(s) <= COORD_LIMIT and abs(i_) <= COORD_LIMIT and abs(r) <= COORD_LIMIT):
            return k, -(n + 1)
        if (n + 1) % sample_every == 0 or n == n_steps - 1:
            out_s[k] = s
            out_i[k] = i_
            out_r[k] = r
            k += 1
    return k, 0


def alloc(n_steps, sample_every, count):
    n = n_samples_for(n_steps, sample_every)
    return tuple(np.empty(n) for _ in range(count))
