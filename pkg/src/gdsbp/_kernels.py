"""Numba kernels for GDS-MBP message passing.

Graph layout (built once per matrix):

- edges are sorted by check; ``chk_ptr[i]:chk_ptr[i+1]`` are the edges of check i
- ``e_var[e]`` is the variable of edge e (binary variables are ``N + col``)
- ``e_sym[e]`` is the Pauli code of a quaternary edge (0 for binary edges)
- ``var_ptr``/``var_edges`` list the edges of every variable, ascending by check

LLR triples are indexed ``0: X, 1: Y, 2: Z``.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

#: Pauli code of LLR-triple slot w (X, Y, Z).
W_CODE = np.array([1, 3, 2], dtype=np.uint8)


@njit(cache=True)
def comm(a, b):
    a = np.int64(a)
    b = np.int64(b)
    return ((a & 1) & (b >> 1)) ^ ((a >> 1) & (b & 1))


@njit(cache=True)
def clamp(v, lim):
    if v > lim:
        return lim
    if v < -lim:
        return -lim
    return v


@njit(cache=True)
def lambda_code(sym, gx, gy, gz):
    """ln Pr(E * W = 0) / Pr(E * W = 1) for the symbol W with Pauli code ``sym``."""
    if sym == 1:
        gw, ga, gb = gx, gy, gz
    elif sym == 3:
        gw, ga, gb = gy, gx, gz
    else:
        gw, ga, gb = gz, gx, gy
    # (1 + e^-gw) / (e^-ga + e^-gb), factored by the largest exponent on each side
    if gw >= 0.0:
        num_log = 0.0
        num = 1.0 + math.exp(-gw)
    else:
        num_log = -gw
        num = math.exp(gw) + 1.0
    top = -ga if ga < gb else -gb
    den = math.exp(-ga - top) + math.exp(-gb - top)
    lam = math.log(num / den) + (num_log - top)
    if abs(lam) < 0.05 and max(abs(gw), abs(ga), abs(gb)) < 600.0:
        # the four terms nearly cancel; redo the difference in double-double
        return _lambda_dd(gw, ga, gb)
    return lam


_SPLIT = 134217729.0
_LN2_HI = 0.6931471805599453
_LN2_LO = 2.3190468138462996e-17


@njit(cache=True)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit(cache=True)
def _two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


@njit(cache=True)
def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    e += al + bl
    return _two_sum(s, e)


@njit(cache=True)
def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e += ah * bl + al * bh
    return _two_sum(p, e)


@njit(cache=True)
def _dd_exp(x):
    """exp(x) as an unevaluated sum hi + lo, accurate to about 1e-30 relative."""
    k = math.floor(x / _LN2_HI + 0.5)
    ph, pl = _two_prod(k, _LN2_HI)
    rh, rl = _dd_add(x, 0.0, -ph, -pl)
    rh, rl = _dd_add(rh, rl, -k * _LN2_LO, 0.0)
    # e^r = (e^(r/256))^256
    rh = rh / 256.0
    rl = rl / 256.0
    sh, sl = 1.0, 0.0
    th, tl = 1.0, 0.0
    for i in range(1, 14):
        th, tl = _dd_mul(th, tl, rh, rl)
        th = th / i
        tl = tl / i
        sh, sl = _dd_add(sh, sl, th, tl)
    for _ in range(8):
        sh, sl = _dd_mul(sh, sl, sh, sl)
    scale = 2.0 ** k
    return sh * scale, sl * scale


@njit(cache=True)
def _lambda_dd(gw, ga, gb):
    wh, wl = _dd_exp(-gw)
    ah, al = _dd_exp(-ga)
    bh, bl = _dd_exp(-gb)
    dh, dl = _dd_add(ah, al, bh, bl)
    nh, nl = _dd_add(1.0, 0.0, wh, wl)
    xh, xl = _dd_add(nh, nl, -dh, -dl)
    return math.log1p((xh + xl) / (dh + dl))


@njit(cache=True)
def log_abs_tanh_half(a):
    """ln|tanh(a/2)|, accurate near 0 and for large |a|."""
    x = abs(a)
    if x == 0.0:
        return -np.inf
    if x > 1.0:
        return math.log1p(-2.0 / (math.exp(x) + 1.0))
    return math.log(math.tanh(0.5 * x))


@njit(cache=True)
def boxplus_from_log(s):
    """2 atanh(e^s) for s <= 0, without cancellation near s = 0."""
    if s == -np.inf:
        return 0.0
    p = math.exp(s)
    if p < 0.5:
        return math.log1p(p) - math.log1p(-p)
    q = -math.expm1(s)
    if q == 0.0:
        return np.inf
    return math.log(2.0 - q) - math.log(q)


@njit(cache=True)
def boxplus_array(vals, lim):
    s = 0.0
    neg = 0
    for k in range(vals.size):
        a = clamp(vals[k], lim)
        if a < 0.0:
            neg ^= 1
        s += log_abs_tanh_half(a)
    r = boxplus_from_log(s)
    return -r if neg else r


@njit(cache=True)
def _set_message(e, val, lim, gvc, lmag, lneg):
    v = clamp(val, lim)
    gvc[e] = v
    lmag[e] = log_abs_tanh_half(v)
    lneg[e] = 1 if v < 0.0 else 0


@njit(cache=True)
def _init_messages(n_q, e_var, e_sym, lam_q, lam_b, lim, gvc, lmag, lneg):
    for e in range(e_var.size):
        j = e_var[e]
        if j < n_q:
            v = lambda_code(e_sym[e], lam_q[j, 0], lam_q[j, 1], lam_q[j, 2])
        else:
            v = lam_b[j - n_q]
        _set_message(e, v, lim, gvc, lmag, lneg)


@njit(cache=True)
def _check_to_var(i, e, chk_ptr, synd, lmag, lneg, lim):
    """Delta_{i->j} for edge e of check i from the current variable-to-check messages."""
    s = 0.0
    neg = synd[i]
    for f in range(chk_ptr[i], chk_ptr[i + 1]):
        if f != e:
            s += lmag[f]
            neg ^= lneg[f]
    d = clamp(boxplus_from_log(s), lim)
    return -d if neg else d


@njit(cache=True)
def _horizontal_all(chk_ptr, synd, lmag, lneg, lim, delta, pre, suf):
    """Parallel-schedule check update using prefix/suffix sums per check."""
    for i in range(chk_ptr.size - 1):
        lo = chk_ptr[i]
        hi = chk_ptr[i + 1]
        deg = hi - lo
        acc = 0.0
        par = 0
        for k in range(deg):
            pre[k] = acc
            acc += lmag[lo + k]
        acc = 0.0
        for k in range(deg - 1, -1, -1):
            suf[k] = acc
            acc += lmag[lo + k]
        tot_neg = synd[i]
        for k in range(deg):
            tot_neg ^= lneg[lo + k]
        for k in range(deg):
            d = clamp(boxplus_from_log(pre[k] + suf[k]), lim)
            par = tot_neg ^ lneg[lo + k]
            delta[lo + k] = -d if par else d


@njit(cache=True)
def _vertical(j, n_q, var_ptr, var_edges, e_sym, delta, lam_q, lam_b, inv_alpha, post_q, post_b):
    if j < n_q:
        sx = 0.0
        sy = 0.0
        sz = 0.0
        for k in range(var_ptr[j], var_ptr[j + 1]):
            e = var_edges[k]
            h = e_sym[e]
            d = delta[e]
            # W * H_ij = 1 for the two Paulis other than H_ij
            if comm(1, h):
                sx += d
            if comm(3, h):
                sy += d
            if comm(2, h):
                sz += d
        post_q[j, 0] = lam_q[j, 0] + inv_alpha * sx
        post_q[j, 1] = lam_q[j, 1] + inv_alpha * sy
        post_q[j, 2] = lam_q[j, 2] + inv_alpha * sz
    else:
        acc = 0.0
        for k in range(var_ptr[j], var_ptr[j + 1]):
            acc += delta[var_edges[k]]
        post_b[j - n_q] = lam_b[j - n_q] + inv_alpha * acc


@njit(cache=True)
def _var_to_checks(j, n_q, var_ptr, var_edges, e_sym, delta, post_q, post_b, lim, gvc, lmag, lneg):
    if j < n_q:
        gx = post_q[j, 0]
        gy = post_q[j, 1]
        gz = post_q[j, 2]
        for k in range(var_ptr[j], var_ptr[j + 1]):
            e = var_edges[k]
            h = e_sym[e]
            d = delta[e]
            v = lambda_code(h, gx - comm(1, h) * d, gy - comm(3, h) * d, gz - comm(2, h) * d)
            _set_message(e, v, lim, gvc, lmag, lneg)
    else:
        g = post_b[j - n_q]
        for k in range(var_ptr[j], var_ptr[j + 1]):
            e = var_edges[k]
            _set_message(e, g - delta[e], lim, gvc, lmag, lneg)


@njit(cache=True)
def _hard_decision(post_q, post_b, est_q, est_b):
    for j in range(post_q.shape[0]):
        gx = post_q[j, 0]
        gy = post_q[j, 1]
        gz = post_q[j, 2]
        if gx > 0.0 and gy > 0.0 and gz > 0.0:
            est_q[j] = 0
        else:
            # ties resolve X < Y < Z
            best = 0
            bv = gx
            if gy < bv:
                best = 1
                bv = gy
            if gz < bv:
                best = 2
            est_q[j] = W_CODE[best]
    for j in range(post_b.size):
        est_b[j] = 0 if post_b[j] > 0.0 else 1


@njit(cache=True)
def _syndrome_matches(chk_ptr, e_var, e_sym, n_q, synd, est_q, est_b):
    for i in range(chk_ptr.size - 1):
        p = np.int64(synd[i])
        for e in range(chk_ptr[i], chk_ptr[i + 1]):
            j = e_var[e]
            if j < n_q:
                p ^= comm(est_q[j], e_sym[e])
            else:
                p ^= np.int64(est_b[j - n_q])
        if p:
            return False
    return True


@njit(cache=True)
def mbp_run(
    chk_ptr, e_var, e_sym, var_ptr, var_edges, n_q,
    synd, lam_q, lam_b, alpha, t_max, serial, halt, lim,
    post_q, post_b, est_q, est_b,
):
    """One GDS-MBP run. Returns ``(converged, iterations)``; outputs land in the buffers."""
    n_e = e_var.size
    n_v = var_ptr.size - 1
    gvc = np.empty(n_e)
    lmag = np.empty(n_e)
    lneg = np.empty(n_e, dtype=np.int64)
    delta = np.zeros(n_e)
    max_deg = 1
    for i in range(chk_ptr.size - 1):
        max_deg = max(max_deg, chk_ptr[i + 1] - chk_ptr[i])
    pre = np.empty(max_deg)
    suf = np.empty(max_deg)
    # edge -> check lookup for the serial schedule
    e_chk = np.empty(n_e, dtype=np.int64)
    for i in range(chk_ptr.size - 1):
        for e in range(chk_ptr[i], chk_ptr[i + 1]):
            e_chk[e] = i

    _init_messages(n_q, e_var, e_sym, lam_q, lam_b, lim, gvc, lmag, lneg)
    inv_alpha = 1.0 / alpha
    converged = False
    t = 0
    while t < t_max:
        t += 1
        if serial:
            for j in range(n_v):
                for k in range(var_ptr[j], var_ptr[j + 1]):
                    e = var_edges[k]
                    delta[e] = _check_to_var(e_chk[e], e, chk_ptr, synd, lmag, lneg, lim)
                _vertical(j, n_q, var_ptr, var_edges, e_sym, delta, lam_q, lam_b, inv_alpha, post_q, post_b)
                _var_to_checks(j, n_q, var_ptr, var_edges, e_sym, delta, post_q, post_b, lim, gvc, lmag, lneg)
        else:
            _horizontal_all(chk_ptr, synd, lmag, lneg, lim, delta, pre, suf)
            for j in range(n_v):
                _vertical(j, n_q, var_ptr, var_edges, e_sym, delta, lam_q, lam_b, inv_alpha, post_q, post_b)
        _hard_decision(post_q, post_b, est_q, est_b)
        if _syndrome_matches(chk_ptr, e_var, e_sym, n_q, synd, est_q, est_b):
            converged = True
            if halt:
                break
        else:
            converged = False
        if t == t_max:
            break
        if not serial:
            for j in range(n_v):
                _var_to_checks(j, n_q, var_ptr, var_edges, e_sym, delta, post_q, post_b, lim, gvc, lmag, lneg)
    return converged, t


@njit(cache=True)
def ambp_run(
    chk_ptr, e_var, e_sym, var_ptr, var_edges, n_q,
    synd, lam_q, lam_b, alphas, t_max, serial, halt, lim,
    post_q, post_b, est_q, est_b,
):
    """Adaptive sweep over ``alphas``. Returns ``(converged, iterations, alpha_index)``."""
    iters = 0
    for a in range(alphas.size):
        ok, iters = mbp_run(
            chk_ptr, e_var, e_sym, var_ptr, var_edges, n_q,
            synd, lam_q, lam_b, alphas[a], t_max, serial, halt, lim,
            post_q, post_b, est_q, est_b,
        )
        if ok:
            return True, iters, a
    return False, iters, alphas.size - 1
