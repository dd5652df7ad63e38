"""Compiled per-pixel kernel for the edit pipeline.

Mirrors the numpy implementation in editing.py step for step; the numpy
path remains the reference and the tests hold the two within 1e-12. The
kernel releases the GIL so thread-pooled chunks can overlap.
"""

from __future__ import annotations

import numpy as np
from numba import njit

TWO_PI = 2.0 * np.pi
ALPHA_MAX = np.nextafter(1.0, 0.0)  # sector position stays in [0, 1)


@njit(cache=True, nogil=True)
def edit_pixels(
    c,
    asg,
    out,
    # before structure
    a,
    d,
    dd,
    u,
    e0,
    w,
    length,
    thetas,
    span_before,
    # after structure, aligned with before indices
    a2,
    u2,
    e02,
    w2,
    length2,
    after_thetas,
    dth_after,
    ratio,
    h_slope,
    tri_ab,
    tri_ac,
    tri_abab,
    tri_abac,
    tri_acac,
    filter_scale,
    radial_eps,
):
    k = len(thetas)
    for px in range(len(c)):
        cx = c[px, 0] - a[0]
        cy = c[px, 1] - a[1]
        cz = c[px, 2] - a[2]
        h = (cx * d[0] + cy * d[1] + cz * d[2]) / dd
        hl = h * length
        px_x = cx - hl * u[0]
        px_y = cy - hl * u[1]
        px_z = cz - hl * u[2]
        x = px_x * e0[0] + px_y * e0[1] + px_z * e0[2]
        y = px_x * w[0] + px_y * w[1] + px_z * w[2]
        r = np.hypot(x, y)

        if r < radial_eps:
            # on-axis colors just follow the axis at their height
            ox = a2[0] + h * length2 * u2[0]
            oy = a2[1] + h * length2 * u2[1]
            oz = a2[2] + h * length2 * u2[2]
        else:
            theta = np.arctan2(y, x)
            if theta <= -np.pi:
                theta = np.pi
            if k == 1:
                i = 0
                j = 0
                alpha = ((theta - thetas[0]) % TWO_PI) / TWO_PI
            else:
                # thetas is sorted ascending; find the bracketing triangle
                i = k - 1
                for t in range(k):
                    if thetas[t] > theta:
                        i = t - 1 if t > 0 else k - 1
                        break
                j = (i + 1) % k
                alpha = ((theta - thetas[i]) % TWO_PI) / span_before[i]
                # keep the sector half-open, matching _sector_arrays
                if alpha >= 1.0:
                    alpha = ALPHA_MAX
            beta = 1.0 - alpha
            th_out = after_thetas[i] + alpha * dth_after[i]
            r_out = r * (beta * ratio[i] + alpha * ratio[j])
            h_out = h + r * (beta * h_slope[i] + alpha * h_slope[j])

            ct = np.cos(th_out)
            st = np.sin(th_out)
            hl2 = h_out * length2
            ox = a2[0] + hl2 * u2[0] + r_out * (ct * e02[0] + st * w2[0])
            oy = a2[1] + hl2 * u2[1] + r_out * (ct * e02[1] + st * w2[1])
            oz = a2[2] + hl2 * u2[2] + r_out * (ct * e02[2] + st * w2[2])

        # structural filter against the assigned edited triangle
        t = asg[px]
        qx, qy, qz = _closest_point_tri(
            ox,
            oy,
            oz,
            a2,
            tri_ab,
            tri_ac[t],
            tri_abab,
            tri_abac[t],
            tri_acac[t],
        )
        ox = qx + filter_scale * (ox - qx)
        oy = qy + filter_scale * (oy - qy)
        oz = qz + filter_scale * (oz - qz)

        out[px, 0] = min(max(ox, 0.0), 1.0)
        out[px, 1] = min(max(oy, 0.0), 1.0)
        out[px, 2] = min(max(oz, 0.0), 1.0)


@njit(cache=True, nogil=True, inline="always")
def _closest_point_tri(px, py, pz, a, ab, ac, abab, abac, acac):
    apx = px - a[0]
    apy = py - a[1]
    apz = pz - a[2]
    d1 = apx * ab[0] + apy * ab[1] + apz * ab[2]
    d2 = apx * ac[0] + apy * ac[1] + apz * ac[2]
    d3 = d1 - abab
    d4 = d2 - abac
    d5 = d1 - abac
    d6 = d2 - acac

    if d1 <= 0.0 and d2 <= 0.0:
        v = 0.0
        wgt = 0.0
    elif d3 >= 0.0 and d4 <= d3:
        v = 1.0
        wgt = 0.0
    elif d6 >= 0.0 and d5 <= d6:
        v = 0.0
        wgt = 1.0
    else:
        va = d3 * d6 - d5 * d4
        vb = d5 * d2 - d1 * d6
        vc = d1 * d4 - d3 * d2
        if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
            v = min(max(d1 / (d1 - d3), 0.0), 1.0)
            wgt = 0.0
        elif vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0:
            v = 0.0
            wgt = min(max(d2 / (d2 - d6), 0.0), 1.0)
        elif va <= 0.0 and d4 - d3 >= 0.0 and d5 - d6 >= 0.0:
            wgt = min(max((d4 - d3) / ((d4 - d3) + (d5 - d6)), 0.0), 1.0)
            v = 1.0 - wgt
        else:
            denom = va + vb + vc
            v = vb / denom
            wgt = vc / denom
    return (
        a[0] + v * ab[0] + wgt * ac[0],
        a[1] + v * ab[1] + wgt * ac[1],
        a[2] + v * ab[2] + wgt * ac[2],
    )
