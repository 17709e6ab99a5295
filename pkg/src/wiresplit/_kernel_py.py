"""Pure-Python integration kernel (fallback backend).

Mirror of the compiled extension ``wiresplit._kernel``: same Dormand-Prince
5(4) pair, same step controller, same cubic-Hermite dense output and event
bisection, with every floating-point operation in the same order, so both
backends produce identical trajectories. This module is used automatically
when the extension is not built; it is roughly two orders of magnitude
slower.

State vector: (x, z, vx, vz). The force is the superposition of
independent single-wire repulsions, a = sum_i alpha I_i^2 / r_i^3 * rhat_i,
so each deflection is a clean single-wire scattering; see
``wiresplit.field`` for the relation to the full field energy.
"""

import math

STATUS_OK = 0
STATUS_SINGULARITY = 1
STATUS_UNDERFLOW = 2
STATUS_MAXSTEPS = 3

# Dormand-Prince 5(4) tableau
_C2 = 0.2
_C3 = 0.3
_C4 = 0.8
_C5 = 8.0 / 9.0
_A21 = 0.2
_A31 = 3.0 / 40.0
_A32 = 9.0 / 40.0
_A41 = 44.0 / 45.0
_A42 = -56.0 / 15.0
_A43 = 32.0 / 9.0
_A51 = 19372.0 / 6561.0
_A52 = -25360.0 / 2187.0
_A53 = 64448.0 / 6561.0
_A54 = -212.0 / 729.0
_A61 = 9017.0 / 3168.0
_A62 = -355.0 / 33.0
_A63 = 46732.0 / 5247.0
_A64 = 49.0 / 176.0
_A65 = -5103.0 / 18656.0
_B1 = 35.0 / 384.0
_B3 = 500.0 / 1113.0
_B4 = 125.0 / 192.0
_B5 = -2187.0 / 6784.0
_B6 = 11.0 / 84.0
# error = 5th-order minus embedded 4th-order weights
_E1 = 71.0 / 57600.0
_E3 = -71.0 / 16695.0
_E4 = 71.0 / 1920.0
_E5 = -17253.0 / 339200.0
_E6 = 22.0 / 525.0
_E7 = -1.0 / 40.0

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_EPS = 2.220446049250313e-16
_NAN = float("nan")


def integrate(x0, z0, vx0, vz0, t0, duration,
              wires_x, wires_z, wires_current, alpha,
              rtol, atol, guard_radius, max_steps,
              x_plane, stop_at_closure, event_dt):
    """Integrate one packet through the wire array.

    Returns a plain dict (arrays as lists); the integrator module wraps it.
    Events -- apex of |z|, per-wire periapsis, first re-crossing of the
    launch plane moving in -x -- are located by sign-change bracketing on
    the dense output and refined by bisection to ``event_dt`` seconds.
    """
    n = len(wires_x)
    wx = [float(v) for v in wires_x]
    wz = [float(v) for v in wires_z]
    wi = [float(v) for v in wires_current]
    alpha = float(alpha)
    guard2 = guard_radius * guard_radius
    tiny_r2 = guard2 * 1e-6
    sqrt = math.sqrt

    n_rhs = 0

    def accel(px, pz):
        ax = 0.0
        az = 0.0
        for i in range(n):
            cur = wi[i]
            if cur == 0.0:
                continue
            dx = px - wx[i]
            dz = pz - wz[i]
            r2 = dx * dx + dz * dz
            if r2 <= tiny_r2:
                return (_NAN, _NAN)
            c = alpha * cur * cur / (r2 * r2)
            ax += c * dx
            az += c * dz
        return (ax, az)

    t = float(t0)
    t_bound = t0 + duration
    x = float(x0)
    z = float(z0)
    vx = float(vx0)
    vz = float(vz0)

    # event accumulators
    best_apex_absz = abs(z)
    apex = (t, x, z, vx, vz)
    peri_dist = [0.0] * n
    peri_state = [None] * n
    for i in range(n):
        dx = x - wx[i]
        dz = z - wz[i]
        peri_dist[i] = sqrt(dx * dx + dz * dz)
        peri_state[i] = (t, x, z, vx, vz)
    closure = None

    ts = [t]
    xs = [x]
    zs = [z]
    vxs = [vx]
    vzs = [vz]

    status = STATUS_OK
    fail_wire = -1
    t_fail = 0.0
    n_steps = 0
    n_rejected = 0
    min_step = duration

    ax, az = accel(x, z)
    n_rhs += 1
    k1x = vx
    k1z = vz
    k1vx = ax
    k1vz = az

    # initial step size (Hairer-style heuristic)
    sc_x = atol + rtol * abs(x)
    sc_z = atol + rtol * abs(z)
    sc_vx = atol + rtol * abs(vx)
    sc_vz = atol + rtol * abs(vz)
    q0 = x / sc_x
    q1 = z / sc_z
    q2 = vx / sc_vx
    q3 = vz / sc_vz
    d0 = sqrt(0.25 * (q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3))
    q0 = k1x / sc_x
    q1 = k1z / sc_z
    q2 = k1vx / sc_vx
    q3 = k1vz / sc_vz
    d1 = sqrt(0.25 * (q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3))
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    if h0 > duration:
        h0 = duration
    ax1, az1 = accel(x + h0 * k1x, z + h0 * k1z)
    n_rhs += 1
    q0 = (vx + h0 * k1vx - k1x) / sc_x
    q1 = (vz + h0 * k1vz - k1z) / sc_z
    q2 = (ax1 - k1vx) / sc_vx
    q3 = (az1 - k1vz) / sc_vz
    d2 = sqrt(0.25 * (q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3)) / h0
    dm = d1 if d1 > d2 else d2
    if dm <= 1e-15:
        h1 = h0 * 1e-3 if h0 * 1e-3 > 1e-6 else 1e-6
    else:
        h1 = (0.01 / dm) ** 0.2
    h = min(100.0 * h0, h1, duration)
    if not (h > 0.0) or h != h:
        h = duration * 1e-6

    while True:
        if t >= t_bound:
            break
        if n_steps + n_rejected >= max_steps:
            status = STATUS_MAXSTEPS
            t_fail = t
            break
        h_floor = 16.0 * _EPS * (abs(t) if abs(t) > abs(t_bound) else abs(t_bound))
        if h < h_floor:
            status = STATUS_UNDERFLOW
            t_fail = t
            break
        last = False
        if t + h >= t_bound:
            h = t_bound - t
            last = True

        # stages 2..6
        xs2 = x + h * (_A21 * k1x)
        zs2 = z + h * (_A21 * k1z)
        k2x = vx + h * (_A21 * k1vx)
        k2z = vz + h * (_A21 * k1vz)
        k2vx, k2vz = accel(xs2, zs2)

        xs3 = x + h * (_A31 * k1x + _A32 * k2x)
        zs3 = z + h * (_A31 * k1z + _A32 * k2z)
        k3x = vx + h * (_A31 * k1vx + _A32 * k2vx)
        k3z = vz + h * (_A31 * k1vz + _A32 * k2vz)
        k3vx, k3vz = accel(xs3, zs3)

        xs4 = x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
        zs4 = z + h * (_A41 * k1z + _A42 * k2z + _A43 * k3z)
        k4x = vx + h * (_A41 * k1vx + _A42 * k2vx + _A43 * k3vx)
        k4z = vz + h * (_A41 * k1vz + _A42 * k2vz + _A43 * k3vz)
        k4vx, k4vz = accel(xs4, zs4)

        xs5 = x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
        zs5 = z + h * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z)
        k5x = vx + h * (_A51 * k1vx + _A52 * k2vx + _A53 * k3vx + _A54 * k4vx)
        k5z = vz + h * (_A51 * k1vz + _A52 * k2vz + _A53 * k3vz + _A54 * k4vz)
        k5vx, k5vz = accel(xs5, zs5)

        xs6 = x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x)
        zs6 = z + h * (_A61 * k1z + _A62 * k2z + _A63 * k3z + _A64 * k4z + _A65 * k5z)
        k6x = vx + h * (_A61 * k1vx + _A62 * k2vx + _A63 * k3vx + _A64 * k4vx + _A65 * k5vx)
        k6z = vz + h * (_A61 * k1vz + _A62 * k2vz + _A63 * k3vz + _A64 * k4vz + _A65 * k5vz)
        k6vx, k6vz = accel(xs6, zs6)

        n_rhs += 6

        # 5th-order solution; its derivative is the FSAL stage k7
        x_new = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
        z_new = z + h * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
        vx_new = vx + h * (_B1 * k1vx + _B3 * k3vx + _B4 * k4vx + _B5 * k5vx + _B6 * k6vx)
        vz_new = vz + h * (_B1 * k1vz + _B3 * k3vz + _B4 * k4vz + _B5 * k5vz + _B6 * k6vz)
        k7x = vx_new
        k7z = vz_new
        k7vx, k7vz = accel(x_new, z_new)

        err_x = h * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        err_z = h * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z + _E6 * k6z + _E7 * k7z)
        err_vx = h * (_E1 * k1vx + _E3 * k3vx + _E4 * k4vx + _E5 * k5vx + _E6 * k6vx + _E7 * k7vx)
        err_vz = h * (_E1 * k1vz + _E3 * k3vz + _E4 * k4vz + _E5 * k5vz + _E6 * k6vz + _E7 * k7vz)

        sc_x = atol + rtol * (abs(x) if abs(x) > abs(x_new) else abs(x_new))
        sc_z = atol + rtol * (abs(z) if abs(z) > abs(z_new) else abs(z_new))
        sc_vx = atol + rtol * (abs(vx) if abs(vx) > abs(vx_new) else abs(vx_new))
        sc_vz = atol + rtol * (abs(vz) if abs(vz) > abs(vz_new) else abs(vz_new))
        q0 = err_x / sc_x
        q1 = err_z / sc_z
        q2 = err_vx / sc_vx
        q3 = err_vz / sc_vz
        err_norm = sqrt(0.25 * (q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3))

        if not (err_norm <= 1.0):
            n_rejected += 1
            if err_norm != err_norm:  # NaN: a stage hit a pole
                fac = 0.1
            else:
                fac = _SAFETY * err_norm**-0.2
                if fac < _MIN_FACTOR:
                    fac = _MIN_FACTOR
            h = h * fac
            continue

        # --- accepted ---
        t_new = t_bound if last else t + h

        def dense(theta):
            om = 1.0 - theta
            h00 = (1.0 + 2.0 * theta) * om * om
            h10 = theta * om * om
            h01 = theta * theta * (3.0 - 2.0 * theta)
            h11 = theta * theta * (theta - 1.0)
            return (
                h00 * x + h10 * h * k1x + h01 * x_new + h11 * h * k7x,
                h00 * z + h10 * h * k1z + h01 * z_new + h11 * h * k7z,
                h00 * vx + h10 * h * k1vx + h01 * vx_new + h11 * h * k7vx,
                h00 * vz + h10 * h * k1vz + h01 * vz_new + h11 * h * k7vz,
            )

        theta_end = 1.0
        x_end = x_new
        z_end = z_new
        vx_end = vx_new
        vz_end = vz_new
        t_end = t_new
        truncated = False

        # closure: first crossing of the plane x = x_plane moving in -x
        if closure is None:
            gx0 = x - x_plane
            gx1 = x_end - x_plane
            if gx0 > 0.0 and gx1 <= 0.0:
                lo = 0.0
                hi = 1.0
                for _ in range(80):
                    if (hi - lo) * h <= event_dt:
                        break
                    mid = 0.5 * (lo + hi)
                    xm, zm, vxm, vzm = dense(mid)
                    if xm - x_plane > 0.0:
                        lo = mid
                    else:
                        hi = mid
                xc, zc, vxc, vzc = dense(hi)
                tc = t + hi * h
                if vxc < 0.0:
                    closure = (tc, xc, zc, vxc, vzc)
                    if stop_at_closure:
                        theta_end = hi
                        x_end = xc
                        z_end = zc
                        vx_end = vxc
                        vz_end = vzc
                        t_end = tc
                        truncated = True

        # apex: interior extremum of z (vz sign change)
        if vz * vz_end < 0.0:
            lo = 0.0
            hi = theta_end
            g_lo = vz
            for _ in range(80):
                if (hi - lo) * h <= event_dt:
                    break
                mid = 0.5 * (lo + hi)
                xm, zm, vxm, vzm = dense(mid)
                if (g_lo > 0.0) == (vzm > 0.0):
                    lo = mid
                    g_lo = vzm
                else:
                    hi = mid
            th = 0.5 * (lo + hi)
            xa, za, vxa, vza = dense(th)
            if abs(za) > best_apex_absz:
                best_apex_absz = abs(za)
                apex = (t + th * h, xa, za, vxa, vza)

        # per-wire periapsis: radial speed changes sign - -> +
        for i in range(n):
            dx0 = x - wx[i]
            dz0 = z - wz[i]
            g0 = dx0 * vx + dz0 * vz
            dx1 = x_end - wx[i]
            dz1 = z_end - wz[i]
            g1 = dx1 * vx_end + dz1 * vz_end
            if g0 < 0.0 and g1 >= 0.0:
                lo = 0.0
                hi = theta_end
                for _ in range(80):
                    if (hi - lo) * h <= event_dt:
                        break
                    mid = 0.5 * (lo + hi)
                    xm, zm, vxm, vzm = dense(mid)
                    if (xm - wx[i]) * vxm + (zm - wz[i]) * vzm < 0.0:
                        lo = mid
                    else:
                        hi = mid
                th = 0.5 * (lo + hi)
                xp, zp, vxp, vzp = dense(th)
                dxp = xp - wx[i]
                dzp = zp - wz[i]
                dist = sqrt(dxp * dxp + dzp * dzp)
                if dist < peri_dist[i]:
                    peri_dist[i] = dist
                    peri_state[i] = (t + th * h, xp, zp, vxp, vzp)
                if wi[i] != 0.0 and dist * dist <= guard2:
                    status = STATUS_SINGULARITY
                    fail_wire = i
                    t_fail = t + th * h
            d_end = sqrt(dx1 * dx1 + dz1 * dz1)
            if d_end < peri_dist[i]:
                peri_dist[i] = d_end
                peri_state[i] = (t_end, x_end, z_end, vx_end, vz_end)
            if wi[i] != 0.0 and d_end * d_end <= guard2:
                status = STATUS_SINGULARITY
                fail_wire = i
                t_fail = t_end

        ts.append(t_end)
        xs.append(x_end)
        zs.append(z_end)
        vxs.append(vx_end)
        vzs.append(vz_end)
        n_steps += 1
        if h < min_step:
            min_step = h

        if status == STATUS_SINGULARITY:
            break

        t = t_end
        x = x_end
        z = z_end
        vx = vx_end
        vz = vz_end
        if truncated:
            # re-seed the derivative at the truncated state
            ax, az = accel(x, z)
            n_rhs += 1
            k1x = vx
            k1z = vz
            k1vx = ax
            k1vz = az
            break
        k1x = k7x
        k1z = k7z
        k1vx = k7vx
        k1vz = k7vz

        if err_norm == 0.0:
            fac = _MAX_FACTOR
        else:
            fac = _SAFETY * err_norm**-0.2
            if fac > _MAX_FACTOR:
                fac = _MAX_FACTOR
            elif fac < _MIN_FACTOR:
                fac = _MIN_FACTOR
        h = h * fac

    # trajectory endpoints compete for the apex
    if abs(z) > best_apex_absz:
        best_apex_absz = abs(z)
        apex = (t, x, z, vx, vz)

    return {
        "status": status,
        "fail_wire": fail_wire,
        "t_fail": t_fail,
        "t": ts,
        "x": xs,
        "z": zs,
        "vx": vxs,
        "vz": vzs,
        "apex": apex,
        "periapsis_distance": peri_dist,
        "periapsis_state": peri_state,
        "closure": closure,
        "n_steps": n_steps,
        "n_rejected": n_rejected,
        "n_rhs": n_rhs,
        "min_step": min_step,
    }
