# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integration kernel (fast backend).

Same algorithm as ``wiresplit._kernel_py`` -- Dormand-Prince 5(4) over the
superposed single-wire repulsions, cubic Hermite dense output, bisection
event refinement -- with every operation in the same order so both backends
produce identical doubles. Built without -ffast-math or FMA contraction for
exactly that reason.
"""

from libc.math cimport fabs, pow, sqrt
from libc.stdlib cimport free, malloc

STATUS_OK = 0
STATUS_SINGULARITY = 1
STATUS_UNDERFLOW = 2
STATUS_MAXSTEPS = 3

cdef double _C2 = 0.2
cdef double _C3 = 0.3
cdef double _C4 = 0.8
cdef double _C5 = 8.0 / 9.0
cdef double _A21 = 0.2
cdef double _A31 = 3.0 / 40.0
cdef double _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0
cdef double _A42 = -56.0 / 15.0
cdef double _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0
cdef double _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0
cdef double _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0
cdef double _A62 = -355.0 / 33.0
cdef double _A63 = 46732.0 / 5247.0
cdef double _A64 = 49.0 / 176.0
cdef double _A65 = -5103.0 / 18656.0
cdef double _B1 = 35.0 / 384.0
cdef double _B3 = 500.0 / 1113.0
cdef double _B4 = 125.0 / 192.0
cdef double _B5 = -2187.0 / 6784.0
cdef double _B6 = 11.0 / 84.0
cdef double _E1 = 71.0 / 57600.0
cdef double _E3 = -71.0 / 16695.0
cdef double _E4 = 71.0 / 1920.0
cdef double _E5 = -17253.0 / 339200.0
cdef double _E6 = 22.0 / 525.0
cdef double _E7 = -1.0 / 40.0

cdef double _SAFETY = 0.9
cdef double _MIN_FACTOR = 0.2
cdef double _MAX_FACTOR = 5.0
cdef double _EPS = 2.220446049250313e-16
cdef double _NAN = float("nan")


cdef inline void _accel(double px, double pz, int n,
                        double* wx, double* wz, double* wi,
                        double tiny_r2, double alpha, double* out) noexcept:
    cdef double ax = 0.0
    cdef double az = 0.0
    cdef double cur, dx, dz, r2, c
    cdef int i
    for i in range(n):
        cur = wi[i]
        if cur == 0.0:
            continue
        dx = px - wx[i]
        dz = pz - wz[i]
        r2 = dx * dx + dz * dz
        if r2 <= tiny_r2:
            out[0] = _NAN
            out[1] = _NAN
            return
        c = alpha * cur * cur / (r2 * r2)
        ax += c * dx
        az += c * dz
    out[0] = ax
    out[1] = az


cdef inline void _dense(double theta, double h,
                        double x, double z, double vx, double vz,
                        double k1x, double k1z, double k1vx, double k1vz,
                        double xn, double zn, double vxn, double vzn,
                        double k7x, double k7z, double k7vx, double k7vz,
                        double* out) noexcept:
    cdef double om = 1.0 - theta
    cdef double h00 = (1.0 + 2.0 * theta) * om * om
    cdef double h10 = theta * om * om
    cdef double h01 = theta * theta * (3.0 - 2.0 * theta)
    cdef double h11 = theta * theta * (theta - 1.0)
    out[0] = h00 * x + h10 * h * k1x + h01 * xn + h11 * h * k7x
    out[1] = h00 * z + h10 * h * k1z + h01 * zn + h11 * h * k7z
    out[2] = h00 * vx + h10 * h * k1vx + h01 * vxn + h11 * h * k7vx
    out[3] = h00 * vz + h10 * h * k1vz + h01 * vzn + h11 * h * k7vz


def integrate(double x0, double z0, double vx0, double vz0,
              double t0, double duration,
              wires_x, wires_z, wires_current, double alpha,
              double rtol, double atol, double guard_radius, long max_steps,
              double x_plane, bint stop_at_closure, double event_dt):
    """Compiled twin of ``wiresplit._kernel_py.integrate``."""
    cdef int n = len(wires_x)
    cdef double* wx = <double*> malloc(n * sizeof(double)) if n else NULL
    cdef double* wz = <double*> malloc(n * sizeof(double)) if n else NULL
    cdef double* wi = <double*> malloc(n * sizeof(double)) if n else NULL
    cdef double* peri_dist = <double*> malloc(n * sizeof(double)) if n else NULL
    cdef double* peri_st = <double*> malloc(5 * n * sizeof(double)) if n else NULL
    cdef int i
    for i in range(n):
        wx[i] = wires_x[i]
        wz[i] = wires_z[i]
        wi[i] = wires_current[i]

    cdef double guard2 = guard_radius * guard_radius
    cdef double tiny_r2 = guard2 * 1e-6

    cdef long n_rhs = 0
    cdef double t = t0
    cdef double t_bound = t0 + duration
    cdef double x = x0
    cdef double z = z0
    cdef double vx = vx0
    cdef double vz = vz0

    cdef double best_apex_absz = fabs(z)
    cdef double apex_t = t, apex_x = x, apex_z = z, apex_vx = vx, apex_vz = vz
    cdef double dx, dz
    for i in range(n):
        dx = x - wx[i]
        dz = z - wz[i]
        peri_dist[i] = sqrt(dx * dx + dz * dz)
        peri_st[5 * i + 0] = t
        peri_st[5 * i + 1] = x
        peri_st[5 * i + 2] = z
        peri_st[5 * i + 3] = vx
        peri_st[5 * i + 4] = vz
    cdef bint have_closure = False
    cdef double clo_t = 0.0, clo_x = 0.0, clo_z = 0.0, clo_vx = 0.0, clo_vz = 0.0

    ts = [t]
    xs = [x]
    zs = [z]
    vxs = [vx]
    vzs = [vz]

    cdef int status = STATUS_OK
    cdef int fail_wire = -1
    cdef double t_fail = 0.0
    cdef long n_steps = 0
    cdef long n_rejected = 0
    cdef double min_step = duration

    cdef double out2[2]
    cdef double out4[4]

    _accel(x, z, n, wx, wz, wi, tiny_r2, alpha, out2)
    n_rhs += 1
    cdef double k1x = vx
    cdef double k1z = vz
    cdef double k1vx = out2[0]
    cdef double k1vz = out2[1]

    cdef double sc_x = atol + rtol * fabs(x)
    cdef double sc_z = atol + rtol * fabs(z)
    cdef double sc_vx = atol + rtol * fabs(vx)
    cdef double sc_vz = atol + rtol * fabs(vz)
    cdef double q0 = x / sc_x
    cdef double q1 = z / sc_z
    cdef double q2 = vx / sc_vx
    cdef double q3 = vz / sc_vz
    cdef double d0 = sqrt(0.25 * (q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3))
    q0 = k1x / sc_x
    q1 = k1z / sc_z
    q2 = k1vx / sc_vx
    q3 = k1vz / sc_vz
    cdef double d1 = sqrt(0.25 * (q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3))
    cdef double h0
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    if h0 > duration:
        h0 = duration
    _accel(x + h0 * k1x, z + h0 * k1z, n, wx, wz, wi, tiny_r2, alpha, out2)
    n_rhs += 1
    q0 = (vx + h0 * k1vx - k1x) / sc_x
    q1 = (vz + h0 * k1vz - k1z) / sc_z
    q2 = (out2[0] - k1vx) / sc_vx
    q3 = (out2[1] - k1vz) / sc_vz
    cdef double d2 = sqrt(0.25 * (q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3)) / h0
    cdef double dm = d1 if d1 > d2 else d2
    cdef double h1
    if dm <= 1e-15:
        h1 = h0 * 1e-3 if h0 * 1e-3 > 1e-6 else 1e-6
    else:
        h1 = pow(0.01 / dm, 0.2)
    cdef double h = min(100.0 * h0, h1, duration)
    if not (h > 0.0) or h != h:
        h = duration * 1e-6

    cdef bint last, truncated
    cdef double h_floor, t_new, err_norm, fac
    cdef double xs2, zs2, k2x, k2z, k2vx, k2vz
    cdef double xs3, zs3, k3x, k3z, k3vx, k3vz
    cdef double xs4, zs4, k4x, k4z, k4vx, k4vz
    cdef double xs5, zs5, k5x, k5z, k5vx, k5vz
    cdef double xs6, zs6, k6x, k6z, k6vx, k6vz
    cdef double x_new, z_new, vx_new, vz_new
    cdef double k7x, k7z, k7vx, k7vz
    cdef double err_x, err_z, err_vx, err_vz
    cdef double theta_end, x_end, z_end, vx_end, vz_end, t_end
    cdef double gx0, gx1, lo, hi, mid, g_lo, th
    cdef double dx0, dz0, g0, dx1, dz1, g1, dxp, dzp, dist, d_end
    cdef int it

    while True:
        if t >= t_bound:
            break
        if n_steps + n_rejected >= max_steps:
            status = STATUS_MAXSTEPS
            t_fail = t
            break
        h_floor = 16.0 * _EPS * (fabs(t) if fabs(t) > fabs(t_bound) else fabs(t_bound))
        if h < h_floor:
            status = STATUS_UNDERFLOW
            t_fail = t
            break
        last = False
        if t + h >= t_bound:
            h = t_bound - t
            last = True

        xs2 = x + h * (_A21 * k1x)
        zs2 = z + h * (_A21 * k1z)
        k2x = vx + h * (_A21 * k1vx)
        k2z = vz + h * (_A21 * k1vz)
        _accel(xs2, zs2, n, wx, wz, wi, tiny_r2, alpha, out2)
        k2vx = out2[0]
        k2vz = out2[1]

        xs3 = x + h * (_A31 * k1x + _A32 * k2x)
        zs3 = z + h * (_A31 * k1z + _A32 * k2z)
        k3x = vx + h * (_A31 * k1vx + _A32 * k2vx)
        k3z = vz + h * (_A31 * k1vz + _A32 * k2vz)
        _accel(xs3, zs3, n, wx, wz, wi, tiny_r2, alpha, out2)
        k3vx = out2[0]
        k3vz = out2[1]

        xs4 = x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
        zs4 = z + h * (_A41 * k1z + _A42 * k2z + _A43 * k3z)
        k4x = vx + h * (_A41 * k1vx + _A42 * k2vx + _A43 * k3vx)
        k4z = vz + h * (_A41 * k1vz + _A42 * k2vz + _A43 * k3vz)
        _accel(xs4, zs4, n, wx, wz, wi, tiny_r2, alpha, out2)
        k4vx = out2[0]
        k4vz = out2[1]

        xs5 = x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
        zs5 = z + h * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z)
        k5x = vx + h * (_A51 * k1vx + _A52 * k2vx + _A53 * k3vx + _A54 * k4vx)
        k5z = vz + h * (_A51 * k1vz + _A52 * k2vz + _A53 * k3vz + _A54 * k4vz)
        _accel(xs5, zs5, n, wx, wz, wi, tiny_r2, alpha, out2)
        k5vx = out2[0]
        k5vz = out2[1]

        xs6 = x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x)
        zs6 = z + h * (_A61 * k1z + _A62 * k2z + _A63 * k3z + _A64 * k4z + _A65 * k5z)
        k6x = vx + h * (_A61 * k1vx + _A62 * k2vx + _A63 * k3vx + _A64 * k4vx + _A65 * k5vx)
        k6z = vz + h * (_A61 * k1vz + _A62 * k2vz + _A63 * k3vz + _A64 * k4vz + _A65 * k5vz)
        _accel(xs6, zs6, n, wx, wz, wi, tiny_r2, alpha, out2)
        k6vx = out2[0]
        k6vz = out2[1]

        n_rhs += 6

        x_new = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
        z_new = z + h * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
        vx_new = vx + h * (_B1 * k1vx + _B3 * k3vx + _B4 * k4vx + _B5 * k5vx + _B6 * k6vx)
        vz_new = vz + h * (_B1 * k1vz + _B3 * k3vz + _B4 * k4vz + _B5 * k5vz + _B6 * k6vz)
        k7x = vx_new
        k7z = vz_new
        _accel(x_new, z_new, n, wx, wz, wi, tiny_r2, alpha, out2)
        k7vx = out2[0]
        k7vz = out2[1]

        err_x = h * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        err_z = h * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z + _E6 * k6z + _E7 * k7z)
        err_vx = h * (_E1 * k1vx + _E3 * k3vx + _E4 * k4vx + _E5 * k5vx + _E6 * k6vx + _E7 * k7vx)
        err_vz = h * (_E1 * k1vz + _E3 * k3vz + _E4 * k4vz + _E5 * k5vz + _E6 * k6vz + _E7 * k7vz)

        sc_x = atol + rtol * (fabs(x) if fabs(x) > fabs(x_new) else fabs(x_new))
        sc_z = atol + rtol * (fabs(z) if fabs(z) > fabs(z_new) else fabs(z_new))
        sc_vx = atol + rtol * (fabs(vx) if fabs(vx) > fabs(vx_new) else fabs(vx_new))
        sc_vz = atol + rtol * (fabs(vz) if fabs(vz) > fabs(vz_new) else fabs(vz_new))
        q0 = err_x / sc_x
        q1 = err_z / sc_z
        q2 = err_vx / sc_vx
        q3 = err_vz / sc_vz
        err_norm = sqrt(0.25 * (q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3))

        if not (err_norm <= 1.0):
            n_rejected += 1
            if err_norm != err_norm:
                fac = 0.1
            else:
                fac = _SAFETY * pow(err_norm, -0.2)
                if fac < _MIN_FACTOR:
                    fac = _MIN_FACTOR
            h = h * fac
            continue

        t_new = t_bound if last else t + h

        theta_end = 1.0
        x_end = x_new
        z_end = z_new
        vx_end = vx_new
        vz_end = vz_new
        t_end = t_new
        truncated = False

        if not have_closure:
            gx0 = x - x_plane
            gx1 = x_end - x_plane
            if gx0 > 0.0 and gx1 <= 0.0:
                lo = 0.0
                hi = 1.0
                for it in range(80):
                    if (hi - lo) * h <= event_dt:
                        break
                    mid = 0.5 * (lo + hi)
                    _dense(mid, h, x, z, vx, vz, k1x, k1z, k1vx, k1vz,
                           x_new, z_new, vx_new, vz_new,
                           k7x, k7z, k7vx, k7vz, out4)
                    if out4[0] - x_plane > 0.0:
                        lo = mid
                    else:
                        hi = mid
                _dense(hi, h, x, z, vx, vz, k1x, k1z, k1vx, k1vz,
                       x_new, z_new, vx_new, vz_new,
                       k7x, k7z, k7vx, k7vz, out4)
                if out4[2] < 0.0:
                    have_closure = True
                    clo_t = t + hi * h
                    clo_x = out4[0]
                    clo_z = out4[1]
                    clo_vx = out4[2]
                    clo_vz = out4[3]
                    if stop_at_closure:
                        theta_end = hi
                        x_end = clo_x
                        z_end = clo_z
                        vx_end = clo_vx
                        vz_end = clo_vz
                        t_end = clo_t
                        truncated = True

        if vz * vz_end < 0.0:
            lo = 0.0
            hi = theta_end
            g_lo = vz
            for it in range(80):
                if (hi - lo) * h <= event_dt:
                    break
                mid = 0.5 * (lo + hi)
                _dense(mid, h, x, z, vx, vz, k1x, k1z, k1vx, k1vz,
                       x_new, z_new, vx_new, vz_new,
                       k7x, k7z, k7vx, k7vz, out4)
                if (g_lo > 0.0) == (out4[3] > 0.0):
                    lo = mid
                    g_lo = out4[3]
                else:
                    hi = mid
            th = 0.5 * (lo + hi)
            _dense(th, h, x, z, vx, vz, k1x, k1z, k1vx, k1vz,
                   x_new, z_new, vx_new, vz_new,
                   k7x, k7z, k7vx, k7vz, out4)
            if fabs(out4[1]) > best_apex_absz:
                best_apex_absz = fabs(out4[1])
                apex_t = t + th * h
                apex_x = out4[0]
                apex_z = out4[1]
                apex_vx = out4[2]
                apex_vz = out4[3]

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
                for it in range(80):
                    if (hi - lo) * h <= event_dt:
                        break
                    mid = 0.5 * (lo + hi)
                    _dense(mid, h, x, z, vx, vz, k1x, k1z, k1vx, k1vz,
                           x_new, z_new, vx_new, vz_new,
                           k7x, k7z, k7vx, k7vz, out4)
                    if (out4[0] - wx[i]) * out4[2] + (out4[1] - wz[i]) * out4[3] < 0.0:
                        lo = mid
                    else:
                        hi = mid
                th = 0.5 * (lo + hi)
                _dense(th, h, x, z, vx, vz, k1x, k1z, k1vx, k1vz,
                       x_new, z_new, vx_new, vz_new,
                       k7x, k7z, k7vx, k7vz, out4)
                dxp = out4[0] - wx[i]
                dzp = out4[1] - wz[i]
                dist = sqrt(dxp * dxp + dzp * dzp)
                if dist < peri_dist[i]:
                    peri_dist[i] = dist
                    peri_st[5 * i + 0] = t + th * h
                    peri_st[5 * i + 1] = out4[0]
                    peri_st[5 * i + 2] = out4[1]
                    peri_st[5 * i + 3] = out4[2]
                    peri_st[5 * i + 4] = out4[3]
                if wi[i] != 0.0 and dist * dist <= guard2:
                    status = STATUS_SINGULARITY
                    fail_wire = i
                    t_fail = t + th * h
            d_end = sqrt(dx1 * dx1 + dz1 * dz1)
            if d_end < peri_dist[i]:
                peri_dist[i] = d_end
                peri_st[5 * i + 0] = t_end
                peri_st[5 * i + 1] = x_end
                peri_st[5 * i + 2] = z_end
                peri_st[5 * i + 3] = vx_end
                peri_st[5 * i + 4] = vz_end
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
            _accel(x, z, n, wx, wz, wi, tiny_r2, alpha, out2)
            n_rhs += 1
            k1x = vx
            k1z = vz
            k1vx = out2[0]
            k1vz = out2[1]
            break
        k1x = k7x
        k1z = k7z
        k1vx = k7vx
        k1vz = k7vz

        if err_norm == 0.0:
            fac = _MAX_FACTOR
        else:
            fac = _SAFETY * pow(err_norm, -0.2)
            if fac > _MAX_FACTOR:
                fac = _MAX_FACTOR
            elif fac < _MIN_FACTOR:
                fac = _MIN_FACTOR
        h = h * fac

    if fabs(z) > best_apex_absz:
        best_apex_absz = fabs(z)
        apex_t = t
        apex_x = x
        apex_z = z
        apex_vx = vx
        apex_vz = vz

    peri_dist_list = [peri_dist[i] for i in range(n)]
    peri_state_list = [
        (peri_st[5 * i + 0], peri_st[5 * i + 1], peri_st[5 * i + 2],
         peri_st[5 * i + 3], peri_st[5 * i + 4])
        for i in range(n)
    ]
    if n:
        free(wx)
        free(wz)
        free(wi)
        free(peri_dist)
        free(peri_st)

    return {
        "status": status,
        "fail_wire": fail_wire,
        "t_fail": t_fail,
        "t": ts,
        "x": xs,
        "z": zs,
        "vx": vxs,
        "vz": vzs,
        "apex": (apex_t, apex_x, apex_z, apex_vx, apex_vz),
        "periapsis_distance": peri_dist_list,
        "periapsis_state": peri_state_list,
        "closure": (clo_t, clo_x, clo_z, clo_vx, clo_vz) if have_closure else None,
        "n_steps": n_steps,
        "n_rejected": n_rejected,
        "n_rhs": n_rhs,
        "min_step": min_step,
    }
