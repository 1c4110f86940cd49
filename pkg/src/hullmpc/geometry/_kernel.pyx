# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled GJK distance kernel; twin of ``_kernel_py``.

Same status codes and termination rules as the pure-Python fallback. Kept
IEEE-strict (no fast-math) so both backends agree to rounding error.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

STATUS_DISJOINT = 0
STATUS_COLLISION = 1
STATUS_NO_CONVERGENCE = 2

cdef double _DEGENERATE = 1e-30


cdef int _support_index(const double[:, ::1] verts, double dx, double dy, double dz) noexcept nogil:
    cdef int best = 0
    cdef int i
    cdef double bestdot = verts[0, 0] * dx + verts[0, 1] * dy + verts[0, 2] * dz
    cdef double d
    for i in range(1, verts.shape[0]):
        d = verts[i, 0] * dx + verts[i, 1] * dy + verts[i, 2] * dz
        if d > bestdot:
            bestdot = d
            best = i
    return best


cdef struct SegResult:
    double vx, vy, vz, t
    int keep


cdef SegResult _closest_segment(double ax, double ay, double az,
                                double bx, double by, double bz) noexcept nogil:
    cdef SegResult r
    cdef double abx = bx - ax
    cdef double aby = by - ay
    cdef double abz = bz - az
    cdef double den = abx * abx + aby * aby + abz * abz
    cdef double num = -(ax * abx + ay * aby + az * abz)
    cdef double t
    if den <= _DEGENERATE or num <= 0.0:
        r.vx, r.vy, r.vz, r.t, r.keep = ax, ay, az, 0.0, 1
        return r
    if num >= den:
        r.vx, r.vy, r.vz, r.t, r.keep = bx, by, bz, 1.0, 2
        return r
    t = num / den
    r.vx, r.vy, r.vz, r.t, r.keep = ax + t * abx, ay + t * aby, az + t * abz, t, 3
    return r


cdef struct TriResult:
    double vx, vy, vz, l0, l1, l2
    int mask


cdef TriResult _closest_triangle(double* a, double* b, double* c) noexcept nogil:
    cdef TriResult r
    cdef SegResult sr
    cdef double abx = b[0] - a[0]
    cdef double aby = b[1] - a[1]
    cdef double abz = b[2] - a[2]
    cdef double acx = c[0] - a[0]
    cdef double acy = c[1] - a[1]
    cdef double acz = c[2] - a[2]
    cdef double d1 = -(abx * a[0] + aby * a[1] + abz * a[2])
    cdef double d2 = -(acx * a[0] + acy * a[1] + acz * a[2])
    cdef double d3, d4, d5, d6, vc, vb, va, t, denom, inv, la, lb, lc
    cdef double best_dsq, dsq
    cdef int have_best = 0
    if d1 <= 0.0 and d2 <= 0.0:
        r.vx, r.vy, r.vz = a[0], a[1], a[2]
        r.l0, r.l1, r.l2, r.mask = 1.0, 0.0, 0.0, 1
        return r
    d3 = -(abx * b[0] + aby * b[1] + abz * b[2])
    d4 = -(acx * b[0] + acy * b[1] + acz * b[2])
    if d3 >= 0.0 and d4 <= d3:
        r.vx, r.vy, r.vz = b[0], b[1], b[2]
        r.l0, r.l1, r.l2, r.mask = 0.0, 1.0, 0.0, 2
        return r
    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0 and (d1 - d3) > _DEGENERATE:
        t = d1 / (d1 - d3)
        r.vx, r.vy, r.vz = a[0] + t * abx, a[1] + t * aby, a[2] + t * abz
        r.l0, r.l1, r.l2, r.mask = 1.0 - t, t, 0.0, 3
        return r
    d5 = -(abx * c[0] + aby * c[1] + abz * c[2])
    d6 = -(acx * c[0] + acy * c[1] + acz * c[2])
    if d6 >= 0.0 and d5 <= d6:
        r.vx, r.vy, r.vz = c[0], c[1], c[2]
        r.l0, r.l1, r.l2, r.mask = 0.0, 0.0, 1.0, 4
        return r
    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0 and (d2 - d6) > _DEGENERATE:
        t = d2 / (d2 - d6)
        r.vx, r.vy, r.vz = a[0] + t * acx, a[1] + t * acy, a[2] + t * acz
        r.l0, r.l1, r.l2, r.mask = 1.0 - t, 0.0, t, 5
        return r
    va = d3 * d6 - d5 * d4
    if va <= 0.0 and (d4 - d3) >= 0.0 and (d5 - d6) >= 0.0 \
            and ((d4 - d3) + (d5 - d6)) > _DEGENERATE:
        t = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        r.vx = b[0] + t * (c[0] - b[0])
        r.vy = b[1] + t * (c[1] - b[1])
        r.vz = b[2] + t * (c[2] - b[2])
        r.l0, r.l1, r.l2, r.mask = 0.0, 1.0 - t, t, 6
        return r
    denom = va + vb + vc
    if denom <= _DEGENERATE:
        # collinear triangle: best of the three edges (AB, AC, BC)
        best_dsq = 0.0
        sr = _closest_segment(a[0], a[1], a[2], b[0], b[1], b[2])
        best_dsq = sr.vx * sr.vx + sr.vy * sr.vy + sr.vz * sr.vz
        r.vx, r.vy, r.vz = sr.vx, sr.vy, sr.vz
        r.l0 = 1.0 - sr.t if (sr.keep & 1) else 0.0
        r.l1 = sr.t if (sr.keep & 2) else 0.0
        if sr.keep == 2:
            r.l1 = 1.0
        r.l2 = 0.0
        r.mask = sr.keep
        sr = _closest_segment(a[0], a[1], a[2], c[0], c[1], c[2])
        dsq = sr.vx * sr.vx + sr.vy * sr.vy + sr.vz * sr.vz
        if dsq < best_dsq:
            best_dsq = dsq
            r.vx, r.vy, r.vz = sr.vx, sr.vy, sr.vz
            r.l0 = 1.0 - sr.t if (sr.keep & 1) else 0.0
            r.l1 = 0.0
            r.l2 = sr.t if (sr.keep & 2) else 0.0
            if sr.keep == 2:
                r.l2 = 1.0
            r.mask = (1 if (sr.keep & 1) else 0) | (4 if (sr.keep & 2) else 0)
        sr = _closest_segment(b[0], b[1], b[2], c[0], c[1], c[2])
        dsq = sr.vx * sr.vx + sr.vy * sr.vy + sr.vz * sr.vz
        if dsq < best_dsq:
            r.vx, r.vy, r.vz = sr.vx, sr.vy, sr.vz
            r.l0 = 0.0
            r.l1 = 1.0 - sr.t if (sr.keep & 1) else 0.0
            r.l2 = sr.t if (sr.keep & 2) else 0.0
            if sr.keep == 2:
                r.l2 = 1.0
            r.mask = (2 if (sr.keep & 1) else 0) | (4 if (sr.keep & 2) else 0)
        return r
    inv = 1.0 / denom
    lb = vb * inv
    lc = vc * inv
    la = 1.0 - lb - lc
    r.vx = a[0] * la + b[0] * lb + c[0] * lc
    r.vy = a[1] * la + b[1] * lb + c[1] * lc
    r.vz = a[2] * la + b[2] * lb + c[2] * lc
    r.l0, r.l1, r.l2, r.mask = la, lb, lc, 7
    return r


def gjk_pair(verts_a, verts_b, double tol=1e-9, int max_iter=128):
    """Compiled twin of ``_kernel_py.gjk_pair``; see there for the contract."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] A = np.ascontiguousarray(
        np.asarray(verts_a, dtype=np.float64).reshape(-1, 3))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] B = np.ascontiguousarray(
        np.asarray(verts_b, dtype=np.float64).reshape(-1, 3))
    cdef const double[:, ::1] av = A
    cdef const double[:, ::1] bv = B

    cdef double w[4][3]
    cdef int ias[4]
    cdef int ibs[4]
    cdef double lam[4]
    cdef int nw = 0

    cdef int i, j, k, ia, ib, it, n, mask, best_face_mask, keep_n
    cdef double dx, dy, dz, vx, vy, vz, dsq, prev_dsq, gap, wx, wy, wz
    cdef double cax = 0.0, cay = 0.0, caz = 0.0, cbx = 0.0, cby = 0.0, cbz = 0.0
    cdef bint contained, converged, collision, outside_any, degenerate_any, degenerate, outside
    cdef double signp, signd, nx, ny, nz
    cdef TriResult tr
    cdef SegResult sr
    cdef double face_lam[4]
    cdef double best_dsq
    cdef double pax, pay, paz, pbx, pby, pbz, gx, gy, gz, dist
    cdef int fi, fj, fk, fop
    cdef int faces[4][4]
    faces[0][0], faces[0][1], faces[0][2], faces[0][3] = 0, 1, 2, 3
    faces[1][0], faces[1][1], faces[1][2], faces[1][3] = 0, 1, 3, 2
    faces[2][0], faces[2][1], faces[2][2], faces[2][3] = 0, 2, 3, 1
    faces[3][0], faces[3][1], faces[3][2], faces[3][3] = 1, 2, 3, 0

    for i in range(av.shape[0]):
        cax += av[i, 0]
        cay += av[i, 1]
        caz += av[i, 2]
    cax /= av.shape[0]
    cay /= av.shape[0]
    caz /= av.shape[0]
    for i in range(bv.shape[0]):
        cbx += bv[i, 0]
        cby += bv[i, 1]
        cbz += bv[i, 2]
    cbx /= bv.shape[0]
    cby /= bv.shape[0]
    cbz /= bv.shape[0]
    dx, dy, dz = cbx - cax, cby - cay, cbz - caz
    if dx * dx + dy * dy + dz * dz <= _DEGENERATE:
        dx, dy, dz = 1.0, 0.0, 0.0

    ia = _support_index(av, dx, dy, dz)
    ib = _support_index(bv, -dx, -dy, -dz)
    w[0][0] = av[ia, 0] - bv[ib, 0]
    w[0][1] = av[ia, 1] - bv[ib, 1]
    w[0][2] = av[ia, 2] - bv[ib, 2]
    ias[0] = ia
    ibs[0] = ib
    lam[0] = 1.0
    nw = 1

    prev_dsq = np.inf
    converged = False
    collision = False
    it = 0
    while it < max_iter:
        it += 1
        contained = False
        if nw == 1:
            vx, vy, vz = w[0][0], w[0][1], w[0][2]
            lam[0] = 1.0
            mask = 1
        elif nw == 2:
            sr = _closest_segment(w[0][0], w[0][1], w[0][2],
                                  w[1][0], w[1][1], w[1][2])
            vx, vy, vz = sr.vx, sr.vy, sr.vz
            if sr.keep == 1:
                lam[0], lam[1] = 1.0, 0.0
            elif sr.keep == 2:
                lam[0], lam[1] = 0.0, 1.0
            else:
                lam[0], lam[1] = 1.0 - sr.t, sr.t
            mask = sr.keep
        elif nw == 3:
            tr = _closest_triangle(&w[0][0], &w[1][0], &w[2][0])
            vx, vy, vz = tr.vx, tr.vy, tr.vz
            lam[0], lam[1], lam[2] = tr.l0, tr.l1, tr.l2
            mask = tr.mask
        else:
            outside_any = False
            degenerate_any = False
            best_dsq = np.inf
            best_face_mask = 0
            vx = vy = vz = 0.0
            for k in range(4):
                fi, fj, fk, fop = faces[k][0], faces[k][1], faces[k][2], faces[k][3]
                nx = (w[fj][1] - w[fi][1]) * (w[fk][2] - w[fi][2]) \
                    - (w[fj][2] - w[fi][2]) * (w[fk][1] - w[fi][1])
                ny = (w[fj][2] - w[fi][2]) * (w[fk][0] - w[fi][0]) \
                    - (w[fj][0] - w[fi][0]) * (w[fk][2] - w[fi][2])
                nz = (w[fj][0] - w[fi][0]) * (w[fk][1] - w[fi][1]) \
                    - (w[fj][1] - w[fi][1]) * (w[fk][0] - w[fi][0])
                signp = -(nx * w[fi][0] + ny * w[fi][1] + nz * w[fi][2])
                signd = nx * (w[fop][0] - w[fi][0]) + ny * (w[fop][1] - w[fi][1]) \
                    + nz * (w[fop][2] - w[fi][2])
                degenerate = (signd <= _DEGENERATE and signd >= -_DEGENERATE)
                outside = (not degenerate) and (signp * signd < 0.0)
                if degenerate:
                    degenerate_any = True
                if outside:
                    outside_any = True
                if outside or degenerate:
                    tr = _closest_triangle(&w[fi][0], &w[fj][0], &w[fk][0])
                    dsq = tr.vx * tr.vx + tr.vy * tr.vy + tr.vz * tr.vz
                    if dsq < best_dsq:
                        best_dsq = dsq
                        vx, vy, vz = tr.vx, tr.vy, tr.vz
                        face_lam[0] = face_lam[1] = face_lam[2] = face_lam[3] = 0.0
                        face_lam[fi] = tr.l0
                        face_lam[fj] = tr.l1
                        face_lam[fk] = tr.l2
                        best_face_mask = 0
                        if tr.mask & 1:
                            best_face_mask |= 1 << fi
                        if tr.mask & 2:
                            best_face_mask |= 1 << fj
                        if tr.mask & 4:
                            best_face_mask |= 1 << fk
            if not outside_any and not degenerate_any:
                contained = True
                mask = 15
            elif best_face_mask == 0:
                vx, vy, vz = w[0][0], w[0][1], w[0][2]
                lam[0], lam[1], lam[2], lam[3] = 1.0, 0.0, 0.0, 0.0
                mask = 1
            else:
                lam[0], lam[1], lam[2], lam[3] = \
                    face_lam[0], face_lam[1], face_lam[2], face_lam[3]
                mask = best_face_mask

        # prune the simplex to the supporting feature
        keep_n = 0
        for i in range(nw):
            if mask & (1 << i):
                if keep_n != i:
                    w[keep_n][0] = w[i][0]
                    w[keep_n][1] = w[i][1]
                    w[keep_n][2] = w[i][2]
                    ias[keep_n] = ias[i]
                    ibs[keep_n] = ibs[i]
                    lam[keep_n] = lam[i]
                keep_n += 1
        nw = keep_n

        dsq = vx * vx + vy * vy + vz * vz
        if contained or dsq <= tol * tol:
            collision = True
            converged = True
            break
        if dsq >= prev_dsq:
            converged = True
            break
        prev_dsq = dsq
        ia = _support_index(av, -vx, -vy, -vz)
        ib = _support_index(bv, vx, vy, vz)
        n = 0
        for i in range(nw):
            if ias[i] == ia and ibs[i] == ib:
                n = 1
                break
        if n:
            converged = True
            break
        wx = av[ia, 0] - bv[ib, 0]
        wy = av[ia, 1] - bv[ib, 1]
        wz = av[ia, 2] - bv[ib, 2]
        gap = dsq - (vx * wx + vy * wy + vz * wz)
        if gap <= tol * sqrt(dsq):
            converged = True
            break
        w[nw][0] = wx
        w[nw][1] = wy
        w[nw][2] = wz
        ias[nw] = ia
        ibs[nw] = ib
        lam[nw] = 0.0
        nw += 1

    if not converged:
        return STATUS_NO_CONVERGENCE, 0.0, np.zeros(3), np.zeros(3), it
    if collision:
        return STATUS_COLLISION, 0.0, np.zeros(3), np.zeros(3), it

    pax = pay = paz = pbx = pby = pbz = 0.0
    for i in range(nw):
        pax += lam[i] * av[ias[i], 0]
        pay += lam[i] * av[ias[i], 1]
        paz += lam[i] * av[ias[i], 2]
        pbx += lam[i] * bv[ibs[i], 0]
        pby += lam[i] * bv[ibs[i], 1]
        pbz += lam[i] * bv[ibs[i], 2]
    gx, gy, gz = pax - pbx, pay - pby, paz - pbz
    dist = (gx * gx + gy * gy + gz * gz) ** 0.5
    if dist <= tol:
        return STATUS_COLLISION, 0.0, np.zeros(3), np.zeros(3), it
    return (STATUS_DISJOINT, dist,
            np.array([pax, pay, paz]), np.array([pbx, pby, pbz]), it)
